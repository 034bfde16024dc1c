//! Core domain types: flows, switches, rules, forwarding paths, and the
//! per-switch cache occupancy with its capacity constraint.

use std::fmt;

use thiserror::Error;

use crate::traffic::TrafficModel;

/// Identifies a flow. Ids are dense in `[0, n)` within one scenario.
#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct FlowId(pub u32);

impl FlowId {
    pub fn index(self) -> usize {
        self.0 as usize
    }
}

impl fmt::Display for FlowId {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}", self.0)
    }
}

/// Identifies a switch. Ids are dense in `[0, m)` within one scenario.
#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct SwitchId(pub u32);

impl SwitchId {
    pub fn index(self) -> usize {
        self.0 as usize
    }
}

impl fmt::Display for SwitchId {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}", self.0)
    }
}

/// A forwarding rule. The model pairs exactly one exact-match rule with each
/// flow, so a rule is identified by the flow it forwards.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub struct Rule {
    pub flow: FlowId,
}

/// A switch with a bounded rule store.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Switch {
    pub id: SwitchId,
    /// Number of rule slots; at least 1.
    pub capacity: usize,
}

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum ModelError {
    #[error("switch {0} has zero capacity")]
    ZeroCapacity(SwitchId),
    #[error("path is empty")]
    EmptyPath,
    #[error("path visits switch {0} twice")]
    DuplicateSwitch(SwitchId),
}

impl Switch {
    pub fn new(id: SwitchId, capacity: usize) -> Result<Self, ModelError> {
        if capacity == 0 {
            return Err(ModelError::ZeroCapacity(id));
        }
        Ok(Switch { id, capacity })
    }
}

/// An ordered list of distinct switches a flow's packets traverse.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Path(Vec<SwitchId>);

impl Path {
    pub fn new(switches: Vec<SwitchId>) -> Result<Self, ModelError> {
        if switches.is_empty() {
            return Err(ModelError::EmptyPath);
        }
        for (i, s) in switches.iter().enumerate() {
            if switches[..i].contains(s) {
                return Err(ModelError::DuplicateSwitch(*s));
            }
        }
        Ok(Path(switches))
    }

    pub fn switches(&self) -> &[SwitchId] {
        &self.0
    }

    pub fn len(&self) -> usize {
        self.0.len()
    }

    pub fn is_empty(&self) -> bool {
        false // a Path is non-empty by construction
    }

    pub fn contains(&self, switch: SwitchId) -> bool {
        self.0.contains(&switch)
    }

    pub fn iter(&self) -> std::slice::Iter<'_, SwitchId> {
        self.0.iter()
    }
}

impl<'a> IntoIterator for &'a Path {
    type Item = &'a SwitchId;
    type IntoIter = std::slice::Iter<'a, SwitchId>;
    fn into_iter(self) -> Self::IntoIter {
        self.0.iter()
    }
}

/// A network flow: identity, forwarding path, and traffic model.
///
/// A flow is predictable exactly when its traffic model is periodic, so the
/// predicate is derived rather than stored.
#[derive(Debug, Clone, PartialEq)]
pub struct Flow {
    pub id: FlowId,
    pub path: Path,
    pub traffic: TrafficModel,
}

impl Flow {
    pub fn is_predictable(&self) -> bool {
        matches!(self.traffic, TrafficModel::Periodic(_))
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum CacheError {
    #[error("unknown flow id {0}")]
    UnknownFlow(FlowId),
    #[error("unknown switch id {0}")]
    UnknownSwitch(SwitchId),
    #[error("switch {switch} is full ({capacity} rules); evict before installing")]
    SwitchFull { switch: SwitchId, capacity: usize },
    #[error("rule of flow {flow} is already cached in switch {switch}")]
    AlreadyCached { flow: FlowId, switch: SwitchId },
    #[error("rule of flow {flow} is not cached in switch {switch}")]
    NotCached { flow: FlowId, switch: SwitchId },
}

/// Which rules are cached where. Each switch owns its entry list, so the
/// capacity bound is enforced on every install; installs into a full switch
/// are rejected, never silently dropped. Entries are kept in install order,
/// which replacement policies rely on for deterministic tie-breaking.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct CacheAssignment {
    n_flows: u32,
    switches: Vec<SwitchSlots>,
}

#[derive(Debug, Clone, PartialEq, Eq)]
struct SwitchSlots {
    capacity: usize,
    flows: Vec<FlowId>,
}

impl CacheAssignment {
    /// Builds an empty assignment. `switches` must be indexed by id.
    pub fn new(switches: &[Switch], n_flows: usize) -> Self {
        debug_assert!(switches.iter().enumerate().all(|(j, s)| s.id.index() == j));
        CacheAssignment {
            n_flows: n_flows as u32,
            switches: switches
                .iter()
                .map(|s| SwitchSlots { capacity: s.capacity, flows: Vec::with_capacity(s.capacity) })
                .collect(),
        }
    }

    pub fn n_switches(&self) -> usize {
        self.switches.len()
    }

    fn check_flow(&self, flow: FlowId) -> Result<(), CacheError> {
        if flow.0 < self.n_flows {
            Ok(())
        } else {
            Err(CacheError::UnknownFlow(flow))
        }
    }

    fn slots(&self, switch: SwitchId) -> Result<&SwitchSlots, CacheError> {
        self.switches.get(switch.index()).ok_or(CacheError::UnknownSwitch(switch))
    }

    /// The caching indicator: is the rule of `flow` cached in `switch`?
    pub fn is_cached(&self, flow: FlowId, switch: SwitchId) -> Result<bool, CacheError> {
        self.check_flow(flow)?;
        Ok(self.slots(switch)?.flows.contains(&flow))
    }

    /// Number of rules currently cached in `switch`.
    pub fn cached_count(&self, switch: SwitchId) -> Result<usize, CacheError> {
        Ok(self.slots(switch)?.flows.len())
    }

    pub fn capacity(&self, switch: SwitchId) -> Result<usize, CacheError> {
        Ok(self.slots(switch)?.capacity)
    }

    pub fn is_full(&self, switch: SwitchId) -> Result<bool, CacheError> {
        let s = self.slots(switch)?;
        Ok(s.flows.len() >= s.capacity)
    }

    /// Cached rules of `switch` in install order (oldest first).
    pub fn entries(&self, switch: SwitchId) -> Result<&[FlowId], CacheError> {
        Ok(&self.slots(switch)?.flows)
    }

    pub fn install(&mut self, flow: FlowId, switch: SwitchId) -> Result<(), CacheError> {
        self.check_flow(flow)?;
        let slots = self
            .switches
            .get_mut(switch.index())
            .ok_or(CacheError::UnknownSwitch(switch))?;
        if slots.flows.contains(&flow) {
            return Err(CacheError::AlreadyCached { flow, switch });
        }
        if slots.flows.len() >= slots.capacity {
            return Err(CacheError::SwitchFull { switch, capacity: slots.capacity });
        }
        slots.flows.push(flow);
        Ok(())
    }

    pub fn evict(&mut self, flow: FlowId, switch: SwitchId) -> Result<(), CacheError> {
        self.check_flow(flow)?;
        let slots = self
            .switches
            .get_mut(switch.index())
            .ok_or(CacheError::UnknownSwitch(switch))?;
        match slots.flows.iter().position(|f| *f == flow) {
            Some(i) => {
                slots.flows.remove(i);
                Ok(())
            }
            None => Err(CacheError::NotCached { flow, switch }),
        }
    }

    /// First switch exceeding its capacity, if any. Occupancy can never
    /// exceed capacity through `install`, so this exists as an independent
    /// audit for the post-event sweep in tests.
    pub fn capacity_violation(&self) -> Option<SwitchId> {
        self.switches
            .iter()
            .position(|s| s.flows.len() > s.capacity)
            .map(|j| SwitchId(j as u32))
    }
}
