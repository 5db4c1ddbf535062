//! Max flow on small rational networks and bottleneck sets of an eating stage.
//!
//! A stage of the eating procedure is described by the active agents, the
//! best set of available objects of each, the mass already credited to each
//! agent, and the remaining mass of every object. Its bottleneck is the agent
//! set `S` minimising
//!
//! ```text
//! (remaining(C(S)) + credited(S)) / |S|
//! ```
//!
//! where `C(S)` is the union of the best sets of `S`. With nothing credited
//! this is the per-capita claim `remaining(C(S)) / |S|`. The minimum is the
//! eating level at which `S` exhausts `C(S)`.

use std::collections::VecDeque;

use num_traits::{Signed, Zero};

use crate::error::{Error, Result};
use crate::limits;
use crate::rational::{self, Rational};

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Arc {
    pub from: usize,
    pub to: usize,
    pub capacity: Rational,
}

#[derive(Clone, Debug)]
pub struct FlowNetwork {
    num_nodes: usize,
    source: usize,
    sink: usize,
    arcs: Vec<Arc>,
}

impl FlowNetwork {
    pub fn new(num_nodes: usize, source: usize, sink: usize) -> Result<Self> {
        if source >= num_nodes || sink >= num_nodes || source == sink {
            return Err(Error::MalformedNetwork(format!(
                "source {source} / sink {sink} invalid for {num_nodes} nodes"
            )));
        }
        Ok(Self { num_nodes, source, sink, arcs: Vec::new() })
    }

    pub fn add_arc(&mut self, from: usize, to: usize, capacity: Rational) -> Result<usize> {
        if from >= self.num_nodes || to >= self.num_nodes || from == to {
            return Err(Error::MalformedNetwork(format!("arc {from} -> {to}")));
        }
        if capacity.is_negative() {
            return Err(Error::MalformedNetwork(format!(
                "arc {from} -> {to} has negative capacity {capacity}"
            )));
        }
        self.arcs.push(Arc { from, to, capacity });
        Ok(self.arcs.len() - 1)
    }

    pub fn num_nodes(&self) -> usize {
        self.num_nodes
    }

    pub fn source(&self) -> usize {
        self.source
    }

    pub fn sink(&self) -> usize {
        self.sink
    }

    pub fn arcs(&self) -> &[Arc] {
        &self.arcs
    }
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct FlowResult {
    pub value: Rational,
    /// Flow on each arc, indexed like [`FlowNetwork::arcs`].
    pub flows: Vec<Rational>,
    /// Nodes reachable from the source in the final residual graph
    /// (the source side of the minimal minimum cut).
    pub source_side: Vec<bool>,
    /// Nodes that can still reach the sink in the final residual graph
    /// (the sink side of the maximal minimum cut).
    pub sink_side: Vec<bool>,
}

impl FlowResult {
    /// Checks capacity bounds and conservation at every inner node.
    pub fn check(&self, net: &FlowNetwork) -> Result<()> {
        let mut balance = vec![Rational::zero(); net.num_nodes];
        for (a, f) in net.arcs.iter().zip(&self.flows) {
            if f.is_negative() || *f > a.capacity {
                return Err(Error::Internal(format!("flow {f} outside [0, {}]", a.capacity)));
            }
            balance[a.from] -= f;
            balance[a.to] += f;
        }
        for (v, b) in balance.iter().enumerate() {
            let expected = if v == net.source {
                -self.value.clone()
            } else if v == net.sink {
                self.value.clone()
            } else {
                Rational::zero()
            };
            if *b != expected {
                return Err(Error::Internal(format!("conservation fails at node {v}")));
            }
        }
        Ok(())
    }
}

/// Edmonds–Karp: augment along shortest residual paths (BFS, arcs in
/// insertion order) until none remains.
pub fn max_flow(net: &FlowNetwork) -> Result<FlowResult> {
    // Residual edge 2k is arc k forward, 2k+1 its reverse.
    let mut adj = vec![Vec::new(); net.num_nodes];
    for (k, a) in net.arcs.iter().enumerate() {
        adj[a.from].push(2 * k);
        adj[a.to].push(2 * k + 1);
    }
    let mut flows = vec![Rational::zero(); net.arcs.len()];
    let residual = |flows: &[Rational], e: usize| -> Rational {
        let k = e / 2;
        if e % 2 == 0 {
            &net.arcs[k].capacity - &flows[k]
        } else {
            flows[k].clone()
        }
    };
    let head = |e: usize| if e % 2 == 0 { net.arcs[e / 2].to } else { net.arcs[e / 2].from };
    let mut value = Rational::zero();

    loop {
        let mut pred: Vec<Option<usize>> = vec![None; net.num_nodes];
        let mut seen = vec![false; net.num_nodes];
        seen[net.source] = true;
        let mut queue = VecDeque::from([net.source]);
        while let Some(v) = queue.pop_front() {
            if v == net.sink {
                break;
            }
            for &e in &adj[v] {
                let w = head(e);
                if !seen[w] && residual(&flows, e).is_positive() {
                    seen[w] = true;
                    pred[w] = Some(e);
                    queue.push_back(w);
                }
            }
        }
        if !seen[net.sink] {
            break;
        }
        let mut path = Vec::new();
        let mut v = net.sink;
        while v != net.source {
            let e = pred[v].expect("BFS tree reaches the sink");
            path.push(e);
            v = if e % 2 == 0 { net.arcs[e / 2].from } else { net.arcs[e / 2].to };
        }
        let delta = path
            .iter()
            .map(|&e| residual(&flows, e))
            .min()
            .expect("non-empty augmenting path");
        for &e in &path {
            if e % 2 == 0 {
                flows[e / 2] += &delta;
            } else {
                flows[e / 2] -= &delta;
            }
        }
        value += delta;
    }

    let source_side = reach(net, &adj, &flows, net.source, false);
    let sink_side = reach(net, &adj, &flows, net.sink, true);
    let result = FlowResult { value, flows, source_side, sink_side };
    result.check(net)?;
    Ok(result)
}

/// Residual reachability from `start`, forwards or (with `backwards`)
/// towards `start`.
fn reach(net: &FlowNetwork, adj: &[Vec<usize>], flows: &[Rational], start: usize, backwards: bool) -> Vec<bool> {
    let mut seen = vec![false; net.num_nodes];
    seen[start] = true;
    let mut queue = VecDeque::from([start]);
    while let Some(v) = queue.pop_front() {
        for &e in &adj[v] {
            let k = e / 2;
            let a = &net.arcs[k];
            let forward = e % 2 == 0;
            // Walking edge e out of v; in backwards mode we need the residual
            // edge pointing *into* v, i.e. the opposite direction of e.
            let usable = if forward != backwards {
                flows[k] < a.capacity
            } else {
                flows[k].is_positive()
            };
            let w = if forward { a.to } else { a.from };
            if usable && !seen[w] {
                seen[w] = true;
                queue.push_back(w);
            }
        }
    }
    seen
}

/// One stage of the eating procedure.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct StageState {
    /// Active agents (any labels, typically 0-based agent indices).
    pub agents: Vec<usize>,
    /// Best set of 0-based objects for each active agent, aligned with `agents`.
    pub best_sets: Vec<Vec<usize>>,
    /// Mass already credited to each active agent, aligned with `agents`.
    pub credited: Vec<Rational>,
    /// Remaining mass of every object.
    pub remaining: Vec<Rational>,
}

impl StageState {
    /// A fresh stage: nothing credited yet.
    pub fn new(agents: Vec<usize>, best_sets: Vec<Vec<usize>>, remaining: Vec<Rational>) -> Self {
        let credited = vec![Rational::zero(); agents.len()];
        Self { agents, best_sets, credited, remaining }
    }

    fn validate(&self) -> Result<()> {
        if self.agents.is_empty() {
            return Err(Error::Internal("bottleneck search with no active agent".into()));
        }
        if self.best_sets.len() != self.agents.len() || self.credited.len() != self.agents.len() {
            return Err(Error::Internal("stage state vectors are not aligned".into()));
        }
        for (pos, set) in self.best_sets.iter().enumerate() {
            if set.is_empty() {
                return Err(Error::Internal(format!("agent {} has an empty best set", self.agents[pos])));
            }
            for &o in set {
                match self.remaining.get(o) {
                    Some(m) if m.is_positive() => {}
                    _ => {
                        return Err(Error::Internal(format!(
                            "agent {} lists exhausted or unknown object {o}",
                            self.agents[pos]
                        )))
                    }
                }
            }
        }
        Ok(())
    }

    /// `C(S)` for agent positions `members`.
    pub fn claimed_objects(&self, members: &[usize]) -> Vec<usize> {
        let mut objs: Vec<usize> = members.iter().flat_map(|&p| self.best_sets[p].iter().copied()).collect();
        objs.sort_unstable();
        objs.dedup();
        objs
    }

    /// `(remaining(C(S)) + credited(S)) / |S|` for agent positions `members`.
    pub fn ratio(&self, members: &[usize]) -> Rational {
        let mass = rational::sum(self.claimed_objects(members).iter().map(|&o| &self.remaining[o]));
        let credit = rational::sum(members.iter().map(|&p| &self.credited[p]));
        (mass + credit) / Rational::from_integer(members.len().into())
    }
}

/// The bipartite network of a stage at eating level `lambda`: source arcs
/// `lambda - credited`, unbounded agent-object arcs, object arcs `remaining`.
#[derive(Clone, Debug)]
pub struct LevelNetwork {
    pub net: FlowNetwork,
    /// `(agent position, object, arc index)` for every agent-object arc.
    pub claims: Vec<(usize, usize, usize)>,
    pub agent_nodes: Vec<usize>,
}

impl LevelNetwork {
    pub fn build(state: &StageState, lambda: &Rational) -> Result<Self> {
        let k = state.agents.len();
        let m = state.remaining.len();
        let (source, sink) = (0, 1);
        let agent_node = |p: usize| 2 + p;
        let object_node = |o: usize| 2 + k + o;
        let mut net = FlowNetwork::new(2 + k + m, source, sink)?;
        let mut big = rational::sum(&state.remaining) + rational::one();
        for p in 0..k {
            let cap = lambda - &state.credited[p];
            if cap.is_negative() {
                return Err(Error::Internal(format!(
                    "level {lambda} is below the mass credited to agent {}",
                    state.agents[p]
                )));
            }
            big += &cap;
            net.add_arc(source, agent_node(p), cap)?;
        }
        let mut claims = Vec::new();
        for (p, set) in state.best_sets.iter().enumerate() {
            for &o in set {
                let arc = net.add_arc(agent_node(p), object_node(o), big.clone())?;
                claims.push((p, o, arc));
            }
        }
        for (o, mass) in state.remaining.iter().enumerate() {
            if mass.is_positive() {
                net.add_arc(object_node(o), sink, mass.clone())?;
            }
        }
        Ok(Self { net, claims, agent_nodes: (0..k).map(agent_node).collect() })
    }
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct BottleneckResult {
    /// The minimum ratio, i.e. the eating level at which the bottleneck set
    /// exhausts its claimed objects.
    pub ratio: Rational,
    /// The maximal minimising agent set (agent labels, ascending).
    pub agents: Vec<usize>,
    /// `C(S*)`, ascending.
    pub objects: Vec<usize>,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Default)]
pub enum BottleneckEngine {
    /// Dinkelbach iteration on the level with a min-cut oracle.
    #[default]
    Parametric,
    /// Every non-empty subset of active agents.
    Enumeration,
}

pub fn find_bottleneck(state: &StageState, engine: BottleneckEngine) -> Result<BottleneckResult> {
    state.validate()?;
    let positions = match engine {
        BottleneckEngine::Parametric => parametric(state)?,
        BottleneckEngine::Enumeration => enumeration(state)?,
    };
    Ok(BottleneckResult {
        ratio: state.ratio(&positions),
        objects: state.claimed_objects(&positions),
        agents: positions.iter().map(|&p| state.agents[p]).collect(),
    })
}

fn parametric(state: &StageState) -> Result<Vec<usize>> {
    let all: Vec<usize> = (0..state.agents.len()).collect();
    let mut lambda = state.ratio(&all);
    loop {
        let level = LevelNetwork::build(state, &lambda)?;
        let flow = max_flow(&level.net)?;
        let demand = rational::sum(level.net.arcs().iter().filter(|a| a.from == 0).map(|a| &a.capacity));
        if flow.value == demand {
            // lambda is attained and nothing lies below it; the agents that
            // cannot reach the sink form the maximal tight set.
            let tight: Vec<usize> = all.iter().copied().filter(|&p| !flow.sink_side[level.agent_nodes[p]]).collect();
            if tight.is_empty() || state.ratio(&tight) != lambda {
                return Err(Error::Internal("parametric search lost the tight set".into()));
            }
            return Ok(tight);
        }
        let violated: Vec<usize> = all.iter().copied().filter(|&p| flow.source_side[level.agent_nodes[p]]).collect();
        let next = state.ratio(&violated);
        if violated.is_empty() || next >= lambda {
            return Err(Error::Internal("parametric search failed to decrease the level".into()));
        }
        lambda = next;
    }
}

fn enumeration(state: &StageState) -> Result<Vec<usize>> {
    let k = state.agents.len();
    limits::check("bottleneck enumeration", k, limits::BOTTLENECK_ENUMERATION_GUARD)?;
    let mut best: Option<Rational> = None;
    let mut union = 0u64;
    for mask in 1u64..(1u64 << k) {
        let members: Vec<usize> = (0..k).filter(|&p| mask >> p & 1 == 1).collect();
        let r = state.ratio(&members);
        match &best {
            Some(b) if r > *b => {}
            Some(b) if r == *b => union |= mask,
            _ => {
                best = Some(r);
                union = mask;
            }
        }
    }
    let members: Vec<usize> = (0..k).filter(|&p| union >> p & 1 == 1).collect();
    if Some(state.ratio(&members)) != best {
        return Err(Error::Internal("minimisers are not closed under union".into()));
    }
    Ok(members)
}
