//! Graph views of a landscape.
//!
//! The *incidence graph* has one node per landmark and links every edge
//! landmark to each of its endpoints; walking from a node across an edge to
//! another node takes two steps. Pen contents are not links. The pit is
//! never crossed: it can only be a start or an end point.

use std::collections::{BTreeMap, BTreeSet, VecDeque};

use petgraph::algo::{condensation, toposort};
use petgraph::graph::{DiGraph, NodeIndex};
use serde::{Deserialize, Serialize};

use crate::id::LandmarkId;
use crate::landscape::Landscape;
use crate::model::{AbstractKind, ConcreteType, Contribution, Payload, Tag};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Default, Serialize, Deserialize)]
#[serde(rename_all = "camelCase")]
pub enum DirectionPolicy {
    #[default]
    Any,
    ForwardOnly,
    BackwardOnly,
}

/// Constraints on which edges a walk may cross.
#[derive(Debug, Clone, PartialEq, Eq, Default, Serialize, Deserialize)]
#[serde(default)]
pub struct WayfarerConfig {
    pub max_edges: usize,
    /// Empty means every type.
    pub traversable_types: BTreeSet<ConcreteType>,
    pub excluded_tags: BTreeSet<Tag>,
    pub direction: DirectionPolicy,
}

impl WayfarerConfig {
    pub fn radius(max_edges: usize) -> Self {
        WayfarerConfig { max_edges, ..Default::default() }
    }

    pub fn traversable(&self, e: &Contribution) -> bool {
        (self.traversable_types.is_empty() || self.traversable_types.contains(&e.ctype))
            && !e.all_tags().iter().any(|t| self.excluded_tags.contains(*t))
    }

    /// May a walk pass from `from` into edge `e`, or from `e` on to `to`?
    fn direction_ok(&self, e: &Contribution, from: Option<LandmarkId>, to: Option<LandmarkId>) -> bool {
        let Payload::UnidirEdge { from: src, to: dst } = e.payload else { return true };
        match self.direction {
            DirectionPolicy::Any => true,
            DirectionPolicy::ForwardOnly => from.is_none_or(|x| x == src) && to.is_none_or(|y| y == dst),
            DirectionPolicy::BackwardOnly => from.is_none_or(|x| x == dst) && to.is_none_or(|y| y == src),
        }
    }
}

/// Landmarks one incidence step away from `x` that `cfg` lets a walk enter.
pub fn incidence_steps(l: &Landscape, x: LandmarkId, cfg: &WayfarerConfig) -> Vec<LandmarkId> {
    let mut out = Vec::new();
    if let Some(c) = l.get(x) {
        if c.is_edge() && cfg.traversable(c) {
            if let Some((a, b)) = c.endpoints() {
                for y in [a, b] {
                    if l.has_landmark(y) && cfg.direction_ok(c, None, Some(y)) {
                        out.push(y);
                    }
                }
            }
        }
    }
    for e in l.incident_edges(x) {
        if cfg.traversable(e) && cfg.direction_ok(e, Some(x), None) {
            out.push(e.id);
        }
    }
    out.sort();
    out.dedup();
    out
}

/// Breadth-first incidence-step counts from `start`, up to `max_steps`.
pub fn incidence_bfs(
    l: &Landscape,
    start: LandmarkId,
    cfg: &WayfarerConfig,
    max_steps: Option<usize>,
) -> BTreeMap<LandmarkId, usize> {
    let mut dist = BTreeMap::from([(start, 0usize)]);
    let mut queue = VecDeque::from([start]);
    while let Some(x) = queue.pop_front() {
        let d = dist[&x];
        if max_steps.is_some_and(|m| d >= m) || (x.is_pit() && x != start) {
            continue;
        }
        for y in incidence_steps(l, x, cfg) {
            if let std::collections::btree_map::Entry::Vacant(slot) = dist.entry(y) {
                slot.insert(d + 1);
                queue.push_back(y);
            }
        }
    }
    dist
}

/// Arcs `from → to` of every unidirectional edge.
pub fn unidirectional_arcs(l: &Landscape) -> Vec<(LandmarkId, LandmarkId)> {
    l.iter().filter(|c| c.kind() == AbstractKind::UnidirectionalEdge).filter_map(Contribution::endpoints).collect()
}

/// Longest-path lengths over the condensation of a directed graph.
/// `longest[v]` counts condensed hops on the longest path ending at `v`.
pub struct Condensed {
    component: BTreeMap<LandmarkId, NodeIndex>,
    longest_in: BTreeMap<NodeIndex, usize>,
    longest_out: BTreeMap<NodeIndex, usize>,
}

impl Condensed {
    pub fn new(arcs: &[(LandmarkId, LandmarkId)]) -> Self {
        let mut g: DiGraph<LandmarkId, ()> = DiGraph::new();
        let mut index = BTreeMap::new();
        for &(a, b) in arcs {
            let ia = *index.entry(a).or_insert_with(|| g.add_node(a));
            let ib = *index.entry(b).or_insert_with(|| g.add_node(b));
            g.add_edge(ia, ib, ());
        }
        let dag = condensation(g, true);
        let order = toposort(&dag, None).expect("a condensation is acyclic");
        let mut component = BTreeMap::new();
        for ix in dag.node_indices() {
            for id in &dag[ix] {
                component.insert(*id, ix);
            }
        }
        let mut longest_in: BTreeMap<NodeIndex, usize> = BTreeMap::new();
        for &ix in &order {
            let here = longest_in.get(&ix).copied().unwrap_or(0);
            longest_in.insert(ix, here);
            for next in dag.neighbors(ix) {
                let slot = longest_in.entry(next).or_insert(0);
                *slot = (*slot).max(here + 1);
            }
        }
        let mut longest_out: BTreeMap<NodeIndex, usize> = BTreeMap::new();
        for &ix in order.iter().rev() {
            let best = dag.neighbors(ix).map(|n| longest_out[&n] + 1).max().unwrap_or(0);
            longest_out.insert(ix, best);
        }
        Condensed { component, longest_in, longest_out }
    }

    pub fn depth_in(&self, id: LandmarkId) -> usize {
        self.component.get(&id).map_or(0, |ix| self.longest_in[ix])
    }

    pub fn depth_out(&self, id: LandmarkId) -> usize {
        self.component.get(&id).map_or(0, |ix| self.longest_out[ix])
    }
}
