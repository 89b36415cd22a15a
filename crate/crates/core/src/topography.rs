//! Landscape metrics, filters, aggregation and collapse.

use std::collections::{BTreeMap, BTreeSet};

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::graph::{incidence_bfs, unidirectional_arcs, Condensed, WayfarerConfig};
use crate::id::LandmarkId;
use crate::landscape::{Area, Landscape};
use crate::model::{marks, ConcreteType, Contribution, Mark, Payload, Tag};

/// Maturity decay per annotation level.
pub const GAMMA: f64 = 0.5;
/// Outgoing depth above this adds nothing to reliability.
pub const RELIABILITY_DEPTH_CAP: usize = 5;

/// Edge types that count as annotations for maturity.
pub const ANNOTATION_TYPES: [ConcreteType; 6] = [
    ConcreteType::Questions,
    ConcreteType::Answers,
    ConcreteType::Nuances,
    ConcreteType::Supports,
    ConcreteType::Pertains,
    ConcreteType::Instantiates,
];

fn require(l: &Landscape, id: LandmarkId) -> Result<()> {
    if l.has_landmark(id) {
        Ok(())
    } else {
        Err(Error::NotFound(id))
    }
}

/// Number of edges on the shortest undirected path; `None` if unreachable.
///
/// Computed as `⌈h/2⌉` where `h` is the incidence-step distance, which also
/// covers paths that start or end on an edge.
pub fn distance(l: &Landscape, a: LandmarkId, b: LandmarkId) -> Result<Option<usize>> {
    require(l, a)?;
    require(l, b)?;
    let hops = incidence_bfs(l, a, &WayfarerConfig::default(), None);
    Ok(hops.get(&b).map(|h| h.div_ceil(2)))
}

pub fn findable(l: &Landscape, a: LandmarkId, b: LandmarkId) -> Result<bool> {
    Ok(distance(l, a, b)?.is_some())
}

/// Longest directed path into `c` over unidirectional edges, counting each
/// strongly connected component once.
pub fn depth(l: &Landscape, c: LandmarkId) -> Result<usize> {
    require(l, c)?;
    Ok(Condensed::new(&unidirectional_arcs(l)).depth_in(c))
}

/// Longest directed path leaving `c`.
pub fn outgoing_depth(l: &Landscape, c: LandmarkId) -> Result<usize> {
    require(l, c)?;
    Ok(Condensed::new(&unidirectional_arcs(l)).depth_out(c))
}

fn annotations_into(l: &Landscape, target: LandmarkId) -> impl Iterator<Item = &Contribution> {
    l.incident_edges(target).filter(move |e| {
        ANNOTATION_TYPES.contains(&e.ctype) && matches!(e.payload, Payload::UnidirEdge { to, .. } if to == target)
    })
}

/// Annotation edges around `c` with their weight: 1 for edges onto `c`,
/// `GAMMA` for edges onto those edges or onto their sources.
pub fn weighted_annotations(l: &Landscape, c: LandmarkId) -> BTreeMap<LandmarkId, f64> {
    let mut weights = BTreeMap::new();
    let first: Vec<&Contribution> = annotations_into(l, c).collect();
    for e in &first {
        weights.insert(e.id, 1.0);
    }
    for e in &first {
        let source = e.endpoints().map(|(from, _)| from).unwrap_or(e.id);
        for target in [e.id, source] {
            if target == c {
                continue;
            }
            for e2 in annotations_into(l, target) {
                weights.entry(e2.id).or_insert(GAMMA);
            }
        }
    }
    weights
}

pub fn maturity(l: &Landscape, c: LandmarkId) -> Result<f64> {
    require(l, c)?;
    Ok(weighted_annotations(l, c).values().sum())
}

/// `maturity × (1+s)/(1+s+n) × (1 + min(outgoing depth, 5))` where `s` and
/// `n` count supports and nuances edges onto `c`.
pub fn reliability(l: &Landscape, c: LandmarkId) -> Result<f64> {
    let m = maturity(l, c)?;
    let count = |t: ConcreteType| annotations_into(l, c).filter(|e| e.ctype == t).count() as f64;
    let (s, n) = (count(ConcreteType::Supports), count(ConcreteType::Nuances));
    let d = outgoing_depth(l, c)?.min(RELIABILITY_DEPTH_CAP) as f64;
    Ok(m * (1.0 + s) / (1.0 + s + n) * (1.0 + d))
}

/// Equates edges joining `c` and the pit.
pub fn red_flag_count(l: &Landscape, c: LandmarkId) -> usize {
    l.incident_edges(c)
        .filter(|e| e.ctype == ConcreteType::Equates)
        .filter(|e| {
            e.endpoints().is_some_and(|(a, b)| (a, b) == (c, LandmarkId::PIT) || (a, b) == (LandmarkId::PIT, c))
        })
        .count()
}

/// Ordinal scale of epistemic proximity, 0 (disconnected) to 5 (equivalent).
#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize)]
pub struct ProximityLevel(pub u8);

/// Landmarks joined to `a` by equates edges only, the pit excluded.
pub fn equates_component(l: &Landscape, a: LandmarkId) -> BTreeSet<LandmarkId> {
    let mut seen = BTreeSet::from([a]);
    let mut stack = vec![a];
    while let Some(x) = stack.pop() {
        for e in l.incident_edges(x).filter(|e| e.ctype == ConcreteType::Equates) {
            if let Some((p, q)) = e.endpoints() {
                let y = if p == x { q } else { p };
                if !y.is_pit() && seen.insert(y) {
                    stack.push(y);
                }
            }
        }
    }
    seen
}

fn yes_no(e: &Contribution) -> Option<&'static str> {
    let has = |t: &str| e.tags.iter().any(|x| x.as_str() == t);
    match (has("@yes"), has("@no")) {
        (true, false) => Some("@yes"),
        (false, true) => Some("@no"),
        _ => None,
    }
}

/// `(question, yes/no tag)` for each answers edge leaving `x`.
fn answered(l: &Landscape, x: LandmarkId) -> Vec<(LandmarkId, Option<&'static str>)> {
    l.incident_edges(x)
        .filter(|e| e.ctype == ConcreteType::Answers)
        .filter_map(|e| match e.payload {
            Payload::UnidirEdge { from, to } if from == x => Some((to, yes_no(e))),
            _ => None,
        })
        .collect()
}

fn pertains_existence(l: &Landscape, x: LandmarkId) -> BTreeSet<LandmarkId> {
    l.incident_edges(x)
        .filter(|e| e.ctype == ConcreteType::Pertains)
        .filter_map(|e| e.endpoints())
        .map(|(p, q)| if p == x { q } else { p })
        .filter(|y| l.get(*y).is_some_and(|c| c.ctype == ConcreteType::Existence))
        .collect()
}

pub fn proximity(l: &Landscape, a: LandmarkId, b: LandmarkId) -> Result<ProximityLevel> {
    require(l, a)?;
    require(l, b)?;
    if a == b || equates_component(l, a).contains(&b) {
        return Ok(ProximityLevel(5));
    }
    let (qa, qb) = (answered(l, a), answered(l, b));
    let same_tag = qa.iter().any(|(q, t)| t.is_some() && qb.iter().any(|(q2, t2)| q == q2 && t == t2));
    if same_tag {
        return Ok(ProximityLevel(4));
    }
    if qa.iter().any(|(q, _)| qb.iter().any(|(q2, _)| q == q2)) {
        return Ok(ProximityLevel(3));
    }
    if !pertains_existence(l, a).is_disjoint(&pertains_existence(l, b)) {
        return Ok(ProximityLevel(2));
    }
    if findable(l, a, b)? {
        return Ok(ProximityLevel(1));
    }
    Ok(ProximityLevel(0))
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct AggregateGroup {
    pub ctype: ConcreteType,
    pub tags: BTreeSet<Tag>,
    pub edges: BTreeSet<LandmarkId>,
    pub sources: BTreeSet<LandmarkId>,
}

/// Edges annotating `target`, paired with their source landmark.
pub fn annotations_of(l: &Landscape, target: LandmarkId) -> Vec<(&Contribution, LandmarkId)> {
    l.incident_edges(target)
        .filter_map(|e| match &e.payload {
            Payload::UnidirEdge { from, to } if *to == target => Some((e, *from)),
            Payload::UnidirEdge { .. } => None,
            _ => e.endpoints().map(|(p, q)| (e, if p == target { q } else { p })),
        })
        .collect()
}

/// Groups the annotations of `target` by edge type and tag set.
pub fn aggregate(
    l: &Landscape,
    target: LandmarkId,
    edge_type: Option<ConcreteType>,
    tag: Option<&Tag>,
) -> Result<Vec<AggregateGroup>> {
    require(l, target)?;
    let mut groups: BTreeMap<(ConcreteType, BTreeSet<Tag>), AggregateGroup> = BTreeMap::new();
    for (e, source) in annotations_of(l, target) {
        if edge_type.is_some_and(|t| t != e.ctype) || tag.is_some_and(|t| !e.tags.contains(t)) {
            continue;
        }
        let g = groups.entry((e.ctype, e.tags.clone())).or_insert_with(|| AggregateGroup {
            ctype: e.ctype,
            tags: e.tags.clone(),
            edges: BTreeSet::new(),
            sources: BTreeSet::new(),
        });
        g.edges.insert(e.id);
        g.sources.insert(source);
    }
    let mut out: Vec<AggregateGroup> = groups.into_values().collect();
    out.sort_by_key(|g| (g.sources.first().copied(), g.edges.first().copied()));
    Ok(out)
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash, Default, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum FilterAction {
    Reject,
    #[default]
    Hide,
    Dim,
    Highlight,
}

/// Contributions questioned fewer than `min_questions` times, nuanced fewer
/// than `min_nuances` times, challenged by fewer than `min_distinct_users`
/// authors or with incoming depth below `min_depth` fail the rule.
#[derive(Debug, Clone, PartialEq, Eq, Default, Serialize, Deserialize)]
#[serde(default, deny_unknown_fields)]
pub struct FilterRule {
    pub min_questions: usize,
    pub min_nuances: usize,
    pub min_distinct_users: usize,
    pub min_depth: usize,
    pub action: FilterAction,
}

#[derive(Debug, Deserialize)]
struct FilterFile {
    #[serde(default)]
    filter: Vec<FilterRule>,
}

impl FilterRule {
    /// Reads `[[filter]]` tables from a TOML document.
    pub fn load_toml(text: &str) -> Result<Vec<FilterRule>> {
        let file: FilterFile = toml::from_str(text).map_err(|e| Error::Malformed(format!("filter rules: {e}")))?;
        Ok(file.filter)
    }

    pub fn passes(&self, l: &Landscape, depths: &Condensed, c: LandmarkId) -> bool {
        let challenges: Vec<&Contribution> = annotations_into(l, c)
            .filter(|e| matches!(e.ctype, ConcreteType::Questions | ConcreteType::Nuances))
            .collect();
        let count = |t| challenges.iter().filter(|e| e.ctype == t).count();
        let users: BTreeSet<&str> = challenges.iter().flat_map(|e| e.authors()).collect();
        count(ConcreteType::Questions) >= self.min_questions
            && count(ConcreteType::Nuances) >= self.min_nuances
            && users.len() >= self.min_distinct_users
            && depths.depth_in(c) >= self.min_depth
    }
}

/// Action per contribution of `area`: reject, hide and dim fire on failing
/// contributions, highlight on passing ones.
pub fn apply_filter(rule: &FilterRule, l: &Landscape, area: &Area) -> BTreeMap<LandmarkId, FilterAction> {
    let depths = Condensed::new(&unidirectional_arcs(l));
    area.iter()
        .filter(|id| l.contains(**id))
        .filter(|id| rule.passes(l, &depths, **id) == (rule.action == FilterAction::Highlight))
        .map(|id| (*id, rule.action))
        .collect()
}

/// House-keeping mark recording a filter action.
pub fn action_mark(action: FilterAction) -> Mark {
    Mark::plain(match action {
        FilterAction::Reject | FilterAction::Hide => marks::HIDDEN,
        FilterAction::Dim => marks::DIM,
        FilterAction::Highlight => marks::HIGHLIGHTED,
    })
}

/// Non-edge landmarks with a directed path into `c`; `c` excluded.
pub fn collapse_into(l: &Landscape, c: LandmarkId) -> Result<BTreeSet<LandmarkId>> {
    require(l, c)?;
    let mut preds: BTreeMap<LandmarkId, Vec<LandmarkId>> = BTreeMap::new();
    for (from, to) in unidirectional_arcs(l) {
        preds.entry(to).or_default().push(from);
    }
    let mut seen = BTreeSet::new();
    let mut stack = vec![c];
    while let Some(x) = stack.pop() {
        for p in preds.get(&x).into_iter().flatten() {
            if seen.insert(*p) {
                stack.push(*p);
            }
        }
    }
    seen.remove(&c);
    seen.retain(|x| !l.get(*x).is_some_and(Contribution::is_edge));
    Ok(seen)
}
