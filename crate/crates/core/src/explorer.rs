//! Exploration: wayfarer walks, topics, consistency checks, lexical
//! similarity, search and the suggestion helpers.

use std::collections::{BTreeMap, BTreeSet, VecDeque};

use chrono::{DateTime, NaiveDate};
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::graph::incidence_bfs;
pub use crate::graph::{DirectionPolicy, WayfarerConfig};
use crate::id::{ContentKey, LandmarkId};
use crate::landscape::{Area, Landscape};
use crate::model::{ConcreteType, Contribution, Draft, Tag};
use crate::territory::Territory;

fn require(l: &Landscape, id: LandmarkId) -> Result<()> {
    if l.has_landmark(id) {
        Ok(())
    } else {
        Err(Error::NotFound(id))
    }
}

/// Landmarks reachable from `start` across at most `cfg.max_edges` edges.
/// An area never contains the pit unless the walk starts there.
pub fn wayfarer_explore(l: &Landscape, start: LandmarkId, cfg: &WayfarerConfig) -> Result<Area> {
    Ok(wayfarer_steps(l, start, cfg)?.into_keys().collect())
}

/// Incidence-step counts of the wayfarer area.
fn wayfarer_steps(l: &Landscape, start: LandmarkId, cfg: &WayfarerConfig) -> Result<BTreeMap<LandmarkId, usize>> {
    require(l, start)?;
    let mut steps = incidence_bfs(l, start, cfg, Some(2 * cfg.max_edges));
    if !start.is_pit() {
        steps.remove(&LandmarkId::PIT);
    }
    Ok(steps)
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct Topic {
    pub anchor: LandmarkId,
    pub radius: usize,
    #[serde(default)]
    pub config: WayfarerConfig,
}

impl Topic {
    pub fn new(anchor: LandmarkId, radius: usize) -> Self {
        Topic { anchor, radius, config: WayfarerConfig::default() }
    }

    fn walk(&self) -> WayfarerConfig {
        WayfarerConfig { max_edges: self.radius, ..self.config.clone() }
    }
}

pub fn topic_extent_area(l: &Landscape, topic: &Topic) -> Result<Area> {
    wayfarer_explore(l, topic.anchor, &topic.walk())
}

/// The topic anchored at `c` with the radius left over from `topic`.
pub fn inherited_topic(l: &Landscape, topic: &Topic, c: LandmarkId) -> Result<Topic> {
    require(l, c)?;
    let steps = wayfarer_steps(l, topic.anchor, &topic.walk())?;
    let h = *steps.get(&c).ok_or(Error::NotInExtent(c))?;
    let m = h.div_ceil(2);
    Ok(Topic { anchor: c, radius: topic.radius - m, config: topic.config.clone() })
}

/// A pair of existence nodes both equated and differentiated.
#[derive(Debug, Clone, PartialEq, Eq, PartialOrd, Ord, Serialize)]
pub struct Witness {
    pub a: LandmarkId,
    pub b: LandmarkId,
    /// Alternating node and edge ids along an equates-only path from `a` to `b`.
    pub path_eq: Vec<LandmarkId>,
    /// `[a, differsFrom edge, b]`.
    pub path_diff: Vec<LandmarkId>,
}

/// Which equates edges count when checking consistency.
#[derive(Debug, Clone, Default, PartialEq, Eq)]
pub struct ConsistencyOptions {
    pub area: Option<Area>,
    pub ignored_equates_tags: BTreeSet<Tag>,
}

impl ConsistencyOptions {
    fn admits(&self, c: &Contribution) -> bool {
        self.area.as_ref().is_none_or(|a| a.contains(&c.id))
    }

    fn counts_as_equates(&self, e: &Contribution) -> bool {
        e.ctype == ConcreteType::Equates
            && self.admits(e)
            && !e.all_tags().iter().any(|t| self.ignored_equates_tags.contains(*t))
    }
}

/// Shortest equates-only path from `a` to `b`, as alternating ids.
fn equates_path(l: &Landscape, a: LandmarkId, b: LandmarkId, opts: &ConsistencyOptions) -> Option<Vec<LandmarkId>> {
    let mut prev: BTreeMap<LandmarkId, (LandmarkId, LandmarkId)> = BTreeMap::new();
    let mut queue = VecDeque::from([a]);
    let mut seen = BTreeSet::from([a]);
    while let Some(x) = queue.pop_front() {
        if x == b {
            let mut path = vec![b];
            let mut cur = b;
            while let Some(&(edge, from)) = prev.get(&cur) {
                path.push(edge);
                path.push(from);
                cur = from;
            }
            path.reverse();
            return Some(path);
        }
        for e in l.incident_edges(x).filter(|e| opts.counts_as_equates(e)) {
            let Some((p, q)) = e.endpoints() else { continue };
            let y = if p == x { q } else { p };
            let admitted = l.get(y).is_some_and(|c| opts.admits(c));
            if !y.is_pit() && admitted && seen.insert(y) {
                prev.insert(y, (e.id, x));
                queue.push_back(y);
            }
        }
    }
    None
}

/// One witness per differsFrom edge whose existence-node endpoints are also
/// joined by an equates-only path. Witnesses are unique per unordered pair.
pub fn check_consistency(l: &Landscape, opts: &ConsistencyOptions) -> Vec<Witness> {
    let is_existence = |id: LandmarkId| l.get(id).is_some_and(|c| c.ctype == ConcreteType::Existence && opts.admits(c));
    let mut seen = BTreeSet::new();
    let mut out = Vec::new();
    for d in l.iter().filter(|c| c.ctype == ConcreteType::DiffersFrom && opts.admits(c)) {
        let Some((u, v)) = d.endpoints() else { continue };
        if u == v || !is_existence(u) || !is_existence(v) || !seen.insert((u.min(v), u.max(v))) {
            continue;
        }
        if let Some(path_eq) = equates_path(l, u, v, opts) {
            out.push(Witness { a: u, b: v, path_eq, path_diff: vec![u, d.id, v] });
        }
    }
    out.sort();
    out
}

/// Lowercase alphanumeric runs.
pub fn tokens(text: &str) -> BTreeSet<String> {
    text.split(|ch: char| !ch.is_alphanumeric()).filter(|t| !t.is_empty()).map(str::to_lowercase).collect()
}

/// Token-set Jaccard similarity; 0 when both sides are empty.
pub fn jaccard(a: &BTreeSet<String>, b: &BTreeSet<String>) -> f64 {
    let union = a.union(b).count();
    if union == 0 {
        return 0.0;
    }
    a.intersection(b).count() as f64 / union as f64
}

/// Contributions whose label resembles `text`, best first, ties by id.
pub fn parachutist_text(l: &Landscape, text: &str, threshold: f64) -> Vec<(LandmarkId, f64)> {
    let probe = tokens(text);
    let mut hits: Vec<(LandmarkId, f64)> =
        l.iter().map(|c| (c.id, jaccard(&probe, &tokens(&c.label)))).filter(|(_, s)| *s >= threshold).collect();
    hits.sort_by(|x, y| y.1.total_cmp(&x.1).then(x.0.cmp(&y.0)));
    hits
}

/// Contributions resembling `c`'s label, `c` excluded.
pub fn parachutist_similar(l: &Landscape, c: LandmarkId, threshold: f64) -> Result<Vec<(LandmarkId, f64)>> {
    let label = &l.require(c)?.label;
    let mut hits = parachutist_text(l, label, threshold);
    hits.retain(|(id, _)| *id != c);
    Ok(hits)
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum SearchMode {
    Selective,
    Approximate,
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct SearchConfig {
    pub tau: f64,
    pub radius: usize,
}

impl Default for SearchConfig {
    fn default() -> Self {
        SearchConfig { tau: 0.3, radius: 2 }
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
enum Clause {
    IdPrefix(String),
    Type(ConcreteType),
    Tag(Tag),
    After(NaiveDate),
    Before(NaiveDate),
    AuthorsAtLeast(usize),
}

/// Splits on whitespace, keeping double-quoted runs together.
fn split_query(q: &str) -> Result<Vec<String>> {
    let mut out = Vec::new();
    let mut cur = String::new();
    let mut quoted = false;
    for ch in q.chars() {
        match ch {
            '"' => quoted = !quoted,
            c if c.is_whitespace() && !quoted => {
                if !cur.is_empty() {
                    out.push(std::mem::take(&mut cur));
                }
            }
            c => cur.push(c),
        }
    }
    if quoted {
        return Err(Error::MalformedQuery("unbalanced quote".into()));
    }
    if !cur.is_empty() {
        out.push(cur);
    }
    Ok(out)
}

fn parse_clause(word: &str) -> Result<Clause> {
    let bad = |why: String| Error::MalformedQuery(why);
    let date = |s: &str| NaiveDate::parse_from_str(s, "%Y-%m-%d").map_err(|e| bad(format!("date {s:?}: {e}")));
    if let Some(n) = word.strip_prefix("authors>=") {
        return n.parse().map(Clause::AuthorsAtLeast).map_err(|_| bad(format!("count {n:?}")));
    }
    let (key, value) = word.split_once(':').ok_or_else(|| bad(format!("clause {word:?}")))?;
    if value.is_empty() {
        return Err(bad(format!("clause {word:?} has no value")));
    }
    match key {
        "id" if value.chars().all(|c| c.is_ascii_hexdigit()) => Ok(Clause::IdPrefix(value.to_lowercase())),
        "id" => Err(bad(format!("id prefix {value:?} is not hex"))),
        "type" => value.parse().map(Clause::Type).map_err(|_| bad(format!("type {value:?}"))),
        "tag" => Tag::new(value).map(Clause::Tag).map_err(|_| bad(format!("tag {value:?}"))),
        "after" => date(value).map(Clause::After),
        "before" => date(value).map(Clause::Before),
        other => Err(bad(format!("unknown key {other:?}"))),
    }
}

fn first_seen(c: &Contribution) -> NaiveDate {
    DateTime::from_timestamp_millis(c.timestamp as i64).map(|d| d.date_naive()).unwrap_or_default()
}

impl Clause {
    fn matches(&self, c: &Contribution) -> bool {
        match self {
            Clause::IdPrefix(p) => c.id.to_hex().starts_with(p.as_str()),
            Clause::Type(t) => c.ctype == *t,
            Clause::Tag(t) => c.all_tags().contains(t),
            Clause::After(d) => first_seen(c) > *d,
            Clause::Before(d) => first_seen(c) < *d,
            Clause::AuthorsAtLeast(n) => c.authors().len() >= *n,
        }
    }
}

/// Conjunction of space-separated clauses:
/// `id:HEX`, `type:NAME`, `tag:@T`, `after:DATE`, `before:DATE`, `authors>=N`.
pub fn selective_search(l: &Landscape, query: &str) -> Result<Area> {
    let clauses = split_query(query)?.iter().map(|w| parse_clause(w)).collect::<Result<Vec<_>>>()?;
    let tag_hits = clauses.iter().find_map(|c| match c {
        Clause::Tag(t) => Some(l.with_tag(t)),
        _ => None,
    });
    let candidates: Box<dyn Iterator<Item = &Contribution>> = match &tag_hits {
        Some(ids) => Box::new(ids.iter().filter_map(|id| l.get(*id))),
        None => Box::new(l.iter()),
    };
    Ok(candidates.filter(|c| clauses.iter().all(|cl| cl.matches(c))).map(|c| c.id).collect())
}

/// Lexical seeds at similarity `tau`, each widened by a wayfarer walk.
pub fn approximate_search(l: &Landscape, text: &str, cfg: &SearchConfig) -> Result<Area> {
    if text.trim().is_empty() {
        return Err(Error::MalformedQuery("empty search text".into()));
    }
    let walk = WayfarerConfig::radius(cfg.radius);
    let mut out = Area::new();
    for (seed, _) in parachutist_text(l, text, cfg.tau) {
        out.extend(wayfarer_explore(l, seed, &walk)?);
    }
    Ok(out)
}

pub fn search(l: &Landscape, query: &str, mode: SearchMode) -> Result<Area> {
    match mode {
        SearchMode::Selective => selective_search(l, query),
        SearchMode::Approximate => approximate_search(l, query, &SearchConfig::default()),
    }
}

/// Endpoint of a proposed edge.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
pub enum ProposalEnd {
    Existing(LandmarkId),
    /// index into [`Proposal::nodes`]
    Proposed(usize),
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct ProposedEdge {
    pub ctype: ConcreteType,
    pub from: ProposalEnd,
    pub to: ProposalEnd,
}

/// Uncommitted contributions awaiting the user's decision.
#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct Proposal {
    pub rationale: String,
    #[serde(serialize_with = "serialize_drafts")]
    pub nodes: Vec<Draft>,
    pub edges: Vec<ProposedEdge>,
}

fn serialize_drafts<S: serde::Serializer>(drafts: &[Draft], s: S) -> std::result::Result<S::Ok, S::Error> {
    use serde::ser::SerializeSeq;
    let mut seq = s.serialize_seq(Some(drafts.len()))?;
    for d in drafts {
        seq.serialize_element(&serde_json::json!({"label": d.label, "type": d.ctype.name()}))?;
    }
    seq.end()
}

/// Stores every contribution of the proposal; returns their ids, nodes first.
pub fn accept_proposal(t: &mut Territory, p: &Proposal) -> Result<Vec<LandmarkId>> {
    let mut minted = Vec::new();
    for d in &p.nodes {
        minted.push(t.mint(d.clone())?);
    }
    let resolve = |end: ProposalEnd| -> Result<LandmarkId> {
        match end {
            ProposalEnd::Existing(id) => Ok(id),
            ProposalEnd::Proposed(i) => {
                minted.get(i).map(|c| c.id).ok_or_else(|| Error::PatternArityError(format!("proposal has no node {i}")))
            }
        }
    };
    let mut edges = Vec::new();
    for e in &p.edges {
        let draft = Draft::edge(e.ctype, resolve(e.from)?, resolve(e.to)?);
        edges.push(draft);
    }
    let mut all = minted;
    for d in edges {
        all.push(t.mint(d)?);
    }
    let mut ids = Vec::new();
    for c in all {
        ids.push(t.append_created(c)?);
    }
    Ok(ids)
}

fn excerpt(label: &str) -> String {
    const MAX: usize = 60;
    let trimmed = label.trim().trim_end_matches(['.', '?', '!']);
    if trimmed.chars().count() <= MAX {
        trimmed.to_string()
    } else {
        trimmed.chars().take(MAX).collect::<String>() + "…"
    }
}

/// A question bridging `a` and `b`, with both linked to it.
pub fn gluebot_suggest(l: &Landscape, a: LandmarkId, b: LandmarkId) -> Result<Proposal> {
    let (ca, cb) = (l.require(a)?, l.require(b)?);
    let label = format!("How does \"{}\" relate to \"{}\"?", excerpt(&ca.label), excerpt(&cb.label));
    Ok(Proposal {
        rationale: "question in between two contributions".into(),
        nodes: vec![Draft::vertex(label, ConcreteType::Question)],
        edges: vec![
            ProposedEdge {
                ctype: ConcreteType::Pertains,
                from: ProposalEnd::Existing(a),
                to: ProposalEnd::Proposed(0),
            },
            ProposedEdge {
                ctype: ConcreteType::Pertains,
                from: ProposalEnd::Existing(b),
                to: ProposalEnd::Proposed(0),
            },
        ],
    })
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Serialize)]
pub enum SuggestionKind {
    Duplicate,
    Pertains,
    Similar,
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct Suggestion {
    pub target: LandmarkId,
    pub kind: SuggestionKind,
    /// Edge to add between the draft and the target; `None` for duplicates.
    pub edge: Option<ConcreteType>,
    pub score: f64,
}

impl Suggestion {
    /// The draft plus the suggested edge, ready for [`accept_proposal`].
    pub fn proposal(&self, draft: &Draft) -> Proposal {
        let (from, to) = match self.kind {
            SuggestionKind::Pertains => (ProposalEnd::Existing(self.target), ProposalEnd::Proposed(0)),
            _ => (ProposalEnd::Proposed(0), ProposalEnd::Existing(self.target)),
        };
        Proposal {
            rationale: format!("{:?} match", self.kind),
            nodes: vec![draft.clone()],
            edges: self.edge.map(|ctype| ProposedEdge { ctype, from, to }).into_iter().collect(),
        }
    }
}

/// Places for a draft to be implanted: duplicates first, then existence
/// nodes named inside the draft, then lexically similar contributions.
pub fn planter_suggest(l: &Landscape, label: &str, ctype: ConcreteType, tau: f64) -> Vec<Suggestion> {
    let mut out = Vec::new();
    let mut taken = BTreeSet::new();
    for id in l.with_content_key(&ContentKey::new(label, ctype.name())) {
        taken.insert(id);
        out.push(Suggestion { target: id, kind: SuggestionKind::Duplicate, edge: None, score: 1.0 });
    }
    let draft_tokens = tokens(label);
    let mut named: Vec<Suggestion> = l
        .iter()
        .filter(|c| c.ctype == ConcreteType::Existence && !taken.contains(&c.id))
        .filter_map(|c| {
            let t = tokens(&c.label);
            (!t.is_empty() && t.is_subset(&draft_tokens)).then(|| Suggestion {
                target: c.id,
                kind: SuggestionKind::Pertains,
                edge: Some(ConcreteType::Pertains),
                score: jaccard(&t, &draft_tokens),
            })
        })
        .collect();
    named.sort_by(|x, y| y.score.total_cmp(&x.score).then(x.target.cmp(&y.target)));
    taken.extend(named.iter().map(|s| s.target));
    out.extend(named);
    for (id, score) in parachutist_text(l, label, tau) {
        if taken.contains(&id) || l.get(id).is_some_and(Contribution::is_edge) {
            continue;
        }
        let target_is_question = l.get(id).is_some_and(|c| c.ctype == ConcreteType::Question);
        let edge = if target_is_question && ctype != ConcreteType::Question {
            ConcreteType::Answers
        } else {
            ConcreteType::RelatesTo
        };
        out.push(Suggestion { target: id, kind: SuggestionKind::Similar, edge: Some(edge), score });
    }
    out
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::model::tags;
    use crate::serial::canonical_digest;

    fn t() -> Territory {
        Territory::simulated("x", "Anne", 3)
    }

    fn n(t: &mut Territory, label: &str, ct: ConcreteType) -> LandmarkId {
        t.contribute(Draft::vertex(label, ct)).unwrap()
    }

    #[test]
    fn wayfarer_radius_and_tags() {
        let mut t = t();
        let blue = n(&mut t, "Blue", ConcreteType::Existence);
        let bleu = n(&mut t, "bleu", ConcreteType::Existence);
        let q = n(&mut t, "What colour is the sky?", ConcreteType::Question);
        t.contribute(Draft::edge(ConcreteType::Answers, blue, q)).unwrap();
        let tr = t.contribute(Draft::edge(ConcreteType::Equates, blue, bleu).tags(tags(["@EN→FR"]).unwrap())).unwrap();
        let l = t.landscape();
        assert_eq!(wayfarer_explore(l, blue, &WayfarerConfig::radius(0)).unwrap(), Area::from([blue]));
        let all = wayfarer_explore(l, blue, &WayfarerConfig::radius(1)).unwrap();
        assert!(all.contains(&bleu) && all.contains(&q) && all.contains(&tr));
        let cfg = WayfarerConfig { excluded_tags: tags(["@EN→FR"]).unwrap(), ..WayfarerConfig::radius(1) };
        let filtered = wayfarer_explore(l, blue, &cfg).unwrap();
        assert!(!filtered.contains(&bleu) && filtered.contains(&q));
        let fwd = WayfarerConfig { direction: DirectionPolicy::ForwardOnly, ..WayfarerConfig::radius(1) };
        assert!(wayfarer_explore(l, blue, &fwd).unwrap().contains(&q));
        assert!(!wayfarer_explore(l, q, &fwd).unwrap().contains(&blue));
    }

    #[test]
    fn inherited_topics() {
        let mut t = t();
        let a = n(&mut t, "a", ConcreteType::Narrative);
        let b = n(&mut t, "b", ConcreteType::Narrative);
        let far = n(&mut t, "far", ConcreteType::Narrative);
        t.contribute(Draft::edge(ConcreteType::Supports, b, a)).unwrap();
        let topic = Topic::new(a, 1);
        let child = inherited_topic(t.landscape(), &topic, b).unwrap();
        assert_eq!((child.anchor, child.radius), (b, 0));
        assert_eq!(inherited_topic(t.landscape(), &topic, far), Err(Error::NotInExtent(far)));
    }

    #[test]
    fn consistency_triangle() {
        let mut t = t();
        let a = n(&mut t, "A", ConcreteType::Existence);
        let b = n(&mut t, "B", ConcreteType::Existence);
        let c = n(&mut t, "C", ConcreteType::Existence);
        let eab = t.contribute(Draft::edge(ConcreteType::Equates, a, b)).unwrap();
        let eac = t
            .contribute(Draft::edge(ConcreteType::Equates, a, c).tags(tags(["@naturalLanguageTranslation"]).unwrap()))
            .unwrap();
        assert!(check_consistency(t.landscape(), &ConsistencyOptions::default()).is_empty());
        let d = t.contribute(Draft::edge(ConcreteType::DiffersFrom, c, b)).unwrap();
        let w = check_consistency(t.landscape(), &ConsistencyOptions::default());
        assert_eq!(w.len(), 1);
        assert_eq!(w[0].path_eq, vec![c, eac, a, eab, b]);
        assert_eq!(w[0].path_diff, vec![c, d, b]);
        let opts = ConsistencyOptions {
            ignored_equates_tags: tags(["@naturalLanguageTranslation"]).unwrap(),
            ..Default::default()
        };
        assert!(check_consistency(t.landscape(), &opts).is_empty());
    }

    #[test]
    fn parachutist_scores() {
        let mut t = t();
        let a = n(&mut t, "The sky is blue.", ConcreteType::Narrative);
        let b = n(&mut t, "Blue light in the sky scatters more.", ConcreteType::Narrative);
        let c = n(&mut t, "Fungi are not plants.", ConcreteType::Narrative);
        let hits = parachutist_similar(t.landscape(), a, 0.0).unwrap();
        assert_eq!(hits[0], (b, 3.0 / 8.0));
        assert_eq!(hits[1], (c, 0.0));
        assert_eq!(jaccard(&tokens("Same words"), &tokens("same WORDS!")), 1.0);
    }

    #[test]
    fn search_modes() {
        let mut t = t();
        assert!(search(t.landscape(), "tag:@boolean", SearchMode::Selective).unwrap().is_empty());
        let d = t.contribute(Draft::vertex("true", ConcreteType::Data).tag("@boolean").unwrap()).unwrap();
        let q = n(&mut t, "What colour is the sky?", ConcreteType::Question);
        let blue = n(&mut t, "Blue", ConcreteType::Existence);
        let e = t.contribute(Draft::edge(ConcreteType::Answers, blue, q)).unwrap();
        let l = t.landscape();
        assert_eq!(search(l, "tag:@boolean", SearchMode::Selective).unwrap(), Area::from([d]));
        assert_eq!(search(l, "type:data authors>=1", SearchMode::Selective).unwrap(), Area::from([d]));
        assert!(search(l, "authors>=2", SearchMode::Selective).unwrap().is_empty());
        assert_eq!(search(l, "before:1970-01-02", SearchMode::Selective).unwrap().len(), 4);
        assert!(matches!(search(l, "colour:blue", SearchMode::Selective), Err(Error::MalformedQuery(_))));
        assert!(matches!(search(l, "tag:\"@open", SearchMode::Selective), Err(Error::MalformedQuery(_))));
        let found = search(l, "sky colour", SearchMode::Approximate).unwrap();
        assert!(found.is_superset(&Area::from([q, blue, e])));
        assert!(!found.contains(&d));
    }

    #[test]
    fn suggestions_are_read_only_until_accepted() {
        let mut t = t();
        let a = n(&mut t, "The sky is blue.", ConcreteType::Narrative);
        let b = n(&mut t, "The sky is grey.", ConcreteType::Narrative);
        let ph = n(&mut t, "Passive house", ConcreteType::Existence);
        let before = canonical_digest(t.landscape());
        let p = gluebot_suggest(t.landscape(), a, b).unwrap();
        assert_eq!((p.nodes.len(), p.edges.len()), (1, 2));
        assert!(p.nodes[0].label.starts_with("How does"));

        let dup = planter_suggest(t.landscape(), "The sky is blue.", ConcreteType::Narrative, 0.3);
        assert_eq!((dup[0].target, dup[0].kind), (a, SuggestionKind::Duplicate));
        let house = planter_suggest(t.landscape(), "building a passive house", ConcreteType::Narrative, 0.3);
        assert_eq!((house[0].target, house[0].edge), (ph, Some(ConcreteType::Pertains)));
        assert_eq!(canonical_digest(t.landscape()), before);

        let ids = accept_proposal(&mut t, &p).unwrap();
        assert_eq!(ids.len(), 3);
        let edge = t.landscape().get(ids[1]).unwrap();
        assert_eq!(edge.endpoints(), Some((a, ids[0])));
    }
}
