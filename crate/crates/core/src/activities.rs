//! Landscape editing: annotation patterns, red flags, obsolescence,
//! versioning, merging and mutable pens.
//!
//! Every operation mints all of its contributions before storing any of
//! them, so a failing call leaves the territory untouched.

use std::collections::{BTreeMap, BTreeSet, VecDeque};
use std::str::FromStr;

use crate::error::{Error, Result};
use crate::id::LandmarkId;
use crate::model::{edge_depth, marks, merge_contributions, mergeable, ConcreteType, Contribution, Draft, Mark, Tag};
use crate::territory::Territory;

#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub enum Pattern {
    Question,
    Answer,
    Pinpoint,
    Define,
    Nuance,
    Support,
    Instantiate,
    Characterise,
    Reformulate,
    Reference,
}

impl Pattern {
    pub const ALL: [Pattern; 10] = [
        Pattern::Question,
        Pattern::Answer,
        Pattern::Pinpoint,
        Pattern::Define,
        Pattern::Nuance,
        Pattern::Support,
        Pattern::Instantiate,
        Pattern::Characterise,
        Pattern::Reformulate,
        Pattern::Reference,
    ];

    pub fn name(self) -> &'static str {
        match self {
            Pattern::Question => "question",
            Pattern::Answer => "answer",
            Pattern::Pinpoint => "pinpoint",
            Pattern::Define => "define",
            Pattern::Nuance => "nuance",
            Pattern::Support => "support",
            Pattern::Instantiate => "instantiate",
            Pattern::Characterise => "characterise",
            Pattern::Reformulate => "reformulate",
            Pattern::Reference => "reference",
        }
    }

    /// Edge type linking the new node to the target.
    pub fn edge_type(self) -> ConcreteType {
        match self {
            Pattern::Question => ConcreteType::Questions,
            Pattern::Answer => ConcreteType::Answers,
            Pattern::Pinpoint | Pattern::Define | Pattern::Characterise => ConcreteType::Pertains,
            Pattern::Nuance => ConcreteType::Nuances,
            Pattern::Support | Pattern::Reference => ConcreteType::Supports,
            Pattern::Instantiate => ConcreteType::Instantiates,
            Pattern::Reformulate => ConcreteType::Equates,
        }
    }

    fn default_node_type(self, target: &Contribution) -> ConcreteType {
        match self {
            Pattern::Question => ConcreteType::Question,
            Pattern::Pinpoint | Pattern::Define => ConcreteType::Existence,
            Pattern::Reformulate => target.ctype,
            _ => ConcreteType::Narrative,
        }
    }
}

impl FromStr for Pattern {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        Pattern::ALL
            .into_iter()
            .find(|p| p.name() == s)
            .ok_or_else(|| Error::PatternArityError(format!("unknown pattern {s:?}")))
    }
}

/// Label, optional type and tags of a contribution to be created.
#[derive(Debug, Clone, Default, PartialEq, Eq)]
pub struct NewContent {
    pub label: String,
    pub ctype: Option<ConcreteType>,
    pub tags: BTreeSet<Tag>,
}

impl NewContent {
    pub fn text(label: impl Into<String>) -> Self {
        NewContent { label: label.into(), ..Default::default() }
    }

    pub fn typed(label: impl Into<String>, ctype: ConcreteType) -> Self {
        NewContent { label: label.into(), ctype: Some(ctype), ..Default::default() }
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct AnnotationRequest {
    pub target: LandmarkId,
    pub pattern: Pattern,
    pub content: NewContent,
    /// Second node, used by `define` for the definition text.
    pub extra: Option<NewContent>,
    pub edge_tags: BTreeSet<Tag>,
}

impl AnnotationRequest {
    pub fn new(target: LandmarkId, pattern: Pattern, content: NewContent) -> Self {
        AnnotationRequest { target, pattern, content, extra: None, edge_tags: BTreeSet::new() }
    }

    pub fn with_extra(mut self, extra: NewContent) -> Self {
        self.extra = Some(extra);
        self
    }

    pub fn with_edge_tags(mut self, tags: BTreeSet<Tag>) -> Self {
        self.edge_tags = tags;
        self
    }
}

/// Ids created by an annotation: the main node, the edge onto the target,
/// then any supporting contributions.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Annotation {
    pub node: LandmarkId,
    pub edge: LandmarkId,
    pub extra: Vec<LandmarkId>,
}

impl Annotation {
    pub fn all(&self) -> Vec<LandmarkId> {
        let mut v = vec![self.node, self.edge];
        v.extend(&self.extra);
        v
    }
}

fn node_draft(content: &NewContent, default: ConcreteType) -> Draft {
    Draft::vertex(content.label.clone(), content.ctype.unwrap_or(default)).tags(content.tags.clone())
}

/// Appends already-minted contributions in order.
fn commit(t: &mut Territory, minted: Vec<Contribution>) -> Result<Vec<LandmarkId>> {
    let mut ids = Vec::with_capacity(minted.len());
    for c in minted {
        ids.push(t.append_created(c)?);
    }
    Ok(ids)
}

pub fn annotate(t: &mut Territory, req: &AnnotationRequest) -> Result<Annotation> {
    let target = t.landscape().get(req.target).cloned().ok_or(Error::TargetNotFound(req.target))?;
    let pattern = req.pattern;
    if pattern == Pattern::Answer && target.ctype != ConcreteType::Question {
        return Err(Error::KindMismatch(format!("answers target {} is a {}", target.id, target.ctype)));
    }
    if pattern != Pattern::Define && req.extra.is_some() {
        return Err(Error::PatternArityError(format!("{} takes a single new node", pattern.name())));
    }
    let node = t.mint(node_draft(&req.content, pattern.default_node_type(&target)))?;
    let mut minted = vec![node.clone()];
    match pattern {
        Pattern::Define => {
            let extra = req
                .extra
                .as_ref()
                .ok_or_else(|| Error::PatternArityError("define needs a term and a definition".into()))?;
            let definition = t.mint(node_draft(extra, ConcreteType::Existence))?;
            let pen = t.mint(Draft::pen(ConcreteType::Definition, [node.id, definition.id]))?;
            let inner = t.mint(Draft::edge(ConcreteType::Pertains, definition.id, node.id))?;
            let onto = t.mint(Draft::edge(ConcreteType::Pertains, pen.id, target.id).tags(req.edge_tags.clone()))?;
            minted.extend([definition, pen, inner, onto]);
            let ids = commit(t, minted)?;
            return Ok(Annotation { node: ids[0], edge: ids[4], extra: vec![ids[1], ids[2], ids[3]] });
        }
        Pattern::Reference => {
            let edge =
                Draft::edge(ConcreteType::Supports, node.id, target.id).label("reference").tags(req.edge_tags.clone());
            minted.push(t.mint(edge)?);
        }
        _ => {
            let edge = Draft::edge(pattern.edge_type(), node.id, target.id).tags(req.edge_tags.clone());
            minted.push(t.mint(edge)?);
        }
    }
    let ids = commit(t, minted)?;
    Ok(Annotation { node: ids[0], edge: ids[1], extra: Vec::new() })
}

/// Records `equates(target, pit)` with the reason as label.
pub fn red_flag(t: &mut Territory, target: LandmarkId, reason: &str) -> Result<LandmarkId> {
    if target.is_pit() {
        return Err(Error::SelfEndpoint(LandmarkId::PIT));
    }
    if !t.landscape().contains(target) {
        return Err(Error::TargetNotFound(target));
    }
    t.contribute(Draft::edge(ConcreteType::Equates, target, LandmarkId::PIT).label(reason))
}

/// `id` together with every edge incident on a member, recursively.
pub fn obsolescence_closure(t: &Territory, id: LandmarkId) -> BTreeSet<LandmarkId> {
    let l = t.landscape();
    let mut seen = BTreeSet::from([id]);
    let mut queue = VecDeque::from([id]);
    while let Some(x) = queue.pop_front() {
        for e in l.incident_ids(x) {
            if l.contains(e) && seen.insert(e) {
                queue.push_back(e);
            }
        }
    }
    seen
}

/// Marks `id` and its closure obsolete with deadline `now + limbo`.
pub fn obsolete(t: &mut Territory, id: LandmarkId) -> Result<BTreeSet<LandmarkId>> {
    if !t.landscape().contains(id) {
        return Err(Error::NotFound(id));
    }
    let closure = obsolescence_closure(t, id);
    let now = t.now();
    let mark = Mark::obsolete(now, now.saturating_add(t.limbo));
    for x in &closure {
        if !t.landscape().is_obsolete(*x) {
            t.store_mut().add_mark(*x, mark.clone())?;
        }
    }
    Ok(closure)
}

/// Fresh local copies of the live edges in `old`'s closure, rewired from
/// `old` to `new`. Edge-on-edge endpoints point to the copies.
fn rewired_copies(
    t: &mut Territory,
    old: LandmarkId,
    new: LandmarkId,
) -> Result<(Vec<Contribution>, BTreeMap<LandmarkId, LandmarkId>)> {
    let l = t.landscape();
    let mut edges: Vec<Contribution> = obsolescence_closure(t, old)
        .into_iter()
        .filter(|x| *x != old)
        .filter_map(|x| l.get(x))
        .filter(|c| !c.is_obsolete())
        .cloned()
        .collect();
    edges.sort_by_key(|e| (edge_depth(e, l), e.id));
    let existing_penned: BTreeSet<(LandmarkId, LandmarkId)> = l
        .iter()
        .filter(|c| c.ctype == ConcreteType::PennedIn && !c.is_obsolete())
        .filter_map(Contribution::endpoints)
        .collect();

    let mut renamed = BTreeMap::from([(old, new)]);
    let mut copies = Vec::new();
    let mut lookup = t.landscape().clone();
    for e in edges {
        let mut payload = e.payload.clone();
        for r in e.payload.references() {
            if let Some(to) = renamed.get(&r) {
                payload = payload.redirect(r, *to);
            }
        }
        if e.ctype == ConcreteType::PennedIn {
            if let Some(ends) = payload.endpoints() {
                if existing_penned.contains(&ends) {
                    continue;
                }
            }
        }
        let draft = Draft { label: e.label.clone(), ctype: e.ctype, tags: e.tags.clone(), payload };
        let id = t.next_id();
        let copy = draft.into_contribution(id, t.authorship(), t.now(), &lookup)?;
        renamed.insert(e.id, copy.id);
        lookup.put(copy.clone());
        copies.push(copy);
    }
    renamed.remove(&old);
    Ok((copies, renamed))
}

/// Adds `new` to every pen holding `old`, and each copy wherever its original was.
fn extend_pens(t: &mut Territory, renamed: &BTreeMap<LandmarkId, LandmarkId>) -> Result<()> {
    for (orig, copy) in renamed {
        for pen in t.landscape().pens_containing(*orig) {
            if t.landscape().contains(pen) && !t.landscape().is_obsolete(pen) {
                let copy = *copy;
                t.store_mut().update(pen, |p| {
                    if let crate::model::Payload::Pen { contents } = &mut p.payload {
                        contents.insert(copy);
                    }
                })?;
            }
        }
    }
    Ok(())
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct VersionOutcome {
    pub new_id: LandmarkId,
    pub link: LandmarkId,
    /// original edge id → copy id
    pub copies: BTreeMap<LandmarkId, LandmarkId>,
    /// edges on the old version left for the user to redirect
    pub needs_redirect: Vec<LandmarkId>,
    pub obsoleted: BTreeSet<LandmarkId>,
}

/// Replaces `old` by a brand-new contribution carrying `content`.
pub fn version_replace(
    t: &mut Territory,
    old: LandmarkId,
    content: &NewContent,
    equivalent: bool,
) -> Result<VersionOutcome> {
    let prev = t.landscape().get(old).cloned().ok_or(Error::NotFound(old))?;
    let draft = Draft {
        label: content.label.clone(),
        ctype: content.ctype.unwrap_or(prev.ctype),
        tags: if content.tags.is_empty() { prev.tags.clone() } else { content.tags.clone() },
        payload: prev.payload.clone(),
    };
    let new = t.mint(draft)?;
    let new_id = new.id;
    let needs_redirect: Vec<LandmarkId> = if equivalent {
        Vec::new()
    } else {
        t.landscape().incident_edges(old).filter(|e| !e.is_obsolete()).map(|e| e.id).collect()
    };
    let link_draft = if equivalent {
        Draft::edge(ConcreteType::Equates, old, new_id).tag("@version")?
    } else {
        Draft::edge(ConcreteType::Relate, old, new_id)
    };
    let link = t.mint(link_draft)?;

    t.append_created(new)?;
    let mut copies = BTreeMap::new();
    if equivalent {
        let (minted, renamed) = rewired_copies(t, old, new_id)?;
        commit(t, minted)?;
        let mut pens = renamed.clone();
        pens.insert(old, new_id);
        extend_pens(t, &pens)?;
        copies = renamed;
    }
    let obsoleted = obsolete(t, old)?;
    let link_id = t.append_created(link)?;
    Ok(VersionOutcome { new_id, link: link_id, copies, needs_redirect, obsoleted })
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct MergeOutcome {
    pub survivor: LandmarkId,
    pub link: Option<LandmarkId>,
    pub copies: BTreeMap<LandmarkId, LandmarkId>,
    pub obsoleted: BTreeSet<LandmarkId>,
}

/// Merges duplicates `a` and `b` into the one with the larger id.
pub fn merge_duplicates(t: &mut Territory, a: LandmarkId, b: LandmarkId) -> Result<MergeOutcome> {
    let ca = t.landscape().get(a).cloned().ok_or(Error::NotFound(a))?;
    if a == b {
        return Ok(MergeOutcome { survivor: a, link: None, copies: BTreeMap::new(), obsoleted: BTreeSet::new() });
    }
    let cb = t.landscape().get(b).cloned().ok_or(Error::NotFound(b))?;
    if !mergeable(&ca, &cb) {
        return Err(Error::MergeMismatch(a, b));
    }
    let (lo, hi) = if ca.id < cb.id { (ca, cb) } else { (cb, ca) };
    let mut merged = merge_contributions(&lo, &hi)?;
    merged.marks.retain(|m| m.name != marks::OBSOLETE);
    merged.marks.extend(hi.marks_named(marks::OBSOLETE).cloned());
    let link = t.mint(
        Draft::edge(ConcreteType::Equates, lo.id, hi.id)
            .label("merged")
            .directional("replaced by", "replaces")
            .directional_tags(BTreeSet::from([Tag::new("@replaced-by")?]), BTreeSet::from([Tag::new("@replaces")?])),
    )?;

    t.store_mut().update(hi.id, |c| *c = merged)?;
    let (minted, renamed) = rewired_copies(t, lo.id, hi.id)?;
    commit(t, minted)?;
    let mut pens = renamed.clone();
    pens.insert(lo.id, hi.id);
    extend_pens(t, &pens)?;
    let obsoleted = obsolete(t, lo.id)?;
    let link = t.append_created(link)?;
    Ok(MergeOutcome { survivor: hi.id, link: Some(link), copies: renamed, obsoleted })
}

/// Links two epistemic equivalents and obsoletes the one not kept.
/// Neither contribution's attributes change.
pub fn relaxed_merge(t: &mut Territory, a: LandmarkId, b: LandmarkId, keep: LandmarkId) -> Result<LandmarkId> {
    if a == b {
        return Err(Error::NotDistinct(a));
    }
    for id in [a, b] {
        if !t.landscape().contains(id) {
            return Err(Error::NotFound(id));
        }
    }
    let other = if keep == a {
        b
    } else if keep == b {
        a
    } else {
        return Err(Error::Forbidden(format!("kept id {keep} is not one of the merged pair")));
    };
    let link = t.mint(Draft::edge(ConcreteType::Equates, other, keep).label("relaxed merge"))?;
    obsolete(t, other)?;
    t.append_created(link)
}

/// Creates a pen of type `ctype` holding `contents`.
pub fn new_pen<I: IntoIterator<Item = LandmarkId>>(
    t: &mut Territory,
    ctype: ConcreteType,
    label: &str,
    contents: I,
) -> Result<LandmarkId> {
    t.contribute(Draft::pen(ctype, contents).label(label))
}

fn live_penned_in(t: &Territory, member: LandmarkId, pen: LandmarkId) -> Option<LandmarkId> {
    t.landscape()
        .incident_edges(member)
        .find(|e| e.ctype == ConcreteType::PennedIn && !e.is_obsolete() && e.endpoints() == Some((member, pen)))
        .map(|e| e.id)
}

pub fn mutable_pen_add(t: &mut Territory, member: LandmarkId, pen: LandmarkId) -> Result<LandmarkId> {
    if !t.landscape().contains(member) {
        return Err(Error::NotFound(member));
    }
    match t.landscape().get(pen) {
        Some(p) if p.is_pen() => {}
        _ => return Err(Error::PennedInTargetNotPen(pen)),
    }
    if live_penned_in(t, member, pen).is_some() {
        return Err(Error::DuplicatePennedIn { member, pen });
    }
    t.contribute(Draft::edge(ConcreteType::PennedIn, member, pen))
}

pub fn mutable_pen_remove(t: &mut Territory, member: LandmarkId, pen: LandmarkId) -> Result<BTreeSet<LandmarkId>> {
    match t.landscape().get(pen) {
        Some(p) if p.is_pen() => {}
        _ => return Err(Error::PennedInTargetNotPen(pen)),
    }
    let edge = live_penned_in(t, member, pen).ok_or(Error::NotFound(member))?;
    obsolete(t, edge)
}

/// Members of a mutable pen: its static contents plus live pennedIn sources.
pub fn mutable_pen_members(t: &Territory, pen: LandmarkId) -> BTreeSet<LandmarkId> {
    let l = t.landscape();
    let mut out: BTreeSet<LandmarkId> = l.get(pen).and_then(|p| p.payload.pen_contents()).cloned().unwrap_or_default();
    out.extend(
        l.incident_edges(pen)
            .filter(|e| e.ctype == ConcreteType::PennedIn && !e.is_obsolete())
            .filter_map(|e| e.endpoints().filter(|(_, to)| *to == pen).map(|(from, _)| from)),
    );
    out
}
