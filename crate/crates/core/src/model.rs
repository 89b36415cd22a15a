//! Landmark kinds, attributes and the contribution order.
//!
//! A landscape holds the pit plus [`Contribution`]s. Contributions carry
//! three epistemic attributes (label, concrete type, tags) and metadata
//! (id, authorships, status, marks, timestamp). The merge function
//! [`merge_contributions`] is the join of the order [`contribution_leq`]
//! over contributions that share label and type.

use std::collections::{BTreeMap, BTreeSet};
use std::fmt;
use std::str::FromStr;

use chrono::NaiveDate;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::id::{ContentKey, LandmarkId};

/// Maximum edge recursion depth. An edge between two non-edges has depth 0.
pub const MAX_EDGE_DEPTH: usize = 8;

#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub enum AbstractKind {
    Vertex,
    AdirectionalEdge,
    UnidirectionalEdge,
    BidirectionalEdge,
    Pen,
}

impl AbstractKind {
    pub fn name(self) -> &'static str {
        match self {
            AbstractKind::Vertex => "vertex",
            AbstractKind::AdirectionalEdge => "adirectional",
            AbstractKind::UnidirectionalEdge => "unidirectional",
            AbstractKind::BidirectionalEdge => "bidirectional",
            AbstractKind::Pen => "pen",
        }
    }

    pub fn is_edge(self) -> bool {
        matches!(
            self,
            AbstractKind::AdirectionalEdge | AbstractKind::UnidirectionalEdge | AbstractKind::BidirectionalEdge
        )
    }
}

macro_rules! concrete_types {
    ($($variant:ident => $name:literal, $kind:ident;)*) => {
        #[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash)]
        pub enum ConcreteType {
            $($variant,)*
        }

        impl ConcreteType {
            pub const ALL: &'static [ConcreteType] = &[$(ConcreteType::$variant,)*];

            pub fn name(self) -> &'static str {
                match self {
                    $(ConcreteType::$variant => $name,)*
                }
            }

            pub fn kind(self) -> AbstractKind {
                match self {
                    $(ConcreteType::$variant => AbstractKind::$kind,)*
                }
            }
        }

        impl FromStr for ConcreteType {
            type Err = Error;

            fn from_str(s: &str) -> Result<Self> {
                match s {
                    $($name => Ok(ConcreteType::$variant),)*
                    other => Err(Error::UnknownType(other.to_string())),
                }
            }
        }
    };
}

concrete_types! {
    Question => "question", Vertex;
    Narrative => "narrative", Vertex;
    Existence => "existence", Vertex;
    Action => "action", Vertex;
    Data => "data", Vertex;
    Relate => "relate", AdirectionalEdge;
    Answers => "answers", UnidirectionalEdge;
    Questions => "questions", UnidirectionalEdge;
    Pertains => "pertains", UnidirectionalEdge;
    Instantiates => "instantiates", UnidirectionalEdge;
    Nuances => "nuances", UnidirectionalEdge;
    Supports => "supports", UnidirectionalEdge;
    PennedIn => "pennedIn", UnidirectionalEdge;
    Precedes => "precedes", UnidirectionalEdge;
    RelatesTo => "relatesTo", UnidirectionalEdge;
    Equates => "equates", BidirectionalEdge;
    DiffersFrom => "differsFrom", BidirectionalEdge;
    Definition => "definition", Pen;
    Reasons => "reasons", Pen;
    Conditions => "conditions", Pen;
    Glossary => "glossary", Pen;
    ExperimentalProtocol => "experimentalProtocol", Pen;
    Measure => "measure", Pen;
    Pointer => "pointer", Pen;
    Document => "document", Pen;
    DefaultPen => "default", Pen;
}

impl fmt::Display for ConcreteType {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

impl serde::Serialize for ConcreteType {
    fn serialize<S: serde::Serializer>(&self, s: S) -> Result<S::Ok, S::Error> {
        s.serialize_str(self.name())
    }
}

impl<'de> serde::Deserialize<'de> for ConcreteType {
    fn deserialize<D: serde::Deserializer<'de>>(d: D) -> Result<Self, D::Error> {
        let s = String::deserialize(d)?;
        s.parse().map_err(serde::de::Error::custom)
    }
}

/// A tag: a string starting with `@`.
#[derive(Debug, Clone, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize, Deserialize)]
#[serde(try_from = "String", into = "String")]
pub struct Tag(String);

impl Tag {
    pub fn new(s: impl Into<String>) -> Result<Self> {
        let s = s.into();
        if s.starts_with('@') {
            Ok(Tag(s))
        } else {
            Err(Error::InvalidTag(s))
        }
    }

    pub fn as_str(&self) -> &str {
        &self.0
    }
}

impl TryFrom<String> for Tag {
    type Error = Error;

    fn try_from(s: String) -> Result<Self> {
        Tag::new(s)
    }
}

impl From<Tag> for String {
    fn from(tag: Tag) -> String {
        tag.0
    }
}

impl fmt::Display for Tag {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(&self.0)
    }
}

/// Parses a list of tag strings.
pub fn tags<I, S>(items: I) -> Result<BTreeSet<Tag>>
where
    I: IntoIterator<Item = S>,
    S: Into<String>,
{
    items.into_iter().map(Tag::new).collect()
}

/// A team of authors and the date they recorded the contribution.
#[derive(Debug, Clone, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize, Deserialize)]
pub struct Authorship {
    pub authors: BTreeSet<String>,
    pub date: NaiveDate,
}

impl Authorship {
    pub fn new<I, S>(authors: I, date: NaiveDate) -> Result<Self>
    where
        I: IntoIterator<Item = S>,
        S: Into<String>,
    {
        let authors: BTreeSet<String> = authors.into_iter().map(Into::into).collect();
        if authors.is_empty() {
            return Err(Error::InvariantViolation("authorship without authors".into()));
        }
        Ok(Authorship { authors, date })
    }
}

/// The comparable clauses of a share contract.
///
/// `a.leq(b)` holds when `b` is no more constraining than `a`: it grants
/// every permission `a` grants and expires no earlier (`None` never expires).
#[derive(Debug, Clone, PartialEq, Eq, PartialOrd, Ord, Hash, Default, Serialize, Deserialize)]
pub struct ContractTerms {
    pub allow_address_disclosure: bool,
    pub allow_republish: bool,
    pub expiry: Option<u64>,
}

impl ContractTerms {
    pub fn leq(&self, other: &ContractTerms) -> bool {
        (!self.allow_address_disclosure || other.allow_address_disclosure)
            && (!self.allow_republish || other.allow_republish)
            && match (self.expiry, other.expiry) {
                (_, None) => true,
                (None, Some(_)) => false,
                (Some(a), Some(b)) => a <= b,
            }
    }

    /// Field-wise least constraining combination.
    pub fn join(&self, other: &ContractTerms) -> ContractTerms {
        ContractTerms {
            allow_address_disclosure: self.allow_address_disclosure || other.allow_address_disclosure,
            allow_republish: self.allow_republish || other.allow_republish,
            expiry: match (self.expiry, other.expiry) {
                (Some(a), Some(b)) => Some(a.max(b)),
                _ => None,
            },
        }
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub enum Status {
    Local,
    SharedWith { groups: BTreeSet<String>, contract: ContractTerms },
    Public,
}

impl Status {
    pub fn shared_with<I, S>(groups: I, contract: ContractTerms) -> Status
    where
        I: IntoIterator<Item = S>,
        S: Into<String>,
    {
        Status::SharedWith { groups: groups.into_iter().map(Into::into).collect(), contract }
    }

    pub fn is_public(&self) -> bool {
        matches!(self, Status::Public)
    }

    pub fn is_private(&self) -> bool {
        !self.is_public()
    }

    /// Least upper bound under [`status_leq`].
    pub fn join(&self, other: &Status) -> Status {
        match (self, other) {
            (Status::Public, _) | (_, Status::Public) => Status::Public,
            (Status::Local, s) | (s, Status::Local) => s.clone(),
            (Status::SharedWith { groups: g1, contract: r1 }, Status::SharedWith { groups: g2, contract: r2 }) => {
                Status::SharedWith { groups: g1.union(g2).cloned().collect(), contract: r1.join(r2) }
            }
        }
    }
}

/// `s ≤ s'`: `s` is local, or `s'` is public, or both are shared with
/// `s'` reaching a superset of groups under a contract no more constraining.
pub fn status_leq(s: &Status, t: &Status) -> bool {
    match (s, t) {
        (Status::Local, _) | (_, Status::Public) => true,
        (Status::SharedWith { groups: g1, contract: r1 }, Status::SharedWith { groups: g2, contract: r2 }) => {
            g1.is_subset(g2) && r1.leq(r2)
        }
        _ => false,
    }
}

pub mod marks {
    pub const NEW: &str = "new";
    pub const OBSOLETE: &str = "obsolete";
    pub const SYNC_WITH: &str = "syncWith";
    pub const SUBSCRIBED_TO: &str = "subscribedTo";
    pub const REWARDED: &str = "rewarded";
    pub const SHARED_WITH: &str = "sharedWith";
    pub const REFRIGERATED: &str = "refrigerated";
    pub const SYNCHRONISABLE: &str = "synchronisable";
    pub const HIDDEN: &str = "hidden";
    pub const DIM: &str = "dim";
    pub const HIGHLIGHTED: &str = "highlighted";
    /// advisory record of a peer's obsolescence notice
    pub const OBSOLETE_NOTICE: &str = "obsoleteNotice";

    pub const PREDEFINED: &[&str] = &[
        NEW,
        OBSOLETE,
        SYNC_WITH,
        SUBSCRIBED_TO,
        REWARDED,
        SHARED_WITH,
        REFRIGERATED,
        SYNCHRONISABLE,
        HIDDEN,
        DIM,
        HIGHLIGHTED,
    ];
}

/// A house-keeping mark, possibly parametrised.
#[derive(Debug, Clone, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize, Deserialize)]
pub struct Mark {
    pub name: String,
    #[serde(default)]
    pub params: BTreeMap<String, String>,
}

impl Mark {
    pub fn plain(name: &str) -> Mark {
        Mark { name: name.to_string(), params: BTreeMap::new() }
    }

    pub fn with(name: &str, params: &[(&str, String)]) -> Mark {
        Mark { name: name.to_string(), params: params.iter().map(|(k, v)| (k.to_string(), v.clone())).collect() }
    }

    pub fn obsolete(at: u64, deadline: u64) -> Mark {
        Mark::with(marks::OBSOLETE, &[("at", at.to_string()), ("deadline", deadline.to_string())])
    }

    pub fn shared_with(peer: &str) -> Mark {
        Mark::with(marks::SHARED_WITH, &[("peer", peer.to_string())])
    }

    pub fn param(&self, key: &str) -> Option<&str> {
        self.params.get(key).map(String::as_str)
    }

    pub fn param_u64(&self, key: &str) -> Option<u64> {
        self.param(key).and_then(|v| v.parse().ok())
    }

    /// Checks parameter shape for predefined names. Custom names pass.
    pub fn validate(&self) -> Result<()> {
        let need = |keys: &[&str]| -> Result<()> {
            for key in keys {
                if !self.params.contains_key(*key) {
                    return Err(Error::InvariantViolation(format!("mark {} lacks parameter {key}", self.name)));
                }
            }
            Ok(())
        };
        let need_u64 = |key: &str| -> Result<()> {
            need(&[key])?;
            self.param_u64(key).map(|_| ()).ok_or_else(|| {
                Error::InvariantViolation(format!("mark {} parameter {key} is not an integer", self.name))
            })
        };
        match self.name.as_str() {
            marks::OBSOLETE => need_u64("deadline"),
            marks::REWARDED => {
                need(&["descriptor", "rewarded"])?;
                need_u64("distance")?;
                self.param("rewarded")
                    .unwrap_or_default()
                    .parse::<LandmarkId>()
                    .map(|_| ())
                    .map_err(|_| Error::InvariantViolation("rewarded id is not an id".into()))
            }
            marks::SHARED_WITH => need(&["peer"]),
            marks::SYNC_WITH => need(&["devices"]),
            marks::SUBSCRIBED_TO => need(&["peer"]),
            "" => Err(Error::InvariantViolation("empty mark name".into())),
            _ => Ok(()),
        }
    }
}

/// Parameters of a `rewarded` mark.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct RewardMark {
    pub descriptor: String,
    pub distance: u64,
    pub rewarded_id: LandmarkId,
}

impl RewardMark {
    pub fn to_mark(&self) -> Mark {
        Mark::with(
            marks::REWARDED,
            &[
                ("descriptor", self.descriptor.clone()),
                ("distance", self.distance.to_string()),
                ("rewarded", self.rewarded_id.to_hex()),
            ],
        )
    }

    pub fn from_mark(mark: &Mark) -> Option<RewardMark> {
        if mark.name != marks::REWARDED {
            return None;
        }
        Some(RewardMark {
            descriptor: mark.param("descriptor")?.to_string(),
            distance: mark.param_u64("distance")?,
            rewarded_id: mark.param("rewarded")?.parse().ok()?,
        })
    }
}

/// Kind-specific part of a contribution.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub enum Payload {
    Vertex,
    /// Unordered pair, stored sorted.
    AdirEdge {
        endpoints: [LandmarkId; 2],
    },
    UnidirEdge {
        from: LandmarkId,
        to: LandmarkId,
    },
    BidirEdge {
        from: LandmarkId,
        to: LandmarkId,
        label_fwd: String,
        label_bwd: String,
        tags_fwd: BTreeSet<Tag>,
        tags_bwd: BTreeSet<Tag>,
    },
    Pen {
        contents: BTreeSet<LandmarkId>,
    },
}

impl Payload {
    pub fn adir(a: LandmarkId, b: LandmarkId) -> Payload {
        Payload::AdirEdge { endpoints: if a <= b { [a, b] } else { [b, a] } }
    }

    pub fn unidir(from: LandmarkId, to: LandmarkId) -> Payload {
        Payload::UnidirEdge { from, to }
    }

    pub fn bidir(from: LandmarkId, to: LandmarkId) -> Payload {
        Payload::BidirEdge {
            from,
            to,
            label_fwd: String::new(),
            label_bwd: String::new(),
            tags_fwd: BTreeSet::new(),
            tags_bwd: BTreeSet::new(),
        }
    }

    pub fn pen<I: IntoIterator<Item = LandmarkId>>(contents: I) -> Payload {
        Payload::Pen { contents: contents.into_iter().collect() }
    }

    pub fn kind(&self) -> AbstractKind {
        match self {
            Payload::Vertex => AbstractKind::Vertex,
            Payload::AdirEdge { .. } => AbstractKind::AdirectionalEdge,
            Payload::UnidirEdge { .. } => AbstractKind::UnidirectionalEdge,
            Payload::BidirEdge { .. } => AbstractKind::BidirectionalEdge,
            Payload::Pen { .. } => AbstractKind::Pen,
        }
    }

    /// `(start, end)` for edges; adirectional edges report their sorted pair.
    pub fn endpoints(&self) -> Option<(LandmarkId, LandmarkId)> {
        match self {
            Payload::AdirEdge { endpoints } => Some((endpoints[0], endpoints[1])),
            Payload::UnidirEdge { from, to } | Payload::BidirEdge { from, to, .. } => Some((*from, *to)),
            _ => None,
        }
    }

    pub fn pen_contents(&self) -> Option<&BTreeSet<LandmarkId>> {
        match self {
            Payload::Pen { contents } => Some(contents),
            _ => None,
        }
    }

    /// Every id the payload refers to.
    pub fn references(&self) -> Vec<LandmarkId> {
        match self {
            Payload::Pen { contents } => contents.iter().copied().collect(),
            other => match other.endpoints() {
                Some((a, b)) if a == b => vec![a],
                Some((a, b)) => vec![a, b],
                None => Vec::new(),
            },
        }
    }

    /// Replaces every occurrence of `old` by `new` in endpoints or contents.
    pub fn redirect(&self, old: LandmarkId, new: LandmarkId) -> Payload {
        let swap = |x: LandmarkId| if x == old { new } else { x };
        match self {
            Payload::Vertex => Payload::Vertex,
            Payload::AdirEdge { endpoints } => Payload::adir(swap(endpoints[0]), swap(endpoints[1])),
            Payload::UnidirEdge { from, to } => Payload::unidir(swap(*from), swap(*to)),
            Payload::BidirEdge { from, to, label_fwd, label_bwd, tags_fwd, tags_bwd } => Payload::BidirEdge {
                from: swap(*from),
                to: swap(*to),
                label_fwd: label_fwd.clone(),
                label_bwd: label_bwd.clone(),
                tags_fwd: tags_fwd.clone(),
                tags_bwd: tags_bwd.clone(),
            },
            Payload::Pen { contents } => Payload::pen(contents.iter().map(|x| swap(*x))),
        }
    }
}

/// Lookup of contributions by id, used for cross-landmark invariants.
pub trait Resolve {
    fn resolve(&self, id: LandmarkId) -> Option<&Contribution>;
}

impl Resolve for BTreeMap<LandmarkId, Contribution> {
    fn resolve(&self, id: LandmarkId) -> Option<&Contribution> {
        self.get(&id)
    }
}

/// Resolver that knows nothing; cross-landmark checks are skipped.
pub struct NoContext;

impl Resolve for NoContext {
    fn resolve(&self, _: LandmarkId) -> Option<&Contribution> {
        None
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Contribution {
    pub id: LandmarkId,
    pub label: String,
    pub tags: BTreeSet<Tag>,
    pub ctype: ConcreteType,
    pub payload: Payload,
    pub authorships: BTreeSet<Authorship>,
    pub status: Status,
    pub marks: BTreeSet<Mark>,
    /// First-encounter instant, epoch milliseconds.
    pub timestamp: u64,
}

/// The epistemic part of a contribution before it gets an id and metadata.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Draft {
    pub label: String,
    pub ctype: ConcreteType,
    pub tags: BTreeSet<Tag>,
    pub payload: Payload,
}

impl Draft {
    pub fn vertex(label: impl Into<String>, ctype: ConcreteType) -> Draft {
        Draft { label: label.into(), ctype, tags: BTreeSet::new(), payload: Payload::Vertex }
    }

    pub fn edge(ctype: ConcreteType, from: LandmarkId, to: LandmarkId) -> Draft {
        let payload = match ctype.kind() {
            AbstractKind::AdirectionalEdge => Payload::adir(from, to),
            AbstractKind::BidirectionalEdge => Payload::bidir(from, to),
            _ => Payload::unidir(from, to),
        };
        Draft { label: String::new(), ctype, tags: BTreeSet::new(), payload }
    }

    pub fn pen<I: IntoIterator<Item = LandmarkId>>(ctype: ConcreteType, contents: I) -> Draft {
        Draft { label: String::new(), ctype, tags: BTreeSet::new(), payload: Payload::pen(contents) }
    }

    pub fn label(mut self, label: impl Into<String>) -> Draft {
        self.label = label.into();
        self
    }

    pub fn tags(mut self, tags: BTreeSet<Tag>) -> Draft {
        self.tags = tags;
        self
    }

    pub fn tag(mut self, tag: &str) -> Result<Draft> {
        self.tags.insert(Tag::new(tag)?);
        Ok(self)
    }

    /// Sets directional labels on a bidirectional draft; no-op otherwise.
    pub fn directional(mut self, fwd: impl Into<String>, bwd: impl Into<String>) -> Draft {
        if let Payload::BidirEdge { label_fwd, label_bwd, .. } = &mut self.payload {
            *label_fwd = fwd.into();
            *label_bwd = bwd.into();
        }
        self
    }

    pub fn directional_tags(mut self, fwd: BTreeSet<Tag>, bwd: BTreeSet<Tag>) -> Draft {
        if let Payload::BidirEdge { tags_fwd, tags_bwd, .. } = &mut self.payload {
            *tags_fwd = fwd;
            *tags_bwd = bwd;
        }
        self
    }

    pub fn into_contribution(
        self,
        id: LandmarkId,
        authorship: Authorship,
        timestamp: u64,
        ctx: &dyn Resolve,
    ) -> Result<Contribution> {
        let c = Contribution {
            id,
            label: self.label,
            tags: self.tags,
            ctype: self.ctype,
            payload: self.payload,
            authorships: BTreeSet::from([authorship]),
            status: Status::Local,
            marks: BTreeSet::new(),
            timestamp,
        };
        c.validate(ctx)?;
        Ok(c)
    }
}

impl Contribution {
    pub fn kind(&self) -> AbstractKind {
        self.ctype.kind()
    }

    pub fn is_edge(&self) -> bool {
        self.kind().is_edge()
    }

    pub fn is_pen(&self) -> bool {
        self.kind() == AbstractKind::Pen
    }

    pub fn endpoints(&self) -> Option<(LandmarkId, LandmarkId)> {
        self.payload.endpoints()
    }

    pub fn content_key(&self) -> ContentKey {
        ContentKey::new(&self.label, self.ctype.name())
    }

    pub fn has_mark(&self, name: &str) -> bool {
        self.marks.iter().any(|m| m.name == name)
    }

    pub fn marks_named<'a>(&'a self, name: &'a str) -> impl Iterator<Item = &'a Mark> + 'a {
        self.marks.iter().filter(move |m| m.name == name)
    }

    pub fn remove_marks(&mut self, name: &str) {
        self.marks.retain(|m| m.name != name);
    }

    pub fn is_obsolete(&self) -> bool {
        self.has_mark(marks::OBSOLETE)
    }

    /// Earliest limbo deadline among obsolete marks.
    pub fn obsolete_deadline(&self) -> Option<u64> {
        self.marks_named(marks::OBSOLETE).filter_map(|m| m.param_u64("deadline")).min()
    }

    pub fn reward_marks(&self) -> Vec<RewardMark> {
        self.marks.iter().filter_map(RewardMark::from_mark).collect()
    }

    /// Every tag carried by the contribution, directional ones included.
    pub fn all_tags(&self) -> BTreeSet<&Tag> {
        let mut out: BTreeSet<&Tag> = self.tags.iter().collect();
        if let Payload::BidirEdge { tags_fwd, tags_bwd, .. } = &self.payload {
            out.extend(tags_fwd.iter());
            out.extend(tags_bwd.iter());
        }
        out
    }

    pub fn authors(&self) -> BTreeSet<&str> {
        self.authorships.iter().flat_map(|a| a.authors.iter().map(String::as_str)).collect()
    }

    /// Checks every single-contribution invariant, plus the pennedIn target
    /// kind and edge depth for endpoints `ctx` can resolve.
    pub fn validate(&self, ctx: &dyn Resolve) -> Result<()> {
        if self.id.is_pit() {
            return Err(Error::InvariantViolation("a contribution cannot use the pit id".into()));
        }
        if self.ctype.kind() != self.payload.kind() {
            return Err(Error::KindMismatch(format!(
                "type {} is a {} but the payload is a {}",
                self.ctype,
                self.ctype.kind().name(),
                self.payload.kind().name()
            )));
        }
        if self.kind() == AbstractKind::Vertex && self.label.is_empty() {
            return Err(Error::EmptyVertexLabel);
        }
        for tag in self.all_tags() {
            if !tag.as_str().starts_with('@') {
                return Err(Error::InvalidTag(tag.as_str().to_string()));
            }
        }
        for authorship in &self.authorships {
            if authorship.authors.is_empty() {
                return Err(Error::InvariantViolation("authorship without authors".into()));
            }
        }
        for mark in &self.marks {
            mark.validate()?;
        }
        if let Some((a, b)) = self.endpoints() {
            if a == self.id || b == self.id {
                return Err(Error::SelfEndpoint(self.id));
            }
            if self.ctype == ConcreteType::PennedIn {
                if b.is_pit() {
                    return Err(Error::PennedInTargetNotPen(b));
                }
                if let Some(target) = ctx.resolve(b) {
                    if !target.is_pen() {
                        return Err(Error::PennedInTargetNotPen(b));
                    }
                }
            }
            let depth = edge_depth(self, ctx);
            if depth > MAX_EDGE_DEPTH {
                return Err(Error::DepthCapExceeded { depth, cap: MAX_EDGE_DEPTH });
            }
        }
        if let Payload::Pen { contents } = &self.payload {
            if contents.contains(&self.id) {
                return Err(Error::InvariantViolation("a pen cannot contain itself".into()));
            }
        }
        Ok(())
    }

    /// Moves the status up. Succeeds only for a strict upgrade.
    pub fn upgrade_status(&mut self, to: Status) -> Result<()> {
        if self.status == to {
            return Err(match to {
                Status::Public => Error::AlreadyPublic(self.id),
                _ => Error::Forbidden(format!("{} already has that status", self.id)),
            });
        }
        if !status_leq(&self.status, &to) {
            return Err(Error::Forbidden(format!("status downgrade of {}", self.id)));
        }
        self.status = to;
        Ok(())
    }
}

/// Edge recursion depth; 0 for an edge whose endpoints are not edges.
/// Non-edges and unresolvable endpoints count as depth -1.
pub fn edge_depth(c: &Contribution, ctx: &dyn Resolve) -> usize {
    fn depth_of(c: &Contribution, ctx: &dyn Resolve, budget: usize) -> i64 {
        let Some((a, b)) = c.endpoints() else { return -1 };
        if budget == 0 {
            // cyclic or absurdly deep chain; report something past the cap
            return MAX_EDGE_DEPTH as i64 + 1;
        }
        let sub = |x: LandmarkId| match ctx.resolve(x) {
            Some(e) if e.is_edge() && e.id != c.id => depth_of(e, ctx, budget - 1),
            _ => -1,
        };
        sub(a).max(sub(b)) + 1
    }
    depth_of(c, ctx, MAX_EDGE_DEPTH + 2).max(0) as usize
}

/// Whether `m` is defined on the pair: same label and type, where edges must
/// also agree on endpoints and directional attributes. Pens of the same
/// concrete type merge regardless of contents.
pub fn mergeable(c: &Contribution, d: &Contribution) -> bool {
    c.label == d.label && c.ctype == d.ctype && (c.payload == d.payload || (c.is_pen() && d.is_pen()))
}

/// The contribution order `c ⪯ c'`.
pub fn contribution_leq(c: &Contribution, d: &Contribution) -> bool {
    let payload_ok = match (&c.payload, &d.payload) {
        (Payload::Pen { contents: a }, Payload::Pen { contents: b }) => a.is_subset(b),
        (a, b) => a == b,
    };
    c.id <= d.id
        && c.label == d.label
        && c.tags.is_subset(&d.tags)
        && c.ctype == d.ctype
        && payload_ok
        && c.authorships.is_subset(&d.authorships)
        && status_leq(&c.status, &d.status)
}

/// Merges two mark sets. Plain marks are unioned; `rewarded` keeps the
/// smallest distance per rewarded id and `obsolete` the earliest deadline.
pub fn merge_marks(a: &BTreeSet<Mark>, b: &BTreeSet<Mark>) -> BTreeSet<Mark> {
    let mut out = BTreeSet::new();
    let mut rewards: BTreeMap<LandmarkId, (u64, Mark)> = BTreeMap::new();
    let mut obsolete: Option<(u64, Mark)> = None;
    for mark in a.iter().chain(b.iter()) {
        if let Some(reward) = RewardMark::from_mark(mark) {
            let candidate = (reward.distance, mark.clone());
            match rewards.get(&reward.rewarded_id) {
                Some(best) if *best <= candidate => {}
                _ => {
                    rewards.insert(reward.rewarded_id, candidate);
                }
            }
        } else if mark.name == marks::OBSOLETE {
            let candidate = (mark.param_u64("deadline").unwrap_or(u64::MAX), mark.clone());
            if obsolete.as_ref().is_none_or(|best| candidate < *best) {
                obsolete = Some(candidate);
            }
        } else {
            out.insert(mark.clone());
        }
    }
    out.extend(rewards.into_values().map(|(_, m)| m));
    out.extend(obsolete.map(|(_, m)| m));
    out
}

/// The join `m(c, c')`.
pub fn merge_contributions(c: &Contribution, d: &Contribution) -> Result<Contribution> {
    if !mergeable(c, d) {
        return Err(Error::MergeMismatch(c.id, d.id));
    }
    let payload = match (&c.payload, &d.payload) {
        (Payload::Pen { contents: a }, Payload::Pen { contents: b }) => {
            Payload::Pen { contents: a.union(b).copied().collect() }
        }
        (p, _) => p.clone(),
    };
    Ok(Contribution {
        id: c.id.max(d.id),
        label: c.label.clone(),
        tags: c.tags.union(&d.tags).cloned().collect(),
        ctype: c.ctype,
        payload,
        authorships: c.authorships.union(&d.authorships).cloned().collect(),
        status: c.status.join(&d.status),
        marks: merge_marks(&c.marks, &d.marks),
        timestamp: c.timestamp.min(d.timestamp),
    })
}
