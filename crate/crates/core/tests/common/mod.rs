//! Seeded generators shared by the integration test targets.
#![allow(dead_code)]

use std::collections::{BTreeMap, BTreeSet, VecDeque};

use chrono::NaiveDate;
use mmm_core::graph::{DirectionPolicy, WayfarerConfig};
use mmm_core::model::{marks, Payload, RewardMark};
use mmm_core::{Authorship, ConcreteType, ContractTerms, Contribution, LandmarkId, Landscape, Mark, Status, Tag};
use rand::seq::SliceRandom;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

pub const LABELS: &[&str] =
    &["The sky is blue.", "What colour is the sky?", "Blue", "bleu", "Rayleigh scattering", "Sunsets are red."];
pub const TAGS: &[&str] = &["@yes", "@no", "@EN→FR", "@boolean", "@replaces"];
pub const AUTHORS: &[&str] = &["Anne", "Bob", "Carol", "Dan"];
pub const GROUPS: &[&str] = &["lab", "team", "family"];

pub struct Gen {
    pub rng: ChaCha8Rng,
}

impl Gen {
    pub fn new(seed: u64) -> Self {
        Gen { rng: ChaCha8Rng::seed_from_u64(seed) }
    }

    pub fn id(&mut self) -> LandmarkId {
        LandmarkId::from_parts(self.rng.gen_range(1..1u64 << 44), self.rng.gen())
    }

    fn subset<T: Clone>(&mut self, items: &[T], p: f64) -> Vec<T> {
        items.iter().filter(|_| self.rng.gen_bool(p)).cloned().collect()
    }

    pub fn tags(&mut self) -> BTreeSet<Tag> {
        self.subset(TAGS, 0.25).into_iter().map(|t| Tag::new(t).unwrap()).collect()
    }

    pub fn authorship(&mut self) -> Authorship {
        let mut authors = self.subset(AUTHORS, 0.3);
        if authors.is_empty() {
            authors.push(AUTHORS.choose(&mut self.rng).unwrap());
        }
        let date = NaiveDate::from_ymd_opt(2023, self.rng.gen_range(1..=12), self.rng.gen_range(1..=28)).unwrap();
        Authorship::new(authors, date).unwrap()
    }

    pub fn contract(&mut self) -> ContractTerms {
        ContractTerms {
            allow_address_disclosure: self.rng.gen_bool(0.3),
            allow_republish: self.rng.gen_bool(0.5),
            expiry: if self.rng.gen_bool(0.5) { Some(self.rng.gen_range(1..4) * 1000) } else { None },
        }
    }

    pub fn status(&mut self) -> Status {
        match self.rng.gen_range(0..3) {
            0 => Status::Local,
            1 => {
                let mut groups = self.subset(GROUPS, 0.5);
                if groups.is_empty() {
                    groups.push(GROUPS[0]);
                }
                let contract = self.contract();
                Status::shared_with(groups, contract)
            }
            _ => Status::Public,
        }
    }

    /// Well-formed marks: at most one reward per rewarded id and one obsolete mark.
    pub fn marks(&mut self, rewardable: &[LandmarkId]) -> BTreeSet<Mark> {
        let mut out = BTreeSet::new();
        if self.rng.gen_bool(0.3) {
            out.insert(Mark::plain(marks::HIGHLIGHTED));
        }
        if self.rng.gen_bool(0.2) {
            let at = self.rng.gen_range(0..1000);
            out.insert(Mark::obsolete(at, at + self.rng.gen_range(1..100)));
        }
        if !rewardable.is_empty() && self.rng.gen_bool(0.3) {
            let rewarded_id = *rewardable.choose(&mut self.rng).unwrap();
            let distance = self.rng.gen_range(0..5);
            out.insert(RewardMark { descriptor: "prize".into(), distance, rewarded_id }.to_mark());
        }
        out
    }

    fn base(&mut self, id: LandmarkId, label: String, ctype: ConcreteType, payload: Payload) -> Contribution {
        let n = self.rng.gen_range(1..3);
        Contribution {
            id,
            label,
            tags: self.tags(),
            ctype,
            payload,
            authorships: (0..n).map(|_| self.authorship()).collect(),
            status: self.status(),
            marks: self.marks(&[id]),
            timestamp: self.rng.gen_range(0..1_000_000),
        }
    }

    pub fn vertex_type(&mut self) -> ConcreteType {
        *[ConcreteType::Question, ConcreteType::Narrative, ConcreteType::Existence, ConcreteType::Data]
            .choose(&mut self.rng)
            .unwrap()
    }

    pub fn vertex(&mut self) -> Contribution {
        let id = self.id();
        let label = LABELS.choose(&mut self.rng).unwrap().to_string();
        let ctype = self.vertex_type();
        self.base(id, label, ctype, Payload::Vertex)
    }

    pub fn edge(&mut self, ctype: ConcreteType, a: LandmarkId, b: LandmarkId) -> Contribution {
        let id = self.id();
        let payload = match ctype.kind() {
            mmm_core::AbstractKind::AdirectionalEdge => Payload::adir(a, b),
            mmm_core::AbstractKind::UnidirectionalEdge => Payload::unidir(a, b),
            _ => {
                let (label_fwd, label_bwd) = if self.rng.gen_bool(0.3) {
                    ("translates".to_string(), "traduit".to_string())
                } else {
                    Default::default()
                };
                Payload::BidirEdge {
                    from: a,
                    to: b,
                    label_fwd,
                    label_bwd,
                    tags_fwd: self.tags(),
                    tags_bwd: self.tags(),
                }
            }
        };
        let label = if self.rng.gen_bool(0.2) { "because".to_string() } else { String::new() };
        self.base(id, label, ctype, payload)
    }

    pub fn pen(&mut self, members: &[LandmarkId]) -> Contribution {
        let id = self.id();
        let contents: Vec<LandmarkId> = self.subset(members, 0.3);
        let ctype =
            *[ConcreteType::DefaultPen, ConcreteType::Reasons, ConcreteType::Glossary].choose(&mut self.rng).unwrap();
        self.base(id, String::new(), ctype, Payload::pen(contents))
    }

    pub fn edge_type(&mut self) -> ConcreteType {
        let edges: Vec<ConcreteType> =
            ConcreteType::ALL.iter().copied().filter(|t| t.kind().is_edge() && *t != ConcreteType::PennedIn).collect();
        *edges.choose(&mut self.rng).unwrap()
    }

    /// A valid landscape with up to `n` landmarks of every kind.
    pub fn landscape(&mut self, n: usize) -> Landscape {
        let mut l = Landscape::new();
        let vertices = (n / 3).max(1);
        for _ in 0..vertices.min(n) {
            l.put(self.vertex());
        }
        while l.len() < n {
            let ids: Vec<LandmarkId> = l.ids().collect();
            let c = match self.rng.gen_range(0..10) {
                0 => self.pen(&ids),
                1 => {
                    let pens: Vec<LandmarkId> = l.iter().filter(|c| c.is_pen()).map(|c| c.id).collect();
                    match pens.choose(&mut self.rng) {
                        Some(&p) => {
                            let member = *ids.choose(&mut self.rng).unwrap();
                            self.edge(ConcreteType::PennedIn, member, p)
                        }
                        None => self.vertex(),
                    }
                }
                2 => self.vertex(),
                3 => {
                    let target = *ids.choose(&mut self.rng).unwrap();
                    self.edge(ConcreteType::Equates, target, LandmarkId::PIT)
                }
                _ => {
                    let a = *ids.choose(&mut self.rng).unwrap();
                    let b = *ids.choose(&mut self.rng).unwrap();
                    let t = self.edge_type();
                    self.edge(t, a, b)
                }
            };
            if c.validate(&l).is_ok() {
                l.put(c);
            }
        }
        l
    }

    /// `c` moved up the contribution order: more tags, authorships and
    /// pen members, a higher status, and possibly extra marks.
    pub fn grow(&mut self, c: &Contribution, pool: &[LandmarkId]) -> Contribution {
        let mut d = c.clone();
        d.tags.extend(self.tags());
        if self.rng.gen_bool(0.5) {
            d.authorships.insert(self.authorship());
        }
        let s = self.status();
        d.status = d.status.join(&s);
        if let Payload::Pen { contents } = &mut d.payload {
            contents.extend(self.subset(pool, 0.2));
        }
        if self.rng.gen_bool(0.3) {
            let extra = self.marks(&[c.id]);
            d.marks = mmm_core::model::merge_marks(&d.marks, &extra);
        }
        d.timestamp = self.rng.gen_range(0..1_000_000);
        d
    }

    /// A contribution sharing label, type and payload with `c`; pens may
    /// differ in contents.
    pub fn duplicate(&mut self, c: &Contribution, id: LandmarkId, pool: &[LandmarkId]) -> Contribution {
        let mut d = self.base(id, c.label.clone(), c.ctype, c.payload.clone());
        if let Payload::Pen { .. } = c.payload {
            d.payload = Payload::pen(self.subset(pool, 0.3));
        }
        d.marks = self.marks(&[c.id, id]);
        d
    }

    /// Random vertices and edges for walk and metric checks; edges may sit
    /// on other edges and some carry tags.
    pub fn graph(&mut self, nodes: usize, edges: usize, meta_edges: bool) -> Landscape {
        let mut l = Landscape::new();
        for _ in 0..nodes {
            let mut v = self.vertex();
            v.label = format!("node {}", l.len());
            l.put(v);
        }
        let vertex_ids: Vec<LandmarkId> = l.ids().collect();
        for _ in 0..edges {
            let pool: Vec<LandmarkId> = if meta_edges { l.ids().collect() } else { vertex_ids.clone() };
            let a = *pool.choose(&mut self.rng).unwrap();
            let mut b = *pool.choose(&mut self.rng).unwrap();
            if self.rng.gen_bool(0.03) {
                b = LandmarkId::PIT;
            }
            let t = self.edge_type();
            let e = self.edge(t, a, b);
            if e.validate(&l).is_ok() {
                l.put(e);
            }
        }
        l
    }

    pub fn wayfarer_config(&mut self) -> WayfarerConfig {
        let types = if self.rng.gen_bool(0.5) {
            BTreeSet::new()
        } else {
            ConcreteType::ALL.iter().copied().filter(|t| t.kind().is_edge() && self.rng.gen_bool(0.5)).collect()
        };
        let direction = *[DirectionPolicy::Any, DirectionPolicy::ForwardOnly, DirectionPolicy::BackwardOnly]
            .choose(&mut self.rng)
            .unwrap();
        WayfarerConfig {
            max_edges: self.rng.gen_range(0..5),
            traversable_types: types,
            excluded_tags: self.subset(TAGS, 0.2).into_iter().map(|t| Tag::new(t).unwrap()).collect(),
            direction,
        }
    }
}

/// Every tag an edge carries, directional ones included.
pub fn every_tag(c: &Contribution) -> BTreeSet<Tag> {
    let mut out = c.tags.clone();
    if let Payload::BidirEdge { tags_fwd, tags_bwd, .. } = &c.payload {
        out.extend(tags_fwd.iter().cloned());
        out.extend(tags_bwd.iter().cloned());
    }
    out
}

/// Reference walk: explicit incidence adjacency honouring `cfg`, then BFS
/// bounded by `2 * max_edges` steps. The pit is never entered.
pub fn oracle_area(l: &Landscape, start: LandmarkId, cfg: &WayfarerConfig) -> BTreeSet<LandmarkId> {
    let mut adj: BTreeMap<LandmarkId, Vec<LandmarkId>> = BTreeMap::new();
    for e in l.iter() {
        let (a, b, directed) = match &e.payload {
            Payload::AdirEdge { endpoints } => (endpoints[0], endpoints[1], false),
            Payload::UnidirEdge { from, to } => (*from, *to, true),
            Payload::BidirEdge { from, to, .. } => (*from, *to, false),
            _ => continue,
        };
        let type_ok = cfg.traversable_types.is_empty() || cfg.traversable_types.contains(&e.ctype);
        if !type_ok || every_tag(e).iter().any(|t| cfg.excluded_tags.contains(t)) {
            continue;
        }
        for (end, is_source) in [(a, true), (b, false)] {
            if end.is_pit() || !l.contains(end) {
                continue;
            }
            let (into_edge, out_of_edge) = match (directed, cfg.direction) {
                (false, _) | (true, DirectionPolicy::Any) => (true, true),
                (true, DirectionPolicy::ForwardOnly) => (is_source, !is_source),
                (true, DirectionPolicy::BackwardOnly) => (!is_source, is_source),
            };
            if into_edge {
                adj.entry(end).or_default().push(e.id);
            }
            if out_of_edge {
                adj.entry(e.id).or_default().push(end);
            }
        }
    }
    let limit = 2 * cfg.max_edges;
    let mut dist = BTreeMap::from([(start, 0usize)]);
    let mut queue = VecDeque::from([start]);
    while let Some(x) = queue.pop_front() {
        if dist[&x] == limit {
            continue;
        }
        for &y in adj.get(&x).into_iter().flatten() {
            if !dist.contains_key(&y) {
                dist.insert(y, dist[&x] + 1);
                queue.push_back(y);
            }
        }
    }
    dist.into_keys().collect()
}
