//! In-memory graph state: contributions by id plus the derived indices.

use std::collections::{BTreeMap, BTreeSet};

use crate::error::{Error, Result};
use crate::id::{ContentKey, LandmarkId};
use crate::model::{merge_contributions, mergeable, Contribution, Resolve, Tag};

pub type Area = BTreeSet<LandmarkId>;

/// Shortest id prefix [`Landscape::resolve`] accepts.
pub const MIN_PREFIX: usize = 8;

/// What [`Landscape::insert`] did with its argument.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Inserted {
    New,
    /// merged into an existing homologue
    Merged,
}

/// A landscape. The pit is implicit: it is always a member but never stored.
#[derive(Debug, Clone, Default, PartialEq, Eq)]
pub struct Landscape {
    by_id: BTreeMap<LandmarkId, Contribution>,
    by_content_key: BTreeMap<ContentKey, BTreeSet<LandmarkId>>,
    incident: BTreeMap<LandmarkId, BTreeSet<LandmarkId>>,
    pen_membership: BTreeMap<LandmarkId, BTreeSet<LandmarkId>>,
    tag_index: BTreeMap<Tag, BTreeSet<LandmarkId>>,
    obsolete: BTreeMap<LandmarkId, u64>,
    dangling: BTreeMap<LandmarkId, BTreeSet<LandmarkId>>,
}

fn add_to(map: &mut BTreeMap<LandmarkId, BTreeSet<LandmarkId>>, key: LandmarkId, v: LandmarkId) {
    map.entry(key).or_default().insert(v);
}

fn remove_from<K: Ord>(map: &mut BTreeMap<K, BTreeSet<LandmarkId>>, key: K, v: LandmarkId) {
    if let Some(set) = map.get_mut(&key) {
        set.remove(&v);
        if set.is_empty() {
            map.remove(&key);
        }
    }
}

impl Landscape {
    pub fn new() -> Self {
        Self::default()
    }

    /// Builds a landscape, merging homologues. Fails on conflicting ids.
    pub fn from_contributions<I: IntoIterator<Item = Contribution>>(items: I) -> Result<Self> {
        let mut l = Landscape::new();
        for c in items {
            l.insert_unchecked(c)?;
        }
        Ok(l)
    }

    pub fn len(&self) -> usize {
        self.by_id.len()
    }

    pub fn is_empty(&self) -> bool {
        self.by_id.is_empty()
    }

    pub fn get(&self, id: LandmarkId) -> Option<&Contribution> {
        self.by_id.get(&id)
    }

    pub fn contains(&self, id: LandmarkId) -> bool {
        self.by_id.contains_key(&id)
    }

    /// True for the pit and for every stored contribution.
    pub fn has_landmark(&self, id: LandmarkId) -> bool {
        id.is_pit() || self.contains(id)
    }

    /// Looks up a landmark by the leading or trailing hex of its id (at least
    /// eight characters), or `pit` for the pit.
    pub fn resolve(&self, prefix: &str) -> Result<LandmarkId> {
        if prefix == "pit" {
            return Ok(LandmarkId::PIT);
        }
        let ok = prefix.len() >= MIN_PREFIX
            && prefix.len() <= 32
            && prefix.bytes().all(|b| b.is_ascii_digit() || (b'a'..=b'f').contains(&b));
        if !ok {
            return Err(Error::Malformed(format!("id {prefix:?} is not {MIN_PREFIX} to 32 lowercase hex characters")));
        }
        if prefix.len() == 32 && prefix.bytes().all(|b| b == b'0') {
            return Ok(LandmarkId::PIT);
        }
        let mut hits = self.by_id.keys().filter(|id| {
            let hex = id.to_hex();
            hex.starts_with(prefix) || hex.ends_with(prefix)
        });
        match (hits.next(), hits.next()) {
            (Some(id), None) => Ok(*id),
            (Some(_), Some(_)) => Err(Error::AmbiguousId(prefix.to_string())),
            (None, _) => Err(Error::UnknownId(prefix.to_string())),
        }
    }

    pub fn require(&self, id: LandmarkId) -> Result<&Contribution> {
        self.get(id).ok_or(Error::NotFound(id))
    }

    /// Contributions in id order.
    pub fn iter(&self) -> impl Iterator<Item = &Contribution> {
        self.by_id.values()
    }

    pub fn ids(&self) -> impl Iterator<Item = LandmarkId> + '_ {
        self.by_id.keys().copied()
    }

    /// Validates `c` against this landscape, then inserts or merges it.
    pub fn insert(&mut self, c: Contribution) -> Result<Inserted> {
        c.validate(self)?;
        self.insert_unchecked(c)
    }

    /// Inserts or merges without cross-landmark validation.
    pub fn insert_unchecked(&mut self, c: Contribution) -> Result<Inserted> {
        match self.by_id.get(&c.id) {
            Some(existing) if !mergeable(existing, &c) => Err(Error::DuplicateIdConflict(c.id)),
            Some(existing) => {
                let merged = merge_contributions(existing, &c)?;
                self.put(merged);
                Ok(Inserted::Merged)
            }
            None => {
                self.put(c);
                Ok(Inserted::New)
            }
        }
    }

    /// Stores `c`, overwriting any previous version and refreshing indices.
    pub fn put(&mut self, c: Contribution) {
        if let Some(old) = self.by_id.remove(&c.id) {
            self.unindex(&old);
        }
        self.dangling.remove(&c.id);
        self.index(&c);
        self.by_id.insert(c.id, c);
    }

    /// Applies `f` to the stored contribution and refreshes indices.
    pub fn update<F: FnOnce(&mut Contribution)>(&mut self, id: LandmarkId, f: F) -> Result<()> {
        let mut c = self.by_id.get(&id).cloned().ok_or(Error::NotFound(id))?;
        f(&mut c);
        self.put(c);
        Ok(())
    }

    pub fn remove(&mut self, id: LandmarkId) -> Option<Contribution> {
        let c = self.by_id.remove(&id)?;
        self.unindex(&c);
        let referrers: BTreeSet<LandmarkId> =
            self.incident.get(&id).into_iter().chain(self.pen_membership.get(&id)).flatten().copied().collect();
        if !referrers.is_empty() {
            self.dangling.insert(id, referrers);
        }
        Some(c)
    }

    fn index(&mut self, c: &Contribution) {
        self.by_content_key.entry(c.content_key()).or_default().insert(c.id);
        for tag in c.all_tags() {
            self.tag_index.entry(tag.clone()).or_default().insert(c.id);
        }
        if let Some((a, b)) = c.endpoints() {
            for end in [a, b] {
                add_to(&mut self.incident, end, c.id);
                if !end.is_pit() && !self.by_id.contains_key(&end) && end != c.id {
                    add_to(&mut self.dangling, end, c.id);
                }
            }
        }
        if let Some(contents) = c.payload.pen_contents() {
            for member in contents {
                add_to(&mut self.pen_membership, *member, c.id);
                if !member.is_pit() && !self.by_id.contains_key(member) {
                    add_to(&mut self.dangling, *member, c.id);
                }
            }
        }
        if let Some(deadline) = c.obsolete_deadline() {
            self.obsolete.insert(c.id, deadline);
        }
    }

    fn unindex(&mut self, c: &Contribution) {
        remove_from(&mut self.by_content_key, c.content_key(), c.id);
        for tag in c.all_tags() {
            remove_from(&mut self.tag_index, tag.clone(), c.id);
        }
        for r in c.payload.references() {
            remove_from(&mut self.dangling, r, c.id);
        }
        if let Some((a, b)) = c.endpoints() {
            remove_from(&mut self.incident, a, c.id);
            remove_from(&mut self.incident, b, c.id);
        }
        if let Some(contents) = c.payload.pen_contents() {
            for member in contents {
                remove_from(&mut self.pen_membership, *member, c.id);
            }
        }
        self.obsolete.remove(&c.id);
    }

    /// Edges having `id` as an endpoint, whether or not `id` is stored.
    pub fn incident_edges(&self, id: LandmarkId) -> impl Iterator<Item = &Contribution> {
        self.incident.get(&id).into_iter().flatten().filter_map(|e| self.by_id.get(e))
    }

    pub fn incident_ids(&self, id: LandmarkId) -> BTreeSet<LandmarkId> {
        self.incident.get(&id).cloned().unwrap_or_default()
    }

    pub fn pens_containing(&self, id: LandmarkId) -> BTreeSet<LandmarkId> {
        self.pen_membership.get(&id).cloned().unwrap_or_default()
    }

    pub fn with_tag(&self, tag: &Tag) -> BTreeSet<LandmarkId> {
        self.tag_index.get(tag).cloned().unwrap_or_default()
    }

    pub fn with_content_key(&self, key: &ContentKey) -> BTreeSet<LandmarkId> {
        self.by_content_key.get(key).cloned().unwrap_or_default()
    }

    /// Obsolete contribution ids with their limbo deadline.
    pub fn obsolete(&self) -> &BTreeMap<LandmarkId, u64> {
        &self.obsolete
    }

    pub fn is_obsolete(&self, id: LandmarkId) -> bool {
        self.obsolete.contains_key(&id)
    }

    /// Missing ids mapped to the stored contributions that reference them.
    pub fn dangling(&self) -> &BTreeMap<LandmarkId, BTreeSet<LandmarkId>> {
        &self.dangling
    }

    /// Sub-landscape holding the contributions whose ids are in `area`.
    pub fn restrict(&self, area: &Area) -> Landscape {
        let mut out = Landscape::new();
        for id in area {
            if let Some(c) = self.by_id.get(id) {
                out.put(c.clone());
            }
        }
        out
    }

    /// Every index agrees with a from-scratch rebuild.
    pub fn indices_consistent(&self) -> bool {
        let mut rebuilt = Landscape::new();
        for c in self.by_id.values() {
            rebuilt.put(c.clone());
        }
        rebuilt == *self
    }

    pub fn into_contributions(self) -> impl Iterator<Item = Contribution> {
        self.by_id.into_values()
    }
}

impl Resolve for Landscape {
    fn resolve(&self, id: LandmarkId) -> Option<&Contribution> {
        self.get(id)
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::model::{Authorship, ConcreteType, Draft, NoContext};
    use chrono::NaiveDate;

    fn id(n: u64) -> LandmarkId {
        LandmarkId::from_parts(n, 0)
    }

    fn author() -> Authorship {
        Authorship::new(["Anne"], NaiveDate::from_ymd_opt(2024, 1, 1).unwrap()).unwrap()
    }

    fn node(n: u64, label: &str) -> Contribution {
        Draft::vertex(label, ConcreteType::Narrative).into_contribution(id(n), author(), n, &NoContext).unwrap()
    }

    fn edge(n: u64, a: LandmarkId, b: LandmarkId) -> Contribution {
        Draft::edge(ConcreteType::Supports, a, b).into_contribution(id(n), author(), n, &NoContext).unwrap()
    }

    #[test]
    fn dangling_edges_resolve_when_endpoint_arrives() {
        let mut l = Landscape::new();
        l.insert(node(1, "a")).unwrap();
        l.insert(edge(3, id(1), id(2))).unwrap();
        assert_eq!(l.dangling().get(&id(2)), Some(&BTreeSet::from([id(3)])));
        l.insert(node(2, "b")).unwrap();
        assert!(l.dangling().is_empty());
        assert_eq!(l.incident_ids(id(2)), BTreeSet::from([id(3)]));
        assert!(l.indices_consistent());

        l.remove(id(2));
        assert_eq!(l.dangling().get(&id(2)), Some(&BTreeSet::from([id(3)])));
        assert!(l.indices_consistent());
    }

    #[test]
    fn homologues_merge_and_conflicts_fail() {
        let mut l = Landscape::new();
        assert_eq!(l.insert(node(1, "a")).unwrap(), Inserted::New);
        let mut again = node(1, "a");
        again.authorships.insert(Authorship::new(["Bob"], author().date).unwrap());
        assert_eq!(l.insert(again).unwrap(), Inserted::Merged);
        assert_eq!(l.get(id(1)).unwrap().authorships.len(), 2);
        assert_eq!(l.insert(node(1, "b")), Err(Error::DuplicateIdConflict(id(1))));
        assert_eq!(l.with_content_key(&ContentKey::new("a", "narrative")), BTreeSet::from([id(1)]));
    }

    #[test]
    fn prefixes_resolve() {
        let mut l = Landscape::new();
        l.insert(node(1, "a")).unwrap();
        l.insert(node(2, "b")).unwrap();
        let full = id(1).to_hex();
        assert_eq!(l.resolve(&full).unwrap(), id(1));
        assert_eq!(l.resolve("pit").unwrap(), LandmarkId::PIT);
        assert_eq!(l.resolve(&full[..8]).unwrap_err().name(), "AmbiguousId");
        assert_eq!(l.resolve("0000").unwrap_err().name(), "Malformed");
        assert_eq!(l.resolve("ffffffff").unwrap_err().name(), "UnknownId");
        let mut m = Landscape::new();
        let tail = LandmarkId::from_parts(7, 0xabcdef12);
        m.insert(Draft::vertex("t", ConcreteType::Narrative).into_contribution(tail, author(), 7, &NoContext).unwrap())
            .unwrap();
        m.insert(node(8, "u")).unwrap();
        assert_eq!(m.resolve("abcdef12").unwrap(), tail);
    }
}
