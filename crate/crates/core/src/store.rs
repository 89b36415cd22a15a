//! Event-sourced persistence.
//!
//! There is one [`Event`] per contribution appearance. Later attribute
//! changes rewrite that event's payload in place, so replaying shows which
//! contributions existed at a given point but with their present attributes.

use std::collections::{BTreeMap, BTreeSet};
use std::fs;
use std::io::{Read, Write};
use std::path::Path;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::id::LandmarkId;
use crate::landscape::{Inserted, Landscape};
use crate::model::{marks, Contribution, Mark};
use crate::serial::{canonical_digest, parse_landscape, serialize_landscape, LandscapeDigest};

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
#[serde(tag = "type", rename_all = "snake_case")]
pub enum EventKind {
    Created,
    Received { peer: String },
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct Event {
    pub seq: u64,
    pub wallclock: u64,
    pub kind: EventKind,
    pub payload: Contribution,
    #[serde(default)]
    pub tombstoned: bool,
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Snapshot {
    pub at_seq: u64,
    pub digest: LandscapeDigest,
    pub bytes: Vec<u8>,
}

impl Snapshot {
    /// Writes `<stem>.mmm.json` and the sidecar `<stem>.digest`.
    pub fn write_files(&self, dir: &Path, stem: &str) -> Result<()> {
        fs::write(dir.join(format!("{stem}.mmm.json")), &self.bytes)?;
        fs::write(dir.join(format!("{stem}.digest")), format!("{} {}\n", self.at_seq, self.digest))?;
        Ok(())
    }

    pub fn read_files(dir: &Path, stem: &str) -> Result<Snapshot> {
        let bytes = fs::read(dir.join(format!("{stem}.mmm.json")))?;
        let sidecar = fs::read_to_string(dir.join(format!("{stem}.digest")))?;
        let mut parts = sidecar.split_whitespace();
        let at_seq = parts
            .next()
            .and_then(|s| s.parse().ok())
            .ok_or_else(|| Error::Malformed("snapshot sidecar lacks a sequence number".into()))?;
        let digest = LandscapeDigest::from_hex(parts.next().unwrap_or_default())?;
        Ok(Snapshot { at_seq, digest, bytes })
    }
}

#[derive(Debug, Clone, Default)]
pub struct Store {
    events: Vec<Event>,
    event_of: BTreeMap<LandmarkId, usize>,
    live: Landscape,
}

impl Store {
    pub fn new() -> Self {
        Self::default()
    }

    /// Rebuilds a store from its log.
    pub fn from_events(events: Vec<Event>) -> Result<Self> {
        let mut store = Store::new();
        for (i, ev) in events.iter().enumerate() {
            if ev.seq != i as u64 + 1 {
                return Err(Error::Malformed(format!("event {} out of sequence", ev.seq)));
            }
            if !ev.tombstoned {
                store.live.insert_unchecked(ev.payload.clone())?;
                store.event_of.insert(ev.payload.id, i);
            }
        }
        store.events = events;
        Ok(store)
    }

    pub fn live(&self) -> &Landscape {
        &self.live
    }

    pub fn events(&self) -> &[Event] {
        &self.events
    }

    pub fn latest_seq(&self) -> u64 {
        self.events.len() as u64
    }

    pub fn event_for(&self, id: LandmarkId) -> Option<&Event> {
        self.event_of.get(&id).map(|&i| &self.events[i])
    }

    /// Adds a contribution. A homologue of a live contribution is merged
    /// into it and logs nothing new; the returned seq is then the original.
    pub fn append(&mut self, c: Contribution, kind: EventKind, wallclock: u64) -> Result<(u64, Inserted)> {
        let id = c.id;
        let outcome = self.live.insert(c)?;
        match outcome {
            Inserted::Merged => {
                self.refresh(id);
                Ok((self.events[self.event_of[&id]].seq, outcome))
            }
            Inserted::New => {
                let seq = self.latest_seq() + 1;
                let payload = self.live.get(id).expect("just inserted").clone();
                self.events.push(Event { seq, wallclock, kind, payload, tombstoned: false });
                self.event_of.insert(id, self.events.len() - 1);
                Ok((seq, outcome))
            }
        }
    }

    fn refresh(&mut self, id: LandmarkId) {
        if let (Some(&i), Some(c)) = (self.event_of.get(&id), self.live.get(id)) {
            self.events[i].payload = c.clone();
        }
    }

    /// Mutates a live contribution and rewrites its event payload.
    pub fn update<F: FnOnce(&mut Contribution)>(&mut self, id: LandmarkId, f: F) -> Result<()> {
        self.live.update(id, f)?;
        self.refresh(id);
        Ok(())
    }

    pub fn add_mark(&mut self, id: LandmarkId, mark: Mark) -> Result<()> {
        self.update(id, |c| {
            c.marks.insert(mark);
        })
    }

    /// Removes a contribution from the live graph and tombstones its event.
    pub fn delete(&mut self, id: LandmarkId) -> Result<Contribution> {
        let c = self.live.remove(id).ok_or(Error::NotFound(id))?;
        if let Some(i) = self.event_of.remove(&id) {
            self.events[i].tombstoned = true;
        }
        Ok(c)
    }

    /// Contributions whose events have `seq ≤ seq`, with present payloads.
    pub fn replay_to(&self, seq: u64) -> Result<Landscape> {
        let latest = self.latest_seq();
        if seq > latest {
            return Err(Error::SeqOutOfRange { seq, latest });
        }
        Landscape::from_contributions(
            self.events[..seq as usize].iter().filter(|e| !e.tombstoned).map(|e| e.payload.clone()),
        )
    }

    pub fn take_snapshot(&self) -> Snapshot {
        self.snapshot_at(self.latest_seq()).expect("latest seq is in range")
    }

    pub fn snapshot_at(&self, seq: u64) -> Result<Snapshot> {
        let bytes = serialize_landscape(&self.replay_to(seq)?);
        Ok(Snapshot { at_seq: seq, digest: LandscapeDigest::of_bytes(&bytes), bytes })
    }

    /// Restores a snapshot and applies the events that follow it.
    pub fn restore_and_replay(snapshot: &Snapshot, events: &[Event]) -> Result<Landscape> {
        if LandscapeDigest::of_bytes(&snapshot.bytes) != snapshot.digest {
            return Err(Error::DigestMismatch);
        }
        let mut l = parse_landscape(&snapshot.bytes)?;
        for ev in events.iter().filter(|e| e.seq > snapshot.at_seq && !e.tombstoned) {
            l.insert_unchecked(ev.payload.clone())?;
        }
        Ok(l)
    }

    /// Deletes obsolete contributions whose limbo deadline has passed.
    pub fn purge_limbo(&mut self, now: u64) -> BTreeSet<LandmarkId> {
        let due: BTreeSet<LandmarkId> =
            self.live.obsolete().iter().filter(|(_, &deadline)| now > deadline).map(|(id, _)| *id).collect();
        for id in &due {
            let _ = self.delete(*id);
        }
        due
    }

    pub fn refrigerate(&mut self, id: LandmarkId) -> Result<()> {
        let c = self.live.get(id).ok_or(Error::NotFound(id))?;
        if c.is_obsolete() {
            return Err(Error::AlreadyObsolete(id));
        }
        self.add_mark(id, Mark::plain(marks::REFRIGERATED))
    }

    /// The live landscape without refrigerated contributions.
    pub fn warm_view(&self) -> Landscape {
        let warm = self.live.iter().filter(|c| !c.has_mark(marks::REFRIGERATED)).cloned();
        Landscape::from_contributions(warm).expect("live contributions never conflict")
    }

    pub fn digest(&self) -> LandscapeDigest {
        canonical_digest(&self.live)
    }

    /// Writes the log as `u32` little-endian length-prefixed JSON records.
    pub fn write_log<W: Write>(&self, mut w: W) -> Result<()> {
        for ev in &self.events {
            let bytes = serde_json::to_vec(ev).map_err(|e| Error::Io(e.to_string()))?;
            let len = u32::try_from(bytes.len()).map_err(|_| Error::Io("event record too large".into()))?;
            w.write_all(&len.to_le_bytes())?;
            w.write_all(&bytes)?;
        }
        Ok(())
    }

    pub fn read_log<R: Read>(mut r: R) -> Result<Store> {
        let mut buf = Vec::new();
        r.read_to_end(&mut buf)?;
        let mut events = Vec::new();
        let mut rest = buf.as_slice();
        while !rest.is_empty() {
            if rest.len() < 4 {
                return Err(Error::Malformed("truncated event length".into()));
            }
            let len = u32::from_le_bytes(rest[..4].try_into().expect("4 bytes")) as usize;
            rest = &rest[4..];
            if rest.len() < len {
                return Err(Error::Malformed("truncated event record".into()));
            }
            let ev: Event =
                serde_json::from_slice(&rest[..len]).map_err(|e| Error::Malformed(format!("event record: {e}")))?;
            events.push(ev);
            rest = &rest[len..];
        }
        Store::from_events(events)
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::model::{Authorship, ConcreteType, Draft, NoContext};
    use chrono::NaiveDate;

    fn id(n: u64) -> LandmarkId {
        LandmarkId::from_parts(n, 1)
    }

    fn node(n: u64) -> Contribution {
        let a = Authorship::new(["A"], NaiveDate::from_ymd_opt(2024, 1, 1).unwrap()).unwrap();
        Draft::vertex(format!("node {n}"), ConcreteType::Narrative).into_contribution(id(n), a, n, &NoContext).unwrap()
    }

    fn store_of(n: u64) -> Store {
        let mut s = Store::new();
        for i in 1..=n {
            s.append(node(i), EventKind::Created, i).unwrap();
        }
        s
    }

    #[test]
    fn appends_number_events_from_one() {
        let s = store_of(3);
        assert_eq!(s.events().iter().map(|e| e.seq).collect::<Vec<_>>(), vec![1, 2, 3]);
        assert_eq!(s.live().len(), 3);
        assert_eq!(s.replay_to(0).unwrap().len(), 0);
        assert_eq!(s.replay_to(2).unwrap().len(), 2);
        assert_eq!(s.replay_to(4), Err(Error::SeqOutOfRange { seq: 4, latest: 3 }));
    }

    #[test]
    fn homologue_append_logs_nothing() {
        let mut s = store_of(2);
        let (seq, how) = s.append(node(1), EventKind::Received { peer: "bob".into() }, 9).unwrap();
        assert_eq!((seq, how), (1, Inserted::Merged));
        assert_eq!(s.latest_seq(), 2);
    }

    #[test]
    fn purge_respects_deadline() {
        let mut s = store_of(2);
        s.add_mark(id(1), Mark::obsolete(10, 110)).unwrap();
        assert!(s.purge_limbo(110).is_empty());
        assert_eq!(s.purge_limbo(111), BTreeSet::from([id(1)]));
        assert!(s.events()[0].tombstoned);
        assert_eq!(s.replay_to(2).unwrap().len(), 1);
    }

    #[test]
    fn refrigeration_keeps_history() {
        let mut s = store_of(2);
        s.refrigerate(id(2)).unwrap();
        assert_eq!(s.warm_view().len(), 1);
        assert_eq!(s.replay_to(2).unwrap().len(), 2);
        assert_eq!(s.refrigerate(LandmarkId::PIT), Err(Error::NotFound(LandmarkId::PIT)));
        s.add_mark(id(1), Mark::obsolete(0, 5)).unwrap();
        assert_eq!(s.refrigerate(id(1)), Err(Error::AlreadyObsolete(id(1))));
    }

    #[test]
    fn snapshot_restore_and_tamper() {
        let s = store_of(20);
        let snap = s.snapshot_at(10).unwrap();
        let restored = Store::restore_and_replay(&snap, s.events()).unwrap();
        assert_eq!(canonical_digest(&restored), s.digest());

        let mut bad = snap.clone();
        bad.bytes[20] ^= 1;
        assert_eq!(Store::restore_and_replay(&bad, s.events()), Err(Error::DigestMismatch));

        let empty = Store::new().take_snapshot();
        assert_eq!(empty.digest, LandscapeDigest::of_bytes(&serialize_landscape(&Landscape::new())));
    }

    #[test]
    fn log_round_trip() {
        let mut s = store_of(4);
        s.add_mark(id(2), Mark::plain(marks::HIGHLIGHTED)).unwrap();
        let mut buf = Vec::new();
        s.write_log(&mut buf).unwrap();
        let back = Store::read_log(buf.as_slice()).unwrap();
        assert_eq!(back.events(), s.events());
        assert_eq!(back.digest(), s.digest());
        assert!(Store::read_log(&buf[..buf.len() - 1]).is_err());
    }
}
