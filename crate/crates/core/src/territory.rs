//! A user's territory: the store plus identity, clock and id source.

use chrono::{DateTime, NaiveDate, Utc};

use crate::error::Result;
use crate::id::{IdGenerator, LandmarkId};
use crate::landscape::Landscape;
use crate::model::{Authorship, Contribution, Draft};
use crate::store::{EventKind, Store};

pub const DAY_MS: u64 = 24 * 60 * 60 * 1000;
/// Wall-clock limbo default: 30 days.
pub const DEFAULT_LIMBO_MS: u64 = 30 * DAY_MS;
/// Limbo default under a manual (simulated) clock, in ticks.
pub const DEFAULT_LIMBO_TICKS: u64 = 100;

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Clock {
    System,
    /// Logical time, read as epoch milliseconds.
    Manual(u64),
}

impl Clock {
    pub fn now(&self) -> u64 {
        match self {
            Clock::System => Utc::now().timestamp_millis().max(0) as u64,
            Clock::Manual(t) => *t,
        }
    }
}

#[derive(Debug, Clone)]
pub struct Territory {
    pub name: String,
    pub author: String,
    pub limbo: u64,
    clock: Clock,
    ids: IdGenerator,
    store: Store,
}

impl Territory {
    /// Territory on the system clock with entropy-seeded ids.
    pub fn new(name: impl Into<String>, author: impl Into<String>) -> Self {
        Territory {
            name: name.into(),
            author: author.into(),
            limbo: DEFAULT_LIMBO_MS,
            clock: Clock::System,
            ids: IdGenerator::from_entropy(),
            store: Store::new(),
        }
    }

    /// Deterministic territory on a manual clock starting at tick 0.
    pub fn simulated(name: impl Into<String>, author: impl Into<String>, seed: u64) -> Self {
        Territory {
            name: name.into(),
            author: author.into(),
            limbo: DEFAULT_LIMBO_TICKS,
            clock: Clock::Manual(0),
            ids: IdGenerator::from_seed(seed),
            store: Store::new(),
        }
    }

    pub fn with_store(mut self, store: Store) -> Self {
        self.store = store;
        self
    }

    pub fn with_ids(mut self, ids: IdGenerator) -> Self {
        self.ids = ids;
        self
    }

    pub fn now(&self) -> u64 {
        self.clock.now()
    }

    pub fn set_now(&mut self, t: u64) {
        self.clock = Clock::Manual(t);
    }

    pub fn today(&self) -> NaiveDate {
        DateTime::from_timestamp_millis(self.now() as i64).map(|d| d.date_naive()).unwrap_or_default()
    }

    pub fn authorship(&self) -> Authorship {
        Authorship::new([self.author.clone()], self.today()).expect("author name present")
    }

    pub fn landscape(&self) -> &Landscape {
        self.store.live()
    }

    pub fn store(&self) -> &Store {
        &self.store
    }

    pub fn store_mut(&mut self) -> &mut Store {
        &mut self.store
    }

    pub fn next_id(&mut self) -> LandmarkId {
        let now = self.now();
        self.ids.next_id(now)
    }

    /// Builds a validated contribution from `draft` without storing it.
    pub fn mint(&mut self, draft: Draft) -> Result<Contribution> {
        let id = self.next_id();
        let (authorship, now) = (self.authorship(), self.now());
        draft.into_contribution(id, authorship, now, self.store.live())
    }

    /// Mints and stores a new local contribution.
    pub fn contribute(&mut self, draft: Draft) -> Result<LandmarkId> {
        let c = self.mint(draft)?;
        self.append_created(c)
    }

    pub fn append_created(&mut self, c: Contribution) -> Result<LandmarkId> {
        let id = c.id;
        let now = self.now();
        self.store.append(c, EventKind::Created, now)?;
        Ok(id)
    }
}
