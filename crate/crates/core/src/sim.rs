//! Deterministic in-process network of peers.
//!
//! Time is a logical tick. Every message sent during tick `t` is delivered
//! at the start of tick `t + 1`, in send order. Peers auto-accept whatever
//! survives the limbo filter, register subscription requests, purge expired
//! limbo and, when gossiping, forward public contributions to neighbours.

use std::collections::{BTreeMap, BTreeSet, VecDeque};

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde::Serialize;
use serde_json::{json, Value};

use crate::error::{Error, Result};
use crate::explorer::{topic_extent_area, Topic};
use crate::id::LandmarkId;
use crate::landscape::{Area, Landscape};
use crate::model::{marks, ConcreteType, Draft, Status};
use crate::serial::{canonical_digest, LandscapeDigest, MessageKind, WireMessage};
use crate::sync::{
    accept_new, offer_share, receive_share, reward, serve_subscriptions, subscribe, trickle, OfferBody, ReceiveReport,
    ShareContract, SubscriptionBook, SubscriptionRequest,
};
use crate::territory::Territory;

pub const SCENARIOS: &[&str] =
    &["flood-public", "limbo-filter", "trickle-chain", "disjoint-topics", "same-topic", "no-peers"];

pub struct SimPeer {
    pub territory: Territory,
    pub book: SubscriptionBook,
    /// forward public contributions to every neighbour
    pub gossip: bool,
    pub received: Vec<ReceiveReport>,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct TraceEntry {
    pub tick: u64,
    pub from: usize,
    pub to: usize,
    pub line: String,
}

pub struct SimNetwork {
    pub peers: Vec<SimPeer>,
    pub links: BTreeSet<(usize, usize)>,
    pub tick: u64,
    pub rng: ChaCha8Rng,
    pub trace: Vec<TraceEntry>,
    /// domain errors raised while handling messages
    pub errors: Vec<String>,
    in_flight: VecDeque<(usize, usize, WireMessage)>,
}

impl SimNetwork {
    /// Peers named after `names`; links are undirected.
    pub fn new(seed: u64, names: &[&str], links: &[(usize, usize)]) -> Self {
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        let peers = names
            .iter()
            .map(|name| SimPeer {
                territory: Territory::simulated(*name, capitalised(name), rng.gen()),
                book: SubscriptionBook::default(),
                gossip: false,
                received: Vec::new(),
            })
            .collect();
        let links = links.iter().map(|&(a, b)| (a.min(b), a.max(b))).filter(|(a, b)| a != b).collect();
        SimNetwork { peers, links, tick: 0, rng, trace: Vec::new(), errors: Vec::new(), in_flight: VecDeque::new() }
    }

    pub fn full_mesh(seed: u64, names: &[&str]) -> Self {
        let n = names.len();
        let links: Vec<(usize, usize)> = (0..n).flat_map(|a| (a + 1..n).map(move |b| (a, b))).collect();
        SimNetwork::new(seed, names, &links)
    }

    pub fn linked(&self, a: usize, b: usize) -> bool {
        self.links.contains(&(a.min(b), a.max(b)))
    }

    pub fn neighbours(&self, a: usize) -> Vec<usize> {
        (0..self.peers.len()).filter(|&b| b != a && self.linked(a, b)).collect()
    }

    pub fn index_of(&self, name: &str) -> Option<usize> {
        self.peers.iter().position(|p| p.territory.name == name)
    }

    pub fn territory(&mut self, i: usize) -> &mut Territory {
        &mut self.peers[i].territory
    }

    /// Longest shortest path between two peers; `None` when disconnected.
    pub fn diameter(&self) -> Option<usize> {
        let mut worst = 0;
        for s in 0..self.peers.len() {
            let mut dist = BTreeMap::from([(s, 0usize)]);
            let mut queue = VecDeque::from([s]);
            while let Some(x) = queue.pop_front() {
                for y in self.neighbours(x) {
                    if !dist.contains_key(&y) {
                        dist.insert(y, dist[&x] + 1);
                        queue.push_back(y);
                    }
                }
            }
            if dist.len() < self.peers.len() {
                return None;
            }
            worst = worst.max(*dist.values().max().unwrap_or(&0));
        }
        Some(worst)
    }

    /// Queues `msg` for delivery next tick.
    pub fn send(&mut self, from: usize, to: usize, msg: WireMessage) -> Result<()> {
        if !self.linked(from, to) {
            return Err(Error::Forbidden(format!("no link between peers {from} and {to}")));
        }
        self.trace.push(TraceEntry { tick: self.tick, from, to, line: msg.encode_line() });
        self.in_flight.push_back((from, to, msg));
        Ok(())
    }

    /// Shares `ids` from peer `from` with peer `to`.
    pub fn share(&mut self, from: usize, to: usize, ids: &[LandmarkId], contract: &ShareContract) -> Result<()> {
        let peer = self.peers[to].territory.name.clone();
        let msg = offer_share(&mut self.peers[from].territory, &peer, ids, contract)?;
        self.send(from, to, msg)
    }

    /// Subscribes `subscriber` to `topic` as served by `server`.
    pub fn subscribe(
        &mut self,
        subscriber: usize,
        server: usize,
        topic: Topic,
        frequency: u64,
        until: u64,
    ) -> Result<()> {
        let req = SubscriptionRequest {
            topic,
            frequency,
            until,
            serving_peer: self.peers[server].territory.name.clone(),
            forwarding: Default::default(),
        };
        let msg = subscribe(&mut self.peers[subscriber].territory, &req)?;
        self.send(subscriber, server, msg)
    }

    pub fn pending(&self) -> usize {
        self.in_flight.len()
    }

    /// Advances one tick: delivery, then housekeeping and outbound traffic.
    pub fn step(&mut self) {
        self.tick += 1;
        let now = self.tick;
        for p in &mut self.peers {
            p.territory.set_now(now);
            p.territory.store_mut().purge_limbo(now);
        }
        let delivered: Vec<_> = self.in_flight.drain(..).collect();
        for (_, to, msg) in delivered {
            if let Err(e) = self.deliver(to, &msg) {
                self.errors.push(format!("tick {now} peer {to}: {e}"));
            }
        }
        self.flush();
    }

    /// Runs every peer's outbound traffic for the current tick.
    pub fn flush(&mut self) {
        for i in 0..self.peers.len() {
            if let Err(e) = self.outbound(i) {
                self.errors.push(format!("tick {} peer {i}: {e}", self.tick));
            }
        }
    }

    pub fn run(&mut self, ticks: u64) {
        for _ in 0..ticks {
            self.step();
        }
    }

    fn deliver(&mut self, to: usize, msg: &WireMessage) -> Result<()> {
        let peer = &mut self.peers[to];
        if msg.msg == MessageKind::Subscribe {
            return peer.book.accept(&peer.territory, msg);
        }
        let report = receive_share(&mut peer.territory, msg)?;
        for id in &report.fresh {
            accept_new(&mut peer.territory, *id)?;
        }
        peer.received.push(report);
        Ok(())
    }

    fn outbound(&mut self, i: usize) -> Result<()> {
        let now = self.tick;
        let batches = {
            let p = &mut self.peers[i];
            serve_subscriptions(&mut p.territory, &mut p.book, now)?
        };
        for (who, msg) in batches {
            if let Some(j) = self.index_of(&who) {
                self.send(i, j, msg)?;
            }
        }
        if self.peers[i].gossip {
            for j in self.neighbours(i) {
                let name = self.peers[j].territory.name.clone();
                let ids: Vec<LandmarkId> = self.peers[i]
                    .territory
                    .landscape()
                    .iter()
                    .filter(|c| c.status.is_public() && !c.is_obsolete())
                    .filter(|c| !c.marks_named(marks::SHARED_WITH).any(|m| m.param("peer") == Some(name.as_str())))
                    .map(|c| c.id)
                    .collect();
                if !ids.is_empty() {
                    self.share(i, j, &ids, &ShareContract::default())?;
                }
            }
        }
        Ok(())
    }

    pub fn digests(&self) -> BTreeMap<String, LandscapeDigest> {
        self.peers.iter().map(|p| (p.territory.name.clone(), canonical_digest(p.territory.landscape()))).collect()
    }

    /// Number of peers holding each contribution.
    pub fn replication(&self) -> BTreeMap<LandmarkId, usize> {
        let mut out = BTreeMap::new();
        for p in &self.peers {
            for id in p.territory.landscape().ids() {
                *out.entry(id).or_insert(0) += 1;
            }
        }
        out
    }
}

fn capitalised(name: &str) -> String {
    let mut chars = name.chars();
    chars.next().map(|c| c.to_uppercase().chain(chars).collect()).unwrap_or_default()
}

/// Digest of `area` with house-keeping marks removed, for comparing the
/// same material across territories.
pub fn area_digest(l: &Landscape, area: &Area) -> LandscapeDigest {
    let stripped = l.restrict(area).into_contributions().map(|mut c| {
        c.marks.clear();
        c
    });
    canonical_digest(&Landscape::from_contributions(stripped).expect("restriction of a landscape"))
}

/// A Local contribution found in a message.
#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct Leak {
    pub tick: u64,
    pub from: usize,
    pub to: usize,
    pub id: LandmarkId,
}

/// Every Local contribution carried by any traced message. Lines that do
/// not decode as offers are skipped.
pub fn scan_trace(trace: &[TraceEntry]) -> Vec<Leak> {
    let mut leaks = Vec::new();
    for entry in trace {
        let Ok(msg) = WireMessage::decode_line(&entry.line) else { continue };
        let Ok(body) = msg.body_as::<OfferBody>() else { continue };
        for c in body.contributions.iter().filter(|c| c.status == Status::Local) {
            leaks.push(Leak { tick: entry.tick, from: entry.from, to: entry.to, id: c.id });
        }
    }
    leaks
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct Outcome {
    pub scenario: String,
    pub seed: u64,
    pub ticks: u64,
    pub messages: usize,
    pub digests: BTreeMap<String, LandscapeDigest>,
    pub replication: BTreeMap<LandmarkId, usize>,
    pub local_leaks: usize,
    pub errors: Vec<String>,
    pub details: Value,
}

impl Outcome {
    fn from_network(scenario: &str, seed: u64, net: &SimNetwork, details: Value) -> Outcome {
        Outcome {
            scenario: scenario.to_string(),
            seed,
            ticks: net.tick,
            messages: net.trace.len(),
            digests: net.digests(),
            replication: net.replication(),
            local_leaks: scan_trace(&net.trace).len(),
            errors: net.errors.clone(),
            details,
        }
    }

    /// Pretty JSON with a trailing newline.
    pub fn to_json(&self) -> String {
        serde_json::to_string_pretty(self).expect("outcome serializes") + "\n"
    }
}

pub fn run_scenario(name: &str, seed: u64) -> Result<Outcome> {
    let (net, details) = match name {
        "flood-public" => flood_public(seed, 5)?,
        "limbo-filter" => limbo_filter(seed)?,
        "trickle-chain" => trickle_chain(seed)?,
        "disjoint-topics" => {
            let (net, report) = disjoint_topics(seed, 50)?;
            (net, serde_json::to_value(report).expect("report serializes"))
        }
        "same-topic" => same_topic(seed)?,
        "no-peers" => no_peers(seed)?,
        other => return Err(Error::UnknownScenario(other.to_string())),
    };
    Ok(Outcome::from_network(name, seed, &net, details))
}

fn node(t: &mut Territory, label: &str, ctype: ConcreteType) -> Result<LandmarkId> {
    t.contribute(Draft::vertex(label, ctype))
}

fn republishable() -> ShareContract {
    let mut c = ShareContract::default();
    c.terms.allow_republish = true;
    c
}

/// One public contribution flooded across a full mesh of `n` gossiping peers.
pub fn flood_public(seed: u64, n: usize) -> Result<(SimNetwork, Value)> {
    let names: Vec<String> = (0..n).map(|i| format!("peer{i}")).collect();
    let refs: Vec<&str> = names.iter().map(String::as_str).collect();
    let mut net = SimNetwork::full_mesh(seed, &refs);
    flood(&mut net)
}

/// Floods one public contribution from peer 0 over whatever topology `net` has.
pub fn flood(net: &mut SimNetwork) -> Result<(SimNetwork, Value)> {
    for p in &mut net.peers {
        p.gossip = true;
    }
    let t = net.territory(0);
    let c = node(t, "The sky is blue.", ConcreteType::Narrative)?;
    crate::sync::publish(t, c)?;
    net.flush();
    let limit = net.peers.len() as u64 + 2;
    let mut rounds = None;
    while net.tick < limit {
        net.step();
        let holders = net.peers.iter().filter(|p| p.territory.landscape().contains(c)).count();
        if rounds.is_none() && holders == net.peers.len() {
            rounds = Some(net.tick);
        }
        if rounds.is_some() && net.pending() == 0 {
            break;
        }
    }
    let details = json!({ "contribution": c, "rounds": rounds, "diameter": net.diameter() });
    Ok((std::mem::replace(net, SimNetwork::new(0, &[], &[])), details))
}

/// Alice obsoletes `c` while Bob links to it, then Bob shares back twice:
/// during limbo and after the purge.
pub fn limbo_filter(seed: u64) -> Result<(SimNetwork, Value)> {
    let mut net = SimNetwork::full_mesh(seed, &["alice", "bob"]);
    let c = node(net.territory(0), "Ice is less dense than water.", ConcreteType::Narrative)?;
    net.share(0, 1, &[c], &republishable())?;
    net.step();

    let bob = net.territory(1);
    let c2 = node(bob, "Icebergs float.", ConcreteType::Narrative)?;
    let e = bob.contribute(Draft::edge(ConcreteType::Supports, c, c2))?;
    crate::activities::obsolete(net.territory(0), c)?;
    let deadline = net.peers[0].territory.landscape().obsolete()[&c];
    let cluster = [c, c2, e];
    net.share(1, 0, &cluster, &ShareContract::default())?;
    net.step();
    let held = |net: &SimNetwork| -> Vec<bool> {
        let l = net.peers[0].territory.landscape();
        cluster.iter().map(|id| l.get(*id).is_some_and(|x| !x.is_obsolete())).collect()
    };
    let during = held(&net);
    let filtered_during = net.peers[0].received.last().map(|r| r.filtered.clone()).unwrap_or_default();

    while net.tick <= deadline {
        net.step();
    }
    let purged = !net.peers[0].territory.landscape().contains(c);
    net.share(1, 0, &cluster, &ShareContract::default())?;
    net.step();
    let fresh_after = net.peers[0].received.last().map(|r| r.fresh.clone()).unwrap_or_default();
    let details = json!({
        "cluster": cluster,
        "live_at_alice_during_limbo": during,
        "filtered_during_limbo": filtered_during,
        "purged": purged,
        "fresh_after_purge": fresh_after,
        "live_at_alice_after": held(&net),
    });
    Ok((net, details))
}

fn reward_distance(t: &Territory, id: LandmarkId, rewarded: LandmarkId) -> Option<u64> {
    t.landscape().get(id)?.reward_marks().into_iter().find(|r| r.rewarded_id == rewarded).map(|r| r.distance)
}

/// Alice → Bob → Carol build a chain; Carol's contribution is rewarded and
/// the reward travels back. A shortcut then lowers Alice's distance.
pub fn trickle_chain(seed: u64) -> Result<(SimNetwork, Value)> {
    let mut net = SimNetwork::new(seed, &["alice", "bob", "carol"], &[(0, 1), (1, 2), (0, 2)]);
    let ca = node(net.territory(0), "Plants need light.", ConcreteType::Narrative)?;
    net.share(0, 1, &[ca], &republishable())?;
    net.step();

    let bob = net.territory(1);
    let cb = node(bob, "Plants grow towards windows.", ConcreteType::Narrative)?;
    let ab = bob.contribute(Draft::edge(ConcreteType::Supports, ca, cb))?;
    net.share(1, 2, &[ca, cb, ab], &republishable())?;
    net.step();

    let carol = net.territory(2);
    let cc = node(carol, "Phototropism steers growth.", ConcreteType::Narrative)?;
    let bc = carol.contribute(Draft::edge(ConcreteType::Supports, cb, cc))?;
    reward(carol, cc, "insight")?;
    trickle(carol)?;
    net.share(2, 1, &[ca, cb, ab, cc, bc], &republishable())?;
    net.step();
    net.share(1, 0, &[ca, cb, ab, cc, bc], &republishable())?;
    net.step();
    let chain = json!([
        reward_distance(&net.peers[0].territory, ca, cc),
        reward_distance(&net.peers[1].territory, cb, cc),
        reward_distance(&net.peers[2].territory, cc, cc),
    ]);

    let carol = net.territory(2);
    carol.contribute(Draft::edge(ConcreteType::Supports, ca, cc))?;
    trickle(carol)?;
    net.share(2, 0, &[ca], &republishable())?;
    net.step();
    let details = json!({
        "rewarded": cc,
        "chain_distances": chain,
        "alice_after_shortcut": reward_distance(&net.peers[0].territory, ca, cc),
        "alice_via_bob_and_carol": [
            reward_distance(&net.peers[1].territory, ca, cc),
            reward_distance(&net.peers[2].territory, ca, cc),
        ],
    });
    Ok((net, details))
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct NonConvergenceReport {
    pub ticks: u64,
    pub distinct_every_tick: bool,
    pub distinct_ticks: u64,
    pub messages: usize,
    /// off-topic contributions found on the other peer
    pub off_topic_leaks: usize,
}

/// Two peers each subscribed to the other's topic while both also write
/// off-topic material. Runs `ticks` ticks.
pub fn disjoint_topics(seed: u64, ticks: u64) -> Result<(SimNetwork, NonConvergenceReport)> {
    let mut net = SimNetwork::full_mesh(seed, &["alice", "bob"]);
    let mut anchors = Vec::new();
    let mut private = Vec::new();
    for i in 0..2 {
        let t = net.territory(i);
        let name = t.name.clone();
        anchors.push(node(t, &format!("{name}'s topic"), ConcreteType::Narrative)?);
        private.push(node(t, &format!("{name}'s notebook"), ConcreteType::Narrative)?);
    }
    net.share(0, 1, &[anchors[0]], &ShareContract::default())?;
    net.share(1, 0, &[anchors[1]], &ShareContract::default())?;
    net.step();
    net.subscribe(1, 0, Topic::new(anchors[0], 1), 1, u64::MAX)?;
    net.subscribe(0, 1, Topic::new(anchors[1], 1), 1, u64::MAX)?;

    let mut off_topic: [BTreeSet<LandmarkId>; 2] = Default::default();
    let mut distinct_ticks = 0;
    for _ in 0..ticks {
        for i in 0..2 {
            let on_topic = net.rng.gen_bool(0.5);
            let tick = net.tick;
            let t = net.territory(i);
            let target = if on_topic { anchors[i] } else { private[i] };
            let label = format!("{} note {tick}", t.name);
            let n = node(t, &label, ConcreteType::Narrative)?;
            let e = t.contribute(Draft::edge(ConcreteType::Supports, n, target))?;
            if !on_topic {
                off_topic[i].extend([n, e]);
            }
        }
        net.step();
        let d = net.digests();
        if d["alice"] != d["bob"] {
            distinct_ticks += 1;
        }
    }
    let leaks = (0..2)
        .map(|i| off_topic[i].iter().filter(|id| net.peers[1 - i].territory.landscape().contains(**id)).count())
        .sum();
    let report = NonConvergenceReport {
        ticks,
        distinct_every_tick: distinct_ticks == ticks,
        distinct_ticks,
        messages: net.trace.len(),
        off_topic_leaks: leaks,
    };
    Ok((net, report))
}

/// Non-convergence check for a scenario; only `disjoint-topics` and
/// `no-peers` define one.
pub fn assert_non_convergence(name: &str, seed: u64) -> Result<NonConvergenceReport> {
    match name {
        "disjoint-topics" => Ok(disjoint_topics(seed, 50)?.1),
        "no-peers" => {
            let (net, _) = no_peers(seed)?;
            Ok(NonConvergenceReport {
                ticks: net.tick,
                distinct_every_tick: false,
                distinct_ticks: 0,
                messages: net.trace.len(),
                off_topic_leaks: 0,
            })
        }
        other if SCENARIOS.contains(&other) => Err(Error::Forbidden(format!("{other} has no non-convergence check"))),
        other => Err(Error::UnknownScenario(other.to_string())),
    }
}

/// Two peers serving each other the same topic; extents end up equal.
pub fn same_topic(seed: u64) -> Result<(SimNetwork, Value)> {
    let mut net = SimNetwork::full_mesh(seed, &["alice", "bob"]);
    let anchor = node(net.territory(0), "Shared question?", ConcreteType::Question)?;
    net.share(0, 1, &[anchor], &republishable())?;
    net.step();
    net.subscribe(1, 0, Topic::new(anchor, 1), 1, u64::MAX)?;
    net.subscribe(0, 1, Topic::new(anchor, 1), 1, u64::MAX)?;
    for round in 0..5 {
        for i in 0..2 {
            let t = net.territory(i);
            let label = format!("{} answer {round}", t.name);
            let n = node(t, &label, ConcreteType::Narrative)?;
            t.contribute(Draft::edge(ConcreteType::Answers, n, anchor))?;
        }
        net.step();
    }
    net.run(3);
    let topic = Topic::new(anchor, 1);
    let mut extents = Vec::new();
    for p in &net.peers {
        let l = p.territory.landscape();
        let area = topic_extent_area(l, &topic)?;
        extents.push((area.len(), area_digest(l, &area)));
    }
    let details = json!({
        "extent_sizes": [extents[0].0, extents[1].0],
        "extent_digests": [extents[0].1, extents[1].1],
        "equal": extents[0] == extents[1],
    });
    Ok((net, details))
}

/// A lone peer with some content; ticks must not change it.
pub fn no_peers(seed: u64) -> Result<(SimNetwork, Value)> {
    let mut net = SimNetwork::new(seed, &["solo"], &[]);
    let t = net.territory(0);
    let q = node(t, "Is anyone there?", ConcreteType::Question)?;
    let a = node(t, "Not yet.", ConcreteType::Narrative)?;
    t.contribute(Draft::edge(ConcreteType::Answers, a, q))?;
    let before = canonical_digest(net.peers[0].territory.landscape());
    net.run(10);
    let after = canonical_digest(net.peers[0].territory.landscape());
    Ok((net, json!({ "unchanged": before == after })))
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn unknown_scenario() {
        assert_eq!(run_scenario("nope", 1).unwrap_err().name(), "UnknownScenario");
    }

    #[test]
    fn every_scenario_is_deterministic() {
        for name in SCENARIOS {
            let a = run_scenario(name, 7).unwrap();
            let b = run_scenario(name, 7).unwrap();
            assert_eq!(a.to_json(), b.to_json(), "{name}");
            assert!(a.errors.is_empty(), "{name}: {:?}", a.errors);
            assert_eq!(a.local_leaks, 0, "{name}");
        }
    }

    #[test]
    fn flood_reaches_everyone_in_one_round() {
        let o = run_scenario("flood-public", 3).unwrap();
        assert_eq!(o.details["rounds"], json!(1));
        assert_eq!(o.details["diameter"], json!(1));
        assert!(o.replication.values().all(|&n| n == 5));
    }

    #[test]
    fn flood_on_a_line_takes_diameter_rounds() {
        let mut net = SimNetwork::new(1, &["a", "b", "c", "d"], &[(0, 1), (1, 2), (2, 3)]);
        let (_, details) = flood(&mut net).unwrap();
        assert_eq!(details["rounds"], json!(3));
    }

    #[test]
    fn limbo_filter_story() {
        let d = run_scenario("limbo-filter", 7).unwrap().details;
        assert_eq!(d["live_at_alice_during_limbo"], json!([false, false, false]));
        assert_eq!(d["purged"], json!(true));
        assert_eq!(d["fresh_after_purge"].as_array().unwrap().len(), 3);
        assert_eq!(d["live_at_alice_after"], json!([true, true, true]));
    }

    #[test]
    fn trickle_story() {
        let d = run_scenario("trickle-chain", 7).unwrap().details;
        assert_eq!(d["chain_distances"], json!([2, 1, 0]));
        assert_eq!(d["alice_after_shortcut"], json!(1));
    }

    #[test]
    fn topics() {
        let r = assert_non_convergence("disjoint-topics", 5).unwrap();
        assert!(r.distinct_every_tick);
        assert_eq!(r.off_topic_leaks, 0);
        let same = run_scenario("same-topic", 5).unwrap().details;
        assert_eq!(same["equal"], json!(true));
        let solo = run_scenario("no-peers", 5).unwrap();
        assert_eq!((solo.messages, solo.details["unchanged"].clone()), (0, json!(true)));
    }
}
