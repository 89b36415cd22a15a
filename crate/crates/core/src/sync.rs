//! Peer protocol: share offers, reception, subscriptions, publication,
//! trickling rewards and the landscape join.
//!
//! Messages are [`WireMessage`]s. Offers (`SHARE_OFFER`, `SERVE_BATCH`,
//! `SUBSCRIBE_INVITE`) share one body shape, [`OfferBody`].

use std::cmp::Reverse;
use std::collections::{BTreeMap, BTreeSet, BinaryHeap};

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::explorer::{topic_extent_area, Topic};
use crate::graph::unidirectional_arcs;
use crate::id::LandmarkId;
use crate::landscape::Landscape;
use crate::model::{contribution_leq, edge_depth, marks, ContractTerms, Contribution, Mark, RewardMark, Status};
use crate::serial::{MessageKind, WireMessage};
use crate::store::EventKind;
use crate::territory::Territory;

/// Per-message cap on contributions served for one subscription.
pub const SERVE_BATCH_CAP: usize = 256;

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct ShareContract {
    pub contract_id: String,
    #[serde(flatten)]
    pub terms: ContractTerms,
    #[serde(default)]
    pub alternate_hosts: Vec<String>,
}

impl Default for ShareContract {
    fn default() -> Self {
        ShareContract { contract_id: "default".into(), terms: ContractTerms::default(), alternate_hosts: Vec::new() }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Default, Serialize, Deserialize)]
pub struct ForwardingPolicy {
    pub may_forward_to_server: bool,
    pub may_forward_to_subscriber: bool,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct SubscriptionRequest {
    pub topic: Topic,
    /// ticks between batches
    pub frequency: u64,
    pub until: u64,
    pub serving_peer: String,
    #[serde(default)]
    pub forwarding: ForwardingPolicy,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct OfferBody {
    pub from: String,
    pub to: String,
    pub contract: ShareContract,
    pub contributions: Vec<Contribution>,
    #[serde(default)]
    pub obsolete_notices: Vec<LandmarkId>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub topic: Option<Topic>,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct SubscribeBody {
    pub subscriber: String,
    pub request: SubscriptionRequest,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct NoticeBody {
    pub from: String,
    pub ids: Vec<LandmarkId>,
}

/// The peer `id` was received from, if it did not originate here.
pub fn received_from(t: &Territory, id: LandmarkId) -> Option<&str> {
    match &t.store().event_for(id)?.kind {
        EventKind::Received { peer } => Some(peer),
        EventKind::Created => None,
    }
}

fn shared_with(c: &Contribution, peer: &str) -> bool {
    c.marks_named(marks::SHARED_WITH).any(|m| m.param("peer") == Some(peer))
}

/// Whether this territory may pass `c` on to someone else.
fn may_reshare(t: &Territory, c: &Contribution) -> bool {
    match &c.status {
        Status::SharedWith { contract, .. } if received_from(t, c.id).is_some() => contract.allow_republish,
        _ => true,
    }
}

/// The outgoing copy: only `rewarded` and `obsolete` marks travel.
fn outbound_copy(c: &Contribution) -> Contribution {
    let mut out = c.clone();
    out.marks.retain(|m| m.name == marks::REWARDED || m.name == marks::OBSOLETE);
    out
}

/// Upgrades and marks `ids` as shared with `peer`, returning the outgoing copies
/// ordered so that endpoints precede the edges joining them.
fn release(t: &mut Territory, peer: &str, ids: &[LandmarkId], contract: &ShareContract) -> Result<Vec<Contribution>> {
    let target = Status::shared_with([peer], contract.terms.clone());
    let mut out = Vec::new();
    for &id in ids {
        let c = t.landscape().require(id)?;
        let status = c.status.join(&target);
        t.store_mut().update(id, |c| {
            c.status = status;
            c.marks.insert(Mark::shared_with(peer));
        })?;
        out.push(outbound_copy(t.landscape().get(id).expect("just updated")));
    }
    let l = t.landscape();
    out.sort_by_key(|c| (c.is_edge(), edge_depth(c, l), c.id));
    Ok(out)
}

/// Obsolete contributions among `ids` previously shared with `peer`.
fn notices_for(t: &Territory, peer: &str, ids: &[LandmarkId]) -> Vec<LandmarkId> {
    ids.iter()
        .filter_map(|id| t.landscape().get(*id))
        .filter(|c| c.is_obsolete() && shared_with(c, peer))
        .map(|c| c.id)
        .collect()
}

/// Offers `ids` to `peer`. Obsolete contributions are left out; any that
/// `peer` already holds travel as obsolescence notices instead.
pub fn offer_share(t: &mut Territory, peer: &str, ids: &[LandmarkId], contract: &ShareContract) -> Result<WireMessage> {
    let mut live = Vec::new();
    for &id in ids {
        let c = t.landscape().require(id)?;
        if c.is_obsolete() {
            continue;
        }
        if !may_reshare(t, c) {
            return Err(Error::ContractViolation(format!("{id} was received under a no-republish contract")));
        }
        live.push(id);
    }
    let obsolete_notices = notices_for(t, peer, ids);
    let contributions = release(t, peer, &live, contract)?;
    let body = OfferBody {
        from: t.name.clone(),
        to: peer.to_string(),
        contract: contract.clone(),
        contributions,
        obsolete_notices,
        topic: None,
    };
    Ok(WireMessage::new(MessageKind::ShareOffer, &body))
}

/// A share offer that also proposes a subscription to `topic`.
pub fn share_invite(
    t: &mut Territory,
    peer: &str,
    ids: &[LandmarkId],
    topic: Topic,
    contract: &ShareContract,
) -> Result<WireMessage> {
    let offer = offer_share(t, peer, ids, contract)?;
    let mut body: OfferBody = offer.body_as()?;
    body.topic = Some(topic);
    Ok(WireMessage::new(MessageKind::SubscribeInvite, &body))
}

/// Notices for every obsolete contribution already shared with `peer`.
pub fn obsolete_notice(t: &Territory, peer: &str) -> Option<WireMessage> {
    let ids: Vec<LandmarkId> = t.landscape().obsolete().keys().copied().collect();
    let ids = notices_for(t, peer, &ids);
    (!ids.is_empty()).then(|| WireMessage::new(MessageKind::ObsoleteNotice, &NoticeBody { from: t.name.clone(), ids }))
}

#[derive(Debug, Clone, Default, PartialEq, Eq, Serialize)]
pub struct ReceiveReport {
    pub from: String,
    /// appended and marked `new`
    pub fresh: Vec<LandmarkId>,
    /// merged into an existing homologue
    pub merged: Vec<LandmarkId>,
    /// dropped by the limbo filter
    pub filtered: Vec<LandmarkId>,
    /// refused by local validation, with the error name
    pub invalid: Vec<(LandmarkId, String)>,
    pub notices: Vec<LandmarkId>,
    /// topic proposed by an invitation
    pub invited_topic: Option<Topic>,
}

/// Incoming contributions linked, directly or through other incoming
/// contributions, to something locally in limbo.
pub fn limbo_filter(local: &Landscape, incoming: &[Contribution]) -> BTreeSet<LandmarkId> {
    let in_limbo = |id: LandmarkId| local.is_obsolete(id);
    let mut parent: BTreeMap<LandmarkId, LandmarkId> = BTreeMap::new();
    fn find(parent: &mut BTreeMap<LandmarkId, LandmarkId>, x: LandmarkId) -> LandmarkId {
        let p = *parent.entry(x).or_insert(x);
        if p == x {
            return x;
        }
        let root = find(parent, p);
        parent.insert(x, root);
        root
    }
    for c in incoming {
        find(&mut parent, c.id);
        for r in c.payload.references().into_iter().filter(|r| !r.is_pit()) {
            let (a, b) = (find(&mut parent, c.id), find(&mut parent, r));
            parent.insert(a, b);
        }
    }
    let keys: Vec<LandmarkId> = parent.keys().copied().filter(|x| in_limbo(*x)).collect();
    let tainted: BTreeSet<LandmarkId> = keys.into_iter().map(|x| find(&mut parent, x)).collect();
    incoming.iter().map(|c| c.id).filter(|id| tainted.contains(&find(&mut parent, *id))).collect()
}

/// Applies an offer. Homologues merge into what is already here; other
/// contributions arrive marked `new`. Everything accepted gains
/// `sharedWith(sender)`.
/// Receiving the same offer twice has the effect of receiving it once.
pub fn receive_share(t: &mut Territory, msg: &WireMessage) -> Result<ReceiveReport> {
    match msg.msg {
        MessageKind::ShareOffer | MessageKind::ServeBatch | MessageKind::SubscribeInvite => {}
        MessageKind::ObsoleteNotice => {
            let body: NoticeBody = msg.body_as()?;
            let notices = record_notices(t, &body.from, &body.ids)?;
            return Ok(ReceiveReport { from: body.from, notices, ..Default::default() });
        }
        other => return Err(Error::Malformed(format!("{other:?} is not an offer"))),
    }
    let body: OfferBody = msg.body_as()?;
    let filtered = limbo_filter(t.landscape(), &body.contributions);
    let mut report = ReceiveReport {
        from: body.from.clone(),
        filtered: filtered.iter().copied().collect(),
        invited_topic: body.topic.clone(),
        ..Default::default()
    };
    let now = t.now();
    for mut c in body.contributions {
        if filtered.contains(&c.id) {
            continue;
        }
        let id = c.id;
        c.marks.retain(|m| m.name == marks::REWARDED || m.name == marks::OBSOLETE);
        let known = t.landscape().contains(id);
        if !known {
            c.marks.insert(Mark::plain(marks::NEW));
        }
        c.marks.insert(Mark::shared_with(&body.from));
        match t.store_mut().append(c, EventKind::Received { peer: body.from.clone() }, now) {
            Ok(_) if known => report.merged.push(id),
            Ok(_) => report.fresh.push(id),
            Err(e) => report.invalid.push((id, e.name().to_string())),
        }
    }
    report.notices = record_notices(t, &body.from, &body.obsolete_notices)?;
    Ok(report)
}

/// Records advisory notices on contributions held here; never obsoletes.
fn record_notices(t: &mut Territory, from: &str, ids: &[LandmarkId]) -> Result<Vec<LandmarkId>> {
    let mut held = Vec::new();
    for &id in ids {
        if t.landscape().contains(id) {
            t.store_mut().add_mark(id, Mark::with(marks::OBSOLETE_NOTICE, &[("peer", from.to_string())]))?;
            held.push(id);
        }
    }
    Ok(held)
}

/// Keeps a `new` contribution by clearing its mark.
pub fn accept_new(t: &mut Territory, id: LandmarkId) -> Result<()> {
    t.landscape().require(id)?;
    t.store_mut().update(id, |c| c.remove_marks(marks::NEW))
}

/// Deletes a `new` contribution outright.
pub fn reject_new(t: &mut Territory, id: LandmarkId) -> Result<Contribution> {
    if !t.landscape().require(id)?.has_mark(marks::NEW) {
        return Err(Error::Forbidden(format!("{id} is not marked new")));
    }
    t.store_mut().delete(id)
}

/// Every contribution still marked `new`.
pub fn pending_new(t: &Territory) -> Vec<LandmarkId> {
    t.landscape().iter().filter(|c| c.has_mark(marks::NEW)).map(|c| c.id).collect()
}

/// Marks the anchor and produces the request for the serving peer.
pub fn subscribe(t: &mut Territory, req: &SubscriptionRequest) -> Result<WireMessage> {
    let anchor = req.topic.anchor;
    if !t.landscape().contains(anchor) {
        return Err(Error::AnchorMissing(anchor));
    }
    if req.until < t.now() {
        return Err(Error::Expired(req.until));
    }
    let mark = Mark::with(
        marks::SUBSCRIBED_TO,
        &[
            ("peer", req.serving_peer.clone()),
            ("radius", req.topic.radius.to_string()),
            ("frequency", req.frequency.to_string()),
            ("until", req.until.to_string()),
        ],
    );
    t.store_mut().add_mark(anchor, mark)?;
    let body = SubscribeBody { subscriber: t.name.clone(), request: req.clone() };
    Ok(WireMessage::new(MessageKind::Subscribe, &body))
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct ServedSubscription {
    pub subscriber: String,
    pub request: SubscriptionRequest,
    pub next_due: u64,
    pub contract: ShareContract,
}

/// Subscriptions a peer has agreed to serve.
#[derive(Debug, Clone, Default, PartialEq, Eq, Serialize, Deserialize)]
pub struct SubscriptionBook {
    pub entries: Vec<ServedSubscription>,
}

impl SubscriptionBook {
    /// Registers a `SUBSCRIBE` request; the anchor must be held here too.
    pub fn accept(&mut self, t: &Territory, msg: &WireMessage) -> Result<()> {
        if msg.msg != MessageKind::Subscribe {
            return Err(Error::Malformed(format!("{:?} is not a subscription", msg.msg)));
        }
        let body: SubscribeBody = msg.body_as()?;
        let anchor = body.request.topic.anchor;
        if !t.landscape().contains(anchor) {
            return Err(Error::AnchorMissing(anchor));
        }
        if body.request.until < t.now() {
            return Err(Error::Expired(body.request.until));
        }
        self.entries.retain(|e| !(e.subscriber == body.subscriber && e.request.topic == body.request.topic));
        self.entries.push(ServedSubscription {
            subscriber: body.subscriber,
            request: body.request,
            next_due: t.now(),
            contract: ShareContract::default(),
        });
        Ok(())
    }

    pub fn is_empty(&self) -> bool {
        self.entries.is_empty()
    }
}

/// Serves every due subscription at tick `now`. Returns `(subscriber, SERVE_BATCH)` pairs.
/// Expired subscriptions are dropped from the book.
pub fn serve_subscriptions(
    t: &mut Territory,
    book: &mut SubscriptionBook,
    now: u64,
) -> Result<Vec<(String, WireMessage)>> {
    book.entries.retain(|e| e.request.until >= now);
    let mut out = Vec::new();
    for entry in &mut book.entries {
        if now < entry.next_due {
            continue;
        }
        entry.next_due = now + entry.request.frequency.max(1);
        if !t.landscape().contains(entry.request.topic.anchor) {
            continue;
        }
        let area = topic_extent_area(t.landscape(), &entry.request.topic)?;
        let who = entry.subscriber.as_str();
        let ids: Vec<LandmarkId> = area
            .into_iter()
            .filter_map(|id| t.landscape().get(id))
            .filter(|c| !c.is_obsolete() && !shared_with(c, who) && may_reshare(t, c))
            .map(|c| c.id)
            .take(SERVE_BATCH_CAP)
            .collect();
        if ids.is_empty() {
            continue;
        }
        let contributions = release(t, who, &ids, &entry.contract)?;
        let body = OfferBody {
            from: t.name.clone(),
            to: who.to_string(),
            contract: entry.contract.clone(),
            contributions,
            obsolete_notices: Vec::new(),
            topic: None,
        };
        out.push((who.to_string(), WireMessage::new(MessageKind::ServeBatch, &body)));
    }
    Ok(out)
}

/// Makes `id` public. Contributions received under a contract need its
/// permission to republish.
pub fn publish(t: &mut Territory, id: LandmarkId) -> Result<()> {
    let c = t.landscape().require(id)?;
    if c.status.is_public() {
        return Err(Error::AlreadyPublic(id));
    }
    if !may_reshare(t, c) {
        return Err(Error::ContractViolation(format!("{id} was received under a no-republish contract")));
    }
    let mut c = c.clone();
    c.upgrade_status(Status::Public)?;
    t.store_mut().update(id, |stored| stored.status = c.status)
}

/// Marks `id` as rewarded at distance 0.
pub fn reward(t: &mut Territory, id: LandmarkId, descriptor: &str) -> Result<()> {
    t.landscape().require(id)?;
    let mark = RewardMark { descriptor: descriptor.to_string(), distance: 0, rewarded_id: id }.to_mark();
    t.store_mut().update(id, |c| {
        c.marks.retain(|m| RewardMark::from_mark(m).is_none_or(|r| r.rewarded_id != id));
        c.marks.insert(mark);
    })
}

/// Propagates reward marks one distance step against every unidirectional
/// edge, until no mark can be added or lowered. Returns the number of marks
/// set or lowered.
pub fn trickle(t: &mut Territory) -> Result<usize> {
    let l = t.landscape();
    let mut into: BTreeMap<LandmarkId, Vec<LandmarkId>> = BTreeMap::new();
    for (from, to) in unidirectional_arcs(l) {
        if l.get(from).is_some_and(|c| !c.is_obsolete()) {
            into.entry(to).or_default().push(from);
        }
    }
    // best distance per (holder, rewarded id), seeded by existing marks
    let mut best: BTreeMap<(LandmarkId, LandmarkId), (u64, String)> = BTreeMap::new();
    let mut heap = BinaryHeap::new();
    for c in l.iter() {
        for r in c.reward_marks() {
            let key = (c.id, r.rewarded_id);
            if best.get(&key).is_none_or(|(d, _)| r.distance < *d) {
                best.insert(key, (r.distance, r.descriptor.clone()));
                heap.push(Reverse((r.distance, c.id, r.rewarded_id)));
            }
        }
    }
    let mut changes: BTreeMap<(LandmarkId, LandmarkId), (u64, String)> = BTreeMap::new();
    while let Some(Reverse((d, holder, rewarded))) = heap.pop() {
        if best[&(holder, rewarded)].0 < d {
            continue;
        }
        let descriptor = best[&(holder, rewarded)].1.clone();
        for &next in into.get(&holder).into_iter().flatten() {
            let key = (next, rewarded);
            if best.get(&key).is_none_or(|(old, _)| d + 1 < *old) {
                best.insert(key, (d + 1, descriptor.clone()));
                changes.insert(key, (d + 1, descriptor.clone()));
                heap.push(Reverse((d + 1, next, rewarded)));
            }
        }
    }
    let count = changes.len();
    for ((holder, rewarded), (distance, descriptor)) in changes {
        let mark = RewardMark { descriptor, distance, rewarded_id: rewarded }.to_mark();
        t.store_mut().update(holder, |c| {
            c.marks.retain(|m| RewardMark::from_mark(m).is_none_or(|r| r.rewarded_id != rewarded));
            c.marks.insert(mark);
        })?;
    }
    Ok(count)
}

/// The join `m*`: the union of both landscapes with homologues merged.
pub fn landscape_join(a: &Landscape, b: &Landscape) -> Result<Landscape> {
    Landscape::from_contributions(a.iter().chain(b.iter()).cloned())
}

/// `a ⊑ b`: every contribution of `a` has a homologue in `b` above it.
pub fn landscape_leq(a: &Landscape, b: &Landscape) -> bool {
    a.iter().all(|c| b.get(c.id).is_some_and(|d| contribution_leq(c, d)))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::activities::obsolete;
    use crate::model::{ConcreteType, Draft};

    fn pair() -> (Territory, Territory) {
        (Territory::simulated("alice", "Alice", 1), Territory::simulated("bob", "Bob", 2))
    }

    #[test]
    fn offer_upgrades_and_strips() {
        let (mut a, mut b) = pair();
        let c = a.contribute(Draft::vertex("The sky is blue.", ConcreteType::Narrative)).unwrap();
        a.store_mut().add_mark(c, Mark::plain(marks::HIGHLIGHTED)).unwrap();
        reward(&mut a, c, "thanks").unwrap();
        let msg = offer_share(&mut a, "bob", &[c], &ShareContract::default()).unwrap();
        let held = a.landscape().get(c).unwrap();
        assert!(matches!(held.status, Status::SharedWith { .. }));
        assert!(shared_with(held, "bob"));
        let body: OfferBody = msg.body_as().unwrap();
        assert_eq!(body.contributions[0].marks.len(), 1);
        assert!(body.contributions[0].has_mark(marks::REWARDED));

        let report = receive_share(&mut b, &msg).unwrap();
        assert_eq!(report.fresh, vec![c]);
        assert!(b.landscape().get(c).unwrap().has_mark(marks::NEW));
        let again = receive_share(&mut b, &msg).unwrap();
        assert_eq!(again.merged, vec![c]);
        assert_eq!(b.store().latest_seq(), 1);

        let err = offer_share(&mut b, "carol", &[c], &ShareContract::default()).unwrap_err();
        assert_eq!(err.name(), "ContractViolation");
        assert_eq!(publish(&mut b, c).unwrap_err().name(), "ContractViolation");
        accept_new(&mut b, c).unwrap();
        assert!(pending_new(&b).is_empty());
    }

    #[test]
    fn obsolete_contributions_stay_home() {
        let (mut a, _) = pair();
        let x = a.contribute(Draft::vertex("x", ConcreteType::Narrative)).unwrap();
        let y = a.contribute(Draft::vertex("y", ConcreteType::Narrative)).unwrap();
        offer_share(&mut a, "bob", &[x], &ShareContract::default()).unwrap();
        obsolete(&mut a, x).unwrap();
        let msg = offer_share(&mut a, "bob", &[x, y], &ShareContract::default()).unwrap();
        let body: OfferBody = msg.body_as().unwrap();
        assert_eq!(body.contributions.iter().map(|c| c.id).collect::<Vec<_>>(), vec![y]);
        assert_eq!(body.obsolete_notices, vec![x]);
        assert!(obsolete_notice(&a, "bob").is_some());
        assert!(obsolete_notice(&a, "carol").is_none());
    }

    #[test]
    fn limbo_filter_takes_linked_cluster() {
        let (mut a, mut b) = pair();
        let c = a.contribute(Draft::vertex("c", ConcreteType::Narrative)).unwrap();
        let msg = offer_share(&mut a, "bob", &[c], &ShareContract::default()).unwrap();
        receive_share(&mut b, &msg).unwrap();
        accept_new(&mut b, c).unwrap();
        let c2 = b.contribute(Draft::vertex("c'", ConcreteType::Narrative)).unwrap();
        let e = b.contribute(Draft::edge(ConcreteType::Supports, c2, c)).unwrap();
        let other = b.contribute(Draft::vertex("other", ConcreteType::Narrative)).unwrap();
        obsolete(&mut a, c).unwrap();
        let back = offer_share(&mut b, "alice", &[c, c2, e, other], &ShareContract::default());
        // bob received c from alice under the default contract
        assert_eq!(back.unwrap_err().name(), "ContractViolation");
        let back = offer_share(&mut b, "alice", &[c2, e, other], &ShareContract::default()).unwrap();
        let report = receive_share(&mut a, &back).unwrap();
        assert_eq!(report.filtered, {
            let mut v = vec![c2, e];
            v.sort();
            v
        });
        assert_eq!(report.fresh, vec![other]);
    }

    #[test]
    fn publication_rules() {
        let (mut a, _) = pair();
        let c = a.contribute(Draft::vertex("c", ConcreteType::Narrative)).unwrap();
        publish(&mut a, c).unwrap();
        assert!(a.landscape().get(c).unwrap().status.is_public());
        assert_eq!(publish(&mut a, c), Err(Error::AlreadyPublic(c)));
    }

    #[test]
    fn trickle_chain_and_diamond() {
        let (mut a, _) = pair();
        let ca = a.contribute(Draft::vertex("A", ConcreteType::Narrative)).unwrap();
        let cb = a.contribute(Draft::vertex("B", ConcreteType::Narrative)).unwrap();
        let cc = a.contribute(Draft::vertex("C", ConcreteType::Narrative)).unwrap();
        a.contribute(Draft::edge(ConcreteType::Supports, ca, cb)).unwrap();
        a.contribute(Draft::edge(ConcreteType::Supports, cb, cc)).unwrap();
        a.contribute(Draft::edge(ConcreteType::Supports, ca, cc)).unwrap();
        reward(&mut a, cc, "prize").unwrap();
        assert_eq!(trickle(&mut a).unwrap(), 2);
        assert_eq!(trickle(&mut a).unwrap(), 0);
        let dist = |id| a.landscape().get(id).unwrap().reward_marks()[0].distance;
        assert_eq!((dist(ca), dist(cb), dist(cc)), (1, 1, 0));
    }

    #[test]
    fn subscription_flow() {
        let (mut a, mut b) = pair();
        let anchor = a.contribute(Draft::vertex("anchor", ConcreteType::Narrative)).unwrap();
        let msg = offer_share(&mut a, "bob", &[anchor], &ShareContract::default()).unwrap();
        receive_share(&mut b, &msg).unwrap();
        let req = SubscriptionRequest {
            topic: Topic::new(anchor, 1),
            frequency: 1,
            until: 10,
            serving_peer: "alice".into(),
            forwarding: ForwardingPolicy::default(),
        };
        let sub = subscribe(&mut b, &req).unwrap();
        let mut book = SubscriptionBook::default();
        book.accept(&a, &sub).unwrap();
        assert!(serve_subscriptions(&mut a, &mut book, 0).unwrap().is_empty());
        let q = a.contribute(Draft::vertex("why?", ConcreteType::Question)).unwrap();
        let e = a.contribute(Draft::edge(ConcreteType::Questions, q, anchor)).unwrap();
        let batches = serve_subscriptions(&mut a, &mut book, 1).unwrap();
        let body: OfferBody = batches[0].1.body_as().unwrap();
        assert_eq!(body.contributions.iter().map(|c| c.id).collect::<BTreeSet<_>>(), BTreeSet::from([q, e]));
        assert!(serve_subscriptions(&mut a, &mut book, 11).unwrap().is_empty());
        assert!(book.is_empty());

        let missing = SubscriptionRequest { topic: Topic::new(q, 0), ..req };
        assert_eq!(subscribe(&mut b, &missing), Err(Error::AnchorMissing(q)));
    }

    #[test]
    fn join_is_upper_bound() {
        let (mut a, mut b) = pair();
        a.contribute(Draft::vertex("x", ConcreteType::Narrative)).unwrap();
        b.contribute(Draft::vertex("y", ConcreteType::Narrative)).unwrap();
        let j = landscape_join(a.landscape(), b.landscape()).unwrap();
        assert!(landscape_leq(a.landscape(), &j) && landscape_leq(b.landscape(), &j));
        assert!(!landscape_leq(&j, a.landscape()));
        assert_eq!(landscape_join(a.landscape(), &Landscape::new()).unwrap(), a.landscape().clone());
    }
}
