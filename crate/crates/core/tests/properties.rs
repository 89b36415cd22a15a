mod common;

use common::Gen;
use mmm_core::explorer::{accept_proposal, gluebot_suggest, jaccard, planter_suggest, tokens, wayfarer_explore};
use mmm_core::model::{status_leq, ConcreteType, Draft};
use mmm_core::sync::{self, landscape_join, landscape_leq, ShareContract};
use mmm_core::topography::distance;
use mmm_core::{canonical_digest, parse_landscape, serialize_landscape, LandmarkId, Territory};
use proptest::prelude::*;
use rand::seq::SliceRandom;
use rand::Rng;

fn config() -> ProptestConfig {
    ProptestConfig { cases: 64, ..ProptestConfig::default() }
}

proptest! {
    #![proptest_config(config())]

    #[test]
    fn serialization_round_trips(seed in any::<u64>(), n in 0usize..30) {
        let l = Gen::new(seed).landscape(n);
        let bytes = serialize_landscape(&l);
        let back = parse_landscape(&bytes).unwrap();
        prop_assert_eq!(&back, &l);
        prop_assert_eq!(serialize_landscape(&back), bytes);
        prop_assert!(back.indices_consistent());
    }

    #[test]
    fn distance_is_symmetric(seed in any::<u64>(), nodes in 1usize..20, edges in 0usize..30) {
        let mut g = Gen::new(seed);
        let l = g.graph(nodes, edges, true);
        let ids: Vec<LandmarkId> = l.ids().collect();
        for _ in 0..10 {
            let a = *ids.choose(&mut g.rng).unwrap();
            let b = *ids.choose(&mut g.rng).unwrap();
            prop_assert_eq!(distance(&l, a, b).unwrap(), distance(&l, b, a).unwrap());
        }
    }

    #[test]
    fn join_laws(seed in any::<u64>()) {
        let mut g = Gen::new(seed);
        let a = g.landscape(12);
        let pool: Vec<LandmarkId> = a.ids().collect();
        let b = mmm_core::Landscape::from_contributions(a.iter().map(|c| g.grow(c, &pool))).unwrap();
        let mut items = vec![g.vertex()];
        for x in a.iter() {
            if g.rng.gen_bool(0.5) {
                items.push(g.grow(x, &pool));
            }
        }
        let c = mmm_core::Landscape::from_contributions(items).unwrap();
        let j = |x: &mmm_core::Landscape, y: &mmm_core::Landscape| landscape_join(x, y).unwrap();
        prop_assert_eq!(canonical_digest(&j(&a, &b)), canonical_digest(&j(&b, &a)));
        prop_assert_eq!(canonical_digest(&j(&j(&a, &b), &c)), canonical_digest(&j(&a, &j(&b, &c))));
        prop_assert_eq!(canonical_digest(&j(&a, &a)), canonical_digest(&a));
        prop_assert!(landscape_leq(&a, &b));
        prop_assert!(landscape_leq(&b, &j(&b, &c)));
    }

    #[test]
    fn status_join_is_an_upper_bound(seed in any::<u64>()) {
        let mut g = Gen::new(seed);
        let (s, t) = (g.status(), g.status());
        let j = s.join(&t);
        prop_assert!(status_leq(&s, &j) && status_leq(&t, &j));
        prop_assert_eq!(j, t.join(&s));
    }

    #[test]
    fn areas_skip_the_pit(seed in any::<u64>(), nodes in 1usize..25, edges in 0usize..40) {
        let mut g = Gen::new(seed);
        let l = g.graph(nodes, edges, true);
        let start = *l.ids().collect::<Vec<_>>().choose(&mut g.rng).unwrap();
        let cfg = g.wayfarer_config();
        let area = wayfarer_explore(&l, start, &cfg).unwrap();
        prop_assert!(area.contains(&start));
        prop_assert!(!area.contains(&LandmarkId::PIT));
    }

    #[test]
    fn jaccard_is_a_similarity(a in "[a-z ]{0,30}", b in "[a-z ]{0,30}") {
        let (ta, tb) = (tokens(&a), tokens(&b));
        let s = jaccard(&ta, &tb);
        prop_assert!((0.0..=1.0).contains(&s));
        prop_assert_eq!(s, jaccard(&tb, &ta));
    }

    #[test]
    fn suggestions_do_not_write(seed in any::<u64>(), label in "[A-Za-z ]{1,30}") {
        let mut g = Gen::new(seed);
        let mut t = Territory::simulated("p", "Anne", seed);
        for _ in 0..8 {
            let label = common::LABELS.choose(&mut g.rng).unwrap();
            let ctype = g.vertex_type();
            t.contribute(Draft::vertex(*label, ctype)).unwrap();
        }
        let before = canonical_digest(t.landscape());
        let events = t.store().latest_seq();
        let ids: Vec<LandmarkId> = t.landscape().ids().collect();
        let suggestions = planter_suggest(t.landscape(), &label, ConcreteType::Narrative, 0.1);
        let glue = gluebot_suggest(t.landscape(), ids[0], ids[1]).unwrap();
        prop_assert_eq!(canonical_digest(t.landscape()), before);
        prop_assert_eq!(t.store().latest_seq(), events);
        let added = accept_proposal(&mut t, &glue).unwrap();
        prop_assert_eq!(added.len(), glue.nodes.len() + glue.edges.len());
        if let Some(s) = suggestions.first() {
            let p = s.proposal(&Draft::vertex(label.clone(), ConcreteType::Narrative));
            prop_assert_eq!(accept_proposal(&mut t, &p).unwrap().len(), p.nodes.len() + p.edges.len());
        }
    }

    #[test]
    fn receiving_twice_equals_receiving_once(seed in any::<u64>()) {
        let mut g = Gen::new(seed);
        let mut alice = Territory::simulated("alice", "Alice", seed);
        let mut bob = Territory::simulated("bob", "Bob", seed ^ 1);
        let mut ids = Vec::new();
        for _ in 0..5 {
            let label = common::LABELS.choose(&mut g.rng).unwrap();
            let ctype = g.vertex_type();
            ids.push(alice.contribute(Draft::vertex(*label, ctype)).unwrap());
        }
        ids.push(alice.contribute(Draft::edge(ConcreteType::Supports, ids[0], ids[1])).unwrap());
        let msg = sync::offer_share(&mut alice, "bob", &ids, &ShareContract::default()).unwrap();
        sync::receive_share(&mut bob, &msg).unwrap();
        let once = canonical_digest(bob.landscape());
        let report = sync::receive_share(&mut bob, &msg).unwrap();
        prop_assert_eq!(canonical_digest(bob.landscape()), once);
        prop_assert!(report.fresh.is_empty());
        prop_assert!(bob.landscape().indices_consistent());
    }
}
