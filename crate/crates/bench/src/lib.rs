//! Synthetic territories for benchmarks.

use mmm_core::{ConcreteType, Draft, LandmarkId, Territory};
use rand::seq::SliceRandom;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

const WORDS: &[&str] =
    &["sky", "blue", "light", "scattering", "water", "pressure", "boil", "cloud", "red", "sunset", "wave", "colour"];

const NODE_TYPES: &[ConcreteType] =
    &[ConcreteType::Question, ConcreteType::Narrative, ConcreteType::Existence, ConcreteType::Data];

const EDGE_TYPES: &[ConcreteType] = &[
    ConcreteType::Answers,
    ConcreteType::Supports,
    ConcreteType::Questions,
    ConcreteType::Nuances,
    ConcreteType::Relate,
    ConcreteType::Equates,
];

fn sentence(rng: &mut impl Rng) -> String {
    let n = rng.gen_range(2..6);
    (0..n).map(|_| *WORDS.choose(rng).unwrap()).collect::<Vec<_>>().join(" ")
}

/// A territory holding `nodes` vertices joined by `edges` random edges.
pub fn territory(seed: u64, nodes: usize, edges: usize) -> (Territory, Vec<LandmarkId>) {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let mut t = Territory::simulated("bench", "Bench", seed);
    let mut ids = Vec::with_capacity(nodes);
    for _ in 0..nodes {
        let ctype = *NODE_TYPES.choose(&mut rng).unwrap();
        ids.push(t.contribute(Draft::vertex(sentence(&mut rng), ctype)).unwrap());
    }
    for _ in 0..edges {
        let (a, b) = (*ids.choose(&mut rng).unwrap(), *ids.choose(&mut rng).unwrap());
        if a == b {
            continue;
        }
        let ctype = *EDGE_TYPES.choose(&mut rng).unwrap();
        if let Ok(id) = t.contribute(Draft::edge(ctype, a, b)) {
            ids.push(id);
        }
    }
    (t, ids)
}

/// A territory plus two identical vertices ready to merge.
pub fn with_duplicates(seed: u64, nodes: usize) -> (Territory, LandmarkId, LandmarkId) {
    let (mut t, ids) = territory(seed, nodes, nodes * 2);
    let a = t.contribute(Draft::vertex("duplicate claim", ConcreteType::Narrative)).unwrap();
    let b = t.contribute(Draft::vertex("duplicate claim", ConcreteType::Narrative)).unwrap();
    for (i, id) in ids.iter().take(8).enumerate() {
        let target = if i % 2 == 0 { a } else { b };
        let _ = t.contribute(Draft::edge(ConcreteType::Supports, *id, target));
    }
    (t, a, b)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn generation_is_seeded() {
        let (a, _) = territory(5, 30, 60);
        let (b, _) = territory(5, 30, 60);
        assert_eq!(mmm_core::canonical_digest(a.landscape()), mmm_core::canonical_digest(b.landscape()));
        assert!(a.landscape().len() > 30);
    }
}
