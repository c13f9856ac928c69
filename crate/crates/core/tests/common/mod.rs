//! Shared generators for integration tests.
#![allow(dead_code)]

use bridge_rect::catalog;
use bridge_rect::moves::{apply_twist, TwistCircle, TwistSpec};
use bridge_rect::sphere::{are_isotopic, ArcSystem, Segment};
use rand::seq::SliceRandom;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

pub fn rng(seed: u64) -> ChaCha8Rng {
    ChaCha8Rng::seed_from_u64(seed)
}

pub fn random_twist<R: Rng>(rng: &mut R) -> TwistSpec {
    let circle = TwistCircle::Pair(Segment::new(rng.gen_range(1..=6)).unwrap());
    let half_turns = *[-2, -1, 1, 2].choose(rng).unwrap();
    TwistSpec { circle, half_turns }
}

/// The image of a catalog system under a short random word of twists.
pub fn random_system<R: Rng>(rng: &mut R, max_word: usize) -> ArcSystem {
    let bases = [catalog::epsilon(), catalog::delta85(), catalog::rc_positive_pair().0, catalog::rc_positive_pair().1];
    let mut sys = bases.choose(rng).unwrap().clone();
    let len = rng.gen_range(1..=max_word);
    for _ in 0..len {
        sys = apply_twist(random_twist(rng), &sys);
    }
    sys
}

/// Non-isotopic random pair with a bounded number of equator crossings.
pub fn random_pair<R: Rng>(rng: &mut R) -> (ArcSystem, ArcSystem) {
    random_pair_within(rng, 60)
}

/// As `random_pair`, with at most `max_crossings` equator crossings in total.
pub fn random_pair_within<R: Rng>(rng: &mut R, max_crossings: usize) -> (ArcSystem, ArcSystem) {
    loop {
        let a = random_system(rng, 3);
        let b = random_system(rng, 3);
        if a.crossing_count() + b.crossing_count() <= max_crossings && !are_isotopic(&a, &b) {
            return (a, b);
        }
    }
}

/// The built-in fixtures.
pub fn fixtures() -> Vec<ArcSystem> {
    catalog::NAMES.iter().map(|n| catalog::fixture(n).unwrap().system).collect()
}
