//! Property suites over random systems: images of the catalog systems under
//! random twist words.

mod common;

use bridge_rect::arrangement::{intersection_matrix, superpose, transpose};
use bridge_rect::criteria::{find_waves, normal_form_report, rectangle_report, rectangle_tuples_by_scan, Tuple};
use bridge_rect::format::{parse_system, to_text};
use bridge_rect::moves::{apply_twist, TwistCircle, TwistSpec};
use bridge_rect::sphere::{are_isotopic, ArcCoord, ArcSystem, Event, Puncture, Segment};
use proptest::prelude::*;

/// Reflection of the sphere through the equatorial plane.
fn mirror(sys: &ArcSystem) -> ArcSystem {
    let arcs = sys.arcs().clone().map(|a| ArcCoord { start_side: a.start_side.flip(), ..a });
    ArcSystem::new(format!("{}-mirror", sys.name), arcs).expect("mirror image is a system").canonicalize()
}

/// Rotation of the sphere carrying `p_k` to `p_{k+1}`.
fn rotate(sys: &ArcSystem) -> ArcSystem {
    let p = |x: Puncture| Puncture::new(x.label() % 6 + 1).unwrap();
    let arcs = sys.arcs().clone().map(|a| {
        let events = a.events.iter().map(|e| Event::new(Segment::new(e.segment.label() % 6 + 1).unwrap(), e.rank)).collect();
        ArcCoord::new(p(a.start), a.start_side, events, p(a.end))
    });
    ArcSystem::new(format!("{}-rot", sys.name), arcs).expect("rotated image is a system").canonicalize()
}

fn pair(seed: u64) -> (ArcSystem, ArcSystem) {
    common::random_pair_within(&mut common::rng(seed), 36)
}

fn system(seed: u64) -> ArcSystem {
    common::random_system(&mut common::rng(seed), 4)
}

fn twist_spec() -> impl Strategy<Value = TwistSpec> {
    (0usize..9, -3i32..=3).prop_map(|(c, half_turns)| TwistSpec { circle: TwistCircle::catalog()[c], half_turns })
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(32))]

    #[test]
    fn text_format_round_trips(seed in any::<u64>()) {
        let sys = system(seed);
        let back = parse_system(&to_text(&sys)).unwrap();
        prop_assert!(back.same_coordinates(&sys));
        prop_assert_eq!(back.name, sys.name);
    }

    #[test]
    fn canonical_form_is_idempotent(seed in any::<u64>()) {
        let sys = system(seed);
        prop_assert!(sys.is_canonical());
        prop_assert!(sys.canonicalize().same_coordinates(&sys));
    }

    #[test]
    fn twist_then_inverse_is_identity(seed in any::<u64>(), t in twist_spec()) {
        let sys = system(seed);
        let back = apply_twist(t.inverse(), &apply_twist(t, &sys));
        prop_assert!(are_isotopic(&back, &sys));
        prop_assert!(back.same_coordinates(&sys.canonicalize()));
    }

    #[test]
    fn intersection_matrix_is_symmetric_under_swap(seed in any::<u64>()) {
        let (a, b) = pair(seed);
        prop_assert_eq!(intersection_matrix(&a, &b), transpose(intersection_matrix(&b, &a)));
        prop_assert_eq!(intersection_matrix(&a, &a), [[0; 3]; 3]);
    }

    #[test]
    fn euler_formula_on_raw_and_reduced(seed in any::<u64>()) {
        let (a, b) = pair(seed);
        let raw = superpose(&a, &b);
        prop_assert!(raw.euler().holds());
        let reduced = raw.reduce_to_minimal();
        prop_assert!(reduced.euler().holds());
        prop_assert!(reduced.is_minimal());
        prop_assert!(reduced.crossing_count() <= raw.crossing_count());
    }

    #[test]
    fn rectangle_report_is_symmetric_under_swap(seed in any::<u64>()) {
        let (a, b) = pair(seed);
        let ab = rectangle_report(&a, &b);
        let ba = rectangle_report(&b, &a);
        prop_assert_eq!(ab.holds, ba.holds);
        let mut swapped: Vec<Tuple> = ba.realized.iter().map(|t| t.swapped()).collect();
        swapped.sort();
        let mut direct = ab.realized.clone();
        direct.sort();
        prop_assert_eq!(direct, swapped);
    }

    #[test]
    fn algorithms_agree(seed in any::<u64>()) {
        let (a, b) = pair(seed);
        let direct: std::collections::BTreeSet<Tuple> = rectangle_report(&a, &b).realized.into_iter().collect();
        prop_assert_eq!(direct, rectangle_tuples_by_scan(&a, &b));
    }

    /// Only the oppositeness of crossing signs matters, so reversing every
    /// sign (a reflection) changes no verdict.
    #[test]
    fn verdicts_survive_reflection(seed in any::<u64>()) {
        let (a, b) = pair(seed);
        let (ma, mb) = (mirror(&a), mirror(&b));
        prop_assert_eq!(intersection_matrix(&a, &b), intersection_matrix(&ma, &mb));
        let (r, mr) = (rectangle_report(&a, &b), rectangle_report(&ma, &mb));
        prop_assert_eq!(r.holds, mr.holds);
        prop_assert_eq!(r.realized, mr.realized);
        prop_assert_eq!(find_waves(&a, &b).len(), find_waves(&ma, &mb).len());
        prop_assert_eq!(normal_form_report(&a, &b).holds, normal_form_report(&ma, &mb).holds);
    }

    #[test]
    fn verdicts_survive_rotation(seed in any::<u64>()) {
        let (a, b) = pair(seed);
        let (ra, rb) = (rotate(&a), rotate(&b));
        prop_assert_eq!(intersection_matrix(&a, &b), intersection_matrix(&ra, &rb));
        prop_assert_eq!(rectangle_report(&a, &b).realized, rectangle_report(&ra, &rb).realized);
        prop_assert_eq!(find_waves(&a, &b).len(), find_waves(&ra, &rb).len());
    }

    #[test]
    fn isotopy_is_invariant_under_twists(seed in any::<u64>(), t in twist_spec()) {
        let (a, b) = pair(seed);
        prop_assert!(!are_isotopic(&apply_twist(t, &a), &apply_twist(t, &b)));
        prop_assert!(are_isotopic(&apply_twist(t, &a), &apply_twist(t, &a.clone())));
    }
}
