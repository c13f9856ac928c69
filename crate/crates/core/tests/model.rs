mod common;

use bridge_rect::arrangement::{intersection_matrix, superpose};
use bridge_rect::catalog;
use bridge_rect::criteria::{
    certify_no_rc_partner, connecting_pairs, find_waves, normal_form_report, rectangle_report, rectangle_tuples_by_scan,
    wave_is_valid, CertifyError, Tuple,
};
use bridge_rect::format::{load_system, parse_system, save_system, to_text, FormatError};
use bridge_rect::moves::{apply_twist, enumerate_replacements, enumerate_systems, half_twist, TwistCircle, TwistSpec};
use bridge_rect::sphere::{are_isotopic, ArcSystem, Segment};
use bridge_rect::svg::{count_crossing_markers, render_pair};

#[test]
fn delta_anchor_values() {
    let (delta, eps) = (catalog::delta85(), catalog::epsilon());
    assert_eq!(intersection_matrix(&delta, &eps), [[2, 3, 3], [1, 2, 1], [2, 6, 4]]);
    assert_eq!(superpose(&delta, &eps).reduce_to_minimal().crossing_count(), 24);
    let all = [(0, 1), (0, 2), (1, 2)].into_iter().collect();
    assert_eq!(connecting_pairs(&delta, 0, &eps), all);
    assert!(normal_form_report(&delta, &eps).holds);
    assert!(find_waves(&eps, &delta).is_empty());
    let r = rectangle_report(&delta, &eps);
    assert_eq!(r.missing.len() + r.realized.len(), 9);
}

#[test]
fn isotopic_inputs_are_degenerate() {
    let eps = catalog::epsilon();
    let r = rectangle_report(&eps, &eps);
    assert!(!r.holds);
    assert!(r.diagnostic.unwrap().contains("isotopic"));
    assert!(matches!(certify_no_rc_partner(&eps, &eps), Err(CertifyError::IsotopicDegenerate { .. })));
}

#[test]
fn positive_control_satisfies_the_condition() {
    let (a, b) = catalog::rc_positive_pair();
    let r = rectangle_report(&a, &b);
    assert!(r.holds);
    assert_eq!(r.mask(), (1 << 9) - 1);
    assert_eq!(rectangle_tuples_by_scan(&a, &b).len(), 9);
    assert!(normal_form_report(&a, &b).holds && normal_form_report(&b, &a).holds);
    assert_eq!(certify_no_rc_partner(&a, &b), Ok(None));
}

#[test]
fn nine_tuples_are_distinct() {
    let all = Tuple::all();
    assert_eq!(all.len(), 9);
    let mask = all.iter().fold(0u32, |m, t| m | 1 << t.bit());
    assert_eq!(mask, (1 << 9) - 1);
    assert_eq!(Tuple::new(1, 2, 0, 2).to_string(), "({2,3},{1,3})");
}

#[test]
fn rewired_systems_have_valid_waves() {
    let eps = catalog::epsilon();
    let family = enumerate_systems(&eps, 1, 6, 100_000);
    let mut checked = 0;
    for e in &family.systems {
        let arr = superpose(&eps, &e.system).reduce_to_minimal();
        if arr.crossing_count() == 0 {
            continue;
        }
        checked += 1;
        let waves = find_waves(&eps, &e.system);
        assert!(!waves.is_empty());
        for w in &waves {
            assert!(wave_is_valid(&arr, w));
            if w.signs.0 != 0 && w.signs.1 != 0 {
                assert_eq!(w.signs.0, -w.signs.1);
            }
        }
        assert!(!normal_form_report(&eps, &e.system).holds);
    }
    assert!(checked > 0);
}

/// A full twist about a circle enclosing endpoints of two different arcs
/// changes the tangle, so normal form no longer forces isotopy.
#[test]
fn normal_form_needs_a_common_tangle() {
    let eps = catalog::epsilon();
    let beta = apply_twist(TwistSpec { circle: TwistCircle::Pair(Segment::new(2).unwrap()), half_turns: 2 }, &eps);
    assert!(!are_isotopic(&beta, &eps));
    assert_eq!(intersection_matrix(&eps, &beta), [[0, 1, 0], [1, 0, 0], [0, 0, 0]]);
    assert!(normal_form_report(&eps, &beta).holds);
    assert!(find_waves(&eps, &beta).is_empty());
}

#[test]
fn single_half_twist_only_changes_the_pairing() {
    let eps = catalog::epsilon();
    let once = half_twist(&eps, Segment::new(2).unwrap(), true);
    assert!(!are_isotopic(&once, &eps));
    assert_eq!(intersection_matrix(&once, &eps), [[0; 3]; 3]);
    let twice = half_twist(&once, Segment::new(2).unwrap(), true);
    assert_ne!(intersection_matrix(&twice, &eps), [[0; 3]; 3]);
}

#[test]
fn twist_catalog_has_nine_circles() {
    let catalog = TwistCircle::catalog();
    assert_eq!(catalog.len(), 9);
    for c in &catalog {
        assert_eq!(TwistCircle::parse(&c.id()), Some(*c));
    }
    assert_eq!(TwistCircle::Epsilon(2).segment(), Segment::new(3).unwrap());
}

#[test]
fn zero_crossing_replacements_are_the_arc_itself() {
    // Brute force: an arc with no equator crossings between adjacent
    // punctures is a chord in one hemisphere, and both chords over an empty
    // segment are isotopic; so each arc of epsilon has exactly one class.
    let eps = catalog::epsilon();
    for k in 0..3 {
        let e = enumerate_replacements(&eps, k, 0, 1000);
        assert_eq!(e.systems.len(), 1, "arc {k}");
        assert!(are_isotopic(&e.systems[0].system, &eps));
    }
}

#[test]
fn rewiring_changes_only_the_rewired_arc() {
    let eps = catalog::epsilon();
    let e = enumerate_systems(&eps, 2, 4, 100_000);
    assert!(!e.truncated);
    for child in &e.systems {
        let Some((parent, k)) = child.parent else { continue };
        let parent = &e.systems[parent].system;
        assert_eq!(child.system.pairing(), parent.pairing());
        assert_eq!(child.system.kept_arcs_projection(k), parent.kept_arcs_projection(k));
        assert!(child.system.is_canonical());
    }
}

#[test]
fn enumerated_classes_are_distinct() {
    let e = enumerate_systems(&catalog::epsilon(), 1, 4, 100_000);
    assert_eq!(e.systems.len(), 19);
    for (i, a) in e.systems.iter().enumerate() {
        for b in &e.systems[i + 1..] {
            assert!(!are_isotopic(&a.system, &b.system));
        }
    }
}

#[test]
fn enumeration_cap_truncates() {
    let e = enumerate_systems(&catalog::epsilon(), 2, 8, 10);
    assert!(e.truncated);
    assert!(e.systems.len() <= 10);
}

#[test]
fn file_round_trip() {
    let dir = tempfile::tempdir().unwrap();
    let path = dir.path().join("delta.bas");
    save_system(&catalog::delta85(), &path).unwrap();
    let back = load_system(&path).unwrap();
    assert!(back.same_coordinates(&catalog::delta85()));
    assert!(matches!(load_system(&dir.path().join("missing.bas")), Err(FormatError::Io { .. })));
}

#[test]
fn format_accepts_comments_and_reports_positions() {
    let text = format!("# leading comment\n\n{}", to_text(&catalog::epsilon()));
    assert!(parse_system(&text).unwrap().same_coordinates(&ArcSystem::epsilon()));

    let bad = "bridge-arc-system v1\nsystem x\narc 1 1 2 Q\n";
    match parse_system(bad) {
        Err(FormatError::Parse { line, column, .. }) => assert_eq!((line, column), (3, 11)),
        other => panic!("expected a parse error, got {other:?}"),
    }
    assert!(matches!(parse_system("something else\n"), Err(FormatError::Parse { line: 1, .. })));
}

#[test]
fn svg_marks_each_minimal_crossing() {
    let mut rng = common::rng(12);
    for _ in 0..10 {
        let (a, b) = common::random_pair_within(&mut rng, 36);
        let n = superpose(&a, &b).reduce_to_minimal().crossing_count();
        assert_eq!(count_crossing_markers(&render_pair(&a, &b)), n);
    }
    assert_eq!(count_crossing_markers(&render_pair(&catalog::delta85(), &catalog::epsilon())), 24);
}
