//! Bounded verification for the 8_5 fixture: every enumerated system of the
//! reference tangle fails the rectangle condition against `@delta85`, and the
//! structural properties of the reference tangle hold along the way.

use std::time::Instant;

use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::arrangement::superpose;
use crate::catalog;
use crate::criteria::{
    certify_reduced, classify_reduced, normal_form_reduced, rectangle_report, scan_reduced, waves_reduced,
    NoPartnerCertificate, PairClass,
};
use crate::format::to_text;
use crate::moves::enumerate_systems;
use crate::sphere::{are_isotopic, ArcSystem};

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "camelCase")]
pub struct Parameters {
    pub rewires: usize,
    pub max_crossings: usize,
    pub max_classes: usize,
}

/// A system that contradicted an expected verdict, serialized for inspection.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct Counterexample {
    pub index: usize,
    pub reason: String,
    pub system: String,
}

/// Per-system outcome, reported with `--witnesses`.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "camelCase")]
pub struct SystemVerdict {
    pub index: usize,
    pub depth: usize,
    pub crossings_with_epsilon: usize,
    pub crossings_with_delta: usize,
    pub rectangle_holds: bool,
    pub certificate: Option<NoPartnerCertificate>,
    pub waves: usize,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(rename_all = "camelCase")]
pub struct HarnessReport {
    pub parameters: Parameters,
    pub classes_enumerated: usize,
    pub candidates_examined: usize,
    pub rc_failures: usize,
    pub certificates: usize,
    pub base_certificate: Option<NoPartnerCertificate>,
    pub wave_lemma_violations: usize,
    pub normal_form_exceptions: usize,
    pub unclassified_pairs: usize,
    pub oracle_mismatches: usize,
    pub euler_violations: usize,
    pub truncated: bool,
    pub counterexamples: Vec<Counterexample>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub witnesses: Option<Vec<SystemVerdict>>,
    pub wall_time_seconds: f64,
}

impl HarnessReport {
    /// All expected verdicts hold (the rectangle condition fails everywhere
    /// and no property was violated).
    pub fn passed(&self) -> bool {
        self.rc_failures == self.classes_enumerated && self.counterexamples.is_empty()
    }

    pub fn certificate_coverage(&self) -> f64 {
        if self.classes_enumerated == 0 {
            0.0
        } else {
            self.certificates as f64 / self.classes_enumerated as f64
        }
    }
}

struct Checked {
    verdict: SystemVerdict,
    wave_violation: bool,
    normal_form_exception: bool,
    unclassified: usize,
    oracle_mismatch: bool,
    euler_violation: bool,
}

fn check(index: usize, depth: usize, beta: &ArcSystem, delta: &ArcSystem, eps: &ArcSystem) -> Checked {
    let raw_d = superpose(delta, beta);
    let arr_d = raw_d.reduce_to_minimal();
    let raw_e = superpose(eps, beta);
    let arr_e = raw_e.reduce_to_minimal();
    let euler_violation = ![&raw_d, &arr_d, &raw_e, &arr_e].iter().all(|a| a.euler().holds());

    let rc = rectangle_report(delta, beta);
    let scan = if rc.diagnostic.is_some() { Default::default() } else { scan_reduced(&arr_d) };
    let oracle_mismatch = rc.realized.iter().copied().collect::<std::collections::BTreeSet<_>>() != scan;
    let certificate = certify_reduced(&arr_d).ok().flatten();

    let waves = waves_reduced(&arr_e).len();
    let wave_violation = arr_e.crossing_count() > 0 && waves == 0;
    let normal_form_exception = normal_form_reduced(&arr_e).holds && !are_isotopic(beta, eps);
    let unclassified = classify_reduced(&arr_e).iter().filter(|p| p.class == PairClass::Unclassified).count();

    Checked {
        verdict: SystemVerdict {
            index,
            depth,
            crossings_with_epsilon: arr_e.crossing_count(),
            crossings_with_delta: arr_d.crossing_count(),
            rectangle_holds: rc.holds,
            certificate,
            waves,
        },
        wave_violation,
        normal_form_exception,
        unclassified,
        oracle_mismatch,
        euler_violation,
    }
}

/// Enumerates systems of the reference tangle up to `rewires` rewiring moves
/// with replacement arcs of at most `max_crossings` equator crossings, and
/// checks each against `@delta85`. `jobs = 0` uses all cores.
pub fn verify_85(rewires: usize, max_crossings: usize, max_classes: usize, jobs: usize, witnesses: bool) -> HarnessReport {
    let start = Instant::now();
    let pool = rayon::ThreadPoolBuilder::new().num_threads(jobs).build().expect("thread pool");
    let (enumeration, checked) = pool.install(|| {
        let eps = catalog::epsilon();
        let delta = catalog::delta85();
        let enumeration = enumerate_systems(&eps, rewires, max_crossings, max_classes);
        let checked: Vec<Checked> = enumeration
            .systems
            .par_iter()
            .enumerate()
            .map(|(i, e)| check(i, e.depth, &e.system, &delta, &eps))
            .collect();
        (enumeration, checked)
    });

    let mut counterexamples = Vec::new();
    let mut flag = |i: usize, reason: &str| {
        counterexamples.push(Counterexample {
            index: i,
            reason: reason.to_string(),
            system: to_text(&enumeration.systems[i].system.clone().with_name(format!("counterexample-{i}"))),
        })
    };
    for (i, c) in checked.iter().enumerate() {
        if c.verdict.rectangle_holds {
            flag(i, "rectangle condition holds against delta85");
        }
        if c.wave_violation {
            flag(i, "no wave with respect to epsilon");
        }
        if c.normal_form_exception {
            flag(i, "normal form with respect to epsilon but not isotopic to it");
        }
        if c.unclassified > 0 {
            flag(i, "unclassified adjacent pair");
        }
        if c.oracle_mismatch {
            flag(i, "rectangle algorithms disagree");
        }
        if c.euler_violation {
            flag(i, "Euler formula fails");
        }
    }
    let count = |f: &dyn Fn(&Checked) -> bool| checked.iter().filter(|c| f(c)).count();
    HarnessReport {
        parameters: Parameters { rewires, max_crossings, max_classes },
        classes_enumerated: checked.len(),
        candidates_examined: enumeration.candidates,
        rc_failures: count(&|c| !c.verdict.rectangle_holds),
        certificates: count(&|c| c.verdict.certificate.is_some()),
        base_certificate: checked.first().and_then(|c| c.verdict.certificate),
        wave_lemma_violations: count(&|c| c.wave_violation),
        normal_form_exceptions: count(&|c| c.normal_form_exception),
        unclassified_pairs: checked.iter().map(|c| c.unclassified).sum(),
        oracle_mismatches: count(&|c| c.oracle_mismatch),
        euler_violations: count(&|c| c.euler_violation),
        truncated: enumeration.truncated,
        counterexamples,
        witnesses: witnesses.then(|| checked.into_iter().map(|c| c.verdict).collect()),
        wall_time_seconds: start.elapsed().as_secs_f64(),
    }
}
