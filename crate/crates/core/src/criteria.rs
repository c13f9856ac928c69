//! Decision procedures on a pair of systems in minimal position: the
//! rectangle condition (by face census and by an independent scan), waves,
//! normal form, the classification of adjacent same-arc crossings, connecting
//! subarcs, and the no-partner certificate.

use std::collections::BTreeSet;

use serde::{Deserialize, Serialize};

use crate::arrangement::{superpose, Arrangement, Dart, Node, Owner};
use crate::sphere::{are_isotopic, ArcSystem};

/// One of the nine 4-tuples `({i,j},{k,l})`: two distinct arcs of the first
/// system and two distinct arcs of the second (0-based indices, sorted).
#[derive(Clone, Copy, Debug, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize, Deserialize)]
pub struct Tuple {
    pub a: (usize, usize),
    pub b: (usize, usize),
}

impl Tuple {
    pub fn new(i: usize, j: usize, k: usize, l: usize) -> Tuple {
        Tuple { a: (i.min(j), i.max(j)), b: (k.min(l), k.max(l)) }
    }

    pub fn all() -> Vec<Tuple> {
        let pairs = [(0, 1), (0, 2), (1, 2)];
        pairs.iter().flat_map(|&a| pairs.iter().map(move |&b| Tuple { a, b })).collect()
    }

    pub fn swapped(self) -> Tuple {
        Tuple { a: self.b, b: self.a }
    }

    /// Bit index in a 9-bit mask, row-major over the pair lists.
    pub fn bit(self) -> u32 {
        let idx = |p: (usize, usize)| match p {
            (0, 1) => 0,
            (0, 2) => 1,
            _ => 2,
        };
        idx(self.a) * 3 + idx(self.b)
    }
}

impl std::fmt::Display for Tuple {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        write!(f, "({{{},{}}},{{{},{}}})", self.a.0 + 1, self.a.1 + 1, self.b.0 + 1, self.b.1 + 1)
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct RectangleReport {
    pub holds: bool,
    pub realized: Vec<Tuple>,
    pub missing: Vec<Tuple>,
    /// Face id realizing each realized tuple (first found).
    pub witnesses: Vec<(Tuple, usize)>,
    pub diagnostic: Option<String>,
}

impl RectangleReport {
    pub fn mask(&self) -> u32 {
        self.realized.iter().fold(0, |m, t| m | (1 << t.bit()))
    }

    fn from_realized(realized: BTreeSet<Tuple>, witnesses: Vec<(Tuple, usize)>, diagnostic: Option<String>) -> Self {
        let missing: Vec<Tuple> = Tuple::all().into_iter().filter(|t| !realized.contains(t)).collect();
        RectangleReport {
            holds: missing.is_empty() && diagnostic.is_none(),
            realized: realized.into_iter().collect(),
            missing,
            witnesses,
            diagnostic,
        }
    }
}

const ISOTOPIC_DIAGNOSTIC: &str = "isotopic input: the rectangle condition is undefined";

/// Rectangle condition by face census of the reduced arrangement: a tuple
/// is realized by a face with exactly four corners, all crossings, whose
/// sides run along `A_i, B_k, A_j, B_l` with `i != j` and `k != l`.
pub fn rectangle_report(a: &ArcSystem, b: &ArcSystem) -> RectangleReport {
    if are_isotopic(a, b) {
        return RectangleReport::from_realized(BTreeSet::new(), Vec::new(), Some(ISOTOPIC_DIAGNOSTIC.into()));
    }
    rectangle_report_reduced(&superpose(a, b).reduce_to_minimal())
}

pub fn rectangle_report_reduced(arr: &Arrangement) -> RectangleReport {
    let mut realized = BTreeSet::new();
    let mut witnesses = Vec::new();
    for face in arr.face_census().expect("reduced arrangement") {
        if face.cycles.len() != 1 || face.cycles[0].len() != 4 || face.crossing_corners() != 4 {
            continue;
        }
        let sides = &face.sides()[0];
        let (mut a_arcs, mut b_arcs) = (Vec::new(), Vec::new());
        for &(o, arc) in sides {
            match o {
                Owner::A => a_arcs.push(arc),
                Owner::B => b_arcs.push(arc),
            }
        }
        if a_arcs.len() == 2 && b_arcs.len() == 2 && a_arcs[0] != a_arcs[1] && b_arcs[0] != b_arcs[1] {
            let t = Tuple::new(a_arcs[0], a_arcs[1], b_arcs[0], b_arcs[1]);
            if realized.insert(t) {
                witnesses.push((t, face.id));
            }
        }
    }
    RectangleReport::from_realized(realized, witnesses, None)
}

/// Independent oracle: walks adjacent crossing pairs along every `A_i` and
/// follows the two emanating subarcs of the other system using only crossing
/// signs, checking that they land on adjacent crossings of one arc `A_j` and
/// close up into a quadrilateral.
pub fn rectangle_tuples_by_scan(a: &ArcSystem, b: &ArcSystem) -> BTreeSet<Tuple> {
    if are_isotopic(a, b) {
        return BTreeSet::new();
    }
    scan_reduced(&superpose(a, b).reduce_to_minimal())
}

pub fn scan_reduced(arr: &Arrangement) -> BTreeSet<Tuple> {
    let connected = arr.component_count() == 1;
    let mut out = BTreeSet::new();
    // next vertex from crossing `x` along `owner` in direction `dir`
    let step = |owner: Owner, x: usize, dir: i8| -> Node {
        let path = arr.path(owner, arr.arc_of(owner, x));
        let p = arr.position(owner, x) as isize + isize::from(dir);
        path[p as usize]
    };
    for i in 0..3 {
        let path = arr.path(Owner::A, i);
        for w in path.windows(2) {
            let (Node::Crossing(x), Node::Crossing(y)) = (w[0], w[1]) else { continue };
            let (k, l) = (arr.arc_of(Owner::B, x), arr.arc_of(Owner::B, y));
            if k == l {
                continue;
            }
            for a0 in [1i8, -1] {
                // traverse A_i from `from` to `to` in direction a0
                let (from, to) = if a0 > 0 { (x, y) } else { (y, x) };
                let b1 = arr.crossing(to).sign * a0;
                let Node::Crossing(to2) = step(Owner::B, to, b1) else { continue };
                let j = arr.arc_of(Owner::A, to2);
                if j == i {
                    continue;
                }
                let a1 = -arr.crossing(to2).sign * b1;
                let Node::Crossing(from2) = step(Owner::A, to2, a1) else { continue };
                let b2 = arr.crossing(from2).sign * a1;
                if step(Owner::B, from2, b2) != Node::Crossing(from) {
                    continue;
                }
                if arr.arc_of(Owner::B, from2) != arr.arc_of(Owner::B, from) {
                    continue;
                }
                if -arr.crossing(from).sign * b2 != a0 {
                    continue;
                }
                if !connected {
                    let d = Dart { owner: Owner::A, arc: i, edge: arr.position(Owner::A, from).min(arr.position(Owner::A, to)), forward: a0 > 0 };
                    if arr.face_of_dart(d).0 != 1 {
                        continue;
                    }
                }
                out.insert(Tuple::new(i, j, k, l));
            }
        }
    }
    out
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct SubarcRef {
    pub owner: Owner,
    pub arc: usize,
    /// Positions along the arc's vertex path of the two ends.
    pub from: usize,
    pub to: usize,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "camelCase")]
pub struct Wave {
    /// Arc of the target system containing the wave.
    pub host_arc: usize,
    /// Arc of the reference system carrying both endpoints.
    pub base_arc: usize,
    pub subarc: SubarcRef,
    /// Crossing signs at the two ends (0 at a puncture end).
    pub signs: (i8, i8),
}

/// Arc of `owner` carrying vertex `v`. A puncture belongs to the arc of
/// `owner` ending there.
fn carrier(arr: &Arrangement, owner: Owner, v: Node) -> usize {
    match v {
        Node::Crossing(x) => arr.arc_of(owner, x),
        Node::Puncture(p) => arr.dart_leaving_puncture(owner, p).arc,
    }
}

/// Position of `v` along the vertex path of its `owner` carrier.
fn carrier_position(arr: &Arrangement, owner: Owner, v: Node) -> usize {
    match v {
        Node::Crossing(x) => arr.position(owner, x),
        Node::Puncture(_) => {
            let path = arr.path(owner, carrier(arr, owner, v));
            if path[0] == v {
                0
            } else {
                path.len() - 1
            }
        }
    }
}

/// Whether arc `arc` of `owner` is isotopic to an arc of the other system
/// (no crossings, and the two cobound an empty bigon).
fn is_parallel_arc(arr: &Arrangement, owner: Owner, arc: usize) -> bool {
    let path = arr.path(owner, arc);
    if path.len() != 2 {
        return false;
    }
    let partner = carrier(arr, owner.other(), path[0]);
    if carrier(arr, owner.other(), path[1]) != partner || arr.path(owner.other(), partner).len() != 2 {
        return false;
    }
    match owner {
        Owner::A => arr.arc_is_parallel(arc),
        Owner::B => arr.arc_is_parallel(partner),
    }
}

/// Whether edge `edge` of `B_host`, whose ends lie on one arc `A_i`, is
/// essential: the loop it forms with the subarc of `A_i` between its ends
/// separates the two remaining A arcs.
fn edge_is_essential(arr: &Arrangement, host: usize, edge: usize) -> bool {
    let path = arr.path(Owner::B, host);
    let (u, v) = (path[edge], path[edge + 1]);
    let i = carrier(arr, Owner::A, u);
    if carrier(arr, Owner::A, v) != i || is_parallel_arc(arr, Owner::B, host) {
        return false;
    }
    let (pu, pv) = (carrier_position(arr, Owner::A, u), carrier_position(arr, Owner::A, v));
    let (lo, hi) = (pu.min(pv), pu.max(pv));
    let mut loop_edges: Vec<Dart> = (lo..hi).map(|e| Dart { owner: Owner::A, arc: i, edge: e, forward: true }).collect();
    loop_edges.push(Dart { owner: Owner::B, arc: host, edge, forward: true });
    let others: Vec<usize> = (0..3).filter(|&j| j != i).collect();
    let region = |j: usize| arr.region_of(Dart { owner: Owner::A, arc: j, edge: 0, forward: true });
    !arr.regions_connected_avoiding(&loop_edges, region(others[0]), region(others[1]))
}

/// Whether edge `edge` of `B_host` is a wave based at an A arc: both ends on
/// that arc (an end at a puncture counts as lying on the arc ending there),
/// opposite signs where both ends are crossings, and essential.
fn is_wave(arr: &Arrangement, host: usize, edge: usize) -> bool {
    let path = arr.path(Owner::B, host);
    if let (Node::Crossing(x), Node::Crossing(y)) = (path[edge], path[edge + 1]) {
        if arr.crossing(x).sign == arr.crossing(y).sign {
            return false;
        }
    }
    edge_is_essential(arr, host, edge)
}

/// Waves of `target` with respect to `reference`.
pub fn find_waves(reference: &ArcSystem, target: &ArcSystem) -> Vec<Wave> {
    waves_reduced(&superpose(reference, target).reduce_to_minimal())
}

pub fn waves_reduced(arr: &Arrangement) -> Vec<Wave> {
    let mut out = Vec::new();
    for host in 0..3 {
        let path = arr.path(Owner::B, host);
        for edge in 0..path.len() - 1 {
            if !is_wave(arr, host, edge) {
                continue;
            }
            let sign = |v: Node| match v {
                Node::Crossing(x) => arr.crossing(x).sign,
                Node::Puncture(_) => 0,
            };
            out.push(Wave {
                host_arc: host,
                base_arc: carrier(arr, Owner::A, path[edge]),
                subarc: SubarcRef { owner: Owner::B, arc: host, from: edge, to: edge + 1 },
                signs: (sign(path[edge]), sign(path[edge + 1])),
            });
        }
    }
    out
}

/// Re-checks a reported wave against the arrangement it came from.
pub fn wave_is_valid(arr: &Arrangement, w: &Wave) -> bool {
    w.subarc.to == w.subarc.from + 1 && is_wave(arr, w.host_arc, w.subarc.from)
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "camelCase")]
pub struct NormalFormViolation {
    pub along: Owner,
    pub arc: usize,
    /// Position along the arc's vertex path of the first of the two points.
    pub position: usize,
    pub other_arc: usize,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct NormalFormReport {
    pub holds: bool,
    pub violations: Vec<NormalFormViolation>,
}

/// Two consecutive points of the other system along any arc, both on one
/// arc of the other system, violate normal form. Endpoints count as points
/// of the arc of the other system ending there; arcs isotopic to an arc of
/// the other system are skipped.
pub fn normal_form_report(a: &ArcSystem, b: &ArcSystem) -> NormalFormReport {
    normal_form_reduced(&superpose(a, b).reduce_to_minimal())
}

pub fn normal_form_reduced(arr: &Arrangement) -> NormalFormReport {
    let mut violations = Vec::new();
    for along in [Owner::A, Owner::B] {
        for arc in 0..3 {
            if is_parallel_arc(arr, along, arc) {
                continue;
            }
            let path = arr.path(along, arc);
            for (position, w) in path.windows(2).enumerate() {
                let (ou, ov) = (carrier(arr, along.other(), w[0]), carrier(arr, along.other(), w[1]));
                if ou == ov {
                    violations.push(NormalFormViolation { along, arc, position, other_arc: ou });
                }
            }
        }
    }
    NormalFormReport { holds: violations.is_empty(), violations }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub enum PairClass {
    /// The subarcs leaving both points on one side run parallel to `ε_j`.
    ParallelConnect(usize),
    /// The two points are the ends of one wave.
    WavePair,
    /// One point starts a wave, the other a subarc to a different `ε_j`.
    Mixed(usize),
    Unclassified,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "camelCase")]
pub struct AdjacentPair {
    pub ref_arc: usize,
    pub target_arc: usize,
    pub p: usize,
    pub q: usize,
    pub class: PairClass,
}

/// Classifies every pair of adjacent crossings along a reference arc that
/// belong to one target arc.
pub fn classify_adjacent_pairs(reference: &ArcSystem, target: &ArcSystem) -> Vec<AdjacentPair> {
    classify_reduced(&superpose(reference, target).reduce_to_minimal())
}

pub fn classify_reduced(arr: &Arrangement) -> Vec<AdjacentPair> {
    let mut out = Vec::new();
    for i in 0..3 {
        let path = arr.path(Owner::A, i).to_vec();
        for w in path.windows(2) {
            let (Node::Crossing(p), Node::Crossing(q)) = (w[0], w[1]) else { continue };
            let j0 = arr.arc_of(Owner::B, p);
            if arr.arc_of(Owner::B, q) != j0 {
                continue;
            }
            let class = classify_pair(arr, i, p, q);
            out.push(AdjacentPair { ref_arc: i, target_arc: j0, p, q, class });
        }
    }
    out
}

/// The edge of the target arc leaving crossing `x` into side `side` of its
/// reference arc (+1 = left), with the vertex it reaches.
fn leave_into_side(arr: &Arrangement, x: usize, side: i8) -> (Dart, Node) {
    let dir = arr.crossing(x).sign * side;
    let d = arr.dart_leaving_crossing(Owner::B, x, dir);
    (d, arr.dart_end(d))
}

fn classify_pair(arr: &Arrangement, i: usize, p: usize, q: usize) -> PairClass {
    let sides = [1i8, -1];
    // (ii) p and q bound one wave
    for side in sides {
        let (d, end) = leave_into_side(arr, p, side);
        if end == Node::Crossing(q) && is_wave(arr, d.arc, d.edge) {
            return PairClass::WavePair;
        }
    }
    // (i) parallel subarcs to adjacent points of one ε_j (possibly ε_i itself),
    // cobounding a face
    for side in sides {
        let (dp, ep) = leave_into_side(arr, p, side);
        let (_, eq) = leave_into_side(arr, q, side);
        let j = carrier(arr, Owner::A, ep);
        if carrier(arr, Owner::A, eq) != j || ep == eq {
            continue;
        }
        let (pp, pq) = (carrier_position(arr, Owner::A, ep), carrier_position(arr, Owner::A, eq));
        if pp.abs_diff(pq) != 1 {
            continue;
        }
        // corners as a multiset: on a spiral `ep` may coincide with `q` or `eq` with `p`
        let mut want = vec![Node::Crossing(p), Node::Crossing(q), ep, eq];
        want.sort();
        for d in [dp, dp.twin()] {
            let (n, cycle) = arr.face_of_dart(d);
            let mut verts: Vec<Node> = cycle.iter().map(|&d| arr.dart_end(d)).collect();
            verts.sort();
            if n == 1 && cycle.len() == 4 && verts == want {
                return PairClass::ParallelConnect(j);
            }
        }
    }
    // (iii) on one side, a wave from one point and a subarc to another arc from the other
    for side in sides {
        let (dp, ep) = leave_into_side(arr, p, side);
        let (dq, eq) = leave_into_side(arr, q, side);
        for (dw, eo) in [(dp, eq), (dq, ep)] {
            if !is_wave(arr, dw.arc, dw.edge) {
                continue;
            }
            let j = carrier(arr, Owner::A, eo);
            if j != i {
                return PairClass::Mixed(j);
            }
        }
    }
    PairClass::Unclassified
}

/// Unordered pairs `{i,j}` (0-based, `i<j`) of arcs of `b` joined by a subarc
/// of `gamma` whose interior misses `b`.
pub fn connecting_pairs(gamma: &ArcSystem, arc: usize, b: &ArcSystem) -> BTreeSet<(usize, usize)> {
    connecting_pairs_reduced(&superpose(gamma, b).reduce_to_minimal(), arc)
}

pub fn connecting_pairs_reduced(arr: &Arrangement, arc: usize) -> BTreeSet<(usize, usize)> {
    let mut out = BTreeSet::new();
    for w in arr.path(Owner::A, arc).windows(2) {
        if let (Node::Crossing(x), Node::Crossing(y)) = (w[0], w[1]) {
            let (i, j) = (arr.arc_of(Owner::B, x), arr.arc_of(Owner::B, y));
            if i != j {
                out.insert((i.min(j), i.max(j)));
            }
        }
    }
    out
}

/// A witness that no system of the tangle carrying `Γ` satisfies the
/// rectangle condition with the candidate: arc `Γ_witness` has no subarc
/// joining the candidate's arcs `missing`.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "camelCase")]
pub struct NoPartnerCertificate {
    pub witness_arc: usize,
    pub missing_pair: (usize, usize),
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, thiserror::Error, Serialize, Deserialize)]
pub enum CertifyError {
    #[error("arc {arc} of the triple misses the candidate and is isotopic to one of its arcs")]
    IsotopicDegenerate { arc: usize },
}

pub fn certify_no_rc_partner(gamma: &ArcSystem, b: &ArcSystem) -> Result<Option<NoPartnerCertificate>, CertifyError> {
    certify_reduced(&superpose(gamma, b).reduce_to_minimal())
}

pub fn certify_reduced(arr: &Arrangement) -> Result<Option<NoPartnerCertificate>, CertifyError> {
    for k in 0..3 {
        let path = arr.path(Owner::A, k);
        if path.len() == 2 && arr.arc_is_parallel(k) {
            return Err(CertifyError::IsotopicDegenerate { arc: k });
        }
    }
    for k in 0..3 {
        let pairs = connecting_pairs_reduced(arr, k);
        if let Some(missing) = [(0, 1), (0, 2), (1, 2)].into_iter().find(|p| !pairs.contains(p)) {
            return Ok(Some(NoPartnerCertificate { witness_arc: k, missing_pair: missing }));
        }
    }
    Ok(None)
}
