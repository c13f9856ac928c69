//! New systems of the same tangle by rewiring one arc, and sphere
//! homeomorphisms (half twists) used for invariance testing.

use std::collections::HashMap;

use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::arrangement::intersection_matrix;
use crate::sphere::{are_isotopic, ArcCoord, ArcSystem, Event, Hemisphere, Puncture, Segment};

/// A catalog circle: either the standard circle around `ε_i`, or the circle
/// around the adjacent punctures `p_k, p_{k+1}` (enclosing segment `s_k`).
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub enum TwistCircle {
    Epsilon(u8),
    Pair(Segment),
}

impl TwistCircle {
    /// The segment whose closed neighbourhood the circle bounds.
    pub fn segment(self) -> Segment {
        match self {
            TwistCircle::Epsilon(i) => Segment::new(2 * i - 1).expect("ε index in 1..3"),
            TwistCircle::Pair(s) => s,
        }
    }

    /// All nine catalog circles: three around `ε_i` then six adjacent pairs.
    pub fn catalog() -> Vec<TwistCircle> {
        (1..=3)
            .map(TwistCircle::Epsilon)
            .chain(Segment::all().map(TwistCircle::Pair))
            .collect()
    }

    pub fn id(self) -> String {
        match self {
            TwistCircle::Epsilon(i) => format!("eps{i}"),
            TwistCircle::Pair(s) => format!("pair{}{}", s.start().label(), s.end().label()),
        }
    }

    pub fn parse(id: &str) -> Option<TwistCircle> {
        TwistCircle::catalog().into_iter().find(|c| c.id() == id)
    }
}

/// `half_turns` half twists about `circle`; the sign picks the direction.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub struct TwistSpec {
    pub circle: TwistCircle,
    pub half_turns: i32,
}

impl TwistSpec {
    pub fn inverse(self) -> TwistSpec {
        TwistSpec { half_turns: -self.half_turns, ..self }
    }
}

pub fn apply_twist(t: TwistSpec, sys: &ArcSystem) -> ArcSystem {
    let seg = t.circle.segment();
    let mut out = sys.canonicalize();
    for _ in 0..t.half_turns.unsigned_abs() {
        out = half_twist(&out, seg, t.half_turns > 0);
    }
    out
}

#[derive(Clone, Copy, PartialEq, Eq)]
enum StrandKey {
    End(Puncture),
    Point(u32),
}

/// Image of `sys` under a half twist of a disk around the closed segment
/// `seg`, exchanging its two punctures. `positive` selects the direction.
///
/// Strands leave the disk through its upper or lower boundary; after the
/// twist each strand spirals through the collar and crosses the equator once
/// just outside the disk, on the preceding segment (upper strands when
/// `positive`) or the following one.
pub fn half_twist(sys: &ArcSystem, seg: Segment, positive: bool) -> ArcSystem {
    let counts = sys.segment_counts();
    let k = seg.idx();
    let m = counts[k];
    let (pk, pk1) = (seg.start(), seg.end());
    let prev = seg.prev();
    let next = seg.next();
    let swap = |p: Puncture| if p == pk { pk1 } else if p == pk1 { pk } else { p };

    let end_side_at = |p: Puncture| -> Hemisphere {
        let arc = &sys.arcs()[sys.arc_at(p)];
        if arc.start == p {
            arc.start_side
        } else {
            arc.end_side()
        }
    };
    let strands = |h: Hemisphere| -> Vec<StrandKey> {
        let mut v = Vec::new();
        if end_side_at(pk) == h {
            v.push(StrandKey::End(pk));
        }
        v.extend((1..=m).map(StrandKey::Point));
        if end_side_at(pk1) == h {
            v.push(StrandKey::End(pk1));
        }
        v
    };
    let top = strands(Hemisphere::Upper);
    let bottom = strands(Hemisphere::Lower);
    // strands of one half cross `prev` (appended), the other half `next` (prepended)
    let (to_prev, to_next) = if positive { (&top, &bottom) } else { (&bottom, &top) };
    let prev_half = if positive { Hemisphere::Upper } else { Hemisphere::Lower };
    let shift_next = to_next.len() as u32;
    let strand_pt = |h: Hemisphere, key: StrandKey| -> Event {
        if h == prev_half {
            let idx = to_prev.iter().position(|&s| s == key).expect("strand listed") as u32 + 1;
            Event::new(prev, counts[prev.idx()] + idx)
        } else {
            let idx = to_next.iter().position(|&s| s == key).expect("strand listed") as u32 + 1;
            Event::new(next, idx)
        }
    };

    let arcs: Vec<ArcCoord> = sys
        .arcs()
        .iter()
        .map(|arc| {
            let mut events = Vec::with_capacity(arc.events.len() + 4);
            let mut start = arc.start;
            let mut start_side = arc.start_side;
            if arc.start == pk || arc.start == pk1 {
                events.push(strand_pt(arc.start_side, StrandKey::End(arc.start)));
                start = swap(arc.start);
                start_side = arc.start_side.flip();
            }
            for (t, e) in arc.events.iter().enumerate() {
                if e.segment == seg {
                    let arrive = arc.chord_side(t);
                    let leave = arc.chord_side(t + 1);
                    events.push(strand_pt(arrive, StrandKey::Point(e.rank)));
                    events.push(Event::new(seg, m + 1 - e.rank));
                    events.push(strand_pt(leave, StrandKey::Point(e.rank)));
                } else if e.segment == next {
                    events.push(Event::new(next, e.rank + shift_next));
                } else {
                    events.push(*e);
                }
            }
            let mut end = arc.end;
            if arc.end == pk || arc.end == pk1 {
                events.push(strand_pt(arc.end_side(), StrandKey::End(arc.end)));
                end = swap(arc.end);
            }
            ArcCoord::new(start, start_side, events, end)
        })
        .collect();
    let twisted = ArcSystem::new(sys.name.clone(), [arcs[0].clone(), arcs[1].clone(), arcs[2].clone()])
        .expect("a half twist maps arc systems to arc systems");
    twisted.canonicalize()
}

/// A system produced by enumeration, with the system it was rewired from.
#[derive(Clone, Debug, Serialize, Deserialize)]
pub struct Enumerated {
    pub system: ArcSystem,
    /// Index of the parent in the same list and the rewired arc, if any.
    pub parent: Option<(usize, usize)>,
    pub depth: usize,
}

#[derive(Clone, Debug, Serialize, Deserialize)]
pub struct Enumeration {
    pub systems: Vec<Enumerated>,
    pub truncated: bool,
    pub candidates: usize,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, thiserror::Error)]
pub enum MoveError {
    #[error("enumeration budget of {cap} exceeded")]
    BudgetExceeded { cap: usize },
}

/// Isotopy classes of systems, deduplicated by a cheap invariant followed by
/// an exact isotopy test.
#[derive(Clone, Debug, Default)]
pub struct ClassSet {
    reps: Vec<ArcSystem>,
    by_coords: HashMap<[ArcCoord; 3], usize>,
    by_key: HashMap<ClassKey, Vec<usize>>,
}

type ClassKey = Vec<((u8, u8), [u32; 3], [u32; 3])>;

fn class_key(sys: &ArcSystem) -> ClassKey {
    let eps = ArcSystem::epsilon();
    let probe = half_twist(&eps, Segment::new(2).expect("s2"), true);
    let m1 = intersection_matrix(sys, &eps);
    let m2 = intersection_matrix(sys, &probe);
    let pairing = sys.pairing();
    let mut key: ClassKey =
        (0..3).map(|i| ((pairing[i].0.label(), pairing[i].1.label()), m1[i], m2[i])).collect();
    key.sort();
    key
}

impl ClassSet {
    pub fn new() -> Self {
        Self::default()
    }

    pub fn len(&self) -> usize {
        self.reps.len()
    }

    pub fn is_empty(&self) -> bool {
        self.reps.is_empty()
    }

    pub fn representatives(&self) -> &[ArcSystem] {
        &self.reps
    }

    /// Index of the class of `sys`, if already present.
    pub fn find(&self, sys: &ArcSystem) -> Option<usize> {
        let c = sys.canonicalize();
        if let Some(&i) = self.by_coords.get(c.arcs()) {
            return Some(i);
        }
        let key = class_key(&c);
        self.by_key.get(&key)?.iter().copied().find(|&i| are_isotopic(&self.reps[i], &c))
    }

    /// Inserts `sys`; returns `Some(index)` when it starts a new class.
    pub fn insert(&mut self, sys: &ArcSystem) -> Option<usize> {
        let c = sys.canonicalize();
        if self.by_coords.contains_key(c.arcs()) {
            return None;
        }
        let key = class_key(&c);
        let bucket = self.by_key.entry(key).or_default();
        if let Some(&i) = bucket.iter().find(|&&i| are_isotopic(&self.reps[i], &c)) {
            self.by_coords.insert(c.arcs().clone(), i);
            return None;
        }
        let i = self.reps.len();
        bucket.push(i);
        self.by_coords.insert(c.arcs().clone(), i);
        self.reps.push(c);
        Some(i)
    }
}

const GAP: i64 = 1 << 20;

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
enum PointKind {
    Puncture(Puncture),
    Kept,
    New,
}

#[derive(Clone, Copy, Debug)]
struct EqPoint {
    pos: i64,
    seg: Segment,
    kind: PointKind,
}

struct Search {
    circle: i64,
    kept_chords: [Vec<(i64, i64)>; 2],
    start: i64,
    end: i64,
    max_events: usize,
    cap: usize,
    leaves: Vec<(Hemisphere, Vec<(Segment, i64)>)>,
    overflow: bool,
    side: Hemisphere,
}

fn hemi_idx(h: Hemisphere) -> usize {
    match h {
        Hemisphere::Upper => 0,
        Hemisphere::Lower => 1,
    }
}

impl Search {
    fn between(&self, a: i64, b: i64, x: i64) -> bool {
        let off = |from: i64, to: i64| (to - from).rem_euclid(self.circle);
        x != a && off(a, x) < off(a, b)
    }

    fn crosses(&self, a: i64, b: i64, c: i64, d: i64) -> bool {
        if a == c || a == d || b == c || b == d {
            return false;
        }
        self.between(a, b, c) != self.between(a, b, d)
    }

    fn chord_ok(&self, h: Hemisphere, a: i64, b: i64, own: &[Vec<(i64, i64)>; 2]) -> bool {
        let i = hemi_idx(h);
        !self.kept_chords[i].iter().chain(own[i].iter()).any(|&(c, d)| self.crosses(a, b, c, d))
    }

    fn dfs(
        &mut self,
        points: &mut Vec<EqPoint>,
        cur: i64,
        h: Hemisphere,
        own: &mut [Vec<(i64, i64)>; 2],
        events: &mut Vec<(Segment, i64)>,
    ) {
        if self.overflow {
            return;
        }
        let neighbours = |points: &Vec<EqPoint>, pos: i64| -> (i64, i64) {
            let i = points.iter().position(|p| p.pos == pos).expect("point present");
            let n = points.len();
            (points[(i + n - 1) % n].pos, points[(i + 1) % n].pos)
        };
        // finish at the end puncture unless the last crossing cuts off a half-bigon there
        let end_adjacent = !events.is_empty() && {
            let (l, r) = neighbours(points, cur);
            l == self.end || r == self.end
        };
        if !end_adjacent && self.chord_ok(h, cur, self.end, own) {
            self.leaves.push((self.side, events.clone()));
            if self.leaves.len() > self.cap {
                self.overflow = true;
                return;
            }
        }
        if events.len() >= self.max_events {
            return;
        }
        let n = points.len();
        let gaps: Vec<(i64, i64, Segment)> = (0..n)
            .map(|i| {
                let l = points[i];
                let r = points[(i + 1) % n];
                let seg = match l.kind {
                    PointKind::Puncture(p) => p.segment_after(),
                    _ => l.seg,
                };
                let rpos = if r.pos < l.pos { r.pos + self.circle } else { r.pos };
                (l.pos, rpos, seg)
            })
            .collect();
        for (l, r, seg) in gaps {
            if r - l < 2 {
                continue;
            }
            // no empty half-bigon at the start, no empty equator bigon
            if events.is_empty() && (l == self.start || r.rem_euclid(self.circle) == self.start) {
                continue;
            }
            if !events.is_empty() && (l == cur || r.rem_euclid(self.circle) == cur) {
                continue;
            }
            let pos = ((l + r) / 2).rem_euclid(self.circle);
            if !self.chord_ok(h, cur, pos, own) {
                continue;
            }
            let at = points.partition_point(|p| p.pos < pos);
            points.insert(at, EqPoint { pos, seg, kind: PointKind::New });
            own[hemi_idx(h)].push((cur, pos));
            events.push((seg, pos));
            self.dfs(points, pos, h.flip(), own, events);
            events.pop();
            own[hemi_idx(h)].pop();
            points.remove(at);
            if self.overflow {
                return;
            }
        }
    }
}

/// Every isotopy class of system obtained from `sys` by replacing arc `k`
/// with an embedded arc of at most `max_events` equator crossings, with the
/// same endpoints and disjoint from the other two arcs. `sys`'s own class is
/// always included. Stops with `truncated` once `cap` candidates were seen.
pub fn enumerate_replacements(sys: &ArcSystem, k: usize, max_events: usize, cap: usize) -> Enumeration {
    let sys = sys.canonicalize();
    let kept = sys.kept_arcs_projection(k);
    let mut counts = [0u32; 6];
    for arc in &kept {
        for e in &arc.events {
            counts[e.segment.label() as usize - 1] += 1;
        }
    }
    let mut base = [0i64; 6];
    let mut acc = 0i64;
    for s in 0..6 {
        base[s] = acc;
        acc += (i64::from(counts[s]) + 1) * GAP;
    }
    let circle = acc;
    let pos_of = |bp: crate::sphere::BoundaryPoint| -> i64 {
        match bp {
            crate::sphere::BoundaryPoint::Puncture(p) => base[p.label() as usize - 1],
            crate::sphere::BoundaryPoint::Crossing(e) => {
                base[e.segment.label() as usize - 1] + i64::from(e.rank) * GAP
            }
        }
    };
    let mut points: Vec<EqPoint> = Vec::new();
    for p in Puncture::all() {
        points.push(EqPoint { pos: base[p.label() as usize - 1], seg: p.segment_after(), kind: PointKind::Puncture(p) });
    }
    let mut kept_chords: [Vec<(i64, i64)>; 2] = Default::default();
    for arc in &kept {
        for e in &arc.events {
            points.push(EqPoint {
                pos: pos_of(crate::sphere::BoundaryPoint::Crossing(*e)),
                seg: e.segment,
                kind: PointKind::Kept,
            });
        }
        for c in arc.chords() {
            kept_chords[hemi_idx(c.hemisphere)].push((pos_of(c.from), pos_of(c.to)));
        }
    }
    points.sort_by_key(|p| p.pos);
    let target = &sys.arcs()[k];
    let (start_p, end_p) = (target.start, target.end);
    let mut search = Search {
        circle,
        kept_chords,
        start: base[start_p.label() as usize - 1],
        end: base[end_p.label() as usize - 1],
        max_events,
        cap,
        leaves: Vec::new(),
        overflow: false,
        side: Hemisphere::Upper,
    };
    for h in [Hemisphere::Upper, Hemisphere::Lower] {
        let mut pts = points.clone();
        let mut own: [Vec<(i64, i64)>; 2] = Default::default();
        let mut events = Vec::new();
        search.side = h;
        search.dfs(&mut pts, search.start, h, &mut own, &mut events);
    }
    let truncated = search.overflow;
    let candidates = search.leaves.len();

    let mut classes = ClassSet::new();
    classes.insert(&sys);
    let mut seen = std::collections::HashSet::new();
    for (side, leaf) in &search.leaves {
        if !seen.insert((*side, leaf.clone())) {
            continue;
        }
        let candidate = leaf_to_system(&sys, k, &kept, &base, *side, leaf);
        classes.insert(&candidate);
    }
    let systems = classes
        .representatives()
        .iter()
        .map(|s| Enumerated { system: s.clone(), parent: None, depth: 0 })
        .collect();
    Enumeration { systems, truncated, candidates }
}

/// Rebuilds a system from kept arcs (in projected ranks) and a new arc given
/// by absolute positions of its crossings.
fn leaf_to_system(
    sys: &ArcSystem,
    k: usize,
    kept: &[ArcCoord],
    base: &[i64; 6],
    side: Hemisphere,
    leaf: &[(Segment, i64)],
) -> ArcSystem {
    let mut per_seg: [Vec<i64>; 6] = Default::default();
    for arc in kept {
        for e in &arc.events {
            let s = e.segment.label() as usize - 1;
            per_seg[s].push(base[s] + i64::from(e.rank) * GAP);
        }
    }
    for &(seg, pos) in leaf {
        per_seg[seg.label() as usize - 1].push(pos);
    }
    for v in per_seg.iter_mut() {
        v.sort_unstable();
    }
    let rank = |seg: Segment, pos: i64| -> u32 {
        let v = &per_seg[seg.label() as usize - 1];
        v.binary_search(&pos).expect("position present") as u32 + 1
    };
    let rerank = |arc: &ArcCoord| -> ArcCoord {
        let events = arc
            .events
            .iter()
            .map(|e| {
                let s = e.segment.label() as usize - 1;
                Event::new(e.segment, rank(e.segment, base[s] + i64::from(e.rank) * GAP))
            })
            .collect();
        ArcCoord::new(arc.start, arc.start_side, events, arc.end)
    };
    let target = &sys.arcs()[k];
    let new_arc = ArcCoord::new(
        target.start,
        side,
        leaf.iter().map(|&(seg, pos)| Event::new(seg, rank(seg, pos))).collect(),
        target.end,
    );
    let mut kept_iter = kept.iter();
    let arcs: Vec<ArcCoord> = (0..3)
        .map(|i| if i == k { new_arc.clone() } else { rerank(kept_iter.next().expect("two kept arcs")) })
        .collect();
    ArcSystem::new(sys.name.clone(), [arcs[0].clone(), arcs[1].clone(), arcs[2].clone()])
        .expect("rewired arc is embedded and disjoint from the kept arcs")
        .canonicalize()
}

/// Breadth-first closure of rewire moves from `base`: depth `rewires`, each
/// replacement arc with at most `max_events` equator crossings. Classes are
/// deduplicated across the whole run; output order does not depend on the
/// number of worker threads. `cap` bounds the candidates of any single
/// replacement search and the total class count.
pub fn enumerate_systems(base: &ArcSystem, rewires: usize, max_events: usize, cap: usize) -> Enumeration {
    let base = base.canonicalize();
    let mut classes = ClassSet::new();
    classes.insert(&base);
    let mut systems = vec![Enumerated { system: base, parent: None, depth: 0 }];
    let mut frontier = vec![0usize];
    let mut truncated = false;
    let mut candidates = 0usize;
    for depth in 1..=rewires {
        let tasks: Vec<(usize, usize)> = frontier.iter().flat_map(|&i| (0..3).map(move |k| (i, k))).collect();
        let results: Vec<Enumeration> = tasks
            .par_iter()
            .map(|&(i, k)| enumerate_replacements(&systems[i].system, k, max_events, cap))
            .collect();
        let mut next = Vec::new();
        'merge: for (&(parent, k), res) in tasks.iter().zip(results) {
            truncated |= res.truncated;
            candidates += res.candidates;
            for e in res.systems {
                if classes.insert(&e.system).is_some() {
                    next.push(systems.len());
                    systems.push(Enumerated { system: e.system, parent: Some((parent, k)), depth });
                    if systems.len() >= cap {
                        truncated = true;
                        break 'merge;
                    }
                }
            }
        }
        frontier = next;
        if truncated && systems.len() >= cap {
            break;
        }
    }
    Enumeration { systems, truncated, candidates }
}
