//! The fixed model of the 6-punctured sphere and equatorial arc coordinates.
//!
//! Punctures `p1..p6` sit on a reference equator in cyclic order. Segment
//! `s_k` runs from `p_k` to `p_{k+1}` (indices mod 6). An arc is recorded by
//! its start puncture, the hemisphere it first enters, the ordered list of
//! equator crossings `(segment, rank)` it makes, and its end puncture. Ranks
//! order the crossing points along a segment from `p_k` towards `p_{k+1}`.
//! Between consecutive boundary points an arc runs as a chord inside one
//! hemisphere, and the hemisphere alternates at every crossing.

use std::fmt;

use serde::{Deserialize, Serialize};

use crate::arrangement;

pub const PUNCTURE_COUNT: usize = 6;

#[derive(Clone, Copy, Debug, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize, Deserialize)]
pub struct Puncture(u8);

impl Puncture {
    pub fn new(label: u8) -> Option<Self> {
        (1..=6).contains(&label).then_some(Puncture(label))
    }

    pub fn label(self) -> u8 {
        self.0
    }

    pub(crate) fn idx(self) -> usize {
        usize::from(self.0 - 1)
    }

    pub(crate) fn from_idx(idx: usize) -> Self {
        Puncture((idx % PUNCTURE_COUNT) as u8 + 1)
    }

    /// Segment leaving this puncture in the positive direction.
    pub fn segment_after(self) -> Segment {
        Segment(self.0)
    }

    /// Segment arriving at this puncture.
    pub fn segment_before(self) -> Segment {
        Segment(if self.0 == 1 { 6 } else { self.0 - 1 })
    }

    pub fn all() -> impl Iterator<Item = Puncture> {
        (1..=6).map(Puncture)
    }
}

impl fmt::Display for Puncture {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "p{}", self.0)
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize, Deserialize)]
pub struct Segment(u8);

impl Segment {
    pub fn new(label: u8) -> Option<Self> {
        (1..=6).contains(&label).then_some(Segment(label))
    }

    pub fn label(self) -> u8 {
        self.0
    }

    pub(crate) fn idx(self) -> usize {
        usize::from(self.0 - 1)
    }

    pub(crate) fn from_idx(idx: usize) -> Self {
        Segment((idx % PUNCTURE_COUNT) as u8 + 1)
    }

    pub fn start(self) -> Puncture {
        Puncture(self.0)
    }

    pub fn end(self) -> Puncture {
        Puncture::from_idx(self.idx() + 1)
    }

    pub fn prev(self) -> Segment {
        Segment::from_idx(self.idx() + 5)
    }

    pub fn next(self) -> Segment {
        Segment::from_idx(self.idx() + 1)
    }

    pub fn all() -> impl Iterator<Item = Segment> {
        (1..=6).map(Segment)
    }
}

impl fmt::Display for Segment {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "s{}", self.0)
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize, Deserialize)]
pub enum Hemisphere {
    Upper,
    Lower,
}

impl Hemisphere {
    pub fn flip(self) -> Self {
        match self {
            Hemisphere::Upper => Hemisphere::Lower,
            Hemisphere::Lower => Hemisphere::Upper,
        }
    }

    pub fn symbol(self) -> char {
        match self {
            Hemisphere::Upper => 'U',
            Hemisphere::Lower => 'L',
        }
    }

    pub fn from_symbol(c: &str) -> Option<Self> {
        match c {
            "U" => Some(Hemisphere::Upper),
            "L" => Some(Hemisphere::Lower),
            _ => None,
        }
    }
}

/// One crossing of an arc with the equator.
#[derive(Clone, Copy, Debug, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize, Deserialize)]
pub struct Event {
    pub segment: Segment,
    pub rank: u32,
}

impl Event {
    pub fn new(segment: Segment, rank: u32) -> Self {
        Event { segment, rank }
    }
}

impl fmt::Display for Event {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}@{}", self.segment.0, self.rank)
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub enum BoundaryPoint {
    Puncture(Puncture),
    Crossing(Event),
}

/// A straight chord inside one hemisphere between two boundary points.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct Chord {
    pub hemisphere: Hemisphere,
    pub from: BoundaryPoint,
    pub to: BoundaryPoint,
}

#[derive(Clone, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub struct ArcCoord {
    pub start: Puncture,
    pub start_side: Hemisphere,
    pub events: Vec<Event>,
    pub end: Puncture,
}

impl ArcCoord {
    pub fn new(start: Puncture, start_side: Hemisphere, events: Vec<Event>, end: Puncture) -> Self {
        ArcCoord { start, start_side, events, end }
    }

    /// Hemisphere of the `t`-th chord (chord 0 leaves the start puncture).
    pub fn chord_side(&self, t: usize) -> Hemisphere {
        if t.is_multiple_of(2) {
            self.start_side
        } else {
            self.start_side.flip()
        }
    }

    pub fn end_side(&self) -> Hemisphere {
        self.chord_side(self.events.len())
    }

    pub fn chords(&self) -> Vec<Chord> {
        let mut points = Vec::with_capacity(self.events.len() + 2);
        points.push(BoundaryPoint::Puncture(self.start));
        points.extend(self.events.iter().copied().map(BoundaryPoint::Crossing));
        points.push(BoundaryPoint::Puncture(self.end));
        points
            .windows(2)
            .enumerate()
            .map(|(t, w)| Chord { hemisphere: self.chord_side(t), from: w[0], to: w[1] })
            .collect()
    }

    pub fn reversed(&self) -> ArcCoord {
        let mut events = self.events.clone();
        events.reverse();
        ArcCoord { start: self.end, start_side: self.end_side(), events, end: self.start }
    }

    pub fn endpoints(&self) -> (Puncture, Puncture) {
        if self.start <= self.end {
            (self.start, self.end)
        } else {
            (self.end, self.start)
        }
    }

    pub fn crossing_count(&self) -> usize {
        self.events.len()
    }
}

/// Three pairwise disjoint embedded arcs whose endpoints are the six punctures.
#[derive(Clone, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub struct ArcSystem {
    pub name: String,
    arcs: [ArcCoord; 3],
}

impl ArcSystem {
    /// Builds a system from coordinates, checking every invariant.
    pub fn new(name: impl Into<String>, arcs: [ArcCoord; 3]) -> Result<Self, ValidationError> {
        let raw = RawSystem {
            name: name.into(),
            arcs: arcs
                .iter()
                .map(|a| RawArc {
                    start: a.start.label(),
                    end: a.end.label(),
                    start_side: a.start_side,
                    events: a.events.iter().map(|e| (e.segment.label(), e.rank)).collect(),
                    end_side: None,
                })
                .collect(),
        };
        validate_system(&raw)
    }

    pub(crate) fn from_parts_unchecked(name: String, arcs: [ArcCoord; 3]) -> Self {
        ArcSystem { name, arcs }
    }

    /// The reference trivial system: `ε_i` is the Upper chord over `s_{2i-1}`.
    pub fn epsilon() -> Self {
        let arc = |a: u8, b: u8| {
            ArcCoord::new(Puncture(a), Hemisphere::Upper, Vec::new(), Puncture(b))
        };
        ArcSystem { name: "epsilon".into(), arcs: [arc(1, 2), arc(3, 4), arc(5, 6)] }
    }

    pub fn arcs(&self) -> &[ArcCoord; 3] {
        &self.arcs
    }

    pub fn arc(&self, index: usize) -> &ArcCoord {
        &self.arcs[index]
    }

    /// The same arcs listed in a different order: arc `i` of the result is
    /// arc `order[i]` of `self`.
    pub fn permuted(&self, order: [usize; 3]) -> Self {
        let arcs = order.map(|i| self.arcs[i].clone());
        ArcSystem::from_parts_unchecked(self.name.clone(), arcs)
    }

    pub fn with_name(mut self, name: impl Into<String>) -> Self {
        self.name = name.into();
        self
    }

    /// Number of crossing points on each segment.
    pub fn segment_counts(&self) -> [u32; 6] {
        let mut counts = [0u32; 6];
        for arc in &self.arcs {
            for e in &arc.events {
                counts[e.segment.idx()] += 1;
            }
        }
        counts
    }

    pub fn crossing_count(&self) -> usize {
        self.arcs.iter().map(ArcCoord::crossing_count).sum()
    }

    /// Unordered endpoint pairs, one per arc, in arc order.
    pub fn pairing(&self) -> [(Puncture, Puncture); 3] {
        [self.arcs[0].endpoints(), self.arcs[1].endpoints(), self.arcs[2].endpoints()]
    }

    /// Arc index owning the end at puncture `p`.
    pub fn arc_at(&self, p: Puncture) -> usize {
        self.arcs
            .iter()
            .position(|a| a.start == p || a.end == p)
            .expect("validated systems use every puncture")
    }

    pub fn same_coordinates(&self, other: &ArcSystem) -> bool {
        self.arcs == other.arcs
    }

    /// Removes arc-equator bigons and half-bigons, renumbers ranks densely and
    /// orients every arc from its lower-labelled puncture. The result is
    /// isotopic to `self` and canonicalization is idempotent.
    pub fn canonicalize(&self) -> ArcSystem {
        let mut arcs = self.arcs.clone();
        loop {
            let counts = counts_of(&arcs);
            if !remove_one_equator_bigon(&mut arcs, &counts) {
                break;
            }
            renumber_dense(&mut arcs);
        }
        let counts = counts_of(&arcs);
        for arc in arcs.iter_mut() {
            // a single chord over an empty segment may sit in either hemisphere
            if arc.events.is_empty() {
                let (lo, hi) = arc.endpoints();
                let over = if lo.segment_after().end() == hi {
                    Some(lo.segment_after())
                } else if hi.segment_after().end() == lo {
                    Some(hi.segment_after())
                } else {
                    None
                };
                if over.is_some_and(|s| counts[s.idx()] == 0) {
                    arc.start_side = Hemisphere::Upper;
                }
            }
            if arc.start > arc.end {
                *arc = arc.reversed();
            }
        }
        ArcSystem { name: self.name.clone(), arcs }
    }

    pub fn is_canonical(&self) -> bool {
        self.same_coordinates(&self.canonicalize())
    }

    /// The two arcs other than `k`, with the new point structure projected out:
    /// ranks are renumbered densely over the kept arcs only.
    pub fn kept_arcs_projection(&self, k: usize) -> Vec<ArcCoord> {
        let mut arcs = self.arcs.clone();
        arcs[k].events.clear();
        renumber_dense(&mut arcs);
        arcs.iter().enumerate().filter(|(i, _)| *i != k).map(|(_, a)| a.clone()).collect()
    }
}

fn counts_of(arcs: &[ArcCoord; 3]) -> [u32; 6] {
    let mut counts = [0u32; 6];
    for arc in arcs {
        for e in &arc.events {
            counts[e.segment.idx()] += 1;
        }
    }
    counts
}

fn adjacent_to_puncture(p: Puncture, e: Event, counts: &[u32; 6]) -> bool {
    (e.segment == p.segment_after() && e.rank == 1)
        || (e.segment == p.segment_before() && e.rank == counts[e.segment.idx()])
}

fn remove_one_equator_bigon(arcs: &mut [ArcCoord; 3], counts: &[u32; 6]) -> bool {
    for arc in arcs.iter_mut() {
        let n = arc.events.len();
        for t in 0..n.saturating_sub(1) {
            let (a, b) = (arc.events[t], arc.events[t + 1]);
            if a.segment == b.segment && a.rank.abs_diff(b.rank) == 1 {
                arc.events.drain(t..t + 2);
                return true;
            }
        }
        if let Some(&first) = arc.events.first() {
            if adjacent_to_puncture(arc.start, first, counts) {
                arc.events.remove(0);
                arc.start_side = arc.start_side.flip();
                return true;
            }
        }
        if let Some(&last) = arc.events.last() {
            if adjacent_to_puncture(arc.end, last, counts) {
                arc.events.pop();
                return true;
            }
        }
    }
    false
}

pub(crate) fn renumber_dense(arcs: &mut [ArcCoord]) {
    let mut used: [Vec<u32>; 6] = Default::default();
    for arc in arcs.iter() {
        for e in &arc.events {
            used[e.segment.idx()].push(e.rank);
        }
    }
    for v in used.iter_mut() {
        v.sort_unstable();
    }
    for arc in arcs.iter_mut() {
        for e in arc.events.iter_mut() {
            let v = &used[e.segment.idx()];
            e.rank = v.binary_search(&e.rank).expect("rank present") as u32 + 1;
        }
    }
}

/// Positions of boundary points around the equator for one or two systems.
///
/// Per segment, the first system's points precede the second system's.
#[derive(Clone, Debug)]
pub(crate) struct Layout {
    base: [usize; 6],
    first_counts: [u32; 6],
    len: usize,
}

impl Layout {
    pub(crate) fn single(counts: &[u32; 6]) -> Self {
        Layout::joint(counts, &[0; 6])
    }

    pub(crate) fn joint(first: &[u32; 6], second: &[u32; 6]) -> Self {
        let mut base = [0usize; 6];
        let mut pos = 0usize;
        for k in 0..6 {
            base[k] = pos;
            pos += 1 + (first[k] + second[k]) as usize;
        }
        Layout { base, first_counts: *first, len: pos }
    }

    pub(crate) fn len(&self) -> usize {
        self.len
    }

    pub(crate) fn puncture(&self, p: Puncture) -> usize {
        self.base[p.idx()]
    }

    /// `owner` 0 is the first system, 1 the second.
    pub(crate) fn point(&self, owner: usize, bp: BoundaryPoint) -> usize {
        match bp {
            BoundaryPoint::Puncture(p) => self.puncture(p),
            BoundaryPoint::Crossing(e) => {
                let k = e.segment.idx();
                let shift = if owner == 0 { 0 } else { self.first_counts[k] as usize };
                self.base[k] + shift + e.rank as usize
            }
        }
    }

    /// Counter-clockwise offset from `from` to `to`.
    pub(crate) fn offset(&self, from: usize, to: usize) -> usize {
        (to + self.len - from) % self.len
    }

    /// Whether `x` lies strictly inside the counter-clockwise run from `a` to `b`.
    pub(crate) fn strictly_between(&self, a: usize, b: usize, x: usize) -> bool {
        x != a && self.offset(a, x) < self.offset(a, b)
    }

    /// Chords with four distinct endpoints cross iff their endpoints interleave.
    pub(crate) fn interleave(&self, a: usize, b: usize, c: usize, d: usize) -> bool {
        if a == c || a == d || b == c || b == d {
            return false;
        }
        self.strictly_between(a, b, c) != self.strictly_between(a, b, d)
    }
}

/// Unvalidated arc description as it arrives from a file or a foreign caller.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct RawArc {
    pub start: u8,
    pub end: u8,
    pub start_side: Hemisphere,
    pub events: Vec<(u8, u32)>,
    /// Optional declared hemisphere of the final chord, checked against parity.
    pub end_side: Option<Hemisphere>,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct RawSystem {
    pub name: String,
    pub arcs: Vec<RawArc>,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub enum Violation {
    ArcCount { found: usize },
    PunctureOutOfRange { arc: usize, label: u8 },
    SegmentOutOfRange { arc: usize, event: usize, label: u8 },
    DegenerateArc { arc: usize },
    NonPerfectMatching { puncture: u8, uses: usize },
    RankClash { segment: u8, rank: u32 },
    RankGap { segment: u8, missing: u32 },
    HemisphereMismatch { arc: usize, declared: Hemisphere, derived: Hemisphere },
    SelfCrossing { hemisphere: Hemisphere, first: (usize, usize), second: (usize, usize) },
}

impl fmt::Display for Violation {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Violation::ArcCount { found } => write!(f, "expected 3 arcs, found {found}"),
            Violation::PunctureOutOfRange { arc, label } => {
                write!(f, "arc {}: puncture {label} outside 1..6", arc + 1)
            }
            Violation::SegmentOutOfRange { arc, event, label } => {
                write!(f, "arc {} event {}: segment {label} outside 1..6", arc + 1, event + 1)
            }
            Violation::DegenerateArc { arc } => write!(f, "arc {} starts and ends at one puncture", arc + 1),
            Violation::NonPerfectMatching { puncture, uses } => {
                write!(f, "puncture p{puncture} is an endpoint {uses} times")
            }
            Violation::RankClash { segment, rank } => write!(f, "segment s{segment}: rank {rank} used twice"),
            Violation::RankGap { segment, missing } => write!(f, "segment s{segment}: rank {missing} missing"),
            Violation::HemisphereMismatch { arc, declared, derived } => write!(
                f,
                "arc {}: declared final hemisphere {} but crossings give {}",
                arc + 1,
                declared.symbol(),
                derived.symbol()
            ),
            Violation::SelfCrossing { hemisphere, first, second } => write!(
                f,
                "{} hemisphere: chord {} of arc {} crosses chord {} of arc {}",
                hemisphere.symbol(),
                first.1 + 1,
                first.0 + 1,
                second.1 + 1,
                second.0 + 1
            ),
        }
    }
}

#[derive(Clone, Debug, PartialEq, Eq, thiserror::Error)]
#[error("invalid arc system `{name}`: {}", .violations.iter().map(ToString::to_string).collect::<Vec<_>>().join("; "))]
pub struct ValidationError {
    pub name: String,
    pub violations: Vec<Violation>,
}

/// Checks every invariant of an arc system and reports all violations.
pub fn validate_system(raw: &RawSystem) -> Result<ArcSystem, ValidationError> {
    let mut violations = Vec::new();
    let fail = |violations: Vec<Violation>| ValidationError { name: raw.name.clone(), violations };

    if raw.arcs.len() != 3 {
        return Err(fail(vec![Violation::ArcCount { found: raw.arcs.len() }]));
    }

    let mut arcs = Vec::with_capacity(3);
    for (i, ra) in raw.arcs.iter().enumerate() {
        let start = Puncture::new(ra.start);
        let end = Puncture::new(ra.end);
        if start.is_none() {
            violations.push(Violation::PunctureOutOfRange { arc: i, label: ra.start });
        }
        if end.is_none() {
            violations.push(Violation::PunctureOutOfRange { arc: i, label: ra.end });
        }
        let mut events = Vec::with_capacity(ra.events.len());
        for (t, &(seg, rank)) in ra.events.iter().enumerate() {
            match Segment::new(seg) {
                Some(s) => events.push(Event::new(s, rank)),
                None => violations.push(Violation::SegmentOutOfRange { arc: i, event: t, label: seg }),
            }
        }
        if let (Some(s), Some(e)) = (start, end) {
            if s == e {
                violations.push(Violation::DegenerateArc { arc: i });
            }
            let arc = ArcCoord::new(s, ra.start_side, events, e);
            if let Some(declared) = ra.end_side {
                if declared != arc.end_side() {
                    violations.push(Violation::HemisphereMismatch { arc: i, declared, derived: arc.end_side() });
                }
            }
            arcs.push(arc);
        }
    }
    if !violations.is_empty() {
        return Err(fail(violations));
    }

    let mut uses = [0usize; 6];
    for arc in &arcs {
        uses[arc.start.idx()] += 1;
        uses[arc.end.idx()] += 1;
    }
    for (k, &u) in uses.iter().enumerate() {
        if u != 1 {
            violations.push(Violation::NonPerfectMatching { puncture: k as u8 + 1, uses: u });
        }
    }

    let mut ranks: [Vec<u32>; 6] = Default::default();
    for arc in &arcs {
        for e in &arc.events {
            ranks[e.segment.idx()].push(e.rank);
        }
    }
    let mut ranks_ok = true;
    for (k, r) in ranks.iter_mut().enumerate() {
        r.sort_unstable();
        let m = r.len() as u32;
        for w in r.windows(2) {
            if w[0] == w[1] {
                violations.push(Violation::RankClash { segment: k as u8 + 1, rank: w[0] });
                ranks_ok = false;
            }
        }
        for want in 1..=m {
            if r.binary_search(&want).is_err() {
                violations.push(Violation::RankGap { segment: k as u8 + 1, missing: want });
                ranks_ok = false;
            }
        }
    }

    if ranks_ok {
        let arcs3: [ArcCoord; 3] = [arcs[0].clone(), arcs[1].clone(), arcs[2].clone()];
        let layout = Layout::single(&counts_of(&arcs3));
        for hemi in [Hemisphere::Upper, Hemisphere::Lower] {
            let mut chords = Vec::new();
            for (i, arc) in arcs.iter().enumerate() {
                for (t, c) in arc.chords().into_iter().enumerate() {
                    if c.hemisphere == hemi {
                        chords.push(((i, t), layout.point(0, c.from), layout.point(0, c.to)));
                    }
                }
            }
            for x in 0..chords.len() {
                for y in x + 1..chords.len() {
                    let (id1, a, b) = chords[x];
                    let (id2, c, d) = chords[y];
                    if layout.interleave(a, b, c, d) {
                        violations.push(Violation::SelfCrossing { hemisphere: hemi, first: id1, second: id2 });
                    }
                }
            }
        }
    }

    if violations.is_empty() {
        Ok(ArcSystem { name: raw.name.clone(), arcs: [arcs[0].clone(), arcs[1].clone(), arcs[2].clone()] })
    } else {
        Err(fail(violations))
    }
}

/// Whether `a` and `b` are isotopic systems: same endpoint pairing, no
/// crossings in minimal position, and each pair of corresponding arcs
/// cobounds an empty face.
pub fn are_isotopic(a: &ArcSystem, b: &ArcSystem) -> bool {
    let mut pa = a.pairing();
    let mut pb = b.pairing();
    pa.sort();
    pb.sort();
    if pa != pb {
        return false;
    }
    let arr = arrangement::superpose(a, b).reduce_to_minimal();
    arr.crossing_count() == 0 && (0..3).all(|i| arr.arc_is_parallel(i))
}
