//! Superposition of two arc systems as a planar combinatorial map, reduction
//! to minimal position, and the face structure of the result.
//!
//! The map is stored through the arcs themselves: every arc keeps the ordered
//! list of vertices (its two end punctures and the crossings on it), and each
//! crossing keeps a sign. Together these determine the rotation system:
//! a puncture carries exactly one end of each system, and at a crossing of
//! sign `s` the counter-clockwise rotation is `A+, B(s), A-, B(-s)`.
//!
//! Because the union of the two systems may be disconnected, a complementary
//! region can have several boundary cycles. Regions are identified once from
//! a refined map that also contains the equator (which makes it connected)
//! and are carried through reduction moves, where regions only ever merge.

use std::collections::BTreeSet;

use rand::seq::SliceRandom;
use rand::Rng;
use serde::{Deserialize, Serialize};

use crate::sphere::{ArcSystem, Hemisphere, Layout, Puncture};

/// Which of the two superposed systems an arc belongs to.
#[derive(Clone, Copy, Debug, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize, Deserialize)]
pub enum Owner {
    A,
    B,
}

impl Owner {
    pub fn idx(self) -> usize {
        match self {
            Owner::A => 0,
            Owner::B => 1,
        }
    }

    pub fn other(self) -> Owner {
        match self {
            Owner::A => Owner::B,
            Owner::B => Owner::A,
        }
    }

    fn from_idx(i: usize) -> Owner {
        if i == 0 {
            Owner::A
        } else {
            Owner::B
        }
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize, Deserialize)]
pub enum Node {
    Puncture(Puncture),
    Crossing(usize),
}

/// A half-edge: edge `edge` of arc `arc` (0-based) of `owner`, traversed
/// forward (along the arc's stored orientation) or backward.
#[derive(Clone, Copy, Debug, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize, Deserialize)]
pub struct Dart {
    pub owner: Owner,
    pub arc: usize,
    pub edge: usize,
    pub forward: bool,
}

impl Dart {
    pub fn twin(self) -> Dart {
        Dart { forward: !self.forward, ..self }
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct Crossing {
    pub a_arc: usize,
    pub b_arc: usize,
    /// Orientation of the (A tangent, B tangent) frame: +1 when B crosses A
    /// from its right to its left.
    pub sign: i8,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct EulerCheck {
    pub vertices: usize,
    pub edges: usize,
    pub faces: usize,
    pub components: usize,
}

impl EulerCheck {
    pub fn holds(&self) -> bool {
        self.vertices as i64 - self.edges as i64 + self.faces as i64 == 1 + self.components as i64
    }
}

/// One boundary corner of a face: the vertex reached by `dart`.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct Corner {
    pub vertex: Node,
    pub dart: Dart,
}

/// A complementary region. Each side is a single edge because the boundary
/// turns from one system to the other at every corner.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct Face {
    pub id: usize,
    pub cycles: Vec<Vec<Corner>>,
    pub punctures: Vec<Puncture>,
}

impl Face {
    pub fn corner_count(&self) -> usize {
        self.cycles.iter().map(Vec::len).sum()
    }

    pub fn crossing_corners(&self) -> usize {
        self.cycles
            .iter()
            .flatten()
            .filter(|c| matches!(c.vertex, Node::Crossing(_)))
            .count()
    }

    /// Sides in boundary order as (owner, arc index).
    pub fn sides(&self) -> Vec<Vec<(Owner, usize)>> {
        self.cycles.iter().map(|cy| cy.iter().map(|c| (c.dart.owner, c.dart.arc)).collect()).collect()
    }

    /// Order-independent description used to compare face structures.
    pub fn signature(&self) -> Vec<Vec<(u8, u8, bool)>> {
        let mut cycles: Vec<Vec<(u8, u8, bool)>> = self
            .cycles
            .iter()
            .map(|cy| {
                let seq: Vec<(u8, u8, bool)> = cy
                    .iter()
                    .map(|c| (c.dart.owner.idx() as u8, c.dart.arc as u8, matches!(c.vertex, Node::Puncture(_))))
                    .collect();
                min_rotation(&seq)
            })
            .collect();
        cycles.sort();
        cycles
    }
}

fn min_rotation<T: Ord + Clone>(seq: &[T]) -> Vec<T> {
    (0..seq.len().max(1))
        .map(|r| {
            let mut v = seq.to_vec();
            v.rotate_left(r.min(seq.len()));
            v
        })
        .min()
        .unwrap_or_default()
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, thiserror::Error)]
pub enum ArrangementError {
    #[error("face census requires an arrangement reduced to minimal position")]
    NotMinimal,
}

/// A removable configuration: a bigon or a half-bigon region.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Move {
    Bigon(usize, usize),
    HalfBigon(usize, Puncture),
}

/// The planar map of two superposed arc systems.
#[derive(Clone, Debug)]
pub struct Arrangement {
    paths: [[Vec<Node>; 3]; 2],
    crossings: Vec<Crossing>,
    /// Region id of the face on the left of each dart: `[forward, backward]`.
    regions: [[Vec<[usize; 2]>; 3]; 2],
    minimal: bool,
}

/// Boundary cycles and regions of the current map.
#[derive(Clone, Debug)]
struct Structure {
    cycles: Vec<Vec<Dart>>,
    cycle_region: Vec<usize>,
    region_cycles: Vec<Vec<usize>>,
}

impl Arrangement {
    pub fn is_minimal(&self) -> bool {
        self.minimal
    }

    pub fn path(&self, owner: Owner, arc: usize) -> &[Node] {
        &self.paths[owner.idx()][arc]
    }

    pub fn crossing(&self, id: usize) -> Crossing {
        self.crossings[id]
    }

    /// Ids of crossings still present, in increasing order.
    pub fn crossing_ids(&self) -> Vec<usize> {
        let mut ids: Vec<usize> = self.paths[0]
            .iter()
            .flatten()
            .filter_map(|n| match n {
                Node::Crossing(x) => Some(*x),
                _ => None,
            })
            .collect();
        ids.sort_unstable();
        ids
    }

    pub fn crossing_count(&self) -> usize {
        self.paths[0].iter().map(|p| p.len() - 2).sum()
    }

    /// Entry `(i, j)` counts crossings of `A_i` with `B_j`.
    pub fn intersection_matrix(&self) -> [[u32; 3]; 3] {
        let mut m = [[0u32; 3]; 3];
        for x in self.crossing_ids() {
            let c = self.crossings[x];
            m[c.a_arc][c.b_arc] += 1;
        }
        m
    }

    /// Index of crossing `x` along the path of its `owner` arc.
    pub fn position(&self, owner: Owner, x: usize) -> usize {
        let c = self.crossings[x];
        let arc = if owner == Owner::A { c.a_arc } else { c.b_arc };
        self.paths[owner.idx()][arc]
            .iter()
            .position(|n| *n == Node::Crossing(x))
            .expect("crossing lies on its arcs")
    }

    pub fn arc_of(&self, owner: Owner, x: usize) -> usize {
        let c = self.crossings[x];
        if owner == Owner::A {
            c.a_arc
        } else {
            c.b_arc
        }
    }

    pub fn dart_start(&self, d: Dart) -> Node {
        let p = &self.paths[d.owner.idx()][d.arc];
        if d.forward {
            p[d.edge]
        } else {
            p[d.edge + 1]
        }
    }

    pub fn dart_end(&self, d: Dart) -> Node {
        self.dart_start(d.twin())
    }

    /// Arc of `owner` having puncture `p` as an endpoint, and the dart leaving `p` along it.
    pub fn dart_leaving_puncture(&self, owner: Owner, p: Puncture) -> Dart {
        for (arc, path) in self.paths[owner.idx()].iter().enumerate() {
            if path[0] == Node::Puncture(p) {
                return Dart { owner, arc, edge: 0, forward: true };
            }
            if *path.last().expect("nonempty") == Node::Puncture(p) {
                return Dart { owner, arc, edge: path.len() - 2, forward: false };
            }
        }
        unreachable!("every puncture is an endpoint of each system")
    }

    /// Dart leaving crossing `x` along `owner`'s arc in direction `dir` (+1 forward).
    pub fn dart_leaving_crossing(&self, owner: Owner, x: usize, dir: i8) -> Dart {
        let arc = self.arc_of(owner, x);
        let p = self.position(owner, x);
        if dir > 0 {
            Dart { owner, arc, edge: p, forward: true }
        } else {
            Dart { owner, arc, edge: p - 1, forward: false }
        }
    }

    /// Next dart along the boundary of the face on the left of `d`.
    pub fn next_dart(&self, d: Dart) -> Dart {
        match self.dart_end(d) {
            Node::Puncture(p) => self.dart_leaving_puncture(d.owner.other(), p),
            Node::Crossing(x) => {
                let s = self.crossings[x].sign;
                let dir: i8 = if d.forward { 1 } else { -1 };
                match d.owner {
                    Owner::A => self.dart_leaving_crossing(Owner::B, x, s * dir),
                    Owner::B => self.dart_leaving_crossing(Owner::A, x, -s * dir),
                }
            }
        }
    }

    pub fn darts(&self) -> Vec<Dart> {
        let mut out = Vec::new();
        for o in 0..2 {
            for arc in 0..3 {
                for edge in 0..self.paths[o][arc].len() - 1 {
                    for forward in [true, false] {
                        out.push(Dart { owner: Owner::from_idx(o), arc, edge, forward });
                    }
                }
            }
        }
        out
    }

    pub fn region_of(&self, d: Dart) -> usize {
        self.regions[d.owner.idx()][d.arc][d.edge][usize::from(!d.forward)]
    }

    fn set_region(&mut self, d: Dart, r: usize) {
        self.regions[d.owner.idx()][d.arc][d.edge][usize::from(!d.forward)] = r;
    }

    fn trace_cycles(&self) -> Vec<Vec<Dart>> {
        let darts = self.darts();
        let mut seen = std::collections::HashSet::with_capacity(darts.len());
        let mut cycles = Vec::new();
        for &d0 in &darts {
            if seen.contains(&d0) {
                continue;
            }
            let mut cycle = Vec::new();
            let mut d = d0;
            loop {
                seen.insert(d);
                cycle.push(d);
                d = self.next_dart(d);
                if d == d0 {
                    break;
                }
            }
            cycles.push(cycle);
        }
        cycles
    }

    /// Retraces boundary cycles, merges region ids that share a cycle, and
    /// renumbers regions densely.
    fn restructure(&mut self) -> Structure {
        let cycles = self.trace_cycles();
        let max_region = self.darts().iter().map(|&d| self.region_of(d)).max().unwrap_or(0) + 1;
        let mut uf = UnionFind::new(max_region);
        for cy in &cycles {
            let r0 = self.region_of(cy[0]);
            for &d in cy {
                uf.union(r0, self.region_of(d));
            }
        }
        let mut dense = vec![usize::MAX; max_region];
        let mut next = 0;
        let mut cycle_region = Vec::with_capacity(cycles.len());
        for cy in &cycles {
            let root = uf.find(self.region_of(cy[0]));
            if dense[root] == usize::MAX {
                dense[root] = next;
                next += 1;
            }
            cycle_region.push(dense[root]);
        }
        for (ci, cy) in cycles.iter().enumerate() {
            for &d in cy {
                self.set_region(d, cycle_region[ci]);
            }
        }
        let mut region_cycles = vec![Vec::new(); next];
        for (ci, &r) in cycle_region.iter().enumerate() {
            region_cycles[r].push(ci);
        }
        Structure { cycles, cycle_region, region_cycles }
    }

    fn structure(&self) -> Structure {
        let mut copy = self.clone();
        copy.restructure()
    }

    pub fn region_count(&self) -> usize {
        self.structure().region_cycles.len()
    }

    /// Number of connected components of the union of all arcs.
    pub fn component_count(&self) -> usize {
        let mut uf = UnionFind::new(6);
        let mut owner_of_node: std::collections::HashMap<Node, usize> = std::collections::HashMap::new();
        for o in 0..2 {
            for arc in 0..3 {
                let id = o * 3 + arc;
                for n in &self.paths[o][arc] {
                    if let Some(&prev) = owner_of_node.get(n) {
                        uf.union(prev, id);
                    } else {
                        owner_of_node.insert(*n, id);
                    }
                }
            }
        }
        (0..6).filter(|&i| uf.find(i) == i).count()
    }

    pub fn euler(&self) -> EulerCheck {
        let x = self.crossing_count();
        EulerCheck {
            vertices: 6 + x,
            edges: 6 + 2 * x,
            faces: self.region_count(),
            components: self.component_count(),
        }
    }

    /// All bigon and half-bigon regions currently present.
    pub fn removable_moves(&self) -> Vec<Move> {
        let st = self.structure();
        let mut moves = Vec::new();
        for cyc_ids in &st.region_cycles {
            if cyc_ids.len() != 1 {
                continue;
            }
            let cy = &st.cycles[cyc_ids[0]];
            if cy.len() != 2 {
                continue;
            }
            let n0 = self.dart_end(cy[0]);
            let n1 = self.dart_end(cy[1]);
            match (n0, n1) {
                (Node::Crossing(x), Node::Crossing(y)) => moves.push(Move::Bigon(x.min(y), x.max(y))),
                (Node::Crossing(x), Node::Puncture(p)) | (Node::Puncture(p), Node::Crossing(x)) => {
                    moves.push(Move::HalfBigon(x, p))
                }
                _ => {}
            }
        }
        moves
    }

    /// Removes one bigon or half-bigon by isotopy.
    pub fn apply_move(&mut self, mv: Move) {
        let (removed, anchor): (Vec<usize>, Option<Puncture>) = match mv {
            Move::Bigon(x, y) => (vec![x, y], None),
            Move::HalfBigon(x, p) => (vec![x], Some(p)),
        };
        let mut new_paths: [[Vec<Node>; 3]; 2] = Default::default();
        let mut new_regions: [[Vec<[usize; 2]>; 3]; 2] = Default::default();
        for o in 0..2 {
            for arc in 0..3 {
                let old = &self.paths[o][arc];
                let kept: Vec<usize> = (0..old.len())
                    .filter(|&i| !matches!(old[i], Node::Crossing(x) if removed.contains(&x)))
                    .collect();
                let path: Vec<Node> = kept.iter().map(|&i| old[i]).collect();
                let mut regs = Vec::with_capacity(path.len() - 1);
                for w in kept.windows(2) {
                    let (lo, hi) = (w[0], w[1]);
                    // A merged edge inherits both side regions from the old
                    // piece at its end away from the half-bigon puncture;
                    // that piece never borders the removed region and its
                    // sides survive the isotopy unchanged.
                    let piece = if hi - lo > 1 && anchor.is_some_and(|p| old[lo] == Node::Puncture(p)) {
                        hi - 1
                    } else {
                        lo
                    };
                    regs.push(self.regions[o][arc][piece]);
                }
                new_paths[o][arc] = path;
                new_regions[o][arc] = regs;
            }
        }
        self.paths = new_paths;
        self.regions = new_regions;
        self.restructure();
    }

    /// Repeatedly removes bigons and half-bigons, always taking the first
    /// available move.
    pub fn reduce_to_minimal(&self) -> Arrangement {
        let mut arr = self.clone();
        loop {
            let moves = arr.removable_moves();
            match moves.first() {
                Some(&mv) => arr.apply_move(mv),
                None => break,
            }
        }
        arr.minimal = true;
        arr
    }

    /// Like [`reduce_to_minimal`](Self::reduce_to_minimal) but choosing each
    /// move at random; used to test that the result does not depend on order.
    pub fn reduce_randomized<R: Rng>(&self, rng: &mut R) -> Arrangement {
        let mut arr = self.clone();
        loop {
            let moves = arr.removable_moves();
            match moves.choose(rng) {
                Some(&mv) => arr.apply_move(mv),
                None => break,
            }
        }
        arr.minimal = true;
        arr
    }

    fn faces_unchecked(&self) -> Vec<Face> {
        let st = self.structure();
        st.region_cycles
            .iter()
            .enumerate()
            .map(|(id, cyc_ids)| {
                let cycles: Vec<Vec<Corner>> = cyc_ids
                    .iter()
                    .map(|&ci| {
                        st.cycles[ci].iter().map(|&d| Corner { vertex: self.dart_end(d), dart: d }).collect()
                    })
                    .collect();
                let punctures: BTreeSet<Puncture> = cycles
                    .iter()
                    .flatten()
                    .filter_map(|c| match c.vertex {
                        Node::Puncture(p) => Some(p),
                        _ => None,
                    })
                    .collect();
                Face { id, cycles, punctures: punctures.into_iter().collect() }
            })
            .collect()
    }

    /// Every complementary region exactly once, with its corner structure.
    pub fn face_census(&self) -> Result<Vec<Face>, ArrangementError> {
        if !self.minimal {
            return Err(ArrangementError::NotMinimal);
        }
        let faces = self.faces_unchecked();
        let corners: usize = faces.iter().map(Face::corner_count).sum();
        debug_assert_eq!(corners, 4 * self.crossing_count() + 12);
        Ok(faces)
    }

    /// Faces in arbitrary (possibly unreduced) position.
    pub fn faces(&self) -> Vec<Face> {
        self.faces_unchecked()
    }

    /// The face on the left of `d`, as (number of boundary cycles, boundary cycle containing `d`).
    pub fn face_of_dart(&self, d: Dart) -> (usize, Vec<Dart>) {
        let st = self.structure();
        let ci = st.cycles.iter().position(|c| c.contains(&d)).expect("dart on some cycle");
        (st.region_cycles[st.cycle_region[ci]].len(), st.cycles[ci].clone())
    }

    /// Boundary cycle through `d` (without region information).
    pub fn cycle_of(&self, d: Dart) -> Vec<Dart> {
        let mut cycle = vec![d];
        let mut e = self.next_dart(d);
        while e != d {
            cycle.push(e);
            e = self.next_dart(e);
        }
        cycle
    }

    /// Whether `A_i` and the `B` arc sharing its endpoints cobound a face
    /// with no crossings, punctures or other arcs.
    pub fn arc_is_parallel(&self, i: usize) -> bool {
        let path = &self.paths[0][i];
        if path.len() != 2 {
            return false;
        }
        let st = self.structure();
        for forward in [true, false] {
            let d = Dart { owner: Owner::A, arc: i, edge: 0, forward };
            let ci = st.cycles.iter().position(|c| c.contains(&d)).expect("dart on some cycle");
            let cy = &st.cycles[ci];
            if cy.len() == 2 && st.region_cycles[st.cycle_region[ci]].len() == 1 {
                let other = cy.iter().find(|e| e.owner == Owner::B).expect("alternating boundary");
                if self.paths[1][other.arc].len() == 2 {
                    return true;
                }
            }
        }
        false
    }

    /// Whether regions `r1` and `r2` lie on the same side of the closed curve
    /// formed by `loop_edges` (edges given as darts in either direction).
    pub fn regions_connected_avoiding(&self, loop_edges: &[Dart], r1: usize, r2: usize) -> bool {
        let n = self.region_count_cached();
        let mut uf = UnionFind::new(n);
        let blocked = |d: &Dart| {
            loop_edges
                .iter()
                .any(|e| e.owner == d.owner && e.arc == d.arc && e.edge == d.edge)
        };
        for d in self.darts() {
            if d.forward && !blocked(&d) {
                uf.union(self.region_of(d), self.region_of(d.twin()));
            }
        }
        uf.find(r1) == uf.find(r2)
    }

    fn region_count_cached(&self) -> usize {
        self.darts().iter().map(|&d| self.region_of(d)).max().unwrap_or(0) + 1
    }

    /// Crossings of the arrangement as rows for external inspection.
    pub fn crossings(&self) -> Vec<(usize, Crossing)> {
        self.crossing_ids().into_iter().map(|x| (x, self.crossings[x])).collect()
    }
}

/// Superposes `a` (owner A) and `b` (owner B) in straight-chord position.
///
/// On every segment all of `a`'s points precede all of `b`'s. Two chords of
/// different systems cross exactly when they lie in the same hemisphere and
/// their endpoints interleave. Coinciding chords are pushed apart, so they
/// never cross.
pub fn superpose(a: &ArcSystem, b: &ArcSystem) -> Arrangement {
    let layout = Layout::joint(&a.segment_counts(), &b.segment_counts());
    let systems = [a, b];

    struct ChordRec {
        owner: usize,
        arc: usize,
        hemisphere: Hemisphere,
        from: usize,
        to: usize,
        crossings: Vec<(usize, usize)>,
    }

    let mut chords: Vec<ChordRec> = Vec::new();
    // index of the first chord of each arc
    let mut first_chord = [[0usize; 3]; 2];
    for (o, sys) in systems.iter().enumerate() {
        for (i, arc) in sys.arcs().iter().enumerate() {
            first_chord[o][i] = chords.len();
            for c in arc.chords() {
                chords.push(ChordRec {
                    owner: o,
                    arc: i,
                    hemisphere: c.hemisphere,
                    from: layout.point(o, c.from),
                    to: layout.point(o, c.to),
                    crossings: Vec::new(),
                });
            }
        }
    }

    let mut crossings = Vec::new();
    let n_a = first_chord[1][0];
    for ca in 0..n_a {
        for cb in n_a..chords.len() {
            let (h, a0, a1, b0, b1) = {
                let x = &chords[ca];
                let y = &chords[cb];
                if x.hemisphere != y.hemisphere {
                    continue;
                }
                (x.hemisphere, x.from, x.to, y.from, y.to)
            };
            if !layout.interleave(a0, a1, b0, b1) {
                continue;
            }
            let mut sign: i8 = if layout.strictly_between(a1, a0, b1) { 1 } else { -1 };
            if h == Hemisphere::Lower {
                sign = -sign;
            }
            let id = crossings.len();
            crossings.push(Crossing { a_arc: chords[ca].arc, b_arc: chords[cb].arc, sign });
            let key_a = if layout.strictly_between(a0, a1, b0) { b0 } else { b1 };
            let key_b = if layout.strictly_between(b0, b1, a0) { a0 } else { a1 };
            let off_a = layout.offset(a0, key_a);
            let off_b = layout.offset(b0, key_b);
            chords[ca].crossings.push((off_a, id));
            chords[cb].crossings.push((off_b, id));
        }
    }
    for c in chords.iter_mut() {
        c.crossings.sort_unstable();
    }

    // Arc paths in the arc-only map.
    let mut paths: [[Vec<Node>; 3]; 2] = Default::default();
    for (o, sys) in systems.iter().enumerate() {
        for (i, arc) in sys.arcs().iter().enumerate() {
            let mut path = vec![Node::Puncture(arc.start)];
            let c0 = first_chord[o][i];
            for c in &chords[c0..c0 + arc.events.len() + 1] {
                path.extend(c.crossings.iter().map(|&(_, x)| Node::Crossing(x)));
            }
            path.push(Node::Puncture(arc.end));
            paths[o][i] = path;
        }
    }

    // Refined map: boundary positions, crossings, equator edges and chord pieces.
    let len = layout.len();
    let vertex_of_crossing = |x: usize| len + x;
    let n_vertices = len + crossings.len();
    let mut pm = PlanarMapBuilder::new(n_vertices);
    let mut equator_darts = Vec::with_capacity(2 * len);
    let mut eq_fwd = vec![0usize; len];
    let mut eq_back = vec![0usize; len];
    for (p, fwd) in eq_fwd.iter_mut().enumerate() {
        let q = (p + 1) % len;
        let (d, t) = pm.add_edge(p, q);
        *fwd = d;
        eq_back[q] = t;
        equator_darts.push(d);
        equator_darts.push(t);
    }

    // per chord: refined forward darts of its pieces
    let mut chord_pieces: Vec<Vec<usize>> = Vec::with_capacity(chords.len());
    // per crossing: [A+, A-, B+, B-] darts leaving it
    let mut at_crossing = vec![[usize::MAX; 4]; crossings.len()];
    // per boundary position: (sort key, dart) for Upper and Lower chords
    let mut upper: Vec<Vec<(i64, usize)>> = vec![Vec::new(); len];
    let mut lower: Vec<Vec<(i64, usize)>> = vec![Vec::new(); len];
    for c in &chords {
        let mut verts = vec![c.from];
        verts.extend(c.crossings.iter().map(|&(_, x)| vertex_of_crossing(x)));
        verts.push(c.to);
        let mut pieces = Vec::with_capacity(verts.len() - 1);
        let mut twins = Vec::with_capacity(verts.len() - 1);
        for w in verts.windows(2) {
            let (d, t) = pm.add_edge(w[0], w[1]);
            pieces.push(d);
            twins.push(t);
        }
        for (k, &(_, x)) in c.crossings.iter().enumerate() {
            let base = if c.owner == 0 { 0 } else { 2 };
            at_crossing[x][base] = pieces[k + 1];
            at_crossing[x][base + 1] = twins[k];
        }
        // push-off for chords that coincide with a chord of the other system
        let twin_chord = chords.iter().any(|o| {
            o.owner != c.owner
                && o.hemisphere == c.hemisphere
                && ((o.from == c.from && o.to == c.to) || (o.from == c.to && o.to == c.from))
        });
        let (lo, hi) = (c.from.min(c.to), c.from.max(c.to));
        let nudge = |at: usize| -> i64 {
            if twin_chord && c.owner == 0 {
                if at == lo {
                    -1
                } else {
                    1
                }
            } else {
                0
            }
        };
        let _ = hi;
        let key_from = 2 * layout.offset(c.from, c.to) as i64 + nudge(c.from);
        let key_to = 2 * layout.offset(c.to, c.from) as i64 + nudge(c.to);
        let first = pieces[0];
        let last_rev = *twins.last().expect("a chord has a piece");
        let bucket = if c.hemisphere == Hemisphere::Upper { &mut upper } else { &mut lower };
        bucket[c.from].push((key_from, first));
        bucket[c.to].push((key_to, last_rev));
        chord_pieces.push(pieces);
    }
    for p in 0..len {
        let mut rot = vec![eq_fwd[p]];
        upper[p].sort_unstable();
        rot.extend(upper[p].iter().map(|&(_, d)| d));
        rot.push(eq_back[p]);
        lower[p].sort_unstable_by(|x, y| y.cmp(x));
        rot.extend(lower[p].iter().map(|&(_, d)| d));
        pm.set_rotation(p, rot);
    }
    for (x, c) in crossings.iter().enumerate() {
        let [ap, am, bp, bm] = at_crossing[x];
        let rot = if c.sign > 0 { vec![ap, bp, am, bm] } else { vec![ap, bm, am, bp] };
        pm.set_rotation(vertex_of_crossing(x), rot);
    }
    let face_of = pm.faces();
    let n_faces = face_of.iter().copied().max().map_or(0, |m| m + 1);
    let mut uf = UnionFind::new(n_faces);
    for pair in equator_darts.chunks(2) {
        uf.union(face_of[pair[0]], face_of[pair[1]]);
    }

    // Arc-only darts take the region of their first refined piece.
    let mut regions: [[Vec<[usize; 2]>; 3]; 2] = Default::default();
    for (o, sys) in systems.iter().enumerate() {
        for (i, arc) in sys.arcs().iter().enumerate() {
            let c0 = first_chord[o][i];
            // refined pieces along the arc, and which piece starts each arc-only edge
            let mut pieces = Vec::new();
            let mut starts = vec![0usize];
            for (k, c) in chords[c0..c0 + arc.events.len() + 1].iter().enumerate() {
                if k > 0 {
                    // segment point between chords is not an arc-only vertex
                }
                for (j, &d) in chord_pieces[c0 + k].iter().enumerate() {
                    pieces.push(d);
                    if j + 1 < chord_pieces[c0 + k].len() {
                        starts.push(pieces.len());
                    }
                }
                let _ = c;
            }
            starts.push(pieces.len());
            let regs: Vec<[usize; 2]> = starts
                .windows(2)
                .map(|w| {
                    let fwd = pieces[w[0]];
                    let back = pm.twin(pieces[w[1] - 1]);
                    [uf.find(face_of[fwd]), uf.find(face_of[back])]
                })
                .collect();
            regions[o][i] = regs;
        }
    }

    let mut arr = Arrangement { paths, crossings, regions, minimal: false };
    arr.restructure();
    arr
}

/// Crossing matrix of `a` against `b` in minimal position.
pub fn intersection_matrix(a: &ArcSystem, b: &ArcSystem) -> [[u32; 3]; 3] {
    superpose(a, b).reduce_to_minimal().intersection_matrix()
}

pub fn transpose(m: [[u32; 3]; 3]) -> [[u32; 3]; 3] {
    let mut t = [[0; 3]; 3];
    for i in 0..3 {
        for j in 0..3 {
            t[j][i] = m[i][j];
        }
    }
    t
}

/// Minimal half-edge structure for face tracing on the refined map.
struct PlanarMapBuilder {
    twin: Vec<usize>,
    origin: Vec<usize>,
    rotation: Vec<Vec<usize>>,
}

impl PlanarMapBuilder {
    fn new(n_vertices: usize) -> Self {
        PlanarMapBuilder { twin: Vec::new(), origin: Vec::new(), rotation: vec![Vec::new(); n_vertices] }
    }

    fn add_edge(&mut self, u: usize, v: usize) -> (usize, usize) {
        let d = self.twin.len();
        self.twin.push(d + 1);
        self.twin.push(d);
        self.origin.push(u);
        self.origin.push(v);
        (d, d + 1)
    }

    fn twin(&self, d: usize) -> usize {
        self.twin[d]
    }

    fn set_rotation(&mut self, v: usize, darts: Vec<usize>) {
        debug_assert!(darts.iter().all(|&d| self.origin[d] == v));
        self.rotation[v] = darts;
    }

    /// Face index on the left of every dart.
    fn faces(&self) -> Vec<usize> {
        let n = self.twin.len();
        let mut ccw_prev = vec![usize::MAX; n];
        for rot in &self.rotation {
            let k = rot.len();
            for (i, &d) in rot.iter().enumerate() {
                ccw_prev[d] = rot[(i + k - 1) % k];
            }
        }
        let mut face = vec![usize::MAX; n];
        let mut count = 0;
        for d0 in 0..n {
            if face[d0] != usize::MAX {
                continue;
            }
            let mut d = d0;
            while face[d] == usize::MAX {
                face[d] = count;
                d = ccw_prev[self.twin[d]];
            }
            count += 1;
        }
        face
    }
}

pub(crate) struct UnionFind {
    parent: Vec<usize>,
}

impl UnionFind {
    pub(crate) fn new(n: usize) -> Self {
        UnionFind { parent: (0..n).collect() }
    }

    pub(crate) fn find(&mut self, mut x: usize) -> usize {
        while self.parent[x] != x {
            self.parent[x] = self.parent[self.parent[x]];
            x = self.parent[x];
        }
        x
    }

    pub(crate) fn union(&mut self, a: usize, b: usize) {
        let (ra, rb) = (self.find(a), self.find(b));
        if ra != rb {
            self.parent[ra.max(rb)] = ra.min(rb);
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::sphere::{ArcCoord, Event, Segment};
    use Hemisphere::{Lower as L, Upper as U};

    fn p(i: u8) -> Puncture {
        Puncture::new(i).unwrap()
    }
    fn ev(s: u8, r: u32) -> Event {
        Event::new(Segment::new(s).unwrap(), r)
    }

    #[test]
    fn epsilon_against_itself() {
        let e = ArcSystem::epsilon();
        let arr = superpose(&e, &e);
        assert_eq!(arr.crossing_count(), 0);
        let eu = arr.euler();
        assert_eq!((eu.vertices, eu.edges, eu.faces, eu.components), (6, 6, 4, 3));
        assert!(eu.holds());
        let red = arr.reduce_to_minimal();
        assert!((0..3).all(|i| red.arc_is_parallel(i)));
    }

    #[test]
    fn lower_detour_cancels() {
        // ε1 redrawn below the equator with a detour through s2
        let alt = ArcSystem::new(
            "alt",
            [
                ArcCoord::new(p(1), L, vec![ev(2, 2), ev(2, 1)], p(2)),
                ArcCoord::new(p(3), U, vec![], p(4)),
                ArcCoord::new(p(5), U, vec![], p(6)),
            ],
        )
        .unwrap();
        let arr = superpose(&ArcSystem::epsilon(), &alt);
        assert!(arr.euler().holds());
        let red = arr.reduce_to_minimal();
        assert_eq!(red.crossing_count(), 0);
        assert!(red.euler().holds());
        assert!((0..3).all(|i| red.arc_is_parallel(i)));
    }
}
