//! Independent check of the frozen 8_5 fixture: the knot determinant of the
//! link diagram formed by `@delta85` (over) and `@epsilon` (under), computed
//! from Fox 3-colouring equations, matches det(8_5) = 21.

use bridge_rect::arrangement::{superpose, Node};
use bridge_rect::catalog;
use bridge_rect::moves::half_twist;
use bridge_rect::sphere::{ArcSystem, Segment};
use bridge_rect::Owner;

fn det_bareiss(mut m: Vec<Vec<i128>>) -> i128 {
    let n = m.len();
    let (mut sign, mut prev) = (1, 1i128);
    for k in 0..n {
        if m[k][k] == 0 {
            let Some(r) = (k + 1..n).find(|&r| m[r][k] != 0) else { return 0 };
            m.swap(k, r);
            sign = -sign;
        }
        for i in k + 1..n {
            for j in k + 1..n {
                m[i][j] = (m[i][j] * m[k][k] - m[i][k] * m[k][j]) / prev;
            }
        }
        prev = m[k][k];
    }
    sign * m[n - 1][n - 1]
}

fn find(p: &mut [usize], x: usize) -> usize {
    if p[x] == x {
        x
    } else {
        let r = find(p, p[x]);
        p[x] = r;
        r
    }
}

/// |det| of the colouring matrix of the diagram where the arcs of `over`
/// pass over those of `under` at every crossing.
fn knot_determinant(over: &ArcSystem, under: &ArcSystem) -> i128 {
    let arr = superpose(over, under).reduce_to_minimal();
    // Strands: the three over-arcs, then the pieces of each under-arc.
    let mut parent: Vec<usize> = (0..3).collect();
    let mut equations = Vec::new();
    for i in 0..3 {
        let path = arr.path(Owner::B, i).to_vec();
        let base = parent.len();
        let pieces = path.len() - 1;
        parent.extend(base..base + pieces);
        let (Node::Puncture(s), Node::Puncture(e)) = (path[0], path[path.len() - 1]) else { panic!("arcs end at punctures") };
        for (piece, strand) in [(base, over.arc_at(s)), (base + pieces - 1, over.arc_at(e))] {
            let (a, b) = (find(&mut parent, piece), find(&mut parent, strand));
            parent[a] = b;
        }
        for (k, node) in path.iter().enumerate().take(path.len() - 1).skip(1) {
            let Node::Crossing(x) = *node else { panic!("interior nodes are crossings") };
            equations.push((arr.arc_of(Owner::A, x), base + k - 1, base + k));
        }
    }
    let mut roots: Vec<usize> = (0..parent.len()).map(|x| find(&mut parent, x)).collect();
    let mut ids = roots.clone();
    ids.sort();
    ids.dedup();
    for r in roots.iter_mut() {
        *r = ids.binary_search(r).unwrap();
    }
    let mut m = vec![vec![0i128; ids.len()]; equations.len()];
    for (row, &(o, u1, u2)) in equations.iter().enumerate() {
        m[row][roots[o]] += 2;
        m[row][roots[u1]] -= 1;
        m[row][roots[u2]] -= 1;
    }
    let minor: Vec<Vec<i128>> = m[1..].iter().map(|r| r[1..].to_vec()).collect();
    det_bareiss(minor).abs()
}

#[test]
fn delta_over_epsilon_is_8_5() {
    assert_eq!(knot_determinant(&catalog::delta85(), &catalog::epsilon()), 21);
}

#[test]
fn trefoil_sanity_check() {
    let eps = catalog::epsilon();
    let mut y = eps.clone();
    for s in [2, 4, 6] {
        y = half_twist(&y, Segment::new(s).unwrap(), true);
    }
    assert_eq!(knot_determinant(&y, &eps), 3);
}
