//! SVG 1.1 rendering.
//!
//! Systems are drawn in equatorial coordinates on one view of the sphere:
//! the equator is a circle, Upper chords are straight segments inside it and
//! Lower chords curves outside it, each puncture drawn once. A pair is additionally drawn
//! as its reduced arrangement, laid out by barycentric (Tutte) embedding of
//! each connected component with the boundary of its largest face pinned to
//! a circle, with one `class="crossing"` marker per crossing.

use std::collections::{BTreeMap, HashMap};
use std::f64::consts::PI;
use std::fmt::Write;

use crate::arrangement::{superpose, Arrangement, Node, Owner};
use crate::sphere::{ArcSystem, Hemisphere, Layout};

const DISK_R: f64 = 110.0;
/// Room outside the equator circle for Lower chords.
const OUTSIDE: f64 = 50.0;
const PANEL: f64 = 340.0;
const COLORS: [[&str; 3]; 2] = [["#d62728", "#2ca02c", "#1f77b4"], ["#6b3e00", "#7f7f7f", "#9467bd"]];

fn header(width: f64, height: f64) -> String {
    format!(
        "<?xml version=\"1.0\" encoding=\"UTF-8\"?>\n<svg xmlns=\"http://www.w3.org/2000/svg\" version=\"1.1\" width=\"{width:.0}\" height=\"{height:.0}\" viewBox=\"0 0 {width:.0} {height:.0}\">\n<rect width=\"100%\" height=\"100%\" fill=\"white\"/>\n"
    )
}

fn escape(s: &str) -> String {
    s.replace('&', "&amp;").replace('<', "&lt;").replace('>', "&gt;").replace('"', "&quot;")
}

/// Angle of equator position `off` out of `len`, counter-clockwise from the
/// top. The step leaves a small gap so that no two positions are antipodal.
fn angle(off: usize, len: usize) -> f64 {
    PI / 2.0 + 2.0 * PI * off as f64 / (len as f64 + 0.5)
}

fn circle_point(cx: f64, cy: f64, off: usize, len: usize) -> (f64, f64) {
    let t = angle(off, len);
    (cx + DISK_R * t.cos(), cy - DISK_R * t.sin())
}

/// Lower chords are drawn outside the equator circle as the image of the
/// straight chord under inversion in that circle, followed by a radial
/// compression; both maps are injective, so disjoint chords stay disjoint.
fn outside_path(c: (f64, f64), p: (f64, f64), q: (f64, f64)) -> String {
    let mut d = format!("M {:.2} {:.2}", p.0, p.1);
    const STEPS: usize = 48;
    for k in 1..STEPS {
        let t = k as f64 / STEPS as f64;
        let (x, y) = (p.0 + t * (q.0 - p.0) - c.0, p.1 + t * (q.1 - p.1) - c.1);
        let r = (x * x + y * y).sqrt();
        let inverted = DISK_R * DISK_R / r;
        let shown = DISK_R + OUTSIDE * ((inverted - DISK_R) / OUTSIDE).tanh();
        let _ = write!(d, " L {:.2} {:.2}", c.0 + x / r * shown, c.1 + y / r * shown);
    }
    let _ = write!(d, " L {:.2} {:.2}", q.0, q.1);
    d
}

fn coordinates_panel(out: &mut String, systems: &[(&ArcSystem, Owner)], top: f64) {
    let layout = match systems {
        [(a, _), (b, _)] => Layout::joint(&a.segment_counts(), &b.segment_counts()),
        [(a, _)] => Layout::single(&a.segment_counts()),
        _ => unreachable!("one or two systems"),
    };
    let len = layout.len();
    let (cx, cy) = (PANEL / 2.0, top + PANEL / 2.0 + 10.0);
    let _ = writeln!(
        out,
        "<g class=\"sphere\">\n<circle class=\"equator\" cx=\"{cx:.2}\" cy=\"{cy:.2}\" r=\"{DISK_R}\" fill=\"none\" stroke=\"black\"/>\n<text x=\"{cx:.2}\" y=\"{:.2}\" text-anchor=\"middle\" font-size=\"12\">Upper inside, Lower outside</text>",
        top + 14.0
    );
    for &(sys, owner) in systems {
        for (i, arc) in sys.arcs().iter().enumerate() {
            for chord in arc.chords() {
                let p = circle_point(cx, cy, layout.point(owner.idx(), chord.from), len);
                let q = circle_point(cx, cy, layout.point(owner.idx(), chord.to), len);
                let d = match chord.hemisphere {
                    Hemisphere::Upper => format!("M {:.2} {:.2} L {:.2} {:.2}", p.0, p.1, q.0, q.1),
                    Hemisphere::Lower => outside_path((cx, cy), p, q),
                };
                let dash = if owner == Owner::B { " stroke-dasharray=\"6 3\"" } else { "" };
                let _ = writeln!(
                    out,
                    "<path class=\"chord\" data-arc=\"{}{}\" data-hemisphere=\"{}\" d=\"{d}\" fill=\"none\" stroke=\"{}\" stroke-width=\"2\"{dash}/>",
                    if owner == Owner::A { "a" } else { "b" },
                    i + 1,
                    chord.hemisphere.symbol(),
                    COLORS[owner.idx()][i]
                );
            }
        }
    }
    for p in crate::sphere::Puncture::all() {
        let (x, y) = circle_point(cx, cy, layout.puncture(p), len);
        let (dx, dy) = ((x - cx) / DISK_R * 12.0, (y - cy) / DISK_R * 12.0);
        let _ = writeln!(
            out,
            "<circle class=\"puncture\" cx=\"{x:.2}\" cy=\"{y:.2}\" r=\"4\" fill=\"black\"/>\n<text x=\"{:.2}\" y=\"{:.2}\" text-anchor=\"middle\" font-size=\"12\">{p}</text>",
            x - dx,
            y - dy + 4.0
        );
    }
    out.push_str("</g>\n");
}

/// Arc diagram of one system.
pub fn render_system(sys: &ArcSystem) -> String {
    let mut out = header(PANEL, PANEL + 20.0);
    let _ = writeln!(out, "<title>{}</title>", escape(&sys.name));
    coordinates_panel(&mut out, &[(sys, Owner::A)], 0.0);
    out.push_str("</svg>\n");
    out
}

/// Arc diagrams of both systems followed by their reduced arrangement.
pub fn render_pair(a: &ArcSystem, b: &ArcSystem) -> String {
    let arr = superpose(a, b).reduce_to_minimal();
    let mut body = String::new();
    coordinates_panel(&mut body, &[(a, Owner::A), (b, Owner::B)], 0.0);
    let width = arrangement_panel(&mut body, &arr, PANEL + 20.0).max(PANEL);
    let mut out = header(width, 2.0 * PANEL + 40.0);
    let _ = writeln!(out, "<title>{} vs {}</title>", escape(&a.name), escape(&b.name));
    out.push_str(&body);
    out.push_str("</svg>\n");
    out
}

/// Draws the reduced arrangement; returns the width used.
fn arrangement_panel(out: &mut String, arr: &Arrangement, top: f64) -> f64 {
    let positions = tutte_layout(arr);
    let ncomp = positions.iter().map(|(_, &(c, _, _))| c).max().map_or(0, |c| c + 1);
    let place = |node: &Node| {
        let (c, x, y) = positions[node];
        (PANEL / 2.0 + c as f64 * PANEL + x * DISK_R, top + PANEL / 2.0 - y * DISK_R)
    };
    out.push_str("<g class=\"arrangement\">\n");
    // parallel edges between the same two vertices are bowed apart
    let mut multiplicity: HashMap<(Node, Node), usize> = HashMap::new();
    for owner in [Owner::A, Owner::B] {
        for (arc, color) in COLORS[owner.idx()].iter().enumerate() {
            let path = arr.path(owner, arc);
            for w in path.windows(2) {
                let key = if w[0] <= w[1] { (w[0], w[1]) } else { (w[1], w[0]) };
                let k = multiplicity.entry(key).or_insert(0);
                let bow = if *k == 0 { 0.0 } else { 18.0 * (k.div_ceil(2) as f64) * if *k % 2 == 1 { 1.0 } else { -1.0 } };
                *k += 1;
                let (p, q) = (place(&key.0), place(&key.1));
                let (mx, my) = ((p.0 + q.0) / 2.0, (p.1 + q.1) / 2.0);
                let (dx, dy) = (q.0 - p.0, q.1 - p.1);
                let norm = (dx * dx + dy * dy).sqrt().max(1e-9);
                let (cx, cy) = (mx - dy / norm * bow, my + dx / norm * bow);
                let dash = if owner == Owner::B { " stroke-dasharray=\"6 3\"" } else { "" };
                let _ = writeln!(
                    out,
                    "<path class=\"edge\" d=\"M {:.2} {:.2} Q {cx:.2} {cy:.2} {:.2} {:.2}\" fill=\"none\" stroke=\"{}\" stroke-width=\"2\"{dash}/>",
                    p.0,
                    p.1,
                    q.0,
                    q.1,
                    color
                );
            }
        }
    }
    for x in arr.crossing_ids() {
        let (px, py) = place(&Node::Crossing(x));
        let _ = writeln!(
            out,
            "<circle class=\"crossing\" data-sign=\"{}\" cx=\"{px:.2}\" cy=\"{py:.2}\" r=\"3.5\" fill=\"white\" stroke=\"black\"/>",
            arr.crossing(x).sign
        );
    }
    for p in crate::sphere::Puncture::all() {
        let (px, py) = place(&Node::Puncture(p));
        let _ = writeln!(
            out,
            "<circle class=\"puncture\" cx=\"{px:.2}\" cy=\"{py:.2}\" r=\"4\" fill=\"black\"/>\n<text x=\"{:.2}\" y=\"{:.2}\" font-size=\"12\">{p}</text>",
            px + 6.0,
            py - 6.0
        );
    }
    out.push_str("</g>\n");
    ncomp.max(1) as f64 * PANEL
}

/// Unit-disk coordinates per vertex, with the index of its component.
fn tutte_layout(arr: &Arrangement) -> BTreeMap<Node, (usize, f64, f64)> {
    let mut adjacency: BTreeMap<Node, Vec<Node>> = BTreeMap::new();
    for owner in [Owner::A, Owner::B] {
        for arc in 0..3 {
            for w in arr.path(owner, arc).windows(2) {
                adjacency.entry(w[0]).or_default().push(w[1]);
                adjacency.entry(w[1]).or_default().push(w[0]);
            }
        }
    }
    // connected components in deterministic order
    let mut component: BTreeMap<Node, usize> = BTreeMap::new();
    let mut members: Vec<Vec<Node>> = Vec::new();
    for &start in adjacency.keys() {
        if component.contains_key(&start) {
            continue;
        }
        let c = members.len();
        let mut stack = vec![start];
        let mut list = Vec::new();
        component.insert(start, c);
        while let Some(v) = stack.pop() {
            list.push(v);
            for &w in &adjacency[&v] {
                if let std::collections::btree_map::Entry::Vacant(e) = component.entry(w) {
                    e.insert(c);
                    stack.push(w);
                }
            }
        }
        members.push(list);
    }
    let faces = arr.faces();
    let mut out = BTreeMap::new();
    for (c, list) in members.iter().enumerate() {
        // boundary of the largest face cycle lying in this component
        let mut boundary: Vec<Node> = Vec::new();
        for face in &faces {
            for cycle in &face.cycles {
                if component[&cycle[0].vertex] != c {
                    continue;
                }
                let mut seen = Vec::new();
                for corner in cycle {
                    if !seen.contains(&corner.vertex) {
                        seen.push(corner.vertex);
                    }
                }
                if seen.len() > boundary.len() {
                    boundary = seen;
                }
            }
        }
        let mut pos: BTreeMap<Node, (f64, f64)> = list.iter().map(|&v| (v, (0.0, 0.0))).collect();
        let n = boundary.len();
        for (k, v) in boundary.iter().enumerate() {
            let t = PI / 2.0 - 2.0 * PI * k as f64 / n as f64;
            pos.insert(*v, if n == 2 { ((k as f64) * 1.2 - 0.6, 0.0) } else { (t.cos(), t.sin()) });
        }
        let interior: Vec<Node> = list.iter().copied().filter(|v| !boundary.contains(v)).collect();
        for _ in 0..2000 {
            let mut change: f64 = 0.0;
            for v in &interior {
                let nb = &adjacency[v];
                let (sx, sy) = nb.iter().fold((0.0, 0.0), |acc, w| (acc.0 + pos[w].0, acc.1 + pos[w].1));
                let new = (sx / nb.len() as f64, sy / nb.len() as f64);
                let old = pos[v];
                change = change.max((new.0 - old.0).abs() + (new.1 - old.1).abs());
                pos.insert(*v, new);
            }
            if change < 1e-9 {
                break;
            }
        }
        for (v, (x, y)) in pos {
            out.insert(v, (c, x * 0.85, y * 0.85));
        }
    }
    out
}

/// Number of crossing markers in rendered SVG text.
pub fn count_crossing_markers(svg: &str) -> usize {
    svg.matches("class=\"crossing\"").count()
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn epsilon_pair_has_no_crossing_markers() {
        let e = ArcSystem::epsilon();
        let svg = render_pair(&e, &e);
        assert!(svg.starts_with("<?xml"));
        assert!(svg.trim_end().ends_with("</svg>"));
        assert_eq!(count_crossing_markers(&svg), 0);
        assert_eq!(svg.matches("class=\"puncture\"").count(), 12);
    }

    #[test]
    fn single_system_draws_every_chord() {
        let e = ArcSystem::epsilon();
        let svg = render_system(&e);
        assert_eq!(svg.matches("class=\"chord\"").count(), 3);
        assert_eq!(svg.matches("class=\"puncture\"").count(), 6);
    }
}
