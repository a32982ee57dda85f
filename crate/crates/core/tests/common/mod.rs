#![allow(dead_code)]

use std::collections::BTreeSet;

use cycleforge::realization::ColoredCycleInput;
use cycleforge::simplicial::{validate_pseudo_manifold, AbstractComplex, OrientedPseudoManifold, VertexColoring};
use rand::seq::SliceRandom;
use rand::Rng;

/// `2k`-gon with vertices alternately colored 1, 2.
pub fn polygon_input(sides: usize) -> ColoredCycleInput {
    let z = validate_pseudo_manifold(AbstractComplex::cycle(sides), true).unwrap();
    let col = VertexColoring::new((0..sides).map(|i| (i % 2 + 1) as u8).collect(), 2).unwrap();
    ColoredCycleInput::new(z, col).unwrap()
}

/// 7-vertex torus.
pub fn torus7() -> AbstractComplex {
    let mut tops = Vec::new();
    for i in 0..7 {
        tops.push(vec![i, (i + 1) % 7, (i + 3) % 7]);
        tops.push(vec![i, (i + 2) % 7, (i + 3) % 7]);
    }
    AbstractComplex::new(7, tops).unwrap()
}

pub fn icosahedron() -> (AbstractComplex, Vec<Vec<f64>>) {
    let phi = (1.0 + 5f64.sqrt()) / 2.0;
    let mut pts = Vec::new();
    for &a in &[-1.0, 1.0] {
        for &b in &[-phi, phi] {
            pts.push(vec![0.0, a, b]);
            pts.push(vec![a, b, 0.0]);
            pts.push(vec![b, 0.0, a]);
        }
    }
    let d2 = |p: &[f64], q: &[f64]| p.iter().zip(q).map(|(x, y)| (x - y) * (x - y)).sum::<f64>();
    let adj = |i: usize, j: usize| (d2(&pts[i], &pts[j]) - 4.0).abs() < 1e-9;
    let mut tops = Vec::new();
    for i in 0..12 {
        for j in i + 1..12 {
            for k in j + 1..12 {
                if adj(i, j) && adj(j, k) && adj(i, k) {
                    tops.push(vec![i, j, k]);
                }
            }
        }
    }
    assert_eq!(tops.len(), 20);
    (AbstractComplex::new(12, tops).unwrap(), pts)
}

/// Replaces every top simplex containing `face` by its cone from a new
/// vertex over the faces missing one vertex of `face`.
pub fn stellar(k: &AbstractComplex, face: &[usize]) -> AbstractComplex {
    let v = k.vertex_count();
    let mut tops = Vec::new();
    for s in k.top_simplices() {
        if face.iter().all(|x| s.contains(x)) {
            for t in face {
                tops.push(s.iter().map(|&x| if x == *t { v } else { x }).collect());
            }
        } else {
            tops.push(s.clone());
        }
    }
    AbstractComplex::new(v + 1, tops).unwrap()
}

/// Merges vertex `b` into `a` and drops the now unused label.
fn pinch(k: &AbstractComplex, a: usize, b: usize) -> Option<AbstractComplex> {
    let relabel = |x: usize| {
        let x = if x == b { a } else { x };
        if x > b {
            x - 1
        } else {
            x
        }
    };
    let tops = k.top_simplices().iter().map(|s| s.iter().map(|&x| relabel(x)).collect()).collect();
    AbstractComplex::new(k.vertex_count() - 1, tops).ok()
}

fn neighbors(k: &AbstractComplex, v: usize) -> BTreeSet<usize> {
    k.top_simplices().iter().filter(|s| s.contains(&v)).flatten().copied().collect()
}

/// Random oriented, strongly connected pseudo-manifold of dimension `n`:
/// stellar moves on a seed sphere or torus, then possibly a vertex pinch
/// (which keeps the pseudo-manifold conditions but not manifoldness).
pub fn random_pseudo_manifold<R: Rng>(n: usize, moves: usize, rng: &mut R) -> OrientedPseudoManifold {
    let mut k = if n == 2 && rng.gen_bool(0.3) { torus7() } else { AbstractComplex::simplex_boundary(n + 1) };
    for _ in 0..moves {
        let s = k.top_simplices().choose(rng).unwrap().clone();
        let size = rng.gen_range(2..=s.len());
        let mut face: Vec<usize> = s.choose_multiple(rng, size).copied().collect();
        face.sort_unstable();
        k = stellar(&k, &face);
    }
    if n >= 2 && rng.gen_bool(0.5) {
        let vs: Vec<usize> = (0..k.vertex_count()).collect();
        for _ in 0..20 {
            let a = *vs.choose(rng).unwrap();
            let b = *vs.choose(rng).unwrap();
            let na = neighbors(&k, a);
            let nb = neighbors(&k, b);
            if a == b || na.contains(&b) || !na.is_disjoint(&nb) {
                continue;
            }
            let far = na.iter().all(|&x| nb.iter().all(|&y| !neighbors(&k, x).contains(&y)));
            if !far {
                continue;
            }
            if let Some(p) = pinch(&k, a.min(b), a.max(b)) {
                if let Ok(pm) = validate_pseudo_manifold(p, true) {
                    if pm.strongly_connected() {
                        return pm;
                    }
                }
            }
        }
    }
    validate_pseudo_manifold(k, true).unwrap()
}

/// Winding number of a closed polygon path on S¹ by angle sweep, following
/// the vertex order of each oriented edge.
pub fn polygon_winding(z: &OrientedPseudoManifold, placement: &[Vec<f64>]) -> i64 {
    let o = z.orientation().unwrap();
    let mut total = 0.0;
    for (s, &sign) in z.complex().top_simplices().iter().zip(o) {
        let (p, q) = (&placement[s[0]], &placement[s[1]]);
        let a = q[1].atan2(q[0]) - p[1].atan2(p[0]);
        let a = (a + std::f64::consts::PI).rem_euclid(2.0 * std::f64::consts::PI) - std::f64::consts::PI;
        total += sign as f64 * a;
    }
    (total / (2.0 * std::f64::consts::PI)).round() as i64
}

/// Uniform random rotation of R³ from a unit quaternion.
pub fn random_rotation3<R: Rng>(rng: &mut R) -> [[f64; 3]; 3] {
    let (w, x, y, z) = loop {
        let q: [f64; 4] =
            [rng.gen_range(-1.0..1.0), rng.gen_range(-1.0..1.0), rng.gen_range(-1.0..1.0), rng.gen_range(-1.0..1.0)];
        let l = q.iter().map(|a| a * a).sum::<f64>().sqrt();
        if l > 0.1 && l <= 1.0 {
            break (q[0] / l, q[1] / l, q[2] / l, q[3] / l);
        }
    };
    [
        [1.0 - 2.0 * (y * y + z * z), 2.0 * (x * y - z * w), 2.0 * (x * z + y * w)],
        [2.0 * (x * y + z * w), 1.0 - 2.0 * (x * x + z * z), 2.0 * (y * z - x * w)],
        [2.0 * (x * z - y * w), 2.0 * (y * z + x * w), 1.0 - 2.0 * (x * x + y * y)],
    ]
}

pub fn rotate3(m: &[[f64; 3]; 3], v: &[f64]) -> Vec<f64> {
    (0..3).map(|i| (0..3).map(|j| m[i][j] * v[j]).sum()).collect()
}
