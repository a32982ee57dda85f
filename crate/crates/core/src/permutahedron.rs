//! Combinatorics and exact geometry of the permutahedron `Πⁿ`: the facet
//! poset of nonempty proper subsets `ω ⊂ [n+1]`, duality with `(∂Δⁿ)′`, the
//! projection `π: (Πⁿ)′ → (Δⁿ)′`, the constants `ε_n, ρ_n, R_n, r_n`, the
//! exact sparseness certificate and the radial chart.
//!
//! `Πⁿ` is realized as the convex hull of the permutations of `(1, …, n+1)`;
//! the facet `F_ω` is `Σ_{i∈ω} t_i = (sum of the |ω| largest values)`.

use std::collections::HashMap;
use std::fmt;

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{Signed, Zero};
use rand::seq::SliceRandom;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rayon::prelude::*;
use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::coxeter::Poset;
use crate::exact::det_sign_i64;
use crate::perm::permutations;
use crate::simplicial::{
    barycentric_subdivide, map_degree, AbstractComplex, OrientedPseudoManifold, SimplicialError, SimplicialMap,
    Subdivision, VertexColoring,
};

#[derive(Debug, Error, Clone, PartialEq)]
pub enum PermutahedronError {
    #[error("dimension must be at least 1")]
    ZeroDimension,
    #[error("dimension {0} is too large for this construction")]
    TooLarge(usize),
    #[error("direction is zero or not in the sum-zero hyperplane")]
    ZeroDirection,
    #[error("direction has {found} coordinates, expected {expected}")]
    WrongLength { expected: usize, found: usize },
    #[error(transparent)]
    Simplicial(#[from] SimplicialError),
}

/// A nonempty proper subset of `{1, …, n+1}`; bit `i` stands for color /
/// coordinate `i + 1`.
#[derive(Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
pub struct OmegaSet(u32);

impl OmegaSet {
    pub fn from_mask(mask: u32) -> Self {
        OmegaSet(mask)
    }

    /// From 1-based colors.
    pub fn from_colors(colors: &[u8]) -> Self {
        OmegaSet(colors.iter().fold(0, |m, &c| m | 1 << (c - 1)))
    }

    pub fn mask(self) -> u32 {
        self.0
    }

    /// Position in [`OmegaSet::all`] and vertex id in [`dual_complex`].
    pub fn index(self) -> usize {
        self.0 as usize - 1
    }

    pub fn from_index(i: usize) -> Self {
        OmegaSet(i as u32 + 1)
    }

    pub fn contains_color(self, c: u8) -> bool {
        c >= 1 && self.0 >> (c - 1) & 1 == 1
    }

    pub fn contains_coord(self, i: usize) -> bool {
        self.0 >> i & 1 == 1
    }

    pub fn size(self) -> usize {
        self.0.count_ones() as usize
    }

    pub fn is_subset(self, other: OmegaSet) -> bool {
        self.0 & !other.0 == 0
    }

    pub fn is_strict_subset(self, other: OmegaSet) -> bool {
        self != other && self.is_subset(other)
    }

    pub fn comparable(self, other: OmegaSet) -> bool {
        self.is_subset(other) || other.is_subset(self)
    }

    pub fn colors(self) -> Vec<u8> {
        (0..32).filter(|&i| self.0 >> i & 1 == 1).map(|i| i as u8 + 1).collect()
    }

    pub fn coords(self) -> Vec<usize> {
        (0..32).filter(|&i| self.0 >> i & 1 == 1).collect()
    }

    /// All `2^{n+1} − 2` sets, ordered by mask.
    pub fn all(n: usize) -> Vec<OmegaSet> {
        (1..(1u32 << (n + 1)) - 1).map(OmegaSet).collect()
    }
}

impl fmt::Debug for OmegaSet {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{{")?;
        for (k, c) in self.colors().iter().enumerate() {
            if k > 0 {
                write!(f, ",")?;
            }
            write!(f, "{c}")?;
        }
        write!(f, "}}")
    }
}

fn check_n(n: usize, max: usize) -> Result<(), PermutahedronError> {
    if n == 0 {
        return Err(PermutahedronError::ZeroDimension);
    }
    if n > max {
        return Err(PermutahedronError::TooLarge(n));
    }
    Ok(())
}

/// Facet poset: element `i` is `OmegaSet::from_index(i)`, ordered by strict
/// inclusion.
pub fn omega_poset(n: usize) -> Poset {
    let all = OmegaSet::all(n);
    let mut pairs = Vec::new();
    for &a in &all {
        for &b in &all {
            if a.is_strict_subset(b) {
                pairs.push((a.index(), b.index()));
            }
        }
    }
    Poset::new(all.len(), &pairs).expect("inclusion is a strict order")
}

/// `K_{Πⁿ}` (vertices = facets, simplices = chains) and its verified
/// isomorphism with `(∂Δⁿ)′`.
#[derive(Clone, Debug)]
pub struct DualComplex {
    pub n: usize,
    pub complex: AbstractComplex,
    /// Colors `|ω|`, in `1..=n`.
    pub coloring: VertexColoring,
    pub subdivision: Subdivision,
    /// Vertex `ω.index()` ↦ vertex of `(∂Δⁿ)′` (the face `Δ_ω`).
    pub iso: Vec<usize>,
}

pub fn dual_complex(n: usize) -> Result<DualComplex, PermutahedronError> {
    check_n(n, 9)?;
    let coords: Vec<usize> = (0..=n).collect();
    let mut tops = Vec::new();
    for p in permutations(&coords) {
        let mut mask = 0u32;
        let chain: Vec<usize> = p[..n]
            .iter()
            .map(|&c| {
                mask |= 1 << c;
                OmegaSet(mask).index()
            })
            .collect();
        tops.push(chain);
    }
    let all = OmegaSet::all(n);
    let complex = AbstractComplex::new(all.len(), tops)?;
    let coloring = VertexColoring::new(all.iter().map(|w| w.size() as u8).collect(), n)?;
    let subdivision = barycentric_subdivide(&AbstractComplex::simplex_boundary(n));
    let face_index: HashMap<&[usize], usize> =
        subdivision.faces.iter().enumerate().map(|(i, f)| (f.as_slice(), i)).collect();
    let iso: Vec<usize> = all.iter().map(|w| face_index[w.coords().as_slice()]).collect();
    let mut image: Vec<Vec<usize>> = complex
        .top_simplices()
        .iter()
        .map(|s| {
            let mut t: Vec<usize> = s.iter().map(|&v| iso[v]).collect();
            t.sort_unstable();
            t
        })
        .collect();
    image.sort();
    let mut sorted_iso = iso.clone();
    sorted_iso.sort_unstable();
    sorted_iso.dedup();
    if image != subdivision.complex.top_simplices() || sorted_iso.len() != iso.len() {
        return Err(SimplicialError::NotSimplicial { simplex: vec![], image: vec![] }.into());
    }
    Ok(DualComplex { n, complex, coloring, subdivision, iso })
}

/// Doubled barycentre of the face `F_{ω₁} ∩ … ∩ F_{ω_k}` given as an
/// ascending chain (empty chain: the whole polytope).
pub fn face_barycentre_doubled(n: usize, chain: &[OmegaSet]) -> Vec<i64> {
    let mut out = vec![0i64; n + 1];
    let mut prev = OmegaSet(0);
    let mut top = (n + 1) as i64;
    let full = OmegaSet((1 << (n + 1)) - 1);
    for &w in chain.iter().chain(std::iter::once(&full)) {
        let block = w.0 & !prev.0;
        let size = block.count_ones() as i64;
        let lo = top - size + 1;
        for i in 0..=n {
            if block >> i & 1 == 1 {
                out[i] = lo + top;
            }
        }
        top -= size;
        prev = w;
    }
    out
}

fn orientation_sign(points: &[Vec<i64>]) -> i8 {
    let d = points[0].len();
    let mut rows: Vec<Vec<i64>> =
        points[1..].iter().map(|p| p.iter().zip(&points[0]).map(|(a, b)| a - b).collect()).collect();
    rows.push(vec![1; d]);
    det_sign_i64(&rows)
}

/// The projection `π` from the barycentric subdivision of `Πⁿ` onto that of
/// `Δⁿ`, with both balls oriented from their embeddings in `R^{n+1}`.
#[derive(Clone, Debug)]
pub struct PiProjection {
    pub n: usize,
    pub source: OrientedPseudoManifold,
    pub target: OrientedPseudoManifold,
    pub map: SimplicialMap,
    /// Source vertex ↦ face of `Πⁿ` as an ascending chain.
    pub source_faces: Vec<Vec<OmegaSet>>,
    /// Target vertex ↦ face of `Δⁿ` as a coordinate set.
    pub target_faces: Vec<Vec<usize>>,
    pub degree: i64,
    /// `π(F_ω) ⊆ Δ_ω` for every `ω`, checked on vertices.
    pub containment_ok: bool,
}

fn all_chains(n: usize) -> Vec<Vec<OmegaSet>> {
    fn extend(n: usize, chain: &mut Vec<OmegaSet>, out: &mut Vec<Vec<OmegaSet>>) {
        out.push(chain.clone());
        let last = chain.last().map_or(0, |w| w.0);
        let full = (1u32 << (n + 1)) - 1;
        for m in 1..full {
            if m & last == last && m != last {
                chain.push(OmegaSet(m));
                extend(n, chain, out);
                chain.pop();
            }
        }
    }
    let mut out = Vec::new();
    extend(n, &mut Vec::new(), &mut out);
    out.sort_by(|a, b| a.len().cmp(&b.len()).then_with(|| a.cmp(b)));
    out
}

pub fn pi_projection(n: usize) -> Result<PiProjection, PermutahedronError> {
    check_n(n, 5)?;
    let chains = all_chains(n);
    let chain_index: HashMap<&[OmegaSet], usize> = chains.iter().enumerate().map(|(i, c)| (c.as_slice(), i)).collect();
    let bary: Vec<Vec<i64>> = chains.iter().map(|c| face_barycentre_doubled(n, c)).collect();
    let coords: Vec<usize> = (0..=n).collect();
    let mut tops = Vec::new();
    let mut signs = Vec::new();
    for p in permutations(&coords) {
        let mut mask = 0u32;
        let maximal: Vec<OmegaSet> = p[..n]
            .iter()
            .map(|&c| {
                mask |= 1 << c;
                OmegaSet(mask)
            })
            .collect();
        for removal in permutations(&(0..n).collect::<Vec<_>>()) {
            let mut current = maximal.clone();
            let mut flag = vec![chain_index[current.as_slice()]];
            for &r in &removal {
                let w = maximal[r];
                current.retain(|&x| x != w);
                flag.push(chain_index[current.as_slice()]);
            }
            let pts: Vec<Vec<i64>> = flag.iter().map(|&v| bary[v].clone()).collect();
            signs.push(orientation_sign(&pts));
            tops.push(flag);
        }
    }
    let (source_complex, origin) = AbstractComplex::with_signs(chains.len(), tops)?;
    let source_orientation: Vec<i8> = origin.iter().map(|&(i, s)| signs[i] * s).collect();
    let source = OrientedPseudoManifold::with_orientation(source_complex.clone(), source_orientation, true)?;

    let simplex = AbstractComplex::new(n + 1, vec![coords.clone()])?;
    let sub = barycentric_subdivide(&simplex);
    let lcm = (1..=n as i64 + 1).fold(1i64, |l, k| l / gcd(l, k) * k);
    let tbary: Vec<Vec<i64>> = sub
        .faces
        .iter()
        .map(|f| (0..=n).map(|i| if f.contains(&i) { lcm / f.len() as i64 } else { 0 }).collect())
        .collect();
    let target_orientation: Vec<i8> = sub
        .complex
        .top_simplices()
        .iter()
        .map(|s| orientation_sign(&s.iter().map(|&v| tbary[v].clone()).collect::<Vec<_>>()))
        .collect();
    let target = OrientedPseudoManifold::with_orientation(sub.complex.clone(), target_orientation, true)?;

    let tface_index: HashMap<&[usize], usize> = sub.faces.iter().enumerate().map(|(i, f)| (f.as_slice(), i)).collect();
    let vertex_map: Vec<usize> = chains
        .iter()
        .map(|c| match c.first() {
            Some(w) => tface_index[w.coords().as_slice()],
            None => tface_index[coords.as_slice()],
        })
        .collect();
    let map = SimplicialMap::new(source_complex, sub.complex.clone(), vertex_map)?;
    let degree = map_degree(&map, &source, &target)?;
    let containment_ok = OmegaSet::all(n).iter().all(|&w| {
        chains
            .iter()
            .enumerate()
            .filter(|(_, c)| c.contains(&w))
            .all(|(v, _)| sub.faces[map.vertex_map()[v]].iter().all(|&i| w.contains_coord(i)))
    });
    Ok(PiProjection { n, source, target, map, source_faces: chains, target_faces: sub.faces, degree, containment_ok })
}

fn gcd(a: i64, b: i64) -> i64 {
    if b == 0 {
        a.abs()
    } else {
        gcd(b, a % b)
    }
}

/// Vertex coordinates and facet data of `Πⁿ ⊂ R^{n+1}`.
#[derive(Clone, Debug)]
pub struct PermGeometry {
    pub n: usize,
    pub vertices: Vec<Vec<i64>>,
}

impl PermGeometry {
    pub fn new(n: usize) -> Result<Self, PermutahedronError> {
        check_n(n, 7)?;
        let base: Vec<i64> = (1..=n as i64 + 1).collect();
        let mut vertices = permutations(&base);
        vertices.sort();
        Ok(PermGeometry { n, vertices })
    }

    /// Right-hand side of the facet equation: sum of the `|ω|` largest values.
    pub fn facet_rhs(&self, w: OmegaSet) -> i64 {
        let k = w.size() as i64;
        let top = self.n as i64 + 1;
        k * (2 * top - k + 1) / 2
    }

    /// Doubled centre: every coordinate equals `n + 2`.
    pub fn center_doubled(&self) -> Vec<i64> {
        vec![self.n as i64 + 2; self.n + 1]
    }

    pub fn on_facet(&self, v: &[i64], w: OmegaSet) -> bool {
        w.coords().iter().map(|&i| v[i]).sum::<i64>() == self.facet_rhs(w)
    }

    /// The `n` facets through a vertex: the sets of coordinates carrying the
    /// `k` largest values, `k = 1..n`.
    pub fn facets_at(&self, v: &[i64]) -> Vec<OmegaSet> {
        let mut order: Vec<usize> = (0..=self.n).collect();
        order.sort_by_key(|&i| std::cmp::Reverse(v[i]));
        let mut mask = 0u32;
        order[..self.n]
            .iter()
            .map(|&i| {
                mask |= 1 << i;
                OmegaSet(mask)
            })
            .collect()
    }

    pub fn facet_vertices(&self, w: OmegaSet) -> Vec<usize> {
        (0..self.vertices.len()).filter(|&i| self.on_facet(&self.vertices[i], w)).collect()
    }

    /// Facets meet iff they share a vertex.
    pub fn facets_intersect(&self, a: OmegaSet, b: OmegaSet) -> bool {
        self.vertices.iter().any(|v| self.on_facet(v, a) && self.on_facet(v, b))
    }

    /// `4·|v − o|²` for a vertex.
    pub fn squared_radius_times_4(&self, v: &[i64]) -> i64 {
        v.iter().zip(self.center_doubled()).map(|(&x, c)| (2 * x - c).pow(2)).sum()
    }
}

/// Closed interval containing a real value.
#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
pub struct Enclosure {
    pub lo: f64,
    pub hi: f64,
}

impl Enclosure {
    fn around(x: f64, ulps: u32) -> Self {
        let mut lo = x;
        let mut hi = x;
        for _ in 0..ulps {
            lo = lo.next_down();
            hi = hi.next_up();
        }
        Enclosure { lo, hi }
    }

    pub fn contains(&self, x: f64) -> bool {
        self.lo <= x && x <= self.hi
    }
}

/// The constants attached to dimension `n`, with `N = n(n+1)(n+2)`:
/// `cos ε_n = 1 − 12/N`, `ρ_n = ln(√(N/6) + √(N/6 − 1))`, `R_n² = N/12`,
/// `r_n² = n(n+1)/4`.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct Constants {
    pub n: usize,
    pub big_n: u128,
    pub eps: f64,
    pub rho: f64,
    pub circumradius: f64,
    pub facet_distance: f64,
    pub eps_enclosure: Enclosure,
    pub rho_enclosure: Enclosure,
    /// `|ρ_n − arsinh(cot(ε_n/2))|` evaluated in floating point.
    pub identity_residual: f64,
    /// `cos ε_n` as an exact fraction `(N − 12)/N`.
    pub cos_eps: (i128, u128),
    /// `cot²(ε_n/2) = sinh²ρ_n = N/6 − 1` as an exact fraction.
    pub sinh_rho_squared: (u128, u128),
}

/// Evaluates in the cancellation-free forms `ε = 2 asin √(6/N)` and
/// `ρ = acosh √(N/6)`; enclosures widen the result by a few ulps.
pub fn constants(n: usize) -> Result<Constants, PermutahedronError> {
    check_n(n, 1_000_000)?;
    let nn = n as u128;
    let big_n = nn * (nn + 1) * (nn + 2);
    let nf = big_n as f64;
    let eps = 2.0 * (6.0 / nf).sqrt().asin();
    let q = (nf / 6.0).sqrt();
    let rho = (q + ((nf - 6.0) / 6.0).sqrt()).ln();
    let identity = (1.0 / (eps / 2.0).tan()).asinh();
    let (c_num, c_den) = reduce_fraction(big_n as i128 - 12, big_n);
    let s_num = big_n - 6;
    let g = gcd_u(s_num, 6);
    Ok(Constants {
        n,
        big_n,
        eps,
        rho,
        circumradius: (nf / 12.0).sqrt(),
        facet_distance: 0.5 * ((n * (n + 1)) as f64).sqrt(),
        eps_enclosure: Enclosure::around(eps, 4),
        rho_enclosure: Enclosure::around(rho, 4),
        identity_residual: (rho - identity).abs(),
        cos_eps: (c_num, c_den),
        sinh_rho_squared: (s_num / g, 6 / g),
    })
}

fn gcd_u(a: u128, b: u128) -> u128 {
    if b == 0 {
        a
    } else {
        gcd_u(b, a % b)
    }
}

fn reduce_fraction(num: i128, den: u128) -> (i128, u128) {
    let g = gcd_u(num.unsigned_abs(), den).max(1);
    (num / g as i128, den / g)
}

/// One pair of points on non-intersecting facets whose angular distance is
/// below `ε_n`.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct SparseViolation {
    pub facets: (Vec<u8>, Vec<u8>),
    /// Scaled vectors `x − o`, `y − o`.
    pub x: Vec<i64>,
    pub y: Vec<i64>,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct SparseReport {
    pub n: usize,
    pub vertex_pairs_checked: usize,
    pub random_pairs_checked: usize,
    pub violations: Vec<SparseViolation>,
    /// Every facet hyperplane is at distance ≥ r_n from the centre (exact).
    pub facet_distance_ok: bool,
    /// `r_n/R_n ≥ sin(ε_n/2)`, i.e. `2 arccos(r_n/R_n) ≤ π − ε_n` (exact).
    pub diameter_ok: bool,
    pub diameter_bound: f64,
    pub eps: f64,
}

impl SparseReport {
    pub fn passed(&self) -> bool {
        self.violations.is_empty() && self.facet_distance_ok && self.diameter_ok
    }
}

/// Exact test of `ξ·η ≤ (1 − 12/N)|ξ||η|` for integer vectors.
pub fn cosine_within_bound(xi: &[i64], eta: &[i64], big_n: i128) -> bool {
    let d: i128 = xi.iter().zip(eta).map(|(&a, &b)| a as i128 * b as i128).sum();
    let a: i128 = xi.iter().map(|&x| (x as i128).pow(2)).sum();
    let b: i128 = eta.iter().map(|&x| (x as i128).pow(2)).sum();
    let c = big_n - 12;
    let lhs = BigInt::from(d) * BigInt::from(d) * BigInt::from(big_n) * BigInt::from(big_n);
    let rhs = BigInt::from(c) * BigInt::from(c) * BigInt::from(a) * BigInt::from(b);
    if c >= 0 {
        d <= 0 || lhs <= rhs
    } else {
        d < 0 && lhs >= rhs
    }
}

/// Exhaustive check over vertex pairs lying on some pair of non-intersecting
/// facets, plus `samples` random rational boundary points (integer-weighted
/// convex combinations of facet vertices), all in exact arithmetic.
pub fn sparse_certificate(n: usize, samples: usize, seed: u64) -> Result<SparseReport, PermutahedronError> {
    check_n(n, 6)?;
    let geom = PermGeometry::new(n)?;
    let c = constants(n)?;
    let big_n = c.big_n as i128;
    let center = geom.center_doubled();
    let rel = |v: &[i64]| -> Vec<i64> { v.iter().zip(&center).map(|(&x, &o)| 2 * x - o).collect() };
    let facets: Vec<Vec<OmegaSet>> = geom.vertices.iter().map(|v| geom.facets_at(v)).collect();
    let count = geom.vertices.len();

    let (pairs, mut violations): (usize, Vec<SparseViolation>) = (0..count)
        .into_par_iter()
        .map(|i| {
            let mut checked = 0;
            let mut bad = Vec::new();
            for j in 0..count {
                let witness =
                    facets[i].iter().find_map(|&a| facets[j].iter().find(|&&b| !a.comparable(b)).map(|&b| (a, b)));
                let Some((a, b)) = witness else { continue };
                checked += 1;
                let (x, y) = (rel(&geom.vertices[i]), rel(&geom.vertices[j]));
                if !cosine_within_bound(&x, &y, big_n) {
                    bad.push(SparseViolation { facets: (a.colors(), b.colors()), x, y });
                }
            }
            (checked, bad)
        })
        .reduce(
            || (0, Vec::new()),
            |(c1, mut v1), (c2, v2)| {
                v1.extend(v2);
                (c1 + c2, v1)
            },
        );

    let all = OmegaSet::all(n);
    let incomparable: Vec<(OmegaSet, OmegaSet)> =
        all.iter().flat_map(|&a| all.iter().filter(move |&&b| !a.comparable(b)).map(move |&b| (a, b))).collect();
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let mut random_checked = 0;
    if !incomparable.is_empty() {
        for _ in 0..samples {
            let (a, b) = *incomparable.choose(&mut rng).expect("nonempty");
            let x = random_facet_point(n, a, &mut rng);
            let y = random_facet_point(n, b, &mut rng);
            random_checked += 1;
            if !cosine_within_bound(&x, &y, big_n) {
                violations.push(SparseViolation { facets: (a.colors(), b.colors()), x, y });
            }
        }
    }
    violations.sort_by(|p, q| (&p.facets, &p.x, &p.y).cmp(&(&q.facets, &q.x, &q.y)));

    // dist²(o, H_ω) = k(n+1−k)(n+1)/4 ≥ n(n+1)/4.
    let r2 = BigRational::new(BigInt::from(n * (n + 1)), BigInt::from(4));
    let facet_distance_ok =
        (1..=n).all(|k| BigRational::new(BigInt::from(k * (n + 1 - k) * (n + 1)), BigInt::from(4)) >= r2);
    // (r/R)² = 3/(n+2) against sin²(ε/2) = 6/N.
    let ratio = BigRational::new(BigInt::from(3), BigInt::from(n + 2));
    let sin2 = BigRational::new(BigInt::from(6), BigInt::from(c.big_n));
    let diameter_ok = ratio >= sin2;
    let diameter_bound = 2.0 * (c.facet_distance / c.circumradius).acos();
    Ok(SparseReport {
        n,
        vertex_pairs_checked: pairs,
        random_pairs_checked: random_checked,
        violations,
        facet_distance_ok,
        diameter_ok,
        diameter_bound,
        eps: c.eps,
    })
}

/// `Σ wᵢ (2vᵢ − o₂)` for a few random vertices `vᵢ` of `F_ω`; a positive
/// multiple of `p − o` for a rational point `p ∈ F_ω`.
fn random_facet_point<R: Rng>(n: usize, w: OmegaSet, rng: &mut R) -> Vec<i64> {
    let k = w.size();
    let top: Vec<i64> = ((n + 2 - k) as i64..=(n + 1) as i64).collect();
    let bottom: Vec<i64> = (1..=(n + 1 - k) as i64).collect();
    let inside = w.coords();
    let outside: Vec<usize> = (0..=n).filter(|&i| !w.contains_coord(i)).collect();
    let mut acc = vec![0i64; n + 1];
    for _ in 0..rng.gen_range(1..=n + 1) {
        let weight = rng.gen_range(1..=1000i64);
        let mut t = top.clone();
        let mut b = bottom.clone();
        t.shuffle(rng);
        b.shuffle(rng);
        let mut v = vec![0i64; n + 1];
        for (&i, &val) in inside.iter().zip(&t) {
            v[i] = val;
        }
        for (&i, &val) in outside.iter().zip(&b) {
            v[i] = val;
        }
        for i in 0..=n {
            acc[i] += weight * (2 * v[i] - (n as i64 + 2));
        }
    }
    acc
}

/// Radial projection `h: ∂Πⁿ → S^{n−1}` from the centre, with `S^{n−1}` the
/// unit sphere of the sum-zero hyperplane expressed in an orthonormal
/// (Helmert) basis.
#[derive(Clone, Debug)]
pub struct RadialChart {
    pub n: usize,
    pub eps: f64,
    basis: Vec<Vec<f64>>,
}

impl RadialChart {
    pub fn new(n: usize) -> Result<Self, PermutahedronError> {
        check_n(n, 16)?;
        let basis = (1..=n)
            .map(|k| {
                let norm = ((k * (k + 1)) as f64).sqrt();
                (0..=n)
                    .map(|i| match i.cmp(&k) {
                        std::cmp::Ordering::Less => 1.0 / norm,
                        std::cmp::Ordering::Equal => -(k as f64) / norm,
                        std::cmp::Ordering::Greater => 0.0,
                    })
                    .collect()
            })
            .collect();
        Ok(RadialChart { n, eps: constants(n)?.eps, basis })
    }

    /// Chart coordinates (`n` of them) to a sum-zero vector of `R^{n+1}`.
    pub fn to_ambient(&self, u: &[f64]) -> Vec<f64> {
        let mut out = vec![0.0; self.n + 1];
        for (b, &c) in self.basis.iter().zip(u) {
            for (o, &x) in out.iter_mut().zip(b) {
                *o += c * x;
            }
        }
        out
    }

    pub fn from_ambient(&self, v: &[f64]) -> Vec<f64> {
        self.basis.iter().map(|b| b.iter().zip(v).map(|(x, y)| x * y).sum()).collect()
    }

    /// `h(F_ω)`'s centre direction: the unit normal of `F_ω` in chart coordinates.
    pub fn facet_direction(&self, w: OmegaSet) -> Vec<f64> {
        let k = w.size() as f64;
        let amb: Vec<f64> =
            (0..=self.n).map(|i| if w.contains_coord(i) { 1.0 } else { 0.0 } - k / (self.n as f64 + 1.0)).collect();
        normalize(&self.from_ambient(&amb))
    }

    /// The point `h⁻¹(u)` of `∂Πⁿ`, in `R^{n+1}`.
    pub fn h_inverse(&self, u: &[f64]) -> Result<Vec<f64>, PermutahedronError> {
        let (t, _) = self.ray_exit(u)?;
        let d = self.to_ambient(u);
        let o = (self.n as f64 + 2.0) / 2.0;
        Ok(d.iter().map(|x| o + t * x).collect())
    }

    /// `h(p)` for a boundary point `p ∈ R^{n+1}`.
    pub fn h(&self, p: &[f64]) -> Result<Vec<f64>, PermutahedronError> {
        let o = (self.n as f64 + 2.0) / 2.0;
        let d: Vec<f64> = p.iter().map(|x| x - o).collect();
        let u = self.from_ambient(&d);
        if norm(&u) == 0.0 {
            return Err(PermutahedronError::ZeroDirection);
        }
        Ok(normalize(&u))
    }

    /// Exit parameter of the ray `o + t·d` and the per-facet parameters.
    fn ray_exit(&self, u: &[f64]) -> Result<(f64, Vec<(OmegaSet, f64)>), PermutahedronError> {
        if u.len() != self.n {
            return Err(PermutahedronError::WrongLength { expected: self.n, found: u.len() });
        }
        if norm(u) == 0.0 {
            return Err(PermutahedronError::ZeroDirection);
        }
        let d = self.to_ambient(u);
        let mut hits = Vec::new();
        for w in OmegaSet::all(self.n) {
            let dw: f64 = w.coords().iter().map(|&i| d[i]).sum();
            if dw > 0.0 {
                let k = w.size() as f64;
                hits.push((w, k * (self.n as f64 + 1.0 - k) / 2.0 / dw));
            }
        }
        let t = hits.iter().map(|h| h.1).fold(f64::INFINITY, f64::min);
        Ok((t, hits))
    }

    /// Facets whose region `h(F_ω)` contains `u`, within relative tolerance
    /// `tol`, ascending by index.
    pub fn regions_containing(&self, u: &[f64], tol: f64) -> Result<Vec<OmegaSet>, PermutahedronError> {
        let (t, hits) = self.ray_exit(u)?;
        let mut out: Vec<OmegaSet> = hits.into_iter().filter(|&(_, s)| s <= t * (1.0 + tol)).map(|(w, _)| w).collect();
        out.sort();
        Ok(out)
    }

    /// Exact membership for a rational direction in the sum-zero hyperplane
    /// of `R^{n+1}`: `ω` attains `min_ω k(n+1−k)/(2 d(ω))` over `d(ω) > 0`.
    pub fn regions_containing_exact(&self, d: &[BigRational]) -> Result<Vec<OmegaSet>, PermutahedronError> {
        if d.len() != self.n + 1 {
            return Err(PermutahedronError::WrongLength { expected: self.n + 1, found: d.len() });
        }
        let sum: BigRational = d.iter().cloned().sum();
        if !sum.is_zero() || d.iter().all(|x| x.is_zero()) {
            return Err(PermutahedronError::ZeroDirection);
        }
        let mut best: Option<BigRational> = None;
        let mut out = Vec::new();
        for w in OmegaSet::all(self.n) {
            let dw: BigRational = w.coords().iter().map(|&i| d[i].clone()).sum();
            if !dw.is_positive() {
                continue;
            }
            let k = w.size();
            let t = BigRational::new(BigInt::from(k * (self.n + 1 - k)), BigInt::from(2)) / dw;
            match &best {
                Some(b) if &t > b => {}
                Some(b) if &t == b => out.push(w),
                _ => {
                    best = Some(t);
                    out = vec![w];
                }
            }
        }
        out.sort();
        Ok(out)
    }

    /// Lower bound on the angular distance between `h(F_a)` and `h(F_b)`.
    pub fn region_distance_bound(&self, a: OmegaSet, b: OmegaSet) -> f64 {
        if a.comparable(b) {
            0.0
        } else {
            self.eps
        }
    }

    /// Upper bound on `diam h(F_ω)`: `2 arccos(r_n/R_n)`.
    pub fn region_diameter_bound(&self) -> f64 {
        let n = self.n as f64;
        2.0 * (3.0 / (n + 2.0)).sqrt().acos()
    }
}

pub(crate) fn norm(v: &[f64]) -> f64 {
    v.iter().map(|x| x * x).sum::<f64>().sqrt()
}

pub(crate) fn normalize(v: &[f64]) -> Vec<f64> {
    let l = norm(v);
    v.iter().map(|x| x / l).collect()
}
