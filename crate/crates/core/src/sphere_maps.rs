//! Spherical fine maps, the inradius bound and simplicial approximation into
//! the radial chart of the permutahedron.
//!
//! A fine map places each vertex of an `(n−1)`-pseudo-manifold `K` on
//! `S^{n−1} ⊂ Rⁿ` and extends by normalized convex combinations. It is
//! `ε`-fine when every simplex has pairwise vertex distances `< ε` and the
//! degree is nonzero. Degrees are counted at probe points: a simplex covers
//! `p` when `p` lies in the cone over its vertices.

use num_rational::BigRational;
use num_traits::{Signed, ToPrimitive, Zero};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::exact::{det_sign_rational, solve_rational};
use crate::permutahedron::{dual_complex, norm, normalize, OmegaSet, PermutahedronError, RadialChart};
use crate::simplicial::{map_degree, OrientedPseudoManifold, SimplicialError, SimplicialMap};
use crate::small_cover::{flag_square_predicates, induced_domination, DominationReport, SmallCoverError};

/// Orientation margin in float mode.
pub const FLOAT_MARGIN: f64 = 1e-9;
const PROBE_SEED: u64 = 0x5eed;
const PROBES: usize = 3;
const MAX_PROBE_ATTEMPTS: usize = 256;

#[derive(Debug, Error, Clone, PartialEq)]
pub enum SphereError {
    #[error("sphere dimension {0} unsupported (need n ≥ 2)")]
    Dimension(usize),
    #[error("vector {index} has length {found}, expected {expected}")]
    WrongLength { index: usize, expected: usize, found: usize },
    #[error("{expected} vertices need placements, got {found}")]
    PlacementCount { expected: usize, found: usize },
    #[error("zero vector at index {0}")]
    ZeroVector(usize),
    #[error("weighted sum has zero norm")]
    ZeroNorm,
    #[error("weights must be nonnegative and sum to 1")]
    BadWeights,
    #[error("ε = {0} outside (0, π/2]")]
    EpsOutOfRange(f64),
    #[error("facets {a} and {b} intersect but their directions are {distance} apart (ε = {eps})")]
    BoundViolated { a: usize, b: usize, distance: f64, eps: f64 },
    #[error("no nondegenerate probe point found")]
    DegenerateProbes,
    #[error("probe points disagree on the degree: {0:?}")]
    InconsistentProbes(Vec<i64>),
    #[error("fine ε = {fine} exceeds chart ε = {chart}")]
    EpsExceedsChart { fine: f64, chart: f64 },
    #[error("measured ε = {measured} exceeds the permutahedral bound {bound}")]
    TooCoarse { measured: f64, bound: f64 },
    #[error("target complex is not flag")]
    NotFlag,
    #[error("simplex {simplex:?} meets non-adjacent regions {regions:?}")]
    NotSimplicial { simplex: Vec<usize>, regions: Vec<Vec<u8>> },
    #[error("homotopy bound {0} is not below π")]
    HomotopyBound(f64),
    #[error("simplicial approximation has degree 0 (fine degree {fine_degree})")]
    NonzeroDegreeFailed { fine_degree: i64 },
    #[error("fine certificate failed: {0}")]
    NotFine(String),
    #[error(transparent)]
    Simplicial(#[from] SimplicialError),
    #[error(transparent)]
    Permutahedron(#[from] PermutahedronError),
    #[error(transparent)]
    SmallCover(#[from] SmallCoverError),
}

pub fn spherical_distance(u: &[f64], v: &[f64]) -> f64 {
    let d: f64 = u.iter().zip(v).map(|(a, b)| (a - b) * (a - b)).sum::<f64>().sqrt();
    2.0 * (d / 2.0).min(1.0).asin()
}

/// `Σβᵢξᵢ / |Σβᵢξᵢ|`.
pub fn spherical_barycentric(xi: &[Vec<f64>], beta: &[f64]) -> Result<Vec<f64>, SphereError> {
    if xi.len() != beta.len() || xi.is_empty() {
        return Err(SphereError::BadWeights);
    }
    if beta.iter().any(|&b| b < 0.0) || (beta.iter().sum::<f64>() - 1.0).abs() > 1e-12 {
        return Err(SphereError::BadWeights);
    }
    let dim = xi[0].len();
    let mut s = vec![0.0; dim];
    for (v, &b) in xi.iter().zip(beta) {
        for (o, x) in s.iter_mut().zip(v) {
            *o += b * x;
        }
    }
    if norm(&s) <= 1e-12 {
        return Err(SphereError::ZeroNorm);
    }
    Ok(normalize(&s))
}

/// `ε = 2·arccot(sinh ρ)`.
pub fn eps_from_sinh_rho(sinh_rho: f64) -> f64 {
    2.0 * (1.0 / sinh_rho).atan()
}

/// `K` with a vertex placement on `S^{n−1}` and a claimed `ε`.
#[derive(Clone, Debug)]
pub struct FineData {
    pub complex: OrientedPseudoManifold,
    /// Unit vectors.
    pub placement: Vec<Vec<f64>>,
    /// Unnormalized rational directions, when supplied.
    pub exact: Option<Vec<Vec<BigRational>>>,
    pub eps: f64,
}

impl FineData {
    pub fn new(complex: OrientedPseudoManifold, vectors: Vec<Vec<f64>>, eps: f64) -> Result<Self, SphereError> {
        let n = check_shape(&complex, vectors.iter().map(Vec::len), eps)?;
        let _ = n;
        let mut placement = Vec::with_capacity(vectors.len());
        for (i, v) in vectors.iter().enumerate() {
            let l = norm(v);
            if l == 0.0 || !l.is_finite() {
                return Err(SphereError::ZeroVector(i));
            }
            placement.push(normalize(v));
        }
        Ok(FineData { complex, placement, exact: None, eps })
    }

    pub fn exact(
        complex: OrientedPseudoManifold,
        vectors: Vec<Vec<BigRational>>,
        eps: f64,
    ) -> Result<Self, SphereError> {
        check_shape(&complex, vectors.iter().map(Vec::len), eps)?;
        let mut placement = Vec::with_capacity(vectors.len());
        for (i, v) in vectors.iter().enumerate() {
            if v.iter().all(Zero::is_zero) {
                return Err(SphereError::ZeroVector(i));
            }
            let f: Vec<f64> = v.iter().map(|x| x.to_f64().unwrap_or(f64::NAN)).collect();
            placement.push(normalize(&f));
        }
        Ok(FineData { complex, placement, exact: Some(vectors), eps })
    }

    /// Sphere dimension plus one: placements live in `Rⁿ`.
    pub fn n(&self) -> usize {
        self.complex.dim() + 1
    }

    /// Largest pairwise vertex distance over all simplices.
    pub fn measured_eps(&self) -> f64 {
        let mut best = 0.0f64;
        for s in self.complex.complex().top_simplices() {
            for (i, &a) in s.iter().enumerate() {
                for &b in &s[i + 1..] {
                    best = best.max(spherical_distance(&self.placement[a], &self.placement[b]));
                }
            }
        }
        best
    }
}

fn check_shape(
    complex: &OrientedPseudoManifold,
    lens: impl Iterator<Item = usize>,
    eps: f64,
) -> Result<usize, SphereError> {
    let n = complex.dim() + 1;
    if n < 2 {
        return Err(SphereError::Dimension(n));
    }
    let lens: Vec<usize> = lens.collect();
    if lens.len() != complex.complex().vertex_count() {
        return Err(SphereError::PlacementCount { expected: complex.complex().vertex_count(), found: lens.len() });
    }
    if let Some(i) = lens.iter().position(|&l| l != n) {
        return Err(SphereError::WrongLength { index: i, expected: n, found: lens[i] });
    }
    if !(eps > 0.0 && eps <= std::f64::consts::FRAC_PI_2) {
        return Err(SphereError::EpsOutOfRange(eps));
    }
    complex.oriented()?;
    Ok(n)
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct DiameterViolation {
    pub simplex: Vec<usize>,
    pub pair: (usize, usize),
    pub distance: f64,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct FineReport {
    pub eps: f64,
    pub max_distance: f64,
    pub violations: Vec<DiameterViolation>,
    pub degree: i64,
    pub exact: bool,
}

impl FineReport {
    pub fn passed(&self) -> bool {
        self.violations.is_empty() && self.degree != 0
    }
}

/// Diameter check of every simplex and the degree of the spherical map.
///
/// In float mode a pair counts as strictly closer than `ε` only below
/// `ε − FLOAT_MARGIN`. In exact mode the test is `u·v > cos ε·|u||v|` with
/// `cos ε` taken as the rational value of its `f64` evaluation.
pub fn fine_certificate(data: &FineData) -> Result<FineReport, SphereError> {
    fine_certificate_with_margin(data, FLOAT_MARGIN)
}

/// As [`fine_certificate`] with a caller-chosen float margin.
pub fn fine_certificate_with_margin(data: &FineData, margin: f64) -> Result<FineReport, SphereError> {
    let cos_eps = BigRational::from_float(data.eps.cos()).ok_or(SphereError::EpsOutOfRange(data.eps))?;
    let mut violations = Vec::new();
    let mut max_distance = 0.0f64;
    for s in data.complex.complex().top_simplices() {
        for (i, &a) in s.iter().enumerate() {
            for &b in &s[i + 1..] {
                let distance = spherical_distance(&data.placement[a], &data.placement[b]);
                max_distance = max_distance.max(distance);
                let close = match &data.exact {
                    Some(ex) => closer_than_exact(&ex[a], &ex[b], &cos_eps),
                    None => distance < data.eps - margin,
                };
                if !close {
                    violations.push(DiameterViolation { simplex: s.clone(), pair: (a, b), distance });
                }
            }
        }
    }
    let degree = spherical_degree(data)?;
    Ok(FineReport { eps: data.eps, max_distance, violations, degree, exact: data.exact.is_some() })
}

fn closer_than_exact(u: &[BigRational], v: &[BigRational], cos_eps: &BigRational) -> bool {
    let dot: BigRational = u.iter().zip(v).map(|(a, b)| a * b).sum();
    let uu: BigRational = u.iter().map(|a| a * a).sum();
    let vv: BigRational = v.iter().map(|a| a * a).sum();
    if cos_eps.is_negative() {
        return !dot.is_negative() || &dot * &dot < cos_eps * cos_eps * uu * vv;
    }
    dot.is_positive() && &dot * &dot > cos_eps * cos_eps * uu * vv
}

/// Signed count of simplices covering each of a few deterministic probe
/// points; the counts must agree.
pub fn spherical_degree(data: &FineData) -> Result<i64, SphereError> {
    let n = data.n();
    let orient = data.complex.oriented()?;
    let tops = data.complex.complex().top_simplices();
    let mut rng = ChaCha8Rng::seed_from_u64(PROBE_SEED);
    let mut found = Vec::new();
    for _ in 0..MAX_PROBE_ATTEMPTS {
        if found.len() == PROBES {
            break;
        }
        let p: Vec<i64> = (0..n).map(|_| rng.gen_range(-1_000_000..=1_000_000)).collect();
        if p.iter().all(|&x| x == 0) {
            continue;
        }
        let count = match &data.exact {
            Some(ex) => probe_exact(ex, tops, orient, &p),
            None => probe_float(&data.placement, tops, orient, &p),
        };
        if let Some(c) = count {
            found.push(c);
        }
    }
    if found.len() < PROBES {
        return Err(SphereError::DegenerateProbes);
    }
    if found.iter().any(|&c| c != found[0]) {
        return Err(SphereError::InconsistentProbes(found));
    }
    Ok(found[0])
}

fn probe_exact(ex: &[Vec<BigRational>], tops: &[Vec<usize>], orient: &[i8], p: &[i64]) -> Option<i64> {
    let n = p.len();
    let b: Vec<BigRational> = p.iter().map(|&x| BigRational::from_integer(x.into())).collect();
    let mut total = 0i64;
    for (s, &o) in tops.iter().zip(orient) {
        let cols: Vec<Vec<BigRational>> = (0..n).map(|r| s.iter().map(|&v| ex[v][r].clone()).collect()).collect();
        let beta = solve_rational(&cols, &b)?;
        if beta.iter().any(Zero::is_zero) {
            return None;
        }
        if beta.iter().all(Signed::is_positive) {
            let rows: Vec<Vec<BigRational>> = s.iter().map(|&v| ex[v].clone()).collect();
            total += (o * det_sign_rational(&rows)) as i64;
        }
    }
    Some(total)
}

fn probe_float(placement: &[Vec<f64>], tops: &[Vec<usize>], orient: &[i8], p: &[i64]) -> Option<i64> {
    let p: Vec<f64> = normalize(&p.iter().map(|&x| x as f64).collect::<Vec<_>>());
    let mut total = 0i64;
    for (s, &o) in tops.iter().zip(orient) {
        let rows: Vec<Vec<f64>> = s.iter().map(|&v| placement[v].clone()).collect();
        let (beta, det) = solve_transposed(&rows, &p)?;
        if det.abs() <= FLOAT_MARGIN || beta.iter().any(|b| b.abs() <= FLOAT_MARGIN) {
            if beta.iter().all(|&b| b > -FLOAT_MARGIN) {
                return None;
            }
            continue;
        }
        if beta.iter().all(|&b| b > 0.0) {
            total += (o as i64) * if det > 0.0 { 1 } else { -1 };
        }
    }
    Some(total)
}

/// Solves `Σ βᵢ rowsᵢ = p` by partial pivoting; returns `β` and `det(rows)`.
fn solve_transposed(rows: &[Vec<f64>], p: &[f64]) -> Option<(Vec<f64>, f64)> {
    let n = p.len();
    let mut a: Vec<Vec<f64>> = (0..n).map(|r| (0..n).map(|c| rows[c][r]).chain([p[r]]).collect()).collect();
    let mut det = 1.0;
    for col in 0..n {
        let piv = (col..n).max_by(|&x, &y| a[x][col].abs().total_cmp(&a[y][col].abs()))?;
        if a[piv][col] == 0.0 {
            return Some((vec![0.0; n], 0.0));
        }
        if piv != col {
            a.swap(piv, col);
            det = -det;
        }
        det *= a[col][col];
        for r in col + 1..n {
            let f = a[r][col] / a[col][col];
            for c in col..=n {
                a[r][c] -= f * a[col][c];
            }
        }
    }
    let mut x = vec![0.0; n];
    for r in (0..n).rev() {
        let s: f64 = (r + 1..n).map(|c| a[r][c] * x[c]).sum();
        x[r] = (a[r][n] - s) / a[r][r];
    }
    Some((x, det))
}

fn det_f64(rows: &[Vec<f64>]) -> f64 {
    let zero = vec![0.0; rows.len()];
    solve_transposed(rows, &zero).map_or(0.0, |(_, d)| d)
}

/// Fine data on `K_P` from one direction per facet and the inradius bound
/// `sinh ρ`: `ε = 2·arccot(sinh ρ)`, and every pair of intersecting facets
/// must have directions closer than `ε`.
pub fn inradius_fine(k_p: OrientedPseudoManifold, xi: Vec<Vec<f64>>, sinh_rho: f64) -> Result<FineData, SphereError> {
    let eps = eps_from_sinh_rho(sinh_rho);
    let data = FineData::new(k_p, xi, eps)?;
    for (a, b) in data.complex.complex().edges() {
        let distance = spherical_distance(&data.placement[a], &data.placement[b]);
        if distance >= eps {
            return Err(SphereError::BoundViolated { a, b, distance, eps });
        }
    }
    Ok(data)
}

/// Which containing region a vertex goes to when several qualify.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub enum TieBreak {
    Least,
    Greatest,
}

/// `K_{Πⁿ}` oriented by the signs of `det` of its vertices' facet
/// directions in chart coordinates.
pub fn oriented_dual(chart: &RadialChart) -> Result<OrientedPseudoManifold, SphereError> {
    let dual = dual_complex(chart.n)?;
    let dirs: Vec<Vec<f64>> = OmegaSet::all(chart.n).into_iter().map(|w| chart.facet_direction(w)).collect();
    let signs = dual
        .complex
        .top_simplices()
        .iter()
        .map(|s| {
            let rows: Vec<Vec<f64>> = s.iter().map(|&v| dirs[v].clone()).collect();
            if det_f64(&rows) > 0.0 {
                1
            } else {
                -1
            }
        })
        .collect();
    Ok(OrientedPseudoManifold::with_orientation(dual.complex, signs, false)?)
}

#[derive(Clone, Debug)]
pub struct PhiReport {
    pub map: SimplicialMap,
    pub target: OrientedPseudoManifold,
    pub regions: Vec<OmegaSet>,
    pub degree: i64,
    pub fine_degree: i64,
    /// `ε + max region diameter`, required below `π`.
    pub homotopy_bound: f64,
}

pub fn construct_phi(fine: &FineData, chart: &RadialChart) -> Result<PhiReport, SphereError> {
    construct_phi_with(fine, chart, TieBreak::Least)
}

/// Simplicial approximation `φ: K → K_{Πⁿ}`: each vertex goes to a region
/// `h(F_ω)` containing its placement.
pub fn construct_phi_with(fine: &FineData, chart: &RadialChart, tie: TieBreak) -> Result<PhiReport, SphereError> {
    if fine.n() != chart.n {
        return Err(SphereError::Dimension(fine.n()));
    }
    if fine.eps > chart.eps + 1e-12 {
        return Err(SphereError::EpsExceedsChart { fine: fine.eps, chart: chart.eps });
    }
    let target = oriented_dual(chart)?;
    if !flag_square_predicates(target.complex()).is_flag {
        return Err(SphereError::NotFlag);
    }
    let fine_report = fine_certificate(fine)?;
    if !fine_report.passed() {
        return Err(SphereError::NotFine(format!(
            "{} diameter violations, degree {}",
            fine_report.violations.len(),
            fine_report.degree
        )));
    }
    let homotopy_bound = fine.eps + chart.region_diameter_bound();
    if homotopy_bound >= std::f64::consts::PI - FLOAT_MARGIN {
        return Err(SphereError::HomotopyBound(homotopy_bound));
    }
    let mut regions = Vec::with_capacity(fine.placement.len());
    for u in &fine.placement {
        let members = chart.regions_containing(u, 1e-12)?;
        let pick = match tie {
            TieBreak::Least => members.first(),
            TieBreak::Greatest => members.last(),
        };
        regions.push(*pick.ok_or(SphereError::ZeroNorm)?);
    }
    for s in fine.complex.complex().top_simplices() {
        let rs: Vec<OmegaSet> = s.iter().map(|&v| regions[v]).collect();
        let adjacent = rs.iter().enumerate().all(|(i, a)| rs[i + 1..].iter().all(|b| a.comparable(*b)));
        if !adjacent {
            return Err(SphereError::NotSimplicial {
                simplex: s.clone(),
                regions: rs.iter().map(|w| w.colors()).collect(),
            });
        }
    }
    let vm: Vec<usize> = regions.iter().map(|w| w.index()).collect();
    let map = SimplicialMap::new(fine.complex.complex().clone(), target.complex().clone(), vm)?;
    let degree = map_degree(&map, &fine.complex, &target)?;
    if degree == 0 {
        return Err(SphereError::NonzeroDegreeFailed { fine_degree: fine_report.degree });
    }
    Ok(PhiReport { map, target, regions, degree, fine_degree: fine_report.degree, homotopy_bound })
}

#[derive(Clone, Debug)]
pub struct DominationPipeline {
    pub phi: PhiReport,
    /// `φ` followed by `K_{Πⁿ} ≅ (∂Δⁿ)′`.
    pub to_subdivided_simplex: SimplicialMap,
    pub domination: DominationReport,
}

/// `R_P → R_{Πⁿ}` from fine data on `K_P`, with `ε ≤ ε_n`.
pub fn dominate_via_permutahedron(fine: &FineData) -> Result<DominationPipeline, SphereError> {
    let chart = RadialChart::new(fine.n())?;
    if fine.eps > chart.eps + 1e-12 {
        return Err(SphereError::TooCoarse { measured: fine.measured_eps(), bound: chart.eps });
    }
    let phi = construct_phi(fine, &chart)?;
    let dual = dual_complex(chart.n)?;
    let sub = &dual.subdivision.complex;
    let o_dual = phi.target.oriented()?;
    let mut signs = vec![0i8; sub.len()];
    for (s, &o) in phi.target.complex().top_simplices().iter().zip(o_dual) {
        let mut image: Vec<usize> = s.iter().map(|&v| dual.iso[v]).collect();
        let parity = crate::perm::sequence_sign(&image);
        image.sort_unstable();
        let t = sub.index_of(&image).ok_or(SphereError::NotFlag)?;
        signs[t] = o * parity;
    }
    let sub_pm = OrientedPseudoManifold::with_orientation(sub.clone(), signs, false)?;
    let vm: Vec<usize> = phi.map.vertex_map().iter().map(|&v| dual.iso[v]).collect();
    let composed = SimplicialMap::new(fine.complex.complex().clone(), sub.clone(), vm)?;
    let domination = induced_domination(&composed, &fine.complex, &sub_pm)?;
    Ok(DominationPipeline { phi, to_subdivided_simplex: composed, domination })
}
