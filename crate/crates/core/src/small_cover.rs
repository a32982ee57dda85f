//! Finite quotients of a simple cell `P` with dual complex `K`: the real
//! moment-angle complex `R_P = (P × Z₂^m)/∼` and small covers
//! `M_{P,λ} = (P × Z₂ⁿ)/∼_λ`, characteristic-function validation, Euler and
//! local-standardness diagnostics, flag / empty-square predicates, facet
//! colorings, and the domination map `R_{P₁} → R_{P₂}` induced by a
//! simplicial map `K₁ → K₂`.
//!
//! Faces of `P` are simplices of `K` (the empty simplex is the body of `P`);
//! a face with `k` vertices has dimension `n − k`.

use std::collections::{BTreeSet, HashMap};

use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::gf2::{odd_functional, Subspace};
use crate::perm::{permutations, sequence_sign};
use crate::simplicial::{
    map_degree, validate_pseudo_manifold, AbstractComplex, OrientedPseudoManifold, PmReport, SimplicialError,
    SimplicialMap,
};

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum SmallCoverError {
    #[error("characteristic values at simplex {0:?} do not span the group")]
    RankDeficient(Vec<usize>),
    #[error("assignment has {found} entries for {expected} facets")]
    AssignmentLength { expected: usize, found: usize },
    #[error("group rank {0} unsupported (must be 1..=24)")]
    Rank(usize),
    #[error("characteristic value for facet {0} is zero")]
    ZeroValue(usize),
    #[error("input map has degree zero")]
    ZeroDegreeInput,
    #[error("input is not a valid pseudo-manifold: {0}")]
    InvalidInput(PmReport),
    #[error("cell degree differs between target cells ({0} vs {1})")]
    InconsistentFibers(i64, i64),
    #[error(transparent)]
    Simplicial(#[from] SimplicialError),
}

/// A simple cell through its dual complex `K` (of dimension `n − 1`).
#[derive(Clone, Debug)]
pub struct SimpleCell {
    pub complex: AbstractComplex,
    pub n: usize,
    /// Validation result; `None` when `K` is not a closed pseudo-manifold.
    pub pm: Option<OrientedPseudoManifold>,
    pub report: PmReport,
}

impl SimpleCell {
    pub fn new(complex: AbstractComplex) -> Self {
        let n = complex.dim() + 1;
        let (pm, report) = match validate_pseudo_manifold(complex.clone(), true) {
            Ok(pm) => (Some(pm), PmReport::default()),
            Err(r) if r.has_non_orientable() => match validate_pseudo_manifold(complex.clone(), false) {
                Ok(pm) => (Some(pm), r),
                Err(r2) => (None, r2),
            },
            Err(r) => (None, r),
        };
        SimpleCell { complex, n, pm, report }
    }

    pub fn m(&self) -> usize {
        self.complex.vertex_count()
    }

    fn orientation(&self) -> Option<&[i8]> {
        self.pm.as_ref().and_then(|pm| pm.orientation())
    }
}

/// `λ: [m] → Z₂ⁿ \ {0}` stored as bit masks (bit `j` = coordinate `j+1`).
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct CharacteristicFunction {
    pub rank: usize,
    pub values: Vec<u64>,
}

impl CharacteristicFunction {
    /// From 0/1 rows, one per facet.
    pub fn from_rows(rank: usize, rows: &[Vec<u8>]) -> Self {
        let values =
            rows.iter().map(|r| r.iter().enumerate().fold(0u64, |m, (i, &b)| m | ((b as u64 & 1) << i))).collect();
        CharacteristicFunction { rank, values }
    }

    /// `λ(i) = b_{color(i)}` from a facet coloring in colors `1..=rank`.
    pub fn from_coloring(rank: usize, colors: &[u8]) -> Self {
        CharacteristicFunction { rank, values: colors.iter().map(|&c| 1u64 << (c - 1)).collect() }
    }

    pub fn rows(&self) -> Vec<Vec<u8>> {
        self.values.iter().map(|&v| (0..self.rank).map(|j| (v >> j & 1) as u8).collect()).collect()
    }
}

/// The values at each top simplex must span `Z₂ⁿ`.
pub fn validate_characteristic(cell: &SimpleCell, lambda: &CharacteristicFunction) -> Result<(), SmallCoverError> {
    if lambda.values.len() != cell.m() {
        return Err(SmallCoverError::AssignmentLength { expected: cell.m(), found: lambda.values.len() });
    }
    if let Some(i) = lambda.values.iter().position(|&v| v == 0) {
        return Err(SmallCoverError::ZeroValue(i));
    }
    for s in cell.complex.top_simplices() {
        if Subspace::spanned_by(s.iter().map(|&v| lambda.values[v])).rank() != lambda.rank {
            return Err(SmallCoverError::RankDeficient(s.clone()));
        }
    }
    Ok(())
}

/// One cell `[F_σ, g]`: a face of `P` and a canonical coset representative.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
pub struct Cell {
    pub face: usize,
    pub coset: u64,
}

/// The cell complex `(P × Z₂^r)/∼` for a generator assignment `a_i ∈ Z₂^r`.
#[derive(Clone, Debug)]
pub struct QuotientComplex {
    pub n: usize,
    pub rank: usize,
    pub assignment: Vec<u64>,
    /// Faces of `K` sorted by size; `faces[0]` is the empty face (the body).
    pub faces: Vec<Vec<usize>>,
    pub subgroups: Vec<Subspace>,
    pub cells: Vec<Cell>,
    complex: AbstractComplex,
    k_orientation: Option<Vec<i8>>,
    /// `ℓ` with `ℓ(a_i) = 1` for all `i`; top cell `g` has sign `(−1)^{ℓ(g)}`.
    pub functional: Option<u64>,
}

/// `R_P`: one standard generator per facet.
pub fn real_moment_angle(cell: &SimpleCell) -> Result<QuotientComplex, SmallCoverError> {
    let m = cell.m();
    build_quotient(cell, (0..m).map(|i| 1u64 << i).collect(), m)
}

/// `M_{P,λ}` after checking the characteristic condition.
pub fn small_cover(cell: &SimpleCell, lambda: &CharacteristicFunction) -> Result<QuotientComplex, SmallCoverError> {
    validate_characteristic(cell, lambda)?;
    build_quotient(cell, lambda.values.clone(), lambda.rank)
}

pub fn build_quotient(
    cell: &SimpleCell,
    assignment: Vec<u64>,
    rank: usize,
) -> Result<QuotientComplex, SmallCoverError> {
    if rank == 0 || rank > 24 {
        return Err(SmallCoverError::Rank(rank));
    }
    if assignment.len() != cell.m() {
        return Err(SmallCoverError::AssignmentLength { expected: cell.m(), found: assignment.len() });
    }
    let mut faces = vec![Vec::new()];
    faces.extend(cell.complex.all_faces());
    let subgroups: Vec<Subspace> =
        faces.iter().map(|f| Subspace::spanned_by(f.iter().map(|&v| assignment[v]))).collect();
    let mut cells = Vec::new();
    for (face, sub) in subgroups.iter().enumerate() {
        for coset in sub.coset_representatives(rank) {
            cells.push(Cell { face, coset });
        }
    }
    let functional = odd_functional(&assignment, rank);
    Ok(QuotientComplex {
        n: cell.n,
        rank,
        assignment,
        faces,
        subgroups,
        cells,
        complex: cell.complex.clone(),
        k_orientation: cell.orientation().map(|o| o.to_vec()),
        functional,
    })
}

/// Summary used by reports and the CLI.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct QuotientSummary {
    pub cells: usize,
    /// Cell counts by dimension `0..=n`.
    pub f_vector: Vec<usize>,
    pub euler: i64,
    pub local_ok: bool,
    pub orientable: bool,
    pub local_violations: Vec<LocalViolation>,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct LocalViolation {
    pub vertex: Vec<usize>,
    pub coset: u64,
    pub top_cells: usize,
}

impl QuotientComplex {
    pub fn face_dim(&self, face: usize) -> usize {
        self.n - self.faces[face].len()
    }

    pub fn f_vector(&self) -> Vec<usize> {
        let mut f = vec![0; self.n + 1];
        for c in &self.cells {
            f[self.face_dim(c.face)] += 1;
        }
        f
    }

    pub fn euler_characteristic(&self) -> i64 {
        self.f_vector().iter().enumerate().map(|(d, &c)| if d % 2 == 0 { c as i64 } else { -(c as i64) }).sum()
    }

    pub fn top_cells(&self) -> Vec<u64> {
        self.cells.iter().filter(|c| c.face == 0).map(|c| c.coset).collect()
    }

    /// Orientable when `K` is oriented and some functional is odd on every
    /// generator (a reflection across any facet then reverses orientation).
    pub fn orientable(&self) -> bool {
        self.k_orientation.is_some() && self.functional.is_some()
    }

    /// Every vertex cell `[F_σ, g]` (σ a top simplex of `K`) must lie in
    /// exactly `2ⁿ` top cells.
    pub fn local_check(&self) -> Vec<LocalViolation> {
        let tops = self.top_cells();
        let want = 1usize << self.n;
        let mut out = Vec::new();
        for (face, sub) in self.subgroups.iter().enumerate() {
            if self.faces[face].len() != self.n {
                continue;
            }
            let mut counts: HashMap<u64, usize> = HashMap::new();
            for &g in &tops {
                *counts.entry(sub.reduce(g)).or_default() += 1;
            }
            for coset in sub.coset_representatives(self.rank) {
                let c = counts.get(&coset).copied().unwrap_or(0);
                if c != want {
                    out.push(LocalViolation { vertex: self.faces[face].clone(), coset, top_cells: c });
                }
            }
        }
        out
    }

    pub fn summary(&self) -> QuotientSummary {
        let local_violations = self.local_check();
        QuotientSummary {
            cells: self.cells.len(),
            f_vector: self.f_vector(),
            euler: self.euler_characteristic(),
            local_ok: local_violations.is_empty(),
            orientable: self.orientable(),
            local_violations,
        }
    }

    /// Barycentric subdivision of the cell complex: vertices are cells, top
    /// simplices are flags `body ⊃ … ⊃ vertex` inside each top cell. Oriented
    /// by `(−1)^{ℓ(g)}` times the induced orientation of the cone over `K′`
    /// when [`QuotientComplex::orientable`]; the orientation is re-validated.
    pub fn simplicial_model(&self) -> Result<QuotientModel, SmallCoverError> {
        let index: HashMap<Cell, usize> = self.cells.iter().enumerate().map(|(i, &c)| (c, i)).collect();
        let face_index: HashMap<&[usize], usize> =
            self.faces.iter().enumerate().map(|(i, f)| (f.as_slice(), i)).collect();
        let mut tops = Vec::new();
        let mut signs = Vec::new();
        for g in self.top_cells() {
            let cell_sign = self.functional.map_or(1, |l| if (l & g).count_ones() % 2 == 0 { 1 } else { -1 });
            for (t, sigma) in self.complex.top_simplices().iter().enumerate() {
                let k_sign = self.k_orientation.as_ref().map_or(1, |o| o[t]);
                for order in permutations(sigma) {
                    let mut flag = vec![index[&Cell { face: 0, coset: g }]];
                    let mut face = Vec::new();
                    for &v in &order {
                        face.push(v);
                        let mut sorted = face.clone();
                        sorted.sort_unstable();
                        let f = face_index[sorted.as_slice()];
                        flag.push(index[&Cell { face: f, coset: self.subgroups[f].reduce(g) }]);
                    }
                    signs.push(cell_sign * k_sign * sequence_sign(&order));
                    tops.push(flag);
                }
            }
        }
        let (complex, origin) = AbstractComplex::with_signs(self.cells.len(), tops)?;
        let pm = if self.orientable() {
            let orientation = origin.iter().map(|&(i, s)| signs[i] * s).collect();
            OrientedPseudoManifold::with_orientation(complex, orientation, false)?
        } else {
            validate_pseudo_manifold(complex, false).map_err(SmallCoverError::InvalidInput)?
        };
        Ok(QuotientModel { pm })
    }
}

#[derive(Clone, Debug)]
pub struct QuotientModel {
    pub pm: OrientedPseudoManifold,
}

/// Flagness and empty 4-circuit search on the 1-skeleton of `K`.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct FlagSquareReport {
    pub is_flag: bool,
    /// A clique that does not span a simplex.
    pub non_face_clique: Option<Vec<usize>>,
    pub has_empty_4_circuit: bool,
    /// Chordless 4-cycles `u₁u₂u₃u₄`.
    pub empty_4_circuits: Vec<[usize; 4]>,
}

pub fn flag_square_predicates(k: &AbstractComplex) -> FlagSquareReport {
    let m = k.vertex_count();
    let mut adj = vec![vec![false; m]; m];
    for (a, b) in k.edges() {
        adj[a][b] = true;
        adj[b][a] = true;
    }
    let faces: BTreeSet<Vec<usize>> = k.all_faces().into_iter().collect();
    let mut non_face_clique = None;
    'outer: for f in faces.iter().filter(|f| f.len() >= 2) {
        let last = *f.last().expect("nonempty");
        for v in last + 1..m {
            if f.iter().all(|&u| adj[u][v]) {
                let mut c = f.clone();
                c.push(v);
                if !faces.contains(&c) {
                    non_face_clique = Some(c);
                    break 'outer;
                }
            }
        }
    }
    let mut circuits = BTreeSet::new();
    for a in 0..m {
        for c in a + 1..m {
            if adj[a][c] {
                continue;
            }
            let common: Vec<usize> = (0..m).filter(|&v| adj[a][v] && adj[c][v]).collect();
            for (i, &b) in common.iter().enumerate() {
                for &d in &common[i + 1..] {
                    if !adj[b][d] {
                        circuits.insert(canonical_square([a, b, c, d]));
                    }
                }
            }
        }
    }
    let empty_4_circuits: Vec<[usize; 4]> = circuits.into_iter().collect();
    FlagSquareReport {
        is_flag: non_face_clique.is_none(),
        non_face_clique,
        has_empty_4_circuit: !empty_4_circuits.is_empty(),
        empty_4_circuits,
    }
}

/// Rotation / reflection of a 4-cycle starting at its least vertex, with the
/// smaller neighbour second.
fn canonical_square(c: [usize; 4]) -> [usize; 4] {
    let start = (0..4).min_by_key(|&i| c[i]).expect("four entries");
    let fwd = [c[start], c[(start + 1) % 4], c[(start + 2) % 4], c[(start + 3) % 4]];
    let bwd = [c[start], c[(start + 3) % 4], c[(start + 2) % 4], c[(start + 1) % 4]];
    fwd.min(bwd)
}

/// Lexicographically first regular coloring of the vertices of `K` (facets
/// of `P`) in `colors` colors, adjacency meaning the facets intersect.
pub fn facet_coloring_search(k: &AbstractComplex, colors: usize) -> Option<Vec<u8>> {
    let m = k.vertex_count();
    let mut nbrs = vec![Vec::new(); m];
    for (a, b) in k.edges() {
        nbrs[b].push(a);
        nbrs[a].push(b);
    }
    let mut assign = vec![0u8; m];
    fn go(v: usize, colors: usize, nbrs: &[Vec<usize>], assign: &mut Vec<u8>) -> bool {
        if v == assign.len() {
            return true;
        }
        for c in 1..=colors as u8 {
            if nbrs[v].iter().all(|&u| u > v || assign[u] != c) {
                assign[v] = c;
                if go(v + 1, colors, nbrs, assign) {
                    return true;
                }
            }
        }
        assign[v] = 0;
        false
    }
    go(0, colors, &nbrs, &mut assign).then_some(assign)
}

/// The map `R_{P₁} → R_{P₂}`, `[p, g] ↦ [φ̄(p), μ(g)]` with `μ(a_i) = b_{φ(i)}`.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct DominationReport {
    pub m1: usize,
    pub m2: usize,
    pub map_degree: i64,
    /// Signed count of top cells over each target top cell (all equal).
    pub cell_fiber_degree: i64,
    /// Degree of the induced map between the simplicial models.
    pub degree: i64,
    /// `2^{m₁−m₂} · deg φ`.
    pub predicted: i64,
}

pub fn mu(phi: &[usize], g: u64) -> u64 {
    (0..phi.len()).filter(|&i| g >> i & 1 == 1).fold(0, |acc, i| acc ^ 1 << phi[i])
}

/// Builds the induced domination map and computes its degree twice: by
/// signed fiber counts over top cells, and as a simplicial map between the
/// subdivided quotients (checked constant over every target simplex).
pub fn induced_domination(
    phi: &SimplicialMap,
    k1: &OrientedPseudoManifold,
    k2: &OrientedPseudoManifold,
) -> Result<DominationReport, SmallCoverError> {
    let deg = map_degree(phi, k1, k2)?;
    if deg == 0 {
        return Err(SmallCoverError::ZeroDegreeInput);
    }
    let cell1 = SimpleCell {
        complex: k1.complex().clone(),
        n: k1.dim() + 1,
        pm: Some(k1.clone()),
        report: PmReport::default(),
    };
    let cell2 = SimpleCell {
        complex: k2.complex().clone(),
        n: k2.dim() + 1,
        pm: Some(k2.clone()),
        report: PmReport::default(),
    };
    let r1 = real_moment_angle(&cell1)?;
    let r2 = real_moment_angle(&cell2)?;
    let vm = phi.vertex_map();

    // Cell-level: each top cell maps onto μ(g) with local degree deg φ and
    // orientation signs (−1)^{|g|}, (−1)^{|μ(g)|}.
    let mut fibers: HashMap<u64, i64> = HashMap::new();
    for g in r1.top_cells() {
        let h = mu(vm, g);
        let s = if (g.count_ones() + h.count_ones()).is_multiple_of(2) { 1 } else { -1 };
        *fibers.entry(h).or_default() += s * deg;
    }
    let targets = r2.top_cells();
    let first = fibers.get(&targets[0]).copied().unwrap_or(0);
    for h in &targets {
        let c = fibers.get(h).copied().unwrap_or(0);
        if c != first {
            return Err(SmallCoverError::InconsistentFibers(first, c));
        }
    }

    let m1 = r1.simplicial_model()?;
    let m2 = r2.simplicial_model()?;
    let index2: HashMap<Cell, usize> = r2.cells.iter().enumerate().map(|(i, &c)| (c, i)).collect();
    let face2: HashMap<&[usize], usize> = r2.faces.iter().enumerate().map(|(i, f)| (f.as_slice(), i)).collect();
    let vertex_map: Vec<usize> = r1
        .cells
        .iter()
        .map(|c| {
            let image: BTreeSet<usize> = r1.faces[c.face].iter().map(|&v| vm[v]).collect();
            let image: Vec<usize> = image.into_iter().collect();
            let f = face2[image.as_slice()];
            index2[&Cell { face: f, coset: r2.subgroups[f].reduce(mu(vm, c.coset)) }]
        })
        .collect();
    let map = SimplicialMap::new(m1.pm.complex().clone(), m2.pm.complex().clone(), vertex_map)?;
    let degree = map_degree(&map, &m1.pm, &m2.pm)?;
    let (a, b) = (k1.complex().vertex_count(), k2.complex().vertex_count());
    let predicted = if a >= b { deg << (a - b) } else { 0 };
    Ok(DominationReport { m1: a, m2: b, map_degree: deg, cell_fiber_degree: first, degree, predicted })
}
