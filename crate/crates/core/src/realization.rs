//! Realization of a colored oriented pseudo-manifold `Z` by a finite cover of
//! the permutahedral manifold.
//!
//! The cover is explored as a finite-state machine. A state `(c, a, r)`
//! stands for the cell indexed by `g ∈ W`: `c(γ) = Λ(ψ_g⁻¹(x_γ))`,
//! `a = Λ(θ(g))` and `r = ρ(g) ∈ Z₂ⁿ`, where `Λ(x_ω) = λ_ω` is the pairing
//! action on the top simplices `A`. Left multiplication by `s_ω` acts by
//!
//! ```text
//! a′ = c(ω) ∘ a,   c′(γ) = c(ω) c(γ) c(ω)  (γ ⊊ ω),   r′ = r + e_{|ω|}
//! ```
//!
//! Reachable states are the cells of the cover `U/Γ*`, `Γ*` the stabilizer of
//! the initial state; cell `s` maps onto the simplex `a_s(σ₀)`.

use indexmap::IndexSet;
use rand::seq::SliceRandom;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use rayon::prelude::*;
use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::coxeter::{Poset, QuotientAction};
use crate::perm::{identity, is_involution, Perm};
use crate::permutahedron::{omega_poset, OmegaSet};
use crate::simplicial::{
    chess_coloring, subdivide_oriented, type_face, ChessColoring, OrientedPseudoManifold, SimplicialError,
    VertexColoring,
};

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum RealizationError {
    #[error("|A+(τ)| = {white} but |A-(τ)| = {black} at the face {face:?}")]
    UnbalancedStar { face: Vec<usize>, white: usize, black: usize },
    #[error("pairing for {omega:?} violates condition {condition} at top simplex {simplex}")]
    IllegalPairing { omega: Vec<u8>, simplex: usize, condition: u8 },
    #[error("pairing family covers {found} of {expected} subsets")]
    PairingCount { expected: usize, found: usize },
    #[error("no regular coloring supplied and subdivision not requested")]
    MissingColoring,
    #[error("dimension {0} unsupported (must be 1..=7)")]
    Dimension(usize),
    #[error("{0} top simplices exceed the state encoding")]
    TooManySimplices(usize),
    #[error("no white top simplex")]
    NoWhiteSimplex,
    #[error("atlas is incomplete; full certificate needs complete enumeration")]
    Incomplete,
    #[error(transparent)]
    Simplicial(#[from] SimplicialError),
}

/// `Z` together with its regular coloring, chess coloring and base simplex.
#[derive(Clone, Debug)]
pub struct ColoredCycleInput {
    pub z: OrientedPseudoManifold,
    pub coloring: VertexColoring,
    pub chess: ChessColoring,
    /// `σ₀`: the first white top simplex.
    pub base: usize,
    /// Whether `Z` was replaced by its barycentric subdivision.
    pub subdivided: bool,
}

impl ColoredCycleInput {
    pub fn new(z: OrientedPseudoManifold, coloring: VertexColoring) -> Result<Self, RealizationError> {
        let n = z.dim();
        if n == 0 || n > 7 {
            return Err(RealizationError::Dimension(n));
        }
        if z.complex().len() > u16::MAX as usize {
            return Err(RealizationError::TooManySimplices(z.complex().len()));
        }
        let chess = chess_coloring(&z, &coloring)?;
        let base = chess.white.iter().position(|&w| w).ok_or(RealizationError::NoWhiteSimplex)?;
        Ok(ColoredCycleInput { z, coloring, chess, base, subdivided: false })
    }

    /// Uses `coloring` when given and regular in `n + 1` colors; otherwise
    /// subdivides when `auto_subdivide` is set.
    pub fn prepare(
        z: OrientedPseudoManifold,
        coloring: Option<VertexColoring>,
        auto_subdivide: bool,
    ) -> Result<Self, RealizationError> {
        if let Some(col) = coloring {
            if col.num_colors() == z.dim() + 1 && col.is_regular(z.complex()) {
                return Self::new(z, col);
            }
            if !auto_subdivide {
                col.check_regular(z.complex())?;
                return Err(RealizationError::MissingColoring);
            }
        } else if !auto_subdivide {
            return Err(RealizationError::MissingColoring);
        }
        let (zs, sub) = subdivide_oriented(&z)?;
        let mut input = Self::new(zs, sub.coloring)?;
        input.subdivided = true;
        Ok(input)
    }

    pub fn n(&self) -> usize {
        self.z.dim()
    }

    pub fn simplex_count(&self) -> usize {
        self.z.complex().len()
    }

    pub fn simplex(&self, i: usize) -> &[usize] {
        &self.z.complex().top_simplices()[i]
    }

    pub fn type_face(&self, i: usize, w: OmegaSet) -> Vec<usize> {
        type_face(self.simplex(i), w, &self.coloring)
    }
}

/// How to pair `A₊(τ)` with `A₋(τ)`.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub enum PairingPolicy {
    /// Both sides in canonical simplex order, matched positionally.
    Canonical,
    /// Uniformly random matching from a seed.
    Seeded(u64),
}

/// One involution `λ_ω` of `A` per `ω`, indexed by `OmegaSet::index`.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct PairingFamily {
    pub lambda: Vec<Perm>,
}

pub fn build_pairings(input: &ColoredCycleInput, policy: PairingPolicy) -> Result<PairingFamily, RealizationError> {
    let n = input.n();
    let count = input.simplex_count();
    let mut rng = match policy {
        PairingPolicy::Seeded(s) => Some(ChaCha8Rng::seed_from_u64(s)),
        PairingPolicy::Canonical => None,
    };
    let mut lambda = Vec::new();
    for w in OmegaSet::all(n) {
        let mut groups: std::collections::BTreeMap<Vec<usize>, (Vec<usize>, Vec<usize>)> = Default::default();
        for i in 0..count {
            let entry = groups.entry(input.type_face(i, w)).or_default();
            if input.chess.white[i] {
                entry.0.push(i);
            } else {
                entry.1.push(i);
            }
        }
        let mut perm = identity(count);
        for (face, (white, mut black)) in groups {
            if white.len() != black.len() {
                return Err(RealizationError::UnbalancedStar { face, white: white.len(), black: black.len() });
            }
            if let Some(r) = rng.as_mut() {
                black.shuffle(r);
            }
            for (&p, &q) in white.iter().zip(&black) {
                perm[p] = q as u32;
                perm[q] = p as u32;
            }
        }
        lambda.push(perm);
    }
    let fam = PairingFamily { lambda };
    validate_pairings(input, &fam)?;
    Ok(fam)
}

/// The three pairing conditions: colors swap, involution, shared type face.
pub fn validate_pairings(input: &ColoredCycleInput, fam: &PairingFamily) -> Result<(), RealizationError> {
    let all = OmegaSet::all(input.n());
    if fam.lambda.len() != all.len() {
        return Err(RealizationError::PairingCount { expected: all.len(), found: fam.lambda.len() });
    }
    let count = input.simplex_count();
    for &w in &all {
        let l = &fam.lambda[w.index()];
        let bad =
            |simplex: usize, condition: u8| RealizationError::IllegalPairing { omega: w.colors(), simplex, condition };
        if l.len() != count || l.iter().any(|&j| j as usize >= count) {
            return Err(bad(0, 2));
        }
        for i in 0..count {
            let j = l[i] as usize;
            if input.chess.white[i] == input.chess.white[j] {
                return Err(bad(i, 1));
            }
        }
        if !is_involution(l) {
            let i = (0..count).find(|&i| l[l[i] as usize] as usize != i).unwrap_or(0);
            return Err(bad(i, 2));
        }
        for i in 0..count {
            if input.type_face(i, w) != input.type_face(l[i] as usize, w) {
                return Err(bad(i, 3));
            }
        }
    }
    Ok(())
}

/// The pairing action as a permutation representation of `F` over the facet
/// poset, based at `σ₀`.
pub fn pairing_action(input: &ColoredCycleInput, fam: &PairingFamily) -> (Poset, QuotientAction) {
    let poset = omega_poset(input.n());
    let action = QuotientAction { points: input.simplex_count(), lambda: fam.lambda.clone(), base: input.base };
    (poset, action)
}

/// Decoded machine state.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct RealizationState {
    pub c: Vec<Perm>,
    pub a: Perm,
    pub r: u64,
}

/// Packed byte layout of states. Only `c(γ)` with `|γ| < n` varies (a
/// conjugation `c(γ) ↦ c(ω)c(γ)c(ω)` needs `γ ⊊ ω`), so the remaining
/// entries stay equal to `λ_γ` and are not stored.
#[derive(Clone, Debug)]
pub struct Machine {
    n: usize,
    len: usize,
    width: usize,
    omegas: Vec<OmegaSet>,
    slot: Vec<Option<usize>>,
    slots: usize,
    lambda: Vec<Perm>,
    strict_subsets: Vec<Vec<usize>>,
    r_bytes: usize,
}

impl Machine {
    pub fn new(input: &ColoredCycleInput, fam: &PairingFamily) -> Self {
        let n = input.n();
        let len = input.simplex_count();
        let omegas = OmegaSet::all(n);
        let mut slots = 0;
        let slot = omegas
            .iter()
            .map(|w| {
                (w.size() < n).then(|| {
                    slots += 1;
                    slots - 1
                })
            })
            .collect();
        let strict_subsets = omegas
            .iter()
            .map(|w| omegas.iter().filter(|g| g.is_strict_subset(*w)).map(|g| g.index()).collect())
            .collect();
        Machine {
            n,
            len,
            width: if len <= 256 { 1 } else { 2 },
            omegas,
            slot,
            slots,
            lambda: fam.lambda.clone(),
            strict_subsets,
            r_bytes: n.div_ceil(8),
        }
    }

    pub fn n(&self) -> usize {
        self.n
    }

    pub fn omega_count(&self) -> usize {
        self.omegas.len()
    }

    pub fn omegas(&self) -> &[OmegaSet] {
        &self.omegas
    }

    fn state_bytes(&self) -> usize {
        (self.slots + 1) * self.len * self.width + self.r_bytes
    }

    #[inline]
    fn get(&self, enc: &[u8], block: usize, i: usize) -> usize {
        let at = (block * self.len + i) * self.width;
        if self.width == 1 {
            enc[at] as usize
        } else {
            u16::from_le_bytes([enc[at], enc[at + 1]]) as usize
        }
    }

    #[inline]
    fn put(&self, enc: &mut [u8], block: usize, i: usize, v: usize) {
        let at = (block * self.len + i) * self.width;
        if self.width == 1 {
            enc[at] = v as u8;
        } else {
            enc[at..at + 2].copy_from_slice(&(v as u16).to_le_bytes());
        }
    }

    /// `c(ω)(i)` read from the state or the constant pairing.
    #[inline]
    fn c_at(&self, enc: &[u8], w: usize, i: usize) -> usize {
        match self.slot[w] {
            Some(s) => self.get(enc, s, i),
            None => self.lambda[w][i] as usize,
        }
    }

    pub fn r_of(&self, enc: &[u8]) -> u64 {
        let base = enc.len() - self.r_bytes;
        enc[base..].iter().enumerate().fold(0, |acc, (k, &b)| acc | (b as u64) << (8 * k))
    }

    /// `a(σ)`.
    pub fn a_at(&self, enc: &[u8], sigma: usize) -> usize {
        self.get(enc, self.slots, sigma)
    }

    pub fn initial(&self) -> Box<[u8]> {
        let mut enc = vec![0u8; self.state_bytes()];
        for (w, s) in self.slot.iter().enumerate() {
            if let Some(s) = *s {
                for i in 0..self.len {
                    self.put(&mut enc, s, i, self.lambda[w][i] as usize);
                }
            }
        }
        for i in 0..self.len {
            self.put(&mut enc, self.slots, i, i);
        }
        enc.into_boxed_slice()
    }

    /// `T_ω`.
    pub fn step(&self, enc: &[u8], w: usize) -> Box<[u8]> {
        let mut out = enc.to_vec();
        for i in 0..self.len {
            let v = self.c_at(enc, w, self.a_at(enc, i));
            self.put(&mut out, self.slots, i, v);
        }
        for &g in &self.strict_subsets[w] {
            let s = self.slot[g].expect("strict subsets are not maximal");
            for i in 0..self.len {
                let v = self.c_at(enc, w, self.get(enc, s, self.c_at(enc, w, i)));
                self.put(&mut out, s, i, v);
            }
        }
        let r = self.r_of(enc) ^ 1 << (self.omegas[w].size() - 1);
        let base = out.len() - self.r_bytes;
        for k in 0..self.r_bytes {
            out[base + k] = (r >> (8 * k)) as u8;
        }
        out.into_boxed_slice()
    }

    pub fn decode(&self, enc: &[u8]) -> RealizationState {
        let c = (0..self.omegas.len()).map(|w| (0..self.len).map(|i| self.c_at(enc, w, i) as u32).collect()).collect();
        let a = (0..self.len).map(|i| self.a_at(enc, i) as u32).collect();
        RealizationState { c, a, r: self.r_of(enc) }
    }

    pub fn encode(&self, s: &RealizationState) -> Box<[u8]> {
        let mut enc = vec![0u8; self.state_bytes()];
        for (w, slot) in self.slot.iter().enumerate() {
            if let Some(slot) = *slot {
                for i in 0..self.len {
                    self.put(&mut enc, slot, i, s.c[w][i] as usize);
                }
            }
        }
        for i in 0..self.len {
            self.put(&mut enc, self.slots, i, s.a[i] as usize);
        }
        let base = enc.len() - self.r_bytes;
        for k in 0..self.r_bytes {
            enc[base + k] = (s.r >> (8 * k)) as u8;
        }
        enc.into_boxed_slice()
    }
}

pub const UNEXPLORED: u32 = u32::MAX;

/// Frontier states expanded per parallel batch.
const CHUNK: usize = 4096;

/// Reachable states with their transition table.
#[derive(Clone, Debug)]
pub struct CoveringAtlas {
    pub machine: Machine,
    pub states: IndexSet<Box<[u8]>>,
    /// `transitions[s · |Ω| + ω]`, or [`UNEXPLORED`].
    pub transitions: Vec<u32>,
    pub complete: bool,
    pub budget: usize,
}

impl CoveringAtlas {
    pub fn len(&self) -> usize {
        self.states.len()
    }

    pub fn is_empty(&self) -> bool {
        self.states.is_empty()
    }

    pub fn state(&self, s: usize) -> &[u8] {
        &self.states[s]
    }

    pub fn transition(&self, s: usize, w: usize) -> Option<usize> {
        let t = self.transitions[s * self.machine.omega_count() + w];
        (t != UNEXPLORED).then_some(t as usize)
    }

    /// Overwrites one table entry (fault injection in tests).
    pub fn set_transition(&mut self, s: usize, w: usize, t: usize) {
        let k = self.machine.omega_count();
        self.transitions[s * k + w] = t as u32;
    }

    /// Neighbor encoding through the table, or computed when unexplored.
    fn neighbor(&self, s: usize, w: usize) -> Box<[u8]> {
        match self.transition(s, w) {
            Some(t) => self.states[t].clone(),
            None => self.machine.step(&self.states[s], w),
        }
    }
}

/// Breadth-first closure of the initial state under all `T_ω`, level by
/// level; successors are computed in parallel and inserted in a fixed order.
pub fn enumerate_covering(input: &ColoredCycleInput, fam: &PairingFamily, budget: usize) -> CoveringAtlas {
    let machine = Machine::new(input, fam);
    let k = machine.omega_count();
    let mut states: IndexSet<Box<[u8]>> = IndexSet::new();
    states.insert(machine.initial());
    let mut transitions: Vec<u32> = Vec::new();
    let mut complete = true;
    let mut level = 0..1usize;
    while !level.is_empty() {
        let start = states.len();
        transitions.resize(level.end * k, UNEXPLORED);
        let mut chunk_start = level.start;
        while chunk_start < level.end {
            let chunk = chunk_start..(chunk_start + CHUNK).min(level.end);
            let succ: Vec<Box<[u8]>> = chunk
                .clone()
                .into_par_iter()
                .flat_map_iter(|s| {
                    let enc = &states[s];
                    (0..k).map(|w| machine.step(enc, w)).collect::<Vec<_>>()
                })
                .collect();
            for (j, next) in succ.into_iter().enumerate() {
                let (s, w) = (chunk.start + j / k, j % k);
                let t = match states.get_index_of(&next) {
                    Some(t) => Some(t),
                    None if states.len() < budget => Some(states.insert_full(next).0),
                    None => {
                        complete = false;
                        None
                    }
                };
                if let Some(t) = t {
                    transitions[s * k + w] = t as u32;
                }
            }
            chunk_start = chunk.end;
        }
        level = start..states.len();
    }
    transitions.resize(states.len() * k, UNEXPLORED);
    CoveringAtlas { machine, states, transitions, complete, budget }
}

/// A failed check with the state where it fails.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct Witness {
    pub check: String,
    pub state: usize,
    pub omega: Option<Vec<u8>>,
    pub detail: String,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct Checks {
    pub fiber_uniform: bool,
    pub parity_coherent: bool,
    pub well_defined: bool,
    pub codim2_commute: bool,
    pub involutive: bool,
    pub projection_uniform: bool,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct RealizationCertificate {
    pub cells: usize,
    pub simplices: usize,
    /// `N / |A|`, the degree of the realizing map.
    pub k: Option<usize>,
    pub complete: bool,
    pub fiber_counts: Vec<usize>,
    /// Size of each fiber of the projection `r: cells → Z₂ⁿ`.
    pub projection_fiber: Option<usize>,
    pub checks: Checks,
    pub witnesses: Vec<Witness>,
}

impl RealizationCertificate {
    pub fn passed(&self) -> bool {
        self.complete && self.k.is_some() && self.witnesses.is_empty()
    }
}

/// Invariants that hold state by state: parity coherence, type-face sharing
/// across each transition, involutivity without fixed points, commutation of
/// comparable transitions. Missing table entries are computed.
pub fn local_checks(atlas: &CoveringAtlas, input: &ColoredCycleInput) -> Vec<Witness> {
    let m = &atlas.machine;
    let k = m.omega_count();
    let base = input.base;
    let comparable: Vec<(usize, usize)> = (0..k)
        .flat_map(|a| (0..k).map(move |b| (a, b)))
        .filter(|&(a, b)| m.omegas[a].is_strict_subset(m.omegas[b]))
        .collect();
    let mut out: Vec<Witness> = (0..atlas.len())
        .into_par_iter()
        .flat_map_iter(|s| {
            let mut bad = Vec::new();
            let enc = atlas.state(s);
            let here = m.a_at(enc, base);
            let even = m.r_of(enc).count_ones().is_multiple_of(2);
            if even != input.chess.white[here] {
                bad.push(Witness {
                    check: "parity_coherent".into(),
                    state: s,
                    omega: None,
                    detail: format!("a(σ₀) = {here}"),
                });
            }
            for w in 0..k {
                let omega = m.omegas[w];
                let next = atlas.neighbor(s, w);
                let there = m.a_at(&next, base);
                if input.type_face(here, omega) != input.type_face(there, omega) {
                    bad.push(Witness {
                        check: "well_defined".into(),
                        state: s,
                        omega: Some(omega.colors()),
                        detail: format!("{here} and {there} differ on the type face"),
                    });
                }
                let back = m.step(&next, w);
                if *back != *enc || next[..] == enc[..] {
                    bad.push(Witness {
                        check: "involutive".into(),
                        state: s,
                        omega: Some(omega.colors()),
                        detail: String::new(),
                    });
                }
            }
            for &(a, b) in &comparable {
                let ab = m.step(&atlas.neighbor(s, b), a);
                let ba = m.step(&atlas.neighbor(s, a), b);
                if ab != ba {
                    bad.push(Witness {
                        check: "codim2_commute".into(),
                        state: s,
                        omega: Some(m.omegas[a].colors()),
                        detail: format!("with {:?}", m.omegas[b]),
                    });
                }
            }
            bad.into_iter()
        })
        .collect();
    out.sort_by(|a, b| (a.state, &a.check).cmp(&(b.state, &b.check)));
    out
}

/// Full certificate: local checks plus fiber uniformity over `A` and over
/// `Z₂ⁿ`. On an incomplete atlas only the local checks are meaningful.
pub fn verify_certificate(atlas: &CoveringAtlas, input: &ColoredCycleInput) -> RealizationCertificate {
    let m = &atlas.machine;
    let n = input.n();
    let count = input.simplex_count();
    let cells = atlas.len();
    let mut witnesses = local_checks(atlas, input);
    let mut fiber_counts = vec![0usize; count];
    let mut r_counts = vec![0usize; 1 << n];
    for enc in &atlas.states {
        fiber_counts[m.a_at(enc, input.base)] += 1;
        r_counts[m.r_of(enc) as usize] += 1;
    }
    let fiber_uniform = fiber_counts.iter().all(|&c| c * count == cells);
    let projection_uniform = r_counts.iter().all(|&c| c << n == cells);
    if atlas.complete {
        if !fiber_uniform {
            witnesses.push(Witness {
                check: "fiber_uniform".into(),
                state: 0,
                omega: None,
                detail: format!("fiber sizes {fiber_counts:?}"),
            });
        }
        if !projection_uniform {
            witnesses.push(Witness {
                check: "projection_uniform".into(),
                state: 0,
                omega: None,
                detail: format!("r-fiber sizes {r_counts:?}"),
            });
        }
        // Table entries must all be explored and point back.
        for s in 0..cells {
            for w in 0..m.omega_count() {
                if let Some(t) = atlas.transition(s, w) {
                    if atlas.transition(t, w) != Some(s) {
                        witnesses.push(Witness {
                            check: "involutive".into(),
                            state: s,
                            omega: Some(m.omegas[w].colors()),
                            detail: format!("table entry {t} does not return"),
                        });
                    }
                }
            }
        }
    }
    let has = |name: &str| !witnesses.iter().any(|w| w.check == name);
    let checks = Checks {
        fiber_uniform: atlas.complete && fiber_uniform,
        parity_coherent: has("parity_coherent"),
        well_defined: has("well_defined"),
        codim2_commute: has("codim2_commute"),
        involutive: has("involutive"),
        projection_uniform: atlas.complete && projection_uniform,
    };
    RealizationCertificate {
        cells,
        simplices: count,
        k: (atlas.complete && cells.is_multiple_of(count)).then_some(cells / count),
        complete: atlas.complete,
        fiber_counts,
        projection_fiber: (atlas.complete && cells.is_multiple_of(1 << n)).then_some(cells >> n),
        checks,
        witnesses,
    }
}

/// For `n = 1`: walks the cover as a cycle (alternating exits through the two
/// endpoint facets) and accumulates the signed steps of the image along the
/// oriented cycle `Z`. Returns the winding number, or `None` when the walk
/// does not close up after `N` cells or the total is not a multiple of `|A|`.
pub fn winding_number(atlas: &CoveringAtlas, input: &ColoredCycleInput) -> Option<i64> {
    if input.n() != 1 || !atlas.complete {
        return None;
    }
    let m = &atlas.machine;
    let orientation = input.z.orientation()?;
    let one = OmegaSet::from_colors(&[1]).index();
    let two = OmegaSet::from_colors(&[2]).index();
    let mut cur = 0usize;
    let mut exit_color = 2u8;
    let mut total = 0i64;
    for _ in 0..atlas.len() {
        let enc = atlas.state(cur);
        let even = m.r_of(enc).count_ones().is_multiple_of(2);
        if even != (exit_color == 2) {
            return None;
        }
        let e = m.a_at(enc, input.base);
        let edge = input.simplex(e);
        let to = *edge.iter().find(|&&v| input.coloring.color(v) == exit_color)?;
        let from = *edge.iter().find(|&&v| input.coloring.color(v) != exit_color)?;
        total += orientation[e] as i64 * if from < to { 1 } else { -1 };
        cur = atlas.transition(cur, if exit_color == 2 { two } else { one })?;
        exit_color = 3 - exit_color;
    }
    if cur != 0 || total % input.simplex_count() as i64 != 0 {
        return None;
    }
    Some(total / input.simplex_count() as i64)
}
