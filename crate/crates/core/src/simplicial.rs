//! Abstract simplicial complexes, oriented pseudo-manifolds, barycentric
//! subdivision with its canonical coloring, simplicial maps and their degrees.
//!
//! Orientation convention: a top simplex stored with ascending vertex ids
//! carries a sign in {+1, -1}; listing its vertices in another order multiplies
//! that sign by the parity of the reordering. The boundary of
//! `[v_0 … v_n]` is `Σ (-1)^i [v_0 … v̂_i … v_n]`.

use std::collections::{BTreeSet, HashMap, VecDeque};

use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::perm::{permutations, sequence_sign};
use crate::permutahedron::OmegaSet;

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum SimplicialError {
    #[error("complex has no top simplices")]
    Empty,
    #[error("vertex {vertex} out of range (vertex_count = {count})")]
    VertexOutOfRange { vertex: usize, count: usize },
    #[error("simplex {0:?} repeats a vertex")]
    RepeatedVertex(Vec<usize>),
    #[error("simplex {simplex:?} has {found} vertices, expected {expected}")]
    NotPure { simplex: Vec<usize>, expected: usize, found: usize },
    #[error("top simplex {0:?} listed twice")]
    DuplicateSimplex(Vec<usize>),
    #[error("orientation has {found} entries for {expected} top simplices")]
    OrientationLength { expected: usize, found: usize },
    #[error("orientation entries must be +1 or -1")]
    BadSign,
    #[error("complex is not strongly connected")]
    NotStronglyConnected,
    #[error("pseudo-manifold carries no orientation")]
    Unoriented,
    #[error("coloring is not regular: edge {0:?} has equal colors")]
    IrregularColoring(Vec<usize>),
    #[error("coloring must use colors 1..={expected}; found {found}")]
    ColorRange { expected: usize, found: u8 },
    #[error("simplicial map is not simplicial: image of {simplex:?} is {image:?}")]
    NotSimplicial { simplex: Vec<usize>, image: Vec<usize> },
    #[error("map degree differs between target simplices {first:?} ({first_degree}) and {other:?} ({other_degree})")]
    InconsistentDegree { first: Vec<usize>, first_degree: i64, other: Vec<usize>, other_degree: i64 },
    #[error("dimension mismatch: {0} vs {1}")]
    DimensionMismatch(usize, usize),
    #[error("base facet {0:?} is shared by another top simplex")]
    DegenerateBase(Vec<usize>),
    #[error("invalid pseudo-manifold: {0}")]
    PseudoManifold(PmReport),
}

/// A pure simplicial complex stored through its sorted list of top simplices.
#[derive(Clone, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub struct AbstractComplex {
    vertex_count: usize,
    dim: usize,
    top_simplices: Vec<Vec<usize>>,
}

impl AbstractComplex {
    /// Builds a complex, sorting each simplex and the simplex list.
    pub fn new(vertex_count: usize, top_simplices: Vec<Vec<usize>>) -> Result<Self, SimplicialError> {
        Self::with_signs(vertex_count, top_simplices).map(|(k, _)| k)
    }

    /// Like [`AbstractComplex::new`], also returning for each sorted top simplex
    /// (in final order) the parity of the sort applied to its listed order.
    pub fn with_signs(
        vertex_count: usize,
        top_simplices: Vec<Vec<usize>>,
    ) -> Result<(Self, Vec<(usize, i8)>), SimplicialError> {
        let first = top_simplices.first().ok_or(SimplicialError::Empty)?;
        let size = first.len();
        if size == 0 {
            return Err(SimplicialError::Empty);
        }
        let mut tagged = Vec::with_capacity(top_simplices.len());
        for (idx, s) in top_simplices.into_iter().enumerate() {
            if s.len() != size {
                return Err(SimplicialError::NotPure { found: s.len(), expected: size, simplex: s });
            }
            if let Some(&v) = s.iter().find(|&&v| v >= vertex_count) {
                return Err(SimplicialError::VertexOutOfRange { vertex: v, count: vertex_count });
            }
            let sign = sequence_sign(&s);
            let mut sorted = s.clone();
            sorted.sort_unstable();
            if sorted.windows(2).any(|w| w[0] == w[1]) {
                return Err(SimplicialError::RepeatedVertex(s));
            }
            tagged.push((sorted, idx, sign));
        }
        tagged.sort();
        if let Some(w) = tagged.windows(2).find(|w| w[0].0 == w[1].0) {
            return Err(SimplicialError::DuplicateSimplex(w[0].0.clone()));
        }
        let origin = tagged.iter().map(|(_, i, s)| (*i, *s)).collect();
        let top_simplices = tagged.into_iter().map(|(s, _, _)| s).collect();
        Ok((AbstractComplex { vertex_count, dim: size - 1, top_simplices }, origin))
    }

    /// Boundary of the `n`-simplex on vertices `0..=n`.
    pub fn simplex_boundary(n: usize) -> Self {
        let tops = (0..=n).map(|skip| (0..=n).filter(|&v| v != skip).collect()).collect();
        Self::new(n + 1, tops).expect("simplex boundary is well formed")
    }

    /// Cycle on `m` vertices `0 → 1 → … → m-1 → 0`.
    pub fn cycle(m: usize) -> Self {
        let tops = (0..m).map(|i| vec![i, (i + 1) % m]).collect();
        Self::new(m, tops).expect("cycle is well formed")
    }

    pub fn vertex_count(&self) -> usize {
        self.vertex_count
    }

    pub fn dim(&self) -> usize {
        self.dim
    }

    pub fn top_simplices(&self) -> &[Vec<usize>] {
        &self.top_simplices
    }

    pub fn len(&self) -> usize {
        self.top_simplices.len()
    }

    pub fn is_empty(&self) -> bool {
        self.top_simplices.is_empty()
    }

    /// Index of a sorted top simplex.
    pub fn index_of(&self, simplex: &[usize]) -> Option<usize> {
        self.top_simplices.binary_search_by(|s| s.as_slice().cmp(simplex)).ok()
    }

    /// All nonempty faces of all top simplices, sorted by (size, vertices).
    pub fn all_faces(&self) -> Vec<Vec<usize>> {
        let mut set = BTreeSet::new();
        for s in &self.top_simplices {
            let k = s.len();
            for mask in 1u64..(1 << k) {
                set.insert(
                    s.iter().enumerate().filter(|(i, _)| mask >> i & 1 == 1).map(|(_, &v)| v).collect::<Vec<_>>(),
                );
            }
        }
        let mut faces: Vec<_> = set.into_iter().collect();
        faces.sort_by(|a, b| a.len().cmp(&b.len()).then_with(|| a.cmp(b)));
        faces
    }

    /// Faces with exactly `k` vertices.
    pub fn faces_of_size(&self, k: usize) -> BTreeSet<Vec<usize>> {
        self.all_faces().into_iter().filter(|f| f.len() == k).collect()
    }

    pub fn contains_face(&self, face: &[usize]) -> bool {
        let mut f = face.to_vec();
        f.sort_unstable();
        self.top_simplices.iter().any(|s| f.iter().all(|v| s.binary_search(v).is_ok()))
    }

    pub fn edges(&self) -> BTreeSet<(usize, usize)> {
        let mut e = BTreeSet::new();
        for s in &self.top_simplices {
            for i in 0..s.len() {
                for j in i + 1..s.len() {
                    e.insert((s[i], s[j]));
                }
            }
        }
        e
    }

    /// Number of faces per dimension, `f[d]` = number of `d`-faces.
    pub fn f_vector(&self) -> Vec<usize> {
        let mut f = vec![0; self.dim + 1];
        for face in self.all_faces() {
            f[face.len() - 1] += 1;
        }
        f
    }

    pub fn euler_characteristic(&self) -> i64 {
        self.f_vector().iter().enumerate().map(|(d, &c)| if d % 2 == 0 { c as i64 } else { -(c as i64) }).sum()
    }

    /// Codimension-one faces with the `(top index, omitted position)` pairs
    /// containing them.
    fn ridges(&self) -> HashMap<Vec<usize>, Vec<(usize, usize)>> {
        let mut map: HashMap<Vec<usize>, Vec<(usize, usize)>> = HashMap::new();
        if self.dim == 0 {
            return map;
        }
        for (t, s) in self.top_simplices.iter().enumerate() {
            for i in 0..s.len() {
                let mut face = s.clone();
                face.remove(i);
                map.entry(face).or_default().push((t, i));
            }
        }
        map
    }
}

/// One violation found while validating a pseudo-manifold.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "snake_case")]
pub enum PmViolation {
    NonPseudoManifold { face: Vec<usize>, count: usize },
    NotStronglyConnected { components: usize },
    NonOrientable { face: Vec<usize> },
}

#[derive(Clone, Debug, Default, PartialEq, Eq, Serialize, Deserialize)]
pub struct PmReport {
    pub violations: Vec<PmViolation>,
}

impl std::fmt::Display for PmReport {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        write!(f, "{} violation(s)", self.violations.len())?;
        if let Some(v) = self.violations.first() {
            write!(f, ", first: {v:?}")?;
        }
        Ok(())
    }
}

impl PmReport {
    pub fn is_clean(&self) -> bool {
        self.violations.is_empty()
    }

    pub fn has_non_pseudo_manifold(&self) -> bool {
        self.violations.iter().any(|v| matches!(v, PmViolation::NonPseudoManifold { .. }))
    }

    pub fn has_non_orientable(&self) -> bool {
        self.violations.iter().any(|v| matches!(v, PmViolation::NonOrientable { .. }))
    }
}

/// A validated pure complex in which every codimension-one face lies in two
/// top simplices (or in one, for boundary faces of a relative pseudo-manifold).
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct OrientedPseudoManifold {
    complex: AbstractComplex,
    orientation: Option<Vec<i8>>,
    strongly_connected: bool,
    boundary: Vec<Vec<usize>>,
}

impl OrientedPseudoManifold {
    pub fn complex(&self) -> &AbstractComplex {
        &self.complex
    }

    pub fn dim(&self) -> usize {
        self.complex.dim
    }

    pub fn orientation(&self) -> Option<&[i8]> {
        self.orientation.as_deref()
    }

    pub fn oriented(&self) -> Result<&[i8], SimplicialError> {
        self.orientation.as_deref().ok_or(SimplicialError::Unoriented)
    }

    pub fn strongly_connected(&self) -> bool {
        self.strongly_connected
    }

    pub fn require_strongly_connected(&self) -> Result<(), SimplicialError> {
        if self.strongly_connected {
            Ok(())
        } else {
            Err(SimplicialError::NotStronglyConnected)
        }
    }

    /// Codimension-one faces lying in a single top simplex (empty when closed).
    pub fn boundary(&self) -> &[Vec<usize>] {
        &self.boundary
    }

    pub fn is_closed(&self) -> bool {
        self.boundary.is_empty()
    }

    /// Replaces the orientation by its negative.
    pub fn reversed(mut self) -> Self {
        if let Some(o) = self.orientation.as_mut() {
            o.iter_mut().for_each(|s| *s = -*s);
        }
        self
    }

    /// Validates a caller-supplied orientation against the complex.
    pub fn with_orientation(
        complex: AbstractComplex,
        orientation: Vec<i8>,
        allow_boundary: bool,
    ) -> Result<Self, SimplicialError> {
        if orientation.len() != complex.len() {
            return Err(SimplicialError::OrientationLength { expected: complex.len(), found: orientation.len() });
        }
        if orientation.iter().any(|&s| s != 1 && s != -1) {
            return Err(SimplicialError::BadSign);
        }
        let mut pm = validate(complex, false, allow_boundary).map_err(SimplicialError::PseudoManifold)?;
        let mut report = PmReport::default();
        for (face, owners) in pm.complex.ridges() {
            if let [(s, i), (t, j)] = owners[..] {
                if orientation[s] * parity(i) + orientation[t] * parity(j) != 0 {
                    report.violations.push(PmViolation::NonOrientable { face });
                }
            }
        }
        if !report.is_clean() {
            report.violations.sort_by(|a, b| format!("{a:?}").cmp(&format!("{b:?}")));
            return Err(SimplicialError::PseudoManifold(report));
        }
        pm.orientation = Some(orientation);
        Ok(pm)
    }
}

fn parity(i: usize) -> i8 {
    if i.is_multiple_of(2) {
        1
    } else {
        -1
    }
}

/// Checks the closed pseudo-manifold conditions and, when `orient` is set,
/// propagates an orientation across the facet-adjacency graph.
///
/// Strong connectivity is recorded on the result rather than treated as an
/// error; operations that need it call
/// [`OrientedPseudoManifold::require_strongly_connected`].
pub fn validate_pseudo_manifold(k: AbstractComplex, orient: bool) -> Result<OrientedPseudoManifold, PmReport> {
    validate(k, orient, false)
}

/// Like [`validate_pseudo_manifold`] but accepts codimension-one faces lying
/// in a single top simplex (pseudo-manifolds with boundary, e.g. subdivided
/// balls).
pub fn validate_relative(k: AbstractComplex, orient: bool) -> Result<OrientedPseudoManifold, PmReport> {
    validate(k, orient, true)
}

/// Every violation, including lack of strong connectivity.
pub fn diagnose(k: &AbstractComplex, orient: bool) -> PmReport {
    match validate(k.clone(), orient, false) {
        Err(r) => r,
        Ok(pm) => {
            let mut r = PmReport::default();
            if !pm.strongly_connected {
                r.violations.push(PmViolation::NotStronglyConnected { components: components(&pm.complex).1 });
            }
            r
        }
    }
}

fn components(k: &AbstractComplex) -> (Vec<usize>, usize) {
    let ridges = k.ridges();
    let mut adj = vec![Vec::new(); k.len()];
    for owners in ridges.values() {
        for a in owners {
            for b in owners {
                if a.0 != b.0 {
                    adj[a.0].push(b.0);
                }
            }
        }
    }
    let mut comp = vec![usize::MAX; k.len()];
    let mut count = 0;
    for start in 0..k.len() {
        if comp[start] != usize::MAX {
            continue;
        }
        comp[start] = count;
        let mut queue = VecDeque::from([start]);
        while let Some(t) = queue.pop_front() {
            for &u in &adj[t] {
                if comp[u] == usize::MAX {
                    comp[u] = count;
                    queue.push_back(u);
                }
            }
        }
        count += 1;
    }
    (comp, count)
}

fn validate(k: AbstractComplex, orient: bool, allow_boundary: bool) -> Result<OrientedPseudoManifold, PmReport> {
    let ridges = k.ridges();
    let mut report = PmReport::default();
    let mut boundary = Vec::new();
    let mut sorted_ridges: Vec<_> = ridges.iter().collect();
    sorted_ridges.sort();
    for (face, owners) in &sorted_ridges {
        match owners.len() {
            2 => {}
            1 if allow_boundary => boundary.push((*face).clone()),
            c => report.violations.push(PmViolation::NonPseudoManifold { face: (*face).clone(), count: c }),
        }
    }
    if !report.is_clean() {
        return Err(report);
    }
    let (_, count) = components(&k);
    let strongly_connected = count == 1;
    let orientation = if orient {
        let mut adj: Vec<Vec<(usize, usize, usize)>> = vec![Vec::new(); k.len()];
        for (_, owners) in &sorted_ridges {
            if let [(s, i), (t, j)] = owners[..] {
                adj[s].push((i, t, j));
                adj[t].push((j, s, i));
            }
        }
        let mut sign = vec![0i8; k.len()];
        for start in 0..k.len() {
            if sign[start] != 0 {
                continue;
            }
            sign[start] = 1;
            let mut queue = VecDeque::from([start]);
            while let Some(s) = queue.pop_front() {
                for &(i, t, j) in &adj[s] {
                    // o(s)(-1)^i + o(t)(-1)^j = 0
                    let want = -sign[s] * parity(i) * parity(j);
                    if sign[t] == 0 {
                        sign[t] = want;
                        queue.push_back(t);
                    } else if sign[t] != want {
                        let mut face = k.top_simplices[s].clone();
                        face.remove(i);
                        let v = PmViolation::NonOrientable { face };
                        if !report.violations.contains(&v) {
                            report.violations.push(v);
                        }
                    }
                }
            }
        }
        if !report.is_clean() {
            return Err(report);
        }
        Some(sign)
    } else {
        None
    };
    Ok(OrientedPseudoManifold { complex: k, orientation, strongly_connected, boundary })
}

/// Vertex coloring with colors `1..=num_colors`.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct VertexColoring {
    colors: Vec<u8>,
    num_colors: usize,
}

impl VertexColoring {
    pub fn new(colors: Vec<u8>, num_colors: usize) -> Result<Self, SimplicialError> {
        if let Some(&c) = colors.iter().find(|&&c| c == 0 || c as usize > num_colors) {
            return Err(SimplicialError::ColorRange { expected: num_colors, found: c });
        }
        Ok(VertexColoring { colors, num_colors })
    }

    pub fn colors(&self) -> &[u8] {
        &self.colors
    }

    pub fn color(&self, v: usize) -> u8 {
        self.colors[v]
    }

    pub fn num_colors(&self) -> usize {
        self.num_colors
    }

    /// Regular: the endpoints of every edge have distinct colors.
    pub fn check_regular(&self, k: &AbstractComplex) -> Result<(), SimplicialError> {
        if self.colors.len() != k.vertex_count() {
            return Err(SimplicialError::ColorRange { expected: self.num_colors, found: 0 });
        }
        for (a, b) in k.edges() {
            if self.colors[a] == self.colors[b] {
                return Err(SimplicialError::IrregularColoring(vec![a, b]));
            }
        }
        Ok(())
    }

    pub fn is_regular(&self, k: &AbstractComplex) -> bool {
        self.check_regular(k).is_ok()
    }
}

/// Output of [`barycentric_subdivide`]. Vertex `i` of the subdivision is the
/// barycentre of `faces[i]`; faces are ordered by (size, vertices), so sorted
/// vertex ids of a flag list it from its smallest face upward.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Subdivision {
    pub complex: AbstractComplex,
    pub coloring: VertexColoring,
    pub faces: Vec<Vec<usize>>,
}

/// Barycentric subdivision: vertices are faces of `k`, top simplices are full
/// flags, and each vertex is colored by (dimension of its face) + 1.
pub fn barycentric_subdivide(k: &AbstractComplex) -> Subdivision {
    subdivide_with_flags(k).0
}

fn subdivide_with_flags(k: &AbstractComplex) -> (Subdivision, Vec<(usize, i8)>) {
    let faces = k.all_faces();
    let index: HashMap<&[usize], usize> = faces.iter().enumerate().map(|(i, f)| (f.as_slice(), i)).collect();
    let mut tops = Vec::new();
    let mut origin = Vec::new();
    for (t, s) in k.top_simplices.iter().enumerate() {
        for order in permutations(s) {
            let mut chain = Vec::with_capacity(order.len());
            let mut face = Vec::with_capacity(order.len());
            for &v in &order {
                face.push(v);
                let mut sorted = face.clone();
                sorted.sort_unstable();
                chain.push(index[sorted.as_slice()]);
            }
            tops.push(chain);
            origin.push((t, sequence_sign(&order)));
        }
    }
    // Chains are already ascending because face ids grow with face size.
    let mut paired: Vec<_> = tops.into_iter().zip(origin).collect();
    paired.sort();
    let (tops, origin): (Vec<_>, Vec<_>) = paired.into_iter().unzip();
    let coloring = VertexColoring { colors: faces.iter().map(|f| f.len() as u8).collect(), num_colors: k.dim + 1 };
    let complex = AbstractComplex { vertex_count: faces.len(), dim: k.dim, top_simplices: tops };
    (Subdivision { complex, coloring, faces }, origin)
}

/// Subdivides an oriented pseudo-manifold, carrying the orientation over: the
/// flag `u_0 ⊂ u_0u_1 ⊂ …` inherits the sign of `[u_0 u_1 …]` in its simplex.
pub fn subdivide_oriented(
    z: &OrientedPseudoManifold,
) -> Result<(OrientedPseudoManifold, Subdivision), SimplicialError> {
    let o = z.oriented()?;
    let (sub, origin) = subdivide_with_flags(&z.complex);
    let orientation: Vec<i8> = origin.iter().map(|&(t, s)| s * o[t]).collect();
    let pm = OrientedPseudoManifold::with_orientation(sub.complex.clone(), orientation, !z.is_closed())?;
    Ok((pm, sub))
}

/// White (`A₊`) and black (`A₋`) top simplices.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct ChessColoring {
    pub white: Vec<bool>,
}

impl ChessColoring {
    pub fn positive(&self) -> Vec<usize> {
        (0..self.white.len()).filter(|&i| self.white[i]).collect()
    }

    pub fn negative(&self) -> Vec<usize> {
        (0..self.white.len()).filter(|&i| !self.white[i]).collect()
    }
}

/// Colors a top simplex white when listing its vertices by increasing color
/// gives a positively oriented ordering.
pub fn chess_coloring(z: &OrientedPseudoManifold, col: &VertexColoring) -> Result<ChessColoring, SimplicialError> {
    let o = z.oriented()?;
    z.require_strongly_connected()?;
    if col.num_colors != z.dim() + 1 {
        return Err(SimplicialError::ColorRange { expected: z.dim() + 1, found: col.num_colors as u8 });
    }
    col.check_regular(&z.complex)?;
    let white = z
        .complex
        .top_simplices
        .iter()
        .zip(o)
        .map(|(s, &sign)| {
            let colors: Vec<u8> = s.iter().map(|&v| col.colors[v]).collect();
            sequence_sign(&colors) * sign == 1
        })
        .collect();
    Ok(ChessColoring { white })
}

/// The unique face of `sigma` whose vertex colors are exactly `omega`.
pub fn type_face(sigma: &[usize], omega: OmegaSet, col: &VertexColoring) -> Vec<usize> {
    sigma.iter().copied().filter(|&v| omega.contains_color(col.colors[v])).collect()
}

/// A vertex map between complexes that sends simplices onto simplices
/// (degenerate images allowed).
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct SimplicialMap {
    source: AbstractComplex,
    target: AbstractComplex,
    vertex_map: Vec<usize>,
}

impl SimplicialMap {
    pub fn new(
        source: AbstractComplex,
        target: AbstractComplex,
        vertex_map: Vec<usize>,
    ) -> Result<Self, SimplicialError> {
        if vertex_map.len() != source.vertex_count {
            return Err(SimplicialError::VertexOutOfRange { vertex: vertex_map.len(), count: source.vertex_count });
        }
        if let Some(&v) = vertex_map.iter().find(|&&v| v >= target.vertex_count) {
            return Err(SimplicialError::VertexOutOfRange { vertex: v, count: target.vertex_count });
        }
        let faces: BTreeSet<Vec<usize>> = target.all_faces().into_iter().collect();
        for s in &source.top_simplices {
            let image: BTreeSet<usize> = s.iter().map(|&v| vertex_map[v]).collect();
            let image: Vec<usize> = image.into_iter().collect();
            if !faces.contains(&image) {
                return Err(SimplicialError::NotSimplicial { simplex: s.clone(), image });
            }
        }
        Ok(SimplicialMap { source, target, vertex_map })
    }

    pub fn source(&self) -> &AbstractComplex {
        &self.source
    }

    pub fn target(&self) -> &AbstractComplex {
        &self.target
    }

    pub fn vertex_map(&self) -> &[usize] {
        &self.vertex_map
    }

    pub fn identity(k: &AbstractComplex) -> Self {
        SimplicialMap { source: k.clone(), target: k.clone(), vertex_map: (0..k.vertex_count).collect() }
    }

    /// `other ∘ self`.
    pub fn then(&self, other: &SimplicialMap) -> Result<SimplicialMap, SimplicialError> {
        let vm = self.vertex_map.iter().map(|&v| other.vertex_map[v]).collect();
        SimplicialMap::new(self.source.clone(), other.target.clone(), vm)
    }
}

/// Signed count of nondegenerate preimages of each target top simplex; errors
/// unless the count is the same for every target simplex.
pub fn map_degree(
    f: &SimplicialMap,
    z1: &OrientedPseudoManifold,
    z2: &OrientedPseudoManifold,
) -> Result<i64, SimplicialError> {
    if z1.dim() != z2.dim() {
        return Err(SimplicialError::DimensionMismatch(z1.dim(), z2.dim()));
    }
    z2.require_strongly_connected()?;
    let o1 = z1.oriented()?;
    let o2 = z2.oriented()?;
    if f.source != z1.complex || f.target != z2.complex {
        return Err(SimplicialError::DimensionMismatch(f.source.dim, z1.dim()));
    }
    let mut counts = vec![0i64; z2.complex.len()];
    for (t, s) in z1.complex.top_simplices.iter().enumerate() {
        let image: Vec<usize> = s.iter().map(|&v| f.vertex_map[v]).collect();
        let mut sorted = image.clone();
        sorted.sort_unstable();
        if sorted.windows(2).any(|w| w[0] == w[1]) {
            continue;
        }
        let target = z2
            .complex
            .index_of(&sorted)
            .ok_or_else(|| SimplicialError::NotSimplicial { simplex: s.clone(), image: sorted.clone() })?;
        counts[target] += (o1[t] * o2[target] * sequence_sign(&image)) as i64;
    }
    let first = counts[0];
    if let Some(i) = counts.iter().position(|&c| c != first) {
        return Err(SimplicialError::InconsistentDegree {
            first: z2.complex.top_simplices[0].clone(),
            first_degree: first,
            other: z2.complex.top_simplices[i].clone(),
            other_degree: counts[i],
        });
    }
    Ok(first)
}

/// A labeled-base-facet map `L → ∂Δⁿ` together with its verified degree.
#[derive(Clone, Debug)]
pub struct BoundaryCollapse {
    pub map: SimplicialMap,
    pub target: OrientedPseudoManifold,
    pub degree: i64,
}

/// Sends the vertices of the base facet (the first top simplex) to
/// `0, …, n-1` and every other vertex to `n`; only the base facet covers the
/// simplex `[0 … n-1]`, so the degree is ±1.
pub fn collapse_to_boundary_simplex(l: &OrientedPseudoManifold) -> Result<BoundaryCollapse, SimplicialError> {
    let n = l.dim() + 1;
    let base = &l.complex.top_simplices[0];
    if l.complex.top_simplices[1..].iter().any(|s| s == base) {
        return Err(SimplicialError::DegenerateBase(base.clone()));
    }
    let mut vm = vec![n; l.complex.vertex_count];
    for (label, &v) in base.iter().enumerate() {
        vm[v] = label;
    }
    let target_complex = AbstractComplex::simplex_boundary(n);
    let target = validate_pseudo_manifold(target_complex.clone(), true).map_err(SimplicialError::PseudoManifold)?;
    let map = SimplicialMap::new(l.complex.clone(), target_complex, vm)?;
    let degree = map_degree(&map, l, &target)?;
    Ok(BoundaryCollapse { map, target, degree })
}

#[cfg(test)]
mod tests {
    use super::*;

    fn rp2() -> AbstractComplex {
        // Minimal 6-vertex projective plane.
        AbstractComplex::new(
            6,
            vec![
                vec![0, 1, 2],
                vec![0, 2, 3],
                vec![0, 3, 4],
                vec![0, 4, 5],
                vec![0, 1, 5],
                vec![1, 2, 4],
                vec![2, 3, 5],
                vec![1, 3, 4],
                vec![2, 4, 5],
                vec![1, 3, 5],
            ],
        )
        .unwrap()
    }

    #[test]
    fn tetrahedron_boundary_is_valid() {
        let pm = validate_pseudo_manifold(AbstractComplex::simplex_boundary(3), true).unwrap();
        assert!(pm.strongly_connected());
        assert!(pm.is_closed());
        assert_eq!(pm.complex().len(), 4);
    }

    #[test]
    fn projective_plane_is_not_orientable() {
        let k = rp2();
        assert_eq!(k.f_vector(), vec![6, 15, 10]);
        let err = validate_pseudo_manifold(k.clone(), true).unwrap_err();
        assert!(err.has_non_orientable());
        assert!(validate_pseudo_manifold(k, false).is_ok());
    }

    #[test]
    fn wedge_of_spheres_is_not_strongly_connected() {
        let mut tops: Vec<Vec<usize>> = (0..4).map(|s| (0..4).filter(|&v| v != s).collect()).collect();
        tops.extend((0..4).map(|s| {
            [0, 4, 5, 6].iter().copied().enumerate().filter(|&(i, _)| i != s).map(|(_, v)| v).collect::<Vec<_>>()
        }));
        let k = AbstractComplex::new(7, tops).unwrap();
        let pm = validate_pseudo_manifold(k.clone(), true).unwrap();
        assert!(!pm.strongly_connected());
        assert_eq!(diagnose(&k, true).violations, vec![PmViolation::NotStronglyConnected { components: 2 }]);
    }

    #[test]
    fn non_pseudo_manifold_reports_faces() {
        // Three triangles on a common edge.
        let k = AbstractComplex::new(5, vec![vec![0, 1, 2], vec![0, 1, 3], vec![0, 1, 4]]).unwrap();
        let r = validate_pseudo_manifold(k, true).unwrap_err();
        assert!(r.violations.contains(&PmViolation::NonPseudoManifold { face: vec![0, 1], count: 3 }));
    }

    #[test]
    fn subdivision_examples() {
        let tri = barycentric_subdivide(&AbstractComplex::simplex_boundary(2));
        assert_eq!(tri.complex.len(), 6);
        assert_eq!(tri.complex.f_vector(), vec![6, 6]);
        assert!(tri.coloring.is_regular(&tri.complex));
        assert!(tri.coloring.colors().iter().all(|&c| c == 1 || c == 2));

        let tet = barycentric_subdivide(&AbstractComplex::simplex_boundary(3));
        assert_eq!(tet.complex.f_vector(), vec![14, 36, 24]);
        assert!(tet.coloring.is_regular(&tet.complex));

        let edge = barycentric_subdivide(&AbstractComplex::new(2, vec![vec![0, 1]]).unwrap());
        assert_eq!(edge.complex.vertex_count(), 3);
        assert_eq!(edge.coloring.colors(), &[1, 1, 2]);
        assert_eq!(edge.complex.top_simplices(), &[vec![0, 2], vec![1, 2]]);
    }

    #[test]
    fn chess_counts() {
        let z = validate_pseudo_manifold(AbstractComplex::simplex_boundary(2), true).unwrap();
        let (zs, sub) = subdivide_oriented(&z).unwrap();
        let chess = chess_coloring(&zs, &sub.coloring).unwrap();
        assert_eq!(chess.positive().len(), 3);
        // Adjacent edges of the 6-cycle alternate.
        for (face, owners) in zs.complex().ridges() {
            let _ = face;
            assert_ne!(chess.white[owners[0].0], chess.white[owners[1].0]);
        }

        let z = validate_pseudo_manifold(AbstractComplex::simplex_boundary(3), true).unwrap();
        let (zs, sub) = subdivide_oriented(&z).unwrap();
        let chess = chess_coloring(&zs, &sub.coloring).unwrap();
        assert_eq!((chess.positive().len(), chess.negative().len()), (12, 12));
    }

    #[test]
    fn irregular_coloring_rejected() {
        let z = validate_pseudo_manifold(AbstractComplex::cycle(4), true).unwrap();
        let col = VertexColoring::new(vec![1, 1, 2, 2], 2).unwrap();
        assert!(matches!(chess_coloring(&z, &col), Err(SimplicialError::IrregularColoring(_))));
    }

    #[test]
    fn degrees_of_cycle_maps() {
        let c6 = validate_pseudo_manifold(AbstractComplex::cycle(6), true).unwrap();
        let c3 = validate_pseudo_manifold(AbstractComplex::cycle(3), true).unwrap();
        let id = SimplicialMap::identity(c6.complex());
        assert_eq!(map_degree(&id, &c6, &c6).unwrap(), 1);

        let wrap =
            SimplicialMap::new(c6.complex().clone(), c3.complex().clone(), (0..6).map(|i| i % 3).collect()).unwrap();
        assert_eq!(map_degree(&wrap, &c6, &c3).unwrap().abs(), 2);

        let fold = SimplicialMap::new(c6.complex().clone(), c3.complex().clone(), vec![0, 1, 2, 1, 0, 0]).unwrap();
        assert_eq!(map_degree(&fold, &c6, &c3).unwrap(), 0);
    }

    #[test]
    fn non_simplicial_map_rejected() {
        let c4 = AbstractComplex::cycle(4);
        let c3 = AbstractComplex::new(3, vec![vec![0, 1], vec![1, 2]]).unwrap();
        assert!(matches!(SimplicialMap::new(c4, c3, vec![0, 1, 2, 0]), Err(SimplicialError::NotSimplicial { .. })));
    }

    #[test]
    fn collapse_examples() {
        let c6 = validate_pseudo_manifold(AbstractComplex::cycle(6), true).unwrap();
        let c = collapse_to_boundary_simplex(&c6).unwrap();
        assert_eq!(c.degree.abs(), 1);
        assert_eq!(c.map.target().len(), 3);

        for n in 2..=4 {
            let l = validate_pseudo_manifold(AbstractComplex::simplex_boundary(n), true).unwrap();
            assert_eq!(collapse_to_boundary_simplex(&l).unwrap().degree.abs(), 1);
        }
    }

    #[test]
    fn type_faces() {
        let col = VertexColoring::new(vec![1, 2, 3], 3).unwrap();
        let sigma = [0, 1, 2];
        assert_eq!(type_face(&sigma, OmegaSet::from_colors(&[2]), &col), vec![1]);
        assert_eq!(type_face(&sigma, OmegaSet::from_colors(&[1, 3]), &col), vec![0, 2]);
    }

    #[test]
    fn orientation_given_in_listed_order() {
        let (k, origin) = AbstractComplex::with_signs(3, vec![vec![1, 0], vec![1, 2], vec![2, 0]]).unwrap();
        assert_eq!(k.top_simplices(), &[vec![0, 1], vec![0, 2], vec![1, 2]]);
        assert_eq!(origin, vec![(0, -1), (2, -1), (1, 1)]);
    }
}
