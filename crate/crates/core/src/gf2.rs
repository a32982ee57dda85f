//! Bit-vector linear algebra over Z₂ (vectors of length ≤ 64).

/// A subspace of Z₂^r kept in reduced echelon form: every basis vector owns a
/// distinct pivot bit that is zero in all other basis vectors.
#[derive(Clone, Debug, Default, PartialEq, Eq)]
pub struct Subspace {
    basis: Vec<(u32, u64)>,
}

impl Subspace {
    pub fn spanned_by<I: IntoIterator<Item = u64>>(vectors: I) -> Self {
        let mut s = Subspace::default();
        for v in vectors {
            s.insert(v);
        }
        s
    }

    /// Adds `v`; returns false when it was already in the span.
    pub fn insert(&mut self, v: u64) -> bool {
        let v = self.reduce(v);
        if v == 0 {
            return false;
        }
        let pivot = 63 - v.leading_zeros();
        for (_, b) in self.basis.iter_mut() {
            if *b >> pivot & 1 == 1 {
                *b ^= v;
            }
        }
        self.basis.push((pivot, v));
        self.basis.sort_by_key(|&(p, _)| std::cmp::Reverse(p));
        true
    }

    /// Canonical coset representative of `v + self`: all pivot bits cleared.
    pub fn reduce(&self, mut v: u64) -> u64 {
        for &(p, b) in &self.basis {
            if v >> p & 1 == 1 {
                v ^= b;
            }
        }
        v
    }

    pub fn rank(&self) -> usize {
        self.basis.len()
    }

    pub fn pivot_mask(&self) -> u64 {
        self.basis.iter().fold(0, |m, &(p, _)| m | 1 << p)
    }

    pub fn contains(&self, v: u64) -> bool {
        self.reduce(v) == 0
    }

    /// Every canonical coset representative of Z₂^dim / self, ascending.
    pub fn coset_representatives(&self, dim: usize) -> Vec<u64> {
        let full = if dim == 64 { u64::MAX } else { (1u64 << dim) - 1 };
        let free: Vec<u32> = (0..dim as u32).filter(|&b| self.pivot_mask() >> b & 1 == 0).collect();
        let mut reps: Vec<u64> = (0..1u64 << free.len())
            .map(|bits| free.iter().enumerate().fold(0u64, |acc, (k, &b)| acc | ((bits >> k & 1) << b)))
            .collect();
        reps.iter_mut().for_each(|r| *r &= full);
        reps.sort_unstable();
        reps
    }
}

pub fn rank<I: IntoIterator<Item = u64>>(vectors: I) -> usize {
    Subspace::spanned_by(vectors).rank()
}

/// Finds `ℓ` with `popcount(ℓ & g) odd` for every `g`, i.e. a functional taking
/// the value 1 on every generator.
pub fn odd_functional(generators: &[u64], dim: usize) -> Option<u64> {
    // Rows: generator bits | rhs bit at position `dim`.
    let mut rows: Vec<u128> = generators.iter().map(|&g| g as u128 | 1u128 << dim).collect();
    let mut pivots = Vec::new();
    let mut r = 0;
    for col in 0..dim {
        let Some(p) = (r..rows.len()).find(|&i| rows[i] >> col & 1 == 1) else {
            continue;
        };
        rows.swap(r, p);
        for i in 0..rows.len() {
            if i != r && rows[i] >> col & 1 == 1 {
                rows[i] ^= rows[r];
            }
        }
        pivots.push(col);
        r += 1;
    }
    if rows[r..].iter().any(|&row| row >> dim & 1 == 1) {
        return None;
    }
    let mut l = 0u64;
    for (i, &col) in pivots.iter().enumerate() {
        if rows[i] >> dim & 1 == 1 {
            l |= 1 << col;
        }
    }
    Some(l)
}
