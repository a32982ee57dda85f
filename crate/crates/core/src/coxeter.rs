//! Exact algebra of the free product `F = *_ω Z₂`, the automorphisms `ψ_ω`,
//! the semidirect product `F ⋊ Ψ`, the generators `s_ω = ψ_ω·x_ω` of the
//! right-angled Coxeter group `W`, and the cocycle `θ: W → F`.
//!
//! Elements of `F ⋊ Ψ` are written `ψ·x`; `ψ·x·ψ⁻¹ = ψ(x)`, so
//! `(ψ₁x₁)(ψ₂x₂) = (ψ₁ψ₂)·(ψ₂⁻¹(x₁)x₂)`.

use std::collections::{HashMap, VecDeque};

use rand::seq::SliceRandom;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::perm::{compose, identity, Perm};

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum CoxeterError {
    #[error("poset element {element} out of range (size {size})")]
    OutOfRange { element: usize, size: usize },
    #[error("relation is not a strict order: {0} < {0} follows from the given pairs")]
    Cycle(usize),
    #[error("action has {found} permutations, expected {expected}")]
    ActionSize { expected: usize, found: usize },
    #[error("action permutation for element {0} is not an involution of the point set")]
    NotInvolution(usize),
}

/// A finite strict partial order on `0..size`.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct Poset {
    size: usize,
    lt: Vec<bool>,
}

impl Poset {
    /// Builds the transitive closure of `pairs` (`(a, b)` meaning `a < b`).
    pub fn new(size: usize, pairs: &[(usize, usize)]) -> Result<Self, CoxeterError> {
        let mut lt = vec![false; size * size];
        for &(a, b) in pairs {
            for e in [a, b] {
                if e >= size {
                    return Err(CoxeterError::OutOfRange { element: e, size });
                }
            }
            lt[a * size + b] = true;
        }
        for k in 0..size {
            for i in 0..size {
                if lt[i * size + k] {
                    for j in 0..size {
                        if lt[k * size + j] {
                            lt[i * size + j] = true;
                        }
                    }
                }
            }
        }
        if let Some(i) = (0..size).find(|&i| lt[i * size + i]) {
            return Err(CoxeterError::Cycle(i));
        }
        Ok(Poset { size, lt })
    }

    pub fn antichain(size: usize) -> Self {
        Poset { size, lt: vec![false; size * size] }
    }

    pub fn chain(size: usize) -> Self {
        let pairs: Vec<_> = (1..size).map(|i| (i - 1, i)).collect();
        Poset::new(size, &pairs).expect("chain is acyclic")
    }

    /// Random order: each pair `i < j` of a random linear extension is kept
    /// with probability `density`, then closed transitively.
    pub fn random<R: Rng>(size: usize, density: f64, rng: &mut R) -> Self {
        let mut order: Vec<usize> = (0..size).collect();
        order.shuffle(rng);
        let mut pairs = Vec::new();
        for i in 0..size {
            for j in i + 1..size {
                if rng.gen_bool(density) {
                    pairs.push((order[i], order[j]));
                }
            }
        }
        Poset::new(size, &pairs).expect("pairs follow a linear order")
    }

    pub fn size(&self) -> usize {
        self.size
    }

    pub fn less(&self, a: usize, b: usize) -> bool {
        self.lt[a * self.size + b]
    }

    /// `a < b` or `b < a`; distinct comparable generators commute in `W`.
    pub fn comparable(&self, a: usize, b: usize) -> bool {
        self.less(a, b) || self.less(b, a)
    }

    /// All strict relations `(a, b)` with `a < b`.
    pub fn relations(&self) -> Vec<(usize, usize)> {
        let mut out = Vec::new();
        for a in 0..self.size {
            for b in 0..self.size {
                if self.less(a, b) {
                    out.push((a, b));
                }
            }
        }
        out
    }
}

/// A word in the involutions `x_ω`, stored reduced.
#[derive(Clone, Debug, Default, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub struct InvolutionWord {
    letters: Vec<usize>,
}

impl InvolutionWord {
    pub fn new(letters: Vec<usize>) -> Self {
        InvolutionWord { letters: reduce(&letters) }
    }

    pub fn empty() -> Self {
        InvolutionWord::default()
    }

    pub fn generator(w: usize) -> Self {
        InvolutionWord { letters: vec![w] }
    }

    pub fn letters(&self) -> &[usize] {
        &self.letters
    }

    pub fn len(&self) -> usize {
        self.letters.len()
    }

    pub fn is_empty(&self) -> bool {
        self.letters.is_empty()
    }

    pub fn concat(&self, other: &InvolutionWord) -> Self {
        let mut v = self.letters.clone();
        v.extend_from_slice(&other.letters);
        InvolutionWord::new(v)
    }

    /// Inverse of a product of involutions: the reversed word.
    pub fn inverse(&self) -> Self {
        InvolutionWord { letters: self.letters.iter().rev().copied().collect() }
    }

    /// Image under the permutation representation `x_ω ↦ perms[ω]`,
    /// the rightmost letter acting first.
    pub fn act(&self, perms: &[Perm], point: usize) -> usize {
        self.letters.iter().rev().fold(point, |p, &w| perms[w][p] as usize)
    }

    /// `Some(ω)` when the word reads `y x_ω y⁻¹` with every letter of `y`
    /// strictly above `ω`.
    pub fn conjugate_center(&self, p: &Poset) -> Option<usize> {
        let l = &self.letters;
        if l.len().is_multiple_of(2) {
            return None;
        }
        let mid = l.len() / 2;
        let w = l[mid];
        let palindrome = (0..mid).all(|i| l[i] == l[l.len() - 1 - i]);
        let above = l[..mid].iter().all(|&y| p.less(w, y));
        (palindrome && above).then_some(w)
    }
}

/// Free cancellation of equal adjacent letters (single stack pass).
pub fn reduce(letters: &[usize]) -> Vec<usize> {
    let mut out: Vec<usize> = Vec::with_capacity(letters.len());
    for &l in letters {
        if out.last() == Some(&l) {
            out.pop();
        } else {
            out.push(l);
        }
    }
    out
}

/// `ψ_ω(w)`: `x_γ ↦ x_ω x_γ x_ω` for `γ < ω`, other letters fixed.
pub fn apply_psi(omega: usize, w: &InvolutionWord, p: &Poset) -> InvolutionWord {
    let mut out = Vec::with_capacity(w.len() + 2);
    for &g in &w.letters {
        if p.less(g, omega) {
            out.extend_from_slice(&[omega, g, omega]);
        } else {
            out.push(g);
        }
    }
    InvolutionWord::new(out)
}

/// An element of `Ψ` as a product `ψ_{l₀} ψ_{l₁} ⋯` of generators.
#[derive(Clone, Debug, Default, PartialEq, Eq, Serialize, Deserialize)]
pub struct AutWord {
    letters: Vec<usize>,
}

impl AutWord {
    pub fn new(letters: Vec<usize>) -> Self {
        AutWord { letters: reduce(&letters) }
    }

    pub fn letters(&self) -> &[usize] {
        &self.letters
    }

    pub fn inverse(&self) -> Self {
        AutWord { letters: self.letters.iter().rev().copied().collect() }
    }

    pub fn then(&self, other: &AutWord) -> Self {
        let mut v = self.letters.clone();
        v.extend_from_slice(&other.letters);
        AutWord::new(v)
    }

    /// Applies the composite; the rightmost generator acts first.
    pub fn apply(&self, w: &InvolutionWord, p: &Poset) -> InvolutionWord {
        self.letters.iter().rev().fold(w.clone(), |acc, &o| apply_psi(o, &acc, p))
    }

    /// Automorphisms agree iff they agree on every generator.
    pub fn semantically_equal(&self, other: &AutWord, p: &Poset) -> bool {
        (0..p.size()).all(|g| {
            let x = InvolutionWord::generator(g);
            self.apply(&x, p) == other.apply(&x, p)
        })
    }
}

/// `ψ·x ∈ F ⋊ Ψ`.
#[derive(Clone, Debug, Default, PartialEq, Eq, Serialize, Deserialize)]
pub struct SemiDirectElement {
    pub psi: AutWord,
    pub x: InvolutionWord,
}

impl SemiDirectElement {
    pub fn identity() -> Self {
        SemiDirectElement::default()
    }

    /// `s_ω = x_ω ψ_ω = ψ_ω x_ω` (ψ_ω fixes x_ω).
    pub fn s(omega: usize) -> Self {
        SemiDirectElement { psi: AutWord::new(vec![omega]), x: InvolutionWord::generator(omega) }
    }

    pub fn multiply(&self, other: &SemiDirectElement, p: &Poset) -> Self {
        let x = other.psi.inverse().apply(&self.x, p).concat(&other.x);
        SemiDirectElement { psi: self.psi.then(&other.psi), x }
    }

    /// Product `s_{w₀} s_{w₁} ⋯`.
    pub fn from_word(word: &[usize], p: &Poset) -> Self {
        word.iter().fold(Self::identity(), |acc, &w| acc.multiply(&Self::s(w), p))
    }

    pub fn semantically_equal(&self, other: &SemiDirectElement, p: &Poset) -> bool {
        self.x == other.x && self.psi.semantically_equal(&other.psi, p)
    }
}

/// `θ(s_{w₀} ⋯ s_{w_k})`: the `F`-part of the product, built by
/// `θ(g s_ω) = ψ_ω(θ(g))·x_ω`.
pub fn theta(word: &[usize], p: &Poset) -> InvolutionWord {
    word.iter().fold(InvolutionWord::empty(), |x, &w| apply_psi(w, &x, p).concat(&InvolutionWord::generator(w)))
}

/// Canonical form in the right-angled Coxeter group where distinct letters
/// commute iff comparable: cancellation across commuting letters, then the
/// lexicographically least shuffle.
pub fn racg_normal_form(word: &[usize], p: &Poset) -> Vec<usize> {
    let mut stack: Vec<usize> = Vec::with_capacity(word.len());
    for &l in word {
        let mut cancel = None;
        for i in (0..stack.len()).rev() {
            if stack[i] == l {
                cancel = Some(i);
                break;
            }
            if !p.comparable(stack[i], l) {
                break;
            }
        }
        match cancel {
            Some(i) => {
                stack.remove(i);
            }
            None => stack.push(l),
        }
    }
    let mut rest = stack;
    let mut out = Vec::with_capacity(rest.len());
    while !rest.is_empty() {
        let mut best: Option<usize> = None;
        for i in 0..rest.len() {
            if rest[..i].iter().all(|&e| p.comparable(e, rest[i])) && best.is_none_or(|b| rest[i] < rest[b]) {
                best = Some(i);
            }
        }
        out.push(rest.remove(best.expect("the first letter is always movable")));
    }
    out
}

pub fn racg_equal(w1: &[usize], w2: &[usize], p: &Poset) -> bool {
    racg_normal_form(w1, p) == racg_normal_form(w2, p)
}

/// A failed identity, with the words involved spelled as index sequences.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct Counterexample {
    pub check: String,
    pub omega: Option<usize>,
    pub word: Vec<usize>,
    pub other: Vec<usize>,
    pub result: Vec<usize>,
}

#[derive(Clone, Debug, Default, PartialEq, Eq, Serialize, Deserialize)]
pub struct AlgebraReport {
    pub trials: usize,
    pub checks: usize,
    pub counterexamples: Vec<Counterexample>,
}

impl AlgebraReport {
    pub fn passed(&self) -> bool {
        self.counterexamples.is_empty()
    }

    pub fn merge(&mut self, other: AlgebraReport) {
        self.trials += other.trials;
        self.checks += other.checks;
        self.counterexamples.extend(other.counterexamples);
    }

    fn record(&mut self, ok: bool, fail: impl FnOnce() -> Counterexample) {
        self.checks += 1;
        if !ok {
            self.counterexamples.push(fail());
        }
    }
}

pub fn random_word<R: Rng>(size: usize, max_len: usize, rng: &mut R) -> Vec<usize> {
    let len = rng.gen_range(0..=max_len);
    (0..len).map(|_| rng.gen_range(0..size)).collect()
}

/// A word equal to `w` in `W`: random commuting swaps and inserted `s s` pairs.
fn perturb<R: Rng>(w: &[usize], p: &Poset, rng: &mut R) -> Vec<usize> {
    let mut v = w.to_vec();
    for _ in 0..3 * v.len() + 2 {
        if v.len() >= 2 && rng.gen_bool(0.6) {
            let i = rng.gen_range(0..v.len() - 1);
            if p.comparable(v[i], v[i + 1]) {
                v.swap(i, i + 1);
            }
        } else if rng.gen_bool(0.3) {
            let i = rng.gen_range(0..=v.len());
            let l = rng.gen_range(0..p.size());
            v.splice(i..i, [l, l]);
        }
    }
    v
}

/// Random-trial verification of the Ψ-invariance of `F_{>ω}`, the cocycle
/// identity `θ(s_ω g) = y x_ω y⁻¹ θ(g)` with `y ∈ F_{>ω}`, commutation of
/// comparable generators, faithfulness of `W → F ⋊ Ψ` against the Coxeter
/// normal form, and length parity of `θ`.
pub fn verify_section4(p: &Poset, trials: usize, max_len: usize, seed: u64) -> AlgebraReport {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let mut report = AlgebraReport { trials, ..Default::default() };
    let k = p.size();
    if k == 0 {
        return report;
    }
    for _ in 0..trials {
        let omega = rng.gen_range(0..k);

        let psi = AutWord::new(random_word(k, max_len, &mut rng));
        let image = psi.apply(&InvolutionWord::generator(omega), p);
        report.record(image.conjugate_center(p) == Some(omega), || Counterexample {
            check: "psi_conjugate_above".into(),
            omega: Some(omega),
            word: psi.letters().to_vec(),
            other: vec![],
            result: image.letters().to_vec(),
        });

        let g = random_word(k, max_len.saturating_sub(1), &mut rng);
        let mut sg = vec![omega];
        sg.extend_from_slice(&g);
        let tg = theta(&g, p);
        let z = theta(&sg, p).concat(&tg.inverse());
        report.record(z.conjugate_center(p) == Some(omega), || Counterexample {
            check: "cocycle".into(),
            omega: Some(omega),
            word: g.clone(),
            other: vec![],
            result: z.letters().to_vec(),
        });

        let elem = SemiDirectElement::from_word(&g, p);
        report.record(elem.x == tg, || Counterexample {
            check: "theta_is_x_part".into(),
            omega: None,
            word: g.clone(),
            other: elem.x.letters().to_vec(),
            result: tg.letters().to_vec(),
        });
        report.record(tg.len() % 2 == g.len() % 2, || Counterexample {
            check: "parity".into(),
            omega: None,
            word: g.clone(),
            other: vec![],
            result: tg.letters().to_vec(),
        });

        let other = rng.gen_range(0..k);
        if p.comparable(omega, other) {
            let ab = SemiDirectElement::from_word(&[omega, other], p);
            let ba = SemiDirectElement::from_word(&[other, omega], p);
            let psi_ab = AutWord::new(vec![omega, other]);
            let psi_ba = AutWord::new(vec![other, omega]);
            report.record(ab.semantically_equal(&ba, p) && psi_ab.semantically_equal(&psi_ba, p), || Counterexample {
                check: "comparable_commute".into(),
                omega: Some(omega),
                word: vec![omega, other],
                other: vec![other, omega],
                result: vec![],
            });
        }

        let w2 = if rng.gen_bool(0.5) { perturb(&g, p, &mut rng) } else { random_word(k, max_len, &mut rng) };
        let combinatorial = racg_equal(&g, &w2, p);
        let semantic = elem.semantically_equal(&SemiDirectElement::from_word(&w2, p), p);
        report.record(combinatorial == semantic, || Counterexample {
            check: "faithfulness".into(),
            omega: None,
            word: g.clone(),
            other: w2.clone(),
            result: vec![combinatorial as usize, semantic as usize],
        });
    }
    report
}

/// A permutation representation `Λ: F → Sym(points)` given by involutions
/// `λ_ω`, with base point `σ₀`.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct QuotientAction {
    pub points: usize,
    pub lambda: Vec<Perm>,
    pub base: usize,
}

impl QuotientAction {
    pub fn new(points: usize, lambda: Vec<Perm>, base: usize, p: &Poset) -> Result<Self, CoxeterError> {
        if lambda.len() != p.size() {
            return Err(CoxeterError::ActionSize { expected: p.size(), found: lambda.len() });
        }
        for (w, l) in lambda.iter().enumerate() {
            if l.len() != points || !crate::perm::is_involution(l) {
                return Err(CoxeterError::NotInvolution(w));
            }
        }
        if base >= points {
            return Err(CoxeterError::OutOfRange { element: base, size: points });
        }
        Ok(QuotientAction { points, lambda, base })
    }

    /// Random involutions (fixed points allowed) on `points` points.
    pub fn random<R: Rng>(p: &Poset, points: usize, rng: &mut R) -> Self {
        let lambda = (0..p.size())
            .map(|_| {
                let mut order: Vec<usize> = (0..points).collect();
                order.shuffle(rng);
                let mut perm = identity(points);
                for pair in order.chunks(2) {
                    if pair.len() == 2 && rng.gen_bool(0.8) {
                        perm[pair[0]] = pair[1] as u32;
                        perm[pair[1]] = pair[0] as u32;
                    }
                }
                perm
            })
            .collect();
        QuotientAction { points, lambda, base: 0 }
    }

    fn image(&self, w: &InvolutionWord) -> Perm {
        w.letters().iter().rev().fold(identity(self.points), |acc, &l| compose(&self.lambda[l], &acc))
    }
}

#[derive(Clone, Debug, Default, PartialEq, Eq, Serialize, Deserialize)]
pub struct QuotientReport {
    /// Number of states `(Λ∘ψ⁻¹ on generators, Λ(θ(g)))` reached.
    pub states: usize,
    pub complete: bool,
    /// Schreier generators of the state stabilizer, each verified to lie in
    /// `H ⋊ Ψ_H` with `H` the stabilizer of the base point.
    pub stabilizer_generators: usize,
    pub report: AlgebraReport,
}

/// Checks that `θ` descends to cosets: the stabilizer of the identity state
/// is generated by words `h` that lie in `H ⋊ Ψ_H`, and `θ(g h)·σ₀ = θ(g)·σ₀`
/// for random `g`.
///
/// `Ψ_H` membership is tested as `Λ∘ψ = Λ` on generators, which implies
/// `ψ(x)H = xH` for all `x`.
pub fn verify_quotient_action(
    p: &Poset,
    action: &QuotientAction,
    budget: usize,
    samples: usize,
    max_len: usize,
    seed: u64,
) -> QuotientReport {
    let k = p.size();
    type State = (Vec<Perm>, Perm);
    let start: State = (action.lambda.clone(), identity(action.points));
    let mut index: HashMap<State, usize> = HashMap::new();
    let mut states: Vec<State> = Vec::new();
    let mut words: Vec<Vec<usize>> = Vec::new();
    index.insert(start.clone(), 0);
    states.push(start);
    words.push(Vec::new());
    let mut queue = VecDeque::from([0usize]);
    let mut edges = Vec::new();
    let mut complete = true;
    while let Some(s) = queue.pop_front() {
        for w in 0..k {
            // State of g·s_ω from the state of g: a' = c(ω)∘a, c'(γ) = c(ω)c(γ)c(ω) for γ < ω.
            let (c, a) = &states[s];
            let cw = c[w].clone();
            let next_a = compose(&cw, a);
            let next_c: Vec<Perm> = (0..k)
                .map(|g| if p.less(g, w) { crate::perm::conjugate_by_involution(&cw, &c[g]) } else { c[g].clone() })
                .collect();
            let next = (next_c, next_a);
            let t = match index.get(&next) {
                Some(&t) => t,
                None => {
                    if states.len() >= budget {
                        complete = false;
                        continue;
                    }
                    let t = states.len();
                    index.insert(next.clone(), t);
                    states.push(next);
                    let mut word = words[s].clone();
                    word.push(w);
                    words.push(word);
                    queue.push_back(t);
                    t
                }
            };
            edges.push((s, w, t));
        }
    }

    let mut report = AlgebraReport::default();
    let mut generators = Vec::new();
    for &(s, w, t) in &edges {
        let mut h = words[s].clone();
        h.push(w);
        h.extend(words[t].iter().rev());
        let h = racg_normal_form(&h, p);
        if !h.is_empty() && !generators.contains(&h) {
            generators.push(h);
        }
    }
    for h in &generators {
        let elem = SemiDirectElement::from_word(h, p);
        let in_h = elem.x.act(&action.lambda, action.base) == action.base;
        let in_psi_h =
            (0..k).all(|g| action.image(&elem.psi.apply(&InvolutionWord::generator(g), p)) == action.lambda[g]);
        report.record(in_h && in_psi_h, || Counterexample {
            check: "stabilizer_in_W_H".into(),
            omega: None,
            word: h.clone(),
            other: vec![],
            result: vec![in_h as usize, in_psi_h as usize],
        });
    }
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    if !generators.is_empty() {
        for _ in 0..samples {
            let g = random_word(k, max_len, &mut rng);
            let h = &generators[rng.gen_range(0..generators.len())];
            let mut gh = g.clone();
            gh.extend_from_slice(h);
            let left = theta(&g, p).act(&action.lambda, action.base);
            let right = theta(&gh, p).act(&action.lambda, action.base);
            report.record(left == right, || Counterexample {
                check: "theta_descends".into(),
                omega: None,
                word: g.clone(),
                other: h.clone(),
                result: vec![left, right],
            });
        }
    }
    report.trials = samples;
    QuotientReport { states: states.len(), complete, stabilizer_generators: generators.len(), report }
}

/// Letter of the free group: generator index and exponent sign.
pub type SignedLetter = (usize, bool);

fn free_reduce(letters: &[SignedLetter]) -> Vec<SignedLetter> {
    let mut out: Vec<SignedLetter> = Vec::with_capacity(letters.len());
    for &(g, inv) in letters {
        if out.last() == Some(&(g, !inv)) {
            out.pop();
        } else {
            out.push((g, inv));
        }
    }
    out
}

fn free_inverse(w: &[SignedLetter]) -> Vec<SignedLetter> {
    w.iter().rev().map(|&(g, inv)| (g, !inv)).collect()
}

/// `φ_ω^{±1}` on the free group: `x_γ ↦ x_ω^{±1} x_γ x_ω^{∓1}` for `γ < ω`.
fn free_apply_generator(omega: SignedLetter, w: &[SignedLetter], p: &Poset) -> Vec<SignedLetter> {
    let (o, inv) = omega;
    let mut out = Vec::with_capacity(w.len());
    for &(g, e) in w {
        if p.less(g, o) {
            let conj = [(o, inv), (g, false), (o, !inv)];
            let piece = if e { free_inverse(&conj) } else { conj.to_vec() };
            out.extend(piece);
        } else {
            out.push((g, e));
        }
    }
    free_reduce(&out)
}

/// Element `φ·x` of `𝔽 ⋊ Aut(𝔽)` with `φ` a word in the `φ_ω^{±1}`.
#[derive(Clone, Debug, Default, PartialEq, Eq)]
pub struct FreeElement {
    pub phi: Vec<SignedLetter>,
    pub x: Vec<SignedLetter>,
}

impl FreeElement {
    /// `y_ω = x_ω⁻¹ φ_ω = φ_ω x_ω⁻¹`.
    pub fn y(omega: usize) -> Self {
        FreeElement { phi: vec![(omega, false)], x: vec![(omega, true)] }
    }

    fn apply_phi(phi: &[SignedLetter], w: &[SignedLetter], p: &Poset) -> Vec<SignedLetter> {
        phi.iter().rev().fold(w.to_vec(), |acc, &l| free_apply_generator(l, &acc, p))
    }

    pub fn multiply(&self, other: &FreeElement, p: &Poset) -> Self {
        let mut x = Self::apply_phi(&free_inverse(&other.phi), &self.x, p);
        x.extend_from_slice(&other.x);
        let mut phi = self.phi.clone();
        phi.extend_from_slice(&other.phi);
        FreeElement { phi: free_reduce(&phi), x: free_reduce(&x) }
    }

    pub fn inverse(&self, p: &Poset) -> Self {
        // (φx)⁻¹ = x⁻¹φ⁻¹ = φ⁻¹·φ(x⁻¹)
        let x = Self::apply_phi(&self.phi, &free_inverse(&self.x), p);
        FreeElement { phi: free_inverse(&self.phi), x }
    }

    pub fn semantically_equal(&self, other: &FreeElement, p: &Poset) -> bool {
        self.x == other.x
            && (0..p.size())
                .all(|g| Self::apply_phi(&self.phi, &[(g, false)], p) == Self::apply_phi(&other.phi, &[(g, false)], p))
    }

    pub fn is_identity(&self, p: &Poset) -> bool {
        self.semantically_equal(&FreeElement::default(), p)
    }
}

/// Right-angled Artin variant: `y_a y_b = y_b y_a` for comparable pairs,
/// nontrivial commutators for sampled incomparable pairs, and `y_ω^k ≠ 1`.
pub fn verify_artin(p: &Poset, trials: usize, seed: u64) -> AlgebraReport {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let mut report = AlgebraReport { trials, ..Default::default() };
    let k = p.size();
    if k == 0 {
        return report;
    }
    for _ in 0..trials {
        let a = rng.gen_range(0..k);
        let b = rng.gen_range(0..k);
        if a == b {
            let ya = FreeElement::y(a);
            let mut power = FreeElement::default();
            for e in 1..=8usize {
                power = power.multiply(&ya, p);
                report.record(!power.is_identity(p), || Counterexample {
                    check: "infinite_order".into(),
                    omega: Some(a),
                    word: vec![a; e],
                    other: vec![],
                    result: vec![],
                });
            }
            continue;
        }
        let ya = FreeElement::y(a);
        let yb = FreeElement::y(b);
        let comm = ya.multiply(&yb, p).multiply(&ya.inverse(p), p).multiply(&yb.inverse(p), p);
        let trivial = comm.is_identity(p);
        let expected = p.comparable(a, b);
        report.record(trivial == expected, || Counterexample {
            check: if expected { "comparable_commute" } else { "incomparable_noncommute" }.into(),
            omega: Some(a),
            word: vec![a, b],
            other: vec![b, a],
            result: comm.x.iter().map(|&(g, _)| g).collect(),
        });
    }
    report
}

#[cfg(test)]
mod tests {
    use super::*;

    fn two_chain() -> Poset {
        Poset::new(2, &[(0, 1)]).unwrap()
    }

    #[test]
    fn reduce_examples() {
        assert!(reduce(&[0, 0]).is_empty());
        assert!(reduce(&[0, 1, 1, 0]).is_empty());
        assert_eq!(reduce(&[0, 1, 0]), vec![0, 1, 0]);
    }

    #[test]
    fn poset_closure_and_cycles() {
        let p = Poset::new(3, &[(0, 1), (1, 2)]).unwrap();
        assert!(p.less(0, 2));
        assert!(!p.less(2, 0));
        assert_eq!(Poset::new(2, &[(0, 1), (1, 0)]), Err(CoxeterError::Cycle(0)));
    }

    #[test]
    fn psi_examples() {
        let p = Poset::new(3, &[(0, 2)]).unwrap();
        assert_eq!(apply_psi(2, &InvolutionWord::generator(0), &p).letters(), &[2, 0, 2]);
        assert_eq!(apply_psi(2, &InvolutionWord::generator(1), &p).letters(), &[1]);
        assert_eq!(apply_psi(2, &InvolutionWord::new(vec![0, 1]), &p).letters(), &[2, 0, 2, 1]);
    }

    #[test]
    fn multiply_examples() {
        let p = two_chain();
        let ss = SemiDirectElement::s(0).multiply(&SemiDirectElement::s(0), &p);
        assert!(ss.semantically_equal(&SemiDirectElement::identity(), &p));
        let ab = SemiDirectElement::from_word(&[0, 1], &p);
        let ba = SemiDirectElement::from_word(&[1, 0], &p);
        assert!(ab.semantically_equal(&ba, &p));

        let q = Poset::antichain(2);
        let ab = SemiDirectElement::from_word(&[0, 1], &q);
        let ba = SemiDirectElement::from_word(&[1, 0], &q);
        assert_eq!(ab.x.letters(), &[0, 1]);
        assert_eq!(ba.x.letters(), &[1, 0]);
        assert!(!ab.semantically_equal(&ba, &q));
    }

    #[test]
    fn theta_examples() {
        let p = two_chain();
        assert_eq!(theta(&[0], &p).letters(), &[0]);
        assert_eq!(theta(&[0, 1], &p).letters(), &[1, 0]);
        let q = Poset::antichain(2);
        assert_eq!(theta(&[0, 1], &q).letters(), &[0, 1]);
        // θ(s_a s_b)·θ(s_b)⁻¹ = x_b x_a x_b with y = x_b above a.
        let z = theta(&[0, 1], &p).concat(&theta(&[1], &p).inverse());
        assert_eq!(z.letters(), &[1, 0, 1]);
        assert_eq!(z.conjugate_center(&p), Some(0));
    }

    #[test]
    fn racg_examples() {
        let p = two_chain();
        assert!(racg_equal(&[0, 1, 0], &[1], &p));
        let q = Poset::antichain(2);
        assert!(!racg_equal(&[0, 1], &[1, 0], &q));
        let w = [0, 1, 1, 0, 1];
        let mut ww = w.to_vec();
        ww.extend(w.iter().rev());
        assert!(racg_equal(&ww, &[], &q));
    }

    #[test]
    fn antichain_and_chain_pass() {
        assert!(verify_section4(&Poset::antichain(4), 100, 10, 1).passed());
        assert!(verify_section4(&Poset::chain(4), 100, 10, 2).passed());
    }

    #[test]
    fn artin_examples() {
        assert!(verify_artin(&two_chain(), 50, 0).passed());
        assert!(verify_artin(&Poset::antichain(3), 50, 0).passed());
    }

    #[test]
    fn quotient_hook_on_small_action() {
        let p = Poset::new(3, &[(0, 2)]).unwrap();
        let lambda = vec![vec![1, 0, 3, 2], vec![2, 3, 0, 1], vec![3, 2, 1, 0]];
        let action = QuotientAction::new(4, lambda, 0, &p).unwrap();
        let r = verify_quotient_action(&p, &action, 10_000, 200, 10, 5);
        assert!(r.complete);
        assert!(r.report.passed(), "{:?}", r.report.counterexamples);
        assert!(r.stabilizer_generators > 0);
    }
}
