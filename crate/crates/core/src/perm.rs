//! Small permutation helpers shared by the group-action code.

/// A permutation of `0..len` stored as its image array.
pub type Perm = Vec<u32>;

pub fn identity(len: usize) -> Perm {
    (0..len as u32).collect()
}

/// `(p ∘ q)(i) = p(q(i))`.
pub fn compose(p: &[u32], q: &[u32]) -> Perm {
    q.iter().map(|&i| p[i as usize]).collect()
}

/// `p ∘ q ∘ p`, the conjugate of `q` by the involution `p`.
pub fn conjugate_by_involution(p: &[u32], q: &[u32]) -> Perm {
    p.iter().map(|&pi| p[q[pi as usize] as usize]).collect()
}

pub fn is_involution(p: &[u32]) -> bool {
    p.iter().enumerate().all(|(i, &j)| p[j as usize] as usize == i)
}

/// Parity (+1 / -1) of the sequence of distinct values, measured against its
/// sorted order.
pub fn sequence_sign<T: Ord>(seq: &[T]) -> i8 {
    let mut inversions = 0usize;
    for i in 0..seq.len() {
        for j in i + 1..seq.len() {
            if seq[i] > seq[j] {
                inversions += 1;
            }
        }
    }
    if inversions.is_multiple_of(2) {
        1
    } else {
        -1
    }
}

/// All permutations of `items` in lexicographic order of positions.
pub fn permutations<T: Clone>(items: &[T]) -> Vec<Vec<T>> {
    fn rec<T: Clone>(rest: &mut Vec<T>, acc: &mut Vec<T>, out: &mut Vec<Vec<T>>) {
        if rest.is_empty() {
            out.push(acc.clone());
            return;
        }
        for i in 0..rest.len() {
            let x = rest.remove(i);
            acc.push(x.clone());
            rec(rest, acc, out);
            acc.pop();
            rest.insert(i, x);
        }
    }
    let mut out = Vec::new();
    rec(&mut items.to_vec(), &mut Vec::new(), &mut out);
    out
}
