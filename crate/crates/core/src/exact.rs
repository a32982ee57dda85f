//! Exact determinant signs over the integers and rationals.

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{Signed, Zero};

/// Sign of the determinant of a square integer matrix (fraction-free Bareiss).
pub fn det_sign_i64(rows: &[Vec<i64>]) -> i8 {
    let m: Vec<Vec<BigInt>> = rows.iter().map(|r| r.iter().map(|&x| BigInt::from(x)).collect()).collect();
    det_sign_bigint(m)
}

pub fn det_sign_bigint(mut m: Vec<Vec<BigInt>>) -> i8 {
    let n = m.len();
    let mut sign = 1i8;
    let mut prev = BigInt::from(1);
    for k in 0..n {
        if m[k][k].is_zero() {
            let Some(swap) = (k + 1..n).find(|&i| !m[i][k].is_zero()) else {
                return 0;
            };
            m.swap(k, swap);
            sign = -sign;
        }
        for i in k + 1..n {
            for j in k + 1..n {
                let v = &m[i][j] * &m[k][k] - &m[i][k] * &m[k][j];
                m[i][j] = v / &prev;
            }
        }
        prev = m[k][k].clone();
    }
    let last = &m[n - 1][n - 1];
    if last.is_zero() {
        0
    } else if last.is_positive() {
        sign
    } else {
        -sign
    }
}

/// Sign of the determinant of a rational matrix; rows are cleared of
/// denominators first (positive row scaling keeps the sign).
pub fn det_sign_rational(rows: &[Vec<BigRational>]) -> i8 {
    let m = rows
        .iter()
        .map(|r| {
            let l = r.iter().fold(BigInt::from(1), |acc, x| num_integer_lcm(&acc, x.denom()));
            r.iter().map(|x| (x * BigRational::from_integer(l.clone())).to_integer()).collect()
        })
        .collect();
    det_sign_bigint(m)
}

fn num_integer_lcm(a: &BigInt, b: &BigInt) -> BigInt {
    let g = gcd(a.clone(), b.clone());
    (a / &g) * b
}

fn gcd(mut a: BigInt, mut b: BigInt) -> BigInt {
    a = a.abs();
    b = b.abs();
    while !b.is_zero() {
        let r = &a % &b;
        a = b;
        b = r;
    }
    a
}

/// Solve `m x = b` exactly; `None` when singular.
pub fn solve_rational(m: &[Vec<BigRational>], b: &[BigRational]) -> Option<Vec<BigRational>> {
    let n = m.len();
    let mut a: Vec<Vec<BigRational>> = m
        .iter()
        .zip(b)
        .map(|(row, bi)| {
            let mut r = row.clone();
            r.push(bi.clone());
            r
        })
        .collect();
    for col in 0..n {
        let pivot = (col..n).find(|&r| !a[r][col].is_zero())?;
        a.swap(col, pivot);
        let p = a[col][col].clone();
        for j in col..=n {
            a[col][j] = &a[col][j] / &p;
        }
        for r in 0..n {
            if r != col && !a[r][col].is_zero() {
                let f = a[r][col].clone();
                for j in col..=n {
                    let v = &a[col][j] * &f;
                    a[r][j] = &a[r][j] - v;
                }
            }
        }
    }
    Some(a.into_iter().map(|r| r[n].clone()).collect())
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn small_determinants() {
        assert_eq!(det_sign_i64(&[vec![1, 0], vec![0, 1]]), 1);
        assert_eq!(det_sign_i64(&[vec![0, 1], vec![1, 0]]), -1);
        assert_eq!(det_sign_i64(&[vec![1, 2], vec![2, 4]]), 0);
        assert_eq!(det_sign_i64(&[vec![2, -1, 0], vec![-1, 2, -1], vec![0, -1, 2]]), 1);
        assert_eq!(det_sign_i64(&[vec![0, 0, 1], vec![0, 1, 0], vec![1, 0, 0]]), -1);
    }

    #[test]
    fn rational_solve() {
        let r = |n: i64, d: i64| BigRational::new(n.into(), d.into());
        let m = vec![vec![r(1, 2), r(1, 1)], vec![r(0, 1), r(3, 1)]];
        let x = solve_rational(&m, &[r(1, 1), r(1, 1)]).unwrap();
        assert_eq!(x, vec![r(4, 3), r(1, 3)]);
    }
}
