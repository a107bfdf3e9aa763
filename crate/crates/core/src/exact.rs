//! Exact integer matrix helpers: fraction-free determinants and products.

use num_bigint::BigInt;
use num_traits::{Signed, Zero};

pub type IntMatrix = Vec<Vec<i64>>;

pub fn identity_matrix(n: usize) -> IntMatrix {
    (0..n).map(|i| (0..n).map(|j| i64::from(i == j)).collect()).collect()
}

/// Matrix product, `None` on overflow.
pub fn mat_mul(a: &IntMatrix, b: &IntMatrix) -> Option<IntMatrix> {
    let inner = b.len();
    let cols = b.first().map_or(0, Vec::len);
    a.iter()
        .map(|row| {
            debug_assert_eq!(row.len(), inner);
            (0..cols)
                .map(|j| {
                    row.iter()
                        .zip(b)
                        .try_fold(0i64, |acc, (&x, brow)| acc.checked_add(x.checked_mul(brow[j])?))
                })
                .collect()
        })
        .collect()
}

pub fn mat_vec(a: &IntMatrix, v: &[i64]) -> Option<Vec<i64>> {
    a.iter()
        .map(|row| row.iter().zip(v).try_fold(0i64, |acc, (&x, &y)| acc.checked_add(x.checked_mul(y)?)))
        .collect()
}

/// Bareiss elimination in `i128`; `None` if an intermediate overflows.
fn bareiss_i128(m: &[Vec<i64>]) -> Option<i128> {
    let n = m.len();
    if n == 0 {
        return Some(1);
    }
    let mut a: Vec<Vec<i128>> = m.iter().map(|r| r.iter().map(|&x| i128::from(x)).collect()).collect();
    let mut sign = 1i128;
    let mut prev = 1i128;
    for k in 0..n - 1 {
        if a[k][k] == 0 {
            let Some(p) = (k + 1..n).find(|&r| a[r][k] != 0) else {
                return Some(0);
            };
            a.swap(k, p);
            sign = -sign;
        }
        for i in k + 1..n {
            for j in k + 1..n {
                let t = a[i][j].checked_mul(a[k][k])?.checked_sub(a[i][k].checked_mul(a[k][j])?)?;
                a[i][j] = t / prev;
            }
        }
        prev = a[k][k];
    }
    a[n - 1][n - 1].checked_mul(sign)
}

fn bareiss_big(m: &[Vec<i64>]) -> BigInt {
    let n = m.len();
    if n == 0 {
        return BigInt::from(1);
    }
    let mut a: Vec<Vec<BigInt>> = m.iter().map(|r| r.iter().map(|&x| BigInt::from(x)).collect()).collect();
    let mut negate = false;
    let mut prev = BigInt::from(1);
    for k in 0..n - 1 {
        if a[k][k].is_zero() {
            let Some(p) = (k + 1..n).find(|&r| !a[r][k].is_zero()) else {
                return BigInt::zero();
            };
            a.swap(k, p);
            negate = !negate;
        }
        for i in k + 1..n {
            for j in k + 1..n {
                let t = &a[i][j] * &a[k][k] - &a[i][k] * &a[k][j];
                a[i][j] = t / &prev;
            }
        }
        prev = a[k][k].clone();
    }
    let d = a[n - 1][n - 1].clone();
    if negate {
        -d
    } else {
        d
    }
}

/// Exact determinant of a square integer matrix.
pub fn determinant(m: &[Vec<i64>]) -> BigInt {
    debug_assert!(m.iter().all(|r| r.len() == m.len()));
    match bareiss_i128(m) {
        Some(d) => BigInt::from(d),
        None => bareiss_big(m),
    }
}

/// Sign of the determinant: -1, 0 or 1.
pub fn determinant_sign(m: &[Vec<i64>]) -> i8 {
    let d = determinant(m);
    if d.is_zero() {
        0
    } else if d.is_positive() {
        1
    } else {
        -1
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use itertools::Itertools;
    use proptest::prelude::*;

    /// Leibniz expansion over all permutations.
    fn leibniz(m: &[Vec<i64>]) -> BigInt {
        let n = m.len();
        (0..n)
            .permutations(n)
            .map(|p| {
                let inversions = (0..n).tuple_combinations().filter(|&(i, j)| p[i] > p[j]).count();
                let term = (0..n).fold(BigInt::from(1), |acc, i| acc * m[i][p[i]]);
                if inversions % 2 == 0 {
                    term
                } else {
                    -term
                }
            })
            .sum()
    }

    #[test]
    fn small_determinants() {
        assert_eq!(determinant(&[]), BigInt::from(1));
        assert_eq!(determinant(&identity_matrix(4)), BigInt::from(1));
        assert_eq!(determinant(&[vec![0, 1], vec![1, 0]]), BigInt::from(-1));
        assert_eq!(determinant(&[vec![2, 4], vec![1, 2]]), BigInt::zero());
        assert_eq!(determinant_sign(&[vec![0, -1], vec![1, -1]]), 1);
    }

    #[test]
    fn overflow_falls_back_to_bignum() {
        let big = i64::MAX / 2;
        let m = vec![vec![big, 1, 3], vec![-7, big, 2], vec![5, 9, big]];
        assert_eq!(determinant(&m), leibniz(&m));
    }

    #[test]
    fn products() {
        let a = vec![vec![1, 2], vec![3, 4]];
        assert_eq!(mat_mul(&a, &identity_matrix(2)), Some(a.clone()));
        assert_eq!(mat_vec(&a, &[1, -1]), Some(vec![-1, -1]));
        assert_eq!(mat_mul(&vec![vec![i64::MAX]], &vec![vec![2]]), None);
    }

    proptest! {
        #[test]
        fn bareiss_matches_leibniz(n in 1usize..6, entries in prop::collection::vec(-1_000_000i64..=1_000_000, 36)) {
            let m: Vec<Vec<i64>> = (0..n).map(|i| entries[i * 6..i * 6 + n].to_vec()).collect();
            prop_assert_eq!(determinant(&m), leibniz(&m));
        }
    }
}
