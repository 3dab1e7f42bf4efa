//! Exact integer elimination.
//!
//! Everything here is fraction-free: each division is exact, and every
//! intermediate value is a minor of the input. The kernels are generic over
//! [`ExactInt`] so the hot paths can run in machine integers and fall back to
//! [`BigInt`] when a value leaves the `i64` range.

use num_bigint::BigInt;
use num_traits::{One, Signed, Zero};

use crate::matrix::IntMatrix;

/// Integer arithmetic for fraction-free elimination. Operations return `None`
/// when the result does not fit the representation.
pub trait ExactInt: Clone + std::fmt::Debug + PartialEq + Send + Sync {
    fn from_i64(v: i64) -> Self;
    fn is_zero(&self) -> bool;
    fn signum(&self) -> i8;
    /// `(a*b - c*d) / e`, where the division is known to be exact.
    fn cross_div(a: &Self, b: &Self, c: &Self, d: &Self, e: &Self) -> Option<Self>;
    /// `a*b` accumulated onto `acc`.
    fn mul_add(acc: &Self, a: &Self, b: &Self) -> Option<Self>;
    fn neg(&self) -> Option<Self>;
    fn to_bigint(&self) -> BigInt;
}

impl ExactInt for i64 {
    #[inline]
    fn from_i64(v: i64) -> Self {
        v
    }

    #[inline]
    fn is_zero(&self) -> bool {
        *self == 0
    }

    #[inline]
    fn signum(&self) -> i8 {
        i64::signum(*self) as i8
    }

    #[inline]
    fn cross_div(a: &i64, b: &i64, c: &i64, d: &i64, e: &i64) -> Option<i64> {
        let num = (*a as i128 * *b as i128).checked_sub(*c as i128 * *d as i128)?;
        let q = if *e == 1 { num } else { num / *e as i128 };
        i64::try_from(q).ok()
    }

    #[inline]
    fn mul_add(acc: &i64, a: &i64, b: &i64) -> Option<i64> {
        acc.checked_add(a.checked_mul(*b)?)
    }

    #[inline]
    fn neg(&self) -> Option<i64> {
        self.checked_neg()
    }

    fn to_bigint(&self) -> BigInt {
        BigInt::from(*self)
    }
}

impl ExactInt for BigInt {
    fn from_i64(v: i64) -> Self {
        BigInt::from(v)
    }

    fn is_zero(&self) -> bool {
        Zero::is_zero(self)
    }

    fn signum(&self) -> i8 {
        if Signed::is_positive(self) {
            1
        } else if Signed::is_negative(self) {
            -1
        } else {
            0
        }
    }

    fn cross_div(a: &BigInt, b: &BigInt, c: &BigInt, d: &BigInt, e: &BigInt) -> Option<BigInt> {
        let num = a * b - c * d;
        Some(if e.is_one() { num } else { num / e })
    }

    fn mul_add(acc: &BigInt, a: &BigInt, b: &BigInt) -> Option<BigInt> {
        Some(acc + a * b)
    }

    fn neg(&self) -> Option<BigInt> {
        Some(-self)
    }

    fn to_bigint(&self) -> BigInt {
        self.clone()
    }
}

fn load<T: ExactInt>(m: &IntMatrix) -> Vec<Vec<T>> {
    m.row_iter()
        .map(|row| row.iter().map(|&v| T::from_i64(v)).collect())
        .collect()
}

/// Bareiss determinant with row pivoting.
pub fn bareiss_det<T: ExactInt>(m: &IntMatrix) -> Option<T> {
    assert_eq!(m.rows(), m.cols(), "determinant of a non-square matrix");
    let n = m.rows();
    let mut a: Vec<Vec<T>> = load(m);
    let mut prev = T::from_i64(1);
    let mut negate = false;
    for k in 0..n {
        let Some(p) = (k..n).find(|&i| !a[i][k].is_zero()) else {
            return Some(T::from_i64(0));
        };
        if p != k {
            a.swap(p, k);
            negate = !negate;
        }
        for i in k + 1..n {
            for j in k + 1..n {
                a[i][j] = T::cross_div(&a[k][k], &a[i][j], &a[i][k], &a[k][j], &prev)?;
            }
        }
        prev = a[k][k].clone();
    }
    let det = if n == 0 { T::from_i64(1) } else { prev };
    if negate {
        det.neg()
    } else {
        Some(det)
    }
}

/// Exact determinant of a square integer matrix.
pub fn exact_det(m: &IntMatrix) -> BigInt {
    match bareiss_det::<i64>(m) {
        Some(d) => BigInt::from(d),
        None => bareiss_det::<BigInt>(m).expect("bigint arithmetic does not overflow"),
    }
}

/// The vector `d` of signed maximal minors of an `r x (r+1)` matrix:
/// `d_k = (-1)^k det(M without column k)` (0-based `k`).
///
/// One fraction-free Gauss-Jordan pass finds the pivot columns. When the rank
/// is `r` there is a single free column `f`; the reduced matrix is `D·I` on
/// the pivot columns with `D` the determinant of the pivot block, and the
/// minors are read off column `f` (Cramer's rule). A rank drop makes every
/// maximal minor vanish.
pub fn signed_maximal_minors<T: ExactInt>(m: &IntMatrix) -> Option<Vec<T>> {
    let rows = m.rows();
    let cols = m.cols();
    assert_eq!(cols, rows + 1, "maximal minors need an r x (r+1) matrix");
    let mut a: Vec<Vec<T>> = load(m);
    let mut prev = T::from_i64(1);
    let mut negate = false;
    let mut pivot_cols = Vec::with_capacity(rows);
    let mut free = None;

    for col in 0..cols {
        let row = pivot_cols.len();
        let found = if row < rows {
            (row..rows).find(|&i| !a[i][col].is_zero())
        } else {
            None
        };
        let Some(p) = found else {
            if free.is_some() {
                return Some(vec![T::from_i64(0); cols]);
            }
            free = Some(col);
            continue;
        };
        if p != row {
            a.swap(p, row);
            negate = !negate;
        }
        let piv = a[row][col].clone();
        for i in (0..rows).filter(|&i| i != row) {
            let factor = a[i][col].clone();
            // reads the pivot row while writing row i
            #[allow(clippy::needless_range_loop)]
            for k in col + 1..cols {
                a[i][k] = T::cross_div(&piv, &a[i][k], &factor, &a[row][k], &prev)?;
            }
            if let Some(f) = free {
                a[i][f] = T::cross_div(&piv, &a[i][f], &factor, &a[row][f], &prev)?;
            }
            a[i][col] = T::from_i64(0);
        }
        prev = piv;
        pivot_cols.push(col);
    }

    let free = free.expect("an r x (r+1) matrix has a free column");
    // d_f = (-1)^f det(M_f), and det(M_f) = ±D with the sign of the row swaps.
    let flip = negate ^ (free % 2 == 1);
    let mut d = vec![T::from_i64(0); cols];
    d[free] = if flip { prev.neg()? } else { prev };
    for (i, &pc) in pivot_cols.iter().enumerate() {
        // nullspace: D x_pc + a[i][f] x_f = 0 with x_f = D
        d[pc] = if flip {
            a[i][free].clone()
        } else {
            a[i][free].neg()?
        };
    }
    Some(d)
}

/// [`signed_maximal_minors`] in machine integers when possible.
pub fn signed_minors_exact(m: &IntMatrix) -> Vec<BigInt> {
    match signed_maximal_minors::<i64>(m) {
        Some(d) => d.into_iter().map(BigInt::from).collect(),
        None => signed_maximal_minors::<BigInt>(m).expect("bigint arithmetic does not overflow"),
    }
}

/// The same vector computed as `n` independent determinants.
pub fn signed_minors_by_determinants(m: &IntMatrix) -> Vec<BigInt> {
    (0..m.cols())
        .map(|k| {
            let det = exact_det(&m.without_column(k));
            if k % 2 == 0 {
                det
            } else {
                -det
            }
        })
        .collect()
}

#[cfg(test)]
mod tests {
    use super::*;
    use proptest::prelude::*;

    // Leibniz expansion over all permutations; fine up to 6x6.
    fn leibniz(m: &IntMatrix) -> i128 {
        fn rec(m: &IntMatrix, row: usize, used: &mut Vec<bool>, sign: i128, acc: i128) -> i128 {
            let n = m.rows();
            if row == n {
                return sign * acc;
            }
            let mut total = 0;
            let mut inversions_before = 0;
            for c in 0..n {
                if used[c] {
                    continue;
                }
                let v = m.get(row, c) as i128;
                let s = if inversions_before % 2 == 0 {
                    sign
                } else {
                    -sign
                };
                inversions_before += 1;
                if v != 0 {
                    used[c] = true;
                    total += rec(m, row + 1, used, s, acc * v);
                    used[c] = false;
                }
            }
            total
        }
        rec(m, 0, &mut vec![false; m.rows()], 1, 1)
    }

    fn matrix(rows: usize, cols: usize, lo: i64, hi: i64) -> impl Strategy<Value = IntMatrix> {
        proptest::collection::vec(lo..=hi, rows * cols).prop_map(move |data| {
            IntMatrix::from_rows(data.chunks(cols.max(1)).map(<[i64]>::to_vec).collect())
                .unwrap_or_else(|_| IntMatrix::zeros(rows, cols))
        })
    }

    #[test]
    fn identity_and_repeated_row() {
        let mut id = IntMatrix::zeros(5, 5);
        for i in 0..5 {
            id.set(i, i, 1);
        }
        assert_eq!(exact_det(&id), BigInt::from(1));
        let rep = IntMatrix::from_rows(vec![vec![1, 2, 3], vec![4, 5, 6], vec![1, 2, 3]]).unwrap();
        assert_eq!(exact_det(&rep), BigInt::from(0));
    }

    #[test]
    fn empty_matrix_has_determinant_one() {
        assert_eq!(exact_det(&IntMatrix::zeros(0, 0)), BigInt::from(1));
        let d = signed_minors_exact(&IntMatrix::zeros(0, 1));
        assert_eq!(d, vec![BigInt::from(1)]);
    }

    #[test]
    fn fallback_to_bigint_on_overflow() {
        let big = 3_000_000_000i64;
        let m =
            IntMatrix::from_rows(vec![vec![big, 1, 0], vec![0, big, 1], vec![1, 0, big]]).unwrap();
        assert!(bareiss_det::<i64>(&m).is_none());
        let b = BigInt::from(big);
        assert_eq!(exact_det(&m), &b * &b * &b + 1);
    }

    #[test]
    fn minors_of_a_small_known_matrix() {
        // [[1,2,3],[4,5,6]]: d = (det[[2,3],[5,6]], -det[[1,3],[4,6]], det[[1,2],[4,5]])
        let m = IntMatrix::from_rows(vec![vec![1, 2, 3], vec![4, 5, 6]]).unwrap();
        let d = signed_minors_exact(&m);
        assert_eq!(d, [-3, 6, -3].map(BigInt::from).to_vec());
    }

    proptest! {
        #[test]
        fn bareiss_matches_leibniz(m in (1usize..=6).prop_flat_map(|n| matrix(n, n, -3, 3))) {
            prop_assert_eq!(exact_det(&m), BigInt::from(leibniz(&m)));
        }

        #[test]
        fn one_pass_minors_match_independent_determinants(
            m in (1usize..=7).prop_flat_map(|r| matrix(r, r + 1, -2, 2))
        ) {
            prop_assert_eq!(signed_minors_exact(&m), signed_minors_by_determinants(&m));
        }

        #[test]
        fn minors_annihilate_rows(m in (1usize..=8).prop_flat_map(|r| matrix(r, r + 1, -3, 3))) {
            let d = signed_minors_exact(&m);
            for row in m.row_iter() {
                let dot: BigInt = row.iter().zip(&d).map(|(&a, b)| BigInt::from(a) * b).sum();
                prop_assert!(Zero::is_zero(&dot));
            }
        }

        #[test]
        fn determinant_is_multiplicative(
            (a, b) in (1usize..=5).prop_flat_map(|n| (matrix(n, n, -3, 3), matrix(n, n, -3, 3)))
        ) {
            let ab = a.mul(&b).unwrap();
            prop_assert_eq!(exact_det(&ab), exact_det(&a) * exact_det(&b));
        }
    }
}
