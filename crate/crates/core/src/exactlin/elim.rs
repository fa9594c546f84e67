use num_bigint::BigInt;
use num_integer::Integer;
use num_traits::{One, Zero};

use super::matrix::Matrix;
use super::rational::Rational;
use crate::{Error, Result};

/// Scales every row by the lcm of its denominators. Row scaling by nonzero
/// integers preserves the row space, so rank and kernel are unchanged.
fn integer_rows(m: &Matrix) -> (Vec<Vec<BigInt>>, Vec<BigInt>) {
    let mut rows = Vec::with_capacity(m.rows());
    let mut scales = Vec::with_capacity(m.rows());
    for i in 0..m.rows() {
        let row = m.row(i);
        let l = row
            .iter()
            .fold(BigInt::one(), |acc, x| acc.lcm(x.denom()));
        rows.push(
            row.iter()
                .map(|x| x.numer() * (&l / x.denom()))
                .collect::<Vec<_>>(),
        );
        scales.push(l);
    }
    (rows, scales)
}

/// Bareiss fraction-free forward elimination, pivoting only in the first
/// `pivot_limit` columns. Rows are permuted in place so that pivot row `r`
/// holds the pivot for `pivots[r]`. Entries below each pivot become zero.
fn bareiss(rows: &mut [Vec<BigInt>], pivot_limit: usize) -> Vec<usize> {
    let m = rows.len();
    let n = rows.first().map_or(0, Vec::len);
    let mut pivots = Vec::new();
    let mut prev = BigInt::one();
    let mut r = 0;
    for c in 0..pivot_limit.min(n) {
        if r == m {
            break;
        }
        let Some(p) = (r..m).find(|&i| !rows[i][c].is_zero()) else {
            continue;
        };
        rows.swap(r, p);
        let (head, tail) = rows.split_at_mut(r + 1);
        let pivot_row = &head[r];
        let pv = &pivot_row[c];
        for row in tail.iter_mut() {
            let factor = row[c].clone();
            for j in c + 1..n {
                let num = pv * &row[j] - &factor * &pivot_row[j];
                let (q, rem) = num.div_rem(&prev);
                debug_assert!(rem.is_zero(), "Bareiss division must be exact");
                row[j] = q;
            }
            row[c] = BigInt::zero();
        }
        prev = pv.clone();
        pivots.push(c);
        r += 1;
    }
    pivots
}

/// Solves the echelon system for one free column, returning the kernel vector
/// with `v[free] = 1` and all other free coordinates zero.
fn back_substitute(
    rows: &[Vec<BigInt>],
    pivots: &[usize],
    n: usize,
    rhs: impl Fn(usize) -> Rational,
    free: Option<usize>,
) -> Vec<Rational> {
    let mut v = vec![Rational::zero(); n];
    if let Some(f) = free {
        v[f] = Rational::one();
    }
    for (r, &c) in pivots.iter().enumerate().rev() {
        let mut acc = rhs(r);
        for j in c + 1..n {
            if !rows[r][j].is_zero() && !v[j].is_zero() {
                acc -= Rational::from_integer(rows[r][j].clone()) * &v[j];
            }
        }
        v[c] = acc / Rational::from_integer(rows[r][c].clone());
    }
    v
}

/// Exact rank.
pub fn rank(m: &Matrix) -> usize {
    if m.rows() == 0 || m.cols() == 0 {
        return 0;
    }
    let (mut rows, _) = integer_rows(m);
    bareiss(&mut rows, m.cols()).len()
}

/// Indices of the pivot columns of the row echelon form: the lexicographically
/// first set of linearly independent columns.
pub fn pivot_columns(m: &Matrix) -> Vec<usize> {
    if m.rows() == 0 || m.cols() == 0 {
        return Vec::new();
    }
    let (mut rows, _) = integer_rows(m);
    bareiss(&mut rows, m.cols())
}

/// Basis of `ker M`, one vector per non-pivot column.
pub fn kernel_basis(m: &Matrix) -> Vec<Vec<Rational>> {
    let n = m.cols();
    if m.rows() == 0 {
        return (0..n)
            .map(|f| {
                let mut v = vec![Rational::zero(); n];
                v[f] = Rational::one();
                v
            })
            .collect();
    }
    let (mut rows, _) = integer_rows(m);
    let pivots = bareiss(&mut rows, n);
    let mut is_pivot = vec![false; n];
    for &c in &pivots {
        is_pivot[c] = true;
    }
    (0..n)
        .filter(|&f| !is_pivot[f])
        .map(|f| back_substitute(&rows, &pivots, n, |_| Rational::zero(), Some(f)))
        .collect()
}

/// `cols(M) × nullity` matrix whose columns span `ker M`.
pub fn kernel_matrix(m: &Matrix) -> Matrix {
    let basis = kernel_basis(m);
    Matrix::from_columns(m.cols(), &basis).expect("kernel vectors have matching length")
}

/// Exact inverse, `None` when singular. Errors on non-square input.
pub fn invert(m: &Matrix) -> Result<Option<Matrix>> {
    if !m.is_square() {
        return Err(Error::dim(format!(
            "cannot invert a {}x{} matrix",
            m.rows(),
            m.cols()
        )));
    }
    let n = m.rows();
    if n == 0 {
        return Ok(Some(Matrix::zeros(0, 0)));
    }
    // S·M is integral; solve (S·M)·X = I by elimination on [S·M | I],
    // then M⁻¹ = X·S.
    let (int_rows, scales) = integer_rows(m);
    let mut aug: Vec<Vec<BigInt>> = int_rows
        .into_iter()
        .enumerate()
        .map(|(i, mut row)| {
            row.extend((0..n).map(|j| if i == j { BigInt::one() } else { BigInt::zero() }));
            row
        })
        .collect();
    let pivots = bareiss(&mut aug, n);
    if pivots.len() < n {
        return Ok(None);
    }
    let mut x = Matrix::zeros(n, n);
    for col in 0..n {
        let sol = back_substitute(
            &aug,
            &pivots,
            n,
            |r| Rational::from_integer(aug[r][n + col].clone()),
            None,
        );
        for (i, s) in sol.into_iter().enumerate() {
            x.set(i, col, s * Rational::from_integer(scales[col].clone()));
        }
    }
    Ok(Some(x))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::exactlin::{frac, rat};
    use proptest::prelude::*;

    #[test]
    fn invert_examples() {
        let i3 = Matrix::identity(3);
        assert_eq!(invert(&i3).unwrap(), Some(i3));
        assert_eq!(
            invert(&Matrix::scalar(rat(2))).unwrap(),
            Some(Matrix::scalar(frac(1, 2)))
        );
        assert_eq!(invert(&Matrix::from_i64(2, 2, &[1, 1, 1, 1])).unwrap(), None);
        assert!(matches!(
            invert(&Matrix::zeros(2, 3)),
            Err(Error::Dimension(_))
        ));
        assert_eq!(invert(&Matrix::zeros(0, 0)).unwrap(), Some(Matrix::zeros(0, 0)));
    }

    #[test]
    fn invert_needs_row_swaps_and_fractions() {
        let m = Matrix::from_vec(
            3,
            3,
            vec![
                rat(0), frac(1, 2), rat(1),
                rat(3), rat(0), frac(-2, 3),
                rat(1), rat(1), rat(1),
            ],
        )
        .unwrap();
        let inv = invert(&m).unwrap().unwrap();
        assert!((&m * &inv).is_identity());
        assert!((&inv * &m).is_identity());
    }

    #[test]
    fn rank_examples() {
        assert_eq!(rank(&Matrix::zeros(0, 0)), 0);
        assert_eq!(rank(&Matrix::identity(4)), 4);
        assert_eq!(rank(&Matrix::from_i64(2, 2, &[1, 2, 2, 4])), 1);
        assert_eq!(rank(&Matrix::zeros(3, 5)), 0);
    }

    #[test]
    fn kernel_examples() {
        assert!(kernel_basis(&Matrix::identity(2)).is_empty());
        let z = kernel_basis(&Matrix::zeros(2, 2));
        assert_eq!(z.len(), 2);
        assert_eq!(rank(&Matrix::from_columns(2, &z).unwrap()), 2);
        let k = kernel_basis(&Matrix::from_i64(1, 2, &[1, 2]));
        assert_eq!(k.len(), 1);
        assert_eq!(&k[0][0] + rat(2) * &k[0][1], rat(0));
        assert_eq!(kernel_basis(&Matrix::zeros(0, 3)).len(), 3);
    }

    fn small_matrix(rows: usize, cols: usize) -> impl Strategy<Value = Matrix> {
        proptest::collection::vec((-4i64..=4, 1i64..=3), rows * cols).prop_map(move |v| {
            Matrix::from_vec(rows, cols, v.into_iter().map(|(n, d)| frac(n, d)).collect())
                .unwrap()
        })
    }

    fn sparse_square(n: usize) -> impl Strategy<Value = Matrix> {
        // zero-heavy entries so that singular matrices show up regularly
        proptest::collection::vec(prop_oneof![3 => Just(0i64), 1 => -2i64..=2], n * n)
            .prop_map(move |v| Matrix::from_i64(n, n, &v))
    }

    proptest! {
        #[test]
        fn rank_is_transpose_invariant(m in small_matrix(5, 7)) {
            prop_assert_eq!(rank(&m), rank(&m.transpose()));
        }

        #[test]
        fn kernel_vectors_are_annihilated_and_independent(m in small_matrix(4, 6)) {
            let k = kernel_basis(&m);
            prop_assert_eq!(k.len(), 6 - rank(&m));
            for v in &k {
                prop_assert!(m.apply(v).iter().all(Zero::is_zero));
            }
            let stacked = Matrix::from_columns(6, &k).unwrap();
            prop_assert_eq!(rank(&stacked), k.len());
        }

        #[test]
        fn invertible_iff_full_rank(m in sparse_square(4)) {
            let inv = invert(&m).unwrap();
            prop_assert_eq!(inv.is_some(), rank(&m) == 4);
            if let Some(inv) = inv {
                prop_assert!((&m * &inv).is_identity());
                prop_assert!((&inv * &m).is_identity());
            }
        }

        #[test]
        fn pivot_columns_are_independent(m in small_matrix(3, 6)) {
            let p = pivot_columns(&m);
            prop_assert_eq!(p.len(), rank(&m));
            let cols: Vec<_> = p.iter().map(|&j| m.col(j)).collect();
            prop_assert_eq!(rank(&Matrix::from_columns(3, &cols).unwrap()), p.len());
        }
    }
}
