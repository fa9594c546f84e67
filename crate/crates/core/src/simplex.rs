//! Cochains on the standard simplex and the categorified 2-simplex complex.
//!
//! Cochain degree `k` is stored as chain degree `-k`, so `C^0` sits at the top
//! of the [`ChainComplex`] and `d` raises the cochain degree.

use std::collections::BTreeMap;

use crate::chain::{cone, cone_functor, ChainComplex, ChainHomotopy, ChainMap};
use crate::exactlin::{rat, Matrix};
use crate::koszul::subsets;
use crate::{Error, Result};

/// `C^k(Δⁿ, V)`: functions from injective monotone `[k] → [n]` to `V = ℚ^dim_v`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct LinearCochain {
    n: usize,
    dim_v: usize,
    complex: ChainComplex,
}

impl LinearCochain {
    pub fn n(&self) -> usize {
        self.n
    }

    pub fn dim_v(&self) -> usize {
        self.dim_v
    }

    /// The cochain complex, cochain degree `k` at chain degree `-k`.
    pub fn complex(&self) -> &ChainComplex {
        &self.complex
    }

    /// Faces `[k] ↪ [n]` in lex order, the basis of `C^k` (times `V`).
    pub fn simplices(&self, k: usize) -> Vec<Vec<usize>> {
        subsets(self.n + 1, k + 1)
    }

    pub fn dim(&self, k: usize) -> usize {
        self.complex.dim(-(k as i64))
    }

    /// `d: C^k → C^{k+1}`.
    pub fn d(&self, k: usize) -> Matrix {
        self.complex.d(-(k as i64))
    }

    /// `dim H^k` for `k = 0..=n`.
    pub fn cohomology_dims(&self) -> Result<Vec<usize>> {
        let h = self.complex.homology_dims()?;
        Ok((0..=self.n).map(|k| h.get(&-(k as i64)).copied().unwrap_or(0)).collect())
    }
}

/// `(da)(σ) = Σ (-1)^i a(σ ∘ ∂_i)`.
pub fn linear_cochain(n: usize, dim_v: usize) -> LinearCochain {
    let faces: Vec<Vec<Vec<usize>>> = (0..=n).map(|k| subsets(n + 1, k + 1)).collect();
    let index: Vec<BTreeMap<&[usize], usize>> = faces
        .iter()
        .map(|fs| fs.iter().enumerate().map(|(i, s)| (s.as_slice(), i)).collect())
        .collect();
    let dims: Vec<usize> = (0..=n).rev().map(|k| faces[k].len() * dim_v).collect();
    // Chain degree -k, stored from lo = -n upwards, so diffs[j] maps degree
    // -n+j+1 (cochain n-j-1) to -n+j (cochain n-j).
    let diffs = (0..n)
        .map(|j| {
            let k = n - j - 1;
            let mut d = Matrix::zeros(faces[k + 1].len(), faces[k].len());
            for (row, sigma) in faces[k + 1].iter().enumerate() {
                for i in 0..sigma.len() {
                    let mut face = sigma.clone();
                    face.remove(i);
                    let col = index[k][face.as_slice()];
                    d.set(row, col, rat(if i % 2 == 0 { 1 } else { -1 }));
                }
            }
            d.kron(&Matrix::identity(dim_v))
        })
        .collect();
    let complex = ChainComplex::new(-(n as i64), dims, diffs).expect("cochain shapes");
    LinearCochain { n, dim_v, complex }
}

/// `X_0 →u X_1 →v X_2`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Cc2Level0 {
    pub u: ChainMap,
    pub v: ChainMap,
}

impl Cc2Level0 {
    pub fn new(u: ChainMap, v: ChainMap) -> Result<Self> {
        if u.target() != v.source() {
            return Err(Error::dim("u and v are not composable"));
        }
        u.source().ensure_valid()?;
        u.target().ensure_valid()?;
        v.target().ensure_valid()?;
        u.ensure_valid()?;
        v.ensure_valid()?;
        Ok(Self { u, v })
    }
}

/// `Y_01 →α Y_02 →β Y_12` with `Y_ij = cone(X_i → X_j)` and a null-homotopy
/// `h` of `βα` (`βα = dh + hd`).
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Cc2Level1 {
    pub y01: ChainComplex,
    pub y02: ChainComplex,
    pub y12: ChainComplex,
    pub alpha: ChainMap,
    pub beta: ChainMap,
    pub h: ChainHomotopy,
}

/// All three levels of the categorified cochains of Δ².
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct CatCochain2 {
    pub level0: Cc2Level0,
    pub level1: Cc2Level1,
    pub level2: ChainComplex,
}

/// `α(a, b) = (a, vb)`, `β(a, c) = (ua, c)`, `h(a, b) = (−b, 0)`.
pub fn cc2_d2(x: &Cc2Level0) -> Result<Cc2Level1> {
    let (u, v) = (&x.u, &x.v);
    let vu = v.after(u)?;
    let y01 = cone(u)?.complex;
    let y02 = cone(&vu)?.complex;
    let y12 = cone(v)?.complex;
    let alpha = cone_functor(u, &vu, &ChainMap::identity(u.source()), v)?;
    let beta = cone_functor(&vu, v, u, &ChainMap::identity(v.target()))?;
    let (x0, x1) = (u.source(), u.target());
    let h = ChainHomotopy::from_fn(y01.clone(), y12.clone(), |n| {
        // (Y_01)_n = X0_{n-1} ⊕ X1_n  →  (Y_12)_{n+1} = X1_n ⊕ X2_{n+1}
        let mut m = Matrix::zeros(y12.dim(n + 1), y01.dim(n));
        let minus = -&Matrix::identity(x1.dim(n));
        m.set_block(0, x0.dim(n - 1), &minus);
        m
    })?;
    Ok(Cc2Level1 { y01, y02, y12, alpha, beta, h })
}

/// `T_n = (Y_01)_{n-2} ⊕ (Y_02)_{n-1} ⊕ (Y_12)_n` with
/// `D = [[d, 0, 0], [α, −d, 0], [h, −β, d]]`.
pub fn cc2_d1(y: &Cc2Level1) -> Result<ChainComplex> {
    let (a, b, c) = (&y.y01, &y.y02, &y.y12);
    if y.alpha.source() != a || y.alpha.target() != b || y.beta.source() != b || y.beta.target() != c {
        return Err(Error::dim("level-1 maps do not match their complexes"));
    }
    if y.h.source() != a || y.h.target() != c {
        return Err(Error::dim("homotopy does not run Y_01 → Y_12"));
    }
    let lo = (a.lo() + 2).min(b.lo() + 1).min(c.lo());
    let hi = (a.hi() + 2).max(b.hi() + 1).max(c.hi());
    let dims = (lo..=hi).map(|n| a.dim(n - 2) + b.dim(n - 1) + c.dim(n)).collect();
    let diffs = (lo + 1..=hi)
        .map(|n| {
            let rows = [a.dim(n - 3), b.dim(n - 2), c.dim(n - 1)];
            let cols = [a.dim(n - 2), b.dim(n - 1), c.dim(n)];
            Matrix::from_blocks(&rows, &cols, |i, j| match (i, j) {
                (0, 0) => Some(a.d(n - 2)),
                (1, 0) => Some(y.alpha.at(n - 2)),
                (1, 1) => Some(-&b.d(n - 1)),
                (2, 0) => Some(y.h.at(n - 2)),
                (2, 1) => Some(-&y.beta.at(n - 1)),
                (2, 2) => Some(c.d(n)),
                _ => None,
            })
        })
        .collect();
    let t = ChainComplex::new(lo, dims, diffs)?;
    t.ensure_valid()?;
    Ok(t)
}

pub fn cc2(u: &ChainMap, v: &ChainMap) -> Result<CatCochain2> {
    let level0 = Cc2Level0::new(u.clone(), v.clone())?;
    let level1 = cc2_d2(&level0)?;
    let level2 = cc2_d1(&level1)?;
    Ok(CatCochain2 { level0, level1, level2 })
}

#[cfg(test)]
mod tests {
    use proptest::prelude::*;

    use super::*;
    use crate::chain::check_homotopy;
    use crate::random;

    #[test]
    fn delta2_dims_and_cohomology() {
        let c = linear_cochain(2, 1);
        assert_eq!((c.dim(0), c.dim(1), c.dim(2)), (3, 3, 1));
        assert_eq!(c.cohomology_dims().unwrap(), vec![1, 0, 0]);
        assert!(c.complex().validate().is_valid());
    }

    #[test]
    fn point() {
        let c = linear_cochain(0, 3);
        assert_eq!(c.complex().dims(), &[3]);
        assert_eq!(c.cohomology_dims().unwrap(), vec![3]);
    }

    #[test]
    fn top_face_formula() {
        // Edges 01, 02, 12; (da)(012) = a(12) − a(02) + a(01).
        let c = linear_cochain(2, 1);
        assert_eq!(c.simplices(1), vec![vec![0, 1], vec![0, 2], vec![1, 2]]);
        assert_eq!(c.d(1), Matrix::from_i64(1, 3, &[1, -1, 1]));
        // (da)(ij) = a(j) − a(i)
        assert_eq!(c.d(0), Matrix::from_i64(3, 3, &[-1, 1, 0, -1, 0, 1, 0, -1, 1]));
    }

    #[test]
    fn coefficient_blocks() {
        let c = linear_cochain(1, 2);
        assert_eq!(c.d(0), Matrix::from_i64(2, 4, &[-1, 0, 1, 0, 0, -1, 0, 1]));
    }

    #[test]
    fn cc2_of_zero() {
        let z = ChainComplex::zero();
        let t = cc2(&ChainMap::identity(&z), &ChainMap::identity(&z)).unwrap();
        assert!(t.level2.is_zero());
    }

    #[test]
    fn cc2_identity_first_map() {
        let x = ChainComplex::two_term(1, Matrix::from_i64(1, 1, &[2]));
        let v = ChainMap::zero(&x, &ChainComplex::concentrated(0, 2));
        let t = cc2(&ChainMap::identity(&x), &v).unwrap();
        assert!(t.level1.y01.is_acyclic().unwrap());
        assert!(t.level2.is_acyclic().unwrap());
    }

    #[test]
    fn zero_maps_give_shifted_sum() {
        let x = ChainComplex::concentrated(0, 1);
        let z = ChainMap::zero(&x, &x);
        let t = cc2(&z, &z).unwrap();
        // Every Y_ij is ℚ[1] ⊕ ℚ[0], and α, β are still nonzero on the ℚ[1] part.
        assert_eq!(t.level2.euler_characteristic(), 0);
        assert!(t.level2.is_acyclic().unwrap());
    }

    #[test]
    fn rejects_bad_input() {
        let x = ChainComplex::concentrated(0, 1);
        let y = ChainComplex::concentrated(0, 2);
        let u = ChainMap::zero(&x, &y);
        assert!(Cc2Level0::new(u.clone(), u).is_err());
    }

    proptest! {
        #![proptest_config(ProptestConfig::with_cases(64))]

        #[test]
        fn categorified_d_squared(seed in any::<u64>()) {
            let mut r = random::rng(seed);
            let (u, v) = random::composable_pair(&mut r, 3);
            let x = Cc2Level0::new(u, v).unwrap();
            let y = cc2_d2(&x).unwrap();
            prop_assert!(y.alpha.validate().is_valid());
            prop_assert!(y.beta.validate().is_valid());
            let zero = ChainMap::zero(&y.y01, &y.y12);
            prop_assert!(check_homotopy(&zero, &y.beta.after(&y.alpha).unwrap(), &y.h).unwrap());
            let t = cc2_d1(&y).unwrap();
            prop_assert!(t.is_acyclic().unwrap());
            let (c01, c02, c12) = (
                y.y01.euler_characteristic(),
                y.y02.euler_characteristic(),
                y.y12.euler_characteristic(),
            );
            prop_assert_eq!(t.euler_characteristic(), c01 - c02 + c12);
        }

        #[test]
        fn euler_shadow_is_linear_cochain(seed in any::<u64>()) {
            let mut r = random::rng(seed);
            let (u, v) = random::composable_pair(&mut r, 3);
            let chi = |c: &ChainComplex| rat(c.euler_characteristic());
            let x = vec![chi(u.source()), chi(u.target()), chi(v.target())];
            let t = cc2(&u, &v).unwrap();
            let y = vec![chi(&t.level1.y01), chi(&t.level1.y02), chi(&t.level1.y12)];
            let l = linear_cochain(2, 1);
            prop_assert_eq!(l.d(0).apply(&x), y.clone());
            prop_assert_eq!(l.d(1).apply(&y), vec![chi(&t.level2)]);
        }

        #[test]
        fn linear_cochains_are_acyclic_above_zero(n in 0usize..6, v in 1usize..3) {
            let c = linear_cochain(n, v);
            prop_assert!(c.complex().validate().is_valid());
            let mut expected = vec![0; n + 1];
            expected[0] = v;
            prop_assert_eq!(c.cohomology_dims().unwrap(), expected);
            for k in 0..=n {
                prop_assert_eq!(c.dim(k), crate::koszul::binom(n + 1, k + 1) * v);
            }
        }
    }
}
