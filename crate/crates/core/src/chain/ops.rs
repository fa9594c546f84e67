use crate::exactlin::{rat, Matrix};
use crate::{Error, Result};

use super::complex::sign;
use super::{ChainComplex, ChainHomotopy, ChainMap};

/// `C[m]_k = C_{k-m}` with differentials multiplied by `(-1)^m`.
pub fn shift(c: &ChainComplex, m: i64) -> ChainComplex {
    let s = rat(sign(m));
    let diffs = c.differentials().map(|(_, d)| d.scale(&s)).collect();
    ChainComplex::new(c.lo() + m, c.dims().to_vec(), diffs).expect("shift keeps shapes")
}

/// `f[m]_k = f_{k-m}`, no sign.
pub fn shift_map(f: &ChainMap, m: i64) -> ChainMap {
    ChainMap::from_fn(shift(f.source(), m), shift(f.target(), m), |k| f.at(k - m))
        .expect("shift keeps shapes")
}

/// Mapping cone with its canonical maps.
#[derive(Clone, Debug)]
pub struct Cone {
    /// `cone_n = A_{n-1} ⊕ B_n`, differential `[[-d_A, 0], [-f, d_B]]`.
    pub complex: ChainComplex,
    /// `B → cone(f)`.
    pub inclusion: ChainMap,
    /// `cone(f) → A[1]`.
    pub projection: ChainMap,
}

fn cone_range(a: &ChainComplex, b: &ChainComplex) -> (i64, i64) {
    ((a.lo() + 1).min(b.lo()), (a.hi() + 1).max(b.hi()))
}

fn cone_complex(f: &ChainMap) -> ChainComplex {
    let (a, b) = (f.source(), f.target());
    let (lo, hi) = cone_range(a, b);
    let dims = (lo..=hi).map(|n| a.dim(n - 1) + b.dim(n)).collect();
    let diffs = (lo + 1..=hi)
        .map(|n| {
            let rows = [a.dim(n - 2), b.dim(n - 1)];
            let cols = [a.dim(n - 1), b.dim(n)];
            Matrix::from_blocks(&rows, &cols, |i, j| match (i, j) {
                (0, 0) => Some(-&a.d(n - 1)),
                (1, 0) => Some(-&f.at(n - 1)),
                (1, 1) => Some(b.d(n)),
                _ => None,
            })
        })
        .collect();
    ChainComplex::new(lo, dims, diffs).expect("cone shapes")
}

/// Cone of a chain map. The input must satisfy the chain-map equations.
pub fn cone(f: &ChainMap) -> Result<Cone> {
    f.source().ensure_valid()?;
    f.target().ensure_valid()?;
    f.ensure_valid()?;
    let complex = cone_complex(f);
    let (a, b) = (f.source(), f.target());
    let inclusion = ChainMap::from_fn(b.clone(), complex.clone(), |n| {
        Matrix::vstack(&[&Matrix::zeros(a.dim(n - 1), b.dim(n)), &Matrix::identity(b.dim(n))])
            .expect("inclusion shape")
    })?;
    let a1 = shift(a, 1);
    let projection = ChainMap::from_fn(complex.clone(), a1, |n| {
        Matrix::hstack(&[&Matrix::identity(a.dim(n - 1)), &Matrix::zeros(a.dim(n - 1), b.dim(n))])
            .expect("projection shape")
    })?;
    Ok(Cone {
        complex,
        inclusion,
        projection,
    })
}

/// The map `cone(f) → cone(f')` induced by a strictly commuting square
/// `β∘f = f'∘α`: `(a, b) ↦ (α a, β b)`.
pub fn cone_functor(
    f: &ChainMap,
    f2: &ChainMap,
    alpha: &ChainMap,
    beta: &ChainMap,
) -> Result<ChainMap> {
    if alpha.source() != f.source()
        || alpha.target() != f2.source()
        || beta.source() != f.target()
        || beta.target() != f2.target()
    {
        return Err(Error::dim("square maps do not match the cone data"));
    }
    let lhs = beta.after(f)?;
    let rhs = f2.after(alpha)?;
    if lhs != rhs {
        return Err(Error::domain("square does not commute"));
    }
    let src = cone_complex(f);
    let tgt = cone_complex(f2);
    ChainMap::from_fn(src, tgt, |n| {
        Matrix::block_diag(&[&alpha.at(n - 1), &beta.at(n)])
    })
}

/// `A ⊕ B` with the two inclusions.
pub fn direct_sum(a: &ChainComplex, b: &ChainComplex) -> (ChainComplex, ChainMap, ChainMap) {
    let lo = a.lo().min(b.lo());
    let hi = a.hi().max(b.hi());
    let dims = (lo..=hi).map(|k| a.dim(k) + b.dim(k)).collect();
    let diffs = (lo + 1..=hi)
        .map(|k| Matrix::block_diag(&[&a.d(k), &b.d(k)]))
        .collect();
    let sum = ChainComplex::new(lo, dims, diffs).expect("sum shapes");
    let ia = ChainMap::from_fn(a.clone(), sum.clone(), |k| {
        Matrix::vstack(&[&Matrix::identity(a.dim(k)), &Matrix::zeros(b.dim(k), a.dim(k))])
            .expect("shape")
    })
    .expect("inclusion");
    let ib = ChainMap::from_fn(b.clone(), sum.clone(), |k| {
        Matrix::vstack(&[&Matrix::zeros(a.dim(k), b.dim(k)), &Matrix::identity(b.dim(k))])
            .expect("shape")
    })
    .expect("inclusion");
    (sum, ia, ib)
}

/// `(f, g): A → B ⊕ C` into a direct sum built by [`direct_sum`].
pub fn pair_into_sum(f: &ChainMap, g: &ChainMap) -> Result<ChainMap> {
    if f.source() != g.source() {
        return Err(Error::dim("paired maps need a common source"));
    }
    let (sum, _, _) = direct_sum(f.target(), g.target());
    ChainMap::from_fn(f.source().clone(), sum, |k| {
        Matrix::vstack(&[&f.at(k), &g.at(k)]).expect("shape")
    })
}

/// Range of left degrees `i` contributing `A_i ⊗ B_{n-i}` to `(A ⊗ B)_n`.
fn tensor_blocks(a: &ChainComplex, b: &ChainComplex, n: i64) -> std::ops::RangeInclusive<i64> {
    a.lo().max(n - b.hi())..=a.hi().min(n - b.lo())
}

/// Offset of the `A_i ⊗ B_{n-i}` block inside `(A ⊗ B)_n`.
fn tensor_offset(a: &ChainComplex, b: &ChainComplex, n: i64, i: i64) -> usize {
    (a.lo().max(n - b.hi())..i)
        .map(|p| a.dim(p) * b.dim(n - p))
        .sum()
}

/// Position of `x ⊗ y` (`x ∈ A_i`, `y ∈ B_j`) in the basis of `(A ⊗ B)_{i+j}`.
///
/// Blocks are ordered by ascending left degree; within a block the left index
/// is major.
pub fn tensor_position(
    a: &ChainComplex,
    b: &ChainComplex,
    i: i64,
    j: i64,
    x: usize,
    y: usize,
) -> usize {
    tensor_offset(a, b, i + j, i) + x * b.dim(j) + y
}

/// `(A ⊗ B)_n = ⊕ A_i ⊗ B_{n-i}`, `d(a ⊗ b) = da ⊗ b + (-1)^i a ⊗ db`.
pub fn tensor(a: &ChainComplex, b: &ChainComplex) -> ChainComplex {
    let lo = a.lo() + b.lo();
    let hi = a.hi() + b.hi();
    let dim = |n: i64| -> usize {
        tensor_blocks(a, b, n)
            .map(|i| a.dim(i) * b.dim(n - i))
            .sum()
    };
    let dims = (lo..=hi).map(dim).collect();
    let diffs = (lo + 1..=hi)
        .map(|n| {
            let mut m = Matrix::zeros(dim(n - 1), dim(n));
            for i in tensor_blocks(a, b, n) {
                let j = n - i;
                let col = tensor_offset(a, b, n, i);
                if a.dim(i - 1) > 0 && tensor_blocks(a, b, n - 1).contains(&(i - 1)) {
                    let blk = a.d(i).kron(&Matrix::identity(b.dim(j)));
                    m.set_block(tensor_offset(a, b, n - 1, i - 1), col, &blk);
                }
                if b.dim(j - 1) > 0 && tensor_blocks(a, b, n - 1).contains(&i) {
                    let blk = Matrix::identity(a.dim(i))
                        .kron(&b.d(j))
                        .scale(&rat(sign(i)));
                    m.set_block(tensor_offset(a, b, n - 1, i), col, &blk);
                }
            }
            m
        })
        .collect();
    ChainComplex::new(lo, dims, diffs).expect("tensor shapes")
}

/// `f ⊗ g` for degree-zero maps: `(f ⊗ g)(a ⊗ b) = f(a) ⊗ g(b)`.
pub fn tensor_maps(f: &ChainMap, g: &ChainMap) -> ChainMap {
    let src = tensor(f.source(), g.source());
    let tgt = tensor(f.target(), g.target());
    let (a, b) = (f.source(), g.source());
    let (a2, b2) = (f.target(), g.target());
    ChainMap::from_fn(src.clone(), tgt.clone(), |n| {
        let mut m = Matrix::zeros(tgt.dim(n), src.dim(n));
        for i in tensor_blocks(a, b, n) {
            if !tensor_blocks(a2, b2, n).contains(&i) {
                continue;
            }
            let blk = f.at(i).kron(&g.at(n - i));
            m.set_block(tensor_offset(a2, b2, n, i), tensor_offset(a, b, n, i), &blk);
        }
        m
    })
    .expect("tensor map shapes")
}

/// The sign-free regrouping isomorphism `(A ⊗ B) ⊗ C → A ⊗ (B ⊗ C)`.
pub fn tensor_associator(a: &ChainComplex, b: &ChainComplex, c: &ChainComplex) -> ChainMap {
    let ab = tensor(a, b);
    let bc = tensor(b, c);
    let left = tensor(&ab, c);
    let right = tensor(a, &bc);
    ChainMap::from_fn(left.clone(), right.clone(), |n| {
        let mut m = Matrix::zeros(right.dim(n), left.dim(n));
        for i in a.degrees() {
            for j in b.degrees() {
                let k = n - i - j;
                if c.dim(k) == 0 {
                    continue;
                }
                for x in 0..a.dim(i) {
                    for y in 0..b.dim(j) {
                        for z in 0..c.dim(k) {
                            let l = tensor_position(&ab, c, i + j, k, tensor_position(a, b, i, j, x, y), z);
                            let r = tensor_position(a, &bc, i, j + k, x, tensor_position(b, c, j, k, y, z));
                            m.set(r, l, rat(1));
                        }
                    }
                }
            }
        }
        m
    })
    .expect("associator shapes")
}

/// Offset of the `Hom(A_i, B_{n+i})` block inside `Map(A, B)_n`.
fn hom_offset(a: &ChainComplex, b: &ChainComplex, n: i64, i: i64) -> usize {
    (a.lo()..i).map(|p| a.dim(p) * b.dim(n + p)).sum()
}

fn hom_dim(a: &ChainComplex, b: &ChainComplex, n: i64) -> usize {
    a.degrees().map(|i| a.dim(i) * b.dim(n + i)).sum()
}

/// Mapping complex `Map(A, B)_n = ⊕_i Hom(A_i, B_{n+i})` with
/// `d(f)_i = d_B ∘ f_i − (-1)^n f_{i-1} ∘ d_A`.
///
/// Each `Hom(A_i, B_j)` block is the row-major flattening of a
/// `dim B_j × dim A_i` matrix. Degree-0 cycles are exactly the chain maps and
/// `d(h)` for `h` of degree 1 is `d·h + h·d`.
pub fn hom_complex(a: &ChainComplex, b: &ChainComplex) -> ChainComplex {
    let lo = b.lo() - a.hi();
    let hi = b.hi() - a.lo();
    let dims = (lo..=hi).map(|n| hom_dim(a, b, n)).collect();
    let diffs = (lo + 1..=hi)
        .map(|n| {
            let mut m = Matrix::zeros(hom_dim(a, b, n - 1), hom_dim(a, b, n));
            for i in a.degrees() {
                // d_B ∘ f_i, from Hom(A_i, B_{n+i}) to Hom(A_i, B_{n+i-1})
                if a.dim(i) > 0 && b.dim(n + i) > 0 && b.dim(n + i - 1) > 0 {
                    let blk = b.d(n + i).kron(&Matrix::identity(a.dim(i)));
                    m.set_block(hom_offset(a, b, n - 1, i), hom_offset(a, b, n, i), &blk);
                }
                // -(-1)^n f_{i-1} ∘ d_A, from Hom(A_{i-1}, B_{n+i-1}) to Hom(A_i, B_{n+i-1})
                if i > a.lo() && a.dim(i) > 0 && a.dim(i - 1) > 0 && b.dim(n + i - 1) > 0 {
                    let blk = Matrix::identity(b.dim(n + i - 1))
                        .kron(&a.d(i).transpose())
                        .scale(&rat(-sign(n)));
                    m.set_block(hom_offset(a, b, n - 1, i), hom_offset(a, b, n, i - 1), &blk);
                }
            }
            m
        })
        .collect();
    ChainComplex::new(lo, dims, diffs).expect("hom complex shapes")
}

fn unflatten(v: &[crate::Rational], rows: usize, cols: usize) -> Matrix {
    Matrix::from_fn(rows, cols, |r, c| v[r * cols + c].clone())
}

/// Reads an element of `Map(A, B)_0` as a family of components `A_i → B_i`.
pub fn hom_vector_to_map(
    a: &ChainComplex,
    b: &ChainComplex,
    v: &[crate::Rational],
) -> Result<ChainMap> {
    if v.len() != hom_dim(a, b, 0) {
        return Err(Error::dim("vector length differs from Map(A,B)_0"));
    }
    ChainMap::from_fn(a.clone(), b.clone(), |i| {
        let off = hom_offset(a, b, 0, i);
        let len = a.dim(i) * b.dim(i);
        unflatten(&v[off..off + len], b.dim(i), a.dim(i))
    })
}

/// Reads an element of `Map(A, B)_1` as a degree +1 family `A_i → B_{i+1}`.
pub fn hom_vector_to_homotopy(
    a: &ChainComplex,
    b: &ChainComplex,
    v: &[crate::Rational],
) -> Result<ChainHomotopy> {
    if v.len() != hom_dim(a, b, 1) {
        return Err(Error::dim("vector length differs from Map(A,B)_1"));
    }
    ChainHomotopy::from_fn(a.clone(), b.clone(), |i| {
        let off = hom_offset(a, b, 1, i);
        let len = a.dim(i) * b.dim(i + 1);
        unflatten(&v[off..off + len], b.dim(i + 1), a.dim(i))
    })
}

/// Flattens a chain map into `Map(A, B)_0`.
pub fn map_to_hom_vector(f: &ChainMap) -> Vec<crate::Rational> {
    f.source()
        .degrees()
        .flat_map(|i| f.at(i).entries().to_vec())
        .collect()
}

/// True iff the cone of `f` has no homology.
pub fn is_quasi_iso(f: &ChainMap) -> Result<bool> {
    cone(f)?.complex.is_acyclic()
}
