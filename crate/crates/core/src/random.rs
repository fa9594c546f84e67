//! Seeded generators of random test data.
//!
//! Every generator takes an explicit RNG so sweeps are reproducible from a
//! seed. Entries are small integers with a fair share of zeros, which keeps
//! degenerate cases (rank drops, zero maps) common.

use rand::Rng;
use rand_chacha::rand_core::SeedableRng;
pub use rand_chacha::ChaCha8Rng;

use crate::chain::{
    direct_sum, hom_complex, hom_vector_to_map, tensor, tensor_associator, tensor_maps, ChainComplex,
    ChainMap,
};
use crate::laxmat::Delta1ChainMatrix;
use crate::koszul::{FdAlgebra, MonomialAlgebra};
use crate::multicplx::{bicomplex_from_map, ComplexCube, MultiComplex};
use crate::perverse::{PervDisk, PervFlag};
use crate::doldkan::{free_on_simplex, gamma, SimplicialVS};
use crate::exactlin::{invert, kernel_basis, kernel_matrix, rat, Matrix, Rational};
use num_traits::Zero;

pub fn rng(seed: u64) -> ChaCha8Rng {
    ChaCha8Rng::seed_from_u64(seed)
}

/// Integer entries in `-bound..=bound`, each zero with probability `zero_p`.
pub fn matrix(r: &mut impl Rng, rows: usize, cols: usize, bound: i64, zero_p: f64) -> Matrix {
    Matrix::from_fn(rows, cols, |_, _| {
        if r.gen_bool(zero_p) {
            Rational::zero()
        } else {
            rat(r.gen_range(-bound..=bound))
        }
    })
}

/// Random invertible matrix.
pub fn invertible(r: &mut impl Rng, n: usize) -> Matrix {
    loop {
        let m = matrix(r, n, n, 2, 0.3);
        if invert(&m).expect("square").is_some() {
            return m;
        }
    }
}

/// Random unimodular matrix (unit lower times unit upper triangular), so its
/// inverse is integral too.
pub fn unimodular(r: &mut impl Rng, n: usize) -> Matrix {
    let mut tri = |lower: bool| {
        Matrix::from_fn(n, n, |i, j| {
            if i == j {
                rat(1)
            } else if (i > j) == lower && r.gen_bool(0.3) {
                rat(r.gen_range(-1..=1))
            } else {
                Rational::zero()
            }
        })
    };
    let l = tri(true);
    let u = tri(false);
    &l * &u
}

/// Random valid complex on `lo..lo+len` with dimensions up to `max_dim`.
///
/// Each differential factors through the kernel of the next one down, so
/// `d² = 0` by construction.
pub fn complex(r: &mut impl Rng, lo: i64, len: usize, max_dim: usize) -> ChainComplex {
    assert!(len >= 1);
    let dims: Vec<usize> = (0..len).map(|_| r.gen_range(0..=max_dim)).collect();
    complex_with_dims(r, lo, dims)
}

pub fn complex_with_dims(r: &mut impl Rng, lo: i64, dims: Vec<usize>) -> ChainComplex {
    let mut diffs: Vec<Matrix> = Vec::with_capacity(dims.len().saturating_sub(1));
    for i in 1..dims.len() {
        let d = if i == 1 {
            matrix(r, dims[0], dims[1], 2, 0.4)
        } else {
            let k = kernel_matrix(&diffs[i - 2]);
            let coeffs = matrix(r, k.cols(), dims[i], 2, 0.4);
            &k * &coeffs
        };
        diffs.push(d);
    }
    ChainComplex::new(lo, dims, diffs).expect("generated shapes")
}

/// Random chain map `a → b`: an integer combination of a basis of the
/// degree-0 cycles of `Map(a, b)`.
pub fn chain_map(r: &mut impl Rng, a: &ChainComplex, b: &ChainComplex) -> ChainMap {
    let map = hom_complex(a, b);
    let z0 = kernel_basis(&map.d(0));
    let dim = map.dim(0);
    let mut v = vec![Rational::zero(); dim];
    for basis in &z0 {
        if r.gen_bool(0.3) {
            continue;
        }
        let c = rat(r.gen_range(-2..=2));
        for (vi, bi) in v.iter_mut().zip(basis) {
            *vi += &c * bi;
        }
    }
    // clear denominators introduced by back-substitution
    let l = v
        .iter()
        .fold(num_bigint::BigInt::from(1), |acc, x| {
            num_integer::Integer::lcm(&acc, x.denom())
        });
    let l = Rational::from_integer(l);
    let v: Vec<Rational> = v.into_iter().map(|x| x * &l).collect();
    hom_vector_to_map(a, b, &v).expect("cycle has the right length")
}

/// A random complex together with a random endomorphism-free map into a
/// second random complex on the same degree window.
pub fn complex_pair_map(
    r: &mut impl Rng,
    lo: i64,
    len: usize,
    max_dim: usize,
) -> ChainMap {
    let a = complex(r, lo, len, max_dim);
    let b = complex(r, lo, len, max_dim);
    chain_map(r, &a, &b)
}

fn rebase(r: &mut impl Rng, m: &MultiComplex) -> MultiComplex {
    m.change_basis(|a| invertible(r, m.dim(a)))
        .expect("invertible basis change")
}

/// Random valid multicomplex with `n` axes: a direct sum of tensor products
/// of random complexes and of two-row bicomplexes of random chain maps,
/// followed by a random change of basis at every point.
pub fn multicomplex(r: &mut impl Rng, n: usize, max_len: usize, max_dim: usize) -> MultiComplex {
    assert!(n >= 1 && max_len >= 1);
    let mut acc: Option<MultiComplex> = None;
    for _ in 0..r.gen_range(1..=2) {
        let mut piece = if n >= 2 && r.gen_bool(0.5) {
            let len = r.gen_range(1..=max_len);
            let lo = r.gen_range(-1..=1);
            bicomplex_from_map(&complex_pair_map(r, lo, len, max_dim)).expect("valid map")
        } else {
            let len = r.gen_range(1..=max_len);
            let lo = r.gen_range(-1..=1);
            MultiComplex::from_complex(&complex(r, lo, len, max_dim))
        };
        while piece.n() < n {
            let len = r.gen_range(1..=max_len);
            let lo = r.gen_range(-1..=1);
            piece = piece.tensor_axis(&complex(r, lo, len, max_dim));
        }
        acc = Some(match acc {
            None => piece,
            Some(m) => m.direct_sum(&piece).expect("same axis count"),
        });
    }
    rebase(r, &acc.expect("at least one piece"))
}

/// Random cube of complexes with commuting faces, built like
/// [`multicomplex`] with every cube axis supported on `{0,1}`.
pub fn complex_cube(r: &mut impl Rng, n: usize, max_dim: usize) -> ComplexCube {
    let mut acc: Option<MultiComplex> = None;
    for _ in 0..r.gen_range(1..=2) {
        let lo = r.gen_range(-1..=1);
        let len = r.gen_range(1..=3);
        let (mut piece, cube_axes) = if n >= 1 && r.gen_bool(0.5) {
            let f = complex_pair_map(r, lo, len, max_dim);
            (bicomplex_from_map(&f).expect("valid map"), 1)
        } else {
            (MultiComplex::from_complex(&complex(r, lo, len, max_dim)), 0)
        };
        // tensor on further cube axes, then move the internal axis last
        for _ in cube_axes..n {
            let dims = vec![r.gen_range(0..=max_dim), r.gen_range(0..=max_dim)];
            let arrow = complex_with_dims(r, 0, dims);
            piece = piece.tensor_axis(&arrow);
        }
        let internal = cube_axes;
        let perm: Vec<usize> = (0..=n).filter(|&j| j != internal).chain([internal]).collect();
        piece = piece.permute_axes(&perm).expect("permutation");
        acc = Some(match acc {
            None => piece,
            Some(m) => m.direct_sum(&piece).expect("same axis count"),
        });
    }
    ComplexCube::fold(&rebase(r, &acc.expect("at least one piece"))).expect("cube support")
}

/// Random monomial quotient `ℚ[x, y]/I` (or one variable) of dimension at
/// most `max_dim`, with its monomial basis.
pub fn monomial_algebra(r: &mut impl Rng, max_dim: usize) -> MonomialAlgebra {
    loop {
        let vars = r.gen_range(1..=2);
        let mut gens: Vec<Vec<u32>> = (0..vars)
            .map(|i| (0..vars).map(|j| if i == j { r.gen_range(1..=4) } else { 0 }).collect())
            .collect();
        if vars == 2 && r.gen_bool(0.5) {
            gens.push(vec![r.gen_range(1..=2), r.gen_range(1..=2)]);
        }
        let alg = MonomialAlgebra::new(vars, gens).expect("pure powers present");
        if (1..=max_dim).contains(&alg.algebra.dim()) {
            return alg;
        }
    }
}

/// Random commutative algebra of dimension `1..=max_dim`: a monomial quotient,
/// possibly times a second one, in a random basis.
pub fn fd_algebra(r: &mut impl Rng, max_dim: usize) -> FdAlgebra {
    let mut alg = monomial_algebra(r, max_dim).algebra;
    if alg.dim() < max_dim && r.gen_bool(0.4) {
        let other = monomial_algebra(r, max_dim - alg.dim()).algebra;
        alg = alg.product(&other);
    }
    if r.gen_bool(0.7) {
        let p = invertible(r, alg.dim());
        alg = alg.change_basis(&p).expect("invertible");
    }
    alg
}

/// Random element with small integer coordinates.
pub fn algebra_element(r: &mut impl Rng, alg: &FdAlgebra) -> Vec<Rational> {
    (0..alg.dim())
        .map(|_| if r.gen_bool(0.4) { Rational::zero() } else { rat(r.gen_range(-2..=2)) })
        .collect()
}

/// Random valid disk `Φ ⇄ Ψ`.
pub fn perv_disk(r: &mut impl Rng, max_dim: usize) -> PervDisk {
    let phi = r.gen_range(0..=max_dim);
    let psi = r.gen_range(0..=max_dim);
    loop {
        let f = matrix(r, psi, phi, 2, 0.4);
        let g = matrix(r, phi, psi, 2, 0.4);
        let p = PervDisk::new(phi, psi, f, g).expect("generated shapes");
        if p.validate().is_valid() {
            return p;
        }
    }
}

/// Random valid flag of length `n`. Falls back to `δ = 0` if no valid pair
/// turns up quickly.
pub fn perv_flag(r: &mut impl Rng, n: usize, max_dim: usize) -> PervFlag {
    let dims: Vec<usize> = (0..=n).map(|_| r.gen_range(0..=max_dim)).collect();
    let reversed: Vec<usize> = dims.iter().rev().copied().collect();
    let d_of = |c: &ChainComplex| -> Vec<Matrix> { (0..n).map(|k| c.d((n - k) as i64)).collect() };
    let delta_of = |c: &ChainComplex| -> Vec<Matrix> { (0..n).map(|k| c.d(k as i64 + 1)).collect() };
    let d = d_of(&complex_with_dims(r, 0, reversed));
    for _ in 0..50 {
        let delta = delta_of(&complex_with_dims(r, 0, dims.clone()));
        let p = PervFlag::new(dims.clone(), d.clone(), delta).expect("generated shapes");
        if p.validate().is_valid() {
            return p;
        }
    }
    let delta = (0..n).map(|k| Matrix::zeros(dims[k], dims[k + 1])).collect();
    PervFlag::new(dims, d, delta).expect("generated shapes")
}

/// Random `X_0 →u X_1 →v X_2` with total dimension at most `max_total`.
pub fn composable_pair(r: &mut impl Rng, max_total: usize) -> (ChainMap, ChainMap) {
    loop {
        let lo = r.gen_range(-1..=1);
        let len = r.gen_range(1..=3);
        let max_dim = r.gen_range(1..=3);
        let x: Vec<ChainComplex> = (0..3).map(|_| complex(r, lo, len, max_dim)).collect();
        if x.iter().map(|c| c.total_dim()).sum::<usize>() > max_total {
            continue;
        }
        let u = chain_map(r, &x[0], &x[1]);
        let v = chain_map(r, &x[1], &x[2]);
        return (u, v);
    }
}

/// Random valid simplicial vector space truncated at `top`: Γ of a random
/// complex, plus a free simplicial space on `Δ^p` half the time, in a random
/// basis at every level.
pub fn simplicial_vs(r: &mut impl Rng, top: usize, max_dim: usize) -> SimplicialVS {
    let c = complex(r, 0, top + 1, max_dim);
    let mut x = gamma(&c, top).expect("nonnegative support");
    if r.gen_bool(0.5) {
        let p = r.gen_range(0..=1);
        x = x.direct_sum(&free_on_simplex(p, top)).expect("same truncation");
    }
    let dims = x.dims().to_vec();
    x.change_basis(|n| unimodular(r, dims[n])).expect("invertible basis change")
}

/// Random gluing complex: total dimension at most 2, in degrees 0..=1.
pub fn gluing(r: &mut impl Rng) -> ChainComplex {
    loop {
        let len = r.gen_range(1..=2);
        let c = complex(r, 0, len, 2);
        if c.total_dim() <= 2 {
            return c;
        }
    }
}

fn projection_from_sum(a: &ChainComplex, b: &ChainComplex, first: bool) -> ChainMap {
    let (sum, _, _) = direct_sum(a, b);
    let tgt = if first { a } else { b };
    ChainMap::from_fn(sum, tgt.clone(), |k| {
        let (za, zb) = (Matrix::zeros(tgt.dim(k), a.dim(k)), Matrix::zeros(tgt.dim(k), b.dim(k)));
        let (ia, ib) = (Matrix::identity(a.dim(k)), Matrix::identity(b.dim(k)));
        if first {
            Matrix::hstack(&[&ia, &zb]).expect("shape")
        } else {
            Matrix::hstack(&[&za, &ib]).expect("shape")
        }
    })
    .expect("projection shapes")
}

/// Random valid `Δ¹` chain matrix between the given gluings with every entry
/// of total dimension at most `max_total`.
///
/// `α_11 = (G_tgt ⊗ α_01) ⊕ K` with `left[1]` the inclusion, `left[0] = φ`
/// random, and `right[1] = φ ∘ (1 ⊗ right[0]) ∘ assoc` on the first summand
/// and random on `K`, which makes the structure square commute.
pub fn delta1_matrix(
    r: &mut impl Rng,
    g_src: &ChainComplex,
    g_tgt: &ChainComplex,
    max_total: usize,
) -> Delta1ChainMatrix {
    fn small(r: &mut impl Rng, cap: usize) -> ChainComplex {
        loop {
            let lo = r.gen_range(-1..=0);
            let len = r.gen_range(1..=3);
            let c = complex(r, lo, len, 2);
            if c.total_dim() <= cap {
                return c;
            }
        }
    }
    loop {
        let e00 = small(r, max_total);
        let e01 = small(r, max_total);
        let e10 = small(r, max_total);
        let k = small(r, max_total);
        let t = tensor(g_tgt, &e01);
        if t.total_dim() + k.total_dim() > max_total {
            continue;
        }
        let (e11, incl, _) = direct_sum(&t, &k);
        let right0 = chain_map(r, &tensor(&e01, g_src), &e00);
        let phi = chain_map(r, &tensor(g_tgt, &e00), &e10);
        let rho = phi
            .after(&tensor_maps(&ChainMap::identity(g_tgt), &right0))
            .and_then(|m| m.after(&tensor_associator(g_tgt, &e01, g_src)))
            .expect("composable");
        let psi = chain_map(r, &tensor(&k, g_src), &e10);
        let id_g = ChainMap::identity(g_src);
        let on_t = rho.after(&tensor_maps(&projection_from_sum(&t, &k, true), &id_g)).expect("composable");
        let on_k = psi.after(&tensor_maps(&projection_from_sum(&t, &k, false), &id_g)).expect("composable");
        let right1 = on_t.add(&on_k).expect("same ends");
        return Delta1ChainMatrix::new(
            g_src.clone(),
            g_tgt.clone(),
            [[e00, e01], [e10, e11]],
            [right0, right1],
            [phi, incl],
        )
        .expect("generated shapes");
    }
}
