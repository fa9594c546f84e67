use proptest::prelude::*;
use rand::Rng;

use super::*;
use crate::exactlin::invert;
use crate::random;

fn im(rows: usize, cols: usize, e: &[i64]) -> IntMatrix {
    IntMatrix::new(rows, cols, e.to_vec()).unwrap()
}

/// `μ` by exact rational inversion of `ζ`.
fn mobius_by_inversion(p: &FinPoset) -> Matrix {
    invert(&zeta(p).to_matrix()).unwrap().unwrap()
}

#[test]
fn zeta_examples() {
    assert_eq!(zeta(&FinPoset::antichain(3)), IntMatrix::identity(3));
    assert_eq!(zeta(&FinPoset::delta1()), im(2, 2, &[1, 0, 1, 1]));
    assert_eq!(zeta(&FinPoset::chain(3)), im(3, 3, &[1, 0, 0, 1, 1, 0, 1, 1, 1]));
}

#[test]
fn mobius_examples() {
    assert_eq!(mobius(&FinPoset::delta1()).unwrap(), im(2, 2, &[1, 0, -1, 1]));
    assert_eq!(mobius(&FinPoset::antichain(4)).unwrap(), IntMatrix::identity(4));
    let b = FinPoset::boolean(2);
    let mu = mobius(&b).unwrap();
    for t in 0..4usize {
        for s in 0..4usize {
            let expected = if s & t == s { if (t & !s).count_ones() % 2 == 0 { 1 } else { -1 } } else { 0 };
            assert_eq!(mu.get(t, s), expected, "μ({s}, {t})");
        }
    }
}

#[test]
fn delta1_worked_value() {
    let n = im(1, 2, &[2, 3]);
    let m = im(2, 1, &[5, 7]);
    assert_eq!(k0_compose(&n, &m, &FinPoset::delta1()).unwrap(), im(1, 1, &[16]));
    // a₀b₀ − a₁b₀ + a₁b₁
    assert_eq!(2 * 5 - 3 * 5 + 3 * 7, 16);
}

#[test]
fn k0_compose_checks_shapes() {
    let n = im(1, 3, &[1, 2, 3]);
    let m = im(2, 1, &[5, 7]);
    assert!(k0_compose(&n, &m, &FinPoset::delta1()).is_err());
}

#[test]
fn poset_axioms() {
    let bad = FinPoset::from_fn(2, |_, _| true);
    assert!(bad.validate().has_code("not_antisymmetric"));
    let bad = FinPoset::from_fn(2, |i, j| i != j);
    assert!(bad.validate().has_code("not_reflexive"));
    // 0 ≤ 1 ≤ 2 without 0 ≤ 2
    let bad = FinPoset::from_fn(3, |i, j| i == j || j == i + 1);
    assert!(bad.validate().has_code("not_transitive"));
    assert!(mobius(&bad).is_err());
    assert!(FinPoset::new(vec!["a".into()], vec![vec![true, false]]).is_err());
}

#[test]
fn overflow_is_an_error() {
    let big = im(1, 1, &[i64::MAX]);
    assert!(big.mul(&im(1, 1, &[2])).is_err());
}

fn arrow(f: &[i64]) -> ArrowObject {
    let m = Matrix::from_i64(1, 1, f);
    let a = ChainComplex::concentrated(0, 1);
    ArrowObject::new(ChainMap::new(a.clone(), a, vec![m]).unwrap()).unwrap()
}

#[test]
fn hpushout_of_zero_apex() {
    let z = ChainComplex::zero();
    let b = ChainComplex::concentrated(0, 2);
    let c = ChainComplex::concentrated(1, 1);
    let po = hpushout(&ChainMap::zero(&z, &b), &ChainMap::zero(&z, &c)).unwrap();
    assert_eq!(po.complex.dim(0), 2);
    assert_eq!(po.complex.dim(1), 1);
    assert!(po.complex.validate().is_valid());
}

#[test]
fn hpushout_of_identities() {
    let a = ChainComplex::two_term(1, Matrix::from_i64(1, 2, &[1, 1]));
    let po = hpushout(&ChainMap::identity(&a), &ChainMap::identity(&a)).unwrap();
    let nonzero = |c: &ChainComplex| -> Vec<(i64, usize)> {
        c.homology_dims().unwrap().into_iter().filter(|&(_, d)| d > 0).collect()
    };
    assert_eq!(nonzero(&po.complex), nonzero(&a));
    assert!(is_quasi_iso(&po.from_b).unwrap());
    assert!(is_quasi_iso(&po.from_c).unwrap());
    let h = po.leg_homotopy();
    assert!(homotopy_defects(&po.from_b.after(&po.p).unwrap(), &po.from_c.after(&po.q).unwrap(), &h)
        .unwrap()
        .is_empty());
}

#[test]
fn hpushout_sign_on_q() {
    // d(a) = (−p a, q a): the q leg enters with a minus inside the cone.
    let a = ChainComplex::concentrated(0, 1);
    let one = ChainMap::identity(&a);
    let po = hpushout(&one, &one).unwrap();
    assert_eq!(po.complex.d(1), Matrix::from_i64(2, 1, &[-1, 1]));
}

#[test]
fn pushout_out_requires_homotopy() {
    let a = ChainComplex::concentrated(0, 1);
    let one = ChainMap::identity(&a);
    let po = hpushout(&one, &one).unwrap();
    let k = ChainHomotopy::zero(&a, &a);
    assert!(hpushout_out(&po, &one, &one, &k).is_ok());
    assert!(hpushout_out(&po, &one, &one.neg(), &k).is_err());
}

#[test]
fn tensor_isos_are_chain_isos() {
    let mut r = random::rng(5);
    for _ in 0..20 {
        let p = random::complex_pair_map(&mut r, -1, 2, 2);
        let c = random::complex(&mut r, -1, 2, 2);
        let q = random::chain_map(&mut r, p.source(), &c);
        let po = hpushout(&p, &q).unwrap();
        let g = random::gluing(&mut r);
        let (_, iso) = hpushout_tensor_right(&po, &g).unwrap();
        assert!(iso.validate().is_valid());
        assert!(iso.degreewise_inverse().unwrap().is_some());
        let (_, iso) = hpushout_tensor_left(&g, &po).unwrap();
        assert!(iso.validate().is_valid(), "{}", iso.validate());
        assert!(iso.degreewise_inverse().unwrap().is_some());
    }
}

#[test]
fn unit_matrix_is_valid() {
    let g = ChainComplex::two_term(1, Matrix::from_i64(1, 1, &[0]));
    let i = unit_matrix(&g);
    assert!(i.validate().is_valid());
    assert_eq!(i.euler(), [[1, 0], [0, 1]]);
    let i = unit_matrix(&ChainComplex::concentrated(0, 1));
    assert_eq!(i.euler_matrix(), zeta(&FinPoset::delta1()));
}

#[test]
fn zero_matrix_composes_to_zero() {
    let mut r = random::rng(11);
    let g = random::gluing(&mut r);
    let m = random::delta1_matrix(&mut r, &g, &g, 6);
    let z = Delta1ChainMatrix::zero(&g, &g);
    let c = lax_compose_delta1(&z, &m).unwrap();
    for t in 0..2 {
        for s in 0..2 {
            assert!(c.entry(t, s).is_zero());
        }
    }
    assert!(c.validate().is_valid());
}

#[test]
fn gluing_mismatch() {
    let g = ChainComplex::concentrated(0, 1);
    let h = ChainComplex::concentrated(0, 2);
    assert!(lax_compose_delta1(&unit_matrix(&g), &unit_matrix(&h)).is_err());
}

#[test]
fn broken_square_is_reported() {
    let mut r = random::rng(3);
    let g = ChainComplex::concentrated(0, 1);
    for _ in 0..50 {
        let m = random::delta1_matrix(&mut r, &g, &g, 6);
        let (top, _) = m.square().unwrap();
        if top.components().all(|(_, c)| c.is_zero()) {
            continue;
        }
        let mut bad = m.clone();
        bad.left[0] = m.left[0].add(&m.left[0]).unwrap();
        assert!(bad.validate().has_code("square"));
        return;
    }
    panic!("no instance with a nonzero square");
}

#[test]
fn cof_of_zero_source() {
    let b = ChainComplex::two_term(1, Matrix::from_i64(1, 1, &[3]));
    let x = ArrowObject::new(ChainMap::zero(&ChainComplex::zero(), &b)).unwrap();
    let y = cof_action(&x).unwrap();
    assert_eq!(y.source(), &b);
    assert!(y.map().degreewise_inverse().unwrap().is_some());
}

#[test]
fn cof_of_identity_is_acyclic() {
    let c = ChainComplex::two_term(1, Matrix::from_i64(2, 1, &[1, 2]));
    let x = ArrowObject::new(ChainMap::identity(&c)).unwrap();
    assert!(cof_action(&x).unwrap().target().is_acyclic().unwrap());
}

#[test]
fn fib_cof_scalar() {
    let x = arrow(&[2]);
    let (y, u) = unit_to_fib_cof(&x).unwrap();
    assert!(u.validate(&x, &y).is_valid());
    assert!(u.is_equivalence().unwrap());
    let (y, c) = cof_fib_to_unit(&x).unwrap();
    assert!(c.validate(&y, &x).is_valid());
    assert!(c.is_equivalence().unwrap());
}

#[test]
fn invalid_arrow_rejected() {
    let a = ChainComplex::two_term(1, Matrix::from_i64(1, 1, &[1]));
    let f = ChainMap::new(a.clone(), a, vec![Matrix::from_i64(1, 1, &[1]), Matrix::from_i64(1, 1, &[0])]).unwrap();
    assert!(ArrowObject::new(f).is_err());
}

fn random_poset(r: &mut impl Rng, n: usize) -> FinPoset {
    // Random DAG on 0..n with edges only upward, then transitive closure.
    let mut le = vec![vec![false; n]; n];
    for (i, row) in le.iter_mut().enumerate() {
        row[i] = true;
        for cell in row.iter_mut().skip(i + 1) {
            *cell = r.gen_bool(0.3);
        }
    }
    for k in 0..n {
        for i in 0..n {
            for j in 0..n {
                if le[i][k] && le[k][j] {
                    le[i][j] = true;
                }
            }
        }
    }
    // Relabel by a random permutation so the order is not always upward.
    let mut perm: Vec<usize> = (0..n).collect();
    for i in (1..n).rev() {
        perm.swap(i, r.gen_range(0..=i));
    }
    FinPoset::from_fn(n, |i, j| le[perm[i]][perm[j]])
}

fn random_int(r: &mut impl Rng, rows: usize, cols: usize) -> IntMatrix {
    IntMatrix::from_fn(rows, cols, |_, _| r.gen_range(-3..=3))
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(64))]

    #[test]
    fn zeta_mobius_inverse(seed in any::<u64>(), n in 0usize..8) {
        let p = random_poset(&mut random::rng(seed), n);
        prop_assert!(p.validate().is_valid());
        let mu = mobius(&p).unwrap();
        prop_assert!(zeta(&p).mul(&mu).unwrap() == IntMatrix::identity(n));
        prop_assert!(mu.mul(&zeta(&p)).unwrap() == IntMatrix::identity(n));
        prop_assert_eq!(mu.to_matrix(), mobius_by_inversion(&p));
    }

    #[test]
    fn k0_compose_assoc_unit(seed in any::<u64>(), a in 1usize..4, b in 1usize..5, c in 1usize..5, d in 1usize..4) {
        let mut r = random::rng(seed);
        let (p, q) = (random_poset(&mut r, b), random_poset(&mut r, c));
        let x = random_int(&mut r, a, b);
        let y = random_int(&mut r, b, c);
        let z = random_int(&mut r, c, d);
        let left = k0_compose(&k0_compose(&x, &y, &p).unwrap(), &z, &q).unwrap();
        let right = k0_compose(&x, &k0_compose(&y, &z, &q).unwrap(), &p).unwrap();
        prop_assert_eq!(left, right);
        prop_assert_eq!(k0_compose(&zeta(&p), &y, &p).unwrap(), y.clone());
        prop_assert_eq!(k0_compose(&y, &zeta(&q), &q).unwrap(), y);
    }

    #[test]
    fn hpushout_euler(seed in any::<u64>()) {
        let mut r = random::rng(seed);
        let p = random::complex_pair_map(&mut r, -1, 3, 2);
        let c = random::complex(&mut r, -1, 3, 2);
        let q = random::chain_map(&mut r, p.source(), &c);
        let po = hpushout(&p, &q).unwrap();
        prop_assert!(po.complex.validate().is_valid());
        prop_assert!(po.from_b.validate().is_valid());
        prop_assert!(po.from_c.validate().is_valid());
        prop_assert_eq!(
            po.complex.euler_characteristic(),
            p.target().euler_characteristic() + q.target().euler_characteristic() - p.source().euler_characteristic()
        );
    }
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(16))]

    #[test]
    fn random_matrices_are_valid(seed in any::<u64>()) {
        let mut r = random::rng(seed);
        let (g, h) = (random::gluing(&mut r), random::gluing(&mut r));
        let m = random::delta1_matrix(&mut r, &g, &h, 8);
        prop_assert!(m.validate().is_valid());
    }

    #[test]
    fn left_unit_law(seed in any::<u64>()) {
        let mut r = random::rng(seed);
        let (g, h) = (random::gluing(&mut r), random::gluing(&mut r));
        let m = random::delta1_matrix(&mut r, &g, &h, 8);
        let im = lax_compose_delta1(&unit_matrix(&h), &m).unwrap();
        prop_assert!(im.validate().is_valid());
        let cmp = unit_comparison(&m).unwrap();
        for t in 0..2 {
            for s in 0..2 {
                prop_assert!(cmp[t][s].validate().is_valid());
                prop_assert_eq!(cmp[t][s].source(), im.entry(t, s));
                prop_assert!(is_quasi_iso(&cmp[t][s]).unwrap());
            }
        }
    }

    #[test]
    fn composition_decategorifies(seed in any::<u64>()) {
        let mut r = random::rng(seed);
        let (gx, g, gz) = (random::gluing(&mut r), random::gluing(&mut r), random::gluing(&mut r));
        let m = random::delta1_matrix(&mut r, &gx, &g, 6);
        let n = random::delta1_matrix(&mut r, &g, &gz, 6);
        let c = lax_compose_delta1(&n, &m).unwrap();
        prop_assert!(c.validate().is_valid());
        let expected = k0_delta1_compose(&n.euler_matrix(), &m.euler_matrix(), g.euler_characteristic()).unwrap();
        prop_assert_eq!(c.euler_matrix(), expected.clone());
        if g.euler_characteristic() == 1 {
            prop_assert_eq!(k0_compose(&n.euler_matrix(), &m.euler_matrix(), &FinPoset::delta1()).unwrap(), expected);
        }
    }

    #[test]
    fn fib_cof_quasi_inverse(seed in any::<u64>()) {
        let mut r = random::rng(seed);
        let x = ArrowObject::new(random::complex_pair_map(&mut r, -1, 3, 3)).unwrap();
        let (y, u) = unit_to_fib_cof(&x).unwrap();
        prop_assert!(u.validate(&x, &y).is_valid());
        prop_assert!(u.is_equivalence().unwrap());
        let (y, c) = cof_fib_to_unit(&x).unwrap();
        prop_assert!(c.validate(&y, &x).is_valid());
        prop_assert!(c.is_equivalence().unwrap());
    }
}
