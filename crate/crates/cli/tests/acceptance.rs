//! Acceptance suite: ten criteria, exact arithmetic, each under a time limit.
//!
//! Runs as a plain binary (`harness = false`) and prints one line per
//! criterion. Oracles here are written against raw matrices rather than the
//! library's own checkers wherever that is possible.

use std::collections::BTreeMap;
use std::process::Command;
use std::time::{Duration, Instant};

use catcx_core::chain::{cone, ChainComplex, ChainMap};
use catcx_core::doc::{self, Document, ParseOptions};
use catcx_core::doldkan::{gamma, normalize, SimplicialVS};
use catcx_core::exactlin::{rank, Matrix, Rational};
use catcx_core::koszul::{duality_iso, koszul, subsets, AlgMatrix, FdAlgebra, FreeComplex, KoszulComplex};
use catcx_core::laxmat::{
    cof_action, cof_fib_to_unit, fib_action, k0_compose, lax_compose_delta1, mobius, unit_comparison,
    unit_matrix, unit_to_fib_cof, zeta, ArrowObject, FinPoset, IntMatrix,
};
use catcx_core::multicplx::{bicomplex_from_map, tot_to_cone};
use catcx_core::perverse::{
    amalgamate, encode_sheaf, encode_sheaf_flag, flag_factorization, verify_encoding, EncodingKind, PervDisk,
    SheafEncoding,
};
use catcx_core::sweep::{self, Sweep};
use catcx_core::{random, simplex};
use rand::seq::SliceRandom;
use rand::Rng;

type Check = Result<(), String>;

fn ensure(cond: bool, msg: impl FnOnce() -> String) -> Check {
    if cond {
        Ok(())
    } else {
        Err(msg())
    }
}

fn fail<E: std::fmt::Display>(e: E) -> String {
    e.to_string()
}

fn sweep(n: u64, check: impl Fn(u64) -> Check + Sync + std::panic::RefUnwindSafe) -> Result<String, String> {
    finish(sweep::run(0..n, sweep::catching(check)))
}

fn finish(s: Sweep) -> Result<String, String> {
    if s.passed() {
        Ok(format!("{} cases", s.cases))
    } else {
        Err(s.summary(3))
    }
}

// ---------------------------------------------------------------------------
// Raw-matrix oracles

fn id(n: usize) -> Matrix {
    Matrix::identity(n)
}

fn invertible(m: &Matrix) -> bool {
    m.is_square() && rank(m) == m.rows()
}

/// `dim H_k = dim C_k − rank d_k − rank d_{k+1}`.
fn homology_by_rank(c: &ChainComplex) -> BTreeMap<i64, usize> {
    c.degrees()
        .map(|k| (k, c.dim(k) - rank(&c.d(k)) - rank(&c.d(k + 1))))
        .collect()
}

fn nonzero_homology(c: &ChainComplex) -> Vec<(i64, usize)> {
    homology_by_rank(c).into_iter().filter(|&(_, d)| d > 0).collect()
}

fn acyclic(c: &ChainComplex) -> bool {
    nonzero_homology(c).is_empty()
}

fn d_squared_zero(c: &ChainComplex) -> bool {
    (c.lo()..=c.hi() + 1).all(|k| (&c.d(k - 1) * &c.d(k)).is_zero())
}

fn is_chain_map(f: &ChainMap) -> bool {
    let (s, t) = (f.source(), f.target());
    let lo = s.lo().min(t.lo()) - 1;
    let hi = s.hi().max(t.hi()) + 1;
    (lo..=hi).all(|k| &t.d(k) * &f.at(k) == &f.at(k - 1) * &s.d(k))
}

/// Quasi-isomorphism by acyclicity of the cone, with ranks computed here.
fn quasi_iso(f: &ChainMap) -> Result<bool, String> {
    Ok(acyclic(&cone(f).map_err(fail)?.complex))
}

// ---------------------------------------------------------------------------
// 1. Amalgamation

fn disk_with_psi(r: &mut impl Rng, psi: usize, max_phi: usize) -> PervDisk {
    let phi = r.gen_range(0..=max_phi);
    loop {
        let f = random::matrix(r, psi, phi, 3, 0.3);
        let g = random::matrix(r, phi, psi, 3, 0.3);
        if invertible(&(&id(psi) - &(&f * &g))) && invertible(&(&id(phi) - &(&g * &f))) {
            return PervDisk::new(phi, psi, f, g).unwrap();
        }
    }
}

fn criterion_1() -> Result<String, String> {
    sweep(1000, |seed| {
        let mut r = random::rng(seed);
        let psi = r.gen_range(0..=6);
        let p = disk_with_psi(&mut r, psi, 6);
        let q = disk_with_psi(&mut r, psi, 6);
        ensure(p.validate().is_valid() && q.validate().is_valid(), || "generated disk rejected".into())?;
        let a = amalgamate(&p, &q).map_err(fail)?;
        let t = &id(psi) - &(p.f() * p.g());
        let t2 = &id(psi) - &(q.f() * q.g());
        let expected = &t * &t2;
        let got = &id(psi) - &(a.f() * a.g());
        ensure(got == expected, || format!("monodromy {got} ≠ TT′ {expected}"))?;
        ensure(a.t_psi() == expected, || "t_psi disagrees".into())?;
        ensure(a.validate().is_valid(), || format!("amalgamate invalid: {}", a.validate()))
    })
}

// ---------------------------------------------------------------------------
// 2. Flags

fn criterion_2() -> Result<String, String> {
    let nontrivial = std::sync::atomic::AtomicUsize::new(0);
    let res = sweep(500, |seed| {
        let mut r = random::rng(seed);
        let n = r.gen_range(1..=4);
        let p = random::perv_flag(&mut r, n, 5);
        ensure(p.validate().is_valid(), || "generated flag rejected".into())?;
        if (0..n).any(|k| !p.delta(k).is_zero()) && (0..n).any(|k| !p.d(k).is_zero()) {
            nontrivial.fetch_add(1, std::sync::atomic::Ordering::Relaxed);
        }
        for k in 0..=n {
            let dim = p.dims()[k];
            let dd = if k == 0 { Matrix::zeros(dim, dim) } else { p.d(k - 1) * p.delta(k - 1) };
            let ddl = if k == n { Matrix::zeros(dim, dim) } else { p.delta(k) * p.d(k) };
            let total = &(&id(dim) - &dd) - &ddl;
            let a = &(&id(dim) - &dd) * &(&id(dim) - &ddl);
            let b = &(&id(dim) - &ddl) * &(&id(dim) - &dd);
            ensure(total == a && total == b, || format!("factorization fails on A_{k}"))?;
            ensure(p.monodromy(k) == total, || format!("monodromy disagrees on A_{k}"))?;
        }
        ensure(flag_factorization(&p).is_valid(), || "library factorization check failed".into())
    })?;
    let nt = nontrivial.load(std::sync::atomic::Ordering::Relaxed);
    Ok(format!("{res}, {nt} with d and δ both nonzero"))
}

// ---------------------------------------------------------------------------
// 3. Sheaf encodings

/// Every identity of an encoding, checked with raw matrices.
fn encoding_holds(e: &SheafEncoding) -> bool {
    let n = e.restrictions.len();
    if e.monodromies.len() != n || e.homotopies.len() != n {
        return false;
    }
    (0..n).all(|i| {
        let (r, t, h) = (&e.restrictions[i], &e.monodromies[i], &e.homotopies[i]);
        let acted = match e.kind {
            EncodingKind::Sheaf => r.target(),
            EncodingKind::Cosheaf => r.source(),
        };
        if t.source() != acted || t.target() != acted || h.source() != r.source() || h.target() != r.target() {
            return false;
        }
        if !is_chain_map(r) || !is_chain_map(t) {
            return false;
        }
        if !acted.degrees().all(|k| invertible(&t.at(k))) {
            return false;
        }
        let (s, g) = (r.source(), r.target());
        let lo = s.lo().min(g.lo()) - 1;
        let hi = s.hi().max(g.hi()) + 1;
        (lo..=hi).all(|k| {
            let lhs = match e.kind {
                EncodingKind::Sheaf => &(&t.at(k) * &r.at(k)) - &r.at(k),
                EncodingKind::Cosheaf => &(&r.at(k) * &t.at(k)) - &r.at(k),
            };
            let rhs = &(&g.d(k + 1) * &h.at(k)) + &(&h.at(k - 1) * &s.d(k));
            lhs == rhs
        })
    })
}

fn bump_map(f: &ChainMap, k: i64, a: usize, b: usize) -> ChainMap {
    let comps = f
        .components()
        .map(|(j, c)| {
            let mut c = c.clone();
            if j == k {
                c.set(a, b, &c[(a, b)] + &Rational::from_integer(1.into()));
            }
            c
        })
        .collect();
    ChainMap::new(f.source().clone(), f.target().clone(), comps).unwrap()
}

#[derive(Default)]
struct Tally {
    corrupt: usize,
    harmless: usize,
}

/// Perturbs every entry once. Detection must match the oracle exactly, and a
/// perturbed monodromy must always be caught.
fn perturbations(e: &SheafEncoding, tally: &mut Tally) -> Check {
    let mut judge = |bad: SheafEncoding, what: &str, always: bool| -> Check {
        let detected = !verify_encoding(&bad).is_valid();
        let broken = !encoding_holds(&bad);
        ensure(detected == broken, || format!("{what}: detected {detected}, oracle says broken {broken}"))?;
        ensure(!always || detected, || format!("{what}: undetected"))?;
        if broken {
            tally.corrupt += 1;
        } else {
            tally.harmless += 1;
        }
        Ok(())
    };
    for i in 0..e.restrictions.len() {
        for (k, m) in e.restrictions[i].components() {
            for (a, b) in entries(m) {
                let mut bad = e.clone();
                bad.restrictions[i] = bump_map(&e.restrictions[i], k, a, b);
                judge(bad, &format!("r{i} deg {k} ({a},{b})"), false)?;
            }
        }
        for (k, m) in e.monodromies[i].components() {
            for (a, b) in entries(m) {
                let mut bad = e.clone();
                bad.monodromies[i] = bump_map(&e.monodromies[i], k, a, b);
                judge(bad, &format!("T{i} deg {k} ({a},{b})"), true)?;
            }
        }
        for (k, m) in e.homotopies[i].components() {
            for (a, b) in entries(m) {
                let mut bad = e.clone();
                let x = &m[(a, b)] + &Rational::new(1.into(), 3.into());
                bad.homotopies[i] = e.homotopies[i].with_entry(k, a, b, x).unwrap();
                judge(bad, &format!("h{i} deg {k} ({a},{b})"), false)?;
            }
        }
    }
    Ok(())
}

fn entries(m: &Matrix) -> Vec<(usize, usize)> {
    (0..m.rows()).flat_map(|a| (0..m.cols()).map(move |b| (a, b))).collect()
}

fn criterion_3() -> Result<String, String> {
    let totals = std::sync::Mutex::new(Tally::default());
    let res = sweep(150, |seed| {
        let mut r = random::rng(seed);
        let p = random::perv_disk(&mut r, 4);
        let n = r.gen_range(1..=3);
        let flag = random::perv_flag(&mut r, n, 3);
        let encodings = [
            encode_sheaf(&p, false).map_err(fail)?,
            encode_sheaf(&p, true).map_err(fail)?,
            encode_sheaf_flag(&flag).map_err(fail)?,
        ];
        let mut tally = Tally::default();
        for e in &encodings {
            ensure(verify_encoding(e).is_valid(), || format!("rejected: {}", verify_encoding(e)))?;
            ensure(encoding_holds(e), || "oracle rejects a generated encoding".into())?;
            perturbations(e, &mut tally)?;
        }
        let mut t = totals.lock().unwrap();
        t.corrupt += tally.corrupt;
        t.harmless += tally.harmless;
        Ok(())
    })?;
    let t = totals.lock().unwrap();
    Ok(format!(
        "{res}, {} corrupting perturbations all detected, {} left every identity intact",
        t.corrupt, t.harmless
    ))
}

// ---------------------------------------------------------------------------
// 4. Koszul

fn two_term(alg: &FdAlgebra, lambda: &[Rational]) -> FreeComplex {
    let mut d = AlgMatrix::zeros(alg, 1, 1);
    d.set(0, 0, lambda.to_vec());
    FreeComplex {
        algebra: alg.clone(),
        lo: 0,
        ranks: vec![1, 1],
        diffs: vec![d],
    }
}

type Labels = Vec<Vec<Vec<bool>>>;

/// Tensor over `R` of free complexes in degrees `0..`, each generator
/// labelled by which factors contributed their degree-one generator.
fn tensor_over_r(a: &FreeComplex, la: &Labels, b: &FreeComplex, lb: &Labels) -> (FreeComplex, Labels) {
    let alg = &a.algebra;
    let top = a.hi() + b.hi();
    let mut labels: Labels = vec![Vec::new(); (top + 1) as usize];
    let mut index = std::collections::HashMap::new();
    for n in 0..=top {
        for i in 0.max(n - b.hi())..=a.hi().min(n) {
            let j = n - i;
            for x in 0..a.rank(i) {
                for y in 0..b.rank(j) {
                    let mut l = la[i as usize][x].clone();
                    l.extend(&lb[j as usize][y]);
                    index.insert((i, x, j, y), labels[n as usize].len());
                    labels[n as usize].push(l);
                }
            }
        }
    }
    let diffs = (1..=top)
        .map(|n| {
            let mut d = AlgMatrix::zeros(alg, labels[(n - 1) as usize].len(), labels[n as usize].len());
            for i in 0.max(n - b.hi())..=a.hi().min(n) {
                let j = n - i;
                for x in 0..a.rank(i) {
                    for y in 0..b.rank(j) {
                        let col = index[&(i, x, j, y)];
                        if i > 0 {
                            for x2 in 0..a.rank(i - 1) {
                                d.set(index[&(i - 1, x2, j, y)], col, a.d(i).get(x2, x).to_vec());
                            }
                        }
                        if j > 0 {
                            for y2 in 0..b.rank(j - 1) {
                                let e: Vec<Rational> = b.d(j).get(y2, y).to_vec();
                                let e = if i % 2 == 1 { e.iter().map(|v| -v).collect() } else { e };
                                d.set(index[&(i, x, j - 1, y2)], col, e);
                            }
                        }
                    }
                }
            }
            d
        })
        .collect();
    let ranks = labels.iter().map(Vec::len).collect();
    (FreeComplex { algebra: alg.clone(), lo: 0, ranks, diffs }, labels)
}

fn matches_iterated_tensor(k: &KoszulComplex) -> Check {
    let alg = k.algebra();
    let n = k.n();
    let mut acc = FreeComplex { algebra: alg.clone(), lo: 0, ranks: vec![1], diffs: vec![] };
    let mut labels: Labels = vec![vec![vec![]]];
    for l in k.lambdas() {
        let factor: Labels = vec![vec![vec![false]], vec![vec![true]]];
        (acc, labels) = tensor_over_r(&acc, &labels, &two_term(alg, l), &factor);
    }
    let real_k = k.realize();
    let real_t = acc.realize();
    ensure(real_k.dims() == real_t.dims(), || "dimensions differ from the tensor".into())?;
    for deg in 1..=n {
        let pos = |d: usize, s: &[usize]| {
            let ind: Vec<bool> = (0..n).map(|i| s.contains(&i)).collect();
            labels[d].iter().position(|l| *l == ind).unwrap()
        };
        let (dk, dt) = (k.d(deg as i64), acc.d(deg as i64));
        for (c, s) in subsets(n, deg).iter().enumerate() {
            for (r, u) in subsets(n, deg - 1).iter().enumerate() {
                ensure(dk.get(r, c) == dt.get(pos(deg - 1, u), pos(deg, s)), || {
                    format!("entry differs in degree {deg}")
                })?;
            }
        }
    }
    Ok(())
}

fn criterion_4() -> Result<String, String> {
    let general = sweep(150, |seed| {
        let mut r = random::rng(seed);
        let alg = random::fd_algebra(&mut r, 6);
        let n = r.gen_range(1..=4);
        let lambdas: Vec<_> = (0..n).map(|_| random::algebra_element(&mut r, &alg)).collect();
        let k = koszul(&alg, &lambdas).map_err(fail)?;
        ensure(k.free().validate().is_valid(), || "d² ≠ 0 over R".into())?;
        let real = k.realize();
        ensure(d_squared_zero(&real), || "realized d² ≠ 0".into())?;
        for deg in 2..=n as i64 {
            ensure(k.d(deg - 1).mul(&alg, &k.d(deg)).map_err(fail)?.is_zero(), || "d² ≠ 0 over R".into())?;
        }
        matches_iterated_tensor(&k)?;

        let iso = duality_iso(&k).map_err(fail)?;
        ensure(iso.verify().is_valid(), || format!("duality: {}", iso.verify()))?;
        let m = iso.realize().map_err(fail)?;
        ensure(is_chain_map(&m), || "duality is not a chain map".into())?;
        ensure(m.source().degrees().all(|d| invertible(&m.at(d))), || "duality not invertible".into())?;

        // R/(λ): the ideal is spanned by the columns of the multiplication maps
        let mults: Vec<Matrix> = lambdas.iter().map(|l| alg.mult_matrix(l)).collect();
        let ideal = Matrix::hstack(&mults.iter().collect::<Vec<_>>()).map_err(fail)?;
        let quotient = alg.dim() - rank(&ideal);
        let h0 = homology_by_rank(&real)[&0];
        ensure(h0 == quotient, || format!("H_0 = {h0}, dim R/(λ) = {quotient}"))
    })?;
    let monomial = sweep(150, |seed| {
        let mut r = random::rng(seed ^ 0x5eed);
        let m = random::monomial_algebra(&mut r, 6);
        let vars = m.basis[0].len();
        let n = r.gen_range(1..=(vars + 1).min(4));
        let exps: Vec<Vec<u32>> = (0..n).map(|_| (0..vars).map(|_| r.gen_range(0..=2)).collect()).collect();
        let lambdas: Vec<_> = exps.iter().map(|e| m.monomial(e)).collect();
        let k = koszul(&m.algebra, &lambdas).map_err(fail)?;
        let h0 = homology_by_rank(&k.realize())[&0];
        // standard monomials not divisible by any λ that survives in R
        let live: Vec<&Vec<u32>> = exps
            .iter()
            .zip(&lambdas)
            .filter(|(_, l)| l.iter().any(|x| *x != Rational::from_integer(0.into())))
            .map(|(e, _)| e)
            .collect();
        let count = m
            .basis
            .iter()
            .filter(|b| !live.iter().any(|e| e.iter().zip(b.iter()).all(|(x, y)| x <= y)))
            .count();
        ensure(h0 == count, || format!("H_0 = {h0}, monomial count {count}"))
    })?;
    Ok(format!("{general} over random algebras, {monomial} over monomial quotients"))
}

// ---------------------------------------------------------------------------
// 5. Categorified 2-simplex

fn criterion_5() -> Result<String, String> {
    sweep(200, |seed| {
        let mut r = random::rng(seed);
        let (u, v) = random::composable_pair(&mut r, 12);
        let total = u.source().total_dim() + u.target().total_dim() + v.target().total_dim();
        ensure(total <= 12, || format!("total dimension {total}"))?;
        let c = simplex::cc2(&u, &v).map_err(fail)?;
        let (a, b, h) = (&c.level1.alpha, &c.level1.beta, &c.level1.h);
        ensure(is_chain_map(a) && is_chain_map(b), || "α or β is not a chain map".into())?;
        let ba = b.after(a).map_err(fail)?;
        let (s, t) = (ba.source(), ba.target());
        let null = (s.lo() - 1..=s.hi() + 1).all(|k| ba.at(k) == &(&t.d(k + 1) * &h.at(k)) + &(&h.at(k - 1) * &s.d(k)));
        ensure(null, || "βα ≠ dh + hd".into())?;
        ensure(d_squared_zero(&c.level2), || "level 2 has d² ≠ 0".into())?;
        ensure(acyclic(&c.level2), || format!("homology {:?}", nonzero_homology(&c.level2)))
    })
}

// ---------------------------------------------------------------------------
// 6. Dold–Kan

fn degenerate_free_dims(x: &SimplicialVS) -> Vec<usize> {
    (0..=x.top())
        .map(|n| {
            let spans: Vec<&Matrix> = (0..n).map(|i| x.degeneracy(n - 1, i)).collect();
            let r = if spans.is_empty() { 0 } else { rank(&Matrix::hstack(&spans).unwrap()) };
            x.dims()[n] - r
        })
        .collect()
}

fn criterion_6() -> Result<String, String> {
    let round = sweep(200, |seed| {
        let mut r = random::rng(seed);
        let len = r.gen_range(1..=4);
        let c = random::complex(&mut r, 0, len, 4);
        let top = len - 1 + r.gen_range(0..=1);
        let x = gamma(&c, top).map_err(fail)?;
        ensure(x.validate().is_valid(), || format!("Γ(C) invalid: {}", x.validate()))?;
        let back = normalize(&x).map_err(fail)?;
        ensure(back == c.with_support(0, top as i64).map_err(fail)?, || "N Γ C ≠ C".into())
    })?;
    let d2 = sweep(100, |seed| {
        let mut r = random::rng(seed ^ 0xdead);
        let x = random::simplicial_vs(&mut r, 3, 2);
        let c = normalize(&x).map_err(fail)?;
        ensure(d_squared_zero(&c), || "normalized d² ≠ 0".into())?;
        ensure(c.dims() == degenerate_free_dims(&x).as_slice(), || "normalized dimensions".into())
    })?;
    Ok(format!("{round} round trips, {d2} simplicial objects"))
}

// ---------------------------------------------------------------------------
// 7. K₀ calculus

fn int_mul(a: &IntMatrix, b: &IntMatrix) -> IntMatrix {
    IntMatrix::from_fn(a.rows(), b.cols(), |i, j| (0..a.cols()).map(|k| a.get(i, k) * b.get(k, j)).sum())
}

/// Random order on `n` points: random edges along a random linear order,
/// then the transitive closure.
fn random_poset(r: &mut impl Rng, n: usize) -> FinPoset {
    let mut order: Vec<usize> = (0..n).collect();
    order.shuffle(r);
    let p = r.gen_range(0.0..0.7);
    let mut le = vec![vec![false; n]; n];
    for i in 0..n {
        le[order[i]][order[i]] = true;
        for j in i + 1..n {
            le[order[i]][order[j]] = r.gen_bool(p);
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
    FinPoset::new((0..n).map(|i| i.to_string()).collect(), le).unwrap()
}

fn all_posets(n: usize) -> Vec<FinPoset> {
    let off: Vec<(usize, usize)> = (0..n).flat_map(|i| (0..n).filter(move |&j| j != i).map(move |j| (i, j))).collect();
    (0u32..1 << off.len())
        .filter_map(|bits| {
            let mut le = vec![vec![false; n]; n];
            (0..n).for_each(|i| le[i][i] = true);
            for (b, &(i, j)) in off.iter().enumerate() {
                le[i][j] = bits >> b & 1 == 1;
            }
            let p = FinPoset::new((0..n).map(|i| i.to_string()).collect(), le).unwrap();
            p.validate().is_valid().then_some(p)
        })
        .collect()
}

fn zeta_mobius_inverse(p: &FinPoset) -> Check {
    let n = p.len();
    let z = IntMatrix::from_fn(n, n, |t, s| p.le(s, t) as i64);
    ensure(zeta(p) == z, || "ζ disagrees with the order".into())?;
    let mu = mobius(p).map_err(fail)?;
    let one = IntMatrix::identity(n);
    ensure(int_mul(&z, &mu) == one && int_mul(&mu, &z) == one, || "ζμ ≠ I".into())
}

fn criterion_7() -> Result<String, String> {
    let exhaustive: Vec<FinPoset> = (0..=4).flat_map(all_posets).collect();
    for p in &exhaustive {
        zeta_mobius_inverse(p)?;
    }
    let sampled = sweep(800, |seed| {
        let mut r = random::rng(seed);
        let n = (seed % 8) as usize;
        let qn = r.gen_range(0..=7);
        let (p, q) = (random_poset(&mut r, n), random_poset(&mut r, qn));
        ensure(p.validate().is_valid(), || "generated poset invalid".into())?;
        zeta_mobius_inverse(&p)?;
        let mut m = |rows: usize, cols: usize| IntMatrix::from_fn(rows, cols, |_, _| r.gen_range(-3..=3));
        let (a, b) = (r_dim(seed), r_dim(seed >> 3));
        let nm = m(a, p.len());
        let mm = m(p.len(), q.len());
        let lm = m(q.len(), b);
        let left = k0_compose(&k0_compose(&nm, &mm, &p).map_err(fail)?, &lm, &q).map_err(fail)?;
        let right = k0_compose(&nm, &k0_compose(&mm, &lm, &q).map_err(fail)?, &p).map_err(fail)?;
        ensure(left == right, || "k0_compose not associative".into())?;
        ensure(k0_compose(&zeta(&p), &mm, &p).map_err(fail)? == mm, || "ζ not a left unit".into())?;
        ensure(k0_compose(&nm, &zeta(&p), &p).map_err(fail)? == nm, || "ζ not a right unit".into())
    })?;
    let n = IntMatrix::new(1, 2, vec![2, 3]).unwrap();
    let m = IntMatrix::new(2, 1, vec![5, 7]).unwrap();
    let v = k0_compose(&n, &m, &FinPoset::delta1()).map_err(fail)?;
    let (a0, a1, b0, b1) = (2, 3, 5, 7);
    ensure(v.get(0, 0) == a0 * b0 - a1 * b0 + a1 * b1 && v.get(0, 0) == 16, || format!("Δ¹ value {}", v.get(0, 0)))?;
    Ok(format!("{} posets exhaustively, {sampled} sampled, Δ¹ value 16", exhaustive.len()))
}

fn r_dim(seed: u64) -> usize {
    1 + (seed % 3) as usize
}

// ---------------------------------------------------------------------------
// 8. Chain-level lax calculus

fn euler(c: &ChainComplex) -> i64 {
    c.degrees().map(|k| if k % 2 == 0 { 1 } else { -1 } * c.dim(k) as i64).sum()
}

fn criterion_8() -> Result<String, String> {
    let unit = sweep(100, |seed| {
        let mut r = random::rng(seed);
        let (g, h) = (random::gluing(&mut r), random::gluing(&mut r));
        let m = random::delta1_matrix(&mut r, &g, &h, 8);
        let im = lax_compose_delta1(&unit_matrix(&h), &m).map_err(fail)?;
        let cmp = unit_comparison(&m).map_err(fail)?;
        for t in 0..2 {
            for s in 0..2 {
                let f = &cmp[t][s];
                ensure(f.source() == im.entry(t, s) && f.target() == m.entry(t, s), || "comparison ends".into())?;
                ensure(is_chain_map(f), || format!("comparison ({t},{s}) is not a chain map"))?;
                ensure(quasi_iso(f)?, || format!("comparison ({t},{s}) has homology in its cone"))?;
            }
        }
        Ok(())
    })?;
    let chi = sweep(100, |seed| {
        let mut r = random::rng(seed ^ 0xc41);
        let (gx, g, gz) = (random::gluing(&mut r), random::gluing(&mut r), random::gluing(&mut r));
        let m = random::delta1_matrix(&mut r, &gx, &g, 6);
        let n = random::delta1_matrix(&mut r, &g, &gz, 6);
        let c = lax_compose_delta1(&n, &m).map_err(fail)?;
        let e = |x: &catcx_core::laxmat::Delta1ChainMatrix| -> [[i64; 2]; 2] {
            [[euler(x.entry(0, 0)), euler(x.entry(0, 1))], [euler(x.entry(1, 0)), euler(x.entry(1, 1))]]
        };
        let (en, em, chi_g) = (e(&n), e(&m), euler(&g));
        let mid = [[1, 0], [-chi_g, 1]];
        let mut expected = [[0i64; 2]; 2];
        for (u, row) in expected.iter_mut().enumerate() {
            for (s, cell) in row.iter_mut().enumerate() {
                *cell = (0..2).flat_map(|i| (0..2).map(move |j| (i, j))).map(|(i, j)| en[u][i] * mid[i][j] * em[j][s]).sum();
            }
        }
        ensure(e(&c) == expected, || format!("χ(N∘M) = {:?}, expected {expected:?}", e(&c)))
    })?;
    let arrows = sweep(200, |seed| {
        let mut r = random::rng(seed ^ 0xa77);
        let x = ArrowObject::new(random::complex_pair_map(&mut r, -1, 3, 3)).map_err(fail)?;
        let (y, u) = unit_to_fib_cof(&x).map_err(fail)?;
        ensure(y == fib_action(&cof_action(&x).map_err(fail)?).map_err(fail)?, || "fib∘cof target".into())?;
        ensure(u.validate(&x, &y).is_valid(), || "x → fib cof x does not commute".into())?;
        ensure(quasi_iso(&u.top)? && quasi_iso(&u.bottom)?, || "x → fib cof x not an equivalence".into())?;
        let (z, c) = cof_fib_to_unit(&x).map_err(fail)?;
        ensure(z == cof_action(&fib_action(&x).map_err(fail)?).map_err(fail)?, || "cof∘fib source".into())?;
        ensure(c.validate(&z, &x).is_valid(), || "cof fib x → x does not commute".into())?;
        ensure(quasi_iso(&c.top)? && quasi_iso(&c.bottom)?, || "cof fib x → x not an equivalence".into())
    })?;
    Ok(format!("unit law {unit}, χ {chi}, arrows {arrows}"))
}

// ---------------------------------------------------------------------------
// 9. Totalization

fn permutations(n: usize) -> Vec<Vec<usize>> {
    if n == 0 {
        return vec![vec![]];
    }
    permutations(n - 1)
        .into_iter()
        .flat_map(|p| {
            (0..n).map(move |i| {
                let mut q = p.clone();
                q.insert(i, n - 1);
                q
            })
        })
        .collect()
}

fn criterion_9() -> Result<String, String> {
    let multi = sweep(200, |seed| {
        let mut r = random::rng(seed);
        let n = r.gen_range(1..=3);
        let m = random::multicomplex(&mut r, n, 3, 2);
        let t = m.totalize().map_err(fail)?;
        ensure(d_squared_zero(&t), || "totalization has d² ≠ 0".into())?;
        let h = homology_by_rank(&t);
        for perm in permutations(n) {
            let tp = m.permute_axes(&perm).map_err(fail)?.totalize().map_err(fail)?;
            ensure(d_squared_zero(&tp), || format!("{perm:?}: d² ≠ 0"))?;
            ensure(tp.dims() == t.dims() && tp.lo() == t.lo(), || format!("{perm:?}: dimensions change"))?;
            ensure(homology_by_rank(&tp) == h, || format!("{perm:?}: homology changes"))?;
        }
        Ok(())
    })?;
    let cones = sweep(200, |seed| {
        let mut r = random::rng(seed ^ 0x707);
        let lo = r.gen_range(-2..=1);
        let f = random::complex_pair_map(&mut r, lo, 3, 3);
        let c = cone(&f).map_err(fail)?.complex;
        let tot = bicomplex_from_map(&f).map_err(fail)?.totalize().map_err(fail)?;
        ensure(d_squared_zero(&tot), || "d² ≠ 0".into())?;
        let phi = tot_to_cone(&f).map_err(fail)?;
        ensure(phi.target() == &c, || "comparison does not land in the cone".into())?;
        ensure(is_chain_map(&phi), || "tot → cone is not a chain map".into())?;
        ensure(phi.source().degrees().all(|k| invertible(&phi.at(k))), || "tot → cone not invertible".into())?;
        ensure(nonzero_homology(&tot) == nonzero_homology(&c), || "homology differs".into())
    })?;
    Ok(format!("{multi} multicomplexes over all axis orders, {cones} two-row bicomplexes"))
}

// ---------------------------------------------------------------------------
// 10. Command line

const DISK_P: &str = r#"{"type":"perv_disk","dim_phi":1,"dim_psi":1,"f":[["2"]],"g":[["1"]]}"#;
const DISK_Q: &str = r#"{"type":"perv_disk","dim_phi":1,"dim_psi":1,"f":[["3"]],"g":[["1"]]}"#;
const ROW: &str = r#"{"type":"int_matrix","rows":1,"cols":2,"entries":[[2,3]]}"#;
const COL: &str = r#"{"type":"int_matrix","rows":2,"cols":1,"entries":[[5],[7]]}"#;
const DELTA1: &str = r#"{"type":"fin_poset","labels":["0","1"],"le":[[1,1],[0,1]]}"#;

const GOLDEN_VALIDATE: &str = concat!(
    r#"{"type":"result","command":"validate","input":"perv_disk","status":"valid","#,
    r#""report":{"type":"report","valid":true,"violations":[]},"T":[["-1"]],"T_phi":[["-1"]]}"#,
    "\n"
);
const GOLDEN_AMALGAMATE: &str = concat!(
    r#"{"type":"result","command":"amalgamate","status":"ok","#,
    r#""output":{"type":"perv_disk","dim_phi":2,"dim_psi":1,"f":[["2","3"]],"g":[["-2"],["1"]]},"#,
    r#""monodromy":[["2"]]}"#,
    "\n"
);
const GOLDEN_K0: &str = concat!(
    r#"{"type":"result","command":"k0-compose","status":"ok","#,
    r#""output":{"type":"int_matrix","rows":1,"cols":1,"entries":[[16]]},"value":"16"}"#,
    "\n"
);

struct Cli {
    dir: tempfile::TempDir,
}

impl Cli {
    fn new() -> Self {
        Self { dir: tempfile::tempdir().unwrap() }
    }

    fn put(&self, name: &str, text: &str) -> String {
        let p = self.dir.path().join(name);
        std::fs::write(&p, text).unwrap();
        p.to_string_lossy().into_owned()
    }

    fn put_doc(&self, name: &str, d: Document) -> String {
        self.put(name, &doc::to_string(&d, true))
    }

    /// Runs through `--output`, checks stdout-mode gives the same bytes, and
    /// returns `(exit, output text)`.
    fn run(&self, args: &[&str], out_name: &str) -> Result<(i32, String), String> {
        let out = self.dir.path().join(out_name);
        let bin = env!("CARGO_BIN_EXE_catcx");
        let status = Command::new(bin)
            .args(args)
            .arg("--output")
            .arg(&out)
            .env_remove(doc::MAX_DIM_VAR)
            .output()
            .map_err(fail)?;
        let text = std::fs::read_to_string(&out).map_err(fail)?;
        let again = Command::new(bin).args(args).env_remove(doc::MAX_DIM_VAR).output().map_err(fail)?;
        ensure(again.stdout == text.as_bytes(), || format!("{args:?}: stdout differs from --output"))?;
        ensure(again.status.code() == status.status.code(), || format!("{args:?}: exit code unstable"))?;
        Ok((status.status.code().unwrap_or(-1), text))
    }
}

/// Output must parse and serialize back to exactly the same bytes.
fn round_trips(text: &str) -> Check {
    let parsed = doc::parse_document(text, &ParseOptions::default().strict(true)).map_err(fail)?;
    ensure(doc::to_string(&parsed.document, false) == text, || "output does not round-trip bit-exactly".into())
}

fn criterion_10() -> Result<String, String> {
    use catcx_core::chain::ChainComplex as C;
    let cli = Cli::new();
    let p = cli.put("p.json", DISK_P);
    let q = cli.put("q.json", DISK_Q);
    let row = cli.put("n.json", ROW);
    let col = cli.put("m.json", COL);
    let d1 = cli.put("delta1.json", DELTA1);
    let one = |x: i64| Matrix::from_i64(1, 1, &[x]);
    let s = C::concentrated(0, 1);
    let a = C::two_term(1, one(1));
    let a_file = cli.put_doc("a.json", Document::ChainComplex(a.clone()));
    let twice = cli.put_doc("twice.json", Document::ChainMap(ChainMap::new(s.clone(), s.clone(), vec![one(2)]).unwrap()));
    let ident = cli.put_doc("id.json", Document::Arrow(ChainMap::identity(&s)));
    let multi = cli.put_doc(
        "multi.json",
        Document::MultiComplex(bicomplex_from_map(&ChainMap::identity(&a)).unwrap()),
    );
    let alg = {
        let r = |x: i64| Rational::from_integer(x.into());
        // ℚ[x]/(x²)
        let structure = vec![vec![vec![r(1), r(0)], vec![r(0), r(1)]], vec![vec![r(0), r(1)], vec![r(0), r(0)]]];
        FdAlgebra::new(2, structure, vec![r(1), r(0)]).unwrap()
    };
    let x = alg.basis_element(1);
    let kz = cli.put_doc("koszul.json", Document::Koszul(doc::KoszulData { algebra: alg, lambdas: vec![x] }));
    let flag = cli.put(
        "flag.json",
        r#"{"type":"perv_flag","dims":[1,1],"d":[[["2"]]],"delta":[[["1"]]]}"#,
    );
    let unit = cli.put_doc("unit.json", Document::Delta1ChainMatrix(unit_matrix(&s)));

    let mut checked = 0;
    let mut seen = std::collections::BTreeSet::new();
    let mut expect = |args: &[&str], out: &str, code: i32, golden: Option<&str>| -> Result<String, String> {
        let (got, text) = cli.run(args, out)?;
        ensure(got == code, || format!("{args:?}: exit {got}, expected {code}\n{text}"))?;
        if let Some(g) = golden {
            ensure(text == g, || format!("{args:?}: output\n{text}differs from\n{g}"))?;
        }
        round_trips(&text).map_err(|e| format!("{args:?}: {e}"))?;
        checked += 1;
        seen.insert(args[0].to_string());
        Ok(cli.dir.path().join(out).to_string_lossy().into_owned())
    };

    // the three worked examples, byte for byte
    expect(&["validate", &p], "v.json", 0, Some(GOLDEN_VALIDATE))?;
    let amal = expect(&["amalgamate", &p, &q], "amal.json", 0, Some(GOLDEN_AMALGAMATE))?;
    expect(&["k0-compose", &row, &col, &d1], "k0.json", 0, Some(GOLDEN_K0))?;
    expect(&["k0-compose", &row, &col], "k0b.json", 0, Some(&GOLDEN_K0))?;

    // every other command on small inputs
    expect(&["monodromy", &amal], "mono.json", 0, None)?;
    expect(&["homology", &a_file], "h.json", 0, None)?;
    expect(&["cone", &twice], "cone.json", 0, None)?;
    expect(&["tensor", &a_file, &a_file], "t.json", 0, None)?;
    expect(&["tensor", &twice, &twice], "tm.json", 0, None)?;
    expect(&["hom-complex", &a_file, &a_file], "hom.json", 0, None)?;
    expect(&["totalize", &multi], "tot.json", 0, None)?;
    expect(&["homology", &multi], "hm.json", 0, None)?;
    expect(&["koszul", &kz], "k.json", 0, None)?;
    expect(&["koszul-dual", &kz], "kd.json", 0, None)?;
    expect(&["monodromy", &flag], "mf.json", 0, None)?;
    expect(&["embed-cube", &flag], "cube.json", 0, None)?;
    let enc = expect(&["encode-sheaf", &p], "enc.json", 0, None)?;
    expect(&["encode-sheaf", &p, "--dual"], "cos.json", 0, None)?;
    expect(&["encode-sheaf", &flag], "encf.json", 0, None)?;
    expect(&["verify-encoding", &enc], "ver.json", 0, None)?;
    let sv = expect(&["dk-gamma", &a_file, "--top", "3"], "sv.json", 0, None)?;
    expect(&["dk-normalize", &sv], "norm.json", 0, None)?;
    expect(&["zeta", &d1], "z.json", 0, None)?;
    expect(&["mobius", &d1], "mu.json", 0, None)?;
    expect(&["lax-compose", &unit, &unit], "lax.json", 0, None)?;
    expect(&["cof", &twice], "cof.json", 0, None)?;
    expect(&["fib", &ident], "fib.json", 0, None)?;
    expect(&["cc2", &ident, &twice], "cc2.json", 0, None)?;
    for (name, file) in [("cube", "cube.json"), ("enc", "enc.json"), ("norm", "norm.json")] {
        let path = cli.dir.path().join(file).to_string_lossy().into_owned();
        expect(&["validate", &path], &format!("val-{name}.json"), 0, None)?;
    }

    // exit 1: validation failures
    let bad = cli.put("bad.json", &DISK_P.replace(r#""2""#, r#""1""#));
    expect(&["validate", &bad], "bad-out.json", 1, None)?;
    expect(&["encode-sheaf", &bad], "bad-enc.json", 1, None)?;
    let not_map = cli.put_doc(
        "notmap.json",
        Document::ChainMap(ChainMap::new(a.clone(), a.clone(), vec![one(1), one(0)]).unwrap()),
    );
    expect(&["cone", &not_map], "bad-cone.json", 1, None)?;

    // exit 2: malformed input
    let trunc = cli.put("trunc.json", &DISK_P[..30]);
    expect(&["validate", &trunc], "e1.json", 2, None)?;
    let tag = cli.put("tag.json", r#"{"type":"perv_blob"}"#);
    expect(&["validate", &tag], "e2.json", 2, None)?;
    let unreduced = cli.put("unreduced.json", &DISK_P.replace(r#""2""#, r#""4/2""#));
    expect(&["validate", &unreduced], "e3.json", 0, None)?;
    expect(&["validate", &unreduced, "--strict"], "e4.json", 2, None)?;
    expect(&["amalgamate", &p], "e5.json", 2, None)?;
    expect(&["zeta", &p], "e6.json", 2, None)?;
    drop(expect);
    let missing: Vec<&str> = catcx_cli::COMMANDS.iter().map(|c| c.0).filter(|c| !seen.contains(*c)).collect();
    ensure(missing.is_empty(), || format!("subcommands never run: {missing:?}"))?;
    Ok(format!("{checked} invocations covering all {} subcommands", seen.len()))
}

// ---------------------------------------------------------------------------

struct Criterion {
    name: &'static str,
    limit: Duration,
    run: fn() -> Result<String, String>,
}

const CRITERIA: [Criterion; 10] = [
    Criterion { name: "amalgamation monodromy = TT′", limit: Duration::from_secs(5), run: criterion_1 },
    Criterion { name: "flag factorization and commutation", limit: Duration::from_secs(5), run: criterion_2 },
    Criterion { name: "sheaf encodings and perturbations", limit: Duration::from_secs(5), run: criterion_3 },
    Criterion { name: "Koszul complexes and duality", limit: Duration::from_secs(10), run: criterion_4 },
    Criterion { name: "categorified d² ≃ 0 on Δ²", limit: Duration::from_secs(10), run: criterion_5 },
    Criterion { name: "Dold–Kan round trip", limit: Duration::from_secs(10), run: criterion_6 },
    Criterion { name: "K₀ lax calculus", limit: Duration::from_secs(2), run: criterion_7 },
    Criterion { name: "chain-level lax calculus", limit: Duration::from_secs(20), run: criterion_8 },
    Criterion { name: "totalization", limit: Duration::from_secs(10), run: criterion_9 },
    Criterion { name: "command line", limit: Duration::from_secs(5), run: criterion_10 },
];

fn main() {
    let mut failed = 0;
    for (i, c) in CRITERIA.iter().enumerate() {
        let start = Instant::now();
        let outcome = (c.run)();
        let took = start.elapsed();
        let (ok, detail) = match outcome {
            Ok(d) if took <= c.limit => (true, d),
            Ok(d) => (false, format!("{d}; too slow")),
            Err(e) => (false, e),
        };
        failed += !ok as usize;
        println!(
            "criterion {:>2} {} {:<36} {:>7.2}s / {:>2}s  {}",
            i + 1,
            if ok { "PASS" } else { "FAIL" },
            c.name,
            took.as_secs_f64(),
            c.limit.as_secs(),
            detail
        );
    }
    if failed > 0 {
        println!("{failed} of {} criteria failed", CRITERIA.len());
        std::process::exit(1);
    }
    println!("all {} criteria passed", CRITERIA.len());
}
