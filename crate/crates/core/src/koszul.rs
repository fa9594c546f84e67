//! Koszul complexes over finite-dimensional commutative ℚ-algebras.
//!
//! Generators of `K(λ_0, …, λ_{n-1})_k` are the `k`-subsets `S ⊆ {0..n-1}` in
//! lexicographic order, and
//!
//! `d e_S = Σ_{i∈S} (-1)^{#{j∈S : j<i}} λ_i e_{S∖{i}}`.
//!
//! The dual `K^∨_{n-•}` has the dual basis `e_S^∨` (`|S| = n-k` in degree `k`)
//! and the transposed differential. The duality isomorphism onto the reversed
//! complex `K(λ_{n-1}, …, λ_0)` sends `e_S^∨` to `σ(S)·e'_T`, where `T` is the
//! set of positions carrying the labels of `Sᶜ` and
//! `σ(S) = (-1)^{#{(t,s) : t∈Sᶜ, s∈S, t>s}}`.

use crate::chain::{ChainComplex, ChainMap};
use crate::exactlin::{rat, Matrix, Rational};
use crate::{Error, Report, Result};
use num_traits::Zero;

/// Commutative algebra with basis `e_0..e_{m-1}`; `e_i e_j = Σ_k c[i][j][k] e_k`.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct FdAlgebra {
    dim: usize,
    structure: Vec<Rational>,
    unit: Vec<Rational>,
}

impl FdAlgebra {
    /// Checks shapes only; see [`FdAlgebra::validate`] for the axioms.
    pub fn new(dim: usize, structure: Vec<Vec<Vec<Rational>>>, unit: Vec<Rational>) -> Result<Self> {
        if structure.len() != dim
            || structure.iter().any(|row| {
                row.len() != dim || row.iter().any(|v| v.len() != dim)
            })
        {
            return Err(Error::dim(format!("structure constants must be {dim}×{dim}×{dim}")));
        }
        if unit.len() != dim {
            return Err(Error::dim(format!("unit has length {}, expected {dim}", unit.len())));
        }
        let structure = structure.into_iter().flatten().flatten().collect();
        Ok(Self {
            dim,
            structure,
            unit,
        })
    }

    /// The field ℚ itself.
    pub fn rationals() -> Self {
        Self {
            dim: 1,
            structure: vec![rat(1)],
            unit: vec![rat(1)],
        }
    }

    pub fn dim(&self) -> usize {
        self.dim
    }

    pub fn unit(&self) -> &[Rational] {
        &self.unit
    }

    /// `c[i][j][k]`.
    pub fn constant(&self, i: usize, j: usize, k: usize) -> &Rational {
        &self.structure[(i * self.dim + j) * self.dim + k]
    }

    pub fn structure(&self) -> Vec<Vec<Vec<Rational>>> {
        (0..self.dim)
            .map(|i| {
                (0..self.dim)
                    .map(|j| (0..self.dim).map(|k| self.constant(i, j, k).clone()).collect())
                    .collect()
            })
            .collect()
    }

    pub fn zero(&self) -> Vec<Rational> {
        vec![Rational::zero(); self.dim]
    }

    pub fn basis_element(&self, i: usize) -> Vec<Rational> {
        let mut v = self.zero();
        v[i] = rat(1);
        v
    }

    pub fn mul(&self, x: &[Rational], y: &[Rational]) -> Vec<Rational> {
        let mut out = self.zero();
        for (i, xi) in x.iter().enumerate().filter(|(_, v)| !v.is_zero()) {
            for (j, yj) in y.iter().enumerate().filter(|(_, v)| !v.is_zero()) {
                let xy = xi * yj;
                for (k, o) in out.iter_mut().enumerate() {
                    let c = self.constant(i, j, k);
                    if !c.is_zero() {
                        *o += &xy * c;
                    }
                }
            }
        }
        out
    }

    /// Matrix of `y ↦ x·y`; column `j` is `x·e_j`.
    pub fn mult_matrix(&self, x: &[Rational]) -> Matrix {
        let mut m = Matrix::zeros(self.dim, self.dim);
        for j in 0..self.dim {
            let col = self.mul(x, &self.basis_element(j));
            for (i, v) in col.into_iter().enumerate() {
                m.set(i, j, v);
            }
        }
        m
    }

    /// Commutativity, associativity on basis triples, and the unit law.
    pub fn validate(&self) -> Report {
        let mut report = Report::new();
        let m = self.dim;
        for i in 0..m {
            for j in i + 1..m {
                if (0..m).any(|k| self.constant(i, j, k) != self.constant(j, i, k)) {
                    report.push("not_commutative", format!("e{i}·e{j}"), "e_i e_j ≠ e_j e_i");
                }
            }
        }
        let basis: Vec<_> = (0..m).map(|i| self.basis_element(i)).collect();
        for i in 0..m {
            for j in 0..m {
                let ij = self.mul(&basis[i], &basis[j]);
                for l in 0..m {
                    let left = self.mul(&ij, &basis[l]);
                    let right = self.mul(&basis[i], &self.mul(&basis[j], &basis[l]));
                    if left != right {
                        report.push(
                            "not_associative",
                            format!("e{i}·e{j}·e{l}"),
                            "(e_i e_j) e_l ≠ e_i (e_j e_l)",
                        );
                    }
                }
            }
            if self.mul(&self.unit, &basis[i]) != basis[i] {
                report.push("unit", format!("e{i}"), "unit·e_i ≠ e_i");
            }
        }
        report
    }

    pub fn ensure_valid(&self) -> Result<()> {
        self.validate().into_result()
    }

    /// `A × B` with the basis of `A` first.
    pub fn product(&self, other: &FdAlgebra) -> FdAlgebra {
        let (p, q) = (self.dim, other.dim);
        let m = p + q;
        let mut structure = vec![Rational::zero(); m * m * m];
        for i in 0..p {
            for j in 0..p {
                for k in 0..p {
                    structure[(i * m + j) * m + k] = self.constant(i, j, k).clone();
                }
            }
        }
        for i in 0..q {
            for j in 0..q {
                for k in 0..q {
                    structure[((p + i) * m + p + j) * m + p + k] = other.constant(i, j, k).clone();
                }
            }
        }
        let unit = self.unit.iter().chain(&other.unit).cloned().collect();
        FdAlgebra {
            dim: m,
            structure,
            unit,
        }
    }

    /// The same algebra in the basis given by the columns of `p`
    /// (which must be invertible).
    pub fn change_basis(&self, p: &Matrix) -> Result<FdAlgebra> {
        if p.shape() != (self.dim, self.dim) {
            return Err(Error::dim("basis change has the wrong size"));
        }
        let pinv = crate::exactlin::invert(p)?
            .ok_or_else(|| Error::domain("basis change is singular"))?;
        let cols: Vec<Vec<Rational>> = (0..self.dim).map(|j| p.col(j)).collect();
        let m = self.dim;
        let mut structure = Vec::with_capacity(m * m * m);
        for i in 0..m {
            for j in 0..m {
                structure.extend(pinv.apply(&self.mul(&cols[i], &cols[j])));
            }
        }
        Ok(FdAlgebra {
            dim: m,
            structure,
            unit: pinv.apply(&self.unit),
        })
    }
}

/// `ℚ[x_0..x_{v-1}] / I` for a monomial ideal `I` containing a power of every
/// variable, with the standard monomials (lexicographic order) as basis.
#[derive(Clone, Debug)]
pub struct MonomialAlgebra {
    pub algebra: FdAlgebra,
    /// Exponent vectors of the basis monomials.
    pub basis: Vec<Vec<u32>>,
}

fn divides(g: &[u32], a: &[u32]) -> bool {
    g.iter().zip(a).all(|(x, y)| x <= y)
}

/// Exponent vectors `α` with `α_i < bound_i` not divisible by any generator,
/// in lexicographic order.
pub fn standard_monomials(bounds: &[u32], generators: &[Vec<u32>]) -> Vec<Vec<u32>> {
    let mut out = Vec::new();
    let mut a = vec![0u32; bounds.len()];
    if bounds.contains(&0) {
        return out;
    }
    loop {
        if !generators.iter().any(|g| divides(g, &a)) {
            out.push(a.clone());
        }
        let mut i = bounds.len();
        loop {
            if i == 0 {
                return out;
            }
            i -= 1;
            a[i] += 1;
            if a[i] < bounds[i] {
                break;
            }
            a[i] = 0;
        }
    }
}

impl MonomialAlgebra {
    pub fn new(vars: usize, generators: Vec<Vec<u32>>) -> Result<Self> {
        if generators.iter().any(|g| g.len() != vars) {
            return Err(Error::dim("generator with the wrong number of variables"));
        }
        let mut bounds = Vec::with_capacity(vars);
        for i in 0..vars {
            let pure = generators
                .iter()
                .filter(|g| g.iter().enumerate().all(|(j, &e)| j == i || e == 0))
                .map(|g| g[i])
                .min()
                .ok_or_else(|| {
                    Error::domain(format!("no power of x{i} in the ideal: quotient is infinite"))
                })?;
            bounds.push(pure);
        }
        let basis = standard_monomials(&bounds, &generators);
        let m = basis.len();
        let index = |a: &[u32]| basis.iter().position(|b| b == a);
        let mut structure = vec![vec![vec![Rational::zero(); m]; m]; m];
        for i in 0..m {
            for j in 0..m {
                let prod: Vec<u32> = basis[i].iter().zip(&basis[j]).map(|(x, y)| x + y).collect();
                if let Some(k) = index(&prod) {
                    structure[i][j][k] = rat(1);
                }
            }
        }
        let mut unit = vec![Rational::zero(); m];
        if let Some(k) = index(&vec![0; vars]) {
            unit[k] = rat(1);
        }
        Ok(Self {
            algebra: FdAlgebra::new(m, structure, unit)?,
            basis,
        })
    }

    /// `x^α` as an element (zero when it lies in the ideal).
    pub fn monomial(&self, exps: &[u32]) -> Vec<Rational> {
        let mut v = self.algebra.zero();
        if let Some(k) = self.basis.iter().position(|b| b == exps) {
            v[k] = rat(1);
        }
        v
    }
}

/// Matrix with entries in an algebra.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct AlgMatrix {
    rows: usize,
    cols: usize,
    entries: Vec<Vec<Rational>>,
}

impl AlgMatrix {
    pub fn zeros(alg: &FdAlgebra, rows: usize, cols: usize) -> Self {
        Self {
            rows,
            cols,
            entries: vec![alg.zero(); rows * cols],
        }
    }

    pub fn identity(alg: &FdAlgebra, n: usize) -> Self {
        let mut m = Self::zeros(alg, n, n);
        for i in 0..n {
            m.set(i, i, alg.unit().to_vec());
        }
        m
    }

    pub fn rows(&self) -> usize {
        self.rows
    }

    pub fn cols(&self) -> usize {
        self.cols
    }

    pub fn get(&self, i: usize, j: usize) -> &[Rational] {
        &self.entries[i * self.cols + j]
    }

    pub fn set(&mut self, i: usize, j: usize, x: Vec<Rational>) {
        self.entries[i * self.cols + j] = x;
    }

    pub fn is_zero(&self) -> bool {
        self.entries.iter().all(|e| e.iter().all(Zero::is_zero))
    }

    pub fn transpose(&self) -> Self {
        let mut entries = Vec::with_capacity(self.entries.len());
        for j in 0..self.cols {
            for i in 0..self.rows {
                entries.push(self.get(i, j).to_vec());
            }
        }
        Self {
            rows: self.cols,
            cols: self.rows,
            entries,
        }
    }

    pub fn mul(&self, alg: &FdAlgebra, rhs: &AlgMatrix) -> Result<AlgMatrix> {
        if self.cols != rhs.rows {
            return Err(Error::dim("R-matrix product shape mismatch"));
        }
        let mut out = Self::zeros(alg, self.rows, rhs.cols);
        for i in 0..self.rows {
            for k in 0..rhs.cols {
                let mut acc = alg.zero();
                for j in 0..self.cols {
                    let (a, b) = (self.get(i, j), rhs.get(j, k));
                    if a.iter().all(Zero::is_zero) || b.iter().all(Zero::is_zero) {
                        continue;
                    }
                    for (x, y) in acc.iter_mut().zip(alg.mul(a, b)) {
                        *x += y;
                    }
                }
                out.set(i, k, acc);
            }
        }
        Ok(out)
    }

    /// The ℚ-matrix of the map `R^cols → R^rows`: block `(i, j)` is the
    /// multiplication matrix of entry `(i, j)`.
    pub fn realize(&self, alg: &FdAlgebra) -> Matrix {
        let m = alg.dim();
        let mut out = Matrix::zeros(self.rows * m, self.cols * m);
        for i in 0..self.rows {
            for j in 0..self.cols {
                let e = self.get(i, j);
                if e.iter().any(|x| !x.is_zero()) {
                    out.set_block(i * m, j * m, &alg.mult_matrix(e));
                }
            }
        }
        out
    }
}

/// Bounded complex of free `R`-modules `R^{ranks}` with `R`-matrix
/// differentials `d_k: R^{r_k} → R^{r_{k-1}}`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct FreeComplex {
    pub algebra: FdAlgebra,
    pub lo: i64,
    pub ranks: Vec<usize>,
    /// `diffs[i]` is `d_{lo+1+i}`.
    pub diffs: Vec<AlgMatrix>,
}

impl FreeComplex {
    pub fn hi(&self) -> i64 {
        self.lo + self.ranks.len() as i64 - 1
    }

    pub fn rank(&self, k: i64) -> usize {
        if k < self.lo || k > self.hi() {
            0
        } else {
            self.ranks[(k - self.lo) as usize]
        }
    }

    pub fn d(&self, k: i64) -> AlgMatrix {
        if k > self.lo && k <= self.hi() {
            self.diffs[(k - self.lo - 1) as usize].clone()
        } else {
            AlgMatrix::zeros(&self.algebra, self.rank(k - 1), self.rank(k))
        }
    }

    /// Every degree where `d_{k-1} d_k ≠ 0` over `R`.
    pub fn validate(&self) -> Report {
        let mut report = Report::new();
        for k in self.lo + 2..=self.hi() {
            let dd = self
                .d(k - 1)
                .mul(&self.algebra, &self.d(k))
                .expect("consecutive shapes");
            if !dd.is_zero() {
                report.push_with(
                    "d_squared",
                    format!("degree {k}"),
                    format!("d_{} ∘ d_{k} ≠ 0 over R", k - 1),
                    dd.realize(&self.algebra),
                );
            }
        }
        report
    }

    /// The underlying complex of ℚ-vector spaces; generator `g` of degree `k`
    /// occupies coordinates `g·m .. (g+1)·m`.
    pub fn realize(&self) -> ChainComplex {
        let m = self.algebra.dim();
        ChainComplex::new(
            self.lo,
            self.ranks.iter().map(|r| r * m).collect(),
            self.diffs.iter().map(|d| d.realize(&self.algebra)).collect(),
        )
        .expect("realized shapes")
    }

    /// `Hom_R(-, R)` reindexed by `k ↦ top − k`: degree `k` is the dual of
    /// degree `top − k`, with transposed differentials.
    pub fn dual(&self, top: i64) -> FreeComplex {
        let lo = top - self.hi();
        let ranks = self.ranks.iter().rev().copied().collect();
        let diffs = (lo + 1..=top - self.lo)
            .map(|k| self.d(top - k + 1).transpose())
            .collect();
        FreeComplex {
            algebra: self.algebra.clone(),
            lo,
            ranks,
            diffs,
        }
    }
}

/// `k`-subsets of `{0..n-1}` in lexicographic order.
pub fn subsets(n: usize, k: usize) -> Vec<Vec<usize>> {
    fn go(start: usize, n: usize, k: usize, cur: &mut Vec<usize>, out: &mut Vec<Vec<usize>>) {
        if cur.len() == k {
            out.push(cur.clone());
            return;
        }
        for i in start..n {
            if n - i < k - cur.len() {
                break;
            }
            cur.push(i);
            go(i + 1, n, k, cur, out);
            cur.pop();
        }
    }
    let mut out = Vec::new();
    go(0, n, k, &mut Vec::new(), &mut out);
    out
}

fn subset_index(n: usize, s: &[usize]) -> usize {
    subsets(n, s.len())
        .iter()
        .position(|t| t == s)
        .expect("valid subset")
}

/// `K(λ_0, …, λ_{n-1})` over a commutative algebra `R`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct KoszulComplex {
    lambdas: Vec<Vec<Rational>>,
    complex: FreeComplex,
}

/// Builds the Koszul complex and checks `d² = 0` over `R`.
pub fn koszul(algebra: &FdAlgebra, lambdas: &[Vec<Rational>]) -> Result<KoszulComplex> {
    algebra.ensure_valid()?;
    if let Some((i, l)) = lambdas.iter().enumerate().find(|(_, l)| l.len() != algebra.dim()) {
        return Err(Error::dim(format!(
            "λ{i} has {} coordinates, the algebra has dimension {}",
            l.len(),
            algebra.dim()
        )));
    }
    let n = lambdas.len();
    let diffs = (1..=n)
        .map(|k| {
            let rows = subsets(n, k - 1);
            let mut d = AlgMatrix::zeros(algebra, rows.len(), binom(n, k));
            for (col, s) in subsets(n, k).iter().enumerate() {
                for (pos, &i) in s.iter().enumerate() {
                    let rest: Vec<usize> = s.iter().copied().filter(|&j| j != i).collect();
                    let row = rows.iter().position(|t| *t == rest).expect("face");
                    let mut entry = lambdas[i].clone();
                    if pos % 2 == 1 {
                        entry.iter_mut().for_each(|x| *x = -x.clone());
                    }
                    d.set(row, col, entry);
                }
            }
            d
        })
        .collect();
    let complex = FreeComplex {
        algebra: algebra.clone(),
        lo: 0,
        ranks: (0..=n).map(|k| binom(n, k)).collect(),
        diffs,
    };
    complex.validate().into_result()?;
    Ok(KoszulComplex {
        lambdas: lambdas.to_vec(),
        complex,
    })
}

pub fn binom(n: usize, k: usize) -> usize {
    if k > n {
        return 0;
    }
    (0..k).fold(1, |acc, i| acc * (n - i) / (i + 1))
}

impl KoszulComplex {
    pub fn n(&self) -> usize {
        self.lambdas.len()
    }

    pub fn lambdas(&self) -> &[Vec<Rational>] {
        &self.lambdas
    }

    pub fn algebra(&self) -> &FdAlgebra {
        &self.complex.algebra
    }

    pub fn free(&self) -> &FreeComplex {
        &self.complex
    }

    /// `d_k` over `R`, from `K_k` to `K_{k-1}`.
    pub fn d(&self, k: i64) -> AlgMatrix {
        self.complex.d(k)
    }

    pub fn realize(&self) -> ChainComplex {
        self.complex.realize()
    }

    /// `K(λ_{n-1}, …, λ_0)`.
    pub fn reversed(&self) -> KoszulComplex {
        let rev: Vec<_> = self.lambdas.iter().rev().cloned().collect();
        koszul(self.algebra(), &rev).expect("reversal of a valid Koszul complex")
    }
}

/// The duality isomorphism `K^∨_{n-•} → K(λ_{n-1}, …, λ_0)` with its source
/// and target.
#[derive(Clone, Debug)]
pub struct DualityIso {
    pub dual: FreeComplex,
    pub reversed: KoszulComplex,
    /// One signed permutation matrix over `R` per degree `0..=n`.
    pub components: Vec<AlgMatrix>,
}

/// `σ(S) = (-1)^{#{(t,s) : t ∈ Sᶜ, s ∈ S, t > s}}`.
pub fn duality_sign(n: usize, s: &[usize]) -> i64 {
    let inversions = (0..n)
        .filter(|t| !s.contains(t))
        .map(|t| s.iter().filter(|&&x| x < t).count())
        .sum::<usize>();
    if inversions % 2 == 0 {
        1
    } else {
        -1
    }
}

/// The candidate isomorphism with an arbitrary sign rule, not verified.
pub fn duality_map_with(k: &KoszulComplex, sign_of: impl Fn(usize, &[usize]) -> i64) -> DualityIso {
    let n = k.n();
    let alg = k.algebra();
    let dual = k.free().dual(n as i64);
    let reversed = k.reversed();
    let components = (0..=n)
        .map(|deg| {
            // degree `deg` of the dual is spanned by e_S^∨ with |S| = n − deg
            let src = subsets(n, n - deg);
            let mut m = AlgMatrix::zeros(alg, binom(n, deg), src.len());
            for (col, s) in src.iter().enumerate() {
                let mut t: Vec<usize> = (0..n)
                    .filter(|i| !s.contains(i))
                    .map(|i| n - 1 - i)
                    .collect();
                t.sort_unstable();
                let mut entry = alg.unit().to_vec();
                if sign_of(n, s) < 0 {
                    entry.iter_mut().for_each(|x| *x = -x.clone());
                }
                m.set(subset_index(n, &t), col, entry);
            }
            m
        })
        .collect();
    DualityIso {
        dual,
        reversed,
        components,
    }
}

impl DualityIso {
    /// Chain-map equations over `R` and degreewise invertibility.
    pub fn verify(&self) -> Report {
        let mut report = Report::new();
        let alg = &self.dual.algebra;
        let n = self.components.len() as i64 - 1;
        let at = |k: i64| -> AlgMatrix {
            if (0..=n).contains(&k) {
                self.components[k as usize].clone()
            } else {
                AlgMatrix::zeros(alg, self.reversed.free().rank(k), self.dual.rank(k))
            }
        };
        for k in 0..=n + 1 {
            let lhs = at(k - 1).mul(alg, &self.dual.d(k)).expect("shapes");
            let rhs = self.reversed.d(k).mul(alg, &at(k)).expect("shapes");
            if lhs != rhs {
                report.push_with(
                    "not_chain_map",
                    format!("degree {k}"),
                    "φ ∘ d^∨ ≠ d ∘ φ over R",
                    &lhs.realize(alg) - &rhs.realize(alg),
                );
            }
        }
        for k in 0..=n {
            let real = at(k).realize(alg);
            if !real.is_square() || crate::exactlin::invert(&real).ok().flatten().is_none() {
                report.push("not_invertible", format!("degree {k}"), "component is singular");
            }
        }
        report
    }

    /// The isomorphism as a chain map of realized complexes.
    pub fn realize(&self) -> Result<ChainMap> {
        let alg = &self.dual.algebra;
        ChainMap::new(
            self.dual.realize(),
            self.reversed.realize(),
            self.components.iter().map(|c| c.realize(alg)).collect(),
        )
    }
}

/// The verified duality isomorphism.
pub fn duality_iso(k: &KoszulComplex) -> Result<DualityIso> {
    let iso = duality_map_with(k, duality_sign);
    iso.verify().into_result()?;
    Ok(iso)
}
