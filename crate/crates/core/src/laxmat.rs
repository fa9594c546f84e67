//! Lax matrix calculus at two levels.
//!
//! On `K₀` a lax matrix over a finite poset composes as `N·μ·M`, with `μ` the
//! Möbius matrix. At chain level the shape is `Δ¹` and the 2-category has one
//! object: 1-morphisms are chain complexes, composition is `⊗`, and
//! 2-morphisms are chain maps. A composite `β ∘ α` is written `β ⊗ α`.

use crate::chain::{
    cone, direct_sum, homotopy_defects, is_quasi_iso, pair_into_sum, shift, shift_map, tensor,
    tensor_associator, tensor_maps, tensor_position, ChainComplex, ChainHomotopy, ChainMap,
};
use crate::exactlin::{rat, Matrix};
use crate::{Error, Report, Result};

/// Finite poset; `le[i][j]` is `i ≤ j`.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct FinPoset {
    labels: Vec<String>,
    le: Vec<Vec<bool>>,
}

impl FinPoset {
    pub fn new(labels: Vec<String>, le: Vec<Vec<bool>>) -> Result<Self> {
        let n = labels.len();
        if le.len() != n || le.iter().any(|row| row.len() != n) {
            return Err(Error::dim(format!("relation must be {n}x{n}")));
        }
        Ok(Self { labels, le })
    }

    /// Builds from a closure, labelling elements `0..n`.
    pub fn from_fn(n: usize, mut le: impl FnMut(usize, usize) -> bool) -> Self {
        Self {
            labels: (0..n).map(|i| i.to_string()).collect(),
            le: (0..n).map(|i| (0..n).map(|j| le(i, j)).collect()).collect(),
        }
    }

    pub fn chain(n: usize) -> Self {
        Self::from_fn(n, |i, j| i <= j)
    }

    pub fn antichain(n: usize) -> Self {
        Self::from_fn(n, |i, j| i == j)
    }

    /// `0 → 1`.
    pub fn delta1() -> Self {
        Self::chain(2)
    }

    /// Subsets of `k` atoms under inclusion, as bit masks.
    pub fn boolean(k: usize) -> Self {
        Self::from_fn(1 << k, |i, j| i & j == i)
    }

    pub fn len(&self) -> usize {
        self.labels.len()
    }

    pub fn is_empty(&self) -> bool {
        self.labels.is_empty()
    }

    pub fn labels(&self) -> &[String] {
        &self.labels
    }

    pub fn le(&self, i: usize, j: usize) -> bool {
        self.le[i][j]
    }

    pub fn validate(&self) -> Report {
        let mut report = Report::new();
        let n = self.len();
        for i in 0..n {
            if !self.le[i][i] {
                report.push("not_reflexive", &self.labels[i], "x ≤ x fails");
            }
            for j in 0..n {
                if i != j && self.le[i][j] && self.le[j][i] {
                    report.push(
                        "not_antisymmetric",
                        format!("{}, {}", self.labels[i], self.labels[j]),
                        "x ≤ y ≤ x with x ≠ y",
                    );
                }
                for k in 0..n {
                    if self.le[i][j] && self.le[j][k] && !self.le[i][k] {
                        report.push(
                            "not_transitive",
                            format!("{}, {}, {}", self.labels[i], self.labels[j], self.labels[k]),
                            "x ≤ y ≤ z but not x ≤ z",
                        );
                    }
                }
            }
        }
        report
    }

    pub fn ensure_valid(&self) -> Result<()> {
        self.validate().into_result()
    }

    /// Elements sorted so that `i ≤ j` implies `i` comes first.
    fn linear_extension(&self) -> Vec<usize> {
        let mut order: Vec<usize> = (0..self.len()).collect();
        order.sort_by_key(|&j| (0..self.len()).filter(|&i| self.le[i][j]).count());
        order
    }
}

/// Integer matrix with checked arithmetic.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct IntMatrix {
    rows: usize,
    cols: usize,
    data: Vec<i64>,
}

impl IntMatrix {
    pub fn new(rows: usize, cols: usize, data: Vec<i64>) -> Result<Self> {
        if data.len() != rows * cols {
            return Err(Error::dim(format!("{} entries for a {rows}x{cols} matrix", data.len())));
        }
        Ok(Self { rows, cols, data })
    }

    pub fn from_fn(rows: usize, cols: usize, mut f: impl FnMut(usize, usize) -> i64) -> Self {
        let data = (0..rows * cols).map(|k| f(k / cols.max(1), k % cols.max(1))).collect();
        Self { rows, cols, data }
    }

    pub fn identity(n: usize) -> Self {
        Self::from_fn(n, n, |i, j| (i == j) as i64)
    }

    pub fn rows(&self) -> usize {
        self.rows
    }

    pub fn cols(&self) -> usize {
        self.cols
    }

    pub fn get(&self, i: usize, j: usize) -> i64 {
        self.data[i * self.cols + j]
    }

    pub fn entries(&self) -> &[i64] {
        &self.data
    }

    pub fn mul(&self, rhs: &IntMatrix) -> Result<IntMatrix> {
        if self.cols != rhs.rows {
            return Err(Error::dim(format!(
                "cannot multiply {}x{} by {}x{}",
                self.rows, self.cols, rhs.rows, rhs.cols
            )));
        }
        let mut data = Vec::with_capacity(self.rows * rhs.cols);
        for i in 0..self.rows {
            for j in 0..rhs.cols {
                let mut acc: i64 = 0;
                for k in 0..self.cols {
                    acc = self
                        .get(i, k)
                        .checked_mul(rhs.get(k, j))
                        .and_then(|x| acc.checked_add(x))
                        .ok_or_else(|| Error::domain("integer overflow"))?;
                }
                data.push(acc);
            }
        }
        Ok(IntMatrix { rows: self.rows, cols: rhs.cols, data })
    }

    pub fn to_matrix(&self) -> Matrix {
        Matrix::from_i64(self.rows, self.cols, &self.data)
    }
}

/// `ζ[t][s] = [s ≤ t]`.
pub fn zeta(p: &FinPoset) -> IntMatrix {
    IntMatrix::from_fn(p.len(), p.len(), |t, s| p.le(s, t) as i64)
}

/// `μ = ζ⁻¹`, by the recursion `μ(s, t) = −Σ_{s ≤ u < t} μ(s, u)`.
pub fn mobius(p: &FinPoset) -> Result<IntMatrix> {
    p.ensure_valid()?;
    let n = p.len();
    let order = p.linear_extension();
    // mu[s][t] = μ(s, t), nonzero only for s ≤ t.
    let mut mu = vec![vec![0i64; n]; n];
    for &s in &order {
        for &t in &order {
            if !p.le(s, t) {
                continue;
            }
            mu[s][t] = if s == t {
                1
            } else {
                -order
                    .iter()
                    .filter(|&&u| u != t && p.le(s, u) && p.le(u, t))
                    .map(|&u| mu[s][u])
                    .sum::<i64>()
            };
        }
    }
    // ζ[t][s] = [s ≤ t], so its inverse is indexed the same way: μ[t][s] = μ(s, t).
    Ok(IntMatrix::from_fn(n, n, |t, s| mu[s][t]))
}

/// `N · μ(middle) · M`.
pub fn k0_compose(n: &IntMatrix, m: &IntMatrix, middle: &FinPoset) -> Result<IntMatrix> {
    if n.cols() != middle.len() || m.rows() != middle.len() {
        return Err(Error::dim(format!(
            "middle poset has {} elements, matrices have {} columns and {} rows",
            middle.len(),
            n.cols(),
            m.rows()
        )));
    }
    n.mul(&mobius(middle)?)?.mul(m)
}

/// Homotopy pushout of `B ←p A →q C`, modelled as `cone((p, −q))`.
///
/// Degree `n` is `A_{n-1} ⊕ B_n ⊕ C_n`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct HPushout {
    pub p: ChainMap,
    pub q: ChainMap,
    pub complex: ChainComplex,
    pub from_b: ChainMap,
    pub from_c: ChainMap,
}

impl HPushout {
    pub fn apex(&self) -> &ChainComplex {
        self.p.source()
    }

    pub fn b(&self) -> &ChainComplex {
        self.p.target()
    }

    pub fn c(&self) -> &ChainComplex {
        self.q.target()
    }

    /// `h(a) = (a, 0, 0)`, a homotopy from `from_b ∘ p` to `from_c ∘ q`.
    pub fn leg_homotopy(&self) -> ChainHomotopy {
        let (a, b, c) = (self.apex(), self.b(), self.c());
        ChainHomotopy::from_fn(a.clone(), self.complex.clone(), |n| {
            Matrix::vstack(&[
                &Matrix::identity(a.dim(n)),
                &Matrix::zeros(b.dim(n + 1) + c.dim(n + 1), a.dim(n)),
            ])
            .expect("shape")
        })
        .expect("homotopy shapes")
    }
}

pub fn hpushout(p: &ChainMap, q: &ChainMap) -> Result<HPushout> {
    if p.source() != q.source() {
        return Err(Error::dim("span legs need a common source"));
    }
    let pq = pair_into_sum(p, &q.neg())?;
    let cn = cone(&pq)?;
    let (_, ib, ic) = direct_sum(p.target(), q.target());
    let from_b = cn.inclusion.after(&ib)?;
    let from_c = cn.inclusion.after(&ic)?;
    Ok(HPushout {
        p: p.clone(),
        q: q.clone(),
        complex: cn.complex,
        from_b,
        from_c,
    })
}

/// `(a, b, c) ↦ k(a) + φ_B(b) + φ_C(c)`, which is a chain map exactly when
/// `φ_C q − φ_B p = dk + kd`.
pub fn hpushout_out(
    po: &HPushout,
    phi_b: &ChainMap,
    phi_c: &ChainMap,
    k: &ChainHomotopy,
) -> Result<ChainMap> {
    let x = phi_b.target();
    if phi_b.source() != po.b() || phi_c.source() != po.c() || phi_c.target() != x {
        return Err(Error::dim("maps out of the pushout do not match the span"));
    }
    let lhs = phi_b.after(&po.p)?;
    let rhs = phi_c.after(&po.q)?;
    if !homotopy_defects(&lhs, &rhs, k)?.is_empty() {
        return Err(Error::domain("φ_C q − φ_B p ≠ dk + kd"));
    }
    ChainMap::from_fn(po.complex.clone(), x.clone(), |n| {
        Matrix::hstack(&[&k.at(n - 1), &phi_b.at(n), &phi_c.at(n)]).expect("shape")
    })
}

/// The map of pushouts induced by a strictly commuting map of spans.
pub fn hpushout_functor(
    from: &HPushout,
    to: &HPushout,
    alpha: &ChainMap,
    beta: &ChainMap,
    gamma: &ChainMap,
) -> Result<ChainMap> {
    if alpha.source() != from.apex()
        || alpha.target() != to.apex()
        || beta.source() != from.b()
        || beta.target() != to.b()
        || gamma.source() != from.c()
        || gamma.target() != to.c()
    {
        return Err(Error::dim("span map does not match the spans"));
    }
    if to.p.after(alpha)? != beta.after(&from.p)? {
        return Err(Error::domain("left square of the span map does not commute"));
    }
    if to.q.after(alpha)? != gamma.after(&from.q)? {
        return Err(Error::domain("right square of the span map does not commute"));
    }
    ChainMap::from_fn(from.complex.clone(), to.complex.clone(), |n| {
        Matrix::block_diag(&[&alpha.at(n - 1), &beta.at(n), &gamma.at(n)])
    })
}

/// `P ⊗ G ≅ hpushout(p ⊗ 1, q ⊗ 1)`, sign-free.
pub fn hpushout_tensor_right(po: &HPushout, g: &ChainComplex) -> Result<(HPushout, ChainMap)> {
    let id = ChainMap::identity(g);
    let out = hpushout(&tensor_maps(&po.p, &id), &tensor_maps(&po.q, &id))?;
    let (a, b, c, p) = (po.apex(), po.b(), po.c(), &po.complex);
    let (ag, bg) = (tensor(a, g), tensor(b, g));
    let src = tensor(p, g);
    let iso = ChainMap::from_fn(src.clone(), out.complex.clone(), |n| {
        let mut m = Matrix::zeros(out.complex.dim(n), src.dim(n));
        for i in p.degrees() {
            let j = n - i;
            for x in 0..p.dim(i) {
                for y in 0..g.dim(j) {
                    let col = tensor_position(p, g, i, j, x, y);
                    let (na, nb) = (a.dim(i - 1), b.dim(i));
                    let row = if x < na {
                        tensor_position(a, g, i - 1, j, x, y)
                    } else if x < na + nb {
                        ag.dim(n - 1) + tensor_position(b, g, i, j, x - na, y)
                    } else {
                        ag.dim(n - 1) + bg.dim(n) + tensor_position(c, g, i, j, x - na - nb, y)
                    };
                    m.set(row, col, rat(1));
                }
            }
        }
        m
    })?;
    Ok((out, iso))
}

/// `G ⊗ P ≅ hpushout(1 ⊗ p, 1 ⊗ q)`; `g ⊗ a` picks up `(-1)^{|g|}`.
pub fn hpushout_tensor_left(g: &ChainComplex, po: &HPushout) -> Result<(HPushout, ChainMap)> {
    let id = ChainMap::identity(g);
    let out = hpushout(&tensor_maps(&id, &po.p), &tensor_maps(&id, &po.q))?;
    let (a, b, c, p) = (po.apex(), po.b(), po.c(), &po.complex);
    let (ga, gb) = (tensor(g, a), tensor(g, b));
    let src = tensor(g, p);
    let iso = ChainMap::from_fn(src.clone(), out.complex.clone(), |n| {
        let mut m = Matrix::zeros(out.complex.dim(n), src.dim(n));
        for j in g.degrees() {
            let i = n - j;
            for y in 0..g.dim(j) {
                for x in 0..p.dim(i) {
                    let col = tensor_position(g, p, j, i, y, x);
                    let (na, nb) = (a.dim(i - 1), b.dim(i));
                    let (row, s) = if x < na {
                        (tensor_position(g, a, j, i - 1, y, x), if j % 2 == 0 { 1 } else { -1 })
                    } else if x < na + nb {
                        (ga.dim(n - 1) + tensor_position(g, b, j, i, y, x - na), 1)
                    } else {
                        (ga.dim(n - 1) + gb.dim(n) + tensor_position(g, c, j, i, y, x - na - nb), 1)
                    };
                    m.set(row, col, rat(s));
                }
            }
        }
        m
    })?;
    Ok((out, iso))
}

/// `A ⊗ (B ⊗ C) → (A ⊗ B) ⊗ C`.
fn associator_inv(a: &ChainComplex, b: &ChainComplex, c: &ChainComplex) -> ChainMap {
    let fwd = tensor_associator(a, b, c);
    ChainMap::from_fn(fwd.target().clone(), fwd.source().clone(), |n| fwd.at(n).transpose())
        .expect("associator shapes")
}

fn id(c: &ChainComplex) -> ChainMap {
    ChainMap::identity(c)
}

/// A `Δ¹ × (Δ¹)ᵒᵖ` matrix between two arrows `X_0 →G_src X_1` and
/// `Y_0 →G_tgt Y_1` in the one-object model.
///
/// `entries[t][s]` is `α_ts`; `right[t]: α_t1 ⊗ G_src → α_t0` and
/// `left[s]: G_tgt ⊗ α_0s → α_1s` are the structure maps, subject to
/// `left[0] ∘ (G_tgt ⊗ right[0]) ∘ assoc = right[1] ∘ (left[1] ⊗ G_src)`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Delta1ChainMatrix {
    g_src: ChainComplex,
    g_tgt: ChainComplex,
    entries: [[ChainComplex; 2]; 2],
    right: [ChainMap; 2],
    left: [ChainMap; 2],
}

impl Delta1ChainMatrix {
    pub fn new(
        g_src: ChainComplex,
        g_tgt: ChainComplex,
        entries: [[ChainComplex; 2]; 2],
        right: [ChainMap; 2],
        left: [ChainMap; 2],
    ) -> Result<Self> {
        for t in 0..2 {
            if *right[t].source() != tensor(&entries[t][1], &g_src) || *right[t].target() != entries[t][0] {
                return Err(Error::dim(format!("right structure map {t} has the wrong ends")));
            }
        }
        for s in 0..2 {
            if *left[s].source() != tensor(&g_tgt, &entries[0][s]) || *left[s].target() != entries[1][s] {
                return Err(Error::dim(format!("left structure map {s} has the wrong ends")));
            }
        }
        Ok(Self { g_src, g_tgt, entries, right, left })
    }

    pub fn g_src(&self) -> &ChainComplex {
        &self.g_src
    }

    pub fn g_tgt(&self) -> &ChainComplex {
        &self.g_tgt
    }

    pub fn entry(&self, t: usize, s: usize) -> &ChainComplex {
        &self.entries[t][s]
    }

    pub fn right(&self, t: usize) -> &ChainMap {
        &self.right[t]
    }

    pub fn left(&self, s: usize) -> &ChainMap {
        &self.left[s]
    }

    /// The two sides of the structure square, `(G_tgt ⊗ α_01) ⊗ G_src → α_10`.
    pub fn square(&self) -> Result<(ChainMap, ChainMap)> {
        let e01 = &self.entries[0][1];
        let via_top = self.left[0]
            .after(&tensor_maps(&id(&self.g_tgt), &self.right[0]))?
            .after(&tensor_associator(&self.g_tgt, e01, &self.g_src))?;
        let via_bottom = self.right[1].after(&tensor_maps(&self.left[1], &id(&self.g_src)))?;
        Ok((via_top, via_bottom))
    }

    pub fn validate(&self) -> Report {
        let mut report = Report::new();
        report.absorb("G_src", self.g_src.validate());
        report.absorb("G_tgt", self.g_tgt.validate());
        for t in 0..2 {
            for s in 0..2 {
                report.absorb(&format!("entry {t}{s}"), self.entries[t][s].validate());
            }
        }
        for k in 0..2 {
            report.absorb(&format!("right {k}"), self.right[k].validate());
            report.absorb(&format!("left {k}"), self.left[k].validate());
        }
        if !report.is_valid() {
            return report;
        }
        match self.square() {
            Ok((a, b)) if a != b => {
                for (n, m) in a.components() {
                    let diff = &m.clone() - &b.at(n);
                    if !diff.is_zero() {
                        report.push_with("square", format!("degree {n}"), "structure square does not commute", diff);
                    }
                }
            }
            Ok(_) => {}
            Err(e) => report.push("shape", "square", e.to_string()),
        }
        report
    }

    pub fn ensure_valid(&self) -> Result<()> {
        self.validate().into_result()
    }

    /// Entrywise Euler characteristics, `[t][s]`.
    pub fn euler(&self) -> [[i64; 2]; 2] {
        let e = |t: usize, s: usize| self.entries[t][s].euler_characteristic();
        [[e(0, 0), e(0, 1)], [e(1, 0), e(1, 1)]]
    }

    pub fn euler_matrix(&self) -> IntMatrix {
        let e = self.euler();
        IntMatrix::new(2, 2, vec![e[0][0], e[0][1], e[1][0], e[1][1]]).expect("2x2")
    }

    /// All four entries zero, all maps zero.
    pub fn zero(g_src: &ChainComplex, g_tgt: &ChainComplex) -> Self {
        let z = ChainComplex::zero();
        let entries = [[z.clone(), z.clone()], [z.clone(), z.clone()]];
        let right = [0, 1].map(|_| ChainMap::zero(&tensor(&z, g_src), &z));
        let left = [0, 1].map(|_| ChainMap::zero(&tensor(g_tgt, &z), &z));
        Self::new(g_src.clone(), g_tgt.clone(), entries, right, left).expect("zero shapes")
    }
}

/// `I = [[ℚ[0], 0], [G, ℚ[0]]]` with identity structure maps where possible.
pub fn unit_matrix(g: &ChainComplex) -> Delta1ChainMatrix {
    let unit = ChainComplex::concentrated(0, 1);
    let z = ChainComplex::zero();
    let same = |src: ChainComplex, tgt: &ChainComplex| {
        ChainMap::from_fn(src, tgt.clone(), |k| Matrix::identity(tgt.dim(k))).expect("unitor")
    };
    let right = [
        ChainMap::zero(&tensor(&z, g), &unit),
        same(tensor(&unit, g), g),
    ];
    let left = [same(tensor(g, &unit), g), ChainMap::zero(&tensor(g, &z), &unit)];
    Delta1ChainMatrix::new(
        g.clone(),
        g.clone(),
        [[unit.clone(), z], [g.clone(), unit]],
        right,
        left,
    )
    .expect("unit shapes")
}

/// The four spans whose pushouts are the entries of `N ∘ M`:
/// `N_u0 ⊗ M_0s ← (N_u1 ⊗ G) ⊗ M_0s → N_u1 ⊗ M_1s`.
fn composite_spans(n: &Delta1ChainMatrix, m: &Delta1ChainMatrix) -> Result<[[HPushout; 2]; 2]> {
    let g = &m.g_tgt;
    let span = |u: usize, s: usize| -> Result<HPushout> {
        let (nu1, m0s) = (&n.entries[u][1], &m.entries[0][s]);
        let p = tensor_maps(&n.right[u], &id(m0s));
        let q = tensor_maps(&id(nu1), &m.left[s]).after(&tensor_associator(nu1, g, m0s))?;
        hpushout(&p, &q)
    };
    Ok([[span(0, 0)?, span(0, 1)?], [span(1, 0)?, span(1, 1)?]])
}

/// `(N ∘ M)_us = hpushout(N_u0 ⊗ M_0s ← (N_u1 ⊗ G) ⊗ M_0s → N_u1 ⊗ M_1s)`,
/// with structure maps induced on pushouts.
pub fn lax_compose_delta1(n: &Delta1ChainMatrix, m: &Delta1ChainMatrix) -> Result<Delta1ChainMatrix> {
    if n.g_src != m.g_tgt {
        return Err(Error::dim("the middle gluing complexes differ"));
    }
    n.ensure_valid()?;
    m.ensure_valid()?;
    let g = &m.g_tgt;
    let (gx, gz) = (&m.g_src, &n.g_tgt);
    let spans = composite_spans(n, m)?;

    let right_map = |u: usize| -> Result<ChainMap> {
        let (from, iso) = hpushout_tensor_right(&spans[u][1], gx)?;
        let to = &spans[u][0];
        let (nu0, nu1) = (&n.entries[u][0], &n.entries[u][1]);
        let nu1g = tensor(nu1, g);
        let alpha = tensor_maps(&id(&nu1g), &m.right[0]).after(&tensor_associator(&nu1g, &m.entries[0][1], gx))?;
        let beta = tensor_maps(&id(nu0), &m.right[0]).after(&tensor_associator(nu0, &m.entries[0][1], gx))?;
        let gamma = tensor_maps(&id(nu1), &m.right[1]).after(&tensor_associator(nu1, &m.entries[1][1], gx))?;
        hpushout_functor(&from, to, &alpha, &beta, &gamma)?.after(&iso)
    };
    let left_map = |s: usize| -> Result<ChainMap> {
        let (from, iso) = hpushout_tensor_left(gz, &spans[0][s])?;
        let to = &spans[1][s];
        let m0s = &m.entries[0][s];
        let (n00, n01) = (&n.entries[0][0], &n.entries[0][1]);
        let n01g = tensor(n01, g);
        let alpha = tensor_maps(&tensor_maps(&n.left[1], &id(g)), &id(m0s))
            .after(&tensor_maps(&associator_inv(gz, n01, g), &id(m0s)))?
            .after(&associator_inv(gz, &n01g, m0s))?;
        let beta = tensor_maps(&n.left[0], &id(m0s)).after(&associator_inv(gz, n00, m0s))?;
        let gamma = tensor_maps(&n.left[1], &id(&m.entries[1][s])).after(&associator_inv(gz, n01, &m.entries[1][s]))?;
        hpushout_functor(&from, to, &alpha, &beta, &gamma)?.after(&iso)
    };
    let entries = [
        [spans[0][0].complex.clone(), spans[0][1].complex.clone()],
        [spans[1][0].complex.clone(), spans[1][1].complex.clone()],
    ];
    let right = [right_map(0)?, right_map(1)?];
    let left = [left_map(0)?, left_map(1)?];
    Delta1ChainMatrix::new(gx.clone(), gz.clone(), entries, right, left)
}

/// Comparison maps `(I ∘ M)_ts → M_ts`: on the top row the pushout is just
/// `ℚ ⊗ M_0s`, on the bottom row `(a, b, c) ↦ left[s](b) + c`.
pub fn unit_comparison(m: &Delta1ChainMatrix) -> Result<[[ChainMap; 2]; 2]> {
    let unit = unit_matrix(&m.g_tgt);
    let spans = composite_spans(&unit, m)?;
    let same = |src: &ChainComplex, tgt: &ChainComplex| {
        ChainMap::from_fn(src.clone(), tgt.clone(), |k| Matrix::identity(tgt.dim(k)))
    };
    let map = |t: usize, s: usize| -> Result<ChainMap> {
        let po = &spans[t][s];
        let target = &m.entries[t][s];
        let k = ChainHomotopy::zero(po.apex(), target);
        if t == 0 {
            hpushout_out(po, &same(po.b(), target)?, &ChainMap::zero(po.c(), target), &k)
        } else {
            hpushout_out(po, &m.left[s], &same(po.c(), target)?, &k)
        }
    };
    Ok([[map(0, 0)?, map(0, 1)?], [map(1, 0)?, map(1, 1)?]])
}

/// `χ(N ∘ M) = N · [[1, 0], [−χ(G), 1]] · M` on Euler characteristics.
pub fn k0_delta1_compose(n: &IntMatrix, m: &IntMatrix, chi_g: i64) -> Result<IntMatrix> {
    let middle = IntMatrix::new(2, 2, vec![1, 0, -chi_g, 1])?;
    n.mul(&middle)?.mul(m)
}

/// An object of `Fun(Δ¹, Ch)`: a chain map `a → b`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct ArrowObject {
    map: ChainMap,
}

impl ArrowObject {
    pub fn new(map: ChainMap) -> Result<Self> {
        map.source().ensure_valid()?;
        map.target().ensure_valid()?;
        map.ensure_valid()?;
        Ok(Self { map })
    }

    pub fn map(&self) -> &ChainMap {
        &self.map
    }

    pub fn source(&self) -> &ChainComplex {
        self.map.source()
    }

    pub fn target(&self) -> &ChainComplex {
        self.map.target()
    }
}

/// A commuting square from one arrow to another.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct ArrowMorphism {
    pub top: ChainMap,
    pub bottom: ChainMap,
}

impl ArrowMorphism {
    pub fn validate(&self, from: &ArrowObject, to: &ArrowObject) -> Report {
        let mut report = Report::new();
        if self.top.source() != from.source()
            || self.top.target() != to.source()
            || self.bottom.source() != from.target()
            || self.bottom.target() != to.target()
        {
            report.push("shape", "arrow morphism", "components do not match the arrows");
            return report;
        }
        report.absorb("top", self.top.validate());
        report.absorb("bottom", self.bottom.validate());
        let lhs = to.map.after(&self.top).expect("checked ends");
        let rhs = self.bottom.after(&from.map).expect("checked ends");
        if lhs != rhs {
            report.push("square", "arrow morphism", "square does not commute");
        }
        report
    }

    /// Both components are quasi-isomorphisms.
    pub fn is_equivalence(&self) -> Result<bool> {
        Ok(is_quasi_iso(&self.top)? && is_quasi_iso(&self.bottom)?)
    }
}

/// `(a → b) ↦ (b → cone(f))`.
pub fn cof_action(x: &ArrowObject) -> Result<ArrowObject> {
    ArrowObject::new(cone(&x.map)?.inclusion)
}

/// `(a → b) ↦ (fib(f) → a)` with `fib(f) = cone(f)[−1]`, so
/// `fib(f)_n = A_n ⊕ B_{n+1}` and the map is the first projection.
pub fn fib_action(x: &ArrowObject) -> Result<ArrowObject> {
    let cn = cone(&x.map)?;
    let proj = shift_map(&cn.projection, -1);
    ArrowObject::new(proj.with_ends(shift(&cn.complex, -1), x.source().clone())?)
}

/// `x → fib(cof(x))`: `a ↦ (fa, −a, 0)` in `B_n ⊕ A_n ⊕ B_{n+1}`, identity on `b`.
pub fn unit_to_fib_cof(x: &ArrowObject) -> Result<(ArrowObject, ArrowMorphism)> {
    let y = fib_action(&cof_action(x)?)?;
    let (a, b, f) = (x.source(), x.target(), &x.map);
    let top = ChainMap::from_fn(a.clone(), y.source().clone(), |n| {
        Matrix::vstack(&[
            &f.at(n),
            &-&Matrix::identity(a.dim(n)),
            &Matrix::zeros(b.dim(n + 1), a.dim(n)),
        ])
        .expect("shape")
    })?;
    let bottom = ChainMap::identity(b).with_ends(b.clone(), y.target().clone())?;
    Ok((y, ArrowMorphism { top, bottom }))
}

/// `cof(fib(x)) → x`: identity on `a`, `(a', b', a) ↦ −b' + f(a)` on
/// `A_{n-1} ⊕ B_n ⊕ A_n`.
pub fn cof_fib_to_unit(x: &ArrowObject) -> Result<(ArrowObject, ArrowMorphism)> {
    let y = cof_action(&fib_action(x)?)?;
    let (a, b, f) = (x.source(), x.target(), &x.map);
    let top = ChainMap::identity(a).with_ends(y.source().clone(), a.clone())?;
    let bottom = ChainMap::from_fn(y.target().clone(), b.clone(), |n| {
        Matrix::hstack(&[
            &Matrix::zeros(b.dim(n), a.dim(n - 1)),
            &-&Matrix::identity(b.dim(n)),
            &f.at(n),
        ])
        .expect("shape")
    })?;
    Ok((y, ArrowMorphism { top, bottom }))
}

#[cfg(test)]
mod tests;
