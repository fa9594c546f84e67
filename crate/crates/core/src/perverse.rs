//! Linear models of perverse sheaves: the disk `Φ ⇄ Ψ`, flags
//! `A_0 ⇄ … ⇄ A_n`, cubical double diagrams and local star models, together
//! with monodromies, amalgamation and the encodings as (co)sheaves of
//! complexes.
//!
//! Complexes in encodings use chain (lowering) degrees. A stalk that is
//! written cohomologically in degrees `-n..-i` lives in chain degrees `i..n`.

use std::collections::BTreeMap;

use crate::chain::{homotopy_defects, ChainComplex, ChainHomotopy, ChainMap};
use crate::exactlin::{invert, Matrix};
use crate::{Error, Report, Result};

fn singular(m: &Matrix) -> bool {
    !m.is_square() || invert(m).ok().flatten().is_none()
}

fn id_minus(m: &Matrix) -> Matrix {
    &Matrix::identity(m.rows()) - m
}

/// `Φ ⇄ Ψ` with `f: Φ → Ψ` and `g: Ψ → Φ`.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct PervDisk {
    f: Matrix,
    g: Matrix,
}

impl PervDisk {
    pub fn new(dim_phi: usize, dim_psi: usize, f: Matrix, g: Matrix) -> Result<Self> {
        if f.shape() != (dim_psi, dim_phi) {
            return Err(Error::dim(format!(
                "f is {}x{}, expected {dim_psi}x{dim_phi}",
                f.rows(),
                f.cols()
            )));
        }
        if g.shape() != (dim_phi, dim_psi) {
            return Err(Error::dim(format!(
                "g is {}x{}, expected {dim_phi}x{dim_psi}",
                g.rows(),
                g.cols()
            )));
        }
        Ok(Self { f, g })
    }

    pub fn dim_phi(&self) -> usize {
        self.f.cols()
    }

    pub fn dim_psi(&self) -> usize {
        self.f.rows()
    }

    pub fn f(&self) -> &Matrix {
        &self.f
    }

    pub fn g(&self) -> &Matrix {
        &self.g
    }

    /// `T_Ψ = id − fg`.
    pub fn t_psi(&self) -> Matrix {
        id_minus(&(&self.f * &self.g))
    }

    /// `T_Φ = id − gf`.
    pub fn t_phi(&self) -> Matrix {
        id_minus(&(&self.g * &self.f))
    }

    pub fn validate(&self) -> Report {
        let mut report = Report::new();
        let (tp, tf) = (self.t_psi(), self.t_phi());
        if singular(&tp) {
            report.push_with("not_invertible", "Ψ", "id − fg is singular", tp);
        }
        if singular(&tf) {
            report.push_with("not_invertible", "Φ", "id − gf is singular", tf);
        }
        report
    }

    pub fn ensure_valid(&self) -> Result<()> {
        self.validate().into_result()
    }
}

/// `(id − fg, id − gf)`.
pub fn disk_monodromies(p: &PervDisk) -> Result<(Matrix, Matrix)> {
    p.ensure_valid()?;
    Ok((p.t_psi(), p.t_phi()))
}

/// `id + g (id − fg)⁻¹ f`, the inverse of `id − gf` whenever `id − fg` is
/// invertible.
pub fn t_phi_inverse_formula(p: &PervDisk) -> Result<Option<Matrix>> {
    Ok(invert(&p.t_psi())?.map(|inv| {
        &Matrix::identity(p.dim_phi()) + &(&(&p.g * &inv) * &p.f)
    }))
}

/// Amalgamation of two disks sharing `Ψ`: `Φ ⊕ Φ'` with `(f, f')` and
/// `(g T' ; g')`. Its Ψ-monodromy is `T T'`.
pub fn amalgamate(p: &PervDisk, q: &PervDisk) -> Result<PervDisk> {
    if p.dim_psi() != q.dim_psi() {
        return Err(Error::dim(format!(
            "Ψ has dimension {} and {}",
            p.dim_psi(),
            q.dim_psi()
        )));
    }
    p.ensure_valid()?;
    q.ensure_valid()?;
    let f = Matrix::hstack(&[&p.f, &q.f])?;
    let g = Matrix::vstack(&[&(&p.g * &q.t_psi()), &q.g])?;
    PervDisk::new(p.dim_phi() + q.dim_phi(), p.dim_psi(), f, g)
}

/// `A_0 ⇄ A_1 ⇄ … ⇄ A_n` with `d_k: A_k → A_{k+1}` and `δ_k: A_{k+1} → A_k`.
///
/// Note that `d` raises the index here.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct PervFlag {
    dims: Vec<usize>,
    d: Vec<Matrix>,
    delta: Vec<Matrix>,
}

impl PervFlag {
    pub fn new(dims: Vec<usize>, d: Vec<Matrix>, delta: Vec<Matrix>) -> Result<Self> {
        if dims.is_empty() {
            return Err(Error::dim("a flag needs at least A_0"));
        }
        let n = dims.len() - 1;
        if d.len() != n || delta.len() != n {
            return Err(Error::dim(format!(
                "a flag of length {n} needs {n} maps each way, got {} and {}",
                d.len(),
                delta.len()
            )));
        }
        for k in 0..n {
            if d[k].shape() != (dims[k + 1], dims[k]) {
                return Err(Error::dim(format!("d_{k} must be {}x{}", dims[k + 1], dims[k])));
            }
            if delta[k].shape() != (dims[k], dims[k + 1]) {
                return Err(Error::dim(format!("δ_{k} must be {}x{}", dims[k], dims[k + 1])));
            }
        }
        Ok(Self { dims, d, delta })
    }

    pub fn n(&self) -> usize {
        self.dims.len() - 1
    }

    pub fn dims(&self) -> &[usize] {
        &self.dims
    }

    /// `d_k: A_k → A_{k+1}`.
    pub fn d(&self, k: usize) -> &Matrix {
        &self.d[k]
    }

    /// `δ_k: A_{k+1} → A_k`.
    pub fn delta(&self, k: usize) -> &Matrix {
        &self.delta[k]
    }

    /// `dδ` on `A_k` (through `A_{k-1}`), zero for `k = 0`.
    pub fn d_delta(&self, k: usize) -> Matrix {
        if k == 0 {
            Matrix::zeros(self.dims[0], self.dims[0])
        } else {
            &self.d[k - 1] * &self.delta[k - 1]
        }
    }

    /// `δd` on `A_k` (through `A_{k+1}`), zero for `k = n`.
    pub fn delta_d(&self, k: usize) -> Matrix {
        if k == self.n() {
            Matrix::zeros(self.dims[k], self.dims[k])
        } else {
            &self.delta[k] * &self.d[k]
        }
    }

    /// `T_k = id − dδ − δd` on `A_k`.
    pub fn monodromy(&self, k: usize) -> Matrix {
        &id_minus(&self.d_delta(k)) - &self.delta_d(k)
    }

    pub fn validate(&self) -> Report {
        let mut report = Report::new();
        for k in 0..self.n().saturating_sub(1) {
            let dd = &self.d[k + 1] * &self.d[k];
            if !dd.is_zero() {
                report.push_with("d_squared", format!("A_{k}"), "d_{k+1} d_k ≠ 0", dd);
            }
            let ee = &self.delta[k] * &self.delta[k + 1];
            if !ee.is_zero() {
                report.push_with("delta_squared", format!("A_{}", k + 2), "δ_k δ_{k+1} ≠ 0", ee);
            }
        }
        for k in 0..=self.n() {
            let a = id_minus(&self.d_delta(k));
            if singular(&a) {
                report.push_with("not_invertible", format!("A_{k}"), "id − dδ is singular", a);
            }
            let b = id_minus(&self.delta_d(k));
            if singular(&b) {
                report.push_with("not_invertible", format!("A_{k}"), "id − δd is singular", b);
            }
        }
        report
    }

    pub fn ensure_valid(&self) -> Result<()> {
        self.validate().into_result()
    }

    /// The disk `A_0 ⇄ A_1` of a flag of length one (`Φ = A_0`, `Ψ = A_1`).
    pub fn as_disk(&self) -> Result<PervDisk> {
        if self.n() != 1 {
            return Err(Error::domain("only flags of length one are disks"));
        }
        PervDisk::new(self.dims[0], self.dims[1], self.d[0].clone(), self.delta[0].clone())
    }
}

/// `T_0, …, T_n`.
pub fn flag_monodromies(p: &PervFlag) -> Result<Vec<Matrix>> {
    p.ensure_valid()?;
    Ok((0..=p.n()).map(|k| p.monodromy(k)).collect())
}

/// Every `k` where `id − dδ − δd`, `(id − dδ)(id − δd)` and
/// `(id − δd)(id − dδ)` are not all equal on `A_k`.
pub fn flag_factorization(p: &PervFlag) -> Report {
    let mut report = Report::new();
    for k in 0..=p.n() {
        let t = p.monodromy(k);
        let a = id_minus(&p.d_delta(k));
        let b = id_minus(&p.delta_d(k));
        let ab = &a * &b;
        let ba = &b * &a;
        if t != ab {
            report.push_with("factorization", format!("A_{k}"), "T ≠ (id − dδ)(id − δd)", &t - &ab);
        }
        if ab != ba {
            report.push_with("commutation", format!("A_{k}"), "(id − dδ) and (id − δd) do not commute", &ab - &ba);
        }
    }
    report
}

/// Cubical double diagram: `V_J` for `J ⊆ {0..n-1}` (bit masks),
/// `f_i: V_{J∪i} → V_J` and `g_i: V_J → V_{J∪i}` for `i ∉ J`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct PervCube {
    n: usize,
    dims: Vec<usize>,
    /// Keyed by `(i, J)` with `i ∉ J`.
    f: BTreeMap<(usize, usize), Matrix>,
    g: BTreeMap<(usize, usize), Matrix>,
}

impl PervCube {
    pub fn new(
        n: usize,
        dims: Vec<usize>,
        f: BTreeMap<(usize, usize), Matrix>,
        g: BTreeMap<(usize, usize), Matrix>,
    ) -> Result<Self> {
        if dims.len() != 1 << n {
            return Err(Error::dim(format!("{} vertex dimensions for a {n}-cube", dims.len())));
        }
        let expected = n << n.saturating_sub(1);
        if f.len() != expected || g.len() != expected {
            return Err(Error::dim(format!("a {n}-cube has {expected} edges in each direction")));
        }
        for i in 0..n {
            for j in (0..1usize << n).filter(|j| j & (1 << i) == 0) {
                let up = j | (1 << i);
                let fi = f.get(&(i, j)).ok_or_else(|| Error::dim(format!("missing f_{i} at {j:#b}")))?;
                let gi = g.get(&(i, j)).ok_or_else(|| Error::dim(format!("missing g_{i} at {j:#b}")))?;
                if fi.shape() != (dims[j], dims[up]) || gi.shape() != (dims[up], dims[j]) {
                    return Err(Error::dim(format!("edge {i} at {j:#b} has the wrong shape")));
                }
            }
        }
        Ok(Self { n, dims, f, g })
    }

    /// Builds from closures over `(i, J)`; `None` means zero.
    pub fn from_fn(
        n: usize,
        dims: Vec<usize>,
        mut f: impl FnMut(usize, usize) -> Option<Matrix>,
        mut g: impl FnMut(usize, usize) -> Option<Matrix>,
    ) -> Result<Self> {
        let mut fs = BTreeMap::new();
        let mut gs = BTreeMap::new();
        for i in 0..n {
            for j in (0..1usize << n).filter(|j| j & (1 << i) == 0) {
                let up = j | (1 << i);
                let (lo, hi) = (dims.get(j).copied().unwrap_or(0), dims.get(up).copied().unwrap_or(0));
                fs.insert((i, j), f(i, j).unwrap_or_else(|| Matrix::zeros(lo, hi)));
                gs.insert((i, j), g(i, j).unwrap_or_else(|| Matrix::zeros(hi, lo)));
            }
        }
        Self::new(n, dims, fs, gs)
    }

    /// The one-dimensional cube of a disk: `V_∅ = Ψ`, `V_{0} = Φ`.
    pub fn from_disk(p: &PervDisk) -> Self {
        Self::from_fn(
            1,
            vec![p.dim_psi(), p.dim_phi()],
            |_, _| Some(p.f.clone()),
            |_, _| Some(p.g.clone()),
        )
        .expect("disk shapes")
    }

    pub fn n(&self) -> usize {
        self.n
    }

    pub fn dims(&self) -> &[usize] {
        &self.dims
    }

    pub fn f(&self, i: usize, j: usize) -> &Matrix {
        &self.f[&(i, j)]
    }

    pub fn g(&self, i: usize, j: usize) -> &Matrix {
        &self.g[&(i, j)]
    }

    /// Exterior product: `V_{(J,K)} = V_J ⊗ W_K`, axes of `self` first.
    pub fn tensor(&self, other: &PervCube) -> PervCube {
        let (n, m) = (self.n, other.n);
        let split = |mask: usize| (mask & ((1 << n) - 1), mask >> n);
        let dims = (0..1usize << (n + m))
            .map(|mask| {
                let (a, b) = split(mask);
                self.dims[a] * other.dims[b]
            })
            .collect();
        let pick = |i: usize, j: usize, ours: &BTreeMap<_, Matrix>, theirs: &BTreeMap<_, Matrix>| {
            let (a, b) = split(j);
            Some(if i < n {
                ours[&(i, a)].kron(&Matrix::identity(other.dims[b]))
            } else {
                Matrix::identity(self.dims[a]).kron(&theirs[&(i - n, b)])
            })
        };
        PervCube::from_fn(
            n + m,
            dims,
            |i, j| pick(i, j, &self.f, &other.f),
            |i, j| pick(i, j, &self.g, &other.g),
        )
        .expect("tensor shapes")
    }

    pub fn validate(&self) -> Report {
        let mut report = Report::new();
        let n = self.n;
        for i in 0..n {
            for j in (0..1usize << n).filter(|j| j & (1 << i) == 0) {
                let up = j | (1 << i);
                let gf = id_minus(&(&self.g[&(i, j)] * &self.f[&(i, j)]));
                if singular(&gf) {
                    report.push_with("not_invertible", format!("g_{i}f_{i} at {up:#b}"), "g f − id is singular", gf);
                }
                let fg = id_minus(&(&self.f[&(i, j)] * &self.g[&(i, j)]));
                if singular(&fg) {
                    report.push_with("not_invertible", format!("f_{i}g_{i} at {j:#b}"), "f g − id is singular", fg);
                }
            }
        }
        for i in 0..n {
            for k in 0..n {
                if i == k {
                    continue;
                }
                let (bi, bk) = (1 << i, 1 << k);
                for j in (0..1usize << n).filter(|j| j & (bi | bk) == 0) {
                    if i < k {
                        // f_i f_k = f_k f_i on V_{J∪i∪k} → V_J
                        let a = &self.f[&(i, j)] * &self.f[&(k, j | bi)];
                        let b = &self.f[&(k, j)] * &self.f[&(i, j | bk)];
                        if a != b {
                            report.push_with("f_commute", format!("f_{i},f_{k} at {j:#b}"), "f_i f_k ≠ f_k f_i", &a - &b);
                        }
                        // g_i g_k = g_k g_i on V_J → V_{J∪i∪k}
                        let a = &self.g[&(i, j | bk)] * &self.g[&(k, j)];
                        let b = &self.g[&(k, j | bi)] * &self.g[&(i, j)];
                        if a != b {
                            report.push_with("g_commute", format!("g_{i},g_{k} at {j:#b}"), "g_i g_k ≠ g_k g_i", &a - &b);
                        }
                    }
                    // g_i f_k = f_k g_i on V_{J∪k} → V_{J∪i}
                    let a = &self.g[&(i, j)] * &self.f[&(k, j)];
                    let b = &self.f[&(k, j | bi)] * &self.g[&(i, j | bk)];
                    if a != b {
                        report.push_with("gf_commute", format!("g_{i},f_{k} at {j:#b}"), "g_i f_k ≠ f_k g_i", &a - &b);
                    }
                }
            }
        }
        report
    }

    pub fn ensure_valid(&self) -> Result<()> {
        self.validate().into_result()
    }
}

/// The flag as a cube: `V_{0..k-1} = A_k`, with `f = δ_k` and `g = d_k` on the
/// edge adding `k`; every other vertex and map is zero.
pub fn flag_embed_cube(p: &PervFlag) -> Result<PervCube> {
    p.ensure_valid()?;
    let n = p.n();
    let initial = |mask: usize| -> Option<usize> {
        let k = mask.count_ones() as usize;
        (mask == (1 << k) - 1).then_some(k)
    };
    let dims = (0..1usize << n).map(|m| initial(m).map_or(0, |k| p.dims[k])).collect();
    PervCube::from_fn(
        n,
        dims,
        |i, j| (initial(j) == Some(i)).then(|| p.delta[i].clone()),
        |i, j| (initial(j) == Some(i)).then(|| p.d[i].clone()),
    )
}

/// Reads the chain `V_{0..k-1}` back out of a cube. Fails if any other vertex
/// is nonzero.
pub fn cube_to_flag(c: &PervCube) -> Result<PervFlag> {
    let n = c.n;
    for mask in 0..1usize << n {
        let k = mask.count_ones() as usize;
        if mask != (1 << k) - 1 && c.dims[mask] != 0 {
            return Err(Error::domain(format!("vertex {mask:#b} is off the flag and nonzero")));
        }
    }
    let dims = (0..=n).map(|k| c.dims[(1 << k) - 1]).collect();
    let d = (0..n).map(|k| c.g(k, (1 << k) - 1).clone()).collect();
    let delta = (0..n).map(|k| c.f(k, (1 << k) - 1).clone()).collect();
    PervFlag::new(dims, d, delta)
}

/// `f_i: Φ → Ψ_i` and `g_i: Ψ_i → Φ` for `i` in `0..n`, indices mod `n`.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct LocalStar {
    dim_phi: usize,
    f: Vec<Matrix>,
    g: Vec<Matrix>,
}

impl LocalStar {
    pub fn new(dim_phi: usize, dims_psi: Vec<usize>, f: Vec<Matrix>, g: Vec<Matrix>) -> Result<Self> {
        if dims_psi.is_empty() {
            return Err(Error::dim("a local star needs at least one Ψ"));
        }
        if f.len() != dims_psi.len() || g.len() != dims_psi.len() {
            return Err(Error::dim("one f and one g per Ψ"));
        }
        for (i, &d) in dims_psi.iter().enumerate() {
            if f[i].shape() != (d, dim_phi) || g[i].shape() != (dim_phi, d) {
                return Err(Error::dim(format!("f_{i} or g_{i} has the wrong shape")));
            }
        }
        Ok(Self { dim_phi, f, g })
    }

    pub fn n(&self) -> usize {
        self.f.len()
    }

    pub fn dim_phi(&self) -> usize {
        self.dim_phi
    }

    pub fn dims_psi(&self) -> Vec<usize> {
        self.f.iter().map(|m| m.rows()).collect()
    }

    pub fn f(&self, i: usize) -> &Matrix {
        &self.f[i]
    }

    pub fn g(&self, i: usize) -> &Matrix {
        &self.g[i]
    }

    /// `f_i g_i = id`, `f_{i+1} g_i` invertible, `f_j g_i = 0` otherwise.
    pub fn validate(&self) -> Report {
        let mut report = Report::new();
        let n = self.n();
        for i in 0..n {
            let next = (i + 1) % n;
            let fg = &self.f[i] * &self.g[i];
            if !fg.is_identity() {
                report.push_with("not_identity", format!("f_{i} g_{i}"), "f_i g_i ≠ id", fg);
            }
            let step = &self.f[next] * &self.g[i];
            if singular(&step) {
                report.push_with("not_invertible", format!("f_{next} g_{i}"), "f_{i+1} g_i is singular", step);
            }
            for j in (0..n).filter(|&j| j != i && j != next) {
                let z = &self.f[j] * &self.g[i];
                if !z.is_zero() {
                    report.push_with("not_zero", format!("f_{j} g_{i}"), "f_j g_i ≠ 0", z);
                }
            }
        }
        report
    }
}

/// Whether monodromies act on the target of each restriction (sheaf) or on
/// the source of each corestriction (cosheaf).
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub enum EncodingKind {
    Sheaf,
    Cosheaf,
}

/// Stalk complexes with (co)restrictions `r_i`, monodromies `T_i` and
/// homotopies `h_i` witnessing `T_i ∘ r_i ≃ r_i` (sheaf) or `r_i ∘ T_i ≃ r_i`
/// (cosheaf).
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct SheafEncoding {
    pub kind: EncodingKind,
    pub stalks: Vec<ChainComplex>,
    pub restrictions: Vec<ChainMap>,
    pub monodromies: Vec<ChainMap>,
    pub homotopies: Vec<ChainHomotopy>,
}

/// Sheaf (`dual = false`): `F_0 = (Ψ →g Φ)` in degrees 1, 0 and `F_1 = Ψ` in
/// degree 1, `res = (id, 0)`, `T = id − fg` on `F_1`, homotopy `−f`.
///
/// Cosheaf (`dual = true`): `F_0 = (Φ →f Ψ)` in degrees 0, −1 and `F_1 = Ψ`
/// in degree −1, `cores = id`, `T = id − fg` on `F_1`, homotopy `−g`.
pub fn encode_sheaf(p: &PervDisk, dual: bool) -> Result<SheafEncoding> {
    p.ensure_valid()?;
    let t = p.t_psi();
    let psi = p.dim_psi();
    if !dual {
        let f0 = ChainComplex::two_term(1, p.g.clone());
        let f1 = ChainComplex::concentrated(1, psi);
        let res = ChainMap::from_fn(f0.clone(), f1.clone(), |k| {
            if k == 1 { Matrix::identity(psi) } else { Matrix::zeros(0, f0.dim(k)) }
        })?;
        let mono = ChainMap::new(f1.clone(), f1.clone(), vec![t])?;
        let h = ChainHomotopy::from_fn(f0.clone(), f1.clone(), |k| {
            if k == 0 { -&p.f } else { Matrix::zeros(0, f0.dim(k)) }
        })?;
        Ok(SheafEncoding {
            kind: EncodingKind::Sheaf,
            stalks: vec![f0, f1],
            restrictions: vec![res],
            monodromies: vec![mono],
            homotopies: vec![h],
        })
    } else {
        let f0 = ChainComplex::two_term(0, p.f.clone());
        let f1 = ChainComplex::concentrated(-1, psi);
        let cores = ChainMap::new(f1.clone(), f0.clone(), vec![Matrix::identity(psi)])?;
        let mono = ChainMap::new(f1.clone(), f1.clone(), vec![t])?;
        let h = ChainHomotopy::new(f1.clone(), f0.clone(), vec![-&p.g])?;
        Ok(SheafEncoding {
            kind: EncodingKind::Cosheaf,
            stalks: vec![f0, f1],
            restrictions: vec![cores],
            monodromies: vec![mono],
            homotopies: vec![h],
        })
    }
}

/// Stalk `F_i` carries `A_k` in degree `k` for `k = i..n` with differential
/// `δ`. `res_i: F_{i-1} → F_i` is the identity on `A_k`, `k ≥ i`, and zero on
/// `A_{i-1}`; `T_i = id − dδ − δd` on `F_i`; the homotopy is `−d`.
pub fn encode_sheaf_flag(p: &PervFlag) -> Result<SheafEncoding> {
    p.ensure_valid()?;
    let n = p.n() as i64;
    let stalk = |i: i64| -> ChainComplex {
        let dims = (i..=n).map(|k| p.dims[k as usize]).collect();
        let diffs = (i + 1..=n).map(|k| p.delta[(k - 1) as usize].clone()).collect();
        ChainComplex::new(i, dims, diffs).expect("stalk shapes")
    };
    let stalks: Vec<ChainComplex> = (0..=n).map(stalk).collect();
    let mut restrictions = Vec::new();
    let mut monodromies = Vec::new();
    let mut homotopies = Vec::new();
    for i in 1..=n {
        let (src, tgt) = (&stalks[(i - 1) as usize], &stalks[i as usize]);
        restrictions.push(ChainMap::from_fn(src.clone(), tgt.clone(), |k| {
            if k >= i {
                Matrix::identity(p.dims[k as usize])
            } else {
                Matrix::zeros(0, src.dim(k))
            }
        })?);
        monodromies.push(ChainMap::from_fn(tgt.clone(), tgt.clone(), |k| p.monodromy(k as usize))?);
        homotopies.push(ChainHomotopy::from_fn(src.clone(), tgt.clone(), |k| {
            if k < n {
                -&p.d[k as usize]
            } else {
                Matrix::zeros(0, src.dim(k))
            }
        })?);
    }
    Ok(SheafEncoding {
        kind: EncodingKind::Sheaf,
        stalks,
        restrictions,
        monodromies,
        homotopies,
    })
}

/// Checks every stalk, (co)restriction, monodromy and homotopy identity.
pub fn verify_encoding(e: &SheafEncoding) -> Report {
    let mut report = Report::new();
    for (i, s) in e.stalks.iter().enumerate() {
        report.absorb(&format!("stalk {i}"), s.validate());
    }
    let count = e.restrictions.len();
    if e.monodromies.len() != count || e.homotopies.len() != count {
        report.push(
            "shape",
            "encoding",
            format!(
                "{count} restrictions, {} monodromies, {} homotopies",
                e.monodromies.len(),
                e.homotopies.len()
            ),
        );
        return report;
    }
    for i in 0..count {
        let (r, t, h) = (&e.restrictions[i], &e.monodromies[i], &e.homotopies[i]);
        let at = |what: &str| format!("{what} {}", i + 1);
        report.absorb(&at("restriction"), r.validate());
        report.absorb(&at("monodromy"), t.validate());
        let acted = match e.kind {
            EncodingKind::Sheaf => r.target(),
            EncodingKind::Cosheaf => r.source(),
        };
        if t.source() != acted || t.target() != acted {
            report.push("shape", at("monodromy"), "monodromy does not act on the right stalk");
            continue;
        }
        match t.degreewise_inverse() {
            Ok(Some(_)) => {}
            _ => report.push("not_invertible", at("monodromy"), "monodromy is not degreewise invertible"),
        }
        let twisted = match e.kind {
            EncodingKind::Sheaf => t.after(r),
            EncodingKind::Cosheaf => r.after(t),
        };
        let twisted = match twisted {
            Ok(m) => m,
            Err(err) => {
                report.push("shape", at("monodromy"), err.to_string());
                continue;
            }
        };
        match homotopy_defects(r, &twisted, h) {
            Ok(bad) => {
                for k in bad {
                    report.push(
                        "homotopy",
                        format!("{}, degree {k}", at("homotopy")),
                        "twisted − untwisted ≠ d h + h d",
                    );
                }
            }
            Err(err) => report.push("shape", at("homotopy"), err.to_string()),
        }
    }
    report
}
