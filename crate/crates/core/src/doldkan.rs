//! Truncated simplicial vector spaces, their normalized chain complexes and
//! the inverse functor Γ.

use crate::chain::ChainComplex;
use crate::exactlin::{invert, pivot_columns, Matrix};
use crate::{Error, Report, Result};

/// `X_0, …, X_N` with faces `d_i: X_n → X_{n-1}` (`1 ≤ n ≤ N`, `0 ≤ i ≤ n`)
/// and degeneracies `s_i: X_n → X_{n+1}` (`n < N`, `0 ≤ i ≤ n`).
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct SimplicialVS {
    dims: Vec<usize>,
    /// `faces[n - 1][i]` is `d_i` on `X_n`.
    faces: Vec<Vec<Matrix>>,
    /// `degeneracies[n][i]` is `s_i` on `X_n`.
    degeneracies: Vec<Vec<Matrix>>,
}

impl SimplicialVS {
    pub fn new(dims: Vec<usize>, faces: Vec<Vec<Matrix>>, degeneracies: Vec<Vec<Matrix>>) -> Result<Self> {
        if dims.is_empty() {
            return Err(Error::dim("a simplicial object needs X_0"));
        }
        let top = dims.len() - 1;
        if faces.len() != top || degeneracies.len() != top {
            return Err(Error::dim(format!("truncation {top} needs {top} levels of faces and degeneracies")));
        }
        for n in 1..=top {
            if faces[n - 1].len() != n + 1 {
                return Err(Error::dim(format!("X_{n} needs {} faces", n + 1)));
            }
            for (i, d) in faces[n - 1].iter().enumerate() {
                if d.shape() != (dims[n - 1], dims[n]) {
                    return Err(Error::dim(format!("d_{i} on X_{n} has the wrong shape")));
                }
            }
        }
        for n in 0..top {
            if degeneracies[n].len() != n + 1 {
                return Err(Error::dim(format!("X_{n} needs {} degeneracies", n + 1)));
            }
            for (i, s) in degeneracies[n].iter().enumerate() {
                if s.shape() != (dims[n + 1], dims[n]) {
                    return Err(Error::dim(format!("s_{i} on X_{n} has the wrong shape")));
                }
            }
        }
        Ok(Self { dims, faces, degeneracies })
    }

    /// The truncation level `N`.
    pub fn top(&self) -> usize {
        self.dims.len() - 1
    }

    pub fn dims(&self) -> &[usize] {
        &self.dims
    }

    /// `d_i: X_n → X_{n-1}`.
    pub fn face(&self, n: usize, i: usize) -> &Matrix {
        &self.faces[n - 1][i]
    }

    /// `s_i: X_n → X_{n+1}`.
    pub fn degeneracy(&self, n: usize, i: usize) -> &Matrix {
        &self.degeneracies[n][i]
    }

    /// Checks every simplicial identity that lives inside `X_0..X_N`.
    pub fn validate(&self) -> Report {
        let mut report = Report::new();
        let top = self.top();
        let mut check = |code: &str, at: String, lhs: Matrix, rhs: Matrix| {
            if lhs != rhs {
                report.push_with(code, at, "simplicial identity fails", &lhs - &rhs);
            }
        };
        for n in 2..=top {
            for j in 0..=n {
                for i in 0..j {
                    // d_i d_j = d_{j-1} d_i
                    check(
                        "face_face",
                        format!("d_{i} d_{j} on X_{n}"),
                        self.face(n - 1, i) * self.face(n, j),
                        self.face(n - 1, j - 1) * self.face(n, i),
                    );
                }
            }
        }
        for n in 0..top {
            let id = Matrix::identity(self.dims[n]);
            for j in 0..=n {
                let s = self.degeneracy(n, j);
                for i in 0..=n + 1 {
                    let lhs = self.face(n + 1, i) * s;
                    let at = format!("d_{i} s_{j} on X_{n}");
                    if i < j {
                        check("face_degeneracy", at, lhs, self.degeneracy(n - 1, j - 1) * self.face(n, i));
                    } else if i == j || i == j + 1 {
                        check("face_degeneracy", at, lhs, id.clone());
                    } else {
                        check("face_degeneracy", at, lhs, self.degeneracy(n - 1, j) * self.face(n, i - 1));
                    }
                }
            }
        }
        for n in 0..top.saturating_sub(1) {
            for j in 0..=n {
                for i in 0..=j {
                    // s_i s_j = s_{j+1} s_i
                    check(
                        "degeneracy_degeneracy",
                        format!("s_{i} s_{j} on X_{n}"),
                        self.degeneracy(n + 1, i) * self.degeneracy(n, j),
                        self.degeneracy(n + 1, j + 1) * self.degeneracy(n, i),
                    );
                }
            }
        }
        report
    }

    pub fn ensure_valid(&self) -> Result<()> {
        self.validate().into_result()
    }

    /// `Σ (-1)^i d_i: X_n → X_{n-1}`.
    pub fn alternating_face(&self, n: usize) -> Matrix {
        let mut m = Matrix::zeros(self.dims[n - 1], self.dims[n]);
        for i in 0..=n {
            let d = self.face(n, i);
            m = if i % 2 == 0 { &m + d } else { &m - d };
        }
        m
    }

    /// Columns spanning the degenerate part of `X_n`.
    pub fn degenerate_span(&self, n: usize) -> Matrix {
        if n == 0 {
            return Matrix::zeros(self.dims[0], 0);
        }
        let blocks: Vec<&Matrix> = self.degeneracies[n - 1].iter().collect();
        Matrix::hstack(&blocks).expect("degeneracies share a target")
    }

    /// Change of basis at every level: `X_n` is re-coordinatized by `p(n)`.
    pub fn change_basis(&self, mut p: impl FnMut(usize) -> Matrix) -> Result<Self> {
        let mats: Vec<Matrix> = (0..=self.top()).map(&mut p).collect();
        let mut invs = Vec::with_capacity(mats.len());
        for m in &mats {
            invs.push(invert(m)?.ok_or_else(|| Error::domain("basis change is singular"))?);
        }
        let faces = (1..=self.top())
            .map(|n| (0..=n).map(|i| &(&mats[n - 1] * self.face(n, i)) * &invs[n]).collect())
            .collect();
        let degeneracies = (0..self.top())
            .map(|n| (0..=n).map(|i| &(&mats[n + 1] * self.degeneracy(n, i)) * &invs[n]).collect())
            .collect();
        Self::new(self.dims.clone(), faces, degeneracies)
    }

    /// Levelwise direct sum.
    pub fn direct_sum(&self, other: &SimplicialVS) -> Result<Self> {
        if self.top() != other.top() {
            return Err(Error::dim("truncation levels differ"));
        }
        let dims = self.dims.iter().zip(&other.dims).map(|(a, b)| a + b).collect();
        let faces = (1..=self.top())
            .map(|n| (0..=n).map(|i| Matrix::block_diag(&[self.face(n, i), other.face(n, i)])).collect())
            .collect();
        let degeneracies = (0..self.top())
            .map(|n| {
                (0..=n)
                    .map(|i| Matrix::block_diag(&[self.degeneracy(n, i), other.degeneracy(n, i)]))
                    .collect()
            })
            .collect();
        Self::new(dims, faces, degeneracies)
    }
}

/// Quotient data for `X_n / D_n`.
struct Quotient {
    /// `X_n → X̄_n`.
    project: Matrix,
    /// Chosen complement `X̄_n → X_n` (standard basis vectors).
    lift: Matrix,
}

fn quotient(x: &SimplicialVS, n: usize) -> Quotient {
    let dim = x.dims[n];
    let deg = x.degenerate_span(n);
    let aug = Matrix::hstack(&[&deg, &Matrix::identity(dim)]).expect("same rows");
    let pivots = pivot_columns(&aug);
    let (from_deg, comp): (Vec<usize>, Vec<usize>) = pivots.iter().partition(|&&c| c < deg.cols());
    let comp: Vec<usize> = comp.into_iter().map(|c| c - deg.cols()).collect();
    let basis: Vec<Vec<_>> = from_deg
        .iter()
        .map(|&c| deg.col(c))
        .chain(comp.iter().map(|&c| Matrix::identity(dim).col(c)))
        .collect();
    let b = Matrix::from_columns(dim, &basis).expect("basis shape");
    let b_inv = invert(&b).expect("square").expect("pivots form a basis");
    let r = from_deg.len();
    Quotient {
        project: b_inv.submatrix(r, 0, dim - r, dim),
        lift: Matrix::from_columns(dim, &comp.iter().map(|&c| Matrix::identity(dim).col(c)).collect::<Vec<_>>())
            .expect("lift shape"),
    }
}

/// `X̄_n = X_n / (degenerate simplices)` with the differential induced by
/// `Σ (-1)^i d_i`, in degrees `0..=N`.
///
/// The complement of the degenerate part is spanned by standard basis
/// vectors, picked greedily from the left.
pub fn normalize(x: &SimplicialVS) -> Result<ChainComplex> {
    x.ensure_valid()?;
    let qs: Vec<Quotient> = (0..=x.top()).map(|n| quotient(x, n)).collect();
    let dims = qs.iter().map(|q| q.lift.cols()).collect();
    let diffs = (1..=x.top())
        .map(|n| &(&qs[n - 1].project * &x.alternating_face(n)) * &qs[n].lift)
        .collect();
    let c = ChainComplex::new(0, dims, diffs)?;
    c.ensure_valid()?;
    Ok(c)
}

/// Whether `Σ (-1)^i d_i` maps degenerate simplices of `X_n` into those of
/// `X_{n-1}`, for every `n = 1..=N`. Returns the first failing `n`.
pub fn degenerate_preserved(x: &SimplicialVS) -> Option<usize> {
    (1..=x.top()).find(|&n| {
        let image = &x.alternating_face(n) * &x.degenerate_span(n);
        let q = quotient(x, n - 1);
        !(&q.project * &image).is_zero()
    })
}

/// Monotone surjections `[n] ↠ [k]` as value lists, for all `k`, ordered by
/// `k` and then lexicographically.
pub fn surjections(n: usize) -> Vec<Vec<usize>> {
    fn go(n: usize, k: usize, cur: &mut Vec<usize>, out: &mut Vec<Vec<usize>>) {
        if cur.len() == n + 1 {
            if cur[n] == k {
                out.push(cur.clone());
            }
            return;
        }
        let last = *cur.last().expect("starts at 0");
        for v in [last, last + 1] {
            if v <= k {
                cur.push(v);
                go(n, k, cur, out);
                cur.pop();
            }
        }
    }
    let mut out = Vec::new();
    for k in 0..=n {
        go(n, k, &mut vec![0], &mut out);
    }
    out
}

fn target_of(sigma: &[usize]) -> usize {
    *sigma.last().expect("nonempty")
}

/// `δ^i: [n-1] → [n]`, skipping `i`.
fn coface(n: usize, i: usize) -> Vec<usize> {
    (0..n).map(|j| if j < i { j } else { j + 1 }).collect()
}

/// `σ^i: [n+1] → [n]`, hitting `i` twice.
fn codegeneracy(n: usize, i: usize) -> Vec<usize> {
    (0..=n + 1).map(|j| if j <= i { j } else { j - 1 }).collect()
}

/// `Γ(C)_n = ⊕_{σ: [n] ↠ [k]} C_k` for `n = 0..=top`.
///
/// For `θ: [m] → [n]` the summand of `σ` goes to the summand of the
/// surjective part `σ'` of `σθ = η σ'`: by the identity if `η = id`, by `d`
/// if `η = δ^0`, and to zero otherwise.
pub fn gamma(c: &ChainComplex, top: usize) -> Result<SimplicialVS> {
    if (c.lo()..0).any(|k| c.dim(k) != 0) {
        return Err(Error::domain("Γ needs a complex supported in degrees ≥ 0"));
    }
    c.ensure_valid()?;
    let dim = |k: usize| c.dim(k as i64);
    let surj: Vec<Vec<Vec<usize>>> = (0..=top).map(surjections).collect();
    let offsets: Vec<Vec<usize>> = surj
        .iter()
        .map(|ss| {
            let mut acc = 0;
            ss.iter()
                .map(|s| {
                    let o = acc;
                    acc += dim(target_of(s));
                    o
                })
                .collect()
        })
        .collect();
    let dims: Vec<usize> = surj.iter().map(|ss| ss.iter().map(|s| dim(target_of(s))).sum()).collect();
    let position = |m: usize, s: &[usize]| surj[m].iter().position(|t| t == s).expect("surjection");
    // X(θ): X_n → X_m
    let structure = |n: usize, m: usize, theta: &[usize]| -> Matrix {
        let mut out = Matrix::zeros(dims[m], dims[n]);
        for (si, sigma) in surj[n].iter().enumerate() {
            let k = target_of(sigma);
            if dim(k) == 0 {
                continue;
            }
            let comp: Vec<usize> = theta.iter().map(|&t| sigma[t]).collect();
            let mut image = comp.clone();
            image.dedup();
            let j = image.len() - 1;
            let reduced: Vec<usize> = comp.iter().map(|v| image.iter().position(|w| w == v).expect("in image")).collect();
            let block = if j == k {
                Matrix::identity(dim(k))
            } else if j + 1 == k && image == (1..=k).collect::<Vec<_>>() {
                c.d(k as i64)
            } else {
                continue;
            };
            let ti = position(m, &reduced);
            out.set_block(offsets[m][ti], offsets[n][si], &block);
        }
        out
    };
    let faces = (1..=top)
        .map(|n| (0..=n).map(|i| structure(n, n - 1, &coface(n, i))).collect())
        .collect();
    let degeneracies = (0..top)
        .map(|n| (0..=n).map(|i| structure(n, n + 1, &codegeneracy(n, i))).collect())
        .collect();
    SimplicialVS::new(dims, faces, degeneracies)
}

/// The free simplicial vector space on `Δ^p`: `X_n` has a basis of monotone
/// maps `[n] → [p]`, acted on by precomposition.
pub fn free_on_simplex(p: usize, top: usize) -> SimplicialVS {
    fn monotone(n: usize, p: usize) -> Vec<Vec<usize>> {
        let mut out = Vec::new();
        let mut cur = Vec::new();
        fn go(n: usize, p: usize, cur: &mut Vec<usize>, out: &mut Vec<Vec<usize>>) {
            if cur.len() == n + 1 {
                out.push(cur.clone());
                return;
            }
            let start = cur.last().copied().unwrap_or(0);
            for v in start..=p {
                cur.push(v);
                go(n, p, cur, out);
                cur.pop();
            }
        }
        go(n, p, &mut cur, &mut out);
        out
    }
    let simplices: Vec<Vec<Vec<usize>>> = (0..=top).map(|n| monotone(n, p)).collect();
    let structure = |n: usize, m: usize, theta: &[usize]| -> Matrix {
        let mut out = Matrix::zeros(simplices[m].len(), simplices[n].len());
        for (col, x) in simplices[n].iter().enumerate() {
            let y: Vec<usize> = theta.iter().map(|&t| x[t]).collect();
            let row = simplices[m].iter().position(|s| *s == y).expect("monotone");
            out.set(row, col, crate::exactlin::rat(1));
        }
        out
    };
    let dims = simplices.iter().map(|s| s.len()).collect();
    let faces = (1..=top)
        .map(|n| (0..=n).map(|i| structure(n, n - 1, &coface(n, i))).collect())
        .collect();
    let degeneracies = (0..top)
        .map(|n| (0..=n).map(|i| structure(n, n + 1, &codegeneracy(n, i))).collect())
        .collect();
    SimplicialVS::new(dims, faces, degeneracies).expect("free shapes")
}
