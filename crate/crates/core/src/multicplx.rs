//! Multicomplexes with commuting differentials, cubes of complexes and their
//! totalizations.
//!
//! A multicomplex stores one differential per axis, each lowering its own
//! coordinate by one, with `d_j² = 0` and `d_i d_j = d_j d_i`. Signs appear
//! only when totalizing: the axis-`j` differential at multi-degree `a` is
//! multiplied by `(-1)^(a_0 + … + a_{j-1})`.
//!
//! A cube is a multicomplex supported on `{0,1}ⁿ`. Vertex `J ⊆ {0..n-1}` is the
//! multi-degree with `a_i = 1` for `i ∈ J`, and the edges go `J ∪ {i} → J`.

use std::collections::BTreeMap;

use crate::chain::{cone, cone_functor, sign, ChainComplex, ChainMap};
use crate::exactlin::{rat, Matrix};
use crate::{Error, Report, Result};

#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct MultiComplex {
    lo: Vec<i64>,
    shape: Vec<usize>,
    dims: Vec<usize>,
    /// `diffs[j][idx]` maps the point `idx` to the point one lower on axis `j`.
    /// At the bottom of an axis it is a `0 × dim` matrix.
    diffs: Vec<Vec<Matrix>>,
}

impl MultiComplex {
    /// Box `lo_j ..= lo_j + shape_j - 1` on every axis. `dims` and each
    /// `diffs[j]` are indexed row-major over the box (axis 0 most significant).
    pub fn new(
        lo: Vec<i64>,
        shape: Vec<usize>,
        dims: Vec<usize>,
        diffs: Vec<Vec<Matrix>>,
    ) -> Result<Self> {
        if lo.len() != shape.len() || lo.is_empty() {
            return Err(Error::dim("a multicomplex needs at least one axis"));
        }
        if shape.contains(&0) {
            return Err(Error::dim("every axis needs at least one degree"));
        }
        let size: usize = shape.iter().product();
        if dims.len() != size {
            return Err(Error::dim(format!(
                "{} dimensions for a box of {size} points",
                dims.len()
            )));
        }
        if diffs.len() != lo.len() {
            return Err(Error::dim(format!(
                "{} differential families for {} axes",
                diffs.len(),
                lo.len()
            )));
        }
        let m = Self {
            lo,
            shape,
            dims,
            diffs,
        };
        for (j, family) in m.diffs.iter().enumerate() {
            if family.len() != size {
                return Err(Error::dim(format!("axis {j}: {} differentials", family.len())));
            }
            for (idx, d) in family.iter().enumerate() {
                let a = m.point(idx);
                let mut b = a.clone();
                b[j] -= 1;
                let expected = (m.dim(&b), m.dims[idx]);
                if d.shape() != expected {
                    return Err(Error::dim(format!(
                        "d_{j} at {a:?} is {}x{}, expected {}x{}",
                        d.rows(),
                        d.cols(),
                        expected.0,
                        expected.1
                    )));
                }
            }
        }
        Ok(m)
    }

    /// Builds from closures; `diff(j, a)` returning `None` means the zero map.
    pub fn from_fn(
        lo: Vec<i64>,
        shape: Vec<usize>,
        dim: impl Fn(&[i64]) -> usize,
        mut diff: impl FnMut(usize, &[i64]) -> Option<Matrix>,
    ) -> Result<Self> {
        let size: usize = shape.iter().product();
        let points: Vec<Vec<i64>> = (0..size).map(|i| point_in(&lo, &shape, i)).collect();
        let dims: Vec<usize> = points.iter().map(|a| dim(a)).collect();
        let mut diffs = Vec::with_capacity(lo.len());
        for j in 0..lo.len() {
            let family = points
                .iter()
                .zip(&dims)
                .map(|(a, &da)| {
                    let mut b = a.clone();
                    b[j] -= 1;
                    let rows = if b[j] < lo[j] { 0 } else { dim(&b) };
                    match diff(j, a) {
                        Some(m) if rows > 0 => m,
                        _ => Matrix::zeros(rows, da),
                    }
                })
                .collect();
            diffs.push(family);
        }
        Self::new(lo, shape, dims, diffs)
    }

    /// A chain complex as a one-axis multicomplex.
    pub fn from_complex(c: &ChainComplex) -> Self {
        Self::from_fn(
            vec![c.lo()],
            vec![c.dims().len()],
            |a| c.dim(a[0]),
            |_, a| Some(c.d(a[0])),
        )
        .expect("complex shapes")
    }

    pub fn n(&self) -> usize {
        self.lo.len()
    }

    pub fn lo(&self) -> &[i64] {
        &self.lo
    }

    pub fn shape(&self) -> &[usize] {
        &self.shape
    }

    /// Upper corner of the box.
    pub fn hi(&self) -> Vec<i64> {
        self.lo
            .iter()
            .zip(&self.shape)
            .map(|(l, s)| l + *s as i64 - 1)
            .collect()
    }

    fn size(&self) -> usize {
        self.dims.len()
    }

    fn point(&self, idx: usize) -> Vec<i64> {
        point_in(&self.lo, &self.shape, idx)
    }

    fn index(&self, a: &[i64]) -> Option<usize> {
        if a.len() != self.n() {
            return None;
        }
        let mut idx = 0;
        for ((&x, &l), &s) in a.iter().zip(&self.lo).zip(&self.shape) {
            if x < l || x >= l + s as i64 {
                return None;
            }
            idx = idx * s + (x - l) as usize;
        }
        Some(idx)
    }

    /// All multi-degrees of the box in row-major order.
    pub fn points(&self) -> impl Iterator<Item = Vec<i64>> + '_ {
        (0..self.size()).map(|i| self.point(i))
    }

    /// `dim M_a`, zero outside the box.
    pub fn dim(&self, a: &[i64]) -> usize {
        self.index(a).map_or(0, |i| self.dims[i])
    }

    /// `d_j: M_a → M_{a - e_j}`, zero outside the box.
    pub fn d(&self, j: usize, a: &[i64]) -> Matrix {
        let mut b = a.to_vec();
        b[j] -= 1;
        match self.index(a) {
            Some(i) => self.diffs[j][i].clone(),
            None => Matrix::zeros(self.dim(&b), self.dim(a)),
        }
    }

    /// Lists every failure of `d_j² = 0` and of `d_i d_j = d_j d_i`.
    pub fn validate(&self) -> Report {
        let mut report = Report::new();
        for a in self.points() {
            for j in 0..self.n() {
                let mut b = a.clone();
                b[j] -= 1;
                let dd = &self.d(j, &b) * &self.d(j, &a);
                if !dd.is_zero() {
                    report.push_with(
                        "d_squared",
                        format!("axis {j}, degree {a:?}"),
                        format!("d_{j} ∘ d_{j} is nonzero"),
                        dd,
                    );
                }
                for i in j + 1..self.n() {
                    let mut bi = a.clone();
                    bi[i] -= 1;
                    let lhs = &self.d(j, &bi) * &self.d(i, &a);
                    let rhs = &self.d(i, &b) * &self.d(j, &a);
                    if lhs != rhs {
                        report.push_with(
                            "not_commuting",
                            format!("axes {j},{i}, degree {a:?}"),
                            format!("d_{j} d_{i} ≠ d_{i} d_{j}"),
                            &lhs - &rhs,
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

    /// Points of total degree `t`, in row-major order, with their offsets in
    /// `tot_t`.
    fn summands(&self) -> BTreeMap<i64, Vec<(usize, usize)>> {
        let mut by_degree: BTreeMap<i64, Vec<(usize, usize)>> = BTreeMap::new();
        for idx in 0..self.size() {
            let t: i64 = self.point(idx).iter().sum();
            let entry = by_degree.entry(t).or_default();
            let offset = entry.last().map_or(0, |&(i, o)| o + self.dims[i]);
            entry.push((idx, offset));
        }
        by_degree
    }

    /// Offset of `M_a` inside `tot_{Σa}`.
    pub fn summand_offset(&self, a: &[i64]) -> Option<usize> {
        let idx = self.index(a)?;
        let t: i64 = a.iter().sum();
        self.summands()[&t]
            .iter()
            .find(|&&(i, _)| i == idx)
            .map(|&(_, o)| o)
    }

    /// `tot_t = ⊕_{Σa = t} M_a` with differential `Σ_j (-1)^(a_0+…+a_{j-1}) d_j`.
    pub fn totalize(&self) -> Result<ChainComplex> {
        self.ensure_valid()?;
        Ok(self.totalize_unchecked())
    }

    fn totalize_unchecked(&self) -> ChainComplex {
        let summands = self.summands();
        let lo: i64 = self.lo.iter().sum();
        let hi: i64 = self.hi().iter().sum();
        let dim_of = |t: i64| -> usize {
            summands
                .get(&t)
                .map_or(0, |v| v.iter().map(|&(i, _)| self.dims[i]).sum())
        };
        let dims = (lo..=hi).map(dim_of).collect();
        let diffs = (lo + 1..=hi)
            .map(|t| {
                let mut m = Matrix::zeros(dim_of(t - 1), dim_of(t));
                let lower = &summands[&(t - 1)];
                for &(idx, col) in &summands[&t] {
                    let a = self.point(idx);
                    let mut prefix = 0;
                    for j in 0..self.n() {
                        let mut b = a.clone();
                        b[j] -= 1;
                        if let Some(bidx) = self.index(&b) {
                            let row = lower.iter().find(|&&(i, _)| i == bidx).expect("summand").1;
                            let blk = self.diffs[j][idx].scale(&rat(sign(prefix)));
                            m.set_block(row, col, &blk);
                        }
                        prefix += a[j];
                    }
                }
                m
            })
            .collect();
        ChainComplex::new(lo, dims, diffs).expect("totalization shapes")
    }

    /// Reorders axes: axis `k` of the result is axis `perm[k]` of `self`.
    pub fn permute_axes(&self, perm: &[usize]) -> Result<MultiComplex> {
        let n = self.n();
        let mut seen = vec![false; n];
        if perm.len() != n || perm.iter().any(|&p| p >= n || std::mem::replace(&mut seen[p], true)) {
            return Err(Error::dim(format!("{perm:?} is not a permutation of {n} axes")));
        }
        let unpermute = |b: &[i64]| -> Vec<i64> {
            let mut a = vec![0; n];
            for (k, &p) in perm.iter().enumerate() {
                a[p] = b[k];
            }
            a
        };
        MultiComplex::from_fn(
            perm.iter().map(|&p| self.lo[p]).collect(),
            perm.iter().map(|&p| self.shape[p]).collect(),
            |b| self.dim(&unpermute(b)),
            |k, b| Some(self.d(perm[k], &unpermute(b))),
        )
    }

    /// Adds `C` as a new last axis: `(M ⊗ C)_{a,k} = M_a ⊗ C_k`, with the old
    /// differentials acting on the left factor and `d_C` on the right.
    pub fn tensor_axis(&self, c: &ChainComplex) -> MultiComplex {
        let n = self.n();
        let mut lo = self.lo.clone();
        lo.push(c.lo());
        let mut shape = self.shape.clone();
        shape.push(c.dims().len());
        MultiComplex::from_fn(
            lo,
            shape,
            |p| self.dim(&p[..n]) * c.dim(p[n]),
            |j, p| {
                let k = p[n];
                Some(if j < n {
                    self.d(j, &p[..n]).kron(&Matrix::identity(c.dim(k)))
                } else {
                    Matrix::identity(self.dim(&p[..n])).kron(&c.d(k))
                })
            },
        )
        .expect("tensor shapes")
    }

    /// Blockwise direct sum over the union of the two boxes.
    pub fn direct_sum(&self, other: &MultiComplex) -> Result<MultiComplex> {
        if self.n() != other.n() {
            return Err(Error::dim("direct sum of multicomplexes with different axis counts"));
        }
        let (h1, h2) = (self.hi(), other.hi());
        let lo: Vec<i64> = self.lo.iter().zip(&other.lo).map(|(a, b)| *a.min(b)).collect();
        let shape = (0..self.n())
            .map(|j| (h1[j].max(h2[j]) - lo[j] + 1) as usize)
            .collect();
        MultiComplex::from_fn(
            lo,
            shape,
            |a| self.dim(a) + other.dim(a),
            |j, a| Some(Matrix::block_diag(&[&self.d(j, a), &other.d(j, a)])),
        )
    }

    /// Conjugates by a change of basis `P_a` at every point:
    /// `d_j(a) ↦ P_{a-e_j} d_j(a) P_a⁻¹`. `P_a` must be invertible.
    pub fn change_basis(&self, mut basis: impl FnMut(&[i64]) -> Matrix) -> Result<MultiComplex> {
        let mut fwd = Vec::with_capacity(self.size());
        let mut inv = Vec::with_capacity(self.size());
        for a in self.points() {
            let p = basis(&a);
            let pi = crate::exactlin::invert(&p)?
                .ok_or_else(|| Error::domain(format!("basis change at {a:?} is singular")))?;
            if p.rows() != self.dim(&a) {
                return Err(Error::dim(format!("basis change at {a:?} has the wrong size")));
            }
            fwd.push(p);
            inv.push(pi);
        }
        MultiComplex::from_fn(
            self.lo.clone(),
            self.shape.clone(),
            |a| self.dim(a),
            |j, a| {
                let mut b = a.to_vec();
                b[j] -= 1;
                let ib = self.index(&b)?;
                let ia = self.index(a).expect("point in box");
                Some(&(&fwd[ib] * &self.d(j, a)) * &inv[ia])
            },
        )
    }
}

fn point_in(lo: &[i64], shape: &[usize], mut idx: usize) -> Vec<i64> {
    let mut a = vec![0; lo.len()];
    for j in (0..lo.len()).rev() {
        a[j] = lo[j] + (idx % shape[j]) as i64;
        idx /= shape[j];
    }
    a
}

/// The bicomplex of a chain map `f: A → B`: axis 0 is the arrow (`A` at 1,
/// `B` at 0), axis 1 the internal degree.
pub fn bicomplex_from_map(f: &ChainMap) -> Result<MultiComplex> {
    f.ensure_valid()?;
    let (a, b) = (f.source(), f.target());
    let lo = a.lo().min(b.lo());
    let hi = a.hi().max(b.hi());
    MultiComplex::from_fn(
        vec![0, lo],
        vec![2, (hi - lo + 1) as usize],
        |p| if p[0] == 1 { a.dim(p[1]) } else { b.dim(p[1]) },
        |j, p| {
            Some(match (j, p[0]) {
                (0, 1) => f.at(p[1]),
                (1, 1) => a.d(p[1]),
                (1, _) => b.d(p[1]),
                _ => return None,
            })
        },
    )
}

/// The isomorphism `tot(bicomplex_from_map(f)) → cone(f)`: `(b, a) ↦ (−a, b)`.
///
/// The source is the totalization re-supported on the cone's degree range.
pub fn tot_to_cone(f: &ChainMap) -> Result<ChainMap> {
    let c = cone(f)?.complex;
    let tot = bicomplex_from_map(f)?
        .totalize()?
        .with_support(c.lo(), c.hi())?;
    let (a, b) = (f.source(), f.target());
    ChainMap::from_fn(tot, c, |n| {
        let (da, db) = (a.dim(n - 1), b.dim(n));
        Matrix::from_blocks(&[da, db], &[db, da], |i, j| match (i, j) {
            (0, 1) => Some(-&Matrix::identity(da)),
            (1, 0) => Some(Matrix::identity(db)),
            _ => None,
        })
    })
}

/// A cube of chain complexes: a vertex per subset `J ⊆ {0..n-1}` (as a bit
/// mask) and an edge `Q_J → Q_{J∖{i}}` for every `i ∈ J`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct ComplexCube {
    n: usize,
    vertices: Vec<ChainComplex>,
    edges: BTreeMap<(usize, usize), ChainMap>,
}

impl ComplexCube {
    /// `edges[(i, J)]` for every `J` containing `i`.
    pub fn new(
        n: usize,
        vertices: Vec<ChainComplex>,
        edges: BTreeMap<(usize, usize), ChainMap>,
    ) -> Result<Self> {
        if vertices.len() != 1 << n {
            return Err(Error::dim(format!(
                "{} vertices for a {n}-cube",
                vertices.len()
            )));
        }
        for i in 0..n {
            for mask in (0..1usize << n).filter(|m| m & (1 << i) != 0) {
                let e = edges
                    .get(&(i, mask))
                    .ok_or_else(|| Error::dim(format!("missing edge {i} at vertex {mask:#b}")))?;
                if e.source() != &vertices[mask] || e.target() != &vertices[mask ^ (1 << i)] {
                    return Err(Error::dim(format!(
                        "edge {i} at vertex {mask:#b} has the wrong endpoints"
                    )));
                }
            }
        }
        if edges.len() != n << n.saturating_sub(1) {
            return Err(Error::dim("edges given outside the cube"));
        }
        Ok(Self { n, vertices, edges })
    }

    pub fn from_fn(
        n: usize,
        vertices: Vec<ChainComplex>,
        mut edge: impl FnMut(usize, usize) -> ChainMap,
    ) -> Result<Self> {
        let mut edges = BTreeMap::new();
        for i in 0..n {
            for mask in (0..1usize << n).filter(|m| m & (1 << i) != 0) {
                edges.insert((i, mask), edge(i, mask));
            }
        }
        Self::new(n, vertices, edges)
    }

    /// Reads a multicomplex on `{0,1}ⁿ` as a cube of complexes concentrated
    /// in degree 0.
    pub fn from_vector_cube(m: &MultiComplex) -> Result<Self> {
        if m.lo.iter().any(|&l| l != 0) || m.shape.iter().any(|&s| s != 2) {
            return Err(Error::domain("a cube must be supported on {0,1}ⁿ"));
        }
        let n = m.n();
        let at = |mask: usize| -> Vec<i64> { (0..n).map(|i| ((mask >> i) & 1) as i64).collect() };
        let vertices: Vec<ChainComplex> = (0..1usize << n)
            .map(|mask| ChainComplex::concentrated(0, m.dim(&at(mask))))
            .collect();
        Self::from_fn(n, vertices.clone(), |i, mask| {
            ChainMap::new(
                vertices[mask].clone(),
                vertices[mask ^ (1 << i)].clone(),
                vec![m.d(i, &at(mask))],
            )
            .expect("edge shapes")
        })
    }

    /// Inverse of [`ComplexCube::unfold`]: the first `n` axes of `m` must be
    /// `{0,1}` and the last axis is the internal degree.
    pub fn fold(m: &MultiComplex) -> Result<Self> {
        let n = m.n() - 1;
        if m.lo[..n].iter().any(|&l| l != 0) || m.shape[..n].iter().any(|&s| s != 2) {
            return Err(Error::domain("cube axes must be supported on {0,1}"));
        }
        let (lo, len) = (m.lo[n], m.shape[n]);
        let at = |mask: usize, k: i64| -> Vec<i64> {
            let mut p: Vec<i64> = (0..n).map(|i| ((mask >> i) & 1) as i64).collect();
            p.push(k);
            p
        };
        let vertices: Vec<ChainComplex> = (0..1usize << n)
            .map(|mask| {
                let dims = (0..len).map(|t| m.dim(&at(mask, lo + t as i64))).collect();
                let diffs = (1..len).map(|t| m.d(n, &at(mask, lo + t as i64))).collect();
                ChainComplex::new(lo, dims, diffs)
            })
            .collect::<Result<_>>()?;
        Self::from_fn(n, vertices.clone(), |i, mask| {
            ChainMap::from_fn(vertices[mask].clone(), vertices[mask ^ (1 << i)].clone(), |k| {
                m.d(i, &at(mask, k))
            })
            .expect("edge shapes")
        })
    }

    pub fn n(&self) -> usize {
        self.n
    }

    pub fn vertex(&self, mask: usize) -> &ChainComplex {
        &self.vertices[mask]
    }

    pub fn edge(&self, i: usize, mask: usize) -> &ChainMap {
        &self.edges[&(i, mask)]
    }

    /// Vertices valid, edges chain maps, every square face commuting exactly.
    pub fn validate(&self) -> Report {
        let mut report = Report::new();
        for (mask, v) in self.vertices.iter().enumerate() {
            report.absorb(&format!("vertex {mask:#b}"), v.validate());
        }
        for ((i, mask), e) in &self.edges {
            report.absorb(&format!("edge {i} at {mask:#b}"), e.validate());
        }
        for mask in 0..1usize << self.n {
            for i in 0..self.n {
                for j in i + 1..self.n {
                    let (bi, bj) = (1 << i, 1 << j);
                    if mask & bi == 0 || mask & bj == 0 {
                        continue;
                    }
                    let (Ok(lhs), Ok(rhs)) = (
                        self.edge(j, mask ^ bi).after(self.edge(i, mask)),
                        self.edge(i, mask ^ bj).after(self.edge(j, mask)),
                    ) else {
                        continue;
                    };
                    if lhs != rhs {
                        report.push(
                            "face_not_commuting",
                            format!("axes {i},{j} at vertex {mask:#b}"),
                            "the two paths around the face differ",
                        );
                    }
                }
            }
        }
        report
    }

    /// Iterated cone, along axis 0 first: each step replaces the cube by the
    /// cube of cones of the edges in the leading axis.
    pub fn total_cofiber(&self) -> Result<ChainComplex> {
        self.validate().into_result()?;
        let mut cube = self.clone();
        while cube.n > 0 {
            cube = cube.cone_first_axis()?;
        }
        Ok(cube.vertices.swap_remove(0))
    }

    fn cone_first_axis(&self) -> Result<ComplexCube> {
        let n = self.n - 1;
        let lift = |k: usize| k << 1;
        let vertices = (0..1usize << n)
            .map(|k| cone(self.edge(0, lift(k) | 1)).map(|c| c.complex))
            .collect::<Result<Vec<_>>>()?;
        let mut edges = BTreeMap::new();
        for i in 0..n {
            for k in (0..1usize << n).filter(|m| m & (1 << i) != 0) {
                let bit = 1 << (i + 1);
                let f = self.edge(0, lift(k) | 1);
                let f2 = self.edge(0, (lift(k) ^ bit) | 1);
                let alpha = self.edge(i + 1, lift(k) | 1);
                let beta = self.edge(i + 1, lift(k));
                edges.insert((i, k), cone_functor(f, f2, alpha, beta)?);
            }
        }
        ComplexCube::new(n, vertices, edges)
    }

    /// `Σ_J (-1)^{|J|} χ(Q_J)`, the Euler characteristic of the total cofiber.
    pub fn alternating_euler(&self) -> i64 {
        self.vertices
            .iter()
            .enumerate()
            .map(|(mask, v)| sign(mask.count_ones() as i64) * v.euler_characteristic())
            .sum()
    }

    /// The multicomplex with the cube axes first and the internal degree as
    /// the last axis.
    pub fn unfold(&self) -> MultiComplex {
        let n = self.n;
        let lo = self.vertices.iter().map(|v| v.lo()).min().expect("nonempty");
        let hi = self.vertices.iter().map(|v| v.hi()).max().expect("nonempty");
        let mask_of = |p: &[i64]| -> usize {
            p[..n]
                .iter()
                .enumerate()
                .map(|(i, &b)| (b as usize) << i)
                .sum()
        };
        let mut lo_v = vec![0; n];
        lo_v.push(lo);
        let mut shape = vec![2; n];
        shape.push((hi - lo + 1) as usize);
        MultiComplex::from_fn(
            lo_v,
            shape,
            |p| self.vertices[mask_of(p)].dim(p[n]),
            |j, p| {
                let mask = mask_of(p);
                Some(if j < n {
                    if mask & (1 << j) == 0 {
                        return None;
                    }
                    self.edge(j, mask).at(p[n])
                } else {
                    self.vertices[mask].d(p[n])
                })
            },
        )
        .expect("unfold shapes")
    }
}

/// The cube of a complex `C` supported on `0..=n`: the vertex `{0..i-1}`
/// carries `C_i`, the edge removing `i-1` from it is `d_i`, everything else is
/// zero.
pub fn complex_to_cube(c: &ChainComplex) -> Result<MultiComplex> {
    c.ensure_valid()?;
    if c.lo() != 0 {
        return Err(Error::domain(format!(
            "complex must start in degree 0, starts in {}",
            c.lo()
        )));
    }
    if c.hi() < 1 {
        return Err(Error::domain("a cube needs a complex on at least degrees 0..=1"));
    }
    let n = c.hi() as usize;
    let initial = |p: &[i64]| -> Option<usize> {
        let i = p.iter().take_while(|&&b| b == 1).count();
        p[i..].iter().all(|&b| b == 0).then_some(i)
    };
    MultiComplex::from_fn(
        vec![0; n],
        vec![2; n],
        |p| initial(p).map_or(0, |i| c.dim(i as i64)),
        |j, p| {
            let i = initial(p)?;
            (i == j + 1).then(|| c.d(i as i64))
        },
    )
}
