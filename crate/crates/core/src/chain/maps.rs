use crate::exactlin::{invert, Matrix};
use crate::{Error, Report, Result};

use super::ChainComplex;

/// Degree-preserving map of complexes, one component per source degree.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct ChainMap {
    source: ChainComplex,
    target: ChainComplex,
    comps: Vec<Matrix>,
}

impl ChainMap {
    /// `comps[i]` is `f_{source.lo + i}`. Shapes are checked, the chain-map
    /// equations are not (see [`ChainMap::validate`]).
    pub fn new(source: ChainComplex, target: ChainComplex, comps: Vec<Matrix>) -> Result<Self> {
        if comps.len() != source.dims().len() {
            return Err(Error::dim(format!(
                "{} components for {} source degrees",
                comps.len(),
                source.dims().len()
            )));
        }
        for (k, f) in source.degrees().zip(&comps) {
            if f.shape() != (target.dim(k), source.dim(k)) {
                return Err(Error::dim(format!(
                    "component in degree {k} is {}x{}, expected {}x{}",
                    f.rows(),
                    f.cols(),
                    target.dim(k),
                    source.dim(k)
                )));
            }
        }
        Ok(Self {
            source,
            target,
            comps,
        })
    }

    /// Builds components from a closure over source degrees.
    pub fn from_fn(
        source: ChainComplex,
        target: ChainComplex,
        mut f: impl FnMut(i64) -> Matrix,
    ) -> Result<Self> {
        let comps = source.degrees().map(&mut f).collect();
        Self::new(source, target, comps)
    }

    pub fn identity(c: &ChainComplex) -> Self {
        Self::from_fn(c.clone(), c.clone(), |k| Matrix::identity(c.dim(k)))
            .expect("identity shapes")
    }

    pub fn zero(source: &ChainComplex, target: &ChainComplex) -> Self {
        Self::from_fn(source.clone(), target.clone(), |k| {
            Matrix::zeros(target.dim(k), source.dim(k))
        })
        .expect("zero shapes")
    }

    pub fn source(&self) -> &ChainComplex {
        &self.source
    }

    pub fn target(&self) -> &ChainComplex {
        &self.target
    }

    /// `f_k`, zero outside the source support.
    pub fn at(&self, k: i64) -> Matrix {
        if k >= self.source.lo() && k <= self.source.hi() {
            self.comps[(k - self.source.lo()) as usize].clone()
        } else {
            Matrix::zeros(self.target.dim(k), self.source.dim(k))
        }
    }

    pub fn components(&self) -> impl Iterator<Item = (i64, &Matrix)> {
        self.source.degrees().zip(self.comps.iter())
    }

    fn span(&self) -> std::ops::RangeInclusive<i64> {
        self.source.lo().min(self.target.lo())..=self.source.hi().max(self.target.hi()) + 1
    }

    /// Every degree where `f_{k-1}·d_k ≠ d_k·f_k`.
    pub fn validate(&self) -> Report {
        let mut report = Report::new();
        for k in self.span() {
            let lhs = &self.at(k - 1) * &self.source.d(k);
            let rhs = &self.target.d(k) * &self.at(k);
            if lhs != rhs {
                report.push_with(
                    "not_chain_map",
                    format!("degree {k}"),
                    format!("f_{} ∘ d_{k} ≠ d_{k} ∘ f_{k}", k - 1),
                    &lhs - &rhs,
                );
            }
        }
        report
    }

    pub fn ensure_valid(&self) -> Result<()> {
        self.validate().into_result()
    }

    /// `self ∘ first`.
    pub fn after(&self, first: &ChainMap) -> Result<ChainMap> {
        if first.target != self.source {
            return Err(Error::dim("composition: target/source mismatch"));
        }
        ChainMap::from_fn(first.source.clone(), self.target.clone(), |k| {
            &self.at(k) * &first.at(k)
        })
    }

    fn same_ends(&self, other: &ChainMap) -> Result<()> {
        if self.source != other.source || self.target != other.target {
            return Err(Error::dim("chain maps have different source or target"));
        }
        Ok(())
    }

    pub fn add(&self, other: &ChainMap) -> Result<ChainMap> {
        self.same_ends(other)?;
        ChainMap::from_fn(self.source.clone(), self.target.clone(), |k| {
            &self.at(k) + &other.at(k)
        })
    }

    pub fn sub(&self, other: &ChainMap) -> Result<ChainMap> {
        self.same_ends(other)?;
        ChainMap::from_fn(self.source.clone(), self.target.clone(), |k| {
            &self.at(k) - &other.at(k)
        })
    }

    pub fn neg(&self) -> ChainMap {
        ChainMap::from_fn(self.source.clone(), self.target.clone(), |k| -&self.at(k))
            .expect("same shapes")
    }

    /// Degreewise inverse when every component (over the union of supports)
    /// is invertible.
    pub fn degreewise_inverse(&self) -> Result<Option<ChainMap>> {
        let lo = self.source.lo().min(self.target.lo());
        let hi = self.source.hi().max(self.target.hi());
        let mut inv = Vec::new();
        for k in lo..=hi {
            if self.source.dim(k) != self.target.dim(k) {
                return Ok(None);
            }
            match invert(&self.at(k))? {
                Some(m) => inv.push((k, m)),
                None => return Ok(None),
            }
        }
        let comps = self
            .target
            .degrees()
            .map(|k| {
                inv.iter()
                    .find(|(d, _)| *d == k)
                    .map(|(_, m)| m.clone())
                    .unwrap_or_else(|| Matrix::zeros(0, 0))
            })
            .collect();
        ChainMap::new(self.target.clone(), self.source.clone(), comps).map(Some)
    }

    /// Re-targets/re-sources along equal complexes with different support padding.
    pub fn with_ends(&self, source: ChainComplex, target: ChainComplex) -> Result<ChainMap> {
        ChainMap::from_fn(source, target, |k| self.at(k))
    }
}

/// Degree +1 map `h_k: S_k → T_{k+1}` witnessing a homotopy between two chain
/// maps `S → T`.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct ChainHomotopy {
    source: ChainComplex,
    target: ChainComplex,
    comps: Vec<Matrix>,
}

impl ChainHomotopy {
    /// `comps[i]` is `h_{source.lo + i}`.
    pub fn new(source: ChainComplex, target: ChainComplex, comps: Vec<Matrix>) -> Result<Self> {
        if comps.len() != source.dims().len() {
            return Err(Error::dim(format!(
                "{} homotopy components for {} source degrees",
                comps.len(),
                source.dims().len()
            )));
        }
        for (k, h) in source.degrees().zip(&comps) {
            if h.shape() != (target.dim(k + 1), source.dim(k)) {
                return Err(Error::dim(format!(
                    "homotopy component in degree {k} is {}x{}, expected {}x{}",
                    h.rows(),
                    h.cols(),
                    target.dim(k + 1),
                    source.dim(k)
                )));
            }
        }
        Ok(Self {
            source,
            target,
            comps,
        })
    }

    pub fn from_fn(
        source: ChainComplex,
        target: ChainComplex,
        mut f: impl FnMut(i64) -> Matrix,
    ) -> Result<Self> {
        let comps = source.degrees().map(&mut f).collect();
        Self::new(source, target, comps)
    }

    pub fn zero(source: &ChainComplex, target: &ChainComplex) -> Self {
        Self::from_fn(source.clone(), target.clone(), |k| {
            Matrix::zeros(target.dim(k + 1), source.dim(k))
        })
        .expect("zero shapes")
    }

    pub fn source(&self) -> &ChainComplex {
        &self.source
    }

    pub fn target(&self) -> &ChainComplex {
        &self.target
    }

    pub fn at(&self, k: i64) -> Matrix {
        if k >= self.source.lo() && k <= self.source.hi() {
            self.comps[(k - self.source.lo()) as usize].clone()
        } else {
            Matrix::zeros(self.target.dim(k + 1), self.source.dim(k))
        }
    }

    pub fn components(&self) -> impl Iterator<Item = (i64, &Matrix)> {
        self.source.degrees().zip(self.comps.iter())
    }

    /// The null-homotopic map `d·h + h·d`.
    pub fn boundary(&self) -> ChainMap {
        ChainMap::from_fn(self.source.clone(), self.target.clone(), |k| {
            &(&self.target.d(k + 1) * &self.at(k)) + &(&self.at(k - 1) * &self.source.d(k))
        })
        .expect("boundary shapes")
    }

    /// Copy with one entry of `h_k` replaced.
    pub fn with_entry(&self, k: i64, i: usize, j: usize, x: crate::Rational) -> Result<Self> {
        let mut comps = self.comps.clone();
        let idx = (k - self.source.lo()) as usize;
        let m = comps
            .get_mut(idx)
            .ok_or_else(|| Error::dim(format!("no homotopy component in degree {k}")))?;
        if i >= m.rows() || j >= m.cols() {
            return Err(Error::dim("entry out of range"));
        }
        m.set(i, j, x);
        Self::new(self.source.clone(), self.target.clone(), comps)
    }
}

/// Degrees where `g_k − f_k ≠ d_{k+1}·h_k + h_{k-1}·d_k`.
pub fn homotopy_defects(f: &ChainMap, g: &ChainMap, h: &ChainHomotopy) -> Result<Vec<i64>> {
    if f.source() != g.source() || f.target() != g.target() {
        return Err(Error::dim("homotopic maps must share source and target"));
    }
    if h.source() != f.source() || h.target() != f.target() {
        return Err(Error::dim("homotopy endpoints differ from the maps'"));
    }
    let dh = h.boundary();
    let lo = f.source().lo().min(f.target().lo()) - 1;
    let hi = f.source().hi().max(f.target().hi()) + 1;
    Ok((lo..=hi)
        .filter(|&k| &g.at(k) - &f.at(k) != dh.at(k))
        .collect())
}

/// True iff `g − f = d·h + h·d` exactly in every degree.
pub fn check_homotopy(f: &ChainMap, g: &ChainMap, h: &ChainHomotopy) -> Result<bool> {
    Ok(homotopy_defects(f, g, h)?.is_empty())
}
