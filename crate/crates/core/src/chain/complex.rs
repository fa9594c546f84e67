use std::collections::BTreeMap;

use crate::exactlin::{rank, Matrix};
use crate::{Error, Report, Result};

/// Bounded chain complex of finite-dimensional ℚ-vector spaces.
///
/// Degrees run over `lo..=hi`; everything outside is zero. The differential
/// `d_k: C_k → C_{k-1}` is stored for `k in lo+1..=hi`. Shapes are checked on
/// construction; `d² = 0` is not (see [`ChainComplex::validate`]).
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct ChainComplex {
    lo: i64,
    dims: Vec<usize>,
    diffs: Vec<Matrix>,
}

impl ChainComplex {
    /// `diffs[i]` is `d_{lo+1+i}`.
    pub fn new(lo: i64, dims: Vec<usize>, diffs: Vec<Matrix>) -> Result<Self> {
        if dims.is_empty() {
            return Err(Error::dim("a complex needs at least one degree"));
        }
        if diffs.len() != dims.len() - 1 {
            return Err(Error::dim(format!(
                "{} degrees need {} differentials, got {}",
                dims.len(),
                dims.len() - 1,
                diffs.len()
            )));
        }
        for (i, d) in diffs.iter().enumerate() {
            let k = lo + 1 + i as i64;
            if d.shape() != (dims[i], dims[i + 1]) {
                return Err(Error::dim(format!(
                    "d_{k} is {}x{}, expected {}x{}",
                    d.rows(),
                    d.cols(),
                    dims[i],
                    dims[i + 1]
                )));
            }
        }
        Ok(Self { lo, dims, diffs })
    }

    /// Builds from a map degree → differential, filling gaps with zero maps.
    pub fn from_map(lo: i64, dims: Vec<usize>, diffs: &BTreeMap<i64, Matrix>) -> Result<Self> {
        let hi = lo + dims.len() as i64 - 1;
        for &k in diffs.keys() {
            if k <= lo || k > hi {
                return Err(Error::dim(format!(
                    "differential d_{k} outside degrees {lo}..={hi}"
                )));
            }
        }
        let ds = (lo + 1..=hi)
            .map(|k| {
                let i = (k - lo) as usize;
                diffs
                    .get(&k)
                    .cloned()
                    .unwrap_or_else(|| Matrix::zeros(dims[i - 1], dims[i]))
            })
            .collect();
        Self::new(lo, dims, ds)
    }

    /// The zero complex.
    pub fn zero() -> Self {
        Self {
            lo: 0,
            dims: vec![0],
            diffs: vec![],
        }
    }

    /// `V` concentrated in degree `k`.
    pub fn concentrated(k: i64, dim: usize) -> Self {
        Self {
            lo: k,
            dims: vec![dim],
            diffs: vec![],
        }
    }

    /// Two-term complex `source →d target` with `source` in degree `k`.
    pub fn two_term(k: i64, d: Matrix) -> Self {
        let dims = vec![d.rows(), d.cols()];
        Self {
            lo: k - 1,
            dims,
            diffs: vec![d],
        }
    }

    /// All-zero complex with the given dimensions starting at `lo`.
    pub fn with_zero_differentials(lo: i64, dims: Vec<usize>) -> Self {
        let diffs = dims.windows(2).map(|w| Matrix::zeros(w[0], w[1])).collect();
        Self { lo, dims, diffs }
    }

    pub fn lo(&self) -> i64 {
        self.lo
    }

    pub fn hi(&self) -> i64 {
        self.lo + self.dims.len() as i64 - 1
    }

    pub fn degrees(&self) -> std::ops::RangeInclusive<i64> {
        self.lo..=self.hi()
    }

    pub fn dims(&self) -> &[usize] {
        &self.dims
    }

    pub fn dim(&self, k: i64) -> usize {
        if k < self.lo || k > self.hi() {
            0
        } else {
            self.dims[(k - self.lo) as usize]
        }
    }

    pub fn total_dim(&self) -> usize {
        self.dims.iter().sum()
    }

    /// `d_k: C_k → C_{k-1}`, the zero map outside the stored range.
    pub fn d(&self, k: i64) -> Matrix {
        if k > self.lo && k <= self.hi() {
            self.diffs[(k - self.lo - 1) as usize].clone()
        } else {
            Matrix::zeros(self.dim(k - 1), self.dim(k))
        }
    }

    pub fn d_ref(&self, k: i64) -> Option<&Matrix> {
        (k > self.lo && k <= self.hi()).then(|| &self.diffs[(k - self.lo - 1) as usize])
    }

    /// Degrees `k` with `d_k` stored, paired with the matrix.
    pub fn differentials(&self) -> impl Iterator<Item = (i64, &Matrix)> {
        self.diffs
            .iter()
            .enumerate()
            .map(move |(i, d)| (self.lo + 1 + i as i64, d))
    }

    /// True when every space is zero.
    pub fn is_zero(&self) -> bool {
        self.dims.iter().all(|&d| d == 0)
    }

    /// Lists every degree where `d_{k-1}·d_k ≠ 0`. Empty ⇔ valid.
    pub fn validate(&self) -> Report {
        let mut report = Report::new();
        for k in self.lo + 2..=self.hi() {
            let dd = &self.d(k - 1) * &self.d(k);
            if !dd.is_zero() {
                report.push_with(
                    "d_squared",
                    format!("degree {k}"),
                    format!("d_{} ∘ d_{k} is nonzero", k - 1),
                    dd,
                );
            }
        }
        report
    }

    pub fn ensure_valid(&self) -> Result<()> {
        self.validate().into_result()
    }

    /// `χ = Σ (-1)^k dim C_k`.
    pub fn euler_characteristic(&self) -> i64 {
        self.degrees()
            .map(|k| sign(k) * self.dim(k) as i64)
            .sum()
    }

    /// `dim H_k = dim C_k − rank d_k − rank d_{k+1}` for every stored degree.
    pub fn homology_dims(&self) -> Result<BTreeMap<i64, usize>> {
        self.ensure_valid()?;
        let ranks: Vec<usize> = self.diffs.iter().map(rank).collect();
        let rank_at = |k: i64| -> usize {
            if k > self.lo && k <= self.hi() {
                ranks[(k - self.lo - 1) as usize]
            } else {
                0
            }
        };
        Ok(self
            .degrees()
            .map(|k| (k, self.dim(k) - rank_at(k) - rank_at(k + 1)))
            .collect())
    }

    /// True when all homology vanishes.
    pub fn is_acyclic(&self) -> Result<bool> {
        Ok(self.homology_dims()?.values().all(|&h| h == 0))
    }

    /// Same complex re-supported on `lo..=hi` (which must contain every nonzero
    /// degree), padding with zero spaces.
    pub fn with_support(&self, lo: i64, hi: i64) -> Result<Self> {
        for k in self.degrees() {
            if self.dim(k) > 0 && (k < lo || k > hi) {
                return Err(Error::dim(format!(
                    "degree {k} is nonzero and outside {lo}..={hi}"
                )));
            }
        }
        if hi < lo {
            return Err(Error::dim("empty support"));
        }
        let dims = (lo..=hi).map(|k| self.dim(k)).collect();
        let diffs = (lo + 1..=hi).map(|k| self.d(k)).collect();
        Self::new(lo, dims, diffs)
    }
}

/// `(-1)^k`.
pub fn sign(k: i64) -> i64 {
    if k.rem_euclid(2) == 0 {
        1
    } else {
        -1
    }
}
