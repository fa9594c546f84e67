//! Seeded batch evaluation.
//!
//! A sweep runs one check per seed and collects the seeds that failed. With
//! the `parallel` feature (on by default) [`run`] spreads seeds over the rayon
//! pool; [`run_sequential`] is always available and gives identical results.

use std::ops::Range;

/// Result of a sweep. `failures` is sorted by seed.
#[derive(Clone, Debug, Default, PartialEq, Eq)]
pub struct Sweep {
    pub cases: usize,
    pub failures: Vec<(u64, String)>,
}

impl Sweep {
    pub fn passed(&self) -> bool {
        self.failures.is_empty()
    }

    /// First failures, one per line, at most `limit` of them.
    pub fn summary(&self, limit: usize) -> String {
        let mut out = format!("{}/{} cases passed", self.cases - self.failures.len(), self.cases);
        for (seed, msg) in self.failures.iter().take(limit) {
            out.push_str(&format!("\n  seed {seed}: {msg}"));
        }
        out
    }
}

pub fn run_sequential<F>(seeds: Range<u64>, check: F) -> Sweep
where
    F: Fn(u64) -> Result<(), String>,
{
    let cases = seeds.end.saturating_sub(seeds.start) as usize;
    let failures = seeds.filter_map(|s| check(s).err().map(|e| (s, e))).collect();
    Sweep { cases, failures }
}

#[cfg(feature = "parallel")]
pub fn run<F>(seeds: Range<u64>, check: F) -> Sweep
where
    F: Fn(u64) -> Result<(), String> + Sync,
{
    use rayon::prelude::*;

    let cases = seeds.end.saturating_sub(seeds.start) as usize;
    // collect keeps the input order, so failures stay sorted
    let failures = seeds
        .into_par_iter()
        .filter_map(|s| check(s).err().map(|e| (s, e)))
        .collect();
    Sweep { cases, failures }
}

#[cfg(not(feature = "parallel"))]
pub fn run<F>(seeds: Range<u64>, check: F) -> Sweep
where
    F: Fn(u64) -> Result<(), String> + Sync,
{
    run_sequential(seeds, check)
}

/// Turns a panic inside a check into a failure message instead of aborting
/// the whole sweep.
pub fn catching<F>(check: F) -> impl Fn(u64) -> Result<(), String> + Sync
where
    F: Fn(u64) -> Result<(), String> + Sync + std::panic::RefUnwindSafe,
{
    move |seed| match std::panic::catch_unwind(|| check(seed)) {
        Ok(r) => r,
        Err(p) => Err(p
            .downcast_ref::<String>()
            .cloned()
            .or_else(|| p.downcast_ref::<&str>().map(|s| s.to_string()))
            .unwrap_or_else(|| "panicked".into())),
    }
}
