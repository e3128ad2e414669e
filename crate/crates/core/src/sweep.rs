//! Exhaustive enumeration of short strings, filtered by a predicate.
//!
//! Strings of each length are numbered in mixed radix over the alphabet, so
//! the parallel and sequential strategies yield the same ordered output.

use crate::error::{Error, Result};
use crate::grammar::Term;

/// Default cap on the number of strings a sweep may visit.
pub const DEFAULT_CAP: u64 = 1_000_000;

/// Environment variable overriding [`DEFAULT_CAP`] in [`Sweep::from_env`].
pub const CAP_ENV: &str = "OCA_APPROX_CAP";

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Exec {
    Sequential,
    /// Falls back to sequential when built without the `parallel` feature.
    Parallel,
}

impl Default for Exec {
    fn default() -> Exec {
        if cfg!(feature = "parallel") {
            Exec::Parallel
        } else {
            Exec::Sequential
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct Sweep {
    pub cap: u64,
    pub exec: Exec,
}

impl Default for Sweep {
    fn default() -> Sweep {
        Sweep {
            cap: DEFAULT_CAP,
            exec: Exec::default(),
        }
    }
}

impl Sweep {
    pub fn sequential() -> Sweep {
        Sweep {
            exec: Exec::Sequential,
            ..Sweep::default()
        }
    }

    pub fn with_cap(self, cap: u64) -> Sweep {
        Sweep { cap, ..self }
    }

    /// Default settings with the cap read from `OCA_APPROX_CAP` if it parses.
    pub fn from_env() -> Sweep {
        let cap = std::env::var(CAP_ENV)
            .ok()
            .and_then(|v| v.trim().parse().ok())
            .unwrap_or(DEFAULT_CAP);
        Sweep::default().with_cap(cap)
    }
}

/// Number of strings of length `0..=maxlen` over `k` symbols, saturating.
pub fn count_strings(k: usize, maxlen: usize) -> u128 {
    let mut total: u128 = 0;
    let mut layer: u128 = 1;
    for _ in 0..=maxlen {
        total = total.saturating_add(layer);
        layer = layer.saturating_mul(k as u128);
    }
    total
}

/// The `index`-th string of length `len`, most significant symbol first.
pub fn word_at(alphabet: &[Term], len: usize, mut index: u64) -> Vec<Term> {
    let k = alphabet.len() as u64;
    let mut w = vec![Term(0); len];
    for slot in w.iter_mut().rev() {
        *slot = alphabet[(index % k) as usize];
        index /= k;
    }
    w
}

/// Strings of length at most `maxlen` satisfying `keep`, shortest first and
/// in alphabet order within a length.
pub fn filter_words<F>(alphabet: &[Term], maxlen: usize, sweep: &Sweep, keep: F) -> Result<Vec<Vec<Term>>>
where
    F: Fn(&[Term]) -> bool + Sync,
{
    let requested = count_strings(alphabet.len(), maxlen);
    if requested > sweep.cap as u128 {
        return Err(Error::CapExceeded {
            requested,
            cap: sweep.cap,
        });
    }
    let mut out = Vec::new();
    let mut layer: u64 = 1;
    for len in 0..=maxlen {
        if layer == 0 {
            break;
        }
        let pick = |i: u64| {
            let w = word_at(alphabet, len, i);
            keep(&w).then_some(w)
        };
        match sweep.exec {
            #[cfg(feature = "parallel")]
            Exec::Parallel => {
                use rayon::prelude::*;
                let found: Vec<Vec<Term>> = (0..layer).into_par_iter().filter_map(pick).collect();
                out.extend(found);
            }
            _ => out.extend((0..layer).filter_map(pick)),
        }
        layer *= alphabet.len() as u64;
    }
    Ok(out)
}
