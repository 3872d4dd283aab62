use std::sync::atomic::{AtomicU32, Ordering};

use crate::rng::Rng;

/// Resource caps. Every potentially unbounded computation checks against
/// these and fails fast with a resource error rather than truncating
/// silently.
#[derive(Debug, Clone)]
pub struct Caps {
    /// Maximum total degree of any polynomial appearing in a basis
    /// computation.
    pub max_total_degree: u32,
    /// Maximum truncation exponent for local colengths.
    pub k_max: u32,
    /// Maximum number of basis elements in one Buchberger run.
    pub max_basis: usize,
    /// Maximum number of critical pairs processed in one run.
    pub max_pairs: usize,
    /// Maximum quotient iterations inside a saturation.
    pub quotient_chain: usize,
    /// Retry budget for randomized genericity choices.
    pub retries: usize,
}

impl Default for Caps {
    fn default() -> Self {
        Caps {
            max_total_degree: 64,
            k_max: 40,
            max_basis: 4000,
            max_pairs: 400_000,
            quotient_chain: 64,
            retries: 6,
        }
    }
}

/// Shared computation context: caps, the job seed, and run statistics.
/// All randomness is drawn from streams derived from (seed, purpose), so
/// results are replayable from the seed recorded in every report.
#[derive(Debug)]
pub struct Ctx {
    pub caps: Caps,
    pub seed: u64,
    max_stabilized_at: AtomicU32,
}

impl Ctx {
    pub fn new(seed: u64) -> Ctx {
        Ctx {
            caps: Caps::default(),
            seed,
            max_stabilized_at: AtomicU32::new(0),
        }
    }

    pub fn with_caps(seed: u64, caps: Caps) -> Ctx {
        Ctx {
            caps,
            seed,
            max_stabilized_at: AtomicU32::new(0),
        }
    }

    pub fn rng(&self, purpose: &str) -> Rng {
        Rng::derived(self.seed, purpose)
    }

    pub fn note_stabilization(&self, k: u32) {
        self.max_stabilized_at.fetch_max(k, Ordering::Relaxed);
    }

    /// Largest truncation exponent at which any local colength stabilized
    /// during this run; surfaced in reports.
    pub fn max_stabilized_at(&self) -> u32 {
        self.max_stabilized_at.load(Ordering::Relaxed)
    }
}
