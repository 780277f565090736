//! Reproducible random streams.
//!
//! One stream per (replication, purpose) pair, so adding a new random
//! decision to a model never perturbs existing draws, and scenario cells
//! sharing a (seed, replication) see common random numbers.

use rand::Rng;
use rand_chacha::rand_core::SeedableRng;
use rand_chacha::ChaCha12Rng;

/// Factory for independent, reproducible random streams under one 64-bit seed.
#[derive(Debug, Clone, Copy)]
pub struct StreamSet {
    seed: u64,
}

/// Number of purpose slots reserved per replication.
const PURPOSES_PER_REPLICATION: u64 = 64;

impl StreamSet {
    pub fn new(seed: u64) -> Self {
        Self { seed }
    }

    pub fn seed(&self) -> u64 {
        self.seed
    }

    /// The stream for one (replication, purpose) pair. Identical arguments
    /// always yield an identical variate sequence.
    pub fn stream(&self, replication: u64, purpose: u64) -> Stream {
        assert!(purpose < PURPOSES_PER_REPLICATION, "purpose id out of range");
        let mut rng = ChaCha12Rng::seed_from_u64(self.seed);
        rng.set_stream(replication * PURPOSES_PER_REPLICATION + purpose);
        Stream { rng }
    }
}

/// A single random stream; yields uniforms in [0, 1).
#[derive(Debug, Clone)]
pub struct Stream {
    rng: ChaCha12Rng,
}

impl Stream {
    pub fn uniform(&mut self) -> f64 {
        self.rng.random::<f64>()
    }
}
