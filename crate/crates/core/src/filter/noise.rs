use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;

/// Words reserved per particle within a frame's stream.
const WORDS_PER_PARTICLE: u128 = 1 << 16;

/// Deterministic random streams keyed by `(frame, particle index)`.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct NoiseSource {
    seed: u64,
}

#[derive(Debug, Clone, Copy)]
#[repr(u64)]
enum Purpose {
    Perturb = 0,
    Resample = 1,
}

impl NoiseSource {
    pub fn new(seed: u64) -> Self {
        NoiseSource { seed }
    }

    pub fn seed(&self) -> u64 {
        self.seed
    }

    fn stream(&self, purpose: Purpose, frame: u64, index: u64) -> ChaCha8Rng {
        let mut rng = ChaCha8Rng::seed_from_u64(self.seed);
        rng.set_stream(frame.wrapping_mul(2).wrapping_add(purpose as u64));
        rng.set_word_pos(index as u128 * WORDS_PER_PARTICLE);
        rng
    }

    /// Stream for the noise added to particle `index` at `frame`.
    pub fn particle(&self, frame: u64, index: u64) -> ChaCha8Rng {
        self.stream(Purpose::Perturb, frame, index)
    }

    /// Stream for a frame's resampling draws.
    pub fn resampling(&self, frame: u64) -> ChaCha8Rng {
        self.stream(Purpose::Resample, frame, 0)
    }
}
