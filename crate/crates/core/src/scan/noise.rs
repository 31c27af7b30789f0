//! Seeded counting noise.
//!
//! The generator is ChaCha8 keyed by `seed_from_u64(seed)` with the
//! scan-point index as the stream number, so every point owns an
//! independent, order-free substream. Poisson variates come from
//! `rand_distr` (inversion below lambda = 12, rejection above).

use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use rand_distr::{Distribution, Poisson};

/// One Poisson draw with mean `lambda` from the `(seed, stream)`
/// substream. Nonpositive means yield zero counts.
pub fn poisson_counts(lambda: f64, seed: u64, stream: u64) -> u64 {
    if !(lambda > 0.0) {
        return 0;
    }
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    rng.set_stream(stream);
    let sampled: f64 = Poisson::new(lambda)
        .expect("positive finite lambda")
        .sample(&mut rng);
    sampled.round() as u64
}
