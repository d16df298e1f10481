//! Seeded randomness.
//!
//! All sampling goes through ChaCha8 seeded from a `u64`; independent
//! substreams of one seed are selected with ChaCha's stream counter, so
//! parallel batches draw from fixed streams regardless of scheduling.

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use crate::geometry::Point;

/// Algorithm identifier recorded in sequence provenance.
pub const RNG_ID: &str = "chacha8";

/// Generator for stream `stream` of `seed`.
pub fn seeded_rng(seed: u64, stream: u64) -> ChaCha8Rng {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    rng.set_stream(stream);
    rng
}

/// Infinite reproducible stream of uniform points in `[0, 1)^d`.
///
/// Point `n` consumes coordinates `n*d .. (n+1)*d` of the underlying stream.
pub struct UniformStream {
    rng: ChaCha8Rng,
    dim: usize,
}

pub fn seeded_uniform_stream(seed: u64, dim: usize) -> UniformStream {
    assert!(dim >= 1, "dimension must be at least 1");
    UniformStream {
        rng: seeded_rng(seed, 0),
        dim,
    }
}

impl UniformStream {
    /// Appends the next point's coordinates to `out`.
    pub fn fill_next(&mut self, out: &mut Vec<f64>) {
        for _ in 0..self.dim {
            out.push(self.rng.random::<f64>());
        }
    }
}

impl Iterator for UniformStream {
    type Item = Point;

    fn next(&mut self) -> Option<Point> {
        let mut coords = Vec::with_capacity(self.dim);
        self.fill_next(&mut coords);
        Some(Point::new(coords).expect("uniform samples lie in [0, 1)"))
    }
}
