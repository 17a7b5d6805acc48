//! Deterministic splittable random streams.
//!
//! Draw i of stream s under seed k is a fixed 64-bit hash of (k, s, i), so
//! every stream is addressable independently and concurrent consumers can
//! never share or race state. Statistical quality is that of the splitmix64
//! finalizer, ample for sampling noise and perturbation placement.

use crate::fmath::{cos, ln, sin, sqrt};

const GOLDEN: u64 = 0x9E37_79B9_7F4A_7C15;

fn mix(mut z: u64) -> u64 {
    z = (z ^ (z >> 30)).wrapping_mul(0xBF58_476D_1CE4_E5B9);
    z = (z ^ (z >> 27)).wrapping_mul(0x94D0_49BB_1331_11EB);
    z ^ (z >> 31)
}

/// One independent random stream.
#[derive(Clone, Debug)]
pub struct Stream {
    key: u64,
    counter: u64,
    spare_normal: Option<f64>,
}

impl Stream {
    /// Stream `stream` of the family identified by `seed`. Distinct
    /// (seed, stream) pairs give unrelated sequences.
    pub fn new(seed: u64, stream: u64) -> Self {
        Stream {
            key: mix(seed ^ mix(stream.wrapping_add(GOLDEN))),
            counter: 0,
            spare_normal: None,
        }
    }

    pub fn next_u64(&mut self) -> u64 {
        self.counter += 1;
        mix(self.key.wrapping_add(self.counter.wrapping_mul(GOLDEN)))
    }

    /// Uniform on [0, 1), 53-bit resolution.
    pub fn uniform(&mut self) -> f64 {
        (self.next_u64() >> 11) as f64 * (1.0 / (1u64 << 53) as f64)
    }

    /// Uniform on [lo, hi).
    pub fn uniform_in(&mut self, lo: f64, hi: f64) -> f64 {
        lo + (hi - lo) * self.uniform()
    }

    /// Standard normal via Box-Muller; pairs are drawn at once and the
    /// second member is served on the next call.
    pub fn normal(&mut self) -> f64 {
        if let Some(z) = self.spare_normal.take() {
            return z;
        }
        // (0, 1] keeps the logarithm finite.
        let u1 = ((self.next_u64() >> 11) + 1) as f64 * (1.0 / (1u64 << 53) as f64);
        let u2 = self.uniform();
        let radius = sqrt(-2.0 * ln(u1));
        let angle = core::f64::consts::TAU * u2;
        self.spare_normal = Some(radius * sin(angle));
        radius * cos(angle)
    }
}
