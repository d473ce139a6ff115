//! Counter-based deterministic random generator.
//!
//! Each (master seed, stream) pair yields an independent sequence through the
//! splitmix64 finalizer applied to a derived key plus a Weyl counter, so
//! realizations can be generated in any order or in parallel and still match
//! run-for-run.

use num_complex::Complex64;

const GOLDEN: u64 = 0x9e37_79b9_7f4a_7c15;

/// splitmix64 finalizer (public-domain constants).
#[inline]
fn mix(mut z: u64) -> u64 {
    z ^= z >> 30;
    z = z.wrapping_mul(0xbf58_476d_1ce4_e5b9);
    z ^= z >> 27;
    z = z.wrapping_mul(0x94d0_49bb_1331_11eb);
    z ^= z >> 31;
    z
}

#[derive(Debug, Clone)]
pub struct CounterRng {
    key: u64,
    counter: u64,
}

impl CounterRng {
    pub fn new(master_seed: u64, stream: u64) -> Self {
        let key = mix(mix(master_seed ^ GOLDEN).wrapping_add(stream.wrapping_mul(GOLDEN)));
        CounterRng { key, counter: 0 }
    }

    pub fn next_u64(&mut self) -> u64 {
        self.counter = self.counter.wrapping_add(1);
        mix(self.key.wrapping_add(self.counter.wrapping_mul(GOLDEN)))
    }

    /// Uniform draw strictly inside (0, 1).
    pub fn next_f64(&mut self) -> f64 {
        ((self.next_u64() >> 11) as f64 + 0.5) * (1.0 / (1u64 << 53) as f64)
    }

    /// Circularly symmetric complex Gaussian with unit variance via
    /// Box-Muller: radius from an exponential of mean 1, uniform phase.
    pub fn next_complex_normal(&mut self) -> Complex64 {
        let u1 = self.next_f64();
        let u2 = self.next_f64();
        let r = (-u1.ln()).sqrt();
        let theta = 2.0 * std::f64::consts::PI * u2;
        Complex64::new(r * theta.cos(), r * theta.sin())
    }
}
