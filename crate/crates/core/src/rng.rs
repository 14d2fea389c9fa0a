//! Seeded, portable random streams.
//!
//! The generator is SplitMix64 (Steele, Lea & Flood) and normal deviates come
//! from the Box–Muller transform, so the exact stream can be reproduced from
//! the description below in any language:
//!
//! * `next_u64`: `state += 0x9E3779B97F4A7C15`, then the standard SplitMix64
//!   finalizer (`z ^= z >> 30; z *= 0xBF58476D1CE4E5B9; z ^= z >> 27;
//!   z *= 0x94D049BB133111EB; z ^= z >> 31`).
//! * `next_f64`: `((next_u64 >> 11) + 1) * 2^-53`, uniform on `(0, 1]`.
//! * `next_gaussian`: draws `u1`, `u2` in that order and returns
//!   `sqrt(-2 ln u1) * cos(2π u2)`, caching `sqrt(-2 ln u1) * sin(2π u2)`
//!   for the next call.

#[derive(Clone, Debug)]
pub struct SplitMix64 {
    state: u64,
    spare: Option<f64>,
}

impl SplitMix64 {
    pub fn new(seed: u64) -> Self {
        Self {
            state: seed,
            spare: None,
        }
    }

    pub fn next_u64(&mut self) -> u64 {
        self.state = self.state.wrapping_add(0x9E37_79B9_7F4A_7C15);
        let mut z = self.state;
        z = (z ^ (z >> 30)).wrapping_mul(0xBF58_476D_1CE4_E5B9);
        z = (z ^ (z >> 27)).wrapping_mul(0x94D0_49BB_1331_11EB);
        z ^ (z >> 31)
    }

    pub fn next_f64(&mut self) -> f64 {
        ((self.next_u64() >> 11) + 1) as f64 * (1.0 / (1u64 << 53) as f64)
    }

    /// Standard normal deviate.
    pub fn next_gaussian(&mut self) -> f64 {
        if let Some(z) = self.spare.take() {
            return z;
        }
        let u1 = self.next_f64();
        let u2 = self.next_f64();
        let radius = (-2.0 * u1.ln()).sqrt();
        let angle = std::f64::consts::TAU * u2;
        self.spare = Some(radius * angle.sin());
        radius * angle.cos()
    }
}
