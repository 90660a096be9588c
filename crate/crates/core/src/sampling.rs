//! Seeded random channels for property checks and the `verify` suites.
//!
//! Powers are log-uniform on `[0.01, 100]`, `a` is uniform on the disk of
//! radius 5 and `|b|` is uniform on `(1, 5]` (strong) or `(0, 5]` (any).

use num_complex::Complex64;
use rand::Rng;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use std::f64::consts::PI;

use crate::model::ChannelParams;

pub const POWER_RANGE: (f64, f64) = (0.01, 100.0);
pub const A_RADIUS: f64 = 5.0;
pub const B_MAX: f64 = 5.0;

pub struct ChannelSampler {
    rng: ChaCha8Rng,
}

impl ChannelSampler {
    pub fn new(seed: u64) -> Self {
        Self { rng: ChaCha8Rng::seed_from_u64(seed) }
    }

    pub fn power(&mut self) -> f64 {
        let (lo, hi) = (POWER_RANGE.0.ln(), POWER_RANGE.1.ln());
        (lo + (hi - lo) * self.rng.gen::<f64>()).exp()
    }

    pub fn cross_gain(&mut self) -> Complex64 {
        let r = A_RADIUS * self.rng.gen::<f64>().sqrt();
        Complex64::from_polar(r, 2.0 * PI * self.rng.gen::<f64>())
    }

    /// `|b|` uniform on `(lo, B_MAX]`.
    fn b_above(&mut self, lo: f64) -> f64 {
        B_MAX - (B_MAX - lo) * self.rng.gen::<f64>()
    }

    /// A channel with `|b| > 1`.
    pub fn strong_channel(&mut self) -> ChannelParams {
        let a = self.cross_gain();
        let b = self.b_above(1.0);
        ChannelParams::new(a, b, self.power(), self.power()).expect("sampled parameters are valid")
    }

    /// A channel with `|b|` anywhere in `(0, 5]`.
    pub fn any_channel(&mut self) -> ChannelParams {
        let a = self.cross_gain();
        let b = self.b_above(0.0);
        ChannelParams::new(a, b, self.power(), self.power()).expect("sampled parameters are valid")
    }

    pub fn unit(&mut self) -> f64 {
        self.rng.gen::<f64>()
    }

    pub fn strong_channels(&mut self, n: usize) -> Vec<ChannelParams> {
        (0..n).map(|_| self.strong_channel()).collect()
    }

    pub fn any_channels(&mut self, n: usize) -> Vec<ChannelParams> {
        (0..n).map(|_| self.any_channel()).collect()
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn reproducible_and_in_range() {
        let a = ChannelSampler::new(7).strong_channels(200);
        let b = ChannelSampler::new(7).strong_channels(200);
        assert_eq!(a, b);
        for c in &a {
            assert!(c.b_mag() > 1.0 && c.b_mag() <= B_MAX);
            assert!(c.a().norm() <= A_RADIUS);
            for p in [c.p1(), c.p2()] {
                assert!((POWER_RANGE.0..=POWER_RANGE.1).contains(&p));
            }
        }
        let any = ChannelSampler::new(7).any_channels(200);
        assert!(any.iter().all(|c| c.b_mag() > 0.0 && c.b_mag() <= B_MAX));
        assert!(any.iter().any(|c| c.b_mag() < 1.0));
    }
}
