use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

/// Closed interval `[lo, hi]` sampled on uniform grids that include both ends.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct Interval {
    pub lo: f64,
    pub hi: f64,
}

impl Interval {
    pub fn new(lo: f64, hi: f64) -> Result<Self> {
        if !(lo.is_finite() && hi.is_finite()) || lo > hi {
            return Err(Error::domain(format!("invalid interval [{lo}, {hi}]")));
        }
        Ok(Self { lo, hi })
    }

    pub fn linspace(&self, n: usize) -> Result<Vec<f64>> {
        linspace(self.lo, self.hi, n)
    }
}

pub fn linspace(lo: f64, hi: f64, n: usize) -> Result<Vec<f64>> {
    if n < 2 {
        return Err(Error::domain(format!("grid needs at least 2 points, got {n}")));
    }
    let last = (n - 1) as f64;
    Ok((0..n).map(|i| if i == n - 1 { hi } else { lo + (hi - lo) * (i as f64 / last) }).collect())
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn endpoints_are_exact() {
        let g = linspace(-5.0, 5.0, 401).unwrap();
        assert_eq!(g[0], -5.0);
        assert_eq!(g[400], 5.0);
        assert_eq!(g[200], 0.0);
        assert!(linspace(0.0, 1.0, 1).is_err());
        assert!(Interval::new(1.0, 0.0).is_err());
    }
}
