//! Exact cost-per-core ratios.

use std::cmp::Ordering;
use std::fmt;

use crate::graph::Cost;

/// `cost / delta`, compared exactly. A zero `delta` is infinite.
#[derive(Debug, Clone, Copy)]
pub struct Density {
    pub cost: Cost,
    pub delta: u64,
}

impl Density {
    pub fn new(cost: Cost, delta: u64) -> Self {
        Self { cost, delta }
    }

    pub fn is_infinite(&self) -> bool {
        self.delta == 0
    }

    pub fn to_f64(&self) -> f64 {
        if self.delta == 0 {
            f64::INFINITY
        } else {
            self.cost as f64 / self.delta as f64
        }
    }
}

impl Ord for Density {
    fn cmp(&self, other: &Self) -> Ordering {
        match (self.delta, other.delta) {
            (0, 0) => Ordering::Equal,
            (0, _) => Ordering::Greater,
            (_, 0) => Ordering::Less,
            (a, b) => (self.cost as i128 * b as i128).cmp(&(other.cost as i128 * a as i128)),
        }
    }
}

impl PartialOrd for Density {
    fn partial_cmp(&self, other: &Self) -> Option<Ordering> {
        Some(self.cmp(other))
    }
}

impl PartialEq for Density {
    fn eq(&self, other: &Self) -> bool {
        self.cmp(other) == Ordering::Equal
    }
}

impl Eq for Density {}

impl fmt::Display for Density {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.delta == 0 {
            write!(f, "inf")
        } else {
            write!(f, "{}/{}", self.cost, self.delta)
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn exact_comparison() {
        assert_eq!(Density::new(2, 1), Density::new(4, 2));
        assert!(Density::new(3, 2) < Density::new(2, 1));
        assert!(Density::new(1_000_000, 1) < Density::new(0, 0));
        assert_eq!(Density::new(5, 0), Density::new(0, 0));
        assert_eq!(Density::new(3, 2).to_string(), "3/2");
    }
}
