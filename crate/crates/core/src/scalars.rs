//! Complex scalars, roots of unity and the global numerical tolerance.

use crate::error::{Error, Result};
use alloc::vec::Vec;
use core::f64::consts::PI;
use num_integer::Integer;

pub type C64 = num_complex::Complex<f64>;

pub const ZERO: C64 = C64::new(0.0, 0.0);
pub const ONE: C64 = C64::new(1.0, 0.0);

/// Numerical tolerance plus the seed for randomized choices.
///
/// Rank decisions keep singular values above `eps * sigma_max`; residual checks
/// accept `residual <= eps * max(1, scale)`.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct Tolerance {
    pub eps: f64,
    pub seed: u64,
}

impl Default for Tolerance {
    fn default() -> Self {
        Tolerance { eps: 1e-9, seed: 0 }
    }
}

impl Tolerance {
    pub fn new(eps: f64, seed: u64) -> Result<Self> {
        if !(eps.is_finite() && eps > 0.0) {
            return Err(Error::InvalidInput(alloc::format!("tolerance must be positive, got {eps}")));
        }
        Ok(Tolerance { eps, seed })
    }

    pub fn with_seed(self, seed: u64) -> Self {
        Tolerance { seed, ..self }
    }

    pub fn accepts(&self, residual: f64, scale: f64) -> bool {
        residual <= self.eps * scale.max(1.0)
    }
}

/// `exp(2 pi i k / m)`, stored with `gcd(k, m) = 1` so equal roots compare equal.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct RootOfUnity {
    order: u64,
    exponent: u64,
}

impl RootOfUnity {
    pub const ONE: RootOfUnity = RootOfUnity { order: 1, exponent: 0 };

    /// Reduces `zeta_m^k`; panics when `m == 0`.
    pub fn new(m: u64, k: i64) -> Self {
        assert!(m > 0, "root of unity of order zero");
        let k = k.rem_euclid(m as i64) as u64;
        let g = k.gcd(&m);
        if k == 0 {
            return Self::ONE;
        }
        RootOfUnity { order: m / g, exponent: k / g }
    }

    pub fn order(&self) -> u64 {
        self.order
    }

    pub fn exponent(&self) -> u64 {
        self.exponent
    }

    pub fn value(&self) -> C64 {
        // quarter turns are exact
        match (self.order, self.exponent) {
            (1, _) => ONE,
            (2, _) => C64::new(-1.0, 0.0),
            (4, 1) => C64::new(0.0, 1.0),
            (4, _) => C64::new(0.0, -1.0),
            _ => cis(2.0 * PI * self.exponent as f64 / self.order as f64),
        }
    }

    /// Exponent of this root written over the denominator `m`; `None` when the
    /// order does not divide `m`.
    pub fn exponent_over(&self, m: u64) -> Option<u64> {
        m.is_multiple_of(self.order).then(|| self.exponent * (m / self.order))
    }

    pub fn inv(self) -> Self {
        RootOfUnity::new(self.order, -(self.exponent as i64))
    }

    pub fn pow(self, e: i64) -> Self {
        let e = e.rem_euclid(self.order as i64) as u128;
        let k = (self.exponent as u128 * e) % self.order as u128;
        RootOfUnity::new(self.order, k as i64)
    }
}

impl core::ops::Mul for RootOfUnity {
    type Output = RootOfUnity;
    fn mul(self, rhs: RootOfUnity) -> RootOfUnity {
        let m = self.order.lcm(&rhs.order);
        let k = self.exponent * (m / self.order) + rhs.exponent * (m / rhs.order);
        RootOfUnity::new(m, (k % m) as i64)
    }
}

impl core::fmt::Display for RootOfUnity {
    fn fmt(&self, f: &mut core::fmt::Formatter<'_>) -> core::fmt::Result {
        write!(f, "zeta_{}^{}", self.order, self.exponent)
    }
}

pub fn cis(theta: f64) -> C64 {
    C64::new(libm::cos(theta), libm::sin(theta))
}

/// Identifies `z` with a root of unity of order at most `max_order`.
///
/// Fails with `NoSnap` when no candidate lies within `tol.eps`, and with
/// `Ambiguous` when two distinct candidates do.
pub fn snap_root_of_unity(z: C64, max_order: u64, tol: &Tolerance) -> Result<RootOfUnity> {
    if (z.norm() - 1.0).abs() > tol.eps || max_order == 0 {
        return Err(Error::NoSnap);
    }
    let turns = z.arg() / (2.0 * PI);
    let mut hits: Vec<RootOfUnity> = Vec::new();
    for m in 1..=max_order {
        let k = libm::round(turns * m as f64) as i64;
        let r = RootOfUnity::new(m, k);
        if (r.value() - z).norm() <= tol.eps && !hits.contains(&r) {
            hits.push(r);
        }
    }
    match hits.len() {
        0 => Err(Error::NoSnap),
        1 => Ok(hits[0]),
        _ => Err(Error::Ambiguous),
    }
}

/// Principal `m`-th root: `|z|^(1/m) exp(i arg(z) / m)` with `arg` in `(-pi, pi]`.
pub fn principal_root(z: C64, m: u64) -> C64 {
    let r = libm::pow(z.norm(), 1.0 / m as f64);
    cis(z.arg() / m as f64) * r
}

pub fn approx_eq(a: C64, b: C64, eps: f64) -> bool {
    (a - b).norm() <= eps
}
