//! Möbius disk automorphisms and the nonlinear phase they induce on the circle.
//!
//! For a point `a` of the open unit disk, `τ_a(z) = (z - a) / (1 - conj(a) z)`
//! maps the unit circle onto itself. Writing `τ_a(e^{it}) = e^{iθ_a(t)}` defines
//! a strictly increasing phase `θ_a` with `θ_a(t + 2π) = θ_a(t) + 2π` and
//! derivative equal to the Poisson kernel `p_a`.
//!
//! With `a = |a| e^{i t_a}` and `φ = t - t_a`,
//!
//! ```text
//! θ_a(t) = t + 2 atan( |a| sin φ / (1 - |a| cos φ) )
//! p_a(t) = (1 - |a|²) / (1 - 2|a| cos φ + |a|²)
//! ```
//!
//! The arctangent argument has a denominator bounded below by `1 - |a|`, so the
//! principal branch gives the continuous lift directly.

use std::f64::consts::{PI, TAU};

use num_complex::Complex64;

use crate::error::{Error, Result};

/// Largest admissible `|a|`.
pub const MAX_MODULUS: f64 = 1.0 - 1e-12;

/// A point `a` of the open unit disk parametrising the phase `θ_a`.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct MoebiusParameter {
    re: f64,
    im: f64,
    modulus: f64,
    argument: f64,
}

impl MoebiusParameter {
    pub fn new(re: f64, im: f64) -> Result<Self> {
        let modulus = re.hypot(im);
        if !modulus.is_finite() || modulus >= MAX_MODULUS {
            return Err(Error::ParameterOutsideDisk { modulus });
        }
        let mut argument = im.atan2(re);
        if argument < 0.0 {
            argument += TAU;
        }
        if argument >= TAU {
            argument = 0.0;
        }
        Ok(Self {
            re,
            im,
            modulus,
            argument,
        })
    }

    /// `a = r e^{it}`.
    pub fn from_polar(r: f64, t: f64) -> Result<Self> {
        if r < 0.0 {
            return Err(Error::InvalidArgument(format!("negative radius {r}")));
        }
        Self::new(r * t.cos(), r * t.sin())
    }

    pub fn zero() -> Self {
        Self {
            re: 0.0,
            im: 0.0,
            modulus: 0.0,
            argument: 0.0,
        }
    }

    pub fn re(&self) -> f64 {
        self.re
    }

    pub fn im(&self) -> f64 {
        self.im
    }

    /// `|a|`.
    pub fn modulus(&self) -> f64 {
        self.modulus
    }

    /// `t_a ∈ [0, 2π)`.
    pub fn argument(&self) -> f64 {
        self.argument
    }

    pub fn as_complex(&self) -> Complex64 {
        Complex64::new(self.re, self.im)
    }

    pub fn is_zero(&self) -> bool {
        self.modulus == 0.0
    }

    /// The parameter `-a`, whose automorphism inverts this one.
    pub fn negated(&self) -> Self {
        Self::new(-self.re, -self.im).expect("negation preserves the modulus")
    }

    /// `τ_a(z) = (z - a) / (1 - conj(a) z)`.
    pub fn moebius(&self, z: Complex64) -> Complex64 {
        let a = self.as_complex();
        (z - a) / (Complex64::new(1.0, 0.0) - a.conj() * z)
    }

    /// The nonlinear phase `θ_a(t)`.
    pub fn theta(&self, t: f64) -> f64 {
        if self.is_zero() {
            return t;
        }
        let (rs, rc) = self.rotated(t);
        t + 2.0 * (rs / (1.0 - rc)).atan()
    }

    /// Inverse phase: `θ_a(theta_inverse(s)) = s`.
    ///
    /// Uses `θ_a^{-1} = θ_{-a}` and snaps the result onto the lift that
    /// satisfies the identity exactly rather than modulo `2π`.
    pub fn theta_inverse(&self, s: f64) -> f64 {
        if self.is_zero() {
            return s;
        }
        let t = self.negated().theta(s);
        let wraps = ((self.theta(t) - s) / TAU).round();
        if wraps == 0.0 {
            t
        } else {
            t - wraps * TAU
        }
    }

    /// Poisson weight `p_a(t) = θ_a'(t)`.
    pub fn poisson_weight(&self, t: f64) -> f64 {
        if self.is_zero() {
            return 1.0;
        }
        let r2 = self.modulus * self.modulus;
        (1.0 - r2) / (1.0 - 2.0 * self.rotated(t).1 + r2)
    }

    /// `(|a| sin(t - t_a), |a| cos(t - t_a))` from the Cartesian parts.
    fn rotated(&self, t: f64) -> (f64, f64) {
        let (s, c) = t.sin_cos();
        (self.re * s - self.im * c, self.re * c + self.im * s)
    }

    /// `((1 - |a|)/(1 + |a|), (1 + |a|)/(1 - |a|))`, the range of `p_a`.
    pub fn weight_bounds(&self) -> (f64, f64) {
        let r = self.modulus;
        ((1.0 - r) / (1.0 + r), (1.0 + r) / (1.0 - r))
    }
}

impl Default for MoebiusParameter {
    fn default() -> Self {
        Self::zero()
    }
}

impl std::fmt::Display for MoebiusParameter {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        write!(f, "{}{:+}i", self.re, self.im)
    }
}

impl serde::Serialize for MoebiusParameter {
    fn serialize<S: serde::Serializer>(&self, serializer: S) -> std::result::Result<S::Ok, S::Error> {
        use serde::ser::SerializeStruct;
        let mut state = serializer.serialize_struct("MoebiusParameter", 2)?;
        state.serialize_field("re", &self.re)?;
        state.serialize_field("im", &self.im)?;
        state.end()
    }
}

/// Uniform grid point `2πj/m` on `[0, 2π)`.
#[inline]
pub fn grid_point(j: usize, m: usize) -> f64 {
    TAU * j as f64 / m as f64
}

/// Reduce an angle to `[-π, π)`.
#[inline]
pub fn wrap_angle(t: f64) -> f64 {
    (t + PI).rem_euclid(TAU) - PI
}
