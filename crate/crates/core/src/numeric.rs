//! Quaternion arithmetic, floor with boundary detection, and small root finders.
//!
//! Reals and complex numbers are carried as quaternions whose trailing
//! components are zero, so every expansion goes through one multiplication.

use std::fmt;
use std::ops::{Add, AddAssign, Mul, Neg, Sub, SubAssign};

use serde::{Deserialize, Serialize};
use thiserror::Error;

/// Environment variable that overrides [`Tolerance::eps_floor`].
pub const EPS_ENV: &str = "BETA_ARENA_EPS";

#[derive(Debug, Error, Clone, PartialEq)]
pub enum NumericError {
    #[error("non-finite input {0}")]
    NonFinite(f64),
    #[error("invalid tolerance: need 0 < eps_cmp < eps_floor < 1/4 (got eps_floor={eps_floor}, eps_cmp={eps_cmp})")]
    InvalidTolerance { eps_floor: f64, eps_cmp: f64 },
    #[error("metallic mean index must be positive")]
    ZeroMetallicIndex,
    #[error("root is not bracketed on [{lo}, {hi}]")]
    NotBracketed { lo: f64, hi: f64 },
}

#[derive(Debug, Clone, Copy, PartialEq, Default, Serialize, Deserialize)]
pub struct Quaternion {
    pub a: f64,
    pub b: f64,
    pub c: f64,
    pub d: f64,
}

impl Quaternion {
    pub const ZERO: Quaternion = Quaternion::new(0.0, 0.0, 0.0, 0.0);
    pub const ONE: Quaternion = Quaternion::new(1.0, 0.0, 0.0, 0.0);
    pub const I: Quaternion = Quaternion::new(0.0, 1.0, 0.0, 0.0);
    pub const J: Quaternion = Quaternion::new(0.0, 0.0, 1.0, 0.0);
    pub const K: Quaternion = Quaternion::new(0.0, 0.0, 0.0, 1.0);

    pub const fn new(a: f64, b: f64, c: f64, d: f64) -> Self {
        Quaternion { a, b, c, d }
    }

    pub const fn real(a: f64) -> Self {
        Quaternion::new(a, 0.0, 0.0, 0.0)
    }

    pub const fn complex(re: f64, im: f64) -> Self {
        Quaternion::new(re, im, 0.0, 0.0)
    }

    pub fn from_polar(r: f64, theta: f64) -> Self {
        Quaternion::complex(r * theta.cos(), r * theta.sin())
    }

    pub fn from_array(v: [f64; 4]) -> Self {
        Quaternion::new(v[0], v[1], v[2], v[3])
    }

    pub fn to_array(self) -> [f64; 4] {
        [self.a, self.b, self.c, self.d]
    }

    pub fn conj(self) -> Self {
        Quaternion::new(self.a, -self.b, -self.c, -self.d)
    }

    pub fn norm_sqr(self) -> f64 {
        self.a * self.a + self.b * self.b + self.c * self.c + self.d * self.d
    }

    pub fn norm(self) -> f64 {
        self.norm_sqr().sqrt()
    }

    /// Multiplicative inverse; `None` for zero.
    pub fn inv(self) -> Option<Self> {
        let n = self.norm_sqr();
        if n == 0.0 {
            None
        } else {
            Some(self.conj().scale(1.0 / n))
        }
    }

    pub fn scale(self, s: f64) -> Self {
        Quaternion::new(self.a * s, self.b * s, self.c * s, self.d * s)
    }

    pub fn dot(self, o: Self) -> f64 {
        self.a * o.a + self.b * o.b + self.c * o.c + self.d * o.d
    }

    pub fn dist(self, o: Self) -> f64 {
        (self - o).norm()
    }

    pub fn is_finite(self) -> bool {
        self.to_array().iter().all(|x| x.is_finite())
    }

    /// Integer power by repeated squaring.
    pub fn powi(self, n: u32) -> Self {
        let mut acc = Quaternion::ONE;
        let mut base = self;
        let mut e = n;
        while e > 0 {
            if e & 1 == 1 {
                acc = acc * base;
            }
            base = base * base;
            e >>= 1;
        }
        acc
    }

    /// Largest componentwise absolute difference.
    pub fn max_abs_diff(self, o: Self) -> f64 {
        let d = self - o;
        d.to_array().iter().fold(0.0_f64, |m, x| m.max(x.abs()))
    }

    pub fn round(self) -> Self {
        Quaternion::new(self.a.round(), self.b.round(), self.c.round(), self.d.round())
    }
}

impl Add for Quaternion {
    type Output = Quaternion;
    fn add(self, o: Self) -> Self {
        Quaternion::new(self.a + o.a, self.b + o.b, self.c + o.c, self.d + o.d)
    }
}

impl AddAssign for Quaternion {
    fn add_assign(&mut self, o: Self) {
        *self = *self + o;
    }
}

impl Sub for Quaternion {
    type Output = Quaternion;
    fn sub(self, o: Self) -> Self {
        Quaternion::new(self.a - o.a, self.b - o.b, self.c - o.c, self.d - o.d)
    }
}

impl SubAssign for Quaternion {
    fn sub_assign(&mut self, o: Self) {
        *self = *self - o;
    }
}

impl Neg for Quaternion {
    type Output = Quaternion;
    fn neg(self) -> Self {
        self.scale(-1.0)
    }
}

/// Hamilton product.
impl Mul for Quaternion {
    type Output = Quaternion;
    fn mul(self, o: Self) -> Self {
        let (a1, b1, c1, d1) = (self.a, self.b, self.c, self.d);
        let (a2, b2, c2, d2) = (o.a, o.b, o.c, o.d);
        Quaternion::new(
            a1 * a2 - b1 * b2 - c1 * c2 - d1 * d2,
            a1 * b2 + b1 * a2 + c1 * d2 - d1 * c2,
            a1 * c2 - b1 * d2 + c1 * a2 + d1 * b2,
            a1 * d2 + b1 * c2 - c1 * b2 + d1 * a2,
        )
    }
}

impl Mul<f64> for Quaternion {
    type Output = Quaternion;
    fn mul(self, s: f64) -> Self {
        self.scale(s)
    }
}

/// Prints lattice-style values compactly: `-2-2j`, `i+k`, `0`, `0.5+1.25i`.
impl fmt::Display for Quaternion {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let parts = [(self.a, ""), (self.b, "i"), (self.c, "j"), (self.d, "k")];
        let mut out = String::new();
        for (v, unit) in parts {
            if v == 0.0 {
                continue;
            }
            let mag = v.abs();
            let sign = if v < 0.0 {
                "-"
            } else if out.is_empty() {
                ""
            } else {
                "+"
            };
            let body = if !unit.is_empty() && mag == 1.0 {
                String::new()
            } else if mag.fract() == 0.0 && mag < 1e15 {
                format!("{}", mag as i64)
            } else {
                format!("{mag}")
            };
            out.push_str(sign);
            out.push_str(&body);
            out.push_str(unit);
        }
        if out.is_empty() {
            out.push('0');
        }
        f.write_str(&out)
    }
}

/// Tolerances shared by every module.
///
/// `eps_floor` is the band around integers (and cell faces) inside which a
/// floor is reported as ambiguous. `eps_cmp` is the slack for comparisons of
/// computed quantities such as legality inequalities.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct Tolerance {
    pub eps_floor: f64,
    pub eps_cmp: f64,
}

impl Default for Tolerance {
    fn default() -> Self {
        Tolerance { eps_floor: 1e-9, eps_cmp: 1e-11 }
    }
}

impl Tolerance {
    pub fn new(eps_floor: f64, eps_cmp: f64) -> Result<Self, NumericError> {
        let ok = eps_cmp > 0.0 && eps_cmp < eps_floor && eps_floor < 0.25;
        if ok {
            Ok(Tolerance { eps_floor, eps_cmp })
        } else {
            Err(NumericError::InvalidTolerance { eps_floor, eps_cmp })
        }
    }

    /// Default tolerance with `eps_floor` taken from `BETA_ARENA_EPS` when set.
    pub fn from_env() -> Result<Self, NumericError> {
        let base = Tolerance::default();
        match std::env::var(EPS_ENV) {
            Ok(raw) => {
                let eps_floor: f64 = raw.trim().parse().map_err(|_| NumericError::InvalidTolerance {
                    eps_floor: f64::NAN,
                    eps_cmp: base.eps_cmp,
                })?;
                let eps_cmp = base.eps_cmp.min(eps_floor / 100.0);
                Tolerance::new(eps_floor, eps_cmp)
            }
            Err(_) => Ok(base),
        }
    }
}

/// Result of [`safe_floor`].
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct Floor {
    pub value: i64,
    /// The input lies within `eps_floor` of an integer.
    pub ambiguous: bool,
}

pub fn safe_floor(x: f64, tol: &Tolerance) -> Result<Floor, NumericError> {
    if !x.is_finite() {
        return Err(NumericError::NonFinite(x));
    }
    let value = x.floor();
    let ambiguous = (x - x.round()).abs() <= tol.eps_floor;
    Ok(Floor { value: value as i64, ambiguous })
}

/// Positive root of `x^2 - j x - 1`.
pub fn metallic_mean(j: u32) -> Result<f64, NumericError> {
    if j == 0 {
        return Err(NumericError::ZeroMetallicIndex);
    }
    let j = j as f64;
    Ok((j + (j * j + 4.0).sqrt()) / 2.0)
}

/// Bisection for a sign change of `f` on `[lo, hi]`, returning the midpoint after `iters` halvings.
pub fn bisect<F: Fn(f64) -> f64>(f: F, mut lo: f64, mut hi: f64, iters: u32) -> Result<f64, NumericError> {
    let mut flo = f(lo);
    let fhi = f(hi);
    if flo == 0.0 {
        return Ok(lo);
    }
    if fhi == 0.0 {
        return Ok(hi);
    }
    if flo.signum() == fhi.signum() || !flo.is_finite() || !fhi.is_finite() {
        return Err(NumericError::NotBracketed { lo, hi });
    }
    for _ in 0..iters {
        let mid = 0.5 * (lo + hi);
        let fm = f(mid);
        if fm == 0.0 {
            return Ok(mid);
        }
        if fm.signum() == flo.signum() {
            lo = mid;
            flo = fm;
        } else {
            hi = mid;
        }
    }
    Ok(0.5 * (lo + hi))
}

/// Significant-digit formatting in the spirit of C's `%.{sig}g`.
pub fn fmt_sig(x: f64, sig: usize) -> String {
    if x == 0.0 {
        return "0".into();
    }
    if !x.is_finite() {
        return format!("{x}");
    }
    let exp = x.abs().log10().floor() as i32;
    let s = if (-5..sig as i32).contains(&exp) {
        let decimals = (sig as i32 - 1 - exp).max(0) as usize;
        let s = format!("{:.*}", decimals, x);
        trim_zeros(&s)
    } else {
        let s = format!("{:.*e}", sig - 1, x);
        match s.split_once('e') {
            Some((m, e)) => format!("{}e{}", trim_zeros(m), e),
            None => s,
        }
    };
    if s == "-0" {
        "0".into()
    } else {
        s
    }
}

fn trim_zeros(s: &str) -> String {
    if s.contains('.') {
        s.trim_end_matches('0').trim_end_matches('.').to_string()
    } else {
        s.to_string()
    }
}
