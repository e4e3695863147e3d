//! Exact arithmetic in the cyclotomic field `Q(zeta_N)`, `zeta_N = e^{2 pi i/N}`.
//!
//! Values are `p^{-k/2} * sum_j c_j zeta_N^j` with rational `c_j` reduced
//! modulo the `N`-th cyclotomic polynomial, so two values are equal exactly
//! when their fields compare equal. The half-integral power of a single
//! prime `p` is kept symbolically and folded so that `k` is 0 or 1.

use std::fmt;
use std::sync::Arc;

use num_bigint::BigInt;
use num_complex::Complex;
use num_rational::BigRational;
use num_traits::{One, Signed, ToPrimitive, Zero};
use serde::{Deserialize, Serialize};

use crate::arith::{gcd, lcm};
use crate::error::{Error, Result};

/// Integer coefficients of `Phi_n`, lowest degree first.
pub fn cyclotomic_polynomial(n: u64) -> Vec<i64> {
    assert!(n >= 1);
    // x^n - 1 divided by Phi_d for every proper divisor d
    let mut num = vec![0i64; n as usize + 1];
    num[0] = -1;
    num[n as usize] = 1;
    for d in 1..n {
        if n % d == 0 {
            num = poly_div_exact(&num, &cyclotomic_polynomial(d));
        }
    }
    num
}

fn poly_div_exact(num: &[i64], den: &[i64]) -> Vec<i64> {
    let mut rem = num.to_vec();
    let dd = den.len() - 1;
    let lead = den[dd];
    let mut quot = vec![0i64; rem.len() - dd];
    for k in (0..quot.len()).rev() {
        let c = rem[k + dd] / lead;
        quot[k] = c;
        for (j, &d) in den.iter().enumerate() {
            rem[k + j] -= c * d;
        }
    }
    debug_assert!(rem.iter().all(|&r| r == 0));
    quot
}

pub fn euler_phi(n: u64) -> u64 {
    (1..=n).filter(|&k| gcd(k, n) == 1).count() as u64
}

/// Shared data for one field.
#[derive(Debug, PartialEq, Eq)]
struct Field {
    order: u64,
    phi: Vec<i64>,
}

#[derive(Clone)]
pub struct CyclotomicValue {
    field: Arc<Field>,
    coeffs: Vec<BigRational>,
    /// `(p, k)` encoding the factor `p^{-k/2}`; `k` is 0 or 1 and `p` is 1 when
    /// no scale is attached.
    scale_prime: u64,
    scale_half: u8,
}

impl fmt::Debug for CyclotomicValue {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "CyclotomicValue({self})")
    }
}

impl PartialEq for CyclotomicValue {
    fn eq(&self, other: &Self) -> bool {
        if self.field.order != other.field.order {
            return false;
        }
        let zero_a = self.is_zero();
        let zero_b = other.is_zero();
        if zero_a || zero_b {
            return zero_a && zero_b;
        }
        self.coeffs == other.coeffs
            && self.scale_half == other.scale_half
            && (self.scale_half == 0 || self.scale_prime == other.scale_prime)
    }
}

impl Eq for CyclotomicValue {}

impl CyclotomicValue {
    pub fn zero(order: u64) -> Self {
        assert!(order >= 1, "cyclotomic order must be positive");
        let phi = cyclotomic_polynomial(order);
        let deg = phi.len() - 1;
        CyclotomicValue {
            field: Arc::new(Field { order, phi }),
            coeffs: vec![BigRational::zero(); deg],
            scale_prime: 1,
            scale_half: 0,
        }
    }

    fn like(&self) -> Self {
        CyclotomicValue {
            field: self.field.clone(),
            coeffs: vec![BigRational::zero(); self.degree()],
            scale_prime: 1,
            scale_half: 0,
        }
    }

    pub fn from_integer(order: u64, v: i64) -> Self {
        let mut out = Self::zero(order);
        out.coeffs[0] = BigRational::from_integer(v.into());
        out
    }

    pub fn one(order: u64) -> Self {
        Self::from_integer(order, 1)
    }

    /// `zeta_N^k`.
    pub fn root(order: u64, k: i64) -> Self {
        Self::zero(order).root_like(k)
    }

    /// `zeta_N^k` in the same field as `self`.
    pub fn root_like(&self, k: i64) -> Self {
        let mut out = self.like();
        out.add_power(k, &BigRational::one());
        out
    }

    /// Build `sum_k counts[k] zeta_N^{k * stride}`.
    pub fn from_exponent_histogram(order: u64, stride: u64, counts: &[u64]) -> Self {
        let mut out = Self::zero(order);
        for (k, &c) in counts.iter().enumerate() {
            if c > 0 {
                out.add_power(k as i64 * stride as i64, &BigRational::from_integer(BigInt::from(c)));
            }
        }
        out
    }

    pub fn order(&self) -> u64 {
        self.field.order
    }

    pub fn degree(&self) -> usize {
        self.field.phi.len() - 1
    }

    pub fn coeffs(&self) -> &[BigRational] {
        &self.coeffs
    }

    /// `(p, k)` with the value carrying a factor `p^{-k/2}`.
    pub fn scale(&self) -> (u64, u8) {
        (self.scale_prime, self.scale_half)
    }

    pub fn is_zero(&self) -> bool {
        self.coeffs.iter().all(|c| c.is_zero())
    }

    fn add_power(&mut self, k: i64, c: &BigRational) {
        let n = self.field.order as i64;
        let k = k.rem_euclid(n) as usize;
        let deg = self.degree();
        if k < deg {
            self.coeffs[k] += c;
            return;
        }
        // zeta^k for k >= deg: expand through the long representation
        let mut long = vec![BigRational::zero(); k + 1];
        long[k] = c.clone();
        let reduced = self.reduce(long);
        for (a, b) in self.coeffs.iter_mut().zip(reduced) {
            *a += b;
        }
    }

    fn reduce(&self, mut long: Vec<BigRational>) -> Vec<BigRational> {
        let phi = &self.field.phi;
        let deg = phi.len() - 1;
        for top in (deg..long.len()).rev() {
            if long[top].is_zero() {
                continue;
            }
            let c = long[top].clone();
            for (j, &pj) in phi.iter().enumerate() {
                if pj != 0 {
                    long[top - deg + j] -= &c * BigRational::from_integer(pj.into());
                }
            }
        }
        long.truncate(deg);
        long.resize(deg, BigRational::zero());
        long
    }

    fn check_field(&self, other: &Self) -> Result<()> {
        if self.field.order != other.field.order {
            return Err(Error::Mismatch(format!(
                "cyclotomic orders {} and {} differ",
                self.field.order, other.field.order
            )));
        }
        Ok(())
    }

    /// Bring both operands to a common scale; returns the unscaled
    /// coefficient vectors and the shared scale.
    fn align(&self, other: &Self) -> Result<(Vec<BigRational>, Vec<BigRational>, u64, u8)> {
        self.check_field(other)?;
        if self.is_zero() {
            return Ok((self.like().coeffs, other.coeffs.clone(), other.scale_prime, other.scale_half));
        }
        if other.is_zero() {
            return Ok((self.coeffs.clone(), self.like().coeffs, self.scale_prime, self.scale_half));
        }
        if self.scale_half == other.scale_half && (self.scale_half == 0 || self.scale_prime == other.scale_prime) {
            return Ok((self.coeffs.clone(), other.coeffs.clone(), self.scale_prime, self.scale_half));
        }
        Err(Error::Invalid(
            "cannot add values whose scales differ by an irrational factor; multiply by sqrt(p) first".into(),
        ))
    }

    pub fn add(&self, other: &Self) -> Result<Self> {
        let (a, b, p, k) = self.align(other)?;
        let mut out = self.like();
        out.coeffs = a.into_iter().zip(b).map(|(x, y)| x + y).collect();
        out.scale_prime = p;
        out.scale_half = k;
        Ok(out)
    }

    pub fn sub(&self, other: &Self) -> Result<Self> {
        self.add(&other.neg())
    }

    pub fn neg(&self) -> Self {
        let mut out = self.clone();
        out.coeffs.iter_mut().for_each(|c| *c = -c.clone());
        out
    }

    pub fn mul(&self, other: &Self) -> Result<Self> {
        self.check_field(other)?;
        let deg = self.degree();
        let mut long = vec![BigRational::zero(); 2 * deg];
        for (i, a) in self.coeffs.iter().enumerate() {
            if a.is_zero() {
                continue;
            }
            for (j, b) in other.coeffs.iter().enumerate() {
                if !b.is_zero() {
                    long[i + j] += a * b;
                }
            }
        }
        let mut out = self.like();
        out.coeffs = self.reduce(long);
        let (p, k) = match (self.scale_half, other.scale_half) {
            (0, 0) => (1, 0),
            (1, 0) => (self.scale_prime, 1),
            (0, 1) => (other.scale_prime, 1),
            _ => {
                if self.scale_prime != other.scale_prime {
                    return Err(Error::Invalid("products of two different prime square roots are not tracked".into()));
                }
                let inv = BigRational::new(BigInt::one(), BigInt::from(self.scale_prime));
                out.coeffs.iter_mut().for_each(|c| *c *= &inv);
                (1, 0)
            }
        };
        out.scale_prime = p;
        out.scale_half = k;
        Ok(out)
    }

    pub fn pow(&self, e: u32) -> Result<Self> {
        let mut acc = self.like().root_like(0);
        for _ in 0..e {
            acc = acc.mul(self)?;
        }
        Ok(acc)
    }

    pub fn scale_rational(&self, r: &BigRational) -> Self {
        let mut out = self.clone();
        out.coeffs.iter_mut().for_each(|c| *c *= r);
        out
    }

    /// Multiply by `p^{-k/2}`.
    pub fn with_inverse_sqrt_power(&self, p: u64, k: u32) -> Result<Self> {
        let mut out = self.clone();
        let mut half = k;
        if out.scale_half == 1 {
            if out.scale_prime != p {
                return Err(Error::Invalid("products of two different prime square roots are not tracked".into()));
            }
            half += 1;
        }
        let whole = half / 2;
        let den = BigRational::from_integer(BigInt::from(p).pow(whole));
        out.coeffs.iter_mut().for_each(|c| *c /= &den);
        out.scale_half = (half % 2) as u8;
        out.scale_prime = if out.scale_half == 1 { p } else { 1 };
        Ok(out)
    }

    /// Complex conjugate (`zeta -> zeta^{-1}`).
    pub fn conj(&self) -> Self {
        let mut out = self.like();
        for (j, c) in self.coeffs.iter().enumerate() {
            if !c.is_zero() {
                out.add_power(-(j as i64), c);
            }
        }
        out.scale_prime = self.scale_prime;
        out.scale_half = self.scale_half;
        out
    }

    /// `|v|^2` as an exact rational, when it lies in `Q`.
    pub fn norm_sqr_rational(&self) -> Option<BigRational> {
        let prod = self.mul(&self.conj()).ok()?;
        if prod.coeffs.iter().skip(1).all(|c| c.is_zero()) {
            let mut v = prod.coeffs[0].clone();
            if prod.scale_half == 1 {
                return if v.is_zero() { Some(v) } else { None };
            }
            if v.is_negative() {
                v = -v;
            }
            Some(v)
        } else {
            None
        }
    }

    /// The rational value, if `self` lies in `Q`.
    pub fn as_rational(&self) -> Option<BigRational> {
        if self.scale_half == 0 && self.coeffs.iter().skip(1).all(|c| c.is_zero()) {
            Some(self.coeffs[0].clone())
        } else {
            None
        }
    }

    pub fn eval(&self) -> Complex<f64> {
        let n = self.field.order as f64;
        let mut acc = Complex::new(0.0, 0.0);
        for (j, c) in self.coeffs.iter().enumerate() {
            if c.is_zero() {
                continue;
            }
            let angle = 2.0 * std::f64::consts::PI * j as f64 / n;
            acc += Complex::from_polar(rational_to_f64(c), angle);
        }
        if self.scale_half == 1 {
            acc /= (self.scale_prime as f64).sqrt();
        }
        acc
    }

    /// Common field order `lcm(4, 2m)` in which `i`, `w = e^{2 pi i/m}` and
    /// `e^{i pi/m}` all live.
    pub fn standard_order(m: u64) -> u64 {
        lcm(4, 2 * m)
    }

    pub fn to_json(&self) -> ExactJson {
        ExactJson {
            order: self.field.order,
            coeffs: self.coeffs.iter().map(|c| c.to_string()).collect(),
            scale: ScaleJson { prime: self.scale_prime, half_power: self.scale_half },
        }
    }
}

pub fn rational_to_f64(r: &BigRational) -> f64 {
    match (r.numer().to_f64(), r.denom().to_f64()) {
        (Some(a), Some(b)) if a.is_finite() && b.is_finite() => a / b,
        _ => f64::NAN,
    }
}

impl fmt::Display for CyclotomicValue {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let terms: Vec<String> = self
            .coeffs
            .iter()
            .enumerate()
            .filter(|(_, c)| !c.is_zero())
            .map(|(j, c)| match j {
                0 => c.to_string(),
                1 => format!("({c})z"),
                _ => format!("({c})z^{j}"),
            })
            .collect();
        let body = if terms.is_empty() { "0".to_string() } else { terms.join(" + ") };
        if self.scale_half == 1 {
            write!(f, "[{body}]/sqrt({}) in Q(z_{})", self.scale_prime, self.field.order)
        } else {
            write!(f, "{body} in Q(z_{})", self.field.order)
        }
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct ScaleJson {
    pub prime: u64,
    pub half_power: u8,
}

/// Serialized exact value: `coeffs` are rationals over the power basis of
/// `zeta_order`, the whole multiplied by `prime^{-half_power/2}`.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct ExactJson {
    pub order: u64,
    pub coeffs: Vec<String>,
    pub scale: ScaleJson,
}
