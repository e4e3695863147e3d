//! Heisenberg-picture simulation of the Gaussian qudit braid representation.
//!
//! Operators are monomials `zeta^c X^a Z^b` in the shift and clock operators
//! of `n` qudits of dimension `m`, with `zeta = e^{i pi/m}` and
//! `w = zeta^2`. The local R-matrix is `R = m^{-1/2} sum_j w^{j^2} U^j` with
//! `U = X_1 Z_1 X_2 Z_2^{-1}`; for a monomial `P` with `U P = w^s P U` one has
//!
//! ```text
//! R^dagger P R = w^{-t^2} U^t P,  t = l s
//! R P R^dagger = w^{+t^2} U^t P,  t = -l s
//! ```
//!
//! where `l = (m+1)/2` is the inverse of 2 mod `m`. Conjugation therefore maps
//! monomials to monomials with exact phases for every odd `m`.

use std::fmt;

use num_complex::Complex;
use num_traits::Zero;
use rand::Rng;
use serde::{Deserialize, Serialize};

use crate::arith::{check_odd_modulus, check_odd_prime, inv_mod, modp};
use crate::braid::BraidWord;
use crate::dense::DenseOperator;
use crate::error::{Error, Result};
use crate::scalar::Real;

#[derive(Debug, Clone, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub struct QuditMonomial {
    m: u32,
    /// Exponent of `zeta = e^{i pi/m}`, mod `2m`.
    phase: u32,
    x: Vec<u32>,
    z: Vec<u32>,
}

impl QuditMonomial {
    pub fn identity(n: usize, m: u32) -> Self {
        QuditMonomial { m, phase: 0, x: vec![0; n], z: vec![0; n] }
    }

    pub fn new(m: u32, phase: i64, x: Vec<i64>, z: Vec<i64>) -> Result<Self> {
        check_odd_modulus(m)?;
        if x.len() != z.len() {
            return Err(Error::Mismatch(format!("{} shift exponents vs {} clock exponents", x.len(), z.len())));
        }
        Ok(QuditMonomial {
            m,
            phase: modp(phase, 2 * m),
            x: x.into_iter().map(|v| modp(v, m)).collect(),
            z: z.into_iter().map(|v| modp(v, m)).collect(),
        })
    }

    /// `X_i` (0-indexed site).
    pub fn shift(n: usize, m: u32, i: usize) -> Self {
        let mut out = Self::identity(n, m);
        out.x[i] = 1 % m;
        out
    }

    /// `Z_i` (0-indexed site).
    pub fn clock(n: usize, m: u32, i: usize) -> Self {
        let mut out = Self::identity(n, m);
        out.z[i] = 1 % m;
        out
    }

    pub fn n(&self) -> usize {
        self.x.len()
    }

    pub fn m(&self) -> u32 {
        self.m
    }

    pub fn phase_exp(&self) -> u32 {
        self.phase
    }

    pub fn x_exp(&self) -> &[u32] {
        &self.x
    }

    pub fn z_exp(&self) -> &[u32] {
        &self.z
    }

    pub fn is_identity(&self) -> bool {
        self.phase == 0 && self.x.iter().chain(&self.z).all(|&e| e == 0)
    }

    /// Same operator up to a phase.
    pub fn same_support(&self, other: &Self) -> bool {
        self.x == other.x && self.z == other.z
    }

    /// Multiply by `zeta^k`.
    pub fn with_extra_phase(mut self, k: i64) -> Self {
        self.phase = modp(self.phase as i64 + k, 2 * self.m);
        self
    }

    fn check(&self, other: &Self) -> Result<()> {
        if self.m != other.m || self.n() != other.n() {
            return Err(Error::Mismatch(format!(
                "monomials on ({}, m={}) and ({}, m={})",
                self.n(),
                self.m,
                other.n(),
                other.m
            )));
        }
        Ok(())
    }

    /// Product in canonical per-site `X^a Z^b` order, using `Z X = w X Z`.
    pub fn mul(&self, other: &Self) -> Result<Self> {
        self.check(other)?;
        let m = self.m;
        let mut phase = self.phase as u64 + other.phase as u64;
        // Z^b X^c = w^{bc} X^c Z^b
        for (b, c) in self.z.iter().zip(&other.x) {
            phase += 2 * (*b as u64) * (*c as u64);
        }
        Ok(QuditMonomial {
            m,
            phase: (phase % (2 * m as u64)) as u32,
            x: self.x.iter().zip(&other.x).map(|(a, b)| (a + b) % m).collect(),
            z: self.z.iter().zip(&other.z).map(|(a, b)| (a + b) % m).collect(),
        })
    }

    pub fn inverse(&self) -> Self {
        // (zeta^c X^a Z^b)^{-1} = zeta^{-c} Z^{-b} X^{-a} = zeta^{-c} w^{ab} X^{-a} Z^{-b}
        let m = self.m as i64;
        let mut phase = -(self.phase as i64);
        for (a, b) in self.x.iter().zip(&self.z) {
            phase += 2 * (*a as i64) * (*b as i64);
        }
        QuditMonomial {
            m: self.m,
            phase: modp(phase, 2 * self.m),
            x: self.x.iter().map(|&a| modp(-(a as i64), m as u32)).collect(),
            z: self.z.iter().map(|&b| modp(-(b as i64), m as u32)).collect(),
        }
    }

    pub fn pow(&self, k: i64) -> Self {
        let base = if k < 0 { self.inverse() } else { self.clone() };
        let mut acc = Self::identity(self.n(), self.m);
        let mut b = base;
        let mut e = k.unsigned_abs();
        while e > 0 {
            if e & 1 == 1 {
                acc = acc.mul(&b).expect("same shape");
            }
            b = b.mul(&b).expect("same shape");
            e >>= 1;
        }
        acc
    }

    /// Symplectic form `x.z' - z.x'` mod `m`.
    pub fn symp(&self, other: &Self) -> u32 {
        let m = self.m as i64;
        let mut s = 0i64;
        for i in 0..self.n() {
            s += self.x[i] as i64 * other.z[i] as i64 - self.z[i] as i64 * other.x[i] as i64;
        }
        modp(s, m as u32)
    }

    /// `k` with `self * other = w^k other * self`; equals `-symp`.
    pub fn commutation(&self, other: &Self) -> u32 {
        modp(-(self.symp(other) as i64), self.m)
    }

    pub fn commutes(&self, other: &Self) -> bool {
        self.symp(other) == 0
    }

    /// Symplectic vector `(x | z)`.
    pub fn vector(&self) -> Vec<u32> {
        self.x.iter().chain(&self.z).copied().collect()
    }

    pub fn dense<T: Real>(&self) -> DenseOperator<T> {
        let m = self.m as usize;
        let n = self.n();
        let dim = m.pow(n as u32);
        let mut out = DenseOperator::zeros(dim);
        for col in 0..dim {
            let (row, w) = self.image_of_basis(col);
            out.set(row, col, T::root_of_unity(w as i64, self.m as i64));
        }
        out
    }

    /// `(target index, zeta exponent)` with `self |col> = zeta^k |target>`.
    fn image_of_basis(&self, col: usize) -> (usize, u64) {
        let m = self.m as usize;
        let n = self.n();
        let mut rest = col;
        let mut digits = vec![0usize; n];
        for i in (0..n).rev() {
            digits[i] = rest % m;
            rest /= m;
        }
        let mut k = self.phase as u64;
        let mut row = 0usize;
        for i in 0..n {
            k += 2 * self.z[i] as u64 * digits[i] as u64;
            row = row * m + (digits[i] + self.x[i] as usize) % m;
        }
        (row, k % (2 * m as u64))
    }

    pub fn apply_to_state<T: Real>(&self, state: &[Complex<T>]) -> Vec<Complex<T>> {
        let mut out = vec![Complex::zero(); state.len()];
        for (col, v) in state.iter().enumerate() {
            let (row, k) = self.image_of_basis(col);
            out[row] = *v * T::root_of_unity(k as i64, self.m as i64);
        }
        out
    }
}

impl fmt::Display for QuditMonomial {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "z^{}", self.phase)?;
        for i in 0..self.n() {
            if self.x[i] != 0 {
                write!(f, " X{}^{}", i + 1, self.x[i])?;
            }
            if self.z[i] != 0 {
                write!(f, " Z{}^{}", i + 1, self.z[i])?;
            }
        }
        Ok(())
    }
}

/// `U_i = X_i Z_i X_{i+1} Z_{i+1}^{-1}` for the generator `1 <= i <= n-1`.
pub fn u_generator(n: usize, m: u32, i: usize) -> Result<QuditMonomial> {
    if i == 0 || i >= n {
        return Err(Error::MalformedGenerator { generator: i as i64, strands: n });
    }
    let mut x = vec![0i64; n];
    let mut z = vec![0i64; n];
    x[i - 1] = 1;
    x[i] = 1;
    z[i - 1] = 1;
    z[i] = -1;
    QuditMonomial::new(m, 0, x, z)
}

/// `U~_i = X_i X_{i+1} Z_i^{-1} Z_{i+1}`.
pub fn u_tilde(n: usize, m: u32, i: usize) -> Result<QuditMonomial> {
    if i == 0 || i >= n {
        return Err(Error::MalformedGenerator { generator: i as i64, strands: n });
    }
    let mut x = vec![0i64; n];
    let mut z = vec![0i64; n];
    x[i - 1] = 1;
    x[i] = 1;
    z[i - 1] = -1;
    z[i] = 1;
    QuditMonomial::new(m, 0, x, z)
}

/// Conjugate by the R-matrix of `sigma_i^{sign}`: `R^dagger a R` for
/// `sign = +1` and `R a R^dagger` for `sign = -1`.
pub fn conjugate_by_generator(a: &QuditMonomial, i: usize, sign: i32) -> Result<QuditMonomial> {
    let m = a.m();
    let u = u_generator(a.n(), m, i)?;
    let s = u.commutation(a) as i64;
    let l = ((m + 1) / 2) as i64;
    let (t, phase_sign) = if sign > 0 { (modp(l * s, m), -1) } else { (modp(-l * s, m), 1) };
    let t = t as i64;
    let out = u.pow(t).mul(a)?;
    Ok(out.with_extra_phase(phase_sign * 2 * t * t))
}

/// `rho(b)^dagger a rho(b)`, letters applied in word order.
pub fn conjugate_by_braid(a: &QuditMonomial, b: &BraidWord) -> Result<QuditMonomial> {
    if b.strands() != a.n() {
        return Err(Error::Mismatch(format!("braid on {} strands, monomial on {} qudits", b.strands(), a.n())));
    }
    let mut out = a.clone();
    for &g in b.letters() {
        out = conjugate_by_generator(&out, g.unsigned_abs() as usize, g.signum())?;
    }
    Ok(out)
}

/// `rho(b) a rho(b)^dagger`, the Schrodinger-picture update of a stabilizer.
pub fn push_forward_by_braid(a: &QuditMonomial, b: &BraidWord) -> Result<QuditMonomial> {
    conjugate_by_braid(a, &b.inverse())
}

/// How abstract generators `u_k` are realized as monomials.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub enum UPresentation {
    /// `u_i = U_i` on `n` qudits, `1 <= i <= n-1`; `u_i u_{i+1} = w^{-2} u_{i+1} u_i`.
    Localized,
    /// `u_{2i-1} = X_i`, `u_{2i} = Z_i Z_{i+1}^{-1}`; `2n-1` generators on `n`
    /// qudits with `u_k u_{k+1} = w^{-1} u_{k+1} u_k`.
    ShiftClock,
}

/// `zeta^phase u_1^{e_1} u_2^{e_2} ...` in increasing index order.
#[derive(Debug, Clone, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub struct UWord {
    pub m: u32,
    pub phase: u32,
    pub exps: Vec<u32>,
}

impl UWord {
    pub fn generator_count(p: UPresentation, n: usize) -> usize {
        match p {
            UPresentation::Localized => n.saturating_sub(1),
            UPresentation::ShiftClock => (2 * n).saturating_sub(1),
        }
    }

    fn generator(p: UPresentation, n: usize, m: u32, k: usize) -> Result<QuditMonomial> {
        match p {
            UPresentation::Localized => u_generator(n, m, k),
            UPresentation::ShiftClock => {
                if k == 0 || k > 2 * n - 1 {
                    return Err(Error::MalformedGenerator { generator: k as i64, strands: n });
                }
                if k % 2 == 1 {
                    Ok(QuditMonomial::shift(n, m, (k - 1) / 2))
                } else {
                    let i = k / 2 - 1;
                    let mut z = vec![0i64; n];
                    z[i] = 1;
                    z[i + 1] = -1;
                    QuditMonomial::new(m, 0, vec![0; n], z)
                }
            }
        }
    }

    pub fn to_monomial(&self, p: UPresentation, n: usize) -> Result<QuditMonomial> {
        if self.exps.len() != Self::generator_count(p, n) {
            return Err(Error::Mismatch(format!("{} exponents for {} generators", self.exps.len(), Self::generator_count(p, n))));
        }
        let mut acc = QuditMonomial::identity(n, self.m).with_extra_phase(self.phase as i64);
        for (k, &e) in self.exps.iter().enumerate() {
            acc = acc.mul(&Self::generator(p, n, self.m, k + 1)?.pow(e as i64))?;
        }
        Ok(acc)
    }

    /// Inverse of [`UWord::to_monomial`]; `None` when the monomial lies
    /// outside the span of the generators.
    pub fn from_monomial(a: &QuditMonomial, p: UPresentation) -> Result<Option<UWord>> {
        let (n, m) = (a.n(), a.m());
        let mi = m as i64;
        let mut exps = vec![0i64; Self::generator_count(p, n)];
        match p {
            UPresentation::Localized => {
                let mut prev = 0i64;
                for i in 0..n.saturating_sub(1) {
                    exps[i] = (a.x[i] as i64 - prev).rem_euclid(mi);
                    prev = exps[i];
                }
            }
            UPresentation::ShiftClock => {
                let mut partial = 0i64;
                for i in 0..n {
                    exps[2 * i] = a.x[i] as i64;
                    if i + 1 < n {
                        partial += a.z[i] as i64;
                        exps[2 * i + 1] = partial.rem_euclid(mi);
                    }
                }
            }
        }
        let word = UWord { m, phase: 0, exps: exps.iter().map(|&e| modp(e, m)).collect() };
        let candidate = word.to_monomial(p, n)?;
        if !candidate.same_support(a) {
            return Ok(None);
        }
        let phase = modp(a.phase as i64 - candidate.phase as i64, 2 * m);
        Ok(Some(UWord { phase, ..word }))
    }
}

/// A list of commuting monomials with eigenvalue exponents: each row
/// `(M, e)` asserts `M psi = w^e psi`.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct StabilizerTableau {
    n: usize,
    m: u32,
    rows: Vec<(QuditMonomial, u32)>,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct TableauRowJson {
    pub phase_exp: u32,
    pub x_exp: Vec<u32>,
    pub z_exp: Vec<u32>,
    pub eigen_exp: u32,
}

impl StabilizerTableau {
    pub fn new(n: usize, m: u32, rows: Vec<(QuditMonomial, u32)>) -> Result<Self> {
        check_odd_modulus(m)?;
        for (r, e) in &rows {
            if r.n() != n || r.m() != m {
                return Err(Error::Mismatch(format!("row on {} qudits (m={}) in a tableau on {n} (m={m})", r.n(), r.m())));
            }
            if r.phase % 2 == 1 {
                return Err(Error::OddPhase(r.phase));
            }
            if *e >= m {
                return Err(Error::Invalid(format!("eigenvalue exponent {e} not reduced mod {m}")));
            }
        }
        for (i, (a, _)) in rows.iter().enumerate() {
            for (b, _) in &rows[i + 1..] {
                if !a.commutes(b) {
                    return Err(Error::Invalid(format!("rows {a} and {b} do not commute")));
                }
            }
        }
        let t = StabilizerTableau { n, m, rows };
        if crate::arith::is_prime(m as u64) && t.rank() != t.rows.len() {
            return Err(Error::Invalid("tableau rows are linearly dependent".into()));
        }
        Ok(t)
    }

    /// Stabilizers `Z_i` with eigenvalue `w^0`: the state `|0...0>`.
    pub fn all_z(n: usize, m: u32) -> Result<Self> {
        Self::new(n, m, (0..n).map(|i| (QuditMonomial::clock(n, m, i), 0)).collect())
    }

    pub fn n(&self) -> usize {
        self.n
    }

    pub fn m(&self) -> u32 {
        self.m
    }

    pub fn rows(&self) -> &[(QuditMonomial, u32)] {
        &self.rows
    }

    /// Rank of the row vectors over `F_m` (meaningful for prime `m`).
    pub fn rank(&self) -> usize {
        let vecs: Vec<Vec<u32>> = self.rows.iter().map(|(r, _)| r.vector()).collect();
        rank_mod_p(vecs, self.m)
    }

    pub fn is_complete(&self) -> bool {
        self.rows.len() == self.n && self.rank() == self.n
    }

    pub fn to_json(&self) -> Vec<TableauRowJson> {
        self.rows
            .iter()
            .map(|(r, e)| TableauRowJson { phase_exp: r.phase, x_exp: r.x.clone(), z_exp: r.z.clone(), eigen_exp: *e })
            .collect()
    }

    pub fn from_json(n: usize, m: u32, rows: &[TableauRowJson]) -> Result<Self> {
        let rows = rows
            .iter()
            .map(|r| {
                let mono = QuditMonomial::new(
                    m,
                    r.phase_exp as i64,
                    r.x_exp.iter().map(|&v| v as i64).collect(),
                    r.z_exp.iter().map(|&v| v as i64).collect(),
                )?;
                Ok((mono, r.eigen_exp % m))
            })
            .collect::<Result<Vec<_>>>()?;
        Self::new(n, m, rows)
    }

    /// Dense projector onto the joint eigenspace.
    pub fn dense_projector<T: Real>(&self) -> DenseOperator<T> {
        let dim = (self.m as usize).pow(self.n as u32);
        let mut proj = DenseOperator::identity(dim);
        for (r, e) in &self.rows {
            proj = proj.mul(&monomial_projector(r, *e));
        }
        proj
    }
}

/// `(1/m) sum_k (w^{-e} M)^k`, the projector onto `M = w^e`.
pub fn monomial_projector<T: Real>(mono: &QuditMonomial, e: u32) -> DenseOperator<T> {
    let m = mono.m();
    let base = mono.clone().with_extra_phase(-2 * e as i64);
    let dim = (m as usize).pow(mono.n() as u32);
    let mut acc = DenseOperator::zeros(dim);
    for k in 0..m as i64 {
        acc = acc.add(&base.pow(k).dense::<T>());
    }
    acc.scale(Complex::new(T::one() / T::lit(m as f64), T::zero()))
}

/// Rows evolved as `rho(b) M rho(b)^dagger`.
pub fn evolve_tableau(t: &StabilizerTableau, b: &BraidWord) -> Result<StabilizerTableau> {
    if b.strands() != t.n {
        return Err(Error::Mismatch(format!("braid on {} strands, tableau on {} qudits", b.strands(), t.n)));
    }
    let inv = b.inverse();
    let rows = t
        .rows
        .iter()
        .map(|(r, e)| Ok((conjugate_by_braid(r, &inv)?, *e)))
        .collect::<Result<Vec<_>>>()?;
    Ok(StabilizerTableau { n: t.n, m: t.m, rows })
}

/// Maximally entangled pairs on qudits `(2k-1, 2k)`, each fixed by
/// `U_{2k-1} = 1` and `U~_{2k-1} = 1`.
pub fn init_pair_tableau(n: usize, m: u32) -> Result<StabilizerTableau> {
    check_odd_prime(m)?;
    if n < 2 || n % 2 == 1 {
        return Err(Error::Invalid(format!("pair creation needs an even number of qudits >= 2, got {n}")));
    }
    let mut rows = Vec::with_capacity(n);
    for k in (1..n).step_by(2) {
        rows.push((u_generator(n, m, k)?, 0));
        rows.push((u_tilde(n, m, k)?, 0));
    }
    StabilizerTableau::new(n, m, rows)
}

/// `U~_i` for `1 <= i <= n-1`, `X_1 Z_1` and `X_n Z_n^{-1}`: monomials that
/// commute with every `U_i` and are therefore fixed by every braid.
pub fn braid_commutant_generators(n: usize, m: u32) -> Result<Vec<QuditMonomial>> {
    check_odd_modulus(m)?;
    if n < 2 {
        return Err(Error::Invalid(format!("need at least 2 qudits, got {n}")));
    }
    let mut out = (1..n).map(|i| u_tilde(n, m, i)).collect::<Result<Vec<_>>>()?;
    let mut x = vec![0i64; n];
    let mut z = vec![0i64; n];
    x[0] = 1;
    z[0] = 1;
    out.push(QuditMonomial::new(m, 0, x.clone(), z.clone())?);
    x[0] = 0;
    z[0] = 0;
    x[n - 1] = 1;
    z[n - 1] = -1;
    out.push(QuditMonomial::new(m, 0, x, z)?);
    Ok(out)
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct MeasurementResult {
    pub outcome_exp: u32,
    pub deterministic: bool,
    pub updated: StabilizerTableau,
}

/// Measure the monomial `op` (eigenvalues `w^k`), returning `k` and the
/// post-measurement tableau.
pub fn measure_monomial<R: Rng + ?Sized>(
    t: &StabilizerTableau,
    op: &QuditMonomial,
    rng: &mut R,
) -> Result<MeasurementResult> {
    let p = t.m;
    check_odd_prime(p)?;
    if op.n() != t.n || op.m() != p {
        return Err(Error::Mismatch("measured operator does not match the tableau".into()));
    }
    if op.phase % 2 == 1 {
        return Err(Error::OddPhase(op.phase));
    }
    let anti: Vec<usize> = (0..t.rows.len()).filter(|&i| !t.rows[i].0.commutes(op)).collect();
    if anti.is_empty() {
        let vecs: Vec<Vec<u32>> = t.rows.iter().map(|(r, _)| r.vector()).collect();
        let coeffs = solve_combination_mod_p(&vecs, &op.vector(), p).ok_or(Error::IncompleteTableau)?;
        let mut prod = QuditMonomial::identity(t.n, p);
        let mut eigen = 0u64;
        for ((row, e), &c) in t.rows.iter().zip(&coeffs) {
            prod = prod.mul(&row.pow(c as i64))?;
            eigen += c as u64 * *e as u64;
        }
        let delta = modp(op.phase as i64 - prod.phase as i64, 2 * p);
        debug_assert!(delta % 2 == 0);
        let outcome = ((delta / 2) as u64 + eigen) % p as u64;
        return Ok(MeasurementResult { outcome_exp: outcome as u32, deterministic: true, updated: t.clone() });
    }
    let pivot = anti[0];
    let (pivot_row, pivot_e) = t.rows[pivot].clone();
    let c0 = op.commutation(&pivot_row) as i64;
    let c0_inv = inv_mod(c0 as u32, p) as i64;
    let mut rows = t.rows.clone();
    for &i in &anti[1..] {
        let ci = op.commutation(&rows[i].0) as i64;
        let k = modp(-ci * c0_inv, p) as i64;
        let new_row = rows[i].0.mul(&pivot_row.pow(k))?;
        let new_e = modp(rows[i].1 as i64 + k * pivot_e as i64, p);
        rows[i] = (new_row, new_e);
    }
    let outcome = rng.gen_range(0..p);
    rows[pivot] = (op.clone(), outcome);
    let updated = StabilizerTableau { n: t.n, m: p, rows };
    debug_assert!(updated.rows.iter().all(|(r, _)| r.commutes(op)));
    Ok(MeasurementResult { outcome_exp: outcome, deterministic: false, updated })
}

pub(crate) fn rank_mod_p(mut rows: Vec<Vec<u32>>, p: u32) -> usize {
    let cols = rows.first().map_or(0, |r| r.len());
    let mut rank = 0;
    for c in 0..cols {
        let Some(piv) = (rank..rows.len()).find(|&r| rows[r][c] % p != 0) else { continue };
        rows.swap(rank, piv);
        let inv = inv_mod(rows[rank][c] % p, p) as u64;
        for r in 0..rows.len() {
            if r != rank && rows[r][c] % p != 0 {
                let f = rows[r][c] as u64 * inv % p as u64;
                for k in 0..cols {
                    let sub = f * rows[rank][k] as u64 % p as u64;
                    rows[r][k] = ((rows[r][k] as u64 + p as u64 - sub) % p as u64) as u32;
                }
            }
        }
        rank += 1;
    }
    rank
}

/// Coefficients `c` with `sum_r c_r vecs[r] = target` over `F_p`, if any.
pub(crate) fn solve_combination_mod_p(vecs: &[Vec<u32>], target: &[u32], p: u32) -> Option<Vec<u32>> {
    let nv = vecs.len();
    let len = target.len();
    let pp = p as u64;
    // augmented system: one equation per coordinate
    let mut a: Vec<Vec<u64>> = (0..len)
        .map(|k| {
            let mut row: Vec<u64> = vecs.iter().map(|v| v[k] as u64 % pp).collect();
            row.push(target[k] as u64 % pp);
            row
        })
        .collect();
    let mut pivots = Vec::new();
    let mut r = 0;
    for c in 0..nv {
        let Some(piv) = (r..len).find(|&i| a[i][c] != 0) else { continue };
        a.swap(r, piv);
        let inv = inv_mod(a[r][c] as u32, p) as u64;
        for k in 0..=nv {
            a[r][k] = a[r][k] * inv % pp;
        }
        for i in 0..len {
            if i != r && a[i][c] != 0 {
                let f = a[i][c];
                for k in 0..=nv {
                    a[i][k] = (a[i][k] + pp * pp - f * a[r][k]) % pp;
                }
            }
        }
        pivots.push(c);
        r += 1;
    }
    if a[r..].iter().any(|row| row[nv] != 0) {
        return None;
    }
    let mut sol = vec![0u32; nv];
    for (i, &c) in pivots.iter().enumerate() {
        sol[c] = a[i][nv] as u32;
    }
    Some(sol)
}
