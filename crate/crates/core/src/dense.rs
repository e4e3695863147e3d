//! Dense matrices for the R-matrices and their braid representations.
//!
//! Everything here is the brute-force oracle: operators are stored as full
//! row-major complex matrices and local gates are applied block by block, so
//! the cost of one generator is `dim^2 * local_dim` rather than a full
//! matrix product.

use std::collections::HashMap;
use std::fmt;
use std::str::FromStr;

use num_complex::Complex;
use num_traits::{One, Zero};
use serde::{Deserialize, Serialize};

use crate::arith::check_odd_modulus;
use crate::braid::BraidWord;
use crate::error::{Error, Result};
use crate::pauli::PauliString;
use crate::scalar::Real;

/// Largest dimension accepted by [`enumerate_image_group`].
pub const MAX_ENUMERATION_DIM: usize = 4096;
/// Largest carrier dimension for dense braid matrices and state vectors.
pub const MAX_DENSE_DIM: usize = 4096;

#[derive(Debug, Clone, PartialEq)]
pub struct DenseOperator<T: Real> {
    dim: usize,
    data: Vec<Complex<T>>,
}

impl<T: Real> DenseOperator<T> {
    pub fn zeros(dim: usize) -> Self {
        DenseOperator { dim, data: vec![Complex::zero(); dim * dim] }
    }

    pub fn identity(dim: usize) -> Self {
        let mut out = Self::zeros(dim);
        for i in 0..dim {
            out.data[i * dim + i] = Complex::one();
        }
        out
    }

    pub fn from_rows(rows: Vec<Vec<Complex<T>>>) -> Result<Self> {
        let dim = rows.len();
        if rows.iter().any(|r| r.len() != dim) {
            return Err(Error::Mismatch("matrix rows must all have length equal to the row count".into()));
        }
        Ok(DenseOperator { dim, data: rows.into_iter().flatten().collect() })
    }

    pub fn from_fn(dim: usize, mut f: impl FnMut(usize, usize) -> Complex<T>) -> Self {
        let mut data = Vec::with_capacity(dim * dim);
        for r in 0..dim {
            for c in 0..dim {
                data.push(f(r, c));
            }
        }
        DenseOperator { dim, data }
    }

    /// Diagonal matrix.
    pub fn diagonal(entries: &[Complex<T>]) -> Self {
        let mut out = Self::zeros(entries.len());
        for (i, e) in entries.iter().enumerate() {
            out.set(i, i, *e);
        }
        out
    }

    pub fn dim(&self) -> usize {
        self.dim
    }

    #[inline]
    pub fn get(&self, r: usize, c: usize) -> Complex<T> {
        self.data[r * self.dim + c]
    }

    #[inline]
    pub fn set(&mut self, r: usize, c: usize, v: Complex<T>) {
        self.data[r * self.dim + c] = v;
    }

    pub fn entries(&self) -> &[Complex<T>] {
        &self.data
    }

    pub fn mul(&self, other: &Self) -> Self {
        assert_eq!(self.dim, other.dim, "dimension mismatch in product");
        let n = self.dim;
        let mut out = Self::zeros(n);
        for r in 0..n {
            for k in 0..n {
                let a = self.data[r * n + k];
                if a.is_zero() {
                    continue;
                }
                let row = &other.data[k * n..(k + 1) * n];
                let dst = &mut out.data[r * n..(r + 1) * n];
                for (d, b) in dst.iter_mut().zip(row) {
                    *d = *d + a * b;
                }
            }
        }
        out
    }

    pub fn mul_vec(&self, v: &[Complex<T>]) -> Vec<Complex<T>> {
        let n = self.dim;
        (0..n)
            .map(|r| {
                self.data[r * n..(r + 1) * n]
                    .iter()
                    .zip(v)
                    .fold(Complex::zero(), |acc, (a, b)| acc + a * b)
            })
            .collect()
    }

    pub fn adjoint(&self) -> Self {
        let n = self.dim;
        Self::from_fn(n, |r, c| self.data[c * n + r].conj())
    }

    pub fn add(&self, other: &Self) -> Self {
        self.zip_with(other, |a, b| a + b)
    }

    pub fn sub(&self, other: &Self) -> Self {
        self.zip_with(other, |a, b| a - b)
    }

    fn zip_with(&self, other: &Self, f: impl Fn(Complex<T>, Complex<T>) -> Complex<T>) -> Self {
        assert_eq!(self.dim, other.dim, "dimension mismatch");
        DenseOperator {
            dim: self.dim,
            data: self.data.iter().zip(&other.data).map(|(a, b)| f(*a, *b)).collect(),
        }
    }

    pub fn scale(&self, s: Complex<T>) -> Self {
        DenseOperator { dim: self.dim, data: self.data.iter().map(|a| a * s).collect() }
    }

    pub fn kron(&self, other: &Self) -> Self {
        let (n, m) = (self.dim, other.dim);
        Self::from_fn(n * m, |r, c| self.get(r / m, c / m) * other.get(r % m, c % m))
    }

    pub fn power(&self, k: u32) -> Self {
        let mut acc = Self::identity(self.dim);
        let mut base = self.clone();
        let mut k = k;
        while k > 0 {
            if k & 1 == 1 {
                acc = acc.mul(&base);
            }
            base = base.mul(&base);
            k >>= 1;
        }
        acc
    }

    pub fn trace(&self) -> Complex<T> {
        (0..self.dim).fold(Complex::zero(), |acc, i| acc + self.get(i, i))
    }

    pub fn frobenius(&self) -> T {
        self.data.iter().fold(T::zero(), |acc, a| acc + a.norm_sqr()).sqrt()
    }

    pub fn max_abs(&self) -> T {
        self.data.iter().fold(T::zero(), |acc, a| acc.max(a.norm()))
    }

    /// Spectral norm by power iteration on `A^dagger A`.
    pub fn op_norm(&self) -> T {
        let n = self.dim;
        let fro = self.frobenius();
        if fro == T::zero() {
            return T::zero();
        }
        let scaled = self.scale(Complex::new(T::one() / fro, T::zero()));
        let adj = scaled.adjoint();
        let mut v: Vec<Complex<T>> = (0..n)
            .map(|k| {
                let k = T::lit(k as f64 + 1.0);
                Complex::new((k * T::lit(0.37)).cos() + T::lit(1.1), (k * T::lit(0.71)).sin())
            })
            .collect();
        let mut est = T::zero();
        for _ in 0..500 {
            let w = adj.mul_vec(&scaled.mul_vec(&v));
            let norm = w.iter().fold(T::zero(), |acc, a| acc + a.norm_sqr()).sqrt();
            if norm == T::zero() {
                return T::zero();
            }
            v = w.into_iter().map(|a| a / norm).collect();
            let converged = (norm - est).abs() <= T::epsilon() * T::lit(16.0) * norm;
            est = norm;
            if converged {
                break;
            }
        }
        est.sqrt() * fro
    }

    pub fn is_unitary(&self, tol: T) -> bool {
        self.adjoint().mul(self).sub(&Self::identity(self.dim)).op_norm() <= tol
    }

    /// `min_phi |A - e^{i phi} B|` with the phase fixed by `tr(B^dagger A)`.
    pub fn distance_up_to_phase(&self, other: &Self) -> T {
        let overlap = other
            .data
            .iter()
            .zip(&self.data)
            .fold(Complex::zero(), |acc: Complex<T>, (b, a)| acc + b.conj() * a);
        let phase = if overlap.norm() > T::epsilon() {
            overlap / overlap.norm()
        } else {
            Complex::one()
        };
        self.sub(&other.scale(phase)).op_norm()
    }

    /// Largest entry of `A - e^{i phi} B`, with the same phase as
    /// [`Self::distance_up_to_phase`].
    pub fn max_abs_up_to_phase(&self, other: &Self) -> T {
        let overlap = other
            .data
            .iter()
            .zip(&self.data)
            .fold(Complex::zero(), |acc: Complex<T>, (b, a)| acc + b.conj() * a);
        let phase = if overlap.norm() > T::epsilon() {
            overlap / overlap.norm()
        } else {
            Complex::one()
        };
        self.data.iter().zip(&other.data).fold(T::zero(), |acc, (a, b)| acc.max((a - b * phase).norm()))
    }

    /// Multiply on the left by `gate` acting on `k` consecutive sites of
    /// dimension `site_dim`, starting at `first` (0-indexed) among `sites`.
    pub fn apply_local_left(&mut self, gate: &Self, site_dim: usize, sites: usize, first: usize) {
        let blocks = local_blocks(site_dim, sites, first, gate.dim);
        let n = self.dim;
        let mut buf = vec![Complex::zero(); gate.dim * n];
        for block in &blocks {
            buf.iter_mut().for_each(|b| *b = Complex::zero());
            for a in 0..block.len() {
                for (b, &rb) in block.iter().enumerate() {
                    let g = gate.get(a, b);
                    if g.is_zero() {
                        continue;
                    }
                    let src = &self.data[rb * n..(rb + 1) * n];
                    let dst = &mut buf[a * n..(a + 1) * n];
                    for (d, s) in dst.iter_mut().zip(src) {
                        *d = *d + g * s;
                    }
                }
            }
            for (a, &ra) in block.iter().enumerate() {
                self.data[ra * n..(ra + 1) * n].copy_from_slice(&buf[a * n..(a + 1) * n]);
            }
        }
    }

    /// Multiply on the right by the embedded `gate`.
    pub fn apply_local_right(&mut self, gate: &Self, site_dim: usize, sites: usize, first: usize) {
        let blocks = local_blocks(site_dim, sites, first, gate.dim);
        let n = self.dim;
        let d = gate.dim;
        let mut old = vec![Complex::zero(); d];
        for r in 0..n {
            let row = &mut self.data[r * n..(r + 1) * n];
            for block in &blocks {
                for (b, &cb) in block.iter().enumerate() {
                    old[b] = row[cb];
                }
                for (a, &ca) in block.iter().enumerate() {
                    row[ca] = (0..d).fold(Complex::zero(), |acc, b| acc + old[b] * gate.get(b, a));
                }
            }
        }
    }

    /// Embed a local gate into the full register.
    pub fn embed(gate: &Self, site_dim: usize, sites: usize, first: usize) -> Self {
        let mut out = Self::identity(site_dim.pow(sites as u32));
        out.apply_local_left(gate, site_dim, sites, first);
        out
    }

    /// Phase-fixed, rounded fingerprint used for projective group closure.
    fn projective_key(&self) -> Vec<i64> {
        let tol = T::lit(1e-6);
        let lead = self.data.iter().find(|a| a.norm() > tol).copied().unwrap_or(Complex::one());
        let fix = lead.conj() / lead.norm();
        let mut key = Vec::with_capacity(2 * self.data.len());
        for a in &self.data {
            let z = a * fix;
            for part in [z.re, z.im] {
                let v = (part.to_f64().unwrap_or(0.0) * 1e6).round() as i64;
                key.push(v);
            }
        }
        key
    }
}

impl<T: Real> fmt::Display for DenseOperator<T> {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        for r in 0..self.dim {
            let row: Vec<String> = (0..self.dim)
                .map(|c| {
                    let z = self.get(r, c);
                    format!("{:+.4}{:+.4}i", z.re, z.im)
                })
                .collect();
            writeln!(f, "{}", row.join(" "))?;
        }
        Ok(())
    }
}

/// Index groups touched by a gate of dimension `gate_dim` on sites
/// `first..first+k`; each inner vector lists the `gate_dim` full indices in
/// local-basis order.
fn local_blocks(site_dim: usize, sites: usize, first: usize, gate_dim: usize) -> Vec<Vec<usize>> {
    let mut k = 0;
    let mut span = 1;
    while span < gate_dim {
        span *= site_dim;
        k += 1;
    }
    assert_eq!(span, gate_dim, "gate dimension is not a power of the site dimension");
    assert!(first + k <= sites, "gate window exceeds the register");
    let low = site_dim.pow((sites - first - k) as u32);
    let high = site_dim.pow(first as u32);
    let mut blocks = Vec::with_capacity(high * low);
    for hi in 0..high {
        for lo in 0..low {
            blocks.push((0..gate_dim).map(|loc| (hi * gate_dim + loc) * low + lo).collect());
        }
    }
    blocks
}

/// Apply an embedded local gate to a state vector in place.
pub fn apply_local_to_state<T: Real>(
    state: &mut [Complex<T>],
    gate: &DenseOperator<T>,
    site_dim: usize,
    sites: usize,
    first: usize,
) {
    let d = gate.dim();
    let mut old = vec![Complex::zero(); d];
    for block in local_blocks(site_dim, sites, first, d) {
        for (b, &i) in block.iter().enumerate() {
            old[b] = state[i];
        }
        for (a, &i) in block.iter().enumerate() {
            state[i] = (0..d).fold(Complex::zero(), |acc, b| acc + gate.get(a, b) * old[b]);
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub enum RMatrixKind {
    GaussianXe(u32),
    Potts(u32),
    Y1(u32),
    IsingBell,
}

impl RMatrixKind {
    /// Number of sites one generator acts on.
    pub fn locality(&self) -> usize {
        match self {
            RMatrixKind::Y1(_) => 3,
            _ => 2,
        }
    }

    pub fn site_dim(&self) -> usize {
        match self {
            RMatrixKind::GaussianXe(m) | RMatrixKind::Potts(m) => *m as usize,
            _ => 2,
        }
    }

    /// Register size for a braid on `strands` strands.
    pub fn sites(&self, strands: usize) -> usize {
        match self {
            RMatrixKind::Y1(_) => strands + 1,
            _ => strands,
        }
    }

    pub fn validate(&self) -> Result<()> {
        match self {
            RMatrixKind::GaussianXe(m) | RMatrixKind::Potts(m) | RMatrixKind::Y1(m) => check_odd_modulus(*m),
            RMatrixKind::IsingBell => Ok(()),
        }
    }

    pub fn carrier_dim(&self, strands: usize) -> usize {
        self.site_dim().pow(self.sites(strands) as u32)
    }
}

impl fmt::Display for RMatrixKind {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            RMatrixKind::GaussianXe(m) => write!(f, "gaussian:{m}"),
            RMatrixKind::Potts(m) => write!(f, "potts:{m}"),
            RMatrixKind::Y1(m) => write!(f, "y1:{m}"),
            RMatrixKind::IsingBell => write!(f, "ising"),
        }
    }
}

impl FromStr for RMatrixKind {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        let (name, m) = match s.split_once(':') {
            Some((n, m)) => {
                let m = m.trim().parse::<u32>().map_err(|_| Error::Invalid(format!("bad modulus in `{s}`")))?;
                (n.trim().to_ascii_lowercase(), Some(m))
            }
            None => (s.trim().to_ascii_lowercase(), None),
        };
        let need = |m: Option<u32>| m.ok_or_else(|| Error::Invalid(format!("`{s}` needs a modulus, e.g. {name}:3")));
        let kind = match name.as_str() {
            "gaussian" | "xe" => RMatrixKind::GaussianXe(need(m)?),
            "potts" => RMatrixKind::Potts(need(m)?),
            "y1" => RMatrixKind::Y1(need(m)?),
            "ising" | "bell" => RMatrixKind::IsingBell,
            _ => return Err(Error::Invalid(format!("unknown R-matrix kind `{s}`"))),
        };
        kind.validate()?;
        Ok(kind)
    }
}

fn c<T: Real>(re: f64, im: f64) -> Complex<T> {
    Complex::new(T::lit(re), T::lit(im))
}

/// Two-qudit shift-clock operator with `U(e_i (x) e_j) = w^{i-j} e_{i+1} (x) e_{j+1}`.
pub fn two_site_u<T: Real>(m: u32) -> DenseOperator<T> {
    let m = m as usize;
    let mut u = DenseOperator::zeros(m * m);
    for i in 0..m {
        for j in 0..m {
            let phase = T::root_of_unity(2 * (i as i64 - j as i64), m as i64);
            u.set(((i + 1) % m) * m + (j + 1) % m, i * m + j, phase);
        }
    }
    u
}

/// `(1/m) sum_j U^j`, the projector onto the `U = 1` eigenspace.
fn u_projector<T: Real>(m: u32) -> DenseOperator<T> {
    let u = two_site_u::<T>(m);
    let mut acc = DenseOperator::zeros((m * m) as usize);
    let mut p = DenseOperator::identity((m * m) as usize);
    for _ in 0..m {
        acc = acc.add(&p);
        p = p.mul(&u);
    }
    acc.scale(Complex::new(T::one() / T::lit(m as f64), T::zero()))
}

/// The parameter `t` of the Potts matrix, a root of `t + 1/t + 2 = m`.
///
/// For `m = 3` the roots are `e^{+-i pi/3}` and `e^{-i pi/3}` is returned.
/// For `m >= 5` both roots are real and the larger one is returned.
pub fn potts_parameter<T: Real>(m: u32) -> Complex<T> {
    let b = T::lit(m as f64 - 2.0);
    let disc = b * b - T::lit(4.0);
    if disc < T::zero() {
        Complex::new(b / T::lit(2.0), -(-disc).sqrt() / T::lit(2.0))
    } else {
        Complex::new((b + disc.sqrt()) / T::lit(2.0), T::zero())
    }
}

fn potts_with<T: Real>(m: u32, t: Complex<T>) -> DenseOperator<T> {
    let dim = (m * m) as usize;
    u_projector::<T>(m).scale(t + Complex::one()).sub(&DenseOperator::identity(dim))
}

/// The `8 x 8` qubit R-matrix for `Y_1`, basis index `4 x1 + 2 x2 + x3`,
/// with an explicit choice of `nu`.
pub fn y1_matrix_with_nu<T: Real>(m: u32, nu: i32) -> DenseOperator<T> {
    let angle = std::f64::consts::PI / m as f64;
    let (cs, sn) = (angle.cos(), angle.sin());
    let nu = nu as f64;
    let z = c::<T>(0.0, 0.0);
    let a: [[Complex<T>; 4]; 4] = [
        [c(nu * cs, 0.0), z, c(0.0, sn), z],
        [z, c(0.0, -sn), z, c(cs, 0.0)],
        [c(0.0, sn), z, c(nu * cs, 0.0), z],
        [z, c(cs, 0.0), z, c(0.0, -sn)],
    ];
    let b: [[Complex<T>; 4]; 4] = [
        [c(0.0, -sn), z, c(cs, 0.0), z],
        [z, c(nu * cs, 0.0), z, c(0.0, sn)],
        [c(cs, 0.0), z, c(0.0, -sn), z],
        [z, c(0.0, sn), z, c(nu * cs, 0.0)],
    ];
    let mut out = DenseOperator::zeros(8);
    for r in 0..4 {
        for k in 0..4 {
            out.set(r, k, a[r][k]);
            out.set(4 + r, 4 + k, b[r][k]);
        }
    }
    out
}

/// `nu = -1` for `m = 3` and `+1` otherwise.
pub fn y1_nu(m: u32) -> i32 {
    if m == 3 {
        -1
    } else {
        1
    }
}

pub fn build_r_matrix<T: Real>(kind: RMatrixKind) -> Result<DenseOperator<T>> {
    kind.validate()?;
    Ok(match kind {
        RMatrixKind::GaussianXe(m) => {
            let u = two_site_u::<T>(m);
            let dim = (m * m) as usize;
            let mut acc = DenseOperator::zeros(dim);
            let mut p = DenseOperator::identity(dim);
            for j in 0..m as i64 {
                acc = acc.add(&p.scale(T::root_of_unity(2 * j * j, m as i64)));
                p = p.mul(&u);
            }
            acc.scale(Complex::new(T::one() / T::lit(m as f64).sqrt(), T::zero()))
        }
        RMatrixKind::Potts(m) => potts_with(m, potts_parameter::<T>(m)),
        RMatrixKind::Y1(m) => y1_matrix_with_nu(m, y1_nu(m)),
        RMatrixKind::IsingBell => {
            let h = 1.0 / 2f64.sqrt();
            let rows = [[h, 0.0, 0.0, h], [0.0, h, -h, 0.0], [0.0, h, h, 0.0], [-h, 0.0, 0.0, h]];
            DenseOperator::from_rows(rows.iter().map(|r| r.iter().map(|&v| c(v, 0.0)).collect()).collect())?
        }
    })
}

/// Matrix for an inverse letter: the adjoint, or the exact inverse
/// `(1/t + 1) P - 1` for the Potts matrix, which is not unitary once `t`
/// is real.
pub fn build_r_inverse<T: Real>(kind: RMatrixKind) -> Result<DenseOperator<T>> {
    match kind {
        RMatrixKind::Potts(m) => {
            kind.validate()?;
            let t = potts_parameter::<T>(m);
            Ok(potts_with(m, Complex::<T>::one() / t))
        }
        _ => Ok(build_r_matrix::<T>(kind)?.adjoint()),
    }
}

fn check_strands(kind: RMatrixKind, strands: usize) -> Result<()> {
    if strands < 2 {
        return Err(Error::Mismatch(format!("{kind} needs at least 2 strands, got {strands}")));
    }
    let dim = kind.site_dim().checked_pow(kind.sites(strands) as u32).unwrap_or(usize::MAX);
    if dim > MAX_DENSE_DIM {
        return Err(Error::Refused(format!("{kind} on {strands} strands needs dimension {dim} > {MAX_DENSE_DIM}")));
    }
    Ok(())
}

/// `rho(b)`: product of the per-generator operators in word order.
pub fn represent_braid<T: Real>(b: &BraidWord, kind: RMatrixKind) -> Result<DenseOperator<T>> {
    check_strands(kind, b.strands())?;
    let r = build_r_matrix::<T>(kind)?;
    let r_inv = build_r_inverse::<T>(kind)?;
    let sites = kind.sites(b.strands());
    let mut out = DenseOperator::identity(kind.carrier_dim(b.strands()));
    for &g in b.letters() {
        let gate = if g > 0 { &r } else { &r_inv };
        out.apply_local_right(gate, kind.site_dim(), sites, g.unsigned_abs() as usize - 1);
    }
    Ok(out)
}

/// `rho(b) |psi>` without forming `rho(b)`.
pub fn apply_braid_to_state<T: Real>(b: &BraidWord, kind: RMatrixKind, state: &mut [Complex<T>]) -> Result<()> {
    check_strands(kind, b.strands())?;
    if state.len() != kind.carrier_dim(b.strands()) {
        return Err(Error::Mismatch(format!(
            "state of length {} for a carrier of dimension {}",
            state.len(),
            kind.carrier_dim(b.strands())
        )));
    }
    let r = build_r_matrix::<T>(kind)?;
    let r_inv = build_r_inverse::<T>(kind)?;
    let sites = kind.sites(b.strands());
    // the rightmost letter acts first on a ket
    for &g in b.letters().iter().rev() {
        let gate = if g > 0 { &r } else { &r_inv };
        apply_local_to_state(state, gate, kind.site_dim(), sites, g.unsigned_abs() as usize - 1);
    }
    Ok(())
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct BraidRelationReport {
    pub yang_baxter_residual: f64,
    pub far_commutation_residual: f64,
}

pub fn check_braid_relations<T: Real>(kind: RMatrixKind, n: usize) -> Result<BraidRelationReport> {
    let r = build_r_matrix::<T>(kind)?;
    if n < 3 {
        return Err(Error::Mismatch(format!("braid relations need at least 3 strands, got {n}")));
    }
    Ok(check_relations_for(&r, kind.site_dim(), kind.sites(n), n - 1))
}

/// Braid-relation residuals for an arbitrary local matrix placed at windows
/// `0..generators` of a `sites`-site register.
pub fn check_relations_for<T: Real>(
    r: &DenseOperator<T>,
    site_dim: usize,
    sites: usize,
    generators: usize,
) -> BraidRelationReport {
    let dim = site_dim.pow(sites as u32);
    let gen = |i: usize| DenseOperator::embed(r, site_dim, sites, i);
    let mut yb = T::zero();
    let mut far = T::zero();
    let embedded: Vec<_> = (0..generators).map(gen).collect();
    assert!(embedded.iter().all(|e| e.dim() == dim));
    for i in 0..generators {
        if i + 1 < generators {
            let (a, b) = (&embedded[i], &embedded[i + 1]);
            let lhs = a.mul(b).mul(a);
            let rhs = b.mul(a).mul(b);
            yb = yb.max(lhs.sub(&rhs).op_norm());
        }
        for j in i + 2..generators {
            let (a, b) = (&embedded[i], &embedded[j]);
            far = far.max(a.mul(b).sub(&b.mul(a)).op_norm());
        }
    }
    BraidRelationReport {
        yang_baxter_residual: yb.to_f64().unwrap_or(f64::NAN),
        far_commutation_residual: far.to_f64().unwrap_or(f64::NAN),
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub struct ImageGroup {
    pub order_up_to_phase: usize,
    pub terminated: bool,
}

/// Breadth-first closure of the projective image of `B_n` under `kind`.
///
/// Elements are identified up to a global phase: the first entry of modulus
/// above `1e-6` is rotated to the positive real axis and the result is rounded
/// to six decimals. Keys that collide are re-checked at `1e-9`.
pub fn enumerate_image_group(kind: RMatrixKind, n: usize, max_order: usize) -> Result<ImageGroup> {
    check_strands(kind, n)?;
    let dim = kind.carrier_dim(n);
    if dim > MAX_ENUMERATION_DIM {
        return Err(Error::Refused(format!(
            "image enumeration of {kind} on {n} strands needs dimension {dim} > {MAX_ENUMERATION_DIM}"
        )));
    }
    let r = build_r_matrix::<f64>(kind)?;
    let r_inv = build_r_inverse::<f64>(kind)?;
    let sites = kind.sites(n);
    let id = DenseOperator::<f64>::identity(dim);
    let mut seen: HashMap<Vec<i64>, DenseOperator<f64>> = HashMap::new();
    seen.insert(id.projective_key(), id.clone());
    if max_order < 1 {
        return Ok(ImageGroup { order_up_to_phase: 0, terminated: false });
    }
    let mut frontier = vec![id];
    while !frontier.is_empty() {
        let mut next = Vec::new();
        for a in &frontier {
            for i in 0..n - 1 {
                for gate in [&r, &r_inv] {
                    let mut b = a.clone();
                    b.apply_local_right(gate, kind.site_dim(), sites, i);
                    let key = b.projective_key();
                    match seen.get(&key) {
                        Some(old) => {
                            debug_assert!(old.max_abs_up_to_phase(&b) < 1e-9, "rounding collision");
                        }
                        None => {
                            if seen.len() >= max_order {
                                return Ok(ImageGroup { order_up_to_phase: seen.len(), terminated: false });
                            }
                            seen.insert(key, b.clone());
                            next.push(b);
                        }
                    }
                }
            }
        }
        frontier = next;
    }
    Ok(ImageGroup { order_up_to_phase: seen.len(), terminated: true })
}

/// If `u P u^dagger` is a single Pauli string with phase in `{+-1, +-i}`,
/// return it.
pub fn conjugate_to_pauli<T: Real>(u: &DenseOperator<T>, p: &PauliString) -> Option<PauliString> {
    let q = p.qubits();
    if q > 6 || u.dim() != 1 << q {
        return None;
    }
    let target = u.mul(&p.dense::<T>()).mul(&u.adjoint());
    let tol = T::lit(1e-9);
    for x in 0..1u64 << q {
        for z in 0..1u64 << q {
            let cand = PauliString::from_masks(q, x, z, 0);
            let coeff = cand.dense::<T>().adjoint().mul(&target).trace() / T::lit((1u64 << q) as f64);
            if coeff.norm() < tol {
                continue;
            }
            for k in 0..4u8 {
                let ph = T::root_of_unity(k as i64, 2);
                if (coeff - ph).norm() < tol {
                    return Some(cand.with_phase(k));
                }
            }
            return None;
        }
    }
    None
}
