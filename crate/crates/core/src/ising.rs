//! Ising partition functions and their encoding as link invariants.
//!
//! A coupling matrix `J` is compiled into a link whose sublink state sum
//! `E(L)` equals `Z(J, y)` times an explicit prefactor, with
//! `y = cos(4 pi d / m)`.

use num_complex::Complex;
use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use num_bigint::BigInt;
use num_rational::BigRational;

use crate::arith::check_odd_modulus;
use crate::cyclotomic::CyclotomicValue;
use crate::braid::{BraidWord, LinkingMatrix};
use crate::error::{Error, Result};
use crate::invariants::lm_state_sum;
use crate::scalar::Weight;

/// Largest spin count for exhaustive sums.
pub const MAX_SPINS: usize = 30;
/// Largest vertex count for max-cut recovery.
pub const MAX_CUT_VERTICES: usize = 16;
/// Largest spin count in the sign regime.
pub const MAX_SIGN_SPINS: usize = 24;

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct CouplingMatrix {
    #[serde(rename = "N")]
    n: usize,
    #[serde(rename = "J")]
    j: Vec<Vec<i64>>,
}

impl CouplingMatrix {
    pub fn new(j: Vec<Vec<i64>>) -> Result<Self> {
        let n = j.len();
        for (a, row) in j.iter().enumerate() {
            if row.len() != n {
                return Err(Error::Invalid("coupling matrix must be square".into()));
            }
            if row[a] != 0 {
                return Err(Error::Invalid("coupling matrix must have zero diagonal".into()));
            }
            for b in 0..n {
                if j[b][a] != row[b] {
                    return Err(Error::Invalid(format!("coupling matrix is not symmetric at ({}, {})", a + 1, b + 1)));
                }
            }
        }
        Ok(CouplingMatrix { n, j })
    }

    /// Re-validate after deserialization.
    pub fn validated(self) -> Result<Self> {
        let n = self.n;
        let out = Self::new(self.j)?;
        if out.n != n {
            return Err(Error::Invalid(format!("N = {n} but J has {} rows", out.n)));
        }
        Ok(out)
    }

    pub fn zero(n: usize) -> Self {
        CouplingMatrix { n, j: vec![vec![0; n]; n] }
    }

    /// `scale` times a 0/1 adjacency matrix.
    pub fn from_graph(adjacency: &[Vec<u8>], scale: i64) -> Result<Self> {
        Self::new(adjacency.iter().map(|r| r.iter().map(|&e| e as i64 * scale).collect()).collect())
    }

    pub fn n(&self) -> usize {
        self.n
    }

    pub fn get(&self, a: usize, b: usize) -> i64 {
        self.j[a][b]
    }

    pub fn entries(&self) -> &[Vec<i64>] {
        &self.j
    }

    /// Sum of the positive entries of the full matrix.
    pub fn p(&self) -> i64 {
        self.j.iter().flatten().filter(|&&v| v > 0).sum()
    }

    /// Sum of the absolute values of the full matrix entries.
    pub fn a(&self) -> i64 {
        self.j.iter().flatten().map(|v| v.abs()).sum()
    }

    /// `sum_{i<j} J_ij`.
    pub fn upper_sum(&self) -> i64 {
        self.pairs().map(|(a, b)| self.j[a][b]).sum()
    }

    fn pairs(&self) -> impl Iterator<Item = (usize, usize)> + '_ {
        (0..self.n).flat_map(move |a| (a + 1..self.n).map(move |b| (a, b)))
    }
}

/// `m`, the power `d`, and `y = (a^{-4d} + a^{4d}) / 2` for
/// `a = -i e^{-i pi/m}`.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct IsingParams {
    pub m: u32,
    pub d: u32,
    pub y: f64,
}

impl IsingParams {
    pub fn new(m: u32, d: u32) -> Result<Self> {
        check_odd_modulus(m)?;
        if d == 0 {
            return Err(Error::Invalid("power d must be at least 1".into()));
        }
        let a4d = a_value(m).powi(4 * d as i32);
        let y = ((a4d.inv() + a4d) / 2.0).re;
        let closed = (4.0 * std::f64::consts::PI * d as f64 / m as f64).cos();
        debug_assert!((y - closed).abs() < 1e-12);
        Ok(IsingParams { m, d, y: closed })
    }

    /// Smallest `d` in `1..m` with `y` of the requested sign and `|y| < 1`.
    pub fn search(m: u32, positive: bool) -> Result<Self> {
        check_odd_modulus(m)?;
        for d in 1..m {
            let p = Self::new(m, d)?;
            if p.y.abs() < 1.0 - 1e-12 && (p.y > 0.0) == positive {
                return Ok(p);
            }
        }
        Err(Error::WrongRegime(format!(
            "no power d gives a {} y for m = {m}",
            if positive { "positive" } else { "negative" }
        )))
    }

    /// `a = -i e^{-i pi/m}`.
    pub fn a(&self) -> Complex<f64> {
        a_value(self.m)
    }

    /// `z = 2 (a^{-4d} + a^{4d}) = 4y`.
    pub fn z(&self) -> f64 {
        4.0 * self.y
    }
}

fn a_value(m: u32) -> Complex<f64> {
    Complex::new(0.0, -1.0) * Complex::from_polar(1.0, -std::f64::consts::PI / m as f64)
}

/// Histogram of `sum_{i<j} J_ij delta(s_i, s_j)` over all spin vectors, as
/// `(minimum exponent, counts)`. Enumerated in Gray-code order inside
/// fixed chunks.
pub fn energy_histogram(j: &CouplingMatrix) -> Result<(i64, Vec<u64>)> {
    let n = j.n;
    if n > MAX_SPINS {
        return Err(Error::Refused(format!("{n} spins exceed the exhaustive limit of {MAX_SPINS}")));
    }
    let lo: i64 = j.pairs().map(|(a, b)| j.j[a][b].min(0)).sum();
    let hi: i64 = j.pairs().map(|(a, b)| j.j[a][b].max(0)).sum();
    let width = (hi - lo + 1) as usize;
    if n == 0 {
        let mut h = vec![0u64; width];
        h[0] = 1;
        return Ok((lo, h));
    }
    let top = n.min(6);
    let low = n - top;
    let chunks: Vec<Vec<u64>> = (0..1u64 << top)
        .into_par_iter()
        .map(|prefix| {
            let mut hist = vec![0u64; width];
            let mut spin = vec![false; n];
            for b in 0..top {
                spin[low + b] = prefix >> b & 1 == 1;
            }
            let mut e: i64 = j.pairs().filter(|&(a, b)| spin[a] == spin[b]).map(|(a, b)| j.j[a][b]).sum();
            hist[(e - lo) as usize] += 1;
            for step in 1..1u64 << low {
                let k = step.trailing_zeros() as usize;
                for other in 0..n {
                    if other != k {
                        if spin[other] == spin[k] {
                            e -= j.j[k][other];
                        } else {
                            e += j.j[k][other];
                        }
                    }
                }
                spin[k] = !spin[k];
                hist[(e - lo) as usize] += 1;
            }
            hist
        })
        .collect();
    let mut total = vec![0u64; width];
    for h in chunks {
        total.iter_mut().zip(h).for_each(|(t, v)| *t += v);
    }
    Ok((lo, total))
}

/// `Z(J, y) = sum_s y^{sum_{i<j} J_ij delta(s_i, s_j)}`.
pub fn z_partition<W: Weight>(j: &CouplingMatrix, y: W) -> Result<W> {
    let (lo, hist) = energy_histogram(j)?;
    if lo < 0 && y.is_zero() {
        return Err(Error::Invalid("negative couplings need y != 0".into()));
    }
    let mut total = W::zero();
    for (k, &c) in hist.iter().enumerate() {
        if c == 0 {
            continue;
        }
        let e = lo + k as i64;
        let mut term = W::one();
        for _ in 0..e.unsigned_abs() {
            term = term * y.clone();
        }
        if e < 0 {
            term = W::one() / term;
        }
        total = total + term * W::from_i64(c as i64);
    }
    Ok(total)
}

/// Output of [`compile_link`].
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct CompiledLink {
    pub lk: LinkingMatrix,
    pub braid: BraidWord,
    /// `(i, j, n, F(i, j, n))`, all 1-indexed.
    pub fmap: Vec<(usize, usize, usize, usize)>,
}

impl CompiledLink {
    pub fn components(&self) -> usize {
        self.lk.components
    }

    /// `F(i, j, n)`, 1-indexed.
    pub fn f(&self, i: usize, j: usize, n: usize) -> Option<usize> {
        self.fmap.iter().find(|t| (t.0, t.1, t.2) == (i, j, n)).map(|t| t.3)
    }

    pub fn to_json(&self) -> CompiledJson {
        CompiledJson {
            components: self.lk.components,
            linking: self.lk.entries.clone(),
            braid: self.braid.to_text(),
            fmap: self.fmap.iter().map(|&(i, j, n, f)| [i, j, n, f]).collect(),
        }
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct CompiledJson {
    pub components: usize,
    pub linking: Vec<Vec<i64>>,
    pub braid: String,
    pub fmap: Vec<[usize; 4]>,
}

/// Build the link of the partition-function construction: one component per
/// spin, `|J_ij|` auxiliary components per pair, presented as a plat braid
/// on `2c` strands.
pub fn compile_link(j: &CouplingMatrix, params: &IsingParams) -> Result<CompiledLink> {
    let n = j.n;
    if n == 0 {
        return Err(Error::Invalid("coupling matrix has no spins".into()));
    }
    let d = params.d as i64;
    let mut fmap = Vec::new();
    let mut next = n;
    for (a, b) in j.pairs() {
        for k in 1..=j.j[a][b].unsigned_abs() as usize {
            next += 1;
            fmap.push((a + 1, b + 1, k, next));
        }
    }
    let c = next;
    let mut lk = LinkingMatrix::zero(c);
    for &(a, b, _, f) in &fmap {
        lk.set(a - 1, f - 1, d);
        lk.set(b - 1, f - 1, d * j.j[a - 1][b - 1].signum());
    }
    let braid = plat_braid(&lk, d)?;
    Ok(CompiledLink { lk, braid, fmap })
}

/// Plat braid on `2c` strands realizing a linking matrix whose entries are
/// multiples of `unit`: for each linked pair `i < j`, carry strand `2i` next
/// to strand `2j-1`, twist, and carry it back.
fn plat_braid(lk: &LinkingMatrix, unit: i64) -> Result<BraidWord> {
    let c = lk.components;
    let mut letters: Vec<i32> = Vec::new();
    for i in 1..=c {
        for jj in i + 1..=c {
            let v = lk.get(i - 1, jj - 1);
            if v == 0 {
                continue;
            }
            let transport: Vec<i32> = (2 * i..=2 * jj - 2).map(|g| g as i32).collect();
            letters.extend(&transport);
            let twist = (2 * jj as i32 - 1) * v.signum() as i32;
            let count = 2 * v.unsigned_abs() as usize;
            debug_assert_eq!(v.abs() % unit.max(1), 0);
            letters.extend(std::iter::repeat(twist).take(count));
            letters.extend(transport.iter().rev().map(|g| -g));
        }
    }
    BraidWord::new(2 * c, letters)
}

/// Residual of `E(L) = Z a^{-2dP} (sqrt y)^{-sum_{i<j} J} (sqrt z)^{A/2}`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct ClaimCheck {
    pub lhs: Complex<f64>,
    pub rhs: Complex<f64>,
    pub residual: f64,
}

pub fn verify_claim(j: &CouplingMatrix, params: &IsingParams) -> Result<ClaimCheck> {
    let link = compile_link(j, params)?;
    let lhs = lm_state_sum(&link.lk, params.m)?.e.eval();
    let rhs = claim_rhs(j, params)?;
    Ok(ClaimCheck { lhs, rhs, residual: (lhs - rhs).norm() })
}

/// Right side of the claim, with `sqrt y` principal and `sqrt z` fixed by
/// `sqrt y * sqrt z = 2y`.
pub fn claim_rhs(j: &CouplingMatrix, params: &IsingParams) -> Result<Complex<f64>> {
    let z = z_partition(j, params.y)?;
    let sqrt_y = Complex::new(params.y, 0.0).sqrt();
    let sqrt_z = Complex::new(2.0 * params.y, 0.0) / sqrt_y;
    let a = params.a();
    let pref = a.powi(-2 * params.d as i32 * j.p() as i32);
    Ok(pref * sqrt_y.powi(-(j.upper_sum() as i32)) * sqrt_z.powi((j.a() / 2) as i32) * z)
}

/// Exact form of the claim in `Q(zeta_{4m})`. Both sides are multiplied by
/// `y^{P/2 - e_min}` so that only non-negative powers of `y` appear; the
/// square roots combine as `(sqrt y)^{-s} (sqrt z)^t = y^{-(s+t)/2} (2y)^t`.
pub fn verify_claim_exact(j: &CouplingMatrix, params: &IsingParams) -> Result<bool> {
    let link = compile_link(j, params)?;
    let e = lm_state_sum(&link.lk, params.m)?.e;
    let order = e.order();
    let zeta_per_pi = order as i64 / 2;
    let m = params.m as i64;
    let d = params.d as i64;
    // a = e^{-i pi (m + 2) / (2m)}
    debug_assert_eq!(order as i64, 4 * m);
    let a = CyclotomicValue::root(order, -(m + 2));
    let half = BigRational::new(BigInt::from(1), BigInt::from(2));
    let y = CyclotomicValue::root(order, 4 * zeta_per_pi * d / m)
        .add(&CyclotomicValue::root(order, -4 * zeta_per_pi * d / m))?
        .scale_rational(&half);
    let (lo, hist) = energy_histogram(j)?;
    let p = j.p();
    let t = j.a() / 2;
    let mut sum = CyclotomicValue::zero(order);
    let mut y_pow = CyclotomicValue::one(order);
    for &c in &hist {
        if c > 0 {
            sum = sum.add(&y_pow.scale_rational(&BigRational::from_integer(BigInt::from(c))))?;
        }
        y_pow = y_pow.mul(&y)?;
    }
    let two_y = y.scale_rational(&BigRational::from_integer(BigInt::from(2)));
    let a_pow = a.pow((2 * d * p) as u32)?.conj();
    let rhs = a_pow.mul(&two_y.pow(t as u32)?)?.mul(&sum)?;
    let lhs = e.mul(&y.pow((p / 2 - lo) as u32)?)?;
    Ok(lhs == rhs)
}

/// Maximum cut size and the number of ordered cuts attaining it.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub struct CutStats {
    pub max_cut: u64,
    pub count: u64,
}

pub fn cut_stats(adjacency: &[Vec<u8>]) -> Result<CutStats> {
    let hist = cut_histogram(adjacency)?;
    let max_cut = hist.iter().rposition(|&c| c > 0).unwrap_or(0);
    Ok(CutStats { max_cut: max_cut as u64, count: hist[max_cut] })
}

/// Number of ordered cuts of each size.
pub fn cut_histogram(adjacency: &[Vec<u8>]) -> Result<Vec<u64>> {
    let g = CouplingMatrix::from_graph(adjacency, 1)?;
    let (lo, hist) = energy_histogram(&g)?;
    debug_assert_eq!(lo, 0);
    // the energy counts uncut edges
    let edges = hist.len() - 1;
    Ok((0..=edges).map(|cut| hist[edges - cut]).collect())
}

/// Result of [`maxcut_recover`].
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct Recovery {
    pub stats: CutStats,
    pub k: u64,
    /// Recovery from `Z/(1+eps)` and `Z/(1-eps)` respectively.
    pub recovered: [CutStats; 2],
    /// `ln Z(K adjacency, y)`.
    pub ln_z: f64,
}

/// Smallest even `K` with `|y|^K 2^{N+1} <= 1`.
pub fn coupling_scale(n: usize, y: f64) -> Result<u64> {
    let ay = y.abs();
    if !(ay > 0.0 && ay < 1.0) {
        return Err(Error::WrongRegime(format!("need 0 < |y| < 1, got y = {y}")));
    }
    let bound = (n as f64 + 1.0) * std::f64::consts::LN_2 / ay.ln().abs();
    let k = (bound - 1e-9).ceil().max(1.0) as u64;
    Ok(k + k % 2)
}

/// `ln Z` for `J = K adjacency`, from the cut histogram. Every weight is
/// `|y|^{K (|E| - cut)}` because `K` is even.
pub fn ln_z_scaled(hist: &[u64], k: u64, y: f64) -> f64 {
    let edges = hist.len() - 1;
    let top = hist.iter().rposition(|&c| c > 0).unwrap_or(0);
    let ln_y = y.abs().ln();
    let sum: f64 = hist
        .iter()
        .enumerate()
        .filter(|(_, &c)| c > 0)
        .map(|(cut, &c)| c as f64 * (k as f64 * (top as f64 - cut as f64) * ln_y).exp())
        .sum();
    k as f64 * (edges - top) as f64 * ln_y + sum.ln()
}

/// Recover `(M, N)` from `ln Z~` where `(1-eps) Z~ <= Z <= (1+eps) Z~` and
/// `eps = 2^{-N-3}`.
pub fn recover_from(ln_z_tilde: f64, n: usize, edges: usize, k: u64, y: f64) -> CutStats {
    let eps = 2f64.powi(-(n as i32) - 3);
    let ln_y = y.abs().ln();
    let level = |cut: usize| k as f64 * (edges - cut) as f64 * ln_y;
    let upper = ln_z_tilde + (1.0 + eps).ln();
    let max_cut = (0..=edges).rev().find(|&cut| upper >= level(cut)).unwrap_or(0);
    let n_tilde = (ln_z_tilde - level(max_cut)).exp();
    let count = ((1.0 - eps) * n_tilde - 0.5).ceil().max(1.0);
    CutStats { max_cut: max_cut as u64, count: count as u64 }
}

pub fn maxcut_recover(adjacency: &[Vec<u8>], params: &IsingParams) -> Result<Recovery> {
    let n = adjacency.len();
    if n > MAX_CUT_VERTICES {
        return Err(Error::Refused(format!("{n} vertices exceed the max-cut limit of {MAX_CUT_VERTICES}")));
    }
    if adjacency.iter().flatten().any(|&e| e > 1) {
        return Err(Error::Invalid("adjacency entries must be 0 or 1".into()));
    }
    let k = coupling_scale(n, params.y)?;
    let hist = cut_histogram(adjacency)?;
    let edges = hist.len() - 1;
    let top = hist.iter().rposition(|&c| c > 0).unwrap_or(0);
    let stats = CutStats { max_cut: top as u64, count: hist[top] };
    let ln_z = ln_z_scaled(&hist, k, params.y);
    let eps = 2f64.powi(-(n as i32) - 3);
    let recovered = [
        recover_from(ln_z - (1.0 + eps).ln(), n, edges, k, params.y),
        recover_from(ln_z - (1.0 - eps).ln(), n, edges, k, params.y),
    ];
    Ok(Recovery { stats, k, recovered, ln_z })
}

/// Brute-force `Z` and its sign for 0/1 couplings with `-1 < y < 0`.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct SignResult {
    pub z: f64,
    pub sign: i8,
}

pub fn sign_regime(j: &CouplingMatrix, params: &IsingParams) -> Result<SignResult> {
    if !(params.y < 0.0 && params.y > -1.0) {
        return Err(Error::WrongRegime(format!("sign regime needs -1 < y < 0, got y = {}", params.y)));
    }
    if j.entries().iter().flatten().any(|&v| v != 0 && v != 1) {
        return Err(Error::Invalid("sign regime needs couplings in {0, 1}".into()));
    }
    if j.n() > MAX_SIGN_SPINS {
        return Err(Error::Refused(format!("{} spins exceed the sign-regime limit of {MAX_SIGN_SPINS}", j.n())));
    }
    let z = z_partition(j, params.y)?;
    let sign = if z.abs() < 1e-12 { 0 } else if z > 0.0 { 1 } else { -1 };
    Ok(SignResult { z, sign })
}
