//! Exact link invariants: the sublink state sum `E(L)` built from linking
//! numbers, Seifert matrices of braid closures, quadratic Gauss sums for
//! `I_{X_e}`, and the list of classical points of the Kauffman polynomial.

use num_bigint::BigInt;
use num_rational::{BigRational, Ratio};
use num_traits::{One, Signed, Zero};
use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::arith::{check_odd_modulus, check_odd_prime, inv_mod, legendre, modp};
use crate::braid::{BraidWord, ClosureKind, LinkingMatrix};
use crate::cyclotomic::CyclotomicValue;
use crate::error::{Error, Result};

/// Largest component count accepted by [`lm_state_sum`].
pub const MAX_STATE_SUM_COMPONENTS: usize = 30;
/// Largest `p^{b_1}` accepted by brute-force Gauss sums.
pub const MAX_BRUTE_TERMS: u64 = 10_000_000;

#[derive(Debug, Clone, PartialEq)]
pub struct StateSum {
    /// `E(L) = sum_S w^{2 <S, L-S>}`, `w = e^{2 pi i/m}`.
    pub e: CyclotomicValue,
    /// `I_{Y_1}(L) = E(L) / 4`.
    pub i_y1: CyclotomicValue,
    /// Multiplicities of each power `w^k`, `k = 0..m`.
    pub histogram: Vec<u64>,
}

/// Sum over all `2^c` sublinks, in the field of order `lcm(4, 2m)`.
pub fn lm_state_sum(lk: &LinkingMatrix, m: u32) -> Result<StateSum> {
    check_odd_modulus(m)?;
    let c = lk.components;
    if c > MAX_STATE_SUM_COMPONENTS {
        return Err(Error::Refused(format!(
            "{c} components exceed the {MAX_STATE_SUM_COMPONENTS}-component limit of the sublink enumeration; \
             links compiled from Ising couplings can be evaluated through Z(J, y) instead"
        )));
    }
    let histogram = sublink_histogram(lk, m);
    let order = CyclotomicValue::standard_order(m as u64);
    let e = CyclotomicValue::from_exponent_histogram(order, order / m as u64, &histogram);
    let i_y1 = e.scale_rational(&BigRational::new(BigInt::one(), BigInt::from(4)));
    Ok(StateSum { e, i_y1, histogram })
}

/// Histogram of `2 <S, L-S> mod m` over all sublinks `S`, enumerated in
/// Gray-code order inside independent chunks.
fn sublink_histogram(lk: &LinkingMatrix, m: u32) -> Vec<u64> {
    let c = lk.components;
    let mi = m as i64;
    let entries: Vec<Vec<i64>> = (0..c).map(|i| (0..c).map(|j| lk.get(i, j)).collect()).collect();
    let row_sum: Vec<i64> = entries.iter().map(|r| r.iter().sum()).collect();
    let top = c.min(8);
    let low = c - top;
    let chunks: Vec<Vec<u64>> = (0..1u64 << top)
        .into_par_iter()
        .map(|prefix| {
            let mut hist = vec![0u64; m as usize];
            let mut in_s = vec![false; c];
            for b in 0..top {
                in_s[low + b] = prefix >> b & 1 == 1;
            }
            // inside[j] = sum over i in S of lk[i][j]
            let mut inside = vec![0i64; c];
            let mut linking = 0i64;
            for i in 0..c {
                if in_s[i] {
                    for j in 0..c {
                        inside[j] += entries[i][j];
                        if !in_s[j] {
                            linking += entries[i][j];
                        }
                    }
                }
            }
            hist[modp(2 * linking, m) as usize] += 1;
            for step in 1..1u64 << low {
                let k = step.trailing_zeros() as usize;
                let delta = row_sum[k] - 2 * inside[k];
                if in_s[k] {
                    in_s[k] = false;
                    for j in 0..c {
                        inside[j] -= entries[k][j];
                    }
                    linking += 2 * inside[k] - row_sum[k];
                } else {
                    in_s[k] = true;
                    for j in 0..c {
                        inside[j] += entries[k][j];
                    }
                    linking += delta;
                }
                hist[(2 * linking).rem_euclid(mi) as usize] += 1;
            }
            hist
        })
        .collect();
    let mut total = vec![0u64; m as usize];
    for h in chunks {
        for (t, v) in total.iter_mut().zip(h) {
            *t += v;
        }
    }
    total
}

/// Seifert matrix of the trace closure of a braid, from the surface made of
/// one disc per strand and one band per crossing.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct SeifertData {
    pub v: Vec<Vec<i64>>,
    pub b1: usize,
    pub components: usize,
}

impl SeifertData {
    pub fn from_matrix(v: Vec<Vec<i64>>) -> Result<Self> {
        let b1 = v.len();
        if v.iter().any(|r| r.len() != b1) {
            return Err(Error::Mismatch("Seifert matrix must be square".into()));
        }
        Ok(SeifertData { v, b1, components: 0 })
    }

    /// `V + V^T`.
    pub fn symmetrized(&self) -> Vec<Vec<i64>> {
        (0..self.b1).map(|i| (0..self.b1).map(|j| self.v[i][j] + self.v[j][i]).collect()).collect()
    }
}

pub fn seifert_from_braid(b: &BraidWord) -> Result<SeifertData> {
    let n = b.strands();
    let mut columns: Vec<Vec<(usize, i64)>> = vec![Vec::new(); n.saturating_sub(1)];
    for (pos, &g) in b.letters().iter().enumerate() {
        columns[g.unsigned_abs() as usize - 1].push((pos, g.signum() as i64));
    }
    if let Some(i) = columns.iter().position(|c| c.is_empty()) {
        return Err(Error::DisconnectedSurface(i + 1));
    }
    // a loop runs through two consecutive bands of the same column
    struct Loop {
        column: usize,
        start: usize,
        end: usize,
        first_sign: i64,
        second_sign: i64,
    }
    let mut loops = Vec::new();
    for (col, bands) in columns.iter().enumerate() {
        for w in bands.windows(2) {
            loops.push(Loop { column: col, start: w[0].0, end: w[1].0, first_sign: w[0].1, second_sign: w[1].1 });
        }
    }
    let k = loops.len();
    let mut v = vec![vec![0i64; k]; k];
    for (x, a) in loops.iter().enumerate() {
        v[x][x] = -(a.first_sign + a.second_sign) / 2;
        for (y, c) in loops.iter().enumerate() {
            if c.column == a.column && c.start == a.end {
                if a.second_sign > 0 {
                    v[x][y] = 1;
                } else {
                    v[y][x] = -1;
                }
            }
            if c.column == a.column + 1 {
                if a.start < c.start && c.start < a.end && a.end < c.end {
                    v[x][y] -= 1;
                }
                if c.start < a.start && a.start < c.end && c.end < a.end {
                    v[x][y] += 1;
                }
            }
        }
    }
    let components = b.closure(ClosureKind::Trace)?.count;
    Ok(SeifertData { v, b1: k, components })
}

fn det_rational(mut a: Vec<Vec<BigRational>>) -> BigRational {
    let n = a.len();
    let mut det = BigRational::one();
    for c in 0..n {
        let Some(p) = (c..n).find(|&r| !a[r][c].is_zero()) else { return BigRational::zero() };
        if p != c {
            a.swap(p, c);
            det = -det;
        }
        det *= a[c][c].clone();
        for r in c + 1..n {
            if a[r][c].is_zero() {
                continue;
            }
            let f = &a[r][c] / &a[c][c];
            for j in c..n {
                let sub = &f * &a[c][j];
                a[r][j] -= sub;
            }
        }
    }
    det
}

pub fn det_integer(a: &[Vec<i64>]) -> BigInt {
    let m = a.iter().map(|r| r.iter().map(|&v| BigRational::from_integer(v.into())).collect()).collect();
    det_rational(m).to_integer()
}

/// Coefficients of `det(V - t V^T)`, lowest degree first, with leading and
/// trailing zeros stripped and the sign fixed so the lowest coefficient is
/// positive: the Alexander polynomial up to `+-t^k`.
pub fn alexander_polynomial(s: &SeifertData) -> Vec<BigInt> {
    let k = s.b1;
    // interpolate the degree <= k polynomial from k + 1 integer points
    let points: Vec<(BigRational, BigRational)> = (0..=k as i64)
        .map(|t| {
            let tt = BigRational::from_integer(t.into());
            let m = (0..k)
                .map(|i| {
                    (0..k)
                        .map(|j| BigRational::from_integer(s.v[i][j].into()) - &tt * BigRational::from_integer(s.v[j][i].into()))
                        .collect()
                })
                .collect();
            (tt, det_rational(m))
        })
        .collect();
    let mut coeffs = vec![BigRational::zero(); k + 1];
    for (i, (xi, yi)) in points.iter().enumerate() {
        // Lagrange basis polynomial for xi
        let mut basis = vec![BigRational::one()];
        let mut denom = BigRational::one();
        for (j, (xj, _)) in points.iter().enumerate() {
            if i == j {
                continue;
            }
            let mut next = vec![BigRational::zero(); basis.len() + 1];
            for (d, b) in basis.iter().enumerate() {
                next[d + 1] += b;
                next[d] -= b * xj;
            }
            basis = next;
            denom *= xi - xj;
        }
        for (d, b) in basis.iter().enumerate() {
            coeffs[d] += b * yi / &denom;
        }
    }
    let mut ints: Vec<BigInt> = coeffs.into_iter().map(|c| c.to_integer()).collect();
    while ints.last().is_some_and(|c| c.is_zero()) {
        ints.pop();
    }
    let lead = ints.iter().position(|c| !c.is_zero()).unwrap_or(ints.len());
    let mut out: Vec<BigInt> = ints.split_off(lead);
    if out.first().is_some_and(|c| c.is_negative()) {
        out.iter_mut().for_each(|c| *c = -c.clone());
    }
    out
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub enum GaussMode {
    Brute,
    Fast,
}

#[derive(Debug, Clone, PartialEq)]
pub struct XeValue {
    pub value: CyclotomicValue,
    /// Corank of `V + V^T` over `F_p`.
    pub corank: usize,
}

/// `p^{-b_1/2} sum_{v in F_p^{b_1}} w^{v^T V v}`, `w = e^{2 pi i/p}`.
pub fn i_xe_eval(s: &SeifertData, p: u32, mode: GaussMode) -> Result<XeValue> {
    check_odd_prime(p)?;
    let order = CyclotomicValue::standard_order(p as u64);
    let stride = order / p as u64;
    let form = symmetric_form_mod_p(s, p);
    let diag = diagonalize_mod_p(form, p);
    let corank = diag.iter().filter(|&&a| a == 0).count();
    let value = match mode {
        GaussMode::Brute => {
            let terms = (p as u64).checked_pow(s.b1 as u32).filter(|&t| t <= MAX_BRUTE_TERMS);
            if terms.is_none() {
                return Err(Error::Refused(format!("{p}^{} terms exceed the brute-force limit {MAX_BRUTE_TERMS}", s.b1)));
            }
            let hist = quadratic_form_histogram(s, p);
            CyclotomicValue::from_exponent_histogram(order, stride, &hist)
        }
        GaussMode::Fast => {
            let mut acc = CyclotomicValue::one(order);
            let g = gauss_sum(p);
            let mut sign = 1i64;
            let mut rank = 0u32;
            for &a in &diag {
                if a != 0 {
                    sign *= legendre(a as i64, p) as i64;
                    rank += 1;
                }
            }
            // g^2 = (-1|p) p
            let g_sq = legendre(-1, p) as i64 * p as i64;
            let rational = BigInt::from(sign) * BigInt::from(p).pow(corank as u32) * BigInt::from(g_sq).pow(rank / 2);
            acc = acc.scale_rational(&BigRational::from_integer(rational));
            if rank % 2 == 1 {
                acc = acc.mul(&g)?;
            }
            acc
        }
    };
    Ok(XeValue { value: value.with_inverse_sqrt_power(p as u64, s.b1 as u32)?, corank })
}

/// `g_p = sum_x w^{x^2}`.
pub fn gauss_sum(p: u32) -> CyclotomicValue {
    let order = CyclotomicValue::standard_order(p as u64);
    let mut hist = vec![0u64; p as usize];
    for x in 0..p as u64 {
        hist[(x * x % p as u64) as usize] += 1;
    }
    CyclotomicValue::from_exponent_histogram(order, order / p as u64, &hist)
}

/// `(V + V^T)/2` reduced mod `p`, so that `v^T V v = v^T A v`.
fn symmetric_form_mod_p(s: &SeifertData, p: u32) -> Vec<Vec<u32>> {
    let half = inv_mod(2, p) as i64;
    (0..s.b1)
        .map(|i| (0..s.b1).map(|j| modp((s.v[i][j] + s.v[j][i]) * half, p)).collect())
        .collect()
}

/// Diagonal entries of a congruent diagonal form.
fn diagonalize_mod_p(mut a: Vec<Vec<u32>>, p: u32) -> Vec<u32> {
    let n = a.len();
    let pp = p as u64;
    let mut diag = Vec::with_capacity(n);
    for k in 0..n {
        if a[k][k] == 0 {
            // bring a nonzero diagonal entry to position k if there is one
            if let Some(j) = (k + 1..n).find(|&j| a[j][j] != 0) {
                a.swap(k, j);
                for row in a.iter_mut() {
                    row.swap(k, j);
                }
            } else if let Some(j) = (k + 1..n).find(|&j| a[k][j] != 0) {
                // v_k -> v_k + v_j makes the diagonal 2 a_kj
                for c in 0..n {
                    a[k][c] = ((a[k][c] as u64 + a[j][c] as u64) % pp) as u32;
                }
                for r in 0..n {
                    a[r][k] = ((a[r][k] as u64 + a[r][j] as u64) % pp) as u32;
                }
            }
        }
        let piv = a[k][k];
        diag.push(piv);
        if piv == 0 {
            continue;
        }
        let inv = inv_mod(piv, p) as u64;
        for r in k + 1..n {
            if a[r][k] == 0 {
                continue;
            }
            let f = a[r][k] as u64 * inv % pp;
            for c in k + 1..n {
                a[r][c] = ((a[r][c] as u64 + pp * pp - f * a[k][c] as u64) % pp) as u32;
            }
            a[r][k] = 0;
        }
    }
    diag
}

fn quadratic_form_histogram(s: &SeifertData, p: u32) -> Vec<u64> {
    let n = s.b1;
    let pp = p as i64;
    let form: Vec<Vec<i64>> = s.v.iter().map(|r| r.iter().map(|&x| x.rem_euclid(pp)).collect()).collect();
    let total = (p as u64).pow(n as u32);
    let chunk = (p as u64).pow(n.min(3) as u32).max(1);
    let per_chunk = total / chunk;
    (0..chunk)
        .into_par_iter()
        .map(|c| {
            let mut hist = vec![0u64; p as usize];
            let mut v = vec![0i64; n];
            for idx in c * per_chunk..(c + 1) * per_chunk {
                let mut rest = idx;
                for slot in v.iter_mut() {
                    *slot = (rest % p as u64) as i64;
                    rest /= p as u64;
                }
                let mut q = 0i64;
                for i in 0..n {
                    if v[i] == 0 {
                        continue;
                    }
                    let mut row = 0i64;
                    for j in 0..n {
                        row += form[i][j] * v[j];
                    }
                    q = (q + v[i] * (row % pp)) % pp;
                }
                hist[q.rem_euclid(pp) as usize] += 1;
            }
            hist
        })
        .reduce(
            || vec![0u64; p as usize],
            |mut a, b| {
                a.iter_mut().zip(b).for_each(|(x, y)| *x += y);
                a
            },
        )
}

/// Answer of the classical-point test.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub enum Classical {
    Yes,
    No,
    Unknown,
}

/// Is `F(L; a, z)` at `a = e^{2 pi i a_turns}` and real `z` one of the
/// classically computable points? `None` for `a_turns` means `a` is not a
/// root of unity in the accepted form.
pub fn kauffman_classical_point(a_turns: Option<Ratio<i64>>, z: f64) -> Classical {
    let Some(a) = a_turns else { return Classical::Unknown };
    if !z.is_finite() || z.abs() < 1e-12 {
        return Classical::Unknown;
    }
    let a = reduce_turns(a);
    let quarter = Ratio::new(1, 4);
    if a == quarter || a == Ratio::new(3, 4) {
        return Classical::Yes;
    }
    let half = Ratio::new(1, 2);
    let close = |x: f64, y: f64| (x - y).abs() < 1e-12;
    let candidates = |orders: &[i64]| -> Vec<Ratio<i64>> {
        let mut out: Vec<Ratio<i64>> = orders.iter().flat_map(|&n| (0..n).map(move |k| Ratio::new(k, n))).collect();
        out.sort();
        out.dedup();
        out
    };
    let not_pm_i = |q: &Ratio<i64>| *q != quarter && *q != Ratio::new(3, 4);
    let zq = |q: &Ratio<i64>| 2.0 * (2.0 * std::f64::consts::PI * (*q.numer() as f64) / (*q.denom() as f64)).cos();
    // (prefactor turns, power of q, admissible orders)
    let families: [(Ratio<i64>, i64, &[i64]); 3] = [(half, 3, &[16, 24]), (Ratio::new(0, 1), 3, &[8, 12]), (half, 1, &[16])];
    for (pre, power, orders) in families {
        for q in candidates(orders).iter().filter(|q| not_pm_i(q)) {
            if !close(z, zq(q)) {
                continue;
            }
            let plus = reduce_turns(pre + q * power);
            let minus = reduce_turns(pre - q * power);
            if a == plus || a == minus {
                return Classical::Yes;
            }
        }
    }
    for q in candidates(&[5]) {
        if (a == Ratio::new(0, 1) && close(z, zq(&q))) || (a == half && close(z, -zq(&q))) {
            return Classical::Yes;
        }
    }
    Classical::No
}

fn reduce_turns(t: Ratio<i64>) -> Ratio<i64> {
    let f = t - Ratio::from_integer(t.floor().to_integer());
    if f < Ratio::from_integer(0) {
        f + Ratio::from_integer(1)
    } else {
        f
    }
}
