//! Exact simulation of the qubit representation of `Y_1` in `G x| H`.
//!
//! A braid on `n` strands acts on `q = n + 1` qubits, generator `i` on the
//! qubit window `(i-1, i, i+1)`. Each generator factors as `A * C` where
//!
//! * `A = e^{i pi e / m H_i}` lies in the abelian group generated by the
//!   commuting Pauli operators `H_j` (`H_j = Z_{j-1} X_j Z_{j+1}` for
//!   `m >= 5`, `H_j = X_j` for `m = 3`);
//! * `C` is a signed permutation `|x> -> (-1)^{a.x} |L x>` with `L` linear
//!   over `F_2`: the XOR-controlled NOT `x_i ^= x_{i-1} ^ x_{i+1}`, preceded
//!   for `m = 3` by `Z_{i-1} Z_{i+1}`.
//!
//! Abelian parts are tables of exponents on the interval products
//! `S_{k,l} = H_k H_{k+1} ... H_l`, folded into `[0, m)` with an overall sign
//! because `e^{i pi S} = -1`. Conjugating an interval product through `C`
//! yields another interval product up to sign, which keeps the whole
//! description polynomial in `q`.

use std::collections::{BTreeMap, HashMap};

use num_complex::Complex;
use serde::{Deserialize, Serialize};

use crate::arith::check_odd_modulus;
use crate::braid::BraidWord;
use crate::dense::DenseOperator;
use crate::error::{Error, Result};
use crate::pauli::{PauliString, MAX_QUBITS};
use crate::scalar::Real;

/// `sign * prod e^{i pi e_{kl} / m S_{k,l}}` over the stored intervals.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct AbelianElement {
    negative: bool,
    exps: BTreeMap<(usize, usize), u32>,
}

impl AbelianElement {
    pub fn identity() -> Self {
        AbelianElement { negative: false, exps: BTreeMap::new() }
    }

    pub fn sign(&self) -> i32 {
        if self.negative {
            -1
        } else {
            1
        }
    }

    pub fn exps(&self) -> &BTreeMap<(usize, usize), u32> {
        &self.exps
    }

    pub fn is_identity(&self) -> bool {
        !self.negative && self.exps.is_empty()
    }

    /// Multiply by `e^{i pi e / m S_{k,l}}`.
    pub fn add_exponent(&mut self, m: u32, interval: (usize, usize), e: i64) {
        let m = m as i64;
        let old = *self.exps.get(&interval).unwrap_or(&0) as i64;
        let total = (old + e).rem_euclid(2 * m);
        let folded = if total >= m {
            self.negative = !self.negative;
            total - m
        } else {
            total
        };
        if folded == 0 {
            self.exps.remove(&interval);
        } else {
            self.exps.insert(interval, folded as u32);
        }
    }

    pub fn negate(&mut self) {
        self.negative = !self.negative;
    }
}

/// `|x> -> (-1)^{a.x} |L x>`. Masks use the convention of [`PauliString`].
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct CliffordElement {
    q: usize,
    /// Row `j` of `L` as a bit mask.
    rows: Vec<u64>,
    inv_rows: Vec<u64>,
    sign_mask: u64,
}

fn parity(x: u64) -> u64 {
    (x.count_ones() & 1) as u64
}

fn apply_rows(q: usize, rows: &[u64], x: u64) -> u64 {
    (0..q).fold(0, |acc, j| acc | (parity(rows[j] & x) << (q - 1 - j)))
}

/// `M^T v` for `M` given by rows: XOR of the rows selected by `v`.
fn apply_transpose(q: usize, rows: &[u64], v: u64) -> u64 {
    (0..q).filter(|&j| v & PauliString::bit(q, j) != 0).fold(0, |acc, j| acc ^ rows[j])
}

fn compose_rows(q: usize, outer: &[u64], inner: &[u64]) -> Vec<u64> {
    (0..q).map(|j| apply_transpose(q, inner, outer[j])).collect()
}

impl CliffordElement {
    pub fn identity(q: usize) -> Self {
        let rows: Vec<u64> = (0..q).map(|j| PauliString::bit(q, j)).collect();
        CliffordElement { q, inv_rows: rows.clone(), rows, sign_mask: 0 }
    }

    /// XOR-controlled NOT centred at qubit `c`; a missing neighbour counts
    /// as a control fixed to 0.
    pub fn xor_not(q: usize, c: usize) -> Self {
        let mut out = Self::identity(q);
        let mut row = PauliString::bit(q, c);
        if c > 0 {
            row |= PauliString::bit(q, c - 1);
        }
        if c + 1 < q {
            row |= PauliString::bit(q, c + 1);
        }
        out.rows[c] = row;
        // an involution
        out.inv_rows = out.rows.clone();
        out
    }

    /// Diagonal `|x> -> (-1)^{a.x} |x>`, i.e. a product of `Z`s.
    pub fn z_signs(q: usize, a: u64) -> Self {
        CliffordElement { sign_mask: a, ..Self::identity(q) }
    }

    pub fn qubits(&self) -> usize {
        self.q
    }

    pub fn is_identity(&self) -> bool {
        *self == Self::identity(self.q)
    }

    /// `(-1)^{a.x}` and `L x` for a basis state.
    pub fn act(&self, x: u64) -> (bool, u64) {
        (parity(self.sign_mask & x) == 1, apply_rows(self.q, &self.rows, x))
    }

    /// `self * other` (apply `other` first).
    pub fn compose(&self, other: &CliffordElement) -> CliffordElement {
        let q = self.q;
        CliffordElement {
            q,
            rows: compose_rows(q, &self.rows, &other.rows),
            inv_rows: compose_rows(q, &other.inv_rows, &self.inv_rows),
            sign_mask: other.sign_mask ^ apply_transpose(q, &other.rows, self.sign_mask),
        }
    }

    pub fn inverse(&self) -> CliffordElement {
        CliffordElement {
            q: self.q,
            rows: self.inv_rows.clone(),
            inv_rows: self.rows.clone(),
            sign_mask: apply_transpose(self.q, &self.inv_rows, self.sign_mask),
        }
    }

    /// `C P C^dagger`.
    pub fn conjugate(&self, p: &PauliString) -> PauliString {
        let q = self.q;
        let phase = p.phase() + 2 * parity(self.sign_mask & p.x_mask()) as u8;
        let x = apply_rows(q, &self.rows, p.x_mask());
        let z = apply_transpose(q, &self.inv_rows, p.z_mask());
        PauliString::from_masks(q, x, z, phase)
    }

    /// Images `C X_i C^dagger` and `C Z_i C^dagger` for each qubit.
    pub fn tableau(&self) -> Vec<(PauliString, PauliString)> {
        (0..self.q)
            .map(|i| (self.conjugate(&PauliString::single_x(self.q, i)), self.conjugate(&PauliString::single_z(self.q, i))))
            .collect()
    }

    pub fn dense<T: Real>(&self) -> DenseOperator<T> {
        let dim = 1usize << self.q;
        let mut out = DenseOperator::zeros(dim);
        for x in 0..dim as u64 {
            let (neg, y) = self.act(x);
            let v = if neg { -T::one() } else { T::one() };
            out.set(y as usize, x as usize, Complex::new(v, T::zero()));
        }
        out
    }
}

/// The pieces shared by every element of one `(q, m)` space.
#[derive(Debug, Clone)]
pub struct GroupSpace {
    q: usize,
    m: u32,
    intervals: Vec<((usize, usize), PauliString)>,
    lookup: HashMap<(u64, u64), usize>,
}

impl GroupSpace {
    pub fn new(q: usize, m: u32) -> Result<Self> {
        check_odd_modulus(m)?;
        if !(3..=MAX_QUBITS).contains(&q) {
            return Err(Error::Invalid(format!("qubit count {q} outside 3..={MAX_QUBITS}")));
        }
        let mut intervals = Vec::new();
        let mut lookup = HashMap::new();
        for k in 1..=q - 2 {
            let mut acc = PauliString::identity(q)?;
            for l in k..=q - 2 {
                acc = acc.mul(&Self::h_for(q, m, l));
                lookup.insert((acc.x_mask(), acc.z_mask()), intervals.len());
                intervals.push(((k, l), acc));
            }
        }
        Ok(GroupSpace { q, m, intervals, lookup })
    }

    /// `H_c`: `Z_{c-1} X_c Z_{c+1}` for `m >= 5`, `X_c` for `m = 3`.
    fn h_for(q: usize, m: u32, c: usize) -> PauliString {
        let x = PauliString::bit(q, c);
        if m == 3 {
            PauliString::from_masks(q, x, 0, 0)
        } else {
            PauliString::from_masks(q, x, PauliString::bit(q, c - 1) | PauliString::bit(q, c + 1), 0)
        }
    }

    pub fn q(&self) -> usize {
        self.q
    }

    pub fn m(&self) -> u32 {
        self.m
    }

    pub fn h(&self, c: usize) -> PauliString {
        Self::h_for(self.q, self.m, c)
    }

    /// Pauli operator of `S_{k,l}`.
    pub fn s_operator(&self, k: usize, l: usize) -> Result<PauliString> {
        self.check_interval(k, l)?;
        let idx = self.lookup_interval(k, l);
        Ok(self.intervals[idx].1)
    }

    fn lookup_interval(&self, k: usize, l: usize) -> usize {
        // intervals are stored row by row: k = 1, l = 1..; k = 2, ...
        let top = self.q - 2;
        let before: usize = (1..k).map(|kk| top - kk + 1).sum();
        before + (l - k)
    }

    fn check_interval(&self, k: usize, l: usize) -> Result<()> {
        if k < 1 || k > l || l > self.q - 2 {
            return Err(Error::Invalid(format!("interval ({k},{l}) outside 1 <= k <= l <= {}", self.q - 2)));
        }
        Ok(())
    }

    /// Identify a Pauli operator as `+-S_{k,l}`.
    pub fn identify(&self, p: &PauliString) -> Result<((usize, usize), bool)> {
        let idx = self
            .lookup
            .get(&(p.x_mask(), p.z_mask()))
            .ok_or_else(|| Error::Invalid(format!("{p} is not an interval product of the H operators")))?;
        let (interval, s) = &self.intervals[*idx];
        let diff = (p.phase() + 4 - s.phase()) % 4;
        match diff {
            0 => Ok((*interval, false)),
            2 => Ok((*interval, true)),
            _ => Err(Error::Invalid(format!("{p} is not Hermitian"))),
        }
    }

    pub fn identity(&self) -> GroupElement {
        GroupElement { q: self.q, m: self.m, a: AbelianElement::identity(), c: CliffordElement::identity(self.q) }
    }

    /// Image of `sigma_i`, `1 <= i <= q - 2`.
    pub fn generator(&self, i: usize) -> Result<GroupElement> {
        if i < 1 || i > self.q - 2 {
            return Err(Error::MalformedGenerator { generator: i as i64, strands: self.q - 1 });
        }
        let mut a = AbelianElement::identity();
        let q = self.q;
        let not = CliffordElement::xor_not(q, i);
        let c = if self.m == 3 {
            a.add_exponent(self.m, (i, i), 2);
            let zz = PauliString::bit(q, i - 1) | PauliString::bit(q, i + 1);
            CliffordElement::z_signs(q, zz).compose(&not)
        } else {
            a.add_exponent(self.m, (i, i), 1);
            not
        };
        Ok(GroupElement { q, m: self.m, a, c })
    }

    /// `C A C^dagger` for an abelian part `A`.
    pub fn conjugate_abelian(&self, c: &CliffordElement, a: &AbelianElement) -> Result<AbelianElement> {
        let mut out = AbelianElement { negative: a.negative, exps: BTreeMap::new() };
        for (&(k, l), &e) in &a.exps {
            let s = self.intervals[self.lookup_interval(k, l)].1;
            let (interval, neg) = self.identify(&c.conjugate(&s))?;
            out.add_exponent(self.m, interval, if neg { -(e as i64) } else { e as i64 });
        }
        Ok(out)
    }

    pub fn multiply(&self, g1: &GroupElement, g2: &GroupElement) -> Result<GroupElement> {
        self.check(g1)?;
        self.check(g2)?;
        // A1 C1 A2 C2 = A1 (C1 A2 C1^dagger) C1 C2
        let moved = self.conjugate_abelian(&g1.c, &g2.a)?;
        let mut a = g1.a.clone();
        if moved.negative {
            a.negate();
        }
        for (&interval, &e) in &moved.exps {
            a.add_exponent(self.m, interval, e as i64);
        }
        Ok(GroupElement { q: self.q, m: self.m, a, c: g1.c.compose(&g2.c) })
    }

    pub fn inverse(&self, g: &GroupElement) -> Result<GroupElement> {
        self.check(g)?;
        // (A C)^{-1} = (C^{-1} A^{-1} C) C^{-1}
        let mut a_inv = AbelianElement { negative: g.a.negative, exps: BTreeMap::new() };
        for (&interval, &e) in &g.a.exps {
            a_inv.add_exponent(self.m, interval, -(e as i64));
        }
        let c_inv = g.c.inverse();
        let a = self.conjugate_abelian(&c_inv, &a_inv)?;
        Ok(GroupElement { q: self.q, m: self.m, a, c: c_inv })
    }

    pub fn braid_to_element(&self, b: &BraidWord) -> Result<GroupElement> {
        if b.strands() + 1 != self.q {
            return Err(Error::Mismatch(format!("braid on {} strands needs {} qubits, space has {}", b.strands(), b.strands() + 1, self.q)));
        }
        let gens: Vec<GroupElement> = (1..=self.q - 2).map(|i| self.generator(i)).collect::<Result<_>>()?;
        let invs: Vec<GroupElement> = gens.iter().map(|g| self.inverse(g)).collect::<Result<_>>()?;
        let mut acc = self.identity();
        for &l in b.letters() {
            let i = l.unsigned_abs() as usize - 1;
            acc = self.multiply(&acc, if l > 0 { &gens[i] } else { &invs[i] })?;
        }
        Ok(acc)
    }

    /// `g^dagger S_{k,l} g` as `+-S_{k',l'}`; the abelian part drops out.
    pub fn pullback_s(&self, g: &GroupElement, k: usize, l: usize) -> Result<((usize, usize), i32)> {
        self.check(g)?;
        self.check_interval(k, l)?;
        let s = self.intervals[self.lookup_interval(k, l)].1;
        let (interval, neg) = self.identify(&g.c.inverse().conjugate(&s))?;
        Ok((interval, if neg { -1 } else { 1 }))
    }

    fn check(&self, g: &GroupElement) -> Result<()> {
        if g.q != self.q || g.m != self.m {
            return Err(Error::Mismatch(format!("element on (q={}, m={}) used in space (q={}, m={})", g.q, g.m, self.q, self.m)));
        }
        Ok(())
    }

    pub fn dense<T: Real>(&self, g: &GroupElement) -> DenseOperator<T> {
        let dim = 1usize << self.q;
        let mut a = DenseOperator::<T>::identity(dim);
        if g.a.negative {
            a = a.scale(Complex::new(-T::one(), T::zero()));
        }
        for (&(k, l), &e) in &g.a.exps {
            let s = self.intervals[self.lookup_interval(k, l)].1.dense::<T>();
            let angle = T::PI() * T::lit(e as f64) / T::lit(self.m as f64);
            let factor = DenseOperator::identity(dim)
                .scale(Complex::new(angle.cos(), T::zero()))
                .add(&s.scale(Complex::new(T::zero(), angle.sin())));
            a = a.mul(&factor);
        }
        a.mul(&g.c.dense())
    }
}

/// `A * C`: abelian part times signed-permutation Clifford part.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct GroupElement {
    q: usize,
    m: u32,
    a: AbelianElement,
    c: CliffordElement,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct GroupElementJson {
    pub qubits: usize,
    pub m: u32,
    pub sign: i32,
    /// `[k, l, e]` triples.
    pub exps: Vec<[u64; 3]>,
    /// Per qubit: `[C X_i C^dagger, C Z_i C^dagger]`.
    pub tableau: Vec<[String; 2]>,
}

impl GroupElement {
    pub fn q(&self) -> usize {
        self.q
    }

    pub fn m(&self) -> u32 {
        self.m
    }

    pub fn abelian(&self) -> &AbelianElement {
        &self.a
    }

    pub fn clifford(&self) -> &CliffordElement {
        &self.c
    }

    pub fn is_identity(&self) -> bool {
        self.a.is_identity() && self.c.is_identity()
    }

    pub fn to_json(&self) -> GroupElementJson {
        GroupElementJson {
            qubits: self.q,
            m: self.m,
            sign: self.a.sign(),
            exps: self.a.exps.iter().map(|(&(k, l), &e)| [k as u64, l as u64, e as u64]).collect(),
            tableau: self.c.tableau().into_iter().map(|(x, z)| [x.to_string(), z.to_string()]).collect(),
        }
    }
}
