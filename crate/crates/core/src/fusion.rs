//! Fusion data of SO(m)_2.
//!
//! Labels are `1, Z, Xe, Xe', Y_1 .. Y_r` with `m = 2r + 1`. `Y_0` is accepted
//! on input and stored as `1`.

use std::collections::BTreeMap;
use std::fmt;
use std::str::FromStr;

use num_bigint::BigUint;
use num_rational::Ratio;
use num_traits::{ToPrimitive, Zero};
use serde::{Deserialize, Serialize};

use crate::arith::check_odd_modulus;
use crate::error::{Error, Result};

/// A simple object of SO(m)_2.
#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize, Deserialize)]
pub enum Label {
    One,
    Z,
    Xe,
    XePrime,
    Y(u32),
}

impl Label {
    /// `Y_j`, with `Y_0` normalized to the unit.
    pub fn y(j: u32) -> Label {
        if j == 0 {
            Label::One
        } else {
            Label::Y(j)
        }
    }
}

impl fmt::Display for Label {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Label::One => write!(f, "1"),
            Label::Z => write!(f, "Z"),
            Label::Xe => write!(f, "Xe"),
            Label::XePrime => write!(f, "Xe'"),
            Label::Y(j) => write!(f, "Y{j}"),
        }
    }
}

impl FromStr for Label {
    type Err = Error;

    fn from_str(s: &str) -> Result<Label> {
        let t = s.trim();
        match t {
            "1" | "One" | "one" => return Ok(Label::One),
            "Z" => return Ok(Label::Z),
            "Xe" | "X" => return Ok(Label::Xe),
            "Xe'" | "XeP" | "Xep" | "X'" => return Ok(Label::XePrime),
            _ => {}
        }
        if let Some(rest) = t.strip_prefix('Y') {
            if let Ok(j) = rest.parse::<u32>() {
                return Ok(Label::y(j));
            }
        }
        Err(Error::UnknownLabel(s.to_string()))
    }
}

/// Quantum dimension, kept symbolic so that `sqrt(m)` stays exact.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
pub enum QuantumDimension {
    One,
    Two,
    SqrtM(u32),
}

impl QuantumDimension {
    pub fn value(self) -> f64 {
        match self {
            QuantumDimension::One => 1.0,
            QuantumDimension::Two => 2.0,
            QuantumDimension::SqrtM(m) => (m as f64).sqrt(),
        }
    }

    /// The square of the dimension, always an integer.
    pub fn squared(self) -> u64 {
        match self {
            QuantumDimension::One => 1,
            QuantumDimension::Two => 4,
            QuantumDimension::SqrtM(m) => m as u64,
        }
    }
}

/// A root of unity `e^{2 pi i t}` with `t` rational in `[0, 1)`.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub struct RootOfUnity {
    turns: Ratio<i64>,
}

impl RootOfUnity {
    pub fn from_turns(t: Ratio<i64>) -> Self {
        let mut t = t - t.floor();
        if t < Ratio::zero() {
            t += 1;
        }
        RootOfUnity { turns: t }
    }

    pub fn turns(&self) -> Ratio<i64> {
        self.turns
    }

    pub fn value(&self) -> (f64, f64) {
        let a = 2.0 * std::f64::consts::PI * self.turns.to_f64().unwrap_or(0.0);
        (a.cos(), a.sin())
    }
}

/// `R^{a,b}_c` for one fusion channel.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct RSymbol {
    pub a: Label,
    pub b: Label,
    pub channel: Label,
    pub value: RootOfUnity,
}

/// Per-label data: dimension, scaling dimension and known R-symbols.
#[derive(Debug, Clone, PartialEq)]
pub struct CategoryDatum {
    pub qdim: QuantumDimension,
    /// Scaling dimension reduced to `[0, 1)`.
    pub h: Ratio<i64>,
    pub r_symbols: Vec<RSymbol>,
}

impl CategoryDatum {
    pub fn twist(&self) -> RootOfUnity {
        RootOfUnity::from_turns(self.h)
    }
}

/// The fusion ring of SO(m)_2 for a fixed odd `m >= 3`.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct FusionRing {
    m: u32,
}

impl FusionRing {
    pub fn new(m: u32) -> Result<Self> {
        check_odd_modulus(m)?;
        Ok(FusionRing { m })
    }

    pub fn m(&self) -> u32 {
        self.m
    }

    pub fn r(&self) -> u32 {
        (self.m - 1) / 2
    }

    pub fn rank(&self) -> usize {
        self.r() as usize + 4
    }

    /// All labels in canonical order.
    pub fn labels(&self) -> Vec<Label> {
        let mut v = vec![Label::One, Label::Z, Label::Xe, Label::XePrime];
        v.extend((1..=self.r()).map(Label::Y));
        v
    }

    pub fn validate(&self, a: Label) -> Result<Label> {
        match a {
            Label::Y(0) => Ok(Label::One),
            Label::Y(j) if j > self.r() => Err(Error::LabelOutOfRange(a.to_string(), self.m)),
            _ => Ok(a),
        }
    }

    pub fn parse_label(&self, s: &str) -> Result<Label> {
        self.validate(s.parse()?)
    }

    fn index(&self, a: Label) -> usize {
        match a {
            Label::One | Label::Y(0) => 0,
            Label::Z => 1,
            Label::Xe => 2,
            Label::XePrime => 3,
            Label::Y(j) => 3 + j as usize,
        }
    }

    /// `Y_{min(k, m-k)}`, folding the dihedral index back into `0..=r`.
    fn y_folded(&self, k: u32) -> Label {
        Label::y(k.min(self.m - k))
    }

    /// Decompose `a ⊗ b` into simple summands, sorted, with multiplicity.
    pub fn fuse(&self, a: Label, b: Label) -> Result<Vec<Label>> {
        let a = self.validate(a)?;
        let b = self.validate(b)?;
        let (a, b) = if a <= b { (a, b) } else { (b, a) };
        use Label::*;
        let mut out = match (a, b) {
            (One, x) => vec![x],
            (Z, Z) => vec![One],
            (Z, Xe) => vec![XePrime],
            (Z, XePrime) => vec![Xe],
            (Z, Y(j)) => vec![Y(j)],
            (Xe, Xe) | (XePrime, XePrime) => (0..=self.r()).map(Label::y).collect(),
            (Xe, XePrime) => {
                let mut v = vec![Z];
                v.extend((1..=self.r()).map(Y));
                v
            }
            (Xe, Y(_)) | (XePrime, Y(_)) => vec![Xe, XePrime],
            (Y(i), Y(j)) if i == j => vec![One, Z, self.y_folded(2 * j)],
            (Y(i), Y(j)) => vec![Label::y(i.abs_diff(j)), self.y_folded(i + j)],
            _ => unreachable!("pairs are ordered"),
        };
        out.sort();
        Ok(out)
    }

    /// Fuse two multisets of labels, flattening with multiplicity.
    pub fn fuse_multisets(&self, a: &[Label], b: &[Label]) -> Result<Vec<Label>> {
        let mut out = Vec::new();
        for &x in a {
            for &y in b {
                out.extend(self.fuse(x, y)?);
            }
        }
        out.sort();
        Ok(out)
    }

    pub fn qdim(&self, a: Label) -> Result<QuantumDimension> {
        Ok(match self.validate(a)? {
            Label::One | Label::Z => QuantumDimension::One,
            Label::Xe | Label::XePrime => QuantumDimension::SqrtM(self.m),
            Label::Y(_) => QuantumDimension::Two,
        })
    }

    /// Scaling dimension `h` modulo 1.
    pub fn scaling_dimension(&self, a: Label) -> Result<Ratio<i64>> {
        let r = self.r() as i64;
        let m = self.m as i64;
        let h = match self.validate(a)? {
            Label::One => Ratio::zero(),
            Label::Z => Ratio::from_integer(1),
            Label::Xe => Ratio::new(r, 8),
            Label::XePrime => Ratio::new(r + 4, 8),
            Label::Y(j) => {
                let j = j as i64;
                Ratio::new(j * (m - j), 2 * m)
            }
        };
        Ok(h - h.floor())
    }

    /// R-symbols listed for the pair `(a, a)`; only `Y_1` and `Xe` carry data.
    pub fn r_symbols(&self, a: Label) -> Result<Vec<RSymbol>> {
        let a = self.validate(a)?;
        let m = self.m as i64;
        let r = self.r() as i64;
        let mut out = Vec::new();
        match a {
            Label::Y(1) => {
                let push = |out: &mut Vec<RSymbol>, c: Label, t: Ratio<i64>| {
                    out.push(RSymbol { a, b: a, channel: c, value: RootOfUnity::from_turns(t) })
                };
                // e^{pi i (m+1)/m}, e^{pi i/m}, e^{pi i (m-1)/m}
                push(&mut out, Label::One, Ratio::new(m + 1, 2 * m));
                push(&mut out, Label::Z, Ratio::new(1, 2 * m));
                push(&mut out, self.y_folded(2), Ratio::new(m - 1, 2 * m));
            }
            Label::Xe => {
                for j in 0..=r {
                    // i^{(r-j)(r-j+1)-j} e^{pi i (r/4 + j^2/(4r+2))}
                    let ipow = (r - j) * (r - j + 1) - j;
                    let t = Ratio::new(ipow, 4) + Ratio::new(r, 8) + Ratio::new(j * j, 2 * (4 * r + 2));
                    out.push(RSymbol {
                        a,
                        b: a,
                        channel: Label::y(j as u32),
                        value: RootOfUnity::from_turns(t),
                    });
                }
            }
            _ => {}
        }
        Ok(out)
    }

    /// `R^{a,b}_c` if it is part of the stored data, `None` otherwise.
    pub fn r_symbol(&self, a: Label, b: Label, c: Label) -> Result<Option<RootOfUnity>> {
        let (a, b, c) = (self.validate(a)?, self.validate(b)?, self.validate(c)?);
        if a != b {
            return Ok(None);
        }
        Ok(self.r_symbols(a)?.into_iter().find(|s| s.channel == c).map(|s| s.value))
    }

    pub fn category_data(&self, a: Label) -> Result<CategoryDatum> {
        Ok(CategoryDatum {
            qdim: self.qdim(a)?,
            h: self.scaling_dimension(a)?,
            r_symbols: self.r_symbols(a)?,
        })
    }

    /// Fusion matrix `N_a` with `N_a[b][c]` the multiplicity of `c` in `a ⊗ b`.
    pub fn fusion_matrix(&self, a: Label) -> Result<Vec<Vec<u32>>> {
        let labels = self.labels();
        let mut n = vec![vec![0u32; labels.len()]; labels.len()];
        for (bi, &b) in labels.iter().enumerate() {
            for c in self.fuse(a, b)? {
                n[bi][self.index(c)] += 1;
            }
        }
        Ok(n)
    }

    /// Dimension of `Hom(s_1 ⊗ ... ⊗ s_k, target)` by iterated fusion-matrix
    /// application.
    pub fn hom_dim(&self, sequence: &[Label], target: Label) -> Result<BigUint> {
        let target = self.validate(target)?;
        let Some((&first, rest)) = sequence.split_first() else {
            return Err(Error::Invalid("empty label sequence".into()));
        };
        let rank = self.rank();
        let mut counts = vec![BigUint::zero(); rank];
        counts[self.index(self.validate(first)?)] = BigUint::from(1u32);
        let mut cache: BTreeMap<Label, Vec<Vec<u32>>> = BTreeMap::new();
        for &s in rest {
            let s = self.validate(s)?;
            if !cache.contains_key(&s) {
                cache.insert(s, self.fusion_matrix(s)?);
            }
            let n = &cache[&s];
            let mut next = vec![BigUint::zero(); rank];
            for (b, cb) in counts.iter().enumerate() {
                if cb.is_zero() {
                    continue;
                }
                for (c, &mult) in n[b].iter().enumerate() {
                    if mult > 0 {
                        next[c] += cb * mult;
                    }
                }
            }
            counts = next;
        }
        Ok(counts.swap_remove(self.index(target)))
    }
}
