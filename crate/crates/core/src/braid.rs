//! Braid words and the topology of their closures.
//!
//! Text format: a header line `n=<strands>` followed by whitespace separated
//! nonzero integers; `k` is the generator `σ_k`, `-k` its inverse.

use std::fmt;
use std::str::FromStr;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

#[derive(Debug, Clone, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub struct BraidWord {
    strands: usize,
    letters: Vec<i32>,
}

impl BraidWord {
    pub fn new(strands: usize, letters: Vec<i32>) -> Result<Self> {
        if strands < 1 {
            return Err(Error::MalformedHeader(format!("n={strands} must be at least 1")));
        }
        for &g in &letters {
            if g == 0 || g.unsigned_abs() as usize >= strands {
                return Err(Error::MalformedGenerator { generator: g as i64, strands });
            }
        }
        Ok(BraidWord { strands, letters })
    }

    pub fn identity(strands: usize) -> Result<Self> {
        Self::new(strands, Vec::new())
    }

    pub fn strands(&self) -> usize {
        self.strands
    }

    pub fn letters(&self) -> &[i32] {
        &self.letters
    }

    pub fn len(&self) -> usize {
        self.letters.len()
    }

    pub fn is_empty(&self) -> bool {
        self.letters.is_empty()
    }

    /// Concatenation `self · other`.
    pub fn concat(&self, other: &BraidWord) -> Result<BraidWord> {
        if self.strands != other.strands {
            return Err(Error::Mismatch(format!(
                "braids on {} and {} strands",
                self.strands, other.strands
            )));
        }
        let mut letters = self.letters.clone();
        letters.extend_from_slice(&other.letters);
        Ok(BraidWord { strands: self.strands, letters })
    }

    pub fn inverse(&self) -> BraidWord {
        BraidWord {
            strands: self.strands,
            letters: self.letters.iter().rev().map(|g| -g).collect(),
        }
    }

    /// Text encoding, the inverse of [`FromStr`].
    pub fn to_text(&self) -> String {
        let body: Vec<String> = self.letters.iter().map(|g| g.to_string()).collect();
        format!("n={}\n{}\n", self.strands, body.join(" "))
    }

    /// `perm[s]` is the bottom position reached by the strand starting at top
    /// position `s`.
    pub fn permutation(&self) -> Vec<usize> {
        let occupant = self.final_occupants();
        let mut end = vec![0; self.strands];
        for (p, &s) in occupant.iter().enumerate() {
            end[s] = p;
        }
        end
    }

    fn final_occupants(&self) -> Vec<usize> {
        let mut occupant: Vec<usize> = (0..self.strands).collect();
        for &g in &self.letters {
            let k = g.unsigned_abs() as usize - 1;
            occupant.swap(k, k + 1);
        }
        occupant
    }

    pub fn closure(&self, kind: ClosureKind) -> Result<Closure> {
        Closure::of(self, kind)
    }

    pub fn linking_matrix(&self, kind: ClosureKind) -> Result<LinkingMatrix> {
        self.closure(kind)?.linking_matrix(self)
    }
}

impl fmt::Display for BraidWord {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(&self.to_text())
    }
}

impl FromStr for BraidWord {
    type Err = Error;

    fn from_str(text: &str) -> Result<Self> {
        let mut tokens = text.split_whitespace();
        let header = tokens
            .next()
            .ok_or_else(|| Error::MalformedHeader("missing `n=<strands>` header".into()))?;
        let n_text = header
            .strip_prefix("n=")
            .ok_or_else(|| Error::MalformedHeader(format!("expected `n=<strands>`, got `{header}`")))?;
        let strands: i64 = n_text
            .parse()
            .map_err(|_| Error::MalformedHeader(format!("bad strand count `{n_text}`")))?;
        if strands < 1 {
            return Err(Error::MalformedHeader(format!("n={strands} must be at least 1")));
        }
        let strands = strands as usize;
        let mut letters = Vec::new();
        for tok in tokens {
            let g: i64 = tok
                .parse()
                .map_err(|_| Error::Invalid(format!("bad generator token `{tok}`")))?;
            if g == 0 || g.unsigned_abs() as usize >= strands {
                return Err(Error::MalformedGenerator { generator: g, strands });
            }
            letters.push(g as i32);
        }
        BraidWord::new(strands, letters)
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub enum ClosureKind {
    Trace,
    Plat,
}

impl FromStr for ClosureKind {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s {
            "trace" | "Trace" => Ok(ClosureKind::Trace),
            "plat" | "Plat" => Ok(ClosureKind::Plat),
            _ => Err(Error::Invalid(format!("unknown closure `{s}`"))),
        }
    }
}

/// Partition of a braid's strands into link components, with orientations.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Closure {
    pub kind: ClosureKind,
    /// Component index of each strand (indexed by top position).
    pub component: Vec<usize>,
    /// +1 if the component runs down the strand, -1 if it runs up.
    pub direction: Vec<i8>,
    pub count: usize,
}

impl Closure {
    fn of(b: &BraidWord, kind: ClosureKind) -> Result<Closure> {
        let n = b.strands;
        let end = b.permutation();
        let mut component = vec![usize::MAX; n];
        let mut direction = vec![1i8; n];
        let mut count = 0;
        match kind {
            ClosureKind::Trace => {
                for s0 in 0..n {
                    if component[s0] != usize::MAX {
                        continue;
                    }
                    let mut s = s0;
                    while component[s] == usize::MAX {
                        component[s] = count;
                        s = end[s];
                    }
                    count += 1;
                }
            }
            ClosureKind::Plat => {
                if n % 2 == 1 {
                    return Err(Error::OddPlat(n));
                }
                let occupant = b.final_occupants();
                for s0 in 0..n {
                    if component[s0] != usize::MAX {
                        continue;
                    }
                    // Down s0, across the bottom cap, up the partner strand,
                    // across the top cap, and repeat.
                    let mut s = s0;
                    loop {
                        component[s] = count;
                        direction[s] = 1;
                        let up = occupant[end[s] ^ 1];
                        component[up] = count;
                        direction[up] = -1;
                        s = up ^ 1;
                        if s == s0 {
                            break;
                        }
                    }
                    count += 1;
                }
            }
        }
        Ok(Closure { kind, component, direction, count })
    }

    /// Strand lists per component.
    pub fn components(&self) -> Vec<Vec<usize>> {
        let mut out = vec![Vec::new(); self.count];
        for (s, &c) in self.component.iter().enumerate() {
            out[c].push(s);
        }
        out
    }

    fn linking_matrix(&self, b: &BraidWord) -> Result<LinkingMatrix> {
        let c = self.count;
        let mut twice = vec![vec![0i64; c]; c];
        let mut occupant: Vec<usize> = (0..b.strands).collect();
        for &g in &b.letters {
            let k = g.unsigned_abs() as usize - 1;
            let (sa, sb) = (occupant[k], occupant[k + 1]);
            let (ca, cb) = (self.component[sa], self.component[sb]);
            if ca != cb {
                let sign = g.signum() as i64 * self.direction[sa] as i64 * self.direction[sb] as i64;
                twice[ca][cb] += sign;
                twice[cb][ca] += sign;
            }
            occupant.swap(k, k + 1);
        }
        let mut entries = vec![vec![0i64; c]; c];
        for i in 0..c {
            for j in 0..c {
                if twice[i][j] % 2 != 0 {
                    return Err(Error::Invalid(format!(
                        "odd crossing count between components {i} and {j}"
                    )));
                }
                entries[i][j] = twice[i][j] / 2;
            }
        }
        Ok(LinkingMatrix { components: c, entries })
    }
}

/// Pairwise linking numbers of a link's components.
#[derive(Debug, Clone, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub struct LinkingMatrix {
    pub components: usize,
    pub entries: Vec<Vec<i64>>,
}

impl LinkingMatrix {
    pub fn zero(components: usize) -> Self {
        LinkingMatrix { components, entries: vec![vec![0; components]; components] }
    }

    /// Validate a symmetric zero-diagonal matrix.
    pub fn from_entries(entries: Vec<Vec<i64>>) -> Result<Self> {
        let c = entries.len();
        for (i, row) in entries.iter().enumerate() {
            if row.len() != c {
                return Err(Error::Invalid("linking matrix must be square".into()));
            }
            if row[i] != 0 {
                return Err(Error::Invalid("linking matrix must have zero diagonal".into()));
            }
            for j in 0..c {
                if entries[j][i] != row[j] {
                    return Err(Error::Invalid("linking matrix must be symmetric".into()));
                }
            }
        }
        Ok(LinkingMatrix { components: c, entries })
    }

    pub fn get(&self, i: usize, j: usize) -> i64 {
        self.entries[i][j]
    }

    pub fn set(&mut self, i: usize, j: usize, v: i64) {
        assert!(i != j, "diagonal of a linking matrix is zero");
        self.entries[i][j] = v;
        self.entries[j][i] = v;
    }

    /// Split union: block-diagonal sum.
    pub fn split_union(&self, other: &LinkingMatrix) -> LinkingMatrix {
        let c = self.components + other.components;
        let mut out = LinkingMatrix::zero(c);
        for i in 0..self.components {
            for j in 0..self.components {
                out.entries[i][j] = self.entries[i][j];
            }
        }
        for i in 0..other.components {
            for j in 0..other.components {
                out.entries[self.components + i][self.components + j] = other.entries[i][j];
            }
        }
        out
    }

    /// Relabel components: new component `k` is old component `perm[k]`.
    pub fn permuted(&self, perm: &[usize]) -> LinkingMatrix {
        let c = self.components;
        let mut out = LinkingMatrix::zero(c);
        for i in 0..c {
            for j in 0..c {
                out.entries[i][j] = self.entries[perm[i]][perm[j]];
            }
        }
        out
    }
}
