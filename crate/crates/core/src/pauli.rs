//! Signed qubit Pauli strings `i^k X^x Z^z` on up to 64 qubits.
//!
//! Qubit `j` of a `q`-qubit register is bit `q-1-j` of the masks, which is
//! also its bit in the computational-basis index, so qubit 0 is the most
//! significant tensor factor.

use std::fmt;

use num_complex::Complex;
use serde::{Deserialize, Serialize};

use crate::dense::DenseOperator;
use crate::error::{Error, Result};
use crate::scalar::Real;

pub const MAX_QUBITS: usize = 64;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub struct PauliString {
    q: usize,
    x: u64,
    z: u64,
    /// Power of `i`, mod 4.
    phase: u8,
}

impl PauliString {
    pub fn identity(q: usize) -> Result<Self> {
        if q == 0 || q > MAX_QUBITS {
            return Err(Error::Invalid(format!("qubit count {q} outside 1..={MAX_QUBITS}")));
        }
        Ok(PauliString { q, x: 0, z: 0, phase: 0 })
    }

    pub fn from_masks(q: usize, x: u64, z: u64, phase: u8) -> Self {
        PauliString { q, x, z, phase: phase % 4 }
    }

    #[inline]
    pub fn bit(q: usize, j: usize) -> u64 {
        1u64 << (q - 1 - j)
    }

    pub fn single_x(q: usize, j: usize) -> Self {
        PauliString::from_masks(q, Self::bit(q, j), 0, 0)
    }

    pub fn single_z(q: usize, j: usize) -> Self {
        PauliString::from_masks(q, 0, Self::bit(q, j), 0)
    }

    pub fn qubits(&self) -> usize {
        self.q
    }

    pub fn x_mask(&self) -> u64 {
        self.x
    }

    pub fn z_mask(&self) -> u64 {
        self.z
    }

    pub fn phase(&self) -> u8 {
        self.phase
    }

    pub fn with_phase(mut self, phase: u8) -> Self {
        self.phase = phase % 4;
        self
    }

    pub fn negate(self) -> Self {
        let p = self.phase;
        self.with_phase(p + 2)
    }

    /// Product `self * other`.
    pub fn mul(&self, other: &PauliString) -> PauliString {
        debug_assert_eq!(self.q, other.q);
        let swaps = (self.z & other.x).count_ones() as u8;
        PauliString {
            q: self.q,
            x: self.x ^ other.x,
            z: self.z ^ other.z,
            phase: (self.phase + other.phase + 2 * (swaps % 2)) % 4,
        }
    }

    pub fn commutes(&self, other: &PauliString) -> bool {
        ((self.x & other.z).count_ones() + (self.z & other.x).count_ones()) % 2 == 0
    }

    /// True when the operator is Hermitian, i.e. its eigenvalues are real.
    pub fn is_hermitian(&self) -> bool {
        (self.phase as u32 + (self.x & self.z).count_ones()) % 2 == 0
    }

    /// Same operator up to sign: equal masks.
    pub fn same_support(&self, other: &PauliString) -> bool {
        self.x == other.x && self.z == other.z
    }

    pub fn dense<T: Real>(&self) -> DenseOperator<T> {
        let dim = 1usize << self.q;
        let mut out = DenseOperator::zeros(dim);
        let ip = T::root_of_unity(self.phase as i64, 2);
        for b in 0..dim as u64 {
            let sign = if (self.z & b).count_ones() % 2 == 1 { -T::one() } else { T::one() };
            out.set((b ^ self.x) as usize, b as usize, ip * Complex::new(sign, T::zero()));
        }
        out
    }
}

impl fmt::Display for PauliString {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let prefix = ["+", "+i", "-", "-i"][self.phase as usize];
        write!(f, "{prefix}")?;
        for j in 0..self.q {
            let b = Self::bit(self.q, j);
            let c = match (self.x & b != 0, self.z & b != 0) {
                (false, false) => 'I',
                (true, false) => 'X',
                (false, true) => 'Z',
                // X Z = -i Y, tracked by the phase
                (true, true) => 'W',
            };
            write!(f, "{c}")?;
        }
        Ok(())
    }
}
