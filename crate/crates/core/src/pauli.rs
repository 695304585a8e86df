//! Signed Pauli strings over GF(2) symplectic pairs.
//!
//! An operator is stored in the normal form `sign * X^x Z^z` with bit
//! vectors `x`, `z` over the qubits and `sign` in {+1, -1}. A site where
//! both bits are set carries the product XZ (= -iY); the sign field only
//! ever tracks the real sign, which is why products of anticommuting
//! operators (imaginary global phase) are rejected rather than mangled.

use crate::bits::{gf2_rank, reduce_against, BitVec};
use crate::error::{Error, Result};
use std::fmt;

#[derive(Clone, PartialEq, Eq, Hash)]
pub struct PauliOp {
    x: BitVec,
    z: BitVec,
    negative: bool,
}

impl PauliOp {
    pub fn identity(n: usize) -> Self {
        PauliOp {
            x: BitVec::zeros(n),
            z: BitVec::zeros(n),
            negative: false,
        }
    }

    /// Product of X on the listed qubits.
    pub fn x_string(n: usize, support: &[usize]) -> Self {
        PauliOp {
            x: BitVec::from_indices(n, support),
            z: BitVec::zeros(n),
            negative: false,
        }
    }

    /// Product of Z on the listed qubits.
    pub fn z_string(n: usize, support: &[usize]) -> Self {
        PauliOp {
            x: BitVec::zeros(n),
            z: BitVec::from_indices(n, support),
            negative: false,
        }
    }

    pub fn from_parts(x: BitVec, z: BitVec, negative: bool) -> Result<Self> {
        if x.len() != z.len() {
            return Err(Error::QubitMismatch {
                left: x.len(),
                right: z.len(),
            });
        }
        Ok(PauliOp { x, z, negative })
    }

    pub fn qubits(&self) -> usize {
        self.x.len()
    }

    pub fn x_bits(&self) -> &BitVec {
        &self.x
    }

    pub fn z_bits(&self) -> &BitVec {
        &self.z
    }

    pub fn sign(&self) -> i8 {
        if self.negative {
            -1
        } else {
            1
        }
    }

    pub fn is_identity(&self) -> bool {
        self.x.is_zero() && self.z.is_zero() && !self.negative
    }

    /// Number of qubits acted on nontrivially.
    pub fn weight(&self) -> usize {
        let mut w = self.x.clone();
        // x | z, via two popcounts: |x| + |z| - |x & z| would do too, but
        // cloning once keeps it obvious.
        for i in self.z.iter_ones() {
            w.set(i, true);
        }
        w.count_ones()
    }

    fn check_qubits(&self, other: &PauliOp) -> Result<()> {
        if self.qubits() != other.qubits() {
            return Err(Error::QubitMismatch {
                left: self.qubits(),
                right: other.qubits(),
            });
        }
        Ok(())
    }

    /// Symplectic commutation test: true iff the operators commute.
    pub fn commutes(&self, other: &PauliOp) -> Result<bool> {
        self.check_qubits(other)?;
        let cross = self.x.overlap(&other.z) + self.z.overlap(&other.x);
        Ok(cross.is_multiple_of(2))
    }

    /// Normal-form product `self * other`.
    ///
    /// Reordering other's X part past self's Z part contributes
    /// (-1)^{|z_self & x_other|}; anticommuting inputs would need a factor
    /// of +/-i and are rejected.
    pub fn multiply(&self, other: &PauliOp) -> Result<PauliOp> {
        if !self.commutes(other)? {
            return Err(Error::AnticommutingProduct);
        }
        let swaps = self.z.overlap(&other.x);
        let mut x = self.x.clone();
        x.xor_assign(&other.x);
        let mut z = self.z.clone();
        z.xor_assign(&other.z);
        Ok(PauliOp {
            x,
            z,
            negative: self.negative ^ other.negative ^ (swaps % 2 == 1),
        })
    }

    /// Row `x ++ z` over 2n bits; the GF(2) shadow used by every rank
    /// computation downstream.
    pub fn symplectic_row(&self) -> BitVec {
        self.x.concat(&self.z)
    }
}

// Renders like "-X0 Z3 X5Z5" (an XZ site prints both letters).
impl fmt::Debug for PauliOp {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.negative {
            write!(f, "-")?;
        }
        let mut any = false;
        for i in 0..self.qubits() {
            let (xb, zb) = (self.x.get(i), self.z.get(i));
            if xb || zb {
                if any {
                    write!(f, " ")?;
                }
                if xb {
                    write!(f, "X{i}")?;
                }
                if zb {
                    write!(f, "Z{i}")?;
                }
                any = true;
            }
        }
        if !any {
            write!(f, "I")?;
        }
        Ok(())
    }
}

/// Greedy maximal independent subset, in input order.
///
/// Fails if any pair anticommutes; dependent operators are silently
/// dropped (that is the point of calling it).
pub fn independent_generators(ops: &[PauliOp]) -> Result<Vec<PauliOp>> {
    for (i, a) in ops.iter().enumerate() {
        for (j, b) in ops.iter().enumerate().skip(i + 1) {
            if !a.commutes(b)? {
                return Err(Error::NonCommutingPair { i, j });
            }
        }
    }
    let mut basis: Vec<(usize, BitVec)> = Vec::new();
    let mut kept = Vec::new();
    for op in ops {
        if let Some(reduced) = reduce_against(op.symplectic_row(), &basis) {
            let pivot = reduced.first_one().expect("nonzero");
            basis.push((pivot, reduced));
            kept.push(op.clone());
        }
    }
    Ok(kept)
}

/// An abelian group of signed Pauli operators, held as an independent
/// generating set over n qubits.
#[derive(Clone, Debug)]
pub struct StabilizerGroup {
    n: usize,
    generators: Vec<PauliOp>,
}

impl StabilizerGroup {
    /// Validates pairwise commutation and independence of `generators`.
    pub fn new(n: usize, generators: Vec<PauliOp>) -> Result<Self> {
        for (i, g) in generators.iter().enumerate() {
            if g.qubits() != n {
                return Err(Error::QubitMismatch {
                    left: n,
                    right: g.qubits(),
                });
            }
            if g.is_identity() {
                return Err(Error::DependentGenerator { index: i });
            }
        }
        for (i, a) in generators.iter().enumerate() {
            for (j, b) in generators.iter().enumerate().skip(i + 1) {
                if !a.commutes(b)? {
                    return Err(Error::NonCommutingPair { i, j });
                }
            }
        }
        let rows: Vec<BitVec> = generators.iter().map(|g| g.symplectic_row()).collect();
        if gf2_rank(&rows) != generators.len() {
            // find the first dependent one for the message
            let mut basis: Vec<(usize, BitVec)> = Vec::new();
            for (i, row) in rows.into_iter().enumerate() {
                match reduce_against(row, &basis) {
                    Some(r) => {
                        let p = r.first_one().unwrap();
                        basis.push((p, r));
                    }
                    None => return Err(Error::DependentGenerator { index: i }),
                }
            }
            unreachable!("rank deficit without a dependent row");
        }
        Ok(StabilizerGroup { n, generators })
    }

    pub fn qubits(&self) -> usize {
        self.n
    }

    pub fn rank(&self) -> usize {
        self.generators.len()
    }

    pub fn generators(&self) -> &[PauliOp] {
        &self.generators
    }

    /// True when the group fixes a single state (rank = qubit count).
    pub fn is_pure(&self) -> bool {
        self.rank() == self.n
    }
}
