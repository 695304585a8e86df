//! Dense state vectors over n qubits.
//!
//! Basis ordering: bit `i` of the amplitude index is the Z-basis value of
//! qubit `i` (0 for the +1 eigenstate). Everything here is brute force on
//! purpose; the dense path exists to cross-check the clever ones.

use crate::error::{Error, Result};
use crate::pauli::PauliOp;
use num_complex::Complex64;

/// Dense states are refused above this many qubits (1 GiB of amplitudes).
pub const MAX_DENSE_QUBITS: usize = 26;

#[derive(Clone)]
pub struct DenseState {
    qubits: usize,
    amps: Vec<Complex64>,
}

impl DenseState {
    pub fn from_amplitudes(qubits: usize, amps: Vec<Complex64>) -> Result<Self> {
        if qubits > MAX_DENSE_QUBITS {
            return Err(Error::TooLarge {
                size: qubits,
                limit: MAX_DENSE_QUBITS,
            });
        }
        if amps.len() != 1 << qubits {
            return Err(Error::DimensionMismatch {
                qubits,
                got: amps.len(),
            });
        }
        Ok(DenseState { qubits, amps })
    }

    pub fn zero_state(qubits: usize) -> Result<Self> {
        if qubits > MAX_DENSE_QUBITS {
            return Err(Error::TooLarge {
                size: qubits,
                limit: MAX_DENSE_QUBITS,
            });
        }
        let mut amps = vec![Complex64::new(0.0, 0.0); 1usize << qubits];
        amps[0] = Complex64::new(1.0, 0.0);
        Ok(DenseState { qubits, amps })
    }

    pub fn qubits(&self) -> usize {
        self.qubits
    }

    pub fn amplitudes(&self) -> &[Complex64] {
        &self.amps
    }

    pub(crate) fn amplitudes_mut(&mut self) -> &mut [Complex64] {
        &mut self.amps
    }

    pub fn norm(&self) -> f64 {
        self.amps.iter().map(|a| a.norm_sqr()).sum::<f64>().sqrt()
    }

    pub fn normalize(&mut self) -> Result<()> {
        let n = self.norm();
        if n == 0.0 || !n.is_finite() {
            return Err(Error::invalid(format!("cannot normalize state with norm {n}")));
        }
        for a in &mut self.amps {
            *a /= n;
        }
        Ok(())
    }

    pub fn inner(&self, other: &DenseState) -> Result<Complex64> {
        if self.qubits != other.qubits {
            return Err(Error::QubitMismatch {
                left: self.qubits,
                right: other.qubits,
            });
        }
        Ok(self
            .amps
            .iter()
            .zip(&other.amps)
            .map(|(a, b)| a.conj() * b)
            .sum())
    }

    /// `op |self>` for a signed Pauli string:
    /// `X^x Z^z |b> = sign * (-1)^{<z,b>} |b ^ x>`.
    pub fn apply(&self, op: &PauliOp) -> Result<DenseState> {
        self.check_op(op)?;
        let x = op.x_bits().as_u64();
        let z = op.z_bits().as_u64();
        let sign = f64::from(op.sign());
        let mut out = vec![Complex64::new(0.0, 0.0); self.amps.len()];
        for (b, &a) in self.amps.iter().enumerate() {
            let phase = if (b as u64 & z).count_ones().is_multiple_of(2) {
                sign
            } else {
                -sign
            };
            out[b ^ x as usize] = phase * a;
        }
        Ok(DenseState {
            qubits: self.qubits,
            amps: out,
        })
    }

    /// `<self| op |self>`, without materializing the image state.
    pub fn expectation(&self, op: &PauliOp) -> Result<Complex64> {
        self.check_op(op)?;
        let x = op.x_bits().as_u64() as usize;
        let z = op.z_bits().as_u64();
        let sign = f64::from(op.sign());
        let mut acc = Complex64::new(0.0, 0.0);
        for (b, &a) in self.amps.iter().enumerate() {
            let phase = if (b as u64 & z).count_ones().is_multiple_of(2) {
                sign
            } else {
                -sign
            };
            acc += self.amps[b ^ x].conj() * (phase * a);
        }
        Ok(acc)
    }

    fn check_op(&self, op: &PauliOp) -> Result<()> {
        if op.qubits() != self.qubits {
            return Err(Error::QubitMismatch {
                left: self.qubits,
                right: op.qubits(),
            });
        }
        Ok(())
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::bits::BitVec;

    fn plus_state(n: usize) -> DenseState {
        let dim = 1usize << n;
        let amp = Complex64::new(1.0 / (dim as f64).sqrt(), 0.0);
        DenseState::from_amplitudes(n, vec![amp; dim]).unwrap()
    }

    #[test]
    fn zero_state_expectations() {
        let psi = DenseState::zero_state(3).unwrap();
        let z01 = PauliOp::z_string(3, &[0, 1]);
        let x0 = PauliOp::x_string(3, &[0]);
        assert_eq!(psi.expectation(&z01).unwrap().re, 1.0);
        assert_eq!(psi.expectation(&x0).unwrap().re, 0.0);
    }

    #[test]
    fn plus_state_expectations() {
        let psi = plus_state(2);
        let xx = PauliOp::x_string(2, &[0, 1]);
        let z0 = PauliOp::z_string(2, &[0]);
        assert!((psi.expectation(&xx).unwrap().re - 1.0).abs() < 1e-12);
        assert!(psi.expectation(&z0).unwrap().norm() < 1e-12);
    }

    #[test]
    fn apply_matches_expectation() {
        let n = 4;
        let mut amps = vec![Complex64::new(0.0, 0.0); 16];
        for (i, a) in amps.iter_mut().enumerate() {
            *a = Complex64::new((i as f64 * 0.37).sin(), (i as f64 * 0.11).cos());
        }
        let mut psi = DenseState::from_amplitudes(n, amps).unwrap();
        psi.normalize().unwrap();
        let op = PauliOp::from_parts(
            BitVec::from_indices(n, &[1, 3]),
            BitVec::from_indices(n, &[0, 1]),
            true,
        )
        .unwrap();
        let direct = psi.expectation(&op).unwrap();
        let via_apply = psi.inner(&psi.apply(&op).unwrap()).unwrap();
        assert!((direct - via_apply).norm() < 1e-12);
    }

    #[test]
    fn pauli_apply_is_involutive_up_to_sign() {
        // X^x Z^z applied twice gives (-1)^{<x,z>} times the identity.
        let n = 3;
        let psi = plus_state(n);
        let op = PauliOp::from_parts(
            BitVec::from_indices(n, &[0, 2]),
            BitVec::from_indices(n, &[2]),
            false,
        )
        .unwrap();
        let twice = psi.apply(&op).unwrap().apply(&op).unwrap();
        let ip = psi.inner(&twice).unwrap();
        assert!((ip.re + 1.0).abs() < 1e-12, "<x,z> = 1 so sign is -1, got {ip}");
    }
}
