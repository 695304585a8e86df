//! Ground-space structure: degeneracy counting and explicit ground states.
//!
//! On the open-boundary lattice the stabilizers leave a `2^(ring_len - 1)`
//! dimensional ground space behind: the perimeter ring carries one free
//! pair-flip mode per position, with a single global relation (the product
//! of all pair flips equals the product of all vertex operators). Ground
//! states are labelled by ring configurations up to that relation, and a
//! coefficient family assigns each configuration an amplitude by its flip
//! weight.

use crate::bits::gf2_rank;
use crate::dense::{DenseState, MAX_DENSE_QUBITS};
use crate::error::{Error, Result};
use crate::lattice::{Boundary, Lattice};
use crate::pauli::{PauliOp, StabilizerGroup};
use num_complex::Complex64;
use serde::{Deserialize, Serialize};

/// A pattern of pair flips on the boundary ring, one bit per ring position.
///
/// Configurations come in equivalent pairs (a pattern and its complement
/// produce the same state); the canonical representative has the last bit
/// clear.
#[derive(Clone, Copy, PartialEq, Eq, Hash, Debug)]
pub struct BoundaryConfig {
    len: usize,
    bits: u64,
}

impl BoundaryConfig {
    pub fn new(len: usize, bits: u64) -> Result<Self> {
        if len == 0 || len > 64 {
            return Err(Error::invalid(format!("ring length {len} out of range 1..=64")));
        }
        if len < 64 && bits >> len != 0 {
            return Err(Error::invalid(format!(
                "config bits {bits:#x} wider than ring length {len}"
            )));
        }
        Ok(BoundaryConfig { len, bits })
    }

    pub fn from_positions(len: usize, positions: &[usize]) -> Result<Self> {
        let mut bits = 0u64;
        for &p in positions {
            if p >= len {
                return Err(Error::IndexOutOfRange {
                    what: "ring position",
                    index: p,
                    count: len,
                });
            }
            bits |= 1 << p;
        }
        BoundaryConfig::new(len, bits)
    }

    pub fn len(&self) -> usize {
        self.len
    }

    pub fn is_empty(&self) -> bool {
        self.bits == 0
    }

    pub fn bits(&self) -> u64 {
        self.bits
    }

    pub fn get(&self, i: usize) -> bool {
        assert!(i < self.len);
        self.bits >> i & 1 == 1
    }

    pub fn weight(&self) -> usize {
        self.bits.count_ones() as usize
    }

    pub fn complement(&self) -> Self {
        let mask = if self.len == 64 {
            u64::MAX
        } else {
            (1u64 << self.len) - 1
        };
        BoundaryConfig {
            len: self.len,
            bits: self.bits ^ mask,
        }
    }

    pub fn is_canonical(&self) -> bool {
        !self.get(self.len - 1)
    }

    /// The representative of {self, complement} with the last bit clear.
    pub fn canonical(&self) -> Self {
        if self.is_canonical() {
            *self
        } else {
            self.complement()
        }
    }
}

/// All canonical configurations of a ring, in increasing bit order.
pub fn canonical_configs(len: usize) -> Result<impl Iterator<Item = BoundaryConfig>> {
    if len == 0 || len > 32 {
        return Err(Error::TooLarge { size: len, limit: 32 });
    }
    Ok((0u64..1 << (len - 1)).map(move |bits| BoundaryConfig { len, bits }))
}

/// Amplitude profile over ring configurations, as a function of flip weight.
#[derive(Clone, Debug, Serialize, Deserialize)]
pub enum CoefficientFamily {
    /// Every configuration enters with coefficient 1.
    EqualAmplitude,
    /// Weight-`l` configurations enter with `a^l * exp(i*phase(l))`;
    /// unlisted weights have phase zero.
    Geometric { a: f64, phases: Vec<(usize, f64)> },
}

impl CoefficientFamily {
    pub fn geometric(a: f64) -> Result<Self> {
        if !(a > 0.0 && a <= 1.0) || !a.is_finite() {
            return Err(Error::BadAmplitude { a });
        }
        Ok(CoefficientFamily::Geometric { a, phases: Vec::new() })
    }

    pub fn geometric_with_phases(a: f64, phases: Vec<(usize, f64)>) -> Result<Self> {
        if !(a > 0.0 && a <= 1.0) || !a.is_finite() {
            return Err(Error::BadAmplitude { a });
        }
        Ok(CoefficientFamily::Geometric { a, phases })
    }

    pub fn is_equal_amplitude(&self) -> bool {
        matches!(self, CoefficientFamily::EqualAmplitude)
    }

    /// Magnitude parameter: 1 for the equal-amplitude family.
    pub fn amplitude(&self) -> f64 {
        match self {
            CoefficientFamily::EqualAmplitude => 1.0,
            CoefficientFamily::Geometric { a, .. } => *a,
        }
    }

    pub fn coefficient(&self, weight: usize) -> Complex64 {
        match self {
            CoefficientFamily::EqualAmplitude => Complex64::new(1.0, 0.0),
            CoefficientFamily::Geometric { a, phases } => {
                let phase = phases
                    .iter()
                    .find(|(l, _)| *l == weight)
                    .map(|(_, p)| *p)
                    .unwrap_or(0.0);
                Complex64::from_polar(a.powi(weight as i32), phase)
            }
        }
    }
}

/// Log2 of the ground-space dimension: qubit count minus the GF(2) rank of
/// the stabilizer generators. `2(rows+cols) - 1` on the open rectangle, 2 on
/// the torus.
pub fn degeneracy_log2(lat: &Lattice) -> usize {
    let rows: Vec<_> = lat.stabilizers().iter().map(|s| s.symplectic_row()).collect();
    lat.spin_count() - gf2_rank(&rows)
}

/// A maximal stabilizer group fixing one ground state.
///
/// Open boundaries: all plaquettes, all stars, and the pair flips at ring
/// positions `0..ring_len-1` (the last one is their product with the
/// stars); the fixed state is the equal-amplitude superposition over all
/// ring configurations. Torus: the independent stabilizers plus both cycle
/// operators, fixing the (+1, +1) cycle sector.
pub fn stabilizer_ground_state(lat: &Lattice) -> Result<StabilizerGroup> {
    let mut gens = lat.stabilizers();
    if lat.boundary().is_open() {
        for i in 0..lat.ring_len() - 1 {
            gens.push(lat.pair_flip_op(i)?);
        }
    } else {
        gens = crate::pauli::independent_generators(&gens)?;
        // Two commuting flip cycles (one per winding direction) pick the
        // (+1, +1) sector; the X/Z pair from `torus_cycles` would not do,
        // since those anticommute with each other.
        let row_loop: Vec<usize> = (0..lat.rows()).map(|r| lat.h_index(r, 0)).collect();
        let col_loop: Vec<usize> = (0..lat.cols()).map(|c| lat.v_index(0, c)).collect();
        gens.push(PauliOp::x_string(lat.spin_count(), &row_loop));
        gens.push(PauliOp::x_string(lat.spin_count(), &col_loop));
    }
    StabilizerGroup::new(lat.spin_count(), gens)
}

fn support_mask(support: &[usize]) -> u64 {
    support.iter().fold(0u64, |m, &s| m | 1 << s)
}

/// Dense ground state of the plaquette-boundary lattice for a coefficient
/// family: the normalized sum over canonical ring configurations `e` of
/// `coefficient(|e|)` times the flipped basis state, symmetrized over the
/// full vertex-operator group.
pub fn dense_ground_state(lat: &Lattice, family: &CoefficientFamily) -> Result<DenseState> {
    if lat.boundary() != Boundary::Plaquette {
        return Err(match lat.boundary() {
            Boundary::Periodic => Error::NotOpenBoundary,
            _ => Error::invalid(
                "dense ground-state construction is implemented for plaquette boundaries",
            ),
        });
    }
    let n = lat.spin_count();
    if n > MAX_DENSE_QUBITS {
        return Err(Error::TooLarge {
            size: n,
            limit: MAX_DENSE_QUBITS,
        });
    }
    let ring_len = lat.ring_len();
    let pair_masks: Vec<u64> = (0..ring_len)
        .map(|i| Ok(support_mask(&lat.pair_flip_support(i)?)))
        .collect::<Result<_>>()?;
    let star_masks: Vec<u64> = (0..lat.star_count())
        .map(|s| Ok(support_mask(&lat.star_support(s)?)))
        .collect::<Result<_>>()?;

    let mut state = DenseState::zero_state(n)?;
    let amps = state.amplitudes_mut();
    amps[0] = Complex64::new(0.0, 0.0);

    for config in canonical_configs(ring_len)? {
        let c = family.coefficient(config.weight());
        let mut base = 0u64;
        let mut bits = config.bits();
        while bits != 0 {
            base ^= pair_masks[bits.trailing_zeros() as usize];
            bits &= bits - 1;
        }
        // Gray-code walk over the vertex-operator group: one mask flip per
        // visited subset.
        let mut mask = base;
        amps[mask as usize] += c;
        for g in 1u64..1 << star_masks.len() {
            let flip = (g ^ (g >> 1)) ^ ((g - 1) ^ ((g - 1) >> 1));
            mask ^= star_masks[flip.trailing_zeros() as usize];
            amps[mask as usize] += c;
        }
    }
    state.normalize()?;
    Ok(state)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::lattice::{Boundary, Lattice};

    #[test]
    fn config_canonicalization() {
        let c = BoundaryConfig::new(8, 0b1000_0001).unwrap();
        assert!(!c.is_canonical());
        let canon = c.canonical();
        assert_eq!(canon.bits(), 0b0111_1110);
        assert!(canon.is_canonical());
        assert_eq!(canon.canonical(), canon);
        assert_eq!(c.complement().complement(), c);
    }

    #[test]
    fn config_rejects_out_of_range() {
        assert!(BoundaryConfig::new(4, 0b10000).is_err());
        assert!(BoundaryConfig::from_positions(4, &[4]).is_err());
        assert!(BoundaryConfig::new(0, 0).is_err());
    }

    #[test]
    fn canonical_enumeration_covers_half() {
        let all: Vec<_> = canonical_configs(6).unwrap().collect();
        assert_eq!(all.len(), 32);
        assert!(all.iter().all(|c| c.is_canonical()));
    }

    #[test]
    fn geometric_family_domain() {
        assert!(CoefficientFamily::geometric(0.0).is_err());
        assert!(CoefficientFamily::geometric(1.2).is_err());
        assert!(CoefficientFamily::geometric(f64::NAN).is_err());
        let fam = CoefficientFamily::geometric(0.5).unwrap();
        assert_eq!(fam.coefficient(3), Complex64::new(0.125, 0.0));
    }

    #[test]
    fn phases_apply_by_weight() {
        let fam =
            CoefficientFamily::geometric_with_phases(1.0, vec![(2, std::f64::consts::PI)]).unwrap();
        assert!((fam.coefficient(2).re + 1.0).abs() < 1e-15);
        assert!((fam.coefficient(1).re - 1.0).abs() < 1e-15);
    }

    #[test]
    fn open_degeneracy_matches_ring() {
        for (m, n) in [(2, 2), (2, 3), (3, 3), (4, 2), (4, 4)] {
            for bc in [Boundary::Plaquette, Boundary::Star] {
                let lat = Lattice::new(m, n, bc).unwrap();
                assert_eq!(
                    degeneracy_log2(&lat),
                    2 * (m + n) - 1,
                    "{bc:?} {m}x{n}"
                );
            }
        }
    }

    #[test]
    fn torus_degeneracy_is_two() {
        for (m, n) in [(2, 2), (3, 3), (3, 4)] {
            let lat = Lattice::new(m, n, Boundary::Periodic).unwrap();
            assert_eq!(degeneracy_log2(&lat), 2, "{m}x{n} torus");
        }
    }

    #[test]
    fn ground_group_is_pure() {
        for bc in [Boundary::Plaquette, Boundary::Star, Boundary::Periodic] {
            let lat = Lattice::new(3, 2, bc).unwrap();
            let group = stabilizer_ground_state(&lat).unwrap();
            assert!(group.is_pure(), "{bc:?}: rank {} of {}", group.rank(), lat.spin_count());
        }
    }

    #[test]
    fn dense_state_is_stabilized() {
        let lat = Lattice::new(2, 2, Boundary::Plaquette).unwrap();
        let psi = dense_ground_state(&lat, &CoefficientFamily::EqualAmplitude).unwrap();
        assert!((psi.norm() - 1.0).abs() < 1e-12);
        for op in stabilizer_ground_state(&lat).unwrap().generators() {
            let e = psi.expectation(op).unwrap();
            assert!(
                (e.re - 1.0).abs() < 1e-10 && e.im.abs() < 1e-12,
                "<{op:?}> = {e}"
            );
        }
    }

    #[test]
    fn geometric_state_stays_in_ground_space() {
        let lat = Lattice::new(2, 2, Boundary::Plaquette).unwrap();
        let fam = CoefficientFamily::geometric(0.4).unwrap();
        let psi = dense_ground_state(&lat, &fam).unwrap();
        for p in 0..lat.plaquette_count() {
            let e = psi.expectation(&lat.plaquette_op(p).unwrap()).unwrap();
            assert!((e.re - 1.0).abs() < 1e-10, "plaquette {p}: {e}");
        }
        for s in 0..lat.star_count() {
            let e = psi.expectation(&lat.star_op(s).unwrap()).unwrap();
            assert!((e.re - 1.0).abs() < 1e-10, "star {s}: {e}");
        }
        // pair flips no longer stabilize an asymmetric superposition
        let w = psi.expectation(&lat.pair_flip_op(1).unwrap()).unwrap();
        assert!(w.re < 0.999, "pair flip should not be stabilized, got {w}");
    }

    #[test]
    fn dense_rejects_torus_and_star() {
        let torus = Lattice::new(2, 2, Boundary::Periodic).unwrap();
        assert!(dense_ground_state(&torus, &CoefficientFamily::EqualAmplitude).is_err());
        let star = Lattice::new(2, 2, Boundary::Star).unwrap();
        assert!(dense_ground_state(&star, &CoefficientFamily::EqualAmplitude).is_err());
    }
}
