//! Boundary excitation dispersion under a weak transverse field.
//!
//! A transverse field on the open-boundary lattice hops the boundary modes
//! around the ring. A hop across R ring sites carries the effective
//! amplitude `J_R = hx^(R+2) / (-2 jm)^(R+1)`, and resumming the couplings
//! gives closed dispersion forms at finite ring length, in the long-ring
//! limit, and in the leading cosine approximation. A numeric resolvent walk
//! over the actual lattice plaquettes independently reproduces `J_R`.

use crate::bits::BitVec;
use crate::error::{Error, Result};
use crate::groundspace::BoundaryConfig;
use crate::lattice::Lattice;
use serde::Serialize;
use std::f64::consts::PI;

/// Largest resolvent expansion order accepted.
pub const MAX_RESOLVENT_ORDER: usize = 6;

/// Field and plaquette couplings of the boundary theory on a ring of
/// given even length; the expansion parameter is
/// `lambda = hx / (-2 jm)`.
#[derive(Clone, Copy, Debug, Serialize)]
pub struct BoundaryCouplings {
    hx: f64,
    jm: f64,
    ring_len: usize,
}

impl BoundaryCouplings {
    pub fn new(hx: f64, jm: f64, ring_len: usize) -> Result<Self> {
        if !hx.is_finite() || !jm.is_finite() {
            return Err(Error::invalid("couplings must be finite"));
        }
        if jm <= 0.0 {
            return Err(Error::ZeroCoupling);
        }
        if ring_len < 4 || !ring_len.is_multiple_of(2) {
            return Err(Error::invalid(format!(
                "ring length must be even and at least 4, got {ring_len}"
            )));
        }
        Ok(BoundaryCouplings { hx, jm, ring_len })
    }

    /// Couplings sized for the boundary ring of an open lattice.
    pub fn for_lattice(lat: &Lattice, hx: f64, jm: f64) -> Result<Self> {
        if !lat.boundary().is_open() {
            return Err(Error::NotOpenBoundary);
        }
        BoundaryCouplings::new(hx, jm, lat.ring_len())
    }

    pub fn hx(&self) -> f64 {
        self.hx
    }

    pub fn jm(&self) -> f64 {
        self.jm
    }

    pub fn ring_len(&self) -> usize {
        self.ring_len
    }

    pub fn lambda(&self) -> f64 {
        self.hx / (-2.0 * self.jm)
    }

    fn lambda_checked(&self) -> Result<f64> {
        let lam = self.lambda();
        if lam.abs() >= 1.0 {
            return Err(Error::invalid(format!(
                "|lambda| = {} is not below 1; the coupling series diverges",
                lam.abs()
            )));
        }
        Ok(lam)
    }

    /// Leading-order energy shift of a hop across `r` ring sites:
    /// `hx^(r+2) / (-2 jm)^(r+1)`.
    pub fn delta_e(&self, r: usize) -> Result<f64> {
        if r == 0 {
            return Err(Error::invalid("hop range must be at least 1"));
        }
        Ok(self.hx.powi(r as i32 + 2) / (-2.0 * self.jm).powi(r as i32 + 1))
    }

    /// Effective couplings `J_R` for `R = 1..=r_max`; `J_R = delta_e(R)`,
    /// and only positive ranges are stored (`J_-R = J_R`).
    pub fn effective_couplings(&self, r_max: usize) -> Result<Vec<f64>> {
        if r_max == 0 || r_max > self.ring_len / 2 {
            return Err(Error::invalid(format!(
                "hop range cap {r_max} outside 1..={}",
                self.ring_len / 2
            )));
        }
        (1..=r_max).map(|r| self.delta_e(r)).collect()
    }

    /// Dispersion at momentum `k` for the finite ring, resummed in closed
    /// form over hop ranges up to half the ring.
    pub fn epsilon_finite(&self, k: f64) -> Result<f64> {
        let lam = self.lambda_checked()?;
        let half = (self.ring_len / 2) as i32;
        let m = half as f64;
        let num = k.cos() - lam + lam.powi(half + 1) * (k * m).cos()
            - lam.powi(half) * (k * (m + 1.0)).cos();
        let den = 1.0 + lam * lam - 2.0 * lam * k.cos();
        Ok(2.0 * self.hx * lam * lam * num / den)
    }

    /// Dispersion in the long-ring limit.
    pub fn epsilon_limit(&self, k: f64) -> Result<f64> {
        let lam = self.lambda_checked()?;
        let den = 1.0 + lam * lam - 2.0 * lam * k.cos();
        Ok(2.0 * self.hx * lam * lam * (k.cos() - lam) / den)
    }

    /// Leading cosine band `2 hx lambda^2 cos k`.
    pub fn epsilon_cosine(&self, k: f64) -> f64 {
        let lam = self.lambda();
        2.0 * self.hx * lam * lam * k.cos()
    }

    /// Uniform bound on `|epsilon_limit - epsilon_finite|`:
    /// `4 |hx| lambda^2 |lambda|^(ring_len/2) / (1 - |lambda|)^2`.
    pub fn finite_size_bound(&self) -> Result<f64> {
        let lam = self.lambda_checked()?;
        let a = lam.abs();
        Ok(4.0 * self.hx.abs() * lam * lam * a.powi((self.ring_len / 2) as i32)
            / ((1.0 - a) * (1.0 - a)))
    }

    /// Direct summation oracle `2 sum_{R=1}^{ring_len/2} J_R cos(kR)`,
    /// term by term with no resummation.
    pub fn coupling_sum(&self, k: f64) -> Result<f64> {
        let js = self.effective_couplings(self.ring_len / 2)?;
        Ok(2.0
            * js.iter()
                .enumerate()
                .map(|(i, j)| j * (k * (i + 1) as f64).cos())
                .sum::<f64>())
    }

    /// The ring's own momenta, `k_j = -pi + 2 pi j / ring_len`.
    pub fn momentum_grid(&self) -> Vec<f64> {
        display_grid(self.ring_len)
    }
}

/// Evenly spaced momenta in `[-pi, pi)`; grids finer than the ring's own
/// are display sampling of the closed forms, not extra physical modes.
pub fn display_grid(points: usize) -> Vec<f64> {
    (0..points)
        .map(|j| -PI + 2.0 * PI * j as f64 / points as f64)
        .collect()
}

/// The three dispersion forms sampled over one momentum grid.
#[derive(Clone, Debug, Serialize)]
pub struct DispersionCurve {
    pub k_grid: Vec<f64>,
    pub eps_finite: Vec<f64>,
    pub eps_limit: Vec<f64>,
    pub eps_cos: Vec<f64>,
}

impl DispersionCurve {
    pub fn sample(c: &BoundaryCouplings, k_grid: &[f64]) -> Result<DispersionCurve> {
        let mut eps_finite = Vec::with_capacity(k_grid.len());
        let mut eps_limit = Vec::with_capacity(k_grid.len());
        let mut eps_cos = Vec::with_capacity(k_grid.len());
        for &k in k_grid {
            eps_finite.push(c.epsilon_finite(k)?);
            eps_limit.push(c.epsilon_limit(k)?);
            eps_cos.push(c.epsilon_cosine(k));
        }
        Ok(DispersionCurve {
            k_grid: k_grid.to_vec(),
            eps_finite,
            eps_limit,
            eps_cos,
        })
    }

    pub fn to_csv(&self) -> String {
        let mut out = String::from("k,eps_finite,eps_limit,eps_cos\n");
        for i in 0..self.k_grid.len() {
            out.push_str(&format!(
                "{},{},{},{}\n",
                self.k_grid[i], self.eps_finite[i], self.eps_limit[i], self.eps_cos[i]
            ));
        }
        out
    }
}

/// Flipped ring positions of `from ^ to` as one contiguous cyclic arc.
fn contiguous_arc(from: &BoundaryConfig, to: &BoundaryConfig) -> Result<(usize, usize)> {
    let len = from.len();
    if to.len() != len {
        return Err(Error::ConfigLengthMismatch {
            expected: len,
            got: to.len(),
        });
    }
    let diff = from.bits() ^ to.bits();
    if diff == 0 {
        return Err(Error::invalid("configurations are identical"));
    }
    let set = |p: usize| diff >> p & 1 == 1;
    let mut starts = Vec::new();
    for p in 0..len {
        if set(p) && !set((p + len - 1) % len) {
            starts.push(p);
        }
    }
    if starts.len() != 1 {
        return Err(Error::invalid(
            "configurations differ by more than one contiguous ring segment",
        ));
    }
    Ok((starts[0], diff.count_ones() as usize))
}

fn violated_plaquettes(lat: &Lattice, flipped: &BitVec) -> Result<usize> {
    let mut v = 0;
    for p in 0..lat.plaquette_count() {
        let support = lat.plaquette_support(p)?;
        if support.iter().filter(|&&s| flipped.get(s)).count() % 2 == 1 {
            v += 1;
        }
    }
    Ok(v)
}

/// Perturbative tunneling amplitude between two boundary configurations
/// differing by one contiguous segment of pair flips, evaluated as a
/// resolvent chain over the actual lattice.
///
/// The chain flips the segment's leading ring spin, then the interior
/// partner of each covered position in order, then the trailing ring spin;
/// after every flip but the last, the factor `1 / (-2 jm * violations)`
/// enters with the violation count read off the plaquette supports.
/// Corner positions contribute no interior partner, so segments across a
/// corner connect at one order lower. `order` must match the chain length
/// exactly; mismatched orders return 0 (too few flips cannot connect the
/// states, and higher orders are outside the leading-order truncation).
pub fn resolvent_shift(
    lat: &Lattice,
    from: &BoundaryConfig,
    to: &BoundaryConfig,
    c: &BoundaryCouplings,
    order: usize,
) -> Result<f64> {
    let ring = lat.boundary_ring()?;
    let len = ring.len();
    if from.len() != len {
        return Err(Error::ConfigLengthMismatch {
            expected: len,
            got: from.len(),
        });
    }
    if c.ring_len() != len {
        return Err(Error::invalid(format!(
            "couplings sized for ring {}, lattice ring is {len}",
            c.ring_len()
        )));
    }
    if order == 0 || order > MAX_RESOLVENT_ORDER {
        return Err(Error::invalid(format!(
            "expansion order {order} outside 1..={MAX_RESOLVENT_ORDER}"
        )));
    }
    let (start, r) = contiguous_arc(from, to)?;

    let mut flips = vec![ring[start]];
    for off in 0..r {
        if let Some(alpha) = lat.interior_partner((start + off) % len)? {
            flips.push(alpha);
        }
    }
    flips.push(ring[(start + r) % len]);

    if order != flips.len() {
        return Ok(0.0);
    }

    let mut mask = BitVec::zeros(lat.spin_count());
    let mut value = c.hx().powi(order as i32);
    for (step, &spin) in flips.iter().enumerate() {
        mask.set(spin, true);
        if step + 1 == flips.len() {
            break;
        }
        let v = violated_plaquettes(lat, &mask)?;
        if v == 0 {
            return Err(Error::VanishingDenominator { step: step + 1 });
        }
        value /= -2.0 * c.jm() * v as f64;
    }
    Ok(value)
}
