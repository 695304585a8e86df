//! Sparse diagonalization of the stabilizer Hamiltonian with a transverse
//! field.
//!
//! In the computational basis every Z-type stabilizer is diagonal and every
//! X-type term flips a fixed set of bits, so the Hamiltonian acts matrix
//! free through masks and parity popcounts. Low-lying eigenpairs come from
//! restarted Lanczos iterations with full reorthogonalization; a single
//! Krylov space holds one copy of each degenerate level, so each restart
//! deflates what is already locked and recovers the next copy. Operators of
//! dimension at most 4096 go through the dense solver instead.

use crate::error::{Error, Result};
use crate::lapack;
use crate::lattice::Lattice;
use crate::pauli::PauliOp;
use serde::Serialize;

/// Dimension at and below which eigenproblems are solved densely.
pub const DENSE_FALLBACK_DIM: usize = 1 << 12;
/// Most eigenpairs the iterative path will chase.
pub const MAX_ITERATIVE_K: usize = 64;
/// Largest spin count `build_hamiltonian` accepts.
pub const MAX_SPECTRUM_QUBITS: usize = 26;

const DIAG_CACHE_LIMIT: usize = 1 << 22;
const MAX_KRYLOV: usize = 160;
const RITZ_CHECK_EVERY: usize = 10;

/// Couplings of `H = -je * (sum of stars) - jm * (sum of plaquettes)
/// + hx * (sum of single-site X)`.
#[derive(Clone, Copy, Debug, PartialEq, Serialize)]
pub struct HamiltonianParams {
    pub je: f64,
    pub jm: f64,
    pub hx: f64,
}

impl HamiltonianParams {
    pub fn new(je: f64, jm: f64, hx: f64) -> Result<Self> {
        if !(je.is_finite() && jm.is_finite() && hx.is_finite()) {
            return Err(Error::invalid("couplings must be finite"));
        }
        if je < 0.0 || jm < 0.0 {
            return Err(Error::invalid(format!(
                "stabilizer couplings must be nonnegative, got je={je}, jm={jm}"
            )));
        }
        Ok(HamiltonianParams { je, jm, hx })
    }
}

/// Real symmetric operator on `2^qubits` basis states, stored term-wise.
///
/// A `z_terms` entry `(mask, c)` adds `c * (-1)^popcount(mask & basis)` to
/// the diagonal; an `x_terms` entry couples `basis` to `basis ^ mask` with
/// weight `c`. Real coefficients and the involutive flip make the operator
/// symmetric by construction. The diagonal is cached up to `2^22` entries
/// and evaluated per element above that.
pub struct SparseOperator {
    qubits: usize,
    z_terms: Vec<(u64, f64)>,
    x_terms: Vec<(u64, f64)>,
    diag: Option<Vec<f64>>,
}

impl SparseOperator {
    pub fn new(
        qubits: usize,
        z_terms: Vec<(u64, f64)>,
        x_terms: Vec<(u64, f64)>,
    ) -> Result<Self> {
        if qubits == 0 || qubits > MAX_SPECTRUM_QUBITS {
            return Err(Error::TooLarge {
                size: qubits,
                limit: MAX_SPECTRUM_QUBITS,
            });
        }
        let dim = 1u64 << qubits;
        for &(mask, c) in z_terms.iter().chain(x_terms.iter()) {
            if mask >= dim {
                return Err(Error::IndexOutOfRange {
                    what: "term mask",
                    index: mask as usize,
                    count: dim as usize,
                });
            }
            if !c.is_finite() {
                return Err(Error::invalid("term coefficient must be finite"));
            }
        }
        if x_terms.iter().any(|&(mask, c)| mask == 0 && c != 0.0) {
            return Err(Error::invalid("flip term must move at least one bit"));
        }
        let z_terms: Vec<_> = z_terms.into_iter().filter(|&(_, c)| c != 0.0).collect();
        let x_terms: Vec<_> = x_terms.into_iter().filter(|&(_, c)| c != 0.0).collect();
        let mut op = SparseOperator {
            qubits,
            z_terms,
            x_terms,
            diag: None,
        };
        if op.dimension() <= DIAG_CACHE_LIMIT {
            op.diag = Some((0..dim).map(|b| op.diagonal_entry_uncached(b)).collect());
        }
        Ok(op)
    }

    pub fn qubits(&self) -> usize {
        self.qubits
    }

    pub fn dimension(&self) -> usize {
        1usize << self.qubits
    }

    pub fn diagonal_entry(&self, basis: u64) -> f64 {
        match &self.diag {
            Some(d) => d[basis as usize],
            None => self.diagonal_entry_uncached(basis),
        }
    }

    fn diagonal_entry_uncached(&self, basis: u64) -> f64 {
        self.z_terms
            .iter()
            .map(|&(mask, c)| {
                if (mask & basis).count_ones().is_multiple_of(2) {
                    c
                } else {
                    -c
                }
            })
            .sum()
    }

    /// `out = H v`; both slices must have length `dimension()`.
    pub fn apply(&self, v: &[f64], out: &mut [f64]) {
        let dim = self.dimension();
        assert_eq!(v.len(), dim, "input length mismatch");
        assert_eq!(out.len(), dim, "output length mismatch");
        match &self.diag {
            Some(d) => {
                for ((o, &di), &vi) in out.iter_mut().zip(d).zip(v) {
                    *o = di * vi;
                }
            }
            None => {
                for (i, o) in out.iter_mut().enumerate() {
                    *o = self.diagonal_entry_uncached(i as u64) * v[i];
                }
            }
        }
        for &(mask, c) in &self.x_terms {
            let m = mask as usize;
            for (i, o) in out.iter_mut().enumerate() {
                *o += c * v[i ^ m];
            }
        }
    }

    /// Column-major dense copy; refused above `DENSE_FALLBACK_DIM`.
    pub fn to_dense(&self) -> Result<Vec<f64>> {
        let dim = self.dimension();
        if dim > DENSE_FALLBACK_DIM {
            return Err(Error::TooLarge {
                size: dim,
                limit: DENSE_FALLBACK_DIM,
            });
        }
        let mut a = vec![0.0; dim * dim];
        for j in 0..dim {
            a[j * dim + j] = self.diagonal_entry(j as u64);
            for &(mask, c) in &self.x_terms {
                a[j * dim + (j ^ mask as usize)] += c;
            }
        }
        Ok(a)
    }
}

fn push_term(
    op: &PauliOp,
    coeff: f64,
    z_terms: &mut Vec<(u64, f64)>,
    x_terms: &mut Vec<(u64, f64)>,
) -> Result<()> {
    if op.x_bits().is_zero() {
        z_terms.push((op.z_bits().as_u64(), coeff));
    } else if op.z_bits().is_zero() {
        x_terms.push((op.x_bits().as_u64(), coeff));
    } else {
        return Err(Error::invalid(
            "stabilizer term mixes X and Z on the same sites",
        ));
    }
    Ok(())
}

/// Assembles the lattice Hamiltonian as a matrix-free operator.
///
/// Whichever stabilizer sector is Z-type under the lattice boundary lands
/// on the diagonal; the X-type sector and the transverse field become flip
/// terms. Spin counts above 26 are refused.
pub fn build_hamiltonian(lat: &Lattice, p: HamiltonianParams) -> Result<SparseOperator> {
    HamiltonianParams::new(p.je, p.jm, p.hx)?;
    let n = lat.spin_count();
    if n > MAX_SPECTRUM_QUBITS {
        return Err(Error::TooLarge {
            size: n,
            limit: MAX_SPECTRUM_QUBITS,
        });
    }
    let mut z_terms = Vec::new();
    let mut x_terms = Vec::new();
    for s in 0..lat.star_count() {
        push_term(&lat.star_op(s)?, -p.je, &mut z_terms, &mut x_terms)?;
    }
    for q in 0..lat.plaquette_count() {
        push_term(&lat.plaquette_op(q)?, -p.jm, &mut z_terms, &mut x_terms)?;
    }
    if p.hx != 0.0 {
        for s in 0..n {
            x_terms.push((1u64 << s, p.hx));
        }
    }
    SparseOperator::new(n, z_terms, x_terms)
}

/// One converged eigenpair; `residual` is the verified `|H v - value v|`.
#[derive(Clone, Debug)]
pub struct Eigenpair {
    pub value: f64,
    pub vector: Vec<f64>,
    pub residual: f64,
}

/// The `k` smallest eigenpairs, sorted ascending.
///
/// Dimensions up to `DENSE_FALLBACK_DIM` go through the dense solver and
/// accept any `k` up to the dimension. Larger operators run restarted
/// Lanczos (`k` capped at `MAX_ITERATIVE_K`), locking one eigenpair per
/// restart so degenerate copies are recovered one by one. Residuals are
/// measured against the full operator; failure to reach `tol` within the
/// restart budget reports the best residual achieved.
pub fn lowest_eigenpairs(op: &SparseOperator, k: usize, tol: f64) -> Result<Vec<Eigenpair>> {
    let dim = op.dimension();
    if k == 0 || k > dim {
        return Err(Error::BadEigenCount { k, dim });
    }
    if !(tol.is_finite() && tol > 0.0) {
        return Err(Error::invalid("residual tolerance must be positive"));
    }
    if dim <= DENSE_FALLBACK_DIM {
        dense_lowest(op, k, tol)
    } else {
        if k > MAX_ITERATIVE_K {
            return Err(Error::BadEigenCount { k, dim });
        }
        lanczos_lowest(op, k, tol)
    }
}

/// Full spectrum, ascending, by dense diagonalization.
pub fn dense_eigenvalues(op: &SparseOperator) -> Result<Vec<f64>> {
    let mut a = op.to_dense()?;
    lapack::sym_eigen(&mut a, op.dimension(), false)
}

fn dense_lowest(op: &SparseOperator, k: usize, tol: f64) -> Result<Vec<Eigenpair>> {
    let dim = op.dimension();
    let mut a = op.to_dense()?;
    let values = lapack::sym_eigen(&mut a, dim, true)?;
    let mut out = Vec::with_capacity(k);
    let mut hv = vec![0.0; dim];
    let mut worst = 0.0f64;
    for (i, &value) in values.iter().take(k).enumerate() {
        let vector = a[i * dim..(i + 1) * dim].to_vec();
        op.apply(&vector, &mut hv);
        let mut r2 = 0.0;
        for (h, v) in hv.iter().zip(&vector) {
            let d = h - value * v;
            r2 += d * d;
        }
        let residual = r2.sqrt();
        worst = worst.max(residual);
        out.push(Eigenpair {
            value,
            vector,
            residual,
        });
    }
    if worst > tol {
        return Err(Error::NotConverged {
            tol,
            iters: 1,
            residual: worst,
        });
    }
    Ok(out)
}

/// Deterministic start vector; entries in [-0.5, 0.5) from a splitmix
/// stream keyed by the restart index.
fn seeded_vector(dim: usize, seed: u64) -> Vec<f64> {
    let mut state = seed
        .wrapping_mul(0x9E37_79B9_7F4A_7C15)
        .wrapping_add(0x632B_E59B_D9B4_E019);
    (0..dim)
        .map(|_| {
            state = state.wrapping_add(0x9E37_79B9_7F4A_7C15);
            let mut z = state;
            z = (z ^ (z >> 30)).wrapping_mul(0xBF58_476D_1CE4_E5B9);
            z = (z ^ (z >> 27)).wrapping_mul(0x94D0_49BB_1331_11EB);
            z ^= z >> 31;
            (z >> 11) as f64 / (1u64 << 53) as f64 - 0.5
        })
        .collect()
}

fn dot(a: &[f64], b: &[f64]) -> f64 {
    a.iter().zip(b).map(|(x, y)| x * y).sum()
}

fn norm(v: &[f64]) -> f64 {
    dot(v, v).sqrt()
}

fn axpy(y: &mut [f64], a: f64, x: &[f64]) {
    for (yi, xi) in y.iter_mut().zip(x) {
        *yi += a * xi;
    }
}

fn scale(v: &mut [f64], s: f64) {
    for x in v {
        *x *= s;
    }
}

fn project_out(v: &mut [f64], locked: &[Eigenpair]) {
    for _ in 0..2 {
        for e in locked {
            let c = dot(v, &e.vector);
            if c != 0.0 {
                axpy(v, -c, &e.vector);
            }
        }
    }
}

fn tridiag_eigen(alpha: &[f64], beta: &[f64]) -> Result<(Vec<f64>, Vec<f64>)> {
    let m = alpha.len();
    let mut t = vec![0.0; m * m];
    for i in 0..m {
        t[i * m + i] = alpha[i];
        if i + 1 < m {
            t[i * m + i + 1] = beta[i];
            t[(i + 1) * m + i] = beta[i];
        }
    }
    let values = lapack::sym_eigen(&mut t, m, true)?;
    Ok((values, t))
}

fn lanczos_lowest(op: &SparseOperator, k: usize, tol: f64) -> Result<Vec<Eigenpair>> {
    let dim = op.dimension();
    let max_krylov = MAX_KRYLOV.min(dim);
    let mut locked: Vec<Eigenpair> = Vec::new();
    let mut total_matvecs = 0usize;
    let mut best_failed = f64::INFINITY;

    for run in 0..(2 * k + 4) {
        if locked.len() >= k {
            break;
        }

        let mut q0 = seeded_vector(dim, run as u64);
        project_out(&mut q0, &locked);
        let n0 = norm(&q0);
        if n0 < 1e-8 {
            continue;
        }
        scale(&mut q0, 1.0 / n0);

        let mut basis: Vec<Vec<f64>> = vec![q0];
        let mut alpha: Vec<f64> = Vec::new();
        let mut beta: Vec<f64> = Vec::new();
        let mut w = vec![0.0; dim];

        let svecs = loop {
            let j = alpha.len();
            op.apply(&basis[j], &mut w);
            total_matvecs += 1;
            let aj = dot(&w, &basis[j]);
            alpha.push(aj);
            axpy(&mut w, -aj, &basis[j]);
            if j > 0 {
                axpy(&mut w, -beta[j - 1], &basis[j - 1]);
            }
            // Full reorthogonalization, two sweeps, against the Krylov
            // basis and the locked pairs; the degenerate ground level makes
            // anything weaker produce ghost copies.
            for _ in 0..2 {
                for b in &basis {
                    let c = dot(&w, b);
                    if c != 0.0 {
                        axpy(&mut w, -c, b);
                    }
                }
                for e in &locked {
                    let c = dot(&w, &e.vector);
                    if c != 0.0 {
                        axpy(&mut w, -c, &e.vector);
                    }
                }
            }
            let bj = norm(&w);
            let m = alpha.len();
            let breakdown = bj < 1e-9;
            let at_cap = m == max_krylov;
            if breakdown || at_cap || m.is_multiple_of(RITZ_CHECK_EVERY) {
                let (_, svecs) = tridiag_eigen(&alpha, &beta)?;
                // bottom entry of the lowest Ritz column estimates its
                // residual once scaled by the next off-diagonal
                let est = if breakdown { 0.0 } else { bj * svecs[m - 1].abs() };
                if est <= 0.5 * tol || breakdown || at_cap {
                    break svecs;
                }
            }
            beta.push(bj);
            let mut next = w.clone();
            scale(&mut next, 1.0 / bj);
            basis.push(next);
        };

        // Lock the lowest Ritz pair only: it is the bottom of the deflated
        // complement, so the locked list grows as a prefix of the spectrum
        // and degenerate copies arrive on later restarts.
        let m = alpha.len();
        let mut v = vec![0.0; dim];
        for (jj, b) in basis.iter().take(m).enumerate() {
            axpy(&mut v, svecs[jj], b);
        }
        project_out(&mut v, &locked);
        let nv = norm(&v);
        if nv < 0.5 {
            continue;
        }
        scale(&mut v, 1.0 / nv);
        op.apply(&v, &mut w);
        total_matvecs += 1;
        let value = dot(&v, &w);
        axpy(&mut w, -value, &v);
        let residual = norm(&w);
        if residual <= tol {
            locked.push(Eigenpair {
                value,
                vector: v,
                residual,
            });
        } else {
            best_failed = best_failed.min(residual);
        }
    }

    if locked.len() < k {
        return Err(Error::NotConverged {
            tol,
            iters: total_matvecs,
            residual: best_failed,
        });
    }
    locked.sort_by(|a, b| a.value.total_cmp(&b.value));
    locked.truncate(k);
    Ok(locked)
}

/// Size of the lowest eigenvalue cluster; successive gaps of at most
/// `cluster_tol` extend it.
///
/// Input must be sorted ascending. A cluster reaching the final provided
/// value cannot be bounded and is reported as an error; compute more
/// eigenvalues and retry.
pub fn degeneracy_from_spectrum(values: &[f64], cluster_tol: f64) -> Result<usize> {
    if values.is_empty() {
        return Err(Error::invalid("no eigenvalues provided"));
    }
    if !(cluster_tol >= 0.0 && cluster_tol.is_finite()) {
        return Err(Error::invalid(
            "cluster tolerance must be finite and nonnegative",
        ));
    }
    if values.windows(2).any(|p| p[1] < p[0]) {
        return Err(Error::invalid("eigenvalues must be sorted ascending"));
    }
    let mut count = 1;
    while count < values.len() && values[count] - values[count - 1] <= cluster_tol {
        count += 1;
    }
    if count == values.len() {
        return Err(Error::AmbiguousCluster {
            count,
            tol: cluster_tol,
        });
    }
    Ok(count)
}

/// Default cluster tolerance: `1e-8` of the spectral width seen.
pub fn default_cluster_tol(values: &[f64]) -> f64 {
    match (values.first(), values.last()) {
        (Some(a), Some(b)) => 1e-8 * (b - a),
        _ => 0.0,
    }
}

/// Spread of the lowest `count` values, `values[count-1] - values[0]`;
/// input sorted ascending.
pub fn ground_splitting_width(values: &[f64], count: usize) -> Result<f64> {
    if count == 0 || count > values.len() {
        return Err(Error::BadEigenCount {
            k: count,
            dim: values.len(),
        });
    }
    Ok(values[count - 1] - values[0])
}

/// Least-squares slope of `ln y` against `ln x`.
pub fn loglog_slope(xs: &[f64], ys: &[f64]) -> Result<f64> {
    if xs.len() != ys.len() || xs.len() < 2 {
        return Err(Error::invalid("slope fit needs two matching samples or more"));
    }
    if xs.iter().chain(ys).any(|&v| !(v.is_finite() && v > 0.0)) {
        return Err(Error::invalid("slope fit needs positive finite samples"));
    }
    let lx: Vec<f64> = xs.iter().map(|x| x.ln()).collect();
    let ly: Vec<f64> = ys.iter().map(|y| y.ln()).collect();
    let mx = lx.iter().sum::<f64>() / lx.len() as f64;
    let my = ly.iter().sum::<f64>() / ly.len() as f64;
    let mut num = 0.0;
    let mut den = 0.0;
    for (x, y) in lx.iter().zip(&ly) {
        num += (x - mx) * (y - my);
        den += (x - mx) * (x - mx);
    }
    if den == 0.0 {
        return Err(Error::invalid(
            "slope fit needs at least two distinct x samples",
        ));
    }
    Ok(num / den)
}

/// Serializable result of a spectrum computation.
#[derive(Clone, Debug, Serialize)]
pub struct Spectrum {
    pub params: HamiltonianParams,
    pub eigenvalues: Vec<f64>,
    /// Verified residuals, one per eigenvalue; empty for dense full spectra.
    pub residuals: Vec<f64>,
    /// Lowest-cluster size, when the provided eigenvalues bound it.
    pub degeneracy: Option<usize>,
}

impl Spectrum {
    pub fn from_eigenpairs(
        params: HamiltonianParams,
        pairs: &[Eigenpair],
        cluster_tol: f64,
    ) -> Self {
        let eigenvalues: Vec<f64> = pairs.iter().map(|p| p.value).collect();
        let degeneracy = degeneracy_from_spectrum(&eigenvalues, cluster_tol).ok();
        Spectrum {
            params,
            residuals: pairs.iter().map(|p| p.residual).collect(),
            eigenvalues,
            degeneracy,
        }
    }

    pub fn from_values(params: HamiltonianParams, eigenvalues: Vec<f64>, cluster_tol: f64) -> Self {
        let degeneracy = degeneracy_from_spectrum(&eigenvalues, cluster_tol).ok();
        Spectrum {
            params,
            eigenvalues,
            residuals: Vec::new(),
            degeneracy,
        }
    }
}
