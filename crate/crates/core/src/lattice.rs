//! Square-lattice geometry with spins on links.
//!
//! A `rows x cols` lattice of cells carries one spin per link. Three
//! boundary conditions are supported:
//!
//! * `Plaquette`: open rectangle whose outer edge is made of plaquette
//!   (cell) faces. Vertex operators exist only at interior vertices, so the
//!   perimeter links form a ring of unconstrained degrees of freedom.
//! * `Star`: the same rectangle with the roles of the two stabilizer types
//!   swapped (every X below becomes Z and vice versa). Geometry, ring, and
//!   index layout are identical; only the operator types differ.
//! * `Periodic`: the torus. No boundary ring; two cycles of logical
//!   operators instead.
//!
//! Link indexing (open case, `m = rows`, `n = cols`): horizontal link
//! `h(r, c)` joins vertices `(r, c)-(r, c+1)` and has index `r*n + c` for
//! `r in 0..=m`, `c in 0..n`; vertical link `v(r, c)` joins
//! `(r, c)-(r+1, c)` with index `(m+1)*n + r*(n+1) + c` for `r in 0..m`,
//! `c in 0..=n`. On the torus, rows and columns wrap and the extra
//! boundary rows/columns disappear: `h(r, c) = r*n + c`,
//! `v(r, c) = m*n + r*n + c`, both with `r in 0..m`, `c in 0..n`.

use crate::error::{Error, Result};
use crate::pauli::PauliOp;
use serde::{Deserialize, Serialize};

#[derive(Clone, Copy, PartialEq, Eq, Debug, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Boundary {
    Plaquette,
    Star,
    Periodic,
}

impl Boundary {
    pub fn is_open(self) -> bool {
        !matches!(self, Boundary::Periodic)
    }
}

#[derive(Clone, Debug)]
pub struct Lattice {
    rows: usize,
    cols: usize,
    boundary: Boundary,
    /// Perimeter links in adjacency order (empty for the torus).
    ring: Vec<usize>,
}

impl Lattice {
    pub fn new(rows: usize, cols: usize, boundary: Boundary) -> Result<Self> {
        if rows < 2 || cols < 2 {
            return Err(Error::LatticeTooSmall { rows, cols });
        }
        let mut lat = Lattice {
            rows,
            cols,
            boundary,
            ring: Vec::new(),
        };
        if boundary.is_open() {
            lat.ring = lat.build_ring();
        }
        Ok(lat)
    }

    pub fn rows(&self) -> usize {
        self.rows
    }

    pub fn cols(&self) -> usize {
        self.cols
    }

    pub fn boundary(&self) -> Boundary {
        self.boundary
    }

    pub fn spin_count(&self) -> usize {
        let (m, n) = (self.rows, self.cols);
        match self.boundary {
            Boundary::Periodic => 2 * m * n,
            _ => 2 * m * n + m + n,
        }
    }

    pub fn plaquette_count(&self) -> usize {
        self.rows * self.cols
    }

    /// Vertex operators: all vertices on the torus, interior vertices on
    /// the open rectangle.
    pub fn star_count(&self) -> usize {
        let (m, n) = (self.rows, self.cols);
        match self.boundary {
            Boundary::Periodic => m * n,
            _ => (m - 1) * (n - 1),
        }
    }

    /// Index of horizontal link `(r, c)-(r, c+1)`.
    pub fn h_index(&self, r: usize, c: usize) -> usize {
        let n = self.cols;
        match self.boundary {
            Boundary::Periodic => {
                debug_assert!(r < self.rows && c < n);
                r * n + c
            }
            _ => {
                debug_assert!(r <= self.rows && c < n);
                r * n + c
            }
        }
    }

    /// Index of vertical link `(r, c)-(r+1, c)`.
    pub fn v_index(&self, r: usize, c: usize) -> usize {
        let (m, n) = (self.rows, self.cols);
        match self.boundary {
            Boundary::Periodic => {
                debug_assert!(r < m && c < n);
                m * n + r * n + c
            }
            _ => {
                debug_assert!(r < m && c <= n);
                (m + 1) * n + r * (n + 1) + c
            }
        }
    }

    /// The four links bounding cell `(r, c)`.
    pub fn plaquette_support(&self, p: usize) -> Result<[usize; 4]> {
        let (m, n) = (self.rows, self.cols);
        if p >= self.plaquette_count() {
            return Err(Error::IndexOutOfRange {
                what: "plaquette",
                index: p,
                count: self.plaquette_count(),
            });
        }
        let (r, c) = (p / n, p % n);
        Ok(match self.boundary {
            Boundary::Periodic => [
                self.h_index(r, c),
                self.h_index((r + 1) % m, c),
                self.v_index(r, c),
                self.v_index(r, (c + 1) % n),
            ],
            _ => [
                self.h_index(r, c),
                self.h_index(r + 1, c),
                self.v_index(r, c),
                self.v_index(r, c + 1),
            ],
        })
    }

    /// The four links meeting at the vertex of star `s`.
    pub fn star_support(&self, s: usize) -> Result<[usize; 4]> {
        let (m, n) = (self.rows, self.cols);
        if s >= self.star_count() {
            return Err(Error::IndexOutOfRange {
                what: "star",
                index: s,
                count: self.star_count(),
            });
        }
        Ok(match self.boundary {
            Boundary::Periodic => {
                let (r, c) = (s / n, s % n);
                [
                    self.h_index(r, c),
                    self.h_index(r, (c + n - 1) % n),
                    self.v_index(r, c),
                    self.v_index((r + m - 1) % m, c),
                ]
            }
            _ => {
                // interior vertices only: (r, c) with 1 <= r <= m-1, 1 <= c <= n-1
                let (r, c) = (s / (n - 1) + 1, s % (n - 1) + 1);
                [
                    self.h_index(r, c - 1),
                    self.h_index(r, c),
                    self.v_index(r - 1, c),
                    self.v_index(r, c),
                ]
            }
        })
    }

    /// Cell operator: Z-type under `Plaquette` boundaries, X-type under
    /// `Star` (the swapped convention), Z-type on the torus.
    pub fn plaquette_op(&self, p: usize) -> Result<PauliOp> {
        let sup = self.plaquette_support(p)?;
        let n = self.spin_count();
        Ok(match self.boundary {
            Boundary::Star => PauliOp::x_string(n, &sup),
            _ => PauliOp::z_string(n, &sup),
        })
    }

    /// Vertex operator: X-type under `Plaquette` boundaries and on the
    /// torus, Z-type under `Star`.
    pub fn star_op(&self, s: usize) -> Result<PauliOp> {
        let sup = self.star_support(s)?;
        let n = self.spin_count();
        Ok(match self.boundary {
            Boundary::Star => PauliOp::z_string(n, &sup),
            _ => PauliOp::x_string(n, &sup),
        })
    }

    /// All stabilizer generators: plaquettes first, then stars.
    pub fn stabilizers(&self) -> Vec<PauliOp> {
        let mut out = Vec::with_capacity(self.plaquette_count() + self.star_count());
        for p in 0..self.plaquette_count() {
            out.push(self.plaquette_op(p).expect("in range"));
        }
        for s in 0..self.star_count() {
            out.push(self.star_op(s).expect("in range"));
        }
        out
    }

    fn build_ring(&self) -> Vec<usize> {
        let (m, n) = (self.rows, self.cols);
        let mut out = Vec::with_capacity(2 * (m + n));
        out.push(self.h_index(0, 0));
        for r in 0..m {
            out.push(self.v_index(r, 0));
        }
        for c in 0..n {
            out.push(self.h_index(m, c));
        }
        for r in (0..m).rev() {
            out.push(self.v_index(r, n));
        }
        for c in (1..n).rev() {
            out.push(self.h_index(0, c));
        }
        out
    }

    /// Perimeter links in cyclic adjacency order: position `i` and
    /// `(i+1) mod len` always share a lattice vertex. Starts at the top-left
    /// horizontal link and runs counterclockwise (down the left edge first).
    pub fn boundary_ring(&self) -> Result<&[usize]> {
        if !self.boundary.is_open() {
            return Err(Error::NotOpenBoundary);
        }
        Ok(&self.ring)
    }

    pub fn ring_len(&self) -> usize {
        self.ring.len()
    }

    /// Ring positions whose two links meet at a lattice corner, in ring
    /// order: top-left, bottom-left, bottom-right, top-right.
    pub fn corner_positions(&self) -> Result<[usize; 4]> {
        if !self.boundary.is_open() {
            return Err(Error::NotOpenBoundary);
        }
        let (m, n) = (self.rows, self.cols);
        Ok([0, m, m + n, 2 * m + n])
    }

    /// The interior link at the vertex shared by ring positions `i` and
    /// `i+1`, or `None` at a corner (where the two ring links meet alone).
    pub fn interior_partner(&self, i: usize) -> Result<Option<usize>> {
        if !self.boundary.is_open() {
            return Err(Error::NotOpenBoundary);
        }
        let len = self.ring.len();
        if i >= len {
            return Err(Error::IndexOutOfRange {
                what: "ring position",
                index: i,
                count: len,
            });
        }
        let (m, n) = (self.rows, self.cols);
        // Edge ranges mirror build_ring: (0, m] left, (m, m+n] bottom,
        // (m+n, 2m+n] right, (2m+n, 2m+2n) top; corners excluded.
        Ok(if i == 0 || i == m || i == m + n || i == 2 * m + n {
            None
        } else if i < m {
            Some(self.h_index(i, 0))
        } else if i < m + n {
            Some(self.v_index(m - 1, i - m))
        } else if i < 2 * m + n {
            Some(self.h_index(2 * m + n - i, n - 1))
        } else {
            Some(self.v_index(0, 2 * m + 2 * n - i))
        })
    }

    /// Links flipped by the pair operator at ring position `i`: the two
    /// adjacent ring links plus the interior link at their shared vertex
    /// (absent at corners, where the operator has weight two).
    pub fn pair_flip_support(&self, i: usize) -> Result<Vec<usize>> {
        let ring = self.boundary_ring()?;
        let len = ring.len();
        if i >= len {
            return Err(Error::IndexOutOfRange {
                what: "ring position",
                index: i,
                count: len,
            });
        }
        let mut sup = vec![ring[i], ring[(i + 1) % len]];
        if let Some(b) = self.interior_partner(i)? {
            sup.push(b);
        }
        Ok(sup)
    }

    /// The weight-3 (weight-2 at corners) operator flipping ring spins `i`
    /// and `i+1` together with their interior partner. X-type under
    /// `Plaquette` boundaries, Z-type under `Star`. Commutes with every
    /// stabilizer.
    pub fn pair_flip_op(&self, i: usize) -> Result<PauliOp> {
        let sup = self.pair_flip_support(i)?;
        let n = self.spin_count();
        Ok(match self.boundary {
            Boundary::Star => PauliOp::z_string(n, &sup),
            _ => PauliOp::x_string(n, &sup),
        })
    }

    /// True for links on the open-boundary perimeter.
    pub fn is_ring_spin(&self, spin: usize) -> bool {
        self.ring.contains(&spin)
    }

    /// One X cycle and one Z cycle of the torus: non-contractible loops that
    /// commute with every stabilizer, are not products of stabilizers, and
    /// cross each other exactly once (so they anticommute).
    pub fn torus_cycles(&self) -> Result<[PauliOp; 2]> {
        if self.boundary != Boundary::Periodic {
            return Err(Error::NotPeriodic);
        }
        let (m, n) = (self.rows, self.cols);
        let nspins = self.spin_count();
        // X cycle: all horizontal links in column 0 (crosses every row).
        let xloop: Vec<usize> = (0..m).map(|r| self.h_index(r, 0)).collect();
        // Z cycle: all horizontal links in row 0 (crossed once by the X cycle).
        let zloop: Vec<usize> = (0..n).map(|c| self.h_index(0, c)).collect();
        Ok([
            PauliOp::x_string(nspins, &xloop),
            PauliOp::z_string(nspins, &zloop),
        ])
    }
}
