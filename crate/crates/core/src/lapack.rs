//! Minimal bindings to the system LAPACK.
//!
//! Two divide-and-conquer eigensolvers cover every dense need in the crate:
//! `dsyevd` (real symmetric) and `zheevd` (complex Hermitian). Matrices are
//! column-major as LAPACK expects; callers own the layout convention.
//! Workspace sizes are obtained through the standard `lwork = -1` query.

use crate::error::{Error, Result};
use num_complex::Complex64;
use std::ffi::c_char;

extern "C" {
    fn dsyevd_(
        jobz: *const c_char,
        uplo: *const c_char,
        n: *const i32,
        a: *mut f64,
        lda: *const i32,
        w: *mut f64,
        work: *mut f64,
        lwork: *const i32,
        iwork: *mut i32,
        liwork: *const i32,
        info: *mut i32,
    );

    fn zheevd_(
        jobz: *const c_char,
        uplo: *const c_char,
        n: *const i32,
        a: *mut Complex64,
        lda: *const i32,
        w: *mut f64,
        work: *mut Complex64,
        lwork: *const i32,
        rwork: *mut f64,
        lrwork: *const i32,
        iwork: *mut i32,
        liwork: *const i32,
        info: *mut i32,
    );
}

fn check(routine: &'static str, info: i32) -> Result<()> {
    if info == 0 {
        Ok(())
    } else {
        Err(Error::Lapack { routine, info })
    }
}

/// Eigenvalues (ascending) of a real symmetric matrix, column-major,
/// dimension `n`. `a` is clobbered. With `vectors`, the columns of `a` are
/// replaced by orthonormal eigenvectors.
pub(crate) fn sym_eigen(a: &mut [f64], n: usize, vectors: bool) -> Result<Vec<f64>> {
    assert_eq!(a.len(), n * n, "matrix buffer size");
    let jobz = if vectors { b'V' } else { b'N' } as c_char;
    let uplo = b'L' as c_char;
    let ni = i32::try_from(n).map_err(|_| Error::TooLarge { size: n, limit: i32::MAX as usize })?;
    let mut w = vec![0.0f64; n.max(1)];
    let mut info = 0i32;

    // workspace query
    let mut work_query = [0.0f64; 1];
    let mut iwork_query = [0i32; 1];
    let m1 = -1i32;
    unsafe {
        dsyevd_(
            &jobz,
            &uplo,
            &ni,
            a.as_mut_ptr(),
            &ni,
            w.as_mut_ptr(),
            work_query.as_mut_ptr(),
            &m1,
            iwork_query.as_mut_ptr(),
            &m1,
            &mut info,
        );
    }
    check("dsyevd (query)", info)?;
    let lwork = work_query[0] as i32;
    let liwork = iwork_query[0];
    let mut work = vec![0.0f64; lwork.max(1) as usize];
    let mut iwork = vec![0i32; liwork.max(1) as usize];
    unsafe {
        dsyevd_(
            &jobz,
            &uplo,
            &ni,
            a.as_mut_ptr(),
            &ni,
            w.as_mut_ptr(),
            work.as_mut_ptr(),
            &lwork,
            iwork.as_mut_ptr(),
            &liwork,
            &mut info,
        );
    }
    check("dsyevd", info)?;
    Ok(w)
}

/// Eigenvalues (ascending) of a complex Hermitian matrix, column-major.
/// `a` is clobbered; no eigenvectors are returned (entropy only needs the
/// spectrum of the reduced density matrix).
pub(crate) fn herm_eigenvalues(a: &mut [Complex64], n: usize) -> Result<Vec<f64>> {
    assert_eq!(a.len(), n * n, "matrix buffer size");
    let jobz = b'N' as c_char;
    let uplo = b'L' as c_char;
    let ni = i32::try_from(n).map_err(|_| Error::TooLarge { size: n, limit: i32::MAX as usize })?;
    let mut w = vec![0.0f64; n.max(1)];
    let mut info = 0i32;

    let mut work_query = [Complex64::new(0.0, 0.0); 1];
    let mut rwork_query = [0.0f64; 1];
    let mut iwork_query = [0i32; 1];
    let m1 = -1i32;
    unsafe {
        zheevd_(
            &jobz,
            &uplo,
            &ni,
            a.as_mut_ptr(),
            &ni,
            w.as_mut_ptr(),
            work_query.as_mut_ptr(),
            &m1,
            rwork_query.as_mut_ptr(),
            &m1,
            iwork_query.as_mut_ptr(),
            &m1,
            &mut info,
        );
    }
    check("zheevd (query)", info)?;
    let lwork = work_query[0].re as i32;
    let lrwork = rwork_query[0] as i32;
    let liwork = iwork_query[0];
    let mut work = vec![Complex64::new(0.0, 0.0); lwork.max(1) as usize];
    let mut rwork = vec![0.0f64; lrwork.max(1) as usize];
    let mut iwork = vec![0i32; liwork.max(1) as usize];
    unsafe {
        zheevd_(
            &jobz,
            &uplo,
            &ni,
            a.as_mut_ptr(),
            &ni,
            w.as_mut_ptr(),
            work.as_mut_ptr(),
            &lwork,
            rwork.as_mut_ptr(),
            &lrwork,
            iwork.as_mut_ptr(),
            &liwork,
            &mut info,
        );
    }
    check("zheevd", info)?;
    Ok(w)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn symmetric_two_by_two() {
        // [[2, 1], [1, 2]] has eigenvalues 1 and 3
        let mut a = vec![2.0, 1.0, 1.0, 2.0];
        let w = sym_eigen(&mut a, 2, false).unwrap();
        assert!((w[0] - 1.0).abs() < 1e-12 && (w[1] - 3.0).abs() < 1e-12);
    }

    #[test]
    fn symmetric_vectors_reconstruct() {
        // column-major 3x3 symmetric
        let orig = [4.0, 1.0, -2.0, 1.0, 2.0, 0.0, -2.0, 0.0, 3.0];
        let mut a = orig.to_vec();
        let w = sym_eigen(&mut a, 3, true).unwrap();
        // A = V diag(w) V^T, columns of `a` are eigenvectors
        for i in 0..3 {
            for j in 0..3 {
                let mut sum = 0.0;
                for k in 0..3 {
                    sum += a[k * 3 + i] * w[k] * a[k * 3 + j];
                }
                assert!((sum - orig[j * 3 + i]).abs() < 1e-10, "({i},{j})");
            }
        }
    }

    #[test]
    fn hermitian_eigenvalues() {
        // [[1, i], [-i, 1]] has eigenvalues 0 and 2
        let i = Complex64::new(0.0, 1.0);
        let one = Complex64::new(1.0, 0.0);
        let mut a = vec![one, -i, i, one];
        let w = herm_eigenvalues(&mut a, 2).unwrap();
        assert!(w[0].abs() < 1e-12 && (w[1] - 2.0).abs() < 1e-12);
    }
}
