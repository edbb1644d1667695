//! Thin wrappers over the system LAPACK (provided by OpenBLAS) for the three
//! dense operations the solvers need: LU solve (`zgesv`), non-Hermitian
//! eigendecomposition (`zgeev`) and Hermitian eigenvalues (`zheev`).
//!
//! All public functions take row-major `ndarray` matrices and handle the
//! transposition into LAPACK's column-major layout internally. Matrices here
//! are small (dimension ≤ ~2500), so the extra copies are irrelevant next to
//! the O(n³) factorizations.

use ndarray::{Array1, Array2};
use num_complex::Complex64;

use crate::error::Error;

type C = Complex64;

extern "C" {
    fn zgesv_(
        n: *const i32,
        nrhs: *const i32,
        a: *mut C,
        lda: *const i32,
        ipiv: *mut i32,
        b: *mut C,
        ldb: *const i32,
        info: *mut i32,
    );
    fn zgeev_(
        jobvl: *const u8,
        jobvr: *const u8,
        n: *const i32,
        a: *mut C,
        lda: *const i32,
        w: *mut C,
        vl: *mut C,
        ldvl: *const i32,
        vr: *mut C,
        ldvr: *const i32,
        work: *mut C,
        lwork: *const i32,
        rwork: *mut f64,
        info: *mut i32,
    );
    fn zheev_(
        jobz: *const u8,
        uplo: *const u8,
        n: *const i32,
        a: *mut C,
        lda: *const i32,
        w: *mut f64,
        work: *mut C,
        lwork: *const i32,
        rwork: *mut f64,
        info: *mut i32,
    );
}

/// Column-major copy of a square row-major matrix.
fn to_fortran(a: &Array2<C>) -> Vec<C> {
    let n = a.nrows();
    let mut buf = vec![C::new(0.0, 0.0); n * n];
    for j in 0..n {
        for i in 0..n {
            buf[i + j * n] = a[[i, j]];
        }
    }
    buf
}

/// Solve `a x = b` for a single right-hand side by LU factorization.
///
/// A reported zero pivot (singular matrix) comes back as
/// [`Error::SingularMatrix`] so callers can map it onto their own
/// degenerate-system error.
pub fn solve(a: &Array2<C>, b: &Array1<C>) -> Result<Array1<C>, Error> {
    let n = square_dim(a)?;
    if b.len() != n {
        return Err(Error::SpaceMismatch {
            expected: n,
            found: b.len(),
        });
    }
    let mut af = to_fortran(a);
    let mut x: Vec<C> = b.to_vec();
    let mut ipiv = vec![0i32; n];
    let mut info = 0i32;
    let ni = n as i32;
    unsafe {
        zgesv_(
            &ni,
            &1,
            af.as_mut_ptr(),
            &ni,
            ipiv.as_mut_ptr(),
            x.as_mut_ptr(),
            &ni,
            &mut info,
        );
    }
    lapack_status("zgesv", info)?;
    Ok(Array1::from_vec(x))
}

/// Matrix inverse via LU with the identity as right-hand sides.
pub fn inv(a: &Array2<C>) -> Result<Array2<C>, Error> {
    let n = square_dim(a)?;
    let mut af = to_fortran(a);
    // identity in column-major layout
    let mut x = vec![C::new(0.0, 0.0); n * n];
    for i in 0..n {
        x[i + i * n] = C::new(1.0, 0.0);
    }
    let mut ipiv = vec![0i32; n];
    let mut info = 0i32;
    let ni = n as i32;
    unsafe {
        zgesv_(
            &ni,
            &ni,
            af.as_mut_ptr(),
            &ni,
            ipiv.as_mut_ptr(),
            x.as_mut_ptr(),
            &ni,
            &mut info,
        );
    }
    lapack_status("zgesv", info)?;
    Ok(from_fortran(&x, n))
}

/// Eigenvalues and right eigenvectors of a general complex matrix:
/// `a = v · diag(w) · v⁻¹` with eigenvectors in the columns of `v`.
pub fn eig(a: &Array2<C>) -> Result<(Array1<C>, Array2<C>), Error> {
    let n = square_dim(a)?;
    let ni = n as i32;
    let mut af = to_fortran(a);
    let mut w = vec![C::new(0.0, 0.0); n];
    let mut vr = vec![C::new(0.0, 0.0); n * n];
    let mut rwork = vec![0.0f64; 2 * n];
    let mut info = 0i32;
    // workspace query, then the real call
    let mut wkopt = [C::new(0.0, 0.0)];
    unsafe {
        zgeev_(
            b"N".as_ptr(),
            b"V".as_ptr(),
            &ni,
            af.as_mut_ptr(),
            &ni,
            w.as_mut_ptr(),
            std::ptr::null_mut(),
            &1,
            vr.as_mut_ptr(),
            &ni,
            wkopt.as_mut_ptr(),
            &-1,
            rwork.as_mut_ptr(),
            &mut info,
        );
    }
    lapack_status("zgeev", info)?;
    let lwork = wkopt[0].re as i32;
    let mut work = vec![C::new(0.0, 0.0); lwork as usize];
    unsafe {
        zgeev_(
            b"N".as_ptr(),
            b"V".as_ptr(),
            &ni,
            af.as_mut_ptr(),
            &ni,
            w.as_mut_ptr(),
            std::ptr::null_mut(),
            &1,
            vr.as_mut_ptr(),
            &ni,
            work.as_mut_ptr(),
            &lwork,
            rwork.as_mut_ptr(),
            &mut info,
        );
    }
    lapack_status("zgeev", info)?;
    Ok((Array1::from_vec(w), from_fortran(&vr, n)))
}

/// Eigenvalues (ascending) of a Hermitian matrix. Only the lower triangle of
/// `a` is referenced.
pub fn eigvalsh(a: &Array2<C>) -> Result<Array1<f64>, Error> {
    Ok(zheev(a, b"N")?.0)
}

/// Eigenvalues (ascending) and orthonormal eigenvectors of a Hermitian
/// matrix: `a = v · diag(w) · v†` with eigenvectors in the columns of `v`.
pub fn eigh(a: &Array2<C>) -> Result<(Array1<f64>, Array2<C>), Error> {
    zheev(a, b"V")
}

fn zheev(a: &Array2<C>, jobz: &'static [u8; 1]) -> Result<(Array1<f64>, Array2<C>), Error> {
    let n = square_dim(a)?;
    let ni = n as i32;
    let mut af = to_fortran(a);
    let mut w = vec![0.0f64; n];
    let mut rwork = vec![0.0f64; 3 * n.max(1)];
    let mut info = 0i32;
    let mut wkopt = [C::new(0.0, 0.0)];
    unsafe {
        zheev_(
            jobz.as_ptr(),
            b"L".as_ptr(),
            &ni,
            af.as_mut_ptr(),
            &ni,
            w.as_mut_ptr(),
            wkopt.as_mut_ptr(),
            &-1,
            rwork.as_mut_ptr(),
            &mut info,
        );
    }
    lapack_status("zheev", info)?;
    let lwork = wkopt[0].re as i32;
    let mut work = vec![C::new(0.0, 0.0); lwork as usize];
    unsafe {
        zheev_(
            jobz.as_ptr(),
            b"L".as_ptr(),
            &ni,
            af.as_mut_ptr(),
            &ni,
            w.as_mut_ptr(),
            work.as_mut_ptr(),
            &lwork,
            rwork.as_mut_ptr(),
            &mut info,
        );
    }
    lapack_status("zheev", info)?;
    // with jobz = "N" the vector block is the destroyed input; callers that
    // asked for eigenvalues only never see it
    Ok((Array1::from_vec(w), from_fortran(&af, n)))
}

fn square_dim(a: &Array2<C>) -> Result<usize, Error> {
    if a.nrows() != a.ncols() {
        return Err(Error::SpaceMismatch {
            expected: a.nrows(),
            found: a.ncols(),
        });
    }
    Ok(a.nrows())
}

fn from_fortran(buf: &[C], n: usize) -> Array2<C> {
    Array2::from_shape_fn((n, n), |(i, j)| buf[i + j * n])
}

fn lapack_status(routine: &'static str, info: i32) -> Result<(), Error> {
    match info {
        0 => Ok(()),
        i if i > 0 => Err(Error::SingularMatrix { routine }),
        i => Err(Error::LapackError { routine, info: i }),
    }
}
