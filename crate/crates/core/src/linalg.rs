//! Dense Hermitian eigensolves.
//!
//! Every Hamiltonian in this crate is real symmetric in the occupation basis,
//! so the common path is nalgebra's real `SymmetricEigen`. Genuinely complex
//! Hermitian matrices (reduced density matrices of evolved states) are handled
//! through the standard real embedding
//! `H = A + iB  ->  S = [[A, -B], [B, A]]`,
//! whose spectrum is that of `H` with every eigenvalue doubled.

use nalgebra::{DMatrix, DVector};
use num_complex::Complex64 as C64;

use crate::error::{Error, Result};

/// Entrywise Hermiticity tolerance used before any eigensolve.
pub const HERMITICITY_TOL: f64 = 1e-12;

/// Max |A - A†| over all entries.
pub fn hermiticity_deviation(m: &DMatrix<C64>) -> f64 {
    let mut dev: f64 = 0.0;
    for i in 0..m.nrows() {
        for j in i..m.ncols() {
            dev = dev.max((m[(i, j)] - m[(j, i)].conj()).norm());
        }
    }
    dev
}

fn check_hermitian(m: &DMatrix<C64>, tol: f64) -> Result<()> {
    let dev = hermiticity_deviation(m);
    if dev > tol {
        return Err(Error::NotHermitian { deviation: dev });
    }
    Ok(())
}

fn max_imag(m: &DMatrix<C64>) -> f64 {
    m.iter().fold(0.0f64, |acc, z| acc.max(z.im.abs()))
}

fn real_part(m: &DMatrix<C64>) -> DMatrix<f64> {
    DMatrix::from_fn(m.nrows(), m.ncols(), |i, j| m[(i, j)].re)
}

/// Real symmetric embedding of a complex Hermitian matrix.
fn embed_real(m: &DMatrix<C64>) -> DMatrix<f64> {
    let n = m.nrows();
    let mut s = DMatrix::zeros(2 * n, 2 * n);
    for i in 0..n {
        for j in 0..n {
            let z = m[(i, j)];
            s[(i, j)] = z.re;
            s[(i + n, j + n)] = z.re;
            s[(i, j + n)] = -z.im;
            s[(i + n, j)] = z.im;
        }
    }
    s
}

fn sorted_eigenvalues(m: &DMatrix<f64>) -> Vec<f64> {
    let mut vals: Vec<f64> = m.clone().symmetric_eigen().eigenvalues.iter().copied().collect();
    vals.sort_by(|a, b| a.partial_cmp(b).unwrap());
    vals
}

/// All eigenvalues of a Hermitian matrix, ascending.
pub fn eigh_values(m: &DMatrix<C64>) -> Result<Vec<f64>> {
    check_hermitian(m, HERMITICITY_TOL)?;
    if max_imag(m) <= HERMITICITY_TOL {
        Ok(sorted_eigenvalues(&real_part(m)))
    } else {
        // Doubled spectrum: keep every second value.
        let doubled = sorted_eigenvalues(&embed_real(m));
        Ok(doubled.into_iter().step_by(2).collect())
    }
}

/// All eigenvalues (ascending) plus the eigenvector of the lowest one.
///
/// The eigenvector phase is fixed by making its largest-magnitude component
/// real and positive, so results are reproducible across backends.
pub fn eigh_ground(m: &DMatrix<C64>) -> Result<(Vec<f64>, DVector<C64>)> {
    check_hermitian(m, HERMITICITY_TOL)?;
    let n = m.nrows();
    if max_imag(m) <= HERMITICITY_TOL {
        let eig = real_part(m).symmetric_eigen();
        let mut order: Vec<usize> = (0..n).collect();
        order.sort_by(|&a, &b| eig.eigenvalues[a].partial_cmp(&eig.eigenvalues[b]).unwrap());
        let vals: Vec<f64> = order.iter().map(|&i| eig.eigenvalues[i]).collect();
        let col = eig.eigenvectors.column(order[0]);
        let vec = DVector::from_fn(n, |i, _| C64::new(col[i], 0.0));
        Ok((vals, fix_phase(vec)))
    } else {
        let eig = embed_real(m).symmetric_eigen();
        let mut order: Vec<usize> = (0..2 * n).collect();
        order.sort_by(|&a, &b| eig.eigenvalues[a].partial_cmp(&eig.eigenvalues[b]).unwrap());
        let vals: Vec<f64> = order.iter().step_by(2).map(|&i| eig.eigenvalues[i]).collect();
        let col = eig.eigenvectors.column(order[0]);
        let mut vec = DVector::from_fn(n, |i, _| C64::new(col[i], col[i + n]));
        let norm = vec.iter().map(|z| z.norm_sqr()).sum::<f64>().sqrt();
        vec /= C64::new(norm, 0.0);
        Ok((vals, fix_phase(vec)))
    }
}

/// Rotate a global phase so the largest-magnitude amplitude is real positive.
pub fn fix_phase(mut v: DVector<C64>) -> DVector<C64> {
    let mut imax = 0;
    let mut best = 0.0f64;
    for (i, z) in v.iter().enumerate() {
        let m = z.norm_sqr();
        if m > best {
            best = m;
            imax = i;
        }
    }
    let z = v[imax];
    if z.norm() > 0.0 {
        let phase = z / z.norm();
        v /= phase;
    }
    v
}
