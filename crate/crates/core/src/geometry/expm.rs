//! Matrix exponential by scaling and squaring around a degree 13 Padé
//! approximant, and the logarithm of a symmetric positive definite matrix.

use nalgebra::{DMatrix, SymmetricEigen};

use crate::error::{Error, Result};

const PADE13: [f64; 14] = [
    64764752532480000.0,
    32382376266240000.0,
    7771770303897600.0,
    1187353796428800.0,
    129060195264000.0,
    10559470521600.0,
    670442572800.0,
    33522128640.0,
    1323241920.0,
    40840800.0,
    960960.0,
    16380.0,
    182.0,
    1.0,
];

const THETA13: f64 = 5.371920351148152;

/// Largest 1-norm accepted before the result would overflow.
pub const EXP_NORM_LIMIT: f64 = 700.0;

fn one_norm(a: &DMatrix<f64>) -> f64 {
    (0..a.ncols()).map(|j| a.column(j).iter().map(|x| x.abs()).sum::<f64>()).fold(0.0, f64::max)
}

pub fn expm(a: &DMatrix<f64>) -> Result<DMatrix<f64>> {
    let n = a.nrows();
    let norm = one_norm(a);
    if !norm.is_finite() || norm > EXP_NORM_LIMIT {
        return Err(Error::ExpOverflow { norm });
    }
    let s = if norm > THETA13 { (norm / THETA13).log2().ceil() as i32 } else { 0 };
    let a = a / 2f64.powi(s);
    let id = DMatrix::<f64>::identity(n, n);
    let b = &PADE13;
    let a2 = &a * &a;
    let a4 = &a2 * &a2;
    let a6 = &a4 * &a2;
    let u_inner = &a6 * (&a6 * b[13] + &a4 * b[11] + &a2 * b[9]) + &a6 * b[7] + &a4 * b[5] + &a2 * b[3] + &id * b[1];
    let u = &a * u_inner;
    let v = &a6 * (&a6 * b[12] + &a4 * b[10] + &a2 * b[8]) + &a6 * b[6] + &a4 * b[4] + &a2 * b[2] + &id * b[0];
    let p = &v + &u;
    let q = &v - &u;
    let mut r = q.lu().solve(&p).ok_or(Error::ExpOverflow { norm })?;
    for _ in 0..s {
        r = &r * &r;
    }
    Ok(r)
}

/// Logarithm of a symmetric positive definite matrix via its eigendecomposition.
pub fn spd_log(m: &DMatrix<f64>) -> Result<DMatrix<f64>> {
    let sym = (m + m.transpose()) * 0.5;
    let eig = SymmetricEigen::new(sym);
    let min = eig.eigenvalues.iter().cloned().fold(f64::INFINITY, f64::min);
    if !(min > 0.0) || !min.is_finite() {
        return Err(Error::NotPositiveDefinite);
    }
    let logs = eig.eigenvalues.map(|x| x.ln());
    Ok(&eig.eigenvectors * DMatrix::from_diagonal(&logs) * eig.eigenvectors.transpose())
}
