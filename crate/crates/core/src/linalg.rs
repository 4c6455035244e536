//! Dense row reduction over either scalar mode.
//!
//! In exact mode every decision (rank, membership, kernel) is a certificate.

use crate::scalar::Scalar;

fn max_abs<S: Scalar>(rows: &[Vec<S>]) -> f64 {
    rows.iter()
        .flat_map(|r| r.iter())
        .map(|x| x.abs_f64())
        .fold(0.0, f64::max)
}

/// Reduced row echelon form of a set of row vectors.
#[derive(Debug, Clone)]
pub struct Echelon<S> {
    rows: Vec<Vec<S>>,
    pivots: Vec<usize>,
    ncols: usize,
    scale: f64,
}

impl<S: Scalar> Echelon<S> {
    pub fn new(mut rows: Vec<Vec<S>>, ncols: usize) -> Self {
        let scale = max_abs(&rows);
        let mut pivots = Vec::new();
        let mut r = 0;
        for c in 0..ncols {
            if r == rows.len() {
                break;
            }
            let pick = match S::MODE {
                crate::scalar::Mode::Exact => (r..rows.len()).find(|&i| !rows[i][c].is_zero()),
                crate::scalar::Mode::Float => (r..rows.len())
                    .filter(|&i| !rows[i][c].is_negligible(scale))
                    .max_by(|&a, &b| rows[a][c].abs_f64().total_cmp(&rows[b][c].abs_f64())),
            };
            let Some(p) = pick else { continue };
            rows.swap(r, p);
            let inv = S::one() / rows[r][c].clone();
            for x in rows[r].iter_mut() {
                *x = x.clone() * inv.clone();
            }
            let pivot_row = rows[r].clone();
            for (i, row) in rows.iter_mut().enumerate() {
                if i == r || row[c].is_zero() {
                    continue;
                }
                let f = row[c].clone();
                for (x, p) in row.iter_mut().zip(&pivot_row) {
                    if !p.is_zero() {
                        *x = x.clone() - f.clone() * p.clone();
                    }
                }
                row[c] = S::zero();
            }
            pivots.push(c);
            r += 1;
        }
        rows.truncate(r);
        Echelon {
            rows,
            pivots,
            ncols,
            scale,
        }
    }

    pub fn rank(&self) -> usize {
        self.pivots.len()
    }

    pub fn pivots(&self) -> &[usize] {
        &self.pivots
    }

    pub fn rows(&self) -> &[Vec<S>] {
        &self.rows
    }

    /// Remainder of `v` after eliminating every pivot column; zero iff `v`
    /// lies in the row space.
    pub fn reduce(&self, v: &[S]) -> Vec<S> {
        let mut out = v.to_vec();
        for (row, &p) in self.rows.iter().zip(&self.pivots) {
            if out[p].is_zero() {
                continue;
            }
            let f = out[p].clone();
            for (x, r) in out.iter_mut().zip(row) {
                if !r.is_zero() {
                    *x = x.clone() - f.clone() * r.clone();
                }
            }
        }
        out
    }

    /// Basis of the right kernel; each vector has a 1 in exactly one free column
    /// and 0 in the others.
    pub fn nullspace(&self) -> Vec<Vec<S>> {
        let free: Vec<usize> = (0..self.ncols).filter(|c| !self.pivots.contains(c)).collect();
        free.iter()
            .map(|&f| {
                let mut x = vec![S::zero(); self.ncols];
                x[f] = S::one();
                for (row, &p) in self.rows.iter().zip(&self.pivots) {
                    x[p] = -row[f].clone();
                }
                x
            })
            .collect()
    }

    pub fn free_columns(&self) -> Vec<usize> {
        (0..self.ncols).filter(|c| !self.pivots.contains(c)).collect()
    }

    pub fn is_negligible(&self, x: &S) -> bool {
        x.is_negligible(self.scale)
    }
}

pub fn nullspace<S: Scalar>(rows: Vec<Vec<S>>, ncols: usize) -> Vec<Vec<S>> {
    Echelon::new(rows, ncols).nullspace()
}

pub fn rank<S: Scalar>(rows: Vec<Vec<S>>, ncols: usize) -> usize {
    Echelon::new(rows, ncols).rank()
}

/// Solves `A x = b` for a matrix given by rows; `None` when inconsistent.
pub fn solve<S: Scalar>(a: &[Vec<S>], b: &[S]) -> Option<Vec<S>> {
    let ncols = a.first().map_or(0, |r| r.len());
    let aug: Vec<Vec<S>> = a
        .iter()
        .zip(b)
        .map(|(r, bi)| {
            let mut r = r.clone();
            r.push(bi.clone());
            r
        })
        .collect();
    let ech = Echelon::new(aug, ncols + 1);
    if ech.pivots.contains(&ncols) {
        return None;
    }
    let mut x = vec![S::zero(); ncols];
    for (row, &p) in ech.rows.iter().zip(&ech.pivots) {
        x[p] = row[ncols].clone();
    }
    Some(x)
}

/// Positive definiteness by elimination without pivoting (all pivots > 0).
pub fn is_positive_definite<S: Scalar>(gram: &[Vec<S>]) -> bool {
    let n = gram.len();
    let scale = max_abs(gram);
    let mut a: Vec<Vec<S>> = gram.to_vec();
    for k in 0..n {
        let piv = a[k][k].clone();
        if piv.is_negligible(scale) || piv.to_f64() < 0.0 {
            return false;
        }
        for i in k + 1..n {
            if a[i][k].is_zero() {
                continue;
            }
            let f = a[i][k].clone() / piv.clone();
            for j in k..n {
                let t = f.clone() * a[k][j].clone();
                a[i][j] = a[i][j].clone() - t;
            }
        }
    }
    true
}

pub fn mat_vec<S: Scalar>(m: &[Vec<S>], v: &[S]) -> Vec<S> {
    m.iter()
        .map(|row| {
            row.iter().zip(v).fold(S::zero(), |acc, (a, b)| {
                if a.is_zero() || b.is_zero() {
                    acc
                } else {
                    acc + a.clone() * b.clone()
                }
            })
        })
        .collect()
}

pub fn mat_mul<S: Scalar>(a: &[Vec<S>], b: &[Vec<S>]) -> Vec<Vec<S>> {
    let n = a.len();
    let m = b.first().map_or(0, |r| r.len());
    let inner = b.len();
    let mut out = vec![vec![S::zero(); m]; n];
    for i in 0..n {
        for k in 0..inner {
            if a[i][k].is_zero() {
                continue;
            }
            for j in 0..m {
                if !b[k][j].is_zero() {
                    out[i][j] = out[i][j].clone() + a[i][k].clone() * b[k][j].clone();
                }
            }
        }
    }
    out
}

pub fn identity<S: Scalar>(n: usize) -> Vec<Vec<S>> {
    (0..n)
        .map(|i| (0..n).map(|j| if i == j { S::one() } else { S::zero() }).collect())
        .collect()
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::scalar::{q, Q};

    fn m(rows: &[&[i64]]) -> Vec<Vec<Q>> {
        rows.iter().map(|r| r.iter().map(|&x| q(x)).collect()).collect()
    }

    #[test]
    fn kernel_of_rank_deficient_matrix() {
        let a = m(&[&[1, 2, 3], &[2, 4, 6], &[1, 0, 1]]);
        let ker = nullspace(a.clone(), 3);
        assert_eq!(ker.len(), 1);
        for v in &ker {
            assert!(mat_vec(&a, v).iter().all(|x| x == &q(0)));
        }
    }

    #[test]
    fn solve_consistent_and_inconsistent() {
        let a = m(&[&[1, 1], &[1, -1]]);
        assert_eq!(solve(&a, &[q(3), q(1)]), Some(vec![q(2), q(1)]));
        let b = m(&[&[1, 1], &[2, 2]]);
        assert_eq!(solve(&b, &[q(1), q(3)]), None);
    }

    #[test]
    fn reduce_detects_row_space() {
        let ech = Echelon::new(m(&[&[1, 0, 1], &[0, 1, 1]]), 3);
        assert!(ech.reduce(&[q(2), q(3), q(5)]).iter().all(|x| *x == q(0)));
        assert!(ech.reduce(&[q(0), q(0), q(1)]).iter().any(|x| *x != q(0)));
    }

    #[test]
    fn definiteness() {
        assert!(is_positive_definite(&m(&[&[2, 1], &[1, 2]])));
        assert!(!is_positive_definite(&m(&[&[1, 2], &[2, 1]])));
        assert!(!is_positive_definite(&m(&[&[0]])));
    }

    #[test]
    fn float_echelon_rank() {
        let a = vec![vec![1.0, 2.0], vec![2.0, 4.0 + 1e-15]];
        assert_eq!(rank(a, 2), 1);
    }
}
