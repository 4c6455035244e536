//! Double-double arithmetic (about 32 significant digits) and the few dense
//! matrix functions the chart needs: exponential, inverse, and the logarithm
//! of a symmetric positive definite matrix.
//!
//! Finite-difference stencils of the chart subtract nearly equal values and
//! divide by `h^2`; evaluating the stencil in this precision keeps rounding
//! far below the truncation error for any practical step.

use std::ops::{Add, Mul, Neg, Sub};

use crate::error::{Error, Result};

#[derive(Debug, Clone, Copy, PartialEq, Default)]
pub struct Dd {
    pub hi: f64,
    pub lo: f64,
}

#[inline]
fn two_sum(a: f64, b: f64) -> (f64, f64) {
    let s = a + b;
    let bb = s - a;
    (s, (a - (s - bb)) + (b - bb))
}

#[inline]
fn quick_two_sum(a: f64, b: f64) -> (f64, f64) {
    let s = a + b;
    (s, b - (s - a))
}

#[inline]
fn two_prod(a: f64, b: f64) -> (f64, f64) {
    let p = a * b;
    (p, a.mul_add(b, -p))
}

impl Dd {
    pub const ZERO: Dd = Dd { hi: 0.0, lo: 0.0 };
    pub const ONE: Dd = Dd { hi: 1.0, lo: 0.0 };

    pub fn new(x: f64) -> Self {
        Dd { hi: x, lo: 0.0 }
    }

    /// `a + b` without rounding.
    pub fn sum_exact(a: f64, b: f64) -> Self {
        let (s, e) = two_sum(a, b);
        Dd { hi: s, lo: e }
    }

    pub fn to_f64(self) -> f64 {
        self.hi + self.lo
    }

    pub fn abs(self) -> Self {
        if self.hi < 0.0 {
            -self
        } else {
            self
        }
    }

    pub fn recip(self) -> Self {
        Dd::ONE / self
    }

    /// Multiplication by a power of two is exact.
    pub fn ldexp(self, k: i32) -> Self {
        let f = 2f64.powi(k);
        Dd { hi: self.hi * f, lo: self.lo * f }
    }
}

impl From<f64> for Dd {
    fn from(x: f64) -> Self {
        Dd::new(x)
    }
}

impl Add for Dd {
    type Output = Dd;
    fn add(self, b: Dd) -> Dd {
        let (s, e) = two_sum(self.hi, b.hi);
        let (t, f) = two_sum(self.lo, b.lo);
        let (s, e) = quick_two_sum(s, e + t);
        let (hi, lo) = quick_two_sum(s, e + f);
        Dd { hi, lo }
    }
}

impl Neg for Dd {
    type Output = Dd;
    fn neg(self) -> Dd {
        Dd { hi: -self.hi, lo: -self.lo }
    }
}

impl Sub for Dd {
    type Output = Dd;
    fn sub(self, b: Dd) -> Dd {
        self + (-b)
    }
}

impl Mul for Dd {
    type Output = Dd;
    fn mul(self, b: Dd) -> Dd {
        let (p, e) = two_prod(self.hi, b.hi);
        let e = e + (self.hi * b.lo + self.lo * b.hi);
        let (hi, lo) = quick_two_sum(p, e);
        Dd { hi, lo }
    }
}

impl std::ops::Div for Dd {
    type Output = Dd;
    fn div(self, b: Dd) -> Dd {
        let q1 = self.hi / b.hi;
        let r = self - b * Dd::new(q1);
        let q2 = r.hi / b.hi;
        let r = r - b * Dd::new(q2);
        let q3 = r.hi / b.hi;
        let (hi, lo) = quick_two_sum(q1, q2);
        Dd { hi, lo } + Dd::new(q3)
    }
}

/// Square matrix in row-major order.
#[derive(Debug, Clone, PartialEq)]
pub struct DdMat {
    pub n: usize,
    pub a: Vec<Dd>,
}

impl DdMat {
    pub fn zeros(n: usize) -> Self {
        DdMat { n, a: vec![Dd::ZERO; n * n] }
    }

    pub fn identity(n: usize) -> Self {
        let mut m = Self::zeros(n);
        for i in 0..n {
            m.a[i * n + i] = Dd::ONE;
        }
        m
    }

    pub fn from_f64(n: usize, f: impl Fn(usize, usize) -> f64) -> Self {
        let mut m = Self::zeros(n);
        for i in 0..n {
            for j in 0..n {
                m.a[i * n + j] = Dd::new(f(i, j));
            }
        }
        m
    }

    pub fn get(&self, i: usize, j: usize) -> Dd {
        self.a[i * self.n + j]
    }

    pub fn mul(&self, b: &DdMat) -> DdMat {
        let n = self.n;
        let mut out = DdMat::zeros(n);
        for i in 0..n {
            for k in 0..n {
                let x = self.a[i * n + k];
                if x.hi == 0.0 {
                    continue;
                }
                for j in 0..n {
                    let y = b.a[k * n + j];
                    if y.hi != 0.0 {
                        out.a[i * n + j] = out.a[i * n + j] + x * y;
                    }
                }
            }
        }
        out
    }

    pub fn add(&self, b: &DdMat) -> DdMat {
        DdMat { n: self.n, a: self.a.iter().zip(&b.a).map(|(x, y)| *x + *y).collect() }
    }

    pub fn sub(&self, b: &DdMat) -> DdMat {
        DdMat { n: self.n, a: self.a.iter().zip(&b.a).map(|(x, y)| *x - *y).collect() }
    }

    pub fn scale(&self, c: Dd) -> DdMat {
        DdMat { n: self.n, a: self.a.iter().map(|x| *x * c).collect() }
    }

    pub fn ldexp(&self, k: i32) -> DdMat {
        DdMat { n: self.n, a: self.a.iter().map(|x| x.ldexp(k)).collect() }
    }

    pub fn transpose(&self) -> DdMat {
        let n = self.n;
        let mut out = DdMat::zeros(n);
        for i in 0..n {
            for j in 0..n {
                out.a[j * n + i] = self.a[i * n + j];
            }
        }
        out
    }

    /// Max column sum, in f64.
    pub fn norm1(&self) -> f64 {
        let n = self.n;
        (0..n).map(|j| (0..n).map(|i| self.a[i * n + j].to_f64().abs()).sum::<f64>()).fold(0.0, f64::max)
    }

    /// Gauss-Jordan with partial pivoting.
    pub fn inverse(&self) -> Result<DdMat> {
        let n = self.n;
        let mut m = self.clone();
        let mut inv = DdMat::identity(n);
        for c in 0..n {
            let p = (c..n)
                .max_by(|&x, &y| m.a[x * n + c].hi.abs().total_cmp(&m.a[y * n + c].hi.abs()))
                .expect("nonempty");
            if m.a[p * n + c].hi == 0.0 {
                return Err(Error::NotPositiveDefinite);
            }
            if p != c {
                for j in 0..n {
                    m.a.swap(p * n + j, c * n + j);
                    inv.a.swap(p * n + j, c * n + j);
                }
            }
            let piv = m.a[c * n + c].recip();
            for j in 0..n {
                m.a[c * n + j] = m.a[c * n + j] * piv;
                inv.a[c * n + j] = inv.a[c * n + j] * piv;
            }
            for i in 0..n {
                if i == c {
                    continue;
                }
                let f = m.a[i * n + c];
                if f.hi == 0.0 {
                    continue;
                }
                for j in 0..n {
                    m.a[i * n + j] = m.a[i * n + j] - f * m.a[c * n + j];
                    inv.a[i * n + j] = inv.a[i * n + j] - f * inv.a[c * n + j];
                }
            }
        }
        Ok(inv)
    }
}

const TINY: f64 = 1e-33;

/// Exponential by scaling and squaring around a Taylor series.
pub fn expm_dd(a: &DdMat) -> Result<DdMat> {
    let norm = a.norm1();
    if !norm.is_finite() || norm > super::expm::EXP_NORM_LIMIT {
        return Err(Error::ExpOverflow { norm });
    }
    let s = if norm > 0.25 { (norm / 0.25).log2().ceil() as i32 } else { 0 };
    let x = a.ldexp(-s);
    let mut sum = DdMat::identity(a.n);
    let mut term = DdMat::identity(a.n);
    for k in 1..60 {
        term = term.mul(&x).scale(Dd::new(k as f64).recip());
        sum = sum.add(&term);
        if term.norm1() < TINY {
            break;
        }
    }
    for _ in 0..s {
        sum = sum.mul(&sum);
    }
    Ok(sum)
}

/// Principal square root by the Denman-Beavers iteration.
fn sqrtm_dd(m: &DdMat) -> Result<DdMat> {
    let mut y = m.clone();
    let mut z = DdMat::identity(m.n);
    for _ in 0..60 {
        let yi = y.inverse()?;
        let zi = z.inverse()?;
        let ny = y.add(&zi).ldexp(-1);
        let nz = z.add(&yi).ldexp(-1);
        let delta = ny.sub(&y).norm1();
        y = ny;
        z = nz;
        if delta < TINY * y.norm1() {
            break;
        }
    }
    Ok(y)
}

/// Logarithm of a symmetric positive definite matrix by inverse scaling and
/// squaring: square roots until close to the identity, then the series
/// `log M = 2 sum Z^{2j+1} / (2j+1)` with `Z = (M - I)(M + I)^{-1}`.
pub fn logm_spd_dd(m: &DdMat) -> Result<DdMat> {
    let n = m.n;
    let id = DdMat::identity(n);
    let mut x = m.clone();
    let mut k = 0;
    while x.sub(&id).norm1() > 0.25 {
        x = sqrtm_dd(&x)?;
        k += 1;
        if k > 60 {
            return Err(Error::NotPositiveDefinite);
        }
    }
    let z = x.sub(&id).mul(&x.add(&id).inverse()?);
    let z2 = z.mul(&z);
    let mut power = z.clone();
    let mut sum = z;
    for j in 1..80 {
        power = power.mul(&z2);
        let term = power.scale(Dd::new((2 * j + 1) as f64).recip());
        sum = sum.add(&term);
        if term.norm1() < TINY {
            break;
        }
    }
    Ok(sum.ldexp(1 + k))
}
