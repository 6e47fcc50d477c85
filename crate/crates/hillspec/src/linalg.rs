//! Small dense complex linear algebra: LU with partial pivoting.

use num_complex::Complex;

use crate::error::{Error, Result};
use crate::scalar::Real;

/// Row-major square complex matrix.
#[derive(Debug, Clone, PartialEq)]
pub struct CMatrix<T: Real> {
    pub n: usize,
    pub data: Vec<Complex<T>>,
}

impl<T: Real> CMatrix<T> {
    pub fn zeros(n: usize) -> Self {
        Self { n, data: vec![Complex::from(T::zero()); n * n] }
    }

    pub fn identity(n: usize) -> Self {
        let mut m = Self::zeros(n);
        for i in 0..n {
            m[(i, i)] = Complex::from(T::one());
        }
        m
    }

    pub fn from_fn(n: usize, f: impl Fn(usize, usize) -> Complex<T>) -> Self {
        let mut data = Vec::with_capacity(n * n);
        for i in 0..n {
            for j in 0..n {
                data.push(f(i, j));
            }
        }
        Self { n, data }
    }

    pub fn lu(&self) -> Lu<T> {
        Lu::new(self.clone())
    }

    pub fn det(&self) -> Complex<T> {
        self.lu().det()
    }

    pub fn mul(&self, other: &Self) -> Self {
        let n = self.n;
        Self::from_fn(n, |i, j| (0..n).fold(Complex::from(T::zero()), |acc, k| acc + self[(i, k)] * other[(k, j)]))
    }

    pub fn trace(&self) -> Complex<T> {
        (0..self.n).fold(Complex::from(T::zero()), |acc, i| acc + self[(i, i)])
    }
}

impl<T: Real> std::ops::Index<(usize, usize)> for CMatrix<T> {
    type Output = Complex<T>;
    fn index(&self, (i, j): (usize, usize)) -> &Complex<T> {
        &self.data[i * self.n + j]
    }
}

impl<T: Real> std::ops::IndexMut<(usize, usize)> for CMatrix<T> {
    fn index_mut(&mut self, (i, j): (usize, usize)) -> &mut Complex<T> {
        &mut self.data[i * self.n + j]
    }
}

/// `P A = L U`, factors packed in place.
#[derive(Debug, Clone)]
pub struct Lu<T: Real> {
    f: CMatrix<T>,
    perm: Vec<usize>,
    parity: bool,
    singular: bool,
}

impl<T: Real> Lu<T> {
    pub fn new(mut a: CMatrix<T>) -> Self {
        let n = a.n;
        let mut perm: Vec<usize> = (0..n).collect();
        let mut parity = false;
        let mut singular = false;
        for k in 0..n {
            let (piv, best) =
                (k..n)
                    .map(|i| (i, a[(i, k)].norm()))
                    .fold((k, T::neg_infinity()), |b, c| if c.1 > b.1 { c } else { b });
            if best == T::zero() {
                singular = true;
                continue;
            }
            if piv != k {
                for j in 0..n {
                    a.data.swap(k * n + j, piv * n + j);
                }
                perm.swap(k, piv);
                parity = !parity;
            }
            let d = a[(k, k)].inv();
            for i in k + 1..n {
                let m = a[(i, k)] * d;
                a[(i, k)] = m;
                if m.re == T::zero() && m.im == T::zero() {
                    continue;
                }
                for j in k + 1..n {
                    let u = a[(k, j)];
                    a[(i, j)] = a[(i, j)] - m * u;
                }
            }
        }
        Self { f: a, perm, parity, singular }
    }

    pub fn det(&self) -> Complex<T> {
        if self.singular {
            return Complex::from(T::zero());
        }
        let d = (0..self.f.n).fold(Complex::from(T::one()), |acc, i| acc * self.f[(i, i)]);
        if self.parity {
            -d
        } else {
            d
        }
    }

    pub fn is_singular(&self) -> bool {
        self.singular
    }

    pub fn solve(&self, b: &[Complex<T>]) -> Result<Vec<Complex<T>>> {
        if self.singular {
            return Err(Error::SingularMatrix);
        }
        let n = self.f.n;
        let mut x: Vec<Complex<T>> = self.perm.iter().map(|&p| b[p]).collect();
        for i in 0..n {
            for j in 0..i {
                let l = self.f[(i, j)];
                x[i] = x[i] - l * x[j];
            }
        }
        for i in (0..n).rev() {
            for j in i + 1..n {
                let u = self.f[(i, j)];
                x[i] = x[i] - u * x[j];
            }
            x[i] = x[i] / self.f[(i, i)];
        }
        Ok(x)
    }

    /// `tr(A⁻¹ B)`.
    pub fn trace_solve(&self, b: &CMatrix<T>) -> Result<Complex<T>> {
        let n = self.f.n;
        let mut tr = Complex::from(T::zero());
        for j in 0..n {
            let col: Vec<_> = (0..n).map(|i| b[(i, j)]).collect();
            tr = tr + self.solve(&col)?[j];
        }
        Ok(tr)
    }
}
