use crate::error::{Error, Result};
use crate::scalar::Real;

/// Square tridiagonal matrix stored by diagonals.
///
/// `sub[i] = A[i+1][i]`, `diag[i] = A[i][i]`, `sup[i] = A[i][i+1]`.
#[derive(Debug, Clone, PartialEq)]
pub struct Tridiagonal<T> {
    pub sub: Vec<T>,
    pub diag: Vec<T>,
    pub sup: Vec<T>,
}

impl<T: Real> Tridiagonal<T> {
    pub fn new(sub: Vec<T>, diag: Vec<T>, sup: Vec<T>) -> Result<Self> {
        let n = diag.len();
        if n == 0 || sub.len() + 1 != n || sup.len() + 1 != n {
            return Err(Error::Domain(format!(
                "tridiagonal shape mismatch: sub {}, diag {n}, sup {}",
                sub.len(),
                sup.len()
            )));
        }
        Ok(Tridiagonal { sub, diag, sup })
    }

    pub fn identity(n: usize) -> Self {
        Tridiagonal {
            sub: vec![T::zero(); n.saturating_sub(1)],
            diag: vec![T::one(); n],
            sup: vec![T::zero(); n.saturating_sub(1)],
        }
    }

    pub fn len(&self) -> usize {
        self.diag.len()
    }

    pub fn is_empty(&self) -> bool {
        self.diag.is_empty()
    }

    pub fn mul_vec(&self, x: &[T]) -> Vec<T> {
        let n = self.len();
        assert_eq!(x.len(), n, "dimension mismatch");
        (0..n)
            .map(|i| {
                let mut acc = self.diag[i] * x[i];
                if i > 0 {
                    acc = acc + self.sub[i - 1] * x[i - 1];
                }
                if i + 1 < n {
                    acc = acc + self.sup[i] * x[i + 1];
                }
                acc
            })
            .collect()
    }

    /// `max_i |(A x - b)_i|`
    pub fn residual_inf(&self, x: &[T], b: &[T]) -> T {
        self.mul_vec(x)
            .iter()
            .zip(b)
            .fold(T::zero(), |m, (&ax, &bi)| m.max((ax - bi).abs()))
    }

    pub fn to_dense(&self) -> Vec<Vec<T>> {
        let n = self.len();
        let mut a = vec![vec![T::zero(); n]; n];
        for i in 0..n {
            a[i][i] = self.diag[i];
            if i + 1 < n {
                a[i + 1][i] = self.sub[i];
                a[i][i + 1] = self.sup[i];
            }
        }
        a
    }

    /// Thomas elimination, no pivoting.
    pub fn solve(&self, rhs: &[T]) -> Result<Vec<T>> {
        let n = self.len();
        if rhs.len() != n {
            return Err(Error::Domain(format!(
                "right-hand side has length {}, matrix is {n}x{n}",
                rhs.len()
            )));
        }
        let mut c_prime = vec![T::zero(); n];
        let mut d_prime = vec![T::zero(); n];

        let mut pivot = self.diag[0];
        check_pivot(pivot, 0)?;
        if n > 1 {
            c_prime[0] = self.sup[0] / pivot;
        }
        d_prime[0] = rhs[0] / pivot;
        for i in 1..n {
            pivot = self.diag[i] - self.sub[i - 1] * c_prime[i - 1];
            check_pivot(pivot, i)?;
            if i + 1 < n {
                c_prime[i] = self.sup[i] / pivot;
            }
            d_prime[i] = (rhs[i] - self.sub[i - 1] * d_prime[i - 1]) / pivot;
        }

        let mut x = d_prime;
        for i in (0..n - 1).rev() {
            x[i] = x[i] - c_prime[i] * x[i + 1];
        }
        Ok(x)
    }
}

fn check_pivot<T: Real>(pivot: T, row: usize) -> Result<()> {
    if pivot == T::zero() || !pivot.is_finite() {
        Err(Error::ZeroPivot(row))
    } else {
        Ok(())
    }
}

pub fn solve_tridiagonal<T: Real>(a: &Tridiagonal<T>, b: &[T]) -> Result<Vec<T>> {
    a.solve(b)
}
