//! Small dense symmetric matrices (n <= 3) for covariance bookkeeping and
//! the matrix Cramer-Rao checks.

use crate::{Error, Result};

/// Symmetric matrix stored dense row-major.
#[derive(Debug, Clone, PartialEq)]
pub struct SymMat {
    n: usize,
    data: Vec<f64>,
}

impl SymMat {
    pub fn zeros(n: usize) -> Self {
        SymMat { n, data: vec![0.0; n * n] }
    }

    pub fn identity(n: usize) -> Self {
        let mut m = Self::zeros(n);
        for i in 0..n {
            m.data[i * n + i] = 1.0;
        }
        m
    }

    pub fn diag(d: &[f64]) -> Self {
        let mut m = Self::zeros(d.len());
        for (i, &v) in d.iter().enumerate() {
            m.data[i * d.len() + i] = v;
        }
        m
    }

    pub fn scalar(v: f64) -> Self {
        Self::diag(&[v])
    }

    /// Builds from a full row-major buffer, symmetrizing `(A + A^T)/2`.
    pub fn from_rows(n: usize, data: Vec<f64>) -> Result<Self> {
        if data.len() != n * n {
            return Err(Error::Domain(format!("expected {} entries, got {}", n * n, data.len())));
        }
        let mut m = SymMat { n, data };
        for i in 0..n {
            for j in (i + 1)..n {
                let avg = 0.5 * (m.data[i * n + j] + m.data[j * n + i]);
                m.data[i * n + j] = avg;
                m.data[j * n + i] = avg;
            }
        }
        Ok(m)
    }

    pub fn dim(&self) -> usize {
        self.n
    }

    pub fn get(&self, i: usize, j: usize) -> f64 {
        self.data[i * self.n + j]
    }

    pub fn set(&mut self, i: usize, j: usize, v: f64) {
        self.data[i * self.n + j] = v;
        self.data[j * self.n + i] = v;
    }

    pub fn trace(&self) -> f64 {
        (0..self.n).map(|i| self.get(i, i)).sum()
    }

    pub fn det(&self) -> f64 {
        let d = &self.data;
        match self.n {
            1 => d[0],
            2 => d[0] * d[3] - d[1] * d[2],
            3 => {
                d[0] * (d[4] * d[8] - d[5] * d[7]) - d[1] * (d[3] * d[8] - d[5] * d[6])
                    + d[2] * (d[3] * d[7] - d[4] * d[6])
            }
            _ => unreachable!("SymMat supports n <= 3"),
        }
    }

    pub fn inverse(&self) -> Result<SymMat> {
        let det = self.det();
        if det.abs() < 1e-300 {
            return Err(Error::SingularMatrix);
        }
        let d = &self.data;
        let n = self.n;
        let inv = match n {
            1 => vec![1.0 / d[0]],
            2 => vec![d[3] / det, -d[1] / det, -d[2] / det, d[0] / det],
            3 => {
                let c = |i: usize, j: usize| -> f64 {
                    // cofactor via 2x2 minor
                    let rows: Vec<usize> = (0..3).filter(|&r| r != i).collect();
                    let cols: Vec<usize> = (0..3).filter(|&cl| cl != j).collect();
                    let minor = d[rows[0] * 3 + cols[0]] * d[rows[1] * 3 + cols[1]]
                        - d[rows[0] * 3 + cols[1]] * d[rows[1] * 3 + cols[0]];
                    if (i + j) % 2 == 0 { minor } else { -minor }
                };
                // adjugate transpose; symmetric input keeps it symmetric
                let mut out = vec![0.0; 9];
                for i in 0..3 {
                    for j in 0..3 {
                        out[i * 3 + j] = c(j, i) / det;
                    }
                }
                out
            }
            _ => unreachable!(),
        };
        SymMat::from_rows(n, inv)
    }

    pub fn mul_vec(&self, x: &[f64]) -> Vec<f64> {
        let mut y = vec![0.0; self.n];
        for i in 0..self.n {
            for j in 0..self.n {
                y[i] += self.get(i, j) * x[j];
            }
        }
        y
    }

    /// Quadratic form `x^T A x`.
    pub fn quad_form(&self, x: &[f64]) -> f64 {
        let mut q = 0.0;
        for i in 0..self.n {
            for j in 0..self.n {
                q += x[i] * self.get(i, j) * x[j];
            }
        }
        q
    }

    pub fn scale(&self, c: f64) -> SymMat {
        SymMat { n: self.n, data: self.data.iter().map(|v| v * c).collect() }
    }

    pub fn sub(&self, other: &SymMat) -> SymMat {
        SymMat {
            n: self.n,
            data: self.data.iter().zip(&other.data).map(|(a, b)| a - b).collect(),
        }
    }

    /// Eigenvalues by cyclic Jacobi rotations, ascending order.
    pub fn eigenvalues(&self) -> Vec<f64> {
        let n = self.n;
        if n == 1 {
            return vec![self.data[0]];
        }
        let mut a = self.data.clone();
        let norm: f64 = a.iter().map(|v| v * v).sum::<f64>().sqrt().max(1e-300);
        for _sweep in 0..60 {
            let mut off = 0.0;
            for i in 0..n {
                for j in (i + 1)..n {
                    off += a[i * n + j] * a[i * n + j];
                }
            }
            if off.sqrt() < 1e-15 * norm {
                break;
            }
            for p in 0..n {
                for q in (p + 1)..n {
                    let apq = a[p * n + q];
                    if apq.abs() < 1e-300 {
                        continue;
                    }
                    let app = a[p * n + p];
                    let aqq = a[q * n + q];
                    let theta = 0.5 * (aqq - app) / apq;
                    let t = theta.signum() / (theta.abs() + (theta * theta + 1.0).sqrt());
                    let c = 1.0 / (t * t + 1.0).sqrt();
                    let s = t * c;
                    for k in 0..n {
                        let akp = a[k * n + p];
                        let akq = a[k * n + q];
                        a[k * n + p] = c * akp - s * akq;
                        a[k * n + q] = s * akp + c * akq;
                    }
                    for k in 0..n {
                        let apk = a[p * n + k];
                        let aqk = a[q * n + k];
                        a[p * n + k] = c * apk - s * aqk;
                        a[q * n + k] = s * apk + c * aqk;
                    }
                }
            }
        }
        let mut ev: Vec<f64> = (0..n).map(|i| a[i * n + i]).collect();
        ev.sort_by(|x, y| x.partial_cmp(y).unwrap());
        ev
    }

    pub fn min_eigenvalue(&self) -> f64 {
        self.eigenvalues()[0]
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn inverse_roundtrip_2x2() {
        let k = SymMat::from_rows(2, vec![2.0, 0.3, 0.3, 1.0]).unwrap();
        let inv = k.inverse().unwrap();
        let x = [0.7, -1.2];
        let y = inv.mul_vec(&k.mul_vec(&x));
        assert!((y[0] - x[0]).abs() < 1e-12 && (y[1] - x[1]).abs() < 1e-12);
    }

    #[test]
    fn det_and_inverse_3x3() {
        let k = SymMat::from_rows(3, vec![2.0, 0.5, 0.1, 0.5, 3.0, 0.2, 0.1, 0.2, 1.5]).unwrap();
        let inv = k.inverse().unwrap();
        let x = [1.0, 2.0, -0.5];
        let y = k.mul_vec(&inv.mul_vec(&x));
        for i in 0..3 {
            assert!((y[i] - x[i]).abs() < 1e-12);
        }
        assert!((k.det() * inv.det() - 1.0).abs() < 1e-12);
    }

    #[test]
    fn eigenvalues_diag_and_rotated() {
        let ev = SymMat::diag(&[3.0, 1.0, 2.0]).eigenvalues();
        assert!((ev[0] - 1.0).abs() < 1e-13 && (ev[2] - 3.0).abs() < 1e-13);
        // symmetric 2x2 with known spectrum {1, 3}
        let m = SymMat::from_rows(2, vec![2.0, 1.0, 1.0, 2.0]).unwrap();
        let ev = m.eigenvalues();
        assert!((ev[0] - 1.0).abs() < 1e-12 && (ev[1] - 3.0).abs() < 1e-12);
    }

    #[test]
    fn singular_detected() {
        let m = SymMat::from_rows(2, vec![1.0, 1.0, 1.0, 1.0]).unwrap();
        assert!(matches!(m.inverse(), Err(Error::SingularMatrix)));
    }
}
