//! Small dense floating-point kernels shared by the solver and the
//! certificate checkers: LU with partial pivoting, symmetric Jacobi
//! eigendecomposition, and determinants. Deterministic pivoting (ties go
//! to the lowest index) so repeated runs factor identically.

/// Dense row-major matrix.
#[derive(Clone, Debug)]
pub(crate) struct DMat {
    pub rows: usize,
    pub cols: usize,
    pub a: Vec<f64>,
}

impl DMat {
    pub fn zeros(rows: usize, cols: usize) -> Self {
        DMat {
            rows,
            cols,
            a: vec![0.0; rows * cols],
        }
    }

    #[inline]
    pub fn get(&self, r: usize, c: usize) -> f64 {
        self.a[r * self.cols + c]
    }

    #[inline]
    pub fn set(&mut self, r: usize, c: usize, v: f64) {
        self.a[r * self.cols + c] = v;
    }

    #[inline]
    pub fn add(&mut self, r: usize, c: usize, v: f64) {
        self.a[r * self.cols + c] += v;
    }

    pub fn mul_vec(&self, x: &[f64], out: &mut [f64]) {
        debug_assert_eq!(x.len(), self.cols);
        debug_assert_eq!(out.len(), self.rows);
        for r in 0..self.rows {
            let row = &self.a[r * self.cols..(r + 1) * self.cols];
            out[r] = row.iter().zip(x).map(|(a, b)| a * b).sum();
        }
    }
}

/// LU factorization with partial pivoting, in place.
pub(crate) struct Lu {
    lu: DMat,
    piv: Vec<usize>,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub(crate) struct Singular;

pub(crate) fn lu_factor(mut m: DMat) -> Result<Lu, Singular> {
    assert_eq!(m.rows, m.cols);
    let n = m.rows;
    let mut piv = Vec::with_capacity(n);
    for k in 0..n {
        let mut best = k;
        let mut best_val = m.get(k, k).abs();
        for i in k + 1..n {
            let v = m.get(i, k).abs();
            if v > best_val {
                best = i;
                best_val = v;
            }
        }
        if best_val == 0.0 || !best_val.is_finite() {
            return Err(Singular);
        }
        piv.push(best);
        if best != k {
            for c in 0..n {
                let t = m.get(k, c);
                m.set(k, c, m.get(best, c));
                m.set(best, c, t);
            }
        }
        let pivot = m.get(k, k);
        for i in k + 1..n {
            let factor = m.get(i, k) / pivot;
            m.set(i, k, factor);
            if factor != 0.0 {
                for c in k + 1..n {
                    let v = m.get(i, c) - factor * m.get(k, c);
                    m.set(i, c, v);
                }
            }
        }
    }
    Ok(Lu { lu: m, piv })
}

impl Lu {
    pub fn solve(&self, b: &mut [f64]) {
        let n = self.lu.rows;
        assert_eq!(b.len(), n);
        for k in 0..n {
            b.swap(k, self.piv[k]);
        }
        for k in 0..n {
            for i in k + 1..n {
                b[i] -= self.lu.get(i, k) * b[k];
            }
        }
        for k in (0..n).rev() {
            b[k] /= self.lu.get(k, k);
            for i in 0..k {
                b[i] -= self.lu.get(i, k) * b[k];
            }
        }
    }
}

/// Determinant by LU; 0.0 when structurally singular.
pub(crate) fn det(m: DMat) -> f64 {
    let n = m.rows;
    match lu_factor(m) {
        Err(Singular) => 0.0,
        Ok(lu) => {
            let mut d = 1.0;
            for k in 0..n {
                d *= lu.lu.get(k, k);
                if lu.piv[k] != k {
                    d = -d;
                }
            }
            d
        }
    }
}

/// Symmetric eigendecomposition via cyclic Jacobi rotations.
///
/// Input is the full symmetric matrix packed row-major; returns
/// (eigenvalues, eigenvectors as columns), eigenvalues descending.
pub(crate) fn jacobi_eigh(k: usize, sym: &[f64]) -> (Vec<f64>, DMat) {
    assert_eq!(sym.len(), k * k);
    let mut a = DMat {
        rows: k,
        cols: k,
        a: sym.to_vec(),
    };
    let mut v = DMat::zeros(k, k);
    for i in 0..k {
        v.set(i, i, 1.0);
    }
    let scale: f64 = (0..k)
        .map(|i| a.get(i, i).abs())
        .fold(0.0, f64::max)
        .max(sym.iter().fold(0.0f64, |m, x| m.max(x.abs())))
        .max(1e-300);
    for _sweep in 0..64 {
        let mut off = 0.0f64;
        for p in 0..k {
            for q in p + 1..k {
                off = off.max(a.get(p, q).abs());
            }
        }
        if off <= 1e-14 * scale {
            break;
        }
        for p in 0..k {
            for q in p + 1..k {
                let apq = a.get(p, q);
                if apq.abs() <= 1e-300 {
                    continue;
                }
                let app = a.get(p, p);
                let aqq = a.get(q, q);
                let theta = (aqq - app) / (2.0 * apq);
                let t = theta.signum() / (theta.abs() + (theta * theta + 1.0).sqrt());
                let c = 1.0 / (t * t + 1.0).sqrt();
                let s = t * c;
                for i in 0..k {
                    let aip = a.get(i, p);
                    let aiq = a.get(i, q);
                    a.set(i, p, c * aip - s * aiq);
                    a.set(i, q, s * aip + c * aiq);
                }
                for i in 0..k {
                    let api = a.get(p, i);
                    let aqi = a.get(q, i);
                    a.set(p, i, c * api - s * aqi);
                    a.set(q, i, s * api + c * aqi);
                }
                for i in 0..k {
                    let vip = v.get(i, p);
                    let viq = v.get(i, q);
                    v.set(i, p, c * vip - s * viq);
                    v.set(i, q, s * vip + c * viq);
                }
            }
        }
    }
    let mut pairs: Vec<(f64, usize)> = (0..k).map(|i| (a.get(i, i), i)).collect();
    pairs.sort_by(|x, y| y.0.partial_cmp(&x.0).unwrap().then(x.1.cmp(&y.1)));
    let vals: Vec<f64> = pairs.iter().map(|p| p.0).collect();
    let mut vecs = DMat::zeros(k, k);
    for (new_col, &(_, old_col)) in pairs.iter().enumerate() {
        for i in 0..k {
            vecs.set(i, new_col, v.get(i, old_col));
        }
    }
    (vals, vecs)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn lu_solves_small_system() {
        let mut m = DMat::zeros(3, 3);
        let data = [[2.0, 1.0, 0.0], [1.0, 3.0, 1.0], [0.0, 1.0, 2.0]];
        for r in 0..3 {
            for c in 0..3 {
                m.set(r, c, data[r][c]);
            }
        }
        let lu = lu_factor(m.clone()).unwrap();
        let x_true = [1.0, -2.0, 3.0];
        let mut b = vec![0.0; 3];
        m.mul_vec(&x_true, &mut b);
        lu.solve(&mut b);
        for (xi, ti) in b.iter().zip(x_true) {
            assert!((xi - ti).abs() < 1e-12);
        }
    }

    #[test]
    fn det_of_vandermonde() {
        // t in {0, 1, 2}: det = (1-0)(2-0)(2-1) = 2
        let mut m = DMat::zeros(3, 3);
        for (r, t) in [0.0f64, 1.0, 2.0].iter().enumerate() {
            m.set(r, 0, 1.0);
            m.set(r, 1, *t);
            m.set(r, 2, t * t);
        }
        assert!((det(m) - 2.0).abs() < 1e-12);
    }

    #[test]
    fn jacobi_recovers_diagonal_spectrum() {
        let sym = [4.0, 1.0, 0.0, 1.0, 3.0, 0.0, 0.0, 0.0, 1.0];
        let (vals, vecs) = jacobi_eigh(3, &sym);
        // Eigenvalues of [[4,1],[1,3]] are (7 +/- sqrt(5))/2; third is 1.
        let e0 = (7.0 + 5.0f64.sqrt()) / 2.0;
        let e1 = (7.0 - 5.0f64.sqrt()) / 2.0;
        assert!((vals[0] - e0).abs() < 1e-12);
        assert!((vals[1] - e1).abs() < 1e-12);
        assert!((vals[2] - 1.0).abs() < 1e-12);
        // Columns orthonormal.
        for i in 0..3 {
            for j in 0..3 {
                let dot: f64 = (0..3).map(|r| vecs.get(r, i) * vecs.get(r, j)).sum();
                let expect = if i == j { 1.0 } else { 0.0 };
                assert!((dot - expect).abs() < 1e-12);
            }
        }
    }
}
