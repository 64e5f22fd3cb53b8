use num_traits::{One, Signed, Zero};
use thiserror::Error;

use num_rational::BigRational;

use super::Exponent;

/// Dense matrix over exact rationals. Rank, RREF, nullspace and solves are
/// performed without rounding.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct RationalMatrix {
    rows: usize,
    cols: usize,
    data: Vec<BigRational>,
}

impl RationalMatrix {
    pub fn zeros(rows: usize, cols: usize) -> Self {
        RationalMatrix {
            rows,
            cols,
            data: vec![BigRational::zero(); rows * cols],
        }
    }

    pub fn identity(n: usize) -> Self {
        let mut m = Self::zeros(n, n);
        for i in 0..n {
            *m.get_mut(i, i) = BigRational::one();
        }
        m
    }

    /// Build from row vectors; panics if the rows are ragged.
    pub fn from_rows(rows: Vec<Vec<BigRational>>) -> Self {
        let r = rows.len();
        let c = rows.first().map_or(0, Vec::len);
        assert!(rows.iter().all(|row| row.len() == c), "ragged rows");
        RationalMatrix {
            rows: r,
            cols: c,
            data: rows.into_iter().flatten().collect(),
        }
    }

    pub fn rows(&self) -> usize {
        self.rows
    }

    pub fn cols(&self) -> usize {
        self.cols
    }

    pub fn get(&self, r: usize, c: usize) -> &BigRational {
        &self.data[r * self.cols + c]
    }

    pub fn get_mut(&mut self, r: usize, c: usize) -> &mut BigRational {
        &mut self.data[r * self.cols + c]
    }

    pub fn set(&mut self, r: usize, c: usize, v: BigRational) {
        self.data[r * self.cols + c] = v;
    }

    /// Matrix–vector product.
    pub fn mul_vec(&self, v: &[BigRational]) -> Vec<BigRational> {
        assert_eq!(v.len(), self.cols);
        (0..self.rows)
            .map(|r| {
                (0..self.cols)
                    .map(|c| self.get(r, c) * &v[c])
                    .fold(BigRational::zero(), |a, b| a + b)
            })
            .collect()
    }

    /// Reduced row echelon form together with the pivot column indices.
    ///
    /// Columns are scanned left to right, so on matrices whose columns are
    /// already in graded-lex monomial order the pivoting is graded-lex.
    pub fn rref(&self) -> (RationalMatrix, Vec<usize>) {
        let mut m = self.clone();
        let mut pivots = Vec::new();
        let mut row = 0;
        for col in 0..m.cols {
            if row == m.rows {
                break;
            }
            // First nonzero entry at or below `row`.
            let Some(p) = (row..m.rows).find(|&r| !m.get(r, col).is_zero()) else {
                continue;
            };
            if p != row {
                for c in 0..m.cols {
                    m.data.swap(row * m.cols + c, p * m.cols + c);
                }
            }
            let inv = m.get(row, col).recip();
            for c in col..m.cols {
                let v = m.get(row, c) * &inv;
                m.set(row, c, v);
            }
            for r in 0..m.rows {
                if r == row || m.get(r, col).is_zero() {
                    continue;
                }
                let factor = m.get(r, col).clone();
                for c in col..m.cols {
                    let v = m.get(r, c) - &factor * m.get(row, c);
                    m.set(r, c, v);
                }
            }
            pivots.push(col);
            row += 1;
        }
        (m, pivots)
    }

    pub fn rank(&self) -> usize {
        self.rref().1.len()
    }

    /// Exact basis of `{v : Mv = 0}`; empty iff the matrix has full column
    /// rank. One basis vector per free column, in column order, each with a
    /// 1 in its free position.
    pub fn nullspace(&self) -> Vec<Vec<BigRational>> {
        let (r, pivots) = self.rref();
        let pivot_set: Vec<Option<usize>> = {
            let mut v = vec![None; self.cols];
            for (i, &p) in pivots.iter().enumerate() {
                v[p] = Some(i);
            }
            v
        };
        let mut basis = Vec::new();
        for free in 0..self.cols {
            if pivot_set[free].is_some() {
                continue;
            }
            let mut vec = vec![BigRational::zero(); self.cols];
            vec[free] = BigRational::one();
            for (i, &p) in pivots.iter().enumerate() {
                vec[p] = -r.get(i, free).clone();
            }
            basis.push(vec);
        }
        basis
    }

    /// Solve `Mx = rhs` exactly. Returns `None` if the system is
    /// inconsistent; for underdetermined systems the free variables are
    /// set to zero.
    pub fn solve(&self, rhs: &[BigRational]) -> Option<Vec<BigRational>> {
        assert_eq!(rhs.len(), self.rows);
        let mut aug = RationalMatrix::zeros(self.rows, self.cols + 1);
        for r in 0..self.rows {
            for c in 0..self.cols {
                aug.set(r, c, self.get(r, c).clone());
            }
            aug.set(r, self.cols, rhs[r].clone());
        }
        let (red, pivots) = aug.rref();
        if pivots.contains(&self.cols) {
            return None; // pivot in the augmented column: inconsistent
        }
        let mut x = vec![BigRational::zero(); self.cols];
        for (i, &p) in pivots.iter().enumerate() {
            x[p] = red.get(i, self.cols).clone();
        }
        Some(x)
    }
}

/// Failure modes of [`barycentric_weights`].
#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum BaryError {
    /// The vertices are affinely dependent.
    #[error("vertices are affinely dependent")]
    DegenerateSimplex,
    /// The point is not in the relative interior of the simplex (some
    /// weight is zero or negative, or the point leaves the affine hull).
    #[error("point is not in the relative interior of the simplex")]
    Infeasible,
}

/// Exact barycentric coordinates of `beta` with respect to the affinely
/// independent `vertices`: weights `l_0..l_k` with sum 1 and
/// `sum l_i vertices[i] = beta`, all strictly positive.
///
/// Returns [`BaryError::Infeasible`] when `beta` is not in the relative
/// interior, [`BaryError::DegenerateSimplex`] when the vertices are
/// affinely dependent.
pub fn barycentric_weights(
    vertices: &[Exponent],
    beta: &Exponent,
) -> Result<Vec<BigRational>, BaryError> {
    assert!(!vertices.is_empty(), "need at least one vertex");
    let n = beta.nvars();
    assert!(
        vertices.iter().all(|v| v.nvars() == n),
        "vertex dimension mismatch"
    );
    let k1 = vertices.len();
    // Rows: one per coordinate, plus the affine row of ones.
    let mut m = RationalMatrix::zeros(n + 1, k1);
    for (j, v) in vertices.iter().enumerate() {
        for (i, &e) in v.entries().iter().enumerate() {
            m.set(i, j, BigRational::from_integer(e.into()));
        }
        m.set(n, j, BigRational::one());
    }
    if m.rank() < k1 {
        return Err(BaryError::DegenerateSimplex);
    }
    let mut rhs: Vec<BigRational> = beta
        .entries()
        .iter()
        .map(|&e| BigRational::from_integer(e.into()))
        .collect();
    rhs.push(BigRational::one());
    let weights = m.solve(&rhs).ok_or(BaryError::Infeasible)?;
    if weights.iter().any(|w| !w.is_positive()) {
        return Err(BaryError::Infeasible);
    }
    Ok(weights)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::polyalg::{rat, rat_int};

    fn ratv(vals: &[i64]) -> Vec<BigRational> {
        vals.iter().map(|&v| rat_int(v)).collect()
    }

    #[test]
    fn nullspace_of_identity_is_empty() {
        assert!(RationalMatrix::identity(3).nullspace().is_empty());
    }

    #[test]
    fn nullspace_of_row_of_ones() {
        let m = RationalMatrix::from_rows(vec![ratv(&[1, 1])]);
        let ns = m.nullspace();
        assert_eq!(ns.len(), 1);
        // (1, -1) up to scaling; our convention puts the 1 in the free slot.
        let v = &ns[0];
        assert_eq!(&v[0] + &v[1], rat_int(0));
        assert!(!v[1].is_zero());
    }

    #[test]
    fn nullspace_of_vandermonde_rows_is_empty() {
        // Rows (1, t, t^2) for t in {0, 1, 2}: determinant is the
        // Vandermonde product, nonzero, so the nullspace is trivial.
        let rows = [0i64, 1, 2]
            .iter()
            .map(|&t| ratv(&[1, t, t * t]))
            .collect();
        let m = RationalMatrix::from_rows(rows);
        assert!(m.nullspace().is_empty());
        assert_eq!(m.rank(), 3);
    }

    #[test]
    fn nullspace_count_is_cols_minus_rank() {
        let m = RationalMatrix::from_rows(vec![
            ratv(&[1, 2, 3, 4]),
            ratv(&[2, 4, 6, 8]),
            ratv(&[0, 1, 0, 1]),
        ]);
        let rank = m.rank();
        let ns = m.nullspace();
        assert_eq!(ns.len(), 4 - rank);
        for v in &ns {
            for entry in m.mul_vec(v) {
                assert!(entry.is_zero());
            }
        }
    }

    #[test]
    fn barycentric_motzkin_support() {
        let vertices = vec![
            Exponent::new(vec![4, 2]),
            Exponent::new(vec![2, 4]),
            Exponent::new(vec![0, 0]),
        ];
        let beta = Exponent::new(vec![2, 2]);
        let w = barycentric_weights(&vertices, &beta).unwrap();
        assert_eq!(w, vec![rat(1, 3), rat(1, 3), rat(1, 3)]);
    }

    #[test]
    fn barycentric_midpoint() {
        let vertices = vec![Exponent::new(vec![0]), Exponent::new(vec![4])];
        let w = barycentric_weights(&vertices, &Exponent::new(vec![2])).unwrap();
        assert_eq!(w, vec![rat(1, 2), rat(1, 2)]);
    }

    #[test]
    fn barycentric_boundary_is_infeasible() {
        let vertices = vec![Exponent::new(vec![0]), Exponent::new(vec![4])];
        assert_eq!(
            barycentric_weights(&vertices, &Exponent::new(vec![4])),
            Err(BaryError::Infeasible)
        );
    }

    #[test]
    fn barycentric_degenerate_simplex() {
        // Three collinear points in the plane are affinely dependent.
        let vertices = vec![
            Exponent::new(vec![0, 0]),
            Exponent::new(vec![2, 2]),
            Exponent::new(vec![4, 4]),
        ];
        assert_eq!(
            barycentric_weights(&vertices, &Exponent::new(vec![1, 1])),
            Err(BaryError::DegenerateSimplex)
        );
    }

    #[test]
    fn barycentric_reconstructs_beta_exactly() {
        let vertices = vec![
            Exponent::new(vec![6, 0]),
            Exponent::new(vec![0, 6]),
            Exponent::new(vec![0, 0]),
        ];
        let beta = Exponent::new(vec![2, 2]);
        let w = barycentric_weights(&vertices, &beta).unwrap();
        for (i, &b) in beta.entries().iter().enumerate() {
            let mut acc = BigRational::zero();
            for (wj, v) in w.iter().zip(&vertices) {
                acc += wj * BigRational::from_integer(v.entries()[i].into());
            }
            assert_eq!(acc, rat_int(b as i64));
        }
        let total: BigRational = w.iter().cloned().sum();
        assert_eq!(total, rat_int(1));
    }
}
