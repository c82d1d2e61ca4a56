//! Dense exact linear algebra: reduced row echelon form with an optional
//! record of the row operations, rank, kernel and consistency certificates.

use crate::field::{FieldSpec, Scalar};

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Matrix {
    field: FieldSpec,
    rows: usize,
    cols: usize,
    data: Vec<Vec<Scalar>>,
}

impl Matrix {
    pub fn zeros(field: FieldSpec, rows: usize, cols: usize) -> Matrix {
        Matrix {
            field,
            rows,
            cols,
            data: vec![vec![field.zero(); cols]; rows],
        }
    }

    pub fn identity(field: FieldSpec, n: usize) -> Matrix {
        let mut m = Matrix::zeros(field, n, n);
        for i in 0..n {
            m.data[i][i] = field.one();
        }
        m
    }

    pub fn from_rows(field: FieldSpec, cols: usize, data: Vec<Vec<Scalar>>) -> Matrix {
        assert!(data.iter().all(|r| r.len() == cols), "ragged matrix");
        Matrix {
            field,
            rows: data.len(),
            cols,
            data,
        }
    }

    pub fn rows(&self) -> usize {
        self.rows
    }

    pub fn cols(&self) -> usize {
        self.cols
    }

    pub fn field(&self) -> FieldSpec {
        self.field
    }

    pub fn get(&self, r: usize, c: usize) -> &Scalar {
        &self.data[r][c]
    }

    pub fn set(&mut self, r: usize, c: usize, v: Scalar) {
        self.data[r][c] = v;
    }

    pub fn row(&self, r: usize) -> &[Scalar] {
        &self.data[r]
    }

    /// `A x` for a column vector `x`.
    pub fn mul_vec(&self, x: &[Scalar]) -> Vec<Scalar> {
        assert_eq!(x.len(), self.cols);
        self.data
            .iter()
            .map(|row| dot(self.field, row, x))
            .collect()
    }

    /// `y^T A` for a row vector `y`.
    pub fn left_mul_vec(&self, y: &[Scalar]) -> Vec<Scalar> {
        assert_eq!(y.len(), self.rows);
        let mut out = vec![self.field.zero(); self.cols];
        for (yr, row) in y.iter().zip(&self.data) {
            if yr.is_zero() {
                continue;
            }
            for (o, a) in out.iter_mut().zip(row) {
                if !a.is_zero() {
                    *o = &*o + &(yr * a);
                }
            }
        }
        out
    }

    pub fn rank(&self) -> usize {
        rref(self.clone(), false).pivots.len()
    }

    /// Kernel basis: one vector per free column, in column order, with a 1 in
    /// that free position.
    pub fn kernel_basis(&self) -> Vec<Vec<Scalar>> {
        let ech = rref(self.clone(), false);
        let mut is_pivot = vec![false; self.cols];
        for &p in &ech.pivots {
            is_pivot[p] = true;
        }
        (0..self.cols)
            .filter(|&c| !is_pivot[c])
            .map(|free| {
                let mut v = vec![self.field.zero(); self.cols];
                v[free] = self.field.one();
                for (r, &p) in ech.pivots.iter().enumerate() {
                    let a = ech.reduced.get(r, free);
                    if !a.is_zero() {
                        v[p] = -a;
                    }
                }
                v
            })
            .collect()
    }

    /// Solves `A x = b`. The particular solution sets every free variable to zero.
    /// When inconsistent, returns a functional `y` with `y^T A = 0` and `y^T b != 0`.
    pub fn solve(&self, b: &[Scalar]) -> Result<Vec<Scalar>, Vec<Scalar>> {
        assert_eq!(b.len(), self.rows);
        let ech = rref(self.clone(), true);
        let transform = ech.transform.as_ref().expect("tracked elimination");
        let reduced_rhs = transform.mul_vec(b);
        let rank = ech.pivots.len();

        let witness = (rank..self.rows)
            .filter(|&r| !reduced_rhs[r].is_zero())
            .map(|r| transform.row(r).to_vec())
            .min_by_key(|y| {
                let support: Vec<usize> = (0..y.len()).filter(|&i| !y[i].is_zero()).collect();
                (support.len(), support)
            });
        if let Some(y) = witness {
            return Err(y);
        }

        let mut x = vec![self.field.zero(); self.cols];
        for (r, &p) in ech.pivots.iter().enumerate() {
            x[p] = reduced_rhs[r].clone();
        }
        Ok(x)
    }
}

pub fn dot(field: FieldSpec, a: &[Scalar], b: &[Scalar]) -> Scalar {
    let mut acc = field.zero();
    for (x, y) in a.iter().zip(b) {
        if !x.is_zero() && !y.is_zero() {
            acc = &acc + &(x * y);
        }
    }
    acc
}

#[derive(Debug, Clone)]
pub struct Echelon {
    pub reduced: Matrix,
    /// Pivot column of each of the first `pivots.len()` rows.
    pub pivots: Vec<usize>,
    /// `T` with `T A = reduced`, when requested.
    pub transform: Option<Matrix>,
}

/// Gauss-Jordan elimination scanning columns left to right.
pub fn rref(mut a: Matrix, track: bool) -> Echelon {
    let field = a.field;
    let mut t = track.then(|| Matrix::identity(field, a.rows));
    let mut pivots = Vec::new();
    let mut row = 0;
    for col in 0..a.cols {
        if row == a.rows {
            break;
        }
        let Some(found) = (row..a.rows).find(|&r| !a.data[r][col].is_zero()) else {
            continue;
        };
        a.data.swap(row, found);
        if let Some(t) = t.as_mut() {
            t.data.swap(row, found);
        }

        let inv = a.data[row][col].inv().expect("pivot is nonzero");
        scale_row(&mut a.data[row], &inv);
        if let Some(t) = t.as_mut() {
            scale_row(&mut t.data[row], &inv);
        }

        let pivot_row = a.data[row].clone();
        let pivot_support: Vec<usize> =
            (col..a.cols).filter(|&c| !pivot_row[c].is_zero()).collect();
        let t_pivot = t.as_ref().map(|t| {
            let r = t.data[row].clone();
            let s: Vec<usize> = (0..r.len()).filter(|&c| !r[c].is_zero()).collect();
            (r, s)
        });
        for r in 0..a.rows {
            if r == row || a.data[r][col].is_zero() {
                continue;
            }
            let factor = a.data[r][col].clone();
            for &c in &pivot_support {
                a.data[r][c] = &a.data[r][c] - &(&factor * &pivot_row[c]);
            }
            if let (Some(t), Some((tp, ts))) = (t.as_mut(), t_pivot.as_ref()) {
                for &c in ts {
                    t.data[r][c] = &t.data[r][c] - &(&factor * &tp[c]);
                }
            }
        }
        pivots.push(col);
        row += 1;
    }
    Echelon {
        reduced: a,
        pivots,
        transform: t,
    }
}

fn scale_row(row: &mut [Scalar], c: &Scalar) {
    for x in row.iter_mut() {
        if !x.is_zero() {
            *x = &*x * c;
        }
    }
}
