//! Even supermatrices and their inverse.
//!
//! A [`SuperMatrix`] of shape `(p|q) × (p|q)` has even diagonal blocks `A`
//! (`p×p`) and `D` (`q×q`) and odd off-diagonal blocks `B` (`p×q`) and `C`
//! (`q×p`). The inverse uses the block formula with the Schur complement
//! `S = D - C A^{-1} B`:
//!
//! ```text
//! [ A^{-1} + A^{-1} B S^{-1} C A^{-1}    -A^{-1} B S^{-1} ]
//! [ -S^{-1} C A^{-1}                      S^{-1}          ]
//! ```

use crate::error::LinalgError;
use crate::fraction::exact_div;
use crate::grassmann::{ParityOf, Rational, SuperPoly};

pub type Matrix = Vec<Vec<SuperPoly>>;

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct SuperMatrix {
    p: usize,
    q: usize,
    entries: Matrix,
}

fn zeros(rows: usize, cols: usize) -> Matrix {
    vec![vec![SuperPoly::zero(); cols]; rows]
}

fn check_block(block: &Matrix, rows: usize, cols: usize, parity: ParityOf, name: &str) -> Result<(), LinalgError> {
    if block.len() != rows || block.iter().any(|r| r.len() != cols) {
        return Err(LinalgError::ShapeMismatch(format!("block {name} must be {rows}x{cols}")));
    }
    for row in block {
        for e in row {
            if e.parity_of() != parity && !e.is_zero() {
                return Err(LinalgError::ShapeMismatch(format!(
                    "block {name} entries must be {}",
                    if parity == ParityOf::Even { "even" } else { "odd" }
                )));
            }
        }
    }
    Ok(())
}

/// Product of plain matrices of ring elements; `cols` is the column count
/// of `y` (needed when `y` has no rows).
pub fn mat_mul(x: &Matrix, y: &Matrix, cols: usize) -> Matrix {
    let inner = y.len();
    x.iter()
        .map(|row| {
            (0..cols)
                .map(|j| {
                    let mut acc = SuperPoly::zero();
                    for k in 0..inner {
                        if !row[k].is_zero() && !y[k][j].is_zero() {
                            acc += &(&row[k] * &y[k][j]);
                        }
                    }
                    acc
                })
                .collect()
        })
        .collect()
}

fn mat_add(x: &Matrix, y: &Matrix) -> Matrix {
    x.iter()
        .zip(y)
        .map(|(r, s)| r.iter().zip(s).map(|(a, b)| a + b).collect())
        .collect()
}

fn mat_neg(x: &Matrix) -> Matrix {
    x.iter().map(|r| r.iter().map(|a| -a).collect()).collect()
}

fn identity_matrix(n: usize) -> Matrix {
    let mut m = zeros(n, n);
    for (i, row) in m.iter_mut().enumerate() {
        row[i] = SuperPoly::one();
    }
    m
}

/// Determinant by fraction-free (Bareiss) elimination. Entries must be
/// bosonic.
pub fn bareiss_det(m: &Matrix) -> SuperPoly {
    let n = m.len();
    if n == 0 {
        return SuperPoly::one();
    }
    let mut a = m.clone();
    let mut prev = SuperPoly::one();
    let mut negate = false;
    for k in 0..n - 1 {
        if a[k][k].is_zero() {
            match (k + 1..n).find(|&i| !a[i][k].is_zero()) {
                Some(i) => {
                    a.swap(i, k);
                    negate = !negate;
                }
                None => return SuperPoly::zero(),
            }
        }
        for i in k + 1..n {
            for j in k + 1..n {
                let t = &(&a[k][k] * &a[i][j]) - &(&a[i][k] * &a[k][j]);
                a[i][j] = exact_div(&t, &prev).expect("Bareiss division is exact");
            }
            a[i][k] = SuperPoly::zero();
        }
        prev = a[k][k].clone();
    }
    let det = a[n - 1][n - 1].clone();
    if negate {
        -det
    } else {
        det
    }
}

fn minor(m: &Matrix, row: usize, col: usize) -> Matrix {
    m.iter()
        .enumerate()
        .filter(|(i, _)| *i != row)
        .map(|(_, r)| r.iter().enumerate().filter(|(j, _)| *j != col).map(|(_, e)| e.clone()).collect())
        .collect()
}

/// Rational-matrix inverse by Gauss-Jordan elimination.
pub fn rational_inverse(m: &[Vec<Rational>]) -> Option<Vec<Vec<Rational>>> {
    use num_traits::{One, Zero};
    let n = m.len();
    let mut a: Vec<Vec<Rational>> = m
        .iter()
        .enumerate()
        .map(|(i, r)| {
            let mut row = r.clone();
            row.extend((0..n).map(|j| if i == j { Rational::one() } else { Rational::zero() }));
            row
        })
        .collect();
    for k in 0..n {
        let piv = (k..n).find(|&i| !a[i][k].is_zero())?;
        a.swap(piv, k);
        let inv = a[k][k].recip();
        for e in a[k].iter_mut() {
            *e *= &inv;
        }
        for i in 0..n {
            if i != k && !a[i][k].is_zero() {
                let f = a[i][k].clone();
                let pivot_row = a[k].clone();
                for (e, pk) in a[i].iter_mut().zip(&pivot_row) {
                    *e -= &f * pk;
                }
            }
        }
    }
    Some(a.into_iter().map(|r| r[n..].to_vec()).collect())
}

/// Inverse of a square matrix of even entries whose reduction modulo the
/// odd variables has unit determinant.
pub fn even_inverse(m: &Matrix, block: &'static str) -> Result<Matrix, LinalgError> {
    let n = m.len();
    if n == 0 {
        return Ok(Vec::new());
    }
    let reduced: Matrix = m.iter().map(|r| r.iter().map(SuperPoly::bosonic_part).collect()).collect();
    let nil: Matrix = m.iter().map(|r| r.iter().map(SuperPoly::nilpotent_part).collect()).collect();

    let constants: Option<Vec<Vec<Rational>>> = reduced
        .iter()
        .map(|r| r.iter().map(SuperPoly::as_constant).collect())
        .collect();
    let reduced_inv: Matrix = match constants {
        Some(c) => {
            if bareiss_det(&reduced).is_zero() {
                return Err(LinalgError::SingularReduction(block));
            }
            rational_inverse(&c)
                .expect("nonzero determinant")
                .into_iter()
                .map(|r| r.into_iter().map(SuperPoly::constant).collect())
                .collect()
        }
        None => {
            let det = bareiss_det(&reduced);
            let det_inv = det.invert().map_err(|_| LinalgError::SingularReduction(block))?;
            (0..n)
                .map(|i| {
                    (0..n)
                        .map(|j| {
                            let cof = bareiss_det(&minor(&reduced, j, i));
                            let cof = if (i + j) % 2 == 1 { -cof } else { cof };
                            &cof * &det_inv
                        })
                        .collect()
                })
                .collect()
        }
    };

    // (A0 + N)^{-1} = Σ (-A0^{-1} N)^j A0^{-1}
    let step = mat_neg(&mat_mul(&reduced_inv, &nil, n));
    let mut term = reduced_inv.clone();
    let mut sum = reduced_inv;
    loop {
        term = mat_mul(&step, &term, n);
        if term.iter().all(|r| r.iter().all(SuperPoly::is_zero)) {
            break;
        }
        sum = mat_add(&sum, &term);
    }
    Ok(sum)
}

impl SuperMatrix {
    pub fn from_blocks(a: Matrix, b: Matrix, c: Matrix, d: Matrix) -> Result<SuperMatrix, LinalgError> {
        let p = a.len();
        let q = d.len();
        check_block(&a, p, p, ParityOf::Even, "A")?;
        check_block(&b, p, q, ParityOf::Odd, "B")?;
        check_block(&c, q, p, ParityOf::Odd, "C")?;
        check_block(&d, q, q, ParityOf::Even, "D")?;
        let mut entries = Vec::with_capacity(p + q);
        for i in 0..p {
            let mut row = a[i].clone();
            row.extend(b[i].iter().cloned());
            entries.push(row);
        }
        for i in 0..q {
            let mut row = c[i].clone();
            row.extend(d[i].iter().cloned());
            entries.push(row);
        }
        Ok(SuperMatrix { p, q, entries })
    }

    /// Builds from full rows; the block parities are checked.
    pub fn from_rows(p: usize, q: usize, rows: Matrix) -> Result<SuperMatrix, LinalgError> {
        if rows.len() != p + q || rows.iter().any(|r| r.len() != p + q) {
            return Err(LinalgError::ShapeMismatch(format!("expected {}x{} entries", p + q, p + q)));
        }
        let m = SuperMatrix { p, q, entries: rows };
        SuperMatrix::from_blocks(m.a(), m.b(), m.c(), m.d())
    }

    pub fn identity(p: usize, q: usize) -> SuperMatrix {
        SuperMatrix {
            p,
            q,
            entries: identity_matrix(p + q),
        }
    }

    pub fn shape(&self) -> (usize, usize) {
        (self.p, self.q)
    }

    pub fn entry(&self, i: usize, j: usize) -> &SuperPoly {
        &self.entries[i][j]
    }

    pub fn rows(&self) -> &Matrix {
        &self.entries
    }

    fn block(&self, rows: std::ops::Range<usize>, cols: std::ops::Range<usize>) -> Matrix {
        self.entries[rows].iter().map(|r| r[cols.clone()].to_vec()).collect()
    }

    pub fn a(&self) -> Matrix {
        self.block(0..self.p, 0..self.p)
    }

    pub fn b(&self) -> Matrix {
        self.block(0..self.p, self.p..self.p + self.q)
    }

    pub fn c(&self) -> Matrix {
        self.block(self.p..self.p + self.q, 0..self.p)
    }

    pub fn d(&self) -> Matrix {
        self.block(self.p..self.p + self.q, self.p..self.p + self.q)
    }

    pub fn is_identity(&self) -> bool {
        self.entries == identity_matrix(self.p + self.q)
    }

    pub fn matmul(&self, other: &SuperMatrix) -> Result<SuperMatrix, LinalgError> {
        if self.shape() != other.shape() {
            return Err(LinalgError::ShapeMismatch(format!(
                "({}|{}) times ({}|{})",
                self.p, self.q, other.p, other.q
            )));
        }
        Ok(SuperMatrix {
            p: self.p,
            q: self.q,
            entries: mat_mul(&self.entries, &other.entries, self.p + self.q),
        })
    }

    /// Entrywise reduction modulo the odd variables.
    pub fn reduction(&self) -> SuperMatrix {
        SuperMatrix {
            p: self.p,
            q: self.q,
            entries: self
                .entries
                .iter()
                .map(|r| r.iter().map(SuperPoly::bosonic_part).collect())
                .collect(),
        }
    }

    /// The block-formula inverse.
    pub fn left_inverse(&self) -> Result<SuperMatrix, LinalgError> {
        let (a, b, c, d) = (self.a(), self.b(), self.c(), self.d());
        let a_inv = even_inverse(&a, "A")?;
        let (p, q) = (self.p, self.q);
        let ca = mat_mul(&c, &a_inv, p);
        let ab = mat_mul(&a_inv, &b, q);
        let s = mat_add(&d, &mat_neg(&mat_mul(&ca, &b, q)));
        let s_inv = even_inverse(&s, "D")?;
        let ab_s = mat_mul(&ab, &s_inv, q);
        let top_left = mat_add(&a_inv, &mat_mul(&ab_s, &ca, p));
        let top_right = mat_neg(&ab_s);
        let bottom_left = mat_neg(&mat_mul(&s_inv, &ca, p));
        SuperMatrix::from_blocks(top_left, top_right, bottom_left, s_inv)
    }
}
