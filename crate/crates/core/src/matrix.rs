use std::fmt;
use std::ops::Mul;

use crate::error::{Error, Result};
use crate::semiring::{Bar, BarValue, OmegaValue, Semiring};

/// Dense matrix over a max-plus style semiring. Equality is entrywise.
#[derive(Clone, PartialEq, Eq, Hash, Debug)]
pub struct Matrix<V> {
    rows: usize,
    cols: usize,
    data: Vec<V>,
}

impl<V: Semiring> Matrix<V> {
    /// Matrix filled with `-∞`.
    pub fn zeros(rows: usize, cols: usize) -> Self {
        Matrix {
            rows,
            cols,
            data: vec![V::zero(); rows * cols],
        }
    }

    /// `0` on the diagonal, `-∞` elsewhere.
    pub fn identity(n: usize) -> Self {
        let mut m = Self::zeros(n, n);
        for i in 0..n {
            m.set(i, i, V::one());
        }
        m
    }

    pub fn from_rows(rows: Vec<Vec<V>>) -> Result<Self> {
        let r = rows.len();
        let c = rows.first().map_or(0, Vec::len);
        if rows.iter().any(|row| row.len() != c) {
            return Err(Error::InvalidAutomaton("ragged matrix rows".into()));
        }
        Ok(Matrix {
            rows: r,
            cols: c,
            data: rows.into_iter().flatten().collect(),
        })
    }

    pub fn rows(&self) -> usize {
        self.rows
    }

    pub fn cols(&self) -> usize {
        self.cols
    }

    pub fn get(&self, i: usize, j: usize) -> &V {
        &self.data[i * self.cols + j]
    }

    pub fn set(&mut self, i: usize, j: usize, v: V) {
        self.data[i * self.cols + j] = v;
    }

    pub fn row(&self, i: usize) -> &[V] {
        &self.data[i * self.cols..(i + 1) * self.cols]
    }

    pub fn entries(&self) -> impl Iterator<Item = (usize, usize, &V)> {
        let cols = self.cols;
        self.data
            .iter()
            .enumerate()
            .map(move |(k, v)| (k / cols, k % cols, v))
    }

    pub fn map<W, F: Fn(&V) -> W>(&self, f: F) -> Matrix<W> {
        Matrix {
            rows: self.rows,
            cols: self.cols,
            data: self.data.iter().map(f).collect(),
        }
    }

    /// `(M ⊗ N)[i][j] = max_k M[i][k] + N[k][j]` in the semiring.
    pub fn otimes(&self, rhs: &Self) -> Result<Self> {
        if self.cols != rhs.rows {
            return Err(Error::DimensionMismatch {
                left_rows: self.rows,
                left_cols: self.cols,
                right_rows: rhs.rows,
                right_cols: rhs.cols,
            });
        }
        let mut out = Self::zeros(self.rows, rhs.cols);
        for i in 0..self.rows {
            for k in 0..self.cols {
                let a = self.get(i, k);
                if a.is_zero() {
                    continue;
                }
                for j in 0..rhs.cols {
                    let b = rhs.get(k, j);
                    if b.is_zero() {
                        continue;
                    }
                    let v = out.get(i, j).oplus(&a.otimes(b));
                    out.set(i, j, v);
                }
            }
        }
        Ok(out)
    }

    /// `self^k` for `k ≥ 1` by repeated squaring; `k = 0` yields the identity.
    pub fn pow(&self, mut k: u64) -> Result<Self> {
        if self.rows != self.cols {
            return Err(Error::DimensionMismatch {
                left_rows: self.rows,
                left_cols: self.cols,
                right_rows: self.rows,
                right_cols: self.cols,
            });
        }
        let mut result = Self::identity(self.rows);
        let mut base = self.clone();
        while k > 0 {
            if k & 1 == 1 {
                result = &result * &base;
            }
            k >>= 1;
            if k > 0 {
                base = &base * &base;
            }
        }
        Ok(result)
    }

    pub fn is_square(&self) -> bool {
        self.rows == self.cols
    }

    /// Largest entry under the semiring order (`-∞` for an empty or all `-∞` matrix).
    pub fn max_entry(&self) -> V
    where
        V: Ord,
    {
        self.data.iter().max().cloned().unwrap_or_else(V::zero)
    }
}

impl<V: Semiring + Bar> Matrix<V> {
    /// Entrywise bar projection.
    pub fn bar(&self) -> Matrix<BarValue> {
        self.map(Bar::bar)
    }
}

impl Matrix<BarValue> {
    pub fn lift(&self) -> Matrix<OmegaValue> {
        self.map(|v| v.lift())
    }

    pub fn is_idempotent(&self) -> bool {
        self.is_square() && &(self * self) == self
    }
}

impl Matrix<OmegaValue> {
    /// Inverse of [`Matrix::lift`]; `None` if some entry is `∞`.
    pub fn to_bar(&self) -> Option<Matrix<BarValue>> {
        let data = self
            .data
            .iter()
            .map(|v| v.to_bar())
            .collect::<Option<Vec<_>>>()?;
        Some(Matrix {
            rows: self.rows,
            cols: self.cols,
            data,
        })
    }

    /// `M` is path-idempotent when its bar projection is idempotent.
    pub fn is_path_idempotent(&self) -> bool {
        self.bar().is_idempotent()
    }

    /// `M ⊗ M' ⊗ M` where `M'` has its diagonal stabilised.
    pub fn stabilise(&self) -> Result<Self> {
        if !self.is_path_idempotent() {
            return Err(Error::NotPathIdempotent);
        }
        let mut diag = self.clone();
        for i in 0..self.rows {
            diag.set(i, i, self.get(i, i).sharp());
        }
        Ok(&(self * &diag) * self)
    }

    /// `M̄ ⊗ ⟨M³⟩ ⊗ M̄` where `⟨·⟩` bars the off-diagonal entries.
    pub fn flatten(&self) -> Result<Self> {
        if !self.is_path_idempotent() {
            return Err(Error::NotPathIdempotent);
        }
        let barred = self.bar().lift();
        let mut cube = &(self * self) * self;
        for i in 0..self.rows {
            for j in 0..self.cols {
                if i != j {
                    let v = cube.get(i, j).bar().lift();
                    cube.set(i, j, v);
                }
            }
        }
        Ok(&(&barred * &cube) * &barred)
    }
}

impl<V: Semiring> Mul for &Matrix<V> {
    type Output = Matrix<V>;

    /// Panics on a dimension mismatch; use [`Matrix::otimes`] for a checked product.
    fn mul(self, rhs: Self) -> Matrix<V> {
        self.otimes(rhs).expect("matrix dimensions must agree")
    }
}

impl<V: Semiring + fmt::Display> fmt::Display for Matrix<V> {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str("[")?;
        for i in 0..self.rows {
            if i > 0 {
                f.write_str("; ")?;
            }
            for j in 0..self.cols {
                if j > 0 {
                    f.write_str(" ")?;
                }
                write!(f, "{}", self.get(i, j))?;
            }
        }
        f.write_str("]")
    }
}

/// Parses the compact notation used in tests: `"0 - - ; - 1 -"` where `-`
/// stands for `-∞` and `i` for `∞`.
pub fn omega_matrix(spec: &str) -> Matrix<OmegaValue> {
    let rows = spec
        .split(';')
        .map(|row| {
            row.split_whitespace()
                .map(|tok| match tok {
                    "-" => OmegaValue::NegInf,
                    "0" => OmegaValue::Zero,
                    "1" => OmegaValue::One,
                    "i" | "inf" => OmegaValue::Inf,
                    other => panic!("bad matrix token {other}"),
                })
                .collect()
        })
        .collect();
    Matrix::from_rows(rows).expect("well-formed matrix literal")
}

/// Same notation as [`omega_matrix`], restricted to `Ω̄`.
pub fn bar_matrix(spec: &str) -> Matrix<BarValue> {
    omega_matrix(spec)
        .to_bar()
        .expect("bar matrix literal must not contain inf")
}
