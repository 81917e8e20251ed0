//! Dense matrices and vectors over a cost dioid.
//!
//! A matrix `M` indexed by states holds `M[σ][σ']`, the cost of the one-step
//! transition σ → σ' (`⊥` when absent). Products compose paths, so `Mᵏ`
//! collects the costs of all walks of length `k`.

use std::fmt;
use std::sync::Arc;

use crate::cost_dioid::{CostDioid, CostValue};
use crate::error::MatrixError;

#[derive(Clone, Debug, PartialEq)]
pub struct CostMatrix {
    rows: usize,
    cols: usize,
    entries: Vec<CostValue>,
    dioid: Arc<CostDioid>,
}

#[derive(Clone, Debug, PartialEq)]
pub struct CostVector {
    entries: Vec<CostValue>,
    dioid: Arc<CostDioid>,
}

impl CostMatrix {
    /// Row-major construction; every entry must belong to the carrier.
    pub fn new(
        dioid: Arc<CostDioid>,
        rows: usize,
        cols: usize,
        entries: Vec<CostValue>,
    ) -> Result<Self, MatrixError> {
        if rows == 0 || cols == 0 {
            return Err(MatrixError::Empty);
        }
        if entries.len() != rows * cols {
            return Err(MatrixError::DimensionMismatch {
                left: (rows, cols),
                right: (entries.len(), 1),
            });
        }
        for v in &entries {
            dioid.check(v)?;
        }
        Ok(CostMatrix {
            rows,
            cols,
            entries,
            dioid,
        })
    }

    pub fn from_rows(dioid: Arc<CostDioid>, rows: Vec<Vec<CostValue>>) -> Result<Self, MatrixError> {
        let n = rows.len();
        let m = rows.first().map_or(0, Vec::len);
        if let Some(bad) = rows.iter().find(|r| r.len() != m) {
            return Err(MatrixError::DimensionMismatch {
                left: (n, m),
                right: (n, bad.len()),
            });
        }
        CostMatrix::new(dioid, n, m, rows.into_iter().flatten().collect())
    }

    /// The all-`⊥` matrix.
    pub fn zero(dioid: Arc<CostDioid>, rows: usize, cols: usize) -> Self {
        assert!(rows > 0 && cols > 0, "matrix dimensions must be positive");
        let entries = vec![dioid.zero(); rows * cols];
        CostMatrix {
            rows,
            cols,
            entries,
            dioid,
        }
    }

    /// `e` on the diagonal, `⊥` elsewhere.
    pub fn identity(dioid: Arc<CostDioid>, n: usize) -> Self {
        let mut m = CostMatrix::zero(dioid, n, n);
        let e = m.dioid.unit();
        for i in 0..n {
            m.entries[i * n + i] = e.clone();
        }
        m
    }

    pub fn rows(&self) -> usize {
        self.rows
    }

    pub fn cols(&self) -> usize {
        self.cols
    }

    pub fn dims(&self) -> (usize, usize) {
        (self.rows, self.cols)
    }

    pub fn is_square(&self) -> bool {
        self.rows == self.cols
    }

    pub fn dioid(&self) -> &Arc<CostDioid> {
        &self.dioid
    }

    pub fn get(&self, i: usize, j: usize) -> &CostValue {
        &self.entries[i * self.cols + j]
    }

    /// Replaces one entry.
    ///
    /// # Panics
    /// If the value lies outside the carrier or the index is out of range.
    pub fn set(&mut self, i: usize, j: usize, v: CostValue) {
        assert!(self.dioid.contains(&v), "entry outside the dioid carrier");
        self.entries[i * self.cols + j] = v;
    }

    pub fn row(&self, i: usize) -> &[CostValue] {
        &self.entries[i * self.cols..(i + 1) * self.cols]
    }

    pub fn column(&self, j: usize) -> CostVector {
        CostVector {
            entries: (0..self.rows).map(|i| self.get(i, j).clone()).collect(),
            dioid: self.dioid.clone(),
        }
    }

    fn same_dioid(&self, other: &CostMatrix) -> Result<(), MatrixError> {
        if Arc::ptr_eq(&self.dioid, &other.dioid) || self.dioid == other.dioid {
            Ok(())
        } else {
            Err(MatrixError::DioidMismatch)
        }
    }

    fn same_dims(&self, other: &CostMatrix) -> Result<(), MatrixError> {
        if self.dims() == other.dims() {
            Ok(())
        } else {
            Err(MatrixError::DimensionMismatch {
                left: self.dims(),
                right: other.dims(),
            })
        }
    }

    fn require_square(&self) -> Result<usize, MatrixError> {
        if self.is_square() {
            Ok(self.rows)
        } else {
            Err(MatrixError::NotSquare(self.rows, self.cols))
        }
    }

    /// Entrywise ⊕.
    pub fn add(&self, other: &CostMatrix) -> Result<CostMatrix, MatrixError> {
        self.same_dioid(other)?;
        self.same_dims(other)?;
        let entries = self
            .entries
            .iter()
            .zip(&other.entries)
            .map(|(a, b)| self.dioid.oplus(a, b))
            .collect();
        Ok(CostMatrix {
            entries,
            ..self.clone()
        })
    }

    /// `(AB)[i][j] = ⊕ₖ A[i][k] ⊗ B[k][j]`.
    pub fn mul(&self, other: &CostMatrix) -> Result<CostMatrix, MatrixError> {
        self.same_dioid(other)?;
        if self.cols != other.rows {
            return Err(MatrixError::DimensionMismatch {
                left: self.dims(),
                right: other.dims(),
            });
        }
        let d = &self.dioid;
        let mut entries = vec![d.zero(); self.rows * other.cols];
        for i in 0..self.rows {
            for k in 0..self.cols {
                let a = self.get(i, k);
                if d.is_zero(a) {
                    continue;
                }
                for j in 0..other.cols {
                    let slot = &mut entries[i * other.cols + j];
                    *slot = d.oplus(slot, &d.otimes(a, other.get(k, j)));
                }
            }
        }
        Ok(CostMatrix {
            rows: self.rows,
            cols: other.cols,
            entries,
            dioid: self.dioid.clone(),
        })
    }

    /// `(Au)[i] = ⊕ⱼ A[i][j] ⊗ u[j]`.
    pub fn mul_vec(&self, u: &CostVector) -> Result<CostVector, MatrixError> {
        if !(Arc::ptr_eq(&self.dioid, &u.dioid) || *self.dioid == *u.dioid) {
            return Err(MatrixError::DioidMismatch);
        }
        if self.cols != u.len() {
            return Err(MatrixError::DimensionMismatch {
                left: self.dims(),
                right: (u.len(), 1),
            });
        }
        let d = &self.dioid;
        let entries = (0..self.rows)
            .map(|i| {
                self.row(i)
                    .iter()
                    .zip(&u.entries)
                    .fold(d.zero(), |acc, (a, x)| d.oplus(&acc, &d.otimes(a, x)))
            })
            .collect();
        Ok(CostVector {
            entries,
            dioid: self.dioid.clone(),
        })
    }

    /// Entrywise order.
    pub fn leq(&self, other: &CostMatrix) -> Result<bool, MatrixError> {
        self.same_dioid(other)?;
        self.same_dims(other)?;
        Ok(self
            .entries
            .iter()
            .zip(&other.entries)
            .all(|(a, b)| self.dioid.leq(a, b)))
    }

    /// First position `(i, j)` where `self[i][j] ≤ other[i][j]` fails.
    pub fn first_violation(&self, other: &CostMatrix) -> Result<Option<(usize, usize)>, MatrixError> {
        self.same_dioid(other)?;
        self.same_dims(other)?;
        Ok((0..self.entries.len())
            .find(|&idx| !self.dioid.leq(&self.entries[idx], &other.entries[idx]))
            .map(|idx| (idx / self.cols, idx % self.cols)))
    }

    /// `Aᵏ` by k-fold multiplication; `A⁰` is the identity.
    pub fn power(&self, k: u32) -> Result<CostMatrix, MatrixError> {
        let n = self.require_square()?;
        if k == 0 {
            return Ok(CostMatrix::identity(self.dioid.clone(), n));
        }
        let mut acc = self.clone();
        for _ in 1..k {
            acc = acc.mul(self)?;
        }
        Ok(acc)
    }

    /// `A⁺ = ⊕_{i≥1} Aⁱ` by Gauss-Jordan elimination with the element star.
    ///
    /// Step `k` admits paths through intermediate states `0..=k`:
    /// `D[i][j] ← D[i][j] ⊕ D[i][k] ⊗ D[k][k]* ⊗ D[k][j]`.
    /// Diverging entries come out as `⊤` through the star certificate.
    pub fn kleene_plus(&self) -> Result<CostMatrix, MatrixError> {
        let n = self.require_square()?;
        let d = &self.dioid;
        let mut cur = self.entries.clone();
        for k in 0..n {
            let loop_star = d.star(&cur[k * n + k])?;
            let pivot_row: Vec<CostValue> = cur[k * n..(k + 1) * n].to_vec();
            let pivot_col: Vec<CostValue> = (0..n).map(|i| cur[i * n + k].clone()).collect();
            for i in 0..n {
                if d.is_zero(&pivot_col[i]) {
                    continue;
                }
                let left = d.otimes(&pivot_col[i], &loop_star);
                for j in 0..n {
                    if d.is_zero(&pivot_row[j]) {
                        continue;
                    }
                    let slot = &mut cur[i * n + j];
                    *slot = d.oplus(slot, &d.otimes(&left, &pivot_row[j]));
                }
            }
        }
        Ok(CostMatrix {
            entries: cur,
            ..self.clone()
        })
    }

    /// `A* = Id ⊕ A⁺`.
    pub fn kleene_star(&self) -> Result<CostMatrix, MatrixError> {
        let n = self.require_square()?;
        CostMatrix::identity(self.dioid.clone(), n).add(&self.kleene_plus()?)
    }

    /// ⊕ of the diagonal.
    pub fn trace(&self) -> Result<CostValue, MatrixError> {
        let n = self.require_square()?;
        Ok(self.dioid.sum((0..n).map(|i| self.get(i, i))))
    }

    pub fn transpose(&self) -> CostMatrix {
        let entries = (0..self.cols)
            .flat_map(|j| (0..self.rows).map(move |i| (i, j)))
            .map(|(i, j)| self.get(i, j).clone())
            .collect();
        CostMatrix {
            rows: self.cols,
            cols: self.rows,
            entries,
            dioid: self.dioid.clone(),
        }
    }

    /// Principal submatrix on the given ordinals, in that order.
    pub fn restrict(&self, indices: &[usize]) -> Result<CostMatrix, MatrixError> {
        self.require_square()?;
        if indices.is_empty() {
            return Err(MatrixError::Empty);
        }
        let entries = indices
            .iter()
            .flat_map(|&i| indices.iter().map(move |&j| (i, j)))
            .map(|(i, j)| self.get(i, j).clone())
            .collect();
        Ok(CostMatrix {
            rows: indices.len(),
            cols: indices.len(),
            entries,
            dioid: self.dioid.clone(),
        })
    }

    /// True when every entry is `⊥` or `e`.
    pub fn is_boolean(&self) -> bool {
        let (zero, unit) = (self.dioid.zero(), self.dioid.unit());
        self.entries.iter().all(|v| *v == zero || *v == unit)
    }

    /// Renders `e` as `e`, `⊥` as `.` and anything else by value, one row per line.
    pub fn render_boolean(&self) -> String {
        let (zero, unit) = (self.dioid.zero(), self.dioid.unit());
        let mut out = String::new();
        for i in 0..self.rows {
            let cells: Vec<String> = self
                .row(i)
                .iter()
                .map(|v| {
                    if *v == unit {
                        "e".to_string()
                    } else if *v == zero {
                        ".".to_string()
                    } else {
                        self.dioid.format_value(v)
                    }
                })
                .collect();
            out.push_str(&cells.join(" "));
            out.push('\n');
        }
        out
    }
}

impl fmt::Display for CostMatrix {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        for i in 0..self.rows {
            let cells: Vec<String> = self.row(i).iter().map(|v| self.dioid.format_value(v)).collect();
            writeln!(f, "[{}]", cells.join(", "))?;
        }
        Ok(())
    }
}

impl CostVector {
    pub fn new(dioid: Arc<CostDioid>, entries: Vec<CostValue>) -> Result<Self, MatrixError> {
        for v in &entries {
            dioid.check(v)?;
        }
        Ok(CostVector { entries, dioid })
    }

    /// The all-`⊥` vector.
    pub fn zero(dioid: Arc<CostDioid>, n: usize) -> Self {
        CostVector {
            entries: vec![dioid.zero(); n],
            dioid,
        }
    }

    /// `e` at the given positions, `⊥` elsewhere.
    pub fn indicator(dioid: Arc<CostDioid>, n: usize, positions: impl IntoIterator<Item = usize>) -> Self {
        let mut v = CostVector::zero(dioid, n);
        let e = v.dioid.unit();
        for p in positions {
            v.entries[p] = e.clone();
        }
        v
    }

    pub fn len(&self) -> usize {
        self.entries.len()
    }

    pub fn is_empty(&self) -> bool {
        self.entries.is_empty()
    }

    pub fn get(&self, i: usize) -> &CostValue {
        &self.entries[i]
    }

    pub fn entries(&self) -> &[CostValue] {
        &self.entries
    }

    pub fn dioid(&self) -> &Arc<CostDioid> {
        &self.dioid
    }

    pub fn oplus(&self, other: &CostVector) -> Result<CostVector, MatrixError> {
        if self.len() != other.len() {
            return Err(MatrixError::DimensionMismatch {
                left: (self.len(), 1),
                right: (other.len(), 1),
            });
        }
        let entries = self
            .entries
            .iter()
            .zip(&other.entries)
            .map(|(a, b)| self.dioid.oplus(a, b))
            .collect();
        Ok(CostVector {
            entries,
            dioid: self.dioid.clone(),
        })
    }

    pub fn leq(&self, other: &CostVector) -> bool {
        self.len() == other.len()
            && self
                .entries
                .iter()
                .zip(&other.entries)
                .all(|(a, b)| self.dioid.leq(a, b))
    }

    /// Positions holding something other than `⊥`.
    pub fn support(&self) -> Vec<usize> {
        (0..self.len())
            .filter(|&i| !self.dioid.is_zero(&self.entries[i]))
            .collect()
    }

    /// `e`/`.` rendering of a `{⊥, e}` vector, e.g. `(e,.,e)`.
    pub fn render_boolean(&self) -> String {
        let unit = self.dioid.unit();
        let cells: Vec<String> = self
            .entries
            .iter()
            .map(|v| {
                if *v == unit {
                    "e".to_string()
                } else if self.dioid.is_zero(v) {
                    ".".to_string()
                } else {
                    self.dioid.format_value(v)
                }
            })
            .collect();
        format!("({})", cells.join(","))
    }
}
