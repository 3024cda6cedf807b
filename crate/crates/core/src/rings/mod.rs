//! Finite graded-commutative algebras over `Z_p` or `Q`.
//!
//! A ring is stored as dense per-degree tables: the product of basis vector
//! `a` in degree `i` with basis vector `b` in degree `j` is a coordinate
//! vector in degree `i + j`, and every Steenrod operation is a matrix whose
//! rows are the images of the source basis.

mod builders;
mod json;
pub mod random;
mod validate;

pub use builders::{
    build_connected_sum_m6, build_cp, build_hp, build_product, build_sphere, build_truncated_poly,
};
pub use json::{AnyAlgebra, FieldSpec, ProductEntry, RingLiteral, SteenrodEntry};
pub use validate::{validate, AxiomCheck, Failure, ValidationReport};

use std::collections::BTreeMap;

use thiserror::Error;

use crate::field::Field;
use crate::linalg::vec_mat;
use crate::steenrod::Prime;

pub type Matrix<E> = Vec<Vec<E>>;

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum RingError {
    #[error("schema error: {0}")]
    Schema(String),
    #[error("parameter out of domain: {0}")]
    Domain(String),
    #[error("rings over different fields ({0} and {1}) cannot be combined")]
    FieldMismatch(String, String),
}

fn schema<T>(msg: impl Into<String>) -> Result<T, RingError> {
    Err(RingError::Schema(msg.into()))
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct GradedAlgebra<F: Field> {
    name: String,
    field: F,
    n: usize,
    dims: Vec<usize>,
    /// `(i, j) ↦ table[a][b]`, present for every `i + j <= n`.
    products: BTreeMap<(usize, usize), Vec<Vec<Vec<F::Elem>>>>,
    /// `(k, from_deg) ↦ matrix`; absent entries are zero.
    steenrod: Option<BTreeMap<(u64, usize), Matrix<F::Elem>>>,
    labels: Vec<Vec<String>>,
    poincare: bool,
}

impl<F: Field> GradedAlgebra<F> {
    /// An algebra with all products zero and no Steenrod tables.
    pub fn zero_tables(field: F, dims: Vec<usize>, name: impl Into<String>) -> Result<Self, RingError> {
        if dims.is_empty() {
            return schema("dims must list degrees 0..=n");
        }
        let n = dims.len() - 1;
        let mut products = BTreeMap::new();
        for i in 0..=n {
            for j in 0..=n - i {
                let zero = vec![vec![vec![field.zero(); dims[i + j]]; dims[j]]; dims[i]];
                products.insert((i, j), zero);
            }
        }
        let labels = dims
            .iter()
            .enumerate()
            .map(|(i, &d)| (0..d).map(|a| format!("e{i}_{a}")).collect())
            .collect();
        Ok(GradedAlgebra {
            name: name.into(),
            field,
            n,
            dims,
            products,
            steenrod: None,
            labels,
            poincare: false,
        })
    }

    pub fn name(&self) -> &str {
        &self.name
    }

    pub fn set_name(&mut self, name: impl Into<String>) {
        self.name = name.into();
    }

    pub fn field(&self) -> &F {
        &self.field
    }

    pub fn n(&self) -> usize {
        self.n
    }

    pub fn dims(&self) -> &[usize] {
        &self.dims
    }

    /// `dim H^i`, zero outside `0..=n`.
    pub fn dim(&self, i: usize) -> usize {
        self.dims.get(i).copied().unwrap_or(0)
    }

    pub fn poincare(&self) -> bool {
        self.poincare
    }

    pub fn set_poincare(&mut self, flag: bool) {
        self.poincare = flag;
    }

    pub fn labels(&self) -> &[Vec<String>] {
        &self.labels
    }

    pub fn set_labels(&mut self, labels: Vec<Vec<String>>) -> Result<(), RingError> {
        if labels.len() != self.dims.len() || labels.iter().zip(&self.dims).any(|(l, &d)| l.len() != d) {
            return schema("labels must match dims");
        }
        self.labels = labels;
        Ok(())
    }

    pub fn basis(&self, i: usize, a: usize) -> Vec<F::Elem> {
        let mut v = vec![self.field.zero(); self.dim(i)];
        v[a] = self.field.one();
        v
    }

    pub fn zero_vec(&self, i: usize) -> Vec<F::Elem> {
        vec![self.field.zero(); self.dim(i)]
    }

    /// The unit `1 ∈ H^0`.
    pub fn one(&self) -> Vec<F::Elem> {
        self.basis(0, 0)
    }

    pub fn set_product(&mut self, i: usize, a: usize, j: usize, b: usize, coords: Vec<F::Elem>) -> Result<(), RingError> {
        if i + j > self.n {
            return schema(format!("product of degrees {i} and {j} exceeds n = {}", self.n));
        }
        if a >= self.dims[i] || b >= self.dims[j] {
            return schema(format!("basis index out of range in product ({i},{a})·({j},{b})"));
        }
        if coords.len() != self.dims[i + j] {
            return schema(format!(
                "product ({i},{a})·({j},{b}) needs {} coordinates, got {}",
                self.dims[i + j],
                coords.len()
            ));
        }
        self.products.get_mut(&(i, j)).expect("table exists")[a][b] = coords;
        Ok(())
    }

    /// Fills in the products with `1 ∈ H^0` on either side.
    pub fn set_unit_products(&mut self) {
        for j in 0..=self.n {
            for b in 0..self.dims[j] {
                let e = self.basis(j, b);
                self.products.get_mut(&(0, j)).unwrap()[0][b] = e.clone();
                self.products.get_mut(&(j, 0)).unwrap()[b][0] = e;
            }
        }
    }

    /// Product of basis elements; `None` beyond the top degree.
    pub fn basis_product(&self, i: usize, a: usize, j: usize, b: usize) -> Option<&[F::Elem]> {
        self.products.get(&(i, j)).map(|t| t[a][b].as_slice())
    }

    /// `x·y` for `x ∈ H^i`, `y ∈ H^j`; empty beyond the top degree.
    pub fn mul(&self, i: usize, x: &[F::Elem], j: usize, y: &[F::Elem]) -> Vec<F::Elem> {
        let f = &self.field;
        let Some(table) = self.products.get(&(i, j)) else {
            return Vec::new();
        };
        let mut out = self.zero_vec(i + j);
        for (a, xa) in x.iter().enumerate() {
            if f.is_zero(xa) {
                continue;
            }
            for (b, yb) in y.iter().enumerate() {
                if f.is_zero(yb) {
                    continue;
                }
                let s = f.mul(xa, yb);
                for (o, t) in out.iter_mut().zip(&table[a][b]) {
                    *o = f.add(o, &f.mul(&s, t));
                }
            }
        }
        out
    }

    /// Matrix of `y ↦ x·y` from `H^i` to `H^{i+k}` (rows are images of the basis).
    pub fn mult_matrix(&self, k: usize, x: &[F::Elem], i: usize) -> Matrix<F::Elem> {
        (0..self.dim(i))
            .map(|a| self.mul(k, x, i, &self.basis(i, a)))
            .collect()
    }

    /// `x^r` for `x ∈ H^k`; `None` once the degree exceeds `n`.
    pub fn power(&self, k: usize, x: &[F::Elem], r: usize) -> Option<Vec<F::Elem>> {
        let mut acc = self.one();
        for s in 0..r {
            if k * (s + 1) > self.n {
                return None;
            }
            acc = self.mul(k, x, k * s, &acc);
        }
        Some(acc)
    }

    pub fn betti(&self) -> Vec<usize> {
        self.dims.clone()
    }

    pub fn b_odd(&self) -> usize {
        self.dims.iter().skip(1).step_by(2).sum()
    }

    pub fn euler(&self) -> i64 {
        self.dims
            .iter()
            .enumerate()
            .map(|(i, &d)| if i % 2 == 0 { d as i64 } else { -(d as i64) })
            .sum()
    }

    /// True when `H^i = 0` for `0 < i < n`.
    pub fn is_homology_sphere(&self) -> bool {
        (1..self.n).all(|i| self.dims[i] == 0)
    }

    pub fn prime(&self) -> Option<Prime> {
        self.field.prime()
    }

    pub fn has_steenrod(&self) -> bool {
        self.steenrod.is_some()
    }

    /// Topological degree of the `k`-th operation (`Sq^k` or `P^k`).
    pub fn op_degree(&self, k: u64) -> Option<usize> {
        let p = self.prime()?;
        Some(if p.is_two() { k as usize } else { 2 * k as usize * (p.get() as usize - 1) })
    }

    /// Enables (empty) Steenrod tables; only meaningful over `Z_p`.
    pub fn enable_steenrod(&mut self) -> Result<(), RingError> {
        if self.prime().is_none() {
            return Err(RingError::Domain("Steenrod tables need a prime field".into()));
        }
        if self.steenrod.is_none() {
            self.steenrod = Some(BTreeMap::new());
        }
        Ok(())
    }

    pub fn set_steenrod(&mut self, k: u64, from: usize, m: Matrix<F::Elem>) -> Result<(), RingError> {
        self.enable_steenrod()?;
        let to = from + self.op_degree(k).expect("prime field");
        if from > self.n || to > self.n {
            return schema(format!("operation {k} on degree {from} lands above n = {}", self.n));
        }
        if m.len() != self.dims[from] || m.iter().any(|r| r.len() != self.dims[to]) {
            return schema(format!(
                "operation {k} on degree {from} needs a {}x{} matrix",
                self.dims[from], self.dims[to]
            ));
        }
        let f = &self.field;
        let tables = self.steenrod.as_mut().unwrap();
        if m.iter().flatten().all(|v| f.is_zero(v)) {
            tables.remove(&(k, from));
        } else {
            tables.insert((k, from), m);
        }
        Ok(())
    }

    /// Stored Steenrod tables, `(k, from_deg) ↦ matrix`.
    pub fn steenrod_tables(&self) -> Option<&BTreeMap<(u64, usize), Matrix<F::Elem>>> {
        self.steenrod.as_ref()
    }

    /// `Sq^k x` or `P^k x` for `x ∈ H^deg`; op 0 is the identity and missing
    /// tables act as zero. Empty beyond the top degree.
    pub fn apply_op(&self, k: u64, deg: usize, x: &[F::Elem]) -> Vec<F::Elem> {
        if k == 0 {
            return x.to_vec();
        }
        let Some(d) = self.op_degree(k) else {
            return Vec::new();
        };
        let to = deg + d;
        if to > self.n {
            return Vec::new();
        }
        match self.steenrod.as_ref().and_then(|t| t.get(&(k, deg))) {
            Some(m) => vec_mat(&self.field, x, m, self.dims[to]),
            None => self.zero_vec(to),
        }
    }

    /// The same ring in the basis whose degree-`i` vectors are the rows of
    /// `change[i]` (each must be invertible).
    pub fn change_basis(&self, change: &[Matrix<F::Elem>]) -> Result<Self, RingError> {
        use crate::linalg::solve_left;
        let f = &self.field;
        if change.len() != self.dims.len() {
            return Err(RingError::Domain("one change-of-basis matrix per degree".into()));
        }
        let mut inverse_rows: Vec<Matrix<F::Elem>> = Vec::new();
        for (i, m) in change.iter().enumerate() {
            let d = self.dims[i];
            let mut inv = Vec::with_capacity(d);
            for a in 0..d {
                let e = self.basis(i, a);
                let row = solve_left(f, m, &e)
                    .ok_or_else(|| RingError::Domain(format!("change of basis in degree {i} is singular")))?;
                inv.push(row);
            }
            inverse_rows.push(inv);
        }
        // old coordinates v ↦ new coordinates v · change^{-1}
        let to_new = |i: usize, v: &[F::Elem]| vec_mat(f, v, &inverse_rows[i], self.dims[i]);
        let mut out = Self::zero_tables(f.clone(), self.dims.clone(), self.name.clone())?;
        out.poincare = self.poincare;
        for (&(i, j), _) in &self.products {
            for a in 0..self.dims[i] {
                for b in 0..self.dims[j] {
                    let prod = self.mul(i, &change[i][a], j, &change[j][b]);
                    out.set_product(i, a, j, b, to_new(i + j, &prod))?;
                }
            }
        }
        if let Some(tables) = &self.steenrod {
            out.enable_steenrod()?;
            let keys: Vec<(u64, usize)> = tables.keys().copied().collect();
            for (k, from) in keys {
                let to = from + self.op_degree(k).unwrap();
                let m: Matrix<F::Elem> = (0..self.dims[from])
                    .map(|a| to_new(to, &self.apply_op(k, from, &change[from][a])))
                    .collect();
                out.set_steenrod(k, from, m)?;
            }
        }
        Ok(out)
    }
}
