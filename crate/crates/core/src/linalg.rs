//! Exact sparse Gaussian elimination for homogeneous systems.
//!
//! Rows are accumulated one at a time into reduced row echelon form, so the
//! typical workload (many short, mostly redundant equations) stays cheap.

use std::collections::{BTreeMap, HashMap};

use crate::scalar::Scalar;

pub type SparseRow<T> = BTreeMap<usize, T>;

/// Builds a sparse row from `(column, coefficient)` terms, summing repeats.
pub fn sparse_row<T: Scalar>(terms: impl IntoIterator<Item = (usize, T)>) -> SparseRow<T> {
    let mut row = SparseRow::new();
    for (col, c) in terms {
        let entry = row.entry(col).or_insert_with(T::zero);
        *entry = entry.clone() + c;
    }
    row.retain(|_, c| !c.is_zero());
    row
}

fn axpy<T: Scalar>(target: &mut SparseRow<T>, factor: &T, source: &SparseRow<T>) {
    for (col, c) in source {
        let entry = target.entry(*col).or_insert_with(T::zero);
        *entry = entry.clone() - factor.clone() * c.clone();
        if entry.is_zero() {
            target.remove(col);
        }
    }
}

/// Solution space of `A v = 0` over `columns` unknowns, kept in reduced row
/// echelon form.
#[derive(Clone, Debug)]
pub struct HomogeneousSystem<T> {
    columns: usize,
    rows: Vec<SparseRow<T>>,
    pivot_row: HashMap<usize, usize>,
}

impl<T: Scalar> HomogeneousSystem<T> {
    pub fn new(columns: usize) -> Self {
        HomogeneousSystem {
            columns,
            rows: Vec::new(),
            pivot_row: HashMap::new(),
        }
    }

    pub fn columns(&self) -> usize {
        self.columns
    }

    pub fn rank(&self) -> usize {
        self.rows.len()
    }

    pub fn nullity(&self) -> usize {
        self.columns - self.rows.len()
    }

    /// Adds one equation; returns whether it increased the rank.
    pub fn push(&mut self, mut eq: SparseRow<T>) -> bool {
        assert!(eq.keys().all(|&c| c < self.columns), "column out of range");
        let hits: Vec<(usize, T)> = eq
            .iter()
            .filter(|(c, _)| self.pivot_row.contains_key(c))
            .map(|(c, v)| (*c, v.clone()))
            .collect();
        for (col, coef) in hits {
            let r = self.pivot_row[&col];
            axpy(&mut eq, &coef, &self.rows[r]);
        }
        let Some((&pivot, lead)) = eq.iter().next() else {
            return false;
        };
        let lead = lead.clone();
        for v in eq.values_mut() {
            *v = v.clone() / lead.clone();
        }
        for row in &mut self.rows {
            if let Some(c) = row.get(&pivot).cloned() {
                axpy(row, &c, &eq);
            }
        }
        self.pivot_row.insert(pivot, self.rows.len());
        self.rows.push(eq);
        true
    }

    pub fn free_columns(&self) -> Vec<usize> {
        (0..self.columns).filter(|c| !self.pivot_row.contains_key(c)).collect()
    }

    /// One basis vector per free column: that column set to 1, the other free
    /// columns to 0.
    pub fn nullspace_basis(&self) -> Vec<Vec<T>> {
        self.free_columns()
            .into_iter()
            .map(|free| {
                let mut v = vec![T::zero(); self.columns];
                v[free] = T::one();
                for (pivot, &r) in &self.pivot_row {
                    if let Some(c) = self.rows[r].get(&free) {
                        v[*pivot] = -c.clone();
                    }
                }
                v
            })
            .collect()
    }
}
