use std::collections::BTreeMap;

use crate::fieldlin::{zero_vector, Field, Scalar, Vector};

/// Dense `n x n` table of sparse vectors: entry `(i, j)` is the expansion of the
/// bilinear operation on `(b_i, b_j)` as `(k, coefficient)` pairs with nonzero coefficients.
#[derive(Clone, Debug, PartialEq, Eq)]
pub(crate) struct BilinearTable {
    field: Field,
    n: usize,
    entries: Vec<Vec<(usize, Scalar)>>,
}

impl BilinearTable {
    pub(crate) fn from_constants(field: Field, n: usize, constants: &BTreeMap<(usize, usize, usize), Scalar>, antisymmetric: bool) -> Self {
        let mut entries = vec![Vec::new(); n * n];
        for (&(i, j, k), c) in constants {
            entries[i * n + j].push((k, c.clone()));
            if antisymmetric {
                entries[j * n + i].push((k, -c));
            }
        }
        BilinearTable { field, n, entries }
    }

    #[inline]
    pub(crate) fn get(&self, i: usize, j: usize) -> &[(usize, Scalar)] {
        &self.entries[i * self.n + j]
    }

    pub(crate) fn basis(&self, i: usize, j: usize) -> Vector {
        let mut out = zero_vector(self.field, self.n);
        for (k, c) in self.get(i, j) {
            out[*k] = c.clone();
        }
        out
    }

    /// Bilinear extension to arbitrary vectors.
    pub(crate) fn apply(&self, u: &[Scalar], v: &[Scalar]) -> Vector {
        let mut out = zero_vector(self.field, self.n);
        for (i, ui) in u.iter().enumerate() {
            if ui.is_zero() {
                continue;
            }
            for (j, vj) in v.iter().enumerate() {
                if vj.is_zero() {
                    continue;
                }
                let uv = ui * vj;
                for (k, c) in self.get(i, j) {
                    out[*k].add_product(&uv, c);
                }
            }
        }
        out
    }

    /// `b_i ⋅ v`.
    pub(crate) fn left_basis(&self, i: usize, v: &[Scalar]) -> Vector {
        let mut out = zero_vector(self.field, self.n);
        for (j, vj) in v.iter().enumerate() {
            if vj.is_zero() {
                continue;
            }
            for (k, c) in self.get(i, j) {
                out[*k].add_product(vj, c);
            }
        }
        out
    }

    /// `u ⋅ b_j`.
    pub(crate) fn right_basis(&self, u: &[Scalar], j: usize) -> Vector {
        let mut out = zero_vector(self.field, self.n);
        for (i, ui) in u.iter().enumerate() {
            if ui.is_zero() {
                continue;
            }
            for (k, c) in self.get(i, j) {
                out[*k].add_product(ui, c);
            }
        }
        out
    }

    pub(crate) fn is_zero(&self) -> bool {
        self.entries.iter().all(Vec::is_empty)
    }
}
