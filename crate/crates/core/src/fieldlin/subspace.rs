use crate::error::{ensure_dim, Result};

use super::matrix::{axpy, check_vector, is_zero_vector, unit_vector, zero_vector, Matrix, Vector};
use super::scalar::{Field, Scalar};

/// A subspace of `F^n` stored by its canonical RREF basis.
///
/// Two equal subspaces have identical bases, so `==` is subspace equality.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct Subspace {
    ambient_dim: usize,
    basis: Matrix,
    pivots: Vec<usize>,
}

impl Subspace {
    pub fn zero(field: Field, ambient_dim: usize) -> Subspace {
        Subspace {
            ambient_dim,
            basis: Matrix::zeros(field, 0, ambient_dim),
            pivots: Vec::new(),
        }
    }

    pub fn full(field: Field, ambient_dim: usize) -> Subspace {
        Subspace {
            ambient_dim,
            basis: Matrix::identity(field, ambient_dim),
            pivots: (0..ambient_dim).collect(),
        }
    }

    /// Span of the rows of `m`.
    pub fn row_space(m: &Matrix) -> Subspace {
        let (r, rank, pivots) = m.rref_with_pivots();
        let rows = (0..rank).map(|i| r.row(i).to_vec()).collect();
        Subspace {
            ambient_dim: m.cols(),
            basis: Matrix::from_rows(m.field(), m.cols(), rows).expect("rows have matching length"),
            pivots,
        }
    }

    /// Span of the given vectors in `F^ambient_dim`.
    pub fn span<V: AsRef<[Scalar]>>(field: Field, ambient_dim: usize, vectors: &[V]) -> Result<Subspace> {
        let rows = vectors
            .iter()
            .map(|v| {
                check_vector(field, ambient_dim, v.as_ref())?;
                Ok(v.as_ref().to_vec())
            })
            .collect::<Result<Vec<_>>>()?;
        Ok(Subspace::row_space(&Matrix::from_rows(field, ambient_dim, rows)?))
    }

    /// Span of standard basis vectors with the given indices.
    pub fn coordinate(field: Field, ambient_dim: usize, indices: &[usize]) -> Subspace {
        let vs: Vec<Vector> = indices.iter().map(|&i| unit_vector(field, ambient_dim, i)).collect();
        Subspace::span(field, ambient_dim, &vs).expect("unit vectors are well formed")
    }

    pub fn field(&self) -> Field {
        self.basis.field()
    }

    pub fn ambient_dim(&self) -> usize {
        self.ambient_dim
    }

    pub fn dim(&self) -> usize {
        self.basis.rows()
    }

    /// Canonical basis, one vector per row.
    pub fn basis(&self) -> &Matrix {
        &self.basis
    }

    pub fn basis_vectors(&self) -> impl Iterator<Item = &[Scalar]> {
        self.basis.row_vectors()
    }

    pub fn is_zero(&self) -> bool {
        self.dim() == 0
    }

    pub fn is_full(&self) -> bool {
        self.dim() == self.ambient_dim
    }

    /// Coordinates of `v` in the canonical basis, or `None` if `v` is not in the subspace.
    ///
    /// RREF rows carry an identity block on the pivot columns, so the candidate
    /// coordinates are read off there and confirmed by reconstruction.
    pub fn coordinates(&self, v: &[Scalar]) -> Option<Vector> {
        assert_eq!(v.len(), self.ambient_dim);
        let coords: Vector = self.pivots.iter().map(|&p| v[p].clone()).collect();
        let mut rest = v.to_vec();
        for (c, row) in coords.iter().zip(self.basis.row_vectors()) {
            axpy(&mut rest, &-c, row);
        }
        is_zero_vector(&rest).then_some(coords)
    }

    pub fn contains(&self, v: &[Scalar]) -> bool {
        self.coordinates(v).is_some()
    }

    /// Element with the given coordinates in the canonical basis.
    pub fn combine(&self, coords: &[Scalar]) -> Vector {
        assert_eq!(coords.len(), self.dim());
        let mut out = zero_vector(self.field(), self.ambient_dim);
        for (c, row) in coords.iter().zip(self.basis.row_vectors()) {
            axpy(&mut out, c, row);
        }
        out
    }

    pub fn is_subspace_of(&self, other: &Subspace) -> bool {
        self.basis_vectors().all(|v| other.contains(v))
    }

    pub fn sum(&self, other: &Subspace) -> Result<Subspace> {
        ensure_dim(self.ambient_dim, other.ambient_dim)?;
        Ok(Subspace::row_space(&self.basis.stack(&other.basis)?))
    }

    /// Intersection via the kernel of `[A^T | -B^T]`.
    pub fn intersect(&self, other: &Subspace) -> Result<Subspace> {
        ensure_dim(self.ambient_dim, other.ambient_dim)?;
        let field = self.field();
        let (da, db) = (self.dim(), other.dim());
        if da == 0 || db == 0 {
            return Ok(Subspace::zero(field, self.ambient_dim));
        }
        let system = Matrix::from_fn(field, self.ambient_dim, da + db, |i, j| {
            if j < da {
                self.basis.get(j, i).clone()
            } else {
                -other.basis.get(j - da, i)
            }
        });
        let vectors: Vec<Vector> = system
            .null_space_basis()
            .iter()
            .map(|sol| self.combine(&sol[..da]))
            .collect();
        Subspace::span(field, self.ambient_dim, &vectors)
    }

    /// Greedy direct complement: standard basis vectors are added in index order
    /// whenever they are independent of everything chosen so far.
    pub fn complement(&self) -> Subspace {
        let field = self.field();
        let n = self.ambient_dim;
        let mut current = self.clone();
        let mut chosen = Vec::new();
        for i in 0..n {
            if current.is_full() {
                break;
            }
            let e = unit_vector(field, n, i);
            if !current.contains(&e) {
                current = current
                    .sum(&Subspace::coordinate(field, n, &[i]))
                    .expect("same ambient dimension");
                chosen.push(i);
            }
        }
        Subspace::coordinate(field, n, &chosen)
    }

    /// True when `self ⊕ other` is the whole space.
    pub fn is_direct_complement_of(&self, other: &Subspace) -> bool {
        self.ambient_dim == other.ambient_dim
            && self.dim() + other.dim() == self.ambient_dim
            && self.sum(other).map(|s| s.is_full()).unwrap_or(false)
    }
}

/// Right null space of `m` as a canonical subspace.
pub fn kernel(m: &Matrix) -> Subspace {
    let vectors = m.null_space_basis();
    Subspace::span(m.field(), m.cols(), &vectors).expect("kernel vectors have matching length")
}

pub fn subspace_sum(a: &Subspace, b: &Subspace) -> Result<Subspace> {
    a.sum(b)
}

pub fn subspace_intersect(a: &Subspace, b: &Subspace) -> Result<Subspace> {
    a.intersect(b)
}

pub fn complement(a: &Subspace) -> Subspace {
    a.complement()
}

pub fn contains(a: &Subspace, v: &[Scalar]) -> bool {
    a.contains(v)
}

#[cfg(test)]
mod tests {
    use super::*;

    fn v(field: Field, xs: &[i64]) -> Vector {
        xs.iter().map(|&x| field.from_i64(x)).collect()
    }

    #[test]
    fn kernel_trivial_cases() {
        let q = Field::Rationals;
        assert!(kernel(&Matrix::identity(q, 3)).is_zero());
        assert!(kernel(&Matrix::zeros(q, 2, 4)).is_full());
    }

    #[test]
    fn kernel_over_gf3() {
        // brute force: x + y = 0 over GF(3) has solutions {(0,0),(1,2),(2,1)}
        let f = Field::Prime(3);
        let m = Matrix::from_i64(f, &[&[1, 1]]);
        let k = kernel(&m);
        assert_eq!(k, Subspace::span(f, 2, &[v(f, &[1, 2])]).unwrap());
        let members: Vec<(i64, i64)> = (0..3)
            .flat_map(|a| (0..3).map(move |b| (a, b)))
            .filter(|&(a, b)| k.contains(&v(f, &[a, b])))
            .collect();
        assert_eq!(members, vec![(0, 0), (1, 2), (2, 1)]);
    }

    #[test]
    fn sums() {
        let q = Field::Rationals;
        let e1 = Subspace::span(q, 2, &[v(q, &[1, 0])]).unwrap();
        let e2 = Subspace::span(q, 2, &[v(q, &[0, 1])]).unwrap();
        assert!(e1.sum(&e2).unwrap().is_full());
        assert_eq!(e1.sum(&e1).unwrap(), e1);
        let d = Subspace::span(q, 2, &[v(q, &[1, 1])]).unwrap();
        assert!(d.sum(&e2).unwrap().is_full());
    }

    #[test]
    fn intersections() {
        let q = Field::Rationals;
        let e12 = Subspace::coordinate(q, 3, &[0, 1]);
        let e23 = Subspace::coordinate(q, 3, &[1, 2]);
        assert_eq!(e12.intersect(&e12).unwrap(), e12);
        assert_eq!(e12.intersect(&e23).unwrap(), Subspace::coordinate(q, 3, &[1]));
        let e1 = Subspace::coordinate(q, 3, &[0]);
        let e2 = Subspace::coordinate(q, 3, &[1]);
        assert!(e1.intersect(&e2).unwrap().is_zero());
        let mixed = Subspace::span(q, 3, &[v(q, &[1, 1, 0]), v(q, &[0, 1, 1])]).unwrap();
        let i = mixed.intersect(&e12).unwrap();
        assert_eq!(i, Subspace::span(q, 3, &[v(q, &[1, 1, 0])]).unwrap());
    }

    #[test]
    fn complements() {
        let q = Field::Rationals;
        assert!(Subspace::zero(q, 3).complement().is_full());
        assert!(Subspace::full(q, 3).complement().is_zero());
        // e1 is not in span{(1,1,0)}, so the greedy rule picks e1 first, then e3.
        let a = Subspace::span(q, 3, &[v(q, &[1, 1, 0])]).unwrap();
        let c = a.complement();
        assert_eq!(c, Subspace::coordinate(q, 3, &[0, 2]));
        assert!(c.is_direct_complement_of(&a));
        let b = Subspace::coordinate(q, 3, &[0]);
        assert_eq!(b.complement(), Subspace::coordinate(q, 3, &[1, 2]));
    }

    #[test]
    fn membership() {
        let f = Field::Prime(5);
        let s = Subspace::span(f, 2, &[v(f, &[1, 2])]).unwrap();
        assert!(s.contains(&v(f, &[1, 2])));
        assert!(s.contains(&v(f, &[3, 1])));
        assert!(s.contains(&v(f, &[0, 0])));
        assert!(!s.contains(&v(f, &[1, 0])));
        let e2 = Subspace::coordinate(f, 2, &[1]);
        assert!(!e2.contains(&v(f, &[1, 0])));
    }

    #[test]
    fn dimension_mismatch_is_an_error() {
        let q = Field::Rationals;
        assert!(Subspace::zero(q, 2).sum(&Subspace::zero(q, 3)).is_err());
        assert!(Subspace::zero(q, 2).intersect(&Subspace::zero(q, 3)).is_err());
    }
}
