//! R-matrix conditions, the operator-induced product `u∘v = T([u,v]) - [T(u),v]`,
//! and the Novikov and Gel'fand-Dorfman axiom checks.

use std::collections::BTreeMap;

use crate::error::{ensure_dim, Error, Result};
use crate::fieldlin::{add_vectors, check_vector, is_zero_vector, sub_vectors, Field, Matrix, Scalar, Subspace, Vector};
use crate::liealg::{check_lie_capped, LieAlgebra};
use crate::par;
use crate::report::{CheckReport, Collector, DEFAULT_WITNESS_CAP};
use crate::table::BilinearTable;

/// Endomorphism of the algebra's underlying space, column convention
/// `T(b_j) = Σ_i M[i][j] b_i`.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct LinearOperator {
    matrix: Matrix,
}

impl LinearOperator {
    pub fn new(matrix: Matrix) -> Result<LinearOperator> {
        if !matrix.is_square() {
            return Err(Error::NotSquare {
                rows: matrix.rows(),
                cols: matrix.cols(),
            });
        }
        Ok(LinearOperator { matrix })
    }

    pub fn zero(field: Field, n: usize) -> LinearOperator {
        LinearOperator {
            matrix: Matrix::zeros(field, n, n),
        }
    }

    pub fn identity(field: Field, n: usize) -> LinearOperator {
        LinearOperator {
            matrix: Matrix::identity(field, n),
        }
    }

    /// Operator with `T(b_j) = images[j]`.
    pub fn from_images(field: Field, images: &[Vector]) -> Result<LinearOperator> {
        let n = images.len();
        for im in images {
            check_vector(field, n, im)?;
        }
        Ok(LinearOperator {
            matrix: Matrix::from_fn(field, n, n, |i, j| images[j][i].clone()),
        })
    }

    pub fn matrix(&self) -> &Matrix {
        &self.matrix
    }

    pub fn dim(&self) -> usize {
        self.matrix.rows()
    }

    pub fn field(&self) -> Field {
        self.matrix.field()
    }

    pub fn apply(&self, v: &[Scalar]) -> Vector {
        self.matrix.mul_vec(v)
    }

    /// `T(b_j)`.
    pub fn image_of_basis(&self, j: usize) -> Vector {
        self.matrix.column(j)
    }

    /// `T²`.
    pub fn square(&self) -> LinearOperator {
        LinearOperator {
            matrix: self.matrix.mul(&self.matrix),
        }
    }

    pub fn is_zero(&self) -> bool {
        self.matrix.is_zero()
    }

    /// `T(G)`.
    pub fn image(&self) -> Subspace {
        Subspace::row_space(&self.matrix.transpose())
    }
}

/// Bilinear product `b_i∘b_j = Σ_k d_ij^k b_k`; all ordered pairs are stored, no symmetry assumed.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct BilinearProduct {
    field: Field,
    dim: usize,
    constants: BTreeMap<(usize, usize, usize), Scalar>,
    table: BilinearTable,
}

impl BilinearProduct {
    /// From sparse rows `(i, j, [(k, c)])`; zero coefficients are dropped.
    pub fn new(field: Field, dim: usize, rows: Vec<(usize, usize, Vec<(usize, Scalar)>)>) -> Result<BilinearProduct> {
        let mut constants = BTreeMap::new();
        let mut seen = std::collections::BTreeSet::new();
        for (i, j, terms) in rows {
            for idx in [i, j] {
                if idx >= dim {
                    return Err(Error::IndexOutOfRange { index: idx, dim });
                }
            }
            if !seen.insert((i, j)) {
                return Err(Error::Duplicate(format!("product row ({i},{j})")));
            }
            let mut ks = std::collections::BTreeSet::new();
            for (k, c) in terms {
                if k >= dim {
                    return Err(Error::IndexOutOfRange { index: k, dim });
                }
                if c.field() != field {
                    return Err(Error::FieldMismatch(field.to_string(), c.field().to_string()));
                }
                if !ks.insert(k) {
                    return Err(Error::Duplicate(format!("term k={k} in product ({i},{j})")));
                }
                if !c.is_zero() {
                    constants.insert((i, j, k), c);
                }
            }
        }
        Ok(Self::from_constants(field, dim, constants))
    }

    fn from_constants(field: Field, dim: usize, constants: BTreeMap<(usize, usize, usize), Scalar>) -> BilinearProduct {
        let table = BilinearTable::from_constants(field, dim, &constants, false);
        BilinearProduct {
            field,
            dim,
            constants,
            table,
        }
    }

    /// Product whose basis products are `f(i, j)`.
    pub fn from_fn(field: Field, dim: usize, f: impl Fn(usize, usize) -> Vector) -> BilinearProduct {
        let mut constants = BTreeMap::new();
        for i in 0..dim {
            for j in 0..dim {
                for (k, c) in f(i, j).into_iter().enumerate() {
                    if !c.is_zero() {
                        constants.insert((i, j, k), c);
                    }
                }
            }
        }
        Self::from_constants(field, dim, constants)
    }

    pub fn zero(field: Field, dim: usize) -> BilinearProduct {
        Self::from_constants(field, dim, BTreeMap::new())
    }

    /// Copy with `d_ij^k` replaced by `c`.
    pub fn with_constant(&self, i: usize, j: usize, k: usize, c: Scalar) -> BilinearProduct {
        let mut constants = self.constants.clone();
        if c.is_zero() {
            constants.remove(&(i, j, k));
        } else {
            constants.insert((i, j, k), c);
        }
        Self::from_constants(self.field, self.dim, constants)
    }

    pub fn field(&self) -> Field {
        self.field
    }

    pub fn dim(&self) -> usize {
        self.dim
    }

    pub fn constants(&self) -> &BTreeMap<(usize, usize, usize), Scalar> {
        &self.constants
    }

    pub fn constant(&self, i: usize, j: usize, k: usize) -> Scalar {
        self.constants.get(&(i, j, k)).cloned().unwrap_or_else(|| self.field.zero())
    }

    pub fn is_zero(&self) -> bool {
        self.table.is_zero()
    }

    /// `b_i∘b_j`.
    pub fn basis_product(&self, i: usize, j: usize) -> Vector {
        self.table.basis(i, j)
    }

    /// `u∘v`.
    pub fn apply(&self, u: &[Scalar], v: &[Scalar]) -> Vector {
        self.table.apply(u, v)
    }

    pub(crate) fn with_basis(&self, u: &[Scalar], j: usize) -> Vector {
        self.table.right_basis(u, j)
    }

    pub(crate) fn basis_with(&self, i: usize, v: &[Scalar]) -> Vector {
        self.table.left_basis(i, v)
    }

    pub(crate) fn table(&self) -> &BilinearTable {
        &self.table
    }
}

/// A Lie bracket and a Novikov product on one space satisfying the compatibility identity.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct GDBialgebra {
    lie: LieAlgebra,
    product: BilinearProduct,
}

impl GDBialgebra {
    /// Validating constructor: all four axiom groups must pass.
    pub fn new(lie: LieAlgebra, product: BilinearProduct) -> Result<GDBialgebra> {
        let report = check_gd(&lie, &product)?;
        if !report.passed {
            return Err(Error::NotBialgebra(report.failed_axioms().join(",")));
        }
        Ok(GDBialgebra { lie, product })
    }

    /// Pairs the two structures without checking any axiom.
    pub fn new_unchecked(lie: LieAlgebra, product: BilinearProduct) -> Result<GDBialgebra> {
        same_shape(&lie, product.field(), product.dim())?;
        Ok(GDBialgebra { lie, product })
    }

    pub fn lie(&self) -> &LieAlgebra {
        &self.lie
    }

    pub fn product(&self) -> &BilinearProduct {
        &self.product
    }
}

pub(crate) fn same_shape(l: &LieAlgebra, field: Field, dim: usize) -> Result<()> {
    ensure_dim(l.dim(), dim)?;
    if l.field() != field {
        return Err(Error::FieldMismatch(l.field().to_string(), field.to_string()));
    }
    Ok(())
}

fn idx(xs: &[usize]) -> Vec<i64> {
    xs.iter().map(|&x| x as i64).collect()
}

/// `[T(u),T(v)] - T([T(u),v]) - T([u,T(v)])`.
pub fn rmatrix_defect(l: &LieAlgebra, t: &LinearOperator, u: &[Scalar], v: &[Scalar]) -> Vector {
    let (tu, tv) = (t.apply(u), t.apply(v));
    let lhs = l.bracket_unchecked(&tu, &tv);
    let r1 = t.apply(&l.bracket_unchecked(&tu, v));
    let r2 = t.apply(&l.bracket_unchecked(u, &tv));
    sub_vectors(&sub_vectors(&lhs, &r1), &r2)
}

/// Classical R-matrix condition on basis pairs `i < j` (the defect is alternating).
pub fn check_rmatrix(l: &LieAlgebra, t: &LinearOperator) -> Result<CheckReport> {
    check_rmatrix_capped(l, t, DEFAULT_WITNESS_CAP)
}

pub fn check_rmatrix_capped(l: &LieAlgebra, t: &LinearOperator, cap: usize) -> Result<CheckReport> {
    same_shape(l, t.field(), t.dim())?;
    let n = l.dim();
    let images: Vec<Vector> = (0..n).map(|j| t.image_of_basis(j)).collect();
    Ok(par::map_reduce(
        n as u64,
        || Collector::new(cap),
        |i| {
            let i = i as usize;
            let mut acc = Collector::new(cap);
            for j in i + 1..n {
                let lhs = l.bracket_unchecked(&images[i], &images[j]);
                let r1 = t.apply(&l.bracket_with_basis(&images[i], j));
                let r2 = t.apply(&l.basis_with(i, &images[j]));
                acc.record("rmatrix", idx(&[i, j]), sub_vectors(&sub_vectors(&lhs, &r1), &r2));
            }
            acc
        },
        Collector::merge,
    )
    .finish())
}

/// `T([u,T(v)]) - [u,T²(v)]`.
pub fn strong_defect(l: &LieAlgebra, t: &LinearOperator, u: &[Scalar], v: &[Scalar]) -> Vector {
    let tv = t.apply(v);
    let lhs = t.apply(&l.bracket_unchecked(u, &tv));
    let rhs = l.bracket_unchecked(u, &t.apply(&tv));
    sub_vectors(&lhs, &rhs)
}

/// The strong condition `T[u,T(v)] = [u,T²(v)]` on all ordered basis pairs.
///
/// Writing `w = T(v)`, this is `T([u,w]) = [u,T(w)]` for every `w` in the image
/// `T(G)`; the two formulations are the same computation.
pub fn check_strong(l: &LieAlgebra, t: &LinearOperator) -> Result<CheckReport> {
    check_strong_capped(l, t, DEFAULT_WITNESS_CAP)
}

pub fn check_strong_capped(l: &LieAlgebra, t: &LinearOperator, cap: usize) -> Result<CheckReport> {
    same_shape(l, t.field(), t.dim())?;
    let n = l.dim();
    let images: Vec<Vector> = (0..n).map(|j| t.image_of_basis(j)).collect();
    let squares: Vec<Vector> = images.iter().map(|w| t.apply(w)).collect();
    Ok(par::map_reduce(
        n as u64,
        || Collector::new(cap),
        |i| {
            let i = i as usize;
            let mut acc = Collector::new(cap);
            for j in 0..n {
                let lhs = t.apply(&l.basis_with(i, &images[j]));
                let rhs = l.basis_with(i, &squares[j]);
                acc.record("strong", idx(&[i, j]), sub_vectors(&lhs, &rhs));
            }
            acc
        },
        Collector::merge,
    )
    .finish())
}

/// `u∘v = T([u,v]) - [T(u),v]` on basis pairs. `T` is not required to satisfy anything.
pub fn product_from_operator(l: &LieAlgebra, t: &LinearOperator) -> Result<BilinearProduct> {
    same_shape(l, t.field(), t.dim())?;
    let n = l.dim();
    let images: Vec<Vector> = (0..n).map(|j| t.image_of_basis(j)).collect();
    Ok(BilinearProduct::from_fn(l.field(), n, |i, j| {
        let a = t.apply(&l.basis_bracket(i, j));
        let b = l.bracket_with_basis(&images[i], j);
        sub_vectors(&a, &b)
    }))
}

/// `(u∘v)∘w - u∘(v∘w) - (v∘u)∘w + v∘(u∘w)`.
pub fn left_symmetric_defect(p: &BilinearProduct, u: &[Scalar], v: &[Scalar], w: &[Scalar]) -> Vector {
    let a = p.apply(&p.apply(u, v), w);
    let b = p.apply(u, &p.apply(v, w));
    let c = p.apply(&p.apply(v, u), w);
    let d = p.apply(v, &p.apply(u, w));
    add_vectors(&sub_vectors(&sub_vectors(&a, &b), &c), &d)
}

/// Left-symmetry on all ordered basis triples.
pub fn check_left_symmetric(p: &BilinearProduct) -> CheckReport {
    check_left_symmetric_capped(p, DEFAULT_WITNESS_CAP)
}

pub fn check_left_symmetric_capped(p: &BilinearProduct, cap: usize) -> CheckReport {
    let n = p.dim();
    par::map_reduce(
        n as u64,
        || Collector::new(cap),
        |i| {
            let i = i as usize;
            let mut acc = Collector::new(cap);
            for j in 0..n {
                let ij = p.basis_product(i, j);
                let ji = p.basis_product(j, i);
                for k in 0..n {
                    let a = p.with_basis(&ij, k);
                    let b = p.basis_with(i, &p.basis_product(j, k));
                    let c = p.with_basis(&ji, k);
                    let d = p.basis_with(j, &p.basis_product(i, k));
                    let defect = add_vectors(&sub_vectors(&sub_vectors(&a, &b), &c), &d);
                    acc.record("left_symmetric", idx(&[i, j, k]), defect);
                }
            }
            acc
        },
        Collector::merge,
    )
    .finish()
}

/// `(u∘v)∘w - (u∘w)∘v`.
pub fn right_commutative_defect(p: &BilinearProduct, u: &[Scalar], v: &[Scalar], w: &[Scalar]) -> Vector {
    sub_vectors(&p.apply(&p.apply(u, v), w), &p.apply(&p.apply(u, w), v))
}

/// Commuting right multiplications on basis triples `(i, j, k)` with `j < k`.
pub fn check_right_commutative(p: &BilinearProduct) -> CheckReport {
    check_right_commutative_capped(p, DEFAULT_WITNESS_CAP)
}

pub fn check_right_commutative_capped(p: &BilinearProduct, cap: usize) -> CheckReport {
    let n = p.dim();
    par::map_reduce(
        n as u64,
        || Collector::new(cap),
        |i| {
            let i = i as usize;
            let mut acc = Collector::new(cap);
            let rows: Vec<Vector> = (0..n).map(|j| p.basis_product(i, j)).collect();
            for j in 0..n {
                for k in j + 1..n {
                    let defect = sub_vectors(&p.with_basis(&rows[j], k), &p.with_basis(&rows[k], j));
                    acc.record("right_commutative", idx(&[i, j, k]), defect);
                }
            }
            acc
        },
        Collector::merge,
    )
    .finish()
}

/// `[w,u]∘v - [w,v]∘u + [w∘u,v] - [w∘v,u] - w∘[u,v]`.
pub fn compat_defect(l: &LieAlgebra, p: &BilinearProduct, w: &[Scalar], u: &[Scalar], v: &[Scalar]) -> Vector {
    let b = |x: &[Scalar], y: &[Scalar]| l.bracket_unchecked(x, y);
    let m = |x: &[Scalar], y: &[Scalar]| p.apply(x, y);
    let t1 = m(&b(w, u), v);
    let t2 = m(&b(w, v), u);
    let t3 = b(&m(w, u), v);
    let t4 = b(&m(w, v), u);
    let t5 = m(w, &b(u, v));
    sub_vectors(&sub_vectors(&add_vectors(&sub_vectors(&t1, &t2), &t3), &t4), &t5)
}

/// The five-term compatibility identity on all ordered basis triples `(w, u, v)`.
pub fn check_compat(l: &LieAlgebra, p: &BilinearProduct) -> Result<CheckReport> {
    check_compat_capped(l, p, DEFAULT_WITNESS_CAP)
}

pub fn check_compat_capped(l: &LieAlgebra, p: &BilinearProduct, cap: usize) -> Result<CheckReport> {
    same_shape(l, p.field(), p.dim())?;
    let n = l.dim();
    Ok(par::map_reduce(
        n as u64,
        || Collector::new(cap),
        |w| {
            let w = w as usize;
            let mut acc = Collector::new(cap);
            let wb: Vec<Vector> = (0..n).map(|u| l.basis_bracket(w, u)).collect();
            let wp: Vec<Vector> = (0..n).map(|u| p.basis_product(w, u)).collect();
            for u in 0..n {
                for v in 0..n {
                    let t1 = p.with_basis(&wb[u], v);
                    let t2 = p.with_basis(&wb[v], u);
                    let t3 = l.bracket_with_basis(&wp[u], v);
                    let t4 = l.bracket_with_basis(&wp[v], u);
                    let t5 = p.basis_with(w, &l.basis_bracket(u, v));
                    let defect = sub_vectors(&sub_vectors(&add_vectors(&sub_vectors(&t1, &t2), &t3), &t4), &t5);
                    acc.record("compatibility", idx(&[w, u, v]), defect);
                }
            }
            acc
        },
        Collector::merge,
    )
    .finish())
}

/// `[u,v] = u∘v - v∘u`. The result is not validated.
pub fn commutator_algebra(p: &BilinearProduct) -> LieAlgebra {
    let n = p.dim();
    let mut rows = Vec::new();
    for i in 0..n {
        for j in i + 1..n {
            let c = sub_vectors(&p.basis_product(i, j), &p.basis_product(j, i));
            let terms: Vec<(usize, Scalar)> = c.into_iter().enumerate().filter(|(_, x)| !x.is_zero()).collect();
            if !terms.is_empty() {
                rows.push((i, j, terms));
            }
        }
    }
    let names = (1..=n).map(|i| format!("b{i}")).collect();
    LieAlgebra::new(p.field(), names, rows).expect("rows are well formed")
}

/// Conjunction of the Lie, left-symmetric, right-commutative and compatibility checks.
pub fn check_gd(l: &LieAlgebra, p: &BilinearProduct) -> Result<CheckReport> {
    check_gd_capped(l, p, DEFAULT_WITNESS_CAP)
}

pub fn check_gd_capped(l: &LieAlgebra, p: &BilinearProduct, cap: usize) -> Result<CheckReport> {
    same_shape(l, p.field(), p.dim())?;
    Ok(CheckReport::combine(
        [
            check_lie_capped(l, cap),
            check_left_symmetric_capped(p, cap),
            check_right_commutative_capped(p, cap),
            check_compat_capped(l, p, cap)?,
        ],
    ))
}

/// Fast pass/fail form of [`check_rmatrix`], stopping at the first failing pair.
pub fn is_rmatrix(l: &LieAlgebra, t: &LinearOperator) -> bool {
    let n = l.dim();
    let images: Vec<Vector> = (0..n).map(|j| t.image_of_basis(j)).collect();
    (0..n).all(|i| {
        (i + 1..n).all(|j| {
            let lhs = l.bracket_unchecked(&images[i], &images[j]);
            let r1 = t.apply(&l.bracket_with_basis(&images[i], j));
            let r2 = t.apply(&l.basis_with(i, &images[j]));
            is_zero_vector(&sub_vectors(&sub_vectors(&lhs, &r1), &r2))
        })
    })
}

/// Fast pass/fail form of [`check_strong`].
pub fn is_strong(l: &LieAlgebra, t: &LinearOperator) -> bool {
    let n = l.dim();
    let images: Vec<Vector> = (0..n).map(|j| t.image_of_basis(j)).collect();
    let squares: Vec<Vector> = images.iter().map(|w| t.apply(w)).collect();
    (0..n).all(|i| (0..n).all(|j| t.apply(&l.basis_with(i, &images[j])) == l.basis_with(i, &squares[j])))
}
