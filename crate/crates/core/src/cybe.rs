//! Tensor form of the classical Yang-Baxter equation and its link to R-matrices.
//!
//! For `X = Σ r_ij I_i⊗I_j` the three commutators `[X¹²,X¹³]`, `[X¹³,X²³]` and
//! `[X¹²,X²³]` live a priori in `U(G)^{⊗3}`, but each one only commutes factors
//! sitting in the same tensor leg, so it reduces to a bracket in that leg:
//!
//! ```text
//! [X¹²,X¹³] = Σ r_ij r_kl [I_i,I_k] ⊗ I_j ⊗ I_l
//! [X¹³,X²³] = Σ r_ij r_kl I_i ⊗ I_k ⊗ [I_j,I_l]
//! [X¹²,X²³] = Σ r_ij r_kl I_i ⊗ [I_j,I_k] ⊗ I_l
//! ```
//!
//! The defect is therefore an element of `G⊗G⊗G` computed from structure
//! constants alone. [`rep_defect`] evaluates the same equation on `V⊗V⊗V` for a
//! representation, and functoriality says it equals `π⊗π⊗π` of the tensor defect.

use serde::Serialize;

use crate::construct::{finite_search_size, matrix_from_index, matrix_line};
use crate::error::{ensure_dim, Error, Result};
use crate::fieldlin::{zero_vector, Field, Matrix, Scalar, Vector};
use crate::liealg::{sln_basis, LieAlgebra};
use crate::novikov::{is_rmatrix, same_shape, LinearOperator};
use crate::par;
use crate::report::{CheckReport, Collector, DEFAULT_WITNESS_CAP};

/// Coefficient matrix `r` of `X = Σ r_ij I_i⊗I_j`.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct TensorElement {
    r: Matrix,
}

impl TensorElement {
    pub fn new(r: Matrix) -> Result<TensorElement> {
        if !r.is_square() {
            return Err(Error::NotSquare {
                rows: r.rows(),
                cols: r.cols(),
            });
        }
        Ok(TensorElement { r })
    }

    pub fn zero(field: Field, n: usize) -> TensorElement {
        TensorElement {
            r: Matrix::zeros(field, n, n),
        }
    }

    pub fn coefficients(&self) -> &Matrix {
        &self.r
    }

    pub fn dim(&self) -> usize {
        self.r.rows()
    }

    pub fn field(&self) -> Field {
        self.r.field()
    }
}

/// Dense element of `G⊗G⊗G`, index `(a, b, c) -> a n² + b n + c`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Tensor3 {
    n: usize,
    data: Vector,
}

impl Tensor3 {
    pub fn zero(field: Field, n: usize) -> Tensor3 {
        Tensor3 {
            n,
            data: zero_vector(field, n * n * n),
        }
    }

    pub fn dim(&self) -> usize {
        self.n
    }

    pub fn get(&self, a: usize, b: usize, c: usize) -> &Scalar {
        &self.data[(a * self.n + b) * self.n + c]
    }

    fn slot(&mut self, a: usize, b: usize, c: usize) -> &mut Scalar {
        &mut self.data[(a * self.n + b) * self.n + c]
    }

    pub fn is_zero(&self) -> bool {
        self.data.iter().all(Scalar::is_zero)
    }

    pub fn coefficients(&self) -> &[Scalar] {
        &self.data
    }

    pub fn scale(&self, c: &Scalar) -> Tensor3 {
        Tensor3 {
            n: self.n,
            data: self.data.iter().map(|x| c * x).collect(),
        }
    }
}

/// `[X¹²,X¹³] + [X¹³,X²³] + [X¹²,X²³]` in `G⊗G⊗G`.
pub fn cybe_defect(l: &LieAlgebra, x: &TensorElement) -> Result<Tensor3> {
    same_shape(l, x.field(), x.dim())?;
    let n = l.dim();
    let r = &x.r;
    let mut out = Tensor3::zero(l.field(), n);
    let support: Vec<(usize, usize)> = (0..n)
        .flat_map(|i| (0..n).map(move |j| (i, j)))
        .filter(|&(i, j)| !r.get(i, j).is_zero())
        .collect();
    for &(i, j) in &support {
        for &(k, lx) in &support {
            let rr = r.get(i, j) * r.get(k, lx);
            for (a, c) in l.table().get(i, k) {
                out.slot(*a, j, lx).add_product(&rr, c);
            }
            for (a, c) in l.table().get(j, lx) {
                out.slot(i, k, *a).add_product(&rr, c);
            }
            for (a, c) in l.table().get(j, k) {
                out.slot(i, *a, lx).add_product(&rr, c);
            }
        }
    }
    Ok(out)
}

/// `T_X(I_i) = Σ_j r_ij I_j`. In the column convention the operator matrix is `rᵀ`.
pub fn t_from_tensor(x: &TensorElement) -> LinearOperator {
    LinearOperator::new(x.r.transpose()).expect("square")
}

/// Gram matrix of a symmetric bilinear form in the algebra basis.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct BilinearForm {
    gram: Matrix,
}

impl BilinearForm {
    pub fn new(gram: Matrix) -> Result<BilinearForm> {
        if !gram.is_square() {
            return Err(Error::NotSquare {
                rows: gram.rows(),
                cols: gram.cols(),
            });
        }
        if gram != gram.transpose() {
            return Err(Error::NotSymmetric);
        }
        Ok(BilinearForm { gram })
    }

    pub fn identity(field: Field, n: usize) -> BilinearForm {
        BilinearForm {
            gram: Matrix::identity(field, n),
        }
    }

    pub fn gram(&self) -> &Matrix {
        &self.gram
    }

    pub fn dim(&self) -> usize {
        self.gram.rows()
    }

    pub fn eval(&self, u: &[Scalar], v: &[Scalar]) -> Scalar {
        crate::fieldlin::dot(u, &self.gram.mul_vec(v))
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct FormReport {
    #[serde(flatten)]
    pub invariance: CheckReport,
    pub rank: usize,
    pub nondegenerate: bool,
}

/// `⟨[b_i,b_j],b_k⟩ - ⟨b_i,[b_j,b_k]⟩` over all basis triples, plus the Gram rank.
pub fn check_form_invariant(l: &LieAlgebra, form: &BilinearForm) -> Result<FormReport> {
    same_shape(l, form.gram.field(), form.dim())?;
    let n = l.dim();
    let mut acc = Collector::new(DEFAULT_WITNESS_CAP);
    for i in 0..n {
        for j in 0..n {
            let bij = l.basis_bracket(i, j);
            for k in 0..n {
                let lhs = form.eval(&bij, &l.basis_vector(k));
                let rhs = form.eval(&l.basis_vector(i), &l.basis_bracket(j, k));
                acc.record("invariant_form", vec![i as i64, j as i64, k as i64], vec![lhs - rhs]);
            }
        }
    }
    let rank = form.gram.rank();
    Ok(FormReport {
        invariance: acc.finish(),
        rank,
        nondegenerate: rank == n,
    })
}

/// True iff the Gram matrix is the identity.
pub fn is_orthonormal(form: &BilinearForm) -> bool {
    form.gram == Matrix::identity(form.gram.field(), form.dim())
}

/// Matrices `π(I_i)` of a representation on `F^d`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Representation {
    target_dim: usize,
    matrices: Vec<Matrix>,
}

impl Representation {
    /// Checks `π([I_i,I_j]) = [π(I_i), π(I_j)]` for all `i < j`.
    pub fn new(l: &LieAlgebra, matrices: Vec<Matrix>) -> Result<Representation> {
        ensure_dim(l.dim(), matrices.len())?;
        let d = matrices.first().map_or(0, Matrix::rows);
        for m in &matrices {
            if m.rows() != d || m.cols() != d {
                return Err(Error::NotSquare {
                    rows: m.rows(),
                    cols: m.cols(),
                });
            }
            if m.field() != l.field() {
                return Err(Error::FieldMismatch(l.field().to_string(), m.field().to_string()));
            }
        }
        let rep = Representation { target_dim: d, matrices };
        for i in 0..l.dim() {
            for j in i + 1..l.dim() {
                let lhs = rep.of_vector(&l.basis_bracket(i, j));
                if lhs != rep.matrices[i].commutator(&rep.matrices[j]) {
                    return Err(Error::NotRepresentation);
                }
            }
        }
        Ok(rep)
    }

    /// The adjoint representation `π(b_i) = ad(b_i)`.
    pub fn adjoint(l: &LieAlgebra) -> Result<Representation> {
        let mats = (0..l.dim()).map(|i| l.ad_matrix(&l.basis_vector(i))).collect();
        Representation::new(l, mats)
    }

    /// Defining representation of `sl(n)` on `F^n`, basis order of [`sln_basis`].
    pub fn defining_sln(l: &LieAlgebra, n: usize) -> Result<Representation> {
        let mats = sln_basis(n, l.field()).into_iter().map(|(_, m)| m).collect();
        Representation::new(l, mats)
    }

    pub fn target_dim(&self) -> usize {
        self.target_dim
    }

    pub fn matrices(&self) -> &[Matrix] {
        &self.matrices
    }

    pub fn of_vector(&self, v: &[Scalar]) -> Matrix {
        let field = self.matrices[0].field();
        let mut out = Matrix::zeros(field, self.target_dim, self.target_dim);
        for (c, m) in v.iter().zip(&self.matrices) {
            if !c.is_zero() {
                out = out.add(&m.scale(c));
            }
        }
        out
    }

    fn field(&self) -> Field {
        self.matrices[0].field()
    }

    /// `π(I_b) ⊗ π(I_c)` for all pairs, index `b n + c`.
    fn pair_krons(&self) -> Vec<Matrix> {
        let n = self.matrices.len();
        (0..n * n)
            .map(|bc| self.matrices[bc / n].kron(&self.matrices[bc % n]))
            .collect()
    }
}

/// `R = Σ r_ij π(I_i)⊗π(I_j)` on `V⊗V`.
pub fn rep_r_matrix(rep: &Representation, x: &TensorElement) -> Result<Matrix> {
    ensure_dim(rep.matrices.len(), x.dim())?;
    Ok(r_from_krons(rep, &rep.pair_krons(), x))
}

fn r_from_krons(rep: &Representation, krons: &[Matrix], x: &TensorElement) -> Matrix {
    let n = x.dim();
    let d = rep.target_dim;
    let mut out = Matrix::zeros(rep.field(), d * d, d * d);
    for (ij, k) in krons.iter().enumerate() {
        let c = x.r.get(ij / n, ij % n);
        if !c.is_zero() {
            out = out.add(&k.scale(c));
        }
    }
    out
}

/// Placements `R¹²`, `R¹³`, `R²³` of an operator on `V⊗V` into `V⊗V⊗V`,
/// basis index `(i, j, k) -> i d² + j d + k`.
pub fn leg_placements(r: &Matrix, d: usize) -> (Matrix, Matrix, Matrix) {
    let field = r.field();
    let id = Matrix::identity(field, d);
    let r12 = r.kron(&id);
    let r23 = id.kron(r);
    let dd = d * d;
    let mut r13 = Matrix::zeros(field, dd * d, dd * d);
    for p in 0..d {
        for q in 0..d {
            for i in 0..d {
                for k in 0..d {
                    let c = r.get(p * d + q, i * d + k);
                    if c.is_zero() {
                        continue;
                    }
                    for j in 0..d {
                        r13.set(p * dd + j * d + q, i * dd + j * d + k, c.clone());
                    }
                }
            }
        }
    }
    (r12, r13, r23)
}

/// `[R¹²,R¹³] + [R¹³,R²³] + [R¹²,R²³]` on `V⊗V⊗V` for `R` induced by `X` through `π`.
pub fn rep_defect(rep: &Representation, x: &TensorElement) -> Result<Matrix> {
    let r = rep_r_matrix(rep, x)?;
    Ok(defect_from_r(&r, rep.target_dim))
}

fn defect_from_r(r: &Matrix, d: usize) -> Matrix {
    let (r12, r13, r23) = leg_placements(r, d);
    r12.commutator(&r13).add(&r13.commutator(&r23)).add(&r12.commutator(&r23))
}

/// `π⊗π⊗π` applied to an element of `G⊗G⊗G`.
pub fn tensor3_image(rep: &Representation, t: &Tensor3) -> Result<Matrix> {
    ensure_dim(rep.matrices.len(), t.dim())?;
    Ok(tensor3_image_with(rep, &rep.pair_krons(), t))
}

fn tensor3_image_with(rep: &Representation, krons: &[Matrix], t: &Tensor3) -> Matrix {
    let n = t.n;
    let d = rep.target_dim;
    let field = rep.field();
    let mut out = Matrix::zeros(field, d * d * d, d * d * d);
    for a in 0..n {
        let mut inner = Matrix::zeros(field, d * d, d * d);
        let mut any = false;
        for (bc, k) in krons.iter().enumerate() {
            let c = t.get(a, bc / n, bc % n);
            if !c.is_zero() {
                inner = inner.add(&k.scale(c));
                any = true;
            }
        }
        if any {
            out = out.add(&rep.matrices[a].kron(&inner));
        }
    }
    out
}

/// Exhaustive comparison of tensor CYBE solutions with R-matrix operators over GF(p).
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct AuditReport {
    pub p: u32,
    pub dim: usize,
    pub total: u64,
    pub cybe_solutions: u64,
    pub rmatrix_solutions: u64,
    pub both: u64,
    /// Coefficient matrices `r` (row-major) solving the tensor equation whose operator is not an R-matrix.
    pub only_cybe: Vec<Vec<String>>,
    /// Coefficient matrices whose operator is an R-matrix but which do not solve the tensor equation.
    pub only_rmatrix: Vec<Vec<String>>,
    /// Tensors where the representation defect differs from the image of the tensor defect.
    pub consistency_failures: Vec<Vec<String>>,
}

#[derive(Default)]
struct AuditRow {
    cybe: bool,
    rmatrix: bool,
    consistent: bool,
}

/// Enumerates every `X` over GF(p), classifying it by the tensor equation and by
/// the R-matrix condition on `T_X`, and checking on the adjoint representation
/// that `rep_defect(X) = (π⊗π⊗π)(cybe_defect(X))`.
pub fn cybe_audit(l: &LieAlgebra, form: &BilinearForm, cap: u64) -> Result<AuditReport> {
    same_shape(l, form.gram.field(), form.dim())?;
    let p = match l.field() {
        Field::Prime(p) => p,
        Field::Rationals => return Err(Error::NotFiniteField),
    };
    if !is_orthonormal(form) {
        return Err(Error::NotOrthonormal);
    }
    if !check_form_invariant(l, form)?.invariance.passed {
        return Err(Error::NotInvariant);
    }
    let n = l.dim();
    let total = finite_search_size(l.field(), n * n, cap)?;
    let rep = Representation::adjoint(l)?;
    let krons = rep.pair_krons();
    let d = rep.target_dim;

    let rows: Vec<AuditRow> = par::filter_map(total, |idx| {
        let x = TensorElement::new(matrix_from_index(l.field(), n, n, idx)).expect("square");
        let defect = cybe_defect(l, &x).expect("shapes match");
        let rmatrix = is_rmatrix(l, &t_from_tensor(&x));
        let lhs = defect_from_r(&r_from_krons(&rep, &krons, &x), d);
        let rhs = tensor3_image_with(&rep, &krons, &defect);
        Some(AuditRow {
            cybe: defect.is_zero(),
            rmatrix,
            consistent: lhs == rhs,
        })
    });

    let line = |idx: usize| -> Vec<String> {
        matrix_line(&matrix_from_index(l.field(), n, n, idx as u64))
            .split(',')
            .map(str::to_string)
            .collect()
    };
    let mut report = AuditReport {
        p,
        dim: n,
        total,
        cybe_solutions: 0,
        rmatrix_solutions: 0,
        both: 0,
        only_cybe: Vec::new(),
        only_rmatrix: Vec::new(),
        consistency_failures: Vec::new(),
    };
    for (idx, row) in rows.iter().enumerate() {
        report.cybe_solutions += row.cybe as u64;
        report.rmatrix_solutions += row.rmatrix as u64;
        report.both += (row.cybe && row.rmatrix) as u64;
        match (row.cybe, row.rmatrix) {
            (true, false) => report.only_cybe.push(line(idx)),
            (false, true) => report.only_rmatrix.push(line(idx)),
            _ => {}
        }
        if !row.consistent {
            report.consistency_failures.push(line(idx));
        }
    }
    Ok(report)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::liealg::{catalog, sl2, sln};

    fn single(field: Field, n: usize, i: usize, j: usize) -> TensorElement {
        let mut r = Matrix::zeros(field, n, n);
        r.set(i, j, field.one());
        TensorElement::new(r).unwrap()
    }

    #[test]
    fn zero_tensor_has_zero_defect() {
        let q = Field::Rationals;
        assert!(cybe_defect(&sl2(q), &TensorElement::zero(q, 3)).unwrap().is_zero());
        let rep = Representation::adjoint(&sl2(q)).unwrap();
        assert!(rep_defect(&rep, &TensorElement::zero(q, 3)).unwrap().is_zero());
    }

    #[test]
    fn nilpotent_rank_one_solves_cybe() {
        let q = Field::Rationals;
        let l = sl2(q);
        let x = single(q, 3, 1, 1);
        assert!(cybe_defect(&l, &x).unwrap().is_zero());
        let rep = Representation::adjoint(&l).unwrap();
        assert!(rep_defect(&rep, &x).unwrap().is_zero());
    }

    #[test]
    fn tensor_map_is_transpose() {
        let q = Field::Rationals;
        let x = single(q, 3, 1, 2);
        let t = t_from_tensor(&x);
        // T_X(I_1) = I_2
        assert_eq!(t.image_of_basis(1), crate::fieldlin::unit_vector(q, 3, 2));
        assert!(t.image_of_basis(2).iter().all(Scalar::is_zero));
        assert!(t_from_tensor(&TensorElement::zero(q, 3)).is_zero());
        let id = TensorElement::new(Matrix::identity(q, 3)).unwrap();
        assert_eq!(t_from_tensor(&id), LinearOperator::identity(q, 3));
        let ep = single(q, 3, 1, 1);
        assert_eq!(t_from_tensor(&ep).image_of_basis(1), crate::fieldlin::unit_vector(q, 3, 1));
    }

    #[test]
    fn forms() {
        let q = Field::Rationals;
        let so3 = catalog("so3", q, None).unwrap();
        let r = check_form_invariant(&so3, &BilinearForm::identity(q, 3)).unwrap();
        assert!(r.invariance.passed && r.nondegenerate);
        let r = check_form_invariant(&sl2(q), &BilinearForm::identity(q, 3)).unwrap();
        assert!(!r.invariance.passed);
        let ab = LieAlgebra::abelian(q, 2);
        let b = BilinearForm::new(Matrix::from_i64(q, &[&[1, 3], &[3, 0]])).unwrap();
        assert!(check_form_invariant(&ab, &b).unwrap().invariance.passed);
        assert!(BilinearForm::new(Matrix::from_i64(q, &[&[1, 3], &[2, 0]])).is_err());
        // Killing-type form on sl2: <h,h>=2, <e+,e->=1
        let k = BilinearForm::new(Matrix::from_i64(q, &[&[2, 0, 0], &[0, 0, 1], &[0, 1, 0]])).unwrap();
        assert!(check_form_invariant(&sl2(q), &k).unwrap().invariance.passed);
    }

    #[test]
    fn orthonormality() {
        let q = Field::Rationals;
        assert!(is_orthonormal(&BilinearForm::identity(q, 3)));
        assert!(!is_orthonormal(&BilinearForm::new(Matrix::zeros(q, 3, 3)).unwrap()));
        let d = Matrix::from_i64(q, &[&[1, 0, 0], &[0, 1, 0], &[0, 0, 2]]);
        assert!(!is_orthonormal(&BilinearForm::new(d).unwrap()));
    }

    #[test]
    fn representations_are_checked() {
        let q = Field::Rationals;
        let l = sl2(q);
        assert!(Representation::adjoint(&l).is_ok());
        assert!(Representation::defining_sln(&sln(3, q).unwrap(), 3).is_ok());
        let bad = vec![Matrix::identity(q, 2); 3];
        assert_eq!(Representation::new(&l, bad), Err(Error::NotRepresentation));
    }

    #[test]
    fn defect_is_quadratic() {
        let f = Field::Prime(7);
        let l = catalog("so3", f, None).unwrap();
        let r = Matrix::from_i64(f, &[&[1, 2, 0], &[0, 3, 1], &[5, 0, 0]]);
        let x = TensorElement::new(r.clone()).unwrap();
        let lam = f.from_i64(3);
        let x3 = TensorElement::new(r.scale(&lam)).unwrap();
        assert_eq!(cybe_defect(&l, &x3).unwrap(), cybe_defect(&l, &x).unwrap().scale(&(&lam * &lam)));
    }

    #[test]
    fn audit_preconditions() {
        let f = Field::Prime(2);
        let so3 = catalog("so3", f, None).unwrap();
        let q = catalog("so3", Field::Rationals, None).unwrap();
        assert_eq!(cybe_audit(&q, &BilinearForm::identity(Field::Rationals, 3), 1 << 20), Err(Error::NotFiniteField));
        let diag = BilinearForm::new(Matrix::from_i64(f, &[&[1, 0, 0], &[0, 1, 0], &[0, 0, 0]])).unwrap();
        assert_eq!(cybe_audit(&so3, &diag, 1 << 20), Err(Error::NotOrthonormal));
        let sl = sl2(Field::Prime(3));
        assert_eq!(cybe_audit(&sl, &BilinearForm::identity(Field::Prime(3), 3), 1 << 20), Err(Error::NotInvariant));
        assert!(matches!(cybe_audit(&so3, &BilinearForm::identity(f, 3), 100), Err(Error::CapExceeded { .. })));
    }
}
