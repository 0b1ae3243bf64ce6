//! Lie algebras given by structure constants, their axiom check, and a small catalog.
//!
//! Constants are stored only for `i < j` (`[b_i, b_j] = Σ_k c_ij^k b_k`), so
//! antisymmetry holds by construction and the Jacobi identity is the only axiom
//! left to check. Construction never validates: broken tables are useful as
//! negative controls, and [`check_lie`] is always an explicit step.
//!
//! Every check in this crate evaluates its identity on basis tuples only. A
//! multilinear expression vanishes on all vectors iff it vanishes on all basis
//! tuples, so this is complete; the Jacobiator is moreover alternating, which
//! reduces the Lie check to strictly increasing triples `i < j < k`.

use std::collections::BTreeMap;

use crate::error::{ensure_dim, Error, Result};
use crate::fieldlin::{add_vectors, check_vector, kernel, Field, Matrix, Scalar, Subspace, Vector};
use crate::par;
use crate::report::{CheckReport, Collector, DEFAULT_WITNESS_CAP};
use crate::table::BilinearTable;

/// A finite-dimensional algebra with antisymmetric bracket given by structure constants.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct LieAlgebra {
    field: Field,
    basis_names: Vec<String>,
    constants: BTreeMap<(usize, usize, usize), Scalar>,
    table: BilinearTable,
}

impl LieAlgebra {
    /// Builds an algebra from `(i, j, [(k, c)])` bracket rows with `i < j`.
    /// Zero coefficients are dropped; repeated `(i, j)` rows or repeated `k` are errors.
    pub fn new(field: Field, basis_names: Vec<String>, brackets: Vec<(usize, usize, Vec<(usize, Scalar)>)>) -> Result<LieAlgebra> {
        let n = basis_names.len();
        let mut constants = BTreeMap::new();
        let mut seen = std::collections::BTreeSet::new();
        for (i, j, terms) in brackets {
            for idx in [i, j] {
                if idx >= n {
                    return Err(Error::IndexOutOfRange { index: idx, dim: n });
                }
            }
            if i >= j {
                return Err(Error::BracketOrder { i, j });
            }
            if !seen.insert((i, j)) {
                return Err(Error::Duplicate(format!("bracket row ({i},{j})")));
            }
            let mut ks = std::collections::BTreeSet::new();
            for (k, c) in terms {
                if k >= n {
                    return Err(Error::IndexOutOfRange { index: k, dim: n });
                }
                if c.field() != field {
                    return Err(Error::FieldMismatch(field.to_string(), c.field().to_string()));
                }
                if !ks.insert(k) {
                    return Err(Error::Duplicate(format!("term k={k} in bracket ({i},{j})")));
                }
                if !c.is_zero() {
                    constants.insert((i, j, k), c);
                }
            }
        }
        Ok(LieAlgebra::from_constants(field, basis_names, constants))
    }

    fn from_constants(field: Field, basis_names: Vec<String>, constants: BTreeMap<(usize, usize, usize), Scalar>) -> LieAlgebra {
        let table = BilinearTable::from_constants(field, basis_names.len(), &constants, true);
        LieAlgebra {
            field,
            basis_names,
            constants,
            table,
        }
    }

    /// Builds an algebra from integer constants `(i, j, k, c)` meaning `[b_i, b_j] ∋ c b_k`;
    /// rows with `i > j` are negated into `i < j` form.
    pub fn from_integer_table(field: Field, names: &[&str], entries: &[(usize, usize, usize, i64)]) -> LieAlgebra {
        let mut constants: BTreeMap<(usize, usize, usize), Scalar> = BTreeMap::new();
        for &(i, j, k, c) in entries {
            assert_ne!(i, j, "diagonal bracket entries must be zero");
            let (a, b, c) = if i < j { (i, j, c) } else { (j, i, -c) };
            let slot = constants.entry((a, b, k)).or_insert_with(|| field.zero());
            *slot += &field.from_i64(c);
        }
        constants.retain(|_, c| !c.is_zero());
        LieAlgebra::from_constants(field, names.iter().map(|s| s.to_string()).collect(), constants)
    }

    /// The abelian algebra of dimension `n`.
    pub fn abelian(field: Field, n: usize) -> LieAlgebra {
        let names = (1..=n).map(|i| format!("b{i}")).collect();
        LieAlgebra::from_constants(field, names, BTreeMap::new())
    }

    pub fn field(&self) -> Field {
        self.field
    }

    pub fn dim(&self) -> usize {
        self.basis_names.len()
    }

    pub fn basis_names(&self) -> &[String] {
        &self.basis_names
    }

    /// Nonzero constants `c_ij^k`, `i < j`, in lexicographic order.
    pub fn constants(&self) -> &BTreeMap<(usize, usize, usize), Scalar> {
        &self.constants
    }

    /// `c_ij^k` for any ordered pair.
    pub fn constant(&self, i: usize, j: usize, k: usize) -> Scalar {
        self.table
            .get(i, j)
            .iter()
            .find(|(kk, _)| *kk == k)
            .map(|(_, c)| c.clone())
            .unwrap_or_else(|| self.field.zero())
    }

    pub fn is_abelian(&self) -> bool {
        self.constants.is_empty()
    }

    pub(crate) fn table(&self) -> &BilinearTable {
        &self.table
    }

    pub fn basis_vector(&self, i: usize) -> Vector {
        crate::fieldlin::unit_vector(self.field, self.dim(), i)
    }

    /// `[b_i, b_j]` as a coordinate vector.
    pub fn basis_bracket(&self, i: usize, j: usize) -> Vector {
        self.table.basis(i, j)
    }

    /// `[u, v]` without input validation.
    pub fn bracket_unchecked(&self, u: &[Scalar], v: &[Scalar]) -> Vector {
        self.table.apply(u, v)
    }

    pub(crate) fn bracket_with_basis(&self, u: &[Scalar], j: usize) -> Vector {
        self.table.right_basis(u, j)
    }

    pub(crate) fn basis_with(&self, i: usize, v: &[Scalar]) -> Vector {
        self.table.left_basis(i, v)
    }

    /// `[u, v]`, the bilinear extension of the structure constants.
    pub fn bracket(&self, u: &[Scalar], v: &[Scalar]) -> Result<Vector> {
        check_vector(self.field, self.dim(), u)?;
        check_vector(self.field, self.dim(), v)?;
        Ok(self.table.apply(u, v))
    }

    /// Matrix of `ad(u)` in the column convention.
    pub fn ad_matrix(&self, u: &[Scalar]) -> Matrix {
        let n = self.dim();
        let cols: Vec<Vector> = (0..n).map(|j| self.bracket_with_basis(u, j)).collect();
        Matrix::from_fn(self.field, n, n, |i, j| cols[j][i].clone())
    }

    pub(crate) fn check_subspace(&self, k: &Subspace) -> Result<()> {
        ensure_dim(self.dim(), k.ambient_dim())?;
        if k.field() != self.field {
            return Err(Error::FieldMismatch(self.field.to_string(), k.field().to_string()));
        }
        Ok(())
    }
}

/// `[u, v]`.
pub fn bracket(l: &LieAlgebra, u: &[Scalar], v: &[Scalar]) -> Result<Vector> {
    l.bracket(u, v)
}

/// Jacobi identity on all basis triples `i < j < k`.
pub fn check_lie(l: &LieAlgebra) -> CheckReport {
    check_lie_capped(l, DEFAULT_WITNESS_CAP)
}

pub fn check_lie_capped(l: &LieAlgebra, cap: usize) -> CheckReport {
    let n = l.dim();
    par::map_reduce(
        n as u64,
        || Collector::new(cap),
        |i| {
            let i = i as usize;
            let mut acc = Collector::new(cap);
            for j in i + 1..n {
                let bij = l.basis_bracket(i, j);
                for k in j + 1..n {
                    let d = jacobiator_basis(l, &bij, i, j, k);
                    acc.record("jacobi", vec![i as i64, j as i64, k as i64], d);
                }
            }
            acc
        },
        Collector::merge,
    )
    .finish()
}

fn jacobiator_basis(l: &LieAlgebra, bij: &[Scalar], i: usize, j: usize, k: usize) -> Vector {
    let t1 = l.bracket_with_basis(bij, k);
    let t2 = l.bracket_with_basis(&l.basis_bracket(j, k), i);
    let t3 = l.bracket_with_basis(&l.basis_bracket(k, i), j);
    add_vectors(&add_vectors(&t1, &t2), &t3)
}

/// Jacobiator `[[u,v],w] + [[v,w],u] + [[w,u],v]` of arbitrary vectors.
pub fn jacobiator(l: &LieAlgebra, u: &[Scalar], v: &[Scalar], w: &[Scalar]) -> Vector {
    let b = |x: &[Scalar], y: &[Scalar]| l.bracket_unchecked(x, y);
    add_vectors(&add_vectors(&b(&b(u, v), w), &b(&b(v, w), u)), &b(&b(w, u), v))
}

/// `[K, G]`: span of `[k, b_j]` over a basis of `K` and all `j`.
pub fn ad_image(l: &LieAlgebra, k: &Subspace) -> Result<Subspace> {
    l.check_subspace(k)?;
    let mut vs = Vec::new();
    for kv in k.basis_vectors() {
        for j in 0..l.dim() {
            vs.push(l.bracket_with_basis(kv, j));
        }
    }
    Subspace::span(l.field(), l.dim(), &vs)
}

/// Derived algebra `[G, G]`.
pub fn derived_subalgebra(l: &LieAlgebra) -> Subspace {
    ad_image(l, &Subspace::full(l.field(), l.dim())).expect("full space matches the algebra")
}

/// True iff `[K, K] = 0`.
pub fn is_abelian_subspace(l: &LieAlgebra, k: &Subspace) -> Result<bool> {
    l.check_subspace(k)?;
    let basis: Vec<&[Scalar]> = k.basis_vectors().collect();
    for (a, u) in basis.iter().enumerate() {
        for v in &basis[a + 1..] {
            if !crate::fieldlin::is_zero_vector(&l.bracket_unchecked(u, v)) {
                return Ok(false);
            }
        }
    }
    Ok(true)
}

/// `{u | [u, G] = 0}`, the kernel of the stacked adjoint maps.
pub fn center(l: &LieAlgebra) -> Subspace {
    let n = l.dim();
    // Row (j, k) of the system: Σ_i u_i c_ij^k = 0.
    let system = Matrix::from_fn(l.field(), n * n, n, |row, i| l.constant(i, row / n, row % n));
    kernel(&system)
}

/// Names accepted by [`catalog`].
pub const CATALOG_NAMES: [&str; 6] = ["sl2", "heisenberg3", "aff2", "so3", "sl3", "sln"];

/// Standard test algebras.
///
/// * `sl2`: basis `(h, e+, e-)`, `[h,e±] = ±2e±`, `[e+,e-] = h`.
/// * `heisenberg3`: basis `(x, y, z)`, `[x,y] = z`.
/// * `aff2`: basis `(x, y)`, `[x,y] = x`.
/// * `so3`: basis `(e1, e2, e3)`, `[e1,e2] = e3` and cyclic.
/// * `sln`: see [`sln`]; needs `n >= 2`. `sl3`, `sl4`, ... name fixed sizes.
pub fn catalog(name: &str, field: Field, n: Option<usize>) -> Result<LieAlgebra> {
    match name {
        "sl2" => Ok(sl2(field)),
        "heisenberg3" => Ok(LieAlgebra::from_integer_table(field, &["x", "y", "z"], &[(0, 1, 2, 1)])),
        "aff2" => Ok(LieAlgebra::from_integer_table(field, &["x", "y"], &[(0, 1, 0, 1)])),
        "so3" => Ok(LieAlgebra::from_integer_table(
            field,
            &["e1", "e2", "e3"],
            &[(0, 1, 2, 1), (1, 2, 0, 1), (2, 0, 1, 1)],
        )),
        "sln" => {
            let n = n.ok_or_else(|| Error::InvalidParameter("sln needs n".into()))?;
            sln(n, field)
        }
        other => match other.strip_prefix("sl").and_then(|d| d.parse::<usize>().ok()) {
            Some(n) if n >= 3 => sln(n, field),
            _ => Err(Error::UnknownAlgebra(other.to_string())),
        },
    }
}

pub fn sl2(field: Field) -> LieAlgebra {
    LieAlgebra::from_integer_table(
        field,
        &["h", "e+", "e-"],
        &[(0, 1, 1, 2), (0, 2, 2, -2), (1, 2, 0, 1)],
    )
}

/// Basis matrices of `sl(n)`: `H_1..H_{n-1}` (`H_i = E_ii - E_{i+1,i+1}`), then the
/// off-diagonal units `E_ij` in row-major order. For `n = 2` this is `(h, e+, e-)`.
pub fn sln_basis(n: usize, field: Field) -> Vec<(String, Matrix)> {
    let label = |i: usize, j: usize| {
        if n < 10 {
            format!("E{}{}", i + 1, j + 1)
        } else {
            format!("E{}_{}", i + 1, j + 1)
        }
    };
    let mut out = Vec::new();
    for i in 0..n - 1 {
        let mut m = Matrix::zeros(field, n, n);
        m.set(i, i, field.one());
        m.set(i + 1, i + 1, field.from_i64(-1));
        out.push((format!("H{}", i + 1), m));
    }
    for i in 0..n {
        for j in 0..n {
            if i != j {
                let mut m = Matrix::zeros(field, n, n);
                m.set(i, j, field.one());
                out.push((label(i, j), m));
            }
        }
    }
    out
}

/// Basis index of `E_ij` (0-based, `i != j`) in [`sln_basis`] order.
pub fn sln_offdiag_index(n: usize, i: usize, j: usize) -> usize {
    assert!(i != j && i < n && j < n);
    let before = i * (n - 1) + if j > i { j - 1 } else { j };
    (n - 1) + before
}

/// Coordinates of a traceless `n x n` matrix in [`sln_basis`].
pub fn sln_coordinates(n: usize, m: &Matrix) -> Vector {
    let field = m.field();
    let mut out = Vec::with_capacity(n * n - 1);
    let mut running = field.zero();
    for t in 0..n - 1 {
        running += m.get(t, t);
        out.push(running.clone());
    }
    for i in 0..n {
        for j in 0..n {
            if i != j {
                out.push(m.get(i, j).clone());
            }
        }
    }
    out
}

/// `sl(n)` with structure constants from matrix commutators.
pub fn sln(n: usize, field: Field) -> Result<LieAlgebra> {
    if n < 2 {
        return Err(Error::InvalidParameter(format!("sln needs n >= 2, got {n}")));
    }
    let basis = sln_basis(n, field);
    let dim = basis.len();
    let mut constants = BTreeMap::new();
    for i in 0..dim {
        for j in i + 1..dim {
            let c = basis[i].1.commutator(&basis[j].1);
            for (k, x) in sln_coordinates(n, &c).into_iter().enumerate() {
                if !x.is_zero() {
                    constants.insert((i, j, k), x);
                }
            }
        }
    }
    let names = basis.into_iter().map(|(s, _)| s).collect();
    Ok(LieAlgebra::from_constants(field, names, constants))
}

#[cfg(test)]
mod tests {
    use super::*;

    fn v(field: Field, xs: &[i64]) -> Vector {
        xs.iter().map(|&x| field.from_i64(x)).collect()
    }

    #[test]
    fn sl2_brackets() {
        let q = Field::Rationals;
        let l = sl2(q);
        let h = l.basis_vector(0);
        let ep = l.basis_vector(1);
        assert_eq!(l.bracket(&h, &ep).unwrap(), v(q, &[0, 2, 0]));
        assert_eq!(l.bracket(&ep, &h).unwrap(), v(q, &[0, -2, 0]));
        let u = v(q, &[3, -1, 7]);
        assert_eq!(l.bracket(&u, &u).unwrap(), v(q, &[0, 0, 0]));
    }

    #[test]
    fn heisenberg_bracket() {
        let q = Field::Rationals;
        let l = catalog("heisenberg3", q, None).unwrap();
        assert_eq!(l.bracket(&l.basis_vector(0), &l.basis_vector(1)).unwrap(), l.basis_vector(2));
    }

    #[test]
    fn bracket_rejects_bad_input() {
        let l = sl2(Field::Rationals);
        assert!(l.bracket(&v(Field::Rationals, &[1, 0]), &l.basis_vector(0)).is_err());
        assert!(l.bracket(&v(Field::Prime(3), &[1, 0, 0]), &l.basis_vector(0)).is_err());
    }

    #[test]
    fn catalog_algebras_pass_jacobi() {
        for field in [Field::Rationals, Field::Prime(3), Field::Prime(7)] {
            for name in ["sl2", "heisenberg3", "aff2", "so3"] {
                let l = catalog(name, field, None).unwrap();
                assert!(check_lie(&l).passed, "{name} over {field}");
            }
            for n in 2..=4 {
                assert!(check_lie(&sln(n, field).unwrap()).passed);
            }
        }
    }

    #[test]
    fn low_dimension_is_vacuous() {
        let q = Field::Rationals;
        let l = LieAlgebra::from_integer_table(q, &["a", "b"], &[(0, 1, 0, 5), (0, 1, 1, -3)]);
        assert!(check_lie(&l).passed);
    }

    #[test]
    fn broken_table_yields_witness() {
        // [x,y]=x, [x,z]=y, [y,z]=0: J(x,y,z) = [x,z] = y
        let q = Field::Rationals;
        let l = LieAlgebra::from_integer_table(q, &["x", "y", "z"], &[(0, 1, 0, 1), (0, 2, 1, 1)]);
        let r = check_lie(&l);
        assert!(!r.passed);
        assert_eq!(r.witness_count, 1);
        assert_eq!(r.witnesses[0].indices, vec![0, 1, 2]);
        assert_eq!(r.witnesses[0].defect, v(q, &[0, 1, 0]));
    }

    #[test]
    fn aff2_over_gf2() {
        let l = catalog("aff2", Field::Prime(2), None).unwrap();
        assert_eq!(l.dim(), 2);
        assert_eq!(l.constants().len(), 1);
    }

    #[test]
    fn sl3_has_dim_8() {
        let l = sln(3, Field::Rationals).unwrap();
        assert_eq!(l.dim(), 8);
        assert!(check_lie(&l).passed);
        assert!(sln(1, Field::Rationals).is_err());
        assert!(catalog("sln", Field::Rationals, None).is_err());
        assert!(catalog("g2", Field::Rationals, None).is_err());
    }

    #[test]
    fn sl2_matches_sln_2() {
        for field in [Field::Rationals, Field::Prime(5)] {
            let a = sl2(field);
            let b = sln(2, field).unwrap();
            assert_eq!(a.constants(), b.constants());
        }
    }

    #[test]
    fn ad_images() {
        let q = Field::Rationals;
        let l = sl2(q);
        assert!(ad_image(&l, &Subspace::zero(q, 3)).unwrap().is_zero());
        let k = Subspace::coordinate(q, 3, &[1]);
        assert_eq!(ad_image(&l, &k).unwrap(), Subspace::coordinate(q, 3, &[0, 1]));
        let h = catalog("heisenberg3", q, None).unwrap();
        assert!(ad_image(&h, &Subspace::coordinate(q, 3, &[2])).unwrap().is_zero());
    }

    #[test]
    fn abelian_subspaces() {
        let q = Field::Rationals;
        let h = catalog("heisenberg3", q, None).unwrap();
        assert!(is_abelian_subspace(&h, &Subspace::coordinate(q, 3, &[1, 2])).unwrap());
        assert!(is_abelian_subspace(&h, &Subspace::span(q, 3, &[v(q, &[1, 1, 1])]).unwrap()).unwrap());
        let l = sl2(q);
        assert!(!is_abelian_subspace(&l, &Subspace::coordinate(q, 3, &[1, 2])).unwrap());
    }

    #[test]
    fn centers() {
        let q = Field::Rationals;
        assert!(center(&LieAlgebra::abelian(q, 3)).is_full());
        assert!(center(&sl2(q)).is_zero());
        let h = catalog("heisenberg3", q, None).unwrap();
        assert_eq!(center(&h), Subspace::coordinate(q, 3, &[2]));
    }

    #[test]
    fn offdiag_index_matches_names() {
        let basis = sln_basis(4, Field::Rationals);
        for i in 0..4 {
            for j in 0..4 {
                if i != j {
                    assert_eq!(basis[sln_offdiag_index(4, i, j)].0, format!("E{}{}", i + 1, j + 1));
                }
            }
        }
    }
}
