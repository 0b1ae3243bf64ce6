//! Constructions of Novikov products over a given Lie algebra: operators from
//! abelian subspaces, the abelian-case product `u∘v = σ(v)u`, the existence
//! search, the `sl(n)` root-height subalgebra, the `sl(2)` example, and the
//! exhaustive operator enumeration over small prime fields.

use std::collections::BTreeMap;

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use sha2::{Digest, Sha256};

use crate::error::{ensure_dim, Error, Result};
use crate::fieldlin::{
    add_vectors, check_vector, dot, is_zero_vector, scale_vector, unit_vector, zero_vector, Field, Matrix, Scalar,
    Subspace, Vector,
};
use crate::liealg::{ad_image, check_lie, is_abelian_subspace, sl2, sln, sln_offdiag_index, LieAlgebra};
use crate::novikov::{
    check_compat, check_left_symmetric, check_right_commutative, is_rmatrix, is_strong, product_from_operator,
    BilinearProduct, LinearOperator,
};
use crate::par;

/// Data for an operator built from an abelian subspace `K`: a complement `Kbar`
/// of `K + [K,G]` and a map `T0: Kbar -> K` in canonical-basis coordinates
/// (`dim K x dim Kbar`, column convention).
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct AbelianOperatorSpec {
    pub k: Subspace,
    pub kbar: Subspace,
    pub t0: Matrix,
}

impl AbelianOperatorSpec {
    /// Checks the three invariants and returns `K + [K,G]`.
    pub fn validate(&self, l: &LieAlgebra) -> Result<Subspace> {
        ensure_dim(l.dim(), self.k.ambient_dim())?;
        ensure_dim(l.dim(), self.kbar.ambient_dim())?;
        ensure_dim(self.k.dim(), self.t0.rows())?;
        ensure_dim(self.kbar.dim(), self.t0.cols())?;
        for f in [self.k.field(), self.kbar.field(), self.t0.field()] {
            if f != l.field() {
                return Err(Error::FieldMismatch(l.field().to_string(), f.to_string()));
            }
        }
        if !is_abelian_subspace(l, &self.k)? {
            return Err(Error::AbelianityViolated);
        }
        let w = self.k.sum(&ad_image(l, &self.k)?)?;
        if w.is_full() {
            return Err(Error::NotProper);
        }
        if !self.kbar.is_direct_complement_of(&w) {
            return Err(Error::NotComplement);
        }
        Ok(w)
    }
}

/// `T(u1 + u2) = T0(u1)` for `u1 ∈ Kbar`, `u2 ∈ K + [K,G]`.
pub fn abelian_operator(l: &LieAlgebra, spec: &AbelianOperatorSpec) -> Result<LinearOperator> {
    let w = spec.validate(l)?;
    let n = l.dim();
    let field = l.field();
    let dkbar = spec.kbar.dim();
    // Columns: Kbar basis, then W basis. Invertible because Kbar ⊕ W = G.
    let columns: Vec<&[Scalar]> = spec.kbar.basis_vectors().chain(w.basis_vectors()).collect();
    let basis = Matrix::from_fn(field, n, n, |i, j| columns[j][i].clone());
    let images = (0..n)
        .map(|j| {
            let coords = basis.solve(&unit_vector(field, n, j)).expect("direct sum spans G");
            let k_coords = spec.t0.mul_vec(&coords[..dkbar]);
            spec.k.combine(&k_coords)
        })
        .collect::<Vec<_>>();
    LinearOperator::from_images(field, &images)
}

/// `u∘v = σ(v) u` on an abelian algebra.
pub fn sigma_product(l: &LieAlgebra, sigma: &[Scalar]) -> Result<BilinearProduct> {
    check_vector(l.field(), l.dim(), sigma)?;
    if !l.is_abelian() {
        return Err(Error::NotAbelian);
    }
    let n = l.dim();
    let field = l.field();
    Ok(BilinearProduct::from_fn(field, n, |i, j| {
        let mut out = zero_vector(field, n);
        out[i] = sigma[j].clone();
        out
    }))
}

/// The nontrivial structure found by [`existence`].
#[derive(Clone, Debug, PartialEq, Eq)]
pub enum ExistenceWitness {
    /// Abelian algebra: the functional `σ` of `u∘v = σ(v)u`.
    Sigma(Vector),
    /// Non-abelian algebra: the rank-one operator `T(v0) = u0`, `T(V) = 0`.
    Operator(LinearOperator),
}

/// Reproducible record of an existence run.
#[derive(Clone, Debug, PartialEq, Eq)]
pub enum Certificate {
    Abelian {
        sigma: Vector,
    },
    RankOne {
        u0: Vector,
        v0: Vector,
        /// Canonical basis of the hyperplane `V ⊇ F u0 + [u0,G]` with `V ⊕ F v0 = G`.
        v_space: Subspace,
        /// `F u0 + [u0,G]`.
        s_space: Subspace,
        /// `v0∘v0`, equal to `-[u0,v0]` and nonzero.
        v0_square: Vector,
        bracket_u0_v0: Vector,
        /// Candidates for `u0` examined before acceptance (1-based position of `u0`).
        candidates_examined: usize,
        /// True when `v0 = u1 + w` had to be formed because `u1` commutes with `u0`.
        repaired: bool,
    },
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Existence {
    pub witness: ExistenceWitness,
    pub product: BilinearProduct,
    pub certificate: Certificate,
}

/// `F u + [u,G]`.
pub fn line_plus_ad(l: &LieAlgebra, u: &[Scalar]) -> Subspace {
    let line = Subspace::span(l.field(), l.dim(), &[u]).expect("u has the algebra's shape");
    line.sum(&ad_image(l, &line).expect("same ambient")).expect("same ambient")
}

fn is_u0_candidate(l: &LieAlgebra, u: &[Scalar]) -> bool {
    if is_zero_vector(u) {
        return false;
    }
    let non_central = (0..l.dim()).any(|j| !is_zero_vector(&l.bracket_with_basis(u, j)));
    non_central && !line_plus_ad(l, u).is_full()
}

fn random_vector(rng: &mut ChaCha8Rng, field: Field, n: usize) -> Vector {
    (0..n)
        .map(|_| match field {
            Field::Rationals => field.from_i64(rng.random_range(-3..=3)),
            Field::Prime(p) => field.residue(rng.random_range(0..p as u64)),
        })
        .collect()
}

/// Candidates for `u0` in search order: basis vectors, sums `b_i + b_j` (`i < j`),
/// then `budget` seeded pseudorandom combinations.
fn u0_candidates(l: &LieAlgebra, seed: u64, budget: usize) -> impl Iterator<Item = Vector> + '_ {
    let n = l.dim();
    let field = l.field();
    let basis = (0..n).map(move |i| unit_vector(field, n, i));
    let pairs = (0..n).flat_map(move |i| {
        (i + 1..n).map(move |j| add_vectors(&unit_vector(field, n, i), &unit_vector(field, n, j)))
    });
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let random = (0..budget).map(move |_| random_vector(&mut rng, field, n));
    basis.chain(pairs).chain(random)
}

/// Finds a nontrivial Novikov product compatible with the bracket of `l`.
///
/// Abelian algebras get `u∘v = σ(v)u` with `σ` the first coordinate functional.
/// Otherwise the search looks for a non-central `u0` with `F u0 + [u0,G] != G`,
/// picks `v0` outside that subspace with `[u0,v0] != 0`, and returns the product
/// of the operator `T(v0) = u0`, `T(V) = 0`. Exhausting the candidates gives
/// [`Error::NotFound`]; this happens e.g. for `so(3)` over Q, where every nonzero
/// `u` has `F u + [u,G] = G`.
pub fn existence(l: &LieAlgebra, seed: u64, budget: usize) -> Result<Existence> {
    let n = l.dim();
    let field = l.field();
    if n == 0 {
        return Err(Error::InvalidParameter("algebra has dimension 0".into()));
    }
    if !check_lie(l).passed {
        return Err(Error::InvalidLie);
    }
    if l.is_abelian() {
        let sigma = unit_vector(field, n, 0);
        let product = sigma_product(l, &sigma)?;
        return Ok(Existence {
            witness: ExistenceWitness::Sigma(sigma.clone()),
            product,
            certificate: Certificate::Abelian { sigma },
        });
    }

    let (position, u0) = u0_candidates(l, seed, budget)
        .enumerate()
        .find(|(_, u)| is_u0_candidate(l, u))
        .ok_or(Error::NotFound { budget })?;
    let s_space = line_plus_ad(l, &u0);
    let outside = s_space.complement();
    let commutes = |v: &[Scalar]| is_zero_vector(&l.bracket_unchecked(&u0, v));

    let u1 = outside.basis().row(0).to_vec();
    let (v0, repaired) = if !commutes(&u1) {
        (u1, false)
    } else {
        // [u0, u1 + w] = [u0, w] for w in [u0,G] with [u0,w] != 0.
        let w = (0..n).map(|j| l.bracket_with_basis(&u0, j)).find(|w| !commutes(w));
        match w {
            Some(w) => (add_vectors(&u1, &w), true),
            None => {
                // [u0, S] = 0, so some other complement vector must fail to commute.
                let v = outside
                    .basis_vectors()
                    .find(|v| !commutes(v))
                    .ok_or(Error::InvalidLie)?
                    .to_vec();
                (v, false)
            }
        }
    };

    let line_v0 = Subspace::span(field, n, &[&v0])?;
    let v_space = s_space.sum(&s_space.sum(&line_v0)?.complement())?;
    debug_assert_eq!(v_space.dim(), n - 1);
    // f with f(V) = 0, f(v0) = 1.
    let annihilator = crate::fieldlin::kernel(v_space.basis());
    let f = annihilator.basis().row(0).to_vec();
    let scale = dot(&f, &v0).inv().expect("v0 is outside V");
    let f = scale_vector(&scale, &f);
    let operator = LinearOperator::new(Matrix::from_fn(field, n, n, |i, j| &u0[i] * &f[j]))?;
    let product = product_from_operator(l, &operator)?;
    let v0_square = product.apply(&v0, &v0);
    let bracket_u0_v0 = l.bracket_unchecked(&u0, &v0);
    Ok(Existence {
        witness: ExistenceWitness::Operator(operator),
        product,
        certificate: Certificate::RankOne {
            u0,
            v0,
            v_space,
            s_space,
            v0_square,
            bracket_u0_v0,
            candidates_examined: position + 1,
            repaired,
        },
    })
}

/// The `sl(2)` operator `T(e-) = e+`, `T(h) = T(e+) = 0` and its product:
/// `h∘e- = -2e+`, `e-∘h = 4e+`, `e-∘e- = -h`, all other basis products zero.
pub fn sl2_example(field: Field) -> Result<(LieAlgebra, LinearOperator, BilinearProduct)> {
    if field.characteristic() == 2 {
        return Err(Error::BadCharacteristic(2));
    }
    let l = sl2(field);
    let mut m = Matrix::zeros(field, 3, 3);
    m.set(1, 2, field.one());
    let t = LinearOperator::new(m)?;
    let p = product_from_operator(&l, &t)?;
    Ok((l, t, p))
}

/// Root-height data of `sl(n)`: layers `G_m` spanned by `E_ij` with `j - i = m`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct HeightDecomposition {
    pub n: usize,
    pub layers: BTreeMap<i64, Subspace>,
    /// Maximal height `n - 1`.
    pub k: i64,
    /// Cutoff `floor(k/2) + 1`.
    pub ell: i64,
    /// `Σ_{i=ℓ}^{k} G_i`.
    pub k_space: Subspace,
    /// `Σ_{i=-k}^{ℓ-k-1} G_i`.
    pub low_space: Subspace,
    /// `K + [K,G]`.
    pub k_plus_ad: Subspace,
}

impl HeightDecomposition {
    pub fn layers_sum(&self, from: i64, to: i64) -> Subspace {
        let field = self.k_space.field();
        let dim = self.k_space.ambient_dim();
        (from..=to)
            .filter_map(|m| self.layers.get(&m))
            .fold(Subspace::zero(field, dim), |acc, s| acc.sum(s).expect("same ambient"))
    }
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct HeightConstruction {
    pub algebra: LieAlgebra,
    pub heights: HeightDecomposition,
    pub spec: AbelianOperatorSpec,
}

/// Builds the height layers of `sl(n)`, the abelian subalgebra `K` of high
/// positive roots, and a default operator spec: `Kbar` is the low negative
/// layers extended greedily to a complement of `K + [K,G]`, and `T0` sends the
/// first `Kbar` basis vector to the first `K` basis vector.
pub fn sln_heights(n: usize, field: Field) -> Result<HeightConstruction> {
    let algebra = sln(n, field)?;
    let dim = algebra.dim();
    let k = n as i64 - 1;
    let ell = k / 2 + 1;
    let mut by_height: BTreeMap<i64, Vec<usize>> = BTreeMap::new();
    for i in 0..n {
        for j in 0..n {
            if i != j {
                by_height.entry(j as i64 - i as i64).or_default().push(sln_offdiag_index(n, i, j));
            }
        }
    }
    let layers: BTreeMap<i64, Subspace> = by_height
        .into_iter()
        .map(|(m, idx)| (m, Subspace::coordinate(field, dim, &idx)))
        .collect();
    let mut heights = HeightDecomposition {
        n,
        layers,
        k,
        ell,
        k_space: Subspace::zero(field, dim),
        low_space: Subspace::zero(field, dim),
        k_plus_ad: Subspace::zero(field, dim),
    };
    heights.k_space = heights.layers_sum(ell, k);
    heights.low_space = heights.layers_sum(-k, ell - k - 1);
    if !is_abelian_subspace(&algebra, &heights.k_space)? {
        return Err(Error::AbelianityViolated);
    }
    heights.k_plus_ad = heights.k_space.sum(&ad_image(&algebra, &heights.k_space)?)?;
    if !heights.low_space.intersect(&heights.k_plus_ad)?.is_zero() {
        return Err(Error::NotComplement);
    }
    let kbar = heights
        .low_space
        .sum(&heights.low_space.sum(&heights.k_plus_ad)?.complement())?;
    let mut t0 = Matrix::zeros(field, heights.k_space.dim(), kbar.dim());
    if t0.rows() > 0 && t0.cols() > 0 {
        t0.set(0, 0, field.one());
    }
    let spec = AbelianOperatorSpec {
        k: heights.k_space.clone(),
        kbar,
        t0,
    };
    Ok(HeightConstruction { algebra, heights, spec })
}

/// Which operators [`enumerate_operators`] yields.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum OperatorFilter {
    All,
    Rmatrix,
    RmatrixAndStrong,
}

impl OperatorFilter {
    pub fn accepts(&self, l: &LieAlgebra, t: &LinearOperator) -> bool {
        match self {
            OperatorFilter::All => true,
            OperatorFilter::Rmatrix => is_rmatrix(l, t),
            OperatorFilter::RmatrixAndStrong => is_rmatrix(l, t) && is_strong(l, t),
        }
    }
}

/// Default bound on the number of matrices an exhaustive enumeration may visit.
pub const DEFAULT_ENUMERATION_CAP: u64 = 1 << 24;

/// `p^(entries)` if the field is finite and the power does not exceed `cap`.
pub fn finite_search_size(field: Field, entries: usize, cap: u64) -> Result<u64> {
    let p = field.order().ok_or(Error::NotFiniteField)?;
    let size = u32::try_from(entries).ok().and_then(|e| p.checked_pow(e));
    match size {
        Some(s) if s <= cap => Ok(s),
        _ => Err(Error::CapExceeded {
            required: format!("{p}^{entries}"),
            cap,
        }),
    }
}

/// The `index`-th `rows x cols` matrix over GF(p) in lexicographic row-major order.
pub fn matrix_from_index(field: Field, rows: usize, cols: usize, index: u64) -> Matrix {
    let p = field.order().expect("finite field");
    let total = rows * cols;
    let mut digits = vec![0u64; total];
    let mut x = index;
    for d in digits.iter_mut().rev() {
        *d = x % p;
        x /= p;
    }
    Matrix::from_fn(field, rows, cols, |i, j| field.residue(digits[i * cols + j]))
}

/// Lazy lexicographic stream of the operators passing a filter.
pub struct OperatorEnumeration<'a> {
    algebra: &'a LieAlgebra,
    filter: OperatorFilter,
    next: u64,
    total: u64,
}

impl OperatorEnumeration<'_> {
    /// Number of matrices visited by the full stream.
    pub fn total(&self) -> u64 {
        self.total
    }
}

impl Iterator for OperatorEnumeration<'_> {
    type Item = LinearOperator;

    fn next(&mut self) -> Option<LinearOperator> {
        let n = self.algebra.dim();
        while self.next < self.total {
            let m = matrix_from_index(self.algebra.field(), n, n, self.next);
            self.next += 1;
            let t = LinearOperator::new(m).expect("square");
            if self.filter.accepts(self.algebra, &t) {
                return Some(t);
            }
        }
        None
    }
}

/// All `n x n` operators over GF(p) passing `filter`, in lexicographic order.
pub fn enumerate_operators(l: &LieAlgebra, filter: OperatorFilter, cap: u64) -> Result<OperatorEnumeration<'_>> {
    let total = finite_search_size(l.field(), l.dim() * l.dim(), cap)?;
    Ok(OperatorEnumeration {
        algebra: l,
        filter,
        next: 0,
        total,
    })
}

/// Eager, data-parallel form of [`enumerate_operators`]; same order.
pub fn collect_operators(l: &LieAlgebra, filter: OperatorFilter, cap: u64) -> Result<Vec<LinearOperator>> {
    let total = finite_search_size(l.field(), l.dim() * l.dim(), cap)?;
    let n = l.dim();
    Ok(par::filter_map(total, |idx| {
        let t = LinearOperator::new(matrix_from_index(l.field(), n, n, idx)).expect("square");
        filter.accepts(l, &t).then_some(t)
    }))
}

/// Regression digest of an operator list: count and SHA-256 over one line per
/// matrix (row-major residues joined by `,`), lines joined by `\n`, in list order.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct EnumerationDigest {
    pub count: usize,
    pub sha256: String,
}

pub fn enumeration_digest(ops: &[LinearOperator]) -> EnumerationDigest {
    let lines: Vec<String> = ops.iter().map(|t| matrix_line(t.matrix())).collect();
    let hash = Sha256::digest(lines.join("\n").as_bytes());
    EnumerationDigest {
        count: ops.len(),
        sha256: hex::encode(hash),
    }
}

pub(crate) fn matrix_line(m: &Matrix) -> String {
    m.entries().iter().map(Scalar::to_string).collect::<Vec<_>>().join(",")
}

/// Outcome of checking the operator-to-Novikov implication over every operator of a finite field.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct OperatorSurvey {
    pub total: u64,
    /// Operators satisfying both the R-matrix and strong conditions.
    pub survivors: Vec<LinearOperator>,
    /// Survivors whose product fails left-symmetry, right-commutativity or compatibility.
    pub counterexamples: Vec<LinearOperator>,
}

/// Enumerates every operator, keeps those passing both operator conditions, and
/// checks the Novikov and compatibility axioms for each induced product.
pub fn survey_operators(l: &LieAlgebra, cap: u64) -> Result<OperatorSurvey> {
    let total = finite_search_size(l.field(), l.dim() * l.dim(), cap)?;
    let survivors = collect_operators(l, OperatorFilter::RmatrixAndStrong, cap)?;
    let failures = par::map_slice(&survivors, |t| {
        let p = product_from_operator(l, t).expect("shapes match");
        let ok = check_left_symmetric(&p).passed
            && check_right_commutative(&p).passed
            && check_compat(l, &p).expect("shapes match").passed;
        (!ok).then(|| t.clone())
    });
    Ok(OperatorSurvey {
        total,
        survivors,
        counterexamples: failures.into_iter().flatten().collect(),
    })
}

/// Every subspace of `GF(p)^n` of dimension `d`, in lexicographic order of
/// pivot columns and then free entries.
pub fn all_subspaces(field: Field, n: usize, d: usize) -> Result<Vec<Subspace>> {
    let p = field.order().ok_or(Error::NotFiniteField)?;
    if d > n {
        return Ok(Vec::new());
    }
    let mut out = Vec::new();
    for pivots in combinations(n, d) {
        // free slots: (row r, column c) with c > pivots[r] and c not a pivot
        let slots: Vec<(usize, usize)> = (0..d)
            .flat_map(|r| ((pivots[r] + 1)..n).filter(|c| !pivots.contains(c)).map(move |c| (r, c)))
            .collect();
        let count = p.checked_pow(slots.len() as u32).ok_or(Error::CapExceeded {
            required: format!("{p}^{}", slots.len()),
            cap: u64::MAX,
        })?;
        for idx in 0..count {
            let mut rows = vec![zero_vector(field, n); d];
            for (r, &c) in pivots.iter().enumerate() {
                rows[r][c] = field.one();
            }
            let mut x = idx;
            for &(r, c) in slots.iter().rev() {
                rows[r][c] = field.residue(x % p);
                x /= p;
            }
            out.push(Subspace::span(field, n, &rows)?);
        }
    }
    Ok(out)
}

fn combinations(n: usize, d: usize) -> Vec<Vec<usize>> {
    fn rec(start: usize, n: usize, d: usize, cur: &mut Vec<usize>, out: &mut Vec<Vec<usize>>) {
        if cur.len() == d {
            out.push(cur.clone());
            return;
        }
        for i in start..n {
            cur.push(i);
            rec(i + 1, n, d, cur, out);
            cur.pop();
        }
    }
    let mut out = Vec::new();
    rec(0, n, d, &mut Vec::new(), &mut out);
    out
}

/// Valid abelian-operator specs with `K` drawn from `ks` and `Kbar` the greedy
/// complement of `K + [K,G]`. Every `T0` is listed when there are at most
/// `t0_limit` of them over a finite field; otherwise the first-to-first map
/// and the all-ones map are used.
pub fn abelian_specs(l: &LieAlgebra, ks: &[Subspace], t0_limit: u64) -> Result<Vec<AbelianOperatorSpec>> {
    let field = l.field();
    let mut out = Vec::new();
    for k in ks {
        if !is_abelian_subspace(l, k)? {
            continue;
        }
        let w = k.sum(&ad_image(l, k)?)?;
        if w.is_full() {
            continue;
        }
        let kbar = w.complement();
        let (rows, cols) = (k.dim(), kbar.dim());
        let t0s: Vec<Matrix> = match finite_search_size(field, rows * cols, t0_limit) {
            Ok(count) => (0..count).map(|i| matrix_from_index(field, rows, cols, i)).collect(),
            Err(_) => {
                let mut first = Matrix::zeros(field, rows, cols);
                if rows > 0 && cols > 0 {
                    first.set(0, 0, field.one());
                }
                vec![first, Matrix::from_fn(field, rows, cols, |_, _| field.one())]
            }
        };
        for t0 in t0s {
            out.push(AbelianOperatorSpec {
                k: k.clone(),
                kbar: kbar.clone(),
                t0,
            });
        }
    }
    Ok(out)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::liealg::catalog;
    use crate::novikov::{check_gd, check_rmatrix, check_strong};

    fn v(field: Field, xs: &[i64]) -> Vector {
        xs.iter().map(|&x| field.from_i64(x)).collect()
    }

    #[test]
    fn heisenberg_abelian_operator() {
        let q = Field::Rationals;
        let l = catalog("heisenberg3", q, None).unwrap();
        let spec = AbelianOperatorSpec {
            k: Subspace::coordinate(q, 3, &[1, 2]),
            kbar: Subspace::coordinate(q, 3, &[0]),
            t0: Matrix::from_i64(q, &[&[1], &[0]]),
        };
        let t = abelian_operator(&l, &spec).unwrap();
        assert_eq!(t.image_of_basis(0), v(q, &[0, 1, 0]));
        assert!(t.image_of_basis(1).iter().all(Scalar::is_zero));
        assert!(t.image_of_basis(2).iter().all(Scalar::is_zero));
        let p = product_from_operator(&l, &t).unwrap();
        assert_eq!(p.constants().len(), 1);
        assert_eq!(p.basis_product(0, 0), v(q, &[0, 0, 1]));
    }

    #[test]
    fn zero_t0_gives_zero_operator() {
        let q = Field::Rationals;
        let l = sl2(q);
        let spec = AbelianOperatorSpec {
            k: Subspace::coordinate(q, 3, &[1]),
            kbar: Subspace::coordinate(q, 3, &[2]),
            t0: Matrix::zeros(q, 1, 1),
        };
        assert!(abelian_operator(&l, &spec).unwrap().is_zero());
    }

    #[test]
    fn sl2_abelian_operator_is_the_example() {
        let q = Field::Rationals;
        let l = sl2(q);
        let spec = AbelianOperatorSpec {
            k: Subspace::coordinate(q, 3, &[1]),
            kbar: Subspace::coordinate(q, 3, &[2]),
            t0: Matrix::from_i64(q, &[&[1]]),
        };
        let t = abelian_operator(&l, &spec).unwrap();
        assert_eq!(t, sl2_example(q).unwrap().1);
    }

    #[test]
    fn spec_violations() {
        let q = Field::Rationals;
        let l = sl2(q);
        let bad_k = AbelianOperatorSpec {
            k: Subspace::coordinate(q, 3, &[1, 2]),
            kbar: Subspace::coordinate(q, 3, &[0]),
            t0: Matrix::zeros(q, 2, 1),
        };
        assert_eq!(abelian_operator(&l, &bad_k), Err(Error::AbelianityViolated));
        let improper = AbelianOperatorSpec {
            k: Subspace::coordinate(q, 3, &[0]),
            kbar: Subspace::zero(q, 3),
            t0: Matrix::zeros(q, 1, 0),
        };
        assert_eq!(abelian_operator(&l, &improper), Err(Error::NotProper));
        let not_complement = AbelianOperatorSpec {
            k: Subspace::coordinate(q, 3, &[1]),
            kbar: Subspace::coordinate(q, 3, &[0]),
            t0: Matrix::zeros(q, 1, 1),
        };
        assert_eq!(abelian_operator(&l, &not_complement), Err(Error::NotComplement));
    }

    #[test]
    fn sigma_products() {
        let q = Field::Rationals;
        let l = LieAlgebra::abelian(q, 2);
        let p = sigma_product(&l, &v(q, &[1, 0])).unwrap();
        assert_eq!(p.basis_product(0, 0), v(q, &[1, 0]));
        assert_eq!(p.basis_product(1, 0), v(q, &[0, 1]));
        assert!(p.basis_product(0, 1).iter().all(Scalar::is_zero));
        assert!(p.basis_product(1, 1).iter().all(Scalar::is_zero));
        assert!(sigma_product(&l, &v(q, &[0, 0])).unwrap().is_zero());
        assert_eq!(sigma_product(&sl2(q), &v(q, &[1, 0, 0])), Err(Error::NotAbelian));

        let f = Field::Prime(5);
        let l = LieAlgebra::abelian(f, 3);
        let p = sigma_product(&l, &v(f, &[0, 2, 0])).unwrap();
        for i in 0..3 {
            let mut expected = zero_vector(f, 3);
            expected[i] = f.from_i64(2);
            assert_eq!(p.basis_product(i, 1), expected);
        }
        assert_eq!(p.constants().len(), 3);
        assert!(check_right_commutative(&p).passed);
        assert!(check_gd(&l, &p).unwrap().passed);
    }

    #[test]
    fn existence_on_sl2() {
        let q = Field::Rationals;
        let l = sl2(q);
        let e = existence(&l, 0, 100).unwrap();
        let (_, t, p) = sl2_example(q).unwrap();
        assert_eq!(e.witness, ExistenceWitness::Operator(t));
        assert_eq!(e.product, p);
        match e.certificate {
            Certificate::RankOne { u0, v0, v0_square, candidates_examined, .. } => {
                assert_eq!(u0, v(q, &[0, 1, 0]));
                assert_eq!(v0, v(q, &[0, 0, 1]));
                assert_eq!(v0_square, v(q, &[-1, 0, 0]));
                assert_eq!(candidates_examined, 2);
            }
            _ => panic!("expected rank-one certificate"),
        }
    }

    #[test]
    fn existence_on_heisenberg() {
        let q = Field::Rationals;
        let l = catalog("heisenberg3", q, None).unwrap();
        let e = existence(&l, 0, 100).unwrap();
        match &e.certificate {
            Certificate::RankOne { u0, v0, v0_square, bracket_u0_v0, repaired, .. } => {
                assert_eq!(u0, &v(q, &[1, 0, 0]));
                assert_eq!(v0, &v(q, &[0, 1, 0]));
                assert_eq!(v0_square, &v(q, &[0, 0, -1]));
                assert_eq!(bracket_u0_v0, &v(q, &[0, 0, 1]));
                assert!(!repaired);
            }
            _ => panic!("expected rank-one certificate"),
        }
        assert!(check_gd(&l, &e.product).unwrap().passed);
    }

    #[test]
    fn existence_on_so3_over_q_is_not_found() {
        let l = catalog("so3", Field::Rationals, None).unwrap();
        assert_eq!(existence(&l, 7, 1000).unwrap_err(), Error::NotFound { budget: 1000 });
    }

    #[test]
    fn existence_on_abelian() {
        let f = Field::Prime(3);
        let l = LieAlgebra::abelian(f, 2);
        let e = existence(&l, 0, 0).unwrap();
        assert_eq!(e.witness, ExistenceWitness::Sigma(v(f, &[1, 0])));
        assert!(!e.product.is_zero());
    }

    #[test]
    fn existence_rejects_non_lie() {
        let q = Field::Rationals;
        let l = LieAlgebra::from_integer_table(q, &["x", "y", "z"], &[(0, 1, 0, 1), (0, 2, 1, 1)]);
        assert_eq!(existence(&l, 0, 10).unwrap_err(), Error::InvalidLie);
    }

    #[test]
    fn sl2_example_fields() {
        let (_, _, p) = sl2_example(Field::Rationals).unwrap();
        assert_eq!(p.basis_product(2, 0), v(Field::Rationals, &[0, 4, 0]));
        let f = Field::Prime(7);
        let (_, _, p) = sl2_example(f).unwrap();
        assert_eq!(p.basis_product(2, 0)[1].residue(), Some(4));
        assert_eq!(p.basis_product(0, 2)[1].residue(), Some(5));
        assert_eq!(sl2_example(Field::Prime(2)).unwrap_err(), Error::BadCharacteristic(2));
    }

    #[test]
    fn heights_small_n() {
        let q = Field::Rationals;
        let h2 = sln_heights(2, q).unwrap();
        assert_eq!((h2.heights.k, h2.heights.ell), (1, 1));
        assert_eq!(h2.heights.k_space, Subspace::coordinate(q, 3, &[1]));
        assert_eq!(abelian_operator(&h2.algebra, &h2.spec).unwrap(), sl2_example(q).unwrap().1);

        let h3 = sln_heights(3, q).unwrap();
        assert_eq!((h3.heights.k, h3.heights.ell), (2, 2));
        assert_eq!(h3.heights.k_space, Subspace::coordinate(q, 8, &[sln_offdiag_index(3, 0, 2)]));

        let h4 = sln_heights(4, q).unwrap();
        assert_eq!((h4.heights.k, h4.heights.ell), (3, 2));
        let idx = |i, j| sln_offdiag_index(4, i, j);
        assert_eq!(h4.heights.k_space, Subspace::coordinate(q, 15, &[idx(0, 2), idx(1, 3), idx(0, 3)]));
        assert!(h4.heights.low_space.intersect(&h4.heights.k_plus_ad).unwrap().is_zero());
        assert!(sln_heights(1, q).is_err());
    }

    #[test]
    fn default_height_operators_pass() {
        for n in 2..=4 {
            let h = sln_heights(n, Field::Rationals).unwrap();
            let t = abelian_operator(&h.algebra, &h.spec).unwrap();
            assert!(!t.is_zero());
            assert!(check_rmatrix(&h.algebra, &t).unwrap().passed);
            assert!(check_strong(&h.algebra, &t).unwrap().passed);
        }
    }

    #[test]
    fn enumeration_counts_and_caps() {
        let l = catalog("aff2", Field::Prime(2), None).unwrap();
        let all: Vec<_> = enumerate_operators(&l, OperatorFilter::All, DEFAULT_ENUMERATION_CAP).unwrap().collect();
        assert_eq!(all.len(), 16);
        assert_eq!(all, collect_operators(&l, OperatorFilter::All, DEFAULT_ENUMERATION_CAP).unwrap());
        let l3 = catalog("so3", Field::Prime(3), None).unwrap();
        assert!(matches!(enumerate_operators(&l3, OperatorFilter::All, 1000), Err(Error::CapExceeded { .. })));
        let lq = catalog("aff2", Field::Rationals, None).unwrap();
        assert!(matches!(enumerate_operators(&lq, OperatorFilter::All, 1000), Err(Error::NotFiniteField)));
    }

    #[test]
    fn lazy_and_parallel_enumerations_agree() {
        let l = catalog("aff2", Field::Prime(3), None).unwrap();
        for filter in [OperatorFilter::Rmatrix, OperatorFilter::RmatrixAndStrong] {
            let lazy: Vec<_> = enumerate_operators(&l, filter, DEFAULT_ENUMERATION_CAP).unwrap().collect();
            let eager = collect_operators(&l, filter, DEFAULT_ENUMERATION_CAP).unwrap();
            assert_eq!(lazy, eager);
        }
    }

    #[test]
    fn subspace_counts_match_gaussian_binomials() {
        // [3 choose 1]_2 = 7, [3 choose 2]_2 = 7, [4 choose 2]_3 = 130
        assert_eq!(all_subspaces(Field::Prime(2), 3, 1).unwrap().len(), 7);
        assert_eq!(all_subspaces(Field::Prime(2), 3, 2).unwrap().len(), 7);
        let s = all_subspaces(Field::Prime(3), 4, 2).unwrap();
        assert_eq!(s.len(), 130);
        let unique: std::collections::HashSet<_> = s.iter().collect();
        assert_eq!(unique.len(), 130);
        assert!(all_subspaces(Field::Rationals, 3, 1).is_err());
    }
}
