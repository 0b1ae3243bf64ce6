//! Loop extension `A ⊗ F[t, t⁻¹]` of a Lie algebra carrying a compatible product,
//! with bracket
//!
//! ```text
//! [u⊗t^j, v⊗t^k] = [u,v]⊗t^(j+k) + (j·u∘v − k·v∘u)⊗t^(j+k−1)
//! ```
//!
//! Integer degrees enter the field through `Z → F`.

use std::collections::BTreeMap;

use crate::error::{Error, Result};
use crate::fieldlin::{add_vectors, axpy, is_zero_vector, scale_vector, sub_vectors, zero_vector, Field, Scalar, Vector};
use crate::liealg::LieAlgebra;
use crate::novikov::{same_shape, BilinearProduct, GDBialgebra};
use crate::par;
use crate::report::{CheckReport, Collector, DEFAULT_WITNESS_CAP};
use crate::table::BilinearTable;

pub const DEFAULT_WINDOW: i64 = 3;
pub const MAX_DEGREE: i64 = 1 << 31;

/// Finite sum `Σ v_d ⊗ t^d`; zero coefficient vectors are never stored.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct LoopElement {
    field: Field,
    dim: usize,
    terms: BTreeMap<i64, Vector>,
}

fn check_degree(d: i64) -> Result<()> {
    if d.abs() > MAX_DEGREE {
        return Err(Error::InvalidParameter(format!("degree {d} outside ±2^31")));
    }
    Ok(())
}

impl LoopElement {
    pub fn zero(field: Field, dim: usize) -> LoopElement {
        LoopElement {
            field,
            dim,
            terms: BTreeMap::new(),
        }
    }

    /// `v ⊗ t^degree`.
    pub fn monomial(field: Field, degree: i64, v: Vector) -> Result<LoopElement> {
        let dim = v.len();
        LoopElement::from_terms(field, dim, [(degree, v)])
    }

    /// Sums the given terms; repeated degrees are added.
    pub fn from_terms(field: Field, dim: usize, terms: impl IntoIterator<Item = (i64, Vector)>) -> Result<LoopElement> {
        let mut out = LoopElement::zero(field, dim);
        for (d, v) in terms {
            check_degree(d)?;
            crate::fieldlin::check_vector(field, dim, &v)?;
            out.add_term(d, &v);
        }
        Ok(out)
    }

    fn add_term(&mut self, degree: i64, v: &[Scalar]) {
        if is_zero_vector(v) {
            return;
        }
        let slot = self.terms.entry(degree).or_insert_with(|| zero_vector(self.field, self.dim));
        for (a, b) in slot.iter_mut().zip(v) {
            *a += b;
        }
        if is_zero_vector(slot) {
            self.terms.remove(&degree);
        }
    }

    pub fn field(&self) -> Field {
        self.field
    }

    pub fn dim(&self) -> usize {
        self.dim
    }

    pub fn terms(&self) -> &BTreeMap<i64, Vector> {
        &self.terms
    }

    /// Coefficient of `t^degree` (zero vector if absent).
    pub fn coefficient(&self, degree: i64) -> Vector {
        self.terms.get(&degree).cloned().unwrap_or_else(|| zero_vector(self.field, self.dim))
    }

    pub fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn add(&self, other: &LoopElement) -> LoopElement {
        let mut out = self.clone();
        for (d, v) in &other.terms {
            out.add_term(*d, v);
        }
        out
    }

    pub fn scale(&self, c: &Scalar) -> LoopElement {
        let mut out = LoopElement::zero(self.field, self.dim);
        for (d, v) in &self.terms {
            out.add_term(*d, &scale_vector(c, v));
        }
        out
    }

    pub fn neg(&self) -> LoopElement {
        self.scale(&-self.field.one())
    }
}

/// Bracket of two loop elements, extended bilinearly from the monomial rule.
pub fn loop_bracket_raw(l: &LieAlgebra, p: &BilinearProduct, a: &LoopElement, b: &LoopElement) -> Result<LoopElement> {
    same_shape(l, p.field(), p.dim())?;
    same_shape(l, a.field, a.dim)?;
    same_shape(l, b.field, b.dim)?;
    let field = l.field();
    let mut out = LoopElement::zero(field, l.dim());
    for (&j, u) in &a.terms {
        for (&k, v) in &b.terms {
            check_degree(j + k)?;
            check_degree(j + k - 1)?;
            out.add_term(j + k, &l.bracket_unchecked(u, v));
            let mut low = scale_vector(&field.from_i64(j), &p.apply(u, v));
            axpy(&mut low, &field.from_i64(-k), &p.apply(v, u));
            out.add_term(j + k - 1, &low);
        }
    }
    Ok(out)
}

pub fn loop_bracket(g: &GDBialgebra, a: &LoopElement, b: &LoopElement) -> Result<LoopElement> {
    loop_bracket_raw(g.lie(), g.product(), a, b)
}

/// `[x,[y,z]] + [y,[z,x]] + [z,[x,y]]` computed literally with [`loop_bracket_raw`].
pub fn loop_jacobiator(l: &LieAlgebra, p: &BilinearProduct, x: &LoopElement, y: &LoopElement, z: &LoopElement) -> Result<LoopElement> {
    let t1 = loop_bracket_raw(l, p, x, &loop_bracket_raw(l, p, y, z)?)?;
    let t2 = loop_bracket_raw(l, p, y, &loop_bracket_raw(l, p, z, x)?)?;
    let t3 = loop_bracket_raw(l, p, z, &loop_bracket_raw(l, p, x, y)?)?;
    Ok(t1.add(&t2).add(&t3))
}

/// Jacobiator of `b_i⊗t^a, b_k⊗t^b, b_m⊗t^c` as a polynomial in the degrees.
/// Total degree `s = a+b+c`; the coefficient of `t^s` is constant, of `t^(s−1)`
/// linear and of `t^(s−2)` at most quadratic in `(a, b, c)`.
struct JacobiPolynomial {
    top: Vector,
    mid: [Vector; 3],
    low_lin: [Vector; 3],
    /// aa, bb, cc, ab, ac, bc
    low_quad: [Vector; 6],
}

/// `target ± b_u ⋅ x` for sparse `x`.
fn left(target: &mut [Scalar], plus: bool, table: &BilinearTable, u: usize, x: &[(usize, Scalar)]) {
    for (k, xk) in x {
        let c = if plus { xk.clone() } else { -xk };
        for (m, t) in table.get(u, *k) {
            target[*m].add_product(&c, t);
        }
    }
}

/// `target ± x ⋅ b_u` for sparse `x`.
fn right(target: &mut [Scalar], plus: bool, table: &BilinearTable, x: &[(usize, Scalar)], u: usize) {
    for (k, xk) in x {
        let c = if plus { xk.clone() } else { -xk };
        for (m, t) in table.get(*k, u) {
            target[*m].add_product(&c, t);
        }
    }
}

fn quad_slot(s: usize, t: usize) -> usize {
    match (s.min(t), s.max(t)) {
        (0, 0) => 0,
        (1, 1) => 1,
        (2, 2) => 2,
        (0, 1) => 3,
        (0, 2) => 4,
        _ => 5,
    }
}

impl JacobiPolynomial {
    fn zero(field: Field, n: usize) -> JacobiPolynomial {
        let z = zero_vector(field, n);
        JacobiPolynomial {
            top: z.clone(),
            mid: [z.clone(), z.clone(), z.clone()],
            low_lin: [z.clone(), z.clone(), z.clone()],
            low_quad: std::array::from_fn(|_| z.clone()),
        }
    }

    /// Adds `[u⊗t^a, [v⊗t^b, w⊗t^c]]` where `a, b, c` sit in slots `sa, sb, sc`.
    ///
    /// ```text
    /// t^s:     [u,[v,w]]
    /// t^(s−1): a·u∘[v,w] − (b+c)·[v,w]∘u + b·[u,v∘w] − c·[u,w∘v]
    /// t^(s−2): ab·u∘(v∘w) − ac·u∘(w∘v) − (b+c−1)(b·(v∘w)∘u − c·(w∘v)∘u)
    /// ```
    fn add_nested(&mut self, lie: &BilinearTable, prod: &BilinearTable, (u, v, w): (usize, usize, usize), (sa, sb, sc): (usize, usize, usize)) {
        let vw_bracket = lie.get(v, w);
        let vw = prod.get(v, w);
        let wv = prod.get(w, v);

        left(&mut self.top, true, lie, u, vw_bracket);

        left(&mut self.mid[sa], true, prod, u, vw_bracket);
        right(&mut self.mid[sb], false, prod, vw_bracket, u);
        right(&mut self.mid[sc], false, prod, vw_bracket, u);
        left(&mut self.mid[sb], true, lie, u, vw);
        left(&mut self.mid[sc], false, lie, u, wv);

        left(&mut self.low_quad[quad_slot(sa, sb)], true, prod, u, vw);
        left(&mut self.low_quad[quad_slot(sa, sc)], false, prod, u, wv);
        // −(b+c−1)·b·x3 = (b − b² − bc)·x3 with x3 = (v∘w)∘u
        right(&mut self.low_lin[sb], true, prod, vw, u);
        right(&mut self.low_quad[quad_slot(sb, sb)], false, prod, vw, u);
        right(&mut self.low_quad[quad_slot(sb, sc)], false, prod, vw, u);
        // (b+c−1)·c·x4 = (bc + c² − c)·x4 with x4 = (w∘v)∘u
        right(&mut self.low_quad[quad_slot(sb, sc)], true, prod, wv, u);
        right(&mut self.low_quad[quad_slot(sc, sc)], true, prod, wv, u);
        right(&mut self.low_lin[sc], false, prod, wv, u);
    }

    fn for_triple(l: &LieAlgebra, p: &BilinearProduct, i: usize, k: usize, m: usize) -> JacobiPolynomial {
        let mut poly = JacobiPolynomial::zero(l.field(), l.dim());
        let (lie, prod) = (l.table(), p.table());
        poly.add_nested(lie, prod, (i, k, m), (0, 1, 2));
        poly.add_nested(lie, prod, (k, m, i), (1, 2, 0));
        poly.add_nested(lie, prod, (m, i, k), (2, 0, 1));
        poly
    }

    fn is_zero(&self) -> bool {
        is_zero_vector(&self.top)
            && self.mid.iter().all(|v| is_zero_vector(v))
            && self.low_lin.iter().all(|v| is_zero_vector(v))
            && self.low_quad.iter().all(|v| is_zero_vector(v))
    }

    /// Coefficients of `t^s, t^(s−1), t^(s−2)` concatenated.
    fn eval(&self, field: Field, degrees: [i64; 3]) -> Vector {
        let d: Vec<Scalar> = degrees.iter().map(|&x| field.from_i64(x)).collect();
        let mut mid = zero_vector(field, self.top.len());
        let mut low = zero_vector(field, self.top.len());
        for s in 0..3 {
            axpy(&mut mid, &d[s], &self.mid[s]);
            axpy(&mut low, &d[s], &self.low_lin[s]);
        }
        let pairs = [(0, 0), (1, 1), (2, 2), (0, 1), (0, 2), (1, 2)];
        for (slot, (s, t)) in pairs.into_iter().enumerate() {
            axpy(&mut low, &(&d[s] * &d[t]), &self.low_quad[slot]);
        }
        let mut out = self.top.clone();
        out.extend(mid);
        out.extend(low);
        out
    }
}

/// Skew-symmetry and Jacobi for all `(b_i⊗t^j, b_k⊗t^l, b_m⊗t^q)` with
/// `i ≤ k ≤ m` and degrees in `[−window, window]`.
///
/// Witness indices are `[i, j, k, l, m, q]` (skew-symmetry uses the first four).
/// A Jacobi defect is the concatenation of its `t^s`, `t^(s−1)` and `t^(s−2)`
/// coefficients with `s = j+l+q`; a skew defect is that of `t^(j+l)` then `t^(j+l−1)`.
pub fn check_affine_jacobi_raw(l: &LieAlgebra, p: &BilinearProduct, window: i64) -> Result<CheckReport> {
    check_affine_jacobi_capped(l, p, window, DEFAULT_WITNESS_CAP)
}

pub fn check_affine_jacobi(g: &GDBialgebra, window: i64) -> Result<CheckReport> {
    check_affine_jacobi_raw(g.lie(), g.product(), window)
}

pub fn check_affine_jacobi_capped(l: &LieAlgebra, p: &BilinearProduct, window: i64, cap: usize) -> Result<CheckReport> {
    same_shape(l, p.field(), p.dim())?;
    if !(1..=MAX_DEGREE / 4).contains(&window) {
        return Err(Error::InvalidParameter(format!("window {window} must lie in 1..=2^29")));
    }
    let field = l.field();
    let n = l.dim();
    let degrees: Vec<i64> = (-window..=window).collect();

    let mut triples = Vec::new();
    for i in 0..n {
        for k in i..n {
            for m in k..n {
                triples.push((i, k, m));
            }
        }
    }
    let jacobi = par::map_reduce(
        triples.len() as u64,
        || Collector::new(cap),
        |t| {
            let (i, k, m) = triples[t as usize];
            let mut acc = Collector::new(cap);
            let poly = JacobiPolynomial::for_triple(l, p, i, k, m);
            if poly.is_zero() {
                return acc;
            }
            for &a in &degrees {
                for &b in &degrees {
                    for &c in &degrees {
                        let d = poly.eval(field, [a, b, c]);
                        acc.record("affine_jacobi", vec![i as i64, a, k as i64, b, m as i64, c], d);
                    }
                }
            }
            acc
        },
        Collector::merge,
    );

    // [x,y] + [y,x] = top ⊗ t^(a+b) + (a·lin_a + b·lin_b) ⊗ t^(a+b−1)
    let mut skew = Collector::new(cap);
    for i in 0..n {
        for k in i..n {
            let top = add_vectors(&l.basis_bracket(i, k), &l.basis_bracket(k, i));
            let (pik, pki) = (p.basis_product(i, k), p.basis_product(k, i));
            let lin_a = sub_vectors(&pik, &pik);
            let lin_b = sub_vectors(&pki, &pki);
            if [&top, &lin_a, &lin_b].iter().all(|v| is_zero_vector(v)) {
                continue;
            }
            for &a in &degrees {
                for &b in &degrees {
                    let mut low = scale_vector(&field.from_i64(a), &lin_a);
                    axpy(&mut low, &field.from_i64(b), &lin_b);
                    let mut d = top.clone();
                    d.extend(low);
                    skew.record("affine_skew", vec![i as i64, a, k as i64, b], d);
                }
            }
        }
    }
    Ok(jacobi.merge(skew).finish())
}

/// Literal check over the same window through nested [`loop_bracket_raw`] calls.
/// Quadratically slower than [`check_affine_jacobi_raw`]; meant for small algebras.
pub fn check_affine_jacobi_direct(l: &LieAlgebra, p: &BilinearProduct, window: i64, cap: usize) -> Result<CheckReport> {
    same_shape(l, p.field(), p.dim())?;
    let field = l.field();
    let n = l.dim();
    let mono = |i: usize, d: i64| LoopElement::monomial(field, d, l.basis_vector(i));
    let mut acc = Collector::new(cap);
    for i in 0..n {
        for k in i..n {
            for a in -window..=window {
                for b in -window..=window {
                    let (x, y) = (mono(i, a)?, mono(k, b)?);
                    let s = loop_bracket_raw(l, p, &x, &y)?.add(&loop_bracket_raw(l, p, &y, &x)?);
                    let mut d = s.coefficient(a + b);
                    d.extend(s.coefficient(a + b - 1));
                    acc.record("affine_skew", vec![i as i64, a, k as i64, b], d);
                    for m in k..n {
                        for c in -window..=window {
                            let z = mono(m, c)?;
                            let j = loop_jacobiator(l, p, &x, &y, &z)?;
                            let s = a + b + c;
                            let mut d = j.coefficient(s);
                            d.extend(j.coefficient(s - 1));
                            d.extend(j.coefficient(s - 2));
                            acc.record("affine_jacobi", vec![i as i64, a, k as i64, b, m as i64, c], d);
                        }
                    }
                }
            }
        }
    }
    Ok(acc.finish())
}

/// Collapses a Jacobi defect from [`check_affine_jacobi_raw`] into a loop element.
pub fn defect_as_loop(field: Field, n: usize, total_degree: i64, defect: &[Scalar]) -> Result<LoopElement> {
    let parts = defect.chunks(n).enumerate().map(|(s, v)| (total_degree - s as i64, v.to_vec()));
    LoopElement::from_terms(field, n, parts)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::construct::sl2_example;
    use crate::fieldlin::unit_vector;
    use crate::liealg::catalog;

    fn sl2_gd(field: Field) -> (LieAlgebra, BilinearProduct) {
        let (l, _, p) = sl2_example(field).unwrap();
        (l, p)
    }

    #[test]
    fn degree_zero_is_the_lie_bracket() {
        let q = Field::Rationals;
        let (l, p) = sl2_gd(q);
        let x = LoopElement::monomial(q, 0, unit_vector(q, 3, 1)).unwrap();
        let y = LoopElement::monomial(q, 0, unit_vector(q, 3, 2)).unwrap();
        let b = loop_bracket_raw(&l, &p, &x, &y).unwrap();
        assert_eq!(b, LoopElement::monomial(q, 0, unit_vector(q, 3, 0)).unwrap());
    }

    #[test]
    fn sl2_mixed_degree_example() {
        // [e-⊗t, h⊗t⁰] = 2e-⊗t + 4e+⊗t⁰
        let q = Field::Rationals;
        let (l, p) = sl2_gd(q);
        let x = LoopElement::monomial(q, 1, unit_vector(q, 3, 2)).unwrap();
        let y = LoopElement::monomial(q, 0, unit_vector(q, 3, 0)).unwrap();
        let b = loop_bracket_raw(&l, &p, &x, &y).unwrap();
        let want = LoopElement::from_terms(
            q,
            3,
            [(1, scale_vector(&q.from_i64(2), &unit_vector(q, 3, 2))), (0, scale_vector(&q.from_i64(4), &unit_vector(q, 3, 1)))],
        )
        .unwrap();
        assert_eq!(b, want);
    }

    #[test]
    fn self_bracket_vanishes() {
        let q = Field::Rationals;
        let (l, p) = sl2_gd(q);
        let a = LoopElement::from_terms(
            q,
            3,
            [(-2, vec![q.from_i64(1), q.from_i64(-3), q.from_i64(2)]), (1, vec![q.from_i64(0), q.from_i64(5), q.from_i64(1)])],
        )
        .unwrap();
        assert!(loop_bracket_raw(&l, &p, &a, &a).unwrap().is_zero());
    }

    #[test]
    fn windows() {
        let q = Field::Rationals;
        let (l, p) = sl2_gd(q);
        assert!(check_affine_jacobi_raw(&l, &p, 3).unwrap().passed);
        let so3 = catalog("so3", q, None).unwrap();
        assert!(check_affine_jacobi_raw(&so3, &BilinearProduct::zero(q, 3), 3).unwrap().passed);
        let bad = p.with_constant(0, 0, 0, q.one());
        let r = check_affine_jacobi_raw(&l, &bad, 3).unwrap();
        assert!(!r.passed);
        assert!(!r.witnesses.is_empty());
        assert!(check_affine_jacobi_raw(&l, &p, 0).is_err());
    }

    #[test]
    fn polynomial_route_matches_literal_route() {
        let f = Field::Prime(7);
        let (l, p) = sl2_gd(f);
        let bad = p.with_constant(0, 0, 0, f.one()).with_constant(1, 2, 1, f.from_i64(3));
        for prod in [&p, &bad] {
            let fast = check_affine_jacobi_capped(&l, prod, 2, 100_000).unwrap();
            let slow = check_affine_jacobi_direct(&l, prod, 2, 100_000).unwrap();
            assert_eq!(fast, slow);
        }
    }

    #[test]
    fn defect_roundtrip() {
        let q = Field::Rationals;
        let (l, p) = sl2_gd(q);
        let bad = p.with_constant(0, 0, 0, q.one());
        let r = check_affine_jacobi_raw(&l, &bad, 1).unwrap();
        let w = r.witnesses.iter().find(|w| w.axiom == "affine_jacobi").unwrap();
        let ix = &w.indices;
        let mono = |i: i64, d: i64| LoopElement::monomial(q, d, l.basis_vector(i as usize)).unwrap();
        let direct = loop_jacobiator(&l, &bad, &mono(ix[0], ix[1]), &mono(ix[2], ix[3]), &mono(ix[4], ix[5])).unwrap();
        assert_eq!(defect_as_loop(q, 3, ix[1] + ix[3] + ix[5], &w.defect).unwrap(), direct);
        assert!(direct.add(&direct.neg()).is_zero());
    }
}
