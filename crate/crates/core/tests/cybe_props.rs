mod common;

use common::{matrix, scalar};
use gdalg::cybe::{
    check_form_invariant, cybe_audit, cybe_defect, rep_defect, t_from_tensor, tensor3_image, BilinearForm, Representation,
    TensorElement,
};
use gdalg::liealg::{catalog, sl2};
use gdalg::novikov::is_rmatrix;
use gdalg::{Field, Matrix};
use proptest::prelude::*;

const F7: Field = Field::Prime(7);

proptest! {
    #![proptest_config(ProptestConfig::with_cases(64))]

    #[test]
    fn defect_scales_quadratically(r in matrix(F7, 3, 3), c in scalar(F7)) {
        let l = catalog("so3", F7, None).unwrap();
        let x = TensorElement::new(r.clone()).unwrap();
        let cx = TensorElement::new(r.scale(&c)).unwrap();
        prop_assert_eq!(cybe_defect(&l, &cx).unwrap(), cybe_defect(&l, &x).unwrap().scale(&(&c * &c)));
    }

    #[test]
    fn functoriality_on_adjoint(r in matrix(F7, 3, 3), which in 0usize..2) {
        let l = if which == 0 { sl2(F7) } else { catalog("so3", F7, None).unwrap() };
        let rep = Representation::adjoint(&l).unwrap();
        let x = TensorElement::new(r).unwrap();
        prop_assert_eq!(rep_defect(&rep, &x).unwrap(), tensor3_image(&rep, &cybe_defect(&l, &x).unwrap()).unwrap());
    }

    #[test]
    fn tensor_map_is_transpose(r in matrix(F7, 3, 3)) {
        let t = t_from_tensor(&TensorElement::new(r.clone()).unwrap());
        prop_assert_eq!(t.matrix(), &r.transpose());
    }
}

#[test]
fn sl3_defining_functoriality() {
    let q = Field::Rationals;
    let l = catalog("sl3", q, None).unwrap();
    let rep = Representation::defining_sln(&l, 3).unwrap();
    let r = Matrix::from_fn(q, 8, 8, |i, j| if (i * 3 + j) % 5 == 0 { q.from_i64(i as i64 - j as i64) } else { q.zero() });
    let x = TensorElement::new(r).unwrap();
    assert_eq!(rep_defect(&rep, &x).unwrap(), tensor3_image(&rep, &cybe_defect(&l, &x).unwrap()).unwrap());
}

#[test]
fn so3_identity_form_is_invariant_over_small_fields() {
    for p in [2u64, 3, 5, 7] {
        let f = Field::prime(p).unwrap();
        let r = check_form_invariant(&catalog("so3", f, None).unwrap(), &BilinearForm::identity(f, 3)).unwrap();
        assert!(r.invariance.passed && r.nondegenerate);
    }
}

#[test]
fn zero_tensor_is_in_both_classes() {
    let f = Field::Prime(2);
    let l = catalog("so3", f, None).unwrap();
    let zero = TensorElement::zero(f, 3);
    assert!(cybe_defect(&l, &zero).unwrap().is_zero());
    assert!(is_rmatrix(&l, &t_from_tensor(&zero)));
    let audit = cybe_audit(&l, &BilinearForm::identity(f, 3), 1 << 12).unwrap();
    let zero_row = vec!["0".to_string(); 9];
    assert!(!audit.only_cybe.contains(&zero_row) && !audit.only_rmatrix.contains(&zero_row));
    assert!(audit.both >= 1);
    assert_eq!(audit.total, 512);
    assert!(audit.consistency_failures.is_empty());
    assert_eq!(audit.cybe_solutions + audit.only_rmatrix.len() as u64, audit.rmatrix_solutions + audit.only_cybe.len() as u64);
}

/// The two solution classes disagree only on tensors with a symmetric part.
#[test]
fn skew_tensors_agree_on_so3() {
    for p in [2u64, 3, 5] {
        let f = Field::prime(p).unwrap();
        let l = catalog("so3", f, None).unwrap();
        for idx in 0..p.pow(3) {
            let (a, b, c) = (idx % p, (idx / p) % p, idx / (p * p));
            let r = Matrix::from_i64(f, &[&[0, a as i64, b as i64], &[-(a as i64), 0, c as i64], &[-(b as i64), -(c as i64), 0]]);
            let x = TensorElement::new(r).unwrap();
            assert_eq!(cybe_defect(&l, &x).unwrap().is_zero(), is_rmatrix(&l, &t_from_tensor(&x)), "p={p} {idx}");
        }
    }
}
