#![allow(dead_code)]

use gdalg::fieldlin::Vector;
use gdalg::{Field, Matrix, Scalar};
use proptest::prelude::*;

pub const GF5: Field = Field::Prime(5);
pub const Q: Field = Field::Rationals;

/// Small rationals `a/b` with `|a| <= 4`, `1 <= b <= 3`.
pub fn scalar(field: Field) -> BoxedStrategy<Scalar> {
    match field {
        Field::Rationals => (-4i64..=4, 1i64..=3)
            .prop_map(|(a, b)| Field::Rationals.from_i64(a) * Field::Rationals.from_i64(b).inv().unwrap())
            .boxed(),
        Field::Prime(p) => (0..p as i64).prop_map(move |a| Field::Prime(p).from_i64(a)).boxed(),
    }
}

pub fn vector(field: Field, n: usize) -> BoxedStrategy<Vector> {
    prop::collection::vec(scalar(field), n).boxed()
}

/// Matrix with entries biased towards zero so that ranks vary.
pub fn matrix(field: Field, rows: usize, cols: usize) -> BoxedStrategy<Matrix> {
    let entry = prop_oneof![2 => Just(field.zero()), 3 => scalar(field)];
    prop::collection::vec(entry, rows * cols)
        .prop_map(move |e| Matrix::from_fn(field, rows, cols, |i, j| e[i * cols + j].clone()))
        .boxed()
}

pub fn fields() -> impl Strategy<Value = Field> {
    prop_oneof![Just(Q), Just(GF5)]
}
