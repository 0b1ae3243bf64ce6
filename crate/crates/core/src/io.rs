//! Canonical JSON files for algebras, operators, products, tensors and loop elements.
//!
//! Scalars are strings (`"3/4"`, `"-2"`, residues as `"0".."p-1"`). Objects are
//! written with sorted keys, sparse rows sorted by index and reduced scalars, so
//! saving a loaded canonical file reproduces it byte for byte.

use std::path::Path;

use serde_json::{json, Map, Value};

use crate::construct::{AbelianOperatorSpec, Certificate, Existence, ExistenceWitness, HeightConstruction};
use crate::cybe::{BilinearForm, TensorElement};
use crate::error::{Error, Result};
use crate::fieldlin::{Field, Matrix, Scalar, Subspace};
use crate::liealg::LieAlgebra;
use crate::novikov::{BilinearProduct, LinearOperator};
use crate::affine::LoopElement;

pub const OPERATOR_CONVENTION: &str = "T(b_j)=sum_i M[i][j] b_i";

/// Pretty-printed JSON with a trailing newline.
pub fn to_canonical_string(v: &Value) -> String {
    let mut s = serde_json::to_string_pretty(v).expect("values always serialize");
    s.push('\n');
    s
}

/// Writes through a temporary file in the same directory, then renames.
pub fn write_atomic(path: &Path, contents: &str) -> Result<()> {
    let io = |e: std::io::Error| Error::Io(format!("{}: {e}", path.display()));
    let name = path.file_name().ok_or_else(|| Error::Io(format!("{}: not a file path", path.display())))?;
    let tmp = path.with_file_name(format!(".{}.tmp", name.to_string_lossy()));
    std::fs::write(&tmp, contents).map_err(io)?;
    std::fs::rename(&tmp, path).map_err(io)
}

pub fn read_json(path: &Path) -> Result<Value> {
    let text = std::fs::read_to_string(path).map_err(|e| Error::Io(format!("{}: {e}", path.display())))?;
    serde_json::from_str(&text).map_err(|e| Error::Schema {
        path: format!("{}:{}:{}", path.display(), e.line(), e.column()),
        message: e.to_string(),
    })
}

pub fn save(path: &Path, v: &Value) -> Result<()> {
    write_atomic(path, &to_canonical_string(v))
}

/// Read-only view into a JSON document that remembers where it is.
struct Node<'a> {
    path: String,
    value: &'a Value,
}

impl<'a> Node<'a> {
    fn root(value: &'a Value) -> Node<'a> {
        Node {
            path: "$".to_string(),
            value,
        }
    }

    fn err(&self, message: impl Into<String>) -> Error {
        Error::Schema {
            path: self.path.clone(),
            message: message.into(),
        }
    }

    fn wrap(&self, e: Error) -> Error {
        match e {
            Error::Schema { .. } => e,
            other => self.err(format!("{} ({})", other, other.invariant())),
        }
    }

    fn object(&self, allowed: &[&str]) -> Result<&'a Map<String, Value>> {
        let map = self.value.as_object().ok_or_else(|| self.err("expected an object"))?;
        if let Some(k) = map.keys().find(|k| !allowed.contains(&k.as_str())) {
            return Err(self.err(format!("unexpected key {k:?}")));
        }
        Ok(map)
    }

    fn key(&self, name: &str) -> Result<Node<'a>> {
        let map = self.value.as_object().ok_or_else(|| self.err("expected an object"))?;
        let value = map.get(name).ok_or_else(|| self.err(format!("missing key {name:?}")))?;
        Ok(Node {
            path: format!("{}.{name}", self.path),
            value,
        })
    }

    fn items(&self) -> Result<Vec<Node<'a>>> {
        let arr = self.value.as_array().ok_or_else(|| self.err("expected an array"))?;
        Ok(arr
            .iter()
            .enumerate()
            .map(|(i, value)| Node {
                path: format!("{}[{i}]", self.path),
                value,
            })
            .collect())
    }

    fn uint(&self) -> Result<u64> {
        self.value.as_u64().ok_or_else(|| self.err("expected a non-negative integer"))
    }

    fn int(&self) -> Result<i64> {
        self.value.as_i64().ok_or_else(|| self.err("expected an integer"))
    }

    fn index(&self, dim: usize) -> Result<usize> {
        let i = self.uint()? as usize;
        if i >= dim {
            return Err(self.err(format!("index {i} out of range for dimension {dim}")));
        }
        Ok(i)
    }

    fn string(&self) -> Result<&'a str> {
        self.value.as_str().ok_or_else(|| self.err("expected a string"))
    }

    fn scalar(&self, field: Field) -> Result<Scalar> {
        field.parse(self.string()?).map_err(|e| self.wrap(e))
    }

    fn vector(&self, field: Field, dim: usize) -> Result<Vec<Scalar>> {
        let items = self.items()?;
        if items.len() != dim {
            return Err(self.err(format!("expected {dim} entries, found {}", items.len())));
        }
        items.iter().map(|n| n.scalar(field)).collect()
    }

    fn matrix(&self, field: Field, dim: usize) -> Result<Matrix> {
        let rows = self.items()?;
        if rows.len() != dim {
            return Err(self.err(format!("expected {dim} rows, found {}", rows.len())));
        }
        let rows = rows.iter().map(|r| r.vector(field, dim)).collect::<Result<Vec<_>>>()?;
        Matrix::from_rows(field, dim, rows).map_err(|e| self.wrap(e))
    }
}

pub fn field_json(field: Field) -> Value {
    match field {
        Field::Rationals => json!({"type": "Q"}),
        Field::Prime(p) => json!({"type": "GF", "p": p}),
    }
}

fn parse_field(node: &Node) -> Result<Field> {
    let map = node.object(&["type", "p"])?;
    match node.key("type")?.string()? {
        "Q" => {
            if map.contains_key("p") {
                return Err(node.err("the rationals take no \"p\""));
            }
            Ok(Field::Rationals)
        }
        "GF" => {
            let p = node.key("p")?;
            Field::prime(p.uint()?).map_err(|e| p.wrap(e))
        }
        other => Err(node.key("type")?.err(format!("unknown field type {other:?}"))),
    }
}

/// Field descriptor as written on the command line: `q`, `Q` or `gf:p`.
pub fn parse_field_flag(text: &str) -> Result<Field> {
    let t = text.trim();
    if t.eq_ignore_ascii_case("q") {
        return Ok(Field::Rationals);
    }
    let lower = t.to_ascii_lowercase();
    let p = lower
        .strip_prefix("gf:")
        .or_else(|| lower.strip_prefix("gf"))
        .and_then(|s| s.parse::<u64>().ok())
        .ok_or_else(|| Error::InvalidParameter(format!("field {text:?} must be q or gf:<p>")))?;
    Field::prime(p)
}

pub fn scalar_json(c: &Scalar) -> Value {
    Value::String(c.to_string())
}

pub fn vector_json(v: &[Scalar]) -> Value {
    Value::Array(v.iter().map(scalar_json).collect())
}

pub fn matrix_json(m: &Matrix) -> Value {
    Value::Array(m.row_vectors().map(vector_json).collect())
}

pub fn subspace_json(s: &Subspace) -> Value {
    json!({
        "dim": s.dim(),
        "basis": Value::Array(s.basis_vectors().map(vector_json).collect()),
    })
}

fn sparse_rows_json<'a>(constants: impl Iterator<Item = (&'a (usize, usize, usize), &'a Scalar)>) -> Value {
    let mut rows: Vec<Value> = Vec::new();
    let mut current: Option<(usize, usize)> = None;
    let mut terms: Vec<Value> = Vec::new();
    let flush = |rows: &mut Vec<Value>, current: Option<(usize, usize)>, terms: &mut Vec<Value>| {
        if let Some((i, j)) = current {
            rows.push(json!({"i": i, "j": j, "terms": std::mem::take(terms)}));
        }
    };
    for (&(i, j, k), c) in constants {
        if current != Some((i, j)) {
            flush(&mut rows, current, &mut terms);
            current = Some((i, j));
        }
        terms.push(json!({"k": k, "c": scalar_json(c)}));
    }
    flush(&mut rows, current, &mut terms);
    Value::Array(rows)
}

type SparseRow = (usize, usize, Vec<(usize, Scalar)>);

fn parse_sparse_rows(node: &Node, field: Field, dim: usize) -> Result<Vec<SparseRow>> {
    node.items()?
        .iter()
        .map(|row| {
            row.object(&["i", "j", "terms"])?;
            let i = row.key("i")?.index(dim)?;
            let j = row.key("j")?.index(dim)?;
            let terms = row
                .key("terms")?
                .items()?
                .iter()
                .map(|t| {
                    t.object(&["k", "c"])?;
                    Ok((t.key("k")?.index(dim)?, t.key("c")?.scalar(field)?))
                })
                .collect::<Result<Vec<_>>>()?;
            Ok((i, j, terms))
        })
        .collect()
}

fn header(node: &Node, allowed: &[&str]) -> Result<(Field, usize)> {
    node.object(allowed)?;
    let field = parse_field(&node.key("field")?)?;
    let dim = node.key("dim")?.uint()? as usize;
    Ok((field, dim))
}

pub fn algebra_json(l: &LieAlgebra) -> Value {
    json!({
        "field": field_json(l.field()),
        "dim": l.dim(),
        "basis": l.basis_names(),
        "brackets": sparse_rows_json(l.constants().iter()),
    })
}

pub fn parse_algebra(v: &Value) -> Result<LieAlgebra> {
    let root = Node::root(v);
    let (field, dim) = header(&root, &["field", "dim", "basis", "brackets"])?;
    let basis = root.key("basis")?;
    let names = basis.items()?.iter().map(|n| n.string().map(str::to_string)).collect::<Result<Vec<_>>>()?;
    if names.len() != dim {
        return Err(basis.err(format!("expected {dim} names, found {}", names.len())));
    }
    let brackets = root.key("brackets")?;
    let rows = parse_sparse_rows(&brackets, field, dim)?;
    LieAlgebra::new(field, names, rows).map_err(|e| brackets.wrap(e))
}

pub fn operator_json(t: &LinearOperator) -> Value {
    json!({
        "field": field_json(t.field()),
        "dim": t.dim(),
        "convention": OPERATOR_CONVENTION,
        "matrix": matrix_json(t.matrix()),
    })
}

pub fn parse_operator(v: &Value) -> Result<LinearOperator> {
    let root = Node::root(v);
    let (field, dim) = header(&root, &["field", "dim", "convention", "matrix"])?;
    let conv = root.key("convention")?;
    if conv.string()? != OPERATOR_CONVENTION {
        return Err(conv.err(format!("convention must be {OPERATOR_CONVENTION:?}")));
    }
    let m = root.key("matrix")?;
    LinearOperator::new(m.matrix(field, dim)?).map_err(|e| m.wrap(e))
}

pub fn product_json(p: &BilinearProduct) -> Value {
    json!({
        "field": field_json(p.field()),
        "dim": p.dim(),
        "products": sparse_rows_json(p.constants().iter()),
    })
}

pub fn parse_product(v: &Value) -> Result<BilinearProduct> {
    let root = Node::root(v);
    let (field, dim) = header(&root, &["field", "dim", "products"])?;
    let rows = root.key("products")?;
    let parsed = parse_sparse_rows(&rows, field, dim)?;
    BilinearProduct::new(field, dim, parsed).map_err(|e| rows.wrap(e))
}

pub fn tensor_json(x: &TensorElement) -> Value {
    json!({
        "field": field_json(x.field()),
        "dim": x.dim(),
        "r": matrix_json(x.coefficients()),
    })
}

pub fn parse_tensor(v: &Value) -> Result<TensorElement> {
    let root = Node::root(v);
    let (field, dim) = header(&root, &["field", "dim", "r"])?;
    let r = root.key("r")?;
    TensorElement::new(r.matrix(field, dim)?).map_err(|e| r.wrap(e))
}

pub fn loop_element_json(a: &LoopElement) -> Value {
    let terms: Vec<Value> = a
        .terms()
        .iter()
        .map(|(d, v)| json!({"degree": d, "vector": vector_json(v)}))
        .collect();
    Value::Array(terms)
}

/// `{"field", "dim", "elements": [[{"degree", "vector"}...], ...]}`.
pub fn loop_elements_json(field: Field, dim: usize, elements: &[LoopElement]) -> Value {
    json!({
        "field": field_json(field),
        "dim": dim,
        "elements": Value::Array(elements.iter().map(loop_element_json).collect()),
    })
}

pub fn parse_loop_elements(v: &Value) -> Result<(Field, usize, Vec<LoopElement>)> {
    let root = Node::root(v);
    let (field, dim) = header(&root, &["field", "dim", "elements"])?;
    let elements = root
        .key("elements")?
        .items()?
        .iter()
        .map(|el| {
            let terms = el
                .items()?
                .iter()
                .map(|t| {
                    t.object(&["degree", "vector"])?;
                    Ok((t.key("degree")?.int()?, t.key("vector")?.vector(field, dim)?))
                })
                .collect::<Result<Vec<_>>>()?;
            LoopElement::from_terms(field, dim, terms).map_err(|e| el.wrap(e))
        })
        .collect::<Result<Vec<_>>>()?;
    Ok((field, dim, elements))
}

pub fn form_json(b: &BilinearForm) -> Value {
    json!({
        "field": field_json(b.gram().field()),
        "dim": b.dim(),
        "gram": matrix_json(b.gram()),
    })
}

pub fn parse_form(v: &Value) -> Result<BilinearForm> {
    let root = Node::root(v);
    let (field, dim) = header(&root, &["field", "dim", "gram"])?;
    let g = root.key("gram")?;
    BilinearForm::new(g.matrix(field, dim)?).map_err(|e| g.wrap(e))
}

fn parse_span(node: &Node, field: Field, dim: usize) -> Result<Subspace> {
    let vectors = node.items()?.iter().map(|v| v.vector(field, dim)).collect::<Result<Vec<_>>>()?;
    Subspace::span(field, dim, &vectors).map_err(|e| node.wrap(e))
}

/// `K` and `Kbar` are spanning lists, stored in canonical form; `t0` is
/// `dim K x dim Kbar` in the canonical bases.
pub fn abelian_spec_json(s: &AbelianOperatorSpec) -> Value {
    json!({
        "field": field_json(s.k.field()),
        "dim": s.k.ambient_dim(),
        "k": Value::Array(s.k.basis_vectors().map(vector_json).collect()),
        "kbar": Value::Array(s.kbar.basis_vectors().map(vector_json).collect()),
        "t0": matrix_json(&s.t0),
    })
}

pub fn parse_abelian_spec(v: &Value) -> Result<AbelianOperatorSpec> {
    let root = Node::root(v);
    let (field, dim) = header(&root, &["field", "dim", "k", "kbar", "t0"])?;
    let k = parse_span(&root.key("k")?, field, dim)?;
    let kbar = parse_span(&root.key("kbar")?, field, dim)?;
    let t0n = root.key("t0")?;
    let rows = t0n.items()?;
    if rows.len() != k.dim() {
        return Err(t0n.err(format!("expected {} rows (dim K), found {}", k.dim(), rows.len())));
    }
    let rows = rows.iter().map(|r| r.vector(field, kbar.dim())).collect::<Result<Vec<_>>>()?;
    let t0 = Matrix::from_rows(field, kbar.dim(), rows).map_err(|e| t0n.wrap(e))?;
    Ok(AbelianOperatorSpec { k, kbar, t0 })
}

pub fn load_form(path: &Path) -> Result<BilinearForm> {
    parse_form(&read_json(path)?).map_err(|e| with_file(path, e))
}

pub fn load_abelian_spec(path: &Path) -> Result<AbelianOperatorSpec> {
    parse_abelian_spec(&read_json(path)?).map_err(|e| with_file(path, e))
}

pub fn certificate_json(c: &Certificate) -> Value {
    match c {
        Certificate::Abelian { sigma } => json!({"kind": "abelian", "sigma": vector_json(sigma)}),
        Certificate::RankOne {
            u0,
            v0,
            v_space,
            s_space,
            v0_square,
            bracket_u0_v0,
            candidates_examined,
            repaired,
        } => json!({
            "kind": "rank_one",
            "u0": vector_json(u0),
            "v0": vector_json(v0),
            "v_space": subspace_json(v_space),
            "s_space": subspace_json(s_space),
            "v0_square": vector_json(v0_square),
            "bracket_u0_v0": vector_json(bracket_u0_v0),
            "candidates_examined": candidates_examined,
            "repaired": repaired,
        }),
    }
}

pub fn existence_json(e: &Existence) -> Value {
    let witness = match &e.witness {
        ExistenceWitness::Sigma(s) => json!({"sigma": vector_json(s)}),
        ExistenceWitness::Operator(t) => json!({"operator": operator_json(t)}),
    };
    json!({
        "witness": witness,
        "product": product_json(&e.product),
        "certificate": certificate_json(&e.certificate),
    })
}

pub fn heights_json(h: &HeightConstruction) -> Value {
    let d = &h.heights;
    let layers: Map<String, Value> = d.layers.iter().map(|(k, s)| (k.to_string(), subspace_json(s))).collect();
    json!({
        "n": d.n,
        "k": d.k,
        "ell": d.ell,
        "layers": layers,
        "k_space": subspace_json(&d.k_space),
        "low_space": subspace_json(&d.low_space),
        "k_plus_ad": subspace_json(&d.k_plus_ad),
        "kbar": subspace_json(&h.spec.kbar),
        "t0": matrix_json(&h.spec.t0),
    })
}

pub fn load_algebra(path: &Path) -> Result<LieAlgebra> {
    parse_algebra(&read_json(path)?).map_err(|e| with_file(path, e))
}

pub fn load_operator(path: &Path) -> Result<LinearOperator> {
    parse_operator(&read_json(path)?).map_err(|e| with_file(path, e))
}

pub fn load_product(path: &Path) -> Result<BilinearProduct> {
    parse_product(&read_json(path)?).map_err(|e| with_file(path, e))
}

pub fn load_tensor(path: &Path) -> Result<TensorElement> {
    parse_tensor(&read_json(path)?).map_err(|e| with_file(path, e))
}

pub fn load_loop_elements(path: &Path) -> Result<(Field, usize, Vec<LoopElement>)> {
    parse_loop_elements(&read_json(path)?).map_err(|e| with_file(path, e))
}

fn with_file(path: &Path, e: Error) -> Error {
    match e {
        Error::Schema { path: p, message } if p.starts_with('$') => Error::Schema {
            path: format!("{}:{p}", path.display()),
            message,
        },
        other => other,
    }
}
