//! `gdalg` command-line front end.
//!
//! Every command prints one JSON report on stdout. Exit codes: 0 success,
//! 1 a verification failed, 2 input or schema error, 3 search budget or
//! enumeration cap exhausted.

use std::path::{Path, PathBuf};
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand, ValueEnum};
use serde_json::{json, Value};

use gdalg::affine::{check_affine_jacobi_raw, loop_bracket_raw, DEFAULT_WINDOW};
use gdalg::construct::{
    abelian_operator, collect_operators, existence, sigma_product, sl2_example, sln_heights, OperatorFilter,
    DEFAULT_ENUMERATION_CAP,
};
use gdalg::cybe::{cybe_audit, cybe_defect, rep_defect, t_from_tensor, tensor3_image, BilinearForm, Representation};
use gdalg::io;
use gdalg::liealg::{catalog, check_lie};
use gdalg::novikov::{check_gd, check_left_symmetric, check_right_commutative, check_rmatrix, check_strong, product_from_operator};
use gdalg::{CheckReport, Error, Field, LieAlgebra, Matrix, Result};

#[derive(Parser)]
#[command(name = "gdalg", version, about = "Exact checks and constructions for Novikov products and R-matrices")]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Check axioms of a model loaded from JSON files.
    #[command(subcommand)]
    Verify(Verify),
    /// Derive a model from other models.
    #[command(subcommand)]
    Build(Build),
    /// Run one of the operator constructions.
    #[command(subcommand)]
    Construct(Construct),
    /// Loop-algebra extension `A ⊗ F[t, 1/t]`.
    #[command(subcommand)]
    Affine(Affine),
    /// Tensor form of the classical Yang-Baxter equation.
    #[command(subcommand)]
    Cybe(Cybe),
    /// List every operator over a finite field that passes a filter.
    Enumerate(EnumerateArgs),
    /// Write a catalog algebra as an algebra file.
    Catalog(CatalogArgs),
}

#[derive(Subcommand)]
enum Verify {
    Lie { algebra: PathBuf },
    Rmatrix { algebra: PathBuf, operator: PathBuf },
    Strong { algebra: PathBuf, operator: PathBuf },
    /// Left-symmetry and right-commutativity of a product.
    Novikov { product: PathBuf },
    /// Jacobi, Novikov and compatibility axioms.
    Gd { algebra: PathBuf, product: PathBuf },
}

#[derive(Subcommand)]
enum Build {
    /// Product induced by an operator: `u∘v = T([u,v]) - [T(u),v]`.
    Novikov {
        algebra: PathBuf,
        operator: PathBuf,
        #[arg(long)]
        out: Option<PathBuf>,
    },
}

#[derive(Subcommand)]
enum Construct {
    /// The worked operator on sl(2); writes algebra, operator and product files.
    Sl2Example {
        #[arg(long, default_value = "q")]
        field: String,
        #[arg(long)]
        out_dir: Option<PathBuf>,
    },
    /// Product `u∘v = σ(u) v` on an abelian algebra.
    Sigma {
        algebra: PathBuf,
        /// Comma-separated coefficients of σ.
        #[arg(long, allow_hyphen_values = true)]
        sigma: String,
        #[arg(long)]
        out: Option<PathBuf>,
    },
    /// Operator from an abelian subspace `K`, a complement and `T0: Kbar -> K`.
    Abelian {
        algebra: PathBuf,
        spec: PathBuf,
        #[arg(long)]
        out_dir: Option<PathBuf>,
    },
    /// Search for a nonzero operator with a nontrivial product.
    Existence {
        algebra: PathBuf,
        #[arg(long, default_value_t = 0)]
        seed: u64,
        #[arg(long, default_value_t = 1000)]
        budget: usize,
        #[arg(long)]
        out_dir: Option<PathBuf>,
    },
    /// Height decomposition of sl(n) and its default operator.
    SlnHeights {
        #[arg(long)]
        n: usize,
        #[arg(long, default_value = "q")]
        field: String,
        #[arg(long)]
        out_dir: Option<PathBuf>,
    },
}

#[derive(Subcommand)]
enum Affine {
    /// Skew-symmetry and Jacobi on all basis triples with degrees in `[-W, W]`.
    Jacobi {
        algebra: PathBuf,
        product: PathBuf,
        #[arg(long, default_value_t = DEFAULT_WINDOW)]
        window: i64,
    },
    /// Bracket of the two loop elements in an elements file.
    Bracket {
        algebra: PathBuf,
        product: PathBuf,
        #[arg(long)]
        elements: PathBuf,
    },
}

#[derive(Clone, Copy, ValueEnum)]
enum RepKind {
    Adjoint,
    Defining,
}

#[derive(Subcommand)]
enum Cybe {
    /// Tensor defect of `X = Σ r_ij I_i ⊗ I_j`.
    Defect { algebra: PathBuf, tensor: PathBuf },
    /// Operator `T_X` of a tensor.
    Tmap {
        tensor: PathBuf,
        #[arg(long)]
        out: Option<PathBuf>,
    },
    /// Defect on `V⊗V⊗V` for a representation, compared with the image of the tensor defect.
    RepDefect {
        algebra: PathBuf,
        tensor: PathBuf,
        #[arg(long, value_enum, default_value = "adjoint")]
        rep: RepKind,
    },
    /// Exhaustive comparison of tensor solutions and R-matrix operators over GF(p).
    Audit {
        algebra: PathBuf,
        /// Gram matrix file; the identity form when omitted.
        #[arg(long)]
        form: Option<PathBuf>,
        #[arg(long, default_value_t = DEFAULT_ENUMERATION_CAP)]
        cap: u64,
        #[arg(long)]
        out: Option<PathBuf>,
    },
}

#[derive(Clone, Copy, ValueEnum)]
enum FilterArg {
    All,
    Rmatrix,
    RmatrixStrong,
}

#[derive(Args)]
struct EnumerateArgs {
    algebra: PathBuf,
    #[arg(long, value_enum, default_value = "rmatrix-strong")]
    filter: FilterArg,
    #[arg(long, default_value_t = DEFAULT_ENUMERATION_CAP)]
    cap: u64,
    /// Include every matrix (row-major) in the report.
    #[arg(long)]
    list: bool,
}

#[derive(Args)]
struct CatalogArgs {
    name: String,
    #[arg(long, default_value = "q")]
    field: String,
    /// Size for `sl`.
    #[arg(long)]
    n: Option<usize>,
    #[arg(long)]
    out: Option<PathBuf>,
}

/// Report plus exit status.
struct Outcome {
    passed: bool,
    body: Value,
}

impl Outcome {
    fn ok(body: Value) -> Outcome {
        Outcome { passed: true, body }
    }

    fn check(report: &CheckReport, extra: Value) -> Outcome {
        let mut body = json!({
            "report": report,
            "failed_axioms": report.failed_axioms(),
        });
        merge(&mut body, extra);
        Outcome {
            passed: report.passed,
            body,
        }
    }
}

fn merge(into: &mut Value, extra: Value) {
    if let (Some(a), Value::Object(b)) = (into.as_object_mut(), extra) {
        a.extend(b);
    }
}

fn field_arg(text: &str) -> Result<Field> {
    io::parse_field_flag(text)
}

fn write_files(dir: Option<&Path>, files: &[(&str, &Value)]) -> Result<Value> {
    let Some(dir) = dir else {
        return Ok(Value::Array(Vec::new()));
    };
    std::fs::create_dir_all(dir).map_err(|e| Error::Io(format!("{}: {e}", dir.display())))?;
    let mut written = Vec::new();
    for (name, v) in files {
        let path = dir.join(name);
        io::save(&path, v)?;
        written.push(Value::String(path.display().to_string()));
    }
    Ok(Value::Array(written))
}

fn write_one(out: Option<&Path>, v: &Value) -> Result<Value> {
    match out {
        Some(p) => {
            io::save(p, v)?;
            Ok(Value::String(p.display().to_string()))
        }
        None => Ok(Value::Null),
    }
}

fn verify(cmd: Verify) -> Result<Outcome> {
    Ok(match cmd {
        Verify::Lie { algebra } => Outcome::check(&check_lie(&io::load_algebra(&algebra)?), json!({})),
        Verify::Rmatrix { algebra, operator } => {
            let l = io::load_algebra(&algebra)?;
            Outcome::check(&check_rmatrix(&l, &io::load_operator(&operator)?)?, json!({}))
        }
        Verify::Strong { algebra, operator } => {
            let l = io::load_algebra(&algebra)?;
            Outcome::check(&check_strong(&l, &io::load_operator(&operator)?)?, json!({}))
        }
        Verify::Novikov { product } => {
            let p = io::load_product(&product)?;
            let r = CheckReport::combine([check_left_symmetric(&p), check_right_commutative(&p)]);
            Outcome::check(&r, json!({}))
        }
        Verify::Gd { algebra, product } => {
            let l = io::load_algebra(&algebra)?;
            Outcome::check(&check_gd(&l, &io::load_product(&product)?)?, json!({}))
        }
    })
}

fn build(cmd: Build) -> Result<Outcome> {
    let Build::Novikov { algebra, operator, out } = cmd;
    let l = io::load_algebra(&algebra)?;
    let p = product_from_operator(&l, &io::load_operator(&operator)?)?;
    let pj = io::product_json(&p);
    let written = write_one(out.as_deref(), &pj)?;
    Ok(Outcome::ok(json!({"product": pj, "written": written})))
}

fn parse_vector(field: Field, text: &str) -> Result<Vec<gdalg::Scalar>> {
    text.split(',').map(|t| field.parse(t)).collect()
}

fn construct(cmd: Construct) -> Result<Outcome> {
    match cmd {
        Construct::Sl2Example { field, out_dir } => {
            let (l, t, p) = sl2_example(field_arg(&field)?)?;
            let (lj, tj, pj) = (io::algebra_json(&l), io::operator_json(&t), io::product_json(&p));
            let written = write_files(
                out_dir.as_deref(),
                &[("sl2.json", &lj), ("sl2_operator.json", &tj), ("sl2_product.json", &pj)],
            )?;
            Ok(Outcome::ok(json!({"algebra": lj, "operator": tj, "product": pj, "written": written})))
        }
        Construct::Sigma { algebra, sigma, out } => {
            let l = io::load_algebra(&algebra)?;
            let s = parse_vector(l.field(), &sigma)?;
            let pj = io::product_json(&sigma_product(&l, &s)?);
            let written = write_one(out.as_deref(), &pj)?;
            Ok(Outcome::ok(json!({"product": pj, "written": written})))
        }
        Construct::Abelian { algebra, spec, out_dir } => {
            let l = io::load_algebra(&algebra)?;
            let spec = io::load_abelian_spec(&spec)?;
            let t = abelian_operator(&l, &spec)?;
            let p = product_from_operator(&l, &t)?;
            let (tj, pj) = (io::operator_json(&t), io::product_json(&p));
            let written = write_files(out_dir.as_deref(), &[("operator.json", &tj), ("product.json", &pj)])?;
            Ok(Outcome::ok(json!({"operator": tj, "product": pj, "written": written})))
        }
        Construct::Existence {
            algebra,
            seed,
            budget,
            out_dir,
        } => {
            let l = io::load_algebra(&algebra)?;
            let e = existence(&l, seed, budget)?;
            let ej = io::existence_json(&e);
            let pj = io::product_json(&e.product);
            let mut files = vec![("product.json", &pj)];
            let tj;
            if let gdalg::construct::ExistenceWitness::Operator(t) = &e.witness {
                tj = io::operator_json(t);
                files.push(("operator.json", &tj));
            }
            let written = write_files(out_dir.as_deref(), &files)?;
            let mut body = json!({"seed": seed, "budget": budget, "written": written});
            merge(&mut body, ej);
            Ok(Outcome::ok(body))
        }
        Construct::SlnHeights { n, field, out_dir } => {
            let h = sln_heights(n, field_arg(&field)?)?;
            let t = abelian_operator(&h.algebra, &h.spec)?;
            let p = product_from_operator(&h.algebra, &t)?;
            let lj = io::algebra_json(&h.algebra);
            let sj = io::abelian_spec_json(&h.spec);
            let (tj, pj) = (io::operator_json(&t), io::product_json(&p));
            let written = write_files(
                out_dir.as_deref(),
                &[("algebra.json", &lj), ("spec.json", &sj), ("operator.json", &tj), ("product.json", &pj)],
            )?;
            Ok(Outcome::ok(json!({"heights": io::heights_json(&h), "written": written})))
        }
    }
}

fn affine(cmd: Affine) -> Result<Outcome> {
    match cmd {
        Affine::Jacobi { algebra, product, window } => {
            let l = io::load_algebra(&algebra)?;
            let p = io::load_product(&product)?;
            let r = check_affine_jacobi_raw(&l, &p, window)?;
            Ok(Outcome::check(&r, json!({"window": window})))
        }
        Affine::Bracket { algebra, product, elements } => {
            let l = io::load_algebra(&algebra)?;
            let p = io::load_product(&product)?;
            let (_, _, els) = io::load_loop_elements(&elements)?;
            let [a, b] = els.as_slice() else {
                return Err(Error::Schema {
                    path: format!("{}:$.elements", elements.display()),
                    message: format!("expected exactly 2 elements, found {}", els.len()),
                });
            };
            let c = loop_bracket_raw(&l, &p, a, b)?;
            Ok(Outcome::ok(json!({"bracket": io::loop_element_json(&c)})))
        }
    }
}

/// Nonzero entries of a dense tensor or matrix as `{"index": [...], "value": "..."}`.
fn sparse_entries<'a>(entries: impl Iterator<Item = (Vec<usize>, &'a gdalg::Scalar)>) -> Value {
    Value::Array(
        entries
            .filter(|(_, c)| !c.is_zero())
            .map(|(ix, c)| json!({"index": ix, "value": c.to_string()}))
            .collect(),
    )
}

fn matrix_entries(m: &Matrix) -> Value {
    let cols = m.cols();
    sparse_entries(m.entries().iter().enumerate().map(|(k, c)| (vec![k / cols, k % cols], c)))
}

fn representation(l: &LieAlgebra, kind: RepKind) -> Result<Representation> {
    match kind {
        RepKind::Adjoint => Representation::adjoint(l),
        RepKind::Defining => {
            let n = (2..=64)
                .find(|n| n * n - 1 == l.dim())
                .ok_or_else(|| Error::InvalidParameter(format!("dimension {} is not n^2-1", l.dim())))?;
            Representation::defining_sln(l, n)
        }
    }
}

fn cybe(cmd: Cybe) -> Result<Outcome> {
    match cmd {
        Cybe::Defect { algebra, tensor } => {
            let l = io::load_algebra(&algebra)?;
            let d = cybe_defect(&l, &io::load_tensor(&tensor)?)?;
            let n = d.dim();
            let entries = sparse_entries(
                d.coefficients()
                    .iter()
                    .enumerate()
                    .map(|(k, c)| (vec![k / (n * n), (k / n) % n, k % n], c)),
            );
            Ok(Outcome {
                passed: d.is_zero(),
                body: json!({"zero": d.is_zero(), "defect": entries}),
            })
        }
        Cybe::Tmap { tensor, out } => {
            let tj = io::operator_json(&t_from_tensor(&io::load_tensor(&tensor)?));
            let written = write_one(out.as_deref(), &tj)?;
            Ok(Outcome::ok(json!({"operator": tj, "written": written})))
        }
        Cybe::RepDefect { algebra, tensor, rep } => {
            let l = io::load_algebra(&algebra)?;
            let x = io::load_tensor(&tensor)?;
            let rep = representation(&l, rep)?;
            let d = rep_defect(&rep, &x)?;
            let consistent = d == tensor3_image(&rep, &cybe_defect(&l, &x)?)?;
            let zero = d.entries().iter().all(|c| c.is_zero());
            Ok(Outcome {
                passed: zero && consistent,
                body: json!({
                    "representation_dim": rep.target_dim(),
                    "zero": zero,
                    "matches_tensor_defect": consistent,
                    "defect": matrix_entries(&d),
                }),
            })
        }
        Cybe::Audit { algebra, form, cap, out } => {
            let l = io::load_algebra(&algebra)?;
            let b = match form {
                Some(path) => io::load_form(&path)?,
                None => BilinearForm::identity(l.field(), l.dim()),
            };
            let report = cybe_audit(&l, &b, cap)?;
            let rj = serde_json::to_value(&report).expect("audit report serializes");
            let written = write_one(out.as_deref(), &rj)?;
            Ok(Outcome {
                passed: report.consistency_failures.is_empty(),
                body: json!({"audit": rj, "written": written}),
            })
        }
    }
}

fn enumerate(args: EnumerateArgs) -> Result<Outcome> {
    let l = io::load_algebra(&args.algebra)?;
    let filter = match args.filter {
        FilterArg::All => OperatorFilter::All,
        FilterArg::Rmatrix => OperatorFilter::Rmatrix,
        FilterArg::RmatrixStrong => OperatorFilter::RmatrixAndStrong,
    };
    let ops = collect_operators(&l, filter, args.cap)?;
    let digest = gdalg::construct::enumeration_digest(&ops);
    let total = gdalg::construct::finite_search_size(l.field(), l.dim() * l.dim(), args.cap)?;
    let mut body = json!({"total": total, "count": digest.count, "sha256": digest.sha256});
    if args.list {
        let rows: Vec<Value> = ops
            .iter()
            .map(|t| Value::Array(t.matrix().entries().iter().map(io::scalar_json).collect()))
            .collect();
        merge(&mut body, json!({"operators": rows}));
    }
    Ok(Outcome::ok(body))
}

fn catalog_cmd(args: CatalogArgs) -> Result<Outcome> {
    let l = catalog(&args.name, field_arg(&args.field)?, args.n)?;
    let lj = io::algebra_json(&l);
    let written = write_one(args.out.as_deref(), &lj)?;
    Ok(Outcome::ok(json!({"algebra": lj, "written": written})))
}

fn command_name(c: &Command) -> &'static str {
    match c {
        Command::Verify(v) => match v {
            Verify::Lie { .. } => "verify lie",
            Verify::Rmatrix { .. } => "verify rmatrix",
            Verify::Strong { .. } => "verify strong",
            Verify::Novikov { .. } => "verify novikov",
            Verify::Gd { .. } => "verify gd",
        },
        Command::Build(_) => "build novikov",
        Command::Construct(c) => match c {
            Construct::Sl2Example { .. } => "construct sl2-example",
            Construct::Sigma { .. } => "construct sigma",
            Construct::Abelian { .. } => "construct abelian",
            Construct::Existence { .. } => "construct existence",
            Construct::SlnHeights { .. } => "construct sln-heights",
        },
        Command::Affine(a) => match a {
            Affine::Jacobi { .. } => "affine jacobi",
            Affine::Bracket { .. } => "affine bracket",
        },
        Command::Cybe(c) => match c {
            Cybe::Defect { .. } => "cybe defect",
            Cybe::Tmap { .. } => "cybe tmap",
            Cybe::RepDefect { .. } => "cybe rep-defect",
            Cybe::Audit { .. } => "cybe audit",
        },
        Command::Enumerate(_) => "enumerate",
        Command::Catalog(_) => "catalog",
    }
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    let name = command_name(&cli.command);
    let result = match cli.command {
        Command::Verify(c) => verify(c),
        Command::Build(c) => build(c),
        Command::Construct(c) => construct(c),
        Command::Affine(c) => affine(c),
        Command::Cybe(c) => cybe(c),
        Command::Enumerate(a) => enumerate(a),
        Command::Catalog(a) => catalog_cmd(a),
    };
    let (code, mut body) = match result {
        Ok(o) => {
            let status = if o.passed { "passed" } else { "failed" };
            let mut body = json!({"status": status});
            merge(&mut body, o.body);
            (if o.passed { 0 } else { 1 }, body)
        }
        Err(e) => {
            let code = if e.is_search_failure() { 3 } else { 2 };
            let status = if code == 3 { "not_found" } else { "error" };
            (code, json!({"status": status, "error": {"invariant": e.invariant(), "message": e.to_string()}}))
        }
    };
    merge(&mut body, json!({"command": name, "exit_code": code}));
    print!("{}", io::to_canonical_string(&body));
    ExitCode::from(code)
}
