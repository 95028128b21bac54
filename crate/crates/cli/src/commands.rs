//! One adapter per subcommand: parse the inputs, call the library, and
//! describe the result. No mathematics happens here.

use std::fs;

use detrep::decomp::{decompose, decompose_completely, DecompositionResult};
use detrep::hyperbolic::{is_hyperbolic_at, pd_coordinates, pd_verdict};
use detrep::kernelmod::{is_generically_mg, is_mg_at, matrix_factorization, recover_from_adjoint, MGReport};
use detrep::linearize::{homogenize_matrix, linearize, sym_linearize};
use detrep::localred::local_reduce;
use detrep::matrix::{adjugate, determinant};
use detrep::parser::{parse_factors, parse_matrix, parse_point, parse_polynomial};
use detrep::symmetric::sym_reduce;
use detrep::{Error, HypersurfaceSpec, LinearMatrix, PolyMatrix, Polynomial, ProjectivePoint};
use serde_json::{json, Value};

use crate::report::{lines, Report};

/// Why a command produced no report.
#[derive(Debug)]
pub enum Failure {
    /// The input could not be read.
    Input(String),
    Library(Error),
}

impl From<Error> for Failure {
    fn from(e: Error) -> Self {
        Failure::Library(e)
    }
}

impl Failure {
    /// 1 for bad input, 2 for a violated guarantee.
    pub fn exit_code(&self) -> i32 {
        match self {
            Failure::Library(e) if e.is_internal() => 2,
            _ => 1,
        }
    }

    pub fn message(&self) -> String {
        match self {
            Failure::Input(m) => m.clone(),
            Failure::Library(e) => e.to_string(),
        }
    }
}

type Outcome = Result<Report, Failure>;

/// Inline text, or the contents of the file named after a leading `@`.
pub fn load(arg: &str) -> Result<String, Failure> {
    match arg.strip_prefix('@') {
        Some(path) => fs::read_to_string(path).map_err(|e| Failure::Input(format!("cannot read {path}: {e}"))),
        None => Ok(arg.to_string()),
    }
}

fn matrix(arg: &str) -> Result<PolyMatrix, Failure> {
    Ok(parse_matrix(&load(arg)?).map_err(Error::from)?)
}

fn linear(arg: &str) -> Result<LinearMatrix, Failure> {
    Ok(LinearMatrix::new(matrix(arg)?)?)
}

fn polynomial(arg: &str) -> Result<Polynomial, Failure> {
    Ok(parse_polynomial(&load(arg)?).map_err(Error::from)?)
}

fn point(arg: &str) -> Result<ProjectivePoint, Failure> {
    Ok(parse_point(load(arg)?.trim())?)
}

fn factors(arg: &str) -> Result<HypersurfaceSpec, Failure> {
    let spec = parse_factors(&load(arg)?).map_err(Error::from)?;
    Ok(HypersurfaceSpec::try_new(spec.factors().to_vec())?)
}

fn strings<T: ToString>(items: &[T]) -> Vec<String> {
    items.iter().map(ToString::to_string).collect()
}

pub fn det(m: &str) -> Outcome {
    let m = matrix(m)?;
    let d = determinant(&m);
    Ok(Report::new("det")
        .input("matrix", &m)
        .data(json!({ "determinant": d.to_string() }))
        .text(d.to_string()))
}

pub fn adj(m: &str) -> Outcome {
    let m = matrix(m)?;
    let a = adjugate(&m);
    Ok(Report::new("adj")
        .input("matrix", &m)
        .data(json!({ "adjugate": a.to_string(), "determinant": determinant(&m).to_string() }))
        .text(a.to_string()))
}

pub fn reduce(m: &str, pt: &str) -> Outcome {
    let (m, pt) = (matrix(m)?, point(pt)?);
    let r = local_reduce(&m, &pt)?;
    Ok(Report::new("reduce")
        .input("matrix", &m)
        .input("point", &pt)
        .data(json!({
            "p": r.p,
            "n": r.n.to_string(),
            "left": r.left.to_string(),
            "right": r.right.to_string(),
        }))
        .assertions(&[
            "left * M * right = I + N",
            "N vanishes at the point",
            "left and right are invertible at the point",
            "p equals the corank at the point",
        ])
        .text(lines([
            ("p", r.p.to_string()),
            ("n", r.n.to_string()),
            ("left", r.left.to_string()),
            ("right", r.right.to_string()),
        ])))
}

pub fn linearize_cmd(m: &str, symmetric: bool) -> Outcome {
    let m = matrix(m)?;
    let (r, checked): (_, &[&str]) = if symmetric {
        (
            sym_linearize(&m)?,
            &[
                "output is symmetric",
                "entries have degree at most 1",
                "det(output) = unit * det(M)",
                "top-degree measure decreases at every step",
            ],
        )
    } else {
        (
            linearize(&m)?,
            &[
                "entries have degree at most 1",
                "det(output) = det(M)",
                "size grows by one per step",
                "top-degree measure decreases at every step",
            ],
        )
    };
    Ok(Report::new("linearize")
        .input("matrix", &m)
        .input("symmetric", symmetric)
        .data(json!({
            "matrix": r.matrix.to_string(),
            "size": r.size(),
            "unit": r.unit.to_string(),
            "steps": r.step_count,
            "trace": r.trace.iter().map(|(deg, count)| json!([deg, count])).collect::<Vec<_>>(),
        }))
        .assertions(checked)
        .text(lines([
            ("matrix", r.matrix.to_string()),
            ("unit", r.unit.to_string()),
            ("steps", r.step_count.to_string()),
        ])))
}

pub fn homogenize(m: &str, var: usize) -> Outcome {
    let m = matrix(m)?;
    let h = homogenize_matrix(&m, var)?;
    Ok(Report::new("homogenize")
        .input("matrix", &m)
        .input("var", var)
        .data(json!({ "matrix": h.to_string() }))
        .assertions(&["entries are linear forms", "dehomogenizing recovers the input"])
        .text(h.to_string()))
}

fn decomposition_data(r: &DecompositionResult) -> Value {
    json!({
        "u1": r.u1.to_string(),
        "u2": r.u2.to_string(),
        "blocks": strings(&r.blocks.iter().map(|b| b.as_poly().clone()).collect::<Vec<_>>()),
        "block_sizes": r.block_sizes(),
        "factors": strings(&r.factors),
        "scalars": strings(&r.scalars),
    })
}

fn decomposition_text(r: &DecompositionResult) -> String {
    let mut out = lines([("u1", r.u1.to_string()), ("u2", r.u2.to_string())]);
    for (k, b) in r.blocks.iter().enumerate() {
        out.push_str(&format!("block {}: {} (det = {})\n", k + 1, b.as_poly(), r.block_dets()[k]));
    }
    out
}

pub fn decompose_cmd(m: &str, f1: Option<&str>, f2: Option<&str>, spec: Option<&str>) -> Outcome {
    let lm = linear(m)?;
    let mut report = Report::new("decompose").input("matrix", lm.as_poly());
    let result = match (f1, f2, spec) {
        (Some(f1), Some(f2), None) => {
            let (f1, f2) = (polynomial(f1)?, polynomial(f2)?);
            report = report.input("f1", &f1).input("f2", &f2);
            decompose(&lm, &f1, &f2)
        }
        (None, None, Some(s)) => {
            let spec = factors(s)?;
            report = report.input("factors", &spec);
            decompose_completely(&lm, &spec)
        }
        _ => return Err(Failure::Input("give either --f1 and --f2, or --factors".into())),
    };
    let report = report.assertions(&[
        "A1 + A2 = I and A1 * A2 = 0",
        "B1 + B2 = I and B1 * B2 = 0",
        "M * B_a = A_a * M",
        "u1 * M * u2 is the block sum",
        "block determinants are proportional to the factors",
    ]);
    match result {
        Ok(r) => Ok(report
            .verdict("Decomposable")
            .data(decomposition_data(&r))
            .text(decomposition_text(&r))),
        Err(Error::NotDecomposable { row, col, partial }) => {
            let witness = format!("({},{})", row + 1, col + 1);
            let data = json!({
                "witness": [row + 1, col + 1],
                "failed_block": partial.failed_block + 1,
                "partial": decomposition_data(&partial.achieved),
            });
            Ok(report
                .verdict("NotDecomposable")
                .assertions(&["the witness entry of the adjugate is not in the ideal (f1, f2)"])
                .data(data)
                .text(lines([
                ("witness", witness),
                ("failed block", (partial.failed_block + 1).to_string()),
            ])))
        }
        Err(e) => Err(e.into()),
    }
}

fn mg_data(r: &MGReport) -> Value {
    json!({
        "factors": r.factors.iter().map(|f| json!({
            "factor": f.factor.to_string(),
            "multiplicity": f.multiplicity,
            "generic_corank": f.generic_corank,
            "verdict": f.verdict,
        })).collect::<Vec<_>>(),
        "points": r.points.iter().map(|p| json!({
            "point": p.point.to_string(),
            "corank": p.corank,
            "multiplicity": p.multiplicity,
            "verdict": p.verdict,
        })).collect::<Vec<_>>(),
    })
}

pub fn maxgen(m: &str, spec: &str, pt: Option<&str>) -> Outcome {
    let lm = linear(m)?;
    let spec = factors(spec)?;
    let mut report = Report::new("maxgen")
        .input("matrix", lm.as_poly())
        .input("factors", &spec);
    let mut r = is_generically_mg(&lm, &spec)?;
    if let Some(pt) = pt {
        let pt = point(pt)?;
        report = report.input("point", &pt);
        r.points = is_mg_at(&lm, &spec.product(), &pt)?.points;
    }
    let mut text = String::new();
    for f in &r.factors {
        text.push_str(&format!(
            "factor {}: multiplicity {}, generic corank {}\n",
            f.factor, f.multiplicity, f.generic_corank
        ));
    }
    for p in &r.points {
        text.push_str(&format!(
            "point {}: multiplicity {}, corank {}\n",
            p.point, p.multiplicity, p.corank
        ));
    }
    let verdict = if r.verdict() { "MaximallyGenerated" } else { "NotMaximallyGenerated" };
    Ok(report
        .verdict(verdict)
        .data(mg_data(&r))
        .assertions(&["declared factorization matches the determinant"])
        .text(text))
}

pub fn mf(m: &str, spec: &str) -> Outcome {
    let lm = linear(m)?;
    let spec = factors(spec)?;
    let report = Report::new("mf")
        .input("matrix", lm.as_poly())
        .input("factors", &spec);
    match matrix_factorization(&lm, &spec) {
        Ok(n) => Ok(report
            .data(json!({ "n": n.to_string(), "reduced": spec.reduced().to_string() }))
            .assertions(&[
                "adjugate entries are divisible by the excess factor",
                "M * N = f_red * I",
                "N * M = f_red * I",
            ])
            .text(lines([("n", n.to_string()), ("f_red", spec.reduced().to_string())]))),
        Err(Error::NotGenericallyMG) => Ok(report
            .verdict("NotGenericallyMG")
            .data(Value::Null)
            .text("")),
        Err(e) => Err(e.into()),
    }
}

pub fn recover(a: &str, f: &str) -> Outcome {
    let (a, f) = (matrix(a)?, polynomial(f)?);
    let m = recover_from_adjoint(&a, &f)?;
    Ok(Report::new("recover")
        .input("adjugate", &a)
        .input("f", &f)
        .data(json!({ "matrix": m.as_poly().to_string() }))
        .assertions(&["entries are linear forms", "det(M) = f"])
        .text(m.as_poly().to_string()))
}

pub fn symreduce(m: &str, pt: &str) -> Outcome {
    let (m, pt) = (matrix(m)?, point(pt)?);
    let r = sym_reduce(&m, &pt)?;
    Ok(Report::new("symreduce")
        .input("matrix", &m)
        .input("point", &pt)
        .data(json!({
            "d": r.d.to_string(),
            "units": strings(&r.units),
            "n": r.n.to_string(),
            "a": r.a.to_string(),
        }))
        .assertions(&[
            "reduction stays symmetric",
            "N vanishes at the point",
            "diagonal size equals the rank at the point",
            "a is invertible at the point",
            "a * M * a^T = diag(units) + N",
        ])
        .text(lines([
            ("d", r.d.to_string()),
            ("units", strings(&r.units).join(", ")),
            ("n", r.n.to_string()),
            ("a", r.a.to_string()),
        ])))
}

pub fn hyperbolic(f: &str, pt: &str, trials: usize, seed: u64) -> Outcome {
    let (f, pt) = (polynomial(f)?, point(pt)?);
    let r = is_hyperbolic_at(&f, &pt, trials, seed)?;
    let records: Vec<Value> = r
        .records
        .iter()
        .map(|t| {
            json!({
                "direction": strings(&t.direction),
                "restricted": t.restricted.to_string(),
                "distinct_real_roots": t.roots.distinct,
                "all_real": t.roots.all_real,
                "resamples": t.resamples,
            })
        })
        .collect();
    let mut text = lines([
        ("trials", r.trials.to_string()),
        ("seed", r.seed.to_string()),
        ("resampled directions", r.resampled().to_string()),
    ]);
    if let (Some(k), Some(w)) = (r.witness, r.witness_record()) {
        text.push_str(&lines([
            ("witness trial", (k + 1).to_string()),
            ("direction", strings(&w.direction).join(",")),
            ("restriction", w.restricted.to_string()),
            ("distinct real roots", w.roots.distinct.to_string()),
        ]));
    }
    Ok(Report::new("hyperbolic")
        .input("f", &f)
        .input("point", &pt)
        .input("trials", trials)
        .input("seed", seed)
        .verdict(r.verdict.as_str())
        .data(json!({
            "witness": r.witness.map(|k| k + 1),
            "resampled": r.resampled(),
            "records": records,
        }))
        .assertions(&["each line is decided exactly by a Sturm chain"])
        .text(text))
}

pub fn pdcoords(m: &str, pt: &str, max_halvings: u32) -> Outcome {
    let (lm, pt) = (linear(m)?, point(pt)?);
    let pd = pd_verdict(&lm, &pt)?;
    let c = pd_coordinates(&lm, &pt, max_halvings)?;
    let transformed = c.transformed();
    Ok(Report::new("pdcoords")
        .input("matrix", lm.as_poly())
        .input("point", &pt)
        .input("max_halvings", max_halvings)
        .data(json!({
            "t": c.t.to_string(),
            "radius": c.radius.to_string(),
            "coefficient_matrices": strings(&c.coefficient_matrices),
            "transformed": transformed.as_poly().to_string(),
            "pd_at_point": pd.canonical,
            "pd_at_negated_point": pd.antipodal,
            "leading_minors": strings(&pd.leading_minors),
        }))
        .assertions(&[
            "M is positive definite at the point",
            "every coefficient matrix passes the leading-minors test",
            "T is invertible",
        ])
        .text(lines([
            ("t", c.t.to_string()),
            ("radius", c.radius.to_string()),
            ("transformed", transformed.as_poly().to_string()),
        ])))
}
