use std::fmt;
use std::fs;
use std::path::{Path, PathBuf};
use std::str::FromStr;

use num_complex::Complex64;
use serde_json::{json, Value};

use super::spec::{Experiment, Naming, OutputKind};
use super::{Code, Diagnostic};
use crate::algebra::{unit_element, ComplexMatrix};
use crate::dynamics::{feynman_vector, schrodinger_evolve, Propagator};
use crate::gns::{gns_build, psi_vector, represent, NULL_TOL};
use crate::groupoid::FiniteGroupoid;
use crate::measure::{amplitude_matrix, decoherence, quantum_measure, reproducibility_defect};
use crate::ratchet::{TABLE_COLS, TABLE_ROWS};
use crate::states::State;

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Format {
    Json,
    Csv,
}

impl FromStr for Format {
    type Err = String;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        match s {
            "json" => Ok(Format::Json),
            "csv" => Ok(Format::Csv),
            other => Err(format!("unknown format {other:?} (expected json or csv)")),
        }
    }
}

impl fmt::Display for Format {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            Format::Json => "json",
            Format::Csv => "csv",
        })
    }
}

enum Cell {
    Num(f64),
    Text(String),
}

/// Either a rectangular table or a JSON document.
enum Doc {
    Table { header: Vec<String>, rows: Vec<Vec<Cell>> },
    Json(Value),
}

impl Doc {
    fn natural_format(&self) -> Format {
        match self {
            Doc::Table { .. } => Format::Csv,
            Doc::Json(_) => Format::Json,
        }
    }
}

fn numeric(diag_ctx: &str) -> impl Fn(crate::Error) -> Diagnostic + '_ {
    move |e| Diagnostic::new(Code::Numeric, format!("{diag_ctx}: {e}"))
}

fn pair(c: Complex64) -> Value {
    json!([c.re, c.im])
}

fn vector_json(v: impl IntoIterator<Item = Complex64>) -> Value {
    Value::Array(v.into_iter().map(pair).collect())
}

fn matrix_json(m: &ComplexMatrix) -> Value {
    Value::Array((0..m.nrows()).map(|r| vector_json((0..m.ncols()).map(|c| m[(r, c)]))).collect())
}

fn labels(g: &FiniteGroupoid) -> Vec<String> {
    g.outcomes().iter().map(|o| o.label.clone()).collect()
}

fn names(g: &FiniteGroupoid) -> Vec<String> {
    g.transitions().iter().map(|t| t.name.clone()).collect()
}

fn state_of(exp: &Experiment) -> &State {
    exp.state.as_ref().expect("checked by check_output")
}

/// Row and column orders for the multiplication table.
fn cayley_layout(exp: &Experiment) -> (Vec<usize>, Vec<usize>) {
    let g = &exp.groupoid;
    if exp.spec.naming == Some(Naming::Ratchet) {
        let find = |names: &[&str]| names.iter().map(|n| g.transition_by_name(n)).collect::<Option<Vec<_>>>();
        if let (Some(rows), Some(cols)) = (find(&TABLE_ROWS), find(&TABLE_COLS)) {
            return (rows, cols);
        }
    }
    let mut rows: Vec<usize> = (0..g.len()).collect();
    let mut cols = rows.clone();
    rows.sort_by_key(|&a| (g.source(a), a));
    cols.sort_by_key(|&b| (g.target(b), b));
    (rows, cols)
}

fn cayley(exp: &Experiment) -> Doc {
    let g = &exp.groupoid;
    let (rows, cols) = cayley_layout(exp);
    let name = |a: usize| g.transition(a).name.clone();
    let mut header = vec!["compose".to_string()];
    header.extend(cols.iter().map(|&b| name(b)));
    let rows = rows
        .iter()
        .map(|&a| {
            let mut r = vec![Cell::Text(name(a))];
            r.extend(cols.iter().map(|&b| Cell::Text(g.compose(a, b).map_or_else(|| "*".to_string(), name))));
            r
        })
        .collect();
    Doc::Table { header, rows }
}

fn axioms(exp: &Experiment) -> Doc {
    let g = &exp.groupoid;
    let report = g.check_axioms();
    let transitions: Vec<Value> = g
        .transitions()
        .iter()
        .map(|t| json!({"id": t.id, "name": t.name, "source": t.source, "target": t.target, "label": t.label}))
        .collect();
    Doc::Json(json!({
        "valid": report.is_empty(),
        "outcomes": labels(g),
        "transitions": transitions,
        "inverse": (0..g.len()).map(|a| g.transition(g.inverse(a)).name.clone()).collect::<Vec<_>>(),
        "composable_pairs": g.composable_triples().len(),
        "violations": report.violations,
    }))
}

fn state_doc(exp: &Experiment) -> Doc {
    let s = state_of(exp);
    Doc::Json(json!({
        "transitions": names(&exp.groupoid),
        "phi": vector_json(s.phi().values().iter().copied()),
        "weight": s.weight(),
        "positive_definite": s.is_positive_definite(),
        "unitary": s.is_unitary(),
        "factorizable": s.is_factorizable(),
    }))
}

fn amplitudes(exp: &Experiment) -> Result<Doc, Diagnostic> {
    let g = &exp.groupoid;
    let s = state_of(exp);
    let lab = labels(g);
    let prop = Propagator::new(g, exp.hamiltonian.as_ref().unwrap()).map_err(numeric("amplitudes"))?;
    let mut header = vec!["t".to_string()];
    for &(x, y) in &exp.amplitude_pairs {
        header.push(format!("re({}|{})", lab[y], lab[x]));
        header.push(format!("im({}|{})", lab[y], lab[x]));
    }
    let mut rows = Vec::new();
    for t in exp.grid.unwrap().points() {
        let mut row = vec![Cell::Num(t)];
        for &(x, y) in &exp.amplitude_pairs {
            let a = prop.amplitude(s, x, y, t).map_err(numeric("amplitudes"))?;
            row.push(Cell::Num(a.re));
            row.push(Cell::Num(a.im));
        }
        rows.push(row);
    }
    Ok(Doc::Table { header, rows })
}

fn evolve(exp: &Experiment) -> Result<Doc, Diagnostic> {
    let g = &exp.groupoid;
    let s = state_of(exp);
    let h = exp.hamiltonian.as_ref().unwrap();
    let grid = exp.grid.unwrap();
    let sp = gns_build(g, s, NULL_TOL).map_err(numeric("evolve"))?;
    let big_h = represent(&sp, g, h.element()).map_err(numeric("evolve"))?;
    let psis = schrodinger_evolve(&sp, g, h, &grid).map_err(numeric("evolve"))?;
    let mut header = vec!["t".to_string(), "norm".to_string(), "energy".to_string()];
    for k in 0..sp.dim() {
        header.push(format!("re(psi{k})"));
        header.push(format!("im(psi{k})"));
    }
    let rows = grid
        .points()
        .into_iter()
        .zip(psis)
        .map(|(t, psi)| {
            let energy = psi.dotc(&(&big_h * &psi)).re;
            let mut row = vec![Cell::Num(t), Cell::Num(psi.norm()), Cell::Num(energy)];
            for z in psi.iter() {
                row.push(Cell::Num(z.re));
                row.push(Cell::Num(z.im));
            }
            row
        })
        .collect();
    Ok(Doc::Table { header, rows })
}

fn measure(exp: &Experiment) -> Result<Doc, Diagnostic> {
    let g = &exp.groupoid;
    let s = state_of(exp);
    let all_names = names(g);
    let mut events = Vec::new();
    for (name, e) in &exp.events {
        let mu = quantum_measure(g, s, e).map_err(numeric("measure"))?;
        events.push(json!({
            "name": name,
            "transitions": e.ids().map(|i| all_names[i].clone()).collect::<Vec<_>>(),
            "mu": mu.raw,
            "mu_clamped": mu.clamped,
            "mu_imag": mu.imag,
        }));
    }
    let mut dec = Vec::new();
    for (_, a) in &exp.events {
        let mut row = Vec::new();
        for (_, b) in &exp.events {
            row.push(pair(decoherence(g, s, a, b).map_err(numeric("measure"))?));
        }
        dec.push(Value::Array(row));
    }
    let (amp, repro) = if s.is_factorizable() {
        let m = amplitude_matrix(g, s).map_err(numeric("measure"))?;
        let r = reproducibility_defect(g, s).map_err(numeric("measure"))?;
        (json!({"outcomes": labels(g), "entries": matrix_json(&m)}), json!(r))
    } else {
        (Value::Null, Value::Null)
    };
    Ok(Doc::Json(json!({
        "events": events,
        "decoherence": dec,
        "amplitude_matrix": amp,
        "reproducibility": repro,
    })))
}

fn gns(exp: &Experiment) -> Result<Doc, Diagnostic> {
    let g = &exp.groupoid;
    let s = state_of(exp);
    let sp = gns_build(g, s, NULL_TOL).map_err(numeric("gns"))?;
    let mut eig = sp.gram_eigenvalues().to_vec();
    eig.reverse();
    let fundamental = if s.is_factorizable() {
        vector_json(psi_vector(g, s, &unit_element(g)).map_err(numeric("gns"))?.iter().copied())
    } else {
        Value::Null
    };
    let hamiltonian = match &exp.hamiltonian {
        Some(h) => matrix_json(&represent(&sp, g, h.element()).map_err(numeric("gns"))?),
        None => Value::Null,
    };
    Ok(Doc::Json(json!({
        "dim": sp.dim(),
        "null_tol": NULL_TOL,
        "gram_eigenvalues": eig,
        "cyclic_vector": vector_json(sp.cyclic_vector().iter().copied()),
        "feynman_vector": vector_json(feynman_vector(&sp, g).map_err(numeric("gns"))?.iter().copied()),
        "fundamental_state": fundamental,
        "hamiltonian": hamiltonian,
    })))
}

fn build(exp: &Experiment, kind: OutputKind) -> Result<Doc, Diagnostic> {
    exp.check_output(kind)?;
    match kind {
        OutputKind::Cayley => Ok(cayley(exp)),
        OutputKind::Axioms => Ok(axioms(exp)),
        OutputKind::State => Ok(state_doc(exp)),
        OutputKind::Amplitudes => amplitudes(exp),
        OutputKind::Measure => measure(exp),
        OutputKind::Gns => gns(exp),
        OutputKind::Evolve => evolve(exp),
    }
}

fn num(x: f64) -> String {
    format!("{x:.16e}")
}

fn write_csv(header: &[String], rows: impl Iterator<Item = Vec<String>>) -> String {
    let mut w = csv::WriterBuilder::new().terminator(csv::Terminator::Any(b'\n')).from_writer(Vec::new());
    w.write_record(header).expect("in-memory write");
    for r in rows {
        w.write_record(&r).expect("in-memory write");
    }
    String::from_utf8(w.into_inner().expect("in-memory flush")).expect("csv of UTF-8 fields")
}

fn flatten(prefix: &str, v: &Value, out: &mut Vec<Vec<String>>) {
    let join = |k: &str| if prefix.is_empty() { k.to_string() } else { format!("{prefix}.{k}") };
    match v {
        Value::Object(m) => m.iter().for_each(|(k, x)| flatten(&join(k), x, out)),
        Value::Array(a) => a.iter().enumerate().for_each(|(i, x)| flatten(&join(&i.to_string()), x, out)),
        Value::Null => out.push(vec![prefix.to_string(), String::new()]),
        Value::Bool(b) => out.push(vec![prefix.to_string(), b.to_string()]),
        Value::String(s) => out.push(vec![prefix.to_string(), s.clone()]),
        Value::Number(n) => {
            let text = match (n.as_u64(), n.as_i64(), n.as_f64()) {
                (Some(u), _, _) => u.to_string(),
                (_, Some(i), _) => i.to_string(),
                (_, _, Some(f)) => num(f),
                _ => n.to_string(),
            };
            out.push(vec![prefix.to_string(), text]);
        }
    }
}

fn render_doc(doc: Doc, format: Format) -> String {
    match (doc, format) {
        (Doc::Table { header, rows }, Format::Csv) => write_csv(
            &header,
            rows.into_iter().map(|r| {
                r.into_iter()
                    .map(|c| match c {
                        Cell::Num(x) => num(x),
                        Cell::Text(s) => s,
                    })
                    .collect()
            }),
        ),
        (Doc::Table { header, rows }, Format::Json) => {
            let rows: Vec<Value> = rows
                .into_iter()
                .map(|r| {
                    Value::Array(
                        r.into_iter()
                            .map(|c| match c {
                                Cell::Num(x) => json!(x),
                                Cell::Text(s) => Value::String(s),
                            })
                            .collect(),
                    )
                })
                .collect();
            pretty(&json!({"header": header, "rows": rows}))
        }
        (Doc::Json(v), Format::Json) => pretty(&v),
        (Doc::Json(v), Format::Csv) => {
            let mut out = Vec::new();
            flatten("", &v, &mut out);
            write_csv(&["path".to_string(), "value".to_string()], out.into_iter())
        }
    }
}

fn pretty(v: &Value) -> String {
    let mut s = serde_json::to_string_pretty(v).expect("JSON values serialize");
    s.push('\n');
    s
}

/// Renders one output; returns its file name and contents.
///
/// Tables default to CSV and documents to JSON unless `format` is given.
pub fn render(exp: &Experiment, kind: OutputKind, format: Option<Format>) -> Result<(String, String), Diagnostic> {
    let doc = build(exp, kind)?;
    let format = format.unwrap_or_else(|| doc.natural_format());
    Ok((format!("{}.{format}", kind.as_str()), render_doc(doc, format)))
}

pub fn write_output(
    exp: &Experiment,
    kind: OutputKind,
    dir: &Path,
    format: Option<Format>,
) -> Result<PathBuf, Diagnostic> {
    let (file, contents) = render(exp, kind, format)?;
    fs::create_dir_all(dir).map_err(|e| Diagnostic::new(Code::Io, format!("{}: {e}", dir.display())))?;
    let path = dir.join(file);
    fs::write(&path, contents).map_err(|e| Diagnostic::new(Code::Io, format!("{}: {e}", path.display())))?;
    Ok(path)
}

/// Writes every requested output after checking that all of them can be produced.
pub fn run(exp: &Experiment, dir: &Path, format: Option<Format>) -> Result<Vec<PathBuf>, Diagnostic> {
    exp.check_outputs()?;
    exp.requested_outputs().into_iter().map(|k| write_output(exp, k, dir, format)).collect()
}
