use std::collections::{BTreeMap, BTreeSet};

use num_complex::Complex64;
use serde::{Deserialize, Serialize};
use serde_json::Value;

use super::expr;
use super::{Code, Diagnostic};
use crate::algebra::AlgebraElement;
use crate::dynamics::{Hamiltonian, TimeGrid};
use crate::error::{Error, GroupoidError};
use crate::group::FiniteGroup;
use crate::groupoid::{generate_from_quiver, FiniteGroupoid, GroupoidTable, OutcomeId, Quiver, QuiverArrow};
use crate::measure::Event;
use crate::ratchet;
use crate::states::{factorizable_extend, state_from_phi, GroupoidFunction, State, EXTEND_TOL};

/// A complex number written as `[re, im]`.
pub type ComplexPair = [f64; 2];

/// The top-level experiment document.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct ExperimentSpec {
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub description: Option<String>,
    pub groupoid_source: GroupoidSource,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub naming: Option<Naming>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub state_source: Option<StateSource>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub hamiltonian: Option<HamiltonianSpec>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub grid: Option<GridSpec>,
    #[serde(default, skip_serializing_if = "Vec::is_empty")]
    pub outputs: Vec<OutputKind>,
    /// Amplitude pairs to tabulate; all ordered pairs when absent.
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub amplitudes: Option<Vec<AmplitudePair>>,
    /// Events to measure; every `A_{y,x}` when absent.
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub events: Option<Vec<EventSpec>>,
}

pub(crate) const CONSTRUCTORS: [&str; 5] = ["cyclic", "pair", "group", "quiver", "explicit"];

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum GroupoidSource {
    /// `[n_outcomes, k]`.
    Cyclic(usize, usize),
    Pair(usize),
    Group(GroupSpec),
    Quiver(QuiverSpec),
    Explicit(ExplicitSpec),
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Naming {
    /// `1_±`, `sigma_±`, `sigma2_±`, `alpha_j`, `beta_j` on a two-outcome Z_3 groupoid.
    Ratchet,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct GroupSpec {
    pub order: usize,
    pub table: Vec<Vec<usize>>,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct QuiverSpec {
    pub outcomes: Vec<String>,
    pub group: GroupSpec,
    pub generators: Vec<GeneratorSpec>,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct GeneratorSpec {
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub name: Option<String>,
    pub source: String,
    pub target: String,
    pub label: usize,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct ExplicitSpec {
    pub outcomes: Vec<String>,
    pub transitions: Vec<TransitionSpec>,
    /// `compose_table[a][b]` is `a ∘ b`, `null` where undefined.
    pub compose_table: Vec<Vec<Option<TransitionRef>>>,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct TransitionSpec {
    pub name: String,
    pub source: String,
    pub target: String,
}

/// A transition given by id or by name.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
#[serde(untagged)]
pub enum TransitionRef {
    Id(usize),
    Name(String),
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct StateSource {
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub phi: Option<Vec<ComplexPair>>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub weight: Option<f64>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub factorizable: Option<FactorizableSpec>,
}

/// Generator phases keyed by transition name, plus named parameters.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct FactorizableSpec {
    #[serde(default, skip_serializing_if = "BTreeMap::is_empty")]
    pub params: BTreeMap<String, ParamValue>,
    #[serde(flatten)]
    pub generators: BTreeMap<String, GeneratorValue>,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct GeneratorValue {
    pub phase: ParamValue,
}

/// A number or an arithmetic expression over `pi` and named parameters.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(untagged)]
pub enum ParamValue {
    Number(f64),
    Expr(String),
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct HamiltonianSpec {
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub groupoid: Option<String>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub coeffs: Option<Vec<ComplexPair>>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub terms: Option<BTreeMap<String, ComplexPair>>,
    #[serde(default = "yes")]
    pub check_selfadjoint: bool,
}

fn yes() -> bool {
    true
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct GridSpec {
    pub start: f64,
    pub stop: f64,
    pub steps: usize,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum OutputKind {
    Cayley,
    Axioms,
    State,
    Amplitudes,
    Measure,
    Gns,
    Evolve,
}

impl OutputKind {
    pub const ALL: [OutputKind; 7] = [
        OutputKind::Cayley,
        OutputKind::Axioms,
        OutputKind::State,
        OutputKind::Amplitudes,
        OutputKind::Measure,
        OutputKind::Gns,
        OutputKind::Evolve,
    ];

    pub fn as_str(self) -> &'static str {
        match self {
            OutputKind::Cayley => "cayley",
            OutputKind::Axioms => "axioms",
            OutputKind::State => "state",
            OutputKind::Amplitudes => "amplitudes",
            OutputKind::Measure => "measure",
            OutputKind::Gns => "gns",
            OutputKind::Evolve => "evolve",
        }
    }
}

/// `⟨to|from⟩`, written `{"from": x, "to": y}`.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct AmplitudePair {
    pub from: String,
    pub to: String,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
#[serde(untagged)]
pub enum EventSpec {
    Transitions(TransitionsEvent),
    Hom(AmplitudePair),
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct TransitionsEvent {
    pub transitions: Vec<TransitionRef>,
}

/// A spec with every reference resolved against the built groupoid.
#[derive(Debug, Clone)]
pub struct Experiment {
    pub spec: ExperimentSpec,
    pub groupoid: FiniteGroupoid,
    pub state: Option<State>,
    pub hamiltonian: Option<Hamiltonian>,
    pub grid: Option<TimeGrid>,
    /// `(from, to)` outcome pairs.
    pub amplitude_pairs: Vec<(OutcomeId, OutcomeId)>,
    pub events: Vec<(String, Event)>,
}

fn locate(code: Code, err: &serde_json::Error) -> Diagnostic {
    let mut d = Diagnostic::new(code, err.to_string());
    if err.line() > 0 {
        d.line = Some(err.line());
        d.column = Some(err.column());
    }
    d
}

fn precheck(value: &Value) -> Result<(), Diagnostic> {
    let Some(obj) = value.as_object() else {
        return Err(Diagnostic::new(Code::Schema, "top level must be a JSON object"));
    };
    if let Some(src) = obj.get("groupoid_source") {
        let key = match src {
            Value::Object(m) if m.len() == 1 => m.keys().next().cloned(),
            Value::String(s) => Some(s.clone()),
            _ => None,
        };
        match key {
            Some(k) if CONSTRUCTORS.contains(&k.as_str()) => {}
            Some(k) => {
                return Err(Diagnostic::new(
                    Code::UnknownConstructor,
                    format!("unknown groupoid constructor {k:?}; expected one of {}", CONSTRUCTORS.join(", ")),
                )
                .at("groupoid_source"))
            }
            None => {
                return Err(Diagnostic::new(
                    Code::Schema,
                    "groupoid_source must be an object with a single constructor",
                )
                .at("groupoid_source"))
            }
        }
    }
    if let Some(Value::Array(outs)) = obj.get("outputs") {
        for (i, o) in outs.iter().enumerate() {
            if let Value::String(s) = o {
                if !OutputKind::ALL.iter().any(|k| k.as_str() == s) {
                    return Err(
                        Diagnostic::new(Code::Output, format!("unknown output {s:?}")).at(format!("outputs[{i}]"))
                    );
                }
            }
        }
    }
    Ok(())
}

/// Syntax and schema checks only.
fn parse_document(bytes: &[u8]) -> Result<ExperimentSpec, Diagnostic> {
    let value: Value = serde_json::from_slice(bytes).map_err(|e| locate(Code::Syntax, &e))?;
    precheck(&value)?;
    let mut de = serde_json::Deserializer::from_slice(bytes);
    serde_path_to_error::deserialize(&mut de).map_err(|e| {
        let path = e.path().to_string();
        let mut d = locate(Code::Schema, e.inner());
        if path != "." {
            d.path = Some(path);
        }
        d
    })
}

/// Parses and fully validates an experiment document.
pub fn parse_spec(bytes: impl AsRef<[u8]>) -> Result<ExperimentSpec, Diagnostic> {
    load(bytes).map(|e| e.spec)
}

/// Parses, validates and resolves an experiment document.
pub fn load(bytes: impl AsRef<[u8]>) -> Result<Experiment, Diagnostic> {
    from_spec(parse_document(bytes.as_ref())?)
}

/// Canonical pretty-printed form; `parse_spec(print_spec(s)) == s`.
pub fn print_spec(spec: &ExperimentSpec) -> String {
    let mut s = serde_json::to_string_pretty(spec).expect("spec types always serialize");
    s.push('\n');
    s
}

fn groupoid_diag(e: GroupoidError, path: &str) -> Diagnostic {
    let code = match e {
        GroupoidError::Group(_) => Code::GroupTable,
        GroupoidError::Axioms(_) | GroupoidError::TableShape { .. } => Code::GroupoidAxioms,
        GroupoidError::UnknownOutcome(_) => Code::UnknownName,
        _ => Code::Schema,
    };
    Diagnostic::new(code, e.to_string()).at(path)
}

fn build_group(gs: &GroupSpec, path: &str) -> Result<FiniteGroup, Diagnostic> {
    if gs.table.len() != gs.order {
        return Err(Diagnostic::new(
            Code::GroupTable,
            format!("order is {} but the table has {} rows", gs.order, gs.table.len()),
        )
        .at(path));
    }
    FiniteGroup::from_table(gs.table.clone()).map_err(|e| Diagnostic::new(Code::GroupTable, e.to_string()).at(path))
}

fn outcome_index(labels: &[String], name: &str, path: String) -> Result<OutcomeId, Diagnostic> {
    labels
        .iter()
        .position(|l| l == name)
        .ok_or_else(|| Diagnostic::new(Code::UnknownName, format!("unknown outcome {name:?}")).at(path))
}

fn build_quiver(qs: &QuiverSpec) -> Result<Quiver, Diagnostic> {
    let group = build_group(&qs.group, "groupoid_source.quiver.group")?;
    let mut arrows = Vec::new();
    for (i, gspec) in qs.generators.iter().enumerate() {
        let path = format!("groupoid_source.quiver.generators[{i}]");
        arrows.push(QuiverArrow {
            name: gspec.name.clone(),
            source: outcome_index(&qs.outcomes, &gspec.source, format!("{path}.source"))?,
            target: outcome_index(&qs.outcomes, &gspec.target, format!("{path}.target"))?,
            label: gspec.label,
        });
    }
    Quiver::new(qs.outcomes.clone(), group, arrows).map_err(|e| groupoid_diag(e, "groupoid_source.quiver"))
}

fn build_explicit(es: &ExplicitSpec) -> Result<FiniteGroupoid, Diagnostic> {
    let base = "groupoid_source.explicit";
    let n = es.transitions.len();
    let mut names = Vec::with_capacity(n);
    let mut sources = Vec::with_capacity(n);
    let mut targets = Vec::with_capacity(n);
    for (i, t) in es.transitions.iter().enumerate() {
        let path = format!("{base}.transitions[{i}]");
        if names.contains(&t.name) {
            return Err(Diagnostic::new(Code::Schema, format!("duplicate transition name {:?}", t.name)).at(path));
        }
        names.push(t.name.clone());
        sources.push(outcome_index(&es.outcomes, &t.source, format!("{path}.source"))?);
        targets.push(outcome_index(&es.outcomes, &t.target, format!("{path}.target"))?);
    }
    if es.compose_table.len() != n || es.compose_table.iter().any(|r| r.len() != n) {
        return Err(Diagnostic::new(Code::GroupoidAxioms, format!("compose_table must be {n}x{n}"))
            .at(format!("{base}.compose_table")));
    }
    let mut compose = vec![vec![None; n]; n];
    for (a, row) in es.compose_table.iter().enumerate() {
        for (b, entry) in row.iter().enumerate() {
            if let Some(r) = entry {
                compose[a][b] = Some(resolve_ref(&names, r, format!("{base}.compose_table[{a}][{b}]"))?);
            }
        }
    }
    let table = GroupoidTable { outcomes: es.outcomes.clone(), names, sources, targets, compose };
    FiniteGroupoid::from_table(table).map_err(|e| groupoid_diag(e, base))
}

fn resolve_ref(names: &[String], r: &TransitionRef, path: String) -> Result<usize, Diagnostic> {
    match r {
        TransitionRef::Id(i) if *i < names.len() => Ok(*i),
        TransitionRef::Id(i) => {
            Err(Diagnostic::new(Code::UnknownName, format!("transition id {i} out of range")).at(path))
        }
        TransitionRef::Name(s) => names
            .iter()
            .position(|n| n == s)
            .ok_or_else(|| Diagnostic::new(Code::UnknownName, format!("unknown transition {s:?}")).at(path)),
    }
}

fn build_groupoid(spec: &ExperimentSpec) -> Result<FiniteGroupoid, Diagnostic> {
    let ratchet_names = spec.naming == Some(Naming::Ratchet);
    let g = match &spec.groupoid_source {
        GroupoidSource::Cyclic(2, 3) if ratchet_names => return Ok(ratchet::c23()),
        GroupoidSource::Cyclic(n, k) => {
            FiniteGroupoid::cyclic(*n, *k).map_err(|e| groupoid_diag(e, "groupoid_source.cyclic"))?
        }
        GroupoidSource::Pair(n) => FiniteGroupoid::pair(*n).map_err(|e| groupoid_diag(e, "groupoid_source.pair"))?,
        GroupoidSource::Group(gs) => FiniteGroupoid::from_group(build_group(gs, "groupoid_source.group")?),
        GroupoidSource::Quiver(qs) => generate_from_quiver(&build_quiver(qs)?),
        GroupoidSource::Explicit(es) => build_explicit(es)?,
    };
    if ratchet_names {
        return ratchet::apply_names(g).map_err(|e| Diagnostic::new(Code::Schema, e.to_string()).at("naming"));
    }
    Ok(g)
}

fn transition_names(g: &FiniteGroupoid) -> Vec<String> {
    g.transitions().iter().map(|t| t.name.clone()).collect()
}

fn outcome_labels(g: &FiniteGroupoid) -> Vec<String> {
    g.outcomes().iter().map(|o| o.label.clone()).collect()
}

fn to_complex(p: &ComplexPair) -> Complex64 {
    Complex64::new(p[0], p[1])
}

fn eval_params(params: &BTreeMap<String, ParamValue>, base: &str) -> Result<BTreeMap<String, f64>, Diagnostic> {
    fn visit(
        name: &str,
        params: &BTreeMap<String, ParamValue>,
        done: &mut BTreeMap<String, f64>,
        active: &mut BTreeSet<String>,
    ) -> Result<f64, String> {
        if let Some(&v) = done.get(name) {
            return Ok(v);
        }
        let Some(raw) = params.get(name) else { return Err(format!("unknown parameter {name:?}")) };
        if !active.insert(name.to_string()) {
            return Err(format!("parameter {name:?} depends on itself"));
        }
        let v = match raw {
            ParamValue::Number(x) if x.is_finite() => *x,
            ParamValue::Number(_) => return Err(format!("parameter {name:?} is not finite")),
            ParamValue::Expr(s) => expr::evaluate_with(s, |dep| visit(dep, params, done, active))?,
        };
        active.remove(name);
        done.insert(name.to_string(), v);
        Ok(v)
    }
    let mut done = BTreeMap::new();
    for name in params.keys() {
        let mut active = BTreeSet::new();
        visit(name, params, &mut done, &mut active)
            .map_err(|m| Diagnostic::new(Code::ParamExpr, m).at(format!("{base}.params.{name}")))?;
    }
    Ok(done)
}

fn eval_value(v: &ParamValue, bindings: &BTreeMap<String, f64>, path: String) -> Result<f64, Diagnostic> {
    match v {
        ParamValue::Number(x) if x.is_finite() => Ok(*x),
        ParamValue::Number(_) => Err(Diagnostic::new(Code::ParamExpr, "value is not finite").at(path)),
        ParamValue::Expr(s) => expr::evaluate(s, bindings).map_err(|m| Diagnostic::new(Code::ParamExpr, m).at(path)),
    }
}

fn state_diag(e: Error, path: &str) -> Diagnostic {
    Diagnostic::new(Code::State, e.to_string()).at(path)
}

fn build_state(g: &FiniteGroupoid, ss: &StateSource) -> Result<State, Diagnostic> {
    match (&ss.phi, &ss.factorizable) {
        (Some(phi), None) => {
            if phi.len() != g.len() {
                return Err(Diagnostic::new(
                    Code::State,
                    format!("phi has {} values but the groupoid has {} transitions", phi.len(), g.len()),
                )
                .at("state_source.phi"));
            }
            let phi = GroupoidFunction::new(phi.iter().map(to_complex).collect());
            match ss.weight {
                Some(w) => State::with_weight(g, phi, w),
                None => state_from_phi(g, phi),
            }
            .map_err(|e| state_diag(e, "state_source"))
        }
        (None, Some(fs)) => {
            if ss.weight.is_some() {
                return Err(Diagnostic::new(Code::Schema, "weight is derived for factorizable states")
                    .at("state_source.weight"));
            }
            factorizable_state(g, fs)
        }
        _ => {
            Err(Diagnostic::new(Code::Schema, "state_source needs exactly one of phi, factorizable").at("state_source"))
        }
    }
}

fn factorizable_state(g: &FiniteGroupoid, fs: &FactorizableSpec) -> Result<State, Diagnostic> {
    let base = "state_source.factorizable";
    let bindings = eval_params(&fs.params, base)?;
    let Some(group) = g.group() else {
        return Err(Diagnostic::new(Code::State, "generator phases need a groupoid labeled by a group").at(base));
    };
    let names = transition_names(g);
    let mut arrows = Vec::new();
    let mut values = Vec::new();
    for (name, gv) in &fs.generators {
        let path = format!("{base}.{name}");
        let id = resolve_ref(&names, &TransitionRef::Name(name.clone()), path.clone())?;
        let t = g.transition(id);
        arrows.push(QuiverArrow {
            name: Some(name.clone()),
            source: t.source,
            target: t.target,
            label: t.label.expect("labeled groupoid"),
        });
        values.push(Complex64::from_polar(1.0, eval_value(&gv.phase, &bindings, format!("{path}.phase"))?));
    }
    let quiver = Quiver::new(outcome_labels(g), group.clone(), arrows).map_err(|e| groupoid_diag(e, base))?;
    let phi = factorizable_extend(g, &quiver, &values, EXTEND_TOL).map_err(|e| state_diag(e, base))?;
    state_from_phi(g, phi).map_err(|e| state_diag(e, base))
}

fn build_hamiltonian(g: &FiniteGroupoid, hs: &HamiltonianSpec) -> Result<Hamiltonian, Diagnostic> {
    if !hs.check_selfadjoint {
        return Err(Diagnostic::new(Code::Schema, "self-adjointness cannot be waived: evolution needs a Hermitian h")
            .at("hamiltonian.check_selfadjoint"));
    }
    let element = match (&hs.coeffs, &hs.terms) {
        (Some(c), None) => {
            if c.len() != g.len() {
                return Err(Diagnostic::new(
                    Code::Schema,
                    format!("coeffs has {} entries but the groupoid has {} transitions", c.len(), g.len()),
                )
                .at("hamiltonian.coeffs"));
            }
            AlgebraElement::from_coeffs(c.iter().map(to_complex).collect())
        }
        (None, Some(terms)) => {
            let names = transition_names(g);
            let mut f = AlgebraElement::zero(g.len());
            for (name, c) in terms {
                let id = resolve_ref(&names, &TransitionRef::Name(name.clone()), format!("hamiltonian.terms.{name}"))?;
                f[id] += to_complex(c);
            }
            f
        }
        _ => {
            return Err(
                Diagnostic::new(Code::Schema, "hamiltonian needs exactly one of coeffs, terms").at("hamiltonian")
            )
        }
    };
    Hamiltonian::new(g, element).map_err(|e| {
        let code =
            if matches!(e, Error::NotSelfAdjoint { .. }) { Code::HamiltonianNotSelfAdjoint } else { Code::Schema };
        Diagnostic::new(code, e.to_string()).at("hamiltonian")
    })
}

/// Resolves an already-parsed spec (for instance one edited in memory).
pub fn from_spec(spec: ExperimentSpec) -> Result<Experiment, Diagnostic> {
    let groupoid = build_groupoid(&spec)?;
    let state = spec.state_source.as_ref().map(|ss| build_state(&groupoid, ss)).transpose()?;
    let hamiltonian = spec.hamiltonian.as_ref().map(|hs| build_hamiltonian(&groupoid, hs)).transpose()?;
    let grid = spec
        .grid
        .map(|gs| TimeGrid::new(gs.start, gs.stop, gs.steps))
        .transpose()
        .map_err(|e| Diagnostic::new(Code::Grid, e.to_string()).at("grid"))?;
    let labels = outcome_labels(&groupoid);
    let n = labels.len();
    let amplitude_pairs = match &spec.amplitudes {
        None => (0..n).flat_map(|x| (0..n).map(move |y| (x, y))).collect(),
        Some(pairs) => pairs
            .iter()
            .enumerate()
            .map(|(i, p)| {
                let path = format!("amplitudes[{i}]");
                Ok((
                    outcome_index(&labels, &p.from, format!("{path}.from"))?,
                    outcome_index(&labels, &p.to, format!("{path}.to"))?,
                ))
            })
            .collect::<Result<_, Diagnostic>>()?,
    };
    let names = transition_names(&groupoid);
    let hom_event = |x: usize, y: usize| (format!("A({},{})", labels[y], labels[x]), Event::hom(&groupoid, x, y));
    let events = match &spec.events {
        None => (0..n).flat_map(|x| (0..n).map(move |y| (x, y))).map(|(x, y)| hom_event(x, y)).collect(),
        Some(list) => list
            .iter()
            .enumerate()
            .map(|(i, e)| {
                let path = format!("events[{i}]");
                match e {
                    EventSpec::Hom(p) => Ok(hom_event(
                        outcome_index(&labels, &p.from, format!("{path}.from"))?,
                        outcome_index(&labels, &p.to, format!("{path}.to"))?,
                    )),
                    EventSpec::Transitions(t) => {
                        let ids = t
                            .transitions
                            .iter()
                            .enumerate()
                            .map(|(j, r)| resolve_ref(&names, r, format!("{path}.transitions[{j}]")))
                            .collect::<Result<Vec<_>, _>>()?;
                        Ok((format!("event{i}"), Event::from_ids(groupoid.len(), ids)))
                    }
                }
            })
            .collect::<Result<_, Diagnostic>>()?,
    };
    Ok(Experiment { spec, groupoid, state, hamiltonian, grid, amplitude_pairs, events })
}

impl Experiment {
    /// Outputs the spec asks for; `cayley` and `axioms` when it names none.
    pub fn requested_outputs(&self) -> Vec<OutputKind> {
        if self.spec.outputs.is_empty() {
            vec![OutputKind::Cayley, OutputKind::Axioms]
        } else {
            self.spec.outputs.clone()
        }
    }

    /// Checks that everything `kind` needs was supplied.
    pub fn check_output(&self, kind: OutputKind) -> Result<(), Diagnostic> {
        let needs_state = !matches!(kind, OutputKind::Cayley | OutputKind::Axioms);
        let needs_dynamics = matches!(kind, OutputKind::Amplitudes | OutputKind::Evolve);
        if needs_state && self.state.is_none() {
            return Err(Diagnostic::new(
                Code::MissingState,
                format!("output {:?} needs a state_source", kind.as_str()),
            ));
        }
        if needs_dynamics && self.hamiltonian.is_none() {
            return Err(Diagnostic::new(Code::Output, format!("output {:?} needs a hamiltonian", kind.as_str())));
        }
        if needs_dynamics && self.grid.is_none() {
            return Err(Diagnostic::new(Code::Grid, format!("output {:?} needs a time grid", kind.as_str())));
        }
        Ok(())
    }

    pub fn check_outputs(&self) -> Result<(), Diagnostic> {
        self.requested_outputs().into_iter().try_for_each(|k| self.check_output(k))
    }
}
