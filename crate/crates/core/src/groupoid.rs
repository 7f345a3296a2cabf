//! Finite groupoids of transitions between outcomes.
//!
//! Composition follows the right-to-left convention: `compose(a, b)` is the
//! transition "first `b`, then `a`" and is defined iff `source(a) == target(b)`.
//!
//! Groupoids are built either from an explicit composition table (validated
//! strictly at load time) or from transitions labeled by elements of a
//! [`FiniteGroup`], where composition multiplies labels.

use std::collections::{BTreeMap, BTreeSet, HashMap};
use std::fmt;

use serde::{Deserialize, Serialize};

use crate::error::GroupoidError;
use crate::group::FiniteGroup;

pub type OutcomeId = usize;
pub type TransitionId = usize;

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct Outcome {
    pub id: OutcomeId,
    pub label: String,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct Transition {
    pub id: TransitionId,
    pub source: OutcomeId,
    pub target: OutcomeId,
    /// Group element carried by the transition, for labeled groupoids.
    pub label: Option<usize>,
    pub name: String,
}

/// An unchecked groupoid presentation: arrows plus a partial composition table.
///
/// `compose[a][b]` holds `a ∘ b` or `None` where undefined.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct GroupoidTable {
    pub outcomes: Vec<String>,
    pub names: Vec<String>,
    pub sources: Vec<OutcomeId>,
    pub targets: Vec<OutcomeId>,
    pub compose: Vec<Vec<Option<TransitionId>>>,
}

/// One failed instance of a groupoid axiom.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "snake_case")]
pub enum Violation {
    /// The table shape or an index is out of range.
    Malformed {
        detail: String,
    },
    /// Defined-ness of `a ∘ b` disagrees with `source(a) == target(b)`.
    Composability {
        a: TransitionId,
        b: TransitionId,
        defined: bool,
    },
    /// `a ∘ b` is defined but does not run from `source(b)` to `target(a)`.
    Closure {
        a: TransitionId,
        b: TransitionId,
        result: TransitionId,
    },
    Associativity {
        a: TransitionId,
        b: TransitionId,
        c: TransitionId,
    },
    MissingUnit {
        outcome: OutcomeId,
    },
    UnitLaw {
        transition: TransitionId,
    },
    MissingInverse {
        transition: TransitionId,
    },
    /// Two transitions share the same inverse.
    Reversibility {
        a: TransitionId,
        b: TransitionId,
    },
}

/// Collected axiom violations. Empty means the table is a groupoid.
#[derive(Debug, Clone, Default, PartialEq, Eq, Serialize, Deserialize)]
pub struct AxiomReport {
    pub violations: Vec<Violation>,
}

impl AxiomReport {
    pub fn is_empty(&self) -> bool {
        self.violations.is_empty()
    }

    pub fn len(&self) -> usize {
        self.violations.len()
    }
}

impl fmt::Display for AxiomReport {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self.violations.first() {
            None => write!(f, "no violations"),
            Some(first) => write!(f, "{} violation(s), first: {:?}", self.violations.len(), first),
        }
    }
}

/// Exhaustively checks composability, closure, associativity, unit laws,
/// inverse laws and reversibility of a table.
pub fn check_axioms(table: &GroupoidTable) -> AxiomReport {
    let mut report = AxiomReport::default();
    let n = table.names.len();
    let n_out = table.outcomes.len();
    let v = &mut report.violations;

    if table.sources.len() != n || table.targets.len() != n {
        v.push(Violation::Malformed { detail: "source/target lists differ in length from transitions".into() });
        return report;
    }
    if table.compose.len() != n || table.compose.iter().any(|row| row.len() != n) {
        v.push(Violation::Malformed { detail: format!("compose table must be {n}x{n}") });
        return report;
    }
    if let Some(bad) = table.sources.iter().chain(&table.targets).find(|&&x| x >= n_out) {
        v.push(Violation::Malformed { detail: format!("outcome index {bad} out of range") });
        return report;
    }
    for a in 0..n {
        for b in 0..n {
            if let Some(r) = table.compose[a][b] {
                if r >= n {
                    v.push(Violation::Malformed { detail: format!("entry ({a},{b}) = {r} out of range") });
                    return report;
                }
            }
        }
    }

    let src = &table.sources;
    let tgt = &table.targets;
    let comp = |a: usize, b: usize| table.compose[a][b];

    for a in 0..n {
        for b in 0..n {
            let should = src[a] == tgt[b];
            match comp(a, b) {
                Some(r) if should => {
                    if src[r] != src[b] || tgt[r] != tgt[a] {
                        v.push(Violation::Closure { a, b, result: r });
                    }
                }
                None if !should => {}
                entry => v.push(Violation::Composability { a, b, defined: entry.is_some() }),
            }
        }
    }

    for a in 0..n {
        for b in 0..n {
            if src[a] != tgt[b] {
                continue;
            }
            for (c, &tc) in tgt.iter().enumerate() {
                if src[b] != tc {
                    continue;
                }
                let left = comp(a, b).and_then(|ab| comp(ab, c));
                let right = comp(b, c).and_then(|bc| comp(a, bc));
                if left != right {
                    v.push(Violation::Associativity { a, b, c });
                }
            }
        }
    }

    let units = find_units(table);
    for (x, unit) in units.iter().enumerate() {
        if unit.is_none() {
            v.push(Violation::MissingUnit { outcome: x });
        }
    }
    for a in 0..n {
        if let (Some(us), Some(ut)) = (units[src[a]], units[tgt[a]]) {
            if comp(a, us) != Some(a) || comp(ut, a) != Some(a) {
                v.push(Violation::UnitLaw { transition: a });
            }
        }
    }

    let mut inverse_of: HashMap<usize, usize> = HashMap::new();
    for a in 0..n {
        let (Some(us), Some(ut)) = (units[src[a]], units[tgt[a]]) else { continue };
        let inv = (0..n).find(|&b| comp(a, b) == Some(ut) && comp(b, a) == Some(us));
        match inv {
            None => v.push(Violation::MissingInverse { transition: a }),
            Some(b) => {
                if let Some(&prev) = inverse_of.get(&b) {
                    v.push(Violation::Reversibility { a: prev, b: a });
                } else {
                    inverse_of.insert(b, a);
                }
            }
        }
    }
    report
}

fn find_units(table: &GroupoidTable) -> Vec<Option<TransitionId>> {
    let n = table.names.len();
    (0..table.outcomes.len())
        .map(|x| {
            let candidates: Vec<usize> = (0..n)
                .filter(|&e| table.sources[e] == x && table.targets[e] == x && table.compose[e][e] == Some(e))
                .collect();
            // Prefer an idempotent that acts as a two-sided identity on its loops.
            candidates
                .iter()
                .copied()
                .find(|&e| {
                    (0..n).all(|a| {
                        (table.sources[a] != x || table.compose[a][e] == Some(a))
                            && (table.targets[a] != x || table.compose[e][a] == Some(a))
                    })
                })
                .or_else(|| candidates.first().copied())
        })
        .collect()
}

/// A validated finite groupoid.
#[derive(Debug, Clone, PartialEq)]
pub struct FiniteGroupoid {
    outcomes: Vec<Outcome>,
    transitions: Vec<Transition>,
    compose: Vec<Option<TransitionId>>,
    inverse: Vec<TransitionId>,
    units: Vec<TransitionId>,
    group: Option<FiniteGroup>,
    composable: Vec<(TransitionId, TransitionId, TransitionId)>,
}

impl FiniteGroupoid {
    /// Loads an explicit table, rejecting it unless every axiom holds.
    pub fn from_table(table: GroupoidTable) -> Result<Self, GroupoidError> {
        check_outcome_labels(&table.outcomes)?;
        let report = check_axioms(&table);
        if !report.is_empty() {
            return Err(GroupoidError::Axioms(report));
        }
        let units: Vec<usize> = find_units(&table).into_iter().map(|u| u.unwrap()).collect();
        let n = table.names.len();
        let transitions = (0..n)
            .map(|i| Transition {
                id: i,
                source: table.sources[i],
                target: table.targets[i],
                label: None,
                name: table.names[i].clone(),
            })
            .collect();
        let compose: Vec<Option<usize>> = table.compose.iter().flatten().copied().collect();
        let inverse = (0..n)
            .map(|a| {
                let ut = units[table.targets[a]];
                (0..n).find(|&b| compose[a * n + b] == Some(ut)).unwrap()
            })
            .collect();
        Ok(Self::assemble(make_outcomes(&table.outcomes), transitions, compose, inverse, units, None))
    }

    /// Builds a groupoid whose transitions are `(target, label, source)` triples
    /// with label-multiplying composition. The triple set must be closed.
    fn from_labeled(
        outcome_labels: &[String],
        group: FiniteGroup,
        triples: BTreeSet<(OutcomeId, OutcomeId, usize)>,
        names: &BTreeMap<(OutcomeId, usize, OutcomeId), String>,
    ) -> Self {
        // Canonical order: by target, then source, then label.
        let triples: Vec<(usize, usize, usize)> = triples.into_iter().collect();
        let index: HashMap<(usize, usize, usize), usize> = triples.iter().enumerate().map(|(i, &t)| (t, i)).collect();
        let trivial = group.order() == 1;
        let transitions: Vec<Transition> = triples
            .iter()
            .enumerate()
            .map(|(id, &(target, source, label))| {
                let name = names.get(&(target, label, source)).cloned().unwrap_or_else(|| {
                    if trivial {
                        format!("({},{})", outcome_labels[target], outcome_labels[source])
                    } else {
                        format!("({},{},{})", outcome_labels[target], label, outcome_labels[source])
                    }
                });
                Transition { id, source, target, label: Some(label), name }
            })
            .collect();
        let n = transitions.len();
        let mut compose = vec![None; n * n];
        for a in &transitions {
            for b in &transitions {
                if a.source == b.target {
                    let key = (a.target, b.source, group.mul(a.label.unwrap(), b.label.unwrap()));
                    compose[a.id * n + b.id] = Some(index[&key]);
                }
            }
        }
        let e = group.identity();
        let units = (0..outcome_labels.len()).map(|x| index[&(x, x, e)]).collect();
        let inverse =
            transitions.iter().map(|a| index[&(a.source, a.target, group.inverse(a.label.unwrap()))]).collect();
        Self::assemble(make_outcomes(outcome_labels), transitions, compose, inverse, units, Some(group))
    }

    fn assemble(
        outcomes: Vec<Outcome>,
        transitions: Vec<Transition>,
        compose: Vec<Option<usize>>,
        inverse: Vec<usize>,
        units: Vec<usize>,
        group: Option<FiniteGroup>,
    ) -> Self {
        let n = transitions.len();
        let composable = (0..n)
            .flat_map(|a| (0..n).map(move |b| (a, b)))
            .filter_map(|(a, b)| compose[a * n + b].map(|c| (a, b, c)))
            .collect();
        Self { outcomes, transitions, compose, inverse, units, group, composable }
    }

    /// The pair groupoid on `n` outcomes labeled `"0".."n-1"`.
    pub fn pair(n: usize) -> Result<Self, GroupoidError> {
        if n == 0 {
            return Err(GroupoidError::InvalidArgument("pair groupoid needs at least one outcome".into()));
        }
        let labels: Vec<String> = (0..n).map(|i| i.to_string()).collect();
        Self::cyclic_with_labels(&labels, 1)
    }

    /// The cyclic groupoid C_{n,k} with outcomes labeled `"0".."n-1"`.
    pub fn cyclic(n_outcomes: usize, k: usize) -> Result<Self, GroupoidError> {
        let labels: Vec<String> = (0..n_outcomes).map(|i| i.to_string()).collect();
        Self::cyclic_with_labels(&labels, k)
    }

    /// All triples `(y, σ^j, x)` over the given outcomes with `σ` generating Z_k.
    pub fn cyclic_with_labels(outcome_labels: &[String], k: usize) -> Result<Self, GroupoidError> {
        if outcome_labels.is_empty() || k == 0 {
            return Err(GroupoidError::InvalidArgument("cyclic groupoid needs n_outcomes >= 1 and k >= 1".into()));
        }
        check_outcome_labels(outcome_labels)?;
        Ok(Self::full_labeled(outcome_labels, FiniteGroup::cyclic(k)))
    }

    /// Every triple `(y, g, x)` for outcomes `x, y` and group elements `g`.
    pub fn full_labeled(outcome_labels: &[String], group: FiniteGroup) -> Self {
        let n = outcome_labels.len();
        let order = group.order();
        let triples = (0..n).flat_map(|y| (0..n).flat_map(move |x| (0..order).map(move |g| (y, x, g)))).collect();
        Self::from_labeled(outcome_labels, group, triples, &BTreeMap::new())
    }

    /// A group viewed as a one-outcome groupoid.
    pub fn from_group(group: FiniteGroup) -> Self {
        Self::full_labeled(&["*".to_string()], group)
    }

    pub fn outcomes(&self) -> &[Outcome] {
        &self.outcomes
    }

    pub fn transitions(&self) -> &[Transition] {
        &self.transitions
    }

    pub fn transition(&self, id: TransitionId) -> &Transition {
        &self.transitions[id]
    }

    pub fn num_outcomes(&self) -> usize {
        self.outcomes.len()
    }

    pub fn len(&self) -> usize {
        self.transitions.len()
    }

    pub fn is_empty(&self) -> bool {
        self.transitions.is_empty()
    }

    pub fn group(&self) -> Option<&FiniteGroup> {
        self.group.as_ref()
    }

    pub fn source(&self, a: TransitionId) -> OutcomeId {
        self.transitions[a].source
    }

    pub fn target(&self, a: TransitionId) -> OutcomeId {
        self.transitions[a].target
    }

    /// `a ∘ b` ("first `b`, then `a`"), or `None` when `source(a) != target(b)`.
    pub fn compose(&self, a: TransitionId, b: TransitionId) -> Option<TransitionId> {
        self.compose[a * self.len() + b]
    }

    pub fn inverse(&self, a: TransitionId) -> TransitionId {
        self.inverse[a]
    }

    pub fn unit(&self, x: OutcomeId) -> TransitionId {
        self.units[x]
    }

    pub fn units(&self) -> &[TransitionId] {
        &self.units
    }

    pub fn is_unit(&self, a: TransitionId) -> bool {
        self.units[self.source(a)] == a
    }

    /// All composable pairs `(a, b, a ∘ b)`.
    pub fn composable_triples(&self) -> &[(TransitionId, TransitionId, TransitionId)] {
        &self.composable
    }

    pub fn outcome_by_label(&self, label: &str) -> Option<OutcomeId> {
        self.outcomes.iter().position(|o| o.label == label)
    }

    pub fn transition_by_name(&self, name: &str) -> Option<TransitionId> {
        self.transitions.iter().position(|t| t.name == name)
    }

    /// Looks up the labeled transition `(target, label, source)`.
    pub fn find(&self, target: OutcomeId, label: usize, source: OutcomeId) -> Option<TransitionId> {
        self.transitions.iter().position(|t| t.target == target && t.source == source && t.label == Some(label))
    }

    /// Transitions `x → y`.
    pub fn hom(&self, x: OutcomeId, y: OutcomeId) -> impl Iterator<Item = TransitionId> + '_ {
        self.transitions.iter().filter(move |t| t.source == x && t.target == y).map(|t| t.id)
    }

    /// Transitions ending at `y`.
    pub fn target_fiber(&self, y: OutcomeId) -> impl Iterator<Item = TransitionId> + '_ {
        self.transitions.iter().filter(move |t| t.target == y).map(|t| t.id)
    }

    /// Transitions starting at `x`.
    pub fn source_fiber(&self, x: OutcomeId) -> impl Iterator<Item = TransitionId> + '_ {
        self.transitions.iter().filter(move |t| t.source == x).map(|t| t.id)
    }

    /// Replaces transition names; the list must cover every transition.
    pub fn with_names(mut self, names: Vec<String>) -> Result<Self, GroupoidError> {
        if names.len() != self.len() {
            return Err(GroupoidError::InvalidArgument(format!("expected {} names, got {}", self.len(), names.len())));
        }
        let distinct: BTreeSet<&String> = names.iter().collect();
        if distinct.len() != names.len() {
            return Err(GroupoidError::InvalidArgument("transition names must be unique".into()));
        }
        for (t, name) in self.transitions.iter_mut().zip(names) {
            t.name = name;
        }
        Ok(self)
    }

    /// The explicit-table presentation of this groupoid.
    pub fn to_table(&self) -> GroupoidTable {
        let n = self.len();
        GroupoidTable {
            outcomes: self.outcomes.iter().map(|o| o.label.clone()).collect(),
            names: self.transitions.iter().map(|t| t.name.clone()).collect(),
            sources: self.transitions.iter().map(|t| t.source).collect(),
            targets: self.transitions.iter().map(|t| t.target).collect(),
            compose: (0..n).map(|a| (0..n).map(|b| self.compose(a, b)).collect()).collect(),
        }
    }

    pub fn check_axioms(&self) -> AxiomReport {
        check_axioms(&self.to_table())
    }
}

fn make_outcomes(labels: &[String]) -> Vec<Outcome> {
    labels.iter().enumerate().map(|(id, l)| Outcome { id, label: l.clone() }).collect()
}

fn check_outcome_labels(labels: &[String]) -> Result<(), GroupoidError> {
    let mut seen = BTreeSet::new();
    for l in labels {
        if !seen.insert(l) {
            return Err(GroupoidError::DuplicateOutcome(l.clone()));
        }
    }
    Ok(())
}

/// A generating arrow of a quiver.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct QuiverArrow {
    pub name: Option<String>,
    pub source: OutcomeId,
    pub target: OutcomeId,
    pub label: usize,
}

/// Outcomes plus generating transitions labeled in a finite group.
#[derive(Debug, Clone, PartialEq)]
pub struct Quiver {
    outcomes: Vec<String>,
    group: FiniteGroup,
    generators: Vec<QuiverArrow>,
}

impl Quiver {
    pub fn new(outcomes: Vec<String>, group: FiniteGroup, generators: Vec<QuiverArrow>) -> Result<Self, GroupoidError> {
        if outcomes.is_empty() {
            return Err(GroupoidError::InvalidArgument("quiver needs at least one outcome".into()));
        }
        check_outcome_labels(&outcomes)?;
        let mut seen = BTreeSet::new();
        for g in &generators {
            for x in [g.source, g.target] {
                if x >= outcomes.len() {
                    return Err(GroupoidError::OutcomeOutOfRange { index: x, count: outcomes.len() });
                }
            }
            if g.label >= group.order() {
                return Err(GroupoidError::LabelOutOfRange { label: g.label, order: group.order() });
            }
            if !seen.insert((g.target, g.label, g.source)) {
                return Err(GroupoidError::DuplicateTransition { to: g.target, label: Some(g.label), from: g.source });
            }
        }
        Ok(Self { outcomes, group, generators })
    }

    /// Every transition of a labeled groupoid as a generator.
    pub fn from_groupoid(g: &FiniteGroupoid) -> Result<Self, GroupoidError> {
        let group =
            g.group().cloned().ok_or_else(|| GroupoidError::InvalidArgument("groupoid has no label group".into()))?;
        let generators = g
            .transitions()
            .iter()
            .map(|t| QuiverArrow {
                name: Some(t.name.clone()),
                source: t.source,
                target: t.target,
                label: t.label.unwrap(),
            })
            .collect();
        Self::new(g.outcomes().iter().map(|o| o.label.clone()).collect(), group, generators)
    }

    pub fn outcomes(&self) -> &[String] {
        &self.outcomes
    }

    pub fn group(&self) -> &FiniteGroup {
        &self.group
    }

    pub fn generators(&self) -> &[QuiverArrow] {
        &self.generators
    }

    /// Transition id of each generator inside `g`.
    pub fn generator_ids(&self, g: &FiniteGroupoid) -> Vec<Option<TransitionId>> {
        self.generators.iter().map(|q| g.find(q.target, q.label, q.source)).collect()
    }
}

/// Closure of a quiver's generators, their inverses and all units under composition.
pub fn generate_from_quiver(q: &Quiver) -> FiniteGroupoid {
    let group = &q.group;
    let n = q.outcomes.len();
    let inv = |(t, s, l): (usize, usize, usize)| (s, t, group.inverse(l));
    // Triples are (target, source, label).
    let letters: Vec<(usize, usize, usize)> = q
        .generators
        .iter()
        .flat_map(|a| {
            let t = (a.target, a.source, a.label);
            [t, inv(t)]
        })
        .collect();
    let mut known: BTreeSet<(usize, usize, usize)> = (0..n).map(|x| (x, x, group.identity())).collect();
    let mut frontier: Vec<(usize, usize, usize)> = known.iter().copied().collect();
    while !frontier.is_empty() {
        let mut next = Vec::new();
        for &(t, s, l) in &frontier {
            for &(lt, ls, ll) in &letters {
                if ls == t {
                    let w = (lt, s, group.mul(ll, l));
                    if known.insert(w) {
                        next.push(w);
                    }
                }
            }
        }
        frontier = next;
    }
    let names =
        q.generators.iter().filter_map(|a| a.name.clone().map(|nm| ((a.target, a.label, a.source), nm))).collect();
    FiniteGroupoid::from_labeled(&q.outcomes, group.clone(), known, &names)
}

/// For each generator, whether it cannot be written as a composite of two
/// quiver elements.
pub fn is_irreducible(q: &Quiver, g: &FiniteGroupoid) -> Vec<bool> {
    let ids = q.generator_ids(g);
    ids.iter()
        .map(|&target| {
            let Some(target) = target else { return true };
            !ids.iter().flatten().any(|&a| ids.iter().flatten().any(|&b| g.compose(a, b) == Some(target)))
        })
        .collect()
}
