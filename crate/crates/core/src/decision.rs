//! The periodicity decision: structural conditions UP0 to UP4 on a minimal
//! automaton, checked in `O(b n)`, followed by recovery of the accepted set.

use std::borrow::Cow;
use std::fmt;

use serde::Serialize;

use crate::arith::lcm;
use crate::automaton::{Dfa, StateId, NO_STATE};
use crate::error::{Error, Result};
use crate::isomorphism::isomorphic;
use crate::minimize::minimize;
use crate::numeration::{
    build_minimal_automaton_with_limit, canonicalize, representation, CharacteristicProfile, UpSet,
};
use crate::pascal::{
    is_pascal_quotient, stable_group_quotient, transitive_group_quotient, PascalParams, Rejection,
};
use crate::scc::{Condensation, SccId, SccType};

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize)]
pub enum Condition {
    UP0,
    UP1,
    UP2,
    UP3,
    UP4,
}

impl fmt::Display for Condition {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        fmt::Debug::fmt(self, f)
    }
}

/// What went wrong inside a violated condition.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub enum Diagnostic {
    /// A type-one component has a transition leading out of it.
    Escapes,
    Pascal(Rejection),
    /// Number of descendants of a type-two component, when not 1.
    Descendants(usize),
    /// The only descendant of a type-two component is not of type one.
    DescendantType(SccType),
    /// The forced embedding does not commute with some transition.
    NoEmbedding,
}

impl fmt::Display for Diagnostic {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Diagnostic::Escapes => write!(f, "transition leaves the component"),
            Diagnostic::Pascal(r) => write!(f, "not a Pascal quotient: {r}"),
            Diagnostic::Descendants(n) => write!(f, "{n} descendants instead of 1"),
            Diagnostic::DescendantType(t) => write!(f, "descendant is {}", t.label()),
            Diagnostic::NoEmbedding => write!(f, "no embedding into the descendant"),
        }
    }
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Failure {
    pub condition: Condition,
    /// A state violating the condition; for component-level conditions, the
    /// lowest-numbered state of the offending component.
    pub witness: StateId,
    pub diagnostic: Option<Diagnostic>,
}

impl fmt::Display for Failure {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "failed={} witness={}", self.condition, self.witness)?;
        if let Some(d) = &self.diagnostic {
            write!(f, " ({d})")?;
        }
        Ok(())
    }
}

/// Outcome of [`check_conditions`].
#[derive(Clone, Debug, PartialEq, Eq)]
pub enum Conditions {
    /// All conditions hold; parameters of each type-one component, in
    /// component order.
    Satisfied(Vec<PascalParams>),
    Violated(Failure),
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub enum DecisionResult {
    UltimatelyPeriodic(UpSet),
    NotUltimatelyPeriodic(Failure),
}

#[derive(Serialize)]
struct Report<'a> {
    ultimately_periodic: bool,
    #[serde(skip_serializing_if = "Option::is_none")]
    period: Option<u64>,
    #[serde(skip_serializing_if = "Option::is_none")]
    remainders: Option<Vec<u64>>,
    #[serde(skip_serializing_if = "Option::is_none")]
    mismatches: Option<&'a [u64]>,
    #[serde(skip_serializing_if = "Option::is_none")]
    failed_condition: Option<Condition>,
    #[serde(skip_serializing_if = "Option::is_none")]
    witness: Option<StateId>,
    #[serde(skip_serializing_if = "Option::is_none")]
    diagnostic: Option<String>,
}

impl DecisionResult {
    pub fn is_ultimately_periodic(&self) -> bool {
        matches!(self, DecisionResult::UltimatelyPeriodic(_))
    }

    pub fn set(&self) -> Option<&UpSet> {
        match self {
            DecisionResult::UltimatelyPeriodic(s) => Some(s),
            DecisionResult::NotUltimatelyPeriodic(_) => None,
        }
    }

    pub fn failure(&self) -> Option<&Failure> {
        match self {
            DecisionResult::UltimatelyPeriodic(_) => None,
            DecisionResult::NotUltimatelyPeriodic(f) => Some(f),
        }
    }

    fn report(&self) -> Report<'_> {
        match self {
            DecisionResult::UltimatelyPeriodic(s) => Report {
                ultimately_periodic: true,
                period: Some(s.period()),
                remainders: Some(s.remainders().collect()),
                mismatches: Some(s.mismatches()),
                failed_condition: None,
                witness: None,
                diagnostic: None,
            },
            DecisionResult::NotUltimatelyPeriodic(f) => Report {
                ultimately_periodic: false,
                period: None,
                remainders: None,
                mismatches: None,
                failed_condition: Some(f.condition),
                witness: Some(f.witness),
                diagnostic: f.diagnostic.map(|d| d.to_string()),
            },
        }
    }

    pub fn to_json(&self) -> serde_json::Value {
        serde_json::to_value(self.report()).expect("report serializes")
    }
}

impl Serialize for DecisionResult {
    fn serialize<S: serde::Serializer>(&self, s: S) -> std::result::Result<S::Ok, S::Error> {
        self.report().serialize(s)
    }
}

impl fmt::Display for DecisionResult {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            DecisionResult::UltimatelyPeriodic(s) => {
                let list = |v: Vec<u64>| {
                    if v.is_empty() {
                        "-".to_string()
                    } else {
                        v.iter().map(u64::to_string).collect::<Vec<_>>().join(",")
                    }
                };
                write!(
                    f,
                    "period={} remainders={} mismatches={}",
                    s.period(),
                    list(s.remainders().collect()),
                    list(s.mismatches().to_vec())
                )
            }
            DecisionResult::NotUltimatelyPeriodic(fail) => {
                write!(f, "not ultimately periodic: {fail}")
            }
        }
    }
}

/// Map from a type-two component `C` into its descendant `D`; the identity
/// on `D` is left implicit.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Embedding {
    pairs: Vec<(StateId, StateId)>,
}

impl Embedding {
    /// Image of each state of `C`.
    pub fn pairs(&self) -> &[(StateId, StateId)] {
        &self.pairs
    }

    pub fn image(&self, q: StateId) -> Option<StateId> {
        self.pairs.iter().find(|&&(s, _)| s == q).map(|&(_, t)| t)
    }
}

/// For every state `t` of a type-one component, the state `y` of the same
/// component with `y.1 = t`, when unique.
/// The sub-automaton on sorted `states`, started at the lowest one, or `None`
/// if a transition leaves them. A minimal automaton starts at state 0, so a
/// component holding every state is the automaton itself.
fn closed_part<'a>(
    dfa: &'a Dfa,
    cond: &Condensation,
    c: SccId,
    scratch: &mut Vec<u32>,
) -> Option<Cow<'a, Dfa>> {
    if cond.size(c) == dfa.state_count() && dfa.initial() == 0 {
        return dfa.is_complete().then_some(Cow::Borrowed(dfa));
    }
    if scratch.is_empty() {
        scratch.resize(dfa.state_count(), NO_STATE);
    }
    dfa.restrict_with(cond.members(c), scratch).map(Cow::Owned)
}

fn internal_one_predecessors(dfa: &Dfa, cond: &Condensation) -> Vec<u32> {
    let mut pred = vec![NO_STATE; dfa.state_count()];
    for c in cond.sccs_of_type(SccType::TypeOne) {
        for &y in cond.members(c) {
            let t = dfa.step(y, 1);
            if cond.scc_of(t) == c {
                pred[t] = y as u32;
            }
        }
    }
    pred
}

/// Builds the only candidate embedding of `c` into `d` and verifies it on
/// every transition of `c`. Returns the offending state on failure.
fn embed(
    dfa: &Dfa,
    cond: &Condensation,
    one_pred: &[u32],
    c: SccId,
    d: SccId,
) -> std::result::Result<Embedding, StateId> {
    let image = |x: StateId| -> Option<StateId> {
        let t = dfa.step(x, 1);
        if cond.scc_of(t) != d {
            return None;
        }
        let y = one_pred[t];
        (y != NO_STATE).then_some(y as usize)
    };
    let mut pairs = Vec::with_capacity(cond.members(c).len());
    for &s in cond.members(c) {
        pairs.push((s, image(s).ok_or(s)?));
    }
    for &(s, fs) in &pairs {
        // 0 keeps s inside the circuit, so both sides are images under f.
        let s0 = dfa.step(s, 0);
        if image(s0) != Some(dfa.step(fs, 0)) {
            return Err(s);
        }
        for a in 1..dfa.base() {
            if dfa.step(s, a) != dfa.step(fs, a) {
                return Err(s);
            }
        }
    }
    Ok(Embedding { pairs })
}

/// The embedding of type-two component `c` into type-one component `d`, if
/// one exists. `dfa` must be complete with `d` closed under transitions.
pub fn build_embedding(dfa: &Dfa, cond: &Condensation, c: SccId, d: SccId) -> Option<Embedding> {
    if cond.scc_type(c) != SccType::TypeTwo || cond.scc_type(d) != SccType::TypeOne {
        return None;
    }
    let one_pred = internal_one_predecessors(dfa, cond);
    embed(dfa, cond, &one_pred, c, d).ok()
}

/// Checks UP0 and UP2 to UP4 on a complete automaton assumed minimal.
pub fn check_conditions(dfa: &Dfa) -> Result<Conditions> {
    if !dfa.is_complete() {
        return Err(Error::PreconditionViolated(
            "conditions are checked on complete automata".into(),
        ));
    }
    let fail = |condition, witness, diagnostic| {
        Ok(Conditions::Violated(Failure {
            condition,
            witness,
            diagnostic,
        }))
    };
    if let Some(q) = dfa.zero_stability_witness() {
        return fail(Condition::UP0, q, None);
    }
    if dfa.initial() == 0 {
        if let Some(params) = transitive_group_quotient(dfa) {
            return Ok(Conditions::Satisfied(vec![params]));
        }
    }
    let cond = Condensation::new(dfa);
    let lowest = |c: SccId| {
        *cond
            .members(c)
            .iter()
            .min()
            .expect("components are non-empty")
    };

    for c in cond.sccs_of_type(SccType::TypeTwo) {
        let desc = cond.descendants(c);
        if desc.len() != 1 {
            return fail(
                Condition::UP3,
                lowest(c),
                Some(Diagnostic::Descendants(desc.len())),
            );
        }
        let t = cond.scc_type(desc[0]);
        if t != SccType::TypeOne {
            return fail(
                Condition::UP3,
                lowest(c),
                Some(Diagnostic::DescendantType(t)),
            );
        }
    }

    let mut atomic = Vec::new();
    let mut scratch = Vec::new();
    for c in cond.sccs_of_type(SccType::TypeOne) {
        let Some(sub) = closed_part(dfa, &cond, c, &mut scratch) else {
            return fail(
                Condition::UP2,
                cond.members(c)[0],
                Some(Diagnostic::Escapes),
            );
        };
        // UP0 already holds, and an orbit of a group automaton is one.
        let verdict = if cond.permutes() {
            stable_group_quotient(&sub)
        } else {
            is_pascal_quotient(&sub)
        };
        match verdict {
            Ok(params) => atomic.push(params),
            Err(r) => {
                let q = cond.members(c)[0];
                return fail(Condition::UP2, q, Some(Diagnostic::Pascal(r)));
            }
        }
    }

    let mut type_two = cond.sccs_of_type(SccType::TypeTwo).peekable();
    if type_two.peek().is_none() {
        return Ok(Conditions::Satisfied(atomic));
    }
    let one_pred = internal_one_predecessors(dfa, &cond);
    for c in type_two {
        let d = cond.descendants(c)[0];
        if let Err(q) = embed(dfa, &cond, &one_pred, c, d) {
            return fail(Condition::UP4, q, Some(Diagnostic::NoEmbedding));
        }
    }
    Ok(Conditions::Satisfied(atomic))
}

/// Limits on [`extract_parameters`]. The period bound has the form
/// `c b^e` with `c` coprime to the base.
#[derive(Clone, Copy, Debug, Default, PartialEq, Eq)]
pub struct ExtractionCaps {
    /// Largest accepted `e`; defaults to the state count.
    pub max_exponent: Option<u32>,
    /// Largest accepted preperiod bound; unlimited by default.
    pub max_preperiod: Option<u64>,
}

/// Largest number of values sampled to read off the accepted set.
pub const MAX_SAMPLE: u64 = 1 << 22;

/// Upper bounds for the set accepted from one state: period `coprime *
/// b^exponent` (a multiple of the minimal period) and a preperiod.
#[derive(Clone, Copy, Debug, Default)]
struct Bound {
    coprime: u64,
    exponent: u32,
    preperiod: u64,
}

fn cap_exceeded(what: impl Into<String>) -> Error {
    Error::ExtractionCapExceeded(what.into())
}

/// Bounds for the initial state, computed from sink components upwards.
/// A type-one component accepts `R + pN` from each state. A state `x` on a
/// 0-circuit accepts the set of its embedding image, up to the value 0. A
/// trivial state `q` accepts the union of `b S(q.a) + a` over the digits.
fn structural_bound(dfa: &Dfa) -> Result<Bound> {
    let cond = Condensation::new(dfa);
    let base = dfa.base() as u64;
    let one_pred = internal_one_predecessors(dfa, &cond);
    let mut bound = vec![Bound::default(); dfa.state_count()];
    let mut scratch = Vec::new();
    let not_satisfied = || Error::PreconditionViolated("conditions do not hold".into());
    // Tarjan numbers components so that successors come first.
    for c in 0..cond.len() {
        match cond.scc_type(c) {
            SccType::TypeOne => {
                let sub = closed_part(dfa, &cond, c, &mut scratch).ok_or_else(not_satisfied)?;
                let states = cond.members(c);
                let p = is_pascal_quotient(&sub)
                    .map_err(|_| not_satisfied())?
                    .period;
                for &q in states {
                    bound[q] = Bound {
                        coprime: p,
                        exponent: 0,
                        preperiod: 0,
                    };
                }
            }
            SccType::TypeTwo => {
                for &x in cond.members(c) {
                    let image = one_pred[dfa.step(x, 1)];
                    if image == NO_STATE {
                        return Err(not_satisfied());
                    }
                    bound[x] = Bound {
                        preperiod: 1,
                        ..bound[image as usize]
                    };
                }
            }
            SccType::Trivial => {
                let q = cond.members(c)[0];
                let mut acc = Bound {
                    coprime: 1,
                    exponent: 0,
                    preperiod: 0,
                };
                for a in 0..dfa.base() {
                    let t = bound[dfa.step(q, a)];
                    acc.coprime = lcm(acc.coprime, t.coprime)
                        .ok_or_else(|| cap_exceeded("period overflows"))?;
                    acc.exponent = acc.exponent.max(t.exponent + 1);
                    acc.preperiod = acc.preperiod.max(
                        t.preperiod
                            .checked_mul(base)
                            .ok_or_else(|| cap_exceeded("preperiod overflows"))?,
                    );
                }
                bound[q] = acc;
            }
        }
    }
    Ok(bound[dfa.initial()])
}

/// Membership of `0..len`, read through the automaton.
fn sample_language(dfa: &Dfa, len: u64) -> Vec<bool> {
    let base = dfa.base();
    (0..len)
        .map(|n| dfa.accepts(&representation(n, base)))
        .collect()
}

/// Recovers the canonical set accepted by a minimal automaton satisfying
/// the conditions: structural bounds on period and preperiod fix a sample,
/// which is canonicalized and then checked by building its minimal
/// automaton and comparing.
pub fn extract_parameters(dfa: &Dfa, caps: &ExtractionCaps) -> Result<UpSet> {
    let bound = structural_bound(dfa)?;
    let max_e = caps.max_exponent.unwrap_or(dfa.state_count() as u32);
    if bound.exponent > max_e {
        return Err(cap_exceeded(format!(
            "period bound needs exponent {} > {max_e}",
            bound.exponent
        )));
    }
    if let Some(m) = caps.max_preperiod.filter(|&m| bound.preperiod > m) {
        return Err(cap_exceeded(format!(
            "preperiod bound {} > {m}",
            bound.preperiod
        )));
    }
    let period = (dfa.base() as u64)
        .checked_pow(bound.exponent)
        .and_then(|x| x.checked_mul(bound.coprime))
        .filter(|&p| p.saturating_add(bound.preperiod) <= MAX_SAMPLE)
        .ok_or_else(|| {
            cap_exceeded(format!(
                "sample for period {} * {}^{} and preperiod {} exceeds {MAX_SAMPLE}",
                bound.coprime,
                dfa.base(),
                bound.exponent,
                bound.preperiod
            ))
        })?;
    let bits = sample_language(dfa, bound.preperiod + period);
    let (prefix, cycle) = bits.split_at(bound.preperiod as usize);
    let set = canonicalize(&CharacteristicProfile::new(
        prefix.to_vec(),
        cycle.to_vec(),
    )?);
    let candidate = build_minimal_automaton_with_limit(&set, dfa.base(), dfa.state_count() + 1)
        .map_err(|_| Error::PreconditionViolated("accepted set is not the sampled one".into()))?;
    if !isomorphic(&candidate, dfa)? {
        return Err(Error::PreconditionViolated(
            "accepted set is not the sampled one".into(),
        ));
    }
    Ok(set)
}

pub fn decide(dfa: &Dfa) -> Result<DecisionResult> {
    decide_with(dfa, &ExtractionCaps::default())
}

/// Completes and minimizes `dfa`, checks the conditions and, on success,
/// recovers the accepted set.
pub fn decide_with(dfa: &Dfa, caps: &ExtractionCaps) -> Result<DecisionResult> {
    dfa.validate()?;
    let min = minimize(dfa);
    match check_conditions(&min)? {
        Conditions::Violated(f) => Ok(DecisionResult::NotUltimatelyPeriodic(f)),
        Conditions::Satisfied(_) => {
            extract_parameters(&min, caps).map(DecisionResult::UltimatelyPeriodic)
        }
    }
}
