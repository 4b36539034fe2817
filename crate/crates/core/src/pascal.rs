//! Pascal automata and the linear-time test for being one of their quotients.
//!
//! The Pascal automaton of `(p, R)` runs on `Z/pZ x Z/psiZ`, where `psi` is
//! the multiplicative order of the base modulo `p`, and tracks the value
//! modulo `p` together with the length modulo `psi`. Its transition group is
//! the semidirect product with law `(s,t).(h,k) = (s + h b^t, t + k)`.
//!
//! The quotient test works on the two-letter automaton over `{0, g}`, where
//! `g` acts as "read 1, then undo one 0". A genuine quotient is then
//! determined by `(p, R)` and the smallest `(h, k)` with `i.g^h.0^k = i`, and
//! the isomorphism onto its rebuilt form is forced.

use std::fmt;

use serde::Serialize;

use crate::arith::{gcd, inverse_mod, mul_mod, multiplicative_order, pow_mod};
use crate::automaton::{Automaton, Dfa, StateId};
use crate::error::{Error, Result};

#[derive(Clone, Debug, PartialEq, Eq, Hash, Serialize)]
pub struct PascalParams {
    pub period: u64,
    pub remainders: Vec<u64>,
    pub psi: u64,
    pub h: u64,
    pub k: u64,
}

impl fmt::Display for PascalParams {
    /// `p=<int> R=<list> psi=<int> h=<int> k=<int>`
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let r = if self.remainders.is_empty() {
            "-".to_string()
        } else {
            self.remainders
                .iter()
                .map(u64::to_string)
                .collect::<Vec<_>>()
                .join(",")
        };
        write!(
            f,
            "p={} R={} psi={} h={} k={}",
            self.period, r, self.psi, self.h, self.k
        )
    }
}

/// Why an automaton is not a quotient of a Pascal automaton.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize)]
pub enum Rejection {
    NotComplete,
    NotGroup,
    NotZeroStable,
    SimplificationLoss,
    NoMixedCircuit,
    PeriodNotCoprime,
    NotIsomorphic,
}

impl Rejection {
    /// Step of the quotient test that produced this rejection.
    pub fn step(self) -> u8 {
        match self {
            Rejection::NotComplete | Rejection::NotGroup | Rejection::NotZeroStable => 0,
            Rejection::SimplificationLoss => 1,
            Rejection::NoMixedCircuit | Rejection::PeriodNotCoprime => 2,
            Rejection::NotIsomorphic => 3,
        }
    }

    pub fn name(self) -> &'static str {
        match self {
            Rejection::NotComplete => "NotComplete",
            Rejection::NotGroup => "NotGroup",
            Rejection::NotZeroStable => "NotZeroStable",
            Rejection::SimplificationLoss => "SimplificationLoss",
            Rejection::NoMixedCircuit => "NoMixedCircuit",
            Rejection::PeriodNotCoprime => "PeriodNotCoprime",
            Rejection::NotIsomorphic => "NotIsomorphic",
        }
    }
}

impl fmt::Display for Rejection {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{} (step {})", self.name(), self.step())
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub struct GElem {
    pub s: u64,
    pub t: u64,
}

/// `Z/pZ x| Z/psiZ` for a fixed base.
#[derive(Clone, Debug)]
pub struct PascalGroup {
    p: u64,
    psi: u64,
    powers: Vec<u64>,
}

impl PascalGroup {
    pub fn new(p: u64, base: u32) -> Result<Self> {
        let psi = multiplicative_order(base as u64, p)?;
        let powers = (0..psi).map(|t| pow_mod(base as u64, t, p)).collect();
        Ok(PascalGroup { p, psi, powers })
    }

    pub fn p(&self) -> u64 {
        self.p
    }

    pub fn psi(&self) -> u64 {
        self.psi
    }

    pub fn identity(&self) -> GElem {
        GElem { s: 0, t: 0 }
    }

    pub fn op(&self, x: GElem, y: GElem) -> GElem {
        GElem {
            s: (x.s + mul_mod(y.s, self.powers[x.t as usize], self.p)) % self.p.max(1),
            t: (x.t + y.t) % self.psi,
        }
    }

    pub fn inverse(&self, x: GElem) -> GElem {
        let t = (self.psi - x.t) % self.psi;
        // (s,t).(s',t') = (0,0)  =>  s' = -s b^-t = -s b^(psi - t)
        let s = mul_mod(
            (self.p - x.s % self.p) % self.p,
            self.powers[t as usize],
            self.p,
        );
        GElem { s, t }
    }

    pub fn elements(&self) -> impl Iterator<Item = GElem> + '_ {
        (0..self.psi).flat_map(move |t| (0..self.p).map(move |s| GElem { s, t }))
    }
}

/// Id of state `(s, t)` in [`build_pascal`] and [`build_quotient`] outputs.
pub fn pascal_state_id(p: u64, s: u64, t: u64) -> StateId {
    (t * p + s) as StateId
}

/// The Pascal automaton of `(p, R)`; state `(s, t)` has id `t * p + s`.
pub fn build_pascal(p: u64, remainders: &[u64], base: u32) -> Result<Dfa> {
    if base < 2 {
        return Err(Error::BaseTooSmall(base));
    }
    let group = PascalGroup::new(p, base)?;
    let psi = group.psi;
    let finals = residue_bits(p, remainders)?;
    let n = (p * psi) as usize;
    let b = base as usize;
    let mut table = Vec::with_capacity(n * b);
    let mut final_states = Vec::with_capacity(n);
    for t in 0..psi {
        for s in 0..p {
            for a in 0..base as u64 {
                let s2 = (s + mul_mod(a, group.powers[t as usize], p)) % p;
                table.push(pascal_state_id(p, s2, (t + 1) % psi) as u32);
            }
            final_states.push(finals[s as usize]);
        }
    }
    Ok(Dfa::from_raw(base, 0, final_states, table))
}

fn residue_bits(p: u64, remainders: &[u64]) -> Result<Vec<bool>> {
    let mut bits = vec![false; p as usize];
    for &r in remainders {
        if r >= p {
            return Err(Error::NotCanonical(format!("remainder {r} not below {p}")));
        }
        bits[r as usize] = true;
    }
    Ok(bits)
}

/// A complete deterministic automaton over `{0, g}`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct GAutomaton {
    initial: u32,
    finals: Vec<bool>,
    // Successors on `[0, g]`, interleaved so one state is one cache line.
    next: Vec<[u32; 2]>,
    zero_inv: Vec<u32>,
}

impl GAutomaton {
    pub fn state_count(&self) -> usize {
        self.finals.len()
    }

    pub fn initial(&self) -> StateId {
        self.initial as usize
    }

    pub fn is_final(&self, q: StateId) -> bool {
        self.finals[q]
    }

    pub fn zero(&self, q: StateId) -> StateId {
        self.next[q][0] as usize
    }

    pub fn g(&self, q: StateId) -> StateId {
        self.next[q][1] as usize
    }

    /// The state whose 0-successor is `q`.
    pub fn zero_inv(&self, q: StateId) -> StateId {
        self.zero_inv[q] as usize
    }
}

impl Automaton for GAutomaton {
    fn letter_count(&self) -> usize {
        2
    }

    fn state_count(&self) -> usize {
        self.finals.len()
    }

    fn initial(&self) -> StateId {
        self.initial as usize
    }

    fn is_final(&self, q: StateId) -> bool {
        self.finals[q]
    }

    fn successor(&self, q: StateId, letter: usize) -> Option<StateId> {
        match letter {
            0 => Some(self.next[q][0] as usize),
            1 => Some(self.next[q][1] as usize),
            _ => None,
        }
    }
}

/// Replaces the digits by `{0, g}` with `s -g-> s'` iff `s.1 = s'.0`.
pub fn add_g_letter(dfa: &Dfa) -> Result<GAutomaton> {
    if !dfa.is_complete() {
        return Err(Error::PreconditionViolated(
            "simplification needs a complete automaton".into(),
        ));
    }
    if !dfa.is_group_automaton()? {
        return Err(Error::NotGroupAutomaton);
    }
    Ok(simplify(dfa))
}

/// [`add_g_letter`] on a complete group automaton.
fn simplify(dfa: &Dfa) -> GAutomaton {
    let n = dfa.state_count();
    let mut zero_inv = vec![0u32; n];
    for q in 0..n {
        zero_inv[dfa.step(q, 0)] = q as u32;
    }
    let next = (0..n)
        .map(|q| [dfa.step(q, 0) as u32, zero_inv[dfa.step(q, 1)]])
        .collect();
    GAutomaton {
        initial: dfa.initial() as u32,
        finals: dfa.raw_finals().to_vec(),
        next,
        zero_inv,
    }
}

/// Moves on `{0, g}` and their inverse on 0, either stored or read through
/// the original digits.
trait GMoves {
    fn states(&self) -> usize;
    fn start(&self) -> StateId;
    fn accepts(&self, q: StateId) -> bool;
    fn zero(&self, q: StateId) -> StateId;
    fn g(&self, q: StateId) -> StateId;
    fn zero_inv(&self, q: StateId) -> StateId;
}

impl GMoves for GAutomaton {
    fn states(&self) -> usize {
        self.finals.len()
    }
    fn start(&self) -> StateId {
        self.initial as usize
    }
    fn accepts(&self, q: StateId) -> bool {
        self.finals[q]
    }
    fn zero(&self, q: StateId) -> StateId {
        self.next[q][0] as usize
    }
    fn g(&self, q: StateId) -> StateId {
        self.next[q][1] as usize
    }
    fn zero_inv(&self, q: StateId) -> StateId {
        self.zero_inv[q] as usize
    }
}

/// A complete group automaton seen over `{0, g}` without copying its
/// transitions.
struct GView<'a> {
    dfa: &'a Dfa,
    zero_inv: Vec<u32>,
}

impl<'a> GView<'a> {
    fn new(dfa: &'a Dfa) -> Self {
        let mut zero_inv = vec![0u32; dfa.state_count()];
        for q in 0..dfa.state_count() {
            zero_inv[dfa.step(q, 0)] = q as u32;
        }
        GView { dfa, zero_inv }
    }
}

impl GMoves for GView<'_> {
    fn states(&self) -> usize {
        self.dfa.state_count()
    }
    fn start(&self) -> StateId {
        self.dfa.initial()
    }
    fn accepts(&self, q: StateId) -> bool {
        self.dfa.raw_finals()[q]
    }
    fn zero(&self, q: StateId) -> StateId {
        self.dfa.step(q, 0)
    }
    fn g(&self, q: StateId) -> StateId {
        self.zero_inv[self.dfa.step(q, 1)] as usize
    }
    fn zero_inv(&self, q: StateId) -> StateId {
        self.zero_inv[q] as usize
    }
}

/// Checks `s.a = s.(g^a 0)` for every state and digit, walking `g^a`
/// incrementally so each transition costs constant time.
pub fn verify_simplification(original: &Dfa, simplified: &GAutomaton) -> bool {
    if original.state_count() != simplified.state_count() || !original.is_complete() {
        return false;
    }
    digits_agree(original, simplified, 0)
}

/// Checks `s.a = s.(g^a 0)` for digits `a >= first`.
fn digits_agree(original: &Dfa, simplified: &impl GMoves, first: u32) -> bool {
    if first >= original.base() {
        return true;
    }
    (0..original.state_count()).all(|s| {
        let mut cur = (0..first).fold(s, |x, _| simplified.g(x));
        (first..original.base()).all(|a| {
            let ok = original.step(s, a) == simplified.zero(cur);
            cur = simplified.g(cur);
            ok
        })
    })
}

/// Reads `(p, R, psi, h, k)` off a simplified automaton: `p` and `R` from
/// the g-circuit through the initial state, `(h, k)` from the first state on
/// the backward 0-walk from the initial state that lies on that circuit.
pub fn analyze_quotient(
    simplified: &GAutomaton,
    base: u32,
) -> std::result::Result<PascalParams, Rejection> {
    analyze(simplified, base).map(|(params, _)| params)
}

/// The g-orbit of `init` in order, or `None` if it does not close. A plain
/// walk is one chain of dependent loads, so `STRIDE` walks along
/// `g^STRIDE`, built by repeated squaring, run side by side from
/// `init, init.g, ...`; walk `j` at step `i` is at orbit position
/// `STRIDE * i + j`.
fn g_orbit(simplified: &impl GMoves, init: StateId) -> Option<Vec<u32>> {
    const STRIDE: usize = 16;
    let n = simplified.states();
    // Room for the orbit, which ends up in `spare`.
    let mut jump = Vec::with_capacity(n + 2 * STRIDE);
    jump.extend((0..n).map(|q| simplified.g(q) as u32));
    let mut spare = Vec::with_capacity(n + 2 * STRIDE);
    spare.resize(n, 0u32);
    let mut span = 1;
    while span < STRIDE {
        for (s, &x) in spare.iter_mut().zip(&jump) {
            *s = jump[x as usize];
        }
        std::mem::swap(&mut jump, &mut spare);
        span *= 2;
    }
    let mut heads = [init as u32; STRIDE];
    for j in 1..STRIDE {
        heads[j] = simplified.g(heads[j - 1] as usize) as u32;
    }
    let mut orbit = spare;
    orbit.clear();
    while orbit.len() < n + STRIDE {
        let done = orbit.len();
        if let Some(j) = (0..STRIDE).find(|&j| done + j > 0 && heads[j] as usize == init) {
            orbit.extend_from_slice(&heads[..j]);
            return Some(orbit);
        }
        orbit.extend_from_slice(&heads);
        for x in &mut heads {
            *x = jump[*x as usize];
        }
    }
    None
}

/// As [`analyze_quotient`], also returning the g-circuit through the initial
/// state.
fn analyze(
    simplified: &impl GMoves,
    base: u32,
) -> std::result::Result<(PascalParams, Vec<u32>), Rejection> {
    let circuit = g_orbit(simplified, simplified.start()).ok_or(Rejection::NotGroup)?;
    let params = analyze_circuit(simplified, &circuit, base)?;
    Ok((params, circuit))
}

fn analyze_circuit(
    simplified: &impl GMoves,
    circuit: &[u32],
    base: u32,
) -> std::result::Result<PascalParams, Rejection> {
    let n = simplified.states();
    let init = simplified.start();
    let mut on_circuit = Vec::new();
    if circuit.len() < n {
        on_circuit.resize(n, false);
        for &q in circuit {
            on_circuit[q as usize] = true;
        }
    }
    let p = circuit.len() as u64;
    if gcd(p, base as u64) != 1 {
        return Err(Rejection::PeriodNotCoprime);
    }
    let remainders: Vec<u64> = circuit
        .iter()
        .enumerate()
        .filter(|&(_, &s)| simplified.accepts(s as usize))
        .map(|(r, _)| r as u64)
        .collect();
    let psi = multiplicative_order(base as u64, p).map_err(|_| Rejection::PeriodNotCoprime)?;
    let mut x = init;
    for t in 1..=psi {
        x = simplified.zero_inv(x);
        if on_circuit.is_empty() || on_circuit[x] {
            let h = circuit.iter().position(|&q| q as usize == x).unwrap();
            return Ok(PascalParams {
                period: p,
                remainders,
                psi,
                h: h as u64,
                k: t,
            });
        }
    }
    Err(Rejection::NoMixedCircuit)
}

/// The automaton on `Z/pZ x Z/kZ` determined by `(p, R, h, k)`; state
/// `(s, t)` has id `t * p + s`.
pub fn build_quotient(params: &PascalParams, base: u32) -> Result<GAutomaton> {
    let p = params.period;
    let k = params.k;
    if p == 0 || gcd(p, base as u64) != 1 {
        return Err(Error::NotCoprime(p));
    }
    if k == 0 || params.h >= p {
        return Err(Error::PreconditionViolated(format!(
            "need 0 <= h < p and k >= 1, got h={} k={}",
            params.h, k
        )));
    }
    let bits = residue_bits(p, &params.remainders)?;
    let inv_bk = inverse_mod(pow_mod(base as u64, k, p), p).ok_or(Error::NotCoprime(p))?;
    let n = (p * k) as usize;
    let mut next = Vec::with_capacity(n);
    let mut zero_inv = vec![0u32; n];
    let mut finals = Vec::with_capacity(n);
    for t in 0..k {
        let bt = pow_mod(base as u64, t, p);
        for s in 0..p {
            let z = if t + 1 < k {
                pascal_state_id(p, s, t + 1)
            } else {
                let s2 = mul_mod((s + p - params.h) % p, inv_bk, p);
                pascal_state_id(p, s2, 0)
            };
            next.push([z as u32, pascal_state_id(p, (s + bt) % p, t) as u32]);
            zero_inv[z] = pascal_state_id(p, s, t) as u32;
            finals.push(bits[s as usize]);
        }
    }
    Ok(GAutomaton {
        initial: 0,
        finals,
        next,
        zero_inv,
    })
}

/// Decides whether `dfa` is a quotient of some Pascal automaton, returning
/// its parameters. Linear in the number of transitions.
pub fn is_pascal_quotient(dfa: &Dfa) -> std::result::Result<PascalParams, Rejection> {
    if !dfa.is_complete() {
        return Err(Rejection::NotComplete);
    }
    if !dfa.is_group_automaton().unwrap_or(false) {
        return Err(Rejection::NotGroup);
    }
    if !dfa.check_zero_stability() {
        return Err(Rejection::NotZeroStable);
    }
    stable_group_quotient(dfa)
}

/// Steps 1 to 3 of [`is_pascal_quotient`], for a complete zero-stable group
/// automaton.
pub(crate) fn stable_group_quotient(dfa: &Dfa) -> std::result::Result<PascalParams, Rejection> {
    let simplified = GView::new(dfa);
    // Digits 0 and 1 agree by construction of `g`.
    if !digits_agree(dfa, &simplified, 2) {
        return Err(Rejection::SimplificationLoss);
    }
    let (params, circuit) = analyze(&simplified, dfa.base())?;
    finish(&simplified, params, &circuit, dfa.base())
}

/// [`stable_group_quotient`] on a complete zero-stable automaton that is
/// not known to be a group automaton, succeeding only when the g-orbit of
/// the initial state holds every state. Success makes it one: the final
/// comparison matches 0 against a bijection, g is a cycle, and every other
/// digit agrees with `g^a 0`. The automaton is then strongly connected.
pub(crate) fn transitive_group_quotient(dfa: &Dfa) -> Option<PascalParams> {
    let simplified = GView::new(dfa);
    let circuit = g_orbit(&simplified, simplified.start())?;
    if circuit.len() < dfa.state_count() || !digits_agree(dfa, &simplified, 2) {
        return None;
    }
    let params = analyze_circuit(&simplified, &circuit, dfa.base()).ok()?;
    finish(&simplified, params, &circuit, dfa.base()).ok()
}

fn finish(
    simplified: &impl GMoves,
    params: PascalParams,
    circuit: &[u32],
    base: u32,
) -> std::result::Result<PascalParams, Rejection> {
    if matches_quotient(simplified, &params, circuit, base) {
        Ok(params)
    } else {
        Err(Rejection::NotIsomorphic)
    }
}

/// Whether `simplified` is isomorphic to [`build_quotient`] of `params`.
///
/// An isomorphism has to send `(s, t)` to `i.g^s 0^t`, where `i.g^s` is
/// `circuit[s]`, so the map is computed outright and its transitions and
/// finality compared. Every pass is a scan with independent lookups.
fn matches_quotient(
    simplified: &impl GMoves,
    params: &PascalParams,
    circuit: &[u32],
    base: u32,
) -> bool {
    let (p, k) = (params.period, params.k);
    let n = (p * k) as usize;
    if simplified.states() != n || circuit.len() != p as usize || params.h >= p {
        return false;
    }
    let Ok(bits) = residue_bits(p, &params.remainders) else {
        return false;
    };
    let Some(inv_bk) = inverse_mod(pow_mod(base as u64, k, p), p) else {
        return false;
    };
    let pu = p as usize;
    let mut sigma: Vec<u32> = Vec::new();
    if k > 1 {
        sigma.reserve(n);
        sigma.extend_from_slice(circuit);
        for i in pu..n {
            sigma.push(simplified.zero(sigma[i - pu] as usize) as u32);
        }
    }
    let sigma = if k > 1 { &sigma[..] } else { circuit };
    // The circuit is a g-orbit, so its states are distinct, g steps along
    // it and its finality is `bits`: row 0 holds by construction.
    if k > 1 {
        let mut seen = vec![false; n];
        for &x in sigma {
            if std::mem::replace(&mut seen[x as usize], true) {
                return false;
            }
        }
    }
    let last = (k as usize - 1) * pu;
    for t in 1..k as usize {
        let bt = pow_mod(base as u64, t as u64, p) as usize;
        let row = &sigma[t * pu..(t + 1) * pu];
        let mut target = bt;
        for (s, &x) in row.iter().enumerate() {
            let x = x as usize;
            if simplified.accepts(x) != bits[s] || simplified.g(x) != row[target] as usize {
                return false;
            }
            target += 1;
            if target == pu {
                target = 0;
            }
        }
    }
    // (s - h) / b^k, stepped by 1 / b^k as s grows.
    let step = inv_bk as usize;
    let mut s2 = mul_mod(p - params.h, inv_bk, p) as usize;
    sigma[last..].iter().all(|&x| {
        let ok = simplified.zero(x as usize) == circuit[s2] as usize;
        s2 += step;
        if s2 >= pu {
            s2 -= pu;
        }
        ok
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::isomorphism::isomorphic;
    use crate::minimize::minimize;

    #[test]
    fn group_law() {
        let g = PascalGroup::new(3, 2).unwrap();
        assert_eq!(g.psi(), 2);
        let x = GElem { s: 1, t: 1 };
        assert_eq!(g.op(x, g.identity()), x);
        assert_eq!(g.op(x, GElem { s: 1, t: 0 }), GElem { s: 0, t: 1 });
    }

    #[test]
    fn group_axioms_exhaustive() {
        let g = PascalGroup::new(5, 2).unwrap();
        assert_eq!(g.psi(), 4);
        let all: Vec<GElem> = g.elements().collect();
        assert_eq!(all.len(), 20);
        for &x in &all {
            assert_eq!(g.op(x, g.inverse(x)), g.identity());
            assert_eq!(g.op(g.inverse(x), x), g.identity());
            assert_eq!(g.op(g.identity(), x), x);
            for &y in &all {
                for &z in &all {
                    assert_eq!(g.op(g.op(x, y), z), g.op(x, g.op(y, z)));
                }
            }
        }
    }

    #[test]
    fn pascal_sizes() {
        assert_eq!(build_pascal(3, &[2], 2).unwrap().state_count(), 6);
        assert_eq!(build_pascal(7, &[6], 2).unwrap().state_count(), 21);
        let one = build_pascal(1, &[0], 4).unwrap();
        assert_eq!(one.state_count(), 1);
        assert!(one.is_final(0));
        assert_eq!(build_pascal(4, &[0], 2), Err(Error::NotCoprime(4)));
    }

    #[test]
    fn g_letter_on_pascal() {
        let p = 5;
        let base = 2;
        let dfa = build_pascal(p, &[1], base).unwrap();
        let simplified = add_g_letter(&dfa).unwrap();
        let psi = 4;
        for t in 0..psi {
            for s in 0..p {
                let q = pascal_state_id(p, s, t);
                let expected = pascal_state_id(p, (s + pow_mod(2, t, p)) % p, t);
                assert_eq!(simplified.g(q), expected);
            }
        }
        assert!(verify_simplification(&dfa, &simplified));
    }

    #[test]
    fn g_letter_rows_of_small_pascal() {
        let dfa = build_pascal(3, &[2], 2).unwrap();
        let simplified = add_g_letter(&dfa).unwrap();
        // g permutes each row {(s, t) : s} in a circuit of length 3.
        for t in 0..2 {
            let start = pascal_state_id(3, 0, t);
            let mut q = start;
            let mut len = 0;
            loop {
                q = simplified.g(q);
                len += 1;
                assert_eq!(q as u64 / 3, t);
                if q == start {
                    break;
                }
            }
            assert_eq!(len, 3);
        }
    }

    #[test]
    fn one_state_automaton_has_g_self_loop() {
        let dfa = build_pascal(1, &[0], 3).unwrap();
        let simplified = add_g_letter(&dfa).unwrap();
        assert_eq!(simplified.g(0), 0);
        let params = analyze_quotient(&simplified, 3).unwrap();
        assert_eq!(
            params,
            PascalParams {
                period: 1,
                remainders: vec![0],
                psi: 1,
                h: 0,
                k: 1
            }
        );
    }

    #[test]
    fn simplification_loss_is_detected() {
        // Base 3, states Z/4Z: 0 acts as identity, 1 as +1, 2 as +3. Then
        // g = +1 and g^2 0 = +2, which differs from the action of 2.
        let mut b = Dfa::builder(3, 4);
        for q in 0..4 {
            b.add_transition(q, 0, q);
            b.add_transition(q, 1, (q + 1) % 4);
            b.add_transition(q, 2, (q + 3) % 4);
        }
        let dfa = b.build().unwrap();
        assert!(dfa.is_group_automaton().unwrap());
        let simplified = add_g_letter(&dfa).unwrap();
        assert!(!verify_simplification(&dfa, &simplified));
        assert_eq!(is_pascal_quotient(&dfa), Err(Rejection::SimplificationLoss));
    }

    #[test]
    fn running_example_parameters() {
        let dfa = minimize(&build_pascal(5, &[0, 3], 3).unwrap());
        let params = is_pascal_quotient(&dfa).unwrap();
        assert_eq!(
            params,
            PascalParams {
                period: 5,
                remainders: vec![0, 3],
                psi: 4,
                h: 3,
                k: 2
            }
        );
        assert_eq!(params.to_string(), "p=5 R=0,3 psi=4 h=3 k=2");
    }

    #[test]
    fn quotient_transition_table() {
        let params = PascalParams {
            period: 5,
            remainders: vec![0, 3],
            psi: 4,
            h: 3,
            k: 2,
        };
        let q = build_quotient(&params, 3).unwrap();
        let id = |s: u64, t: u64| pascal_state_id(5, s, t);
        for s in 0..5u64 {
            assert_eq!(q.zero(id(s, 0)), id(s, 1));
            assert_eq!(q.zero(id(s, 1)), id((4 * s + 5 - 2) % 5, 0));
            assert_eq!(q.g(id(s, 0)), id((s + 1) % 5, 0));
            assert_eq!(q.g(id(s, 1)), id((s + 3) % 5, 1));
            assert_eq!(q.is_final(id(s, 0)), s == 0 || s == 3);
        }
    }

    #[test]
    fn trivial_quotient_uses_full_length_cycle() {
        let simplified = add_g_letter(&build_pascal(3, &[2], 2).unwrap()).unwrap();
        let params = analyze_quotient(&simplified, 2).unwrap();
        assert_eq!(
            (params.period, params.psi, params.h, params.k),
            (3, 2, 0, 2)
        );
        assert_eq!(params.remainders, vec![2]);

        let dfa = build_pascal(7, &[6], 2).unwrap();
        let params = is_pascal_quotient(&dfa).unwrap();
        assert_eq!((params.h, params.k), (0, 3));
    }

    #[test]
    fn degenerate_quotient_is_simplified_pascal() {
        for (p, r) in [(3u64, vec![2u64]), (5, vec![0, 3]), (7, vec![1, 2, 4])] {
            let psi = multiplicative_order(2, p).unwrap();
            let params = PascalParams {
                period: p,
                remainders: r.clone(),
                psi,
                h: 0,
                k: psi,
            };
            let rebuilt = build_quotient(&params, 2).unwrap();
            let simplified = add_g_letter(&build_pascal(p, &r, 2).unwrap()).unwrap();
            assert!(isomorphic(&rebuilt, &simplified).unwrap());
        }
    }

    #[test]
    fn non_group_automaton_is_rejected_at_step_zero() {
        // 0*10* in base 2, completed with a sink.
        let dfa = Dfa::builder(2, 3)
            .final_state(1)
            .transition(0, 0, 0)
            .transition(0, 1, 1)
            .transition(1, 0, 1)
            .transition(1, 1, 2)
            .transition(2, 0, 2)
            .transition(2, 1, 2)
            .build()
            .unwrap();
        let err = is_pascal_quotient(&dfa).unwrap_err();
        assert_eq!(err, Rejection::NotGroup);
        assert_eq!(err.step(), 0);
    }

    #[test]
    fn even_period_is_rejected() {
        // Parity of the number of ones: g-circuit of length 2 in base 2.
        let dfa = Dfa::builder(2, 2)
            .final_state(0)
            .transition(0, 0, 0)
            .transition(0, 1, 1)
            .transition(1, 0, 1)
            .transition(1, 1, 0)
            .build()
            .unwrap();
        assert_eq!(is_pascal_quotient(&dfa), Err(Rejection::PeriodNotCoprime));
    }

    #[test]
    fn transitive_shortcut_agrees() {
        use crate::numeration::build_atomic_explicit;
        use rand::{Rng, SeedableRng};
        use rand_chacha::ChaCha8Rng;

        let mut rng = ChaCha8Rng::seed_from_u64(7);
        let mut hits = 0;
        for _ in 0..1500 {
            let base = rng.gen_range(2..=5u32);
            let p = rng.gen_range(1..=40u64);
            let r: Vec<u64> = (0..p).filter(|_| rng.gen_bool(0.4)).collect();
            let built = if rng.gen_bool(0.5) {
                build_pascal(p, &r, base).map(|d| minimize(&d))
            } else {
                build_atomic_explicit(p, &r, base)
            };
            let Ok(dfa) = built else {
                continue;
            };
            let mut table: Vec<StateId> = dfa.transitions().map(|(_, _, t)| t).collect();
            let n = dfa.state_count();
            if rng.gen_bool(0.5) {
                let slot = rng.gen_range(0..table.len());
                table[slot] = rng.gen_range(0..n);
            }
            let finals = (0..n).map(|q| dfa.is_final(q)).collect();
            let dfa = Dfa::from_table(base, 0, finals, &table).unwrap();
            if !dfa.check_zero_stability() {
                continue;
            }
            let full = is_pascal_quotient(&dfa);
            match transitive_group_quotient(&dfa) {
                Some(params) => {
                    hits += 1;
                    assert_eq!(full, Ok(params));
                }
                None => {
                    if let Ok(params) = full {
                        assert!(params.k > 1 || params.period < n as u64);
                    }
                }
            }
        }
        assert!(hits > 50, "{hits}");
    }
}
