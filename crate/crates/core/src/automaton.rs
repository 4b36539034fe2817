//! Deterministic automata over the digit alphabet `{0, ..., base-1}`.
//!
//! States are dense ids in `[0, state_count)` and the transition map is a flat
//! `state * base + digit` table. Partial automata are allowed; a missing
//! transition is stored as a sentinel and surfaces as `None` from
//! [`Dfa::next`].

use crate::error::{Error, Result};

pub type StateId = usize;

pub(crate) const NO_STATE: u32 = u32::MAX;

/// Common read-only view used by traversals that work on both digit automata
/// and the two-letter automata of the [`pascal`](crate::pascal) module.
pub trait Automaton {
    fn letter_count(&self) -> usize;
    fn state_count(&self) -> usize;
    fn initial(&self) -> StateId;
    fn is_final(&self, q: StateId) -> bool;
    fn successor(&self, q: StateId, letter: usize) -> Option<StateId>;
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Dfa {
    base: u32,
    initial: u32,
    finals: Vec<bool>,
    delta: Vec<u32>,
}

/// Unchecked description of an automaton. [`DfaBuilder::build`] validates it.
#[derive(Clone, Debug)]
pub struct DfaBuilder {
    base: u32,
    state_count: usize,
    initial: usize,
    finals: Vec<usize>,
    transitions: Vec<(usize, u32, usize)>,
}

impl DfaBuilder {
    pub fn new(base: u32, state_count: usize) -> Self {
        DfaBuilder {
            base,
            state_count,
            initial: 0,
            finals: Vec::new(),
            transitions: Vec::new(),
        }
    }

    pub fn initial(mut self, q: usize) -> Self {
        self.initial = q;
        self
    }

    pub fn final_state(mut self, q: usize) -> Self {
        self.finals.push(q);
        self
    }

    pub fn finals(mut self, qs: impl IntoIterator<Item = usize>) -> Self {
        self.finals.extend(qs);
        self
    }

    pub fn transition(mut self, from: usize, digit: u32, to: usize) -> Self {
        self.transitions.push((from, digit, to));
        self
    }

    pub fn set_initial(&mut self, q: usize) {
        self.initial = q;
    }

    pub fn add_final(&mut self, q: usize) {
        self.finals.push(q);
    }

    pub fn add_transition(&mut self, from: usize, digit: u32, to: usize) {
        self.transitions.push((from, digit, to));
    }

    /// Checks every automaton invariant without building the table.
    pub fn validate(&self) -> Result<()> {
        self.table().map(|_| ())
    }

    pub fn build(self) -> Result<Dfa> {
        let delta = self.table()?;
        let mut finals = vec![false; self.state_count];
        for &q in &self.finals {
            finals[q] = true;
        }
        Ok(Dfa {
            base: self.base,
            initial: self.initial as u32,
            finals,
            delta,
        })
    }

    fn table(&self) -> Result<Vec<u32>> {
        if self.base < 2 {
            return Err(Error::BaseTooSmall(self.base));
        }
        let n = self.state_count;
        if n == 0 {
            return Err(Error::NoStates);
        }
        if n >= NO_STATE as usize {
            return Err(Error::BadStateId {
                state: n,
                state_count: n,
            });
        }
        let check = |q: usize| {
            if q < n {
                Ok(())
            } else {
                Err(Error::BadStateId {
                    state: q,
                    state_count: n,
                })
            }
        };
        check(self.initial)?;
        for &q in &self.finals {
            check(q)?;
        }
        let b = self.base as usize;
        let mut delta = vec![NO_STATE; n * b];
        for &(from, digit, to) in &self.transitions {
            check(from)?;
            check(to)?;
            if digit >= self.base {
                return Err(Error::BadDigit {
                    digit,
                    base: self.base,
                });
            }
            let slot = &mut delta[from * b + digit as usize];
            if *slot != NO_STATE {
                return Err(Error::DuplicateTransition { state: from, digit });
            }
            *slot = to as u32;
        }
        Ok(delta)
    }
}

impl Dfa {
    pub fn builder(base: u32, state_count: usize) -> DfaBuilder {
        DfaBuilder::new(base, state_count)
    }

    /// Builds a complete automaton from a `state * base + digit` table.
    pub fn from_table(
        base: u32,
        initial: StateId,
        finals: Vec<bool>,
        table: &[StateId],
    ) -> Result<Dfa> {
        if base < 2 {
            return Err(Error::BaseTooSmall(base));
        }
        let n = finals.len();
        if n == 0 {
            return Err(Error::NoStates);
        }
        if table.len() != n * base as usize {
            return Err(Error::PreconditionViolated(format!(
                "table has {} entries, expected {}",
                table.len(),
                n * base as usize
            )));
        }
        if let Some(&q) = table.iter().chain([&initial]).find(|&&q| q >= n) {
            return Err(Error::BadStateId {
                state: q,
                state_count: n,
            });
        }
        Ok(Dfa {
            base,
            initial: initial as u32,
            finals,
            delta: table.iter().map(|&q| q as u32).collect(),
        })
    }

    pub(crate) fn from_raw(base: u32, initial: u32, finals: Vec<bool>, delta: Vec<u32>) -> Dfa {
        debug_assert_eq!(delta.len(), finals.len() * base as usize);
        Dfa {
            base,
            initial,
            finals,
            delta,
        }
    }

    pub fn base(&self) -> u32 {
        self.base
    }

    pub fn state_count(&self) -> usize {
        self.finals.len()
    }

    pub fn initial(&self) -> StateId {
        self.initial as usize
    }

    pub fn is_final(&self, q: StateId) -> bool {
        self.finals[q]
    }

    pub fn final_states(&self) -> impl Iterator<Item = StateId> + '_ {
        self.finals
            .iter()
            .enumerate()
            .filter_map(|(q, &f)| f.then_some(q))
    }

    pub fn next(&self, q: StateId, digit: u32) -> Option<StateId> {
        let t = self.delta[q * self.base as usize + digit as usize];
        (t != NO_STATE).then_some(t as usize)
    }

    /// Successor in a complete automaton.
    #[inline]
    pub fn step(&self, q: StateId, digit: u32) -> StateId {
        let t = self.delta[q * self.base as usize + digit as usize];
        debug_assert_ne!(t, NO_STATE, "missing transition ({q}, {digit})");
        t as usize
    }

    /// Every defined transition as `(from, digit, to)`.
    pub fn transitions(&self) -> impl Iterator<Item = (StateId, u32, StateId)> + '_ {
        let b = self.base as usize;
        self.delta
            .iter()
            .enumerate()
            .filter(|&(_, &t)| t != NO_STATE)
            .map(move |(i, &t)| (i / b, (i % b) as u32, t as usize))
    }

    pub(crate) fn raw_delta(&self) -> &[u32] {
        &self.delta
    }

    pub(crate) fn raw_finals(&self) -> &[bool] {
        &self.finals
    }

    pub fn is_complete(&self) -> bool {
        !self.delta.contains(&NO_STATE)
    }

    /// Re-checks the automaton invariants.
    pub fn validate(&self) -> Result<()> {
        if self.base < 2 {
            return Err(Error::BaseTooSmall(self.base));
        }
        let n = self.state_count();
        if n == 0 {
            return Err(Error::NoStates);
        }
        match std::iter::once(&self.initial)
            .chain(self.delta.iter().filter(|&&t| t != NO_STATE))
            .find(|&&q| q as usize >= n)
        {
            Some(&q) => Err(Error::BadStateId {
                state: q as usize,
                state_count: n,
            }),
            None => Ok(()),
        }
    }

    /// State reached from `from` by `word`, if the run is defined.
    pub fn run_from(&self, from: StateId, word: &[u32]) -> Option<StateId> {
        word.iter().try_fold(from, |q, &a| {
            if a >= self.base {
                None
            } else {
                self.next(q, a)
            }
        })
    }

    pub fn run(&self, word: &[u32]) -> Option<StateId> {
        self.run_from(self.initial(), word)
    }

    pub fn accepts(&self, word: &[u32]) -> bool {
        self.run(word).is_some_and(|q| self.finals[q])
    }

    /// Returns a complete automaton for the same language. A partial input
    /// gains one non-final sink state; a complete input is returned as is.
    pub fn complete(&self) -> Dfa {
        if self.is_complete() {
            return self.clone();
        }
        let sink = self.state_count() as u32;
        let mut delta: Vec<u32> = self
            .delta
            .iter()
            .map(|&t| if t == NO_STATE { sink } else { t })
            .collect();
        delta.extend(std::iter::repeat_n(sink, self.base as usize));
        let mut finals = self.finals.clone();
        finals.push(false);
        Dfa::from_raw(self.base, self.initial, finals, delta)
    }

    /// Accept-by-value check: every defined 0-transition joins two states
    /// that are both final or both non-final.
    pub fn check_zero_stability(&self) -> bool {
        self.zero_stability_witness().is_none()
    }

    pub(crate) fn zero_stability_witness(&self) -> Option<StateId> {
        (0..self.state_count()).find(|&q| {
            self.next(q, 0)
                .is_some_and(|r| self.finals[r] != self.finals[q])
        })
    }

    /// True iff every digit acts as a permutation of the states.
    pub fn is_group_automaton(&self) -> Result<bool> {
        if !self.is_complete() {
            return Err(Error::PreconditionViolated(
                "group test needs a complete automaton".into(),
            ));
        }
        let n = self.state_count();
        let b = self.base as usize;
        let mut hit = vec![false; n];
        for a in 0..b {
            hit.fill(false);
            for q in 0..n {
                if std::mem::replace(&mut hit[self.delta[q * b + a] as usize], true) {
                    return Ok(false);
                }
            }
        }
        Ok(true)
    }

    /// Marks the states reachable from the initial state.
    pub fn reachable(&self) -> Vec<bool> {
        let mut seen = vec![false; self.state_count()];
        let mut stack = vec![self.initial as usize];
        seen[self.initial as usize] = true;
        let b = self.base as usize;
        while let Some(q) = stack.pop() {
            for &t in &self.delta[q * b..(q + 1) * b] {
                if t != NO_STATE && !seen[t as usize] {
                    seen[t as usize] = true;
                    stack.push(t as usize);
                }
            }
        }
        seen
    }

    /// Same transitions and finals, different initial state.
    pub fn with_initial(&self, q: StateId) -> Result<Dfa> {
        if q >= self.state_count() {
            return Err(Error::BadStateId {
                state: q,
                state_count: self.state_count(),
            });
        }
        let mut out = self.clone();
        out.initial = q as u32;
        Ok(out)
    }

    /// The sub-automaton on `states` (renumbered in the given order), rooted at
    /// `states[0]`. Returns `None` when some transition of a listed state
    /// leaves the set or is undefined.
    pub fn restrict(&self, states: &[StateId]) -> Option<Dfa> {
        self.restrict_with(states, &mut vec![NO_STATE; self.state_count()])
    }

    /// As [`restrict`](Self::restrict), with a caller-owned scratch table of
    /// length `state_count` filled with the sentinel; it is restored on return.
    pub(crate) fn restrict_with(&self, states: &[StateId], index: &mut [u32]) -> Option<Dfa> {
        if states.is_empty() {
            return None;
        }
        for (i, &q) in states.iter().enumerate() {
            index[q] = i as u32;
        }
        let b = self.base as usize;
        let mut delta = Vec::with_capacity(states.len() * b);
        let mut closed = true;
        'outer: for &q in states {
            for &t in &self.delta[q * b..(q + 1) * b] {
                if t == NO_STATE || index[t as usize] == NO_STATE {
                    closed = false;
                    break 'outer;
                }
                delta.push(index[t as usize]);
            }
        }
        let finals = states.iter().map(|&q| self.finals[q]).collect();
        for &q in states {
            index[q] = NO_STATE;
        }
        closed.then(|| Dfa::from_raw(self.base, 0, finals, delta))
    }
}

impl Automaton for Dfa {
    fn letter_count(&self) -> usize {
        self.base as usize
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
        self.next(q, letter as u32)
    }
}
