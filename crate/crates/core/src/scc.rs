//! Strongly connected components and the component graph.
//!
//! Components are found with an iterative Tarjan traversal in `O(b n)`, or
//! by breadth-first search when every letter permutes the states, and are
//! classified as trivial, type one (some internal transition carries a
//! positive digit) or type two (a simple circuit labelled only by 0).

use std::sync::OnceLock;

use crate::automaton::{Dfa, StateId, NO_STATE};

pub type SccId = usize;

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub enum SccType {
    /// A single state without a self-loop.
    Trivial,
    /// Non-trivial, with an internal transition labelled by a positive digit.
    TypeOne,
    /// A simple circuit of 0-transitions (possibly a single 0-self-loop).
    TypeTwo,
}

impl SccType {
    pub fn label(self) -> &'static str {
        match self {
            SccType::Trivial => "trivial",
            SccType::TypeOne => "type-one",
            SccType::TypeTwo => "type-two",
        }
    }
}

#[derive(Clone, Debug)]
pub struct Condensation {
    scc_of: Vec<u32>,
    sizes: Vec<usize>,
    // Built on first use; the group fast path rarely needs it.
    members: OnceLock<Vec<Vec<StateId>>>,
    types: Vec<SccType>,
    descendants: Vec<Vec<SccId>>,
    topological_order: Vec<SccId>,
    permutes: bool,
}

impl Condensation {
    pub fn new(dfa: &Dfa) -> Self {
        if let Some((scc_of, sizes)) = orbits(dfa) {
            // Every state keeps its positive digits inside its orbit and no
            // edge joins two orbits.
            let count = sizes.len();
            return Condensation {
                scc_of,
                sizes,
                members: OnceLock::new(),
                types: vec![SccType::TypeOne; count],
                descendants: vec![Vec::new(); count],
                topological_order: (0..count).rev().collect(),
                permutes: true,
            };
        }
        let scc_of = tarjan(dfa);
        let count = scc_of.iter().map(|&c| c as usize + 1).max().unwrap_or(0);
        let mut sizes = vec![0; count];
        for &c in &scc_of {
            sizes[c as usize] += 1;
        }
        let members = collect_members(&scc_of, &sizes);

        let mut positive_internal = vec![false; count];
        let mut has_internal = vec![false; count];
        let mut descendants = vec![Vec::new(); count];
        let mut stamp = vec![NO_STATE; count];
        for (c, states) in members.iter().enumerate() {
            for &q in states {
                for a in 0..dfa.base() {
                    let Some(t) = dfa.next(q, a) else { continue };
                    let d = scc_of[t] as usize;
                    if d == c {
                        has_internal[c] = true;
                        positive_internal[c] |= a > 0;
                    } else if stamp[d] != c as u32 {
                        stamp[d] = c as u32;
                        descendants[c].push(d);
                    }
                }
            }
        }
        let types = (0..count)
            .map(|c| match (has_internal[c], positive_internal[c]) {
                (false, _) => SccType::Trivial,
                (true, true) => SccType::TypeOne,
                (true, false) => SccType::TypeTwo,
            })
            .collect();
        // Tarjan completes sink components first.
        let topological_order = (0..count).rev().collect();
        Condensation {
            scc_of,
            sizes,
            members: OnceLock::from(members),
            types,
            descendants,
            topological_order,
            permutes: false,
        }
    }

    /// True if every digit was found to permute the states.
    pub(crate) fn permutes(&self) -> bool {
        self.permutes
    }

    pub fn len(&self) -> usize {
        self.sizes.len()
    }

    pub fn is_empty(&self) -> bool {
        self.sizes.is_empty()
    }

    pub fn scc_of(&self, q: StateId) -> SccId {
        self.scc_of[q] as usize
    }

    /// States of `c` in increasing order.
    pub fn members(&self, c: SccId) -> &[StateId] {
        &self
            .members
            .get_or_init(|| collect_members(&self.scc_of, &self.sizes))[c]
    }

    pub fn size(&self, c: SccId) -> usize {
        self.sizes[c]
    }

    pub fn scc_type(&self, c: SccId) -> SccType {
        self.types[c]
    }

    pub fn descendants(&self, c: SccId) -> &[SccId] {
        &self.descendants[c]
    }

    /// Component ids ordered so that every edge of the component graph goes
    /// forward.
    pub fn topological_order(&self) -> &[SccId] {
        &self.topological_order
    }

    pub fn sccs_of_type(&self, ty: SccType) -> impl Iterator<Item = SccId> + '_ {
        (0..self.len()).filter(move |&c| self.types[c] == ty)
    }
}

fn collect_members(scc_of: &[u32], sizes: &[usize]) -> Vec<Vec<StateId>> {
    let mut members: Vec<Vec<StateId>> = sizes.iter().map(|&s| Vec::with_capacity(s)).collect();
    for (q, &c) in scc_of.iter().enumerate() {
        members[c as usize].push(q);
    }
    members
}

pub fn condensation(dfa: &Dfa) -> Condensation {
    Condensation::new(dfa)
}

/// In a complete group automaton every transition lies on a circuit, so the
/// components are the forward orbits and a breadth-first search finds them.
/// There are no edges between components, so any numbering is topological.
fn orbits(dfa: &Dfa) -> Option<(Vec<u32>, Vec<usize>)> {
    if !dfa.is_complete() || !dfa.is_group_automaton().ok()? {
        return None;
    }
    let n = dfa.state_count();
    let mut comp = vec![NO_STATE; n];
    let mut queue: Vec<u32> = Vec::with_capacity(n);
    let mut count = 0u32;
    let mut sizes = Vec::new();
    for start in 0..n {
        if comp[start] != NO_STATE {
            continue;
        }
        comp[start] = count;
        queue.clear();
        queue.push(start as u32);
        let mut head = 0;
        while head < queue.len() {
            let q = queue[head] as usize;
            head += 1;
            for a in 0..dfa.base() {
                let t = dfa.step(q, a);
                if comp[t] == NO_STATE {
                    comp[t] = count;
                    queue.push(t as u32);
                }
            }
        }
        sizes.push(queue.len());
        count += 1;
    }
    Some((comp, sizes))
}

struct Frame {
    state: u32,
    rindex: u32,
    root: bool,
    edges: usize,
}

/// Component id per state, numbered in completion order.
///
/// Pearce's variant of Tarjan's algorithm: one `rindex` array serves as
/// visit index, low link and finally component id. Pending successors, the
/// live low link and the values of stacked states are kept on sequential
/// stacks so a state's row is read once.
fn tarjan(dfa: &Dfa) -> Vec<u32> {
    let n = dfa.state_count();
    let b = dfa.base();
    let mut rindex = vec![0u32; n];
    let mut stack: Vec<(u32, u32)> = Vec::new();
    let mut edges: Vec<u32> = Vec::new();
    let mut calls: Vec<Frame> = Vec::new();
    let mut index = 1u32;
    // Component ids count down from n - 1 so they never collide with live
    // indices.
    let mut c = n as u32;

    let enter = |v: usize, index: &mut u32, rindex: &mut [u32], edges: &mut Vec<u32>| {
        rindex[v] = *index;
        let frame = Frame {
            state: v as u32,
            rindex: *index,
            root: true,
            edges: edges.len(),
        };
        *index += 1;
        for a in (0..b).rev() {
            if let Some(w) = dfa.next(v, a) {
                edges.push(w as u32);
            }
        }
        frame
    };

    for start in 0..n {
        if rindex[start] != 0 {
            continue;
        }
        let f = enter(start, &mut index, &mut rindex, &mut edges);
        calls.push(f);
        while let Some(frame) = calls.last_mut() {
            if edges.len() > frame.edges {
                let w = edges.pop().unwrap() as usize;
                let rw = rindex[w];
                if rw == 0 {
                    let f = enter(w, &mut index, &mut rindex, &mut edges);
                    calls.push(f);
                } else if rw < frame.rindex {
                    frame.rindex = rw;
                    frame.root = false;
                    rindex[frame.state as usize] = rw;
                }
                continue;
            }
            let Frame {
                state: v,
                rindex: rv,
                root,
                ..
            } = calls.pop().unwrap();
            let done = if root {
                index -= 1;
                c -= 1;
                while let Some(&(w, rw)) = stack.last() {
                    if rv > rw {
                        break;
                    }
                    stack.pop();
                    rindex[w as usize] = c;
                    index -= 1;
                }
                rindex[v as usize] = c;
                c
            } else {
                stack.push((v, rv));
                rv
            };
            if let Some(parent) = calls.last_mut() {
                if done < parent.rindex {
                    parent.rindex = done;
                    parent.root = false;
                    rindex[parent.state as usize] = done;
                }
            }
        }
    }
    let last = n as u32 - 1;
    for r in &mut rindex {
        *r = last - *r;
    }
    rindex
}
