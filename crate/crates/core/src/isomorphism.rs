//! Lockstep isomorphism test for deterministic automata.
//!
//! In a deterministic automaton whose states are all reachable, an
//! isomorphism is forced by the two initial states: one simultaneous
//! traversal either builds it or finds a conflict. Cost is one visit per
//! transition.

use crate::automaton::{Automaton, StateId};
use crate::error::{Error, Result};

const UNSET: u32 = u32::MAX;

/// Returns the state bijection `left -> right` if the automata are isomorphic.
///
/// Both automata must have all states reachable; unreachable states are
/// reported as a precondition violation once the traversal has succeeded on
/// the reachable parts.
pub fn isomorphism<A, B>(left: &A, right: &B) -> Result<Option<Vec<StateId>>>
where
    A: Automaton + ?Sized,
    B: Automaton + ?Sized,
{
    if left.letter_count() != right.letter_count() {
        return Err(Error::PreconditionViolated(format!(
            "alphabets differ ({} vs {} letters)",
            left.letter_count(),
            right.letter_count()
        )));
    }
    let letters = left.letter_count();
    let mut fwd = vec![UNSET; left.state_count()];
    let mut bwd = vec![UNSET; right.state_count()];
    // Breadth-first: queued pairs are known well ahead of their visit, so
    // their memory accesses overlap.
    let mut queue = Vec::with_capacity(left.state_count());
    queue.push((left.initial() as u32, right.initial() as u32));
    let mut head = 0;
    fwd[left.initial()] = right.initial() as u32;
    bwd[right.initial()] = left.initial() as u32;
    let mut visited = 1usize;
    while head < queue.len() {
        let (p, q) = queue[head];
        let (p, q) = (p as usize, q as usize);
        head += 1;
        if left.is_final(p) != right.is_final(q) {
            return Ok(None);
        }
        for a in 0..letters {
            match (left.successor(p, a), right.successor(q, a)) {
                (None, None) => {}
                (Some(p2), Some(q2)) => match (fwd[p2], bwd[q2]) {
                    (UNSET, UNSET) => {
                        fwd[p2] = q2 as u32;
                        bwd[q2] = p2 as u32;
                        visited += 1;
                        queue.push((p2 as u32, q2 as u32));
                    }
                    (x, y) if x == q2 as u32 && y == p2 as u32 => {}
                    _ => return Ok(None),
                },
                _ => return Ok(None),
            }
        }
    }
    if visited != left.state_count() || visited != right.state_count() {
        return Err(Error::PreconditionViolated(
            "isomorphism test needs automata whose states are all reachable".into(),
        ));
    }
    Ok(Some(fwd.into_iter().map(|q| q as usize).collect()))
}

pub fn isomorphic<A, B>(left: &A, right: &B) -> Result<bool>
where
    A: Automaton + ?Sized,
    B: Automaton + ?Sized,
{
    isomorphism(left, right).map(|m| m.is_some())
}
