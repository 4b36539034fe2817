//! Hopcroft partition refinement.
//!
//! The input is completed and trimmed to its reachable part, then the
//! partition {finals, non-finals} is refined with "process the smaller half"
//! splitting, which bounds the work by `O(b n log n)`. Classes of the output
//! are numbered in breadth-first order from the initial class.

use std::collections::VecDeque;

use crate::automaton::{Dfa, NO_STATE};

pub fn minimize(dfa: &Dfa) -> Dfa {
    let full = dfa.complete();
    let trimmed = reachable_part(&full);
    let classes = Refinement::new(&trimmed).run();
    quotient(&trimmed, &classes)
}

/// Reachable part of a complete automaton, numbered in BFS order.
pub(crate) fn reachable_part(dfa: &Dfa) -> Dfa {
    let n = dfa.state_count();
    let b = dfa.base() as usize;
    let delta = dfa.raw_delta();
    let mut index = vec![NO_STATE; n];
    let mut order = Vec::with_capacity(n);
    index[dfa.initial()] = 0;
    order.push(dfa.initial() as u32);
    let mut head = 0;
    while head < order.len() {
        let q = order[head] as usize;
        head += 1;
        for &t in &delta[q * b..(q + 1) * b] {
            if index[t as usize] == NO_STATE {
                index[t as usize] = order.len() as u32;
                order.push(t);
            }
        }
    }
    if order.len() == n && order.iter().enumerate().all(|(i, &q)| i == q as usize) {
        return dfa.clone();
    }
    let mut new_delta = Vec::with_capacity(order.len() * b);
    for &q in &order {
        let q = q as usize;
        new_delta.extend(delta[q * b..(q + 1) * b].iter().map(|&t| index[t as usize]));
    }
    let finals = order.iter().map(|&q| dfa.is_final(q as usize)).collect();
    Dfa::from_raw(dfa.base(), 0, finals, new_delta)
}

struct Refinement<'a> {
    dfa: &'a Dfa,
    base: usize,
    elems: Vec<u32>,
    loc: Vec<u32>,
    block_of: Vec<u32>,
    first: Vec<u32>,
    end: Vec<u32>,
    marked: Vec<u32>,
    // Predecessors grouped by (target * base + digit).
    pred_off: Vec<u32>,
    preds: Vec<u32>,
    in_work: Vec<bool>,
    work: Vec<(u32, u32)>,
}

impl<'a> Refinement<'a> {
    fn new(dfa: &'a Dfa) -> Self {
        let n = dfa.state_count();
        let b = dfa.base() as usize;
        let delta = dfa.raw_delta();

        let mut pred_off = vec![0u32; n * b + 1];
        for (i, &t) in delta.iter().enumerate() {
            pred_off[t as usize * b + i % b + 1] += 1;
        }
        for k in 1..pred_off.len() {
            pred_off[k] += pred_off[k - 1];
        }
        let mut fill = pred_off.clone();
        let mut preds = vec![0u32; delta.len()];
        for (i, &t) in delta.iter().enumerate() {
            let key = t as usize * b + i % b;
            preds[fill[key] as usize] = (i / b) as u32;
            fill[key] += 1;
        }

        let mut elems: Vec<u32> = (0..n as u32)
            .filter(|&q| dfa.is_final(q as usize))
            .collect();
        let final_count = elems.len();
        elems.extend((0..n as u32).filter(|&q| !dfa.is_final(q as usize)));
        let mut loc = vec![0u32; n];
        for (i, &q) in elems.iter().enumerate() {
            loc[q as usize] = i as u32;
        }

        let mut r = Refinement {
            dfa,
            base: b,
            elems,
            loc,
            block_of: vec![0; n],
            first: Vec::new(),
            end: Vec::new(),
            marked: Vec::new(),
            pred_off,
            preds,
            in_work: Vec::new(),
            work: Vec::new(),
        };
        let bounds = [(0, final_count), (final_count, n)];
        for (lo, hi) in bounds.into_iter().filter(|(lo, hi)| lo < hi) {
            let id = r.first.len() as u32;
            r.first.push(lo as u32);
            r.end.push(hi as u32);
            r.marked.push(0);
            for i in lo..hi {
                r.block_of[r.elems[i] as usize] = id;
            }
        }
        r.in_work = vec![false; n * b];
        if r.first.len() == 2 {
            let smaller = if final_count <= n - final_count { 0 } else { 1 };
            for a in 0..b {
                r.push_work(smaller, a);
            }
        }
        r
    }

    fn push_work(&mut self, block: u32, digit: usize) {
        self.in_work[block as usize * self.base + digit] = true;
        self.work.push((block, digit as u32));
    }

    fn run(mut self) -> Vec<u32> {
        let b = self.base;
        let mut splitter = Vec::new();
        let mut touched = Vec::new();
        while let Some((block, digit)) = self.work.pop() {
            self.in_work[block as usize * b + digit as usize] = false;
            splitter.clear();
            for i in self.first[block as usize]..self.end[block as usize] {
                let key = self.elems[i as usize] as usize * b + digit as usize;
                let (lo, hi) = (self.pred_off[key], self.pred_off[key + 1]);
                splitter.extend_from_slice(&self.preds[lo as usize..hi as usize]);
            }
            for &q in &splitter {
                let y = self.block_of[q as usize] as usize;
                let target = self.first[y] + self.marked[y];
                let pos = self.loc[q as usize];
                let other = self.elems[target as usize];
                self.elems.swap(pos as usize, target as usize);
                self.loc[other as usize] = pos;
                self.loc[q as usize] = target;
                if self.marked[y] == 0 {
                    touched.push(y as u32);
                }
                self.marked[y] += 1;
            }
            for y in touched.drain(..) {
                let y = y as usize;
                let split_at = self.first[y] + self.marked[y];
                self.marked[y] = 0;
                if split_at == self.end[y] {
                    continue;
                }
                let z = self.first.len() as u32;
                self.first.push(self.first[y]);
                self.end.push(split_at);
                self.marked.push(0);
                self.first[y] = split_at;
                for i in self.first[z as usize]..split_at {
                    self.block_of[self.elems[i as usize] as usize] = z;
                }
                let y_len = self.end[y] - self.first[y];
                let z_len = split_at - self.first[z as usize];
                for a in 0..b {
                    if self.in_work[y * b + a] || z_len <= y_len {
                        self.push_work(z, a);
                    } else {
                        self.push_work(y as u32, a);
                    }
                }
            }
        }
        debug_assert_eq!(self.block_of.len(), self.dfa.state_count());
        self.block_of
    }
}

fn quotient(dfa: &Dfa, block_of: &[u32]) -> Dfa {
    let b = dfa.base() as usize;
    let block_count = block_of.iter().map(|&x| x as usize + 1).max().unwrap_or(0);
    let mut repr = vec![NO_STATE; block_count];
    for (q, &blk) in block_of.iter().enumerate() {
        if repr[blk as usize] == NO_STATE {
            repr[blk as usize] = q as u32;
        }
    }
    let mut index = vec![NO_STATE; block_count];
    let mut order = Vec::with_capacity(block_count);
    let start = block_of[dfa.initial()];
    index[start as usize] = 0;
    order.push(start);
    let mut queue = VecDeque::from([start]);
    let mut delta = Vec::with_capacity(block_count * b);
    while let Some(blk) = queue.pop_front() {
        let q = repr[blk as usize] as usize;
        for a in 0..b {
            let t = block_of[dfa.step(q, a as u32)];
            if index[t as usize] == NO_STATE {
                index[t as usize] = order.len() as u32;
                order.push(t);
                queue.push_back(t);
            }
            delta.push(index[t as usize]);
        }
    }
    let finals = order
        .iter()
        .map(|&blk| dfa.is_final(repr[blk as usize] as usize))
        .collect();
    Dfa::from_raw(dfa.base(), 0, finals, delta)
}
