//! Exact minimum 0-cover as a set-cover problem.
//!
//! Universe: pairs `(path, string)` with `string` in `S_path`. Candidates: bit
//! trees whose every root-to-leaf string lies in the matching `S_path`; each
//! candidate covers exactly one pair per path. The search branches on the
//! uncovered pair with the fewest covering candidates and prunes with
//! `chosen + max_path (uncovered pairs on path)`, which is valid because a
//! tree hits at most one pair per path.

use std::collections::HashMap;

use super::cover::{greedy_trees, PathStrings, ValidPrefixes};
use super::node_index;
use crate::error::{Error, Result};
use crate::limits::Limits;

/// Candidate trees are packed into a `u64`, node `i` at bit `nodes - 1 - i`,
/// so integer order is lexicographic order of the heap-order bit vector.
pub(crate) const HARD_MAX_DEPTH: usize = 6;

struct Instance {
    nodes: usize,
    paths: usize,
    /// `covers[c][p]` = element id hit by candidate `c` on path `p`.
    covers: Vec<Vec<usize>>,
    /// Candidates hitting each element, ascending.
    hitting: Vec<Vec<usize>>,
    element_path: Vec<usize>,
    candidates: Vec<u64>,
}

struct Search<'a> {
    inst: &'a Instance,
    hits: Vec<u32>,
    uncovered_on_path: Vec<usize>,
    uncovered_total: usize,
    nodes_visited: u64,
    node_limit: u64,
}

pub(crate) fn minimum_cover(strings: &PathStrings, limits: &Limits) -> Result<Vec<Vec<usize>>> {
    let inst = Instance::build(strings, limits)?;

    // Greedy trees are consistent, hence candidates; they seed the incumbent.
    let index: HashMap<u64, usize> = inst
        .candidates
        .iter()
        .enumerate()
        .map(|(i, &c)| (c, i))
        .collect();
    let incumbent: Vec<usize> = greedy_trees(strings)
        .iter()
        .map(|values| index[&inst.pack(values)])
        .collect();

    let mut search = Search::new(&inst, limits.max_search_nodes);
    let mut chosen = Vec::new();
    let mut size = incumbent.len();
    // Keep shrinking until no strictly smaller cover exists.
    while size > 0 {
        match search.run(&mut chosen, size - 1, 0)? {
            Some(found) => size = found.len(),
            None => break,
        }
    }

    // Lexicographically least cover of the minimum size: fix members one at a
    // time, taking the smallest candidate that still admits a completion.
    let mut fixed: Vec<usize> = Vec::new();
    while search.uncovered_total > 0 {
        let start = fixed.last().map_or(0, |&c| c + 1);
        let mut placed = false;
        for c in start..inst.candidates.len() {
            search.apply(c);
            fixed.push(c);
            let feasible = search.uncovered_total == 0
                || search.run(&mut fixed.clone(), size, c + 1)?.is_some();
            if feasible {
                placed = true;
                break;
            }
            fixed.pop();
            search.unapply(c);
        }
        if !placed {
            return Err(Error::Contradiction(
                "minimum cover could not be reconstructed".into(),
            ));
        }
    }
    debug_assert_eq!(fixed.len(), size);
    Ok(fixed
        .iter()
        .map(|&c| inst.unpack(inst.candidates[c]))
        .collect())
}

impl Instance {
    fn build(strings: &PathStrings, limits: &Limits) -> Result<Self> {
        let n = strings.depth();
        if n > HARD_MAX_DEPTH {
            return Err(Error::budget("exact cover depth", n, HARD_MAX_DEPTH as u64));
        }
        let nodes = (1usize << n) - 1;
        let paths = strings.paths();
        let prefixes = ValidPrefixes::new(strings);

        let mut element_of = HashMap::new();
        let mut element_path = Vec::new();
        for p in 0..paths {
            for &s in strings.strings(p) {
                element_of.insert((p, s), element_path.len());
                element_path.push(p);
            }
        }

        let mut candidates = Vec::new();
        let mut budget = limits.max_cover_candidates;
        enumerate(
            &prefixes,
            n,
            nodes,
            1,
            0,
            0,
            &mut budget,
            limits.max_cover_candidates,
            &mut candidates,
        )?;
        candidates.sort_unstable();

        let mut hitting = vec![Vec::new(); element_path.len()];
        let mut covers = Vec::with_capacity(candidates.len());
        for (c, &mask) in candidates.iter().enumerate() {
            let row: Vec<usize> = (0..paths)
                .map(|p| {
                    let s = (1..=n).fold(0u64, |acc, t| {
                        let node = node_index(t, (p as u64) >> (n - t));
                        (acc << 1) | (mask >> (nodes - 1 - node)) & 1
                    });
                    element_of[&(p, s)]
                })
                .collect();
            for &e in &row {
                hitting[e].push(c);
            }
            covers.push(row);
        }
        Ok(Instance {
            nodes,
            paths,
            covers,
            hitting,
            element_path,
            candidates,
        })
    }

    fn pack(&self, values: &[usize]) -> u64 {
        values
            .iter()
            .enumerate()
            .fold(0, |acc, (i, &v)| acc | ((v as u64) << (self.nodes - 1 - i)))
    }

    fn unpack(&self, mask: u64) -> Vec<usize> {
        (0..self.nodes)
            .map(|i| ((mask >> (self.nodes - 1 - i)) & 1) as usize)
            .collect()
    }
}

/// All consistent assignments of the subtree at `(level, prefix)` given the
/// bits `above` on the path to it, OR-ed into `out` as packed masks.
#[allow(clippy::too_many_arguments)]
fn enumerate(
    prefixes: &ValidPrefixes,
    n: usize,
    nodes: usize,
    level: usize,
    prefix: u64,
    above: u64,
    budget: &mut u64,
    limit: u64,
    out: &mut Vec<u64>,
) -> Result<()> {
    let node = node_index(level, prefix);
    for b in 0..2u64 {
        let s = (above << 1) | b;
        if !prefixes.contains(level, prefix, s) {
            continue;
        }
        let here = b << (nodes - 1 - node);
        if level == n {
            if *budget == 0 {
                return Err(Error::budget("cover candidates", "more", limit));
            }
            *budget -= 1;
            out.push(here);
            continue;
        }
        let mut left = Vec::new();
        let mut right = Vec::new();
        enumerate(
            prefixes,
            n,
            nodes,
            level + 1,
            prefix << 1,
            s,
            budget,
            limit,
            &mut left,
        )?;
        enumerate(
            prefixes,
            n,
            nodes,
            level + 1,
            (prefix << 1) | 1,
            s,
            budget,
            limit,
            &mut right,
        )?;
        let combined = (left.len() as u64).saturating_mul(right.len() as u64);
        if combined > *budget {
            return Err(Error::budget("cover candidates", combined, limit));
        }
        *budget -= combined;
        for &l in &left {
            for &r in &right {
                out.push(here | l | r);
            }
        }
    }
    Ok(())
}

impl<'a> Search<'a> {
    fn new(inst: &'a Instance, node_limit: u64) -> Self {
        let mut uncovered_on_path = vec![0; inst.paths];
        for &p in &inst.element_path {
            uncovered_on_path[p] += 1;
        }
        Search {
            inst,
            hits: vec![0; inst.element_path.len()],
            uncovered_on_path,
            uncovered_total: inst.element_path.len(),
            nodes_visited: 0,
            node_limit,
        }
    }

    fn apply(&mut self, c: usize) {
        for &e in &self.inst.covers[c] {
            if self.hits[e] == 0 {
                self.uncovered_on_path[self.inst.element_path[e]] -= 1;
                self.uncovered_total -= 1;
            }
            self.hits[e] += 1;
        }
    }

    fn unapply(&mut self, c: usize) {
        for &e in &self.inst.covers[c] {
            self.hits[e] -= 1;
            if self.hits[e] == 0 {
                self.uncovered_on_path[self.inst.element_path[e]] += 1;
                self.uncovered_total += 1;
            }
        }
    }

    /// Finds a cover extending `chosen` with at most `max_size` members, using
    /// only candidates with index `>= min_candidate`. Restores all state.
    fn run(
        &mut self,
        chosen: &mut Vec<usize>,
        max_size: usize,
        min_candidate: usize,
    ) -> Result<Option<Vec<usize>>> {
        self.nodes_visited += 1;
        if self.nodes_visited > self.node_limit {
            return Err(Error::budget(
                "set-cover search nodes",
                self.nodes_visited,
                self.node_limit,
            ));
        }
        if self.uncovered_total == 0 {
            let mut found = chosen.clone();
            found.sort_unstable();
            return Ok(Some(found));
        }
        let lb = self.uncovered_on_path.iter().copied().max().unwrap_or(0);
        if chosen.len() + lb > max_size {
            return Ok(None);
        }
        // Branch on the uncovered element with the fewest admissible candidates.
        let mut pick: Option<(usize, usize)> = None;
        for (e, &h) in self.hits.iter().enumerate() {
            if h > 0 {
                continue;
            }
            let list = &self.inst.hitting[e];
            let options = list.len() - list.partition_point(|&c| c < min_candidate);
            if options == 0 {
                return Ok(None);
            }
            if pick.is_none_or(|(_, o)| options < o) {
                pick = Some((e, options));
            }
        }
        let (e, _) = pick.expect("an uncovered element exists");
        let list = &self.inst.hitting[e];
        let first = list.partition_point(|&c| c < min_candidate);
        for &c in &list[first..] {
            self.apply(c);
            chosen.push(c);
            let found = self.run(chosen, max_size, min_candidate);
            chosen.pop();
            self.unapply(c);
            if let Some(cover) = found? {
                return Ok(Some(cover));
            }
        }
        Ok(None)
    }
}
