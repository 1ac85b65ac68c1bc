//! Backtracking search for a chain family of a given deficit.
//!
//! Chains are grown downward from their tails. Sweeping the dinv boundary
//! `b` from the largest tail start down to 0, every `ν`-segment that ends at
//! `b − 1` is attached to a distinct chain whose current lowest dinv is `b`;
//! chains left without a segment start at `b`. Each attachment is checked
//! against the staircase shape of the partial mind word, and each chain start
//! against the start/height pairs that opposition with a tail forces. Once
//! every chain is fixed, an involution is sought among locally opposite chain
//! pairs and the result goes through [`verify_family`].

use std::collections::{BTreeMap, HashMap};

use thiserror::Error;

use crate::chains::{
    decompose_local, default_cutoff, expand_global, locally_opposite, verify_family, ChainFamily,
    ChainSpec, LocalChain, VerificationReport,
};
use crate::nu::{
    nu, nu_inv, segment_from_initial, tail_height, tail_initiator, tail_start_dinv, tail_type,
};
use crate::partition::{deficit_levels, Partition, PartitionsOf};
use crate::staircase::Staircase;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum SearchError {
    #[error("dinv cutoff {cutoff} is below the largest tail start {needed}")]
    CutoffTooSmall { cutoff: usize, needed: usize },
}

#[derive(Clone, Debug)]
pub enum SearchOutcome {
    Found {
        family: ChainFamily,
        report: VerificationReport,
        nodes: u64,
        backtracks: u64,
    },
    BudgetExhausted {
        nodes: u64,
        backtracks: u64,
    },
    Infeasible {
        nodes: u64,
        backtracks: u64,
        reason: String,
    },
}

impl SearchOutcome {
    pub fn family(&self) -> Option<&ChainFamily> {
        match self {
            SearchOutcome::Found { family, .. } => Some(family),
            _ => None,
        }
    }

    pub fn nodes(&self) -> u64 {
        match self {
            SearchOutcome::Found { nodes, .. }
            | SearchOutcome::BudgetExhausted { nodes, .. }
            | SearchOutcome::Infeasible { nodes, .. } => *nodes,
        }
    }

    pub fn backtracks(&self) -> u64 {
        match self {
            SearchOutcome::Found { backtracks, .. }
            | SearchOutcome::BudgetExhausted { backtracks, .. }
            | SearchOutcome::Infeasible { backtracks, .. } => *backtracks,
        }
    }
}

/// Searches for a family of deficit `k` within `budget` nodes.
///
/// The returned family passes [`verify_family`] at `max(cutoff, default_cutoff(k))`
/// with `n_max = 12`.
pub fn find_family(k: usize, cutoff: usize, budget: u64) -> Result<SearchOutcome, SearchError> {
    find_family_with_hint(k, cutoff, budget, None)
}

/// As [`find_family`], trying the choices of `hint` first at every decision.
/// A valid hint is reproduced without backtracking.
pub fn find_family_with_hint(
    k: usize,
    cutoff: usize,
    budget: u64,
    hint: Option<&ChainFamily>,
) -> Result<SearchOutcome, SearchError> {
    let needed = PartitionsOf::new(k)
        .map(|mu| tail_start_dinv(&mu))
        .max()
        .unwrap_or(0);
    if cutoff < needed {
        return Err(SearchError::CutoffTooSmall { cutoff, needed });
    }
    let mut search = match Search::new(k, needed, cutoff.max(default_cutoff(k)), budget, hint) {
        Ok(s) => s,
        Err(reason) => {
            return Ok(SearchOutcome::Infeasible {
                nodes: 0,
                backtracks: 0,
                reason,
            })
        }
    };
    let step = if needed == 0 {
        search.boundary(0)
    } else {
        search.boundary(needed)
    };
    let (nodes, backtracks) = (search.nodes, search.backtracks);
    Ok(match step {
        Step::Found(family, report) => SearchOutcome::Found {
            family,
            report,
            nodes,
            backtracks,
        },
        Step::Budget => SearchOutcome::BudgetExhausted { nodes, backtracks },
        Step::Fail => SearchOutcome::Infeasible {
            nodes,
            backtracks,
            reason: "no family satisfies the chain constraints".into(),
        },
    })
}

enum Step {
    Found(ChainFamily, VerificationReport),
    Fail,
    Budget,
}

struct Segment {
    members: Vec<Partition>,
    start: usize,
    minds: Vec<usize>,
}

struct Search {
    k: usize,
    verify_cutoff: usize,
    budget: u64,
    nodes: u64,
    backtracks: u64,
    mus: Vec<Partition>,
    tail_starts: Vec<usize>,
    /// Minds at the tail start and one step after it.
    tail_minds: Vec<[usize; 2]>,
    segments: Vec<Segment>,
    ending_at: Vec<Vec<usize>>,
    low: Vec<usize>,
    /// Segments attached to each chain, highest first.
    attached: Vec<Vec<usize>>,
    started: Vec<bool>,
    /// Remaining `(ℓ(ν), ν₁ + ℓ(ν) + 1)` pairs that chain starts must use up.
    start_pairs: BTreeMap<(usize, usize), usize>,
    hint_chain: HashMap<Partition, Partition>,
    hint_partner: BTreeMap<Partition, Partition>,
}

impl Search {
    fn new(
        k: usize,
        t_max: usize,
        verify_cutoff: usize,
        budget: u64,
        hint: Option<&ChainFamily>,
    ) -> Result<Self, String> {
        let mut mus: Vec<Partition> = PartitionsOf::new(k).collect();
        mus.sort_by(|x, y| {
            tail_start_dinv(y)
                .cmp(&tail_start_dinv(x))
                .then(x.cmp_desc(y))
        });
        let tail_starts: Vec<usize> = mus.iter().map(tail_start_dinv).collect();
        let tail_minds = mus
            .iter()
            .map(|mu| {
                let ti = tail_initiator(mu);
                let next = nu(&ti).expect("tails are infinite");
                [ti.mind(), next.mind()]
            })
            .collect();

        let mut start_pairs = BTreeMap::new();
        for mu in &mus {
            *start_pairs.entry((mu.len(), tail_height(mu))).or_insert(0) += 1;
        }

        let mut initials: Vec<Partition> = Vec::new();
        for level in deficit_levels(k, t_max) {
            for p in level {
                let mut first = p.clone();
                while let Ok(prev) = nu_inv(&first) {
                    first = prev;
                }
                if tail_type(&first).is_none() && !initials.contains(&first) {
                    initials.push(first);
                }
            }
        }
        let mut segments = Vec::new();
        for init in initials {
            let seg = segment_from_initial(init.clone(), verify_cutoff);
            if seg.open_right {
                return Err(format!(
                    "segment of {} reaches the dinv cutoff",
                    init.compact()
                ));
            }
            let start = init.dinv();
            let minds: Vec<usize> = seg.members.iter().map(Partition::mind).collect();
            let end = start + minds.len() - 1;
            if end >= t_max {
                return Err(format!(
                    "segment of {} ends at dinv {end}, past every tail start",
                    init.compact()
                ));
            }
            if minds.windows(2).any(|w| w[0] > w[1]) {
                return Err(format!(
                    "segment of {} has a descent inside it",
                    init.compact()
                ));
            }
            segments.push(Segment {
                members: seg.members,
                start,
                minds,
            });
        }
        // Descending end, then descending start, then initial order.
        segments.sort_by(|x, y| {
            let ex = x.start + x.minds.len();
            let ey = y.start + y.minds.len();
            ey.cmp(&ex)
                .then(y.start.cmp(&x.start))
                .then(x.members[0].cmp_desc(&y.members[0]))
        });
        let mut ending_at = vec![Vec::new(); t_max + 1];
        for (i, s) in segments.iter().enumerate() {
            ending_at[s.start + s.minds.len() - 1].push(i);
        }

        let (hint_chain, hint_partner) = match hint {
            Some(f) => (
                f.chains
                    .iter()
                    .flat_map(|c| {
                        c.initials
                            .iter()
                            .map(move |(p, _)| (p.clone(), c.mu.clone()))
                    })
                    .collect(),
                f.involution.clone(),
            ),
            None => (HashMap::new(), BTreeMap::new()),
        };

        let n = mus.len();
        Ok(Search {
            k,
            verify_cutoff,
            budget,
            nodes: 0,
            backtracks: 0,
            low: tail_starts.clone(),
            tail_starts,
            tail_minds,
            segments,
            ending_at,
            attached: vec![Vec::new(); n],
            started: vec![false; n],
            start_pairs,
            hint_chain,
            hint_partner,
            mus,
        })
    }

    /// Mind word of chain `c` from its current lowest dinv through one step
    /// past its tail start.
    fn word(&self, c: usize) -> Vec<usize> {
        let mut w = Vec::new();
        for &s in self.attached[c].iter().rev() {
            w.extend_from_slice(&self.segments[s].minds);
        }
        w.extend_from_slice(&self.tail_minds[c]);
        w
    }

    fn boundary(&mut self, b: usize) -> Step {
        let open: Vec<usize> = (0..self.mus.len())
            .filter(|&c| !self.started[c] && self.low[c] == b)
            .collect();
        let ends = if b > 0 {
            self.ending_at[b - 1].clone()
        } else {
            Vec::new()
        };
        if ends.len() > open.len() {
            return Step::Fail;
        }
        let mut used = vec![false; open.len()];
        self.assign(b, &open, &ends, 0, &mut used)
    }

    fn assign(
        &mut self,
        b: usize,
        open: &[usize],
        ends: &[usize],
        i: usize,
        used: &mut [bool],
    ) -> Step {
        if i == ends.len() {
            return self.terminate(b, open, used);
        }
        let seg = ends[i];
        let mut order: Vec<usize> = (0..open.len()).filter(|&j| !used[j]).collect();
        if let Some(mu) = self.hint_chain.get(&self.segments[seg].members[0]) {
            if let Some(pos) = order.iter().position(|&j| &self.mus[open[j]] == mu) {
                let j = order.remove(pos);
                order.insert(0, j);
            }
        }
        for j in order {
            self.nodes += 1;
            if self.nodes > self.budget {
                return Step::Budget;
            }
            let c = open[j];
            let old_low = self.low[c];
            self.attached[c].push(seg);
            self.low[c] = self.segments[seg].start;
            if word_shape_ok(&self.word(c), self.low[c], self.tail_starts[c], false) {
                used[j] = true;
                match self.assign(b, open, ends, i + 1, used) {
                    Step::Fail => {}
                    other => return other,
                }
                used[j] = false;
            }
            self.attached[c].pop();
            self.low[c] = old_low;
            self.backtracks += 1;
        }
        Step::Fail
    }

    /// Chains in `open` without a segment start at `b`.
    fn terminate(&mut self, b: usize, open: &[usize], used: &[bool]) -> Step {
        let mut taken = Vec::new();
        let mut ok = true;
        for (j, &c) in open.iter().enumerate() {
            if used[j] {
                continue;
            }
            let w = self.word(c);
            let key = (b, w[0]);
            let avail = self.start_pairs.get(&key).copied().unwrap_or(0);
            if avail == 0 || !word_shape_ok(&w, b, self.tail_starts[c], true) {
                ok = false;
                break;
            }
            *self.start_pairs.get_mut(&key).unwrap() -= 1;
            self.started[c] = true;
            taken.push((c, key));
        }
        // Pairs with start ≥ b can no longer be used.
        ok = ok && self.start_pairs.range((b, 0)..).all(|(_, &n)| n == 0);
        let step = if !ok {
            Step::Fail
        } else if b == 0 {
            self.finish()
        } else {
            self.boundary(b - 1)
        };
        for (c, key) in taken {
            *self.start_pairs.get_mut(&key).unwrap() += 1;
            self.started[c] = false;
        }
        step
    }

    fn finish(&mut self) -> Step {
        let mut specs = Vec::new();
        let mut locals: Vec<Vec<LocalChain>> = Vec::new();
        for (c, mu) in self.mus.iter().enumerate() {
            let mut initials: Vec<(Partition, bool)> = self.attached[c]
                .iter()
                .rev()
                .map(|&s| (self.segments[s].members[0].clone(), false))
                .collect();
            initials.push((tail_initiator(mu), false));
            let Ok(g) = expand_global(&initials, self.verify_cutoff) else {
                return Step::Fail;
            };
            let Ok(ls) = decompose_local(&g) else {
                return Step::Fail;
            };
            let starts: Vec<usize> = ls[1..]
                .iter()
                .filter_map(|l| l.left_params())
                .map(|p| p.a)
                .collect();
            for (p, marked) in &mut initials {
                *marked = !starts.contains(&p.dinv());
            }
            specs.push(ChainSpec {
                mu: mu.clone(),
                initials,
            });
            locals.push(ls);
        }
        let n = self.mus.len();
        let compatible = |x: usize, y: usize| {
            let (s, t) = (&locals[x], &locals[y]);
            s.len() == t.len()
                && (0..s.len()).all(|i| locally_opposite(&s[i], &t[s.len() - 1 - i]).holds)
        };
        let compat: Vec<Vec<bool>> = (0..n)
            .map(|x| (0..n).map(|y| compatible(x, y)).collect())
            .collect();
        let mut partner = vec![None; n];
        self.match_from(0, &compat, &mut partner, &specs)
    }

    fn match_from(
        &mut self,
        x: usize,
        compat: &[Vec<bool>],
        partner: &mut [Option<usize>],
        specs: &[ChainSpec],
    ) -> Step {
        let n = partner.len();
        let Some(x) = (x..n).find(|&i| partner[i].is_none()) else {
            return self.accept(partner, specs);
        };
        let mut order: Vec<usize> = (x..n)
            .filter(|&y| partner[y].is_none() && compat[x][y])
            .collect();
        if let Some(h) = self.hint_partner.get(&self.mus[x]) {
            if let Some(pos) = order.iter().position(|&y| &self.mus[y] == h) {
                let y = order.remove(pos);
                order.insert(0, y);
            }
        }
        for y in order {
            self.nodes += 1;
            if self.nodes > self.budget {
                return Step::Budget;
            }
            partner[x] = Some(y);
            partner[y] = Some(x);
            match self.match_from(x + 1, compat, partner, specs) {
                Step::Fail => {}
                other => return other,
            }
            partner[x] = None;
            partner[y] = None;
            self.backtracks += 1;
        }
        Step::Fail
    }

    fn accept(&mut self, partner: &[Option<usize>], specs: &[ChainSpec]) -> Step {
        let involution = (0..partner.len())
            .map(|x| (self.mus[x].clone(), self.mus[partner[x].unwrap()].clone()))
            .collect();
        let Ok(family) = ChainFamily::new(self.k, involution, specs.to_vec()) else {
            return Step::Fail;
        };
        match verify_family(&family, self.verify_cutoff, 12) {
            Ok(report) if report.passed() => Step::Found(family, report),
            _ => Step::Fail,
        }
    }
}

/// Whether the mind word `w` (dinv `low..`, through one step past the tail
/// start `t`) can be the word of a decomposable chain. With `closed`, `low`
/// is the chain start; otherwise more segments may still be prepended.
fn word_shape_ok(w: &[usize], low: usize, t: usize, closed: bool) -> bool {
    if low == t {
        return true;
    }
    let at = |i: usize| w[i - low];
    if at(t - 1) <= at(t) {
        return false;
    }
    // The descent at t - 1 makes t the last cut.
    let cuts: Vec<usize> = (low..t)
        .filter(|&p| at(p) > at(p + 1))
        .map(|p| p + 1)
        .collect();
    let mut lo = low;
    for (z, &next) in cuts.iter().enumerate() {
        let zone = &w[lo - low..next - low];
        let ok = if z == 0 && !closed {
            partial_zone_ok(zone)
        } else {
            full_zone_ok(zone, lo, z == 0)
        };
        if !ok {
            return false;
        }
        lo = next;
    }
    true
}

/// `zone` (starting at dinv `a`) is an `(a, m, h)`-staircase whose plateau is
/// followed by an ascent inside the zone; the first zone needs `m = 0`.
fn full_zone_ok(zone: &[usize], a: usize, first: bool) -> bool {
    let h = zone[0];
    let m = zone.iter().take_while(|&&v| v == h).count() - 1;
    if m + 1 >= zone.len() || (first && m != 0) {
        return false;
    }
    let s = Staircase::new(a as i64, m as i64, h as i64).expect("nonnegative");
    zone.iter()
        .enumerate()
        .all(|(i, &v)| s.value((a + i) as i64).expect("in domain") == v as i64)
}

/// `zone` can be the right end of a staircase whose start is further left:
/// values rise by one between runs, runs strictly inside have their full
/// length `v − 1`, and the last run is no longer than that.
fn partial_zone_ok(zone: &[usize]) -> bool {
    let mut runs: Vec<(usize, usize)> = Vec::new();
    for &v in zone {
        match runs.last_mut() {
            Some((value, len)) if *value == v => *len += 1,
            _ => runs.push((v, 1)),
        }
    }
    if runs.windows(2).any(|r| r[1].0 != r[0].0 + 1) {
        return false;
    }
    let r = runs.len();
    let full = |(v, _): (usize, usize)| v.saturating_sub(1);
    if r == 1 {
        return runs[0].1 <= full(runs[0]);
    }
    runs[1..r - 1].iter().all(|&run| run.1 == full(run)) && runs[r - 1].1 <= full(runs[r - 1])
}
