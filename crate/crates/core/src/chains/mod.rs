//! Local chains, global chains, the word-scan decomposition of a global
//! chain into local chains, and chain families.
//!
//! A global chain is given by the initial partitions of its `ν`-segments;
//! the last one is a tail initiator `TI(μ)`. Expanding the segments yields a
//! dinv-indexed sequence whose mind word determines the local chains.

use std::collections::BTreeMap;
use std::fmt;

use thiserror::Error;

use crate::catalan::BivariatePoly;
use crate::error::choose2;
use crate::nu::{
    is_initial, nu, segment_from_initial, tail_height, tail_initiator, tail_start_dinv, tail_type,
};
use crate::partition::{Partition, PartitionsOf};
use crate::staircase::Staircase;

mod verify;

pub use verify::{verify_family, CheckRecord, VerificationReport, CHECK_IDS};

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum ChainError {
    #[error("no initial partitions given")]
    NoInitials,
    #[error("{0} is not an initial partition")]
    NotInitial(String),
    #[error("last initial {0} is not a tail initiator")]
    NotTailInitiator(String),
    #[error("segment of {initial} starts at dinv {found}, expected {expected}")]
    Gap {
        initial: String,
        expected: usize,
        found: usize,
    },
    #[error("segment of {initial} has deficit {found}, expected {expected}")]
    DeficitMismatch {
        initial: String,
        expected: usize,
        found: usize,
    },
    #[error("segment of {0} is still open at the dinv cutoff")]
    OpenSegment(String),
    #[error("dinv cutoff {cutoff} is below the required {needed}")]
    CutoffTooSmall { cutoff: usize, needed: usize },
    #[error("at dinv {dinv}: {reason}")]
    Shape { dinv: usize, reason: String },
    #[error("empty chain")]
    Empty,
    #[error("no chain for {0}")]
    MissingChain(String),
    #[error("involution: {0}")]
    Involution(String),
}

pub type ChainResult<T> = std::result::Result<T, ChainError>;

fn shape(dinv: usize, reason: impl Into<String>) -> ChainError {
    ChainError::Shape {
        dinv,
        reason: reason.into(),
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum ChainKind {
    Ordinary,
    Singleton,
    Tail,
}

/// Staircase parameters `(a, m, h)` of one end of a local chain.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub struct StairParams {
    pub a: usize,
    pub m: usize,
    pub h: usize,
}

impl StairParams {
    pub fn staircase(&self) -> Staircase {
        Staircase::new(self.a as i64, self.m as i64, self.h as i64).expect("nonnegative parameters")
    }
}

impl fmt::Display for StairParams {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "({},{},{})", self.a, self.m, self.h)
    }
}

/// Which part of a local chain a member lies in.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum Role {
    Left,
    Middle,
    Right,
}

/// A local chain: an ordinary chain, a one-element chain, or a `ν`-tail
/// truncated at a dinv cutoff.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct LocalChain {
    kind: ChainKind,
    deficit: usize,
    first_dinv: usize,
    members: Vec<Partition>,
    left: Option<StairParams>,
    right: Option<StairParams>,
    mu: Option<Partition>,
}

impl LocalChain {
    /// `{γ}` with `a′ = dinv(γ)`, `m′ = 0`, `h′ = mind(γ)`.
    pub fn singleton(g: Partition) -> Self {
        let right = StairParams {
            a: g.dinv(),
            m: 0,
            h: g.mind(),
        };
        LocalChain {
            kind: ChainKind::Singleton,
            deficit: g.deficit(),
            first_dinv: right.a,
            members: vec![g],
            left: None,
            right: Some(right),
            mu: None,
        }
    }

    /// `tail(μ)` up to dinv `max_dinv` (always at least `TI(μ)` itself).
    pub fn tail(mu: &Partition, max_dinv: usize) -> Self {
        let start = tail_start_dinv(mu);
        let seg = segment_from_initial(tail_initiator(mu), max_dinv.max(start));
        LocalChain {
            kind: ChainKind::Tail,
            deficit: mu.size(),
            first_dinv: start,
            members: seg.members,
            left: Some(StairParams {
                a: start,
                m: 0,
                h: tail_height(mu),
            }),
            right: None,
            mu: Some(mu.clone()),
        }
    }

    /// Validates `members` as an ordinary local chain and reads off its six
    /// parameters.
    pub fn ordinary(members: Vec<Partition>) -> ChainResult<Self> {
        let first = members.first().ok_or(ChainError::Empty)?;
        let a = first.dinv();
        let k = first.deficit();
        for (i, p) in members.iter().enumerate() {
            if p.dinv() != a + i {
                return Err(shape(a + i, format!("{p} has dinv {}", p.dinv())));
            }
            if p.deficit() != k {
                return Err(shape(
                    a + i,
                    format!("{p} has deficit {}, expected {k}", p.deficit()),
                ));
            }
        }
        let w: Vec<usize> = members.iter().map(Partition::mind).collect();
        let last = w.len() - 1;

        let mut r = last;
        while r > 0 && w[r - 1] == w[last] {
            r -= 1;
        }
        if r == 0 || w[r - 1] <= w[r] {
            return Err(shape(a + r, "right part is not preceded by a descent"));
        }
        let h = w[0];
        let mut m = 0;
        while m + 1 < w.len() && w[m + 1] == h {
            m += 1;
        }
        if m + 1 >= w.len() || w[m] >= w[m + 1] {
            return Err(shape(a + m, "left part is not followed by an ascent"));
        }
        if m + 1 >= r {
            return Err(shape(a + m, "left part runs into the right part"));
        }
        let stair = Staircase::finite(a as i64, m as i64, h as i64, (a + r - 1) as i64)
            .expect("valid staircase parameters");
        for (i, &v) in w[..r].iter().enumerate() {
            let want = stair.value((a + i) as i64).expect("inside the window") as usize;
            if v != want {
                return Err(shape(
                    a + i,
                    format!("mind {v} breaks the ({a},{m},{h})-staircase, which has {want}"),
                ));
            }
        }
        Ok(LocalChain {
            kind: ChainKind::Ordinary,
            deficit: k,
            first_dinv: a,
            left: Some(StairParams { a, m, h }),
            right: Some(StairParams {
                a: a + r,
                m: last - r,
                h: w[last],
            }),
            members,
            mu: None,
        })
    }

    pub fn kind(&self) -> ChainKind {
        self.kind
    }

    pub fn deficit(&self) -> usize {
        self.deficit
    }

    pub fn members(&self) -> &[Partition] {
        &self.members
    }

    pub fn first_dinv(&self) -> usize {
        self.first_dinv
    }

    pub fn last_dinv(&self) -> usize {
        self.first_dinv + self.members.len() - 1
    }

    /// `(a, m, h)`; absent for singletons.
    pub fn left_params(&self) -> Option<StairParams> {
        self.left
    }

    /// `(a′, m′, h′)`; absent for tails.
    pub fn right_params(&self) -> Option<StairParams> {
        self.right
    }

    /// The type `μ` of a tail.
    pub fn tail_type(&self) -> Option<&Partition> {
        self.mu.as_ref()
    }

    fn middle_start(&self) -> usize {
        match self.kind {
            ChainKind::Singleton => 0,
            _ => self.left.map_or(0, |p| p.m + 1),
        }
    }

    fn right_start(&self) -> usize {
        match self.kind {
            ChainKind::Tail => self.members.len(),
            _ => self.right.map_or(0, |p| p.a - self.first_dinv),
        }
    }

    pub fn lpart(&self) -> &[Partition] {
        &self.members[..self.middle_start()]
    }

    pub fn mpart(&self) -> &[Partition] {
        &self.members[self.middle_start()..self.right_start()]
    }

    pub fn rpart(&self) -> &[Partition] {
        &self.members[self.right_start()..]
    }

    /// Role of the member at offset `i` (dinv `first_dinv + i`).
    pub fn role_at(&self, i: usize) -> Role {
        if i < self.middle_start() {
            Role::Left
        } else if i < self.right_start() {
            Role::Middle
        } else {
            Role::Right
        }
    }

    pub fn position(&self, p: &Partition) -> Option<usize> {
        let d = p.dinv();
        if d < self.first_dinv {
            return None;
        }
        let i = d - self.first_dinv;
        (self.members.get(i) == Some(p)).then_some(i)
    }
}

impl fmt::Display for LocalChain {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self.kind {
            ChainKind::Singleton => write!(f, "{{{}}}", self.members[0].compact()),
            ChainKind::Tail => write!(
                f,
                "tail{}",
                self.mu.as_ref().map(Partition::compact).unwrap_or_default()
            ),
            ChainKind::Ordinary => write!(
                f,
                "[{}..{}] a={} m={} h={} a'={} m'={} h'={}",
                self.first_dinv,
                self.last_dinv(),
                self.left.unwrap().a,
                self.left.unwrap().m,
                self.left.unwrap().h,
                self.right.unwrap().a,
                self.right.unwrap().m,
                self.right.unwrap().h
            ),
        }
    }
}

/// Outcome of [`locally_opposite`], with the first failed condition.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Opposition {
    pub holds: bool,
    pub reason: Option<String>,
}

impl Opposition {
    fn yes() -> Self {
        Opposition {
            holds: true,
            reason: None,
        }
    }

    fn no(reason: String) -> Self {
        Opposition {
            holds: false,
            reason: Some(reason),
        }
    }
}

/// Whether `s` and `t` are locally opposite. Symmetric in its arguments.
pub fn locally_opposite(s: &LocalChain, t: &LocalChain) -> Opposition {
    use ChainKind::*;
    if s.deficit != t.deficit {
        return Opposition::no(format!("deficits {} and {} differ", s.deficit, t.deficit));
    }
    let k = s.deficit;
    match (s.kind, t.kind) {
        (Ordinary, Ordinary) => {
            let (sl, sr) = (s.left.unwrap(), s.right.unwrap());
            let (tl, tr) = (t.left.unwrap(), t.right.unwrap());
            if tl.m != sr.m || tr.m != sl.m {
                return Opposition::no(format!(
                    "m = {}, m' = {} against partner m = {}, m' = {}",
                    sl.m, sr.m, tl.m, tr.m
                ));
            }
            if tl.h != sr.h || tr.h != sl.h {
                return Opposition::no(format!(
                    "h = {}, h' = {} against partner h = {}, h' = {}",
                    sl.h, sr.h, tl.h, tr.h
                ));
            }
            let lhs1 = sl.a + sl.m + k + tr.a;
            if lhs1 != choose2(sl.h) {
                return Opposition::no(format!(
                    "{}+{}+{}+{} = {lhs1} != C({},2) = {}",
                    sl.a,
                    sl.m,
                    k,
                    tr.a,
                    sl.h,
                    choose2(sl.h)
                ));
            }
            let lhs2 = sr.a + sr.m + k + tl.a;
            if lhs2 != choose2(sr.h) {
                return Opposition::no(format!(
                    "{}+{}+{}+{} = {lhs2} != C({},2) = {}",
                    sr.a,
                    sr.m,
                    k,
                    tl.a,
                    sr.h,
                    choose2(sr.h)
                ));
            }
            Opposition::yes()
        }
        (Tail, Singleton) | (Singleton, Tail) => {
            let (tail, single) = if s.kind == Tail { (s, t) } else { (t, s) };
            let mu = tail.mu.as_ref().unwrap();
            let g = &single.members[0];
            if g.dinv() != mu.len() {
                return Opposition::no(format!(
                    "dinv{} = {} but tail type {} has length {}",
                    g.compact(),
                    g.dinv(),
                    mu.compact(),
                    mu.len()
                ));
            }
            if g.mind() != tail_height(mu) {
                return Opposition::no(format!(
                    "mind{} = {} but mind(TI{}) = {}",
                    g.compact(),
                    g.mind(),
                    mu.compact(),
                    tail_height(mu)
                ));
            }
            Opposition::yes()
        }
        (a, b) => Opposition::no(format!("kinds {a:?} and {b:?} cannot be opposite")),
    }
}

/// A global chain expanded from its segment initials over a dinv window.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct GlobalChain {
    mu: Partition,
    initials: Vec<(Partition, bool)>,
    start: usize,
    members: Vec<Partition>,
}

impl GlobalChain {
    pub fn mu(&self) -> &Partition {
        &self.mu
    }

    pub fn initials(&self) -> &[(Partition, bool)] {
        &self.initials
    }

    /// Least dinv in the chain.
    pub fn start(&self) -> usize {
        self.start
    }

    pub fn cutoff(&self) -> usize {
        self.start + self.members.len() - 1
    }

    pub fn members(&self) -> &[Partition] {
        &self.members
    }

    pub fn deficit(&self) -> usize {
        self.mu.size()
    }

    pub fn tail_start(&self) -> usize {
        tail_start_dinv(&self.mu)
    }

    pub fn member_at(&self, dinv: usize) -> Option<&Partition> {
        self.members.get(dinv.checked_sub(self.start)?)
    }

    /// `(dinv, mind)` over the window.
    pub fn mind_word(&self) -> Vec<(usize, usize)> {
        (self.start..)
            .zip(self.members.iter().map(Partition::mind))
            .collect()
    }

    /// Members followed by the tail continued past the window, stopping at
    /// the first tail member with `mind > n`. Tail minds form a staircase,
    /// so nothing later fits in the `n`-triangle.
    pub fn members_fitting(&self, n: usize) -> Vec<Partition> {
        let mut out: Vec<Partition> = self
            .members
            .iter()
            .filter(|p| p.mind() <= n)
            .cloned()
            .collect();
        let mut cur = self.members.last().expect("nonempty chain").clone();
        if cur.mind() > n {
            return out;
        }
        loop {
            cur = nu(&cur).expect("tails never end");
            if cur.mind() > n {
                return out;
            }
            out.push(cur.clone());
        }
    }

    /// `Cat_{n,C_μ}(q,t)`.
    pub fn restricted_poly(&self, n: usize) -> BivariatePoly {
        let mut poly = BivariatePoly::zero();
        for p in self.members_fitting(n) {
            poly.add_term(p.area(n).expect("fits"), p.dinv(), 1)
                .expect("small counts");
        }
        poly
    }
}

/// Expands the `ν`-segments of `initials` up to dinv `cutoff`.
///
/// Every listed partition must be initial, the last one must be a tail
/// initiator `TI(μ)` with `cutoff > dinv(TI(μ))`, and the segments must follow
/// each other without gaps, overlaps, or deficit changes.
pub fn expand_global(initials: &[(Partition, bool)], cutoff: usize) -> ChainResult<GlobalChain> {
    let (last, _) = initials.last().ok_or(ChainError::NoInitials)?;
    let mu = tail_type(last).ok_or_else(|| ChainError::NotTailInitiator(last.to_string()))?;
    let needed = tail_start_dinv(&mu) + 1;
    if cutoff < needed {
        return Err(ChainError::CutoffTooSmall { cutoff, needed });
    }
    let k = mu.size();
    let start = initials[0].0.dinv();
    let mut members = Vec::new();
    for (idx, (p, _)) in initials.iter().enumerate() {
        if !is_initial(p) {
            return Err(ChainError::NotInitial(p.to_string()));
        }
        let expected = start + members.len();
        if p.dinv() != expected {
            return Err(ChainError::Gap {
                initial: p.to_string(),
                expected,
                found: p.dinv(),
            });
        }
        if p.deficit() != k {
            return Err(ChainError::DeficitMismatch {
                initial: p.to_string(),
                expected: k,
                found: p.deficit(),
            });
        }
        let seg = segment_from_initial(p.clone(), cutoff);
        if seg.open_right && idx + 1 < initials.len() {
            return Err(ChainError::OpenSegment(p.to_string()));
        }
        members.extend(seg.members);
    }
    Ok(GlobalChain {
        mu,
        initials: initials.to_vec(),
        start,
        members,
    })
}

/// Splits a global chain into `S_0, …, S_c`: a singleton, ordinary chains,
/// and `tail(μ)`. Fails at the first dinv where the mind word does not have
/// the required shape.
pub fn decompose_local(g: &GlobalChain) -> ChainResult<Vec<LocalChain>> {
    let d = g.start;
    let t = g.tail_start();
    let cutoff = g.cutoff();
    let w: Vec<usize> = g.members.iter().map(Partition::mind).collect();
    let at = |i: usize| w[i - d];

    let mut locals = vec![LocalChain::singleton(g.members[0].clone())];
    let mut a = d;
    let mut expected_m = 0;
    while a < t {
        let p = (a..t)
            .find(|&i| at(i) > at(i + 1))
            .ok_or_else(|| shape(t, "no descent into the tail start"))?;
        let a2 = p + 1;
        let mut m2 = 0;
        while a2 + m2 < cutoff && at(a2 + m2 + 1) == at(a2) {
            m2 += 1;
        }
        if a2 + m2 == cutoff {
            return Err(shape(a2, "plateau runs to the dinv cutoff"));
        }
        let chain = LocalChain::ordinary(g.members[a - d..=a2 + m2 - d].to_vec())?;
        let left = chain.left.unwrap();
        if left.m != expected_m {
            return Err(shape(
                a,
                format!(
                    "left part has m = {}, previous right part has m' = {expected_m}",
                    left.m
                ),
            ));
        }
        locals.push(chain);
        a = a2;
        expected_m = m2;
    }
    if a != t {
        return Err(shape(
            a,
            format!("local chain starts past the tail start {t}"),
        ));
    }
    if expected_m != 0 {
        return Err(shape(
            t,
            format!("tail left part must be a single member, found m = {expected_m}"),
        ));
    }
    let tail = LocalChain::tail(&g.mu, cutoff);
    if tail.members[..] != g.members[t - d..] {
        return Err(shape(t, "members from the tail start do not form the tail"));
    }
    let stair = tail.left.unwrap().staircase();
    for i in t..=cutoff {
        if at(i) as i64 != stair.value(i as i64).expect("in domain") {
            return Err(shape(i, "tail mind word is not a staircase"));
        }
    }
    locals.push(tail);
    Ok(locals)
}

/// Initials of one chain in a family.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct ChainSpec {
    pub mu: Partition,
    /// Segment initials in dinv order, each flagged when it is marked as not
    /// starting a new local chain.
    pub initials: Vec<(Partition, bool)>,
}

/// Chains of one deficit together with the involution `μ ↔ μ*`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct ChainFamily {
    pub k: usize,
    pub involution: BTreeMap<Partition, Partition>,
    /// Sorted by `μ` in descending lexicographic order.
    pub chains: Vec<ChainSpec>,
}

impl ChainFamily {
    /// Checks that the involution is self-inverse on partitions of `k`,
    /// that chains and involution mention the same `μ`, and that each chain
    /// ends at its tail initiator. Coverage of all partitions of `k` is left
    /// to verification.
    pub fn new(
        k: usize,
        involution: BTreeMap<Partition, Partition>,
        mut chains: Vec<ChainSpec>,
    ) -> ChainResult<Self> {
        for (mu, star) in &involution {
            if mu.size() != k || star.size() != k {
                return Err(ChainError::Involution(format!(
                    "{} <-> {} is not a pair of partitions of {k}",
                    mu.compact(),
                    star.compact()
                )));
            }
            if involution.get(star) != Some(mu) {
                return Err(ChainError::Involution(format!(
                    "{}* = {} but {}* is not {}",
                    mu.compact(),
                    star.compact(),
                    star.compact(),
                    mu.compact()
                )));
            }
        }
        chains.sort_by(|x, y| x.mu.cmp_desc(&y.mu));
        for pair in chains.windows(2) {
            if pair[0].mu == pair[1].mu {
                return Err(ChainError::Involution(format!(
                    "two chains for {}",
                    pair[0].mu.compact()
                )));
            }
        }
        for c in &chains {
            if !involution.contains_key(&c.mu) {
                return Err(ChainError::Involution(format!(
                    "{} has no partner",
                    c.mu.compact()
                )));
            }
            let (last, _) = c.initials.last().ok_or(ChainError::NoInitials)?;
            if *last != tail_initiator(&c.mu) {
                return Err(ChainError::NotTailInitiator(format!(
                    "{} (chain {} needs {})",
                    last,
                    c.mu.compact(),
                    tail_initiator(&c.mu)
                )));
            }
        }
        for mu in involution.keys() {
            if !chains.iter().any(|c| &c.mu == mu) {
                return Err(ChainError::MissingChain(mu.compact()));
            }
        }
        Ok(ChainFamily {
            k,
            involution,
            chains,
        })
    }

    pub fn chain(&self, mu: &Partition) -> Option<&ChainSpec> {
        self.chains.iter().find(|c| &c.mu == mu)
    }

    pub fn partner(&self, mu: &Partition) -> Option<&Partition> {
        self.involution.get(mu)
    }

    /// Partitions of `k` that have no chain.
    pub fn missing(&self) -> Vec<Partition> {
        PartitionsOf::new(self.k)
            .filter(|mu| self.chain(mu).is_none())
            .collect()
    }
}

/// `max tail_start(μ) + 2·max mind(TI(μ))` over `μ ⊢ k`, and at least two
/// steps past the last tail start.
pub fn default_cutoff(k: usize) -> usize {
    let starts = PartitionsOf::new(k)
        .map(|mu| tail_start_dinv(&mu))
        .max()
        .unwrap_or(0);
    let heights = PartitionsOf::new(k)
        .map(|mu| tail_height(&mu))
        .max()
        .unwrap_or(0);
    (starts + 2 * heights).max(starts + 2)
}
