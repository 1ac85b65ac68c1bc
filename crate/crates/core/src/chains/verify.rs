use std::collections::{BTreeSet, HashMap, HashSet};
use std::fmt;

use super::{
    decompose_local, default_cutoff, expand_global, locally_opposite, ChainError, ChainFamily,
    ChainKind, ChainResult, GlobalChain, LocalChain, Role,
};
use crate::nu::{nu, nu_inv};
use crate::partition::{deficit_levels, Partition};
use crate::staircase::pointwise_min;

/// Check identifiers in report order. `D-vec` records come from comparing
/// declared chain parameters with computed ones.
pub const CHECK_IDS: [&str; 14] = [
    "EXPAND", "DECOMP", "D-vec", "L-a", "L-b", "L-c", "L-d", "L-e", "L-f", "G-min", "G-start",
    "G-opp", "G-count", "N-mark",
];

/// One `CHECK <id> <k> <mu> PASS|FAIL [witness…]` line. `mu` is `None` for
/// family-wide checks.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct CheckRecord {
    pub id: &'static str,
    pub k: usize,
    pub mu: Option<Partition>,
    pub pass: bool,
    pub witness: String,
}

impl CheckRecord {
    pub fn new(
        id: &'static str,
        k: usize,
        mu: Option<&Partition>,
        outcome: Result<(), String>,
    ) -> Self {
        let (pass, witness) = match outcome {
            Ok(()) => (true, String::new()),
            Err(w) => (false, w),
        };
        CheckRecord {
            id,
            k,
            mu: mu.cloned(),
            pass,
            witness,
        }
    }
}

impl fmt::Display for CheckRecord {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let mu = self
            .mu
            .as_ref()
            .map_or_else(|| "*".to_string(), Partition::compact);
        write!(
            f,
            "CHECK {} {} {} {}",
            self.id,
            self.k,
            mu,
            if self.pass { "PASS" } else { "FAIL" }
        )?;
        if !self.witness.is_empty() {
            write!(f, " {}", self.witness)?;
        }
        Ok(())
    }
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct VerificationReport {
    pub k: usize,
    pub cutoff: usize,
    pub n_max: usize,
    pub records: Vec<CheckRecord>,
}

impl VerificationReport {
    pub fn passed(&self) -> bool {
        self.records.iter().all(|r| r.pass)
    }

    pub fn failures(&self) -> impl Iterator<Item = &CheckRecord> {
        self.records.iter().filter(|r| !r.pass)
    }

    /// Whether some record with this id failed.
    pub fn failed(&self, id: &str) -> bool {
        self.failures().any(|r| r.id == id)
    }

    pub fn records_for<'a>(&'a self, id: &'a str) -> impl Iterator<Item = &'a CheckRecord> + 'a {
        self.records.iter().filter(move |r| r.id == id)
    }

    /// Adds records and restores report order (stable within an id).
    pub fn merge(&mut self, extra: Vec<CheckRecord>) {
        self.records.extend(extra);
        let rank = |id: &str| {
            CHECK_IDS
                .iter()
                .position(|&x| x == id)
                .unwrap_or(CHECK_IDS.len())
        };
        self.records.sort_by_key(|r| rank(r.id));
    }

    pub fn summary(&self) -> Vec<String> {
        let failed = self.failures().count();
        vec![
            format!(
                "k={} cutoff={} n_max={}: {} checks, {} passed, {} failed",
                self.k,
                self.cutoff,
                self.n_max,
                self.records.len(),
                self.records.len() - failed,
                failed
            ),
            format!("verdict: {}", if failed == 0 { "PASS" } else { "FAIL" }),
            format!(
                "scope: local-chain checks cover dinv <= {}; membership beyond it rests on the tail staircase and is not enumerated",
                self.cutoff
            ),
        ]
    }
}

impl fmt::Display for VerificationReport {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        for r in &self.records {
            writeln!(f, "{r}")?;
        }
        for line in self.summary() {
            writeln!(f, "# {line}")?;
        }
        Ok(())
    }
}

/// Where a partition sits among the local chains of a family.
type Placement = (usize, Role);

struct Expanded<'a> {
    mu: &'a Partition,
    global: Option<GlobalChain>,
    locals: Option<Vec<LocalChain>>,
}

/// Runs every check on `family` over dinv `0..=cutoff` and polynomial
/// degrees `n ≤ n_max`.
///
/// Refuses (with an error) when a partition of `k` has no chain or when the
/// cutoff is below [`default_cutoff`]. Problems with the chain data itself
/// become failed records.
pub fn verify_family(
    family: &ChainFamily,
    cutoff: usize,
    n_max: usize,
) -> ChainResult<VerificationReport> {
    let k = family.k;
    let missing = family.missing();
    if !missing.is_empty() {
        let names: Vec<String> = missing.iter().map(Partition::compact).collect();
        return Err(ChainError::MissingChain(names.join(" ")));
    }
    let needed = default_cutoff(k);
    if cutoff < needed {
        return Err(ChainError::CutoffTooSmall { cutoff, needed });
    }

    let mut records = Vec::new();
    let mut chains = Vec::new();
    for spec in &family.chains {
        let global = expand_global(&spec.initials, cutoff);
        records.push(CheckRecord::new(
            "EXPAND",
            k,
            Some(&spec.mu),
            global.as_ref().map(|_| ()).map_err(ToString::to_string),
        ));
        chains.push(Expanded {
            mu: &spec.mu,
            global: global.ok(),
            locals: None,
        });
    }
    for ch in &mut chains {
        if let Some(g) = &ch.global {
            let locals = decompose_local(g);
            records.push(CheckRecord::new(
                "DECOMP",
                k,
                Some(ch.mu),
                locals.as_ref().map(|_| ()).map_err(ToString::to_string),
            ));
            ch.locals = locals.ok();
        } else {
            records.push(CheckRecord::new(
                "DECOMP",
                k,
                Some(ch.mu),
                Err("no expansion".into()),
            ));
        }
    }

    let all_ok = chains.iter().all(|c| c.locals.is_some());
    let skipped = || Err::<(), String>("skipped: some chain did not decompose".into());

    // Flat list of local chains with a lookup from partition to placements.
    let mut flat: Vec<(usize, usize, &LocalChain)> = Vec::new();
    for (ci, ch) in chains.iter().enumerate() {
        if let Some(locals) = &ch.locals {
            flat.extend(locals.iter().enumerate().map(|(j, l)| (ci, j, l)));
        }
    }
    let mut index: HashMap<&Partition, Vec<Placement>> = HashMap::new();
    for (id, &(_, _, l)) in flat.iter().enumerate() {
        for (i, p) in l.members().iter().enumerate() {
            index.entry(p).or_default().push((id, l.role_at(i)));
        }
    }
    let mut overlaps: BTreeSet<(usize, usize)> = BTreeSet::new();
    for places in index.values() {
        for x in 0..places.len() {
            for y in x + 1..places.len() {
                let (a, b) = (places[x].0, places[y].0);
                overlaps.insert((a.min(b), a.max(b)));
            }
        }
    }
    let name = |id: usize| {
        let (ci, j, _) = flat[id];
        format!("{}#{}", chains[ci].mu.compact(), j)
    };

    for ch in &chains {
        let outcome = match &ch.locals {
            None => skipped(),
            Some(locals) => check_tail_last(ch.mu, locals),
        };
        records.push(CheckRecord::new("L-a", k, Some(ch.mu), outcome));
    }

    let lb = if !all_ok {
        skipped()
    } else {
        overlaps.iter().try_for_each(|&(x, y)| {
            let (sx, sy) = (flat[x].2, flat[y].2);
            let shared = sx
                .members()
                .iter()
                .filter(|p| sy.position(p).is_some())
                .count();
            let glued = |r: &LocalChain, l: &LocalChain| {
                !r.rpart().is_empty() && r.rpart() == l.lpart() && shared == r.rpart().len()
            };
            if glued(sx, sy) || glued(sy, sx) {
                Ok(())
            } else {
                Err(format!(
                    "{} and {} share {shared} members without a right/left overlap",
                    name(x),
                    name(y)
                ))
            }
        })
    };
    records.push(CheckRecord::new("L-b", k, None, lb));

    let levels = deficit_levels(k, cutoff);
    let lc = if !all_ok {
        skipped()
    } else {
        check_coverage(&levels, &index, &name)
    };
    records.push(CheckRecord::new("L-c", k, None, lc));

    // Opposite chain of each local chain: S_i of μ pairs with T_{c−i} of μ*.
    let by_mu: HashMap<&Partition, usize> =
        chains.iter().enumerate().map(|(i, c)| (c.mu, i)).collect();
    let first_id: HashMap<usize, usize> = {
        let mut m = HashMap::new();
        for (id, &(ci, j, _)) in flat.iter().enumerate() {
            if j == 0 {
                m.insert(ci, id);
            }
        }
        m
    };
    let mut star: Vec<Option<usize>> = vec![None; flat.len()];
    for ch in &chains {
        let outcome = (|| {
            let star_mu = family.partner(ch.mu).ok_or("no partner")?;
            let ci = by_mu[ch.mu];
            let cs = *by_mu.get(star_mu).ok_or("partner has no chain")?;
            let (s, t) = match (&chains[ci].locals, &chains[cs].locals) {
                (Some(s), Some(t)) => (s, t),
                _ => {
                    return Err(format!(
                        "{} or {} did not decompose",
                        ch.mu.compact(),
                        star_mu.compact()
                    ))
                }
            };
            if s.len() != t.len() {
                return Err(format!(
                    "{} has {} local chains but {} has {}",
                    ch.mu.compact(),
                    s.len(),
                    star_mu.compact(),
                    t.len()
                ));
            }
            let c = s.len() - 1;
            for i in 0..=c {
                star[first_id[&ci] + i] = Some(first_id[&cs] + c - i);
            }
            for i in 0..=c {
                let verdict = locally_opposite(&s[i], &t[c - i]);
                if !verdict.holds {
                    return Err(format!(
                        "S_{i} of {} vs T_{} of {}: {}",
                        ch.mu.compact(),
                        c - i,
                        star_mu.compact(),
                        verdict.reason.unwrap_or_default()
                    ));
                }
            }
            Ok(())
        })();
        records.push(CheckRecord::new(
            "L-d",
            k,
            Some(ch.mu),
            outcome.map_err(|e: String| e),
        ));
    }

    let le = if !all_ok {
        skipped()
    } else {
        overlaps
            .iter()
            .try_for_each(|&(x, y)| match (star[x], star[y]) {
                (Some(sx), Some(sy)) => {
                    let meet = flat[sx]
                        .2
                        .members()
                        .iter()
                        .any(|p| index[p].iter().any(|&(id, _)| id == sy));
                    if meet || sx == sy {
                        Ok(())
                    } else {
                        Err(format!(
                            "{} meets {} but {} misses {}",
                            name(x),
                            name(y),
                            name(sx),
                            name(sy)
                        ))
                    }
                }
                _ => Err(format!("no opposite chain for {} or {}", name(x), name(y))),
            })
    };
    records.push(CheckRecord::new("L-e", k, None, le));

    for ch in &chains {
        let outcome = match &ch.locals {
            None => skipped(),
            Some(locals) => locals.iter().enumerate().try_for_each(|(j, l)| {
                check_segment_union(l).map_err(|w| format!("{}#{j}: {w}", ch.mu.compact()))
            }),
        };
        records.push(CheckRecord::new("L-f", k, Some(ch.mu), outcome));
    }

    for ch in &chains {
        let outcome = match (&ch.global, &ch.locals) {
            (Some(g), Some(locals)) => check_min_formula(g, locals),
            _ => skipped(),
        };
        records.push(CheckRecord::new("G-min", k, Some(ch.mu), outcome));
    }

    for ch in &chains {
        let outcome = match (&ch.global, family.partner(ch.mu)) {
            (Some(g), Some(star_mu)) if g.start() == star_mu.len() => Ok(()),
            (Some(g), Some(star_mu)) => Err(format!(
                "first dinv {} but l({}) = {}",
                g.start(),
                star_mu.compact(),
                star_mu.len()
            )),
            _ => skipped(),
        };
        records.push(CheckRecord::new("G-start", k, Some(ch.mu), outcome));
    }

    for ch in &chains {
        let partner = family
            .partner(ch.mu)
            .and_then(|s| by_mu.get(s))
            .and_then(|&i| chains[i].global.as_ref());
        let outcome = match (&ch.global, partner) {
            (Some(g), Some(h)) => (0..=n_max).try_for_each(|n| {
                if g.restricted_poly(n) == h.restricted_poly(n).swap() {
                    Ok(())
                } else {
                    Err(format!(
                        "n={n}: Cat_n over {} is not the swap of the partner sum",
                        ch.mu.compact()
                    ))
                }
            }),
            _ => skipped(),
        };
        records.push(CheckRecord::new("G-opp", k, Some(ch.mu), outcome));
    }

    let gc = if chains.iter().any(|c| c.global.is_none()) {
        skipped()
    } else {
        let starts: Vec<usize> = chains
            .iter()
            .map(|c| c.global.as_ref().unwrap().start())
            .collect();
        levels.iter().enumerate().try_for_each(|(i, level)| {
            let open = starts.iter().filter(|&&s| s <= i).count();
            if level.len() == open {
                Ok(())
            } else {
                Err(format!(
                    "dinv {i}: {} partitions but {open} chains started",
                    level.len()
                ))
            }
        })
    };
    records.push(CheckRecord::new("G-count", k, None, gc));

    for (spec, ch) in family.chains.iter().zip(&chains) {
        let outcome = match &ch.locals {
            None => skipped(),
            Some(locals) => {
                let starts: HashSet<usize> = locals[1..]
                    .iter()
                    .filter_map(|l| l.left_params())
                    .map(|p| p.a)
                    .collect();
                spec.initials.iter().try_for_each(|(p, marked)| {
                    match (starts.contains(&p.dinv()), *marked) {
                        (true, true) => Err(format!(
                            "{} is marked N but starts a local chain",
                            p.compact()
                        )),
                        (false, false) => Err(format!(
                            "{} starts no local chain but is not marked N",
                            p.compact()
                        )),
                        _ => Ok(()),
                    }
                })
            }
        };
        records.push(CheckRecord::new("N-mark", k, Some(ch.mu), outcome));
    }

    let mut report = VerificationReport {
        k,
        cutoff,
        n_max,
        records: Vec::new(),
    };
    report.merge(records);
    Ok(report)
}

fn check_tail_last(mu: &Partition, locals: &[LocalChain]) -> Result<(), String> {
    let last = locals.last().ok_or("no local chains")?;
    if last.kind() == ChainKind::Tail && last.tail_type() == Some(mu) {
        Ok(())
    } else {
        Err(format!("last local chain is {last}"))
    }
}

fn check_coverage(
    levels: &[Vec<Partition>],
    index: &HashMap<&Partition, Vec<Placement>>,
    name: &dyn Fn(usize) -> String,
) -> Result<(), String> {
    let mut seen = 0;
    for (i, level) in levels.iter().enumerate() {
        for g in level {
            let places = index.get(g).map(Vec::as_slice).unwrap_or(&[]);
            seen += usize::from(!places.is_empty());
            let ok = match places {
                [(_, Role::Middle)] => true,
                [(x, r1), (y, r2)] => {
                    x != y
                        && matches!(
                            (r1, r2),
                            (Role::Left, Role::Right) | (Role::Right, Role::Left)
                        )
                }
                _ => false,
            };
            if !ok {
                let list: Vec<String> = places
                    .iter()
                    .map(|&(id, r)| format!("{}:{r:?}", name(id)))
                    .collect();
                return Err(format!(
                    "{} at dinv {i} lies in [{}]",
                    g.compact(),
                    list.join(" ")
                ));
            }
        }
    }
    if seen != index.len() {
        return Err(format!(
            "{} chain members are outside the deficit class",
            index.len() - seen
        ));
    }
    Ok(())
}

/// `lpart ∪ mpart` is closed under `ν` and `ν⁻¹`, except past the window
/// edge of a truncated tail.
fn check_segment_union(l: &LocalChain) -> Result<(), String> {
    let body: Vec<&Partition> = l.lpart().iter().chain(l.mpart()).collect();
    let set: HashSet<&Partition> = body.iter().copied().collect();
    let edge = (l.kind() == ChainKind::Tail)
        .then(|| l.members().last())
        .flatten();
    for &x in &body {
        if let Ok(next) = nu(x) {
            if !set.contains(&next) && Some(x) != edge {
                return Err(format!(
                    "nu{} = {} leaves the chain",
                    x.compact(),
                    next.compact()
                ));
            }
        }
        if let Ok(prev) = nu_inv(x) {
            if !set.contains(&prev) {
                return Err(format!(
                    "nu^-1{} = {} leaves the chain",
                    x.compact(),
                    prev.compact()
                ));
            }
        }
    }
    Ok(())
}

/// The mind word equals both `min F_j` (left staircases of `S_1..S_c`) and
/// `min F′_j` (right staircases of `S_0..S_{c−1}`).
fn check_min_formula(g: &GlobalChain, locals: &[LocalChain]) -> Result<(), String> {
    let (lo, hi) = (g.start() as i64, g.cutoff() as i64);
    let word: Vec<i64> = g.members().iter().map(|p| p.mind() as i64).collect();
    let lefts: Vec<_> = locals[1..]
        .iter()
        .filter_map(|l| l.left_params())
        .map(|p| p.staircase())
        .collect();
    let rights: Vec<_> = locals[..locals.len() - 1]
        .iter()
        .filter_map(|l| l.right_params())
        .map(|p| p.staircase())
        .collect();
    for (label, fs) in [("F", lefts), ("F'", rights)] {
        let f = pointwise_min(&fs, lo, hi).map_err(|e| format!("min {label}: {e}"))?;
        if let Some(i) = (0..word.len()).find(|&i| f.values()[i] != word[i]) {
            return Err(format!(
                "dinv {}: mind {} but min {label} = {}",
                lo + i as i64,
                word[i],
                f.values()[i]
            ));
        }
    }
    Ok(())
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::chains::ChainSpec;
    use std::collections::BTreeMap;

    fn p(s: &str) -> Partition {
        s.parse().unwrap()
    }

    fn k4() -> ChainFamily {
        let mut inv = BTreeMap::new();
        for (a, b) in [("4", "4"), ("31", "22"), ("211", "1111")] {
            inv.insert(p(a), p(b));
            inv.insert(p(b), p(a));
        }
        let chain = |mu: &str, list: &[(&str, bool)]| ChainSpec {
            mu: p(mu),
            initials: list.iter().map(|&(s, n)| (p(s), n)).collect(),
        };
        let chains = vec![
            chain(
                "4",
                &[
                    ("11111", false),
                    ("2221", false),
                    ("3331", true),
                    ("44321", false),
                ],
            ),
            chain("31", &[("2211", false), ("44311", false)]),
            chain("22", &[("21111", false), ("3221", false)]),
            chain(
                "211",
                &[("32111", false), ("43111", false), ("44211", false)],
            ),
            chain(
                "1111",
                &[("31111", false), ("42111", false), ("43211", false)],
            ),
        ];
        ChainFamily::new(4, inv, chains).unwrap()
    }

    #[test]
    fn deficit_four_family_passes() {
        let f = k4();
        let report = verify_family(&f, default_cutoff(4), 12).unwrap();
        let fails: Vec<String> = report.failures().map(ToString::to_string).collect();
        assert!(report.passed(), "{fails:#?}");
        assert!(report.to_string().contains("CHECK L-d 4 (3,1) PASS"));
    }

    #[test]
    fn corrupted_involution_is_named() {
        let mut f = k4();
        f.involution.insert(p("31"), p("31"));
        f.involution.insert(p("22"), p("22"));
        let report = verify_family(&f, default_cutoff(4), 12).unwrap();
        let ld: Vec<&CheckRecord> = report.records_for("L-d").filter(|r| !r.pass).collect();
        assert!(!ld.is_empty());
        assert!(ld.iter().any(|r| r.mu == Some(p("31"))));
    }

    #[test]
    fn refuses_small_cutoff_and_incomplete_family() {
        let f = k4();
        assert!(matches!(
            verify_family(&f, 10, 12),
            Err(ChainError::CutoffTooSmall { .. })
        ));
        let mut g = f.clone();
        g.chains.retain(|c| c.mu != p("4"));
        assert!(matches!(
            verify_family(&g, default_cutoff(4), 12),
            Err(ChainError::MissingChain(_))
        ));
    }

    #[test]
    fn n_mark_cross_check() {
        let mut f = k4();
        f.chains[0].initials[2].1 = false;
        let report = verify_family(&f, default_cutoff(4), 6).unwrap();
        assert!(report.failed("N-mark"));
        assert_eq!(report.failures().count(), 1);
    }
}
