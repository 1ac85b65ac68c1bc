//! The `.chains` text format for chain families, and the bundled data sets.
//!
//! ```text
//! deficit: 4
//! pair: 3 1 | 2 2
//! chain: 3 1
//! init: 2 2 1 1
//! init: 4 4 3 1 1
//! a: 2 9
//! m: 0 0
//! h: 5 6
//! end
//! ```
//!
//! `#` starts a comment, `-` is the empty partition, and `initN:` marks an
//! initial that does not start a new local chain. Parts may also be written
//! as a digit string such as `44311`.

use std::collections::BTreeMap;
use std::fmt::Write as _;

use thiserror::Error;

use crate::chains::{
    decompose_local, default_cutoff, expand_global, verify_family, ChainError, ChainFamily,
    ChainSpec, CheckRecord, VerificationReport,
};
use crate::nu::tail_initiator;
use crate::partition::Partition;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum DataError {
    #[error("line {line}: {msg}")]
    Syntax { line: usize, msg: String },
    #[error("missing `deficit:` line")]
    MissingDeficit,
    #[error(transparent)]
    Chain(#[from] ChainError),
}

fn syntax(line: usize, msg: impl Into<String>) -> DataError {
    DataError::Syntax {
        line,
        msg: msg.into(),
    }
}

/// One `chain:` block.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct ChainBlock {
    pub mu: Partition,
    pub initials: Vec<(Partition, bool)>,
    pub a: Option<Vec<usize>>,
    pub m: Option<Vec<usize>>,
    pub h: Option<Vec<usize>>,
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct ChainDataFile {
    pub k: usize,
    /// Each unordered pair once, larger partition first, sorted descending.
    pub pairs: Vec<(Partition, Partition)>,
    /// Sorted by `μ`, descending.
    pub chains: Vec<ChainBlock>,
}

fn parse_partition(line: usize, s: &str) -> Result<Partition, DataError> {
    s.parse().map_err(|e| syntax(line, format!("{e}")))
}

fn parse_ints(line: usize, s: &str) -> Result<Vec<usize>, DataError> {
    s.split_whitespace()
        .map(|t| {
            t.parse()
                .map_err(|_| syntax(line, format!("not an integer: {t:?}")))
        })
        .collect()
}

/// Parses and canonicalizes a `.chains` document.
pub fn parse(text: &str) -> Result<ChainDataFile, DataError> {
    let mut k: Option<usize> = None;
    let mut pairs: Vec<(usize, Partition, Partition)> = Vec::new();
    let mut blocks: Vec<(usize, ChainBlock)> = Vec::new();
    let mut open: Option<(usize, ChainBlock)> = None;

    for (idx, raw) in text.lines().enumerate() {
        let line = idx + 1;
        let body = raw.split('#').next().unwrap_or("").trim();
        if body.is_empty() {
            continue;
        }
        if body == "end" {
            let (start, block) = open
                .take()
                .ok_or_else(|| syntax(line, "`end` outside a chain block"))?;
            if block.initials.is_empty() {
                return Err(syntax(start, "chain block has no initials"));
            }
            blocks.push((start, block));
            continue;
        }
        let (key, value) = body
            .split_once(':')
            .map(|(a, b)| (a.trim(), b.trim()))
            .ok_or_else(|| syntax(line, format!("expected `key: value`, found {body:?}")))?;
        if key != "deficit" && k.is_none() {
            return Err(DataError::MissingDeficit);
        }
        match (key, open.as_mut()) {
            ("deficit", None) => {
                if k.is_some() {
                    return Err(syntax(line, "duplicate `deficit:` line"));
                }
                k = Some(
                    value
                        .parse()
                        .map_err(|_| syntax(line, format!("bad deficit {value:?}")))?,
                );
            }
            ("pair", None) => {
                let (x, y) = value
                    .split_once('|')
                    .ok_or_else(|| syntax(line, "pair needs `|`"))?;
                pairs.push((line, parse_partition(line, x)?, parse_partition(line, y)?));
            }
            ("chain", None) => {
                let mu = parse_partition(line, value)?;
                open = Some((
                    line,
                    ChainBlock {
                        mu,
                        initials: Vec::new(),
                        a: None,
                        m: None,
                        h: None,
                    },
                ));
            }
            ("init" | "initN", Some((_, block))) => {
                if block.a.is_some() || block.m.is_some() || block.h.is_some() {
                    return Err(syntax(line, "initials must precede the a/m/h vectors"));
                }
                block
                    .initials
                    .push((parse_partition(line, value)?, key == "initN"));
            }
            ("a" | "m" | "h", Some((_, block))) => {
                let slot = match key {
                    "a" => &mut block.a,
                    "m" => &mut block.m,
                    _ => &mut block.h,
                };
                if slot.is_some() {
                    return Err(syntax(line, format!("duplicate `{key}:` line")));
                }
                *slot = Some(parse_ints(line, value)?);
            }
            (_, Some(_)) => {
                return Err(syntax(
                    line,
                    format!("unexpected `{key}:` inside a chain block"),
                ))
            }
            (_, None) => {
                return Err(syntax(
                    line,
                    format!("unexpected `{key}:` outside a chain block"),
                ))
            }
        }
    }
    if let Some((start, _)) = open {
        return Err(syntax(start, "chain block is not closed by `end`"));
    }
    let k = k.ok_or(DataError::MissingDeficit)?;

    let mut involution: BTreeMap<Partition, Partition> = BTreeMap::new();
    for (line, x, y) in &pairs {
        for p in [x, y] {
            if p.size() != k {
                return Err(syntax(
                    *line,
                    format!("{} is not a partition of {k}", p.compact()),
                ));
            }
        }
        for (p, q) in [(x, y), (y, x)] {
            if let Some(prev) = involution.insert(p.clone(), q.clone()) {
                if prev != *q || x != y {
                    return Err(syntax(
                        *line,
                        format!(
                            "involution violation: {} is already paired with {}",
                            p.compact(),
                            prev.compact()
                        ),
                    ));
                }
            }
        }
    }
    for (line, block) in &blocks {
        if block.mu.size() != k {
            return Err(syntax(
                *line,
                format!("{} is not a partition of {k}", block.mu.compact()),
            ));
        }
        if blocks.iter().filter(|(_, b)| b.mu == block.mu).count() > 1 {
            return Err(syntax(
                *line,
                format!("duplicate chain for {}", block.mu.compact()),
            ));
        }
        if !involution.contains_key(&block.mu) {
            return Err(syntax(
                *line,
                format!("chain {} has no pair line", block.mu.compact()),
            ));
        }
        let ti = tail_initiator(&block.mu);
        let last = &block.initials.last().unwrap().0;
        if *last != ti {
            return Err(syntax(
                *line,
                format!(
                    "last initial of {} is {} but TI is {}",
                    block.mu.compact(),
                    last.compact(),
                    ti.compact()
                ),
            ));
        }
    }
    for mu in involution.keys() {
        if !blocks.iter().any(|(_, b)| &b.mu == mu) {
            let line = pairs
                .iter()
                .find(|(_, x, y)| x == mu || y == mu)
                .map_or(0, |p| p.0);
            return Err(syntax(line, format!("{} has no chain block", mu.compact())));
        }
    }

    let mut canon: Vec<(Partition, Partition)> = involution
        .iter()
        .filter(|(x, y)| y.cmp_desc(x).is_ge())
        .map(|(x, y)| (x.clone(), y.clone()))
        .collect();
    canon.sort_by(|x, y| x.0.cmp_desc(&y.0));
    let mut chains: Vec<ChainBlock> = blocks.into_iter().map(|(_, b)| b).collect();
    chains.sort_by(|x, y| x.mu.cmp_desc(&y.mu));
    Ok(ChainDataFile {
        k,
        pairs: canon,
        chains,
    })
}

/// Canonical text: pairs, then one block per chain separated by blank lines.
pub fn serialize(f: &ChainDataFile) -> String {
    let mut out = format!("deficit: {}\n", f.k);
    for (x, y) in &f.pairs {
        writeln!(out, "pair: {x} | {y}").unwrap();
    }
    for c in &f.chains {
        writeln!(out, "\nchain: {}", c.mu).unwrap();
        for (p, marked) in &c.initials {
            writeln!(out, "{}: {p}", if *marked { "initN" } else { "init" }).unwrap();
        }
        for (key, v) in [("a", &c.a), ("m", &c.m), ("h", &c.h)] {
            if let Some(v) = v {
                let items: Vec<String> = v.iter().map(ToString::to_string).collect();
                writeln!(out, "{key}: {}", items.join(" ")).unwrap();
            }
        }
        out.push_str("end\n");
    }
    out
}

impl ChainDataFile {
    pub fn involution(&self) -> BTreeMap<Partition, Partition> {
        let mut map = BTreeMap::new();
        for (x, y) in &self.pairs {
            map.insert(x.clone(), y.clone());
            map.insert(y.clone(), x.clone());
        }
        map
    }

    pub fn to_family(&self) -> Result<ChainFamily, ChainError> {
        let specs = self
            .chains
            .iter()
            .map(|c| ChainSpec {
                mu: c.mu.clone(),
                initials: c.initials.clone(),
            })
            .collect();
        ChainFamily::new(self.k, self.involution(), specs)
    }

    pub fn from_family(f: &ChainFamily) -> Self {
        let mut pairs: Vec<(Partition, Partition)> = f
            .involution
            .iter()
            .filter(|(x, y)| y.cmp_desc(x).is_ge())
            .map(|(x, y)| (x.clone(), y.clone()))
            .collect();
        pairs.sort_by(|x, y| x.0.cmp_desc(&y.0));
        let chains = f
            .chains
            .iter()
            .map(|c| ChainBlock {
                mu: c.mu.clone(),
                initials: c.initials.clone(),
                a: None,
                m: None,
                h: None,
            })
            .collect();
        ChainDataFile {
            k: f.k,
            pairs,
            chains,
        }
    }

    /// Declares the computed `a`, `m`, `h` vectors on every chain.
    pub fn fill_vectors(&mut self, cutoff: usize) -> Result<(), ChainError> {
        for c in &mut self.chains {
            let [a, m, h] = stair_vectors(&c.initials, cutoff)?;
            (c.a, c.m, c.h) = (Some(a), Some(m), Some(h));
        }
        Ok(())
    }

    pub fn block(&self, mu: &Partition) -> Option<&ChainBlock> {
        self.chains.iter().find(|c| &c.mu == mu)
    }
}

/// The `a`, `m`, `h` vectors of the local chains `S_1, …, S_c` of a chain.
pub fn stair_vectors(
    initials: &[(Partition, bool)],
    cutoff: usize,
) -> Result<[Vec<usize>; 3], ChainError> {
    let locals = decompose_local(&expand_global(initials, cutoff)?)?;
    let params: Vec<_> = locals[1..].iter().filter_map(|l| l.left_params()).collect();
    Ok([
        params.iter().map(|p| p.a).collect(),
        params.iter().map(|p| p.m).collect(),
        params.iter().map(|p| p.h).collect(),
    ])
}

/// Compares declared `a`, `m`, `h` vectors with the parameters of the
/// computed local chains `S_1, …, S_c`. One `D-vec` record per chain that
/// declares at least one vector.
pub fn declared_vs_computed(f: &ChainDataFile, cutoff: usize) -> Vec<CheckRecord> {
    let mut out = Vec::new();
    for c in &f.chains {
        if c.a.is_none() && c.m.is_none() && c.h.is_none() {
            continue;
        }
        let outcome = stair_vectors(&c.initials, cutoff)
            .map_err(|e| format!("no decomposition: {e}"))
            .and_then(|computed| {
                for ((key, got), declared) in ["a", "m", "h"]
                    .iter()
                    .zip(&computed)
                    .zip([&c.a, &c.m, &c.h])
                {
                    let Some(want) = declared else { continue };
                    if want.len() != got.len() {
                        return Err(format!(
                            "{key}: declared {} entries, computed {}",
                            want.len(),
                            got.len()
                        ));
                    }
                    if let Some(i) = (0..want.len()).find(|&i| want[i] != got[i]) {
                        return Err(format!(
                            "{key}_{}: declared {}, computed {}",
                            i + 1,
                            want[i],
                            got[i]
                        ));
                    }
                }
                Ok(())
            });
        out.push(CheckRecord::new("D-vec", f.k, Some(&c.mu), outcome));
    }
    out
}

/// Full verification of a parsed file: every family check plus `D-vec`.
/// `cutoff` defaults to [`default_cutoff`].
pub fn verify_file(
    f: &ChainDataFile,
    cutoff: Option<usize>,
    n_max: usize,
) -> Result<VerificationReport, DataError> {
    let family = f.to_family()?;
    let cutoff = cutoff.unwrap_or_else(|| default_cutoff(f.k));
    let mut report = verify_family(&family, cutoff, n_max)?;
    report.merge(declared_vs_computed(f, cutoff));
    Ok(report)
}

/// Bundled data files by name.
pub const BUNDLED: [(&str, &str); 4] = [
    ("k4.chains", include_str!("../../../data/k4.chains")),
    ("k7.chains", include_str!("../../../data/k7.chains")),
    ("k8.chains", include_str!("../../../data/k8.chains")),
    ("k9.chains", include_str!("../../../data/k9.chains")),
];

/// Text of a bundled file, looked up by file name (any directory prefix is
/// ignored).
pub fn bundled(name: &str) -> Option<&'static str> {
    let base = name.rsplit('/').next().unwrap_or(name);
    BUNDLED.iter().find(|(n, _)| *n == base).map(|(_, t)| *t)
}

/// The bundled family of deficit `k`, if there is one.
pub fn bundled_file(k: usize) -> Option<ChainDataFile> {
    bundled(&format!("k{k}.chains")).map(|t| parse(t).expect("bundled data parses"))
}
