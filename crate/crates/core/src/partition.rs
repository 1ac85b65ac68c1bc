//! Integer partitions, their diagram statistics, Dyck vectors, and the
//! enumerators every brute-force check is built on.
//!
//! All formulas use 1-based row/column indices in their documentation; the
//! accessors [`Partition::part`] and [`Partition::conjugate_part`] follow the
//! same convention and return 0 past the last part.
//!
//! The empty partition is treated as living in the 0-triangle, so
//! `mind(()) = 0` and `DP(0) = {()}`.

use std::cmp::Ordering;
use std::fmt;
use std::str::FromStr;

use crate::error::{choose2, Error, Result};

/// A weakly decreasing list of positive parts.
#[derive(Clone, Debug, Default, PartialEq, Eq, Hash)]
pub struct Partition {
    parts: Vec<usize>,
}

impl Partition {
    /// Builds a partition, dropping trailing zero parts.
    pub fn new(mut parts: Vec<usize>) -> Result<Self> {
        while parts.last() == Some(&0) {
            parts.pop();
        }
        if parts.windows(2).any(|w| w[0] < w[1]) || parts.contains(&0) {
            return Err(Error::NotDecreasing(parts));
        }
        Ok(Partition { parts })
    }

    /// Caller guarantees the parts are positive and weakly decreasing.
    pub(crate) fn from_sorted(parts: Vec<usize>) -> Self {
        debug_assert!(parts.windows(2).all(|w| w[0] >= w[1]));
        debug_assert!(!parts.contains(&0));
        Partition { parts }
    }

    pub fn empty() -> Self {
        Partition { parts: Vec::new() }
    }

    pub fn parts(&self) -> &[usize] {
        &self.parts
    }

    /// Number of positive parts, `ℓ(γ)`.
    pub fn len(&self) -> usize {
        self.parts.len()
    }

    pub fn is_empty(&self) -> bool {
        self.parts.is_empty()
    }

    /// The `i`-th part (1-based), zero past the end.
    pub fn part(&self, i: usize) -> usize {
        if i == 0 {
            return 0;
        }
        self.parts.get(i - 1).copied().unwrap_or(0)
    }

    /// Largest part, zero for the empty partition.
    pub fn first(&self) -> usize {
        self.part(1)
    }

    pub fn size(&self) -> usize {
        self.parts.iter().sum()
    }

    pub fn conjugate(&self) -> Partition {
        Partition::from_sorted(conjugate_parts(&self.parts))
    }

    /// Length of the `j`-th column (1-based), zero past the end.
    pub fn conjugate_part(&self, j: usize) -> usize {
        if j == 0 {
            return 0;
        }
        self.parts.iter().take_while(|&&p| p >= j).count()
    }

    /// Cells strictly right of `(i, j)`.
    pub fn arm(&self, i: usize, j: usize) -> usize {
        self.part(i) - j
    }

    /// Cells strictly below `(i, j)`.
    pub fn leg(&self, i: usize, j: usize) -> usize {
        self.conjugate_part(j) - i
    }

    /// Number of cells whose arm minus leg lies in `{0, 1}`.
    pub fn dinv(&self) -> usize {
        dinv_with_conjugate(&self.parts, &conjugate_parts(&self.parts))
    }

    /// `|γ| − dinv(γ)`.
    pub fn deficit(&self) -> usize {
        let size = self.size();
        let dinv = self.dinv();
        assert!(dinv <= size, "dinv {dinv} exceeds size {size} for {self}");
        size - dinv
    }

    /// Least `n` with the diagram inside the `n`-triangle: `max(γᵢ + i)`.
    pub fn mind(&self) -> usize {
        self.parts
            .iter()
            .enumerate()
            .map(|(i, &p)| p + i + 1)
            .max()
            .unwrap_or(0)
    }

    /// External area `C(n,2) − |γ|` relative to the `n`-triangle.
    pub fn area(&self, n: usize) -> Result<usize> {
        self.check_contained(n)?;
        Ok(choose2(n) - self.size())
    }

    fn check_contained(&self, n: usize) -> Result<()> {
        let mind = self.mind();
        if mind > n {
            Err(Error::NotContained { n, mind })
        } else {
            Ok(())
        }
    }

    /// Least `m ≥ 0` with `γ′_{m+1} = mind(γ) − m − 1`.
    ///
    /// Geometrically, `(m+1, m+1)` is where the diagram first touches the
    /// diagonal of its minimal triangle.
    pub fn first_return(&self) -> Result<usize> {
        if self.is_empty() {
            return Err(Error::EmptyPartition);
        }
        let n = self.mind();
        let conj = conjugate_parts(&self.parts);
        let m = (0..n)
            .find(|&m| conj.get(m).copied().unwrap_or(0) == n - m - 1)
            .expect("a nonempty partition touches the diagonal of its minimal triangle");
        Ok(m)
    }

    /// `(0 − γ_n, 1 − γ_{n−1}, …, n − 1 − γ_1)`.
    pub fn to_dyck_vector(&self, n: usize) -> Result<DyckVector> {
        self.check_contained(n)?;
        let entries = (0..n).map(|i| i - self.part(n - i)).collect();
        Ok(DyckVector { entries })
    }

    /// Compact single-token form used in report records, e.g. `(5,4,1,1,1)`.
    pub fn compact(&self) -> String {
        let mut s = String::from("(");
        for (i, p) in self.parts.iter().enumerate() {
            if i > 0 {
                s.push(',');
            }
            s.push_str(&p.to_string());
        }
        if self.parts.len() == 1 && self.parts[0] >= 10 {
            s.push_str(",0");
        }
        s.push(')');
        s
    }

    /// Orders partitions descending-lexicographically on their part lists.
    pub fn cmp_desc(&self, other: &Partition) -> Ordering {
        other.parts.cmp(&self.parts)
    }
}

impl PartialOrd for Partition {
    fn partial_cmp(&self, other: &Self) -> Option<Ordering> {
        Some(self.cmp(other))
    }
}

impl Ord for Partition {
    fn cmp(&self, other: &Self) -> Ordering {
        self.parts.cmp(&other.parts)
    }
}

pub(crate) fn conjugate_parts(parts: &[usize]) -> Vec<usize> {
    let width = parts.first().copied().unwrap_or(0);
    let mut conj = vec![0; width];
    for &p in parts {
        for c in conj.iter_mut().take(p) {
            *c += 1;
        }
    }
    conj
}

fn dinv_with_conjugate(parts: &[usize], conj: &[usize]) -> usize {
    let mut count = 0;
    for (i, &row) in parts.iter().enumerate() {
        for (j, &col) in conj.iter().enumerate().take(row) {
            let arm = row - j - 1;
            let leg = col - i - 1;
            if arm == leg || arm == leg + 1 {
                count += 1;
            }
        }
    }
    count
}

impl fmt::Display for Partition {
    /// Space-separated parts, `-` for the empty partition. A lone part of 10
    /// or more gets an explicit trailing zero so it cannot be read back as a
    /// digit string.
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.parts.is_empty() {
            return f.write_str("-");
        }
        for (i, p) in self.parts.iter().enumerate() {
            if i > 0 {
                f.write_str(" ")?;
            }
            write!(f, "{p}")?;
        }
        if self.parts.len() == 1 && self.parts[0] >= 10 {
            f.write_str(" 0")?;
        }
        Ok(())
    }
}

impl FromStr for Partition {
    type Err = Error;

    /// Accepts `5 4 1 1 1`, `5,4,1,1,1`, `(5,4,1,1,1)`, `-`, `()`, and the
    /// digit-string shorthand `54111`. A lone token of two or more digits is
    /// always read as a digit string.
    fn from_str(s: &str) -> Result<Self> {
        let bad = || Error::BadPartition(s.to_string());
        let mut body = s.trim();
        if let Some(inner) = body.strip_prefix('(').and_then(|b| b.strip_suffix(')')) {
            body = inner.trim();
        }
        if body.is_empty() || body == "-" || body == "0" {
            return Ok(Partition::empty());
        }
        let tokens: Vec<&str> = body
            .split(|c: char| c == ',' || c.is_whitespace())
            .filter(|t| !t.is_empty())
            .collect();
        let parts: Vec<usize> = if tokens.len() == 1 && tokens[0].len() > 1 {
            let digits = tokens[0];
            if !digits.bytes().all(|b| (b'1'..=b'9').contains(&b)) {
                return Err(bad());
            }
            digits.bytes().map(|b| (b - b'0') as usize).collect()
        } else {
            tokens
                .iter()
                .map(|t| t.parse::<usize>().map_err(|_| bad()))
                .collect::<Result<_>>()?
        };
        Partition::new(parts)
    }
}

/// A Dyck vector: `v₁ = 0` and `vᵢ₊₁ ≤ vᵢ + 1`.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct DyckVector {
    entries: Vec<usize>,
}

impl DyckVector {
    pub fn new(entries: Vec<usize>) -> Result<Self> {
        let first_ok = entries.first().is_none_or(|&v| v == 0);
        if !first_ok || entries.windows(2).any(|w| w[1] > w[0] + 1) {
            return Err(Error::BadDyckVector(entries));
        }
        Ok(DyckVector { entries })
    }

    pub fn entries(&self) -> &[usize] {
        &self.entries
    }

    pub fn order(&self) -> usize {
        self.entries.len()
    }

    /// Inverse of [`Partition::to_dyck_vector`] at order `n = len(v)`:
    /// `(n−1−v_n, n−2−v_{n−1}, …, 0−v_1)`.
    pub fn to_partition(&self) -> Partition {
        let n = self.entries.len();
        let parts: Vec<usize> = (1..=n)
            .map(|i| n - i - self.entries[n - i])
            .take_while(|&p| p > 0)
            .collect();
        Partition::from_sorted(parts)
    }

    /// Pairs `i < j` with `vᵢ − vⱼ ∈ {0, 1}`.
    pub fn dinv(&self) -> usize {
        let v = &self.entries;
        let mut count = 0;
        for i in 0..v.len() {
            for j in i + 1..v.len() {
                if v[i] == v[j] || v[i] == v[j] + 1 {
                    count += 1;
                }
            }
        }
        count
    }

    pub fn area(&self) -> usize {
        self.entries.iter().sum()
    }

    pub fn deficit(&self) -> usize {
        choose2(self.order()) - self.area() - self.dinv()
    }
}

impl fmt::Display for DyckVector {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str("(")?;
        for (i, v) in self.entries.iter().enumerate() {
            if i > 0 {
                f.write_str(",")?;
            }
            write!(f, "{v}")?;
        }
        f.write_str(")")
    }
}

/// All partitions of `n` in descending lexicographic order.
pub struct PartitionsOf {
    next: Option<Vec<usize>>,
}

impl PartitionsOf {
    pub fn new(n: usize) -> Self {
        let first = if n == 0 { Vec::new() } else { vec![n] };
        PartitionsOf { next: Some(first) }
    }
}

impl Iterator for PartitionsOf {
    type Item = Partition;

    fn next(&mut self) -> Option<Partition> {
        let cur = self.next.take()?;
        let mut p = cur.clone();
        let mut ones = 0;
        while p.last() == Some(&1) {
            p.pop();
            ones += 1;
        }
        if let Some(last) = p.pop() {
            let x = last - 1;
            p.push(x);
            let mut rem = ones + 1;
            while rem > 0 {
                let y = rem.min(x);
                p.push(y);
                rem -= y;
            }
            self.next = Some(p);
        }
        Some(Partition::from_sorted(cur))
    }
}

/// All partitions whose diagram fits in the `n`-triangle, in descending
/// lexicographic order. Yields `Catalan(n)` items.
pub struct DyckPartitions {
    n: usize,
    cur: Option<Vec<usize>>,
}

impl DyckPartitions {
    pub fn new(n: usize) -> Self {
        // Start from the staircase (n−1, …, 1), the lexicographic maximum.
        let cur = (1..n).map(|i| n - i).collect();
        DyckPartitions { n, cur: Some(cur) }
    }
}

impl Iterator for DyckPartitions {
    type Item = Partition;

    fn next(&mut self) -> Option<Partition> {
        let cur = self.cur.take()?;
        let out: Vec<usize> = cur.iter().copied().take_while(|&p| p > 0).collect();
        if let Some(j) = cur.iter().rposition(|&p| p > 0) {
            let mut succ = cur;
            succ[j] -= 1;
            for i in j + 1..succ.len() {
                succ[i] = succ[i - 1].min(self.n - i - 1);
            }
            self.cur = Some(succ);
        }
        Some(Partition::from_sorted(out))
    }
}

pub fn enumerate_dyck_partitions(n: usize) -> DyckPartitions {
    DyckPartitions::new(n)
}

/// All partitions with deficit `k` and dinv `i`, descending lexicographic.
pub fn enumerate_deficit(k: usize, i: usize) -> Vec<Partition> {
    deficit_levels(k, i).pop().unwrap_or_default()
}

/// `levels[i]` lists every partition with deficit `k` and dinv `i`, for
/// `0 ≤ i ≤ max_dinv`, each level in descending lexicographic order.
///
/// Partitions are grown from the inside out by wrapping hooks (a new first
/// row and first column) around a smaller partition. Cells strictly inside
/// the hook keep their arm and leg, so deficit only grows and any branch
/// past `k` is cut.
pub fn deficit_levels(k: usize, max_dinv: usize) -> Vec<Vec<Partition>> {
    let max_size = k + max_dinv;
    let mut levels = vec![Vec::new(); max_dinv + 1];
    let mut stack = vec![(Vec::<usize>::new(), 0usize, 0usize)];
    while let Some((inner, inner_dinv, inner_size)) = stack.pop() {
        let inner_def = inner_size - inner_dinv;
        if inner_def == k {
            levels[inner_dinv].push(Partition::from_sorted(inner.clone()));
        }
        let conj = conjugate_parts(&inner);
        let rows = inner.len();
        let width = inner.first().copied().unwrap_or(0);
        for c in rows + 1..=rows + 2 + k {
            if inner_size + width + c > max_size {
                break;
            }
            for r in width + 1..=width + 3 + k {
                let size = inner_size + r + c - 1;
                if size > max_size {
                    break;
                }
                let hook_dinv = hook_dinv(&inner, &conj, r, c);
                let def = inner_def + (r + c - 1 - hook_dinv);
                if def > k {
                    continue;
                }
                let mut parts = Vec::with_capacity(c);
                parts.push(r);
                parts.extend((0..c - 1).map(|i| inner.get(i).copied().unwrap_or(0) + 1));
                stack.push((parts, inner_dinv + hook_dinv, size));
            }
        }
    }
    for level in &mut levels {
        level.sort_by(|a, b| a.cmp_desc(b));
    }
    levels
}

/// Dinv contribution of the first row and column of the partition whose
/// first row has `r` cells, first column `c` cells, and interior `inner`.
fn hook_dinv(inner: &[usize], conj: &[usize], r: usize, c: usize) -> usize {
    let balanced = |diff: i64| diff == 0 || diff == 1;
    let mut count = usize::from(balanced(r as i64 - c as i64));
    for j in 2..=r {
        let leg = conj.get(j - 2).copied().unwrap_or(0) as i64;
        count += usize::from(balanced((r - j) as i64 - leg));
    }
    for i in 2..=c {
        let arm = inner.get(i - 2).copied().unwrap_or(0) as i64;
        count += usize::from(balanced(arm - (c - i) as i64));
    }
    count
}
