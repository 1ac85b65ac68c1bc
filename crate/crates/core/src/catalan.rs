//! Sparse bivariate polynomials and the `q,t`-Catalan sums
//! `Cat_n(q,t) = Σ q^{area_n(γ)} t^{dinv(γ)}` over `DP(n)`, whole or restricted.

use std::collections::BTreeMap;
use std::fmt;

use crate::error::{choose2, choose2_i, Error, Result};
use crate::partition::Partition;
use crate::staircase::StepFunction;

/// Largest `n` accepted by [`qt_catalan`].
pub const CATALAN_CAP: usize = 14;

/// A polynomial in `q` and `t` with nonnegative integer coefficients, keyed
/// by `(q exponent, t exponent)`. Zero coefficients are never stored.
#[derive(Clone, Debug, Default, PartialEq, Eq)]
pub struct BivariatePoly {
    terms: BTreeMap<(usize, usize), u64>,
}

impl BivariatePoly {
    pub fn zero() -> Self {
        Self::default()
    }

    pub fn one() -> Self {
        let mut p = Self::zero();
        p.terms.insert((0, 0), 1);
        p
    }

    pub fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn coeff(&self, q: usize, t: usize) -> u64 {
        self.terms.get(&(q, t)).copied().unwrap_or(0)
    }

    pub fn terms(&self) -> impl Iterator<Item = ((usize, usize), u64)> + '_ {
        self.terms.iter().map(|(&k, &v)| (k, v))
    }

    pub fn num_terms(&self) -> usize {
        self.terms.len()
    }

    /// Adds `c·q^a·t^b`.
    pub fn add_term(&mut self, a: usize, b: usize, c: u64) -> Result<()> {
        if c == 0 {
            return Ok(());
        }
        let slot = self.terms.entry((a, b)).or_insert(0);
        *slot = slot
            .checked_add(c)
            .ok_or(Error::Overflow("polynomial coefficient"))?;
        Ok(())
    }

    /// Removes the term at `(a, b)`, returning its coefficient.
    pub fn remove_term(&mut self, a: usize, b: usize) -> u64 {
        self.terms.remove(&(a, b)).unwrap_or(0)
    }

    pub fn checked_add(&self, other: &BivariatePoly) -> Result<BivariatePoly> {
        let mut out = self.clone();
        for ((a, b), c) in other.terms() {
            out.add_term(a, b, c)?;
        }
        Ok(out)
    }

    /// Value at `q = t = 1`.
    pub fn eval_one(&self) -> Result<u64> {
        self.terms
            .values()
            .try_fold(0u64, |acc, &c| acc.checked_add(c))
            .ok_or(Error::Overflow("coefficient sum"))
    }

    /// `p(t, q)`.
    pub fn swap(&self) -> BivariatePoly {
        BivariatePoly {
            terms: self.terms.iter().map(|(&(a, b), &c)| ((b, a), c)).collect(),
        }
    }

    pub fn is_symmetric(&self) -> bool {
        self.terms.iter().all(|(&(a, b), &c)| self.coeff(b, a) == c)
    }

    /// Terms of total degree at least `floor`.
    pub fn top_part(&self, floor: usize) -> BivariatePoly {
        BivariatePoly {
            terms: self
                .terms
                .iter()
                .filter(|(&(a, b), _)| a + b >= floor)
                .map(|(&k, &c)| (k, c))
                .collect(),
        }
    }

    /// Terms `q^a t^b` with `C(n,2) − a − b = k`.
    pub fn deficit_slice(&self, n: usize, k: usize) -> BivariatePoly {
        let total = choose2(n);
        BivariatePoly {
            terms: self
                .terms
                .iter()
                .filter(|(&(a, b), _)| a + b + k == total)
                .map(|(&key, &c)| (key, c))
                .collect(),
        }
    }

    /// Terms in output order: ascending `t` exponent, then descending `q`.
    fn ordered(&self) -> Vec<((usize, usize), u64)> {
        let mut v: Vec<_> = self.terms().collect();
        v.sort_by(|&((qa, ta), _), &((qb, tb), _)| ta.cmp(&tb).then(qb.cmp(&qa)));
        v
    }

    /// `q,t,c` rows with a header, in the same order as the text form.
    pub fn to_csv(&self) -> String {
        let mut out = String::from("q,t,c\n");
        for ((a, b), c) in self.ordered() {
            out.push_str(&format!("{a},{b},{c}\n"));
        }
        out
    }
}

impl fmt::Display for BivariatePoly {
    /// `c*q^a*t^b` terms joined by `+`; unit coefficients and exponents are
    /// left out, and the zero polynomial prints as `0`.
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.is_zero() {
            return f.write_str("0");
        }
        for (idx, ((a, b), c)) in self.ordered().into_iter().enumerate() {
            if idx > 0 {
                f.write_str("+")?;
            }
            let mut factors = Vec::new();
            if c != 1 {
                factors.push(c.to_string());
            }
            for (var, e) in [("q", a), ("t", b)] {
                match e {
                    0 => {}
                    1 => factors.push(var.to_string()),
                    _ => factors.push(format!("{var}^{e}")),
                }
            }
            if factors.is_empty() {
                f.write_str("1")?;
            } else {
                f.write_str(&factors.join("*"))?;
            }
        }
        Ok(())
    }
}

/// `Cat_n(q, t)` by walking every Dyck vector of order `n`.
pub fn qt_catalan(n: usize) -> Result<BivariatePoly> {
    if n > CATALAN_CAP {
        return Err(Error::CapExceeded {
            n,
            cap: CATALAN_CAP,
        });
    }
    let mut poly = BivariatePoly::zero();
    if n == 0 {
        return Ok(BivariatePoly::one());
    }
    // hist[v] counts earlier entries equal to v; a new entry v pairs with
    // every earlier entry equal to v or v + 1.
    let mut hist = vec![0usize; n + 1];
    let mut counts: BTreeMap<(usize, usize), u64> = BTreeMap::new();
    hist[0] = 1;
    walk(n, 1, 0, 0, 0, &mut hist, &mut counts);
    for ((a, d), c) in counts {
        poly.add_term(a, d, c)?;
    }
    Ok(poly)
}

fn walk(
    n: usize,
    len: usize,
    last: usize,
    area: usize,
    dinv: usize,
    hist: &mut [usize],
    counts: &mut BTreeMap<(usize, usize), u64>,
) {
    if len == n {
        *counts.entry((area, dinv)).or_insert(0) += 1;
        return;
    }
    for v in 0..=last + 1 {
        let gain = hist[v] + hist[v + 1];
        hist[v] += 1;
        walk(n, len + 1, v, area + v, dinv + gain, hist, counts);
        hist[v] -= 1;
    }
}

/// `Cat_{n,S}(q,t)`: the sum over members of `S` that fit in the
/// `n`-triangle. Members outside `DP(n)` are skipped.
pub fn qt_catalan_restricted<'a, I>(set: I, n: usize) -> Result<BivariatePoly>
where
    I: IntoIterator<Item = &'a Partition>,
{
    let mut poly = BivariatePoly::zero();
    for p in set {
        if p.mind() <= n {
            poly.add_term(p.area(n)?, p.dinv(), 1)?;
        }
    }
    Ok(poly)
}

/// `Σ_{i : F(i) ≤ n} q^{C(n,2)−k−i} t^i` over the window of `f`.
///
/// The window must reach past every `i` with `F(i) ≤ n`: its last value has
/// to exceed `n`, and when `f` records its staircases, the window has to
/// reach the last of their start points (each staircase is nondecreasing
/// from there on).
pub fn restricted_from_mind_word(f: &StepFunction, k: usize, n: usize) -> Result<BivariatePoly> {
    let (lo, hi) = f.window();
    let n_i = n as i64;
    let last = f.value(hi).ok_or(Error::InsufficientWindow(n_i))?;
    let max_start = f.parts().iter().map(|s| s.start()).max().unwrap_or(lo);
    if last <= n_i || max_start > hi {
        return Err(Error::InsufficientWindow(n_i));
    }
    let top = choose2_i(n_i) - k as i64;
    let mut poly = BivariatePoly::zero();
    for i in f.at_most(n_i) {
        let a = top - i;
        if a < 0 || i < 0 {
            return Err(Error::OutOfDomain(i));
        }
        poly.add_term(a as usize, i as usize, 1)?;
    }
    Ok(poly)
}

/// Whether the terms of total degree at least `floor` are symmetric.
pub fn top_symmetric_upto(p: &BivariatePoly, floor: usize) -> bool {
    p.top_part(floor).is_symmetric()
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::partition::enumerate_dyck_partitions;
    use crate::staircase::{pointwise_min, Staircase};

    fn catalan_number(n: usize) -> u64 {
        // C_{m+1} = Σ C_i C_{m−i}
        let mut c = vec![1u64];
        for m in 0..n {
            c.push((0..=m).map(|i| c[i] * c[m - i]).sum());
        }
        c[n]
    }

    #[test]
    fn cat3_text() {
        assert_eq!(
            qt_catalan(3).unwrap().to_string(),
            "q^3+q^2*t+q*t+q*t^2+t^3"
        );
        assert_eq!(qt_catalan(0).unwrap().to_string(), "1");
        assert_eq!(BivariatePoly::zero().to_string(), "0");
        let mut p = BivariatePoly::zero();
        p.add_term(1, 0, 3).unwrap();
        p.add_term(0, 0, 2).unwrap();
        assert_eq!(p.to_string(), "3*q+2");
        assert_eq!(p.to_csv(), "q,t,c\n1,0,3\n0,0,2\n");
    }

    #[test]
    fn catalan_numbers_at_one() {
        for n in 0..=10 {
            assert_eq!(
                qt_catalan(n).unwrap().eval_one().unwrap(),
                catalan_number(n),
                "n={n}"
            );
        }
        assert_eq!(qt_catalan(5).unwrap().eval_one().unwrap(), 42);
        assert!(matches!(
            qt_catalan(15),
            Err(Error::CapExceeded { n: 15, cap: 14 })
        ));
    }

    #[test]
    fn vector_walk_matches_partition_enumeration() {
        for n in 0..=8 {
            let direct =
                qt_catalan_restricted(&enumerate_dyck_partitions(n).collect::<Vec<_>>(), n)
                    .unwrap();
            assert_eq!(qt_catalan(n).unwrap(), direct, "n={n}");
        }
    }

    #[test]
    fn swap_and_symmetry() {
        let mut p = BivariatePoly::zero();
        p.add_term(3, 0, 1).unwrap();
        p.add_term(2, 1, 1).unwrap();
        let mut want = BivariatePoly::zero();
        want.add_term(0, 3, 1).unwrap();
        want.add_term(1, 2, 1).unwrap();
        assert_eq!(p.swap(), want);
        assert!(!p.is_symmetric());

        let mut r = BivariatePoly::zero();
        r.add_term(2, 1, 1).unwrap();
        r.add_term(1, 1, 1).unwrap();
        assert!(!r.is_symmetric());
        for n in 0..=8 {
            assert!(qt_catalan(n).unwrap().is_symmetric());
        }
    }

    #[test]
    fn top_symmetry_and_mutation() {
        let c8 = qt_catalan(8).unwrap();
        assert!(top_symmetric_upto(&c8, choose2(8) - 9));
        assert_eq!(top_symmetric_upto(&c8, 0), c8.is_symmetric());
        let mut c5 = qt_catalan(5).unwrap();
        c5.remove_term(10, 0);
        assert!(!top_symmetric_upto(&c5, 9));
    }

    #[test]
    fn deficit_slices_partition_the_polynomial() {
        let n = 7;
        let c = qt_catalan(n).unwrap();
        let mut total = BivariatePoly::zero();
        for k in 0..=choose2(n) {
            total = total.checked_add(&c.deficit_slice(n, k)).unwrap();
        }
        assert_eq!(total, c);
    }

    #[test]
    fn overflow_is_reported() {
        let mut p = BivariatePoly::zero();
        p.add_term(0, 0, u64::MAX).unwrap();
        assert_eq!(
            p.add_term(0, 0, 1),
            Err(Error::Overflow("polynomial coefficient"))
        );
    }

    #[test]
    fn mind_word_route_needs_a_long_enough_window() {
        let fs = [
            Staircase::new(3, 0, 8).unwrap(),
            Staircase::new(5, 0, 6).unwrap(),
        ];
        let f = pointwise_min(&fs, 3, 40).unwrap();
        assert!(restricted_from_mind_word(&f, 6, 7).is_ok());
        let short = pointwise_min(&fs, 3, 6).unwrap();
        assert_eq!(
            restricted_from_mind_word(&short, 6, 7),
            Err(Error::InsufficientWindow(7))
        );
        let high = StepFunction::from_values(0, vec![9, 9]);
        assert!(restricted_from_mind_word(&high, 0, 7).unwrap().is_zero());
    }
}
