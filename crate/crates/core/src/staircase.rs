//! Staircase sequences and pointwise minima of them.
//!
//! The infinite `(a, m, h)`-staircase on `{a, a+1, …}` takes the value `h`
//! `m+1` times, then `h+1` exactly `h` times, then `h+2` exactly `h+1` times,
//! and so on. For `n > h`, `F(i) = n` exactly when
//! `a+m+C(n−1,2)−C(h,2) < i ≤ a+m+C(n,2)−C(h,2)`.

use crate::error::{choose2_i, Error, Result};

/// An `(a, m, h)`-staircase, optionally cut off after `end`.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub struct Staircase {
    start: i64,
    plateau: i64,
    height: i64,
    end: Option<i64>,
}

impl Staircase {
    /// Infinite staircase. All three parameters must be nonnegative.
    pub fn new(a: i64, m: i64, h: i64) -> Result<Self> {
        if a < 0 || m < 0 || h < 0 {
            return Err(Error::BadStaircase(format!("({a},{m},{h})")));
        }
        Ok(Staircase {
            start: a,
            plateau: m,
            height: h,
            end: None,
        })
    }

    /// Finite prefix on `{a, …, end}`.
    pub fn finite(a: i64, m: i64, h: i64, end: i64) -> Result<Self> {
        if end < a {
            return Err(Error::BadStaircase(format!("end {end} before start {a}")));
        }
        Ok(Staircase {
            end: Some(end),
            ..Staircase::new(a, m, h)?
        })
    }

    pub fn start(&self) -> i64 {
        self.start
    }

    pub fn plateau(&self) -> i64 {
        self.plateau
    }

    pub fn height(&self) -> i64 {
        self.height
    }

    pub fn end(&self) -> Option<i64> {
        self.end
    }

    pub fn params(&self) -> (i64, i64, i64) {
        (self.start, self.plateau, self.height)
    }

    pub fn contains(&self, i: i64) -> bool {
        i >= self.start && self.end.is_none_or(|e| i <= e)
    }

    /// Closed-form value at `i`.
    pub fn value(&self, i: i64) -> Result<i64> {
        if !self.contains(i) {
            return Err(Error::OutOfDomain(i));
        }
        Ok(self.value_unchecked(i))
    }

    fn value_unchecked(&self, i: i64) -> i64 {
        let offset = i - self.start - self.plateau;
        if offset <= 0 {
            return self.height;
        }
        // Least n with C(n,2) ≥ offset + C(h,2); any such n exceeds h.
        let target = offset + choose2_i(self.height);
        let mut n = (1 + 8 * target as u64).isqrt().div_ceil(2) as i64;
        while choose2_i(n) < target {
            n += 1;
        }
        while n > 0 && choose2_i(n - 1) >= target {
            n -= 1;
        }
        n
    }

    /// `{i : F(i) ≤ n}` as a closed interval, or `None` when empty.
    pub fn threshold_set(&self, n: i64) -> Option<(i64, i64)> {
        if n < self.height {
            return None;
        }
        let mut hi = self.start + self.plateau + choose2_i(n) - choose2_i(self.height);
        if let Some(e) = self.end {
            hi = hi.min(e);
        }
        Some((self.start, hi))
    }
}

/// Values of the staircase on `lo..=hi` obtained by writing out runs one
/// at a time, with no closed form involved.
pub fn unrolled(a: i64, m: i64, h: i64, hi: i64) -> Vec<i64> {
    let mut out = Vec::new();
    let mut value = h;
    let mut run = m + 1;
    let mut i = a;
    while i <= hi {
        for _ in 0..run {
            if i > hi {
                break;
            }
            out.push(value);
            i += 1;
        }
        run = value;
        value += 1;
    }
    out
}

/// A function tabulated on an integer window, with the staircases it was
/// built from when it is a pointwise minimum.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct StepFunction {
    lo: i64,
    values: Vec<i64>,
    parts: Vec<Staircase>,
}

impl StepFunction {
    /// Explicit values on `lo..lo+values.len()`.
    pub fn from_values(lo: i64, values: Vec<i64>) -> Self {
        StepFunction {
            lo,
            values,
            parts: Vec::new(),
        }
    }

    pub fn window(&self) -> (i64, i64) {
        (self.lo, self.lo + self.values.len() as i64 - 1)
    }

    pub fn values(&self) -> &[i64] {
        &self.values
    }

    pub fn parts(&self) -> &[Staircase] {
        &self.parts
    }

    pub fn value(&self, i: i64) -> Option<i64> {
        if i < self.lo {
            return None;
        }
        self.values.get((i - self.lo) as usize).copied()
    }

    /// `{i in window : F(i) ≤ n}` in increasing order.
    pub fn at_most(&self, n: i64) -> Vec<i64> {
        (self.lo..)
            .zip(&self.values)
            .filter(|&(_, &v)| v <= n)
            .map(|(i, _)| i)
            .collect()
    }
}

/// `F(j) = min{F_s(j) : j in domain(F_s)}` over the window `lo..=hi`.
pub fn pointwise_min(fs: &[Staircase], lo: i64, hi: i64) -> Result<StepFunction> {
    let values = (lo..=hi)
        .map(|i| {
            fs.iter()
                .filter(|s| s.contains(i))
                .map(|s| s.value_unchecked(i))
                .min()
                .ok_or(Error::OutOfDomain(i))
        })
        .collect::<Result<Vec<_>>>()?;
    Ok(StepFunction {
        lo,
        values,
        parts: fs.to_vec(),
    })
}

/// First index where `a_j + b_j + m_j + k = C(h_j, 2)` or the `(m, h)`
/// matching fails.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct HypothesisViolation {
    pub index: usize,
    pub reason: String,
}

/// A point where `F(i) ≤ n` and `G(C(n,2) − k − i) ≤ n` disagree.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct Counterexample {
    pub n: i64,
    pub i: i64,
    pub f_side: bool,
    pub g_side: bool,
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct OppositeReport {
    pub hypothesis: std::result::Result<(), HypothesisViolation>,
    pub brute: std::result::Result<(), Counterexample>,
}

impl OppositeReport {
    pub fn opposite(&self) -> bool {
        self.brute.is_ok()
    }
}

/// Checks whether `F = min F_j` and `G = min G_j` have the opposite property
/// for deficit `k`, both through the parameter identity and by brute force.
///
/// `f_params` are the `(a, m, h)` of the `F_j` in order; `g_params` are the
/// `(b, m, h)` of the `G` staircases in their own order, so `F_j` is paired
/// with the `j`-th entry of `g_params` read backwards. The brute-force pass
/// compares `F(i) ≤ n` against `G(C(n,2) − k − i) ≤ n` for every `0 ≤ n ≤ n_max`
/// and `i` in `lo..=hi`, evaluating each staircase directly.
pub fn opposite_check(
    f_params: &[(i64, i64, i64)],
    g_params: &[(i64, i64, i64)],
    k: i64,
    (lo, hi): (i64, i64),
    n_max: i64,
) -> Result<OppositeReport> {
    if f_params.len() != g_params.len() {
        return Err(Error::LengthMismatch(f_params.len(), g_params.len()));
    }
    let fs = f_params
        .iter()
        .map(|&(a, m, h)| Staircase::new(a, m, h))
        .collect::<Result<Vec<_>>>()?;
    let gs = g_params
        .iter()
        .map(|&(b, m, h)| Staircase::new(b, m, h))
        .collect::<Result<Vec<_>>>()?;

    let mut hypothesis = Ok(());
    for (j, (&(a, m, h), &(b, gm, gh))) in f_params.iter().zip(g_params.iter().rev()).enumerate() {
        let reason = if (m, h) != (gm, gh) {
            Some(format!("(m,h) = ({m},{h}) but partner has ({gm},{gh})"))
        } else if a + b + m + k != choose2_i(h) {
            Some(format!(
                "{a}+{b}+{m}+{k} = {} != C({h},2) = {}",
                a + b + m + k,
                choose2_i(h)
            ))
        } else {
            None
        };
        if let Some(reason) = reason {
            hypothesis = Err(HypothesisViolation { index: j, reason });
            break;
        }
    }

    let min_at = |set: &[Staircase], i: i64| -> Option<i64> {
        set.iter()
            .filter(|s| s.contains(i))
            .map(|s| s.value_unchecked(i))
            .min()
    };
    let mut brute = Ok(());
    'outer: for n in 0..=n_max {
        for i in lo..=hi {
            let f_side = min_at(&fs, i).is_some_and(|v| v <= n);
            let g_side = min_at(&gs, choose2_i(n) - k - i).is_some_and(|v| v <= n);
            if f_side != g_side {
                brute = Err(Counterexample {
                    n,
                    i,
                    f_side,
                    g_side,
                });
                break 'outer;
            }
        }
    }
    Ok(OppositeReport { hypothesis, brute })
}
