//! The successor map `ν`, its inverse, `ν`-segments and tail initiators.
//!
//! `ν(γ) = (ℓ(γ)+1, γ₁−1, …, γ_ℓ−1)` on the domain `γ₁ ≤ ℓ(γ)+2`. It raises
//! dinv by one and keeps the deficit fixed, so every deficit class splits
//! into disjoint `ν`-orbits.

use crate::error::{choose2, Error, Result};
use crate::partition::{DyckVector, Partition};

/// `ν(γ)` is undefined.
pub fn is_final(p: &Partition) -> bool {
    p.first() > p.len() + 2
}

/// `ν⁻¹(δ)` is undefined. The empty partition counts as initial: it is not
/// in the image of `ν`, whose values all have at least one part.
pub fn is_initial(p: &Partition) -> bool {
    p.is_empty() || p.first() < p.len()
}

pub fn nu(p: &Partition) -> Result<Partition> {
    if is_final(p) {
        return Err(Error::Final(p.to_string()));
    }
    let mut parts = Vec::with_capacity(p.len() + 1);
    parts.push(p.len() + 1);
    parts.extend(p.parts().iter().map(|&x| x - 1).take_while(|&x| x > 0));
    Ok(Partition::from_sorted(parts))
}

/// `ν⁻¹(δ) = (δ₂+1, …, δ_s+1, 1^{δ₁−ℓ(δ)})`.
pub fn nu_inv(d: &Partition) -> Result<Partition> {
    if is_initial(d) {
        return Err(Error::Initial(d.to_string()));
    }
    let ones = d.first() - d.len();
    let parts: Vec<usize> = d.parts()[1..]
        .iter()
        .map(|&x| x + 1)
        .chain(std::iter::repeat_n(1, ones))
        .collect();
    Ok(Partition::from_sorted(parts))
}

/// A dinv-ordered run of a `ν`-orbit.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct NuSegment {
    pub members: Vec<Partition>,
    /// Set when the orbit continues past the requested dinv cutoff.
    pub open_right: bool,
}

impl NuSegment {
    pub fn first_dinv(&self) -> Option<usize> {
        self.members.first().map(Partition::dinv)
    }

    pub fn initial(&self) -> Option<&Partition> {
        self.members.first()
    }
}

/// Walks back to the initial partition, then forward while `ν` is defined
/// and dinv stays at most `max_dinv`.
pub fn nu_segment(p: &Partition, max_dinv: usize) -> NuSegment {
    let mut start = p.clone();
    while let Ok(prev) = nu_inv(&start) {
        start = prev;
    }
    segment_from_initial(start, max_dinv)
}

/// Forward orbit of `start` up to dinv `max_dinv`.
pub fn segment_from_initial(start: Partition, max_dinv: usize) -> NuSegment {
    let mut dinv = start.dinv();
    let mut members = Vec::new();
    let mut cur = start;
    loop {
        if dinv > max_dinv {
            return NuSegment {
                members,
                open_right: true,
            };
        }
        let next = nu(&cur);
        members.push(cur);
        match next {
            Ok(n) => {
                cur = n;
                dinv += 1;
            }
            Err(_) => {
                return NuSegment {
                    members,
                    open_right: false,
                }
            }
        }
    }
}

/// `TI(μ) = dpmap_N(0, 0, 1^{n₁}, 0, 1^{n₂}, 0, …, 0, 1^{n_{μ₁}})` with
/// `N = μ₁ + ℓ(μ) + 1` and `n_j` the multiplicity of `j` in `μ`. `TI(())` is
/// taken to be the empty partition.
pub fn tail_initiator(mu: &Partition) -> Partition {
    if mu.is_empty() {
        return Partition::empty();
    }
    let mut mult = vec![0usize; mu.first() + 1];
    for &x in mu.parts() {
        mult[x] += 1;
    }
    let mut entries = vec![0, 0];
    for (j, &count) in mult.iter().enumerate().skip(1) {
        if j > 1 {
            entries.push(0);
        }
        entries.extend(std::iter::repeat_n(1, count));
    }
    debug_assert_eq!(entries.len(), mu.first() + mu.len() + 1);
    DyckVector::new(entries)
        .expect("tail initiator vectors are Dyck vectors")
        .to_partition()
}

/// `dinv(TI(μ)) = C(μ₁ + ℓ(μ) + 1, 2) − ℓ(μ) − |μ|`.
pub fn tail_start_dinv(mu: &Partition) -> usize {
    if mu.is_empty() {
        return 0;
    }
    choose2(mu.first() + mu.len() + 1) - mu.len() - mu.size()
}

/// `mind(TI(μ)) = μ₁ + ℓ(μ) + 1`, with `mind(TI(())) = 0`.
pub fn tail_height(mu: &Partition) -> usize {
    if mu.is_empty() {
        0
    } else {
        mu.first() + mu.len() + 1
    }
}

/// Recovers `μ` from a tail initiator by reading the runs of 1s in its Dyck
/// vector at order `mind`. Returns `None` when `p` is not of the form `TI(μ)`.
pub fn tail_type(p: &Partition) -> Option<Partition> {
    if p.is_empty() {
        return Some(Partition::empty());
    }
    let v = p.to_dyck_vector(p.mind()).ok()?;
    let e = v.entries();
    if e.len() < 3 || e[0] != 0 || e[1] != 0 {
        return None;
    }
    let mut runs = vec![0usize];
    for &x in &e[2..] {
        match x {
            1 => *runs.last_mut().unwrap() += 1,
            0 => runs.push(0),
            _ => return None,
        }
    }
    let mut parts = Vec::new();
    for (j, &count) in runs.iter().enumerate().rev() {
        parts.extend(std::iter::repeat_n(j + 1, count));
    }
    let mu = Partition::new(parts).ok()?;
    (tail_initiator(&mu) == *p).then_some(mu)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::partition::PartitionsOf;

    fn p(s: &str) -> Partition {
        s.parse().unwrap()
    }

    #[test]
    fn nu_examples() {
        assert_eq!(nu(&p("5 4 1 1 1")).unwrap(), p("6 4 3"));
        assert!(matches!(nu(&p("6 4 3")), Err(Error::Final(_))));
        assert_eq!(nu(&Partition::empty()).unwrap(), p("1"));
    }

    #[test]
    fn nu_inv_examples() {
        assert_eq!(nu_inv(&p("6 4 3")).unwrap(), p("5 4 1 1 1"));
        assert!(matches!(nu_inv(&p("3 3 3 1")), Err(Error::Initial(_))));
        assert_eq!(nu_inv(&p("1")).unwrap(), Partition::empty());
        assert!(nu_inv(&Partition::empty()).is_err());
    }

    #[test]
    fn initial_and_final() {
        assert!(is_initial(&p("3 3 3 1")));
        assert!(is_final(&p("6 4 3")));
        assert!(!is_final(&p("5 4 1 1 1")));
        for k in 0..=9 {
            for mu in PartitionsOf::new(k) {
                assert!(is_initial(&tail_initiator(&mu)), "TI({mu})");
            }
        }
    }

    #[test]
    fn segments() {
        let seg = nu_segment(&p("5 2 2 2"), 100);
        let want: Vec<Partition> = ["3331", "5222", "54111", "643"]
            .iter()
            .map(|s| p(s))
            .collect();
        assert_eq!(seg.members, want);
        assert!(!seg.open_right);

        let tail = nu_segment(&Partition::empty(), 3);
        assert!(tail.open_right);
        assert_eq!(
            tail.members,
            vec![Partition::empty(), p("1"), p("2"), p("2 1")]
        );

        let ti = p("6654211");
        let seg = nu_segment(&ti, 21);
        assert_eq!(seg.members, vec![ti.clone(), p("855431"), p("774432")]);
        assert!(seg.open_right);
    }

    #[test]
    fn tail_initiators() {
        assert_eq!(tail_initiator(&p("4 3 1 1 1")), p("8 8 6 6 5 3 2 1 1"));
        let ti = tail_initiator(&p("4 1 1"));
        assert_eq!(ti, p("6 6 5 4 2 1 1"));
        assert_eq!(ti.dinv(), 19);
        assert_eq!(tail_initiator(&Partition::empty()), Partition::empty());
        assert_eq!(tail_start_dinv(&p("4 1 1")), 19);
        assert_eq!(tail_start_dinv(&p("4 2")), 13);
        assert_eq!(tail_start_dinv(&p("9")), 45);
        assert_eq!(tail_initiator(&p("4 2")), p("5 5 4 2 2 1"));
    }

    #[test]
    fn tail_type_recovers_mu() {
        for k in 0..=8 {
            for mu in PartitionsOf::new(k) {
                assert_eq!(tail_type(&tail_initiator(&mu)), Some(mu.clone()));
            }
        }
        assert_eq!(tail_type(&p("5 4 1 1 1")), None);
    }

    #[test]
    fn tail_closed_forms_match_direct_computation() {
        for k in 0..=12 {
            for mu in PartitionsOf::new(k) {
                let ti = tail_initiator(&mu);
                assert_eq!(ti.dinv(), tail_start_dinv(&mu), "{mu}");
                assert_eq!(ti.deficit(), k, "{mu}");
                assert_eq!(ti.mind(), tail_height(&mu), "{mu}");
            }
        }
    }

    #[test]
    fn tails_never_stop() {
        for k in 0..=6 {
            for mu in PartitionsOf::new(k) {
                let mut cur = tail_initiator(&mu);
                for _ in 0..60 {
                    cur = nu(&cur).expect("tails are infinite");
                }
            }
        }
    }
}
