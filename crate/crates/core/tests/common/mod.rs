//! Checks shared by the property tests and the acceptance suite. Each one
//! returns the first counterexample it finds.

#![allow(dead_code)]

use qtcat::catalan::{
    qt_catalan, qt_catalan_restricted, restricted_from_mind_word, top_symmetric_upto,
};
use qtcat::chaindata::{self, ChainDataFile};
use qtcat::chains::{expand_global, GlobalChain};
use qtcat::error::choose2;
use qtcat::nu::{is_final, is_initial, nu, nu_inv, nu_segment};
use qtcat::partition::{enumerate_dyck_partitions, PartitionsOf};
use qtcat::staircase::{opposite_check, pointwise_min, unrolled, Staircase};
use qtcat::{DyckVector, Partition, StepFunction};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

pub type Check = Result<(), String>;

pub fn rng(seed: u64) -> ChaCha8Rng {
    ChaCha8Rng::seed_from_u64(seed)
}

pub fn p(s: &str) -> Partition {
    s.parse().unwrap()
}

/// `ν` raises dinv by one, keeps the deficit, and `ν⁻¹` undoes it, over
/// every partition of size at most `max_n`.
pub fn nu_invariants(max_n: usize) -> Check {
    for n in 0..=max_n {
        for g in PartitionsOf::new(n) {
            if is_final(&g) != nu(&g).is_err() || is_initial(&g) != nu_inv(&g).is_err() {
                return Err(format!(
                    "{}: final/initial flags disagree with ν, ν⁻¹",
                    g.compact()
                ));
            }
            if let Ok(next) = nu(&g) {
                if next.dinv() != g.dinv() + 1 || next.deficit() != g.deficit() {
                    return Err(format!(
                        "ν{} = {} changes dinv or deficit wrongly",
                        g.compact(),
                        next.compact()
                    ));
                }
                if nu_inv(&next).as_ref() != Ok(&g) {
                    return Err(format!("ν⁻¹(ν{}) != {}", g.compact(), g.compact()));
                }
            }
            if let Ok(prev) = nu_inv(&g) {
                if nu(&prev).as_ref() != Ok(&g) {
                    return Err(format!("ν(ν⁻¹{}) != {}", g.compact(), g.compact()));
                }
            }
        }
    }
    Ok(())
}

/// Dyck-vector round trips and statistic transport over `DP(n)`, `n ≤ max_n`,
/// at order `n = mind` and `n = mind + 3`.
pub fn dyck_round_trips(max_n: usize) -> Check {
    for n in 0..=max_n {
        for g in enumerate_dyck_partitions(n) {
            for order in [g.mind(), g.mind() + 3] {
                let v = g.to_dyck_vector(order).map_err(|e| e.to_string())?;
                let w = DyckVector::new(v.entries().to_vec())
                    .map_err(|e| format!("{v} rejected: {e}"))?;
                if w.to_partition() != g {
                    return Err(format!(
                        "{} -> {v} -> {}",
                        g.compact(),
                        w.to_partition().compact()
                    ));
                }
                if v.dinv() != g.dinv()
                    || v.area() != g.area(order).unwrap()
                    || v.deficit() != g.deficit()
                {
                    return Err(format!(
                        "statistics of {} differ from those of {v}",
                        g.compact()
                    ));
                }
                let back = w.to_partition().to_dyck_vector(v.order()).unwrap();
                if back != v {
                    return Err(format!("{v} -> partition -> {back}"));
                }
            }
        }
    }
    Ok(())
}

/// The minds along every `ν`-segment through a partition of size at most
/// `max_n` follow a staircase from the first member of the segment.
pub fn nu_stair(max_n: usize) -> Check {
    for n in 0..=max_n {
        for g in PartitionsOf::new(n) {
            let seg = nu_segment(&g, g.dinv() + 30);
            let minds: Vec<usize> = seg.members.iter().map(Partition::mind).collect();
            let (a, h) = (seg.first_dinv().unwrap(), minds[0]);
            let m = minds.iter().take_while(|&&v| v == h).count() - 1;
            let s = Staircase::new(a as i64, m as i64, h as i64).unwrap();
            for (i, &v) in minds.iter().enumerate() {
                if s.value((a + i) as i64).unwrap() != v as i64 {
                    return Err(format!(
                        "segment through {}: mind {v} at dinv {} breaks ({a},{m},{h})",
                        g.compact(),
                        a + i
                    ));
                }
            }
        }
    }
    Ok(())
}

/// Closed-form staircase values against unrolling, on `cases` random
/// parameter triples over 200-step windows.
pub fn staircase_closed_form(seed: u64, cases: usize) -> Check {
    let mut r = rng(seed);
    for _ in 0..cases {
        let (a, m, h) = (r.gen_range(0..50), r.gen_range(0..10), r.gen_range(0..25));
        let s = Staircase::new(a, m, h).unwrap();
        let hi = a + 199;
        for (i, want) in (a..=hi).zip(unrolled(a, m, h, hi)) {
            if s.value(i).unwrap() != want {
                return Err(format!(
                    "({a},{m},{h}) at {i}: closed form {}, unrolled {want}",
                    s.value(i).unwrap()
                ));
            }
        }
    }
    Ok(())
}

/// Two staircases with `a + m < a'` and `G(a') < F(a')` satisfy `G ≤ F` from
/// `a'` on.
pub fn compare2(seed: u64, cases: usize) -> Check {
    let mut r = rng(seed);
    let mut done = 0;
    while done < cases {
        let (a, m, h) = (r.gen_range(0..30), r.gen_range(0..6), r.gen_range(0..20));
        let f = Staircase::new(a, m, h).unwrap();
        let a2 = a + m + 1 + r.gen_range(0..40);
        let top = f.value(a2).unwrap();
        if top == 0 {
            continue;
        }
        let g = Staircase::new(a2, r.gen_range(0..8), r.gen_range(0..top)).unwrap();
        for i in a2..a2 + 250 {
            if g.value(i).unwrap() > f.value(i).unwrap() {
                return Err(format!(
                    "F={:?} G={:?}: G({i}) > F({i})",
                    f.params(),
                    g.params()
                ));
            }
        }
        done += 1;
    }
    Ok(())
}

/// Random cascades `a_{j−1} + m_{j−1} < a_j`, `F_j(a_j) < F_{j−1}(a_j)`:
/// the minimum equals the last staircase that has started.
pub fn dec_min(seed: u64, cases: usize) -> Check {
    let mut r = rng(seed);
    let mut done = 0;
    'family: while done < cases {
        let c = r.gen_range(1..=5);
        let mut fs =
            vec![
                Staircase::new(r.gen_range(0..20), r.gen_range(0..5), r.gen_range(0..20)).unwrap(),
            ];
        while fs.len() < c {
            let prev = *fs.last().unwrap();
            let a = prev.start() + prev.plateau() + 1 + r.gen_range(0..30);
            let top = prev.value(a).unwrap();
            if top == 0 {
                continue 'family;
            }
            fs.push(Staircase::new(a, r.gen_range(0..5), r.gen_range(0..top)).unwrap());
        }
        let lo = fs[0].start();
        let hi = fs.last().unwrap().start() + 250;
        let min = pointwise_min(&fs, lo, hi).map_err(|e| e.to_string())?;
        for i in lo..=hi {
            let j = fs.iter().rposition(|s| s.start() <= i).unwrap();
            if min.value(i) != Some(fs[j].value(i).unwrap()) {
                return Err(format!(
                    "cascade {:?}: min at {i} is not F_{}",
                    fs.iter().map(Staircase::params).collect::<Vec<_>>(),
                    j + 1
                ));
            }
        }
        done += 1;
    }
    Ok(())
}

/// Families built to satisfy `a_j + b_j + m_j + k = C(h_j, 2)` have the
/// opposite property for every `n ≤ 20` over a 250-point window.
pub fn lg_opposite(seed: u64, cases: usize) -> Check {
    let mut r = rng(seed);
    let mut done = 0;
    while done < cases {
        let k = r.gen_range(0..10i64);
        let len = r.gen_range(1..=4);
        let mut fp = Vec::new();
        let mut gp = Vec::new();
        for _ in 0..len {
            let h = r.gen_range(2..=20i64);
            let m = r.gen_range(0..4i64);
            let total = h * (h - 1) / 2 - m - k;
            if total < 0 {
                continue;
            }
            let a = r.gen_range(0..=total);
            fp.push((a, m, h));
            gp.push((total - a, m, h));
        }
        if fp.is_empty() {
            continue;
        }
        gp.reverse();
        let report = opposite_check(&fp, &gp, k, (0, 249), 20).map_err(|e| e.to_string())?;
        if report.hypothesis.is_err() {
            return Err(format!("constructed family {fp:?} fails the hypothesis"));
        }
        if let Err(ce) = report.brute {
            return Err(format!("F={fp:?} G={gp:?} k={k}: counterexample {ce:?}"));
        }
        done += 1;
    }
    Ok(())
}

/// `Cat_n(q,t)` is symmetric for every `n ≤ max_n`.
pub fn full_symmetry(max_n: usize) -> Check {
    for n in 0..=max_n {
        let c = qt_catalan(n).map_err(|e| e.to_string())?;
        if !c.is_symmetric() {
            return Err(format!("Cat_{n} is not symmetric"));
        }
    }
    Ok(())
}

/// Terms of `Cat_n` of total degree at least `C(n,2) − depth` are symmetric
/// for every `n ≤ max_n`.
pub fn top_symmetry(max_n: usize, depth: usize) -> Check {
    for n in 0..=max_n {
        let c = qt_catalan(n).map_err(|e| e.to_string())?;
        if !top_symmetric_upto(&c, choose2(n).saturating_sub(depth)) {
            return Err(format!("top terms of Cat_{n} are not symmetric"));
        }
    }
    Ok(())
}

fn global(file: &ChainDataFile, mu: &Partition, cutoff: usize) -> Result<GlobalChain, String> {
    let block = file
        .block(mu)
        .ok_or_else(|| format!("no chain {}", mu.compact()))?;
    expand_global(&block.initials, cutoff).map_err(|e| e.to_string())
}

/// For every chain of the bundled file of deficit `k` and every `n ≤ n_max`,
/// the polynomial read off the mind word equals the direct sum over the
/// members, and swapping `q,t` gives the partner chain's polynomial.
pub fn two_routes(k: usize, n_max: usize) -> Check {
    let file = chaindata::bundled_file(k).ok_or(format!("no bundled data for k={k}"))?;
    let cutoff = choose2(n_max) + 1;
    let involution = file.involution();
    for block in &file.chains {
        let g = global(&file, &block.mu, cutoff)?;
        let partner = global(&file, &involution[&block.mu], cutoff)?;
        let minds: Vec<i64> = g.mind_word().iter().map(|&(_, m)| m as i64).collect();
        let f = StepFunction::from_values(g.start() as i64, minds);
        for n in 0..=n_max {
            let direct = qt_catalan_restricted(g.members(), n).map_err(|e| e.to_string())?;
            let via_word = restricted_from_mind_word(&f, k, n).map_err(|e| e.to_string())?;
            if direct != via_word {
                return Err(format!(
                    "k={k} {} n={n}: {direct} vs {via_word}",
                    block.mu.compact()
                ));
            }
            if direct.swap() != partner.restricted_poly(n) {
                return Err(format!(
                    "k={k} {} n={n}: swap differs from the partner's polynomial",
                    block.mu.compact()
                ));
            }
        }
    }
    Ok(())
}

/// Names of the single-field corruptions applied by [`mutate`].
pub const MUTATIONS: [&str; 10] = [
    "involution swap",
    "initial dropped",
    "h entry off by one",
    "N-mark moved",
    "a entry off by one",
    "m entry off by one",
    "pair split into fixed points",
    "initial advanced by ν",
    "initial moved to another chain",
    "a entry dropped",
];

fn pick<T>(r: &mut ChaCha8Rng, items: &[T]) -> usize {
    assert!(!items.is_empty());
    r.gen_range(0..items.len())
}

fn bump(v: &mut [usize], r: &mut ChaCha8Rng) {
    let i = r.gen_range(0..v.len());
    v[i] = if v[i] == 0 || r.gen_bool(0.5) {
        v[i] + 1
    } else {
        v[i] - 1
    };
}

/// Applies corruption number `kind` (see [`MUTATIONS`]) to `file`, choosing
/// its target with `r`.
pub fn mutate(file: &ChainDataFile, kind: usize, r: &mut ChaCha8Rng) -> ChainDataFile {
    let mut f = file.clone();
    let c = pick(r, &f.chains);
    match kind {
        0 => {
            let proper: Vec<usize> = (0..f.pairs.len())
                .filter(|&i| f.pairs[i].0 != f.pairs[i].1)
                .collect();
            let i = proper[pick(r, &proper)];
            let mut j = proper[pick(r, &proper)];
            while j == i {
                j = proper[pick(r, &proper)];
            }
            let yi = f.pairs[i].1.clone();
            f.pairs[i].1 = std::mem::replace(&mut f.pairs[j].1, yi);
        }
        1 => {
            let c = (0..f.chains.len())
                .cycle()
                .skip(c)
                .find(|&c| f.chains[c].initials.len() > 1)
                .unwrap();
            let n = f.chains[c].initials.len() - 1;
            f.chains[c].initials.remove(r.gen_range(0..n));
        }
        2 => bump(f.chains[c].h.as_mut().unwrap(), r),
        3 => {
            let marked: Vec<(usize, usize)> = f
                .chains
                .iter()
                .enumerate()
                .flat_map(|(c, b)| {
                    b.initials
                        .iter()
                        .enumerate()
                        .filter(|x| x.1 .1)
                        .map(move |(i, _)| (c, i))
                })
                .collect();
            if let Some(&(mc, mi)) = marked.get(r.gen_range(0..marked.len().max(1))) {
                f.chains[mc].initials[mi].1 = false;
            }
            let free: Vec<(usize, usize)> = f
                .chains
                .iter()
                .enumerate()
                .flat_map(|(c, b)| {
                    (0..b.initials.len() - 1)
                        .filter(move |&i| !b.initials[i].1)
                        .map(move |i| (c, i))
                })
                .filter(|&x| Some(&x) != marked.first())
                .collect();
            let (fc, fi) = free[pick(r, &free)];
            f.chains[fc].initials[fi].1 = true;
        }
        4 => bump(f.chains[c].a.as_mut().unwrap(), r),
        5 => bump(f.chains[c].m.as_mut().unwrap(), r),
        6 => {
            let split: Vec<usize> = (0..f.pairs.len())
                .filter(|&i| f.pairs[i].0 != f.pairs[i].1)
                .collect();
            let (x, y) = f.pairs.remove(split[pick(r, &split)]);
            f.pairs.push((x.clone(), x));
            f.pairs.push((y.clone(), y));
        }
        7 => {
            let i = r.gen_range(0..f.chains[c].initials.len() - 1);
            let g = &mut f.chains[c].initials[i].0;
            *g = nu(g).unwrap();
        }
        8 => {
            let src = (0..f.chains.len())
                .cycle()
                .skip(c)
                .find(|&c| f.chains[c].initials.len() > 1)
                .unwrap();
            let mut dst = pick(r, &f.chains);
            while dst == src {
                dst = pick(r, &f.chains);
            }
            let moved = f.chains[src].initials.remove(0);
            f.chains[dst].initials.insert(0, moved);
        }
        9 => {
            let a = f.chains[c].a.as_mut().unwrap();
            a.remove(r.gen_range(0..a.len()));
        }
        _ => panic!("no corruption {kind}"),
    }
    f
}

/// Check ids that fail for `text`, or the parse error.
pub fn failing_checks(text: &str) -> Result<Vec<&'static str>, String> {
    let f = chaindata::parse(text).map_err(|e| format!("parse: {e}"))?;
    let report = chaindata::verify_file(&f, None, 12).map_err(|e| format!("verify: {e}"))?;
    let mut ids: Vec<&'static str> = report.failures().map(|r| r.id).collect();
    ids.dedup();
    Ok(ids)
}
