//! Named verification suites over the module invariants: exhaustive
//! round-trips and identities at small n, and seeded random sampling for
//! the bivector equalities and rank laws. Each suite returns a report
//! listing every counterexample found.

use rayon::prelude::*;

use crate::affperm::{AffinePermutation, PermClass};
use crate::bundles;
use crate::poisson::{self, BivectorMethod};
use crate::rankmat;
use crate::rat::big;
use crate::sample::{rotate_columns_left, Sampler};

#[derive(Debug, Clone)]
pub struct VerifyConfig {
    pub seed: u64,
    /// Sample count per (k, n) pair in the sampled suites.
    pub samples: usize,
    /// Upper bound on n for exhaustive enumeration and sampling pairs.
    pub n_max: usize,
    pub jacobi_pairs: Vec<(usize, usize)>,
}

impl Default for VerifyConfig {
    fn default() -> Self {
        VerifyConfig { seed: 7, samples: 100, n_max: 5, jacobi_pairs: vec![(1, 2), (1, 3), (2, 4)] }
    }
}

/// The (k, n) pairs exercised by the bracket-equality suite.
pub const BRACKET_PAIRS: [(usize, usize); 5] = [(1, 3), (1, 4), (2, 4), (2, 5), (3, 6)];

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Suite {
    Roundtrip,
    PropEnd,
    Brackets,
    Ranks,
    Jacobi,
    Axioms,
    Bruhat,
}

impl Suite {
    pub const ALL: [Suite; 7] = [
        Suite::Roundtrip,
        Suite::PropEnd,
        Suite::Brackets,
        Suite::Ranks,
        Suite::Jacobi,
        Suite::Axioms,
        Suite::Bruhat,
    ];

    pub fn name(&self) -> &'static str {
        match self {
            Suite::Roundtrip => "roundtrip",
            Suite::PropEnd => "prop_end",
            Suite::Brackets => "brackets",
            Suite::Ranks => "ranks",
            Suite::Jacobi => "jacobi",
            Suite::Axioms => "axioms",
            Suite::Bruhat => "bruhat",
        }
    }

    pub fn parse(name: &str) -> Option<Suite> {
        Suite::ALL.iter().copied().find(|s| s.name() == name)
    }
}

#[derive(Debug, Clone)]
pub struct SuiteReport {
    pub suite: String,
    pub cases: u64,
    pub failures: Vec<String>,
}

impl SuiteReport {
    pub fn passed(&self) -> bool {
        self.failures.is_empty()
    }

    pub fn to_json(&self) -> serde_json::Value {
        serde_json::json!({
            "suite": self.suite,
            "cases": self.cases,
            "passed": self.passed(),
            "failures": self.failures,
        })
    }
}

pub fn run_suite(suite: Suite, cfg: &VerifyConfig) -> SuiteReport {
    match suite {
        Suite::Roundtrip => roundtrip(cfg),
        Suite::PropEnd => prop_end(cfg),
        Suite::Brackets => brackets(cfg),
        Suite::Ranks => ranks(cfg),
        Suite::Jacobi => jacobi(cfg),
        Suite::Axioms => axioms(cfg),
        Suite::Bruhat => bruhat(cfg),
    }
}

pub fn run_all(cfg: &VerifyConfig) -> Vec<SuiteReport> {
    Suite::ALL.iter().map(|&s| run_suite(s, cfg)).collect()
}

fn all_pairs(n_max: usize) -> Vec<(usize, usize)> {
    let mut out = Vec::new();
    for n in 2..=n_max {
        for k in 1..n {
            out.push((k, n));
        }
    }
    out
}

fn pair_seed(cfg: &VerifyConfig, k: usize, n: usize) -> u64 {
    cfg.seed
        .wrapping_mul(0x9E37_79B9_7F4A_7C15)
        .wrapping_add((k * 64 + n) as u64)
}

fn enumerate_plus(k: usize, n: usize) -> Vec<AffinePermutation> {
    AffinePermutation::enumerate_with_cap(n, k as i64, PermClass::Plus, n)
        .expect("enumeration within cap")
}

fn enumerate_bounded(k: usize, n: usize) -> Vec<AffinePermutation> {
    AffinePermutation::enumerate_with_cap(n, k as i64, PermClass::Bounded, n)
        .expect("enumeration within cap")
}

/// Bijection and rank-matrix round-trips, exhaustive per (k, n).
fn roundtrip(cfg: &VerifyConfig) -> SuiteReport {
    let mut cases = 0;
    let mut failures = Vec::new();
    for (k, n) in all_pairs(cfg.n_max) {
        let plus = enumerate_plus(k, n);
        cases += plus.len() as u64;
        failures.extend(plus.par_iter().filter_map(|f| {
            let check = || -> Result<Option<String>, crate::error::Error> {
                let back = bundles::f_of_a(&bundles::a_of_bundle(&bundles::bundle_of_perm(f)?)?)?;
                if &back != f {
                    return Ok(Some(format!("bundle round-trip: {f} -> {back}")));
                }
                Ok(None)
            };
            check().unwrap_or_else(|e| Some(format!("bundle round-trip error at {f}: {e}")))
        }).collect::<Vec<_>>());

        let bounded = enumerate_bounded(k, n);
        cases += bounded.len() as u64;
        for f in &bounded {
            if plus.binary_search(f).is_err() {
                failures.push(format!("{f} is bounded but missing from the plus coset"));
            }
            if !f.classify().bounded {
                failures.push(format!("{f} enumerated as bounded but fails classify"));
            }
        }
        failures.extend(bounded.par_iter().filter_map(|f| {
            let check = || -> Result<Option<String>, crate::error::Error> {
                let r = rankmat::r_of_perm(f)?;
                if !rankmat::check_axioms(&r).passed() {
                    return Ok(Some(format!("axioms fail for r({f})")));
                }
                let back = rankmat::perm_of_r(&r)?;
                if &back != f {
                    return Ok(Some(format!("rank round-trip: {f} -> {back}")));
                }
                Ok(None)
            };
            check().unwrap_or_else(|e| Some(format!("rank round-trip error at {f}: {e}")))
        }).collect::<Vec<_>>());
    }
    SuiteReport { suite: "roundtrip".into(), cases, failures }
}

/// Orbit count and the identity l(f) = dim End(V_f) - p(f), exhaustive.
fn prop_end(cfg: &VerifyConfig) -> SuiteReport {
    let mut cases = 0;
    let mut failures = Vec::new();
    for (k, n) in all_pairs(cfg.n_max) {
        let plus = enumerate_plus(k, n);
        cases += plus.len() as u64;
        failures.extend(plus.par_iter().filter_map(|f| {
            let check = || -> Result<Option<String>, crate::error::Error> {
                let decomp = f.compose_splus(1).orbit_decomposition()?;
                if decomp.orbits.len() != k + 1 {
                    return Ok(Some(format!(
                        "{f}: {} orbits, expected {}",
                        decomp.orbits.len(),
                        k + 1
                    )));
                }
                for o in &decomp.orbits {
                    let span = (o.period * n) as i64;
                    for d in 1..o.period as i64 {
                        let mut shifted: Vec<i64> = o
                            .members_in_block
                            .iter()
                            .map(|&m| (m + d * n as i64 - 1).rem_euclid(span) + 1)
                            .collect();
                        shifted.sort_unstable();
                        if shifted == o.members_in_block {
                            return Ok(Some(format!(
                                "{f}: orbit at {} fixed by shift {d}n below its period",
                                o.rep
                            )));
                        }
                    }
                }
                let bundle = bundles::bundle_of_perm(f)?;
                if bundle.total_rank() != k + 1 {
                    return Ok(Some(format!(
                        "{f}: total rank {} != {}",
                        bundle.total_rank(),
                        k + 1
                    )));
                }
                let ell = f.length()?;
                let end = bundles::end_dim(&bundle);
                let p = decomp.p() as u64;
                if ell + p != end {
                    return Ok(Some(format!("{f}: l = {ell}, end = {end}, p = {p}")));
                }
                Ok(None)
            };
            check().unwrap_or_else(|e| Some(format!("prop_end error at {f}: {e}")))
        }).collect::<Vec<_>>());
    }
    SuiteReport { suite: "prop_end".into(), cases, failures }
}

/// Entrywise equality of the three bivector constructions at random
/// points: chi_twisted = b_prime_st = 2 * fo_massey.
fn brackets(cfg: &VerifyConfig) -> SuiteReport {
    let results: Vec<(u64, Vec<String>)> = BRACKET_PAIRS
        .par_iter()
        .map(|&(k, n)| {
            let mut sampler = Sampler::new(pair_seed(cfg, k, n));
            let mut failures = Vec::new();
            for s in 0..cfg.samples {
                let point = if s % 8 == 7 {
                    sampler.degenerate_point(k, n)
                } else {
                    sampler.grassmann_point(k, n)
                };
                let outcome = (|| -> Result<Option<String>, crate::error::Error> {
                    let tw = poisson::bivector(&point, BivectorMethod::ChiTwisted)?;
                    let bp = poisson::bivector(&point, BivectorMethod::BPrimeSt)?;
                    let fo = poisson::bivector(&point, BivectorMethod::FoMassey)?;
                    if tw.matrix() != bp.matrix() {
                        return Ok(Some(format!(
                            "(k,n)=({k},{n}) sample {s}: chi_twisted != b_prime_st"
                        )));
                    }
                    let two = big(2);
                    for u in 0..tw.dim() {
                        for v in 0..tw.dim() {
                            if tw.matrix().at(u, v) != &(fo.matrix().at(u, v) * &two) {
                                return Ok(Some(format!(
                                    "(k,n)=({k},{n}) sample {s}: chi_twisted != 2 fo_massey at ({u},{v})"
                                )));
                            }
                        }
                    }
                    Ok(None)
                })();
                if let Some(msg) =
                    outcome.unwrap_or_else(|e| Some(format!("(k,n)=({k},{n}) sample {s}: {e}")))
                {
                    failures.push(msg);
                }
            }
            (cfg.samples as u64, failures)
        })
        .collect();
    let cases = results.iter().map(|(c, _)| c).sum();
    let failures = results.into_iter().flat_map(|(_, f)| f).collect();
    SuiteReport { suite: "brackets".into(), cases, failures }
}

/// Rank-stratum identity at sampled points, with gauge and rotation
/// invariance of the rank.
fn ranks(cfg: &VerifyConfig) -> SuiteReport {
    let pairs = all_pairs(cfg.n_max);
    let results: Vec<(u64, Vec<String>)> = pairs
        .par_iter()
        .map(|&(k, n)| {
            let mut sampler = Sampler::new(pair_seed(cfg, k, n).wrapping_add(1));
            let mut failures = Vec::new();
            let mut cases = 0u64;
            for s in 0..cfg.samples {
                let point = if s % 3 == 2 {
                    sampler.degenerate_point(k, n)
                } else {
                    sampler.grassmann_point(k, n)
                };
                cases += 1;
                let gauge = if s % 5 == 0 { Some(sampler.invertible(k)) } else { None };
                let outcome = (|| -> Result<Option<String>, crate::error::Error> {
                    let report = poisson::leaf_report(&point)?;
                    if !report.consistent {
                        return Ok(Some(format!(
                            "(k,n)=({k},{n}) sample {s}: rank {} != predicted {} at f = {}",
                            report.bivector_rank, report.predicted_leaf_dim, report.f
                        )));
                    }
                    if let Some(g) = &gauge {
                        let moved = crate::poisson::GrassmannPoint::new(g.mul(point.matrix()))?;
                        let moved_rank = poisson::skew_rank(&poisson::bivector(
                            &moved,
                            BivectorMethod::ChiTwisted,
                        )?);
                        if moved_rank != report.bivector_rank {
                            return Ok(Some(format!(
                                "(k,n)=({k},{n}) sample {s}: gauge changed rank {} -> {moved_rank}",
                                report.bivector_rank
                            )));
                        }
                    }
                    if s % 7 == 0 {
                        let rotated = rotate_columns_left(&point);
                        let rot_rank = poisson::skew_rank(&poisson::bivector(
                            &rotated,
                            BivectorMethod::ChiTwisted,
                        )?);
                        if rot_rank != report.bivector_rank {
                            return Ok(Some(format!(
                                "(k,n)=({k},{n}) sample {s}: rotation changed rank {} -> {rot_rank}",
                                report.bivector_rank
                            )));
                        }
                    }
                    if s % 11 == 0 {
                        let std = poisson::bivector(&point, BivectorMethod::ChiStandard)?;
                        let tw = poisson::bivector(&point, BivectorMethod::ChiTwisted)?;
                        let cartan = poisson::bivector_cartan_term(&point)?;
                        for u in 0..std.dim() {
                            for v in 0..std.dim() {
                                let sum = std.matrix().at(u, v) + cartan.matrix().at(u, v);
                                if &sum != tw.matrix().at(u, v) {
                                    return Ok(Some(format!(
                                        "(k,n)=({k},{n}) sample {s}: twist term is not additive"
                                    )));
                                }
                            }
                        }
                    }
                    Ok(None)
                })();
                if let Some(msg) =
                    outcome.unwrap_or_else(|e| Some(format!("(k,n)=({k},{n}) sample {s}: {e}")))
                {
                    failures.push(msg);
                }
            }
            (cases, failures)
        })
        .collect();
    let cases = results.iter().map(|(c, _)| c).sum();
    let failures = results.into_iter().flat_map(|(_, f)| f).collect();
    SuiteReport { suite: "ranks".into(), cases, failures }
}

/// Symbolic Jacobi certificates for the twisted chart bivectors.
fn jacobi(cfg: &VerifyConfig) -> SuiteReport {
    let mut cases = 0;
    let mut failures = Vec::new();
    for &(k, n) in &cfg.jacobi_pairs {
        cases += 1;
        match poisson::chart_bivector(k, n, true) {
            Ok(pb) => {
                let dim = pb.dim();
                for u in 0..dim {
                    for v in 0..dim {
                        if pb.coeff(u, v).total_degree() > 2 {
                            failures.push(format!("({k},{n}): coefficient ({u},{v}) above quadratic"));
                        }
                        if pb.coeff(u, v).clone() != pb.coeff(v, u).neg() {
                            failures.push(format!("({k},{n}): coefficient array not antisymmetric"));
                        }
                    }
                }
                let j = poisson::schouten_jacobiator(&pb);
                if !j.is_identically_zero() {
                    let bad = j
                        .entries()
                        .iter()
                        .find(|(_, p)| !p.is_zero())
                        .map(|((a, b, c), _)| format!("({a},{b},{c})"))
                        .unwrap_or_default();
                    failures.push(format!("({k},{n}): Jacobiator nonzero at {bad}"));
                }
            }
            Err(e) => failures.push(format!("({k},{n}): {e}")),
        }
    }
    SuiteReport { suite: "jacobi".into(), cases, failures }
}

/// Exhaustive axiom checks plus sampled matrix consistency: the rank
/// matrix of a random point agrees with the rank matrix of its
/// permutation, and f_M is gauge invariant and obeys the rotation law.
fn axioms(cfg: &VerifyConfig) -> SuiteReport {
    let mut cases = 0;
    let mut failures = Vec::new();
    for (k, n) in all_pairs(cfg.n_max) {
        let bounded = enumerate_bounded(k, n);
        cases += bounded.len() as u64;
        failures.extend(
            bounded
                .par_iter()
                .filter_map(|f| {
                    let r = match rankmat::r_of_perm(f) {
                        Ok(r) => r,
                        Err(e) => return Some(format!("r_of_perm({f}): {e}")),
                    };
                    let report = rankmat::check_axioms(&r);
                    (!report.passed()).then(|| {
                        format!("axioms fail for {f}: {:?}", report.violations.first())
                    })
                })
                .collect::<Vec<_>>(),
        );
    }
    let pairs = all_pairs(cfg.n_max);
    let sampled: Vec<(u64, Vec<String>)> = pairs
        .par_iter()
        .map(|&(k, n)| {
            let mut sampler = Sampler::new(pair_seed(cfg, k, n).wrapping_add(2));
            let mut failures = Vec::new();
            for s in 0..cfg.samples {
                let point = if s % 3 == 2 {
                    sampler.degenerate_point(k, n)
                } else {
                    sampler.grassmann_point(k, n)
                };
                let gauge = sampler.invertible(k);
                let outcome = (|| -> Result<Option<String>, crate::error::Error> {
                    let f = rankmat::f_of_matrix(&point)?;
                    let via_matrix = rankmat::r_of_matrix(&point)?;
                    let via_perm = rankmat::r_of_perm(&f)?;
                    let nn = n as i64;
                    for i in 1..=nn {
                        for j in i - 1..=i + nn - 1 {
                            if via_matrix.r(i, j) != via_perm.r(i, j) {
                                return Ok(Some(format!(
                                    "(k,n)=({k},{n}) sample {s}: r(M) != r(f_M) at ({i},{j})"
                                )));
                            }
                        }
                    }
                    let moved =
                        crate::poisson::GrassmannPoint::new(gauge.mul(point.matrix()))?;
                    if rankmat::f_of_matrix(&moved)? != f {
                        return Ok(Some(format!(
                            "(k,n)=({k},{n}) sample {s}: f_M not gauge invariant"
                        )));
                    }
                    let rotated = rotate_columns_left(&point);
                    let f_rot = rankmat::f_of_matrix(&rotated)?;
                    for i in 1..=nn {
                        if f_rot.eval(i) != f.eval(i + 1) - 1 {
                            return Ok(Some(format!(
                                "(k,n)=({k},{n}) sample {s}: rotation law fails at i = {i}"
                            )));
                        }
                    }
                    Ok(None)
                })();
                if let Some(msg) =
                    outcome.unwrap_or_else(|e| Some(format!("(k,n)=({k},{n}) sample {s}: {e}")))
                {
                    failures.push(msg);
                }
            }
            (cfg.samples as u64, failures)
        })
        .collect();
    cases += sampled.iter().map(|(c, _)| c).sum::<u64>();
    failures.extend(sampled.into_iter().flat_map(|(_, f)| f));
    SuiteReport { suite: "axioms".into(), cases, failures }
}

/// The r-matrix order equals the transitive closure of the descent-swap
/// relation on B(k,n), with the shift power as unique minimum, and the
/// covering predicate matches the closure.
fn bruhat(cfg: &VerifyConfig) -> SuiteReport {
    let mut cases = 0;
    let mut failures = Vec::new();
    for (k, n) in all_pairs(cfg.n_max.min(4)) {
        let b = enumerate_bounded(k, n);
        let size = b.len();
        cases += (size * size) as u64;
        let rmats: Vec<_> = b
            .iter()
            .map(|f| rankmat::r_of_perm(f).expect("bounded permutations have rank matrices"))
            .collect();
        let leq = |i: usize, j: usize| rankmat::band_dominates(&rmats[i], &rmats[j]);
        // closure of single descent swaps, g below f
        let index_of = |g: &AffinePermutation| b.binary_search(g).ok();
        let mut reach = vec![vec![false; size]; size];
        let mut swap_edges = Vec::new();
        for (fi, f) in b.iter().enumerate() {
            reach[fi][fi] = true;
            for g in f.swap_descents() {
                match index_of(&g) {
                    Some(gi) => {
                        reach[gi][fi] = true;
                        swap_edges.push((fi, gi));
                    }
                    None => failures.push(format!(
                        "B({k},{n}): descent swap of {f} leaves the bounded set"
                    )),
                }
            }
        }
        for mid in 0..size {
            for lo in 0..size {
                if reach[lo][mid] {
                    let via = reach[mid].clone();
                    for (hi, &r) in via.iter().enumerate() {
                        if r {
                            reach[lo][hi] = true;
                        }
                    }
                }
            }
        }
        for lo in 0..size {
            for hi in 0..size {
                if reach[lo][hi] != leq(lo, hi) {
                    failures.push(format!(
                        "B({k},{n}): closure and r-matrix order disagree on {} <= {}",
                        b[lo], b[hi]
                    ));
                }
            }
        }
        let min = AffinePermutation::splus_power(n, k as i64);
        let min_idx = index_of(&min).expect("shift power is bounded");
        for (j, g) in b.iter().enumerate() {
            if !leq(min_idx, j) {
                failures.push(format!("B({k},{n}): {min} is not below {g}"));
            }
        }
        for (i, f) in b.iter().enumerate() {
            if i != min_idx && (0..size).all(|j| leq(i, j)) {
                failures.push(format!("B({k},{n}): second minimum {f}"));
            }
        }
        // covering predicate against the closure
        for &(fi, gi) in &swap_edges {
            cases += 1;
            let is_cover = (0..size)
                .all(|h| h == fi || h == gi || !(reach[gi][h] && reach[h][fi]));
            match b[fi].covers(&b[gi]) {
                Ok(got) if got == is_cover => {}
                Ok(got) => failures.push(format!(
                    "B({k},{n}): covers({}, {}) = {got}, closure says {is_cover}",
                    b[fi], b[gi]
                )),
                Err(e) => failures.push(format!("covers({}, {}): {e}", b[fi], b[gi])),
            }
        }
    }
    SuiteReport { suite: "bruhat".into(), cases, failures }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn small_cfg() -> VerifyConfig {
        VerifyConfig { seed: 7, samples: 4, n_max: 4, jacobi_pairs: vec![(1, 2), (1, 3)] }
    }

    #[test]
    fn all_suites_pass_at_small_scale() {
        for report in run_all(&small_cfg()) {
            assert!(
                report.passed(),
                "suite {} failed: {:?}",
                report.suite,
                report.failures.first()
            );
            assert!(report.cases > 0);
        }
    }

    #[test]
    fn suite_names_round_trip() {
        for s in Suite::ALL {
            assert_eq!(Suite::parse(s.name()), Some(s));
        }
        assert_eq!(Suite::parse("nope"), None);
    }
}
