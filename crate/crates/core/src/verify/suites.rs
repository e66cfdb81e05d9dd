use std::collections::BTreeSet;

use rand::seq::SliceRandom;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde_json::json;

use super::{Job, Outcome, Suite, VerifyOptions};
use crate::caps::Caps;
use crate::combinatorics::{beta, beta_sum, is_knapsack, Knapsack, Permutation, PointedComposition, PointedIntegerPartition};
use crate::complex::{
    build_delta_c, build_lambda, find_shelling_order, lex_sigma_inverse_order, reduced_homology, sigma, verify_shelling, Face,
    HomologyProfile, ShellingOutcome,
};
use crate::error::Result;
use crate::morse::{build_matching, critical_cells, verify_acyclic, MorseMatching};
use crate::poset::{build_divisible_partition_lattice, build_filter_pi_lambda_m, build_subposet_pi_c, FinitePoset};
use crate::representation::{
    build_sigma_alpha, column_stabilizer, count_standard_tableaux, group_action_closure, psi_equivariance_defect, row_stabilizer,
    verify_cycle_basis, verify_knapsack_cycle_basis, verify_psi_images,
};

pub(super) fn check_caps(suite: Suite, opts: &VerifyOptions) -> Result<()> {
    let c = &opts.caps;
    let n = opts.max_n;
    match suite {
        Suite::Mobius => Caps::check(n, c.poset, "verification suite mobius"),
        Suite::Homology => {
            Caps::check(n, c.delta, "verification suite homology")?;
            Caps::check(n, c.lambda, "verification suite homology")
        }
        Suite::Morse => {
            Caps::check(n, c.lambda, "verification suite morse")?;
            Caps::check(n, c.beta, "verification suite morse")
        }
        Suite::Cycles => {
            Caps::check(n, c.delta, "verification suite cycles")?;
            Caps::check(n, c.lambda, "verification suite cycles")?;
            Caps::check(n, c.beta, "verification suite cycles")
        }
        Suite::Specht => Caps::check(n, c.beta, "verification suite specht"),
        Suite::All => Suite::EACH.iter().try_for_each(|&s| check_caps(s, opts)),
    }
}

fn compositions(max_n: usize) -> Vec<PointedComposition> {
    (1..=max_n).flat_map(PointedComposition::all).collect()
}

fn positive_compositions(max_n: usize) -> Vec<PointedComposition> {
    (1..=max_n).flat_map(PointedComposition::all_positive).collect()
}

fn knapsack_pairs(max_n: usize) -> Vec<PointedIntegerPartition> {
    (1..=max_n).flat_map(PointedIntegerPartition::all).filter(|p| is_knapsack(&p.lambda)).collect()
}

fn sign(k: usize) -> i64 {
    if k.is_multiple_of(2) {
        1
    } else {
        -1
    }
}

/// `Σ_{d ∈ V(λ,m̲)} β(d)`.
fn v_beta_sum(p: &PointedIntegerPartition, caps: &Caps) -> Result<u64> {
    let k = Knapsack::new(&p.lambda)?;
    beta_sum(&k.v_set(p.m), caps)
}

/// Nonzero reduced groups as `(dimension, rank, torsion)`, for comparing
/// complexes of different dimension.
pub fn homology_signature(h: &HomologyProfile) -> Vec<(isize, usize, Vec<u64>)> {
    let top = h.betti.len() as isize;
    (-1..top).map(|d| (d, h.betti_at(d), h.torsion_at(d).to_vec())).filter(|(_, b, t)| *b > 0 || !t.is_empty()).collect()
}

/// Alternating (up-down) permutations `w₁ < w₂ > w₃ < ⋯` of `[n]`, by
/// brute force.
pub fn alternating_permutations(n: usize) -> u64 {
    Permutation::all(n).filter(|p| p.word().windows(2).enumerate().all(|(i, w)| (w[0] < w[1]) == (i % 2 == 0))).count() as u64
}

fn with_bottom_mobius(p: &FinitePoset) -> Result<i64> {
    p.with_bottom("0̂").mobius()
}

fn open_top_homology(p: &FinitePoset) -> HomologyProfile {
    let top = p.maximum().expect("these posets have a top");
    reduced_homology(&p.without(top).order_complex())
}

pub(super) fn jobs(suite: Suite, opts: &VerifyOptions) -> Vec<Job> {
    let n = opts.max_n;
    let caps = opts.caps;
    let mut jobs = Vec::new();
    match suite {
        Suite::Mobius => {
            for c in compositions(n) {
                jobs.push(Job::new(format!("mobius/pi_c/{c}"), "μ(Π•_c ∪ {0̂}) = (−1)^k β(c)", move || {
                    let mu = with_bottom_mobius(&build_subposet_pi_c(&c, &caps)?.poset)?;
                    let expected = sign(c.len()) * beta(&c, &caps)? as i64;
                    Ok((mu == expected, json!({ "mobius": mu, "expected": expected })))
                }));
            }
            for p in knapsack_pairs(n) {
                jobs.push(Job::new(
                    format!("mobius/pi_lambda/{p}"),
                    "μ(Π•_{λ,m̲} ∪ {0̂}) = (−1)^{k+1} Σ_{d∈V} β(d), k = |λ|",
                    move || {
                        let mu = with_bottom_mobius(&build_filter_pi_lambda_m(&p, &caps, false)?.poset)?;
                        let expected = sign(p.lambda.len() + 1) * v_beta_sum(&p, &caps)? as i64;
                        Ok((mu == expected, json!({ "mobius": mu, "expected": expected })))
                    },
                ));
            }
            for m in (1..=n).step_by(2) {
                jobs.push(Job::new(
                    format!("mobius/euler/{m}"),
                    "Π•_(2,…,2,1) ≅ Π²_{n+1} and μ = (−1)^{(n+1)/2} E_n",
                    move || euler_claim(m, &caps),
                ));
            }
        }
        Suite::Homology => {
            for c in compositions(n) {
                let c2 = c.clone();
                jobs.push(Job::new(
                    format!("homology/delta/{c}"),
                    "H̃(Δ_c) is free of rank β(c) in dimension k−2 and zero elsewhere (zero when c_k = 0)",
                    move || {
                        let h = reduced_homology(&build_delta_c(&c, &caps)?);
                        let rank = if c.has_positive_last() { beta(&c, &caps)? as usize } else { 0 };
                        Ok((h.is_concentrated(c.len() as isize - 2, rank), json!({ "homology": h, "expected_rank": rank })))
                    },
                ));
                let c = c2;
                jobs.push(Job::new(format!("quillen/pi_c/{c}"), "H̃(Δ(Π•_c − {1̂})) = H̃(Δ_c)", move || {
                    Caps::check(c.n(), caps.order_complex, "order complex of Π•_c")?;
                    let poset = open_top_homology(&build_subposet_pi_c(&c, &caps)?.poset);
                    let delta = reduced_homology(&build_delta_c(&c, &caps)?);
                    let (a, b) = (homology_signature(&poset), homology_signature(&delta));
                    Ok((a == b, json!({ "order_complex": a, "delta": b })))
                }));
            }
            for c in positive_compositions(n) {
                jobs.push(Job::new(
                    format!("shelling/{c}"),
                    "lex order on σ⁻¹ shells Δ_c with spanning facets {σ(α) : Des(α) = c}",
                    move || shelling_claim(&c, &caps),
                ));
            }
            for p in knapsack_pairs(n) {
                let p2 = p.clone();
                jobs.push(Job::new(
                    format!("homology/lambda/{p}"),
                    "H̃(Λ_{λ,m̲}) is free of rank Σ_{d∈V} β(d) in dimension |λ|−1 and zero elsewhere",
                    move || {
                        let h = reduced_homology(&build_lambda(&p, &caps)?);
                        let rank = v_beta_sum(&p, &caps)? as usize;
                        let ok = if p.m == 0 { h.is_acyclic() } else { h.is_concentrated(p.lambda.len() as isize - 1, rank) };
                        Ok((ok, json!({ "homology": h, "expected_rank": rank })))
                    },
                ));
                let p = p2;
                jobs.push(Job::new(
                    format!("quillen/pi_lambda/{p}"),
                    "H̃(Δ(Π•_{λ,m̲} − {1̂})) = H̃(Λ_{λ,m̲})",
                    move || {
                        Caps::check(p.n(), caps.order_complex, "order complex of Π•_{λ,m̲}")?;
                        let poset = open_top_homology(&build_filter_pi_lambda_m(&p, &caps, false)?.poset);
                        let lambda = reduced_homology(&build_lambda(&p, &caps)?);
                        let (a, b) = (homology_signature(&poset), homology_signature(&lambda));
                        Ok((a == b, json!({ "order_complex": a, "lambda": b })))
                    },
                ));
            }
        }
        Suite::Morse => {
            for p in knapsack_pairs(n) {
                jobs.push(Job::new(
                    format!("morse/{p}"),
                    "the matching on Λ_{λ,m̲} is an acyclic involution with critical cells {σ(α, ε(d)) : d ∈ V, Des(α) = d}",
                    move || morse_claim(&p, &caps),
                ));
            }
            if n >= 4 {
                jobs.push(Job::new("morse/table/{2,1,_1}", "critical cells of {2,1,1̲} = 11", move || {
                    let p = PointedIntegerPartition::new(vec![2, 1], 1);
                    let m = build_matching(&p, &caps)?;
                    let found: BTreeSet<String> = m.critical_cells().iter().map(|f| f.to_string()).collect();
                    let expected: BTreeSet<String> = TABLE_211.iter().map(|s| s.to_string()).collect();
                    let dims_ok = m.critical_cells().iter().all(|f| f.dim() == 1);
                    Ok((found == expected && dims_ok && verify_acyclic(&m).acyclic, json!({ "critical_cells": found })))
                }));
            }
        }
        Suite::Cycles => {
            for c in positive_compositions(n) {
                jobs.push(Job::new(
                    format!("cycles/delta/{c}"),
                    "{g_α : Des(α) = c} is a unitriangular basis of H̃_{k−2}(Δ_c)",
                    move || {
                        let r = verify_cycle_basis(&c, &caps)?;
                        Ok((r.passed(), serde_json::to_value(&r).expect("serializable")))
                    },
                ));
            }
            for p in knapsack_pairs(n).into_iter().filter(|p| p.m > 0) {
                jobs.push(Job::new(
                    format!("cycles/lambda/{p}"),
                    "{g_{α,d}} is a unitriangular basis of H̃_{|λ|−1}(Λ_{λ,m̲})",
                    move || {
                        let r = verify_knapsack_cycle_basis(&p, &caps)?;
                        Ok((r.passed(), serde_json::to_value(&r).expect("serializable")))
                    },
                ));
            }
            for m in 1..=n {
                let seed = opts.seed;
                jobs.push(Job::new(format!("sigma_alpha/{m}"), "Σ_α is a (k−2)-sphere (20 seeded samples)", move || {
                    sigma_alpha_claim(m, seed)
                }));
                jobs.push(Job::new(
                    format!("bruhat/{m}"),
                    "α∘γ ≤ α for γ in the column stabilizer and α∘γ ≥ α in the row stabilizer, Des(α) = c",
                    move || bruhat_claim(m),
                ));
            }
        }
        Suite::Specht => {
            for c in positive_compositions(n) {
                let c2 = c.clone();
                jobs.push(Job::new(format!("syt/{c}"), "#SYT(border strip of c) = β(c)", move || {
                    let (s, b) = (count_standard_tableaux(&c)?, beta(&c, &caps)?);
                    Ok((s == b, json!({ "syt": s, "beta": b })))
                }));
                let c = c2;
                jobs.push(Job::new(format!("closure/{c}"), "span{g_α} is closed under S_n", move || {
                    let r = group_action_closure(&c, &caps)?;
                    Ok((r.passed(), serde_json::to_value(&r).expect("serializable")))
                }));
            }
            for p in knapsack_pairs(n).into_iter().filter(|p| p.m > 0) {
                let p2 = p.clone();
                jobs.push(Job::new(format!("psi/{p}"), "Ψ(e_t) = g_{α,d} for every basis label", move || {
                    let checks = verify_psi_images(&p, &caps)?;
                    let bad: Vec<_> = checks.iter().filter(|c| !c.equal).collect();
                    Ok((bad.is_empty(), json!({ "labels": checks.len(), "mismatches": bad })))
                }));
                let p = p2;
                jobs.push(Job::new(format!("psi_equivariance/{p}"), "Ψ(ω·s) = ω·Ψ(s)", move || {
                    let defect = psi_equivariance_defect(&p, &caps)?;
                    Ok((defect.is_none(), json!({ "counterexample": defect })))
                }));
            }
        }
        Suite::All => {
            for s in Suite::EACH {
                jobs.extend(self::jobs(s, opts));
            }
        }
    }
    jobs
}

const TABLE_211: [&str; 11] =
    ["2-14-3", "3-14-2", "3-24-1", "4-13-2", "4-23-1", "14-3-2", "24-3-1", "34-2-1", "12-4-3", "13-4-2", "23-4-1"];

fn euler_claim(n: usize, caps: &Caps) -> Outcome {
    let mut parts = vec![2; n / 2];
    parts.push(1);
    let c = PointedComposition::new(parts)?;
    let e = alternating_permutations(n) as i64;
    let expected = sign(n.div_ceil(2)) * e;
    let pointed = build_subposet_pi_c(&c, caps)?.poset;
    let divisible = build_divisible_partition_lattice(n + 1, 2, caps)?;
    let same_shape = pointed.len() == divisible.len() && pointed.covers().len() == divisible.covers().len();
    let (mu_pointed, mu_div) = (with_bottom_mobius(&pointed)?, with_bottom_mobius(&divisible)?);
    Ok((
        same_shape && mu_pointed == expected && mu_div == expected,
        json!({ "composition": c.to_string(), "euler": e, "mobius_pointed": mu_pointed, "mobius_divisible": mu_div, "expected": expected }),
    ))
}

fn shelling_claim(c: &PointedComposition, caps: &Caps) -> Outcome {
    let k = build_delta_c(c, caps)?;
    let order = lex_sigma_inverse_order(&k);
    let expected: BTreeSet<String> =
        Permutation::with_descent_composition(c).iter().map(|a| sigma(a, c).map(|f| f.to_string())).collect::<Result<_>>()?;
    match verify_shelling(&k, &order)? {
        ShellingOutcome::Shelling { spanning } => {
            let found: BTreeSet<String> = spanning.iter().map(|&i| order[i].to_string()).collect();
            Ok((found == expected, json!({ "order_discrepancy": false, "spanning": found, "expected": expected })))
        }
        ShellingOutcome::Fails { index } => {
            let fallback = find_shelling_order(&k, 1_000_000)?;
            let certified = match &fallback {
                Some(o) => verify_shelling(&k, o)?.is_shelling(),
                None => false,
            };
            Ok((certified, json!({ "order_discrepancy": true, "lex_fails_at": index, "fallback_certified": certified })))
        }
    }
}

fn morse_claim(p: &PointedIntegerPartition, caps: &Caps) -> Outcome {
    let m: MorseMatching<_> = build_matching(p, caps)?;
    let report = verify_acyclic(&m);
    let cells = critical_cells(&m, p, caps)?;
    let expected = v_beta_sum(p, caps)? as usize;
    let top = p.lambda.len() as isize - 1;
    let dims_ok = p.m == 0 || cells.iter().all(|f| f.dim() == top);
    let ok = report.acyclic && report.consistent() && cells.len() == expected && dims_ok;
    Ok((
        ok,
        json!({
            "critical_cells": cells.len(),
            "expected": expected,
            "acyclic": report.acyclic,
            "cycle": report.cycle,
            "type_certificate": report.type_certificate,
            "type_violation": report.type_violation,
        }),
    ))
}

fn sigma_alpha_claim(n: usize, seed: u64) -> Outcome {
    let mut rng = ChaCha8Rng::seed_from_u64(seed.wrapping_mul(0x9e37_79b9_7f4a_7c15) ^ n as u64);
    let mut failures = Vec::new();
    for _ in 0..20 {
        let mask = if n > 1 { rng.random_range(0..1u64 << (n - 1)) } else { 0 };
        let c = PointedComposition::from_partial_sums(n, mask);
        let mut word: Vec<usize> = (1..=n).collect();
        word.shuffle(&mut rng);
        let alpha = Permutation::new(word)?;
        let h = reduced_homology(&build_sigma_alpha(&alpha, &c)?);
        if !h.is_concentrated(c.len() as isize - 2, 1) {
            failures.push(json!({ "alpha": alpha.to_string(), "c": c.to_string(), "homology": h }));
        }
    }
    Ok((failures.is_empty(), json!({ "samples": 20, "seed": seed, "failures": failures })))
}

fn bruhat_claim(n: usize) -> Outcome {
    let mut failures = Vec::new();
    for c in PointedComposition::all_positive(n) {
        let cols = column_stabilizer(&c)?;
        let rows = row_stabilizer(&c);
        for alpha in Permutation::with_descent_composition(&c) {
            for (g, _) in &cols {
                if !alpha.compose(g).weak_bruhat_leq(&alpha) {
                    failures.push(
                        json!({ "c": c.to_string(), "alpha": alpha.to_string(), "gamma": g.to_string(), "side": "column" }),
                    );
                }
            }
            for (g, _) in &rows {
                if !alpha.weak_bruhat_leq(&alpha.compose(g)) {
                    failures
                        .push(json!({ "c": c.to_string(), "alpha": alpha.to_string(), "gamma": g.to_string(), "side": "row" }));
                }
            }
        }
    }
    Ok((failures.is_empty(), json!({ "failures": failures })))
}
