use std::collections::{BTreeSet, HashMap};

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::Zero;
use proptest::prelude::*;

use partition_topology::combinatorics::{beta, Knapsack, Permutation, PointedComposition, PointedIntegerPartition};
use partition_topology::complex::{
    build_delta_c, build_lambda, reduced_homology, sigma, sigma_inverse, ChainElement, Face, SimplicialComplex,
};
use partition_topology::morse::build_matching;
use partition_topology::poset::build_subposet_pi_c;
use partition_topology::representation::{cycle_g_alpha, relabel_chain};
use partition_topology::Caps;

/// Any pointed composition of n ≤ `max_n`, the last part possibly zero.
fn pointed_composition(max_n: usize) -> impl Strategy<Value = PointedComposition> {
    (1..=max_n).prop_flat_map(|n| (Just(n), 0..(1u64 << n))).prop_map(|(n, mask)| PointedComposition::from_partial_sums(n, mask))
}

fn positive_composition(max_n: usize) -> impl Strategy<Value = PointedComposition> {
    (1..=max_n)
        .prop_flat_map(|n| (Just(n), 0..(1u64 << (n - 1))))
        .prop_map(|(n, mask)| PointedComposition::from_partial_sums(n, mask))
}

fn permutation(n: usize) -> impl Strategy<Value = Permutation> {
    Just((1..=n).collect::<Vec<_>>()).prop_shuffle().prop_map(|w| Permutation::new(w).unwrap())
}

fn composition_and_permutation(max_n: usize) -> impl Strategy<Value = (PointedComposition, Permutation)> {
    positive_composition(max_n).prop_flat_map(|c| {
        let n = c.n();
        (Just(c), permutation(n))
    })
}

/// Knapsack pairs with n ≤ 6.
fn knapsack_pair() -> impl Strategy<Value = PointedIntegerPartition> {
    let pairs: Vec<PointedIntegerPartition> = (1..=6)
        .flat_map(PointedIntegerPartition::all)
        .filter(|p| partition_topology::combinatorics::is_knapsack(&p.lambda))
        .collect();
    proptest::sample::select(pairs)
}

/// Rank over Q by Gaussian elimination, from the face boundaries directly.
fn rational_rank<F: Face>(k: &SimplicialComplex<F>, dim: isize) -> usize {
    let rows: Vec<&F> = k.faces(dim).iter().collect();
    let cols: HashMap<&F, usize> = k.faces(dim - 1).iter().enumerate().map(|(i, f)| (f, i)).collect();
    let mut m: Vec<Vec<BigRational>> = rows
        .iter()
        .map(|f| {
            let mut row = vec![BigRational::zero(); cols.len()];
            for (g, s) in ChainElement::from_face((*f).clone()).boundary().terms() {
                row[cols[g]] = BigRational::from_integer(BigInt::from(s));
            }
            row
        })
        .collect();
    let mut rank = 0;
    for col in 0..cols.len() {
        let Some(p) = (rank..m.len()).find(|&r| !m[r][col].is_zero()) else { continue };
        m.swap(rank, p);
        let pivot = m[rank][col].clone();
        for r in 0..m.len() {
            if r != rank && !m[r][col].is_zero() {
                let f = &m[r][col] / &pivot;
                let pivot_row = m[rank].clone();
                for (x, y) in m[r].iter_mut().zip(pivot_row) {
                    *x -= &f * y;
                }
            }
        }
        rank += 1;
    }
    rank
}

/// Reduced Betti numbers over Q, dimensions −1 to dim.
fn rational_betti<F: Face>(k: &SimplicialComplex<F>) -> Vec<usize> {
    (-1..=k.dim())
        .map(|d| {
            let faces = k.faces(d).len();
            let out = if d >= 0 { rational_rank(k, d) } else { 0 };
            let inc = rational_rank(k, d + 1);
            faces - out - inc
        })
        .collect()
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(64))]

    #[test]
    fn complement_is_an_involution(c in positive_composition(8)) {
        let once = c.complement().unwrap();
        prop_assert_eq!(once.complement().unwrap(), c.clone());
        prop_assert_eq!(once.len() + c.len(), c.n() + 1);
    }

    #[test]
    fn refinement_reverses_under_complement(a in positive_composition(6), mask in any::<u64>()) {
        let n = a.n();
        let b = PointedComposition::from_partial_sums(n, a.partial_sums() & mask);
        prop_assert!(a.leq(&b).unwrap());
        prop_assert!(b.complement().unwrap().leq(&a.complement().unwrap()).unwrap());
    }

    #[test]
    fn descent_classes_are_realised((c, _a) in composition_and_permutation(6)) {
        let perms = Permutation::with_descent_composition(&c);
        prop_assert_eq!(perms.len() as u64, beta(&c, &Caps::default()).unwrap());
        prop_assert!(perms.iter().all(|p| p.descent_composition() == c));
    }

    #[test]
    fn sigma_round_trips((c, a) in composition_and_permutation(6)) {
        let f = sigma(&a, &c).unwrap();
        let min = sigma_inverse(&f);
        prop_assert_eq!(sigma(&min, &c).unwrap(), f);
        prop_assert!(min.weak_bruhat_leq(&a));
    }

    #[test]
    fn inverse_composes_to_identity(a in (1..=7usize).prop_flat_map(permutation)) {
        let n = a.len();
        prop_assert_eq!(a.compose(&a.inverse()), Permutation::identity(n));
        prop_assert_eq!(a.sign() * a.inverse().sign(), 1);
    }

    #[test]
    fn integer_homology_agrees_with_rational_rank(c in pointed_composition(5)) {
        let k = build_delta_c(&c, &Caps::default()).unwrap();
        let h = reduced_homology(&k);
        let betti: Vec<usize> = (-1..=k.dim()).map(|d| h.betti_at(d)).collect();
        prop_assert_eq!(betti, rational_betti(&k));
    }

    #[test]
    fn euler_characteristic_matches_f_vector(c in pointed_composition(6)) {
        let k = build_delta_c(&c, &Caps::default()).unwrap();
        let from_faces: i64 = k.f_vector().iter().enumerate().map(|(i, &f)| if i % 2 == 1 { f as i64 } else { -(f as i64) }).sum();
        prop_assert_eq!(reduced_homology(&k).reduced_euler_characteristic(), from_faces);
    }

    #[test]
    fn delta_is_symmetric((c, w) in composition_and_permutation(5)) {
        let k = build_delta_c(&c, &Caps::default()).unwrap();
        let a: BTreeSet<String> = k.all_faces().map(|f| f.to_string()).collect();
        let b: BTreeSet<String> = k.relabel(&w).all_faces().map(|f| f.to_string()).collect();
        prop_assert_eq!(a, b);
    }

    #[test]
    fn relabelled_cycles_are_cycles((c, w) in composition_and_permutation(5)) {
        let alpha = Permutation::with_descent_composition(&c)[0].clone();
        let g = relabel_chain(&cycle_g_alpha(&alpha, &c).unwrap(), &w);
        prop_assert!(g.boundary().is_zero());
    }

    #[test]
    fn mobius_of_pi_c_has_sign_of_length(c in pointed_composition(5)) {
        let caps = Caps::default();
        let mu = build_subposet_pi_c(&c, &caps).unwrap().poset.with_bottom("0").mobius().unwrap();
        let b = beta(&c, &caps).unwrap() as i64;
        prop_assert_eq!(mu, if c.len() % 2 == 0 { b } else { -b });
    }

    #[test]
    fn epsilon_is_in_w_with_positive_sign(p in knapsack_pair()) {
        let k = Knapsack::new(&p.lambda).unwrap();
        for d in k.v_set(p.m) {
            let e = k.epsilon(&d, p.m).unwrap();
            prop_assert!(e.leq(&d).unwrap());
            let w = k.w_set(&d, p.m).unwrap();
            prop_assert!(w.contains(&(e, 1)));
            prop_assert!(w.iter().all(|(c, _)| c.leq(&d).unwrap()));
        }
    }

    #[test]
    fn morse_matching_counts_critical_cells(p in knapsack_pair()) {
        let caps = Caps::default();
        let m = build_matching(&p, &caps).unwrap();
        let h = reduced_homology(&build_lambda(&p, &caps).unwrap());
        let total: usize = (-1..=h.betti.len() as isize).map(|d| h.betti_at(d)).sum();
        prop_assert_eq!(m.critical_cells().len(), total);
    }
}

#[test]
fn beta_sums_to_factorial() {
    let caps = Caps::default();
    let mut fact = 1u64;
    for n in 1..=7 {
        fact *= n as u64;
        let total: u64 = PointedComposition::all_positive(n).iter().map(|c| beta(c, &caps).unwrap()).sum();
        assert_eq!(total, fact, "n = {n}");
    }
}

#[test]
fn composition_order_is_boolean() {
    for n in 1..=6 {
        let all = PointedComposition::all_positive(n);
        assert_eq!(all.len(), 1 << (n - 1));
        let comparable = all.iter().flat_map(|a| all.iter().map(move |b| (a, b))).filter(|(a, b)| a.leq(b).unwrap()).count();
        assert_eq!(comparable, 3usize.pow(n as u32 - 1));
    }
}
