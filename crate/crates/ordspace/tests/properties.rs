//! Property tests for the algebraic invariants of every layer.

mod common;

use proptest::prelude::*;
use rand::rngs::StdRng;
use rand::{Rng, SeedableRng};

use ordspace::gf2::Eliminator;
use ordspace::ppform::{evaluate, evaluate_on_subspace, parse_formula, Binding};
use ordspace::ratpoly::{
    coprime_basis, count_roots_in, gcd, isolate_roots, parse_polynomial, refine_root,
    squarefree_part, Polynomial, Rational,
};
use ordspace::space::{
    in_value_set, subspace_generated, value_set, verify_axioms, FiniteSpace, GroupElement,
};
use ordspace::structure::{direct_sum, group_extension, make_fan, one_point_space, verify_space};

fn rational(n: i64, d: u32) -> Rational {
    format!("{}/{}", n, d).parse().unwrap()
}

/// Random polynomial as a product of small planted factors and a constant.
fn planted_strategy() -> impl Strategy<Value = Polynomial> {
    (
        prop::collection::vec((-4i64..=4, 1u32..=3, 1u32..=2), 0..4),
        -5i64..=5,
    )
        .prop_map(|(factors, c)| {
            let mut p = Polynomial::constant(Rational::from_integer(
                if c == 0 { 1.into() } else { c.into() },
            ));
            for (root_num, root_den, exp) in factors {
                let line = Polynomial::line(&rational(root_num, root_den));
                p = p.mul(&line.pow(exp));
            }
            p
        })
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(64))]

    #[test]
    fn squarefree_part_has_constant_gcd_with_derivative(p in planted_strategy()) {
        let sf = squarefree_part(&p).unwrap();
        prop_assert!(gcd(&sf, &sf.derivative()).is_constant());
    }

    #[test]
    fn polynomial_text_round_trips(p in planted_strategy()) {
        let text = p.to_string();
        prop_assert_eq!(parse_polynomial(&text).unwrap(), p);
    }

    #[test]
    fn coprime_basis_reconstructs_exactly(
        ps in prop::collection::vec(planted_strategy(), 1..4)
    ) {
        let cb = coprime_basis(&ps).unwrap();
        for (i, q) in cb.basis.iter().enumerate() {
            prop_assert!(gcd(q, &q.derivative()).is_constant());
            for r in cb.basis.iter().skip(i + 1) {
                prop_assert!(gcd(q, r).is_constant());
            }
        }
        for (input, expr) in ps.iter().zip(&cb.expressions) {
            let mut prod = Polynomial::constant(expr.constant.clone());
            for (q, &m) in cb.basis.iter().zip(&expr.multiplicities) {
                prod = prod.mul(&q.pow(m));
            }
            prop_assert_eq!(&prod, input);
        }
    }

    #[test]
    fn isolation_finds_planted_rational_roots(
        roots in prop::collection::btree_set((-6i64..=6, 1u32..=3), 1..5)
    ) {
        let rationals: Vec<Rational> =
            roots.iter().map(|&(n, d)| rational(n, d)).collect();
        // distinct rationals only
        let mut sorted = rationals.clone();
        sorted.sort();
        sorted.dedup();
        let mut p = Polynomial::one();
        for r in &sorted {
            p = p.mul(&Polynomial::line(r));
        }
        let ivs = isolate_roots(&p).unwrap();
        prop_assert_eq!(ivs.len(), sorted.len());
        for (iv, root) in ivs.iter().zip(&sorted) {
            prop_assert!(&iv.lo < root && root <= &iv.hi, "{} not in {}", root, iv);
            prop_assert_eq!(count_roots_in(&p, iv).unwrap(), 1);
        }
        // disjoint after one refinement step, in order
        for pair in ivs.windows(2) {
            prop_assert!(pair[0].hi <= pair[1].hi);
        }
    }

    #[test]
    fn refinement_is_idempotent_in_effect(seed in 0u64..200) {
        let mut rng = StdRng::seed_from_u64(seed);
        let p = parse_polynomial("x^2-2").unwrap();
        let ivs = isolate_roots(&p).unwrap();
        let iv = ivs[rng.gen_range(0..ivs.len())].clone();
        let exclude = [parse_polynomial("x-1").unwrap(), parse_polynomial("x^2-3").unwrap()];
        let once = refine_root(&p, &iv, &exclude).unwrap();
        let twice = refine_root(&p, &once, &exclude).unwrap();
        for refined in [&once, &twice] {
            prop_assert_eq!(count_roots_in(&p, refined).unwrap(), 1);
            for q in &exclude {
                prop_assert!(!ordspace::ratpoly::has_root_in_closed(q, refined).unwrap());
            }
        }
    }
}

#[test]
fn value_sets_are_symmetric_and_contain_their_arguments() {
    let mut rng = StdRng::seed_from_u64(11);
    for _ in 0..25 {
        let space = common::random_space(&mut rng, 10, 6);
        let order = space.group_order() as u64;
        for _ in 0..8 {
            let a = GroupElement::from_bits(rng.gen_range(0..order));
            let b = GroupElement::from_bits(rng.gen_range(0..order));
            let d_ab = value_set(&space, a, b).unwrap();
            let d_ba = value_set(&space, b, a).unwrap();
            assert_eq!(d_ab, d_ba);
            assert!(d_ab.contains(&a) && d_ab.contains(&b));
            // agreement with the defining pointwise formula
            for c in 0..order {
                let c = GroupElement::from_bits(c);
                let member = (0..space.num_points()).all(|x| {
                    let cv = space.evaluate(c, x).unwrap();
                    cv == space.evaluate(a, x).unwrap() || cv == space.evaluate(b, x).unwrap()
                });
                assert_eq!(d_ab.contains(&c), member);
                assert_eq!(in_value_set(&space, c, a, b).unwrap(), member);
            }
        }
    }
}

#[test]
fn associativity_holds_on_random_verified_spaces() {
    let mut rng = StdRng::seed_from_u64(12);
    for _ in 0..10 {
        let space = common::random_space(&mut rng, 12, 7);
        assert!(verify_space(&space).passed());
        let order = space.group_order() as u64;
        for _ in 0..100 {
            let a = GroupElement::from_bits(rng.gen_range(0..order));
            let b = GroupElement::from_bits(rng.gen_range(0..order));
            let c = GroupElement::from_bits(rng.gen_range(0..order));
            // independent re-implementation of both unions
            let mut left: Vec<GroupElement> = Vec::new();
            for s in value_set(&space, b, c).unwrap() {
                left.extend(value_set(&space, a, s).unwrap());
            }
            let mut right: Vec<GroupElement> = Vec::new();
            for t in value_set(&space, a, b).unwrap() {
                right.extend(value_set(&space, t, c).unwrap());
            }
            left.sort_unstable();
            left.dedup();
            right.sort_unstable();
            right.dedup();
            assert_eq!(left, right);
        }
    }
}

#[test]
fn subspaces_contain_their_seed_and_are_idempotent() {
    let mut rng = StdRng::seed_from_u64(13);
    for _ in 0..25 {
        let space = common::random_space(&mut rng, 12, 7);
        let size = rng.gen_range(1..=space.num_points());
        let mut seed: Vec<usize> = (0..space.num_points()).collect();
        for i in (1..seed.len()).rev() {
            seed.swap(i, rng.gen_range(0..=i));
        }
        seed.truncate(size);
        seed.sort_unstable();
        let sub = subspace_generated(&space, &seed).unwrap();
        for s in &seed {
            assert!(sub.point_indices.contains(s));
        }
        let again = subspace_generated(
            &sub.space,
            &(0..sub.space.num_points()).collect::<Vec<_>>(),
        )
        .unwrap();
        assert_eq!(again.space.num_points(), sub.space.num_points());
        assert_eq!(again.space.rank(), sub.space.rank());
    }
}

#[test]
fn sum_and_extension_bookkeeping() {
    let mut rng = StdRng::seed_from_u64(14);
    for _ in 0..20 {
        let a = common::random_space(&mut rng, 8, 5);
        let b = common::random_space(&mut rng, 8, 5);
        if a.rank() + b.rank() <= 12 {
            let s = direct_sum(&[a.clone(), b.clone()]).unwrap();
            assert_eq!(s.num_points(), a.num_points() + b.num_points());
            assert_eq!(s.group_order(), a.group_order() * b.group_order());
            assert!(verify_space(&s).passed());
        }
        let d = rng.gen_range(1..=2usize);
        if a.num_points() << d <= 64 {
            let e = group_extension(&a, d).unwrap();
            assert_eq!(e.num_points(), a.num_points() << d);
            assert_eq!(e.group_order(), a.group_order() << d);
            assert!(verify_space(&e).passed());
        }
    }
}

#[test]
fn quotient_by_full_group_preserves_the_verdict() {
    let mut rng = StdRng::seed_from_u64(15);
    for _ in 0..10 {
        let space = common::random_space(&mut rng, 10, 6);
        let all: Vec<GroupElement> =
            (0..space.group_order() as u64).map(GroupElement::from_bits).collect();
        let q = ordspace::space::quotient_structure(&space, &all).unwrap();
        assert_eq!(
            verify_axioms(&space).unwrap().passed(),
            verify_axioms(&q.space).unwrap().passed()
        );
    }
}

#[test]
fn formulas_true_everywhere_restrict_to_true_on_subspaces() {
    let mut rng = StdRng::seed_from_u64(16);
    let space = make_fan(3).unwrap();
    let formulas = [
        "E t : t in D(1,-1)",
        "E t : a in D(1,t)",
        "E t1 t2 : a in D(1,t1*t2)",
    ];
    for text in formulas {
        let f = parse_formula(text).unwrap();
        for bits in 0..8u64 {
            let mut binding = Binding::new();
            if f.params.contains(&"a".to_string()) {
                binding.insert("a".into(), GroupElement::from_bits(bits));
            }
            if !evaluate(&space, &f, &binding).unwrap().holds() {
                continue;
            }
            for _ in 0..5 {
                let size = rng.gen_range(1..=space.num_points());
                let mut seed: Vec<usize> = (0..space.num_points()).collect();
                for i in (1..seed.len()).rev() {
                    seed.swap(i, rng.gen_range(0..=i));
                }
                seed.truncate(size);
                assert!(
                    evaluate_on_subspace(&space, &seed, &f, &binding).unwrap().holds(),
                    "{} failed on subspace {:?}",
                    text,
                    seed
                );
            }
        }
    }
}

/// Verdicts are invariant under point relabeling and under an invertible
/// change of the group basis.
#[test]
fn verdicts_are_invariant_under_renaming_and_basis_change() {
    let mut rng = StdRng::seed_from_u64(17);
    for round in 0..15 {
        let space = common::random_space(&mut rng, 8, 5);
        let r = space.rank();
        let formula = parse_formula("E t : a in D(1,t) & -a in D(1,t)").unwrap();
        let a = GroupElement::from_bits(rng.gen_range(0..space.group_order() as u64));
        let mut binding = Binding::new();
        binding.insert("a".into(), a);
        let baseline = evaluate(&space, &formula, &binding).unwrap();

        // point relabeling: permute the point list
        let mut perm: Vec<usize> = (0..space.num_points()).collect();
        for i in (1..perm.len()).rev() {
            perm.swap(i, rng.gen_range(0..=i));
        }
        let permuted = FiniteSpace::new(
            space.generator_names().to_vec(),
            space.minus_one().bits(),
            perm.iter()
                .map(|&x| (space.label(x).to_string(), space.row(x)))
                .collect(),
        )
        .unwrap();
        let on_permuted = evaluate(&permuted, &formula, &binding).unwrap();
        assert_eq!(baseline, on_permuted, "round {}: relabeling changed the verdict", round);

        // invertible basis change: columns of t express new generators
        let transform = random_invertible(&mut rng, r);
        let elim = Eliminator::from_columns(
            &transform.iter().map(|&c| c as u128).collect::<Vec<_>>(),
        );
        let to_new = |g: GroupElement| GroupElement::from_bits(elim.solve(g.bits() as u128).unwrap());
        let rows = (0..space.num_points())
            .map(|x| {
                let mut row = 0u64;
                for (j, &col) in transform.iter().enumerate() {
                    if (col & space.row(x)).count_ones() % 2 == 1 {
                        row |= 1 << j;
                    }
                }
                (space.label(x).to_string(), row)
            })
            .collect();
        let names = (0..r).map(|j| format!("n{}", j)).collect();
        let changed =
            FiniteSpace::new(names, to_new(space.minus_one()).bits(), rows).unwrap();
        let mut new_binding = Binding::new();
        new_binding.insert("a".into(), to_new(a));
        let on_changed = evaluate(&changed, &formula, &new_binding).unwrap();
        assert_eq!(
            baseline.holds(),
            on_changed.holds(),
            "round {}: basis change flipped the verdict",
            round
        );
    }
}

fn random_invertible(rng: &mut StdRng, r: usize) -> Vec<u64> {
    // columns over the old basis, starting from the identity
    let mut cols: Vec<u64> = (0..r).map(|i| 1u64 << i).collect();
    for _ in 0..4 * r {
        let i = rng.gen_range(0..r);
        let j = rng.gen_range(0..r);
        if i != j {
            cols[j] ^= cols[i];
        }
        if rng.gen_bool(0.3) {
            cols.swap(i, j);
        }
    }
    cols
}

/// A transcendental cut in a root-free window restricts to the same point
/// that direct sign evaluation at any rational inside the window predicts.
#[test]
fn cut_windows_agree_with_rational_samples() {
    use ordspace::qx::{construct_quotient, restrict, OrderingSpec};
    use ordspace::ratpoly::{has_root_in_closed, sign_at_rational, Interval};
    let q = construct_quotient(&[
        parse_polynomial("x^2-2").unwrap(),
        parse_polynomial("x^3-x").unwrap(),
    ])
    .unwrap();
    let mut rng = StdRng::seed_from_u64(18);
    let mut tested = 0;
    while tested < 60 {
        let numer = rng.gen_range(-48i64..=48);
        let denom = rng.gen_range(1i64..=16);
        let center: Rational = format!("{}/{}", numer, denom).parse().unwrap();
        if q.generator_reps.iter().any(|rep| sign_at_rational(rep, &center) == 0) {
            continue;
        }
        let mut delta: Rational = "1/2".parse().unwrap();
        let window = loop {
            let w = Interval::new(&center - &delta, &center + &delta);
            if !q.generator_reps.iter().any(|rep| has_root_in_closed(rep, &w).unwrap()) {
                break w;
            }
            delta = delta / Rational::from_integer(2.into());
        };
        let point = restrict(&OrderingSpec::TranscendentalCut { window }, &q).unwrap();
        for (i, rep) in q.generator_reps.iter().enumerate() {
            assert_eq!(
                q.space.evaluate(GroupElement::from_bits(1 << i), point).unwrap(),
                sign_at_rational(rep, &center),
                "rep {} at {}",
                rep,
                center
            );
        }
        tested += 1;
    }
}

/// On-demand stress run over many random planted-input quotients and
/// two-level towers; not part of the default suite.
#[test]
#[ignore = "stress run: invoke with --ignored"]
fn stress_many_random_quotients_and_towers() {
    use ordspace::qx::{build_tower, construct_quotient, verify_inverse_system};
    let mut rng = StdRng::seed_from_u64(19);
    for round in 0..200 {
        let (inputs, _, _) = common::random_planted_inputs(&mut rng, 8);
        let q = construct_quotient(&inputs).unwrap();
        assert!(q.space.num_points() >= 4, "round {}", round);
    }
    for round in 0..20 {
        let (a, _, _) = common::random_planted_inputs(&mut rng, 4);
        let (b, _, _) = common::random_planted_inputs(&mut rng, 3);
        let tower = build_tower(&[a, b]).unwrap();
        let report = verify_inverse_system(&tower).unwrap();
        assert!(report.passed, "round {}: {:?}", round, report.failure);
    }
}

#[test]
fn one_point_sum_chain_matches_fan_sizes() {
    // |X| and |G| bookkeeping on mixed towers of constructions
    let s1 = one_point_space("a");
    let s2 = direct_sum(&[s1.clone(), one_point_space("b")]).unwrap();
    let s3 = group_extension(&s2, 2).unwrap();
    assert_eq!(s3.num_points(), 8);
    assert_eq!(s3.group_order(), 16);
    assert!(verify_space(&s3).passed());
}

/// Ground truth for the recognizer at small scale: a structurally valid
/// candidate is a space of orderings exactly when some sum/extension tree
/// of matching size builds an isomorphic space. The certificate must agree
/// with that brute-force answer on every rank <= 4 candidate and on a
/// sample of rank-5 candidates.
#[test]
fn certificate_matches_brute_force_recognition_on_small_candidates() {
    use ordspace::structure::{certify_space, is_isomorphic};

    fn iso_classes(points: usize, rank: usize) -> Vec<FiniteSpace> {
        fn go(points: usize, rank: usize, out: &mut Vec<FiniteSpace>) {
            if points == 1 && rank == 1 {
                out.push(one_point_space("q"));
                return;
            }
            if rank < 1 || points < 1 {
                return;
            }
            // extensions
            for d in 1..rank {
                if points % (1 << d) == 0 && points >> d >= 1 {
                    let mut bases = Vec::new();
                    go(points >> d, rank - d, &mut bases);
                    for base in bases {
                        if let Ok(e) = group_extension(&base, d) {
                            out.push(e);
                        }
                    }
                }
            }
            // binary sums cover n-ary sums up to isomorphism
            for p1 in 1..points {
                if p1 > points - p1 {
                    break;
                }
                for r1 in 1..rank {
                    let mut left = Vec::new();
                    go(p1, r1, &mut left);
                    if left.is_empty() {
                        continue;
                    }
                    let mut right = Vec::new();
                    go(points - p1, rank - r1, &mut right);
                    for a in &left {
                        for b in &right {
                            if let Ok(s) = direct_sum(&[a.clone(), b.clone()]) {
                                out.push(s);
                            }
                        }
                    }
                }
            }
        }
        let mut all = Vec::new();
        go(points, rank, &mut all);
        // dedupe by isomorphism
        let mut classes: Vec<FiniteSpace> = Vec::new();
        for s in all {
            if !classes.iter().any(|c| is_isomorphic(c, &s).unwrap().is_some()) {
                classes.push(s);
            }
        }
        classes
    }

    let mut class_cache: std::collections::HashMap<(usize, usize), Vec<FiniteSpace>> =
        std::collections::HashMap::new();

    let mut check = |rows: &[u64], rank: usize| {
        let names = (0..rank).map(|i| format!("g{}", i)).collect();
        let pts = rows.iter().enumerate().map(|(i, &r)| (format!("p{}", i), r)).collect();
        let Ok(space) = FiniteSpace::new(names, 1, pts) else { return (false, false) };
        let certified = certify_space(&space).is_ok();
        let classes = class_cache
            .entry((space.num_points(), rank))
            .or_insert_with(|| iso_classes(rows.len(), rank));
        let ground_truth =
            classes.iter().any(|c| is_isomorphic(c, &space).unwrap().is_some());
        assert_eq!(
            certified, ground_truth,
            "recognizer disagrees with brute force on rows {:?} (rank {})",
            rows, rank
        );
        (true, certified)
    };

    // every candidate of rank 3 and 4
    let mut totals = (0u32, 0u32);
    for rank in 3..=4usize {
        let candidates: Vec<u64> = (0..1u64 << rank).filter(|r| r & 1 == 1).collect();
        for mask in 1u64..1 << candidates.len() {
            let rows: Vec<u64> = (0..candidates.len())
                .filter(|&i| mask >> i & 1 == 1)
                .map(|i| candidates[i])
                .collect();
            if rows.len() < 2 {
                continue;
            }
            let (valid, certified) = check(&rows, rank);
            if valid {
                totals.0 += 1;
                totals.1 += u32::from(certified);
            }
        }
    }
    assert!(totals.0 > 100, "expected many valid candidates, saw {}", totals.0);
    // a seeded sample of rank-5 candidates
    let mut rng = StdRng::seed_from_u64(20);
    let candidates: Vec<u64> = (0..32u64).filter(|r| r & 1 == 1).collect();
    for _ in 0..300 {
        let mask = rng.gen_range(1u16..=u16::MAX);
        let rows: Vec<u64> = (0..16)
            .filter(|&i| mask >> i & 1 == 1)
            .map(|i| candidates[i])
            .collect();
        if rows.len() < 2 {
            continue;
        }
        check(&rows, 5);
    }
}
