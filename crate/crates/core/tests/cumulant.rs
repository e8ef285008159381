mod common;

use proptest::prelude::*;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use semigroupoid::graph::standard::*;
use semigroupoid::*;

fn loop_context(mode: SemanticsMode) -> (MomentFunctional, Element, Element) {
    let alg = Algebra::new(one_loop(), mode);
    let l = alg.graph().parse_path("l").unwrap();
    let s = alg.symmetric(&l).unwrap();
    let v = alg.vertex(alg.graph().vertex("v").unwrap());
    (MomentFunctional::new(alg), s, v)
}

#[test]
fn documented_partitioned_moments() {
    let alg = Algebra::new(single_edge(), SemanticsMode::PaperRelations);
    let mf = MomentFunctional::new(alg.clone());
    let e = alg.graph().parse_path("e").unwrap();
    let (c, a) = (alg.create(&e).unwrap(), alg.annihilate(&e).unwrap());
    let pi: NoncrossingPartition = "{1,2}{3,4}".parse().unwrap();
    assert!(mf
        .partitioned_moment(&pi, &[c.clone(), a.clone(), a, c])
        .unwrap()
        .is_zero());

    let alg = Algebra::new(one_loop(), SemanticsMode::PaperRelations);
    let mf = MomentFunctional::new(alg.clone());
    let l = alg.graph().parse_path("l").unwrap();
    let (c, a) = (alg.create(&l).unwrap(), alg.annihilate(&l).unwrap());
    let pi: NoncrossingPartition = "{1,4}{2,3}".parse().unwrap();
    let value = mf
        .partitioned_moment(&pi, &[c.clone(), c, a.clone(), a])
        .unwrap();
    assert_eq!(value.to_string(), "P(v)");
}

#[test]
fn loop_cumulants_in_both_modes() {
    let (mf, s, v) = loop_context(SemanticsMode::PaperRelations);
    let expected = [0, 2, 0, -2, 0, 4, 0, -10];
    for (n, k) in (1..=8).zip(expected) {
        assert_eq!(
            mf.trivial_cumulant(&s, n).unwrap(),
            v.scale(&Scalar::from_int(k)),
            "paper k{n}"
        );
    }
    let (mf, s, v) = loop_context(SemanticsMode::FockVacuum);
    for n in 1..=8 {
        let expected = if n == 2 {
            v.clone()
        } else {
            v.scale(&Scalar::zero())
        };
        assert_eq!(mf.trivial_cumulant(&s, n).unwrap(), expected, "vacuum k{n}");
    }
}

#[test]
fn first_cumulant_is_the_expectation() {
    let mut rng = ChaCha8Rng::seed_from_u64(11);
    for (_, g) in common::all_graphs() {
        for mode in common::MODES {
            let alg = Algebra::new(g.clone(), mode);
            let mf = MomentFunctional::new(alg.clone());
            for _ in 0..5 {
                let x = common::random_element(&alg, &mut rng, 3);
                assert_eq!(mf.cumulant(std::slice::from_ref(&x)).unwrap(), x.expectation());
            }
        }
    }
}

#[test]
fn generator_word_cumulants_match_the_mu_closed_form() {
    for (_, g) in common::consistent_graphs() {
        for mode in common::MODES {
            let alg = Algebra::new(g.clone(), mode);
            let mf = MomentFunctional::new(alg.clone());
            for word in common::edge_words(&g, 4) {
                let factors: Vec<Element> = word.iter().map(|l| alg.letter(l).unwrap()).collect();
                assert_eq!(
                    mf.cumulant(&factors).unwrap(),
                    mf.cumulant_via_mu(&word).unwrap(),
                    "{word:?}"
                );
            }
        }
    }
}

#[test]
fn connected_sets_of_a_loop_word() {
    let (mf, _, _) = loop_context(SemanticsMode::PaperRelations);
    let l = mf.algebra().graph().parse_path("l").unwrap();
    let word = [
        Letter::create(l.clone()),
        Letter::annihilate(l.clone()),
        Letter::create(l.clone()),
        Letter::annihilate(l),
    ];
    let set = mf.connected_set(&word).unwrap();
    assert!(set.partitions.contains(&NoncrossingPartition::top(4)));
    assert_eq!(mf.mu_coefficient(&word[..2]).unwrap(), 1);
}

#[test]
fn odd_cumulants_of_symmetric_generators_vanish() {
    for (_, g) in common::all_graphs() {
        for mode in common::MODES {
            let alg = Algebra::new(g.clone(), mode);
            let mf = MomentFunctional::new(alg.clone());
            for w in common::nontrivial_paths(&g, 2) {
                let s = alg.symmetric(&w).unwrap();
                for n in [1, 3, 5] {
                    assert!(mf.trivial_cumulant(&s, n).unwrap().is_zero());
                }
            }
        }
    }
}

#[test]
fn errors_for_empty_and_oversized_tuples() {
    let (mf, s, _) = loop_context(SemanticsMode::FockVacuum);
    assert!(matches!(mf.cumulant(&[]), Err(Error::Usage(_))));
    assert!(matches!(
        mf.trivial_cumulant(&s, 11),
        Err(Error::Resource(_))
    ));
    let other = Algebra::new(one_loop(), SemanticsMode::FockVacuum);
    assert!(matches!(mf.moment(&[other.one()]), Err(Error::Usage(_))));
}

fn random_tuple(
    seed: u64,
    which: usize,
    paper: bool,
    n: usize,
) -> (MomentFunctional, Vec<Element>) {
    let (_, g) = common::consistent_graphs().swap_remove(which);
    let mode = if paper {
        SemanticsMode::PaperRelations
    } else {
        SemanticsMode::FockVacuum
    };
    let alg = Algebra::new(g, mode);
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let xs = (0..n)
        .map(|_| common::random_element(&alg, &mut rng, 3))
        .collect();
    (MomentFunctional::new(alg), xs)
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(32))]

    #[test]
    fn cumulants_invert_to_moments(seed in any::<u64>(), which in 0usize..3, paper in any::<bool>(), n in 1usize..6) {
        let (mf, xs) = random_tuple(seed, which, paper, n);
        prop_assert_eq!(mf.moment_from_cumulants(&xs).unwrap(), mf.moment(&xs).unwrap());
    }

    #[test]
    fn cumulants_are_multilinear(seed in any::<u64>(), which in 0usize..3, paper in any::<bool>(), n in 2usize..5) {
        let (mf, xs) = random_tuple(seed, which, paper, n + 1);
        let mut rng = ChaCha8Rng::seed_from_u64(seed.wrapping_add(1));
        let slot = rng.gen_range(0..n);
        let extra = xs[n].clone();
        let base = &xs[..n];
        let mut summed = base.to_vec();
        summed[slot] = summed[slot].add(&extra).unwrap();
        let mut swapped = base.to_vec();
        swapped[slot] = extra;
        let lhs = mf.cumulant(&summed).unwrap();
        prop_assert_eq!(lhs, mf.cumulant(base).unwrap().add(&mf.cumulant(&swapped).unwrap()).unwrap());
        let mut scaled = base.to_vec();
        scaled[slot] = scaled[slot].scale(&Scalar::ratio(-3, 2));
        prop_assert_eq!(mf.cumulant(&scaled).unwrap(), mf.cumulant(base).unwrap().scale(&Scalar::ratio(-3, 2)));
    }

    #[test]
    fn diagonal_arguments_kill_higher_cumulants(seed in any::<u64>(), which in 0usize..3, paper in any::<bool>(), n in 2usize..5) {
        let (mf, mut xs) = random_tuple(seed, which, paper, n);
        let mut rng = ChaCha8Rng::seed_from_u64(seed.wrapping_add(2));
        let slot = rng.gen_range(0..n);
        xs[slot] = common::random_diagonal(mf.algebra(), &mut rng);
        prop_assert!(mf.cumulant(&xs).unwrap().is_zero());
    }

    #[test]
    fn diagonal_elements_move_between_slots(seed in any::<u64>(), which in 0usize..3, paper in any::<bool>(), n in 2usize..5) {
        let (mf, xs) = random_tuple(seed, which, paper, n);
        let mut rng = ChaCha8Rng::seed_from_u64(seed.wrapping_add(3));
        let slot = rng.gen_range(0..n - 1);
        let d = common::random_diagonal(mf.algebra(), &mut rng);
        let mut right = xs.clone();
        right[slot] = right[slot].mul(&d).unwrap();
        let mut left = xs.clone();
        left[slot + 1] = d.mul(&left[slot + 1]).unwrap();
        prop_assert_eq!(mf.cumulant(&right).unwrap(), mf.cumulant(&left).unwrap());
        let mut outer = xs.clone();
        outer[0] = d.mul(&outer[0]).unwrap();
        prop_assert_eq!(mf.cumulant(&outer).unwrap(), d.mul(&mf.cumulant(&xs).unwrap()).unwrap());
    }
}
