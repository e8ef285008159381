mod common;

use semigroupoid::lattice::*;
use semigroupoid::*;

#[test]
fn axis_property_decides_expectations() {
    for (_, g) in common::all_graphs() {
        for mode in common::MODES {
            let alg = Algebra::new(g.clone(), mode);
            for word in common::edge_words(&g, 5) {
                let e = alg.word(&word).unwrap().expectation();
                let axis = has_star_axis_property(&alg, &word).unwrap();
                assert_eq!(!e.is_zero(), axis, "{word:?}");
                if axis {
                    assert!(ends_on_axis(&word).unwrap());
                    assert_eq!(lattice_path(&alg, &word).unwrap().final_height(), 0);
                }
            }
        }
    }
}

#[test]
fn odd_words_never_reach_the_axis() {
    for (_, g) in common::all_graphs() {
        for word in common::edge_words(&g, 5)
            .into_iter()
            .filter(|w| w.len() % 2 == 1)
        {
            assert!(!ends_on_axis(&word).unwrap());
        }
    }
}

#[test]
fn heights_accumulate_steps() {
    let g = semigroupoid::graph::standard::one_loop();
    let alg = Algebra::new(g, SemanticsMode::FockVacuum);
    let l2 = alg.graph().parse_path("l.l").unwrap();
    let l = alg.graph().parse_path("l").unwrap();
    let word = [
        Letter::annihilate(l.clone()),
        Letter::annihilate(l),
        Letter::create(l2),
    ];
    let p = lattice_path(&alg, &word).unwrap();
    assert_eq!(p.heights, vec![-1, -2, 0]);
    assert_eq!(p.render(), "*↘↘↗↗");
    assert!(matches!(ends_on_axis(&[]), Err(Error::Usage(_))));
}
