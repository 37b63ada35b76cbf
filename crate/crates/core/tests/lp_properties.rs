mod common;

use lcc_core::lp::{solve, LpProblem, LpStatus, Relation};
use proptest::prelude::*;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

proptest! {
    #![proptest_config(ProptestConfig::with_cases(64))]

    #[test]
    fn matches_vertex_enumeration(seed in any::<u64>()) {
        let lp = common::random_feasible_lp(&mut ChaCha8Rng::seed_from_u64(seed));
        let sol = solve(&lp).unwrap();
        prop_assert_eq!(sol.status, LpStatus::Optimal);
        let (oracle, _) = common::vertex_enumeration(&lp).unwrap();
        prop_assert!((sol.objective_value - oracle).abs() <= 1e-6, "{} vs {}", sol.objective_value, oracle);
    }

    #[test]
    fn optimum_is_feasible_and_no_sampled_point_beats_it(seed in any::<u64>()) {
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        let lp = common::random_feasible_lp(&mut rng);
        let sol = solve(&lp).unwrap();
        let (rows, bounds) = lp.max_violation(&sol.x);
        prop_assert!(rows <= 1e-9 && bounds <= 1e-9);
        prop_assert!((lp.objective_value(&sol.x) - sol.objective_value).abs() <= 1e-9);
        for _ in 0..200 {
            let x: Vec<f64> = lp.lower().iter().zip(lp.upper()).map(|(l, u)| rng.random_range(*l..=*u)).collect();
            let (r, _) = lp.max_violation(&x);
            if r <= 0.0 {
                prop_assert!(lp.objective_value(&x) >= sol.objective_value - 1e-9);
            }
        }
    }

    #[test]
    fn deterministic(seed in any::<u64>()) {
        let lp = common::random_feasible_lp(&mut ChaCha8Rng::seed_from_u64(seed));
        prop_assert_eq!(solve(&lp).unwrap(), solve(&lp).unwrap());
    }

    #[test]
    fn negated_objective_gives_the_maximum(seed in any::<u64>()) {
        let lp = common::random_feasible_lp(&mut ChaCha8Rng::seed_from_u64(seed));
        let mut flipped = LpProblem::new(
            lp.objective().iter().map(|c| -c).collect(),
            lp.lower().to_vec(),
            lp.upper().to_vec(),
        ).unwrap();
        for i in 0..lp.num_rows() {
            flipped.add_row(lp.row(i), lp.relation(i), lp.rhs()[i]).unwrap();
        }
        let min = solve(&lp).unwrap().objective_value;
        let max = -solve(&flipped).unwrap().objective_value;
        prop_assert!(max >= min - 1e-9);
    }
}

#[test]
fn empty_box_intersection_is_infeasible() {
    let mut lp = LpProblem::new(vec![1.0, 1.0], vec![0.0, 0.0], vec![1.0, 1.0]).unwrap();
    lp.add_row(&[1.0, 1.0], Relation::Ge, 2.5).unwrap();
    assert_eq!(solve(&lp).unwrap().status, LpStatus::Infeasible);
    assert!(common::vertex_enumeration(&lp).is_none());
}
