//! Properties of converged reference solutions over the parameter box.

use painleve_core::{classify_type, solve_reference, Grid, Parameters, SolutionType};
use proptest::prelude::*;

#[test]
fn odd_symmetry() {
    let g = Grid::shared(2049).unwrap();
    for p in [Parameters::CASE_ONE, Parameters::CASE_TWO] {
        let flipped = Parameters::new(p.sigma, -p.tau, p.nu, -p.mu).unwrap();
        let u = solve_reference(&p, &g, 1e-12).unwrap();
        let v = solve_reference(&flipped, &g, 1e-12).unwrap();
        let err = u
            .profile
            .values()
            .iter()
            .zip(v.profile.values())
            .map(|(a, b)| (a + b).abs())
            .fold(0.0, f64::max);
        assert!(err <= 1e-8, "nu = {}: {err:e}", p.nu);
        assert_ne!(u.solution_type, v.solution_type);
    }
}

#[test]
fn case_types() {
    let g = Grid::shared(2049).unwrap();
    let one = solve_reference(&Parameters::CASE_ONE, &g, 1e-12).unwrap();
    assert_eq!(classify_type(&one).unwrap(), SolutionType::TypeA);
    let two = solve_reference(&Parameters::CASE_TWO, &g, 1e-12).unwrap();
    assert_eq!(classify_type(&two).unwrap(), SolutionType::TypeB);
    assert!(two.profile.values().iter().all(|&e| e < 0.0));
    assert!(two.profile.values().windows(2).all(|w| w[1] >= w[0]));
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(24))]

    #[test]
    fn converged_solutions_satisfy_invariants(
        sigma in 0.05f64..0.95,
        tau in -0.9f64..0.9,
        nu in 0.1f64..10.0,
        mu in prop_oneof![-1.9f64..-0.05, 0.05f64..1.9],
    ) {
        let g = Grid::shared(1025).unwrap();
        let p = Parameters::new(sigma, tau, nu, mu).unwrap();
        let sol = solve_reference(&p, &g, 1e-12).unwrap();
        prop_assert!(sol.e0 * sol.e0 > sol.e1 * sol.e1);
        let expected = if mu > 0.0 { SolutionType::TypeA } else { SolutionType::TypeB };
        prop_assert_eq!(sol.solution_type, expected);
        let d = sol.profile.derivs();
        let scale = sol.e0.abs().max(1.0);
        prop_assert!(d[0].abs() <= 1e-9 * scale && d[d.len() - 1].abs() <= 1e-9 * scale);
        prop_assert!(sol.residual_norm <= 1e-8, "residual {:e}", sol.residual_norm);
    }
}
