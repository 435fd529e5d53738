//! Running Simpson integrals against brute-force refinement.

use painleve_core::{cumulative_integral, scaled_basis, Grid, Parameters};

#[test]
fn squared_airy_matches_fine_trapezoid() {
    let basis = scaled_basis(&Parameters::CASE_ONE).unwrap();
    let f = |x: f64| basis.eval(x).unwrap().a.powi(2);
    let g = Grid::uniform(2049).unwrap();
    let running = cumulative_integral(&g.sample(f), &g).unwrap();

    // 2^20 (about 10^6) trapezoid panels, so every 512th panel edge is a grid node
    let panels = 1_048_576usize;
    let per_node = panels / (g.len() - 1);
    let h = 1.0 / panels as f64;
    let mut acc = 0.0;
    let mut prev = f(0.0);
    let mut worst = 0.0f64;
    for k in 1..=panels {
        let cur = f(k as f64 * h);
        acc += 0.5 * h * (prev + cur);
        prev = cur;
        if k % per_node == 0 {
            worst = worst.max((acc - running[k / per_node]).abs());
        }
    }
    assert!(worst <= 1e-10, "{worst:e}");
}
