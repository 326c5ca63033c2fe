//! Shared helpers for the integration test suites: worked-example
//! builders, finite differences, singularity-aware quadrature, and a tiny
//! deterministic generator for randomized scenarios.

#![allow(dead_code)]

use stochord_core::*;

pub fn rel_close(a: f64, b: f64, tol: f64) -> bool {
    (a - b).abs() <= tol * a.abs().max(b.abs()).max(1e-300)
}

pub fn example5_x() -> ComponentFamily {
    let base = DistSpec::weibull(0.5, 2.0).unwrap();
    ComponentFamily::from_shifts(base, &[0.1, 0.2, 0.3, 0.4, 0.5], "X").unwrap()
}

pub fn example5_y() -> ComponentFamily {
    let base = DistSpec::weibull(0.5, 2.0).unwrap();
    ComponentFamily::from_shifts(base, &[0.05, 0.15, 0.25, 0.35, 0.45], "Y").unwrap()
}

pub fn example6_x() -> ComponentFamily {
    let base = DistSpec::weibull(0.6, 0.2).unwrap();
    ComponentFamily::from_shifts(base, &[0.05, 0.15, 0.25, 0.35, 0.45], "X").unwrap()
}

pub fn example6_y() -> ComponentFamily {
    let base = DistSpec::weibull(0.6, 0.2).unwrap();
    ComponentFamily::from_shifts(base, &[0.1, 0.2, 0.3, 0.4, 0.5], "Y").unwrap()
}

pub fn example_pmf() -> SizePmf {
    SizePmf::explicit(vec![(3, 0.2), (4, 0.4), (5, 0.4)]).unwrap()
}

/// Canonical grid for the bundled examples: the -ln y substitution
/// restricted above the largest location shift, where all components are
/// active and the shifted-hazard identities hold.
pub fn example_grid(points: usize) -> Grid {
    Grid::neg_log_unit_above(points, 0.5)
}

/// Centered finite difference with step 1e-6 * max(1, |x|).
pub fn central_diff(f: impl Fn(f64) -> f64, x: f64) -> f64 {
    let h = 1e-6 * x.abs().max(1.0);
    (f(x + h) - f(x - h)) / (2.0 * h)
}

/// Composite Simpson on `[0, upper]` with `panels` panels (even count).
fn simpson(g: impl Fn(f64) -> f64, upper: f64, panels: usize) -> f64 {
    let n = panels + panels % 2;
    let h = upper / n as f64;
    let mut sum = g(0.0) + g(upper);
    for i in 1..n {
        let w = if i % 2 == 1 { 4.0 } else { 2.0 };
        sum += w * g(h * i as f64);
    }
    sum * h / 3.0
}

/// Integrates a density over `[splits[0], hi]`, splitting at each interior
/// point of `splits` (support starts, where shape < 1 densities blow up).
/// Each piece is mapped through `t = a + u^4`, which absorbs the left-edge
/// singularity `(t - a)^(shape-1)` into an integrand vanishing at u = 0.
pub fn integrate_density(pdf: impl Fn(f64) -> f64, splits: &[f64], hi: f64, panels: usize) -> f64 {
    let mut points: Vec<f64> = splits.iter().copied().filter(|&s| s < hi).collect();
    points.sort_by(|a, b| a.partial_cmp(b).unwrap());
    points.dedup();
    points.push(hi);
    let mut total = 0.0;
    for w in points.windows(2) {
        let (a, b) = (w[0], w[1]);
        let upper = (b - a).powf(0.25);
        // The top sample may round onto (or just past) the right endpoint,
        // where the next split's singularity lives; pull it inside.
        let cap = b - (b - a) * 1e-12;
        let g = |u: f64| {
            if u == 0.0 {
                0.0
            } else {
                let t = (a + u.powi(4)).min(cap);
                let v = pdf(t);
                if v.is_finite() {
                    4.0 * u.powi(3) * v
                } else {
                    0.0
                }
            }
        };
        total += simpson(g, upper, panels);
    }
    total
}

/// splitmix64, for deterministic randomized-scenario generation in tests.
pub struct TestRng {
    state: u64,
}

impl TestRng {
    pub fn new(seed: u64) -> Self {
        Self { state: seed }
    }

    pub fn next_u64(&mut self) -> u64 {
        self.state = self.state.wrapping_add(0x9E37_79B9_7F4A_7C15);
        let mut z = self.state;
        z = (z ^ (z >> 30)).wrapping_mul(0xBF58_476D_1CE4_E5B9);
        z = (z ^ (z >> 27)).wrapping_mul(0x94D0_49BB_1331_11EB);
        z ^ (z >> 31)
    }

    /// Uniform in [0, 1).
    pub fn uniform(&mut self) -> f64 {
        (self.next_u64() >> 11) as f64 * (1.0 / (1u64 << 53) as f64)
    }

    pub fn in_range(&mut self, lo: f64, hi: f64) -> f64 {
        lo + (hi - lo) * self.uniform()
    }
}

/// A randomized Example-1-style scenario: DFR Weibull base, Y shifts drawn
/// in [0, 0.6], X shifts dominating them coordinatewise.
pub struct RandomScenario {
    pub fam_x: ComponentFamily,
    pub fam_y: ComponentFamily,
    pub pmf: SizePmf,
    pub grid: Grid,
}

pub fn random_dfr_scenario(rng: &mut TestRng, grid_points: usize) -> RandomScenario {
    let shape = rng.in_range(0.35, 0.95);
    let rate = rng.in_range(0.5, 3.0);
    let base = DistSpec::weibull(shape, rate).unwrap();
    let mut mu: Vec<f64> = (0..5).map(|_| rng.in_range(0.0, 0.6)).collect();
    mu.sort_by(|a, b| a.partial_cmp(b).unwrap());
    let lambda: Vec<f64> = mu.iter().map(|&m| m + rng.in_range(0.0, 0.3)).collect();
    let fam_x = ComponentFamily::from_shifts(base, &lambda, "X").unwrap();
    let fam_y = ComponentFamily::from_shifts(base, &mu, "Y").unwrap();
    let w3 = rng.in_range(0.1, 0.8);
    let w4 = rng.in_range(0.1, 1.0 - w3 - 0.05);
    let pmf = SizePmf::explicit(vec![(3, w3), (4, w4), (5, 1.0 - w3 - w4)]).unwrap();
    let max_shift = lambda.iter().cloned().fold(0.0f64, f64::max);
    let grid = Grid::neg_log_unit_above(grid_points, max_shift);
    RandomScenario {
        fam_x,
        fam_y,
        pmf,
        grid,
    }
}
