//! Total-positivity (TP2/RR2) kernel checks, sign-change analysis of
//! sampled functions, and the variation-diminishing transform
//! `w(x) = sum_n f(n, x) K(n, x) weight(n)`, including the four
//! counterexample configurations where the sign-change bound does not hold.
//!
//! TP2/RR2 is verified on 2x2 minors of adjacent rows/columns only; for
//! strictly positive kernels adjacent minors imply all minors, and the cost
//! stays linear in the sample counts.

use crate::error::{Error, Result};
use crate::random_extremes::{CompensatedSum, SizePmf};

type Eval = Box<dyn Fn(u32, f64) -> f64 + Send + Sync>;

/// Strictly positive kernel `K(n, x)`.
pub struct Kernel {
    name: String,
    eval: Eval,
}

impl Kernel {
    pub fn new(name: impl Into<String>, eval: impl Fn(u32, f64) -> f64 + Send + Sync + 'static) -> Self {
        Self {
            name: name.into(),
            eval: Box::new(eval),
        }
    }

    pub fn name(&self) -> &str {
        &self.name
    }

    pub fn eval(&self, n: u32, x: f64) -> f64 {
        (self.eval)(n, x)
    }
}

impl std::fmt::Debug for Kernel {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        f.debug_struct("Kernel").field("name", &self.name).finish()
    }
}

/// Possibly sign-changing sequence of functions `f(n, x)`.
pub struct SignedSequenceFn {
    name: String,
    eval: Eval,
}

impl SignedSequenceFn {
    pub fn new(name: impl Into<String>, eval: impl Fn(u32, f64) -> f64 + Send + Sync + 'static) -> Self {
        Self {
            name: name.into(),
            eval: Box::new(eval),
        }
    }

    pub fn name(&self) -> &str {
        &self.name
    }

    pub fn eval(&self, n: u32, x: f64) -> f64 {
        (self.eval)(n, x)
    }
}

impl std::fmt::Debug for SignedSequenceFn {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        f.debug_struct("SignedSequenceFn")
            .field("name", &self.name)
            .finish()
    }
}

/// Outcome of a TP2/RR2 minor sweep. `worst_violation` is relative to the
/// magnitude of the products entering the worst minor.
#[derive(Debug, Clone, PartialEq)]
pub struct KernelVerdict {
    pub holds: bool,
    pub worst_violation: f64,
    pub violation_at: Option<(u32, f64)>,
    pub minors_checked: usize,
}

fn check_minors(
    kernel: &Kernel,
    n_grid: &[u32],
    x_grid: &[f64],
    tol: f64,
    want_nonnegative: bool,
) -> Result<KernelVerdict> {
    // Sample once; the minor sweep then reuses the table.
    let mut table = vec![vec![0.0f64; x_grid.len()]; n_grid.len()];
    for (i, &n) in n_grid.iter().enumerate() {
        for (j, &x) in x_grid.iter().enumerate() {
            let v = kernel.eval(n, x);
            if !v.is_finite() || v <= 0.0 {
                return Err(Error::NonPositiveKernel { n, x, value: v });
            }
            table[i][j] = v;
        }
    }
    let mut worst = f64::NEG_INFINITY;
    let mut at = None;
    let mut minors = 0usize;
    for i in 0..n_grid.len().saturating_sub(1) {
        for j in 0..x_grid.len().saturating_sub(1) {
            let main = table[i][j] * table[i + 1][j + 1];
            let anti = table[i + 1][j] * table[i][j + 1];
            let minor = main - anti;
            let scale = main.abs().max(anti.abs()).max(f64::MIN_POSITIVE);
            let v = if want_nonnegative { -minor } else { minor } / scale;
            minors += 1;
            if v > worst {
                worst = v;
                at = Some((n_grid[i], x_grid[j]));
            }
        }
    }
    let worst = if minors == 0 { 0.0 } else { worst };
    Ok(KernelVerdict {
        holds: worst <= tol,
        worst_violation: worst,
        violation_at: at,
        minors_checked: minors,
    })
}

/// TP2: every adjacent 2x2 minor nonnegative (within `tol` times the
/// product magnitude).
pub fn check_tp2(kernel: &Kernel, n_grid: &[u32], x_grid: &[f64], tol: f64) -> Result<KernelVerdict> {
    check_minors(kernel, n_grid, x_grid, tol, true)
}

/// RR2: every adjacent 2x2 minor nonpositive.
pub fn check_rr2(kernel: &Kernel, n_grid: &[u32], x_grid: &[f64], tol: f64) -> Result<KernelVerdict> {
    check_minors(kernel, n_grid, x_grid, tol, false)
}

/// Signs of sampled values outside a dead band, run-compressed, with the
/// bracketing interval of every sign change.
#[derive(Debug, Clone, PartialEq)]
pub struct SignChangeReport {
    pub samples: Vec<(f64, f64)>,
    pub dead_band: f64,
    pub count: usize,
    pub pattern: String,
    pub change_locations: Vec<(f64, f64)>,
}

/// Counts sign alternations of x-sorted samples. Values with
/// `|v| <= dead_band` carry no sign and cannot trigger a change.
pub fn sign_changes(samples: &[(f64, f64)], dead_band: f64) -> SignChangeReport {
    debug_assert!(samples.windows(2).all(|w| w[0].0 <= w[1].0));
    let mut pattern = String::new();
    let mut change_locations = Vec::new();
    let mut last: Option<(f64, char)> = None;
    for &(x, v) in samples {
        let sign = if v > dead_band {
            '+'
        } else if v < -dead_band {
            '-'
        } else {
            continue;
        };
        match last {
            Some((lx, ls)) if ls != sign => {
                change_locations.push((lx, x));
                pattern.push(sign);
            }
            None => pattern.push(sign),
            _ => {}
        }
        last = Some((x, sign));
    }
    SignChangeReport {
        samples: samples.to_vec(),
        dead_band,
        count: change_locations.len(),
        pattern,
        change_locations,
    }
}

/// One evaluation of the transform at a grid point.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct VdSample {
    pub x: f64,
    pub value: f64,
    /// Geometric bound on the dropped tail (0 for finite pmf weights).
    pub tail_bound: f64,
    pub terms_used: u32,
}

pub const DEFAULT_N_MAX: u32 = 10_000;

const TAIL_ABS: f64 = 1e-12;
const TAIL_REL: f64 = 1e-10;

/// Sums `f(n, x) K(n, x) weight(n)` over n with compensated summation.
///
/// With `weights: None` the sum runs over all n from 1 and stops once the
/// last-term geometric bound certifies the dropped tail is below
/// `1e-12` absolute or `1e-10` of the partial sum; `NoConvergence` if the
/// bound is still unmet at `n_max`. With pmf weights the support is finite
/// and the sum exact.
pub fn vd_transform(
    f: &SignedSequenceFn,
    kernel: &Kernel,
    weights: Option<&SizePmf>,
    x_grid: &[f64],
    n_max: u32,
) -> Result<Vec<VdSample>> {
    vd_transform_with_tol(f, kernel, weights, x_grid, n_max, TAIL_ABS, TAIL_REL)
}

/// [`vd_transform`] with explicit tail tolerances: the sum stops once the
/// geometric tail bound drops below `max(tail_abs, tail_rel * |partial|)`.
pub fn vd_transform_with_tol(
    f: &SignedSequenceFn,
    kernel: &Kernel,
    weights: Option<&SizePmf>,
    x_grid: &[f64],
    n_max: u32,
    tail_abs: f64,
    tail_rel: f64,
) -> Result<Vec<VdSample>> {
    if let Some(pmf) = weights {
        if pmf.max_n() > n_max {
            return Err(Error::ScenarioMismatch(format!(
                "pmf reaches n = {} beyond n_max = {n_max}",
                pmf.max_n()
            )));
        }
        return x_grid
            .iter()
            .map(|&x| {
                let mut acc = CompensatedSum::default();
                for &(n, p) in pmf.atoms() {
                    acc.add(p * f.eval(n, x) * kernel.eval(n, x));
                }
                Ok(VdSample {
                    x,
                    value: acc.value(),
                    tail_bound: 0.0,
                    terms_used: pmf.atoms().len() as u32,
                })
            })
            .collect();
    }

    x_grid
        .iter()
        .map(|&x| {
            let mut acc = CompensatedSum::default();
            let mut prev_term = 0.0f64;
            let mut prev_rho = f64::INFINITY;
            for n in 1..=n_max {
                let term = f.eval(n, x) * kernel.eval(n, x);
                acc.add(term);
                let (abs, prev_abs) = (term.abs(), prev_term.abs());
                if n >= 2 {
                    // Two consecutive exactly-zero terms: the tail is zero.
                    if abs == 0.0 && prev_abs == 0.0 {
                        return Ok(VdSample {
                            x,
                            value: acc.value(),
                            tail_bound: 0.0,
                            terms_used: n,
                        });
                    }
                    if prev_abs > 0.0 && abs > 0.0 {
                        let rho = abs / prev_abs;
                        // Near the sign change of f one term dips toward
                        // zero and the magnitudes grow back afterwards, so
                        // a lone small ratio proves nothing. Certify the
                        // tail only from two same-sign terms with both
                        // recent ratios contracting, and anchor the bound
                        // on the larger magnitude.
                        let same_sign = (term > 0.0) == (prev_term > 0.0);
                        let bound_rho = rho.max(prev_rho);
                        if same_sign && bound_rho < 0.9999 {
                            let tail = abs.max(prev_abs) * bound_rho / (1.0 - bound_rho);
                            if tail <= tail_abs.max(tail_rel * acc.value().abs()) {
                                return Ok(VdSample {
                                    x,
                                    value: acc.value(),
                                    tail_bound: tail,
                                    terms_used: n,
                                });
                            }
                        }
                        prev_rho = rho;
                    } else {
                        prev_rho = f64::INFINITY;
                    }
                }
                prev_term = term;
            }
            // Final chance: the loop may end exactly at the bound.
            Err(Error::NoConvergence {
                x,
                n_max,
                tail: prev_term.abs(),
            })
        })
        .collect()
}

// ---------------------------------------------------------------------------
// Proposition drivers
// ---------------------------------------------------------------------------

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum PropositionId {
    P31,
    P32,
    P33,
    P34,
}

impl PropositionId {
    pub fn label(self) -> &'static str {
        match self {
            PropositionId::P31 => "3.1",
            PropositionId::P32 => "3.2",
            PropositionId::P33 => "3.3",
            PropositionId::P34 => "3.4",
        }
    }

    /// RR2 kernels for 3.1/3.2, TP2 for 3.3/3.4.
    fn kernel_is_rr2(self) -> bool {
        matches!(self, PropositionId::P31 | PropositionId::P32)
    }

    /// f decreasing in x for 3.1/3.3, increasing for 3.2/3.4.
    fn f_decreasing_in_x(self) -> bool {
        matches!(self, PropositionId::P31 | PropositionId::P33)
    }

    /// f changes sign negative-to-positive in n for 3.1/3.4,
    /// positive-to-negative for 3.2/3.3.
    fn f_neg_to_pos_in_n(self) -> bool {
        matches!(self, PropositionId::P31 | PropositionId::P34)
    }

    /// Concluded w pattern: positive-to-negative for 3.1/3.3,
    /// negative-to-positive for 3.2/3.4.
    pub fn w_pos_to_neg(self) -> bool {
        matches!(self, PropositionId::P31 | PropositionId::P33)
    }
}

impl std::str::FromStr for PropositionId {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s.trim() {
            "3.1" => Ok(PropositionId::P31),
            "3.2" => Ok(PropositionId::P32),
            "3.3" => Ok(PropositionId::P33),
            "3.4" => Ok(PropositionId::P34),
            other => Err(Error::ScenarioMismatch(format!(
                "unknown proposition id `{other}`"
            ))),
        }
    }
}

/// Pass/fail of one numeric hypothesis check with the worst offending
/// sample.
#[derive(Debug, Clone, PartialEq)]
pub struct HypothesisCheck {
    pub label: String,
    pub holds: bool,
    pub worst_violation: f64,
    pub at: Option<(u32, f64)>,
}

#[derive(Debug, Clone)]
pub struct PropositionReport {
    pub id: String,
    pub kernel: KernelVerdict,
    pub kernel_label: String,
    pub f_monotone: HypothesisCheck,
    pub f_sign_pattern: HypothesisCheck,
    pub transform: Vec<VdSample>,
    pub sign_report: SignChangeReport,
    pub conclusion_holds: bool,
    pub classification: crate::ordering::Classification,
}

/// Checks the proposition's three hypotheses on the sampled grids, runs
/// the transform, and tests the concluded sign-change bound.
#[allow(clippy::too_many_arguments)]
pub fn verify_proposition(
    id: PropositionId,
    f: &SignedSequenceFn,
    kernel: &Kernel,
    n_grid: &[u32],
    x_grid: &[f64],
    weights: Option<&SizePmf>,
    n_max: u32,
    tol: f64,
) -> Result<PropositionReport> {
    use crate::ordering::Classification;

    let (kernel_verdict, kernel_label) = if id.kernel_is_rr2() {
        (
            check_rr2(kernel, n_grid, x_grid, tol)?,
            format!("kernel `{}` is RR2", kernel.name()),
        )
    } else {
        (
            check_tp2(kernel, n_grid, x_grid, tol)?,
            format!("kernel `{}` is TP2", kernel.name()),
        )
    };

    // f monotone in x for each sampled n.
    let mut f_scale = f64::MIN_POSITIVE;
    for &n in n_grid {
        for &x in x_grid {
            f_scale = f_scale.max(f.eval(n, x).abs());
        }
    }
    let decreasing = id.f_decreasing_in_x();
    let mut worst = f64::NEG_INFINITY;
    let mut at = None;
    for &n in n_grid {
        for w in x_grid.windows(2) {
            let (v0, v1) = (f.eval(n, w[0]), f.eval(n, w[1]));
            let v = if decreasing { v1 - v0 } else { v0 - v1 } / f_scale;
            if v > worst {
                worst = v;
                at = Some((n, w[1]));
            }
        }
    }
    let f_monotone = HypothesisCheck {
        label: format!(
            "f {} in x for each n",
            if decreasing { "decreasing" } else { "increasing" }
        ),
        holds: worst <= tol,
        worst_violation: worst,
        at,
    };

    // f has at most one sign change in n, in the stated direction, at each x.
    let want_neg_to_pos = id.f_neg_to_pos_in_n();
    let dead = tol * f_scale;
    let mut sign_ok = true;
    let mut sign_at = None;
    let mut extra = 0.0f64;
    for &x in x_grid {
        let samples: Vec<(f64, f64)> = n_grid.iter().map(|&n| (n as f64, f.eval(n, x))).collect();
        let rep = sign_changes(&samples, dead);
        let direction_ok = match rep.count {
            0 => true,
            1 => {
                let expected = if want_neg_to_pos { "-+" } else { "+-" };
                rep.pattern == expected
            }
            _ => false,
        };
        if !direction_ok {
            sign_ok = false;
            extra = extra.max(rep.count as f64);
            if sign_at.is_none() {
                sign_at = Some((n_grid[0], x));
            }
        }
    }
    let f_sign_pattern = HypothesisCheck {
        label: format!(
            "f changes sign at most once in n, {}",
            if want_neg_to_pos {
                "negative to positive"
            } else {
                "positive to negative"
            }
        ),
        holds: sign_ok,
        worst_violation: if sign_ok { 0.0 } else { extra },
        at: sign_at,
    };

    let transform = vd_transform(f, kernel, weights, x_grid, n_max)?;
    let samples: Vec<(f64, f64)> = transform.iter().map(|s| (s.x, s.value)).collect();
    let max_abs = samples.iter().fold(0.0f64, |m, &(_, v)| m.max(v.abs()));
    let sign_report = sign_changes(&samples, 1e-10 * max_abs);
    let conclusion_holds = match sign_report.count {
        0 => true,
        1 => {
            let expected = if id.w_pos_to_neg() { "+-" } else { "-+" };
            sign_report.pattern == expected
        }
        _ => false,
    };

    let hypotheses_hold = kernel_verdict.holds && f_monotone.holds && f_sign_pattern.holds;
    let classification = if !hypotheses_hold {
        Classification::HypothesisFail
    } else if conclusion_holds {
        Classification::Consistent
    } else {
        Classification::Anomaly
    };
    Ok(PropositionReport {
        id: id.label().into(),
        kernel: kernel_verdict,
        kernel_label,
        f_monotone,
        f_sign_pattern,
        transform,
        sign_report,
        conclusion_holds,
        classification,
    })
}

/// One bundled positive configuration for a proposition: all hypotheses
/// hold, the transform has a known closed form, and the concluded sign
/// pattern is pinned.
pub struct PropositionScenario {
    pub name: &'static str,
    pub id: PropositionId,
    pub f: SignedSequenceFn,
    pub kernel: Kernel,
    pub x_grid: Vec<f64>,
    pub n_max: u32,
    pub closed_form: fn(f64) -> f64,
    pub expected_pattern: &'static str,
}

fn lin_grid(lo: f64, hi: f64, n: usize) -> Vec<f64> {
    (0..n)
        .map(|i| lo + (hi - lo) * i as f64 / (n - 1) as f64)
        .collect()
}

/// Two synthetic positive scenarios per proposition. The second of each
/// pair negates the first of the mirrored proposition, so the closed
/// forms cross-check the series summation both ways.
pub fn bundled_proposition_scenarios() -> Vec<PropositionScenario> {
    fn exp_kernel() -> Kernel {
        Kernel::new("e^{-nx}", |n, x| (-(n as f64) * x).exp())
    }
    fn inv_pow_kernel() -> Kernel {
        Kernel::new("1/(n x^n)", |n, x| 1.0 / (n as f64 * x.powi(n as i32)))
    }
    fn pow_over_n_kernel() -> Kernel {
        Kernel::new("x^n/n", |n, x| x.powi(n as i32) / n as f64)
    }
    fn pow_kernel() -> Kernel {
        Kernel::new("x^n", |n, x| x.powi(n as i32))
    }
    // Geometric sums: sum n e^{-nx} = e^{-x}/(1-e^{-x})^2 and friends.
    fn exp_closed(x: f64) -> f64 {
        let e = (-x).exp();
        e / (1.0 - e).powi(2) - (3.0 + x) * e / (1.0 - e)
    }
    fn inv_pow_closed(x: f64) -> f64 {
        1.0 / (x - 1.0) + (5.0 + x) * (1.0 - 1.0 / x).ln()
    }
    fn unit_log_closed(x: f64) -> f64 {
        -(5.0 - x) * (1.0 - x).ln() - x / (1.0 - x)
    }
    fn unit_rational_closed(x: f64) -> f64 {
        x * (1.0 - 3.0 * x + x * x) / (1.0 - x).powi(2)
    }
    fn neg_exp_closed(x: f64) -> f64 {
        -exp_closed(x)
    }
    fn neg_inv_pow_closed(x: f64) -> f64 {
        -inv_pow_closed(x)
    }
    fn neg_unit_log_closed(x: f64) -> f64 {
        -unit_log_closed(x)
    }
    fn neg_unit_rational_closed(x: f64) -> f64 {
        -unit_rational_closed(x)
    }
    vec![
        PropositionScenario {
            name: "p31_exp",
            id: PropositionId::P31,
            f: SignedSequenceFn::new("n - 3 - x", |n, x| n as f64 - 3.0 - x),
            kernel: exp_kernel(),
            x_grid: lin_grid(0.2, 8.0, 1000),
            n_max: 2000,
            closed_form: exp_closed,
            expected_pattern: "+-",
        },
        PropositionScenario {
            name: "p31_inv_pow",
            id: PropositionId::P31,
            f: SignedSequenceFn::new("n - 5 - x", |n, x| n as f64 - 5.0 - x),
            kernel: inv_pow_kernel(),
            x_grid: lin_grid(1.2, 30.0, 1000),
            n_max: 10_000,
            closed_form: inv_pow_closed,
            expected_pattern: "+-",
        },
        PropositionScenario {
            name: "p32_exp",
            id: PropositionId::P32,
            f: SignedSequenceFn::new("3 + x - n", |n, x| 3.0 + x - n as f64),
            kernel: exp_kernel(),
            x_grid: lin_grid(0.2, 8.0, 1000),
            n_max: 2000,
            closed_form: neg_exp_closed,
            expected_pattern: "-+",
        },
        PropositionScenario {
            name: "p32_inv_pow",
            id: PropositionId::P32,
            f: SignedSequenceFn::new("5 + x - n", |n, x| 5.0 + x - n as f64),
            kernel: inv_pow_kernel(),
            x_grid: lin_grid(1.2, 30.0, 1000),
            n_max: 10_000,
            closed_form: neg_inv_pow_closed,
            expected_pattern: "-+",
        },
        PropositionScenario {
            name: "p33_pow_over_n",
            id: PropositionId::P33,
            f: SignedSequenceFn::new("5 - x - n", |n, x| 5.0 - x - n as f64),
            kernel: pow_over_n_kernel(),
            x_grid: lin_grid(1e-3, 0.999, 1000),
            n_max: 60_000,
            closed_form: unit_log_closed,
            expected_pattern: "+-",
        },
        PropositionScenario {
            name: "p33_pow",
            id: PropositionId::P33,
            f: SignedSequenceFn::new("2 - x - n", |n, x| 2.0 - x - n as f64),
            kernel: pow_kernel(),
            x_grid: lin_grid(1e-3, 0.999, 1000),
            n_max: 60_000,
            closed_form: unit_rational_closed,
            expected_pattern: "+-",
        },
        PropositionScenario {
            name: "p34_pow_over_n",
            id: PropositionId::P34,
            f: SignedSequenceFn::new("n + x - 5", |n, x| n as f64 + x - 5.0),
            kernel: pow_over_n_kernel(),
            x_grid: lin_grid(1e-3, 0.999, 1000),
            n_max: 60_000,
            closed_form: neg_unit_log_closed,
            expected_pattern: "-+",
        },
        PropositionScenario {
            name: "p34_pow",
            id: PropositionId::P34,
            f: SignedSequenceFn::new("n + x - 2", |n, x| n as f64 + x - 2.0),
            kernel: pow_kernel(),
            x_grid: lin_grid(1e-3, 0.999, 1000),
            n_max: 60_000,
            closed_form: neg_unit_rational_closed,
            expected_pattern: "-+",
        },
    ]
}

// ---------------------------------------------------------------------------
// Counterexample reproduction
// ---------------------------------------------------------------------------

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum CounterCase {
    I,
    II,
    III,
    IV,
}

impl CounterCase {
    pub const ALL: [CounterCase; 4] = [
        CounterCase::I,
        CounterCase::II,
        CounterCase::III,
        CounterCase::IV,
    ];

    pub fn label(self) -> &'static str {
        match self {
            CounterCase::I => "I",
            CounterCase::II => "II",
            CounterCase::III => "III",
            CounterCase::IV => "IV",
        }
    }
}

impl std::str::FromStr for CounterCase {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s.trim().to_uppercase().as_str() {
            "I" | "1" => Ok(CounterCase::I),
            "II" | "2" => Ok(CounterCase::II),
            "III" | "3" => Ok(CounterCase::III),
            "IV" | "4" => Ok(CounterCase::IV),
            other => Err(Error::ScenarioMismatch(format!(
                "unknown counterexample case `{other}`"
            ))),
        }
    }
}

#[derive(Debug, Clone)]
pub struct CounterexampleRun {
    pub case: CounterCase,
    /// (x, partial-sum series value, closed-form value)
    pub samples: Vec<(f64, f64, f64)>,
    pub report: SignChangeReport,
    pub max_abs_diff: f64,
}

/// Canonical evaluation grid per case: log-spaced offsets from 1 on
/// (1, 50] for I/II, uniform on (0, 1) for III/IV. Both stop 1e-3 short of
/// the singular endpoint, where the series still converges geometrically.
pub fn counterexample_grid(case: CounterCase, points: usize) -> Vec<f64> {
    match case {
        CounterCase::I | CounterCase::II => {
            let (lo, hi) = (1e-3f64.ln(), 49.0f64.ln());
            let step = (hi - lo) / (points - 1) as f64;
            (0..points).map(|i| 1.0 + (lo + step * i as f64).exp()).collect()
        }
        CounterCase::III | CounterCase::IV => {
            let (lo, hi) = (1e-3, 1.0 - 1e-3);
            let step = (hi - lo) / (points - 1) as f64;
            (0..points).map(|i| lo + step * i as f64).collect()
        }
    }
}

/// Terms converge like (1/x)^n or x^n; near the 1e-3 endpoint offset the
/// default cap of 10000 is not enough for a 1e-12 tail, so the driver
/// raises it.
const COUNTEREXAMPLE_N_MAX: u32 = 40_000;
const COUNTEREXAMPLE_POINTS: usize = 5_000;

fn case_parts(case: CounterCase) -> (SignedSequenceFn, Kernel, fn(f64) -> f64) {
    fn w1(x: f64) -> f64 {
        x / (x - 1.0) + 5.0 * (1.0 - 1.0 / x).ln()
    }
    fn w2(x: f64) -> f64 {
        x / (1.0 - x) + 10.0 * x * (1.0 - x).ln()
    }
    fn neg_w1(x: f64) -> f64 {
        -w1(x)
    }
    fn neg_w2(x: f64) -> f64 {
        -w2(x)
    }
    match case {
        CounterCase::I => (
            SignedSequenceFn::new("n x - 5", |n, x| n as f64 * x - 5.0),
            Kernel::new("1/(n x^n)", |n, x| 1.0 / (n as f64 * x.powi(n as i32))),
            w1,
        ),
        CounterCase::II => (
            SignedSequenceFn::new("5 - n x", |n, x| 5.0 - n as f64 * x),
            Kernel::new("1/(n x^n)", |n, x| 1.0 / (n as f64 * x.powi(n as i32))),
            neg_w1,
        ),
        CounterCase::III => (
            SignedSequenceFn::new("n - 10 x", |n, x| n as f64 - 10.0 * x),
            Kernel::new("x^n/n", |n, x| x.powi(n as i32) / n as f64),
            w2,
        ),
        CounterCase::IV => (
            SignedSequenceFn::new("10 x - n", |n, x| 10.0 * x - n as f64),
            Kernel::new("x^n/n", |n, x| x.powi(n as i32) / n as f64),
            neg_w2,
        ),
    }
}

/// Evaluates one counterexample case on its canonical grid through both
/// paths (partial sums and the closed form) and reports the sign changes
/// of the series values.
pub fn counterexample(case: CounterCase) -> Result<CounterexampleRun> {
    let grid = counterexample_grid(case, COUNTEREXAMPLE_POINTS);
    let (f, kernel, closed) = case_parts(case);
    // The series/closed-form comparison is held to 1e-8 absolute, so the
    // default relative tail rule (1e-10 of |w|, large near the endpoint)
    // is not tight enough here.
    let series = vd_transform_with_tol(&f, &kernel, None, &grid, COUNTEREXAMPLE_N_MAX, 1e-10, 0.0)?;
    let mut samples = Vec::with_capacity(grid.len());
    let mut max_abs_diff = 0.0f64;
    for s in &series {
        let c = closed(s.x);
        max_abs_diff = max_abs_diff.max((s.value - c).abs());
        samples.push((s.x, s.value, c));
    }
    let series_only: Vec<(f64, f64)> = samples.iter().map(|&(x, v, _)| (x, v)).collect();
    let max_abs = series_only.iter().fold(0.0f64, |m, &(_, v)| m.max(v.abs()));
    let report = sign_changes(&series_only, 1e-10 * max_abs);
    Ok(CounterexampleRun {
        case,
        samples,
        report,
        max_abs_diff,
    })
}
