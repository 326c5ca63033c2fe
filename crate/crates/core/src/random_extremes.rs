//! Mixture laws of the minimum / maximum over a random component count `N`:
//! the cdf of the random maximum is the pmf-weighted sum of fixed-size
//! maximum cdfs, and likewise for the survival of the random minimum.
//!
//! Pmfs with infinite support are tail-truncated, never renormalized; the
//! excluded mass is tracked so bounds can carry the slack explicitly.

use std::str::FromStr;

use crate::dist::DistSpec;
use crate::error::{Error, Result};
use crate::extremes::{ComponentFamily, ExtremeKind, SystemSpec};

/// Largest residual mass a pmf may carry and still be accepted into
/// mixture computations.
pub const MAX_ACCEPTED_TAIL: f64 = 1e-9;

const PMF_MASS_TOL: f64 = 1e-12;

/// Neumaier compensated summation.
#[derive(Debug, Clone, Copy, Default)]
pub(crate) struct CompensatedSum {
    sum: f64,
    comp: f64,
}

impl CompensatedSum {
    pub fn add(&mut self, v: f64) {
        let t = self.sum + v;
        if self.sum.abs() >= v.abs() {
            self.comp += (self.sum - t) + v;
        } else {
            self.comp += (v - t) + self.sum;
        }
        self.sum = t;
    }

    pub fn value(&self) -> f64 {
        self.sum + self.comp
    }
}

/// Pmf of the random count `N` on positive integers, finite or
/// tail-truncated.
#[derive(Debug, Clone, PartialEq)]
pub struct SizePmf {
    atoms: Vec<(u32, f64)>,
    truncation_tail: f64,
    source: String,
}

impl SizePmf {
    /// Finite pmf given explicitly; masses must sum to 1.
    pub fn explicit(mut atoms: Vec<(u32, f64)>) -> Result<Self> {
        atoms.sort_by_key(|&(n, _)| n);
        Self::validated(atoms, 0.0, "explicit")
    }

    fn validated(atoms: Vec<(u32, f64)>, truncation_tail: f64, source: &str) -> Result<Self> {
        if atoms.is_empty() {
            return Err(Error::InvalidPmf("no atoms".into()));
        }
        let mut mass = CompensatedSum::default();
        let mut prev_n = 0u32;
        for &(n, p) in &atoms {
            if n == 0 {
                return Err(Error::InvalidPmf("atom at n = 0".into()));
            }
            if n <= prev_n {
                return Err(Error::InvalidPmf(format!("duplicate or unsorted atom n = {n}")));
            }
            #[allow(clippy::neg_cmp_op_on_partial_ord)] // NaN masses must fail
            if !(p > 0.0) || p > 1.0 {
                return Err(Error::InvalidPmf(format!("mass {p} at n = {n} outside (0, 1]")));
            }
            prev_n = n;
            mass.add(p);
        }
        let total = mass.value() + truncation_tail;
        if (total - 1.0).abs() > PMF_MASS_TOL {
            return Err(Error::InvalidPmf(format!(
                "mass + tail = {total} differs from 1 beyond {PMF_MASS_TOL:e}"
            )));
        }
        Ok(Self {
            atoms,
            truncation_tail,
            source: source.into(),
        })
    }

    /// Geometric on positive integers, `p(n) = (1-q) q^(n-1)`, truncated at
    /// the smallest `n_max` with residual mass `q^n_max < tail_bound`.
    pub fn geometric(q: f64, tail_bound: f64) -> Result<Self> {
        if !(q > 0.0 && q < 1.0) {
            return Err(Error::InvalidParameter {
                name: "q",
                value: q,
                reason: "geometric parameter must lie in (0, 1)",
            });
        }
        check_tail_bound(tail_bound)?;
        let n_max = (tail_bound.ln() / q.ln()).floor() as u32 + 1;
        debug_assert!(q.powi(n_max as i32) < tail_bound);
        let mut atoms = Vec::with_capacity(n_max as usize);
        let mut p = 1.0 - q;
        for n in 1..=n_max {
            atoms.push((n, p));
            p *= q;
        }
        let tail = q.powi(n_max as i32);
        Self::validated(atoms, tail, &format!("geometric({q}) preset, tail {tail:e}"))
    }

    /// `N = 1 + Poisson(mu)`, truncated once the remaining mass drops below
    /// `tail_bound`.
    pub fn poisson_shifted(mu: f64, tail_bound: f64) -> Result<Self> {
        #[allow(clippy::neg_cmp_op_on_partial_ord)] // NaN means must fail
        if !(mu > 0.0) || !mu.is_finite() {
            return Err(Error::InvalidParameter {
                name: "mu",
                value: mu,
                reason: "Poisson mean must be finite and > 0",
            });
        }
        check_tail_bound(tail_bound)?;
        let mut atoms = Vec::new();
        let mut p = (-mu).exp(); // p(1) = e^-mu
        let mut covered = CompensatedSum::default();
        let mut n = 1u32;
        loop {
            atoms.push((n, p));
            covered.add(p);
            let tail = 1.0 - covered.value();
            if tail < tail_bound {
                return Self::validated(
                    atoms,
                    tail.max(0.0),
                    &format!("poisson-shifted({mu}) preset, tail {tail:e}"),
                );
            }
            if n > 100_000 {
                return Err(Error::NoConvergence {
                    x: mu,
                    n_max: n,
                    tail,
                });
            }
            p *= mu / n as f64;
            n += 1;
        }
    }

    pub fn atoms(&self) -> &[(u32, f64)] {
        &self.atoms
    }

    pub fn truncation_tail(&self) -> f64 {
        self.truncation_tail
    }

    /// Where the atoms came from; presets are flagged so reports can note
    /// that a concrete infinite-support pmf is an artifact convenience.
    pub fn source(&self) -> &str {
        &self.source
    }

    pub fn max_n(&self) -> u32 {
        self.atoms.last().map(|&(n, _)| n).unwrap_or(0)
    }

    pub fn min_n(&self) -> u32 {
        self.atoms.first().map(|&(n, _)| n).unwrap_or(0)
    }
}

fn check_tail_bound(tail_bound: f64) -> Result<()> {
    #[allow(clippy::neg_cmp_op_on_partial_ord)] // NaN bounds must fail
    if !(tail_bound > 0.0 && tail_bound <= MAX_ACCEPTED_TAIL) {
        return Err(Error::InvalidParameter {
            name: "tail_bound",
            value: tail_bound,
            reason: "must lie in (0, 1e-9]",
        });
    }
    Ok(())
}

/// Parses `geometric(q)`, `poisson-shifted(mu)` (both with a default
/// 1e-12 tail bound) or `explicit{n:p, ...}`.
impl FromStr for SizePmf {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        let s = s.trim();
        if let Some(rest) = s.strip_prefix("geometric(") {
            let q = parse_arg(rest.strip_suffix(')'), s)?;
            return SizePmf::geometric(q, 1e-12);
        }
        if let Some(rest) = s.strip_prefix("poisson-shifted(") {
            let mu = parse_arg(rest.strip_suffix(')'), s)?;
            return SizePmf::poisson_shifted(mu, 1e-12);
        }
        if let Some(rest) = s.strip_prefix("explicit{") {
            let body = rest
                .strip_suffix('}')
                .ok_or_else(|| Error::UnknownFamily(s.into()))?;
            let mut atoms = Vec::new();
            for pair in body.split(',') {
                let (n, p) = pair
                    .split_once(':')
                    .ok_or_else(|| Error::UnknownFamily(s.into()))?;
                let n: u32 = n.trim().parse().map_err(|_| Error::UnknownFamily(s.into()))?;
                let p: f64 = p.trim().parse().map_err(|_| Error::UnknownFamily(s.into()))?;
                atoms.push((n, p));
            }
            return SizePmf::explicit(atoms);
        }
        Err(Error::UnknownFamily(s.into()))
    }
}

fn parse_arg(inner: Option<&str>, whole: &str) -> Result<f64> {
    inner
        .and_then(|v| v.trim().parse().ok())
        .ok_or_else(|| Error::UnknownFamily(whole.into()))
}

/// Extreme over a random count `N`: the pmf mixture of fixed-size extremes.
#[derive(Debug, Clone)]
pub struct RandomExtremeSpec {
    family: ComponentFamily,
    pmf: SizePmf,
    kind: ExtremeKind,
}

impl RandomExtremeSpec {
    pub fn new(family: ComponentFamily, pmf: SizePmf, kind: ExtremeKind) -> Result<Self> {
        if pmf.max_n() as usize > family.len() {
            return Err(Error::ScenarioMismatch(format!(
                "pmf reaches n = {} but family `{}` has only {} components",
                pmf.max_n(),
                family.label(),
                family.len()
            )));
        }
        if pmf.truncation_tail() >= MAX_ACCEPTED_TAIL {
            return Err(Error::InvalidPmf(format!(
                "truncation tail {:e} too large for mixture computations",
                pmf.truncation_tail()
            )));
        }
        Ok(Self { family, pmf, kind })
    }

    pub fn family(&self) -> &ComponentFamily {
        &self.family
    }

    pub fn pmf(&self) -> &SizePmf {
        &self.pmf
    }

    pub fn kind(&self) -> ExtremeKind {
        self.kind
    }

    pub fn component(&self, i: usize) -> &DistSpec {
        &self.family.components()[i]
    }

    fn system(&self, n: u32) -> SystemSpec {
        // Atom range is validated at construction.
        SystemSpec::new(self.family.clone(), n as usize, self.kind).expect("validated atom range")
    }

    fn mix(&self, mut term: impl FnMut(&SystemSpec, f64) -> Result<f64>, x: f64) -> Result<f64> {
        let mut acc = CompensatedSum::default();
        for &(n, p) in self.pmf.atoms() {
            acc.add(p * term(&self.system(n), x)?);
        }
        Ok(acc.value())
    }

    /// Survival of the random minimum.
    pub fn rand_min_sf(&self, x: f64) -> Result<f64> {
        self.require(ExtremeKind::Min, "rand_min_sf")?;
        self.mix(|sys, x| sys.min_sf(x), x)
    }

    /// Cdf of the random maximum.
    pub fn rand_max_cdf(&self, x: f64) -> Result<f64> {
        self.require(ExtremeKind::Max, "rand_max_cdf")?;
        self.mix(|sys, x| sys.max_cdf(x), x)
    }

    /// Density of the random minimum.
    pub fn rand_min_pdf(&self, x: f64) -> Result<f64> {
        self.require(ExtremeKind::Min, "rand_min_pdf")?;
        self.mix(|sys, x| sys.min_pdf(x), x)
    }

    /// Density of the random maximum.
    pub fn rand_max_pdf(&self, x: f64) -> Result<f64> {
        self.require(ExtremeKind::Max, "rand_max_pdf")?;
        self.mix(|sys, x| sys.max_pdf(x), x)
    }

    /// Density of this mixture, per its kind.
    pub fn rand_pdf(&self, x: f64) -> Result<f64> {
        match self.kind {
            ExtremeKind::Min => self.rand_min_pdf(x),
            ExtremeKind::Max => self.rand_max_pdf(x),
        }
    }

    /// Mixture hazard rate `rand_min_pdf / rand_min_sf`.
    pub fn rand_hazard(&self, x: f64) -> Result<f64> {
        let sf = self.rand_min_sf(x)?;
        if sf <= 1e-300 {
            return Err(Error::ZeroDenominator { x });
        }
        Ok(self.rand_min_pdf(x)? / sf)
    }

    /// Mixture reversed hazard rate `rand_max_pdf / rand_max_cdf`.
    pub fn rand_rev_hazard(&self, x: f64) -> Result<f64> {
        let cdf = self.rand_max_cdf(x)?;
        if cdf <= 1e-300 {
            return Err(Error::ZeroDenominator { x });
        }
        Ok(self.rand_max_pdf(x)? / cdf)
    }

    fn require(&self, kind: ExtremeKind, op: &str) -> Result<()> {
        if self.kind != kind {
            return Err(Error::ScenarioMismatch(format!(
                "{op} requires a {kind:?} mixture"
            )));
        }
        Ok(())
    }
}
