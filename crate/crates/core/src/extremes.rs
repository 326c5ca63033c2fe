//! Minimum and maximum of the first `n` components of a family of
//! independent, non-identical lifetimes (series / parallel system of size
//! `n`).
//!
//! The survival of the minimum is the product of component survivals and
//! its hazard the sum of component hazards; the maximum is the exact dual
//! with cdfs and reversed hazards. Products are formed as exponentials of
//! summed logs.

use crate::dist::DistSpec;
use crate::error::{Error, Result};

/// Ordered sequence of component lifetimes. A size-`n` system uses the
/// first `n` entries.
#[derive(Debug, Clone, PartialEq)]
pub struct ComponentFamily {
    components: Vec<DistSpec>,
    label: String,
}

impl ComponentFamily {
    pub fn new(components: Vec<DistSpec>, label: impl Into<String>) -> Self {
        Self {
            components,
            label: label.into(),
        }
    }

    /// Location-shift family: `base` shifted by each entry of `shifts`.
    /// The base must itself be unshifted.
    pub fn from_shifts(base: DistSpec, shifts: &[f64], label: impl Into<String>) -> Result<Self> {
        if base.shift() != 0.0 {
            return Err(Error::InvalidParameter {
                name: "base.shift",
                value: base.shift(),
                reason: "shift family requires an unshifted base",
            });
        }
        let components = shifts
            .iter()
            .map(|&s| base.with_shift(s))
            .collect::<Result<Vec<_>>>()?;
        Ok(Self::new(components, label))
    }

    pub fn len(&self) -> usize {
        self.components.len()
    }

    pub fn is_empty(&self) -> bool {
        self.components.is_empty()
    }

    pub fn label(&self) -> &str {
        &self.label
    }

    pub fn components(&self) -> &[DistSpec] {
        &self.components
    }

    /// Largest support start among the first `n` components.
    pub fn max_shift(&self, n: usize) -> f64 {
        self.components[..n]
            .iter()
            .map(|d| d.support_start())
            .fold(f64::NEG_INFINITY, f64::max)
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum ExtremeKind {
    Min,
    Max,
}

/// Extreme (min or max) of the first `n` components of a family.
#[derive(Debug, Clone)]
pub struct SystemSpec {
    family: ComponentFamily,
    n: usize,
    kind: ExtremeKind,
}

impl SystemSpec {
    pub fn new(family: ComponentFamily, n: usize, kind: ExtremeKind) -> Result<Self> {
        if n == 0 || n > family.len() {
            return Err(Error::InvalidSystemSize {
                n,
                len: family.len(),
            });
        }
        Ok(Self { family, n, kind })
    }

    pub fn n(&self) -> usize {
        self.n
    }

    pub fn kind(&self) -> ExtremeKind {
        self.kind
    }

    pub fn family(&self) -> &ComponentFamily {
        &self.family
    }

    fn components(&self) -> &[DistSpec] {
        &self.family.components()[..self.n]
    }

    fn require(&self, kind: ExtremeKind, op: &str) -> Result<()> {
        if self.kind != kind {
            return Err(Error::ScenarioMismatch(format!(
                "{op} requires a {kind:?} system"
            )));
        }
        Ok(())
    }

    /// Survival of the minimum: product of component survivals.
    pub fn min_sf(&self, x: f64) -> Result<f64> {
        self.require(ExtremeKind::Min, "min_sf")?;
        Ok(self.log_min_sf(x).exp())
    }

    pub fn log_min_sf(&self, x: f64) -> f64 {
        self.components().iter().map(|d| d.log_sf(x)).sum()
    }

    /// Cdf of the maximum: product of component cdfs.
    pub fn max_cdf(&self, x: f64) -> Result<f64> {
        self.require(ExtremeKind::Max, "max_cdf")?;
        Ok(self.log_max_cdf(x).exp())
    }

    pub fn log_max_cdf(&self, x: f64) -> f64 {
        self.components().iter().map(|d| d.log_cdf(x)).sum()
    }

    /// Hazard of the minimum: sum of component hazards. Singular if any
    /// component is at its support endpoint with shape < 1.
    pub fn min_hazard(&self, x: f64) -> Result<f64> {
        self.require(ExtremeKind::Min, "min_hazard")?;
        let mut sum = 0.0;
        for d in self.components() {
            sum += d.hazard(x)?;
        }
        Ok(sum)
    }

    /// Reversed hazard of the maximum: sum of component reversed hazards.
    pub fn max_rev_hazard(&self, x: f64) -> Result<f64> {
        self.require(ExtremeKind::Max, "max_rev_hazard")?;
        let mut sum = 0.0;
        for d in self.components() {
            sum += d.rev_hazard(x)?;
        }
        Ok(sum)
    }

    /// Density of the minimum: `min_sf * min_hazard`.
    pub fn min_pdf(&self, x: f64) -> Result<f64> {
        Ok(self.min_sf(x)? * self.min_hazard(x)?)
    }

    /// Density of the maximum: `max_cdf * max_rev_hazard`. Strictly below
    /// the largest support start the maximum carries no mass, so the
    /// density is zero there rather than an error; this matters for
    /// mixtures whose smaller subsystems are already active.
    pub fn max_pdf(&self, x: f64) -> Result<f64> {
        self.require(ExtremeKind::Max, "max_pdf")?;
        if x < self.family.max_shift(self.n) {
            return Ok(0.0);
        }
        Ok(self.max_cdf(x)? * self.max_rev_hazard(x)?)
    }
}
