//! Scenario file schema (TOML, versioned, unknown keys rejected) and its
//! conversion into core types.

use anyhow::{bail, Context, Result};
use serde::Deserialize;
use stochord_core::{
    ComponentFamily, DistSpec, ExtremeKind, Grid, RandomExtremeSpec, SimConfig, SizePmf,
};

#[derive(Debug, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct ScenarioFile {
    pub version: u32,
    #[serde(default)]
    pub label: Option<String>,
    pub kind: KindField,
    pub base: BaseSection,
    pub families: FamiliesSection,
    pub pmf: PmfSection,
    #[serde(default)]
    pub grid: GridSection,
    #[serde(default)]
    pub mc: Option<McSection>,
    #[serde(default)]
    pub run: Option<RunSection>,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum KindField {
    Min,
    Max,
}

impl From<KindField> for ExtremeKind {
    fn from(k: KindField) -> Self {
        match k {
            KindField::Min => ExtremeKind::Min,
            KindField::Max => ExtremeKind::Max,
        }
    }
}

#[derive(Debug, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct BaseSection {
    pub family: String,
    #[serde(default)]
    pub shape: Option<f64>,
    pub rate: f64,
}

#[derive(Debug, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct FamiliesSection {
    pub x_shifts: Vec<f64>,
    pub y_shifts: Vec<f64>,
}

#[derive(Debug, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct PmfSection {
    pub kind: String,
    #[serde(default)]
    pub atoms: Option<Vec<(u32, f64)>>,
    #[serde(default)]
    pub q: Option<f64>,
    #[serde(default)]
    pub mu: Option<f64>,
    #[serde(default)]
    pub tail_bound: Option<f64>,
}

#[derive(Debug, Default, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct GridSection {
    #[serde(default)]
    pub points: Option<usize>,
    #[serde(default)]
    pub transform: Option<String>,
    #[serde(default)]
    pub min_x: Option<f64>,
    #[serde(default)]
    pub lo: Option<f64>,
    #[serde(default)]
    pub hi: Option<f64>,
    #[serde(default)]
    pub mono_tol: Option<f64>,
    #[serde(default)]
    pub trim_floor: Option<f64>,
}

#[derive(Debug, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct McSection {
    pub seed: u64,
    pub n_samples: usize,
    pub checkpoints: Vec<f64>,
    #[serde(default)]
    pub confidence_k: Option<f64>,
}

#[derive(Debug, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct RunSection {
    #[serde(default)]
    pub theorems: Vec<String>,
}

/// Fully validated scenario, ready to drive the engines.
#[derive(Debug)]
pub struct Scenario {
    pub label: String,
    pub kind: ExtremeKind,
    pub fam_x: ComponentFamily,
    pub fam_y: ComponentFamily,
    pub pmf: SizePmf,
    pub grid: Grid,
    pub mc: Option<SimConfig>,
    pub theorems: Vec<String>,
}

/// Command-line overrides applied on top of the scenario file.
#[derive(Debug, Clone, Copy, Default)]
pub struct Overrides {
    pub grid_points: Option<usize>,
    pub tol: Option<f64>,
    pub seed: Option<u64>,
}

impl ScenarioFile {
    pub fn parse(text: &str) -> Result<Self> {
        let file: ScenarioFile = toml::from_str(text).context("scenario does not match schema")?;
        if file.version != 1 {
            bail!("unsupported scenario version {} (expected 1)", file.version);
        }
        Ok(file)
    }

    pub fn build(self, overrides: Overrides) -> Result<Scenario> {
        let base = match self.base.family.as_str() {
            "weibull" => {
                let shape = self
                    .base
                    .shape
                    .context("weibull base requires a `shape` key")?;
                DistSpec::weibull(shape, self.base.rate)?
            }
            "exponential" => {
                if self.base.shape.is_some() {
                    bail!("exponential base takes no `shape` key");
                }
                DistSpec::exponential(self.base.rate)?
            }
            other => bail!("unknown base family `{other}`"),
        };
        let fam_x = ComponentFamily::from_shifts(base, &self.families.x_shifts, "X")?;
        let fam_y = ComponentFamily::from_shifts(base, &self.families.y_shifts, "Y")?;

        let pmf = match self.pmf.kind.as_str() {
            "explicit" => {
                let atoms = self.pmf.atoms.context("explicit pmf requires `atoms`")?;
                if self.pmf.q.is_some() || self.pmf.mu.is_some() {
                    bail!("explicit pmf takes no `q` or `mu`");
                }
                SizePmf::explicit(atoms)?
            }
            "geometric" => {
                let q = self.pmf.q.context("geometric pmf requires `q`")?;
                SizePmf::geometric(q, self.pmf.tail_bound.unwrap_or(1e-12))?
            }
            "poisson_shifted" => {
                let mu = self.pmf.mu.context("poisson_shifted pmf requires `mu`")?;
                SizePmf::poisson_shifted(mu, self.pmf.tail_bound.unwrap_or(1e-12))?
            }
            other => bail!("unknown pmf kind `{other}`"),
        };
        if pmf.max_n() as usize > fam_x.len().min(fam_y.len()) {
            bail!(
                "pmf reaches n = {} but the families have {} and {} components",
                pmf.max_n(),
                fam_x.len(),
                fam_y.len()
            );
        }

        let points = overrides
            .grid_points
            .or(self.grid.points)
            .unwrap_or(2000);
        if points < 2 {
            bail!("grid needs at least 2 points");
        }
        let mut grid = match self.grid.transform.as_deref().unwrap_or("neg_log_unit") {
            "neg_log_unit" => {
                if self.grid.lo.is_some() || self.grid.hi.is_some() {
                    bail!("neg_log_unit grids take `min_x`, not `lo`/`hi`");
                }
                Grid::neg_log_unit_above(points, self.grid.min_x.unwrap_or(0.0))
            }
            "direct" => {
                if self.grid.min_x.is_some() {
                    bail!("direct grids take `lo`/`hi`, not `min_x`");
                }
                let lo = self.grid.lo.context("direct grid requires `lo`")?;
                let hi = self.grid.hi.context("direct grid requires `hi`")?;
                Grid::linear(lo, hi, points)?
            }
            other => bail!("unknown grid transform `{other}`"),
        };
        if let Some(tol) = overrides.tol.or(self.grid.mono_tol) {
            grid = grid.with_mono_tol(tol);
        }
        if let Some(floor) = self.grid.trim_floor {
            grid = grid.with_trim_floor(floor);
        }

        let mc = match self.mc {
            Some(section) => {
                let seed = overrides.seed.unwrap_or(section.seed);
                let cfg = SimConfig::new(seed, section.n_samples, section.checkpoints)?;
                Some(match section.confidence_k {
                    Some(k) => cfg.with_confidence_k(k),
                    None => cfg,
                })
            }
            None => None,
        };

        Ok(Scenario {
            label: self.label.unwrap_or_else(|| "scenario".into()),
            kind: self.kind.into(),
            fam_x,
            fam_y,
            pmf,
            grid,
            mc,
            theorems: self.run.map(|r| r.theorems).unwrap_or_default(),
        })
    }
}

impl Scenario {
    pub fn mix_x(&self) -> Result<RandomExtremeSpec> {
        Ok(RandomExtremeSpec::new(
            self.fam_x.clone(),
            self.pmf.clone(),
            self.kind,
        )?)
    }

    pub fn mix_y(&self) -> Result<RandomExtremeSpec> {
        Ok(RandomExtremeSpec::new(
            self.fam_y.clone(),
            self.pmf.clone(),
            self.kind,
        )?)
    }
}
