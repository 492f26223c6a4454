//! Declarative run configuration. Every section has defaults, so `{}` is a
//! valid config; unknown fields are rejected so typos surface as errors.

use dirac_core::evolution::{Integrator, TimeProfile};
use dirac_core::scenarios::{KleinGridOptions, PacketContent, PacketParams};
use dirac_core::{EvolutionConfig, Grid1D, PhysicalConstants, PotentialSpec, Projection, Spin};
use serde::{Deserialize, Serialize};

use crate::CliError;

#[derive(Debug, Clone, Default, PartialEq, Serialize, Deserialize)]
#[serde(default, deny_unknown_fields)]
pub struct RunConfig {
    pub constants: PhysicalConstants,
    pub grid: GridSection,
    pub potential: PotentialSection,
    pub evolution: EvolutionSection,
    pub packet: PacketSection,
    pub verify: VerifySection,
    pub klein: KleinSection,
    pub zitter: ZitterSection,
    pub modes: ModesSection,
    /// Overridden by `--seed`.
    pub seed: u64,
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(default, deny_unknown_fields)]
pub struct GridSection {
    pub n_points: usize,
    pub length: f64,
}

impl Default for GridSection {
    fn default() -> Self {
        GridSection {
            n_points: 256,
            length: 100.0,
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case", deny_unknown_fields)]
pub enum Shape {
    None,
    Constant { value: f64 },
    SmoothWell { depth: f64, width: f64 },
    Step { v0: f64, smoothing: f64 },
}

/// A₀(x, t) = shape(x)·(1 + amplitude·sin(Ωt)) while the drive is on.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct SineProfile {
    pub amplitude: f64,
    pub omega: f64,
    #[serde(default)]
    pub switch_off: Option<f64>,
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(default, deny_unknown_fields)]
pub struct PotentialSection {
    pub shape: Shape,
    pub time_profile: Option<SineProfile>,
}

impl Default for PotentialSection {
    fn default() -> Self {
        PotentialSection {
            shape: Shape::None,
            time_profile: None,
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(default, deny_unknown_fields)]
pub struct EvolutionSection {
    pub dt: f64,
    pub steps: usize,
    pub projection: Projection,
    pub record_every: usize,
    pub integrator: Integrator,
    /// Also dump every recorded field to fields.csv.
    pub write_fields: bool,
}

impl Default for EvolutionSection {
    fn default() -> Self {
        EvolutionSection {
            dt: 0.05,
            steps: 200,
            projection: Projection::None,
            record_every: 10,
            integrator: Integrator::Strang,
            write_fields: false,
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(default, deny_unknown_fields)]
pub struct PacketSection {
    pub k0: f64,
    pub width: f64,
    pub x0: f64,
    pub spin: Spin,
    pub content: PacketContent,
}

impl Default for PacketSection {
    fn default() -> Self {
        PacketSection {
            k0: 0.5,
            width: 5.0,
            x0: 0.0,
            spin: Spin::Up,
            content: PacketContent::PositiveOnly,
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(default, deny_unknown_fields)]
pub struct VerifySection {
    pub random_momenta: usize,
    pub random_bispinors: usize,
    /// Test hook: replaces C by the identity before running the suite.
    pub corrupt_c: bool,
}

impl Default for VerifySection {
    fn default() -> Self {
        VerifySection {
            random_momenta: 100,
            random_bispinors: 1000,
            corrupt_c: false,
        }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(default, deny_unknown_fields)]
pub struct KleinSection {
    /// (E, v0) pairs.
    pub cases: Vec<[f64; 2]>,
    pub run_grid: bool,
    /// Natural-unit defaults when absent.
    pub grid: Option<KleinGridOptions>,
}

impl Default for KleinSection {
    fn default() -> Self {
        KleinSection {
            cases: vec![[1.25, 0.0], [1.25, -1.0], [1.25, 1.0], [1.25, 3.0]],
            run_grid: true,
            grid: None,
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(default, deny_unknown_fields)]
pub struct ZitterSection {
    pub n_points: usize,
    pub length: f64,
    pub k0: f64,
    pub width: f64,
    pub alpha: f64,
    /// In Compton periods 2πħ/mc².
    pub duration_periods: f64,
    pub dt: f64,
    /// Positive-only jitter bound in units of ħ/mc.
    pub threshold: f64,
    /// Allowed relative deviation of the mixed packet's frequency from 2mc²/ħ.
    pub frequency_tolerance: f64,
}

impl Default for ZitterSection {
    fn default() -> Self {
        ZitterSection {
            n_points: 512,
            length: 200.0,
            k0: 0.0,
            width: 10.0,
            alpha: 1.0,
            duration_periods: 20.0,
            dt: 0.05,
            threshold: 1e-6,
            frequency_tolerance: 0.05,
        }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(default, deny_unknown_fields)]
pub struct ModesSection {
    /// Momenta along z.
    pub k_values: Vec<f64>,
}

impl Default for ModesSection {
    fn default() -> Self {
        ModesSection {
            k_values: vec![0.0, 0.25, 0.5, 0.75, 1.0, 2.0, 5.0, 10.0],
        }
    }
}

fn finite(name: &str, v: f64) -> Result<(), CliError> {
    if v.is_finite() {
        Ok(())
    } else {
        Err(CliError::Config(format!("{name} must be finite, got {v}")))
    }
}

impl RunConfig {
    pub fn from_json(text: &str) -> Result<Self, CliError> {
        let cfg: RunConfig =
            serde_json::from_str(text).map_err(|e| CliError::Config(e.to_string()))?;
        cfg.validate()?;
        Ok(cfg)
    }

    pub fn to_json(&self) -> String {
        serde_json::to_string(self).expect("config serializes")
    }

    pub fn validate(&self) -> Result<(), CliError> {
        let c = &self.constants;
        for (n, v) in [
            ("constants.hbar", c.hbar),
            ("constants.c", c.c),
            ("constants.e", c.e),
        ] {
            finite(n, v)?;
            if v <= 0.0 {
                return Err(CliError::Config(format!("{n} must be positive, got {v}")));
            }
        }
        finite("constants.m", c.m)?;
        if c.m < 0.0 {
            return Err(CliError::Config(format!(
                "constants.m must be non-negative, got {}",
                c.m
            )));
        }
        finite("grid.length", self.grid.length)?;
        finite("evolution.dt", self.evolution.dt)?;
        for (n, v) in [
            ("packet.k0", self.packet.k0),
            ("packet.width", self.packet.width),
            ("packet.x0", self.packet.x0),
        ] {
            finite(n, v)?;
        }
        match self.potential.shape {
            Shape::None => {}
            Shape::Constant { value } => finite("potential.shape.constant.value", value)?,
            Shape::SmoothWell { depth, width } => {
                finite("potential.shape.smooth_well.depth", depth)?;
                finite("potential.shape.smooth_well.width", width)?;
                if width <= 0.0 {
                    return Err(CliError::Config(
                        "potential.shape.smooth_well.width must be positive".into(),
                    ));
                }
            }
            Shape::Step { v0, smoothing } => {
                finite("potential.shape.step.v0", v0)?;
                finite("potential.shape.step.smoothing", smoothing)?;
                if smoothing < 0.0 {
                    return Err(CliError::Config(
                        "potential.shape.step.smoothing must be non-negative".into(),
                    ));
                }
            }
        }
        if let Some(p) = &self.potential.time_profile {
            finite("potential.time_profile.amplitude", p.amplitude)?;
            finite("potential.time_profile.omega", p.omega)?;
        }
        for [e, v0] in &self.klein.cases {
            finite("klein.cases", *e)?;
            finite("klein.cases", *v0)?;
        }
        let z = &self.zitter;
        for (n, v) in [
            ("zitter.length", z.length),
            ("zitter.k0", z.k0),
            ("zitter.width", z.width),
            ("zitter.alpha", z.alpha),
            ("zitter.duration_periods", z.duration_periods),
            ("zitter.dt", z.dt),
            ("zitter.threshold", z.threshold),
        ] {
            finite(n, v)?;
        }
        for k in &self.modes.k_values {
            finite("modes.k_values", *k)?;
        }
        Ok(())
    }

    pub fn grid(&self) -> Result<Grid1D, CliError> {
        Ok(Grid1D::new(self.grid.n_points, self.grid.length)?)
    }

    pub fn potential(&self, grid: &Grid1D) -> Result<PotentialSpec, CliError> {
        let base = match self.potential.shape {
            Shape::None => PotentialSpec::free(grid),
            Shape::Constant { value } => PotentialSpec::constant(grid, value),
            Shape::SmoothWell { depth, width } => PotentialSpec::smooth_well(grid, depth, width),
            Shape::Step { v0, smoothing } => PotentialSpec::step(grid, v0, smoothing),
        };
        match self.potential.time_profile {
            None => Ok(base),
            Some(p) => {
                let shape = base.a0.clone();
                let profile = TimeProfile {
                    amplitude: p.amplitude,
                    omega: p.omega,
                    switch_off: p.switch_off,
                };
                Ok(base.with_drive(shape, vec![0.0; grid.n_points], profile)?)
            }
        }
    }

    pub fn evolution(&self) -> EvolutionConfig {
        let e = &self.evolution;
        EvolutionConfig {
            dt: e.dt,
            steps: e.steps,
            projection: e.projection,
            record_every: e.record_every,
            integrator: e.integrator,
        }
    }

    pub fn packet(&self) -> PacketParams {
        let p = &self.packet;
        PacketParams {
            k0: p.k0,
            width: p.width,
            x0: p.x0,
            spin: p.spin,
        }
    }

    pub fn klein_grid(&self) -> KleinGridOptions {
        self.klein
            .grid
            .unwrap_or_else(|| KleinGridOptions::scaled_to(&self.constants))
    }
}
