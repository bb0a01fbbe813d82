//! Named scenarios for the standard cases: definite momentum, one-level
//! wave packet, and both levels populated with displaced packets.

use std::f64::consts::PI;
use std::path::Path;

use crate::error::{Error, Result};
use crate::scenario::{
    GridSpec, LevelSpec, Meta, OutputSpec, Scenario, ScenarioFile, Schedule, Shape,
};
use crate::units::SimParams;

pub const RABI: f64 = 20.0;
pub const SIGMA: f64 = 2.0;
/// excited packet center for the two-level cases
pub const SHIFT: f64 = 10.0;

pub struct Preset {
    pub name: &'static str,
    pub description: &'static str,
    build: fn() -> ScenarioFile,
}

impl Preset {
    pub fn scenario_file(&self) -> ScenarioFile {
        let mut file = (self.build)();
        file.meta = Some(Meta {
            name: Some(self.name.to_string()),
            description: Some(self.description.to_string()),
        });
        file
    }

    pub fn scenario(&self) -> Result<Scenario> {
        Scenario::from_file(self.scenario_file(), Path::new("."))
    }
}

pub const PRESETS: &[Preset] = &[
    Preset {
        name: "fig1",
        description: "ground-level momentum distribution after 4 and 12 Rabi floppings",
        build: fig1,
    },
    Preset {
        name: "fig2",
        description: "level populations for a one-level wave-packet start (damped flopping)",
        build: one_level_packet,
    },
    Preset {
        name: "fig5",
        description: "one-state case with definite momentum (constant normalized momenta)",
        build: definite_momentum,
    },
    Preset {
        name: "fig6",
        description: "one-state wave-packet case (normalized momenta within one photon momentum)",
        build: narrow_packet,
    },
    Preset {
        name: "fig7",
        description: "general superpositional case (CAMEL)",
        build: two_level_packets,
    },
    Preset {
        name: "fig8",
        description: "level kinetic energies, one-level state with definite momentum",
        build: definite_momentum,
    },
    Preset {
        name: "fig9",
        description: "total and level kinetic energies, one-state wave-packet case",
        build: one_level_packet,
    },
    Preset {
        name: "fig10",
        description: "total and level kinetic energies, general superpositional case",
        build: two_level_packets,
    },
];

pub fn find(name: &str) -> Result<&'static Preset> {
    PRESETS.iter().find(|p| p.name == name).ok_or_else(|| {
        let names: Vec<_> = PRESETS.iter().map(|p| p.name).collect();
        Error::Scenario(format!("unknown preset {name:?}; available: {}", names.join(", ")))
    })
}

/// `name: description` lines.
pub fn list_presets() -> Vec<String> {
    PRESETS.iter().map(|p| format!("{}: {}", p.name, p.description)).collect()
}

fn gaussian(center: f64, sigma: f64) -> LevelSpec {
    LevelSpec { shape: Shape::Gaussian { center, sigma, phase_slope: 0.0 }, weight: [1.0, 0.0] }
}

fn base(grid: GridSpec, tau_max: f64, n_samples: usize) -> ScenarioFile {
    ScenarioFile {
        override_validity: false,
        meta: None,
        params: Some(SimParams { rabi: RABI, detuning: 0.0 }),
        physical: None,
        grid,
        ground: None,
        excited: None,
        schedule: Schedule { tau_max, n_samples, snapshot_taus: Vec::new() },
        output: OutputSpec::default(),
    }
}

fn packet_grid() -> GridSpec {
    GridSpec { center: 0.0, half_width: 24.0, n_points: 4096 }
}

fn fig1() -> ScenarioFile {
    let mut f = base(packet_grid(), 24.0 * PI / RABI, 1000);
    f.ground = Some(gaussian(0.0, SIGMA));
    f.schedule.snapshot_taus = vec![0.0, 8.0 * PI / RABI, 24.0 * PI / RABI];
    f
}

fn one_level_packet() -> ScenarioFile {
    let mut f = base(packet_grid(), 32.0, 4000);
    f.ground = Some(gaussian(0.0, SIGMA));
    f
}

fn definite_momentum() -> ScenarioFile {
    let grid = GridSpec { center: 0.0, half_width: 0.0, n_points: 1 };
    let mut f = base(grid, 24.0 * PI / RABI, 1000);
    f.ground = Some(LevelSpec { shape: Shape::Definite, weight: [1.0, 0.0] });
    f
}

fn narrow_packet() -> ScenarioFile {
    let grid = GridSpec { center: 0.0, half_width: 8.0, n_points: 2048 };
    let mut f = base(grid, 32.0, 4000);
    f.ground = Some(gaussian(0.0, 0.5));
    f
}

fn two_level_packets() -> ScenarioFile {
    let grid = GridSpec { center: 0.0, half_width: 24.0, n_points: 16384 };
    let mut f = base(grid, 130.0, 2000);
    f.ground = Some(gaussian(0.0, SIGMA));
    f.excited = Some(gaussian(SHIFT, SIGMA));
    f
}
