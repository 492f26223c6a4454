use std::fmt::Write as _;

use dirac_core::evolution::{build_hamiltonian, evolve};
use dirac_core::observables::observe;
use dirac_core::plane_waves::{dispersion, group_velocity, mode_bispinor, upper_weight};
use dirac_core::scenarios::zitter::jitter_frequency;
use dirac_core::scenarios::{
    klein_step, make_packet, zitterbewegung_compare, ZitterParams, ZitterResult,
};
use dirac_core::{make_gammas, Grid1D, Species, Spin};

use crate::config::RunConfig;
use crate::verify::{run_suite, Status};
use crate::{CliError, VERSION};

#[derive(Debug, Clone, Copy, PartialEq, Eq, clap::ValueEnum)]
pub enum Command {
    Verify,
    Evolve,
    Klein,
    Zitter,
    Modes,
}

impl Command {
    pub fn name(self) -> &'static str {
        match self {
            Command::Verify => "verify",
            Command::Evolve => "evolve",
            Command::Klein => "klein",
            Command::Zitter => "zitter",
            Command::Modes => "modes",
        }
    }
}

/// Rendered files plus the names of any checks that did not pass.
#[derive(Debug, Clone, Default, PartialEq)]
pub struct CommandOutput {
    pub files: Vec<(String, String)>,
    pub failures: Vec<String>,
    pub summary: Vec<String>,
}

fn header(cmd: Command, cfg: &RunConfig) -> String {
    format!(
        "# dirac {VERSION} {}\n# config: {}\n",
        cmd.name(),
        cfg.to_json()
    )
}

pub fn run_command(cmd: Command, cfg: &RunConfig) -> Result<CommandOutput, CliError> {
    cfg.validate()?;
    match cmd {
        Command::Verify => cmd_verify(cfg),
        Command::Evolve => cmd_evolve(cfg),
        Command::Klein => cmd_klein(cfg),
        Command::Zitter => cmd_zitter(cfg),
        Command::Modes => cmd_modes(cfg),
    }
}

fn cmd_verify(cfg: &RunConfig) -> Result<CommandOutput, CliError> {
    let checks = run_suite(cfg)?;
    let mut csv = header(Command::Verify, cfg);
    csv.push_str("check,residual,tolerance,status\n");
    let mut out = CommandOutput::default();
    for c in &checks {
        let (residual, status) = match c.status {
            Status::Pass => (format!("{:e}", c.residual), "pass"),
            Status::Fail => (format!("{:e}", c.residual), "fail"),
            Status::Skipped(_) => (String::new(), "skipped"),
        };
        writeln!(csv, "{},{},{:e},{}", c.name, residual, c.tolerance, status).unwrap();
        out.summary.push(match c.status {
            Status::Skipped(why) => format!("{:<32} skipped ({why})", c.name),
            _ => format!(
                "{:<32} {:>12} <= {:e}  {}",
                c.name, residual, c.tolerance, status
            ),
        });
        if c.failed() {
            out.failures.push(c.name.to_string());
        }
    }
    out.files.push(("verify.csv".into(), csv));
    Ok(out)
}

fn cmd_evolve(cfg: &RunConfig) -> Result<CommandOutput, CliError> {
    let g = make_gammas();
    let grid = cfg.grid()?;
    let potential = cfg.potential(&grid)?;
    let field = make_packet(&grid, &cfg.packet(), cfg.packet.content, &cfg.constants, &g)?;
    let traj = evolve(&field, &potential, &cfg.evolution(), &cfg.constants, &g)?;
    let h = build_hamiltonian(&grid, &potential, Species::Particle, &cfg.constants, &g)?;

    let mut csv = header(Command::Evolve, cfg);
    csv.push_str("t,norm,energy,momentum,mean_x\n");
    let mut norms = Vec::with_capacity(traj.snapshots.len());
    for s in &traj.snapshots {
        let r = observe(s, &h)?;
        norms.push(r.norm);
        writeln!(
            csv,
            "{},{},{},{},{}",
            r.time, r.norm, r.energy, r.momentum, r.mean_x
        )
        .unwrap();
    }
    let mut out = CommandOutput::default();
    let drift = norms
        .iter()
        .map(|n| (n - norms[0]).abs())
        .fold(0.0, f64::max);
    out.summary.push(format!(
        "{} snapshots, max norm drift {drift:e}",
        norms.len()
    ));
    out.files.push(("evolve.csv".into(), csv));

    if cfg.evolution.write_fields {
        let mut fields = header(Command::Evolve, cfg);
        fields.push_str("t,x,re1,im1,re2,im2,re3,im3,re4,im4\n");
        for s in &traj.snapshots {
            for (j, v) in s.values.iter().enumerate() {
                write!(fields, "{},{}", s.time, grid.x(j)).unwrap();
                for c in v.0.iter() {
                    write!(fields, ",{},{}", c.re, c.im).unwrap();
                }
                fields.push('\n');
            }
        }
        out.files.push(("fields.csv".into(), fields));
    }
    Ok(out)
}

fn cmd_klein(cfg: &RunConfig) -> Result<CommandOutput, CliError> {
    let g = make_gammas();
    let opts = cfg.klein_grid();
    let mut csv = header(Command::Klein, cfg);
    csv.push_str(
        "E,v0,regime,standard_R,standard_T,restricted_R,restricted_T,grid_R,kprime_convention,momentum_R,momentum_T\n",
    );
    let mut out = CommandOutput::default();
    for [e, v0] in &cfg.klein.cases {
        let grid_opts = if cfg.klein.run_grid {
            Some(&opts)
        } else {
            None
        };
        let r = klein_step(*e, *v0, &cfg.constants, grid_opts, &g)?;
        let grid_r = r.grid_r.map(|v| v.to_string()).unwrap_or_default();
        writeln!(
            csv,
            "{},{},{},{},{},{},{},{},{},{},{}",
            r.energy,
            r.v0,
            r.regime.name(),
            r.standard_r,
            r.standard_t,
            r.restricted_r,
            r.restricted_t,
            grid_r,
            r.kprime_convention,
            r.momentum_convention_r,
            r.momentum_convention_t
        )
        .unwrap();
        out.summary.push(format!(
            "E = {e}, v0 = {v0}: {} standard R = {:.6} T = {:.6}, restricted R = {} T = {}{}",
            r.regime.name(),
            r.standard_r,
            r.standard_t,
            r.restricted_r,
            r.restricted_t,
            r.grid_r
                .map(|v| format!(", grid R = {v:.6}"))
                .unwrap_or_default()
        ));
    }
    out.files.push(("klein.csv".into(), csv));
    Ok(out)
}

fn zitter_row(r: &ZitterResult, alpha: f64, expected: f64, verdict: bool) -> String {
    format!(
        "{},{},{},{},{},{}\n",
        match r.packet_kind {
            dirac_core::scenarios::PacketKind::Mixed => "mixed",
            dirac_core::scenarios::PacketKind::PositiveOnly => "positive_only",
        },
        alpha,
        r.detrended_amplitude,
        r.dominant_frequency,
        expected,
        if verdict { "pass" } else { "fail" }
    )
}

fn cmd_zitter(cfg: &RunConfig) -> Result<CommandOutput, CliError> {
    let g = make_gammas();
    let z = &cfg.zitter;
    let consts = &cfg.constants;
    let grid = Grid1D::new(z.n_points, z.length)?;
    let params = ZitterParams {
        packet: dirac_core::scenarios::PacketParams {
            k0: z.k0,
            width: z.width,
            x0: 0.0,
            spin: Spin::Up,
        },
        alpha: z.alpha,
    };
    let duration = z.duration_periods * 2.0 * std::f64::consts::PI * consts.compton_time();
    let (mixed, positive) = zitterbewegung_compare(&grid, &params, duration, z.dt, consts, &g)?;

    let mut series = header(Command::Zitter, cfg);
    series.push_str("t,mean_x_mixed,mean_x_positive\n");
    for ((t, a), b) in mixed.times.iter().zip(&mixed.mean_x).zip(&positive.mean_x) {
        writeln!(series, "{t},{a},{b}").unwrap();
    }

    let expected = jitter_frequency(consts);
    let bound = z.threshold * consts.compton_length();
    let mixed_ok =
        ((mixed.dominant_frequency - expected) / expected).abs() <= z.frequency_tolerance;
    let positive_ok = positive.detrended_amplitude < bound;
    let mut summary = header(Command::Zitter, cfg);
    summary.push_str(
        "packet,alpha,detrended_amplitude,dominant_frequency,expected_frequency,status\n",
    );
    summary.push_str(&zitter_row(&mixed, z.alpha, expected, mixed_ok));
    summary.push_str(&zitter_row(&positive, 0.0, expected, positive_ok));

    let mut out = CommandOutput::default();
    out.summary.push(format!(
        "mixed: amplitude {:e}, frequency {} (expected {expected})",
        mixed.detrended_amplitude, mixed.dominant_frequency
    ));
    out.summary.push(format!(
        "positive_only: amplitude {:e} (bound {bound:e})",
        positive.detrended_amplitude
    ));
    if !mixed_ok {
        out.failures.push("zitter_mixed_frequency".into());
    }
    if !positive_ok {
        out.failures.push("zitter_positive_amplitude".into());
    }
    out.files.push(("zitter.csv".into(), series));
    out.files.push(("zitter_summary.csv".into(), summary));
    Ok(out)
}

fn cmd_modes(cfg: &RunConfig) -> Result<CommandOutput, CliError> {
    let consts = &cfg.constants;
    let mut csv = header(Command::Modes, cfg);
    csv.push_str("k,spin,E,group_velocity,upper_weight,re1,im1,re2,im2,re3,im3,re4,im4\n");
    let mut out = CommandOutput::default();
    for &k in &cfg.modes.k_values {
        let kv = [0.0, 0.0, k];
        if dispersion(&kv, consts) == 0.0 {
            writeln!(csv, "# k = {k} skipped: zero energy").unwrap();
            continue;
        }
        for spin in Spin::BOTH {
            let u = mode_bispinor(&kv, spin, Species::Particle, consts)?;
            write!(
                csv,
                "{k},{},{},{},{}",
                spin.label(),
                dispersion(&kv, consts),
                group_velocity(&kv, consts)[2],
                upper_weight(&u)
            )
            .unwrap();
            for c in u.0.iter() {
                write!(csv, ",{},{}", c.re, c.im).unwrap();
            }
            csv.push('\n');
        }
    }
    out.summary
        .push(format!("{} momenta", cfg.modes.k_values.len()));
    out.files.push(("modes.csv".into(), csv));
    Ok(out)
}
