use std::fs;

use serde::Serialize;
use spin_uncertainty::measure_sim::{run_sweep, to_csv, SamplingMode, ShotConfig};
use spin_uncertainty::prober::{
    self, Manifold, ProbeConfig, ProbeResult, COUNTEREXAMPLE_THRESHOLD,
};
use spin_uncertainty::relations::{
    evaluate_robertson_with, EvalOptions, RelationContext, RelationId,
};
use spin_uncertainty::soak::{self, SoakConfig};
use spin_uncertainty::spin_ops::build_spin_operators;
use spin_uncertainty::states::{density_from_bloch, BlochVector, StateFamily, StateFile};
use spin_uncertainty::{triangle, Axis, Matrix, SpinQuantumNumber, State};

use crate::args::{
    Cli, Command, Family, OpsArgs, ProbeArgs, SimulateArgs, SoakArgs, StateArgs, VerifyArgs,
};
use crate::{CliError, Outcome};

pub(crate) fn execute(cli: &Cli, json: bool) -> Result<Outcome, CliError> {
    match &cli.command {
        Command::Ops(a) => ops(a, json),
        Command::Verify(a) => verify(a),
        Command::Sweep(a) => sweep(a.family, a.points, &ShotConfig::new(1, 0), true),
        Command::Simulate(a) => simulate(a, cli.seed),
        Command::Probe(a) => probe(a, cli.seed),
        Command::Triangle(a) => {
            let summary = triangle::scan(a.samples, cli.seed, a.side)?;
            Ok(Outcome {
                violation: summary.violations > 0,
                body: to_json(&summary)?,
                summary: None,
            })
        }
        Command::Soak(a) => soak(a, cli.seed, json),
        Command::Replay(_) => unreachable!("replay is resolved before execution"),
    }
}

fn to_json<T: Serialize>(value: &T) -> Result<String, CliError> {
    Ok(serde_json::to_string_pretty(value)? + "\n")
}

fn spin(twice_s: u32) -> Result<SpinQuantumNumber, CliError> {
    if twice_s == 0 {
        return Err(spin_uncertainty::Error::TrivialSpin.into());
    }
    Ok(SpinQuantumNumber::from_twice(twice_s))
}

fn family(f: Family) -> StateFamily {
    match f {
        Family::R1 => StateFamily::R1Latitude,
        Family::R2 => StateFamily::R2Meridian,
    }
}

#[derive(Serialize)]
struct OpsReport {
    spin: String,
    twice_s: u32,
    dim: usize,
    sx: Vec<Vec<[f64; 2]>>,
    sy: Vec<Vec<[f64; 2]>>,
    sz: Vec<Vec<[f64; 2]>>,
    residuals: spin_uncertainty::spin_ops::IdentityResiduals,
}

fn pairs(m: &Matrix) -> Vec<Vec<[f64; 2]>> {
    (0..m.dim())
        .map(|i| (0..m.dim()).map(|j| [m[(i, j)].re, m[(i, j)].im]).collect())
        .collect()
}

fn ops(a: &OpsArgs, json: bool) -> Result<Outcome, CliError> {
    let s = spin(a.spin)?;
    let ops = build_spin_operators::<f64>(s)?;
    let residuals = ops.residuals();
    let body = if json {
        to_json(&OpsReport {
            spin: s.to_string(),
            twice_s: s.twice_s(),
            dim: s.dim(),
            sx: pairs(ops.sx.matrix()),
            sy: pairs(ops.sy.matrix()),
            sz: pairs(ops.sz.matrix()),
            residuals,
        })?
    } else {
        let mut out = format!("s = {s}, dim = {}\n", s.dim());
        for axis in Axis::ALL {
            out.push_str(&format!("{}:\n", axis.name()));
            let m = ops.component(axis).matrix();
            for i in 0..m.dim() {
                let row: Vec<String> = (0..m.dim())
                    .map(|j| format!("{:>9.5}{:+.5}i", m[(i, j)].re, m[(i, j)].im))
                    .collect();
                out.push_str(&format!("  {}\n", row.join("  ")));
            }
        }
        out.push_str(&format!(
            "residuals: [Sx,Sy]-iSz {:.3e}  [Sy,Sz]-iSx {:.3e}  [Sz,Sx]-iSy {:.3e}  casimir {:.3e}  hermiticity {:.3e}\n",
            residuals.comm_xy, residuals.comm_yz, residuals.comm_zx, residuals.casimir, residuals.hermiticity
        ));
        out
    };
    Ok(Outcome {
        body,
        summary: None,
        violation: false,
    })
}

fn parse_bloch(text: &str) -> Result<BlochVector<f64>, CliError> {
    let parts: Vec<&str> = text.split(',').map(str::trim).collect();
    if parts.len() != 3 {
        return Err(CliError::Usage(format!(
            "--bloch needs three comma-separated numbers, got `{text}`"
        )));
    }
    let mut r = [0.0; 3];
    for (slot, part) in r.iter_mut().zip(&parts) {
        *slot = part
            .parse()
            .map_err(|_| CliError::Usage(format!("--bloch component `{part}` is not a number")))?;
    }
    Ok(BlochVector::from_array(r))
}

fn angle(value: f64, degrees: bool) -> f64 {
    if degrees {
        value.to_radians()
    } else {
        value
    }
}

/// The state described by the flags, or `None` when none was given.
fn state_from(a: &StateArgs) -> Result<Option<State>, CliError> {
    if let Some(text) = &a.bloch {
        return Ok(Some(density_from_bloch(parse_bloch(text)?)?));
    }
    if let Some(f) = a.family {
        let (name, specific) = match f {
            Family::R1 => ("--phi", a.phi),
            Family::R2 => ("--theta", a.theta),
        };
        let value = specific.or(a.param).ok_or_else(|| {
            CliError::Usage(format!("--family {} needs {name} or --param", f.name()))
        })?;
        return Ok(Some(family(f).point(angle(value, a.degrees)).state()));
    }
    if a.phi.is_some() || a.theta.is_some() || a.param.is_some() {
        return Err(CliError::Usage(
            "--phi/--theta/--param need --family".into(),
        ));
    }
    if let Some(path) = &a.state_file {
        let file: StateFile = serde_json::from_str(&fs::read_to_string(path)?)?;
        return Ok(Some(file.to_state()?));
    }
    Ok(None)
}

impl Family {
    fn name(self) -> &'static str {
        match self {
            Family::R1 => "r1",
            Family::R2 => "r2",
        }
    }
}

fn parse_axis(text: &str) -> Result<Axis, CliError> {
    match text.trim().to_ascii_lowercase().trim_start_matches('s') {
        "x" => Ok(Axis::X),
        "y" => Ok(Axis::Y),
        "z" => Ok(Axis::Z),
        _ => Err(CliError::Usage(format!(
            "unknown axis `{text}` (use x, y or z)"
        ))),
    }
}

fn verify(a: &VerifyArgs) -> Result<Outcome, CliError> {
    let state = state_from(&a.state)?;
    let s = match (a.spin, &state) {
        (Some(t), _) => spin(t)?,
        (None, Some(st)) => spin(st.dim() as u32 - 1)?,
        (None, None) => {
            return Err(CliError::Usage(
                "verify needs a state (--bloch, --family or --state-file)".into(),
            ))
        }
    };
    let all = a.relation.eq_ignore_ascii_case("all");
    let mut relations = if all {
        RelationId::state_relations(s)
    } else {
        let id: RelationId = a.relation.parse()?;
        if id != RelationId::RobertsonGeneric {
            id.check_spin(s)?;
        }
        vec![id]
    };
    let pair = a
        .pair
        .as_deref()
        .map(|text| -> Result<(Axis, Axis), CliError> {
            let (x, y) = text.split_once(',').ok_or_else(|| {
                CliError::Usage(format!(
                    "--pair needs two comma-separated axes, got `{text}`"
                ))
            })?;
            Ok((parse_axis(x)?, parse_axis(y)?))
        })
        .transpose()?;
    if all && pair.is_some() {
        relations.push(RelationId::RobertsonGeneric);
    }
    let state = state.ok_or_else(|| {
        CliError::Usage("verify needs a state (--bloch, --family or --state-file)".into())
    })?;
    state.check_dim(s.dim())?;

    let ctx = RelationContext::<f64>::new(s)?;
    let opts = EvalOptions {
        tolerance: a.tolerance,
        ..EvalOptions::default()
    };
    let mut reports = Vec::with_capacity(relations.len());
    for id in relations {
        let report = if id == RelationId::RobertsonGeneric {
            let (x, y) =
                pair.ok_or_else(|| CliError::Usage("R_ROBERTSON_GENERIC needs --pair".into()))?;
            evaluate_robertson_with(
                &state,
                ctx.ops().component(x),
                ctx.ops().component(y),
                a.tolerance,
            )?
        } else {
            ctx.evaluate_with(id, &state, &opts)?
        };
        reports.push(report);
    }
    Ok(Outcome {
        violation: reports.iter().any(|r| r.violated()),
        body: to_json(&reports)?,
        summary: None,
    })
}

fn sweep(f: Family, points: usize, cfg: &ShotConfig, analytic: bool) -> Result<Outcome, CliError> {
    let rows = run_sweep(family(f), points, cfg, analytic)?;
    Ok(Outcome {
        body: to_csv(&rows),
        summary: None,
        violation: false,
    })
}

fn simulate(a: &SimulateArgs, seed: u64) -> Result<Outcome, CliError> {
    if a.shots == 0 {
        return Err(CliError::Usage("--shots must be at least 1".into()));
    }
    let cfg = ShotConfig {
        shots: a.shots,
        seed,
        mode: if a.per_draw {
            SamplingMode::PerDraw
        } else {
            SamplingMode::Binomial
        },
    };
    sweep(a.family, a.points, &cfg, a.analytic)
}

fn probe(a: &ProbeArgs, seed: u64) -> Result<Outcome, CliError> {
    let s = spin(a.spin)?;
    let cfg = ProbeConfig {
        restarts: a.restarts,
        max_iters: a.max_iters,
        tol: a.tol,
        seed,
    };
    let result: ProbeResult = if a.conjecture {
        prober::scan_conjecture(s, a.samples, &cfg)?
    } else if a.variance_sum {
        prober::min_variance_sum(s, &cfg)?
    } else {
        let id: RelationId = a.relation.as_deref().unwrap_or_default().parse()?;
        let manifold = if a.mixed {
            Manifold::Mixed
        } else {
            Manifold::Pure
        };
        prober::min_gap_on(id, s, manifold, &cfg)?
    };
    if result.counterexample.is_some() {
        eprintln!(
            "note: counterexample candidate with gap {:e}; state recorded under `counterexample`",
            result.min_gap
        );
    }
    Ok(Outcome {
        violation: !a.conjecture && result.min_gap < COUNTEREXAMPLE_THRESHOLD,
        body: to_json(&result)?,
        summary: None,
    })
}

fn soak(a: &SoakArgs, seed: u64, json: bool) -> Result<Outcome, CliError> {
    let cfg = SoakConfig {
        tolerance: a.tolerance,
        ..SoakConfig::new(a.samples, seed, spin(a.spin)?)
    };
    let summary = soak::run(&cfg)?;
    let table = summary.table();
    Ok(Outcome {
        violation: !summary.passed(),
        body: if json {
            to_json(&summary)?
        } else {
            table.clone()
        },
        summary: Some(table),
    })
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn bloch_parsing() {
        assert_eq!(
            parse_bloch(" -0.5, 0,1e-1").unwrap(),
            BlochVector::new(-0.5, 0.0, 0.1)
        );
        assert!(parse_bloch("1,2").is_err());
        assert!(parse_bloch("a,0,0").is_err());
    }

    #[test]
    fn axis_parsing() {
        assert_eq!(parse_axis("X").unwrap(), Axis::X);
        assert_eq!(parse_axis("sy").unwrap(), Axis::Y);
        assert!(parse_axis("w").is_err());
    }

    #[test]
    fn angles() {
        assert_eq!(angle(180.0, true), std::f64::consts::PI);
        assert_eq!(angle(1.5, false), 1.5);
    }
}
