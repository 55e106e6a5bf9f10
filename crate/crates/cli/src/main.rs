mod args;
mod config;

use std::fs;
use std::io::Write;
use std::process::ExitCode;

use clap::error::ErrorKind;
use clap::Parser;
use kinegroup_core::classic::{classify, galilei_boost, lorentz_boost, GroupTag};
use kinegroup_core::decompose::{decompose_tangherlini, decompose_two_way, MEMBERSHIP_RESIDUAL};
use kinegroup_core::exec::Mode;
use kinegroup_core::format::{csv_row, json_f64, to_json_string};
use kinegroup_core::isotropy::{round_trip, sine_resync, ClosedPath, CoordinateMap};
use kinegroup_core::reichenbach::{
    absolute_simultaneity_map, ellipsoid_geometry, shear_matrix, tangherlini, two_way_map, ShearK,
    TwoWayParams,
};
use kinegroup_core::selftest::{self, limits};
use kinegroup_core::spacetime::{compose, velocity_of, AffineMap4, Rotation3};
use kinegroup_core::sweep::{
    addvel_sweep, ellipsoid_sweep, EllipsoidRow, EllipsoidSampling, ADDVEL_HEADER, ELLIPSOID_HEADER,
};
use kinegroup_core::{Error, SpecialParams};
use nalgebra::{Vector3, Vector4};
use serde_json::{json, Value};

use crate::args::*;
use crate::config::SweepConfig;

/// What a verb produced, in both output forms, plus its verdict.
struct Report {
    json: Value,
    header: String,
    rows: Vec<String>,
    passed: bool,
}

impl Report {
    fn new(json: Value, header: &str, rows: Vec<String>) -> Self {
        Report {
            json,
            header: header.to_string(),
            rows,
            passed: true,
        }
    }

    fn verdict(mut self, passed: bool) -> Self {
        self.passed = passed;
        self
    }
}

/// A machine-readable failure: `{"error": code, "detail": ...}` on stderr.
#[derive(Debug)]
struct Failure {
    exit: u8,
    code: &'static str,
    detail: String,
}

impl Failure {
    fn usage(detail: impl Into<String>) -> Self {
        Failure {
            exit: 2,
            code: "usage",
            detail: detail.into(),
        }
    }

    fn io(path: &std::path::Path, e: std::io::Error) -> Self {
        Failure {
            exit: 2,
            code: "io",
            detail: format!("{}: {e}", path.display()),
        }
    }
}

impl From<Error> for Failure {
    fn from(e: Error) -> Self {
        let code = match &e {
            Error::InvalidRotation { .. } => "invalid_rotation",
            Error::DegenerateMap(_) => "degenerate_map",
            Error::NotAtRest { .. } => "not_at_rest",
            Error::DegenerateWorldline => "degenerate_worldline",
            Error::Domain { .. } => "domain",
            Error::AsymmetricDomain { .. } => "asymmetric_domain",
            Error::NotUnit { .. } => "not_unit",
            Error::InvalidParams(_) => "invalid_params",
            Error::Superluminal { .. } => "superluminal",
            Error::InvalidSynchrony { .. } => "invalid_synchrony",
            Error::NotInGroup { .. } => "not_in_group",
            Error::ZeroScale => "zero_scale",
            Error::ZeroPosition => "zero_position",
            Error::InvalidPath(_) => "invalid_path",
            Error::NoLightRay => "no_light_ray",
            Error::Serde(_) => "parse",
        };
        let exit = if matches!(e, Error::NotInGroup { .. }) {
            1
        } else {
            2
        };
        Failure {
            exit,
            code,
            detail: e.to_string(),
        }
    }
}

type Outcome = Result<Report, Failure>;

fn main() -> ExitCode {
    let cli = match Cli::try_parse() {
        Ok(cli) => cli,
        Err(e) if matches!(e.kind(), ErrorKind::DisplayHelp | ErrorKind::DisplayVersion) => {
            let _ = e.print();
            return ExitCode::SUCCESS;
        }
        Err(e) => return fail(&Failure::usage(e.render().to_string().trim_end())),
    };
    match run(&cli).and_then(|report| emit(&cli, &report).map(|_| report.passed)) {
        Ok(true) => ExitCode::SUCCESS,
        Ok(false) => ExitCode::from(1),
        Err(f) => fail(&f),
    }
}

fn fail(f: &Failure) -> ExitCode {
    eprintln!(
        "{}",
        to_json_string(&json!({"error": f.code, "detail": f.detail}))
    );
    ExitCode::from(f.exit)
}

fn emit(cli: &Cli, report: &Report) -> Result<(), Failure> {
    let mut text = match cli.format {
        Format::Json => to_json_string(&report.json),
        Format::Csv => std::iter::once(report.header.as_str())
            .chain(report.rows.iter().map(String::as_str))
            .collect::<Vec<_>>()
            .join("\n"),
    };
    text.push('\n');
    match &cli.output {
        Some(path) => fs::write(path, text).map_err(|e| Failure::io(path, e)),
        None => std::io::stdout()
            .write_all(text.as_bytes())
            .map_err(|e| Failure {
                exit: 2,
                code: "io",
                detail: e.to_string(),
            }),
    }
}

fn run(cli: &Cli) -> Outcome {
    match &cli.command {
        Command::Build(a) => build(a.as_ref()),
        Command::Compose { maps } => compose_files(maps),
        Command::Classify { params, numeric } => classify_cmd(&special(params), *numeric),
        Command::Addvel { params, v1, v2 } => addvel(&special(params), *v1, *v2),
        Command::Ellipsoid(a) => ellipsoid(a, cli),
        Command::VerifyTwoWay(a) => verify_two_way(a, cli.tolerance),
        Command::Decompose(a) => decompose(a, cli.tolerance),
        Command::Selftest { sequential } => run_selftest(cli, *sequential),
        Command::Sweep { config } => sweep(config, cli),
    }
}

fn special(a: &CaseArgs) -> SpecialParams {
    match a.case {
        Case::Galilean => SpecialParams::Galilean,
        Case::Exp => SpecialParams::Exp {
            a1: a.a1,
            lambda1: a.lambda1,
        },
        Case::Power => SpecialParams::Power {
            l: a.l,
            r1: a.r1,
            r2: a.r2,
        },
        Case::Bounded => SpecialParams::Bounded {
            c0: a.c0,
            eta: a.eta,
            r1: a.r1,
            r2: a.r2,
        },
    }
}

fn need<T: Copy>(value: Option<T>, flag: &str, family: &str) -> Result<T, Failure> {
    value.ok_or_else(|| Failure::usage(format!("--family {family} needs {flag}")))
}

fn vec_json(v: &Vector3<f64>) -> Value {
    Value::Array(v.iter().map(|&x| json_f64(x)).collect())
}

fn map_report(map: &AffineMap4) -> Report {
    let m = map.linear.matrix();
    let linear: Vec<Value> = (0..4)
        .map(|i| Value::Array((0..4).map(|j| json_f64(m[(i, j)])).collect()))
        .collect();
    let velocity = velocity_of(&map.linear)
        .map(|v| vec_json(&v))
        .unwrap_or(Value::Null);
    let json = json!({
        "linear": linear,
        "translation": map.translation.iter().map(|&x| json_f64(x)).collect::<Vec<_>>(),
        "velocity": velocity,
    });
    let rows = (0..4)
        .map(|i| {
            csv_row(&[
                m[(i, 0)],
                m[(i, 1)],
                m[(i, 2)],
                m[(i, 3)],
                map.translation[i],
            ])
        })
        .collect();
    Report::new(json, "b1,b2,b3,b4,translation", rows)
}

fn build(a: &BuildArgs) -> Outcome {
    let name = format!("{:?}", a.family).to_lowercase();
    let rotation = Rotation3::from_scaled_axis(&a.rotation.unwrap_or_else(Vector3::zeros));
    let translation = a.translation.unwrap_or_else(Vector4::zeros);
    let map = match a.family {
        Family::Special => {
            let params = special(&CaseArgs {
                case: need(a.case, "--case", &name)?,
                c0: a.c0.unwrap_or(1.0),
                eta: a.eta.unwrap_or(0.0),
                l: a.l.unwrap_or(0.0),
                r1: a.r1.unwrap_or(0.0),
                r2: a.r2.unwrap_or(0.0),
                a1: a.a1.unwrap_or(0.0),
                lambda1: a.lambda1.unwrap_or(0.0),
            });
            params.validate()?;
            params.matrix(&a.u, need(a.v, "--v", &name)?)?.into()
        }
        Family::Galilei => galilei_boost(&need(a.velocity, "--velocity", &name)?).into(),
        Family::Lorentz => lorentz_boost(&need(a.velocity, "--velocity", &name)?, a.c)?.into(),
        Family::Shear => {
            let sh = ShearK::new(need(a.k, "--k", &name)?, a.lambda, a.c)?;
            shear_matrix(&sh).into()
        }
        Family::TwoWay => two_way_map(&TwoWayParams {
            lambda: a.lambda,
            k1: a.k1.unwrap_or_else(Vector3::zeros),
            k2: a.k2.unwrap_or_else(Vector3::zeros),
            velocity: a.velocity.unwrap_or_else(Vector3::zeros),
            rotation,
            translation,
            c: a.c,
        })?,
        Family::AbsoluteSimultaneity => absolute_simultaneity_map(
            a.lambda,
            &a.k1.unwrap_or_else(Vector3::zeros),
            &a.velocity.unwrap_or_else(Vector3::zeros),
            &rotation,
            &translation,
            a.c,
        )?,
        Family::Tangherlini => tangherlini(need(a.v, "--v", &name)?, a.lambda, a.c)?,
    };
    Ok(map_report(&map))
}

fn read_map(path: &std::path::Path) -> Result<AffineMap4, Failure> {
    let text = fs::read_to_string(path).map_err(|e| Failure::io(path, e))?;
    serde_json::from_str(&text).map_err(|e| Failure {
        exit: 2,
        code: "parse",
        detail: format!("{}: {e}", path.display()),
    })
}

fn compose_files(paths: &[std::path::PathBuf]) -> Outcome {
    let maps = paths
        .iter()
        .map(|p| read_map(p))
        .collect::<Result<Vec<_>, _>>()?;
    let product = maps
        .iter()
        .rev()
        .fold(AffineMap4::identity(), |acc, m| compose(m, &acc));
    Ok(map_report(&product))
}

fn classify_cmd(params: &SpecialParams, numeric: bool) -> Outcome {
    let report = classify(params, numeric)?;
    let violations = match &report.tag {
        GroupTag::Anisotropic { violations } => violations.clone(),
        _ => Vec::new(),
    };
    let mut json = json!({
        "tag": report.tag.name(),
        "violations": violations,
        "reflection_residuals": report.reflection_residuals.iter().map(|&r| json_f64(r)).collect::<Vec<_>>(),
        "consistent": report.consistent,
    });
    if let GroupTag::Lorentz { c } = report.tag {
        json["c"] = json_f64(c);
    }
    let max = report
        .reflection_residuals
        .iter()
        .cloned()
        .fold(0.0, f64::max);
    let row = format!(
        "{},{},{},{}",
        report.tag.name(),
        violations.join(";"),
        csv_row(&[max]),
        report.consistent
    );
    Ok(Report::new(
        json,
        "tag,violations,max_reflection_residual,consistent",
        vec![row],
    )
    .verdict(report.consistent))
}

fn addvel(params: &SpecialParams, v1: f64, v2: f64) -> Outcome {
    params.validate()?;
    let sum = params.add_velocity(v1, v2)?;
    let c = params.coefficients(sum)?;
    let json = json!({
        "v1": json_f64(v1),
        "v2": json_f64(v2),
        "v1*v2": json_f64(sum),
        "a(v1*v2)": json_f64(c.a),
        "lambda(v1*v2)": json_f64(c.lambda),
    });
    Ok(Report::new(
        json,
        ADDVEL_HEADER,
        vec![csv_row(&[v1, v2, sum, c.a, c.lambda])],
    ))
}

fn ellipsoid_rows_report(rows: &[EllipsoidRow]) -> (Vec<Value>, Vec<String>, f64) {
    let json = rows
        .iter()
        .map(|r| {
            json!({
                "theta": json_f64(r.theta),
                "phi": json_f64(r.phi),
                "velocity": vec_json(&r.velocity),
                "residual": json_f64(r.residual),
            })
        })
        .collect();
    let csv = rows.iter().map(EllipsoidRow::to_csv).collect();
    let worst = rows.iter().map(|r| r.residual.abs()).fold(0.0, f64::max);
    (json, csv, worst)
}

fn ellipsoid(a: &EllipsoidArgs, cli: &Cli) -> Outcome {
    let sh = ShearK::unscaled(a.k, a.c)?;
    let g = ellipsoid_geometry(&sh);
    let tol = cli.tolerance.unwrap_or(limits::ELLIPSOID_BOUNDARY);
    let mut json = json!({
        "k": vec_json(&a.k),
        "c": json_f64(a.c),
        "centre": vec_json(&g.centre),
        "axis": vec_json(&g.axis),
        "major": json_f64(g.major),
        "transverse": json_f64(g.transverse),
        "interval": [json_f64(g.interval.lower), json_f64(g.interval.upper)],
    });
    let sampling = match (a.points, a.theta_steps, a.phi_steps) {
        (Some(points), _, _) => {
            let seed = cli
                .seed
                .ok_or_else(|| Failure::usage("--points needs --seed or KINEGROUP_SEED"))?;
            Some(EllipsoidSampling::Random { points, seed })
        }
        (None, Some(theta_steps), Some(phi_steps)) => Some(EllipsoidSampling::Grid {
            theta_steps,
            phi_steps,
        }),
        _ => None,
    };
    let Some(sampling) = sampling else {
        let c = g.centre;
        let row = csv_row(&[
            c.x,
            c.y,
            c.z,
            g.major,
            g.transverse,
            g.interval.lower,
            g.interval.upper,
        ]);
        return Ok(Report::new(
            json,
            "centre_x,centre_y,centre_z,major,transverse,lower,upper",
            vec![row],
        ));
    };
    let rows = ellipsoid_sweep(&sh, &sampling, Mode::Parallel)?;
    let (samples, csv, worst) = ellipsoid_rows_report(&rows);
    json["samples"] = Value::Array(samples);
    json["max_residual"] = json_f64(worst);
    Ok(Report::new(json, ELLIPSOID_HEADER, csv).verdict(worst <= tol))
}

fn verify_two_way(a: &VerifyArgs, tolerance: Option<f64>) -> Outcome {
    let map = match a.map {
        MapKind::Identity => CoordinateMap::identity(),
        MapKind::Shear => CoordinateMap::shear(&ShearK::unscaled(a.k, a.c)?),
        MapKind::Sine => CoordinateMap::NonlinearResync(sine_resync(a.c)?),
        MapKind::File => {
            let path = a
                .map_file
                .as_deref()
                .ok_or_else(|| Failure::usage("--map file needs --map-file"))?;
            CoordinateMap::from_source_chart(&read_map(path)?, &a.k)
        }
    };
    let path = if a.path == "unit-square" {
        ClosedPath::unit_square()
    } else {
        let p = std::path::Path::new(&a.path);
        ClosedPath::from_json_str(&fs::read_to_string(p).map_err(|e| Failure::io(p, e))?)?
    };
    let default_tol = match map {
        CoordinateMap::Affine(_) => limits::AFFINE_ROUND_TRIP,
        CoordinateMap::NonlinearResync(_) => limits::NONLINEAR_ROUND_TRIP,
    };
    let tol = tolerance.unwrap_or(default_tol);
    let rt = round_trip(&map, &path, a.steps, a.c)?;
    let residual = (rt.speed - a.c).abs();
    let mut json = json!({
        "round_trip": json_f64(rt.speed),
        "c": json_f64(a.c),
        "residual": json_f64(residual),
        "tolerance": json_f64(tol),
        "length": json_f64(rt.length),
        "time": json_f64(rt.time),
        "steps": a.steps,
        "pass": residual <= tol,
    });
    if let Some(g) = rt.max_gradient {
        json["max_gradient"] = json_f64(g);
    }
    let row = csv_row(&[rt.speed, a.c, residual, rt.length, rt.time]);
    Ok(Report::new(json, "round_trip,c,residual,length,time", vec![row]).verdict(residual <= tol))
}

fn decompose(a: &DecomposeArgs, tolerance: Option<f64>) -> Outcome {
    let map = read_map(&a.map_file)?;
    let tol = tolerance.unwrap_or(MEMBERSHIP_RESIDUAL);
    if a.tangherlini {
        let fit = decompose_tangherlini(&map, a.c)?;
        let member = fit.residual <= tol;
        let json = json!({
            "family": "tangherlini",
            "member": member,
            "residual": json_f64(fit.residual),
            "velocity": json_f64(fit.velocity),
            "lambda": json_f64(fit.lambda),
        });
        let row = format!(
            "{member},{}",
            csv_row(&[fit.residual, fit.velocity, fit.lambda])
        );
        return Ok(Report::new(json, "member,residual,velocity,lambda", vec![row]).verdict(member));
    }
    let d = decompose_two_way(&map, a.c)?;
    let member = d.residual() <= tol;
    let iterations = match d {
        kinegroup_core::decompose::TwoWayDecomposition::Member { iterations, .. }
        | kinegroup_core::decompose::TwoWayDecomposition::NonMember { iterations, .. } => {
            iterations
        }
    };
    let mut json = json!({
        "family": "two-way",
        "member": member,
        "residual": json_f64(d.residual()),
        "iterations": iterations,
    });
    let mut row = vec![d.residual()];
    if let Some(p) = d.params() {
        json["params"] = json!({
            "lambda": json_f64(p.lambda),
            "k1": vec_json(&p.k1),
            "k2": vec_json(&p.k2),
            "velocity": vec_json(&p.velocity),
            "rotation": vec_json(&p.rotation.scaled_axis()),
            "translation": p.translation.iter().map(|&x| json_f64(x)).collect::<Vec<_>>(),
            "c": json_f64(p.c),
        });
        row.push(p.lambda);
        row.extend(p.k1.iter().chain(p.k2.iter()).chain(p.velocity.iter()));
    }
    let header = if d.params().is_some() {
        "member,residual,lambda,k1_x,k1_y,k1_z,k2_x,k2_y,k2_z,v_x,v_y,v_z"
    } else {
        "member,residual"
    };
    Ok(Report::new(json, header, vec![format!("{member},{}", csv_row(&row))]).verdict(member))
}

fn run_selftest(cli: &Cli, sequential: bool) -> Outcome {
    if cli.tolerance.is_some() {
        return Err(Failure::usage(
            "selftest runs at its fixed criterion tolerances",
        ));
    }
    let seed = cli.seed.unwrap_or(selftest::DEFAULT_SEED);
    let mode = if sequential {
        Mode::Sequential
    } else {
        Mode::Parallel
    };
    let reports = selftest::run_all(seed, mode);
    for r in &reports {
        eprintln!("{}", r.line());
    }
    let passed = reports.iter().all(|r| r.passed);
    let json = json!({
        "seed": seed,
        "passed": passed,
        "criteria": reports.iter().map(|r| json!({
            "id": r.id,
            "name": r.name,
            "passed": r.passed,
            "detail": r.detail,
            "seconds": json_f64(r.seconds),
        })).collect::<Vec<_>>(),
    });
    let rows = reports
        .iter()
        .map(|r| {
            format!(
                "{},{},{},\"{}\"",
                r.id,
                r.passed,
                csv_row(&[r.seconds]),
                r.detail.replace('"', "\"\"")
            )
        })
        .collect();
    Ok(Report::new(json, "id,passed,seconds,detail", rows).verdict(passed))
}

fn sweep(path: &std::path::Path, cli: &Cli) -> Outcome {
    let text = fs::read_to_string(path).map_err(|e| Failure::io(path, e))?;
    let cfg = config::parse(&text, cli.seed).map_err(|d| Failure {
        exit: 2,
        code: "config",
        detail: d,
    })?;
    match cfg {
        SweepConfig::Addvel(grid) => {
            let rows = addvel_sweep(&grid, Mode::Parallel)?;
            let json = rows
                .iter()
                .map(|r| {
                    json!({
                        "v1": json_f64(r.v1),
                        "v2": json_f64(r.v2),
                        "v1*v2": json_f64(r.sum),
                        "a(v1*v2)": json_f64(r.a),
                        "lambda(v1*v2)": json_f64(r.lambda),
                    })
                })
                .collect();
            Ok(Report::new(
                Value::Array(json),
                ADDVEL_HEADER,
                rows.iter().map(|r| r.to_csv()).collect(),
            ))
        }
        SweepConfig::Ellipsoid { shear, sampling } => {
            let tol = cli.tolerance.unwrap_or(limits::ELLIPSOID_BOUNDARY);
            let rows = ellipsoid_sweep(&shear, &sampling, Mode::Parallel)?;
            let (json, csv, worst) = ellipsoid_rows_report(&rows);
            Ok(Report::new(Value::Array(json), ELLIPSOID_HEADER, csv).verdict(worst <= tol))
        }
    }
}
