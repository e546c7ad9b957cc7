//! Command-line front end. Every command reads and writes the JSON wire
//! format with `"p/q"` rationals, so output is exact and byte-stable across
//! runs.

use std::ffi::OsString;

use clap::{value_parser, Arg, ArgAction, ArgMatches, Command};
use num_rational::BigRational;
use num_traits::{ToPrimitive, Zero};
use serde_json::{json, Value};

use crate::barycenter::{bary, bary_residual, GroupSample};
use crate::congruence_recovery::{recover_k2, w_alpha_nf, RationalMatrix};
use crate::error::{Error, Result};
use crate::ncpoly::build_bary_poly;
use crate::ratio::{format_rational, parse_rational};
use crate::signatures::{sig_pwl, Composition, PwlPath};
use crate::tensor_algebra::{lie_algebra_dim, TensorSeq};
use crate::verify::run_suite;

/// Parses `argv` and runs the selected command. Returns the process exit
/// code: 0 on success, 1 on domain errors, 2 on usage errors.
pub fn run<I, T>(argv: I) -> i32
where
    I: IntoIterator<Item = T>,
    T: Into<OsString> + Clone,
{
    let matches = match build_command().try_get_matches_from(argv) {
        Ok(m) => m,
        Err(e) => {
            let code = e.exit_code();
            let _ = e.print();
            return code;
        }
    };
    match dispatch(&matches) {
        Ok(code) => code,
        Err(err) => {
            eprintln!("error: {err}");
            1
        }
    }
}

fn level_arg() -> Arg {
    Arg::new("level")
        .long("level")
        .short('k')
        .alias("k")
        .value_name("K")
        .value_parser(value_parser!(usize))
        .help("Truncation level of the tensor algebra")
}

fn svg_arg() -> Arg {
    Arg::new("svg")
        .long("svg")
        .value_name("FILE")
        .help("Also render the 2-D paths to a static SVG figure")
}

fn inputs_arg(help: &'static str) -> Arg {
    Arg::new("inputs")
        .long("inputs")
        .value_name("FILE")
        .num_args(1..)
        .required(true)
        .help(help)
}

fn build_command() -> Command {
    Command::new("sigbary")
        .about("Exact path signatures, group barycenters, and path recovery")
        .subcommand_required(true)
        .arg_required_else_help(true)
        .subcommand(
            Command::new("sig")
                .about("Signature of a piecewise linear path read from JSON")
                .arg(
                    Arg::new("path")
                        .long("path")
                        .value_name("FILE")
                        .required(true)
                        .help("Path JSON file with an increment matrix"),
                )
                .arg(level_arg().default_value("2"))
                .arg(svg_arg()),
        )
        .subcommand(
            Command::new("bary")
                .about("Barycenter of group-like tensor series")
                .arg(inputs_arg("Tensor series JSON files, one per sample member"))
                .arg(level_arg())
                .arg(
                    Arg::new("check")
                        .long("check")
                        .action(ArgAction::SetTrue)
                        .help("Re-evaluate the defining equation and report the residual"),
                ),
        )
        .subcommand(
            Command::new("recover")
                .about("Recover one path whose signature is the sample barycenter")
                .arg(inputs_arg("Path JSON files, one per sample member"))
                .arg(level_arg().default_value("2"))
                .arg(svg_arg()),
        )
        .subcommand(
            Command::new("normal-form")
                .about("Simultaneous congruence normal form of the level-two form")
                .arg(
                    Arg::new("alpha")
                        .long("alpha")
                        .value_name("A,B,C")
                        .required(true)
                        .help("Composition as comma-separated positive integers"),
                ),
        )
        .subcommand(
            Command::new("verify")
                .about("Run the full self-check suite")
                .arg(
                    Arg::new("omega")
                        .long("omega")
                        .value_name("P/Q")
                        .help("Extra rational parameter for the level-three family checks"),
                )
                .arg(
                    Arg::new("show-poly")
                        .long("show-poly")
                        .action(ArgAction::SetTrue)
                        .help("Print the two-sample barycenter polynomials first"),
                ),
        )
        .subcommand(
            Command::new("dim")
                .about("Dimension of the free nilpotent Lie algebra")
                .arg(
                    Arg::new("dim")
                        .long("dim")
                        .short('d')
                        .alias("d")
                        .value_name("D")
                        .required(true)
                        .value_parser(value_parser!(usize))
                        .help("Number of letters"),
                )
                .arg(level_arg().required(true)),
        )
}

fn dispatch(matches: &ArgMatches) -> Result<i32> {
    match matches.subcommand() {
        Some(("sig", sub)) => cmd_sig(sub),
        Some(("bary", sub)) => cmd_bary(sub),
        Some(("recover", sub)) => cmd_recover(sub),
        Some(("normal-form", sub)) => cmd_normal_form(sub),
        Some(("verify", sub)) => cmd_verify(sub),
        Some(("dim", sub)) => cmd_dim(sub),
        _ => unreachable!("subcommand is required"),
    }
}

fn read_json(path: &str) -> Result<Value> {
    let text = std::fs::read_to_string(path).map_err(|e| {
        if e.kind() == std::io::ErrorKind::NotFound {
            Error::InputNotFound(path.to_string())
        } else {
            Error::Io(e)
        }
    })?;
    serde_json::from_str(&text).map_err(|e| Error::BadInput(format!("{path}: {e}")))
}

fn print_json(value: &Value) {
    println!("{}", serde_json::to_string_pretty(value).expect("valid JSON tree"));
}

fn cmd_sig(sub: &ArgMatches) -> Result<i32> {
    let file = sub.get_one::<String>("path").expect("required");
    let level = *sub.get_one::<usize>("level").expect("defaulted");
    let path = PwlPath::from_json(&read_json(file)?)?;
    let sig = sig_pwl(&path, level)?;
    print_json(&sig.to_json());
    if let Some(svg) = sub.get_one::<String>("svg") {
        write_svg(svg, std::slice::from_ref(&path), None)?;
    }
    Ok(0)
}

fn cmd_bary(sub: &ArgMatches) -> Result<i32> {
    let files: Vec<&String> = sub.get_many::<String>("inputs").expect("required").collect();
    let mut members = Vec::new();
    for file in &files {
        members.push(TensorSeq::from_json(&read_json(file)?)?);
    }
    if let Some(&level) = sub.get_one::<usize>("level") {
        for (file, m) in files.iter().zip(&members) {
            if m.level() != level {
                return Err(Error::BadInput(format!(
                    "{file}: series has level {}, requested level {level}",
                    m.level()
                )));
            }
        }
    }
    let sample = GroupSample::new(members)?;
    let center = bary(&sample);
    print_json(&center.to_json());
    if sub.get_flag("check") {
        let residual = bary_residual(&center, &sample)?;
        if !residual.is_zero() {
            println!("residual: nonzero");
            return Err(Error::BadInput("barycenter residual is nonzero".into()));
        }
        println!("residual: 0");
    }
    Ok(0)
}

fn cmd_recover(sub: &ArgMatches) -> Result<i32> {
    let files: Vec<&String> = sub.get_many::<String>("inputs").expect("required").collect();
    let level = *sub.get_one::<usize>("level").expect("defaulted");
    let mut paths = Vec::new();
    for file in &files {
        paths.push(PwlPath::from_json(&read_json(file)?)?);
    }
    let recovered = recover_k2(&paths, level)?;
    print_json(&recovered.to_json());

    let mut sigs = Vec::new();
    for p in &paths {
        sigs.push(sig_pwl(p, level)?);
    }
    let sample = GroupSample::new(sigs)?;
    let residual = bary_residual(&sig_pwl(&recovered, level)?, &sample)?;
    if !residual.is_zero() {
        println!("residual: nonzero");
        return Err(Error::BadInput("recovered path misses the barycenter".into()));
    }
    println!("residual: 0");

    if let Some(svg) = sub.get_one::<String>("svg") {
        write_svg(svg, &paths, Some(&recovered))?;
    }
    Ok(0)
}

fn cmd_normal_form(sub: &ArgMatches) -> Result<i32> {
    let text = sub.get_one::<String>("alpha").expect("required");
    let mut parts = Vec::new();
    for piece in text.split(',') {
        let part: usize = piece
            .trim()
            .parse()
            .map_err(|_| Error::BadInput(format!("invalid composition '{text}'")))?;
        parts.push(part);
    }
    let alpha = Composition::new(parts)?;
    let nf = w_alpha_nf(&alpha);
    print_json(&json!({
        "alpha": alpha.parts(),
        "transform": matrix_json(&nf.congruence.transform),
        "normal_form": matrix_json(&nf.congruence.normal_form),
        "rank": nf.congruence.rank,
        "vector_image": vector_json(&nf.vector_image),
    }));
    Ok(0)
}

fn cmd_verify(sub: &ArgMatches) -> Result<i32> {
    let omega = match sub.get_one::<String>("omega") {
        Some(text) => {
            let w = parse_rational(text)?;
            if w.is_zero() {
                return Err(Error::ZeroOmega);
            }
            Some(w)
        }
        None => None,
    };
    if sub.get_flag("show-poly") {
        println!("barycenter series, two samples, level 2:");
        println!("{}", build_bary_poly(2, 2));
        println!("barycenter series, two samples, level 3:");
        println!("{}", build_bary_poly(2, 3));
    }
    let outcomes = run_suite(omega.as_ref());
    let mut failures = 0usize;
    for o in &outcomes {
        if o.passed {
            println!("ok {}", o.name);
        } else {
            failures += 1;
            println!("FAIL {}: {}", o.name, o.detail);
        }
    }
    if failures > 0 {
        return Err(Error::VerifyFailed(failures));
    }
    println!("all {} checks passed", outcomes.len());
    Ok(0)
}

fn cmd_dim(sub: &ArgMatches) -> Result<i32> {
    let d = *sub.get_one::<usize>("dim").expect("required");
    let k = *sub.get_one::<usize>("level").expect("required");
    if d == 0 {
        return Err(Error::ZeroDim);
    }
    if k == 0 {
        return Err(Error::ZeroLevel);
    }
    println!("{}", lie_algebra_dim(d, k));
    Ok(0)
}

fn matrix_json(m: &RationalMatrix) -> Value {
    Value::Array(
        m.to_rows()
            .into_iter()
            .map(|row| Value::Array(row.iter().map(|x| Value::String(format_rational(x))).collect()))
            .collect(),
    )
}

fn vector_json(v: &[BigRational]) -> Value {
    Value::Array(v.iter().map(|x| Value::String(format_rational(x))).collect())
}

const INPUT_COLORS: [&str; 6] =
    ["#1f77b4", "#2ca02c", "#9467bd", "#8c564b", "#e377c2", "#7f7f7f"];

/// Renders the given planar paths into one static SVG figure. The recovered
/// path, when present, is drawn last in red on top of the inputs.
fn write_svg(file: &str, inputs: &[PwlPath], recovered: Option<&PwlPath>) -> Result<()> {
    let mut polylines = Vec::new();
    for path in inputs.iter().chain(recovered) {
        if path.dim() != 2 {
            return Err(Error::NotPlanar);
        }
        let points: Vec<(f64, f64)> = path
            .vertices()
            .iter()
            .map(|v| (v[0].to_f64().unwrap_or(0.0), v[1].to_f64().unwrap_or(0.0)))
            .collect();
        polylines.push(points);
    }

    let xs = polylines.iter().flatten().map(|p| p.0);
    let ys = polylines.iter().flatten().map(|p| p.1);
    let (min_x, max_x) = bounds(xs);
    let (min_y, max_y) = bounds(ys);
    let side = 480.0;
    let margin = 32.0;
    let span_x = (max_x - min_x).max(1e-9);
    let span_y = (max_y - min_y).max(1e-9);
    let scale = ((side - 2.0 * margin) / span_x).min((side - 2.0 * margin) / span_y);
    let offset_x = (side - span_x * scale) / 2.0;
    let offset_y = (side - span_y * scale) / 2.0;
    let place = |(x, y): (f64, f64)| -> (f64, f64) {
        (offset_x + (x - min_x) * scale, side - offset_y - (y - min_y) * scale)
    };

    let mut doc = format!(
        "<svg xmlns=\"http://www.w3.org/2000/svg\" width=\"{side}\" height=\"{side}\" \
         viewBox=\"0 0 {side} {side}\">\n  <rect width=\"100%\" height=\"100%\" fill=\"white\"/>\n"
    );
    let n_inputs = inputs.len();
    for (idx, line) in polylines.iter().enumerate() {
        let from_input = idx < n_inputs;
        let (color, width) = if from_input {
            (INPUT_COLORS[idx % INPUT_COLORS.len()], 2.0)
        } else {
            ("#d62728", 3.0)
        };
        let points: Vec<String> = line
            .iter()
            .map(|&p| {
                let (x, y) = place(p);
                format!("{x:.3},{y:.3}")
            })
            .collect();
        doc.push_str(&format!(
            "  <polyline points=\"{}\" fill=\"none\" stroke=\"{color}\" stroke-width=\"{width}\"/>\n",
            points.join(" ")
        ));
        if !from_input {
            for &p in line {
                let (x, y) = place(p);
                doc.push_str(&format!(
                    "  <circle cx=\"{x:.3}\" cy=\"{y:.3}\" r=\"4\" fill=\"{color}\"/>\n"
                ));
            }
        }
    }
    doc.push_str("</svg>\n");
    std::fs::write(file, doc)?;
    Ok(())
}

fn bounds(values: impl Iterator<Item = f64>) -> (f64, f64) {
    let mut min = f64::INFINITY;
    let mut max = f64::NEG_INFINITY;
    for v in values {
        min = min.min(v);
        max = max.max(v);
    }
    if min > max {
        (0.0, 1.0)
    } else {
        (min, max)
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn usage_errors_exit_with_two() {
        assert_eq!(run(["sigbary", "dim"]), 2);
        assert_eq!(run(["sigbary", "no-such-command"]), 2);
    }

    #[test]
    fn missing_files_are_domain_errors() {
        assert_eq!(run(["sigbary", "sig", "--path", "missing.json"]), 1);
    }

    #[test]
    fn dim_accepts_short_long_and_bare_aliases() {
        for args in [
            ["sigbary", "dim", "--d", "2", "--k", "2"],
            ["sigbary", "dim", "-d", "2", "-k", "2"],
            ["sigbary", "dim", "--dim", "2", "--level", "2"],
        ] {
            assert_eq!(run(args), 0);
        }
    }

    #[test]
    fn zero_parameters_are_rejected() {
        assert_eq!(run(["sigbary", "dim", "--d", "0", "--k", "2"]), 1);
        assert_eq!(run(["sigbary", "dim", "--d", "2", "--k", "0"]), 1);
        assert_eq!(run(["sigbary", "verify", "--omega", "0/3"]), 1);
    }
}
