//! Command-line front end: generate chains, integrate forms, compute winding
//! maps, run theorem verifications, emit CSV/SVG/JSON artifacts.
//!
//! Exit codes: 0 when the command (and any verification) succeeds, 1 when a
//! verification report fails, 2 on precondition or usage errors.

use chaincalc_core::closure::{close_chain, ClosureParams};
use chaincalc_core::forms::{parse_function_spec, QuadratureSpec};
use chaincalc_core::gen;
use chaincalc_core::geom::{Point2, Rect};
use chaincalc_core::io::{load_chain1, load_chain2, save_chain1, save_chain2};
use chaincalc_core::render;
use chaincalc_core::residue;
use chaincalc_core::winding;
use clap::{Args, Parser, Subcommand};
use std::collections::BTreeMap;
use std::path::PathBuf;
use std::process::ExitCode;

#[derive(Parser)]
#[command(
    name = "chaincalc",
    version,
    about = "Polyhedral chain calculus in the plane"
)]
struct Cli {
    /// Cap the worker thread count (defaults to the rayon heuristic).
    #[arg(long, global = true)]
    threads: Option<usize>,

    /// TOML-style config file of `flag = value` lines, applied where the flag
    /// is absent from the command line.
    #[arg(long, global = true)]
    config: Option<PathBuf>,

    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Generate a chain file.
    Gen(GenArgs),
    /// Integrate a complex 1-form over a 1-chain.
    Integrate(IntegrateArgs),
    /// Winding number of a chain about a point.
    Winding(WindingArgs),
    /// Component decomposition of the support complement with per-component
    /// winding statistics; emits SVG/CSV.
    WindingMap(WindingMapArgs),
    /// Close a chain away from a prescribed ball.
    Close(CloseArgs),
    /// Signed density of a 2-chain at a point, optionally rastered.
    Density(DensityArgs),
    /// Run a theorem verification and print its JSON report.
    Verify(VerifyArgs),
}

#[derive(Args)]
struct GenArgs {
    #[command(subcommand)]
    generator: Generator,
}

#[derive(Subcommand)]
enum Generator {
    /// Regular polygon approximating a circle.
    Circle {
        #[arg(long, default_value = "0,0", value_parser = parse_point, allow_hyphen_values = true)]
        center: Point2,
        #[arg(long, default_value_t = 1.0)]
        radius: f64,
        #[arg(long, default_value_t = 64)]
        n: usize,
        #[arg(long, default_value_t = 1.0)]
        weight: f64,
        #[command(flatten)]
        out: GenOut,
    },
    /// Koch snowflake prefix.
    Koch {
        #[arg(long, default_value_t = 3)]
        level: u32,
        #[command(flatten)]
        out: GenOut,
    },
    /// Closed rectilinear staircase loop.
    Staircase {
        #[arg(long, default_value_t = 8)]
        steps: usize,
        #[command(flatten)]
        out: GenOut,
    },
    /// Random weighted triangles and their exactly closed boundary.
    Random {
        #[arg(long, default_value_t = 1)]
        seed: u64,
        #[arg(long, default_value_t = 6)]
        n: usize,
        #[arg(long, default_value = "-2,-2,2,2", value_parser = parse_rect, allow_hyphen_values = true)]
        window: Rect,
        /// Write the bounding 2-chain here as well.
        #[arg(long)]
        chain2: Option<PathBuf>,
        #[command(flatten)]
        out: GenOut,
    },
    /// Grid discretization of a plane vector field.
    Vectorfield {
        /// Field spec: "rotation:R0,R1" (rigid rotation on an annulus) or
        /// "constant:VX,VY".
        #[arg(long)]
        field: String,
        #[arg(long, default_value = "-2,-2,2,2", value_parser = parse_rect, allow_hyphen_values = true)]
        window: Rect,
        #[arg(long, default_value_t = 0.02)]
        h: f64,
        #[command(flatten)]
        out: GenOut,
    },
}

#[derive(Args)]
struct GenOut {
    /// Output chain file.
    #[arg(short, long)]
    output: PathBuf,
    /// Optional SVG render of the chain.
    #[arg(long)]
    svg: Option<PathBuf>,
}

#[derive(Args)]
struct IntegrateArgs {
    #[arg(short, long)]
    chain: PathBuf,
    /// Function spec (exp, sin, poly:EXPR, one_over_z_minus:X,Y, rational:P/Q).
    #[arg(short, long)]
    function: String,
    #[command(flatten)]
    quad: QuadArgs,
}

#[derive(Args)]
struct QuadArgs {
    /// Shorthand absolute tolerance (overrides --atol).
    #[arg(short = 'q', long = "qtol")]
    qtol: Option<f64>,
    #[arg(long, default_value_t = 1e-12)]
    atol: f64,
    #[arg(long, default_value_t = 1e-10)]
    rtol: f64,
    #[arg(long, default_value_t = 16)]
    order: usize,
    #[arg(long, default_value_t = 30)]
    max_depth: u32,
}

impl QuadArgs {
    fn spec(&self) -> QuadratureSpec {
        QuadratureSpec {
            order: self.order,
            atol: self.qtol.unwrap_or(self.atol),
            rtol: self.rtol,
            max_depth: self.max_depth,
        }
    }
}

#[derive(Args)]
struct WindingArgs {
    #[arg(short, long)]
    chain: PathBuf,
    #[arg(short = 'z', long, value_parser = parse_point, allow_hyphen_values = true)]
    point: Point2,
}

#[derive(Args)]
struct WindingMapArgs {
    #[arg(short, long)]
    chain: PathBuf,
    /// Output SVG heatmap.
    #[arg(short, long)]
    output: PathBuf,
    /// Output CSV of per-component statistics.
    #[arg(long)]
    csv: Option<PathBuf>,
    #[arg(long, default_value_t = 512)]
    resolution: usize,
    /// Support dilation in grid diagonals.
    #[arg(long, default_value_t = 2.0)]
    delta: f64,
    #[arg(long, default_value_t = winding::SAMPLES_PER_COMPONENT)]
    samples: usize,
}

#[derive(Args)]
struct CloseArgs {
    #[arg(short, long)]
    chain: PathBuf,
    #[arg(short = 'z', long, value_parser = parse_point, allow_hyphen_values = true)]
    point: Point2,
    #[arg(long)]
    eps: f64,
    #[arg(short = 'j', long, default_value_t = 1)]
    subdivision: u32,
    #[arg(long, default_value_t = std::f64::consts::FRAC_PI_4)]
    theta_max: f64,
    #[arg(long, default_value_t = 64)]
    ngon: usize,
    /// Output chain file for the closed chain.
    #[arg(short, long)]
    output: Option<PathBuf>,
    #[arg(long)]
    svg: Option<PathBuf>,
}

#[derive(Args)]
struct DensityArgs {
    #[arg(short, long)]
    chain: PathBuf,
    #[arg(short = 'z', long, value_parser = parse_point, required_unless_present = "raster", allow_hyphen_values = true)]
    point: Option<Point2>,
    /// Initial radius; defaults to half the distance to the boundary support.
    #[arg(long)]
    eps0: Option<f64>,
    /// Output CSV raster over --window at --res.
    #[arg(long)]
    raster: Option<PathBuf>,
    #[arg(long)]
    svg: Option<PathBuf>,
    #[arg(long, value_parser = parse_rect, allow_hyphen_values = true)]
    window: Option<Rect>,
    #[arg(long, default_value_t = 64)]
    res: usize,
}

#[derive(Args)]
struct VerifyArgs {
    /// Theorem to verify: cit, cif, residue, density-winding.
    theorem: String,
    #[arg(short, long)]
    chain: PathBuf,
    #[arg(short, long)]
    function: Option<String>,
    #[arg(short = 'z', long, value_parser = parse_point, allow_hyphen_values = true)]
    point: Option<Point2>,
    /// Per-singularity disk radii for the residue theorem (comma separated).
    #[arg(long, value_delimiter = ',')]
    radii: Option<Vec<f64>>,
    /// Explicit bounding 2-chain witness file (residue theorem).
    #[arg(long)]
    witness: Option<PathBuf>,
    #[arg(long)]
    eps0: Option<f64>,
    #[command(flatten)]
    quad: QuadArgs,
}

fn parse_point(s: &str) -> Result<Point2, String> {
    let (x, y) = s
        .split_once(',')
        .ok_or_else(|| format!("expected X,Y in field 'point', got '{s}'"))?;
    Ok(Point2::new(
        x.trim()
            .parse()
            .map_err(|_| format!("bad number '{x}' in field 'point'"))?,
        y.trim()
            .parse()
            .map_err(|_| format!("bad number '{y}' in field 'point'"))?,
    ))
}

fn parse_rect(s: &str) -> Result<Rect, String> {
    let parts: Vec<&str> = s.split(',').collect();
    if parts.len() != 4 {
        return Err(format!("expected X0,Y0,X1,Y1 in field 'window', got '{s}'"));
    }
    let nums: Vec<f64> = parts
        .iter()
        .map(|p| {
            p.trim()
                .parse()
                .map_err(|_| format!("bad number '{p}' in field 'window'"))
        })
        .collect::<Result<_, String>>()?;
    Ok(Rect::new(
        Point2::new(nums[0], nums[1]),
        Point2::new(nums[2], nums[3]),
    ))
}

/// Expands `--config file` into trailing `--flag value` pairs for every entry
/// whose flag is not already on the command line, so explicit flags win.
fn apply_config(mut argv: Vec<String>) -> Result<Vec<String>, String> {
    let Some(pos) = argv.iter().position(|a| a == "--config") else {
        return Ok(argv);
    };
    if pos + 1 >= argv.len() {
        return Err("missing value for '--config'".into());
    }
    let path = argv[pos + 1].clone();
    let text =
        std::fs::read_to_string(&path).map_err(|e| format!("cannot read config '{path}': {e}"))?;
    for (lineno, line) in text.lines().enumerate() {
        let line = line.trim();
        if line.is_empty() || line.starts_with('#') {
            continue;
        }
        let (key, value) = line
            .split_once('=')
            .ok_or_else(|| format!("config line {}: expected 'flag = value'", lineno + 1))?;
        let key = key.trim();
        let value = value.trim().trim_matches('"');
        if key.is_empty() || key.contains(char::is_whitespace) {
            return Err(format!("config line {}: bad flag name '{key}'", lineno + 1));
        }
        let flag = format!("--{key}");
        if !argv
            .iter()
            .any(|a| *a == flag || a.starts_with(&format!("{flag}=")))
        {
            argv.push(flag);
            argv.push(value.to_string());
        }
    }
    Ok(argv)
}

fn main() -> ExitCode {
    let argv = match apply_config(std::env::args().collect()) {
        Ok(v) => v,
        Err(e) => {
            eprintln!("error: {e}");
            return ExitCode::from(2);
        }
    };
    let cli = Cli::parse_from(argv);
    if let Some(n) = cli.threads {
        if rayon::ThreadPoolBuilder::new()
            .num_threads(n)
            .build_global()
            .is_err()
        {
            eprintln!("warning: thread pool already initialized");
        }
    }
    match run(cli.command) {
        Ok(pass) => {
            if pass {
                ExitCode::SUCCESS
            } else {
                ExitCode::from(1)
            }
        }
        Err(e) => {
            eprintln!("error: {e}");
            ExitCode::from(2)
        }
    }
}

/// Runs a command; `Ok(false)` means a verification report failed.
fn run(cmd: Command) -> Result<bool, Box<dyn std::error::Error>> {
    match cmd {
        Command::Gen(args) => run_gen(args)?,
        Command::Integrate(args) => {
            let j = load_chain1(&args.chain)?;
            let f = parse_function_spec(&args.function)?;
            let v = chaincalc_core::forms::integrate_form(&j, &f, &args.quad.spec())?;
            println!(
                "{}",
                serde_json::json!({"integral": [v.re, v.im], "function": f.label()})
            );
        }
        Command::Winding(args) => {
            let j = load_chain1(&args.chain)?;
            let w = winding::winding_number(&j, args.point)?;
            println!("{}", serde_json::json!({"winding": [w.re, w.im]}));
        }
        Command::WindingMap(args) => {
            let j = load_chain1(&args.chain)?;
            let map = winding::component_map(&j, args.resolution, args.delta)?;
            let stats = winding::winding_field(&j, &map, args.samples)?;
            let values: BTreeMap<u32, f64> = stats.iter().map(|s| (s.label, s.mean)).collect();
            std::fs::write(&args.output, render::component_heatmap_svg(&map, &values))?;
            if let Some(csv) = &args.csv {
                std::fs::write(csv, render::winding_csv(&stats))?;
            }
            println!("{}", serde_json::to_string(&stats)?);
        }
        Command::Close(args) => {
            let j = load_chain1(&args.chain)?;
            let params = ClosureParams {
                z: args.point,
                eps: args.eps,
                j: args.subdivision,
                theta_max: args.theta_max,
                ngon_n: args.ngon,
            };
            let (closed, report) = close_chain(&j, &params)?;
            if let Some(path) = &args.output {
                save_chain1(path, &closed)?;
            }
            if let Some(path) = &args.svg {
                std::fs::write(path, render::chain_svg(&[&closed]))?;
            }
            println!("{}", serde_json::to_string(&report)?);
        }
        Command::Density(args) => {
            let k = load_chain2(&args.chain)?;
            if let Some(z) = args.point {
                let eps0 = args
                    .eps0
                    .unwrap_or_else(|| 0.5 * k.boundary().support().distance(z));
                let (value, diag) = chaincalc_core::density::signed_density(&k, z, eps0)?;
                println!(
                    "{}",
                    serde_json::json!({"density": value, "diagnostics": diag})
                );
            }
            if let Some(raster_path) = &args.raster {
                let window = args.window.unwrap_or_else(|| {
                    let b = k.support().bbox().expect("nonzero chain");
                    b.pad(0.1 * b.diameter())
                });
                let raster = render::density_raster(&k, window, args.res);
                std::fs::write(raster_path, render::density_csv(&raster))?;
                if let Some(svg) = &args.svg {
                    std::fs::write(svg, render::density_svg(&raster, window, args.res))?;
                }
            }
        }
        Command::Verify(args) => return run_verify(args),
    }
    Ok(true)
}

fn run_gen(args: GenArgs) -> Result<(), Box<dyn std::error::Error>> {
    let (chain, out) = match args.generator {
        Generator::Circle {
            center,
            radius,
            n,
            weight,
            out,
        } => (gen::circle_chain(center, radius, n, weight)?, out),
        Generator::Koch { level, out } => (gen::koch_chain(level)?, out),
        Generator::Staircase { steps, out } => (gen::staircase_chain(steps)?, out),
        Generator::Random {
            seed,
            n,
            window,
            chain2,
            out,
        } => {
            let (j, k0) = gen::random_closed_chain(seed, n, window)?;
            if let Some(path) = &chain2 {
                save_chain2(path, &k0)?;
            }
            (j, out)
        }
        Generator::Vectorfield {
            field,
            window,
            h,
            out,
        } => {
            let j = match parse_field(&field)? {
                Field::Rotation(r0, r1) => {
                    gen::vector_field_chain(gen::rotation_annulus_field(r0, r1), window, h)?
                }
                Field::Constant(vx, vy) => gen::vector_field_chain(move |_| (vx, vy), window, h)?,
            };
            (j, out)
        }
    };
    save_chain1(&out.output, &chain)?;
    if let Some(svg) = &out.svg {
        std::fs::write(svg, render::chain_svg(&[&chain]))?;
    }
    println!(
        "{}",
        serde_json::json!({"cells": chain.cells().len(), "mass": chain.mass(),
                           "boundary_mass": chain.boundary().mass()})
    );
    Ok(())
}

enum Field {
    Rotation(f64, f64),
    Constant(f64, f64),
}

fn parse_field(s: &str) -> Result<Field, String> {
    if let Some(rest) = s.strip_prefix("rotation:") {
        let p = parse_point(rest).map_err(|e| e.replace("point", "field"))?;
        return Ok(Field::Rotation(p.x, p.y));
    }
    if let Some(rest) = s.strip_prefix("constant:") {
        let p = parse_point(rest).map_err(|e| e.replace("point", "field"))?;
        return Ok(Field::Constant(p.x, p.y));
    }
    Err(format!(
        "unknown field spec '{s}' in field 'field' (expected rotation:R0,R1 or constant:VX,VY)"
    ))
}

fn run_verify(args: VerifyArgs) -> Result<bool, Box<dyn std::error::Error>> {
    let quad = args.quad.spec();
    let report = match args.theorem.as_str() {
        "cit" => {
            let j = load_chain1(&args.chain)?;
            let f =
                parse_function_spec(args.function.as_deref().ok_or("missing field 'function'")?)?;
            residue::verify_cit(&j, &f, &quad)?
        }
        "cif" => {
            let j = load_chain1(&args.chain)?;
            let f =
                parse_function_spec(args.function.as_deref().ok_or("missing field 'function'")?)?;
            let z = args.point.ok_or("missing field 'point'")?;
            residue::verify_cif(&j, &f, z, &quad)?
        }
        "residue" => {
            let j = load_chain1(&args.chain)?;
            let f =
                parse_function_spec(args.function.as_deref().ok_or("missing field 'function'")?)?;
            let witness = args.witness.as_deref().map(load_chain2).transpose()?;
            residue::verify_residue(&j, &f, args.radii.as_deref(), witness.as_ref(), &quad)?
        }
        "density-winding" => {
            let j = load_chain1(&args.chain)?;
            let z = args.point.ok_or("missing field 'point'")?;
            let eps0 = args.eps0.unwrap_or_else(|| {
                let d = j.support().distance(z);
                if d.is_finite() {
                    d / 8.0
                } else {
                    1.0
                }
            });
            residue::verify_density_winding(&j, z, eps0)?
        }
        other => return Err(format!("unknown theorem '{other}' in field 'theorem'").into()),
    };
    println!("{}", serde_json::to_string(&report)?);
    Ok(report.pass)
}
