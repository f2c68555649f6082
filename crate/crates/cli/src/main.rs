//! `cylschur`: batch CLI over the periodic Schur process library.
//!
//! Subcommands compute kernels, exact cylindric counts, bulk densities, and
//! run the built-in verification suites; everything emits CSV with a header
//! row and comment rows recording the inputs.
//!
//! Exit codes: 0 ok, 1 check failure, 2 configuration error, 3 precision
//! failure, 4 exact-identity mismatch.

// NaN-rejecting range guards are deliberately written in negated form.
#![allow(clippy::neg_cmp_op_on_partial_ord)]

use clap::{Parser, Subcommand};
use cylschur_core::error::Error;
use cylschur_core::kernel::{ContourSpec, KernelPoint};
use cylschur_core::partition::HalfInt;
use cylschur_core::{bulk, cylindric, kernel, parse, process};
use std::process::ExitCode;

mod checks;
mod output;

use output::Csv;

#[derive(Parser)]
#[command(
    name = "cylschur",
    about = "Periodic Schur processes, cylindric partitions, correlation kernels",
    version
)]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Shift-mixed correlation kernel values on a point list or grid.
    Kernel {
        /// Process spec: inline config (`N=1;t=0.3;z=1.3;a[1]=single:0.5;...`)
        /// or `@path/to/config`.
        #[arg(long)]
        spec: String,
        /// Explicit points `sigma,x;tau,y` per row, rows joined with `|`
        /// (e.g. `1,0.5;1,0.5|1,1.5;1,-0.5`). Positions are half-integers.
        #[arg(long)]
        points: Option<String>,
        /// Diagonal grid `tau=1;x=-4.5:4.5`: rows K(tau,x;tau,x).
        #[arg(long)]
        grid: Option<String>,
        /// Initial quadrature nodes (power of two).
        #[arg(long)]
        nodes: Option<usize>,
        /// Quadrature tolerance.
        #[arg(long)]
        tol: Option<f64>,
        /// Output CSV path (stdout when absent).
        #[arg(long)]
        out: Option<String>,
    },
    /// Exact cylindric counts: brute-force enumeration against the product
    /// formula, per norm.
    CylindricCount {
        /// Profile literal `A=0101101;mark=1`.
        #[arg(long)]
        profile: String,
        #[arg(long, default_value_t = 10)]
        max_norm: u64,
        #[arg(long)]
        out: Option<String>,
    },
    /// Bulk density grids for the limit kernel families.
    Density {
        /// One of `cylindric-finite`, `cylindric-slow`, `corner`, `no`.
        #[arg(long)]
        family: String,
        /// Gamma grid `lo:hi:step`.
        #[arg(long, default_value = "-2:2:0.25")]
        grid: String,
        /// Profile literal (cylindric-finite).
        #[arg(long)]
        profile: Option<String>,
        /// Slope (cylindric-slow).
        #[arg(long)]
        kappa: Option<f64>,
        /// Nome (corner family).
        #[arg(long)]
        t: Option<f64>,
        /// Corner selector `outer` or `inner`.
        #[arg(long)]
        corner: Option<String>,
        /// Hook-measure parameter μ0 (no family).
        #[arg(long)]
        mu0: Option<f64>,
        /// Shift parameter z (no family).
        #[arg(long)]
        z: Option<f64>,
        #[arg(long)]
        tol: Option<f64>,
        #[arg(long)]
        out: Option<String>,
    },
    /// Built-in verification suites.
    Check {
        /// One of `qseries`, `process`, `kernel`, `cylindric`, `bulk`, `no`,
        /// `all`.
        suite: String,
    },
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    match run(cli) {
        Ok(code) => code,
        Err(e) => {
            eprintln!("error: {e}");
            ExitCode::from(match e {
                Error::Config(_) => 2u8,
                Error::Precision(_) => 3,
                Error::Domain(_) => 2,
                Error::Resource(_) => 3,
                Error::Unsupported(_) => 2,
            })
        }
    }
}

fn run(cli: Cli) -> Result<ExitCode, Error> {
    match cli.command {
        Command::Kernel {
            spec,
            points,
            grid,
            nodes,
            tol,
            out,
        } => cmd_kernel(
            &spec,
            points.as_deref(),
            grid.as_deref(),
            nodes,
            tol,
            out.as_deref(),
        ),
        Command::CylindricCount {
            profile,
            max_norm,
            out,
        } => cmd_cylindric_count(&profile, max_norm, out.as_deref()),
        Command::Density {
            family,
            grid,
            profile,
            kappa,
            t,
            corner,
            mu0,
            z,
            tol,
            out,
        } => cmd_density(
            &family,
            &grid,
            profile.as_deref(),
            kappa,
            t,
            corner.as_deref(),
            mu0,
            z,
            tol,
            out.as_deref(),
        ),
        Command::Check { suite } => checks::cmd_check(&suite),
    }
}

fn load_spec(arg: &str) -> Result<process::ProcessSpec, Error> {
    let text = if let Some(path) = arg.strip_prefix('@') {
        std::fs::read_to_string(path)
            .map_err(|e| Error::config(format!("cannot read {path}: {e}")))?
    } else {
        arg.to_string()
    };
    parse::parse_process_config(&text)
}

fn parse_half(tok: &str) -> Result<HalfInt, Error> {
    let v: f64 = tok
        .trim()
        .parse()
        .map_err(|_| Error::config(format!("bad position {tok:?}")))?;
    let twice = (2.0 * v).round() as i64;
    if (twice as f64 - 2.0 * v).abs() > 1e-9 || twice % 2 == 0 {
        return Err(Error::config(format!(
            "position must be a half-integer, got {tok:?}"
        )));
    }
    HalfInt::from_twice(twice)
}

fn contour_from(nodes: Option<usize>, tol: Option<f64>) -> Result<ContourSpec, Error> {
    let mut c = ContourSpec::default();
    if let Some(n) = nodes {
        if !(64..=65536).contains(&n) {
            return Err(Error::config("nodes must lie in 64..=65536"));
        }
        c.nodes = n.next_power_of_two();
        c.max_nodes = c.max_nodes.max(c.nodes);
    }
    if let Some(t) = tol {
        if !(t > 0.0) {
            return Err(Error::config("tolerance must be positive"));
        }
        c.tolerance = t;
    }
    Ok(c)
}

/// Parallel map with deterministic output order; the worker count honours
/// CYLSCHUR_THREADS (default: available parallelism, capped at 8).
fn ordered_parallel<T, R, F>(items: Vec<T>, f: F) -> Vec<R>
where
    T: Sync,
    R: Send,
    F: Fn(&T) -> R + Sync,
{
    let threads = std::env::var("CYLSCHUR_THREADS")
        .ok()
        .and_then(|v| v.parse::<usize>().ok())
        .filter(|&v| v >= 1)
        .unwrap_or_else(|| {
            std::thread::available_parallelism()
                .map(|n| n.get().min(8))
                .unwrap_or(1)
        });
    if threads <= 1 || items.len() <= 1 {
        return items.iter().map(&f).collect();
    }
    let n = items.len();
    let results: Vec<std::sync::Mutex<Option<R>>> =
        (0..n).map(|_| std::sync::Mutex::new(None)).collect();
    let next = std::sync::atomic::AtomicUsize::new(0);
    std::thread::scope(|scope| {
        for _ in 0..threads.min(n) {
            scope.spawn(|| loop {
                let i = next.fetch_add(1, std::sync::atomic::Ordering::SeqCst);
                if i >= n {
                    break;
                }
                let r = f(&items[i]);
                *results[i].lock().unwrap() = Some(r);
            });
        }
    });
    results
        .into_iter()
        .map(|m| m.into_inner().unwrap().expect("worker filled every slot"))
        .collect()
}

fn cmd_kernel(
    spec_arg: &str,
    points: Option<&str>,
    grid: Option<&str>,
    nodes: Option<usize>,
    tol: Option<f64>,
    out: Option<&str>,
) -> Result<ExitCode, Error> {
    let spec = load_spec(spec_arg)?;
    let contour = contour_from(nodes, tol)?;
    let mut pairs: Vec<(KernelPoint, KernelPoint)> = Vec::new();
    if let Some(pts) = points {
        for row in pts.split('|') {
            let (pa, pb) = row
                .split_once(';')
                .ok_or_else(|| Error::config("each row needs `sigma,x;tau,y`"))?;
            let parse_pt = |tok: &str| -> Result<KernelPoint, Error> {
                let (tau, x) = tok
                    .split_once(',')
                    .ok_or_else(|| Error::config("point needs `tau,x`"))?;
                let tau: usize = tau
                    .trim()
                    .parse()
                    .map_err(|_| Error::config(format!("bad time {tau:?}")))?;
                if tau < 1 || tau > spec.period() {
                    return Err(Error::config(format!(
                        "time {tau} outside 1..={}",
                        spec.period()
                    )));
                }
                Ok(KernelPoint::new(tau, parse_half(x)?))
            };
            pairs.push((parse_pt(pa)?, parse_pt(pb)?));
        }
    }
    if let Some(g) = grid {
        let mut tau = 1usize;
        let mut range: Option<(HalfInt, HalfInt)> = None;
        for field in g.split(';') {
            let (key, val) = field
                .split_once('=')
                .ok_or_else(|| Error::config("grid fields are key=value"))?;
            match key.trim() {
                "tau" => {
                    tau = val
                        .trim()
                        .parse()
                        .map_err(|_| Error::config("bad grid tau"))?
                }
                "x" => {
                    let (lo, hi) = val
                        .split_once(':')
                        .ok_or_else(|| Error::config("grid x is lo:hi"))?;
                    range = Some((parse_half(lo)?, parse_half(hi)?));
                }
                other => return Err(Error::config(format!("unknown grid field {other:?}"))),
            }
        }
        let (lo, hi) = range.ok_or_else(|| Error::config("grid needs x=lo:hi"))?;
        if tau < 1 || tau > spec.period() {
            return Err(Error::config("grid tau outside the period"));
        }
        let mut x = lo;
        while x <= hi {
            let p = KernelPoint::new(tau, x);
            pairs.push((p, p));
            x = x.shifted(1);
        }
    }
    let mut csv = Csv::new(out)?;
    csv.comment(&format!(
        "spec: {}",
        parse::format_process_config(&spec).replace('\n', "; ")
    ))?;
    csv.comment(&format!(
        "nodes: {}, tolerance: {:e}",
        contour.nodes, contour.tolerance
    ))?;
    csv.header(&["sigma", "x", "tau", "y", "re", "im"])?;
    let values = ordered_parallel(pairs.clone(), |(p, q)| {
        kernel::kernel(&spec, *p, *q, &contour)
    });
    for ((p, q), v) in pairs.into_iter().zip(values) {
        let v = v?;
        csv.row(&[
            p.tau.to_string(),
            output::fmt_f64(p.x.to_f64()),
            q.tau.to_string(),
            output::fmt_f64(q.x.to_f64()),
            output::fmt_f64(v.re),
            output::fmt_f64(v.im),
        ])?;
    }
    csv.finish()?;
    Ok(ExitCode::SUCCESS)
}

fn cmd_cylindric_count(
    profile_arg: &str,
    max_norm: u64,
    out: Option<&str>,
) -> Result<ExitCode, Error> {
    let profile = parse::parse_profile(profile_arg)?;
    let brute = cylindric::counts_by_norm(&profile, max_norm)?;
    let formula = cylindric::generating_function_formula(&profile, max_norm as usize);
    let mut csv = Csv::new(out)?;
    csv.comment(&format!("profile: {profile}"))?;
    csv.header(&["n", "brute_count", "formula_count"])?;
    let mut mismatch = false;
    for n in 0..=max_norm as usize {
        csv.row(&[n.to_string(), brute[n].to_string(), formula[n].to_string()])?;
        if brute[n] != formula[n] {
            mismatch = true;
        }
    }
    csv.finish()?;
    if mismatch {
        eprintln!("identity mismatch: brute counts differ from formula coefficients");
        return Ok(ExitCode::from(4));
    }
    Ok(ExitCode::SUCCESS)
}

#[allow(clippy::too_many_arguments)]
fn cmd_density(
    family: &str,
    grid: &str,
    profile: Option<&str>,
    kappa: Option<f64>,
    t: Option<f64>,
    corner: Option<&str>,
    mu0: Option<f64>,
    z: Option<f64>,
    tol: Option<f64>,
    out: Option<&str>,
) -> Result<ExitCode, Error> {
    let tol = tol.unwrap_or(1e-10);
    let gammas = parse_grid(grid)?;
    let rho: Box<dyn Fn(f64) -> Result<f64, Error> + Sync> = match family {
        "cylindric-finite" => {
            let prof = parse::parse_profile(
                profile.ok_or_else(|| Error::config("cylindric-finite needs --profile"))?,
            )?;
            Box::new(move |g| Ok(bulk::cylindric_bulk_kernel(&prof, g, 1, 1, 0, tol)?.re))
        }
        "cylindric-slow" => {
            let k = kappa.ok_or_else(|| Error::config("cylindric-slow needs --kappa"))?;
            Box::new(move |g| bulk::cylindric_slow_density(k, g))
        }
        "corner" => {
            let tt = t.ok_or_else(|| Error::config("corner needs --t"))?;
            let which = match corner.unwrap_or("outer") {
                "outer" => bulk::Corner::Outer,
                "inner" => bulk::Corner::Inner,
                other => {
                    return Err(Error::config(format!(
                        "corner must be outer or inner, got {other:?}"
                    )))
                }
            };
            Box::new(move |g| {
                let (gmin, gmax) = bulk::corner_gamma_range(tt, which)?;
                if g <= gmin {
                    Ok(1.0)
                } else if g >= gmax {
                    Ok(0.0)
                } else {
                    Ok(bulk::corner_solve_c(tt, g, which)? / std::f64::consts::PI)
                }
            })
        }
        "no" => {
            let m = mu0.ok_or_else(|| Error::config("no family needs --mu0"))?;
            let zz = z.unwrap_or(1.0);
            Box::new(move |g| bulk::no_bulk_density(m, zz, g))
        }
        other => return Err(Error::config(format!("unknown family {other:?}"))),
    };
    let values = ordered_parallel(gammas.clone(), |g| rho(*g));
    let mut csv = Csv::new(out)?;
    csv.comment(&format!("family: {family}, grid: {grid}, tol: {tol:e}"))?;
    csv.header(&["gamma", "rho"])?;
    for (g, v) in gammas.iter().zip(values) {
        csv.row(&[output::fmt_f64(*g), output::fmt_f64(v?)])?;
    }
    csv.finish()?;
    Ok(ExitCode::SUCCESS)
}

fn parse_grid(grid: &str) -> Result<Vec<f64>, Error> {
    let mut it = grid.split(':');
    let (lo, hi, step) = match (it.next(), it.next(), it.next(), it.next()) {
        (Some(lo), Some(hi), Some(step), None) => (lo, hi, step),
        _ => return Err(Error::config("grid is lo:hi:step")),
    };
    let lo: f64 = lo.parse().map_err(|_| Error::config("bad grid lo"))?;
    let hi: f64 = hi.parse().map_err(|_| Error::config("bad grid hi"))?;
    let step: f64 = step.parse().map_err(|_| Error::config("bad grid step"))?;
    if !(step > 0.0) || hi < lo || (hi - lo) / step > 100_000.0 {
        return Err(Error::config("grid must be finite and increasing"));
    }
    let n = ((hi - lo) / step).round() as usize;
    Ok((0..=n).map(|i| lo + i as f64 * step).collect())
}
