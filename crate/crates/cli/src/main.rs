//! `dcz` — command-line front end for the discrete Calderon-Zygmund
//! operator suite: symbol tables, winding indices, transmission checks,
//! verification runs, periodic Riemann solves and half-space solves.
//!
//! Exit status: 0 success, 1 input/usage error, 2 solvability obstruction
//! (nonzero index somewhere).

mod svg;

use std::fs;
use std::path::{Path, PathBuf};
use std::process::ExitCode;

use clap::error::ErrorKind;
use clap::{Args, Parser, Subcommand};
use num_complex::Complex64;

use dcz_core::io;
use dcz_core::{
    continuous_winding, discrete_symbol, discrete_winding, factorize,
    mesh_convergence_report, project_minus, project_plus_coeff, project_plus_cot,
    sample_symbol_grid, solve_dense, solve_riemann, solve_truncated, solve_wiener_hopf,
    transmission_check, CzError, HalfSpaceProblem, KernelSpec, PartialSumPlan, PeriodicGrid,
    Result, RiemannProblem, SliceWindingReport, SolveReport,
};

#[derive(Parser)]
#[command(name = "dcz", version, about = "Discrete Calderon-Zygmund operators: symbols, indices, Riemann problems, half-space solves")]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Args)]
struct KernelArgs {
    /// Kernel configuration file (key = value lines)
    #[arg(long)]
    kernel: PathBuf,
    /// Constant term a of the operator a I + K
    #[arg(long, default_value = "0", value_parser = io::parse_complex)]
    a: Complex64,
    /// Lattice step
    #[arg(long, default_value_t = 1.0)]
    h: f64,
    /// Largest partial-sum cube radius N (the schedule is N/2, N)
    #[arg(long = "N", default_value_t = 30.0)]
    n: f64,
}

#[derive(Subcommand)]
enum Command {
    /// Sample the discrete symbol on a full grid (and a slice curve)
    Symbol {
        #[command(flatten)]
        kernel: KernelArgs,
        /// Grid nodes per axis
        #[arg(long, default_value_t = 64)]
        resolution: usize,
        /// Lateral frequency of the slice to plot (comma-separated, m-1 values)
        #[arg(long = "xi-prime")]
        xi_prime: Option<String>,
        /// Output directory (omit to print CSV to stdout)
        #[arg(long)]
        out: Option<PathBuf>,
    },
    /// Winding index of the symbol slice at a lateral frequency
    Index {
        #[command(flatten)]
        kernel: KernelArgs,
        /// Samples along the slice
        #[arg(long, default_value_t = 256)]
        resolution: usize,
        /// Lateral frequency (comma-separated, m-1 values; omit for m = 1)
        #[arg(long = "xi-prime")]
        xi_prime: Option<String>,
        /// Output directory for the slice CSV and winding-picture SVG
        #[arg(long)]
        out: Option<PathBuf>,
    },
    /// Compare the continuous symbol at the two poles
    Transmission {
        #[command(flatten)]
        kernel: KernelArgs,
    },
    /// Run the verification suite for a kernel
    Verify {
        #[command(flatten)]
        kernel: KernelArgs,
        /// Samples along verification slices
        #[arg(long, default_value_t = 64)]
        resolution: usize,
    },
    /// Solve the periodic Riemann problem from CSV data
    Riemann {
        /// Coefficient G as a t,re,im CSV
        coefficient: PathBuf,
        /// Right-hand side g as a t,re,im CSV
        rhs: PathBuf,
        /// Output directory
        #[arg(long)]
        out: Option<PathBuf>,
    },
    /// Solve the discrete half-space equation
    Solve {
        /// Problem file (dimension, h, a, kernel, box, rhs); omit to build
        /// a constant-rhs problem from the flags
        problem: Option<PathBuf>,
        /// Kernel configuration file (overrides the problem file)
        #[arg(long)]
        kernel: Option<PathBuf>,
        /// Constant term a (overrides the problem file)
        #[arg(long, value_parser = io::parse_complex)]
        a: Option<Complex64>,
        /// Lattice step (overrides the problem file)
        #[arg(long)]
        h: Option<f64>,
        /// Box as LATxDEPTH, lateral node count per axis x depth nodes
        #[arg(long = "box", value_parser = parse_box)]
        box_dims: Option<(usize, usize)>,
        /// Solver route
        #[arg(long, default_value = "wiener-hopf", value_parser = ["dense", "iterative", "wiener-hopf"])]
        method: String,
        /// Residual tolerance
        #[arg(long, default_value_t = 1e-8)]
        tol: f64,
        /// Output directory
        #[arg(long)]
        out: Option<PathBuf>,
    },
}

fn parse_f64_list(s: &str) -> Result<Vec<f64>> {
    if s.trim().is_empty() {
        return Ok(Vec::new());
    }
    s.split(',')
        .map(|p| {
            p.trim()
                .parse::<f64>()
                .map_err(|_| CzError::Parse(format!("bad number {p:?} in frequency list")))
        })
        .collect()
}

fn parse_box(s: &str) -> std::result::Result<(usize, usize), String> {
    let (lat, depth) = s
        .split_once(['x', 'X'])
        .ok_or_else(|| format!("box must look like 16x8, got {s:?}"))?;
    let lat: usize = lat.trim().parse().map_err(|_| format!("bad lateral count {lat:?}"))?;
    let depth: usize = depth.trim().parse().map_err(|_| format!("bad depth {depth:?}"))?;
    if lat % 2 != 0 {
        return Err(format!("lateral node count {lat} must be even (2L)"));
    }
    Ok((lat, depth))
}

fn main() -> ExitCode {
    let cli = match Cli::try_parse() {
        Ok(c) => c,
        Err(e) => {
            let code = match e.kind() {
                ErrorKind::DisplayHelp | ErrorKind::DisplayVersion => 0,
                _ => 1,
            };
            let _ = e.print();
            return ExitCode::from(code);
        }
    };
    match run(cli.command) {
        Ok(code) => code,
        Err(e) => {
            eprintln!("error: {e}");
            match e {
                CzError::NonzeroIndex { .. } => ExitCode::from(2),
                _ => ExitCode::from(1),
            }
        }
    }
}

fn load_kernel(path: &Path) -> Result<KernelSpec> {
    io::parse_kernel_config(&fs::read_to_string(path)?)
}

fn plan_for(n: f64) -> Result<PartialSumPlan> {
    PartialSumPlan::new(vec![n / 2.0, n])
}

fn emit(out: &Option<PathBuf>, name: &str, content: &str) -> Result<()> {
    match out {
        Some(dir) => {
            fs::create_dir_all(dir)?;
            fs::write(dir.join(name), content)?;
            Ok(())
        }
        None => {
            print!("{content}");
            Ok(())
        }
    }
}

/// Like [`emit`] but never falls back to stdout (binary-ish artifacts).
fn emit_file(out: &Option<PathBuf>, name: &str, content: &str) -> Result<()> {
    if out.is_some() {
        emit(out, name, content)?;
    }
    Ok(())
}

fn slice_csv(report: &SliceWindingReport, h: f64, resolution: usize) -> String {
    let mut out = String::from("xi_m,re,im\n");
    let bound = std::f64::consts::PI / h;
    for (i, v) in report.samples.iter().enumerate() {
        let xi_m = -bound + 2.0 * bound * i as f64 / resolution as f64;
        out.push_str(&format!(
            "{},{},{}\n",
            io::fmt_f64(xi_m),
            io::fmt_f64(v.re),
            io::fmt_f64(v.im)
        ));
    }
    out
}

fn curve_points(samples: &[Complex64]) -> Vec<(f64, f64)> {
    samples.iter().map(|v| (v.re, v.im)).collect()
}

fn run(cmd: Command) -> Result<ExitCode> {
    match cmd {
        Command::Symbol {
            kernel,
            resolution,
            xi_prime,
            out,
        } => {
            let k = load_kernel(&kernel.kernel)?;
            let plan = plan_for(kernel.n)?;
            let grid = sample_symbol_grid(&k, kernel.a, kernel.h, resolution, &plan)?;
            emit(&out, "symbol.csv", &io::symbol_grid_csv(&grid))?;

            // slice curve for the winding picture
            let m = k.dim();
            let slice_xi = match (&xi_prime, m) {
                (Some(x), _) => Some(parse_f64_list(x)?),
                (None, 1) => Some(Vec::new()),
                _ => None,
            };
            if let Some(xp) = slice_xi {
                let rep = discrete_winding(&k, kernel.a, kernel.h, &xp, resolution.max(8), &plan)?;
                emit_file(&out, "slice.csv", &slice_csv(&rep, kernel.h, resolution.max(8)))?;
                let title = format!("symbol slice, winding {}", rep.winding);
                emit_file(&out, "slice.svg", &svg::curve_svg(&curve_points(&rep.samples), &title))?;
            }
            eprintln!(
                "symbol: m={} h={} resolution={} N={} converged={}",
                grid.m,
                grid.h,
                grid.resolution,
                grid.n_used,
                grid.converged.iter().all(|&c| c)
            );
            Ok(ExitCode::SUCCESS)
        }

        Command::Index {
            kernel,
            resolution,
            xi_prime,
            out,
        } => {
            let k = load_kernel(&kernel.kernel)?;
            let plan = plan_for(kernel.n)?;
            let xp = match xi_prime {
                Some(x) => parse_f64_list(&x)?,
                None => Vec::new(),
            };
            let disc = discrete_winding(&k, kernel.a, kernel.h, &xp, resolution, &plan)?;
            println!("discrete winding (h = {}): {}", kernel.h, disc.winding);
            match continuous_winding(&k, kernel.a, &xp, 10 * resolution) {
                Ok(cont) => println!("continuous winding: {}", cont.winding),
                Err(e) => println!("continuous winding: unavailable ({e})"),
            }
            emit_file(&out, "slice.csv", &slice_csv(&disc, kernel.h, resolution))?;
            let title = format!("a + sigma_h slice, winding {}", disc.winding);
            emit_file(&out, "slice.svg", &svg::curve_svg(&curve_points(&disc.samples), &title))?;
            Ok(ExitCode::SUCCESS)
        }

        Command::Transmission { kernel } => {
            let k = load_kernel(&kernel.kernel)?;
            let rep = transmission_check(&k, kernel.a)?;
            println!("sigma(0,...,0,-1) = {}", io::fmt_complex(rep.sigma_south));
            println!("sigma(0,...,0,+1) = {}", io::fmt_complex(rep.sigma_north));
            println!("defect = {}", io::fmt_f64(rep.defect));
            println!("transmission {}", if rep.passed { "passes" } else { "FAILS" });
            Ok(ExitCode::SUCCESS)
        }

        Command::Verify { kernel, resolution } => {
            let k = load_kernel(&kernel.kernel)?;
            let failures = run_verify(&k, kernel.a, kernel.h, kernel.n, resolution)?;
            if failures == 0 {
                println!("verify: all checks passed");
                Ok(ExitCode::SUCCESS)
            } else {
                println!("verify: {failures} check(s) failed");
                Ok(ExitCode::from(1))
            }
        }

        Command::Riemann { coefficient, rhs, out } => {
            let g = io::periodic_grid_from_csv(&fs::read_to_string(&coefficient)?)?;
            let rhs = io::periodic_grid_from_csv(&fs::read_to_string(&rhs)?)?;
            let problem = RiemannProblem::new(g, rhs)?;
            println!("index kappa = {}", problem.kappa);
            emit_file(
                &out,
                "coefficient.svg",
                &svg::curve_svg(
                    &curve_points(problem.coefficient.values()),
                    &format!("coefficient curve, kappa = {}", problem.kappa),
                ),
            )?;
            let sol = solve_riemann(&problem)?;
            let fact = factorize(&problem.coefficient)?;
            emit(&out, "phi_plus.csv", &io::periodic_grid_csv(&sol.phi_plus))?;
            emit(&out, "phi_minus.csv", &io::periodic_grid_csv(&sol.phi_minus))?;
            emit_file(&out, "factorization.txt", &io::factorization_report(&fact))?;
            println!("residual_max = {}", io::fmt_f64(sol.residual_max));
            Ok(ExitCode::SUCCESS)
        }

        Command::Solve {
            problem,
            kernel,
            a,
            h,
            box_dims,
            method,
            tol,
            out,
        } => {
            let p = build_problem(problem, kernel, a, h, box_dims)?;
            let rep: SolveReport = match method.as_str() {
                "dense" => solve_dense(&p)?,
                "iterative" => solve_truncated(&p, tol)?,
                _ => solve_wiener_hopf(&p, tol)?,
            };
            emit(&out, "solution.csv", &io::solution_csv(&p, &rep.solution))?;
            emit_file(&out, "report.txt", &io::solve_report_text(&rep))?;
            eprintln!(
                "solve: method={} residual_max={} iterations={} converged={}",
                rep.method,
                io::fmt_f64(rep.residual_max),
                rep.iterations,
                rep.converged
            );
            for w in &rep.slice_warnings {
                eprintln!("warning: {w}");
            }
            Ok(ExitCode::SUCCESS)
        }
    }
}

fn build_problem(
    problem: Option<PathBuf>,
    kernel: Option<PathBuf>,
    a: Option<Complex64>,
    h: Option<f64>,
    box_dims: Option<(usize, usize)>,
) -> Result<HalfSpaceProblem> {
    match problem {
        Some(path) => {
            let mut p = io::parse_problem(&fs::read_to_string(&path)?)?;
            if let Some(kp) = kernel {
                let k = load_kernel(&kp)?;
                if k.dim() != p.kernel.dim() {
                    return Err(CzError::ShapeMismatch(
                        "override kernel dimension differs from the problem file".into(),
                    ));
                }
                p.kernel = k;
            }
            if let Some(a) = a {
                p.a = a;
            }
            if let Some(h) = h {
                if h <= 0.0 || !h.is_finite() {
                    return Err(CzError::InvalidInput("step h must be positive".into()));
                }
                p.h = h;
            }
            if box_dims.is_some() {
                return Err(CzError::InvalidInput(
                    "--box cannot resize a problem file (the rhs grid fixes the box)".into(),
                ));
            }
            Ok(p)
        }
        None => {
            let kernel = kernel.ok_or_else(|| {
                CzError::InvalidInput("solve needs a problem file or --kernel with --box".into())
            })?;
            let (lat, depth) = box_dims.ok_or_else(|| {
                CzError::InvalidInput("solve needs --box LATxD when no problem file is given".into())
            })?;
            let k = load_kernel(&kernel)?;
            let m = k.dim();
            let lateral_half = lat / 2;
            let unknowns = if m >= 2 {
                lat.pow(m as u32 - 1) * depth
            } else {
                depth
            };
            // default right-hand side: the constant-one grid
            let rhs = vec![Complex64::new(1.0, 0.0); unknowns];
            HalfSpaceProblem::new(
                k,
                a.unwrap_or_default(),
                h.unwrap_or(1.0),
                if m >= 2 { lateral_half } else { 0 },
                depth,
                rhs,
            )
        }
    }
}

/// Verification suite: prints one PASS/FAIL line per check, returns the
/// failure count.
fn run_verify(k: &KernelSpec, a: Complex64, h: f64, n: f64, resolution: usize) -> Result<usize> {
    let mut failures = 0usize;
    let mut check = |name: &str, ok: bool, detail: String| {
        println!("{}: {name} ({detail})", if ok { "PASS" } else { "FAIL" });
        if !ok {
            failures += 1;
        }
    };
    let m = k.dim();

    // scaling identity sigma_h(xi) = sigma_1(h xi), matched truncations
    {
        let plan_h = plan_for(n)?;
        let plan_1 = plan_for(n / h)?;
        let mut worst = 0.0f64;
        // deterministic low-discrepancy probe points in the period
        let golden = 0.618_033_988_749_894_9_f64;
        for i in 0..10 {
            let mut xi = vec![0.0; m];
            for (j, x) in xi.iter_mut().enumerate() {
                let frac = ((i as f64 + 1.0) * golden + j as f64 * 0.318) % 1.0;
                *x = (2.0 * frac - 1.0) * std::f64::consts::PI / h;
            }
            let s_h = discrete_symbol(k, a, h, &xi, &plan_h)?;
            let xi_scaled: Vec<f64> = xi.iter().map(|v| v * h).collect();
            let s_1 = discrete_symbol(k, a, 1.0, &xi_scaled, &plan_1)?;
            worst = worst.max((s_h.value - s_1.value).norm());
        }
        check(
            "scaling identity",
            worst < 1e-12,
            format!("worst gap {}", io::fmt_f64(worst)),
        );
    }

    // symbol convergence h -> 0 at fixed probe frequencies
    {
        let plan = plan_for(n)?;
        let xi: Vec<f64> = (0..m).map(|j| 0.7 + 0.5 * j as f64).collect();
        let rep = mesh_convergence_report(k, a, &xi, &[1.0, 0.5, 0.25], &plan)?;
        let final_err = rep.rows.last().map(|r| r.error).unwrap_or(f64::NAN);
        check(
            "symbol convergence",
            rep.monotone,
            format!("errors decrease to {}", io::fmt_f64(final_err)),
        );
    }

    // projection identities on deterministic trigonometric polynomials
    {
        let ng = 256usize;
        let mut worst_pair = 0.0f64;
        let mut worst_comp = 0.0f64;
        for s in 0..10u64 {
            let u = PeriodicGrid::from_fn(ng, |t| {
                let mut acc = Complex64::new(0.0, 0.0);
                for kk in -6i64..=6 {
                    let w = ((s as f64 + 1.0) * 0.37 + kk as f64 * 0.71).sin();
                    acc += Complex64::from_polar(w.abs() + 0.1, w - kk as f64 * t);
                }
                acc
            })?;
            let plus = project_plus_coeff(&u);
            let cot = project_plus_cot(&u);
            let minus = project_minus(&u);
            worst_pair = worst_pair.max(plus.max_norm_diff(&cot));
            let sum = plus.zip(&minus, |x, y| x + y);
            worst_comp = worst_comp.max(sum.max_norm_diff(&u));
        }
        check(
            "projection identities",
            worst_pair < 1e-10 && worst_comp < 1e-12,
            format!(
                "cot-vs-truncation {}, complementarity {}",
                io::fmt_f64(worst_pair),
                io::fmt_f64(worst_comp)
            ),
        );
    }

    // transmission condition
    {
        let rep = transmission_check(k, a)?;
        check(
            "transmission condition",
            rep.passed,
            format!("defect {}", io::fmt_f64(rep.defect)),
        );
    }

    // discrete/continuous winding agreement on a slice (needs transmission)
    if transmission_check(k, a)?.passed {
        let plan = plan_for(n)?;
        let xp: Vec<f64> = if m >= 2 { vec![1.0; m - 1] } else { Vec::new() };
        let disc = discrete_winding(k, a, h, &xp, resolution, &plan);
        let cont = continuous_winding(k, a, &xp, 10 * resolution);
        match (disc, cont) {
            (Ok(d), Ok(c)) => check(
                "winding agreement",
                d.winding == c.winding,
                format!("discrete {} vs continuous {}", d.winding, c.winding),
            ),
            (d, c) => check(
                "winding agreement",
                false,
                format!(
                    "discrete: {}; continuous: {}",
                    d.map(|r| r.winding.to_string()).unwrap_or_else(|e| e.to_string()),
                    c.map(|r| r.winding.to_string()).unwrap_or_else(|e| e.to_string())
                ),
            ),
        }
    }

    Ok(failures)
}
