//! Plain-text formats: kernel configurations, problem files, CSV tables
//! and structured reports.
//!
//! All floating-point output goes through [`fmt_f64`] (17 significant
//! digits), so identical inputs produce byte-identical files.

use num_complex::Complex64;

use crate::error::{CzError, Result};
use crate::kernel::{KernelFamily, KernelSpec};
use crate::periodic::PeriodicGrid;
use crate::riemann::Factorization;
use crate::solvability::MainTheoremReport;
use crate::solver::{HalfSpaceProblem, SolveReport};
use crate::symbol::SymbolGrid;

/// Fixed-width scientific formatting: 17 significant digits.
pub fn fmt_f64(v: f64) -> String {
    format!("{v:.16e}")
}

pub fn fmt_complex(v: Complex64) -> String {
    if v.im >= 0.0 || v.im.is_nan() {
        format!("{}+{}i", fmt_f64(v.re), fmt_f64(v.im))
    } else {
        format!("{}{}i", fmt_f64(v.re), fmt_f64(v.im))
    }
}

fn parse_f64(s: &str) -> Result<f64> {
    s.trim()
        .parse::<f64>()
        .map_err(|_| CzError::Parse(format!("bad number {s:?}")))
}

/// Complex literals: `2`, `-1.5`, `i`, `-2i`, `1+2i`, `3.5e-2-1i`.
pub fn parse_complex(s: &str) -> Result<Complex64> {
    let t: String = s.chars().filter(|c| !c.is_whitespace()).collect();
    if t.is_empty() {
        return Err(CzError::Parse("empty complex literal".into()));
    }
    if !t.ends_with('i') && !t.ends_with('j') {
        return Ok(Complex64::new(parse_f64(&t)?, 0.0));
    }
    let body = &t[..t.len() - 1];
    // split at the last +/- that is not a leading sign or an exponent sign
    let bytes = body.as_bytes();
    let mut split = None;
    for p in (1..bytes.len()).rev() {
        if (bytes[p] == b'+' || bytes[p] == b'-')
            && bytes[p - 1] != b'e'
            && bytes[p - 1] != b'E'
        {
            split = Some(p);
            break;
        }
    }
    match split {
        Some(p) => {
            let re = parse_f64(&body[..p])?;
            let im_str = &body[p..];
            let im = match im_str {
                "+" => 1.0,
                "-" => -1.0,
                _ => parse_f64(im_str)?,
            };
            Ok(Complex64::new(re, im))
        }
        None => {
            let im = match body {
                "" | "+" => 1.0,
                "-" => -1.0,
                _ => parse_f64(body)?,
            };
            Ok(Complex64::new(0.0, im))
        }
    }
}

fn kv_lines(text: &str) -> impl Iterator<Item = (usize, &str, &str)> {
    text.lines().enumerate().filter_map(|(ln, raw)| {
        let line = raw.split('#').next().unwrap_or("").trim();
        if line.is_empty() {
            return None;
        }
        let (k, v) = line.split_once('=')?;
        Some((ln + 1, k.trim(), v.trim()))
    })
}

/// Kernel configuration: `key = value` lines, `#` comments.
///
/// ```text
/// dimension = 2
/// family = riesz          # riesz | zero | custom
/// component = 1           # riesz only
/// normalization = 1.0     # optional, default 1
/// density = -1; 1         # custom only: equispaced samples of Omega
/// ```
pub fn parse_kernel_config(text: &str) -> Result<KernelSpec> {
    let mut dim = None;
    let mut family = None;
    let mut component = 1usize;
    let mut normalization = 1.0f64;
    let mut density: Vec<Complex64> = Vec::new();
    for (ln, k, v) in kv_lines(text) {
        match k {
            "dimension" | "m" => {
                dim = Some(v.parse::<usize>().map_err(|_| {
                    CzError::Parse(format!("line {ln}: bad dimension {v:?}"))
                })?)
            }
            "family" => family = Some(v.to_ascii_lowercase()),
            "component" | "j" => {
                component = v.parse::<usize>().map_err(|_| {
                    CzError::Parse(format!("line {ln}: bad component {v:?}"))
                })?
            }
            "normalization" => normalization = parse_f64(v)?,
            "density" => {
                density = v
                    .split(';')
                    .map(parse_complex)
                    .collect::<Result<Vec<_>>>()?
            }
            _ => {
                return Err(CzError::Parse(format!(
                    "line {ln}: unknown kernel key {k:?}"
                )))
            }
        }
    }
    let dim = dim.ok_or_else(|| CzError::Parse("kernel config misses dimension".into()))?;
    let family = family.ok_or_else(|| CzError::Parse("kernel config misses family".into()))?;
    match family.as_str() {
        "riesz" => Ok(KernelSpec::riesz(dim, component)?.with_normalization(normalization)),
        "zero" => Ok(KernelSpec::zero(dim)),
        "custom" => KernelSpec::custom(dim, density, normalization),
        other => Err(CzError::Parse(format!("unknown kernel family {other:?}"))),
    }
}

/// Inverse of [`parse_kernel_config`]; round-trips every spec.
pub fn kernel_config_string(kernel: &KernelSpec) -> String {
    let mut out = String::new();
    out.push_str(&format!("dimension = {}\n", kernel.dim()));
    match kernel.family() {
        KernelFamily::Riesz { j } => {
            if kernel.normalization() == 0.0 {
                out.push_str("family = zero\n");
            } else {
                out.push_str("family = riesz\n");
                out.push_str(&format!("component = {j}\n"));
                out.push_str(&format!("normalization = {}\n", fmt_f64(kernel.normalization())));
            }
        }
        KernelFamily::Custom { omega } => {
            out.push_str("family = custom\n");
            out.push_str(&format!("normalization = {}\n", fmt_f64(kernel.normalization())));
            let samples: Vec<String> = omega.iter().map(|&v| fmt_complex(v)).collect();
            out.push_str(&format!("density = {}\n", samples.join("; ")));
        }
    }
    out
}

/// CSV export of a sampled symbol grid:
/// `xi_1,...,xi_m,re_sigma,im_sigma,N,converged`.
pub fn symbol_grid_csv(grid: &SymbolGrid) -> String {
    let mut out = String::new();
    for k in 1..=grid.m {
        out.push_str(&format!("xi_{k},"));
    }
    out.push_str("re_sigma,im_sigma,N,converged\n");
    for (i, v) in grid.values.iter().enumerate() {
        for c in grid.xi_at(i) {
            out.push_str(&fmt_f64(c));
            out.push(',');
        }
        out.push_str(&format!(
            "{},{},{},{}\n",
            fmt_f64(v.re),
            fmt_f64(v.im),
            fmt_f64(grid.n_used),
            u8::from(grid.converged[i]),
        ));
    }
    out
}

/// CSV export of a periodic grid function: `t,re,im`.
pub fn periodic_grid_csv(grid: &PeriodicGrid) -> String {
    let mut out = String::from("t,re,im\n");
    for (j, v) in grid.values().iter().enumerate() {
        out.push_str(&format!(
            "{},{},{}\n",
            fmt_f64(grid.t_at(j)),
            fmt_f64(v.re),
            fmt_f64(v.im)
        ));
    }
    out
}

/// Read back a `t,re,im` CSV; the `t` column is checked against the node
/// layout of the reconstructed grid.
pub fn periodic_grid_from_csv(text: &str) -> Result<PeriodicGrid> {
    let mut values = Vec::new();
    let mut ts = Vec::new();
    for (ln, line) in text.lines().enumerate() {
        let line = line.trim();
        if line.is_empty() || (ln == 0 && line.starts_with('t')) {
            continue;
        }
        let cols: Vec<&str> = line.split(',').collect();
        if cols.len() != 3 {
            return Err(CzError::Parse(format!(
                "line {}: expected t,re,im, got {line:?}",
                ln + 1
            )));
        }
        ts.push(parse_f64(cols[0])?);
        values.push(Complex64::new(parse_f64(cols[1])?, parse_f64(cols[2])?));
    }
    let grid = PeriodicGrid::new(values)?;
    for (j, &t) in ts.iter().enumerate() {
        if (t - grid.t_at(j)).abs() > 1e-9 {
            return Err(CzError::Parse(format!(
                "row {j}: node t = {t} does not sit on the uniform grid"
            )));
        }
    }
    Ok(grid)
}

/// Structured text report of a canonical factorization.
pub fn factorization_report(f: &Factorization) -> String {
    format!(
        "{{\n  \"kappa\": {},\n  \"grid\": {},\n  \"analyticity_defect\": {},\n  \"product_max\": {}\n}}\n",
        f.kappa,
        f.x_plus.len(),
        fmt_f64(f.analyticity_defect()),
        fmt_f64(f.x_plus.zip(&f.x_minus, |p, m| p * m).max_norm()),
    )
}

fn xi_prime_field(xi: &[f64]) -> String {
    if xi.is_empty() {
        "-".into()
    } else {
        xi.iter().map(|&v| fmt_f64(v)).collect::<Vec<_>>().join(";")
    }
}

fn winding_field(w: &std::result::Result<i64, String>) -> String {
    match w {
        Ok(v) => v.to_string(),
        Err(_) => "error".into(),
    }
}

/// CSV export of a Main Theorem agreement table:
/// `xi_prime,h,winding_h,winding_cont,equal`.
pub fn agreement_table_csv(rep: &MainTheoremReport) -> String {
    let mut out = String::from("xi_prime,h,winding_h,winding_cont,equal\n");
    for cell in &rep.cells {
        out.push_str(&format!(
            "{},{},{},{},{}\n",
            xi_prime_field(&cell.xi_prime),
            fmt_f64(cell.h),
            winding_field(&cell.winding_discrete),
            winding_field(&cell.winding_continuous),
            u8::from(cell.equal),
        ));
    }
    out
}

/// Human-readable companion of [`agreement_table_csv`].
pub fn agreement_table_text(rep: &MainTheoremReport) -> String {
    let mut out = String::new();
    out.push_str(&format!(
        "transmission defect {} ({})\n",
        fmt_f64(rep.transmission.defect),
        if rep.transmission.passed { "passes" } else { "FAILS" },
    ));
    for cell in &rep.cells {
        let detail = |w: &std::result::Result<i64, String>| match w {
            Ok(v) => v.to_string(),
            Err(e) => format!("error: {e}"),
        };
        out.push_str(&format!(
            "xi' = [{}]  h = {:<8}  discrete {}  continuous {}  {}\n",
            xi_prime_field(&cell.xi_prime),
            cell.h,
            detail(&cell.winding_discrete),
            detail(&cell.winding_continuous),
            if cell.equal { "agree" } else { "DISAGREE" },
        ));
    }
    out.push_str(if rep.agrees {
        "all windings agree\n"
    } else {
        "winding disagreement or unresolved cells\n"
    });
    out
}

/// CSV export of a half-space solution grid: one row per node,
/// lattice indices first (lateral signed `n`, then depth `j >= 1`).
pub fn solution_csv(p: &HalfSpaceProblem, solution: &[Complex64]) -> String {
    let dims = p.dims();
    let m = dims.len();
    let mut out = String::new();
    for k in 1..m {
        out.push_str(&format!("n_{k},"));
    }
    out.push_str("depth,re,im\n");
    for (flat, v) in solution.iter().enumerate() {
        let mut rest = flat;
        let mut idx = vec![0usize; m];
        for ax in (0..m).rev() {
            idx[ax] = rest % dims[ax];
            rest /= dims[ax];
        }
        for &r in &idx[..m - 1] {
            let signed = if r < p.lateral_half {
                r as i64
            } else {
                r as i64 - dims[0] as i64
            };
            out.push_str(&format!("{signed},"));
        }
        out.push_str(&format!(
            "{},{},{}\n",
            idx[m - 1] + 1,
            fmt_f64(v.re),
            fmt_f64(v.im)
        ));
    }
    out
}

/// Structured text report of a solve.
pub fn solve_report_text(rep: &SolveReport) -> String {
    let warnings: Vec<String> = rep
        .slice_warnings
        .iter()
        .map(|w| format!("    \"{}\"", w.replace('"', "'")))
        .collect();
    format!(
        "{{\n  \"method\": \"{}\",\n  \"residual_max\": {},\n  \"iterations\": {},\n  \"converged\": {},\n  \"slice_warnings\": [\n{}\n  ]\n}}\n",
        rep.method,
        fmt_f64(rep.residual_max),
        rep.iterations,
        rep.converged,
        warnings.join(",\n"),
    )
}

/// Problem file: kernel keys prefixed with `kernel.`, box geometry, then a
/// `rhs:` marker followed by one `re,im` line per node (row-major, depth
/// fastest).
///
/// ```text
/// dimension = 2
/// h = 0.5
/// a = 2+0i
/// lateral_half = 4
/// depth = 8
/// kernel.family = riesz
/// kernel.component = 1
/// rhs:
/// 1.0,0.0
/// ...
/// ```
pub fn parse_problem(text: &str) -> Result<HalfSpaceProblem> {
    let (head, tail) = match text.split_once("rhs:") {
        Some(pair) => pair,
        None => return Err(CzError::Parse("problem file misses the rhs: section".into())),
    };
    let mut h = None;
    let mut a = None;
    let mut lateral_half = 0usize;
    let mut depth = None;
    let mut kernel_text = String::new();
    let mut dim_line = None;
    for (ln, k, v) in kv_lines(head) {
        match k {
            "dimension" | "m" => dim_line = Some(v.to_string()),
            "h" => h = Some(parse_f64(v)?),
            "a" => a = Some(parse_complex(v)?),
            "lateral_half" | "L" => {
                lateral_half = v.parse().map_err(|_| {
                    CzError::Parse(format!("line {ln}: bad lateral_half {v:?}"))
                })?
            }
            "depth" | "D" => {
                depth = Some(v.parse::<usize>().map_err(|_| {
                    CzError::Parse(format!("line {ln}: bad depth {v:?}"))
                })?)
            }
            _ => match k.strip_prefix("kernel.") {
                Some(kk) => kernel_text.push_str(&format!("{kk} = {v}\n")),
                None => {
                    return Err(CzError::Parse(format!(
                        "line {ln}: unknown problem key {k:?}"
                    )))
                }
            },
        }
    }
    if let Some(d) = dim_line {
        kernel_text.push_str(&format!("dimension = {d}\n"));
    }
    let kernel = parse_kernel_config(&kernel_text)?;
    let h = h.ok_or_else(|| CzError::Parse("problem file misses h".into()))?;
    let a = a.ok_or_else(|| CzError::Parse("problem file misses a".into()))?;
    let depth = depth.ok_or_else(|| CzError::Parse("problem file misses depth".into()))?;
    let mut rhs = Vec::new();
    for (ln, line) in tail.lines().enumerate() {
        let line = line.split('#').next().unwrap_or("").trim();
        if line.is_empty() {
            continue;
        }
        let (re, im) = line.split_once(',').ok_or_else(|| {
            CzError::Parse(format!("rhs line {}: expected re,im", ln + 1))
        })?;
        rhs.push(Complex64::new(parse_f64(re)?, parse_f64(im)?));
    }
    HalfSpaceProblem::new(kernel, a, h, lateral_half, depth, rhs)
}

/// Inverse of [`parse_problem`].
pub fn problem_string(p: &HalfSpaceProblem) -> String {
    let mut out = String::new();
    out.push_str(&format!("dimension = {}\n", p.kernel.dim()));
    out.push_str(&format!("h = {}\n", fmt_f64(p.h)));
    out.push_str(&format!("a = {}\n", fmt_complex(p.a)));
    out.push_str(&format!("lateral_half = {}\n", p.lateral_half));
    out.push_str(&format!("depth = {}\n", p.depth));
    for line in kernel_config_string(&p.kernel).lines() {
        if line.starts_with("dimension") {
            continue;
        }
        out.push_str(&format!("kernel.{line}\n"));
    }
    out.push_str("rhs:\n");
    for v in &p.rhs {
        out.push_str(&format!("{},{}\n", fmt_f64(v.re), fmt_f64(v.im)));
    }
    out
}
