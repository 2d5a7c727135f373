use std::fs::File;
use std::io::{self, BufWriter, Write};
use std::path::{Path, PathBuf};

use anyhow::{bail, Context, Result};
use gurlab::format::{fmt_g, CsvWriter};
use gurlab::gur::evaluate;
use gurlab::problem::{Problem, ProblemFile};
use gurlab::scan::{sweep as run_sweep, sweep_instance, targets, GridSpec, ScanResult, SweepOptions};
use gurlab::selftest::{self, Fault};
use gurlab::{Complex64, GurReport, Inequality, Tolerances};

use crate::args::{parse_axis, parse_binding, parse_complex, parse_grid};
use crate::Output;

pub const EXIT_OK: u8 = 0;
pub const EXIT_VIOLATED: u8 = 2;
pub const EXIT_SELFTEST: u8 = 3;

/// Data destination: `--out` file or stdout.
pub fn sink(out: &Option<PathBuf>) -> Result<Box<dyn Write>> {
    Ok(match out {
        Some(p) => Box::new(BufWriter::new(File::create(p).with_context(|| format!("cannot create {}", p.display()))?)),
        None => Box::new(BufWriter::new(io::stdout().lock())),
    })
}

pub fn load_problem(path: &Path, tol: &Tolerances) -> Result<Problem> {
    let text = std::fs::read_to_string(path).with_context(|| format!("cannot read {}", path.display()))?;
    let file = ProblemFile::parse(&text).with_context(|| format!("{}", path.display()))?;
    file.build_with(tol).with_context(|| format!("{}", path.display()))
}

fn load_tolerances(path: Option<&Path>) -> Result<Tolerances> {
    match path {
        None => Ok(Tolerances::default()),
        Some(p) => {
            let text = std::fs::read_to_string(p).with_context(|| format!("cannot read {}", p.display()))?;
            serde_json::from_str(&text).with_context(|| format!("{}", p.display()))
        }
    }
}

pub struct CheckArgs {
    pub problem: PathBuf,
    pub inequality: String,
    pub s: Option<String>,
    pub t: Option<String>,
    pub x: String,
    pub y: String,
    pub tol: Option<f64>,
    pub tolerances: Option<PathBuf>,
}

fn param(flag: &Option<String>, problem: &Problem, name: &str) -> Result<Complex64> {
    match flag {
        Some(text) => parse_complex(text).with_context(|| format!("--{name}")),
        None => Ok(problem.param(name).unwrap_or(Complex64::new(1.0, 0.0))),
    }
}

pub fn check(a: &CheckArgs, output: &Output) -> Result<u8> {
    let mut tolerances = load_tolerances(a.tolerances.as_deref())?;
    if let Some(t) = a.tol {
        if !(t >= 0.0 && t.is_finite()) {
            bail!("--tol must be a nonnegative number");
        }
        tolerances.report = t;
    }
    let which: Inequality = a.inequality.parse()?;
    let problem = load_problem(&a.problem, &tolerances)?;
    let x = problem.observable(&a.x)?;
    let y = problem.observable(&a.y)?;
    let s = param(&a.s, &problem, "s")?;
    let t = param(&a.t, &problem, "t")?;
    let report = evaluate(which, &problem.state, x, y, s, t)?.with_tol(tolerances.report);
    for w in &report.warnings {
        eprintln!("warning: {w}");
    }
    let mut out = sink(&output.out)?;
    write_report(&mut out, &report, output)?;
    out.flush()?;
    Ok(if report.satisfied { EXIT_OK } else { EXIT_VIOLATED })
}

fn write_report(out: &mut dyn Write, r: &GurReport, output: &Output) -> Result<()> {
    if output.json {
        writeln!(out, "{}", serde_json::to_string_pretty(r)?)?;
    } else if output.csv {
        writeln!(out, "inequality,s_re,s_im,t_re,t_im,lhs,rhs,margin,satisfied,tol,unproven_regime")?;
        let nums = [r.s.re, r.s.im, r.t.re, r.t.im, r.lhs, r.rhs, r.margin].map(fmt_g).join(",");
        writeln!(out, "{},{nums},{},{},{}", r.name, r.satisfied, fmt_g(r.tol), r.unproven_regime)?;
    } else {
        writeln!(out, "inequality      {}", r.name)?;
        writeln!(out, "s               {}", fmt_c(r.s))?;
        writeln!(out, "t               {}", fmt_c(r.t))?;
        writeln!(out, "lhs             {}", fmt_g(r.lhs))?;
        writeln!(out, "rhs             {}", fmt_g(r.rhs))?;
        writeln!(out, "margin          {}", fmt_g(r.margin))?;
        writeln!(out, "satisfied       {}", r.satisfied)?;
        writeln!(out, "tol             {}", fmt_g(r.tol))?;
        if r.unproven_regime {
            writeln!(out, "unproven_regime true")?;
        }
    }
    Ok(())
}

pub fn selftest(seed: u64, n: usize, fault: Option<Fault>, output: &Output) -> Result<u8> {
    let cfg = selftest::Config { seed, n, fault, parallel: true };
    let report = selftest::run(&cfg);
    let mut stdout = io::stdout().lock();
    if output.json {
        writeln!(stdout, "{}", serde_json::to_string_pretty(&report)?)?;
    } else {
        writeln!(stdout, "seed {seed}")?;
        writeln!(stdout, "instances per suite {n}")?;
        if let Some(f) = fault {
            writeln!(stdout, "injected fault {}", serde_json::to_value(f)?.as_str().unwrap_or("?"))?;
        }
        for s in &report.suites {
            let worst = s.worst.map(fmt_g).unwrap_or_else(|| "-".into());
            let status = if s.ok() { "ok" } else { "FAILED" };
            writeln!(stdout, "{:<22} {:>6}/{:<6} worst {:<20} {status}", s.name, s.passed, s.total, worst)?;
        }
    }
    let failure = report.suites.iter().find_map(|s| s.first_failure.as_ref().map(|c| (s.name, c)));
    if let Some((name, cex)) = failure {
        if !output.json {
            writeln!(stdout, "counterexample: suite {name}, instance {}, {}", cex.index, cex.detail)?;
        }
        match &output.out {
            Some(path) => {
                std::fs::write(path, cex.problem.to_json() + "\n").with_context(|| format!("cannot write {}", path.display()))?;
                writeln!(stdout, "counterexample written to {}", path.display())?;
            }
            None if !output.json => writeln!(stdout, "{}", cex.problem.to_json())?,
            None => {}
        }
    }
    stdout.flush()?;
    Ok(if report.ok() { EXIT_OK } else { EXIT_SELFTEST })
}

pub struct SweepArgs {
    pub target: Option<String>,
    pub var1: Option<String>,
    pub var2: Option<String>,
    pub grid: String,
    pub fixed: Vec<String>,
    pub problem: Option<PathBuf>,
    pub tol: f64,
    pub serial: bool,
    pub list: bool,
}

pub fn sweep(a: &SweepArgs, output: &Output) -> Result<u8> {
    if a.list {
        for t in targets() {
            println!("{t}");
        }
        return Ok(EXIT_OK);
    }
    let Some(target) = &a.target else { bail!("missing target (use --list)") };
    let Some(var1) = &a.var1 else { bail!("missing --var1 name=lo:hi") };
    let (n1, n2) = parse_grid(&a.grid)?;
    let mut grid = match (&a.var2, n2) {
        (Some(v2), Some(n2)) => GridSpec::two(parse_axis(var1, n1)?, parse_axis(v2, n2)?),
        (Some(v2), None) => GridSpec::two(parse_axis(var1, n1)?, parse_axis(v2, n1)?),
        (None, _) => GridSpec::one(parse_axis(var1, n1)?),
    };
    for f in &a.fixed {
        let (name, value) = parse_binding(f)?;
        grid = grid.fix(name, value);
    }
    let opts = SweepOptions { tol: a.tol, parallel: !a.serial };
    let result = match &a.problem {
        Some(path) => {
            let problem = load_problem(path, &Tolerances::default())?;
            let which: Inequality = target.parse()?;
            sweep_instance(which, &problem.state, problem.observable("X")?, problem.observable("Y")?, &grid, opts)?
        }
        None => run_sweep(target, &grid, opts)?,
    };
    let mut out = sink(&output.out)?;
    if output.json {
        let value = serde_json::json!({ "scan": result, "regions": result.violation_regions() });
        writeln!(out, "{}", serde_json::to_string_pretty(&value)?)?;
        out.flush()?;
        return Ok(EXIT_OK);
    }
    write_scan_csv(&mut out, &result)?;
    out.flush()?;
    drop(out);
    print_scan_summary(&result)?;
    Ok(EXIT_OK)
}

pub fn write_scan_csv(out: &mut dyn Write, r: &ScanResult) -> Result<()> {
    let mut header: Vec<&str> = r.axes.iter().map(String::as_str).collect();
    header.extend(["lhs", "rhs", "margin"]);
    let mut w = CsvWriter::new(out, &header)?;
    for row in &r.rows {
        let mut v = row.coords.clone();
        v.extend([row.lhs, row.rhs, row.margin]);
        w.row(&v)?;
    }
    Ok(())
}

fn fmt_c(z: Complex64) -> String {
    let im = fmt_g(z.im);
    let sign = if im.starts_with('-') { "" } else { "+" };
    format!("{}{sign}{im}i", fmt_g(z.re))
}

fn point(coords: &[f64]) -> String {
    format!("({})", coords.iter().map(|c| format!("{c:.6}")).collect::<Vec<_>>().join(", "))
}

/// Mean grid coordinates of a set of rows.
pub fn centroid(r: &ScanResult, cells: &[usize]) -> Vec<f64> {
    let dims = r.axes.len();
    let mut c = vec![0.0; dims];
    for &k in cells {
        for (d, v) in r.rows[k].coords.iter().enumerate() {
            c[d] += v;
        }
    }
    c.iter_mut().for_each(|v| *v /= cells.len() as f64);
    c
}

pub fn print_scan_summary(r: &ScanResult) -> Result<()> {
    let mut o = io::stdout().lock();
    let regions = r.violation_regions();
    writeln!(o, "# target {}: {} points, {} violation cells (margin < -{}), {} regions", r.target, r.rows.len(), r.violation_cells.len(), fmt_g(r.tol), regions.len())?;
    for (i, reg) in regions.iter().enumerate() {
        let worst = reg.iter().map(|&k| r.rows[k].margin).fold(f64::INFINITY, f64::min);
        writeln!(o, "# region {}: {} cells, centroid {}, min margin {}", i + 1, reg.len(), point(&centroid(r, reg)), fmt_g(worst))?;
    }
    if let Some(e) = &r.extremum {
        writeln!(o, "# min margin {} at {}", fmt_g(e.value), point(&e.coords))?;
    }
    Ok(())
}
