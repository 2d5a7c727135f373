//! Worked examples 1-4.

use std::f64::consts::PI;
use std::io::{self, Write};

use anyhow::{bail, Result};
use gurlab::cumulant::cumulants_single;
use gurlab::format::{fmt_g, CsvWriter};
use gurlab::gur::schrodinger;
use gurlab::random::{rng, separable_two_qubit};
use gurlab::scan::{max_abs_kappa3_table, skewness_nonlocality_threshold, sweep, Axis, GridSpec, SweepOptions};
use gurlab::scenarios::{
    angular_momenta_l1, collective_observables, example1_surfaces, kappa3_s, kappa3_s_numeric, lhvt_k3_bound, psi2, psi3,
    SEPARABLE_BOUND,
};
use gurlab::{Complex64, State};

use crate::args::parse_grid;
use crate::commands::{centroid, print_scan_summary, sink, write_scan_csv, EXIT_OK};
use crate::Output;

pub fn run(n: u8, grid: Option<&str>, seed: u64, samples: usize, tol: f64, output: &Output) -> Result<u8> {
    let grid = grid.map(parse_grid).transpose()?;
    match n {
        1 => example1(grid.unwrap_or((100, Some(100))), tol, output),
        2 => example2(grid.unwrap_or((20, Some(20))), tol, output),
        3 => example3(seed, samples, output),
        4 => example4(grid.map_or(101, |g| g.0), output),
        _ => bail!("no example {n}"),
    }
}

fn summary() -> io::StdoutLock<'static> {
    io::stdout().lock()
}

fn example1((n1, n2): (usize, Option<usize>), tol: f64, output: &Output) -> Result<u8> {
    let grid = GridSpec::two(Axis::new("theta", 0.0, PI, n1), Axis::new("phi", 0.0, 2.0 * PI, n2.unwrap_or(n1)))
        .fix("s", Complex64::new(1.0, 0.0))
        .fix("t", Complex64::new(1.0, 0.0));
    let result = sweep("classical_ur", &grid, SweepOptions { tol, parallel: true })?;
    let mut out = sink(&output.out)?;
    write_scan_csv(&mut out, &result)?;
    out.flush()?;
    drop(out);

    let deviation = result
        .rows
        .iter()
        .map(|r| {
            let (l, rr) = example1_surfaces(r.coords[0], r.coords[1]);
            (l - r.lhs).abs().max((rr - r.rhs).abs())
        })
        .fold(0.0, f64::max);
    print_scan_summary(&result)?;
    let mut o = summary();
    let regions = result.violation_regions();
    for (label, p) in [("(pi/2, pi)", [PI / 2.0, PI]), ("(pi/2, 3pi/2)", [PI / 2.0, 1.5 * PI])] {
        let hit = regions.iter().position(|reg| result.region_contains(reg, &p));
        match hit {
            Some(i) => writeln!(o, "# {label} lies in region {}", i + 1)?,
            None => writeln!(o, "# {label} lies in no violation region")?,
        }
    }
    for (i, reg) in regions.iter().enumerate() {
        let c = centroid(&result, reg);
        writeln!(o, "# region {} centroid / pi = ({:.4}, {:.4})", i + 1, c[0] / PI, c[1] / PI)?;
    }
    writeln!(o, "# max deviation from closed forms {}", fmt_g(deviation))?;
    Ok(EXIT_OK)
}

fn example2((n1, n2): (usize, Option<usize>), tol: f64, output: &Output) -> Result<u8> {
    let top = 0.69;
    let (ns, nt) = (n1, n2.unwrap_or(n1));
    let axis = |name: &str, n: usize| {
        if n == 1 {
            Axis::new(name, top, top, 1)
        } else {
            Axis::new(name, top / n as f64, top, n)
        }
    };
    let grid = GridSpec::two(axis("s", ns), axis("t", nt));
    let result = sweep("exp_ratio_ur@psi2", &grid, SweepOptions { tol, parallel: true })?;
    let mut out = sink(&output.out)?;
    write_scan_csv(&mut out, &result)?;
    out.flush()?;
    drop(out);

    let (lx, ly, _) = angular_momenta_l1();
    let sch = schrodinger(&psi2(), &lx, &ly)?;
    let diag: Vec<f64> = (1..=20)
        .map(|k| {
            let s = top * k as f64 / 20.0;
            gurlab::gur::exp_ratio_ur(&psi2(), &lx, &ly, s, s).map(|r| r.rhs)
        })
        .collect::<gurlab::Result<_>>()?;
    let min_diag = diag.iter().copied().fold(f64::INFINITY, f64::min);
    print_scan_summary(&result)?;
    let mut o = summary();
    writeln!(o, "# schrodinger rhs for (Lx, Ly) on psi2 = {} (lhs {})", fmt_g(sch.rhs), fmt_g(sch.lhs))?;
    writeln!(o, "# exp_ratio rhs on s = t in (0, {top}], 20 points: min {} ({})", fmt_g(min_diag), if min_diag > 1.0 { "> 1" } else { "NOT > 1" })?;
    Ok(EXIT_OK)
}

fn k2_triple(state: &State) -> Result<[f64; 3]> {
    let (a, b, c) = collective_observables();
    Ok([cumulants_single(state, &a)?.k2, cumulants_single(state, &b)?.k2, cumulants_single(state, &c)?.k2])
}

fn example3(seed: u64, samples: usize, output: &Output) -> Result<u8> {
    let mut out = sink(&output.out)?;
    let mut w = CsvWriter::new(&mut out, &["state", "k2_A", "k2_B", "k2_C", "sum"])?;
    let singlet = k2_triple(&psi3())?;
    let singlet_sum: f64 = singlet.iter().sum();
    w.row_labeled("singlet", &[singlet[0], singlet[1], singlet[2], singlet_sum])?;
    let mut min_sep = f64::INFINITY;
    let mut below = 0;
    for k in 0..samples {
        let st = separable_two_qubit(&mut rng(seed, k as u64));
        let v = k2_triple(&st)?;
        let sum: f64 = v.iter().sum();
        min_sep = min_sep.min(sum);
        if sum < SEPARABLE_BOUND - 1e-9 {
            below += 1;
        }
        w.row_labeled(&format!("separable_{k}"), &[v[0], v[1], v[2], sum])?;
    }
    w.into_inner().flush()?;
    drop(out);
    let mut o = summary();
    writeln!(o, "# singlet sum {singlet_sum:.6} (separable bound {})", fmt_g(SEPARABLE_BOUND))?;
    if samples > 0 {
        writeln!(o, "# separable minimum {min_sep:.6} over {samples} states (seed {seed}), {below} below the bound")?;
    }
    Ok(EXIT_OK)
}

fn example4(points: usize, output: &Output) -> Result<u8> {
    let table = max_abs_kappa3_table(0.0, 1.0, points, 1e-10)?;
    let mut out = sink(&output.out)?;
    let mut w = CsvWriter::new(&mut out, &["eta", "theta_star", "max_abs_k3", "lhvt_bound", "margin"])?;
    for &(eta, theta, k3) in &table {
        w.row(&[eta, theta, k3, lhvt_k3_bound(), lhvt_k3_bound() - k3])?;
    }
    w.into_inner().flush()?;
    drop(out);

    let mut dev: f64 = 0.0;
    for i in 0..50 {
        let theta = 2.0 * PI * i as f64 / 49.0;
        for j in 0..20 {
            let eta = -1.0 / 3.0 + (4.0 / 3.0) * j as f64 / 19.0;
            dev = dev.max((kappa3_s(eta, theta)? - kappa3_s_numeric(eta, theta)?).abs());
        }
    }
    let (theta1, max1) = gurlab::scenarios::max_abs_kappa3(1.0, 1e-12)?;
    let eta_star = skewness_nonlocality_threshold(0.3, 0.6, 1e-9)?;
    let mut o = summary();
    writeln!(o, "# closed form vs numeric k3(S), 50x20 (theta, eta) grid: max diff {}", fmt_g(dev))?;
    writeln!(o, "# eta = 1: max |k3(S)| {max1:.7} at theta {theta1:.6}; 64 sqrt(6)/9 = {:.7}", 64.0 * 6f64.sqrt() / 9.0)?;
    writeln!(o, "# eta_star {eta_star:.6} (2^(-1/3) - 1/3 = {:.6}) max_kappa3 {max1:.6}", 2f64.powf(-1.0 / 3.0) - 1.0 / 3.0)?;
    Ok(EXIT_OK)
}
