// SPDX-License-Identifier: MIT OR Apache-2.0

use std::fmt::Write as _;
use std::path::{Path, PathBuf};

use serde::Serialize;

use linthresh::io::svg::{Chart, Series};
use linthresh::io::{self, Dataset, DatasetSpec};
use linthresh::simulation::{grid_runner, ScenarioGrid, ScenarioTable};
use linthresh::{
    airquality, c_sweep, estimate, loss_profile, Error, LossProfile, PenaltyConfig, Result, Sweep, ThresholdEstimate,
};

use crate::grid::{parse_grid, DEFAULT_GRID};
use crate::{Command, DataArgs, OutArgs, RunArgs};

const BUNDLED_SCENARIOS: &str = include_str!("../../../data/scenarios.toml");

pub fn run(command: Command) -> Result<()> {
    match command {
        Command::Estimate {
            data,
            penalty,
            psi,
            out,
        } => {
            let (dataset, source) = load(&data)?;
            let config = penalty.config(data.airquality);
            let est = estimate(&dataset.sample, &config, Some(psi))?;
            print!("{}", render_estimate(&source, &dataset, &config, &est));
            write_estimate_json(&out.out_dir.join("estimate.json"), &source, &dataset, &config, &est)
        }
        Command::Profile { data, penalty, out } => {
            let (dataset, _) = load(&data)?;
            let config = penalty.config(data.airquality);
            let profile = loss_profile(&dataset.sample, &config)?;
            write_profile_files(&profile, &out)?;
            println!(
                "{} candidates up to gamma_n = {}; wrote {}",
                profile.len(),
                profile.gamma_n,
                out.out_dir.join("profile.csv").display()
            );
            Ok(())
        }
        Command::Sweep {
            data,
            penalty,
            grid,
            c_values,
            out,
        } => {
            let (dataset, _) = load(&data)?;
            let config = penalty.config(data.airquality);
            let grid = match c_values {
                Some(values) => values,
                None => parse_grid(grid.as_deref().unwrap_or(DEFAULT_GRID))?,
            };
            let sweep = c_sweep(&dataset.sample, &config, &grid)?;
            write_sweep_files(&sweep, &out)?;
            print!("{}", render_plateaus(&sweep));
            Ok(())
        }
        Command::Simulate { config, run, out } => {
            let grid = ScenarioGrid::load(&config)?;
            let table = run_grid(grid, &run)?;
            write_simulation_files(&table, &out)?;
            print!("{}", render_table(&table));
            Ok(())
        }
        Command::Report { run, c, out } => report(&run, c, &out),
    }
}

fn load(data: &DataArgs) -> Result<(Dataset, String)> {
    if data.airquality {
        return Ok((airquality::dataset(), "bundled airquality (Ozone ~ Wind)".to_string()));
    }
    let (Some(path), Some(x), Some(y)) = (&data.input, &data.x, &data.y) else {
        return Err(Error::InvalidConfig("--input, --x and --y are required".into()));
    };
    let spec = DatasetSpec {
        na_markers: data.na.clone(),
        ..DatasetSpec::new(path, x, y)
    };
    let dataset = io::read_csv(&spec)?;
    Ok((dataset, format!("{} ({y} ~ {x})", path.display())))
}

fn run_grid(grid: ScenarioGrid, run: &RunArgs) -> Result<ScenarioTable> {
    let mut grid = if run.full_scale {
        grid.with_nrep(linthresh::simulation::config::FULL_SCALE_NREP)
    } else {
        grid
    };
    if let Some(seed) = run.seed {
        for s in &mut grid.scenarios {
            s.base_seed = seed;
        }
    }
    let mut builder = rayon::ThreadPoolBuilder::new();
    if let Some(t) = run.threads {
        if t == 0 {
            return Err(Error::InvalidConfig("--threads must be at least 1".into()));
        }
        builder = builder.num_threads(t);
    }
    let pool = builder
        .build()
        .map_err(|e| Error::InvalidConfig(format!("cannot start thread pool: {e}")))?;
    pool.install(|| grid_runner(&grid.scenarios))
}

fn row(out: &mut String, name: &str, value: impl std::fmt::Display) {
    let _ = writeln!(out, "  {name:<14}{value:>16}");
}

fn render_estimate(source: &str, data: &Dataset, config: &PenaltyConfig, est: &ThresholdEstimate) -> String {
    let mut s = String::new();
    let _ = writeln!(s, "data: {source}");
    let _ = writeln!(s, "  {:<14}{:>16}", "n", est.n);
    row(&mut s, "rows dropped", data.rows_dropped);
    let _ = writeln!(
        s,
        "penalty: c = {}, xi = {}, eta1 = {}, f = {}",
        config.c,
        config.xi,
        config.eta1,
        config.penalty_fn.name()
    );
    row(&mut s, "gamma_n", format!("{:.6}", est.gamma_n));
    row(&mut s, "lambda_n", format!("{:.6e}", est.lambda_n));
    let _ = writeln!(s, "threshold");
    row(&mut s, "u_hat", format!("{:.6}", est.u_hat));
    row(&mut s, "loss", format!("{:.6}", est.loss));
    row(&mut s, "penalized", format!("{:.6}", est.penalized));
    let f = &est.fit_at_u_hat;
    let _ = writeln!(s, "fit on x >= u_hat ({} points)", f.n_used);
    row(&mut s, "alpha", format!("{:.6}", f.alpha));
    row(&mut s, "beta", format!("{:.6}", f.beta));
    if let Some(r) = &est.refit {
        let _ = writeln!(
            s,
            "refit on x >= u_hat + psi = {:.6} ({} points, psi = {})",
            r.cutoff, r.fit.n_used, r.psi
        );
        let _ = writeln!(
            s,
            "  {:<8}{:>14}{:>14}{:>12}{:>12}",
            "", "estimate", "std.error", "z", "p"
        );
        for (name, est, se, z, p) in [
            ("alpha", r.fit.alpha, r.se_alpha, r.z_alpha, r.p_alpha),
            ("beta", r.fit.beta, r.se_beta, r.z_beta, r.p_beta),
        ] {
            let _ = writeln!(s, "  {name:<8}{est:>14.6}{se:>14.6}{z:>12.4}{p:>12.4}");
        }
        row(&mut s, "sigma2_hat", format!("{:.6}", r.sigma2_hat));
    }
    s
}

#[derive(Serialize)]
struct EstimateReport<'a> {
    source: &'a str,
    rows_read: usize,
    rows_dropped: usize,
    config: &'a PenaltyConfig,
    estimate: &'a ThresholdEstimate,
}

fn write_text(path: &Path, text: &str) -> Result<()> {
    if let Some(dir) = path.parent().filter(|d| !d.as_os_str().is_empty()) {
        std::fs::create_dir_all(dir).map_err(|e| Error::Io {
            path: dir.to_path_buf(),
            source: e,
        })?;
    }
    std::fs::write(path, text).map_err(|e| Error::Io {
        path: path.to_path_buf(),
        source: e,
    })
}

fn write_estimate_json(
    path: &Path,
    source: &str,
    data: &Dataset,
    config: &PenaltyConfig,
    est: &ThresholdEstimate,
) -> Result<()> {
    let report = EstimateReport {
        source,
        rows_read: data.rows_read,
        rows_dropped: data.rows_dropped,
        config,
        estimate: est,
    };
    let json = serde_json::to_string_pretty(&report).expect("estimate serializes");
    write_text(path, &(json + "\n"))
}

fn write_profile_files(profile: &LossProfile, out: &OutArgs) -> Result<()> {
    io::write_profile(profile, &out.out_dir.join("profile.csv"))?;
    if out.no_svg {
        return Ok(());
    }
    let est = linthresh::estimate_threshold(profile)?;
    Chart {
        title: format!("Loss profile (n = {})", profile.n),
        x_label: "candidate threshold u".into(),
        y_label: "loss".into(),
        series: vec![
            Series::line(
                "empirical loss",
                profile.entries.iter().map(|e| (e.u, e.loss)).collect(),
            ),
            Series::line(
                "penalized",
                profile.entries.iter().map(|e| (e.u, e.penalized)).collect(),
            ),
        ],
        vlines: vec![(est.u_hat, format!("u_hat = {}", est.u_hat))],
        log_x: false,
    }
    .write(&out.out_dir.join("profile.svg"))
}

fn write_sweep_files(sweep: &Sweep, out: &OutArgs) -> Result<()> {
    io::write_sweep(sweep, &out.out_dir.join("sweep.csv"))?;
    io::write_plateaus(&sweep.plateaus(), &out.out_dir.join("plateaus.csv"))?;
    if out.no_svg {
        return Ok(());
    }
    Chart {
        title: "Estimated threshold against penalty constant".into(),
        x_label: "c".into(),
        y_label: "u_hat".into(),
        series: vec![Series::step(
            "u_hat(c)",
            sweep.points.iter().map(|p| (p.c, p.u_hat)).collect(),
        )],
        vlines: Vec::new(),
        log_x: false,
    }
    .write(&out.out_dir.join("sweep.svg"))
}

fn render_plateaus(sweep: &Sweep) -> String {
    let mut s = String::new();
    let _ = writeln!(s, "{:>14}{:>14}{:>12}{:>10}", "c from", "c to", "u_hat", "points");
    for p in sweep.plateaus() {
        let _ = writeln!(
            s,
            "{:>14}{:>14}{:>12}{:>10}",
            p.c_start, p.c_end, p.u_hat, p.grid_points
        );
    }
    s
}

fn write_simulation_files(table: &ScenarioTable, out: &OutArgs) -> Result<()> {
    io::write_scenario_table(table, &out.out_dir.join("scenarios.csv"))?;
    io::write_replicates(table, &out.out_dir.join("replicates.csv"))?;
    if out.no_svg {
        return Ok(());
    }
    if let Some(chart) = emae_chart(table, Axis::N) {
        chart.write(&out.out_dir.join("emae_n.svg"))?;
    }
    if let Some(chart) = emae_chart(table, Axis::C) {
        chart.write(&out.out_dir.join("emae_c.svg"))?;
    }
    Ok(())
}

#[derive(Clone, Copy, PartialEq)]
enum Axis {
    N,
    C,
}

/// EMAE curves over `n` (or `c`), one per combination of the other keys.
fn emae_chart(table: &ScenarioTable, axis: Axis) -> Option<Chart> {
    let mut groups: Vec<(String, Vec<(f64, f64)>)> = Vec::new();
    for r in &table.rows {
        let s = &r.scenario;
        let (label, x) = match axis {
            Axis::N => (
                format!("u0={} d={} s={} c={}", s.u0, s.delta, s.sigma, s.penalty.c),
                s.n as f64,
            ),
            Axis::C => (
                format!("u0={} d={} s={} n={}", s.u0, s.delta, s.sigma, s.n),
                s.penalty.c,
            ),
        };
        match groups.iter_mut().find(|g| g.0 == label) {
            Some(g) => g.1.push((x, r.emae)),
            None => groups.push((label, vec![(x, r.emae)])),
        }
    }
    let series: Vec<Series> = groups
        .into_iter()
        .filter(|g| g.1.len() >= 2)
        .map(|(label, mut pts)| {
            pts.sort_by(|a, b| a.0.total_cmp(&b.0));
            Series::line(label, pts)
        })
        .take(8)
        .collect();
    if series.is_empty() {
        return None;
    }
    Some(Chart {
        title: match axis {
            Axis::N => "EMAE against sample size".into(),
            Axis::C => "EMAE against penalty constant".into(),
        },
        x_label: match axis {
            Axis::N => "n".into(),
            Axis::C => "c (log scale, c = 0 omitted)".into(),
        },
        y_label: "EMAE".into(),
        series,
        vlines: Vec::new(),
        log_x: axis == Axis::C,
    })
}

fn render_table(table: &ScenarioTable) -> String {
    let mut s = String::new();
    let _ = writeln!(
        s,
        "{:>10}{:>6}{:>7}{:>8}{:>7}{:>10}{:>6}{:>10}{:>10}{:>6}",
        "model", "u0", "delta", "sigma", "n", "c", "nrep", "EMAE", "median", "fail"
    );
    for r in &table.rows {
        let sc = &r.scenario;
        let _ = writeln!(
            s,
            "{:>10}{:>6}{:>7}{:>8}{:>7}{:>10}{:>6}{:>10.5}{:>10.5}{:>6}",
            sc.model.name(),
            sc.u0,
            sc.delta,
            sc.sigma,
            sc.n,
            format!("{:e}", sc.penalty.c),
            sc.nrep,
            r.emae,
            r.u_hat.map_or(f64::NAN, |q| q.median),
            r.failure_count()
        );
    }
    s
}

fn report(run: &RunArgs, c: f64, out: &OutArgs) -> Result<()> {
    let aq_dir = out.out_dir.join("airquality");
    let sim_dir = out.out_dir.join("simulation");
    let aq_out = OutArgs {
        out_dir: aq_dir.clone(),
        no_svg: out.no_svg,
    };
    let sim_out = OutArgs {
        out_dir: sim_dir.clone(),
        no_svg: out.no_svg,
    };

    let data = airquality::dataset();
    let source = "bundled airquality (Ozone ~ Wind)";
    let config = airquality::config(c);
    let est = estimate(&data.sample, &config, Some(airquality::PSI))?;
    let est_text = render_estimate(source, &data, &config, &est);
    write_text(&aq_dir.join("estimate.txt"), &est_text)?;
    write_estimate_json(&aq_dir.join("estimate.json"), source, &data, &config, &est)?;
    write_profile_files(&loss_profile(&data.sample, &config)?, &aq_out)?;
    let sweep = c_sweep(&data.sample, &config, &airquality::c_grid())?;
    write_sweep_files(&sweep, &aq_out)?;

    let grid = ScenarioGrid::parse(BUNDLED_SCENARIOS).map_err(|message| Error::Config {
        path: PathBuf::from("data/scenarios.toml"),
        message,
    })?;
    let table = run_grid(grid, run)?;
    write_simulation_files(&table, &sim_out)?;

    let mut text = String::new();
    let _ = writeln!(text, "== air quality ==");
    text.push_str(&est_text);
    let _ = writeln!(text, "\nthreshold as a function of c:");
    text.push_str(&render_plateaus(&sweep));
    let _ = writeln!(text, "\n== simulation ==");
    text.push_str(&render_table(&table));
    write_text(&out.out_dir.join("report.txt"), &text)?;
    print!("{text}");
    Ok(())
}
