// SPDX-License-Identifier: MIT OR Apache-2.0

//! CSV output for profiles, sweeps and scenario tables.
//!
//! All floating-point fields are written with 17 significant digits, so
//! reading a file back reproduces every value bit for bit. Missing values
//! are written as empty fields. Profile files start with `# key=value`
//! comment lines carrying the profile-level fields.
//!
//! | file | columns |
//! |---|---|
//! | profile | `u,n_suffix,alpha,beta,loss,penalty,penalized,rss,mean_x,mean_y,ss_x` |
//! | sweep | `c,u_hat` |
//! | plateaus | `c_start,c_end,u_hat,grid_points` |
//! | scenario table | see [`SCENARIO_HEADER`] |
//! | replicates | `row,rep,u_hat,alpha,beta` |

use std::path::Path;

use serde::Deserialize;

use crate::error::{Error, Result};
use crate::io::number::fmt_g17;
use crate::penalty::PenaltyConfig;
use crate::profile::{LossProfile, Plateau, ProfileEntry, Sweep, SweepPoint};
use crate::simulation::{Quartiles, ScenarioTable};
use crate::suffix::LinearFit;

pub const PROFILE_HEADER: [&str; 11] = [
    "u",
    "n_suffix",
    "alpha",
    "beta",
    "loss",
    "penalty",
    "penalized",
    "rss",
    "mean_x",
    "mean_y",
    "ss_x",
];
pub const SWEEP_HEADER: [&str; 2] = ["c", "u_hat"];
pub const PLATEAU_HEADER: [&str; 4] = ["c_start", "c_end", "u_hat", "grid_points"];
pub const REPLICATE_HEADER: [&str; 5] = ["row", "rep", "u_hat", "alpha", "beta"];
pub const SCENARIO_HEADER: [&str; 29] = [
    "model",
    "u0",
    "delta",
    "sigma",
    "n",
    "c",
    "xi",
    "eta1",
    "penalty",
    "nrep",
    "base_seed",
    "emae",
    "successes",
    "failures",
    "uhat_min",
    "uhat_q1",
    "uhat_median",
    "uhat_q3",
    "uhat_max",
    "alpha_min",
    "alpha_q1",
    "alpha_median",
    "alpha_q3",
    "alpha_max",
    "beta_min",
    "beta_q1",
    "beta_median",
    "beta_q3",
    "beta_max",
];

fn create(path: &Path) -> Result<std::fs::File> {
    if let Some(dir) = path.parent().filter(|d| !d.as_os_str().is_empty()) {
        std::fs::create_dir_all(dir).map_err(|e| Error::io(dir, e))?;
    }
    std::fs::File::create(path).map_err(|e| Error::io(path, e))
}

fn write_table<I>(path: &Path, comments: &[String], header: &[&str], rows: I) -> Result<()>
where
    I: IntoIterator<Item = Vec<String>>,
{
    use std::io::Write;
    let mut file = std::io::BufWriter::new(create(path)?);
    for c in comments {
        writeln!(file, "# {c}").map_err(|e| Error::io(path, e))?;
    }
    let mut w = csv::Writer::from_writer(file);
    w.write_record(header).map_err(|e| Error::csv(path, e))?;
    for row in rows {
        w.write_record(&row).map_err(|e| Error::csv(path, e))?;
    }
    w.flush().map_err(|e| Error::io(path, e))
}

/// `# key=value` lines preceding the header.
type Meta = Vec<(String, String)>;

fn read_table<T: for<'de> Deserialize<'de>>(path: &Path) -> Result<(Meta, Vec<T>)> {
    let text = std::fs::read_to_string(path).map_err(|e| Error::io(path, e))?;
    let mut meta = Vec::new();
    for line in text.lines().take_while(|l| l.starts_with('#')) {
        if let Some((k, v)) = line.trim_start_matches('#').trim().split_once('=') {
            meta.push((k.trim().to_string(), v.trim().to_string()));
        }
    }
    let mut reader = csv::ReaderBuilder::new()
        .comment(Some(b'#'))
        .from_reader(text.as_bytes());
    let rows = reader
        .deserialize()
        .collect::<std::result::Result<Vec<T>, _>>()
        .map_err(|e| Error::csv(path, e))?;
    Ok((meta, rows))
}

fn num(v: f64) -> String {
    fmt_g17(v)
}

fn opt(v: Option<f64>) -> String {
    v.map(fmt_g17).unwrap_or_default()
}

pub fn write_profile(profile: &LossProfile, path: &Path) -> Result<()> {
    let config = serde_json::to_string(&profile.config).expect("config serializes");
    let comments = vec![
        format!("n={}", profile.n),
        format!("gamma_n={}", num(profile.gamma_n)),
        format!("lambda_n={}", num(profile.lambda_n)),
        format!("min_suffix={}", profile.min_suffix),
        format!("degenerate_excluded={}", profile.degenerate_excluded),
        format!("config={config}"),
    ];
    let rows = profile.entries.iter().map(|e| {
        vec![
            num(e.u),
            e.fit.n_used.to_string(),
            num(e.fit.alpha),
            num(e.fit.beta),
            num(e.loss),
            num(e.penalty),
            num(e.penalized),
            num(e.fit.rss),
            num(e.fit.mean_x),
            num(e.fit.mean_y),
            num(e.fit.ss_x),
        ]
    });
    write_table(path, &comments, &PROFILE_HEADER, rows)
}

#[derive(Deserialize)]
struct ProfileRow {
    u: f64,
    n_suffix: usize,
    alpha: f64,
    beta: f64,
    loss: f64,
    penalty: f64,
    penalized: f64,
    rss: f64,
    mean_x: f64,
    mean_y: f64,
    ss_x: f64,
}

pub fn read_profile(path: &Path) -> Result<LossProfile> {
    let (meta, rows) = read_table::<ProfileRow>(path)?;
    let bad = |message: String| Error::Config {
        path: path.to_path_buf(),
        message,
    };
    let get = |key: &str| {
        meta.iter()
            .find(|(k, _)| k == key)
            .map(|(_, v)| v.as_str())
            .ok_or_else(|| bad(format!("missing `# {key}=` line")))
    };
    let parse_f = |key: &str| -> Result<f64> { get(key)?.parse().map_err(|_| bad(format!("bad {key}"))) };
    let parse_u = |key: &str| -> Result<usize> { get(key)?.parse().map_err(|_| bad(format!("bad {key}"))) };
    let config: PenaltyConfig = serde_json::from_str(get("config")?).map_err(|e| bad(format!("bad config: {e}")))?;
    let entries = rows
        .into_iter()
        .map(|r| ProfileEntry {
            u: r.u,
            fit: LinearFit {
                alpha: r.alpha,
                beta: r.beta,
                n_used: r.n_suffix,
                rss: r.rss,
                mean_x: r.mean_x,
                mean_y: r.mean_y,
                ss_x: r.ss_x,
            },
            loss: r.loss,
            penalty: r.penalty,
            penalized: r.penalized,
        })
        .collect();
    Ok(LossProfile {
        entries,
        gamma_n: parse_f("gamma_n")?,
        lambda_n: parse_f("lambda_n")?,
        n: parse_u("n")?,
        min_suffix: parse_u("min_suffix")?,
        degenerate_excluded: parse_u("degenerate_excluded")?,
        config,
    })
}

pub fn write_sweep(sweep: &Sweep, path: &Path) -> Result<()> {
    let comments = vec![format!("n={}", sweep.n), format!("gamma_n={}", num(sweep.gamma_n))];
    let rows = sweep.points.iter().map(|p| vec![num(p.c), num(p.u_hat)]);
    write_table(path, &comments, &SWEEP_HEADER, rows)
}

pub fn read_sweep(path: &Path) -> Result<Vec<SweepPoint>> {
    Ok(read_table::<SweepPoint>(path)?.1)
}

pub fn write_plateaus(plateaus: &[Plateau], path: &Path) -> Result<()> {
    let rows = plateaus
        .iter()
        .map(|p| vec![num(p.c_start), num(p.c_end), num(p.u_hat), p.grid_points.to_string()]);
    write_table(path, &[], &PLATEAU_HEADER, rows)
}

pub fn read_plateaus(path: &Path) -> Result<Vec<Plateau>> {
    Ok(read_table::<Plateau>(path)?.1)
}

fn quartile_fields(q: Option<Quartiles>) -> [String; 5] {
    [
        opt(q.map(|q| q.min)),
        opt(q.map(|q| q.q1)),
        opt(q.map(|q| q.median)),
        opt(q.map(|q| q.q3)),
        opt(q.map(|q| q.max)),
    ]
}

pub fn write_scenario_table(table: &ScenarioTable, path: &Path) -> Result<()> {
    let rows = table.rows.iter().map(|r| {
        let s = &r.scenario;
        let mut row = vec![
            s.model.name().to_string(),
            num(s.u0),
            num(s.delta),
            num(s.sigma),
            s.n.to_string(),
            num(s.penalty.c),
            num(s.penalty.xi),
            num(s.penalty.eta1),
            s.penalty.penalty_fn.name().to_string(),
            s.nrep.to_string(),
            s.base_seed.to_string(),
            opt(Some(r.emae).filter(|v| !v.is_nan())),
            r.estimates.len().to_string(),
            r.failure_count().to_string(),
        ];
        row.extend(quartile_fields(r.u_hat));
        row.extend(quartile_fields(r.alpha));
        row.extend(quartile_fields(r.beta));
        row
    });
    write_table(path, &[], &SCENARIO_HEADER, rows)
}

/// One parsed line of a scenario table.
#[derive(Debug, Clone, PartialEq, Deserialize)]
pub struct ScenarioRow {
    pub model: String,
    pub u0: f64,
    pub delta: f64,
    pub sigma: f64,
    pub n: usize,
    pub c: f64,
    pub xi: f64,
    pub eta1: f64,
    pub penalty: String,
    pub nrep: usize,
    pub base_seed: u64,
    pub emae: Option<f64>,
    pub successes: usize,
    pub failures: usize,
    pub uhat_min: Option<f64>,
    pub uhat_q1: Option<f64>,
    pub uhat_median: Option<f64>,
    pub uhat_q3: Option<f64>,
    pub uhat_max: Option<f64>,
    pub alpha_min: Option<f64>,
    pub alpha_q1: Option<f64>,
    pub alpha_median: Option<f64>,
    pub alpha_q3: Option<f64>,
    pub alpha_max: Option<f64>,
    pub beta_min: Option<f64>,
    pub beta_q1: Option<f64>,
    pub beta_median: Option<f64>,
    pub beta_q3: Option<f64>,
    pub beta_max: Option<f64>,
}

pub fn read_scenario_table(path: &Path) -> Result<Vec<ScenarioRow>> {
    Ok(read_table::<ScenarioRow>(path)?.1)
}

pub fn write_replicates(table: &ScenarioTable, path: &Path) -> Result<()> {
    let rows = table.rows.iter().enumerate().flat_map(|(i, r)| {
        r.estimates.iter().map(move |e| {
            vec![
                i.to_string(),
                e.rep.to_string(),
                num(e.u_hat),
                num(e.alpha),
                num(e.beta),
            ]
        })
    });
    write_table(path, &[], &REPLICATE_HEADER, rows)
}
