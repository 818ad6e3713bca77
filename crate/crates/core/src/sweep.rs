//! Monte Carlo rate sweeps with deterministic per-trial seeding.
//!
//! Trial `i` draws everything from [`trial_seed`]`(master, i)`, so a sweep gives the same
//! records whether trials run serially or on a thread pool.

use std::fmt;
use std::io::{self, Write};
use std::str::FromStr;

use rayon::prelude::*;
use serde::Serialize;

use crate::channel::{construct_special_channel, sample_channel, ComplexChannelMatrix, SpecialChannel};
use crate::error::{Error, Result};
use crate::rates::{best_baseline, db_to_linear, fit_dof, rates_from_combiners, validate_grid, zf_receive, DofEstimate};
use crate::schemes::SchemeKind;

/// What a sweep evaluates.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
pub enum SweepTarget {
    Scheme(SchemeKind),
    /// Best circularly symmetric per-symbol policy on a 3-user channel.
    Baseline,
}

impl SweepTarget {
    pub fn shape(&self) -> (usize, usize) {
        match self {
            SweepTarget::Scheme(k) => {
                let d = k.descriptor();
                (d.num_rx, d.num_tx)
            }
            SweepTarget::Baseline => (3, 3),
        }
    }
}

impl fmt::Display for SweepTarget {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            SweepTarget::Scheme(k) => k.fmt(f),
            SweepTarget::Baseline => f.write_str("baseline"),
        }
    }
}

impl FromStr for SweepTarget {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        if s == "baseline" {
            Ok(SweepTarget::Baseline)
        } else {
            s.parse().map(SweepTarget::Scheme)
        }
    }
}

#[derive(Debug, Clone, PartialEq)]
pub enum ChannelSource {
    /// Fresh CN(0,1) channel per trial, seeded by the trial seed.
    Random,
    Special(SpecialChannel),
    Fixed(ComplexChannelMatrix),
}

#[derive(Debug, Clone, PartialEq)]
pub struct SweepConfig {
    pub target: SweepTarget,
    pub source: ChannelSource,
    pub grid_db: Vec<f64>,
    pub trials: usize,
    pub master_seed: u64,
    /// Worker threads; `None` uses rayon's global pool.
    pub threads: Option<usize>,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
#[serde(rename_all = "kebab-case")]
pub enum RecordKind {
    Rate,
    Dof,
    Skipped,
}

/// One output row. Rate rows fill the rate columns, the DoF row closing each trial fills
/// the fit columns, skipped trials carry only the reason.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct SweepRecord {
    pub scheme: String,
    pub seed: u64,
    pub snr_db: Option<f64>,
    pub sum_rate_bpcu: Option<f64>,
    pub per_user_rates: Vec<f64>,
    pub trial: usize,
    pub kind: RecordKind,
    pub dof_slope: Option<f64>,
    pub dof_intercept: Option<f64>,
    pub dof_residual: Option<f64>,
    pub skip_reason: Option<String>,
}

#[derive(Debug, Clone, PartialEq)]
pub struct TrialOutcome {
    pub trial: usize,
    pub seed: u64,
    pub result: std::result::Result<DofEstimate, String>,
}

#[derive(Debug, Clone, PartialEq)]
pub struct SweepReport {
    pub records: Vec<SweepRecord>,
    pub trials: Vec<TrialOutcome>,
}

impl SweepReport {
    /// Fitted slopes of the trials that ran.
    pub fn slopes(&self) -> Vec<f64> {
        self.trials.iter().filter_map(|t| t.result.as_ref().ok().map(|d| d.slope)).collect()
    }

    pub fn skipped(&self) -> usize {
        self.trials.iter().filter(|t| t.result.is_err()).count()
    }
}

fn splitmix64(mut z: u64) -> u64 {
    z = z.wrapping_add(0x9E37_79B9_7F4A_7C15);
    z = (z ^ (z >> 30)).wrapping_mul(0xBF58_476D_1CE4_E5B9);
    z = (z ^ (z >> 27)).wrapping_mul(0x94D0_49BB_1331_11EB);
    z ^ (z >> 31)
}

/// Seed of trial `index` under `master`.
pub fn trial_seed(master: u64, index: usize) -> u64 {
    splitmix64(splitmix64(master) ^ (index as u64).wrapping_mul(0xD1B5_4A32_D192_ED03))
}

fn channel_for(source: &ChannelSource, target: SweepTarget, seed: u64) -> Result<ComplexChannelMatrix> {
    let (rx, tx) = target.shape();
    let ch = match source {
        ChannelSource::Random => sample_channel(seed, rx, tx)?,
        ChannelSource::Special(kind) => construct_special_channel(*kind)?,
        ChannelSource::Fixed(ch) => ch.clone(),
    };
    ch.require_shape(rx, tx)?;
    Ok(ch)
}

type Curve = Vec<(f64, f64, Vec<f64>)>;

fn run_trial(config: &SweepConfig, seed: u64) -> Result<Curve> {
    let channel = channel_for(&config.source, config.target, seed)?;
    match config.target {
        SweepTarget::Scheme(kind) => {
            let set = kind.build(&channel, splitmix64(seed))?;
            let combiners = zf_receive(&set, &channel)?;
            config
                .grid_db
                .iter()
                .map(|&db| {
                    let r = rates_from_combiners(&set, &channel, &combiners, db_to_linear(db))?;
                    Ok((db, r.sum_rate, r.user_rates.iter().map(|u| u.rate).collect()))
                })
                .collect()
        }
        SweepTarget::Baseline => config
            .grid_db
            .iter()
            .map(|&db| {
                let (_, rates) = best_baseline(&channel, db_to_linear(db))?;
                Ok((db, rates.iter().sum(), rates))
            })
            .collect(),
    }
}

fn trial_records(config: &SweepConfig, trial: usize) -> (Vec<SweepRecord>, TrialOutcome) {
    let seed = trial_seed(config.master_seed, trial);
    let blank = SweepRecord {
        scheme: config.target.to_string(),
        seed,
        snr_db: None,
        sum_rate_bpcu: None,
        per_user_rates: Vec::new(),
        trial,
        kind: RecordKind::Rate,
        dof_slope: None,
        dof_intercept: None,
        dof_residual: None,
        skip_reason: None,
    };
    let outcome = run_trial(config, seed).and_then(|curve| {
        let rates: Vec<f64> = curve.iter().map(|c| c.1).collect();
        fit_dof(&config.grid_db, &rates).map(|fit| (curve, fit))
    });
    match outcome {
        Ok((curve, fit)) => {
            let mut records: Vec<SweepRecord> = curve
                .into_iter()
                .map(|(db, sum, users)| SweepRecord {
                    snr_db: Some(db),
                    sum_rate_bpcu: Some(sum),
                    per_user_rates: users,
                    ..blank.clone()
                })
                .collect();
            records.push(SweepRecord {
                kind: RecordKind::Dof,
                dof_slope: Some(fit.slope),
                dof_intercept: Some(fit.intercept),
                dof_residual: Some(fit.residual),
                ..blank
            });
            (records, TrialOutcome { trial, seed, result: Ok(fit) })
        }
        Err(e) => {
            let reason = e.to_string();
            let record = SweepRecord { kind: RecordKind::Skipped, skip_reason: Some(reason.clone()), ..blank };
            (vec![record], TrialOutcome { trial, seed, result: Err(reason) })
        }
    }
}

/// Runs every trial. Infeasible or rank-deficient trials become skipped records; only
/// configuration problems are errors.
pub fn run_sweep(config: &SweepConfig) -> Result<SweepReport> {
    validate_grid(&config.grid_db)?;
    if config.trials == 0 {
        return Err(Error::InvalidInput("trial count must be at least 1".into()));
    }
    // shape mismatches are configuration errors, not skipped trials
    if let ChannelSource::Fixed(ch) = &config.source {
        let (rx, tx) = config.target.shape();
        ch.require_shape(rx, tx)?;
    }
    let run = || -> Vec<(Vec<SweepRecord>, TrialOutcome)> {
        (0..config.trials).into_par_iter().map(|i| trial_records(config, i)).collect()
    };
    let mut results = match config.threads {
        Some(n) => rayon::ThreadPoolBuilder::new()
            .num_threads(n.max(1))
            .build()
            .map_err(|e| Error::InvalidInput(format!("thread pool: {e}")))?
            .install(run),
        None => run(),
    };
    results.sort_by_key(|r| r.1.trial);
    let mut records = Vec::new();
    let mut trials = Vec::with_capacity(results.len());
    for (r, t) in results {
        records.extend(r);
        trials.push(t);
    }
    Ok(SweepReport { records, trials })
}

/// `%.12g`-style formatting: 12 significant digits, trailing zeros trimmed, exponent form
/// outside `[1e-5, 1e12)`. Non-finite values print as `nan`, `inf` or `-inf`.
pub fn format_sig12(x: f64) -> String {
    if x.is_nan() {
        return "nan".into();
    }
    if x.is_infinite() {
        return if x > 0.0 { "inf".into() } else { "-inf".into() };
    }
    if x == 0.0 {
        return "0".into();
    }
    let sci = format!("{:.11e}", x);
    let (mantissa, exp) = sci.split_once('e').expect("exponent form");
    let exp: i32 = exp.parse().expect("integer exponent");
    if (-5..12).contains(&exp) {
        let decimals = (11 - exp).max(0) as usize;
        trim_zeros(format!("{:.*}", decimals, x))
    } else {
        let m = trim_zeros(mantissa.to_string());
        format!("{m}e{}{:02}", if exp < 0 { '-' } else { '+' }, exp.abs())
    }
}

fn trim_zeros(s: String) -> String {
    if s.contains('.') {
        s.trim_end_matches('0').trim_end_matches('.').to_string()
    } else {
        s
    }
}

pub const CSV_HEADER: &str =
    "scheme,seed,snr_db,sum_rate_bpcu,per_user_rates,trial,kind,dof_slope,dof_intercept,dof_residual,skip_reason";

fn kind_name(k: RecordKind) -> &'static str {
    match k {
        RecordKind::Rate => "rate",
        RecordKind::Dof => "dof",
        RecordKind::Skipped => "skipped",
    }
}

fn opt(x: Option<f64>) -> String {
    x.map(format_sig12).unwrap_or_default()
}

fn csv_field(s: &str) -> String {
    if s.contains([',', '"', '\n']) {
        format!("\"{}\"", s.replace('"', "\"\""))
    } else {
        s.to_string()
    }
}

/// CSV with [`CSV_HEADER`]; per-user rates are `;`-separated inside one field.
pub fn write_csv<W: Write>(records: &[SweepRecord], mut out: W) -> io::Result<()> {
    writeln!(out, "{CSV_HEADER}")?;
    for r in records {
        let users: Vec<String> = r.per_user_rates.iter().map(|&x| format_sig12(x)).collect();
        writeln!(
            out,
            "{},{},{},{},{},{},{},{},{},{},{}",
            csv_field(&r.scheme),
            r.seed,
            opt(r.snr_db),
            opt(r.sum_rate_bpcu),
            users.join(";"),
            r.trial,
            kind_name(r.kind),
            opt(r.dof_slope),
            opt(r.dof_intercept),
            opt(r.dof_residual),
            csv_field(r.skip_reason.as_deref().unwrap_or("")),
        )?;
    }
    Ok(())
}

fn json_num(x: Option<f64>) -> String {
    match x {
        Some(v) if v.is_finite() => format_sig12(v),
        _ => "null".into(),
    }
}

fn json_str(s: &str) -> String {
    serde_json::to_string(s).expect("strings always serialize")
}

/// One JSON object per line, keys in the CSV column order.
pub fn write_jsonl<W: Write>(records: &[SweepRecord], mut out: W) -> io::Result<()> {
    for r in records {
        let users: Vec<String> = r.per_user_rates.iter().map(|&x| json_num(Some(x))).collect();
        writeln!(
            out,
            "{{\"scheme\":{},\"seed\":{},\"snr_db\":{},\"sum_rate_bpcu\":{},\"per_user_rates\":[{}],\"trial\":{},\"kind\":{},\"dof_slope\":{},\"dof_intercept\":{},\"dof_residual\":{},\"skip_reason\":{}}}",
            json_str(&r.scheme),
            r.seed,
            json_num(r.snr_db),
            json_num(r.sum_rate_bpcu),
            users.join(","),
            r.trial,
            json_str(kind_name(r.kind)),
            json_num(r.dof_slope),
            json_num(r.dof_intercept),
            json_num(r.dof_residual),
            r.skip_reason.as_deref().map(json_str).unwrap_or_else(|| "null".into()),
        )?;
    }
    Ok(())
}
