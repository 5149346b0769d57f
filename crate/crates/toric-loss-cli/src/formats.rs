//! Stable file formats: the sweep and percolation CSV schemas, the fit
//! JSON schema, and the single-trial debug dump.
//!
//! Reals are written with Rust's shortest round-trip formatting, so files
//! re-parse to the exact same bits and byte-identical reruns are a tested
//! guarantee.

use std::fmt::Write as _;

use serde::{Deserialize, Serialize};
use thiserror::Error;

use toric_loss::lattice::{EdgeSet, Orientation, TorusSize};
use toric_loss::scaling::{BoundaryCurve, ScalingFit};
use toric_loss::trial::{Accounting, GridPoint, GridResult, TrialRecord};

use crate::experiment::PercolationResult;

pub const SWEEP_HEADER: &str =
    "p_loss,p_com,L,trials,n_logical_fail,n_loss_fail,p_fail,stderr,master_seed";

pub const PERCOLATION_HEADER: &str =
    "p_loss,L,trials,n_recoverable,p_recover,stderr,master_seed";

#[derive(Debug, Error)]
#[error("line {line}: {message}")]
pub struct DataError {
    pub line: usize,
    pub message: String,
}

pub fn write_sweep_csv(results: &[GridResult], accounting: Accounting) -> String {
    let mut out = String::new();
    out.push_str(SWEEP_HEADER);
    out.push('\n');
    for r in results {
        let _ = writeln!(
            out,
            "{},{},{},{},{},{},{},{},{}",
            r.point.p_loss,
            r.point.p_com,
            r.point.l,
            r.trials(),
            r.n_logical_fail,
            r.n_loss_fail,
            r.p_fail(accounting),
            r.stderr(accounting),
            r.master_seed
        );
    }
    out
}

/// Sweep rows serialised as JSON objects (the `--format json` variant).
#[derive(Serialize)]
struct SweepRow {
    p_loss: f64,
    p_com: f64,
    #[serde(rename = "L")]
    l: u32,
    trials: u64,
    n_logical_fail: u64,
    n_loss_fail: u64,
    p_fail: f64,
    stderr: f64,
    master_seed: u64,
}

pub fn write_sweep_json(results: &[GridResult], accounting: Accounting) -> String {
    let rows: Vec<SweepRow> = results
        .iter()
        .map(|r| SweepRow {
            p_loss: r.point.p_loss,
            p_com: r.point.p_com,
            l: r.point.l,
            trials: r.trials(),
            n_logical_fail: r.n_logical_fail,
            n_loss_fail: r.n_loss_fail,
            p_fail: r.p_fail(accounting),
            stderr: r.stderr(accounting),
            master_seed: r.master_seed,
        })
        .collect();
    let mut s = serde_json::to_string_pretty(&rows).expect("serializable rows");
    s.push('\n');
    s
}

fn parse_field<T: std::str::FromStr>(
    field: &str,
    name: &str,
    line: usize,
) -> Result<T, DataError> {
    field.trim().parse::<T>().map_err(|_| DataError {
        line,
        message: format!("cannot parse {name} from {field:?}"),
    })
}

/// Parse a sweep CSV back into grid results. Counts are authoritative;
/// the p_fail/stderr columns are validated as reals and re-derived.
pub fn parse_sweep_csv(text: &str) -> Result<Vec<GridResult>, DataError> {
    let mut lines = text.lines().enumerate();
    match lines.next() {
        Some((_, header)) if header.trim_end() == SWEEP_HEADER => {}
        Some((_, header)) => {
            return Err(DataError {
                line: 1,
                message: format!("unexpected header {header:?}"),
            })
        }
        None => {
            return Err(DataError {
                line: 1,
                message: "empty file".into(),
            })
        }
    }

    let mut results = Vec::new();
    for (idx, raw) in lines {
        let line = idx + 1;
        if raw.trim().is_empty() {
            continue;
        }
        let fields: Vec<&str> = raw.split(',').collect();
        if fields.len() != 9 {
            return Err(DataError {
                line,
                message: format!("expected 9 columns, found {}", fields.len()),
            });
        }
        let p_loss: f64 = parse_field(fields[0], "p_loss", line)?;
        let p_com: f64 = parse_field(fields[1], "p_com", line)?;
        let l: u32 = parse_field(fields[2], "L", line)?;
        let trials: u64 = parse_field(fields[3], "trials", line)?;
        let n_logical_fail: u64 = parse_field(fields[4], "n_logical_fail", line)?;
        let n_loss_fail: u64 = parse_field(fields[5], "n_loss_fail", line)?;
        let _p_fail: f64 = parse_field(fields[6], "p_fail", line)?;
        let _stderr: f64 = parse_field(fields[7], "stderr", line)?;
        let master_seed: u64 = parse_field(fields[8], "master_seed", line)?;

        let fails = n_logical_fail + n_loss_fail;
        if fails > trials {
            return Err(DataError {
                line,
                message: format!("failure counts {fails} exceed trials {trials}"),
            });
        }
        if l < 2 {
            return Err(DataError {
                line,
                message: format!("lattice size {l} below 2"),
            });
        }
        results.push(GridResult {
            point: GridPoint {
                p_loss,
                p_com,
                l,
                trials,
            },
            n_logical_fail,
            n_loss_fail,
            n_success: trials - fails,
            master_seed,
        });
    }
    Ok(results)
}

pub fn write_percolation_csv(results: &[PercolationResult]) -> String {
    let mut out = String::new();
    out.push_str(PERCOLATION_HEADER);
    out.push('\n');
    for r in results {
        let _ = writeln!(
            out,
            "{},{},{},{},{},{},{}",
            r.point.p_loss,
            r.point.l,
            r.point.trials,
            r.n_recoverable,
            r.p_recover(),
            r.stderr(),
            r.master_seed
        );
    }
    out
}

/// Schema of the fit output file.
#[derive(Serialize, Deserialize, Debug, PartialEq)]
pub struct FitFile {
    pub fits: Vec<FitEntry>,
    /// Quadratic coefficients `[c0, c1, c2]` of `p_t(p_loss)`, or null
    /// when fewer than three converged slices with `p_loss ≤ 0.4` exist.
    pub boundary: Option<[f64; 3]>,
    /// Extrapolated loss rate where `p_t` reaches zero.
    pub intercept: Option<f64>,
}

#[derive(Serialize, Deserialize, Debug, PartialEq)]
pub struct FitEntry {
    pub p_loss: f64,
    pub p_t: f64,
    pub nu0: f64,
    pub a: f64,
    pub b: f64,
    pub residual_ss: f64,
    pub converged: bool,
}

pub fn write_fit_json(fits: &[ScalingFit], boundary: Option<&BoundaryCurve>) -> String {
    let file = FitFile {
        fits: fits
            .iter()
            .map(|f| FitEntry {
                p_loss: f.p_loss,
                p_t: f.p_t,
                nu0: f.nu0,
                a: f.a,
                b: f.b,
                residual_ss: f.residual_ss,
                converged: f.converged,
            })
            .collect(),
        boundary: boundary.map(|b| b.coefficients),
        intercept: boundary.and_then(|b| b.intercept),
    };
    let mut s = serde_json::to_string_pretty(&file).expect("serializable fits");
    s.push('\n');
    s
}

fn orientation_letter(o: Orientation) -> char {
    match o {
        Orientation::Horizontal => 'H',
        Orientation::Vertical => 'V',
    }
}

fn push_edge_section(out: &mut String, name: &str, edges: &EdgeSet) {
    let _ = writeln!(out, "[{name}]");
    out.push_str("x,y,orientation\n");
    for e in edges.iter() {
        let _ = writeln!(out, "{},{},{}", e.x, e.y, orientation_letter(e.orientation));
    }
    out.push('\n');
}

/// The `sample` subcommand's sectioned-CSV dump of one decoded trial.
pub fn write_sample_dump(
    record: &TrialRecord,
    size: TorusSize,
    p_loss: f64,
    p_com: f64,
    master_seed: u64,
    trial_index: u64,
) -> String {
    let mut out = String::new();
    let _ = writeln!(out, "[meta]");
    out.push_str("key,value\n");
    let _ = writeln!(out, "size,{}", size.l());
    let _ = writeln!(out, "p_loss,{p_loss}");
    let _ = writeln!(out, "p_com,{p_com}");
    let _ = writeln!(out, "master_seed,{master_seed}");
    let _ = writeln!(out, "trial_index,{trial_index}");
    let _ = writeln!(out, "rng,{}", toric_loss::noise::GENERATOR);
    let _ = writeln!(
        out,
        "weight_scale_bits,{}",
        toric_loss::loss::WEIGHT_SCALE_BITS
    );
    let _ = writeln!(out, "outcome,{}", record.outcome);
    out.push('\n');

    push_edge_section(&mut out, "lost", &record.sample.lost);
    push_edge_section(&mut out, "flipped", &record.sample.flipped);

    let _ = writeln!(out, "[regions]");
    out.push_str("plaquette_x,plaquette_y,region,rep_x,rep_y,wraps_x,wraps_y\n");
    for (ridx, region) in record.partition.regions().iter().enumerate() {
        for m in &region.members {
            let _ = writeln!(
                out,
                "{},{},{},{},{},{},{}",
                m.x, m.y, ridx, region.rep.x, region.rep.y, region.wraps_x, region.wraps_y
            );
        }
    }
    out.push('\n');

    let _ = writeln!(out, "[superedges]");
    out.push_str("region_a,region_b,n_shared,error_probability,weight\n");
    if let Some(superedges) = &record.superedges {
        for se in superedges {
            let _ = writeln!(
                out,
                "{},{},{},{},{}",
                se.regions.0, se.regions.1, se.n_shared, se.error_probability, se.weight
            );
        }
    }
    out.push('\n');

    let _ = writeln!(out, "[weights]");
    out.push_str("x,y,orientation,weight\n");
    if let Some(restored) = &record.restored {
        for index in 0..size.edge_count() {
            let e = toric_loss::lattice::EdgeId::from_index(index, size);
            let _ = writeln!(
                out,
                "{},{},{},{}",
                e.x,
                e.y,
                orientation_letter(e.orientation),
                restored.weight_at(index)
            );
        }
    }
    out.push('\n');

    let _ = writeln!(out, "[defects]");
    out.push_str("region,rep_x,rep_y\n");
    if let Some(syndrome) = &record.syndrome {
        for &d in &syndrome.defects {
            let rep = record.partition.regions()[d as usize].rep;
            let _ = writeln!(out, "{},{},{}", d, rep.x, rep.y);
        }
    }
    out.push('\n');

    match &record.correction {
        Some(correction) => {
            push_edge_section(&mut out, "correction", &correction.edges);
            let _ = writeln!(out, "[outcome]");
            out.push_str("outcome,total_weight\n");
            let _ = writeln!(out, "{},{}", record.outcome, correction.total_weight);
        }
        None => {
            let _ = writeln!(out, "[correction]");
            out.push_str("x,y,orientation\n\n");
            let _ = writeln!(out, "[outcome]");
            out.push_str("outcome,total_weight\n");
            let _ = writeln!(out, "{},", record.outcome);
        }
    }
    out
}

#[cfg(test)]
mod tests {
    use super::*;

    fn result(p_loss: f64, p_com: f64, l: u32) -> GridResult {
        GridResult {
            point: GridPoint {
                p_loss,
                p_com,
                l,
                trials: 100,
            },
            n_logical_fail: 7,
            n_loss_fail: 3,
            n_success: 90,
            master_seed: 42,
        }
    }

    #[test]
    fn sweep_csv_round_trips() {
        let results = vec![result(0.0, 0.085, 8), result(0.1, 0.09, 12)];
        let csv = write_sweep_csv(&results, Accounting::Combined);
        let parsed = parse_sweep_csv(&csv).unwrap();
        assert_eq!(parsed, results);
    }

    #[test]
    fn parse_errors_name_the_line() {
        let csv = format!("{SWEEP_HEADER}\n0.1,0.08,8,100,7,3,0.1,0.03,42\nnot,a,row\n");
        let err = parse_sweep_csv(&csv).unwrap_err();
        assert_eq!(err.line, 3);

        let csv = format!("{SWEEP_HEADER}\n0.1,oops,8,100,7,3,0.1,0.03,42\n");
        let err = parse_sweep_csv(&csv).unwrap_err();
        assert_eq!(err.line, 2);
        assert!(err.message.contains("p_com"));

        let err = parse_sweep_csv("bogus\n").unwrap_err();
        assert_eq!(err.line, 1);
    }

    #[test]
    fn count_overflow_is_rejected() {
        let csv = format!("{SWEEP_HEADER}\n0.1,0.08,8,10,7,5,0.1,0.03,42\n");
        assert!(parse_sweep_csv(&csv).is_err());
    }

    #[test]
    fn fit_json_shape() {
        let fits = vec![ScalingFit {
            p_loss: 0.0,
            p_t: 0.104,
            nu0: 1.5,
            a: 0.1,
            b: 1.0,
            residual_ss: 0.5,
            converged: true,
        }];
        let json = write_fit_json(&fits, None);
        let parsed: FitFile = serde_json::from_str(&json).unwrap();
        assert_eq!(parsed.fits.len(), 1);
        assert_eq!(parsed.boundary, None);
        assert_eq!(parsed.intercept, None);
    }
}
