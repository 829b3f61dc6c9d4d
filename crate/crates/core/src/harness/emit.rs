//! CSV and JSON-lines output of experiment metrics.

use std::collections::BTreeMap;
use std::fs::File;
use std::io::{BufWriter, Write};
use std::path::{Path, PathBuf};

use serde::{Deserialize, Serialize};

use super::{compare, HarnessError, Protocol, RouteRow, RunMetrics};

/// Aggregates for one (node count, protocol) cell.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct SummaryRow {
    pub node_count: usize,
    pub protocol: Protocol,
    pub routes: usize,
    pub delivered: usize,
    /// Pairs delivered by both protocols, over which the means run.
    pub paired: usize,
    pub mean_length_m: f64,
    pub mean_hops: f64,
    pub hole_paths: usize,
    pub hole_mean_length_m: f64,
    pub hole_mean_hops: f64,
    pub networks: usize,
    pub mean_holes: f64,
    pub mean_hddl_evaluations: f64,
    pub mean_hagr_computations: f64,
}

pub fn summarize(metrics: &RunMetrics) -> Vec<SummaryRow> {
    let mut by_count: BTreeMap<usize, Vec<RouteRow>> = BTreeMap::new();
    for r in &metrics.routes {
        by_count.entry(r.node_count).or_default().push(r.clone());
    }
    let mut rows = Vec::new();
    for (count, routes) in by_count {
        let nets: Vec<_> = metrics.networks.iter().filter(|n| n.node_count == count).collect();
        let k = nets.len().max(1) as f64;
        let mean = |f: &dyn Fn(&super::NetworkRow) -> usize| {
            nets.iter().map(|n| f(n) as f64).sum::<f64>() / k
        };
        let all = compare(&routes, false);
        let holes = compare(&routes, true);
        for protocol in [Protocol::Gpsr, Protocol::Hddl] {
            let mine: Vec<_> = routes.iter().filter(|r| r.protocol == protocol).collect();
            let pick = |g: f64, h: f64| if protocol == Protocol::Gpsr { g } else { h };
            rows.push(SummaryRow {
                node_count: count,
                protocol,
                routes: mine.len(),
                delivered: mine.iter().filter(|r| r.delivered).count(),
                paired: all.pairs,
                mean_length_m: pick(all.gpsr_length, all.hddl_length),
                mean_hops: pick(all.gpsr_hops, all.hddl_hops),
                hole_paths: holes.pairs,
                hole_mean_length_m: pick(holes.gpsr_length, holes.hddl_length),
                hole_mean_hops: pick(holes.gpsr_hops, holes.hddl_hops),
                networks: nets.len(),
                mean_holes: mean(&|n| n.holes_found),
                mean_hddl_evaluations: mean(&|n| n.hddl_evaluations),
                mean_hagr_computations: mean(&|n| n.hagr_computations),
            });
        }
    }
    rows
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct EmittedFiles {
    pub routes: PathBuf,
    pub networks: PathBuf,
    pub summary: PathBuf,
    pub holes: PathBuf,
}

fn write_csv<T: Serialize>(path: &Path, rows: &[T]) -> Result<(), HarnessError> {
    let mut w = csv::Writer::from_path(path)?;
    for r in rows {
        w.serialize(r)?;
    }
    w.flush()?;
    Ok(())
}

/// Writes `routes.csv`, `networks.csv`, `summary.csv` and `holes.jsonl`
/// into `out_dir`, creating it if needed.
pub fn emit(metrics: &RunMetrics, out_dir: &Path) -> Result<EmittedFiles, HarnessError> {
    if metrics.routes.is_empty() {
        return Err(HarnessError::EmptyRoutes);
    }
    std::fs::create_dir_all(out_dir)?;
    let files = EmittedFiles {
        routes: out_dir.join("routes.csv"),
        networks: out_dir.join("networks.csv"),
        summary: out_dir.join("summary.csv"),
        holes: out_dir.join("holes.jsonl"),
    };
    write_csv(&files.routes, &metrics.routes)?;
    write_csv(&files.networks, &metrics.networks)?;
    write_csv(&files.summary, &summarize(metrics))?;
    let mut w = BufWriter::new(File::create(&files.holes)?);
    for h in &metrics.holes {
        serde_json::to_writer(&mut w, h)?;
        w.write_all(b"\n")?;
    }
    w.flush()?;
    Ok(files)
}
