//! Command-line front end.
//!
//! Every command writes one machine-readable table (CSV or JSON) to stdout
//! or to `--out`. A run is described by a [`RunConfig`], built from flags or
//! loaded from a JSON file with `--config`; flags given next to `--config`
//! override the file.
//!
//! Exit codes: 0 when every requested check passes, 1 when a check fails
//! (decode mismatch, collision, failed verification), 2 on any other error.

use std::fs::File;
use std::io::{self, Write};
use std::path::PathBuf;

use clap::{Parser, ValueEnum};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde::{Deserialize, Serialize};

use crate::apps::{cmd_butterfly, cmd_tree, fig4_tree, TreeSpec};
use crate::capacity::{capacity_infinite, solve_capacity, time_sharing_rate, DEFAULT_TOL};
use crate::codec::{
    build_single_relay_code, build_table2_code, codebooks, render_codebooks, run_pipeline, verify_exhaustive, Messages,
    TimingCode,
};
use crate::error::{Error, Result};
use crate::region::two_source_region_curves;

/// Cascade lengths of the published capacity table.
pub const TABLE_M: [usize; 8] = [2, 3, 4, 5, 11, 21, 41, 101];

/// Message sequences `simulate --exhaustive` enumerates at most.
pub const DEFAULT_CAP: u64 = 1 << 20;

#[derive(Clone, Copy, Debug, Default, PartialEq, Eq, Serialize, Deserialize, ValueEnum)]
#[serde(rename_all = "snake_case")]
pub enum Command {
    /// Capacity table over lists of m and q.
    #[default]
    Capacity,
    /// Boundary curves of the two-source region for m = 2, q = 2.
    Region,
    /// Multicast capacity of a broadcast tree.
    Tree,
    /// Network coding against timing on the wireless butterfly.
    Butterfly,
    /// Runs a built-in timing code through the cascade.
    Simulate,
    /// Colored codebooks of a built-in timing code.
    Codebook,
}

#[derive(Clone, Copy, Debug, Default, PartialEq, Eq, Serialize, Deserialize, ValueEnum)]
#[serde(rename_all = "snake_case")]
pub enum Format {
    #[default]
    Csv,
    Json,
    /// Plain text table, `codebook` only.
    Text,
}

/// Everything a run depends on.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(default, deny_unknown_fields)]
pub struct RunConfig {
    pub command: Command,
    pub m: Vec<usize>,
    pub q: Vec<u32>,
    pub tol: f64,
    pub step: f64,
    pub blocks: usize,
    pub seed: u64,
    /// `table1`, `table2` or `single-relay:n,n1,q`.
    pub code: String,
    /// Source messages for `simulate`, followed by one own message per
    /// decoded block when the code has a relay source. Drawn from `seed`
    /// when absent.
    pub messages: Option<Vec<u64>>,
    pub exhaustive: bool,
    pub cap: u64,
    /// Tree for `tree`; a binary tree with depth 3 when absent.
    pub tree: Option<TreeSpec>,
    pub format: Format,
    pub out: Option<PathBuf>,
}

impl Default for RunConfig {
    fn default() -> Self {
        RunConfig {
            command: Command::Capacity,
            m: TABLE_M.to_vec(),
            q: vec![1, 2],
            tol: DEFAULT_TOL,
            step: 0.01,
            blocks: 4,
            seed: 0,
            code: "table1".into(),
            messages: None,
            exhaustive: false,
            cap: DEFAULT_CAP,
            tree: None,
            format: Format::Csv,
            out: None,
        }
    }
}

impl RunConfig {
    pub fn validate(&self) -> Result<()> {
        if !(self.tol > 0.0 && self.tol.is_finite()) {
            return Err(Error::Domain(format!("tolerance must be positive, got {}", self.tol)));
        }
        if !(self.step > 0.0 && self.step <= 0.1) {
            return Err(Error::Domain(format!("step must lie in (0, 0.1], got {}", self.step)));
        }
        if let Some(&bad) = self.m.iter().find(|&&m| m == 0) {
            return Err(Error::Domain(format!("cascade length must be at least 1, got {bad}")));
        }
        if let Some(&bad) = self.q.iter().find(|&&q| q == 0) {
            return Err(Error::Domain(format!("q must be at least 1, got {bad}")));
        }
        if self.format == Format::Text && self.command != Command::Codebook {
            return Err(Error::Unsupported("text output is only available for codebook".into()));
        }
        Ok(())
    }
}

#[derive(Debug, Parser)]
#[command(
    name = "cascade-timing",
    version,
    about = "Capacities, rate regions and timing codes of half-duplex relay cascades"
)]
pub struct Args {
    pub command: Option<Command>,
    /// Cascade lengths, e.g. `2..5,11,21`.
    #[arg(long)]
    pub m: Option<String>,
    /// Transmission alphabet sizes, e.g. `1,2`.
    #[arg(long)]
    pub q: Option<String>,
    /// Solver tolerance.
    #[arg(long)]
    pub tol: Option<f64>,
    /// Sampling step of the region curves.
    #[arg(long)]
    pub step: Option<f64>,
    /// Blocks to simulate.
    #[arg(long)]
    pub blocks: Option<usize>,
    /// Seed for drawn messages.
    #[arg(long)]
    pub seed: Option<u64>,
    /// `table1`, `table2` or `single-relay:n,n1,q`.
    #[arg(long)]
    pub code: Option<String>,
    /// Messages for `simulate`, e.g. `1,2,4,7`.
    #[arg(long)]
    pub messages: Option<String>,
    /// Enumerate every message sequence in `simulate`.
    #[arg(long)]
    pub exhaustive: bool,
    /// Largest number of sequences `--exhaustive` may enumerate.
    #[arg(long)]
    pub cap: Option<u64>,
    /// Tree edges for `tree`, e.g. `1-2,1-3,2-4`; uses the first `--q`.
    #[arg(long)]
    pub edges: Option<String>,
    #[arg(long, value_enum)]
    pub format: Option<Format>,
    /// Output file instead of stdout.
    #[arg(long)]
    pub out: Option<PathBuf>,
    /// JSON file holding a RunConfig.
    #[arg(long)]
    pub config: Option<PathBuf>,
}

/// Parses `2..5,11` into `[2, 3, 4, 5, 11]`; the empty string is the empty list.
pub fn parse_list<T>(text: &str) -> Result<Vec<T>>
where
    T: std::str::FromStr + Copy + Into<u64> + TryFrom<u64>,
{
    let bad = |part: &str| Error::Domain(format!("cannot parse list entry {part:?}"));
    let parse = |s: &str| s.trim().parse::<T>().map_err(|_| bad(s));
    let mut out = Vec::new();
    for part in text.split(',').filter(|p| !p.trim().is_empty()) {
        match part.split_once("..") {
            Some((a, b)) => {
                let (a, b) = (parse(a)?.into(), parse(b)?.into());
                for v in a..=b {
                    out.push(T::try_from(v).map_err(|_| bad(part))?);
                }
            }
            None => out.push(parse(part)?),
        }
    }
    Ok(out)
}

fn parse_edges(text: &str) -> Result<Vec<(u32, u32)>> {
    text.split(',')
        .filter(|p| !p.trim().is_empty())
        .map(|part| {
            part.split_once('-')
                .and_then(|(a, b)| Some((a.trim().parse().ok()?, b.trim().parse().ok()?)))
                .ok_or_else(|| Error::Domain(format!("cannot parse edge {part:?}, expected parent-child")))
        })
        .collect()
}

impl Args {
    /// Resolves flags and the optional config file into one [`RunConfig`].
    pub fn into_config(self) -> Result<RunConfig> {
        let mut cfg = match &self.config {
            Some(path) => serde_json::from_reader(File::open(path)?)?,
            None => RunConfig::default(),
        };
        if let Some(c) = self.command {
            cfg.command = c;
        }
        if let Some(m) = &self.m {
            cfg.m = parse_list::<u32>(m)?.into_iter().map(|v| v as usize).collect();
        }
        if let Some(q) = &self.q {
            cfg.q = parse_list(q)?;
        }
        if let Some(edges) = &self.edges {
            cfg.tree = Some(TreeSpec {
                q: cfg.q.first().copied().unwrap_or(1),
                edges: parse_edges(edges)?,
            });
        }
        if let Some(msgs) = &self.messages {
            cfg.messages = Some(parse_list(msgs)?);
        }
        cfg.tol = self.tol.unwrap_or(cfg.tol);
        cfg.step = self.step.unwrap_or(cfg.step);
        cfg.blocks = self.blocks.unwrap_or(cfg.blocks);
        cfg.seed = self.seed.unwrap_or(cfg.seed);
        cfg.cap = self.cap.unwrap_or(cfg.cap);
        cfg.exhaustive |= self.exhaustive;
        cfg.code = self.code.unwrap_or(cfg.code);
        cfg.format = self.format.unwrap_or(cfg.format);
        cfg.out = self.out.or(cfg.out);
        cfg.validate()?;
        Ok(cfg)
    }
}

/// Looks up a built-in code by name.
pub fn builtin_code(name: &str) -> Result<TimingCode> {
    let name = name.trim();
    match name {
        "table1" => return build_single_relay_code(4, 1, 2),
        "table2" => return build_table2_code(),
        _ => {}
    }
    let args = name
        .strip_prefix("single-relay:")
        .or_else(|| name.strip_prefix("single_relay(").and_then(|s| s.strip_suffix(')')))
        .ok_or_else(|| {
            Error::Domain(format!(
                "unknown code {name:?}; use table1, table2 or single-relay:n,n1,q"
            ))
        })?;
    match parse_list::<u32>(args)?[..] {
        [n, n1, q] => build_single_relay_code(n as usize, n1 as usize, q),
        _ => Err(Error::Domain(format!("single-relay code needs n,n1,q, got {args:?}"))),
    }
}

fn csv_writer(out: &mut Vec<u8>) -> csv::Writer<&mut Vec<u8>> {
    csv::WriterBuilder::new().has_headers(false).from_writer(out)
}

fn json_lines<T: Serialize>(out: &mut Vec<u8>, items: &[T]) -> Result<()> {
    for item in items {
        serde_json::to_writer(&mut *out, item)?;
        out.push(b'\n');
    }
    Ok(())
}

fn json_value<T: Serialize>(out: &mut Vec<u8>, value: &T) -> Result<()> {
    serde_json::to_writer_pretty(&mut *out, value)?;
    out.push(b'\n');
    Ok(())
}

fn f4(x: f64) -> String {
    format!("{x:.4}")
}

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct CapacityRow {
    pub m: usize,
    pub q: u32,
    pub capacity: f64,
    pub time_sharing_rate: f64,
    pub capacity_infinite: f64,
}

/// Capacity of every `(m, q)` pair, `q` varying fastest.
pub fn cmd_capacity(m_list: &[usize], q_list: &[u32], tol: f64) -> Result<Vec<CapacityRow>> {
    let mut rows = Vec::with_capacity(m_list.len() * q_list.len());
    for &m in m_list {
        for &q in q_list {
            let value = solve_capacity(m, q, tol)
                .map_err(|e| Error::CheckFailed(format!("capacity solve for m = {m}, q = {q}: {e}")))?
                .value;
            rows.push(CapacityRow {
                m,
                q,
                capacity: value,
                time_sharing_rate: time_sharing_rate(q),
                capacity_infinite: capacity_infinite(q),
            });
        }
    }
    Ok(rows)
}

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct SimulationSummary {
    pub code: String,
    pub blocks: usize,
    pub sequences: u64,
    pub failures: u64,
}

fn draw_messages(code: &TimingCode, blocks: usize, seed: u64) -> Messages {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let w0 = (0..blocks).map(|_| rng.gen_range(0..code.w0_size)).collect();
    let own = match code.nodes.iter().find_map(|c| c.own_size) {
        Some(size) => (0..blocks + 1 - code.spec.m())
            .map(|_| rng.gen_range(0..size))
            .collect(),
        None => Vec::new(),
    };
    Messages { w0, own }
}

fn split_messages(code: &TimingCode, blocks: usize, given: &[u64]) -> Result<Messages> {
    if given.len() < blocks {
        return Err(Error::Domain(format!(
            "{blocks} blocks need {blocks} source messages, got {}",
            given.len()
        )));
    }
    Ok(Messages {
        w0: given[..blocks].to_vec(),
        own: if code.nodes.iter().any(|c| c.own_size.is_some()) {
            given[blocks..].to_vec()
        } else {
            Vec::new()
        },
    })
}

/// Runs `cfg` and returns the bytes of its primary output.
pub fn execute(cfg: &RunConfig) -> Result<Vec<u8>> {
    cfg.validate()?;
    let mut out = Vec::new();
    match cfg.command {
        Command::Capacity => {
            let rows = cmd_capacity(&cfg.m, &cfg.q, cfg.tol)?;
            if cfg.format == Format::Json {
                json_value(&mut out, &rows)?;
            } else {
                let mut w = csv_writer(&mut out);
                w.write_record(["m", "q", "capacity", "time_sharing_rate", "capacity_infinite"])?;
                for r in &rows {
                    w.write_record([
                        r.m.to_string(),
                        r.q.to_string(),
                        f4(r.capacity),
                        f4(r.time_sharing_rate),
                        f4(r.capacity_infinite),
                    ])?;
                }
                w.flush()?;
            }
        }
        Command::Region => {
            let points = two_source_region_curves(cfg.step)?;
            if cfg.format == Format::Json {
                json_value(&mut out, &points)?;
            } else {
                let mut w = csv_writer(&mut out);
                w.write_record(["region_tag", "R0", "R1"])?;
                for p in &points {
                    w.write_record([p.tag.to_string(), f4(p.r0), f4(p.r1)])?;
                }
                w.flush()?;
            }
        }
        Command::Tree => {
            let tree = cfg.tree.clone().unwrap_or_else(fig4_tree);
            let report = cmd_tree(&tree, cfg.tol)?;
            if cfg.format == Format::Json {
                json_value(&mut out, &report)?;
            } else {
                let join = |v: &[u32]| v.iter().map(u32::to_string).collect::<Vec<_>>().join(";");
                let mut w = csv_writer(&mut out);
                w.write_record(["root", "q", "depth", "deepest_leaves", "relays", "capacity"])?;
                w.write_record([
                    report.root.to_string(),
                    tree.q.to_string(),
                    report.depth.to_string(),
                    join(&report.deepest_leaves),
                    join(&report.relays),
                    f4(report.capacity),
                ])?;
                w.flush()?;
            }
        }
        Command::Butterfly => {
            let r = cmd_butterfly()?;
            if r.nc_pairs_decoded != r.nc_pairs_total {
                return Err(Error::CheckFailed(format!(
                    "network coding decoded {} of {} bit pairs",
                    r.nc_pairs_decoded, r.nc_pairs_total
                )));
            }
            if cfg.format == Format::Json {
                json_value(&mut out, &r)?;
            } else {
                let mut w = csv_writer(&mut out);
                w.write_record([
                    "nc_rate",
                    "nc_pairs_decoded",
                    "nc_pairs_total",
                    "timing_rate",
                    "timing_code_n",
                    "timing_code_n1",
                    "timing_code_rate",
                    "timing_sequences_checked",
                    "note",
                ])?;
                w.write_record([
                    f4(r.nc_rate),
                    r.nc_pairs_decoded.to_string(),
                    r.nc_pairs_total.to_string(),
                    f4(r.timing_rate),
                    r.timing_code.0.to_string(),
                    r.timing_code.1.to_string(),
                    f4(r.timing_code_rate),
                    r.timing_sequences_checked.to_string(),
                    r.note.clone(),
                ])?;
                w.flush()?;
            }
        }
        Command::Simulate => {
            let code = builtin_code(&cfg.code)?;
            if cfg.exhaustive {
                let sequences = verify_exhaustive(&code, cfg.blocks, cfg.cap)?;
                let summary = SimulationSummary {
                    code: cfg.code.clone(),
                    blocks: cfg.blocks,
                    sequences,
                    failures: 0,
                };
                if cfg.format == Format::Json {
                    json_value(&mut out, &summary)?;
                } else {
                    let mut w = csv_writer(&mut out);
                    w.write_record(["code", "blocks", "sequences", "failures"])?;
                    w.write_record([
                        summary.code,
                        summary.blocks.to_string(),
                        sequences.to_string(),
                        "0".into(),
                    ])?;
                    w.flush()?;
                }
            } else {
                let messages = match &cfg.messages {
                    Some(given) => split_messages(&code, cfg.blocks, given)?,
                    None => draw_messages(&code, cfg.blocks, cfg.seed),
                };
                let run = run_pipeline(&code, &messages, cfg.blocks)?;
                if cfg.format == Format::Json {
                    json_lines(&mut out, &run.transcript)?;
                } else {
                    let mut w = csv_writer(&mut out);
                    w.write_record(["block", "node", "word", "decoded"])?;
                    for e in &run.transcript {
                        let decoded = e
                            .decoded
                            .as_ref()
                            .map(|d| d.iter().map(u64::to_string).collect::<Vec<_>>().join(";"))
                            .unwrap_or_default();
                        w.write_record([e.block.to_string(), e.node.to_string(), e.word.to_string(), decoded])?;
                    }
                    w.flush()?;
                }
            }
        }
        Command::Codebook => {
            let code = builtin_code(&cfg.code)?;
            match cfg.format {
                Format::Text => out.extend_from_slice(render_codebooks(&code)?.as_bytes()),
                Format::Json => json_value(&mut out, &codebooks(&code)?)?,
                Format::Csv => {
                    let mut w = csv_writer(&mut out);
                    w.write_record(["node", "column", "message", "word", "colors"])?;
                    for book in codebooks(&code)? {
                        for col in &book.columns {
                            for (u, e) in col.entries.iter().enumerate() {
                                w.write_record([
                                    book.node.to_string(),
                                    col.label.clone(),
                                    u.to_string(),
                                    e.word.clone(),
                                    e.colors.join(";"),
                                ])?;
                            }
                        }
                    }
                    w.flush()?;
                }
            }
        }
    }
    Ok(out)
}

/// Exit code for an error: 1 for a failed check, 2 otherwise.
pub fn exit_code(err: &Error) -> i32 {
    match err {
        Error::CheckFailed(_) | Error::Collision { .. } | Error::DecodeMismatch { .. } => 1,
        _ => 2,
    }
}

fn run_config(cfg: &RunConfig) -> Result<()> {
    let bytes = execute(cfg)?;
    match &cfg.out {
        Some(path) => File::create(path)?.write_all(&bytes)?,
        None => io::stdout().lock().write_all(&bytes)?,
    }
    Ok(())
}

/// Parses `args`, runs the command and returns the process exit code.
pub fn main_with_args<I, T>(args: I) -> i32
where
    I: IntoIterator<Item = T>,
    T: Into<std::ffi::OsString> + Clone,
{
    let args = match Args::try_parse_from(args) {
        Ok(a) => a,
        Err(e) => {
            let _ = e.print();
            return if e.use_stderr() { 2 } else { 0 };
        }
    };
    match args.into_config().and_then(|cfg| run_config(&cfg)) {
        Ok(()) => 0,
        Err(e) => {
            eprintln!("error: {e}");
            exit_code(&e)
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn config(args: &[&str]) -> RunConfig {
        let mut full = vec!["cascade-timing"];
        full.extend_from_slice(args);
        Args::try_parse_from(full).unwrap().into_config().unwrap()
    }

    fn text(cfg: &RunConfig) -> String {
        String::from_utf8(execute(cfg).unwrap()).unwrap()
    }

    #[test]
    fn lists() {
        assert_eq!(parse_list::<u32>("2..5,11").unwrap(), [2, 3, 4, 5, 11]);
        assert!(parse_list::<u32>("").unwrap().is_empty());
        assert!(parse_list::<u32>("x").is_err());
        assert_eq!(parse_edges("1-2, 1-3").unwrap(), [(1, 2), (1, 3)]);
        assert!(parse_edges("1:2").is_err());
    }

    #[test]
    fn capacity_table() {
        let out = text(&config(&["capacity", "--m", "2", "--q", "1,2"]));
        assert_eq!(
            out,
            "m,q,capacity,time_sharing_rate,capacity_infinite\n2,1,0.7729,0.5000,0.6942\n2,2,1.1389,0.7925,1.0000\n"
        );
        assert_eq!(
            text(&config(&["--m", ""])),
            "m,q,capacity,time_sharing_rate,capacity_infinite\n"
        );
    }

    #[test]
    fn config_file_and_overrides() {
        let dir = tempfile::tempdir().unwrap();
        let path = dir.path().join("run.json");
        std::fs::write(&path, r#"{"command": "tree", "tol": 1e-10}"#).unwrap();
        let cfg = config(&["--config", path.to_str().unwrap(), "--format", "json"]);
        assert_eq!(cfg.command, Command::Tree);
        assert_eq!(cfg.tol, 1e-10);
        assert_eq!(cfg.format, Format::Json);
        std::fs::write(&path, r#"{"bogus": 1}"#).unwrap();
        let args = Args::try_parse_from(["x", "--config", path.to_str().unwrap()]).unwrap();
        assert!(args.into_config().is_err());
    }

    #[test]
    fn rejects_bad_settings() {
        let bad = |args: &[&str]| {
            let mut full = vec!["cascade-timing"];
            full.extend_from_slice(args);
            Args::try_parse_from(full).unwrap().into_config().is_err()
        };
        assert!(bad(&["--tol", "0"]));
        assert!(bad(&["--tol=-1"]));
        assert!(bad(&["--m", "0"]));
        assert!(bad(&["--format", "text"]));
        assert!(bad(&["region", "--step", "0.5"]));
        assert!(builtin_code("table3").is_err());
        assert!(builtin_code("single-relay:4,1").is_err());
        assert_eq!(
            builtin_code("single_relay(4,1,2)").unwrap(),
            builtin_code("table1").unwrap()
        );
    }

    #[test]
    fn seeded_runs_are_reproducible() {
        let cfg = config(&[
            "simulate", "--code", "table2", "--blocks", "6", "--seed", "7", "--format", "json",
        ]);
        let a = execute(&cfg).unwrap();
        assert_eq!(a, execute(&cfg).unwrap());
        assert_eq!(String::from_utf8(a).unwrap().lines().count(), 6 * 4);
        let other = RunConfig { seed: 8, ..cfg.clone() };
        assert_ne!(execute(&cfg).unwrap(), execute(&other).unwrap());
    }

    #[test]
    fn tree_matches_capacity_on_paths() {
        let cfg = config(&["tree", "--q", "2", "--edges", "0-1,1-2,2-3"]);
        let row = text(&cfg).lines().nth(1).unwrap().to_string();
        let cap = text(&config(&["--m", "3", "--q", "2"]));
        assert_eq!(row.rsplit(',').next(), cap.lines().nth(1).unwrap().split(',').nth(2));
    }

    #[test]
    fn exit_codes() {
        assert_eq!(exit_code(&Error::CheckFailed("x".into())), 1);
        assert_eq!(exit_code(&Error::Domain("x".into())), 2);
        assert_eq!(
            main_with_args(["x", "capacity", "--m", "2", "--q", "1", "--out", "/nonexistent/dir/f"]),
            2
        );
        assert_eq!(main_with_args(["x", "--bogus"]), 2);
    }
}
