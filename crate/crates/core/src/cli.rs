//! The `pcmtree` command line.
//!
//! Exit codes: 0 on success, 1 when a trial or an output write fails, 2 on
//! usage errors.

use std::ffi::OsString;
use std::fs::{self, File};
use std::io::{self, BufWriter, Write};
use std::path::{Path, PathBuf};

use clap::{Args, Parser, Subcommand, ValueEnum};

use crate::addressing::{
    parse_ratio, tree_height_estimate, Addressing, Alternation, Ratio, Scheme, SchemeConfig, SchemeKind, Threshold,
};
use crate::avl::AvlTree;
use crate::harness::{
    compare_thresholds, gen_dataset, paper_schemes, rotations_histogram_with, run_experiment, CompareOptions,
    DoubleRotationCount, ExperimentConfig, HarnessError, ReassignMode,
};
use crate::pcm::AccountingConfig;
use crate::report::{
    experiment_rows, region_tag, rotation_rows, threshold_rows, write_dump_rows, write_output_rows,
    write_rotation_rows, DumpRow, OutputFormat,
};

/// Largest tree `assign-dump` will print.
pub const DUMP_LIMIT: u64 = 1024;

#[derive(Debug, Parser)]
#[command(
    name = "pcmtree",
    version,
    about = "Address-allocation schemes for AVL trees in phase-change memory"
)]
pub struct Cli {
    #[command(subcommand)]
    pub command: Command,
}

#[derive(Debug, Subcommand)]
pub enum Command {
    /// Mean flips per rotation, wall time and overflow counts per width and scheme.
    Bench(BenchArgs),
    /// Runs the hybrid scheme at several threshold ratios.
    CompareThresholds(CompareArgs),
    /// Average rotations per tree level.
    Rotations(RotationsArgs),
    /// Builds one small tree and prints every node's address.
    AssignDump(DumpArgs),
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum ModeArg {
    Incremental,
    FullPass,
}

impl From<ModeArg> for ReassignMode {
    fn from(m: ModeArg) -> Self {
        match m {
            ModeArg::Incremental => ReassignMode::Incremental,
            ModeArg::FullPass => ReassignMode::FullPass,
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum AccountingArg {
    Pointer,
    Relabel,
    Both,
}

impl From<AccountingArg> for AccountingConfig {
    fn from(a: AccountingArg) -> Self {
        match a {
            AccountingArg::Pointer => AccountingConfig::pointer(),
            AccountingArg::Relabel => AccountingConfig::relabel(),
            AccountingArg::Both => AccountingConfig::both(),
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum OutArg {
    Csv,
    Json,
}

impl From<OutArg> for OutputFormat {
    fn from(o: OutArg) -> Self {
        match o {
            OutArg::Csv => OutputFormat::Csv,
            OutArg::Json => OutputFormat::Json,
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum OrderArg {
    /// Keys in breadth-first order of a balanced tree: no rotations.
    Level,
    /// Keys in increasing order.
    Ascending,
    /// A seeded shuffle, as in the benchmarks.
    Shuffled,
}

#[derive(Debug, Clone, Args)]
pub struct CommonArgs {
    /// Trials per configuration.
    #[arg(long, default_value_t = 100, value_parser = clap::value_parser!(u32).range(1..))]
    pub trials: u32,
    /// Base seed; every trial seed is derived from it.
    #[arg(long, default_value_t = 0)]
    pub seed: u64,
    /// How nodes moved by a rotation are re-addressed.
    #[arg(long, value_enum, default_value_t = ModeArg::Incremental)]
    pub mode: ModeArg,
    /// Which rewritten words count as flips.
    #[arg(long, value_enum, default_value_t = AccountingArg::Pointer)]
    pub accounting: AccountingArg,
    #[arg(long, value_enum, default_value_t = OutArg::Csv)]
    pub out: OutArg,
    /// Write files here instead of printing to stdout.
    #[arg(long)]
    pub output_dir: Option<PathBuf>,
    /// Worker threads (default: all cores).
    #[arg(long, value_parser = clap::value_parser!(u64).range(1..))]
    pub jobs: Option<u64>,
}

impl CommonArgs {
    fn jobs(&self) -> usize {
        self.jobs
            .map(|j| j as usize)
            .unwrap_or_else(|| std::thread::available_parallelism().map_or(1, |n| n.get()))
    }
}

#[derive(Debug, Clone, Args)]
pub struct BenchArgs {
    /// Pointer widths: `8`, `8,15` or `8-14`.
    #[arg(long, default_value = "8-15", value_parser = parse_bits)]
    pub bits: BitList,
    /// Scheme tags (linear, random, gray, dfat-gray, hart) or `all`.
    #[arg(long, default_value = "all")]
    pub schemes: String,
    /// Threshold ratio of the hybrid scheme.
    #[arg(long, default_value = "0.5", value_parser = parse_ratio_arg)]
    pub ratio: Ratio,
    #[command(flatten)]
    pub common: CommonArgs,
}

#[derive(Debug, Clone, Args)]
pub struct CompareArgs {
    /// Tree size.
    #[arg(long, conflicts_with = "bits", required_unless_present = "bits")]
    pub nodes: Option<u64>,
    /// Pointer width; runs `2^(bits-2) - 1` nodes.
    #[arg(long)]
    pub bits: Option<u32>,
    /// Ratios to compare.
    #[arg(long, default_value = "0.25,0.5,0.75", value_delimiter = ',', value_parser = parse_ratio_arg)]
    pub ratios: Vec<Ratio>,
    /// Print the height estimate and thresholds, then exit.
    #[arg(long)]
    pub emit_thresholds: bool,
    #[command(flatten)]
    pub common: CommonArgs,
}

#[derive(Debug, Clone, Args)]
pub struct RotationsArgs {
    /// Pointer widths: `8`, `8,15` or `8-14`.
    #[arg(long, default_value = "8", value_parser = parse_bits)]
    pub bits: BitList,
    /// Count a double rotation once, at the unbalanced node's level.
    #[arg(long)]
    pub count_double_once: bool,
    #[command(flatten)]
    pub common: CommonArgs,
}

#[derive(Debug, Clone, Args)]
pub struct DumpArgs {
    /// Tree size (at most 1024).
    #[arg(long, default_value_t = 7)]
    pub nodes: u64,
    /// Threshold ratio of the hybrid scheme.
    #[arg(long, default_value = "0.25", value_parser = parse_ratio_arg)]
    pub ratio: Ratio,
    /// Pointer width (default: tree height estimate + 2).
    #[arg(long)]
    pub bits: Option<u32>,
    /// Deepest indexable level for positional ranks (default: pointer width).
    #[arg(long)]
    pub depth_capacity: Option<u32>,
    /// Insertion order of the keys `0..nodes`.
    #[arg(long, value_enum, default_value_t = OrderArg::Level)]
    pub order: OrderArg,
    #[arg(long, default_value_t = 0)]
    pub seed: u64,
    #[arg(long, value_enum, default_value_t = OutArg::Csv)]
    pub out: OutArg,
}

/// Sorted, de-duplicated pointer widths.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct BitList(pub Vec<u32>);

pub fn parse_bits(s: &str) -> Result<BitList, String> {
    let mut out = Vec::new();
    for part in s.split(',').map(str::trim) {
        let num = |t: &str| t.trim().parse::<u32>().map_err(|_| format!("bad width `{t}`"));
        match part.split_once('-') {
            Some((a, b)) => {
                let (a, b) = (num(a)?, num(b)?);
                if a > b {
                    return Err(format!("empty range `{part}`"));
                }
                out.extend(a..=b);
            }
            None => out.push(num(part)?),
        }
    }
    out.sort_unstable();
    out.dedup();
    Ok(BitList(out))
}

fn parse_ratio_arg(s: &str) -> Result<Ratio, String> {
    parse_ratio(s).map_err(|e| e.to_string())
}

/// Expands a scheme list; `hart` takes `ratio`, `all` is the five compared schemes.
pub fn parse_schemes(s: &str, ratio: Ratio) -> Result<Vec<Scheme>, String> {
    if s.trim() == "all" {
        return Ok(paper_schemes(ratio));
    }
    let mut out: Vec<Scheme> = Vec::new();
    for tag in s.split(',').map(str::trim) {
        let kind = SchemeKind::from_tag(tag).ok_or_else(|| format!("unknown scheme `{tag}`"))?;
        let scheme = if kind == SchemeKind::Hart {
            Scheme::hart(ratio)
        } else {
            Scheme::new(kind)
        };
        if !out.contains(&scheme) {
            out.push(scheme);
        }
    }
    Ok(out)
}

#[derive(Debug)]
enum CliError {
    Usage(String),
    Run(String),
}

impl From<HarnessError> for CliError {
    fn from(e: HarnessError) -> Self {
        match e {
            HarnessError::Config(m) => CliError::Usage(m),
            e => CliError::Run(e.to_string()),
        }
    }
}

impl From<io::Error> for CliError {
    fn from(e: io::Error) -> Self {
        CliError::Run(format!("write failed: {e}"))
    }
}

/// Parses `args` (including the program name) and runs the command.
pub fn run<I, T>(args: I, stdout: &mut dyn Write, stderr: &mut dyn Write) -> i32
where
    I: IntoIterator<Item = T>,
    T: Into<OsString> + Clone,
{
    let cli = match Cli::try_parse_from(args) {
        Ok(cli) => cli,
        Err(e) => {
            let _ = write!(stderr, "{}", e.render());
            return if e.use_stderr() { 2 } else { 0 };
        }
    };
    match dispatch(cli.command, stdout, stderr) {
        Ok(()) => 0,
        Err(CliError::Usage(m)) => {
            let _ = writeln!(stderr, "error: {m}");
            2
        }
        Err(CliError::Run(m)) => {
            let _ = writeln!(stderr, "error: {m}");
            1
        }
    }
}

fn dispatch(command: Command, stdout: &mut dyn Write, stderr: &mut dyn Write) -> Result<(), CliError> {
    match command {
        Command::Bench(a) => bench(a, stdout, stderr),
        Command::CompareThresholds(a) => compare(a, stdout, stderr),
        Command::Rotations(a) => rotations(a, stdout, stderr),
        Command::AssignDump(a) => assign_dump(a, stdout),
    }
}

/// Runs `emit` against stdout, or against `dir/name.ext` when a directory is given.
fn emit_to(
    dir: Option<&Path>,
    name: &str,
    format: OutputFormat,
    stdout: &mut dyn Write,
    stderr: &mut dyn Write,
    emit: impl FnOnce(&mut dyn Write) -> io::Result<()>,
) -> Result<(), CliError> {
    match dir {
        None => Ok(emit(stdout)?),
        Some(dir) => {
            fs::create_dir_all(dir)?;
            let path = dir.join(format!("{name}.{}", format.extension()));
            let mut file = BufWriter::new(File::create(&path)?);
            emit(&mut file)?;
            file.flush()?;
            writeln!(stderr, "wrote {}", path.display())?;
            Ok(())
        }
    }
}

fn bench(a: BenchArgs, stdout: &mut dyn Write, stderr: &mut dyn Write) -> Result<(), CliError> {
    let schemes = parse_schemes(&a.schemes, a.ratio).map_err(CliError::Usage)?;
    let config = ExperimentConfig {
        widths: a.bits.0.clone(),
        trials: a.common.trials,
        schemes,
        base_seed: a.common.seed,
        accounting: a.common.accounting.into(),
        mode: a.common.mode.into(),
    };
    let results = run_experiment(&config, a.common.jobs())?;
    let rows = experiment_rows(&results);
    let format = a.common.out.into();
    emit_to(a.common.output_dir.as_deref(), "bench", format, stdout, stderr, |w| {
        write_output_rows(w, &rows, format)
    })
}

fn compare(a: CompareArgs, stdout: &mut dyn Write, stderr: &mut dyn Write) -> Result<(), CliError> {
    let nodes = match (a.nodes, a.bits) {
        (Some(n), _) => n,
        (None, Some(w)) if (3..=63).contains(&w) => crate::harness::nodes_for_width(w),
        (None, Some(w)) => return Err(CliError::Usage(format!("width {w} outside 3..=63"))),
        (None, None) => unreachable!("clap requires one of them"),
    };
    if nodes < 1 {
        return Err(CliError::Usage("--nodes must be at least 1".into()));
    }
    if a.ratios.is_empty() {
        return Err(CliError::Usage("no ratios given".into()));
    }
    if a.emit_thresholds {
        let height = tree_height_estimate(nodes).map_err(|e| CliError::Usage(e.to_string()))?;
        let levels = a
            .ratios
            .iter()
            .map(|&r| Threshold::for_nodes(nodes, r).map(|t| t.level.to_string()))
            .collect::<Result<Vec<_>, _>>()
            .map_err(|e| CliError::Usage(e.to_string()))?;
        writeln!(stdout, "H={height}, T={{{}}}", levels.join(","))?;
        return Ok(());
    }
    let options = CompareOptions {
        ratios: a.ratios.clone(),
        trials: a.common.trials,
        base_seed: a.common.seed,
        accounting: a.common.accounting.into(),
        mode: a.common.mode.into(),
        jobs: a.common.jobs(),
    };
    let results = compare_thresholds(nodes, &options)?;
    let rows = threshold_rows(results.values(), a.common.seed);
    let format = a.common.out.into();
    emit_to(
        a.common.output_dir.as_deref(),
        "compare_thresholds",
        format,
        stdout,
        stderr,
        |w| write_output_rows(w, &rows, format),
    )
}

fn rotations(a: RotationsArgs, stdout: &mut dyn Write, stderr: &mut dyn Write) -> Result<(), CliError> {
    if let Some(w) = a.bits.0.iter().find(|w| !(3..=63).contains(*w)) {
        return Err(CliError::Usage(format!("width {w} outside 3..=63")));
    }
    let format: OutputFormat = a.common.out.into();
    let mut combined = Vec::new();
    for &width in &a.bits.0 {
        let doubles = if a.count_double_once {
            DoubleRotationCount::Once
        } else {
            DoubleRotationCount::Decomposed
        };
        let histogram = rotations_histogram_with(width, a.common.trials, a.common.seed, a.common.jobs(), doubles)?;
        let rows = rotation_rows(width, &histogram, a.common.seed);
        match a.common.output_dir.as_deref() {
            Some(dir) => emit_to(Some(dir), &format!("rotations_w{width}"), format, stdout, stderr, |w| {
                write_rotation_rows(w, &rows, format)
            })?,
            None => combined.extend(rows),
        }
    }
    if a.common.output_dir.is_none() {
        write_rotation_rows(stdout, &combined, format)?;
    }
    Ok(())
}

/// Keys `0..n` in breadth-first order of the balanced tree over them.
fn level_order_keys(n: u64) -> Vec<i64> {
    let mut out = Vec::with_capacity(n as usize);
    let mut queue = std::collections::VecDeque::from([(0i64, n as i64)]);
    while let Some((lo, hi)) = queue.pop_front() {
        if lo < hi {
            let mid = lo + (hi - lo) / 2;
            out.push(mid);
            queue.push_back((lo, mid));
            queue.push_back((mid + 1, hi));
        }
    }
    out
}

fn assign_dump(a: DumpArgs, stdout: &mut dyn Write) -> Result<(), CliError> {
    if a.nodes == 0 || a.nodes > DUMP_LIMIT {
        return Err(CliError::Usage(format!("--nodes must be in 1..={DUMP_LIMIT}")));
    }
    let width = match a.bits {
        Some(w) => w,
        None => tree_height_estimate(a.nodes).map_err(|e| CliError::Usage(e.to_string()))? + 2,
    };
    let mut config = SchemeConfig::new(Scheme::hart(a.ratio), width);
    if let Some(c) = a.depth_capacity {
        config = config.with_depth_capacity(c);
    }
    let usage = |e: crate::addressing::AddressError| CliError::Usage(e.to_string());
    let mut addressing = Addressing::new(config, a.nodes).map_err(usage)?;
    let keys = match a.order {
        OrderArg::Level => level_order_keys(a.nodes),
        OrderArg::Ascending => (0..a.nodes as i64).collect(),
        OrderArg::Shuffled => gen_dataset(a.nodes, a.seed)?,
    };
    let mut tree = AvlTree::new();
    for k in keys {
        tree.insert(k).map_err(|e| CliError::Run(e.to_string()))?;
    }
    // Addresses are assigned on the final shape, in insertion order.
    for id in tree.node_ids().collect::<Vec<_>>() {
        let path = tree.path_of(tree.key(id)).map_err(|e| CliError::Run(e.to_string()))?;
        addressing
            .assign_address(id, &path)
            .map_err(|e| CliError::Run(e.to_string()))?;
    }

    let capacity = config.depth_capacity();
    let rows: Vec<DumpRow> = tree
        .preorder()
        .into_iter()
        .map(|(id, path)| {
            let assignment = addressing.assignment(id).expect("every node is addressed");
            DumpRow {
                key: tree.key(id),
                level: path.level(),
                region: region_tag(SchemeKind::Hart, assignment.origin).to_string(),
                dfat_rank: Alternation::default().rank(&path, capacity).ok(),
                address: format!("{:0w$b}", assignment.address, w = width as usize),
            }
        })
        .collect();
    Ok(write_dump_rows(stdout, &rows, a.out.into())?)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn bit_lists() {
        assert_eq!(parse_bits("8").unwrap().0, vec![8]);
        assert_eq!(parse_bits("8,15").unwrap().0, vec![8, 15]);
        assert_eq!(parse_bits("8-11").unwrap().0, vec![8, 9, 10, 11]);
        assert_eq!(parse_bits("12,8-9,9").unwrap().0, vec![8, 9, 12]);
        assert!(parse_bits("9-8").is_err());
        assert!(parse_bits("x").is_err());
    }

    #[test]
    fn scheme_lists() {
        let half = Ratio::new(1, 2);
        assert_eq!(parse_schemes("all", half).unwrap().len(), 5);
        let two = parse_schemes("dfat-gray,hart", Ratio::new(1, 4)).unwrap();
        assert_eq!(two, vec![Scheme::dfat_gray(), Scheme::hart(Ratio::new(1, 4))]);
        assert!(parse_schemes("dfat", half).is_err());
    }

    #[test]
    fn balanced_key_order() {
        assert_eq!(level_order_keys(7), vec![3, 1, 5, 0, 2, 4, 6]);
        let mut tree = AvlTree::new();
        for k in level_order_keys(100) {
            assert!(tree.insert(k).unwrap().is_empty());
        }
    }
}
