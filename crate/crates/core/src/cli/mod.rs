//! The `edit-mbr` command line.
//!
//! Exit status is 0 on success, 1 for usage errors and 2 for data errors
//! (unreadable, mismatched or malformed inputs).

mod manifest;

use std::ffi::OsString;
use std::io::Write;
use std::path::{Path, PathBuf};

use clap::{Args, Parser, Subcommand, ValueEnum};
use serde::Serialize;

use crate::combine::{combine_corpus, CombineConfig, CombineResult, RewardSetSpec, Strategy};
use crate::corpus::{load_hypothesis, load_parallel, read_sentences};
use crate::edit::{extract_edits_with, EditSet, MergeMode};
use crate::error::{Error, Result};
use crate::m2::{emit_m2, read_m2, M2Entry};
use crate::rewards::{RewardConfig, RewardKind};
use crate::score::score_corpus;

pub use manifest::{file_digest, FileDigest, RunManifest};

pub const THREADS_ENV: &str = "EDIT_MBR_THREADS";

pub const EXIT_OK: i32 = 0;
pub const EXIT_USAGE: i32 = 1;
pub const EXIT_DATA: i32 = 2;

#[derive(Debug, Parser)]
#[command(name = "edit-mbr", version, about = "Combine grammatical error correction outputs by MBR decoding over edit sets")]
struct Cli {
    /// Worker threads for per-sentence work (0 = all cores). Overridden by
    /// EDIT_MBR_THREADS.
    #[arg(long, global = true, default_value_t = 0)]
    threads: usize,

    #[command(subcommand)]
    command: Command,
}

#[derive(Debug, Subcommand)]
enum Command {
    /// Extract edits from a source/hypothesis pair and write them as M2.
    Extract(ExtractArgs),
    /// Combine several hypothesis files into one output.
    Combine(CombineArgs),
    /// Score a hypothesis file against M2 references.
    Score(ScoreArgs),
    /// Apply annotator 0's edits from an M2 file to the sources.
    Apply(ApplyArgs),
}

#[derive(Debug, Args)]
struct ExtractArgs {
    #[arg(long, short = 's')]
    source: PathBuf,
    #[arg(long)]
    hyp: PathBuf,
    /// Output file (stdout when omitted).
    #[arg(long, short = 'o')]
    out: Option<PathBuf>,
    /// One edit per alignment operation instead of merging adjacent ones.
    #[arg(long)]
    no_merge: bool,
    /// Where to write the run manifest (default: `<out>.manifest.json`).
    #[arg(long)]
    manifest: Option<PathBuf>,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
enum MethodArg {
    Mbr,
    MbrVote,
    Greedy,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
enum RewardArg {
    Recall,
    Precision,
    F,
    FPaper,
    Jaccard,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
enum RewardSetArg {
    Base,
    #[value(name = "base+votes")]
    BaseVotes,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
enum OutFormat {
    Text,
    M2,
}

#[derive(Debug, Args)]
struct CombineArgs {
    #[arg(long, short = 's')]
    source: PathBuf,
    /// Hypothesis files, text or M2 (by `.m2` extension).
    #[arg(long, required = true, num_args = 1..)]
    hyp: Vec<PathBuf>,
    #[arg(long, short = 'o')]
    out: Option<PathBuf>,
    #[arg(long, value_enum, default_value = "mbr")]
    method: MethodArg,
    #[arg(long, value_enum, default_value = "f")]
    reward: RewardArg,
    /// β for `f`, k for `f-paper`.
    #[arg(long, default_value_t = 0.5)]
    beta: f64,
    /// Minimum votes for an edit to enter the greedy pool.
    #[arg(long, default_value_t = 2)]
    pool_votes: usize,
    #[arg(long, value_enum, default_value = "base")]
    reward_set: RewardSetArg,
    #[arg(long, value_enum, default_value = "text")]
    out_format: OutFormat,
    /// Print every candidate's expected reward to stderr.
    #[arg(long)]
    report: bool,
    /// Write one JSON line per greedy insertion.
    #[arg(long)]
    trace: Option<PathBuf>,
    #[arg(long)]
    manifest: Option<PathBuf>,
}

#[derive(Debug, Args)]
struct ScoreArgs {
    #[arg(long, short = 's')]
    source: PathBuf,
    /// Hypothesis file, text or M2.
    #[arg(long)]
    hyp: PathBuf,
    /// Reference M2 file.
    #[arg(long = "ref")]
    reference: PathBuf,
    #[arg(long, default_value_t = 0.5)]
    beta: f64,
    #[arg(long)]
    per_sentence: bool,
    #[arg(long)]
    manifest: Option<PathBuf>,
}

#[derive(Debug, Args)]
struct ApplyArgs {
    #[arg(long, short = 's')]
    source: PathBuf,
    #[arg(long)]
    m2: PathBuf,
    #[arg(long, short = 'o')]
    out: Option<PathBuf>,
    #[arg(long)]
    manifest: Option<PathBuf>,
}

/// Runs the CLI with explicit argument list and output streams; returns
/// the exit status.
pub fn run<I, T>(args: I, stdout: &mut dyn Write, stderr: &mut dyn Write) -> i32
where
    I: IntoIterator<Item = T>,
    T: Into<OsString> + Clone,
{
    let cli = match Cli::try_parse_from(args) {
        Ok(cli) => cli,
        Err(e) => {
            use clap::error::ErrorKind;
            let text = e.render().to_string();
            return match e.kind() {
                ErrorKind::DisplayHelp | ErrorKind::DisplayVersion => {
                    let _ = write!(stdout, "{text}");
                    EXIT_OK
                }
                _ => {
                    let _ = write!(stderr, "{text}");
                    EXIT_USAGE
                }
            };
        }
    };
    let threads = match std::env::var(THREADS_ENV) {
        Ok(v) => match v.trim().parse::<usize>() {
            Ok(n) => n,
            Err(_) => {
                let _ = writeln!(stderr, "error: {THREADS_ENV}={v:?} is not a thread count");
                return EXIT_USAGE;
            }
        },
        Err(_) => cli.threads,
    };

    let outcome = match cli.command {
        Command::Extract(a) => cmd_extract(&a, stdout),
        Command::Combine(a) => cmd_combine(&a, threads, stdout, stderr),
        Command::Score(a) => cmd_score(&a, stdout),
        Command::Apply(a) => cmd_apply(&a, stdout),
    };
    match outcome {
        Ok(()) => EXIT_OK,
        Err(CliError::Usage(msg)) => {
            let _ = writeln!(stderr, "error: {msg}");
            EXIT_USAGE
        }
        Err(CliError::Data(e)) => {
            let _ = writeln!(stderr, "error: {e}");
            EXIT_DATA
        }
    }
}

enum CliError {
    Usage(String),
    Data(Error),
}

impl From<Error> for CliError {
    fn from(e: Error) -> Self {
        CliError::Data(e)
    }
}

type CliResult = std::result::Result<(), CliError>;

fn write_output(path: Option<&Path>, content: &str, stdout: &mut dyn Write) -> Result<()> {
    match path {
        Some(p) => std::fs::write(p, content).map_err(|e| Error::io(p, e)),
        None => stdout
            .write_all(content.as_bytes())
            .map_err(|e| Error::io("<stdout>", e)),
    }
}

fn path_arg(p: &Path) -> String {
    p.display().to_string()
}

fn finish_manifest(
    manifest_path: Option<&Path>,
    out: Option<&Path>,
    command: &str,
    args: Vec<String>,
    config: serde_json::Value,
    inputs: &[&Path],
) -> Result<()> {
    let target = match (manifest_path, out) {
        (Some(m), _) => m.to_owned(),
        (None, Some(o)) => RunManifest::default_path(o),
        (None, None) => return Ok(()),
    };
    let manifest = RunManifest::build(command, args, config, inputs, out)?;
    manifest.write(&target)
}

fn cmd_extract(a: &ExtractArgs, stdout: &mut dyn Write) -> CliResult {
    let sources = read_sentences(&a.source)?;
    let hyps = read_sentences(&a.hyp)?;
    if sources.len() != hyps.len() {
        return Err(Error::LengthMismatch {
            expected_path: a.source.clone(),
            expected: sources.len(),
            path: a.hyp.clone(),
            found: hyps.len(),
        }
        .into());
    }
    let mode = if a.no_merge { MergeMode::None } else { MergeMode::All };
    let entries: Vec<M2Entry> = sources
        .into_iter()
        .zip(&hyps)
        .map(|(s, h)| {
            let edits = extract_edits_with(&s, h, mode);
            M2Entry::single(s, edits)
        })
        .collect();
    write_output(a.out.as_deref(), &emit_m2(&entries), stdout)?;

    let mut args = vec![
        "extract".into(),
        "--source".into(),
        path_arg(&a.source),
        "--hyp".into(),
        path_arg(&a.hyp),
    ];
    if let Some(o) = &a.out {
        args.extend(["--out".into(), path_arg(o)]);
    }
    if a.no_merge {
        args.push("--no-merge".into());
    }
    let config = serde_json::json!({ "merge": if a.no_merge { "none" } else { "all" } });
    finish_manifest(
        a.manifest.as_deref(),
        a.out.as_deref(),
        "extract",
        args,
        config,
        &[&a.source, &a.hyp],
    )?;
    Ok(())
}

fn combine_config(a: &CombineArgs) -> std::result::Result<CombineConfig, CliError> {
    let kind = match a.reward {
        RewardArg::Recall => "recall",
        RewardArg::Precision => "precision",
        RewardArg::F => "f",
        RewardArg::FPaper => "f-paper",
        RewardArg::Jaccard => "jaccard",
    };
    let kind = RewardKind::from_name(kind, a.beta).map_err(|e| CliError::Usage(e.to_string()))?;
    let strategy = match a.method {
        MethodArg::Mbr => Strategy::Mbr,
        MethodArg::MbrVote => Strategy::MbrVote,
        MethodArg::Greedy => Strategy::Greedy,
    };
    let reward_set = match a.reward_set {
        RewardSetArg::Base => RewardSetSpec::Base,
        RewardSetArg::BaseVotes => RewardSetSpec::BaseAndVotes,
    };
    let config = CombineConfig {
        strategy,
        reward: RewardConfig::new(kind).map_err(|e| CliError::Usage(e.to_string()))?,
        reward_set,
        pool_votes: a.pool_votes,
        priority: Vec::new(),
    };
    config.validate().map_err(|e| CliError::Usage(e.to_string()))?;
    Ok(config)
}

#[derive(Serialize)]
struct TraceRecord<'a> {
    sentence: usize,
    edit: TraceEdit<'a>,
    before: String,
    after: String,
}

#[derive(Serialize)]
struct TraceEdit<'a> {
    start: usize,
    end: usize,
    replacement: &'a [String],
}

fn cmd_combine(a: &CombineArgs, threads: usize, stdout: &mut dyn Write, stderr: &mut dyn Write) -> CliResult {
    let config = combine_config(a)?;
    let corpus = load_parallel(&a.source, &a.hyp)?;
    let results = combine_corpus(&corpus, &config, threads)?;

    let mut out = String::new();
    let mut entries = Vec::new();
    for (entry, result) in corpus.entries().iter().zip(&results) {
        let edits = result.chosen.edit_set();
        match a.out_format {
            OutFormat::Text => {
                out.push_str(&edits.apply(&entry.source)?.to_string());
                out.push('\n');
            }
            OutFormat::M2 => entries.push(M2Entry::single(entry.source.clone(), edits.clone())),
        }
    }
    if a.out_format == OutFormat::M2 {
        out = emit_m2(&entries);
    }
    write_output(a.out.as_deref(), &out, stdout)?;

    if a.report {
        let _ = stderr.write_all(render_report(&results).as_bytes());
    }
    if let Some(path) = &a.trace {
        std::fs::write(path, render_trace(&results)).map_err(|e| Error::io(path, e))?;
    }

    let mut args = vec!["combine".into(), "--source".into(), path_arg(&a.source), "--hyp".into()];
    args.extend(a.hyp.iter().map(|p| path_arg(p)));
    if let Some(o) = &a.out {
        args.extend(["--out".into(), path_arg(o)]);
    }
    args.extend([
        "--method".into(),
        config.strategy.name().into(),
        "--reward".into(),
        config.reward.kind.name().into(),
        "--beta".into(),
        a.beta.to_string(),
        "--pool-votes".into(),
        config.pool_votes.to_string(),
        "--reward-set".into(),
        config.reward_set.name().into(),
        "--out-format".into(),
        match a.out_format {
            OutFormat::Text => "text".into(),
            OutFormat::M2 => "m2".into(),
        },
    ]);
    if let Some(t) = &a.trace {
        args.extend(["--trace".into(), path_arg(t)]);
    }
    let mut inputs: Vec<&Path> = vec![&a.source];
    inputs.extend(a.hyp.iter().map(PathBuf::as_path));
    let config_json = serde_json::to_value(&config).expect("config serializes");
    finish_manifest(a.manifest.as_deref(), a.out.as_deref(), "combine", args, config_json, &inputs)?;
    Ok(())
}

/// One line per selection-set member: sentence, label, expected reward,
/// and `*` on the chosen one.
fn render_report(results: &[CombineResult]) -> String {
    let mut s = String::new();
    for (i, r) in results.iter().enumerate() {
        for (j, c) in r.scores.iter().enumerate() {
            let mark = if j == r.chosen_index { "\t*" } else { "" };
            s.push_str(&format!("{i}\t{}\t{:.6}{mark}\n", c.label, c.expected_reward));
        }
    }
    s
}

fn render_trace(results: &[CombineResult]) -> String {
    let mut s = String::new();
    for (i, r) in results.iter().enumerate() {
        for step in &r.trace {
            let rec = TraceRecord {
                sentence: i,
                edit: TraceEdit {
                    start: step.edit.start,
                    end: step.edit.end,
                    replacement: &step.edit.replacement,
                },
                before: format!("{:.6}", step.before),
                after: format!("{:.6}", step.after),
            };
            s.push_str(&serde_json::to_string(&rec).expect("trace record serializes"));
            s.push('\n');
        }
    }
    s
}

fn cmd_score(a: &ScoreArgs, stdout: &mut dyn Write) -> CliResult {
    if !(a.beta > 0.0 && a.beta.is_finite()) {
        return Err(CliError::Usage(format!("--beta must be positive, got {}", a.beta)));
    }
    let sources = read_sentences(&a.source)?;
    let hyps = load_hypothesis(&sources, &a.source, &a.hyp)?;
    let refs = read_m2(&a.reference)?;
    if refs.len() != sources.len() {
        return Err(Error::LengthMismatch {
            expected_path: a.source.clone(),
            expected: sources.len(),
            path: a.reference.clone(),
            found: refs.len(),
        }
        .into());
    }
    let mut ref_sets = Vec::with_capacity(refs.len());
    for (index, (entry, src)) in refs.iter().zip(&sources).enumerate() {
        if &entry.source != src {
            return Err(Error::in_file(
                &a.reference,
                Error::Sentence {
                    index,
                    message: "reference source differs from the source file".into(),
                },
            )
            .into());
        }
        let mut sets = entry.reference_sets();
        if sets.is_empty() {
            sets.push(EditSet::empty(src.len()));
        }
        ref_sets.push(sets);
    }
    let report = score_corpus(&hyps, &ref_sets, a.beta)?;

    let mut text = String::new();
    if a.per_sentence {
        for (i, s) in report.per_sentence.iter().flatten().enumerate() {
            text.push_str(&format!(
                "{i}\tTP {} FP {} FN {}\tP {:.4} R {:.4} F{} {:.4}\n",
                s.counts.tp, s.counts.fp, s.counts.fn_, s.precision, s.recall, a.beta, s.f
            ));
        }
    }
    text.push_str(&report.summary_line());
    text.push('\n');
    write_output(None, &text, stdout)?;

    if let Some(m) = &a.manifest {
        let mut args = vec![
            "score".into(),
            "--source".into(),
            path_arg(&a.source),
            "--hyp".into(),
            path_arg(&a.hyp),
            "--ref".into(),
            path_arg(&a.reference),
            "--beta".into(),
            a.beta.to_string(),
        ];
        if a.per_sentence {
            args.push("--per-sentence".into());
        }
        let config = serde_json::json!({ "beta": a.beta, "per_sentence": a.per_sentence });
        let mut manifest = RunManifest::build("score", args, config, &[&a.source, &a.hyp, &a.reference], None)?;
        manifest.record_stdout(&text);
        manifest.write(m)?;
    }
    Ok(())
}

fn cmd_apply(a: &ApplyArgs, stdout: &mut dyn Write) -> CliResult {
    let sources = read_sentences(&a.source)?;
    let entries = read_m2(&a.m2)?;
    if entries.len() != sources.len() {
        return Err(Error::LengthMismatch {
            expected_path: a.source.clone(),
            expected: sources.len(),
            path: a.m2.clone(),
            found: entries.len(),
        }
        .into());
    }
    let mut out = String::new();
    for (index, (entry, src)) in entries.iter().zip(&sources).enumerate() {
        if &entry.source != src {
            return Err(Error::in_file(
                &a.m2,
                Error::Sentence {
                    index,
                    message: "M2 source differs from the source file".into(),
                },
            )
            .into());
        }
        out.push_str(&entry.primary_edits().apply(src)?.to_string());
        out.push('\n');
    }
    write_output(a.out.as_deref(), &out, stdout)?;

    let mut args = vec![
        "apply".into(),
        "--source".into(),
        path_arg(&a.source),
        "--m2".into(),
        path_arg(&a.m2),
    ];
    if let Some(o) = &a.out {
        args.extend(["--out".into(), path_arg(o)]);
    }
    finish_manifest(
        a.manifest.as_deref(),
        a.out.as_deref(),
        "apply",
        args,
        serde_json::json!({ "annotator": 0 }),
        &[&a.source, &a.m2],
    )?;
    Ok(())
}
