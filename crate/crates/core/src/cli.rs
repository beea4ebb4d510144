//! `qfs` command-line front end.
//!
//! Exit codes: 0 success, 1 a negative verdict (invalid step, no Clifford
//! transform, failed round trip), 2 usage or input errors, 3 size-guard
//! violations.

use std::io::Write;
use std::path::{Path, PathBuf};

use clap::{Args, Parser, Subcommand, ValueEnum};

use crate::analysis::{
    fractal_dimension, lu_equivalent_by_local_clifford, probability_scaling_ratio,
    product_cut_report, uniform_probability, verify_scale_step,
};
use crate::codes::{decode_majority, encode, inject_errors, roundtrip_check, CodeSpec};
use crate::constructors::{
    build_bitflip_state, build_cantor, build_cluster, build_gem_sequence, build_representative,
    checked_pow, ScaleRule, Sign, MAX_QUDITS,
};
use crate::io::{
    read_rule, read_state, render_ascii, render_svg, serialize_rule, write_atomic, write_state,
};
use crate::statecore::SparseState;
use crate::{Error, Result};

#[derive(Parser, Debug)]
#[command(
    name = "qfs",
    version,
    about = "Build and analyze self-similar multi-qudit states"
)]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand, Debug)]
enum Command {
    /// Generate a state from one of the built-in families.
    Gen(GenArgs),
    /// Print the fractal dimension for (c, s).
    Dim {
        #[arg(long)]
        c: u64,
        #[arg(long)]
        s: u64,
    },
    /// Check that NEXT is PREV advanced by RULE.
    VerifyStep {
        #[arg(long)]
        prev: PathBuf,
        #[arg(long)]
        next: PathBuf,
        #[arg(long)]
        rule: PathBuf,
    },
    /// Summarize a state: norm, support, uniform probability, Schmidt ranks.
    Analyze {
        #[arg(long)]
        state: PathBuf,
        #[arg(long = "cut")]
        cuts: Vec<usize>,
    },
    /// Computational-basis probability ratios across a sequence of states.
    Scaling {
        #[arg(long, num_args = 1.., required = true)]
        states: Vec<PathBuf>,
    },
    /// Concatenated-code operations.
    Code(CodeArgs),
    /// Search for a local Clifford map from A to B.
    Lucheck {
        #[arg(long)]
        a: PathBuf,
        #[arg(long)]
        b: PathBuf,
    },
    /// Render the support of one or more states as interval bars.
    Viz {
        #[arg(long = "state", required = true)]
        states: Vec<PathBuf>,
        #[arg(long, conflicts_with = "ascii", required_unless_present = "ascii")]
        svg: Option<PathBuf>,
        #[arg(long)]
        ascii: bool,
    },
}

#[derive(Copy, Clone, Debug, PartialEq, Eq, ValueEnum)]
enum Family {
    Representative,
    Cantor,
    Bellgem,
    Bitflip,
    Cluster,
}

#[derive(Args, Debug)]
struct GenArgs {
    #[arg(long, value_enum)]
    family: Family,
    #[arg(long)]
    c: Option<u64>,
    #[arg(long)]
    s: Option<u64>,
    /// Scale index (levels for bellgem).
    #[arg(long)]
    n: Option<u64>,
    /// `plus`/`+` or `minus`/`-` (bellgem).
    #[arg(long, allow_hyphen_values = true)]
    sign: Option<String>,
    #[arg(long)]
    logical: Option<u32>,
    #[arg(long)]
    qubits: Option<usize>,
    /// Local dimension for the representative family (default max(s, 2)).
    #[arg(long)]
    local_dim: Option<u32>,
    #[arg(short = 'o', long = "out")]
    out: PathBuf,
    /// Also write the rule taking the previous scale to this one.
    #[arg(long)]
    rule_out: Option<PathBuf>,
}

#[derive(Copy, Clone, Debug, PartialEq, Eq, ValueEnum)]
enum CodeOp {
    Encode,
    Inject,
    Decode,
    Roundtrip,
}

#[derive(Args, Debug)]
struct CodeArgs {
    #[arg(value_enum)]
    op: CodeOp,
    /// `bitflip:LEVELS` or `bellpair:LEVELS`.
    #[arg(long)]
    spec: String,
    #[arg(long)]
    state: PathBuf,
    /// Comma-separated qubit positions.
    #[arg(long, value_delimiter = ',')]
    errors: Vec<usize>,
    #[arg(short = 'o', long = "out")]
    out: Option<PathBuf>,
}

fn usage(msg: impl Into<String>) -> Error {
    Error::InvalidParams(msg.into())
}

fn exit_code(err: &Error) -> i32 {
    match err {
        Error::Guard(_) => 3,
        _ => 2,
    }
}

/// Runs the CLI on `argv` (including the program name).
pub fn run<I, S>(argv: I, out: &mut dyn Write, err: &mut dyn Write) -> i32
where
    I: IntoIterator<Item = S>,
    S: Into<std::ffi::OsString> + Clone,
{
    let cli = match Cli::try_parse_from(argv) {
        Ok(c) => c,
        Err(e) => {
            let code = if e.use_stderr() { 2 } else { 0 };
            let text = e.render().to_string();
            if code == 0 {
                let _ = write!(out, "{text}");
            } else {
                let _ = write!(err, "{text}");
            }
            return code;
        }
    };
    match dispatch(cli.command, out) {
        Ok(code) => code,
        Err(e) => {
            let _ = writeln!(err, "error: {e}");
            exit_code(&e)
        }
    }
}

fn dispatch(cmd: Command, out: &mut dyn Write) -> Result<i32> {
    match cmd {
        Command::Gen(args) => gen(args, out),
        Command::Dim { c, s } => {
            let d: f64 = fractal_dimension(c, s)?;
            emit(out, format_args!("{d:.12}\n"))?;
            Ok(0)
        }
        Command::VerifyStep { prev, next, rule } => {
            let report =
                verify_scale_step(&read_state(&prev)?, &read_state(&next)?, &read_rule(&rule)?);
            emit(out, format_args!("{report}"))?;
            Ok(if report.valid { 0 } else { 1 })
        }
        Command::Analyze { state, cuts } => analyze(&read_state(&state)?, &cuts, out),
        Command::Scaling { states } => {
            let seq = states
                .iter()
                .map(|p| read_state(p))
                .collect::<Result<Vec<_>>>()?;
            let report = probability_scaling_ratio(&seq)?;
            emit(out, format_args!("{report}"))?;
            Ok(0)
        }
        Command::Code(args) => code(args, out),
        Command::Lucheck { a, b } => {
            match lu_equivalent_by_local_clifford::<f64>(&read_state(&a)?, &read_state(&b)?)? {
                Some(t) => {
                    let words: Vec<String> = t.gates.iter().map(|g| g.to_string()).collect();
                    emit(
                        out,
                        format_args!(
                            "equivalent: true\ngates: {}\nfidelity: {:.12}\n",
                            words.join(" "),
                            t.fidelity
                        ),
                    )?;
                    Ok(0)
                }
                None => {
                    emit(out, format_args!("equivalent: false\n"))?;
                    Ok(1)
                }
            }
        }
        Command::Viz { states, svg, ascii } => {
            let loaded = states
                .iter()
                .map(|p| read_state(p))
                .collect::<Result<Vec<_>>>()?;
            let rows: Vec<(String, &SparseState)> = states
                .iter()
                .zip(&loaded)
                .map(|(p, s)| (row_label(p, s), s))
                .collect();
            if ascii {
                emit(out, format_args!("{}", render_ascii(&rows)?))?;
            } else if let Some(path) = svg {
                write_atomic(&path, &render_svg(&rows)?)?;
            }
            Ok(0)
        }
    }
}

fn emit(out: &mut dyn Write, args: std::fmt::Arguments<'_>) -> Result<()> {
    out.write_fmt(args).map_err(|source| Error::Io {
        path: PathBuf::from("<stdout>"),
        source,
    })
}

fn row_label(path: &Path, state: &SparseState) -> String {
    match state.provenance() {
        Some(p) => format!("{} n={}", p.family, p.n),
        None => path
            .file_name()
            .map(|n| n.to_string_lossy().into_owned())
            .unwrap_or_default(),
    }
}

fn need<T>(v: Option<T>, flag: &str, family: &str) -> Result<T> {
    v.ok_or_else(|| usage(format!("--{flag} is required for --family {family}")))
}

fn gen(args: GenArgs, out: &mut dyn Write) -> Result<i32> {
    let (state, rule) = match args.family {
        Family::Representative => {
            let c = need(args.c, "c", "representative")?;
            let s = need(args.s, "s", "representative")?;
            let n = need(args.n, "n", "representative")?;
            let nd = args.local_dim.unwrap_or(s.max(2) as u32);
            let st = build_representative(c, s, n, nd)?;
            let rule = rule_for(
                args.rule_out.is_some(),
                n,
                |prev_q| ScaleRule::representative(c as usize, s as usize, prev_q),
                c,
            )?;
            (st, rule)
        }
        Family::Cantor => {
            let n = need(args.n, "n", "cantor")?;
            let rule = rule_for(args.rule_out.is_some(), n, ScaleRule::cantor, 2)?;
            (build_cantor(n)?, rule)
        }
        Family::Bitflip => {
            let n = need(args.n, "n", "bitflip")?;
            let i = args.logical.unwrap_or(0);
            let rule = rule_for(args.rule_out.is_some(), n, |q| ScaleRule::bitflip(i, q), 3)?;
            (build_bitflip_state(n, i)?, rule)
        }
        Family::Bellgem => {
            let m = need(args.n, "n", "bellgem")?;
            let sign: Sign = args.sign.as_deref().unwrap_or("plus").parse()?;
            let levels = u32::try_from(m).map_err(|_| usage("level count too large"))?;
            let (plus, minus) = build_gem_sequence(levels)?;
            let st = if sign == Sign::Plus { plus } else { minus };
            let rule = if args.rule_out.is_some() {
                if levels < 2 {
                    return Err(usage("--rule-out needs --n >= 2 for bellgem"));
                }
                let (prev_plus, _) = build_gem_sequence(levels - 1)?;
                Some(ScaleRule::gem(prev_plus, sign)?)
            } else {
                None
            };
            (st, rule)
        }
        Family::Cluster => {
            if args.rule_out.is_some() {
                return Err(usage("--rule-out is not available for --family cluster"));
            }
            (
                build_cluster(need(args.qubits, "qubits", "cluster")?)?,
                None,
            )
        }
    };
    write_state(&args.out, &state)?;
    if let (Some(path), Some(rule)) = (args.rule_out, rule) {
        let text = serialize_rule(&rule, |named| {
            let stem = path
                .file_stem()
                .map(|s| s.to_string_lossy().into_owned())
                .unwrap_or_else(|| "rule".into());
            let file = format!("{stem}.named.qfs");
            write_state(&path.with_file_name(&file), named)?;
            Ok(file)
        })?;
        write_atomic(&path, &text)?;
    }
    emit(
        out,
        format_args!(
            "wrote {} ({} qudits, {} entries)\n",
            args.out.display(),
            state.num_qudits(),
            state.support_size()
        ),
    )?;
    Ok(0)
}

/// The rule taking scale `n-1` (with `c^{n-1}` qudits) to scale `n`.
fn rule_for(
    wanted: bool,
    n: u64,
    make: impl FnOnce(usize) -> Result<ScaleRule>,
    c: u64,
) -> Result<Option<ScaleRule>> {
    if !wanted {
        return Ok(None);
    }
    if n == 0 {
        return Err(usage("--rule-out needs --n >= 1"));
    }
    let q = checked_pow(c, n - 1, MAX_QUDITS as u64)
        .ok_or_else(|| Error::guard(format!("{c}^{} qudits", n - 1)))?;
    make(q as usize).map(Some)
}

fn analyze(state: &SparseState, cuts: &[usize], out: &mut dyn Write) -> Result<i32> {
    let mut text = String::new();
    use std::fmt::Write as _;
    writeln!(text, "local_dim: {}", state.local_dim()).unwrap();
    writeln!(text, "num_qudits: {}", state.num_qudits()).unwrap();
    writeln!(text, "phase_order: {}", state.phase_order()).unwrap();
    match state.provenance() {
        Some(p) => {
            writeln!(
                text,
                "provenance: family={} c={} s={} n={}",
                p.family, p.c, p.s, p.n
            )
            .unwrap();
            let d: f64 = fractal_dimension(p.c, p.s)?;
            writeln!(text, "dimension: {d:.12}").unwrap();
        }
        None => writeln!(text, "provenance: none").unwrap(),
    }
    writeln!(text, "norm_squared: {}", state.norm_squared()).unwrap();
    writeln!(text, "support: {}", state.support_size()).unwrap();
    match uniform_probability(state) {
        Some(p) => writeln!(text, "uniform_probability: {p}").unwrap(),
        None => writeln!(text, "uniform_probability: none").unwrap(),
    }
    for (k, r) in product_cut_report(state, cuts)? {
        writeln!(text, "schmidt_rank[{k}]: {r}").unwrap();
    }
    emit(out, format_args!("{text}"))?;
    Ok(0)
}

fn code(args: CodeArgs, out: &mut dyn Write) -> Result<i32> {
    let spec: CodeSpec = args.spec.parse()?;
    let state = read_state(&args.state)?;
    let write_out = |st: &SparseState| -> Result<()> {
        let path = args
            .out
            .as_ref()
            .ok_or_else(|| usage("-o/--out is required for this operation"))?;
        write_state(path, st)
    };
    match args.op {
        CodeOp::Encode => {
            let enc = encode(&state, &spec)?;
            write_out(&enc)?;
            emit(
                out,
                format_args!(
                    "encoded {} -> {} qubits\n",
                    state.num_qudits(),
                    enc.num_qudits()
                ),
            )?;
        }
        CodeOp::Inject => {
            write_out(&inject_errors(&state, &args.errors)?)?;
            emit(
                out,
                format_args!("flipped {} positions\n", args.errors.len()),
            )?;
        }
        CodeOp::Decode => {
            let rep = decode_majority(&state, &spec)?;
            write_out(&rep.decoded)?;
            let fixes: Vec<String> = rep
                .corrections
                .iter()
                .map(|(l, b)| format!("L{l}:{b}"))
                .collect();
            emit(
                out,
                format_args!(
                    "success: {}\ncorrections: {}\n",
                    rep.success,
                    if fixes.is_empty() {
                        "none".into()
                    } else {
                        fixes.join(" ")
                    }
                ),
            )?;
        }
        CodeOp::Roundtrip => {
            let ok = roundtrip_check(&state, &spec, &args.errors)?;
            emit(out, format_args!("roundtrip: {ok}\n"))?;
            return Ok(if ok { 0 } else { 1 });
        }
    }
    Ok(0)
}
