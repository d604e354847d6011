//! Argument handling and command execution for the `nr-fec` binary.

use std::fs;
use std::io::Write;
use std::path::{Path, PathBuf};

use anyhow::{bail, Context};
use clap::{Args, Parser, Subcommand, ValueEnum};
use nr_fec::bits::{from_hex, to_hex};
use nr_fec::ldpc::decode::SAT;
use nr_fec::polar::chain::{PolarDecoderConfig, PolarDecoderKind};
use nr_fec::polar::decode::DEFAULT_LIST_SIZE;
use nr_fec::sim::report::render_csv;
use nr_fec::sim::{run_campaign, BlerRecord, CampaignConfig, ChainSpec, Link, StopRule};
use nr_fec::{Assets, BaseGraphId, ControlChannel, LdpcAlgorithm, LdpcDecodeConfig};

/// Environment variable consulted when `--assets` is absent.
pub const ASSETS_ENV: &str = "NR_FEC_ASSETS";

#[derive(Debug, Parser)]
#[command(
    name = "nr-fec",
    version,
    about = "5G NR LDPC and polar channel coding: single frames, BLER campaigns, asset checks"
)]
struct Cli {
    #[command(subcommand)]
    command: Cmd,
}

#[derive(Debug, Subcommand)]
enum Cmd {
    /// Encode one LDPC transport block given as hex.
    LdpcEncode(FrameArgs),
    /// Decode one LDPC frame from hex hard bits or an LLR file.
    LdpcDecode(FrameArgs),
    /// Encode one polar control payload given as hex.
    PolarEncode(FrameArgs),
    /// Decode one polar frame from hex hard bits or an LLR file.
    PolarDecode(FrameArgs),
    /// Run a BPSK/AWGN BLER campaign and write CSV.
    Simulate(SimArgs),
    /// Load the asset tables, check their invariants and print the content hash.
    ValidateAssets(AssetArgs),
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum ChainKind {
    Ldpc,
    Polar,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum DecoderName {
    Spa,
    Msa,
    Nmsa,
    Omsa,
    Layered,
    Sc,
    Scl,
    Cascl,
}

impl DecoderName {
    fn chain(self) -> ChainKind {
        match self {
            Self::Sc | Self::Scl | Self::Cascl => ChainKind::Polar,
            _ => ChainKind::Ldpc,
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum BgChoice {
    Auto,
    #[value(name = "1")]
    One,
    #[value(name = "2")]
    Two,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum ChannelName {
    Dci,
    Uci,
    Bch,
}

impl From<ChannelName> for ControlChannel {
    fn from(c: ChannelName) -> Self {
        match c {
            ChannelName::Dci => Self::Dci,
            ChannelName::Uci => Self::Uci,
            ChannelName::Bch => Self::Bch,
        }
    }
}

#[derive(Debug, Clone, Args)]
struct AssetArgs {
    /// Directory holding the asset CSVs; the bundled tables are used when unset.
    #[arg(long, env = ASSETS_ENV, value_name = "DIR")]
    assets: Option<PathBuf>,
}

#[derive(Debug, Clone, Args)]
struct CodeArgs {
    /// Payload bits.
    #[arg(long = "A", value_name = "BITS")]
    a: Option<usize>,
    /// LDPC rate-matched length.
    #[arg(long = "G", value_name = "BITS")]
    g: Option<usize>,
    /// Polar rate-matched length.
    #[arg(long = "E", value_name = "BITS")]
    e: Option<usize>,
    /// LDPC target rate; sets G = round(A/rate) when --G is absent.
    #[arg(long)]
    rate: Option<f64>,
    /// LDPC redundancy version.
    #[arg(long, default_value_t = 0)]
    rv: usize,
    /// LDPC base graph.
    #[arg(long, value_enum, default_value_t = BgChoice::Auto)]
    bg: BgChoice,
    /// Polar control channel.
    #[arg(long, value_enum, default_value_t = ChannelName::Dci)]
    channel: ChannelName,
    /// Polar code blocks (1 or 2).
    #[arg(long, default_value_t = 1)]
    segments: usize,
    /// Decoder; nmsa for LDPC and cascl for polar when unset.
    #[arg(long, value_enum)]
    decoder: Option<DecoderName>,
    /// SCL / CA-SCL list size.
    #[arg(long, default_value_t = DEFAULT_LIST_SIZE)]
    list_size: usize,
    /// NMSA scaling factor.
    #[arg(long, default_value_t = 0.75)]
    alpha: f64,
    /// OMSA offset.
    #[arg(long, default_value_t = 0.15)]
    beta: f64,
    /// LDPC iteration cap; 25 flooding, 12 layered when unset.
    #[arg(long)]
    max_iter: Option<usize>,
    /// Min-sum f function in polar decoding.
    #[arg(long)]
    approx: bool,
}

#[derive(Debug, Clone, Args)]
struct FrameArgs {
    #[command(flatten)]
    code: CodeArgs,
    #[command(flatten)]
    assets: AssetArgs,
    /// Input bits as hex, or @FILE to read the hex from a file.
    #[arg(long, value_name = "HEX")]
    hex_in: Option<String>,
    /// File of whitespace- or comma-separated LLRs (decode only).
    #[arg(long, value_name = "FILE", conflicts_with = "hex_in")]
    llr_in: Option<PathBuf>,
    /// Write the output hex to FILE instead of standard output.
    #[arg(long, value_name = "FILE")]
    hex_out: Option<PathBuf>,
    /// LLR magnitude given to hard input bits when decoding hex.
    #[arg(long, default_value_t = SAT)]
    llr_mag: f64,
}

#[derive(Debug, Clone, Args)]
struct SimArgs {
    #[arg(long, value_enum)]
    chain: ChainKind,
    #[command(flatten)]
    code: CodeArgs,
    #[command(flatten)]
    assets: AssetArgs,
    /// Eb/N0 points in dB, comma separated.
    #[arg(
        long,
        value_delimiter = ',',
        allow_hyphen_values = true,
        required = true
    )]
    ebn0: Vec<f64>,
    #[arg(long, default_value_t = 1)]
    seed: u64,
    /// Frames per point at most.
    #[arg(long, default_value_t = StopRule::default().max_frames)]
    max_frames: u64,
    /// Stop a point after this many block errors.
    #[arg(long, default_value_t = StopRule::default().max_block_errors)]
    max_errors: u64,
    /// Worker threads; all cores when unset.
    #[arg(long)]
    threads: Option<usize>,
    /// Record wall-clock time in the elapsed_s column (output is then not reproducible).
    #[arg(long)]
    timing: bool,
    /// CSV path; standard output when unset.
    #[arg(long, value_name = "FILE")]
    out: Option<PathBuf>,
}

/// Where single-frame input comes from.
#[derive(Debug, Clone, PartialEq)]
pub enum FrameInput {
    Hex(String),
    Llrs(PathBuf),
}

#[derive(Debug, Clone, PartialEq)]
pub enum Command {
    Encode {
        input: String,
    },
    Decode {
        input: FrameInput,
        llr_mag: f64,
    },
    Simulate {
        campaign: CampaignConfig,
        timing: bool,
    },
    ValidateAssets,
}

/// A fully checked invocation.
#[derive(Debug, Clone, PartialEq)]
pub struct RunSpec {
    pub command: Command,
    /// Chain for every command except `validate-assets`.
    pub chain: Option<ChainSpec>,
    pub assets: Option<PathBuf>,
    /// Output file; standard output when `None`.
    pub output: Option<PathBuf>,
}

/// Command-line problems, reported together.
#[derive(Debug, thiserror::Error)]
pub enum CliError {
    #[error("{0}")]
    Syntax(#[from] clap::Error),
    #[error("invalid arguments:\n{}", .0.iter().map(|p| format!("  - {p}\n")).collect::<String>())]
    Constraints(Vec<String>),
}

/// Parses and cross-checks `argv` (program name first).
pub fn parse_args<I, T>(argv: I) -> Result<RunSpec, CliError>
where
    I: IntoIterator<Item = T>,
    T: Into<std::ffi::OsString> + Clone,
{
    let cli = Cli::try_parse_from(argv)?;
    let mut problems = Vec::new();
    let spec = match cli.command {
        Cmd::LdpcEncode(f) => frame_spec(ChainKind::Ldpc, f, true, &mut problems),
        Cmd::LdpcDecode(f) => frame_spec(ChainKind::Ldpc, f, false, &mut problems),
        Cmd::PolarEncode(f) => frame_spec(ChainKind::Polar, f, true, &mut problems),
        Cmd::PolarDecode(f) => frame_spec(ChainKind::Polar, f, false, &mut problems),
        Cmd::Simulate(s) => sim_spec(s, &mut problems),
        Cmd::ValidateAssets(a) => Some(RunSpec {
            command: Command::ValidateAssets,
            chain: None,
            assets: a.assets,
            output: None,
        }),
    };
    match spec {
        Some(spec) if problems.is_empty() => Ok(spec),
        _ => Err(CliError::Constraints(problems)),
    }
}

fn chain_spec(kind: ChainKind, c: &CodeArgs, problems: &mut Vec<String>) -> Option<ChainSpec> {
    let decoder = c.decoder.unwrap_or(match kind {
        ChainKind::Ldpc => DecoderName::Nmsa,
        ChainKind::Polar => DecoderName::Cascl,
    });
    if decoder.chain() != kind {
        problems.push(format!(
            "decoder incompatible with chain: {decoder:?} cannot decode the {kind:?} chain"
        ));
    }
    if c.list_size == 0 {
        problems.push("--list-size must be at least 1".into());
    }
    if c.max_iter == Some(0) {
        problems.push("--max-iter must be at least 1".into());
    }
    if !(c.alpha > 0.0 && c.alpha <= 1.0) {
        problems.push(format!("--alpha {} outside (0, 1]", c.alpha));
    }
    if !(c.beta >= 0.0 && c.beta.is_finite()) {
        problems.push(format!(
            "--beta {} must be a finite non-negative number",
            c.beta
        ));
    }
    let a = c.a.filter(|&a| a > 0);
    if a.is_none() {
        problems.push("--A (payload bits, at least 1) is required".into());
    }
    match kind {
        ChainKind::Ldpc => {
            if c.e.is_some() {
                problems.push("--E applies to the polar chain; use --G".into());
            }
            if c.rv > 3 {
                problems.push(format!("--rv {} outside 0..=3", c.rv));
            }
            if let Some(r) = c.rate {
                if !(r > 0.0 && r <= 1.0) {
                    problems.push(format!("--rate {r} outside (0, 1]"));
                }
            }
            let g = match (c.g, c.rate, a) {
                (Some(g), _, _) => Some(g),
                (None, Some(r), Some(a)) if r > 0.0 => Some((a as f64 / r).round() as usize),
                _ => None,
            };
            if g.is_none_or(|g| g == 0) {
                problems.push("--G (at least 1) or --rate is required for the ldpc chain".into());
            }
            let algorithm = match decoder {
                DecoderName::Spa => LdpcAlgorithm::Spa,
                DecoderName::Msa => LdpcAlgorithm::Msa,
                DecoderName::Omsa => LdpcAlgorithm::Omsa,
                DecoderName::Layered => LdpcAlgorithm::LayeredNmsa,
                _ => LdpcAlgorithm::Nmsa,
            };
            let mut cfg = LdpcDecodeConfig::new(algorithm);
            cfg.alpha = c.alpha;
            cfg.beta = c.beta;
            if let Some(m) = c.max_iter {
                cfg.max_iter = m;
            }
            Some(ChainSpec::Ldpc {
                a: a?,
                g: g?,
                rv: c.rv,
                rate: c.rate,
                base_graph: match c.bg {
                    BgChoice::Auto => None,
                    BgChoice::One => Some(BaseGraphId::Bg1),
                    BgChoice::Two => Some(BaseGraphId::Bg2),
                },
                decoder: cfg,
            })
        }
        ChainKind::Polar => {
            if c.g.is_some() || c.rate.is_some() {
                problems.push("--G and --rate apply to the ldpc chain; use --E".into());
            }
            if c.bg != BgChoice::Auto {
                problems.push("--bg applies to the ldpc chain".into());
            }
            if !(1..=2).contains(&c.segments) {
                problems.push(format!("--segments {} outside 1..=2", c.segments));
            }
            let e = c.e.filter(|&e| e > 0);
            if e.is_none() {
                problems.push("--E (at least 1) is required for the polar chain".into());
            }
            let kind = match decoder {
                DecoderName::Sc => PolarDecoderKind::Sc,
                DecoderName::Scl => PolarDecoderKind::Scl {
                    list_size: c.list_size,
                },
                _ => PolarDecoderKind::CaScl {
                    list_size: c.list_size,
                },
            };
            let mut params = nr_fec::polar::chain::PolarChainParams::new(c.channel.into(), a?, e?);
            params.segments = c.segments;
            Some(ChainSpec::Polar {
                params,
                decoder: PolarDecoderConfig {
                    kind,
                    approx: c.approx,
                },
            })
        }
    }
}

fn frame_spec(
    kind: ChainKind,
    f: FrameArgs,
    encode: bool,
    problems: &mut Vec<String>,
) -> Option<RunSpec> {
    let chain = chain_spec(kind, &f.code, problems);
    let command = if encode {
        if f.llr_in.is_some() {
            problems.push("--llr-in is only accepted when decoding".into());
        }
        match f.hex_in {
            Some(h) => Some(Command::Encode { input: h }),
            None => {
                problems.push("--hex-in is required".into());
                None
            }
        }
    } else {
        if !(f.llr_mag > 0.0 && f.llr_mag.is_finite()) {
            problems.push(format!("--llr-mag {} must be positive", f.llr_mag));
        }
        let input = match (f.hex_in, f.llr_in) {
            (Some(h), None) => Some(FrameInput::Hex(h)),
            (None, Some(p)) => Some(FrameInput::Llrs(p)),
            _ => {
                problems.push("one of --hex-in or --llr-in is required".into());
                None
            }
        };
        input.map(|input| Command::Decode {
            input,
            llr_mag: f.llr_mag,
        })
    };
    Some(RunSpec {
        command: command?,
        chain: Some(chain?),
        assets: f.assets.assets,
        output: f.hex_out,
    })
}

fn sim_spec(s: SimArgs, problems: &mut Vec<String>) -> Option<RunSpec> {
    let chain = chain_spec(s.chain, &s.code, problems);
    if s.ebn0.iter().any(|x| !x.is_finite()) {
        problems.push("--ebn0 values must be finite".into());
    }
    if s.max_frames == 0 {
        problems.push("--max-frames must be at least 1".into());
    }
    if s.max_errors == 0 {
        problems.push("--max-errors must be at least 1".into());
    }
    if s.threads == Some(0) {
        problems.push("--threads must be at least 1".into());
    }
    let chain = chain?;
    Some(RunSpec {
        command: Command::Simulate {
            campaign: CampaignConfig {
                chain: chain.clone(),
                ebn0_db: s.ebn0,
                stop: StopRule {
                    max_frames: s.max_frames,
                    max_block_errors: s.max_errors,
                },
                seed: s.seed,
                threads: s.threads,
            },
            timing: s.timing,
        },
        chain: Some(chain),
        assets: s.assets.assets,
        output: s.out,
    })
}

pub fn load_assets(dir: Option<&Path>) -> anyhow::Result<Assets> {
    match dir {
        Some(d) => {
            Assets::from_dir(d).with_context(|| format!("loading assets from {}", d.display()))
        }
        None => Ok(Assets::bundled()),
    }
}

/// Writes campaign records as CSV to `path`.
pub fn emit_csv(
    records: &[BlerRecord],
    seed: u64,
    asset_hash: &str,
    timing: bool,
    path: &Path,
) -> anyhow::Result<()> {
    if records.is_empty() {
        bail!("no records to write");
    }
    fs::write(path, render_csv(records, seed, asset_hash, timing))
        .with_context(|| format!("writing {}", path.display()))
}

fn read_hex_arg(arg: &str) -> anyhow::Result<String> {
    match arg.strip_prefix('@') {
        Some(path) => Ok(fs::read_to_string(path)
            .with_context(|| format!("reading {path}"))?
            .trim()
            .to_owned()),
        None => Ok(arg.trim().to_owned()),
    }
}

fn read_llrs(path: &Path) -> anyhow::Result<Vec<f64>> {
    let text = fs::read_to_string(path).with_context(|| format!("reading {}", path.display()))?;
    text.split(|c: char| c == ',' || c.is_whitespace())
        .filter(|t| !t.is_empty())
        .map(|t| {
            t.parse::<f64>()
                .with_context(|| format!("bad LLR value {t:?}"))
        })
        .collect()
}

fn write_output(text: &str, path: Option<&Path>, out: &mut dyn Write) -> anyhow::Result<()> {
    match path {
        Some(p) => fs::write(p, text).with_context(|| format!("writing {}", p.display())),
        None => out
            .write_all(text.as_bytes())
            .context("writing standard output"),
    }
}

/// Runs a parsed command. Frame decode failures are reported on `err` and
/// are not errors.
pub fn execute(spec: &RunSpec, out: &mut dyn Write, err: &mut dyn Write) -> anyhow::Result<()> {
    let assets = load_assets(spec.assets.as_deref())?;
    let link = || -> anyhow::Result<Link> {
        let chain = spec.chain.as_ref().context("command needs a chain")?;
        Ok(Link::build(&assets, chain)?)
    };
    match &spec.command {
        Command::ValidateAssets => {
            let t = &assets.ldpc;
            writeln!(out, "ldpc bg1 entries: {}", t.bg1.nnz())?;
            writeln!(out, "ldpc bg2 entries: {}", t.bg2.nnz())?;
            writeln!(
                out,
                "polar reliability length: {}",
                assets.reliability.len()
            )?;
            writeln!(
                out,
                "polar input interleaver length: {}",
                assets.patterns.input.len()
            )?;
            writeln!(out, "hash: {}", assets.content_hash())?;
        }
        Command::Encode { input } => {
            let link = link()?;
            let payload = from_hex(&read_hex_arg(input)?, link.payload_len())?;
            let tx = match &link {
                Link::Ldpc(c, _) => c.transmit(&payload)?,
                Link::Polar(c, _) => c.transmit(&payload)?,
            };
            write_output(&format!("{}\n", to_hex(&tx)), spec.output.as_deref(), out)?;
        }
        Command::Decode { input, llr_mag } => {
            let link = link()?;
            let llrs = match input {
                FrameInput::Hex(h) => from_hex(&read_hex_arg(h)?, link.coded_len())?
                    .iter()
                    .map(|&b| if b == 0 { *llr_mag } else { -llr_mag })
                    .collect(),
                FrameInput::Llrs(p) => read_llrs(p)?,
            };
            let (payload, status) = match &link {
                Link::Ldpc(c, dec) => {
                    let rx = c.receive(&llrs, dec)?;
                    let status = format!(
                        "crc={} mean_iterations={} failed_blocks={:?}",
                        if rx.tb_crc_ok { "pass" } else { "fail" },
                        rx.mean_iterations(),
                        rx.failed_blocks
                    );
                    (rx.payload, status)
                }
                Link::Polar(c, dec) => {
                    let rx = c.receive(&llrs, dec)?;
                    let status = format!(
                        "crc={} list_rank={:?}",
                        if rx.crc_ok { "pass" } else { "fail" },
                        rx.list_rank
                    );
                    (rx.payload, status)
                }
            };
            writeln!(err, "{status}")?;
            write_output(
                &format!("{}\n", to_hex(&payload)),
                spec.output.as_deref(),
                out,
            )?;
        }
        Command::Simulate { campaign, timing } => {
            let records = run_campaign(&assets, campaign)?;
            match &spec.output {
                Some(p) => emit_csv(&records, campaign.seed, assets.content_hash(), *timing, p)?,
                None => out.write_all(
                    render_csv(&records, campaign.seed, assets.content_hash(), *timing).as_bytes(),
                )?,
            }
        }
    }
    Ok(())
}
