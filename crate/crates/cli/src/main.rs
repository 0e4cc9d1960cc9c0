use std::fs;
use std::path::{Path, PathBuf};
use std::process::ExitCode;

use anyhow::{bail, Context, Result};
use clap::{Args, Parser, Subcommand};

use benign_core::constructions::{
    build_ks, build_ms, build_ys, fstar_presentation, run_pipeline, PipelineBounds,
    PipelineBundle,
};
use benign_core::homology::{designated_relators, find_certificate, CertificateFile, OracleSpec};
use benign_core::presentation::hnn_extend;
use benign_core::smallcancel::{compute_pieces, Encoder, JPrimeEncoder, SymmetrizedRelatorSet};
use benign_core::{Error, IntegerSet, Presentation, Word};

const EXIT_FAILURE: u8 = 1;
const EXIT_INCONCLUSIVE: u8 = 2;
const EXIT_USAGE: u8 = 3;

#[derive(Parser)]
#[command(name = "benign", version, about = "Constructions and certificates for embeddings into FP2 groups")]
struct Cli {
    /// Machine-readable output.
    #[arg(long, global = true)]
    json: bool,
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Print the presentation of one construction stage.
    Construct {
        #[arg(value_parser = ["jprime", "k", "m", "fstar", "ys"])]
        stage: String,
        #[command(flatten)]
        encoder: EncoderArgs,
        /// Write to this file instead of stdout.
        #[arg(long)]
        out: Option<PathBuf>,
    },
    /// Check a small-cancellation claim, a certificate file or a bundle.
    Verify {
        #[command(subcommand)]
        target: VerifyTarget,
    },
    /// Decide whether a word is trivial.
    Solve {
        #[command(flatten)]
        source: Source,
        /// Word in the presentation's generators, e.g. `a b a' b'`.
        #[arg(long)]
        word: String,
        /// Oracle used with `--pres`: free, abelian, dehn or finite.
        #[arg(long, default_value = "dehn")]
        oracle: String,
    },
    /// Run the whole construction and write a bundle directory.
    Pipeline {
        /// Input presentation file.
        #[arg(long)]
        pres: PathBuf,
        /// Bundle directory to create.
        #[arg(long)]
        out: PathBuf,
        /// Longest word over a, b searched for S(N).
        #[arg(long, default_value_t = 4)]
        length_bound: usize,
        /// Keep elements of S(N) with |s| at most this.
        #[arg(long, default_value_t = 20)]
        s_bound: u64,
        /// Conjugator length used to approximate the normal closure N.
        #[arg(long, default_value_t = 2)]
        conjugator_length: usize,
        /// Number of marked encoder generators.
        #[arg(long, default_value_t = 13)]
        l: usize,
        /// Longest code word checked in the codeword certificates.
        #[arg(long, default_value_t = 3)]
        codeword_length: usize,
        /// Check t⁻¹ v_s t for |s| at most this.
        #[arg(long, default_value_t = 20)]
        sample_bound: i64,
        /// Largest Cayley-ball radius tried for the homology certificate.
        #[arg(long, default_value_t = 2)]
        homology_radius: usize,
    },
    /// Search for a homology certificate for a relator word.
    Certificate {
        /// Presentation file.
        #[arg(long)]
        pres: PathBuf,
        /// Number of leading relators that carry 2-cells.
        #[arg(long)]
        designated: usize,
        /// Relator word whose loop should bound.
        #[arg(long)]
        relator: String,
        /// Cayley-ball radius.
        #[arg(long)]
        radius: usize,
        /// Word-problem oracle: free, abelian, dehn or finite.
        #[arg(long, default_value = "finite")]
        oracle: String,
        /// Write the certificate file here.
        #[arg(long)]
        out: Option<PathBuf>,
    },
}

#[derive(Subcommand)]
enum VerifyTarget {
    /// Piece ratio of a presentation.
    Smallcancel {
        #[command(flatten)]
        source: Source,
        /// Schema instances are taken with |s| at most this.
        #[arg(long)]
        bound: Option<u64>,
    },
    /// Re-check a certificate file.
    Certificate { file: PathBuf },
    /// Re-check every certificate in a bundle directory.
    Bundle { dir: PathBuf },
}

#[derive(Args)]
struct EncoderArgs {
    /// Number of marked encoder generators.
    #[arg(long, default_value_t = 13)]
    l: usize,
    /// Comma-separated integers; 0 is always included.
    #[arg(long, default_value = "0")]
    set: String,
}

#[derive(Args)]
struct Source {
    /// Built-in presentation; only `jprime` is available.
    #[arg(long, value_parser = ["jprime"], conflicts_with = "pres", required_unless_present = "pres")]
    preset: Option<String>,
    /// Presentation file.
    #[arg(long)]
    pres: Option<PathBuf>,
    /// Number of marked encoder generators.
    #[arg(long, default_value_t = 13)]
    l: usize,
    /// Comma-separated integers; 0 is always included.
    #[arg(long, default_value = "0")]
    set: String,
}

fn parse_set(text: &str) -> Result<IntegerSet> {
    let values = text
        .split(',')
        .map(str::trim)
        .filter(|s| !s.is_empty())
        .map(|s| s.parse::<i64>().with_context(|| format!("bad integer {s:?} in --set")))
        .collect::<Result<Vec<_>>>()?;
    Ok(IntegerSet::with_zero(values))
}

fn read_presentation(path: &Path) -> Result<Presentation> {
    let text = fs::read_to_string(path).with_context(|| format!("reading {}", path.display()))?;
    text.parse().with_context(|| format!("parsing {}", path.display()))
}

fn parse_word_in(text: &str, p: &Presentation) -> Result<Word> {
    let w: Word = text.parse().context("parsing --word")?;
    if let Some(g) = w.generators().into_iter().find(|g| !p.generators().contains(g)) {
        return Err(Error::UndeclaredGenerator(g).into());
    }
    Ok(w)
}

fn emit(out: Option<&Path>, text: &str) -> Result<()> {
    match out {
        Some(path) => fs::write(path, text).with_context(|| format!("writing {}", path.display())),
        None => {
            print!("{text}");
            if !text.ends_with('\n') {
                println!();
            }
            Ok(())
        }
    }
}

fn source_presentation(source: &Source) -> Result<Presentation> {
    match &source.pres {
        Some(path) => read_presentation(path),
        None => Ok(JPrimeEncoder::new(source.l, parse_set(&source.set)?, "")?.presentation().clone()),
    }
}

fn construct(stage: &str, args: &EncoderArgs, json: bool, out: Option<&Path>) -> Result<()> {
    let set = parse_set(&args.set)?;
    let l = args.l;
    let encoder = JPrimeEncoder::new(l, set.clone(), benign_core::constructions::NS_J)?;
    let pres = match stage {
        "jprime" => encoder.presentation().clone(),
        "k" => build_ks(l, encoder.presentation(), encoder.marked())?,
        "m" => {
            let ks = build_ks(l, encoder.presentation(), encoder.marked())?;
            hnn_extend(&build_ms(l, &ks, encoder.marked())?)?
        }
        "fstar" => fstar_presentation(l)?,
        _ => {
            let words = build_ys(l, &set)?;
            let text = if json {
                serde_json::to_string_pretty(&words)?
            } else {
                words.iter().map(|w| format!("{w}\n")).collect()
            };
            return emit(out, &text);
        }
    };
    let text = if json { serde_json::to_string_pretty(&pres)? } else { pres.to_string() };
    emit(out, &text)
}

fn solve(source: &Source, word: &str, oracle: &str, json: bool) -> Result<()> {
    let trivial = match &source.pres {
        None => {
            let enc = JPrimeEncoder::new(source.l, parse_set(&source.set)?, "")?;
            let w = parse_word_in(word, enc.presentation())?;
            enc.is_identity(&w)?
        }
        Some(path) => {
            let p = read_presentation(path)?;
            let w = parse_word_in(word, &p)?;
            let spec: OracleSpec = oracle.parse()?;
            spec.build(p.generators(), &p.all_relators(None))?.is_identity(&w)?
        }
    };
    let verdict = if trivial { "trivial" } else { "nontrivial" };
    if json {
        println!("{}", serde_json::json!({ "word": word, "trivial": trivial }));
    } else {
        println!("{verdict}");
    }
    Ok(())
}

fn verify_smallcancel(source: &Source, bound: Option<u64>, json: bool) -> Result<bool> {
    let p = source_presentation(source)?;
    let report = compute_pieces(&SymmetrizedRelatorSet::from_presentation(&p, bound)?);
    if json {
        println!("{}", serde_json::to_string_pretty(&report)?);
    } else {
        println!("relators: {}", report.relator_count);
        println!("max piece length: {}", report.max_piece_length);
        println!("ratio: {}", report.ratio);
        if let Some(w) = &report.witness {
            println!("witness: {} shared by {} and {}", w.piece, w.left, w.right);
        }
        println!("C'(1/6): {}", if report.is_c16() { "yes" } else { "no" });
    }
    Ok(report.is_c16())
}

fn verify_bundle(dir: &Path, json: bool) -> Result<bool> {
    let bundle = PipelineBundle::load(dir).with_context(|| format!("loading bundle {}", dir.display()))?;
    let results = bundle.verify();
    let ok = results.iter().all(|(_, r)| r.is_ok());
    if json {
        let rows: Vec<_> = results
            .iter()
            .map(|(label, r)| {
                serde_json::json!({
                    "certificate": label,
                    "ok": r.is_ok(),
                    "error": r.as_ref().err().map(|e| e.to_string()),
                })
            })
            .collect();
        println!("{}", serde_json::to_string_pretty(&rows)?);
    } else {
        for (label, r) in &results {
            match r {
                Ok(()) => println!("ok    {label}"),
                Err(e) => println!("FAIL  {label}: {e}"),
            }
        }
    }
    Ok(ok)
}

fn run(cli: Cli) -> Result<u8> {
    let json = cli.json;
    match cli.command {
        Command::Construct { stage, encoder, out } => {
            construct(&stage, &encoder, json, out.as_deref())?;
            Ok(0)
        }
        Command::Solve { source, word, oracle } => {
            solve(&source, &word, &oracle, json)?;
            Ok(0)
        }
        Command::Verify { target } => {
            let ok = match target {
                VerifyTarget::Smallcancel { source, bound } => verify_smallcancel(&source, bound, json)?,
                VerifyTarget::Certificate { file } => {
                    let text = fs::read_to_string(&file).with_context(|| format!("reading {}", file.display()))?;
                    let cert: CertificateFile = serde_json::from_str(&text).context("parsing certificate")?;
                    let ok = cert.verify()?;
                    if json {
                        println!("{}", serde_json::json!({ "valid": ok }));
                    } else {
                        println!("{}", if ok { "valid" } else { "invalid" });
                    }
                    ok
                }
                VerifyTarget::Bundle { dir } => verify_bundle(&dir, json)?,
            };
            Ok(if ok { 0 } else { EXIT_FAILURE })
        }
        Command::Pipeline {
            pres,
            out,
            length_bound,
            s_bound,
            conjugator_length,
            l,
            codeword_length,
            sample_bound,
            homology_radius,
        } => {
            let p = read_presentation(&pres)?;
            let bounds = PipelineBounds {
                length_bound,
                s_bound,
                conjugator_length,
                l,
                codeword_length,
                sample_bound,
                homology_radius,
            };
            let bundle = run_pipeline(&p, &bounds)?;
            bundle.save(&out).with_context(|| format!("writing bundle to {}", out.display()))?;
            if !json {
                println!("S(N) = {:?}", bundle.subgroups.godel_set);
                println!("{} stages, {} certificates written to {}", bundle.stages.len(), bundle.certificates.len(), out.display());
            }
            let ok = verify_bundle(&out, json)?;
            Ok(if ok { 0 } else { EXIT_FAILURE })
        }
        Command::Certificate { pres, designated, relator, radius, oracle, out } => {
            let p = read_presentation(&pres)?;
            let r = parse_word_in(&relator, &p)?;
            let spec: OracleSpec = oracle.parse()?;
            let relators = designated_relators(&p, designated)?;
            let wp = spec.build(p.generators(), &relators)?;
            let certificate = find_certificate(p.generators(), &relators, wp.as_ref(), &r, radius)?;
            let file = CertificateFile { presentation: p, designated, oracle: spec, certificate };
            if !file.verify()? {
                bail!("certificate failed its own check");
            }
            emit(out.as_deref(), &serde_json::to_string_pretty(&file)?)?;
            Ok(0)
        }
    }
}

fn classify(err: &anyhow::Error) -> u8 {
    for cause in err.chain() {
        if let Some(e) = cause.downcast_ref::<Error>() {
            return match e {
                Error::Inconclusive { .. } | Error::LoopExitsBall { .. } => EXIT_INCONCLUSIVE,
                Error::InvalidParameter(_) => EXIT_USAGE,
                Error::Stage { source, .. } if matches!(**source, Error::Inconclusive { .. }) => EXIT_INCONCLUSIVE,
                _ => continue,
            };
        }
    }
    EXIT_FAILURE
}

fn main() -> ExitCode {
    let cli = match Cli::try_parse() {
        Ok(cli) => cli,
        Err(e) => {
            let _ = e.print();
            return ExitCode::from(if e.use_stderr() { EXIT_USAGE } else { 0 });
        }
    };
    match run(cli) {
        Ok(code) => ExitCode::from(code),
        Err(err) => {
            eprintln!("error: {err:#}");
            ExitCode::from(classify(&err))
        }
    }
}
