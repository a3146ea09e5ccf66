//! Command-line front end: single-braid invariant queries, corpus sweeps
//! against the verification pipeline, and matrix-bound fuzzing.

use std::io::Write;
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand};
use rayon::prelude::*;

use braidsig::braid::{classify, parse_braid_file, parse_braid_word, BraidWord, ClassificationKind};
use braidsig::corpus::{generate, CorpusFilters, CorpusMode, CorpusSpec};
use braidsig::diagram::{build_diagram, faces_to_json};
use braidsig::goeritz::gl_signature;
use braidsig::proofpipe::{check_final, ProofReport, ReportStatus, VerifyOptions};
use braidsig::seifert::{alexander, oracle_signature_nullity, unit_circle_zeros};
use braidsig::sigcore::{
    check_tridiagonal_bound, check_trisum_bound, signature, tridiagonal, TrisumSpec,
};

#[derive(Parser)]
#[command(
    name = "braidsig",
    about = "Exact signature invariants of positive braid closures",
    version
)]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Invariants of a single braid word.
    Invariants(InvariantsArgs),
    /// Sweep a corpus of words through the verification pipeline.
    Verify(VerifyArgs),
    /// Fuzz the tridiagonal and trisum signature bounds.
    FuzzMatrices(FuzzArgs),
}

#[derive(Args)]
struct InvariantsArgs {
    /// Braid word, e.g. "1 2 1" or "1^3"; "@N" prefix fixes the strand count.
    word: String,
    /// Declare the strand count explicitly.
    #[arg(long)]
    strands: Option<usize>,
    /// Emit JSON instead of text.
    #[arg(long)]
    json: bool,
    /// Unit-circle tolerance for Alexander zeros.
    #[arg(long, default_value_t = 1e-9)]
    tol: f64,
    /// Dump the diagram faces as JSON.
    #[arg(long)]
    dump_faces: bool,
}

#[derive(Args)]
struct VerifyArgs {
    /// Exhaustive corpus: all words up to --max-len over --max-strands.
    #[arg(long, conflicts_with_all = ["random", "file"])]
    exhaustive: bool,
    /// Random corpus of this many seeded words.
    #[arg(long)]
    random: Option<usize>,
    /// Read words from a file (one per line, '#' comments).
    #[arg(long)]
    file: Option<String>,
    #[arg(long, default_value_t = 8)]
    max_len: usize,
    #[arg(long, default_value_t = 1)]
    min_len: usize,
    #[arg(long, default_value_t = 4)]
    max_strands: usize,
    #[arg(long, default_value_t = 1)]
    seed: u64,
    /// Keep only words using every generator.
    #[arg(long)]
    nonsplit: bool,
    /// Keep only generic words.
    #[arg(long)]
    generic: bool,
    /// Keep only words fixed by the greedy reduction.
    #[arg(long)]
    reduced_only: bool,
    /// Print one JSON report per word.
    #[arg(long)]
    json: bool,
    /// Write a CSV summary to this path.
    #[arg(long)]
    csv: Option<String>,
    #[arg(long, default_value_t = 1e-9)]
    tol: f64,
    /// Reduction step budget per word.
    #[arg(long)]
    max_steps: Option<usize>,
    /// Print a breakdown of skip reasons.
    #[arg(long)]
    skip_report: bool,
}

#[derive(Args)]
struct FuzzArgs {
    #[arg(long, default_value_t = 5)]
    seed: u64,
    /// Largest dimension for the exhaustive tridiagonal sweep.
    #[arg(long, default_value_t = 6)]
    max_dim: usize,
    /// Number of random trisum specs.
    #[arg(long, default_value_t = 10_000)]
    trisum_count: usize,
    #[arg(long)]
    json: bool,
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    match cli.command {
        Command::Invariants(args) => cmd_invariants(&args),
        Command::Verify(args) => cmd_verify(&args),
        Command::FuzzMatrices(args) => cmd_fuzz(&args),
    }
}

fn input_error(msg: impl std::fmt::Display) -> ExitCode {
    eprintln!("error: {msg}");
    ExitCode::from(2)
}

fn parse_word(text: &str, strands: Option<usize>) -> Result<BraidWord, braidsig::Error> {
    let word = parse_braid_word(text)?;
    match strands {
        Some(n) => BraidWord::new(n, word.letters().to_vec()),
        None => Ok(word),
    }
}

fn cmd_invariants(args: &InvariantsArgs) -> ExitCode {
    let word = match parse_word(&args.word, args.strands) {
        Ok(w) => w,
        Err(e) => return input_error(e),
    };
    let cls = classify(&word);
    if cls.kind == ClassificationKind::Split {
        let parts = braidsig::braid::split_components(&word);
        println!("split closure; components:");
        let mut code = ExitCode::SUCCESS;
        let mut sigma = 0i64;
        let mut b1 = 0i64;
        for part in parts.iter().filter(|p| p.crossings() > 0) {
            println!("--- part {part}");
            if print_invariants(part, args) == ExitCode::from(1) {
                code = ExitCode::from(1);
            }
            if let Ok((s, _)) = oracle_signature_nullity(part) {
                sigma += s;
                b1 += braidsig::braid::betti(part).unwrap_or(0);
            }
        }
        println!("--- totals: sigma = {sigma}, b1 = {b1}");
        return code;
    }
    print_invariants(&word, args)
}

fn print_invariants(word: &BraidWord, args: &InvariantsArgs) -> ExitCode {
    let run = || -> Result<serde_json::Value, braidsig::Error> {
        let diagram = build_diagram(word)?;
        let sigma_gl = gl_signature(&diagram)?;
        let (sigma_oracle, nullity) = oracle_signature_nullity(word)?;
        let b1 = braidsig::braid::betti(word)?;
        let poly = alexander(word)?;
        let (on_circle, total) = unit_circle_zeros(&poly, args.tol)?;
        let components = word.closure_components();
        let (g4, seifert_genus) = if components == 1 {
            (
                Some(format!("{}/2", sigma_gl)),
                Some(format!("{}/2", b1)),
            )
        } else {
            (None, None)
        };
        if args.dump_faces {
            println!("{}", faces_to_json(&diagram));
        }
        if sigma_gl != sigma_oracle {
            return Err(braidsig::Error::Internal(format!(
                "signature mismatch: {sigma_gl} vs {sigma_oracle}"
            )));
        }
        Ok(serde_json::json!({
            "word": word.to_string(),
            "strands": word.strands(),
            "cr": word.crossings(),
            "n": word.generators(),
            "b1": b1,
            "sigma": sigma_gl,
            "sigma_oracle": sigma_oracle,
            "nullity": nullity,
            "components": components,
            "alexander": poly.coeff_string(),
            "zeros_on_circle": on_circle,
            "zeros_total": total,
            "four_genus_lower_bound": g4,
            "seifert_genus": seifert_genus,
        }))
    };
    match run() {
        Ok(value) => {
            if args.json {
                println!("{}", serde_json::to_string_pretty(&value).unwrap());
            } else {
                println!("word          : {}", value["word"].as_str().unwrap());
                println!("strands       : {}", value["strands"]);
                println!("crossings     : {}", value["cr"]);
                println!("b1            : {}", value["b1"]);
                println!("sigma         : {}", value["sigma"]);
                println!("nullity       : {}", value["nullity"]);
                println!("components    : {}", value["components"]);
                println!("alexander     : {}", value["alexander"].as_str().unwrap());
                println!(
                    "on unit circle: {}/{}",
                    value["zeros_on_circle"], value["zeros_total"]
                );
                if let Some(g4) = value["four_genus_lower_bound"].as_str() {
                    println!("four-genus    : >= {g4}");
                    println!(
                        "seifert genus : {}",
                        value["seifert_genus"].as_str().unwrap()
                    );
                }
            }
            ExitCode::SUCCESS
        }
        Err(braidsig::Error::SplitInput(i)) => input_error(braidsig::Error::SplitInput(i)),
        Err(e) => {
            eprintln!("check failed: {e}");
            ExitCode::from(1)
        }
    }
}

fn cmd_verify(args: &VerifyArgs) -> ExitCode {
    let filters = CorpusFilters {
        nonsplit: args.nonsplit,
        generic: args.generic,
        reduced_only: args.reduced_only,
    };
    let words: Vec<BraidWord> = if let Some(path) = &args.file {
        let content = match std::fs::read_to_string(path) {
            Ok(c) => c,
            Err(e) => return input_error(format!("{path}: {e}")),
        };
        match parse_braid_file(&content) {
            Ok(w) => w,
            Err(e) => return input_error(e),
        }
    } else if let Some(count) = args.random {
        generate(&CorpusSpec {
            mode: CorpusMode::Random {
                count,
                min_len: args.min_len,
                max_len: args.max_len,
                max_strands: args.max_strands,
                seed: args.seed,
            },
            filters,
        })
    } else if args.exhaustive {
        generate(&CorpusSpec {
            mode: CorpusMode::Exhaustive {
                max_len: args.max_len,
                max_strands: args.max_strands,
            },
            filters,
        })
    } else {
        return input_error("pick one of --exhaustive, --random N, or --file PATH");
    };
    if words.is_empty() {
        return input_error("corpus is empty");
    }
    let opts = VerifyOptions {
        tol: args.tol,
        max_steps: args.max_steps,
        check_roots: true,
    };
    let reports: Vec<ProofReport> = words.par_iter().map(|w| check_final(w, &opts)).collect();
    if args.json {
        let stdout = std::io::stdout();
        let mut lock = stdout.lock();
        for report in &reports {
            writeln!(lock, "{}", serde_json::to_string(report).unwrap()).ok();
        }
    }
    if let Some(path) = &args.csv {
        if let Err(e) = write_csv(path, &reports) {
            return input_error(format!("{path}: {e}"));
        }
    }
    let mut pass = 0usize;
    let mut skip = 0usize;
    let mut fail = 0usize;
    for report in &reports {
        match report.status {
            ReportStatus::Pass => pass += 1,
            ReportStatus::Skip => skip += 1,
            ReportStatus::Fail => {
                fail += 1;
                if fail <= 20 {
                    eprintln!("FAIL {}: {}", report.word, report.failures.join("; "));
                }
            }
        }
    }
    if args.skip_report {
        let mut reasons: std::collections::BTreeMap<&str, usize> = Default::default();
        for report in &reports {
            if report.status == ReportStatus::Skip {
                let reason = report
                    .pipeline_skip_reason
                    .as_deref()
                    .unwrap_or("unspecified");
                *reasons.entry(reason).or_default() += 1;
            }
        }
        println!("skip reasons:");
        for (reason, count) in reasons {
            println!("  {count:6}  {reason}");
        }
    }
    println!(
        "verified {} words: {pass} pass, {skip} skip, {fail} fail",
        reports.len()
    );
    if fail == 0 {
        ExitCode::SUCCESS
    } else {
        ExitCode::from(1)
    }
}

fn write_csv(path: &str, reports: &[ProofReport]) -> Result<(), Box<dyn std::error::Error>> {
    let mut writer = csv::Writer::from_path(path)?;
    writer.write_record(["word", "cr", "n", "b1", "sigma", "slack", "skipped"])?;
    for r in reports {
        writer.write_record([
            r.word.clone(),
            r.cr.to_string(),
            r.n.to_string(),
            r.b1.to_string(),
            r.sigma.map(|s| s.to_string()).unwrap_or_default(),
            r.theorem_slack.map(|s| s.to_string()).unwrap_or_default(),
            (!r.pipeline_ran()).to_string(),
        ])?;
    }
    writer.flush()?;
    Ok(())
}

fn cmd_fuzz(args: &FuzzArgs) -> ExitCode {
    use rand::{Rng, SeedableRng};
    let mut rng = rand_chacha::ChaCha8Rng::seed_from_u64(args.seed);
    let mut failures = 0usize;
    let mut first_failure: Option<String> = None;

    // Exhaustive tridiagonal sweep over diagonals in {-2..2}^n.
    let mut tridiag_checked = 0usize;
    for n in 1..=args.max_dim {
        let mut d = vec![-2i64; n];
        loop {
            let check = check_tridiagonal_bound(&d);
            tridiag_checked += 1;
            if !check.holds {
                failures += 1;
                first_failure
                    .get_or_insert_with(|| format!("tridiagonal {}", tridiagonal(&d).to_json()));
            }
            let mut advanced = false;
            for i in (0..n).rev() {
                if d[i] < 2 {
                    d[i] += 1;
                    for v in d.iter_mut().skip(i + 1) {
                        *v = -2;
                    }
                    advanced = true;
                    break;
                }
            }
            if !advanced {
                break;
            }
        }
    }

    // Witness values: the negative-definite chain attains the bound and the
    // zero-heavy chains sit exactly at -1.
    let tight = check_tridiagonal_bound(&[-1, -2, -2]);
    if !args.json {
        println!(
            "witness T(-1,-2,-2): sigma {} bound {} slack {}",
            tight.sigma, tight.bound, tight.slack
        );
    }
    if !tight.holds || tight.slack != braidsig::sigcore::rat(0) {
        failures += 1;
    }
    for n_val in [1i64, 7] {
        let d = vec![0, n_val, 0, n_val, -1];
        let sigma = signature(&tridiagonal(&d)).signature();
        if !args.json {
            println!("witness T(0,{n_val},0,{n_val},-1): sigma {sigma}");
        }
        if sigma != -1 {
            failures += 1;
        }
    }

    // Random trisum specs.
    let mut trisum_checked = 0usize;
    while trisum_checked < args.trisum_count {
        let r = rng.gen_range(1..=6usize);
        let core: Vec<i64> = (0..r).map(|_| rng.gen_range(-5..=5)).collect();
        let nonpos: Vec<usize> = (0..r).filter(|&i| core[i] <= 0).collect();
        let k = if nonpos.is_empty() {
            0
        } else {
            rng.gen_range(0..=3usize)
        };
        let blocks: Vec<(usize, usize)> = (0..k)
            .map(|_| (rng.gen_range(0..=3), rng.gen_range(0..=3)))
            .collect();
        let attach: Vec<usize> = (0..k)
            .map(|_| nonpos[rng.gen_range(0..nonpos.len())] + 1)
            .collect();
        let spec = TrisumSpec {
            core,
            blocks,
            attach,
        };
        let check = check_trisum_bound(&spec).expect("valid spec");
        trisum_checked += 1;
        if !check.holds {
            failures += 1;
            let matrix = braidsig::sigcore::realize_trisum(&spec).expect("valid spec");
            first_failure
                .get_or_insert_with(|| format!("trisum {spec:?} = {}", matrix.to_json()));
        }
    }

    if args.json {
        println!(
            "{}",
            serde_json::json!({
                "tridiagonal_checked": tridiag_checked,
                "trisum_checked": trisum_checked,
                "failures": failures,
                "first_failure": first_failure,
            })
        );
    } else {
        println!(
            "checked {tridiag_checked} tridiagonals and {trisum_checked} trisum specs: {failures} failures"
        );
        if let Some(f) = &first_failure {
            println!("first failure: {f}");
        }
    }
    if failures == 0 {
        ExitCode::SUCCESS
    } else {
        ExitCode::from(1)
    }
}
