//! Command-line front end for the `weyldet` engine.
//!
//! One subcommand per capability: normalized products (`mul`), principal
//! symbols (`symbol`), left common multiples (`lcm`), traced Gaussian
//! reduction (`reduce`), determinants (`det`), elementary-word verification
//! (`verify`), invertibility reports (`invertible`), the built-in Cohn demo
//! (`cohn`), and the randomized re-factorization probe (`explore`).
//!
//! Exit codes: `0` success, `1` domain failure (parse errors, verification
//! mismatches, engine errors), `2` usage errors (malformed flags).

use std::fmt::Write as _;
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand};
use weyldet::{
    check_det_one, cohn_matrix, conjecture_probe, det_f_with, format_symbol, format_weyl,
    gauss_reduce_with, left_ore_pair, parse_matrix_document, parse_weyl_expr, Error,
    MatrixDocument, OreSearchConfig, ProbeConfig, ReduceOptions, ReductionTrace, WeylMatrix,
};

#[derive(Parser)]
#[command(name = "weyldet", version, about = "Exact determinants over Weyl algebras")]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

/// Flags shared by the subcommands that read a matrix from a JSON file.
#[derive(Args)]
struct MatrixInput {
    /// Path to a matrix document: {"m":…,"n":…,"entries":[[…]]}
    #[arg(long)]
    file: String,
}

#[derive(Args)]
struct OreBound {
    /// Cap on the total degree scanned for left common multiples
    #[arg(long)]
    max_bound: Option<u32>,
}

#[derive(Subcommand)]
enum Command {
    /// Compute det_F of a matrix
    Det {
        #[command(flatten)]
        input: MatrixInput,
        /// Print the reduction steps after re-verifying them
        #[arg(long)]
        trace: bool,
        /// Emit machine-readable JSON instead of text
        #[arg(long)]
        json: bool,
        #[command(flatten)]
        bound: OreBound,
    },
    /// Print the principal symbol of an expression
    Symbol {
        /// Number of Weyl variable pairs (x1..xm, d1..dm)
        #[arg(long)]
        m: usize,
        /// Expression such as "d1^2 + x1*d1"
        expr: String,
    },
    /// Multiply two expressions and print the normal form
    Mul {
        #[arg(long)]
        m: usize,
        left: String,
        right: String,
    },
    /// Find u, v with u*a = v*b (a left common multiple)
    Lcm {
        #[arg(long)]
        m: usize,
        a: String,
        b: String,
        #[command(flatten)]
        bound: OreBound,
    },
    /// Reduce a matrix to upper-triangular form by row operations
    Reduce {
        #[command(flatten)]
        input: MatrixInput,
        /// Print the reduction steps after re-verifying them
        #[arg(long)]
        trace: bool,
        #[arg(long)]
        json: bool,
        #[command(flatten)]
        bound: OreBound,
    },
    /// Check that a word of elementary matrices multiplies to a target
    Verify {
        /// Path to a word document: {"m":…,"n":…,"letters":[…],"target":[[…]]}
        #[arg(long)]
        file: String,
        #[arg(long)]
        json: bool,
    },
    /// Report whether a matrix is invertible over the Weyl algebra
    Invertible {
        #[command(flatten)]
        input: MatrixInput,
        #[arg(long)]
        json: bool,
    },
    /// Built-in demo: the Cohn matrix and its determinant
    Cohn {
        #[arg(long)]
        json: bool,
    },
    /// Sample random elementary words and probe re-factorization over F(0)
    Explore {
        #[arg(long)]
        m: usize,
        /// Seed for the deterministic sampler
        #[arg(long)]
        seed: u64,
        /// Number of words to sample
        #[arg(long)]
        trials: Option<u64>,
        /// Letters per word
        #[arg(long)]
        word_length: Option<usize>,
        #[arg(long)]
        json: bool,
    },
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    match run(cli.command) {
        Ok(()) => ExitCode::SUCCESS,
        Err(failure) => {
            eprintln!("error: {failure}");
            ExitCode::FAILURE
        }
    }
}

fn run(command: Command) -> Result<(), Error> {
    match command {
        Command::Det { input, trace, json, bound } => det(&input.file, trace, json, bound),
        Command::Symbol { m, expr } => {
            let element = parse_weyl_expr(&expr, m)?;
            println!("{}", format_symbol(&element.principal_symbol()));
            Ok(())
        }
        Command::Mul { m, left, right } => {
            let product = &parse_weyl_expr(&left, m)? * &parse_weyl_expr(&right, m)?;
            println!("{}", format_weyl(&product));
            Ok(())
        }
        Command::Lcm { m, a, b, bound } => lcm(m, &a, &b, bound),
        Command::Reduce { input, trace, json, bound } => reduce(&input.file, trace, json, bound),
        Command::Verify { file, json } => verify(&file, json),
        Command::Invertible { input, json } => invertible(&input.file, json),
        Command::Cohn { json } => cohn(json),
        Command::Explore { m, seed, trials, word_length, json } => {
            explore(m, seed, trials, word_length, json)
        }
    }
}

fn read_matrix(path: &str) -> Result<WeylMatrix, Error> {
    let text = std::fs::read_to_string(path)
        .map_err(|e| Error::Format(format!("cannot read {path}: {e}")))?;
    parse_matrix_document(&text)
}

fn reduce_options(bound: OreBound) -> ReduceOptions {
    ReduceOptions { max_bound: bound.max_bound, ..ReduceOptions::default() }
}

/// Re-verifies a trace against its input and renders the steps in the order
/// they were applied, oldest first.
fn render_trace(trace: &ReductionTrace, input: &WeylMatrix) -> Result<String, Error> {
    if !trace.verify(input) {
        return Err(Error::InternalInconsistency(
            "trace replay does not reproduce the triangular matrix".into(),
        ));
    }
    let mut out = String::new();
    for (i, step) in trace.steps.iter().rev().enumerate() {
        writeln!(out, "step {}: {step}", i + 1).expect("string write");
    }
    Ok(out)
}

fn matrix_rows_text(matrix: &WeylMatrix) -> Vec<Vec<String>> {
    matrix
        .to_rows()
        .iter()
        .map(|row| row.iter().map(format_weyl).collect())
        .collect()
}

fn det(path: &str, trace: bool, json: bool, bound: OreBound) -> Result<(), Error> {
    let matrix = read_matrix(path)?;
    let result = det_f_with(&matrix, &reduce_options(bound))?;
    let steps = if trace { Some(render_trace(&result.trace, &matrix)?) } else { None };
    if json {
        let body = serde_json::json!({
            "det": format_symbol(&result.value),
            "numerator": format_symbol(&result.numerator),
            "denominator": format_symbol(&result.denominator),
            "steps": result.trace.steps.iter().rev().map(|s| s.to_string()).collect::<Vec<_>>(),
        });
        println!("{body}");
    } else {
        if let Some(steps) = steps {
            print!("{steps}");
        }
        println!("det_F = {}", format_symbol(&result.value));
    }
    Ok(())
}

fn lcm(m: usize, a: &str, b: &str, bound: OreBound) -> Result<(), Error> {
    let a = parse_weyl_expr(a, m)?;
    let b = parse_weyl_expr(b, m)?;
    let config = match bound.max_bound {
        Some(max_bound) => OreSearchConfig { max_bound },
        None => OreSearchConfig::for_pair(&a, &b)?,
    };
    let pair = left_ore_pair(&a, &b, &config)?;
    println!("u = {}", format_weyl(pair.u()));
    println!("v = {}", format_weyl(pair.v()));
    println!(
        "u*({}) = v*({}) = {}",
        format_weyl(&a),
        format_weyl(&b),
        format_weyl(pair.common_multiple())
    );
    Ok(())
}

fn reduce(path: &str, trace: bool, json: bool, bound: OreBound) -> Result<(), Error> {
    let matrix = read_matrix(path)?;
    let result = gauss_reduce_with(&matrix, &reduce_options(bound))?;
    let steps = if trace { Some(render_trace(&result, &matrix)?) } else { None };
    if json {
        let body = serde_json::json!({
            "triangular": matrix_rows_text(&result.triangular),
            "steps": result.steps.iter().rev().map(|s| s.to_string()).collect::<Vec<_>>(),
        });
        println!("{body}");
    } else {
        if let Some(steps) = steps {
            print!("{steps}");
        }
        println!("{}", result.triangular);
    }
    Ok(())
}

/// On-disk form of one elementary letter inside a word document.
#[derive(serde::Deserialize)]
struct LetterDocument {
    row: usize,
    col: usize,
    coefficient: String,
}

/// On-disk form of a `verify` input: a word of elementary letters and the
/// matrix the word is claimed to multiply to.
#[derive(serde::Deserialize)]
struct WordDocument {
    m: usize,
    n: usize,
    letters: Vec<LetterDocument>,
    target: Vec<Vec<String>>,
}

fn verify(path: &str, json: bool) -> Result<(), Error> {
    let text = std::fs::read_to_string(path)
        .map_err(|e| Error::Format(format!("cannot read {path}: {e}")))?;
    let doc: WordDocument =
        serde_json::from_str(&text).map_err(|e| Error::Format(format!("bad word document: {e}")))?;
    if doc.m < 1 {
        return Err(Error::Format("field \"m\" must be at least 1".into()));
    }
    let mut word = Vec::with_capacity(doc.letters.len());
    for (i, letter) in doc.letters.iter().enumerate() {
        let coefficient = parse_weyl_expr(&letter.coefficient, doc.m).map_err(|e| match e {
            Error::Syntax { position, message } => Error::Syntax {
                position,
                message: format!("letter {}: {message}", i + 1),
            },
            other => other,
        })?;
        word.push(weyldet::ElementaryDescriptor::new(doc.n, letter.row, letter.col, coefficient));
    }
    let target_doc = MatrixDocument {
        m: doc.m,
        n: doc.n,
        entries: doc.target,
        label: None,
    };
    let target = target_doc.to_matrix()?;
    let verified = weyldet::verify_elementary_product(&word, &target)?;
    if json {
        println!("{}", serde_json::json!({ "verified": verified }));
    } else if verified {
        println!("verified: the word multiplies to the target and det_F = 1");
    } else {
        println!("mismatch: the word does not multiply to the target");
    }
    if verified {
        Ok(())
    } else {
        Err(Error::InternalInconsistency("verification failed".into()))
    }
}

fn invertible(path: &str, json: bool) -> Result<(), Error> {
    let matrix = read_matrix(path)?;
    let report = check_det_one(&matrix)?;
    let invertible = weyldet::is_invertible(&matrix)?;
    if json {
        let body = serde_json::json!({
            "det": format_symbol(&report.det),
            "invertible": invertible,
            "det_is_one": report.is_one,
            "verdict": report.verdict,
        });
        println!("{body}");
    } else {
        println!("det_F = {}", format_symbol(&report.det));
        println!("invertible: {invertible}");
        println!("{}", report.verdict);
    }
    Ok(())
}

fn cohn(json: bool) -> Result<(), Error> {
    let matrix = cohn_matrix();
    let result = det_f_with(&matrix, &ReduceOptions::default())?;
    // Independent route: the entries are order zero, so the determinant must
    // equal the classical determinant of the symbol matrix.
    let symbol_rows: Vec<Vec<_>> = matrix
        .to_rows()
        .iter()
        .map(|row| row.iter().map(|e| e.principal_symbol()).collect())
        .collect();
    let classical = weyldet::commutative_det(&symbol_rows);
    if result.value != classical {
        return Err(Error::InternalInconsistency(
            "reduction and commutative routes disagree on the Cohn determinant".into(),
        ));
    }
    let report = check_det_one(&matrix)?;
    if json {
        let body = serde_json::json!({
            "matrix": matrix_rows_text(&matrix),
            "det": format_symbol(&result.value),
            "classical_det": format_symbol(&classical),
            "verdict": report.verdict,
        });
        println!("{body}");
    } else {
        println!("{matrix}");
        println!("det_F = {} (reduction route)", format_symbol(&result.value));
        println!("det_F = {} (commutative route)", format_symbol(&classical));
        println!("{}", report.verdict);
    }
    Ok(())
}

fn explore(
    m: usize,
    seed: u64,
    trials: Option<u64>,
    word_length: Option<usize>,
    json: bool,
) -> Result<(), Error> {
    let mut config = ProbeConfig::new(m, seed);
    if let Some(trials) = trials {
        config.trials = trials;
    }
    if let Some(word_length) = word_length {
        config.word_length = word_length;
    }
    let report = conjecture_probe(&config)?;
    if json {
        println!("{}", report.to_json());
    } else {
        println!("{}", report.summary());
    }
    Ok(())
}
