use std::fs;
use std::path::{Path, PathBuf};
use std::process::ExitCode;
use std::sync::Arc;

use clap::{Parser, Subcommand, ValueEnum};
use serde_json::{json, Value};

use radlayer::bundle::{fiber_constancy_probe, truncated_polynomial_presentation, two_vertex_presentation, TWO_VERTEX_RELATIONS};
use radlayer::construct::{witness_any, witness_dim1, witness_dimgt1, witness_exceptional};
use radlayer::layering::{exceptional_pair, h0_generic, h1_generic, nonempty_violation, roots_csv, roots_table};
use radlayer::rep::representation_field;
use radlayer::sampler::{brute_force_layerings, estimate_generic, DEFAULT_RETRY_BUDGET};
use radlayer::{
    algebra::presentation_field, components, generic_socdim, rad_nonempty, DimVec3, Field, FieldSpec, LayeringError,
    LayeringVector, LocalAlgebra, Presentation, PrimeField, Rationals, Representation, SamplerError,
};

#[derive(Parser)]
#[command(name = "radlayer", version, about = "Radical and socle layerings of cube-zero local algebras")]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Layerings whose strata give the irreducible components in dimension D
    Components {
        #[arg(long)]
        n: usize,
        #[arg(long)]
        d: usize,
        #[arg(long)]
        json: bool,
    },
    /// Whether a radical layering is realized by some module
    Exists {
        #[arg(long)]
        n: usize,
        #[arg(long)]
        layering: DimVec3,
    },
    /// Generic socle layering and h-values of a radical stratum
    Socdim {
        #[arg(long)]
        n: usize,
        #[arg(long)]
        layering: DimVec3,
        #[arg(long)]
        json: bool,
    },
    /// Build a module with a given radical layering and write it as JSON
    Construct {
        #[arg(long)]
        n: usize,
        #[arg(long)]
        layering: Option<DimVec3>,
        /// Exceptional family parameter
        #[arg(long, conflicts_with = "lemma")]
        a: Option<usize>,
        #[arg(long, value_enum)]
        lemma: Option<Lemma>,
        #[arg(long, default_value_t = 32003)]
        p: u64,
        #[arg(long)]
        seed: Option<u64>,
        #[arg(long)]
        out: Option<PathBuf>,
    },
    /// Load a representation and print its invariants
    Analyze {
        #[arg(long = "in")]
        input: PathBuf,
        #[arg(long)]
        json: bool,
    },
    /// Monte Carlo estimate of the generic socle layering
    Sample {
        #[arg(long)]
        n: usize,
        #[arg(long)]
        layering: DimVec3,
        #[arg(long, default_value_t = 200)]
        samples: usize,
        #[arg(long, default_value_t = 32003)]
        p: u64,
        #[arg(long)]
        seed: Option<u64>,
        #[arg(long)]
        json: bool,
    },
    /// Fiber dimensions over random points of a layered stratum
    Fibers {
        #[arg(long, required_unless_present = "example")]
        presentation: Option<PathBuf>,
        /// Built-in presentation: poly, ab+c2, bc, bab+bc2 or ba
        #[arg(long, conflicts_with = "presentation")]
        example: Option<String>,
        /// Prime for built-in examples
        #[arg(long, default_value_t = 3)]
        p: u64,
        #[arg(long)]
        layering: LayeringVector,
        #[arg(long, default_value_t = 100)]
        samples: usize,
        #[arg(long)]
        seed: Option<u64>,
        #[arg(long)]
        json: bool,
    },
    /// Roots of the Tits form in a square window, as CSV
    Roots {
        #[arg(long)]
        n: usize,
        #[arg(long)]
        max: usize,
        #[arg(long)]
        out: Option<PathBuf>,
    },
    /// Exhaustive layering enumeration over a small prime field
    Enumerate {
        #[arg(long)]
        n: usize,
        #[arg(long)]
        d: usize,
        #[arg(long, default_value_t = 3)]
        p: u64,
        #[arg(long, default_value_t = 10_000_000)]
        budget: u128,
    },
}

#[derive(Clone, Copy, ValueEnum)]
enum Lemma {
    Dim1,
    Dimgt1,
    Exceptional,
}

enum Failure {
    Verification(String),
    Usage(String),
    Budget(String),
}

impl Failure {
    fn code(&self) -> u8 {
        match self {
            Failure::Verification(_) => 1,
            Failure::Usage(_) => 2,
            Failure::Budget(_) => 3,
        }
    }

    fn message(&self) -> &str {
        match self {
            Failure::Verification(m) | Failure::Usage(m) | Failure::Budget(m) => m,
        }
    }
}

type Outcome = Result<(), Failure>;

fn usage(e: impl std::fmt::Display) -> Failure {
    Failure::Usage(e.to_string())
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    match run(cli.command) {
        Ok(()) => ExitCode::SUCCESS,
        Err(f) => {
            if !f.message().is_empty() {
                eprintln!("error: {}", f.message());
            }
            ExitCode::from(f.code())
        }
    }
}

fn run(command: Command) -> Outcome {
    match command {
        Command::Components { n, d, json } => {
            let report = components(n, d).map_err(usage)?;
            if json {
                print_json(&report.to_json());
            } else {
                print!("{}", report.to_text());
            }
            Ok(())
        }
        Command::Exists { n, layering } => {
            check_n(n)?;
            match nonempty_violation(n, layering) {
                None => println!("YES"),
                Some(reason) => println!("NO: {reason}"),
            }
            Ok(())
        }
        Command::Socdim { n, layering, json } => socdim(n, layering, json),
        Command::Construct { n, layering, a, lemma, p, seed, out } => {
            let field = PrimeField::new(p).map_err(usage)?;
            let alg = LocalAlgebra::standard(&field, n).map_err(usage)?;
            construct(&alg, layering, a, lemma, seed, out.as_deref())
        }
        Command::Analyze { input, json } => {
            let doc = read_json(&input)?;
            match representation_field(&doc).map_err(usage)? {
                FieldSpec::Prime { p } => analyze(&PrimeField::new(p).map_err(usage)?, &doc, json),
                FieldSpec::Rationals { .. } => analyze(&Rationals, &doc, json),
            }
        }
        Command::Sample { n, layering, samples, p, seed, json } => {
            let field = PrimeField::new(p).map_err(usage)?;
            let alg = LocalAlgebra::standard(&field, n).map_err(usage)?;
            let seed = resolve_seed(seed, !json)?;
            sample(&alg, layering, samples, seed, json)
        }
        Command::Fibers { presentation, example, p, layering, samples, seed, json } => {
            let seed = resolve_seed(seed, !json)?;
            match (presentation, example) {
                (Some(path), _) => {
                    let doc = read_json(&path)?;
                    match presentation_field(&doc).map_err(usage)? {
                        FieldSpec::Prime { p } => {
                            let f = PrimeField::new(p).map_err(usage)?;
                            fibers(Presentation::from_json(&f, &doc).map_err(usage)?, &layering, samples, seed, json)
                        }
                        FieldSpec::Rationals { .. } => {
                            fibers(Presentation::from_json(&Rationals, &doc).map_err(usage)?, &layering, samples, seed, json)
                        }
                    }
                }
                (None, Some(name)) => {
                    let f = PrimeField::new(p).map_err(usage)?;
                    let pres = if name == "poly" {
                        truncated_polynomial_presentation(&f)
                    } else {
                        two_vertex_presentation(&f, &name, 4)
                    }
                    .map_err(|e| {
                        usage(format!("{e}; known examples: poly, {}", TWO_VERTEX_RELATIONS.join(", ")))
                    })?;
                    fibers(pres, &layering, samples, seed, json)
                }
                (None, None) => Err(usage("one of --presentation or --example is required")),
            }
        }
        Command::Roots { n, max, out } => {
            check_n(n)?;
            let csv = roots_csv(&roots_table(n, max));
            match out {
                Some(path) => fs::write(&path, csv).map_err(|e| usage(format!("{}: {e}", path.display())))?,
                None => print!("{csv}"),
            }
            Ok(())
        }
        Command::Enumerate { n, d, p, budget } => enumerate(n, d, p, budget),
    }
}

fn check_n(n: usize) -> Outcome {
    if n < 2 {
        return Err(usage(LayeringError::BadN(n)));
    }
    Ok(())
}

fn print_json(v: &Value) {
    println!("{}", serde_json::to_string_pretty(v).expect("json value"));
}

fn read_json(path: &Path) -> Result<Value, Failure> {
    let text = fs::read_to_string(path).map_err(|e| usage(format!("{}: {e}", path.display())))?;
    serde_json::from_str(&text).map_err(|e| usage(format!("{}: {e}", path.display())))
}

fn resolve_seed(seed: Option<u64>, header: bool) -> Result<u64, Failure> {
    if let Some(s) = seed {
        return Ok(s);
    }
    if std::env::var("CI_MODE").is_ok_and(|v| v == "1") {
        return Err(usage("--seed is required when CI_MODE=1"));
    }
    let s = rand::random::<u64>();
    if header {
        println!("seed {s}");
    } else {
        eprintln!("seed {s}");
    }
    Ok(s)
}

fn socdim(n: usize, d: DimVec3, json: bool) -> Outcome {
    let h0 = h0_generic(n, d).map_err(usage)?;
    let h1 = h1_generic(n, d).map_err(usage)?;
    let nonempty = rad_nonempty(n, d);
    let soc = generic_socdim(n, d);
    if json {
        print_json(&json!({
            "layering": d,
            "nonempty": nonempty,
            "socdim": soc.as_ref().ok(),
            "h0": h0,
            "h1": h1,
        }));
        return Ok(());
    }
    if !nonempty {
        println!("stratum is empty: {}", nonempty_violation(n, d).unwrap_or_default());
    }
    match soc {
        Ok(s) => println!("generic socdim = {s}"),
        Err(e) => println!("generic socdim: {e}"),
    }
    println!("h0 = {h0}");
    println!("h1 = {h1}");
    Ok(())
}

fn construct<F: Field>(
    alg: &LocalAlgebra<F>,
    layering: Option<DimVec3>,
    a: Option<usize>,
    lemma: Option<Lemma>,
    seed: Option<u64>,
    out: Option<&Path>,
) -> Outcome {
    let n = alg.n();
    let need = || layering.ok_or_else(|| usage("--layering is required"));
    let (rep, expected) = match (a, lemma) {
        (Some(a), _) => {
            let d = exceptional_pair(n, a).0;
            if layering.is_some_and(|l| l != d) {
                return Err(usage(format!("--a {a} builds layering {d}")));
            }
            (witness_exceptional(alg, a).map_err(usage)?, d)
        }
        (None, Some(Lemma::Exceptional)) => {
            let d = need()?;
            if exceptional_pair(n, d.d0).0 != d {
                return Err(usage(format!("{d} is not (a, n(a−1), (n²−1)(a−1))")));
            }
            (witness_exceptional(alg, d.d0).map_err(usage)?, d)
        }
        (None, Some(Lemma::Dim1)) => {
            let d = need()?;
            if d.d1 != 1 {
                return Err(usage(format!("dim1 needs d1 = 1, got {d}")));
            }
            (witness_dim1(alg, d.d2, d.d0).map_err(usage)?, d)
        }
        (None, Some(Lemma::Dimgt1)) => {
            let d = need()?;
            if d.d2 + 1 != d.d1 * n {
                return Err(usage(format!("dimgt1 needs d2 = n·d1 − 1, got {d}")));
            }
            (witness_dimgt1(alg, d.d1, d.d0).map_err(usage)?, d)
        }
        (None, None) => {
            let d = need()?;
            if let Some(reason) = nonempty_violation(n, d) {
                return Err(usage(format!("{d} has an empty stratum: {reason}")));
            }
            let seed = resolve_seed(seed, out.is_some())?;
            (witness_any(alg, d, seed, DEFAULT_RETRY_BUDGET).map_err(|e| Failure::Verification(e.to_string()))?, d)
        }
    };
    let relations = rep.check_relations();
    let raddim = rep.raddim();
    if relations.is_err() || raddim != expected.to_layering() {
        return Err(Failure::Verification(format!("witness check failed: raddim {raddim}, relations {relations:?}")));
    }
    let text = serde_json::to_string_pretty(&rep.to_json()).expect("json value");
    match out {
        Some(path) => {
            fs::write(path, text + "\n").map_err(|e| usage(format!("{}: {e}", path.display())))?;
            println!("raddim = {raddim}, socdim = {}: verified, written to {}", rep.socdim(), path.display());
        }
        None => println!("{text}"),
    }
    Ok(())
}

fn analyze<F: Field>(field: &F, doc: &Value, json: bool) -> Outcome {
    let rep = Representation::from_json(field, doc).map_err(usage)?;
    let relations = rep.check_relations();
    let adapted = rep.adapt_basis();
    let h = adapted.h_invariants().ok();
    if json {
        print_json(&json!({
            "dims": rep.dims(),
            "relations": relations.as_ref().err().map(|v| v.to_string()),
            "raddim": rep.raddim(),
            "socdim": rep.socdim(),
            "h": h.map(|h| json!({"h0": h.h0, "h1": h.h1, "h0Dual": h.h0_dual, "h1Dual": h.h1_dual})),
            "blockSizes": adapted.block_sizes(),
            "blockForm": adapted.is_block_form(),
            "flagConditions": adapted.flag_conditions_hold(),
        }));
    } else {
        println!("field {}, dims {:?}", field.spec(), rep.dims());
        match &relations {
            Ok(()) => println!("relations: ok"),
            Err(v) => println!("relations: violated ({v})"),
        }
        println!("raddim = {}", rep.raddim());
        println!("socdim = {}", rep.socdim());
        if let Some(h) = h {
            println!("h0 = {}, h1 = {}, h0' = {}, h1' = {}", h.h0, h.h1, h.h0_dual, h.h1_dual);
        }
        println!(
            "adapted blocks {:?}: block form {}, flag conditions {}",
            adapted.block_sizes(),
            yes_no(adapted.is_block_form()),
            yes_no(adapted.flag_conditions_hold())
        );
    }
    match relations {
        Ok(()) => Ok(()),
        Err(v) => Err(Failure::Verification(format!("relation check failed: {v}"))),
    }
}

fn yes_no(b: bool) -> &'static str {
    if b {
        "yes"
    } else {
        "no"
    }
}

fn sample<F: Field>(alg: &LocalAlgebra<F>, d: DimVec3, samples: usize, seed: u64, json: bool) -> Outcome {
    let report = estimate_generic(alg, d, samples, seed).map_err(|e| match e {
        SamplerError::Budget { .. } => Failure::Budget(e.to_string()),
        other => usage(other),
    })?;
    let verdict = report.verdict();
    if json {
        let mut doc = report.to_json();
        doc["pass"] = json!(verdict.pass());
        print_json(&doc);
    } else {
        println!("n={} layering {} samples {} seed {}", report.n, report.layering, report.samples, report.seed);
        println!("{:<12}count", "socdim");
        for e in &report.histogram {
            println!("{:<12}{}", e.socdim.to_string(), e.count);
        }
        let shown = report.socdim_min.map_or_else(|| "none".to_string(), |s| s.to_string());
        let expected = verdict.expected_socdim.map_or_else(|| "no closed form".to_string(), |s| s.to_string());
        println!("h0 min = {} (closed form {})", report.h0_min, verdict.expected_h0);
        println!("h1 min = {} (closed form {})", report.h1_min, verdict.expected_h1);
        println!("attaining {}/{}", report.attaining, report.samples);
        if verdict.socdim_ok {
            println!("socdim min = {shown} — {}", pass_fail(verdict.pass()));
        } else {
            println!("socdim min = {shown} (closed form {expected}) — FAIL");
        }
    }
    if verdict.pass() {
        Ok(())
    } else {
        Err(Failure::Verification(String::new()))
    }
}

fn pass_fail(b: bool) -> &'static str {
    if b {
        "PASS"
    } else {
        "FAIL"
    }
}

fn fibers<F: Field>(pres: Presentation<F>, layering: &LayeringVector, samples: usize, seed: u64, json: bool) -> Outcome {
    let report = fiber_constancy_probe(&Arc::new(pres), layering, samples, seed).map_err(usage)?;
    if json {
        print_json(&report.to_json());
    } else {
        print!("{}", report.to_text());
    }
    Ok(())
}

fn enumerate(n: usize, d: usize, p: u64, budget: u128) -> Outcome {
    check_n(n)?;
    let found = brute_force_layerings(n, d, p, budget).map_err(|e| match e {
        SamplerError::Budget { .. } => Failure::Budget(e.to_string()),
        other => usage(other),
    })?;
    let predicted: Vec<DimVec3> = DimVec3::with_total(d).filter(|&v| rad_nonempty(n, v)).collect();
    let found: Vec<DimVec3> = found.into_iter().collect();
    let list = |v: &[DimVec3]| v.iter().map(|x| x.to_string()).collect::<Vec<_>>().join(" ");
    println!("enumerated over F_{p}: {}", list(&found));
    println!("predicted:           {}", list(&predicted));
    if found == predicted {
        println!("PASS");
        Ok(())
    } else {
        println!("FAIL");
        Err(Failure::Verification(String::new()))
    }
}
