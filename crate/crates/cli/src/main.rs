//! Command-line front end: data ingestion, report generation, enumeration
//! jobs, and the verification suites.
//!
//! Exit codes: 0 on success, 1 when a verification run found
//! counterexamples, 2 on usage or parse errors.

use std::io::Read;
use std::path::PathBuf;

use clap::{Parser, Subcommand, ValueEnum};

use positroid::affperm::{AffinePermutation, PermClass};
use positroid::bundles;
use positroid::error::Error;
use positroid::poisson::{self, GrassmannPoint};
use positroid::rankmat::{self, CyclicRankMatrix};
use positroid::ratmat::RatMat;
use positroid::verify::{self, Suite, VerifyConfig};

#[derive(Parser)]
#[command(name = "positroid", version, about = "Positroid strata of G(k,n), bundle dictionary, and the twisted standard Poisson structure, in exact arithmetic")]
struct Cli {
    #[command(subcommand)]
    command: Command,

    /// RNG seed for sampled suites.
    #[arg(long, global = true, default_value_t = 7)]
    seed: u64,

    /// Samples per (k, n) pair in sampled suites.
    #[arg(long, global = true, default_value_t = 100)]
    samples: usize,

    /// Largest n for exhaustive enumeration and sampling pairs.
    #[arg(long = "n-max", global = true, default_value_t = 5)]
    n_max: usize,

    /// Hard enumeration cap; raising it beyond 6 can be very slow.
    #[arg(long, global = true, default_value_t = 6)]
    cap: usize,

    /// Jacobi chart pairs, e.g. "1:2,1:3,2:4".
    #[arg(long = "jacobi-pairs", global = true, default_value = "1:2,1:3,2:4")]
    jacobi_pairs: String,

    #[arg(long, global = true, value_enum, default_value_t = Format::Json)]
    format: Format,

    /// Write the report to a file instead of stdout.
    #[arg(long, global = true)]
    output: Option<PathBuf>,
}

#[derive(Clone, Copy, PartialEq, Eq, ValueEnum)]
enum Format {
    Json,
    Csv,
    Text,
}

#[derive(Subcommand)]
enum Command {
    /// Stratum report for a rational matrix (JSON rows of integers or "p/q").
    Stratify {
        /// Input file; stdin when omitted or "-".
        file: Option<PathBuf>,
    },
    /// Bundle report for a plus affine permutation ({"n":..,"window":[..]}).
    Bundle { file: Option<PathBuf> },
    /// Classification, length, or orbit report of an affine permutation.
    Perm {
        #[arg(value_enum)]
        op: PermOp,
        file: Option<PathBuf>,
    },
    /// Build, check, or invert a cyclic rank matrix.
    Rankmat {
        #[arg(value_enum)]
        op: RankmatOp,
        file: Option<PathBuf>,
    },
    /// Enumerate B(k,n) or the plus coset in lexicographic window order.
    Enumerate {
        #[arg(long)]
        n: usize,
        #[arg(long)]
        k: i64,
        #[arg(long, value_enum, default_value_t = ClassArg::Bounded)]
        class: ClassArg,
    },
    /// Run a verification suite; exits 1 if counterexamples are found.
    Verify {
        /// roundtrip | prop_end | brackets | ranks | jacobi | axioms | bruhat | all
        suite: String,
    },
}

#[derive(Clone, Copy, PartialEq, Eq, ValueEnum)]
enum PermOp {
    Classify,
    Length,
    Orbits,
}

#[derive(Clone, Copy, PartialEq, Eq, ValueEnum)]
enum RankmatOp {
    Build,
    Check,
    Extract,
}

#[derive(Clone, Copy, PartialEq, Eq, ValueEnum)]
enum ClassArg {
    Bounded,
    Plus,
}

fn main() {
    let cli = Cli::parse();
    match run(&cli) {
        Ok(code) => std::process::exit(code),
        Err(e) => {
            eprintln!("error: {e}");
            std::process::exit(2);
        }
    }
}

fn read_input(file: &Option<PathBuf>) -> Result<String, Error> {
    match file {
        Some(p) if p.as_os_str() != "-" => std::fs::read_to_string(p)
            .map_err(|e| Error::Parse(format!("cannot read {}: {e}", p.display()))),
        _ => {
            let mut buf = String::new();
            std::io::stdin()
                .read_to_string(&mut buf)
                .map_err(|e| Error::Parse(format!("cannot read stdin: {e}")))?;
            Ok(buf)
        }
    }
}

fn parse_json(text: &str) -> Result<serde_json::Value, Error> {
    serde_json::from_str(text).map_err(|e| {
        Error::Parse(format!("invalid JSON at line {}, column {}: {e}", e.line(), e.column()))
    })
}

fn run(cli: &Cli) -> Result<i32, Error> {
    let (doc, exit_code) = match &cli.command {
        Command::Stratify { file } => (cmd_stratify(&read_input(file)?)?, 0),
        Command::Bundle { file } => (cmd_bundle(&read_input(file)?)?, 0),
        Command::Perm { op, file } => (cmd_perm(*op, &read_input(file)?)?, 0),
        Command::Rankmat { op, file } => (cmd_rankmat(*op, &read_input(file)?)?, 0),
        Command::Enumerate { n, k, class } => (cmd_enumerate(cli, *n, *k, *class)?, 0),
        Command::Verify { suite } => cmd_verify(cli, suite)?,
    };
    emit(cli, &doc)?;
    Ok(exit_code)
}

fn cmd_stratify(text: &str) -> Result<serde_json::Value, Error> {
    let matrix = RatMat::from_json(&parse_json(text)?)?;
    let point = GrassmannPoint::new(matrix)?;
    let report = poisson::leaf_report(&point)?;
    let r = rankmat::r_of_matrix(&point)?;
    let bivector = poisson::bivector(&point, positroid::BivectorMethod::ChiTwisted)?;
    Ok(serde_json::json!({
        "leaf_report": report.to_json(),
        "r_matrix": r.to_json(),
        "window": report.f.window(),
        "bivector": bivector.to_json(),
    }))
}

fn cmd_bundle(text: &str) -> Result<serde_json::Value, Error> {
    let f = AffinePermutation::from_json(&parse_json(text)?)?;
    let bundle = bundles::bundle_of_perm(&f)?;
    let a = bundles::a_of_bundle(&bundle)?;
    let ell = f.length()?;
    let p = f.compose_splus(1).orbit_decomposition()?.p();
    let end = bundles::end_dim(&bundle);
    let membership = bundles::membership(&bundle);
    Ok(serde_json::json!({
        "window": f.window(),
        "bundle": bundle.to_json(),
        "a_matrix": a.to_json(),
        "ell": ell,
        "p": p,
        "end_dim": end,
        "membership": {
            "in_U_plus": membership.in_u_plus,
            "in_U_plus_plus": membership.in_u_plus_plus,
        },
        "identity_ell_eq_end_minus_p": ell + p as u64 == end,
    }))
}

fn cmd_perm(op: PermOp, text: &str) -> Result<serde_json::Value, Error> {
    let f = AffinePermutation::from_json(&parse_json(text)?)?;
    match op {
        PermOp::Classify => {
            let c = f.classify();
            Ok(serde_json::json!({
                "n": f.n(),
                "window": f.window(),
                "k": c.k,
                "bounded": c.bounded,
                "plus": c.plus,
                "strict_plus": c.strict_plus,
            }))
        }
        PermOp::Length => Ok(serde_json::json!({
            "window": f.window(),
            "ell": f.length()?,
        })),
        PermOp::Orbits => {
            let decomp = f.orbit_decomposition()?;
            Ok(decomp.to_json())
        }
    }
}

fn cmd_rankmat(op: RankmatOp, text: &str) -> Result<serde_json::Value, Error> {
    let value = parse_json(text)?;
    match op {
        RankmatOp::Build => {
            let f = AffinePermutation::from_json(&value)?;
            Ok(rankmat::r_of_perm(&f)?.to_json())
        }
        RankmatOp::Check => {
            let r = CyclicRankMatrix::from_json(&value)?;
            Ok(rankmat::check_axioms(&r).to_json())
        }
        RankmatOp::Extract => {
            let r = CyclicRankMatrix::from_json(&value)?;
            Ok(rankmat::perm_of_r(&r)?.to_json())
        }
    }
}

fn cmd_enumerate(cli: &Cli, n: usize, k: i64, class: ClassArg) -> Result<serde_json::Value, Error> {
    let class_enum = match class {
        ClassArg::Bounded => PermClass::Bounded,
        ClassArg::Plus => PermClass::Plus,
    };
    let perms = AffinePermutation::enumerate_with_cap(n, k, class_enum, cli.cap)?;
    Ok(serde_json::json!({
        "n": n,
        "k": k,
        "class": match class { ClassArg::Bounded => "bounded", ClassArg::Plus => "plus" },
        "count": perms.len(),
        "windows": perms.iter().map(|f| f.window().to_vec()).collect::<Vec<_>>(),
    }))
}

fn parse_jacobi_pairs(spec: &str) -> Result<Vec<(usize, usize)>, Error> {
    spec.split(',')
        .map(|pair| {
            let (k, n) = pair
                .split_once(':')
                .ok_or_else(|| Error::Parse(format!("bad jacobi pair {pair:?}, want k:n")))?;
            let k = k.trim().parse().map_err(|_| Error::Parse(format!("bad k in {pair:?}")))?;
            let n = n.trim().parse().map_err(|_| Error::Parse(format!("bad n in {pair:?}")))?;
            Ok((k, n))
        })
        .collect()
}

fn cmd_verify(cli: &Cli, suite: &str) -> Result<(serde_json::Value, i32), Error> {
    if cli.n_max > cli.cap {
        return Err(Error::LimitExceeded { n: cli.n_max, cap: cli.cap });
    }
    let cfg = VerifyConfig {
        seed: cli.seed,
        samples: cli.samples,
        n_max: cli.n_max,
        jacobi_pairs: parse_jacobi_pairs(&cli.jacobi_pairs)?,
    };
    let reports = if suite == "all" {
        verify::run_all(&cfg)
    } else {
        let s = Suite::parse(suite)
            .ok_or_else(|| Error::Parse(format!("unknown suite {suite:?}")))?;
        vec![verify::run_suite(s, &cfg)]
    };
    let passed = reports.iter().all(|r| r.passed());
    let doc = serde_json::json!({
        "config": {
            "seed": cfg.seed,
            "samples": cfg.samples,
            "n_max": cfg.n_max,
            "jacobi_pairs": cfg.jacobi_pairs.iter().map(|&(k, n)| format!("{k}:{n}")).collect::<Vec<_>>(),
        },
        "reports": reports.iter().map(|r| r.to_json()).collect::<Vec<_>>(),
        "passed": passed,
    });
    Ok((doc, if passed { 0 } else { 1 }))
}

/// Flattens a JSON document into (path, scalar) rows for text and csv.
fn flatten(prefix: &str, v: &serde_json::Value, out: &mut Vec<(String, String)>) {
    match v {
        serde_json::Value::Object(map) => {
            for (key, val) in map {
                let path = if prefix.is_empty() { key.clone() } else { format!("{prefix}.{key}") };
                flatten(&path, val, out);
            }
        }
        serde_json::Value::Array(items) => {
            if items.iter().all(|i| !i.is_object() && !i.is_array()) {
                let joined = items
                    .iter()
                    .map(|i| match i {
                        serde_json::Value::String(s) => s.clone(),
                        other => other.to_string(),
                    })
                    .collect::<Vec<_>>()
                    .join(" ");
                out.push((prefix.to_string(), format!("[{joined}]")));
            } else {
                for (idx, item) in items.iter().enumerate() {
                    flatten(&format!("{prefix}[{idx}]"), item, out);
                }
            }
        }
        serde_json::Value::String(s) => out.push((prefix.to_string(), s.clone())),
        other => out.push((prefix.to_string(), other.to_string())),
    }
}

fn render(cli: &Cli, doc: &serde_json::Value) -> String {
    match cli.format {
        Format::Json => {
            let mut s = serde_json::to_string_pretty(doc).expect("serializable document");
            s.push('\n');
            s
        }
        Format::Text => {
            let mut rows = Vec::new();
            flatten("", doc, &mut rows);
            let mut s = String::new();
            for (path, value) in rows {
                s.push_str(&format!("{path} = {value}\n"));
            }
            s
        }
        Format::Csv => {
            let mut rows = Vec::new();
            flatten("", doc, &mut rows);
            let mut s = String::from("key,value\n");
            for (path, value) in rows {
                let quoted = if value.contains(',') || value.contains('"') {
                    format!("\"{}\"", value.replace('"', "\"\""))
                } else {
                    value
                };
                s.push_str(&format!("{path},{quoted}\n"));
            }
            s
        }
    }
}

fn emit(cli: &Cli, doc: &serde_json::Value) -> Result<(), Error> {
    let rendered = render(cli, doc);
    match &cli.output {
        Some(path) => std::fs::write(path, rendered)
            .map_err(|e| Error::Parse(format!("cannot write {}: {e}", path.display()))),
        None => {
            print!("{rendered}");
            Ok(())
        }
    }
}
