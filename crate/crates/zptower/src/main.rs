//! Command-line surface: layer materialization, spanning-tree counts,
//! Jacobians, characteristic elements, growth verdicts, dual towers, and the
//! golden-corpus verification harness.
//!
//! Exit codes: 0 ok, 2 parse error, 3 disconnected layer, 4 non-torsion
//! (vanishing determinant), 5 growth inconsistency, 6 dual-tower failure.

use clap::{Parser, Subcommand, ValueEnum};
use serde_json::Value;
use std::path::{Path, PathBuf};
use std::process::ExitCode;
use zptower::corpus::{self, DualExpectation};
use zptower::growth::{self, Slack};
use zptower::iwasawa::{char_element, chars_equal_up_to_unit};
use zptower::planar::dual_tower_check;
use zptower::report::{self, Failure};
use zptower::specfile::SpecFile;
use zptower::tower::TowerSpec;

#[derive(Parser)]
#[command(name = "zptower", version, about = "Branched Z_p^d towers of graphs")]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Clone, Copy, PartialEq, Eq, ValueEnum)]
enum Format {
    Json,
    Text,
}

#[derive(Subcommand)]
enum Command {
    /// Materialize the layer X_n and print its shape and labels.
    Layer {
        spec: PathBuf,
        #[arg(long, default_value_t = 1)]
        n: u32,
        #[arg(long, value_enum, default_value_t = Format::Json)]
        format: Format,
    },
    /// Spanning-tree count of X_n with its p-adic valuation.
    Kappa {
        spec: PathBuf,
        #[arg(long, default_value_t = 1)]
        n: u32,
    },
    /// Invariant factors of Jac(X_n).
    Jacobian {
        spec: PathBuf,
        #[arg(long, default_value_t = 1)]
        n: u32,
    },
    /// Characteristic element det(D − B) of the tower.
    Char { spec: PathBuf },
    /// Characteristic elements of Pic and Jac with their (mu, lambda).
    Invariants { spec: PathBuf },
    /// ord_p(kappa) series as CSV plus the consistency verdict.
    Growth {
        spec: PathBuf,
        #[arg(long = "max-n", default_value_t = 3)]
        max_n: u32,
        /// "auto" or a fixed nonnegative integer.
        #[arg(long, default_value = "auto")]
        slack: String,
        #[arg(long, value_enum, default_value_t = Format::Text)]
        format: Format,
    },
    /// Dual of the layer-n embedding plus the dual-tower report up to n.
    Dual {
        spec: PathBuf,
        #[arg(long, default_value_t = 1)]
        n: u32,
    },
    /// Run every golden-corpus assertion against a fixture directory.
    Verify {
        #[arg(long)]
        corpus: PathBuf,
    },
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    match run(cli) {
        Ok(code) => code,
        Err(e) => {
            eprintln!("error: {e}");
            ExitCode::from(e.code)
        }
    }
}

fn fail(code: u8, message: impl Into<String>) -> Failure {
    Failure { code, message: message.into() }
}

fn load_spec(path: &Path) -> Result<(SpecFile, TowerSpec), Failure> {
    let text = std::fs::read_to_string(path)
        .map_err(|e| fail(report::CODE_PARSE, format!("cannot read {}: {e}", path.display())))?;
    report::parse_spec(&text)
}

fn print_json(v: &Value) {
    println!("{}", serde_json::to_string_pretty(v).expect("serializable"));
}

fn run(cli: Cli) -> Result<ExitCode, Failure> {
    match cli.command {
        Command::Layer { spec, n, format } => {
            let (file, tower) = load_spec(&spec)?;
            let v = report::layer_report(&file, &tower, n)?;
            match format {
                Format::Json => print_json(&v),
                Format::Text => println!(
                    "layer {} of p={} d={}: {} vertices, {} edges, connected={}",
                    n, file.p, file.d, v["vertices"], v["edges"], v["connected"]
                ),
            }
            Ok(ExitCode::SUCCESS)
        }
        Command::Kappa { spec, n } => {
            let (file, tower) = load_spec(&spec)?;
            print_json(&report::kappa_report(&file, &tower, n)?);
            Ok(ExitCode::SUCCESS)
        }
        Command::Jacobian { spec, n } => {
            let (_, tower) = load_spec(&spec)?;
            print_json(&report::jacobian_report(&tower, n)?);
            Ok(ExitCode::SUCCESS)
        }
        Command::Char { spec } => {
            let (file, tower) = load_spec(&spec)?;
            let (v, warning) = report::char_report(&file, &tower)?;
            if let Some(w) = warning {
                eprintln!("warning: {w}");
            }
            print_json(&v);
            Ok(ExitCode::SUCCESS)
        }
        Command::Invariants { spec } => {
            let (file, tower) = load_spec(&spec)?;
            let (v, warning) = report::invariants_report(&file, &tower)?;
            if let Some(w) = warning {
                eprintln!("warning: {w}");
            }
            print_json(&v);
            Ok(ExitCode::SUCCESS)
        }
        Command::Growth { spec, max_n, slack, format } => {
            let (file, tower) = load_spec(&spec)?;
            let slack = match slack.as_str() {
                "auto" => Slack::Auto,
                s => Slack::Fixed(s.parse::<i128>().map_err(|_| {
                    fail(report::CODE_PARSE, format!("bad --slack value {s}"))
                })?),
            };
            let rep = report::growth_report(&file, &tower, max_n, slack)?;
            match format {
                Format::Text => {
                    println!("n,vertices,edges,kappa_ord,residual");
                    for l in &rep.verdict.series.layers {
                        println!(
                            "{},{},{},{},{}",
                            l.n,
                            l.vertices,
                            l.edges,
                            l.kappa_ord,
                            rep.verdict.residuals.residuals[l.n as usize]
                        );
                    }
                    println!(
                        "{}",
                        serde_json::to_string(&rep.json["verdict"]).expect("json")
                    );
                }
                Format::Json => print_json(&rep.json),
            }
            if !rep.verdict.consistent {
                if file.d >= 2 && rep.auto_slack {
                    eprintln!("warning: residuals exceed the auto slack");
                    return Ok(ExitCode::SUCCESS);
                }
                return Err(fail(
                    report::CODE_INCONSISTENT,
                    "growth series does not match the characteristic element",
                ));
            }
            Ok(ExitCode::SUCCESS)
        }
        Command::Dual { spec, n } => {
            let (file, tower) = load_spec(&spec)?;
            let rep = report::dual_report(&file, &tower, n)?;
            print_json(&rep.json);
            if !rep.report.pass {
                return Err(fail(
                    report::CODE_DUAL,
                    rep.report
                        .first_failure()
                        .unwrap_or_else(|| "dual ramified-count check failed".into()),
                ));
            }
            Ok(ExitCode::SUCCESS)
        }
        Command::Verify { corpus } => verify(&corpus),
    }
}

/// Runs every bundled golden assertion against the fixture directory; prints
/// one pass/fail line per example.
fn verify(dir: &Path) -> Result<ExitCode, Failure> {
    if !dir.is_dir() {
        return Err(fail(
            report::CODE_PARSE,
            format!("corpus directory {} missing", dir.display()),
        ));
    }
    let entries = corpus::entries();
    let mut any = false;
    let mut failures = 0usize;
    for entry in &entries {
        let path = dir.join(format!("{}.json", entry.name));
        if !path.exists() {
            println!("SKIP {} (fixture missing)", entry.name);
            continue;
        }
        any = true;
        match verify_entry(entry, &path) {
            Ok(()) => println!("PASS {}", entry.name),
            Err(msg) => {
                failures += 1;
                println!("FAIL {}: {msg}", entry.name);
            }
        }
    }
    if !any {
        return Err(fail(report::CODE_PARSE, "corpus directory has no known fixtures"));
    }
    if failures > 0 {
        return Err(fail(1, format!("{failures} fixture(s) failed")));
    }
    Ok(ExitCode::SUCCESS)
}

fn verify_entry(entry: &corpus::CorpusEntry, path: &Path) -> Result<(), String> {
    let text = std::fs::read_to_string(path).map_err(|e| e.to_string())?;
    let file = SpecFile::parse(&text).map_err(|e| e.to_string())?;
    let spec = file.to_tower().map_err(|e| e.to_string())?;

    // Characteristic element against the golden value, up to unit.
    if let Some(want) = &entry.char_pic {
        let got = char_element(&spec).map_err(|e| e.to_string())?;
        if !chars_equal_up_to_unit(&got, want, spec.group().p()) {
            return Err(format!(
                "char(Pic) expected {} up to unit, got {}",
                want.poly, got.poly
            ));
        }
    }

    // Layer sizes.
    for (n, &want) in entry.vertex_counts.iter().enumerate() {
        let got = spec.projected_vertex_count(n as u32);
        if got != want {
            return Err(format!("|V(X_{n})| expected {want}, got {got}"));
        }
    }

    // Growth against the characteristic element.
    let d = spec.group().d();
    if (d == 1 && entry.growth_n_max >= 3) || (d >= 2 && entry.growth_n_max >= 2) {
        let v = growth::consistency(&spec, entry.growth_n_max, Slack::Auto)
            .map_err(|e| e.to_string())?;
        if !v.consistent {
            return Err(format!(
                "growth inconsistent: predicted ({}, {}), series {:?}",
                v.predicted_mu, v.predicted_lambda, v.series.values
            ));
        }
    }

    // Dual tower expectations.
    match entry.dual {
        DualExpectation::Skip => {}
        DualExpectation::PassWith { totally_ramified } => {
            let (emb, outer) = file
                .base_embedding(&spec)
                .map_err(|e| e.to_string())?
                .ok_or("embedding missing")?;
            let explicit = file.layer_rotations().map_err(|e| e.to_string())?;
            let rep =
                dual_tower_check(&spec, &emb, outer, 2, &explicit).map_err(|e| e.to_string())?;
            if !rep.pass {
                return Err(format!(
                    "dual tower should pass: {}",
                    rep.first_failure().unwrap_or_default()
                ));
            }
            if rep.dual_totally_ramified != totally_ramified {
                return Err(format!(
                    "expected {totally_ramified} totally ramified dual vertices, got {}",
                    rep.dual_totally_ramified
                ));
            }
        }
        DualExpectation::FailAt(level) => {
            let (emb, outer) = file
                .base_embedding(&spec)
                .map_err(|e| e.to_string())?
                .ok_or("embedding missing")?;
            let explicit = file.layer_rotations().map_err(|e| e.to_string())?;
            let rep = dual_tower_check(&spec, &emb, outer, level, &explicit)
                .map_err(|e| e.to_string())?;
            let failed_at = rep
                .layers
                .iter()
                .find(|l| l.cover.is_err() || l.galois_ok.is_err())
                .map(|l| l.n);
            if failed_at != Some(level) {
                return Err(format!(
                    "dual tower should fail at level {level}, got {failed_at:?}"
                ));
            }
        }
    }
    Ok(())
}
