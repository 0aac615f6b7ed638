use std::path::{Path, PathBuf};
use std::process::ExitCode;
use std::sync::Arc;

use clap::{Parser, Subcommand, ValueEnum};
use serde_json::{json, Value};

use stabgrowth::checks::{check_names, check_registry, run_checks, CheckContext, Status};
use stabgrowth::lamplighter::{evaluate_word_w, evaluate_word_wm};
use stabgrowth::lef::lef_certificate;
use stabgrowth::neumann::{
    conjugation_density, cosofic_approximant, finite_quotient, folner_ratio, folner_set, NeumannElement, SequenceSpec,
    Triviality,
};
use stabgrowth::rational::{format_rational, parse_rational};
use stabgrowth::seqgen::{generate, verify_sequence, GrowthTarget, DEFAULT_C};
use stabgrowth::stability::{
    defect_solvers, global_defect_with, local_defect, pad_block_solution, regular_lift, sample_and_substitute,
    PermTuple, DEFAULT_DEGREE_CAP,
};
use stabgrowth::words::{ball, FreeWord, RelationSet};
use stabgrowth::{Error, Rational, Result};

const DEFAULT_CAP: usize = 100_000;

#[derive(Parser)]
#[command(name = "stabgrowth", version, about = "Generalized Neumann groups and permutation stability")]
struct Cli {
    /// Machine-readable JSON output.
    #[arg(long, global = true)]
    json: bool,

    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Generate the first N terms of a (d, r) sequence.
    GenSeq {
        /// Growth function (`const:1`, `poly:c,k`, `exp:b`, `tower:h`, `table:x=y,...`) or a table file.
        #[arg(long = "F", default_value = "const:1")]
        f: String,
        #[arg(long = "C", default_value_t = DEFAULT_C)]
        c: u64,
        #[arg(long = "N")]
        n: usize,
        #[arg(long)]
        out: Option<PathBuf>,
    },
    /// Check a sequence spec term by term; fails unless every construction condition holds.
    VerifySeq {
        spec: PathBuf,
        #[arg(long = "N")]
        n: Option<usize>,
    },
    /// Evaluate a word at a coordinate, in the lamplighter group, or under a permutation tuple.
    Eval {
        #[arg(long)]
        word: String,
        #[arg(long)]
        spec: Option<PathBuf>,
        /// Coordinate index (with --spec).
        #[arg(long)]
        n: Option<usize>,
        /// Evaluate in W_m instead of W (without --spec).
        #[arg(long)]
        m: Option<usize>,
        /// Two-line permutation tuple file.
        #[arg(long)]
        perms: Option<PathBuf>,
    },
    /// Decide whether a word is trivial in G(d, r).
    Wp {
        #[arg(long)]
        spec: PathBuf,
        #[arg(long)]
        word: String,
    },
    /// Image of a word in the lamplighter group.
    Tau {
        #[arg(long)]
        word: String,
    },
    /// List the reduced words of length at most l.
    Ball {
        #[arg(long)]
        l: usize,
    },
    /// Run the Sample-and-Substitute test.
    Sas {
        #[arg(long)]
        perms: PathBuf,
        #[arg(long)]
        relations: PathBuf,
        #[arg(long, value_parser = parse_rational)]
        delta: Rational,
        #[arg(long, default_value_t = 0.99)]
        confidence: f64,
        #[arg(long, default_value_t = 0)]
        seed: u64,
    },
    /// Local or global defect of a permutation tuple.
    Defect {
        #[arg(long, value_enum)]
        mode: DefectMode,
        #[arg(long)]
        perms: PathBuf,
        #[arg(long)]
        relations: PathBuf,
        #[arg(long, default_value = "exhaustive")]
        solver: String,
        #[arg(long, default_value_t = DEFAULT_DEGREE_CAP)]
        cap_degree: usize,
    },
    /// Pad a solution with fixed points so that one relator moves between delta/2 and delta of all points.
    Pad {
        #[arg(long)]
        perms: PathBuf,
        #[arg(long)]
        word: String,
        #[arg(long, value_parser = parse_rational)]
        delta: Rational,
        /// Replace the tuple by the regular action of the group it generates first.
        #[arg(long)]
        regularize: bool,
        #[arg(long)]
        out: Option<PathBuf>,
    },
    /// Boundary ratio |F s \ F| / |F| of a Følner set.
    Folner {
        #[arg(long)]
        spec: PathBuf,
        #[arg(long)]
        n: usize,
        #[arg(long)]
        m: Option<u64>,
        #[arg(long, default_value = "a")]
        generator: String,
        #[arg(long, default_value_t = DEFAULT_CAP)]
        cap: usize,
    },
    /// Image in the finite quotient P_n, or the bijection check on F_n without --word.
    Quotient {
        #[arg(long)]
        spec: PathBuf,
        #[arg(long)]
        n: usize,
        #[arg(long)]
        m: Option<u64>,
        #[arg(long)]
        word: Option<String>,
        #[arg(long, default_value_t = DEFAULT_CAP)]
        cap: usize,
    },
    /// Fraction of the Følner set conjugating g into G_n L_{m_n}.
    Density {
        #[arg(long)]
        spec: PathBuf,
        #[arg(long)]
        n: usize,
        #[arg(long)]
        m: Option<u64>,
        #[arg(long)]
        word: String,
        #[arg(long, default_value_t = DEFAULT_CAP)]
        cap: usize,
    },
    /// Finite-index approximant of H and the densities p_n(g).
    Cosofic {
        #[arg(long)]
        spec: PathBuf,
        #[arg(long)]
        n: usize,
        #[arg(long)]
        m: Option<u64>,
        /// Comma-separated generators of H.
        #[arg(long = "H", value_delimiter = ',')]
        h: Vec<String>,
        /// Comma-separated test elements.
        #[arg(long = "g", value_delimiter = ',')]
        g: Vec<String>,
        #[arg(long, default_value_t = DEFAULT_CAP)]
        cap: usize,
    },
    /// Local-embedding certificate for the ball of radius l.
    Lef {
        #[arg(long)]
        spec: PathBuf,
        #[arg(long)]
        l: usize,
        #[arg(long)]
        out: Option<PathBuf>,
    },
    /// Run the verification checks and print a pass/fail table.
    VerifyPaper {
        #[arg(long)]
        spec: Option<PathBuf>,
        /// Run only these checks.
        #[arg(long, value_delimiter = ',')]
        only: Vec<String>,
        /// List the available checks and exit.
        #[arg(long)]
        list: bool,
        #[arg(long, default_value_t = 20_000)]
        cap: usize,
        #[arg(long, default_value_t = 0)]
        seed: u64,
    },
}

#[derive(Clone, Copy, ValueEnum)]
enum DefectMode {
    Local,
    Global,
}

/// Output of one subcommand: human text, JSON, and whether it counts as success.
struct Report {
    human: String,
    json: Value,
    ok: bool,
}

impl Report {
    fn ok(human: impl Into<String>, json: Value) -> Self {
        Self { human: human.into(), json, ok: true }
    }
}

fn load_spec(path: &Path) -> Result<Arc<SequenceSpec>> {
    Ok(Arc::new(SequenceSpec::load(path)?))
}

fn parse_word(s: &str) -> Result<FreeWord> {
    s.parse()
}

fn load_tuple(path: &Path) -> Result<PermTuple> {
    PermTuple::parse(&std::fs::read_to_string(path)?)
}

fn load_relations(path: &Path) -> Result<RelationSet> {
    RelationSet::parse(&std::fs::read_to_string(path)?)
}

fn growth_spec(f: &str) -> Result<String> {
    let path = Path::new(f);
    if path.is_file() {
        Ok(format!("table:{}", std::fs::read_to_string(path)?))
    } else {
        Ok(f.to_string())
    }
}

fn write_or_print(out: Option<&Path>, text: &str) -> Result<String> {
    match out {
        Some(path) => {
            std::fs::write(path, text)?;
            Ok(format!("wrote {}", path.display()))
        }
        None => Ok(text.to_string()),
    }
}

fn rat(x: &Rational) -> Value {
    Value::String(format_rational(x))
}

fn run(cli: &Cli) -> Result<Report> {
    match &cli.command {
        Command::GenSeq { f, c, n, out } => {
            let spec = generate(&GrowthTarget::from_spec(&growth_spec(f)?, *c)?, *n)?;
            let text = spec.to_json()?;
            let human = write_or_print(out.as_deref(), &text)?;
            Ok(Report::ok(human, serde_json::from_str(&text)?))
        }
        Command::VerifySeq { spec, n } => {
            let spec = SequenceSpec::load(spec)?;
            let count = n.unwrap_or(spec.horizon());
            let report = verify_sequence(&spec, count)?;
            let mut lines: Vec<String> =
                report.indices.iter().map(serde_json::to_string).collect::<std::result::Result<_, _>>()?;
            lines.push(
                json!({
                    "toy_grade": report.toy_grade,
                    "theorem_grade": report.theorem_grade,
                    "congruence_checks": report.congruence_checks,
                    "congruence_violations": report.congruence_violations(),
                })
                .to_string(),
            );
            Ok(Report { human: lines.join("\n"), json: serde_json::to_value(&report)?, ok: report.theorem_grade })
        }
        Command::Eval { word, spec, n, m, perms } => {
            let w = parse_word(word)?;
            match (spec, perms) {
                (Some(spec), None) => {
                    let n = n.ok_or_else(|| Error::InvalidArgument("--n is required with --spec".into()))?;
                    let g = NeumannElement::new(&load_spec(spec)?, w);
                    let p = g.coordinate(n)?;
                    Ok(Report::ok(p.to_string(), json!({ "word": word, "coordinate": n, "image": p.to_string() })))
                }
                (None, Some(perms)) => {
                    let p = load_tuple(perms)?.evaluate(&w);
                    Ok(Report::ok(p.to_string(), json!({ "word": word, "image": p.to_string() })))
                }
                (None, None) => {
                    let text = match m {
                        Some(m) => evaluate_word_wm(&w, *m).to_string(),
                        None => evaluate_word_w(&w).to_string(),
                    };
                    Ok(Report::ok(text.clone(), json!({ "word": word, "image": text })))
                }
                (Some(_), Some(_)) => Err(Error::InvalidArgument("use either --spec or --perms".into())),
            }
        }
        Command::Wp { spec, word } => {
            let spec = load_spec(spec)?;
            let w = parse_word(word)?;
            let threshold = spec.threshold(w.len() as u64)?;
            let verdict = NeumannElement::new(&spec, w).triviality()?;
            let witness = match verdict {
                Triviality::Trivial => Value::Null,
                Triviality::Coordinate(n) => json!({ "coordinate": n }),
                Triviality::Lamplighter => json!("lamplighter"),
            };
            Ok(Report::ok(
                verdict.to_string(),
                json!({ "word": word, "trivial": verdict.is_trivial(), "witness": witness, "threshold": threshold }),
            ))
        }
        Command::Tau { word } => {
            let t = evaluate_word_w(&parse_word(word)?);
            Ok(Report::ok(t.to_string(), json!({ "word": word, "image": t.to_string(), "identity": t.is_identity() })))
        }
        Command::Ball { l } => {
            let words: Vec<String> = ball(*l).iter().map(ToString::to_string).collect();
            Ok(Report::ok(words.join("\n"), json!({ "radius": l, "size": words.len(), "words": words })))
        }
        Command::Sas { perms, relations, delta, confidence, seed } => {
            let rho = load_tuple(perms)?;
            let e = load_relations(relations)?;
            let v = sample_and_substitute(&rho, &e, *delta, *confidence, *seed)?;
            let value = serde_json::to_value(&v)?;
            Ok(Report { human: serde_json::to_string_pretty(&value)?, json: value, ok: v.passed() })
        }
        Command::Defect { mode, perms, relations, solver, cap_degree } => {
            let rho = load_tuple(perms)?;
            let r = load_relations(relations)?;
            match mode {
                DefectMode::Local => {
                    let value = local_defect(&rho, &r)?;
                    Ok(Report::ok(format_rational(&value), json!({ "mode": "local", "value": rat(&value) })))
                }
                DefectMode::Global => {
                    let solver = defect_solvers().build(solver)?;
                    let g = global_defect_with(solver.as_ref(), &rho, &r, *cap_degree)?;
                    let human = format!("{}\n{}", format_rational(&g.value), g.minimizer);
                    let mut value = serde_json::to_value(&g)?;
                    value["mode"] = json!("global");
                    value["solver"] = json!(solver.name());
                    Ok(Report::ok(human, value))
                }
            }
        }
        Command::Pad { perms, word, delta, regularize, out } => {
            let mut psi = load_tuple(perms)?;
            if *regularize {
                psi = regular_lift(&psi, DEFAULT_CAP)?;
            }
            let padded = pad_block_solution(&psi, &parse_word(word)?, *delta)?;
            let tuple_text = format!("{}\n", padded.tuple);
            let written = write_or_print(out.as_deref(), &tuple_text)?;
            let human = format!(
                "{}\nviolation {} on {} points ({} fixed)",
                written.trim_end(),
                format_rational(&padded.violation),
                padded.tuple.degree(),
                padded.fixed
            );
            let mut value = serde_json::to_value(&padded)?;
            value["x"] = json!(padded.tuple.sigma_x().to_string());
            value["y"] = json!(padded.tuple.sigma_y().to_string());
            Ok(Report::ok(human, value))
        }
        Command::Folner { spec, n, m, generator, cap } => {
            let spec = load_spec(spec)?;
            let m = m.unwrap_or(*n as u64);
            let g = parse_word(generator)?;
            let [letter] = g.letters() else {
                return Err(Error::InvalidArgument(format!("generator must be one of a, A, b, B, got `{generator}`")));
            };
            let ratio = folner_ratio(&spec, *n, m, *letter, *cap)?;
            Ok(Report::ok(
                format_rational(&ratio),
                json!({ "n": n, "m": m, "generator": generator, "ratio": rat(&ratio) }),
            ))
        }
        Command::Quotient { spec, n, m, word, cap } => {
            let spec = load_spec(spec)?;
            let m = m.unwrap_or(*n as u64);
            match word {
                Some(word) => {
                    let q = finite_quotient(&NeumannElement::new(&spec, parse_word(word)?), *n, m)?;
                    Ok(Report::ok(q.to_string(), json!({ "n": n, "m": m, "word": word, "image": q.to_string() })))
                }
                None => {
                    let check = folner_set(&spec, *n, m, *cap)?.quotient_check()?;
                    let human = format!(
                        "|F_n| = {}, |image| = {}, |P_n| = {}, bijective: {}",
                        check.folner_size, check.image_size, check.quotient_order, check.bijective
                    );
                    Ok(Report { human, json: serde_json::to_value(&check)?, ok: check.bijective })
                }
            }
        }
        Command::Density { spec, n, m, word, cap } => {
            let spec = load_spec(spec)?;
            let m = m.unwrap_or(*n as u64);
            let report = conjugation_density(&spec, &parse_word(word)?, *n, m, *cap)?;
            let human = format!(
                "{} (lower bound {}, g in L_{})",
                format_rational(&report.density),
                format_rational(&report.lower_bound),
                report.m
            );
            Ok(Report::ok(human, serde_json::to_value(&report)?))
        }
        Command::Cosofic { spec, n, m, h, g, cap } => {
            let spec = load_spec(spec)?;
            let m = m.unwrap_or(*n as u64);
            let h: Vec<FreeWord> = h.iter().map(|s| parse_word(s)).collect::<Result<_>>()?;
            let g: Vec<FreeWord> = g.iter().map(|s| parse_word(s)).collect::<Result<_>>()?;
            let report = cosofic_approximant(&spec, &h, *n, m, &g, *cap)?;
            let mut lines = vec![format!(
                "|H| = {}, |H ∩ G_n L_m| = {}, |image of K_n| = {} in |P_n| = {}",
                report.subgroup_order, report.core_intersection, report.approximant_image, report.quotient_order
            )];
            lines.extend(report.densities.iter().map(|d| format!("p({}) = {}", d.word, format_rational(&d.p))));
            Ok(Report::ok(lines.join("\n"), serde_json::to_value(&report)?))
        }
        Command::Lef { spec, l, out } => {
            let cert = lef_certificate(&load_spec(spec)?, *l)?;
            let value = serde_json::to_value(&cert)?;
            let summary = format!(
                "ball of radius {}: {} words, {} elements, injective {}, partial homomorphism {}\n\
                 constructed target order 2^{:.1}, reference bound 2^{:.1}",
                cert.l,
                cert.ball_words,
                cert.distinct_elements,
                cert.injective,
                cert.partial_homomorphism,
                cert.constructed_log2,
                cert.reference_log2
            );
            let human = match out {
                Some(path) => {
                    std::fs::write(path, serde_json::to_string_pretty(&value)?)?;
                    format!("{summary}\nwrote {}", path.display())
                }
                None => summary,
            };
            Ok(Report { human, json: value, ok: cert.injective && cert.partial_homomorphism })
        }
        Command::VerifyPaper { spec, only, list, cap, seed } => {
            if *list {
                let rows: Vec<Value> = check_registry()
                    .describe()
                    .into_iter()
                    .map(|(name, description)| json!({ "name": name, "description": description }))
                    .collect();
                let human = check_names()
                    .iter()
                    .map(|n| {
                        let d = check_registry().describe().into_iter().find(|(k, _)| k == n).map_or("", |x| x.1);
                        format!("{n:<28} {d}")
                    })
                    .collect::<Vec<_>>()
                    .join("\n");
                return Ok(Report::ok(human, Value::Array(rows)));
            }
            let spec = match spec {
                Some(path) => load_spec(path)?,
                None => Arc::new(SequenceSpec::from_json(include_str!("../../core/fixtures/toy.json"))?),
            };
            let results = run_checks(&CheckContext { spec, cap: *cap, seed: *seed }, only)?;
            let ok = results.iter().all(|r| r.status != Status::Fail);
            let human = results
                .iter()
                .map(|r| {
                    let status = match r.status {
                        Status::Pass => "PASS",
                        Status::Fail => "FAIL",
                        Status::Skip => "SKIP",
                    };
                    format!("{status}  {:<28} {}", r.name, r.detail)
                })
                .collect::<Vec<_>>()
                .join("\n");
            Ok(Report { human, json: serde_json::to_value(&results)?, ok })
        }
    }
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    match run(&cli) {
        Ok(report) => {
            if cli.json {
                println!("{}", report.json);
            } else {
                println!("{}", report.human);
            }
            if report.ok {
                ExitCode::SUCCESS
            } else {
                ExitCode::from(1)
            }
        }
        Err(e) => {
            eprintln!("error: {e}");
            ExitCode::from(1)
        }
    }
}
