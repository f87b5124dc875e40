//! Batch command-line surface: JSON in, JSON (or DOT) out. Exit codes:
//! 0 success, 1 domain error, 2 format error. Errors are reported on
//! stderr as {"error": {"code", "message"}} with stable codes.

use std::path::{Path, PathBuf};
use std::process::ExitCode;

use clap::{Parser, Subcommand};
use serde::{Deserialize, Serialize};
use serde_json::json;

use pbpo_core::classifier::{classify_object, materialize};
use pbpo_core::enumerate::{enumerate_morphisms, Constraint};
use pbpo_core::error::Error;
use pbpo_core::fixtures::{fixture, FixtureRule, FIXTURE_NAMES};
use pbpo_core::graph::{Graph, Morphism};
use pbpo_core::interop::{
    agree_step, compact_rules, dpo_step, pbpo_step, translate_agree, translate_dpo, CompactMode,
};
use pbpo_core::json::{
    agree_from_json, agree_to_json, dpo_from_json, graph_from_json, graph_to_json,
    morphism_from_json, morphism_to_json, pbpo_from_json, pbpo_to_json, rule_from_json,
    rule_to_json, step_to_json, to_dot, GraphJson, MorphismJson,
};
use pbpo_core::lattice::{Lattice, LatticeDescriptor};
use pbpo_core::limits::{is_pullback_square, is_pushout_square};
use pbpo_core::rewrite::{
    apply_step, determinism_certificate, find_strong_matches, rewrite_closure, MatchConstraint,
    Strategy,
};

#[derive(Parser)]
#[command(name = "pbpo", about = "PBPO+ graph rewriting over lattice-labeled multigraphs")]
struct Cli {
    /// Emit DOT instead of JSON where a single graph is the result
    #[arg(long, global = true)]
    dot: bool,
    /// Seed for randomized strategies
    #[arg(long, global = true, default_value_t = 0)]
    seed: u64,
    #[command(subcommand)]
    cmd: Cmd,
}

#[derive(Subcommand)]
enum Cmd {
    /// Validate a rule file (left-square pullback certificate)
    Validate { rule: PathBuf },
    /// List strong matches of a rule in a host graph
    Match {
        rule: PathBuf,
        graph: PathBuf,
        #[arg(long, default_value = "any")]
        constraint: String,
    },
    /// Apply one strong match and emit the full step bundle
    Apply {
        rule: PathBuf,
        graph: PathBuf,
        #[arg(long)]
        match_index: usize,
        #[arg(long, default_value = "any")]
        constraint: String,
        /// Also compute the bottom-right pushout
        #[arg(long)]
        bottom_right: bool,
    },
    /// Rewrite to normal form under a strategy
    Normalize {
        graph: PathBuf,
        #[arg(long = "rule", required = true)]
        rules: Vec<PathBuf>,
        #[arg(long, default_value = "first")]
        strategy: String,
        #[arg(long, default_value_t = 100)]
        max_steps: usize,
    },
    /// Translate a DPO/AGREE/PBPO rule into equivalent rule(s)
    Translate {
        #[arg(long)]
        from: String,
        rule: PathBuf,
        /// Compaction mode for --from pbpo
        #[arg(long, default_value = "full")]
        mode: String,
    },
    /// Report whether a rule's typing makes rewriting deterministic
    CheckDeterminism { rule: PathBuf },
    /// Emit the partial-map classifier T(G) of a graph
    Classifier { graph: PathBuf },
    /// Emit the materialization of a morphism as two factors
    Materialize { morphism: PathBuf },
    /// Verify a commuting square as a pullback or pushout
    CheckSquare { square: PathBuf },
    /// Emit a built-in worked example
    Fixtures { name: Option<String> },
    /// Run a single DPO/AGREE/PBPO reference-engine step
    OracleStep {
        #[arg(long)]
        engine: String,
        rule: PathBuf,
        graph: PathBuf,
        #[arg(long)]
        match_index: usize,
    },
}

enum Failure {
    Domain(Error),
    Format(String),
}

impl From<Error> for Failure {
    fn from(e: Error) -> Self {
        Failure::Domain(e)
    }
}

fn read_json<T: serde::de::DeserializeOwned>(path: &Path) -> Result<T, Failure> {
    let text = std::fs::read_to_string(path)
        .map_err(|e| Failure::Format(format!("{}: {e}", path.display())))?;
    serde_json::from_str(&text).map_err(|e| Failure::Format(format!("{}: {e}", path.display())))
}

fn load_graph(path: &Path) -> Result<Graph, Failure> {
    let j: GraphJson = read_json(path)?;
    Ok(graph_from_json(&j, None)?)
}

fn parse_constraint(s: &str) -> Result<MatchConstraint, Failure> {
    match s {
        "any" => Ok(MatchConstraint::Any),
        "mono" => Ok(MatchConstraint::Mono),
        "regular-mono" => Ok(MatchConstraint::RegularMono),
        _ => Err(Failure::Format(format!("unknown constraint `{s}`"))),
    }
}

fn emit(value: &impl Serialize) {
    println!("{}", serde_json::to_string_pretty(value).expect("serializable"));
}

/// A standalone morphism with its endpoints.
#[derive(Deserialize)]
struct MorphismFile {
    lattice: LatticeDescriptor,
    dom: GraphJson,
    cod: GraphJson,
    morphism: MorphismJson,
}

fn load_morphism(path: &Path) -> Result<Morphism, Failure> {
    let f: MorphismFile = read_json(path)?;
    let lat = Lattice::from_descriptor(&f.lattice)?;
    let dom = graph_from_json(&f.dom, Some(&lat))?;
    let cod = graph_from_json(&f.cod, Some(&lat))?;
    Ok(morphism_from_json(&f.morphism, &dom, &cod)?)
}

/// A candidate square a -> b, a -> c, b -> d, c -> d.
#[derive(Deserialize)]
struct SquareFile {
    lattice: LatticeDescriptor,
    kind: String,
    a: GraphJson,
    b: GraphJson,
    c: GraphJson,
    d: GraphJson,
    ab: MorphismJson,
    ac: MorphismJson,
    bd: MorphismJson,
    cd: MorphismJson,
}

fn run(cli: &Cli) -> Result<(), Failure> {
    match &cli.cmd {
        Cmd::Validate { rule } => {
            let rule = rule_from_json(&read_json(rule)?)?;
            emit(&json!({
                "valid": true,
                "l": rule.l_graph.vertices.len(),
                "lattice": rule.l_graph.lattice.descriptor(),
            }));
        }
        Cmd::Match { rule, graph, constraint } => {
            let rule = rule_from_json(&read_json(rule)?)?;
            let g = load_graph(graph)?;
            let c = parse_constraint(constraint)?;
            let found = find_strong_matches(&rule, &g, c)?;
            emit(&json!({
                "count": found.len(),
                "matches": found
                    .iter()
                    .enumerate()
                    .map(|(i, (m, alpha))| {
                        json!({
                            "index": i,
                            "m": morphism_to_json(m),
                            "alpha": morphism_to_json(alpha),
                        })
                    })
                    .collect::<Vec<_>>(),
            }));
        }
        Cmd::Apply { rule, graph, match_index, constraint, bottom_right } => {
            let rule = rule_from_json(&read_json(rule)?)?;
            let g = load_graph(graph)?;
            let c = parse_constraint(constraint)?;
            let found = find_strong_matches(&rule, &g, c)?;
            let (m, alpha) =
                found.get(*match_index).ok_or(Error::NoSuchMatch(*match_index))?;
            let step = apply_step(&rule, &g, m, alpha, *bottom_right)?;
            if cli.dot {
                print!("{}", to_dot(&step.g_r, "g_r"));
            } else {
                emit(&step_to_json(&step));
            }
        }
        Cmd::Normalize { graph, rules, strategy, max_steps } => {
            let g = load_graph(graph)?;
            let rules: Vec<_> = rules
                .iter()
                .map(|p| read_json(p).and_then(|j| rule_from_json(&j).map_err(Into::into)))
                .collect::<Result<_, Failure>>()?;
            let strat = match strategy.as_str() {
                "first" => Strategy::First,
                "all" => Strategy::All,
                "random" => Strategy::Random(cli.seed),
                _ => return Err(Failure::Format(format!("unknown strategy `{strategy}`"))),
            };
            let trace = rewrite_closure(&g, &rules, strat, *max_steps)?;
            if cli.dot {
                for (i, g) in trace.results.iter().enumerate() {
                    print!("{}", to_dot(g, &format!("result{i}")));
                }
            } else {
                emit(&json!({
                    "steps": trace
                        .steps
                        .iter()
                        .map(|(rule_idx, s)| json!({
                            "rule_index": rule_idx,
                            "step": step_to_json(s),
                        }))
                        .collect::<Vec<_>>(),
                    "budget_exhausted": trace.budget_exhausted,
                    "results": trace
                        .results
                        .iter()
                        .map(|g| graph_to_json(g, false))
                        .collect::<Vec<_>>(),
                }));
            }
        }
        Cmd::Translate { from, rule, mode } => {
            let rules = match from.as_str() {
                "dpo" => vec![translate_dpo(&dpo_from_json(&read_json(rule)?)?)?],
                "agree" => vec![translate_agree(&agree_from_json(&read_json(rule)?)?)?],
                "pbpo" => {
                    let mode = match mode.as_str() {
                        "full" => CompactMode::Full,
                        "iso-only" => CompactMode::IsoOnly,
                        _ => return Err(Failure::Format(format!("unknown mode `{mode}`"))),
                    };
                    compact_rules(&pbpo_from_json(&read_json(rule)?)?, mode)?
                }
                _ => return Err(Failure::Format(format!("unknown source formalism `{from}`"))),
            };
            emit(&json!({
                "rules": rules.iter().map(rule_to_json).collect::<Vec<_>>(),
            }));
        }
        Cmd::CheckDeterminism { rule } => {
            let rule = rule_from_json(&read_json(rule)?)?;
            let cert = determinism_certificate(&rule)?;
            emit(&json!({ "certified": cert.certified, "reason": cert.reason }));
        }
        Cmd::Classifier { graph } => {
            let g = load_graph(graph)?;
            let cls = classify_object(&g)?;
            if cli.dot {
                print!("{}", to_dot(&cls.t, "classifier"));
            } else {
                emit(&json!({
                    "t": graph_to_json(&cls.t, true),
                    "eta": morphism_to_json(&cls.eta),
                    "star_vertex": cls.star_vertex,
                }));
            }
        }
        Cmd::Materialize { morphism } => {
            let f = load_morphism(morphism)?;
            let (f_sharp, f_flat) = materialize(&f)?;
            emit(&json!({
                "m": graph_to_json(&f_sharp.cod, true),
                "f_sharp": morphism_to_json(&f_sharp),
                "f_flat": morphism_to_json(&f_flat),
            }));
        }
        Cmd::CheckSquare { square } => {
            let sq: SquareFile = read_json(square)?;
            let lat = Lattice::from_descriptor(&sq.lattice)?;
            let amb = Some(&lat);
            let a = graph_from_json(&sq.a, amb)?;
            let b = graph_from_json(&sq.b, amb)?;
            let c = graph_from_json(&sq.c, amb)?;
            let d = graph_from_json(&sq.d, amb)?;
            let ab = morphism_from_json(&sq.ab, &a, &b)?;
            let ac = morphism_from_json(&sq.ac, &a, &c)?;
            let bd = morphism_from_json(&sq.bd, &b, &d)?;
            let cd = morphism_from_json(&sq.cd, &c, &d)?;
            let verdict = match sq.kind.as_str() {
                "pullback" => is_pullback_square(&bd, &cd, &ab, &ac),
                "pushout" => is_pushout_square(&ab, &ac, &bd, &cd),
                _ => return Err(Failure::Format(format!("unknown square kind `{}`", sq.kind))),
            };
            let (commutes, holds) = match verdict {
                Ok(v) => (true, v),
                Err(Error::NonCommutingSquare) => (false, false),
                Err(e) => return Err(e.into()),
            };
            emit(&json!({ "kind": sq.kind, "commutes": commutes, "holds": holds }));
        }
        Cmd::Fixtures { name } => {
            let Some(name) = name else {
                emit(&json!({ "fixtures": FIXTURE_NAMES }));
                return Ok(());
            };
            let f = fixture(name)
                .ok_or_else(|| Failure::Format(format!("no fixture named `{name}`")))?;
            if cli.dot {
                if let Some(host) = &f.host {
                    print!("{}", to_dot(host, "host"));
                }
                let l = match &f.rule {
                    FixtureRule::Plus(r) => &r.l_graph,
                    FixtureRule::Pbpo(r) => &r.l_graph,
                    FixtureRule::Agree(r) => &r.l_graph,
                };
                print!("{}", to_dot(l, "pattern"));
                return Ok(());
            }
            let (kind, rule_json) = match &f.rule {
                FixtureRule::Plus(r) => ("plus", serde_json::to_value(rule_to_json(r)).unwrap()),
                FixtureRule::Pbpo(r) => ("pbpo", serde_json::to_value(pbpo_to_json(r)).unwrap()),
                FixtureRule::Agree(r) => {
                    ("agree", serde_json::to_value(agree_to_json(r)).unwrap())
                }
            };
            emit(&json!({
                "name": f.name,
                "description": f.description,
                "kind": kind,
                "rule": rule_json,
                "host": f.host.as_ref().map(|g| graph_to_json(g, true)),
                "match": f.match_m.as_ref().map(morphism_to_json),
                "alpha": f.alpha.as_ref().map(morphism_to_json),
                "expected_g_k": f.expected_g_k.as_ref().map(|g| graph_to_json(g, true)),
                "expected_g_r": f.expected_g_r.as_ref().map(|g| graph_to_json(g, true)),
            }));
        }
        Cmd::OracleStep { engine, rule, graph, match_index } => {
            let g = load_graph(graph)?;
            match engine.as_str() {
                "dpo" => {
                    let rule = dpo_from_json(&read_json(rule)?)?;
                    let ms = enumerate_morphisms(
                        &rule.l_graph,
                        &g,
                        Constraint::RegularMono,
                        None,
                    )?;
                    let m = ms.get(*match_index).ok_or(Error::NoSuchMatch(*match_index))?;
                    match dpo_step(&rule, &g, m)? {
                        None => emit(&json!({ "result": null, "reason": "dangling" })),
                        Some((d, gr)) => emit(&json!({
                            "d": graph_to_json(&d, false),
                            "g_r": graph_to_json(&gr, false),
                        })),
                    }
                }
                "agree" => {
                    let rule = agree_from_json(&read_json(rule)?)?;
                    let ms = enumerate_morphisms(
                        &rule.l_graph,
                        &g,
                        Constraint::RegularMono,
                        None,
                    )?;
                    let m = ms.get(*match_index).ok_or(Error::NoSuchMatch(*match_index))?;
                    let (gk, gr) = agree_step(&rule, &g, m)?;
                    emit(&json!({
                        "g_k": graph_to_json(&gk, false),
                        "g_r": graph_to_json(&gr, false),
                    }));
                }
                "pbpo" => {
                    let rule = pbpo_from_json(&read_json(rule)?)?;
                    let mut pairs = Vec::new();
                    for m in
                        enumerate_morphisms(&rule.l_graph, &g, Constraint::Any, None)?
                    {
                        for alpha in
                            enumerate_morphisms(&g, &rule.lp_graph, Constraint::Any, None)?
                        {
                            if Morphism::compose(&alpha, &m)?.same_map(&rule.t_l) {
                                pairs.push((m.clone(), alpha));
                            }
                        }
                    }
                    let (m, alpha) =
                        pairs.get(*match_index).ok_or(Error::NoSuchMatch(*match_index))?;
                    let (gk, gr) = pbpo_step(&rule, &g, m, alpha)?;
                    emit(&json!({
                        "g_k": graph_to_json(&gk, false),
                        "g_r": graph_to_json(&gr, false),
                    }));
                }
                _ => return Err(Failure::Format(format!("unknown engine `{engine}`"))),
            }
        }
    }
    Ok(())
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    match run(&cli) {
        Ok(()) => ExitCode::SUCCESS,
        Err(Failure::Domain(e)) => {
            eprintln!(
                "{}",
                json!({ "error": { "code": e.code(), "message": e.to_string() } })
            );
            ExitCode::from(1)
        }
        Err(Failure::Format(msg)) => {
            eprintln!("{}", json!({ "error": { "code": "Format", "message": msg } }));
            ExitCode::from(2)
        }
    }
}
