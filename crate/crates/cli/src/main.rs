use std::fs;
use std::path::{Path, PathBuf};
use std::process::ExitCode;
use std::sync::Arc;
use std::time::Instant;

use anyhow::{bail, Context, Result};
use clap::{Args, Parser, Subcommand, ValueEnum};
use serde::Serialize;
use serde_json::{json, Value};

use ufg3lin::catalog;
use ufg3lin::group::{Group, GroupDocument};
use ufg3lin::harness;
use ufg3lin::labelcover::{
    collapse_check, parallel_repeat, random_label_set, smoothness_check, MaxTsaInstance,
    UfgLabelCover,
};
use ufg3lin::reduction::{
    build_instance, dictator_strategy_value, factor_graph_fingerprint, GadgetMode,
};
use ufg3lin::rep::IrrepCatalog;
use ufg3lin::seed;
use ufg3lin::solvers::{abelian_solve, brute_force, evaluate, random_baseline, Max3LinInstance};

#[derive(Parser)]
#[command(name = "ufg3lin", version, about = "Fourier analysis, label cover and Max-3-LIN gadgets over finite groups")]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Group tables and their abelianization.
    #[command(subcommand)]
    Group(GroupCmd),
    /// Representation-theory self-tests.
    #[command(subcommand)]
    Rep(RepCmd),
    /// Folding self-tests.
    #[command(subcommand)]
    Fold(FoldCmd),
    /// Label cover generation and smoothness checks.
    #[command(subcommand)]
    Lc(LcCmd),
    /// Gadget reduction to Max-3-LIN.
    #[command(subcommand)]
    Reduce(ReduceCmd),
    /// Solve a Max-3-LIN instance file.
    Solve(SolveArgs),
}

#[derive(Args, Clone)]
struct GroupArgs {
    /// Built-in group name (Z2, Z3, Z4, Z6, S3, D4, Q8).
    #[arg(long, default_value = "S3", conflicts_with = "group_file")]
    group: String,
    /// JSON group document with a multiplication table and optional irreps.
    #[arg(long)]
    group_file: Option<PathBuf>,
}

impl GroupArgs {
    fn document(&self) -> Result<GroupDocument> {
        match &self.group_file {
            Some(path) => {
                let text = fs::read_to_string(path).with_context(|| format!("reading {}", path.display()))?;
                serde_json::from_str(&text).with_context(|| format!("parsing {}", path.display()))
            }
            None => Ok(catalog::builtin_document(&self.group)?),
        }
    }

    fn group(&self) -> Result<Group> {
        Ok(Group::from_document(&self.document()?)?)
    }

    fn with_catalog(&self) -> Result<(Group, IrrepCatalog)> {
        Ok(catalog::load(&self.document()?)?)
    }
}

#[derive(Args, Clone)]
struct Common {
    #[arg(long, default_value_t = 0)]
    seed: u64,
    /// Report path; stdout when absent.
    #[arg(long)]
    out: Option<PathBuf>,
}

#[derive(Subcommand)]
enum GroupCmd {
    /// Validate a group table and, when present, its irreps.
    Verify {
        #[command(flatten)]
        group: GroupArgs,
        #[command(flatten)]
        common: Common,
    },
    /// Commutator subgroup and invariant factors of G/[G,G].
    Abelianize {
        #[command(flatten)]
        group: GroupArgs,
        #[command(flatten)]
        common: Common,
    },
}

#[derive(Subcommand)]
enum RepCmd {
    /// Axioms, Fourier identities and containment chains.
    Selftest {
        #[command(flatten)]
        group: GroupArgs,
        #[arg(long, default_value_t = 20)]
        functions: usize,
        #[arg(long, default_value_t = 100)]
        trials: usize,
        #[command(flatten)]
        common: Common,
    },
}

#[derive(Subcommand)]
enum FoldCmd {
    /// The four vanishing lemmas on random folded tables.
    Selftest {
        #[command(flatten)]
        group: GroupArgs,
        #[arg(long, default_value_t = 3)]
        big_r: usize,
        #[arg(long, default_value_t = 2)]
        r: usize,
        #[arg(long, default_value_t = 10)]
        runs: usize,
        #[command(flatten)]
        common: Common,
    },
}

#[derive(Args, Clone)]
struct LcParams {
    /// Existing label cover JSON; generated from the flags below otherwise.
    #[arg(long)]
    lc: Option<PathBuf>,
    /// TSA instance file; a planted instance is generated otherwise.
    #[arg(long)]
    tsa: Option<PathBuf>,
    #[arg(long, default_value_t = 20)]
    tsa_vars: usize,
    #[arg(long, default_value_t = 40)]
    tsa_constraints: usize,
    #[arg(long, default_value_t = 1)]
    r: usize,
    #[arg(long, default_value_t = 1)]
    t: usize,
    #[arg(long, default_value_t = 8)]
    count_w: usize,
    #[arg(long, default_value_t = 8)]
    edges_per_w: usize,
}

struct LcBundle {
    lc: UfgLabelCover,
    tsa: Option<MaxTsaInstance>,
    planted: Option<Vec<bool>>,
}

impl LcParams {
    fn tsa(&self, seed_value: u64) -> Result<(MaxTsaInstance, Option<Vec<bool>>)> {
        match &self.tsa {
            Some(path) => {
                let text = fs::read_to_string(path).with_context(|| format!("reading {}", path.display()))?;
                Ok((MaxTsaInstance::parse(&text)?, None))
            }
            None => {
                let mut rng = seed::rng(seed_value, "tsa");
                let (tsa, a) = MaxTsaInstance::planted(self.tsa_vars, self.tsa_constraints, &mut rng)?;
                Ok((tsa, Some(a)))
            }
        }
    }

    fn load(&self, seed_value: u64) -> Result<LcBundle> {
        if let Some(path) = &self.lc {
            let text = fs::read_to_string(path).with_context(|| format!("reading {}", path.display()))?;
            return Ok(LcBundle { lc: UfgLabelCover::from_json(&text)?, tsa: None, planted: None });
        }
        let (tsa, planted) = self.tsa(seed_value)?;
        let lc = parallel_repeat(&tsa, self.r, self.t, self.count_w, self.edges_per_w, seed::derive(seed_value, "lc"))?;
        Ok(LcBundle { lc, tsa: Some(tsa), planted })
    }
}

#[derive(Clone, Copy, ValueEnum)]
enum SmoothnessMode {
    Smoothness,
    Collapse,
}

#[derive(Subcommand)]
enum LcCmd {
    /// Generate a smooth label cover from a TSA instance.
    Gen {
        #[command(flatten)]
        params: LcParams,
        /// Where to write the generated TSA instance.
        #[arg(long)]
        tsa_out: Option<PathBuf>,
        #[command(flatten)]
        common: Common,
    },
    /// Empirical projection-collision statistics.
    CheckSmoothness {
        #[command(flatten)]
        params: LcParams,
        #[arg(long, value_enum, default_value_t = SmoothnessMode::Smoothness)]
        mode: SmoothnessMode,
        /// Sizes of S to test.
        #[arg(long, value_delimiter = ',', default_value = "2,3,4")]
        sizes: Vec<usize>,
        /// Random sets per size (smoothness) or trials per size (collapse).
        #[arg(long, default_value_t = 100)]
        samples: usize,
        #[arg(long, default_value_t = 0.25)]
        d0: f64,
        #[command(flatten)]
        common: Common,
    },
}

#[derive(Clone, Copy, ValueEnum)]
enum ModeArg {
    Perfect,
    Imperfect,
}

#[derive(Args, Clone)]
struct GadgetArgs {
    #[arg(long, value_enum, default_value_t = ModeArg::Perfect)]
    mode: ModeArg,
    #[arg(long, default_value_t = 0.1)]
    epsilon: f64,
}

impl GadgetArgs {
    fn mode(&self) -> GadgetMode {
        match self.mode {
            ModeArg::Perfect => GadgetMode::Perfect,
            ModeArg::Imperfect => GadgetMode::Imperfect { epsilon: self.epsilon },
        }
    }
}

#[derive(Subcommand)]
enum ReduceCmd {
    /// Sample a Max-3-LIN instance.
    Gen {
        #[command(flatten)]
        group: GroupArgs,
        #[command(flatten)]
        params: LcParams,
        #[command(flatten)]
        gadget: GadgetArgs,
        #[arg(long, default_value_t = 1000)]
        m: usize,
        /// Instance file path.
        #[arg(long)]
        instance_out: PathBuf,
        /// Variable registry sidecar path.
        #[arg(long)]
        registry_out: Option<PathBuf>,
        #[command(flatten)]
        common: Common,
    },
    /// Pass rate of dictator tables at a satisfying label-cover assignment.
    CheckCompleteness {
        #[command(flatten)]
        group: GroupArgs,
        #[command(flatten)]
        params: LcParams,
        #[command(flatten)]
        gadget: GadgetArgs,
        #[arg(long, default_value_t = 10_000)]
        samples: usize,
        #[command(flatten)]
        common: Common,
    },
    /// Build with b and with flipped b and compare factor graphs.
    CheckFactorGraph {
        #[command(flatten)]
        group: GroupArgs,
        #[command(flatten)]
        params: LcParams,
        #[command(flatten)]
        gadget: GadgetArgs,
        #[arg(long, default_value_t = 500)]
        m: usize,
        #[command(flatten)]
        common: Common,
    },
}

#[derive(Clone, Copy, ValueEnum)]
enum SolverArg {
    Brute,
    Random,
    Abelian,
}

#[derive(Args)]
struct SolveArgs {
    /// Instance file (`group n_vars m` header, then `i1 i2 i3 c` lines).
    #[arg(long)]
    instance: PathBuf,
    /// Group document, when the instance names a group that is not built in.
    #[arg(long)]
    group_file: Option<PathBuf>,
    #[arg(long, value_enum)]
    solver: SolverArg,
    #[arg(long, default_value_t = 1)]
    restarts: usize,
    #[arg(long, default_value_t = 1)]
    lift_trials: usize,
    /// Include wall time in the report (breaks byte-identical reruns).
    #[arg(long)]
    timing: bool,
    #[command(flatten)]
    common: Common,
}

struct Outcome {
    report: Value,
    passed: bool,
}

fn outcome<T: Serialize>(report: &T, passed: bool) -> Result<Outcome> {
    Ok(Outcome { report: serde_json::to_value(report)?, passed })
}

fn write_text(path: &Path, text: &str) -> Result<()> {
    fs::write(path, text).with_context(|| format!("writing {}", path.display()))
}

fn run_group(cmd: GroupCmd) -> Result<(Outcome, Common)> {
    match cmd {
        GroupCmd::Verify { group, common } => {
            let doc = group.document()?;
            let g = Group::from_document(&doc)?;
            let table = harness::group_report(&g);
            let (axioms, passed) = if doc.irreps.is_some() {
                let (g, cat) = catalog::load(&doc)?;
                let axioms = harness::axiom_report(&g, &cat)?;
                let passed = axioms.passed;
                (Some(axioms), passed)
            } else {
                (None, true)
            };
            let report = json!({ "command": "group verify", "group": table, "irreps": axioms, "passed": passed });
            Ok((Outcome { report, passed }, common))
        }
        GroupCmd::Abelianize { group, common } => {
            let rep = harness::abelianization_report(&group.group()?);
            let passed = rep.homomorphism_ok;
            Ok((outcome(&rep, passed)?, common))
        }
    }
}

fn run_lc(cmd: LcCmd) -> Result<(Outcome, Common)> {
    match cmd {
        LcCmd::Gen { params, tsa_out, common } => {
            let bundle = params.load(common.seed)?;
            if let (Some(path), Some(tsa)) = (&tsa_out, &bundle.tsa) {
                write_text(path, &tsa.to_text())?;
            }
            let lc = &bundle.lc;
            let report = json!({
                "command": "lc gen",
                "r": lc.r,
                "t": lc.t,
                "R": lc.big_r(),
                "L": lc.big_l(),
                "w_vertices": lc.w.len(),
                "v_vertices": lc.v.len(),
                "edges": lc.edges.len(),
                "label_cover": lc,
                "passed": true,
            });
            Ok((Outcome { report, passed: true }, common))
        }
        LcCmd::CheckSmoothness { params, mode, sizes, samples, d0, common } => {
            let bundle = params.load(common.seed)?;
            let lc = &bundle.lc;
            let mut rng = seed::rng(common.seed, "check_smoothness");
            let (reports, passed) = match mode {
                SmoothnessMode::Smoothness => {
                    let mut reports = Vec::new();
                    for &size in &sizes {
                        for i in 0..samples {
                            let w = i % lc.w.len();
                            let set = random_label_set(lc, size, &mut rng)?;
                            reports.push(smoothness_check(lc, &set, w)?);
                        }
                    }
                    let passed = reports.iter().all(|r| r.passed);
                    (serde_json::to_value(&reports)?, passed)
                }
                SmoothnessMode::Collapse => {
                    let reports = sizes
                        .iter()
                        .map(|&size| collapse_check(lc, size, d0, samples, &mut rng))
                        .collect::<ufg3lin::Result<Vec<_>>>()?;
                    let passed = reports.iter().all(|r| r.passed);
                    (serde_json::to_value(&reports)?, passed)
                }
            };
            let report = json!({
                "command": "lc check-smoothness",
                "mode": match mode { SmoothnessMode::Smoothness => "smoothness", SmoothnessMode::Collapse => "collapse" },
                "r": lc.r,
                "t": lc.t,
                "reports": reports,
                "passed": passed,
            });
            Ok((Outcome { report, passed }, common))
        }
    }
}

fn run_reduce(cmd: ReduceCmd) -> Result<(Outcome, Common)> {
    match cmd {
        ReduceCmd::Gen { group, params, gadget, m, instance_out, registry_out, common } => {
            let g = Arc::new(group.group()?);
            let bundle = params.load(common.seed)?;
            let built = build_instance(&bundle.lc, g, gadget.mode(), m, seed::derive(common.seed, "reduce"))?;
            write_text(&instance_out, &built.instance.to_text())?;
            if let Some(path) = &registry_out {
                write_text(path, &built.registry.to_json()?)?;
            }
            let report = json!({
                "command": "reduce gen",
                "mode": gadget.mode(),
                "constraints": built.instance.len(),
                "variables": built.instance.n_vars(),
                "fingerprint": factor_graph_fingerprint(&built.instance),
                "passed": true,
            });
            Ok((Outcome { report, passed: true }, common))
        }
        ReduceCmd::CheckCompleteness { group, params, gadget, samples, common } => {
            if params.lc.is_some() || params.tsa.is_some() {
                bail!("check-completeness needs a planted TSA instance; omit --lc and --tsa");
            }
            let g = Arc::new(group.group()?);
            let bundle = params.load(common.seed)?;
            let planted = bundle.planted.as_ref().expect("generated TSA is planted");
            let (sigma_l, sigma_r) = bundle.lc.lift_assignment(planted)?;
            let mode = gadget.mode();
            let rep = dictator_strategy_value(
                &bundle.lc,
                g,
                &sigma_l,
                &sigma_r,
                mode,
                samples,
                seed::derive(common.seed, "reduce"),
            )?;
            let passed = match mode {
                GadgetMode::Perfect => rep.pass_fraction == 1.0,
                GadgetMode::Imperfect { .. } => {
                    (rep.pass_fraction - rep.expected).abs() <= 3.0 * rep.sigma_hat
                }
            };
            let report = json!({ "command": "reduce check-completeness", "mode": mode, "report": rep, "passed": passed });
            Ok((Outcome { report, passed }, common))
        }
        ReduceCmd::CheckFactorGraph { group, params, gadget, m, common } => {
            let g = Arc::new(group.group()?);
            let bundle = params.load(common.seed)?;
            let flipped: Vec<bool> = bundle.lc.b.iter().map(|b| !b).collect();
            let other = bundle.lc.with_b(&flipped)?;
            let s = seed::derive(common.seed, "reduce");
            let a = build_instance(&bundle.lc, Arc::clone(&g), gadget.mode(), m, s)?;
            let b = build_instance(&other, g, gadget.mode(), m, s)?;
            let (fa, fb) = (factor_graph_fingerprint(&a.instance), factor_graph_fingerprint(&b.instance));
            let rhs_differ = a
                .instance
                .constraints()
                .iter()
                .zip(b.instance.constraints())
                .filter(|(x, y)| x.rhs != y.rhs)
                .count();
            let equal = fa == fb;
            let report = json!({
                "command": "reduce check-factor-graph",
                "fingerprint_b": fa,
                "fingerprint_flipped_b": fb,
                "fingerprints_equal": equal,
                "rhs_differences": rhs_differ,
                "passed": equal,
            });
            Ok((Outcome { report, passed: equal }, common))
        }
    }
}

fn run_solve(args: SolveArgs) -> Result<(Outcome, Common)> {
    let text = fs::read_to_string(&args.instance).with_context(|| format!("reading {}", args.instance.display()))?;
    let instance = match &args.group_file {
        Some(path) => {
            let doc: GroupDocument = serde_json::from_str(&fs::read_to_string(path)?)?;
            let g = Arc::new(Group::from_document(&doc)?);
            Max3LinInstance::parse_with(&text, |name| {
                if name == g.name() {
                    Ok(g)
                } else {
                    Err(ufg3lin::Error::UnknownGroup(name.to_string()))
                }
            })?
        }
        None => Max3LinInstance::parse(&text)?,
    };
    let start = Instant::now();
    let seed_value = args.common.seed;
    let mut report = match args.solver {
        SolverArg::Brute => {
            let res = brute_force(&instance)?;
            json!({ "solver": "brute", "value": res.value, "assignment": res.assignment, "flags": [] })
        }
        SolverArg::Random => {
            let res = random_baseline(&instance, args.restarts, seed_value)?;
            json!({ "solver": "random", "value": res.value, "assignment": res.assignment, "restarts": args.restarts, "flags": [] })
        }
        SolverArg::Abelian => {
            let res = abelian_solve(&instance, args.lift_trials, seed_value)?;
            let flags: Vec<&str> = if res.fallback { vec!["fallback"] } else { vec![] };
            let check = evaluate(&instance, &res.assignment)?;
            json!({
                "solver": "abelian",
                "value": check,
                "assignment": res.assignment,
                "consistent": res.consistent,
                "commutator_order": res.commutator_order,
                "invariant_factors": res.invariant_factors,
                "lift_trials": res.lift_trials,
                "flags": flags,
            })
        }
    };
    report["command"] = json!("solve");
    report["group"] = json!(instance.group().name());
    report["n_vars"] = json!(instance.n_vars());
    report["constraints"] = json!(instance.len());
    report["passed"] = json!(true);
    if args.timing {
        report["wall_time_s"] = json!(start.elapsed().as_secs_f64());
    }
    Ok((Outcome { report, passed: true }, args.common))
}

fn run(cli: Cli) -> Result<(Outcome, Common)> {
    match cli.command {
        Command::Group(cmd) => run_group(cmd),
        Command::Rep(RepCmd::Selftest { group, functions, trials, common }) => {
            let (g, cat) = group.with_catalog()?;
            let rep = harness::rep_selftest(&g, &cat, functions, trials, common.seed)?;
            let passed = rep.passed;
            Ok((outcome(&rep, passed)?, common))
        }
        Command::Fold(FoldCmd::Selftest { group, big_r, r, runs, common }) => {
            let (g, cat) = group.with_catalog()?;
            let rep = harness::fold_selftest(&g, &cat, big_r, r, runs, common.seed)?;
            let passed = rep.passed;
            Ok((outcome(&rep, passed)?, common))
        }
        Command::Lc(cmd) => run_lc(cmd),
        Command::Reduce(cmd) => run_reduce(cmd),
        Command::Solve(args) => run_solve(args),
    }
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    match run(cli) {
        Ok((outcome, common)) => {
            let text = serde_json::to_string_pretty(&outcome.report).expect("report serializes") + "\n";
            let written = match &common.out {
                Some(path) => write_text(path, &text),
                None => {
                    print!("{text}");
                    Ok(())
                }
            };
            if let Err(e) = written {
                eprintln!("error: {e:#}");
                return ExitCode::from(2);
            }
            if outcome.passed {
                ExitCode::SUCCESS
            } else {
                eprintln!("assertion failed; see report");
                ExitCode::from(1)
            }
        }
        Err(e) => {
            eprintln!("error: {e:#}");
            ExitCode::from(2)
        }
    }
}
