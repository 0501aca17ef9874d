use crate::*;
use num::BigRational;
use rankpoly::arith::{format_rational, rational_to_f64};
use rankpoly::chains::{chain_rng, run_replicas, Chain, ChainError, ChainParams, InitialState, RunConfig};
use rankpoly::exact::{self, EnumOptions, ExactError};
use rankpoly::graph::{
    parse_graph, BipartiteGraph, EdgeSubset, Graph, GraphError, GraphFormat, ParsedGraph, TreeDecomposition,
    TreeDecompositionDocument,
};
use rankpoly::mixing::{
    congestion, dfs_tree_ordering, empirical_tv, linear_width_of_ordering, mixing_time_bound, mixing_time_exact,
    natural_ordering, optimal_linear_width, treedec_ordering, tv_curve, EdgeOrdering, ExactChain, MixingError,
    CONGESTION_MAX_EDGES,
};
use rankpoly::reductions::{self, BisOptions, ReductionError, RootChoice, TutteOptions};
use rankpoly::selftest::{self, SelftestOptions};
use serde_json::json;
use std::fs;
use std::io::{self, BufWriter, Write};
use std::path::{Path, PathBuf};
use std::process::ExitCode;
use thiserror::Error;

/// Largest `replicas × checkpoints` kept in memory by empirical mixing runs.
const EMPIRICAL_MAX_CELLS: usize = 50_000_000;

#[derive(Debug, Error)]
pub enum CliError {
    #[error("cannot read {}: {source}", path.display())]
    Read { path: PathBuf, source: io::Error },
    #[error("cannot write output: {0}")]
    Write(#[from] io::Error),
    #[error("{0}")]
    Usage(String),
    #[error("malformed {what}: {msg}")]
    Malformed { what: String, msg: String },
    #[error(transparent)]
    Graph(#[from] GraphError),
    #[error(transparent)]
    Exact(#[from] ExactError),
    #[error(transparent)]
    Chain(#[from] ChainError),
    #[error(transparent)]
    Mixing(#[from] MixingError),
    #[error(transparent)]
    Reduction(#[from] ReductionError),
}

impl CliError {
    /// 2 for problems with the invocation itself, 1 for everything the
    /// computation rejects.
    pub fn exit_code(&self) -> u8 {
        match self {
            CliError::Read { .. } | CliError::Usage(_) => 2,
            _ => 1,
        }
    }
}

fn read(path: &Path) -> Result<String, CliError> {
    fs::read_to_string(path).map_err(|source| CliError::Read {
        path: path.to_path_buf(),
        source,
    })
}

fn load(args: &GraphArgs) -> Result<ParsedGraph, CliError> {
    let format = match args.format {
        FormatArg::Auto => GraphFormat::Auto,
        FormatArg::Edges => GraphFormat::EdgeList,
        FormatArg::Json => GraphFormat::Json,
    };
    Ok(parse_graph(&read(&args.graph)?, format)?)
}

fn load_bipartite(args: &GraphArgs) -> Result<BipartiteGraph, CliError> {
    Ok(load(args)?.bipartite()?)
}

fn print_value(v: &BigRational, as_json: bool) {
    if as_json {
        println!("{}", json!({"value": format_rational(v), "decimal": rational_to_f64(v)}));
    } else {
        println!("{}", format_rational(v));
    }
}

fn print_json<T: serde::Serialize>(v: &T) -> Result<(), CliError> {
    let line = serde_json::to_string(v).map_err(|e| CliError::Write(e.into()))?;
    println!("{line}");
    Ok(())
}

pub fn run(cli: &Cli) -> Result<ExitCode, CliError> {
    let opts = EnumOptions {
        limit: cli.limit,
        threads: cli.threads.max(1),
    };
    match &cli.command {
        Command::Eval(cmd) => eval(cmd, opts)?,
        Command::Count(cmd) => count(cmd, opts)?,
        Command::Sample(cmd) => sample(cmd)?,
        Command::Mix(args) => mix(args, cli.threads.max(1))?,
        Command::Lw(args) => lw(args)?,
        Command::Reduce(cmd) => reduce(cmd, opts)?,
        Command::Selftest(args) => {
            let report = selftest::run(&SelftestOptions {
                quick: args.quick,
                inject_rank_fault: args.inject_rank_fault,
                seed: args.seed,
            });
            print_json(&report)?;
            if !report.passed {
                return Ok(ExitCode::from(1));
            }
        }
    }
    Ok(ExitCode::SUCCESS)
}

fn eval(cmd: &EvalCommand, opts: EnumOptions) -> Result<(), CliError> {
    match cmd {
        EvalCommand::R2p(a) => {
            let g = load_bipartite(&a.graph)?;
            print_value(&exact::eval_r2_prime(&g, &a.lambda, &a.mu, opts)?.value, a.json);
        }
        EvalCommand::R2(a) => {
            let g = load(&a.graph)?.graph;
            print_value(&exact::eval_r2(&g, &a.lambda, &a.mu, opts)?.value, a.json);
        }
        EvalCommand::Zrc(a) => {
            let g = load(&a.graph)?.graph;
            print_value(&exact::eval_z_rc(&g, &a.q, &a.mu, opts)?.value, a.json);
        }
        EvalCommand::Tutte(a) => {
            let g = load(&a.graph)?.graph;
            print_value(&exact::eval_tutte(&g, &a.x, &a.y, opts)?, a.json);
        }
    }
    Ok(())
}

fn count(cmd: &CountCommand, opts: EnumOptions) -> Result<(), CliError> {
    match cmd {
        CountCommand::Bis(a) => {
            if a.oracle {
                println!("{}", exact::count_bis_oracle(&load(&a.graph)?.graph)?);
            } else {
                println!("{}", exact::count_bis(&load_bipartite(&a.graph)?, opts)?);
            }
        }
        CountCommand::Pbis(a) => {
            let v = match a.method {
                PbisMethod::Rank => exact::count_pbis(&load_bipartite(&a.graph)?, &a.eta, opts)?,
                PbisMethod::Oracle => exact::count_pbis_oracle(&load(&a.graph)?.graph, &a.eta)?,
                PbisMethod::Twins => exact::count_pbis_twins(&load_bipartite(&a.graph)?, &a.eta),
            };
            println!("{}", format_rational(&v));
        }
        CountCommand::Matchings(a) => {
            let g = load(&a.graph)?.graph;
            let v = if a.oracle {
                exact::count_matchings_oracle(&g, opts)?
            } else {
                exact::count_matchings(&g, opts)?
            };
            println!("{v}");
        }
        CountCommand::Perfect(a) => {
            let g = load(&a.graph)?.graph;
            let v = if a.oracle {
                exact::count_perfect_matchings_oracle(&g, opts)?
            } else {
                exact::count_perfect_matchings(&g, opts)?
            };
            println!("{v}");
        }
    }
    Ok(())
}

fn initial_state(init: InitArg) -> InitialState {
    match init {
        InitArg::Empty => InitialState::Empty,
        InitArg::Full => InitialState::Full,
        InitArg::Random => InitialState::Random,
    }
}

fn sample(cmd: &SampleCommand) -> Result<(), CliError> {
    let (a, rws) = match cmd {
        SampleCommand::Rws(a) => (a, true),
        SampleCommand::Rc(a) => (a, false),
    };
    let parsed = load(&a.graph)?;
    let mut rng = chain_rng(a.seed, 0);
    let init = initial_state(a.init).build(parsed.graph.m(), &mut rng);
    let mut chain = if rws {
        Chain::rws(&parsed.bipartite()?, ChainParams::rws(a.weight.clone(), a.mu.clone())?, init, rng)?
    } else {
        Chain::rc(&parsed.graph, ChainParams::rc(a.weight.clone(), a.mu.clone())?, init, rng)?
    };
    let cfg = RunConfig {
        steps: a.steps,
        burn_in: a.burnin,
        thin: a.thin,
    };
    let mut out = BufWriter::new(io::stdout().lock());
    let mut failed = None;
    let summary = chain.run(&cfg, |s, _| {
        if failed.is_none() {
            if let Err(e) = writeln!(out, "{}", s.to_hex()) {
                failed = Some(e);
            }
        }
    })?;
    if let Some(e) = failed {
        return Err(e.into());
    }
    let line = serde_json::to_string(&summary).map_err(|e| CliError::Write(e.into()))?;
    writeln!(out, "{line}")?;
    out.flush()?;
    Ok(())
}

fn read_permutation(path: &Path) -> Result<Vec<usize>, CliError> {
    read(path)?
        .split_whitespace()
        .map(|t| {
            t.parse::<usize>().map_err(|e| CliError::Malformed {
                what: format!("ordering file {}", path.display()),
                msg: format!("{t:?}: {e}"),
            })
        })
        .collect()
}

fn read_treedec(path: &Path) -> Result<TreeDecomposition, CliError> {
    let doc: TreeDecompositionDocument = serde_json::from_str(&read(path)?).map_err(|e| CliError::Malformed {
        what: format!("tree decomposition {}", path.display()),
        msg: e.to_string(),
    })?;
    Ok(TreeDecomposition::from_document(doc)?)
}

/// The ordering selected on the command line; `optimal` only yields a width
/// and is handled by the caller.
fn resolve_ordering(g: &Graph, args: &OrderingArgs) -> Result<EdgeOrdering, CliError> {
    Ok(match args.ordering {
        OrderingArg::Natural => natural_ordering(g),
        OrderingArg::Dfs => dfs_tree_ordering(g)?,
        OrderingArg::Treedec => {
            let path = args
                .treedec
                .as_ref()
                .ok_or_else(|| CliError::Usage("--ordering treedec needs --treedec FILE".into()))?;
            treedec_ordering(g, &read_treedec(path)?)?
        }
        OrderingArg::File => {
            let path = args
                .ordering_file
                .as_ref()
                .ok_or_else(|| CliError::Usage("--ordering file needs --ordering-file FILE".into()))?;
            linear_width_of_ordering(g, &read_permutation(path)?)?
        }
        OrderingArg::Optimal => {
            return Err(CliError::Usage(
                "--ordering optimal reports a width only; pick an explicit ordering here".into(),
            ))
        }
    })
}

fn lw(args: &LwArgs) -> Result<(), CliError> {
    let g = load(&args.graph)?.graph;
    if args.ordering.ordering == OrderingArg::Optimal {
        let width = optimal_linear_width(&g)?;
        if args.json {
            println!("{}", json!({ "width": width }));
        } else {
            println!("{width}");
        }
        return Ok(());
    }
    let ord = resolve_ordering(&g, &args.ordering)?;
    if args.json {
        print_json(&ord)?;
    } else {
        println!("{}", ord.width);
    }
    Ok(())
}

fn hex(h: u64) -> String {
    format!("{h:x}")
}

fn mix(args: &MixArgs, threads: usize) -> Result<(), CliError> {
    let parsed = load(&args.graph)?;
    let g = &parsed.graph;
    let rws = args.family == FamilyArg::Rws;
    let (space, bip) = if rws {
        let bg = parsed.bipartite()?;
        let params = ChainParams::rws(args.weight.clone(), args.mu.clone())?;
        (ExactChain::rws(&bg, &params)?, Some(bg))
    } else {
        let params = ChainParams::rc(args.weight.clone(), args.mu.clone())?;
        (ExactChain::rc(g, &params)?, None)
    };
    let eps = rational_to_f64(&args.eps);
    if !(eps > 0.0 && eps < 1.0) {
        return Err(CliError::Usage(format!("--eps must lie in (0, 1), got {}", format_rational(&args.eps))));
    }
    let ord = resolve_ordering(g, &args.ordering)?;
    let pi = space.pi();
    let m = space.m();

    let mut csv: Box<dyn Write> = match &args.csv {
        Some(path) => Box::new(BufWriter::new(fs::File::create(path)?)),
        None => Box::new(BufWriter::new(io::stdout().lock())),
    };

    let cong = if m <= CONGESTION_MAX_EDGES {
        Some(congestion(&space, &ord.perm, ord.width)?)
    } else {
        None
    };
    let mut summary = json!({
        "family": if rws { "rws" } else { "rc" },
        "m": m,
        "eps": format_rational(&args.eps),
        "ell": ord.width,
        "ordering": ord.perm,
        "rho": cong.as_ref().map(|c| format_rational(&c.rho)),
        "rho_decimal": cong.as_ref().map(|c| rational_to_f64(&c.rho)),
        "bound": cong.as_ref().map(|c| format_rational(&c.bound)),
        "bound_satisfied": cong.as_ref().map(|c| c.within_bound()),
    });

    if let Some(replicas) = args.empirical {
        if replicas == 0 || args.every == 0 {
            return Err(CliError::Usage("--empirical and --every must be positive".into()));
        }
        let checkpoints = args.max_steps / args.every as usize;
        if replicas.saturating_mul(checkpoints + 1) > EMPIRICAL_MAX_CELLS {
            return Err(CliError::Usage(format!(
                "{replicas} replicas × {} checkpoints exceeds {EMPIRICAL_MAX_CELLS}; lower --max-steps or raise --every",
                checkpoints + 1
            )));
        }
        let params = space.params().clone();
        let trajectories: Vec<Vec<u64>> = run_replicas(replicas, threads, |r| {
            let rng = chain_rng(args.seed, r as u64);
            let mut chain = match &bip {
                Some(bg) => Chain::rws(bg, params.clone(), EdgeSubset::empty(m), rng),
                None => Chain::rc(g, params.clone(), EdgeSubset::empty(m), rng),
            }
            .expect("parameters already validated");
            let mut seen = vec![0u64];
            for _ in 0..checkpoints {
                for _ in 0..args.every {
                    chain.step();
                }
                seen.push(chain.subset().to_mask().expect("m ≤ 16"));
            }
            seen
        });
        writeln!(csv, "step,tv_empirical")?;
        let mut tau_hat = None;
        for c in 0..=checkpoints {
            let mut hist = vec![0u64; 1 << m];
            for t in &trajectories {
                hist[t[c] as usize] += 1;
            }
            let tv = empirical_tv(&hist, &pi);
            let step = c as u64 * args.every;
            writeln!(csv, "{step},{tv}")?;
            if tau_hat.is_none() && tv <= eps {
                tau_hat = Some(step);
            }
        }
        summary["replicas"] = json!(replicas);
        summary["tau_empirical"] = json!(tau_hat);
        summary["tau"] = json!(tau_hat);
    } else {
        let starts: Vec<u64> = match args.starts {
            StartsArg::All => (0..1u64 << m).collect(),
            StartsArg::Extremes => {
                let mut s = vec![0, (1u64 << m) - 1, space.pi_min().1];
                s.sort_unstable();
                s.dedup();
                s
            }
        };
        let mt = mixing_time_exact(&space, eps, &starts, args.max_steps);
        let horizon = mt.tau.unwrap_or(args.max_steps);
        let curves: Vec<Vec<f64>> = starts.iter().map(|&s| tv_curve(&space, s, horizon)).collect();
        let header: Vec<String> = starts.iter().map(|&s| format!("tv_{}", hex(s))).collect();
        writeln!(csv, "step,{}", header.join(","))?;
        for t in 0..=horizon {
            let row: Vec<String> = curves.iter().map(|c| c[t].to_string()).collect();
            writeln!(csv, "{t},{}", row.join(","))?;
        }
        let path_bound = cong.as_ref().map(|c| {
            starts
                .iter()
                .map(|&s| mixing_time_bound(&c.rho, pi[s as usize], eps))
                .fold(0.0f64, f64::max)
        });
        summary["tau"] = json!(mt.tau);
        summary["per_start"] = json!(mt
            .per_start
            .iter()
            .map(|(s, t)| json!({"start": hex(*s), "tau": t}))
            .collect::<Vec<_>>());
        summary["tau_bound"] = json!(path_bound);
        summary["tau_within_bound"] = json!(path_bound.map(|b| mt.tau.is_some_and(|t| t as f64 <= b)));
        summary["pi_min"] = json!(space.pi_min().0);
    }
    csv.flush()?;
    drop(csv);
    let line = summary.to_string();
    if args.csv.is_some() {
        println!("{line}");
    } else {
        eprintln!("{line}");
    }
    Ok(())
}

fn reduce(cmd: &ReduceCommand, opts: EnumOptions) -> Result<(), CliError> {
    let cert = match cmd {
        ReduceCommand::Tutte(a) => {
            let g = load(&a.graph)?.graph;
            let root = match a.root {
                RootArg::Auto => RootChoice::Auto,
                RootArg::Positive => RootChoice::Positive,
                RootArg::Negative => RootChoice::Negative,
            };
            let topts = TutteOptions {
                prime_cap: a.prime_cap,
                root,
                enumeration: EnumOptions { threads: 1, ..opts },
                threads: opts.threads,
            };
            reductions::tutte_via_oracle(&g, &a.x, &a.y, &topts)?
        }
        ReduceCommand::Bis(a) => {
            let g = load(&a.graph)?.graph;
            let bopts = BisOptions {
                prime_cap: a.prime_cap,
                threads: opts.threads,
                ..BisOptions::default()
            };
            reductions::bis_via_pbis_oracle(&g, &a.eta, &bopts)?
        }
    };
    print_json(&cert)
}
