use std::collections::HashMap;
use std::path::PathBuf;
use std::process::ExitCode;

use anyhow::{anyhow, bail, Context};
use clap::{Args, Parser, Subcommand, ValueEnum};
use serde::Serialize;
use serde_json::{json, Value};

use modlaw::elimination::{build_psi_open, formula_to_polynomial, limit_probabilities, DEFAULT_TERM_CAP};
use modlaw::experiments::{
    convergence_experiment, equidist_copies, freq_distribution, labelled_equidist, LabelledSetup,
};
use modlaw::freq::freq_vector;
use modlaw::graph::Anchor;
use modlaw::logic::{evaluate, parse};
use modlaw::polybias::{bias_exact, bias_mc, gip, gowers_norm, Estimate, Measure, Mode, PhaseFunction, ZqPolynomial};
use modlaw::{Graph, LabelledGraph};

#[derive(Parser)]
#[command(name = "modlaw", version, about = "Subgraph frequencies mod q, FO[Mod_q] limit laws and polynomial bias")]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Args)]
struct Common {
    /// Also write the JSON report to this file.
    #[arg(long, global = true)]
    json_out: Option<PathBuf>,
    /// Worker threads (default: all cores). Results do not depend on it.
    #[arg(long, global = true)]
    threads: Option<usize>,
}

#[derive(Subcommand)]
enum Command {
    /// Evaluate a formula on a graph read from JSON ({"n": .., "edges": [[u,v], ..]}).
    Eval {
        #[arg(long)]
        graph: PathBuf,
        #[arg(long)]
        formula: String,
        /// Bindings for free variables, e.g. x=0,y=3.
        #[arg(long, value_delimiter = ',')]
        bind: Vec<String>,
        /// Also evaluate the eliminated form with this modulus.
        #[arg(long)]
        psi_q: Option<u32>,
        #[command(flatten)]
        common: Common,
    },
    /// Exact limit probabilities a_0..a_{q-1} of a sentence.
    Limit {
        #[arg(long)]
        formula: String,
        #[arg(long)]
        q: u32,
        #[arg(long)]
        c_cap: Option<usize>,
        /// Also report the edge polynomial for graphs on this many vertices.
        #[arg(long)]
        edge_polynomial: Option<usize>,
        #[command(flatten)]
        common: Common,
    },
    /// Frequency vector of a graph at a root tuple.
    Freq {
        #[arg(long)]
        graph: PathBuf,
        #[arg(long)]
        a: usize,
        #[arg(long)]
        q: u32,
        #[arg(long, value_delimiter = ',')]
        roots: Vec<usize>,
        #[command(flatten)]
        common: Common,
    },
    /// Joint copy counts mod q of unlabelled patterns against uniform.
    Equidist {
        /// Patterns: K2, P3, K3, C4, K4, S3, or n:u-v,u-v,...
        #[arg(long, value_delimiter = ';', default_value = "K3")]
        patterns: Vec<String>,
        #[command(flatten)]
        sampling: Sampling,
        #[command(flatten)]
        common: Common,
    },
    /// Frequency vector of the empty tuple against uniform on the feasible set.
    Freqdist {
        #[arg(long, default_value_t = 3)]
        a: usize,
        #[command(flatten)]
        sampling: Sampling,
        #[command(flatten)]
        common: Common,
    },
    /// Rooted copy counts at w and at extra roots u_j against uniform.
    Labelled {
        #[arg(long, default_value_t = 1)]
        k: usize,
        /// Patterns over k labels, as labels/n:u-v,... separated by ';'.
        #[arg(long, value_delimiter = ';')]
        base: Vec<String>,
        /// Patterns over k+1 labels using the last label; the default counts
        /// neighbours of u_j.
        #[arg(long, value_delimiter = ';', default_value = "2/3:1-2")]
        ext: Vec<String>,
        #[arg(long, default_value_t = 2)]
        s: usize,
        /// Vertices whose induced subgraph is fixed.
        #[arg(long, value_delimiter = ',')]
        anchor_vertices: Vec<usize>,
        /// Edges of the fixed subgraph, e.g. 0-1,1-2.
        #[arg(long, value_delimiter = ',')]
        anchor_edges: Vec<String>,
        #[command(flatten)]
        sampling: Sampling,
        #[command(flatten)]
        common: Common,
    },
    /// μ-Gowers norm of ω^Q under a p-biased or uniform product measure.
    Gowers {
        #[command(flatten)]
        poly: PolyArgs,
        #[arg(long, default_value_t = 2)]
        d: usize,
        /// Bit probability; omitted means uniform on Z_q^m.
        #[arg(long)]
        p: Option<f64>,
        #[arg(long, default_value_t = 100_000)]
        samples: u64,
        #[arg(long, default_value_t = 0)]
        seed: u64,
        #[command(flatten)]
        common: Common,
    },
    /// |E ω^Q| under the p-biased measure on {0,1}^m.
    Bias {
        #[command(flatten)]
        poly: PolyArgs,
        #[arg(long, default_value_t = 0.5)]
        p: f64,
        #[arg(long, value_enum, default_value_t = BiasMode::Auto)]
        mode: BiasMode,
        #[arg(long, default_value_t = 100_000)]
        samples: u64,
        #[arg(long, default_value_t = 0)]
        seed: u64,
        #[command(flatten)]
        common: Common,
    },
    /// Empirical satisfaction frequency per n against the limit profile.
    Convergence {
        #[arg(long)]
        formula: String,
        #[arg(long)]
        q: u32,
        #[arg(long, default_value_t = 0.5)]
        p: f64,
        #[arg(long, value_delimiter = ',', required = true)]
        n_list: Vec<usize>,
        #[arg(long, default_value_t = 10_000)]
        samples: u64,
        #[arg(long, default_value_t = 0)]
        seed: u64,
        #[arg(long)]
        c_cap: Option<usize>,
        #[command(flatten)]
        common: Common,
    },
}

#[derive(Args)]
struct Sampling {
    #[arg(long, default_value_t = 30)]
    n: usize,
    #[arg(long, default_value_t = 0.5)]
    p: f64,
    #[arg(long, default_value_t = 2)]
    q: u32,
    #[arg(long, default_value_t = 100_000)]
    samples: u64,
    #[arg(long, default_value_t = 0)]
    seed: u64,
    /// Statistical distance gate; without it the report is not gated.
    #[arg(long)]
    threshold: Option<f64>,
}

#[derive(Args)]
struct PolyArgs {
    #[arg(long, default_value_t = 2)]
    q: u32,
    /// Number of variables m (taken from --gip when omitted).
    #[arg(long)]
    vars: Option<usize>,
    /// Polynomial such as "Z1*Z2 + 2*Z3".
    #[arg(long, conflicts_with = "gip")]
    poly: Option<String>,
    /// Generalized inner product with r blocks of degree d, as r,d.
    #[arg(long)]
    gip: Option<String>,
}

#[derive(Clone, Copy, ValueEnum)]
enum BiasMode {
    Auto,
    Exact,
    Mc,
}

/// A finished command: its JSON report and whether a gate failed.
struct Outcome {
    report: Value,
    gate_failed: bool,
}

impl Outcome {
    fn plain(report: impl Serialize) -> anyhow::Result<Outcome> {
        Ok(Outcome { report: serde_json::to_value(report)?, gate_failed: false })
    }

    fn gated(report: impl Serialize, pass: Option<bool>) -> anyhow::Result<Outcome> {
        Ok(Outcome { report: serde_json::to_value(report)?, gate_failed: pass == Some(false) })
    }
}

fn main() -> ExitCode {
    // clap exits with 2 on usage errors; 2 is reserved for gate failures here
    let cli = match Cli::try_parse() {
        Ok(cli) => cli,
        Err(e) => {
            let code = if e.use_stderr() { 1 } else { 0 };
            let _ = e.print();
            return ExitCode::from(code);
        }
    };
    match run(cli.command) {
        Ok(out) => {
            if out.gate_failed {
                ExitCode::from(2)
            } else {
                ExitCode::SUCCESS
            }
        }
        Err(e) => {
            eprintln!("error: {e:#}");
            ExitCode::from(1)
        }
    }
}

fn common(cmd: &Command) -> &Common {
    match cmd {
        Command::Eval { common, .. }
        | Command::Limit { common, .. }
        | Command::Freq { common, .. }
        | Command::Equidist { common, .. }
        | Command::Freqdist { common, .. }
        | Command::Labelled { common, .. }
        | Command::Gowers { common, .. }
        | Command::Bias { common, .. }
        | Command::Convergence { common, .. } => common,
    }
}

fn run(cmd: Command) -> anyhow::Result<Outcome> {
    let Common { json_out, threads } = common(&cmd);
    let json_out = json_out.clone();
    let mut pool = rayon::ThreadPoolBuilder::new();
    if let Some(t) = threads {
        if *t == 0 {
            bail!("--threads must be positive");
        }
        pool = pool.num_threads(*t);
    }
    let out = pool.build()?.install(|| execute(cmd))?;
    let text = serde_json::to_string_pretty(&out.report)?;
    println!("{text}");
    if let Some(path) = json_out {
        std::fs::write(&path, format!("{text}\n")).with_context(|| format!("writing {}", path.display()))?;
    }
    Ok(out)
}

fn execute(cmd: Command) -> anyhow::Result<Outcome> {
    match cmd {
        Command::Eval { graph, formula, bind, psi_q, .. } => {
            let g = read_graph(&graph)?;
            let phi = parse(&formula)?;
            let mut env = HashMap::new();
            let mut order = Vec::new();
            for b in &bind {
                let (var, v) = b.split_once('=').ok_or_else(|| anyhow!("binding `{b}` is not var=vertex"))?;
                env.insert(
                    var.trim().to_string(),
                    v.trim().parse::<usize>().with_context(|| format!("binding `{b}`"))?,
                );
                order.push(var.trim().to_string());
            }
            let satisfied = evaluate(&phi, &g, &env)?;
            let mut report = json!({ "formula": phi.to_string(), "satisfied": satisfied });
            if let Some(q) = psi_q {
                let free: Vec<String> = phi.free_variables().into_iter().collect();
                let psi = build_psi_open(&phi, &free, q, None)?;
                let w: Vec<usize> = free.iter().map(|v| env[v]).collect();
                report["psi"] = json!(psi.eval_graph(&g, &w)?);
            }
            Outcome::plain(report)
        }
        Command::Limit { formula, q, c_cap, edge_polynomial, .. } => {
            let phi = parse(&formula)?;
            let profile = limit_probabilities(&phi, q, c_cap)?;
            let mut report = serde_json::to_value(&profile)?;
            report["formula"] = json!(phi.to_string());
            if let Some(n) = edge_polynomial {
                report["edge_polynomial"] =
                    serde_json::to_value(formula_to_polynomial(&phi, q, n, c_cap, DEFAULT_TERM_CAP)?)?;
            }
            Outcome::plain(report)
        }
        Command::Freq { graph, a, q, roots, .. } => {
            let g = read_graph(&graph)?;
            Outcome::plain(freq_vector(&g, &roots, a, q)?)
        }
        Command::Equidist { patterns, sampling: s, .. } => {
            let graphs = patterns.iter().map(|p| named_pattern(p)).collect::<anyhow::Result<Vec<_>>>()?;
            let r = equidist_copies(&graphs, s.n, s.p, s.q, s.samples, s.seed, s.threshold)?;
            let pass = r.pass;
            Outcome::gated(r, pass)
        }
        Command::Freqdist { a, sampling: s, .. } => {
            let r = freq_distribution(s.n, s.p, s.q, a, s.samples, s.seed, s.threshold)?;
            let pass = r.pass;
            Outcome::gated(r, pass)
        }
        Command::Labelled { k, base, ext, s: extra, anchor_vertices, anchor_edges, sampling: s, .. } => {
            let edges = anchor_edges.iter().map(|e| parse_edge(e)).collect::<anyhow::Result<Vec<_>>>()?;
            let setup = LabelledSetup {
                k,
                base_patterns: base.iter().map(|p| labelled_pattern(p)).collect::<anyhow::Result<_>>()?,
                extension_patterns: ext.iter().map(|p| labelled_pattern(p)).collect::<anyhow::Result<_>>()?,
                s: extra,
                n: s.n,
                p: s.p,
                q: s.q,
                samples: s.samples,
                anchor: Anchor::new(anchor_vertices, &edges)?,
                seed: s.seed,
                threshold: s.threshold,
            };
            let r = labelled_equidist(&setup)?;
            let pass = r.pass;
            Outcome::gated(r, pass)
        }
        Command::Gowers { poly, d, p, samples, seed, .. } => {
            let q_poly = read_poly(&poly)?;
            let m = q_poly.var_count();
            let mu = match p {
                Some(p) => Measure::p_biased(poly.q, m, p)?,
                None => Measure::uniform(poly.q, m),
            };
            let f = PhaseFunction::from_poly(&q_poly);
            Outcome::plain(gowers_norm(&f, &mu, d, samples, seed)?)
        }
        Command::Bias { poly, p, mode, samples, seed, .. } => {
            let q_poly = read_poly(&poly)?;
            let exact = match mode {
                BiasMode::Exact => true,
                BiasMode::Mc => false,
                BiasMode::Auto => q_poly.var_count() <= modlaw::polybias::BIAS_EXACT_MAX_VARS,
            };
            let est = if exact {
                Estimate { value: bias_exact(&q_poly, p)?, mode: Mode::Exact, stderr: None }
            } else {
                bias_mc(&q_poly, p, samples, seed)?
            };
            Outcome::plain(est)
        }
        Command::Convergence { formula, q, p, n_list, samples, seed, c_cap, .. } => {
            let phi = parse(&formula)?;
            let r = convergence_experiment(&phi, q, p, &n_list, samples, seed, c_cap)?;
            let pass = Some(r.pass);
            Outcome::gated(r, pass)
        }
    }
}

fn read_graph(path: &PathBuf) -> anyhow::Result<Graph> {
    let text = std::fs::read_to_string(path).with_context(|| format!("reading {}", path.display()))?;
    Ok(Graph::from_json(&text)?)
}

fn read_poly(args: &PolyArgs) -> anyhow::Result<ZqPolynomial> {
    match (&args.poly, &args.gip) {
        (Some(text), None) => {
            let m = args.vars.ok_or_else(|| anyhow!("--poly needs --vars"))?;
            Ok(ZqPolynomial::parse(text, args.q, m)?)
        }
        (None, Some(rd)) => {
            let (r, d) = rd.split_once(',').ok_or_else(|| anyhow!("--gip takes r,d"))?;
            let (r, d): (usize, usize) = (r.trim().parse()?, d.trim().parse()?);
            let p = gip(r, d, &vec![1; r], args.q)?;
            if let Some(m) = args.vars {
                if m != r * d {
                    bail!("--vars {m} disagrees with gip size {}", r * d);
                }
            }
            Ok(p)
        }
        _ => bail!("give exactly one of --poly or --gip"),
    }
}

fn parse_edge(text: &str) -> anyhow::Result<(usize, usize)> {
    let (u, v) = text.split_once('-').ok_or_else(|| anyhow!("edge `{text}` is not u-v"))?;
    Ok((u.trim().parse()?, v.trim().parse()?))
}

fn parse_edges(text: &str) -> anyhow::Result<Vec<(usize, usize)>> {
    text.split(',').filter(|e| !e.trim().is_empty()).map(parse_edge).collect()
}

/// `K2`, `P3`, `K3`, `C4`, `K4`, `S3` or `n:u-v,...`.
fn named_pattern(text: &str) -> anyhow::Result<Graph> {
    let t = text.trim();
    let (n, edges): (usize, Vec<(usize, usize)>) = match t {
        "K2" => (2, vec![(0, 1)]),
        "P3" => (3, vec![(0, 1), (1, 2)]),
        "K3" => (3, vec![(0, 1), (1, 2), (0, 2)]),
        "C4" => (4, vec![(0, 1), (1, 2), (2, 3), (0, 3)]),
        "K4" => (4, vec![(0, 1), (0, 2), (0, 3), (1, 2), (1, 3), (2, 3)]),
        "S3" => (4, vec![(0, 1), (0, 2), (0, 3)]),
        _ => {
            let (n, rest) = t.split_once(':').ok_or_else(|| anyhow!("pattern `{t}` is not a name or n:edges"))?;
            (n.trim().parse()?, parse_edges(rest)?)
        }
    };
    Ok(Graph::from_edges(n, &edges)?)
}

/// `labels/n:u-v,...`; vertices below `labels` are the labelled ones.
fn labelled_pattern(text: &str) -> anyhow::Result<LabelledGraph> {
    let (head, rest) = text.trim().split_once(':').ok_or_else(|| anyhow!("pattern `{text}` is not labels/n:edges"))?;
    let (k, n) = head.split_once('/').ok_or_else(|| anyhow!("pattern `{text}` is not labels/n:edges"))?;
    Ok(LabelledGraph::new(k.trim().parse()?, n.trim().parse()?, &parse_edges(rest)?)?)
}
