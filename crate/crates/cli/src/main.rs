//! `netcg`: build the Cayley graphs, compute automorphism groups, run the
//! classification and the identifications of the exceptional graphs
//! with their geometries.
//!
//! Exit codes: 0 success, 1 verification failure, 2 usage error.

mod graphfile;

use std::fs;
use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand, ValueEnum};
use netcg::autiso::automorphism_group;
use netcg::classify::{self, Table1Options};
use netcg::graphcore::Graph;
use netcg::houlis::{gamma_abelian, reparametrize, valid_params, AbelianParams};
use netcg::netcayley::{construction1, construction2, GammaParams};

#[derive(Parser)]
#[command(name = "netcg", version, about = "Normal edge-transitive Cayley graphs of order pq")]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Build a graph and write it as an edge list or DOT.
    Construct(ConstructArgs),
    /// Automorphism group order, primitivity and block systems of a graph file.
    Aut(AutArgs),
    /// Classify the graphs for one (p, q) and write a report.
    Classify(ClassifyArgs),
    /// Identify the exceptional graphs with their geometries.
    VerifyTable1(Table1Args),
    /// List the valid (d2, d1, d) for Z_p × Z_q.
    Houlis(HoulisArgs),
}

#[derive(Clone, Copy, ValueEnum)]
enum GraphFormat {
    Edges,
    Dot,
}

#[derive(Clone, Copy, ValueEnum)]
enum ReportFormat {
    Md,
    Kv,
}

#[derive(Args)]
struct ConstructArgs {
    #[arg(long)]
    p: u64,
    #[arg(long)]
    q: u64,
    #[arg(long, conflicts_with_all = ["construction1", "abelian"])]
    ell: Option<u64>,
    #[arg(long, requires = "ell")]
    i: Option<u64>,
    /// The lexicographic product Γ(pq) with H = T.
    #[arg(long, conflicts_with = "abelian")]
    construction1: bool,
    /// Cayley graph on Z_p × Z_q for the triple d2,d1,d.
    #[arg(long, value_name = "D2,D1,D")]
    abelian: Option<String>,
    #[arg(long, value_enum, default_value = "edges")]
    format: GraphFormat,
    /// Output file; standard output when absent.
    #[arg(long)]
    out: Option<PathBuf>,
}

#[derive(Args)]
struct AutArgs {
    #[arg(long = "in")]
    input: PathBuf,
    /// Print the block sizes of every minimal block system.
    #[arg(long)]
    blocks: bool,
    /// Print the primitivity verdict.
    #[arg(long)]
    primitive: bool,
}

#[derive(Args)]
struct ClassifyArgs {
    #[arg(long)]
    p: u64,
    #[arg(long)]
    q: u64,
    #[arg(long, default_value_t = classify::DEFAULT_MAX_SIZE)]
    max_size: u64,
    #[arg(long, value_enum, default_value = "md")]
    report: ReportFormat,
    /// Report file; standard output when absent.
    #[arg(long)]
    out: Option<PathBuf>,
}

#[derive(Args)]
struct Table1Args {
    /// Also identify Γ(146,9,1) with the incidence graph of PG(2,8).
    #[arg(long)]
    include_146: bool,
    /// Test hook: damage every geometry before comparing.
    #[arg(long, hide = true)]
    corrupt_geometry: bool,
}

#[derive(Args)]
struct HoulisArgs {
    #[arg(long)]
    p: u64,
    #[arg(long)]
    q: u64,
}

enum Failure {
    Usage(String),
    Verification(String),
}

fn usage(e: impl ToString) -> Failure {
    Failure::Usage(e.to_string())
}

fn write_output(out: &Option<PathBuf>, text: &str) -> Result<(), Failure> {
    match out {
        Some(path) => fs::write(path, text).map_err(|e| usage(format!("cannot write {}: {e}", path.display()))),
        None => {
            print!("{text}");
            Ok(())
        }
    }
}

fn parse_triple(s: &str) -> Result<(u64, u64, u64), Failure> {
    let parts: Vec<u64> = s
        .split(',')
        .map(|x| x.trim().parse::<u64>())
        .collect::<Result<_, _>>()
        .map_err(|_| usage(format!("--abelian expects d2,d1,d, got {s:?}")))?;
    match parts[..] {
        [a, b, c] => Ok((a, b, c)),
        _ => Err(usage(format!("--abelian expects three numbers, got {s:?}"))),
    }
}

fn construct(args: ConstructArgs) -> Result<(), Failure> {
    let (p, q) = (args.p, args.q);
    let mut meta: Vec<(String, String)> = vec![("p".into(), p.to_string()), ("q".into(), q.to_string())];
    let graph: Graph = if args.construction1 {
        meta.push(("construction".into(), "lexicographic".into()));
        construction1(p, q).map_err(usage)?
    } else if let Some(triple) = &args.abelian {
        let (d2, d1, d) = parse_triple(triple)?;
        meta.push(("construction".into(), "abelian".into()));
        meta.push(("d2,d1,d".into(), format!("{d2},{d1},{d}")));
        gamma_abelian(AbelianParams::new(p, q, d2, d1, d).map_err(usage)?)
    } else {
        let ell = args
            .ell
            .ok_or_else(|| usage("one of --ell, --construction1 or --abelian is required"))?;
        let i = args.i.unwrap_or(1);
        let params = GammaParams::new(p, q, ell, i).map_err(usage)?;
        meta.push(("ell".into(), ell.to_string()));
        meta.push(("i".into(), i.to_string()));
        meta.push(("construction".into(), "gamma".into()));
        construction2(params).map_err(usage)?
    };
    let text = match args.format {
        GraphFormat::Edges => graphfile::serialize(&graph, &meta),
        GraphFormat::Dot => graphfile::to_dot(&graph, &meta),
    };
    let valency = graph.regular_valency().map_or_else(|| "irregular".to_string(), |v| v.to_string());
    let stats = format!(
        "n={} m={} valency={} connected={}",
        graph.n(),
        graph.edge_count(),
        valency,
        graph.is_connected()
    );
    write_output(&args.out, &text)?;
    if args.out.is_some() {
        println!("{stats}");
    } else {
        eprintln!("{stats}");
    }
    Ok(())
}

fn aut(args: AutArgs) -> Result<(), Failure> {
    let text = fs::read_to_string(&args.input).map_err(|e| usage(format!("cannot read {}: {e}", args.input.display())))?;
    let file = graphfile::parse(&text).map_err(|e| usage(format!("{}: {e}", args.input.display())))?;
    let group = automorphism_group(&file.graph);
    let mut line = format!("order={}", group.order());
    if args.primitive {
        line.push_str(&format!(" primitive={}", group.is_primitive()));
    }
    println!("{line}");
    println!("generators={}", group.generators().len());
    if args.blocks {
        match group.minimal_block_systems() {
            Ok(systems) => {
                let sizes: Vec<String> = systems.iter().map(|s| s[0].len().to_string()).collect();
                println!("minimal_block_sizes={}", if sizes.is_empty() { "none".into() } else { sizes.join(",") });
            }
            Err(e) => println!("minimal_block_sizes=unavailable ({e})"),
        }
    }
    Ok(())
}

fn classify_cmd(args: ClassifyArgs) -> Result<(), Failure> {
    let report = classify::classify(args.p, args.q, args.max_size).map_err(usage)?;
    let text = match args.report {
        ReportFormat::Md => classify::render_markdown(&report),
        ReportFormat::Kv => classify::render_kv(&report),
    };
    write_output(&args.out, &text)?;
    if report.passed() {
        Ok(())
    } else {
        Err(Failure::Verification(format!(
            "classification of p = {}, q = {} has failing rows",
            args.p, args.q
        )))
    }
}

fn verify_table1(args: Table1Args) -> Result<(), Failure> {
    let options = Table1Options {
        include_146: args.include_146,
        corrupt_geometry: args.corrupt_geometry,
        ..Table1Options::default()
    };
    let report = classify::verify_table1(options).map_err(|e| Failure::Verification(e.to_string()))?;
    print!("{}", classify::render_table1_markdown(&report));
    if report.passed() {
        Ok(())
    } else {
        Err(Failure::Verification("geometry identifications failed".into()))
    }
}

fn houlis(args: HoulisArgs) -> Result<(), Failure> {
    for params in valid_params(args.p, args.q).map_err(usage)? {
        let (d2, d1, d) = params.triple();
        let (c2, c1, c) = reparametrize(params).map_err(|e| Failure::Verification(e.to_string()))?.triple();
        println!(
            "d2={d2} d1={d1} d={d} valency={} swapped={c2},{c1},{c}",
            params.predicted_valency()
        );
    }
    Ok(())
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    let result = match cli.command {
        Command::Construct(a) => construct(a),
        Command::Aut(a) => aut(a),
        Command::Classify(a) => classify_cmd(a),
        Command::VerifyTable1(a) => verify_table1(a),
        Command::Houlis(a) => houlis(a),
    };
    match result {
        Ok(()) => ExitCode::SUCCESS,
        Err(Failure::Usage(msg)) => {
            eprintln!("error: {msg}");
            ExitCode::from(2)
        }
        Err(Failure::Verification(msg)) => {
            eprintln!("verification failed: {msg}");
            ExitCode::from(1)
        }
    }
}
