use std::collections::BTreeMap;
use std::io::Write;
use std::path::{Path, PathBuf};
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand};
use nearab::arith::as_prime_power;
use nearab::group::{construct, GroupSpec};
use nearab::lattice::{SubgroupLattice, LATTICE_CAP};
use nearab::lca::{classify_inductively_monothetic, is_pi_procyclic, prime_graph_of_lca, saut_decomposition, split_divisible_procyclic, LcaDescriptor};
use nearab::primegraph::{build_master_graph, unit_group_bruteforce, unit_group_structure};
use nearab::structure::{classify_tqh_p_group, find_base, find_scaling_subgroup, prime_graph_of_group};
use nearab::validate::{analyse_group, validate, CorpusConfig, Suite, ValidateConfig, ValidationReport};

#[derive(Parser)]
#[command(name = "nearab", version, about = "Prime master-graphs and near abelian finite groups")]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Prime master-graph and unit groups
    #[command(subcommand)]
    Graph(GraphCommand),
    /// Symbolic descriptors of periodic abelian groups
    #[command(subcommand)]
    Lca(LcaCommand),
    /// Finite groups from JSON specs
    #[command(subcommand)]
    Group(GroupCommand),
    /// Run validation suites over the generated corpus
    Validate(ValidateArgs),
}

#[derive(Subcommand)]
enum GraphCommand {
    Master {
        #[arg(long, default_value_t = 1000)]
        max_prime: u64,
        /// Write the graph as DOT
        #[arg(long)]
        dot: Option<PathBuf>,
        /// Write the graph as JSON
        #[arg(long)]
        out: Option<PathBuf>,
    },
    Units {
        q: u64,
        /// Also compare the truncation at level m with brute force
        #[arg(long)]
        level: Option<u32>,
    },
}

#[derive(Subcommand)]
enum LcaCommand {
    Classify { file: PathBuf },
    Saut {
        file: PathBuf,
        #[arg(long, default_value_t = 1000)]
        max_prime: u64,
        /// Write the prime graph of the descriptor as DOT
        #[arg(long)]
        dot: Option<PathBuf>,
    },
}

#[derive(Subcommand)]
enum GroupCommand {
    Build {
        spec: PathBuf,
        /// Write the Cayley table as JSON
        #[arg(long)]
        out: Option<PathBuf>,
        /// Write the subgroup lattice as DOT
        #[arg(long)]
        lattice_dot: Option<PathBuf>,
        /// Write the subgroup lattice as JSON
        #[arg(long)]
        lattice_json: Option<PathBuf>,
        #[arg(long, default_value_t = LATTICE_CAP)]
        lattice_cap: usize,
    },
    Analyze {
        spec: PathBuf,
        #[arg(long, default_value = "all")]
        suite: String,
        #[arg(long, default_value_t = LATTICE_CAP)]
        lattice_cap: usize,
        #[arg(long)]
        report: Option<PathBuf>,
    },
}

#[derive(Args)]
struct ValidateArgs {
    /// Comma separated suite names, or `all`
    #[arg(long, default_value = "all")]
    suite: String,
    #[arg(long, default_value_t = 64)]
    max_order: u64,
    /// Larger order bounds for p-groups as `p:n` pairs; empty for none
    #[arg(long, default_value = "2:81,3:81,5:125")]
    p_group_orders: String,
    #[arg(long, default_value_t = LATTICE_CAP)]
    lattice_cap: usize,
    #[arg(long)]
    report: Option<PathBuf>,
    /// Record per-group timings in the report
    #[arg(long)]
    timings: bool,
}

/// Failures split by exit code.
enum Failure {
    Input(String),
    Validation,
}

impl From<nearab::Error> for Failure {
    fn from(e: nearab::Error) -> Self {
        Failure::Input(e.to_string())
    }
}

type Outcome = Result<(), Failure>;

fn write_atomic(path: &Path, contents: &str) -> Outcome {
    let dir = match path.parent() {
        Some(d) if !d.as_os_str().is_empty() => d,
        _ => Path::new("."),
    };
    let io = |e: std::io::Error| Failure::Input(format!("{}: {e}", path.display()));
    let mut tmp = tempfile::NamedTempFile::new_in(dir).map_err(io)?;
    tmp.write_all(contents.as_bytes()).map_err(io)?;
    tmp.persist(path).map_err(|e| io(e.error))?;
    Ok(())
}

fn read(path: &Path) -> Result<String, Failure> {
    std::fs::read_to_string(path).map_err(|e| Failure::Input(format!("{}: {e}", path.display())))
}

fn located<T>(path: &Path, r: nearab::Result<T>) -> Result<T, Failure> {
    r.map_err(|e| Failure::Input(format!("{}: {e}", path.display())))
}

fn graph(cmd: GraphCommand) -> Outcome {
    match cmd {
        GraphCommand::Master { max_prime, dot, out } => {
            let g = build_master_graph(max_prime)?;
            println!(
                "master graph up to {max_prime}: {} primes, {} vertical edges, {} sloping edges",
                g.index().primes().len(),
                g.vertical_edges().count(),
                g.sloping_edges().count()
            );
            if let Some(p) = dot {
                write_atomic(&p, &g.to_dot())?;
            }
            if let Some(p) = out {
                write_atomic(&p, &g.to_json())?;
            }
        }
        GraphCommand::Units { q, level } => {
            let d = unit_group_structure(q)?;
            println!("{d}");
            if let Some(m) = level {
                if m == 0 {
                    return Err(Failure::Input("level must be at least 1".into()));
                }
                let truncated = if q == 2 {
                    if m < 3 {
                        return Err(Failure::Input("level must be at least 3 for q = 2".into()));
                    }
                    d.truncate_omega(2, m - 2)
                } else {
                    d.truncate_omega(q, m - 1)
                };
                let brute = unit_group_bruteforce(q, m)?;
                let verdict = if brute == truncated { "agrees" } else { "DIFFERS" };
                println!("units of Z({q}^{m}): formula {truncated}, brute force {brute} ({verdict})");
            }
        }
    }
    Ok(())
}

fn lca(cmd: LcaCommand) -> Outcome {
    match cmd {
        LcaCommand::Classify { file } => {
            let a = located(&file, LcaDescriptor::from_json(&read(&file)?))?;
            println!("descriptor {a}");
            match classify_inductively_monothetic(&a) {
                Ok(part) => {
                    let split = split_divisible_procyclic(&a)?;
                    println!("inductively monothetic: pi_A {:?} pi_B {:?} pi_C {:?} pi_D {:?}", part.pi_a, part.pi_b, part.pi_c, part.pi_d);
                    println!("divisible part {}, procyclic part {}", split.divisible, split.procyclic);
                }
                Err(e) => println!("not inductively monothetic: {e}"),
            }
            println!("pi-procyclic: {}", is_pi_procyclic(&a));
        }
        LcaCommand::Saut { file, max_prime, dot } => {
            let a = located(&file, LcaDescriptor::from_json(&read(&file)?))?;
            let s = saut_decomposition(&a)?;
            for (p, d) in &s.primaries {
                println!("SAut at {p}: {d}");
            }
            println!("SAut total: {}", s.total());
            for n in &s.notes {
                println!("note: {n}");
            }
            let g = prime_graph_of_lca(&a, max_prime)?;
            let edges: Vec<String> = g.edges().iter().map(|e| format!("{}->{}", e.p, e.q)).collect();
            println!("prime graph edges: {}", if edges.is_empty() { "none".to_string() } else { edges.join(" ") });
            if let Some(p) = dot {
                write_atomic(&p, &g.to_dot())?;
            }
        }
    }
    Ok(())
}

fn load_spec(path: &Path) -> Result<GroupSpec, Failure> {
    located(path, GroupSpec::from_json(&read(path)?))
}

fn summarise(report: &ValidationReport) {
    for (suite, s) in &report.by_suite {
        println!("{suite}: {s}");
    }
    println!("total over {} groups: {}", report.corpus_size, report.summary);
}

fn group(cmd: GroupCommand) -> Outcome {
    match cmd {
        GroupCommand::Build { spec, out, lattice_dot, lattice_json, lattice_cap } => {
            let s = load_spec(&spec)?;
            let g = located(&spec, construct(&s))?;
            println!(
                "{s}: order {}, abelian {}, cyclic {}, centre of order {}",
                g.order(),
                g.is_abelian(),
                g.is_cyclic(),
                g.center().order()
            );
            if let Some(p) = out {
                write_atomic(&p, &g.to_table_json())?;
            }
            if lattice_dot.is_some() || lattice_json.is_some() {
                let l = SubgroupLattice::enumerate_with_cap(&g, lattice_cap)?;
                println!("{} subgroups", l.len());
                if let Some(p) = lattice_dot {
                    write_atomic(&p, &l.to_dot())?;
                }
                if let Some(p) = lattice_json {
                    write_atomic(&p, &l.to_json())?;
                }
            }
        }
        GroupCommand::Analyze { spec, suite, lattice_cap, report } => {
            let s = load_spec(&spec)?;
            let suites: Vec<Suite> = Suite::parse_selection(&suite)?.into_iter().filter(|s| !s.is_global()).collect();
            let g = located(&spec, construct(&s))?;
            let l = SubgroupLattice::enumerate_with_cap(&g, lattice_cap)?;
            println!(
                "{s}: order {}, {} subgroups, quasihamiltonian {}, modular {}",
                g.order(),
                l.len(),
                l.is_quasihamiltonian().0,
                l.is_modular().0
            );
            if let Some((p, _)) = as_prime_power(g.order() as u64) {
                println!("p-group class: {}", classify_tqh_p_group(&l, p)?);
            }
            match find_base(&l) {
                None => println!("no abelian base with cyclic quotient"),
                Some(w) => {
                    println!("base of order {}, index {}, A-nontrivial {}", w.a.order(), w.quotient_order, w.nontrivial);
                    if let Some(h) = find_scaling_subgroup(&g, &w) {
                        let graph = prime_graph_of_group(&g, &w, &h);
                        let edges: Vec<String> = graph.edges.iter().map(|e| format!("{}->{}", e.p, e.q)).collect();
                        println!(
                            "scaling subgroup of order {}, prime graph edges: {}",
                            h.order(),
                            if edges.is_empty() { "none".to_string() } else { edges.join(" ") }
                        );
                    }
                }
            }
            let cfg = ValidateConfig { lattice_cap, ..Default::default() };
            let entries = analyse_group(&s, &suites, &cfg);
            let r = ValidationReport::from_entries(suite, 1, entries);
            summarise(&r);
            if let Some(p) = report {
                write_atomic(&p, &r.to_json())?;
            }
            if r.has_failures() {
                return Err(Failure::Validation);
            }
        }
    }
    Ok(())
}

fn parse_p_bounds(text: &str) -> Result<BTreeMap<u64, u64>, Failure> {
    let mut out = BTreeMap::new();
    for part in text.split(',').map(str::trim).filter(|s| !s.is_empty()) {
        let parsed = part.split_once(':').and_then(|(p, n)| Some((p.parse().ok()?, n.parse().ok()?)));
        let (p, n) = parsed.ok_or_else(|| Failure::Input(format!("bad p-group bound {part:?}, expected p:n")))?;
        out.insert(p, n);
    }
    Ok(out)
}

fn run_validate(args: ValidateArgs) -> Outcome {
    let suites = Suite::parse_selection(&args.suite)?;
    let cfg = ValidateConfig {
        corpus: CorpusConfig { max_order: args.max_order, p_group_orders: parse_p_bounds(&args.p_group_orders)? },
        lattice_cap: args.lattice_cap,
        timings: args.timings,
    };
    let report = validate(&suites, &cfg);
    summarise(&report);
    if let Some(p) = args.report {
        write_atomic(&p, &report.to_json())?;
    }
    if report.has_failures() {
        Err(Failure::Validation)
    } else {
        Ok(())
    }
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    let outcome = match cli.command {
        Command::Graph(c) => graph(c),
        Command::Lca(c) => lca(c),
        Command::Group(c) => group(c),
        Command::Validate(a) => run_validate(a),
    };
    match outcome {
        Ok(()) => ExitCode::SUCCESS,
        Err(Failure::Validation) => ExitCode::from(1),
        Err(Failure::Input(msg)) => {
            eprintln!("error: {msg}");
            ExitCode::from(2)
        }
    }
}
