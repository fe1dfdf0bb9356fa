use std::fmt::Write as _;
use std::path::{Path, PathBuf};
use std::process::ExitCode;
use std::time::Instant;

use clap::{Args, Parser, Subcommand, ValueEnum};

use besfix::closed_form::{smaller_form, Form};
use besfix::emit::{to_cnf, to_dot, to_let_text, to_sexpr_with_limit, write_dimacs, DEFAULT_SEXPR_LIMIT};
use besfix::gen::{gen_family, Family, FamilySpec, RandomBounds};
use besfix::verify::{verify_random, verify_systems, Suite, VerifyReport};
use besfix::{
    dag_stats, dualize, greatest_fixpoint, kleene_lfp, parse_bes, print_bes, DagStats, ParamAssignment, ParseErrorKind,
    System, TermDag,
};

#[derive(Parser)]
#[command(
    name = "bes",
    version,
    about = "Least fixpoints of monotone boolean equation systems"
)]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Print the least (or greatest) fixpoint and the iteration depth
    Solve(SolveArgs),
    /// Build a closed form and write it out
    Build(BuildArgs),
    /// Compare the sizes of the pruned and expanded forms
    Stats(StatsArgs),
    /// Check the closed forms against Kleene iteration, with supporting properties
    Verify(VerifyArgs),
    /// Write a benchmark family instance
    Gen(GenArgs),
    /// Sizes and build times over a range of n
    Bench(BenchArgs),
}

#[derive(Args)]
struct SolveArgs {
    file: PathBuf,
    #[arg(long)]
    gfp: bool,
    /// Parameter values, e.g. `p=1,q=0`. Every parameter must be given.
    #[arg(long, value_delimiter = ',', value_parser = parse_binding)]
    params: Vec<(String, bool)>,
}

#[derive(Clone, Copy, ValueEnum)]
enum FormArg {
    Pruned,
    Expanded,
}

impl From<FormArg> for Form {
    fn from(f: FormArg) -> Form {
        match f {
            FormArg::Pruned => Form::Pruned,
            FormArg::Expanded => Form::Expanded,
        }
    }
}

#[derive(Clone, Copy, PartialEq, Eq, ValueEnum)]
enum EmitArg {
    Let,
    Sexpr,
    Dot,
    Dimacs,
}

#[derive(Args)]
struct BuildArgs {
    file: PathBuf,
    #[arg(long, value_enum)]
    form: FormArg,
    /// Layers of the expanded form (default n)
    #[arg(long)]
    depth: Option<usize>,
    #[arg(long, value_enum)]
    emit: EmitArg,
    /// Root to constrain in the CNF, e.g. `x=1`
    #[arg(long, value_parser = parse_binding, required_if_eq("emit", "dimacs"))]
    query: Option<(String, bool)>,
    /// Closed form of the greatest fixpoint instead
    #[arg(long)]
    gfp: bool,
    /// Refuse s-expressions whose unshared tree is larger than this
    #[arg(long, default_value_t = DEFAULT_SEXPR_LIMIT)]
    sexpr_limit: u64,
    #[arg(short, long)]
    output: Option<PathBuf>,
}

#[derive(Args)]
struct StatsArgs {
    file: PathBuf,
    #[arg(long)]
    csv: bool,
}

#[derive(Args)]
struct VerifyArgs {
    #[arg(required_unless_present = "random", conflicts_with = "random")]
    file: Option<PathBuf>,
    /// Check seeded random systems instead of a file
    #[arg(long)]
    random: bool,
    #[arg(long, default_value_t = 100)]
    trials: u64,
    #[arg(long, default_value_t = 0)]
    seed: u64,
    #[arg(long, default_value_t = 6)]
    max_n: usize,
    #[arg(long, default_value_t = 4)]
    max_params: usize,
    #[arg(long, default_value_t = 4)]
    max_depth: usize,
    /// Write each counterexample as a replayable BES file here
    #[arg(long)]
    dump_dir: Option<PathBuf>,
}

#[derive(Clone, Copy, PartialEq, Eq, ValueEnum)]
enum FamilyArg {
    Chain,
    Complete,
    Sparse3,
    Random,
}

impl From<FamilyArg> for Family {
    fn from(f: FamilyArg) -> Family {
        match f {
            FamilyArg::Chain => Family::Chain,
            FamilyArg::Complete => Family::Complete,
            FamilyArg::Sparse3 => Family::Sparse3,
            FamilyArg::Random => Family::Random,
        }
    }
}

#[derive(Args)]
struct GenArgs {
    #[arg(value_enum)]
    family: FamilyArg,
    /// Number of equations (fixed at 3 for sparse3)
    #[arg(long)]
    n: Option<usize>,
    #[arg(long, default_value_t = 0)]
    seed: u64,
    /// Support density of the random family
    #[arg(long, default_value_t = 0.3)]
    density: f64,
    #[arg(short, long)]
    output: Option<PathBuf>,
}

#[derive(Args)]
struct BenchArgs {
    #[arg(long, value_enum)]
    family: FamilyArg,
    #[arg(long, value_delimiter = ',', required = true)]
    n_list: Vec<usize>,
    #[arg(long, default_value_t = 0)]
    seed: u64,
    #[arg(long, default_value_t = 0.3)]
    density: f64,
    #[arg(long)]
    csv: bool,
    /// Leave out build times, making the output deterministic
    #[arg(long)]
    no_times: bool,
    #[arg(short, long)]
    output: Option<PathBuf>,
}

enum Failure {
    Verify(String),
    Parse(String),
    Semantic(String),
    Io(String),
}

impl Failure {
    fn exit_code(&self) -> u8 {
        match self {
            Failure::Verify(_) => 1,
            Failure::Parse(_) => 2,
            Failure::Semantic(_) => 3,
            Failure::Io(_) => 4,
        }
    }

    fn message(&self) -> &str {
        match self {
            Failure::Verify(m) | Failure::Parse(m) | Failure::Semantic(m) | Failure::Io(m) => m,
        }
    }
}

type Outcome = Result<(), Failure>;

fn parse_binding(s: &str) -> Result<(String, bool), String> {
    let (name, bit) = s
        .split_once('=')
        .ok_or_else(|| format!("expected name=bit, got `{s}`"))?;
    let bit = match bit.trim() {
        "0" => false,
        "1" => true,
        other => return Err(format!("bit must be 0 or 1, got `{other}`")),
    };
    Ok((name.trim().to_owned(), bit))
}

fn read_system(path: &Path) -> Result<System, Failure> {
    let text =
        std::fs::read_to_string(path).map_err(|e| Failure::Io(format!("cannot read {}: {e}", path.display())))?;
    parse_bes(&text).map_err(|e| {
        let msg = format!("{}:{e}", path.display());
        match e.kind {
            ParseErrorKind::Syntax => Failure::Parse(msg),
            ParseErrorKind::Semantic => Failure::Semantic(msg),
        }
    })
}

fn write_output(path: Option<&Path>, text: &str) -> Outcome {
    match path {
        Some(p) => std::fs::write(p, text).map_err(|e| Failure::Io(format!("cannot write {}: {e}", p.display()))),
        None => {
            print!("{text}");
            Ok(())
        }
    }
}

fn assign_params(sys: &System, bindings: &[(String, bool)]) -> Result<ParamAssignment, Failure> {
    let mut bits: Vec<Option<bool>> = vec![None; sys.param_count()];
    for (name, bit) in bindings {
        let id = sys
            .param_id(name)
            .ok_or_else(|| Failure::Semantic(format!("unknown parameter `{name}`")))?;
        if bits[id.0].replace(*bit).is_some() {
            return Err(Failure::Semantic(format!("parameter `{name}` assigned twice")));
        }
    }
    let missing: Vec<&str> = sys
        .param_names()
        .iter()
        .zip(&bits)
        .filter(|(_, b)| b.is_none())
        .map(|(n, _)| n.as_str())
        .collect();
    if !missing.is_empty() {
        return Err(Failure::Semantic(format!(
            "unassigned parameters: {} (use --params name=bit,...)",
            missing.join(", ")
        )));
    }
    Ok(ParamAssignment(bits.into_iter().map(|b| b.unwrap_or(false)).collect()))
}

fn solve(args: &SolveArgs) -> Outcome {
    let sys = read_system(&args.file)?;
    let p = assign_params(&sys, &args.params)?;
    let fp = if args.gfp {
        greatest_fixpoint(&sys, &p)
    } else {
        kleene_lfp(&sys, &p)
    }
    .map_err(|e| Failure::Semantic(e.to_string()))?;
    let mut out = format!("{}\nK={}\n", fp.value, fp.depth);
    for (name, bit) in sys.var_names().iter().zip(fp.value.bits()) {
        let _ = writeln!(out, "{name} = {}", u8::from(*bit));
    }
    write_output(None, &out)
}

/// The closed form of the greatest fixpoint is the lfp form of the dual
/// system with its leaves swapped, read with the original functions.
fn closed_form(sys: &System, form: Form, depth: Option<usize>, gfp: bool) -> TermDag {
    if gfp {
        form.build(&dualize(sys), depth).swap_leaves()
    } else {
        form.build(sys, depth)
    }
}

fn build(args: &BuildArgs) -> Outcome {
    let sys = read_system(&args.file)?;
    let form = Form::from(args.form);
    if args.depth.is_some() && form == Form::Pruned {
        return Err(Failure::Parse("--depth only applies to --form expanded".into()));
    }
    let dag = closed_form(&sys, form, args.depth, args.gfp);
    let text = match args.emit {
        EmitArg::Let => to_let_text(&dag, &sys),
        EmitArg::Sexpr => {
            to_sexpr_with_limit(&dag, &sys, args.sexpr_limit).map_err(|e| Failure::Semantic(e.to_string()))? + "\n"
        }
        EmitArg::Dot => to_dot(&dag, &sys),
        EmitArg::Dimacs => {
            let (name, bit) = args.query.clone().expect("clap requires --query with dimacs");
            let var = sys
                .var_id(&name)
                .ok_or_else(|| Failure::Semantic(format!("unknown query variable `{name}`")))?;
            let cnf = to_cnf(&dag, &sys, (var, bit)).map_err(|e| Failure::Semantic(e.to_string()))?;
            write_dimacs(&cnf)
        }
    };
    write_output(args.output.as_deref(), &text)
}

fn stats_table(rows: &[(&str, &DagStats)]) -> String {
    let header = ["form", "apply_count", "edge_count", "dag_depth", "tree_size"];
    let cells: Vec<[String; 5]> = rows
        .iter()
        .map(|(form, s)| {
            [
                form.to_string(),
                s.apply_count.to_string(),
                s.edge_count.to_string(),
                s.dag_depth.to_string(),
                s.tree_size.to_string(),
            ]
        })
        .collect();
    let width = |k: usize| {
        cells
            .iter()
            .map(|r| r[k].len())
            .chain([header[k].len()])
            .max()
            .unwrap_or(0)
    };
    let widths: Vec<usize> = (0..5).map(width).collect();
    let mut out = String::new();
    let mut line = |row: &[String]| {
        let mut s = format!("{:<w$}", row[0], w = widths[0]);
        for k in 1..5 {
            let _ = write!(s, "  {:>w$}", row[k], w = widths[k]);
        }
        out.push_str(s.trim_end());
        out.push('\n');
    };
    line(&header.map(String::from));
    for r in &cells {
        line(r);
    }
    out
}

fn stats(args: &StatsArgs) -> Outcome {
    let sys = read_system(&args.file)?;
    let pruned = dag_stats(&Form::Pruned.build(&sys, None));
    let expanded = dag_stats(&Form::Expanded.build(&sys, None));
    let out = if args.csv {
        let mut out = String::from("form,apply_count,edge_count,dag_depth,tree_size\n");
        for (form, s) in [("pruned", &pruned), ("expanded", &expanded)] {
            let _ = writeln!(
                out,
                "{form},{},{},{},{}",
                s.apply_count, s.edge_count, s.dag_depth, s.tree_size
            );
        }
        out
    } else {
        let mut out = stats_table(&[("pruned", &pruned), ("expanded", &expanded)]);
        let _ = writeln!(out, "smaller form: {}", smaller_form(&pruned, &expanded).name());
        out
    };
    write_output(None, &out)
}

fn report_failures(report: &VerifyReport, dump_dir: Option<&Path>) -> Outcome {
    if report.all_passed() {
        return Ok(());
    }
    if let Some(dir) = dump_dir {
        std::fs::create_dir_all(dir).map_err(|e| Failure::Io(format!("cannot create {}: {e}", dir.display())))?;
    }
    for v in report.failures() {
        eprintln!("{v}");
        match dump_dir {
            Some(dir) => {
                let path = dir.join(format!("{}.bes", v.suite));
                std::fs::write(&path, v.to_bes())
                    .map_err(|e| Failure::Io(format!("cannot write {}: {e}", path.display())))?;
                eprintln!("  counterexample written to {}", path.display());
            }
            None => eprint!("{}", v.to_bes()),
        }
    }
    let failed: Vec<&str> = report
        .tallies
        .iter()
        .filter(|t| t.failed > 0)
        .map(|t| t.suite.name())
        .collect();
    Err(Failure::Verify(format!("failing suites: {}", failed.join(", "))))
}

fn verify(args: &VerifyArgs) -> Outcome {
    let report = match &args.file {
        Some(path) => {
            let sys = read_system(path)?;
            let report = verify_systems(std::slice::from_ref(&sys), &Suite::ALL, args.seed);
            println!(
                "{}: {} equations, {} parameters",
                path.display(),
                sys.len(),
                sys.param_count()
            );
            report
        }
        None => {
            if args.max_n == 0 || args.max_depth == 0 {
                return Err(Failure::Parse("--max-n and --max-depth must be positive".into()));
            }
            let bounds = RandomBounds {
                max_n: args.max_n,
                max_params: args.max_params,
                max_depth: args.max_depth,
            };
            println!(
                "{} random systems, seed {}, n <= {}, {} params, depth <= {}",
                args.trials, args.seed, args.max_n, args.max_params, args.max_depth
            );
            verify_random(args.seed, args.trials, bounds, &Suite::ALL)
        }
    };
    print!("{report}");
    report_failures(&report, args.dump_dir.as_deref())
}

fn family_spec(family: FamilyArg, n: Option<usize>, seed: u64, density: f64) -> Result<FamilySpec, Failure> {
    let n = match (family, n) {
        (FamilyArg::Sparse3, n) => n.unwrap_or(3),
        (_, Some(n)) => n,
        (_, None) => return Err(Failure::Parse("--n is required for this family".into())),
    };
    Ok(FamilySpec {
        family: family.into(),
        n,
        seed,
        density,
    })
}

fn gen(args: &GenArgs) -> Outcome {
    let spec = family_spec(args.family, args.n, args.seed, args.density)?;
    let sys = gen_family(&spec).map_err(|e| Failure::Parse(e.to_string()))?;
    write_output(args.output.as_deref(), &print_bes(&sys))
}

fn bench(args: &BenchArgs) -> Outcome {
    let mut rows = Vec::new();
    for &n in &args.n_list {
        let spec = family_spec(args.family, Some(n), args.seed, args.density)?;
        let sys = gen_family(&spec).map_err(|e| Failure::Parse(e.to_string()))?;
        let mut row = vec![spec.family.name().to_string(), n.to_string()];
        for form in [Form::Pruned, Form::Expanded] {
            let start = Instant::now();
            let dag = form.build(&sys, None);
            let ms = start.elapsed().as_secs_f64() * 1e3;
            let s = dag_stats(&dag);
            row.extend([
                s.apply_count.to_string(),
                s.edge_count.to_string(),
                s.dag_depth.to_string(),
                s.tree_size.to_string(),
            ]);
            if !args.no_times {
                row.push(format!("{ms:.3}"));
            }
        }
        rows.push(row);
    }
    let mut header = vec!["family".to_string(), "n".to_string()];
    for form in ["pruned", "expanded"] {
        let cols: &[&str] = if args.no_times {
            &["apply", "edges", "depth", "tree"]
        } else {
            &["apply", "edges", "depth", "tree", "ms"]
        };
        header.extend(cols.iter().map(|c| format!("{form}_{c}")));
    }
    let mut out = String::new();
    if args.csv {
        out.push_str(&header.join(","));
        out.push('\n');
        for r in &rows {
            out.push_str(&r.join(","));
            out.push('\n');
        }
    } else {
        let widths: Vec<usize> = (0..header.len())
            .map(|k| {
                rows.iter()
                    .map(|r| r[k].len())
                    .chain([header[k].len()])
                    .max()
                    .unwrap_or(0)
            })
            .collect();
        for r in std::iter::once(&header).chain(&rows) {
            let parts: Vec<String> = r.iter().zip(&widths).map(|(c, w)| format!("{c:>w$}")).collect();
            out.push_str(&parts.join("  "));
            out.push('\n');
        }
    }
    write_output(args.output.as_deref(), &out)
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    let outcome = match &cli.command {
        Command::Solve(a) => solve(a),
        Command::Build(a) => build(a),
        Command::Stats(a) => stats(a),
        Command::Verify(a) => verify(a),
        Command::Gen(a) => gen(a),
        Command::Bench(a) => bench(a),
    };
    match outcome {
        Ok(()) => ExitCode::SUCCESS,
        Err(f) => {
            eprintln!("error: {}", f.message());
            ExitCode::from(f.exit_code())
        }
    }
}
