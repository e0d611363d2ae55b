use std::path::Path;
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand};

use algebra::Field;
use covercheck::derivation::{fix_basis, p_closed, Derivation, PClosed};
use covercheck::expr::parse_expr;
use covercheck::geometry::singular_points;
use covercheck::input::{parse_input, ExampleSpec};
use covercheck::liealg::{build_structure, classify_type, format_cubic, p_closed_cubic, p_closed_lines, AdditiveLocus, LineCensus};
use covercheck::pipeline::{run_example, verify_all, Options, SuiteReport, SCHEMA};
use covercheck::registry::builtin;
use covercheck::report::{emit_report, Format};
use covercheck::singclass::{classify_jet, classify_point, format_multiset, image_type, lift_to_cover, std_ring, tjurina, NeedPrecision, SingClass, MAX_ORDER, START_ORDER};

#[derive(Parser)]
#[command(name = "covercheck", version, about = "Verify purely inseparable double covers of surfaces in characteristic 2")]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Args, Clone)]
struct RunArgs {
    #[arg(long, default_value = "text")]
    format: Format,
    #[arg(long, default_value_t = 0)]
    seed: u64,
    #[arg(long, default_value_t = 4)]
    max_ext_degree: u32,
    /// Print wall-clock timings (text format only).
    #[arg(long)]
    timings: bool,
}

#[derive(Subcommand)]
enum Command {
    /// Run every check on every builtin example.
    VerifyAll(RunArgs),
    /// Run every check on one example file or builtin.
    Verify {
        target: String,
        #[command(flatten)]
        run: RunArgs,
    },
    /// List singular points with their classes, images and lifts.
    Sing {
        target: String,
        #[arg(long, default_value_t = 4)]
        max_ext_degree: u32,
    },
    /// Restricted Lie structure of the declared basis.
    Lie {
        target: String,
        #[arg(long, default_value_t = 0)]
        seed: u64,
    },
    /// Fixed locus of e1*D1 + e2*D2.
    Fix {
        target: String,
        /// Two field elements, e.g. `1,w`.
        #[arg(long)]
        coeffs: String,
    },
    /// Classify a double point given by a jet in x, y, z.
    ClassifyJet { file: String },
}

/// Exit code 2.
struct InputFailure(String);

fn load(target: &str) -> Result<ExampleSpec, InputFailure> {
    let path = Path::new(target);
    if path.exists() {
        let text = std::fs::read_to_string(path).map_err(|e| InputFailure(format!("{target}: {e}")))?;
        let name = path.file_stem().and_then(|s| s.to_str()).unwrap_or(target);
        return parse_input(name, &text).map_err(|e| InputFailure(format!("{target}: {e}")));
    }
    match builtin(target) {
        Some(r) => r.map_err(|e| InputFailure(format!("builtin {target}: {e}"))),
        None => Err(InputFailure(format!("{target}: no such file or builtin example"))),
    }
}

fn print_suite(report: &SuiteReport, run: &RunArgs) -> ExitCode {
    print!("{}", emit_report(report, run.format, run.timings));
    if report.passed == report.total {
        ExitCode::SUCCESS
    } else {
        ExitCode::from(1)
    }
}

fn sing(spec: &ExampleSpec, max_ext: u32) -> Result<ExitCode, InputFailure> {
    let ps = singular_points(&spec.atlas, max_ext).map_err(|e| InputFailure(e.to_string()))?;
    println!("{}: {} singular points over {}", spec.name, ps.points.len(), ps.field());
    let mut cover = Vec::new();
    let mut lifted = Vec::new();
    let mut ok = true;
    for p in &ps.points {
        let c = classify_point(&ps.atlas, p).map_err(|e| InputFailure(e.to_string()))?;
        let image = image_type(&c.class).map(|i| i.to_string()).unwrap_or_else(|e| e);
        let lift = format_multiset(&lift_to_cover(&c.class));
        println!("  {}  {}  (jet order {})  image {image}  lift {lift}", p.describe(&ps.atlas), c.class, c.jet_order);
        ok &= c.class.is_rdp() || c.class == SingClass::E12;
        lifted.extend(lift_to_cover(&c.class));
        cover.push(c.class);
    }
    cover.sort();
    lifted.sort();
    println!("Sing = {}", format_multiset(&cover));
    println!("lifted = {}", format_multiset(&lifted));
    Ok(if ok { ExitCode::SUCCESS } else { ExitCode::from(1) })
}

fn lie(spec: &ExampleSpec, seed: u64) -> ExitCode {
    let (d1, d2) = (&spec.derivations[spec.basis.0], &spec.derivations[spec.basis.1]);
    let s = match build_structure(&spec.atlas, d1, d2, seed) {
        Ok(s) => s,
        Err(e) => {
            println!("{}: {e}", spec.name);
            return ExitCode::from(1);
        }
    };
    let f = &s.field;
    let show = |c: (u64, u64)| format!("({}, {})", f.format_value(c.0), f.format_value(c.1));
    println!("basis {}, {}", d1.name, d2.name);
    println!("[D1, D2] = {}", show(s.bracket));
    println!("D1^[2]   = {}", show(s.s1));
    println!("D2^[2]   = {}", show(s.s2));
    println!("p-closed cubic: {}", format_cubic(&p_closed_cubic(&s), f));
    match p_closed_lines(&s) {
        LineCensus::AllPClosed(AdditiveLocus::Everything) => println!("lines: all p-closed, all additive"),
        LineCensus::AllPClosed(AdditiveLocus::Line(l)) => println!("lines: all p-closed, additive line {}", show(l)),
        LineCensus::Finite(ls) => {
            for l in ls {
                println!("line {l}");
            }
        }
    }
    match classify_type(&s) {
        Ok(t) => {
            println!("type {t}");
            ExitCode::SUCCESS
        }
        Err(e) => {
            println!("{e}");
            ExitCode::from(1)
        }
    }
}

fn fix(spec: &ExampleSpec, coeffs: &str) -> Result<ExitCode, InputFailure> {
    let field = spec.atlas.field.compositum(&Field::canonical(2));
    let parts: Vec<&str> = coeffs.split(',').collect();
    if parts.len() != 2 {
        return Err(InputFailure("--coeffs expects two comma-separated values".into()));
    }
    let mut e = [0u64; 2];
    for (i, p) in parts.iter().enumerate() {
        let ex = parse_expr(p.trim()).map_err(|err| InputFailure(format!("--coeffs: {err}")))?;
        e[i] = ex.value(&field, 0, 0).ok_or_else(|| InputFailure(format!("--coeffs: `{p}` is not a constant")))?;
    }
    let atlas = spec.atlas.map_field(&field).map_err(|err| InputFailure(err.to_string()))?;
    let d1 = spec.derivations[spec.basis.0].map_field(&atlas).map_err(|err| InputFailure(err.to_string()))?;
    let d2 = spec.derivations[spec.basis.1].map_field(&atlas).map_err(|err| InputFailure(err.to_string()))?;
    let d = Derivation::combine(e[0], &d1, e[1], &d2);
    println!("D = {}*{} + {}*{} over {field}", field.format_value(e[0]), d1.name, field.format_value(e[1]), d2.name);
    for c in 0..atlas.charts.len() {
        let gb = fix_basis(&atlas, &d, c);
        let gens: Vec<String> = gb.generators().iter().map(|g| g.to_string()).collect();
        println!("  chart {}: ({})", atlas.charts[c].name, gens.join(", "));
    }
    let free = d.is_fixed_point_free(&atlas);
    println!("fixed-point-free: {}", if free { "yes" } else { "no" });
    match p_closed(&atlas, &d1, &d2, (e[0], e[1])) {
        Ok(PClosed::Lambda(l)) => println!("D^2 = {} D", field.format_value(l)),
        Ok(PClosed::NotPClosed) => println!("not p-closed"),
        Ok(PClosed::Degenerate) => println!("zero derivation"),
        Err(err) => println!("{err}"),
    }
    Ok(ExitCode::SUCCESS)
}

/// Optional `field` and `order` lines, then the polynomial.
fn classify_jet_file(path: &str) -> Result<ExitCode, InputFailure> {
    let text = std::fs::read_to_string(path).map_err(|e| InputFailure(format!("{path}: {e}")))?;
    let mut field = Field::gf2();
    let mut order: Option<i64> = None;
    let mut body = String::new();
    for (i, raw) in text.lines().enumerate() {
        let line = raw.split('#').next().unwrap_or("").trim();
        if let Some(m) = line.strip_prefix("field ") {
            let m = m.trim();
            field = if m == "gf2" {
                Field::gf2()
            } else {
                let r = algebra::Ring::with_vars(&Field::gf2(), &["w"], &[] as &[&str]).expect("one variable");
                let p = r.parse(m).map_err(|e| InputFailure(format!("line {}: {e}", i + 1)))?;
                let bits = p.terms().iter().fold(0u64, |acc, (mono, _)| acc | 1 << mono.exps()[0]);
                Field::from_modulus(bits).map_err(|e| InputFailure(format!("line {}: {e}", i + 1)))?
            };
        } else if let Some(n) = line.strip_prefix("order ") {
            order = Some(n.trim().parse().map_err(|_| InputFailure(format!("line {}: bad order", i + 1)))?);
        } else if !line.is_empty() {
            body.push_str(line);
            body.push(' ');
        }
    }
    let ring = std_ring(&field);
    let f = ring.parse(body.trim()).map_err(|e| InputFailure(format!("{path}: {e}")))?;
    println!("f = {f}");
    // a polynomial is exact in every degree, so only a declared order limits it
    let mut n = order.unwrap_or(START_ORDER);
    let class = loop {
        match classify_jet(&f, n) {
            Ok(c) => break Some(c),
            Err(NeedPrecision) if order.is_none() && n < MAX_ORDER => n *= 2,
            Err(NeedPrecision) => break None,
        }
    };
    match tjurina(&f, n) {
        Some(t) => println!("tau = {t}"),
        None => println!("tau: not reached by order {n}"),
    }
    match class {
        Some(c) => {
            println!("class {c}");
            Ok(if c.is_rdp() || c == SingClass::E12 { ExitCode::SUCCESS } else { ExitCode::from(1) })
        }
        None => {
            println!("class undetermined at order {n}");
            Ok(ExitCode::from(1))
        }
    }
}

fn run(cli: Cli) -> Result<ExitCode, InputFailure> {
    match cli.command {
        Command::VerifyAll(run) => {
            let opts = Options { seed: run.seed, max_ext_degree: run.max_ext_degree };
            Ok(print_suite(&verify_all(&opts), &run))
        }
        Command::Verify { target, run } => {
            let spec = load(&target)?;
            let opts = Options { seed: run.seed, max_ext_degree: run.max_ext_degree };
            let e = run_example(&spec, &opts);
            let report = SuiteReport {
                schema: SCHEMA,
                seed: opts.seed,
                max_ext_degree: opts.max_ext_degree,
                passed: usize::from(e.passed),
                total: 1,
                elapsed: e.elapsed,
                examples: vec![e],
            };
            Ok(print_suite(&report, &run))
        }
        Command::Sing { target, max_ext_degree } => sing(&load(&target)?, max_ext_degree),
        Command::Lie { target, seed } => Ok(lie(&load(&target)?, seed)),
        Command::Fix { target, coeffs } => fix(&load(&target)?, &coeffs),
        Command::ClassifyJet { file } => classify_jet_file(&file),
    }
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    match std::panic::catch_unwind(|| run(cli)) {
        Ok(Ok(code)) => code,
        Ok(Err(InputFailure(msg))) => {
            eprintln!("error: {msg}");
            ExitCode::from(2)
        }
        Err(_) => ExitCode::from(3),
    }
}
