use std::path::{Path, PathBuf};
use std::process::ExitCode;
use std::time::Instant;

use clap::{Args, Parser, Subcommand, ValueEnum};
use torsor_core::bar::{bar_differential, h0_kernel_basis, is_bar_cocycle, BarWord};
use torsor_core::cdga::parse_element;
use torsor_core::cubical::{fourfold_summands, rho, verify_bloch_totaro, verify_fourfold};
use torsor_core::emit::{self, Format};
use torsor_core::massey::{massey_representative, DefiningSystem, MasseyWord};
use torsor_core::minimal::{check_minimal, minimize, quotient_is_chain_map};
use torsor_core::path::assemble;
use torsor_core::CoreError;

#[derive(Parser)]
#[command(name = "torsor", version, about = "Cell and minimal models of the path torsor of P^1 - {0,1,inf}")]
struct Cli {
    /// Print timings and extra detail to stderr.
    #[arg(short, long, action = clap::ArgAction::Count, global = true)]
    verbose: u8,
    #[command(subcommand)]
    command: Command,
}

#[derive(Clone, Copy, ValueEnum)]
enum EmitArg {
    Json,
    Latex,
    Text,
}

impl From<EmitArg> for Format {
    fn from(e: EmitArg) -> Format {
        match e {
            EmitArg::Json => Format::Json,
            EmitArg::Latex => Format::Latex,
            EmitArg::Text => Format::Text,
        }
    }
}

#[derive(Args)]
struct Output {
    /// Directory for emitted files; without it artifacts go to stdout.
    #[arg(long, env = "TORSOR_OUT_DIR")]
    out_dir: Option<PathBuf>,
}

#[derive(Subcommand)]
enum Command {
    /// The path complex and its cell model.
    Complex {
        #[command(subcommand)]
        command: ComplexCommand,
    },
    /// Emit the minimal model matrix and check minimality.
    Minimal {
        #[arg(short, value_parser = clap::value_parser!(u32).range(1..))]
        n: u32,
        #[arg(long, value_enum, default_value = "text")]
        emit: EmitArg,
        #[command(flatten)]
        output: Output,
    },
    /// Massey products of Steinberg symbols.
    Massey {
        #[command(subcommand)]
        command: MasseyCommand,
    },
    /// Algebraic cycles in cubical notation.
    Cycles {
        #[command(subcommand)]
        command: CyclesCommand,
    },
    /// The reduced bar complex.
    Bar {
        #[command(subcommand)]
        command: BarCommand,
    },
}

#[derive(Subcommand)]
enum ComplexCommand {
    /// Assemble C, B and H and verify D_C^2 = 0, D_B^2 = 0, H D_C = D_B H.
    Build {
        #[arg(short, value_parser = clap::value_parser!(u32).range(1..))]
        n: u32,
        /// Format of the verification report.
        #[arg(long, value_enum, default_value = "json")]
        emit: EmitArg,
        #[command(flatten)]
        output: Output,
    },
}

#[derive(Subcommand)]
enum MasseyCommand {
    /// Representative of the Massey product through the canonical defining system.
    Repr {
        /// Letters separated by commas, e.g. `a,1-a,a`.
        #[arg(long)]
        word: String,
    },
}

#[derive(Subcommand)]
enum CyclesCommand {
    /// The cycle rho_n; `--check` verifies d rho_n = rho_(n-1) x [a].
    Rho {
        #[arg(short, value_parser = clap::value_parser!(u32).range(1..))]
        n: u32,
        #[arg(long)]
        check: bool,
    },
    /// The four-fold representative; `--check` verifies it is closed.
    Fourfold {
        #[arg(long)]
        check: bool,
    },
}

#[derive(Subcommand)]
enum BarCommand {
    /// Bar differential of a word `r1 | r2 | ...`.
    D {
        #[arg(long)]
        word: String,
        /// Fail unless the word is a cocycle.
        #[arg(long)]
        check: bool,
    },
    /// Degree-0 bar cohomology spanned by words in the given letters.
    H0 {
        /// Letters separated by `;`, e.g. `[a];[1-a];T{a,1-a}`.
        #[arg(long)]
        letters: String,
        #[arg(long, default_value_t = 2)]
        max_len: usize,
        #[arg(long)]
        weight: i32,
    },
}

enum Failure {
    Usage(String),
    Verification(String),
}

impl From<CoreError> for Failure {
    fn from(e: CoreError) -> Self {
        match e {
            CoreError::Parse(_) | CoreError::Heterogeneous | CoreError::Shape(_) => Failure::Usage(e.to_string()),
            _ => Failure::Verification(e.to_string()),
        }
    }
}

impl From<std::io::Error> for Failure {
    fn from(e: std::io::Error) -> Self {
        Failure::Usage(format!("cannot write output: {e}"))
    }
}

type Outcome = Result<bool, Failure>;

fn extension(f: Format) -> &'static str {
    match f {
        Format::Json => "json",
        Format::Latex => "tex",
        Format::Text => "txt",
    }
}

fn write_file(dir: &Path, name: &str, body: &str) -> Result<(), Failure> {
    std::fs::create_dir_all(dir)?;
    std::fs::write(dir.join(name), body)?;
    Ok(())
}

fn complex_build(n: usize, format: Format, output: &Output, verbose: u8) -> Outcome {
    let t = Instant::now();
    let asm = assemble(n);
    if verbose > 0 {
        eprintln!("assembled n={n}: {} cells, {:?}", asm.total.rank(), t.elapsed());
    }
    let report = emit::emit_residuals(&asm.report.residuals, format);
    if let Some(dir) = &output.out_dir {
        let (b, h) = emit::assembly_json(&asm);
        write_file(dir, &format!("complex-n{n}-C.json"), &emit::module_json(&asm.total))?;
        write_file(dir, &format!("complex-n{n}-B.json"), &b)?;
        write_file(dir, &format!("complex-n{n}-H.json"), &h)?;
        write_file(dir, &format!("complex-n{n}-report.{}", extension(format)), &report)?;
    }
    print!("{report}");
    Ok(asm.report.passed())
}

fn minimal(n: usize, format: Format, output: &Output, verbose: u8) -> Outcome {
    let t = Instant::now();
    let (m, asm) = minimize(n)?;
    let minimal = check_minimal(&m.module);
    let complex = m.module.is_complex();
    let chain = quotient_is_chain_map(&m, &asm);
    if verbose > 0 {
        eprintln!("minimal n={n}: rank {}, {:?}", m.module.rank(), t.elapsed());
    }
    let body = emit::emit_module(&m.module, format);
    match &output.out_dir {
        Some(dir) => write_file(dir, &format!("minimal-n{n}.{}", extension(format)), &body)?,
        None => print!("{body}"),
    }
    for (ok, what) in [(complex, "d^2 = 0"), (minimal, "minimal"), (chain, "quotient is a chain map")] {
        if !ok {
            eprintln!("check failed: {what}");
        }
    }
    Ok(minimal && complex && chain)
}

fn massey_repr(word: &str) -> Outcome {
    let w = MasseyWord::parse(word)?;
    let sys = DefiningSystem::canonical(&w)?;
    let rep = massey_representative(&w, &sys)?;
    let d = rep.differential();
    println!("<{w}> = {rep}");
    println!("d = {d}");
    Ok(d.is_zero())
}

fn cycles_rho(n: usize, check: bool) -> Outcome {
    println!("rho_{n} = {}", rho(n));
    if !check {
        return Ok(true);
    }
    if n < 2 {
        return Err(Failure::Usage("--check needs n >= 2".into()));
    }
    let r = verify_bloch_totaro(n)?;
    if r.passed() {
        let how = if r.raw_equal { "exactly" } else { "after alternation" };
        println!("pass: d rho_{n} = rho_{} x [a] holds {how}", n - 1);
    } else {
        println!("fail: d rho_{n} - rho_{} x [a] has alternating class", n - 1);
        for t in &r.alt_residual {
            println!("  {t}");
        }
    }
    Ok(r.passed())
}

fn cycles_fourfold(check: bool) -> Outcome {
    for z in fourfold_summands() {
        println!("{z}");
    }
    if !check {
        return Ok(true);
    }
    let r = verify_fourfold()?;
    if r.raw_closed {
        println!("pass: closed");
    } else if r.alt_closed {
        println!("pass: closed after alternation");
    } else {
        println!("fail: boundary is nonzero, raw and after alternation");
        println!("alternating class of the boundary:");
        for t in &r.alt_residual {
            println!("  {t}");
        }
    }
    Ok(r.passed())
}

fn bar_d(word: &str, check: bool) -> Outcome {
    let w = BarWord::parse(word)?;
    let d = bar_differential(&w);
    println!("{d}");
    Ok(!check || d.is_zero())
}

fn bar_h0(letters: &str, max_len: usize, weight: i32) -> Outcome {
    let letters = letters.split(';').map(parse_element).collect::<Result<Vec<_>, _>>()?;
    let basis = h0_kernel_basis(&letters, max_len, weight)?;
    for s in &basis {
        println!("{s}");
    }
    Ok(basis.iter().all(is_bar_cocycle))
}

fn run(cli: Cli) -> Outcome {
    let v = cli.verbose;
    match cli.command {
        Command::Complex { command: ComplexCommand::Build { n, emit, output } } => {
            complex_build(n as usize, emit.into(), &output, v)
        }
        Command::Minimal { n, emit, output } => minimal(n as usize, emit.into(), &output, v),
        Command::Massey { command: MasseyCommand::Repr { word } } => massey_repr(&word),
        Command::Cycles { command: CyclesCommand::Rho { n, check } } => cycles_rho(n as usize, check),
        Command::Cycles { command: CyclesCommand::Fourfold { check } } => cycles_fourfold(check),
        Command::Bar { command: BarCommand::D { word, check } } => bar_d(&word, check),
        Command::Bar { command: BarCommand::H0 { letters, max_len, weight } } => bar_h0(&letters, max_len, weight),
    }
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    match run(cli) {
        Ok(true) => ExitCode::SUCCESS,
        Ok(false) => ExitCode::from(1),
        Err(Failure::Verification(msg)) => {
            eprintln!("error: {msg}");
            ExitCode::from(1)
        }
        Err(Failure::Usage(msg)) => {
            eprintln!("error: {msg}");
            ExitCode::from(2)
        }
    }
}
