//! Command-line interface.
//!
//! Exit codes: 0 success, 1 usage, parse or model error, 2 empty supervisor,
//! 3 a check or oracle comparison that ran but failed.

use std::ffi::OsString;
use std::io::Write;
use std::path::PathBuf;

use clap::{Parser, Subcommand, ValueEnum};
use forcesynth_core::check::{check_language, check_supervisor, Property};
use forcesynth_core::oracle::{default_depth, oracle_compare_mode};
use forcesynth_core::synthesis::check_trace;
use forcesynth_core::{
    plantify, synthesize_with, Automaton, Mode, StringSample, SynthesisOptions,
    DEFAULT_DEPTH_CAP,
};

use crate::dot::to_dot;
use crate::model::{Kind, ModelFile};
use crate::session::{simulate, Driver, Session};

pub const EXIT_OK: i32 = 0;
pub const EXIT_ERROR: i32 = 1;
pub const EXIT_EMPTY: i32 = 2;
pub const EXIT_FAILED: i32 = 3;

#[derive(Debug, Parser)]
#[command(name = "forcesynth", version, about = "Forcibly-controllable supervisor synthesis")]
struct Cli {
    /// Longest string length any language enumeration may use.
    #[arg(long, global = true, env = "FORCESYNTH_DEPTH_CAP", default_value_t = DEFAULT_DEPTH_CAP)]
    depth_cap: usize,
    #[command(subcommand)]
    command: Command,
}

#[derive(Debug, Clone, Copy, ValueEnum)]
enum ModeArg {
    Fc,
    Classic,
    Forcible,
}

impl From<ModeArg> for Mode {
    fn from(m: ModeArg) -> Mode {
        match m {
            ModeArg::Fc => Mode::ForciblyControllable,
            ModeArg::Classic => Mode::Classic,
            ModeArg::Forcible => Mode::Forcible,
        }
    }
}

#[derive(Debug, Clone, Copy, ValueEnum)]
enum PropertyArg {
    Controllable,
    Fc,
    Forcible,
}

impl From<PropertyArg> for Property {
    fn from(p: PropertyArg) -> Property {
        match p {
            PropertyArg::Controllable => Property::Controllable,
            PropertyArg::Fc => Property::ForciblyControllable,
            PropertyArg::Forcible => Property::Forcible,
        }
    }
}

#[derive(Debug, clap::Args)]
struct PlantArgs {
    /// Model file with plants and specifications.
    model: PathBuf,
    /// Plantify specifications before composing them with the plants.
    #[arg(long)]
    spec_plantify: bool,
    /// Comma-separated events to make forcible, replacing the model's flags.
    #[arg(long, value_delimiter = ',', num_args = 0..)]
    forcible: Option<Vec<String>>,
}

impl PlantArgs {
    fn load(&self) -> Result<(ModelFile, Automaton), String> {
        let mut m = ModelFile::read(&self.model).map_err(|e| e.to_string())?;
        if let Some(f) = &self.forcible {
            m.set_forcible(f).map_err(|e| e.to_string())?;
        }
        let plant = m.composed_plant(self.spec_plantify).map_err(|e| e.to_string())?;
        Ok((m, plant))
    }
}

#[derive(Debug, Subcommand)]
enum Command {
    /// Synthesize the supervisor of the composed plant.
    Synth {
        #[command(flatten)]
        plant: PlantArgs,
        #[arg(long, value_enum, default_value_t = ModeArg::Fc)]
        mode: ModeArg,
        /// Print the sets of every iteration.
        #[arg(long)]
        trace: bool,
        /// Where to write the plant and supervisor model. Defaults to stdout.
        #[arg(long)]
        out: Option<PathBuf>,
    },
    /// Write the synchronous product of the model's plants and specifications.
    Product {
        #[command(flatten)]
        plant: PlantArgs,
        #[arg(long)]
        out: Option<PathBuf>,
    },
    /// Write a plantified specification.
    Plantify {
        model: PathBuf,
        /// Specification to plantify. Defaults to the first one.
        #[arg(long)]
        automaton: Option<String>,
        #[arg(long)]
        out: Option<PathBuf>,
    },
    /// Check a supervisor, or a list of strings, against the composed plant.
    Check {
        #[command(flatten)]
        plant: PlantArgs,
        /// Model file holding the supervisor. Defaults to the plant model.
        #[arg(long, conflicts_with = "words")]
        supervisor: Option<PathBuf>,
        /// File with one string per line, events separated by spaces.
        /// An empty line or `ε` is the empty string.
        #[arg(long)]
        words: Option<PathBuf>,
        #[arg(long, value_enum, default_value_t = PropertyArg::Fc)]
        property: PropertyArg,
    },
    /// Compare the synthesized supervisor with a brute-force enumeration.
    OracleCompare {
        #[command(flatten)]
        plant: PlantArgs,
        /// Bound on string length. Defaults to the number of plant states plus two.
        #[arg(long)]
        depth: Option<usize>,
        #[arg(long, value_enum, default_value_t = ModeArg::Fc)]
        mode: ModeArg,
    },
    /// Print an automaton of a model as Graphviz DOT.
    Dot {
        model: PathBuf,
        /// Automaton to draw. Defaults to the first supervisor, else the first automaton.
        #[arg(long)]
        automaton: Option<String>,
    },
    /// Run the closed loop along a trace or a seeded random walk.
    Simulate {
        #[command(flatten)]
        plant: PlantArgs,
        /// Model file holding the supervisor. Without one, the plant model's
        /// supervisor is used, or one is synthesized.
        #[arg(long)]
        supervisor: Option<PathBuf>,
        #[arg(long, value_enum, default_value_t = ModeArg::Fc)]
        mode: ModeArg,
        /// File of event names separated by whitespace.
        #[arg(long, conflicts_with = "random")]
        trace: Option<PathBuf>,
        /// Seed of a random walk.
        #[arg(long)]
        random: Option<u64>,
        #[arg(long, default_value_t = 20)]
        steps: usize,
    },
    /// Serve the JSON session API.
    Serve {
        #[arg(long, default_value_t = 8080)]
        port: u16,
    },
}

struct Io<'a> {
    out: &'a mut dyn Write,
    err: &'a mut dyn Write,
}

type CmdResult = Result<i32, String>;

/// Runs the CLI on `args` (including the program name) and returns the exit code.
pub fn run<I, T>(args: I, out: &mut dyn Write, err: &mut dyn Write) -> i32
where
    I: IntoIterator<Item = T>,
    T: Into<OsString> + Clone,
{
    let cli = match Cli::try_parse_from(args) {
        Ok(c) => c,
        Err(e) => {
            let code = if e.use_stderr() { EXIT_ERROR } else { EXIT_OK };
            let sink: &mut dyn Write = if e.use_stderr() { err } else { out };
            let _ = write!(sink, "{}", e.render());
            return code;
        }
    };
    let mut io = Io { out, err };
    match dispatch(cli, &mut io) {
        Ok(code) => code,
        Err(msg) => {
            let _ = writeln!(io.err, "error: {msg}");
            EXIT_ERROR
        }
    }
}

fn emit(io: &mut Io, out: Option<&PathBuf>, text: &str) -> Result<(), String> {
    match out {
        Some(p) => std::fs::write(p, text).map_err(|e| format!("{}: {e}", p.display())),
        None => io.out.write_all(text.as_bytes()).map_err(|e| e.to_string()),
    }
}

fn line(w: &mut dyn Write, s: impl AsRef<str>) -> Result<(), String> {
    writeln!(w, "{}", s.as_ref()).map_err(|e| e.to_string())
}

fn dispatch(cli: Cli, io: &mut Io) -> CmdResult {
    let cap = cli.depth_cap;
    match cli.command {
        Command::Synth {
            plant,
            mode,
            trace,
            out,
        } => synth(io, &plant, mode.into(), trace, out.as_ref()),
        Command::Product { plant, out } => {
            let (_, p) = plant.load()?;
            let m = ModelFile::from_automata(&[(Kind::Plant, &p, None)]);
            emit(io, out.as_ref(), &m.to_json())?;
            Ok(EXIT_OK)
        }
        Command::Plantify {
            model,
            automaton,
            out,
        } => {
            let m = ModelFile::read(&model).map_err(|e| e.to_string())?;
            let loaded = m.load().map_err(|e| e.to_string())?;
            let spec = loaded
                .iter()
                .find(|l| match &automaton {
                    Some(n) => l.automaton.name() == n,
                    None => l.kind == Kind::Specification,
                })
                .ok_or("no such specification")?;
            let p = plantify(&spec.automaton);
            let m = ModelFile::from_automata(&[(Kind::Plant, &p, None)]);
            emit(io, out.as_ref(), &m.to_json())?;
            Ok(EXIT_OK)
        }
        Command::Check {
            plant,
            supervisor,
            words,
            property,
        } => check(io, &plant, supervisor, words, property.into(), cap),
        Command::OracleCompare { plant, depth, mode } => {
            let (_, p) = plant.load()?;
            let depth = depth.unwrap_or_else(|| default_depth(&p));
            if depth > cap {
                return Err(format!(
                    "depth {depth} exceeds the cap {cap} (set FORCESYNTH_DEPTH_CAP to raise it)"
                ));
            }
            let mode: Mode = mode.into();
            let r = oracle_compare_mode(&p, depth, mode).map_err(|e| e.to_string())?;
            line(io.out, format!("mode: {mode}"))?;
            line(io.out, format!("depth: {depth}"))?;
            line(io.out, format!("algorithm: {} marked strings", r.algorithm.len()))?;
            line(io.out, format!("oracle: {} marked strings", r.oracle.len()))?;
            if r.holds {
                line(io.out, "PASS")?;
                Ok(EXIT_OK)
            } else {
                let a = p.alphabet();
                for w in r.algorithm.strings.symmetric_difference(&r.oracle.strings) {
                    let side = if r.oracle.strings.contains(w) { "oracle only" } else { "algorithm only" };
                    line(io.out, format!("  {side}: {}", forcesynth_core::language::format_word(a, w)))?;
                }
                line(io.out, "FAIL")?;
                Ok(EXIT_FAILED)
            }
        }
        Command::Dot { model, automaton } => {
            let m = ModelFile::read(&model).map_err(|e| e.to_string())?;
            let loaded = m.load().map_err(|e| e.to_string())?;
            let pick = match &automaton {
                Some(n) => loaded.iter().find(|l| l.automaton.name() == n),
                None => loaded
                    .iter()
                    .find(|l| l.kind == Kind::Supervisor)
                    .or(loaded.first()),
            }
            .ok_or("no such automaton")?;
            emit(io, None, &to_dot(&pick.automaton, pick.forcing.as_ref()))?;
            Ok(EXIT_OK)
        }
        Command::Simulate {
            plant,
            supervisor,
            mode,
            trace,
            random,
            steps,
        } => {
            let (m, p) = plant.load()?;
            let sup = match &supervisor {
                Some(path) => Some(
                    ModelFile::read(path)
                        .and_then(|s| s.supervisor())
                        .map_err(|e| e.to_string())?,
                ),
                None => m.supervisor().ok(),
            };
            let session = match sup {
                Some(l) => Session::new(p, l.automaton, l.forcing),
                None => Session::synthesized(p, mode.into()),
            };
            let mut session = match session {
                Err(forcesynth_core::Error::EmptySupervisor) => {
                    line(io.err, "supervisor is empty; nothing to simulate")?;
                    return Ok(EXIT_EMPTY);
                }
                s => s.map_err(|e| e.to_string())?,
            };
            let driver = match (trace, random) {
                (Some(path), _) => {
                    let text = std::fs::read_to_string(&path)
                        .map_err(|e| format!("{}: {e}", path.display()))?;
                    Driver::Trace(text.split_whitespace().map(String::from).collect())
                }
                (None, Some(seed)) => Driver::Random { seed, steps },
                (None, None) => return Err("one of --trace or --random is required".into()),
            };
            let t = simulate(&mut session, &driver);
            for l in &t.lines {
                line(io.out, l)?;
            }
            match t.rejected {
                None => Ok(EXIT_OK),
                Some(e) => {
                    line(io.out, format!("    rejected: {e}"))?;
                    Ok(EXIT_FAILED)
                }
            }
        }
        Command::Serve { port } => {
            let rt = tokio::runtime::Runtime::new().map_err(|e| e.to_string())?;
            line(io.err, format!("listening on http://127.0.0.1:{port}"))?;
            rt.block_on(crate::api::serve(port)).map_err(|e| e.to_string())?;
            Ok(EXIT_OK)
        }
    }
}

fn synth(io: &mut Io, args: &PlantArgs, mode: Mode, trace: bool, out: Option<&PathBuf>) -> CmdResult {
    let (_, plant) = args.load()?;
    let r = synthesize_with(
        &plant,
        SynthesisOptions {
            mode,
            record_trace: trace,
        },
    );
    // the summary goes to stderr when stdout carries the model
    let summary: &mut dyn Write = if out.is_some() { &mut *io.out } else { &mut *io.err };
    line(
        summary,
        format!(
            "plant: {} ({} states, {} transitions)",
            plant.name(),
            plant.num_states(),
            plant.num_transitions()
        ),
    )?;
    line(summary, format!("mode: {mode}"))?;
    line(summary, format!("iterations: {}", r.iterations))?;
    if trace {
        check_trace(&plant, &r).map_err(|v| v.to_string())?;
        let names = |s: &forcesynth_core::StateSet| {
            let v: Vec<&str> = s.iter().map(|q| plant.state_name(q)).collect();
            format!("{{{}}}", v.join(","))
        };
        for it in &r.trace {
            line(
                summary,
                format!(
                    "  k={} states={} transitions={} nonblocking={} bad={} forcing={}",
                    it.k,
                    it.states.len(),
                    it.delta.len(),
                    names(&it.nonblocking),
                    names(&it.bad),
                    names(&it.forcing)
                ),
            )?;
        }
    }
    let sup = &r.supervisor;
    line(
        summary,
        format!(
            "supervisor: {} ({} states, {} transitions)",
            sup.name(),
            sup.num_states(),
            sup.num_transitions()
        ),
    )?;
    line(
        summary,
        format!("forcing states: {{{}}}", r.forcing_state_names().join(",")),
    )?;
    let m = ModelFile::from_automata(&[
        (Kind::Plant, &plant, None),
        (Kind::Supervisor, sup, Some(&r.forcing_states)),
    ]);
    emit(io, out, &m.to_json())?;
    if r.is_empty() {
        line(io.err, "supervisor is empty: no nonblocking supervisor exists")?;
        return Ok(EXIT_EMPTY);
    }
    Ok(EXIT_OK)
}

fn check(
    io: &mut Io,
    args: &PlantArgs,
    supervisor: Option<PathBuf>,
    words: Option<PathBuf>,
    property: Property,
    cap: usize,
) -> CmdResult {
    let (m, plant) = args.load()?;
    let report = match words {
        Some(path) => {
            let text = std::fs::read_to_string(&path).map_err(|e| format!("{}: {e}", path.display()))?;
            let strings: Vec<Vec<&str>> = text
                .lines()
                .map(|l| l.split_whitespace().filter(|t| *t != "ε").collect())
                .collect();
            let refs: Vec<&[&str]> = strings.iter().map(|s| s.as_slice()).collect();
            let sample = StringSample::from_names(plant.alphabet(), &refs).map_err(|e| e.to_string())?;
            let horizon = sample.longest() + 1;
            if horizon > cap {
                return Err(format!("strings of length {} exceed the depth cap {cap}", horizon - 1));
            }
            check_language(&sample, &plant, property, horizon).map_err(|e| e.to_string())?
        }
        None => {
            let sup = match &supervisor {
                Some(p) => ModelFile::read(p).and_then(|s| s.supervisor()),
                None => m.supervisor(),
            }
            .map_err(|e| e.to_string())?;
            if sup.automaton.is_empty() {
                line(io.err, "supervisor is empty")?;
                return Ok(EXIT_EMPTY);
            }
            let rep = check_supervisor(&sup.automaton, &plant, property).map_err(|e| e.to_string())?;
            let nonblocking = sup.automaton.is_nonblocking();
            line(io.out, format!("nonblocking: {}", if nonblocking { "yes" } else { "no" }))?;
            for (q, c) in &rep.classes {
                line(io.out, format!("  {q}: {c}"))?;
            }
            if !nonblocking {
                for w in &rep.witnesses {
                    line(io.out, format!("  witness: {w}"))?;
                }
                line(io.out, format!("{property}: FAIL (blocking)"))?;
                return Ok(EXIT_FAILED);
            }
            rep
        }
    };
    for w in &report.witnesses {
        line(io.out, format!("  witness: {w}"))?;
    }
    line(
        io.out,
        format!("{property}: {}", if report.holds { "PASS" } else { "FAIL" }),
    )?;
    Ok(if report.holds { EXIT_OK } else { EXIT_FAILED })
}
