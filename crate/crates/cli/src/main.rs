use std::fs;
use std::path::{Path, PathBuf};
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand, ValueEnum};
use strangeness_core::arrangement::{
    enumerate_cells_linear, enumerate_cells_sampled, event_model, parse_sheets, EventKind, EventType, DEFAULT_RESOLUTION,
    MODEL_RADIUS,
};
use strangeness_core::constructions::{
    even_realization, outward, parse_pattern, q3_braid, q_local_pair, triangle_gadget, Ambient, Direction, GadgetSpec,
};
use strangeness_core::movie::{parse_movie, serialize_movie, Movie};
use strangeness_core::omega3::{find_triangle, triangle};
use strangeness_core::rational;
use strangeness_core::render::render_svg;
use strangeness_core::report::{self, Format, Report, Value};
use strangeness_core::verify::{run_suite, Claim};
use strangeness_core::{parse_diagram, serialize_diagram, Diagram, Error, Rational, VertexId};

#[derive(Parser)]
#[command(name = "strangeness", version, about = "Strangeness invariants of cooriented curves and surface movies")]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Clone, Copy, ValueEnum)]
enum OutputFormat {
    Text,
    Json,
}

impl From<OutputFormat> for Format {
    fn from(f: OutputFormat) -> Format {
        match f {
            OutputFormat::Text => Format::Text,
            OutputFormat::Json => Format::Json,
        }
    }
}

#[derive(Args)]
struct Common {
    #[arg(long, value_enum, default_value = "text")]
    format: OutputFormat,
}

#[derive(Subcommand)]
enum Command {
    /// Region values, double-point indices and St(1) of a diagram file.
    CurveSt1 {
        file: PathBuf,
        #[arg(long, default_value = "-1", allow_hyphen_values = true)]
        base: String,
        #[command(flatten)]
        common: Common,
    },
    /// A triangle move on the face bounded by three vertices.
    CurveMove {
        file: PathBuf,
        /// Vertices of the triangle, as `v1,v2,v3`.
        #[arg(long)]
        face: String,
        #[arg(long, default_value = "-1", allow_hyphen_values = true)]
        base: String,
        #[command(flatten)]
        common: Common,
    },
    /// Triple-point indices and St(2) of a movie file.
    MovieSt2 {
        file: PathBuf,
        #[command(flatten)]
        common: Common,
    },
    /// Change of the invariants across one event, or the cells of a sheet file.
    EventDelta {
        /// E, H, T or Q.
        #[arg(long)]
        event: Option<String>,
        /// Coorientations as `in,out,...`, one per sheet.
        #[arg(long)]
        pattern: Option<String>,
        /// For Q: up or down; adds the movie computation.
        #[arg(long)]
        direction: Option<String>,
        /// A sheet description file instead of a built-in model.
        #[arg(long, conflicts_with_all = ["event", "pattern"])]
        sheets: Option<PathBuf>,
        #[command(flatten)]
        common: Common,
    },
    /// A row of the table of Δσ values.
    Table {
        #[arg(long)]
        event: String,
        #[arg(long, default_value_t = 0, allow_hyphen_values = true)]
        i: i64,
        #[command(flatten)]
        common: Common,
    },
    /// Runs the verification suites.
    Verify {
        #[arg(long, default_value = "all")]
        claim: String,
        #[command(flatten)]
        common: Common,
    },
    /// Draws a diagram as SVG.
    Render {
        file: PathBuf,
        #[arg(long)]
        out: PathBuf,
        #[arg(long, default_value = "-1", allow_hyphen_values = true)]
        base: String,
    },
    /// Writes generated diagrams or movies to a directory.
    Generate {
        /// Triangle gadget pattern `in,out,in`, optionally followed by `:nested`.
        #[arg(long, group = "what")]
        gadget: Option<String>,
        /// Local Q movies for a pattern of four; needs --direction.
        #[arg(long, group = "what")]
        q: Option<String>,
        #[arg(long)]
        direction: Option<String>,
        /// k successive Q³ events on closed movies.
        #[arg(long, group = "what")]
        q3_braid: Option<usize>,
        #[arg(long, requires = "q3_braid")]
        reversed: bool,
        /// A chain of single events adding up to an even n.
        #[arg(long, group = "what", allow_hyphen_values = true)]
        even: Option<i64>,
        #[arg(long)]
        out: PathBuf,
    },
}

#[derive(Debug)]
enum Failure {
    Core(Error),
    Usage(String),
    Io(PathBuf, std::io::Error),
    /// Computations succeeded but some verification case fails.
    Verification,
}

impl From<Error> for Failure {
    fn from(e: Error) -> Self {
        Failure::Core(e)
    }
}

type Outcome<T> = Result<T, Failure>;

fn read(path: &Path) -> Outcome<String> {
    fs::read_to_string(path).map_err(|e| Failure::Io(path.to_owned(), e))
}

fn write(path: &Path, text: &str) -> Outcome<()> {
    fs::write(path, text).map_err(|e| Failure::Io(path.to_owned(), e))
}

fn base(s: &str) -> Outcome<Rational> {
    rational::parse(s).ok_or_else(|| Failure::Usage(format!("bad base value `{s}`")))
}

fn direction(s: &str) -> Outcome<Direction> {
    Direction::parse(s).ok_or_else(|| Failure::Usage(format!("bad direction `{s}`, expected up or down")))
}

fn load_diagram(path: &Path) -> Outcome<Diagram> {
    let d = parse_diagram(&read(path)?)?;
    d.validate().into_result()?;
    Ok(d)
}

fn load_movie(path: &Path) -> Outcome<Movie> {
    Ok(parse_movie(&read(path)?)?)
}

fn print(r: &Report, f: OutputFormat) {
    print!("{}", r.render(f.into()));
}

fn curve_move(file: &Path, face: &str, b: &str) -> Outcome<Report> {
    let d = load_diagram(file)?;
    let names: Vec<VertexId> = face.split(',').map(|s| VertexId::from(s.trim())).collect();
    let vs: [VertexId; 3] =
        names.try_into().map_err(|_| Failure::Usage("--face takes exactly three vertices".to_owned()))?;
    let dart = find_triangle(&d, &vs)?;
    Ok(report::curve_move_report(&d, &dart, base(b)?)?)
}

fn event_delta(event: Option<&str>, pattern: Option<&str>, dir: Option<&str>, sheets: Option<&Path>) -> Outcome<Report> {
    if let Some(path) = sheets {
        let sheets = parse_sheets(&read(path)?)?;
        let r = rational::int(MODEL_RADIUS);
        let complex = if sheets.iter().all(|s| s.is_linear()) {
            enumerate_cells_linear(&sheets, r)?
        } else {
            enumerate_cells_sampled(&sheets, MODEL_RADIUS as f64, DEFAULT_RESOLUTION)?
        };
        return Ok(report::complex_report(&complex, rational::half(-3))?);
    }
    let event = event.ok_or_else(|| Failure::Usage("--event or --sheets is required".to_owned()))?;
    let (kind, pattern) = match (EventKind::parse(event), EventType::parse(event)) {
        (Some(k), _) => {
            let p = pattern.ok_or_else(|| Failure::Usage(format!("--pattern is required for {event}")))?;
            (k, parse_pattern(p)?)
        }
        (None, Some(t)) if pattern.is_none() => (t.kind(), t.pattern()),
        (None, Some(_)) => return Err(Failure::Usage("a refined event type fixes the pattern".to_owned())),
        (None, None) => return Err(Failure::Usage(format!("unknown event `{event}`"))),
    };
    let dir = dir.map(direction).transpose()?;
    let model = event_model(kind, &pattern)?;
    let mut r = report::event_model_report(&model, dir)?;
    if let Some(d) = dir {
        if kind != EventKind::Q {
            return Err(Failure::Usage("--direction applies to Q events only".to_owned()));
        }
        let spec = GadgetSpec::q(pattern.clone().try_into().expect("Q has four sheets"), d);
        let pair = q_local_pair(&spec)?;
        r.push("movie", report::q_pair_report(&spec, &pair)?);
    }
    Ok(r)
}

fn table(event: &str, i: i64) -> Outcome<Report> {
    let e = EventType::parse(event).ok_or_else(|| Failure::Usage(format!("unknown event type `{event}`")))?;
    Ok(report::table_report(e, i))
}

fn verify(claim: &str, f: OutputFormat) -> Outcome<()> {
    let which = match claim {
        "all" => None,
        c => Some(Claim::parse(c).ok_or_else(|| Failure::Usage(format!("unknown claim `{c}`")))?),
    };
    let cases = run_suite(which);
    match f {
        OutputFormat::Text => {
            for c in &cases {
                let computed = c.computed.map(|v| rational::format(&v)).unwrap_or_else(|| "error".to_owned());
                println!(
                    "{} {:<16} {:<44} expected {:>4} computed {:>5}",
                    if c.holds { "ok  " } else { "FAIL" },
                    c.claim.id(),
                    c.parameters,
                    rational::format(&c.expected),
                    computed
                );
                if !c.holds {
                    for p in &c.paths {
                        match (&p.value, &p.error) {
                            (Some(v), _) => println!("       {}: {}", p.path, rational::format(v)),
                            (None, e) => println!("       {}: error: {}", p.path, e.as_deref().unwrap_or("")),
                        }
                    }
                }
            }
            println!();
            print!("{}", report::summary_table(&cases));
        }
        OutputFormat::Json => print(&report::verify_report(&cases), f),
    }
    if cases.iter().all(|c| c.holds) {
        Ok(())
    } else {
        Err(Failure::Verification)
    }
}

fn render(file: &Path, out: &Path, b: &str) -> Outcome<Report> {
    let d = load_diagram(file)?;
    let svg = render_svg(&d, base(b)?)?;
    write(out, &svg)?;
    Ok(Report::new().with("written", out.display().to_string()))
}

fn ensure_dir(dir: &Path) -> Outcome<()> {
    fs::create_dir_all(dir).map_err(|e| Failure::Io(dir.to_owned(), e))
}

fn write_movies(dir: &Path, stem: &str, before: &Movie, after: &Movie, files: &mut Vec<Value>) -> Outcome<()> {
    for (which, m) in [("before", before), ("after", after)] {
        let p = dir.join(format!("{stem}{which}.movie"));
        write(&p, &serialize_movie(m))?;
        files.push(p.display().to_string().into());
    }
    Ok(())
}

struct GenerateArgs<'a> {
    gadget: Option<&'a str>,
    q: Option<&'a str>,
    direction: Option<&'a str>,
    q3_braid: Option<usize>,
    reversed: bool,
    even: Option<i64>,
    out: &'a Path,
}

fn generate(a: GenerateArgs<'_>) -> Outcome<Report> {
    ensure_dir(a.out)?;
    let mut files = Vec::new();
    let mut r = Report::new();
    if let Some(spec) = a.gadget {
        let (p, amb) = match spec.split_once(':') {
            Some((p, "nested")) => (p, Ambient::Nested),
            Some((p, "venn")) => (p, Ambient::Venn),
            Some((_, other)) => return Err(Failure::Usage(format!("unknown ambient `{other}`"))),
            None => (spec, Ambient::Venn),
        };
        let pattern = parse_pattern(p)?;
        let pattern: [_; 3] =
            pattern.try_into().map_err(|_| Failure::Usage("a gadget pattern has three entries".to_owned()))?;
        let g = triangle_gadget(&GadgetSpec::omega3(pattern, amb))?;
        for (which, d) in [("before", &g.before), ("after", &g.after)] {
            let p = a.out.join(format!("{which}.diagram"));
            write(&p, &serialize_diagram(d))?;
            files.push(p.display().to_string().into());
        }
        let t = triangle(&g.before, &g.face)?;
        r.push("j", outward(&pattern));
        r.push("face", t.vertices.iter().map(|v| v.to_string()).collect::<Vec<_>>().join(","));
    } else if let Some(p) = a.q {
        let d = direction(a.direction.ok_or_else(|| Failure::Usage("--q needs --direction".to_owned()))?)?;
        let pattern = parse_pattern(p)?;
        let pattern: [_; 4] = pattern.try_into().map_err(|_| Failure::Usage("a Q pattern has four entries".to_owned()))?;
        let pair = q_local_pair(&GadgetSpec::q(pattern, d))?;
        write_movies(a.out, "", &pair.before, &pair.after, &mut files)?;
        r.push("j", pair.j);
    } else if let Some(k) = a.q3_braid {
        let pair = q3_braid(k, a.reversed)?;
        write_movies(a.out, "", &pair.before, &pair.after, &mut files)?;
    } else if let Some(n) = a.even {
        let steps = even_realization(n)?;
        for (i, s) in steps.iter().enumerate() {
            write_movies(a.out, &format!("step{i:02}-"), &s.before, &s.after, &mut files)?;
        }
        r.push("steps", steps.len());
    } else {
        return Err(Failure::Usage("one of --gadget, --q, --q3-braid, --even is required".to_owned()));
    }
    r.push("files", Value::List(files));
    Ok(r)
}

fn run(cli: Cli) -> Outcome<()> {
    match cli.command {
        Command::CurveSt1 { file, base: b, common } => {
            let d = load_diagram(&file)?;
            print(&report::curve_st1_report(&d, base(&b)?)?, common.format);
        }
        Command::CurveMove { file, face, base: b, common } => print(&curve_move(&file, &face, &b)?, common.format),
        Command::MovieSt2 { file, common } => print(&report::movie_st2_report(&load_movie(&file)?)?, common.format),
        Command::EventDelta { event, pattern, direction, sheets, common } => print(
            &event_delta(event.as_deref(), pattern.as_deref(), direction.as_deref(), sheets.as_deref())?,
            common.format,
        ),
        Command::Table { event, i, common } => print(&table(&event, i)?, common.format),
        Command::Verify { claim, common } => verify(&claim, common.format)?,
        Command::Render { file, out, base: b } => print(&render(&file, &out, &b)?, OutputFormat::Text),
        Command::Generate { gadget, q, direction, q3_braid, reversed, even, out } => print(
            &generate(GenerateArgs {
                gadget: gadget.as_deref(),
                q: q.as_deref(),
                direction: direction.as_deref(),
                q3_braid,
                reversed,
                even,
                out: &out,
            })?,
            OutputFormat::Text,
        ),
    }
    Ok(())
}

fn main() -> ExitCode {
    match run(Cli::parse()) {
        Ok(()) => ExitCode::SUCCESS,
        Err(Failure::Verification) => ExitCode::from(1),
        Err(Failure::Core(e)) => {
            eprintln!("error: {e}");
            ExitCode::from(2)
        }
        Err(Failure::Usage(m)) => {
            eprintln!("error: {m}");
            ExitCode::from(2)
        }
        Err(Failure::Io(p, e)) => {
            eprintln!("error: {}: {e}", p.display());
            ExitCode::from(2)
        }
    }
}
