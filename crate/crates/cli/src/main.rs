//! `gk`: construct Kenyon-tree windows, decode and compare them, count
//! patterns, draw Bratteli data and run the reproduction suites.
//!
//! Exit status is 0 on success, 1 on a domain error (the input is not a hull
//! window, the answer cannot be certified, a check failed), 2 on bad usage.

use std::fmt::Write as _;
use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand};
use gk_core::coding::{self, Code2, Code4, EvCode4, Word};
use gk_core::ghspace::{self, CopyMode, Window};
use gk_core::kenyon::{self, MotifId, MotifKind};
use gk_core::measure::{self, CountMode};
use gk_core::render::{self, RenderSpec};
use gk_core::{af, repro, Pattern, Vertex};
use serde_json::json;

#[derive(Parser)]
#[command(name = "gk", version, about = "Finite-window computations on the Kenyon tree and its hull")]
struct Cli {
    /// Worker threads for parallel loops (default: all cores).
    #[arg(long, global = true)]
    threads: Option<usize>,
    /// Seed for every sampled computation.
    #[arg(long, global = true, default_value_t = repro::DEFAULT_SEED)]
    seed: u64,
    /// Output format: text or json for tables; json, ascii, svg or dot for
    /// patterns.
    #[arg(long, global = true)]
    format: Option<String>,
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Balls, motifs and windows of the Kenyon tree.
    #[command(subcommand)]
    Kenyon(KenyonCmd),
    /// Codes, decoding, the odometer and ends.
    #[command(subcommand)]
    Code(CodeCmd),
    /// Distances, copies, repetitivity and aperiodicity of windows.
    #[command(subcommand)]
    Gh(GhCmd),
    /// Pattern frequencies, valence statistics and growth.
    #[command(subcommand)]
    Measure(MeasureCmd),
    /// Bratteli diagram, cell paths and finite relations.
    #[command(subcommand)]
    Af(AfCmd),
    /// Draw a pattern file.
    Render(RenderArgs),
    /// Run a reproduction suite: metric, coding, measure, af or all.
    Repro { suite: String },
}

#[derive(Subcommand)]
enum KenyonCmd {
    /// `K_n`, the ball of radius 2^n − 1 about the origin.
    Ball {
        #[arg(long)]
        level: u32,
    },
    /// A basic motif such as A0_2 or C_1.
    Motif {
        #[arg(long)]
        level: u32,
        #[arg(long)]
        kind: String,
    },
    /// The ball of any radius about the origin.
    Window {
        #[arg(long)]
        radius: u32,
    },
}

#[derive(Subcommand)]
enum CodeCmd {
    /// The coded tree of a finite code.
    Encode {
        #[arg(long)]
        letters: String,
    },
    /// Recover the code of a window whose basepoint has valence 1 or 2.
    Decode {
        #[arg(long)]
        pattern: PathBuf,
    },
    /// Iterate add-one on k-bit words, least significant bit first.
    Odometer {
        #[arg(long)]
        bits: usize,
        #[arg(long)]
        steps: usize,
        /// Starting word (default all zeros).
        #[arg(long)]
        start: Option<String>,
    },
    /// Number of ends of the tree coded by preperiod·period^∞.
    Ends {
        #[arg(long, default_value = "")]
        preperiod: String,
        #[arg(long)]
        period: String,
    },
}

#[derive(Subcommand)]
enum GhCmd {
    /// Agreement radius and distance e^(−R) between two windows.
    Dist {
        #[arg(long)]
        a: PathBuf,
        #[arg(long)]
        b: PathBuf,
    },
    /// Translations carrying a pattern into a host.
    Copies {
        #[arg(long)]
        pattern: PathBuf,
        #[arg(long)]
        host: PathBuf,
        /// Require exact balls rather than containment.
        #[arg(long)]
        faithful: bool,
    },
    /// Repetitivity radius of r-balls inside a window.
    Repetitivity {
        #[arg(long)]
        r: u32,
        #[command(flatten)]
        source: WindowSource,
    },
    /// Translations up to a norm under which a window looks periodic.
    Aperiodicity {
        #[arg(long, default_value_t = 32)]
        max_norm: u32,
        #[command(flatten)]
        source: WindowSource,
    },
}

/// A window read from a file, or the ball of the Kenyon tree of a radius.
#[derive(Args)]
struct WindowSource {
    #[arg(long, conflicts_with = "radius")]
    pattern: Option<PathBuf>,
    #[arg(long)]
    radius: Option<u32>,
}

#[derive(Subcommand)]
enum MeasureCmd {
    /// Frequency of a motif in the ball of radius 2^level − 1.
    Freq {
        #[arg(long)]
        motif: String,
        #[arg(long)]
        level: u32,
        /// containment or fine.
        #[arg(long, default_value = "containment")]
        mode: String,
    },
    /// Valence fractions in the ball of radius 2^level − 1.
    Histogram {
        #[arg(long)]
        level: u32,
    },
    /// Invariance defect of a motif re-based at a vertex.
    Defect {
        #[arg(long)]
        motif: String,
        #[arg(long, allow_hyphen_values = true)]
        shift: Vertex,
        #[arg(long)]
        level: u32,
    },
    /// V(2^k − 1) for k up to the level.
    Growth {
        #[arg(long)]
        level: u32,
    },
}

#[derive(Subcommand)]
enum AfCmd {
    /// The Bratteli diagram of the substitution.
    Bratteli {
        #[arg(long)]
        levels: u32,
    },
    /// Cells containing the basepoint at levels 0..depth.
    Psi {
        #[arg(long)]
        pattern: PathBuf,
        #[arg(long)]
        depth: u32,
    },
    /// The R_n class of the basepoint.
    Class {
        #[arg(long)]
        pattern: PathBuf,
        #[arg(long)]
        level: u32,
        /// Use the modified relation joining junctions to their east cell.
        #[arg(long)]
        modified: bool,
    },
}

#[derive(Args)]
struct RenderArgs {
    #[arg(long)]
    pattern: PathBuf,
    /// Pixels per lattice unit (svg).
    #[arg(long, default_value_t = 10)]
    scale: u32,
    /// Vertices to mark, as x,y.
    #[arg(long, allow_hyphen_values = true, num_args = 1..)]
    highlight: Vec<Vertex>,
}

enum Failure {
    Usage(String),
    Domain(String),
}

impl From<gk_core::Error> for Failure {
    fn from(e: gk_core::Error) -> Self {
        match e {
            // These only arise from malformed flag values.
            gk_core::Error::UnknownStrategy { .. }
            | gk_core::Error::UnknownMotif(_)
            | gk_core::Error::InvalidLetter { .. }
            | gk_core::Error::EmptyCode => Failure::Usage(e.to_string()),
            other => Failure::Domain(other.to_string()),
        }
    }
}

type Outcome = Result<String, Failure>;

fn main() -> ExitCode {
    let cli = Cli::parse();
    if let Some(n) = cli.threads {
        if n == 0 {
            eprintln!("error: --threads must be positive");
            return ExitCode::from(2);
        }
        rayon::ThreadPoolBuilder::new().num_threads(n).build_global().expect("global pool is set once");
    }
    match run(&cli) {
        Ok((out, ok)) => {
            print!("{out}");
            ExitCode::from(if ok { 0 } else { 1 })
        }
        Err(Failure::Usage(msg)) => {
            eprintln!("error: {msg}");
            ExitCode::from(2)
        }
        Err(Failure::Domain(msg)) => {
            eprintln!("error: {msg}");
            ExitCode::from(1)
        }
    }
}

/// Output and whether the command succeeded; only `repro` reports failure
/// through the flag.
fn run(cli: &Cli) -> Result<(String, bool), Failure> {
    let fmt = cli.format.as_deref();
    let out = match &cli.command {
        Command::Kenyon(cmd) => kenyon_cmd(cmd, fmt)?,
        Command::Code(cmd) => code_cmd(cmd, fmt)?,
        Command::Gh(cmd) => gh_cmd(cmd, fmt)?,
        Command::Measure(cmd) => measure_cmd(cmd, fmt)?,
        Command::Af(cmd) => af_cmd(cmd, fmt)?,
        Command::Render(args) => {
            let p = read_pattern(&args.pattern)?;
            let spec = RenderSpec::new(fmt.unwrap_or("svg"))
                .with_scale(args.scale)
                .with_highlight(args.highlight.clone());
            render::render(&p, &spec)?
        }
        Command::Repro { suite } => {
            let report = repro::run(suite, cli.seed)?;
            let text = match table_format(fmt)? {
                Table::Json => report.to_json(),
                Table::Text => report.to_text(),
            };
            return Ok((text, report.passed));
        }
    };
    Ok((out, true))
}

enum Table {
    Text,
    Json,
}

fn table_format(fmt: Option<&str>) -> Result<Table, Failure> {
    match fmt.unwrap_or("text") {
        "text" => Ok(Table::Text),
        "json" => Ok(Table::Json),
        other => Err(Failure::Usage(format!("--format {other:?}: this command writes text or json"))),
    }
}

fn json_line(v: &serde_json::Value) -> String {
    let mut s = serde_json::to_string_pretty(v).expect("json value serializes");
    s.push('\n');
    s
}

fn emit_pattern(p: &Pattern, fmt: Option<&str>) -> Outcome {
    Ok(render::render(p, &RenderSpec::new(fmt.unwrap_or("json")))?)
}

fn read_text(path: &PathBuf) -> Result<String, Failure> {
    std::fs::read_to_string(path).map_err(|e| Failure::Usage(format!("--pattern {}: {e}", path.display())))
}

fn read_window(path: &PathBuf) -> Result<Window, Failure> {
    Ok(Window::from_json(&read_text(path)?)?)
}

fn read_pattern(path: &PathBuf) -> Result<Pattern, Failure> {
    serde_json::from_str(&read_text(path)?)
        .map_err(|e| Failure::Domain(format!("{}: {e}", path.display())))
}

fn parse_motif(name: &str, level: u32) -> Result<MotifId, Failure> {
    let kind: MotifKind = name.parse()?;
    Ok(MotifId::new(level, kind))
}

fn kenyon_cmd(cmd: &KenyonCmd, fmt: Option<&str>) -> Outcome {
    let p = match cmd {
        KenyonCmd::Ball { level } => kenyon::kenyon_ball(*level)?.pattern().clone(),
        KenyonCmd::Motif { level, kind } => kenyon::motif(parse_motif(kind, *level)?)?,
        KenyonCmd::Window { radius } => kenyon::kenyon_window(*radius)?.into_pattern(),
    };
    emit_pattern(&p, fmt)
}

fn code_cmd(cmd: &CodeCmd, fmt: Option<&str>) -> Outcome {
    match cmd {
        CodeCmd::Encode { letters } => {
            let code: Code4 = letters.parse()?;
            emit_pattern(&kenyon::build_pattern(&code)?, fmt)
        }
        CodeCmd::Decode { pattern } => {
            let d = coding::decode(&read_window(pattern)?)?;
            Ok(match table_format(fmt)? {
                Table::Json => json_line(&json!(d)),
                Table::Text => format!("code {}\ncertified_length {}\n", d.code, d.certified_length),
            })
        }
        CodeCmd::Odometer { bits, steps, start } => {
            let mut w: Code2 = match start {
                Some(s) => s.parse()?,
                None => Word::new(vec![0; *bits])?,
            };
            if w.len() != *bits {
                return Err(Failure::Usage(format!("--start has {} bits, --bits is {bits}", w.len())));
            }
            let mut seq = vec![w.to_string()];
            for _ in 0..*steps {
                w = coding::odometer_step_finite(&w);
                seq.push(w.to_string());
            }
            Ok(match table_format(fmt)? {
                Table::Json => json_line(&json!(seq)),
                Table::Text => seq.iter().map(|s| format!("{s}\n")).collect(),
            })
        }
        CodeCmd::Ends { preperiod, period } => {
            let a = EvCode4::parse(preperiod, period)?;
            let ends = coding::classify_ends(&a);
            let moves = coding::count_cyclic_moves(a.period());
            Ok(match table_format(fmt)? {
                Table::Json => json_line(&json!({ "code": a.to_string(), "ends": ends, "period_moves": moves })),
                Table::Text => format!(
                    "code {a}\nends {ends}\nallers_retours {}\ndetours {}\n",
                    moves.allers_retours, moves.detours
                ),
            })
        }
    }
}

fn source_window(src: &WindowSource, default_radius: u32) -> Result<Window, Failure> {
    match &src.pattern {
        Some(path) => read_window(path),
        None => Ok(kenyon::kenyon_window(src.radius.unwrap_or(default_radius))?),
    }
}

fn gh_cmd(cmd: &GhCmd, fmt: Option<&str>) -> Outcome {
    let table = table_format(fmt)?;
    match cmd {
        GhCmd::Dist { a, b } => {
            let d = ghspace::gh_distance(&read_window(a)?, &read_window(b)?);
            Ok(match table {
                Table::Json => json_line(&json!({ "agreement_radius": d.exponent, "distance": d.value(), "upper_bound": d.upper_bound })),
                Table::Text => format!(
                    "agreement_radius {}\ndistance {}{}\n",
                    d.exponent,
                    if d.upper_bound { "<= " } else { "" },
                    d.value()
                ),
            })
        }
        GhCmd::Copies { pattern, host, faithful } => {
            let p = read_pattern(pattern)?;
            let h = read_pattern(host)?;
            let mode = if *faithful { CopyMode::faithful_for(&p) } else { CopyMode::Containment };
            let copies = ghspace::find_copies(&p, &h, mode);
            Ok(match table {
                Table::Json => json_line(&json!(copies.iter().map(|v| [v.x, v.y]).collect::<Vec<_>>())),
                Table::Text => copies.iter().map(|v| format!("{v}\n")).collect(),
            })
        }
        GhCmd::Repetitivity { r, source } => {
            let w = source_window(source, 511)?;
            let big = ghspace::repetitivity_radius(&w, *r)?;
            Ok(match table {
                Table::Json => json_line(&json!({ "r": r, "window_radius": w.radius(), "repetitivity_radius": big })),
                Table::Text => format!("r {r}\nwindow_radius {}\nrepetitivity_radius {big}\n", w.radius()),
            })
        }
        GhCmd::Aperiodicity { max_norm, source } => {
            let w = source_window(source, 255)?;
            if 2 * *max_norm > w.radius() {
                return Err(Failure::Usage(format!(
                    "--max-norm {max_norm} exceeds half the window radius {}",
                    w.radius()
                )));
            }
            let periods = ghspace::periodic_witnesses(&w, *max_norm);
            Ok(match table {
                Table::Json => json_line(&json!({
                    "max_norm": max_norm,
                    "window_radius": w.radius(),
                    "periodic_vectors": periods.iter().map(|v| [v.x, v.y]).collect::<Vec<_>>(),
                })),
                Table::Text => {
                    let mut s = format!("max_norm {max_norm}\nwindow_radius {}\n", w.radius());
                    if periods.is_empty() {
                        s.push_str("aperiodic: no vector up to the norm preserves the window\n");
                    }
                    for v in periods {
                        let _ = writeln!(s, "period {v}");
                    }
                    s
                }
            })
        }
    }
}

fn radius_of_level(level: u32) -> Result<u32, Failure> {
    if level > kenyon::MAX_LEVEL {
        return Err(Failure::Usage(format!("--level {level}: at most {}", kenyon::MAX_LEVEL)));
    }
    Ok((1u32 << level) - 1)
}

fn measure_cmd(cmd: &MeasureCmd, fmt: Option<&str>) -> Outcome {
    let table = table_format(fmt)?;
    match cmd {
        MeasureCmd::Freq { motif, level, mode } => {
            let mode = match mode.as_str() {
                "containment" => CountMode::Containment,
                "fine" => CountMode::Fine,
                other => return Err(Failure::Usage(format!("--mode {other:?}: expected containment or fine"))),
            };
            let n = radius_of_level(*level)?;
            let p = kenyon::motif(parse_motif(motif, 0)?)?;
            let t = measure::frequency_table(&[(motif.clone(), p)], n, mode)?;
            let e = &t.entries[0];
            Ok(match table {
                Table::Json => json_line(&json!(t)),
                Table::Text => format!(
                    "motif {}\nradius {n}\nvolume {}\ncount {}\nfrequency {} ({:.6})\n",
                    e.name,
                    t.volume,
                    e.count,
                    e.frequency,
                    measure::to_f64(&e.frequency)
                ),
            })
        }
        MeasureCmd::Histogram { level } => {
            let h = measure::valence_histogram(radius_of_level(*level)?)?;
            let low = measure::to_f64(&(&h.fractions[0] + &h.fractions[1]));
            Ok(match table {
                Table::Json => json_line(&json!({ "histogram": h, "valence_at_most_two": low })),
                Table::Text => {
                    let mut s = format!("radius {}\nvolume {}\n", h.radius, h.volume);
                    for (k, (c, q)) in h.counts.iter().zip(&h.fractions).enumerate() {
                        let _ = writeln!(s, "valence {} count {c} fraction {q} ({:.6})", k + 1, measure::to_f64(q));
                    }
                    let _ = writeln!(s, "valence<=2 {low:.6}");
                    s
                }
            })
        }
        MeasureCmd::Defect { motif, shift, level } => {
            let p = kenyon::motif(parse_motif(motif, 0)?)?;
            let d = measure::invariance_defect(&p, *shift, radius_of_level(*level)?)?;
            Ok(match table {
                Table::Json => json_line(&json!(d)),
                Table::Text => format!(
                    "defect {} ({:.6})\nbound {} ({:.6})\nshift_radius {}\nholds {}\n",
                    d.defect,
                    measure::to_f64(&d.defect),
                    d.bound,
                    measure::to_f64(&d.bound),
                    d.shift_radius,
                    d.holds()
                ),
            })
        }
        MeasureCmd::Growth { level } => {
            radius_of_level(*level)?;
            let rows = (0..=*level)
                .map(|k| Ok((k, (1u32 << k) - 1, measure::growth((1 << k) - 1)?)))
                .collect::<Result<Vec<_>, gk_core::Error>>()?;
            Ok(match table {
                Table::Json => json_line(&json!(rows
                    .iter()
                    .map(|&(k, n, v)| json!({ "k": k, "radius": n, "volume": v }))
                    .collect::<Vec<_>>())),
                Table::Text => rows.iter().map(|(k, n, v)| format!("k {k} radius {n} volume {v}\n")).collect(),
            })
        }
    }
}

fn af_cmd(cmd: &AfCmd, fmt: Option<&str>) -> Outcome {
    match cmd {
        AfCmd::Bratteli { levels } => {
            let d = af::bratteli(*levels)?;
            match fmt.unwrap_or("dot") {
                "dot" => Ok(d.to_dot()),
                "json" => Ok(json_line(&json!(d))),
                other => Err(Failure::Usage(format!("--format {other:?}: expected dot or json"))),
            }
        }
        AfCmd::Psi { pattern, depth } => {
            let p = af::psi_prefix(&read_window(pattern)?, *depth)?;
            Ok(match table_format(fmt)? {
                Table::Json => json_line(&json!(p)),
                Table::Text => p
                    .cells
                    .iter()
                    .map(|c| format!("{} at {}\n", c.motif, c.center))
                    .collect(),
            })
        }
        AfCmd::Class { pattern, level, modified } => {
            let variant = if *modified { af::RelationVariant::Modified } else { af::RelationVariant::Standard };
            let c = af::rn_class_with(&read_window(pattern)?, *level, variant)?;
            Ok(match table_format(fmt)? {
                Table::Json => json_line(&json!(c)),
                Table::Text => {
                    let mut s = format!(
                        "level {}\nsize {}\nverified_members {}\nclosed {}\n",
                        c.level,
                        c.offsets.len(),
                        c.verified_members,
                        c.closed
                    );
                    for v in &c.offsets {
                        let _ = writeln!(s, "{v}");
                    }
                    s
                }
            })
        }
    }
}
