//! `tonnetz`: command-line access to harmonic systems, their Levi graphs,
//! isomorphism censuses, progressions and MIDI re-pitching.
//!
//! Exit status: 0 on success, 1 when the input is well-formed but a domain
//! rule rejects it (or a check fails), 2 on I/O, parse or usage errors.

mod output;

use std::fs;
use std::io::{self, Read, Write};
use std::path::{Path, PathBuf};
use std::process::ExitCode;

use anyhow::{anyhow, Context};
use clap::{Args, Parser, Subcommand, ValueEnum};
use serde::Serialize;
use tonnetz::checks;
use tonnetz::isoclass::{self, Domain, Mode};
use tonnetz::levigraph::{to_dot, to_json};
use tonnetz::midi::{self, OctavePolicy, TransformOptions, Voicing};
use tonnetz::pathkit::{self, PathCheck, ProgressionPath};
use tonnetz::{AffineMap, CrtBasis, HarmonicSystem, Quality, StructuredLeviGraph};

use output::{Format, Printer};

#[derive(Parser)]
#[command(name = "tonnetz", version, about = "Generalised (t,s) Tonnetz toolkit")]
struct Cli {
    /// Output format; each command falls back to json when it has no table or dot form.
    #[arg(long, global = true, value_enum, env = "TONNETZ_FORMAT", default_value = "json")]
    format: Format,

    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// CRT basis tones of Z_n and the canonical anchor system.
    Decompose {
        #[arg(long)]
        n: u32,
        /// Pairwise coprime factors; defaults to the prime-power split, smallest first.
        #[arg(long, value_delimiter = ',')]
        factors: Option<Vec<u32>>,
    },
    /// Every Major and Minor chord of a system.
    Chords(SystemArgs),
    /// The P, L, R neighbours of one chord.
    Neighbors {
        #[command(flatten)]
        system: SystemArgs,
        #[arg(long, value_parser = parse_quality)]
        quality: Quality,
        #[arg(long)]
        root: u32,
    },
    /// The structured Levi graph as DOT or JSON.
    Graph(SystemArgs),
    /// Note-induced isomorphisms between two systems.
    Iso {
        #[arg(long)]
        n: u32,
        /// Source system as `t,s`.
        #[arg(long, value_parser = parse_pair)]
        src: (u32, u32),
        /// Target system as `t,s`.
        #[arg(long, value_parser = parse_pair)]
        dst: (u32, u32),
    },
    /// Partition all systems of Z_n into isomorphism orbits.
    Orbits {
        #[arg(long)]
        n: u32,
        #[arg(long, value_enum, default_value = "abstract")]
        mode: ModeArg,
        #[arg(long, value_enum, default_value = "all")]
        domain: DomainArg,
    },
    /// Recompute the structural claims and report each one.
    CheckTheorems,
    /// Check that a progression walks along Tonnetz edges.
    ValidatePath(PathSource),
    /// Carry a progression through the note-induced isomorphism f(x) = ax + b.
    TransportPath {
        #[command(flatten)]
        source: PathSource,
        /// Target system as `t,s` (same modulus as the path).
        #[arg(long, value_parser = parse_pair)]
        dst: (u32, u32),
        #[arg(long)]
        a: u32,
        #[arg(long)]
        b: u32,
        #[arg(long)]
        out: Option<PathBuf>,
    },
    /// Re-pitch a Standard MIDI File with f(x) = ax + b on pitch classes mod 12.
    TransformMidi {
        #[arg(long = "in")]
        input: PathBuf,
        #[arg(long)]
        out: PathBuf,
        #[arg(long)]
        a: u32,
        #[arg(long)]
        b: u32,
        #[arg(long, value_enum, default_value = "register-block")]
        policy: PolicyArg,
        #[arg(long)]
        include_percussion: bool,
    },
    /// Render a 10-TET progression as a JSON frequency score.
    DecaScore {
        #[command(flatten)]
        source: PathSource,
        #[arg(long, default_value_t = midi::deca::DEFAULT_BASE_FREQUENCY)]
        base_freq: f64,
        /// Beats per minute, one chord per beat.
        #[arg(long, default_value_t = midi::deca::DEFAULT_TEMPO)]
        tempo: f64,
        #[arg(long, value_enum, default_value = "open")]
        voicing: VoicingArg,
        #[arg(long)]
        out: Option<PathBuf>,
    },
}

#[derive(Args)]
struct SystemArgs {
    #[arg(long)]
    n: u32,
    #[arg(long)]
    t: u32,
    #[arg(long)]
    s: u32,
}

impl SystemArgs {
    fn system(&self) -> tonnetz::Result<HarmonicSystem> {
        HarmonicSystem::new(self.n, self.t, self.s)
    }
}

#[derive(Args)]
#[group(required = true, multiple = false)]
struct PathSource {
    /// Progression JSON file, or `-` for stdin.
    #[arg(long)]
    path: Option<PathBuf>,
    /// Use the built-in 10-TET miniature on (6,5).
    #[arg(long)]
    miniature: bool,
}

impl PathSource {
    fn load(&self) -> anyhow::Result<ProgressionPath> {
        match &self.path {
            None => Ok(pathkit::miniature()),
            Some(p) => {
                let text = read_text(p)?;
                serde_json::from_str(&text).with_context(|| format!("parsing progression {}", p.display()))
            }
        }
    }
}

#[derive(Clone, Copy, ValueEnum)]
enum ModeArg {
    Abstract,
    NoteInduced,
}

#[derive(Clone, Copy, ValueEnum)]
enum DomainArg {
    All,
    Nondegenerate,
}

#[derive(Clone, Copy, ValueEnum)]
enum PolicyArg {
    RegisterBlock,
    NearestImage,
}

#[derive(Clone, Copy, ValueEnum)]
enum VoicingArg {
    Open,
    Close,
}

fn parse_pair(s: &str) -> Result<(u32, u32), String> {
    let (t, s) = s
        .split_once(',')
        .ok_or_else(|| format!("expected `t,s`, got {s:?}"))?;
    let num = |x: &str| x.trim().parse::<u32>().map_err(|e| format!("{x:?}: {e}"));
    Ok((num(t)?, num(s)?))
}

fn parse_quality(s: &str) -> Result<Quality, String> {
    s.parse()
}

/// Failure classes, mapped onto exit codes.
enum Failure {
    Domain(anyhow::Error),
    Input(anyhow::Error),
}

impl From<anyhow::Error> for Failure {
    fn from(e: anyhow::Error) -> Self {
        let domain = e.chain().any(|c| {
            c.downcast_ref::<tonnetz::Error>()
                .is_some_and(|e| !matches!(e, tonnetz::Error::Midi(_)))
        });
        if domain {
            Failure::Domain(e)
        } else {
            Failure::Input(e)
        }
    }
}

impl From<tonnetz::Error> for Failure {
    fn from(e: tonnetz::Error) -> Self {
        anyhow::Error::from(e).into()
    }
}

fn read_text(path: &Path) -> anyhow::Result<String> {
    if path == Path::new("-") {
        let mut s = String::new();
        io::stdin().read_to_string(&mut s).context("reading stdin")?;
        return Ok(s);
    }
    fs::read_to_string(path).with_context(|| format!("reading {}", path.display()))
}

fn write_json_to(out: Option<&Path>, value: &impl Serialize, printer: &mut Printer) -> anyhow::Result<()> {
    match out {
        Some(p) => {
            let mut text = serde_json::to_string_pretty(value)?;
            text.push('\n');
            fs::write(p, text).with_context(|| format!("writing {}", p.display()))
        }
        None => printer.json(value),
    }
}

fn default_factors(n: u32) -> Vec<u32> {
    let mut factors = Vec::new();
    let mut m = n;
    let mut p = 2;
    while m > 1 {
        if p * p > m {
            factors.push(m);
            break;
        }
        let mut power = 1;
        while m.is_multiple_of(p) {
            m /= p;
            power *= p;
        }
        if power > 1 {
            factors.push(power);
        }
        p += 1;
    }
    factors.sort_unstable();
    factors
}

#[derive(Serialize)]
struct DecomposeOut {
    n: u32,
    factors: Vec<u32>,
    basis_tones: Vec<u32>,
    canonical_system: Option<HarmonicSystem>,
}

#[derive(Serialize)]
struct ChordOut {
    id: String,
    quality: Quality,
    root: u32,
    triple: [u32; 3],
}

impl ChordOut {
    fn new(system: HarmonicSystem, quality: Quality, root: u32) -> Self {
        Self {
            id: format!("{}{}", quality.symbol(), root),
            quality,
            root,
            triple: system.triple(quality, root),
        }
    }
}

#[derive(Serialize)]
struct ChordsOut {
    system: HarmonicSystem,
    chords: Vec<ChordOut>,
}

#[derive(Serialize)]
struct NeighborOut {
    color: tonnetz::EdgeColor,
    #[serde(flatten)]
    chord: ChordOut,
}

#[derive(Serialize)]
struct NeighborsOut {
    system: HarmonicSystem,
    chord: ChordOut,
    neighbors: Vec<NeighborOut>,
}

#[derive(Serialize)]
struct WitnessOut {
    a: u32,
    b: u32,
    orientation: tonnetz::Orientation,
    root_map: tonnetz::RootMap,
}

#[derive(Serialize)]
struct IsoOut {
    source: HarmonicSystem,
    target: HarmonicSystem,
    witnesses: Vec<WitnessOut>,
}

#[derive(Serialize)]
struct ChecksOut {
    passed: usize,
    failed: usize,
    checks: Vec<checks::CheckResult>,
}

#[derive(Serialize)]
struct PathCheckOut {
    system: HarmonicSystem,
    steps: usize,
    transitions: usize,
    valid: bool,
    broken_at: Option<usize>,
    closed: bool,
}

#[derive(Serialize)]
struct TransformOut {
    input: String,
    output: String,
    a: u32,
    b: u32,
    policy: OctavePolicy,
    include_percussion: bool,
    #[serde(flatten)]
    stats: midi::TransformStats,
    unmatched_notes: usize,
}

fn run(cli: Cli, printer: &mut Printer) -> Result<bool, Failure> {
    match cli.command {
        Command::Decompose { n, factors } => {
            let factors = factors.unwrap_or_else(|| default_factors(n));
            let basis = CrtBasis::decompose(n, &factors)?;
            let canonical_system = (factors.len() == 2).then(|| basis.canonical_system()).transpose()?;
            let out = DecomposeOut {
                n,
                basis_tones: basis.basis_tones().to_vec(),
                factors,
                canonical_system,
            };
            printer.emit(&out, |w| {
                writeln!(w, "n = {}, factors {:?}", out.n, out.factors)?;
                for (f, e) in out.factors.iter().zip(&out.basis_tones) {
                    writeln!(w, "  unit tone for Z_{f}: {e}")?;
                }
                if let Some(s) = out.canonical_system {
                    writeln!(w, "canonical system {s}")?;
                }
                Ok(())
            })?;
        }
        Command::Chords(args) => {
            let system = args.system()?;
            let out = ChordsOut {
                system,
                chords: system
                    .all_chords()
                    .iter()
                    .map(|c| ChordOut::new(system, c.quality, c.root))
                    .collect(),
            };
            printer.emit(&out, |w| {
                writeln!(w, "{system}")?;
                for c in system.all_chords() {
                    writeln!(w, "  {c}")?;
                }
                Ok(())
            })?;
        }
        Command::Neighbors { system, quality, root } => {
            let system = system.system()?;
            if root >= system.n() {
                return Err(tonnetz::Error::ResidueOutOfRange { value: root, n: system.n() }.into());
            }
            let roots = system.neighbor_roots(quality, root);
            let other = quality.flipped();
            let out = NeighborsOut {
                system,
                chord: ChordOut::new(system, quality, root),
                neighbors: tonnetz::EdgeColor::ALL
                    .into_iter()
                    .zip(roots)
                    .map(|(color, r)| NeighborOut {
                        color,
                        chord: ChordOut::new(system, other, r),
                    })
                    .collect(),
            };
            printer.emit(&out, |w| {
                writeln!(w, "{}", system.chord(quality, root))?;
                for nb in &out.neighbors {
                    writeln!(w, "  {:?} -> {}", nb.color, system.chord(other, nb.chord.root))?;
                }
                Ok(())
            })?;
        }
        Command::Graph(args) => {
            let g = StructuredLeviGraph::build(args.system()?);
            match printer.format() {
                Format::Json => printer.json(&to_json(&g))?,
                Format::Dot | Format::Table => printer.raw(&to_dot(&g))?,
            }
        }
        Command::Iso { n, src, dst } => {
            let source = HarmonicSystem::new(n, src.0, src.1)?;
            let target = HarmonicSystem::new(n, dst.0, dst.1)?;
            let found = isoclass::note_induced_isos(source, target)?;
            let out = IsoOut {
                source,
                target,
                witnesses: found
                    .iter()
                    .map(|w| WitnessOut {
                        a: w.map.multiplier(),
                        b: w.map.offset(),
                        orientation: w.orientation,
                        root_map: w.root_map,
                    })
                    .collect(),
            };
            printer.emit(&out, |w| {
                writeln!(w, "{} witness(es) {source} -> {target}", found.len())?;
                for x in &found {
                    writeln!(w, "  {x}")?;
                }
                Ok(())
            })?;
        }
        Command::Orbits { n, mode, domain } => {
            if n < 2 {
                return Err(tonnetz::Error::ModulusTooSmall { n, min: 2 }.into());
            }
            let mode = match mode {
                ModeArg::Abstract => Mode::Abstract,
                ModeArg::NoteInduced => Mode::NoteInduced,
            };
            let domain = match domain {
                DomainArg::All => Domain::All,
                DomainArg::Nondegenerate => Domain::NonDegenerate,
            };
            let report = isoclass::classify_orbits(n, mode, domain).report();
            printer.emit(&report, |w| {
                writeln!(w, "n = {n}, {mode:?}, {domain:?}: {} orbit(s)", report.orbit_count)?;
                for (i, orbit) in report.orbits.iter().enumerate() {
                    let members: Vec<String> = orbit.iter().map(|[t, s]| format!("({t},{s})")).collect();
                    writeln!(w, "  {:>2}: {}", i + 1, members.join(" "))?;
                }
                Ok(())
            })?;
        }
        Command::CheckTheorems => {
            let results = checks::run_all();
            let failed = results.iter().filter(|c| !c.passed).count();
            let hard_failure = results.iter().any(|c| !c.passed && !c.soft);
            let out = ChecksOut {
                passed: results.len() - failed,
                failed,
                checks: results,
            };
            printer.emit(&out, |w| {
                for c in &out.checks {
                    let tag = match (c.passed, c.soft) {
                        (true, _) => "PASS",
                        (false, false) => "FAIL",
                        (false, true) => "NOTE",
                    };
                    writeln!(w, "{tag} {}: {} [{}]", c.id, c.claim, c.detail)?;
                }
                Ok(())
            })?;
            return Ok(!hard_failure);
        }
        Command::ValidatePath(source) => {
            let path = source.load().map_err(Failure::Input)?;
            let check = path.validate()?;
            let broken_at = match check {
                PathCheck::Valid => None,
                PathCheck::BrokenAt { index } => Some(index),
            };
            let out = PathCheckOut {
                system: path.system,
                steps: path.steps.len(),
                transitions: path.transitions(),
                valid: broken_at.is_none(),
                broken_at,
                closed: path.is_closed(),
            };
            printer.emit(&out, |w| match broken_at {
                None => writeln!(w, "valid: {} transition(s) on {}", out.transitions, out.system),
                Some(i) => writeln!(
                    w,
                    "invalid: {} -> {} is not an edge of {}",
                    path.steps[i],
                    path.steps[i + 1],
                    out.system
                ),
            })?;
            return Ok(out.valid);
        }
        Command::TransportPath { source, dst, a, b, out } => {
            let path = source.load().map_err(Failure::Input)?;
            let n = path.system.n();
            let target = HarmonicSystem::new(n, dst.0, dst.1)?;
            let map = AffineMap::new(a, b, n)?;
            let witness = isoclass::note_induced_isos(path.system, target)?
                .into_iter()
                .find(|w| w.map == map)
                .ok_or_else(|| anyhow!("{map} is not a note-induced isomorphism {} -> {target}", path.system))
                .map_err(Failure::Domain)?;
            let moved = pathkit::transport_path(&witness, &path, target)?;
            write_json_to(out.as_deref(), &moved, printer)?;
        }
        Command::TransformMidi {
            input,
            out,
            a,
            b,
            policy,
            include_percussion,
        } => {
            let map = AffineMap::new(a, b, 12)?;
            let bytes = fs::read(&input).with_context(|| format!("reading {}", input.display()))?;
            let doc = midi::parse_smf(&bytes).with_context(|| format!("parsing {}", input.display()))?;
            let options = TransformOptions {
                policy: match policy {
                    PolicyArg::RegisterBlock => OctavePolicy::RegisterBlock,
                    PolicyArg::NearestImage => OctavePolicy::NearestImage,
                },
                include_percussion,
            };
            let (moved, stats) = midi::transform_pitches(&doc, map, options)?;
            let bytes = midi::write_smf(&moved).context("encoding MIDI")?;
            fs::write(&out, bytes).with_context(|| format!("writing {}", out.display()))?;
            let report = TransformOut {
                input: input.display().to_string(),
                output: out.display().to_string(),
                a,
                b,
                policy: options.policy,
                include_percussion,
                stats,
                unmatched_notes: doc.notes().1.len(),
            };
            printer.emit(&report, |w| {
                writeln!(
                    w,
                    "{} note event(s) re-pitched with {map}, {} clamped, {} percussion skipped",
                    stats.transformed, stats.clamped, stats.skipped_percussion
                )
            })?;
        }
        Command::DecaScore {
            source,
            base_freq,
            tempo,
            voicing,
            out,
        } => {
            let path = source.load().map_err(Failure::Input)?;
            let voicing = match voicing {
                VoicingArg::Open => Voicing::Open,
                VoicingArg::Close => Voicing::Close,
            };
            let score = midi::render_deca_score(&path, voicing, tempo, base_freq)?;
            write_json_to(out.as_deref(), &score, printer)?;
        }
    }
    Ok(true)
}

impl From<io::Error> for Failure {
    fn from(e: io::Error) -> Self {
        Failure::Input(e.into())
    }
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    let mut printer = Printer::new(cli.format);
    let result = run(cli, &mut printer);
    let flushed = printer.finish();
    match (result, flushed) {
        (Ok(true), Ok(())) => ExitCode::SUCCESS,
        (Ok(false), Ok(())) => ExitCode::from(1),
        (Ok(_), Err(e)) => {
            eprintln!("error: {e:#}");
            ExitCode::from(2)
        }
        (Err(Failure::Domain(e)), _) => {
            eprintln!("error: {e:#}");
            ExitCode::from(1)
        }
        (Err(Failure::Input(e)), _) => {
            eprintln!("error: {e:#}");
            ExitCode::from(2)
        }
    }
}
