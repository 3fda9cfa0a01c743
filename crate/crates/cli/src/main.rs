//! `vkh`: virtual Khovanov homology from the command line.
//!
//! Exit codes: `0` success, `1` usage error, `2` parse error, `3` invariant
//! violation, `4` arity mismatch between a circuit and its inputs.

use std::fmt::Write as _;
use std::fs;
use std::path::{Path, PathBuf};
use std::process::ExitCode;

use clap::{Parser, Subcommand, ValueEnum};
use rand_chacha::rand_core::SeedableRng;
use rand_chacha::ChaCha8Rng;
use serde_json::{json, Value};

use vkh::circuit::{compare_glued, parse_circuit, CircuitError, NtVerdict};
use vkh::closures::{compare_closures, is_nice, ClosureVerdict};
use vkh::cube::{CubeError, CubeOptions, GeometricComplex, XMarker};
use vkh::diagram::{parse_diagram, ClosureKind, DiagramError, Niceness, VTangleDiagram};
use vkh::euler::graded_euler;
use vkh::homology::{homology_over, HomologyError, HomologySummary};
use vkh::lee::lee_generator_prediction;
use vkh::moves::{random_moves, MoveKind};
use vkh::tqft::{apply_tqft, check_faces};
use vkh::{RingTag, Z};

#[derive(Parser)]
#[command(name = "vkh", version, about = "Virtual Khovanov homology of virtual tangle diagrams")]
struct Cli {
    /// Print JSON instead of text.
    #[arg(long, global = true)]
    json: bool,
    /// X-marker position used at every crossing.
    #[arg(long, global = true, value_enum, default_value_t = Marker::Left)]
    marker: Marker,
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Homology of a diagram over an exact ring.
    Homology {
        file: PathBuf,
        /// Q, Z, Zhalf or Zp:<p>.
        #[arg(long, default_value = "Q")]
        ring: String,
        /// 0 for Khovanov homology, 1 for the Lee deformation.
        #[arg(long, default_value_t = 0, value_parser = clap::value_parser!(i64).range(0..=1))]
        t: i64,
        /// Closure for tangles with boundary points.
        #[arg(long, value_enum)]
        close: Option<Close>,
    },
    /// Checks that every face anticommutes and that d∘d = 0 over Z.
    Verify {
        file: PathBuf,
        /// Closure for tangles; both closures are checked when omitted.
        #[arg(long, value_enum)]
        close: Option<Close>,
    },
    /// Glues tangles through a circuit and compares with the direct build.
    Glue {
        circuit: PathBuf,
        #[arg(required = true)]
        files: Vec<PathBuf>,
        /// Also require a chain isomorphism, not only equal homology.
        #[arg(long)]
        strict_chain: bool,
        #[arg(long, default_value = "Q")]
        ring: String,
        #[arg(long, default_value_t = 1, value_parser = clap::value_parser!(i64).range(0..=1))]
        t: i64,
        /// Closure of the input tangles.
        #[arg(long, value_enum, default_value_t = Close::Star)]
        close: Close,
    },
    /// Applies random generalized Reidemeister moves and compares homology.
    Invariance {
        file: PathBuf,
        #[arg(long, default_value_t = 5)]
        moves: usize,
        #[arg(long, default_value_t = 0)]
        seed: u64,
        #[arg(long, default_value = "Q")]
        ring: String,
        /// Only use RM1, RM2 and RM3.
        #[arg(long)]
        classical_only: bool,
        #[arg(long, value_enum)]
        close: Option<Close>,
    },
    /// Non-alternating resolutions and the predicted Lee generators.
    Nonalt { file: PathBuf },
    /// Jones polynomial as the graded Euler characteristic.
    Jones {
        file: PathBuf,
        #[arg(long, value_enum)]
        close: Option<Close>,
    },
}

#[derive(Clone, Copy, ValueEnum)]
enum Close {
    Star,
    Alt,
}

impl From<Close> for ClosureKind {
    fn from(c: Close) -> Self {
        match c {
            Close::Star => ClosureKind::Star,
            Close::Alt => ClosureKind::Alternate,
        }
    }
}

#[derive(Clone, Copy, ValueEnum)]
enum Marker {
    Left,
    Top,
    Right,
    Bottom,
}

impl From<Marker> for XMarker {
    fn from(m: Marker) -> Self {
        match m {
            Marker::Left => XMarker::Left,
            Marker::Top => XMarker::Top,
            Marker::Right => XMarker::Right,
            Marker::Bottom => XMarker::Bottom,
        }
    }
}

enum Failure {
    Usage(String),
    Parse(String),
    Invariant(String),
    Arity(String),
}

impl Failure {
    fn code(&self) -> u8 {
        match self {
            Failure::Usage(_) => 1,
            Failure::Parse(_) => 2,
            Failure::Invariant(_) => 3,
            Failure::Arity(_) => 4,
        }
    }

    fn message(&self) -> &str {
        match self {
            Failure::Usage(m) | Failure::Parse(m) | Failure::Invariant(m) | Failure::Arity(m) => m,
        }
    }
}

impl From<CubeError> for Failure {
    fn from(e: CubeError) -> Self {
        match e {
            CubeError::Diagram(e) => Failure::Parse(e.to_string()),
            CubeError::NeedsClosure(_) => Failure::Usage(e.to_string()),
            other => Failure::Invariant(other.to_string()),
        }
    }
}

impl From<HomologyError> for Failure {
    fn from(e: HomologyError) -> Self {
        match e {
            HomologyError::UnsupportedPrime(_) | HomologyError::Tqft(_) => Failure::Usage(e.to_string()),
            other => Failure::Invariant(other.to_string()),
        }
    }
}

impl From<CircuitError> for Failure {
    fn from(e: CircuitError) -> Self {
        if e.is_arity() {
            Failure::Arity(e.to_string())
        } else if e.is_parse() {
            Failure::Parse(e.to_string())
        } else {
            match e {
                CircuitError::Cube(c) => c.into(),
                CircuitError::Homology(h) => h.into(),
                other => Failure::Invariant(other.to_string()),
            }
        }
    }
}

/// Printed report with its exit code.
struct Report {
    text: String,
    json: Value,
    code: u8,
}

impl Report {
    fn ok(text: String, json: Value) -> Self {
        Report { text, json, code: 0 }
    }
}

fn main() -> ExitCode {
    let cli = match Cli::try_parse() {
        Ok(cli) => cli,
        Err(e) => {
            let _ = e.print();
            return ExitCode::from(if e.use_stderr() { 1 } else { 0 });
        }
    };
    let result = run(&cli);
    match result {
        Ok(r) => {
            if cli.json {
                println!("{}", r.json);
            } else {
                print!("{}", r.text);
            }
            ExitCode::from(r.code)
        }
        Err(f) => {
            eprintln!("error: {}", f.message());
            if cli.json {
                println!("{}", json!({"error": f.message(), "exit": f.code()}));
            }
            ExitCode::from(f.code())
        }
    }
}

fn run(cli: &Cli) -> Result<Report, Failure> {
    let marker = XMarker::from(cli.marker);
    match &cli.command {
        Command::Homology { file, ring, t, close } => cmd_homology(file, ring, *t, *close, marker),
        Command::Verify { file, close } => cmd_verify(file, *close, marker),
        Command::Glue { circuit, files, strict_chain, ring, t, close } => {
            cmd_glue(circuit, files, *strict_chain, ring, *t, (*close).into())
        }
        Command::Invariance { file, moves, seed, ring, classical_only, close } => {
            cmd_invariance(file, *moves, *seed, ring, *classical_only, *close, marker)
        }
        Command::Nonalt { file } => cmd_nonalt(file),
        Command::Jones { file, close } => cmd_jones(file, *close, marker),
    }
}

fn read(path: &Path) -> Result<String, Failure> {
    fs::read_to_string(path).map_err(|e| Failure::Parse(format!("{}: {e}", path.display())))
}

fn load(path: &Path) -> Result<VTangleDiagram, Failure> {
    parse_diagram(&read(path)?).map_err(|e: DiagramError| Failure::Parse(format!("{}: {e}", path.display())))
}

fn parse_ring(ring: &str) -> Result<RingTag, Failure> {
    ring.parse().map_err(|e: vkh::ring::RingTagError| Failure::Usage(e.to_string()))
}

fn warn_lee(tag: RingTag, t: i64) {
    if t == 1 && !tag.inverts_two() {
        eprintln!("warning: 2 is not invertible in {tag}; the Lee deformation is computed anyway");
    }
}

fn closure_for(d: &VTangleDiagram, close: Option<Close>) -> Result<Option<ClosureKind>, Failure> {
    if d.is_closed() {
        return Ok(None);
    }
    match close {
        Some(c) => Ok(Some(c.into())),
        None => Err(Failure::Usage(format!(
            "tangle with k={} boundary points needs --close star|alt",
            d.boundary_count()
        ))),
    }
}

fn build(d: &VTangleDiagram, kind: Option<ClosureKind>, marker: XMarker) -> Result<GeometricComplex, Failure> {
    let opts = CubeOptions { xmarkers: vec![marker; d.crossing_count()], ..Default::default() };
    Ok(match kind {
        None => GeometricComplex::build(d, &opts)?,
        Some(k) => GeometricComplex::build_tangle(d, k, &opts)?,
    })
}

fn summary_text(h: &HomologySummary) -> String {
    let mut out = String::new();
    for (i, g) in &h.degrees {
        let mut parts = Vec::new();
        if g.rank > 0 {
            parts.push(if g.rank == 1 { h.ring.clone() } else { format!("{}^{}", h.ring, g.rank) });
        }
        parts.extend(g.torsion.iter().map(|d| format!("Z/{d}")));
        let group = if parts.is_empty() { "0".to_string() } else { parts.join(" + ") };
        let _ = writeln!(out, "H^{i} = {group}");
    }
    if let Some(e) = &h.euler {
        let _ = writeln!(out, "euler: {e}");
    }
    out
}

fn cmd_homology(file: &Path, ring: &str, t: i64, close: Option<Close>, marker: XMarker) -> Result<Report, Failure> {
    let tag = parse_ring(ring)?;
    let d = load(file)?;
    let kind = closure_for(&d, close)?;
    warn_lee(tag, t);
    let gc = build(&d, kind, marker)?;
    let h = homology_over(tag, &gc, t)?;
    let text = format!("# {}  ring {}  t={}\n{}", d.name(), h.ring, h.t, summary_text(&h));
    let json = serde_json::to_value(&h).expect("homology summaries serialize");
    Ok(Report::ok(text, json))
}

fn cmd_verify(file: &Path, close: Option<Close>, marker: XMarker) -> Result<Report, Failure> {
    let d = load(file)?;
    let kinds: Vec<Option<ClosureKind>> = if d.is_closed() {
        vec![None]
    } else if let Some(c) = close {
        vec![Some(c.into())]
    } else {
        vec![Some(ClosureKind::Star), Some(ClosureKind::Alternate)]
    };
    let mut text = format!("# {}\n", d.name());
    let mut checks = Vec::new();
    let mut failed = false;
    for kind in kinds {
        let gc = build(&d, kind, marker)?;
        let label = match kind {
            None => "closed".to_string(),
            Some(k) => format!("{k:?} closure").to_lowercase(),
        };
        for t in [0, 1] {
            let (faces, face_ok, face_msg) = match check_faces(&gc, t) {
                Ok(n) => (n, true, String::new()),
                Err(e) => (0, false, e.to_string()),
            };
            let cc = apply_tqft::<Z>(&gc, t).map_err(|e| Failure::Usage(e.to_string()))?;
            let bad = cc.d_squared_failures();
            let verdict = |ok: bool| if ok { "PASS" } else { "FAIL" };
            failed |= !face_ok || !bad.is_empty();
            let _ = writeln!(text, "{label} t={t}: faces {} {}  d∘d over Z {}", faces, verdict(face_ok), verdict(bad.is_empty()));
            if !face_ok {
                let _ = writeln!(text, "  {face_msg}");
            }
            checks.push(json!({
                "closure": label,
                "t": t,
                "faces": faces,
                "faces_verdict": verdict(face_ok),
                "d_squared": verdict(bad.is_empty()),
                "d_squared_failures": bad,
            }));
        }
    }
    let mut json = json!({"diagram": d.name(), "checks": checks});
    if !d.is_closed() {
        let report = compare_closures(&d)?;
        let niceness = is_nice(&d).map_err(|e| Failure::Parse(e.to_string()))?;
        let closures = match &report.verdict {
            ClosureVerdict::Ok => "OK".to_string(),
            ClosureVerdict::Mismatch { source, crossing } => format!("MISMATCH at {source}, crossing {crossing}"),
        };
        let _ = writeln!(text, "closures: {closures}\nniceness: {niceness:?}");
        json["closures"] = json!(closures);
        json["niceness"] = json!(format!("{niceness:?}"));
    }
    json["verdict"] = json!(if failed { "FAIL" } else { "PASS" });
    let _ = writeln!(text, "{}", if failed { "FAIL" } else { "PASS" });
    Ok(Report { text, json, code: if failed { 3 } else { 0 } })
}

fn cmd_glue(circuit: &Path, files: &[PathBuf], strict: bool, ring: &str, t: i64, kind: ClosureKind) -> Result<Report, Failure> {
    let tag = parse_ring(ring)?;
    let cd = parse_circuit(&read(circuit)?).map_err(|e| match e {
        e if e.is_parse() => Failure::Parse(format!("{}: {e}", circuit.display())),
        e => Failure::from(e),
    })?;
    let inputs = files.iter().map(|f| load(f)).collect::<Result<Vec<_>, _>>()?;
    warn_lee(tag, t);
    let report = compare_glued(&cd, &inputs, kind, tag, t, strict)?;
    let mut text = String::new();
    let mut niceness = Vec::new();
    for (f, d) in files.iter().zip(&inputs) {
        let n = if d.is_closed() { Niceness::Nice } else { is_nice(d).map_err(|e| Failure::Parse(e.to_string()))? };
        let _ = writeln!(text, "input {}: {} ({n:?})", f.display(), d.name());
        niceness.push(json!({"file": f.display().to_string(), "niceness": format!("{n:?}")}));
    }
    let verdict = match report.verdict {
        NtVerdict::Equal => "EQUAL".to_string(),
        NtVerdict::Unequal { .. } => "UNEQUAL".to_string(),
    };
    let red = report.report.strings.iter().filter(|s| s.state.is_none() && s.dot == vkh::circuit::Dot::Red).count();
    let _ = write!(text, "glued:\n{}direct:\n{}", summary_text(&report.glued), summary_text(&report.direct));
    if let Some(iso) = report.chain_isomorphic {
        let _ = writeln!(text, "chain isomorphism: {}", if iso { "found" } else { "none" });
    }
    if let NtVerdict::Unequal { degree: Some(i) } = report.verdict {
        let _ = writeln!(text, "first difference in degree {i}");
    }
    let _ = writeln!(text, "red strands: {red}  bolts: {}\n{verdict}", report.report.bolts.len());
    let json = json!({
        "verdict": verdict,
        "first_difference": match report.verdict { NtVerdict::Unequal { degree } => json!(degree), NtVerdict::Equal => Value::Null },
        "glued": report.glued,
        "direct": report.direct,
        "chain_isomorphic": report.chain_isomorphic,
        "inputs": niceness,
        "red_strands": red,
        "bolts": report.report.bolts.len(),
    });
    let code = if report.verdict == NtVerdict::Equal { 0 } else { 3 };
    Ok(Report { text, json, code })
}

fn cmd_invariance(
    file: &Path,
    count: usize,
    seed: u64,
    ring: &str,
    classical_only: bool,
    close: Option<Close>,
    marker: XMarker,
) -> Result<Report, Failure> {
    let tag = parse_ring(ring)?;
    let d = load(file)?;
    let kind = closure_for(&d, close)?;
    let kinds: Vec<MoveKind> = MoveKind::ALL.into_iter().filter(|k| !classical_only || k.is_classical()).collect();
    let invariants = |d: &VTangleDiagram| -> Result<(Vec<HomologySummary>, String), Failure> {
        let gc = build(d, kind, marker)?;
        let hs = [0, 1].into_iter().map(|t| homology_over(tag, &gc, t)).collect::<Result<Vec<_>, _>>()?;
        let jones = graded_euler(&apply_tqft::<Z>(&gc, 0).map_err(|e| Failure::Usage(e.to_string()))?)
            .map_err(|e| Failure::Invariant(e.to_string()))?;
        Ok((hs, jones.to_string()))
    };
    let (base, base_jones) = invariants(&d)?;
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let mut text = format!("# {}  seed {seed}  ring {tag}  moves {count}\njones: {base_jones}\n", d.name());
    let mut rows = Vec::new();
    let mut failed = false;
    for (i, app) in random_moves(&d, count, &kinds, &mut rng).into_iter().enumerate() {
        match app {
            Err(e) => {
                let _ = writeln!(text, "{}. skipped: {e}", i + 1);
                rows.push(json!({"skipped": e.to_string()}));
            }
            Ok(app) => {
                let (hs, jones) = invariants(&app.after)?;
                let same: Vec<bool> = base.iter().zip(&hs).map(|(a, b)| a.same_groups(b)).collect();
                let ok = same.iter().all(|&s| s) && jones == base_jones;
                failed |= !ok;
                let v = |b: bool| if b { "EQUAL" } else { "UNEQUAL" };
                let _ = writeln!(
                    text,
                    "{}. {} at arcs {:?}: {} crossings, t=0 {}, t=1 {}, jones {}",
                    i + 1,
                    app.kind,
                    app.sites,
                    app.after.crossing_count(),
                    v(same[0]),
                    v(same[1]),
                    v(jones == base_jones)
                );
                rows.push(json!({
                    "kind": app.kind.to_string(),
                    "sites": app.sites,
                    "crossings": app.after.crossing_count(),
                    "t0": v(same[0]),
                    "t1": v(same[1]),
                    "jones": v(jones == base_jones),
                }));
            }
        }
    }
    let verdict = if failed { "UNEQUAL" } else { "EQUAL" };
    let _ = writeln!(text, "{verdict}");
    let json = json!({
        "seed": seed,
        "ring": tag.to_string(),
        "jones": base_jones,
        "before": base,
        "moves": rows,
        "verdict": verdict,
    });
    Ok(Report { text, json, code: if failed { 3 } else { 0 } })
}

fn cmd_nonalt(file: &Path) -> Result<Report, Failure> {
    let d = load(file)?;
    if !d.is_closed() {
        return Err(Failure::Usage(format!("nonalt needs a closed diagram, got k={}", d.boundary_count())));
    }
    let p = lee_generator_prediction(&d).map_err(|e| Failure::Parse(e.to_string()))?;
    let na = d.non_alternating_resolutions().map_err(|e| Failure::Parse(e.to_string()))?;
    let n = d.component_count();
    let mut text = format!("# {}\ncomponents: {n}  orientations: {}\n", d.name(), 1usize << n);
    let mut rows = Vec::new();
    for r in &na {
        let mask: String = r.orientation.iter().map(|&f| if f { '1' } else { '0' }).collect();
        let _ = writeln!(text, "orientation {mask:>1} -> state {}", fmt_state(&r.state));
        rows.push(json!({"orientation": mask, "state": fmt_state(&r.state)}));
    }
    let states: Vec<String> = p.states.iter().map(fmt_state).collect();
    let degrees: serde_json::Map<String, Value> = p.degrees.iter().map(|(k, v)| (k.to_string(), json!(v))).collect();
    let _ = writeln!(text, "states: {}\npredicted Lee generators: {}", states.join(" "), p.generators);
    for (k, v) in &p.degrees {
        let _ = writeln!(text, "  degree {k}: {v}");
    }
    let json = json!({
        "components": n,
        "orientations": 1usize << n,
        "generators": p.generators,
        "states": states,
        "degrees": degrees,
        "resolutions": rows,
    });
    Ok(Report::ok(text, json))
}

fn fmt_state(s: &vkh::State) -> String {
    let t = s.to_string();
    if t.is_empty() {
        "(empty)".to_string()
    } else {
        t
    }
}

fn cmd_jones(file: &Path, close: Option<Close>, marker: XMarker) -> Result<Report, Failure> {
    let d = load(file)?;
    let kind = closure_for(&d, close)?;
    let gc = build(&d, kind, marker)?;
    let cc = apply_tqft::<Z>(&gc, 0).map_err(|e| Failure::Usage(e.to_string()))?;
    let p = graded_euler(&cc).map_err(|e| Failure::Invariant(e.to_string()))?;
    let text = format!("# {}\n{p}\n", d.name());
    Ok(Report::ok(text, json!({"diagram": d.name(), "jones": p.to_string()})))
}
