use std::fs;
use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand};
use serde_json::json;

use equidistant::chained::{chained_components, check_hypotheses, closest_pair, is_chained};
use equidistant::geometry::{GeometryError, PointSet, Tolerance};
use equidistant::io::{
    emit_svg, parse_csv_points, parse_problem, CurveDocument, FaceInfo, Options, ProblemError, ProblemSpec, SvgLayer,
    ToleranceOverrides,
};
use equidistant::offset::{face_graph, offset_boundary, OffsetError};
use equidistant::oracle::{
    build_distance_grid, default_resolution, grid_boundary, grid_components, match_polyline, OracleError,
};
use equidistant::separation::{
    midway_curve, outer_curve, separate_components, separating_curve, some_simple_closed_curve, verify_separation,
    SeparationError,
};

const EXIT_OBSTRUCTION: u8 = 2;
const EXIT_INPUT: u8 = 3;
const EXIT_INTERNAL: u8 = 4;

#[derive(Parser)]
#[command(
    name = "equidistant",
    version,
    about = "Equidistant Jordan curves around finite planar point sets"
)]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Partition all points (or set A with --only-a) into δ-chained components.
    Components(Common),
    /// Distance between sets A and B and a closest pair.
    Distance(Common),
    /// Outer boundary curve of the ε-neighbourhood of A.
    Outer(Common),
    /// Curve in the ε-boundary of A separating A from B.
    Separate(Common),
    /// Separating curve at ε = ρ(A,B)/2.
    Midway(Common),
    /// Separate every pair of 2ε-chained components of all points.
    SeparateAll(Common),
    /// Some simple closed curve in the ε-boundary of all points.
    Exists(Common),
    /// Report the hypotheses for A and B without constructing anything.
    Check(Common),
    /// Draw the full ε-boundary of A, plus B if given, as SVG.
    Render(Common),
    /// Compare the exact boundary of A with the raster oracle.
    OracleCompare(Common),
}

#[derive(Args)]
struct Common {
    /// Problem file with "epsilon", "sets" and "options".
    #[arg(long)]
    input: Option<PathBuf>,
    /// Add or replace a set from a two-column CSV file.
    #[arg(long = "set", value_name = "NAME=FILE")]
    sets: Vec<String>,
    #[arg(long, allow_negative_numbers = true)]
    epsilon: Option<f64>,
    /// Write the document here instead of stdout.
    #[arg(long)]
    out: Option<PathBuf>,
    /// Also write an SVG rendering.
    #[arg(long)]
    svg: Option<PathBuf>,
    /// Oracle cell size.
    #[arg(long, allow_negative_numbers = true)]
    grid_res: Option<f64>,
    /// Tolerance override, e.g. dist=1e-8 (keys: join, isect, dist).
    #[arg(long = "tol", value_name = "KEY=VALUE")]
    tol: Vec<String>,
    #[arg(long)]
    seed: Option<u64>,
    /// Skip hypothesis enforcement and let geometric obstructions surface.
    #[arg(long)]
    force: bool,
    /// Chain threshold for `components`; defaults to 2ε.
    #[arg(long, allow_negative_numbers = true)]
    delta: Option<f64>,
    /// Name of the first set.
    #[arg(long, default_value = "A")]
    a: String,
    /// Name of the second set.
    #[arg(long, default_value = "B")]
    b: String,
    /// Use only set A in `components`, `separate-all` and `exists`.
    #[arg(long)]
    only_a: bool,
    /// Dump the oracle grid as a plain grey map.
    #[arg(long)]
    pgm: Option<PathBuf>,
}

struct Failure {
    code: u8,
    message: String,
}

impl Failure {
    fn input(message: impl Into<String>) -> Self {
        Failure {
            code: EXIT_INPUT,
            message: message.into(),
        }
    }

    fn internal(message: impl Into<String>) -> Self {
        Failure {
            code: EXIT_INTERNAL,
            message: message.into(),
        }
    }
}

impl From<ProblemError> for Failure {
    fn from(e: ProblemError) -> Self {
        Failure::input(e.to_string())
    }
}

impl From<GeometryError> for Failure {
    fn from(e: GeometryError) -> Self {
        Failure::internal(e.to_string())
    }
}

impl From<OracleError> for Failure {
    fn from(e: OracleError) -> Self {
        Failure::input(e.to_string())
    }
}

impl From<OffsetError> for Failure {
    fn from(e: OffsetError) -> Self {
        match e {
            OffsetError::InvalidEpsilon(_) | OffsetError::Chain(_) => Failure::input(e.to_string()),
            OffsetError::NotInComplement { .. } => Failure {
                code: EXIT_OBSTRUCTION,
                message: e.to_string(),
            },
            _ => Failure::internal(e.to_string()),
        }
    }
}

impl From<SeparationError> for Failure {
    fn from(e: SeparationError) -> Self {
        match e {
            _ if e.is_hypothesis_failure() => Failure {
                code: EXIT_OBSTRUCTION,
                message: e.to_string(),
            },
            SeparationError::Chain(_) => Failure::input(e.to_string()),
            SeparationError::Offset(inner) => inner.into(),
            _ => Failure::internal(e.to_string()),
        }
    }
}

impl From<equidistant::chained::ChainError> for Failure {
    fn from(e: equidistant::chained::ChainError) -> Self {
        Failure::input(e.to_string())
    }
}

fn read(path: &PathBuf) -> Result<String, Failure> {
    fs::read_to_string(path).map_err(|e| Failure::input(format!("{}: {e}", path.display())))
}

fn write(path: &PathBuf, text: &str) -> Result<(), Failure> {
    fs::write(path, text).map_err(|e| Failure::internal(format!("{}: {e}", path.display())))
}

struct Loaded {
    spec: ProblemSpec,
    tol: Tolerance,
}

impl Loaded {
    fn set(&self, name: &str) -> Result<&PointSet, Failure> {
        Ok(self.spec.set(name)?)
    }

    fn epsilon(&self) -> Result<f64, Failure> {
        Ok(self.spec.epsilon()?)
    }

    fn force(&self) -> bool {
        self.spec.options.force
    }
}

fn load(args: &Common) -> Result<Loaded, Failure> {
    let (mut epsilon, mut sets, mut options) = match &args.input {
        Some(path) => {
            let parsed = parse_problem(&read(path)?)?;
            if parsed.duplicates > 0 {
                eprintln!("warning: removed {} duplicate point(s)", parsed.duplicates);
            }
            let spec = parsed.spec;
            let sets: Vec<_> = spec.sets.into_iter().map(|(k, v)| (k, v.points().to_vec())).collect();
            (spec.epsilon, sets, spec.options)
        }
        None => (None, Vec::new(), Options::default()),
    };
    for entry in &args.sets {
        let (name, file) = entry
            .split_once('=')
            .ok_or_else(|| Failure::input(format!("--set expects NAME=FILE, got {entry:?}")))?;
        let points =
            parse_csv_points(&read(&PathBuf::from(file))?).map_err(|e| Failure::input(format!("{file}: {e}")))?;
        sets.retain(|(n, _)| n != name);
        sets.push((name.to_string(), points));
    }
    if sets.is_empty() {
        return Err(Failure::input("no point sets given; use --input or --set"));
    }
    epsilon = args.epsilon.or(epsilon);
    if let Some(h) = args.grid_res {
        options.grid_res = Some(h);
    }
    if let Some(seed) = args.seed {
        options.seed = Some(seed);
    }
    options.force |= args.force;
    for entry in &args.tol {
        let (key, value) = entry
            .split_once('=')
            .ok_or_else(|| Failure::input(format!("--tol expects KEY=VALUE, got {entry:?}")))?;
        let value: f64 = value
            .parse()
            .map_err(|_| Failure::input(format!("--tol {key}: not a number: {value:?}")))?;
        let o = options.tolerance.get_or_insert_with(ToleranceOverrides::default);
        match key {
            "join" => o.join = Some(value),
            "isect" => o.isect = Some(value),
            "dist" => o.dist = Some(value),
            _ => return Err(Failure::input(format!("unknown tolerance {key:?}"))),
        }
    }
    let parsed = ProblemSpec::from_sets(epsilon, sets, options)?;
    if parsed.duplicates > 0 && args.input.is_none() {
        eprintln!("warning: removed {} duplicate point(s)", parsed.duplicates);
    }
    let tol = parsed.spec.tolerance()?;
    Ok(Loaded { spec: parsed.spec, tol })
}

fn emit(args: &Common, text: &str) -> Result<(), Failure> {
    match &args.out {
        Some(path) => write(path, text),
        None => {
            print!("{text}");
            Ok(())
        }
    }
}

fn json_text(value: &serde_json::Value) -> String {
    let mut text = serde_json::to_string_pretty(value).expect("json serializes");
    text.push('\n');
    text
}

/// The set used by commands that act on a single point set.
fn all_points(l: &Loaded, args: &Common) -> Result<PointSet, Failure> {
    if args.only_a {
        Ok(l.set(&args.a)?.clone())
    } else {
        Ok(l.spec.union())
    }
}

fn run(command: &Command) -> Result<(), Failure> {
    let (name, args) = match command {
        Command::Components(a) => ("components", a),
        Command::Distance(a) => ("distance", a),
        Command::Outer(a) => ("outer", a),
        Command::Separate(a) => ("separate", a),
        Command::Midway(a) => ("midway", a),
        Command::SeparateAll(a) => ("separate-all", a),
        Command::Exists(a) => ("exists", a),
        Command::Check(a) => ("check", a),
        Command::Render(a) => ("render", a),
        Command::OracleCompare(a) => ("oracle-compare", a),
    };
    let l = load(args)?;
    let tol = l.tol;
    let mut doc = CurveDocument::new(name, tol.seed);
    let mut svg_curves = Vec::new();
    match command {
        Command::Components(_) => {
            let m = all_points(&l, args)?;
            let delta = match args.delta {
                Some(d) => d,
                None => 2.0 * l.epsilon()?,
            };
            let partition = chained_components(&m, delta)?;
            let blocks: Vec<Vec<[f64; 2]>> = partition
                .blocks
                .iter()
                .map(|b| b.iter().map(|p| [p.x, p.y]).collect())
                .collect();
            return emit(
                args,
                &json_text(&json!({ "threshold": delta, "count": blocks.len(), "blocks": blocks })),
            );
        }
        Command::Distance(_) => {
            let (p, q, rho) = closest_pair(l.set(&args.a)?, l.set(&args.b)?);
            return emit(
                args,
                &json_text(&json!({ "rho_AB": rho, "closest_pair": [[p.x, p.y], [q.x, q.y]] })),
            );
        }
        Command::Check(_) => {
            let a = l.set(&args.a)?;
            let eps = l.epsilon()?;
            let value = match l.spec.sets.get(&args.b) {
                Some(b) => serde_json::to_value(check_hypotheses(a, b, eps)?).expect("report serializes"),
                None => json!({ "epsilon": eps, "a_chained": is_chained(a, 2.0 * eps)? }),
            };
            return emit(args, &json_text(&value));
        }
        Command::Outer(_) => {
            let eps = l.epsilon()?;
            let curve = outer_curve(l.set(&args.a)?, eps, &tol)?;
            doc.metadata.epsilon = Some(eps);
            doc.push(&curve, "outer");
            svg_curves.push(curve);
        }
        Command::Separate(_) => {
            let (a, b) = (l.set(&args.a)?, l.set(&args.b)?);
            let eps = l.epsilon()?;
            let r = separating_curve(a, b, eps, &tol, l.force())?;
            let report = verify_separation(&r.curve, a, b, &tol)?;
            if !report.passed {
                return Err(Failure::internal(format!(
                    "verification failed: {}",
                    report.failures.join("; ")
                )));
            }
            doc.metadata.epsilon = Some(eps);
            doc.metadata.rho_ab = Some(r.hypothesis.rho_ab);
            doc.metadata.face = Some(FaceInfo {
                id: r.face,
                bounded: r.face_bounded,
            });
            doc.metadata.hypothesis = Some(r.hypothesis);
            doc.metadata.verification = Some(report);
            doc.push(&r.curve, "separating");
            svg_curves.push(r.curve);
        }
        Command::Midway(_) => {
            let (a, b) = (l.set(&args.a)?, l.set(&args.b)?);
            let m = midway_curve(a, b, &tol, l.force())?;
            let report = verify_separation(m.curve(), a, b, &tol)?;
            if !report.passed {
                return Err(Failure::internal(format!(
                    "verification failed: {}",
                    report.failures.join("; ")
                )));
            }
            doc.metadata.epsilon = Some(m.separation.epsilon);
            doc.metadata.rho_ab = Some(m.rho_ab);
            doc.metadata.face = Some(FaceInfo {
                id: m.separation.face,
                bounded: m.separation.face_bounded,
            });
            doc.metadata.hypothesis = Some(m.separation.hypothesis.clone());
            doc.metadata.verification = Some(report);
            doc.push(m.curve(), "midway");
            svg_curves.push(m.separation.curve);
        }
        Command::SeparateAll(_) => {
            let m = all_points(&l, args)?;
            let eps = l.epsilon()?;
            let (_, pairs) = separate_components(&m, eps, &tol)?;
            doc.metadata.epsilon = Some(eps);
            let mut worst: Option<Failure> = None;
            for pair in pairs {
                let (i, j) = pair.blocks;
                match pair.result {
                    Ok(r) => {
                        doc.push(&r.curve, "separating").pair = Some([i, j]);
                        svg_curves.push(r.curve);
                    }
                    Err(e) => {
                        doc.metadata.notes.push(format!("blocks {i} and {j}: {e}"));
                        let f = Failure::from(e);
                        if worst.as_ref().is_none_or(|w| f.code > w.code) {
                            worst = Some(f);
                        }
                    }
                }
            }
            if let Some(f) = worst {
                emit(args, &doc.to_json())?;
                return Err(f);
            }
        }
        Command::Exists(_) => {
            let m = all_points(&l, args)?;
            let eps = l.epsilon()?;
            let curve = some_simple_closed_curve(&m, eps, &tol)?;
            doc.metadata.epsilon = Some(eps);
            doc.push(&curve, "boundary");
            svg_curves.push(curve);
        }
        Command::Render(_) => {
            let eps = l.epsilon()?;
            let ob = offset_boundary(l.set(&args.a)?, eps, &tol)?;
            let curves = ob.cycles().to_vec();
            let svg = render(&l, args, &curves);
            return match &args.svg {
                Some(path) => write(path, &svg),
                None => emit(args, &svg),
            };
        }
        Command::OracleCompare(_) => return oracle_compare(&l, args),
    }
    emit(args, &doc.to_json())?;
    if let Some(path) = &args.svg {
        write(path, &render(&l, args, &svg_curves))?;
    }
    Ok(())
}

fn render(l: &Loaded, args: &Common, curves: &[equidistant::geometry::ArcCycle]) -> String {
    let mut layers: Vec<SvgLayer> = curves
        .iter()
        .map(|c| SvgLayer::Curve {
            class: "result",
            curve: c,
        })
        .collect();
    if let Some(a) = l.spec.sets.get(&args.a) {
        layers.push(SvgLayer::Points { class: "set-a", set: a });
    }
    if let Some(b) = l.spec.sets.get(&args.b) {
        layers.push(SvgLayer::Points { class: "set-b", set: b });
    }
    emit_svg(&layers)
}

fn oracle_compare(l: &Loaded, args: &Common) -> Result<(), Failure> {
    let a = l.set(&args.a)?;
    let eps = l.epsilon()?;
    let tol = l.tol;
    let h = l
        .spec
        .options
        .grid_res
        .unwrap_or_else(|| default_resolution(&a.bbox(), eps));
    let ob = offset_boundary(a, eps, &tol)?;
    let fg = face_graph(&ob, &tol)?;
    let grid = build_distance_grid(a, eps, h)?;
    if let Some(path) = &args.pgm {
        write(path, &grid.to_pgm())?;
    }
    let components = grid_components(&grid);
    let polylines = grid_boundary(&grid);
    let bound = 2.0 * h * std::f64::consts::SQRT_2;
    let mut cycles = Vec::new();
    let mut agree = fg.bounded_faces() == components.bounded_count() && polylines.len() == ob.cycles().len();
    for curve in ob.cycles() {
        let hausdorff = match match_polyline(curve, &polylines) {
            Some((_, d)) => d,
            None => f64::INFINITY,
        };
        agree &= hausdorff <= bound;
        cycles.push(json!({ "kind": curve.kind(), "arcs": curve.len(), "hausdorff": hausdorff }));
    }
    let report = json!({
        "epsilon": eps,
        "cell_size": h,
        "bounded_faces": fg.bounded_faces(),
        "grid_bounded_components": components.bounded_count(),
        "exact_cycles": ob.cycles().len(),
        "grid_polylines": polylines.len(),
        "hausdorff_bound": bound,
        "cycles": cycles,
        "agree": agree,
    });
    emit(args, &json_text(&report))?;
    if agree {
        Ok(())
    } else {
        Err(Failure::internal("exact boundary and oracle disagree"))
    }
}

fn main() -> ExitCode {
    let cli = match Cli::try_parse() {
        Ok(cli) => cli,
        Err(e) => {
            let code = if e.use_stderr() { EXIT_INPUT } else { 0 };
            let _ = e.print();
            return ExitCode::from(code);
        }
    };
    match run(&cli.command) {
        Ok(()) => ExitCode::SUCCESS,
        Err(f) => {
            eprintln!("error: {}", f.message);
            ExitCode::from(f.code)
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use clap::CommandFactory;

    #[test]
    fn cli_definition_is_consistent() {
        Cli::command().debug_assert();
    }
}
