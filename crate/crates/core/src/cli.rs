//! The `tangrid` command.
//!
//! Exit codes: 0 success, 1 validation failure, 2 usage or parse error.

use std::ffi::OsString;
use std::fs;
use std::io::Write;
use std::path::{Path, PathBuf};

use clap::{Args, Parser, Subcommand};

use crate::centers::{centers_report_model, reciprocal_check_model, triple_grid_report, wu_check};
use crate::dissection::{dissect_model, t_junction_residual, tiling_cells, validate, SquareTiling};
use crate::error::Error;
use crate::geometry::{
    classify, half_angle_tangents, incircle_with_tol, pitot_defect, relative_pitot_defect,
    ConvexQuad, Point2,
};
use crate::inverse::{normalize_with_tol, solve_trapezoid, NormalizedModel};
use crate::io::{
    to_canonical_json, AnyDissection, CellsDocument, DissectionDocument, QuadDocument,
};
use crate::random::{quad_from_tangent_angles, random_tangential, DEFAULT_MIN_GAP};
use crate::svg::{draw_cells, render_dissection, Canvas, RenderOptions};
use crate::transforms::{canonical_quad, CanonicalParams, GeneralParams};

#[derive(Parser, Debug)]
#[command(
    name = "tangrid",
    version,
    about = "Grid dissections of tangential quadrilaterals"
)]
struct Cli {
    /// Relative tolerance for tangency and parallelism.
    #[arg(long, global = true, default_value_t = crate::geometry::DEFAULT_TOL)]
    tol: f64,
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand, Debug)]
enum Command {
    /// Report class, Pitot defect and canonical parameters of a quad file.
    Check(InputArg),
    /// Dissect a quad into an n×n grid or along a square tiling.
    Dissect {
        #[command(flatten)]
        input: InputArg,
        #[arg(long, conflicts_with = "tiling", required_unless_present = "tiling")]
        n: Option<usize>,
        /// Tiling file {"squares": [[x0, y0, side], ...]}.
        #[arg(long)]
        tiling: Option<PathBuf>,
        #[arg(long)]
        out: Option<PathBuf>,
    },
    /// Re-check every cell of a dissection file.
    Verify(InputArg),
    /// Incenter, diagonal point and 2×2 center, plus the inradius relations.
    Centers(InputArg),
    /// Draw an n×n dissection as SVG.
    Render {
        #[command(flatten)]
        input: InputArg,
        #[arg(long, default_value_t = 3)]
        n: usize,
        #[arg(long)]
        svg: PathBuf,
        #[arg(long)]
        incircles: bool,
        #[arg(long)]
        centers: bool,
        #[arg(long)]
        triple_grid: bool,
    },
    /// Seeded random tangential quadrilaterals.
    Random {
        #[arg(long, default_value_t = 0)]
        seed: u64,
        #[arg(long, default_value_t = 1)]
        count: usize,
        #[arg(long, default_value_t = DEFAULT_MIN_GAP)]
        min_gap: f64,
        #[arg(long)]
        out: Option<PathBuf>,
    },
    /// Write the figure set into a directory.
    Demo {
        #[arg(long, default_value = "figures")]
        out_dir: PathBuf,
    },
}

#[derive(Args, Debug)]
struct InputArg {
    #[arg(long)]
    input: PathBuf,
}

enum Failure {
    Validation(String),
    Usage(String),
}

impl From<Error> for Failure {
    fn from(e: Error) -> Self {
        match e {
            Error::NonConvex(_) | Error::InvalidTiling(_) | Error::InvalidParams(_) => {
                Failure::Usage(e.to_string())
            }
            Error::GapInfeasible(_) => Failure::Usage(e.to_string()),
            _ => Failure::Validation(e.to_string()),
        }
    }
}

type CmdResult = std::result::Result<bool, Failure>;

/// Parse `args` (including the program name) and run; returns the exit code.
pub fn run<I, T>(args: I, out: &mut dyn Write, err: &mut dyn Write) -> i32
where
    I: IntoIterator<Item = T>,
    T: Into<OsString> + Clone,
{
    let cli = match Cli::try_parse_from(args) {
        Ok(c) => c,
        Err(e) => {
            let code = if e.use_stderr() { 2 } else { 0 };
            let _ = if code == 0 {
                write!(out, "{e}")
            } else {
                write!(err, "{e}")
            };
            return code;
        }
    };
    if !(cli.tol > 0.0) {
        let _ = writeln!(err, "error: --tol must be positive");
        return 2;
    }
    let result = match &cli.command {
        Command::Check(i) => check(&i.input, cli.tol, out),
        Command::Dissect {
            input,
            n,
            tiling,
            out: path,
        } => dissect_cmd(
            &input.input,
            *n,
            tiling.as_deref(),
            path.as_deref(),
            cli.tol,
            out,
        ),
        Command::Verify(i) => verify(&i.input, cli.tol, out),
        Command::Centers(i) => centers(&i.input, cli.tol, out),
        Command::Render {
            input,
            n,
            svg,
            incircles,
            centers,
            triple_grid,
        } => render(
            &input.input,
            *n,
            svg,
            RenderOptions {
                incircles: *incircles,
                centers: *centers,
                triple_grid: *triple_grid,
            },
            cli.tol,
            out,
        ),
        Command::Random {
            seed,
            count,
            min_gap,
            out: path,
        } => random_cmd(*seed, *count, *min_gap, path.as_deref(), out),
        Command::Demo { out_dir } => demo(out_dir, out),
    };
    match result {
        Ok(true) => 0,
        Ok(false) => 1,
        Err(Failure::Validation(m)) => {
            let _ = writeln!(err, "validation failed: {m}");
            1
        }
        Err(Failure::Usage(m)) => {
            let _ = writeln!(err, "error: {m}");
            2
        }
    }
}

fn read_json<T: serde::de::DeserializeOwned>(path: &Path) -> std::result::Result<T, Failure> {
    let text =
        fs::read_to_string(path).map_err(|e| Failure::Usage(format!("{}: {e}", path.display())))?;
    serde_json::from_str(&text).map_err(|e| Failure::Usage(format!("{}: {e}", path.display())))
}

fn write_file(path: &Path, contents: &str) -> std::result::Result<(), Failure> {
    fs::write(path, contents).map_err(|e| Failure::Usage(format!("{}: {e}", path.display())))
}

fn read_quad(path: &Path) -> std::result::Result<(QuadDocument, ConvexQuad), Failure> {
    let doc: QuadDocument = read_json(path)?;
    let q = doc
        .to_quad()
        .map_err(|e| Failure::Usage(format!("{}: {e}", path.display())))?;
    Ok((doc, q))
}

fn json_line<T: serde::Serialize>(v: &T) -> String {
    serde_json::to_string(v).unwrap_or_else(|_| "null".into())
}

fn describe_model(m: &NormalizedModel, out: &mut dyn Write) {
    let labels: Vec<usize> = (0..4).map(|i| m.input_index(i)).collect();
    let _ = writeln!(out, "kind: {:?}", m.kind);
    let _ = writeln!(
        out,
        "relabeling (A', B', C', D' = input vertices): {labels:?}"
    );
    if let Some(p) = &m.params {
        let (x, y, l) = p.triple();
        let _ = writeln!(out, "params: X = {x}, Y = {y}, L = {l}");
    }
    if let Some(o) = m.anchor_o {
        let _ = writeln!(out, "anchor O: ({}, {})", o.u, o.v);
    }
    if let Some(p) = m.anchor_p {
        let _ = writeln!(out, "anchor P: ({}, {})", p.u, p.v);
    }
}

fn check(path: &Path, tol: f64, out: &mut dyn Write) -> CmdResult {
    let (_, q) = read_quad(path)?;
    let rel = relative_pitot_defect(&q);
    let tangential = rel <= tol;
    let (ccw, _) = q.to_ccw();
    let _ = writeln!(out, "class: {:?}", classify(&ccw, tol));
    let _ = writeln!(out, "pitot_defect: {}", pitot_defect(&q));
    let _ = writeln!(out, "relative_defect: {rel}");
    let _ = writeln!(out, "tangential: {tangential}");
    if let Ok(t) = half_angle_tangents(&q) {
        let _ = writeln!(out, "half_angle_tangents: {:?}", t.0);
    }
    if !tangential {
        return Ok(false);
    }
    let c = incircle_with_tol(&q, tol)?;
    let _ = writeln!(
        out,
        "incircle: center ({}, {}), radius {}",
        c.center.u, c.center.v, c.radius
    );
    let model = normalize_with_tol(&q, tol)?;
    describe_model(&model, out);
    Ok(true)
}

fn dissect_cmd(
    path: &Path,
    n: Option<usize>,
    tiling: Option<&Path>,
    dest: Option<&Path>,
    tol: f64,
    out: &mut dyn Write,
) -> CmdResult {
    let (doc, q) = read_quad(path)?;
    let model = normalize_with_tol(&q, tol)?;
    describe_model(&model, out);
    let (text, report) = match (n, tiling) {
        (Some(n), _) => {
            let d = dissect_model(&model, n)?;
            let report = d.validate(tol);
            let doc = DissectionDocument::new(&d, doc, report.max_defect);
            (to_canonical_json(&doc), report)
        }
        (None, Some(tpath)) => {
            let t: SquareTiling = read_json(tpath)?;
            t.check()?;
            let cells = tiling_cells(&model, &t)?;
            let report = validate(&cells, tol);
            let _ = writeln!(
                out,
                "t_junction_residual: {}",
                t_junction_residual(&model, &t)?
            );
            let doc = CellsDocument {
                squares: t.squares.clone(),
                cells: cells.iter().map(|c| c.map(<[f64; 2]>::from)).collect(),
                source: doc,
                max_defect: report.max_defect,
            };
            (to_canonical_json(&doc), report)
        }
        (None, None) => return Err(Failure::Usage("need --n or --tiling".into())),
    };
    let text = text.map_err(|e| Failure::Usage(e.to_string()))?;
    let _ = writeln!(out, "cells: {}", report.defects.len());
    let _ = writeln!(out, "max_defect: {}", report.max_defect);
    match dest {
        Some(p) => write_file(p, &text)?,
        None => {
            let _ = out.write_all(text.as_bytes());
        }
    }
    Ok(report.passed())
}

fn verify(path: &Path, tol: f64, out: &mut dyn Write) -> CmdResult {
    let doc: AnyDissection = read_json(path)?;
    let cells = match &doc {
        AnyDissection::Grid(g) => g.cells().map_err(Failure::Usage)?,
        AnyDissection::Cells(c) => c.cells(),
    };
    let report = validate(&cells, tol);
    let _ = writeln!(out, "cells: {}", report.defects.len());
    let _ = writeln!(out, "max_defect: {}", report.max_defect);
    let _ = writeln!(out, "failing: {:?}", report.failing);
    let _ = writeln!(out, "{}", if report.passed() { "PASS" } else { "FAIL" });
    Ok(report.passed())
}

fn centers(path: &Path, tol: f64, out: &mut dyn Write) -> CmdResult {
    let (_, q) = read_quad(path)?;
    let model = normalize_with_tol(&q, tol)?;
    let rep = centers_report_model(&model)?;
    let rec = reciprocal_check_model(&model)?;
    let wu = wu_check(&q)?;
    let _ = writeln!(out, "centers: {}", json_line(&rep));
    let _ = writeln!(out, "reciprocal: {}", json_line(&rec));
    let _ = writeln!(out, "wu: {}", json_line(&wu));
    if let Ok(d) = dissect_model(&model, 3) {
        if let Ok(tg) = triple_grid_report(&d) {
            let _ = writeln!(out, "triple_grid_3x3: {}", json_line(&tg));
        }
    }
    Ok(true)
}

fn render(
    path: &Path,
    n: usize,
    svg: &Path,
    opts: RenderOptions,
    tol: f64,
    out: &mut dyn Write,
) -> CmdResult {
    let (_, q) = read_quad(path)?;
    let model = normalize_with_tol(&q, tol)?;
    let d = dissect_model(&model, n)?;
    let text = render_dissection(&d, opts)?;
    write_file(svg, &text)?;
    let _ = writeln!(out, "wrote {}", svg.display());
    Ok(true)
}

fn random_cmd(
    seed: u64,
    count: usize,
    min_gap: f64,
    dest: Option<&Path>,
    out: &mut dyn Write,
) -> CmdResult {
    if count == 0 {
        return Err(Failure::Usage("--count must be at least 1".into()));
    }
    let quads = random_tangential(seed, count, min_gap)?;
    let docs: Vec<QuadDocument> = quads
        .iter()
        .enumerate()
        .map(|(i, q)| {
            let mut d = QuadDocument::from_quad(q).with_label(format!("random-{seed}-{i}"));
            d.seed = Some(seed);
            d
        })
        .collect();
    let text = to_canonical_json(&docs).map_err(|e| Failure::Usage(e.to_string()))?;
    match dest {
        Some(p) => write_file(p, &text)?,
        None => {
            let _ = out.write_all(text.as_bytes());
        }
    }
    Ok(true)
}

/// The figure set, as `(file name, svg)`.
pub fn demo_figures() -> crate::error::Result<Vec<(&'static str, String)>> {
    let generic = quad_from_tangent_angles(&[0.35, 1.95, 3.3, 4.75])?;
    let all = RenderOptions {
        incircles: true,
        centers: false,
        triple_grid: false,
    };

    // 3×3 dissection with incircles.
    let model = crate::inverse::normalize(&generic)?;
    let fig1 = render_dissection(&dissect_model(&model, 3)?, all)?;

    // Trapezoid: vertical grid lines stay vertical, horizontal ones meet at O.
    let tp = CanonicalParams::Trapezoid(solve_trapezoid(-0.3, 0.9)?);
    let tq = canonical_quad(&tp)?;
    let tmodel = crate::inverse::normalize(&tq)?;
    let td = dissect_model(&tmodel, 4)?;
    let mut fit: Vec<Point2> = tq.vertices().to_vec();
    fit.push(Point2::ORIGIN);
    let mut c7 = Canvas::fitted(&fit);
    for j in 0..=td.n {
        c7.line(Point2::ORIGIN, td.point(td.n, j), "ray", "#999999");
    }
    draw_cells(&mut c7, &td, RenderOptions::default())?;
    c7.marker(Point2::ORIGIN, "anchor", "#000000");
    c7.label(Point2::ORIGIN, "O");
    let fig7 = c7.finish();

    // General map: rows through O, columns through P.
    let gp = CanonicalParams::General(GeneralParams::new(1.6, 1.4, 2.2)?);
    let gq = canonical_quad(&gp)?;
    let gmodel = crate::inverse::normalize(&gq)?;
    let gd = dissect_model(&gmodel, 4)?;
    let (o, p) = (Point2::ORIGIN, Point2::new(1.0, 0.0));
    let mut fit: Vec<Point2> = gq.vertices().to_vec();
    fit.extend([o, p]);
    let mut c8 = Canvas::fitted(&fit);
    for i in 0..=gd.n {
        for end in [0, gd.n] {
            c8.line(o, gd.point(end, i), "ray", "#999999");
            c8.line(p, gd.point(i, end), "ray", "#999999");
        }
    }
    draw_cells(&mut c8, &gd, RenderOptions::default())?;
    c8.marker(o, "anchor", "#000000");
    c8.marker(p, "anchor", "#000000");
    c8.label(o, "O");
    c8.label(p, "P");
    let fig8 = c8.finish();

    // Centers on one line perpendicular to OP.
    let cd = dissect_model(&gmodel, 2)?;
    let rep = centers_report_model(&gmodel)?;
    let mut c9 = Canvas::fitted(gq.vertices());
    draw_cells(&mut c9, &cd, RenderOptions::default())?;
    let ic = incircle_with_tol(&gq, 1e-9)?;
    c9.circle(ic.center, ic.radius, "incircle", "none", "#2a6fb0");
    c9.line(gq.vertex(0), gq.vertex(2), "diagonal", "#c0392b");
    c9.line(gq.vertex(1), gq.vertex(3), "diagonal", "#c0392b");
    let top = Point2::new(rep.incenter.u, gq.vertex(0).v.max(gq.vertex(2).v));
    let bottom = Point2::new(rep.incenter.u, gq.vertex(0).v.min(gq.vertex(2).v));
    c9.line(bottom, top, "center-line", "#000000");
    c9.marker(rep.incenter, "center-incenter", "#2e8b57");
    c9.marker(rep.diagonal_point, "center-diagonal", "#c0392b");
    c9.marker(rep.grid_center, "center-grid", "#7d3c98");
    let fig9 = c9.finish();

    // Triple grid.
    let fig10 = render_dissection(
        &dissect_model(&model, 3)?,
        RenderOptions {
            incircles: false,
            centers: false,
            triple_grid: true,
        },
    )?;

    Ok(vec![
        ("fig1_grid3.svg", fig1),
        ("fig7_trapezoid.svg", fig7),
        ("fig8_general.svg", fig8),
        ("fig9_centers.svg", fig9),
        ("fig10_triple_grid.svg", fig10),
    ])
}

fn demo(dir: &Path, out: &mut dyn Write) -> CmdResult {
    fs::create_dir_all(dir).map_err(|e| Failure::Usage(format!("{}: {e}", dir.display())))?;
    for (name, svg) in demo_figures()? {
        let path = dir.join(name);
        write_file(&path, &svg)?;
        let _ = writeln!(out, "wrote {}", path.display());
    }
    Ok(true)
}
