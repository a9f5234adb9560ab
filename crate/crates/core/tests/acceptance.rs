//! Acceptance criteria. Runs without the libtest harness so that one
//! PASS/FAIL line per criterion is always printed.

use std::f64::consts::SQRT_2;
use std::process::Command;

use tangential::centers::{
    centers_report, reciprocal_check, triple_grid_report, wu_check, CentersReport,
};
use tangential::dissection::{dissect, dissect_square_tiling, t_junction_residual, SquareTiling};
use tangential::geometry::{is_tangential, relative_pitot_defect, ConvexQuad, Point2};
use tangential::inverse::{normalize, solve_general, solve_trapezoid, tangents_from_params};
use tangential::random::{random_convex, random_tangential, Rng, DEFAULT_MIN_GAP};
use tangential::transforms::{
    canonical_quad, local_condition_residual, side_length_oracle, CanonicalParams, GeneralParams,
    MapKind, MulPoint,
};

type Outcome = Result<String, String>;
type Criterion = (&'static str, fn() -> Outcome);

fn ensure(cond: bool, msg: impl FnOnce() -> String) -> Result<(), String> {
    if cond {
        Ok(())
    } else {
        Err(msg())
    }
}

fn general(x: f64, y: f64, l: f64) -> CanonicalParams {
    CanonicalParams::General(GeneralParams::new(x, y, l).unwrap())
}

fn rel(a: f64, b: f64) -> f64 {
    (a - b).abs() / b.abs()
}

fn f3() -> ConvexQuad {
    let l = 1.0 + SQRT_2;
    ConvexQuad::from_coords([[1.0, 0.0], [l, 0.0], [l, l], [1.0, 1.0]]).unwrap()
}

fn criterion_1() -> Outcome {
    let q = canonical_quad(&general(2.0, 2.0, 2.0)).map_err(|e| e.to_string())?;
    let want = [
        Point2::new(0.5, 2.0 / 3.0),
        Point2::new(2.0 / 7.0, 8.0 / 21.0),
        Point2::new(0.5, 4.0 / 15.0),
        Point2::new(5.0 / 7.0, 8.0 / 21.0),
    ];
    let mut worst: f64 = 0.0;
    for (a, b) in q.vertices().iter().zip(want) {
        worst = worst.max((a.u - b.u).abs()).max((a.v - b.v).abs());
    }
    let sides = q.side_lengths();
    let oracle = side_length_oracle(&general(2.0, 2.0, 2.0));
    for ((s, o), w) in
        sides
            .iter()
            .zip(oracle)
            .zip([5.0 / 14.0, 17.0 / 70.0, 17.0 / 70.0, 5.0 / 14.0])
    {
        worst = worst.max((s - w).abs()).max((o - w).abs());
    }
    let sums = [sides[0] + sides[2], sides[1] + sides[3]];
    for s in sums {
        worst = worst.max((s - 0.6).abs());
    }
    ensure(worst <= 1e-12, || format!("max abs error {worst:e}"))?;
    Ok(format!("max abs error {worst:.1e}"))
}

fn criterion_2() -> Outcome {
    let p = solve_trapezoid(0.0, 1.0).map_err(|e| e.to_string())?;
    let l = 1.0 + SQRT_2;
    let mut worst = (p.base_y - 1.0).abs().max((p.ratio - l).abs());
    let q = canonical_quad(&CanonicalParams::Trapezoid(p)).map_err(|e| e.to_string())?;
    for (a, b) in q.vertices().iter().zip(f3().vertices()) {
        worst = worst.max((a.u - b.u).abs()).max((a.v - b.v).abs());
    }
    let s = q.side_lengths();
    worst = worst
        .max((s[0] + s[2] - (2.0 + SQRT_2)).abs())
        .max((s[1] + s[3] - (2.0 + SQRT_2)).abs());
    ensure(worst <= 1e-12, || format!("max abs error {worst:e}"))?;
    Ok(format!(
        "Y = {}, L = {}, max abs error {worst:.1e}",
        p.base_y, p.ratio
    ))
}

fn criterion_3() -> Outcome {
    let quads = random_tangential(3, 200, DEFAULT_MIN_GAP).map_err(|e| e.to_string())?;
    let mut cells = 0usize;
    let mut failures = 0usize;
    let mut worst: f64 = 0.0;
    for q in &quads {
        for n in [2, 3, 5, 8, 12] {
            let d = dissect(q, n).map_err(|e| e.to_string())?;
            for k in 0..n {
                for j in 0..n {
                    cells += 1;
                    match d.cell(k, j) {
                        Ok(c) => {
                            worst = worst.max(relative_pitot_defect(&c));
                            if !is_tangential(&c, 1e-8) {
                                failures += 1;
                            }
                        }
                        Err(_) => failures += 1,
                    }
                }
            }
        }
    }
    ensure(cells == 200 * (4 + 9 + 25 + 64 + 144), || {
        format!("{cells} cells")
    })?;
    ensure(failures == 0, || {
        format!("{failures} of {cells} cells failed")
    })?;
    Ok(format!(
        "{cells} cells, 0 failures, max relative defect {worst:.1e}"
    ))
}

fn criterion_4() -> Outcome {
    let mut rng = Rng::seed(4);
    let mut worst: f64 = 0.0;
    for _ in 0..1000 {
        let (x, y, l) = loop {
            let x = rng.range(0.2, 6.0);
            let y = rng.range(0.2, 6.0);
            let l = rng.range(1.05, 6.0);
            if x * y >= 1.05 {
                break (x, y, l);
            }
        };
        let t = tangents_from_params(&GeneralParams::new(x, y, l).unwrap());
        let (p, d) = solve_general(&t).map_err(|e| format!("({x}, {y}, {l}): {e}"))?;
        ensure(d.a_coef + d.b_coef > 0.0 && d.c_coef > 2.0, || {
            format!("diagnostics violated at ({x}, {y}, {l}): {d:?}")
        })?;
        ensure(p.base_x * p.base_y > 1.0 && p.ratio > 1.0, || {
            format!("XY > 1, L > 1 violated at ({x}, {y}, {l})")
        })?;
        worst = worst
            .max(rel(p.base_x, x))
            .max(rel(p.base_y, y))
            .max(rel(p.ratio, l));
    }
    ensure(worst <= 1e-9, || format!("max relative error {worst:e}"))?;
    Ok(format!("1000 triples, max relative error {worst:.1e}"))
}

fn criterion_5() -> Outcome {
    let mut rng = Rng::seed(5);
    let h = 1e-5;
    let mut worst_g: f64 = 0.0;
    let mut worst_t: f64 = 0.0;
    for _ in 0..100 {
        let m = loop {
            let m = MulPoint::new(rng.range(-2.0, 2.5).exp(), rng.range(-2.0, 2.5).exp());
            if m.x * m.y > 1.1 {
                break m;
            }
        };
        worst_g = worst_g
            .max(local_condition_residual(MapKind::General, m, h).map_err(|e| e.to_string())?);
        let m = MulPoint::new(rng.range(-2.0, 2.0).exp(), rng.range(-2.0, 2.0).exp());
        worst_t = worst_t
            .max(local_condition_residual(MapKind::Trapezoid, m, h).map_err(|e| e.to_string())?);
    }
    ensure(worst_g <= 1e-7 && worst_t <= 1e-7, || {
        format!("general {worst_g:e}, trapezoid {worst_t:e}")
    })?;
    Ok(format!(
        "max residual general {worst_g:.1e}, trapezoid {worst_t:.1e}"
    ))
}

fn criterion_6() -> Outcome {
    let quads = random_tangential(6, 10_000, DEFAULT_MIN_GAP).map_err(|e| e.to_string())?;
    let (mut col, mut perp, mut absc): (f64, f64, f64) = (0.0, 0.0, 0.0);
    let mut general_count = 0;
    for q in &quads {
        let r: CentersReport = centers_report(q).map_err(|e| e.to_string())?;
        col = col.max(r.collinearity_residual);
        if let (Some(a), Some(e)) = (r.canonical_abscissae, r.expected_abscissa) {
            general_count += 1;
            perp = perp.max(r.perpendicularity_residual);
            for u in a {
                absc = absc.max((u - e).abs());
            }
        }
    }
    ensure(col <= 1e-8, || format!("collinearity {col:e}"))?;
    ensure(perp <= 1e-8, || format!("perpendicularity {perp:e}"))?;
    ensure(absc <= 1e-9, || format!("abscissa {absc:e}"))?;

    let f1 = canonical_quad(&general(2.0, 2.0, 2.0)).unwrap();
    let r = centers_report(&f1).map_err(|e| e.to_string())?;
    ensure(
        r.incenter.dist(Point2::new(0.5, 3.0 / 7.0)) <= 1e-12
            && r.diagonal_point.dist(Point2::new(0.5, 8.0 / 21.0)) <= 1e-12
            && (r.grid_center.u - 0.5).abs() <= 1e-12,
        || format!("F1 centers {r:?}"),
    )?;
    let r = centers_report(&f3()).map_err(|e| e.to_string())?;
    let h = SQRT_2 / 2.0;
    ensure(
        [r.incenter, r.diagonal_point, r.grid_center]
            .iter()
            .all(|p| (p.v - h).abs() <= 1e-12),
        || format!("F3 centers {r:?}"),
    )?;
    Ok(format!(
        "10000 quads ({general_count} general): collinearity {col:.1e}, \
         perpendicularity {perp:.1e}, abscissa {absc:.1e}"
    ))
}

/// Inradii of the four 2×2 cells from the closed forms, with `(x, y, l)` the
/// cell-scale parameters; returned in the order A', B', D', C' corner.
fn cell_radii_closed_form(x: f64, y: f64, l: f64) -> [f64; 4] {
    [
        x * y * (l - 1.0) / ((x + y) * (x * y * l - 1.0)),
        x * y * l * (l - 1.0) / ((x * l + y) * (x * y * l * l - 1.0)),
        x * y * l * (l - 1.0) / ((x + y * l) * (x * y * l * l - 1.0)),
        x * y * l * l * (l - 1.0) / ((x + y) * l * (x * y * l * l * l - 1.0)),
    ]
}

fn criterion_7() -> Outcome {
    let f2 = canonical_quad(&general(2.0, 2.0, 4.0)).unwrap();
    let chk = reciprocal_check(&f2).map_err(|e| e.to_string())?;
    let want = [1.0 / 7.0, 4.0 / 45.0, 4.0 / 45.0, 2.0 / 31.0];
    let measured = [chk.radii.r_a, chk.radii.r_b, chk.radii.r_d, chk.radii.r_c];
    let closed = cell_radii_closed_form(2.0, 2.0, 2.0);
    let mut worst: f64 = 0.0;
    for i in 0..4 {
        worst = worst
            .max((measured[i] - want[i]).abs())
            .max((closed[i] - want[i]).abs());
    }
    ensure(worst <= 1e-12, || format!("radii error {worst:e}"))?;
    let inv = measured.map(|r| 1.0 / r);
    let opposite = [inv[0] + inv[3], inv[1] + inv[2]];
    ensure(
        (opposite[0] - 22.5).abs() <= 1e-10 && (opposite[1] - 22.5).abs() <= 1e-10,
        || format!("opposite sums {opposite:?}"),
    )?;
    ensure((chk.adjacent_defect - 8.5).abs() <= 1e-9, || {
        format!("adjacent defect {}", chk.adjacent_defect)
    })?;
    Ok(format!(
        "radii error {worst:.1e}, sums {:.12} = {:.12}, adjacent gap {:.9}",
        opposite[0], opposite[1], chk.adjacent_defect
    ))
}

fn criterion_8() -> Outcome {
    let mut quads = random_tangential(8, 250, DEFAULT_MIN_GAP).map_err(|e| e.to_string())?;
    let mut rng = Rng::seed(80);
    quads.extend((0..250).map(|_| random_convex(&mut rng)));
    let mut disagreements = 0;
    let mut tangential = 0;
    for q in &quads {
        let wu = wu_check(q).map_err(|e| e.to_string())?;
        let by_wu = wu.normalized_defect <= 1e-8;
        let by_pitot = relative_pitot_defect(q) <= 1e-8;
        if by_pitot {
            tangential += 1;
        }
        if by_wu != by_pitot {
            disagreements += 1;
        }
    }
    ensure(disagreements == 0, || {
        format!("{disagreements} disagreements")
    })?;
    ensure(tangential > 0 && tangential < quads.len(), || {
        format!("corpus not mixed: {tangential} tangential")
    })?;
    Ok(format!(
        "500 quads ({tangential} tangential), 0 disagreements"
    ))
}

fn criterion_9() -> Outcome {
    let f1 = canonical_quad(&general(2.0, 2.0, 2.0)).unwrap();
    let mut quads = vec![f1, f3()];
    quads.extend(random_tangential(9, 50, DEFAULT_MIN_GAP).map_err(|e| e.to_string())?);
    let mut worst: f64 = 0.0;
    for q in &quads {
        for n in [2, 3, 5] {
            let d = dissect(q, n).map_err(|e| e.to_string())?;
            worst = worst.max(triple_grid_report(&d).map_err(|e| e.to_string())?.max());
        }
    }
    ensure(worst <= 1e-8, || format!("max residual {worst:e}"))?;
    Ok(format!(
        "{} quads x 3 sizes, max residual {worst:.1e}",
        quads.len()
    ))
}

fn criterion_10() -> Outcome {
    let t = 1.0 / 3.0;
    let tiling = SquareTiling::new(vec![
        [0.0, t, 2.0 * t],
        [2.0 * t, 0.0, t],
        [2.0 * t, t, t],
        [2.0 * t, 2.0 * t, t],
        [0.0, 0.0, t],
        [t, 0.0, t],
    ])
    .map_err(|e| e.to_string())?;
    let f1 = canonical_quad(&general(2.0, 2.0, 2.0)).unwrap();
    let cells = dissect_square_tiling(&f1, &tiling).map_err(|e| e.to_string())?;
    ensure(cells.len() == 6, || format!("{} cells", cells.len()))?;
    let worst = cells
        .iter()
        .map(|(c, _)| relative_pitot_defect(c))
        .fold(0.0, f64::max);
    ensure(worst <= 1e-9, || format!("max defect {worst:e}"))?;
    let model = normalize(&f1).map_err(|e| e.to_string())?;
    let tj = t_junction_residual(&model, &tiling).map_err(|e| e.to_string())?;
    ensure(tj <= 1e-9, || format!("T-junction residual {tj:e}"))?;
    Ok(format!(
        "6 cells, max defect {worst:.1e}, T-junction residual {tj:.1e}"
    ))
}

fn run_bin(args: &[&str]) -> Result<Vec<u8>, String> {
    let out = Command::new(env!("CARGO_BIN_EXE_tangrid"))
        .args(args)
        .output()
        .map_err(|e| e.to_string())?;
    ensure(out.status.success(), || {
        format!(
            "tangrid {args:?} exited with {:?}: {}",
            out.status.code(),
            String::from_utf8_lossy(&out.stderr)
        )
    })?;
    Ok(out.stdout)
}

fn criterion_11() -> Outcome {
    let a = run_bin(&["random", "--seed", "42", "--count", "100"])?;
    let b = run_bin(&["random", "--seed", "42", "--count", "100"])?;
    ensure(!a.is_empty() && a == b, || "random output differs".into())?;

    let dir = tempfile::tempdir().map_err(|e| e.to_string())?;
    let d1 = dir.path().join("a");
    let d2 = dir.path().join("b");
    run_bin(&["demo", "--out-dir", d1.to_str().unwrap()])?;
    run_bin(&["demo", "--out-dir", d2.to_str().unwrap()])?;
    let mut names: Vec<_> = std::fs::read_dir(&d1)
        .map_err(|e| e.to_string())?
        .map(|e| e.unwrap().file_name())
        .collect();
    names.sort();
    ensure(names.len() == 5, || format!("{} figures", names.len()))?;
    for name in &names {
        let x = std::fs::read(d1.join(name)).map_err(|e| e.to_string())?;
        let y = std::fs::read(d2.join(name)).map_err(|e| e.to_string())?;
        ensure(x == y, || format!("{name:?} differs"))?;
    }
    Ok(format!(
        "random: {} identical bytes; demo: {} identical figures",
        a.len(),
        names.len()
    ))
}

fn main() {
    let criteria: [Criterion; 11] = [
        ("F1 general fixture", criterion_1),
        ("F3 trapezoid fixture", criterion_2),
        ("main theorem sweep", criterion_3),
        ("inverse round trip", criterion_4),
        ("local condition", criterion_5),
        ("centers theorem", criterion_6),
        ("reciprocal inradii", criterion_7),
        ("triangle relation equivalence", criterion_8),
        ("triple grid", criterion_9),
        ("square tiling dissection", criterion_10),
        ("determinism", criterion_11),
    ];
    let mut failed = 0;
    for (i, (name, f)) in criteria.iter().enumerate() {
        match f() {
            Ok(detail) => println!("[PASS] {:>2} {name}: {detail}", i + 1),
            Err(why) => {
                failed += 1;
                println!("[FAIL] {:>2} {name}: {why}", i + 1);
            }
        }
    }
    println!(
        "acceptance: {} passed, {failed} failed",
        criteria.len() - failed
    );
    if failed > 0 {
        std::process::exit(1);
    }
}
