//! Command implementations.
//!
//! Each command validates its configuration, runs the core pipeline, writes
//! the requested artifacts, and returns a printable summary plus a process
//! exit code; `all` fans the independent runs out over a capped thread pool.
//! Exit codes: 0 success, 2 numerical failure, 3 reference-assertion
//! failure, 64 usage, 74 I/O.

use std::fmt::Write as _;
use std::path::{Path, PathBuf};
use std::sync::atomic::{AtomicUsize, Ordering};
use std::sync::Mutex;

use crouzeix_core::bounds::{bracket, BoundReport};
use crouzeix_core::conformal::{analyze_kms, convergence_study, ConvergenceTable, KmsRun};
use crouzeix_core::kms::{boundary_description, boundary_point, discretize_boundary, NodePart};
use crouzeix_core::omega::{cond_h1, verify_inclusion, RationalMap};
use crouzeix_core::Error as CoreError;

use crate::emit::{self, fmt_float, Json};
use crate::svg;
use crate::Format;

/// Default algebraic-arc sample parameter for conformal solves.
pub const DEFAULT_N_DISC: usize = 1205;

/// Refinement ladder in total node count; the largest rung is the reference.
const LADDER: [usize; 8] = [23, 47, 95, 191, 383, 767, 1205, 1447];

/// Reference bracket endpoints per order, printed accuracy.
const REFERENCE_BRACKETS: [(usize, f64, f64); 4] = [
    (3, 1.9956978, 1.9956979),
    (4, 1.993800, 1.993801),
    (5, 1.992921, 1.992922),
    (6, 1.992444, 1.992445),
];

#[derive(Debug)]
pub enum Failure {
    Usage(String),
    Numerical(CoreError),
    Io(std::io::Error, PathBuf),
}

impl Failure {
    pub fn code(&self) -> u8 {
        match self {
            Failure::Usage(_) => 64,
            Failure::Numerical(_) => 2,
            Failure::Io(..) => 74,
        }
    }

    pub fn message(&self) -> String {
        match self {
            Failure::Usage(msg) => msg.clone(),
            Failure::Numerical(err) => format!("numerical failure: {err}"),
            Failure::Io(err, path) => format!("{}: {err}", path.display()),
        }
    }
}

pub struct Outcome {
    pub summary: String,
    pub code: u8,
}

/// Requested output formats, deduplicated.
#[derive(Debug, Clone, Copy)]
pub struct Want {
    pub json: bool,
    pub csv: bool,
    pub svg: bool,
}

impl Want {
    pub fn from(formats: &[Format]) -> Want {
        Want {
            json: formats.contains(&Format::Json),
            csv: formats.contains(&Format::Csv),
            svg: formats.contains(&Format::Svg),
        }
    }
}

fn write_out(dir: &Path, name: &str, content: &str) -> Result<(), Failure> {
    std::fs::create_dir_all(dir).map_err(|e| Failure::Io(e, dir.to_path_buf()))?;
    let path = dir.join(name);
    std::fs::write(&path, content).map_err(|e| Failure::Io(e, path.clone()))
}

fn check_n_disc(n_disc: usize) -> Result<(), Failure> {
    if n_disc < 23 {
        return Err(Failure::Usage(format!("--n-disc must be at least 23, got {n_disc}")));
    }
    Ok(())
}

/// JSON record of one conformal pipeline run.
fn run_record(run: &KmsRun) -> Json {
    let m_first_row: Vec<Json> =
        (0..run.k).map(|j| emit::complex_pair(run.data.m.at(0, j))).collect();
    Json::Obj(vec![
        ("k", emit::int(run.k)),
        ("n", emit::int(run.n_input)),
        ("nn", emit::int(run.nn)),
        ("translated", Json::Bool(run.translated)),
        ("cond_estimate", emit::num(run.cond_estimate)),
        ("g_derivs", Json::Arr(run.data.g.iter().map(|&v| emit::num(v)).collect())),
        ("m_first_row", Json::Arr(m_first_row)),
    ])
}

fn bound_report_json(rep: &BoundReport, run: &KmsRun) -> Json {
    let mut fields = vec![
        ("n", emit::int(rep.n)),
        ("lower", emit::num(rep.lower)),
        (
            "lower_roots",
            Json::Arr(rep.lower_roots.iter().map(|&r| emit::complex_pair(r)).collect()),
        ),
        ("upper", emit::num(rep.upper)),
        ("free_params", Json::Arr(rep.free_params.iter().map(|&v| emit::num(v)).collect())),
        ("jordan_residual", emit::num(rep.jordan_residual)),
        ("contraction_norm", emit::num(rep.contraction_norm)),
    ];
    if let Some(alt) = rep.alt_lower {
        fields.push(("alt_lower", emit::num(alt)));
    }
    fields.push(("bracket_valid", Json::Bool(rep.bracket_valid)));
    fields.push(("run", run_record(run)));
    Json::Obj(fields)
}

pub fn bounds(k: usize, n_disc: usize, out: &Path, want: Want) -> Result<Outcome, Failure> {
    if !(3..=6).contains(&k) {
        return Err(Failure::Usage(format!("--k must be between 3 and 6 for bounds, got {k}")));
    }
    check_n_disc(n_disc)?;
    let run = analyze_kms(k, n_disc).map_err(Failure::Numerical)?;
    let rep = bracket(&run.data.m).map_err(Failure::Numerical)?;

    let mut summary = String::new();
    let _ = writeln!(summary, "order  lower      upper      bracket");
    let _ = writeln!(
        summary,
        "{k}      {:.7}  {:.7}  {}",
        rep.lower,
        rep.upper,
        if rep.bracket_valid { "valid" } else { "INVALID" }
    );
    let coarse = n_disc < DEFAULT_N_DISC;
    if coarse {
        let _ = writeln!(
            summary,
            "warning: n_disc {n_disc} below default {DEFAULT_N_DISC}; endpoints are coarser than the reference table"
        );
    }
    // The reference-table assertion only binds at default resolution and up.
    let (_, ref_lower, ref_upper) = REFERENCE_BRACKETS[k - 3];
    let table_ok = coarse
        || ((rep.lower - ref_lower).abs() <= 1e-5 && (rep.upper - ref_upper).abs() <= 1e-5);
    if !table_ok {
        let _ = writeln!(
            summary,
            "bracket misses the reference row ({ref_lower}, {ref_upper}) by more than 1e-5"
        );
    }

    if want.json {
        write_out(out, &format!("bounds_{k}.json"), &bound_report_json(&rep, &run).render())?;
    }
    let code = if rep.bracket_valid && table_ok { 0 } else { 3 };
    Ok(Outcome { summary, code })
}

pub fn boundary(k: usize, n_disc: usize, out: &Path, want: Want) -> Result<Outcome, Failure> {
    if k < 3 {
        return Err(Failure::Usage(format!("--k must be at least 3 for boundary, got {k}")));
    }
    check_n_disc(n_disc)?;
    let disc = discretize_boundary(k, n_disc).map_err(Failure::Numerical)?;
    let desc = boundary_description(k).map_err(Failure::Numerical)?;
    let (nn, n, n2) = (disc.nn(), disc.n_input, disc.n_flat);
    let step = 2.0 * std::f64::consts::PI / (n as f64 * k as f64);

    if want.csv {
        let mut csv = String::from("theta_or_index,re,im,part\n");
        for (i, z) in disc.nodes.iter().enumerate() {
            let (toi, part) = match disc.part_of(i) {
                NodePart::Algebraic => {
                    let theta =
                        if i <= n { i as f64 * step } else { -((nn - i) as f64) * step };
                    (fmt_float(theta), "algebraic")
                }
                NodePart::Flat => (format!("{i}"), "segment"),
            };
            let _ = writeln!(csv, "{toi},{},{},{part}", fmt_float(z.re), fmt_float(z.im));
        }
        write_out(out, &format!("boundary_{k}.csv"), &csv)?;
    }

    if want.svg {
        // Closed-loop node order: algebraic arc 0..=n, flat side
        // n+1..=n+2*n2 crossing the axis, mirrored arc nn-n..nn-1. The
        // algebraic path is drawn as one theta-monotone sweep through the
        // axis seam.
        let pt = |i: usize| (disc.nodes[i].re, disc.nodes[i].im);
        let algebraic: Vec<(f64, f64)> = (nn - n..nn).chain(0..=n).map(pt).collect();
        // The corner nodes belong to the algebraic arc; repeat them at the
        // ends of the flat path so the two strokes meet.
        let flat: Vec<(f64, f64)> = std::iter::once(n)
            .chain(n + 1..=n + 2 * n2)
            .chain(std::iter::once(nn - n))
            .map(pt)
            .collect();
        let markers: Vec<(f64, f64)> = desc
            .cusp_angles
            .iter()
            .map(|&ang| {
                let z = boundary_point(k, ang);
                (z.re, z.im)
            })
            .collect();
        let parts = vec![("algebraic", algebraic), ("segment", flat)];
        write_out(out, &format!("boundary_{k}.svg"), &svg::figure(&parts, &markers))?;
    }

    let mut summary = String::new();
    let _ = writeln!(
        summary,
        "boundary k={k}: {nn} nodes ({} algebraic + {} segment), theta_max {:.6}, {} cusp marker(s)",
        2 * n + 1,
        2 * n2,
        desc.theta_max,
        desc.cusp_angles.len()
    );
    Ok(Outcome { summary, code: 0 })
}

fn convergence_json(t: &ConvergenceTable, windows: (bool, bool, bool)) -> Json {
    let rows: Vec<Json> = t
        .rows
        .iter()
        .map(|r| {
            Json::Obj(vec![
                ("total", emit::int(r.total)),
                ("n_input", emit::int(r.n_input)),
                ("a", emit::num(r.a)),
                ("b", emit::num(r.b)),
                ("g2", emit::num(r.g2)),
                ("a_ratio", emit::num(r.a_ratio)),
                ("b_ratio", emit::num(r.b_ratio)),
                ("g2_ratio", emit::num(r.g2_ratio)),
            ])
        })
        .collect();
    Json::Obj(vec![
        ("k", emit::int(t.k)),
        ("ref_total", emit::int(t.ref_total)),
        ("ref_a", emit::num(t.ref_a)),
        ("ref_b", emit::num(t.ref_b)),
        ("ref_g2", emit::num(t.ref_g2)),
        ("rows", Json::Arr(rows)),
        ("slope_a", emit::num(t.slope_a)),
        ("slope_b", emit::num(t.slope_b)),
        (
            "windows",
            Json::Obj(vec![
                ("a_ok", Json::Bool(windows.0)),
                ("b_ok", Json::Bool(windows.1)),
                ("slope_ok", Json::Bool(windows.2)),
            ]),
        ),
    ])
}

pub fn convergence(k: usize, out: &Path, want: Want) -> Result<Outcome, Failure> {
    if k != 3 {
        return Err(Failure::Usage(format!(
            "the reference ladder and ratio windows are defined for --k 3, got {k}"
        )));
    }
    let t = convergence_study(k, &LADDER).map_err(Failure::Numerical)?;

    let mut summary = String::new();
    let _ = writeln!(summary, "ladder for k = {k}, reference total {}:", t.ref_total);
    let _ =
        writeln!(summary, " total  n_input  (a_ref-a)*n^4  (b-b_ref)*n^4  |g2-g2_ref|*n^4");
    let (mut a_miss, mut b_miss) = (0usize, 0usize);
    for r in &t.rows {
        let n4 = (r.total as f64).powi(4);
        let ra = (t.ref_a - r.a) * n4;
        let rb = (r.b - t.ref_b) * n4;
        if !(33.0..=65.0).contains(&ra) {
            a_miss += 1;
        }
        if !(130.0..=350.0).contains(&rb) {
            b_miss += 1;
        }
        let _ = writeln!(
            summary,
            "{:>6}  {:>7}  {:>13.3}  {:>13.3}  {:>15.3}",
            r.total, r.n_input, ra, rb, r.g2_ratio
        );
    }
    let slope_ok = (t.slope_a + 4.0).abs() <= 0.5 && (t.slope_b + 4.0).abs() <= 0.5;
    let _ = writeln!(summary, "slopes: a {:.3}, b {:.3}", t.slope_a, t.slope_b);
    let _ = writeln!(
        summary,
        "window a [33, 65]: {}; window b [130, 350]: {}; slope -4 +/- 0.5: {}",
        miss_text(a_miss),
        miss_text(b_miss),
        if slope_ok { "ok" } else { "violated" }
    );

    let windows = (a_miss == 0, b_miss == 0, slope_ok);
    if want.json {
        write_out(out, &format!("convergence_{k}.json"), &convergence_json(&t, windows).render())?;
    }
    if want.csv {
        let mut csv = String::from("total,n_input,a,b,g2,a_ratio,b_ratio,g2_ratio\n");
        for r in &t.rows {
            let _ = writeln!(
                csv,
                "{},{},{},{},{},{},{},{}",
                r.total,
                r.n_input,
                fmt_float(r.a),
                fmt_float(r.b),
                fmt_float(r.g2),
                fmt_float(r.a_ratio),
                fmt_float(r.b_ratio),
                fmt_float(r.g2_ratio)
            );
        }
        write_out(out, &format!("convergence_{k}.csv"), &csv)?;
    }

    let code = if windows.0 && windows.1 && windows.2 { 0 } else { 3 };
    Ok(Outcome { summary, code })
}

fn miss_text(misses: usize) -> String {
    if misses == 0 {
        "ok".to_string()
    } else {
        format!("{misses} rung(s) outside")
    }
}

pub fn omega(samples: usize, out: &Path, want: Want) -> Result<Outcome, Failure> {
    if samples < 100 || samples % 4 != 0 {
        return Err(Failure::Usage(format!(
            "--samples must be at least 100 and divisible by 4, got {samples}"
        )));
    }
    let map = RationalMap::default();
    let rep = verify_inclusion(&map, samples).map_err(Failure::Numerical)?;
    let cond = cond_h1(&map).map_err(Failure::Numerical)?;
    let derivs = map.inverse_derivs().map_err(Failure::Numerical)?;
    let (min_den, winding) = map.denominator_audit();

    let mut summary = String::new();
    let _ = writeln!(summary, "inclusion at {samples} samples:");
    let _ = writeln!(
        summary,
        "  cardioid side: max p {:.7e}, quotient {:.4e}, cap {:.4e}, certified {:.7e} (need < 0)",
        rep.max_p_cardioid, rep.max_dp_quotient, rep.cardioid_cap, rep.cardioid_certified_bound
    );
    let _ = writeln!(
        summary,
        "  flat side:     min Re {:.7e}, quotient {:.4e}, cap {:.4e}, certified {:.7e} (need > -0.5)",
        rep.min_re_segment, rep.max_dre_quotient, rep.segment_cap, rep.segment_certified_bound
    );
    let _ = writeln!(
        summary,
        "  included: {}; cond(H1) = {:.9}",
        if rep.included { "yes" } else { "no" },
        cond
    );

    if want.json {
        let j = Json::Obj(vec![
            ("samples", emit::int(rep.samples)),
            ("max_p_cardioid", emit::num(rep.max_p_cardioid)),
            ("max_dp_quotient", emit::num(rep.max_dp_quotient)),
            ("cardioid_cap", emit::num(rep.cardioid_cap)),
            ("cardioid_certified_bound", emit::num(rep.cardioid_certified_bound)),
            ("min_re_segment", emit::num(rep.min_re_segment)),
            ("max_dre_quotient", emit::num(rep.max_dre_quotient)),
            ("segment_cap", emit::num(rep.segment_cap)),
            ("segment_certified_bound", emit::num(rep.segment_certified_bound)),
            ("included", Json::Bool(rep.included)),
            ("cond_h1", emit::num(cond)),
            ("a1", emit::num(derivs.a1)),
            ("g2", emit::num(derivs.g2)),
            ("b1", emit::num(derivs.b1)),
            ("min_denominator", emit::num(min_den)),
            ("winding", emit::num(winding)),
        ]);
        write_out(out, "omega.json", &j.render())?;
    }
    if want.csv {
        // The split sample sits on both arcs; emit it once per part so
        // each polyline is complete.
        let split = 3 * samples / 4;
        let mut csv = String::from("theta_or_index,re,im,part\n");
        for j in 0..=samples {
            let t = std::f64::consts::PI * j as f64 / samples as f64;
            let z = map
                .eval(crouzeix_core::matrix::Complex64::new(t.cos(), t.sin()))
                .map_err(Failure::Numerical)?;
            let parts: &[&str] = match j.cmp(&split) {
                std::cmp::Ordering::Less => &["cardioid"],
                std::cmp::Ordering::Equal => &["cardioid", "segment"],
                std::cmp::Ordering::Greater => &["segment"],
            };
            for part in parts {
                let _ =
                    writeln!(csv, "{},{},{},{part}", fmt_float(t), fmt_float(z.re), fmt_float(z.im));
            }
        }
        write_out(out, "omega_curves.csv", &csv)?;
    }

    let code = if rep.included { 0 } else { 3 };
    Ok(Outcome { summary, code })
}

enum Spec {
    Bounds(usize),
    Boundary(usize),
    Convergence,
    Omega,
}

impl Spec {
    fn label(&self) -> String {
        match self {
            Spec::Bounds(k) => format!("bounds --k {k}"),
            Spec::Boundary(k) => format!("boundary --k {k}"),
            Spec::Convergence => "convergence --k 3".to_string(),
            Spec::Omega => "omega".to_string(),
        }
    }

    fn run(&self, n_disc: usize, samples: usize, out: &Path, want: Want) -> Result<Outcome, Failure> {
        match *self {
            Spec::Bounds(k) => bounds(k, n_disc, out, want),
            Spec::Boundary(k) => boundary(k, n_disc, out, want),
            Spec::Convergence => convergence(3, out, want),
            Spec::Omega => omega(samples, out, want),
        }
    }
}

/// Worker-thread cap: `CROUZEIX_LAB_THREADS` when set to a positive
/// integer, otherwise the machine's available parallelism.
fn thread_cap() -> usize {
    std::env::var("CROUZEIX_LAB_THREADS")
        .ok()
        .and_then(|s| s.parse::<usize>().ok())
        .filter(|&t| t >= 1)
        .unwrap_or_else(|| std::thread::available_parallelism().map_or(1, |n| n.get()))
}

pub fn all(n_disc: usize, samples: usize, out: &Path, want: Want) -> Result<Outcome, Failure> {
    check_n_disc(n_disc)?;
    if samples < 100 || samples % 4 != 0 {
        return Err(Failure::Usage(format!(
            "--samples must be at least 100 and divisible by 4, got {samples}"
        )));
    }
    let specs = [
        Spec::Bounds(3),
        Spec::Bounds(4),
        Spec::Bounds(5),
        Spec::Bounds(6),
        Spec::Boundary(3),
        Spec::Boundary(4),
        Spec::Boundary(5),
        Spec::Boundary(6),
        Spec::Convergence,
        Spec::Omega,
    ];
    let results: Mutex<Vec<Option<Result<Outcome, Failure>>>> =
        Mutex::new((0..specs.len()).map(|_| None).collect());
    let next = AtomicUsize::new(0);
    let workers = thread_cap().min(specs.len()).max(1);

    std::thread::scope(|scope| {
        for _ in 0..workers {
            scope.spawn(|| loop {
                let i = next.fetch_add(1, Ordering::Relaxed);
                if i >= specs.len() {
                    break;
                }
                let r = specs[i].run(n_disc, samples, out, want);
                results.lock().expect("no panicking worker holds the lock")[i] = Some(r);
            });
        }
    });

    // Summaries print in task order regardless of completion order, so
    // stdout is deterministic for a fixed configuration.
    let mut summary = String::new();
    let mut code = 0u8;
    for (spec, slot) in specs.iter().zip(results.into_inner().expect("workers joined")) {
        let _ = writeln!(summary, "== {} ==", spec.label());
        match slot.expect("every task ran") {
            Ok(outcome) => {
                summary.push_str(&outcome.summary);
                code = code.max(outcome.code);
            }
            Err(failure) => {
                let _ = writeln!(summary, "failed ({}): {}", failure.code(), failure.message());
                code = code.max(failure.code());
            }
        }
    }
    Ok(Outcome { summary, code })
}
