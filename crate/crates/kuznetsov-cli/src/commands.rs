//! One function per subcommand. Each builds the JSON document and the CSV
//! projection; parallel maps collect in input order so the output bytes do
//! not depend on the thread count.

use crate::jsonfmt::{cnum, fnum, Cell};
use crate::parse::{format_dual_point, parse_complex, parse_dual_point};
use crate::verify::{GridFilter, SuiteName, SuiteReport};
use crate::{compute_failure, config_failure, data_failure, Ctx, Failure, Kind, Output, SuiteChoice, WeightArgs};
use kuznetsov::group::{GroupElement, MultiplicativeCharacter};
use kuznetsov::kloosterman::{
    enumerate_moduli, kloosterman_sum, kloosterman_sum_fast, ramanujan_sum_fast, zeta_series,
    zeta_series_smoothed, KloostermanRecord,
};
use kuznetsov::rings::{euler_phi_factored, AlgebraicInteger, DualPoint};
use kuznetsov::specfun::kernel::{bessel_kernel_sd, SpectralParameter};
use kuznetsov::traceformula::{
    trace_report, weight_transform, AnnularBump, ContinuousSettings, GaussianEta, TraceSettings,
    WeightSpec,
};
use kuznetsov::whittaker::{jacquet_whittaker_closed, jacquet_whittaker_numeric, WhittakerParams};
use num_complex::Complex64;
use rayon::prelude::*;
use serde_json::{json, Value};
use std::path::Path;

fn dual_point_flag(
    ctx: &Ctx,
    text: Option<&str>,
    flag: &str,
    default: DualPoint,
) -> Result<DualPoint, Failure> {
    match text {
        Some(t) => {
            parse_dual_point(t, ctx.field).map_err(|e| config_failure(format!("{flag}: {e}")))
        }
        None => Ok(default),
    }
}

fn complex_flag(text: &str, flag: &str) -> Result<Complex64, Failure> {
    parse_complex(text).map_err(|e| config_failure(format!("{flag}: {e}")))
}

fn root_cells(c: AlgebraicInteger) -> Vec<Cell> {
    vec![Cell::Text(c.to_string()), Cell::Int(c.norm())]
}

fn spectral_json(p: &SpectralParameter) -> Value {
    match *p {
        SpectralParameter::Principal { t, d } => {
            json!({ "kind": "principal", "t": fnum(t), "d": d })
        }
        SpectralParameter::Complementary { t } => {
            json!({ "kind": "complementary", "t": fnum(t), "d": 0 })
        }
    }
}

pub fn cmd_kloosterman(
    ctx: &Ctx,
    bound: i64,
    omega1: Option<&str>,
    omega2: Option<&str>,
    brute: bool,
) -> Result<Output, Failure> {
    if bound < 0 {
        return Err(config_failure("--bound: must be nonnegative"));
    }
    let g1 = ctx.field.dual_basis().0;
    let w1 = dual_point_flag(ctx, omega1, "--omega1", g1)?;
    let w2 = dual_point_flag(ctx, omega2, "--omega2", g1)?;
    if w1.is_zero() || w2.is_zero() {
        return Err(config_failure(
            "--omega1/--omega2: Kloosterman sums take nonzero characters; \
             the ramanujan command handles omega = 0",
        ));
    }
    let roots = enumerate_moduli(ctx.field, bound);
    let recs: Result<Vec<KloostermanRecord>, kuznetsov::Error> = roots
        .par_iter()
        .map(|&c| if brute { kloosterman_sum(c, w1, w2) } else { kloosterman_sum_fast(c, w1, w2) })
        .collect();
    let recs = recs.map_err(|e| compute_failure("kloosterman", e))?;

    let mut rows = Vec::with_capacity(recs.len());
    let mut csv_rows = Vec::with_capacity(recs.len());
    for rec in &recs {
        rows.push(json!({
            "c_root": rec.c_root.to_string(),
            "norm": rec.c_root.norm(),
            "modulus": cnum(rec.modulus),
            "value": cnum(rec.value),
            "term_count": rec.term_count,
        }));
        let mut cells = root_cells(rec.c_root);
        cells.extend([
            Cell::Float(rec.modulus.re),
            Cell::Float(rec.modulus.im),
            Cell::Float(rec.value.re),
            Cell::Float(rec.value.im),
            Cell::UInt(rec.term_count),
        ]);
        csv_rows.push(cells);
    }
    Ok(Output {
        doc: json!({
            "command": "kloosterman",
            "field": ctx.field.d(),
            "bound": bound,
            "omega1": format_dual_point(w1),
            "omega2": format_dual_point(w2),
            "path": if brute { "brute" } else { "fast" },
            "rows": rows,
        }),
        csv_header: vec![
            "c_root", "norm", "modulus_re", "modulus_im", "re", "im", "term_count",
        ],
        csv_rows,
        exit: 0,
    })
}

pub fn cmd_ramanujan(ctx: &Ctx, bound: i64, omega: Option<&str>) -> Result<Output, Failure> {
    if bound < 0 {
        return Err(config_failure("--bound: must be nonnegative"));
    }
    let w = dual_point_flag(ctx, omega, "--omega", DualPoint::zero(ctx.field))?;
    let roots = enumerate_moduli(ctx.field, bound);
    let recs: Result<Vec<(Complex64, u64)>, kuznetsov::Error> = roots
        .par_iter()
        .map(|&c| Ok((ramanujan_sum_fast(c, w)?, euler_phi_factored(c)?)))
        .collect();
    let recs = recs.map_err(|e| compute_failure("ramanujan", e))?;

    let mut rows = Vec::with_capacity(recs.len());
    let mut csv_rows = Vec::with_capacity(recs.len());
    for (c, (value, phi)) in roots.iter().zip(&recs) {
        rows.push(json!({
            "c_root": c.to_string(),
            "norm": c.norm(),
            "value": cnum(*value),
            "phi": phi,
        }));
        let mut cells = root_cells(*c);
        cells.extend([Cell::Float(value.re), Cell::Float(value.im), Cell::UInt(*phi)]);
        csv_rows.push(cells);
    }
    Ok(Output {
        doc: json!({
            "command": "ramanujan",
            "field": ctx.field.d(),
            "bound": bound,
            "omega": format_dual_point(w),
            "rows": rows,
        }),
        csv_header: vec!["c_root", "norm", "re", "im", "phi"],
        csv_rows,
        exit: 0,
    })
}

pub fn cmd_zeta(
    ctx: &Ctx,
    s_text: &str,
    d: i32,
    omega: Option<&str>,
    bound: i64,
    smoothed: bool,
) -> Result<Output, Failure> {
    if bound < 0 {
        return Err(config_failure("--bound: must be nonnegative"));
    }
    let s = complex_flag(s_text, "--s")?;
    let w = dual_point_flag(ctx, omega, "--omega", ctx.field.dual_basis().0)?;
    let mu = MultiplicativeCharacter::new(s, d);
    let base = json!({
        "command": "zeta",
        "field": ctx.field.d(),
        "s": cnum(s),
        "d": d,
        "omega": format_dual_point(w),
        "bound": bound,
    });
    let mut doc = base;
    if smoothed {
        let z = zeta_series_smoothed(mu, w, bound).map_err(|e| compute_failure("zeta", e))?;
        let obj = doc.as_object_mut().expect("document is an object");
        obj.insert("smoothed".into(), json!(true));
        obj.insert("experimental".into(), json!(z.experimental));
        obj.insert("identically_zero".into(), json!(z.identically_zero));
        obj.insert(
            "epsilons".into(),
            Value::Array(z.epsilons.iter().map(|&e| fnum(e)).collect()),
        );
        obj.insert("values".into(), Value::Array(z.values.iter().map(|&v| cnum(v)).collect()));
        obj.insert("extrapolated".into(), cnum(z.extrapolated));
        let mut csv_rows: Vec<Vec<Cell>> = z
            .epsilons
            .iter()
            .zip(&z.values)
            .map(|(&eps, &v)| {
                vec![
                    Cell::Text("damped".into()),
                    Cell::Float(eps),
                    Cell::Float(v.re),
                    Cell::Float(v.im),
                ]
            })
            .collect();
        csv_rows.push(vec![
            Cell::Text("extrapolated".into()),
            Cell::Float(0.0),
            Cell::Float(z.extrapolated.re),
            Cell::Float(z.extrapolated.im),
        ]);
        Ok(Output {
            doc,
            csv_header: vec!["stage", "epsilon", "re", "im"],
            csv_rows,
            exit: 0,
        })
    } else {
        let z = zeta_series(mu, w, bound).map_err(|e| compute_failure("zeta", e))?;
        let obj = doc.as_object_mut().expect("document is an object");
        obj.insert("smoothed".into(), json!(false));
        obj.insert("identically_zero".into(), json!(z.identically_zero));
        obj.insert("value".into(), cnum(z.value));
        obj.insert("tail_estimate".into(), fnum(z.tail_estimate));
        Ok(Output {
            doc,
            csv_header: vec![
                "s_re", "s_im", "d", "bound", "re", "im", "tail_estimate", "identically_zero",
            ],
            csv_rows: vec![vec![
                Cell::Float(s.re),
                Cell::Float(s.im),
                Cell::Int(d as i64),
                Cell::Int(bound),
                Cell::Float(z.value.re),
                Cell::Float(z.value.im),
                Cell::Float(z.tail_estimate),
                Cell::Flag(z.identically_zero),
            ]],
            exit: 0,
        })
    }
}

pub fn cmd_bessel(
    ctx: &Ctx,
    kind: Kind,
    t: f64,
    d: i32,
    s_text: Option<&str>,
    a_text: &str,
    z_texts: &[String],
) -> Result<Output, Failure> {
    let (s, kind_label) = match s_text {
        Some(text) => (complex_flag(text, "--s")?, "raw"),
        None => match kind {
            Kind::Principal => {
                let p = SpectralParameter::Principal { t, d };
                p.validate().map_err(|e| config_failure(format!("--t: {e}")))?;
                (Complex64::new(0.0, t), "principal")
            }
            Kind::Complementary => {
                if d != 0 {
                    return Err(config_failure("--d: complementary parameters take d = 0"));
                }
                let p = SpectralParameter::Complementary { t };
                p.validate().map_err(|e| config_failure(format!("--t: {e}")))?;
                (Complex64::new(t, 0.0), "complementary")
            }
        },
    };
    let a = complex_flag(a_text, "--a")?;
    if a.norm() == 0.0 {
        return Err(config_failure("--a: must be nonzero"));
    }
    let zs: Vec<Complex64> = if z_texts.is_empty() {
        (1..=8).map(|k| Complex64::new(0.25 * k as f64, 0.0)).collect()
    } else {
        z_texts
            .iter()
            .map(|text| {
                let z = complex_flag(text, "--z")?;
                if z.norm() == 0.0 {
                    return Err(config_failure("--z: must be nonzero"));
                }
                Ok(z)
            })
            .collect::<Result<_, _>>()?
    };
    let values: Vec<Result<Complex64, kuznetsov::Error>> =
        zs.par_iter().map(|&z| bessel_kernel_sd(s, d, a, z)).collect();

    let mut rows = Vec::with_capacity(zs.len());
    let mut csv_rows = Vec::with_capacity(zs.len());
    for (z, value) in zs.iter().zip(&values) {
        let (val_json, note, re, im) = match value {
            Ok(v) => (cnum(*v), Value::Null, v.re, v.im),
            Err(e) => (Value::Null, json!(format!("{e}")), f64::NAN, f64::NAN),
        };
        rows.push(json!({ "z": cnum(*z), "value": val_json, "note": note }));
        csv_rows.push(vec![
            Cell::Float(z.re),
            Cell::Float(z.im),
            Cell::Float(re),
            Cell::Float(im),
        ]);
    }
    Ok(Output {
        doc: json!({
            "command": "bessel",
            "field": ctx.field.d(),
            "kind": kind_label,
            "s": cnum(s),
            "d": d,
            "a": cnum(a),
            "rows": rows,
        }),
        csv_header: vec!["z_re", "z_im", "re", "im"],
        csv_rows,
        exit: 0,
    })
}

pub fn cmd_whittaker(
    ctx: &Ctx,
    t: f64,
    d: i32,
    omega: Option<&str>,
    r_values: &[f64],
    phi: f64,
    closed_only: bool,
) -> Result<Output, Failure> {
    let w = dual_point_flag(ctx, omega, "--omega", ctx.field.dual_basis().0)?;
    let wp = WhittakerParams::continuation(t, d, w)
        .map_err(|e| config_failure(format!("--t/--d/--omega: {e}")))?;
    if r_values.iter().any(|&r| !(r > 0.0 && r.is_finite())) {
        return Err(config_failure("--r: radii must be positive and finite"));
    }
    if !phi.is_finite() {
        return Err(config_failure("--phi: must be finite"));
    }
    let spec = ctx.quad_spec();

    struct Row {
        r: f64,
        closed: Result<Complex64, kuznetsov::Error>,
        numeric: Option<Result<Complex64, kuznetsov::Error>>,
    }
    let results: Vec<Row> = r_values
        .par_iter()
        .map(|&r| {
            let closed = jacquet_whittaker_closed(&wp, r, phi);
            let numeric = if closed_only {
                None
            } else {
                let a = GroupElement::a(Complex64::from_polar(r, phi));
                Some(jacquet_whittaker_numeric(&wp, a, &spec))
            };
            Row { r, closed, numeric }
        })
        .collect();

    let mut rows = Vec::with_capacity(results.len());
    let mut csv_rows = Vec::with_capacity(results.len());
    for row in &results {
        let mut note = Vec::new();
        let closed = match &row.closed {
            Ok(v) => Some(*v),
            Err(e) => {
                note.push(format!("closed: {e}"));
                None
            }
        };
        let numeric = match &row.numeric {
            Some(Ok(v)) => Some(*v),
            Some(Err(e)) => {
                note.push(format!("numeric: {e}"));
                None
            }
            None => None,
        };
        let residual = match (closed, numeric) {
            (Some(c), Some(n)) => {
                let denom = c.norm().max(n.norm());
                Some(if denom > 0.0 { (c - n).norm() / denom } else { 0.0 })
            }
            _ => None,
        };
        rows.push(json!({
            "r": fnum(row.r),
            "phi": fnum(phi),
            "closed": closed.map(cnum).unwrap_or(Value::Null),
            "numeric": numeric.map(cnum).unwrap_or(Value::Null),
            "residual": residual.map(fnum).unwrap_or(Value::Null),
            "note": if note.is_empty() { Value::Null } else { json!(note.join("; ")) },
        }));
        let nan = Complex64::new(f64::NAN, f64::NAN);
        let cv = closed.unwrap_or(nan);
        let nv = numeric.unwrap_or(nan);
        csv_rows.push(vec![
            Cell::Float(t),
            Cell::Int(d as i64),
            Cell::Float(row.r),
            Cell::Float(phi),
            Cell::Float(cv.re),
            Cell::Float(cv.im),
            Cell::Float(nv.re),
            Cell::Float(nv.im),
            Cell::Float(residual.unwrap_or(f64::NAN)),
        ]);
    }
    Ok(Output {
        doc: json!({
            "command": "whittaker",
            "field": ctx.field.d(),
            "t": fnum(t),
            "d": d,
            "omega": format_dual_point(w),
            "rows": rows,
        }),
        csv_header: vec![
            "t", "d", "r", "phi", "closed_re", "closed_im", "numeric_re", "numeric_im",
            "residual",
        ],
        csv_rows,
        exit: 0,
    })
}

pub fn build_weight(ctx: &Ctx, args: &WeightArgs) -> Result<WeightSpec, Failure> {
    let center = complex_flag(&args.eta_center, "--eta-center")?;
    let eta = GaussianEta::new(args.eta_amplitude, center, args.eta_width)
        .map_err(|e| config_failure(format!("--eta-amplitude/--eta-width: {e}")))?;
    let nu = AnnularBump::new(args.nu_rho1, args.nu_rho2)
        .map_err(|e| config_failure(format!("--nu-rho1/--nu-rho2: {e}")))?;
    let g1 = ctx.field.dual_basis().0;
    let w1 = dual_point_flag(ctx, args.omega1.as_deref(), "--omega1", g1)?;
    let w2 = dual_point_flag(ctx, args.omega2.as_deref(), "--omega2", g1)?;
    WeightSpec::new(eta, nu, w1, w2)
        .map_err(|e| config_failure(format!("--omega1/--omega2: {e}")))
}

fn weight_json(args: &WeightArgs, ws: &WeightSpec) -> Value {
    let (lo, hi) = ws.f_support();
    json!({
        "eta": {
            "amplitude": fnum(args.eta_amplitude),
            "center": cnum(parse_complex(&args.eta_center).expect("validated by build_weight")),
            "width": fnum(args.eta_width),
        },
        "nu": { "rho1": fnum(args.nu_rho1), "rho2": fnum(args.nu_rho2) },
        "omega1": format_dual_point(ws.omega1()),
        "omega2": format_dual_point(ws.omega2()),
        "f_support": [fnum(lo), fnum(hi)],
    })
}

pub fn cmd_transform(
    ctx: &Ctx,
    weight: &WeightArgs,
    kind: Kind,
    t_values: &[f64],
    d_values: &[i32],
) -> Result<Output, Failure> {
    let ws = build_weight(ctx, weight)?;
    let spec = ctx.quad_spec();
    let mut points = Vec::new();
    for &t in t_values {
        let s = match kind {
            Kind::Principal => Complex64::new(0.0, t),
            Kind::Complementary => {
                SpectralParameter::Complementary { t }
                    .validate()
                    .map_err(|e| config_failure(format!("--t: {e}")))?;
                Complex64::new(t, 0.0)
            }
        };
        for &d in d_values {
            points.push((t, s, d));
        }
    }
    let results: Vec<Result<kuznetsov::quad::QuadResult, kuznetsov::Error>> = points
        .par_iter()
        .map(|&(_, s, d)| weight_transform(&ws, s, d, &spec))
        .collect();

    let mut rows = Vec::with_capacity(points.len());
    let mut csv_rows = Vec::with_capacity(points.len());
    let kind_label = match kind {
        Kind::Principal => "principal",
        Kind::Complementary => "complementary",
    };
    for (&(t, _, d), result) in points.iter().zip(&results) {
        let (value, err_est, note) = match result {
            Ok(q) => (cnum(q.value), fnum(q.err_est), Value::Null),
            Err(e) => (Value::Null, Value::Null, json!(format!("{e}"))),
        };
        let (re, im, err) = match result {
            Ok(q) => (q.value.re, q.value.im, q.err_est),
            Err(_) => (f64::NAN, f64::NAN, f64::NAN),
        };
        rows.push(json!({
            "t": fnum(t),
            "d": d,
            "value": value,
            "err_est": err_est,
            "note": note,
        }));
        csv_rows.push(vec![
            Cell::Text(kind_label.into()),
            Cell::Float(t),
            Cell::Int(d as i64),
            Cell::Float(re),
            Cell::Float(im),
            Cell::Float(err),
        ]);
    }
    Ok(Output {
        doc: json!({
            "command": "transform",
            "field": ctx.field.d(),
            "kind": kind_label,
            "weight": weight_json(weight, &ws),
            "rows": rows,
        }),
        csv_header: vec!["kind", "t", "d", "re", "im", "err_est"],
        csv_rows,
        exit: 0,
    })
}

fn suite_json(report: &SuiteReport) -> Value {
    let points: Vec<Value> = report
        .points
        .iter()
        .map(|p| {
            json!({
                "label": p.label,
                "lhs": p.lhs.map(cnum).unwrap_or(Value::Null),
                "rhs": p.rhs.map(cnum).unwrap_or(Value::Null),
                "residual": p.residual.map(fnum).unwrap_or(Value::Null),
                "tol": fnum(p.tol),
                "pass": p.pass,
                "note": p.note.as_ref().map(|n| json!(n)).unwrap_or(Value::Null),
            })
        })
        .collect();
    json!({ "name": report.name, "passed": report.passed, "points": points })
}

pub fn cmd_verify(
    ctx: &Ctx,
    suite: SuiteChoice,
    s: Option<f64>,
    d: Option<i32>,
    r: Option<f64>,
) -> Result<Output, Failure> {
    let which: Vec<SuiteName> = match suite {
        SuiteChoice::All => vec![SuiteName::Closed, SuiteName::Kernel, SuiteName::Measure],
        SuiteChoice::Closed => vec![SuiteName::Closed],
        SuiteChoice::Kernel => vec![SuiteName::Kernel],
        SuiteChoice::Measure => vec![SuiteName::Measure],
    };
    let filter = GridFilter { s, d, r };
    let reports = crate::verify::run_suites(&which, ctx.field, filter, ctx.tol);
    let passed = reports.iter().all(|r| r.passed);

    let mut csv_rows = Vec::new();
    for report in &reports {
        for p in &report.points {
            let nan = Complex64::new(f64::NAN, f64::NAN);
            let lhs = p.lhs.unwrap_or(nan);
            let rhs = p.rhs.unwrap_or(nan);
            csv_rows.push(vec![
                Cell::Text(report.name.into()),
                Cell::Text(p.label.clone()),
                Cell::Float(lhs.re),
                Cell::Float(lhs.im),
                Cell::Float(rhs.re),
                Cell::Float(rhs.im),
                Cell::Float(p.residual.unwrap_or(f64::NAN)),
                Cell::Float(p.tol),
                Cell::Flag(p.pass),
            ]);
        }
    }
    Ok(Output {
        doc: json!({
            "command": "verify",
            "field": ctx.field.d(),
            "passed": passed,
            "suites": reports.iter().map(suite_json).collect::<Vec<_>>(),
        }),
        csv_header: vec![
            "suite", "label", "lhs_re", "lhs_im", "rhs_re", "rhs_im", "residual", "tol", "pass",
        ],
        csv_rows,
        exit: if passed { 0 } else { 1 },
    })
}

#[allow(clippy::too_many_arguments)]
pub fn cmd_trace(
    ctx: &Ctx,
    weight: &WeightArgs,
    data_path: Option<&Path>,
    geometric_only: bool,
    d_max: Option<i32>,
    t_max: Option<f64>,
    t_nodes: Option<usize>,
    zeta_bound: Option<i64>,
) -> Result<Output, Failure> {
    let ws = build_weight(ctx, weight)?;
    let data = match data_path {
        Some(path) => crate::data::parse_spectral_file(path, ctx.field).map_err(data_failure)?,
        None => Vec::new(),
    };
    let mut continuous = if geometric_only {
        ContinuousSettings::empty()
    } else {
        ContinuousSettings::default_for(ctx.field)
    };
    if !geometric_only {
        if let Some(v) = d_max {
            continuous.d_max = v;
        }
        if let Some(v) = t_max {
            continuous.t_max = v;
        }
        if let Some(v) = t_nodes {
            continuous.t_nodes = v;
        }
        if let Some(v) = zeta_bound {
            continuous.zeta_norm_bound = v;
        }
    }
    let settings = TraceSettings { continuous: continuous.clone(), quadrature: ctx.quad_spec() };
    let report = trace_report(&ws, &data, &settings).map_err(|e| compute_failure("trace", e))?;
    let diag = &report.diagnostics;

    let geometric_terms: Vec<Value> = diag
        .geometric_terms
        .iter()
        .map(|t| {
            json!({
                "c_root": t.c_root.to_string(),
                "modulus": cnum(t.modulus),
                "kloosterman": cnum(t.kloosterman),
                "weight": cnum(t.weight),
                "value": cnum(t.value),
            })
        })
        .collect();
    let discrete_terms: Vec<Value> = diag
        .discrete_terms
        .iter()
        .map(|t| {
            json!({
                "p": spectral_json(&t.p),
                "a_omega1": cnum(t.a_omega1),
                "a_omega2": cnum(t.a_omega2),
                "f_hat": cnum(t.f_hat),
                "value": cnum(t.value),
            })
        })
        .collect();
    let bands: Vec<Value> = diag
        .continuous_bands
        .iter()
        .map(|b| json!({ "d": b.d, "value": cnum(b.value) }))
        .collect();

    let csv_rows: Vec<Vec<Cell>> = diag
        .geometric_terms
        .iter()
        .map(|t| {
            vec![
                Cell::Text(t.c_root.to_string()),
                Cell::Float(t.modulus.re),
                Cell::Float(t.modulus.im),
                Cell::Float(t.kloosterman.re),
                Cell::Float(t.kloosterman.im),
                Cell::Float(t.weight.re),
                Cell::Float(t.weight.im),
                Cell::Float(t.value.re),
                Cell::Float(t.value.im),
            ]
        })
        .collect();

    Ok(Output {
        doc: json!({
            "command": "trace",
            "field": ctx.field.d(),
            "weight": weight_json(weight, &ws),
            "data_file": data_path.map(|p| json!(p.display().to_string())).unwrap_or(Value::Null),
            "data_count": diag.data_count,
            "sides": {
                "geometric": cnum(report.geometric),
                "discrete": cnum(report.discrete),
                "continuous": cnum(report.continuous),
                "residual": cnum(report.residual),
            },
            "settings": {
                "geometric_only": geometric_only,
                "d_max": continuous.d_max,
                "t_max": fnum(continuous.t_max),
                "t_nodes": continuous.t_nodes,
                "zeta_norm_bound": continuous.zeta_norm_bound,
            },
            "diagnostics": {
                "geometric_first": cnum(diag.geometric_first),
                "reweighting_delta": fnum(diag.reweighting_delta),
                "delta_term": cnum(diag.delta_term),
                "geometric_terms": geometric_terms,
                "discrete_terms": discrete_terms,
                "discrete_skipped": diag.discrete_skipped,
                "continuous_bands": bands,
                "continuous_experimental": diag.continuous_experimental,
                "band_tail_ratio": fnum(diag.band_tail_ratio),
                "note": diag.note,
            },
        }),
        csv_header: vec![
            "c_root", "modulus_re", "modulus_im", "kloosterman_re", "kloosterman_im",
            "weight_re", "weight_im", "value_re", "value_im",
        ],
        csv_rows,
        exit: 0,
    })
}
