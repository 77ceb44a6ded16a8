use ladder_core::expm::{oracle_window, pad_sufficiency_core};
use ladder_core::factorization::{u1_factors, u2_factors};
use ladder_core::gn::gn_oracle;
use ladder_core::linalg::{determinant, max_abs_diff, unitarity_defect, CMatrix, ZERO};
use ladder_core::phase::{commutator_is_unit_impulse, phase_element, phase_gnm};
use ladder_core::rotations::{
    antinormal_rotation, ket_action, m_of, rotation_direct, rotation_factorized, RotationSpec,
};
use ladder_core::triangles::{
    check_invariants, column_series, generate, node_records, render_ascii, row_sums, sumrule_check,
    SignMode, WeightRule,
};
use ladder_core::*;
use num_rational::BigRational;
use rayon::prelude::*;
use serde_json::{json, Value};

use crate::args::*;
use crate::output::{complex, rational, Report, Table};

#[derive(Debug)]
pub enum CliError {
    /// Malformed or incomplete request.
    Config(String),
    Core(LadderError),
}

impl From<LadderError> for CliError {
    fn from(e: LadderError) -> Self {
        CliError::Core(e)
    }
}

impl std::fmt::Display for CliError {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        match self {
            CliError::Config(m) => write!(f, "{m}"),
            CliError::Core(e) => write!(f, "{e}"),
        }
    }
}

type Out = std::result::Result<Report, CliError>;

pub fn run(cli: &Cli) -> Out {
    let g = &cli.global;
    match &cli.command {
        Command::CheckAlgebra(a) => check_algebra(a, g),
        Command::Factorize(a) => factorize(a, g),
        Command::Gn(a) => gn(a, g),
        Command::Triangle(a) => triangle(a),
        Command::Rotate(a) => rotate(a, g),
        Command::Phase(a) => phase(a, g),
        Command::Sumrule(a) => sumrule(a, g),
    }
}

fn spec_of(a: &SpecArgs) -> std::result::Result<AlgebraSpec, CliError> {
    a.spec().map_err(CliError::Config)
}

fn window_json(w: &IndexWindow) -> Value {
    json!({ "j-min": w.j_min, "j-max": w.j_max, "core-lo": w.core_lo, "core-hi": w.core_hi })
}

fn check_algebra(a: &CheckAlgebraArgs, g: &GlobalOpts) -> Out {
    let spec = spec_of(&a.spec)?;
    let (lo, hi) = g.window.unwrap_or((0, 16));
    let full = IndexWindow::full(lo, hi)?;
    // a side closed by a broken link needs no inset
    let lo_in = if full.lower_open(&spec) { a.inset } else { 0 };
    let hi_in = if full.upper_open(&spec) { a.inset } else { 0 };
    let window = IndexWindow::new(lo, hi, lo + lo_in, hi - hi_in)?;
    let m = build_matrices(&spec, window)?;
    let tol = g.tol.unwrap_or(1e-12);
    let residual = commutator_residual(&m, &spec);

    let mut r = Report::new("check-algebra");
    r.set("spec", spec.label());
    r.set("window", window_json(&window));
    r.set("closure-sigma", spec.closure_sigma());
    r.set("residual", residual);
    r.set("tol", tol);
    let blocks: Vec<Value> = detect_blocks(&spec, window).iter().map(|b| json!([b.lo, b.hi])).collect();
    r.set("blocks", blocks);
    r.check("commutator residual".into(), residual, tol);

    if spec == AlgebraSpec::profile(Profile::Phase) {
        let impulse = (window.core_lo..=window.core_hi).all(|j| m.s_diag(j) == if j == 0 { 1.0 } else { 0.0 });
        r.set("s-unit-impulse", impulse && commutator_is_unit_impulse(window.dim()));
    }
    let mut t = Table::new(&["j", "lambda-sq", "s"]);
    for j in window.core_lo..=window.core_hi {
        t.push(vec![j.into(), lambda_sq(&spec, j).into(), m.s_diag(j).into()]);
    }
    r.table = Some(t);
    Ok(r)
}

fn factorize(a: &FactorizeArgs, g: &GlobalOpts) -> Out {
    let spec = spec_of(&a.spec)?;
    let coeffs = match (a.y, a.a, a.b, a.c) {
        (Some(y), ..) => Coeffs::u1(y),
        (None, None, None, None) => return Err(CliError::Config("give --y, or --a/--b/--c".into())),
        (None, x, y, z) => Coeffs::new(x.unwrap_or(ZERO), y.unwrap_or(ZERO), z.unwrap_or(ZERO)),
    };
    let (lo, hi) = a.core;
    let window = match (g.window, g.pad) {
        (Some((wlo, whi)), _) => IndexWindow::new(wlo, whi, lo, hi)?,
        (None, Some(pad)) => IndexWindow::padded(&spec, lo, hi, pad)?,
        (None, None) => oracle_window(&spec, lo, hi, &coeffs)?,
    };
    let tol = g.tol.unwrap_or(1e-10);
    let u2_input = a.y.is_none();

    let mut r = Report::new("factorize");
    r.set("spec", spec.label());
    r.set("window", window_json(&window));
    r.set("coeffs", json!({ "a": complex(coeffs.a), "b": complex(coeffs.b), "c": complex(coeffs.c) }));
    r.set("tol", tol);
    match (coeffs.as_u1(), u2_input) {
        (Some(y), false) => {
            let f = u1_factors(&spec, y)?;
            r.set("factors", json!({ "f": f.f, "g": f.g, "gaussian": f.gaussian }));
        }
        _ => {
            let f = u2_factors(&spec, coeffs.a, coeffs.b, coeffs.c)?;
            r.set(
                "factors",
                json!({
                    "f-plus": complex(f.f_plus), "f-minus": complex(f.f_minus),
                    "g-plus": complex(f.g_plus), "g-minus": complex(f.g_minus),
                    "q-sq": complex(f.q_sq),
                }),
            );
        }
    }
    if u2_input {
        r.set("reduces-to-U1", coeffs.as_u1().is_some());
        if let Some(y) = coeffs.as_u1() {
            let cw = window.core_window();
            let d = max_abs_diff(
                u1_normal(&spec, cw, y)?.view(),
                u2_normal(&spec, cw, coeffs.a, coeffs.b, coeffs.c)?.view(),
            );
            r.set("reduction-deviation", d);
        }
    }
    for ordering in a.ordering.orderings() {
        let res = factorization_residual(&spec, window, &coeffs, ordering)?;
        let key = match ordering {
            Ordering::Normal => "residual-normal",
            Ordering::AntiNormal => "residual-anti-normal",
        };
        r.set(key, res);
        r.check(key.into(), res, tol);
    }
    r.set("pad-certificate", pad_sufficiency_core(&spec, window, &coeffs)?);
    Ok(r)
}

fn gn(a: &GnArgs, g: &GlobalOpts) -> Out {
    let spec = spec_of(&a.spec)?;
    if a.n < a.m {
        return Err(CliError::Config(format!("need n >= m, got n={} m={}", a.n, a.m)));
    }
    let series_ok = a.m == 0 && spec != AlgebraSpec::profile(Profile::Phase);
    let routes: Vec<RouteChoice> = match a.route {
        RouteChoice::All if series_ok => vec![RouteChoice::Closed, RouteChoice::Series, RouteChoice::Oracle],
        RouteChoice::All => vec![RouteChoice::Closed, RouteChoice::Oracle],
        RouteChoice::Series if !series_ok => {
            return Err(CliError::Config("the series route needs m = 0 and an ordered form".into()))
        }
        one => vec![one],
    };
    let tol = g.tol.unwrap_or(1e-9);
    let (n, m) = (a.n, a.m);
    let per_y: Vec<_> = a
        .y
        .0
        .par_iter()
        .map(|&y| -> Result<(f64, Vec<GnEvaluation>, Option<f64>)> {
            let evals = routes
                .iter()
                .map(|route| match route {
                    RouteChoice::Closed if m == 0 => gn_closed(&spec, n, y),
                    RouteChoice::Closed => gnm(&spec, n, m, y),
                    RouteChoice::Series => gn_series(&spec, n, y, a.terms),
                    _ => gn_oracle(&spec, n, m, y),
                })
                .collect::<Result<Vec<_>>>()?;
            let rec = if a.recursion { Some(recursion_residual(&spec.shifted(m as i64), n - m, y)?) } else { None };
            Ok((y, evals, rec))
        })
        .collect();

    let mut headers = vec!["y", "route", "value", "err-estimate"];
    if a.recursion {
        headers.push("recursion-residual");
    }
    let mut t = Table::new(&headers);
    let mut worst: f64 = 0.0;
    let mut r = Report::new("gn");
    for item in per_y {
        let (y, evals, rec) = item?;
        for (i, e) in evals.iter().enumerate() {
            let name = serde_json::to_value(e.route).expect("route serializes");
            let mut row = vec![y.into(), name, complex(e.value), e.err_estimate.into()];
            if let Some(rr) = rec {
                row.push(rr.into());
            }
            t.push(row);
            for other in &evals[i + 1..] {
                worst = worst.max((e.value - other.value).norm());
            }
        }
        if let Some(rr) = rec {
            r.check(format!("recursion at y={y}"), rr, 1e-8);
        }
    }
    r.set("spec", spec.label());
    r.set("n", n);
    r.set("m", m);
    r.set("max-route-deviation", worst);
    r.set("tol", tol);
    r.check("route deviation".into(), worst, tol);
    r.table = Some(t);
    Ok(r)
}

fn weight_rule(a: &TriangleArgs) -> std::result::Result<WeightRule, CliError> {
    let param = |p: &str| {
        p.trim()
            .parse::<BigRational>()
            .map_err(|e| CliError::Config(format!("bad rule parameter '{p}': {e}")))
    };
    Ok(match a.rule.split_once(':') {
        Some(("tilde", p)) => WeightRule::Tilde(param(p)?),
        Some(("bar", p)) => WeightRule::Bar(param(p)?),
        None if a.rule == "gauss-tilde" => WeightRule::GaussTilde,
        None if a.rule == "gauss-bar" => WeightRule::GaussBar,
        None if a.rule == "unit" => WeightRule::Unit,
        None if a.rule == "lambda" => WeightRule::LambdaSymmetric(spec_of(&a.spec)?),
        _ => {
            return Err(CliError::Config(format!(
                "unknown rule '{}' (tilde:P, bar:P, gauss-tilde, gauss-bar, unit, lambda)",
                a.rule
            )))
        }
    })
}

fn triangle(a: &TriangleArgs) -> Out {
    let rule = weight_rule(a)?;
    let d = generate(rule, a.boundary, a.start, a.rows)?;
    let mut r = Report::new("triangle");
    r.set("rule", d.rule.name());
    r.set("boundary", serde_json::to_value(a.boundary).expect("boundary serializes"));
    r.set("start", a.start);
    r.set("rows", a.rows);
    r.set("invariants-ok", check_invariants(&d)?);
    let sums = |mode| -> Vec<Value> {
        row_sums(&d, mode).iter().map(|v| rational(&v.numer().to_string(), &v.denom().to_string())).collect()
    };
    r.set("row-sums", sums(SignMode::Plain));
    r.set("alternating-row-sums", sums(SignMode::Alternating));
    if let Some(n) = a.column {
        let series: Vec<Value> = column_series(&d, n)
            .iter()
            .map(|(p, c)| json!({ "power": p, "coefficient": rational(&c.numer().to_string(), &c.denom().to_string()) }))
            .collect();
        r.set("column", n);
        r.set("column-series", series);
    }
    let mut t = Table::new(&["row", "column", "num", "den"]);
    for node in node_records(&d) {
        t.push(vec![node.row.into(), node.column.into(), node.numerator.into(), node.denominator.into()]);
    }
    r.table = Some(t);
    r.diagram = Some(render_ascii(&d));
    Ok(r)
}

fn rotate(a: &RotateArgs, g: &GlobalOpts) -> Out {
    let spec = RotationSpec::new(a.omega, a.theta, a.phi, a.j);
    let methods: Vec<Method> = match a.method {
        Method::All => vec![Method::Factorized, Method::Direct, Method::Antinormal],
        one => vec![one],
    };
    let tol = g.tol.unwrap_or(1e-11);
    let mut mats: Vec<(&'static str, CMatrix)> = Vec::new();
    for method in &methods {
        let (name, u) = match method {
            Method::Factorized => ("factorized", rotation_factorized(&spec)?),
            Method::Direct => ("direct", rotation_direct(&spec)?),
            _ => ("antinormal", antinormal_rotation(&spec)?),
        };
        mats.push((name, u));
    }

    let mut r = Report::new("rotate");
    r.set("omega", a.omega);
    r.set("theta", a.theta);
    r.set("phi", a.phi);
    r.set("j", spec.j());
    r.set("s", complex(spec.s()));
    if let Ok(h) = spec.h() {
        r.set("h", complex(h));
    }
    r.set("layout", if a.layout == Layout::Matrix { "matrix" } else { "ket-action" });
    r.set("tol", tol);
    let mut deviations = serde_json::Map::new();
    for (i, (n1, u1)) in mats.iter().enumerate() {
        for (n2, u2) in &mats[i + 1..] {
            let d = max_abs_diff(u1.view(), u2.view());
            deviations.insert(format!("{n1}-{n2}"), d.into());
            r.check(format!("{n1} vs {n2}"), d, tol);
        }
    }
    if !deviations.is_empty() {
        r.set("deviations", Value::Object(deviations));
    }
    let mut unitarity = serde_json::Map::new();
    let mut t = Table::new(&["method", "row-m", "col-m", "value"]);
    for (name, u) in &mats {
        let defect = unitarity_defect(u).max((determinant(u).norm() - 1.0).abs());
        unitarity.insert(name.to_string(), defect.into());
        r.check(format!("{name} unitarity"), defect, 1e-12);
        let shown = match a.layout {
            Layout::Matrix => u.clone(),
            Layout::KetAction => ket_action(u),
        };
        for ((k, l), z) in shown.indexed_iter() {
            t.push(vec![(*name).into(), m_of(a.j, k).into(), m_of(a.j, l).into(), complex(*z)]);
        }
    }
    r.set("unitarity-defect", Value::Object(unitarity));
    r.table = Some(t);
    Ok(r)
}

fn phase(a: &PhaseArgs, g: &GlobalOpts) -> Out {
    let tol = g.tol.unwrap_or(1e-10);
    let top = a.n.max(a.m) as i64;
    let window = match (g.window, a.oracle_size) {
        (Some((lo, hi)), _) => Some(IndexWindow::new(lo, hi, lo.max(0).min(top), top)?),
        (None, 0) => None,
        (None, size) => Some(IndexWindow::new(0, size as i64 - 1, 0, top)?),
    };
    let spec = AlgebraSpec::profile(Profile::Phase);
    let rows: Vec<_> = a
        .y
        .0
        .par_iter()
        .map(|&y| -> Result<(f64, num_complex::Complex64, f64, Option<num_complex::Complex64>)> {
            let oracle = match window {
                Some(w) => Some(oracle_element(&spec, w, &Coeffs::u1(y), a.n as i64, a.m as i64)?),
                None => None,
            };
            Ok((y, phase_element(a.n, a.m, y), phase_gnm(a.n, a.m, y), oracle))
        })
        .collect();

    let mut r = Report::new("phase");
    r.set("n", a.n);
    r.set("m", a.m);
    if let Some(w) = window {
        r.set("window", window_json(&w));
        r.set("commutator-unit-impulse", commutator_is_unit_impulse(w.dim()));
    }
    let mut t = Table::new(&["y", "element", "g-nm", "oracle", "deviation"]);
    let mut worst: f64 = 0.0;
    for row in rows {
        let (y, el, gnm, oracle) = row?;
        let dev = oracle.map(|o| (o - el).norm());
        if let Some(d) = dev {
            worst = worst.max(d);
        }
        t.push(vec![y.into(), complex(el), gnm.into(), oracle.map(complex).into(), dev.into()]);
    }
    if window.is_some() {
        r.set("max-deviation", worst);
        r.set("tol", tol);
        r.check("element vs oracle".into(), worst, tol);
    }
    r.table = Some(t);
    Ok(r)
}

fn sumrule(a: &SumruleArgs, g: &GlobalOpts) -> Out {
    let rules = a.rules().map_err(CliError::Config)?;
    let tol = g.tol.unwrap_or(1e-10);
    let cases: Vec<(ladder_core::triangles::SumRule, f64)> =
        rules.iter().flat_map(|&rule| a.y.0.iter().map(move |&y| (rule, y))).collect();
    let results: Vec<Result<f64>> = cases.par_iter().map(|&(rule, y)| sumrule_check(rule, y, a.k_max)).collect();
    let mut r = Report::new("sumrule");
    r.set("k-max", a.k_max);
    r.set("tol", tol);
    let mut t = Table::new(&["rule", "y", "residual"]);
    let mut worst: f64 = 0.0;
    for ((rule, y), res) in cases.iter().zip(results) {
        let res = res?;
        worst = worst.max(res);
        r.check(format!("{} at y={y}", rule.name()), res, tol);
        t.push(vec![rule.name().into(), (*y).into(), res.into()]);
    }
    r.set("max-residual", worst);
    r.table = Some(t);
    Ok(r)
}
