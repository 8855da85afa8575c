use std::ops::RangeInclusive;

use serde_json::{json, Value};

use qlat::equivalence::{apply_rule, derive_canonical_rule, glue, BasisChange, TileWord};
use qlat::floorform::{
    asymmetric_params, eval_floorform, eval_singular_form, floorform_to_geometry, frequency_ratio,
    geometry_to_floorform, FloorFormParams, Form,
};
use qlat::geometry::{
    cut_and_project, cut_and_project_point, dualize_window, torus_slice, GeometricSpec, QuasiPoint,
    QuasilatticePoints,
};
use qlat::higher::{generate_degree_n, GeometricSpecN};
use qlat::selfsim::{
    catalog, count_selfsame, eigen_tau, enumerate_selfsame, inflate_params, is_self_similar, n_s, scale_families,
    MAX_S,
};
use qlat::QuadraticNumber as Q;

use crate::input::{self, SpecInput};
use crate::output::{json as to_json, tsv};
use crate::render;
use crate::{usage, Common, Format, Kind, Method, Run, Table};

fn format(args: &Common, default: Format, allowed: &[Format]) -> Run<Format> {
    let f = args.format.unwrap_or(default);
    if !allowed.contains(&f) {
        return usage(format!("format {f:?} is not available for this command").to_lowercase());
    }
    Ok(f)
}

fn big(b: &impl ToString) -> Value {
    let s = b.to_string();
    match s.parse::<i64>() {
        Ok(n) => json!(n),
        Err(_) => json!(s),
    }
}

fn approx(x: &Q) -> String {
    format!("{:.6}", x.to_f64())
}

fn method_name(m: Method) -> &'static str {
    match m {
        Method::CutAndProject => "cut-and-project",
        Method::Dualize => "dualize",
        Method::Torus => "torus",
        Method::Floorform => "floorform",
        Method::Form1 => "form1",
        Method::Form2 => "form2",
    }
}

/// Points of a quadratic spec by the chosen method, or with explicit
/// rounding signs when given.
pub fn quadratic_points(args: &Common, spec: &GeometricSpec, window: RangeInclusive<i64>) -> Run<QuasilatticePoints> {
    let (l1, l2) = (&spec.m1.par, &spec.m2.par);
    if let Some(signs) = input::signs(args)? {
        let form = match args.method {
            Method::Form1 => Form::Asymmetric1,
            Method::Form2 => Form::Asymmetric2,
            _ => Form::Symmetric,
        };
        let points = window
            .map(|n| Ok(QuasiPoint { index: n, x: eval_singular_form(spec, signs, form, 0, n, None)? }))
            .collect::<qlat::Result<Vec<_>>>()?;
        return Ok(QuasilatticePoints::from_points(points, l1, l2)?);
    }
    let pts = match args.method {
        Method::CutAndProject => cut_and_project(spec, window)?,
        Method::Dualize => dualize_window(spec, window)?,
        Method::Torus => torus_slice(spec, window)?,
        Method::Floorform => {
            let (p, _) = geometry_to_floorform(spec, 1)?;
            let points = window
                .map(|n| Ok(QuasiPoint { index: n, x: eval_floorform(&p, n)? }))
                .collect::<qlat::Result<Vec<_>>>()?;
            QuasilatticePoints::from_points(points, l1, l2)?
        }
        Method::Form1 | Method::Form2 => {
            let a = asymmetric_params(spec, if args.method == Method::Form1 { 1 } else { 2 })?;
            let points = window
                .map(|n| Ok(QuasiPoint { index: n, x: a.eval(n)? }))
                .collect::<qlat::Result<Vec<_>>>()?;
            QuasilatticePoints::from_points(points, l1, l2)?
        }
    };
    Ok(pts)
}

pub fn generate(args: &Common) -> Run<String> {
    let fmt = format(args, Format::Text, &[Format::Text, Format::Json, Format::Tsv])?;
    let window = input::window(args, (-20, 20))?;
    let (lo, hi) = (*window.start(), *window.end());
    match input::spec_input(args)? {
        SpecInput::Quadratic(spec) => {
            let pts = quadratic_points(args, &spec, window)?;
            let word = pts.word_string();
            Ok(match fmt {
                Format::Text => format!("{word}\n"),
                Format::Json => to_json(&json!({
                    "spec": spec,
                    "window": [lo, hi],
                    "method": method_name(args.method),
                    "signs": args.signs,
                    "points": pts.points.iter().map(|p| json!({"n": p.index, "x": p.x})).collect::<Vec<_>>(),
                    "word": word,
                })),
                _ => {
                    let rows: Vec<Vec<String>> = pts
                        .points
                        .iter()
                        .enumerate()
                        .map(|(i, p)| {
                            let gap = pts.word.get(i).map(|t| t.as_char().to_string()).unwrap_or_default();
                            vec![p.index.to_string(), p.x.to_human(), approx(&p.x), gap]
                        })
                        .collect();
                    tsv(&["n", "x", "x_approx", "next_gap"], &rows)
                }
            })
        }
        SpecInput::Higher(spec) => generate_higher(&spec, window, fmt),
    }
}

fn generate_higher(spec: &GeometricSpecN, window: RangeInclusive<i64>, fmt: Format) -> Run<String> {
    let (lo, hi) = (*window.start(), *window.end());
    let pts = generate_degree_n(spec, window)?;
    let steps: String = pts.steps.iter().map(|s| s.to_string()).collect();
    Ok(match fmt {
        Format::Text => format!("{steps}\n"),
        Format::Json => to_json(&json!({
            "dimension": spec.dim(),
            "window": [lo, hi],
            "points": pts.points.iter().map(|p| json!({"n": p.index, "x": p.x.to_string()})).collect::<Vec<_>>(),
            "steps": steps,
        })),
        _ => {
            let rows: Vec<Vec<String>> = pts
                .points
                .iter()
                .enumerate()
                .map(|(i, p)| {
                    let gap = pts.steps.get(i).map(|s| s.to_string()).unwrap_or_default();
                    vec![p.index.to_string(), p.x.to_string(), format!("{:.6}", p.x.approx()), gap]
                })
                .collect();
            tsv(&["n", "x", "x_approx", "next_step"], &rows)
        }
    })
}

/// Smallest `k` with `x_k(spec) >= x`, by bisection on the increasing sequence.
fn index_of(spec: &GeometricSpec, x: &Q) -> Run<i64> {
    let (mut lo, mut hi) = (-input::WINDOW_LIMIT, input::WINDOW_LIMIT);
    while lo < hi {
        let mid = lo + (hi - lo).div_euclid(2);
        if cut_and_project_point(spec, mid)? < *x {
            lo = mid + 1;
        } else {
            hi = mid;
        }
    }
    Ok(lo)
}

fn params_text(p: &FloorFormParams) -> String {
    format!(
        "S = {}\nL = {}\nkappa = {}\nalpha = {}\nbeta = {}\n",
        p.s.to_human(),
        p.l.to_human(),
        p.kappa.to_human(),
        p.alpha.to_human(),
        p.beta.to_human()
    )
}

pub fn convert(args: &Common) -> Run<String> {
    let fmt = format(args, Format::Json, &[Format::Text, Format::Json])?;
    if let Some(p) = input::params_file(args)? {
        let spec = floorform_to_geometry(&p)?;
        let (back, _) = geometry_to_floorform(&spec, 1)?;
        return Ok(match fmt {
            Format::Json => to_json(&json!({ "params": p, "spec": spec, "roundtrip": back, "identical": back == p })),
            _ => format!("{}identical = {}\n", params_text(&p), back == p),
        });
    }
    let spec = input::quadratic_spec(args)?;
    let (params, form1) = geometry_to_floorform(&spec, 1)?;
    let form2 = asymmetric_params(&spec, 2)?;
    let back = floorform_to_geometry(&params)?;
    let x0 = cut_and_project_point(&spec, 0)?;
    let k = index_of(&back, &x0)?;
    let same = (-50..=50).all(|n| match (cut_and_project_point(&spec, n), cut_and_project_point(&back, n + k)) {
        (Ok(a), Ok(b)) => a == b,
        _ => false,
    });
    if !same {
        return Err(qlat::Error::InvalidParams("round trip does not reproduce the sequence".into()).into());
    }
    let umklaap = back.solve_umklaap(&spec);
    Ok(match fmt {
        Format::Json => to_json(&json!({
            "spec": spec,
            "params": params,
            "forms": [form1, form2],
            "roundtrip": back,
            "index_shift": k,
            "umklaap": umklaap.map(|(a, b)| vec![a, b]),
        })),
        _ => format!("{}index_shift = {k}\n", params_text(&params)),
    })
}

pub fn substitute(args: &Common) -> Run<String> {
    let fmt = format(args, Format::Text, &[Format::Text, Format::Json])?;
    let e = input::require_entry(args)?;
    let Some(text) = &args.word else { return usage("--word is required") };
    let word: TileWord = text.parse()?;
    let out = if args.inverse { glue(&e.rule, &word)? } else { apply_rule(&e.rule, &word)? };
    Ok(match fmt {
        Format::Json => to_json(&json!({
            "case": e.case_id,
            "rule": e.rule,
            "direction": if args.inverse { "glue" } else { "decorate" },
            "input": word,
            "output": out,
        })),
        _ => format!("{out}\n"),
    })
}

pub fn derive_rule(args: &Common) -> Run<String> {
    let fmt = format(args, Format::Json, &[Format::Text, Format::Json])?;
    let spec = input::quadratic_spec(args)?;
    let Some(tau) = input::tau(args)? else { return usage("--tau or --case is required") };
    let rule = derive_canonical_rule(&spec, &tau)?;
    Ok(match fmt {
        Format::Json => to_json(&json!(rule)),
        _ => format!("{rule}\n"),
    })
}

pub fn analyze(args: &Common) -> Run<String> {
    let fmt = format(args, Format::Json, &[Format::Text, Format::Json])?;
    let spec = input::quadratic_spec(args)?;
    let tau = input::tau(args)?;
    let window = input::window(args, (-1000, 1000))?;
    let s_max = args.s_max.unwrap_or(3).min(MAX_S);
    let violations = match spec.validate_positive_basis() {
        Ok(()) => vec![],
        Err(v) => v.iter().map(|b| b.to_string()).collect(),
    };
    let mut out = serde_json::Map::new();
    out.insert("spec".into(), json!(spec));
    out.insert("discriminant".into(), json!(spec.discriminant()));
    out.insert("det".into(), json!(spec.det()));
    out.insert("width".into(), json!(spec.width()));
    out.insert("basis_violations".into(), json!(violations));
    out.insert(
        "lattice_point".into(),
        json!(spec.singular_lattice_point().map(|(a, b)| vec![big(&a), big(&b)])),
    );
    if violations.is_empty() {
        out.insert("frequency_ratio".into(), json!(frequency_ratio(&spec)?));
        if !spec.is_singular() {
            let pts = cut_and_project(&spec, window.clone())?;
            let c1 = pts.steps.iter().filter(|&&k| k == 1).count();
            out.insert(
                "steps".into(),
                json!({"window": [window.start(), window.end()], "m1": c1, "m2": pts.steps.len() - c1}),
            );
            out.insert("floorform".into(), json!(geometry_to_floorform(&spec, 1)?.0));
        }
    }
    if let Some(tau) = tau {
        out.insert("tau".into(), json!(tau.to_string()));
        let similar = is_self_similar(&spec, &tau);
        out.insert("self_similar".into(), json!(similar));
        if let Ok(e) = eigen_tau(&tau) {
            out.insert("eigen".into(), json!(e));
        }
        if similar {
            let mut rows = Vec::new();
            for s in 1..=s_max {
                let infl = inflate_params(&spec, &tau, s)?;
                let mut row = json!({"s": s, "q0_par": infl.q0_par, "q0_perp": infl.q0_perp, "N_s": big(&n_s(&tau, s))});
                if s <= 4 {
                    row["selfsame_classes"] = json!(enumerate_selfsame(&spec, &tau, s)?.len());
                }
                rows.push(row);
            }
            out.insert("inflations".into(), json!(rows));
        }
    }
    let v = Value::Object(out);
    Ok(match fmt {
        Format::Json => to_json(&v),
        _ => {
            let mut s = String::new();
            for (k, val) in v.as_object().unwrap() {
                s.push_str(&format!("{k} = {}\n", val));
            }
            s
        }
    })
}

fn cycle_rows(tau: &BasisChange, s_max: u32) -> Run<Vec<Vec<String>>> {
    (1..=s_max)
        .map(|s| {
            let c = count_selfsame(tau, s)?;
            Ok(vec![
                s.to_string(),
                c.f[s as usize - 1].to_string(),
                c.n_s.to_string(),
                c.irreducible.to_string(),
                c.cycles.to_string(),
            ])
        })
        .collect()
}

pub fn count_cycles(args: &Common) -> Run<String> {
    let fmt = format(args, Format::Tsv, &[Format::Text, Format::Json, Format::Tsv])?;
    let (name, tau) = input::counting_tau(args)?;
    let s_max = args.s_max.unwrap_or(12);
    if s_max == 0 || s_max > MAX_S {
        return usage(format!("--s-max must be in 1..={MAX_S}"));
    }
    let rows = cycle_rows(&tau, s_max)?;
    let header = ["s", "F_s", "N_s", "irreducible", "cycles"];
    Ok(match fmt {
        Format::Tsv => tsv(&header, &rows),
        Format::Json => to_json(&json!({
            "case": name,
            "tau": tau.to_string(),
            "rows": rows.iter().map(|r| {
                json!({"s": big(&r[0]), "F_s": big(&r[1]), "N_s": big(&r[2]), "irreducible": big(&r[3]), "cycles": big(&r[4])})
            }).collect::<Vec<_>>(),
        })),
        _ => rows
            .iter()
            .map(|r| format!("s={} F_s={} N_s={} irreducible={} cycles={}\n", r[0], r[1], r[2], r[3], r[4]))
            .collect(),
    })
}

pub fn tables(args: &Common) -> Run<String> {
    let fmt = format(args, Format::Tsv, &[Format::Text, Format::Json, Format::Tsv])?;
    let Some(which) = args.which else { return usage("--which catalog|cycles is required") };
    let (header, rows): (Vec<String>, Vec<Vec<String>>) = match which {
        Table::Catalog => {
            let header = ["case", "lambda_plus", "lambda_minus", "tau", "ratio_plus", "ratio_minus", "S'", "L'"];
            let rows = catalog()
                .iter()
                .map(|e| {
                    vec![
                        e.case_id.clone(),
                        e.lambda.lambda_par.to_human(),
                        e.lambda.lambda_perp.to_human(),
                        e.tau.to_string(),
                        e.lambda.v_par.to_human(),
                        e.lambda.v_perp.to_human(),
                        e.rule.word_s.to_string(),
                        e.rule.word_l.to_string(),
                    ]
                })
                .collect();
            (header.iter().map(|s| s.to_string()).collect(), rows)
        }
        Table::Cycles => {
            let s_max = args.s_max.unwrap_or(12).clamp(1, MAX_S);
            let fams = scale_families();
            let mut header = vec!["s".to_string()];
            for (f, _) in &fams {
                header.push(format!("F_s({f})"));
                header.push(format!("cycles({f})"));
            }
            let cols = fams.iter().map(|(_, t)| cycle_rows(t, s_max)).collect::<Run<Vec<_>>>()?;
            let rows = (0..s_max as usize)
                .map(|i| {
                    let mut r = vec![(i + 1).to_string()];
                    for c in &cols {
                        r.push(c[i][1].clone());
                        r.push(c[i][4].clone());
                    }
                    r
                })
                .collect();
            (header, rows)
        }
    };
    Ok(match fmt {
        Format::Tsv => tsv(&header.iter().map(|s| s.as_str()).collect::<Vec<_>>(), &rows),
        Format::Json => to_json(&json!(rows
            .iter()
            .map(|r| {
                let obj: serde_json::Map<String, Value> =
                    header.iter().zip(r).map(|(h, v)| (h.clone(), big(v))).collect();
                Value::Object(obj)
            })
            .collect::<Vec<_>>())),
        _ => rows.iter().map(|r| format!("{}\n", r.join("  "))).collect(),
    })
}

pub fn render(args: &Common) -> Run<String> {
    format(args, Format::Svg, &[Format::Svg])?;
    let Some(kind) = args.kind else { return usage("--kind ticks|bigrid|rule is required") };
    Ok(match kind {
        Kind::Ticks => {
            let spec = input::quadratic_spec(args)?;
            let pts = quadratic_points(args, &spec, input::window(args, (-10, 10))?)?;
            render::ticks(&pts)?
        }
        Kind::Bigrid => {
            let spec = input::quadratic_spec(args)?;
            render::bigrid(&spec, input::window(args, (-10, 10))?)?
        }
        Kind::Rule => {
            let e = input::require_entry(args)?;
            let spec = e.spec(Q::zero(), Q::ratio(1, 3));
            render::rule(&e.case_id, &e.rule, &spec.m1.par, &spec.m2.par)?
        }
    })
}
