use std::ops::RangeInclusive;
use std::path::Path;

use qlat::equivalence::BasisChange;
use qlat::floorform::{floorform_to_geometry, FloorFormParams, SingularSigns};
use qlat::geometry::GeometricSpec;
use qlat::higher::{GeometricSpecN, SpecNWire};
use qlat::higher::field::DEFAULT_PRECISION_CAP;
use qlat::selfsim::{catalog_entry, scale_families, CatalogEntry};
use qlat::QuadraticNumber as Q;

use crate::{usage, Common, Failure, Run};

pub const WINDOW_LIMIT: i64 = 1_000_000;

pub enum SpecInput {
    Quadratic(GeometricSpec),
    Higher(GeometricSpecN),
}

fn read_json(path: &Path) -> Run<serde_json::Value> {
    let text = std::fs::read_to_string(path)
        .map_err(|e| Failure::Usage(format!("cannot read {}: {e}", path.display())))?;
    serde_json::from_str(&text).map_err(|e| Failure::Usage(format!("{}: {e}", path.display())))
}

fn decode<T: serde::de::DeserializeOwned>(v: serde_json::Value, what: &str) -> Run<T> {
    serde_json::from_value(v).map_err(|e| Failure::Usage(format!("invalid {what}: {e}")))
}

pub fn precision_cap() -> Run<u32> {
    match std::env::var("QLAT_PRECISION_CAP") {
        Err(_) => Ok(DEFAULT_PRECISION_CAP),
        Ok(v) => v
            .trim()
            .parse()
            .map_err(|_| Failure::Usage(format!("QLAT_PRECISION_CAP must be a positive integer, got {v:?}"))),
    }
}

pub fn entry(args: &Common) -> Run<Option<CatalogEntry>> {
    match &args.case {
        None => Ok(None),
        Some(id) => Ok(Some(catalog_entry(id)?)),
    }
}

pub fn require_entry(args: &Common) -> Run<CatalogEntry> {
    match entry(args)? {
        Some(e) => Ok(e),
        None => usage("--case is required"),
    }
}

fn q0(args: &Common) -> Run<(Q, Q)> {
    match &args.q0 {
        None => Ok((Q::zero(), Q::ratio(1, 3))),
        Some(s) => {
            let parts: Vec<&str> = s.split(',').collect();
            if parts.len() != 2 {
                return usage(format!("--q0 expects par,perp, got {s:?}"));
            }
            Ok((parts[0].trim().parse()?, parts[1].trim().parse()?))
        }
    }
}

/// The spec named by `--spec`, `--params` or `--case` (with `--q0`).
pub fn spec_input(args: &Common) -> Run<SpecInput> {
    let given = [args.spec.is_some(), args.params.is_some(), args.case.is_some()];
    if given.iter().filter(|&&g| g).count() != 1 {
        return usage("exactly one of --spec, --params, --case is required");
    }
    if let Some(path) = &args.spec {
        let v = read_json(path)?;
        if v.get("field").is_some() {
            let wire: SpecNWire = decode(v, "spec")?;
            return Ok(SpecInput::Higher(wire.build(precision_cap()?)?));
        }
        return Ok(SpecInput::Quadratic(decode(v, "spec")?));
    }
    if let Some(path) = &args.params {
        let p: FloorFormParams = decode(read_json(path)?, "params")?;
        return Ok(SpecInput::Quadratic(floorform_to_geometry(&p)?));
    }
    let e = require_entry(args)?;
    let (p, q) = q0(args)?;
    Ok(SpecInput::Quadratic(e.spec(p, q)))
}

pub fn quadratic_spec(args: &Common) -> Run<GeometricSpec> {
    match spec_input(args)? {
        SpecInput::Quadratic(s) => Ok(s),
        SpecInput::Higher(_) => usage("this command needs a quadratic spec"),
    }
}

pub fn params_file(args: &Common) -> Run<Option<FloorFormParams>> {
    match &args.params {
        None => Ok(None),
        Some(p) => Ok(Some(decode(read_json(p)?, "params")?)),
    }
}

/// `--tau`, else the catalog case's `τ`.
pub fn tau(args: &Common) -> Run<Option<BasisChange>> {
    if let Some(t) = &args.tau {
        return Ok(Some(t.parse().map_err(|_| Failure::Usage(format!("--tau expects a,b,c,d, got {t:?}")))?));
    }
    Ok(entry(args)?.map(|e| e.tau))
}

/// `τ` for counting: `--tau`, a catalog case, or a scale family 1..4.
pub fn counting_tau(args: &Common) -> Run<(String, BasisChange)> {
    if let Some(t) = &args.tau {
        let tau: BasisChange = t.parse().map_err(|_| Failure::Usage(format!("--tau expects a,b,c,d, got {t:?}")))?;
        return Ok((tau.to_string(), tau));
    }
    let Some(id) = &args.case else { return usage("--case or --tau is required") };
    if let Some((name, tau)) = scale_families().into_iter().find(|(f, _)| f == id) {
        return Ok((name.to_string(), tau));
    }
    Ok((id.clone(), catalog_entry(id)?.tau))
}

pub fn window(args: &Common, default: (i64, i64)) -> Run<RangeInclusive<i64>> {
    let (lo, hi) = match &args.window {
        None => default,
        Some(w) => {
            let Some((a, b)) = w.split_once(':') else { return usage(format!("--window expects lo:hi, got {w:?}")) };
            let p = |s: &str| s.trim().parse::<i64>().map_err(|_| Failure::Usage(format!("bad window bound {s:?}")));
            (p(a)?, p(b)?)
        }
    };
    if lo > hi {
        return usage(format!("empty window {lo}:{hi}"));
    }
    if lo.abs() > WINDOW_LIMIT || hi.abs() > WINDOW_LIMIT {
        return usage(format!("window bounds must satisfy |n| <= {WINDOW_LIMIT}"));
    }
    Ok(lo..=hi)
}

pub fn signs(args: &Common) -> Run<Option<SingularSigns>> {
    let Some(s) = &args.signs else { return Ok(None) };
    let v: Vec<i8> = s
        .chars()
        .map(|c| match c {
            '+' => Ok(1),
            '-' => Ok(-1),
            _ => usage(format!("--signs expects two of + and -, got {s:?}")),
        })
        .collect::<Run<_>>()?;
    if v.len() != 2 {
        return usage(format!("--signs expects two of + and -, got {s:?}"));
    }
    Ok(Some(SingularSigns::new(v[0], v[1])?))
}
