//! Floor-form quasilattices `x_n = S(n-α) + (L-S)⌊κ(n-β)⌋`, their
//! conversion to and from geometric specs, and singular evaluation with
//! explicit rounding signs.

use serde::{Deserialize, Serialize};

use crate::equivalence::BasisChange;
use crate::error::{Error, Result};
use crate::geometry::{GeometricSpec, BasisVector, QuasiPoint, QuasilatticePoints};
use crate::numeric::QuadraticNumber as Q;
use crate::selfsim;

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct FloorFormParams {
    #[serde(rename = "S")]
    pub s: Q,
    #[serde(rename = "L")]
    pub l: Q,
    pub kappa: Q,
    pub alpha: Q,
    pub beta: Q,
}

impl FloorFormParams {
    pub fn new(s: Q, l: Q, kappa: Q, alpha: Q, beta: Q) -> Result<Self> {
        let p = FloorFormParams { s, l, kappa, alpha, beta };
        p.validate()?;
        Ok(p)
    }

    pub fn validate(&self) -> Result<()> {
        if !self.s.is_positive() {
            return Err(Error::InvalidParams("S must be positive".into()));
        }
        if self.l <= self.s {
            return Err(Error::InvalidParams("L must exceed S".into()));
        }
        if !(self.kappa.is_positive() && self.kappa < Q::one()) {
            return Err(Error::InvalidParams("kappa must lie in (0, 1)".into()));
        }
        if self.kappa.is_rational() {
            return Err(Error::InvalidParams("kappa must be irrational".into()));
        }
        Ok(())
    }
}

/// One of the two single-floor forms, tied to basis vector `which`.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct AsymmetricParams {
    pub which: u8,
    pub chi_par: Q,
    pub chi_perp: Q,
    pub kappa: Q,
    /// `m_which∥`.
    pub len_own: Q,
    /// `m_other∥`.
    pub len_other: Q,
    /// `m_other⊥ / m_which⊥`.
    pub perp_ratio: Q,
}

impl AsymmetricParams {
    /// `x_n = m∥(n-χ∥) + (m'∥-m∥)(⌊κ(n-χ⊥)⌋ + ½)`.
    pub fn eval(&self, n: i64) -> Result<Q> {
        let arg = &self.kappa * (Q::from_int(n) - &self.chi_perp);
        let f = arg.floor_exact();
        if f.is_integer {
            return Err(Error::SingularIndex(n));
        }
        Ok(&self.len_own * (Q::from_int(n) - &self.chi_par)
            + (&self.len_other - &self.len_own) * (Q::from_int(f.value) + Q::ratio(1, 2)))
    }

    /// Umklaap by `n1 m1 + n2 m2` expressed on the χ constants.
    pub fn umklaap(&self, n1: i64, n2: i64) -> Self {
        let (own, other) = if self.which == 1 { (n1, n2) } else { (n2, n1) };
        let mut out = self.clone();
        out.chi_par = &self.chi_par + Q::from_int(own) + (&self.len_other / &self.len_own) * other;
        out.chi_perp = &self.chi_perp + Q::from_int(own) + &self.perp_ratio * other;
        out
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct SingularSigns {
    pub sigma1: i8,
    pub sigma2: i8,
}

impl SingularSigns {
    pub fn new(sigma1: i8, sigma2: i8) -> Result<Self> {
        if sigma1.abs() != 1 || sigma2.abs() != 1 {
            return Err(Error::InvalidParams("signs must be +1 or -1".into()));
        }
        Ok(SingularSigns { sigma1, sigma2 })
    }
}

/// Which closed form to evaluate.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Form {
    Symmetric,
    Asymmetric1,
    Asymmetric2,
}

/// `x_n = S(n-α) + (L-S)⌊κ(n-β)⌋`.
pub fn eval_floorform(p: &FloorFormParams, n: i64) -> Result<Q> {
    let f = (&p.kappa * (Q::from_int(n) - &p.beta)).floor_exact();
    if f.is_integer {
        return Err(Error::SingularIndex(n));
    }
    Ok(&p.s * (Q::from_int(n) - &p.alpha) + (&p.l - &p.s) * Q::from_int(f.value))
}

pub fn floorform_points(p: &FloorFormParams, n_range: std::ops::RangeInclusive<i64>) -> Result<QuasilatticePoints> {
    let points = n_range
        .map(|n| Ok(QuasiPoint { index: n, x: eval_floorform(p, n)? }))
        .collect::<Result<Vec<_>>>()?;
    QuasilatticePoints::from_points(points, &p.s, &p.l)
}

/// The single-floor constants of form `which`.
pub fn asymmetric_params(spec: &GeometricSpec, which: u8) -> Result<AsymmetricParams> {
    let (own, other) = match which {
        1 => (&spec.m1, &spec.m2),
        2 => (&spec.m2, &spec.m1),
        _ => return Err(Error::InvalidParams(format!("form must be 1 or 2, got {which}"))),
    };
    Ok(AsymmetricParams {
        which,
        chi_par: spec.q0_par.checked_div(&own.par)?,
        chi_perp: spec.q0_perp.checked_div(&own.perp)?,
        kappa: own.perp.checked_div(&(&own.perp - &other.perp))?,
        len_own: own.par.clone(),
        len_other: other.par.clone(),
        perp_ratio: other.perp.checked_div(&own.perp)?,
    })
}

/// Floor-form parameters and the single-floor constants of form `which`.
///
/// The floor form is always built from the form whose own vector is the
/// shorter one, so `S < L`; the ½ offset is folded into `α`.
pub fn geometry_to_floorform(spec: &GeometricSpec, which: u8) -> Result<(FloorFormParams, AsymmetricParams)> {
    spec.require_positive()?;
    let asym = asymmetric_params(spec, which)?;
    let short = if spec.m1.par < spec.m2.par {
        1
    } else if spec.m2.par < spec.m1.par {
        2
    } else {
        return Err(Error::InvalidParams("basis vectors have equal ∥ length".into()));
    };
    let base = if short == which { asym.clone() } else { asymmetric_params(spec, short)? };
    let s = base.len_own.clone();
    let l = base.len_other.clone();
    let alpha = &base.chi_par - (&l - &s) / (&s * 2);
    let params = FloorFormParams::new(s, l, base.kappa.clone(), alpha, base.chi_perp.clone())?;
    Ok((params, asym))
}

/// A spec with `m1 = (S, 1)`, `m2 = (L, 1 - 1/κ)` reproducing `p`.
pub fn floorform_to_geometry(p: &FloorFormParams) -> Result<GeometricSpec> {
    p.validate()?;
    let m2_perp = Q::one() - p.kappa.recip()?;
    let q0_par = &p.s * &p.alpha + (&p.l - &p.s) / 2;
    Ok(GeometricSpec::new(
        BasisVector::new(p.s.clone(), Q::one()),
        BasisVector::new(p.l.clone(), m2_perp),
        q0_par,
        p.beta.clone(),
    ))
}

/// Umklaap on a spec offset; see [`GeometricSpec::umklaap`].
pub fn umklaap_spec(spec: &GeometricSpec, n1: i64, n2: i64) -> GeometricSpec {
    spec.umklaap(n1, n2)
}

/// `f1/f2 = -m2⊥/m1⊥`, the relative frequency of `m1∥` and `m2∥` steps.
pub fn frequency_ratio(spec: &GeometricSpec) -> Result<Q> {
    spec.require_positive()?;
    Ok(-spec.m2.perp.checked_div(&spec.m1.perp)?)
}

fn round_sigma(x: &Q, sigma: i8) -> Q {
    Q::from_int(if sigma > 0 { x.floor() } else { x.ceil() })
}

/// `x_{n,s}/λ∥^s` with `[·]_σ` rounding, correct also when the line meets
/// a lattice point. `tau` is needed only for `s > 0`.
pub fn eval_singular(
    spec: &GeometricSpec,
    signs: SingularSigns,
    s: u32,
    n: i64,
    tau: Option<&BasisChange>,
) -> Result<Q> {
    eval_singular_form(spec, signs, Form::Symmetric, s, n, tau)
}

pub fn eval_singular_form(
    spec: &GeometricSpec,
    signs: SingularSigns,
    form: Form,
    s: u32,
    n: i64,
    tau: Option<&BasisChange>,
) -> Result<Q> {
    let (spec_s, det_s) = if s == 0 {
        (spec.clone(), 1i8)
    } else {
        let tau = tau.ok_or_else(|| Error::InvalidParams("tau required for s > 0".into()))?;
        let det = tau.det();
        (selfsim::inflate_params(spec, tau, s)?, if det < 0 && s % 2 == 1 { -1 } else { 1 })
    };
    let s1 = signs.sigma1 * det_s;
    let s2 = signs.sigma2 * det_s;
    if form != Form::Symmetric && s1 != -s2 {
        return Err(Error::InconsistentSigns);
    }
    let half = Q::ratio(1, 2);
    let m1 = &spec_s.m1;
    let m2 = &spec_s.m2;
    let nq = Q::from_int(n);
    match form {
        Form::Symmetric => {
            let w = &m2.perp - &m1.perp;
            let a1 = (&nq * &m2.perp - &spec_s.q0_perp) / &w;
            let a2 = (&nq * &m1.perp - &spec_s.q0_perp) / (-&w);
            Ok((round_sigma(&a1, s1) + &half * i64::from(s1)) * &m1.par
                + (round_sigma(&a2, s2) + &half * i64::from(s2)) * &m2.par
                - &spec_s.q0_par)
        }
        Form::Asymmetric1 | Form::Asymmetric2 => {
            let which = if form == Form::Asymmetric1 { 1 } else { 2 };
            let sig = if which == 1 { s2 } else { s1 };
            let a = asymmetric_params(&spec_s, which)?;
            let arg = &a.kappa * (&nq - &a.chi_perp);
            Ok(&a.len_own * (&nq - &a.chi_par)
                + (&a.len_other - &a.len_own) * (round_sigma(&arg, sig) + &half * i64::from(sig)))
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::geometry::cut_and_project;

    fn case1(q0_par: Q, q0_perp: Q) -> GeometricSpec {
        GeometricSpec::new(
            BasisVector::new(Q::one(), Q::one()),
            BasisVector::new(Q::phi(), Q::one() - Q::phi()),
            q0_par,
            q0_perp,
        )
    }

    #[test]
    fn case1_kappa() {
        let spec = case1(Q::ratio(1, 7), Q::ratio(1, 3));
        let (p, a1) = geometry_to_floorform(&spec, 1).unwrap();
        let (_, a2) = geometry_to_floorform(&spec, 2).unwrap();
        assert_eq!(p.kappa, Q::phi().recip().unwrap());
        assert_eq!(&a1.kappa + &a2.kappa, Q::one());
    }

    #[test]
    fn forms_agree_with_cut_and_project() {
        let spec = case1(Q::ratio(1, 7), Q::ratio(1, 3));
        let pts = cut_and_project(&spec, -200..=200).unwrap();
        let (p, a1) = geometry_to_floorform(&spec, 1).unwrap();
        let (_, a2) = geometry_to_floorform(&spec, 2).unwrap();
        for pt in &pts.points {
            assert_eq!(eval_floorform(&p, pt.index).unwrap(), pt.x);
            assert_eq!(a1.eval(pt.index).unwrap(), pt.x);
            assert_eq!(a2.eval(pt.index).unwrap(), pt.x);
        }
    }

    #[test]
    fn fibonacci_floorform_word() {
        let phi = Q::phi();
        let p = FloorFormParams::new(Q::one(), phi.clone(), phi.recip().unwrap(), Q::zero(), Q::ratio(1, 3)).unwrap();
        let w = floorform_points(&p, -100..=100).unwrap().word_string();
        assert!(!w.contains("SS") && !w.contains("LLL"));
        let p0 = FloorFormParams::new(Q::one(), phi.clone(), phi.recip().unwrap(), Q::from_int(2), Q::one()).unwrap();
        assert!(eval_floorform(&p0, 2).unwrap().is_zero());
    }

    #[test]
    fn round_trip_through_geometry() {
        let phi = Q::phi();
        let p = FloorFormParams::new(Q::one(), phi.clone(), phi.recip().unwrap(), Q::ratio(2, 5), Q::ratio(1, 3)).unwrap();
        let spec = floorform_to_geometry(&p).unwrap();
        let pts = cut_and_project(&spec, -200..=200).unwrap();
        for pt in &pts.points {
            assert_eq!(eval_floorform(&p, pt.index).unwrap(), pt.x);
        }
        let (back, _) = geometry_to_floorform(&spec, 1).unwrap();
        assert_eq!(back, p);
    }

    #[test]
    fn asymmetric_umklaap() {
        let spec = case1(Q::ratio(1, 7), Q::ratio(1, 3));
        let a = asymmetric_params(&spec, 1).unwrap();
        assert_eq!(a.umklaap(0, 0), a);
        let b = a.umklaap(1, 0);
        assert_eq!(b.chi_par, &a.chi_par + Q::one());
        assert_eq!(b.chi_perp, &a.chi_perp + Q::one());
        assert_eq!(asymmetric_params(&spec.umklaap(2, 3), 1).unwrap(), a.umklaap(2, 3));
        let c = a.umklaap(2, 3);
        for n in -100..=100 {
            assert_eq!(c.eval(n).unwrap(), a.eval(n - 5).unwrap());
        }
    }

    #[test]
    fn singular_signs_differ_at_one_index() {
        let spec = case1(Q::zero(), Q::zero());
        let plus = SingularSigns::new(1, -1).unwrap();
        let minus = SingularSigns::new(-1, 1).unwrap();
        let diff: Vec<i64> = (-50..=50)
            .filter(|&n| eval_singular(&spec, plus, 0, n, None).unwrap() != eval_singular(&spec, minus, 0, n, None).unwrap())
            .collect();
        assert_eq!(diff, vec![0]);
        assert_eq!(
            eval_singular_form(&spec, SingularSigns::new(1, 1).unwrap(), Form::Asymmetric1, 0, 3, None),
            Err(Error::InconsistentSigns)
        );
    }

    #[test]
    fn frequency_ratios() {
        assert_eq!(frequency_ratio(&case1(Q::zero(), Q::ratio(1, 3))).unwrap(), Q::phi() - Q::one());
    }
}
