//! Three equivalent geometric constructions of a quadratic quasilattice.
//!
//! A [`GeometricSpec`] fixes a lattice basis `{m1, m2}` and a cut line
//! `q(t) = q0 + t ê∥`, all written in the orthonormal frame `(ê∥, ê⊥)`
//! adapted to the line. From it we build the quasilattice by
//!
//! * dualizing the bi-grid of grid-line crossing times ([`dualize`]),
//! * projecting midpoints of the parallelograms the line crosses
//!   ([`cut_and_project`]), and
//! * walking the wrapped geodesic on the torus `R²/Λ` and recording where it
//!   crosses a perpendicular segment through the marked point
//!   ([`torus_slice`]).
//!
//! The index-driven cut-and-project formula is the production path; the
//! other two are kept as independent cross-checks.

use std::fmt;
use std::ops::RangeInclusive;

use num_bigint::BigInt;
use num_traits::ToPrimitive;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::numeric::QuadraticNumber as Q;

/// A basis vector split into components along and across the line.
#[derive(Clone, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub struct BasisVector {
    pub par: Q,
    pub perp: Q,
}

impl BasisVector {
    pub fn new(par: Q, perp: Q) -> Self {
        BasisVector { par, perp }
    }

    /// `a·self + b·other`.
    pub fn combine(&self, a: i64, other: &BasisVector, b: i64) -> BasisVector {
        BasisVector {
            par: &self.par * a + &other.par * b,
            perp: &self.perp * a + &other.perp * b,
        }
    }
}

/// A positive lattice basis together with the offset of the cut line.
#[derive(Clone, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(try_from = "SpecWire", into = "SpecWire")]
pub struct GeometricSpec {
    pub m1: BasisVector,
    pub m2: BasisVector,
    pub q0_par: Q,
    pub q0_perp: Q,
}

#[derive(Serialize, Deserialize)]
struct SpecWire {
    #[serde(rename = "D")]
    d: u64,
    m1: BasisVector,
    m2: BasisVector,
    q0: BasisVector,
}

impl From<GeometricSpec> for SpecWire {
    fn from(s: GeometricSpec) -> Self {
        SpecWire {
            d: s.discriminant(),
            m1: s.m1,
            m2: s.m2,
            q0: BasisVector::new(s.q0_par, s.q0_perp),
        }
    }
}

impl TryFrom<SpecWire> for GeometricSpec {
    type Error = Error;

    fn try_from(w: SpecWire) -> Result<Self> {
        let spec = GeometricSpec::new(w.m1, w.m2, w.q0.par, w.q0.perp);
        let d = spec.discriminant();
        if d != 1 && d != w.d {
            return Err(Error::MixedDiscriminant(w.d, d));
        }
        Ok(spec)
    }
}

/// Which positivity condition a basis violates.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum BasisViolation {
    /// The basis matrix is singular.
    Degenerate,
    /// `m̃^i ê∥ > 0` fails: ê∥ is not in the first quadrant of the basis.
    FirstQuadrant,
    /// `m_i · ê∥ > 0` fails.
    ParallelProjection,
    /// `m1⊥ / m2⊥` is rational (or a perpendicular component vanishes).
    RationalSlope,
    /// Components come from different quadratic fields.
    MixedFields,
}

impl fmt::Display for BasisViolation {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let s = match self {
            BasisViolation::Degenerate => "degenerate basis",
            BasisViolation::FirstQuadrant => "dual-basis contraction with ê∥ not positive",
            BasisViolation::ParallelProjection => "basis vector with non-positive ∥ projection",
            BasisViolation::RationalSlope => "line has rational slope in this basis",
            BasisViolation::MixedFields => "components from different quadratic fields",
        };
        f.write_str(s)
    }
}

/// A crossing of the cut line with grid line `index` of `family` (1 or 2).
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct GridTime {
    pub t: Q,
    pub family: u8,
    pub index: i64,
}

/// The two tile letters.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum Tile {
    S,
    L,
}

impl Tile {
    pub fn as_char(self) -> char {
        match self {
            Tile::S => 'S',
            Tile::L => 'L',
        }
    }
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct QuasiPoint {
    pub index: i64,
    pub x: Q,
}

/// Consecutive quasilattice points over an index window.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct QuasilatticePoints {
    pub points: Vec<QuasiPoint>,
    /// Basis family (1 or 2) of each gap between consecutive points.
    pub steps: Vec<u8>,
    /// Tile letter of each gap; the shorter basis length is `S`.
    pub word: Vec<Tile>,
}

impl QuasilatticePoints {
    /// Assembles points, checking that every gap is `m1∥` or `m2∥`.
    pub fn from_points(points: Vec<QuasiPoint>, len1: &Q, len2: &Q) -> Result<Self> {
        let long_is_1 = len1 > len2;
        let mut steps = Vec::with_capacity(points.len().saturating_sub(1));
        let mut word = Vec::with_capacity(points.len().saturating_sub(1));
        for w in points.windows(2) {
            let gap = &w[1].x - &w[0].x;
            let family = if &gap == len1 {
                1
            } else if &gap == len2 {
                2
            } else {
                return Err(Error::SingularIndex(w[1].index));
            };
            let long = (family == 1) == long_is_1 && len1 != len2;
            steps.push(family);
            word.push(if long { Tile::L } else { Tile::S });
        }
        Ok(QuasilatticePoints { points, steps, word })
    }

    pub fn xs(&self) -> Vec<Q> {
        self.points.iter().map(|p| p.x.clone()).collect()
    }

    pub fn word_string(&self) -> String {
        self.word.iter().map(|t| t.as_char()).collect()
    }

    pub fn len(&self) -> usize {
        self.points.len()
    }

    pub fn is_empty(&self) -> bool {
        self.points.is_empty()
    }
}

fn half() -> Q {
    Q::ratio(1, 2)
}

fn big_to_i64(x: &BigInt) -> i64 {
    x.to_i64().expect("index outside i64 range")
}

impl GeometricSpec {
    pub fn new(m1: BasisVector, m2: BasisVector, q0_par: Q, q0_perp: Q) -> Self {
        GeometricSpec { m1, m2, q0_par, q0_perp }
    }

    /// Common discriminant of all components (1 if all rational).
    pub fn discriminant(&self) -> u64 {
        [&self.m1.par, &self.m1.perp, &self.m2.par, &self.m2.perp, &self.q0_par, &self.q0_perp]
            .iter()
            .filter(|x| !x.is_rational())
            .map(|x| x.discriminant())
            .next()
            .unwrap_or(1)
    }

    fn fields_agree(&self) -> bool {
        let d = self.discriminant();
        [&self.m1.par, &self.m1.perp, &self.m2.par, &self.m2.perp, &self.q0_par, &self.q0_perp]
            .iter()
            .all(|x| x.is_rational() || x.discriminant() == d)
    }

    /// Same basis, new line offset.
    pub fn with_offset(&self, q0_par: Q, q0_perp: Q) -> Self {
        GeometricSpec {
            m1: self.m1.clone(),
            m2: self.m2.clone(),
            q0_par,
            q0_perp,
        }
    }

    /// `det [m1 m2]` in the `(ê∥, ê⊥)` frame.
    pub fn det(&self) -> Q {
        &self.m1.par * &self.m2.perp - &self.m2.par * &self.m1.perp
    }

    /// Coordinates of a vector `(par, perp)` in the `{m1, m2}` basis, i.e.
    /// the dual-basis contractions `(m̃¹v, m̃²v)`.
    pub fn dual_coords(&self, par: &Q, perp: &Q) -> Result<(Q, Q)> {
        let det = self.det();
        if det.is_zero() {
            return Err(Error::DegenerateBasis);
        }
        let c1 = (&self.m2.perp * par - &self.m2.par * perp).checked_div(&det)?;
        let c2 = (&self.m1.par * perp - &self.m1.perp * par).checked_div(&det)?;
        Ok((c1, c2))
    }

    /// `(m̃¹ê∥, m̃²ê∥)`.
    pub fn dual_par(&self) -> Result<(Q, Q)> {
        self.dual_coords(&Q::one(), &Q::zero())
    }

    /// Width `|m2⊥ - m1⊥|` of the acceptance window.
    pub fn width(&self) -> Q {
        (&self.m2.perp - &self.m1.perp).abs()
    }

    /// Checks both positivity conditions and slope irrationality exactly.
    pub fn validate_positive_basis(&self) -> std::result::Result<(), Vec<BasisViolation>> {
        if !self.fields_agree() {
            return Err(vec![BasisViolation::MixedFields]);
        }
        let mut bad = Vec::new();
        match self.dual_par() {
            Err(_) => return Err(vec![BasisViolation::Degenerate]),
            Ok((a1, a2)) => {
                if !(a1.is_positive() && a2.is_positive()) {
                    bad.push(BasisViolation::FirstQuadrant);
                }
            }
        }
        if !(self.m1.par.is_positive() && self.m2.par.is_positive()) {
            bad.push(BasisViolation::ParallelProjection);
        }
        let rational_slope = self.m2.perp.is_zero()
            || self.m1.perp.is_zero()
            || self.m1.perp.checked_div(&self.m2.perp).map(|r| r.is_rational()).unwrap_or(true);
        if rational_slope {
            bad.push(BasisViolation::RationalSlope);
        }
        if bad.is_empty() {
            Ok(())
        } else {
            Err(bad)
        }
    }

    pub(crate) fn require_positive(&self) -> Result<()> {
        self.validate_positive_basis().map_err(|v| {
            if v.contains(&BasisViolation::Degenerate) {
                Error::DegenerateBasis
            } else {
                let names: Vec<String> = v.iter().map(|b| b.to_string()).collect();
                Error::NotPositiveBasis(names.join("; "))
            }
        })
    }

    /// Translates the line by the lattice vector `n1 m1 + n2 m2`.
    pub fn umklaap(&self, n1: i64, n2: i64) -> Self {
        let shift = self.m1.combine(n1, &self.m2, n2);
        self.with_offset(&self.q0_par + &shift.par, &self.q0_perp + &shift.perp)
    }

    /// Solves `other.q0 = self.q0 + n1 m1 + n2 m2` for integers, if the two
    /// specs share a basis and such a shift exists.
    pub fn solve_umklaap(&self, other: &GeometricSpec) -> Option<(i64, i64)> {
        if self.m1 != other.m1 || self.m2 != other.m2 {
            return None;
        }
        let dpar = &other.q0_par - &self.q0_par;
        let dperp = &other.q0_perp - &self.q0_perp;
        let (c1, c2) = self.dual_coords(&dpar, &dperp).ok()?;
        Some((big_to_i64(&c1.to_integer()?), big_to_i64(&c2.to_integer()?)))
    }

    /// Whether the cut line passes through a lattice point.
    pub fn is_singular(&self) -> bool {
        // q0⊥ = k1 m1⊥ + k2 m2⊥ for integers k, i.e. the point
        // q0 - (k1 m1 + k2 m2) lies on the line.
        self.singular_lattice_point().is_some()
    }

    /// The lattice coordinates `(k1, k2)` of the lattice point on the line.
    pub fn singular_lattice_point(&self) -> Option<(BigInt, BigInt)> {
        // Lattice point k·m lies on q(t) iff k·m⊥ = q0⊥. With m1⊥/m2⊥
        // irrational this has at most one solution; write everything over
        // the basis {1, √D} and solve the 2×2 rational system.
        let (a, b, c) = (&self.m1.perp, &self.m2.perp, &self.q0_perp);
        let parts = |x: &Q| -> (Q, Q) {
            let r = Q::from_int(x.r().clone());
            (Q::from_int(x.p().clone()) / &r, Q::from_int(x.q().clone()) / &r)
        };
        let (a0, a1) = parts(a);
        let (b0, b1) = parts(b);
        let (c0, c1) = parts(c);
        let det = &a0 * &b1 - &a1 * &b0;
        if det.is_zero() {
            return None;
        }
        let k1 = (&c0 * &b1 - &c1 * &b0) / &det;
        let k2 = (&a0 * &c1 - &a1 * &c0) / &det;
        Some((k1.to_integer()?, k2.to_integer()?))
    }
}

/// Merged, time-sorted grid crossings of both families for grid-line
/// indices in `n_range`.
pub fn bigrid_times(spec: &GeometricSpec, n_range: RangeInclusive<i64>) -> Result<Vec<GridTime>> {
    spec.require_positive()?;
    let (e1, e2) = spec.dual_par()?;
    let (c1, c2) = spec.dual_coords(&spec.q0_par, &spec.q0_perp)?;
    let mut out = Vec::new();
    for n in n_range {
        out.push(GridTime { t: (Q::from_int(n) - &c1) / &e1, family: 1, index: n });
        out.push(GridTime { t: (Q::from_int(n) - &c2) / &e2, family: 2, index: n });
    }
    out.sort_by(|a, b| a.t.cmp(&b.t).then(a.family.cmp(&b.family)));
    Ok(out)
}

/// Grid crossings with `t_lo < t < t_hi`, sorted.
pub fn grid_times_between(spec: &GeometricSpec, t_lo: &Q, t_hi: &Q) -> Result<Vec<GridTime>> {
    spec.require_positive()?;
    let (e1, e2) = spec.dual_par()?;
    let (c1, c2) = spec.dual_coords(&spec.q0_par, &spec.q0_perp)?;
    let mut out = Vec::new();
    for (family, c, e) in [(1u8, &c1, &e1), (2u8, &c2, &e2)] {
        // m̃^i q(t) = c + t e runs over (c + t_lo e, c + t_hi e)
        let lo = (c + &(t_lo * e)).floor();
        let hi = (c + &(t_hi * e)).ceil();
        let mut n = lo;
        while n <= hi {
            let t = (Q::from_int(n.clone()) - c) / e;
            if &t > t_lo && &t < t_hi {
                out.push(GridTime { t, family, index: big_to_i64(&n) });
            }
            n += 1;
        }
    }
    out.sort_by(|a, b| a.t.cmp(&b.t).then(a.family.cmp(&b.family)));
    Ok(out)
}

/// The dual point `x(t) = ⌊m̃¹q(t)⌋m1∥ + ⌊m̃²q(t)⌋m2∥ + C`, with the midpoint
/// phase `C = ½m1∥ + ½m2∥ - q0∥`.
pub fn dualize(spec: &GeometricSpec, t: &Q) -> Result<Q> {
    dualize_indexed(spec, t).map(|p| p.x)
}

/// [`dualize`] together with the plateau index `⌊m̃¹q(t)⌋ + ⌊m̃²q(t)⌋ + 1`.
pub fn dualize_indexed(spec: &GeometricSpec, t: &Q) -> Result<QuasiPoint> {
    spec.require_positive()?;
    let (a1, a2) = spec.dual_coords(&(&spec.q0_par + t), &spec.q0_perp)?;
    let (f1, f2) = (a1.floor_exact(), a2.floor_exact());
    if f1.is_integer || f2.is_integer {
        return Err(Error::OnGridLine(t.to_human()));
    }
    let c = (&spec.m1.par + &spec.m2.par) * half() - &spec.q0_par;
    let index = big_to_i64(&(&f1.value + &f2.value)) + 1;
    let x = Q::from_int(f1.value) * &spec.m1.par + Q::from_int(f2.value) * &spec.m2.par + c;
    Ok(QuasiPoint { index, x })
}

/// Dual points of every complete plateau between grid crossings inside
/// `(t_lo, t_hi)`, in order of increasing `t`.
pub fn dual_points(spec: &GeometricSpec, t_lo: &Q, t_hi: &Q) -> Result<Vec<QuasiPoint>> {
    let times = grid_times_between(spec, t_lo, t_hi)?;
    let mut out = Vec::new();
    for w in times.windows(2) {
        if w[0].t == w[1].t {
            return Err(Error::SingularLine(w[0].index));
        }
        let mid = (&w[0].t + &w[1].t) * half();
        out.push(dualize_indexed(spec, &mid)?);
    }
    Ok(out)
}

/// The quasilattice over an index window obtained by sampling the
/// dualization once per bi-grid plateau.
pub fn dualize_window(spec: &GeometricSpec, n_range: RangeInclusive<i64>) -> Result<QuasilatticePoints> {
    let (lo, hi) = (*n_range.start(), *n_range.end());
    let t_lo = diagonal_time(spec, lo - 2)?;
    let t_hi = diagonal_time(spec, hi + 2)?;
    let points: Vec<QuasiPoint> = dual_points(spec, &t_lo, &t_hi)?
        .into_iter()
        .filter(|p| n_range.contains(&p.index))
        .collect();
    if points.len() as i64 != (hi - lo + 1).max(0) {
        return Err(Error::SingularLine(lo));
    }
    QuasilatticePoints::from_points(points, &spec.m1.par, &spec.m2.par)
}

/// Time `t_n` at which the line crosses the transverse diagonal of the
/// `n`-th parallelogram: `m̃ q(t_n) = n` with `m̃ = m̃¹ + m̃²`.
pub fn diagonal_time(spec: &GeometricSpec, n: i64) -> Result<Q> {
    let (e1, e2) = spec.dual_par()?;
    let (c1, c2) = spec.dual_coords(&spec.q0_par, &spec.q0_perp)?;
    Ok((Q::from_int(n) - c1 - c2) / (e1 + e2))
}

/// The `n`-th point from the symmetric cut-and-project formula.
pub fn cut_and_project_point(spec: &GeometricSpec, n: i64) -> Result<Q> {
    let w = &spec.m2.perp - &spec.m1.perp;
    let a1 = (&spec.m2.perp * n - &spec.q0_perp) / &w;
    let a2 = (&spec.m1.perp * n - &spec.q0_perp) / (-&w);
    let (f1, f2) = (a1.floor_exact(), a2.floor_exact());
    if f1.is_integer || f2.is_integer {
        return Err(Error::SingularLine(n));
    }
    Ok((Q::from_int(f1.value) + half()) * &spec.m1.par + (Q::from_int(f2.value) + half()) * &spec.m2.par
        - &spec.q0_par)
}

/// Midpoint cut-and-project over an index window.
pub fn cut_and_project(spec: &GeometricSpec, n_range: RangeInclusive<i64>) -> Result<QuasilatticePoints> {
    spec.require_positive()?;
    let points = n_range
        .map(|n| Ok(QuasiPoint { index: n, x: cut_and_project_point(spec, n)? }))
        .collect::<Result<Vec<_>>>()?;
    QuasilatticePoints::from_points(points, &spec.m1.par, &spec.m2.par)
}

/// Signed perpendicular offset of the geodesic from the marked point of
/// cell `k`, i.e. `q0⊥ - ((k1+½)m1⊥ + (k2+½)m2⊥)`.
fn torus_offset(spec: &GeometricSpec, k1: i64, k2: i64) -> Q {
    &spec.q0_perp - (Q::from_int(k1) + half()) * &spec.m1.perp - (Q::from_int(k2) + half()) * &spec.m2.perp
}

/// Intersections of the wrapped geodesic with the perpendicular segment of
/// length `|m2⊥ - m1⊥|` centred on the marked point, walked cell by cell.
pub fn torus_slice(spec: &GeometricSpec, n_range: RangeInclusive<i64>) -> Result<QuasilatticePoints> {
    spec.require_positive()?;
    let half_width = spec.width() * half();
    let inside = |k1: i64, k2: i64| -> Result<bool> {
        let y = torus_offset(spec, k1, k2);
        let gap = &half_width - &y.abs();
        match gap.sign() {
            0 => Err(Error::SingularLine(k1 + k2 + 1)),
            s => Ok(s > 0),
        }
    };
    let (lo, hi) = (*n_range.start(), *n_range.end());
    if lo > hi {
        return Ok(QuasilatticePoints { points: vec![], steps: vec![], word: vec![] });
    }

    // Locate the first crossing: cells with k1 + k2 = lo - 1, offset linear
    // in k1 with slope (m2⊥ - m1⊥). Start from a float guess and walk.
    let slope = &spec.m2.perp - &spec.m1.perp;
    let base = torus_offset(spec, 0, lo - 1);
    let guess = (-base.to_f64() / slope.to_f64()).round();
    let mut k1 = if guess.is_finite() { guess as i64 } else { 0 };
    let mut tries = 0u32;
    loop {
        if inside(k1, lo - 1 - k1)? {
            break;
        }
        let y = torus_offset(spec, k1, lo - 1 - k1);
        // moving k1 by +1 changes the offset by +slope
        let up = (y.sign() < 0) == slope.is_positive();
        k1 += if up { 1 } else { -1 };
        tries += 1;
        if tries > 1_000_000 {
            return Err(Error::SingularLine(lo));
        }
    }
    let mut k2 = lo - 1 - k1;

    let point = |k1: i64, k2: i64| -> Q {
        (Q::from_int(k1) + half()) * &spec.m1.par + (Q::from_int(k2) + half()) * &spec.m2.par - &spec.q0_par
    };
    let mut points = vec![QuasiPoint { index: lo, x: point(k1, k2) }];
    for n in lo + 1..=hi {
        let step1 = inside(k1 + 1, k2)?;
        let step2 = inside(k1, k2 + 1)?;
        match (step1, step2) {
            (true, false) => k1 += 1,
            (false, true) => k2 += 1,
            _ => return Err(Error::SingularLine(n)),
        }
        points.push(QuasiPoint { index: n, x: point(k1, k2) });
    }
    QuasilatticePoints::from_points(points, &spec.m1.par, &spec.m2.par)
}

#[cfg(test)]
mod tests {
    use super::*;

    fn phi() -> Q {
        Q::phi()
    }

    fn case1(q0_par: Q, q0_perp: Q) -> GeometricSpec {
        GeometricSpec::new(
            BasisVector::new(Q::one(), Q::one()),
            BasisVector::new(phi(), Q::one() - phi()),
            q0_par,
            q0_perp,
        )
    }

    #[test]
    fn positive_basis_checks() {
        assert_eq!(case1(Q::zero(), Q::zero()).validate_positive_basis(), Ok(()));
        let same_side = GeometricSpec::new(
            BasisVector::new(Q::one(), Q::one()),
            BasisVector::new(phi(), phi().recip().unwrap()),
            Q::zero(),
            Q::zero(),
        );
        assert!(same_side
            .validate_positive_basis()
            .unwrap_err()
            .contains(&BasisViolation::FirstQuadrant));
        let backwards = GeometricSpec::new(
            BasisVector::new(-Q::one(), Q::one()),
            BasisVector::new(phi(), Q::one() - phi()),
            Q::zero(),
            Q::zero(),
        );
        assert!(backwards
            .validate_positive_basis()
            .unwrap_err()
            .contains(&BasisViolation::ParallelProjection));
    }

    #[test]
    fn case1_bigrid_family1_times() {
        let spec = case1(Q::zero(), Q::zero());
        let times = bigrid_times(&spec, -3..=3).unwrap();
        let fam1: Vec<_> = times.iter().filter(|g| g.family == 1).collect();
        let step = Q::sqrt(5) * phi();
        for g in fam1 {
            assert_eq!(g.t, &step * g.index);
        }
        let zeros: Vec<_> = times.iter().filter(|g| g.index == 0).collect();
        assert!(zeros.iter().all(|g| g.t.is_zero()));
        let (e1, e2) = spec.dual_par().unwrap();
        assert_eq!(e2 / e1, phi());
    }

    #[test]
    fn dualization_jumps_by_basis_lengths() {
        let third = Q::ratio(1, 3);
        let spec = case1(Q::ratio(2, 7), third.clone());
        let (c1, c2) = spec.dual_coords(&spec.q0_par, &spec.q0_perp).unwrap();
        let expected = (Q::one() + phi()) * half() - Q::ratio(2, 7)
            + Q::from_int(c1.floor()) * Q::one()
            + Q::from_int(c2.floor()) * phi();
        // t = 0 is not a grid time for this offset
        assert_eq!(dualize(&spec, &Q::zero()).unwrap(), expected);

        let times = grid_times_between(&spec, &Q::from_int(-20), &Q::from_int(20)).unwrap();
        for w in times.windows(3) {
            let before = dualize(&spec, &((&w[0].t + &w[1].t) * half())).unwrap();
            let after = dualize(&spec, &((&w[1].t + &w[2].t) * half())).unwrap();
            let jump = if w[1].family == 1 { Q::one() } else { phi() };
            assert_eq!(after - before, jump);
        }
        let on_line = &times[0].t;
        assert!(matches!(dualize(&spec, on_line), Err(Error::OnGridLine(_))));
    }

    #[test]
    fn fibonacci_gap_structure() {
        let spec = case1(Q::zero(), Q::ratio(1, 3));
        let pts = cut_and_project(&spec, -300..=300).unwrap();
        let word = pts.word_string();
        assert!(!word.contains("SS"));
        assert!(!word.contains("LLL"));
    }

    #[test]
    fn singular_line_is_reported() {
        let spec = case1(Q::zero(), Q::zero());
        assert!(matches!(cut_and_project(&spec, -5..=5), Err(Error::SingularLine(0))));
        assert!(spec.is_singular());
        assert!(!case1(Q::zero(), Q::ratio(1, 3)).is_singular());
    }

    #[test]
    fn torus_segment_length_case1() {
        assert_eq!(case1(Q::zero(), Q::zero()).width(), phi());
    }

    #[test]
    fn torus_slice_matches_cut_and_project() {
        let spec = case1(Q::ratio(2, 7), Q::ratio(1, 3));
        assert_eq!(torus_slice(&spec, -50..=50).unwrap(), cut_and_project(&spec, -50..=50).unwrap());
    }

    #[test]
    fn dualization_window_matches_cut_and_project() {
        let spec = case1(Q::ratio(2, 7), Q::ratio(1, 3));
        assert_eq!(dualize_window(&spec, -40..=40).unwrap(), cut_and_project(&spec, -40..=40).unwrap());
    }

    #[test]
    fn midpoint_offset_gives_reflection_symmetric_points() {
        let spec = case1((Q::one() + phi()) * half(), (Q::one() + Q::one() - phi()) * half());
        // the marked cell k = (0, 0) carries index 1
        let pts = torus_slice(&spec, -39..=41).unwrap();
        let xs = pts.xs();
        let n = xs.len();
        for i in 0..n {
            assert_eq!(xs[i], -xs[n - 1 - i].clone());
        }
    }

    #[test]
    fn umklaap_reindexes() {
        let spec = case1(Q::ratio(1, 5), Q::ratio(1, 3));
        let shifted = spec.umklaap(1, 0);
        for n in -20..=20 {
            assert_eq!(
                cut_and_project_point(&shifted, n).unwrap(),
                cut_and_project_point(&spec, n - 1).unwrap()
            );
        }
        assert_eq!(spec.solve_umklaap(&spec.umklaap(-3, 4)), Some((-3, 4)));
    }
}
