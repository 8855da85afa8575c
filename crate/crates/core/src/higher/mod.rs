//! Degree-N quasilattices: an N-dimensional lattice cut by a line, the
//! 1D N-grid of hyperplane crossings, and its dualization
//! `x = Σ ⌊m̃^k q(t)⌋ m_k∥ + C`, `C = ½ Σ m_k∥ - q0∥`.
//!
//! Scalars live in a number field `Q(γ)` of any degree; signs and floors
//! are certified by interval refinement of `γ`.

pub mod field;

use std::cmp::Ordering;
use std::ops::RangeInclusive;
use std::sync::Arc;

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{One, Zero};
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::geometry::GeometricSpec;
pub use field::{CertifiedFloor, FieldElem, NumberField};

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct BasisVectorN {
    pub par: FieldElem,
    pub perp: Vec<FieldElem>,
}

impl BasisVectorN {
    fn coords(&self) -> Vec<FieldElem> {
        std::iter::once(self.par.clone()).chain(self.perp.iter().cloned()).collect()
    }
}

/// `N` basis vectors and the line offset, all in one number field.
#[derive(Clone, Debug)]
pub struct GeometricSpecN {
    pub field: Arc<NumberField>,
    pub basis: Vec<BasisVectorN>,
    pub q0: BasisVectorN,
    /// `m̃^k ê∥`.
    dual_par: Vec<FieldElem>,
    /// `m̃^k q0`.
    dual_q0: Vec<FieldElem>,
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct GridTimeN {
    pub t: FieldElem,
    pub family: usize,
    pub index: i64,
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct QuasiPointN {
    pub index: i64,
    pub x: FieldElem,
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct QuasilatticePointsN {
    pub points: Vec<QuasiPointN>,
    /// Basis family (1-based) of each gap.
    pub steps: Vec<usize>,
}

/// Inverse of a square matrix over the field by Gauss-Jordan elimination.
fn invert(field: &Arc<NumberField>, m: &[Vec<FieldElem>]) -> Result<Vec<Vec<FieldElem>>> {
    let n = m.len();
    let mut a: Vec<Vec<FieldElem>> = m.to_vec();
    let mut inv: Vec<Vec<FieldElem>> = (0..n)
        .map(|i| (0..n).map(|j| field.from_int(i64::from(i == j))).collect())
        .collect();
    for col in 0..n {
        let piv = (col..n).find(|&r| !a[r][col].is_zero()).ok_or(Error::DegenerateBasis)?;
        a.swap(col, piv);
        inv.swap(col, piv);
        let p = a[col][col].recip()?;
        for c in 0..n {
            a[col][c] = a[col][c].mul(&p)?;
            inv[col][c] = inv[col][c].mul(&p)?;
        }
        for r in 0..n {
            if r == col || a[r][col].is_zero() {
                continue;
            }
            let k = a[r][col].clone();
            for c in 0..n {
                a[r][c] = a[r][c].sub(&k.mul(&a[col][c])?)?;
                inv[r][c] = inv[r][c].sub(&k.mul(&inv[col][c])?)?;
            }
        }
    }
    Ok(inv)
}

impl GeometricSpecN {
    /// Builds and validates a positive basis with pairwise incommensurate
    /// grid spacings.
    pub fn new(field: Arc<NumberField>, basis: Vec<BasisVectorN>, q0: BasisVectorN) -> Result<Self> {
        let n = basis.len();
        if n < 2 {
            return Err(Error::InvalidParams("need at least two basis vectors".into()));
        }
        if basis.iter().chain(std::iter::once(&q0)).any(|b| b.perp.len() != n - 1) {
            return Err(Error::InvalidParams(format!("every vector needs {} perpendicular components", n - 1)));
        }
        // rows m_k in (par, perp…) coordinates; column k of M^{-1} is m̃^k
        let rows: Vec<Vec<FieldElem>> = basis.iter().map(BasisVectorN::coords).collect();
        let inv = invert(&field, &rows)?;
        let q = q0.coords();
        let dual_par: Vec<FieldElem> = (0..n).map(|k| inv[0][k].clone()).collect();
        let dual_q0 = (0..n)
            .map(|k| {
                (0..n).try_fold(field.from_int(0), |acc, c| acc.add(&q[c].mul(&inv[c][k])?))
            })
            .collect::<Result<Vec<_>>>()?;
        let spec = GeometricSpecN { field, basis, q0, dual_par, dual_q0 };
        spec.validate()?;
        Ok(spec)
    }

    fn validate(&self) -> Result<()> {
        for (k, b) in self.basis.iter().enumerate() {
            if b.par.sign()? <= 0 {
                return Err(Error::NotPositiveBasis(format!("m{}∥ is not positive", k + 1)));
            }
            if self.dual_par[k].sign()? <= 0 {
                return Err(Error::NotPositiveBasis(format!("m̃^{} ê∥ is not positive", k + 1)));
            }
        }
        for j in 0..self.dim() {
            for k in j + 1..self.dim() {
                if self.dual_par[j].div(&self.dual_par[k])?.is_rational() {
                    return Err(Error::NotPositiveBasis(format!("grid families {} and {} are commensurate", j + 1, k + 1)));
                }
            }
        }
        Ok(())
    }

    pub fn dim(&self) -> usize {
        self.basis.len()
    }

    pub fn dual_par(&self) -> &[FieldElem] {
        &self.dual_par
    }

    /// Translates the line by `m_k` (1-based).
    pub fn umklaap(&self, k: usize) -> Result<Self> {
        let m = &self.basis[k - 1];
        let q0 = BasisVectorN {
            par: self.q0.par.add(&m.par)?,
            perp: self.q0.perp.iter().zip(&m.perp).map(|(a, b)| a.add(b)).collect::<Result<_>>()?,
        };
        GeometricSpecN::new(self.field.clone(), self.basis.clone(), q0)
    }

    /// The quadratic spec re-expressed over `Q(√D)` as a generic field.
    pub fn from_quadratic(spec: &GeometricSpec) -> Result<Self> {
        let field = NumberField::quadratic(spec.discriminant())?;
        let e = |x| field.from_quadratic(x);
        let bv = |par, perp| -> Result<BasisVectorN> { Ok(BasisVectorN { par: e(par)?, perp: vec![e(perp)?] }) };
        let basis = vec![bv(&spec.m1.par, &spec.m1.perp)?, bv(&spec.m2.par, &spec.m2.perp)?];
        let q0 = bv(&spec.q0_par, &spec.q0_perp)?;
        GeometricSpecN::new(field.clone(), basis, q0)
    }
}

/// Crossing times of the family-`k` hyperplanes (1-based) with indices in `n_range`.
pub fn ngrid_times(spec: &GeometricSpecN, k: usize, n_range: RangeInclusive<i64>) -> Result<Vec<GridTimeN>> {
    if k == 0 || k > spec.dim() {
        return Err(Error::InvalidParams(format!("family {k} out of range")));
    }
    let inv_e = spec.dual_par[k - 1].recip()?;
    let c = &spec.dual_q0[k - 1];
    n_range
        .map(|n| Ok(GridTimeN { t: c.neg().add_int(n).mul(&inv_e)?, family: k, index: n }))
        .collect()
}

/// Dualized N-grid over an index window; the `n`-th point is the plateau
/// on which `Σ_k ⌊m̃^k q(t)⌋ = n - 1`.
pub fn generate_degree_n(spec: &GeometricSpecN, n_range: RangeInclusive<i64>) -> Result<QuasilatticePointsN> {
    let (lo, hi) = (*n_range.start(), *n_range.end());
    let n = spec.dim();
    let mut out = QuasilatticePointsN { points: Vec::new(), steps: Vec::new() };
    if lo > hi {
        return Ok(out);
    }
    let inv_e: Vec<FieldElem> = spec.dual_par.iter().map(FieldElem::recip).collect::<Result<_>>()?;
    // start where Σ m̃^k q(t) = lo - 1, so Σ ⌊·⌋ ≤ lo - 1
    let sum_e = spec.dual_par.iter().try_fold(spec.field.from_int(0), |a, e| a.add(e))?;
    let sum_c = spec.dual_q0.iter().try_fold(spec.field.from_int(0), |a, c| a.add(c))?;
    let t0 = sum_c.neg().add_int(lo - 1).div(&sum_e)?;
    let mut floors: Vec<BigInt> = (0..n)
        .map(|k| Ok(spec.dual_q0[k].add(&spec.dual_par[k].mul(&t0)?)?.floor_certified()?.value))
        .collect::<Result<_>>()?;
    let half = BigRational::new(BigInt::one(), BigInt::from(2));
    let c = spec
        .basis
        .iter()
        .try_fold(spec.field.from_int(0), |a, b| a.add(&b.par))?
        .scale(&half)
        .sub(&spec.q0.par)?;
    let x_of = |floors: &[BigInt]| -> Result<FieldElem> {
        floors.iter().zip(&spec.basis).try_fold(c.clone(), |acc, (f, b)| {
            acc.add(&b.par.scale(&BigRational::from_integer(f.clone())))
        })
    };
    // next crossing time of family k: (⌊v_k⌋ + 1 - c_k) / e_k
    let next_time = |k: usize, f: &BigInt| -> Result<FieldElem> {
        let shift = spec.field.from_rat(BigRational::from_integer(f + 1));
        shift.sub(&spec.dual_q0[k])?.mul(&inv_e[k])
    };
    let mut sum: BigInt = floors.iter().sum();
    let mut times: Vec<FieldElem> = (0..n).map(|k| next_time(k, &floors[k])).collect::<Result<_>>()?;
    let mut last_family = None;
    loop {
        if sum >= BigInt::from(lo - 1) {
            let index = lo + out.points.len() as i64;
            if let Some(fam) = last_family.filter(|_| !out.points.is_empty()) {
                out.steps.push(fam + 1);
            }
            out.points.push(QuasiPointN { index, x: x_of(&floors)? });
            if index == hi {
                return Ok(out);
            }
        }
        let mut best = 0;
        for k in 1..n {
            match times[k].cmp_exact(&times[best])? {
                Ordering::Less => best = k,
                Ordering::Equal => return Err(Error::GridCoincidence),
                Ordering::Greater => {}
            }
        }
        for k in 0..n {
            if k != best && times[k] == times[best] {
                return Err(Error::GridCoincidence);
            }
        }
        floors[best] += 1;
        sum += 1;
        times[best] = next_time(best, &floors[best])?;
        last_family = Some(best);
    }
}

/// The cubic toy: `Z³` cut along `d = (1, γ, γ²)` with `γ³ = γ + 1`.
///
/// Coordinates are `par(v) = v·d` and `perp_j(v) = u_j·v` with
/// `u_j = d_{j+1} e_1 - e_{j+1}`, so `ê∥` has coordinates `(1, 0, 0)` up to
/// scale. `q0` is given in lattice coordinates.
pub fn plastic_toy_spec(q0: [BigRational; 3]) -> Result<GeometricSpecN> {
    let field = NumberField::new(
        vec![BigInt::from(-1), BigInt::from(-1), BigInt::zero(), BigInt::one()],
        BigRational::from_integer(BigInt::one()),
        BigRational::from_integer(BigInt::from(2)),
    )?;
    let g = field.gen();
    let d = [field.from_int(1), g.clone(), g.mul(&g)?];
    let coords = |v: [FieldElem; 3]| -> Result<BasisVectorN> {
        let par = d.iter().zip(&v).try_fold(field.from_int(0), |a, (x, y)| a.add(&x.mul(y)?))?;
        let perp = (1..3)
            .map(|j| d[j].mul(&v[0])?.sub(&v[j]))
            .collect::<Result<Vec<_>>>()?;
        Ok(BasisVectorN { par, perp })
    };
    let unit = |i: usize| -> [FieldElem; 3] {
        std::array::from_fn(|j| field.from_int(i64::from(i == j)))
    };
    let basis = vec![coords(unit(0))?, coords(unit(1))?, coords(unit(2))?];
    let q = coords(q0.map(|r| field.from_rat(r)))?;
    GeometricSpecN::new(field.clone(), basis, q)
}

/// JSON form: field polynomial and isolating interval, then the spec with
/// scalars as space-separated rational coefficients in powers of `γ`.
#[derive(Clone, Debug, Serialize, Deserialize)]
pub struct SpecNWire {
    pub field: FieldWire,
    pub m: Vec<VectorWire>,
    pub q0: VectorWire,
}

#[derive(Clone, Debug, Serialize, Deserialize)]
pub struct FieldWire {
    pub poly: Vec<i64>,
    pub root: [String; 2],
}

#[derive(Clone, Debug, Serialize, Deserialize)]
pub struct VectorWire {
    pub par: String,
    pub perp: Vec<String>,
}

impl SpecNWire {
    pub fn build(&self, cap: u32) -> Result<GeometricSpecN> {
        let r = |s: &str| s.parse::<BigRational>().map_err(|_| Error::Parse(s.to_string()));
        let field = NumberField::with_precision_cap(
            self.field.poly.iter().map(|&c| BigInt::from(c)).collect(),
            r(&self.field.root[0])?,
            r(&self.field.root[1])?,
            cap,
        )?;
        let vec = |w: &VectorWire| -> Result<BasisVectorN> {
            Ok(BasisVectorN {
                par: FieldElem::parse(&field, &w.par)?,
                perp: w.perp.iter().map(|p| FieldElem::parse(&field, p)).collect::<Result<_>>()?,
            })
        };
        let basis = self.m.iter().map(vec).collect::<Result<_>>()?;
        GeometricSpecN::new(field.clone(), basis, vec(&self.q0)?)
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::geometry::{bigrid_times, cut_and_project, BasisVector};
    use crate::numeric::QuadraticNumber as Q;

    fn r(n: i64, d: i64) -> BigRational {
        BigRational::new(BigInt::from(n), BigInt::from(d))
    }

    fn case1() -> GeometricSpec {
        GeometricSpec::new(
            BasisVector::new(Q::one(), Q::one()),
            BasisVector::new(Q::phi(), Q::one() - Q::phi()),
            Q::ratio(1, 5),
            Q::ratio(1, 3),
        )
    }

    #[test]
    fn degree_two_matches_cut_and_project() {
        let spec = case1();
        let n = GeometricSpecN::from_quadratic(&spec).unwrap();
        let pts = generate_degree_n(&n, -60..=60).unwrap();
        let reference = cut_and_project(&spec, -60..=60).unwrap();
        let xs: Vec<Q> = pts.points.iter().map(|p| p.x.to_quadratic().unwrap()).collect();
        assert_eq!(xs, reference.xs());
        assert_eq!(pts.steps.iter().map(|&s| s as u8).collect::<Vec<_>>(), reference.steps);
    }

    #[test]
    fn degree_two_grid_times() {
        let spec = case1();
        let n = GeometricSpecN::from_quadratic(&spec).unwrap();
        let reference = bigrid_times(&spec, -5..=5).unwrap();
        for k in 1..=2u8 {
            let ours = ngrid_times(&n, k as usize, -5..=5).unwrap();
            let theirs: Vec<Q> = reference.iter().filter(|g| g.family == k).map(|g| g.t.clone()).collect();
            let ours: Vec<Q> = ours.iter().map(|g| g.t.to_quadratic().unwrap()).collect();
            assert_eq!(ours, theirs);
        }
    }

    #[test]
    fn plastic_toy_has_three_gaps() {
        let spec = plastic_toy_spec([r(1, 3), r(1, 5), r(1, 7)]).unwrap();
        let pts = generate_degree_n(&spec, -300..=300).unwrap();
        let mut seen = [false; 3];
        for w in pts.points.windows(2) {
            let gap = w[1].x.sub(&w[0].x).unwrap();
            let k = spec.basis.iter().position(|b| b.par == gap).expect("gap is a basis length");
            seen[k] = true;
            assert_eq!(gap.sign().unwrap(), 1);
        }
        assert_eq!(seen, [true; 3]);
    }

    #[test]
    fn plastic_zero_offset_times() {
        let spec = plastic_toy_spec([r(0, 1), r(0, 1), r(0, 1)]).unwrap();
        for k in 1..=3 {
            assert!(ngrid_times(&spec, k, 0..=0).unwrap()[0].t.is_zero());
        }
    }

    #[test]
    fn umklaap_reindexes_by_one() {
        let spec = plastic_toy_spec([r(1, 3), r(1, 5), r(1, 7)]).unwrap();
        let a = generate_degree_n(&spec, -50..=50).unwrap();
        let b = generate_degree_n(&spec.umklaap(2).unwrap(), -49..=51).unwrap();
        let xa: Vec<_> = a.points.iter().map(|p| p.x.clone()).collect();
        let xb: Vec<_> = b.points.iter().map(|p| p.x.clone()).collect();
        assert_eq!(xa, xb);
    }
}
