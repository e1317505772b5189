//! Morphisms of the symplectic side: formal sums of intersection points with
//! matrix coefficients, plus the algebraic compositions with intertwiners.

use crate::fukaya::{intersections, maslov, Brane};
use crate::{CMat, Error, Rat, Result, C64};

pub type Point = (Rat, Rat);

/// `Hom(L1, L2) = ⊕_{p ∈ L1∩L2} Hom((M1)_p, (M2)_p)` element: a list of
/// `(point, coefficient)` terms. Coefficients are `rank2 × rank1` matrices.
#[derive(Debug, Clone, PartialEq)]
pub struct PointSum {
    pub source: Brane,
    pub target: Brane,
    pub degree: i64,
    pub terms: Vec<(Point, CMat)>,
}

impl PointSum {
    /// Validates that every point lies on both geodesics and that the degree
    /// matches the Maslov index of the pair.
    pub fn new(source: Brane, target: Brane, terms: Vec<(Point, CMat)>) -> Result<Self> {
        let pts = intersections(&source, &target)?;
        let degree = maslov(&source, &target);
        for (p, m) in &terms {
            if !pts.contains(p) {
                return Err(Error::Malformed(format!(
                    "point ({}, {}) is not an intersection of the two geodesics",
                    p.0, p.1
                )));
            }
            if m.nrows() != target.rank() || m.ncols() != source.rank() {
                return Err(Error::DimensionMismatch(format!(
                    "coefficient must be {}x{}, got {}x{}",
                    target.rank(),
                    source.rank(),
                    m.nrows(),
                    m.ncols()
                )));
            }
        }
        Ok(Self {
            source,
            target,
            degree,
            terms,
        })
    }

    /// The rank-1 style basis: one term per intersection point and elementary
    /// fiber map, ordered by point index, then source column, then target row.
    pub fn basis(source: &Brane, target: &Brane) -> Result<Vec<PointSum>> {
        let pts = intersections(source, target)?;
        let mut out = Vec::new();
        for p in pts {
            for col in 0..source.rank() {
                for row in 0..target.rank() {
                    let mut m = CMat::zeros(target.rank(), source.rank());
                    m[(row, col)] = C64::new(1.0, 0.0);
                    out.push(PointSum::new(source.clone(), target.clone(), vec![(p, m)])?);
                }
            }
        }
        Ok(out)
    }

    pub fn scale(&self, s: C64) -> Self {
        let mut out = self.clone();
        for (_, m) in &mut out.terms {
            *m *= s;
        }
        out
    }

    pub fn coefficient(&self, p: &Point) -> CMat {
        let mut acc = CMat::zeros(self.target.rank(), self.source.rank());
        for (q, m) in &self.terms {
            if q == p {
                acc += m;
            }
        }
        acc
    }

    /// Largest entry-wise difference against another sum over the same pair.
    pub fn max_abs_diff(&self, other: &PointSum) -> f64 {
        let mut pts: Vec<Point> = self.terms.iter().map(|t| t.0).collect();
        for (p, _) in &other.terms {
            if !pts.contains(p) {
                pts.push(*p);
            }
        }
        pts.iter()
            .map(|p| {
                let d = self.coefficient(p) - other.coefficient(p);
                d.iter().map(|e| e.norm()).fold(0.0f64, f64::max)
            })
            .fold(0.0f64, f64::max)
    }
}

/// Post-compose with an intertwiner of the target: acts on each coefficient
/// from the left. The intertwiner must be `Hom(M_target, M_new)`.
pub fn compose_point_then_intertwiner(
    u: &PointSum,
    t: &CMat,
    new_target: &Brane,
) -> Result<PointSum> {
    if !u.target.same_geodesic(new_target) {
        return Err(Error::EndpointMismatch(
            "intertwiner lives on a different geodesic than the point sum target".into(),
        ));
    }
    let terms = u.terms.iter().map(|(p, m)| (*p, t * m)).collect();
    PointSum::new(u.source.clone(), new_target.clone(), terms)
}

/// Pre-compose with an intertwiner of the source: acts from the right.
pub fn compose_intertwiner_then_point(
    t: &CMat,
    u: &PointSum,
    new_source: &Brane,
) -> Result<PointSum> {
    if !u.source.same_geodesic(new_source) {
        return Err(Error::EndpointMismatch(
            "intertwiner lives on a different geodesic than the point sum source".into(),
        ));
    }
    let terms = u.terms.iter().map(|(p, m)| (*p, m * t)).collect();
    PointSum::new(new_source.clone(), u.target.clone(), terms)
}
