//! Intersection combinatorics of closed geodesics on the torus, in exact
//! rational arithmetic.

use crate::fukaya::{intertwiner_hom, maslov, Brane, BraneTuple};
use crate::{frac, Error, Rat, Result};

/// A lifted line `p·x - q·y = c` in the universal cover; `(q, p)` is its
/// primitive direction, and lattice translates realize `c + Z`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Line {
    pub p: i64,
    pub q: i64,
    pub c: Rat,
}

impl Line {
    pub fn through(brane: &Brane, point: (Rat, Rat)) -> Self {
        Line {
            p: brane.slope.p,
            q: brane.slope.q,
            c: Rat::from_integer(brane.slope.p) * point.0
                - Rat::from_integer(brane.slope.q) * point.1,
        }
    }

    pub fn base(brane: &Brane) -> Self {
        Line {
            p: brane.slope.p,
            q: brane.slope.q,
            c: brane.line_constant(),
        }
    }

    pub fn contains(&self, point: (Rat, Rat)) -> bool {
        Rat::from_integer(self.p) * point.0 - Rat::from_integer(self.q) * point.1 == self.c
    }

    /// Intersection point of two non-parallel lines.
    pub fn intersect(&self, other: &Line) -> Option<(Rat, Rat)> {
        let det = self.p * other.q - other.p * self.q;
        if det == 0 {
            return None;
        }
        let det = Rat::from_integer(det);
        // Solve p1 x - q1 y = c1, p2 x - q2 y = c2.
        let x = (Rat::from_integer(other.q) * self.c - Rat::from_integer(self.q) * other.c) / det;
        let y = (Rat::from_integer(other.p) * self.c - Rat::from_integer(self.p) * other.c) / det;
        Some((x, y))
    }
}

/// Intersection points of the two geodesics, reduced into `[0,1)²`.
///
/// There are exactly `|p1·q2 - p2·q1|` of them; fixing one lift of `L1` and
/// letting `k` index the lifts of `L2` modulo the deck action enumerates them
/// as the solutions of `p1·x - q1·y = c1`, `p2·x - q2·y = c2 - k`. For
/// integer slopes this is the classical
/// `e_k = ((n1·x1 - n2·x2 + k)/(n1 - n2), ...)` list, ordered by `k`.
pub fn intersections(l1: &Brane, l2: &Brane) -> Result<Vec<(Rat, Rat)>> {
    let d = l1.slope.p * l2.slope.q - l2.slope.p * l1.slope.q;
    if d == 0 {
        if l1.same_geodesic(l2) {
            return Err(Error::NonTransversal(
                "identical geodesics; use intertwiner homs".into(),
            ));
        }
        return Ok(Vec::new());
    }
    let a = Line::base(l1);
    let b = Line::base(l2);
    let mut out = Vec::with_capacity(d.unsigned_abs() as usize);
    for k in 0..d.abs() {
        let shifted = Line {
            c: b.c - Rat::from_integer(k),
            ..b
        };
        let (x, y) = a.intersect(&shifted).expect("non-parallel by d != 0");
        out.push((frac(x), frac(y)));
    }
    Ok(out)
}

/// Dimension of the degree-`degree` morphism space.
///
/// Transversal pairs contribute `|L1 ∩ L2|·rank1·rank2` exactly when the
/// Maslov index equals the requested degree; same-geodesic pairs contribute
/// the intertwiner kernel dimension when `α2 + degree - α1 ∈ {0, 1}` (the
/// `{0}` case is `Hom(M1,M2)`, the `{1}` case its `H¹`, of equal dimension).
pub fn hom_dim_branes(o1: &Brane, o2: &Brane, degree: i64) -> usize {
    if o1.slope == o2.slope && o1.line_class() == o2.line_class() {
        let d = o2.alpha + degree as f64 - o1.alpha;
        let snapped = d.round();
        if (d - snapped).abs() < 1e-9 && (snapped == 0.0 || snapped == 1.0) {
            return intertwiner_hom(o1, o2).map(|b| b.len()).unwrap_or(0);
        }
        return 0;
    }
    if maslov(o1, o2) != degree {
        return 0;
    }
    match intersections(o1, o2) {
        Ok(pts) => pts.len() * o1.rank() * o2.rank(),
        Err(_) => 0,
    }
}

/// Tuple version: morphisms are matrices of blocks, so dimensions add.
pub fn hom_dim(o1: &BraneTuple, o2: &BraneTuple, degree: i64) -> usize {
    o1.0.iter()
        .map(|a| {
            o2.0.iter()
                .map(|b| hom_dim_branes(a, b, degree))
                .sum::<usize>()
        })
        .sum()
}
