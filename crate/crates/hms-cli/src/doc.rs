//! JSON document schemas and their conversions to the core types.
//!
//! Conventions: rationals are `[num, den]` pairs, complex numbers `[re, im]`
//! arrays, matrices row-major lists of rows. Every load re-checks the module
//! invariants (reduced rationals, nilpotency, slope/grading compatibility).
//! Floats are emitted with 17 significant digits so output is byte-stable
//! and round-trips exactly.

use hms_core::fukaya::{Brane, BraneTuple, Monodromy, PointSum, Slope};
use hms_core::numerics::NilpotentMatrix;
use hms_core::sheaves::{BundleDesc, SectionElement, TorsionDesc};
use hms_core::{CMat, Rat, C64};
use serde::{Deserialize, Serialize};
use std::io::Write;

pub type RatDoc = [i64; 2];
pub type CplxDoc = [f64; 2];
pub type MatDoc = Vec<Vec<CplxDoc>>;

pub fn rat_to_doc(r: Rat) -> RatDoc {
    [*r.numer(), *r.denom()]
}

pub fn rat_from_doc(d: RatDoc) -> Result<Rat, String> {
    if d[1] == 0 {
        return Err("rational with zero denominator".into());
    }
    Ok(Rat::new(d[0], d[1]))
}

pub fn mat_to_doc(m: &CMat) -> MatDoc {
    (0..m.nrows())
        .map(|i| {
            (0..m.ncols())
                .map(|j| [m[(i, j)].re, m[(i, j)].im])
                .collect()
        })
        .collect()
}

pub fn mat_from_doc(d: &MatDoc) -> Result<CMat, String> {
    let rows = d.len();
    let cols = d.first().map_or(0, |r| r.len());
    if rows == 0 || cols == 0 || d.iter().any(|r| r.len() != cols) {
        return Err("matrix document must be rectangular and nonempty".into());
    }
    let mut m = CMat::zeros(rows, cols);
    for (i, row) in d.iter().enumerate() {
        for (j, &[re, im]) in row.iter().enumerate() {
            m[(i, j)] = C64::new(re, im);
        }
    }
    Ok(m)
}

fn nil_from_doc(d: &MatDoc) -> Result<NilpotentMatrix, String> {
    NilpotentMatrix::new(mat_from_doc(d)?).map_err(|e| e.to_string())
}

/// An A- or B-side object.
#[derive(Debug, Clone, Serialize, Deserialize, PartialEq)]
pub struct ObjectDocument {
    pub side: String,
    #[serde(flatten)]
    pub body: ObjectBody,
}

#[derive(Debug, Clone, Serialize, Deserialize, PartialEq)]
#[serde(tag = "kind", rename_all = "lowercase")]
pub enum ObjectBody {
    Brane {
        slope: [i64; 2],
        intercept: RatDoc,
        alpha: f64,
        phase: f64,
        nil: MatDoc,
    },
    Bundle {
        degree: i64,
        twist_a: RatDoc,
        twist_b: f64,
        nil: MatDoc,
        level: u32,
    },
    Torsion {
        point_a: RatDoc,
        point_b: f64,
        nil: MatDoc,
    },
    Tuple {
        components: Vec<ObjectDocument>,
    },
}

impl ObjectDocument {
    pub fn from_brane(b: &Brane) -> Self {
        ObjectDocument {
            side: "A".into(),
            body: ObjectBody::Brane {
                slope: [b.slope.p, b.slope.q],
                intercept: rat_to_doc(b.intercept),
                alpha: b.alpha,
                phase: b.monodromy.phase_b,
                nil: mat_to_doc(b.monodromy.nil.matrix()),
            },
        }
    }

    pub fn from_tuple(t: &BraneTuple) -> Self {
        if t.0.len() == 1 {
            return Self::from_brane(&t.0[0]);
        }
        ObjectDocument {
            side: "A".into(),
            body: ObjectBody::Tuple {
                components: t.0.iter().map(Self::from_brane).collect(),
            },
        }
    }

    pub fn from_bundle(b: &BundleDesc) -> Self {
        ObjectDocument {
            side: "B".into(),
            body: ObjectBody::Bundle {
                degree: b.degree,
                twist_a: rat_to_doc(b.twist_a),
                twist_b: b.twist_b,
                nil: mat_to_doc(b.nil.matrix()),
                level: b.level,
            },
        }
    }

    pub fn from_torsion(t: &TorsionDesc) -> Self {
        ObjectDocument {
            side: "B".into(),
            body: ObjectBody::Torsion {
                point_a: rat_to_doc(t.point_a),
                point_b: t.point_b,
                nil: mat_to_doc(t.nil.matrix()),
            },
        }
    }

    pub fn to_brane(&self) -> Result<Brane, String> {
        match &self.body {
            ObjectBody::Brane {
                slope,
                intercept,
                alpha,
                phase,
                nil,
            } => {
                let s = Slope::new(slope[0], slope[1]).map_err(|e| e.to_string())?;
                Brane::new(
                    s,
                    rat_from_doc(*intercept)?,
                    *alpha,
                    Monodromy::new(*phase, nil_from_doc(nil)?),
                )
                .map_err(|e| e.to_string())
            }
            _ => Err("expected a brane document".into()),
        }
    }

    pub fn to_bundle(&self) -> Result<BundleDesc, String> {
        match &self.body {
            ObjectBody::Bundle {
                degree,
                twist_a,
                twist_b,
                nil,
                level,
            } => BundleDesc::new(
                *degree,
                rat_from_doc(*twist_a)?,
                *twist_b,
                nil_from_doc(nil)?,
                *level,
            )
            .map_err(|e| e.to_string()),
            _ => Err("expected a bundle document".into()),
        }
    }

    pub fn to_torsion(&self) -> Result<TorsionDesc, String> {
        match &self.body {
            ObjectBody::Torsion {
                point_a,
                point_b,
                nil,
            } => Ok(TorsionDesc::new(
                rat_from_doc(*point_a)?,
                *point_b,
                nil_from_doc(nil)?,
            )),
            _ => Err("expected a torsion document".into()),
        }
    }
}

/// A morphism on either side.
#[derive(Debug, Clone, Serialize, Deserialize, PartialEq)]
#[serde(tag = "kind", rename_all = "snake_case")]
pub enum MorphismDocument {
    PointSum {
        source: ObjectDocument,
        target: ObjectDocument,
        degree: i64,
        terms: Vec<PointTermDoc>,
    },
    Section {
        source: ObjectDocument,
        target: ObjectDocument,
        coeffs: Vec<MatDoc>,
    },
}

#[derive(Debug, Clone, Serialize, Deserialize, PartialEq)]
pub struct PointTermDoc {
    pub point: [RatDoc; 2],
    pub coeff: MatDoc,
}

impl MorphismDocument {
    pub fn from_point_sum(u: &PointSum) -> Self {
        MorphismDocument::PointSum {
            source: ObjectDocument::from_brane(&u.source),
            target: ObjectDocument::from_brane(&u.target),
            degree: u.degree,
            terms: u
                .terms
                .iter()
                .map(|(p, m)| PointTermDoc {
                    point: [rat_to_doc(p.0), rat_to_doc(p.1)],
                    coeff: mat_to_doc(m),
                })
                .collect(),
        }
    }

    pub fn from_section(s: &SectionElement) -> Self {
        MorphismDocument::Section {
            source: ObjectDocument::from_bundle(&s.source),
            target: ObjectDocument::from_bundle(&s.target),
            coeffs: s.coeffs.iter().map(mat_to_doc).collect(),
        }
    }

    pub fn to_point_sum(&self) -> Result<PointSum, String> {
        match self {
            MorphismDocument::PointSum {
                source,
                target,
                terms,
                ..
            } => {
                let src = source.to_brane()?;
                let tgt = target.to_brane()?;
                let terms = terms
                    .iter()
                    .map(|t| {
                        Ok((
                            (rat_from_doc(t.point[0])?, rat_from_doc(t.point[1])?),
                            mat_from_doc(&t.coeff)?,
                        ))
                    })
                    .collect::<Result<Vec<_>, String>>()?;
                PointSum::new(src, tgt, terms).map_err(|e| e.to_string())
            }
            _ => Err("expected a point_sum document".into()),
        }
    }

    pub fn to_section(&self) -> Result<SectionElement, String> {
        match self {
            MorphismDocument::Section {
                source,
                target,
                coeffs,
            } => {
                let src = source.to_bundle()?;
                let tgt = target.to_bundle()?;
                let coeffs = coeffs
                    .iter()
                    .map(mat_from_doc)
                    .collect::<Result<Vec<_>, String>>()?;
                SectionElement::new(src, tgt, coeffs).map_err(|e| e.to_string())
            }
            _ => Err("expected a section document".into()),
        }
    }
}

/// Formatter printing every float with 17 significant digits, the smallest
/// count that round-trips any f64.
struct SciFormatter;

impl serde_json::ser::Formatter for SciFormatter {
    fn write_f64<W>(&mut self, writer: &mut W, value: f64) -> std::io::Result<()>
    where
        W: ?Sized + Write,
    {
        write!(writer, "{value:.16e}")
    }

    fn write_f32<W>(&mut self, writer: &mut W, value: f32) -> std::io::Result<()>
    where
        W: ?Sized + Write,
    {
        write!(writer, "{value:.16e}")
    }
}

/// Serialize with fixed field order and 17-significant-digit floats.
pub fn to_json_deterministic<T: Serialize>(value: &T) -> String {
    let mut buf = Vec::new();
    let mut ser = serde_json::Serializer::with_formatter(&mut buf, SciFormatter);
    value
        .serialize(&mut ser)
        .expect("document serialization cannot fail");
    String::from_utf8(buf).expect("serializer emits utf-8")
}
