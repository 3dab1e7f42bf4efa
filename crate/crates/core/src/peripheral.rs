//! Meridian and longitude exponent vectors, valuations at an ideal point, and
//! boundary slopes.

use std::cmp::Ordering;
use std::fmt;
use std::ops::{Mul, Sub};

use num_bigint::BigInt;
use num_integer::Integer;
use num_traits::{Signed, Zero};
use serde_json::{json, Value};

use crate::degeneration::{
    degeneration_matrix, degeneration_vector, is_ideal_point, DegenerationIndex,
    DegenerationVector, IndexValue,
};
use crate::error::{Error, Result};
use crate::gluing::ExponentMatrix;

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub enum CurveKind {
    Meridian,
    Longitude,
}

impl fmt::Display for CurveKind {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            CurveKind::Meridian => "meridian",
            CurveKind::Longitude => "longitude",
        })
    }
}

/// Exponents of a peripheral curve, interleaved per tetrahedron as
/// `(x'_1, x''_1, ..., x'_n, x''_n)`: the `z` exponent then the `w` exponent.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct PeripheralCurve {
    pub kind: CurveKind,
    pub coeffs: Vec<i64>,
}

impl PeripheralCurve {
    pub fn tets(&self) -> usize {
        self.coeffs.len() / 2
    }
}

/// A meridian and longitude pair for one cusp.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct PeripheralCurves {
    pub meridian: PeripheralCurve,
    pub longitude: PeripheralCurve,
}

impl PeripheralCurves {
    pub fn new(meridian: Vec<i64>, longitude: Vec<i64>) -> Result<Self> {
        if meridian.len() % 2 != 0 || meridian.len() != longitude.len() {
            return Err(Error::Dimension {
                what: "longitude (curves must have equal, even length)",
                expected: meridian.len(),
                found: longitude.len(),
            });
        }
        Ok(PeripheralCurves {
            meridian: PeripheralCurve {
                kind: CurveKind::Meridian,
                coeffs: meridian,
            },
            longitude: PeripheralCurve {
                kind: CurveKind::Longitude,
                coeffs: longitude,
            },
        })
    }

    /// Reads `meridian: ...` and `longitude: ...` lines.
    pub fn parse(text: &str) -> Result<Self> {
        let mut meridian = None;
        let mut longitude = None;
        for (lineno, line) in text.lines().enumerate() {
            let line = line.trim();
            if line.is_empty() || line.starts_with('#') {
                continue;
            }
            let (key, rest) = line
                .split_once(':')
                .ok_or_else(|| Error::syntax(lineno + 1, "expected \"<curve>: <integers>\""))?;
            let values = rest
                .split_whitespace()
                .map(|t| {
                    t.parse::<i64>()
                        .map_err(|_| Error::syntax(lineno + 1, format!("bad integer {t:?}")))
                })
                .collect::<Result<Vec<_>>>()?;
            let slot = match key.trim() {
                "meridian" => &mut meridian,
                "longitude" => &mut longitude,
                other => {
                    return Err(Error::syntax(
                        lineno + 1,
                        format!("unknown curve {other:?}"),
                    ))
                }
            };
            if slot.replace(values).is_some() {
                return Err(Error::syntax(
                    lineno + 1,
                    format!("{} given twice", key.trim()),
                ));
            }
        }
        let missing = |name: &str| Error::syntax(0, format!("missing {name} line"));
        PeripheralCurves::new(
            meridian.ok_or_else(|| missing("meridian"))?,
            longitude.ok_or_else(|| missing("longitude"))?,
        )
    }

    pub fn tets(&self) -> usize {
        self.meridian.tets()
    }
}

impl fmt::Display for PeripheralCurves {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        for curve in [&self.meridian, &self.longitude] {
            let vals: Vec<String> = curve.coeffs.iter().map(i64::to_string).collect();
            writeln!(f, "{}: {}", curve.kind, vals.join(" "))?;
        }
        Ok(())
    }
}

/// `|d'_ν| ρ_{i_ν}` stacked per tetrahedron, with `ρ_1 = (1, 0)`,
/// `ρ_0 = (0, -1)` and `ρ_∞ = (-1, 1)`.
pub fn direction_vector(index: &DegenerationIndex, primitive: &[BigInt]) -> Result<Vec<BigInt>> {
    if index.len() != primitive.len() {
        return Err(Error::Dimension {
            what: "primitive degeneration vector",
            expected: index.len(),
            found: primitive.len(),
        });
    }
    let mut out = Vec::with_capacity(2 * index.len());
    for (&v, d) in index.entries().iter().zip(primitive) {
        let a = d.abs();
        let (x, y) = match v {
            IndexValue::One => (a, BigInt::zero()),
            IndexValue::Zero => (BigInt::zero(), -a),
            IndexValue::Infinity => (-a.clone(), a),
        };
        out.push(x);
        out.push(y);
    }
    Ok(out)
}

/// `x ∧ y = Σ_k x'_k y''_k - x''_k y'_k` on interleaved vectors.
pub fn wedge<T>(x: &[T], y: &[T]) -> Result<T>
where
    T: Clone + Zero + Mul<Output = T> + Sub<Output = T>,
{
    if x.len() != y.len() || x.len() % 2 != 0 {
        return Err(Error::Dimension {
            what: "wedge operand",
            expected: x.len(),
            found: y.len(),
        });
    }
    Ok(x.chunks_exact(2)
        .zip(y.chunks_exact(2))
        .fold(T::zero(), |acc, (a, b)| {
            acc + a[0].clone() * b[1].clone() - a[1].clone() * b[0].clone()
        }))
}

/// `(v(μ), v(λ))` at a certified ideal point.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Valuations {
    pub v_mu: BigInt,
    pub v_lambda: BigInt,
}

pub fn valuations(
    curves: &PeripheralCurves,
    index: &DegenerationIndex,
    d: &DegenerationVector,
) -> Result<Valuations> {
    if !is_ideal_point(d) {
        return Err(Error::NotIdealPoint);
    }
    if curves.tets() != index.len() {
        return Err(Error::Dimension {
            what: "peripheral curves (tetrahedra)",
            expected: index.len(),
            found: curves.tets(),
        });
    }
    let dir = direction_vector(index, d.primitive())?;
    let widen = |c: &PeripheralCurve| {
        c.coeffs
            .iter()
            .map(|&v| BigInt::from(v))
            .collect::<Vec<_>>()
    };
    Ok(Valuations {
        v_mu: wedge(&widen(&curves.meridian), &dir)?,
        v_lambda: wedge(&widen(&curves.longitude), &dir)?,
    })
}

/// A boundary slope `p/q` in lowest terms with `q > 0`, or the meridional
/// slope `1/0`.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub enum Slope {
    Finite { num: BigInt, den: BigInt },
    Infinite,
}

impl Slope {
    pub fn new(num: BigInt, den: BigInt) -> Option<Slope> {
        if den.is_zero() {
            return if num.is_zero() {
                None
            } else {
                Some(Slope::Infinite)
            };
        }
        let g = num.gcd(&den);
        let (mut num, mut den) = (num / &g, den / &g);
        if den.is_negative() {
            num = -num;
            den = -den;
        }
        Some(Slope::Finite { num, den })
    }

    pub fn from_i64(num: i64, den: i64) -> Option<Slope> {
        Slope::new(BigInt::from(num), BigInt::from(den))
    }
}

impl fmt::Display for Slope {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Slope::Finite { num, den } => write!(f, "{num}/{den}"),
            Slope::Infinite => f.write_str("1/0"),
        }
    }
}

impl Ord for Slope {
    fn cmp(&self, other: &Self) -> Ordering {
        match (self, other) {
            (Slope::Infinite, Slope::Infinite) => Ordering::Equal,
            (Slope::Infinite, _) => Ordering::Greater,
            (_, Slope::Infinite) => Ordering::Less,
            (Slope::Finite { num: a, den: b }, Slope::Finite { num: c, den: d }) => {
                (a * d).cmp(&(c * b))
            }
        }
    }
}

impl PartialOrd for Slope {
    fn partial_cmp(&self, other: &Self) -> Option<Ordering> {
        Some(self.cmp(other))
    }
}

/// `-v(λ)/v(μ)`.
pub fn boundary_slope(v_mu: &BigInt, v_lambda: &BigInt) -> Result<Slope> {
    Slope::new(-v_lambda, v_mu.clone()).ok_or(Error::NoSlope)
}

/// A certified ideal point with its slope.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct SlopeResult {
    pub index: DegenerationIndex,
    pub d: DegenerationVector,
    pub valuations: Valuations,
    pub slope: Slope,
}

impl SlopeResult {
    /// Number of ideal points sharing this degeneration vector.
    pub fn ideal_point_count(&self) -> &BigInt {
        self.d.content()
    }

    pub fn to_json(&self) -> Value {
        json!({
            "index": index_json(&self.index),
            "d": ints_json(self.d.entries()),
            "c": int_json(self.d.content()),
            "v_mu": int_json(&self.valuations.v_mu),
            "v_lambda": int_json(&self.valuations.v_lambda),
            "slope": self.slope.to_string(),
        })
    }
}

/// What one degeneration index yields.
#[derive(Clone, Debug, PartialEq, Eq)]
pub enum Outcome {
    Certified(SlopeResult),
    /// An ideal point whose valuations both vanish.
    NoSlope {
        index: DegenerationIndex,
        d: DegenerationVector,
    },
    NotSignDefinite {
        index: DegenerationIndex,
        d: DegenerationVector,
    },
}

impl Outcome {
    pub fn certified(&self) -> Option<&SlopeResult> {
        match self {
            Outcome::Certified(r) => Some(r),
            _ => None,
        }
    }

    pub fn index(&self) -> &DegenerationIndex {
        match self {
            Outcome::Certified(r) => &r.index,
            Outcome::NoSlope { index, .. } | Outcome::NotSignDefinite { index, .. } => index,
        }
    }

    pub fn degeneration_vector(&self) -> &DegenerationVector {
        match self {
            Outcome::Certified(r) => &r.d,
            Outcome::NoSlope { d, .. } | Outcome::NotSignDefinite { d, .. } => d,
        }
    }

    pub fn to_json(&self) -> Value {
        match self {
            Outcome::Certified(r) => r.to_json(),
            Outcome::NoSlope { index, d } => json!({
                "index": index_json(index),
                "d": ints_json(d.entries()),
                "c": int_json(d.content()),
                "status": "no slope: both valuations vanish",
            }),
            Outcome::NotSignDefinite { index, d } => json!({
                "index": index_json(index),
                "d": ints_json(d.entries()),
                "status": "not sign-definite",
            }),
        }
    }
}

/// The exponent matrix and peripheral curves of one triangulated cusp.
#[derive(Clone, Debug)]
pub struct SlopeProblem {
    r: ExponentMatrix,
    curves: PeripheralCurves,
}

impl SlopeProblem {
    pub fn new(r: ExponentMatrix, curves: PeripheralCurves) -> Result<Self> {
        if curves.meridian.coeffs.len() != 2 * r.tets() {
            return Err(Error::Dimension {
                what: "peripheral curve length",
                expected: 2 * r.tets(),
                found: curves.meridian.coeffs.len(),
            });
        }
        Ok(SlopeProblem { r, curves })
    }

    pub fn exponent_matrix(&self) -> &ExponentMatrix {
        &self.r
    }

    pub fn curves(&self) -> &PeripheralCurves {
        &self.curves
    }

    pub fn tets(&self) -> usize {
        self.r.tets()
    }

    pub fn evaluate(&self, index: &DegenerationIndex) -> Result<Outcome> {
        let ri = degeneration_matrix(&self.r, index)?;
        let d = degeneration_vector(&ri)?;
        if !is_ideal_point(&d) {
            return Ok(Outcome::NotSignDefinite {
                index: index.clone(),
                d,
            });
        }
        let valuations = valuations(&self.curves, index, &d)?;
        match boundary_slope(&valuations.v_mu, &valuations.v_lambda) {
            Ok(slope) => Ok(Outcome::Certified(SlopeResult {
                index: index.clone(),
                d,
                valuations,
                slope,
            })),
            Err(Error::NoSlope) => Ok(Outcome::NoSlope {
                index: index.clone(),
                d,
            }),
            Err(e) => Err(e),
        }
    }
}

/// Integers as JSON numbers, or as decimal strings beyond 64 bits.
pub fn int_json(v: &BigInt) -> Value {
    match i64::try_from(v) {
        Ok(small) => Value::from(small),
        Err(_) => Value::from(v.to_string()),
    }
}

pub fn ints_json(vs: &[BigInt]) -> Value {
    Value::Array(vs.iter().map(int_json).collect())
}

pub fn index_json(index: &DegenerationIndex) -> Value {
    Value::Array(
        index
            .entries()
            .iter()
            .map(|v| Value::from(v.label()))
            .collect(),
    )
}
