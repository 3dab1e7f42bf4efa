//! Degeneration indices, degeneration matrices and degeneration vectors.

use std::fmt;
use std::str::FromStr;

use num_bigint::BigInt;
use num_integer::Integer;
use num_traits::{Signed, Zero};

use crate::error::{Error, Result};
use crate::exact;
use crate::gluing::ExponentMatrix;
use crate::matrix::IntMatrix;

/// The limit of one shape parameter at an ideal point.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum IndexValue {
    Zero,
    One,
    Infinity,
}

impl IndexValue {
    /// Enumeration order `0 < 1 < ∞`.
    pub const ALL: [IndexValue; 3] = [IndexValue::Zero, IndexValue::One, IndexValue::Infinity];

    pub fn digit(self) -> u8 {
        self as u8
    }

    pub fn from_digit(d: u8) -> Option<Self> {
        IndexValue::ALL.get(d as usize).copied()
    }

    pub fn from_char(c: char) -> Option<Self> {
        match c {
            '0' => Some(IndexValue::Zero),
            '1' => Some(IndexValue::One),
            'i' | 'I' | '∞' => Some(IndexValue::Infinity),
            _ => None,
        }
    }

    pub fn as_char(self) -> char {
        match self {
            IndexValue::Zero => '0',
            IndexValue::One => '1',
            IndexValue::Infinity => 'i',
        }
    }

    /// Name used in JSON output.
    pub fn label(self) -> &'static str {
        match self {
            IndexValue::Zero => "0",
            IndexValue::One => "1",
            IndexValue::Infinity => "inf",
        }
    }
}

/// A vector in `{0, 1, ∞}^n`, one entry per tetrahedron.
#[derive(Clone, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct DegenerationIndex(Vec<IndexValue>);

impl DegenerationIndex {
    pub fn new(entries: Vec<IndexValue>) -> Self {
        DegenerationIndex(entries)
    }

    pub fn entries(&self) -> &[IndexValue] {
        &self.0
    }

    pub fn len(&self) -> usize {
        self.0.len()
    }

    pub fn is_empty(&self) -> bool {
        self.0.is_empty()
    }

    /// The index with enumeration rank `rank`: base 3, first entry most
    /// significant, digits `0, 1, 2` for `0, 1, ∞`.
    pub fn from_rank(mut rank: u64, n: usize) -> Self {
        let mut entries = vec![IndexValue::Zero; n];
        for slot in entries.iter_mut().rev() {
            *slot = IndexValue::from_digit((rank % 3) as u8).expect("digit below 3");
            rank /= 3;
        }
        DegenerationIndex(entries)
    }

    pub fn rank(&self) -> u64 {
        self.0
            .iter()
            .fold(0u64, |acc, v| acc * 3 + u64::from(v.digit()))
    }

    pub fn with_appended(&self, value: IndexValue) -> Self {
        let mut entries = self.0.clone();
        entries.push(value);
        DegenerationIndex(entries)
    }

    /// Reads one index per non-empty, non-`#` line.
    pub fn parse_list(text: &str) -> Result<Vec<Self>> {
        text.lines()
            .enumerate()
            .filter(|(_, l)| {
                let t = l.trim();
                !t.is_empty() && !t.starts_with('#')
            })
            .map(|(i, l)| {
                l.trim()
                    .parse()
                    .map_err(|e: Error| Error::syntax(i + 1, e.to_string()))
            })
            .collect()
    }
}

impl FromStr for DegenerationIndex {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        s.chars()
            .filter(|c| !c.is_whitespace() && *c != ',')
            .map(|c| {
                IndexValue::from_char(c).ok_or_else(|| {
                    Error::OutOfRange(format!("bad index character {c:?}; expected 0, 1 or i"))
                })
            })
            .collect::<Result<Vec<_>>>()
            .map(DegenerationIndex)
    }
}

impl fmt::Display for DegenerationIndex {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        for v in &self.0 {
            write!(f, "{}", v.as_char())?;
        }
        Ok(())
    }
}

fn check_len(r: &ExponentMatrix, index: &DegenerationIndex) -> Result<()> {
    if index.len() != r.tets() {
        return Err(Error::Dimension {
            what: "degeneration index",
            expected: r.tets(),
            found: index.len(),
        });
    }
    Ok(())
}

/// The entry of the degeneration matrix for exponent pair `(r', r'')` under
/// index value `v`.
#[inline]
pub fn degenerate_entry(v: IndexValue, r_prime: i64, r_double_prime: i64) -> i64 {
    match v {
        IndexValue::Zero => r_prime,
        IndexValue::One => r_double_prime,
        IndexValue::Infinity => -r_prime - r_double_prime,
    }
}

/// Column `k` takes the `z` exponents of tetrahedron `k` when `i_k = 0`, the
/// `w` exponents when `i_k = 1`, and minus their sum when `i_k = ∞`.
pub fn degeneration_matrix(r: &ExponentMatrix, index: &DegenerationIndex) -> Result<IntMatrix> {
    check_len(r, index)?;
    let rows = r.matrix().rows();
    let mut out = IntMatrix::zeros(rows, r.tets());
    for (k, &v) in index.entries().iter().enumerate() {
        for j in 0..rows {
            out.set(
                j,
                k,
                degenerate_entry(v, r.r_prime(j, k), r.r_double_prime(j, k)),
            );
        }
    }
    Ok(out)
}

/// Signed maximal minors `d` of a degeneration matrix, with content `c`
/// (the gcd of the entries) and primitive part `d / c`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct DegenerationVector {
    d: Vec<BigInt>,
    content: BigInt,
    primitive: Vec<BigInt>,
}

impl DegenerationVector {
    pub fn new(d: Vec<BigInt>) -> Self {
        let content = d.iter().fold(BigInt::zero(), |g, x| g.gcd(x));
        let primitive = if content.is_zero() {
            d.clone()
        } else {
            d.iter().map(|x| x / &content).collect()
        };
        DegenerationVector {
            d,
            content,
            primitive,
        }
    }

    pub fn from_i64(d: &[i64]) -> Self {
        DegenerationVector::new(d.iter().copied().map(BigInt::from).collect())
    }

    pub fn entries(&self) -> &[BigInt] {
        &self.d
    }

    /// `gcd(|d_1|, ..., |d_n|)`; zero only for the zero vector.
    pub fn content(&self) -> &BigInt {
        &self.content
    }

    pub fn primitive(&self) -> &[BigInt] {
        &self.primitive
    }

    pub fn len(&self) -> usize {
        self.d.len()
    }

    pub fn is_empty(&self) -> bool {
        self.d.is_empty()
    }

    pub fn negated(&self) -> Self {
        DegenerationVector::new(self.d.iter().map(|x| -x).collect())
    }
}

/// `d_k = (-1)^{k-1} det R(I)_k` for the `(n-1) x n` degeneration matrix.
pub fn degeneration_vector(ri: &IntMatrix) -> Result<DegenerationVector> {
    if ri.cols() != ri.rows() + 1 {
        return Err(Error::Dimension {
            what: "degeneration matrix columns",
            expected: ri.rows() + 1,
            found: ri.cols(),
        });
    }
    Ok(DegenerationVector::new(exact::signed_minors_exact(ri)))
}

/// True when every entry is strictly positive or every entry is strictly
/// negative. A zero entry never certifies.
pub fn is_ideal_point(d: &DegenerationVector) -> bool {
    let entries = d.entries();
    !entries.is_empty()
        && (entries.iter().all(Signed::is_positive) || entries.iter().all(Signed::is_negative))
}
