//! Gluing equations at the level of exponents.
//!
//! Each tetrahedron `ν` carries a shape `z_ν`; with `w_ν = 1 - z_ν` the three
//! edge parameters are `z`, `z' = 1/w` and `z'' = -w/z`. Around an edge class
//! the product of parameters is `±Π z_ν^{r'} w_ν^{r''}` with
//! `r' = p - p''` and `r'' = p'' - p'`, where `p, p', p''` count the class's
//! members of each kind in tetrahedron `ν`.

use std::fmt;
use std::str::FromStr;

use crate::error::{Error, Result};
use crate::matrix::IntMatrix;
use crate::triangulation::{EdgeClass, Triangulation, VertexPair};

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub enum ParamKind {
    Z,
    ZPrime,
    ZDoublePrime,
}

impl ParamKind {
    fn slot(self) -> usize {
        match self {
            ParamKind::Z => 0,
            ParamKind::ZPrime => 1,
            ParamKind::ZDoublePrime => 2,
        }
    }
}

/// Opposite edges share a parameter: `01, 23 -> z`; `02, 13 -> z'`; `03, 12 -> z''`.
pub fn edge_parameter(pair: VertexPair) -> ParamKind {
    match pair {
        VertexPair::P01 | VertexPair::P23 => ParamKind::Z,
        VertexPair::P02 | VertexPair::P13 => ParamKind::ZPrime,
        VertexPair::P03 | VertexPair::P12 => ParamKind::ZDoublePrime,
    }
}

/// Picks one edge class, either by its first-appearance id or by a
/// tetrahedron edge that belongs to it.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub enum EdgeSelector {
    Id(usize),
    Member(usize, VertexPair),
}

impl EdgeSelector {
    pub fn resolve(&self, classes: &[EdgeClass]) -> Result<usize> {
        let fail = |message: String| Error::EdgeSelector {
            selector: self.to_string(),
            message,
        };
        match *self {
            EdgeSelector::Id(id) if id < classes.len() => Ok(id),
            EdgeSelector::Id(id) => Err(fail(format!(
                "class id {id} out of range (0..{})",
                classes.len()
            ))),
            EdgeSelector::Member(tet, pair) => {
                let mut hits = classes.iter().filter(|c| c.contains(tet, pair));
                match (hits.next(), hits.next()) {
                    (Some(c), None) => Ok(c.id),
                    (None, _) => Err(fail("matches no edge class".into())),
                    (Some(_), Some(_)) => Err(fail("matches more than one edge class".into())),
                }
            }
        }
    }
}

impl fmt::Display for EdgeSelector {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            EdgeSelector::Id(id) => write!(f, "{id}"),
            EdgeSelector::Member(tet, pair) => write!(f, "{tet}:{pair}"),
        }
    }
}

impl FromStr for EdgeSelector {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        let bad = |message: &str| Error::EdgeSelector {
            selector: s.to_owned(),
            message: message.to_owned(),
        };
        let s = s.trim();
        if let Some((tet, pair)) = s.split_once(':') {
            let tet = tet
                .trim()
                .parse()
                .map_err(|_| bad("bad tetrahedron index"))?;
            let pair = pair.parse().map_err(|_| bad("bad vertex pair"))?;
            return Ok(EdgeSelector::Member(tet, pair));
        }
        // tet(pair), as written in edge tables
        if let Some((tet, rest)) = s.split_once('(') {
            let pair = rest
                .strip_suffix(')')
                .ok_or_else(|| bad("unclosed parenthesis"))?;
            let tet = tet
                .trim()
                .parse()
                .map_err(|_| bad("bad tetrahedron index"))?;
            let pair = pair.parse().map_err(|_| bad("bad vertex pair"))?;
            return Ok(EdgeSelector::Member(tet, pair));
        }
        s.parse()
            .map(EdgeSelector::Id)
            .map_err(|_| bad("expected \"tet:pair\" or a class id"))
    }
}

/// Order of the rows of the exponent matrix.
#[derive(Clone, Debug, Default, PartialEq, Eq)]
pub enum RowOrder {
    #[default]
    FirstAppearance,
    /// One selector per edge class, naming the class for each row in turn.
    Reference(Vec<EdgeSelector>),
}

impl RowOrder {
    pub fn resolve(&self, classes: &[EdgeClass]) -> Result<Vec<usize>> {
        match self {
            RowOrder::FirstAppearance => Ok((0..classes.len()).collect()),
            RowOrder::Reference(selectors) => {
                if selectors.len() != classes.len() {
                    return Err(Error::Dimension {
                        what: "reference edge order",
                        expected: classes.len(),
                        found: selectors.len(),
                    });
                }
                let mut seen = vec![false; classes.len()];
                selectors
                    .iter()
                    .map(|sel| {
                        let id = sel.resolve(classes)?;
                        if std::mem::replace(&mut seen[id], true) {
                            return Err(Error::EdgeSelector {
                                selector: sel.to_string(),
                                message: format!("class {id} already used in the reference order"),
                            });
                        }
                        Ok(id)
                    })
                    .collect()
            }
        }
    }
}

/// Edge counts `(p, p', p'')` for every (edge class, tetrahedron), together
/// with the full exponent matrix: one row per class, `2n` columns
/// interleaved as `(r'_1, r''_1, ..., r'_n, r''_n)`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct GluingSystem {
    tets: usize,
    counts: Vec<[u32; 3]>,
    full: IntMatrix,
}

impl GluingSystem {
    pub fn new(tri: &Triangulation, classes: &[EdgeClass]) -> Self {
        let n = tri.len();
        let mut counts = vec![[0u32; 3]; classes.len() * n];
        for class in classes {
            for &(tet, pair) in &class.members {
                counts[class.id * n + tet][edge_parameter(pair).slot()] += 1;
            }
        }
        let mut full = IntMatrix::zeros(classes.len(), 2 * n);
        for i in 0..classes.len() {
            for nu in 0..n {
                let [p, p1, p2] = counts[i * n + nu].map(i64::from);
                full.set(i, 2 * nu, p - p2);
                full.set(i, 2 * nu + 1, p2 - p1);
            }
        }
        GluingSystem {
            tets: n,
            counts,
            full,
        }
    }

    pub fn from_triangulation(tri: &Triangulation) -> (Vec<EdgeClass>, Self) {
        let classes = tri.edge_classes();
        let sys = GluingSystem::new(tri, &classes);
        (classes, sys)
    }

    pub fn tets(&self) -> usize {
        self.tets
    }

    pub fn classes(&self) -> usize {
        self.full.rows()
    }

    /// `(p, p', p'')` for edge class `class` and tetrahedron `tet`.
    pub fn counts(&self, class: usize, tet: usize) -> [u32; 3] {
        self.counts[class * self.tets + tet]
    }

    pub fn full_matrix(&self) -> &IntMatrix {
        &self.full
    }

    /// Parity of the `z''` count of a class, i.e. the sign `(-1)^{p''}` of its
    /// gluing monomial.
    pub fn sign_parity(&self, class: usize) -> u8 {
        let total: u32 = (0..self.tets).map(|nu| self.counts(class, nu)[2]).sum();
        (total % 2) as u8
    }

    /// Drops the redundant equation chosen by `omit` and orders the remaining
    /// rows by `order`.
    pub fn build_r(
        &self,
        classes: &[EdgeClass],
        omit: &EdgeSelector,
        order: &RowOrder,
    ) -> Result<ExponentMatrix> {
        if classes.len() != self.classes() {
            return Err(Error::Dimension {
                what: "edge classes",
                expected: self.classes(),
                found: classes.len(),
            });
        }
        let omitted = omit.resolve(classes)?;
        let omitted_member = match *omit {
            EdgeSelector::Member(tet, pair) => (tet, pair),
            EdgeSelector::Id(id) => classes[id].members[0],
        };
        let row_classes: Vec<usize> = order
            .resolve(classes)?
            .into_iter()
            .filter(|&c| c != omitted)
            .collect();
        let rows = row_classes
            .iter()
            .map(|&c| self.full.row(c).to_vec())
            .collect::<Vec<_>>();
        let rows = if rows.is_empty() {
            IntMatrix::zeros(0, 2 * self.tets)
        } else {
            IntMatrix::from_rows(rows)?
        };
        Ok(ExponentMatrix {
            tets: self.tets,
            sign_parities: row_classes.iter().map(|&c| self.sign_parity(c)).collect(),
            rows,
            row_classes,
            omitted_edge: omitted,
            omitted_member,
        })
    }
}

/// The gluing-equation exponent matrix with one redundant row removed.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct ExponentMatrix {
    tets: usize,
    rows: IntMatrix,
    row_classes: Vec<usize>,
    sign_parities: Vec<u8>,
    omitted_edge: usize,
    omitted_member: (usize, VertexPair),
}

impl ExponentMatrix {
    /// Builds an exponent matrix directly from its rows, for inputs that do
    /// not come from a triangulation.
    pub fn from_matrix(rows: IntMatrix) -> Result<Self> {
        if rows.cols() % 2 != 0 {
            return Err(Error::Dimension {
                what: "exponent matrix columns (must be even)",
                expected: rows.cols() + 1,
                found: rows.cols(),
            });
        }
        let tets = rows.cols() / 2;
        let count = rows.rows();
        Ok(ExponentMatrix {
            tets,
            row_classes: (0..count).collect(),
            sign_parities: vec![0; count],
            rows,
            omitted_edge: count,
            omitted_member: (0, VertexPair::P01),
        })
    }

    pub fn tets(&self) -> usize {
        self.tets
    }

    pub fn matrix(&self) -> &IntMatrix {
        &self.rows
    }

    /// Edge class id of each row.
    pub fn row_classes(&self) -> &[usize] {
        &self.row_classes
    }

    pub fn sign_parities(&self) -> &[u8] {
        &self.sign_parities
    }

    pub fn omitted_edge(&self) -> usize {
        self.omitted_edge
    }

    pub fn omitted_member(&self) -> (usize, VertexPair) {
        self.omitted_member
    }

    #[inline]
    pub fn r_prime(&self, row: usize, tet: usize) -> i64 {
        self.rows.get(row, 2 * tet)
    }

    #[inline]
    pub fn r_double_prime(&self, row: usize, tet: usize) -> i64 {
        self.rows.get(row, 2 * tet + 1)
    }

    /// Minus the sum of the kept rows: equal to the omitted row whenever the
    /// full system's columns sum to zero.
    pub fn recover_omitted_row(&self) -> Vec<i64> {
        let mut out = vec![0i64; self.rows.cols()];
        for row in self.rows.row_iter() {
            for (o, v) in out.iter_mut().zip(row) {
                *o -= v;
            }
        }
        out
    }
}

impl fmt::Display for ExponentMatrix {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let (tet, pair) = self.omitted_member;
        writeln!(
            f,
            "# omitted edge class {} (member {tet}:{pair})",
            self.omitted_edge
        )?;
        write!(f, "{}", self.rows)
    }
}
