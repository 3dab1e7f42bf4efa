//! The K and J families of knots, grown from a base triangulation by layering
//! one tetrahedron per step onto a folded solid torus.
//!
//! A family is described by a manifest (see `data/families`): the base
//! triangulation, curves and index lists, the closed-form degeneration
//! vectors, and the expected shape of the edge classes. Each step rewrites
//! two face slots, appends a tetrahedron, pads the peripheral curves and
//! appends one entry to every index list. Edge classes and exponent matrices
//! are recomputed from scratch for every member.

use std::fmt;
use std::path::{Path, PathBuf};
use std::str::FromStr;

use num_bigint::BigInt;
use serde::Deserialize;
use serde_json::{json, Value};

use crate::data::read_text;
use crate::degeneration::{degeneration_matrix, DegenerationIndex, IndexValue};
use crate::error::{Error, Result};
use crate::gluing::{EdgeSelector, GluingSystem, RowOrder};
use crate::matrix::IntMatrix;
use crate::peripheral::{ints_json, Outcome, PeripheralCurves, SlopeProblem};
use crate::triangulation::{EdgeClass, Face, FaceGluing, Triangulation, VertexPair};

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Deserialize)]
pub enum Family {
    K,
    J,
}

impl FromStr for Family {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s.trim() {
            "K" | "k" => Ok(Family::K),
            "J" | "j" => Ok(Family::J),
            other => Err(Error::Family(format!(
                "unknown family {other:?}; expected K or J"
            ))),
        }
    }
}

impl fmt::Display for Family {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            Family::K => "K",
            Family::J => "J",
        })
    }
}

fn glue(face: Face, target: usize, images: [u8; 3]) -> FaceGluing {
    FaceGluing::from_face_images(face, target, images).expect("images of a face are distinct")
}

fn glued_as(tri: &Triangulation, tet: usize, face: Face, target: usize, images: &str) -> bool {
    tri.gluing(tet, face).token(face) == format!("{target}({images})")
}

/// Unfolds the last tetrahedron and appends a new folded one.
///
/// The last tetrahedron must have faces 012 and 023 glued to itself as
/// `320` and `210`.
pub fn extend_k(tri: &Triangulation) -> Result<Triangulation> {
    let last = tri
        .len()
        .checked_sub(1)
        .ok_or_else(|| Error::Family("empty triangulation".into()))?;
    if !(glued_as(tri, last, Face::F012, last, "320")
        && glued_as(tri, last, Face::F023, last, "210"))
    {
        return Err(Error::Family(format!(
            "tetrahedron {last} is not folded as 012 -> 320, 023 -> 210"
        )));
    }
    let m = last + 1;
    let mut tets = tri.tets().to_vec();
    tets[last][Face::F012.index()] = glue(Face::F012, m, [3, 1, 2]);
    tets[last][Face::F023.index()] = glue(Face::F023, m, [0, 1, 3]);
    tets.push([
        glue(Face::F012, m, [3, 2, 0]),
        glue(Face::F013, last, [0, 2, 3]),
        glue(Face::F023, m, [2, 1, 0]),
        glue(Face::F123, last, [1, 2, 0]),
    ]);
    Triangulation::from_tets(tets)
}

/// Appends one tetrahedron to a J triangulation.
///
/// Either the last tetrahedron is folded (023 -> 231 and 123 -> 302 on
/// itself), or the triangulation is the base one, where the hexagon between
/// face 023 of tetrahedron 6 and face 012 of tetrahedron 10 is opened.
pub fn extend_j(tri: &Triangulation) -> Result<Triangulation> {
    let last = tri
        .len()
        .checked_sub(1)
        .ok_or_else(|| Error::Family("empty triangulation".into()))?;
    let m = last + 1;
    let mut tets = tri.tets().to_vec();
    if glued_as(tri, last, Face::F023, last, "231") && glued_as(tri, last, Face::F123, last, "302")
    {
        tets[last][Face::F023.index()] = glue(Face::F023, m, [0, 2, 1]);
        tets[last][Face::F123.index()] = glue(Face::F123, m, [1, 0, 3]);
        tets.push([
            glue(Face::F012, last, [0, 3, 2]),
            glue(Face::F013, last, [2, 1, 3]),
            glue(Face::F023, m, [2, 3, 1]),
            glue(Face::F123, m, [3, 0, 2]),
        ]);
    } else if tri.len() > 10
        && glued_as(tri, 6, Face::F023, 10, "021")
        && glued_as(tri, 10, Face::F012, 6, "032")
    {
        tets[6][Face::F023.index()] = glue(Face::F023, m, [0, 2, 1]);
        tets[10][Face::F012.index()] = glue(Face::F012, m, [0, 1, 3]);
        tets.push([
            glue(Face::F012, 6, [0, 3, 2]),
            glue(Face::F013, 10, [0, 1, 2]),
            glue(Face::F023, m, [2, 3, 1]),
            glue(Face::F123, m, [3, 0, 2]),
        ]);
    } else {
        return Err(Error::Family(format!(
            "tetrahedron {last} is not folded as 023 -> 231, 123 -> 302, and faces 6:023 / 10:012 are not the base hexagon"
        )));
    }
    Triangulation::from_tets(tets)
}

/// Pads both curves with `(0, 0)` and replaces the longitude by
/// `l - shift * m`.
pub fn extend_peripherals(curves: &PeripheralCurves, shift: i64) -> Result<PeripheralCurves> {
    let mut m = curves.meridian.coeffs.clone();
    let mut l = curves.longitude.coeffs.clone();
    m.extend([0, 0]);
    l.extend([0, 0]);
    for (li, mi) in l.iter_mut().zip(&m) {
        *li -= shift * mi;
    }
    PeripheralCurves::new(m, l)
}

/// True iff `after` is `before` bordered below by `(0, ..., 0, 1, -2)` and
/// on the right by `(0, ..., 0, 1, -2)^T`.
pub fn check_structural_lemma(before: &IntMatrix, after: &IntMatrix) -> Result<bool> {
    if after.rows() != before.rows() + 1 || after.cols() != before.cols() + 1 {
        return Err(Error::Dimension {
            what: "bordered matrix rows",
            expected: before.rows() + 1,
            found: after.rows(),
        });
    }
    let (r, c) = (after.rows(), after.cols());
    if r < 2 || c < 2 {
        return Ok(false);
    }
    for i in 0..r {
        for j in 0..c {
            let expected = if i == r - 1 || j == c - 1 {
                match (r - 1 - i, c - 1 - j) {
                    (0, 0) => -2,
                    (0, 1) | (1, 0) => 1,
                    _ => 0,
                }
            } else {
                before.get(i, j)
            };
            if after.get(i, j) != expected {
                return Ok(false);
            }
        }
    }
    Ok(true)
}

/// `d_{n+4} = -2 (d_{n+2}, 0) - (d_n, 0, 0) + sign * (0, ..., 0, 2)`.
pub fn check_recurrence(
    d_n: &[BigInt],
    d_n2: &[BigInt],
    d_n4: &[BigInt],
    sign: i64,
) -> Result<bool> {
    let len = d_n.len();
    for (v, grow) in [(d_n2, 1), (d_n4, 2)] {
        if v.len() != len + grow {
            return Err(Error::Dimension {
                what: "recurrence vector",
                expected: len + grow,
                found: v.len(),
            });
        }
    }
    let zero = BigInt::from(0);
    Ok((0..len + 2).all(|k| {
        let mut expected = -2 * d_n2.get(k).unwrap_or(&zero) - d_n.get(k).unwrap_or(&zero);
        if k == len + 1 {
            expected += 2 * sign;
        }
        d_n4[k] == expected
    }))
}

/// A degeneration vector as a function of `n`.
#[derive(Clone, Debug, Deserialize)]
pub struct ClosedForm {
    /// 1-based position of the index list in the base index file.
    pub index: usize,
    pub min_n: usize,
    pub sign_shift: i64,
    pub head: Vec<[i64; 2]>,
    pub tail_from: i64,
}

impl ClosedForm {
    pub fn in_range(&self, n: usize) -> bool {
        n >= self.min_n && (n - self.min_n) % 2 == 0
    }

    /// `(-1)^((n + sign_shift) / 2)`.
    pub fn sign(&self, n: usize) -> i64 {
        if ((n as i64 + self.sign_shift) / 2).rem_euclid(2) == 0 {
            1
        } else {
            -1
        }
    }

    pub fn evaluate(&self, n: usize) -> Result<Vec<i64>> {
        if !self.in_range(n) {
            return Err(Error::OutOfRange(format!(
                "closed form for index list {} holds for n = {}, {}, ...; got n = {n}",
                self.index,
                self.min_n,
                self.min_n + 2
            )));
        }
        let n = n as i64;
        let s = self.sign(n as usize);
        let mut out: Vec<i64> = self.head.iter().map(|[a, b]| s * (a * n + b)).collect();
        let mut t = n + self.tail_from;
        while t >= 2 {
            out.push(s * t);
            t -= 2;
        }
        Ok(out)
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
enum Anchor {
    K,
    M,
}

/// `k+1:13`, `m-1:02` and the like.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
struct RelativeMember {
    anchor: Anchor,
    offset: i64,
    pair: Option<VertexPair>,
}

impl RelativeMember {
    fn parse(s: &str) -> Result<Self> {
        let bad = |why: &str| Error::Family(format!("schema entry {s:?}: {why}"));
        let (tet, pair) = match s.split_once(':') {
            Some((t, p)) => (
                t,
                Some(
                    p.parse::<VertexPair>()
                        .map_err(|_| bad("bad vertex pair"))?,
                ),
            ),
            None => (s, None),
        };
        let tet = tet.trim();
        let anchor = match tet.chars().next() {
            Some('k') => Anchor::K,
            Some('m') => Anchor::M,
            _ => return Err(bad("tetrahedron must start with k or m")),
        };
        let rest = tet[1..].trim();
        let offset = if rest.is_empty() {
            0
        } else {
            rest.replace(' ', "")
                .parse::<i64>()
                .map_err(|_| bad("bad offset"))?
        };
        Ok(RelativeMember {
            anchor,
            offset,
            pair,
        })
    }

    fn tet(&self, k: usize, m: usize) -> Option<usize> {
        let base = match self.anchor {
            Anchor::K => k,
            Anchor::M => m,
        };
        usize::try_from(base as i64 + self.offset).ok()
    }
}

#[derive(Clone, Debug, Deserialize)]
pub struct Schema {
    pub big_class: String,
    pub big_degree_offset: usize,
    pub big_degree_from: Option<usize>,
    pub chain_from: usize,
    pub chain_to: String,
    pub chain: Vec<String>,
    pub last: Vec<String>,
    pub last_from: Option<usize>,
}

fn class_of(classes: &[EdgeClass], tet: usize, pair: VertexPair) -> Option<&EdgeClass> {
    classes.iter().find(|c| c.contains(tet, pair))
}

fn member_set(entries: &[RelativeMember], k: usize, m: usize) -> Option<Vec<(usize, VertexPair)>> {
    let mut out: Vec<(usize, VertexPair)> = entries
        .iter()
        .map(|e| Some((e.tet(k, m)?, e.pair?)))
        .collect::<Option<_>>()?;
    out.sort();
    Some(out)
}

fn same_members(class: &EdgeClass, expected: &[(usize, VertexPair)]) -> bool {
    let mut have = class.members.clone();
    have.sort();
    have == expected
}

impl Schema {
    /// Differences between the edge classes of member `n` and the schema.
    pub fn violations(
        &self,
        base_n: usize,
        n: usize,
        classes: &[EdgeClass],
    ) -> Result<Vec<String>> {
        let mut out = Vec::new();
        let tets = classes.iter().map(EdgeClass::degree).sum::<usize>() / 6;
        let Some(m) = tets.checked_sub(1) else {
            return Ok(vec!["no tetrahedra".into()]);
        };

        if n >= self.big_degree_from.unwrap_or(base_n) {
            let sel: EdgeSelector = self.big_class.parse()?;
            let id = sel.resolve(classes)?;
            let want = n + self.big_degree_offset;
            if classes[id].degree() != want {
                out.push(format!(
                    "class of {sel} has degree {}, expected {want}",
                    classes[id].degree()
                ));
            }
        }

        let parse_all = |v: &[String]| {
            v.iter()
                .map(|s| RelativeMember::parse(s))
                .collect::<Result<Vec<_>>>()
        };
        let chain = parse_all(&self.chain)?;
        let last = parse_all(&self.last)?;
        let chain_to = RelativeMember::parse(&self.chain_to)?
            .tet(0, m)
            .unwrap_or(0);
        for k in self.chain_from..=chain_to {
            let Some(expected) = member_set(&chain, k, m) else {
                continue;
            };
            match class_of(classes, expected[0].0, expected[0].1) {
                Some(c) if same_members(c, &expected) => {}
                _ => out.push(format!(
                    "chain class at k = {k} differs from {:?}",
                    self.chain
                )),
            }
        }

        if n >= self.last_from.unwrap_or(base_n) {
            if let Some(expected) = member_set(&last, 0, m) {
                match class_of(classes, expected[0].0, expected[0].1) {
                    Some(c) if same_members(c, &expected) => {}
                    _ => out.push(format!("last class differs from {:?}", self.last)),
                }
            }
        }
        Ok(out)
    }
}

#[derive(Debug, Deserialize)]
struct Manifest {
    family: Family,
    base_n: usize,
    tet_offset: usize,
    triangulation: PathBuf,
    curves: PathBuf,
    indices: PathBuf,
    omit_edge: String,
    append: String,
    longitude_shift: i64,
    edge_order: Vec<String>,
    new_edge: String,
    #[serde(default)]
    closed_form: Vec<ClosedForm>,
    schema: Schema,
}

/// Everything needed to generate and check one family.
#[derive(Clone, Debug)]
pub struct FamilySpec {
    pub family: Family,
    pub base_n: usize,
    pub tet_offset: usize,
    pub triangulation: Triangulation,
    pub curves: PeripheralCurves,
    pub indices: Vec<DegenerationIndex>,
    pub omit: EdgeSelector,
    pub append: IndexValue,
    pub longitude_shift: i64,
    /// Row order of the base member.
    pub edge_order: Vec<EdgeSelector>,
    /// Row appended for each new tetrahedron, relative to `m`.
    new_edge: RelativeMember,
    pub closed_forms: Vec<ClosedForm>,
    pub schema: Schema,
}

/// One generated member with its inputs to the slope computation.
#[derive(Clone, Debug)]
pub struct FamilyMember {
    pub n: usize,
    pub triangulation: Triangulation,
    pub classes: Vec<EdgeClass>,
    pub indices: Vec<DegenerationIndex>,
    pub problem: SlopeProblem,
}

impl FamilyMember {
    pub fn degeneration_matrix(&self, template: usize) -> Result<IntMatrix> {
        degeneration_matrix(self.problem.exponent_matrix(), &self.indices[template])
    }
}

impl FamilySpec {
    pub fn load(path: &Path) -> Result<Self> {
        let text = read_text(path)?;
        let manifest: Manifest = toml::from_str(&text).map_err(|e| Error::Manifest {
            path: path.to_path_buf(),
            message: e.to_string(),
        })?;
        let dir = path.parent().unwrap_or(Path::new("."));
        let at = |p: &Path| dir.join(p);
        let mut chars = manifest.append.chars();
        let append = match (chars.next().and_then(IndexValue::from_char), chars.next()) {
            (Some(v), None) => v,
            _ => {
                return Err(Error::Manifest {
                    path: path.to_path_buf(),
                    message: format!("append must be one of 0, 1, i; got {:?}", manifest.append),
                })
            }
        };
        let edge_order = manifest
            .edge_order
            .iter()
            .map(|s| s.parse())
            .collect::<Result<Vec<EdgeSelector>>>()?;
        let new_edge = RelativeMember::parse(&manifest.new_edge)?;
        if new_edge.pair.is_none() || new_edge.anchor != Anchor::M {
            return Err(Error::Manifest {
                path: path.to_path_buf(),
                message: format!("new_edge must look like m:01; got {:?}", manifest.new_edge),
            });
        }
        let spec = FamilySpec {
            family: manifest.family,
            base_n: manifest.base_n,
            tet_offset: manifest.tet_offset,
            triangulation: Triangulation::parse(&read_text(&at(&manifest.triangulation))?)?,
            curves: PeripheralCurves::parse(&read_text(&at(&manifest.curves))?)?,
            indices: DegenerationIndex::parse_list(&read_text(&at(&manifest.indices))?)?,
            omit: manifest.omit_edge.parse()?,
            append,
            longitude_shift: manifest.longitude_shift,
            edge_order,
            new_edge,
            closed_forms: manifest.closed_form,
            schema: manifest.schema,
        };
        if spec.triangulation.len() != spec.tets_for(spec.base_n) {
            return Err(Error::Manifest {
                path: path.to_path_buf(),
                message: format!(
                    "base triangulation has {} tetrahedra, expected (n + {}) / 2 = {}",
                    spec.triangulation.len(),
                    spec.tet_offset,
                    spec.tets_for(spec.base_n)
                ),
            });
        }
        Ok(spec)
    }

    /// `<data_dir>/families/<family>.toml`.
    pub fn load_from_data_dir(data_dir: &Path, family: Family) -> Result<Self> {
        FamilySpec::load(&data_dir.join("families").join(format!("{family}.toml")))
    }

    pub fn tets_for(&self, n: usize) -> usize {
        (n + self.tet_offset) / 2
    }

    pub fn extend(&self, tri: &Triangulation) -> Result<Triangulation> {
        match self.family {
            Family::K => extend_k(tri),
            Family::J => extend_j(tri),
        }
    }

    pub fn closed_form(&self, template: usize, n: usize) -> Result<Vec<i64>> {
        self.closed_forms
            .iter()
            .find(|c| c.index == template)
            .ok_or_else(|| Error::OutOfRange(format!("no closed form for index list {template}")))?
            .evaluate(n)
    }

    /// The base order followed by `new_edge` for every appended tetrahedron,
    /// keeping the first selector of each class.
    pub fn row_order(&self, classes: &[EdgeClass]) -> Result<RowOrder> {
        let tets = classes.iter().map(EdgeClass::degree).sum::<usize>() / 6;
        let appended = (self.triangulation.len()..tets).map(|m| {
            let tet = self.new_edge.tet(0, m).expect("non-negative tetrahedron");
            EdgeSelector::Member(tet, self.new_edge.pair.expect("checked on load"))
        });
        let mut seen = vec![false; classes.len()];
        let mut order = Vec::with_capacity(classes.len());
        for sel in self.edge_order.iter().cloned().chain(appended) {
            if matches!(sel, EdgeSelector::Member(t, _) if t >= tets) {
                continue;
            }
            let id = sel.resolve(classes)?;
            if !std::mem::replace(&mut seen[id], true) {
                order.push(sel);
            }
        }
        if let Some(id) = seen.iter().position(|s| !s) {
            return Err(Error::Family(format!(
                "edge order of the {tets}-tetrahedron member misses class {id}"
            )));
        }
        Ok(RowOrder::Reference(order))
    }

    fn member(
        &self,
        n: usize,
        tri: Triangulation,
        curves: PeripheralCurves,
        indices: Vec<DegenerationIndex>,
    ) -> Result<FamilyMember> {
        let (classes, sys) = GluingSystem::from_triangulation(&tri);
        let r = sys.build_r(&classes, &self.omit, &self.row_order(&classes)?)?;
        Ok(FamilyMember {
            n,
            triangulation: tri,
            classes,
            indices,
            problem: SlopeProblem::new(r, curves)?,
        })
    }

    /// Members `base_n, base_n + 2, ..., max_n`.
    pub fn members(&self, max_n: usize) -> Result<Vec<FamilyMember>> {
        if max_n < self.base_n || (max_n - self.base_n) % 2 != 0 {
            return Err(Error::OutOfRange(format!(
                "family {} has members n = {}, {}, ...; got max n = {max_n}",
                self.family,
                self.base_n,
                self.base_n + 2
            )));
        }
        let mut out = vec![self.member(
            self.base_n,
            self.triangulation.clone(),
            self.curves.clone(),
            self.indices.clone(),
        )?];
        while out.last().expect("non-empty").n < max_n {
            let prev = out.last().expect("non-empty");
            let tri = self.extend(&prev.triangulation)?;
            let curves = extend_peripherals(prev.problem.curves(), self.longitude_shift)?;
            let indices = prev
                .indices
                .iter()
                .map(|i| i.with_appended(self.append))
                .collect();
            out.push(self.member(prev.n + 2, tri, curves, indices)?);
        }
        Ok(out)
    }

    /// Computes every member up to `max_n` and checks it against the
    /// closed forms, the bordering of consecutive degeneration matrices, the
    /// two-step recurrence and the edge-class schema.
    pub fn report(&self, max_n: usize) -> Result<Vec<MemberReport>> {
        let members = self.members(max_n)?;
        let mut reports: Vec<MemberReport> = Vec::with_capacity(members.len());
        for (pos, member) in members.iter().enumerate() {
            let tets = member.triangulation.len();
            let outcomes = member
                .indices
                .iter()
                .map(|i| member.problem.evaluate(i))
                .collect::<Result<Vec<_>>>()?;
            let mut closed_form_ok = Vec::new();
            let mut lemma_ok = Vec::new();
            let mut recurrence_ok = Vec::new();
            for (t, outcome) in outcomes.iter().enumerate() {
                let d = outcome.degeneration_vector().entries();
                let form = self.closed_forms.iter().find(|c| c.index == t + 1);
                closed_form_ok.push(match form {
                    Some(f) if f.in_range(member.n) => {
                        let want = f.evaluate(member.n)?;
                        Some(
                            want.len() == d.len()
                                && want.iter().zip(d).all(|(a, b)| BigInt::from(*a) == *b),
                        )
                    }
                    _ => None,
                });
                lemma_ok.push(match pos.checked_sub(1) {
                    Some(p) => Some(check_structural_lemma(
                        &members[p].degeneration_matrix(t)?,
                        &member.degeneration_matrix(t)?,
                    )?),
                    None => None,
                });
                recurrence_ok.push(match form {
                    Some(f) if member.n >= f.min_n + 4 && pos >= 2 => {
                        let d_n = reports[pos - 2].outcomes[t].degeneration_vector().entries();
                        let d_n2 = reports[pos - 1].outcomes[t].degeneration_vector().entries();
                        Some(check_recurrence(d_n, d_n2, d, f.sign(member.n))?)
                    }
                    _ => None,
                });
            }
            reports.push(MemberReport {
                n: member.n,
                tets,
                expected_tets: self.tets_for(member.n),
                classes: member.classes.len(),
                degree_sum: member.classes.iter().map(EdgeClass::degree).sum(),
                outcomes,
                closed_form_ok,
                lemma_ok,
                recurrence_ok,
                schema_violations: self.schema.violations(
                    self.base_n,
                    member.n,
                    &member.classes,
                )?,
            });
        }
        Ok(reports)
    }
}

#[derive(Clone, Debug)]
pub struct MemberReport {
    pub n: usize,
    pub tets: usize,
    pub expected_tets: usize,
    pub classes: usize,
    pub degree_sum: usize,
    /// One per index list, in the order of the base index file.
    pub outcomes: Vec<Outcome>,
    /// `None` where a check does not apply to this member.
    pub closed_form_ok: Vec<Option<bool>>,
    pub lemma_ok: Vec<Option<bool>>,
    pub recurrence_ok: Vec<Option<bool>>,
    pub schema_violations: Vec<String>,
}

impl MemberReport {
    pub fn counts_ok(&self) -> bool {
        self.tets == self.expected_tets
            && self.classes == self.tets
            && self.degree_sum == 6 * self.tets
    }

    /// No applicable check failed and every index list certified a slope.
    pub fn ok(&self) -> bool {
        let checks = [&self.closed_form_ok, &self.lemma_ok, &self.recurrence_ok];
        self.counts_ok()
            && self.schema_violations.is_empty()
            && self.outcomes.iter().all(|o| o.certified().is_some())
            && checks.iter().all(|c| c.iter().all(|v| *v != Some(false)))
    }

    pub fn to_json(&self) -> Value {
        json!({
            "n": self.n,
            "tets": self.tets,
            "slopes": self.outcomes.iter().map(|o| o.certified().map(|r| r.slope.to_string())).collect::<Vec<_>>(),
            "d_vectors": self.outcomes.iter().map(|o| ints_json(o.degeneration_vector().entries())).collect::<Vec<_>>(),
            "closed_form_ok": self.closed_form_ok,
            "recurrence_ok": self.recurrence_ok,
            "lemma_ok": self.lemma_ok,
            "counts_ok": self.counts_ok(),
            "schema_ok": self.schema_violations.is_empty(),
        })
    }
}
