//! Ideal triangulations given as face-gluing tables, and their edge classes.
//!
//! A tetrahedron has vertices `0..4` and faces named by the vertices they
//! contain (`012`, `013`, `023`, `123`). A gluing token `u(abc)` on face
//! `(f0, f1, f2)` of tetrahedron `t` sends `f0 -> a`, `f1 -> b`, `f2 -> c` in
//! tetrahedron `u`; the vertex missing from the face goes to the digit missing
//! from the token.

use std::collections::HashMap;
use std::fmt;
use std::str::FromStr;

use petgraph::unionfind::UnionFind;

use crate::error::{Error, Result};

/// A permutation of `{0, 1, 2, 3}`, stored as the image of each vertex.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub struct Perm([u8; 4]);

impl Perm {
    pub const IDENTITY: Perm = Perm([0, 1, 2, 3]);

    pub fn new(images: [u8; 4]) -> Option<Perm> {
        let mut seen = [false; 4];
        for &v in &images {
            if v > 3 || seen[v as usize] {
                return None;
            }
            seen[v as usize] = true;
        }
        Some(Perm(images))
    }

    #[inline]
    pub fn apply(self, v: u8) -> u8 {
        self.0[v as usize]
    }

    pub fn inverse(self) -> Perm {
        let mut inv = [0u8; 4];
        for (v, &img) in self.0.iter().enumerate() {
            inv[img as usize] = v as u8;
        }
        Perm(inv)
    }

    /// `self` after `other`.
    pub fn compose(self, other: Perm) -> Perm {
        Perm([0, 1, 2, 3].map(|v| self.apply(other.apply(v))))
    }

    pub fn images(self) -> [u8; 4] {
        self.0
    }
}

/// One of the four faces of a tetrahedron, in the column order of a gluing table.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum Face {
    F012 = 0,
    F013 = 1,
    F023 = 2,
    F123 = 3,
}

impl Face {
    pub const ALL: [Face; 4] = [Face::F012, Face::F013, Face::F023, Face::F123];

    pub fn index(self) -> usize {
        self as usize
    }

    pub fn omitted_vertex(self) -> u8 {
        3 - self as u8
    }

    pub fn opposite(vertex: u8) -> Face {
        Face::ALL[3 - vertex as usize]
    }

    /// The three vertices of the face, ascending.
    pub fn vertices(self) -> [u8; 3] {
        match self {
            Face::F012 => [0, 1, 2],
            Face::F013 => [0, 1, 3],
            Face::F023 => [0, 2, 3],
            Face::F123 => [1, 2, 3],
        }
    }
}

impl fmt::Display for Face {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let [a, b, c] = self.vertices();
        write!(f, "{a}{b}{c}")
    }
}

/// An unordered pair of distinct tetrahedron vertices, i.e. one of the six edges.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum VertexPair {
    P01 = 0,
    P02 = 1,
    P03 = 2,
    P12 = 3,
    P13 = 4,
    P23 = 5,
}

impl VertexPair {
    pub const ALL: [VertexPair; 6] = [
        VertexPair::P01,
        VertexPair::P02,
        VertexPair::P03,
        VertexPair::P12,
        VertexPair::P13,
        VertexPair::P23,
    ];

    pub fn new(a: u8, b: u8) -> Option<VertexPair> {
        let (lo, hi) = if a < b { (a, b) } else { (b, a) };
        Some(match (lo, hi) {
            (0, 1) => VertexPair::P01,
            (0, 2) => VertexPair::P02,
            (0, 3) => VertexPair::P03,
            (1, 2) => VertexPair::P12,
            (1, 3) => VertexPair::P13,
            (2, 3) => VertexPair::P23,
            _ => return None,
        })
    }

    pub fn index(self) -> usize {
        self as usize
    }

    pub fn vertices(self) -> (u8, u8) {
        match self {
            VertexPair::P01 => (0, 1),
            VertexPair::P02 => (0, 2),
            VertexPair::P03 => (0, 3),
            VertexPair::P12 => (1, 2),
            VertexPair::P13 => (1, 3),
            VertexPair::P23 => (2, 3),
        }
    }

    /// The edge sharing no vertex with this one.
    pub fn opposite(self) -> VertexPair {
        VertexPair::ALL[5 - self.index()]
    }
}

impl fmt::Display for VertexPair {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let (a, b) = self.vertices();
        write!(f, "{a}{b}")
    }
}

impl FromStr for VertexPair {
    type Err = String;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        let digits: Vec<u8> = s
            .trim()
            .chars()
            .map(|c| c.to_digit(10).map(|d| d as u8))
            .collect::<Option<_>>()
            .ok_or_else(|| format!("bad vertex pair {s:?}"))?;
        match digits[..] {
            [a, b] => VertexPair::new(a, b).ok_or_else(|| format!("bad vertex pair {s:?}")),
            _ => Err(format!("bad vertex pair {s:?}")),
        }
    }
}

/// Where one face of a tetrahedron is glued.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub struct FaceGluing {
    pub target_tet: usize,
    pub vertex_map: Perm,
}

impl FaceGluing {
    pub fn new(target_tet: usize, vertex_map: Perm) -> Self {
        FaceGluing {
            target_tet,
            vertex_map,
        }
    }

    /// Builds the gluing for `face` from the images of its vertices, as written
    /// in a token such as `7(320)`.
    pub fn from_face_images(face: Face, target_tet: usize, images: [u8; 3]) -> Option<Self> {
        let mut map = [u8::MAX; 4];
        let mut used = [false; 4];
        for (&v, &img) in face.vertices().iter().zip(&images) {
            if img > 3 || used[img as usize] {
                return None;
            }
            used[img as usize] = true;
            map[v as usize] = img;
        }
        let rest = used.iter().position(|u| !u)? as u8;
        map[face.omitted_vertex() as usize] = rest;
        Some(FaceGluing::new(target_tet, Perm::new(map)?))
    }

    pub fn target_face(&self, source: Face) -> Face {
        Face::opposite(self.vertex_map.apply(source.omitted_vertex()))
    }

    /// The token for this gluing as seen from `face`.
    pub fn token(&self, face: Face) -> String {
        let [a, b, c] = face.vertices().map(|v| self.vertex_map.apply(v));
        format!("{}({a}{b}{c})", self.target_tet)
    }
}

fn parse_token(token: &str, face: Face, line: usize) -> Result<FaceGluing> {
    let bad = || Error::syntax(line, format!("bad gluing token {token:?} for face {face}"));
    let open = token.find('(').ok_or_else(bad)?;
    if !token.ends_with(')') {
        return Err(bad());
    }
    let target: usize = token[..open].parse().map_err(|_| bad())?;
    let inner = &token[open + 1..token.len() - 1];
    let digits: Vec<u8> = inner
        .chars()
        .map(|c| c.to_digit(4).map(|d| d as u8))
        .collect::<Option<_>>()
        .ok_or_else(bad)?;
    let images: [u8; 3] = digits.try_into().map_err(|_| bad())?;
    FaceGluing::from_face_images(face, target, images).ok_or_else(bad)
}

/// An ideal triangulation with every face glued.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Triangulation {
    tets: Vec<[FaceGluing; 4]>,
}

impl Triangulation {
    /// Validates a gluing table. Every face must be glued to a different face
    /// (a tetrahedron may meet itself along two distinct faces), and the gluing
    /// stored on the target face must be the inverse map.
    pub fn from_tets(tets: Vec<[FaceGluing; 4]>) -> Result<Self> {
        let count = tets.len();
        let mut claims: HashMap<(usize, Face), (usize, Face)> = HashMap::new();
        for (t, faces) in tets.iter().enumerate() {
            for face in Face::ALL {
                let g = faces[face.index()];
                if g.target_tet >= count {
                    return Err(Error::Gluing {
                        tet: t,
                        face,
                        message: format!(
                            "target tetrahedron {} out of range (0..{count})",
                            g.target_tet
                        ),
                    });
                }
                let target = (g.target_tet, g.target_face(face));
                if target == (t, face) {
                    return Err(Error::Gluing {
                        tet: t,
                        face,
                        message: "face glued to itself".into(),
                    });
                }
                if let Some(&(pt, pf)) = claims.get(&target) {
                    return Err(Error::Gluing {
                        tet: target.0,
                        face: target.1,
                        message: format!("face glued twice (from {pt}:{pf} and {t}:{face})"),
                    });
                }
                claims.insert(target, (t, face));
            }
        }
        for (t, faces) in tets.iter().enumerate() {
            for face in Face::ALL {
                let g = faces[face.index()];
                let back_face = g.target_face(face);
                let back = tets[g.target_tet][back_face.index()];
                let consistent = back.target_tet == t
                    && back.target_face(back_face) == face
                    && back.vertex_map.compose(g.vertex_map) == Perm::IDENTITY;
                if !consistent {
                    return Err(Error::Gluing {
                        tet: t,
                        face,
                        message: format!(
                            "gluing {} is not matched by the inverse on {}:{back_face} (found {})",
                            g.token(face),
                            g.target_tet,
                            back.token(back_face)
                        ),
                    });
                }
            }
        }
        Ok(Triangulation { tets })
    }

    /// Parses the line format `<tet>: <g012> <g013> <g023> <g123>`. Blank lines
    /// and lines starting with `#` are skipped.
    pub fn parse(text: &str) -> Result<Self> {
        let mut rows: Vec<Option<[FaceGluing; 4]>> = Vec::new();
        for (lineno, raw) in text.lines().enumerate() {
            let line = lineno + 1;
            let trimmed = raw.trim();
            if trimmed.is_empty() || trimmed.starts_with('#') {
                continue;
            }
            let (head, rest) = trimmed
                .split_once(':')
                .ok_or_else(|| Error::syntax(line, "expected \"<tet>: <gluings>\""))?;
            let tet: usize = head
                .trim()
                .parse()
                .map_err(|_| Error::syntax(line, format!("bad tetrahedron index {head:?}")))?;
            let tokens: Vec<&str> = rest.split_whitespace().collect();
            if tokens.len() != 4 {
                return Err(Error::syntax(
                    line,
                    format!(
                        "tetrahedron {tet}: expected 4 face gluings, found {}",
                        tokens.len()
                    ),
                ));
            }
            let mut gluings = [FaceGluing::new(0, Perm::IDENTITY); 4];
            for (face, token) in Face::ALL.into_iter().zip(tokens) {
                gluings[face.index()] = parse_token(token, face, line)?;
            }
            if rows.len() <= tet {
                rows.resize(tet + 1, None);
            }
            if rows[tet].replace(gluings).is_some() {
                return Err(Error::syntax(
                    line,
                    format!("tetrahedron {tet} listed twice"),
                ));
            }
        }
        let tets = rows
            .into_iter()
            .enumerate()
            .map(|(t, row)| {
                row.ok_or_else(|| Error::Tetrahedron {
                    tet: t,
                    message: "no gluing row".into(),
                })
            })
            .collect::<Result<Vec<_>>>()?;
        Triangulation::from_tets(tets)
    }

    pub fn len(&self) -> usize {
        self.tets.len()
    }

    pub fn is_empty(&self) -> bool {
        self.tets.is_empty()
    }

    pub fn gluing(&self, tet: usize, face: Face) -> FaceGluing {
        self.tets[tet][face.index()]
    }

    pub fn tets(&self) -> &[[FaceGluing; 4]] {
        &self.tets
    }

    pub fn into_tets(self) -> Vec<[FaceGluing; 4]> {
        self.tets
    }

    /// Orbits of the `6T` tetrahedron edges under the face identifications,
    /// numbered by first appearance (tets ascending, then edges `01, 02, 03,
    /// 12, 13, 23`).
    pub fn edge_classes(&self) -> Vec<EdgeClass> {
        let slot = |tet: usize, pair: VertexPair| tet * 6 + pair.index();
        let mut uf = UnionFind::<usize>::new(self.tets.len() * 6);
        for (t, faces) in self.tets.iter().enumerate() {
            for face in Face::ALL {
                let g = faces[face.index()];
                let [a, b, c] = face.vertices();
                for (x, y) in [(a, b), (a, c), (b, c)] {
                    let src = VertexPair::new(x, y).expect("distinct face vertices");
                    let dst = VertexPair::new(g.vertex_map.apply(x), g.vertex_map.apply(y))
                        .expect("permutation keeps vertices distinct");
                    uf.union(slot(t, src), slot(g.target_tet, dst));
                }
            }
        }

        let mut class_of_root: HashMap<usize, usize> = HashMap::new();
        let mut classes: Vec<EdgeClass> = Vec::new();
        for t in 0..self.tets.len() {
            for pair in VertexPair::ALL {
                let root = uf.find(slot(t, pair));
                let id = *class_of_root.entry(root).or_insert_with(|| {
                    classes.push(EdgeClass {
                        id: classes.len(),
                        members: Vec::new(),
                    });
                    classes.len() - 1
                });
                classes[id].members.push((t, pair));
            }
        }
        classes
    }

    /// Non-fatal findings: an ideal triangulation of a manifold whose cusps are
    /// all tori has exactly as many edge classes as tetrahedra.
    pub fn warnings(&self, classes: &[EdgeClass]) -> Vec<String> {
        let mut out = Vec::new();
        if classes.len() != self.tets.len() {
            out.push(format!(
                "{} edge classes for {} tetrahedra; expected equal counts",
                classes.len(),
                self.tets.len()
            ));
        }
        out
    }
}

impl FromStr for Triangulation {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        Triangulation::parse(s)
    }
}

impl fmt::Display for Triangulation {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        for (t, faces) in self.tets.iter().enumerate() {
            write!(f, "{t}:")?;
            for face in Face::ALL {
                write!(f, " {}", faces[face.index()].token(face))?;
            }
            writeln!(f)?;
        }
        Ok(())
    }
}

/// An edge of the triangulation: the set of tetrahedron edges identified with it.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct EdgeClass {
    pub id: usize,
    pub members: Vec<(usize, VertexPair)>,
}

impl EdgeClass {
    pub fn degree(&self) -> usize {
        self.members.len()
    }

    pub fn contains(&self, tet: usize, pair: VertexPair) -> bool {
        self.members.contains(&(tet, pair))
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    const K5: &str = include_str!("../../../data/triangulations/K5.tri");
    const L: &str = include_str!("../../../data/triangulations/L.tri");

    #[test]
    fn token_encodes_face_images_and_completes_the_map() {
        let tri = Triangulation::parse(K5).unwrap();
        let g = tri.gluing(0, Face::F012);
        assert_eq!(g.target_tet, 7);
        assert_eq!(g.vertex_map.images(), [3, 2, 0, 1]);
        assert_eq!(g.target_face(Face::F012), Face::F023);
    }

    #[test]
    fn folded_tetrahedron_self_gluing_is_accepted() {
        let k11 = include_str!("../../../data/triangulations/K11.tri");
        let tri = Triangulation::parse(k11).unwrap();
        let g = tri.gluing(17, Face::F012);
        assert_eq!(g.target_tet, 17);
        assert_eq!(g.target_face(Face::F012), Face::F023);
        assert_eq!(
            tri.gluing(17, Face::F023).vertex_map,
            g.vertex_map.inverse()
        );
    }

    #[test]
    fn broken_involution_is_rejected() {
        // tet 7's face 023 should read 0(210); 0(201) is not the inverse.
        let text = K5.replace("7: 0(203) 11(310) 0(210)", "7: 0(203) 11(310) 0(201)");
        let err = Triangulation::parse(&text).unwrap_err();
        assert!(matches!(err, Error::Gluing { .. }), "{err}");
    }

    #[test]
    fn face_glued_twice_names_the_face() {
        // Both 0:012 and 0:023 now claim 7:023.
        let text = K5.replace("0: 7(320) 12(132) 7(102)", "0: 7(320) 12(132) 7(302)");
        let err = Triangulation::parse(&text).unwrap_err();
        let msg = err.to_string();
        assert!(
            msg.contains("glued twice") || msg.contains("not matched"),
            "{msg}"
        );
    }

    #[test]
    fn face_glued_to_itself_is_rejected() {
        let bad = [
            FaceGluing::from_face_images(Face::F012, 0, [0, 2, 1]).unwrap(),
            FaceGluing::from_face_images(Face::F013, 0, [0, 2, 3]).unwrap(),
            FaceGluing::from_face_images(Face::F023, 0, [0, 1, 3]).unwrap(),
            FaceGluing::from_face_images(Face::F123, 0, [1, 2, 3]).unwrap(),
        ];
        let err = Triangulation::from_tets(vec![bad]).unwrap_err();
        assert!(err.to_string().contains("itself"), "{err}");
    }

    #[test]
    fn syntax_errors_carry_line_numbers() {
        let err = Triangulation::parse("0: 1(012) 1(013)\n").unwrap_err();
        assert!(matches!(err, Error::Syntax { line: 1, .. }));
        let err = Triangulation::parse("# c\n0: 0(01x) 0(013) 0(023) 0(123)\n").unwrap_err();
        assert!(matches!(err, Error::Syntax { line: 2, .. }));
        let err = Triangulation::parse("0: 3(320) 0(013) 0(023) 0(123)\n").unwrap_err();
        assert!(err.to_string().contains("out of range"), "{err}");
    }

    #[test]
    fn missing_row_is_reported() {
        let err = Triangulation::parse("1: 1(320) 1(023) 1(210) 1(120)\n").unwrap_err();
        assert!(matches!(err, Error::Tetrahedron { tet: 0, .. }), "{err}");
    }

    #[test]
    fn k5_edge_degrees_follow_the_edge_table() {
        let tri = Triangulation::parse(K5).unwrap();
        let classes = tri.edge_classes();
        assert_eq!(classes.len(), 15);
        let mut degrees: Vec<usize> = classes.iter().map(EdgeClass::degree).collect();
        degrees.sort_unstable();
        let mut expected = vec![5, 4, 8, 6, 5, 7, 4, 7, 7, 7, 6, 6, 6, 7, 5];
        expected.sort_unstable();
        assert_eq!(degrees, expected);
        assert!(tri.warnings(&classes).is_empty());
    }

    #[test]
    fn classes_are_numbered_by_first_appearance() {
        let tri = Triangulation::parse(K5).unwrap();
        let classes = tri.edge_classes();
        assert!(classes[0].contains(0, VertexPair::P01));
        let mut next = 0;
        for t in 0..tri.len() {
            for pair in VertexPair::ALL {
                let id = classes.iter().position(|c| c.contains(t, pair)).unwrap();
                assert!(id <= next);
                if id == next {
                    next += 1;
                }
            }
        }
    }

    #[test]
    fn two_cusped_link_parses() {
        let tri = Triangulation::parse(L).unwrap();
        assert_eq!(tri.len(), 16);
        assert_eq!(tri.edge_classes().len(), 16);
    }

    #[test]
    fn serialization_round_trips() {
        let tri = Triangulation::parse(K5).unwrap();
        let again = Triangulation::parse(&tri.to_string()).unwrap();
        assert_eq!(tri, again);
        let body: Vec<&str> = K5.lines().filter(|l| !l.starts_with('#')).collect();
        let out: Vec<String> = tri.to_string().lines().map(str::to_owned).collect();
        assert_eq!(body, out);
    }

    #[test]
    fn perm_inverse_composes_to_identity() {
        for images in [[1, 0, 3, 2], [3, 2, 0, 1], [2, 3, 1, 0]] {
            let p = Perm::new(images).unwrap();
            assert_eq!(p.compose(p.inverse()), Perm::IDENTITY);
            assert_eq!(p.inverse().compose(p), Perm::IDENTITY);
        }
        assert!(Perm::new([0, 0, 1, 2]).is_none());
    }

    #[test]
    fn vertex_pair_parsing_normalizes_order() {
        assert_eq!("32".parse::<VertexPair>().unwrap(), VertexPair::P23);
        assert_eq!("03".parse::<VertexPair>().unwrap(), VertexPair::P03);
        assert!("33".parse::<VertexPair>().is_err());
        assert!("0".parse::<VertexPair>().is_err());
    }
}
