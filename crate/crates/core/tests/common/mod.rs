//! Independent oracles and fixtures shared by the integration tests and the
//! acceptance runner. Nothing here calls the library's elimination code.
#![allow(dead_code)]

use std::collections::BTreeSet;
use std::path::PathBuf;

use bslope::families::{Family, FamilySpec};
use bslope::search::SearchReport;
use bslope::{
    exhaustive_search, verify_indices, DegenerationIndex, EdgeClass, EdgeSelector, Face,
    FaceGluing, GluingSystem, IntMatrix, PeripheralCurves, Perm, RowOrder, SearchOptions, Slope,
    SlopeProblem, Triangulation, VertexPair,
};
use num_bigint::BigInt;
use proptest::prelude::*;
use proptest::test_runner::{Config, RngAlgorithm, TestRng, TestRunner};
use serde::Deserialize;

pub const SHIPPED: [&str; 8] = ["L", "K5", "K11", "K13", "J2", "J4", "J6", "J8"];

pub fn data_dir() -> PathBuf {
    PathBuf::from(env!("CARGO_MANIFEST_DIR")).join("../../data")
}

pub fn read(rel: &str) -> String {
    std::fs::read_to_string(data_dir().join(rel)).unwrap_or_else(|e| panic!("{rel}: {e}"))
}

pub fn triangulation(name: &str) -> Triangulation {
    Triangulation::parse(&read(&format!("triangulations/{name}.tri"))).unwrap()
}

pub fn indices(name: &str) -> Vec<DegenerationIndex> {
    DegenerationIndex::parse_list(&read(&format!("indices/{name}.idx"))).unwrap()
}

pub fn problem(name: &str, omit: &str, order: &RowOrder) -> SlopeProblem {
    let tri = triangulation(name);
    let (classes, sys) = GluingSystem::from_triangulation(&tri);
    let r = sys
        .build_r(&classes, &omit.parse().unwrap(), order)
        .unwrap();
    let curves = PeripheralCurves::parse(&read(&format!("curves/{name}.curves"))).unwrap();
    SlopeProblem::new(r, curves).unwrap()
}

pub fn k5() -> SlopeProblem {
    problem("K5", "2:03", &RowOrder::FirstAppearance)
}

/// The K_5 edge numbering of the published edge table: one member per row.
pub fn k5_reference_order() -> RowOrder {
    RowOrder::Reference(
        edge_table("K5")
            .iter()
            .map(|row| {
                let (t, p) = row.first;
                EdgeSelector::Member(t, p)
            })
            .collect(),
    )
}

pub fn family(f: Family) -> FamilySpec {
    FamilySpec::load_from_data_dir(&data_dir(), f).unwrap()
}

pub fn ints(v: &[i64]) -> Vec<BigInt> {
    v.iter().map(|&x| BigInt::from(x)).collect()
}

// ---- published reference values ----

#[derive(Deserialize)]
pub struct Published {
    pub vector: Vec<PublishedVector>,
    pub valuation: Vec<PublishedValuation>,
    pub slope: Vec<SlopeFormula>,
    pub search: PublishedSearch,
}

#[derive(Deserialize)]
pub struct PublishedVector {
    pub family: String,
    pub n: usize,
    pub index: usize,
    pub d: Vec<i64>,
}

#[derive(Deserialize)]
pub struct PublishedValuation {
    pub family: String,
    pub n: usize,
    pub index: usize,
    /// `(v_lambda, v_mu)`
    pub value: [i64; 2],
}

#[derive(Deserialize)]
pub struct SlopeFormula {
    pub family: String,
    pub index: usize,
    pub num: [i64; 3],
    pub den: [i64; 3],
}

impl SlopeFormula {
    pub fn at(&self, n: usize) -> Slope {
        let n = n as i64;
        let q = |c: [i64; 3]| c[0] * n * n + c[1] * n + c[2];
        Slope::from_i64(q(self.num), q(self.den)).unwrap()
    }
}

#[derive(Deserialize)]
pub struct PublishedSearch {
    pub certified: Vec<String>,
}

pub fn published() -> Published {
    toml::from_str(&read("golden/published.toml")).unwrap()
}

impl Published {
    pub fn d(&self, family: &str, n: usize, index: usize) -> Vec<BigInt> {
        let v = self
            .vector
            .iter()
            .find(|v| v.family == family && v.n == n && v.index == index)
            .unwrap_or_else(|| panic!("no published vector {family}_{n} I_{index}"));
        ints(&v.d)
    }

    pub fn valuation(&self, family: &str, n: usize, index: usize) -> [i64; 2] {
        self.valuation
            .iter()
            .find(|v| v.family == family && v.n == n && v.index == index)
            .unwrap_or_else(|| panic!("no published valuation {family}_{n} I_{index}"))
            .value
    }

    pub fn slope(&self, family: &str, n: usize, index: usize) -> Slope {
        self.slope
            .iter()
            .find(|s| s.family == family && s.index == index)
            .unwrap_or_else(|| panic!("no slope formula {family} I_{index}"))
            .at(n)
    }
}

// ---- determinants ----

/// Laplace expansion along the first row.
pub fn cofactor_det(m: &[Vec<i64>]) -> BigInt {
    let n = m.len();
    if n == 0 {
        return BigInt::from(1);
    }
    let mut total = BigInt::from(0);
    for j in 0..n {
        if m[0][j] == 0 {
            continue;
        }
        let minor: Vec<Vec<i64>> = m[1..]
            .iter()
            .map(|row| {
                row.iter()
                    .enumerate()
                    .filter(|&(k, _)| k != j)
                    .map(|(_, &v)| v)
                    .collect()
            })
            .collect();
        let term = BigInt::from(m[0][j]) * cofactor_det(&minor);
        if j % 2 == 0 {
            total += term;
        } else {
            total -= term;
        }
    }
    total
}

/// Laplace expansion memoized over column subsets; exact for any size the
/// tests use (up to about 22 columns).
pub fn subset_det(m: &[Vec<i64>]) -> BigInt {
    let n = m.len();
    let mut dp = vec![BigInt::from(0); 1 << n];
    dp[0] = BigInt::from(1);
    for mask in 0usize..(1 << n) {
        let row = mask.count_ones() as usize;
        if row >= n || dp[mask] == BigInt::from(0) {
            continue;
        }
        let base = dp[mask].clone();
        for col in 0..n {
            if mask & (1 << col) != 0 || m[row][col] == 0 {
                continue;
            }
            // sign from the number of chosen columns to the right of col
            let inversions = (mask >> col).count_ones();
            let term = &base * m[row][col];
            if inversions % 2 == 0 {
                dp[mask | (1 << col)] += term;
            } else {
                dp[mask | (1 << col)] -= term;
            }
        }
    }
    dp[(1 << n) - 1].clone()
}

/// `d_k = (-1)^k det(M without column k)` for an `(n-1) x n` matrix.
pub fn oracle_minors(m: &IntMatrix) -> Vec<BigInt> {
    let rows = m.to_rows();
    (0..m.cols())
        .map(|k| {
            let sq: Vec<Vec<i64>> = rows
                .iter()
                .map(|r| {
                    r.iter()
                        .enumerate()
                        .filter(|&(c, _)| c != k)
                        .map(|(_, &v)| v)
                        .collect()
                })
                .collect();
            let det = if sq.len() <= 7 {
                cofactor_det(&sq)
            } else {
                subset_det(&sq)
            };
            if k % 2 == 0 {
                det
            } else {
                -det
            }
        })
        .collect()
}

/// Degeneration matrix straight from the definition: column `k` is `r'`,
/// `r''` or `-r' - r''` of tetrahedron `k`.
pub fn oracle_degeneration_matrix(r: &IntMatrix, index: &DegenerationIndex) -> IntMatrix {
    let rows: Vec<Vec<i64>> = r
        .row_iter()
        .map(|row| {
            index
                .entries()
                .iter()
                .enumerate()
                .map(|(k, v)| match v.as_char() {
                    '0' => row[2 * k],
                    '1' => row[2 * k + 1],
                    _ => -row[2 * k] - row[2 * k + 1],
                })
                .collect()
        })
        .collect();
    if rows.is_empty() {
        IntMatrix::zeros(0, index.len())
    } else {
        IntMatrix::from_rows(rows).unwrap()
    }
}

pub fn sign_definite(d: &[BigInt]) -> bool {
    let zero = BigInt::from(0);
    d.iter().all(|x| *x > zero) || d.iter().all(|x| *x < zero)
}

// ---- edge classes ----

/// Edge orbits by breadth-first search over face identifications.
pub fn oracle_edge_classes(tri: &Triangulation) -> Vec<BTreeSet<(usize, VertexPair)>> {
    let n = tri.len();
    let mut adj: Vec<Vec<usize>> = vec![Vec::new(); 6 * n];
    for t in 0..n {
        for face in Face::ALL {
            let g = tri.gluing(t, face);
            let [a, b, c] = face.vertices();
            for (x, y) in [(a, b), (a, c), (b, c)] {
                let src = 6 * t + VertexPair::new(x, y).unwrap().index();
                let img = VertexPair::new(g.vertex_map.apply(x), g.vertex_map.apply(y)).unwrap();
                let dst = 6 * g.target_tet + img.index();
                adj[src].push(dst);
                adj[dst].push(src);
            }
        }
    }
    let mut seen = vec![false; 6 * n];
    let mut out = Vec::new();
    for start in 0..6 * n {
        if seen[start] {
            continue;
        }
        let mut class = BTreeSet::new();
        let mut stack = vec![start];
        seen[start] = true;
        while let Some(s) = stack.pop() {
            class.insert((s / 6, VertexPair::ALL[s % 6]));
            for &nb in &adj[s] {
                if !seen[nb] {
                    seen[nb] = true;
                    stack.push(nb);
                }
            }
        }
        out.push(class);
    }
    out
}

pub fn member_sets(classes: &[EdgeClass]) -> Vec<BTreeSet<(usize, VertexPair)>> {
    classes
        .iter()
        .map(|c| c.members.iter().copied().collect())
        .collect()
}

pub fn sorted<T: Ord>(mut v: Vec<T>) -> Vec<T> {
    v.sort();
    v
}

pub struct EdgeRow {
    pub degree: usize,
    pub first: (usize, VertexPair),
    pub members: BTreeSet<(usize, VertexPair)>,
}

/// Rows of `data/edges/<name>.edges`: `<id> <degree>: tet(pair) ...`.
pub fn edge_table(name: &str) -> Vec<EdgeRow> {
    read(&format!("edges/{name}.edges"))
        .lines()
        .filter(|l| !l.trim().is_empty() && !l.starts_with('#'))
        .map(|l| {
            let (head, rest) = l.split_once(':').unwrap();
            let degree = head.split_whitespace().nth(1).unwrap().parse().unwrap();
            let members: Vec<(usize, VertexPair)> = rest
                .split_whitespace()
                .map(|tok| {
                    let (t, p) = tok.trim_end_matches(')').split_once('(').unwrap();
                    (t.parse().unwrap(), p.parse().unwrap())
                })
                .collect();
            EdgeRow {
                degree,
                first: members[0],
                members: members.into_iter().collect(),
            }
        })
        .collect()
}

// ---- random triangulations ----

/// Pairs the `4n` faces at random with random vertex bijections, retrying
/// until the triangulation has exactly `n` edge classes.
pub fn random_triangulation(n: usize, rng: &mut TestRng) -> Triangulation {
    const BIJECTIONS: [[usize; 3]; 6] = [
        [0, 1, 2],
        [0, 2, 1],
        [1, 0, 2],
        [1, 2, 0],
        [2, 0, 1],
        [2, 1, 0],
    ];
    loop {
        let mut slots: Vec<usize> = (0..4 * n).collect();
        for i in (1..slots.len()).rev() {
            slots.swap(i, rng.random_range(0..=i));
        }
        let placeholder = FaceGluing::new(0, Perm::IDENTITY);
        let mut tets = vec![[placeholder; 4]; n];
        for pair in slots.chunks(2) {
            let (a, b) = (pair[0], pair[1]);
            let (fa, fb) = (Face::ALL[a % 4], Face::ALL[b % 4]);
            let s = BIJECTIONS[rng.random_range(0..6)];
            let (va, vb) = (fa.vertices(), fb.vertices());
            let mut map = [0u8; 4];
            for i in 0..3 {
                map[va[i] as usize] = vb[s[i]];
            }
            map[fa.omitted_vertex() as usize] = fb.omitted_vertex();
            let p = Perm::new(map).unwrap();
            tets[a / 4][a % 4] = FaceGluing::new(b / 4, p);
            tets[b / 4][b % 4] = FaceGluing::new(a / 4, p.inverse());
        }
        let tri = Triangulation::from_tets(tets).expect("random pairing is a valid gluing table");
        if tri.edge_classes().len() == n {
            return tri;
        }
    }
}

pub fn random_problem(n: usize, rng: &mut TestRng) -> SlopeProblem {
    let tri = random_triangulation(n, rng);
    let (classes, sys) = GluingSystem::from_triangulation(&tri);
    let r = sys
        .build_r(&classes, &EdgeSelector::Id(0), &RowOrder::FirstAppearance)
        .unwrap();
    let mut curve = || {
        (0..2 * n)
            .map(|_| rng.random_range(-3i64..=3))
            .collect::<Vec<_>>()
    };
    let (m, l) = (curve(), curve());
    SlopeProblem::new(r, PeripheralCurves::new(m, l).unwrap()).unwrap()
}

fn runner(cases: u32) -> TestRunner {
    TestRunner::new(Config {
        cases,
        failure_persistence: None,
        ..Config::default()
    })
}

fn seeded(seed: [u8; 32]) -> TestRng {
    TestRng::from_seed(RngAlgorithm::ChaCha, &seed)
}

// ---- property suites, shared with the acceptance runner ----

/// R(I) d(I) = 0 on `cases` random indices of a shipped triangulation.
pub fn kernel_property(name: &str, cases: u32) -> Result<(), String> {
    let tri = triangulation(name);
    let (classes, sys) = GluingSystem::from_triangulation(&tri);
    let r = sys
        .build_r(&classes, &EdgeSelector::Id(0), &RowOrder::FirstAppearance)
        .unwrap();
    let n = tri.len();
    let strategy = prop::collection::vec(0u8..3, n);
    runner(cases)
        .run(&strategy, |digits| {
            let index = DegenerationIndex::new(
                digits
                    .iter()
                    .map(|&d| bslope::IndexValue::from_digit(d).unwrap())
                    .collect(),
            );
            let ri = bslope::degeneration_matrix(&r, &index).unwrap();
            let d = bslope::degeneration_vector(&ri).unwrap();
            for row in ri.row_iter() {
                let dot: BigInt = row.iter().zip(d.entries()).map(|(&a, b)| a * b).sum();
                prop_assert_eq!(dot, BigInt::from(0), "index {}", index);
            }
            Ok(())
        })
        .map_err(|e| format!("{name}: {e}"))
}

/// The library determinant equals Laplace expansion on random square
/// matrices of size 1..=7 with entries in [-5, 5].
pub fn determinant_property(cases: u32) -> Result<(), String> {
    let strategy = (1usize..=7)
        .prop_flat_map(|k| prop::collection::vec(prop::collection::vec(-5i64..=5, k), k));
    runner(cases)
        .run(&strategy, |rows| {
            let m = IntMatrix::from_rows(rows.clone()).unwrap();
            prop_assert_eq!(bslope::exact::exact_det(&m), cofactor_det(&rows));
            Ok(())
        })
        .map_err(|e| e.to_string())
}

/// Every column of the full exponent matrix sums to zero.
pub fn column_sums_vanish(tri: &Triangulation) -> bool {
    let (_, sys) = GluingSystem::from_triangulation(tri);
    let full = sys.full_matrix();
    (0..full.cols()).all(|c| full.column(c).iter().sum::<i64>() == 0)
}

pub fn degree_counts_hold(tri: &Triangulation) -> bool {
    let classes = tri.edge_classes();
    classes.len() == tri.len()
        && classes.iter().map(EdgeClass::degree).sum::<usize>() == 6 * tri.len()
}

/// Column sums, degree sum and class count for every shipped triangulation
/// and every generated family member up to the given bounds.
pub fn structural_checks(max_k: usize, max_j: usize) -> Result<(), String> {
    for name in SHIPPED {
        if !column_sums_vanish(&triangulation(name)) {
            return Err(format!("{name}: nonzero column sum"));
        }
    }
    for (f, max_n) in [(Family::K, max_k), (Family::J, max_j)] {
        for m in family(f).members(max_n).map_err(|e| e.to_string())? {
            if !column_sums_vanish(&m.triangulation) {
                return Err(format!("{f}_{}: nonzero column sum", m.n));
            }
            if !degree_counts_hold(&m.triangulation) {
                return Err(format!("{f}_{}: degree sum or class count off", m.n));
            }
        }
    }
    Ok(())
}

fn same_results(a: &SearchReport, b: &SearchReport) -> bool {
    a.certified == b.certified && a.rejected == b.rejected && a.scanned == b.scanned
}

/// Pruned and unpruned scans, and a plain evaluation of all `3^n` indices,
/// agree on random triangulations with up to `max_n` tetrahedra.
pub fn pruning_property(max_n: usize, cases: u32) -> Result<(), String> {
    let strategy = (1usize..=max_n, any::<[u8; 32]>());
    runner(cases)
        .run(&strategy, |(n, seed)| {
            let p = random_problem(n, &mut seeded(seed));
            let plain = exhaustive_search(&p, &SearchOptions::default()).unwrap();
            let pruned = exhaustive_search(
                &p,
                &SearchOptions {
                    prune: true,
                    workers: 2,
                    ..SearchOptions::default()
                },
            )
            .unwrap();
            prop_assert!(same_results(&plain, &pruned), "n = {}", n);
            let all: Vec<DegenerationIndex> = (0..3u64.pow(n as u32))
                .map(|k| DegenerationIndex::from_rank(k, n))
                .collect();
            let direct = verify_indices(&p, &all).unwrap();
            prop_assert_eq!(&plain.certified, &direct.certified);
            let no_slope: Vec<_> = direct
                .rejected
                .into_iter()
                .filter(|o| matches!(o, bslope::peripheral::Outcome::NoSlope { .. }))
                .collect();
            prop_assert_eq!(&plain.rejected, &no_slope);
            Ok(())
        })
        .map_err(|e| e.to_string())
}
