//! Simply-laced finite and affine Dynkin diagrams, Coxeter numbers, and the
//! box product of two bipartite graphs.

use std::fmt;
use std::str::FromStr;

use serde::{Deserialize, Serialize};

use crate::belt::Color;
use crate::error::{Error, Result};
use crate::quiver::Quiver;

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub enum Family {
    A,
    D,
    E,
    AAffine,
    DAffine,
    EAffine,
}

impl Family {
    pub fn is_affine(self) -> bool {
        matches!(self, Family::AAffine | Family::DAffine | Family::EAffine)
    }

    fn letter(self) -> char {
        match self {
            Family::A | Family::AAffine => 'A',
            Family::D | Family::DAffine => 'D',
            Family::E | Family::EAffine => 'E',
        }
    }
}

/// A Dynkin type such as `A3`, `D4`, `E6`, or an affine type written
/// `A1(1)`, `D4(1)`, `E6(1)`.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub struct DynkinSpec {
    pub family: Family,
    pub rank: usize,
}

impl DynkinSpec {
    pub fn new(family: Family, rank: usize) -> Result<Self> {
        let spec = DynkinSpec { family, rank };
        spec.validate()?;
        Ok(spec)
    }

    pub fn a(rank: usize) -> Self {
        DynkinSpec { family: Family::A, rank }
    }

    pub fn a_affine(rank: usize) -> Self {
        DynkinSpec { family: Family::AAffine, rank }
    }

    pub fn validate(&self) -> Result<()> {
        let ok = match self.family {
            Family::A => self.rank >= 1,
            Family::D | Family::DAffine => self.rank >= 4,
            Family::E | Family::EAffine => (6..=8).contains(&self.rank),
            Family::AAffine => {
                if self.rank >= 2 && self.rank % 2 == 0 {
                    return Err(Error::NotBipartite(self.to_string()));
                }
                self.rank >= 1
            }
        };
        if ok {
            Ok(())
        } else {
            Err(Error::BadRank { family: self.to_string(), rank: self.rank })
        }
    }

    pub fn vertex_count(&self) -> usize {
        if self.family.is_affine() {
            self.rank + 1
        } else {
            self.rank
        }
    }
}

impl fmt::Display for DynkinSpec {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}{}", self.family.letter(), self.rank)?;
        if self.family.is_affine() {
            write!(f, "(1)")?;
        }
        Ok(())
    }
}

impl FromStr for DynkinSpec {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        let bad = || Error::Parse(format!("unrecognised Dynkin type {s:?}"));
        let (body, affine) = match s.strip_suffix("(1)") {
            Some(b) => (b, true),
            None => (s, false),
        };
        let mut chars = body.chars();
        let letter = chars.next().ok_or_else(bad)?;
        let digits = chars.as_str();
        if digits.is_empty() || digits.len() > 6 || !digits.bytes().all(|b| b.is_ascii_digit()) {
            return Err(bad());
        }
        let rank: usize = digits.parse().map_err(|_| bad())?;
        let family = match (letter, affine) {
            ('A', false) => Family::A,
            ('D', false) => Family::D,
            ('E', false) => Family::E,
            ('A', true) => Family::AAffine,
            ('D', true) => Family::DAffine,
            ('E', true) => Family::EAffine,
            _ => return Err(bad()),
        };
        DynkinSpec::new(family, rank)
    }
}

impl Serialize for DynkinSpec {
    fn serialize<S: serde::Serializer>(&self, s: S) -> std::result::Result<S::Ok, S::Error> {
        s.collect_str(self)
    }
}

impl<'de> Deserialize<'de> for DynkinSpec {
    fn deserialize<D: serde::Deserializer<'de>>(d: D) -> std::result::Result<Self, D::Error> {
        let s = String::deserialize(d)?;
        s.parse().map_err(serde::de::Error::custom)
    }
}

/// An undirected multigraph with a proper 2-coloring.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct BipartiteGraph {
    pub vertex_count: usize,
    /// `(u, v, multiplicity)` with `u < v`.
    pub edges: Vec<(usize, usize, i64)>,
    /// Class 0 or 1 per vertex.
    pub coloring: Vec<u8>,
}

impl BipartiteGraph {
    /// Two-colors the graph by breadth-first search, putting the lowest vertex
    /// of each component in class 0.
    pub fn from_edges(vertex_count: usize, edges: Vec<(usize, usize, i64)>) -> Result<Self> {
        let mut adj = vec![Vec::new(); vertex_count];
        for &(u, v, _) in &edges {
            adj[u].push(v);
            adj[v].push(u);
        }
        let coloring = two_color(&adj).ok_or_else(|| Error::NotBipartite("graph".into()))?;
        Ok(BipartiteGraph { vertex_count, edges, coloring })
    }

    pub fn edge_count_with_multiplicity(&self) -> i64 {
        self.edges.iter().map(|e| e.2).sum()
    }

    pub fn is_properly_colored(&self) -> bool {
        self.coloring.len() == self.vertex_count
            && self.edges.iter().all(|&(u, v, _)| self.coloring[u] != self.coloring[v])
    }
}

/// Proper 2-coloring of an adjacency list, or `None` for an odd cycle.
pub(crate) fn two_color(adj: &[Vec<usize>]) -> Option<Vec<u8>> {
    let n = adj.len();
    let mut color: Vec<Option<u8>> = vec![None; n];
    for start in 0..n {
        if color[start].is_some() {
            continue;
        }
        color[start] = Some(0);
        let mut queue = std::collections::VecDeque::from([start]);
        while let Some(u) = queue.pop_front() {
            let cu = color[u]?;
            for &v in &adj[u] {
                match color[v] {
                    None => {
                        color[v] = Some(1 - cu);
                        queue.push_back(v);
                    }
                    Some(cv) if cv == cu => return None,
                    Some(_) => {}
                }
            }
        }
    }
    color.into_iter().collect()
}

fn path(n: usize) -> Vec<(usize, usize, i64)> {
    (1..n).map(|i| (i - 1, i, 1)).collect()
}

pub fn build_diagram(spec: DynkinSpec) -> Result<BipartiteGraph> {
    spec.validate()?;
    let r = spec.rank;
    let n = spec.vertex_count();
    let edges = match spec.family {
        Family::A => path(r),
        // Path 0..r-2 with the last two vertices both hanging off r-3.
        Family::D => {
            let mut e = path(r - 1);
            e.push((r - 3, r - 1, 1));
            e
        }
        // Path 0..r-2 with one extra vertex attached at position 2.
        Family::E => {
            let mut e = path(r - 1);
            e.push((2, r - 1, 1));
            e
        }
        Family::AAffine if r == 1 => vec![(0, 1, 2)],
        Family::AAffine => {
            let mut e = path(r + 1);
            e.push((0, r, 1));
            e
        }
        Family::DAffine => {
            let mut e = path(r - 1);
            e.push((1, r - 1, 1));
            e.push((r - 3, r, 1));
            e
        }
        Family::EAffine => match r {
            6 => {
                let mut e = path(5);
                e.push((2, 5, 1));
                e.push((5, 6, 1));
                e
            }
            7 => {
                let mut e = path(7);
                e.push((3, 7, 1));
                e
            }
            _ => {
                let mut e = path(8);
                e.push((2, 8, 1));
                e
            }
        },
    };
    let edges = edges.into_iter().map(|(u, v, k)| (u.min(v), u.max(v), k)).collect();
    BipartiteGraph::from_edges(n, edges).map_err(|_| Error::NotBipartite(spec.to_string()))
}

pub fn coxeter_number(spec: DynkinSpec) -> Result<usize> {
    spec.validate()?;
    match spec.family {
        Family::A => Ok(spec.rank + 1),
        Family::D => Ok(2 * spec.rank - 2),
        Family::E => Ok(match spec.rank {
            6 => 12,
            7 => 18,
            _ => 30,
        }),
        _ => Err(Error::AffineUnsupported(spec.to_string())),
    }
}

/// Provenance of a box-product quiver: vertex `a + left_size * b` is the pair
/// `(a, b)` of left and right factor vertices.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct ProductInfo {
    pub left_size: usize,
    pub right_size: usize,
    pub left_coloring: Vec<u8>,
    pub right_coloring: Vec<u8>,
    pub left_spec: Option<DynkinSpec>,
    pub right_spec: Option<DynkinSpec>,
}

impl ProductInfo {
    pub fn pair(&self, v: usize) -> (usize, usize) {
        (v % self.left_size, v / self.left_size)
    }

    pub fn vertex(&self, a: usize, b: usize) -> usize {
        a + self.left_size * b
    }

    /// 1-based position of the left factor vertex counted from the nearer end
    /// of a type-A left factor.
    pub fn j_index(&self, v: usize) -> Option<usize> {
        let spec = self.left_spec?;
        if spec.family != Family::A {
            return None;
        }
        let (a, _) = self.pair(v);
        Some((a + 1).min(spec.rank - a))
    }
}

/// Position of a class `(left, right)` in the orientation cycle
/// `(0,0) -> (1,0) -> (1,1) -> (0,1) -> (0,0)`.
fn phase(left: u8, right: u8) -> u8 {
    match (left, right) {
        (0, 0) => 0,
        (1, 0) => 1,
        (1, 1) => 2,
        _ => 3,
    }
}

pub fn box_product(g: &BipartiteGraph, g2: &BipartiteGraph) -> Quiver {
    let info = ProductInfo {
        left_size: g.vertex_count,
        right_size: g2.vertex_count,
        left_coloring: g.coloring.clone(),
        right_coloring: g2.coloring.clone(),
        left_spec: None,
        right_spec: None,
    };
    let n = g.vertex_count * g2.vertex_count;
    let mut q = Quiver::empty(n);
    let mut connect = |x: usize, y: usize, mult: i64| {
        let (xa, xb) = info.pair(x);
        let (ya, yb) = info.pair(y);
        let px = phase(g.coloring[xa], g2.coloring[xb]);
        let py = phase(g.coloring[ya], g2.coloring[yb]);
        let (from, to) = if (px + 1) % 4 == py { (x, y) } else { (y, x) };
        q.add_arrows(from, to, mult).expect("box product vertices are in range");
    };
    for &(b1, b2, mult) in &g2.edges {
        for a in 0..g.vertex_count {
            connect(info.vertex(a, b1), info.vertex(a, b2), mult);
        }
    }
    for &(a1, a2, mult) in &g.edges {
        for b in 0..g2.vertex_count {
            connect(info.vertex(a1, b), info.vertex(a2, b), mult);
        }
    }
    q.set_product_info(info);
    q
}

/// Box product of two catalog diagrams, with the factor types recorded.
pub fn product_of(left: DynkinSpec, right: DynkinSpec) -> Result<Quiver> {
    let g = build_diagram(left)?;
    let g2 = build_diagram(right)?;
    let mut q = box_product(&g, &g2);
    let mut info = q.product_info().cloned().expect("box_product sets metadata");
    info.left_spec = Some(left);
    info.right_spec = Some(right);
    for v in 0..q.vertex_count() {
        let (a, b) = info.pair(v);
        q.set_label(v, format!("({a},{b})"));
    }
    q.set_product_info(info);
    Ok(q)
}

/// Black on `Q0 x Q0' ∪ Q1 x Q1'`, white elsewhere.
pub fn belt_coloring(q: &Quiver) -> Result<Vec<Color>> {
    let info = q.product_info().ok_or(Error::MissingMetadata)?;
    Ok((0..q.vertex_count())
        .map(|v| {
            let (a, b) = info.pair(v);
            if info.left_coloring[a] == info.right_coloring[b] {
                Color::Black
            } else {
                Color::White
            }
        })
        .collect())
}
