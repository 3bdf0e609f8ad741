//! Finite graphs, combinatorial Laplacians, and observation sets.
//!
//! The Laplacian convention is `Δf(x) = Σ_{y~x} (f(y) − f(x))`: symmetric,
//! zero row sums, negative semidefinite. Graphs are simple (no self-loops,
//! no parallel edges); the `N = 2` torus keeps a single edge per axis.
//!
//! Torus vertices are indexed row-major mixed radix,
//! `x = Σ_j x_j · N^(d−1−j)`, so coordinate 0 is the most significant digit.

use std::collections::BTreeSet;
use std::fmt;
use std::str::FromStr;

use nalgebra::DMatrix;
use num_complex::Complex64;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

/// Builder tag carried by a [`GraphSpec`]; serialized as a plain string
/// (`"path"`, `"cycle"`, `"torus(8,2)"`, `"complete"`, `"custom"`).
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum GraphLabel {
    Path,
    Cycle,
    Complete,
    Torus { n_side: usize, dim: usize },
    Custom,
}

impl fmt::Display for GraphLabel {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            GraphLabel::Path => write!(f, "path"),
            GraphLabel::Cycle => write!(f, "cycle"),
            GraphLabel::Complete => write!(f, "complete"),
            GraphLabel::Torus { n_side, dim } => write!(f, "torus({n_side},{dim})"),
            GraphLabel::Custom => write!(f, "custom"),
        }
    }
}

impl FromStr for GraphLabel {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        let s = s.trim();
        match s {
            "path" => return Ok(GraphLabel::Path),
            "cycle" => return Ok(GraphLabel::Cycle),
            "complete" => return Ok(GraphLabel::Complete),
            "custom" => return Ok(GraphLabel::Custom),
            _ => {}
        }
        if let Some(body) = s.strip_prefix("torus(").and_then(|b| b.strip_suffix(')')) {
            let parts: Vec<&str> = body.split(',').collect();
            if parts.len() == 2 {
                let n_side = parts[0].trim().parse().map_err(|_| bad_label(s))?;
                let dim = parts[1].trim().parse().map_err(|_| bad_label(s))?;
                return Ok(GraphLabel::Torus { n_side, dim });
            }
        }
        Err(bad_label(s))
    }
}

fn bad_label(s: &str) -> Error {
    Error::InvalidSpec(format!("unknown graph label {s:?}"))
}

impl Serialize for GraphLabel {
    fn serialize<S: serde::Serializer>(&self, ser: S) -> std::result::Result<S::Ok, S::Error> {
        ser.serialize_str(&self.to_string())
    }
}

impl<'de> Deserialize<'de> for GraphLabel {
    fn deserialize<D: serde::Deserializer<'de>>(de: D) -> std::result::Result<Self, D::Error> {
        let s = String::deserialize(de)?;
        s.parse().map_err(serde::de::Error::custom)
    }
}

/// A finite simple graph with a builder tag.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct GraphSpec {
    /// Vertex count; vertices are `0..n`.
    pub n: usize,
    /// Unordered edges stored as sorted pairs `(i, j)` with `i < j`.
    pub edges: Vec<(usize, usize)>,
    pub label: GraphLabel,
}

impl GraphSpec {
    fn from_edge_set(n: usize, edges: BTreeSet<(usize, usize)>, label: GraphLabel) -> Self {
        GraphSpec {
            n,
            edges: edges.into_iter().collect(),
            label,
        }
    }

    pub fn degree(&self, v: usize) -> usize {
        self.edges
            .iter()
            .filter(|&&(a, b)| a == v || b == v)
            .count()
    }

    pub fn to_json(&self) -> String {
        serde_json::to_string(self).expect("graph serialization cannot fail")
    }

    pub fn from_json(s: &str) -> Result<Self> {
        let g: GraphSpec = serde_json::from_str(s)?;
        validate_edges(g.n, &g.edges)?;
        Ok(g)
    }
}

fn validate_edges(n: usize, edges: &[(usize, usize)]) -> Result<()> {
    let mut seen = BTreeSet::new();
    for &(a, b) in edges {
        if a == b {
            return Err(Error::InvalidSpec(format!("self-loop at vertex {a}")));
        }
        if a >= n || b >= n {
            return Err(Error::InvalidSpec(format!(
                "edge ({a},{b}) outside vertex range 0..{n}"
            )));
        }
        let key = (a.min(b), a.max(b));
        if !seen.insert(key) {
            return Err(Error::InvalidSpec(format!("duplicate edge ({a},{b})")));
        }
    }
    Ok(())
}

fn positive(n: usize, what: &str) -> Result<()> {
    if n == 0 {
        Err(Error::InvalidSpec(format!("{what} must be positive")))
    } else {
        Ok(())
    }
}

/// Path graph on `n ≥ 1` vertices.
pub fn path(n: usize) -> Result<GraphSpec> {
    positive(n, "path size")?;
    let edges = (0..n.saturating_sub(1)).map(|i| (i, i + 1)).collect();
    Ok(GraphSpec::from_edge_set(n, edges, GraphLabel::Path))
}

/// Cycle graph on `n ≥ 1` vertices. `cycle(1)` has no edge and `cycle(2)` a
/// single edge (simple-graph convention).
pub fn cycle(n: usize) -> Result<GraphSpec> {
    positive(n, "cycle size")?;
    let mut edges = BTreeSet::new();
    for i in 0..n {
        let j = (i + 1) % n;
        if i != j {
            edges.insert((i.min(j), i.max(j)));
        }
    }
    Ok(GraphSpec::from_edge_set(n, edges, GraphLabel::Cycle))
}

/// Complete graph on `n ≥ 1` vertices.
pub fn complete(n: usize) -> Result<GraphSpec> {
    positive(n, "complete size")?;
    let mut edges = BTreeSet::new();
    for i in 0..n {
        for j in i + 1..n {
            edges.insert((i, j));
        }
    }
    Ok(GraphSpec::from_edge_set(n, edges, GraphLabel::Complete))
}

/// Row-major mixed-radix index of torus coordinates.
pub fn torus_index(coords: &[usize], n_side: usize) -> usize {
    coords.iter().fold(0, |acc, &c| acc * n_side + (c % n_side))
}

/// Coordinates of a row-major torus index.
pub fn torus_coords(mut idx: usize, n_side: usize, dim: usize) -> Vec<usize> {
    let mut coords = vec![0; dim];
    for j in (0..dim).rev() {
        coords[j] = idx % n_side;
        idx /= n_side;
    }
    coords
}

/// Discrete torus `(ℤ/Nℤ)^d` with nearest-neighbor adjacency `x ~ x ± e_j`.
/// Requires `N ≥ 2`, `d ≥ 1`.
pub fn torus(n_side: usize, dim: usize) -> Result<GraphSpec> {
    if n_side < 2 {
        return Err(Error::InvalidSpec("torus requires N >= 2".into()));
    }
    if dim == 0 {
        return Err(Error::InvalidSpec("torus requires d >= 1".into()));
    }
    let n = n_side
        .checked_pow(dim as u32)
        .filter(|&n| n <= 1 << 26)
        .ok_or_else(|| Error::InvalidSpec(format!("torus({n_side},{dim}) too large")))?;
    let mut edges = BTreeSet::new();
    for v in 0..n {
        let coords = torus_coords(v, n_side, dim);
        for j in 0..dim {
            let mut up = coords.clone();
            up[j] = (coords[j] + 1) % n_side;
            let w = torus_index(&up, n_side);
            if v != w {
                edges.insert((v.min(w), v.max(w)));
            }
        }
    }
    Ok(GraphSpec::from_edge_set(
        n,
        edges,
        GraphLabel::Torus { n_side, dim },
    ))
}

/// Graph from an explicit edge list.
pub fn custom(n: usize, edges: &[(usize, usize)]) -> Result<GraphSpec> {
    positive(n, "vertex count")?;
    validate_edges(n, edges)?;
    let set = edges
        .iter()
        .map(|&(a, b)| (a.min(b), a.max(b)))
        .collect::<BTreeSet<_>>();
    Ok(GraphSpec::from_edge_set(n, set, GraphLabel::Custom))
}

/// Erdős–Rényi graph G(n, p) from a seeded generator; used by the randomized
/// agreement suites so instances are reproducible.
pub fn random_graph(n: usize, edge_prob: f64, seed: u64) -> Result<GraphSpec> {
    positive(n, "vertex count")?;
    if !(0.0..=1.0).contains(&edge_prob) {
        return Err(Error::InvalidSpec("edge probability outside [0,1]".into()));
    }
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let mut edges = BTreeSet::new();
    for i in 0..n {
        for j in i + 1..n {
            if rng.gen::<f64>() < edge_prob {
                edges.insert((i, j));
            }
        }
    }
    Ok(GraphSpec::from_edge_set(n, edges, GraphLabel::Custom))
}

/// Parse a builder descriptor: `path:N`, `cycle:N`, `complete:N`,
/// `torus:N,d`, or `@file.json` for the graph JSON format.
pub fn build_graph(descriptor: &str) -> Result<GraphSpec> {
    let d = descriptor.trim();
    if let Some(path_name) = d.strip_prefix('@') {
        let text = std::fs::read_to_string(path_name)?;
        return GraphSpec::from_json(&text);
    }
    let (kind, args) = d
        .split_once(':')
        .ok_or_else(|| Error::InvalidSpec(format!("malformed graph descriptor {d:?}")))?;
    let parse_usize = |s: &str| -> Result<usize> {
        s.trim()
            .parse()
            .map_err(|_| Error::InvalidSpec(format!("bad size {s:?} in {d:?}")))
    };
    match kind.trim() {
        "path" => path(parse_usize(args)?),
        "cycle" => cycle(parse_usize(args)?),
        "complete" => complete(parse_usize(args)?),
        "torus" => {
            let parts: Vec<&str> = args.split(',').collect();
            if parts.len() != 2 {
                return Err(Error::InvalidSpec(format!(
                    "torus descriptor needs N,d in {d:?}"
                )));
            }
            torus(parse_usize(parts[0])?, parse_usize(parts[1])?)
        }
        other => Err(Error::InvalidSpec(format!("unknown graph kind {other:?}"))),
    }
}

/// Dense combinatorial Laplacian, `Δ = A − D`.
#[derive(Clone, Debug, PartialEq)]
pub struct Laplacian {
    pub matrix: DMatrix<f64>,
}

impl Laplacian {
    pub fn n(&self) -> usize {
        self.matrix.nrows()
    }
}

/// Build the dense Laplacian of a graph. Degrees are accumulated in integer
/// arithmetic and converted at the end, so row sums are exactly zero.
pub fn laplacian(g: &GraphSpec) -> Laplacian {
    let n = g.n;
    let mut entries = vec![0i64; n * n];
    for &(a, b) in &g.edges {
        entries[a * n + b] += 1;
        entries[b * n + a] += 1;
        entries[a * n + a] -= 1;
        entries[b * n + b] -= 1;
    }
    let matrix = DMatrix::from_fn(n, n, |i, j| entries[i * n + j] as f64);
    Laplacian { matrix }
}

/// Apply the Laplacian to a complex vector without materializing the matrix;
/// O(|E|) per call, used for eigen-residual checks on large tori.
pub fn laplacian_apply(g: &GraphSpec, v: &[Complex64]) -> Vec<Complex64> {
    assert_eq!(v.len(), g.n, "vector length must match vertex count");
    let mut out = vec![Complex64::new(0.0, 0.0); g.n];
    for &(a, b) in &g.edges {
        let d = v[b] - v[a];
        out[a] += d;
        out[b] -= d;
    }
    out
}

/// Observation set: a subset of `0..n`, stored as a bit set.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct VertexSet {
    n: usize,
    bits: Vec<u64>,
}

impl VertexSet {
    pub fn empty(n: usize) -> Self {
        VertexSet {
            n,
            bits: vec![0; n.div_ceil(64)],
        }
    }

    pub fn full(n: usize) -> Self {
        let mut s = VertexSet::empty(n);
        for v in 0..n {
            s.insert(v);
        }
        s
    }

    pub fn from_indices(n: usize, indices: &[usize]) -> Result<Self> {
        let mut s = VertexSet::empty(n);
        for &i in indices {
            if i >= n {
                return Err(Error::InvalidSet(format!("index {i} out of range 0..{n}")));
            }
            s.insert(i);
        }
        Ok(s)
    }

    pub fn n(&self) -> usize {
        self.n
    }

    pub fn insert(&mut self, v: usize) {
        assert!(v < self.n);
        self.bits[v / 64] |= 1 << (v % 64);
    }

    pub fn contains(&self, v: usize) -> bool {
        v < self.n && self.bits[v / 64] & (1 << (v % 64)) != 0
    }

    pub fn card(&self) -> usize {
        self.bits.iter().map(|w| w.count_ones() as usize).sum()
    }

    pub fn is_empty(&self) -> bool {
        self.bits.iter().all(|&w| w == 0)
    }

    pub fn complement(&self) -> Self {
        let mut out = VertexSet::empty(self.n);
        for v in 0..self.n {
            if !self.contains(v) {
                out.insert(v);
            }
        }
        out
    }

    pub fn is_subset_of(&self, other: &VertexSet) -> bool {
        self.n == other.n && self.iter().all(|v| other.contains(v))
    }

    pub fn iter(&self) -> impl Iterator<Item = usize> + '_ {
        (0..self.n).filter(move |&v| self.contains(v))
    }

    pub fn indices(&self) -> Vec<usize> {
        self.iter().collect()
    }
}

/// Parse an observation-set descriptor against a graph.
///
/// Grammar:
/// ```text
/// DESC    := "complement(" DESC ")" | LIST | RESIDUE
/// LIST    := "{" i "," j "," ... "}"          (explicit indices; may be empty)
/// RESIDUE := ("{" r1 "," ... "}" | r1 "," ...) "mod" p
/// ```
/// A residue rule selects vertices by `index mod p` on 1-d graphs; on a
/// `torus(N,d)` with `d ≥ 2` it applies coordinate-wise (every coordinate
/// must lie in the residue set).
pub fn parse_set(expr: &str, graph: &GraphSpec) -> Result<VertexSet> {
    let e = expr.trim();
    if let Some(inner) = strip_call(e, "complement") {
        return Ok(parse_set(inner, graph)?.complement());
    }
    if let Some((res_part, mod_part)) = split_mod(e) {
        let p: i64 = mod_part
            .trim()
            .parse()
            .map_err(|_| Error::InvalidSet(format!("bad modulus in {e:?}")))?;
        if p <= 0 {
            return Err(Error::InvalidSet("modulus must be positive".into()));
        }
        let residues: BTreeSet<i64> = parse_int_list(res_part)?
            .into_iter()
            .map(|r| r.rem_euclid(p))
            .collect();
        if residues.is_empty() {
            return Err(Error::InvalidSet("residue rule needs residues".into()));
        }
        let member = |idx: usize| -> bool {
            match graph.label {
                GraphLabel::Torus { n_side, dim } if dim >= 2 => torus_coords(idx, n_side, dim)
                    .iter()
                    .all(|&c| residues.contains(&((c as i64).rem_euclid(p)))),
                _ => residues.contains(&((idx as i64).rem_euclid(p))),
            }
        };
        let mut s = VertexSet::empty(graph.n);
        for v in 0..graph.n {
            if member(v) {
                s.insert(v);
            }
        }
        return Ok(s);
    }
    if e.starts_with('{') && e.ends_with('}') {
        let idx: Vec<usize> = parse_int_list(e)?
            .into_iter()
            .map(|i| {
                usize::try_from(i).map_err(|_| Error::InvalidSet(format!("negative index {i}")))
            })
            .collect::<Result<_>>()?;
        return VertexSet::from_indices(graph.n, &idx);
    }
    Err(Error::InvalidSet(format!("malformed set descriptor {e:?}")))
}

fn strip_call<'a>(e: &'a str, name: &str) -> Option<&'a str> {
    e.strip_prefix(name)
        .map(str::trim_start)
        .and_then(|r| r.strip_prefix('('))
        .and_then(|r| r.strip_suffix(')'))
}

/// Split `"... mod p"` on the last standalone `mod` token.
fn split_mod(e: &str) -> Option<(&str, &str)> {
    let pos = e.rfind(" mod ")?;
    Some((&e[..pos], &e[pos + 5..]))
}

fn parse_int_list(s: &str) -> Result<Vec<i64>> {
    let body = s.trim();
    let body = body
        .strip_prefix('{')
        .and_then(|b| b.strip_suffix('}'))
        .unwrap_or(body)
        .trim();
    if body.is_empty() {
        return Ok(vec![]);
    }
    body.split(',')
        .map(|t| {
            t.trim()
                .parse()
                .map_err(|_| Error::InvalidSet(format!("bad integer {t:?}")))
        })
        .collect()
}
