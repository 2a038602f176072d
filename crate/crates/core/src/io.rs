//! JSON files: graphs, subgraph pairs and partitions.
//!
//! Graph: `{"n": 3, "mu": [..], "edges": [[u, v, rho], ..]}` with `u < v`.
//! A pair file adds `"f_edges": [[u, v], ..]` (absent means `F = G`) and
//! optionally `"A"` and `"B"` vertex lists. A partition file is
//! `{"clusters": [[..], ..]}` with `W₀` first.
//!
//! Writers put one edge per line, so validation errors point at the
//! offending entry.

use std::collections::HashSet;
use std::fmt::Write as _;
use std::path::Path;

use serde::Deserialize;
use serde_json::value::RawValue;

use crate::error::{Error, Result};
use crate::graph::{SubgraphPair, VertexSubset, WeightedGraph};
use crate::regularity::validate_partition;

#[derive(Deserialize)]
#[serde(deny_unknown_fields)]
struct RawFile<'a> {
    n: usize,
    #[serde(borrow)]
    mu: Vec<&'a RawValue>,
    #[serde(borrow)]
    edges: Vec<&'a RawValue>,
    #[serde(borrow, default)]
    f_edges: Option<Vec<&'a RawValue>>,
    #[serde(rename = "A", default)]
    a: Option<Vec<usize>>,
    #[serde(rename = "B", default)]
    b: Option<Vec<usize>>,
}

#[derive(Deserialize)]
#[serde(deny_unknown_fields)]
struct RawPartition<'a> {
    #[serde(borrow)]
    clusters: Vec<&'a RawValue>,
}

struct Ctx<'t> {
    text: &'t str,
    path: &'t str,
}

impl Ctx<'_> {
    fn line_of(&self, raw: &RawValue) -> usize {
        let offset = (raw.get().as_ptr() as usize).saturating_sub(self.text.as_ptr() as usize);
        self.text[..offset.min(self.text.len())].matches('\n').count() + 1
    }

    fn err(&self, line: usize, message: impl Into<String>) -> Error {
        Error::Format {
            path: self.path.to_string(),
            line,
            message: message.into(),
        }
    }

    fn at(&self, raw: &RawValue, message: impl Into<String>) -> Error {
        self.err(self.line_of(raw), message)
    }

    fn syntax(&self, e: serde_json::Error) -> Error {
        self.err(e.line().max(1), e.to_string())
    }

    fn parse<T: for<'de> Deserialize<'de>>(&self, raw: &RawValue, what: &str) -> Result<T> {
        serde_json::from_str(raw.get()).map_err(|e| self.at(raw, format!("{what}: {e}")))
    }
}

/// A parsed pair file.
#[derive(Clone, Debug)]
pub struct PairFile {
    pub graph: WeightedGraph,
    /// `None` when the file has no `f_edges` key.
    pub f_edges: Option<Vec<(usize, usize)>>,
    pub a: Option<VertexSubset>,
    pub b: Option<VertexSubset>,
}

impl PairFile {
    pub fn subgraph_pair(&self) -> Result<SubgraphPair> {
        match &self.f_edges {
            None => Ok(SubgraphPair::full(self.graph.clone())),
            Some(f) => SubgraphPair::new(self.graph.clone(), f.iter().copied()),
        }
    }
}

pub fn parse_pair(text: &str, path: &str) -> Result<PairFile> {
    let cx = Ctx { text, path };
    let raw: RawFile = serde_json::from_str(text).map_err(|e| cx.syntax(e))?;
    let n = raw.n;
    if n == 0 {
        return Err(cx.err(1, "n must be at least 1"));
    }
    if raw.mu.len() != n {
        let line = raw.mu.first().map_or(1, |r| cx.line_of(r));
        return Err(cx.err(line, format!("mu has {} entries, expected n = {n}", raw.mu.len())));
    }
    let mut mu = Vec::with_capacity(n);
    for (v, r) in raw.mu.iter().enumerate() {
        let m: f64 = cx.parse(r, &format!("mu[{v}]"))?;
        if !(m.is_finite() && m > 0.0) {
            return Err(cx.at(r, format!("mu[{v}] = {m} must be positive and finite")));
        }
        mu.push(m);
    }
    let mut seen = HashSet::new();
    let mut edges = Vec::with_capacity(raw.edges.len());
    for (k, r) in raw.edges.iter().enumerate() {
        let (u, v, rho): (usize, usize, f64) = cx.parse(r, &format!("edge {k} must be [u, v, rho]"))?;
        if u >= v {
            return Err(cx.at(r, format!("edge {k}: need u < v, got [{u}, {v}]")));
        }
        if v >= n {
            return Err(cx.at(r, format!("edge {k}: vertex {v} out of range for n = {n}")));
        }
        if !(rho.is_finite() && rho > 0.0) {
            return Err(cx.at(r, format!("edge {k}: rho = {rho} must be positive and finite")));
        }
        if !seen.insert((u, v)) {
            return Err(cx.at(r, format!("edge {k}: duplicate edge [{u}, {v}]")));
        }
        edges.push((u, v, rho));
    }
    let f_edges = match &raw.f_edges {
        None => None,
        Some(list) => {
            let mut in_f = HashSet::new();
            let mut out = Vec::with_capacity(list.len());
            for (k, r) in list.iter().enumerate() {
                let (u, v): (usize, usize) = cx.parse(r, &format!("f_edges entry {k} must be [u, v]"))?;
                let key = (u.min(v), u.max(v));
                if !seen.contains(&key) {
                    return Err(cx.at(r, format!("f_edges entry {k}: [{u}, {v}] is not an edge of G")));
                }
                if !in_f.insert(key) {
                    return Err(cx.at(r, format!("f_edges entry {k}: duplicate [{u}, {v}]")));
                }
                out.push(key);
            }
            Some(out)
        }
    };
    let subset = |s: Option<Vec<usize>>, name: &str| -> Result<Option<VertexSubset>> {
        s.map(|m| {
            VertexSubset::new(n, m).map_err(|e| {
                let line = text.find(&format!("\"{name}\"")).map_or(1, |o| text[..o].matches('\n').count() + 1);
                cx.err(line, format!("{name}: {e}"))
            })
        })
        .transpose()
    };
    let a = subset(raw.a, "A")?;
    let b = subset(raw.b, "B")?;
    let graph = WeightedGraph::new(mu, edges).map_err(|e| cx.err(1, e.to_string()))?;
    Ok(PairFile { graph, f_edges, a, b })
}

/// Parses a graph; any pair fields are ignored.
pub fn parse_graph(text: &str, path: &str) -> Result<WeightedGraph> {
    Ok(parse_pair(text, path)?.graph)
}

pub fn read_pair(path: impl AsRef<Path>) -> Result<PairFile> {
    let p = path.as_ref();
    let text = std::fs::read_to_string(p)?;
    parse_pair(&text, &p.display().to_string())
}

pub fn read_graph(path: impl AsRef<Path>) -> Result<WeightedGraph> {
    Ok(read_pair(path)?.graph)
}

fn num(x: f64) -> String {
    serde_json::to_string(&x).expect("finite weights serialize")
}

fn list(v: impl IntoIterator<Item = usize>) -> String {
    let items: Vec<String> = v.into_iter().map(|x| x.to_string()).collect();
    format!("[{}]", items.join(", "))
}

fn write_graph_body(out: &mut String, g: &WeightedGraph) {
    let mu: Vec<String> = g.mu().iter().map(|&m| num(m)).collect();
    let _ = writeln!(out, "  \"n\": {},", g.n());
    let _ = writeln!(out, "  \"mu\": [{}],", mu.join(", "));
    out.push_str("  \"edges\": [");
    for (k, e) in g.edges().iter().enumerate() {
        let sep = if k == 0 { "\n" } else { ",\n" };
        let _ = write!(out, "{sep}    [{}, {}, {}]", e.u, e.v, num(e.rho));
    }
    out.push_str(if g.edges().is_empty() { "]" } else { "\n  ]" });
}

/// Lossless text form of a graph.
pub fn graph_to_json(g: &WeightedGraph) -> String {
    let mut out = String::from("{\n");
    write_graph_body(&mut out, g);
    out.push_str("\n}\n");
    out
}

/// Pair file text; `F` is always written explicitly.
pub fn pair_to_json(p: &SubgraphPair, a: Option<&VertexSubset>, b: Option<&VertexSubset>) -> String {
    let mut out = String::from("{\n");
    write_graph_body(&mut out, p.host());
    out.push_str(",\n  \"f_edges\": [");
    for (k, &(u, v)) in p.f_edges().iter().enumerate() {
        let sep = if k == 0 { "\n" } else { ",\n" };
        let _ = write!(out, "{sep}    [{u}, {v}]");
    }
    out.push_str(if p.f_edges().is_empty() { "]" } else { "\n  ]" });
    for (name, s) in [("A", a), ("B", b)] {
        if let Some(s) = s {
            let _ = write!(out, ",\n  \"{name}\": {}", list(s.iter()));
        }
    }
    out.push_str("\n}\n");
    out
}

pub fn write_graph(path: impl AsRef<Path>, g: &WeightedGraph) -> Result<()> {
    Ok(std::fs::write(path, graph_to_json(g))?)
}

/// Parses and validates a partition of `{0..n-1}`.
pub fn parse_partition(text: &str, path: &str, n: usize) -> Result<Vec<VertexSubset>> {
    let cx = Ctx { text, path };
    let raw: RawPartition = serde_json::from_str(text).map_err(|e| cx.syntax(e))?;
    let mut clusters = Vec::with_capacity(raw.clusters.len());
    for (i, r) in raw.clusters.iter().enumerate() {
        let members: Vec<usize> = cx.parse(r, &format!("cluster {i} must be a list of vertices"))?;
        clusters.push(VertexSubset::new(n, members).map_err(|e| cx.at(r, format!("cluster {i}: {e}")))?);
    }
    validate_partition(n, &clusters).map_err(|e| cx.err(1, e.to_string()))?;
    Ok(clusters)
}

pub fn read_partition(path: impl AsRef<Path>, n: usize) -> Result<Vec<VertexSubset>> {
    let p = path.as_ref();
    let text = std::fs::read_to_string(p)?;
    parse_partition(&text, &p.display().to_string(), n)
}

pub fn partition_to_json(clusters: &[VertexSubset]) -> String {
    let rows: Vec<String> = clusters.iter().map(|c| format!("    {}", list(c.iter()))).collect();
    format!("{{\n  \"clusters\": [\n{}\n  ]\n}}\n", rows.join(",\n"))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::models::gnpij::{gen_gnpij, ProbMatrixSpec};

    fn line_of(e: Error) -> usize {
        match e {
            Error::Format { line, .. } => line,
            other => panic!("expected a format error, got {other}"),
        }
    }

    #[test]
    fn graph_roundtrip_is_exact() {
        let g = gen_gnpij(30, &ProbMatrixSpec::uniform_range(0.1, 0.9, 3), 4).unwrap();
        let back = parse_graph(&graph_to_json(&g), "g.json").unwrap();
        assert_eq!(back.mu(), g.mu());
        assert_eq!(back.edges(), g.edges());
    }

    #[test]
    fn pair_roundtrip_keeps_f_and_sets() {
        let g = WeightedGraph::complete(5);
        let p = SubgraphPair::new(g, [(0, 1), (2, 4)]).unwrap();
        let a = VertexSubset::range(0..2);
        let text = pair_to_json(&p, Some(&a), None);
        let back = parse_pair(&text, "p.json").unwrap();
        assert_eq!(back.f_edges.as_deref(), Some(&[(0, 1), (2, 4)][..]));
        assert_eq!(back.a, Some(a));
        assert!(back.b.is_none());
        assert_eq!(back.subgraph_pair().unwrap().f_edges(), p.f_edges());
    }

    #[test]
    fn errors_point_at_the_bad_line() {
        let text = "{\n  \"n\": 3,\n  \"mu\": [1, 1, 1],\n  \"edges\": [\n    [0, 1, 1.0],\n    [1, 2, -2.0]\n  ]\n}\n";
        assert_eq!(line_of(parse_graph(text, "g.json").unwrap_err()), 6);
        let text = text.replace("[1, 2, -2.0]", "[2, 1, 2.0]");
        assert_eq!(line_of(parse_graph(&text, "g.json").unwrap_err()), 6);
        let text = text.replace("[2, 1, 2.0]", "[0, 1, 2.0]");
        assert_eq!(line_of(parse_graph(&text, "g.json").unwrap_err()), 6);
        let text = text.replace("[0, 1, 2.0]", "[1, 3, 2.0]");
        assert_eq!(line_of(parse_graph(&text, "g.json").unwrap_err()), 6);
        let text = "{\n  \"n\": 3,\n  \"mu\": [1, 1, 1],\n  \"edges\": [\n    [0, 1, 1.0\n  ]\n}\n";
        assert!(line_of(parse_graph(text, "g.json").unwrap_err()) >= 6);
        let text = "{\n  \"n\": 2,\n  \"mu\": [1, 0],\n  \"edges\": []\n}";
        assert_eq!(line_of(parse_graph(text, "g.json").unwrap_err()), 3);
    }

    #[test]
    fn f_edges_must_lie_in_g() {
        let text = "{\"n\": 3, \"mu\": [1, 1, 1], \"edges\": [[0, 1, 1]],\n \"f_edges\": [[1, 2]]}";
        assert_eq!(line_of(parse_pair(text, "p.json").unwrap_err()), 2);
    }

    #[test]
    fn partition_roundtrip_and_validation() {
        let clusters = vec![VertexSubset::empty(), VertexSubset::range(0..2), VertexSubset::range(2..5)];
        let text = partition_to_json(&clusters);
        assert_eq!(parse_partition(&text, "p.json", 5).unwrap(), clusters);
        assert!(parse_partition(&text, "p.json", 6).is_err());
        let bad = "{\"clusters\": [[],\n [0, 1],\n [1, 9]]}";
        assert_eq!(line_of(parse_partition(bad, "p.json", 5).unwrap_err()), 3);
    }
}
