//! Graph and hypergraph descriptions.
//!
//! Vertices are 1-indexed at every public boundary (constructors, JSON,
//! accessors). Storage is 0-indexed and canonical: each edge is a sorted
//! tuple and edge collections are sets, so repeated edges collapse.

use std::collections::BTreeSet;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct GraphSpec {
    n: usize,
    edges: BTreeSet<(usize, usize)>,
}

#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct HypergraphSpec {
    n: usize,
    e2: BTreeSet<(usize, usize)>,
    e3: BTreeSet<(usize, usize, usize)>,
}

fn check_vertices(n: usize, edge: &[usize]) -> Result<Vec<usize>> {
    if edge.iter().any(|&v| v == 0 || v > n) {
        return Err(Error::VertexOutOfRange {
            edge: edge.to_vec(),
            n,
        });
    }
    let mut sorted: Vec<usize> = edge.iter().map(|&v| v - 1).collect();
    sorted.sort_unstable();
    if sorted.windows(2).any(|w| w[0] == w[1]) {
        return Err(Error::DegenerateEdge {
            edge: edge.to_vec(),
        });
    }
    Ok(sorted)
}

fn canonical_pair(n: usize, a: usize, b: usize) -> Result<(usize, usize)> {
    let v = check_vertices(n, &[a, b])?;
    Ok((v[0], v[1]))
}

fn canonical_triple(n: usize, a: usize, b: usize, c: usize) -> Result<(usize, usize, usize)> {
    let v = check_vertices(n, &[a, b, c])?;
    Ok((v[0], v[1], v[2]))
}

impl GraphSpec {
    /// Builds a graph from 1-indexed edges.
    pub fn new(n: usize, edges: impl IntoIterator<Item = (usize, usize)>) -> Result<Self> {
        if n == 0 {
            return Err(Error::EmptyGraph);
        }
        let edges = edges
            .into_iter()
            .map(|(a, b)| canonical_pair(n, a, b))
            .collect::<Result<_>>()?;
        Ok(GraphSpec { n, edges })
    }

    pub fn empty(n: usize) -> Result<Self> {
        Self::new(n, [])
    }

    /// Path 1 - 2 - ... - n.
    pub fn path(n: usize) -> Result<Self> {
        Self::new(n, (1..n).map(|i| (i, i + 1)))
    }

    /// Cycle on n vertices. For n = 2 this is a single edge; n = 1 has no edges.
    pub fn ring(n: usize) -> Result<Self> {
        let mut edges: Vec<_> = (1..n).map(|i| (i, i + 1)).collect();
        if n > 2 {
            edges.push((n, 1));
        }
        Self::new(n, edges)
    }

    pub fn n(&self) -> usize {
        self.n
    }

    /// Edges as sorted 1-indexed pairs.
    pub fn edges(&self) -> Vec<(usize, usize)> {
        self.edges.iter().map(|&(a, b)| (a + 1, b + 1)).collect()
    }

    /// 0-indexed neighbours of the 0-indexed vertex `v`.
    pub(crate) fn neighbors0(&self, v: usize) -> impl Iterator<Item = usize> + '_ {
        self.edges.iter().filter_map(move |&(a, b)| {
            if a == v {
                Some(b)
            } else if b == v {
                Some(a)
            } else {
                None
            }
        })
    }
}

impl HypergraphSpec {
    /// Builds a hypergraph from 1-indexed pairs and triples.
    pub fn new(
        n: usize,
        e2: impl IntoIterator<Item = (usize, usize)>,
        e3: impl IntoIterator<Item = (usize, usize, usize)>,
    ) -> Result<Self> {
        if n == 0 {
            return Err(Error::EmptyGraph);
        }
        let e2 = e2
            .into_iter()
            .map(|(a, b)| canonical_pair(n, a, b))
            .collect::<Result<_>>()?;
        let e3 = e3
            .into_iter()
            .map(|(a, b, c)| canonical_triple(n, a, b, c))
            .collect::<Result<_>>()?;
        Ok(HypergraphSpec { n, e2, e3 })
    }

    pub fn n(&self) -> usize {
        self.n
    }

    pub fn e2(&self) -> Vec<(usize, usize)> {
        self.e2.iter().map(|&(a, b)| (a + 1, b + 1)).collect()
    }

    pub fn e3(&self) -> Vec<(usize, usize, usize)> {
        self.e3
            .iter()
            .map(|&(a, b, c)| (a + 1, b + 1, c + 1))
            .collect()
    }

    pub fn is_graph(&self) -> bool {
        self.e3.is_empty()
    }

    /// The underlying graph when there are no 3-vertex hyperedges.
    pub fn as_graph(&self) -> Option<GraphSpec> {
        self.is_graph().then(|| GraphSpec {
            n: self.n,
            edges: self.e2.clone(),
        })
    }

    pub(crate) fn e2_0(&self) -> &BTreeSet<(usize, usize)> {
        &self.e2
    }

    pub(crate) fn e3_0(&self) -> &BTreeSet<(usize, usize, usize)> {
        &self.e3
    }

    pub fn from_json(text: &str) -> Result<Self> {
        let raw: RawHypergraph =
            serde_json::from_str(text).map_err(|e| Error::Parse(e.to_string()))?;
        raw.try_into()
    }

    pub fn to_json(&self) -> String {
        serde_json::to_string(&RawHypergraph::from(self)).expect("hypergraph serializes")
    }
}

impl From<GraphSpec> for HypergraphSpec {
    fn from(g: GraphSpec) -> Self {
        HypergraphSpec {
            n: g.n,
            e2: g.edges,
            e3: BTreeSet::new(),
        }
    }
}

impl From<&GraphSpec> for HypergraphSpec {
    fn from(g: &GraphSpec) -> Self {
        g.clone().into()
    }
}

/// On-disk form: `{ "n": int, "e2": [[i,j],...], "e3": [[i,j,k],...] }`, 1-indexed.
#[derive(Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
struct RawHypergraph {
    n: usize,
    #[serde(default)]
    e2: Vec<Vec<usize>>,
    #[serde(default)]
    e3: Vec<Vec<usize>>,
}

impl TryFrom<RawHypergraph> for HypergraphSpec {
    type Error = Error;

    fn try_from(raw: RawHypergraph) -> Result<Self> {
        let mut e2 = Vec::with_capacity(raw.e2.len());
        for edge in &raw.e2 {
            match edge.as_slice() {
                &[a, b] => e2.push((a, b)),
                _ => {
                    return Err(Error::UnsupportedEdgeSize {
                        edge: edge.clone(),
                        len: edge.len(),
                    })
                }
            }
        }
        let mut e3 = Vec::with_capacity(raw.e3.len());
        for edge in &raw.e3 {
            match edge.as_slice() {
                &[a, b, c] => e3.push((a, b, c)),
                _ => {
                    return Err(Error::UnsupportedEdgeSize {
                        edge: edge.clone(),
                        len: edge.len(),
                    })
                }
            }
        }
        HypergraphSpec::new(raw.n, e2, e3)
    }
}

impl From<&HypergraphSpec> for RawHypergraph {
    fn from(h: &HypergraphSpec) -> Self {
        RawHypergraph {
            n: h.n,
            e2: h.e2().into_iter().map(|(a, b)| vec![a, b]).collect(),
            e3: h.e3().into_iter().map(|(a, b, c)| vec![a, b, c]).collect(),
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn canonicalizes_and_dedups() {
        let g = GraphSpec::new(3, [(2, 1), (1, 2), (3, 2)]).unwrap();
        assert_eq!(g.edges(), vec![(1, 2), (2, 3)]);
    }

    #[test]
    fn rejects_bad_edges() {
        assert_eq!(
            GraphSpec::new(3, [(1, 4)]),
            Err(Error::VertexOutOfRange { edge: vec![1, 4], n: 3 })
        );
        assert_eq!(
            GraphSpec::new(3, [(2, 2)]),
            Err(Error::DegenerateEdge { edge: vec![2, 2] })
        );
        assert!(matches!(
            HypergraphSpec::new(3, [], [(1, 2, 2)]),
            Err(Error::DegenerateEdge { .. })
        ));
        assert_eq!(GraphSpec::new(0, []), Err(Error::EmptyGraph));
        assert!(matches!(
            GraphSpec::new(2, [(0, 1)]),
            Err(Error::VertexOutOfRange { .. })
        ));
    }

    #[test]
    fn json_round_trip_and_errors() {
        let h = HypergraphSpec::from_json(r#"{"n": 4, "e2": [[1,2]], "e3": [[4,2,3]]}"#).unwrap();
        assert_eq!(h.e2(), vec![(1, 2)]);
        assert_eq!(h.e3(), vec![(2, 3, 4)]);
        assert_eq!(HypergraphSpec::from_json(&h.to_json()).unwrap(), h);

        let g = HypergraphSpec::from_json(r#"{"n": 2, "e2": [[1,2]]}"#).unwrap();
        assert!(g.is_graph());
        assert_eq!(g.as_graph().unwrap().edges(), vec![(1, 2)]);

        let err = HypergraphSpec::from_json(r#"{"n": 3, "e2": [[1,5]]}"#).unwrap_err();
        assert!(err.to_string().contains("[1, 5]"), "{err}");
        let err = HypergraphSpec::from_json(r#"{"n": 5, "e3": [[1,2,3,4]]}"#).unwrap_err();
        assert!(matches!(err, Error::UnsupportedEdgeSize { len: 4, .. }));
        assert!(matches!(
            HypergraphSpec::from_json("{\"n\": 2, \"e2\": ["),
            Err(Error::Parse(_))
        ));
    }

    #[test]
    fn ring_and_path() {
        assert_eq!(GraphSpec::ring(4).unwrap().edges(), vec![(1, 2), (1, 4), (2, 3), (3, 4)]);
        assert_eq!(GraphSpec::ring(2).unwrap().edges(), vec![(1, 2)]);
        assert_eq!(GraphSpec::path(3).unwrap().edges(), vec![(1, 2), (2, 3)]);
    }
}
