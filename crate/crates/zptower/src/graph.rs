//! Finite multigraphs with paired directed darts.
//!
//! Darts are primary: an undirected edge is a pair (e, partner(e)). Loops and
//! multi-edges are fully supported. Vertex and dart order is stable and all
//! downstream matrix orderings reference it.

use std::collections::BTreeMap;
use thiserror::Error;

pub type VertexIdx = usize;
pub type DartIdx = usize;

/// Suffix marking the reverse dart of an undirected edge in serialized form.
pub const REVERSE_SUFFIX: &str = "~";

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Dart {
    pub name: String,
    pub origin: VertexIdx,
    pub terminus: VertexIdx,
    pub partner: DartIdx,
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Graph {
    vertex_names: Vec<String>,
    darts: Vec<Dart>,
    out_darts: Vec<Vec<DartIdx>>,
}

#[derive(Debug, Error, PartialEq, Eq)]
pub enum GraphError {
    #[error("unknown vertex {0}")]
    UnknownVertex(String),
    #[error("graph is not connected")]
    NotConnected,
    #[error("invalid graph: {0}")]
    Invalid(Violation),
}

/// First violated axiom found by `validate`.
#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum Violation {
    #[error("involution fixed point at dart {dart}")]
    InvolutionFixedPoint { dart: DartIdx },
    #[error("involution not an involution at dart {dart}")]
    NotInvolutive { dart: DartIdx },
    #[error("incidence mismatch between dart {dart} and its partner")]
    IncidenceMismatch { dart: DartIdx },
    #[error("dart {dart} references an undeclared vertex")]
    UndeclaredVertex { dart: DartIdx },
    #[error("odd dart count {count}")]
    OddDartCount { count: usize },
}

impl Graph {
    /// Assembles a graph from raw parts without checking the dart axioms;
    /// run `validate` to check them.
    pub fn from_parts(vertex_names: Vec<String>, darts: Vec<Dart>) -> Self {
        let mut out_darts = vec![Vec::new(); vertex_names.len()];
        for (idx, d) in darts.iter().enumerate() {
            if d.origin < vertex_names.len() {
                out_darts[d.origin].push(idx);
            }
        }
        Graph { vertex_names, darts, out_darts }
    }

    pub fn vertex_count(&self) -> usize {
        self.vertex_names.len()
    }

    pub fn dart_count(&self) -> usize {
        self.darts.len()
    }

    /// Number of undirected edges.
    pub fn edge_count(&self) -> usize {
        self.darts.len() / 2
    }

    pub fn vertex_name(&self, v: VertexIdx) -> &str {
        &self.vertex_names[v]
    }

    pub fn vertex_names(&self) -> &[String] {
        &self.vertex_names
    }

    pub fn vertex_index(&self, name: &str) -> Option<VertexIdx> {
        self.vertex_names.iter().position(|n| n == name)
    }

    pub fn dart(&self, d: DartIdx) -> &Dart {
        &self.darts[d]
    }

    pub fn darts(&self) -> &[Dart] {
        &self.darts
    }

    pub fn dart_index(&self, name: &str) -> Option<DartIdx> {
        self.darts.iter().position(|d| d.name == name)
    }

    pub fn partner(&self, d: DartIdx) -> DartIdx {
        self.darts[d].partner
    }

    /// Outgoing darts at v, in dart order.
    pub fn out_darts(&self, v: VertexIdx) -> &[DartIdx] {
        &self.out_darts[v]
    }

    /// Darts with index < partner index; one per undirected edge.
    pub fn canonical_darts(&self) -> impl Iterator<Item = DartIdx> + '_ {
        (0..self.darts.len()).filter(|&d| d < self.darts[d].partner)
    }

    /// Checks every dart/graph axiom; reports the first violation.
    pub fn validate(&self) -> Result<(), Violation> {
        for (idx, d) in self.darts.iter().enumerate() {
            if d.origin >= self.vertex_names.len() || d.terminus >= self.vertex_names.len() {
                return Err(Violation::UndeclaredVertex { dart: idx });
            }
            if d.partner >= self.darts.len() {
                return Err(Violation::NotInvolutive { dart: idx });
            }
            if d.partner == idx {
                return Err(Violation::InvolutionFixedPoint { dart: idx });
            }
            if self.darts[d.partner].partner != idx {
                return Err(Violation::NotInvolutive { dart: idx });
            }
            let p = &self.darts[d.partner];
            if p.origin != d.terminus || p.terminus != d.origin {
                return Err(Violation::IncidenceMismatch { dart: idx });
            }
        }
        if !self.darts.len().is_multiple_of(2) {
            return Err(Violation::OddDartCount { count: self.darts.len() });
        }
        Ok(())
    }

    /// Undirected connectivity; the empty graph is not connected.
    pub fn is_connected(&self) -> bool {
        if self.vertex_names.is_empty() {
            return false;
        }
        let mut seen = vec![false; self.vertex_names.len()];
        let mut stack = vec![0];
        seen[0] = true;
        let mut count = 1;
        while let Some(v) = stack.pop() {
            for &d in &self.out_darts[v] {
                let w = self.darts[d].terminus;
                if !seen[w] {
                    seen[w] = true;
                    count += 1;
                    stack.push(w);
                }
            }
        }
        count == self.vertex_names.len()
    }

    pub fn connected_components(&self) -> usize {
        let n = self.vertex_names.len();
        let mut comp = vec![usize::MAX; n];
        let mut c = 0;
        for start in 0..n {
            if comp[start] != usize::MAX {
                continue;
            }
            let mut stack = vec![start];
            comp[start] = c;
            while let Some(v) = stack.pop() {
                for &d in &self.out_darts[v] {
                    let w = self.darts[d].terminus;
                    if comp[w] == usize::MAX {
                        comp[w] = c;
                        stack.push(w);
                    }
                }
            }
            c += 1;
        }
        c
    }

    /// Count of outgoing darts at v; a loop contributes 2.
    pub fn degree(&self, v: VertexIdx) -> Result<usize, GraphError> {
        if v >= self.vertex_names.len() {
            return Err(GraphError::UnknownVertex(format!("#{v}")));
        }
        Ok(self.out_darts[v].len())
    }

    pub fn loops_at(&self, v: VertexIdx) -> usize {
        self.out_darts[v]
            .iter()
            .filter(|&&d| self.darts[d].terminus == v && d < self.darts[d].partner)
            .count()
    }

    /// Number of undirected edges joining v and w (v != w).
    pub fn edges_between(&self, v: VertexIdx, w: VertexIdx) -> usize {
        self.out_darts[v].iter().filter(|&&d| self.darts[d].terminus == w).count()
    }

    /// Merges vertices according to `class_of` (one entry per vertex). Darts
    /// are kept as-is with endpoints relabeled, so a dart is never merged with
    /// its partner; loops may be created. Classes are ordered by first
    /// occurrence and named by their first member.
    pub fn quotient_vertices(&self, class_of: &[usize]) -> (Graph, GraphMorphism) {
        assert_eq!(class_of.len(), self.vertex_names.len(), "partition must be total");
        let mut class_index: BTreeMap<usize, usize> = BTreeMap::new();
        let mut names = Vec::new();
        let mut vertex_map = Vec::with_capacity(class_of.len());
        for (v, &c) in class_of.iter().enumerate() {
            let next = class_index.len();
            let idx = *class_index.entry(c).or_insert_with(|| {
                names.push(self.vertex_names[v].clone());
                next
            });
            vertex_map.push(idx);
        }
        let darts = self
            .darts
            .iter()
            .map(|d| Dart {
                name: d.name.clone(),
                origin: vertex_map[d.origin],
                terminus: vertex_map[d.terminus],
                partner: d.partner,
            })
            .collect();
        let quotient = Graph::from_parts(names, darts);
        let dart_map = (0..self.darts.len()).collect();
        (quotient, GraphMorphism { vertex_map, dart_map })
    }

    /// Renames every vertex; used when a quotient should carry layer labels.
    pub fn with_vertex_names(mut self, names: Vec<String>) -> Self {
        assert_eq!(names.len(), self.vertex_names.len());
        self.vertex_names = names;
        self
    }
}

/// Map of graphs: commutes with origin, terminus and inversion.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct GraphMorphism {
    pub vertex_map: Vec<VertexIdx>,
    pub dart_map: Vec<DartIdx>,
}

impl GraphMorphism {
    pub fn identity(g: &Graph) -> Self {
        GraphMorphism {
            vertex_map: (0..g.vertex_count()).collect(),
            dart_map: (0..g.dart_count()).collect(),
        }
    }

    /// Checks the morphism axioms from `domain` to `codomain`.
    pub fn validate(&self, domain: &Graph, codomain: &Graph) -> Result<(), String> {
        if self.vertex_map.len() != domain.vertex_count()
            || self.dart_map.len() != domain.dart_count()
        {
            return Err("morphism arity mismatch".into());
        }
        for (e, d) in domain.darts().iter().enumerate() {
            let fe = self.dart_map[e];
            if fe >= codomain.dart_count() {
                return Err(format!("dart {e} maps out of range"));
            }
            let img = codomain.dart(fe);
            if self.vertex_map[d.origin] != img.origin {
                return Err(format!("origin not preserved at dart {e}"));
            }
            if self.vertex_map[d.terminus] != img.terminus {
                return Err(format!("terminus not preserved at dart {e}"));
            }
            if self.dart_map[d.partner] != img.partner {
                return Err(format!("inversion not preserved at dart {e}"));
            }
        }
        Ok(())
    }

    pub fn is_surjective(&self, codomain: &Graph) -> bool {
        let mut v_hit = vec![false; codomain.vertex_count()];
        let mut d_hit = vec![false; codomain.dart_count()];
        for &v in &self.vertex_map {
            v_hit[v] = true;
        }
        for &d in &self.dart_map {
            d_hit[d] = true;
        }
        v_hit.into_iter().all(|b| b) && d_hit.into_iter().all(|b| b)
    }

    /// self after other: (self ∘ other)(x) = self(other(x)).
    pub fn compose(&self, other: &GraphMorphism) -> GraphMorphism {
        GraphMorphism {
            vertex_map: other.vertex_map.iter().map(|&v| self.vertex_map[v]).collect(),
            dart_map: other.dart_map.iter().map(|&d| self.dart_map[d]).collect(),
        }
    }
}

/// Convenience builder for base graphs.
#[derive(Debug, Default)]
pub struct GraphBuilder {
    vertices: Vec<String>,
    darts: Vec<Dart>,
}

impl GraphBuilder {
    pub fn new() -> Self {
        Self::default()
    }

    pub fn vertex(&mut self, name: &str) -> VertexIdx {
        if let Some(i) = self.vertices.iter().position(|n| n == name) {
            return i;
        }
        self.vertices.push(name.to_string());
        self.vertices.len() - 1
    }

    /// Adds the undirected edge `name` as the dart pair (name, name~).
    /// Returns the forward dart index.
    pub fn edge(&mut self, name: &str, from: &str, to: &str) -> DartIdx {
        let o = self.vertex(from);
        let t = self.vertex(to);
        let fwd = self.darts.len();
        self.darts.push(Dart {
            name: name.to_string(),
            origin: o,
            terminus: t,
            partner: fwd + 1,
        });
        self.darts.push(Dart {
            name: format!("{name}{REVERSE_SUFFIX}"),
            origin: t,
            terminus: o,
            partner: fwd,
        });
        fwd
    }

    pub fn build(self) -> Graph {
        let g = Graph::from_parts(self.vertices, self.darts);
        debug_assert_eq!(g.validate(), Ok(()));
        g
    }
}

/// Cycle graph with vertices v0..v{m-1} and edges e0..e{m-1}, ei: vi -> v(i+1).
pub fn cycle_graph(m: usize) -> Graph {
    let mut b = GraphBuilder::new();
    for i in 0..m {
        b.vertex(&format!("v{i}"));
    }
    for i in 0..m {
        b.edge(&format!("e{i}"), &format!("v{i}"), &format!("v{}", (i + 1) % m));
    }
    b.build()
}

/// Complete graph on `names`.
pub fn complete_graph(names: &[&str]) -> Graph {
    let mut b = GraphBuilder::new();
    for n in names {
        b.vertex(n);
    }
    for i in 0..names.len() {
        for j in (i + 1)..names.len() {
            b.edge(&format!("{}{}", names[i], names[j]), names[i], names[j]);
        }
    }
    b.build()
}

pub fn triangle() -> Graph {
    let mut b = GraphBuilder::new();
    b.vertex("A");
    b.vertex("B");
    b.vertex("C");
    b.edge("ab", "A", "B");
    b.edge("bc", "B", "C");
    b.edge("ca", "C", "A");
    b.build()
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn minimal_loop_graph_is_legal() {
        let mut b = GraphBuilder::new();
        b.vertex("v");
        b.edge("l", "v", "v");
        let g = b.build();
        assert_eq!(g.validate(), Ok(()));
        assert_eq!(g.degree(0).unwrap(), 2);
        assert_eq!(g.loops_at(0), 1);
    }

    #[test]
    fn involution_fixed_point_is_reported() {
        let g = Graph::from_parts(
            vec!["v".into()],
            vec![Dart { name: "e".into(), origin: 0, terminus: 0, partner: 0 }],
        );
        assert_eq!(g.validate(), Err(Violation::InvolutionFixedPoint { dart: 0 }));
    }

    #[test]
    fn triangle_is_legal_and_connected() {
        let g = triangle();
        assert_eq!(g.validate(), Ok(()));
        assert!(g.is_connected());
        for v in 0..3 {
            assert_eq!(g.degree(v).unwrap(), 2);
        }
    }

    #[test]
    fn isolated_vertices_not_connected() {
        let g = Graph::from_parts(vec!["a".into(), "b".into()], vec![]);
        assert!(!g.is_connected());
        assert!(!Graph::from_parts(vec![], vec![]).is_connected());
    }

    #[test]
    fn degree_unknown_vertex() {
        assert!(triangle().degree(17).is_err());
    }

    #[test]
    fn handshake() {
        let g = triangle();
        let sum: usize = (0..g.vertex_count()).map(|v| g.degree(v).unwrap()).sum();
        assert_eq!(sum, g.dart_count());
    }

    #[test]
    fn quotient_identity_partition() {
        let g = triangle();
        let (q, f) = g.quotient_vertices(&[0, 1, 2]);
        assert_eq!(q, g);
        assert_eq!(f, GraphMorphism::identity(&g));
    }

    #[test]
    fn quotient_path_to_two_cycle() {
        let mut b = GraphBuilder::new();
        b.vertex("A");
        b.vertex("B");
        b.vertex("C");
        b.edge("ab", "A", "B");
        b.edge("bc", "B", "C");
        let g = b.build();
        // Merge A and C.
        let (q, f) = g.quotient_vertices(&[0, 1, 0]);
        assert_eq!(q.vertex_count(), 2);
        assert_eq!(q.edge_count(), 2);
        assert_eq!(q.validate(), Ok(()));
        assert_eq!(q.edges_between(0, 1), 2);
        f.validate(&g, &q).unwrap();
        // Dart count and partner pairing survive the quotient exactly.
        assert_eq!(q.dart_count(), g.dart_count());
        for d in 0..g.dart_count() {
            assert_eq!(q.partner(d), g.partner(d));
        }
    }

    /// Reachability oracle independent of the BFS in `is_connected`:
    /// boolean adjacency-matrix closure.
    fn connected_oracle(g: &Graph) -> bool {
        let n = g.vertex_count();
        if n == 0 {
            return false;
        }
        let mut reach = vec![vec![false; n]; n];
        for (v, row) in reach.iter_mut().enumerate() {
            row[v] = true;
        }
        for d in g.darts() {
            reach[d.origin][d.terminus] = true;
        }
        for k in 0..n {
            for i in 0..n {
                for j in 0..n {
                    reach[i][j] |= reach[i][k] && reach[k][j];
                }
            }
        }
        (0..n).all(|j| reach[0][j])
    }

    #[test]
    fn connectivity_matches_oracle_exhaustively() {
        // All simple graphs on up to 4 vertices.
        for n in 1usize..=4 {
            let pairs: Vec<(usize, usize)> =
                (0..n).flat_map(|i| ((i + 1)..n).map(move |j| (i, j))).collect();
            for mask in 0..(1u32 << pairs.len()) {
                let mut b = GraphBuilder::new();
                for v in 0..n {
                    b.vertex(&format!("v{v}"));
                }
                for (k, &(i, j)) in pairs.iter().enumerate() {
                    if mask & (1 << k) != 0 {
                        b.edge(&format!("e{k}"), &format!("v{i}"), &format!("v{j}"));
                    }
                }
                let g = b.build();
                assert_eq!(g.is_connected(), connected_oracle(&g), "n={n} mask={mask}");
            }
        }
    }

    #[test]
    fn connectivity_matches_oracle_random_8() {
        use rand::{rngs::StdRng, Rng, SeedableRng};
        let mut rng = StdRng::seed_from_u64(0xC0FFEE);
        for _ in 0..200 {
            let n = rng.gen_range(1..=8);
            let mut b = GraphBuilder::new();
            for v in 0..n {
                b.vertex(&format!("v{v}"));
            }
            let mut k = 0;
            for i in 0..n {
                for j in i..n {
                    if rng.gen_bool(0.3) {
                        b.edge(&format!("e{k}"), &format!("v{i}"), &format!("v{j}"));
                        k += 1;
                    }
                }
            }
            let g = b.build();
            assert_eq!(g.is_connected(), connected_oracle(&g));
        }
    }
}
