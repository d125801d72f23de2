//! Rotation-system embeddings: face tracing, Euler characteristic, dual
//! graphs, planar embeddings of derived layers, branched-cover verification,
//! dual towers, and the dart-assignment isomorphism between the Jacobians of
//! a planar graph and its dual.

use crate::graph::{Dart, DartIdx, Graph, GraphMorphism};
use crate::intlinalg::{solve_integer, IntMatrix};
use crate::jacobian::Divisor;
use crate::tower::{build_layer, LayerGraph, TowerSpec};
use num_bigint::BigInt;
use num_traits::Zero;
use std::collections::{BTreeMap, BTreeSet};
use thiserror::Error;

#[derive(Debug, Error, PartialEq, Eq)]
pub enum PlanarError {
    #[error("rotation system inconsistent: {0}")]
    BadRotation(String),
    #[error("graph is not connected")]
    NotConnected,
    #[error("embedding is not planar (Euler characteristic {chi})")]
    NotPlanar { chi: i64 },
    #[error("expected exactly one voltage-carrying edge, found {0}")]
    VoltageEdgeCount(usize),
    #[error("face index {0} out of range")]
    NoSuchFace(usize),
    #[error("the voltage edge does not lie on the designated outer face")]
    VoltageEdgeNotOnOuterFace,
    #[error("no face contains the whole fiber of {0}; cannot merge planarly")]
    MergeFaceNotFound(String),
    #[error("tower error: {0}")]
    Tower(#[from] crate::tower::TowerError),
    #[error("dart assignment must be antisymmetric")]
    BadDartAssignment,
    #[error("divisor must have degree 0")]
    NotDegreeZero,
    #[error("internal: incidence system unsolvable for a degree-0 divisor")]
    FlowUnsolvable,
}

/// Cyclic order of outgoing darts at every vertex.
pub type RotationSystem = Vec<Vec<DartIdx>>;

/// A graph together with a rotation system.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Embedding {
    graph: Graph,
    rotation: RotationSystem,
    /// For each dart: (position in its origin's rotation).
    pos: Vec<usize>,
}

impl Embedding {
    pub fn new(graph: Graph, rotation: RotationSystem) -> Result<Self, PlanarError> {
        if rotation.len() != graph.vertex_count() {
            return Err(PlanarError::BadRotation(format!(
                "{} rotation lists for {} vertices",
                rotation.len(),
                graph.vertex_count()
            )));
        }
        let mut pos = vec![usize::MAX; graph.dart_count()];
        for (v, order) in rotation.iter().enumerate() {
            for (i, &d) in order.iter().enumerate() {
                if d >= graph.dart_count() {
                    return Err(PlanarError::BadRotation(format!("dart {d} out of range")));
                }
                if graph.dart(d).origin != v {
                    return Err(PlanarError::BadRotation(format!(
                        "dart {d} listed at vertex {v} but originates elsewhere"
                    )));
                }
                if pos[d] != usize::MAX {
                    return Err(PlanarError::BadRotation(format!("dart {d} listed twice")));
                }
                pos[d] = i;
            }
        }
        if pos.contains(&usize::MAX) {
            return Err(PlanarError::BadRotation("some dart missing from rotation".into()));
        }
        Ok(Embedding { graph, rotation, pos })
    }

    /// Resolves per-vertex dart-name lists against the graph.
    pub fn from_labels(
        graph: Graph,
        labels: &BTreeMap<String, Vec<String>>,
    ) -> Result<Self, PlanarError> {
        let mut rotation = vec![Vec::new(); graph.vertex_count()];
        for (vname, dart_names) in labels {
            let v = graph
                .vertex_index(vname)
                .ok_or_else(|| PlanarError::BadRotation(format!("unknown vertex {vname}")))?;
            let mut order = Vec::with_capacity(dart_names.len());
            for dn in dart_names {
                let d = graph
                    .dart_index(dn)
                    .ok_or_else(|| PlanarError::BadRotation(format!("unknown dart {dn}")))?;
                order.push(d);
            }
            rotation[v] = order;
        }
        Embedding::new(graph, rotation)
    }

    pub fn graph(&self) -> &Graph {
        &self.graph
    }

    pub fn rotation(&self) -> &RotationSystem {
        &self.rotation
    }

    /// The face-tracing successor: the rotation-successor of partner(e) at
    /// its origin.
    pub fn next_dart(&self, e: DartIdx) -> DartIdx {
        let p = self.graph.partner(e);
        let at = self.graph.dart(p).origin;
        let order = &self.rotation[at];
        order[(self.pos[p] + 1) % order.len()]
    }

    /// Faces as cyclic dart sequences. Deterministic: each face starts at its
    /// smallest dart and faces are ordered by that dart.
    pub fn trace_faces(&self) -> Vec<Vec<DartIdx>> {
        let n = self.graph.dart_count();
        let mut seen = vec![false; n];
        let mut faces = Vec::new();
        for start in 0..n {
            if seen[start] {
                continue;
            }
            let mut face = Vec::new();
            let mut cur = start;
            loop {
                seen[cur] = true;
                face.push(cur);
                cur = self.next_dart(cur);
                if cur == start {
                    break;
                }
            }
            faces.push(face);
        }
        faces
    }

    /// V - E + F with E the undirected edge count.
    pub fn euler_characteristic(&self) -> Result<i64, PlanarError> {
        if !self.graph.is_connected() {
            return Err(PlanarError::NotConnected);
        }
        let f = self.trace_faces().len() as i64;
        Ok(self.graph.vertex_count() as i64 - self.graph.edge_count() as i64 + f)
    }

    pub fn is_planar_embedding(&self) -> bool {
        self.euler_characteristic() == Ok(2)
    }
}

/// A dual graph with its embedding. Dual darts share indices with primal
/// darts: dual dart e runs from the face containing e to the face containing
/// partner(e), and the partner relation is inherited.
#[derive(Debug, Clone)]
pub struct DualData {
    pub embedding: Embedding,
    /// For each primal dart: the face (= dual vertex) containing it.
    pub face_of_dart: Vec<usize>,
    pub faces: Vec<Vec<DartIdx>>,
}

impl DualData {
    pub fn graph(&self) -> &Graph {
        self.embedding.graph()
    }
}

/// Dual of a planar embedding: one vertex per face, one dual edge per primal
/// undirected edge; a primal edge whose two sides see the same face yields a
/// dual self-loop.
pub fn dual(e: &Embedding) -> Result<DualData, PlanarError> {
    match e.euler_characteristic()? {
        2 => {}
        chi => return Err(PlanarError::NotPlanar { chi }),
    }
    let faces = e.trace_faces();
    let mut face_of_dart = vec![usize::MAX; e.graph().dart_count()];
    for (f, face) in faces.iter().enumerate() {
        for &d in face {
            face_of_dart[d] = f;
        }
    }
    let names = (0..faces.len()).map(|f| format!("f{f}")).collect();
    let darts: Vec<Dart> = (0..e.graph().dart_count())
        .map(|d| Dart {
            name: e.graph().dart(d).name.clone(),
            origin: face_of_dart[d],
            terminus: face_of_dart[e.graph().partner(d)],
            partner: e.graph().partner(d),
        })
        .collect();
    let dual_graph = Graph::from_parts(names, darts);
    debug_assert_eq!(dual_graph.validate(), Ok(()));
    // Rotation at a face: its boundary darts in trace order.
    let rotation: RotationSystem = faces.clone();
    let embedding = Embedding::new(dual_graph, rotation)?;
    Ok(DualData { embedding, face_of_dart, faces })
}

/// Antisymmetric integer labeling of darts.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct DartAssignment {
    values: Vec<BigInt>,
}

impl DartAssignment {
    pub fn new(graph: &Graph, values: Vec<BigInt>) -> Result<Self, PlanarError> {
        if values.len() != graph.dart_count() {
            return Err(PlanarError::BadDartAssignment);
        }
        for d in 0..graph.dart_count() {
            if &values[d] + &values[graph.partner(d)] != BigInt::zero() {
                return Err(PlanarError::BadDartAssignment);
            }
        }
        Ok(DartAssignment { values })
    }

    /// Build from one value per canonical dart; partners get the negation.
    pub fn from_edge_values(graph: &Graph, by_edge: &[BigInt]) -> Self {
        let mut values = vec![BigInt::zero(); graph.dart_count()];
        for (k, d) in graph.canonical_darts().enumerate() {
            values[d] = by_edge[k].clone();
            values[graph.partner(d)] = -&by_edge[k];
        }
        DartAssignment { values }
    }

    pub fn value(&self, d: DartIdx) -> &BigInt {
        &self.values[d]
    }

    /// Pointwise action: (g·φ)(e) = φ(g⁻¹e).
    pub fn permuted(&self, inverse_dart_map: &[DartIdx]) -> DartAssignment {
        DartAssignment {
            values: (0..self.values.len())
                .map(|d| self.values[inverse_dart_map[d]].clone())
                .collect(),
        }
    }
}

/// ∂φ = Σ_v Σ_{e out of v} φ(e)·v.
pub fn boundary(graph: &Graph, phi: &DartAssignment) -> Divisor {
    let mut div = Divisor::zero();
    for v in 0..graph.vertex_count() {
        for &e in graph.out_darts(v) {
            div.add_to(v, phi.value(e));
        }
    }
    div
}

/// ∂*φ = Σ_f Σ_{e on the boundary of f} φ(e)·f, a divisor on the dual.
pub fn coboundary(e: &Embedding, phi: &DartAssignment) -> Divisor {
    let mut div = Divisor::zero();
    for (f, face) in e.trace_faces().iter().enumerate() {
        for &d in face {
            div.add_to(f, phi.value(d));
        }
    }
    div
}

/// Incidence matrix with one column per canonical dart: +1 at the origin,
/// −1 at the terminus (loops contribute 0).
fn incidence_matrix(graph: &Graph) -> IntMatrix {
    let cols: Vec<DartIdx> = graph.canonical_darts().collect();
    let mut m = IntMatrix::zero(graph.vertex_count(), cols.len());
    for (j, &d) in cols.iter().enumerate() {
        let dart = graph.dart(d);
        if dart.origin != dart.terminus {
            m[(dart.origin, j)] = BigInt::from(1);
            m[(dart.terminus, j)] = BigInt::from(-1);
        }
    }
    m
}

/// Solves ∂φ = u for a dart assignment φ; exists for every degree-0 divisor
/// on a connected graph.
pub fn solve_boundary(graph: &Graph, u: &Divisor) -> Result<DartAssignment, PlanarError> {
    if !u.degree().is_zero() {
        return Err(PlanarError::NotDegreeZero);
    }
    let m = incidence_matrix(graph);
    let rhs = u.to_vec(graph.vertex_count());
    let x = solve_integer(&m, &rhs)
        .map_err(|_| PlanarError::FlowUnsolvable)?
        .ok_or(PlanarError::FlowUnsolvable)?;
    Ok(DartAssignment::from_edge_values(graph, &x))
}

/// θ: Jac(X) → Jac(X^∨): solve ∂φ = u and return ∂*φ.
pub fn theta(e: &Embedding, u: &Divisor) -> Result<Divisor, PlanarError> {
    let phi = solve_boundary(e.graph(), u)?;
    Ok(coboundary(e, &phi))
}

/// Jacobian duality: invariant factors and spanning-tree counts agree between
/// a planar embedded graph and its dual.
pub fn jac_duality_check(e: &Embedding) -> Result<bool, PlanarError> {
    let d = dual(e)?;
    let j1 = crate::jacobian::jacobian_invariants(e.graph())
        .map_err(|_| PlanarError::NotConnected)?;
    let j2 = crate::jacobian::jacobian_invariants(d.graph())
        .map_err(|_| PlanarError::NotConnected)?;
    let k1 = crate::jacobian::kappa(e.graph()).map_err(|_| PlanarError::NotConnected)?;
    let k2 = crate::jacobian::kappa(d.graph()).map_err(|_| PlanarError::NotConnected)?;
    Ok(j1 == j2 && k1 == k2)
}

/// The undirected base edges carrying a nonzero voltage.
fn voltage_edges(spec: &TowerSpec) -> Vec<DartIdx> {
    spec.base()
        .canonical_darts()
        .filter(|&d| spec.voltage(d).iter().any(|&x| x != 0))
        .collect()
}

/// Planar embedding of the layer X_n for a single-voltage tower.
///
/// The unramified layer carries the lifted rotation (each sheet a copy of the
/// base minus the voltage edge, cross edges in the voltage edge's slots);
/// ramified fibers are then merged one coset at a time through a face whose
/// boundary passes through every member, splicing the member rotations in
/// reverse visit order. The merged vertex order reproduces `build_layer`
/// exactly.
pub fn derived_embedding(
    spec: &TowerSpec,
    base: &Embedding,
    outer_face: usize,
    n: u32,
) -> Result<(LayerGraph, Embedding), PlanarError> {
    let carriers = voltage_edges(spec);
    if carriers.len() != 1 {
        return Err(PlanarError::VoltageEdgeCount(carriers.len()));
    }
    let e0 = carriers[0];
    let base_faces = base.trace_faces();
    let outer = base_faces.get(outer_face).ok_or(PlanarError::NoSuchFace(outer_face))?;
    if !outer.contains(&e0) && !outer.contains(&spec.base().partner(e0)) {
        return Err(PlanarError::VoltageEdgeNotOnOuterFace);
    }

    let unram = build_layer(&spec.unramified(), n)?;
    let ram = build_layer(spec, n)?;
    let pn = spec.group().pn(n);

    // Lifted rotation on the unramified layer.
    let mut elements: Vec<Vec<u64>> = vec![vec![]];
    for _ in 0..spec.group().d() {
        let mut next = Vec::with_capacity(elements.len() * pn as usize);
        for e in &elements {
            for c in 0..pn {
                let mut x = e.clone();
                x.push(c);
                next.push(x);
            }
        }
        elements = next;
    }
    let mut rotation: RotationSystem = Vec::with_capacity(unram.graph.vertex_count());
    for (v, g) in unram.vertex_infos() {
        rotation.push(
            base.rotation()[*v].iter().map(|&d| unram.dart_of(d, g)).collect(),
        );
    }

    let mut graph = unram.graph.clone();
    // current index of each original unramified vertex
    let mut current: Vec<usize> = (0..graph.vertex_count()).collect();

    // Merge the fiber of each ramified base vertex, one coset at a time.
    for (ram_v, (base_v, _)) in ram.vertex_infos().iter().enumerate() {
        if spec.inertia_generators(*base_v).is_empty() {
            continue;
        }
        // Original unramified vertices mapping to this ramified vertex.
        let group: Vec<usize> = unram
            .vertex_infos()
            .iter()
            .enumerate()
            .filter(|(_, (v, g))| v == base_v && ram.vertex_of(*v, g) == ram_v)
            .map(|(idx, _)| current[idx])
            .collect::<BTreeSet<_>>()
            .into_iter()
            .collect();
        if group.len() <= 1 {
            continue;
        }
        let emb = Embedding::new(graph.clone(), rotation.clone())?;
        let faces = emb.trace_faces();
        let group_set: BTreeSet<usize> = group.iter().copied().collect();
        let mut merged_rotation: Option<Vec<DartIdx>> = None;
        for face in &faces {
            // Visits: position i arrives at t(face[i]) and leaves by face[i+1].
            let mut first_visit: BTreeMap<usize, (DartIdx, DartIdx)> = BTreeMap::new();
            let mut visit_order = Vec::new();
            for (i, &d) in face.iter().enumerate() {
                let vtx = graph.dart(d).terminus;
                if group_set.contains(&vtx) && !first_visit.contains_key(&vtx) {
                    let leave = face[(i + 1) % face.len()];
                    first_visit.insert(vtx, (d, leave));
                    visit_order.push(vtx);
                }
            }
            if visit_order.len() != group.len() {
                continue;
            }
            // Splice in reverse visit order, each segment starting at the
            // leave dart of the visit.
            let mut spliced = Vec::new();
            for &vtx in visit_order.iter().rev() {
                let (_, leave) = first_visit[&vtx];
                let order = &rotation[vtx];
                let start = order.iter().position(|&x| x == leave).expect("leave dart at vtx");
                for k in 0..order.len() {
                    spliced.push(order[(start + k) % order.len()]);
                }
            }
            merged_rotation = Some(spliced);
            break;
        }
        let Some(merged) = merged_rotation else {
            return Err(PlanarError::MergeFaceNotFound(
                spec.base().vertex_name(*base_v).to_string(),
            ));
        };

        // Quotient the graph, merging the group into one class.
        let target = *group.iter().min().expect("nonempty group");
        let class_of: Vec<usize> = (0..graph.vertex_count())
            .map(|v| if group_set.contains(&v) { target } else { v })
            .collect();
        let (q, morphism) = graph.quotient_vertices(&class_of);
        let mut new_rotation: RotationSystem = vec![Vec::new(); q.vertex_count()];
        for (v, order) in rotation.iter().enumerate() {
            let image = morphism.vertex_map[v];
            if image == morphism.vertex_map[target] {
                new_rotation[image] = merged.clone();
            } else {
                new_rotation[image] = order.clone();
            }
        }
        for c in current.iter_mut() {
            *c = morphism.vertex_map[*c];
        }
        graph = q;
        rotation = new_rotation;
    }

    // The merge order reproduces the canonical layer exactly.
    assert_eq!(graph.vertex_count(), ram.graph.vertex_count());
    assert_eq!(graph, ram.graph, "merged embedding must sit on the canonical layer");
    let embedding = Embedding::new(ram.graph.clone(), rotation)?;
    Ok((ram, embedding))
}

/// Ramification report of a candidate branched cover.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct CoverReport {
    /// m_v for every vertex of the covering graph.
    pub ramification: Vec<usize>,
    pub sheet_count: usize,
}

/// Verifies that f: Y → X is a branched cover: surjective, constant fiber
/// cardinality over the outgoing darts at every vertex, and constant sheet
/// count Σ m_v over every base vertex.
pub fn check_branched_cover(
    y: &Graph,
    x: &Graph,
    f: &GraphMorphism,
) -> Result<CoverReport, String> {
    f.validate(y, x)?;
    if !f.is_surjective(x) {
        return Err("morphism is not surjective".into());
    }
    let mut ramification = Vec::with_capacity(y.vertex_count());
    for v in 0..y.vertex_count() {
        let w = f.vertex_map[v];
        let mut counts: BTreeMap<DartIdx, usize> = BTreeMap::new();
        for &d in y.out_darts(v) {
            *counts.entry(f.dart_map[d]).or_insert(0) += 1;
        }
        let base_out = x.out_darts(w);
        if base_out.is_empty() {
            ramification.push(1);
            continue;
        }
        let m = counts.get(&base_out[0]).copied().unwrap_or(0);
        for &e in base_out {
            let c = counts.get(&e).copied().unwrap_or(0);
            if c != m {
                return Err(format!(
                    "fiber cardinality over vertex {} differs between darts {} ({}) and {} ({})",
                    y.vertex_name(v),
                    x.dart(base_out[0]).name,
                    m,
                    x.dart(e).name,
                    c
                ));
            }
        }
        if m == 0 {
            return Err(format!("vertex {} has empty dart fiber", y.vertex_name(v)));
        }
        ramification.push(m);
    }
    let mut sheets: Option<usize> = None;
    for w in 0..x.vertex_count() {
        let total: usize = (0..y.vertex_count())
            .filter(|&v| f.vertex_map[v] == w)
            .map(|v| ramification[v])
            .sum();
        match sheets {
            None => sheets = Some(total),
            Some(s) if s == total => {}
            Some(s) => {
                return Err(format!(
                    "sheet count over {} is {} but {} elsewhere",
                    x.vertex_name(w),
                    total,
                    s
                ))
            }
        }
    }
    Ok(CoverReport { ramification, sheet_count: sheets.unwrap_or(0) })
}

/// Outcome of the dual-tower checks at one level.
#[derive(Debug, Clone)]
pub struct DualLayerReport {
    pub n: u32,
    /// m_v per dual vertex and sheet count, when the dual projection is a
    /// branched cover.
    pub cover: Result<CoverReport, String>,
    pub galois_ok: Result<(), String>,
}

#[derive(Debug, Clone)]
pub struct DualTowerReport {
    pub layers: Vec<DualLayerReport>,
    /// Ramified vertices of the primal tower.
    pub primal_ramified: usize,
    /// Dual vertices ramified at the deepest checked level.
    pub dual_ramified: usize,
    /// Dual vertices with a single preimage at the deepest checked level.
    pub dual_totally_ramified: usize,
    /// v̄_r = 2 − v_r, checked when the tower passes.
    pub ramified_count_ok: bool,
    pub pass: bool,
}

impl DualTowerReport {
    pub fn first_failure(&self) -> Option<String> {
        for l in &self.layers {
            if let Err(e) = &l.cover {
                return Some(format!("level {}: {}", l.n, e));
            }
            if let Err(e) = &l.galois_ok {
                return Some(format!("level {}: {}", l.n, e));
            }
        }
        None
    }
}

/// Builds the dual of each layer embedding and checks: (a) the induced face
/// map makes X_n^∨ → X^∨ a branched cover, (b) the Galois action transfers to
/// the duals freely, without inversion, compatibly with the projections, and
/// (c) the ramified dual vertex count satisfies v̄_r = 2 − v_r.
///
/// Layer embeddings default to `derived_embedding`; explicit rotations (for
/// drawings that differ from the derived one) may be supplied per level as
/// vertex-label → dart-label lists.
pub fn dual_tower_check(
    spec: &TowerSpec,
    base: &Embedding,
    outer_face: usize,
    n_max: u32,
    explicit: &BTreeMap<u32, BTreeMap<String, Vec<String>>>,
) -> Result<DualTowerReport, PlanarError> {
    let base_dual = dual(base)?;
    let mut layers = Vec::new();
    let mut deepest: Option<(LayerGraph, DualData)> = None;
    let mut prev: Option<(LayerGraph, DualData)> = None;
    let mut all_ok = true;

    for n in 0..=n_max {
        let (layer, emb) = match explicit.get(&n) {
            Some(rot) => {
                let layer = build_layer(spec, n)?;
                let emb = Embedding::from_labels(layer.graph.clone(), rot)?;
                (layer, emb)
            }
            None => derived_embedding(spec, base, outer_face, n)?,
        };
        match emb.euler_characteristic() {
            Ok(2) => {}
            Ok(chi) => return Err(PlanarError::NotPlanar { chi }),
            Err(e) => return Err(e),
        }
        let dual_n = dual(&emb)?;

        let cover = dual_cover_morphism(&layer, &dual_n, &base_dual)
            .and_then(|f| check_branched_cover(dual_n.graph(), base_dual.graph(), &f));
        let galois_ok = check_dual_galois(&layer, &dual_n, prev.as_ref());
        if cover.is_err() || galois_ok.is_err() {
            all_ok = false;
        }
        layers.push(DualLayerReport { n, cover: cover.clone(), galois_ok });
        prev = Some((layer, dual_n));
        if n == n_max {
            deepest = prev.clone();
        }
    }

    // Ramification bookkeeping at the deepest level.
    let primal_ramified =
        (0..spec.base().vertex_count()).filter(|&v| spec.is_ramified(v)).count();
    let (mut dual_ramified, mut dual_totally) = (0, 0);
    if let (Some((layer, dual_n)), Some(rep)) = (&deepest, layers.last()) {
        if let Ok(cov) = &rep.cover {
            let f = dual_cover_morphism(layer, dual_n, &base_dual).expect("cover checked");
            for w in 0..base_dual.graph().vertex_count() {
                let fiber: Vec<usize> =
                    (0..dual_n.graph().vertex_count()).filter(|&v| f.vertex_map[v] == w).collect();
                if fiber.iter().any(|&v| cov.ramification[v] > 1) {
                    dual_ramified += 1;
                }
                if fiber.len() == 1 && n_max > 0 {
                    dual_totally += 1;
                }
            }
        }
    }
    let ramified_count_ok = !all_ok || dual_ramified + primal_ramified == 2 || n_max == 0;
    Ok(DualTowerReport {
        layers,
        primal_ramified,
        dual_ramified,
        dual_totally_ramified: dual_totally,
        ramified_count_ok,
        pass: all_ok && ramified_count_ok,
    })
}

/// The candidate projection X_n^∨ → X^∨: a dual dart keeps its primal dart's
/// base dart; a dual vertex (face) maps to the base face its darts project
/// into, which must be single-valued.
fn dual_cover_morphism(
    layer: &LayerGraph,
    dual_n: &DualData,
    base_dual: &DualData,
) -> Result<GraphMorphism, String> {
    let dart_map: Vec<DartIdx> =
        (0..dual_n.graph().dart_count()).map(|d| layer.dart_label(d).0).collect();
    let mut vertex_map = Vec::with_capacity(dual_n.faces.len());
    for (fi, face) in dual_n.faces.iter().enumerate() {
        let images: BTreeSet<usize> =
            face.iter().map(|&d| base_dual.face_of_dart[layer.dart_label(d).0]).collect();
        if images.len() != 1 {
            return Err(format!(
                "face f{fi} projects into {} distinct base faces; the dual face map is ill-defined",
                images.len()
            ));
        }
        vertex_map.push(*images.iter().next().unwrap());
    }
    let f = GraphMorphism { vertex_map, dart_map };
    f.validate(dual_n.graph(), base_dual.graph())?;
    Ok(f)
}

/// Galois transfer to duals: each generator must permute the dual faces, act
/// freely without inversion on dual darts, and commute with the projection to
/// the previous layer.
fn check_dual_galois(
    layer: &LayerGraph,
    dual_n: &DualData,
    prev: Option<&(LayerGraph, DualData)>,
) -> Result<(), String> {
    let d = layer.group().d();
    let face_sets: BTreeSet<BTreeSet<DartIdx>> = dual_n
        .faces
        .iter()
        .map(|f| f.iter().copied().collect::<BTreeSet<_>>())
        .collect();
    for i in 0..d {
        let mut g = vec![0i64; d];
        g[i] = 1;
        let act = crate::tower::galois_act(layer, &g).map_err(|e| e.to_string())?;
        // Faces must map to faces.
        for face in &dual_n.faces {
            let image: BTreeSet<DartIdx> = face.iter().map(|&e| act.dart_map[e]).collect();
            if !face_sets.contains(&image) {
                return Err(format!(
                    "generator {i}: the image of a face is not a face; \
                     the embedding is not Galois-invariant"
                ));
            }
        }
        if layer.level > 0 {
            for e in 0..dual_n.graph().dart_count() {
                if act.dart_map[e] == e {
                    return Err(format!("generator {i} fixes dual dart {e}"));
                }
                if act.dart_map[e] == dual_n.graph().partner(e) {
                    return Err(format!("generator {i} inverts dual dart {e}"));
                }
            }
        }
        // Compatibility with the projection to the previous layer:
        // π(g·e) = ψ(g)·π(e) on (dual = primal) darts.
        if let Some((prev_layer, _)) = prev {
            let proj = crate::tower::projection(layer, prev_layer);
            let g_lo =
                crate::tower::galois_act(prev_layer, &g).map_err(|e| e.to_string())?;
            for e in 0..layer.graph.dart_count() {
                if proj.dart_map[act.dart_map[e]] != g_lo.dart_map[proj.dart_map[e]] {
                    return Err(format!(
                        "generator {i}: projection does not intertwine the action at dart {e}"
                    ));
                }
            }
        }
    }
    Ok(())
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::graph::{cycle_graph, GraphBuilder};

    /// Any rotation for a graph; used where the choice cannot matter.
    fn any_rotation(g: &Graph) -> RotationSystem {
        (0..g.vertex_count()).map(|v| g.out_darts(v).to_vec()).collect()
    }

    #[test]
    fn loop_has_two_faces() {
        let mut b = GraphBuilder::new();
        b.vertex("v");
        b.edge("l", "v", "v");
        let g = b.build();
        let e = Embedding::new(g.clone(), any_rotation(&g)).unwrap();
        let faces = e.trace_faces();
        assert_eq!(faces.len(), 2);
        assert_eq!(e.euler_characteristic().unwrap(), 2);
        // Each dart on exactly one face.
        let total: usize = faces.iter().map(|f| f.len()).sum();
        assert_eq!(total, g.dart_count());
    }

    #[test]
    fn triangle_has_two_faces() {
        let g = crate::graph::triangle();
        let e = Embedding::new(g.clone(), any_rotation(&g)).unwrap();
        assert_eq!(e.trace_faces().len(), 2);
        assert!(e.is_planar_embedding());
    }

    fn tetrahedron_embedding() -> Embedding {
        // Planar rotation of K4: outer triangle abc with d inside.
        let g = crate::graph::complete_graph(&["a", "b", "c", "d"]);
        let rot = |names: &[&str], v: &str, g: &Graph| -> Vec<DartIdx> {
            names
                .iter()
                .map(|w| {
                    g.out_darts(g.vertex_index(v).unwrap())
                        .iter()
                        .copied()
                        .find(|&d| g.dart(d).terminus == g.vertex_index(w).unwrap())
                        .unwrap()
                })
                .collect()
        };
        let rotation = vec![
            rot(&["b", "d", "c"], "a", &g),
            rot(&["c", "d", "a"], "b", &g),
            rot(&["a", "d", "b"], "c", &g),
            rot(&["a", "b", "c"], "d", &g),
        ];
        Embedding::new(g, rotation).unwrap()
    }

    #[test]
    fn tetrahedron_is_planar() {
        let e = tetrahedron_embedding();
        assert_eq!(e.euler_characteristic().unwrap(), 2);
        assert_eq!(e.trace_faces().len(), 4);
    }

    #[test]
    fn k5_is_never_planar_spot_check() {
        let g = crate::graph::complete_graph(&["a", "b", "c", "d", "e"]);
        // Three rotations: identity order, reversed, and a shuffle.
        let r1 = any_rotation(&g);
        let r2: RotationSystem = r1.iter().map(|r| r.iter().rev().copied().collect()).collect();
        let r3: RotationSystem = r1
            .iter()
            .map(|r| {
                let mut x = r.clone();
                x.rotate_left(2);
                x.swap(0, 1);
                x
            })
            .collect();
        for rot in [r1, r2, r3] {
            let e = Embedding::new(g.clone(), rot).unwrap();
            assert!(e.euler_characteristic().unwrap() <= 0);
        }
    }

    #[test]
    fn dual_of_c3() {
        let g = cycle_graph(3);
        let e = Embedding::new(g.clone(), any_rotation(&g)).unwrap();
        let d = dual(&e).unwrap();
        assert_eq!(d.graph().vertex_count(), 2);
        assert_eq!(d.graph().edge_count(), 3);
        assert_eq!(d.graph().edges_between(0, 1), 3);
    }

    #[test]
    fn dual_of_loop() {
        let mut b = GraphBuilder::new();
        b.vertex("v");
        b.edge("l", "v", "v");
        let g = b.build();
        let e = Embedding::new(g.clone(), any_rotation(&g)).unwrap();
        let d = dual(&e).unwrap();
        assert_eq!(d.graph().vertex_count(), 2);
        assert_eq!(d.graph().edge_count(), 1);
    }

    /// Double dual is isomorphic to the primal, matching via the shared edge
    /// indices.
    fn double_dual_isomorphic(e: &Embedding) -> bool {
        let d1 = dual(e).unwrap();
        let d2 = dual(&d1.embedding).unwrap();
        let g1 = e.graph();
        let g2 = d2.graph();
        if g1.vertex_count() != g2.vertex_count() || g1.dart_count() != g2.dart_count() {
            return false;
        }
        // Dual darts share indices, so vertex correspondence is forced:
        // map o(d in g1) -> o(d in g2) and check consistency.
        let mut map = vec![usize::MAX; g1.vertex_count()];
        for d in 0..g1.dart_count() {
            let a = g1.dart(d).origin;
            let b = g2.dart(d).origin;
            if map[a] == usize::MAX {
                map[a] = b;
            } else if map[a] != b {
                return false;
            }
        }
        let mut seen = vec![false; g2.vertex_count()];
        for &b in &map {
            if b == usize::MAX || seen[b] {
                return false;
            }
            seen[b] = true;
        }
        true
    }

    #[test]
    fn double_dual_small_cases() {
        for m in 3..=6 {
            let g = cycle_graph(m);
            let e = Embedding::new(g.clone(), any_rotation(&g)).unwrap();
            assert!(double_dual_isomorphic(&e), "C_{m}");
        }
        assert!(double_dual_isomorphic(&tetrahedron_embedding()));
    }

    #[test]
    fn face_dart_conservation() {
        let e = tetrahedron_embedding();
        let total: usize = e.trace_faces().iter().map(|f| f.len()).sum();
        assert_eq!(total, e.graph().dart_count());
    }

    #[test]
    fn boundary_of_constant_flow_on_c3() {
        let g = cycle_graph(3);
        // φ = 1 along the consistent orientation e0, e1, e2.
        let phi = DartAssignment::from_edge_values(
            &g,
            &[BigInt::from(1), BigInt::from(1), BigInt::from(1)],
        );
        let div = boundary(&g, &phi);
        assert_eq!(div, Divisor::zero());
        let e = Embedding::new(g.clone(), any_rotation(&g)).unwrap();
        let cob = coboundary(&e, &phi);
        // One face sees +3, the other −3.
        let vals: Vec<BigInt> = (0..2).map(|f| cob.coefficient(f)).collect();
        assert!(vals.contains(&BigInt::from(3)) && vals.contains(&BigInt::from(-3)));
        assert!(cob.degree().is_zero());
    }

    #[test]
    fn boundary_of_single_edge() {
        let mut b = GraphBuilder::new();
        b.vertex("A");
        b.vertex("B");
        b.edge("e", "A", "B");
        let g = b.build();
        let phi = DartAssignment::from_edge_values(&g, &[BigInt::from(1)]);
        let div = boundary(&g, &phi);
        assert_eq!(div.coefficient(0), BigInt::from(1));
        assert_eq!(div.coefficient(1), BigInt::from(-1));
    }

    #[test]
    fn zero_assignment_gives_zero_divisors() {
        let g = cycle_graph(4);
        let phi = DartAssignment::new(&g, vec![BigInt::zero(); g.dart_count()]).unwrap();
        assert_eq!(boundary(&g, &phi), Divisor::zero());
        let e = Embedding::new(g.clone(), any_rotation(&g)).unwrap();
        assert_eq!(coboundary(&e, &phi), Divisor::zero());
    }

    #[test]
    fn theta_on_c3() {
        let g = cycle_graph(3);
        let e = Embedding::new(g.clone(), any_rotation(&g)).unwrap();
        // u = v0 - v1 generates Jac(C3) = Z/3.
        let u = Divisor::from_pairs(&[(0, 1), (1, -1)]);
        let img = theta(&e, &u).unwrap();
        assert!(img.degree().is_zero());
        let dual_g = dual(&e).unwrap();
        // The image class has order dividing 3: 3·img must be principal.
        let triple = Divisor::from_pairs(&[]);
        let mut t = triple;
        for _ in 0..3 {
            t = t.sub(&img.clone().sub(&Divisor::zero()));
        }
        // t = -3·img; principal iff in the Laplacian column span.
        assert!(crate::jacobian::same_class(dual_g.graph(), &t, &Divisor::zero()));
        // u = 0 maps to a principal divisor.
        let z = theta(&e, &Divisor::zero()).unwrap();
        assert!(crate::jacobian::same_class(dual_g.graph(), &z, &Divisor::zero()));
    }

    #[test]
    fn jac_duality_for_small_graphs() {
        for m in [3usize, 4, 6] {
            let g = cycle_graph(m);
            let e = Embedding::new(g.clone(), any_rotation(&g)).unwrap();
            assert!(jac_duality_check(&e).unwrap(), "C_{m}");
        }
        assert!(jac_duality_check(&tetrahedron_embedding()).unwrap());
        // A tree: trivial Jacobian on both sides.
        let mut b = GraphBuilder::new();
        b.vertex("A");
        b.vertex("B");
        b.vertex("C");
        b.edge("ab", "A", "B");
        b.edge("bc", "B", "C");
        let g = b.build();
        let e = Embedding::new(g.clone(), any_rotation(&g)).unwrap();
        assert!(jac_duality_check(&e).unwrap());
    }

    #[test]
    fn identity_morphism_is_a_cover() {
        let g = cycle_graph(3);
        let f = GraphMorphism::identity(&g);
        let rep = check_branched_cover(&g, &g, &f).unwrap();
        assert_eq!(rep.sheet_count, 1);
        assert!(rep.ramification.iter().all(|&m| m == 1));
    }
}
