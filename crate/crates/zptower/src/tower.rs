//! Voltage assignments with values in Z_p^d, inertia data, and the derived
//! graph construction at every finite level, together with covering
//! projections and the Galois action.
//!
//! Group elements are integer exponent vectors a ∈ Z^d standing for
//! γ_1^{a_1}···γ_d^{a_d}; level n works in (Z/p^n)^d. Coset representatives
//! are canonical: the lexicographically smallest lift in [0, p^n)^d.

use crate::graph::{Dart, DartIdx, Graph, GraphMorphism, VertexIdx};
use crate::intlinalg::{self, hermite_normal_form, smith_normal_form, IntMatrix};
use crate::iwasawa::LaurentElement;
use num_bigint::BigInt;
use num_traits::Zero;
use std::collections::{BTreeMap, BTreeSet};
use thiserror::Error;

#[derive(Debug, Error, PartialEq, Eq)]
pub enum TowerError {
    #[error("{0} is not prime")]
    NotPrime(u64),
    #[error("rank d must be >= 1")]
    ZeroRank,
    #[error("exponent vector has length {got}, expected {want}")]
    ExponentLength { got: usize, want: usize },
    #[error("voltage missing for edge {0}")]
    VoltageMissing(String),
    #[error("invalid base graph: {0}")]
    BadBase(crate::graph::Violation),
    #[error("base graph is not connected")]
    BaseDisconnected,
    #[error("level {n} is below the stabilization level {need}")]
    BelowStabilization { n: u32, need: u32 },
    #[error("layer at level {n} would have {size} darts; refusing to build")]
    LayerTooLarge { n: u32, size: u128 },
    #[error("unknown vertex {0}")]
    UnknownVertex(String),
}

/// The acting group Z_p^d.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct GroupSpec {
    p: u64,
    d: usize,
}

impl GroupSpec {
    pub fn new(p: u64, d: usize) -> Result<Self, TowerError> {
        if !intlinalg::is_prime_u64(p) {
            return Err(TowerError::NotPrime(p));
        }
        if d == 0 {
            return Err(TowerError::ZeroRank);
        }
        Ok(GroupSpec { p, d })
    }

    pub fn p(&self) -> u64 {
        self.p
    }

    pub fn d(&self) -> usize {
        self.d
    }

    /// p^n
    pub fn pn(&self, n: u32) -> u64 {
        self.p.checked_pow(n).expect("p^n overflows u64")
    }

    /// |G_n| = p^{nd}
    pub fn layer_order(&self, n: u32) -> u128 {
        (self.pn(n) as u128).checked_pow(self.d as u32).expect("p^{nd} overflows")
    }
}

/// Componentwise reduction mod p^n into [0, p^n)^d; n = 0 gives the trivial
/// group.
pub fn reduce(group: &GroupSpec, g: &[i64], n: u32) -> Result<Vec<u64>, TowerError> {
    if g.len() != group.d {
        return Err(TowerError::ExponentLength { got: g.len(), want: group.d });
    }
    let m = group.pn(n) as i128;
    Ok(g.iter().map(|&a| (a as i128).rem_euclid(m) as u64).collect())
}

fn add_mod(g: &[u64], a: &[i64], pn: u64) -> Vec<u64> {
    g.iter()
        .zip(a)
        .map(|(&x, &y)| ((x as i128 + y as i128).rem_euclid(pn as i128)) as u64)
        .collect()
}

fn ord_p(p: u64, mut x: u64) -> Option<u32> {
    if x == 0 {
        return None; // infinite
    }
    let mut k = 0;
    while x.is_multiple_of(p) {
        x /= p;
        k += 1;
    }
    Some(k)
}

/// Order s_n(σ) of the image of σ in (Z/p^n)^d: p^{n-b} with
/// b = min_i ord_p(a_i) clamped to [0, n].
pub fn element_order_in_layer(group: &GroupSpec, sigma: &[i64], n: u32) -> Result<u64, TowerError> {
    let r = reduce(group, sigma, n)?;
    let b = r
        .iter()
        .map(|&a| ord_p(group.p, a).unwrap_or(n))
        .min()
        .unwrap_or(n)
        .min(n);
    Ok(group.pn(n - b))
}

/// The image of a finitely generated subgroup of Z^d in (Z/p^n)^d, with a
/// canonical-representative reduction for its cosets.
///
/// Internally this is the column Hermite form of [gens | p^n·I_d]; the coset
/// representatives are exactly the box ∏_i [0, h_ii), enumerated
/// lexicographically, and the reduction of any vector is the lexicographically
/// smallest member of its coset in [0, p^n)^d.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct SubgroupLayer {
    d: usize,
    pn: u64,
    /// Lower-triangular HNF basis, stored column-major.
    basis: Vec<Vec<i64>>,
    diag: Vec<u64>,
}

impl SubgroupLayer {
    pub fn new(group: &GroupSpec, gens: &[Vec<i64>], n: u32) -> Result<Self, TowerError> {
        let d = group.d;
        for g in gens {
            if g.len() != d {
                return Err(TowerError::ExponentLength { got: g.len(), want: d });
            }
        }
        let pn = group.pn(n);
        let k = gens.len();
        let mut m = IntMatrix::zero(d, k + d);
        for (j, g) in gens.iter().enumerate() {
            for i in 0..d {
                m[(i, j)] = BigInt::from(g[i]);
            }
        }
        for i in 0..d {
            m[(i, k + i)] = BigInt::from(pn);
        }
        let (h, _) = hermite_normal_form(&m);
        let mut basis = vec![vec![0i64; d]; d];
        let mut diag = vec![0u64; d];
        for j in 0..d {
            for i in 0..d {
                basis[j][i] = i64::try_from(&h[(i, j)]).expect("HNF entry fits i64");
            }
            diag[j] = basis[j][j] as u64;
            debug_assert!(diag[j] >= 1 && pn.is_multiple_of(diag[j]));
        }
        Ok(SubgroupLayer { d, pn, basis, diag })
    }

    pub fn trivial(group: &GroupSpec, n: u32) -> Self {
        SubgroupLayer::new(group, &[], n).expect("trivial subgroup")
    }

    /// Index [G_n : H], also the number of cosets.
    pub fn coset_count(&self) -> u128 {
        self.diag.iter().map(|&x| x as u128).product()
    }

    /// |H| = p^{nd} / coset count.
    pub fn subgroup_order(&self) -> u128 {
        let total: u128 = (0..self.d).map(|_| self.pn as u128).product();
        total / self.coset_count()
    }

    /// Canonical representative (lex-smallest lift in [0, p^n)^d) of the coset
    /// of `x`.
    pub fn canonicalize(&self, x: &[u64]) -> Vec<u64> {
        debug_assert_eq!(x.len(), self.d);
        let mut r: Vec<i64> = x.iter().map(|&v| (v % self.pn) as i64).collect();
        for i in 0..self.d {
            let h = self.diag[i] as i64;
            let q = r[i].div_euclid(h);
            if q != 0 {
                let col = &self.basis[i];
                for (rv, bv) in r[i..].iter_mut().zip(&col[i..]) {
                    *rv -= q * bv;
                }
            }
            debug_assert!(0 <= r[i] && r[i] < h);
        }
        r.iter().map(|&v| v as u64).collect()
    }

    /// All coset representatives in lexicographic order.
    pub fn representatives(&self) -> Vec<Vec<u64>> {
        let mut reps = vec![vec![]];
        for &h in &self.diag {
            let mut next = Vec::with_capacity(reps.len() * h as usize);
            for r in &reps {
                for v in 0..h {
                    let mut e = r.clone();
                    e.push(v);
                    next.push(e);
                }
            }
            reps = next;
        }
        reps
    }

    /// Rank of a canonical representative in the lexicographic enumeration.
    pub fn rep_rank(&self, rep: &[u64]) -> usize {
        let mut acc: u128 = 0;
        for (&h, &r) in self.diag.iter().zip(rep) {
            acc = acc * h as u128 + r as u128;
        }
        usize::try_from(acc).expect("rank fits usize")
    }

    /// Elements of the subgroup H itself, as reduced vectors in [0, p^n)^d.
    /// Breadth-first closure of the basis columns; fine for the sizes the
    /// guardrails allow.
    pub fn subgroup_elements(&self) -> Vec<Vec<u64>> {
        let mut seen: BTreeSet<Vec<u64>> = BTreeSet::new();
        let zero = vec![0u64; self.d];
        seen.insert(zero.clone());
        let mut frontier = vec![zero];
        let gens: Vec<Vec<i64>> = self.basis.clone();
        while let Some(x) = frontier.pop() {
            for g in &gens {
                let y = add_mod(&x, g, self.pn);
                if seen.insert(y.clone()) {
                    frontier.push(y);
                }
            }
        }
        seen.into_iter().collect()
    }

    /// p-rank of H (the F_p-dimension of H[p]).
    fn p_rank(&self, group: &GroupSpec, gens: &[Vec<i64>], n: u32) -> usize {
        let d = group.d;
        let k = gens.len();
        let pn = group.pn(n);
        let mut m = IntMatrix::zero(d, k + d);
        for (j, g) in gens.iter().enumerate() {
            for i in 0..d {
                m[(i, j)] = BigInt::from(g[i]);
            }
        }
        for i in 0..d {
            m[(i, k + i)] = BigInt::from(pn);
        }
        let diag = smith_normal_form(&m);
        // H = ⊕ Z/(p^n / s_i); a summand contributes to the p-rank iff s_i < p^n.
        diag.iter().take(d).filter(|s| **s != BigInt::from(pn)).count()
    }
}

/// Rank over Q of the generator matrix.
pub fn inertia_rank(d: usize, gens: &[Vec<i64>]) -> usize {
    if gens.is_empty() {
        return 0;
    }
    let mut m = IntMatrix::zero(d, gens.len());
    for (j, g) in gens.iter().enumerate() {
        for i in 0..d {
            m[(i, j)] = BigInt::from(g[i]);
        }
    }
    smith_normal_form(&m).iter().filter(|x| !x.is_zero()).count()
}

/// Smallest n at which the p-rank of the inertia image equals rank(I).
/// Computed by iteration, not assumed from the closed form.
pub fn stabilization_level(group: &GroupSpec, gens: &[Vec<i64>]) -> u32 {
    let want = inertia_rank(group.d, gens);
    let mut n = 0u32;
    loop {
        let layer = SubgroupLayer::new(group, gens, n).expect("checked gens");
        if layer.p_rank(group, gens, n) == want {
            return n;
        }
        n += 1;
        assert!(n <= 64, "stabilization level runaway");
    }
}

/// Canonical topological generator for a rank-1 inertia subgroup: the
/// primitive integer direction scaled by the p-part of the generator content,
/// sign-normalized so the first nonzero entry is positive. Any other
/// topological generator of the same closed subgroup differs by a p-adic unit.
pub fn canonical_rank1_generator(p: u64, gens: &[Vec<i64>]) -> Option<Vec<i64>> {
    let nonzero: Vec<&Vec<i64>> = gens.iter().filter(|g| g.iter().any(|&x| x != 0)).collect();
    let first = nonzero.first()?;
    // Primitive direction from the first nonzero generator.
    let content = first.iter().fold(0i64, |acc, &x| num_integer::gcd(acc, x.abs()));
    let mut w: Vec<i64> = first.iter().map(|&x| x / content).collect();
    if let Some(&lead) = w.iter().find(|&&x| x != 0) {
        if lead < 0 {
            for x in &mut w {
                *x = -*x;
            }
        }
    }
    let k0 = w.iter().position(|&x| x != 0)?;
    // Scalars c_j with g_j = c_j * w; keep the minimal p-adic content.
    let mut min_ord = u32::MAX;
    for g in &nonzero {
        let c = g[k0] / w[k0];
        debug_assert!(g.iter().zip(&w).all(|(&a, &b)| a == c * b), "rank-1 generators");
        min_ord = min_ord.min(ord_p(p, c.unsigned_abs()).expect("nonzero scalar"));
    }
    let scale = (p as i64).pow(min_ord);
    Some(w.into_iter().map(|x| x * scale).collect())
}

/// Norm element ω_{I,n}: the sum of all elements of the image of I in G_n,
/// each lifted to its canonical representative.
pub fn omega_norm(
    group: &GroupSpec,
    gens: &[Vec<i64>],
    n: u32,
) -> Result<LaurentElement, TowerError> {
    let need = stabilization_level(group, gens);
    if n < need {
        return Err(TowerError::BelowStabilization { n, need });
    }
    let layer = SubgroupLayer::new(group, gens, n)?;
    let mut acc = LaurentElement::zero(group.d);
    for h in layer.subgroup_elements() {
        let exps: Vec<i64> = h.iter().map(|&x| x as i64).collect();
        acc = acc.add(&LaurentElement::monomial(group.d, &exps, BigInt::from(1)));
    }
    Ok(acc)
}

/// A tower X(Z_p^d, I, α) over a finite connected base graph.
#[derive(Debug, Clone)]
pub struct TowerSpec {
    base: Graph,
    group: GroupSpec,
    /// Voltage per dart, antisymmetric under the dart involution.
    voltages: Vec<Vec<i64>>,
    /// Inertia generators per base vertex; absent means unramified.
    inertia: BTreeMap<VertexIdx, Vec<Vec<i64>>>,
}

impl TowerSpec {
    /// `voltage_by_edge` gives the voltage of each forward (canonical) dart by
    /// dart name; the partner dart gets the negated vector.
    pub fn new(
        base: Graph,
        group: GroupSpec,
        voltage_by_edge: &BTreeMap<String, Vec<i64>>,
        inertia_by_vertex: &BTreeMap<String, Vec<Vec<i64>>>,
    ) -> Result<Self, TowerError> {
        base.validate().map_err(TowerError::BadBase)?;
        if !base.is_connected() {
            return Err(TowerError::BaseDisconnected);
        }
        let mut voltages = vec![Vec::new(); base.dart_count()];
        for e in base.canonical_darts() {
            let name = &base.dart(e).name;
            let v = voltage_by_edge
                .get(name)
                .ok_or_else(|| TowerError::VoltageMissing(name.clone()))?;
            if v.len() != group.d {
                return Err(TowerError::ExponentLength { got: v.len(), want: group.d });
            }
            voltages[e] = v.clone();
            voltages[base.partner(e)] = v.iter().map(|&x| -x).collect();
        }
        let mut inertia = BTreeMap::new();
        for (name, gens) in inertia_by_vertex {
            let v = base
                .vertex_index(name)
                .ok_or_else(|| TowerError::UnknownVertex(name.clone()))?;
            for g in gens {
                if g.len() != group.d {
                    return Err(TowerError::ExponentLength { got: g.len(), want: group.d });
                }
            }
            if !gens.is_empty() {
                inertia.insert(v, gens.clone());
            }
        }
        Ok(TowerSpec { base, group, voltages, inertia })
    }

    pub fn base(&self) -> &Graph {
        &self.base
    }

    pub fn group(&self) -> &GroupSpec {
        &self.group
    }

    pub fn voltage(&self, dart: DartIdx) -> &[i64] {
        &self.voltages[dart]
    }

    pub fn inertia_generators(&self, v: VertexIdx) -> &[Vec<i64>] {
        self.inertia.get(&v).map(|g| g.as_slice()).unwrap_or(&[])
    }

    pub fn is_ramified(&self, v: VertexIdx) -> bool {
        inertia_rank(self.group.d, self.inertia_generators(v)) > 0
    }

    pub fn inertia_rank_at(&self, v: VertexIdx) -> usize {
        inertia_rank(self.group.d, self.inertia_generators(v))
    }

    /// Same base and voltages with all inertia erased.
    pub fn unramified(&self) -> TowerSpec {
        TowerSpec {
            base: self.base.clone(),
            group: self.group,
            voltages: self.voltages.clone(),
            inertia: BTreeMap::new(),
        }
    }

    /// Max stabilization level over all inertia subgroups.
    pub fn stabilization_level(&self) -> u32 {
        self.inertia
            .values()
            .map(|gens| stabilization_level(&self.group, gens))
            .max()
            .unwrap_or(0)
    }

    /// Exact |V(X_n)| = Σ_v [G_n : I_{v,n}], computed without building the
    /// layer. No level restriction.
    pub fn projected_vertex_count(&self, n: u32) -> u128 {
        (0..self.base.vertex_count())
            .map(|v| {
                SubgroupLayer::new(&self.group, self.inertia_generators(v), n)
                    .expect("validated gens")
                    .coset_count()
            })
            .sum()
    }
}

/// Number of vertices of X_n. Requires n at or above the stabilization level,
/// where the count also satisfies the closed form
/// v_r + |G_n|/|G_{n0}| · v_u whenever the ramified vertex count stabilizes.
pub fn vertex_count(spec: &TowerSpec, n: u32) -> Result<u128, TowerError> {
    let need = spec.stabilization_level();
    if n < need {
        return Err(TowerError::BelowStabilization { n, need });
    }
    Ok(spec.projected_vertex_count(n))
}

/// One finite layer X_n with its labels.
#[derive(Debug, Clone)]
pub struct LayerGraph {
    pub graph: Graph,
    pub level: u32,
    group: GroupSpec,
    /// Per layer vertex: (base vertex, canonical coset representative).
    vertex_info: Vec<(VertexIdx, Vec<u64>)>,
    /// Per layer dart: (base dart, group element).
    dart_info: Vec<(DartIdx, Vec<u64>)>,
    /// Per base vertex: canonicalizer for its inertia image and the offset of
    /// its fiber block in the vertex order.
    canon: Vec<SubgroupLayer>,
    vertex_offset: Vec<usize>,
}

impl LayerGraph {
    pub fn group(&self) -> &GroupSpec {
        &self.group
    }

    pub fn vertex_label(&self, v: VertexIdx) -> &(VertexIdx, Vec<u64>) {
        &self.vertex_info[v]
    }

    pub fn dart_label(&self, d: DartIdx) -> &(DartIdx, Vec<u64>) {
        &self.dart_info[d]
    }

    pub fn vertex_infos(&self) -> &[(VertexIdx, Vec<u64>)] {
        &self.vertex_info
    }

    /// Layer vertex index holding (base vertex v, group element g).
    pub fn vertex_of(&self, base_v: VertexIdx, g: &[u64]) -> VertexIdx {
        let rep = self.canon[base_v].canonicalize(g);
        self.vertex_offset[base_v] + self.canon[base_v].rep_rank(&rep)
    }

    /// Layer dart index holding (base dart e, group element g).
    pub fn dart_of(&self, base_dart: DartIdx, g: &[u64]) -> DartIdx {
        let pn = self.group.pn(self.level);
        let mut rank: u128 = 0;
        for &c in g {
            rank = rank * pn as u128 + c as u128;
        }
        let per = self.group.layer_order(self.level);
        usize::try_from(base_dart as u128 * per + rank).expect("dart index fits")
    }

    /// Fiber of the base vertex `v`: all layer vertices above it.
    pub fn fiber(&self, base_v: VertexIdx) -> std::ops::Range<usize> {
        let start = self.vertex_offset[base_v];
        let len = usize::try_from(self.canon[base_v].coset_count()).unwrap();
        start..start + len
    }
}

fn join(values: &[u64]) -> String {
    values.iter().map(|v| v.to_string()).collect::<Vec<_>>().join(",")
}

/// Materializes the layer X_n: vertices ⊔_v {v} × G_n/I_{v,n}, darts
/// E(base) × G_n, with dart (e, g) from (o(e), g·I) to (t(e), (g+α(e))·I) and
/// partner (ē, g+α(e)).
pub fn build_layer(spec: &TowerSpec, n: u32) -> Result<LayerGraph, TowerError> {
    let group = spec.group;
    let pn = group.pn(n);
    let per = group.layer_order(n);
    let dart_total = spec.base.dart_count() as u128 * per;
    if dart_total > 4_000_000 {
        return Err(TowerError::LayerTooLarge { n, size: dart_total });
    }

    let mut canon = Vec::with_capacity(spec.base.vertex_count());
    let mut vertex_offset = Vec::with_capacity(spec.base.vertex_count());
    let mut vertex_info = Vec::new();
    let mut names = Vec::new();
    for v in 0..spec.base.vertex_count() {
        let layer = SubgroupLayer::new(&group, spec.inertia_generators(v), n)?;
        vertex_offset.push(vertex_info.len());
        for rep in layer.representatives() {
            names.push(format!("{}@{}", spec.base.vertex_name(v), join(&rep)));
            vertex_info.push((v, rep));
        }
        canon.push(layer);
    }

    // Enumerate G_n lexicographically once.
    let mut elements: Vec<Vec<u64>> = vec![vec![]];
    for _ in 0..group.d {
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

    let vertex_of = |v: VertexIdx, g: &[u64]| -> usize {
        let rep = canon[v].canonicalize(g);
        vertex_offset[v] + canon[v].rep_rank(&rep)
    };

    let per_usize = usize::try_from(per).expect("layer order fits usize");
    let mut darts = Vec::with_capacity(spec.base.dart_count() * per_usize);
    let mut dart_info = Vec::with_capacity(darts.capacity());
    for e in 0..spec.base.dart_count() {
        let base = spec.base.dart(e);
        let alpha = spec.voltage(e);
        for g in &elements {
            let shifted = add_mod(g, alpha, pn);
            let mut rank_shift: u128 = 0;
            for &c in &shifted {
                rank_shift = rank_shift * pn as u128 + c as u128;
            }
            let partner =
                base.partner as u128 * per + rank_shift;
            darts.push(Dart {
                name: format!("{}@{}", base.name, join(g)),
                origin: vertex_of(base.origin, g),
                terminus: vertex_of(base.terminus, &shifted),
                partner: usize::try_from(partner).expect("partner index fits"),
            });
            dart_info.push((e, g.clone()));
        }
    }

    let graph = Graph::from_parts(names, darts);
    debug_assert_eq!(graph.validate(), Ok(()));
    Ok(LayerGraph { graph, level: n, group, vertex_info, dart_info, canon, vertex_offset })
}

pub fn is_connected_layer(spec: &TowerSpec, n: u32) -> Result<bool, TowerError> {
    Ok(build_layer(spec, n)?.graph.is_connected())
}

/// Covering projection X_{n_hi} -> X_{n_lo}: (v, g·I) ↦ (v, reduce(g)·I),
/// (e, g) ↦ (e, reduce(g)).
pub fn projection(hi: &LayerGraph, lo: &LayerGraph) -> GraphMorphism {
    assert!(hi.level >= lo.level, "projection goes down the tower");
    let pl = lo.group.pn(lo.level);
    let red = |g: &[u64]| -> Vec<u64> { g.iter().map(|&x| x % pl).collect() };
    let vertex_map = hi
        .vertex_info
        .iter()
        .map(|(v, rep)| lo.vertex_of(*v, &red(rep)))
        .collect();
    let dart_map = hi
        .dart_info
        .iter()
        .map(|(e, g)| lo.dart_of(*e, &red(g)))
        .collect();
    GraphMorphism { vertex_map, dart_map }
}

/// The automorphism of a layer given by adding g: (v, h·I) ↦ (v, (g+h)·I),
/// (e, h) ↦ (e, g+h).
pub fn galois_act(layer: &LayerGraph, g: &[i64]) -> Result<GraphMorphism, TowerError> {
    if g.len() != layer.group.d {
        return Err(TowerError::ExponentLength { got: g.len(), want: layer.group.d });
    }
    let pn = layer.group.pn(layer.level);
    let vertex_map = layer
        .vertex_info
        .iter()
        .map(|(v, rep)| layer.vertex_of(*v, &add_mod(rep, g, pn)))
        .collect();
    let dart_map = layer
        .dart_info
        .iter()
        .map(|(e, h)| layer.dart_of(*e, &add_mod(h, g, pn)))
        .collect();
    Ok(GraphMorphism { vertex_map, dart_map })
}

/// The immersion at level n: the quotient of the unramified layer collapsing
/// each fiber (v, g G_n) ↦ (v, g·I_{v,n}). Returns (unramified layer, ramified
/// layer, morphism). The quotient agrees with `build_layer(spec, n)` label by
/// label.
pub fn immersion_push(
    spec: &TowerSpec,
    n: u32,
) -> Result<(LayerGraph, LayerGraph, GraphMorphism), TowerError> {
    let unram = build_layer(&spec.unramified(), n)?;
    let ram = build_layer(spec, n)?;
    let vertex_map: Vec<usize> = unram
        .vertex_info
        .iter()
        .map(|(v, g)| ram.vertex_of(*v, g))
        .collect();
    let (quotient, morphism) = unram.graph.quotient_vertices(&vertex_map);
    // The class order induced by first occurrence matches the ramified layer's
    // canonical vertex order, so the quotient must coincide dart-for-dart.
    debug_assert_eq!(quotient.vertex_count(), ram.graph.vertex_count());
    debug_assert!(quotient
        .darts()
        .iter()
        .zip(ram.graph.darts())
        .all(|(a, b)| a.origin == b.origin && a.terminus == b.terminus && a.partner == b.partner));
    debug_assert_eq!(morphism.vertex_map, vertex_map);
    Ok((unram, ram, morphism))
}
