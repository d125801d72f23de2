//! The bundled golden corpus: small towers with known characteristic
//! elements, layer shapes, and growth behavior. Used by the verification
//! harness (`zptower verify`) and by the acceptance suite.

use crate::iwasawa::{char_from_terms, CharElement};
use crate::specfile::{EdgeSpec, EmbeddingSpec, SpecFile};
use std::collections::BTreeMap;

/// Expected outcome of the dual-tower checks for an entry.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum DualExpectation {
    /// No base embedding or more than one voltage edge.
    Skip,
    /// Checks pass at n ≤ 2 with this many totally ramified dual vertices.
    PassWith { totally_ramified: usize },
    /// The first failing level.
    FailAt(u32),
}

/// One golden example: the spec file plus every frozen expectation.
#[derive(Debug, Clone)]
pub struct CorpusEntry {
    pub name: &'static str,
    pub file: SpecFile,
    /// char(Pic) = det(D − B) in polynomial form, compared up to Λ-unit.
    pub char_pic: Option<CharElement>,
    /// |V(X_n)| for n = 0..=3 (truncated when fewer are listed).
    pub vertex_counts: Vec<u128>,
    /// Deepest level used in growth verification; 0 disables the growth run.
    pub growth_n_max: u32,
    pub dual: DualExpectation,
}

fn edge(id: &str, from: &str, to: &str, voltage: Vec<i64>) -> EdgeSpec {
    EdgeSpec { id: id.into(), from: from.into(), to: to.into(), voltage }
}

fn rotations(pairs: &[(&str, &[&str])]) -> BTreeMap<String, Vec<String>> {
    pairs
        .iter()
        .map(|(v, ds)| (v.to_string(), ds.iter().map(|d| d.to_string()).collect()))
        .collect()
}

fn triangle_file(p: u64, ramified: bool) -> SpecFile {
    let mut inertia = BTreeMap::new();
    if ramified {
        inertia.insert("B".to_string(), vec![vec![1]]);
        inertia.insert("C".to_string(), vec![vec![1]]);
    }
    SpecFile {
        p,
        d: 1,
        vertices: vec!["A".into(), "B".into(), "C".into()],
        edges: vec![
            edge("ab", "A", "B", vec![1]),
            edge("bc", "B", "C", vec![0]),
            edge("ca", "C", "A", vec![0]),
        ],
        inertia,
        embedding: Some(EmbeddingSpec {
            rotations: rotations(&[
                ("A", &["ab", "ca~"]),
                ("B", &["bc", "ab~"]),
                ("C", &["ca", "bc~"]),
            ]),
            outer_face: 0,
        }),
        layer_embeddings: BTreeMap::new(),
    }
}

/// Unramified triangle tower at p = 2: layers are the 6-gon, 12-gon, 24-gon.
/// det(D − B) is a unit multiple of T².
pub fn triangle_unramified() -> CorpusEntry {
    CorpusEntry {
        name: "triangle_unramified",
        file: triangle_file(2, false),
        char_pic: Some(char_from_terms(1, 2, &[(&[2], 1)])),
        vertex_counts: vec![3, 6, 12, 24],
        growth_n_max: 3,
        dual: DualExpectation::PassWith { totally_ramified: 2 },
    }
}

/// Triangle with B and C totally ramified: layers contract the 2^n-gon
/// covers; det(D − B) = 2T².
pub fn triangle_ramified() -> CorpusEntry {
    CorpusEntry {
        name: "triangle_ramified",
        file: triangle_file(2, true),
        char_pic: Some(char_from_terms(1, 2, &[(&[2], 2)])),
        vertex_counts: vec![3, 4, 6, 10],
        growth_n_max: 3,
        dual: DualExpectation::PassWith { totally_ramified: 0 },
    }
}

/// The ramified triangle packaged with the drawn first-layer embedding whose
/// dual fails to cover the dual base: the two plain lifts bound a digon.
pub fn triangle_nexample() -> CorpusEntry {
    let mut file = triangle_file(2, true);
    let mut layer1 = BTreeMap::new();
    layer1.insert("A@0".to_string(), vec!["ab@0".into(), "ca~@0".into()]);
    layer1.insert("A@1".to_string(), vec!["ab@1".into(), "ca~@1".into()]);
    layer1.insert(
        "B@0".to_string(),
        vec!["bc@0".into(), "bc@1".into(), "ab~@1".into(), "ab~@0".into()],
    );
    layer1.insert(
        "C@0".to_string(),
        vec!["ca@1".into(), "ca@0".into(), "bc~@1".into(), "bc~@0".into()],
    );
    file.layer_embeddings.insert("1".to_string(), layer1);
    CorpusEntry {
        name: "triangle_nexample",
        file,
        char_pic: Some(char_from_terms(1, 2, &[(&[2], 2)])),
        vertex_counts: vec![3, 4, 6, 10],
        growth_n_max: 0,
        dual: DualExpectation::FailAt(1),
    }
}

/// Two vertices joined by a voltage edge and a plain edge, p = 2: the layers
/// are the 4-, 8-, 16-gons; the characteristic element of Pic is T².
pub fn two_vertex_unramified() -> CorpusEntry {
    let file = SpecFile {
        p: 2,
        d: 1,
        vertices: vec!["A".into(), "B".into()],
        edges: vec![edge("t", "A", "B", vec![1]), edge("s", "A", "B", vec![0])],
        inertia: BTreeMap::new(),
        embedding: Some(EmbeddingSpec {
            rotations: rotations(&[("A", &["t", "s"]), ("B", &["t~", "s~"])]),
            outer_face: 0,
        }),
        layer_embeddings: BTreeMap::new(),
    };
    CorpusEntry {
        name: "two_vertex_unramified",
        file,
        char_pic: Some(char_from_terms(1, 2, &[(&[2], 1)])),
        vertex_counts: vec![2, 4, 8, 16],
        growth_n_max: 3,
        dual: DualExpectation::PassWith { totally_ramified: 2 },
    }
}

/// Totally ramified R against unramified U over two parallel edges, p = 3:
/// the flower tower with vertex counts 1 + 3^n and det(D − B) = 2T.
pub fn flower() -> CorpusEntry {
    let file = SpecFile {
        p: 3,
        d: 1,
        vertices: vec!["R".into(), "U".into()],
        edges: vec![edge("t", "R", "U", vec![1]), edge("s", "R", "U", vec![0])],
        inertia: BTreeMap::from([("R".to_string(), vec![vec![1]])]),
        embedding: Some(EmbeddingSpec {
            rotations: rotations(&[("R", &["t", "s"]), ("U", &["t~", "s~"])]),
            outer_face: 0,
        }),
        layer_embeddings: BTreeMap::new(),
    };
    CorpusEntry {
        name: "flower",
        file,
        char_pic: Some(char_from_terms(1, 3, &[(&[1], 2)])),
        vertex_counts: vec![2, 4, 10, 28],
        growth_n_max: 3,
        dual: DualExpectation::PassWith { totally_ramified: 1 },
    }
}

/// Cycle with m vertices, one totally ramified vertex, single voltage:
/// det(D − B) = mT; layers are flowers of m-cycles and
/// ord_p(κ(X_n)) = ord_p(m)·p^n.
pub fn cycle_ramified(m: usize, p: u64, growth_n_max: u32) -> CorpusEntry {
    let vertices: Vec<String> = (0..m).map(|i| format!("v{i}")).collect();
    let edges: Vec<EdgeSpec> = (0..m)
        .map(|i| {
            let voltage = if i == 0 { vec![1] } else { vec![0] };
            edge(&format!("e{i}"), &format!("v{i}"), &format!("v{}", (i + 1) % m), voltage)
        })
        .collect();
    let rot: BTreeMap<String, Vec<String>> = (0..m)
        .map(|i| {
            (
                format!("v{i}"),
                vec![format!("e{i}"), format!("e{}~", (i + m - 1) % m)],
            )
        })
        .collect();
    let file = SpecFile {
        p,
        d: 1,
        vertices,
        edges,
        inertia: BTreeMap::from([("v0".to_string(), vec![vec![1]])]),
        embedding: Some(EmbeddingSpec { rotations: rot, outer_face: 0 }),
        layer_embeddings: BTreeMap::new(),
    };
    let name: &'static str = match (m, p) {
        (5, 5) => "cycle5",
        (9, 3) => "cycle9",
        _ => "cycle",
    };
    let mut vertex_counts = Vec::new();
    for n in 0..=3u32 {
        vertex_counts.push(1 + (m as u128 - 1) * (p as u128).pow(n));
    }
    CorpusEntry {
        name,
        file,
        char_pic: Some(char_from_terms(1, p, &[(&[1], m as i64)])),
        vertex_counts,
        growth_n_max,
        dual: DualExpectation::PassWith { totally_ramified: 1 },
    }
}

/// Two vertices joined by three parallel edges, one carrying the voltage,
/// p = 2 unramified: the first layer is the 4-vertex, 6-edge planar double
/// cover. det(D − B) is a unit multiple of 2T².
pub fn theta_unramified() -> CorpusEntry {
    let file = SpecFile {
        p: 2,
        d: 1,
        vertices: vec!["A".into(), "B".into()],
        edges: vec![
            edge("b", "A", "B", vec![0]),
            edge("r", "A", "B", vec![0]),
            edge("t", "A", "B", vec![1]),
        ],
        inertia: BTreeMap::new(),
        embedding: Some(EmbeddingSpec {
            rotations: rotations(&[("A", &["b", "r", "t"]), ("B", &["t~", "r~", "b~"])]),
            outer_face: 2,
        }),
        layer_embeddings: BTreeMap::new(),
    };
    CorpusEntry {
        name: "theta_unramified",
        file,
        char_pic: Some(char_from_terms(1, 2, &[(&[2], 2)])),
        vertex_counts: vec![2, 4, 8, 16],
        growth_n_max: 3,
        dual: DualExpectation::PassWith { totally_ramified: 2 },
    }
}

fn z32_file(full_inertia: bool) -> SpecFile {
    let gens = if full_inertia {
        vec![vec![1, 0], vec![0, 1]]
    } else {
        vec![vec![1, 0]]
    };
    SpecFile {
        p: 3,
        d: 2,
        vertices: vec!["R".into(), "U".into()],
        edges: vec![edge("t", "R", "U", vec![1, 0]), edge("s", "R", "U", vec![0, 1])],
        inertia: BTreeMap::from([("R".to_string(), gens)]),
        embedding: None,
        layer_embeddings: BTreeMap::new(),
    }
}

/// Z_3^2 tower with R totally ramified: det(D − B) = 2 and
/// ord_3(κ(X_n)) = ord_3(2)·3^{2n} = 0.
pub fn z32_flower_full() -> CorpusEntry {
    CorpusEntry {
        name: "z32_flower_full",
        file: z32_file(true),
        char_pic: Some(char_from_terms(2, 3, &[(&[0, 0], 2)])),
        vertex_counts: vec![2, 10, 82],
        growth_n_max: 2,
        dual: DualExpectation::Skip,
    }
}

/// Same tower but R only ramifies along the first generator:
/// det(D − B) = 2T (in that generator's variable).
pub fn z32_flower_tau() -> CorpusEntry {
    CorpusEntry {
        name: "z32_flower_tau",
        file: z32_file(false),
        char_pic: Some(char_from_terms(2, 3, &[(&[1, 0], 2)])),
        vertex_counts: vec![2, 12, 90],
        growth_n_max: 2,
        dual: DualExpectation::Skip,
    }
}

/// Square with a voltage diagonal, p = 2, unramified: the dual tower ramifies
/// totally at the two diagonal-side faces. det(D − B) is a unit multiple of
/// 4T².
pub fn square_diagonal() -> CorpusEntry {
    let file = SpecFile {
        p: 2,
        d: 1,
        vertices: vec!["A".into(), "B".into(), "C".into(), "D".into()],
        edges: vec![
            edge("ab", "A", "B", vec![0]),
            edge("bc", "B", "C", vec![0]),
            edge("cd", "C", "D", vec![0]),
            edge("da", "D", "A", vec![0]),
            edge("ac", "A", "C", vec![1]),
        ],
        inertia: BTreeMap::new(),
        embedding: Some(EmbeddingSpec {
            rotations: rotations(&[
                ("A", &["ab", "ac", "da~"]),
                ("B", &["bc", "ab~"]),
                ("C", &["cd", "ac~", "bc~"]),
                ("D", &["da", "cd~"]),
            ]),
            outer_face: 1,
        }),
        layer_embeddings: BTreeMap::new(),
    };
    CorpusEntry {
        name: "square_diagonal",
        file,
        char_pic: Some(char_from_terms(1, 2, &[(&[2], 4)])),
        vertex_counts: vec![4, 8, 16, 32],
        growth_n_max: 3,
        dual: DualExpectation::PassWith { totally_ramified: 2 },
    }
}

/// The dual tower of `square_diagonal` as a spec of its own: O unramified of
/// degree 4, I1 and I2 totally ramified, the voltage on the I1–I2 edge.
/// det(D − B) = 4T² exactly, so char(Jac) = 4T on both routes.
pub fn square_diagonal_dual() -> CorpusEntry {
    let file = SpecFile {
        p: 2,
        d: 1,
        vertices: vec!["O".into(), "I1".into(), "I2".into()],
        edges: vec![
            edge("a", "O", "I1", vec![0]),
            edge("b", "O", "I1", vec![0]),
            edge("c", "O", "I2", vec![0]),
            edge("d", "O", "I2", vec![0]),
            edge("r", "I1", "I2", vec![1]),
        ],
        inertia: BTreeMap::from([
            ("I1".to_string(), vec![vec![1]]),
            ("I2".to_string(), vec![vec![1]]),
        ]),
        embedding: Some(EmbeddingSpec {
            rotations: rotations(&[
                ("O", &["a", "b", "c", "d"]),
                ("I1", &["r", "b~", "a~"]),
                ("I2", &["d~", "c~", "r~"]),
            ]),
            outer_face: 0,
        }),
        layer_embeddings: BTreeMap::new(),
    };
    CorpusEntry {
        name: "square_diagonal_dual",
        file,
        char_pic: Some(char_from_terms(1, 2, &[(&[2], 4)])),
        vertex_counts: vec![3, 4, 6, 10],
        growth_n_max: 3,
        dual: DualExpectation::PassWith { totally_ramified: 0 },
    }
}

/// Bouquet of two loops with voltages 1 and 2 over p = 5: the first layer is
/// K_5. det(D − B) = −(5T² + 5T³ + T⁴), frozen from the hand expansion of
/// 4 − γ − γ⁻¹ − γ² − γ⁻².
pub fn bouquet() -> CorpusEntry {
    let file = SpecFile {
        p: 5,
        d: 1,
        vertices: vec!["A".into()],
        edges: vec![edge("e1", "A", "A", vec![1]), edge("e2", "A", "A", vec![2])],
        inertia: BTreeMap::new(),
        embedding: None,
        layer_embeddings: BTreeMap::new(),
    };
    CorpusEntry {
        name: "bouquet",
        file,
        char_pic: Some(char_from_terms(1, 5, &[(&[2], -5), (&[3], -5), (&[4], -1)])),
        vertex_counts: vec![1, 5, 25, 125],
        growth_n_max: 3,
        dual: DualExpectation::Skip,
    }
}

/// Every golden entry, in verification order.
pub fn entries() -> Vec<CorpusEntry> {
    vec![
        triangle_unramified(),
        triangle_ramified(),
        triangle_nexample(),
        two_vertex_unramified(),
        theta_unramified(),
        flower(),
        cycle_ramified(5, 5, 2),
        cycle_ramified(9, 3, 3),
        z32_flower_full(),
        z32_flower_tau(),
        square_diagonal(),
        square_diagonal_dual(),
        bouquet(),
    ]
}

pub fn by_name(name: &str) -> Option<CorpusEntry> {
    entries().into_iter().find(|e| e.name == name)
}
