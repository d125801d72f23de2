//! Acceptance suite: one test per criterion, each printing a PASS line with
//! the checked quantities. Everything here is exact — integer equalities,
//! exact divisibility, equality of characteristic elements up to a unit.

use num_bigint::BigUint;
use rand::{rngs::StdRng, Rng, SeedableRng};
use std::collections::BTreeMap;
use zptower::corpus::{self, DualExpectation};
use zptower::graph::{Graph, GraphBuilder};
use zptower::growth::{consistency, ord_series, Slack};
use zptower::intlinalg::{determinant, smith_normal_form, IntMatrix};
use zptower::iwasawa::{
    char_element, char_from_terms, char_of_jacobian, chars_equal_up_to_unit, to_poly,
};
use zptower::jacobian::{jacobian_invariants, kappa, same_class, Divisor};
use zptower::planar::{derived_embedding, dual, dual_tower_check, theta, Embedding};
use zptower::specfile::{EdgeSpec, SpecFile};
use zptower::tower::{build_layer, element_order_in_layer, galois_act, GroupSpec, TowerSpec};

fn spec_of(name: &str) -> (corpus::CorpusEntry, TowerSpec) {
    let entry = corpus::by_name(name).expect("corpus entry");
    let spec = entry.file.to_tower().expect("valid fixture");
    (entry, spec)
}

fn embedding_of(entry: &corpus::CorpusEntry, spec: &TowerSpec) -> (Embedding, usize) {
    entry.file.base_embedding(spec).expect("embedding parses").expect("embedding present")
}

/// Criterion 1: golden characteristic elements, exact up to Λ-unit.
#[test]
fn criterion_1_golden_characteristic_elements() {
    type Golden = (&'static str, &'static [(&'static [u32], i64)]);
    let golden: &[Golden] = &[
        ("triangle_ramified", &[(&[2], 2)]),      // 2T²
        ("flower", &[(&[1], 2)]),                 // 2T
        ("cycle5", &[(&[1], 5)]),                 // 5T
        ("cycle9", &[(&[1], 9)]),                 // 9T
        ("z32_flower_full", &[(&[0, 0], 2)]),     // 2
        ("z32_flower_tau", &[(&[1, 0], 2)]),      // 2T in the first variable
        ("two_vertex_unramified", &[(&[2], 1)]),  // T²
    ];
    for (name, terms) in golden {
        let (entry, spec) = spec_of(name);
        let p = spec.group().p();
        let d = spec.group().d();
        let got = char_element(&spec).expect("torsion char element");
        let want = char_from_terms(d, p, terms);
        assert!(
            chars_equal_up_to_unit(&got, &want, p),
            "{name}: got {}, want {} up to unit",
            got.poly,
            want.poly
        );
        let _ = entry;
    }
    // Dual route: char(Jac) = 4T computed from the 4x4 primal matrix and from
    // the 3x3 dual-tower matrix, agreeing with each other.
    let (_, primal) = spec_of("square_diagonal");
    let (_, dual_spec) = spec_of("square_diagonal_dual");
    let jac_primal =
        char_of_jacobian(&char_element(&primal).unwrap(), 1, 2).expect("T divides");
    let jac_dual =
        char_of_jacobian(&char_element(&dual_spec).unwrap(), 1, 2).expect("T divides");
    let four_t = char_from_terms(1, 2, &[(&[1], 4)]);
    assert!(chars_equal_up_to_unit(&jac_primal, &four_t, 2));
    assert!(chars_equal_up_to_unit(&jac_dual, &four_t, 2));
    assert!(chars_equal_up_to_unit(&jac_primal, &jac_dual, 2));
    println!("ACCEPTANCE 1 golden characteristic elements: PASS (8 towers)");
}

/// Criterion 2: growth consistency for d = 1, p in {2, 3}, n <= 3; the cycle
/// tower obeys ord_p(kappa(X_n)) = ord_p(m) p^n exactly.
#[test]
fn criterion_2_growth_consistency_d1() {
    let mut checked = 0;
    for entry in corpus::entries() {
        if entry.file.d != 1 || !matches!(entry.file.p, 2 | 3) || entry.growth_n_max < 3 {
            continue;
        }
        let spec = entry.file.to_tower().unwrap();
        let verdict = consistency(&spec, 3, Slack::Auto).expect("growth runs");
        // Observed (not required) monotonicity; a break is worth a look but
        // does not fail the suite.
        if verdict.series.values.windows(2).any(|w| w[0] > w[1]) {
            eprintln!(
                "warning: {} ord series not monotone: {:?}",
                entry.name, verdict.series.values
            );
        }
        let fit = verdict.fit.expect("stable fit");
        assert_eq!(
            (fit.mu, fit.lambda),
            (verdict.predicted_mu, verdict.predicted_lambda),
            "{}: fit vs char(Jac)",
            entry.name
        );
        assert!(verdict.consistent, "{}", entry.name);
        checked += 1;
    }
    assert!(checked >= 6, "expected at least 6 d=1 golden specs, got {checked}");
    // The cycle law at p = 3, m = 9: ord_3(kappa(X_n)) = 2·3^n.
    let (_, c9) = spec_of("cycle9");
    let series = ord_series(&c9, 3).unwrap();
    for (n, &v) in series.values.iter().enumerate() {
        assert_eq!(v, 2 * 3u32.pow(n as u32), "cycle9 at n={n}");
    }
    // And at p = 5, m = 5 (n <= 2): ord_5 = 5^n.
    let (_, c5) = spec_of("cycle5");
    let series5 = ord_series(&c5, 2).unwrap();
    assert_eq!(series5.values, vec![1, 5, 25]);
    println!(
        "ACCEPTANCE 2 growth consistency d=1: PASS ({checked} towers; cycle9 = [2,6,18,54])"
    );
}

/// Criterion 3: the Z_3^2 flower with full inertia has ord_3(kappa(X_n)) = 0
/// for n <= 2, matching mu = lambda = 0 from char element 2, residuals 0.
#[test]
fn criterion_3_growth_consistency_d2() {
    let (_, spec) = spec_of("z32_flower_full");
    let verdict = consistency(&spec, 2, Slack::Auto).unwrap();
    assert_eq!((verdict.predicted_mu, verdict.predicted_lambda), (0, 0));
    assert_eq!(verdict.series.values, vec![0, 0, 0]);
    assert!(verdict.residuals.residuals.iter().all(|&r| r == 0));
    assert!(verdict.consistent);
    // The partially ramified variant is also exact within slack.
    let (_, tau) = spec_of("z32_flower_tau");
    let v2 = consistency(&tau, 2, Slack::Auto).unwrap();
    assert!(v2.consistent);
    println!("ACCEPTANCE 3 growth consistency d=2: PASS (series [0,0,0], residuals 0)");
}

/// Criterion 4: layer shapes match the figures: 6-gon and 12-gon over the
/// unramified triangle, 4- and 6-vertex contractions over the ramified one,
/// flower vertex counts 4 and 10, and the vertex-count closed form.
#[test]
fn criterion_4_layer_structure() {
    let (_, tri) = spec_of("triangle_unramified");
    let hex = build_layer(&tri, 1).unwrap();
    assert_eq!(hex.graph.vertex_count(), 6);
    assert_eq!(hex.graph.edge_count(), 6);
    assert!((0..6).all(|v| hex.graph.degree(v).unwrap() == 2), "hexagon is a 6-cycle");
    let twelve = build_layer(&tri, 2).unwrap();
    assert_eq!(twelve.graph.vertex_count(), 12);
    assert!((0..12).all(|v| twelve.graph.degree(v).unwrap() == 2), "12-gon");

    let (_, ram) = spec_of("triangle_ramified");
    assert_eq!(build_layer(&ram, 1).unwrap().graph.vertex_count(), 4);
    assert_eq!(build_layer(&ram, 2).unwrap().graph.vertex_count(), 6);

    let (_, flower) = spec_of("flower");
    assert_eq!(build_layer(&flower, 1).unwrap().graph.vertex_count(), 4);
    assert_eq!(build_layer(&flower, 2).unwrap().graph.vertex_count(), 10);
    // Closed form v_r + |G_n|/|G_{n0}| v_u with n0 = 1, v_r = 1, v_u = 3.
    for n in 1..=3u32 {
        let expect = 1 + 3u128.pow(n - 1) * 3;
        assert_eq!(zptower::tower::vertex_count(&flower, n).unwrap(), expect);
    }
    println!("ACCEPTANCE 4 layer structure: PASS (6, 12, 4, 6, 4, 10 + closed form)");
}

/// Criterion 5: derived embeddings have Euler characteristic 2 at n <= 3 for
/// every single-voltage corpus spec; unramified towers obey the face-count
/// law f_n = 2 + p^n (f_0 - 2).
#[test]
fn criterion_5_planarity_of_derived_embeddings() {
    let mut towers = 0;
    for entry in corpus::entries() {
        let spec = entry.file.to_tower().unwrap();
        let single = spec
            .base()
            .canonical_darts()
            .filter(|&d| spec.voltage(d).iter().any(|&x| x != 0))
            .count()
            == 1;
        let Some((emb, outer)) = entry.file.base_embedding(&spec).unwrap() else {
            continue;
        };
        if !single {
            continue;
        }
        towers += 1;
        let f0 = emb.trace_faces().len() as i64;
        let unramified = (0..spec.base().vertex_count()).all(|v| !spec.is_ramified(v));
        for n in 0..=3u32 {
            let (_, layer_emb) = derived_embedding(&spec, &emb, outer, n)
                .unwrap_or_else(|e| panic!("{} n={n}: {e}", entry.name));
            assert_eq!(
                layer_emb.euler_characteristic().unwrap(),
                2,
                "{} n={n}",
                entry.name
            );
            if unramified {
                let fn_count = layer_emb.trace_faces().len() as i64;
                let pn = (entry.file.p as i64).pow(n);
                assert_eq!(fn_count, 2 + pn * (f0 - 2), "{} face law at n={n}", entry.name);
            }
        }
    }
    assert!(towers >= 7, "expected at least 7 single-voltage embedded towers, got {towers}");
    println!("ACCEPTANCE 5 planarity of derived embeddings: PASS ({towers} towers, n <= 3)");
}

/// Criterion 6: the square-with-diagonal dual tower passes at n <= 2 with
/// exactly two totally ramified dual vertices; the drawn non-example fails at
/// n = 1; every passing tower satisfies v̄_r = 2 − v_r.
#[test]
fn criterion_6_dual_towers() {
    let (entry, spec) = spec_of("square_diagonal");
    let (emb, outer) = embedding_of(&entry, &spec);
    let rep = dual_tower_check(&spec, &emb, outer, 2, &BTreeMap::new()).unwrap();
    assert!(rep.pass, "{:?}", rep.first_failure());
    assert_eq!(rep.dual_totally_ramified, 2);
    assert_eq!(rep.dual_ramified, 2 - rep.primal_ramified);

    let (nentry, nspec) = spec_of("triangle_nexample");
    let (nemb, nouter) = embedding_of(&nentry, &nspec);
    let explicit = nentry.file.layer_rotations().unwrap();
    let nrep = dual_tower_check(&nspec, &nemb, nouter, 1, &explicit).unwrap();
    assert!(!nrep.pass);
    let failed_at = nrep
        .layers
        .iter()
        .find(|l| l.cover.is_err() || l.galois_ok.is_err())
        .map(|l| l.n);
    assert_eq!(failed_at, Some(1), "the drawn embedding fails at the first layer");

    // v̄_r = 2 − v_r on every passing corpus tower.
    let mut passing = 0;
    for entry in corpus::entries() {
        if let DualExpectation::PassWith { .. } = entry.dual {
            let spec = entry.file.to_tower().unwrap();
            let (emb, outer) = embedding_of(&entry, &spec);
            let explicit = entry.file.layer_rotations().unwrap();
            let rep = dual_tower_check(&spec, &emb, outer, 2, &explicit).unwrap();
            assert!(rep.pass, "{}: {:?}", entry.name, rep.first_failure());
            assert_eq!(
                rep.dual_ramified,
                2 - rep.primal_ramified,
                "{}: ramified count law",
                entry.name
            );
            passing += 1;
        }
    }
    println!(
        "ACCEPTANCE 6 dual towers: PASS (square diagonal 2 totally ramified; \
         non-example fails at n=1; count law on {passing} towers)"
    );
}

/// Criterion 7: Jac(X_n) = Jac(X_n^∨) and kappa(X_n) = kappa(X_n^∨) for dual
/// corpus layers n <= 2; θ is Galois-equivariant on generators at n = 1.
#[test]
fn criterion_7_jacobian_duality() {
    let mut layers_checked = 0;
    for entry in corpus::entries() {
        let DualExpectation::PassWith { .. } = entry.dual else { continue };
        let spec = entry.file.to_tower().unwrap();
        let (emb, outer) = embedding_of(&entry, &spec);
        for n in 0..=2u32 {
            let (_, layer_emb) = derived_embedding(&spec, &emb, outer, n).unwrap();
            let d = dual(&layer_emb).unwrap();
            let j1 = jacobian_invariants(layer_emb.graph()).unwrap();
            let j2 = jacobian_invariants(d.graph()).unwrap();
            assert_eq!(j1, j2, "{} invariant factors at n={n}", entry.name);
            assert_eq!(
                kappa(layer_emb.graph()).unwrap(),
                kappa(d.graph()).unwrap(),
                "{} kappa at n={n}",
                entry.name
            );
            layers_checked += 1;
        }
    }
    assert!(layers_checked >= 21);

    // Galois equivariance of θ on the square-diagonal layer 1.
    let (entry, spec) = spec_of("square_diagonal");
    let (emb, outer) = embedding_of(&entry, &spec);
    let (layer, layer_emb) = derived_embedding(&spec, &emb, outer, 1).unwrap();
    let d = dual(&layer_emb).unwrap();
    let act = galois_act(&layer, &[1]).unwrap();
    // Face permutation induced by the dart action.
    let face_image: Vec<usize> =
        d.faces.iter().map(|f| d.face_of_dart[act.dart_map[f[0]]]).collect();
    for (fi, f) in d.faces.iter().enumerate() {
        for &dart in f {
            assert_eq!(d.face_of_dart[act.dart_map[dart]], face_image[fi]);
        }
    }
    let g = layer_emb.graph();
    for i in 1..g.vertex_count() {
        let u = Divisor::from_pairs(&[(i, 1), (0, -1)]);
        // g·u as a divisor.
        let mut gu = Divisor::zero();
        for (&v, c) in u.support() {
            gu.add_to(act.vertex_map[v], c);
        }
        let theta_gu = theta(&layer_emb, &gu).unwrap();
        let theta_u = theta(&layer_emb, &u).unwrap();
        let mut g_theta_u = Divisor::zero();
        for (&f, c) in theta_u.support() {
            g_theta_u.add_to(face_image[f], c);
        }
        assert!(
            same_class(d.graph(), &theta_gu, &g_theta_u),
            "θ(g·u) and g·θ(u) must agree in Jac of the dual (generator {i})"
        );
    }

    // θ preserves class orders on the base: Jac(square+diagonal) = Z/8.
    let (base_emb, _) = embedding_of(&entry, &spec);
    let base_dual = dual(&base_emb).unwrap();
    let class_order = |g: &zptower::graph::Graph, u: &Divisor| -> u32 {
        let mut acc = Divisor::zero();
        for k in 1..=16u32 {
            for (&v, c) in u.support() {
                acc.add_to(v, c);
            }
            if same_class(g, &acc, &Divisor::zero()) {
                return k;
            }
        }
        panic!("class order exceeds 16");
    };
    let u = Divisor::from_pairs(&[(1, 1), (0, -1)]);
    let img = theta(&base_emb, &u).unwrap();
    assert_eq!(
        class_order(base_emb.graph(), &u),
        class_order(base_dual.graph(), &img),
        "θ preserves the order of a generator class"
    );
    println!(
        "ACCEPTANCE 7 jacobian duality: PASS ({layers_checked} layers; θ equivariant at n=1)"
    );
}

/// Random connected planar base: a cycle with non-crossing chords, one random
/// edge carrying a voltage prime to p.
fn random_planar_single_voltage(rng: &mut StdRng) -> SpecFile {
    let k = rng.gen_range(3..=8usize);
    let p = if rng.gen_bool(0.5) { 2u64 } else { 3 };
    let mut edges = Vec::new();
    for i in 0..k {
        edges.push((i, (i + 1) % k));
    }
    let mut chords: Vec<(usize, usize)> = Vec::new();
    for _ in 0..rng.gen_range(0..=3usize) {
        let a = rng.gen_range(0..k);
        let b = rng.gen_range(0..k);
        let (a, b) = (a.min(b), a.max(b));
        if b - a <= 1 || (a == 0 && b == k - 1) {
            continue;
        }
        let crosses = chords
            .iter()
            .any(|&(c, e)| (c < a && a < e && e < b) || (a < c && c < b && b < e));
        if !crosses && !chords.contains(&(a, b)) {
            chords.push((a, b));
        }
    }
    edges.extend(chords);
    let voltage_edge = rng.gen_range(0..edges.len());
    let unit = match p {
        2 => *[1i64, -1, 3].get(rng.gen_range(0..3)).unwrap(),
        _ => *[1i64, -1, 2].get(rng.gen_range(0..3)).unwrap(),
    };
    SpecFile {
        p,
        d: 1,
        vertices: (0..k).map(|i| format!("v{i}")).collect(),
        edges: edges
            .iter()
            .enumerate()
            .map(|(idx, &(a, b))| EdgeSpec {
                id: format!("e{idx}"),
                from: format!("v{a}"),
                to: format!("v{b}"),
                voltage: vec![if idx == voltage_edge { unit } else { 0 }],
            })
            .collect(),
        inertia: BTreeMap::new(),
        embedding: None,
        layer_embeddings: BTreeMap::new(),
    }
}

/// Criterion 8: for 25 randomized connected planar single-voltage unramified
/// towers (d = 1), the characteristic element is divisible by T².
#[test]
fn criterion_8_t_divisibility() {
    let mut rng = StdRng::seed_from_u64(0x5EED_CAFE);
    for case in 0..25 {
        let file = random_planar_single_voltage(&mut rng);
        let spec = file.to_tower().expect("random spec builds");
        let c = char_element(&spec).expect("torsion char");
        assert!(
            c.poly.terms().all(|(e, _)| e[0] >= 2),
            "case {case}: char {} not divisible by T²",
            c.poly
        );
        // Equivalently char(Jac) is divisible by T.
        let jac = char_of_jacobian(&c, 1, spec.group().p()).expect("T divides char(Pic)");
        assert!(jac.poly.terms().all(|(e, _)| e[0] >= 1));
    }
    println!("ACCEPTANCE 8 T-divisibility: PASS (25 random planar towers)");
}

/// Criterion 9: property suites — order multiplicativity, Kirchhoff,
/// brute-force spanning trees, SNF vs det, double duality, free Galois
/// action.
#[test]
fn criterion_9_property_suites() {
    // s_{n+1} = p·s_n over 200 random cases.
    let mut rng = StdRng::seed_from_u64(42);
    let mut grown = 0;
    for _ in 0..200 {
        let p = *[2u64, 3, 5].get(rng.gen_range(0..3)).unwrap();
        let d = rng.gen_range(1..=3usize);
        let group = GroupSpec::new(p, d).unwrap();
        let sigma: Vec<i64> = (0..d).map(|_| rng.gen_range(-50i64..=50)).collect();
        if sigma.iter().all(|&x| x == 0) {
            continue;
        }
        let n = rng.gen_range(0..=6u32);
        let s_n = element_order_in_layer(&group, &sigma, n).unwrap();
        let s_n1 = element_order_in_layer(&group, &sigma, n + 1).unwrap();
        if s_n != 1 {
            assert_eq!(s_n1, p * s_n, "p={p} sigma={sigma:?} n={n}");
            grown += 1;
        }
    }
    assert!(grown >= 100, "the sample should hit the growing case often");

    // Kirchhoff cross-check on every corpus graph (bases and small layers).
    let mut corpus_graphs: Vec<(String, Graph)> = Vec::new();
    for entry in corpus::entries() {
        let spec = entry.file.to_tower().unwrap();
        corpus_graphs.push((format!("{} base", entry.name), spec.base().clone()));
        for n in 1..=2u32 {
            if spec.projected_vertex_count(n) <= 120 {
                let layer = build_layer(&spec, n).unwrap();
                if layer.graph.is_connected() {
                    corpus_graphs.push((format!("{} layer {n}", entry.name), layer.graph));
                }
            }
        }
    }
    for (name, g) in &corpus_graphs {
        let j = jacobian_invariants(g).unwrap();
        assert_eq!(j.torsion_order(), kappa(g).unwrap(), "Kirchhoff on {name}");
    }

    // Brute-force spanning-tree agreement for graphs with <= 7 edges.
    let mut small_checked = 0;
    for (name, g) in &corpus_graphs {
        if g.edge_count() <= 7 && g.vertex_count() >= 2 {
            assert_eq!(
                kappa(g).unwrap(),
                BigUint::from(spanning_tree_oracle(g)),
                "oracle on {name}"
            );
            small_checked += 1;
        }
    }
    let mut b = GraphBuilder::new();
    for v in ["a", "b", "c", "d"] {
        b.vertex(v);
    }
    for (i, (x, y)) in
        [("a", "b"), ("a", "c"), ("a", "d"), ("b", "c"), ("b", "d"), ("c", "d")]
            .iter()
            .enumerate()
    {
        b.edge(&format!("k{i}"), x, y);
    }
    let k4 = b.build();
    assert_eq!(kappa(&k4).unwrap(), BigUint::from(spanning_tree_oracle(&k4)));
    assert_eq!(spanning_tree_oracle(&k4), 16);
    assert!(small_checked >= 8);

    // SNF invariant-factor product equals |det|.
    let mut rng = StdRng::seed_from_u64(7);
    for _ in 0..50 {
        let n = 5;
        let m = IntMatrix::from_rows(
            (0..n)
                .map(|_| (0..n).map(|_| num_bigint::BigInt::from(rng.gen_range(-9i64..=9))).collect())
                .collect(),
        );
        let det = determinant(&m).unwrap();
        let diag = smith_normal_form(&m);
        if num_traits::Zero::is_zero(&det) {
            assert!(diag.iter().any(num_traits::Zero::is_zero));
        } else {
            let prod: num_bigint::BigInt = diag.iter().product();
            assert_eq!(prod, num_traits::Signed::abs(&det));
        }
    }

    // Double-dual isomorphism on every planar corpus embedding.
    let mut duals_checked = 0;
    for entry in corpus::entries() {
        let spec = entry.file.to_tower().unwrap();
        let Some((emb, outer)) = entry.file.base_embedding(&spec).unwrap() else { continue };
        assert!(double_dual_isomorphic(&emb), "{} base", entry.name);
        duals_checked += 1;
        let single = spec
            .base()
            .canonical_darts()
            .filter(|&d| spec.voltage(d).iter().any(|&x| x != 0))
            .count()
            == 1;
        if single {
            for n in 1..=2u32 {
                let (_, layer_emb) = derived_embedding(&spec, &emb, outer, n).unwrap();
                assert!(double_dual_isomorphic(&layer_emb), "{} layer {n}", entry.name);
                duals_checked += 1;
            }
        }
    }
    assert!(duals_checked >= 20);

    // Free action without inversion on all corpus layers.
    for entry in corpus::entries() {
        let spec = entry.file.to_tower().unwrap();
        for n in 1..=2u32 {
            if spec.projected_vertex_count(n) > 120 {
                continue;
            }
            let layer = build_layer(&spec, n).unwrap();
            for i in 0..spec.group().d() {
                let mut g = vec![0i64; spec.group().d()];
                g[i] = 1;
                let act = galois_act(&layer, &g).unwrap();
                for dart in 0..layer.graph.dart_count() {
                    assert_ne!(act.dart_map[dart], dart, "{} free", entry.name);
                    assert_ne!(
                        act.dart_map[dart],
                        layer.graph.partner(dart),
                        "{} no inversion",
                        entry.name
                    );
                }
            }
        }
    }
    println!(
        "ACCEPTANCE 9 property suites: PASS ({} graphs Kirchhoff, {} small oracles, \
         {} double duals, 200 order cases)",
        corpus_graphs.len(),
        small_checked + 1,
        duals_checked
    );
}

/// Brute-force spanning-tree count by enumerating (n-1)-edge subsets.
fn spanning_tree_oracle(g: &Graph) -> u64 {
    let edges: Vec<(usize, usize)> = g
        .canonical_darts()
        .map(|d| (g.dart(d).origin, g.dart(d).terminus))
        .collect();
    let n = g.vertex_count();
    let k = n - 1;
    let m = edges.len();
    if m < k {
        return 0;
    }
    let mut count = 0;
    let mut pick: Vec<usize> = (0..k).collect();
    loop {
        let mut parent: Vec<usize> = (0..n).collect();
        fn find(p: &mut [usize], mut x: usize) -> usize {
            while p[x] != x {
                p[x] = p[p[x]];
                x = p[x];
            }
            x
        }
        let mut ok = true;
        for &i in &pick {
            let (a, b) = edges[i];
            let (ra, rb) = (find(&mut parent, a), find(&mut parent, b));
            if ra == rb {
                ok = false;
                break;
            }
            parent[ra] = rb;
        }
        if ok {
            count += 1;
        }
        let mut i = k;
        loop {
            if i == 0 {
                return count;
            }
            i -= 1;
            if pick[i] != i + m - k {
                pick[i] += 1;
                for j in (i + 1)..k {
                    pick[j] = pick[j - 1] + 1;
                }
                break;
            }
        }
    }
}

fn double_dual_isomorphic(e: &Embedding) -> bool {
    let d1 = dual(e).unwrap();
    let d2 = dual(&d1.embedding).unwrap();
    let g1 = e.graph();
    let g2 = d2.graph();
    if g1.vertex_count() != g2.vertex_count() || g1.dart_count() != g2.dart_count() {
        return false;
    }
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

/// The to_poly round trip γ_i − 1 ↦ T_i recovers the cleared input; spot
/// check on the corpus determinants.
#[test]
fn char_round_trip_on_corpus() {
    for entry in corpus::entries() {
        let spec = entry.file.to_tower().unwrap();
        let det = zptower::iwasawa::det_laurent(&zptower::iwasawa::matrix_d_minus_b(&spec))
            .unwrap();
        let (poly, clearing) = to_poly(&det);
        let clear = zptower::iwasawa::LaurentElement::monomial(
            spec.group().d(),
            &clearing.iter().map(|&k| k as i64).collect::<Vec<_>>(),
            num_bigint::BigInt::from(1),
        );
        assert_eq!(poly.to_laurent(), det.mul(&clear), "{}", entry.name);
    }
}
