//! Deterministic JSON reports over a parsed spec, shared by the CLI and the
//! C bindings. Failure codes follow the CLI exit-code map: 2 parse,
//! 3 disconnected, 4 non-torsion, 5 inconsistency, 6 dual failure.

use crate::growth::{self, Slack, VERTEX_GUARDRAIL};
use crate::iwasawa::{char_element, char_of_jacobian, CharElement, CharError};
use crate::jacobian::{jacobian_invariants, kappa, ord_p};
use crate::planar::{derived_embedding, dual, dual_tower_check, DualTowerReport, Embedding};
use crate::specfile::SpecFile;
use crate::tower::{build_layer, is_connected_layer, LayerGraph, TowerSpec};
use serde_json::{json, Value};

pub const CODE_INTERNAL: u8 = 1;
pub const CODE_PARSE: u8 = 2;
pub const CODE_DISCONNECTED: u8 = 3;
pub const CODE_NON_TORSION: u8 = 4;
pub const CODE_INCONSISTENT: u8 = 5;
pub const CODE_DUAL: u8 = 6;

#[derive(Debug, Clone)]
pub struct Failure {
    pub code: u8,
    pub message: String,
}

impl std::fmt::Display for Failure {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        write!(f, "{}", self.message)
    }
}

fn fail(code: u8, message: impl Into<String>) -> Failure {
    Failure { code, message: message.into() }
}

/// Parses spec JSON into the file and the tower it denotes.
pub fn parse_spec(text: &str) -> Result<(SpecFile, TowerSpec), Failure> {
    let file = SpecFile::parse(text).map_err(|e| fail(CODE_PARSE, e.to_string()))?;
    let spec = file.to_tower().map_err(|e| fail(CODE_PARSE, e.to_string()))?;
    Ok((file, spec))
}

pub fn guard_layer(spec: &TowerSpec, n: u32) -> Result<(), Failure> {
    let projected = spec.projected_vertex_count(n);
    if projected > VERTEX_GUARDRAIL {
        return Err(fail(
            CODE_PARSE,
            format!(
                "layer {n} would have {projected} vertices, above the {VERTEX_GUARDRAIL} guardrail"
            ),
        ));
    }
    Ok(())
}

pub fn connected_layer(spec: &TowerSpec, n: u32) -> Result<LayerGraph, Failure> {
    guard_layer(spec, n)?;
    let layer = build_layer(spec, n).map_err(|e| fail(CODE_PARSE, e.to_string()))?;
    if !layer.graph.is_connected() {
        return Err(fail(CODE_DISCONNECTED, format!("layer {n} is disconnected")));
    }
    Ok(layer)
}

fn edge_list(g: &crate::graph::Graph) -> Vec<Value> {
    g.canonical_darts()
        .map(|d| {
            json!({
                "id": g.dart(d).name,
                "from": g.vertex_name(g.dart(d).origin),
                "to": g.vertex_name(g.dart(d).terminus),
            })
        })
        .collect()
}

pub fn layer_report(file: &SpecFile, spec: &TowerSpec, n: u32) -> Result<Value, Failure> {
    let layer = connected_layer(spec, n)?;
    let g = &layer.graph;
    Ok(json!({
        "p": file.p,
        "d": file.d,
        "n": n,
        "vertices": g.vertex_count(),
        "edges": g.edge_count(),
        "connected": g.is_connected(),
        "vertex_labels": g.vertex_names(),
        "edge_list": edge_list(g),
    }))
}

pub fn kappa_report(file: &SpecFile, spec: &TowerSpec, n: u32) -> Result<Value, Failure> {
    let layer = connected_layer(spec, n)?;
    let k = kappa(&layer.graph).map_err(|e| fail(CODE_DISCONNECTED, e.to_string()))?;
    let ord = ord_p(&k, file.p).map_err(|e| fail(CODE_INTERNAL, e.to_string()))?;
    Ok(json!({ "n": n, "kappa": k.to_string(), "ord_p": ord }))
}

pub fn jacobian_report(spec: &TowerSpec, n: u32) -> Result<Value, Failure> {
    let layer = connected_layer(spec, n)?;
    let j = jacobian_invariants(&layer.graph)
        .map_err(|e| fail(CODE_DISCONNECTED, e.to_string()))?;
    let factors: Vec<String> = j.invariant_factors().iter().map(|f| f.to_string()).collect();
    Ok(json!({
        "n": n,
        "invariant_factors": factors,
        "order": j.torsion_order().to_string(),
    }))
}

pub fn char_json(file: &SpecFile, c: &CharElement) -> Value {
    let poly: Vec<Value> = c
        .poly
        .terms_graded_lex()
        .into_iter()
        .map(|(e, coeff)| json!([e, coeff.to_string()]))
        .collect();
    json!({
        "p": file.p,
        "d": file.d,
        "poly": poly,
        "pretty": c.poly.to_string(),
        "mu": c.mu,
        "lambda": c.lambda,
        "clearing": c.clearing,
    })
}

/// Computes the characteristic element; the optional string is a warning when
/// the layer at the stabilization level is disconnected.
pub fn compute_char(spec: &TowerSpec) -> Result<(CharElement, Option<String>), Failure> {
    match char_element(spec) {
        Ok(c) => {
            let n0 = spec.stabilization_level();
            let mut warning = None;
            if spec.projected_vertex_count(n0) <= VERTEX_GUARDRAIL {
                if let Ok(false) = is_connected_layer(spec, n0) {
                    warning = Some(format!(
                        "layer {n0} (stabilization level) is disconnected; \
                         the characteristic element describes each tower component"
                    ));
                }
            }
            Ok((c, warning))
        }
        Err(CharError::NonTorsion) => Err(fail(
            CODE_NON_TORSION,
            "det(D - B) = 0: Picard module is not torsion over the Iwasawa algebra",
        )),
        Err(e) => Err(fail(CODE_INTERNAL, e.to_string())),
    }
}

pub fn char_report(file: &SpecFile, spec: &TowerSpec) -> Result<(Value, Option<String>), Failure> {
    let (c, warning) = compute_char(spec)?;
    Ok((char_json(file, &c), warning))
}

pub fn invariants_report(
    file: &SpecFile,
    spec: &TowerSpec,
) -> Result<(Value, Option<String>), Failure> {
    let (pic, warning) = compute_char(spec)?;
    let jac = char_of_jacobian(&pic, file.d, file.p)
        .map_err(|e| fail(CODE_INTERNAL, e.to_string()))?;
    Ok((
        json!({
            "char_pic": char_json(file, &pic),
            "char_jac": char_json(file, &jac),
        }),
        warning,
    ))
}

pub struct GrowthReport {
    pub verdict: growth::ConsistencyVerdict,
    pub json: Value,
    /// Auto slack downgrades a d >= 2 breach to a warning.
    pub auto_slack: bool,
}

pub fn growth_report(
    file: &SpecFile,
    spec: &TowerSpec,
    max_n: u32,
    slack: Slack,
) -> Result<GrowthReport, Failure> {
    let verdict = growth::consistency(spec, max_n, slack).map_err(|e| match e {
        growth::GrowthError::Disconnected { .. } => fail(CODE_DISCONNECTED, e.to_string()),
        growth::GrowthError::Char(CharError::NonTorsion) => {
            fail(CODE_NON_TORSION, e.to_string())
        }
        other => fail(CODE_PARSE, other.to_string()),
    })?;
    let rows: Vec<Value> = verdict
        .series
        .layers
        .iter()
        .map(|l| {
            json!({
                "n": l.n,
                "vertices": l.vertices,
                "edges": l.edges,
                "kappa_ord": l.kappa_ord,
                "residual": verdict.residuals.residuals[l.n as usize].to_string(),
            })
        })
        .collect();
    let verdict_json = json!({
        "p": file.p,
        "d": file.d,
        "predicted_mu": verdict.predicted_mu,
        "predicted_lambda": verdict.predicted_lambda,
        "char_jac": verdict.char_jac.poly.to_string(),
        "fit": verdict.fit.map(|f| json!({
            "mu": f.mu, "lambda": f.lambda, "nu": f.nu, "n0": f.n0,
        })),
        "slack": verdict.residuals.slack.to_string(),
        "consistent": verdict.consistent,
    });
    Ok(GrowthReport {
        json: json!({ "rows": rows, "verdict": verdict_json }),
        verdict,
        auto_slack: matches!(slack, Slack::Auto),
    })
}

pub struct DualReport {
    pub json: Value,
    pub report: DualTowerReport,
}

pub fn dual_report(file: &SpecFile, spec: &TowerSpec, n: u32) -> Result<DualReport, Failure> {
    let Some((base_emb, outer)) =
        file.base_embedding(spec).map_err(|e| fail(CODE_PARSE, e.to_string()))?
    else {
        return Err(fail(CODE_PARSE, "dual requires an embedding in the spec"));
    };
    guard_layer(spec, n)?;
    let explicit = file.layer_rotations().map_err(|e| fail(CODE_PARSE, e.to_string()))?;
    let report = dual_tower_check(spec, &base_emb, outer, n, &explicit)
        .map_err(|e| fail(CODE_DUAL, e.to_string()))?;
    let emb_n = match explicit.get(&n) {
        Some(rot) => {
            let layer = build_layer(spec, n).map_err(|e| fail(CODE_INTERNAL, e.to_string()))?;
            Embedding::from_labels(layer.graph.clone(), rot)
                .map_err(|e| fail(CODE_PARSE, e.to_string()))?
        }
        None => {
            derived_embedding(spec, &base_emb, outer, n)
                .map_err(|e| fail(CODE_DUAL, e.to_string()))?
                .1
        }
    };
    let dual_n = dual(&emb_n).map_err(|e| fail(CODE_DUAL, e.to_string()))?;
    let g = dual_n.graph();
    let layers: Vec<Value> = report
        .layers
        .iter()
        .map(|l| {
            json!({
                "n": l.n,
                "cover": match &l.cover {
                    Ok(c) => json!({
                        "sheets": c.sheet_count,
                        "ramification": c.ramification,
                    }),
                    Err(e) => json!({ "failure": e }),
                },
                "galois": match &l.galois_ok {
                    Ok(()) => json!("ok"),
                    Err(e) => json!({ "failure": e }),
                },
            })
        })
        .collect();
    let json = json!({
        "n": n,
        "dual_vertices": g.vertex_count(),
        "dual_edges": g.edge_count(),
        "dual_vertex_labels": g.vertex_names(),
        "dual_edge_list": edge_list(g),
        "report": {
            "layers": layers,
            "primal_ramified": report.primal_ramified,
            "dual_ramified": report.dual_ramified,
            "dual_totally_ramified": report.dual_totally_ramified,
            "ramified_count_ok": report.ramified_count_ok,
            "pass": report.pass,
        },
    });
    Ok(DualReport { json, report })
}
