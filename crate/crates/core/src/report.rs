//! Full analysis of one algebra and its canonical JSON report.
//!
//! The report is emitted from typed structs with a fixed field order, so the
//! same input always produces byte-identical output. All indices are
//! one-based in the report; scalars are exact rationals rendered as strings.

use crate::algebra::EvolutionAlgebra;
use crate::classify3::{classify, TypeMatch};
use crate::graph::{associated_graph, graph_properties, DirectedGraph, GraphProperties};
use crate::rational::format_rational;
use crate::solver::{assemble_constraints, nullspace, DerivationSpace};
use crate::structural::{infer_zero_pattern, WitnessValue, ZeroPattern};
use crate::twin::{twin_partition, TwinPartition};
use num::Zero;
use serde::Serialize;

/// Everything the library can say about one algebra, computed in one pass.
#[derive(Debug, Clone)]
pub struct Analysis {
    pub algebra: EvolutionAlgebra,
    pub graph: DirectedGraph,
    pub properties: GraphProperties,
    pub partition: TwinPartition,
    pub pattern: ZeroPattern,
    pub space: DerivationSpace,
    /// Present exactly for three-dimensional algebras.
    pub classification: Option<TypeMatch>,
}

pub fn analyze(a: &EvolutionAlgebra) -> Analysis {
    let graph = associated_graph(a);
    let properties = graph_properties(&graph);
    let partition = twin_partition(&graph);
    let pattern = infer_zero_pattern(a);
    let space = nullspace(&assemble_constraints(a));
    let classification = (a.dimension() == 3).then(|| classify(a));
    Analysis {
        algebra: a.clone(),
        graph,
        properties,
        partition,
        pattern,
        space,
        classification,
    }
}

/// True when no structural zero-certificate contradicts the solved space:
/// every proven cell is zero in every basis element.
pub fn consistency(analysis: &Analysis) -> bool {
    analysis.pattern.certificates().all(|c| {
        analysis
            .space
            .basis
            .iter()
            .all(|b| b.entry(c.row, c.col).is_zero())
    })
}

#[derive(Serialize)]
pub(crate) struct Report {
    dimension: usize,
    structure_matrix: Vec<Vec<String>>,
    graph: Vec<Vec<u8>>,
    sinks: Vec<usize>,
    connected: bool,
    non_degenerate: bool,
    twin_partition: Vec<ClassReport>,
    twin_free: bool,
    zero_certificates: Vec<CertificateReport>,
    derivation_dimension: usize,
    basis: Vec<Vec<Vec<String>>>,
    #[serde(skip_serializing_if = "Option::is_none")]
    classification: Option<ClassificationReport>,
    #[serde(skip_serializing_if = "Option::is_none")]
    consistent: Option<bool>,
}

#[derive(Serialize)]
struct ClassReport {
    members: Vec<usize>,
    with_loop: Vec<usize>,
    without_loop: Vec<usize>,
}

#[derive(Serialize)]
struct CertificateReport {
    row: usize,
    col: usize,
    rule: &'static str,
    witnesses: Vec<WitnessReport>,
}

#[derive(Serialize)]
struct WitnessReport {
    label: &'static str,
    value: serde_json::Value,
}

#[derive(Serialize)]
#[serde(tag = "kind", rename_all = "snake_case")]
pub(crate) enum ClassificationReport {
    Type { id: u8, assignment: AssignmentReport },
    TwinFree,
    NotApplicable { reason: String },
}

#[derive(Serialize)]
pub(crate) struct AssignmentReport {
    i: usize,
    j: usize,
    k: usize,
}

/// One-based rendering of a classification verdict.
pub(crate) fn classification_report(m: &TypeMatch) -> ClassificationReport {
    match m {
        TypeMatch::Type { id, assignment } => ClassificationReport::Type {
            id: *id,
            assignment: AssignmentReport {
                i: assignment.i + 1,
                j: assignment.j + 1,
                k: assignment.k + 1,
            },
        },
        TypeMatch::TwinFree => ClassificationReport::TwinFree,
        TypeMatch::NotApplicable { reason } => {
            ClassificationReport::NotApplicable { reason: reason.clone() }
        }
    }
}

fn one_based(indices: &[usize]) -> Vec<usize> {
    indices.iter().map(|&v| v + 1).collect()
}

fn witness_value(value: &WitnessValue) -> serde_json::Value {
    match value {
        WitnessValue::Index(v) => serde_json::json!(v + 1),
        WitnessValue::Indices(vs) => serde_json::json!(one_based(vs)),
        WitnessValue::Cell(r, c) => serde_json::json!([r + 1, c + 1]),
        WitnessValue::Scalar(q) => serde_json::json!(format_rational(q)),
    }
}

fn matrix_strings(rows: &[Vec<crate::rational::Rational>]) -> Vec<Vec<String>> {
    rows.iter()
        .map(|r| r.iter().map(format_rational).collect())
        .collect()
}

pub(crate) fn build_report(analysis: &Analysis, include_consistency: bool) -> Report {
    let n = analysis.algebra.dimension();
    let classification = analysis.classification.as_ref().map(classification_report);
    Report {
        dimension: n,
        structure_matrix: matrix_strings(analysis.algebra.rows()),
        graph: (0..n)
            .map(|i| (0..n).map(|j| analysis.graph.has_arrow(i, j) as u8).collect())
            .collect(),
        sinks: one_based(&analysis.properties.sinks),
        connected: analysis.properties.connected,
        non_degenerate: analysis.properties.non_degenerate,
        twin_partition: analysis
            .partition
            .classes
            .iter()
            .map(|c| ClassReport {
                members: one_based(&c.members),
                with_loop: one_based(&c.with_loop),
                without_loop: one_based(&c.without_loop),
            })
            .collect(),
        twin_free: analysis.partition.is_twin_free(),
        zero_certificates: analysis
            .pattern
            .certificates()
            .map(|c| CertificateReport {
                row: c.row + 1,
                col: c.col + 1,
                rule: c.rule.name(),
                witnesses: c
                    .witnesses
                    .iter()
                    .map(|w| WitnessReport { label: w.label, value: witness_value(&w.value) })
                    .collect(),
            })
            .collect(),
        derivation_dimension: analysis.space.dimension,
        basis: analysis
            .space
            .basis
            .iter()
            .map(|b| matrix_strings(b.rows()))
            .collect(),
        classification,
        consistent: include_consistency.then(|| consistency(analysis)),
    }
}

/// Renders the canonical report. `include_consistency` adds the final
/// cross-check field; it is set by callers that promise to compare the
/// certificates against the solved space.
pub fn emit_report(analysis: &Analysis, include_consistency: bool) -> String {
    serde_json::to_string_pretty(&build_report(analysis, include_consistency))
        .expect("report serialization cannot fail")
}
