//! Serialization: JSON instance documents (rationals as `"p/q"` or decimal
//! strings — JSON floats would break exactness), a whitespace edge-list
//! format for quick generation, banking-network documents, and JSON views
//! of traces, solve reports and cascade results.

use std::collections::BTreeMap;

use serde::{Deserialize, Serialize};
use serde_json::{json, Value};

use crate::cascade::ActivationTrace;
use crate::contagion::{BankingNetwork, CascadeResult};
use crate::error::{Error, Result};
use crate::graph::{MultiInstance, WeightedInstance};
use crate::rational::Rational;
use crate::reduction::GadgetMap;
use crate::solvers::SolveReport;

pub const FORMAT_VERSION: &str = "1";

fn default_version() -> String {
    FORMAT_VERSION.to_string()
}

#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct VertexDoc {
    pub id: String,
    pub threshold: Rational,
}

#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct EdgeDoc {
    pub from: String,
    pub to: String,
    pub weight: Rational,
}

/// On-disk instance: labeled vertices with thresholds plus weighted edges.
/// Canonical serialization sorts vertices by label; parse/serialize/parse
/// is the identity on canonical documents.
#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct InstanceDocument {
    #[serde(default = "default_version")]
    pub version: String,
    #[serde(default)]
    pub directed: bool,
    pub vertices: Vec<VertexDoc>,
    #[serde(default)]
    pub edges: Vec<EdgeDoc>,
}

fn json_err(err: serde_json::Error) -> Error {
    Error::Parse(format!(
        "malformed JSON at line {}, column {}: {err}",
        err.line(),
        err.column()
    ))
}

/// Label table: dense ids assigned in label sort order.
pub fn label_table(labels: Vec<String>) -> Result<Vec<String>> {
    let mut sorted = labels;
    sorted.sort();
    for pair in sorted.windows(2) {
        if pair[0] == pair[1] {
            return Err(Error::Parse(format!("duplicate vertex id {:?}", pair[0])));
        }
    }
    Ok(sorted)
}

pub fn resolve_label(labels: &[String], name: &str) -> Result<usize> {
    labels
        .binary_search_by(|l| l.as_str().cmp(name))
        .map_err(|_| Error::Parse(format!("unknown vertex id {name:?}")))
}

pub fn parse_instance(text: &str) -> Result<(WeightedInstance, Vec<String>)> {
    let doc: InstanceDocument = serde_json::from_str(text).map_err(json_err)?;
    instance_from_document(&doc)
}

pub fn instance_from_document(doc: &InstanceDocument) -> Result<(WeightedInstance, Vec<String>)> {
    if doc.version != FORMAT_VERSION {
        return Err(Error::Parse(format!(
            "unsupported document version {:?}",
            doc.version
        )));
    }
    let labels = label_table(doc.vertices.iter().map(|v| v.id.clone()).collect())?;
    let mut thresholds = vec![Rational::zero(); labels.len()];
    for v in &doc.vertices {
        let id = resolve_label(&labels, &v.id)?;
        thresholds[id] = v.threshold.clone();
    }
    let mut edges = Vec::with_capacity(doc.edges.len());
    for (i, e) in doc.edges.iter().enumerate() {
        let u = resolve_label(&labels, &e.from)
            .map_err(|err| Error::Parse(format!("edges[{i}]: {err}")))?;
        let v = resolve_label(&labels, &e.to)
            .map_err(|err| Error::Parse(format!("edges[{i}]: {err}")))?;
        edges.push((u, v, e.weight.clone()));
    }
    let inst = WeightedInstance::new(labels.len(), doc.directed, edges, thresholds)
        .map_err(|e| Error::Parse(e.to_string()))?;
    Ok((inst, labels))
}

pub fn instance_to_document(inst: &WeightedInstance, labels: &[String]) -> InstanceDocument {
    InstanceDocument {
        version: FORMAT_VERSION.to_string(),
        directed: inst.directed(),
        vertices: (0..inst.n())
            .map(|v| VertexDoc {
                id: labels[v].clone(),
                threshold: inst.threshold(v).clone(),
            })
            .collect(),
        edges: inst
            .edges()
            .iter()
            .map(|e| EdgeDoc {
                from: labels[e.u].clone(),
                to: labels[e.v].clone(),
                weight: e.weight.clone(),
            })
            .collect(),
    }
}

pub fn serialize_instance(inst: &WeightedInstance, labels: &[String]) -> String {
    let doc = instance_to_document(inst, labels);
    let mut out = serde_json::to_string_pretty(&doc).expect("documents serialize");
    out.push('\n');
    out
}

/// Whitespace edge-list: `u v w` per edge, `t v tau` per threshold
/// (default 0), `#` comments. The first token `t` is reserved, so a vertex
/// cannot be labeled `t`. A line consisting of `directed` switches arc
/// semantics on.
pub fn parse_edge_list(text: &str) -> Result<(WeightedInstance, Vec<String>)> {
    let mut names: Vec<String> = Vec::new();
    let mut edges_raw: Vec<(String, String, Rational)> = Vec::new();
    let mut taus_raw: BTreeMap<String, Rational> = BTreeMap::new();
    let mut directed = false;

    let note = |name: &str, names: &mut Vec<String>| {
        if !names.iter().any(|n| n == name) {
            names.push(name.to_string());
        }
    };
    for (lineno, raw) in text.lines().enumerate() {
        let line = raw.split('#').next().unwrap_or("").trim();
        if line.is_empty() {
            continue;
        }
        let err = |msg: String| Error::Parse(format!("line {}: {msg}", lineno + 1));
        let tokens: Vec<&str> = line.split_whitespace().collect();
        if tokens == ["directed"] {
            directed = true;
            continue;
        }
        if tokens.len() != 3 {
            return Err(err(format!("expected 3 fields, got {}", tokens.len())));
        }
        if tokens[0] == "t" {
            let tau: Rational = tokens[2].parse().map_err(|e| err(format!("{e}")))?;
            if taus_raw.insert(tokens[1].to_string(), tau).is_some() {
                return Err(err(format!("duplicate threshold for {:?}", tokens[1])));
            }
            note(tokens[1], &mut names);
        } else {
            let w: Rational = tokens[2].parse().map_err(|e| err(format!("{e}")))?;
            edges_raw.push((tokens[0].to_string(), tokens[1].to_string(), w));
            note(tokens[0], &mut names);
            note(tokens[1], &mut names);
        }
    }
    let labels = label_table(names)?;
    let mut thresholds = vec![Rational::zero(); labels.len()];
    for (name, tau) in taus_raw {
        thresholds[resolve_label(&labels, &name)?] = tau;
    }
    let edges = edges_raw
        .into_iter()
        .map(|(u, v, w)| Ok((resolve_label(&labels, &u)?, resolve_label(&labels, &v)?, w)))
        .collect::<Result<Vec<_>>>()?;
    let inst = WeightedInstance::new(labels.len(), directed, edges, thresholds)
        .map_err(|e| Error::Parse(e.to_string()))?;
    Ok((inst, labels))
}

// ---------------------------------------------------------------------------
// banking networks
// ---------------------------------------------------------------------------

#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct InstitutionDoc {
    pub id: String,
    pub capital: Rational,
    pub recovery: Rational,
}

#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct ExposureDoc {
    pub creditor: String,
    pub debtor: String,
    pub amount: Rational,
}

#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct NetworkDocument {
    pub institutions: Vec<InstitutionDoc>,
    #[serde(default)]
    pub exposures: Vec<ExposureDoc>,
}

pub fn parse_network(text: &str) -> Result<(BankingNetwork, Vec<String>)> {
    let doc: NetworkDocument = serde_json::from_str(text).map_err(json_err)?;
    let labels = label_table(doc.institutions.iter().map(|i| i.id.clone()).collect())?;
    let n = labels.len();
    let mut capital = vec![Rational::zero(); n];
    let mut recovery = vec![Rational::zero(); n];
    for inst in &doc.institutions {
        let id = resolve_label(&labels, &inst.id)?;
        capital[id] = inst.capital.clone();
        recovery[id] = inst.recovery.clone();
    }
    let mut exposures = vec![vec![Rational::zero(); n]; n];
    let mut seen = std::collections::BTreeSet::new();
    for (i, e) in doc.exposures.iter().enumerate() {
        let c = resolve_label(&labels, &e.creditor)
            .map_err(|err| Error::Parse(format!("exposures[{i}]: {err}")))?;
        let d = resolve_label(&labels, &e.debtor)
            .map_err(|err| Error::Parse(format!("exposures[{i}]: {err}")))?;
        if c == d {
            return Err(Error::Parse(format!("exposures[{i}]: self-exposure of {:?}", e.creditor)));
        }
        if !seen.insert((c, d)) {
            return Err(Error::Parse(format!(
                "exposures[{i}]: duplicate exposure {:?} -> {:?}",
                e.creditor, e.debtor
            )));
        }
        exposures[c][d] = e.amount.clone();
    }
    let net = BankingNetwork::new(exposures, capital, recovery)
        .map_err(|e| Error::Parse(e.to_string()))?;
    Ok((net, labels))
}

// ---------------------------------------------------------------------------
// JSON views
// ---------------------------------------------------------------------------

fn rational_value(r: &Rational, approx: bool) -> Value {
    if approx {
        json!(r.to_f64())
    } else {
        json!(r.to_string())
    }
}

fn label_list(ids: &[usize], labels: &[String]) -> Value {
    json!(ids.iter().map(|&v| labels[v].clone()).collect::<Vec<_>>())
}

pub fn trace_json(trace: &ActivationTrace, labels: &[String]) -> Value {
    json!({
        "phases": trace.phases().iter().map(|p| label_list(p, labels)).collect::<Vec<_>>(),
        "rounds": trace.rounds(),
        "fixpoint": label_list(trace.fixpoint(), labels),
        "complete": trace.is_complete(),
    })
}

pub fn report_json(report: &SolveReport, labels: &[String]) -> Value {
    json!({
        "method": report.method.as_str(),
        "monopoly": label_list(&report.monopoly, labels),
        "size": report.size(),
        "certified_minimum": report.certified_minimum,
        "rng_seed": report.rng_seed,
        "trace": trace_json(&report.trace, labels),
    })
}

pub fn cascade_result_json(result: &CascadeResult, labels: &[String], approx: bool) -> Value {
    let capitals: Vec<Value> = labels
        .iter()
        .enumerate()
        .map(|(j, label)| {
            json!({
                "id": label,
                "sequence": result
                    .capitals
                    .iter()
                    .map(|round| rational_value(&round[j], approx))
                    .collect::<Vec<_>>(),
                "first_default_round": result.first_default_round(j),
            })
        })
        .collect();
    json!({
        "insolvent": label_list(&result.insolvent, labels),
        "capitals": capitals,
    })
}

/// Serialize a multigraph as a standard instance document (multiplicities
/// as integer weights); activation behaviour is identical.
pub fn multigraph_to_document(m: &MultiInstance, labels: &[String]) -> InstanceDocument {
    InstanceDocument {
        version: FORMAT_VERSION.to_string(),
        directed: m.directed(),
        vertices: (0..m.n())
            .map(|v| VertexDoc {
                id: labels[v].clone(),
                threshold: Rational::from_integer(m.threshold(v)),
            })
            .collect(),
        edges: m
            .pairs()
            .iter()
            .map(|&(u, v, mult)| EdgeDoc {
                from: labels[u].clone(),
                to: labels[v].clone(),
                weight: Rational::from_integer(mult),
            })
            .collect(),
    }
}

pub fn multigraph_map_json(scale: u64, labels: &[String]) -> Value {
    json!({
        "kind": "multigraph",
        "scale": scale.to_string(),
        "vertices": labels,
    })
}

/// Labels for a gadget graph: originals keep theirs, middles are named
/// `<u>~<v>~<k>`.
pub fn gadget_labels(map: &GadgetMap, labels: &[String]) -> Result<Vec<String>> {
    let mut out: Vec<String> = labels.to_vec();
    let mut by_id: Vec<(usize, String)> = Vec::new();
    for (&(u, v), mids) in &map.middles {
        for (k, &mid) in mids.iter().enumerate() {
            by_id.push((mid, format!("{}~{}~{}", labels[u], labels[v], k + 1)));
        }
    }
    by_id.sort();
    for (mid, name) in by_id {
        debug_assert_eq!(mid, out.len());
        out.push(name);
    }
    let mut check = out.clone();
    check.sort();
    for pair in check.windows(2) {
        if pair[0] == pair[1] {
            return Err(Error::Parse(format!(
                "generated middle label {:?} collides with an existing vertex id",
                pair[0]
            )));
        }
    }
    Ok(out)
}

pub fn gadget_map_json(map: &GadgetMap, labels: &[String], gadget_labels: &[String]) -> Value {
    let middles: BTreeMap<String, Vec<String>> = map
        .middles
        .iter()
        .map(|(&(u, v), mids)| {
            (
                format!("{}~{}", labels[u], labels[v]),
                mids.iter().map(|&m| gadget_labels[m].clone()).collect(),
            )
        })
        .collect();
    json!({
        "kind": "gadget",
        "scale": map.scale.to_string(),
        "originals": labels,
        "middles": middles,
    })
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn parses_the_schema_example() {
        let text = r#"{"directed":false,
            "vertices":[{"id":"a","threshold":"1"},{"id":"b","threshold":"1/2"}],
            "edges":[{"from":"a","to":"b","weight":"3/2"}]}"#;
        let (inst, labels) = parse_instance(text).unwrap();
        assert_eq!(labels, vec!["a", "b"]);
        assert_eq!(inst.n(), 2);
        assert_eq!(inst.edges()[0].weight, Rational::new(3, 2).unwrap());
        assert_eq!(inst.threshold(1), &Rational::new(1, 2).unwrap());
    }

    #[test]
    fn duplicate_edges_are_a_parse_error() {
        let text = r#"{"vertices":[{"id":"a","threshold":"0"},{"id":"b","threshold":"0"}],
            "edges":[{"from":"a","to":"b","weight":"1"},{"from":"b","to":"a","weight":"1"}]}"#;
        assert!(matches!(parse_instance(text), Err(Error::Parse(_))));
    }

    #[test]
    fn decimal_weights_parse_exactly() {
        let text = r#"{"vertices":[{"id":"a","threshold":"0"},{"id":"b","threshold":"0"}],
            "edges":[{"from":"a","to":"b","weight":"0.25"}]}"#;
        let (inst, _) = parse_instance(text).unwrap();
        assert_eq!(inst.edges()[0].weight, Rational::new(1, 4).unwrap());
    }

    #[test]
    fn unknown_labels_are_located() {
        let text = r#"{"vertices":[{"id":"a","threshold":"0"}],
            "edges":[{"from":"a","to":"zzz","weight":"1"}]}"#;
        match parse_instance(text) {
            Err(Error::Parse(msg)) => assert!(msg.contains("edges[0]") && msg.contains("zzz")),
            other => panic!("expected parse error, got {other:?}"),
        }
    }

    #[test]
    fn negative_weight_is_rejected() {
        let text = r#"{"vertices":[{"id":"a","threshold":"0"},{"id":"b","threshold":"0"}],
            "edges":[{"from":"a","to":"b","weight":"-1"}]}"#;
        assert!(parse_instance(text).is_err());
    }

    #[test]
    fn serialization_roundtrips() {
        let text = r#"{"directed":true,
            "vertices":[{"id":"y","threshold":"2/3"},{"id":"x","threshold":"0.5"}],
            "edges":[{"from":"y","to":"x","weight":"7"}]}"#;
        let (inst, labels) = parse_instance(text).unwrap();
        let canonical = serialize_instance(&inst, &labels);
        let (inst2, labels2) = parse_instance(&canonical).unwrap();
        assert_eq!(labels, labels2);
        assert_eq!(inst.edges(), inst2.edges());
        assert_eq!(inst.thresholds(), inst2.thresholds());
        assert_eq!(serialize_instance(&inst2, &labels2), canonical);
    }

    #[test]
    fn edge_list_parses_edges_and_thresholds() {
        let text = "# a small path\na b 1/2\nb c 1\nt b 1/2\nt c 1\ndirected\n";
        let (inst, labels) = parse_edge_list(text).unwrap();
        assert!(inst.directed());
        assert_eq!(labels, vec!["a", "b", "c"]);
        assert_eq!(inst.threshold(1), &Rational::new(1, 2).unwrap());
        assert_eq!(inst.threshold(0), &Rational::zero());
    }

    #[test]
    fn edge_list_rejects_duplicate_thresholds() {
        assert!(parse_edge_list("t a 1\nt a 2\n").is_err());
    }

    #[test]
    fn network_document_roundtrip() {
        let text = r#"{
            "institutions":[
                {"id":"A","capital":"0","recovery":"0.4"},
                {"id":"B","capital":"5","recovery":"0"}
            ],
            "exposures":[{"creditor":"B","debtor":"A","amount":"10"}]
        }"#;
        let (net, labels) = parse_network(text).unwrap();
        assert_eq!(labels, vec!["A", "B"]);
        assert_eq!(net.exposure(1, 0), &Rational::from_integer(10));
        assert_eq!(net.recovery(0), &Rational::new(2, 5).unwrap());
        let result = crate::contagion::loss_cascade(&net);
        assert_eq!(result.insolvent, vec![0, 1]);
    }

    #[test]
    fn gadget_labels_are_deterministic() {
        let g = WeightedInstance::new(
            2,
            false,
            vec![(0, 1, Rational::new(3, 2).unwrap())],
            vec![Rational::one(), Rational::one()],
        )
        .unwrap();
        let (_, map) = crate::reduction::gadget(&g).unwrap();
        let labels = vec!["a".to_string(), "b".to_string()];
        let all = gadget_labels(&map, &labels).unwrap();
        assert_eq!(all, vec!["a", "b", "a~b~1", "a~b~2"]);
    }
}
