//! JSON wire formats for lattices, graphs, morphisms, rules and step
//! bundles, plus DOT export. Serialization is deterministic: collections are
//! emitted in sorted id order.

use std::collections::BTreeMap;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::graph::{Graph, Morphism};
use crate::interop::{agree_rule, dpo_rule, pbpo_rule, AgreeRule, DpoRule, PbpoRule};
use crate::lattice::{Lattice, LatticeDescriptor, LatticeRef};
use crate::limits::pushout;
use crate::rewrite::{validate_rule, Rule, StepResult};

#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct VertexJson {
    pub id: String,
    pub label: String,
}

#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct EdgeJson {
    pub id: String,
    pub src: String,
    pub tgt: String,
    pub label: String,
}

/// A graph; the lattice may be omitted when an ambient one is in scope
/// (e.g. inside a rule file).
#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct GraphJson {
    #[serde(skip_serializing_if = "Option::is_none")]
    pub lattice: Option<LatticeDescriptor>,
    pub vertices: Vec<VertexJson>,
    pub edges: Vec<EdgeJson>,
}

/// A morphism as by-id maps; domain and codomain are positional in the
/// enclosing document.
#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct MorphismJson {
    pub vertices: BTreeMap<String, String>,
    pub edges: BTreeMap<String, String>,
}

pub fn graph_to_json(g: &Graph, include_lattice: bool) -> GraphJson {
    GraphJson {
        lattice: include_lattice.then(|| g.lattice.descriptor().clone()),
        vertices: g
            .vertices
            .iter()
            .map(|(id, label)| VertexJson { id: id.clone(), label: label.clone() })
            .collect(),
        edges: g
            .edges
            .iter()
            .map(|(id, e)| EdgeJson {
                id: id.clone(),
                src: e.src.clone(),
                tgt: e.tgt.clone(),
                label: e.label.clone(),
            })
            .collect(),
    }
}

pub fn graph_from_json(j: &GraphJson, ambient: Option<&LatticeRef>) -> Result<Graph> {
    let lattice = match (&j.lattice, ambient) {
        (Some(d), _) => Lattice::from_descriptor(d)?,
        (None, Some(l)) => l.clone(),
        (None, None) => {
            return Err(Error::MalformedGraph("graph has no lattice and none is in scope".into()))
        }
    };
    let vs: Vec<(&str, &str)> =
        j.vertices.iter().map(|v| (v.id.as_str(), v.label.as_str())).collect();
    let es: Vec<(&str, &str, &str, &str)> = j
        .edges
        .iter()
        .map(|e| (e.id.as_str(), e.src.as_str(), e.tgt.as_str(), e.label.as_str()))
        .collect();
    Graph::new(lattice, &vs, &es)
}

pub fn morphism_to_json(m: &Morphism) -> MorphismJson {
    MorphismJson { vertices: m.vmap.clone(), edges: m.emap.clone() }
}

pub fn morphism_from_json(j: &MorphismJson, dom: &Graph, cod: &Graph) -> Result<Morphism> {
    Morphism::new(dom.clone(), cod.clone(), j.vertices.clone(), j.edges.clone())
}

/// The five-object rule diagram. The bottom-right objects are optional on
/// input and recomputed (as the pushout of r along t_k) when requested.
#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct RuleJson {
    pub lattice: LatticeDescriptor,
    pub l: GraphJson,
    pub k: GraphJson,
    pub r: GraphJson,
    pub lp: GraphJson,
    pub kp: GraphJson,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub rp: Option<GraphJson>,
    pub morphisms: RuleMorphismsJson,
}

#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct RuleMorphismsJson {
    pub l: MorphismJson,
    pub r: MorphismJson,
    pub t_l: MorphismJson,
    pub t_k: MorphismJson,
    pub lp: MorphismJson,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub t_r: Option<MorphismJson>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub rp: Option<MorphismJson>,
}

pub fn rule_to_json(rule: &Rule) -> RuleJson {
    RuleJson {
        lattice: rule.l_graph.lattice.descriptor().clone(),
        l: graph_to_json(&rule.l_graph, false),
        k: graph_to_json(&rule.k_graph, false),
        r: graph_to_json(&rule.r_graph, false),
        lp: graph_to_json(&rule.lp_graph, false),
        kp: graph_to_json(&rule.kp_graph, false),
        rp: None,
        morphisms: RuleMorphismsJson {
            l: morphism_to_json(&rule.l),
            r: morphism_to_json(&rule.r),
            t_l: morphism_to_json(&rule.t_l),
            t_k: morphism_to_json(&rule.t_k),
            lp: morphism_to_json(&rule.lp),
            t_r: None,
            rp: None,
        },
    }
}

pub fn rule_from_json(j: &RuleJson) -> Result<Rule> {
    let lat = Lattice::from_descriptor(&j.lattice)?;
    let amb = Some(&lat);
    let l = graph_from_json(&j.l, amb)?;
    let k = graph_from_json(&j.k, amb)?;
    let r = graph_from_json(&j.r, amb)?;
    let lp = graph_from_json(&j.lp, amb)?;
    let kp = graph_from_json(&j.kp, amb)?;
    validate_rule(
        morphism_from_json(&j.morphisms.l, &k, &l)?,
        morphism_from_json(&j.morphisms.r, &k, &r)?,
        morphism_from_json(&j.morphisms.t_l, &l, &lp)?,
        morphism_from_json(&j.morphisms.t_k, &k, &kp)?,
        morphism_from_json(&j.morphisms.lp, &kp, &lp)?,
    )
}

/// A DPO span: interface K embedded in the pattern L, plus the replacement.
#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct DpoRuleJson {
    pub lattice: LatticeDescriptor,
    pub l: GraphJson,
    pub k: GraphJson,
    pub r: GraphJson,
    pub morphisms: DpoMorphismsJson,
}

#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct DpoMorphismsJson {
    pub l: MorphismJson,
    pub r: MorphismJson,
}

pub fn dpo_to_json(rule: &DpoRule) -> DpoRuleJson {
    DpoRuleJson {
        lattice: rule.l_graph.lattice.descriptor().clone(),
        l: graph_to_json(&rule.l_graph, false),
        k: graph_to_json(&rule.k_graph, false),
        r: graph_to_json(&rule.r_graph, false),
        morphisms: DpoMorphismsJson {
            l: morphism_to_json(&rule.l),
            r: morphism_to_json(&rule.r),
        },
    }
}

pub fn dpo_from_json(j: &DpoRuleJson) -> Result<DpoRule> {
    let lat = Lattice::from_descriptor(&j.lattice)?;
    let amb = Some(&lat);
    let l = graph_from_json(&j.l, amb)?;
    let k = graph_from_json(&j.k, amb)?;
    let r = graph_from_json(&j.r, amb)?;
    dpo_rule(
        morphism_from_json(&j.morphisms.l, &k, &l)?,
        morphism_from_json(&j.morphisms.r, &k, &r)?,
    )
}

/// An AGREE rule: a span plus the interface embedding t_k : K -> K'.
#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct AgreeRuleJson {
    pub lattice: LatticeDescriptor,
    pub l: GraphJson,
    pub k: GraphJson,
    pub r: GraphJson,
    pub kp: GraphJson,
    pub morphisms: AgreeMorphismsJson,
}

#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct AgreeMorphismsJson {
    pub l: MorphismJson,
    pub r: MorphismJson,
    pub t_k: MorphismJson,
}

pub fn agree_to_json(rule: &AgreeRule) -> AgreeRuleJson {
    AgreeRuleJson {
        lattice: rule.l_graph.lattice.descriptor().clone(),
        l: graph_to_json(&rule.l_graph, false),
        k: graph_to_json(&rule.k_graph, false),
        r: graph_to_json(&rule.r_graph, false),
        kp: graph_to_json(&rule.kp_graph, false),
        morphisms: AgreeMorphismsJson {
            l: morphism_to_json(&rule.l),
            r: morphism_to_json(&rule.r),
            t_k: morphism_to_json(&rule.t_k),
        },
    }
}

pub fn agree_from_json(j: &AgreeRuleJson) -> Result<AgreeRule> {
    let lat = Lattice::from_descriptor(&j.lattice)?;
    let amb = Some(&lat);
    let l = graph_from_json(&j.l, amb)?;
    let k = graph_from_json(&j.k, amb)?;
    let r = graph_from_json(&j.r, amb)?;
    let kp = graph_from_json(&j.kp, amb)?;
    agree_rule(
        morphism_from_json(&j.morphisms.l, &k, &l)?,
        morphism_from_json(&j.morphisms.r, &k, &r)?,
        morphism_from_json(&j.morphisms.t_k, &k, &kp)?,
    )
}

/// The full two-row rule diagram. The bottom-right objects (rp graph, t_r,
/// rp morphism) are optional and recomputed as pushout(r, t_k) if absent.
#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct PbpoRuleJson {
    pub lattice: LatticeDescriptor,
    pub l: GraphJson,
    pub k: GraphJson,
    pub r: GraphJson,
    pub lp: GraphJson,
    pub kp: GraphJson,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub rp: Option<GraphJson>,
    pub morphisms: RuleMorphismsJson,
}

pub fn pbpo_to_json(rule: &PbpoRule) -> PbpoRuleJson {
    PbpoRuleJson {
        lattice: rule.l_graph.lattice.descriptor().clone(),
        l: graph_to_json(&rule.l_graph, false),
        k: graph_to_json(&rule.k_graph, false),
        r: graph_to_json(&rule.r_graph, false),
        lp: graph_to_json(&rule.lp_graph, false),
        kp: graph_to_json(&rule.kp_graph, false),
        rp: Some(graph_to_json(&rule.rp_graph, false)),
        morphisms: RuleMorphismsJson {
            l: morphism_to_json(&rule.l),
            r: morphism_to_json(&rule.r),
            t_l: morphism_to_json(&rule.t_l),
            t_k: morphism_to_json(&rule.t_k),
            lp: morphism_to_json(&rule.lp),
            t_r: Some(morphism_to_json(&rule.t_r)),
            rp: Some(morphism_to_json(&rule.rp)),
        },
    }
}

pub fn pbpo_from_json(j: &PbpoRuleJson) -> Result<PbpoRule> {
    let lat = Lattice::from_descriptor(&j.lattice)?;
    let amb = Some(&lat);
    let l = graph_from_json(&j.l, amb)?;
    let k = graph_from_json(&j.k, amb)?;
    let r = graph_from_json(&j.r, amb)?;
    let lp = graph_from_json(&j.lp, amb)?;
    let kp = graph_from_json(&j.kp, amb)?;
    let lm = morphism_from_json(&j.morphisms.l, &k, &l)?;
    let rm = morphism_from_json(&j.morphisms.r, &k, &r)?;
    let t_l = morphism_from_json(&j.morphisms.t_l, &l, &lp)?;
    let t_k = morphism_from_json(&j.morphisms.t_k, &k, &kp)?;
    let lpm = morphism_from_json(&j.morphisms.lp, &kp, &lp)?;
    let (t_r, rpm) = match (&j.rp, &j.morphisms.t_r, &j.morphisms.rp) {
        (Some(rp_g), Some(t_r), Some(rp_m)) => {
            let rp_g = graph_from_json(rp_g, amb)?;
            (
                morphism_from_json(t_r, &r, &rp_g)?,
                morphism_from_json(rp_m, &kp, &rp_g)?,
            )
        }
        (None, None, None) => {
            let (_rp_g, t_r, rp_m) = pushout(&rm, &t_k)?;
            (t_r, rp_m)
        }
        _ => {
            return Err(Error::MalformedMorphism(
                "rp graph, t_r and rp must be given together or all omitted".into(),
            ))
        }
    };
    pbpo_rule(lm, rm, t_l, t_k, t_r, lpm, rpm)
}

/// One executed step: the three result graphs and the span/cospan legs
/// connecting them, with the bottom-right pushout when it was requested.
#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct StepJson {
    pub g_l: GraphJson,
    pub g_k: GraphJson,
    pub g_r: GraphJson,
    pub m: MorphismJson,
    pub alpha: MorphismJson,
    pub gl: MorphismJson,
    pub gr: MorphismJson,
    pub u: MorphismJson,
    pub up: MorphismJson,
    pub w: MorphismJson,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub rp_graph: Option<GraphJson>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub rp: Option<MorphismJson>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub t_r: Option<MorphismJson>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub wp: Option<MorphismJson>,
}

pub fn step_to_json(s: &StepResult) -> StepJson {
    StepJson {
        g_l: graph_to_json(&s.g_l, false),
        g_k: graph_to_json(&s.g_k, false),
        g_r: graph_to_json(&s.g_r, false),
        m: morphism_to_json(&s.m),
        alpha: morphism_to_json(&s.alpha),
        gl: morphism_to_json(&s.gl),
        gr: morphism_to_json(&s.gr),
        u: morphism_to_json(&s.u),
        up: morphism_to_json(&s.up),
        w: morphism_to_json(&s.w),
        rp_graph: s.rp_graph.as_ref().map(|g| graph_to_json(g, false)),
        rp: s.rp.as_ref().map(morphism_to_json),
        t_r: s.t_r.as_ref().map(morphism_to_json),
        wp: s.wp.as_ref().map(morphism_to_json),
    }
}

/// DOT export: vertices render as "id^label", edges carry their label.
pub fn to_dot(g: &Graph, name: &str) -> String {
    let mut out = format!("digraph \"{name}\" {{\n");
    for (id, label) in &g.vertices {
        out.push_str(&format!("  \"{id}\" [label=\"{id}^{label}\"];\n"));
    }
    for (id, e) in &g.edges {
        out.push_str(&format!(
            "  \"{}\" -> \"{}\" [label=\"{}\", id=\"{id}\"];\n",
            e.src, e.tgt, e.label
        ));
    }
    out.push_str("}\n");
    out
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::fixtures::{fixture, FixtureRule, FIXTURE_NAMES};
    use crate::lattice::{BOT, TOP};

    fn roundtrip_graph(g: &Graph) {
        let j = graph_to_json(g, true);
        let s = serde_json::to_string(&j).unwrap();
        let j2: GraphJson = serde_json::from_str(&s).unwrap();
        let g2 = graph_from_json(&j2, None).unwrap();
        assert_eq!(g, &g2);
        assert_eq!(s, serde_json::to_string(&graph_to_json(&g2, true)).unwrap());
    }

    #[test]
    fn graph_roundtrip_all_lattice_kinds() {
        let lats = [
            Lattice::unit(),
            Lattice::flat(["a", "b", "c"]).unwrap(),
            Lattice::chain(3).unwrap(),
            Lattice::powerset(["1", "2"]).unwrap(),
            Lattice::explicit(
                vec![BOT.into(), "m".into(), TOP.into()],
                vec![(BOT.into(), "m".into()), ("m".into(), TOP.into())],
            )
            .unwrap(),
        ];
        for lat in lats {
            let top = lat.top().to_string();
            let bot = lat.bottom().to_string();
            let g = Graph::new(
                lat.clone(),
                &[("v", &top), ("w", &bot)],
                &[("e", "v", "w", &bot), ("f", "v", "v", &top)],
            )
            .unwrap();
            roundtrip_graph(&g);
        }
    }

    #[test]
    fn fixture_rules_roundtrip() {
        for name in FIXTURE_NAMES {
            let f = fixture(name).unwrap();
            match &f.rule {
                FixtureRule::Plus(r) => {
                    let j = rule_to_json(r);
                    let s = serde_json::to_string(&j).unwrap();
                    let r2 = rule_from_json(&serde_json::from_str(&s).unwrap()).unwrap();
                    assert!(r2.l.same_map(&r.l) && r2.lp.same_map(&r.lp), "{name}");
                    assert_eq!(s, serde_json::to_string(&rule_to_json(&r2)).unwrap());
                }
                FixtureRule::Pbpo(r) => {
                    let j = pbpo_to_json(r);
                    let s = serde_json::to_string(&j).unwrap();
                    let r2 = pbpo_from_json(&serde_json::from_str(&s).unwrap()).unwrap();
                    assert!(r2.lp.same_map(&r.lp) && r2.rp.same_map(&r.rp), "{name}");
                }
                FixtureRule::Agree(r) => {
                    let j = agree_to_json(r);
                    let s = serde_json::to_string(&j).unwrap();
                    let r2 = agree_from_json(&serde_json::from_str(&s).unwrap()).unwrap();
                    assert!(r2.t_k.same_map(&r.t_k), "{name}");
                }
            }
        }
    }

    #[test]
    fn pbpo_bottom_row_recomputed_when_absent() {
        let f = fixture("example14").unwrap();
        let rule = match f.rule {
            FixtureRule::Pbpo(r) => r,
            _ => unreachable!(),
        };
        let mut j = pbpo_to_json(&rule);
        j.rp = None;
        j.morphisms.t_r = None;
        j.morphisms.rp = None;
        let r2 = pbpo_from_json(&j).unwrap();
        assert_eq!(r2.rp_graph.vertices.len(), rule.rp_graph.vertices.len());
        j.morphisms.t_r = Some(morphism_to_json(&rule.t_r));
        assert!(pbpo_from_json(&j).is_err());
    }

    #[test]
    fn dpo_roundtrip() {
        let lat = Lattice::unit();
        let l = Graph::new(lat.clone(), &[("x", "*")], &[("ll", "x", "x", "*")]).unwrap();
        let k = Graph::new(lat.clone(), &[("x", "*")], &[]).unwrap();
        let rule = dpo_rule(
            Morphism::from_pairs(&k, &l, &[("x", "x")], &[]).unwrap(),
            Morphism::identity(&k),
        )
        .unwrap();
        let s = serde_json::to_string(&dpo_to_json(&rule)).unwrap();
        let r2 = dpo_from_json(&serde_json::from_str(&s).unwrap()).unwrap();
        assert!(r2.l.same_map(&rule.l));
    }

    #[test]
    fn missing_lattice_is_an_error() {
        let j = GraphJson { lattice: None, vertices: vec![], edges: vec![] };
        assert!(graph_from_json(&j, None).is_err());
    }

    #[test]
    fn dot_renders_ids_and_labels() {
        let lat = Lattice::flat(["a"]).unwrap();
        let g = Graph::new(
            lat,
            &[("v", "a"), ("w", BOT)],
            &[("e", "v", "w", TOP)],
        )
        .unwrap();
        let dot = to_dot(&g, "g");
        assert!(dot.contains("\"v\" [label=\"v^a\"]"));
        assert!(dot.contains("\"w\" [label=\"w^_bot\"]"));
        assert!(dot.contains("[label=\"_top\", id=\"e\"]"));
    }
}
