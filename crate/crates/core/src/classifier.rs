use std::collections::{BTreeMap, BTreeSet};

use crate::enumerate::{enumerate_morphisms, Constraint};
use crate::error::{Error, Result};
use crate::graph::{Edge, Graph, Morphism};
use crate::limits::is_pullback_square;

pub const STAR: &str = "_star";

fn top_edge_id(u: &str, v: &str) -> String {
    format!("(_top|{u}|{v})")
}

/// The regular-mono partial map classifier T(G) together with the unit
/// eta_G : G -> T(G).
#[derive(Debug, Clone, PartialEq)]
pub struct ClassifierResult {
    pub t: Graph,
    pub eta: Morphism,
    pub star_vertex: String,
    pub undefined_edges: BTreeSet<String>,
}

fn require_heyting(g: &Graph) -> Result<()> {
    if !g.lattice.is_heyting() {
        return Err(Error::NonHeytingLattice);
    }
    Ok(())
}

/// T(G): add a top-labeled star vertex, and one top-labeled edge for every
/// ordered pair of T-vertices (an "undefined edge" between that pair).
pub fn classify_object(g: &Graph) -> Result<ClassifierResult> {
    require_heyting(g)?;
    let lat = g.lattice.clone();
    let top = lat.top().to_string();
    let mut t = g.clone();
    if t.vertices.contains_key(STAR) {
        return Err(Error::MalformedGraph(format!("vertex id `{STAR}` is reserved")));
    }
    t.vertices.insert(STAR.to_string(), top.clone());
    let tvs: Vec<String> = t.vertices.keys().cloned().collect();
    let mut undefined_edges = BTreeSet::new();
    for u in &tvs {
        for v in &tvs {
            let id = top_edge_id(u, v);
            if t.edges.contains_key(&id) {
                return Err(Error::MalformedGraph(format!("edge id `{id}` is reserved")));
            }
            t.edges.insert(id.clone(), Edge { src: u.clone(), tgt: v.clone(), label: top.clone() });
            undefined_edges.insert(id);
        }
    }
    let eta = Morphism::new(
        g.clone(),
        t.clone(),
        g.vertices.keys().map(|v| (v.clone(), v.clone())).collect(),
        g.edges.keys().map(|e| (e.clone(), e.clone())).collect(),
    )?;
    Ok(ClassifierResult { t, eta, star_vertex: STAR.to_string(), undefined_edges })
}

/// The classifying arrow <m, f> : A -> T(B) of a partial map
/// A <-m- X -f-> B (m regular mono): the m-image goes through f, everything
/// else to the star vertex and the undefined edges. The defining square
/// (with eta_B) is certified to be a pullback.
pub fn classify_partial(m: &Morphism, f: &Morphism) -> Result<Morphism> {
    require_heyting(&m.dom)?;
    if m.dom != f.dom {
        return Err(Error::ComposabilityMismatch);
    }
    if !m.is_regular_mono() {
        return Err(Error::NotRegularMono);
    }
    let a = &m.cod;
    let cls = classify_object(&f.cod)?;
    // invert m on its image
    let minv_v: BTreeMap<&String, &String> = m.vmap.iter().map(|(x, av)| (av, x)).collect();
    let minv_e: BTreeMap<&String, &String> = m.emap.iter().map(|(x, ae)| (ae, x)).collect();
    let mut vmap = BTreeMap::new();
    for av in a.vertices.keys() {
        let tgt = match minv_v.get(av) {
            Some(x) => f.vmap[*x].clone(),
            None => STAR.to_string(),
        };
        vmap.insert(av.clone(), tgt);
    }
    let mut emap = BTreeMap::new();
    for (ae, edge) in &a.edges {
        let tgt = match minv_e.get(ae) {
            Some(x) => f.emap[*x].clone(),
            None => top_edge_id(&vmap[&edge.src], &vmap[&edge.tgt]),
        };
        emap.insert(ae.clone(), tgt);
    }
    let arrow = Morphism::new(a.clone(), cls.t.clone(), vmap, emap)?;
    // Certify the defining pullback square: X -f-> B -eta-> T(B) against
    // X -m-> A -<m,f>-> T(B).
    if !is_pullback_square(&arrow, &cls.eta, m, f)? {
        return Err(Error::CertificateFailure(
            "classifying arrow's defining square is not a pullback".into(),
        ));
    }
    Ok(arrow)
}

/// <m> = <m, id_X> : A -> T(X) for a regular mono m : X -> A.
pub fn classify_id(m: &Morphism) -> Result<Morphism> {
    classify_partial(m, &Morphism::identity(&m.dom))
}

/// The rm-materialization of f : A -> B as a concrete graph: the disjoint
/// union of A and B plus, for every ordered vertex pair with at least one
/// A-endpoint and every B-edge between the pair's B-shadows, one extra edge
/// carrying the B-edge's label. Returns (f_sharp : A -> M, f_flat : M -> B)
/// with f = f_flat . f_sharp and f_sharp regular mono.
pub fn materialize(f: &Morphism) -> Result<(Morphism, Morphism)> {
    require_heyting(&f.dom)?;
    let a = &f.dom;
    let b = &f.cod;
    let mut m = Graph::empty(a.lattice.clone());
    for (v, l) in &a.vertices {
        m.vertices.insert(format!("a:{v}"), l.clone());
    }
    for (v, l) in &b.vertices {
        m.vertices.insert(format!("b:{v}"), l.clone());
    }
    for (e, edge) in &a.edges {
        m.edges.insert(
            format!("a:{e}"),
            Edge {
                src: format!("a:{}", edge.src),
                tgt: format!("a:{}", edge.tgt),
                label: edge.label.clone(),
            },
        );
    }
    for (e, edge) in &b.edges {
        m.edges.insert(
            format!("b:{e}"),
            Edge {
                src: format!("b:{}", edge.src),
                tgt: format!("b:{}", edge.tgt),
                label: edge.label.clone(),
            },
        );
    }
    // shadow of an M-vertex in B
    let shadow = |mv: &str| -> String {
        let (side, id) = mv.split_once(':').unwrap();
        if side == "a" {
            f.vmap[id].clone()
        } else {
            id.to_string()
        }
    };
    let mvs: Vec<String> = m.vertices.keys().cloned().collect();
    let mut extra: BTreeMap<String, String> = BTreeMap::new(); // extra edge id -> B edge
    for x in &mvs {
        for y in &mvs {
            if !x.starts_with("a:") && !y.starts_with("a:") {
                continue;
            }
            let (sx, sy) = (shadow(x), shadow(y));
            for (be, bedge) in &b.edges {
                if bedge.src == sx && bedge.tgt == sy {
                    let id = format!("({be}|{x}|{y})");
                    m.edges.insert(
                        id.clone(),
                        Edge { src: x.clone(), tgt: y.clone(), label: bedge.label.clone() },
                    );
                    extra.insert(id, be.clone());
                }
            }
        }
    }
    let f_sharp = Morphism::new(
        a.clone(),
        m.clone(),
        a.vertices.keys().map(|v| (v.clone(), format!("a:{v}"))).collect(),
        a.edges.keys().map(|e| (e.clone(), format!("a:{e}"))).collect(),
    )?;
    let mut flat_emap: BTreeMap<String, String> = BTreeMap::new();
    for e in m.edges.keys() {
        let tgt = if let Some(be) = extra.get(e) {
            be.clone()
        } else {
            let (side, id) = e.split_once(':').unwrap();
            if side == "a" {
                f.emap[id].clone()
            } else {
                id.to_string()
            }
        };
        flat_emap.insert(e.clone(), tgt);
    }
    let f_flat = Morphism::new(
        m.clone(),
        b.clone(),
        m.vertices.keys().map(|v| (v.clone(), shadow(v))).collect(),
        flat_emap,
    )?;
    Ok((f_sharp, f_flat))
}

/// Brute-force terminality audit for a materialization candidate: for every
/// probe object C, every factorization A -cm-> C -ca-> B of f with cm
/// regular mono must admit exactly one beta : C -> M such that
/// beta . cm = f_sharp is a pullback square and f_flat . beta = ca.
pub fn check_materialization_terminality(
    f: &Morphism,
    f_sharp: &Morphism,
    f_flat: &Morphism,
    probes: &[Graph],
) -> Result<bool> {
    let a = &f.dom;
    let b = &f.cod;
    let m_obj = &f_sharp.cod;
    for c in probes {
        let cms = enumerate_morphisms(a, c, Constraint::RegularMono, None)?;
        let cas = enumerate_morphisms(c, b, Constraint::Any, None)?;
        for cm in &cms {
            for ca in &cas {
                if !Morphism::compose(ca, cm)?.same_map(f) {
                    continue;
                }
                let betas = enumerate_morphisms(c, m_obj, Constraint::Any, None)?
                    .into_iter()
                    .filter(|beta| {
                        Morphism::compose(beta, cm)
                            .map(|x| x.same_map(f_sharp))
                            .unwrap_or(false)
                            && Morphism::compose(f_flat, beta)
                                .map(|x| x.same_map(ca))
                                .unwrap_or(false)
                            && is_pullback_square(beta, f_sharp, cm, &Morphism::identity(a))
                                .unwrap_or(false)
                    })
                    .count();
                if betas != 1 {
                    return Ok(false);
                }
            }
        }
    }
    Ok(true)
}

/// Certificate that a regular mono t_L : L -> L' is a restricted
/// classifier: eta_L factors through t_L via a mono into T(L). Equivalent
/// to <t_L> = <t_L, id_L> being monic; the arrow is returned as witness.
#[derive(Debug, Clone)]
pub struct RestrictedClassifierCertificate {
    pub is_classifying: bool,
    pub reason: String,
    pub witness: Option<Morphism>,
}

pub fn restricted_classifier_certificate(
    t_l: &Morphism,
) -> Result<RestrictedClassifierCertificate> {
    require_heyting(&t_l.dom)?;
    if !t_l.is_regular_mono() {
        return Ok(RestrictedClassifierCertificate {
            is_classifying: false,
            reason: "t_L is not a regular mono".into(),
            witness: None,
        });
    }
    let arrow = classify_id(t_l)?;
    let monic = arrow.is_mono();
    Ok(RestrictedClassifierCertificate {
        is_classifying: monic,
        reason: if monic {
            "<t_L> is monic".into()
        } else {
            "<t_L> is not injective".into()
        },
        witness: Some(arrow),
    })
}
