use serde::{Deserialize, Serialize};

use crate::classifier::{classify_id, classify_object, classify_partial, materialize};
use crate::enumerate::{enumerate_morphisms, Constraint};
use crate::error::{Error, Result};
use crate::graph::{Graph, Morphism};
use crate::limits::{
    enumerate_quotients, is_pullback_square, is_pushout_square, mediating_into_pullback,
    pullback, pushout,
};
use crate::rewrite::{validate_rule, Rule};

/// A DPO rule: a span L <-l- K -r-> R with l a regular mono.
#[derive(Debug, Clone, PartialEq)]
pub struct DpoRule {
    pub l_graph: Graph,
    pub k_graph: Graph,
    pub r_graph: Graph,
    pub l: Morphism,
    pub r: Morphism,
}

pub fn dpo_rule(l: Morphism, r: Morphism) -> Result<DpoRule> {
    if l.dom != r.dom {
        return Err(Error::MalformedMorphism("l and r must share domain K".into()));
    }
    if !l.is_regular_mono() {
        return Err(Error::NotRegularMono);
    }
    Ok(DpoRule {
        l_graph: l.cod.clone(),
        k_graph: l.dom.clone(),
        r_graph: r.cod.clone(),
        l,
        r,
    })
}

/// An AGREE rule: a span L <-l- K -r-> R plus an embedding t_K : K -> K'
/// (regular mono) typing the retained context.
#[derive(Debug, Clone, PartialEq)]
pub struct AgreeRule {
    pub l_graph: Graph,
    pub k_graph: Graph,
    pub r_graph: Graph,
    pub kp_graph: Graph,
    pub l: Morphism,
    pub r: Morphism,
    pub t_k: Morphism,
}

pub fn agree_rule(l: Morphism, r: Morphism, t_k: Morphism) -> Result<AgreeRule> {
    if l.dom != r.dom || l.dom != t_k.dom {
        return Err(Error::MalformedMorphism("l, r, t_K must share domain K".into()));
    }
    if !t_k.is_regular_mono() {
        return Err(Error::NotRegularMono);
    }
    Ok(AgreeRule {
        l_graph: l.cod.clone(),
        k_graph: l.dom.clone(),
        r_graph: r.cod.clone(),
        kp_graph: t_k.cod.clone(),
        l,
        r,
        t_k,
    })
}

/// A PBPO rule in canonical form: the full two-row diagram
///
/// ```text
///   L  <-l-  K  -r->  R
///   |t_L     |t_K     |t_R
///   L' <-l'- K' -r'-> R'
/// ```
///
/// with the left square a pullback and the right square a pushout.
#[derive(Debug, Clone, PartialEq)]
pub struct PbpoRule {
    pub l_graph: Graph,
    pub k_graph: Graph,
    pub r_graph: Graph,
    pub lp_graph: Graph,
    pub kp_graph: Graph,
    pub rp_graph: Graph,
    pub l: Morphism,
    pub r: Morphism,
    pub t_l: Morphism,
    pub t_k: Morphism,
    pub t_r: Morphism,
    pub lp: Morphism,
    pub rp: Morphism,
}

pub fn pbpo_rule(
    l: Morphism,
    r: Morphism,
    t_l: Morphism,
    t_k: Morphism,
    t_r: Morphism,
    lp: Morphism,
    rp: Morphism,
) -> Result<PbpoRule> {
    if l.dom != r.dom || l.dom != t_k.dom {
        return Err(Error::MalformedMorphism("l, r, t_K must share domain K".into()));
    }
    if l.cod != t_l.dom || r.cod != t_r.dom {
        return Err(Error::MalformedMorphism("t_L, t_R must start at L, R".into()));
    }
    if t_k.cod != lp.dom || t_k.cod != rp.dom {
        return Err(Error::MalformedMorphism("l', r' must start at K'".into()));
    }
    if t_l.cod != lp.cod || t_r.cod != rp.cod {
        return Err(Error::MalformedMorphism("square corners L', R' must agree".into()));
    }
    let left_top = Morphism::compose(&t_l, &l)?;
    let left_bot = Morphism::compose(&lp, &t_k)?;
    if !left_top.same_map(&left_bot) {
        return Err(Error::NonCommuting("t_L . l != l' . t_K".into()));
    }
    let right_top = Morphism::compose(&t_r, &r)?;
    let right_bot = Morphism::compose(&rp, &t_k)?;
    if !right_top.same_map(&right_bot) {
        return Err(Error::NonCommuting("t_R . r != r' . t_K".into()));
    }
    // canonical form: left square pullback, right square pushout
    if !is_pullback_square(&t_l, &lp, &l, &t_k)? {
        return Err(Error::NotCanonical("left square is not a pullback".into()));
    }
    if !is_pushout_square(&r, &t_k, &t_r, &rp)? {
        return Err(Error::NotCanonical("right square is not a pushout".into()));
    }
    Ok(PbpoRule {
        l_graph: l.cod.clone(),
        k_graph: l.dom.clone(),
        r_graph: r.cod.clone(),
        lp_graph: t_l.cod.clone(),
        kp_graph: t_k.cod.clone(),
        rp_graph: t_r.cod.clone(),
        l,
        r,
        t_l,
        t_k,
        t_r,
        lp,
        rp,
    })
}

/// A DPO rewrite step on unlabeled (one-element lattice) graphs: remove the
/// matched part outside l(K) if no context edge dangles, then push out along
/// r. Returns the pushout complement D and the result G_R, or None when the
/// dangling condition fails.
pub fn dpo_step(
    rule: &DpoRule,
    g: &Graph,
    m: &Morphism,
) -> Result<Option<(Graph, Graph)>> {
    if g.lattice.elements().len() != 1 {
        return Err(Error::LatticeMismatch);
    }
    if m.dom != rule.l_graph || &m.cod != g {
        return Err(Error::ComposabilityMismatch);
    }
    if !m.is_regular_mono() {
        return Err(Error::NotRegularMono);
    }
    let ml = Morphism::compose(m, &rule.l)?;
    let kept_v: std::collections::BTreeSet<&String> = ml.vmap.values().collect();
    let kept_e: std::collections::BTreeSet<&String> = ml.emap.values().collect();
    let matched_v: std::collections::BTreeSet<&String> = m.vmap.values().collect();
    let matched_e: std::collections::BTreeSet<&String> = m.emap.values().collect();
    let deleted_v: std::collections::BTreeSet<&String> =
        matched_v.difference(&kept_v).copied().collect();
    let deleted_e: std::collections::BTreeSet<&String> =
        matched_e.difference(&kept_e).copied().collect();
    // dangling condition: no surviving edge may touch a deleted vertex
    for (e, edge) in &g.edges {
        if deleted_e.contains(e) {
            continue;
        }
        if deleted_v.contains(&edge.src) || deleted_v.contains(&edge.tgt) {
            return Ok(None);
        }
    }
    let mut d = g.clone();
    for v in &deleted_v {
        d.vertices.remove(*v);
    }
    for e in &deleted_e {
        d.edges.remove(*e);
    }
    let k_to_d = Morphism::new(rule.k_graph.clone(), d.clone(), ml.vmap.clone(), ml.emap.clone())?;
    let (g_r, _w, _gr) = pushout(&rule.r, &k_to_d)?;
    Ok(Some((d, g_r)))
}

/// An AGREE rewrite step: G_K is the pullback of the classifying arrows
/// <m> : G_L -> T(L) and <t_K, l> : K' -> T(L); G_R is the pushout of r
/// along K -> G_K. Returns (G_K, G_R).
pub fn agree_step(rule: &AgreeRule, g: &Graph, m: &Morphism) -> Result<(Graph, Graph)> {
    if m.dom != rule.l_graph || &m.cod != g {
        return Err(Error::ComposabilityMismatch);
    }
    if !m.is_regular_mono() {
        return Err(Error::NotRegularMono);
    }
    let m_cls = classify_id(m)?; // G_L -> T(L)
    let tkl_cls = classify_partial(&rule.t_k, &rule.l)?; // K' -> T(L)
    let (g_k, g_kl, g_kkp) = pullback(&m_cls, &tkl_cls)?;
    let ml = Morphism::compose(m, &rule.l)?;
    let n = mediating_into_pullback(&m_cls, &tkl_cls, &g_kl, &g_kkp, &ml, &rule.t_k)?;
    let (g_r, _w, _gr) = pushout(&rule.r, &n)?;
    if !is_pullback_square(&m_cls, &tkl_cls, &g_kl, &g_kkp)? {
        return Err(Error::CertificateFailure("context pullback certificate failed".into()));
    }
    if !is_pullback_square(m, &g_kl, &rule.l, &n)? {
        return Err(Error::CertificateFailure("match pullback certificate failed".into()));
    }
    Ok((g_k, g_r))
}

/// A PBPO rewrite step: only plain commutation t_L = alpha . m is required
/// of the match. G_K is the pullback of alpha and l'; u : K -> G_K is the
/// pullback mediator; G_R is the pushout of r along u. Returns (G_K, G_R).
pub fn pbpo_step(
    rule: &PbpoRule,
    g: &Graph,
    m: &Morphism,
    alpha: &Morphism,
) -> Result<(Graph, Graph)> {
    if m.dom != rule.l_graph || &m.cod != g || &alpha.dom != g || alpha.cod != rule.lp_graph {
        return Err(Error::ComposabilityMismatch);
    }
    let am = Morphism::compose(alpha, m)?;
    if !am.same_map(&rule.t_l) {
        return Err(Error::NotAMatch);
    }
    let (g_k, gl, up) = pullback(alpha, &rule.lp)?;
    let ml = Morphism::compose(m, &rule.l)?;
    let u = mediating_into_pullback(alpha, &rule.lp, &gl, &up, &ml, &rule.t_k)?;
    let (g_r, _w, _gr) = pushout(&rule.r, &u)?;
    Ok((g_k, g_r))
}

/// All morphisms v : K -> G_K compatible with the typing leg (u' . v = t_K)
/// of a would-be PBPO step, plus the unique pullback mediator among them.
/// Exposes how the commutation-only match discipline underdetermines u.
pub fn pbpo_u_candidates(
    rule: &PbpoRule,
    m: &Morphism,
    alpha: &Morphism,
) -> Result<(Vec<Morphism>, Morphism)> {
    let am = Morphism::compose(alpha, m)?;
    if !am.same_map(&rule.t_l) {
        return Err(Error::NotAMatch);
    }
    let (g_k, gl, up) = pullback(alpha, &rule.lp)?;
    let ml = Morphism::compose(m, &rule.l)?;
    let u = mediating_into_pullback(alpha, &rule.lp, &gl, &up, &ml, &rule.t_k)?;
    let mut candidates = Vec::new();
    for v in enumerate_morphisms(&rule.k_graph, &g_k, Constraint::Any, None)? {
        if Morphism::compose(&up, &v)?.same_map(&rule.t_k) {
            candidates.push(v);
        }
    }
    Ok((candidates, u))
}

/// Interpret a DPO rule as a PBPO+ rule: t_K = eta_K embeds K into its
/// partial map classifier, and (L', t_L, l') arise by pushing eta_K out
/// along l.
pub fn translate_dpo(rule: &DpoRule) -> Result<Rule> {
    let cls = classify_object(&rule.k_graph)?;
    let (_lp, t_l, lp) = pushout(&rule.l, &cls.eta)?;
    validate_rule(rule.l.clone(), rule.r.clone(), t_l, cls.eta, lp)
}

/// Interpret an AGREE rule as a PBPO+ rule: t_L = eta_L, L' = T(L) and
/// l' = <t_K, l>.
pub fn translate_agree(rule: &AgreeRule) -> Result<Rule> {
    let cls = classify_object(&rule.l_graph)?;
    let lp = classify_partial(&rule.t_k, &rule.l)?;
    validate_rule(rule.l.clone(), rule.r.clone(), cls.eta, rule.t_k.clone(), lp)
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum CompactMode {
    /// One compacted rule per epi quotient of L.
    Full,
    /// Iso factorizations only; sound for regular monic matches.
    IsoOnly,
}

/// Componentwise rule isomorphism: isos between all five objects commuting
/// with the five structure morphisms.
pub fn rules_isomorphic(a: &Rule, b: &Rule) -> Result<bool> {
    let phis_k = enumerate_morphisms(&a.k_graph, &b.k_graph, Constraint::Iso, None)?;
    let phis_l = enumerate_morphisms(&a.l_graph, &b.l_graph, Constraint::Iso, None)?;
    let phis_r = enumerate_morphisms(&a.r_graph, &b.r_graph, Constraint::Iso, None)?;
    let phis_kp = enumerate_morphisms(&a.kp_graph, &b.kp_graph, Constraint::Iso, None)?;
    let phis_lp = enumerate_morphisms(&a.lp_graph, &b.lp_graph, Constraint::Iso, None)?;
    for pk in &phis_k {
        for pl in &phis_l {
            if !Morphism::compose(&b.l, pk)?.same_map(&Morphism::compose(pl, &a.l)?) {
                continue;
            }
            for pr in &phis_r {
                if !Morphism::compose(&b.r, pk)?.same_map(&Morphism::compose(pr, &a.r)?) {
                    continue;
                }
                for pkp in &phis_kp {
                    if !Morphism::compose(&b.t_k, pk)?
                        .same_map(&Morphism::compose(pkp, &a.t_k)?)
                    {
                        continue;
                    }
                    for plp in &phis_lp {
                        if Morphism::compose(&b.t_l, pl)?
                            .same_map(&Morphism::compose(plp, &a.t_l)?)
                            && Morphism::compose(&b.lp, pkp)?
                                .same_map(&Morphism::compose(plp, &a.lp)?)
                        {
                            return Ok(true);
                        }
                    }
                }
            }
        }
    }
    Ok(false)
}

/// The family of PBPO+ rules jointly simulating a canonical PBPO rule. Per
/// epi e : L ->> L_e with t_L = f . e for a (necessarily unique) f, the
/// compacted rule reads off the middle rows of
///
/// ```text
///   L    <--  K    -->  R
///   L_e  <--  K_e  -->  R_e        (top row of the emitted rule)
///   <f>  <--  <f>'                 (bottom row: materialization of f)
///   L'   <--  K'
/// ```
///
/// with K_e and <f>' formed by pullbacks and R_e by pushout. Output is
/// deduplicated up to componentwise isomorphism.
pub fn compact_rules(rule: &PbpoRule, mode: CompactMode) -> Result<Vec<Rule>> {
    if !rule.l_graph.lattice.is_heyting() {
        return Err(Error::NonHeytingLattice);
    }
    let epis = match mode {
        // every iso factorization yields the same rule up to componentwise
        // iso, so the identity represents the class
        CompactMode::IsoOnly => vec![Morphism::identity(&rule.l_graph)],
        CompactMode::Full => enumerate_quotients(&rule.l_graph)?,
    };
    let mut out: Vec<Rule> = Vec::new();
    'epis: for e in &epis {
        // right factor f with t_L = f . e, determined by e's kernel; skip e
        // when t_L does not respect it
        let mut fv = std::collections::BTreeMap::new();
        for (x, ex) in &e.vmap {
            let tx = rule.t_l.apply_v(x).to_string();
            if let Some(prev) = fv.insert(ex.clone(), tx.clone()) {
                if prev != tx {
                    continue 'epis;
                }
            }
        }
        let mut fe = std::collections::BTreeMap::new();
        for (x, ex) in &e.emap {
            let tx = rule.t_l.apply_e(x).to_string();
            if let Some(prev) = fe.insert(ex.clone(), tx.clone()) {
                if prev != tx {
                    continue 'epis;
                }
            }
        }
        let f = match Morphism::new(e.cod.clone(), rule.lp_graph.clone(), fv, fe) {
            Ok(f) => f,
            Err(_) => continue 'epis, // label obstruction after joining
        };
        let (f_sharp, f_flat) = materialize(&f)?;
        // <f>' = pullback of f'' : <f> -> L' against l' : K' -> L'
        let (_fp, fp_to_m, fp_to_kp) = pullback(&f_flat, &rule.lp)?;
        // K_e = pullback of f' : L_e -> <f> against <f>' -> <f>
        let (_ke, ke_to_le, ke_to_fp) = pullback(&f_sharp, &fp_to_m)?;
        // K -> <f>' and K -> K_e by the universal properties
        let el = Morphism::compose(e, &rule.l)?;
        let fsel = Morphism::compose(&f_sharp, &el)?;
        let j = mediating_into_pullback(&f_flat, &rule.lp, &fp_to_m, &fp_to_kp, &fsel, &rule.t_k)?;
        let k = mediating_into_pullback(&f_sharp, &fp_to_m, &ke_to_le, &ke_to_fp, &el, &j)?;
        // R_e = pushout of r along K -> K_e
        let (_re, _r_to_re, r_e) = pushout(&rule.r, &k)?;
        let candidate = validate_rule(ke_to_le, r_e, f_sharp, ke_to_fp, fp_to_m)?;
        let mut dup = false;
        for existing in &out {
            if rules_isomorphic(existing, &candidate)? {
                dup = true;
                break;
            }
        }
        if !dup {
            out.push(candidate);
        }
    }
    Ok(out)
}
