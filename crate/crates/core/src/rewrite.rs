use serde::{Deserialize, Serialize};

use crate::classifier::restricted_classifier_certificate;
use crate::enumerate::{canonical_key, enumerate_morphisms, Constraint};
use crate::error::{Error, Result};
use crate::graph::{Graph, Morphism};
use crate::limits::{
    is_pullback_square, is_pushout_square, mediating_from_pushout, mediating_into_pullback,
    pullback, pushout,
};

/// A PBPO+ rewrite rule: the five-object diagram
///
/// ```text
///   L  <-l-  K  -r->  R
///   |t_L     |t_K
///   L' <-l'- K'
/// ```
///
/// whose left square commutes and is a pullback.
#[derive(Debug, Clone, PartialEq)]
pub struct Rule {
    pub l_graph: Graph,
    pub k_graph: Graph,
    pub r_graph: Graph,
    pub lp_graph: Graph,
    pub kp_graph: Graph,
    pub l: Morphism,
    pub r: Morphism,
    pub t_l: Morphism,
    pub t_k: Morphism,
    pub lp: Morphism,
}

/// Validate a candidate rule diagram: endpoints, shared lattice, the
/// commuting left square, and its pullback certificate.
pub fn validate_rule(
    l: Morphism,
    r: Morphism,
    t_l: Morphism,
    t_k: Morphism,
    lp: Morphism,
) -> Result<Rule> {
    if l.dom != t_k.dom || l.dom != r.dom {
        return Err(Error::MalformedMorphism("l, r, t_K must share domain K".into()));
    }
    if l.cod != t_l.dom {
        return Err(Error::MalformedMorphism("cod(l) must be L = dom(t_L)".into()));
    }
    if t_l.cod != lp.cod {
        return Err(Error::MalformedMorphism("cod(t_L) must be L' = cod(l')".into()));
    }
    if t_k.cod != lp.dom {
        return Err(Error::MalformedMorphism("cod(t_K) must be K' = dom(l')".into()));
    }
    let lattices_equal = l.dom.lattice == t_l.cod.lattice && l.dom.lattice == r.cod.lattice;
    if !lattices_equal {
        return Err(Error::LatticeMismatch);
    }
    let lhs = Morphism::compose(&t_l, &l)?;
    let rhs = Morphism::compose(&lp, &t_k)?;
    if !lhs.same_map(&rhs) {
        return Err(Error::NonCommuting("t_L . l != l' . t_K".into()));
    }
    if !is_pullback_square(&t_l, &lp, &l, &t_k)? {
        return Err(Error::NotAPullback);
    }
    Ok(Rule {
        l_graph: l.cod.clone(),
        k_graph: l.dom.clone(),
        r_graph: r.cod.clone(),
        lp_graph: t_l.cod.clone(),
        kp_graph: t_k.cod.clone(),
        l,
        r,
        t_l,
        t_k,
        lp,
    })
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum MatchConstraint {
    Any,
    Mono,
    RegularMono,
}

impl MatchConstraint {
    fn admits(&self, m: &Morphism) -> bool {
        match self {
            MatchConstraint::Any => true,
            MatchConstraint::Mono => m.is_mono(),
            MatchConstraint::RegularMono => m.is_regular_mono(),
        }
    }
}

/// Adherence-first strong-match discovery: enumerate adherences
/// alpha : G_L -> L', pull back against t_L, and accept alpha whenever the
/// projection to L is an iso, which determines m uniquely.
pub fn find_strong_matches(
    rule: &Rule,
    g_l: &Graph,
    constraint: MatchConstraint,
) -> Result<Vec<(Morphism, Morphism)>> {
    let mut out = Vec::new();
    for alpha in enumerate_morphisms(g_l, &rule.lp_graph, Constraint::Any, None)? {
        let (_p, p1, p2) = pullback(&rule.t_l, &alpha)?;
        if !p1.is_iso() {
            continue;
        }
        let m = Morphism::compose(&p2, &p1.inverse()?)?;
        if constraint.admits(&m) {
            out.push((m, alpha));
        }
    }
    Ok(out)
}

/// Match-first strong-match discovery (cross-check mode): enumerate match
/// morphisms m, then adherences alpha with t_L = alpha . m whose match
/// square is a pullback.
pub fn find_strong_matches_match_first(
    rule: &Rule,
    g_l: &Graph,
    constraint: MatchConstraint,
) -> Result<Vec<(Morphism, Morphism)>> {
    let mut out = Vec::new();
    for m in enumerate_morphisms(&rule.l_graph, g_l, Constraint::Any, None)? {
        if !constraint.admits(&m) {
            continue;
        }
        for alpha in enumerate_morphisms(g_l, &rule.lp_graph, Constraint::Any, None)? {
            let am = Morphism::compose(&alpha, &m)?;
            if !am.same_map(&rule.t_l) {
                continue;
            }
            if is_pullback_square(&alpha, &rule.t_l, &m, &Morphism::identity(&rule.l_graph))? {
                out.push((m.clone(), alpha));
            }
        }
    }
    Ok(out)
}

/// The full rewrite-step diagram with verified square certificates.
#[derive(Debug, Clone, PartialEq)]
pub struct StepResult {
    pub g_l: Graph,
    pub g_k: Graph,
    pub g_r: Graph,
    pub m: Morphism,
    pub alpha: Morphism,
    pub gl: Morphism,
    pub gr: Morphism,
    pub u: Morphism,
    pub up: Morphism,
    pub w: Morphism,
    /// Bottom-right pushout data: R' with r' : K' -> R', t_R : R -> R' and
    /// w' : G_R -> R'.
    pub rp_graph: Option<Graph>,
    pub rp: Option<Morphism>,
    pub t_r: Option<Morphism>,
    pub wp: Option<Morphism>,
}

/// Execute a rewrite step for a verified strong match. All five squares of
/// the step diagram are certified: the strong-match pullback, the middle
/// pullback, the right pushout, and the two derived pullbacks through u.
pub fn apply_step(
    rule: &Rule,
    g_l: &Graph,
    m: &Morphism,
    alpha: &Morphism,
    with_bottom_right: bool,
) -> Result<StepResult> {
    // strong match verification
    let am = Morphism::compose(alpha, m)?;
    if !am.same_map(&rule.t_l) {
        return Err(Error::NotAStrongMatch("t_L != alpha . m".into()));
    }
    if !is_pullback_square(alpha, &rule.t_l, m, &Morphism::identity(&rule.l_graph))? {
        return Err(Error::NotAStrongMatch("match square is not a pullback".into()));
    }
    // middle pullback: G_K with projections g_L and u'
    let (g_k, gl, up) = pullback(alpha, &rule.lp)?;
    // u : K -> G_K mediating the cone (m . l, t_K)
    let ml = Morphism::compose(m, &rule.l)?;
    let u = mediating_into_pullback(alpha, &rule.lp, &gl, &up, &ml, &rule.t_k)?;
    // right pushout: G_R with legs w (from R) and g_R (from G_K)
    let (g_r, w, gr) = pushout(&rule.r, &u)?;

    // certificates
    let certify = |ok: bool, what: &str| -> Result<()> {
        if ok {
            Ok(())
        } else {
            Err(Error::CertificateFailure(format!("{what} certificate failed")))
        }
    };
    certify(is_pullback_square(alpha, &rule.lp, &gl, &up)?, "middle pullback")?;
    certify(is_pushout_square(&rule.r, &u, &w, &gr)?, "right pushout")?;
    certify(is_pullback_square(m, &gl, &rule.l, &u)?, "m.l = g_L.u pullback")?;
    certify(
        is_pullback_square(&rule.t_k, &up, &Morphism::identity(&rule.k_graph), &u)?,
        "t_K = u'.u pullback",
    )?;

    let (rp_graph, rp, t_r, wp) = if with_bottom_right {
        // R' = pushout of t_K along r; w' mediates out of the right pushout
        let (rp_g, t_r, rp) = pushout(&rule.r, &rule.t_k)?;
        let rpup = Morphism::compose(&rp, &up)?;
        let wp = mediating_from_pushout(&rule.r, &u, &w, &gr, &t_r, &rpup)?;
        certify(is_pushout_square(&up, &gr, &rp, &wp)?, "bottom-right pushout")?;
        (Some(rp_g), Some(rp), Some(t_r), Some(wp))
    } else {
        (None, None, None, None)
    };

    Ok(StepResult {
        g_l: g_l.clone(),
        g_k,
        g_r,
        m: m.clone(),
        alpha: alpha.clone(),
        gl,
        gr,
        u,
        up,
        w,
        rp_graph,
        rp,
        t_r,
        wp,
    })
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub enum Strategy {
    /// Apply the first strong match in deterministic (rule, match) order.
    First,
    /// Breadth-first exploration of every strong match from every reached
    /// graph, deduplicating reached graphs up to isomorphism.
    All,
    /// Apply a pseudo-randomly chosen strong match (seeded; reproducible).
    Random(u64),
}

#[derive(Debug, Clone)]
pub struct Trace {
    pub steps: Vec<(usize, StepResult)>,
    pub budget_exhausted: bool,
    /// Graphs reached (for Strategy::All, all distinct results up to iso;
    /// otherwise the final graph).
    pub results: Vec<Graph>,
}

/// Normalization driver. For First/Random, repeatedly applies one strong
/// match until no rule matches or the step budget runs out. For All,
/// explores the reachable graphs breadth-first within the step budget.
pub fn rewrite_closure(
    g: &Graph,
    rules: &[Rule],
    strategy: Strategy,
    max_steps: usize,
) -> Result<Trace> {
    let mut steps = Vec::new();
    let mut budget_exhausted = false;
    match strategy {
        Strategy::First | Strategy::Random(_) => {
            let mut rng_state = match strategy {
                Strategy::Random(seed) => Some(seed),
                _ => None,
            };
            let mut current = g.clone();
            loop {
                let mut pool = Vec::new();
                for (i, rule) in rules.iter().enumerate() {
                    for (m, alpha) in
                        find_strong_matches(rule, &current, MatchConstraint::Any)?
                    {
                        pool.push((i, m, alpha));
                    }
                }
                if pool.is_empty() {
                    return Ok(Trace { steps, budget_exhausted, results: vec![current] });
                }
                if steps.len() >= max_steps {
                    budget_exhausted = true;
                    return Ok(Trace { steps, budget_exhausted, results: vec![current] });
                }
                let idx = match &mut rng_state {
                    None => 0,
                    Some(state) => {
                        // splitmix64 step; reproducible across platforms
                        *state = state.wrapping_add(0x9e3779b97f4a7c15);
                        let mut z = *state;
                        z = (z ^ (z >> 30)).wrapping_mul(0xbf58476d1ce4e5b9);
                        z = (z ^ (z >> 27)).wrapping_mul(0x94d049bb133111eb);
                        (z ^ (z >> 31)) as usize % pool.len()
                    }
                };
                let (ri, m, alpha) = &pool[idx];
                let step = apply_step(&rules[*ri], &current, m, alpha, false)?;
                current = step.g_r.clone();
                steps.push((*ri, step));
            }
        }
        Strategy::All => {
            let mut queue = vec![g.clone()];
            let mut seen = std::collections::BTreeSet::new();
            seen.insert(canonical_key(g));
            let mut results = Vec::new();
            while let Some(current) = queue.pop() {
                let mut any = false;
                for (i, rule) in rules.iter().enumerate() {
                    for (m, alpha) in
                        find_strong_matches(rule, &current, MatchConstraint::Any)?
                    {
                        if steps.len() >= max_steps {
                            budget_exhausted = true;
                            return Ok(Trace { steps, budget_exhausted, results });
                        }
                        any = true;
                        let step = apply_step(rule, &current, &m, &alpha, false)?;
                        let key = canonical_key(&step.g_r);
                        if seen.insert(key) {
                            queue.push(step.g_r.clone());
                        }
                        steps.push((i, step));
                    }
                }
                if !any {
                    results.push(current);
                }
            }
            Ok(Trace { steps, budget_exhausted, results })
        }
    }
}

#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct DeterminismCertificate {
    pub certified: bool,
    pub reason: String,
}

/// A rule whose t_L is a restricted classifier admits at most one adherence
/// morphism per match, making rewriting deterministic.
pub fn determinism_certificate(rule: &Rule) -> Result<DeterminismCertificate> {
    let cert = restricted_classifier_certificate(&rule.t_l)?;
    Ok(DeterminismCertificate {
        certified: cert.is_classifying,
        reason: if cert.is_classifying {
            "t_L is a restricted classifier".into()
        } else {
            format!("t_L is not a restricted classifier: {}", cert.reason)
        },
    })
}
