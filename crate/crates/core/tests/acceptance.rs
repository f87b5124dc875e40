//! Acceptance gate: one test per criterion, each printing a PASS line on
//! success. Desk-scale bounds (graph sizes, sample counts) follow the
//! stated protocols; where a literal exhaustive run is combinatorially
//! infeasible the sampling is deterministic and noted inline.

mod common;

use std::collections::BTreeSet;

use common::{pool, random_canonical_pbpo, random_host, random_rule, Rng};
use pbpo_core::classifier::{classify_object, classify_partial};
use pbpo_core::enumerate::{
    canonical_key, enumerate_graphs, enumerate_morphisms, Constraint,
};
use pbpo_core::fixtures::{fixture, FixtureRule};
use pbpo_core::graph::{Graph, Morphism};
use pbpo_core::interop::{
    agree_rule, agree_step, compact_rules, dpo_rule, dpo_step, pbpo_step, pbpo_u_candidates,
    translate_agree, translate_dpo, CompactMode, PbpoRule,
};
use pbpo_core::lattice::{Lattice, LatticeRef};
use pbpo_core::limits::{is_pullback_square, pullback, pushout};
use pbpo_core::rewrite::{
    apply_step, determinism_certificate, find_strong_matches, validate_rule, MatchConstraint,
    Rule,
};

fn key(g: &Graph) -> String {
    canonical_key(g)
}

#[test]
fn criterion_1_step_certificate_suite() {
    let lattices: Vec<LatticeRef> = vec![
        Lattice::unit(),
        Lattice::chain(3).unwrap(),
        Lattice::powerset(["1", "2"]).unwrap(),
        Lattice::flat(["a", "b"]).unwrap(),
    ];
    let mut rng = Rng(101);
    let mut steps = 0u32;
    for lat in &lattices {
        let p = pool(lat);
        for _ in 0..50 {
            let rule = random_rule(&p, &mut rng);
            for _ in 0..2 {
                let host = random_host(&p, &mut rng, 5, 4);
                for (m, alpha) in
                    find_strong_matches(&rule, &host, MatchConstraint::Any).unwrap()
                {
                    // apply_step verifies all five square certificates and
                    // errors out if any fails
                    apply_step(&rule, &host, &m, &alpha, true).unwrap();
                    steps += 1;
                }
            }
        }
    }
    assert!(steps > 0, "suite must exercise steps");
    println!("acceptance criterion 1 (step certificates, 200 random rules): PASS ({steps} steps)");
}

#[test]
fn criterion_2_classifier_suite() {
    let lat = Lattice::chain(2).unwrap();
    let graphs = enumerate_graphs(&lat, 3, 3);
    for g in &graphs {
        // edge-count law |E_T(G)| = |E_G| + (|V_G|+1)^2
        let cls = classify_object(g).unwrap();
        assert_eq!(
            cls.t.edges.len(),
            g.edges.len() + (g.vertices.len() + 1) * (g.vertices.len() + 1)
        );

        // classify the partial map defined on G minus its last vertex
        let mut x = g.clone();
        if let Some(last) = g.vertices.keys().last().cloned() {
            x.vertices.remove(&last);
            x.edges.retain(|_, e| e.src != last && e.tgt != last);
        }
        let m = Morphism::new(
            x.clone(),
            g.clone(),
            x.vertices.keys().map(|v| (v.clone(), v.clone())).collect(),
            x.edges.keys().map(|e| (e.clone(), e.clone())).collect(),
        )
        .unwrap();
        let f = Morphism::identity(&x);
        let chi = classify_partial(&m, &f).unwrap();
        let xcls = classify_object(&x).unwrap();
        assert_eq!(chi.cod, xcls.t);
        assert!(is_pullback_square(&chi, &xcls.eta, &m, &f).unwrap());
        // uniqueness by brute force over every candidate G -> T(X)
        let mut n = 0;
        for h in enumerate_morphisms(g, &xcls.t, Constraint::Any, None).unwrap() {
            // non-commuting candidate squares are simply not pullbacks
            let is_pb = match is_pullback_square(&h, &xcls.eta, &m, &f) {
                Ok(b) => b,
                Err(pbpo_core::Error::NonCommutingSquare) => false,
                Err(e) => panic!("{e}"),
            };
            if is_pb {
                assert!(h.same_map(&chi));
                n += 1;
            }
        }
        assert_eq!(n, 1);
    }
    println!(
        "acceptance criterion 2 (classifier suite, {} graphs over chain(2)): PASS",
        graphs.len()
    );
}

#[test]
fn criterion_3_dpo_subsumption() {
    let lat = Lattice::unit();
    let components = enumerate_graphs(&lat, 2, 2);
    let hosts = enumerate_graphs(&lat, 3, 3);
    let mut n_rules = 0u32;
    let mut n_pairs = 0u32;
    for k in &components {
        for l in &components {
            for lm in enumerate_morphisms(k, l, Constraint::RegularMono, None).unwrap() {
                for r in &components {
                    for rm in enumerate_morphisms(k, r, Constraint::Any, None).unwrap() {
                        let rule = dpo_rule(lm.clone(), rm).unwrap();
                        let plus = translate_dpo(&rule).unwrap();
                        n_rules += 1;
                        for g in &hosts {
                            n_pairs += 1;
                            let mut dpo_set = BTreeSet::new();
                            for m in enumerate_morphisms(
                                &rule.l_graph,
                                g,
                                Constraint::RegularMono,
                                None,
                            )
                            .unwrap()
                            {
                                if let Some((_d, gr)) = dpo_step(&rule, g, &m).unwrap() {
                                    dpo_set.insert(key(&gr));
                                }
                            }
                            let mut plus_set = BTreeSet::new();
                            for (m, alpha) in
                                find_strong_matches(&plus, g, MatchConstraint::RegularMono)
                                    .unwrap()
                            {
                                let s = apply_step(&plus, g, &m, &alpha, false).unwrap();
                                plus_set.insert(key(&s.g_r));
                            }
                            assert_eq!(dpo_set, plus_set, "rule #{n_rules} host {}", key(g));
                        }
                    }
                }
            }
        }
    }
    println!(
        "acceptance criterion 3 (DPO subsumption, {n_rules} rules x {} hosts, {n_pairs} pairs): PASS",
        hosts.len()
    );
}

#[test]
fn criterion_4_agree_subsumption() {
    // Same protocol as criterion 3 but over chain(2) and with the extra
    // K' degree of freedom; the rule and host spaces are deterministically
    // strided down to desk scale.
    let lat = Lattice::chain(2).unwrap();
    let components = enumerate_graphs(&lat, 2, 1);
    let all_hosts = enumerate_graphs(&lat, 3, 3);
    let hosts: Vec<&Graph> = all_hosts.iter().step_by(19).collect();
    let mut rules = Vec::new();
    let mut counter = 0usize;
    for k in &components {
        for kp in &components {
            for tk in enumerate_morphisms(k, kp, Constraint::RegularMono, None).unwrap() {
                for l in &components {
                    for lm in enumerate_morphisms(k, l, Constraint::Any, None).unwrap() {
                        for r in &components {
                            for rm in
                                enumerate_morphisms(k, r, Constraint::Any, None).unwrap()
                            {
                                counter += 1;
                                if counter % 971 == 0 {
                                    rules.push(
                                        agree_rule(lm.clone(), rm, tk.clone()).unwrap(),
                                    );
                                }
                            }
                        }
                    }
                }
            }
        }
    }
    assert!(rules.len() >= 40, "sample too small: {}", rules.len());
    for (ri, rule) in rules.iter().enumerate() {
        let plus = translate_agree(rule).unwrap();
        for g in &hosts {
            let mut agree_set = BTreeSet::new();
            let mut n_matches = 0;
            for m in
                enumerate_morphisms(&rule.l_graph, g, Constraint::RegularMono, None).unwrap()
            {
                let (_gk, gr) = agree_step(rule, g, &m).unwrap();
                agree_set.insert(key(&gr));
                n_matches += 1;
            }
            let strong = find_strong_matches(&plus, g, MatchConstraint::RegularMono).unwrap();
            // each regular-mono match admits exactly one adherence
            assert_eq!(strong.len(), n_matches, "rule #{ri}");
            for (i, (m, _)) in strong.iter().enumerate() {
                assert!(
                    !strong.iter().enumerate().any(|(j, (m2, _))| j != i && m2.same_map(m)),
                    "rule #{ri}: non-unique adherence"
                );
            }
            let mut plus_set = BTreeSet::new();
            for (m, alpha) in &strong {
                let s = apply_step(&plus, g, m, alpha, false).unwrap();
                plus_set.insert(key(&s.g_r));
            }
            assert_eq!(agree_set, plus_set, "rule #{ri} host {}", key(g));
        }
    }
    println!(
        "acceptance criterion 4 (AGREE subsumption, {} rules x {} hosts, strided sample): PASS",
        rules.len(),
        hosts.len()
    );
}

fn pbpo_step_relation(rule: &PbpoRule, g: &Graph) -> BTreeSet<String> {
    let mut out = BTreeSet::new();
    for m in enumerate_morphisms(&rule.l_graph, g, Constraint::Any, None).unwrap() {
        for alpha in enumerate_morphisms(g, &rule.lp_graph, Constraint::Any, None).unwrap() {
            if Morphism::compose(&alpha, &m).unwrap().same_map(&rule.t_l) {
                let (_gk, gr) = pbpo_step(rule, g, &m, &alpha).unwrap();
                out.insert(key(&gr));
            }
        }
    }
    out
}

#[test]
fn criterion_5_pbpo_subsumption_via_compaction() {
    let lat = Lattice::unit();
    let p = pool(&lat);
    let hosts = enumerate_graphs(&lat, 3, 3);
    let mut rng = Rng(505);
    for i in 0..50 {
        let rule = random_canonical_pbpo(&p, &mut rng);
        let compacted = compact_rules(&rule, CompactMode::Full).unwrap();
        for g in &hosts {
            let want = pbpo_step_relation(&rule, g);
            let mut got = BTreeSet::new();
            for c in &compacted {
                for (m, alpha) in find_strong_matches(c, g, MatchConstraint::Any).unwrap() {
                    let s = apply_step(c, g, &m, &alpha, false).unwrap();
                    got.insert(key(&s.g_r));
                }
            }
            assert_eq!(want, got, "rule #{i} host {}", key(g));
        }
    }
    println!("acceptance criterion 5 (PBPO subsumption via compaction, 50 random rules): PASS");
}

#[test]
fn criterion_6_counterexample_fixtures() {
    // (a) one vertex with two loops: the commutation-only engine deletes
    // both loops at once; the strong-match engine finds no match at all.
    let f = fixture("example14").unwrap();
    let rule = match &f.rule {
        FixtureRule::Pbpo(r) => r,
        _ => unreachable!(),
    };
    let lat = rule.l_graph.lattice.clone();
    let host = Graph::new(
        lat.clone(),
        &[("a", "*")],
        &[("l1", "a", "a", "*"), ("l2", "a", "a", "*")],
    )
    .unwrap();
    let mut pbpo_steps = 0;
    for m in enumerate_morphisms(&rule.l_graph, &host, Constraint::Any, None).unwrap() {
        for alpha in enumerate_morphisms(&host, &rule.lp_graph, Constraint::Any, None).unwrap()
        {
            if Morphism::compose(&alpha, &m).unwrap().same_map(&rule.t_l) {
                let (_gk, gr) = pbpo_step(rule, &host, &m, &alpha).unwrap();
                assert!(gr.edges.is_empty(), "fold step must delete every loop");
                pbpo_steps += 1;
            }
        }
    }
    assert!(pbpo_steps > 0);
    let plus = validate_rule(
        rule.l.clone(),
        rule.r.clone(),
        rule.t_l.clone(),
        rule.t_k.clone(),
        rule.lp.clone(),
    )
    .unwrap();
    assert!(find_strong_matches(&plus, &host, MatchConstraint::Any).unwrap().is_empty());

    // (b) the node-deletion rule matches exactly the nonempty edgeless
    // hosts among all hosts with <= 3 vertices
    let f = fixture("prop36").unwrap();
    let del = match f.rule {
        FixtureRule::Plus(r) => r,
        _ => unreachable!(),
    };
    for g in enumerate_graphs(&lat, 3, 3) {
        let matched = !find_strong_matches(&del, &g, MatchConstraint::Any).unwrap().is_empty();
        assert_eq!(matched, g.edges.is_empty() && !g.vertices.is_empty(), "{}", key(&g));
    }

    // (c) exactly 4 candidate interface embeddings, exactly 1 mediator
    let f = fixture("remark-u").unwrap();
    let ru = match &f.rule {
        FixtureRule::Pbpo(r) => r,
        _ => unreachable!(),
    };
    let (candidates, u) =
        pbpo_u_candidates(ru, f.match_m.as_ref().unwrap(), f.alpha.as_ref().unwrap()).unwrap();
    assert_eq!(candidates.len(), 4);
    assert_eq!(candidates.iter().filter(|v| v.same_map(&u)).count(), 1);
    println!("acceptance criterion 6 (counterexample fixtures a/b/c): PASS");
}

#[test]
fn criterion_7_determinism_for_certified_rules() {
    let mut rules: Vec<Rule> = Vec::new();
    for name in ["example4", "relabel", "sorts", "variables", "prop36"] {
        if let FixtureRule::Plus(r) = fixture(name).unwrap().rule {
            rules.push(r);
        }
    }
    let example4_certified =
        determinism_certificate(&rules[0]).unwrap().certified;
    assert!(example4_certified, "the merge/extend fixture rule must be certified");
    let mut rng = Rng(707);
    for lat in [Lattice::unit(), Lattice::chain(2).unwrap()] {
        let p = pool(&lat);
        for _ in 0..15 {
            rules.push(random_rule(&p, &mut rng));
        }
    }
    let mut certified = 0;
    for rule in &rules {
        // the certificate is quasitopos-only and refuses non-Heyting lattices
        let is_certified = match determinism_certificate(rule) {
            Ok(c) => c.certified,
            Err(pbpo_core::Error::NonHeytingLattice) => false,
            Err(e) => panic!("{e}"),
        };
        if !is_certified {
            continue;
        }
        certified += 1;
        // host bounds scale down with lattice size to stay at desk scale
        let (mv, me) = match rule.l_graph.lattice.elements().len() {
            1 => (4, 3),
            2 => (3, 2),
            _ => (2, 1),
        };
        for g in enumerate_graphs(&rule.l_graph.lattice, mv, me) {
            let matches = find_strong_matches(rule, &g, MatchConstraint::Any).unwrap();
            for (i, (m, _)) in matches.iter().enumerate() {
                assert!(
                    !matches.iter().enumerate().any(|(j, (m2, _))| j != i && m2.same_map(m)),
                    "match group of size > 1 for a certified rule"
                );
            }
        }
    }
    assert!(certified >= 1);
    println!(
        "acceptance criterion 7 (determinism for certified rules, {certified} certified): PASS"
    );
}

#[test]
fn criterion_8_labeled_fixtures() {
    // relabel: x^a -> z^b rewrites to x^c -> z^b, labels compared literally
    let f = fixture("relabel").unwrap();
    let rule = match &f.rule {
        FixtureRule::Plus(r) => r,
        _ => unreachable!(),
    };
    let s = apply_step(
        rule,
        f.host.as_ref().unwrap(),
        f.match_m.as_ref().unwrap(),
        f.alpha.as_ref().unwrap(),
        false,
    )
    .unwrap();
    let mut labels: Vec<&str> = s.g_r.vertices.values().map(|l| l.as_str()).collect();
    labels.sort();
    assert_eq!(labels, vec!["b", "c"]);
    assert_eq!(s.g_r.edges.len(), 1);
    assert_eq!(s.g_r.edges.values().next().unwrap().label, "_bot");

    // variables: f(g(x), y) rewrites to the h-rooted shape with the
    // duplicated subtrees; vertex and edge counts asserted
    let f = fixture("variables").unwrap();
    let rule = match &f.rule {
        FixtureRule::Plus(r) => r,
        _ => unreachable!(),
    };
    let s = apply_step(
        rule,
        f.host.as_ref().unwrap(),
        f.match_m.as_ref().unwrap(),
        f.alpha.as_ref().unwrap(),
        false,
    )
    .unwrap();
    assert_eq!(s.g_r.vertices.len(), 6);
    assert_eq!(s.g_r.edges.len(), 5);
    let mut vlabels: Vec<&str> = s.g_r.vertices.values().map(|l| l.as_str()).collect();
    vlabels.sort();
    assert_eq!(vlabels, vec!["c", "c", "c", "g", "g", "h"]);
    let mut elabels: Vec<&str> = s.g_r.edges.values().map(|e| e.label.as_str()).collect();
    elabels.sort();
    assert_eq!(elabels, vec!["1", "1", "1", "2", "3"]);
    println!("acceptance criterion 8 (relabeling and term-rewriting fixtures): PASS");
}

/// A random subgraph inclusion into g.
fn random_subgraph_inclusion(g: &Graph, rng: &mut Rng) -> Morphism {
    let mut sub = g.clone();
    let keep: Vec<String> =
        g.vertices.keys().filter(|_| rng.below(2) == 0).cloned().collect();
    sub.vertices.retain(|v, _| keep.contains(v));
    sub.edges.retain(|_, e| {
        keep.contains(&e.src) && keep.contains(&e.tgt)
    });
    let drop_edges: Vec<String> =
        sub.edges.keys().filter(|_| rng.below(3) == 0).cloned().collect();
    sub.edges.retain(|e, _| !drop_edges.contains(e));
    Morphism::new(
        sub.clone(),
        g.clone(),
        sub.vertices.keys().map(|v| (v.clone(), v.clone())).collect(),
        sub.edges.keys().map(|e| (e.clone(), e.clone())).collect(),
    )
    .unwrap()
}

#[test]
fn criterion_9_quasitopos_spot_checks() {
    let lat = Lattice::chain(2).unwrap();
    let p = pool(&lat);
    let mut rng = Rng(909);
    for _ in 0..250 {
        // pushout along a regular mono is a pullback, and the pushed-out
        // leg is again a regular mono
        let b = random_host(&p, &mut rng, 3, 3);
        let m = random_subgraph_inclusion(&b, &mut rng);
        let a = m.dom.clone();
        let c = random_host(&p, &mut rng, 3, 3);
        let gs = enumerate_morphisms(&a, &c, Constraint::Any, None).unwrap();
        let g = if gs.is_empty() { Morphism::identity(&a) } else { gs[rng.below(gs.len())].clone() };
        let (_q, q1, q2) = pushout(&m, &g).unwrap();
        assert!(is_pullback_square(&q1, &q2, &m, &g).unwrap());
        assert!(q2.is_regular_mono(), "pushout must preserve regular monos");

        // pullback of a regular mono is a regular mono
        let d = random_host(&p, &mut rng, 3, 3);
        let f = random_subgraph_inclusion(&d, &mut rng);
        let c2 = random_host(&p, &mut rng, 3, 3);
        let hs = enumerate_morphisms(&c2, &d, Constraint::Any, None).unwrap();
        let h = if hs.is_empty() { Morphism::identity(&d) } else { hs[rng.below(hs.len())].clone() };
        let (_pb, _p1, p2) = pullback(&f, &h).unwrap();
        assert!(p2.is_regular_mono(), "pullback must preserve regular monos");
    }
    // lattice spot checks; note: the two-element flat lattice is the 2x2
    // Boolean algebra and IS infinitely distributive — distributivity
    // first fails at three base elements
    assert!(Lattice::flat(["a", "b"]).unwrap().is_heyting());
    assert!(!Lattice::flat(["a", "b", "c"]).unwrap().is_heyting());
    println!(
        "acceptance criterion 9 (quasitopos laws, 500 instances; flat({{a,b}}) is Heyting, \
         flat({{a,b,c}}) is the non-Heyting witness): PASS"
    );
}
