use crate::error::Result;
use crate::graph::{Graph, Morphism};
use crate::interop::{agree_rule, pbpo_rule, AgreeRule, PbpoRule};
use crate::lattice::{Lattice, LatticeRef, BOT, TOP};
use crate::limits::pushout;
use crate::rewrite::{validate_rule, Rule};

/// The rule diagram variant a fixture ships.
#[derive(Debug, Clone)]
pub enum FixtureRule {
    /// Five-object rule with strong matching.
    Plus(Rule),
    /// Full two-row rule with commutation-only matching.
    Pbpo(PbpoRule),
    /// Span plus interface embedding.
    Agree(AgreeRule),
}

/// A built-in worked example: a rule, optionally a host graph with a chosen
/// match/adherence, and the expected step results for regression pinning.
#[derive(Debug, Clone)]
pub struct Fixture {
    pub name: &'static str,
    pub description: &'static str,
    pub rule: FixtureRule,
    pub host: Option<Graph>,
    pub match_m: Option<Morphism>,
    pub alpha: Option<Morphism>,
    pub expected_g_k: Option<Graph>,
    pub expected_g_r: Option<Graph>,
}

pub const FIXTURE_NAMES: &[&str] = &[
    "example4",
    "example6",
    "example14",
    "example15",
    "relabel",
    "sorts",
    "variables",
    "prop36",
    "agree-not-pbpo",
    "remark-u",
];

pub fn fixture(name: &str) -> Option<Fixture> {
    let f = match name {
        "example4" => example4(),
        "example6" => example6(),
        "example14" => example14(),
        "example15" => example15(),
        "relabel" => relabel(),
        "sorts" => sorts(),
        "variables" => variables(),
        "prop36" => prop36(),
        "agree-not-pbpo" => agree_not_pbpo(),
        "remark-u" => remark_u(),
        _ => return None,
    };
    Some(f.expect("built-in fixture must construct"))
}

fn ugraph(lat: &LatticeRef, vs: &[&str], es: &[(&str, &str, &str, &str)]) -> Graph {
    let vs: Vec<(&str, &str)> = vs.iter().map(|v| (*v, "*")).collect();
    Graph::new(lat.clone(), &vs, es).unwrap()
}

fn morph(dom: &Graph, cod: &Graph, vs: &[(&str, &str)], es: &[(&str, &str)]) -> Morphism {
    Morphism::from_pairs(dom, cod, vs, es).unwrap()
}

/// Unlabeled merge/extend rule: the pattern is an edge from a two-element
/// vertex to y; the interface splits the source and drops the edge; the
/// replacement merges x1 with y, gives x2 a loop and adds a fresh vertex u.
/// The context type forbids patch edges targeting y, duplicates patch edges
/// y -> x2, redirects z-sourced patch edges to x1 and drops edges into z.
fn example4_rule() -> Result<Rule> {
    let lat = Lattice::unit();
    let l = ugraph(&lat, &["x1x2", "y"], &[("lxy", "x1x2", "y", "*")]);
    let k = ugraph(&lat, &["x1", "x2", "y"], &[]);
    let r = ugraph(&lat, &["u", "x1y", "x2"], &[("rloop", "x2", "x2", "*")]);
    let lp = ugraph(
        &lat,
        &["x1x2", "y", "z"],
        &[
            ("p1", "x1x2", "y", "*"),
            ("s1", "z", "x1x2", "*"),
            ("s2", "z", "z", "*"),
            ("s3", "y", "x1x2", "*"),
            ("s4", "y", "z", "*"),
        ],
    );
    let kp = ugraph(
        &lat,
        &["x1", "x2", "y", "z"],
        &[
            ("k1", "y", "x2", "*"),
            ("k2", "y", "x2", "*"),
            ("k3", "z", "z", "*"),
            ("k4", "z", "x1", "*"),
        ],
    );
    validate_rule(
        morph(&k, &l, &[("x1", "x1x2"), ("x2", "x1x2"), ("y", "y")], &[]),
        morph(&k, &r, &[("x1", "x1y"), ("x2", "x2"), ("y", "x1y")], &[]),
        morph(&l, &lp, &[("x1x2", "x1x2"), ("y", "y")], &[("lxy", "p1")]),
        morph(&k, &kp, &[("x1", "x1"), ("x2", "x2"), ("y", "y")], &[]),
        morph(
            &kp,
            &lp,
            &[("x1", "x1x2"), ("x2", "x1x2"), ("y", "y"), ("z", "z")],
            &[("k1", "s3"), ("k2", "s3"), ("k3", "s2"), ("k4", "s1")],
        ),
    )
}

fn example4() -> Result<Fixture> {
    Ok(Fixture {
        name: "example4",
        description: "merge, extend and rewire an edge pattern in a constrained context",
        rule: FixtureRule::Plus(example4_rule()?),
        host: None,
        match_m: None,
        alpha: None,
        expected_g_k: None,
        expected_g_r: None,
    })
}

/// The example4 rule applied to a host with a three-vertex z-cluster,
/// pinning the full step: patch edges into y are absent, z-edges into the
/// pattern are rerouted to x1, and y -> x2 patch edges are duplicated.
fn example6() -> Result<Fixture> {
    let rule = example4_rule()?;
    let lat = rule.l_graph.lattice.clone();
    let host = ugraph(
        &lat,
        &["x1x2", "y", "z1", "z2", "z3"],
        &[
            ("e1", "x1x2", "y", "*"),
            ("e2", "z1", "x1x2", "*"),
            ("e3", "z2", "z1", "*"),
            ("e4", "z2", "x1x2", "*"),
            ("e5", "z1", "z2", "*"),
            ("e6", "y", "x1x2", "*"),
            ("e7", "y", "x1x2", "*"),
            ("e8", "y", "z2", "*"),
        ],
    );
    let m = morph(
        &rule.l_graph,
        &host,
        &[("x1x2", "x1x2"), ("y", "y")],
        &[("lxy", "e1")],
    );
    let alpha = morph(
        &host,
        &rule.lp_graph,
        &[("x1x2", "x1x2"), ("y", "y"), ("z1", "z"), ("z2", "z"), ("z3", "z")],
        &[
            ("e1", "p1"),
            ("e2", "s1"),
            ("e3", "s2"),
            ("e4", "s1"),
            ("e5", "s2"),
            ("e6", "s3"),
            ("e7", "s3"),
            ("e8", "s4"),
        ],
    );
    let expected_g_k = ugraph(
        &lat,
        &["x1", "x2", "y", "z1", "z2", "z3"],
        &[
            ("f1", "z1", "x1", "*"),
            ("f2", "z2", "x1", "*"),
            ("f3", "z2", "z1", "*"),
            ("f4", "z1", "z2", "*"),
            ("f5", "y", "x2", "*"),
            ("f6", "y", "x2", "*"),
            ("f7", "y", "x2", "*"),
            ("f8", "y", "x2", "*"),
        ],
    );
    let expected_g_r = ugraph(
        &lat,
        &["u", "x1y", "x2", "z1", "z2", "z3"],
        &[
            ("g1", "z1", "x1y", "*"),
            ("g2", "z2", "x1y", "*"),
            ("g3", "z2", "z1", "*"),
            ("g4", "z1", "z2", "*"),
            ("g5", "x1y", "x2", "*"),
            ("g6", "x1y", "x2", "*"),
            ("g7", "x1y", "x2", "*"),
            ("g8", "x1y", "x2", "*"),
            ("g9", "x2", "x2", "*"),
        ],
    );
    Ok(Fixture {
        name: "example6",
        description: "full step of the example4 rule on a five-vertex host",
        rule: FixtureRule::Plus(rule),
        host: Some(host),
        match_m: Some(m),
        alpha: Some(alpha),
        expected_g_k: Some(expected_g_k),
        expected_g_r: Some(expected_g_r),
    })
}

/// Loop removal under commutation-only matching: the adherence may fold the
/// whole host onto the pattern component, deleting every loop at once.
fn example14() -> Result<Fixture> {
    let lat = Lattice::unit();
    let l = ugraph(&lat, &["x"], &[("ll", "x", "x", "*")]);
    let k = ugraph(&lat, &["x"], &[]);
    let r = ugraph(&lat, &["x"], &[]);
    let lp = ugraph(&lat, &["x", "y"], &[("pl", "x", "x", "*"), ("yl", "y", "y", "*")]);
    let kp = ugraph(&lat, &["x", "y"], &[("kyl", "y", "y", "*")]);
    let rm = morph(&k, &r, &[("x", "x")], &[]);
    let t_k = morph(&k, &kp, &[("x", "x")], &[]);
    let (_rp_g, t_r, rp) = pushout(&rm, &t_k)?;
    let rule = pbpo_rule(
        morph(&k, &l, &[("x", "x")], &[]),
        rm,
        morph(&l, &lp, &[("x", "x")], &[("ll", "pl")]),
        t_k,
        t_r,
        morph(&kp, &lp, &[("x", "x"), ("y", "y")], &[("kyl", "yl")]),
        rp,
    )?;
    let host = ugraph(&lat, &["a", "b"], &[("la", "a", "a", "*"), ("lb", "b", "b", "*")]);
    let m = morph(&rule.l_graph, &host, &[("x", "a")], &[("ll", "la")]);
    let alpha = morph(
        &host,
        &rule.lp_graph,
        &[("a", "x"), ("b", "x")],
        &[("la", "pl"), ("lb", "pl")],
    );
    let expected = ugraph(&lat, &["a", "b"], &[]);
    Ok(Fixture {
        name: "example14",
        description: "loop removal whose fold adherence deletes every loop at once",
        rule: FixtureRule::Pbpo(rule),
        host: Some(host),
        match_m: Some(m),
        alpha: Some(alpha),
        expected_g_k: Some(expected.clone()),
        expected_g_r: Some(expected),
    })
}

/// Extend/merge rule on a spiralled host: the pullback duplicates every
/// host element the adherence folds onto the pattern's x vertex.
fn example15() -> Result<Fixture> {
    let lat = Lattice::unit();
    let l = ugraph(
        &lat,
        &["x", "y"],
        &[("exy", "x", "y", "*"), ("eyx", "y", "x", "*")],
    );
    let k = ugraph(
        &lat,
        &["x", "y", "xp"],
        &[("exy", "x", "y", "*"), ("eyx", "y", "x", "*"), ("expy", "xp", "y", "*")],
    );
    let r = ugraph(
        &lat,
        &["x", "yxp"],
        &[("exy", "x", "yxp", "*"), ("eyx", "yxp", "x", "*"), ("eloop", "yxp", "yxp", "*")],
    );
    let fold = |dom: &Graph, cod: &Graph| {
        morph(
            dom,
            cod,
            &[("x", "x"), ("y", "y"), ("xp", "x")],
            &[("exy", "exy"), ("eyx", "eyx"), ("expy", "exy")],
        )
    };
    let lm = fold(&k, &l);
    let rm = morph(
        &k,
        &r,
        &[("x", "x"), ("y", "yxp"), ("xp", "yxp")],
        &[("exy", "exy"), ("eyx", "eyx"), ("expy", "eloop")],
    );
    let t_k = Morphism::identity(&k);
    let (_rp_g, t_r, rp) = pushout(&rm, &t_k)?;
    let rule = pbpo_rule(lm, rm, Morphism::identity(&l), t_k, t_r, fold(&k, &l), rp)?;
    let host = ugraph(
        &lat,
        &["x", "y", "x1", "y1", "x2"],
        &[
            ("hxy", "x", "y", "*"),
            ("hyx", "y", "x", "*"),
            ("h1", "y", "x1", "*"),
            ("h2", "x1", "y1", "*"),
            ("h3", "y1", "x2", "*"),
        ],
    );
    let m = morph(
        &rule.l_graph,
        &host,
        &[("x", "x"), ("y", "y")],
        &[("exy", "hxy"), ("eyx", "hyx")],
    );
    let alpha = morph(
        &host,
        &rule.lp_graph,
        &[("x", "x"), ("y", "y"), ("x1", "x"), ("y1", "y"), ("x2", "x")],
        &[
            ("hxy", "exy"),
            ("hyx", "eyx"),
            ("h1", "eyx"),
            ("h2", "exy"),
            ("h3", "eyx"),
        ],
    );
    let expected_g_k = ugraph(
        &lat,
        &["x", "xs", "y", "x1", "x1s", "y1", "x2", "x2s"],
        &[
            ("f1", "x", "y", "*"),
            ("f2", "y", "x", "*"),
            ("f3", "y", "x1", "*"),
            ("f4", "x1", "y1", "*"),
            ("f5", "y1", "x2", "*"),
            ("f6", "xs", "y", "*"),
            ("f7", "x1s", "y1", "*"),
        ],
    );
    let expected_g_r = ugraph(
        &lat,
        &["x", "yxs", "x1", "x1s", "y1", "x2", "x2s"],
        &[
            ("g1", "x", "yxs", "*"),
            ("g2", "yxs", "x", "*"),
            ("g3", "yxs", "yxs", "*"),
            ("g4", "yxs", "x1", "*"),
            ("g5", "x1", "y1", "*"),
            ("g6", "y1", "x2", "*"),
            ("g7", "x1s", "y1", "*"),
        ],
    );
    Ok(Fixture {
        name: "example15",
        description: "spiralled host: folding duplicates the alpha-preimage of the pattern",
        rule: FixtureRule::Pbpo(rule),
        host: Some(host),
        match_m: Some(m),
        alpha: Some(alpha),
        expected_g_k: Some(expected_g_k),
        expected_g_r: Some(expected_g_r),
    })
}

/// Relabeling over a flat vertex-label lattice: match any vertex in any
/// context (bottom pattern label, top type labels), erase its label through
/// the interface type and overwrite it with c from the replacement.
fn relabel() -> Result<Fixture> {
    let lat = Lattice::flat(["a", "b", "c"])?;
    let l = Graph::new(lat.clone(), &[("x", BOT)], &[]).unwrap();
    let k = Graph::new(lat.clone(), &[("x", BOT)], &[]).unwrap();
    let r = Graph::new(lat.clone(), &[("x", "c")], &[]).unwrap();
    let type_edges = [
        ("xl", "x", "x", TOP),
        ("zl", "z", "z", TOP),
        ("xz", "x", "z", TOP),
        ("zx", "z", "x", TOP),
    ];
    let lp = Graph::new(lat.clone(), &[("x", TOP), ("z", TOP)], &type_edges).unwrap();
    let kp = Graph::new(lat.clone(), &[("x", BOT), ("z", TOP)], &type_edges).unwrap();
    let ident_e = [("xl", "xl"), ("zl", "zl"), ("xz", "xz"), ("zx", "zx")];
    let rule = validate_rule(
        morph(&k, &l, &[("x", "x")], &[]),
        morph(&k, &r, &[("x", "x")], &[]),
        morph(&l, &lp, &[("x", "x")], &[]),
        morph(&k, &kp, &[("x", "x")], &[]),
        morph(&kp, &lp, &[("x", "x"), ("z", "z")], &ident_e),
    )?;
    let host = Graph::new(
        lat.clone(),
        &[("x", "a"), ("z", "b")],
        &[("e", "x", "z", BOT)],
    )
    .unwrap();
    let m = morph(&rule.l_graph, &host, &[("x", "x")], &[]);
    let alpha = morph(
        &host,
        &rule.lp_graph,
        &[("x", "x"), ("z", "z")],
        &[("e", "xz")],
    );
    let expected_g_k = Graph::new(
        lat.clone(),
        &[("x", BOT), ("z", "b")],
        &[("e", "x", "z", BOT)],
    )
    .unwrap();
    let expected_g_r = Graph::new(
        lat,
        &[("x", "c"), ("z", "b")],
        &[("e", "x", "z", BOT)],
    )
    .unwrap();
    Ok(Fixture {
        name: "relabel",
        description: "overwrite an arbitrary vertex label with c in any context",
        rule: FixtureRule::Plus(rule),
        host: Some(host),
        match_m: Some(m),
        alpha: Some(alpha),
        expected_g_k: Some(expected_g_k),
        expected_g_r: Some(expected_g_r),
    })
}

/// Sorted process/data lattice: bot < p_i < P < top, bot < d_i < D < top,
/// and the edge sorts rhd (channel) and at (local copy) directly under top.
fn sorts_lattice() -> Result<LatticeRef> {
    let names = ["p1", "p2", "P", "d1", "d2", "D", "rhd", "at"];
    let elements: Vec<String> = [BOT, TOP]
        .iter()
        .map(|s| s.to_string())
        .chain(names.iter().map(|s| s.to_string()))
        .collect();
    let mut leq = vec![];
    for n in names {
        leq.push((BOT.to_string(), n.to_string()));
        leq.push((n.to_string(), TOP.to_string()));
    }
    leq.push((BOT.to_string(), TOP.to_string()));
    leq.push(("p1".to_string(), "P".to_string()));
    leq.push(("p2".to_string(), "P".to_string()));
    leq.push(("d1".to_string(), "D".to_string()));
    leq.push(("d2".to_string(), "D".to_string()));
    Lattice::explicit(elements, leq)
}

/// Receive the last datum of a non-empty FIFO channel and store it locally:
/// the interface type splits the datum node into a label-forgetting copy
/// fused with the receiver and a context-forgetting copy kept as the local
/// datum.
fn sorts() -> Result<Fixture> {
    let lat = sorts_lattice()?;
    let l = Graph::new(
        lat.clone(),
        &[("x12", BOT), ("y", BOT)],
        &[("ch", "x12", "y", "rhd")],
    )
    .unwrap();
    let k = Graph::new(
        lat.clone(),
        &[("x1", BOT), ("x2", BOT), ("y", BOT)],
        &[],
    )
    .unwrap();
    let r = Graph::new(
        lat.clone(),
        &[("x1y", BOT), ("x2", BOT)],
        &[("cp", "x2", "x1y", "at")],
    )
    .unwrap();
    let lp = Graph::new(
        lat.clone(),
        &[("x12", "D"), ("y", "P"), ("z", TOP)],
        &[
            ("ch", "x12", "y", "rhd"),
            ("zz", "z", "z", TOP),
            ("zx", "z", "x12", TOP),
            ("zy", "z", "y", TOP),
            ("yz", "y", "z", TOP),
        ],
    )
    .unwrap();
    let kp = Graph::new(
        lat.clone(),
        &[("x1", BOT), ("x2", "D"), ("y", "P"), ("z", TOP)],
        &[
            ("zz", "z", "z", TOP),
            ("zx", "z", "x1", TOP),
            ("zy", "z", "y", TOP),
            ("yz", "y", "z", TOP),
        ],
    )
    .unwrap();
    let rule = validate_rule(
        morph(&k, &l, &[("x1", "x12"), ("x2", "x12"), ("y", "y")], &[]),
        morph(&k, &r, &[("x1", "x1y"), ("x2", "x2"), ("y", "x1y")], &[]),
        morph(&l, &lp, &[("x12", "x12"), ("y", "y")], &[("ch", "ch")]),
        morph(&k, &kp, &[("x1", "x1"), ("x2", "x2"), ("y", "y")], &[]),
        morph(
            &kp,
            &lp,
            &[("x1", "x12"), ("x2", "x12"), ("y", "y"), ("z", "z")],
            &[("zz", "zz"), ("zx", "zx"), ("zy", "zy"), ("yz", "yz")],
        ),
    )?;
    // host: channel p1 -rhd-> d1 -rhd-> p2
    let host = Graph::new(
        lat.clone(),
        &[("s", "p1"), ("d", "d1"), ("t", "p2")],
        &[("c1", "s", "d", "rhd"), ("c2", "d", "t", "rhd")],
    )
    .unwrap();
    let m = morph(
        &rule.l_graph,
        &host,
        &[("x12", "d"), ("y", "t")],
        &[("ch", "c2")],
    );
    let alpha = morph(
        &host,
        &rule.lp_graph,
        &[("s", "z"), ("d", "x12"), ("t", "y")],
        &[("c1", "zx"), ("c2", "ch")],
    );
    let expected_g_k = Graph::new(
        lat.clone(),
        &[("a", BOT), ("b", "d1"), ("t", "p2"), ("s", "p1")],
        &[("c1", "s", "a", "rhd")],
    )
    .unwrap();
    let expected_g_r = Graph::new(
        lat,
        &[("t", "p2"), ("d", "d1"), ("s", "p1")],
        &[("c1", "s", "t", "rhd"), ("cp", "d", "t", "at")],
    )
    .unwrap();
    Ok(Fixture {
        name: "sorts",
        description: "receive a datum from a sorted FIFO channel",
        rule: FixtureRule::Plus(rule),
        host: Some(host),
        match_m: Some(m),
        alpha: Some(alpha),
        expected_g_k: Some(expected_g_k),
        expected_g_r: Some(expected_g_r),
    })
}

/// Term rewrite rule f(g(x), y) -> h(g(x), g(y), x) on tree encodings:
/// variable subtrees are captured by context vertices of the type graphs.
fn variables() -> Result<Fixture> {
    let lat = Lattice::flat(["f", "g", "h", "c", "1", "2", "3"])?;
    let l = Graph::new(
        lat.clone(),
        &[("vf", "f"), ("wg", "g"), ("y", BOT), ("x12", BOT)],
        &[
            ("a1", "vf", "wg", "1"),
            ("a2", "wg", "x12", "1"),
            ("a3", "vf", "y", "2"),
        ],
    )
    .unwrap();
    let k = Graph::new(
        lat.clone(),
        &[("x", BOT), ("w", BOT), ("x1", BOT), ("x2", BOT)],
        &[],
    )
    .unwrap();
    let r = Graph::new(
        lat.clone(),
        &[
            ("x", "h"),
            ("z1", "g"),
            ("z2", "g"),
            ("x1", BOT),
            ("x2", BOT),
            ("w", BOT),
        ],
        &[
            ("b1", "x", "z1", "1"),
            ("b2", "x", "z2", "2"),
            ("b3", "x", "x2", "3"),
            ("b4", "z1", "x1", "1"),
            ("b5", "z2", "w", "1"),
        ],
    )
    .unwrap();
    let lp = Graph::new(
        lat.clone(),
        &[
            ("u", TOP),
            ("x", "f"),
            ("wg", "g"),
            ("w", TOP),
            ("v", TOP),
            ("vp", TOP),
            ("wp", TOP),
        ],
        &[
            ("ux", "u", "x", TOP),
            ("uu", "u", "u", TOP),
            ("a1", "x", "wg", "1"),
            ("a2", "wg", "v", "1"),
            ("vv", "v", "vp", TOP),
            ("vl", "vp", "vp", TOP),
            ("a3", "x", "w", "2"),
            ("ww", "w", "wp", TOP),
            ("wl", "wp", "wp", TOP),
        ],
    )
    .unwrap();
    let kp = Graph::new(
        lat.clone(),
        &[
            ("u", TOP),
            ("x", BOT),
            ("w", TOP),
            ("wp", TOP),
            ("x1", TOP),
            ("x2", TOP),
            ("x1p", TOP),
            ("x2p", TOP),
        ],
        &[
            ("ux", "u", "x", TOP),
            ("uu", "u", "u", TOP),
            ("v1", "x1", "x1p", TOP),
            ("l1", "x1p", "x1p", TOP),
            ("v2", "x2", "x2p", TOP),
            ("l2", "x2p", "x2p", TOP),
            ("ww", "w", "wp", TOP),
            ("wl", "wp", "wp", TOP),
        ],
    )
    .unwrap();
    let rule = validate_rule(
        morph(
            &k,
            &l,
            &[("x", "vf"), ("w", "y"), ("x1", "x12"), ("x2", "x12")],
            &[],
        ),
        morph(
            &k,
            &r,
            &[("x", "x"), ("w", "w"), ("x1", "x1"), ("x2", "x2")],
            &[],
        ),
        morph(
            &l,
            &lp,
            &[("vf", "x"), ("wg", "wg"), ("y", "w"), ("x12", "v")],
            &[("a1", "a1"), ("a2", "a2"), ("a3", "a3")],
        ),
        morph(
            &k,
            &kp,
            &[("x", "x"), ("w", "w"), ("x1", "x1"), ("x2", "x2")],
            &[],
        ),
        morph(
            &kp,
            &lp,
            &[
                ("u", "u"),
                ("x", "x"),
                ("w", "w"),
                ("wp", "wp"),
                ("x1", "v"),
                ("x2", "v"),
                ("x1p", "vp"),
                ("x2p", "vp"),
            ],
            &[
                ("ux", "ux"),
                ("uu", "uu"),
                ("v1", "vv"),
                ("l1", "vl"),
                ("v2", "vv"),
                ("l2", "vl"),
                ("ww", "ww"),
                ("wl", "wl"),
            ],
        ),
    )?;
    // host: encoding of f(g(c), c)
    let host = Graph::new(
        lat.clone(),
        &[("root", "f"), ("n1", "g"), ("n2", "c"), ("n3", "c")],
        &[
            ("h1", "root", "n1", "1"),
            ("h2", "n1", "n2", "1"),
            ("h3", "root", "n3", "2"),
        ],
    )
    .unwrap();
    let m = morph(
        &rule.l_graph,
        &host,
        &[("vf", "root"), ("wg", "n1"), ("x12", "n2"), ("y", "n3")],
        &[("a1", "h1"), ("a2", "h2"), ("a3", "h3")],
    );
    let alpha = morph(
        &host,
        &rule.lp_graph,
        &[("root", "x"), ("n1", "wg"), ("n2", "v"), ("n3", "w")],
        &[("h1", "a1"), ("h2", "a2"), ("h3", "a3")],
    );
    let expected_g_k = Graph::new(
        lat.clone(),
        &[("rx", BOT), ("c1", "c"), ("c2", "c"), ("c3", "c")],
        &[],
    )
    .unwrap();
    // h(g(c), g(c), c)
    let expected_g_r = Graph::new(
        lat,
        &[
            ("root", "h"),
            ("z1", "g"),
            ("z2", "g"),
            ("c1", "c"),
            ("c2", "c"),
            ("c3", "c"),
        ],
        &[
            ("b1", "root", "z1", "1"),
            ("b2", "root", "z2", "2"),
            ("b3", "root", "c2", "3"),
            ("b4", "z1", "c1", "1"),
            ("b5", "z2", "c3", "1"),
        ],
    )
    .unwrap();
    Ok(Fixture {
        name: "variables",
        description: "term rule f(g(x),y) -> h(g(x),g(y),x) on tree encodings",
        rule: FixtureRule::Plus(rule),
        host: Some(host),
        match_m: Some(m),
        alpha: Some(alpha),
        expected_g_k: Some(expected_g_k),
        expected_g_r: Some(expected_g_r),
    })
}

/// Deletion of a single node in a host graph without edges: no DPO or AGREE
/// rule set can forbid context edges, and commutation-only matching cannot
/// prevent folding the whole host onto the pattern.
fn prop36() -> Result<Fixture> {
    let lat = Lattice::unit();
    let l = ugraph(&lat, &["x"], &[]);
    let k = ugraph(&lat, &[], &[]);
    let r = ugraph(&lat, &[], &[]);
    let lp = ugraph(&lat, &["x", "y"], &[]);
    let kp = ugraph(&lat, &["y"], &[]);
    let rule = validate_rule(
        morph(&k, &l, &[], &[]),
        morph(&k, &r, &[], &[]),
        morph(&l, &lp, &[("x", "x")], &[]),
        morph(&k, &kp, &[], &[]),
        morph(&kp, &lp, &[("y", "y")], &[]),
    )?;
    Ok(Fixture {
        name: "prop36",
        description: "delete one node of an edge-free host; inexpressible in DPO/AGREE/PBPO",
        rule: FixtureRule::Plus(rule),
        host: None,
        match_m: None,
        alpha: None,
        expected_g_k: None,
        expected_g_r: None,
    })
}

/// Node deletion with preserved context as an AGREE rule; its
/// commutation-only interpretation admits a fold adherence that empties the
/// host, which AGREE never produces.
fn agree_not_pbpo() -> Result<Fixture> {
    let lat = Lattice::unit();
    let l = ugraph(&lat, &["x"], &[]);
    let k = ugraph(&lat, &[], &[]);
    let r = ugraph(&lat, &[], &[]);
    let kp = ugraph(&lat, &["y"], &[("yy", "y", "y", "*")]);
    let rule = agree_rule(
        morph(&k, &l, &[], &[]),
        morph(&k, &r, &[], &[]),
        morph(&k, &kp, &[], &[]),
    )?;
    let host = ugraph(&lat, &["x", "y"], &[]);
    let m = morph(&rule.l_graph, &host, &[("x", "x")], &[]);
    let expected = ugraph(&lat, &["y"], &[]);
    Ok(Fixture {
        name: "agree-not-pbpo",
        description: "node deletion whose AGREE steps cannot be folded away",
        rule: FixtureRule::Agree(rule),
        host: Some(host),
        match_m: Some(m),
        alpha: None,
        expected_g_k: Some(expected.clone()),
        expected_g_r: Some(expected),
    })
}

/// Commutation-only matching underdetermines the interface embedding: four
/// morphisms K -> G_K respect the typing leg but only one is the pullback
/// mediator.
fn remark_u() -> Result<Fixture> {
    let lat = Lattice::unit();
    let l = ugraph(&lat, &["x"], &[]);
    let k = ugraph(&lat, &["x1", "x2"], &[]);
    let fold = |dom: &Graph, cod: &Graph| morph(dom, cod, &[("x1", "x"), ("x2", "x")], &[]);
    let rule = pbpo_rule(
        fold(&k, &l),
        Morphism::identity(&k),
        Morphism::identity(&l),
        Morphism::identity(&k),
        Morphism::identity(&k),
        fold(&k, &l),
        Morphism::identity(&k),
    )?;
    let host = ugraph(&lat, &["a", "b"], &[]);
    let m = morph(&rule.l_graph, &host, &[("x", "a")], &[]);
    let alpha = morph(&host, &rule.lp_graph, &[("a", "x"), ("b", "x")], &[]);
    Ok(Fixture {
        name: "remark-u",
        description: "four candidate interface embeddings, one pullback mediator",
        rule: FixtureRule::Pbpo(rule),
        host: Some(host),
        match_m: Some(m),
        alpha: Some(alpha),
        expected_g_k: None,
        expected_g_r: None,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::enumerate::are_isomorphic;
    use crate::interop::{agree_step, pbpo_step, pbpo_u_candidates};
    use crate::rewrite::{apply_step, find_strong_matches, MatchConstraint};

    #[test]
    fn all_fixtures_construct() {
        for name in FIXTURE_NAMES {
            assert!(fixture(name).is_some(), "fixture {name} missing");
        }
        assert!(fixture("nope").is_none());
    }

    fn run_plus(f: &Fixture) -> (Graph, Graph) {
        let rule = match &f.rule {
            FixtureRule::Plus(r) => r,
            _ => panic!("expected a strong-matching rule"),
        };
        let step = apply_step(
            rule,
            f.host.as_ref().unwrap(),
            f.match_m.as_ref().unwrap(),
            f.alpha.as_ref().unwrap(),
            true,
        )
        .unwrap();
        (step.g_k, step.g_r)
    }

    #[test]
    fn example6_step_matches_figure() {
        let f = fixture("example6").unwrap();
        let (g_k, g_r) = run_plus(&f);
        assert!(are_isomorphic(&g_k, f.expected_g_k.as_ref().unwrap()).unwrap());
        assert!(are_isomorphic(&g_r, f.expected_g_r.as_ref().unwrap()).unwrap());
    }

    #[test]
    fn example14_fold_deletes_both_loops() {
        let f = fixture("example14").unwrap();
        let rule = match &f.rule {
            FixtureRule::Pbpo(r) => r,
            _ => unreachable!(),
        };
        let (g_k, g_r) = pbpo_step(
            rule,
            f.host.as_ref().unwrap(),
            f.match_m.as_ref().unwrap(),
            f.alpha.as_ref().unwrap(),
        )
        .unwrap();
        assert!(are_isomorphic(&g_k, f.expected_g_k.as_ref().unwrap()).unwrap());
        assert!(are_isomorphic(&g_r, f.expected_g_r.as_ref().unwrap()).unwrap());
    }

    #[test]
    fn example15_spiral_duplicates_fold_preimage() {
        let f = fixture("example15").unwrap();
        let rule = match &f.rule {
            FixtureRule::Pbpo(r) => r,
            _ => unreachable!(),
        };
        let (g_k, g_r) = pbpo_step(
            rule,
            f.host.as_ref().unwrap(),
            f.match_m.as_ref().unwrap(),
            f.alpha.as_ref().unwrap(),
        )
        .unwrap();
        assert!(are_isomorphic(&g_k, f.expected_g_k.as_ref().unwrap()).unwrap());
        assert!(are_isomorphic(&g_r, f.expected_g_r.as_ref().unwrap()).unwrap());
    }

    #[test]
    fn relabel_overwrites_label() {
        let f = fixture("relabel").unwrap();
        let (g_k, g_r) = run_plus(&f);
        assert!(are_isomorphic(&g_k, f.expected_g_k.as_ref().unwrap()).unwrap());
        assert!(are_isomorphic(&g_r, f.expected_g_r.as_ref().unwrap()).unwrap());
    }

    #[test]
    fn sorts_receive_moves_datum() {
        let f = fixture("sorts").unwrap();
        let (g_k, g_r) = run_plus(&f);
        assert!(are_isomorphic(&g_k, f.expected_g_k.as_ref().unwrap()).unwrap());
        assert!(are_isomorphic(&g_r, f.expected_g_r.as_ref().unwrap()).unwrap());
    }

    #[test]
    fn variables_term_step() {
        let f = fixture("variables").unwrap();
        let (g_k, g_r) = run_plus(&f);
        assert!(are_isomorphic(&g_k, f.expected_g_k.as_ref().unwrap()).unwrap());
        assert!(are_isomorphic(&g_r, f.expected_g_r.as_ref().unwrap()).unwrap());
    }

    #[test]
    fn prop36_rejects_hosts_with_edges() {
        let f = fixture("prop36").unwrap();
        let rule = match &f.rule {
            FixtureRule::Plus(r) => r,
            _ => unreachable!(),
        };
        let lat = rule.l_graph.lattice.clone();
        let edged = ugraph(&lat, &["a", "b"], &[("e", "a", "b", "*")]);
        assert!(find_strong_matches(rule, &edged, MatchConstraint::Any)
            .unwrap()
            .is_empty());
        let free = ugraph(&lat, &["a", "b"], &[]);
        let matches = find_strong_matches(rule, &free, MatchConstraint::Any).unwrap();
        assert_eq!(matches.len(), 2);
        let step = apply_step(rule, &free, &matches[0].0, &matches[0].1, false).unwrap();
        assert_eq!(step.g_r.vertices.len(), 1);
    }

    #[test]
    fn agree_not_pbpo_step() {
        let f = fixture("agree-not-pbpo").unwrap();
        let rule = match &f.rule {
            FixtureRule::Agree(r) => r,
            _ => unreachable!(),
        };
        let (g_k, g_r) = agree_step(
            rule,
            f.host.as_ref().unwrap(),
            f.match_m.as_ref().unwrap(),
        )
        .unwrap();
        assert!(are_isomorphic(&g_k, f.expected_g_k.as_ref().unwrap()).unwrap());
        assert!(are_isomorphic(&g_r, f.expected_g_r.as_ref().unwrap()).unwrap());
    }

    #[test]
    fn remark_u_counts() {
        let f = fixture("remark-u").unwrap();
        let rule = match &f.rule {
            FixtureRule::Pbpo(r) => r,
            _ => unreachable!(),
        };
        let (candidates, u) =
            pbpo_u_candidates(rule, f.match_m.as_ref().unwrap(), f.alpha.as_ref().unwrap())
                .unwrap();
        assert_eq!(candidates.len(), 4);
        assert_eq!(candidates.iter().filter(|v| v.same_map(&u)).count(), 1);
    }
}
