use std::collections::BTreeMap;

use crate::error::{Error, Result};
use crate::graph::{Edge, Graph, Morphism};

fn pair_id(a: &str, b: &str) -> String {
    format!("({a}|{b})")
}

/// Canonical pullback of a cospan f: A -> C <- B : g. Vertices are pairs
/// (a|b) with f(a) = g(b), labeled by the meet; likewise for edges.
pub fn pullback(f: &Morphism, g: &Morphism) -> Result<(Graph, Morphism, Morphism)> {
    if f.cod != g.cod {
        return Err(Error::ComposabilityMismatch);
    }
    if f.dom.lattice != g.dom.lattice {
        return Err(Error::LatticeMismatch);
    }
    let lat = f.dom.lattice.clone();
    let mut p = Graph::empty(lat.clone());
    let mut p1v = BTreeMap::new();
    let mut p2v = BTreeMap::new();
    let mut p1e = BTreeMap::new();
    let mut p2e = BTreeMap::new();
    for (a, la) in &f.dom.vertices {
        for (b, lb) in &g.dom.vertices {
            if f.vmap[a] == g.vmap[b] {
                let id = pair_id(a, b);
                p.vertices.insert(id.clone(), lat.meet2(la, lb)?);
                p1v.insert(id.clone(), a.clone());
                p2v.insert(id, b.clone());
            }
        }
    }
    for (ea, eda) in &f.dom.edges {
        for (eb, edb) in &g.dom.edges {
            if f.emap[ea] == g.emap[eb] {
                let id = pair_id(ea, eb);
                p.edges.insert(
                    id.clone(),
                    Edge {
                        src: pair_id(&eda.src, &edb.src),
                        tgt: pair_id(&eda.tgt, &edb.tgt),
                        label: lat.meet2(&eda.label, &edb.label)?,
                    },
                );
                p1e.insert(id.clone(), ea.clone());
                p2e.insert(id, eb.clone());
            }
        }
    }
    let p1 = Morphism::new(p.clone(), f.dom.clone(), p1v, p1e)?;
    let p2 = Morphism::new(p.clone(), g.dom.clone(), p2v, p2e)?;
    Ok((p, p1, p2))
}

struct UnionFind {
    parent: Vec<usize>,
}

impl UnionFind {
    fn new(n: usize) -> UnionFind {
        UnionFind { parent: (0..n).collect() }
    }
    fn find(&mut self, x: usize) -> usize {
        if self.parent[x] != x {
            let r = self.find(self.parent[x]);
            self.parent[x] = r;
        }
        self.parent[x]
    }
    fn union(&mut self, a: usize, b: usize) {
        let (ra, rb) = (self.find(a), self.find(b));
        if ra != rb {
            self.parent[ra] = rb;
        }
    }
}

/// Canonical pushout of a span B <- A -> C. Elements of the result are
/// equivalence classes of B ⊎ C (class ids "po:" plus the sorted tagged
/// members), labeled by the join of the member labels.
pub fn pushout(f: &Morphism, g: &Morphism) -> Result<(Graph, Morphism, Morphism)> {
    if f.dom != g.dom {
        return Err(Error::ComposabilityMismatch);
    }
    if f.cod.lattice != g.cod.lattice {
        return Err(Error::LatticeMismatch);
    }
    let lat = f.cod.lattice.clone();
    let b = &f.cod;
    let c = &g.cod;

    // ---- vertices ----
    let mut vitems: Vec<(String, String)> = Vec::new(); // (tagged id, label)
    let mut vindex: BTreeMap<String, usize> = BTreeMap::new();
    for (v, l) in &b.vertices {
        vindex.insert(format!("b:{v}"), vitems.len());
        vitems.push((format!("b:{v}"), l.clone()));
    }
    for (v, l) in &c.vertices {
        vindex.insert(format!("c:{v}"), vitems.len());
        vitems.push((format!("c:{v}"), l.clone()));
    }
    let mut vuf = UnionFind::new(vitems.len());
    for a in f.dom.vertices.keys() {
        vuf.union(vindex[&format!("b:{}", f.vmap[a])], vindex[&format!("c:{}", g.vmap[a])]);
    }
    let (vclass_of, vclass_ids, vclass_labels) = classes(&mut vuf, &vitems, &lat)?;

    // ---- edges ----
    let mut eitems: Vec<(String, String)> = Vec::new();
    let mut eindex: BTreeMap<String, usize> = BTreeMap::new();
    for (e, edge) in &b.edges {
        eindex.insert(format!("b:{e}"), eitems.len());
        eitems.push((format!("b:{e}"), edge.label.clone()));
    }
    for (e, edge) in &c.edges {
        eindex.insert(format!("c:{e}"), eitems.len());
        eitems.push((format!("c:{e}"), edge.label.clone()));
    }
    let mut euf = UnionFind::new(eitems.len());
    for a in f.dom.edges.keys() {
        euf.union(eindex[&format!("b:{}", f.emap[a])], eindex[&format!("c:{}", g.emap[a])]);
    }
    let (eclass_of, eclass_ids, eclass_labels) = classes(&mut euf, &eitems, &lat)?;

    let mut q = Graph::empty(lat);
    for (cid, label) in vclass_ids.iter().zip(&vclass_labels) {
        q.vertices.insert(cid.clone(), label.clone());
    }
    // src/tgt of an edge class: well-defined because source/target of
    // identified edges get identified; take any member.
    let endpoint = |tagged: &str, which: fn(&Edge) -> &String| -> String {
        let (side, id) = tagged.split_once(':').unwrap();
        let edge = if side == "b" { &b.edges[id] } else { &c.edges[id] };
        let vtag = format!("{side}:{}", which(edge));
        vclass_of[&vtag].clone()
    };
    for (i, cid) in eclass_ids.iter().enumerate() {
        // find one member of this class
        let member = eitems
            .iter()
            .find(|(tag, _)| eclass_of[tag] == *cid)
            .map(|(tag, _)| tag.clone())
            .unwrap();
        q.edges.insert(
            cid.clone(),
            Edge {
                src: endpoint(&member, |e| &e.src),
                tgt: endpoint(&member, |e| &e.tgt),
                label: eclass_labels[i].clone(),
            },
        );
    }
    let q1 = Morphism::new(
        b.clone(),
        q.clone(),
        b.vertices.keys().map(|v| (v.clone(), vclass_of[&format!("b:{v}")].clone())).collect(),
        b.edges.keys().map(|e| (e.clone(), eclass_of[&format!("b:{e}")].clone())).collect(),
    )?;
    let q2 = Morphism::new(
        c.clone(),
        q.clone(),
        c.vertices.keys().map(|v| (v.clone(), vclass_of[&format!("c:{v}")].clone())).collect(),
        c.edges.keys().map(|e| (e.clone(), eclass_of[&format!("c:{e}")].clone())).collect(),
    )?;
    Ok((q, q1, q2))
}

/// Resolve union-find classes: returns (member tag -> class id, class ids,
/// class labels). Class id = "po:" + sorted member tags.
#[allow(clippy::type_complexity)]
fn classes(
    uf: &mut UnionFind,
    items: &[(String, String)],
    lat: &crate::lattice::LatticeRef,
) -> Result<(BTreeMap<String, String>, Vec<String>, Vec<String>)> {
    let mut groups: BTreeMap<usize, Vec<usize>> = BTreeMap::new();
    for i in 0..items.len() {
        groups.entry(uf.find(i)).or_default().push(i);
    }
    let mut class_of = BTreeMap::new();
    let mut ids = Vec::new();
    let mut labels = Vec::new();
    for members in groups.values() {
        let mut tags: Vec<&str> = members.iter().map(|&i| items[i].0.as_str()).collect();
        tags.sort();
        let cid = format!("po:{}", tags.join(","));
        let label = lat.join(members.iter().map(|&i| items[i].1.as_str()))?;
        for &i in members {
            class_of.insert(items[i].0.clone(), cid.clone());
        }
        ids.push(cid);
        labels.push(label);
    }
    Ok((class_of, ids, labels))
}

/// Unique mediator into a pullback square (p1: P -> A, p2: P -> B over the
/// cospan f, g) from a commuting cone (x: X -> A, y: X -> B).
pub fn mediating_into_pullback(
    f: &Morphism,
    g: &Morphism,
    p1: &Morphism,
    p2: &Morphism,
    x: &Morphism,
    y: &Morphism,
) -> Result<Morphism> {
    let fx = Morphism::compose(f, x)?;
    let gy = Morphism::compose(g, y)?;
    if !fx.same_map(&gy) {
        return Err(Error::NotACone);
    }
    let p = &p1.dom;
    let mut vmap = BTreeMap::new();
    for v in x.dom.vertices.keys() {
        let (a, b) = (&x.vmap[v], &y.vmap[v]);
        let hits: Vec<&String> = p
            .vertices
            .keys()
            .filter(|pv| &p1.vmap[*pv] == a && &p2.vmap[*pv] == b)
            .collect();
        match hits.as_slice() {
            [pv] => {
                vmap.insert(v.clone(), (*pv).clone());
            }
            [] => return Err(Error::NoMediator(format!("no pullback element over vertex `{v}`"))),
            _ => {
                return Err(Error::NoMediator(format!(
                    "ambiguous pullback element over vertex `{v}` (square is not a pullback)"
                )))
            }
        }
    }
    let mut emap = BTreeMap::new();
    for e in x.dom.edges.keys() {
        let (a, b) = (&x.emap[e], &y.emap[e]);
        let hits: Vec<&String> =
            p.edges.keys().filter(|pe| &p1.emap[*pe] == a && &p2.emap[*pe] == b).collect();
        match hits.as_slice() {
            [pe] => {
                emap.insert(e.clone(), (*pe).clone());
            }
            [] => return Err(Error::NoMediator(format!("no pullback element over edge `{e}`"))),
            _ => {
                return Err(Error::NoMediator(format!(
                    "ambiguous pullback element over edge `{e}` (square is not a pullback)"
                )))
            }
        }
    }
    Morphism::new(x.dom.clone(), p.clone(), vmap, emap)
        .map_err(|e| Error::NoMediator(format!("label constraints block the mediator: {e}")))
}

/// Unique mediator out of a pushout square (q1: B -> Q, q2: C -> Q over the
/// span f: A -> B, g: A -> C) into a commuting cocone (x: B -> X, y: C -> X).
pub fn mediating_from_pushout(
    f: &Morphism,
    g: &Morphism,
    q1: &Morphism,
    q2: &Morphism,
    x: &Morphism,
    y: &Morphism,
) -> Result<Morphism> {
    let xf = Morphism::compose(x, f)?;
    let yg = Morphism::compose(y, g)?;
    if !xf.same_map(&yg) {
        return Err(Error::NotACone);
    }
    let q = &q1.cod;
    let mut vmap: BTreeMap<String, String> = BTreeMap::new();
    for (bv, qv) in &q1.vmap {
        let tgt = x.vmap[bv].clone();
        if let Some(prev) = vmap.insert(qv.clone(), tgt.clone()) {
            if prev != tgt {
                return Err(Error::NoMediator(format!("cocone not constant on class `{qv}`")));
            }
        }
    }
    for (cv, qv) in &q2.vmap {
        let tgt = y.vmap[cv].clone();
        if let Some(prev) = vmap.insert(qv.clone(), tgt.clone()) {
            if prev != tgt {
                return Err(Error::NoMediator(format!("cocone not constant on class `{qv}`")));
            }
        }
    }
    if vmap.len() != q.vertices.len() {
        return Err(Error::NoMediator("pushout legs are not jointly surjective".into()));
    }
    let mut emap: BTreeMap<String, String> = BTreeMap::new();
    for (be, qe) in &q1.emap {
        let tgt = x.emap[be].clone();
        if let Some(prev) = emap.insert(qe.clone(), tgt.clone()) {
            if prev != tgt {
                return Err(Error::NoMediator(format!("cocone not constant on class `{qe}`")));
            }
        }
    }
    for (ce, qe) in &q2.emap {
        let tgt = y.emap[ce].clone();
        if let Some(prev) = emap.insert(qe.clone(), tgt.clone()) {
            if prev != tgt {
                return Err(Error::NoMediator(format!("cocone not constant on class `{qe}`")));
            }
        }
    }
    if emap.len() != q.edges.len() {
        return Err(Error::NoMediator("pushout legs are not jointly surjective".into()));
    }
    Morphism::new(q.clone(), x.cod.clone(), vmap, emap)
        .map_err(|e| Error::NoMediator(format!("label constraints block the mediator: {e}")))
}

/// Construct-and-compare pullback check: the square (p1: P -> A, p2: P -> B,
/// f: A -> C, g: B -> C) is a pullback iff the mediator from P into the
/// canonical pullback is an isomorphism.
pub fn is_pullback_square(
    f: &Morphism,
    g: &Morphism,
    p1: &Morphism,
    p2: &Morphism,
) -> Result<bool> {
    let fp1 = Morphism::compose(f, p1)?;
    let gp2 = Morphism::compose(g, p2)?;
    if !fp1.same_map(&gp2) {
        return Err(Error::NonCommutingSquare);
    }
    let (_q, q1, q2) = pullback(f, g)?;
    match mediating_into_pullback(f, g, &q1, &q2, p1, p2) {
        Ok(med) => Ok(med.is_iso()),
        Err(Error::NoMediator(_)) => Ok(false),
        Err(e) => Err(e),
    }
}

/// Construct-and-compare pushout check.
pub fn is_pushout_square(
    f: &Morphism,
    g: &Morphism,
    q1: &Morphism,
    q2: &Morphism,
) -> Result<bool> {
    let q1f = Morphism::compose(q1, f)?;
    let q2g = Morphism::compose(q2, g)?;
    if !q1f.same_map(&q2g) {
        return Err(Error::NonCommutingSquare);
    }
    let (_p, r1, r2) = pushout(f, g)?;
    match mediating_from_pushout(f, g, &r1, &r2, q1, q2) {
        Ok(med) => Ok(med.is_iso()),
        Err(Error::NoMediator(_)) => Ok(false),
        Err(e) => Err(e),
    }
}

/// Slow audit verifier: checks the universal property directly against a
/// list of probe cone objects (every commuting cone from a probe must admit
/// exactly one mediator). Used in tests to audit the fast checker.
pub fn is_pullback_square_by_cones(
    f: &Morphism,
    g: &Morphism,
    p1: &Morphism,
    p2: &Morphism,
    probes: &[Graph],
) -> Result<bool> {
    use crate::enumerate::{enumerate_morphisms, Constraint};
    let fp1 = Morphism::compose(f, p1)?;
    let gp2 = Morphism::compose(g, p2)?;
    if !fp1.same_map(&gp2) {
        return Err(Error::NonCommutingSquare);
    }
    let p = &p1.dom;
    for x_obj in probes {
        let xs = enumerate_morphisms(x_obj, &f.dom, Constraint::Any, None)?;
        let ys = enumerate_morphisms(x_obj, &g.dom, Constraint::Any, None)?;
        for x in &xs {
            for y in &ys {
                let fx = Morphism::compose(f, x)?;
                let gy = Morphism::compose(g, y)?;
                if !fx.same_map(&gy) {
                    continue;
                }
                let mediators = enumerate_morphisms(x_obj, p, Constraint::Any, None)?
                    .into_iter()
                    .filter(|m| {
                        Morphism::compose(p1, m).map(|c| c.same_map(x)).unwrap_or(false)
                            && Morphism::compose(p2, m).map(|c| c.same_map(y)).unwrap_or(false)
                    })
                    .count();
                if mediators != 1 {
                    return Ok(false);
                }
            }
        }
    }
    Ok(true)
}

/// Factor f = m . e with e epi and m regular mono (the image factorization,
/// labels inherited from the codomain). Requires an infinitely distributive
/// lattice, where regular monos are exactly the injective label-preserving
/// morphisms.
pub fn epi_regmono_factorize(f: &Morphism) -> Result<(Morphism, Morphism)> {
    if !f.dom.lattice.is_heyting() {
        return Err(Error::NonHeytingLattice);
    }
    let mut img = Graph::empty(f.dom.lattice.clone());
    for w in f.vmap.values() {
        img.vertices.insert(w.clone(), f.cod.vertices[w].clone());
    }
    for fe in f.emap.values() {
        img.edges.insert(fe.clone(), f.cod.edges[fe].clone());
    }
    let e = Morphism::new(f.dom.clone(), img.clone(), f.vmap.clone(), f.emap.clone())?;
    let m = Morphism::new(
        img.clone(),
        f.cod.clone(),
        img.vertices.keys().map(|v| (v.clone(), v.clone())).collect(),
        img.edges.keys().map(|x| (x.clone(), x.clone())).collect(),
    )?;
    Ok((e, m))
}

/// One representative epi per kernel of L: every vertex partition together
/// with every compatible edge partition (edges may merge only when their
/// endpoints merge), labels joined per class. Distinct kernels are kept
/// even when their codomains happen to be isomorphic, since they induce
/// different quotient maps.
pub fn enumerate_quotients(l: &Graph) -> Result<Vec<Morphism>> {
    let vs: Vec<&String> = l.vertices.keys().collect();
    let es: Vec<&String> = l.edges.keys().collect();
    let vpartitions = partitions(vs.len());
    let mut out = Vec::new();
    for vp in &vpartitions {
        let vclass: BTreeMap<&String, usize> =
            vs.iter().enumerate().map(|(i, v)| (*v, vp[i])).collect();
        // Edges may merge only when src and tgt classes agree.
        let compatible = |i: usize, j: usize| -> bool {
            let (a, b) = (&l.edges[es[i]], &l.edges[es[j]]);
            vclass[&a.src] == vclass[&b.src] && vclass[&a.tgt] == vclass[&b.tgt]
        };
        for ep in partitions_filtered(es.len(), &compatible) {
            out.push(quotient_of(l, &vs, &es, vp, &ep)?);
        }
    }
    Ok(out)
}

/// All set partitions of {0..n-1} as block-index vectors (restricted
/// growth strings).
fn partitions(n: usize) -> Vec<Vec<usize>> {
    let ok = |_: usize, _: usize| true;
    partitions_filtered(n, &ok)
}

/// Set partitions where any two elements sharing a block satisfy the
/// compatibility predicate.
fn partitions_filtered(n: usize, compatible: &dyn Fn(usize, usize) -> bool) -> Vec<Vec<usize>> {
    let mut out = Vec::new();
    let mut cur: Vec<usize> = Vec::new();
    fn rec(
        n: usize,
        cur: &mut Vec<usize>,
        out: &mut Vec<Vec<usize>>,
        compatible: &dyn Fn(usize, usize) -> bool,
    ) {
        if cur.len() == n {
            out.push(cur.clone());
            return;
        }
        let i = cur.len();
        let max_block = cur.iter().copied().max().map(|m| m + 1).unwrap_or(0);
        for b in 0..=max_block {
            if cur.iter().enumerate().all(|(j, &bj)| bj != b || compatible(i, j)) {
                cur.push(b);
                rec(n, cur, out, compatible);
                cur.pop();
            }
        }
    }
    rec(n, &mut cur, &mut out, compatible);
    out
}

fn quotient_of(
    l: &Graph,
    vs: &[&String],
    es: &[&String],
    vp: &[usize],
    ep: &[usize],
) -> Result<Morphism> {
    let lat = &l.lattice;
    let class_id = |members: &[&String]| -> String {
        let mut m: Vec<&str> = members.iter().map(|s| s.as_str()).collect();
        m.sort();
        format!("q:{}", m.join(","))
    };
    let mut q = Graph::empty(lat.clone());
    let nvb = vp.iter().copied().max().map(|m| m + 1).unwrap_or(0);
    let mut vclass_name = Vec::new();
    for b in 0..nvb {
        let members: Vec<&String> =
            vs.iter().enumerate().filter(|(i, _)| vp[*i] == b).map(|(_, v)| *v).collect();
        let name = class_id(&members);
        let label = lat.join(members.iter().map(|v| l.vertices[*v].as_str()))?;
        q.vertices.insert(name.clone(), label);
        vclass_name.push(name);
    }
    let vmap: BTreeMap<String, String> =
        vs.iter().enumerate().map(|(i, v)| ((*v).clone(), vclass_name[vp[i]].clone())).collect();
    let neb = ep.iter().copied().max().map(|m| m + 1).unwrap_or(0);
    let mut eclass_name = Vec::new();
    for b in 0..neb {
        let members: Vec<&String> =
            es.iter().enumerate().filter(|(i, _)| ep[*i] == b).map(|(_, e)| *e).collect();
        let name = class_id(&members);
        let label = lat.join(members.iter().map(|e| l.edges[*e].label.as_str()))?;
        let rep = &l.edges[members[0]];
        q.edges.insert(
            name.clone(),
            Edge { src: vmap[&rep.src].clone(), tgt: vmap[&rep.tgt].clone(), label },
        );
        eclass_name.push(name);
    }
    let emap: BTreeMap<String, String> =
        es.iter().enumerate().map(|(i, e)| ((*e).clone(), eclass_name[ep[i]].clone())).collect();
    Morphism::new(l.clone(), q, vmap, emap)
}
