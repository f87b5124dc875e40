use std::collections::BTreeMap;

use crate::error::{Error, Result};
use crate::graph::{Edge, Graph, Morphism};
use crate::lattice::LatticeRef;

/// Morphism-class constraint for enumeration.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Constraint {
    Any,
    Mono,
    RegularMono,
    Iso,
}

/// Candidate-expansion budget for backtracking searches, configurable via
/// the PBPO_MAX_ENUM environment variable.
pub fn enum_budget() -> u64 {
    std::env::var("PBPO_MAX_ENUM")
        .ok()
        .and_then(|s| s.parse().ok())
        .unwrap_or(10_000_000)
}

struct Search<'a> {
    a: &'a Graph,
    b: &'a Graph,
    constraint: Constraint,
    vs: Vec<&'a String>,
    es: Vec<&'a String>,
    eseed: BTreeMap<String, String>,
    budget: u64,
    expansions: u64,
    out: Vec<Morphism>,
}

impl<'a> Search<'a> {
    fn label_ok(&self, dl: &str, cl: &str) -> bool {
        match self.constraint {
            Constraint::Any | Constraint::Mono => self.a.lattice.leq(dl, cl).unwrap_or(false),
            Constraint::RegularMono | Constraint::Iso => dl == cl,
        }
    }

    fn injective(&self) -> bool {
        !matches!(self.constraint, Constraint::Any)
    }

    fn spend(&mut self) -> Result<()> {
        self.expansions += 1;
        if self.expansions > self.budget {
            return Err(Error::EnumerationBudget(self.budget));
        }
        Ok(())
    }

    fn assign_vertices(&mut self, i: usize, vmap: &mut BTreeMap<String, String>) -> Result<()> {
        if i == self.vs.len() {
            let mut emap = self.eseed.clone();
            return self.assign_edges(0, vmap, &mut emap);
        }
        let v = self.vs[i];
        if let Some(w) = vmap.get(v).cloned() {
            // Seeded by the partial assignment; validate and recurse.
            let ok = self
                .b
                .vertices
                .get(&w)
                .map(|wl| self.label_ok(&self.a.vertices[v], wl))
                .unwrap_or(false)
                && (!self.injective()
                    || vmap.iter().filter(|(x, y)| *x != v && **y == w).count() == 0);
            if ok {
                self.assign_vertices(i + 1, vmap)?;
            }
            return Ok(());
        }
        let candidates: Vec<String> = self.b.vertices.keys().cloned().collect();
        for w in candidates {
            self.spend()?;
            if !self.label_ok(&self.a.vertices[v], &self.b.vertices[&w]) {
                continue;
            }
            if self.injective() && vmap.values().any(|x| *x == w) {
                continue;
            }
            vmap.insert(v.clone(), w);
            self.assign_vertices(i + 1, vmap)?;
            vmap.remove(v);
        }
        Ok(())
    }

    fn assign_edges(
        &mut self,
        i: usize,
        vmap: &BTreeMap<String, String>,
        emap: &mut BTreeMap<String, String>,
    ) -> Result<()> {
        if i == self.es.len() {
            self.out.push(Morphism {
                dom: self.a.clone(),
                cod: self.b.clone(),
                vmap: vmap.clone(),
                emap: emap.clone(),
            });
            return Ok(());
        }
        let e = self.es[i];
        let edge = &self.a.edges[e];
        let (want_src, want_tgt) = (vmap[&edge.src].clone(), vmap[&edge.tgt].clone());
        if let Some(f) = emap.get(e).cloned() {
            let ok = self
                .b
                .edges
                .get(&f)
                .map(|fe| {
                    fe.src == want_src && fe.tgt == want_tgt && self.label_ok(&edge.label, &fe.label)
                })
                .unwrap_or(false)
                && (!self.injective()
                    || emap.iter().filter(|(x, y)| *x != e && **y == f).count() == 0);
            if ok {
                self.assign_edges(i + 1, vmap, emap)?;
            }
            return Ok(());
        }
        let candidates: Vec<String> = self.b.edges.keys().cloned().collect();
        for f in candidates {
            self.spend()?;
            let fe = &self.b.edges[&f];
            if fe.src != want_src || fe.tgt != want_tgt || !self.label_ok(&edge.label, &fe.label) {
                continue;
            }
            if self.injective() && emap.values().any(|x| *x == f) {
                continue;
            }
            emap.insert(e.clone(), f);
            self.assign_edges(i + 1, vmap, emap)?;
            emap.remove(e);
        }
        Ok(())
    }
}

/// Enumerate every morphism A -> B satisfying the constraint, in a
/// deterministic order (vertices and candidates in id order). An optional
/// partial assignment seeds the search.
pub fn enumerate_morphisms(
    a: &Graph,
    b: &Graph,
    constraint: Constraint,
    seed: Option<(&BTreeMap<String, String>, &BTreeMap<String, String>)>,
) -> Result<Vec<Morphism>> {
    if a.lattice != b.lattice {
        return Err(Error::LatticeMismatch);
    }
    if constraint == Constraint::Iso
        && (a.vertices.len() != b.vertices.len() || a.edges.len() != b.edges.len())
    {
        return Ok(vec![]);
    }
    let mut s = Search {
        a,
        b,
        constraint,
        vs: a.vertices.keys().collect(),
        es: a.edges.keys().collect(),
        eseed: seed.map(|(_, e)| e.clone()).unwrap_or_default(),
        budget: enum_budget(),
        expansions: 0,
        out: Vec::new(),
    };
    let mut vmap = seed.map(|(v, _)| v.clone()).unwrap_or_default();
    s.assign_vertices(0, &mut vmap)?;
    Ok(s.out)
}

pub fn are_isomorphic(a: &Graph, b: &Graph) -> Result<bool> {
    Ok(!enumerate_morphisms(a, b, Constraint::Iso, None)?.is_empty())
}

/// A permutation-minimal serialization of a graph; two graphs over the same
/// lattice are isomorphic iff their keys agree. Brute force over vertex
/// permutations, intended for graphs with at most ~6 vertices.
pub fn canonical_key(g: &Graph) -> String {
    let vs: Vec<&String> = g.vertices.keys().collect();
    let n = vs.len();
    let mut perm: Vec<usize> = (0..n).collect();
    let mut best: Option<String> = None;
    permute(&mut perm, 0, &mut |p| {
        // position of each original vertex under this permutation
        let pos: BTreeMap<&String, usize> =
            vs.iter().enumerate().map(|(i, v)| (*v, p[i])).collect();
        let mut vlabels: Vec<(usize, &str)> =
            g.vertices.iter().map(|(v, l)| (pos[v], l.as_str())).collect();
        vlabels.sort();
        let mut edges: Vec<(usize, usize, &str)> = g
            .edges
            .values()
            .map(|e| (pos[&e.src], pos[&e.tgt], e.label.as_str()))
            .collect();
        edges.sort();
        let key = format!("{vlabels:?}|{edges:?}");
        if best.as_ref().map(|b| key < *b).unwrap_or(true) {
            best = Some(key);
        }
    });
    best.unwrap_or_else(|| "[]|[]".to_string())
}

fn permute(perm: &mut Vec<usize>, k: usize, f: &mut impl FnMut(&[usize])) {
    if k == perm.len() {
        f(perm);
        return;
    }
    for i in k..perm.len() {
        perm.swap(k, i);
        permute(perm, k + 1, f);
        perm.swap(k, i);
    }
}

/// All graphs with at most max_v vertices and max_e edges over the lattice,
/// one representative per isomorphism class. Vertex ids v0..; edge ids e0..
pub fn enumerate_graphs(lattice: &LatticeRef, max_v: usize, max_e: usize) -> Vec<Graph> {
    let labels: Vec<String> = lattice.elements().to_vec();
    let mut out = Vec::new();
    let mut seen = std::collections::BTreeSet::new();
    for nv in 0..=max_v {
        let vids: Vec<String> = (0..nv).map(|i| format!("v{i}")).collect();
        // all vertex labelings
        let mut vlabelings: Vec<Vec<&String>> = vec![vec![]];
        for _ in 0..nv {
            vlabelings = vlabelings
                .into_iter()
                .flat_map(|pfx| {
                    labels.iter().map(move |l| {
                        let mut p = pfx.clone();
                        p.push(l);
                        p
                    })
                })
                .collect();
        }
        // all edge triples (src, tgt, label)
        let mut triples = Vec::new();
        for s in 0..nv {
            for t in 0..nv {
                for l in &labels {
                    triples.push((s, t, l.clone()));
                }
            }
        }
        for vl in &vlabelings {
            // multisets of triples of size <= max_e (non-decreasing index
            // sequences avoid ordered duplicates)
            let mut stack: Vec<(usize, Vec<usize>)> = vec![(0, vec![])];
            while let Some((start, chosen)) = stack.pop() {
                // emit this multiset
                let mut g = Graph::empty(lattice.clone());
                for (i, v) in vids.iter().enumerate() {
                    g.vertices.insert(v.clone(), vl[i].clone());
                }
                for (k, &ti) in chosen.iter().enumerate() {
                    let (s, t, ref l) = triples[ti];
                    g.edges.insert(
                        format!("e{k}"),
                        Edge { src: vids[s].clone(), tgt: vids[t].clone(), label: l.clone() },
                    );
                }
                let key = format!("{nv}|{}", canonical_key(&g));
                if seen.insert(key) {
                    out.push(g);
                }
                if chosen.len() < max_e {
                    for ti in start..triples.len() {
                        let mut c = chosen.clone();
                        c.push(ti);
                        stack.push((ti, c));
                    }
                }
            }
        }
    }
    out
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::lattice::Lattice;

    #[test]
    fn counts_on_discrete_graphs() {
        let lat = Lattice::unit();
        let a = Graph::new(lat.clone(), &[("x", "*")], &[]).unwrap();
        let b = Graph::new(lat.clone(), &[("p", "*"), ("q", "*"), ("r", "*")], &[]).unwrap();
        assert_eq!(enumerate_morphisms(&a, &b, Constraint::Any, None).unwrap().len(), 3);
    }

    #[test]
    fn edge_into_loop() {
        let lat = Lattice::unit();
        let a =
            Graph::new(lat.clone(), &[("x", "*"), ("y", "*")], &[("e", "x", "y", "*")]).unwrap();
        let b = Graph::new(lat.clone(), &[("v", "*")], &[("l", "v", "v", "*")]).unwrap();
        assert_eq!(enumerate_morphisms(&a, &b, Constraint::Any, None).unwrap().len(), 1);
    }

    #[test]
    fn three_cycle_automorphisms() {
        let lat = Lattice::unit();
        let c3 = Graph::new(
            lat,
            &[("a", "*"), ("b", "*"), ("c", "*")],
            &[("e1", "a", "b", "*"), ("e2", "b", "c", "*"), ("e3", "c", "a", "*")],
        )
        .unwrap();
        assert_eq!(enumerate_morphisms(&c3, &c3, Constraint::Iso, None).unwrap().len(), 3);
    }

    #[test]
    fn label_order_respected() {
        let lat = Lattice::chain(2).unwrap();
        let lo = Graph::new(lat.clone(), &[("x", "0")], &[]).unwrap();
        let hi = Graph::new(lat.clone(), &[("y", "1")], &[]).unwrap();
        assert_eq!(enumerate_morphisms(&lo, &hi, Constraint::Any, None).unwrap().len(), 1);
        assert_eq!(enumerate_morphisms(&hi, &lo, Constraint::Any, None).unwrap().len(), 0);
        // regular mono needs label equality
        assert_eq!(enumerate_morphisms(&lo, &hi, Constraint::RegularMono, None).unwrap().len(), 0);
    }

    #[test]
    fn seeded_search_restricts() {
        let lat = Lattice::unit();
        let a = Graph::new(lat.clone(), &[("x", "*")], &[]).unwrap();
        let b = Graph::new(lat.clone(), &[("p", "*"), ("q", "*")], &[]).unwrap();
        let mut vseed = BTreeMap::new();
        vseed.insert("x".to_string(), "q".to_string());
        let eseed = BTreeMap::new();
        let found =
            enumerate_morphisms(&a, &b, Constraint::Any, Some((&vseed, &eseed))).unwrap();
        assert_eq!(found.len(), 1);
        assert_eq!(found[0].vmap["x"], "q");
    }

    #[test]
    fn budget_error() {
        let lat = Lattice::unit();
        let a = Graph::new(
            lat.clone(),
            &[("a", "*"), ("b", "*"), ("c", "*"), ("d", "*")],
            &[],
        )
        .unwrap();
        std::env::set_var("PBPO_MAX_ENUM", "5");
        let r = enumerate_morphisms(&a, &a, Constraint::Any, None);
        std::env::remove_var("PBPO_MAX_ENUM");
        assert_eq!(r.unwrap_err(), Error::EnumerationBudget(5));
    }

    #[test]
    fn mono_vs_label_exact_matcher() {
        // With base labels on both sides of a flat lattice, mono search
        // equals naive label-equality injective matching.
        let lat = Lattice::flat(["a", "b"]).unwrap();
        let pat =
            Graph::new(lat.clone(), &[("x", "a"), ("y", "b")], &[("e", "x", "y", "a")]).unwrap();
        let host = Graph::new(
            lat.clone(),
            &[("1", "a"), ("2", "b"), ("3", "a")],
            &[("f", "1", "2", "a"), ("g", "3", "2", "a")],
        )
        .unwrap();
        let found = enumerate_morphisms(&pat, &host, Constraint::Mono, None).unwrap();
        // naive: x ∈ {1,3} (label a), y = 2, edge forced
        assert_eq!(found.len(), 2);
        for m in &found {
            assert!(m.is_label_preserving());
        }
    }

    #[test]
    fn graph_enumeration_counts() {
        let lat = Lattice::unit();
        // 0 or 1 vertices, at most 1 edge: empty, one vertex, one loop.
        let gs = enumerate_graphs(&lat, 1, 1);
        assert_eq!(gs.len(), 3);
        // two vertices, no edges: adds the discrete 2-graph
        let gs = enumerate_graphs(&lat, 2, 0);
        assert_eq!(gs.len(), 3); // empty, 1 vertex, 2 vertices
    }

    #[test]
    fn canonical_key_iso_invariance() {
        let lat = Lattice::unit();
        let a =
            Graph::new(lat.clone(), &[("x", "*"), ("y", "*")], &[("e", "x", "y", "*")]).unwrap();
        let b =
            Graph::new(lat.clone(), &[("p", "*"), ("q", "*")], &[("z", "q", "p", "*")]).unwrap();
        assert_eq!(canonical_key(&a), canonical_key(&b));
        assert!(are_isomorphic(&a, &b).unwrap());
    }
}
