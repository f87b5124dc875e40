use std::collections::{BTreeMap, BTreeSet};

use crate::error::{Error, Result};
use crate::lattice::LatticeRef;

/// A finite directed multigraph with vertex and edge labels drawn from a
/// lattice. Vertex and edge ids are opaque strings, unique per graph.
#[derive(Debug, Clone, PartialEq)]
pub struct Graph {
    pub lattice: LatticeRef,
    /// vertex id -> label
    pub vertices: BTreeMap<String, String>,
    /// edge id -> (src, tgt, label)
    pub edges: BTreeMap<String, Edge>,
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Edge {
    pub src: String,
    pub tgt: String,
    pub label: String,
}

impl Graph {
    pub fn empty(lattice: LatticeRef) -> Graph {
        Graph { lattice, vertices: BTreeMap::new(), edges: BTreeMap::new() }
    }

    /// Build and validate in one go; vertices are (id, label), edges are
    /// (id, src, tgt, label).
    pub fn new(
        lattice: LatticeRef,
        vertices: &[(&str, &str)],
        edges: &[(&str, &str, &str, &str)],
    ) -> Result<Graph> {
        let mut g = Graph::empty(lattice);
        for (id, label) in vertices {
            g.vertices.insert((*id).to_string(), (*label).to_string());
        }
        for (id, src, tgt, label) in edges {
            g.edges.insert(
                (*id).to_string(),
                Edge { src: (*src).to_string(), tgt: (*tgt).to_string(), label: (*label).to_string() },
            );
        }
        g.validate()?;
        Ok(g)
    }

    pub fn validate(&self) -> Result<()> {
        for (v, l) in &self.vertices {
            if !self.lattice.contains(l) {
                return Err(Error::MalformedGraph(format!("vertex `{v}` has unknown label `{l}`")));
            }
        }
        for (e, edge) in &self.edges {
            if !self.vertices.contains_key(&edge.src) {
                return Err(Error::MalformedGraph(format!("edge `{e}` has dangling source `{}`", edge.src)));
            }
            if !self.vertices.contains_key(&edge.tgt) {
                return Err(Error::MalformedGraph(format!("edge `{e}` has dangling target `{}`", edge.tgt)));
            }
            if !self.lattice.contains(&edge.label) {
                return Err(Error::MalformedGraph(format!("edge `{e}` has unknown label `{}`", edge.label)));
            }
        }
        Ok(())
    }

    pub fn vlabel(&self, v: &str) -> &str {
        &self.vertices[v]
    }

    pub fn elabel(&self, e: &str) -> &str {
        &self.edges[e].label
    }

    /// Disjoint union, prefixing ids to keep them unique.
    pub fn disjoint_union(&self, other: &Graph, pfx_a: &str, pfx_b: &str) -> Result<Graph> {
        if self.lattice != other.lattice {
            return Err(Error::LatticeMismatch);
        }
        let mut g = Graph::empty(self.lattice.clone());
        for (v, l) in &self.vertices {
            g.vertices.insert(format!("{pfx_a}{v}"), l.clone());
        }
        for (v, l) in &other.vertices {
            g.vertices.insert(format!("{pfx_b}{v}"), l.clone());
        }
        for (e, edge) in &self.edges {
            g.edges.insert(
                format!("{pfx_a}{e}"),
                Edge {
                    src: format!("{pfx_a}{}", edge.src),
                    tgt: format!("{pfx_a}{}", edge.tgt),
                    label: edge.label.clone(),
                },
            );
        }
        for (e, edge) in &other.edges {
            g.edges.insert(
                format!("{pfx_b}{e}"),
                Edge {
                    src: format!("{pfx_b}{}", edge.src),
                    tgt: format!("{pfx_b}{}", edge.tgt),
                    label: edge.label.clone(),
                },
            );
        }
        Ok(g)
    }
}

/// A label-nondecreasing premorphism between graphs over the same lattice.
#[derive(Debug, Clone, PartialEq)]
pub struct Morphism {
    pub dom: Graph,
    pub cod: Graph,
    pub vmap: BTreeMap<String, String>,
    pub emap: BTreeMap<String, String>,
}

impl Morphism {
    pub fn new(
        dom: Graph,
        cod: Graph,
        vmap: BTreeMap<String, String>,
        emap: BTreeMap<String, String>,
    ) -> Result<Morphism> {
        let m = Morphism { dom, cod, vmap, emap };
        m.validate()?;
        Ok(m)
    }

    /// Convenience constructor from (from, to) id pairs.
    pub fn from_pairs(
        dom: &Graph,
        cod: &Graph,
        vpairs: &[(&str, &str)],
        epairs: &[(&str, &str)],
    ) -> Result<Morphism> {
        let vmap = vpairs.iter().map(|(a, b)| ((*a).to_string(), (*b).to_string())).collect();
        let emap = epairs.iter().map(|(a, b)| ((*a).to_string(), (*b).to_string())).collect();
        Morphism::new(dom.clone(), cod.clone(), vmap, emap)
    }

    pub fn validate(&self) -> Result<()> {
        if self.dom.lattice != self.cod.lattice {
            return Err(Error::LatticeMismatch);
        }
        let lat = &self.dom.lattice;
        for (v, l) in &self.dom.vertices {
            let w = self
                .vmap
                .get(v)
                .ok_or_else(|| Error::MalformedMorphism(format!("vertex `{v}` unmapped")))?;
            let wl = self
                .cod
                .vertices
                .get(w)
                .ok_or_else(|| Error::MalformedMorphism(format!("image vertex `{w}` missing")))?;
            if !lat.leq(l, wl)? {
                return Err(Error::MalformedMorphism(format!(
                    "label decreases on vertex `{v}`: {l} !<= {wl}"
                )));
            }
        }
        if self.vmap.len() != self.dom.vertices.len() {
            return Err(Error::MalformedMorphism("vmap has extra entries".into()));
        }
        for (e, edge) in &self.dom.edges {
            let f = self
                .emap
                .get(e)
                .ok_or_else(|| Error::MalformedMorphism(format!("edge `{e}` unmapped")))?;
            let fe = self
                .cod
                .edges
                .get(f)
                .ok_or_else(|| Error::MalformedMorphism(format!("image edge `{f}` missing")))?;
            if self.vmap[&edge.src] != fe.src || self.vmap[&edge.tgt] != fe.tgt {
                return Err(Error::MalformedMorphism(format!(
                    "edge `{e}` does not commute with src/tgt"
                )));
            }
            if !lat.leq(&edge.label, &fe.label)? {
                return Err(Error::MalformedMorphism(format!(
                    "label decreases on edge `{e}`: {} !<= {}",
                    edge.label, fe.label
                )));
            }
        }
        if self.emap.len() != self.dom.edges.len() {
            return Err(Error::MalformedMorphism("emap has extra entries".into()));
        }
        Ok(())
    }

    pub fn identity(g: &Graph) -> Morphism {
        Morphism {
            dom: g.clone(),
            cod: g.clone(),
            vmap: g.vertices.keys().map(|v| (v.clone(), v.clone())).collect(),
            emap: g.edges.keys().map(|e| (e.clone(), e.clone())).collect(),
        }
    }

    /// g . f (apply f first).
    pub fn compose(g: &Morphism, f: &Morphism) -> Result<Morphism> {
        if f.cod != g.dom {
            return Err(Error::ComposabilityMismatch);
        }
        Ok(Morphism {
            dom: f.dom.clone(),
            cod: g.cod.clone(),
            vmap: f.vmap.iter().map(|(a, b)| (a.clone(), g.vmap[b].clone())).collect(),
            emap: f.emap.iter().map(|(a, b)| (a.clone(), g.emap[b].clone())).collect(),
        })
    }

    pub fn apply_v(&self, v: &str) -> &str {
        &self.vmap[v]
    }

    pub fn apply_e(&self, e: &str) -> &str {
        &self.emap[e]
    }

    /// Same mapping data (used for square commutation checks; domains and
    /// codomains are assumed equal).
    pub fn same_map(&self, other: &Morphism) -> bool {
        self.vmap == other.vmap && self.emap == other.emap
    }

    pub fn is_mono(&self) -> bool {
        let vs: BTreeSet<&String> = self.vmap.values().collect();
        let es: BTreeSet<&String> = self.emap.values().collect();
        vs.len() == self.vmap.len() && es.len() == self.emap.len()
    }

    pub fn is_epi(&self) -> bool {
        let vs: BTreeSet<&String> = self.vmap.values().collect();
        let es: BTreeSet<&String> = self.emap.values().collect();
        vs.len() == self.cod.vertices.len() && es.len() == self.cod.edges.len()
    }

    pub fn is_label_preserving(&self) -> bool {
        self.vmap.iter().all(|(v, w)| self.dom.vertices[v] == self.cod.vertices[w])
            && self.emap.iter().all(|(e, f)| self.dom.edges[e].label == self.cod.edges[f].label)
    }

    /// Regular mono in this concrete category: injective and
    /// label-preserving. (The equalizer characterization is only claimed
    /// for infinitely distributive lattices; elsewhere this is just a named
    /// predicate.)
    pub fn is_regular_mono(&self) -> bool {
        self.is_mono() && self.is_label_preserving()
    }

    pub fn is_iso(&self) -> bool {
        self.is_mono() && self.is_epi() && self.is_label_preserving()
    }

    /// Inverse of an isomorphism.
    pub fn inverse(&self) -> Result<Morphism> {
        if !self.is_iso() {
            return Err(Error::MalformedMorphism("not an isomorphism".into()));
        }
        Ok(Morphism {
            dom: self.cod.clone(),
            cod: self.dom.clone(),
            vmap: self.vmap.iter().map(|(a, b)| (b.clone(), a.clone())).collect(),
            emap: self.emap.iter().map(|(a, b)| (b.clone(), a.clone())).collect(),
        })
    }
}

/// Decomposition of a host along a morphism image: the match subgraph, the
/// context (largest subgraph disjoint from the match), and the patch edges
/// that connect the two.
#[derive(Debug, Clone, PartialEq)]
pub struct MatchContext {
    pub match_vertices: BTreeSet<String>,
    pub match_edges: BTreeSet<String>,
    pub context_vertices: BTreeSet<String>,
    pub context_edges: BTreeSet<String>,
    pub patch_edges: BTreeSet<String>,
}

pub fn patch_decomposition(x: &Morphism) -> MatchContext {
    let host = &x.cod;
    let match_vertices: BTreeSet<String> = x.vmap.values().cloned().collect();
    let match_edges: BTreeSet<String> = x.emap.values().cloned().collect();
    let context_vertices: BTreeSet<String> = host
        .vertices
        .keys()
        .filter(|v| !match_vertices.contains(*v))
        .cloned()
        .collect();
    let context_edges: BTreeSet<String> = host
        .edges
        .iter()
        .filter(|(e, edge)| {
            !match_edges.contains(*e)
                && context_vertices.contains(&edge.src)
                && context_vertices.contains(&edge.tgt)
        })
        .map(|(e, _)| e.clone())
        .collect();
    let patch_edges: BTreeSet<String> = host
        .edges
        .keys()
        .filter(|e| !match_edges.contains(*e) && !context_edges.contains(*e))
        .cloned()
        .collect();
    MatchContext { match_vertices, match_edges, context_vertices, context_edges, patch_edges }
}
