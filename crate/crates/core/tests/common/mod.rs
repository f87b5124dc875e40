//! Shared helpers for the integration suites: a tiny seeded RNG and
//! generators for valid rules built limit-first, so validity holds by
//! construction rather than by rejection sampling. Each test target uses
//! only a subset of these helpers.
#![allow(dead_code)]

use pbpo_core::enumerate::{enumerate_graphs, enumerate_morphisms, Constraint};
use pbpo_core::graph::{Graph, Morphism};
use pbpo_core::interop::{pbpo_rule, PbpoRule};
use pbpo_core::lattice::LatticeRef;
use pbpo_core::limits::{pullback, pushout};
use pbpo_core::rewrite::{validate_rule, Rule};

/// splitmix64; reproducible across platforms.
pub struct Rng(pub u64);

impl Rng {
    pub fn next(&mut self) -> u64 {
        self.0 = self.0.wrapping_add(0x9e3779b97f4a7c15);
        let mut z = self.0;
        z = (z ^ (z >> 30)).wrapping_mul(0xbf58476d1ce4e5b9);
        z = (z ^ (z >> 27)).wrapping_mul(0x94d049bb133111eb);
        z ^ (z >> 31)
    }

    pub fn below(&mut self, n: usize) -> usize {
        (self.next() % n as u64) as usize
    }
}

pub fn pick<'a, T>(rng: &mut Rng, xs: &'a [T]) -> &'a T {
    &xs[rng.below(xs.len())]
}

/// Iso-class representatives used as building blocks, precomputed once.
pub struct Pool {
    pub lattice: LatticeRef,
    /// candidate pattern graphs (small)
    pub small: Vec<Graph>,
    /// candidate type/replacement graphs (slightly larger)
    pub ctx: Vec<Graph>,
}

pub fn pool(lattice: &LatticeRef) -> Pool {
    Pool {
        lattice: lattice.clone(),
        small: enumerate_graphs(lattice, 2, 2),
        ctx: enumerate_graphs(lattice, 3, 3),
    }
}

/// A random host with up to max_v vertices and max_e edges (not capped to
/// iso representatives).
pub fn random_host(p: &Pool, rng: &mut Rng, max_v: usize, max_e: usize) -> Graph {
    let labels = p.lattice.elements().to_vec();
    let nv = rng.below(max_v + 1);
    let vs: Vec<(String, String)> = (0..nv)
        .map(|i| (format!("v{i}"), pick(rng, &labels).clone()))
        .collect();
    let ne = if nv == 0 { 0 } else { rng.below(max_e + 1) };
    let es: Vec<(String, String, String, String)> = (0..ne)
        .map(|i| {
            (
                format!("e{i}"),
                format!("v{}", rng.below(nv)),
                format!("v{}", rng.below(nv)),
                pick(rng, &labels).clone(),
            )
        })
        .collect();
    let vrefs: Vec<(&str, &str)> = vs.iter().map(|(a, b)| (a.as_str(), b.as_str())).collect();
    let erefs: Vec<(&str, &str, &str, &str)> = es
        .iter()
        .map(|(a, b, c, d)| (a.as_str(), b.as_str(), c.as_str(), d.as_str()))
        .collect();
    Graph::new(p.lattice.clone(), &vrefs, &erefs).unwrap()
}

/// The five-object span of a random valid rule: the left square is a
/// pullback because K is constructed as one.
fn random_left_square(p: &Pool, rng: &mut Rng) -> (Morphism, Morphism, Morphism, Morphism) {
    let lp_graph = pick(rng, &p.ctx).clone();
    let kp_candidates: Vec<&Graph> = p.small.iter().collect();
    let (kp, lp) = loop {
        let kp = (*pick(rng, &kp_candidates)).clone();
        let ms = enumerate_morphisms(&kp, &lp_graph, Constraint::Any, None).unwrap();
        if !ms.is_empty() {
            break (kp.clone(), pick(rng, &ms).clone());
        }
        if kp.vertices.is_empty() {
            break (kp.clone(), Morphism::from_pairs(&kp, &lp_graph, &[], &[]).unwrap());
        }
    };
    let _ = kp;
    let (l_graph, t_l) = loop {
        let l = pick(rng, &p.small).clone();
        let ms = enumerate_morphisms(&l, &lp_graph, Constraint::Any, None).unwrap();
        if !ms.is_empty() {
            break (l.clone(), pick(rng, &ms).clone());
        }
        if l.vertices.is_empty() {
            break (l.clone(), Morphism::from_pairs(&l, &lp_graph, &[], &[]).unwrap());
        }
    };
    let _ = l_graph;
    let (_k, l_m, t_k) = pullback(&t_l, &lp).unwrap();
    (l_m, t_l, t_k, lp)
}

fn random_right_leg(p: &Pool, rng: &mut Rng, k: &Graph) -> Morphism {
    for _ in 0..8 {
        let r = pick(rng, &p.ctx).clone();
        if let Ok(ms) = enumerate_morphisms(k, &r, Constraint::Any, None) {
            if !ms.is_empty() {
                return pick(rng, &ms).clone();
            }
        }
    }
    Morphism::identity(k)
}

/// A random valid rule; the left square is a pullback by construction.
pub fn random_rule(p: &Pool, rng: &mut Rng) -> Rule {
    let (l_m, t_l, t_k, lp) = random_left_square(p, rng);
    let r_m = random_right_leg(p, rng, &l_m.dom);
    validate_rule(l_m, r_m, t_l, t_k, lp).expect("constructed rule must validate")
}

/// A random canonical two-row rule: left square a pullback, right square
/// the pushout of r along t_k, both by construction.
pub fn random_canonical_pbpo(p: &Pool, rng: &mut Rng) -> PbpoRule {
    let (l_m, t_l, t_k, lp) = random_left_square(p, rng);
    let r_m = random_right_leg(p, rng, &l_m.dom);
    let (_rp_g, t_r, rp_m) = pushout(&r_m, &t_k).unwrap();
    pbpo_rule(l_m, r_m, t_l, t_k, t_r, lp, rp_m).expect("constructed rule must be canonical")
}
