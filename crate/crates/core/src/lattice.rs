use std::collections::{BTreeMap, BTreeSet};
use std::sync::Arc;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

pub const BOT: &str = "_bot";
pub const TOP: &str = "_top";

/// A finite complete lattice of labels. Elements are opaque strings; the
/// order is stored as the full reflexive-transitive relation.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Lattice {
    elements: Vec<String>,
    index: BTreeMap<String, usize>,
    /// leq[i][j] == true iff elements[i] <= elements[j].
    leq: Vec<Vec<bool>>,
    bottom: usize,
    top: usize,
    descriptor: LatticeDescriptor,
}

/// Serializable description of how a lattice was built.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "lowercase")]
pub enum LatticeDescriptor {
    Flat { base: Vec<String> },
    Unit,
    Chain { n: usize },
    Powerset { universe: Vec<String> },
    Explicit { elements: Vec<String>, leq: Vec<(String, String)> },
}

pub type LatticeRef = Arc<Lattice>;

impl Lattice {
    /// Build from an explicit element list and a generating set of order
    /// pairs. The reflexive-transitive closure is taken; the result must be
    /// antisymmetric, have global bottom/top, and have all binary meets and
    /// joins (finiteness then gives all meets/joins).
    pub fn explicit(elements: Vec<String>, pairs: Vec<(String, String)>) -> Result<LatticeRef> {
        let descriptor = LatticeDescriptor::Explicit { elements: elements.clone(), leq: pairs.clone() };
        Self::build(elements, pairs, descriptor)
    }

    fn build(
        elements: Vec<String>,
        pairs: Vec<(String, String)>,
        descriptor: LatticeDescriptor,
    ) -> Result<LatticeRef> {
        if elements.is_empty() {
            return Err(Error::NotALattice("empty carrier".into()));
        }
        let mut index = BTreeMap::new();
        for (i, e) in elements.iter().enumerate() {
            if index.insert(e.clone(), i).is_some() {
                return Err(Error::NotALattice(format!("duplicate element `{e}`")));
            }
        }
        let n = elements.len();
        let mut leq = vec![vec![false; n]; n];
        for i in 0..n {
            leq[i][i] = true;
        }
        for (a, b) in &pairs {
            let i = *index.get(a).ok_or_else(|| Error::UnknownLabel(a.clone()))?;
            let j = *index.get(b).ok_or_else(|| Error::UnknownLabel(b.clone()))?;
            leq[i][j] = true;
        }
        // Warshall transitive closure.
        for k in 0..n {
            for i in 0..n {
                if leq[i][k] {
                    for j in 0..n {
                        if leq[k][j] {
                            leq[i][j] = true;
                        }
                    }
                }
            }
        }
        for i in 0..n {
            for j in 0..n {
                if i != j && leq[i][j] && leq[j][i] {
                    return Err(Error::NotALattice(format!(
                        "antisymmetry fails for `{}` and `{}`",
                        elements[i], elements[j]
                    )));
                }
            }
        }
        let bottom = (0..n)
            .find(|&i| (0..n).all(|j| leq[i][j]))
            .ok_or_else(|| Error::NotALattice("no bottom element".into()))?;
        let top = (0..n)
            .find(|&i| (0..n).all(|j| leq[j][i]))
            .ok_or_else(|| Error::NotALattice("no top element".into()))?;
        let lat = Lattice { elements, index, leq, bottom, top, descriptor };
        // Binary meets/joins must exist (finite carrier then gives all).
        for i in 0..n {
            for j in 0..n {
                lat.glb(i, j).ok_or_else(|| {
                    Error::NotALattice(format!(
                        "`{}` and `{}` have no meet",
                        lat.elements[i], lat.elements[j]
                    ))
                })?;
                lat.lub(i, j).ok_or_else(|| {
                    Error::NotALattice(format!(
                        "`{}` and `{}` have no join",
                        lat.elements[i], lat.elements[j]
                    ))
                })?;
            }
        }
        Ok(Arc::new(lat))
    }

    /// Flat lattice: base labels pairwise incomparable, strictly between
    /// fresh bottom and top.
    pub fn flat<I: IntoIterator<Item = S>, S: Into<String>>(base: I) -> Result<LatticeRef> {
        let base: Vec<String> = base.into_iter().map(Into::into).collect();
        for b in &base {
            if b == BOT || b == TOP {
                return Err(Error::ReservedLabelCollision(b.clone()));
            }
        }
        let mut elements = vec![BOT.to_string()];
        elements.extend(base.iter().cloned());
        elements.push(TOP.to_string());
        let mut pairs = Vec::new();
        for b in &base {
            pairs.push((BOT.to_string(), b.clone()));
            pairs.push((b.clone(), TOP.to_string()));
        }
        pairs.push((BOT.to_string(), TOP.to_string()));
        Self::build(elements, pairs, LatticeDescriptor::Flat { base })
    }

    /// One-element lattice; realizes unlabeled graphs.
    pub fn unit() -> LatticeRef {
        let descriptor = LatticeDescriptor::Unit;
        Self::build(vec!["*".to_string()], vec![], descriptor).expect("unit lattice is valid")
    }

    /// Total order 0 < 1 < ... < n-1.
    pub fn chain(n: usize) -> Result<LatticeRef> {
        if n == 0 {
            return Err(Error::InvalidSize("chain lattice needs n >= 1".into()));
        }
        let elements: Vec<String> = (0..n).map(|i| i.to_string()).collect();
        let pairs: Vec<(String, String)> =
            (1..n).map(|i| ((i - 1).to_string(), i.to_string())).collect();
        Self::build(elements, pairs, LatticeDescriptor::Chain { n })
    }

    /// Powerset of a finite universe, ordered by inclusion. Subsets are
    /// rendered "{a,b}" with members sorted.
    pub fn powerset<I: IntoIterator<Item = S>, S: Into<String>>(universe: I) -> Result<LatticeRef> {
        let universe: Vec<String> = {
            let set: BTreeSet<String> = universe.into_iter().map(Into::into).collect();
            set.into_iter().collect()
        };
        let n = universe.len();
        if n > 6 {
            return Err(Error::InvalidSize("powerset universe capped at 6".into()));
        }
        let subset_name = |mask: usize| -> String {
            let members: Vec<&str> = (0..n)
                .filter(|i| mask & (1 << i) != 0)
                .map(|i| universe[i].as_str())
                .collect();
            format!("{{{}}}", members.join(","))
        };
        let elements: Vec<String> = (0..1usize << n).map(subset_name).collect();
        let mut pairs = Vec::new();
        for a in 0..1usize << n {
            for b in 0..1usize << n {
                if a & b == a && a != b {
                    pairs.push((subset_name(a), subset_name(b)));
                }
            }
        }
        Self::build(elements, pairs, LatticeDescriptor::Powerset { universe })
    }

    pub fn from_descriptor(d: &LatticeDescriptor) -> Result<LatticeRef> {
        match d {
            LatticeDescriptor::Flat { base } => Self::flat(base.clone()),
            LatticeDescriptor::Unit => Ok(Self::unit()),
            LatticeDescriptor::Chain { n } => Self::chain(*n),
            LatticeDescriptor::Powerset { universe } => Self::powerset(universe.clone()),
            LatticeDescriptor::Explicit { elements, leq } => {
                Self::explicit(elements.clone(), leq.clone())
            }
        }
    }

    pub fn descriptor(&self) -> &LatticeDescriptor {
        &self.descriptor
    }

    pub fn elements(&self) -> &[String] {
        &self.elements
    }

    pub fn contains(&self, x: &str) -> bool {
        self.index.contains_key(x)
    }

    pub fn bottom(&self) -> &str {
        &self.elements[self.bottom]
    }

    pub fn top(&self) -> &str {
        &self.elements[self.top]
    }

    fn idx(&self, x: &str) -> Result<usize> {
        self.index.get(x).copied().ok_or_else(|| Error::UnknownLabel(x.to_string()))
    }

    pub fn leq(&self, x: &str, y: &str) -> Result<bool> {
        Ok(self.leq[self.idx(x)?][self.idx(y)?])
    }

    /// Greatest element below both, if any.
    fn glb(&self, i: usize, j: usize) -> Option<usize> {
        let n = self.elements.len();
        let lowers: Vec<usize> =
            (0..n).filter(|&k| self.leq[k][i] && self.leq[k][j]).collect();
        lowers.iter().copied().find(|&k| lowers.iter().all(|&m| self.leq[m][k]))
    }

    fn lub(&self, i: usize, j: usize) -> Option<usize> {
        let n = self.elements.len();
        let uppers: Vec<usize> =
            (0..n).filter(|&k| self.leq[i][k] && self.leq[j][k]).collect();
        uppers.iter().copied().find(|&k| uppers.iter().all(|&m| self.leq[k][m]))
    }

    /// Meet of a finite set; the empty meet is top.
    pub fn meet<'a, I: IntoIterator<Item = &'a str>>(&self, xs: I) -> Result<String> {
        let mut acc = self.top;
        for x in xs {
            let i = self.idx(x)?;
            acc = self.glb(acc, i).expect("validated lattice has all meets");
        }
        Ok(self.elements[acc].clone())
    }

    /// Join of a finite set; the empty join is bottom.
    pub fn join<'a, I: IntoIterator<Item = &'a str>>(&self, xs: I) -> Result<String> {
        let mut acc = self.bottom;
        for x in xs {
            let i = self.idx(x)?;
            acc = self.lub(acc, i).expect("validated lattice has all joins");
        }
        Ok(self.elements[acc].clone())
    }

    pub fn meet2(&self, x: &str, y: &str) -> Result<String> {
        self.meet([x, y])
    }

    pub fn join2(&self, x: &str, y: &str) -> Result<String> {
        self.join([x, y])
    }

    /// Infinite distributivity x ∧ ⋁S = ⋁{x ∧ y : y ∈ S}, brute-forced over
    /// the finite carrier. Equivalent to being a complete Heyting algebra.
    pub fn is_heyting(&self) -> bool {
        let n = self.elements.len();
        // Full subset quantification is 2^n; fall back to the equivalent
        // binary form for larger carriers (finite joins reduce to binary
        // joins by induction, so a finite lattice is infinitely
        // distributive iff it is distributive).
        if n <= 10 {
            for x in 0..n {
                for mask in 0u32..(1u32 << n) {
                    let members: Vec<usize> =
                        (0..n).filter(|&i| mask & (1 << i) != 0).collect();
                    let mut sup = self.bottom;
                    for &y in &members {
                        sup = self.lub(sup, y).unwrap();
                    }
                    let lhs = self.glb(x, sup).unwrap();
                    let mut rhs = self.bottom;
                    for &y in &members {
                        rhs = self.lub(rhs, self.glb(x, y).unwrap()).unwrap();
                    }
                    if lhs != rhs {
                        return false;
                    }
                }
            }
            true
        } else {
            for x in 0..n {
                for y in 0..n {
                    for z in 0..n {
                        let lhs = self.glb(x, self.lub(y, z).unwrap()).unwrap();
                        let rhs =
                            self.lub(self.glb(x, y).unwrap(), self.glb(x, z).unwrap()).unwrap();
                        if lhs != rhs {
                            return false;
                        }
                    }
                }
            }
            true
        }
    }
}
