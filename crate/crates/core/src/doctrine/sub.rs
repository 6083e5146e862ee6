//! Subsets of finite sets: the subobject doctrine over a skeleton of finite
//! sets, with carriers `{0, …, k-1}`.
//!
//! [`SubFinSet`] optionally carries a parameter set `I`: the fiber over `A`
//! is then `Sub(I×A)`, reindexing acts on the `A` coordinate only. With one
//! parameter this is the plain subset doctrine.

use alloc::collections::BTreeMap;
use alloc::format;
use alloc::string::{String, ToString};
use alloc::vec;
use alloc::vec::Vec;
use core::fmt;

use super::{Doctrine, DoctrineHom};
use crate::bitset::BitSet;
use crate::fincat::{self, FinCategory, Obj};

/// A function between canonical finite sets.
#[derive(Clone, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct FinFn {
    pub dom: usize,
    pub cod: usize,
    pub map: Vec<usize>,
}

impl FinFn {
    pub fn new(dom: usize, cod: usize, map: Vec<usize>) -> Self {
        debug_assert_eq!(map.len(), dom);
        debug_assert!(map.iter().all(|&y| y < cod));
        Self { dom, cod, map }
    }

    pub fn identity(n: usize) -> Self {
        Self { dom: n, cod: n, map: (0..n).collect() }
    }

    pub fn apply(&self, x: usize) -> usize {
        self.map[x]
    }

    /// `self ∘ f`.
    pub fn after(&self, f: &FinFn) -> FinFn {
        FinFn { dom: f.dom, cod: self.cod, map: f.map.iter().map(|&x| self.map[x]).collect() }
    }

    pub fn is_bijective(&self) -> bool {
        if self.dom != self.cod {
            return false;
        }
        let mut seen = vec![false; self.cod];
        for &y in &self.map {
            if core::mem::replace(&mut seen[y], true) {
                return false;
            }
        }
        true
    }

    /// All functions `dom → cod`, in lexicographic order of their tables.
    pub fn all(dom: usize, cod: usize) -> Vec<FinFn> {
        let mut out = Vec::new();
        if cod == 0 && dom > 0 {
            return out;
        }
        let mut map = vec![0; dom];
        loop {
            out.push(FinFn { dom, cod, map: map.clone() });
            let mut i = dom;
            loop {
                if i == 0 {
                    return out;
                }
                i -= 1;
                map[i] += 1;
                if map[i] < cod {
                    break;
                }
                map[i] = 0;
            }
        }
    }

    /// Preimage of a subset of the codomain.
    pub fn preimage(&self, s: &BitSet) -> BitSet {
        BitSet::from_indices(self.dom, (0..self.dom).filter(|&x| s.contains(self.map[x])))
    }
}

impl fmt::Debug for FinFn {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}→{}{:?}", self.dom, self.cod, self.map)
    }
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub enum DoctrineError {
    /// The chosen objects contain no terminal object.
    NoTerminal,
    NotElementary(String),
}

impl fmt::Display for DoctrineError {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            DoctrineError::NoTerminal => write!(f, "base has no terminal object among the chosen sizes"),
            DoctrineError::NotElementary(r) => write!(f, "doctrine is not elementary: {r}"),
        }
    }
}

#[cfg(feature = "std")]
impl std::error::Error for DoctrineError {}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct SubFinSet {
    /// Sizes `0..=max_size` are sampled by the validators.
    pub max_size: usize,
    /// Size of the parameter set.
    pub params: usize,
}

/// Subsets doctrine over finite sets of size at most `max_size`.
pub fn sub_finset_doctrine(max_size: usize) -> Result<SubFinSet, DoctrineError> {
    SubFinSet::with_params(max_size, 1)
}

impl SubFinSet {
    pub fn with_params(max_size: usize, params: usize) -> Result<Self, DoctrineError> {
        if max_size == 0 {
            return Err(DoctrineError::NoTerminal);
        }
        Ok(Self { max_size, params })
    }

    fn width(&self, a: usize) -> usize {
        self.params * a
    }
}

impl Doctrine for SubFinSet {
    type Obj = usize;
    type Arrow = FinFn;
    type Elem = BitSet;

    fn dom(&self, f: &FinFn) -> usize {
        f.dom
    }
    fn cod(&self, f: &FinFn) -> usize {
        f.cod
    }
    fn id(&self, a: &usize) -> FinFn {
        FinFn::identity(*a)
    }
    fn compose(&self, g: &FinFn, f: &FinFn) -> FinFn {
        g.after(f)
    }
    fn is_iso(&self, f: &FinFn) -> bool {
        f.is_bijective()
    }
    fn product(&self, a: &usize, b: &usize) -> usize {
        a * b
    }
    fn pr1(&self, a: &usize, b: &usize) -> FinFn {
        FinFn::new(a * b, *a, (0..a * b).map(|i| i / b).collect())
    }
    fn pr2(&self, a: &usize, b: &usize) -> FinFn {
        FinFn::new(a * b, *b, (0..a * b).map(|i| i % b).collect())
    }
    fn pair(&self, f: &FinFn, g: &FinFn) -> FinFn {
        FinFn::new(f.dom, f.cod * g.cod, (0..f.dom).map(|x| f.map[x] * g.cod + g.map[x]).collect())
    }
    fn terminal(&self) -> usize {
        1
    }
    fn bang(&self, a: &usize) -> FinFn {
        FinFn::new(*a, 1, vec![0; *a])
    }

    fn fiber(&self, a: &usize) -> Vec<BitSet> {
        let w = self.width(*a);
        assert!(w <= 20, "fiber over {a} has 2^{w} elements");
        (0..1u64 << w).map(|m| BitSet::from_mask(w, m)).collect()
    }
    fn top(&self, a: &usize) -> BitSet {
        BitSet::full(self.width(*a))
    }
    fn meet(&self, _a: &usize, x: &BitSet, y: &BitSet) -> BitSet {
        x.intersection(y)
    }
    fn leq(&self, _a: &usize, x: &BitSet, y: &BitSet) -> bool {
        x.is_subset(y)
    }
    fn reindex(&self, f: &FinFn, x: &BitSet) -> BitSet {
        let out = (0..self.params)
            .flat_map(|p| (0..f.dom).map(move |i| (p, i)))
            .filter(|&(p, i)| x.contains(p * f.cod + f.map[i]))
            .map(|(p, i)| p * f.dom + i);
        BitSet::from_indices(self.width(f.dom), out)
    }
    fn equality(&self, a: &usize) -> BitSet {
        let aa = a * a;
        BitSet::from_indices(
            self.params * aa,
            (0..self.params).flat_map(|p| (0..*a).map(move |x| p * aa + x * a + x)),
        )
    }

    fn sample_objects(&self) -> Vec<usize> {
        (0..=self.max_size).collect()
    }
    fn sample_arrows(&self) -> Vec<FinFn> {
        let mut out = Vec::new();
        for a in 0..=self.max_size {
            for b in 0..=self.max_size {
                out.extend(FinFn::all(a, b));
            }
        }
        out
    }
}

/// The homomorphism `Sub(Y×−) → Sub(X×−)` induced by `f: X → Y`: identity
/// on the base, preimage along `f × id` on fibers.
#[derive(Clone, Debug)]
pub struct PreimageHom {
    pub f: FinFn,
}

impl DoctrineHom<SubFinSet, SubFinSet> for PreimageHom {
    fn map_obj(&self, a: &usize) -> usize {
        *a
    }
    fn map_arrow(&self, g: &FinFn) -> FinFn {
        g.clone()
    }
    fn map_elem(&self, a: &usize, s: &BitSet) -> BitSet {
        let out = (0..self.f.dom)
            .flat_map(|p| (0..*a).map(move |i| (p, i)))
            .filter(|&(p, i)| s.contains(self.f.map[p] * a + i))
            .map(|(p, i)| p * a + i);
        BitSet::from_indices(self.f.dom * a, out)
    }
}

/// The category of all functions between sets of the given sizes, with the
/// products and terminal object that exist among them.
pub fn finset_category(sizes: &[usize]) -> FinCategory {
    let objects: Vec<String> = sizes.iter().map(|s| s.to_string()).collect();
    let mut arrows = Vec::new();
    for (i, &a) in sizes.iter().enumerate() {
        for (j, &b) in sizes.iter().enumerate() {
            for f in FinFn::all(a, b) {
                arrows.push((format!("{a}→{b}{:?}", f.map), i, j, f));
            }
        }
    }
    let mut c = FinCategory::from_concrete(&objects, &arrows, |g, f| g.after(f), |_, f| f.is_bijective() && f.map.iter().enumerate().all(|(i, &y)| i == y))
        .expect("functions are closed under composition");
    let lookup: BTreeMap<&FinFn, usize> = arrows.iter().enumerate().map(|(i, a)| (&a.3, i)).collect();
    let sub = SubFinSet { max_size: 0, params: 1 };
    for (i, &a) in sizes.iter().enumerate() {
        for (j, &b) in sizes.iter().enumerate() {
            if let Some(k) = sizes.iter().position(|&s| s == a * b) {
                let p1 = fincat::Arrow(lookup[&sub.pr1(&a, &b)]);
                let p2 = fincat::Arrow(lookup[&sub.pr2(&a, &b)]);
                c = fincat::with_product(&c, Obj(i), Obj(j), Obj(k), p1, p2);
            }
        }
    }
    if let Some(t) = sizes.iter().position(|&s| s == 1) {
        c = fincat::with_terminal(&c, Obj(t));
    }
    c
}
