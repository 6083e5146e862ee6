//! Doctrines given by explicit tables over a finite base category.

use alloc::format;
use alloc::string::{String, ToString};
use alloc::vec;
use alloc::vec::Vec;

use super::Doctrine;
use crate::fincat::{validate_category, Arrow, FinCategory, Obj};
use crate::report::ValidationReport;

/// A finite meet-semilattice with top, elements `0..len`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct FinPoset {
    pub names: Vec<String>,
    pub leq: Vec<Vec<bool>>,
    pub meet: Vec<Vec<usize>>,
    pub top: usize,
}

impl FinPoset {
    /// Computes meets and top from an order table. Fails if some pair has
    /// no greatest lower bound or there is no maximum.
    pub fn from_order(names: Vec<String>, leq: Vec<Vec<bool>>) -> Result<Self, String> {
        let n = names.len();
        let mut meet = vec![vec![0; n]; n];
        for x in 0..n {
            for y in 0..n {
                let lower: Vec<usize> = (0..n).filter(|&z| leq[z][x] && leq[z][y]).collect();
                let glb = lower.iter().copied().find(|&m| lower.iter().all(|&z| leq[z][m]));
                meet[x][y] = glb.ok_or_else(|| format!("{} and {} have no meet", names[x], names[y]))?;
            }
        }
        let top = (0..n).find(|&t| (0..n).all(|x| leq[x][t])).ok_or("no top element")?;
        Ok(Self { names, leq, meet, top })
    }

    /// `0 < 1 < … < k-1`.
    pub fn chain(k: usize) -> Self {
        let names = (0..k).map(|i| i.to_string()).collect();
        let leq = (0..k).map(|x| (0..k).map(|y| x <= y).collect()).collect();
        Self::from_order(names, leq).expect("chains are lattices")
    }

    pub fn len(&self) -> usize {
        self.names.len()
    }

    pub fn is_empty(&self) -> bool {
        self.names.is_empty()
    }

    pub fn validate(&self) -> ValidationReport {
        let mut r = ValidationReport::new();
        let n = self.len();
        for x in 0..n {
            if !self.leq[x][x] {
                r.violation("poset.reflexive", format!("{} ≰ {}", self.names[x], self.names[x]));
            }
            if !self.leq[x][self.top] {
                r.violation("poset.top", format!("{} ≰ top", self.names[x]));
            }
            for y in 0..n {
                if x != y && self.leq[x][y] && self.leq[y][x] {
                    r.violation("poset.antisymmetric", format!("{} ≡ {}", self.names[x], self.names[y]));
                }
                let m = self.meet[x][y];
                if !(self.leq[m][x] && self.leq[m][y]) || (0..n).any(|z| self.leq[z][x] && self.leq[z][y] && !self.leq[z][m]) {
                    r.violation("poset.meet", format!("{} is not {}∧{}", self.names[m], self.names[x], self.names[y]));
                }
                for z in 0..n {
                    if self.leq[x][y] && self.leq[y][z] && !self.leq[x][z] {
                        r.violation("poset.transitive", format!("at {}, {}, {}", self.names[x], self.names[y], self.names[z]));
                    }
                }
            }
        }
        r
    }
}

/// A doctrine over a finite category: a poset per object, a monotone map
/// `P(cod f) → P(dom f)` per arrow and an equality element per object.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct FinDoctrine {
    pub base: FinCategory,
    pub fibers: Vec<FinPoset>,
    /// `reindex[f][x]` is `P(f)(x)`.
    pub reindex: Vec<Vec<usize>>,
    /// `equality[A]` is `δ_A` as an element of `P(A×A)`.
    pub equality: Vec<usize>,
}

impl FinDoctrine {
    fn product_of(&self, a: Obj, b: Obj) -> &crate::fincat::ChosenProduct {
        self.base.product(a, b).expect("validated base has all binary products")
    }
}

impl Doctrine for FinDoctrine {
    type Obj = Obj;
    type Arrow = Arrow;
    type Elem = usize;

    fn dom(&self, f: &Arrow) -> Obj {
        self.base.dom(*f)
    }
    fn cod(&self, f: &Arrow) -> Obj {
        self.base.cod(*f)
    }
    fn id(&self, a: &Obj) -> Arrow {
        self.base.identity(*a)
    }
    fn compose(&self, g: &Arrow, f: &Arrow) -> Arrow {
        self.base.compose(*g, *f).expect("validated composition table is total")
    }
    fn is_iso(&self, f: &Arrow) -> bool {
        self.base.inverse(*f).is_some()
    }
    fn product(&self, a: &Obj, b: &Obj) -> Obj {
        self.product_of(*a, *b).object
    }
    fn pr1(&self, a: &Obj, b: &Obj) -> Arrow {
        self.product_of(*a, *b).pr1
    }
    fn pr2(&self, a: &Obj, b: &Obj) -> Arrow {
        self.product_of(*a, *b).pr2
    }
    fn pair(&self, f: &Arrow, g: &Arrow) -> Arrow {
        self.base.pair(*f, *g).expect("validated product has a pairing table")
    }
    fn terminal(&self) -> Obj {
        self.base.terminal().expect("validated base has a terminal object").object
    }
    fn bang(&self, a: &Obj) -> Arrow {
        self.base.terminal().expect("validated base has a terminal object").bang[a.0]
    }

    fn fiber(&self, a: &Obj) -> Vec<usize> {
        (0..self.fibers[a.0].len()).collect()
    }
    fn top(&self, a: &Obj) -> usize {
        self.fibers[a.0].top
    }
    fn meet(&self, a: &Obj, x: &usize, y: &usize) -> usize {
        self.fibers[a.0].meet[*x][*y]
    }
    fn leq(&self, a: &Obj, x: &usize, y: &usize) -> bool {
        self.fibers[a.0].leq[*x][*y]
    }
    fn reindex(&self, f: &Arrow, x: &usize) -> usize {
        self.reindex[f.0][*x]
    }
    fn equality(&self, a: &Obj) -> usize {
        self.equality[a.0]
    }

    fn sample_objects(&self) -> Vec<Obj> {
        self.base.objects().collect()
    }
    fn sample_arrows(&self) -> Vec<Arrow> {
        self.base.arrows().collect()
    }

    fn validate_base(&self) -> ValidationReport {
        let c = &self.base;
        let mut r = validate_category(c).scoped("base");
        if r.has_violations() {
            return r;
        }
        for a in c.objects() {
            for b in c.objects() {
                if c.product(a, b).is_none() {
                    r.violation("base.product", format!("no chosen product {}×{}", c.object_name(a), c.object_name(b)));
                }
            }
        }
        if c.terminal().is_none() {
            r.violation("base.terminal", "no chosen terminal object");
        }
        if self.fibers.len() != c.num_objects() || self.reindex.len() != c.num_arrows() || self.equality.len() != c.num_objects() {
            r.violation("tables.shape", "fiber, reindexing or equality tables have the wrong length");
            return r;
        }
        for (o, p) in self.fibers.iter().enumerate() {
            r.merge(p.validate().scoped(&format!("fiber.{}", c.object_name(Obj(o)))));
        }
        for f in c.arrows() {
            let (d, k) = (c.dom(f), c.cod(f));
            let table = &self.reindex[f.0];
            if table.len() != self.fibers[k.0].len() || table.iter().any(|&x| x >= self.fibers[d.0].len()) {
                r.violation("reindex.shape", format!("P({}) is not a map P({}) → P({})", c.arrow_name(f), c.object_name(k), c.object_name(d)));
            }
        }
        for a in c.objects() {
            if let Some(p) = c.product(a, a) {
                if self.equality[a.0] >= self.fibers[p.object.0].len() {
                    r.violation("equality.shape", format!("δ_{} is not in P({}×{})", c.object_name(a), c.object_name(a), c.object_name(a)));
                }
            }
        }
        r
    }
}

/// The doctrine over the one-object category whose only fiber is `fiber`.
/// `equality` is an element of that same fiber (the object is its own square).
pub fn over_terminal(fiber: FinPoset, equality: usize) -> FinDoctrine {
    FinDoctrine {
        base: crate::fincat::terminal_category(),
        fibers: vec![fiber.clone()],
        reindex: vec![(0..fiber.len()).collect()],
        equality: vec![equality],
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::doctrine::{validate_elementary, validate_primary};
    use crate::fincat::arrow_category;

    #[test]
    fn two_chain_over_terminal() {
        let d = over_terminal(FinPoset::chain(2), 1);
        assert!(validate_primary(&d).is_empty());
        assert!(validate_elementary(&d).is_empty());
        // δ = ⊥ breaks the first condition
        let bad = over_terminal(FinPoset::chain(2), 0);
        assert!(validate_elementary(&bad).mentions("elementary.1"));
    }

    #[test]
    fn one_element_fiber_over_terminal() {
        let d = over_terminal(FinPoset::chain(1), 0);
        assert!(validate_elementary(&d).is_empty());
    }

    /// The arrow category 0 → 1 with fibers 2-chains; P(u) the identity map.
    fn chain_doctrine() -> FinDoctrine {
        let base = arrow_category();
        let n = base.num_arrows();
        FinDoctrine {
            base,
            fibers: vec![FinPoset::chain(2), FinPoset::chain(2)],
            reindex: vec![vec![0, 1]; n],
            equality: vec![1, 1],
        }
    }

    #[test]
    fn reindexing_dropping_a_meet_is_reported() {
        let d = chain_doctrine();
        assert!(validate_primary(&d).is_empty(), "{}", validate_primary(&d));
        let mut bad = d.clone();
        // square over 1; P(u) sends both atoms to 1 but their meet to 0
        let names = ["bot", "a", "b", "top"].iter().map(|s| s.to_string()).collect();
        let leq = (0..4).map(|x: usize| (0..4).map(|y: usize| x & y == x).collect()).collect();
        bad.fibers[1] = FinPoset::from_order(names, leq).unwrap();
        let u = bad.base.arrow_by_name("u").unwrap();
        let id1 = bad.base.identity(Obj(1));
        bad.reindex[u.0] = vec![0, 1, 1, 1];
        bad.reindex[id1.0] = vec![0, 1, 2, 3];
        bad.equality[1] = 3;
        let r = validate_primary(&bad);
        assert!(r.mentions("reindex.meet") || r.mentions("reindex.top"), "{r}");
        assert!(r.mentions(&format!("{u:?}")), "{r}");
    }
}
