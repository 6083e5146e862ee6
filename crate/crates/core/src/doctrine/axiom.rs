//! Adding an element of the terminal fiber as an axiom.
//!
//! `P_φ(A) = {P(!_A)(φ) ∧ α | α ∈ P(A)}` with the order of `P(A)`; its top is
//! `φ_A = P(!_A)(φ)` and its equality `φ_{A×A} ∧ δ_A`.

use alloc::vec::Vec;

use super::{Doctrine, DoctrineHom};
use crate::report::ValidationReport;

#[derive(Clone, Debug)]
pub struct AxiomDoctrine<P: Doctrine> {
    pub inner: P,
    pub phi: P::Elem,
}

impl<P: Doctrine> AxiomDoctrine<P> {
    /// `φ_A = P(!_A)(φ)`.
    pub fn phi_at(&self, a: &P::Obj) -> P::Elem {
        self.inner.reindex(&self.inner.bang(a), &self.phi)
    }
}

impl<P: Doctrine> Doctrine for AxiomDoctrine<P> {
    type Obj = P::Obj;
    type Arrow = P::Arrow;
    type Elem = P::Elem;

    fn dom(&self, f: &P::Arrow) -> P::Obj {
        self.inner.dom(f)
    }
    fn cod(&self, f: &P::Arrow) -> P::Obj {
        self.inner.cod(f)
    }
    fn id(&self, a: &P::Obj) -> P::Arrow {
        self.inner.id(a)
    }
    fn compose(&self, g: &P::Arrow, f: &P::Arrow) -> P::Arrow {
        self.inner.compose(g, f)
    }
    fn is_iso(&self, f: &P::Arrow) -> bool {
        self.inner.is_iso(f)
    }
    fn product(&self, a: &P::Obj, b: &P::Obj) -> P::Obj {
        self.inner.product(a, b)
    }
    fn pr1(&self, a: &P::Obj, b: &P::Obj) -> P::Arrow {
        self.inner.pr1(a, b)
    }
    fn pr2(&self, a: &P::Obj, b: &P::Obj) -> P::Arrow {
        self.inner.pr2(a, b)
    }
    fn pair(&self, f: &P::Arrow, g: &P::Arrow) -> P::Arrow {
        self.inner.pair(f, g)
    }
    fn terminal(&self) -> P::Obj {
        self.inner.terminal()
    }
    fn bang(&self, a: &P::Obj) -> P::Arrow {
        self.inner.bang(a)
    }

    fn fiber(&self, a: &P::Obj) -> Vec<P::Elem> {
        let phi = self.phi_at(a);
        let mut out: Vec<P::Elem> = self.inner.fiber(a).iter().map(|x| self.inner.meet(a, &phi, x)).collect();
        out.sort();
        out.dedup();
        out
    }
    fn top(&self, a: &P::Obj) -> P::Elem {
        self.phi_at(a)
    }
    fn meet(&self, a: &P::Obj, x: &P::Elem, y: &P::Elem) -> P::Elem {
        self.inner.meet(a, x, y)
    }
    fn leq(&self, a: &P::Obj, x: &P::Elem, y: &P::Elem) -> bool {
        self.inner.leq(a, x, y)
    }
    fn reindex(&self, f: &P::Arrow, x: &P::Elem) -> P::Elem {
        self.inner.reindex(f, x)
    }
    fn equality(&self, a: &P::Obj) -> P::Elem {
        let aa = self.inner.product(a, a);
        self.inner.meet(&aa, &self.phi_at(&aa), &self.inner.equality(a))
    }

    fn sample_objects(&self) -> Vec<P::Obj> {
        self.inner.sample_objects()
    }
    fn sample_arrows(&self) -> Vec<P::Arrow> {
        self.inner.sample_arrows()
    }
    fn validate_base(&self) -> ValidationReport {
        self.inner.validate_base()
    }
}

/// Returns `P_φ` and the canonical homomorphism `P → P_φ`.
pub fn add_axiom<P: Doctrine + Clone>(d: &P, phi: P::Elem) -> (AxiomDoctrine<P>, AxiomHom<P>) {
    let pd = AxiomDoctrine { inner: d.clone(), phi: phi.clone() };
    (pd.clone(), AxiomHom { target: pd })
}

/// The canonical homomorphism `α ↦ P(!_A)(φ) ∧ α`.
#[derive(Clone, Debug)]
pub struct AxiomHom<P: Doctrine> {
    pub target: AxiomDoctrine<P>,
}

impl<P: Doctrine> DoctrineHom<P, AxiomDoctrine<P>> for AxiomHom<P> {
    fn map_obj(&self, a: &P::Obj) -> P::Obj {
        a.clone()
    }
    fn map_arrow(&self, f: &P::Arrow) -> P::Arrow {
        f.clone()
    }
    fn map_elem(&self, a: &P::Obj, x: &P::Elem) -> P::Elem {
        self.target.inner.meet(a, &self.target.phi_at(a), x)
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::bitset::BitSet;
    use crate::doctrine::fin::{over_terminal, FinPoset};
    use crate::doctrine::{sub_finset_doctrine, validate_elementary, validate_hom, FinFn, SubFinSet};
    use crate::fincat::{Arrow, Obj};

    #[test]
    fn top_axiom_changes_nothing() {
        let d = sub_finset_doctrine(2).unwrap();
        let (pd, h) = add_axiom(&d, BitSet::full(1));
        for a in 0..=2 {
            assert_eq!(pd.fiber(&a), d.fiber(&a));
            for x in d.fiber(&a) {
                assert_eq!(h.map_elem(&a, &x), x);
            }
        }
        assert!(validate_hom(&d, &pd, &h).is_empty());
    }

    #[test]
    fn empty_axiom_collapses_every_fiber() {
        let d = sub_finset_doctrine(2).unwrap();
        let (pd, h) = add_axiom(&d, BitSet::empty(1));
        for a in 0..=2usize {
            assert_eq!(pd.fiber(&a), vec![BitSet::empty(a)]);
        }
        assert!(validate_elementary(&pd).is_empty());
        assert!(validate_hom(&d, &pd, &h).is_empty());
    }

    #[test]
    fn phi_becomes_top() {
        let d = sub_finset_doctrine(2).unwrap();
        for phi in d.fiber(&1) {
            let (pd, h) = add_axiom(&d, phi.clone());
            assert_eq!(h.map_elem(&1, &phi), pd.top(&1));
            assert!(validate_elementary(&pd).is_empty());
        }
    }

    /// A homomorphism from the 2-chain doctrine over the terminal category
    /// into subsets: the base object goes to the 1-element set, fiber
    /// elements to the listed subsets of it.
    struct ChainToSub {
        images: [BitSet; 2],
    }

    impl DoctrineHom<crate::doctrine::FinDoctrine, SubFinSet> for ChainToSub {
        fn map_obj(&self, _a: &Obj) -> usize {
            1
        }
        fn map_arrow(&self, _f: &Arrow) -> FinFn {
            FinFn::identity(1)
        }
        fn map_elem(&self, _a: &Obj, x: &usize) -> BitSet {
            self.images[*x].clone()
        }
    }

    impl DoctrineHom<AxiomDoctrine<crate::doctrine::FinDoctrine>, SubFinSet> for ChainToSub {
        fn map_obj(&self, _a: &Obj) -> usize {
            1
        }
        fn map_arrow(&self, _f: &Arrow) -> FinFn {
            FinFn::identity(1)
        }
        fn map_elem(&self, _a: &Obj, x: &usize) -> BitSet {
            self.images[*x].clone()
        }
    }

    #[test]
    fn homs_sending_phi_to_top_factor_uniquely() {
        let p = over_terminal(FinPoset::chain(2), 1);
        let sub = sub_finset_doctrine(1).unwrap();
        let phi = 0;
        let (pd, h) = add_axiom(&p, phi);
        let subsets = [BitSet::empty(1), BitSet::full(1)];
        let mut factoring = 0;
        for i0 in 0..2 {
            for i1 in 0..2 {
                let k = ChainToSub { images: [subsets[i0].clone(), subsets[i1].clone()] };
                if !validate_hom(&p, &sub, &k).is_empty() || k.images[phi] != BitSet::full(1) {
                    continue;
                }
                factoring += 1;
                // candidate factorizations: maps from the P_φ fiber {0} into Sub(1)
                let mut found = 0;
                for j in 0..2 {
                    let cand = ChainToSub { images: [subsets[j].clone(), subsets[j].clone()] };
                    if !validate_hom(&pd, &sub, &cand).is_empty() {
                        continue;
                    }
                    let agrees = p.fiber(&Obj(0)).iter().all(|x| {
                        <ChainToSub as DoctrineHom<AxiomDoctrine<_>, SubFinSet>>::map_elem(&cand, &Obj(0), &h.map_elem(&Obj(0), x))
                            == <ChainToSub as DoctrineHom<crate::doctrine::FinDoctrine, SubFinSet>>::map_elem(&k, &Obj(0), x)
                    });
                    if agrees {
                        found += 1;
                    }
                }
                assert_eq!(found, 1);
            }
        }
        assert_eq!(factoring, 1);
    }
}
