//! Elementary quotient completion.
//!
//! Objects of the completion are pairs `(A, ρ)` with `ρ` a `P`-equivalence
//! relation; arrows are base arrows preserving the relations; fibers are
//! descent sets and the equality over `(A, ρ)` is `ρ`.

use alloc::format;
use alloc::string::String;
use alloc::vec;
use alloc::vec::Vec;

use crate::bitset::BitSet;
use crate::doctrine::{
    boxed, descent_set, product_arrow, Doctrine, DoctrineHom, FinFn, SubFinSet,
};
use crate::fincat::{self, FinCategory, Obj};
use crate::report::ValidationReport;

/// `(A, ρ)` with `ρ ∈ P(A×A)`.
#[derive(Clone, Debug, PartialEq, Eq, PartialOrd, Ord)]
pub struct PEquivalenceRelation<O, E> {
    pub object: O,
    pub rho: E,
}

pub type QObj<P> = PEquivalenceRelation<<P as Doctrine>::Obj, <P as Doctrine>::Elem>;

/// A base arrow `f: A → B` with `ρ ≤ P(f×f)(σ)`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct QArrow<O, E, A> {
    pub dom: PEquivalenceRelation<O, E>,
    pub cod: PEquivalenceRelation<O, E>,
    pub arrow: A,
}

pub type QArr<P> = QArrow<<P as Doctrine>::Obj, <P as Doctrine>::Elem, <P as Doctrine>::Arrow>;

/// Reflexivity, symmetry and transitivity of `ρ` over `a`.
pub fn is_equivalence_relation<P: Doctrine>(d: &P, a: &P::Obj, rho: &P::Elem) -> ValidationReport {
    let mut r = ValidationReport::new();
    let aa = d.product(a, a);
    if !d.leq(&aa, &d.equality(a), rho) {
        r.violation("eqrel.reflexive", format!("δ ≰ ρ over {a:?}"));
    }
    let swap = d.pair(&d.pr2(a, a), &d.pr1(a, a));
    if !d.leq(&aa, rho, &d.reindex(&swap, rho)) {
        r.violation("eqrel.symmetric", format!("ρ ≰ P(⟨pr2,pr1⟩)(ρ) over {a:?}"));
    }
    let a3 = d.product(&aa, a);
    let left = d.pr1(&aa, a);
    let p1 = d.compose(&d.pr1(a, a), &left);
    let p2 = d.compose(&d.pr2(a, a), &left);
    let p3 = d.pr2(&aa, a);
    let r12 = d.reindex(&d.pair(&p1, &p2), rho);
    let r23 = d.reindex(&d.pair(&p2, &p3), rho);
    let r13 = d.reindex(&d.pair(&p1, &p3), rho);
    if !d.leq(&a3, &d.meet(&a3, &r12, &r23), &r13) {
        r.violation("eqrel.transitive", format!("ρ is not transitive over {a:?}"));
    }
    r
}

/// All `P`-equivalence relations over `a`, in fiber order.
pub fn equivalence_relations<P: Doctrine>(d: &P, a: &P::Obj) -> Vec<P::Elem> {
    let aa = d.product(a, a);
    d.fiber(&aa).into_iter().filter(|rho| is_equivalence_relation(d, a, rho).is_empty()).collect()
}

/// `(P)_q` over the equivalence relations of the sampled base objects.
#[derive(Clone, Debug)]
pub struct QDoctrine<P: Doctrine> {
    pub inner: P,
    objects: Vec<QObj<P>>,
}

impl<P: Doctrine> QDoctrine<P> {
    pub fn new(inner: P) -> Self {
        let objects = inner
            .sample_objects()
            .into_iter()
            .flat_map(|a| {
                equivalence_relations(&inner, &a)
                    .into_iter()
                    .map(move |rho| PEquivalenceRelation { object: a.clone(), rho })
            })
            .collect();
        Self { inner, objects }
    }

    pub fn objects(&self) -> &[QObj<P>] {
        &self.objects
    }

    /// `ρ ≤ P(f×f)(σ)`.
    pub fn preserves(&self, f: &P::Arrow, rho: &P::Elem, sigma: &P::Elem) -> bool {
        let d = &self.inner;
        let a = d.dom(f);
        d.leq(&d.product(&a, &a), rho, &d.reindex(&product_arrow(d, f, f), sigma))
    }

    /// The arrow `f: (A,ρ) → (B,σ)` if `f` preserves the relations.
    pub fn arrow(&self, dom: &QObj<P>, cod: &QObj<P>, f: &P::Arrow) -> Option<QArr<P>> {
        (self.inner.dom(f) == dom.object && self.inner.cod(f) == cod.object && self.preserves(f, &dom.rho, &cod.rho))
            .then(|| QArrow { dom: dom.clone(), cod: cod.clone(), arrow: f.clone() })
    }

    /// `J(A) = (A, δ_A)`.
    pub fn embed(&self, a: &P::Obj) -> QObj<P> {
        PEquivalenceRelation { object: a.clone(), rho: self.inner.equality(a) }
    }
}

impl<P: Doctrine> Doctrine for QDoctrine<P> {
    type Obj = QObj<P>;
    type Arrow = QArr<P>;
    type Elem = P::Elem;

    fn dom(&self, f: &Self::Arrow) -> Self::Obj {
        f.dom.clone()
    }
    fn cod(&self, f: &Self::Arrow) -> Self::Obj {
        f.cod.clone()
    }
    fn id(&self, a: &Self::Obj) -> Self::Arrow {
        QArrow { dom: a.clone(), cod: a.clone(), arrow: self.inner.id(&a.object) }
    }
    fn compose(&self, g: &Self::Arrow, f: &Self::Arrow) -> Self::Arrow {
        QArrow { dom: f.dom.clone(), cod: g.cod.clone(), arrow: self.inner.compose(&g.arrow, &f.arrow) }
    }
    fn is_iso(&self, f: &Self::Arrow) -> bool {
        let d = &self.inner;
        d.is_iso(&f.arrow) && d.reindex(&product_arrow(d, &f.arrow, &f.arrow), &f.cod.rho) == f.dom.rho
    }
    fn product(&self, a: &Self::Obj, b: &Self::Obj) -> Self::Obj {
        PEquivalenceRelation {
            object: self.inner.product(&a.object, &b.object),
            rho: boxed(&self.inner, &a.object, &b.object, &a.rho, &b.rho),
        }
    }
    fn pr1(&self, a: &Self::Obj, b: &Self::Obj) -> Self::Arrow {
        QArrow { dom: self.product(a, b), cod: a.clone(), arrow: self.inner.pr1(&a.object, &b.object) }
    }
    fn pr2(&self, a: &Self::Obj, b: &Self::Obj) -> Self::Arrow {
        QArrow { dom: self.product(a, b), cod: b.clone(), arrow: self.inner.pr2(&a.object, &b.object) }
    }
    fn pair(&self, f: &Self::Arrow, g: &Self::Arrow) -> Self::Arrow {
        QArrow { dom: f.dom.clone(), cod: self.product(&f.cod, &g.cod), arrow: self.inner.pair(&f.arrow, &g.arrow) }
    }
    fn terminal(&self) -> Self::Obj {
        let t = self.inner.terminal();
        let tt = self.inner.product(&t, &t);
        PEquivalenceRelation { rho: self.inner.top(&tt), object: t }
    }
    fn bang(&self, a: &Self::Obj) -> Self::Arrow {
        QArrow { dom: a.clone(), cod: self.terminal(), arrow: self.inner.bang(&a.object) }
    }

    fn fiber(&self, a: &Self::Obj) -> Vec<P::Elem> {
        descent_set(&self.inner, &a.object, &a.rho)
    }
    fn top(&self, a: &Self::Obj) -> P::Elem {
        self.inner.top(&a.object)
    }
    fn meet(&self, a: &Self::Obj, x: &P::Elem, y: &P::Elem) -> P::Elem {
        self.inner.meet(&a.object, x, y)
    }
    fn leq(&self, a: &Self::Obj, x: &P::Elem, y: &P::Elem) -> bool {
        self.inner.leq(&a.object, x, y)
    }
    fn reindex(&self, f: &Self::Arrow, x: &P::Elem) -> P::Elem {
        self.inner.reindex(&f.arrow, x)
    }
    fn equality(&self, a: &Self::Obj) -> P::Elem {
        a.rho.clone()
    }

    fn sample_objects(&self) -> Vec<Self::Obj> {
        self.objects.clone()
    }
    fn sample_arrows(&self) -> Vec<Self::Arrow> {
        let base = self.inner.sample_arrows();
        let mut out = Vec::new();
        for a in &self.objects {
            for b in &self.objects {
                out.extend(base.iter().filter_map(|f| self.arrow(a, b, f)));
            }
        }
        out
    }

    fn validate_base(&self) -> ValidationReport {
        let mut r = self.inner.validate_base();
        for f in self.sample_arrows() {
            if !self.preserves(&f.arrow, &f.dom.rho, &f.cod.rho) {
                r.violation("rp.arrow", format!("{:?} does not preserve the relations", f.arrow));
            }
        }
        for a in &self.objects {
            for b in &self.objects {
                let p = self.product(a, b);
                if !is_equivalence_relation(&self.inner, &p.object, &p.rho).is_empty() {
                    r.violation("rp.product", format!("ρ⊠σ over {:?}×{:?} is not an equivalence relation", a.object, b.object));
                }
                for g in [self.pr1(a, b), self.pr2(a, b)] {
                    if !self.preserves(&g.arrow, &g.dom.rho, &g.cod.rho) {
                        r.violation("rp.product", format!("a projection of {:?}×{:?} does not preserve relations", a.object, b.object));
                    }
                }
            }
        }
        r
    }
}

/// `(J, j): P → (P)_q`, `A ↦ (A, δ_A)` with identity components.
#[derive(Clone, Copy, Debug)]
pub struct Embedding<'a, P> {
    pub doctrine: &'a P,
}

impl<P: Doctrine> DoctrineHom<P, QDoctrine<P>> for Embedding<'_, P> {
    fn map_obj(&self, a: &P::Obj) -> QObj<P> {
        PEquivalenceRelation { object: a.clone(), rho: self.doctrine.equality(a) }
    }
    fn map_arrow(&self, f: &P::Arrow) -> QArr<P> {
        let d = self.doctrine;
        QArrow { dom: self.map_obj(&d.dom(f)), cod: self.map_obj(&d.cod(f)), arrow: f.clone() }
    }
    fn map_elem(&self, _a: &P::Obj, x: &P::Elem) -> P::Elem {
        x.clone()
    }
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub enum CompletionError {
    NotElementary(ValidationReport),
}

impl core::fmt::Display for CompletionError {
    fn fmt(&self, f: &mut core::fmt::Formatter<'_>) -> core::fmt::Result {
        match self {
            CompletionError::NotElementary(r) => write!(f, "doctrine is not elementary:\n{r}"),
        }
    }
}

#[cfg(feature = "std")]
impl std::error::Error for CompletionError {}

/// The completion of an elementary doctrine together with `(J, j)`.
/// Both are validated before returning.
pub fn build_completion<P: Doctrine + Clone>(d: &P) -> Result<QDoctrine<P>, CompletionError> {
    let r = crate::doctrine::validate_elementary(d);
    if r.has_violations() {
        return Err(CompletionError::NotElementary(r));
    }
    Ok(QDoctrine::new(d.clone()))
}

/// Validates the completion (elementary) and the embedding (homomorphism,
/// injective on objects).
pub fn validate_completion<P: Doctrine>(q: &QDoctrine<P>) -> ValidationReport {
    let mut r = crate::doctrine::validate_elementary(q).scoped("completion");
    let j = Embedding { doctrine: &q.inner };
    r.merge(crate::doctrine::validate_hom(&q.inner, q, &j).scoped("embedding"));
    let objs = q.inner.sample_objects();
    for (i, a) in objs.iter().enumerate() {
        for b in &objs[i + 1..] {
            if j.map_obj(a) == j.map_obj(b) {
                r.violation("embedding.injective", format!("J({a:?}) = J({b:?})"));
            }
        }
    }
    r
}

/// 𝓡_P as an explicit category over the sampled objects, with the chosen
/// products `(A×B, ρ⊠σ)` that land among them and the terminal `(1, ⊤)`
/// when it is sampled.
pub fn rp_category<P: Doctrine>(q: &QDoctrine<P>) -> FinCategory
where
    P::Arrow: Ord,
{
    let objs = q.objects();
    let names: Vec<String> = objs.iter().map(|o| format!("({:?}, {:?})", o.object, o.rho)).collect();
    let pos = |o: &QObj<P>| objs.iter().position(|x| x == o);
    let arrows: Vec<(String, usize, usize, P::Arrow)> = q
        .sample_arrows()
        .into_iter()
        .map(|f| {
            let (i, j) = (pos(&f.dom).unwrap(), pos(&f.cod).unwrap());
            (format!("{:?}:{i}→{j}", f.arrow), i, j, f.arrow)
        })
        .collect();
    let d = &q.inner;
    let mut c = FinCategory::from_concrete(&names, &arrows, |g, f| d.compose(g, f), |o, f| *f == d.id(&objs[o].object))
        .expect("relation-preserving arrows compose");
    let find = |i: usize, j: usize, f: &P::Arrow| arrows.iter().position(|a| a.1 == i && a.2 == j && a.3 == *f).map(fincat::Arrow);
    for (i, a) in objs.iter().enumerate() {
        for (j, b) in objs.iter().enumerate() {
            let p = q.product(a, b);
            let Some(k) = pos(&p) else { continue };
            if let (Some(p1), Some(p2)) = (find(k, i, &q.pr1(a, b).arrow), find(k, j, &q.pr2(a, b).arrow)) {
                c = fincat::with_product(&c, Obj(i), Obj(j), Obj(k), p1, p2);
            }
        }
    }
    if let Some(t) = pos(&q.terminal()) {
        c = fincat::with_terminal(&c, Obj(t));
    }
    c
}

// ---- quotients of finite sets ----

/// Union-find blocks of `s ⊆ n×n` ordered by least element, and the
/// projection. Fails when `s` is not an equivalence relation.
pub fn quotient_finset(n: usize, s: &BitSet) -> Result<(usize, FinFn), String> {
    let sub = SubFinSet { max_size: n.max(1), params: 1 };
    let r = is_equivalence_relation(&sub, &n, s);
    if !r.is_empty() {
        return Err(format!("not an equivalence relation: {r}"));
    }
    let mut block = vec![usize::MAX; n];
    let mut k = 0;
    for x in 0..n {
        if block[x] == usize::MAX {
            for y in x..n {
                if s.contains(x * n + y) {
                    block[y] = k;
                }
            }
            k += 1;
        }
    }
    Ok((k, FinFn::new(n, k, block)))
}

/// Whether preimage along `f` reflects inclusion: `f*U ⊆ f*V ⇒ U ⊆ V`
/// for all subsets of the codomain.
pub fn check_descent_map(f: &FinFn) -> ValidationReport {
    let mut r = ValidationReport::new();
    assert!(f.cod <= 16, "codomain too large for exhaustive subset pairs");
    let subsets: Vec<BitSet> = (0..1u64 << f.cod).map(|m| BitSet::from_mask(f.cod, m)).collect();
    let pre: Vec<BitSet> = subsets.iter().map(|u| f.preimage(u)).collect();
    for (i, u) in subsets.iter().enumerate() {
        for (j, v) in subsets.iter().enumerate() {
            if pre[i].is_subset(&pre[j]) && !u.is_subset(v) {
                r.violation("descent.full", format!("{f:?}: preimage of {u:?} ⊆ preimage of {v:?}"));
                return r;
            }
        }
    }
    r
}

/// Fullness of reindexing along the quotient map of `s`.
pub fn check_descent(n: usize, s: &BitSet) -> ValidationReport {
    match quotient_finset(n, s) {
        Ok((_, q)) => check_descent_map(&q),
        Err(e) => {
            let mut r = ValidationReport::new();
            r.violation("descent.relation", e);
            r
        }
    }
}

/// Every `g: n → m` (`m ≤ max_cod`) that is constant on the blocks of `s`
/// factors through the quotient map in exactly one way, and the quotient
/// map is surjective.
pub fn check_quotient_universal(n: usize, s: &BitSet, max_cod: usize) -> ValidationReport {
    let mut r = ValidationReport::new();
    let (k, q) = match quotient_finset(n, s) {
        Ok(x) => x,
        Err(e) => {
            r.violation("quotient.relation", e);
            return r;
        }
    };
    if (0..k).any(|b| !q.map.contains(&b)) {
        r.violation("quotient.surjective", format!("{q:?} misses a block"));
    }
    for m in 0..=max_cod {
        for g in FinFn::all(n, m) {
            let respects = (0..n).all(|x| (0..n).all(|y| !s.contains(x * n + y) || g.map[x] == g.map[y]));
            let factors = FinFn::all(k, m).into_iter().filter(|h| h.after(&q) == g).count();
            match (respects, factors) {
                (true, 1) | (false, 0) => {}
                _ => r.violation("quotient.universal", format!("{g:?} factors {factors} times through {q:?}")),
            }
        }
    }
    r
}

/// `(Q, 𝔮)` from the completion of Sub over finite sets back to Sub:
/// `(X, s) ↦ X/s`, arrows by their action on blocks, saturated subsets by
/// their image.
#[derive(Clone, Copy, Debug, Default)]
pub struct QuotientHom;

impl QuotientHom {
    fn quotient(a: &QObj<SubFinSet>) -> (usize, FinFn) {
        quotient_finset(a.object, &a.rho).expect("objects of the completion carry equivalence relations")
    }
}

impl DoctrineHom<QDoctrine<SubFinSet>, SubFinSet> for QuotientHom {
    fn map_obj(&self, a: &QObj<SubFinSet>) -> usize {
        Self::quotient(a).0
    }
    fn map_arrow(&self, f: &QArr<SubFinSet>) -> FinFn {
        let (k, q) = Self::quotient(&f.dom);
        let (k2, q2) = Self::quotient(&f.cod);
        let mut map = vec![0; k];
        for x in 0..f.dom.object {
            map[q.map[x]] = q2.map[f.arrow.map[x]];
        }
        FinFn::new(k, k2, map)
    }
    fn map_elem(&self, a: &QObj<SubFinSet>, x: &BitSet) -> BitSet {
        let (k, q) = Self::quotient(a);
        BitSet::from_indices(k, x.iter().map(|i| q.map[i]))
    }
}

/// The completion of `sub_finset_doctrine(n)` with `(Q, 𝔮)`.
pub fn q_functor(n: usize) -> Result<(QDoctrine<SubFinSet>, QuotientHom), CompletionError> {
    let d = crate::doctrine::sub_finset_doctrine(n).expect("n ≥ 1");
    Ok((build_completion(&d)?, QuotientHom))
}

/// `(Q, 𝔮)∘(J, j)` against the identity of Sub, on the sampled objects,
/// arrows and fibers.
pub fn check_q_after_j(q: &QDoctrine<SubFinSet>) -> ValidationReport {
    let mut r = ValidationReport::new();
    let d = &q.inner;
    let j = Embedding { doctrine: d };
    for a in d.sample_objects() {
        let ja = j.map_obj(&a);
        if QuotientHom.map_obj(&ja) != a {
            r.violation("qj.object", format!("QJ({a}) = {}", QuotientHom.map_obj(&ja)));
        }
        for x in d.fiber(&a) {
            if QuotientHom.map_elem(&ja, &j.map_elem(&a, &x)) != x {
                r.violation("qj.fiber", format!("𝔮j moves {x:?} over {a}"));
            }
        }
    }
    for f in d.sample_arrows() {
        if QuotientHom.map_arrow(&j.map_arrow(&f)) != f {
            r.violation("qj.arrow", format!("QJ({f:?}) ≠ {f:?}"));
        }
    }
    r
}

/// Quotient maps are sent to quotient maps: for `s ≤ t` on `X`, the arrow
/// `id: (X, s) → (X, t)` goes to a surjection.
pub fn check_preserves_quotients(q: &QDoctrine<SubFinSet>) -> ValidationReport {
    let mut r = ValidationReport::new();
    for a in q.objects() {
        for b in q.objects().iter().filter(|b| b.object == a.object) {
            let Some(f) = q.arrow(a, b, &FinFn::identity(a.object)) else { continue };
            let g = QuotientHom.map_arrow(&f);
            if (0..g.cod).any(|y| !g.map.contains(&y)) {
                r.violation("q.quotients", format!("Q({:?} → {:?}) is not surjective", a.rho, b.rho));
            }
        }
    }
    r
}

/// All equivalence relations on `n` as subsets of `n×n`.
pub fn finset_equivalences(n: usize) -> Vec<BitSet> {
    let sub = SubFinSet { max_size: n.max(1), params: 1 };
    equivalence_relations(&sub, &n)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::doctrine::fin::{over_terminal, FinPoset};
    use crate::doctrine::{in_descent_set, sub_finset_doctrine, validate_elementary, validate_hom};

    fn rel(n: usize, pairs: &[(usize, usize)]) -> BitSet {
        BitSet::from_indices(n * n, pairs.iter().map(|&(x, y)| x * n + y))
    }

    fn bell(n: usize) -> usize {
        // Bell numbers by the triangle, independent of the enumeration
        let mut row = vec![1usize];
        for _ in 0..n {
            let mut next = vec![*row.last().unwrap()];
            for &x in &row {
                next.push(next.last().unwrap() + x);
            }
            row = next;
        }
        row[0]
    }

    #[test]
    fn equality_and_top_are_equivalences() {
        let d = sub_finset_doctrine(3).unwrap();
        for n in 0..=3 {
            assert!(is_equivalence_relation(&d, &n, &d.equality(&n)).is_empty());
            assert!(is_equivalence_relation(&d, &n, &d.top(&(n * n))).is_empty());
        }
    }

    #[test]
    fn non_transitive_relation_is_named() {
        let d = sub_finset_doctrine(3).unwrap();
        let r = rel(3, &[(0, 0), (1, 1), (2, 2), (0, 1), (1, 0), (1, 2), (2, 1)]);
        let rep = is_equivalence_relation(&d, &3, &r);
        assert!(rep.mentions("eqrel.transitive"));
        assert!(!rep.mentions("eqrel.symmetric") && !rep.mentions("eqrel.reflexive"));
    }

    #[test]
    fn equivalences_are_counted_by_bell_numbers() {
        for n in 0..=4 {
            assert_eq!(finset_equivalences(n).len(), bell(n), "n = {n}");
        }
    }

    #[test]
    fn completion_over_terminal_two_chain() {
        let d = over_terminal(FinPoset::chain(2), 1);
        let q = build_completion(&d).unwrap();
        // fiber of the square is {0, 1}; only the top contains δ = 1
        assert_eq!(q.objects().len(), 1);
        assert!(validate_completion(&q).is_empty());
        let c = rp_category(&q);
        assert!(fincat::validate_category(&c).is_empty());
        assert_eq!(q.fiber(&q.objects()[0]), descent_set(&d, &Obj(0), &1));
    }

    #[test]
    fn non_elementary_is_rejected() {
        let d = over_terminal(FinPoset::chain(2), 0);
        assert!(matches!(build_completion(&d), Err(CompletionError::NotElementary(_))));
    }

    #[test]
    fn completion_of_sub_two() {
        let (q, _) = q_functor(2).unwrap();
        // partitions of 0, 1 and 2 elements
        assert_eq!(q.objects().len(), 1 + 1 + 2);
        assert!(validate_completion(&q).is_empty());
        for a in q.objects() {
            let (_, qm) = quotient_finset(a.object, &a.rho).unwrap();
            let expected: Vec<BitSet> = (0..1u64 << a.object)
                .map(|m| BitSet::from_mask(a.object, m))
                .filter(|u| (0..a.object).all(|x| (0..a.object).all(|y| qm.map[x] != qm.map[y] || u.contains(x) == u.contains(y))))
                .collect();
            let mut got = q.fiber(a);
            got.sort();
            let mut expected = expected;
            expected.sort();
            assert_eq!(got, expected);
        }
        assert!(validate_hom(&q, &q.inner, &QuotientHom).is_empty());
        assert!(check_q_after_j(&q).is_empty());
        assert!(check_preserves_quotients(&q).is_empty());
        let c = rp_category(&q);
        assert!(fincat::validate_category(&c).is_empty());
    }

    #[test]
    fn quotients() {
        let (k, q) = quotient_finset(3, &rel(3, &[(0, 0), (1, 1), (2, 2)])).unwrap();
        assert_eq!((k, q.map), (3, vec![0, 1, 2]));
        let (k, q) = quotient_finset(3, &rel(3, &[(0, 0), (1, 1), (2, 2), (0, 1), (1, 0)])).unwrap();
        assert_eq!(k, 2);
        assert!(q.map[0] == q.map[1] && q.map[1] != q.map[2]);
        let (k, _) = quotient_finset(3, &BitSet::full(9)).unwrap();
        assert_eq!(k, 1);
        assert!(quotient_finset(2, &rel(2, &[(0, 1)])).is_err());
    }

    #[test]
    fn descent_is_full_up_to_four() {
        for n in 0..=4 {
            for s in finset_equivalences(n) {
                assert!(check_descent(n, &s).is_empty());
                assert!(check_quotient_universal(n, &s, 3).is_empty());
            }
        }
    }

    #[test]
    fn inclusion_is_not_a_descent_map() {
        assert!(check_descent_map(&FinFn::new(1, 2, vec![0])).mentions("descent.full"));
    }

    #[test]
    fn total_relation_on_two() {
        let (q, qh) = q_functor(2).unwrap();
        let a = PEquivalenceRelation { object: 2, rho: BitSet::full(4) };
        assert_eq!(qh.map_obj(&a), 1);
        let mut images: Vec<BitSet> = q.fiber(&a).iter().map(|x| qh.map_elem(&a, x)).collect();
        images.sort();
        assert_eq!(images, vec![BitSet::empty(1), BitSet::full(1)]);
    }

    #[test]
    fn naturality_of_the_quotient_components() {
        let (q, qh) = q_functor(2).unwrap();
        let d = &q.inner;
        let a = q.embed(&2);
        let b = q.embed(&1);
        let f = q.arrow(&a, &b, &FinFn::new(2, 1, vec![0, 0])).unwrap();
        for x in q.fiber(&b) {
            let lhs = qh.map_elem(&a, &q.reindex(&f, &x));
            let rhs = d.reindex(&qh.map_arrow(&f), &qh.map_elem(&b, &x));
            assert_eq!(lhs, rhs);
        }
    }

    #[test]
    fn diagonal_is_in_its_own_descent_set() {
        let d = sub_finset_doctrine(2).unwrap();
        for n in 0..=2 {
            for s in finset_equivalences(n) {
                let nn = n * n;
                let boxed_s = boxed(&d, &n, &n, &s, &s);
                assert!(in_descent_set(&d, &nn, &boxed_s, &s));
            }
        }
    }

    #[test]
    fn sub_three_is_elementary() {
        assert!(validate_elementary(&sub_finset_doctrine(3).unwrap()).is_empty());
    }
}
