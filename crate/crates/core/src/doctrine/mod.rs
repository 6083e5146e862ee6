//! Primary and elementary doctrines.
//!
//! A doctrine is anything implementing [`Doctrine`]: a base category with
//! chosen finite products, a meet-semilattice fiber per object and reindexing
//! maps. Validators quantify over the finite samples the doctrine exposes.

pub mod axiom;
pub mod fin;
pub mod sub;

use alloc::format;
use alloc::vec::Vec;
use core::fmt::Debug;
use core::marker::PhantomData;

use crate::report::ValidationReport;

pub use axiom::{add_axiom, AxiomDoctrine, AxiomHom};
pub use fin::{FinDoctrine, FinPoset};
pub use sub::{sub_finset_doctrine, FinFn, PreimageHom, SubFinSet};

pub trait Doctrine {
    type Obj: Clone + Eq + Ord + Debug;
    type Arrow: Clone + Eq + Debug;
    type Elem: Clone + Eq + Ord + Debug;

    fn dom(&self, f: &Self::Arrow) -> Self::Obj;
    fn cod(&self, f: &Self::Arrow) -> Self::Obj;
    fn id(&self, a: &Self::Obj) -> Self::Arrow;
    /// `g∘f`.
    fn compose(&self, g: &Self::Arrow, f: &Self::Arrow) -> Self::Arrow;
    fn is_iso(&self, f: &Self::Arrow) -> bool;

    fn product(&self, a: &Self::Obj, b: &Self::Obj) -> Self::Obj;
    fn pr1(&self, a: &Self::Obj, b: &Self::Obj) -> Self::Arrow;
    fn pr2(&self, a: &Self::Obj, b: &Self::Obj) -> Self::Arrow;
    /// `⟨f, g⟩` into the chosen product of the codomains.
    fn pair(&self, f: &Self::Arrow, g: &Self::Arrow) -> Self::Arrow;
    fn terminal(&self) -> Self::Obj;
    fn bang(&self, a: &Self::Obj) -> Self::Arrow;

    /// Every element of `P(a)`, in a fixed order.
    fn fiber(&self, a: &Self::Obj) -> Vec<Self::Elem>;
    fn top(&self, a: &Self::Obj) -> Self::Elem;
    fn meet(&self, a: &Self::Obj, x: &Self::Elem, y: &Self::Elem) -> Self::Elem;
    fn leq(&self, a: &Self::Obj, x: &Self::Elem, y: &Self::Elem) -> bool;
    /// `P(f)(x)` for `x ∈ P(cod f)`.
    fn reindex(&self, f: &Self::Arrow, x: &Self::Elem) -> Self::Elem;
    /// `δ_a ∈ P(a×a)`.
    fn equality(&self, a: &Self::Obj) -> Self::Elem;

    /// Objects over which validators quantify.
    fn sample_objects(&self) -> Vec<Self::Obj>;
    /// Arrows over which validators quantify (between sample objects).
    fn sample_arrows(&self) -> Vec<Self::Arrow>;

    /// Structural checks on the presentation, run before anything else.
    fn validate_base(&self) -> ValidationReport {
        ValidationReport::new()
    }
}

/// `f × g : A×B → C×D`.
pub fn product_arrow<P: Doctrine>(d: &P, f: &P::Arrow, g: &P::Arrow) -> P::Arrow {
    let (a, b) = (d.dom(f), d.dom(g));
    let p1 = d.compose(f, &d.pr1(&a, &b));
    let p2 = d.compose(g, &d.pr2(&a, &b));
    d.pair(&p1, &p2)
}

/// `Δ_A = ⟨id, id⟩`.
pub fn diagonal<P: Doctrine>(d: &P, a: &P::Obj) -> P::Arrow {
    d.pair(&d.id(a), &d.id(a))
}

/// The four projections out of `(A×B)×(A×B)`.
pub fn four_projections<P: Doctrine>(d: &P, a: &P::Obj, b: &P::Obj) -> [P::Arrow; 4] {
    let ab = d.product(a, b);
    let (l, r) = (d.pr1(&ab, &ab), d.pr2(&ab, &ab));
    [
        d.compose(&d.pr1(a, b), &l),
        d.compose(&d.pr2(a, b), &l),
        d.compose(&d.pr1(a, b), &r),
        d.compose(&d.pr2(a, b), &r),
    ]
}

/// `ρ_A ⊠ ρ_B = P(⟨pr1,pr3⟩)(ρ_A) ∧ P(⟨pr2,pr4⟩)(ρ_B)` in `P((A×B)×(A×B))`.
pub fn boxed<P: Doctrine>(d: &P, a: &P::Obj, b: &P::Obj, rho_a: &P::Elem, rho_b: &P::Elem) -> P::Elem {
    let [p1, p2, p3, p4] = four_projections(d, a, b);
    let ab = d.product(a, b);
    let q = d.product(&ab, &ab);
    let left = d.reindex(&d.pair(&p1, &p3), rho_a);
    let right = d.reindex(&d.pair(&p2, &p4), rho_b);
    d.meet(&q, &left, &right)
}

/// `𝒟es_ρ = {α ∈ P(A) | P(pr1)(α) ∧ ρ ≤ P(pr2)(α)}`.
pub fn descent_set<P: Doctrine>(d: &P, a: &P::Obj, rho: &P::Elem) -> Vec<P::Elem> {
    d.fiber(a).into_iter().filter(|alpha| in_descent_set(d, a, rho, alpha)).collect()
}

pub fn in_descent_set<P: Doctrine>(d: &P, a: &P::Obj, rho: &P::Elem, alpha: &P::Elem) -> bool {
    let aa = d.product(a, a);
    let l = d.reindex(&d.pr1(a, a), alpha);
    let r = d.reindex(&d.pr2(a, a), alpha);
    d.leq(&aa, &d.meet(&aa, &l, rho), &r)
}

/// Checks that the base looks like a category with chosen products on the
/// samples, that every sampled fiber is a meet-semilattice with top, and that
/// reindexing is functorial and preserves meets and top.
pub fn validate_primary<P: Doctrine>(d: &P) -> ValidationReport {
    let mut r = d.validate_base();
    if r.has_violations() {
        return r;
    }
    let objects = d.sample_objects();
    let arrows = d.sample_arrows();
    for f in &arrows {
        let (a, b) = (d.dom(f), d.cod(f));
        if d.compose(f, &d.id(&a)) != *f || d.compose(&d.id(&b), f) != *f {
            r.violation("base.unit", format!("identities do not act trivially on {f:?}"));
        }
    }
    for a in &objects {
        for b in &objects {
            let (p1, p2) = (d.pr1(a, b), d.pr2(a, b));
            let ab = d.product(a, b);
            if d.dom(&p1) != ab || d.cod(&p1) != *a || d.dom(&p2) != ab || d.cod(&p2) != *b {
                r.violation("base.product", format!("projections of {a:?}×{b:?} are mistyped"));
                continue;
            }
            for f in arrows.iter().filter(|f| d.cod(f) == *a) {
                for g in arrows.iter().filter(|g| d.cod(g) == *b && d.dom(g) == d.dom(f)) {
                    let h = d.pair(f, g);
                    if d.compose(&p1, &h) != *f || d.compose(&p2, &h) != *g {
                        r.violation("base.product", format!("{a:?}×{b:?}: projections of ⟨{f:?},{g:?}⟩"));
                    }
                }
            }
            for h in arrows.iter().filter(|h| d.cod(h) == ab) {
                if d.pair(&d.compose(&p1, h), &d.compose(&p2, h)) != *h {
                    r.violation("base.product", format!("{a:?}×{b:?}: {h:?} is not the pairing of its projections"));
                }
            }
        }
        let t = d.terminal();
        let bang = d.bang(a);
        if d.dom(&bang) != *a || d.cod(&bang) != t {
            r.violation("base.terminal", format!("!_{a:?} is mistyped"));
        }
        for h in arrows.iter().filter(|h| d.dom(h) == *a && d.cod(h) == t) {
            if *h != bang {
                r.violation("base.terminal", format!("two arrows {a:?} → 1"));
            }
        }
    }
    for a in &objects {
        validate_fiber(d, a, &mut r);
    }
    for f in &arrows {
        let (a, b) = (d.dom(f), d.cod(f));
        let fiber_b = d.fiber(&b);
        if d.reindex(f, &d.top(&b)) != d.top(&a) {
            r.violation("reindex.top", format!("P({f:?}) does not preserve top"));
        }
        for x in &fiber_b {
            for y in &fiber_b {
                let lhs = d.reindex(f, &d.meet(&b, x, y));
                let rhs = d.meet(&a, &d.reindex(f, x), &d.reindex(f, y));
                if lhs != rhs {
                    r.violation("reindex.meet", format!("P({f:?}) drops the meet of {x:?} and {y:?}"));
                }
            }
        }
    }
    for a in &objects {
        for x in d.fiber(a) {
            if d.reindex(&d.id(a), &x) != x {
                r.violation("reindex.identity", format!("P(id_{a:?}) moves {x:?}"));
            }
        }
    }
    for g in &arrows {
        for f in arrows.iter().filter(|f| d.cod(f) == d.dom(g)) {
            let gf = d.compose(g, f);
            for x in d.fiber(&d.cod(g)) {
                if d.reindex(&gf, &x) != d.reindex(f, &d.reindex(g, &x)) {
                    r.violation("reindex.composition", format!("P({g:?}∘{f:?}) ≠ P({f:?})P({g:?}) at {x:?}"));
                    break;
                }
            }
        }
    }
    r
}

fn validate_fiber<P: Doctrine>(d: &P, a: &P::Obj, r: &mut ValidationReport) {
    let fiber = d.fiber(a);
    let top = d.top(a);
    if !fiber.contains(&top) {
        r.violation("fiber.top", format!("top of P({a:?}) is not in the fiber"));
    }
    for x in &fiber {
        if !d.leq(a, x, x) {
            r.violation("fiber.order", format!("P({a:?}): {x:?} ≰ itself"));
        }
        if !d.leq(a, x, &top) {
            r.violation("fiber.top", format!("P({a:?}): {x:?} ≰ top"));
        }
        for y in &fiber {
            if x != y && d.leq(a, x, y) && d.leq(a, y, x) {
                r.violation("fiber.order", format!("P({a:?}): {x:?} and {y:?} are not antisymmetric"));
            }
            let m = d.meet(a, x, y);
            if !d.leq(a, &m, x) || !d.leq(a, &m, y) {
                r.violation("fiber.meet", format!("P({a:?}): {x:?}∧{y:?} is not a lower bound"));
            }
            for z in &fiber {
                if d.leq(a, z, x) && d.leq(a, z, y) && !d.leq(a, z, &m) {
                    r.violation("fiber.meet", format!("P({a:?}): {x:?}∧{y:?} is not greatest"));
                }
                if d.leq(a, x, y) && d.leq(a, y, z) && !d.leq(a, x, z) {
                    r.violation("fiber.order", format!("P({a:?}): transitivity fails at {x:?},{y:?},{z:?}"));
                }
            }
        }
    }
}

/// The three conditions on the fibered equality, for every sampled object
/// (and every pair of sampled objects for the product condition).
pub fn validate_elementary<P: Doctrine>(d: &P) -> ValidationReport {
    let mut r = validate_primary(d);
    if r.has_violations() {
        return r;
    }
    let objects = d.sample_objects();
    for a in &objects {
        let delta = d.equality(a);
        let diag = diagonal(d, a);
        if !d.leq(a, &d.top(a), &d.reindex(&diag, &delta)) {
            r.violation("elementary.1", format!("⊤ ≰ P(Δ)(δ) over {a:?}"));
        }
        let fiber = d.fiber(a);
        let des = descent_set(d, a, &delta);
        if des.len() != fiber.len() {
            let missing = fiber.iter().find(|x| !des.contains(x)).unwrap();
            r.violation(
                "elementary.2",
                format!("𝒟es(δ) over {a:?} misses {missing:?} ({} of {})", des.len(), fiber.len()),
            );
        }
    }
    for a in &objects {
        for b in &objects {
            let lhs = boxed(d, a, b, &d.equality(a), &d.equality(b));
            let ab = d.product(a, b);
            let q = d.product(&ab, &ab);
            if !d.leq(&q, &lhs, &d.equality(&ab)) {
                r.violation("elementary.3", format!("δ⊠δ ≰ δ over {a:?}×{b:?}"));
            }
        }
    }
    r
}

/// A homomorphism of doctrines `(F, 𝔣): P → R`.
pub trait DoctrineHom<P: Doctrine, R: Doctrine> {
    fn map_obj(&self, a: &P::Obj) -> R::Obj;
    fn map_arrow(&self, f: &P::Arrow) -> R::Arrow;
    /// `𝔣_a(x)` for `x ∈ P(a)`.
    fn map_elem(&self, a: &P::Obj, x: &P::Elem) -> R::Elem;
}

/// The comparison `⟨F pr1, F pr2⟩ : F(A×B) → FA×FB`.
pub fn product_comparison<P: Doctrine, R: Doctrine>(
    p: &P,
    r: &R,
    h: &impl DoctrineHom<P, R>,
    a: &P::Obj,
    b: &P::Obj,
) -> R::Arrow {
    r.pair(&h.map_arrow(&p.pr1(a, b)), &h.map_arrow(&p.pr2(a, b)))
}

pub fn validate_hom<P: Doctrine, R: Doctrine>(p: &P, r: &R, h: &impl DoctrineHom<P, R>) -> ValidationReport {
    let mut rep = ValidationReport::new();
    let objects = p.sample_objects();
    let arrows = p.sample_arrows();
    for f in &arrows {
        let hf = h.map_arrow(f);
        if r.dom(&hf) != h.map_obj(&p.dom(f)) || r.cod(&hf) != h.map_obj(&p.cod(f)) {
            rep.violation("hom.functor", format!("F({f:?}) is mistyped"));
        }
    }
    if rep.has_violations() {
        return rep;
    }
    for a in &objects {
        if h.map_arrow(&p.id(a)) != r.id(&h.map_obj(a)) {
            rep.violation("hom.functor", format!("F(id_{a:?}) is not an identity"));
        }
    }
    for g in &arrows {
        for f in arrows.iter().filter(|f| p.cod(f) == p.dom(g)) {
            if h.map_arrow(&p.compose(g, f)) != r.compose(&h.map_arrow(g), &h.map_arrow(f)) {
                rep.violation("hom.functor", format!("F({g:?}∘{f:?}) ≠ F{g:?}∘F{f:?}"));
            }
        }
    }
    for a in &objects {
        for b in &objects {
            if !r.is_iso(&product_comparison(p, r, h, a, b)) {
                rep.violation("hom.products", format!("F does not preserve {a:?}×{b:?}"));
            }
        }
    }
    if !r.is_iso(&r.bang(&h.map_obj(&p.terminal()))) {
        rep.violation("hom.terminal", "F(1) is not terminal");
    }
    for a in &objects {
        let fa = h.map_obj(a);
        if h.map_elem(a, &p.top(a)) != r.top(&fa) {
            rep.violation("hom.top", format!("𝔣_{a:?}(⊤) ≠ ⊤"));
        }
        let fiber = p.fiber(a);
        for x in &fiber {
            for y in &fiber {
                let lhs = h.map_elem(a, &p.meet(a, x, y));
                let rhs = r.meet(&fa, &h.map_elem(a, x), &h.map_elem(a, y));
                if lhs != rhs {
                    rep.violation("hom.meet", format!("𝔣_{a:?} does not preserve {x:?}∧{y:?}"));
                }
            }
        }
        let aa = p.product(a, a);
        let image = h.map_elem(&aa, &p.equality(a));
        let expected = r.reindex(&product_comparison(p, r, h, a, a), &r.equality(&fa));
        if image != expected {
            rep.violation("hom.equality", format!("𝔣(δ_{a:?}) ≠ δ_F{a:?}"));
        }
    }
    for f in &arrows {
        let (a, b) = (p.dom(f), p.cod(f));
        for x in p.fiber(&b) {
            let lhs = h.map_elem(&a, &p.reindex(f, &x));
            let rhs = r.reindex(&h.map_arrow(f), &h.map_elem(&b, &x));
            if lhs != rhs {
                rep.violation("hom.naturality", format!("𝔣 not natural at {f:?}, element {x:?}"));
                break;
            }
        }
    }
    rep
}

/// A 2-cell `θ: (F,𝔣) → (G,𝔤)`.
pub trait TwoCell<P: Doctrine, R: Doctrine> {
    /// `θ_a : Fa → Ga`.
    fn component(&self, a: &P::Obj) -> R::Arrow;
}

/// Checks typing and naturality of `θ` and `𝔣_A(α) ≤ R(θ_A)(𝔤_A(α))`.
pub fn validate_2cell<P: Doctrine, R: Doctrine>(
    p: &P,
    r: &R,
    f: &impl DoctrineHom<P, R>,
    g: &impl DoctrineHom<P, R>,
    theta: &impl TwoCell<P, R>,
) -> ValidationReport {
    let mut rep = ValidationReport::new();
    let objects = p.sample_objects();
    for a in &objects {
        let t = theta.component(a);
        if r.dom(&t) != f.map_obj(a) || r.cod(&t) != g.map_obj(a) {
            rep.violation("2cell.typing", format!("θ_{a:?} is mistyped"));
        }
    }
    if rep.has_violations() {
        return rep;
    }
    for h in p.sample_arrows() {
        let (a, b) = (p.dom(&h), p.cod(&h));
        let lhs = r.compose(&theta.component(&b), &f.map_arrow(&h));
        let rhs = r.compose(&g.map_arrow(&h), &theta.component(&a));
        if lhs != rhs {
            rep.violation("2cell.naturality", format!("square at {h:?} does not commute"));
        }
    }
    for a in &objects {
        let t = theta.component(a);
        let fa = f.map_obj(a);
        for alpha in p.fiber(a) {
            let lhs = f.map_elem(a, &alpha);
            let rhs = r.reindex(&t, &g.map_elem(a, &alpha));
            if !r.leq(&fa, &lhs, &rhs) {
                rep.violation("2cell.inequality", format!("fails at ({a:?}, {alpha:?})"));
            }
        }
    }
    rep
}

pub struct IdentityHom;

impl<P: Doctrine> DoctrineHom<P, P> for IdentityHom {
    fn map_obj(&self, a: &P::Obj) -> P::Obj {
        a.clone()
    }
    fn map_arrow(&self, f: &P::Arrow) -> P::Arrow {
        f.clone()
    }
    fn map_elem(&self, _a: &P::Obj, x: &P::Elem) -> P::Elem {
        x.clone()
    }
}

/// `outer ∘ inner` through an intermediate doctrine `Q`.
pub struct ComposedHom<'a, H1, H2, Q> {
    pub inner: &'a H1,
    pub outer: &'a H2,
    pub middle: PhantomData<Q>,
}

impl<'a, H1, H2, Q> ComposedHom<'a, H1, H2, Q> {
    pub fn new(inner: &'a H1, outer: &'a H2) -> Self {
        Self { inner, outer, middle: PhantomData }
    }
}

impl<P: Doctrine, Q: Doctrine, R: Doctrine, H1: DoctrineHom<P, Q>, H2: DoctrineHom<Q, R>> DoctrineHom<P, R>
    for ComposedHom<'_, H1, H2, Q>
{
    fn map_obj(&self, a: &P::Obj) -> R::Obj {
        self.outer.map_obj(&self.inner.map_obj(a))
    }
    fn map_arrow(&self, f: &P::Arrow) -> R::Arrow {
        self.outer.map_arrow(&self.inner.map_arrow(f))
    }
    fn map_elem(&self, a: &P::Obj, x: &P::Elem) -> R::Elem {
        self.outer.map_elem(&self.inner.map_obj(a), &self.inner.map_elem(a, x))
    }
}

/// The identity 2-cell on `h`.
pub struct IdentityCell<'a, R, H> {
    pub target: &'a R,
    pub hom: &'a H,
}

impl<P: Doctrine, R: Doctrine, H: DoctrineHom<P, R>> TwoCell<P, R> for IdentityCell<'_, R, H> {
    fn component(&self, a: &P::Obj) -> R::Arrow {
        self.target.id(&self.hom.map_obj(a))
    }
}

/// Vertical composite `outer · inner`.
pub struct VerticalCell<'a, R, T1, T2> {
    pub target: &'a R,
    pub inner: &'a T1,
    pub outer: &'a T2,
}

impl<P: Doctrine, R: Doctrine, T1: TwoCell<P, R>, T2: TwoCell<P, R>> TwoCell<P, R> for VerticalCell<'_, R, T1, T2> {
    fn component(&self, a: &P::Obj) -> R::Arrow {
        self.target.compose(&self.outer.component(a), &self.inner.component(a))
    }
}

/// Horizontal composite of `θ: F ⇒ G` (P → Q) and `θ': F' ⇒ G'` (Q → R):
/// components `θ'_{GA} ∘ F'(θ_A)`.
pub struct HorizontalCell<'a, Q, R, T1, T2, G, F2> {
    pub middle: PhantomData<Q>,
    pub target: &'a R,
    pub inner: &'a T1,
    pub inner_target: &'a G,
    pub outer: &'a T2,
    pub outer_source: &'a F2,
}

impl<P, Q, R, T1, T2, G, F2> TwoCell<P, R> for HorizontalCell<'_, Q, R, T1, T2, G, F2>
where
    P: Doctrine,
    Q: Doctrine,
    R: Doctrine,
    T1: TwoCell<P, Q>,
    T2: TwoCell<Q, R>,
    G: DoctrineHom<P, Q>,
    F2: DoctrineHom<Q, R>,
{
    fn component(&self, a: &P::Obj) -> R::Arrow {
        let ga = self.inner_target.map_obj(a);
        self.target.compose(&self.outer.component(&ga), &self.outer_source.map_arrow(&self.inner.component(a)))
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::BitSet;

    #[test]
    fn descent_set_of_diagonal_and_total() {
        let d = sub_finset_doctrine(2).unwrap();
        let delta = d.equality(&2);
        assert_eq!(descent_set(&d, &2, &delta).len(), 4);
        let total = BitSet::full(4);
        let des = descent_set(&d, &2, &total);
        assert_eq!(des, vec![BitSet::empty(2), BitSet::full(2)]);
    }

    #[test]
    fn box_of_equalities_is_the_diagonal() {
        let d = sub_finset_doctrine(2).unwrap();
        let lhs = boxed(&d, &1, &2, &d.equality(&1), &d.equality(&2));
        // oracle: (a,b,a',b') ↦ index (a*2+b)*2 + (a'*2+b') in the 4-fold product
        let expected = BitSet::from_indices(4, (0..2).map(|ab| ab * 2 + ab));
        assert_eq!(lhs, expected);
        assert_eq!(lhs, d.equality(&2));
        let top = boxed(&d, &2, &2, &d.top(&4), &d.top(&4));
        assert_eq!(top, d.top(&16));
    }

    #[test]
    fn reindexing_diagonal_after_box_dominates_delta() {
        let d = sub_finset_doctrine(2).unwrap();
        for a in 0..=2usize {
            let aa = a * a;
            let b = boxed(&d, &a, &a, &d.equality(&a), &d.equality(&a));
            let pulled = d.reindex(&product_arrow(&d, &diagonal(&d, &a), &diagonal(&d, &a)), &b);
            assert!(d.leq(&aa, &d.equality(&a), &pulled));
        }
    }

    #[test]
    fn two_cells_between_preimage_homs() {
        let p = SubFinSet::with_params(2, 2).unwrap();
        let r = SubFinSet::with_params(2, 1).unwrap();
        let h0 = PreimageHom { f: FinFn::new(1, 2, vec![0]) };
        let h1 = PreimageHom { f: FinFn::new(1, 2, vec![1]) };
        let id = IdentityCell { target: &r, hom: &h0 };
        assert!(validate_2cell(&p, &r, &h0, &h0, &id).is_empty());
        let rep = validate_2cell(&p, &r, &h0, &h1, &id);
        assert!(rep.mentions("2cell.inequality"), "{rep}");
        let v = VerticalCell { target: &r, inner: &id, outer: &id };
        assert!(validate_2cell(&p, &r, &h0, &h0, &v).is_empty());
        let c = ComposedHom::new(&h0, &IdentityHom);
        assert!(validate_hom(&p, &r, &c).is_empty());
    }
}
