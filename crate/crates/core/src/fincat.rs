//! Finite categories presented by explicit composition tables.
//!
//! Chosen binary products and a chosen terminal object are part of the
//! presentation; [`validate_category`] checks them exhaustively instead of
//! searching for them.

use alloc::collections::BTreeMap;
use alloc::format;
use alloc::string::{String, ToString};
use alloc::vec;
use alloc::vec::Vec;
use core::fmt;

use crate::report::ValidationReport;

#[derive(Clone, Copy, Debug, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct Obj(pub usize);

#[derive(Clone, Copy, Debug, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct Arrow(pub usize);

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct ArrowData {
    pub name: String,
    pub dom: Obj,
    pub cod: Obj,
}

/// A chosen product `A×B` with its projections and pairing table.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct ChosenProduct {
    pub object: Obj,
    pub pr1: Arrow,
    pub pr2: Arrow,
    /// `(f, g) ↦ ⟨f, g⟩` for every pair of arrows with a common domain.
    pub pairing: BTreeMap<(Arrow, Arrow), Arrow>,
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct ChosenTerminal {
    pub object: Obj,
    /// `bang[X]` is the unique arrow `X → 1`.
    pub bang: Vec<Arrow>,
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub enum FinCatError {
    UnknownObject(String),
    DuplicateName(String),
    /// A concrete composite did not match any listed arrow.
    NotClosed { outer: String, inner: String },
}

impl fmt::Display for FinCatError {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            FinCatError::UnknownObject(o) => write!(f, "unknown object `{o}`"),
            FinCatError::DuplicateName(n) => write!(f, "duplicate name `{n}`"),
            FinCatError::NotClosed { outer, inner } => {
                write!(f, "composite {outer}∘{inner} is not a listed arrow")
            }
        }
    }
}

#[cfg(feature = "std")]
impl std::error::Error for FinCatError {}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct FinCategory {
    objects: Vec<String>,
    arrows: Vec<ArrowData>,
    identities: Vec<Arrow>,
    /// `(g, f) ↦ g∘f`.
    composition: BTreeMap<(Arrow, Arrow), Arrow>,
    products: BTreeMap<(Obj, Obj), ChosenProduct>,
    terminal: Option<ChosenTerminal>,
}

impl FinCategory {
    pub fn builder() -> FinCategoryBuilder {
        FinCategoryBuilder::default()
    }

    /// Builds a category of concrete arrows whose composition is computed by
    /// `compose` and matched back against the listed arrows by key equality.
    ///
    /// `arrows` must contain an identity for every object (detected via
    /// `is_identity`). Products are not declared.
    pub fn from_concrete<K: Ord + Clone>(
        objects: &[String],
        arrows: &[(String, usize, usize, K)],
        compose: impl Fn(&K, &K) -> K,
        is_identity: impl Fn(usize, &K) -> bool,
    ) -> Result<Self, FinCatError> {
        let mut b = FinCategory::builder();
        for o in objects {
            b.object_without_identity(o)?;
        }
        let mut ids = vec![None; objects.len()];
        for (name, d, c, k) in arrows {
            let a = b.arrow(name, Obj(*d), Obj(*c))?;
            if d == c && is_identity(*d, k) && ids[*d].is_none() {
                ids[*d] = Some(a);
            }
        }
        for (o, id) in ids.iter().enumerate() {
            match id {
                Some(a) => b.identities[o] = *a,
                None => return Err(FinCatError::UnknownObject(format!("identity of {}", objects[o]))),
            }
        }
        let index: BTreeMap<(usize, usize, &K), usize> =
            arrows.iter().enumerate().map(|(i, (_, d, c, k))| ((*d, *c, k), i)).collect();
        for (gi, (gn, gd, gc, gk)) in arrows.iter().enumerate() {
            for (fi, (fname, fd, fc, fk)) in arrows.iter().enumerate() {
                if fc != gd {
                    continue;
                }
                let h = compose(gk, fk);
                match index.get(&(*fd, *gc, &h)) {
                    Some(&hi) => {
                        b.composition.insert((Arrow(gi), Arrow(fi)), Arrow(hi));
                    }
                    None => {
                        return Err(FinCatError::NotClosed { outer: gn.clone(), inner: fname.clone() })
                    }
                }
            }
        }
        Ok(b.build())
    }

    pub fn num_objects(&self) -> usize {
        self.objects.len()
    }

    pub fn num_arrows(&self) -> usize {
        self.arrows.len()
    }

    pub fn objects(&self) -> impl Iterator<Item = Obj> {
        (0..self.objects.len()).map(Obj)
    }

    pub fn arrows(&self) -> impl Iterator<Item = Arrow> {
        (0..self.arrows.len()).map(Arrow)
    }

    pub fn object_name(&self, o: Obj) -> &str {
        &self.objects[o.0]
    }

    pub fn arrow_name(&self, a: Arrow) -> &str {
        &self.arrows[a.0].name
    }

    pub fn object_by_name(&self, name: &str) -> Option<Obj> {
        self.objects.iter().position(|o| o == name).map(Obj)
    }

    pub fn arrow_by_name(&self, name: &str) -> Option<Arrow> {
        self.arrows.iter().position(|a| a.name == name).map(Arrow)
    }

    pub fn dom(&self, a: Arrow) -> Obj {
        self.arrows[a.0].dom
    }

    pub fn cod(&self, a: Arrow) -> Obj {
        self.arrows[a.0].cod
    }

    pub fn identity(&self, o: Obj) -> Arrow {
        self.identities[o.0]
    }

    /// `g∘f`, if the table has an entry.
    pub fn compose(&self, g: Arrow, f: Arrow) -> Option<Arrow> {
        self.composition.get(&(g, f)).copied()
    }

    /// All arrows `dom → cod`, in id order.
    pub fn hom(&self, dom: Obj, cod: Obj) -> Vec<Arrow> {
        self.arrows().filter(|&a| self.dom(a) == dom && self.cod(a) == cod).collect()
    }

    pub fn product(&self, a: Obj, b: Obj) -> Option<&ChosenProduct> {
        self.products.get(&(a, b))
    }

    pub fn products(&self) -> impl Iterator<Item = (&(Obj, Obj), &ChosenProduct)> {
        self.products.iter()
    }

    pub fn terminal(&self) -> Option<&ChosenTerminal> {
        self.terminal.as_ref()
    }

    /// `⟨f, g⟩` into the chosen product of the codomains.
    pub fn pair(&self, f: Arrow, g: Arrow) -> Option<Arrow> {
        let p = self.product(self.cod(f), self.cod(g))?;
        p.pairing.get(&(f, g)).copied()
    }

    /// An inverse of `f`, if one exists.
    pub fn inverse(&self, f: Arrow) -> Option<Arrow> {
        let (d, c) = (self.dom(f), self.cod(f));
        self.hom(c, d).into_iter().find(|&g| {
            self.compose(g, f) == Some(self.identity(d)) && self.compose(f, g) == Some(self.identity(c))
        })
    }

    fn describe_arrow(&self, a: Arrow) -> String {
        let d = &self.arrows[a.0];
        format!("{}:{}→{}", d.name, self.objects[d.dom.0], self.objects[d.cod.0])
    }
}

#[derive(Clone, Debug, Default)]
pub struct FinCategoryBuilder {
    objects: Vec<String>,
    arrows: Vec<ArrowData>,
    identities: Vec<Arrow>,
    composition: BTreeMap<(Arrow, Arrow), Arrow>,
    products: BTreeMap<(Obj, Obj), ChosenProduct>,
    terminal: Option<ChosenTerminal>,
}

impl FinCategoryBuilder {
    /// Adds an object together with its identity arrow `id_<name>`.
    pub fn object(&mut self, name: &str) -> Result<Obj, FinCatError> {
        let o = self.object_without_identity(name)?;
        let id = self.arrow(&format!("id_{name}"), o, o)?;
        self.identities[o.0] = id;
        Ok(o)
    }

    fn object_without_identity(&mut self, name: &str) -> Result<Obj, FinCatError> {
        if self.objects.iter().any(|o| o == name) {
            return Err(FinCatError::DuplicateName(name.to_string()));
        }
        self.objects.push(name.to_string());
        self.identities.push(Arrow(usize::MAX));
        Ok(Obj(self.objects.len() - 1))
    }

    pub fn arrow(&mut self, name: &str, dom: Obj, cod: Obj) -> Result<Arrow, FinCatError> {
        if self.arrows.iter().any(|a| a.name == name) {
            return Err(FinCatError::DuplicateName(name.to_string()));
        }
        if dom.0 >= self.objects.len() || cod.0 >= self.objects.len() {
            return Err(FinCatError::UnknownObject(format!("{dom:?}/{cod:?}")));
        }
        self.arrows.push(ArrowData { name: name.to_string(), dom, cod });
        Ok(Arrow(self.arrows.len() - 1))
    }

    /// Records `g∘f = h`, overriding any previous entry.
    pub fn composite(&mut self, g: Arrow, f: Arrow, h: Arrow) -> &mut Self {
        self.composition.insert((g, f), h);
        self
    }

    /// Fills every missing composite whose hom-set has exactly one arrow.
    /// Enough for thin categories and for composites with identities.
    pub fn close_thin(&mut self) -> &mut Self {
        self.fill_identity_composites();
        let n = self.arrows.len();
        for g in 0..n {
            for f in 0..n {
                if self.arrows[f].cod != self.arrows[g].dom || self.composition.contains_key(&(Arrow(g), Arrow(f))) {
                    continue;
                }
                let (d, c) = (self.arrows[f].dom, self.arrows[g].cod);
                let candidates: Vec<usize> =
                    (0..n).filter(|&h| self.arrows[h].dom == d && self.arrows[h].cod == c).collect();
                if candidates.len() == 1 {
                    self.composition.insert((Arrow(g), Arrow(f)), Arrow(candidates[0]));
                }
            }
        }
        self
    }

    fn fill_identity_composites(&mut self) {
        for (i, a) in self.arrows.iter().enumerate() {
            let id_d = self.identities[a.dom.0];
            let id_c = self.identities[a.cod.0];
            self.composition.entry((Arrow(i), id_d)).or_insert(Arrow(i));
            self.composition.entry((id_c, Arrow(i))).or_insert(Arrow(i));
        }
    }

    /// Declares `object` with projections as the product `a×b`; the pairing
    /// table is filled by searching for the least arrow meeting both
    /// projection equations (uniqueness is left to validation).
    pub fn product(&mut self, a: Obj, b: Obj, object: Obj, pr1: Arrow, pr2: Arrow) -> &mut Self {
        self.products.insert((a, b), ChosenProduct { object, pr1, pr2, pairing: BTreeMap::new() });
        self
    }

    pub fn terminal(&mut self, object: Obj) -> &mut Self {
        self.terminal = Some(ChosenTerminal { object, bang: Vec::new() });
        self
    }

    pub fn build(mut self) -> FinCategory {
        self.fill_identity_composites();
        let arrows = self.arrows.clone();
        let compose = |g: usize, f: usize| self.composition.get(&(Arrow(g), Arrow(f))).copied();
        let mut products = self.products.clone();
        for ((a, b), p) in products.iter_mut() {
            for f in 0..arrows.len() {
                if arrows[f].cod != *a {
                    continue;
                }
                for g in 0..arrows.len() {
                    if arrows[g].cod != *b || arrows[g].dom != arrows[f].dom {
                        continue;
                    }
                    let x = arrows[f].dom;
                    let found = (0..arrows.len()).find(|&h| {
                        arrows[h].dom == x
                            && arrows[h].cod == p.object
                            && compose(p.pr1.0, h) == Some(Arrow(f))
                            && compose(p.pr2.0, h) == Some(Arrow(g))
                    });
                    if let Some(h) = found {
                        p.pairing.entry((Arrow(f), Arrow(g))).or_insert(Arrow(h));
                    }
                }
            }
        }
        let terminal = self.terminal.clone().map(|t| {
            let bang = (0..self.objects.len())
                .map(|x| {
                    (0..arrows.len())
                        .find(|&h| arrows[h].dom == Obj(x) && arrows[h].cod == t.object)
                        .map(Arrow)
                        .unwrap_or(Arrow(usize::MAX))
                })
                .collect();
            ChosenTerminal { object: t.object, bang }
        });
        FinCategory {
            objects: self.objects,
            arrows: self.arrows,
            identities: self.identities,
            composition: self.composition,
            products,
            terminal,
        }
    }
}

/// Declares a product on an already built category (pairing found by search).
pub fn with_product(c: &FinCategory, a: Obj, b: Obj, object: Obj, pr1: Arrow, pr2: Arrow) -> FinCategory {
    let mut builder = FinCategoryBuilder {
        objects: c.objects.clone(),
        arrows: c.arrows.clone(),
        identities: c.identities.clone(),
        composition: c.composition.clone(),
        products: c.products.clone(),
        terminal: c.terminal.as_ref().map(|t| ChosenTerminal { object: t.object, bang: Vec::new() }),
    };
    builder.product(a, b, object, pr1, pr2);
    builder.build()
}

/// Declares `object` as the terminal object of an already built category.
pub fn with_terminal(c: &FinCategory, object: Obj) -> FinCategory {
    let mut builder = FinCategoryBuilder {
        objects: c.objects.clone(),
        arrows: c.arrows.clone(),
        identities: c.identities.clone(),
        composition: c.composition.clone(),
        products: c.products.clone(),
        terminal: None,
    };
    builder.terminal(object);
    builder.build()
}

/// Overrides one pairing entry; used to build deliberately broken fixtures.
pub fn with_pairing_entry(c: &FinCategory, a: Obj, b: Obj, f: Arrow, g: Arrow, h: Arrow) -> FinCategory {
    let mut c = c.clone();
    if let Some(p) = c.products.get_mut(&(a, b)) {
        p.pairing.insert((f, g), h);
    }
    c
}

/// Checks every category axiom and every piece of declared structure.
pub fn validate_category(c: &FinCategory) -> ValidationReport {
    let mut r = ValidationReport::new();
    for o in c.objects() {
        let id = c.identity(o);
        if id.0 >= c.num_arrows() || c.dom(id) != o || c.cod(id) != o {
            r.violation("identity.typing", format!("identity of {} is not an endo-arrow on it", c.object_name(o)));
        }
    }
    if r.has_violations() {
        return r;
    }
    for (&(g, f), &h) in &c.composition {
        if g.0 >= c.num_arrows() || f.0 >= c.num_arrows() || h.0 >= c.num_arrows() {
            r.violation("composition.range", format!("entry ({g:?},{f:?}) ↦ {h:?} names a missing arrow"));
            continue;
        }
        if c.cod(f) != c.dom(g) {
            r.violation(
                "composition.spurious",
                format!("entry for non-composable {}∘{}", c.arrow_name(g), c.arrow_name(f)),
            );
        } else if c.dom(h) != c.dom(f) || c.cod(h) != c.cod(g) {
            r.violation(
                "composition.typing",
                format!(
                    "{}∘{} = {} but expected an arrow {}→{}",
                    c.arrow_name(g),
                    c.arrow_name(f),
                    c.describe_arrow(h),
                    c.object_name(c.dom(f)),
                    c.object_name(c.cod(g))
                ),
            );
        }
    }
    if r.has_violations() {
        return r;
    }
    for g in c.arrows() {
        for f in c.arrows() {
            if c.cod(f) == c.dom(g) && c.compose(g, f).is_none() {
                r.violation(
                    "composition.total",
                    format!("no entry for {}∘{}", c.arrow_name(g), c.arrow_name(f)),
                );
            }
        }
    }
    if r.has_violations() {
        return r;
    }
    for f in c.arrows() {
        let (d, k) = (c.dom(f), c.cod(f));
        if c.compose(f, c.identity(d)) != Some(f) || c.compose(c.identity(k), f) != Some(f) {
            r.violation("unit", format!("identities do not act trivially on {}", c.arrow_name(f)));
        }
    }
    for h in c.arrows() {
        for g in c.arrows().filter(|&g| c.cod(g) == c.dom(h)) {
            let hg = c.compose(h, g).unwrap();
            for f in c.arrows().filter(|&f| c.cod(f) == c.dom(g)) {
                let left = c.compose(hg, f);
                let right = c.compose(h, c.compose(g, f).unwrap());
                if left != right {
                    r.violation(
                        "associativity",
                        format!("({}∘{})∘{} ≠ {}∘({}∘{})", c.arrow_name(h), c.arrow_name(g), c.arrow_name(f),
                            c.arrow_name(h), c.arrow_name(g), c.arrow_name(f)),
                    );
                }
            }
        }
    }
    for (&(a, b), p) in &c.products {
        validate_product(c, a, b, p, &mut r);
    }
    if let Some(t) = &c.terminal {
        for x in c.objects() {
            let hom = c.hom(x, t.object);
            if hom.len() != 1 || t.bang.get(x.0) != Some(&hom[0]) {
                r.violation(
                    "terminal",
                    format!("{} has {} arrows into {}", c.object_name(x), hom.len(), c.object_name(t.object)),
                );
            }
        }
    }
    r
}

fn validate_product(c: &FinCategory, a: Obj, b: Obj, p: &ChosenProduct, r: &mut ValidationReport) {
    let pair_name = format!("{}×{}", c.object_name(a), c.object_name(b));
    if c.dom(p.pr1) != p.object || c.cod(p.pr1) != a || c.dom(p.pr2) != p.object || c.cod(p.pr2) != b {
        r.violation("product.projections", format!("projections of {pair_name} are mistyped"));
        return;
    }
    for x in c.objects() {
        for f in c.hom(x, a) {
            for g in c.hom(x, b) {
                match p.pairing.get(&(f, g)) {
                    None => r.violation(
                        "product.pairing",
                        format!("{pair_name}: no pairing for ⟨{},{}⟩", c.arrow_name(f), c.arrow_name(g)),
                    ),
                    Some(&h) => {
                        if c.dom(h) != x || c.cod(h) != p.object {
                            r.violation("product.pairing", format!("{pair_name}: ⟨{},{}⟩ is mistyped", c.arrow_name(f), c.arrow_name(g)));
                        } else if c.compose(p.pr1, h) != Some(f) || c.compose(p.pr2, h) != Some(g) {
                            r.violation(
                                "product.beta",
                                format!("{pair_name}: projections of ⟨{},{}⟩ do not recover the components", c.arrow_name(f), c.arrow_name(g)),
                            );
                        }
                    }
                }
            }
        }
        for h in c.hom(x, p.object) {
            let (f, g) = (c.compose(p.pr1, h), c.compose(p.pr2, h));
            if let (Some(f), Some(g)) = (f, g) {
                if p.pairing.get(&(f, g)) != Some(&h) {
                    r.violation(
                        "product.uniqueness",
                        format!("{pair_name}: {} is not the pairing of its projections", c.arrow_name(h)),
                    );
                }
            }
        }
    }
}

/// A functor between finite categories.
#[derive(Clone, Debug)]
pub struct FinFunctor<'a> {
    pub source: &'a FinCategory,
    pub target: &'a FinCategory,
    pub objects: Vec<Obj>,
    pub arrows: Vec<Arrow>,
}

impl<'a> FinFunctor<'a> {
    pub fn identity(c: &'a FinCategory) -> Self {
        Self { source: c, target: c, objects: c.objects().collect(), arrows: c.arrows().collect() }
    }

    /// The functor sending everything to `object` and its identity.
    pub fn constant(source: &'a FinCategory, target: &'a FinCategory, object: Obj) -> Self {
        Self {
            source,
            target,
            objects: vec![object; source.num_objects()],
            arrows: vec![target.identity(object); source.num_arrows()],
        }
    }

    pub fn obj(&self, o: Obj) -> Obj {
        self.objects[o.0]
    }

    pub fn arr(&self, a: Arrow) -> Arrow {
        self.arrows[a.0]
    }

    /// `self ∘ inner`.
    pub fn after(&self, inner: &FinFunctor<'a>) -> FinFunctor<'a> {
        FinFunctor {
            source: inner.source,
            target: self.target,
            objects: inner.objects.iter().map(|&o| self.obj(o)).collect(),
            arrows: inner.arrows.iter().map(|&a| self.arr(a)).collect(),
        }
    }
}

pub fn validate_functor(f: &FinFunctor<'_>, check_products: bool) -> ValidationReport {
    let (s, t) = (f.source, f.target);
    let mut r = ValidationReport::new();
    if f.objects.len() != s.num_objects() || f.arrows.len() != s.num_arrows() {
        r.violation("functor.shape", "object or arrow map has the wrong length");
        return r;
    }
    for a in s.arrows() {
        let fa = f.arr(a);
        if t.dom(fa) != f.obj(s.dom(a)) || t.cod(fa) != f.obj(s.cod(a)) {
            r.violation("functor.typing", format!("image of {} is mistyped", s.arrow_name(a)));
        }
    }
    if r.has_violations() {
        return r;
    }
    for o in s.objects() {
        if f.arr(s.identity(o)) != t.identity(f.obj(o)) {
            r.violation("functor.identity", format!("identity of {} not preserved", s.object_name(o)));
        }
    }
    for g in s.arrows() {
        for h in s.arrows().filter(|&h| s.cod(h) == s.dom(g)) {
            let lhs = s.compose(g, h).map(|gh| f.arr(gh));
            let rhs = t.compose(f.arr(g), f.arr(h));
            if lhs != rhs {
                r.violation(
                    "functor.composition",
                    format!("F({}∘{}) ≠ F{}∘F{}", s.arrow_name(g), s.arrow_name(h), s.arrow_name(g), s.arrow_name(h)),
                );
            }
        }
    }
    if check_products {
        for (&(a, b), p) in s.products() {
            let pair = format!("{}×{}", s.object_name(a), s.object_name(b));
            let Some(tp) = t.product(f.obj(a), f.obj(b)) else {
                r.violation("functor.products", format!("{pair}: target declares no product of the images"));
                continue;
            };
            let comparison = tp.pairing.get(&(f.arr(p.pr1), f.arr(p.pr2))).copied();
            match comparison {
                Some(c) if t.inverse(c).is_some() => {}
                _ => r.violation(
                    "functor.products",
                    format!("{pair}: comparison ⟨F pr1, F pr2⟩ is not invertible"),
                ),
            }
        }
        if let (Some(st), Some(tt)) = (s.terminal(), t.terminal()) {
            let image = f.obj(st.object);
            match tt.bang.get(image.0) {
                Some(&b) if t.inverse(b).is_some() => {}
                _ => r.violation("functor.terminal", "image of the terminal object is not terminal"),
            }
        }
    }
    r
}

/// A natural transformation between parallel functors.
#[derive(Clone, Debug)]
pub struct FinNatTrans<'a> {
    pub source: FinFunctor<'a>,
    pub target: FinFunctor<'a>,
    pub components: Vec<Arrow>,
}

impl<'a> FinNatTrans<'a> {
    pub fn identity(f: &FinFunctor<'a>) -> Self {
        let components = f.source.objects().map(|o| f.target.identity(f.obj(o))).collect();
        Self { source: f.clone(), target: f.clone(), components }
    }

    /// Vertical composite `self ∘ inner`, if every composite exists.
    pub fn vertical_after(&self, inner: &FinNatTrans<'a>) -> Option<FinNatTrans<'a>> {
        let t = self.source.target;
        let components = self
            .components
            .iter()
            .zip(&inner.components)
            .map(|(&outer, &inn)| t.compose(outer, inn))
            .collect::<Option<Vec<_>>>()?;
        Some(FinNatTrans { source: inner.source.clone(), target: self.target.clone(), components })
    }
}

pub fn validate_nat_trans(n: &FinNatTrans<'_>) -> ValidationReport {
    let (s, t) = (n.source.source, n.source.target);
    let mut r = ValidationReport::new();
    if n.components.len() != s.num_objects() {
        r.violation("nat.shape", "wrong number of components");
        return r;
    }
    for o in s.objects() {
        let c = n.components[o.0];
        if t.dom(c) != n.source.obj(o) || t.cod(c) != n.target.obj(o) {
            r.violation("nat.typing", format!("component at {} is mistyped", s.object_name(o)));
        }
    }
    if r.has_violations() {
        return r;
    }
    for a in s.arrows() {
        let (x, y) = (s.dom(a), s.cod(a));
        let lhs = t.compose(n.target.arr(a), n.components[x.0]);
        let rhs = t.compose(n.components[y.0], n.source.arr(a));
        if lhs != rhs {
            r.violation("nat.naturality", format!("square at {} does not commute", s.arrow_name(a)));
        }
    }
    r
}

/// A functor from a finite category into finite sets (carriers `{0..n-1}`).
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct SetFunctor<'a> {
    pub category: &'a FinCategory,
    pub sizes: Vec<usize>,
    /// `maps[a][x]` is the image of `x` under the function assigned to arrow `a`.
    pub maps: Vec<Vec<usize>>,
}

impl<'a> SetFunctor<'a> {
    pub fn size(&self, o: Obj) -> usize {
        self.sizes[o.0]
    }

    pub fn apply(&self, a: Arrow, x: usize) -> usize {
        self.maps[a.0][x]
    }

    pub fn validate(&self) -> ValidationReport {
        let c = self.category;
        let mut r = ValidationReport::new();
        if self.sizes.len() != c.num_objects() || self.maps.len() != c.num_arrows() {
            r.violation("setfunctor.shape", "wrong number of sets or maps");
            return r;
        }
        for a in c.arrows() {
            let (d, k) = (self.size(c.dom(a)), self.size(c.cod(a)));
            if self.maps[a.0].len() != d || self.maps[a.0].iter().any(|&y| y >= k) {
                r.violation("setfunctor.typing", format!("map of {} is not a function", c.arrow_name(a)));
            }
        }
        if r.has_violations() {
            return r;
        }
        for o in c.objects() {
            let id = &self.maps[c.identity(o).0];
            if id.iter().enumerate().any(|(i, &y)| i != y) {
                r.violation("setfunctor.identity", format!("identity of {} not sent to identity", c.object_name(o)));
            }
        }
        for g in c.arrows() {
            for f in c.arrows().filter(|&f| c.cod(f) == c.dom(g)) {
                let Some(gf) = c.compose(g, f) else { continue };
                for x in 0..self.size(c.dom(f)) {
                    if self.apply(gf, x) != self.apply(g, self.apply(f, x)) {
                        r.violation(
                            "setfunctor.composition",
                            format!("{}∘{} at {x}", c.arrow_name(g), c.arrow_name(f)),
                        );
                        break;
                    }
                }
            }
        }
        r
    }

    /// `self ∘ f` for a functor `f` into this functor's category.
    pub fn precompose(&self, f: &FinFunctor<'a>) -> SetFunctor<'a> {
        SetFunctor {
            category: f.source,
            sizes: f.objects.iter().map(|&o| self.size(o)).collect(),
            maps: f.arrows.iter().map(|&a| self.maps[a.0].clone()).collect(),
        }
    }
}

/// Natural transformations between set-valued functors are component tables.
pub fn validate_set_nat_trans(source: &SetFunctor<'_>, target: &SetFunctor<'_>, components: &[Vec<usize>]) -> ValidationReport {
    let c = source.category;
    let mut r = ValidationReport::new();
    for o in c.objects() {
        let comp = &components[o.0];
        if comp.len() != source.size(o) || comp.iter().any(|&y| y >= target.size(o)) {
            r.violation("setnat.typing", format!("component at {} is not a function", c.object_name(o)));
        }
    }
    if r.has_violations() {
        return r;
    }
    for a in c.arrows() {
        let (x, y) = (c.dom(a), c.cod(a));
        for e in 0..source.size(x) {
            if target.apply(a, components[x.0][e]) != components[y.0][source.apply(a, e)] {
                r.violation("setnat.naturality", format!("square at {} fails on element {e}", c.arrow_name(a)));
                break;
            }
        }
    }
    r
}

/// The one-object, one-arrow category with its only object terminal and
/// self-product.
pub fn terminal_category() -> FinCategory {
    let mut b = FinCategory::builder();
    let o = b.object("*").unwrap();
    let id = Arrow(0);
    b.product(o, o, o, id, id).terminal(o);
    b.build()
}

/// The discrete category on `n` objects.
pub fn discrete(n: usize) -> FinCategory {
    let mut b = FinCategory::builder();
    for i in 0..n {
        b.object(&i.to_string()).unwrap();
    }
    b.build()
}

/// The arrow category `0 → 1` (the two-element chain), with its products
/// (meets) and terminal object `1`.
pub fn arrow_category() -> FinCategory {
    let mut b = FinCategory::builder();
    let zero = b.object("0").unwrap();
    let one = b.object("1").unwrap();
    let u = b.arrow("u", zero, one).unwrap();
    b.close_thin();
    let (id0, id1) = (Arrow(0), Arrow(1));
    b.product(zero, zero, zero, id0, id0)
        .product(zero, one, zero, id0, u)
        .product(one, zero, zero, u, id0)
        .product(one, one, one, id1, id1)
        .terminal(one);
    b.build()
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn terminal_category_is_valid() {
        assert!(validate_category(&terminal_category()).is_empty());
    }

    #[test]
    fn arrow_category_with_products_is_valid() {
        let c = arrow_category();
        let r = validate_category(&c);
        assert!(r.is_empty(), "{r}");
        // ⟨pr1, pr2⟩ = id on every chosen product
        for (_, p) in c.products() {
            assert_eq!(c.pair(p.pr1, p.pr2), Some(c.identity(p.object)));
        }
    }

    #[test]
    fn wrong_composite_target_is_reported() {
        let mut b = FinCategory::builder();
        let a = b.object("A").unwrap();
        let bb = b.object("B").unwrap();
        let f = b.arrow("f", a, bb).unwrap();
        b.close_thin();
        // f∘id_A should be f; point it at id_B instead
        b.composite(f, Arrow(0), Arrow(1));
        let r = validate_category(&b.build());
        assert!(r.has_violations());
        assert!(r.mentions("composition.typing"), "{r}");
        assert!(r.mentions("f∘id_A"), "{r}");
    }

    #[test]
    fn broken_pairing_is_reported() {
        let c = arrow_category();
        let zero = Obj(0);
        let one = Obj(1);
        let u = c.arrow_by_name("u").unwrap();
        // ⟨id0, u⟩ into 0×1 = 0 must be id0; redirect it to u (mistyped).
        let bad = with_pairing_entry(&c, zero, one, Arrow(0), u, u);
        let r = validate_category(&bad);
        assert!(r.mentions("product"), "{r}");
    }

    #[test]
    fn identity_and_constant_functors() {
        let c = arrow_category();
        assert!(validate_functor(&FinFunctor::identity(&c), true).is_empty());
        let two = discrete(2);
        let one = terminal_category();
        let k = FinFunctor::constant(&two, &one, Obj(0));
        assert!(validate_functor(&k, true).is_empty());
    }

    #[test]
    fn comparison_without_inverse_is_reported() {
        // target: discrete objects S (product S×S = S×S object Q) as in Set
        // with |S| = 2, |Q| = 4; source: terminal category. F(*) = S violates
        // * × * = * because S×S = Q is not isomorphic to S.
        let sets = crate::doctrine::sub::finset_category(&[1, 2, 4]);
        let one = terminal_category();
        let s = sets.object_by_name("2").unwrap();
        let f = FinFunctor {
            source: &one,
            target: &sets,
            objects: vec![s],
            arrows: vec![sets.identity(s)],
        };
        assert!(validate_functor(&f, false).is_empty());
        let r = validate_functor(&f, true);
        assert!(r.mentions("*×*"), "{r}");
    }

    #[test]
    fn naturality_checks() {
        let c = arrow_category();
        let id = FinFunctor::identity(&c);
        assert!(validate_nat_trans(&FinNatTrans::identity(&id)).is_empty());

        let two = discrete(2);
        let k0 = FinFunctor::constant(&two, &c, Obj(0));
        let k1 = FinFunctor::constant(&two, &c, Obj(1));
        let u = c.arrow_by_name("u").unwrap();
        let t = FinNatTrans { source: k0.clone(), target: k1.clone(), components: vec![u, u] };
        assert!(validate_nat_trans(&t).is_empty());

        // identity functor to the constant-at-1 functor: at object 1 a
        // component must be 1→1, at 0 it must be 0→1. Try a mistyped
        // component at 0, then a non-commuting one.
        let k1c = FinFunctor::constant(&c, &c, Obj(1));
        let good = FinNatTrans { source: id.clone(), target: k1c.clone(), components: vec![u, Arrow(1)] };
        assert!(validate_nat_trans(&good).is_empty());
        let bad = FinNatTrans { source: id, target: k1c, components: vec![Arrow(0), Arrow(1)] };
        assert!(validate_nat_trans(&bad).has_violations());
    }

    #[test]
    fn non_commuting_square_is_reported() {
        // Two parallel arrows f, g: A → B; functors F = G = identity with
        // component at A = id, at B = swap where swap∘f = g ≠ f∘... built thin-free.
        let mut b = FinCategory::builder();
        let a = b.object("A").unwrap();
        let bo = b.object("B").unwrap();
        let f = b.arrow("f", a, bo).unwrap();
        let g = b.arrow("g", a, bo).unwrap();
        let s = b.arrow("s", bo, bo).unwrap();
        b.composite(s, f, g).composite(s, g, f).composite(s, s, Arrow(1));
        let c = b.build();
        assert!(validate_category(&c).is_empty(), "{}", validate_category(&c));
        let id = FinFunctor::identity(&c);
        let t = FinNatTrans { source: id.clone(), target: id, components: vec![Arrow(0), s] };
        let r = validate_nat_trans(&t);
        assert!(r.mentions("f") && r.mentions("naturality"), "{r}");
    }

    #[test]
    fn composition_of_functors_and_transformations() {
        let c = arrow_category();
        let id = FinFunctor::identity(&c);
        let comp = id.after(&id);
        assert!(validate_functor(&comp, true).is_empty());
        let u = c.arrow_by_name("u").unwrap();
        let k1 = FinFunctor::constant(&c, &c, Obj(1));
        let t1 = FinNatTrans { source: id.clone(), target: k1.clone(), components: vec![u, Arrow(1)] };
        let t2 = FinNatTrans::identity(&k1);
        let v = t2.vertical_after(&t1).unwrap();
        assert!(validate_nat_trans(&v).is_empty());
        assert_eq!(v.components, t1.components);
    }
}
