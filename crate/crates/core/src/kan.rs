//! Pointwise left Kan extensions into finite sets.
//!
//! [`lan_finite`] computes `Lan_F H (D)` as the quotient of the pairs
//! `(u: FA → D, x ∈ HA)` by `(u∘F(w), x) ~ (u, H(w)(x))`. [`lan_ctx`] does the
//! same for a theory morphism and a model, where the pairs are tuples of
//! target terms over one constant per model element.

use alloc::collections::BTreeMap;
use alloc::format;
use alloc::string::{String, ToString};
use alloc::vec;
use alloc::vec::Vec;
use core::fmt;

use crate::fincat::{self, Arrow, FinCategory, FinFunctor, Obj, SetFunctor};
use crate::prover::{ClassId, Congruence, TermUniverse};
use crate::report::ValidationReport;
use crate::semantics::{decode_tuple, encode_tuple, tuple_count, Structure, StructureHom};
use crate::syntax::{translate_term, Context, CtxArrow, SortId, Term, TheoryMorphism};

/// A pair `(u: F(source) → D, elem ∈ H(source))`.
#[derive(Clone, Copy, Debug, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct LanElem {
    pub source: Obj,
    pub arrow: Arrow,
    pub elem: usize,
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct LanResult {
    /// The requested objects `D`.
    pub at: Vec<Obj>,
    /// Per requested object, its classes; each class sorted, classes
    /// ordered by least member.
    pub classes: Vec<Vec<Vec<LanElem>>>,
    index: Vec<BTreeMap<LanElem, usize>>,
    /// `μ_A`, for source objects whose image was requested.
    pub unit: Vec<Option<Vec<usize>>>,
    /// `Lan(g)` for every target arrow between requested objects.
    pub action: BTreeMap<Arrow, Vec<usize>>,
}

impl LanResult {
    pub fn position(&self, d: Obj) -> Option<usize> {
        self.at.iter().position(|&x| x == d)
    }

    pub fn size(&self, d: Obj) -> Option<usize> {
        self.position(d).map(|i| self.classes[i].len())
    }

    pub fn class_of(&self, d: Obj, e: &LanElem) -> Option<usize> {
        self.index[self.position(d)?].get(e).copied()
    }
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub enum KanError {
    /// The candidate mediator sends two members of one class apart.
    IllDefined { object: String, class: usize, detail: String },
    NotRequested(String),
}

impl fmt::Display for KanError {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            KanError::IllDefined { object, class, detail } => {
                write!(f, "mediator is ill-defined at {object}, class {class}: {detail}")
            }
            KanError::NotRequested(o) => write!(f, "object {o} was not computed"),
        }
    }
}

#[cfg(feature = "std")]
impl std::error::Error for KanError {}

struct UnionFind {
    parent: Vec<usize>,
}

impl UnionFind {
    fn new(n: usize) -> Self {
        Self { parent: (0..n).collect() }
    }
    fn find(&mut self, mut x: usize) -> usize {
        while self.parent[x] != x {
            self.parent[x] = self.parent[self.parent[x]];
            x = self.parent[x];
        }
        x
    }
    fn union(&mut self, a: usize, b: usize) {
        let (a, b) = (self.find(a), self.find(b));
        if a != b {
            let (lo, hi) = if a < b { (a, b) } else { (b, a) };
            self.parent[hi] = lo;
        }
    }
}

/// `Lan_F H` at each object of `at`.
pub fn lan_finite(f: &FinFunctor<'_>, h: &SetFunctor<'_>, at: &[Obj]) -> LanResult {
    let (src, tgt) = (f.source, f.target);
    let mut classes = Vec::new();
    let mut index = Vec::new();
    for &d in at {
        let mut elems = Vec::new();
        for a in src.objects() {
            for u in tgt.hom(f.obj(a), d) {
                for x in 0..h.size(a) {
                    elems.push(LanElem { source: a, arrow: u, elem: x });
                }
            }
        }
        elems.sort();
        let pos: BTreeMap<LanElem, usize> = elems.iter().enumerate().map(|(i, e)| (*e, i)).collect();
        let mut uf = UnionFind::new(elems.len());
        for w in src.arrows() {
            let (a2, a) = (src.dom(w), src.cod(w));
            for u in tgt.hom(f.obj(a), d) {
                let uw = tgt.compose(u, f.arr(w)).expect("composable");
                for x in 0..h.size(a2) {
                    let l = pos[&LanElem { source: a2, arrow: uw, elem: x }];
                    let r = pos[&LanElem { source: a, arrow: u, elem: h.apply(w, x) }];
                    uf.union(l, r);
                }
            }
        }
        // roots are least members, so grouping by root in element order
        // yields classes ordered by least member
        let mut by_root: BTreeMap<usize, usize> = BTreeMap::new();
        let mut cls: Vec<Vec<LanElem>> = Vec::new();
        let mut idx = BTreeMap::new();
        for (i, e) in elems.iter().enumerate() {
            let r = uf.find(i);
            let k = *by_root.entry(r).or_insert_with(|| {
                cls.push(Vec::new());
                cls.len() - 1
            });
            cls[k].push(*e);
            idx.insert(*e, k);
        }
        classes.push(cls);
        index.push(idx);
    }
    let mut result = LanResult { at: at.to_vec(), classes, index, unit: Vec::new(), action: BTreeMap::new() };
    result.unit = src
        .objects()
        .map(|a| {
            let fa = f.obj(a);
            result.position(fa).map(|_| {
                let id = tgt.identity(fa);
                (0..h.size(a)).map(|x| result.class_of(fa, &LanElem { source: a, arrow: id, elem: x }).unwrap()).collect()
            })
        })
        .collect();
    for g in tgt.arrows() {
        let (d, d2) = (tgt.dom(g), tgt.cod(g));
        let (Some(i), Some(_)) = (result.position(d), result.position(d2)) else { continue };
        let table = result.classes[i]
            .iter()
            .map(|cls| {
                let e = cls[0];
                let moved = LanElem { arrow: tgt.compose(g, e.arrow).unwrap(), ..e };
                result.class_of(d2, &moved).unwrap()
            })
            .collect();
        result.action.insert(g, table);
    }
    result
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct MediatorResult {
    /// `θ̂_D` per requested object, in the order of `LanResult::at`.
    pub components: Vec<Vec<usize>>,
}

/// `θ̂_D([u, x]) = K(u)(θ_A(x))`, checked constant on every class.
pub fn mediator(lan: &LanResult, f: &FinFunctor<'_>, k: &SetFunctor<'_>, theta: &[Vec<usize>]) -> Result<MediatorResult, KanError> {
    let tgt = f.target;
    let mut components = Vec::new();
    for (i, &d) in lan.at.iter().enumerate() {
        let mut comp = Vec::new();
        for (c, cls) in lan.classes[i].iter().enumerate() {
            let val = |e: &LanElem| k.apply(e.arrow, theta[e.source.0][e.elem]);
            let v = val(&cls[0]);
            if let Some(bad) = cls.iter().find(|e| val(e) != v) {
                return Err(KanError::IllDefined {
                    object: tgt.object_name(d).to_string(),
                    class: c,
                    detail: format!("{:?} ↦ {v} but {bad:?} ↦ {}", cls[0], val(bad)),
                });
            }
            comp.push(v);
        }
        components.push(comp);
    }
    Ok(MediatorResult { components })
}

/// `θ̂ ∘ μ = θ` and naturality of `θ̂` on the computed action.
pub fn check_mediator(lan: &LanResult, f: &FinFunctor<'_>, k: &SetFunctor<'_>, theta: &[Vec<usize>], m: &MediatorResult) -> ValidationReport {
    let mut r = ValidationReport::new();
    let (src, tgt) = (f.source, f.target);
    for a in src.objects() {
        let Some(mu) = &lan.unit[a.0] else { continue };
        let i = lan.position(f.obj(a)).unwrap();
        for (x, &c) in mu.iter().enumerate() {
            if m.components[i][c] != theta[a.0][x] {
                r.violation("mediator.unit", format!("θ̂∘μ ≠ θ at {} element {x}", src.object_name(a)));
            }
        }
    }
    for (&g, table) in &lan.action {
        let (i, j) = (lan.position(tgt.dom(g)).unwrap(), lan.position(tgt.cod(g)).unwrap());
        for (c, &c2) in table.iter().enumerate() {
            if m.components[j][c2] != k.apply(g, m.components[i][c]) {
                r.violation("mediator.naturality", format!("square at {} fails on class {c}", tgt.arrow_name(g)));
            }
        }
    }
    r
}

/// Number of families `Lan(D) → K(D)` that are natural on the computed
/// action and satisfy `θ̂ ∘ μ = θ`, found by exhaustive search.
pub fn count_mediators(lan: &LanResult, f: &FinFunctor<'_>, k: &SetFunctor<'_>, theta: &[Vec<usize>]) -> usize {
    let slots: Vec<(usize, usize)> = lan.classes.iter().enumerate().flat_map(|(i, c)| (0..c.len()).map(move |j| (i, j))).collect();
    let sizes: Vec<usize> = lan.at.iter().map(|&d| k.size(d)).collect();
    let mut comps: Vec<Vec<usize>> = lan.classes.iter().map(|c| vec![0; c.len()]).collect();
    let mut count = 0;
    fn go(
        k_idx: usize,
        slots: &[(usize, usize)],
        sizes: &[usize],
        comps: &mut Vec<Vec<usize>>,
        check: &dyn Fn(&MediatorResult) -> bool,
        count: &mut usize,
    ) {
        if k_idx == slots.len() {
            if check(&MediatorResult { components: comps.clone() }) {
                *count += 1;
            }
            return;
        }
        let (i, j) = slots[k_idx];
        for v in 0..sizes[i] {
            comps[i][j] = v;
            go(k_idx + 1, slots, sizes, comps, check, count);
        }
    }
    let check = |m: &MediatorResult| check_mediator(lan, f, k, theta, m).is_empty();
    go(0, &slots, &sizes, &mut comps, &check, &mut count);
    count
}

/// For each pair `(D, D')` with a chosen product, tests that
/// `⟨Lan(pr1), Lan(pr2)⟩ : Lan(D×D') → Lan(D)×Lan(D')` is a bijection.
pub fn check_product_preservation(lan: &LanResult, c: &FinCategory, pairs: &[(Obj, Obj)]) -> ValidationReport {
    let mut r = ValidationReport::new();
    for &(d, d2) in pairs {
        let name = format!("{}×{}", c.object_name(d), c.object_name(d2));
        let Some(p) = c.product(d, d2) else {
            r.violation("lan.products", format!("{name}: no chosen product"));
            continue;
        };
        let (Some(n1), Some(n2), Some(np)) = (lan.size(d), lan.size(d2), lan.size(p.object)) else {
            r.violation("lan.products", format!("{name}: not all objects were computed"));
            continue;
        };
        let (Some(t1), Some(t2)) = (lan.action.get(&p.pr1), lan.action.get(&p.pr2)) else {
            r.violation("lan.products", format!("{name}: projections were not computed"));
            continue;
        };
        let mut hit = vec![false; n1 * n2];
        let mut injective = true;
        for c in 0..np {
            let v = t1[c] * n2 + t2[c];
            injective &= !core::mem::replace(&mut hit[v], true);
        }
        if !injective || np != n1 * n2 {
            r.violation("lan.products", format!("{name}: comparison {np} → {n1}·{n2} is not bijective"));
        }
    }
    r
}

// ---- contexts ----

/// `Lan_E H^M` at a target context, at bounded term depth.
#[derive(Clone, Debug)]
pub struct CtxLan {
    pub ctx: Context,
    pub depth: usize,
    /// Generator `i` is the constant of model element `generators[i]` (sort, element).
    pub generators: Vec<(SortId, usize)>,
    /// Per target sort, the class representatives (least terms), over generators.
    pub reps: Vec<Vec<Term>>,
    /// Per target sort and class, its universe members.
    pub members: Vec<Vec<Vec<Term>>>,
    /// Class counts per sort unchanged at `depth + 1`.
    pub stable: bool,
    cong: Congruence,
    class_ids: Vec<Vec<ClassId>>,
}

/// Generator constants: one per element of each source sort, sort-major.
pub fn model_generators(m: &TheoryMorphism, mdl: &Structure) -> (Vec<(SortId, usize)>, Vec<SortId>) {
    let gens: Vec<(SortId, usize)> =
        mdl.carriers.iter().enumerate().flat_map(|(s, &k)| (0..k).map(move |a| (SortId(s), a))).collect();
    let sorts = gens.iter().map(|(s, _)| m.sort_map[s.0]).collect();
    (gens, sorts)
}

/// The translated diagram: `E(f)(c_{a⃗}) = c_{f^M(a⃗)}` for every source
/// operation `f` and argument tuple.
pub fn diagram_equations(m: &TheoryMorphism, mdl: &Structure) -> Vec<(Term, Term)> {
    let (gens, _) = model_generators(m, mdl);
    let gen_index = |s: SortId, a: usize| gens.iter().position(|&g| g == (s, a)).unwrap();
    let sig = &m.source.sig;
    let mut out = Vec::new();
    for f in sig.op_ids() {
        let d = sig.op_decl(f);
        for args in mdl.tuples(&d.args) {
            let consts: Vec<Term> = d.args.iter().zip(&args).map(|(s, &a)| Term::Var(gen_index(*s, a))).collect();
            let lhs = translate_term(m, &Term::App(f, (0..args.len()).map(Term::Var).collect())).substitute(&consts);
            let rhs = Term::Var(gen_index(d.result, mdl.op(f, &args)));
            out.push((lhs, rhs));
        }
    }
    out
}

fn ctx_congruence(m: &TheoryMorphism, mdl: &Structure, depth: usize) -> (Congruence, Vec<Vec<(ClassId, Vec<Term>)>>) {
    let (_, sorts) = model_generators(m, mdl);
    let sig = &m.target.sig;
    let u = TermUniverse::new(sig, &sorts, depth);
    let terms = u.terms();
    let mut cong = Congruence::new(sig, &sorts);
    for t in &terms {
        cong.add_term(t);
    }
    for (l, r) in diagram_equations(m, mdl) {
        let (a, b) = (cong.add_term(&l), cong.add_term(&r));
        cong.union(a, b);
    }
    cong.rebuild();
    // classes met by universe terms, per sort, ordered by least member
    let mut per_sort: Vec<Vec<(ClassId, Vec<Term>)>> = vec![Vec::new(); sig.sorts.len()];
    for t in terms {
        let c = cong.lookup(&t).unwrap();
        let s = cong.sort_of_class(c);
        match per_sort[s.0].iter_mut().find(|(k, _)| *k == c) {
            Some((_, v)) => v.push(t),
            None => per_sort[s.0].push((c, vec![t])),
        }
    }
    (cong, per_sort)
}

/// Classes of target-term tuples over the model's constants, of height at
/// most `depth`, modulo the identifications generated by the diagram.
pub fn lan_ctx(m: &TheoryMorphism, mdl: &Structure, ctx: &[SortId], depth: usize) -> CtxLan {
    let (gens, _) = model_generators(m, mdl);
    let (cong, per_sort) = ctx_congruence(m, mdl, depth);
    let (_, next) = ctx_congruence(m, mdl, depth + 1);
    let stable = per_sort.iter().zip(&next).all(|(a, b)| a.len() == b.len());
    let reps = per_sort.iter().map(|v| v.iter().map(|(_, ts)| ts[0].clone()).collect()).collect();
    let members = per_sort.iter().map(|v| v.iter().map(|(_, ts)| ts.clone()).collect()).collect();
    let class_ids = per_sort.iter().map(|v| v.iter().map(|(c, _)| *c).collect()).collect();
    CtxLan { ctx: ctx.to_vec(), depth, generators: gens, reps, members, stable, cong, class_ids }
}

impl CtxLan {
    pub fn sort_size(&self, s: SortId) -> usize {
        self.reps[s.0].len()
    }

    fn sizes(&self) -> Vec<usize> {
        self.reps.iter().map(Vec::len).collect()
    }

    /// `|Lan(ctx)|`: tuples of classes.
    pub fn size(&self) -> usize {
        tuple_count(&self.sizes(), &self.ctx)
    }

    /// Class index of a ground term of sort `s`, if it meets the universe.
    pub fn class_of(&self, t: &Term) -> Option<usize> {
        let c = self.cong.lookup(t)?;
        let s = self.cong.sort_of_class(c);
        self.class_ids[s.0].iter().position(|&k| k == c)
    }

    /// The class tuples of `Lan(ctx)`, in mixed radix order.
    pub fn tuples(&self) -> Vec<Vec<usize>> {
        let sizes = self.sizes();
        (0..self.size()).map(|i| decode_tuple(&sizes, &self.ctx, i)).collect()
    }

    /// `μ`: the class tuple of `(c_{a1}, …, c_{an})` for a source tuple over `sorts`.
    pub fn unit(&self, sorts: &[SortId], tuple: &[usize]) -> Vec<usize> {
        sorts
            .iter()
            .zip(tuple)
            .map(|(&s, &a)| {
                let g = self.generators.iter().position(|&x| x == (s, a)).unwrap();
                self.class_of(&Term::Var(g)).expect("generators are in the universe")
            })
            .collect()
    }

    /// `θ̂` per target sort: each class evaluated in `k` with `c_a ↦ θ(a)`,
    /// checked constant on the class.
    pub fn mediator(&self, k: &Structure, theta: &StructureHom) -> Result<Vec<Vec<usize>>, KanError> {
        let env: Vec<usize> = self.generators.iter().map(|&(s, a)| theta.apply(s, a)).collect();
        let mut out = Vec::new();
        for (s, classes) in self.members.iter().enumerate() {
            let mut comp = Vec::new();
            for (c, ms) in classes.iter().enumerate() {
                let v = k.eval(&ms[0], &env);
                if let Some(bad) = ms.iter().find(|t| k.eval(t, &env) != v) {
                    return Err(KanError::IllDefined {
                        object: k.sig.sorts[s].clone(),
                        class: c,
                        detail: format!("{} ↦ {v} but {} ↦ {}", k.sig.show_term(&ms[0]), k.sig.show_term(bad), k.eval(bad, &env)),
                    });
                }
                comp.push(v);
            }
            out.push(comp);
        }
        Ok(out)
    }

    /// `⟨Lan(pr1), Lan(pr2)⟩` for `ctx = c1 ++ c2`: the tuple index split
    /// into its two parts; reports when it is not a bijection.
    pub fn check_product(&self, split: usize) -> ValidationReport {
        let mut r = ValidationReport::new();
        let sizes = self.sizes();
        let (c1, c2) = self.ctx.split_at(split);
        let (n1, n2) = (tuple_count(&sizes, c1), tuple_count(&sizes, c2));
        let mut hit = vec![false; n1 * n2];
        for t in self.tuples() {
            let v = encode_tuple(&sizes, c1, &t[..split]) * n2 + encode_tuple(&sizes, c2, &t[split..]);
            if core::mem::replace(&mut hit[v], true) {
                r.violation("lan.products", format!("two classes over the product meet at {v}"));
            }
        }
        if self.size() != n1 * n2 {
            r.violation("lan.products", format!("|Lan| = {} but {n1}·{n2}", self.size()));
        }
        r
    }
}

// ---- truncated context categories ----

/// Contexts of length at most 2 over a single-sorted signature and term
/// tuples of height at most `depth` between them, when that data is closed
/// under substitution; products are declared where lengths add up to at
/// most 2, the empty context is terminal.
pub fn truncated_ctx_category(sig: &crate::syntax::Signature, depth: usize) -> Option<(FinCategory, Vec<Context>)> {
    let s = SortId(0);
    let contexts: Vec<Context> = vec![vec![], vec![s], vec![s, s]];
    let names: Vec<String> = contexts.iter().map(|c| format!("x^{}", c.len())).collect();
    let mut arrows = Vec::new();
    for (i, dom) in contexts.iter().enumerate() {
        let terms: Vec<Term> = crate::semantics::terms_up_to(sig, dom, depth).into_iter().map(|(t, _)| t).collect();
        for (j, cod) in contexts.iter().enumerate() {
            let mut tuples: Vec<Vec<Term>> = vec![Vec::new()];
            for _ in cod {
                tuples = tuples
                    .iter()
                    .flat_map(|tu| terms.iter().map(move |t| {
                        let mut v = tu.clone();
                        v.push(t.clone());
                        v
                    }))
                    .collect();
            }
            for ts in tuples {
                let name = format!("{}:{}→{}", ts.iter().map(|t| sig.show_term(t)).collect::<Vec<_>>().join(","), i, j);
                arrows.push((name, i, j, CtxArrow { dom: dom.clone(), cod: cod.clone(), terms: ts }));
            }
        }
    }
    let c = FinCategory::from_concrete(
        &names,
        &arrows,
        |g, f| crate::syntax::ctx_compose(g, f).unwrap(),
        |_, k| *k == CtxArrow::identity(&k.dom),
    )
    .ok()?;
    let lookup = |k: &CtxArrow| arrows.iter().position(|a| a.3 == *k).map(Arrow);
    let mut c = c;
    for i in 0..3 {
        for j in 0..3 {
            if i + j > 2 {
                continue;
            }
            let p = crate::syntax::ctx_product(&contexts[i], &contexts[j]);
            c = fincat::with_product(&c, Obj(i), Obj(j), Obj(i + j), lookup(&p.pr1)?, lookup(&p.pr2)?);
        }
    }
    c = fincat::with_terminal(&c, Obj(0));
    Some((c, contexts))
}

/// The functor of the inclusion of a signature into a larger one between
/// truncated context categories (objects by position, arrows by key).
pub fn truncated_inclusion<'a>(
    source: &'a FinCategory,
    target: &'a FinCategory,
    translate: impl Fn(&str) -> Option<String>,
) -> Option<FinFunctor<'a>> {
    let objects: Vec<Obj> = source.objects().collect();
    let arrows = source
        .arrows()
        .map(|a| translate(source.arrow_name(a)).and_then(|n| target.arrow_by_name(&n)))
        .collect::<Option<Vec<_>>>()?;
    Some(FinFunctor { source, target, objects, arrows })
}

/// `A ↦ M^A` on a truncated context category, arrows acting by evaluation.
pub fn power_functor<'a>(c: &'a FinCategory, contexts: &[Context], arrows: &[CtxArrow], m: &Structure) -> SetFunctor<'a> {
    let sizes = contexts.iter().map(|ctx| tuple_count(&m.carriers, ctx)).collect();
    let maps = arrows
        .iter()
        .map(|a| {
            m.tuples(&a.dom)
                .map(|env| {
                    let vals: Vec<usize> = a.terms.iter().map(|t| m.eval(t, &env)).collect();
                    encode_tuple(&m.carriers, &a.cod, &vals)
                })
                .collect()
        })
        .collect();
    SetFunctor { category: c, sizes, maps }
}

// ---- fixtures ----

/// A named Kan extension problem with owned categories.
#[derive(Clone, Debug)]
pub struct KanFixture {
    pub name: String,
    pub source: FinCategory,
    pub target: FinCategory,
    pub f_objects: Vec<Obj>,
    pub f_arrows: Vec<Arrow>,
    pub h_sizes: Vec<usize>,
    pub h_maps: Vec<Vec<usize>>,
    /// Product pairs of the target checked for preservation.
    pub pairs: Vec<(Obj, Obj)>,
}

impl KanFixture {
    pub fn functor(&self) -> FinFunctor<'_> {
        FinFunctor { source: &self.source, target: &self.target, objects: self.f_objects.clone(), arrows: self.f_arrows.clone() }
    }

    pub fn h(&self) -> SetFunctor<'_> {
        SetFunctor { category: &self.source, sizes: self.h_sizes.clone(), maps: self.h_maps.clone() }
    }

    /// `Lan` at every target object.
    pub fn run(&self) -> LanResult {
        let at: Vec<Obj> = self.target.objects().collect();
        lan_finite(&self.functor(), &self.h(), &at)
    }
}

pub fn kan_fixture_names() -> [&'static str; 4] {
    ["identity", "coproduct", "arrow", "pointed"]
}

pub fn kan_fixture(name: &str) -> Option<KanFixture> {
    match name {
        "identity" => {
            let c = fincat::arrow_category();
            let u = c.arrow_by_name("u")?;
            let mut maps = vec![Vec::new(); c.num_arrows()];
            maps[c.identity(Obj(0)).0] = vec![0, 1];
            maps[c.identity(Obj(1)).0] = vec![0, 1, 2];
            maps[u.0] = vec![0, 2];
            Some(KanFixture {
                name: name.into(),
                f_objects: c.objects().collect(),
                f_arrows: c.arrows().collect(),
                source: c.clone(),
                target: c,
                h_sizes: vec![2, 3],
                h_maps: maps,
                pairs: vec![],
            })
        }
        "coproduct" => {
            let (s, t) = (fincat::discrete(2), fincat::terminal_category());
            Some(KanFixture {
                name: name.into(),
                f_objects: vec![Obj(0), Obj(0)],
                f_arrows: vec![Arrow(0), Arrow(0)],
                h_sizes: vec![2, 3],
                h_maps: vec![vec![0, 1], vec![0, 1, 2]],
                source: s,
                target: t,
                pairs: vec![],
            })
        }
        "arrow" => {
            let (s, t) = (fincat::terminal_category(), fincat::arrow_category());
            Some(KanFixture {
                name: name.into(),
                f_objects: vec![Obj(0)],
                f_arrows: vec![t.identity(Obj(0))],
                h_sizes: vec![2],
                h_maps: vec![vec![0, 1]],
                source: s,
                target: t,
                pairs: vec![],
            })
        }
        "pointed" => {
            let m = crate::corpus::pointed_extension();
            let mdl = crate::corpus::finite_set(2);
            let (s, contexts) = truncated_ctx_category(&m.source.sig, 1)?;
            let (t, _) = truncated_ctx_category(&m.target.sig, 1)?;
            let f = truncated_inclusion(&s, &t, |n| Some(n.to_string()))?;
            let (f_objects, f_arrows) = (f.objects.clone(), f.arrows.clone());
            let keys = ctx_arrows(&s, &contexts, &m.source.sig, 1);
            let h = power_functor(&s, &contexts, &keys, &mdl);
            let (h_sizes, h_maps) = (h.sizes.clone(), h.maps.clone());
            Some(KanFixture {
                name: name.into(),
                pairs: vec![(Obj(1), Obj(1)), (Obj(0), Obj(1))],
                source: s,
                target: t,
                f_objects,
                f_arrows,
                h_sizes,
                h_maps,
            })
        }
        _ => None,
    }
}

/// The term tuples behind the arrows of a truncated context category, in
/// arrow order.
pub fn ctx_arrows(c: &FinCategory, contexts: &[Context], sig: &crate::syntax::Signature, depth: usize) -> Vec<CtxArrow> {
    let mut out = Vec::new();
    for dom in contexts {
        let terms: Vec<Term> = crate::semantics::terms_up_to(sig, dom, depth).into_iter().map(|(t, _)| t).collect();
        for cod in contexts {
            let mut tuples: Vec<Vec<Term>> = vec![Vec::new()];
            for _ in cod {
                tuples = tuples
                    .iter()
                    .flat_map(|tu| terms.iter().map(move |t| {
                        let mut v = tu.clone();
                        v.push(t.clone());
                        v
                    }))
                    .collect();
            }
            out.extend(tuples.into_iter().map(|terms| CtxArrow { dom: dom.clone(), cod: cod.clone(), terms }));
        }
    }
    debug_assert_eq!(out.len(), c.num_arrows());
    out
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::corpus;
    use crate::fincat::validate_functor;

    #[test]
    fn along_the_identity() {
        let fx = kan_fixture("identity").unwrap();
        let lan = fx.run();
        assert_eq!(lan.size(Obj(0)), Some(2));
        assert_eq!(lan.size(Obj(1)), Some(3));
        // μ is a bijection at every object
        for mu in lan.unit.iter().flatten() {
            let mut v = mu.clone();
            v.sort();
            v.dedup();
            assert_eq!(v.len(), mu.len());
        }
        let mu1 = lan.unit[1].as_ref().unwrap();
        let u = fx.target.arrow_by_name("u").unwrap();
        // Lan(u) matches H(u) through μ
        for x in 0..2 {
            assert_eq!(lan.action[&u][lan.unit[0].as_ref().unwrap()[x]], mu1[fx.h().apply(u, x)]);
        }
    }

    #[test]
    fn discrete_to_terminal_is_a_coproduct() {
        let fx = kan_fixture("coproduct").unwrap();
        assert_eq!(fx.run().size(Obj(0)), Some(5));
    }

    #[test]
    fn terminal_into_arrow_category() {
        let fx = kan_fixture("arrow").unwrap();
        let lan = fx.run();
        assert_eq!(lan.size(Obj(0)), Some(2));
        assert_eq!(lan.size(Obj(1)), Some(2));
        let u = fx.target.arrow_by_name("u").unwrap();
        let mut t = lan.action[&u].clone();
        t.sort();
        assert_eq!(t, vec![0, 1]);
    }

    #[test]
    fn mediator_of_the_unit_is_the_identity() {
        let fx = kan_fixture("identity").unwrap();
        let lan = fx.run();
        let theta: Vec<Vec<usize>> = lan.unit.iter().map(|m| m.clone().unwrap()).collect();
        // K = Lan itself as a set functor
        let k = SetFunctor {
            category: &fx.target,
            sizes: lan.classes.iter().map(Vec::len).collect(),
            maps: fx.target.arrows().map(|g| lan.action[&g].clone()).collect(),
        };
        let m = mediator(&lan, &fx.functor(), &k, &theta).unwrap();
        for comp in &m.components {
            assert!(comp.iter().enumerate().all(|(i, &v)| i == v));
        }
        assert_eq!(count_mediators(&lan, &fx.functor(), &k, &theta), 1);
    }

    #[test]
    fn non_natural_theta_is_rejected() {
        let fx = kan_fixture("identity").unwrap();
        let lan = fx.run();
        let h = fx.h();
        // θ_0 = id, θ_1 swaps 0 and 2: not natural at u
        let theta = vec![vec![0, 1], vec![2, 1, 0]];
        let err = mediator(&lan, &fx.functor(), &h, &theta).unwrap_err();
        assert!(matches!(err, KanError::IllDefined { .. }));
    }

    #[test]
    fn pointed_truncation_agrees_with_contexts() {
        let fx = kan_fixture("pointed").unwrap();
        assert!(validate_functor(&fx.functor(), true).is_empty());
        assert!(fx.h().validate().is_empty());
        let lan = fx.run();
        assert_eq!(lan.size(Obj(0)), Some(1));
        assert_eq!(lan.size(Obj(1)), Some(3));
        assert_eq!(lan.size(Obj(2)), Some(9));
        assert!(check_product_preservation(&lan, &fx.target, &fx.pairs).is_empty());
        let m = corpus::pointed_extension();
        let mdl = corpus::finite_set(2);
        let s = SortId(0);
        for (k, ctx) in [vec![], vec![s], vec![s, s]].into_iter().enumerate() {
            let cl = lan_ctx(&m, &mdl, &ctx, 2);
            assert!(cl.stable);
            assert_eq!(Some(cl.size()), lan.size(Obj(k)));
        }
    }

    #[test]
    fn pointed_contexts() {
        let m = corpus::pointed_extension();
        let mdl = corpus::finite_set(2);
        let s = SortId(0);
        let one = lan_ctx(&m, &mdl, &[s], 1);
        assert_eq!(one.size(), 3);
        let two = lan_ctx(&m, &mdl, &[s, s], 1);
        assert_eq!(two.size(), 9);
        assert!(two.check_product(1).is_empty());
        assert_eq!(lan_ctx(&m, &mdl, &[], 1).size(), 1);
        // θ̂ into the free pointed set {∗, b0, b1} is a bijection
        let k = Structure::from_fn("k", &m.target.sig, vec![3], |_, _| 0, |_, _| false);
        let theta = StructureHom { maps: vec![crate::doctrine::FinFn::new(2, 3, vec![1, 2])] };
        let med = one.mediator(&k, &theta).unwrap();
        let mut v = med[0].clone();
        v.sort();
        assert_eq!(v, vec![0, 1, 2]);
    }

    #[test]
    fn monoid_identity_collapses_to_the_model() {
        let t = corpus::monoid();
        let m = TheoryMorphism::identity(&t);
        let z2 = corpus::reduct_to(&corpus::cyclic_group(2), &t.sig);
        let cl = lan_ctx(&m, &z2, &[SortId(0)], 2);
        assert_eq!(cl.size(), 2);
        assert!(cl.stable);
    }
}
