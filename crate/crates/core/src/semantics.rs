//! Finite structures for a signature, interpretation of terms and Horn
//! formulas, model and homomorphism enumeration, and the correspondence
//! between models and doctrine homomorphisms into subsets of finite sets.
//!
//! Tuples over a list of sorts are indexed in mixed radix with the first
//! coordinate most significant, which is also how [`SubFinSet`] lays out
//! products.

use alloc::collections::BTreeSet;
use alloc::format;
use alloc::string::{String, ToString};
use alloc::vec;
use alloc::vec::Vec;

use crate::bitset::BitSet;
use crate::doctrine::{Doctrine, DoctrineHom, FinFn, SubFinSet, TwoCell};
use crate::prover::{fiber_leq, Budget};
use crate::report::ValidationReport;
use crate::syntax::{ctx_compose, ctx_pair, ctx_product, Atom, Context, CtxArrow, HornFormula, OpId, RelId, Sequent, Signature, SortId, Term, Theory};

/// A subset of a product of carriers.
pub type FinSubobject = BitSet;

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Structure {
    pub name: String,
    pub sig: Signature,
    /// Size of each sort's carrier `{0, …, k-1}`.
    pub carriers: Vec<usize>,
    /// Per operation, its values indexed by argument tuple.
    pub ops: Vec<Vec<usize>>,
    /// Per relation, the tuples it holds on.
    pub rels: Vec<BTreeSet<Vec<usize>>>,
}

/// Number of tuples over `sorts` with the given carrier sizes.
pub fn tuple_count(carriers: &[usize], sorts: &[SortId]) -> usize {
    sorts.iter().map(|s| carriers[s.0]).product()
}

pub fn encode_tuple(carriers: &[usize], sorts: &[SortId], tuple: &[usize]) -> usize {
    sorts.iter().zip(tuple).fold(0, |acc, (s, &a)| acc * carriers[s.0] + a)
}

pub fn decode_tuple(carriers: &[usize], sorts: &[SortId], mut index: usize) -> Vec<usize> {
    let mut out = vec![0; sorts.len()];
    for (k, s) in sorts.iter().enumerate().rev() {
        let n = carriers[s.0];
        out[k] = index % n;
        index /= n;
    }
    out
}

impl Structure {
    /// A structure whose operations are given by `op` and relations by `rel`.
    pub fn from_fn(
        name: &str,
        sig: &Signature,
        carriers: Vec<usize>,
        op: impl Fn(OpId, &[usize]) -> usize,
        rel: impl Fn(RelId, &[usize]) -> bool,
    ) -> Self {
        let ops = sig
            .op_ids()
            .map(|f| {
                let args = &sig.op_decl(f).args;
                (0..tuple_count(&carriers, args)).map(|i| op(f, &decode_tuple(&carriers, args, i))).collect()
            })
            .collect();
        let rels = sig
            .rel_ids()
            .map(|r| {
                let args = &sig.rel_decl(r).args;
                (0..tuple_count(&carriers, args)).map(|i| decode_tuple(&carriers, args, i)).filter(|t| rel(r, t)).collect()
            })
            .collect();
        Self { name: name.to_string(), sig: sig.clone(), carriers, ops, rels }
    }

    pub fn op(&self, f: OpId, args: &[usize]) -> usize {
        let sorts = &self.sig.op_decl(f).args;
        self.ops[f.0][encode_tuple(&self.carriers, sorts, args)]
    }

    pub fn holds_rel(&self, r: RelId, args: &[usize]) -> bool {
        self.rels[r.0].contains(args)
    }

    pub fn carrier(&self, s: SortId) -> usize {
        self.carriers[s.0]
    }

    /// Table shapes, value ranges and relation tuples.
    pub fn validate(&self) -> ValidationReport {
        let mut r = ValidationReport::new();
        if self.carriers.len() != self.sig.sorts.len() || self.ops.len() != self.sig.ops.len() || self.rels.len() != self.sig.rels.len() {
            r.violation("structure.shape", "tables do not match the signature");
            return r;
        }
        for f in self.sig.op_ids() {
            let d = self.sig.op_decl(f);
            let n = tuple_count(&self.carriers, &d.args);
            if self.ops[f.0].len() != n {
                r.violation("structure.op", format!("`{}` has {} entries, expected {n}", d.name, self.ops[f.0].len()));
            } else if let Some(v) = self.ops[f.0].iter().find(|&&v| v >= self.carriers[d.result.0]) {
                r.violation("structure.op", format!("`{}` takes value {v} outside its carrier", d.name));
            }
        }
        for rid in self.sig.rel_ids() {
            let d = self.sig.rel_decl(rid);
            for t in &self.rels[rid.0] {
                let ok = t.len() == d.args.len() && t.iter().zip(&d.args).all(|(&a, s)| a < self.carriers[s.0]);
                if !ok {
                    r.violation("structure.rel", format!("`{}` holds on out-of-range tuple {t:?}", d.name));
                }
            }
        }
        r
    }

    /// Value of `t` under the assignment `env` to its variables.
    pub fn eval(&self, t: &Term, env: &[usize]) -> usize {
        match t {
            Term::Var(i) => env[*i],
            Term::App(f, args) => {
                let vals: Vec<usize> = args.iter().map(|a| self.eval(a, env)).collect();
                self.op(*f, &vals)
            }
        }
    }

    pub fn holds_atom(&self, a: &Atom, env: &[usize]) -> bool {
        match a {
            Atom::Eq(l, r) => self.eval(l, env) == self.eval(r, env),
            Atom::Rel(r, ts) => {
                let vals: Vec<usize> = ts.iter().map(|t| self.eval(t, env)).collect();
                self.holds_rel(*r, &vals)
            }
        }
    }

    pub fn holds(&self, phi: &HornFormula, env: &[usize]) -> bool {
        phi.atoms().iter().all(|a| self.holds_atom(a, env))
    }

    pub fn tuples(&self, ctx: &[SortId]) -> impl Iterator<Item = Vec<usize>> + '_ {
        let ctx = ctx.to_vec();
        (0..tuple_count(&self.carriers, &ctx)).map(move |i| decode_tuple(&self.carriers, &ctx, i))
    }
}

/// The table of `t` over all tuples of the context.
pub fn interpret_term(m: &Structure, ctx: &[SortId], t: &Term) -> Vec<usize> {
    m.tuples(ctx).map(|env| m.eval(t, &env)).collect()
}

/// `φ^M ⊆ M^ctx`.
pub fn interpret_formula(m: &Structure, ctx: &[SortId], phi: &HornFormula) -> FinSubobject {
    let n = tuple_count(&m.carriers, ctx);
    BitSet::from_indices(n, m.tuples(ctx).enumerate().filter(|(_, env)| m.holds(phi, env)).map(|(i, _)| i))
}

/// A tuple where the premise holds and the conclusion fails, if any.
pub fn counterexample(m: &Structure, s: &Sequent) -> Option<Vec<usize>> {
    m.tuples(&s.ctx).find(|env| m.holds(&s.premise, env) && !m.holds(&s.conclusion, env))
}

pub fn satisfies(m: &Structure, s: &Sequent) -> bool {
    counterexample(m, s).is_none()
}

fn show_env(m: &Structure, env: &[usize]) -> String {
    let parts: Vec<String> = env.iter().enumerate().map(|(i, a)| format!("x{}={a}", i + 1)).collect();
    let _ = m;
    parts.join(", ")
}

pub fn check_model(m: &Structure, t: &Theory) -> ValidationReport {
    let mut r = m.validate();
    if m.sig != t.sig {
        r.violation("model.signature", format!("`{}` is not a structure for the signature of `{}`", m.name, t.name));
    }
    if r.has_violations() {
        return r;
    }
    for s in &t.axioms {
        if let Some(env) = counterexample(m, s) {
            r.violation(format!("axiom.{}", s.name), format!("{} fails at {}", t.show_sequent(s), show_env(m, &env)));
        }
    }
    r
}

/// A homomorphism of structures: one map per sort.
#[derive(Clone, Debug, PartialEq, Eq, PartialOrd, Ord)]
pub struct StructureHom {
    pub maps: Vec<FinFn>,
}

impl StructureHom {
    pub fn identity(m: &Structure) -> Self {
        Self { maps: m.carriers.iter().map(|&k| FinFn::identity(k)).collect() }
    }

    /// `self ∘ g`.
    pub fn after(&self, g: &StructureHom) -> StructureHom {
        Self { maps: self.maps.iter().zip(&g.maps).map(|(a, b)| a.after(b)).collect() }
    }

    pub fn apply(&self, s: SortId, a: usize) -> usize {
        self.maps[s.0].apply(a)
    }

    fn apply_tuple(&self, sorts: &[SortId], t: &[usize]) -> Vec<usize> {
        sorts.iter().zip(t).map(|(s, &a)| self.apply(*s, a)).collect()
    }
}

pub fn validate_structure_hom(src: &Structure, tgt: &Structure, h: &StructureHom) -> ValidationReport {
    let mut r = ValidationReport::new();
    let sig = &src.sig;
    if h.maps.len() != src.carriers.len()
        || h.maps.iter().enumerate().any(|(s, f)| f.dom != src.carriers[s] || f.cod != tgt.carriers[s])
    {
        r.violation("hom.typing", "carrier maps have the wrong shape");
        return r;
    }
    for f in sig.op_ids() {
        let d = sig.op_decl(f);
        for args in src.tuples(&d.args) {
            let lhs = h.apply(d.result, src.op(f, &args));
            let rhs = tgt.op(f, &h.apply_tuple(&d.args, &args));
            if lhs != rhs {
                r.violation("hom.op", format!("`{}` at {args:?}: h(f(a)) = {lhs} but f(h(a)) = {rhs}", d.name));
                break;
            }
        }
    }
    for rid in sig.rel_ids() {
        let d = sig.rel_decl(rid);
        for t in &src.rels[rid.0] {
            if !tgt.holds_rel(rid, &h.apply_tuple(&d.args, t)) {
                r.violation("hom.rel", format!("`{}` holds at {t:?} but not at its image", d.name));
                break;
            }
        }
    }
    r
}

/// All homomorphisms `m1 → m2`, in lexicographic order of their tables.
pub fn enumerate_homs(m1: &Structure, m2: &Structure) -> Vec<StructureHom> {
    // positions: every (sort, element) of m1, sort-major
    let slots: Vec<(usize, usize)> = m1.carriers.iter().enumerate().flat_map(|(s, &k)| (0..k).map(move |a| (s, a))).collect();
    let mut partial: Vec<Vec<Option<usize>>> = m1.carriers.iter().map(|&k| vec![None; k]).collect();
    let mut out = Vec::new();
    hom_search(m1, m2, &slots, 0, &mut partial, &mut out);
    out
}

fn hom_search(
    m1: &Structure,
    m2: &Structure,
    slots: &[(usize, usize)],
    k: usize,
    partial: &mut Vec<Vec<Option<usize>>>,
    out: &mut Vec<StructureHom>,
) {
    if k == slots.len() {
        let maps = partial
            .iter()
            .enumerate()
            .map(|(s, v)| FinFn::new(v.len(), m2.carriers[s], v.iter().map(|x| x.unwrap()).collect()))
            .collect();
        out.push(StructureHom { maps });
        return;
    }
    let (s, a) = slots[k];
    for b in 0..m2.carriers[s] {
        partial[s][a] = Some(b);
        if partial_hom_ok(m1, m2, partial) {
            hom_search(m1, m2, slots, k + 1, partial, out);
        }
    }
    partial[s][a] = None;
}

fn partial_hom_ok(m1: &Structure, m2: &Structure, p: &[Vec<Option<usize>>]) -> bool {
    let sig = &m1.sig;
    let img = |sorts: &[SortId], t: &[usize]| -> Option<Vec<usize>> { sorts.iter().zip(t).map(|(s, &a)| p[s.0][a]).collect() };
    for f in sig.op_ids() {
        let d = sig.op_decl(f);
        for args in m1.tuples(&d.args) {
            if let (Some(v), Some(hargs)) = (p[d.result.0][m1.op(f, &args)], img(&d.args, &args)) {
                if m2.op(f, &hargs) != v {
                    return false;
                }
            }
        }
    }
    for r in sig.rel_ids() {
        let d = sig.rel_decl(r);
        for t in &m1.rels[r.0] {
            if let Some(ht) = img(&d.args, t) {
                if !m2.holds_rel(r, &ht) {
                    return false;
                }
            }
        }
    }
    true
}

/// Every model of `t` whose carriers all have size at most `n`, ordered by
/// the tuple of carrier sizes, then by tables.
pub fn enumerate_models(t: &Theory, n: usize) -> Vec<Structure> {
    let k = t.sig.sorts.len();
    let mut out = Vec::new();
    let mut sizes = vec![0; k];
    loop {
        out.extend(enumerate_models_sized(t, &sizes));
        let mut i = k;
        loop {
            if i == 0 {
                return out;
            }
            i -= 1;
            sizes[i] += 1;
            if sizes[i] <= n {
                break;
            }
            sizes[i] = 0;
        }
    }
}

struct Partial {
    ops: Vec<Vec<Option<usize>>>,
    rels: Vec<Vec<Option<bool>>>,
}

/// Models of `t` with exactly the given carrier sizes.
pub fn enumerate_models_sized(t: &Theory, sizes: &[usize]) -> Vec<Structure> {
    let sig = &t.sig;
    let mut slots = Vec::new();
    let mut p = Partial { ops: Vec::new(), rels: Vec::new() };
    for f in sig.op_ids() {
        let n = tuple_count(sizes, &sig.op_decl(f).args);
        p.ops.push(vec![None; n]);
        slots.extend((0..n).map(|i| Slot::Op(f, i)));
    }
    for r in sig.rel_ids() {
        let n = tuple_count(sizes, &sig.rel_decl(r).args);
        p.rels.push(vec![None; n]);
        slots.extend((0..n).map(|i| Slot::Rel(r, i)));
    }
    let mut out = Vec::new();
    if violates(t, sizes, &p) {
        return out;
    }
    model_search(t, sizes, &slots, 0, &mut p, &mut out);
    out
}

#[derive(Clone, Copy)]
enum Slot {
    Op(OpId, usize),
    Rel(RelId, usize),
}

fn model_search(t: &Theory, sizes: &[usize], slots: &[Slot], k: usize, p: &mut Partial, out: &mut Vec<Structure>) {
    if k == slots.len() {
        let sig = &t.sig;
        let ops = p.ops.iter().map(|v| v.iter().map(|x| x.unwrap()).collect()).collect();
        let rels = sig
            .rel_ids()
            .map(|r| {
                let args = &sig.rel_decl(r).args;
                p.rels[r.0].iter().enumerate().filter(|(_, b)| b.unwrap()).map(|(i, _)| decode_tuple(sizes, args, i)).collect()
            })
            .collect();
        let name = format!("{}#{}", t.name, out.len());
        out.push(Structure { name, sig: sig.clone(), carriers: sizes.to_vec(), ops, rels });
        return;
    }
    match slots[k] {
        Slot::Op(f, i) => {
            for v in 0..sizes[t.sig.op_decl(f).result.0] {
                p.ops[f.0][i] = Some(v);
                if !violates(t, sizes, p) {
                    model_search(t, sizes, slots, k + 1, p, out);
                }
            }
            p.ops[f.0][i] = None;
        }
        Slot::Rel(r, i) => {
            for v in [false, true] {
                p.rels[r.0][i] = Some(v);
                if !violates(t, sizes, p) {
                    model_search(t, sizes, slots, k + 1, p, out);
                }
            }
            p.rels[r.0][i] = None;
        }
    }
}

fn eval3(sig: &Signature, sizes: &[usize], p: &Partial, t: &Term, env: &[usize]) -> Option<usize> {
    match t {
        Term::Var(i) => Some(env[*i]),
        Term::App(f, args) => {
            let vals = args.iter().map(|a| eval3(sig, sizes, p, a, env)).collect::<Option<Vec<_>>>()?;
            p.ops[f.0][encode_tuple(sizes, &sig.op_decl(*f).args, &vals)]
        }
    }
}

fn atom3(sig: &Signature, sizes: &[usize], p: &Partial, a: &Atom, env: &[usize]) -> Option<bool> {
    match a {
        Atom::Eq(l, r) => Some(eval3(sig, sizes, p, l, env)? == eval3(sig, sizes, p, r, env)?),
        Atom::Rel(r, ts) => {
            let vals = ts.iter().map(|t| eval3(sig, sizes, p, t, env)).collect::<Option<Vec<_>>>()?;
            p.rels[r.0][encode_tuple(sizes, &sig.rel_decl(*r).args, &vals)]
        }
    }
}

/// Three-valued conjunction: `Some(false)` as soon as one atom is false.
fn formula3(sig: &Signature, sizes: &[usize], p: &Partial, phi: &HornFormula, env: &[usize]) -> Option<bool> {
    let mut all = Some(true);
    for a in phi.atoms() {
        match atom3(sig, sizes, p, a, env) {
            Some(false) => return Some(false),
            None => all = None,
            Some(true) => {}
        }
    }
    all
}

/// Whether some axiom is already definitely violated.
fn violates(t: &Theory, sizes: &[usize], p: &Partial) -> bool {
    for s in &t.axioms {
        let n = tuple_count(sizes, &s.ctx);
        for i in 0..n {
            let env = decode_tuple(sizes, &s.ctx, i);
            if formula3(&t.sig, sizes, p, &s.conclusion, &env) == Some(false)
                && formula3(&t.sig, sizes, p, &s.premise, &env) == Some(true)
            {
                return true;
            }
        }
    }
    false
}

/// The Horn doctrine of a theory, presented on finite samples: contexts,
/// term tuples between them, and formulas per context. The order is the
/// bounded prover's (`Unknown` reads as "not below").
#[derive(Clone, Debug)]
pub struct HornDoctrine {
    pub theory: Theory,
    pub budget: Budget,
    pub contexts: Vec<Context>,
    pub arrows: Vec<CtxArrow>,
    pub formulas: Vec<Vec<HornFormula>>,
}

/// Well-sorted terms over `ctx` of height at most `depth`, per sort.
pub fn terms_up_to(sig: &Signature, ctx: &[SortId], depth: usize) -> Vec<(Term, SortId)> {
    let mut all: Vec<(Term, SortId)> = ctx.iter().enumerate().map(|(i, &s)| (Term::Var(i), s)).collect();
    let mut seen: BTreeSet<Term> = all.iter().map(|(t, _)| t.clone()).collect();
    for _ in 0..depth {
        let mut fresh = Vec::new();
        for f in sig.op_ids() {
            let d = sig.op_decl(f);
            let mut tuples: Vec<Vec<Term>> = vec![Vec::new()];
            for s in &d.args {
                let pool: Vec<&Term> = all.iter().filter(|(_, ts)| ts == s).map(|(t, _)| t).collect();
                tuples = tuples
                    .iter()
                    .flat_map(|tu| pool.iter().map(move |&t| {
                        let mut v = tu.clone();
                        v.push(t.clone());
                        v
                    }))
                    .collect();
            }
            for args in tuples {
                let t = Term::App(f, args);
                if seen.insert(t.clone()) {
                    fresh.push((t, d.result));
                }
            }
        }
        all.extend(fresh);
    }
    all.sort_by(|a, b| sig.cmp_terms(&a.0, &b.0));
    all
}

impl HornDoctrine {
    /// Contexts of length at most 2, arrows made of terms of height at most
    /// `arrow_depth`, formulas: `⊤` and every atom over terms of height at
    /// most `formula_depth`.
    pub fn new(theory: &Theory, budget: Budget, arrow_depth: usize, formula_depth: usize) -> Self {
        let sig = &theory.sig;
        let mut contexts: Vec<Context> = vec![Vec::new()];
        for s in sig.sort_ids() {
            contexts.push(vec![s]);
        }
        for s in sig.sort_ids() {
            for s2 in sig.sort_ids() {
                contexts.push(vec![s, s2]);
            }
        }
        Self::with_contexts(theory, budget, contexts, arrow_depth, formula_depth)
    }

    pub fn with_contexts(theory: &Theory, budget: Budget, contexts: Vec<Context>, arrow_depth: usize, formula_depth: usize) -> Self {
        let sig = &theory.sig;
        let mut arrows = Vec::new();
        for dom in &contexts {
            let terms = terms_up_to(sig, dom, arrow_depth);
            for cod in &contexts {
                let mut tuples: Vec<Vec<Term>> = vec![Vec::new()];
                for s in cod {
                    let pool: Vec<&Term> = terms.iter().filter(|(_, ts)| ts == s).map(|(t, _)| t).collect();
                    tuples = tuples
                        .iter()
                        .flat_map(|tu| pool.iter().map(move |&t| {
                            let mut v = tu.clone();
                            v.push(t.clone());
                            v
                        }))
                        .collect();
                }
                arrows.extend(tuples.into_iter().map(|terms| CtxArrow { dom: dom.clone(), cod: cod.clone(), terms }));
            }
        }
        let formulas = contexts.iter().map(|c| atoms_up_to(sig, c, formula_depth)).collect();
        Self { theory: theory.clone(), budget, contexts, arrows, formulas }
    }

    fn index_of(&self, ctx: &Context) -> Option<usize> {
        self.contexts.iter().position(|c| c == ctx)
    }
}

/// `⊤` and every atom over terms of height at most `depth`.
pub fn atoms_up_to(sig: &Signature, ctx: &[SortId], depth: usize) -> Vec<HornFormula> {
    let terms = terms_up_to(sig, ctx, depth);
    let mut out = vec![HornFormula::top()];
    for (i, (l, s)) in terms.iter().enumerate() {
        for (r, s2) in &terms[i + 1..] {
            if s == s2 {
                out.push(HornFormula::eq(l.clone(), r.clone()));
            }
        }
    }
    for r in sig.rel_ids() {
        let mut tuples: Vec<Vec<Term>> = vec![Vec::new()];
        for s in &sig.rel_decl(r).args {
            let pool: Vec<&Term> = terms.iter().filter(|(_, ts)| ts == s).map(|(t, _)| t).collect();
            tuples = tuples
                .iter()
                .flat_map(|tu| pool.iter().map(move |&t| {
                    let mut v = tu.clone();
                    v.push(t.clone());
                    v
                }))
                .collect();
        }
        out.extend(tuples.into_iter().map(|ts| HornFormula::atom(Atom::Rel(r, ts))));
    }
    out
}

impl Doctrine for HornDoctrine {
    type Obj = Context;
    type Arrow = CtxArrow;
    type Elem = HornFormula;

    fn dom(&self, f: &CtxArrow) -> Context {
        f.dom.clone()
    }
    fn cod(&self, f: &CtxArrow) -> Context {
        f.cod.clone()
    }
    fn id(&self, a: &Context) -> CtxArrow {
        CtxArrow::identity(a)
    }
    fn compose(&self, g: &CtxArrow, f: &CtxArrow) -> CtxArrow {
        ctx_compose(g, f).expect("composable arrows")
    }
    /// Only variable permutations are recognized.
    fn is_iso(&self, f: &CtxArrow) -> bool {
        let mut seen = vec![false; f.dom.len()];
        f.dom.len() == f.cod.len()
            && f.terms.iter().all(|t| matches!(t, Term::Var(i) if !core::mem::replace(&mut seen[*i], true)))
    }
    fn product(&self, a: &Context, b: &Context) -> Context {
        ctx_product(a, b).object
    }
    fn pr1(&self, a: &Context, b: &Context) -> CtxArrow {
        ctx_product(a, b).pr1
    }
    fn pr2(&self, a: &Context, b: &Context) -> CtxArrow {
        ctx_product(a, b).pr2
    }
    fn pair(&self, f: &CtxArrow, g: &CtxArrow) -> CtxArrow {
        ctx_pair(f, g).expect("arrows with a common domain")
    }
    fn terminal(&self) -> Context {
        Vec::new()
    }
    fn bang(&self, a: &Context) -> CtxArrow {
        CtxArrow { dom: a.clone(), cod: Vec::new(), terms: Vec::new() }
    }

    fn fiber(&self, a: &Context) -> Vec<HornFormula> {
        match self.index_of(a) {
            Some(i) => self.formulas[i].clone(),
            None => atoms_up_to(&self.theory.sig, a, 0),
        }
    }
    fn top(&self, _a: &Context) -> HornFormula {
        HornFormula::top()
    }
    fn meet(&self, _a: &Context, x: &HornFormula, y: &HornFormula) -> HornFormula {
        x.and(y)
    }
    fn leq(&self, a: &Context, x: &HornFormula, y: &HornFormula) -> bool {
        fiber_leq(&self.theory, a, x, y, &self.budget).is_proved()
    }
    fn reindex(&self, f: &CtxArrow, x: &HornFormula) -> HornFormula {
        crate::syntax::reindex_formula(x, &f.terms)
    }
    /// `x1 = x(n+1) & … & xn = x(2n)` over the doubled context.
    fn equality(&self, a: &Context) -> HornFormula {
        let n = a.len();
        HornFormula::from_atoms((0..n).map(|i| Atom::Eq(Term::Var(i), Term::Var(n + i))))
    }

    fn sample_objects(&self) -> Vec<Context> {
        self.contexts.clone()
    }
    fn sample_arrows(&self) -> Vec<CtxArrow> {
        self.arrows.clone()
    }
}

/// The subsets doctrine used as the target of model homomorphisms.
pub fn sub_target() -> SubFinSet {
    SubFinSet { max_size: 1, params: 1 }
}

/// `(H^M, 𝔥^M)`: contexts go to carrier products, term tuples to their
/// interpretation, formulas to their extension.
#[derive(Clone, Debug)]
pub struct ModelHom {
    pub model: Structure,
}

impl DoctrineHom<HornDoctrine, SubFinSet> for ModelHom {
    fn map_obj(&self, a: &Context) -> usize {
        tuple_count(&self.model.carriers, a)
    }
    fn map_arrow(&self, f: &CtxArrow) -> FinFn {
        let m = &self.model;
        let cod = tuple_count(&m.carriers, &f.cod);
        let map = m
            .tuples(&f.dom)
            .map(|env| {
                let vals: Vec<usize> = f.terms.iter().map(|t| m.eval(t, &env)).collect();
                encode_tuple(&m.carriers, &f.cod, &vals)
            })
            .collect();
        FinFn::new(tuple_count(&m.carriers, &f.dom), cod, map)
    }
    fn map_elem(&self, a: &Context, x: &HornFormula) -> BitSet {
        interpret_formula(&self.model, a, x)
    }
}

/// The homomorphism of a model; fails with the model's report if it is not
/// a model of `t`.
pub fn model_to_hom(m: &Structure, t: &Theory) -> Result<ModelHom, ValidationReport> {
    let r = check_model(m, t);
    if r.is_empty() {
        Ok(ModelHom { model: m.clone() })
    } else {
        Err(r)
    }
}

/// Reads a structure back from a homomorphism into subsets: carriers are
/// the images of one-variable contexts, `f^H` the image of `f(x⃗)`, `R^H`
/// the image of `R(x⃗)`. Fails with the model report if the result is not a
/// model of `t`.
pub fn hom_to_model(h: &impl DoctrineHom<HornDoctrine, SubFinSet>, t: &Theory, name: &str) -> Result<Structure, ValidationReport> {
    let sig = &t.sig;
    let carriers: Vec<usize> = sig.sort_ids().map(|s| h.map_obj(&vec![s])).collect();
    let ops = sig
        .op_ids()
        .map(|f| {
            let d = sig.op_decl(f);
            let arrow = CtxArrow {
                dom: d.args.clone(),
                cod: vec![d.result],
                terms: vec![Term::App(f, (0..d.args.len()).map(Term::Var).collect())],
            };
            h.map_arrow(&arrow).map
        })
        .collect();
    let rels = sig
        .rel_ids()
        .map(|r| {
            let d = sig.rel_decl(r);
            let ext = h.map_elem(&d.args, &HornFormula::atom(Atom::Rel(r, (0..d.args.len()).map(Term::Var).collect())));
            ext.iter().map(|i| decode_tuple(&carriers, &d.args, i)).collect()
        })
        .collect();
    let m = Structure { name: name.to_string(), sig: sig.clone(), carriers, ops, rels };
    let r = check_model(&m, t);
    if r.is_empty() {
        Ok(m)
    } else {
        Err(r)
    }
}

/// The 2-cell `θ^g` of a structure homomorphism: `g × ⋯ × g` on every context.
#[derive(Clone, Debug)]
pub struct StructureCell {
    pub hom: StructureHom,
    pub source_carriers: Vec<usize>,
    pub target_carriers: Vec<usize>,
}

impl TwoCell<HornDoctrine, SubFinSet> for StructureCell {
    fn component(&self, a: &Context) -> FinFn {
        let dom = tuple_count(&self.source_carriers, a);
        let cod = tuple_count(&self.target_carriers, a);
        let map = (0..dom)
            .map(|i| {
                let t = decode_tuple(&self.source_carriers, a, i);
                encode_tuple(&self.target_carriers, a, &self.hom.apply_tuple(a, &t))
            })
            .collect();
        FinFn::new(dom, cod, map)
    }
}

pub fn hom_corresponds(g: &StructureHom, src: &Structure, tgt: &Structure) -> StructureCell {
    StructureCell { hom: g.clone(), source_carriers: src.carriers.clone(), target_carriers: tgt.carriers.clone() }
}

/// Reads the sort components `θ_{(x)}` of a 2-cell.
pub fn cell_corresponds(theta: &impl TwoCell<HornDoctrine, SubFinSet>, sig: &Signature) -> StructureHom {
    StructureHom { maps: sig.sort_ids().map(|s| theta.component(&vec![s])).collect() }
}

/// Every product-form family `(θ_{(x)})` that passes the 2-cell validator
/// between the homomorphisms of `src` and `tgt` on the sample `d`.
pub fn enumerate_cells(d: &HornDoctrine, src: &Structure, tgt: &Structure) -> Vec<StructureCell> {
    let (f, g) = (ModelHom { model: src.clone() }, ModelHom { model: tgt.clone() });
    let r = sub_target();
    let mut families: Vec<Vec<FinFn>> = vec![Vec::new()];
    for (s, &k) in src.carriers.iter().enumerate() {
        let options = FinFn::all(k, tgt.carriers[s]);
        families = families
            .iter()
            .flat_map(|fam| options.iter().map(move |o| {
                let mut v = fam.clone();
                v.push(o.clone());
                v
            }))
            .collect();
    }
    families
        .into_iter()
        .map(|maps| hom_corresponds(&StructureHom { maps }, src, tgt))
        .filter(|cell| crate::doctrine::validate_2cell(d, &r, &f, &g, cell).is_empty())
        .collect()
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::corpus;
    use crate::doctrine::{validate_2cell, validate_hom};

    fn x(i: usize) -> Term {
        Term::Var(i)
    }

    #[test]
    fn term_tables() {
        let z2 = corpus::cyclic_group(2);
        let s = SortId(0);
        assert_eq!(interpret_term(&z2, &[s], &x(0)), vec![0, 1]);
        let m = z2.sig.op("*").unwrap();
        let xx = Term::app(m, vec![x(0), x(0)]);
        assert_eq!(interpret_term(&z2, &[s], &xx), vec![0, 0]);
        let e = z2.sig.op("e").unwrap();
        assert_eq!(interpret_term(&z2, &[], &Term::constant(e)), vec![0]);
    }

    #[test]
    fn formula_extensions() {
        let set3 = corpus::finite_set(3);
        let s = SortId(0);
        assert_eq!(interpret_formula(&set3, &[s], &HornFormula::top()).count(), 3);
        let diag = interpret_formula(&set3, &[s, s], &HornFormula::eq(x(0), x(1)));
        assert_eq!(diag, BitSet::from_indices(9, [0, 4, 8]));
        let z2 = corpus::cyclic_group(2);
        let (m, e) = (z2.sig.op("*").unwrap(), z2.sig.op("e").unwrap());
        let phi = HornFormula::eq(Term::app(m, vec![x(0), x(0)]), Term::constant(e));
        assert_eq!(interpret_formula(&z2, &[s], &phi).count(), 2);
    }

    #[test]
    fn commutativity_checks() {
        let comm = corpus::comm_monoid();
        let z3 = corpus::cyclic_group(3);
        let z3m = corpus::reduct_to(&z3, &comm.sig);
        assert!(check_model(&z3m, &comm).is_empty());
        let s3 = corpus::symmetric_group_3();
        let mut g = corpus::group();
        let m = g.sig.op("*").unwrap();
        g.axiom("comm", vec![SortId(0); 2], HornFormula::top(), HornFormula::eq(Term::app(m, vec![x(0), x(1)]), Term::app(m, vec![x(1), x(0)])))
            .unwrap();
        let r = check_model(&s3, &g);
        assert!(r.mentions("axiom.comm"), "{r}");
        let env = counterexample(&s3, g.axioms.last().unwrap()).unwrap();
        // both witnesses are transpositions (elements 1, 2, 3 of the fixture)
        assert!(env.iter().all(|&a| (1..=3).contains(&a)), "{env:?}");
    }

    #[test]
    fn monoids_of_size_two() {
        let t = corpus::monoid();
        assert_eq!(enumerate_models_sized(&t, &[2]).len(), 4);
        assert_eq!(enumerate_models(&t, 2).len(), 5);
        // oracle: brute force over all e and all 16 tables
        let mut count = 0;
        for e in 0..2 {
            for mask in 0..16u32 {
                let mul = |a: usize, b: usize| ((mask >> (a * 2 + b)) & 1) as usize;
                let unit = (0..2).all(|a| mul(e, a) == a && mul(a, e) == a);
                let assoc = (0..8).all(|i| {
                    let (a, b, c) = (i >> 2, (i >> 1) & 1, i & 1);
                    mul(mul(a, b), c) == mul(a, mul(b, c))
                });
                if unit && assoc {
                    count += 1;
                }
            }
        }
        assert_eq!(count, 4);
    }

    #[test]
    fn empty_carrier_models() {
        assert_eq!(enumerate_models(&corpus::empty_theory(), 0).len(), 1);
        assert!(enumerate_models(&corpus::pointed(), 0).is_empty());
        assert_eq!(enumerate_models(&corpus::poset(), 0).len(), 1);
    }

    #[test]
    fn endomorphisms_of_z2() {
        let z2 = corpus::reduct_to(&corpus::cyclic_group(2), &corpus::monoid().sig);
        let homs = enumerate_homs(&z2, &z2);
        let maps: Vec<Vec<usize>> = homs.iter().map(|h| h.maps[0].map.clone()).collect();
        assert_eq!(maps, vec![vec![0, 0], vec![0, 1]]);
    }

    #[test]
    fn model_hom_is_a_homomorphism() {
        let t = corpus::monoid();
        let d = HornDoctrine::new(&t, Budget::default(), 1, 1);
        let r = sub_target();
        for m in enumerate_models(&t, 2) {
            let h = model_to_hom(&m, &t).unwrap();
            let rep = validate_hom(&d, &r, &h);
            assert!(rep.is_empty(), "{rep}");
            assert_eq!(hom_to_model(&h, &t, &m.name).unwrap(), m);
        }
    }

    #[test]
    fn empty_theory_hom() {
        let t = corpus::empty_theory();
        let m = corpus::finite_set(2);
        let h = model_to_hom(&m, &t).unwrap();
        let s = SortId(0);
        assert_eq!(h.map_obj(&vec![s, s]), 4);
        assert_eq!(h.map_elem(&vec![s, s], &HornFormula::top()), BitSet::full(4));
        let d = HornDoctrine::new(&t, Budget::default(), 1, 1);
        let delta = d.equality(&vec![s]);
        assert_eq!(h.map_elem(&vec![s, s], &delta), BitSet::from_indices(4, [0, 3]));
    }

    #[test]
    fn pointed_cell() {
        let t = corpus::pointed();
        let c = t.sig.op("c").unwrap();
        let src = Structure::from_fn("a", &t.sig, vec![1], |_, _| 0, |_, _| false);
        let tgt = Structure::from_fn("bc", &t.sig, vec![2], |_, _| 0, |_, _| false);
        let homs = enumerate_homs(&src, &tgt);
        assert_eq!(homs.len(), 1);
        let d = HornDoctrine::new(&t, Budget::default(), 1, 2);
        let cell = hom_corresponds(&homs[0], &src, &tgt);
        let (f, g) = (model_to_hom(&src, &t).unwrap(), model_to_hom(&tgt, &t).unwrap());
        assert!(validate_2cell(&d, &sub_target(), &f, &g, &cell).is_empty());
        assert_eq!(cell_corresponds(&cell, &t.sig), homs[0]);
        let _ = c;
    }

    #[test]
    fn cells_and_homs_agree_on_z2() {
        let t = corpus::monoid();
        let z2 = corpus::reduct_to(&corpus::cyclic_group(2), &t.sig);
        let d = HornDoctrine::new(&t, Budget::default(), 1, 1);
        let cells = enumerate_cells(&d, &z2, &z2);
        let homs = enumerate_homs(&z2, &z2);
        assert_eq!(cells.len(), 2);
        let back: Vec<StructureHom> = cells.iter().map(|c| cell_corresponds(c, &t.sig)).collect();
        assert_eq!(back, homs);
    }

    #[test]
    fn naturality_of_interpretation() {
        let t = corpus::monoid();
        let z3 = corpus::reduct_to(&corpus::cyclic_group(3), &t.sig);
        let h = ModelHom { model: z3.clone() };
        let d = HornDoctrine::new(&t, Budget::default(), 1, 1);
        for f in d.sample_arrows().iter().take(200) {
            for phi in d.fiber(&f.cod) {
                let lhs = h.map_elem(&f.dom, &d.reindex(f, &phi));
                let rhs = h.map_arrow(f).preimage(&h.map_elem(&f.cod, &phi));
                assert_eq!(lhs, rhs);
            }
        }
    }

    #[test]
    fn poset_relation_is_read_back() {
        let t = corpus::poset();
        let chain = corpus::chain(3);
        let h = model_to_hom(&chain, &t).unwrap();
        let back = hom_to_model(&h, &t, &chain.name).unwrap();
        let r = t.sig.rel("R").unwrap();
        let expected: BTreeSet<Vec<usize>> = (0..3).flat_map(|a| (a..3).map(move |b| vec![a, b])).collect();
        assert_eq!(back.rels[r.0], expected);
    }
}
