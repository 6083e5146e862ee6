//! Free models along theory morphisms, and the bounded relation `𝔩` on
//! Kan extension classes.

use alloc::collections::BTreeMap;
use alloc::format;
use alloc::string::String;
use alloc::vec;
use alloc::vec::Vec;
use core::fmt;

use crate::bitset::BitSet;
use crate::doctrine::{boxed, in_descent_set, SubFinSet};
use crate::kan::{diagram_equations, lan_ctx, model_generators, CtxLan, KanError};
use crate::prover::{entails, saturate, Budget, ClassId, Congruence, ProofStatus};
use crate::qcompletion::is_equivalence_relation;
use crate::report::ValidationReport;
use crate::doctrine::FinFn;
use crate::semantics::{
    atoms_up_to, check_model, encode_tuple, enumerate_homs, enumerate_models, interpret_formula, tuple_count,
    validate_structure_hom, Structure, StructureHom,
};
use crate::syntax::{reindex_formula, translate, CtxArrow, HornFormula, SortId, SyntaxError, Term, TheoryMorphism};

/// Per source axiom, whether its translation is provable in the target.
pub fn axiom_statuses(m: &TheoryMorphism, budget: &Budget) -> Result<Vec<(String, ProofStatus)>, SyntaxError> {
    m.check()?;
    Ok(m.source
        .axioms
        .iter()
        .map(|s| {
            let ctx = m.map_ctx(&s.ctx);
            (s.name.clone(), entails(&m.target, &ctx, &translate(m, &s.premise), &translate(m, &s.conclusion), budget))
        })
        .collect())
}

/// Translated axioms as report entries: nothing for proved ones, an
/// undecided entry for the rest. Sort errors are hard errors.
pub fn validate_theory_morphism(m: &TheoryMorphism, budget: &Budget) -> Result<ValidationReport, SyntaxError> {
    let mut r = ValidationReport::new();
    for (name, st) in axiom_statuses(m, budget)? {
        if let ProofStatus::Unknown { reason, .. } = st {
            r.undecided(format!("morphism.axiom.{name}"), format!("translation of `{name}` not proved: {reason}"));
        }
    }
    Ok(r)
}

/// `N ∘ E`: the source structure on the carriers of `n`.
pub fn forgetful(m: &TheoryMorphism, n: &Structure) -> Structure {
    let carriers: Vec<usize> = m.sort_map.iter().map(|s| n.carrier(*s)).collect();
    let sig = &m.source.sig;
    Structure::from_fn(
        &format!("{}|{}", n.name, m.source.name),
        sig,
        carriers,
        |f, args| n.eval(&m.op_map[f.0], args),
        |r, args| n.holds(&m.rel_map[r.0], args),
    )
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub enum FreeStatus {
    Closed,
    Truncated { depth: usize, reason: String },
}

#[derive(Clone, Debug)]
pub struct FreeModelResult {
    pub morphism: TheoryMorphism,
    pub input: Structure,
    pub output: Structure,
    /// `η`, from `input` to `forgetful(morphism, output)`.
    pub unit: StructureHom,
    pub congruence: Congruence,
    /// Per target sort, the least term of each output element.
    pub representatives: Vec<Vec<Term>>,
    /// `(source sort, element)` behind generator `i`.
    pub generators: Vec<(SortId, usize)>,
    pub rounds: usize,
    pub status: FreeStatus,
}

impl FreeModelResult {
    pub fn is_closed(&self) -> bool {
        self.status == FreeStatus::Closed
    }
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub enum AdjointError {
    Truncated(String),
    IllDefined(ValidationReport),
    Kan(KanError),
}

impl fmt::Display for AdjointError {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            AdjointError::Truncated(why) => write!(f, "free model is truncated: {why}"),
            AdjointError::IllDefined(r) => write!(f, "factorization is ill-defined:\n{r}"),
            AdjointError::Kan(e) => write!(f, "{e}"),
        }
    }
}

#[cfg(feature = "std")]
impl std::error::Error for AdjointError {}

impl From<KanError> for AdjointError {
    fn from(e: KanError) -> Self {
        AdjointError::Kan(e)
    }
}

/// The target model presented by the constants `c_a` and the translated
/// diagram of `mdl`, by saturation with the target axioms.
pub fn free_model(m: &TheoryMorphism, mdl: &Structure, budget: &Budget) -> FreeModelResult {
    let (gens, sorts) = model_generators(m, mdl);
    let tsig = &m.target.sig;
    let mut cong = Congruence::new(tsig, &sorts);
    for (l, r) in diagram_equations(m, mdl) {
        let (a, b) = (cong.add_term(&l), cong.add_term(&r));
        cong.union(a, b);
    }
    let gen_index = |s: SortId, a: usize| gens.iter().position(|&g| g == (s, a)).unwrap();
    for rid in m.source.sig.rel_ids() {
        let args = &m.source.sig.rel_decl(rid).args;
        for t in &mdl.rels[rid.0] {
            let consts: Vec<Term> = args.iter().zip(t).map(|(s, &a)| Term::Var(gen_index(*s, a))).collect();
            for atom in reindex_formula(&m.rel_map[rid.0], &consts).atoms() {
                cong.assert_atom(atom);
            }
        }
    }
    let out = saturate(&m.target, &mut cong, budget, None);
    let status = match (&out.exhausted, out.closed) {
        (None, true) => FreeStatus::Closed,
        (Some(why), _) => FreeStatus::Truncated { depth: budget.depth, reason: why.clone() },
        (None, false) => FreeStatus::Truncated { depth: budget.depth, reason: format!("operations not total after {} rounds", out.rounds) },
    };
    // output elements: classes per sort, ordered by representative
    let classes = cong.classes();
    let mut per_sort: Vec<Vec<(ClassId, Term)>> = vec![Vec::new(); tsig.sorts.len()];
    for (c, t) in classes {
        per_sort[cong.sort_of_class(c).0].push((c, t));
    }
    let index: BTreeMap<ClassId, usize> =
        per_sort.iter().flat_map(|v| v.iter().enumerate().map(|(i, (c, _))| (*c, i))).collect();
    let carriers: Vec<usize> = per_sort.iter().map(Vec::len).collect();
    let cls = |i: usize, s: SortId| per_sort[s.0][i].0;
    let output = Structure::from_fn(
        &format!("free({})", mdl.name),
        tsig,
        carriers,
        |f, args| {
            let ids: Vec<ClassId> = args.iter().zip(&tsig.op_decl(f).args).map(|(&a, &s)| cls(a, s)).collect();
            // partial when truncated; the least element stands in
            cong.apply(f, &ids).map(|c| index[&cong.find(c)]).unwrap_or(0)
        },
        |r, args| {
            let ids: Vec<ClassId> = args.iter().zip(&tsig.rel_decl(r).args).map(|(&a, &s)| cls(a, s)).collect();
            cong.has_fact(r, &ids)
        },
    );
    let unit = StructureHom {
        maps: mdl
            .carriers
            .iter()
            .enumerate()
            .map(|(s, &k)| {
                let t = m.sort_map[s];
                let map = (0..k).map(|a| index[&cong.find(cong.generator(gen_index(SortId(s), a)))]).collect();
                FinFn::new(k, output.carrier(t), map)
            })
            .collect(),
    };
    let representatives = per_sort.iter().map(|v| v.iter().map(|(_, t)| t.clone()).collect()).collect();
    FreeModelResult {
        morphism: m.clone(),
        input: mdl.clone(),
        output,
        unit,
        congruence: cong,
        representatives,
        generators: gens,
        rounds: out.rounds,
        status,
    }
}

/// `η`, once the result is known to be exact.
pub fn unit(r: &FreeModelResult) -> Result<StructureHom, AdjointError> {
    match &r.status {
        FreeStatus::Closed => Ok(r.unit.clone()),
        FreeStatus::Truncated { reason, .. } => Err(AdjointError::Truncated(reason.clone())),
    }
}

/// Output is a target model and `η` a homomorphism into its reduct.
pub fn check_free_model(r: &FreeModelResult) -> ValidationReport {
    let mut rep = check_model(&r.output, &r.morphism.target).scoped("output");
    let u = forgetful(&r.morphism, &r.output);
    rep.merge(validate_structure_hom(&r.input, &u, &r.unit).scoped("unit"));
    rep
}

/// `𝔥(α) ≤ η*(𝔨(E α))` for every atomic source formula over contexts of
/// one variable per sort and two variables of the first sort.
pub fn check_unit_cell(r: &FreeModelResult, depth: usize) -> ValidationReport {
    let mut rep = ValidationReport::new();
    let (m, src) = (&r.morphism, &r.morphism.source.sig);
    let mut ctxs: Vec<Vec<SortId>> = src.sort_ids().map(|s| vec![s]).collect();
    if !src.sorts.is_empty() {
        ctxs.push(vec![SortId(0), SortId(0)]);
    }
    for ctx in ctxs {
        let tctx = m.map_ctx(&ctx);
        for alpha in atoms_up_to(src, &ctx, depth) {
            let lhs = interpret_formula(&r.input, &ctx, &alpha);
            let rhs = interpret_formula(&r.output, &tctx, &translate(m, &alpha));
            for (i, t) in r.input.tuples(&ctx).enumerate() {
                let img: Vec<usize> = ctx.iter().zip(&t).map(|(s, &a)| r.unit.apply(*s, a)).collect();
                if lhs.contains(i) && !rhs.contains(encode_tuple(&r.output.carriers, &tctx, &img)) {
                    rep.violation("unit.cell", format!("{} holds at {t:?} but not at its image", src.show_formula(&alpha)));
                }
            }
        }
    }
    rep
}

/// `ĝ`: output elements evaluated in `n` with `c_a ↦ g(a)`; checked to be a
/// homomorphism with `ĝ ∘ η = g`.
pub fn factor_through(r: &FreeModelResult, n: &Structure, g: &StructureHom) -> Result<StructureHom, AdjointError> {
    if let FreeStatus::Truncated { reason, .. } = &r.status {
        return Err(AdjointError::Truncated(reason.clone()));
    }
    let env: Vec<usize> = r.generators.iter().map(|&(s, a)| g.apply(s, a)).collect();
    let ghat = StructureHom {
        maps: r
            .representatives
            .iter()
            .enumerate()
            .map(|(t, reps)| FinFn::new(reps.len(), n.carrier(SortId(t)), reps.iter().map(|x| n.eval(x, &env)).collect()))
            .collect(),
    };
    let mut rep = validate_structure_hom(&r.output, n, &ghat);
    for (s, f) in g.maps.iter().enumerate() {
        let t = r.morphism.sort_map[s];
        for a in 0..f.dom {
            if ghat.apply(t, r.unit.apply(SortId(s), a)) != f.apply(a) {
                rep.violation("factor.triangle", format!("ĝ(η({a})) ≠ g({a}) at sort {}", r.morphism.source.sig.sorts[s]));
            }
        }
    }
    if rep.is_empty() {
        Ok(ghat)
    } else {
        Err(AdjointError::IllDefined(rep))
    }
}

/// Homomorphisms `h: output → n` with `U(h) ∘ η = g`.
fn triangle_solutions(r: &FreeModelResult, n: &Structure, g: &StructureHom) -> Vec<StructureHom> {
    enumerate_homs(&r.output, n)
        .into_iter()
        .filter(|h| {
            g.maps.iter().enumerate().all(|(s, f)| {
                let t = r.morphism.sort_map[s];
                (0..f.dom).all(|a| h.apply(t, r.unit.apply(SortId(s), a)) == f.apply(a))
            })
        })
        .collect()
}

/// Counts of the exhaustive check.
#[derive(Clone, Debug, Default, PartialEq, Eq)]
pub struct UniversalCheck {
    pub models: usize,
    pub homs: usize,
    pub report: ValidationReport,
}

/// For every target model with carriers at most `n` and every
/// `g: input → U(N)`, exactly one `h` with `U(h) ∘ η = g`, and it is `ĝ`.
pub fn check_universal_property(r: &FreeModelResult, n: usize) -> UniversalCheck {
    let mut out = UniversalCheck::default();
    if let FreeStatus::Truncated { reason, .. } = &r.status {
        out.report.undecided("universal.truncated", reason.clone());
        return out;
    }
    for model in enumerate_models(&r.morphism.target, n) {
        out.models += 1;
        let u = forgetful(&r.morphism, &model);
        for g in enumerate_homs(&r.input, &u) {
            out.homs += 1;
            let sols = triangle_solutions(r, &model, &g);
            match factor_through(r, &model, &g) {
                Ok(ghat) if sols.len() == 1 && sols[0] == ghat => {}
                Ok(_) => out.report.violation(
                    "universal.unique",
                    format!("{} maps {} → {} through η for {g:?}", sols.len(), r.output.name, model.name),
                ),
                Err(e) => out.report.violation("universal.factor", format!("into {}: {e}", model.name)),
            }
        }
    }
    out
}

// ---- the bounded relation 𝔩 ----

/// One pair `(K, θ)` with `θ̂` per target sort on Lan classes.
#[derive(Clone, Debug)]
pub struct RosterEntry {
    pub model: Structure,
    pub theta: StructureHom,
    pub mediator: Vec<Vec<usize>>,
}

/// Every `(K, θ)` with `K` a target model of carriers at most `bound`.
#[derive(Clone, Debug)]
pub struct Roster {
    pub lan: CtxLan,
    pub bound: usize,
    pub models: usize,
    pub entries: Vec<RosterEntry>,
}

impl Roster {
    pub fn new(m: &TheoryMorphism, mdl: &Structure, bound: usize, lan_depth: usize) -> Result<Self, AdjointError> {
        let lan = lan_ctx(m, mdl, &[], lan_depth);
        let mut entries = Vec::new();
        let models = enumerate_models(&m.target, bound);
        for k in &models {
            let u = forgetful(m, k);
            for theta in enumerate_homs(mdl, &u) {
                let mediator = lan.mediator(k, &theta)?;
                entries.push(RosterEntry { model: k.clone(), theta, mediator });
            }
        }
        Ok(Self { lan, bound, models: models.len(), entries })
    }

    fn sizes(&self) -> Vec<usize> {
        self.lan.reps.iter().map(Vec::len).collect()
    }

    /// `|Lan(ctx)|`.
    pub fn size(&self, ctx: &[SortId]) -> usize {
        tuple_count(&self.sizes(), ctx)
    }

    /// `⋀ θ̂*(𝔨(γ))` as a subset of `Lan(ctx)`, tuples in mixed radix order.
    pub fn ell(&self, ctx: &[SortId], gamma: &HornFormula) -> BitSet {
        let sizes = self.sizes();
        let n = tuple_count(&sizes, ctx);
        let mut rel = BitSet::full(n);
        for e in &self.entries {
            let ext = interpret_formula(&e.model, ctx, gamma);
            for i in 0..n {
                if !rel.contains(i) {
                    continue;
                }
                let t = crate::semantics::decode_tuple(&sizes, ctx, i);
                let img: Vec<usize> = ctx.iter().zip(&t).map(|(s, &c)| e.mediator[s.0][c]).collect();
                if !ext.contains(encode_tuple(&e.model.carriers, ctx, &img)) {
                    rel.remove(i);
                }
            }
        }
        rel
    }

    /// `Lan(g)` on class tuples, where the substituted terms stay inside
    /// the computed universe.
    pub fn lan_arrow(&self, g: &CtxArrow) -> Vec<Option<usize>> {
        let sizes = self.sizes();
        (0..tuple_count(&sizes, &g.dom))
            .map(|i| {
                let t = crate::semantics::decode_tuple(&sizes, &g.dom, i);
                let args: Vec<Term> = g.dom.iter().zip(&t).map(|(s, &c)| self.lan.reps[s.0][c].clone()).collect();
                let img = g.terms.iter().map(|x| self.lan.class_of(&x.substitute(&args))).collect::<Option<Vec<_>>>()?;
                Some(encode_tuple(&sizes, &g.cod, &img))
            })
            .collect()
    }
}

/// `x_i = x_{n+i}` over `ctx ++ ctx`.
pub fn equality_formula(ctx: &[SortId]) -> HornFormula {
    let n = ctx.len();
    HornFormula::from_atoms((0..n).map(|i| crate::syntax::Atom::Eq(Term::Var(i), Term::Var(n + i))))
}

#[derive(Clone, Debug)]
pub struct EllResult {
    /// Context of `γ`.
    pub context: Vec<SortId>,
    pub gamma: HornFormula,
    /// Per target sort, the Lan class representatives.
    pub classes: Vec<Vec<Term>>,
    /// `𝔩(γ)` as a subset of the class tuples of `context`.
    pub relation: BitSet,
    pub bound: usize,
    pub models: usize,
    pub pairs: usize,
    /// Same relation at `bound + 1`.
    pub stable: bool,
    /// Lan class counts unchanged one level deeper.
    pub lan_stable: bool,
}

/// `𝔩_ctx(γ)` over models of size at most `n`, with Lan classes of terms
/// of height at most `budget.depth`.
pub fn ell_bounded(
    m: &TheoryMorphism,
    mdl: &Structure,
    ctx: &[SortId],
    gamma: &HornFormula,
    n: usize,
    budget: &Budget,
) -> Result<EllResult, AdjointError> {
    let roster = Roster::new(m, mdl, n, budget.depth)?;
    let next = Roster::new(m, mdl, n + 1, budget.depth)?;
    let relation = roster.ell(ctx, gamma);
    let stable = next.ell(ctx, gamma) == relation;
    Ok(EllResult {
        context: ctx.to_vec(),
        gamma: gamma.clone(),
        classes: roster.lan.reps.clone(),
        relation,
        bound: n,
        models: roster.models,
        pairs: roster.entries.len(),
        stable,
        lan_stable: roster.lan.stable,
    })
}

/// `𝔩(δ)` on `Lan(ctx)`, as pairs of class tuples.
pub fn ell_equality(m: &TheoryMorphism, mdl: &Structure, ctx: &[SortId], n: usize, budget: &Budget) -> Result<EllResult, AdjointError> {
    let doubled: Vec<SortId> = ctx.iter().chain(ctx).copied().collect();
    ell_bounded(m, mdl, &doubled, &equality_formula(ctx), n, budget)
}

/// The kernel of `Lan(ctx) → free(ctx)`, sending each class to the value of
/// its representative under `η`, as pairs of class tuples.
pub fn free_kernel(roster: &Roster, r: &FreeModelResult, ctx: &[SortId]) -> BitSet {
    let env: Vec<usize> = r.generators.iter().map(|&(s, a)| r.unit.apply(s, a)).collect();
    let sizes = roster.sizes();
    let value: Vec<Vec<usize>> = roster.lan.reps.iter().map(|reps| reps.iter().map(|t| r.output.eval(t, &env)).collect()).collect();
    let n = tuple_count(&sizes, ctx);
    let tuples: Vec<Vec<usize>> = (0..n)
        .map(|i| {
            let t = crate::semantics::decode_tuple(&sizes, ctx, i);
            ctx.iter().zip(&t).map(|(s, &c)| value[s.0][c]).collect()
        })
        .collect();
    BitSet::from_indices(n * n, (0..n).flat_map(|i| (0..n).map(move |j| (i, j))).filter(|&(i, j)| tuples[i] == tuples[j]).map(|(i, j)| i * n + j))
}

/// The three properties of `𝔩` on `ctx`, the ⊠ identity when `ctx` has
/// length 2, and the descent inequality for each sampled `γ`.
pub fn check_ell_lemma(roster: &Roster, ctx: &[SortId], gammas: &[HornFormula], arrows: &[CtxArrow]) -> ValidationReport {
    let mut rep = ValidationReport::new();
    let n = roster.size(ctx);
    let sub = SubFinSet { max_size: n.max(1), params: 1 };
    let doubled: Vec<SortId> = ctx.iter().chain(ctx).copied().collect();
    let delta = roster.ell(&doubled, &equality_formula(ctx));
    let eq = is_equivalence_relation(&sub, &n, &delta);
    if !eq.is_empty() {
        rep.merge(eq.scoped("ell.equivalence"));
    }
    for (i, g1) in gammas.iter().enumerate() {
        let l1 = roster.ell(ctx, g1);
        for g2 in &gammas[i..] {
            if roster.ell(ctx, &g1.and(g2)) != l1.intersection(&roster.ell(ctx, g2)) {
                rep.violation("ell.meet", "𝔩(γ∧γ′) ≠ 𝔩(γ) ∩ 𝔩(γ′)");
            }
        }
        if !in_descent_set(&sub, &n, &delta, &l1) {
            rep.violation("ell.descent", "pr1*𝔩(γ) ∧ 𝔩(δ) ≰ pr2*𝔩(γ)");
        }
    }
    if !roster.ell(ctx, &HornFormula::top()).is_subset(&BitSet::full(n)) || roster.ell(ctx, &HornFormula::top()).count() != n {
        rep.violation("ell.top", "𝔩(⊤) is not everything");
    }
    let mut checked = 0;
    for g in arrows.iter().filter(|g| g.cod == ctx) {
        let action = roster.lan_arrow(g);
        for gamma in gammas {
            let pulled = roster.ell(&g.dom, &reindex_formula(gamma, &g.terms));
            let l = roster.ell(ctx, gamma);
            for (i, img) in action.iter().enumerate() {
                let Some(j) = img else { continue };
                checked += 1;
                if pulled.contains(i) != l.contains(*j) {
                    rep.violation("ell.natural", format!("Lan(g)*𝔩(γ) ≠ 𝔩(P(g)γ) at tuple {i}"));
                }
            }
        }
    }
    if !arrows.is_empty() && checked == 0 {
        rep.undecided("ell.natural", "no arrow image stayed inside the term universe");
    }
    if ctx.len() == 2 {
        let one = &ctx[..1];
        let two = &ctx[1..];
        let (a, b) = (roster.size(one), roster.size(two));
        let da = roster.ell(&[one, one].concat(), &equality_formula(one));
        let db = roster.ell(&[two, two].concat(), &equality_formula(two));
        if boxed(&sub_of(a.max(b)), &a, &b, &da, &db) != delta {
            rep.violation("ell.product", "𝔩(δ) over a product ≠ ⊠ of the components");
        }
    }
    rep
}

fn sub_of(n: usize) -> SubFinSet {
    SubFinSet { max_size: n.max(1), params: 1 }
}

/// `𝔩(δ)` on `Lan(ctx)` against the free model kernel.
pub fn check_consistency(roster: &Roster, r: &FreeModelResult, ctx: &[SortId]) -> ValidationReport {
    let mut rep = ValidationReport::new();
    let doubled: Vec<SortId> = ctx.iter().chain(ctx).copied().collect();
    let ell = roster.ell(&doubled, &equality_formula(ctx));
    let ker = free_kernel(roster, r, ctx);
    if ell != ker {
        rep.violation("ell.kernel", format!("𝔩(δ) has {} pairs, the free kernel {}", ell.count(), ker.count()));
    }
    rep
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::corpus;
    use crate::syntax::Atom;

    fn closed(m: &TheoryMorphism, mdl: &Structure) -> FreeModelResult {
        let r = free_model(m, mdl, &Budget::default());
        assert!(r.is_closed(), "{:?}", r.status);
        assert!(check_free_model(&r).is_empty(), "{}", check_free_model(&r));
        r
    }

    /// Largest abelian quotient of a finite group, by brute force over all
    /// partitions compatible with multiplication.
    fn largest_abelian_quotient(mul: &[Vec<usize>]) -> usize {
        let n = mul.len();
        let mut best = 0;
        let mut block = vec![0usize; n];
        fn rec(i: usize, k: usize, block: &mut Vec<usize>, mul: &[Vec<usize>], best: &mut usize) {
            let n = mul.len();
            if i == n {
                let compatible = (0..n).all(|a| (0..n).all(|b| (0..n).all(|c| (0..n).all(|d| {
                    block[a] != block[b] || block[c] != block[d] || block[mul[a][c]] == block[mul[b][d]]
                }))));
                let abelian = (0..n).all(|a| (0..n).all(|b| block[mul[a][b]] == block[mul[b][a]]));
                if compatible && abelian && k > *best {
                    *best = k;
                }
                return;
            }
            for b in 0..=k {
                block[i] = b;
                rec(i + 1, k.max(b + 1), block, mul, best);
            }
        }
        rec(0, 0, &mut block, mul, &mut best);
        best
    }

    #[test]
    fn pointed_extension_of_two() {
        let r = closed(&corpus::pointed_extension(), &corpus::finite_set(2));
        assert_eq!(r.output.carriers, vec![3]);
        let eta = unit(&r).unwrap();
        assert_ne!(eta.maps[0].map[0], eta.maps[0].map[1]);
        assert!(check_universal_property(&r, 3).report.is_empty());
        assert!(check_unit_cell(&r, 1).is_empty());
    }

    #[test]
    fn free_group_on_idempotent_monoid_is_trivial() {
        let r = closed(&corpus::monoid_to_group(), &corpus::idempotent_monoid());
        assert_eq!(r.output.carriers, vec![1]);
        assert!(check_universal_property(&r, 3).report.is_empty());
    }

    #[test]
    fn abelianization_of_s3() {
        let s3 = corpus::symmetric_group_3();
        let mul: Vec<Vec<usize>> = {
            let f = s3.sig.op("*").unwrap();
            (0..6).map(|a| (0..6).map(|b| s3.op(f, &[a, b])).collect()).collect()
        };
        let r = closed(&corpus::abelianize(), &s3);
        assert_eq!(r.output.carriers, vec![largest_abelian_quotient(&mul)]);
        assert_eq!(r.output.carriers, vec![2]);
        // η is the sign map: transpositions go to the non-identity element
        let eta = &r.unit.maps[0];
        assert_eq!(eta.map[0], eta.map[4]);
        assert_eq!(eta.map[1], eta.map[2]);
        assert_ne!(eta.map[0], eta.map[1]);
        let u = check_universal_property(&r, 4);
        assert!(u.report.is_empty(), "{}", u.report);
        assert!(u.models > 0 && u.homs > 0);
    }

    #[test]
    fn scalar_extension_z4_to_z2() {
        let m = corpus::scalars(4, 2);
        assert!(validate_theory_morphism(&m, &Budget::default()).unwrap().is_empty());
        let r = closed(&m, &corpus::cyclic_module(4));
        assert_eq!(r.output.carriers, vec![2]);
    }

    #[test]
    fn free_semilattice_on_two_chain() {
        let m = corpus::poset_to_semilattice();
        let r = closed(&m, &corpus::chain(2));
        assert_eq!(r.output.carriers, vec![3]);
        assert!(check_universal_property(&r, 3).report.is_empty());
    }

    #[test]
    fn action_extension() {
        let r = closed(&corpus::action_extension(), &corpus::trivial_action());
        assert_eq!(r.output.carriers, vec![1, 1]);
    }

    #[test]
    fn identity_morphism_unit_is_iso() {
        let t = corpus::monoid();
        let z3 = corpus::reduct_to(&corpus::cyclic_group(3), &t.sig);
        let r = closed(&TheoryMorphism::identity(&t), &z3);
        assert!(r.unit.maps.iter().all(FinFn::is_bijective));
    }

    #[test]
    fn adding_an_axiom_to_a_model_of_it() {
        let m = TheoryMorphism::inclusion("comm", &corpus::monoid(), &corpus::comm_monoid()).unwrap();
        let z3 = corpus::reduct_to(&corpus::cyclic_group(3), &corpus::monoid().sig);
        let r = closed(&m, &z3);
        assert!(r.unit.maps.iter().all(FinFn::is_bijective));
    }

    #[test]
    fn factorization_of_eta_is_identity() {
        let r = closed(&corpus::pointed_extension(), &corpus::finite_set(2));
        let ghat = factor_through(&r, &r.output, &r.unit).unwrap();
        assert_eq!(ghat, StructureHom::identity(&r.output));
    }

    #[test]
    fn forgetful_examples() {
        let m = corpus::poset_to_semilattice();
        let sl = Structure::from_fn("two", &m.target.sig, vec![2], |_, a| if a.is_empty() { 0 } else { a[0].max(a[1]) }, |_, _| false);
        // top = 0, a = 1, meet = max: 1 ⊓ 0 = 1
        assert!(check_model(&sl, &m.target).is_empty());
        let p = forgetful(&m, &sl);
        let r = m.source.sig.rel("R").unwrap();
        assert!(p.holds_rel(r, &[1, 0]) && !p.holds_rel(r, &[0, 1]));
        assert!(check_model(&p, &m.source).is_empty());
    }

    #[test]
    fn morphisms_in_the_corpus_are_provable() {
        for m in corpus::morphisms() {
            let r = validate_theory_morphism(&m, &Budget::default()).unwrap();
            assert!(r.is_empty(), "{}: {r}", m.name);
        }
    }

    #[test]
    fn ell_on_the_pointed_example() {
        let m = corpus::pointed_extension();
        let mdl = corpus::finite_set(1);
        let b = Budget::with_depth(1);
        let ctx = [SortId(0)];
        let at1 = ell_equality(&m, &mdl, &ctx, 1, &b).unwrap();
        assert!(!at1.stable);
        let at2 = ell_equality(&m, &mdl, &ctx, 2, &b).unwrap();
        assert!(at2.stable);
        assert_eq!(at2.classes[0].len(), 2);
        assert_eq!(at2.relation, BitSet::from_indices(4, [0, 3]));
        let top = ell_bounded(&m, &mdl, &ctx, &HornFormula::top(), 2, &b).unwrap();
        assert_eq!(top.relation.count(), 2);
    }

    #[test]
    fn ell_matches_the_free_kernel() {
        let b = Budget::with_depth(1);
        for (m, mdl, n) in [
            (corpus::pointed_extension(), corpus::finite_set(2), 2),
            (corpus::monoid_to_group(), corpus::idempotent_monoid(), 3),
        ] {
            let roster = Roster::new(&m, &mdl, n, b.depth).unwrap();
            let r = closed(&m, &mdl);
            let s = SortId(0);
            assert!(check_consistency(&roster, &r, &[s]).is_empty());
            let x = |i| Term::Var(i);
            let gammas: Vec<HornFormula> = atoms_up_to(&m.target.sig, &[s, s], 1).into_iter().take(6).collect();
            let arrows = vec![
                CtxArrow { dom: vec![s], cod: vec![s, s], terms: vec![x(0), x(0)] },
                CtxArrow { dom: vec![s, s], cod: vec![s, s], terms: vec![x(1), x(0)] },
            ];
            let rep = check_ell_lemma(&roster, &[s, s], &gammas, &arrows);
            assert!(!rep.has_violations(), "{}: {rep}", m.name);
            let one = vec![HornFormula::top(), HornFormula::atom(Atom::Eq(x(0), x(0)))];
            assert!(!check_ell_lemma(&roster, &[s], &one, &[]).has_violations());
        }
    }
}
