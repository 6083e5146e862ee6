//! Multi-sorted signatures, terms, Horn formulas, theories and theory
//! morphisms, plus the category of contexts presented lazily.
//!
//! Variables are positional: in a context `[s1, …, sn]` the variable `Var(i)`
//! has sort `s(i+1)` and is printed `x(i+1)`.

use alloc::collections::BTreeSet;
use alloc::format;
use alloc::string::{String, ToString};
use alloc::vec;
use alloc::vec::Vec;
use core::cmp::Ordering;
use core::fmt;

#[derive(Clone, Copy, Debug, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct SortId(pub usize);

#[derive(Clone, Copy, Debug, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct OpId(pub usize);

#[derive(Clone, Copy, Debug, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct RelId(pub usize);

#[derive(Clone, Debug, PartialEq, Eq)]
pub enum SyntaxError {
    Duplicate(String),
    UnknownSort(String),
    UnknownOp(String),
    UnknownRel(String),
    Arity { symbol: String, expected: usize, found: usize },
    SortMismatch { at: String, expected: String, found: String },
    VarOutOfRange { index: usize, context: usize },
    Morphism(String),
}

impl fmt::Display for SyntaxError {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            SyntaxError::Duplicate(n) => write!(f, "duplicate declaration of `{n}`"),
            SyntaxError::UnknownSort(n) => write!(f, "unknown sort `{n}`"),
            SyntaxError::UnknownOp(n) => write!(f, "unknown operation `{n}`"),
            SyntaxError::UnknownRel(n) => write!(f, "unknown relation `{n}`"),
            SyntaxError::Arity { symbol, expected, found } => {
                write!(f, "`{symbol}` expects {expected} arguments, got {found}")
            }
            SyntaxError::SortMismatch { at, expected, found } => {
                write!(f, "sort mismatch at {at}: expected {expected}, found {found}")
            }
            SyntaxError::VarOutOfRange { index, context } => {
                write!(f, "variable x{} outside a context of length {context}", index + 1)
            }
            SyntaxError::Morphism(m) => write!(f, "ill-formed morphism: {m}"),
        }
    }
}

#[cfg(feature = "std")]
impl std::error::Error for SyntaxError {}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct OpDecl {
    pub name: String,
    pub args: Vec<SortId>,
    pub result: SortId,
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct RelDecl {
    pub name: String,
    pub args: Vec<SortId>,
}

#[derive(Clone, Debug, Default, PartialEq, Eq)]
pub struct Signature {
    pub sorts: Vec<String>,
    pub ops: Vec<OpDecl>,
    pub rels: Vec<RelDecl>,
}

/// A context is a list of sorts.
pub type Context = Vec<SortId>;

impl Signature {
    pub fn new() -> Self {
        Self::default()
    }

    /// A one-sorted signature with sort `elem`.
    pub fn single_sorted() -> Self {
        let mut s = Self::new();
        s.add_sort("elem").unwrap();
        s
    }

    pub fn add_sort(&mut self, name: &str) -> Result<SortId, SyntaxError> {
        if self.sorts.iter().any(|s| s == name) {
            return Err(SyntaxError::Duplicate(name.to_string()));
        }
        self.sorts.push(name.to_string());
        Ok(SortId(self.sorts.len() - 1))
    }

    pub fn add_op(&mut self, name: &str, args: &[SortId], result: SortId) -> Result<OpId, SyntaxError> {
        if self.ops.iter().any(|o| o.name == name) || self.rels.iter().any(|r| r.name == name) {
            return Err(SyntaxError::Duplicate(name.to_string()));
        }
        self.ops.push(OpDecl { name: name.to_string(), args: args.to_vec(), result });
        Ok(OpId(self.ops.len() - 1))
    }

    pub fn add_rel(&mut self, name: &str, args: &[SortId]) -> Result<RelId, SyntaxError> {
        if self.ops.iter().any(|o| o.name == name) || self.rels.iter().any(|r| r.name == name) {
            return Err(SyntaxError::Duplicate(name.to_string()));
        }
        self.rels.push(RelDecl { name: name.to_string(), args: args.to_vec() });
        Ok(RelId(self.rels.len() - 1))
    }

    pub fn sort(&self, name: &str) -> Option<SortId> {
        self.sorts.iter().position(|s| s == name).map(SortId)
    }

    pub fn op(&self, name: &str) -> Option<OpId> {
        self.ops.iter().position(|o| o.name == name).map(OpId)
    }

    pub fn rel(&self, name: &str) -> Option<RelId> {
        self.rels.iter().position(|r| r.name == name).map(RelId)
    }

    pub fn op_decl(&self, f: OpId) -> &OpDecl {
        &self.ops[f.0]
    }

    pub fn rel_decl(&self, r: RelId) -> &RelDecl {
        &self.rels[r.0]
    }

    pub fn sort_name(&self, s: SortId) -> &str {
        &self.sorts[s.0]
    }

    pub fn op_ids(&self) -> impl Iterator<Item = OpId> {
        (0..self.ops.len()).map(OpId)
    }

    pub fn rel_ids(&self) -> impl Iterator<Item = RelId> {
        (0..self.rels.len()).map(RelId)
    }

    pub fn sort_ids(&self) -> impl Iterator<Item = SortId> {
        (0..self.sorts.len()).map(SortId)
    }

    /// Sort of `t` in `ctx`, checking well-sortedness.
    pub fn sort_of(&self, ctx: &[SortId], t: &Term) -> Result<SortId, SyntaxError> {
        match t {
            Term::Var(i) => ctx.get(*i).copied().ok_or(SyntaxError::VarOutOfRange { index: *i, context: ctx.len() }),
            Term::App(f, args) => {
                let decl = self.ops.get(f.0).ok_or_else(|| SyntaxError::UnknownOp(format!("{f:?}")))?;
                if decl.args.len() != args.len() {
                    return Err(SyntaxError::Arity {
                        symbol: decl.name.clone(),
                        expected: decl.args.len(),
                        found: args.len(),
                    });
                }
                for (k, (a, &s)) in args.iter().zip(&decl.args).enumerate() {
                    let found = self.sort_of(ctx, a)?;
                    if found != s {
                        return Err(SyntaxError::SortMismatch {
                            at: format!("argument {} of `{}`", k + 1, decl.name),
                            expected: self.sorts[s.0].clone(),
                            found: self.sorts[found.0].clone(),
                        });
                    }
                }
                Ok(decl.result)
            }
        }
    }

    pub fn check_atom(&self, ctx: &[SortId], a: &Atom) -> Result<(), SyntaxError> {
        match a {
            Atom::Rel(r, args) => {
                let decl = self.rels.get(r.0).ok_or_else(|| SyntaxError::UnknownRel(format!("{r:?}")))?;
                if decl.args.len() != args.len() {
                    return Err(SyntaxError::Arity {
                        symbol: decl.name.clone(),
                        expected: decl.args.len(),
                        found: args.len(),
                    });
                }
                for (k, (t, &s)) in args.iter().zip(&decl.args).enumerate() {
                    let found = self.sort_of(ctx, t)?;
                    if found != s {
                        return Err(SyntaxError::SortMismatch {
                            at: format!("argument {} of `{}`", k + 1, decl.name),
                            expected: self.sorts[s.0].clone(),
                            found: self.sorts[found.0].clone(),
                        });
                    }
                }
                Ok(())
            }
            Atom::Eq(l, r) => {
                let (a, b) = (self.sort_of(ctx, l)?, self.sort_of(ctx, r)?);
                if a != b {
                    return Err(SyntaxError::SortMismatch {
                        at: format!("equation {} = {}", self.show_term(l), self.show_term(r)),
                        expected: self.sorts[a.0].clone(),
                        found: self.sorts[b.0].clone(),
                    });
                }
                Ok(())
            }
        }
    }

    pub fn check_formula(&self, ctx: &[SortId], phi: &HornFormula) -> Result<(), SyntaxError> {
        phi.atoms().iter().try_for_each(|a| self.check_atom(ctx, a))
    }

    /// Total order on terms: height, then symbol name, then arguments.
    pub fn cmp_terms(&self, a: &Term, b: &Term) -> Ordering {
        a.height().cmp(&b.height()).then_with(|| match (a, b) {
            (Term::Var(i), Term::Var(j)) => i.cmp(j),
            (Term::Var(_), Term::App(..)) => Ordering::Less,
            (Term::App(..), Term::Var(_)) => Ordering::Greater,
            (Term::App(f, xs), Term::App(g, ys)) => self.ops[f.0]
                .name
                .cmp(&self.ops[g.0].name)
                .then_with(|| f.cmp(g))
                .then_with(|| {
                    for (x, y) in xs.iter().zip(ys) {
                        let c = self.cmp_terms(x, y);
                        if c != Ordering::Equal {
                            return c;
                        }
                    }
                    xs.len().cmp(&ys.len())
                }),
        })
    }

    pub fn show_term(&self, t: &Term) -> String {
        self.show_term_with(t, &|i| format!("x{}", i + 1))
    }

    /// Prints `t`, naming variable `i` by `var(i)`.
    pub fn show_term_with(&self, t: &Term, var: &dyn Fn(usize) -> String) -> String {
        match t {
            Term::Var(i) => var(*i),
            Term::App(f, args) => {
                let name = &self.ops[f.0].name;
                if args.is_empty() {
                    name.clone()
                } else if args.len() == 2 && is_symbolic(name) {
                    let side = |a: &Term| {
                        let s = self.show_term_with(a, var);
                        if self.is_infix(a) {
                            format!("({s})")
                        } else {
                            s
                        }
                    };
                    format!("{} {} {}", side(&args[0]), name, side(&args[1]))
                } else {
                    let parts: Vec<String> = args.iter().map(|a| self.show_term_with(a, var)).collect();
                    format!("{}({})", name, parts.join(", "))
                }
            }
        }
    }

    fn is_infix(&self, t: &Term) -> bool {
        matches!(t, Term::App(f, args) if args.len() == 2 && is_symbolic(&self.ops[f.0].name))
    }

    pub fn show_atom(&self, a: &Atom) -> String {
        match a {
            Atom::Rel(r, args) => {
                let parts: Vec<String> = args.iter().map(|t| self.show_term(t)).collect();
                format!("{}({})", self.rels[r.0].name, parts.join(", "))
            }
            Atom::Eq(l, r) => format!("{} = {}", self.show_term(l), self.show_term(r)),
        }
    }

    pub fn show_formula(&self, phi: &HornFormula) -> String {
        if phi.is_top() {
            return "true".to_string();
        }
        let parts: Vec<String> = phi.atoms().iter().map(|a| self.show_atom(a)).collect();
        parts.join(" & ")
    }
}

/// Symbol names whose first character is not alphanumeric print infix.
pub fn is_symbolic(name: &str) -> bool {
    name.chars().next().is_some_and(|c| !c.is_alphanumeric() && c != '_')
}

#[derive(Clone, Debug, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub enum Term {
    Var(usize),
    App(OpId, Vec<Term>),
}

impl Term {
    pub fn var(i: usize) -> Self {
        Term::Var(i)
    }

    pub fn app(f: OpId, args: Vec<Term>) -> Self {
        Term::App(f, args)
    }

    pub fn constant(f: OpId) -> Self {
        Term::App(f, Vec::new())
    }

    /// Variables have height 0, constants height 1.
    pub fn height(&self) -> usize {
        match self {
            Term::Var(_) => 0,
            Term::App(_, args) => 1 + args.iter().map(Term::height).max().unwrap_or(0),
        }
    }

    pub fn size(&self) -> usize {
        match self {
            Term::Var(_) => 1,
            Term::App(_, args) => 1 + args.iter().map(Term::size).sum::<usize>(),
        }
    }

    /// Simultaneous substitution `t[args/x]`.
    pub fn substitute(&self, args: &[Term]) -> Term {
        match self {
            Term::Var(i) => args[*i].clone(),
            Term::App(f, xs) => Term::App(*f, xs.iter().map(|x| x.substitute(args)).collect()),
        }
    }

    /// Largest variable index plus one.
    pub fn var_bound(&self) -> usize {
        match self {
            Term::Var(i) => i + 1,
            Term::App(_, xs) => xs.iter().map(Term::var_bound).max().unwrap_or(0),
        }
    }

    /// All subterms, children before parents.
    pub fn subterms(&self) -> Vec<&Term> {
        let mut out = Vec::new();
        fn go<'a>(t: &'a Term, out: &mut Vec<&'a Term>) {
            if let Term::App(_, xs) = t {
                for x in xs {
                    go(x, out);
                }
            }
            out.push(t);
        }
        go(self, &mut out);
        out
    }
}

#[derive(Clone, Debug, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub enum Atom {
    Rel(RelId, Vec<Term>),
    Eq(Term, Term),
}

impl Atom {
    pub fn substitute(&self, args: &[Term]) -> Atom {
        match self {
            Atom::Rel(r, ts) => Atom::Rel(*r, ts.iter().map(|t| t.substitute(args)).collect()),
            Atom::Eq(l, r) => Atom::Eq(l.substitute(args), r.substitute(args)),
        }
    }

    pub fn terms(&self) -> Vec<&Term> {
        match self {
            Atom::Rel(_, ts) => ts.iter().collect(),
            Atom::Eq(l, r) => vec![l, r],
        }
    }
}

/// A conjunction of atoms, kept sorted and deduplicated; empty means `⊤`.
#[derive(Clone, Debug, Default, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct HornFormula {
    atoms: Vec<Atom>,
}

impl HornFormula {
    pub fn top() -> Self {
        Self::default()
    }

    pub fn from_atoms(atoms: impl IntoIterator<Item = Atom>) -> Self {
        let set: BTreeSet<Atom> = atoms.into_iter().collect();
        Self { atoms: set.into_iter().collect() }
    }

    pub fn atom(a: Atom) -> Self {
        Self { atoms: vec![a] }
    }

    pub fn eq(l: Term, r: Term) -> Self {
        Self::atom(Atom::Eq(l, r))
    }

    pub fn atoms(&self) -> &[Atom] {
        &self.atoms
    }

    pub fn is_top(&self) -> bool {
        self.atoms.is_empty()
    }

    pub fn and(&self, other: &HornFormula) -> HornFormula {
        Self::from_atoms(self.atoms.iter().chain(&other.atoms).cloned())
    }

    /// Re-sorts and deduplicates; a no-op on values built through the API.
    pub fn canonical(&self) -> HornFormula {
        Self::from_atoms(self.atoms.iter().cloned())
    }
}

/// `φ[t⃗/y⃗]`, canonicalized.
pub fn reindex_formula(phi: &HornFormula, ts: &[Term]) -> HornFormula {
    HornFormula::from_atoms(phi.atoms.iter().map(|a| a.substitute(ts)))
}

/// `substitute(t, args)` as a free function.
pub fn substitute(t: &Term, args: &[Term]) -> Term {
    t.substitute(args)
}

/// `premise ⊢_ctx conclusion`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Sequent {
    pub name: String,
    pub ctx: Context,
    pub premise: HornFormula,
    pub conclusion: HornFormula,
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Theory {
    pub name: String,
    pub sig: Signature,
    pub axioms: Vec<Sequent>,
}

impl Theory {
    pub fn new(name: &str, sig: Signature) -> Self {
        Self { name: name.to_string(), sig, axioms: Vec::new() }
    }

    /// Adds `premise ⊢ conclusion` after checking it is well-sorted.
    pub fn axiom(
        &mut self,
        name: &str,
        ctx: Context,
        premise: HornFormula,
        conclusion: HornFormula,
    ) -> Result<&mut Self, SyntaxError> {
        self.sig.check_formula(&ctx, &premise)?;
        self.sig.check_formula(&ctx, &conclusion)?;
        self.axioms.push(Sequent { name: name.to_string(), ctx, premise, conclusion });
        Ok(self)
    }

    pub fn validate(&self) -> Result<(), SyntaxError> {
        for s in &self.axioms {
            self.sig.check_formula(&s.ctx, &s.premise)?;
            self.sig.check_formula(&s.ctx, &s.conclusion)?;
        }
        Ok(())
    }

    pub fn show_sequent(&self, s: &Sequent) -> String {
        format!("{} ⊢ {}", self.sig.show_formula(&s.premise), self.sig.show_formula(&s.conclusion))
    }
}

/// An arrow `dom → cod` of the category of contexts: one term in `dom` per
/// sort of `cod`.
#[derive(Clone, Debug, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct CtxArrow {
    pub dom: Context,
    pub cod: Context,
    pub terms: Vec<Term>,
}

impl CtxArrow {
    pub fn identity(ctx: &[SortId]) -> Self {
        Self { dom: ctx.to_vec(), cod: ctx.to_vec(), terms: (0..ctx.len()).map(Term::Var).collect() }
    }

    pub fn check(&self, sig: &Signature) -> Result<(), SyntaxError> {
        if self.terms.len() != self.cod.len() {
            return Err(SyntaxError::Arity { symbol: "term tuple".into(), expected: self.cod.len(), found: self.terms.len() });
        }
        for (k, (t, &s)) in self.terms.iter().zip(&self.cod).enumerate() {
            let found = sig.sort_of(&self.dom, t)?;
            if found != s {
                return Err(SyntaxError::SortMismatch {
                    at: format!("component {}", k + 1),
                    expected: sig.sorts[s.0].clone(),
                    found: sig.sorts[found.0].clone(),
                });
            }
        }
        Ok(())
    }
}

/// `s ∘ t`: substitute `t`'s terms into `s`'s.
pub fn ctx_compose(s: &CtxArrow, t: &CtxArrow) -> Result<CtxArrow, SyntaxError> {
    if s.dom != t.cod {
        return Err(SyntaxError::Morphism(format!("cannot compose: codomain of length {} vs domain of length {}", t.cod.len(), s.dom.len())));
    }
    Ok(CtxArrow { dom: t.dom.clone(), cod: s.cod.clone(), terms: s.terms.iter().map(|x| x.substitute(&t.terms)).collect() })
}

/// The chosen product of two contexts (concatenation) with its projections.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct CtxProduct {
    pub object: Context,
    pub pr1: CtxArrow,
    pub pr2: CtxArrow,
}

pub fn ctx_product(c1: &[SortId], c2: &[SortId]) -> CtxProduct {
    let mut object = c1.to_vec();
    object.extend_from_slice(c2);
    let n = c1.len();
    CtxProduct {
        pr1: CtxArrow { dom: object.clone(), cod: c1.to_vec(), terms: (0..n).map(Term::Var).collect() },
        pr2: CtxArrow { dom: object.clone(), cod: c2.to_vec(), terms: (n..object.len()).map(Term::Var).collect() },
        object,
    }
}

/// `⟨f, g⟩` for arrows with a common domain.
pub fn ctx_pair(f: &CtxArrow, g: &CtxArrow) -> Result<CtxArrow, SyntaxError> {
    if f.dom != g.dom {
        return Err(SyntaxError::Morphism("pairing arrows with different domains".into()));
    }
    let mut cod = f.cod.clone();
    cod.extend_from_slice(&g.cod);
    let mut terms = f.terms.clone();
    terms.extend_from_slice(&g.terms);
    Ok(CtxArrow { dom: f.dom.clone(), cod, terms })
}

/// A translation of theories: sorts to sorts, operations to terms,
/// relations to formulas (both in the context of the symbol's arguments).
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct TheoryMorphism {
    pub name: String,
    pub source: Theory,
    pub target: Theory,
    pub sort_map: Vec<SortId>,
    pub op_map: Vec<Term>,
    pub rel_map: Vec<HornFormula>,
}

impl TheoryMorphism {
    /// The morphism sending every symbol to the same-named symbol of
    /// `target`. Fails if a name is missing.
    pub fn inclusion(name: &str, source: &Theory, target: &Theory) -> Result<Self, SyntaxError> {
        let (s, t) = (&source.sig, &target.sig);
        let sort_map = s
            .sorts
            .iter()
            .map(|n| t.sort(n).ok_or_else(|| SyntaxError::UnknownSort(n.clone())))
            .collect::<Result<Vec<_>, _>>()?;
        let op_map = s
            .ops
            .iter()
            .map(|o| {
                let g = t.op(&o.name).ok_or_else(|| SyntaxError::UnknownOp(o.name.clone()))?;
                Ok(Term::App(g, (0..o.args.len()).map(Term::Var).collect()))
            })
            .collect::<Result<Vec<_>, SyntaxError>>()?;
        let rel_map = s
            .rels
            .iter()
            .map(|r| {
                let g = t.rel(&r.name).ok_or_else(|| SyntaxError::UnknownRel(r.name.clone()))?;
                Ok(HornFormula::atom(Atom::Rel(g, (0..r.args.len()).map(Term::Var).collect())))
            })
            .collect::<Result<Vec<_>, SyntaxError>>()?;
        let m = Self { name: name.to_string(), source: source.clone(), target: target.clone(), sort_map, op_map, rel_map };
        m.check()?;
        Ok(m)
    }

    pub fn identity(t: &Theory) -> Self {
        Self::inclusion("id", t, t).expect("a theory includes into itself")
    }

    pub fn map_ctx(&self, ctx: &[SortId]) -> Context {
        ctx.iter().map(|s| self.sort_map[s.0]).collect()
    }

    /// Well-sortedness of every assigned term and formula.
    pub fn check(&self) -> Result<(), SyntaxError> {
        let (s, t) = (&self.source.sig, &self.target.sig);
        if self.sort_map.len() != s.sorts.len() || self.op_map.len() != s.ops.len() || self.rel_map.len() != s.rels.len() {
            return Err(SyntaxError::Morphism("symbol maps do not cover the source signature".into()));
        }
        if self.sort_map.iter().any(|x| x.0 >= t.sorts.len()) {
            return Err(SyntaxError::Morphism("sort map leaves the target signature".into()));
        }
        for (o, term) in s.ops.iter().zip(&self.op_map) {
            let ctx = self.map_ctx(&o.args);
            let found = t.sort_of(&ctx, term)?;
            if found != self.sort_map[o.result.0] {
                return Err(SyntaxError::SortMismatch {
                    at: format!("image of `{}`", o.name),
                    expected: t.sorts[self.sort_map[o.result.0].0].clone(),
                    found: t.sorts[found.0].clone(),
                });
            }
        }
        for (r, phi) in s.rels.iter().zip(&self.rel_map) {
            t.check_formula(&self.map_ctx(&r.args), phi)?;
        }
        Ok(())
    }
}

pub fn translate_term(m: &TheoryMorphism, t: &Term) -> Term {
    match t {
        Term::Var(i) => Term::Var(*i),
        Term::App(f, args) => {
            let args: Vec<Term> = args.iter().map(|a| translate_term(m, a)).collect();
            m.op_map[f.0].substitute(&args)
        }
    }
}

pub fn translate(m: &TheoryMorphism, phi: &HornFormula) -> HornFormula {
    let mut atoms = Vec::new();
    for a in phi.atoms() {
        match a {
            Atom::Eq(l, r) => atoms.push(Atom::Eq(translate_term(m, l), translate_term(m, r))),
            Atom::Rel(r, ts) => {
                let args: Vec<Term> = ts.iter().map(|t| translate_term(m, t)).collect();
                atoms.extend(reindex_formula(&m.rel_map[r.0], &args).atoms().iter().cloned());
            }
        }
    }
    HornFormula::from_atoms(atoms)
}

#[cfg(test)]
mod tests {
    use super::*;
    use proptest::prelude::*;

    fn monoid_sig() -> (Signature, OpId, OpId) {
        let mut s = Signature::single_sorted();
        let e = s.add_op("e", &[], SortId(0)).unwrap();
        let m = s.add_op("*", &[SortId(0), SortId(0)], SortId(0)).unwrap();
        (s, e, m)
    }

    fn x(i: usize) -> Term {
        Term::Var(i)
    }

    #[test]
    fn substitution_examples() {
        let (s, e, m) = monoid_sig();
        let c = Term::constant(e);
        assert_eq!(x(0).substitute(&[c.clone()]), c);
        let t = Term::app(m, vec![x(0), x(1)]);
        let r = t.substitute(&[c.clone(), x(0)]);
        assert_eq!(s.show_term(&r), "e * x1");
    }

    #[test]
    fn heights_and_order() {
        let (s, e, m) = monoid_sig();
        let c = Term::constant(e);
        assert_eq!(x(0).height(), 0);
        assert_eq!(c.height(), 1);
        let t = Term::app(m, vec![c.clone(), x(0)]);
        assert_eq!(t.height(), 2);
        assert_eq!(s.cmp_terms(&c, &t), Ordering::Less);
        assert_eq!(s.cmp_terms(&x(1), &c), Ordering::Less);
        let u = Term::app(m, vec![x(0), c.clone()]);
        assert_eq!(s.cmp_terms(&u, &t), Ordering::Less);
    }

    #[test]
    fn infix_printing_parenthesizes_nested() {
        let (s, e, m) = monoid_sig();
        let t = Term::app(m, vec![Term::app(m, vec![x(0), x(1)]), Term::constant(e)]);
        assert_eq!(s.show_term(&t), "(x1 * x2) * e");
    }

    #[test]
    fn reindex_examples() {
        let (mut s, e, m) = monoid_sig();
        let r = s.add_rel("R", &[SortId(0)]).unwrap();
        assert!(reindex_formula(&HornFormula::top(), &[x(0)]).is_top());
        let eq = HornFormula::eq(x(0), x(1));
        let t1 = Term::app(m, vec![x(0), x(0)]);
        let t2 = Term::constant(e);
        assert_eq!(reindex_formula(&eq, &[t1.clone(), t2.clone()]), HornFormula::eq(t1, t2));
        let ra = HornFormula::atom(Atom::Rel(r, vec![x(0)]));
        assert_eq!(reindex_formula(&ra, &[x(1)]), HornFormula::atom(Atom::Rel(r, vec![x(1)])));
        let _ = s;
    }

    #[test]
    fn context_products() {
        let ctx = vec![SortId(0)];
        let p = ctx_product(&ctx, &ctx);
        let id2 = CtxArrow::identity(&p.object);
        let paired = ctx_pair(&p.pr1, &p.pr2).unwrap();
        assert_eq!(paired, id2);
        let f = CtxArrow { dom: ctx.clone(), cod: ctx.clone(), terms: vec![x(0)] };
        let h = ctx_pair(&f, &f).unwrap();
        assert_eq!(ctx_compose(&p.pr1, &h).unwrap(), f);
        assert_eq!(ctx_compose(&p.pr2, &h).unwrap(), f);
        assert!(ctx_compose(&p.pr1, &f).is_err());
    }

    #[test]
    fn ill_sorted_terms_are_rejected() {
        let mut s = Signature::new();
        let a = s.add_sort("a").unwrap();
        let b = s.add_sort("b").unwrap();
        let f = s.add_op("f", &[a], b).unwrap();
        assert_eq!(s.sort_of(&[a], &Term::app(f, vec![x(0)])), Ok(b));
        assert!(matches!(s.sort_of(&[b], &Term::app(f, vec![x(0)])), Err(SyntaxError::SortMismatch { .. })));
        assert!(matches!(s.sort_of(&[a], &Term::app(f, vec![])), Err(SyntaxError::Arity { .. })));
        assert!(matches!(s.sort_of(&[], &x(0)), Err(SyntaxError::VarOutOfRange { .. })));
    }

    /// Random terms over the monoid signature in `vars` variables.
    fn term_strategy(vars: usize) -> impl Strategy<Value = Term> {
        let leaf = prop_oneof![(0..vars).prop_map(Term::Var), Just(Term::constant(OpId(0)))];
        leaf.prop_recursive(3, 12, 2, |inner| {
            (inner.clone(), inner).prop_map(|(a, b)| Term::App(OpId(1), vec![a, b]))
        })
    }

    fn tuple(n: usize, vars: usize) -> impl Strategy<Value = Vec<Term>> {
        proptest::collection::vec(term_strategy(vars), n)
    }

    proptest! {
        #[test]
        fn substitution_composes(t in term_strategy(2), u in tuple(2, 3), v in tuple(3, 2)) {
            let lhs = t.substitute(&u).substitute(&v);
            let inner: Vec<Term> = u.iter().map(|ui| ui.substitute(&v)).collect();
            prop_assert_eq!(lhs, t.substitute(&inner));
        }

        #[test]
        fn ctx_category_laws(a in tuple(2, 2), b in tuple(2, 2), c in tuple(2, 2)) {
            let ctx = vec![SortId(0), SortId(0)];
            let arr = |ts: Vec<Term>| CtxArrow { dom: ctx.clone(), cod: ctx.clone(), terms: ts };
            let (f, g, h) = (arr(a), arr(b), arr(c));
            let id = CtxArrow::identity(&ctx);
            prop_assert_eq!(ctx_compose(&f, &id).unwrap(), f.clone());
            prop_assert_eq!(ctx_compose(&id, &f).unwrap(), f.clone());
            let l = ctx_compose(&ctx_compose(&h, &g).unwrap(), &f).unwrap();
            let r = ctx_compose(&h, &ctx_compose(&g, &f).unwrap()).unwrap();
            prop_assert_eq!(l, r);
        }

        #[test]
        fn canonical_is_idempotent(ts in tuple(4, 2)) {
            let phi = HornFormula::from_atoms(vec![
                Atom::Eq(ts[0].clone(), ts[1].clone()),
                Atom::Eq(ts[2].clone(), ts[3].clone()),
                Atom::Eq(ts[0].clone(), ts[1].clone()),
            ]);
            prop_assert_eq!(phi.canonical(), phi.clone());
            prop_assert_eq!(phi.canonical().canonical(), phi.canonical());
        }

        #[test]
        fn translation_commutes_with_reindexing(l in term_strategy(2), r in term_strategy(2), ts in tuple(2, 3)) {
            // monoid → monoid sending x*y to y*x (the opposite monoid)
            let (sig, _, _) = monoid_sig();
            let th = Theory::new("monoid", sig);
            let mut m = TheoryMorphism::identity(&th);
            m.op_map[1] = Term::App(OpId(1), vec![x(1), x(0)]);
            let phi = HornFormula::eq(l, r);
            let lhs = translate(&m, &reindex_formula(&phi, &ts));
            let tts: Vec<Term> = ts.iter().map(|t| translate_term(&m, t)).collect();
            let rhs = reindex_formula(&translate(&m, &phi), &tts);
            prop_assert_eq!(lhs, rhs);
        }
    }
}
