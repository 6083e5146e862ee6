//! Bounded provability for Horn theories with equality.
//!
//! A [`Congruence`] is an e-graph over ground terms built from generator
//! constants (frozen context variables, or one constant per model element).
//! Generators are written as variables: `Var(i)` is generator `i`.
//!
//! [`saturate`] alternates two steps: fire every sequent of the theory to a
//! fixpoint (a sequent fires only on instances whose conclusion terms already
//! exist), then expand by applying every operation to every tuple of
//! existing classes. After `k` expansions every term of height `≤ k` over the
//! generators is represented. When an expansion adds nothing the e-graph is a
//! finite model of the theory and the saturation is closed.

use alloc::collections::{BTreeMap, BTreeSet};
use alloc::format;
use alloc::string::{String, ToString};
use alloc::vec;
use alloc::vec::Vec;
use core::cmp::Ordering;
use core::fmt;

use crate::syntax::{Atom, Context, HornFormula, OpId, RelId, Sequent, Signature, SortId, Term, Theory};

#[derive(Clone, Copy, Debug, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct ClassId(pub usize);

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct Budget {
    /// Number of expansion rounds.
    pub depth: usize,
    /// Cap on e-nodes plus relation facts.
    pub max_atoms: usize,
    /// Cap on union operations.
    pub max_unions: usize,
}

impl Default for Budget {
    fn default() -> Self {
        Self { depth: 4, max_atoms: 50_000, max_unions: 1_000_000 }
    }
}

impl Budget {
    pub fn with_depth(depth: usize) -> Self {
        Self { depth, ..Self::default() }
    }
}

/// One rule firing: the sequent, the instantiation of its context and the
/// conclusion atoms it produced (all over generators).
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct TraceStep {
    pub rule: String,
    pub instantiation: Vec<Term>,
    pub fired: Vec<Atom>,
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub enum ProofStatus {
    Proved { trace: Vec<TraceStep> },
    Unknown { budget: Budget, reason: String },
}

impl ProofStatus {
    pub fn is_proved(&self) -> bool {
        matches!(self, ProofStatus::Proved { .. })
    }
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub enum ProverError {
    OutsideUniverse(String),
    IllSorted(String),
}

impl fmt::Display for ProverError {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            ProverError::OutsideUniverse(t) => write!(f, "term {t} is outside the universe"),
            ProverError::IllSorted(t) => write!(f, "ill-sorted input: {t}"),
        }
    }
}

#[cfg(feature = "std")]
impl std::error::Error for ProverError {}

#[derive(Clone, Debug, PartialEq, Eq, PartialOrd, Ord)]
enum NodeKey {
    Gen(usize),
    App(OpId, Vec<ClassId>),
}

type Subst = Vec<Option<ClassId>>;

#[derive(Clone, Debug)]
pub struct Congruence {
    sig: Signature,
    generators: Context,
    parent: Vec<usize>,
    class_sort: Vec<SortId>,
    witness: Vec<Term>,
    nodes: Vec<(NodeKey, ClassId)>,
    hashcons: BTreeMap<NodeKey, ClassId>,
    facts: BTreeSet<(RelId, Vec<ClassId>)>,
    unions: usize,
    by_class_op: BTreeMap<(ClassId, OpId), Vec<Vec<ClassId>>>,
    by_op: BTreeMap<OpId, Vec<(ClassId, Vec<ClassId>)>>,
    index_fresh: bool,
}

impl Congruence {
    /// An e-graph containing exactly the generators.
    pub fn new(sig: &Signature, generators: &[SortId]) -> Self {
        let mut c = Self {
            sig: sig.clone(),
            generators: generators.to_vec(),
            parent: Vec::new(),
            class_sort: Vec::new(),
            witness: Vec::new(),
            nodes: Vec::new(),
            hashcons: BTreeMap::new(),
            facts: BTreeSet::new(),
            unions: 0,
            by_class_op: BTreeMap::new(),
            by_op: BTreeMap::new(),
            index_fresh: false,
        };
        for (i, &s) in generators.iter().enumerate() {
            c.new_class(NodeKey::Gen(i), s, Term::Var(i));
        }
        c
    }

    pub fn signature(&self) -> &Signature {
        &self.sig
    }

    pub fn generators(&self) -> &[SortId] {
        &self.generators
    }

    fn new_class(&mut self, key: NodeKey, sort: SortId, witness: Term) -> ClassId {
        let id = ClassId(self.parent.len());
        self.parent.push(id.0);
        self.class_sort.push(sort);
        self.witness.push(witness);
        self.nodes.push((key.clone(), id));
        self.hashcons.insert(key, id);
        self.index_fresh = false;
        id
    }

    pub fn find(&self, c: ClassId) -> ClassId {
        let mut x = c.0;
        while self.parent[x] != x {
            x = self.parent[x];
        }
        ClassId(x)
    }

    fn find_compress(&mut self, c: ClassId) -> ClassId {
        let root = self.find(c);
        let mut x = c.0;
        while self.parent[x] != root.0 {
            let next = self.parent[x];
            self.parent[x] = root.0;
            x = next;
        }
        root
    }

    pub fn generator(&self, i: usize) -> ClassId {
        self.find(ClassId(i))
    }

    pub fn sort_of_class(&self, c: ClassId) -> SortId {
        self.class_sort[self.find(c).0]
    }

    /// A term in the class, fixed when the class was created.
    pub fn witness(&self, c: ClassId) -> &Term {
        &self.witness[self.find(c).0]
    }

    pub fn num_nodes(&self) -> usize {
        self.nodes.len()
    }

    pub fn num_unions(&self) -> usize {
        self.unions
    }

    pub fn num_facts(&self) -> usize {
        self.facts.len()
    }

    /// `f(args)` if that application is present.
    pub fn apply(&self, f: OpId, args: &[ClassId]) -> Option<ClassId> {
        let key = NodeKey::App(f, args.iter().map(|&a| self.find(a)).collect());
        self.hashcons.get(&key).map(|&c| self.find(c))
    }

    /// Adds `f(args)` (creating a class if needed).
    pub fn add_app(&mut self, f: OpId, args: &[ClassId]) -> ClassId {
        let args: Vec<ClassId> = args.iter().map(|&a| self.find(a)).collect();
        let key = NodeKey::App(f, args.clone());
        if let Some(&c) = self.hashcons.get(&key) {
            return self.find(c);
        }
        let witness = Term::App(f, args.iter().map(|&a| self.witness[a.0].clone()).collect());
        let sort = self.sig.op_decl(f).result;
        self.new_class(key, sort, witness)
    }

    /// Adds a ground term (variables are generators) with all its subterms.
    pub fn add_term(&mut self, t: &Term) -> ClassId {
        match t {
            Term::Var(i) => self.generator(*i),
            Term::App(f, args) => {
                let cs: Vec<ClassId> = args.iter().map(|a| self.add_term(a)).collect();
                self.add_app(*f, &cs)
            }
        }
    }

    pub fn lookup(&self, t: &Term) -> Option<ClassId> {
        match t {
            Term::Var(i) => (*i < self.generators.len()).then(|| self.generator(*i)),
            Term::App(f, args) => {
                let cs = args.iter().map(|a| self.lookup(a)).collect::<Option<Vec<_>>>()?;
                self.apply(*f, &cs)
            }
        }
    }

    fn lookup_subst(&self, t: &Term, s: &Subst) -> Option<ClassId> {
        match t {
            Term::Var(i) => s[*i].map(|c| self.find(c)),
            Term::App(f, args) => {
                let cs = args.iter().map(|a| self.lookup_subst(a, s)).collect::<Option<Vec<_>>>()?;
                self.apply(*f, &cs)
            }
        }
    }

    /// Merges two classes; returns whether they were distinct. Call
    /// [`Congruence::rebuild`] afterwards to restore congruence.
    pub fn union(&mut self, a: ClassId, b: ClassId) -> bool {
        let (a, b) = (self.find_compress(a), self.find_compress(b));
        if a == b {
            return false;
        }
        // the older class stays the root
        let (root, child) = if a.0 < b.0 { (a, b) } else { (b, a) };
        self.parent[child.0] = root.0;
        self.unions += 1;
        self.index_fresh = false;
        true
    }

    /// Restores the congruence invariant and canonicalizes facts.
    pub fn rebuild(&mut self) {
        loop {
            let mut pending = Vec::new();
            let mut table: BTreeMap<NodeKey, ClassId> = BTreeMap::new();
            for i in 0..self.nodes.len() {
                let key = self.canonical_key(&self.nodes[i].0);
                let cls = self.find(self.nodes[i].1);
                match table.get(&key) {
                    Some(&other) if self.find(other) != cls => pending.push((other, cls)),
                    Some(_) => {}
                    None => {
                        table.insert(key, cls);
                    }
                }
            }
            self.hashcons = table;
            if pending.is_empty() {
                break;
            }
            for (a, b) in pending {
                self.union(a, b);
            }
        }
        let facts = core::mem::take(&mut self.facts);
        self.facts = facts.into_iter().map(|(r, args)| (r, args.into_iter().map(|a| self.find(a)).collect())).collect();
    }

    fn canonical_key(&self, k: &NodeKey) -> NodeKey {
        match k {
            NodeKey::Gen(i) => NodeKey::Gen(*i),
            NodeKey::App(f, args) => NodeKey::App(*f, args.iter().map(|&a| self.find(a)).collect()),
        }
    }

    pub fn add_fact(&mut self, r: RelId, args: &[ClassId]) -> bool {
        let args: Vec<ClassId> = args.iter().map(|&a| self.find(a)).collect();
        let new = self.facts.insert((r, args));
        if new {
            self.index_fresh = false;
        }
        new
    }

    pub fn has_fact(&self, r: RelId, args: &[ClassId]) -> bool {
        let args: Vec<ClassId> = args.iter().map(|&a| self.find(a)).collect();
        self.facts.contains(&(r, args))
    }

    /// Relation facts, canonical after [`Congruence::rebuild`].
    pub fn facts(&self) -> impl Iterator<Item = &(RelId, Vec<ClassId>)> {
        self.facts.iter()
    }

    /// Adds the atom's terms and asserts it.
    pub fn assert_atom(&mut self, a: &Atom) {
        match a {
            Atom::Eq(l, r) => {
                let (x, y) = (self.add_term(l), self.add_term(r));
                self.union(x, y);
            }
            Atom::Rel(r, ts) => {
                let cs: Vec<ClassId> = ts.iter().map(|t| self.add_term(t)).collect();
                self.add_fact(*r, &cs);
            }
        }
    }

    /// Whether the atom holds among present terms (absent terms: false).
    pub fn holds(&self, a: &Atom) -> bool {
        match a {
            Atom::Eq(l, r) => matches!((self.lookup(l), self.lookup(r)), (Some(x), Some(y)) if x == y),
            Atom::Rel(r, ts) => match ts.iter().map(|t| self.lookup(t)).collect::<Option<Vec<_>>>() {
                Some(cs) => self.has_fact(*r, &cs),
                None => false,
            },
        }
    }

    pub fn holds_formula(&self, phi: &HornFormula) -> bool {
        phi.atoms().iter().all(|a| self.holds(a))
    }

    pub fn same(&self, s: &Term, t: &Term) -> bool {
        self.holds(&Atom::Eq(s.clone(), t.clone()))
    }

    /// Root classes in creation order.
    pub fn roots(&self) -> Vec<ClassId> {
        (0..self.parent.len()).filter(|&i| self.parent[i] == i).map(ClassId).collect()
    }

    pub fn num_classes(&self) -> usize {
        self.roots().len()
    }

    pub fn roots_of_sort(&self, s: SortId) -> Vec<ClassId> {
        self.roots().into_iter().filter(|c| self.class_sort[c.0] == s).collect()
    }

    /// The least term (height, then symbol name, then arguments) of every class.
    pub fn representatives(&self) -> BTreeMap<ClassId, Term> {
        let mut rep: BTreeMap<ClassId, Term> = BTreeMap::new();
        loop {
            let mut changed = false;
            for (key, c) in &self.nodes {
                let cls = self.find(*c);
                let cand = match key {
                    NodeKey::Gen(i) => Some(Term::Var(*i)),
                    NodeKey::App(f, args) => args
                        .iter()
                        .map(|a| rep.get(&self.find(*a)).cloned())
                        .collect::<Option<Vec<_>>>()
                        .map(|xs| Term::App(*f, xs)),
                };
                if let Some(t) = cand {
                    let better = match rep.get(&cls) {
                        None => true,
                        Some(old) => self.sig.cmp_terms(&t, old) == Ordering::Less,
                    };
                    if better {
                        rep.insert(cls, t);
                        changed = true;
                    }
                }
            }
            if !changed {
                return rep;
            }
        }
    }

    /// Root classes ordered by representative.
    pub fn classes(&self) -> Vec<(ClassId, Term)> {
        let mut v: Vec<(ClassId, Term)> = self.representatives().into_iter().collect();
        v.sort_by(|a, b| self.sig.cmp_terms(&a.1, &b.1));
        v
    }

    fn refresh_index(&mut self) {
        if self.index_fresh {
            return;
        }
        self.by_class_op.clear();
        self.by_op.clear();
        let mut seen = BTreeSet::new();
        for (key, c) in &self.nodes {
            if let NodeKey::App(f, args) = self.canonical_key(key) {
                let cls = self.find(*c);
                if seen.insert((f, args.clone())) {
                    self.by_class_op.entry((cls, f)).or_default().push(args.clone());
                    self.by_op.entry(f).or_default().push((cls, args));
                }
            }
        }
        self.index_fresh = true;
    }

    /// Number of `f(c⃗)` applications missing for root tuples `c⃗`.
    pub fn missing_apps(&self) -> usize {
        let mut missing = 0;
        self.for_each_root_tuple(|this, f, args| {
            if this.apply(f, args).is_none() {
                missing += 1;
            }
        });
        missing
    }

    fn app_tuples(&self) -> usize {
        let mut by_sort = BTreeMap::new();
        for c in self.roots() {
            *by_sort.entry(self.class_sort[c.0]).or_insert(0usize) += 1;
        }
        self.sig
            .ops
            .iter()
            .map(|o| o.args.iter().map(|s| by_sort.get(s).copied().unwrap_or(0)).fold(1usize, |a, b| a.saturating_mul(b)))
            .fold(0usize, |a, b| a.saturating_add(b))
    }

    fn for_each_root_tuple(&self, mut k: impl FnMut(&Self, OpId, &[ClassId])) {
        let roots = self.roots();
        for f in self.sig.op_ids() {
            let pools: Vec<Vec<ClassId>> = self
                .sig
                .op_decl(f)
                .args
                .iter()
                .map(|&s| roots.iter().copied().filter(|c| self.class_sort[c.0] == s).collect())
                .collect();
            if pools.iter().any(|p| p.is_empty()) {
                continue;
            }
            let mut idx = vec![0; pools.len()];
            loop {
                let args: Vec<ClassId> = idx.iter().zip(&pools).map(|(&i, p)| p[i]).collect();
                k(self, f, &args);
                let mut pos = pools.len();
                loop {
                    if pos == 0 {
                        break;
                    }
                    pos -= 1;
                    idx[pos] += 1;
                    if idx[pos] < pools[pos].len() {
                        break;
                    }
                    idx[pos] = 0;
                }
                if idx.iter().all(|&i| i == 0) {
                    break;
                }
            }
        }
    }

    /// Applies every operation to every tuple of root classes; returns the
    /// number of new classes.
    fn expand(&mut self) -> usize {
        let mut todo = Vec::new();
        self.for_each_root_tuple(|this, f, args| {
            if this.apply(f, args).is_none() {
                todo.push((f, args.to_vec()));
            }
        });
        let n = todo.len();
        for (f, args) in todo {
            self.add_app(f, &args);
        }
        n
    }

    fn atoms_used(&self) -> usize {
        self.nodes.len() + self.facts.len()
    }

    // ---- e-matching ----

    fn match_term(&self, p: &Term, c: ClassId, s: Subst, out: &mut Vec<Subst>) {
        match p {
            Term::Var(i) => match s[*i] {
                Some(b) if self.find(b) != c => {}
                Some(_) => out.push(s),
                None => {
                    let mut s = s;
                    s[*i] = Some(c);
                    out.push(s);
                }
            },
            Term::App(f, args) => {
                if let Some(list) = self.by_class_op.get(&(c, *f)) {
                    for children in list {
                        self.match_args(args, children, s.clone(), out);
                    }
                }
            }
        }
    }

    fn match_args(&self, ps: &[Term], cs: &[ClassId], s: Subst, out: &mut Vec<Subst>) {
        let mut current = vec![s];
        for (p, &c) in ps.iter().zip(cs) {
            let mut next = Vec::new();
            for s in current {
                self.match_term(p, self.find(c), s, &mut next);
            }
            if next.is_empty() {
                return;
            }
            current = next;
        }
        out.extend(current);
    }

    fn search(&self, ctx: &[SortId], goals: &[Goal], s: Subst, out: &mut Vec<Subst>) {
        let Some((g, rest)) = goals.split_first() else {
            out.push(s);
            return;
        };
        let mut next = Vec::new();
        match g {
            Goal::Fact(r, ts) => {
                for (fr, args) in self.facts.range((*r, Vec::new())..) {
                    if fr != r {
                        break;
                    }
                    self.match_args(ts, args, s.clone(), &mut next);
                }
            }
            Goal::Exists(t) => {
                if t_bound(t, &s) {
                    if self.lookup_subst(t, &s).is_some() {
                        next.push(s);
                    }
                } else {
                    match t {
                        Term::Var(i) => {
                            for c in self.roots_of_sort(ctx[*i]) {
                                let mut s2 = s.clone();
                                s2[*i] = Some(c);
                                next.push(s2);
                            }
                        }
                        Term::App(f, args) => {
                            if let Some(list) = self.by_op.get(f) {
                                for (_, children) in list {
                                    self.match_args(args, children, s.clone(), &mut next);
                                }
                            }
                        }
                    }
                }
            }
            Goal::Equal(l, r) => {
                if let (Some(a), Some(b)) = (self.lookup_subst(l, &s), self.lookup_subst(r, &s)) {
                    if a == b {
                        next.push(s);
                    }
                }
            }
        }
        for s in next {
            self.search(ctx, rest, s, out);
        }
    }
}

fn t_bound(t: &Term, s: &Subst) -> bool {
    match t {
        Term::Var(i) => s[*i].is_some(),
        Term::App(_, args) => args.iter().all(|a| t_bound(a, s)),
    }
}

enum Goal {
    Fact(RelId, Vec<Term>),
    Exists(Term),
    Equal(Term, Term),
}

/// Matching plan for a sequent: premise facts, premise equations, the
/// conclusion's terms, then every context variable.
fn plan(seq: &Sequent) -> Vec<Goal> {
    let mut goals = Vec::new();
    for a in seq.premise.atoms() {
        if let Atom::Rel(r, ts) = a {
            goals.push(Goal::Fact(*r, ts.clone()));
        }
    }
    for a in seq.premise.atoms() {
        if let Atom::Eq(l, r) = a {
            goals.push(Goal::Exists(l.clone()));
            goals.push(Goal::Exists(r.clone()));
            goals.push(Goal::Equal(l.clone(), r.clone()));
        }
    }
    let mut concl: Vec<&Term> = seq.conclusion.atoms().iter().flat_map(|a| a.terms()).collect();
    concl.sort_by_key(|t| core::cmp::Reverse(t.size()));
    for t in concl {
        goals.push(Goal::Exists(t.clone()));
    }
    for i in 0..seq.ctx.len() {
        goals.push(Goal::Exists(Term::Var(i)));
    }
    goals
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct SaturationOutcome {
    /// Expansion rounds performed.
    pub rounds: usize,
    /// Rules at fixpoint and every operation total on classes.
    pub closed: bool,
    /// Set when a budget cap stopped the run.
    pub exhausted: Option<String>,
    pub goal_met: bool,
    pub trace: Vec<TraceStep>,
}

enum FireResult {
    Ok,
    Exhausted(String),
}

fn fire_to_fixpoint(theory: &Theory, cong: &mut Congruence, budget: &Budget, trace: &mut Vec<TraceStep>) -> FireResult {
    let plans: Vec<Vec<Goal>> = theory.axioms.iter().map(plan).collect();
    loop {
        cong.rebuild();
        cong.refresh_index();
        let mut actions: Vec<(usize, Subst, Vec<Action>)> = Vec::new();
        for (k, seq) in theory.axioms.iter().enumerate() {
            let mut matches = Vec::new();
            cong.search(&seq.ctx, &plans[k], vec![None; seq.ctx.len()], &mut matches);
            for s in matches {
                let mut acts = Vec::new();
                for a in seq.conclusion.atoms() {
                    match a {
                        Atom::Eq(l, r) => {
                            let (x, y) = (cong.lookup_subst(l, &s).unwrap(), cong.lookup_subst(r, &s).unwrap());
                            if x != y {
                                acts.push(Action::Union(x, y));
                            }
                        }
                        Atom::Rel(r, ts) => {
                            let cs: Vec<ClassId> = ts.iter().map(|t| cong.lookup_subst(t, &s).unwrap()).collect();
                            if !cong.has_fact(*r, &cs) {
                                acts.push(Action::Fact(*r, cs));
                            }
                        }
                    }
                }
                if !acts.is_empty() {
                    actions.push((k, s, acts));
                }
            }
        }
        if actions.is_empty() {
            return FireResult::Ok;
        }
        for (k, s, acts) in actions {
            let mut changed = false;
            for act in acts {
                changed |= match act {
                    Action::Union(x, y) => cong.union(x, y),
                    Action::Fact(r, cs) => cong.add_fact(r, &cs),
                };
            }
            if changed {
                let seq = &theory.axioms[k];
                let inst: Vec<Term> = s.iter().map(|c| cong.witness[c.unwrap().0].clone()).collect();
                let fired = seq.conclusion.atoms().iter().map(|a| a.substitute(&inst)).collect();
                trace.push(TraceStep { rule: seq.name.clone(), instantiation: inst, fired });
            }
        }
        if cong.unions > budget.max_unions {
            return FireResult::Exhausted(format!("more than {} unions", budget.max_unions));
        }
        if cong.atoms_used() > budget.max_atoms {
            return FireResult::Exhausted(format!("more than {} atoms", budget.max_atoms));
        }
    }
}

enum Action {
    Union(ClassId, ClassId),
    Fact(RelId, Vec<ClassId>),
}

/// Saturates `cong` under `theory` within `budget`, stopping early once
/// `goal` holds.
pub fn saturate(
    theory: &Theory,
    cong: &mut Congruence,
    budget: &Budget,
    goal: Option<&dyn Fn(&Congruence) -> bool>,
) -> SaturationOutcome {
    let mut trace = Vec::new();
    let mut out = SaturationOutcome { rounds: 0, closed: false, exhausted: None, goal_met: false, trace: Vec::new() };
    let met = |c: &Congruence| goal.is_some_and(|g| g(c));
    loop {
        if let FireResult::Exhausted(why) = fire_to_fixpoint(theory, cong, budget, &mut trace) {
            out.exhausted = Some(why);
            break;
        }
        if met(cong) {
            out.goal_met = true;
            break;
        }
        if cong.missing_apps() == 0 {
            out.closed = true;
            break;
        }
        if out.rounds == budget.depth {
            break;
        }
        let needed = cong.app_tuples();
        if cong.atoms_used().saturating_add(needed) > budget.max_atoms {
            out.exhausted = Some(format!("expansion would exceed {} atoms", budget.max_atoms));
            break;
        }
        cong.expand();
        out.rounds += 1;
    }
    cong.rebuild();
    out.trace = trace;
    out
}

/// Saturation of the generators of `u` plus `hypotheses` (ground atoms over
/// `u`'s generators), with `u`'s depth as the number of expansion rounds.
pub fn saturate_universe(
    theory: &Theory,
    u: &TermUniverse,
    hypotheses: &[Atom],
    budget: &Budget,
) -> (Congruence, SaturationOutcome) {
    let mut cong = Congruence::new(&u.sig, &u.generators);
    for a in hypotheses {
        cong.assert_atom(a);
    }
    let b = Budget { depth: u.depth, ..*budget };
    let out = saturate(theory, &mut cong, &b, None);
    (cong, out)
}

/// `α ⊢_ctx β` within `budget`. `Proved` is sound; `Unknown` is not a refutation.
pub fn entails(theory: &Theory, ctx: &[SortId], alpha: &HornFormula, beta: &HornFormula, budget: &Budget) -> ProofStatus {
    let mut cong = Congruence::new(&theory.sig, ctx);
    for a in alpha.atoms() {
        cong.assert_atom(a);
    }
    for a in beta.atoms() {
        for t in a.terms() {
            cong.add_term(t);
        }
    }
    let goal = |c: &Congruence| c.holds_formula(beta);
    let out = saturate(theory, &mut cong, budget, Some(&goal));
    if out.goal_met || cong.holds_formula(beta) {
        ProofStatus::Proved { trace: out.trace }
    } else {
        let reason = match out.exhausted {
            Some(why) => why,
            None if out.closed => "saturation closed without deriving the goal".to_string(),
            None => format!("not derived within {} expansion rounds", budget.depth),
        };
        ProofStatus::Unknown { budget: *budget, reason }
    }
}

/// `α ≤ β` in the fiber over `ctx`.
pub fn fiber_leq(theory: &Theory, ctx: &[SortId], alpha: &HornFormula, beta: &HornFormula, budget: &Budget) -> ProofStatus {
    entails(theory, ctx, alpha, beta, budget)
}

/// `α = β` in the fiber: both directions proved.
pub fn fiber_eq(theory: &Theory, ctx: &[SortId], alpha: &HornFormula, beta: &HornFormula, budget: &Budget) -> ProofStatus {
    match entails(theory, ctx, alpha, beta, budget) {
        ProofStatus::Proved { trace: mut t1 } => match entails(theory, ctx, beta, alpha, budget) {
            ProofStatus::Proved { trace: t2 } => {
                t1.extend(t2);
                ProofStatus::Proved { trace: t1 }
            }
            unknown => unknown,
        },
        unknown => unknown,
    }
}

/// Re-checks a derivation: every step's premise must hold when it is
/// replayed, and the goal must hold at the end.
pub fn replay(theory: &Theory, ctx: &[SortId], alpha: &HornFormula, beta: &HornFormula, trace: &[TraceStep]) -> bool {
    let mut cong = Congruence::new(&theory.sig, ctx);
    for a in alpha.atoms() {
        cong.assert_atom(a);
    }
    cong.rebuild();
    for step in trace {
        let Some(seq) = theory.axioms.iter().find(|s| s.name == step.rule) else {
            return false;
        };
        if step.instantiation.len() != seq.ctx.len() {
            return false;
        }
        for t in &step.instantiation {
            cong.add_term(t);
        }
        for a in seq.premise.atoms() {
            let inst = a.substitute(&step.instantiation);
            for t in inst.terms() {
                cong.add_term(t);
            }
        }
        cong.rebuild();
        let premise_ok = seq.premise.atoms().iter().all(|a| cong.holds(&a.substitute(&step.instantiation)));
        if !premise_ok {
            return false;
        }
        for a in seq.conclusion.atoms() {
            cong.assert_atom(&a.substitute(&step.instantiation));
        }
        cong.rebuild();
    }
    for a in beta.atoms() {
        for t in a.terms() {
            cong.add_term(t);
        }
    }
    cong.rebuild();
    cong.holds_formula(beta)
}

/// All well-sorted terms of height at most `depth` over the generators.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct TermUniverse {
    pub sig: Signature,
    pub generators: Context,
    pub depth: usize,
}

impl TermUniverse {
    pub fn new(sig: &Signature, generators: &[SortId], depth: usize) -> Self {
        Self { sig: sig.clone(), generators: generators.to_vec(), depth }
    }

    /// The terms, grouped by height then in the canonical order.
    pub fn terms(&self) -> Vec<Term> {
        let mut all: Vec<(Term, SortId)> = self.generators.iter().enumerate().map(|(i, &s)| (Term::Var(i), s)).collect();
        let mut seen: BTreeSet<Term> = all.iter().map(|(t, _)| t.clone()).collect();
        for _ in 0..self.depth {
            let mut fresh = Vec::new();
            for f in self.sig.op_ids() {
                let decl = self.sig.op_decl(f);
                let pools: Vec<Vec<&Term>> =
                    decl.args.iter().map(|&s| all.iter().filter(|(_, ts)| *ts == s).map(|(t, _)| t).collect()).collect();
                let mut tuples: Vec<Vec<Term>> = vec![Vec::new()];
                for pool in &pools {
                    let mut next = Vec::new();
                    for tuple in &tuples {
                        for &t in pool {
                            let mut v = tuple.clone();
                            v.push(t.clone());
                            next.push(v);
                        }
                    }
                    tuples = next;
                }
                for args in tuples {
                    let t = Term::App(f, args);
                    if seen.insert(t.clone()) {
                        fresh.push((t, decl.result));
                    }
                }
            }
            if fresh.is_empty() {
                break;
            }
            all.extend(fresh);
        }
        let mut out: Vec<Term> = all.into_iter().map(|(t, _)| t).collect();
        out.sort_by(|a, b| self.sig.cmp_terms(a, b));
        out
    }

    pub fn contains(&self, t: &Term) -> bool {
        t.height() <= self.depth && self.sig.sort_of(&self.generators, t).is_ok()
    }
}

/// The smallest congruence on the universe containing `equations`, with the
/// atom set closed under it.
pub fn congruence_closure(u: &TermUniverse, equations: &[(Term, Term)], atoms: &[Atom]) -> Result<Congruence, ProverError> {
    let mut cong = Congruence::new(&u.sig, &u.generators);
    for t in u.terms() {
        cong.add_term(&t);
    }
    let check = |t: &Term| {
        if u.contains(t) {
            Ok(())
        } else {
            Err(ProverError::OutsideUniverse(u.sig.show_term(t)))
        }
    };
    for (l, r) in equations {
        check(l)?;
        check(r)?;
        if u.sig.sort_of(&u.generators, l) != u.sig.sort_of(&u.generators, r) {
            return Err(ProverError::IllSorted(format!("{} = {}", u.sig.show_term(l), u.sig.show_term(r))));
        }
        let (a, b) = (cong.lookup(l).unwrap(), cong.lookup(r).unwrap());
        cong.union(a, b);
    }
    for a in atoms {
        for t in a.terms() {
            check(t)?;
        }
        cong.assert_atom(a);
    }
    cong.rebuild();
    Ok(cong)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::corpus;
    use proptest::prelude::*;

    fn x(i: usize) -> Term {
        Term::Var(i)
    }

    fn unary_sig() -> Signature {
        let mut s = Signature::single_sorted();
        s.add_op("f", &[SortId(0)], SortId(0)).unwrap();
        s
    }

    #[test]
    fn closure_of_f_a_equals_a() {
        let sig = unary_sig();
        let f = OpId(0);
        let u = TermUniverse::new(&sig, &[SortId(0)], 2);
        let fa = Term::app(f, vec![x(0)]);
        let ffa = Term::app(f, vec![fa.clone()]);
        let c = congruence_closure(&u, &[(fa.clone(), x(0))], &[]).unwrap();
        assert!(c.same(&fa, &x(0)));
        assert!(c.same(&ffa, &x(0)));
        assert_eq!(c.num_classes(), 1);
        let c0 = congruence_closure(&u, &[], &[]).unwrap();
        assert_eq!(c0.num_classes(), 3);
        let too_deep = Term::app(f, vec![ffa]);
        assert!(congruence_closure(&u, &[(too_deep, x(0))], &[]).is_err());
    }

    #[test]
    fn congruence_rule() {
        let sig = unary_sig();
        let f = OpId(0);
        let u = TermUniverse::new(&sig, &[SortId(0), SortId(0)], 1);
        let c = congruence_closure(&u, &[(x(0), x(1))], &[]).unwrap();
        assert!(c.same(&Term::app(f, vec![x(0)]), &Term::app(f, vec![x(1)])));
    }

    #[test]
    fn monoid_unit_twice() {
        let th = corpus::monoid();
        let (e, m) = (th.sig.op("e").unwrap(), th.sig.op("*").unwrap());
        let ex = Term::app(m, vec![Term::constant(e), x(0)]);
        let eex = Term::app(m, vec![Term::constant(e), ex]);
        let st = entails(&th, &[SortId(0)], &HornFormula::top(), &HornFormula::eq(eex.clone(), x(0)), &Budget::with_depth(3));
        let ProofStatus::Proved { trace } = st else { panic!("{st:?}") };
        assert!(replay(&th, &[SortId(0)], &HornFormula::top(), &HornFormula::eq(eex, x(0)), &trace));
    }

    #[test]
    fn group_inverse_of_unit() {
        let th = corpus::group();
        let (e, inv) = (th.sig.op("e").unwrap(), th.sig.op("inv").unwrap());
        let goal = HornFormula::eq(Term::app(inv, vec![Term::constant(e)]), Term::constant(e));
        let st = entails(&th, &[], &HornFormula::top(), &goal, &Budget::with_depth(3));
        let ProofStatus::Proved { trace } = st else { panic!("{st:?}") };
        assert!(replay(&th, &[], &HornFormula::top(), &goal, &trace));
    }

    #[test]
    fn poset_antisymmetry_at_depth_one() {
        let th = corpus::poset();
        let r = th.sig.rel("R").unwrap();
        let alpha = HornFormula::from_atoms([Atom::Rel(r, vec![x(0), x(1)]), Atom::Rel(r, vec![x(1), x(0)])]);
        let st = entails(&th, &[SortId(0), SortId(0)], &alpha, &HornFormula::eq(x(0), x(1)), &Budget::with_depth(1));
        assert!(st.is_proved());
    }

    #[test]
    fn reflexivity_and_top() {
        let th = corpus::monoid();
        let m = th.sig.op("*").unwrap();
        let a = HornFormula::eq(Term::app(m, vec![x(0), x(1)]), x(0));
        let ctx = [SortId(0), SortId(0)];
        assert!(entails(&th, &ctx, &a, &a, &Budget::default()).is_proved());
        assert!(fiber_leq(&th, &ctx, &a, &HornFormula::top(), &Budget::default()).is_proved());
    }

    #[test]
    fn unrelated_atoms_are_unknown() {
        let th = corpus::poset();
        let r = th.sig.rel("R").unwrap();
        let a = HornFormula::atom(Atom::Rel(r, vec![x(0), x(1)]));
        let b = HornFormula::atom(Atom::Rel(r, vec![x(1), x(0)]));
        let st = fiber_leq(&th, &[SortId(0), SortId(0)], &a, &b, &Budget::with_depth(6));
        assert!(matches!(st, ProofStatus::Unknown { .. }));
    }

    #[test]
    fn semilattice_meet_absorption() {
        let th = corpus::semilattice();
        let m = th.sig.op("⊓").unwrap();
        let a = HornFormula::eq(Term::app(m, vec![x(0), x(1)]), x(0));
        let b = HornFormula::eq(Term::app(m, vec![Term::app(m, vec![x(0), x(1)]), x(1)]), x(0));
        assert!(fiber_leq(&th, &[SortId(0), SortId(0)], &a, &b, &Budget::default()).is_proved());
    }

    #[test]
    fn empty_theory_closes_on_hypotheses() {
        let sig = unary_sig();
        let th = Theory::new("empty", sig.clone());
        let f = OpId(0);
        let u = TermUniverse::new(&sig, &[SortId(0)], 3);
        let hyp = [Atom::Eq(Term::app(f, vec![Term::app(f, vec![x(0)])]), x(0))];
        let (c, out) = saturate_universe(&th, &u, &hyp, &Budget::default());
        assert!(out.closed);
        assert_eq!(c.num_classes(), 2);
    }

    #[test]
    fn representatives_are_least_terms() {
        let sig = unary_sig();
        let f = OpId(0);
        let u = TermUniverse::new(&sig, &[SortId(0)], 2);
        let ffa = Term::app(f, vec![Term::app(f, vec![x(0)])]);
        let c = congruence_closure(&u, &[(ffa.clone(), Term::app(f, vec![x(0)]))], &[]).unwrap();
        let reps: Vec<Term> = c.classes().into_iter().map(|(_, t)| t).collect();
        assert_eq!(reps, vec![x(0), Term::app(f, vec![x(0)])]);
    }

    #[test]
    fn budget_monotonicity_on_a_grid() {
        let th = corpus::group();
        let (e, m, inv) = (th.sig.op("e").unwrap(), th.sig.op("*").unwrap(), th.sig.op("inv").unwrap());
        let goals = [
            HornFormula::eq(Term::app(inv, vec![Term::constant(e)]), Term::constant(e)),
            HornFormula::eq(Term::app(inv, vec![Term::app(inv, vec![x(0)])]), x(0)),
            HornFormula::eq(Term::app(m, vec![x(0), Term::app(inv, vec![x(0)])]), Term::constant(e)),
        ];
        for g in &goals {
            let mut proved = false;
            for d in 0..4 {
                let now = entails(&th, &[SortId(0)], &HornFormula::top(), g, &Budget::with_depth(d)).is_proved();
                assert!(!proved || now, "depth {d} lost a proof");
                proved = now;
            }
        }
    }

    /// Naive closure: a boolean relation matrix iterated to a fixpoint.
    fn naive_classes(terms: &[Term], eqs: &[(usize, usize)]) -> Vec<Vec<bool>> {
        let n = terms.len();
        let mut rel = vec![vec![false; n]; n];
        for i in 0..n {
            rel[i][i] = true;
        }
        for &(a, b) in eqs {
            rel[a][b] = true;
            rel[b][a] = true;
        }
        loop {
            let mut changed = false;
            for i in 0..n {
                for j in 0..n {
                    if rel[i][j] {
                        continue;
                    }
                    let trans = (0..n).any(|k| rel[i][k] && rel[k][j]);
                    let cong = match (&terms[i], &terms[j]) {
                        (Term::App(f, xs), Term::App(g, ys)) if f == g => xs.iter().zip(ys).all(|(x, y)| {
                            let a = terms.iter().position(|t| t == x).unwrap();
                            let b = terms.iter().position(|t| t == y).unwrap();
                            rel[a][b]
                        }),
                        _ => false,
                    };
                    if trans || cong {
                        rel[i][j] = true;
                        changed = true;
                    }
                }
            }
            if !changed {
                return rel;
            }
        }
    }

    proptest! {
        #![proptest_config(ProptestConfig::with_cases(64))]
        #[test]
        fn closure_matches_naive_oracle(eqs in proptest::collection::vec((0usize..100, 0usize..100), 0..4)) {
            let mut sig = Signature::single_sorted();
            sig.add_op("f", &[SortId(0)], SortId(0)).unwrap();
            sig.add_op("g", &[SortId(0), SortId(0)], SortId(0)).unwrap();
            let u = TermUniverse::new(&sig, &[SortId(0), SortId(0)], 2);
            let terms = u.terms();
            let n = terms.len();
            let eqs: Vec<(usize, usize)> = eqs.into_iter().map(|(a, b)| (a % n, b % n)).collect();
            let pairs: Vec<(Term, Term)> = eqs.iter().map(|&(a, b)| (terms[a].clone(), terms[b].clone())).collect();
            let c = congruence_closure(&u, &pairs, &[]).unwrap();
            let rel = naive_classes(&terms, &eqs);
            for i in 0..n {
                for j in 0..n {
                    prop_assert_eq!(c.same(&terms[i], &terms[j]), rel[i][j]);
                }
            }
        }
    }
}
