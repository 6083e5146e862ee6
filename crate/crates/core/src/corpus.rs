//! A small library of theories, morphisms and finite models used by the
//! tests, the golden examples and the command line fixtures.

use alloc::format;
use alloc::string::ToString;
use alloc::vec;
use alloc::vec::Vec;

use crate::semantics::Structure;
use crate::syntax::{Atom, HornFormula, Signature, SortId, Term, Theory, TheoryMorphism};

fn x(i: usize) -> Term {
    Term::Var(i)
}

fn ap(sig: &Signature, name: &str, args: Vec<Term>) -> Term {
    Term::App(sig.op(name).unwrap_or_else(|| panic!("no operation {name}")), args)
}

fn eq(l: Term, r: Term) -> HornFormula {
    HornFormula::eq(l, r)
}

fn ax(t: &mut Theory, name: &str, n: usize, premise: HornFormula, conclusion: HornFormula) {
    let ctx = vec![SortId(0); n];
    t.axiom(name, ctx, premise, conclusion).expect("corpus axioms are well-sorted");
}

pub fn empty_theory() -> Theory {
    Theory::new("empty", Signature::single_sorted())
}

/// One constant `c`, no axioms.
pub fn pointed() -> Theory {
    let mut sig = Signature::single_sorted();
    sig.add_op("c", &[], SortId(0)).unwrap();
    Theory::new("pointed", sig)
}

fn monoid_axioms(t: &mut Theory, e: &str, m: &str) {
    let s = t.sig.clone();
    let unit = || Term::App(s.op(e).unwrap(), vec![]);
    let mul = |a: Term, b: Term| ap(&s, m, vec![a, b]);
    ax(t, "left_unit", 1, HornFormula::top(), eq(mul(unit(), x(0)), x(0)));
    ax(t, "right_unit", 1, HornFormula::top(), eq(mul(x(0), unit()), x(0)));
    ax(t, "assoc", 3, HornFormula::top(), eq(mul(mul(x(0), x(1)), x(2)), mul(x(0), mul(x(1), x(2)))));
}

fn commutativity(t: &mut Theory, m: &str) {
    let s = t.sig.clone();
    let mul = |a: Term, b: Term| ap(&s, m, vec![a, b]);
    ax(t, "comm", 2, HornFormula::top(), eq(mul(x(0), x(1)), mul(x(1), x(0))));
}

fn monoid_sig() -> Signature {
    let mut sig = Signature::single_sorted();
    sig.add_op("e", &[], SortId(0)).unwrap();
    sig.add_op("*", &[SortId(0), SortId(0)], SortId(0)).unwrap();
    sig
}

pub fn monoid() -> Theory {
    let mut t = Theory::new("monoid", monoid_sig());
    monoid_axioms(&mut t, "e", "*");
    t
}

pub fn comm_monoid() -> Theory {
    let mut t = monoid();
    t.name = "comm_monoid".into();
    commutativity(&mut t, "*");
    t
}

fn inverse_axioms(t: &mut Theory, e: &str, m: &str, inv: &str) {
    let s = t.sig.clone();
    let unit = Term::App(s.op(e).unwrap(), vec![]);
    let mul = |a: Term, b: Term| ap(&s, m, vec![a, b]);
    let i = |a: Term| ap(&s, inv, vec![a]);
    ax(t, "left_inverse", 1, HornFormula::top(), eq(mul(i(x(0)), x(0)), unit.clone()));
    ax(t, "right_inverse", 1, HornFormula::top(), eq(mul(x(0), i(x(0))), unit));
}

pub fn group() -> Theory {
    let mut sig = monoid_sig();
    sig.add_op("inv", &[SortId(0)], SortId(0)).unwrap();
    let mut t = Theory::new("group", sig);
    monoid_axioms(&mut t, "e", "*");
    inverse_axioms(&mut t, "e", "*", "inv");
    t
}

pub fn abelian_group() -> Theory {
    let mut t = group();
    t.name = "abelian_group".into();
    commutativity(&mut t, "*");
    t
}

/// One binary relation `R`: reflexive, transitive, antisymmetric.
pub fn poset() -> Theory {
    let mut sig = Signature::single_sorted();
    let r = sig.add_rel("R", &[SortId(0), SortId(0)]).unwrap();
    let rel = |a: usize, b: usize| Atom::Rel(r, vec![x(a), x(b)]);
    let mut t = Theory::new("poset", sig);
    ax(&mut t, "refl", 1, HornFormula::top(), HornFormula::atom(rel(0, 0)));
    ax(&mut t, "trans", 3, HornFormula::from_atoms([rel(0, 1), rel(1, 2)]), HornFormula::atom(rel(0, 2)));
    ax(&mut t, "antisym", 2, HornFormula::from_atoms([rel(0, 1), rel(1, 0)]), eq(x(0), x(1)));
    t
}

/// Meet-semilattices with a top element `top` and meet `⊓`.
pub fn semilattice() -> Theory {
    let mut sig = Signature::single_sorted();
    sig.add_op("top", &[], SortId(0)).unwrap();
    sig.add_op("⊓", &[SortId(0), SortId(0)], SortId(0)).unwrap();
    let s = sig.clone();
    let m = |a: Term, b: Term| ap(&s, "⊓", vec![a, b]);
    let top = ap(&s, "top", vec![]);
    let mut t = Theory::new("semilattice", sig);
    ax(&mut t, "top_unit", 1, HornFormula::top(), eq(m(x(0), top), x(0)));
    ax(&mut t, "idem", 1, HornFormula::top(), eq(m(x(0), x(0)), x(0)));
    commutativity(&mut t, "⊓");
    ax(&mut t, "assoc", 3, HornFormula::top(), eq(m(m(x(0), x(1)), x(2)), m(x(0), m(x(1), x(2)))));
    t
}

/// Modules over `Z/n`: an abelian group `(z, +, neg)` with one unary
/// operation `s<r>` per scalar `r`.
pub fn z_module(n: usize) -> Theory {
    let mut sig = Signature::single_sorted();
    sig.add_op("z", &[], SortId(0)).unwrap();
    sig.add_op("+", &[SortId(0), SortId(0)], SortId(0)).unwrap();
    sig.add_op("neg", &[SortId(0)], SortId(0)).unwrap();
    for r in 0..n {
        sig.add_op(&format!("s{r}"), &[SortId(0)], SortId(0)).unwrap();
    }
    let mut t = Theory::new(&format!("z{n}_module"), sig);
    monoid_axioms(&mut t, "z", "+");
    inverse_axioms(&mut t, "z", "+", "neg");
    commutativity(&mut t, "+");
    let s = t.sig.clone();
    let plus = |a: Term, b: Term| ap(&s, "+", vec![a, b]);
    let sc = |r: usize, a: Term| ap(&s, &format!("s{r}"), vec![a]);
    ax(&mut t, "one", 1, HornFormula::top(), eq(sc(1 % n, x(0)), x(0)));
    ax(&mut t, "zero", 1, HornFormula::top(), eq(sc(0, x(0)), ap(&s, "z", vec![])));
    for r in 0..n {
        ax(&mut t, &format!("linear{r}"), 2, HornFormula::top(), eq(sc(r, plus(x(0), x(1))), plus(sc(r, x(0)), sc(r, x(1)))));
        for q in 0..n {
            ax(&mut t, &format!("sum{r}_{q}"), 1, HornFormula::top(), eq(plus(sc(r, x(0)), sc(q, x(0))), sc((r + q) % n, x(0))));
            ax(&mut t, &format!("prod{r}_{q}"), 1, HornFormula::top(), eq(sc(r, sc(q, x(0))), sc((r * q) % n, x(0))));
        }
    }
    t
}

fn action_theory(name: &str, with_inverse: bool) -> Theory {
    let mut sig = Signature::new();
    let m = sig.add_sort("m").unwrap();
    let p = sig.add_sort("x").unwrap();
    sig.add_op("e", &[], m).unwrap();
    sig.add_op("*", &[m, m], m).unwrap();
    if with_inverse {
        sig.add_op("inv", &[m], m).unwrap();
    }
    sig.add_op(".", &[m, p], p).unwrap();
    let s = sig.clone();
    let mut t = Theory::new(name, sig);
    monoid_axioms(&mut t, "e", "*");
    if with_inverse {
        inverse_axioms(&mut t, "e", "*", "inv");
    }
    let act = |a: Term, b: Term| ap(&s, ".", vec![a, b]);
    let mul = |a: Term, b: Term| ap(&s, "*", vec![a, b]);
    t.axiom("act_unit", vec![p], HornFormula::top(), eq(act(ap(&s, "e", vec![]), x(0)), x(0))).unwrap();
    t.axiom("act_assoc", vec![m, m, p], HornFormula::top(), eq(act(mul(x(0), x(1)), x(2)), act(x(0), act(x(1), x(2)))))
        .unwrap();
    t
}

/// Two sorts `m` (a monoid) and `x` with an action `.`.
pub fn monoid_action() -> Theory {
    action_theory("monoid_action", false)
}

pub fn group_action() -> Theory {
    action_theory("group_action", true)
}

// ---- morphisms ----

/// Adding a constant to the empty theory.
pub fn pointed_extension() -> TheoryMorphism {
    TheoryMorphism::inclusion("pointed_extension", &empty_theory(), &pointed()).unwrap()
}

pub fn monoid_to_group() -> TheoryMorphism {
    TheoryMorphism::inclusion("monoid_to_group", &monoid(), &group()).unwrap()
}

pub fn abelianize() -> TheoryMorphism {
    TheoryMorphism::inclusion("abelianize", &group(), &abelian_group()).unwrap()
}

/// `R(x1,x2) ↦ x1 ⊓ x2 = x1`.
pub fn poset_to_semilattice() -> TheoryMorphism {
    let (src, tgt) = (poset(), semilattice());
    let meet = Term::App(tgt.sig.op("⊓").unwrap(), vec![x(0), x(1)]);
    let m = TheoryMorphism {
        name: "poset_to_semilattice".into(),
        source: src,
        target: tgt,
        sort_map: vec![SortId(0)],
        op_map: vec![],
        rel_map: vec![eq(meet, x(0))],
    };
    m.check().unwrap();
    m
}

/// Restriction of scalars along `Z/n → Z/k` (`k` divides `n`): `s<r> ↦ s<r mod k>`.
pub fn scalars(n: usize, k: usize) -> TheoryMorphism {
    let (src, tgt) = (z_module(n), z_module(k));
    let op_map = src
        .sig
        .ops
        .iter()
        .map(|o| {
            let name = match o.name.strip_prefix('s').and_then(|r| r.parse::<usize>().ok()) {
                Some(r) => format!("s{}", r % k),
                None => o.name.clone(),
            };
            Term::App(tgt.sig.op(&name).unwrap(), (0..o.args.len()).map(Term::Var).collect())
        })
        .collect();
    let m = TheoryMorphism {
        name: format!("scalars_z{n}_z{k}"),
        source: src,
        target: tgt,
        sort_map: vec![SortId(0)],
        op_map,
        rel_map: vec![],
    };
    m.check().unwrap();
    m
}

pub fn action_extension() -> TheoryMorphism {
    TheoryMorphism::inclusion("action_extension", &monoid_action(), &group_action()).unwrap()
}

// ---- models ----

/// `{0, …, n-1}` as a model of the empty theory.
pub fn finite_set(n: usize) -> Structure {
    Structure::from_fn(&format!("set{n}"), &empty_theory().sig, vec![n], |_, _| 0, |_, _| false)
}

/// `{1, a}` with `a·a = a`; `1` is element 0.
pub fn idempotent_monoid() -> Structure {
    Structure::from_fn("idempotent", &monoid().sig, vec![2], |f, a| if f.0 == 0 { 0 } else { a[0] | a[1] }, |_, _| false)
}

/// `Z/n` in the group signature: `e = 0`, `*` addition, `inv` negation.
pub fn cyclic_group(n: usize) -> Structure {
    let g = group();
    let (e, m) = (g.sig.op("e").unwrap(), g.sig.op("*").unwrap());
    Structure::from_fn(
        &format!("z{n}"),
        &g.sig,
        vec![n],
        |f, a| {
            if f == e {
                0
            } else if f == m {
                (a[0] + a[1]) % n
            } else {
                (n - a[0]) % n
            }
        },
        |_, _| false,
    )
}

/// The permutations of `{0,1,2}` in the order identity, `(01)`, `(02)`,
/// `(12)`, `(012)`, `(021)`; `a*b` is `a∘b`.
pub fn s3_elements() -> [[usize; 3]; 6] {
    [[0, 1, 2], [1, 0, 2], [2, 1, 0], [0, 2, 1], [1, 2, 0], [2, 0, 1]]
}

pub fn symmetric_group_3() -> Structure {
    let g = group();
    let els = s3_elements();
    let index = |p: [usize; 3]| els.iter().position(|q| *q == p).unwrap();
    let compose = |a: usize, b: usize| {
        let (p, q) = (els[a], els[b]);
        index([p[q[0]], p[q[1]], p[q[2]]])
    };
    let inverse = |a: usize| (0..6).find(|&b| compose(a, b) == 0).unwrap();
    let (e, m) = (g.sig.op("e").unwrap(), g.sig.op("*").unwrap());
    Structure::from_fn(
        "s3",
        &g.sig,
        vec![6],
        |f, a| {
            if f == e {
                0
            } else if f == m {
                compose(a[0], a[1])
            } else {
                inverse(a[0])
            }
        },
        |_, _| false,
    )
}

/// `0 ≤ 1 ≤ … ≤ n-1`.
pub fn chain(n: usize) -> Structure {
    Structure::from_fn(&format!("chain{n}"), &poset().sig, vec![n], |_, _| 0, |_, t| t[0] <= t[1])
}

/// `Z/n` as a module over itself.
pub fn cyclic_module(n: usize) -> Structure {
    let t = z_module(n);
    let names: Vec<_> = t.sig.ops.iter().map(|o| o.name.clone()).collect();
    Structure::from_fn(
        &format!("z{n}_self"),
        &t.sig,
        vec![n],
        |f, a| match names[f.0].as_str() {
            "z" => 0,
            "+" => (a[0] + a[1]) % n,
            "neg" => (n - a[0]) % n,
            s => (s[1..].parse::<usize>().unwrap() * a[0]) % n,
        },
        |_, _| false,
    )
}

/// The idempotent monoid `{1, a}` acting trivially on a one-point set.
pub fn trivial_action() -> Structure {
    let t = monoid_action();
    let names: Vec<_> = t.sig.ops.iter().map(|o| o.name.clone()).collect();
    Structure::from_fn(
        "trivial_action",
        &t.sig,
        vec![2, 1],
        |f, a| match names[f.0].as_str() {
            "e" => 0,
            "*" => a[0] | a[1],
            _ => 0,
        },
        |_, _| false,
    )
}

/// The same carriers, keeping the symbols of `sig` by name.
pub fn reduct_to(m: &Structure, sig: &Signature) -> Structure {
    let carriers: Vec<usize> = sig.sorts.iter().map(|s| m.carriers[m.sig.sort(s).unwrap().0]).collect();
    let ops = sig.ops.iter().map(|o| m.ops[m.sig.op(&o.name).unwrap().0].clone()).collect();
    let rels = sig.rels.iter().map(|r| m.rels[m.sig.rel(&r.name).unwrap().0].clone()).collect();
    Structure { name: m.name.to_string(), sig: sig.clone(), carriers, ops, rels }
}

/// Named theories, in a fixed order.
pub fn theories() -> Vec<Theory> {
    vec![
        empty_theory(),
        pointed(),
        monoid(),
        comm_monoid(),
        group(),
        abelian_group(),
        poset(),
        semilattice(),
        z_module(2),
        z_module(4),
        monoid_action(),
        group_action(),
    ]
}

/// Named morphisms, in a fixed order.
pub fn morphisms() -> Vec<TheoryMorphism> {
    vec![pointed_extension(), monoid_to_group(), abelianize(), poset_to_semilattice(), scalars(4, 2), action_extension()]
}
