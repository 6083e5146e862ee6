use elemdoc_core::corpus;
use elemdoc_core::prover::{entails, replay, Budget, ProofStatus};
use elemdoc_core::semantics::{atoms_up_to, enumerate_models, Structure};
use elemdoc_core::syntax::{HornFormula, SortId, Term, Theory};
use proptest::prelude::*;

fn valid_in(models: &[Structure], ctx: &[SortId], alpha: &HornFormula, beta: &HornFormula) -> bool {
    models.iter().all(|m| m.tuples(ctx).all(|env| !m.holds(alpha, &env) || m.holds(beta, &env)))
}

fn check_sound(t: &Theory, n: usize, pick: &[(usize, usize)]) {
    let ctx = vec![SortId(0), SortId(0)];
    let atoms = atoms_up_to(&t.sig, &ctx, 1);
    let models = enumerate_models(t, n);
    let b = Budget::with_depth(2);
    for &(i, j) in pick {
        let alpha = &atoms[i % atoms.len()];
        let beta = &atoms[j % atoms.len()];
        if let ProofStatus::Proved { trace } = entails(t, &ctx, alpha, beta, &b) {
            assert!(valid_in(&models, &ctx, alpha, beta), "{alpha:?} |- {beta:?}");
            assert!(replay(t, &ctx, alpha, beta, &trace));
        }
    }
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(24))]

    #[test]
    fn proved_monoid_entailments_hold_in_small_monoids(pick in proptest::collection::vec((0usize..1000, 0usize..1000), 1..6)) {
        check_sound(&corpus::monoid(), 3, &pick);
    }

    #[test]
    fn proved_semilattice_entailments_hold_in_small_semilattices(pick in proptest::collection::vec((0usize..1000, 0usize..1000), 1..6)) {
        check_sound(&corpus::semilattice(), 3, &pick);
    }

    #[test]
    fn conjunction_entails_its_parts(i in 0usize..1000, j in 0usize..1000) {
        let t = corpus::group();
        let ctx = vec![SortId(0)];
        let atoms = atoms_up_to(&t.sig, &ctx, 1);
        let a = &atoms[i % atoms.len()];
        let c = &atoms[j % atoms.len()];
        let both = a.and(c);
        let b = Budget::with_depth(1);
        prop_assert!(entails(&t, &ctx, &both, a, &b).is_proved());
        prop_assert!(entails(&t, &ctx, &both, c, &b).is_proved());
        prop_assert!(entails(&t, &ctx, a, &HornFormula::top(), &b).is_proved());
    }
}

#[test]
fn group_inverse_is_involutive() {
    let t = corpus::group();
    let ctx = vec![SortId(0)];
    let inv = t.sig.op("inv").unwrap();
    let x = Term::var(0);
    let goal = HornFormula::eq(Term::app(inv, vec![Term::app(inv, vec![x.clone()])]), x);
    assert!(entails(&t, &ctx, &HornFormula::top(), &goal, &Budget::default()).is_proved());
}

#[test]
fn commutativity_is_not_provable_for_groups() {
    let t = corpus::group();
    let ctx = vec![SortId(0), SortId(0)];
    let mul = t.sig.op("*").unwrap();
    let (x, y) = (Term::var(0), Term::var(1));
    let goal = HornFormula::eq(Term::app(mul, vec![x.clone(), y.clone()]), Term::app(mul, vec![y, x]));
    assert!(!entails(&t, &ctx, &HornFormula::top(), &goal, &Budget::with_depth(2)).is_proved());
}
