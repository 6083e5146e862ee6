use elemdoc_core::adjoint::{check_free_model, factor_through, free_model, forgetful, unit, FreeStatus};
use elemdoc_core::corpus;
use elemdoc_core::prover::Budget;
use elemdoc_core::semantics::{check_model, enumerate_homs, enumerate_models, validate_structure_hom, Structure};

fn is_group(m: &Structure) -> bool {
    check_model(m, &corpus::group()).is_empty()
}

fn has_inverses(m: &Structure) -> bool {
    let sig = &m.sig;
    let mul = sig.op("*").unwrap();
    let e = m.op(sig.op("e").unwrap(), &[]);
    let k = m.carriers[0];
    (0..k).all(|a| (0..k).any(|b| m.op(mul, &[a, b]) == e && m.op(mul, &[b, a]) == e))
}

/// Reflecting a monoid that is already a group changes nothing.
#[test]
fn groups_are_fixed_by_the_group_reflection() {
    let mor = corpus::monoid_to_group();
    let budget = Budget::default();
    let mut seen = 0;
    for m in enumerate_models(&corpus::monoid(), 3) {
        let r = free_model(&mor, &m, &budget);
        assert!(matches!(r.status, FreeStatus::Closed), "{}", m.name);
        assert!(check_free_model(&r).is_empty());
        let eta = unit(&r).unwrap();
        let injective = {
            let mut img = eta.maps[0].map.clone();
            img.sort();
            img.dedup();
            img.len() == m.carriers[0]
        };
        if has_inverses(&m) {
            seen += 1;
            assert_eq!(r.output.carriers, m.carriers);
            assert!(injective);
        }
    }
    assert!(seen >= 2);
}

#[test]
fn free_group_factors_every_map_into_small_groups() {
    let mor = corpus::monoid_to_group();
    let input = corpus::idempotent_monoid();
    let r = free_model(&mor, &input, &Budget::default());
    assert_eq!(r.output.carriers, vec![1]);
    let targets: Vec<_> = enumerate_models(&corpus::group(), 3).into_iter().filter(is_group).collect();
    assert!(!targets.is_empty());
    for n in &targets {
        let reduct = forgetful(&mor, n);
        let eta = unit(&r).unwrap();
        for g in enumerate_homs(&input, &reduct) {
            let h = factor_through(&r, n, &g).unwrap();
            assert!(validate_structure_hom(&r.output, n, &h).is_empty());
            for a in 0..input.carriers[0] {
                assert_eq!(h.maps[0].apply(eta.maps[0].apply(a)), g.maps[0].apply(a));
            }
        }
    }
}

#[test]
fn pointed_extension_adds_one_point() {
    let mor = corpus::pointed_extension();
    for k in 0..4 {
        let r = free_model(&mor, &corpus::finite_set(k), &Budget::default());
        assert_eq!(r.output.carriers, vec![k + 1]);
    }
}

#[test]
fn abelianization_of_s3_has_two_elements() {
    let r = free_model(&corpus::abelianize(), &corpus::symmetric_group_3(), &Budget::default());
    assert!(matches!(r.status, FreeStatus::Closed));
    assert_eq!(r.output.carriers, vec![2]);
    assert!(check_model(&r.output, &corpus::abelian_group()).is_empty());
}

#[test]
fn tight_budget_truncates() {
    let b = Budget { depth: 1, max_atoms: 10, max_unions: 1_000_000 };
    let r = free_model(&corpus::abelianize(), &corpus::symmetric_group_3(), &b);
    assert!(matches!(r.status, FreeStatus::Truncated { .. }));
}
