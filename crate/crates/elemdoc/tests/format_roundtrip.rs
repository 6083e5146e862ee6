use elemdoc::format::{parse_model, parse_theory, print_model, print_theory, LoadError, ModelFile};
use elemdoc_core::semantics::{atoms_up_to, Structure};
use elemdoc_core::syntax::{Signature, SortId, Theory};
use proptest::prelude::*;

#[derive(Clone, Debug)]
struct Shape {
    ops: Vec<(Vec<usize>, usize)>,
    rels: Vec<Vec<usize>>,
    axioms: Vec<(Vec<usize>, Vec<usize>, Vec<usize>)>,
    carriers: Vec<usize>,
    seed: u64,
}

fn shape() -> impl Strategy<Value = Shape> {
    let sorts = 0usize..2;
    let op = (proptest::collection::vec(sorts.clone(), 0..3), sorts.clone());
    let rel = proptest::collection::vec(sorts.clone(), 1..3);
    let ctx = proptest::collection::vec(sorts.clone(), 0..3);
    let ax = (ctx, proptest::collection::vec(0usize..500, 0..3), proptest::collection::vec(0usize..500, 0..3));
    (
        proptest::collection::vec(op, 0..4),
        proptest::collection::vec(rel, 0..3),
        proptest::collection::vec(ax, 0..4),
        proptest::collection::vec(1usize..4, 2),
        any::<u64>(),
    )
        .prop_map(|(ops, rels, axioms, carriers, seed)| Shape { ops, rels, axioms, carriers, seed })
}

fn build(sh: &Shape) -> Theory {
    let mut sig = Signature::new();
    sig.add_sort("a").unwrap();
    sig.add_sort("b").unwrap();
    for (i, (args, res)) in sh.ops.iter().enumerate() {
        let args: Vec<SortId> = args.iter().map(|&s| SortId(s)).collect();
        let name = if i == 0 && args.len() == 2 { "+".to_string() } else { format!("f{i}") };
        sig.add_op(&name, &args, SortId(*res)).unwrap();
    }
    for (i, args) in sh.rels.iter().enumerate() {
        let args: Vec<SortId> = args.iter().map(|&s| SortId(s)).collect();
        sig.add_rel(&format!("R{i}"), &args).unwrap();
    }
    let mut t = Theory::new("random", sig);
    for (k, (ctx, pre, post)) in sh.axioms.iter().enumerate() {
        let ctx: Vec<SortId> = ctx.iter().map(|&s| SortId(s)).collect();
        let atoms = atoms_up_to(&t.sig, &ctx, 1);
        if atoms.is_empty() {
            continue;
        }
        let pick = |ix: &[usize]| ix.iter().fold(elemdoc_core::syntax::HornFormula::top(), |acc, &i| acc.and(&atoms[i % atoms.len()]));
        let (p, q) = (pick(pre), pick(post));
        t.axiom(&format!("ax{k}"), ctx, p, q).unwrap();
    }
    t
}

fn model(t: &Theory, sh: &Shape) -> Structure {
    let mut state = sh.seed | 1;
    let mut next = move || {
        state ^= state << 13;
        state ^= state >> 7;
        state ^= state << 17;
        state as usize
    };
    let sig = &t.sig;
    let carriers = sh.carriers.clone();
    let ops: Vec<Vec<usize>> = sig
        .op_ids()
        .map(|f| {
            let d = sig.op_decl(f);
            let n: usize = d.args.iter().map(|s| carriers[s.0]).product();
            (0..n).map(|_| next() % carriers[d.result.0]).collect()
        })
        .collect();
    let rel_bits: Vec<Vec<bool>> = sig
        .rel_ids()
        .map(|r| {
            let n: usize = sig.rel_decl(r).args.iter().map(|s| carriers[s.0]).product();
            (0..n).map(|_| next() % 2 == 0).collect()
        })
        .collect();
    let probe = Structure::from_fn("m", sig, carriers.clone(), |_, _| 0, |_, _| true);
    let mut m = Structure::from_fn("m", sig, carriers, |_, _| 0, |_, _| false);
    m.ops = ops;
    for (r, all) in probe.rels.iter().enumerate() {
        m.rels[r] = all.iter().zip(&rel_bits[r]).filter(|(_, &b)| b).map(|(t, _)| t.clone()).collect();
    }
    m
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(64))]

    #[test]
    fn theories_round_trip(sh in shape()) {
        let t = build(&sh);
        let text = print_theory(&t);
        let back = parse_theory("r.thy", &text, "x").unwrap_or_else(|e| panic!("{e}\n{text}"));
        prop_assert_eq!(&back, &t);
        prop_assert_eq!(print_theory(&back), text);
    }

    #[test]
    fn models_round_trip(sh in shape()) {
        let t = build(&sh);
        let m = model(&t, &sh);
        let mf = ModelFile { theory_path: "r.thy".into(), model: m.clone() };
        let text = print_model(&mf);
        let resolve = |_: &str| -> Result<Theory, LoadError> { Ok(t.clone()) };
        let (back, _) = parse_model("r.mod", &text, &resolve).unwrap_or_else(|e| panic!("{e}\n{text}"));
        prop_assert_eq!(&back.model, &m);
        prop_assert_eq!(print_model(&back), text);
    }
}
