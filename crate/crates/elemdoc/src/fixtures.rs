//! The bundled corpus rendered as files, as shipped under `fixtures/`.

use elemdoc_core::corpus;
use elemdoc_core::semantics::Structure;
use elemdoc_core::syntax::Theory;

use crate::format::{print_model, print_morphism, print_theory, ModelFile, MorphismFile};

pub fn file_stem(name: &str) -> String {
    name.replace('_', "-")
}

fn thy(t: &Theory) -> String {
    format!("{}.thy", file_stem(&t.name))
}

/// `(file name, contents)` for every theory, morphism and model.
pub fn corpus_files() -> Vec<(String, String)> {
    let mut out: Vec<(String, String)> = corpus::theories().iter().map(|t| (thy(t), print_theory(t))).collect();
    for m in corpus::morphisms() {
        let f = MorphismFile { source_path: thy(&m.source), target_path: thy(&m.target), morphism: m.clone() };
        out.push((format!("{}.mor", file_stem(&m.name)), print_morphism(&f)));
    }
    let models: Vec<(Structure, Theory)> = vec![
        (corpus::finite_set(1), corpus::empty_theory()),
        (corpus::finite_set(2), corpus::empty_theory()),
        (corpus::idempotent_monoid(), corpus::monoid()),
        (corpus::symmetric_group_3(), corpus::group()),
        (corpus::cyclic_group(3), corpus::abelian_group()),
        (corpus::chain(2), corpus::poset()),
        (corpus::cyclic_module(2), corpus::z_module(2)),
        (corpus::cyclic_module(4), corpus::z_module(4)),
        (corpus::trivial_action(), corpus::monoid_action()),
    ];
    for (m, t) in models {
        let f = ModelFile { theory_path: thy(&t), model: m.clone() };
        out.push((format!("{}.mod", file_stem(&m.name)), print_model(&f)));
    }
    out
}
