//! Directed multigraphs and the path/cycle lemmas built on them.

mod digraph;
mod gamma;
mod layered;

pub use digraph::{
    count_paths, girth_directed, girth_through, max_paths, path_counts, weighted_path_counts,
    DiGraph, GraphError,
};
pub use gamma::{
    build_gamma_bar, gamma_bar_girth_implicit, path_type_bound, path_type_count, verify_girth_lemma,
    GammaBar, GirthLemmaReport, PathTypeReport, PATH_TYPES,
};
pub use layered::{
    check_layered, layered_path_bound, make_layered_graph, make_layered_graph_sized, LayerViolation,
    LayeredBound, LayeredPartition, LayeredReport,
};
