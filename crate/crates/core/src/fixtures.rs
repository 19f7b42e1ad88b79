//! The three standard graphs and their test elements.

use crate::raag::{DefiningGraph, Raag};

pub fn free_group() -> Raag {
    Raag::new(DefiningGraph::free(&["a", "b"]).expect("valid graph"))
}

pub fn free_abelian() -> Raag {
    Raag::new(DefiningGraph::free_abelian(&["a", "b"]).expect("valid graph"))
}

/// The path `a – b – c`.
pub fn path_graph() -> Raag {
    Raag::new(DefiningGraph::new(&["a", "b", "c"], &[("a", "b"), ("b", "c")]).expect("valid graph"))
}

/// The path `a – b – c – d`, used where the three-vertex graphs give no instances.
pub fn path4() -> Raag {
    Raag::new(DefiningGraph::new(&["a", "b", "c", "d"], &[("a", "b"), ("b", "c"), ("c", "d")]).expect("valid graph"))
}

pub struct Fixture {
    pub name: &'static str,
    pub raag: Raag,
    pub elements: &'static [&'static str],
}

pub fn all() -> Vec<Fixture> {
    vec![
        Fixture { name: "F2", raag: free_group(), elements: &["a b a^-1 b^-1", "a b a b", "a a b"] },
        Fixture { name: "Z2", raag: free_abelian(), elements: &["a b", "a a b b b"] },
        Fixture { name: "path", raag: path_graph(), elements: &["a b c", "a b c^-1 b a"] },
    ]
}
