//! Bundled regression quivers used by the self-test and the test suites.

/// Path algebra of 1 -> 2.
pub const A2: &str = "\
vertices = 2
arrow a 1 2
";

/// Path algebra of 1 -> 2 -> 3 modulo the zero relation b a.
pub const A3_ZERO: &str = "\
vertices = 3
arrow a 1 2
arrow b 2 3
zero b a
";

/// One vertex, one loop, no relations: infinite-dimensional.
pub const LOOP: &str = "\
vertices = 1
arrow x 1 1
";
