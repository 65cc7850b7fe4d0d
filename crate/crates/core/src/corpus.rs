//! Bundled diagrams and presentations.

use crate::link::{LinkDiagram, LinkError};
use crate::presentation::Presentation;

/// `(file name, contents)` for every bundled data file.
pub const FILES: &[(&str, &str)] = &[
    ("unknot.pd", include_str!("../data/unknot.pd")),
    ("unlink3.pd", include_str!("../data/unlink3.pd")),
    ("hopf.pd", include_str!("../data/hopf.pd")),
    ("hopf_r1.pd", include_str!("../data/hopf_r1.pd")),
    ("hopf_r2.pd", include_str!("../data/hopf_r2.pd")),
    ("borromean.pd", include_str!("../data/borromean.pd")),
    ("puzzle.pres", include_str!("../data/puzzle.pres")),
    ("poincare.pres", include_str!("../data/poincare.pres")),
    ("poincare_xy.pres", include_str!("../data/poincare_xy.pres")),
    ("poincare_ab.pres", include_str!("../data/poincare_ab.pres")),
    ("trivial.pres", include_str!("../data/trivial.pres")),
    (
        "borromean_complement.pres",
        include_str!("../data/borromean_complement.pres"),
    ),
];

/// Contents of a bundled file, looked up by its base name.
pub fn file(name: &str) -> Option<&'static str> {
    let base = name.rsplit(['/', '\\']).next().unwrap_or(name);
    FILES.iter().find(|(n, _)| *n == base).map(|(_, c)| *c)
}

pub fn diagram(name: &str) -> Result<LinkDiagram, LinkError> {
    let text = file(name).unwrap_or_else(|| panic!("no bundled diagram {name}"));
    LinkDiagram::parse(text)
}

fn bundled(name: &str) -> Presentation {
    Presentation::parse(file(name).expect("bundled")).expect("bundled presentation parses")
}

/// Three-relator presentation of the Borromean rings complement in `X, Y, Z`.
pub fn borromean_complement() -> Presentation {
    bundled("borromean_complement.pres")
}

/// Poincaré homology sphere group on `X, Y, Z` with six relators.
pub fn poincare_six_relator() -> Presentation {
    bundled("poincare.pres")
}

/// The same group after eliminating `Z`.
pub fn poincare_two_generator() -> Presentation {
    bundled("poincare_xy.pres")
}

/// `< A, B | (A^-1*B)^5 = A^3 = B^2 >`.
pub fn poincare_ab() -> Presentation {
    bundled("poincare_ab.pres")
}

/// A two-generator presentation of the trivial group.
pub fn puzzle() -> Presentation {
    bundled("puzzle.pres")
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn everything_parses() {
        for (name, text) in FILES {
            if name.ends_with(".pd") {
                LinkDiagram::parse(text).unwrap_or_else(|e| panic!("{name}: {e}"));
            } else {
                Presentation::parse(text).unwrap_or_else(|e| panic!("{name}: {e}"));
            }
        }
    }

    #[test]
    fn lookup_by_path() {
        assert!(file("some/dir/borromean.pd").is_some());
        assert!(file("missing.pd").is_none());
    }
}
