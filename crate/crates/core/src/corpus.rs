//! Small named categories used throughout the tests and shipped as example files.

use crate::category::{AInfCategory, CategoryBuilder};
use crate::error::Result;
use crate::scalar::Field;

/// The A₂ quiver: `f: X → Y` of degree 0.
pub fn a2(field: Field) -> Result<AInfCategory> {
    let mut b = CategoryBuilder::new(field);
    b.unital_object("X")?;
    b.unital_object("Y")?;
    b.gen("f", "X", "Y", 0)?;
    b.build()
}

/// The A₃ quiver with its composite: `f: X → Y`, `g: Y → Z`, `gf = g ∘ f`.
pub fn a3(field: Field) -> Result<AInfCategory> {
    let mut b = CategoryBuilder::new(field);
    for o in ["X", "Y", "Z"] {
        b.unital_object(o)?;
    }
    b.gen("f", "X", "Y", 0)?;
    b.gen("g", "Y", "Z", 0)?;
    b.gen("gf", "X", "Z", 0)?;
    b.dg(&["g", "f"], &[(1, "gf")])?;
    b.build()
}

/// One object whose endomorphisms are the field.
pub fn point(field: Field) -> Result<AInfCategory> {
    let mut b = CategoryBuilder::new(field);
    b.unital_object("O")?;
    b.build()
}

/// `k[x]/x²` with `|x| = 0`.
pub fn dual_numbers(field: Field) -> Result<AInfCategory> {
    let mut b = CategoryBuilder::new(field);
    b.unital_object("O")?;
    b.gen("x", "O", "O", 0)?;
    b.build()
}

/// `k[ε]/ε²` with `|ε| = -1` and `dε = 1`: an acyclic dg algebra.
pub fn contractible(field: Field) -> Result<AInfCategory> {
    let mut b = CategoryBuilder::new(field);
    b.unital_object("O")?;
    b.gen("e", "O", "O", -1)?;
    b.dg(&["e"], &[(1, "1_O")])?;
    b.build()
}

/// Three composable arrows `h ∘ g ∘ f` whose two bracketings `p = h(gf)` and
/// `q = (hg)f` differ, joined by `dz = p - q` and the homotopy `m3(h, g, f) = z`.
pub fn homotopy_associative(field: Field) -> Result<AInfCategory> {
    let mut b = CategoryBuilder::new(field);
    for o in ["P0", "P1", "P2", "P3"] {
        b.unital_object(o)?;
    }
    b.gen("f", "P0", "P1", 0)?;
    b.gen("g", "P1", "P2", 0)?;
    b.gen("h", "P2", "P3", 0)?;
    b.gen("gf", "P0", "P2", 0)?;
    b.gen("hg", "P1", "P3", 0)?;
    b.gen("p", "P0", "P3", 0)?;
    b.gen("q", "P0", "P3", 0)?;
    b.gen("z", "P0", "P3", -1)?;
    b.dg(&["g", "f"], &[(1, "gf")])?;
    b.dg(&["h", "g"], &[(1, "hg")])?;
    b.dg(&["h", "gf"], &[(1, "p")])?;
    b.dg(&["hg", "f"], &[(1, "q")])?;
    b.dg(&["z"], &[(1, "p"), (-1, "q")])?;
    b.dg(&["h", "g", "f"], &[(1, "z")])?;
    b.build()
}

/// Every corpus category over `field`, by name.
pub fn all(field: Field) -> Result<Vec<(&'static str, AInfCategory)>> {
    Ok(vec![
        ("a2", a2(field)?),
        ("a3", a3(field)?),
        ("point", point(field)?),
        ("dual", dual_numbers(field)?),
        ("contractible", contractible(field)?),
        ("mu3", homotopy_associative(field)?),
    ])
}
