//! Compact text forms used in reports and error messages.

use core::fmt;

use crate::cone::Cone;
use crate::lattice::Sublattice;
use crate::linalg::IntVector;

pub struct V<'a>(pub &'a IntVector);

impl fmt::Display for V<'_> {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str("(")?;
        for (i, x) in self.0.iter().enumerate() {
            if i > 0 {
                f.write_str(",")?;
            }
            write!(f, "{x}")?;
        }
        f.write_str(")")
    }
}

fn list(f: &mut fmt::Formatter<'_>, vs: &[IntVector]) -> fmt::Result {
    for (i, v) in vs.iter().enumerate() {
        if i > 0 {
            f.write_str(", ")?;
        }
        write!(f, "{}", V(v))?;
    }
    Ok(())
}

impl fmt::Display for Cone {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.is_zero() {
            return f.write_str("{0}");
        }
        f.write_str(if self.rays().len() == 1 { "ray(" } else { "cone(" })?;
        list(f, self.rays())?;
        f.write_str(")")
    }
}

impl fmt::Display for Sublattice {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str("Z<")?;
        list(f, self.basis())?;
        f.write_str(">")
    }
}
