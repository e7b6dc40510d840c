use crate::error::{Error, Result};

/// Size limits shared by constructors, lattice enumeration and towers.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct Budget {
    /// Largest group order any constructor or tower level may produce.
    pub max_order: usize,
    /// Largest group order for which the full subgroup lattice is enumerated.
    pub max_lattice_order: usize,
    /// Largest number of subgroups a single enumeration may return.
    pub max_subgroups: usize,
}

pub const DEFAULT_MAX_ORDER: usize = 4096;
pub const DEFAULT_MAX_LATTICE_ORDER: usize = 512;
pub const DEFAULT_MAX_SUBGROUPS: usize = 250_000;

impl Default for Budget {
    fn default() -> Self {
        Budget {
            max_order: DEFAULT_MAX_ORDER,
            max_lattice_order: DEFAULT_MAX_LATTICE_ORDER,
            max_subgroups: DEFAULT_MAX_SUBGROUPS,
        }
    }
}

impl Budget {
    pub fn with_max_order(max_order: usize) -> Self {
        Budget {
            max_order,
            ..Budget::default()
        }
    }

    /// One limit for both level orders and lattice enumeration.
    pub fn for_levels(max_order: usize) -> Self {
        Budget {
            max_order,
            max_lattice_order: max_order,
            ..Budget::default()
        }
    }

    pub fn check_order(&self, order: u128) -> Result<()> {
        if order > self.max_order as u128 {
            Err(Error::budget("group order", order, self.max_order as u128))
        } else {
            Ok(())
        }
    }

    pub fn check_lattice(&self, order: usize) -> Result<()> {
        if order > self.max_lattice_order {
            Err(Error::budget(
                "group order for subgroup enumeration",
                order as u128,
                self.max_lattice_order as u128,
            ))
        } else {
            Ok(())
        }
    }
}
