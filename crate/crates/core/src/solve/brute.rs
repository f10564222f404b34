use crate::error::{Error, Result};
use crate::instance::{Instance, Orientation};
use crate::search::{Search, DEFAULT_EDGE_CAP};

pub fn solve_brute(inst: &Instance) -> Result<Option<Orientation>> {
    solve_brute_with_cap(inst, DEFAULT_EDGE_CAP)
}

pub fn solve_brute_with_cap(inst: &Instance, cap: usize) -> Result<Option<Orientation>> {
    check_cap(inst, cap)?;
    Ok(Search::new(inst, &[]).first_solution().map(Orientation))
}

/// Number of satisfying orientations.
pub fn count_brute(inst: &Instance) -> Result<u64> {
    count_brute_with_cap(inst, DEFAULT_EDGE_CAP)
}

pub fn count_brute_with_cap(inst: &Instance, cap: usize) -> Result<u64> {
    check_cap(inst, cap)?;
    Ok(Search::new(inst, &[]).count())
}

fn check_cap(inst: &Instance, cap: usize) -> Result<()> {
    if inst.num_edges() > cap {
        return Err(Error::CapExceeded { size: inst.num_edges(), cap });
    }
    Ok(())
}
