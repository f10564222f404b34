//! Solvers. Each returns a satisfying orientation or `None` for UNSAT.

pub mod affine;
pub mod brute;
pub mod flowcount;
pub(crate) mod csp;
pub mod gapfree;
pub mod k5;
pub mod lp;
pub mod matching;
pub mod monotone;
pub(crate) mod simplex;
pub mod two_color;
pub mod two_sat;

pub use affine::solve_affine;
pub use brute::solve_brute;
pub use flowcount::solve_net_flow;
pub use gapfree::solve_gapfree;
pub use k5::solve_planar_k5;
pub use lp::{solve_planar_alternator_lp, solve_planar_alternator_lp_traced, LpMethod, LpTrace};
pub use monotone::{solve_monotone, Monotone};
pub use two_color::two_color_orient;
pub use two_sat::solve_2sat;

use std::fmt;
use std::str::FromStr;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::instance::{Instance, Orientation};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub enum Algorithm {
    #[serde(rename = "2sat")]
    TwoSat,
    #[serde(rename = "affine")]
    Affine,
    #[serde(rename = "gapfree")]
    GapFree,
    #[serde(rename = "top-down")]
    TopDown,
    #[serde(rename = "bottom-up")]
    BottomUp,
    #[serde(rename = "k5")]
    PlanarK5,
    #[serde(rename = "lp")]
    PlanarLp,
    #[serde(rename = "netflow")]
    NetFlow,
    #[serde(rename = "brute")]
    Brute,
}

impl Algorithm {
    pub const ALL: [Algorithm; 9] = [
        Algorithm::TwoSat,
        Algorithm::Affine,
        Algorithm::GapFree,
        Algorithm::TopDown,
        Algorithm::BottomUp,
        Algorithm::PlanarK5,
        Algorithm::PlanarLp,
        Algorithm::NetFlow,
        Algorithm::Brute,
    ];

    pub fn name(self) -> &'static str {
        match self {
            Algorithm::TwoSat => "2sat",
            Algorithm::Affine => "affine",
            Algorithm::GapFree => "gapfree",
            Algorithm::TopDown => "top-down",
            Algorithm::BottomUp => "bottom-up",
            Algorithm::PlanarK5 => "k5",
            Algorithm::PlanarLp => "lp",
            Algorithm::NetFlow => "netflow",
            Algorithm::Brute => "brute",
        }
    }

    /// Run on `inst`. The k5 solver takes its equalizer size from the
    /// instance (5 if there is none).
    pub fn run(self, inst: &Instance) -> Result<Option<Orientation>> {
        match self {
            Algorithm::TwoSat => solve_2sat(inst),
            Algorithm::Affine => solve_affine(inst),
            Algorithm::GapFree => solve_gapfree(inst),
            Algorithm::TopDown => solve_monotone(inst, Monotone::TopDown),
            Algorithm::BottomUp => solve_monotone(inst, Monotone::BottomUp),
            Algorithm::PlanarK5 => {
                let k = k5::k5_size(inst)
                    .ok_or_else(|| Error::Precondition("not a k5 instance (mixed or small equalizers, or other types)".into()))?;
                solve_planar_k5(inst, k)
            }
            Algorithm::PlanarLp => solve_planar_alternator_lp(inst),
            Algorithm::NetFlow => solve_net_flow(inst),
            Algorithm::Brute => solve_brute(inst),
        }
    }
}

impl fmt::Display for Algorithm {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

impl FromStr for Algorithm {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        Algorithm::ALL
            .into_iter()
            .find(|a| a.name() == s)
            .ok_or_else(|| Error::Invalid(format!("unknown algorithm {s:?}")))
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub enum Dispatch {
    Solved { algorithm: Algorithm, orientation: Option<Orientation> },
    NoneKnown,
}

/// Pick the first applicable polynomial algorithm and run it. Falls back to
/// brute force only when `allow_brute` is set.
pub fn dispatch(inst: &Instance, allow_brute: bool) -> Result<Dispatch> {
    let algorithm = match crate::classify::choose_algorithm(inst) {
        Some(a) => a,
        None if allow_brute => Algorithm::Brute,
        None => return Ok(Dispatch::NoneKnown),
    };
    Ok(Dispatch::Solved { algorithm, orientation: algorithm.run(inst)? })
}
