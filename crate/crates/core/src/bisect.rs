//! Threshold bisection shared by the PDE and reduced-model shooting.
//!
//! The classification of a trajectory as a function of the unstable-mode
//! offset flips exactly once across the stable manifold; the bisection only
//! assumes that single flip, not its orientation. An `Undecided` probe
//! (bounded over the whole classification horizon) means the offset is on
//! the manifold within floating-point resolution and is accepted outright.

use crate::{Error, Result};
use serde::Serialize;

/// Outcome of classifying one trajectory.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
#[serde(rename_all = "snake_case")]
pub enum Branch {
    Blowup,
    Dispersal,
    Undecided,
}

#[derive(Debug, Clone, Copy)]
pub struct BisectSettings {
    /// Initial bracket half-width around offset zero.
    pub seed_half_width: f64,
    /// Stop once the bracket is narrower than this.
    pub tol: f64,
    pub max_probes: usize,
}

#[derive(Debug, Clone, Copy, Serialize)]
pub struct BisectOutcome {
    /// Accepted offset.
    pub value: f64,
    /// Number of classified trajectories.
    pub probes: usize,
    /// Final bracket (lo, hi); collapsed when an undecided probe was accepted.
    pub bracket: (f64, f64),
}

/// Bisects `classify` to a flip point. Starts from `[-seed, +seed]`, widens
/// the bracket geometrically in the indicated direction while both ends
/// classify alike, then halves to `tol`.
pub fn bisect_threshold(
    mut classify: impl FnMut(f64) -> Branch,
    settings: BisectSettings,
) -> Result<BisectOutcome> {
    let mut probes = 0usize;
    let mut run = |x: f64, probes: &mut usize| -> Branch {
        *probes += 1;
        classify(x)
    };
    let (mut lo, mut hi) = (-settings.seed_half_width, settings.seed_half_width);
    let mut c_lo = run(lo, &mut probes);
    if c_lo == Branch::Undecided {
        return Ok(BisectOutcome {
            value: lo,
            probes,
            bracket: (lo, lo),
        });
    }
    let mut c_hi = run(hi, &mut probes);
    if c_hi == Branch::Undecided {
        return Ok(BisectOutcome {
            value: hi,
            probes,
            bracket: (hi, hi),
        });
    }
    let mut widenings = 0;
    while c_lo == c_hi {
        widenings += 1;
        if widenings > 60 || probes >= settings.max_probes {
            return Err(Error::SameBranchBracket);
        }
        let width = hi - lo;
        // blowup sits above the manifold (calibrated in threshold::tests),
        // so both-blowup widens downward and both-dispersal upward
        match (c_lo, c_hi) {
            (Branch::Blowup, Branch::Blowup) => {
                hi = lo;
                c_hi = c_lo;
                lo -= 4.0 * width;
                c_lo = run(lo, &mut probes);
            }
            _ => {
                lo = hi;
                c_lo = c_hi;
                hi += 4.0 * width;
                c_hi = run(hi, &mut probes);
            }
        }
        if c_lo == Branch::Undecided {
            return Ok(BisectOutcome {
                value: lo,
                probes,
                bracket: (lo, lo),
            });
        }
        if c_hi == Branch::Undecided {
            return Ok(BisectOutcome {
                value: hi,
                probes,
                bracket: (hi, hi),
            });
        }
    }
    while hi - lo > settings.tol && probes < settings.max_probes {
        let mid = 0.5 * (lo + hi);
        if mid == lo || mid == hi {
            break; // bracket at floating-point resolution
        }
        match run(mid, &mut probes) {
            Branch::Undecided => {
                return Ok(BisectOutcome {
                    value: mid,
                    probes,
                    bracket: (mid, mid),
                })
            }
            c if c == c_lo => lo = mid,
            _ => hi = mid,
        }
    }
    Ok(BisectOutcome {
        value: 0.5 * (lo + hi),
        probes,
        bracket: (lo, hi),
    })
}
