//! Default numerical tolerances and solver caps.
//!
//! Every tolerance used for a decision (grouping, validation, feasibility)
//! lives here so the acceptance thresholds are auditable in one place.

/// Equality tolerance for grid values: distances closer than this are grouped
/// into one critical value, and value-level diagram comparisons use it too.
pub const EPS_EQ: f64 = 1e-9;

/// Triangle-inequality slack allowed when validating a pseudo-metric.
pub const EPS_TRI: f64 = 1e-9;

/// Mass tolerance: probability vectors must sum to 1 within this, coupling
/// marginals must match within it.
pub const EPS_MASS: f64 = 1e-12;

/// Support-repair mass for the finite-p weighted displacement upper bound:
/// this fraction of the optimized coupling is swapped for the product
/// coupling so the matching support carries positive mass.
pub const EPS_SUPP: f64 = 1e-7;

/// Default cap on |X|*|Y| for the exact correspondence solvers
/// (`gh_exact`, `gw_inf_exact`).
pub const GH_CAP: usize = 20;

/// Default cap on total bar multiplicity per side for `d_defo_exact`.
pub const DEFO_BAR_CAP: u64 = 8;

/// Default cap on |intervals(X)| * |intervals(Y)| for the exact weighted
/// infinity-displacement solver.
pub const WDGM_CELL_CAP: usize = 4096;

/// Default maximal simplex dimension for VR filtrations (computes homology
/// in degrees 0..max_dim-1 with full boundary information).
pub const MAX_DIM: usize = 2;

/// Node budget for the exact correspondence search; exceeding it is reported
/// as an error instead of hanging.
pub const SEARCH_BUDGET: u64 = 50_000_000;
