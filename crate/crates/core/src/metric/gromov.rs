//! Gromov-Hausdorff and Gromov-Wasserstein solvers.
//!
//! `gh_exact` and `gw_inf_exact` are exact: the optimal value is one of the
//! finitely many |d_X - d_Y| gaps, so they binary-search that value set and
//! decide feasibility of each threshold with a complete constraint search
//! over correspondence cells (forward checking on uncovered rows/columns;
//! for the measured case a max-flow Hall check with min-cut-driven repair).
//! `gw_p_upper` is a certified upper bound: Frank-Wolfe style alternating
//! linearization over the transportation polytope from several seeded
//! starts.

use crate::error::Error;
use crate::flow::Dinic;
use crate::metric::{Correspondence, Coupling, FiniteMetricSpace, MMSpace};
use crate::tol;
use crate::Result;

/// Relative slack added to pairwise threshold comparisons so that values
/// equal to the threshold up to rounding stay allowed.
fn slack(t: f64) -> f64 {
    1e-12 * (1.0 + t.abs())
}

struct SearchCtx<'a> {
    n: usize,
    m: usize,
    dx: &'a FiniteMetricSpace,
    dy: &'a FiniteMetricSpace,
    /// Allowed distortion between pairs of chosen cells.
    t: f64,
    /// Marginals for the measured (Hall-checked) variant.
    weights: Option<(&'a [f64], &'a [f64])>,
    nodes: u64,
    budget: u64,
}

impl SearchCtx<'_> {
    #[inline]
    fn compat(&self, a: (usize, usize), b: (usize, usize)) -> bool {
        (self.dx.dist(a.0, b.0) - self.dy.dist(a.1, b.1)).abs() <= self.t + slack(self.t)
    }

    /// Transportation feasibility of the chosen support; on failure returns
    /// the violated row set A and its chosen-neighborhood N(A) as masks.
    fn hall_check(&self, chosen: &[(usize, usize)]) -> std::result::Result<(), (u64, u64)> {
        let Some((a, b)) = self.weights else {
            return Ok(());
        };
        let mut net = Dinic::new(self.n + self.m + 2);
        let s = self.n + self.m;
        let t = s + 1;
        for (i, &ai) in a.iter().enumerate() {
            net.add_edge(s, i, ai);
        }
        for (j, &bj) in b.iter().enumerate() {
            net.add_edge(self.n + j, t, bj);
        }
        for &(i, j) in chosen {
            net.add_edge(i, self.n + j, f64::INFINITY);
        }
        let total: f64 = a.iter().sum();
        let flow = net.max_flow(s, t);
        if flow >= total - 1e-11 {
            return Ok(());
        }
        let reach = net.residual_reachable(s);
        let mut rows = 0u64;
        let mut cols = 0u64;
        for i in 0..self.n {
            if reach[i] {
                rows |= 1 << i;
            }
        }
        for j in 0..self.m {
            if reach[self.n + j] {
                cols |= 1 << j;
            }
        }
        Err((rows, cols))
    }

    fn search(
        &mut self,
        chosen: &mut Vec<(usize, usize)>,
        candidates: &[(usize, usize)],
        row_cov: u64,
        col_cov: u64,
    ) -> Result<Option<Vec<(usize, usize)>>> {
        self.nodes += 1;
        if self.nodes > self.budget {
            return Err(Error::cap(format!(
                "correspondence search exceeded {} nodes",
                self.budget
            )));
        }

        let rows_done = row_cov.count_ones() as usize == self.n;
        let cols_done = col_cov.count_ones() as usize == self.m;
        if rows_done && cols_done {
            match self.hall_check(chosen) {
                Ok(()) => return Ok(Some(chosen.clone())),
                Err((bad_rows, bad_cols)) => {
                    // Any feasible superset must add a cell joining a
                    // violated row to a column outside its neighborhood.
                    for idx in 0..candidates.len() {
                        let c = candidates[idx];
                        if bad_rows >> c.0 & 1 == 0 || bad_cols >> c.1 & 1 == 1 {
                            continue;
                        }
                        let next: Vec<_> = candidates
                            .iter()
                            .copied()
                            .filter(|&o| o != c && self.compat(c, o))
                            .collect();
                        chosen.push(c);
                        let got = self.search(chosen, &next, row_cov, col_cov)?;
                        chosen.pop();
                        if got.is_some() {
                            return Ok(got);
                        }
                    }
                    return Ok(None);
                }
            }
        }

        // Most constrained uncovered row or column.
        let mut row_counts = vec![0usize; self.n];
        let mut col_counts = vec![0usize; self.m];
        for &(i, j) in candidates {
            row_counts[i] += 1;
            col_counts[j] += 1;
        }
        let mut pick_row = usize::MAX;
        let mut pick_col = usize::MAX;
        let mut best = usize::MAX;
        for i in 0..self.n {
            if row_cov >> i & 1 == 0 && row_counts[i] < best {
                best = row_counts[i];
                pick_row = i;
                pick_col = usize::MAX;
            }
        }
        for j in 0..self.m {
            if col_cov >> j & 1 == 0 && col_counts[j] < best {
                best = col_counts[j];
                pick_col = j;
                pick_row = usize::MAX;
            }
        }
        if best == 0 {
            return Ok(None);
        }

        for idx in 0..candidates.len() {
            let c = candidates[idx];
            if pick_row != usize::MAX && c.0 != pick_row {
                continue;
            }
            if pick_col != usize::MAX && c.1 != pick_col {
                continue;
            }
            let next: Vec<_> = candidates
                .iter()
                .copied()
                .filter(|&o| o != c && self.compat(c, o))
                .collect();
            chosen.push(c);
            let got = self.search(
                chosen,
                &next,
                row_cov | 1 << c.0,
                col_cov | 1 << c.1,
            )?;
            chosen.pop();
            if got.is_some() {
                return Ok(got);
            }
        }
        Ok(None)
    }
}

/// Is there a correspondence (pairwise distortion <= t, Hall-feasible when
/// weighted)? Returns its cells if so.
fn feasible_at(
    dx: &FiniteMetricSpace,
    dy: &FiniteMetricSpace,
    weights: Option<(&[f64], &[f64])>,
    t: f64,
) -> Result<Option<Vec<(usize, usize)>>> {
    let (n, m) = (dx.len(), dy.len());
    if n > 64 || m > 64 {
        return Err(Error::cap("correspondence search limited to 64 points per side"));
    }
    let mut ctx = SearchCtx {
        n,
        m,
        dx,
        dy,
        t,
        weights,
        nodes: 0,
        budget: tol::SEARCH_BUDGET,
    };
    let all: Vec<(usize, usize)> = (0..n)
        .flat_map(|i| (0..m).map(move |j| (i, j)))
        .collect();
    ctx.search(&mut Vec::new(), &all, 0, 0)
}

/// All candidate distortion values |d_X(i,k) - d_Y(j,l)|, sorted distinct.
fn distortion_values(dx: &FiniteMetricSpace, dy: &FiniteMetricSpace) -> Vec<f64> {
    let n = dx.len();
    let m = dy.len();
    let mut vals = Vec::with_capacity(n * n * m * m / 2 + 1);
    vals.push(0.0);
    for i in 0..n {
        for k in i..n {
            let dxv = dx.dist(i, k);
            for j in 0..m {
                for l in j..m {
                    vals.push((dxv - dy.dist(j, l)).abs());
                }
            }
        }
    }
    vals.sort_by(f64::total_cmp);
    vals.dedup();
    vals
}

fn min_distortion(
    dx: &FiniteMetricSpace,
    dy: &FiniteMetricSpace,
    weights: Option<(&[f64], &[f64])>,
) -> Result<(f64, Vec<(usize, usize)>)> {
    let vals = distortion_values(dx, dy);
    let mut lo = 0usize;
    let mut hi = vals.len() - 1;
    let mut best = feasible_at(dx, dy, weights, vals[hi])?
        .ok_or_else(|| Error::internal("full-threshold correspondence search failed"))?;
    if let Some(cells) = feasible_at(dx, dy, weights, vals[lo])? {
        return Ok((vals[lo], cells));
    }
    // Invariant: infeasible at lo, feasible at hi.
    while hi - lo > 1 {
        let mid = lo + (hi - lo) / 2;
        match feasible_at(dx, dy, weights, vals[mid])? {
            Some(cells) => {
                best = cells;
                hi = mid;
            }
            None => lo = mid,
        }
    }
    Ok((vals[hi], best))
}

/// Exact Gromov-Hausdorff distance between finite metric spaces:
/// half the minimal distortion over correspondences.
///
/// Errors with `CapExceeded` when |X| * |Y| > cap; the search itself is also
/// node-budgeted.
pub fn gh_exact(
    x: &FiniteMetricSpace,
    y: &FiniteMetricSpace,
    cap: usize,
) -> Result<(f64, Correspondence)> {
    if x.len() * y.len() > cap {
        return Err(Error::cap(format!(
            "gh_exact: |X|*|Y| = {} exceeds cap {cap}; raise the cap or use gw_p_upper",
            x.len() * y.len()
        )));
    }
    let (dis, cells) = min_distortion(x, y, None)?;
    Ok((dis / 2.0, Correspondence::new(x.len(), y.len(), cells)?))
}

/// Exact Gromov-Wasserstein infinity distance between mm-spaces: half the
/// minimal infinity-distortion over couplings. The distortion of a coupling
/// only depends on its support, so the optimum is over Hall-feasible
/// correspondence supports.
pub fn gw_inf_exact(
    x: &MMSpace,
    y: &MMSpace,
    cap: usize,
) -> Result<(f64, Correspondence)> {
    if x.len() * y.len() > cap {
        return Err(Error::cap(format!(
            "gw_inf_exact: |X|*|Y| = {} exceeds cap {cap}; raise the cap or use gw_p_upper",
            x.len() * y.len()
        )));
    }
    let (dis, cells) = min_distortion(&x.space, &y.space, Some((x.masses(), y.masses())))?;
    Ok((dis / 2.0, Correspondence::new(x.len(), y.len(), cells)?))
}

/// Decision procedure: is d_GW,inf(X, Y) <= t? On success returns a coupling
/// support certifying it (distortion <= 2t). One-sided and exact; used when
/// the full optimum is out of cap but a single comparison is needed.
pub fn gw_inf_feasible_at(x: &MMSpace, y: &MMSpace, t: f64) -> Result<Option<Correspondence>> {
    let cells = feasible_at(
        &x.space,
        &y.space,
        Some((x.masses(), y.masses())),
        2.0 * t,
    )?;
    cells
        .map(|c| Correspondence::new(x.len(), y.len(), c))
        .transpose()
}

/// Certified upper bound for the Gromov-Wasserstein p-distance.
#[derive(Debug, Clone)]
pub struct GwUpper {
    /// Upper bound for d_GW,p: half the p-distortion of `coupling`.
    pub value: f64,
    pub coupling: Coupling,
    pub restarts: usize,
}

/// Frank-Wolfe style alternating linearization for the GW_p objective over
/// the transportation polytope, restarted from the product coupling and from
/// seeded northwest-corner vertices. Always returns a coupling; the value is
/// a certified upper bound for d_GW,p (finite p).
pub fn gw_p_upper(
    x: &MMSpace,
    y: &MMSpace,
    p: f64,
    restarts: usize,
    seed: u64,
) -> Result<GwUpper> {
    if !p.is_finite() || p < 1.0 {
        return Err(Error::validation(format!("gw_p_upper needs finite p >= 1, got {p}")));
    }
    let (n, m) = (x.len(), y.len());
    let cells = n * m;
    // |d_X - d_Y|^p kernel over cell pairs, materialized when affordable.
    let kernel: Option<Vec<f64>> = if cells * cells <= 8_000_000 {
        let mut k = vec![0.0; cells * cells];
        for c1 in 0..cells {
            let (i1, j1) = (c1 / m, c1 % m);
            for c2 in 0..cells {
                let (i2, j2) = (c2 / m, c2 % m);
                k[c1 * cells + c2] = (x.dist(i1, i2) - y.dist(j1, j2)).abs().powf(p);
            }
        }
        Some(k)
    } else {
        None
    };
    let kernel_at = |c1: usize, c2: usize| -> f64 {
        match &kernel {
            Some(k) => k[c1 * cells + c2],
            None => {
                let (i1, j1) = (c1 / m, c1 % m);
                let (i2, j2) = (c2 / m, c2 % m);
                (x.dist(i1, i2) - y.dist(j1, j2)).abs().powf(p)
            }
        }
    };
    let (obj, eta) =
        crate::opt::fw_quadratic_min(x.masses(), y.masses(), kernel_at, restarts, seed)?;
    let coupling = Coupling {
        rows: n,
        cols: m,
        mass: eta,
    };
    coupling.validate_marginals(
        x.masses(),
        y.masses(),
        tol::EPS_MASS * (n + m) as f64 * 100.0,
    )?;
    Ok(GwUpper {
        value: 0.5 * obj.max(0.0).powf(1.0 / p),
        coupling,
        restarts: restarts.max(1),
    })
}
