//! Exact transportation LP solver (MODI / transportation simplex) and the
//! northwest-corner rule for basic feasible starting vertices.

use crate::error::Error;
use crate::metric::Coupling;
use crate::Result;

/// Relative tolerance for "negative reduced cost" in the simplex pricing step.
const PRICE_TOL: f64 = 1e-11;

/// Northwest-corner basic feasible solution for balanced supply/demand
/// vectors. Returns a coupling whose support is a spanning tree of the
/// transportation graph (degenerate zero cells included in the flow matrix
/// only implicitly; the returned matrix just holds the masses).
pub fn northwest_corner(supply: &[f64], demand: &[f64]) -> Coupling {
    let (n, m) = (supply.len(), demand.len());
    let mut a = supply.to_vec();
    let mut b = demand.to_vec();
    let mut mass = vec![0.0; n * m];
    let (mut i, mut j) = (0usize, 0usize);
    loop {
        let x = a[i].min(b[j]).max(0.0);
        mass[i * m + j] = x;
        a[i] -= x;
        b[j] -= x;
        if i == n - 1 && j == m - 1 {
            break;
        }
        if a[i] <= b[j] && i < n - 1 {
            i += 1;
        } else {
            j += 1;
        }
    }
    Coupling { rows: n, cols: m, mass }
}

/// Solves min <cost, gamma> over couplings of `supply` and `demand` exactly
/// (up to float pricing tolerance) with the transportation simplex.
///
/// `cost` is row-major n x m. Supply and demand must balance within 1e-9.
pub fn transport_lp(supply: &[f64], demand: &[f64], cost: &[f64]) -> Result<Coupling> {
    let (n, m) = (supply.len(), demand.len());
    if cost.len() != n * m {
        return Err(Error::validation("cost matrix shape mismatch"));
    }
    if n == 0 || m == 0 {
        return Err(Error::validation("empty marginals"));
    }
    let (sa, sb) = (supply.iter().sum::<f64>(), demand.iter().sum::<f64>());
    if (sa - sb).abs() > 1e-9 {
        return Err(Error::validation(format!(
            "unbalanced transportation problem: {sa} vs {sb}"
        )));
    }
    if supply.iter().chain(demand).any(|&v| v < 0.0) {
        return Err(Error::validation("negative supply or demand"));
    }

    // Basis as a boolean matrix plus the flow values. The northwest-corner
    // walk marks exactly n + m - 1 basic cells (some possibly zero).
    let mut flow = vec![0.0; n * m];
    let mut basic = vec![false; n * m];
    {
        let mut a = supply.to_vec();
        let mut b = demand.to_vec();
        let (mut i, mut j) = (0usize, 0usize);
        loop {
            let x = a[i].min(b[j]).max(0.0);
            flow[i * m + j] = x;
            basic[i * m + j] = true;
            a[i] -= x;
            b[j] -= x;
            if i == n - 1 && j == m - 1 {
                break;
            }
            if a[i] <= b[j] && i < n - 1 {
                i += 1;
            } else {
                j += 1;
            }
        }
    }

    let scale = cost.iter().fold(1.0f64, |acc, &c| acc.max(c.abs()));
    let tol = PRICE_TOL * scale;
    let max_pivots = 2000 * (n + m);

    // Node indexing for the tree walk: rows 0..n, columns n..n+m.
    let mut adj: Vec<Vec<usize>> = vec![Vec::new(); n + m];
    let rebuild_adj = |basic: &[bool], adj: &mut Vec<Vec<usize>>| {
        for l in adj.iter_mut() {
            l.clear();
        }
        for i in 0..n {
            for j in 0..m {
                if basic[i * m + j] {
                    adj[i].push(n + j);
                    adj[n + j].push(i);
                }
            }
        }
    };

    for _pivot in 0..max_pivots {
        // Potentials from the spanning tree: cost[i][j] = u[i] + v[j] on
        // basic cells.
        rebuild_adj(&basic, &mut adj);
        let mut u = vec![f64::NAN; n];
        let mut v = vec![f64::NAN; m];
        u[0] = 0.0;
        let mut stack = vec![0usize];
        let mut seen = vec![false; n + m];
        seen[0] = true;
        while let Some(node) = stack.pop() {
            for &next in &adj[node] {
                if seen[next] {
                    continue;
                }
                seen[next] = true;
                if next >= n {
                    let (i, j) = (node, next - n);
                    v[j] = cost[i * m + j] - u[i];
                } else {
                    let (i, j) = (next, node - n);
                    u[i] = cost[i * m + j] - v[j];
                }
                stack.push(next);
            }
        }
        if seen.iter().any(|&s| !s) {
            return Err(Error::internal("transportation basis is not spanning"));
        }

        // Bland pricing: first cell (row-major) with negative reduced cost.
        let mut entering = None;
        'scan: for i in 0..n {
            for j in 0..m {
                if !basic[i * m + j] && cost[i * m + j] - u[i] - v[j] < -tol {
                    entering = Some((i, j));
                    break 'scan;
                }
            }
        }
        let Some((ei, ej)) = entering else {
            return Ok(Coupling { rows: n, cols: m, mass: flow });
        };

        // Unique tree path from row ei to column ej; with the entering arc it
        // closes the pivot cycle. Signs alternate starting with + on the
        // entering cell.
        let mut parent = vec![usize::MAX; n + m];
        parent[ei] = ei;
        let mut queue = std::collections::VecDeque::from([ei]);
        while let Some(node) = queue.pop_front() {
            if node == n + ej {
                break;
            }
            for &next in &adj[node] {
                if parent[next] == usize::MAX {
                    parent[next] = node;
                    queue.push_back(next);
                }
            }
        }
        if parent[n + ej] == usize::MAX {
            return Err(Error::internal("transportation basis lost connectivity"));
        }
        let mut path = vec![n + ej];
        while *path.last().unwrap() != ei {
            path.push(parent[*path.last().unwrap()]);
        }
        path.reverse(); // row ei, ..., col ej

        // Cells along the cycle: entering (+), then alternating along the
        // path back from col ej to row ei.
        let mut minus_cells: Vec<(usize, usize)> = Vec::new();
        let mut cycle: Vec<((usize, usize), bool)> = vec![((ei, ej), true)];
        let mut positive = false; // first path arc (from ei) is a minus arc
        for w in path.windows(2) {
            let (a, b) = (w[0], w[1]);
            let (i, j) = if a < n { (a, b - n) } else { (b, a - n) };
            cycle.push(((i, j), positive));
            if !positive {
                minus_cells.push((i, j));
            }
            positive = !positive;
        }

        // Minimum ratio with Bland tie-break (smallest cell index leaves).
        let mut delta = f64::INFINITY;
        let mut leaving = minus_cells[0];
        for &(i, j) in &minus_cells {
            let f = flow[i * m + j];
            if f < delta - 1e-15 || (f <= delta + 1e-15 && (i, j) < leaving) {
                delta = delta.min(f);
                leaving = (i, j);
            }
        }
        for &((i, j), plus) in &cycle {
            if plus {
                flow[i * m + j] += delta;
            } else {
                flow[i * m + j] = (flow[i * m + j] - delta).max(0.0);
            }
        }
        basic[ei * m + ej] = true;
        basic[leaving.0 * m + leaving.1] = false;
        flow[leaving.0 * m + leaving.1] = 0.0;
    }
    Err(Error::internal("transportation simplex exceeded pivot budget"))
}
