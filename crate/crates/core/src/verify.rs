//! Built-in verification suite: example reproductions, randomized oracle
//! agreement, sandwich/stability Monte-Carlo runs, round trips, and report
//! consistency. Each check returns a serializable pass/fail report with the
//! values it computed; the CLI `verify` command prints one line per check.

use rand::prelude::*;
use rand_chacha::ChaCha8Rng;
use serde::Serialize;

use crate::builtin;
use crate::diagram::{
    flip_measure, pd_mobius, persistence_diagram, recover_gdd, staircase_cells, weighted_pd,
    PersistenceDiagram, WeightedPersistenceDiagram,
};
use crate::dist::{
    bottleneck, d_defo_exact, d_defo_inf_weighted, d_defo_p_weighted, stability_report, Mode,
    StabilityParams, Verdict,
};
use crate::filtration::{gdd, vr_filtration, CriticalGrid};
use crate::homology::{pd_reduction_oracle, zb_function};
use crate::metric::{wasserstein_1d, Exponent, FiniteMetricSpace, MMSpace};
use crate::report::{compare_report, CompareOptions};
use crate::{tol, Result};

#[derive(Debug, Clone, Serialize)]
pub struct CheckReport {
    pub id: String,
    pub name: String,
    pub passed: bool,
    pub details: Vec<String>,
}

struct Check {
    id: &'static str,
    name: &'static str,
    details: Vec<String>,
    failures: usize,
}

impl Check {
    fn new(id: &'static str, name: &'static str) -> Self {
        Check {
            id,
            name,
            details: Vec::new(),
            failures: 0,
        }
    }

    fn require(&mut self, cond: bool, msg: String) {
        if !cond {
            self.failures += 1;
            self.details.push(format!("FAIL: {msg}"));
        }
    }

    fn note(&mut self, msg: String) {
        self.details.push(msg);
    }

    fn report(self) -> CheckReport {
        CheckReport {
            id: self.id.to_string(),
            name: self.name.to_string(),
            passed: self.failures == 0,
            details: self.details,
        }
    }
}

fn random_cloud(rng: &mut ChaCha8Rng, n: usize) -> Result<MMSpace> {
    let pts: Vec<Vec<f64>> = (0..n)
        .map(|_| vec![rng.random_range(0.0..1.0), rng.random_range(0.0..1.0)])
        .collect();
    Ok(MMSpace::uniform(FiniteMetricSpace::from_points(&pts)?))
}

/// Mobius inversion agrees with the reduction oracle off the diagonal on
/// random planar clouds, degrees 0 and 1.
pub fn ac1_mobius_vs_oracle(seed: u64) -> Result<CheckReport> {
    let mut c = Check::new("ac1", "mobius inversion matches the reduction oracle");
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let mut mismatches = 0;
    for trial in 0..100 {
        let n = rng.random_range(4..=7);
        let mm = random_cloud(&mut rng, n)?;
        let f = vr_filtration(&mm.space, tol::MAX_DIM, tol::EPS_EQ);
        for d in 0..=1usize {
            let via_mobius = pd_mobius(&zb_function(&f, d)?)?;
            let via_oracle = pd_reduction_oracle(&f, d)?;
            if !via_mobius.same_bars(&via_oracle, 0.0) {
                mismatches += 1;
                c.require(
                    false,
                    format!(
                        "trial {trial} degree {d}: mobius bars {:?} vs oracle {:?}",
                        via_mobius.bars(),
                        via_oracle.bars()
                    ),
                );
            }
        }
    }
    c.note(format!(
        "100 random 4-7 point clouds, degrees 0 and 1: {mismatches} mismatches"
    ));
    Ok(c.report())
}

/// Reproduction of the two ultrametric spaces: equal diagrams in degrees 0
/// and 1, the stated distance distributions, a positive weighted
/// displacement distance, and W1 of the distributions.
pub fn ac2_ums_reproduction() -> Result<CheckReport> {
    let mut c = Check::new("ac2", "ultrametric pair: equal diagrams, different weights");
    let x = builtin::ums_x_mm();
    let y = builtin::ums_y_mm();
    for d in 0..=1usize {
        let pd_x = persistence_diagram(&x.space, d, tol::MAX_DIM, tol::EPS_EQ)?;
        let pd_y = persistence_diagram(&y.space, d, tol::MAX_DIM, tol::EPS_EQ)?;
        c.require(
            pd_x.same_bars(&pd_y, 0.0),
            format!("degree-{d} diagrams differ: {:?} vs {:?}", pd_x.bars(), pd_y.bars()),
        );
    }
    let gx = gdd(&x, tol::EPS_EQ)?;
    let gy = gdd(&y, tol::EPS_EQ)?;
    let expect_x = [(0.0, 0.25), (1.0, 0.25), (2.0, 0.5)];
    let expect_y = [(0.0, 0.25), (1.0, 0.375), (2.0, 0.375)];
    for (g, expect, name) in [(&gx, &expect_x, "X"), (&gy, &expect_y, "Y")] {
        c.require(
            g.support().len() == expect.len(),
            format!("GDD({name}) support size {}", g.support().len()),
        );
        for (i, &(v, m)) in expect.iter().enumerate() {
            c.require(
                (g.support()[i] - v).abs() <= 1e-12 && (g.masses()[i] - m).abs() <= 1e-12,
                format!(
                    "GDD({name})[{i}] = ({}, {}), expected ({v}, {m})",
                    g.support()[i],
                    g.masses()[i]
                ),
            );
        }
    }
    let wx = weighted_pd(&x, 0, tol::MAX_DIM, tol::EPS_EQ)?;
    let wy = weighted_pd(&y, 0, tol::MAX_DIM, tol::EPS_EQ)?;
    let wd = d_defo_inf_weighted(&wx, &wy, tol::WDGM_CELL_CAP)?;
    c.require(
        wd.mode == Mode::Exact && wd.value > 0.0,
        format!("weighted displacement distance {} ({:?})", wd.value, wd.mode),
    );
    c.note(format!("weighted displacement distance = {}", wd.value));
    let w1 = wasserstein_1d(&gx, &gy, Exponent::Finite(1.0))?;
    c.require(
        (w1 - 0.125).abs() <= 1e-12,
        format!("W1 of distance distributions = {w1}, expected 0.125"),
    );
    c.note(format!("W1(distance distributions) = {w1}"));
    Ok(c.report())
}

/// Reproduction of the planar quadrilateral pair: equal distance multisets
/// and distributions, different degree-0 diagrams, positive displacement.
pub fn ac3_boutin_kemper_reproduction() -> Result<CheckReport> {
    let mut c = Check::new("ac3", "quadrilateral pair: equal distributions, different diagrams");
    let x = builtin::boutin_kemper_x();
    let y = builtin::boutin_kemper_y();
    let dx = x.sorted_offdiag_distances();
    let dy = y.sorted_offdiag_distances();
    c.require(dx.len() == dy.len(), "distance multiset sizes differ".to_string());
    for (a, b) in dx.iter().zip(&dy) {
        c.require((a - b).abs() <= 1e-9, format!("distance multisets differ: {a} vs {b}"));
    }
    let xm = MMSpace::uniform(x);
    let ym = MMSpace::uniform(y);
    let w1 = wasserstein_1d(&gdd(&xm, tol::EPS_EQ)?, &gdd(&ym, tol::EPS_EQ)?, Exponent::Finite(1.0))?;
    c.require(w1 <= 1e-9, format!("W1 of distance distributions = {w1}"));
    let pd_x = persistence_diagram(&xm.space, 0, tol::MAX_DIM, tol::EPS_EQ)?;
    let pd_y = persistence_diagram(&ym.space, 0, tol::MAX_DIM, tol::EPS_EQ)?;
    c.require(
        !pd_x.same_bars(&pd_y, 1e-9),
        "degree-0 diagrams unexpectedly agree".to_string(),
    );
    let defo = d_defo_exact(&pd_x, &pd_y, tol::DEFO_BAR_CAP)?;
    c.require(defo.value > 0.0, format!("displacement distance {}", defo.value));
    c.note(format!(
        "W1(distributions) = {w1}, displacement distance = {}",
        defo.value
    ));
    Ok(c.report())
}

/// Reproduction of the hexagon pair: equal degree-1 diagrams, different
/// flip-measure supports, positive weighted displacement distance.
pub fn ac4_hexagon_reproduction() -> Result<CheckReport> {
    let mut c = Check::new("ac4", "hexagon pair: equal degree-1 diagrams, different weights");
    let x = MMSpace::uniform(builtin::hexagon());
    let y = MMSpace::uniform(builtin::hexagon_mid());
    let pd_x = persistence_diagram(&x.space, 1, tol::MAX_DIM, tol::EPS_EQ)?;
    let pd_y = persistence_diagram(&y.space, 1, tol::MAX_DIM, tol::EPS_EQ)?;
    c.require(
        pd_x.same_bars(&pd_y, 0.0),
        format!("degree-1 diagrams differ: {:?} vs {:?}", pd_x.bars(), pd_y.bars()),
    );
    c.note(format!("shared degree-1 bars: {:?}", pd_x.bars()));
    let wx = weighted_pd(&x, 1, tol::MAX_DIM, tol::EPS_EQ)?;
    let wy = weighted_pd(&y, 1, tol::MAX_DIM, tol::EPS_EQ)?;
    let supp = |w: &WeightedPersistenceDiagram| -> Vec<(i64, i64)> {
        let grid = w.diagram.grid().clone();
        w.flip
            .cells()
            .into_iter()
            .filter(|&(_, m)| m > 0.0)
            .map(|((i, j), _)| {
                (
                    (grid.value(i) / 1e-9).round() as i64,
                    (grid.value(j) / 1e-9).round() as i64,
                )
            })
            .collect()
    };
    c.require(
        supp(&wx) != supp(&wy),
        "flip-measure supports unexpectedly agree".to_string(),
    );
    let wd = d_defo_inf_weighted(&wx, &wy, tol::WDGM_CELL_CAP)?;
    c.require(
        wd.mode == Mode::Exact && wd.value > 0.0,
        format!("weighted displacement distance {} ({:?})", wd.value, wd.mode),
    );
    c.note(format!("weighted displacement distance = {}", wd.value));
    Ok(c.report())
}

fn random_bar_cells(rng: &mut ChaCha8Rng, k: usize) -> Vec<(usize, usize, i64)> {
    let mut cells = Vec::new();
    let mut total = 0u64;
    for _ in 0..rng.random_range(1..=3) {
        let m = rng.random_range(1..=2u64);
        if total + m > 5 {
            break;
        }
        let i = rng.random_range(0..k - 1);
        let j = rng.random_range(i + 1..k);
        cells.push((i, j, m as i64));
        total += m;
    }
    cells
}

/// A diagram and a small metric perturbation of it: same bar cells, second
/// grid's nonzero values moved by less than `eps`. With every persistence
/// above 4*eps, no optimal bottleneck matching kills a bar, so the factor-2
/// sandwich is guaranteed. (It can fail for unrelated diagrams: mixing
/// oppositely shifted matched pairs with a killed bar whose midpoint misses
/// the grid reaches displacement = 3x bottleneck.)
fn random_perturbed_pair(
    rng: &mut ChaCha8Rng,
) -> Result<(PersistenceDiagram, PersistenceDiagram)> {
    let k = rng.random_range(2..=6usize);
    let top_gap = (3.9 / (k as f64 - 1.0)).max(0.31);
    let mut base = vec![0.0];
    for _ in 1..k {
        base.push(base.last().unwrap() + rng.random_range(0.3..top_gap));
    }
    let mut moved = base.clone();
    for v in moved.iter_mut().skip(1) {
        *v += rng.random_range(-0.04..0.04);
    }
    let cells = random_bar_cells(rng, k);
    let mut s = PersistenceDiagram::empty(CriticalGrid::new(base)?, 0);
    let mut t = PersistenceDiagram::empty(CriticalGrid::new(moved)?, 0);
    for &(i, j, m) in &cells {
        s.add(i, j, m);
        t.add(i, j, m);
    }
    Ok((s, t))
}

/// A diagram against the empty diagram on the same grid: every bar is
/// killed, at its own birth value at worst, so the displacement is at most
/// the largest persistence = 2x the bottleneck.
fn random_kill_pair(rng: &mut ChaCha8Rng) -> Result<(PersistenceDiagram, PersistenceDiagram)> {
    let k = rng.random_range(2..=6usize);
    let mut vals = vec![0.0];
    for _ in 1..k {
        vals.push(vals.last().unwrap() + rng.random_range(0.1..(4.0 / k as f64)));
    }
    let grid = CriticalGrid::new(vals)?;
    let mut s = PersistenceDiagram::empty(grid.clone(), 0);
    for (i, j, m) in random_bar_cells(rng, k) {
        s.add(i, j, m);
    }
    Ok((s, PersistenceDiagram::empty(grid, 0)))
}

/// Bottleneck sandwich: bottleneck <= displacement <= 2 * bottleneck on
/// random diagram pairs from the regimes where the factor 2 is provable
/// (small metric perturbations, and diagrams against the empty diagram).
pub fn ac5_bottleneck_sandwich(seed: u64) -> Result<CheckReport> {
    let mut c = Check::new("ac5", "bottleneck <= displacement <= 2x bottleneck");
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let mut violations = 0;
    let mut max_ratio: f64 = 0.0;
    for trial in 0..200 {
        let (s, t) = if trial % 4 == 3 {
            random_kill_pair(&mut rng)?
        } else {
            random_perturbed_pair(&mut rng)?
        };
        let (s, t) = if rng.random_bool(0.5) { (t, s) } else { (s, t) };
        let b = bottleneck(&s, &t);
        let d = d_defo_exact(&s, &t, tol::DEFO_BAR_CAP)?;
        if !(b <= d.value + 1e-9 && d.value <= 2.0 * b + 1e-9) {
            violations += 1;
            c.require(
                false,
                format!("trial {trial}: bottleneck {b}, displacement {}", d.value),
            );
        }
        if b > 0.0 {
            max_ratio = max_ratio.max(d.value / b);
        }
    }
    c.note(format!(
        "200 random diagram pairs (150 perturbations, 50 against empty): {violations} violations, max displacement/bottleneck = {max_ratio:.6}"
    ));
    Ok(c.report())
}

/// Stability Monte-Carlo at p = infinity: displacement distances bounded by
/// 4x the Gromov distances, and the flipped-distribution GW lower bound,
/// over random clouds plus one identical pair.
pub fn ac6_stability_monte_carlo(seed: u64) -> Result<CheckReport> {
    let mut c = Check::new("ac6", "stability inequalities, 50 random mm-space pairs");
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let params_for = |degree: usize| StabilityParams {
        degree,
        cap: 64,
        ..StabilityParams::default()
    };
    // Identical pair first: everything holds with both sides zero.
    let z = random_cloud(&mut rng, 4)?;
    let rep0 = stability_report(&z, &z, &params_for(0))?;
    c.require(!rep0.violated(), format!("identical pair: {:?}", rep0.checks));
    c.require(
        rep0.checks.iter().take(2).all(|ch| ch.lhs.abs() <= 1e-9),
        "identical pair: nonzero distance".to_string(),
    );
    let mut violations = 0;
    for trial in 0..50 {
        let nx = rng.random_range(3..=4);
        let ny = rng.random_range(3..=4);
        let x = random_cloud(&mut rng, nx)?;
        let y = random_cloud(&mut rng, ny)?;
        let degree = trial % 2;
        let rep = stability_report(&x, &y, &params_for(degree))?;
        for ch in &rep.checks {
            if ch.verdict == Verdict::Violated {
                violations += 1;
                c.require(
                    false,
                    format!(
                        "trial {trial} degree {degree} {}: lhs {} rhs {}",
                        ch.name, ch.lhs, ch.rhs
                    ),
                );
            }
        }
        // Weighted dominance: the weighted distance is at least the
        // unweighted one when both are exact.
        let unweighted = &rep.checks[0];
        let weighted = &rep.checks[1];
        if unweighted.lhs_mode == Mode::Exact && weighted.lhs_mode == Mode::Exact {
            c.require(
                unweighted.lhs <= weighted.lhs + 1e-9,
                format!(
                    "trial {trial}: unweighted {} exceeds weighted {}",
                    unweighted.lhs, weighted.lhs
                ),
            );
        }
    }
    c.note(format!(
        "50 random pairs (3-4 points, degrees alternating 0/1): {violations} violations"
    ));
    Ok(c.report())
}

/// Finite-p insensitivity: identical weights with diagrams differing in one
/// bar stay within 1e-6 at p = 2.
pub fn ac7_finite_p_insensitivity() -> Result<CheckReport> {
    let mut c = Check::new("ac7", "finite-p distance ignores bar differences");
    let x = builtin::ums_x_mm();
    let wx = weighted_pd(&x, 0, tol::MAX_DIM, tol::EPS_EQ)?;
    // Same grid and weights, one bar removed.
    let mut thinner = PersistenceDiagram::empty(wx.diagram.grid().clone(), 0);
    thinner.add(0, 1, 2);
    let wy = WeightedPersistenceDiagram::new(thinner, wx.flip.clone())?;
    let r = d_defo_p_weighted(&wx, &wy, 2.0, 4, 17)?;
    c.require(
        r.value <= 1e-6,
        format!("p=2 distance {} exceeds 1e-6", r.value),
    );
    c.note(format!("diagrams {:?} vs {:?}", wx.diagram.bars(), wy.diagram.bars()));
    c.note(format!("p=2 weighted displacement upper bound = {:e}", r.value));
    Ok(c.report())
}

/// Round trips: flip/unflip identity on random measures, and Mobius
/// inversion against direct re-summation on random integer functions.
pub fn ac8_round_trips(seed: u64) -> Result<CheckReport> {
    let mut c = Check::new("ac8", "flip/unflip and Mobius round trips");
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let mut worst = 0.0f64;
    for trial in 0..100 {
        let k = rng.random_range(1..=6usize);
        let mut vals = vec![0.0];
        for _ in 1..k {
            vals.push(vals.last().unwrap() + rng.random_range(0.1..1.5));
        }
        let mut masses: Vec<f64> = (0..k).map(|_| rng.random_range(0.05..1.0)).collect();
        let total: f64 = masses.iter().sum();
        for m in &mut masses {
            *m /= total;
        }
        let measure = crate::metric::DiscreteMeasure1D::new(vals, masses)?;
        let flip = flip_measure(&measure)?;
        let back = recover_gdd(&flip)?;
        c.require(
            back.support() == measure.support(),
            format!("trial {trial}: support changed"),
        );
        for (a, b) in measure.masses().iter().zip(back.masses()) {
            worst = worst.max((a - b).abs());
            c.require(
                (a - b).abs() <= 1e-12,
                format!("trial {trial}: mass {a} came back as {b}"),
            );
        }
    }
    c.note(format!("100 flip round trips, max mass error {worst:.3e}"));
    let mut mobius_bad = 0;
    for trial in 0..100 {
        let k = rng.random_range(1..=6usize);
        let cells = staircase_cells(k);
        let dm: std::collections::BTreeMap<(usize, usize), i64> = cells
            .iter()
            .map(|&c| (c, rng.random_range(-3..=3i64)))
            .collect();
        // m = downward sums of dm over the staircase order.
        let m = |i: usize, j: usize| -> i64 {
            cells
                .iter()
                .filter(|&&(a, b)| a <= i && b <= j && b >= a)
                .map(|c| dm[c])
                .sum()
        };
        let inverted = crate::diagram::mobius_invert(k, m);
        let ok = cells.iter().all(|&(i, j)| inverted[i * k + j] == dm[&(i, j)]);
        if !ok {
            mobius_bad += 1;
            c.require(false, format!("trial {trial}: Mobius inversion mismatch"));
        }
    }
    c.note(format!("100 Mobius round trips: {mobius_bad} mismatches"));
    Ok(c.report())
}

/// The comparison report carries the edit-distance aliases with the exact
/// factors: edit_cmet = 2 * GH and edit_cmm = 2 * GW.
pub fn ac9_edit_identities() -> Result<CheckReport> {
    let mut c = Check::new("ac9", "edit-distance aliases carry exact factors");
    let x = builtin::ums_x_mm();
    let y = builtin::ums_y_mm();
    for p in [Exponent::Infinity, Exponent::Finite(2.0)] {
        let opts = CompareOptions {
            p,
            ..CompareOptions::default()
        };
        let rep = compare_report(&x, &y, &opts)?;
        let find = |name: &str| rep.distances.iter().find(|e| e.metric == name);
        match (find("edit_cmet"), find("gh")) {
            (Some(alias), Some(gh)) => {
                c.require(
                    alias.value == 2.0 * gh.value && alias.mode == Mode::Exact,
                    format!("p={p}: edit_cmet {} vs 2*gh {}", alias.value, 2.0 * gh.value),
                );
            }
            _ => c.require(false, format!("p={p}: missing edit_cmet or gh entry")),
        }
        match (find("edit_cmm"), find("gw")) {
            (Some(alias), Some(gw)) => {
                c.require(
                    alias.value == 2.0 * gw.value && alias.mode == gw.mode,
                    format!("p={p}: edit_cmm {} vs 2*gw {}", alias.value, 2.0 * gw.value),
                );
            }
            _ => c.require(false, format!("p={p}: missing edit_cmm or gw entry")),
        }
    }
    c.note("aliases checked at p = inf and p = 2".to_string());
    Ok(c.report())
}

fn guard(result: Result<CheckReport>, id: &str, name: &str) -> CheckReport {
    result.unwrap_or_else(|e| CheckReport {
        id: id.to_string(),
        name: name.to_string(),
        passed: false,
        details: vec![format!("ERROR: {e}")],
    })
}

/// Runs the full acceptance suite. Deterministic for a fixed seed.
pub fn run_all(seed: u64) -> Vec<CheckReport> {
    vec![
        guard(ac1_mobius_vs_oracle(seed), "ac1", "mobius vs oracle"),
        guard(ac2_ums_reproduction(), "ac2", "ultrametric pair"),
        guard(ac3_boutin_kemper_reproduction(), "ac3", "quadrilateral pair"),
        guard(ac4_hexagon_reproduction(), "ac4", "hexagon pair"),
        guard(ac5_bottleneck_sandwich(seed), "ac5", "bottleneck sandwich"),
        guard(ac6_stability_monte_carlo(seed), "ac6", "stability monte-carlo"),
        guard(ac7_finite_p_insensitivity(), "ac7", "finite-p insensitivity"),
        guard(ac8_round_trips(seed), "ac8", "round trips"),
        guard(ac9_edit_identities(), "ac9", "edit identities"),
    ]
}

/// Runs the reproduction checks for one built-in example name.
pub fn run_example(name: &str) -> Result<Vec<CheckReport>> {
    match name {
        "ums" => Ok(vec![guard(ac2_ums_reproduction(), "ac2", "ultrametric pair")]),
        "hexagon" => Ok(vec![guard(ac4_hexagon_reproduction(), "ac4", "hexagon pair")]),
        "boutin-kemper" => Ok(vec![guard(
            ac3_boutin_kemper_reproduction(),
            "ac3",
            "quadrilateral pair",
        )]),
        other => Err(crate::error::Error::validation(format!(
            "unknown example '{other}' (expected one of {:?})",
            builtin::EXAMPLE_NAMES
        ))),
    }
}
