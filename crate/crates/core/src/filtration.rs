//! Critical grids, Vietoris-Rips complexes and filtrations, and the global
//! distribution of distances.

use serde::{Deserialize, Serialize};

use crate::error::Error;
use crate::metric::{DiscreteMeasure1D, FiniteMetricSpace, MMSpace};
use crate::Result;

/// The finite set of critical values of a space: its distinct distances
/// (always including 0), grouped within an equality tolerance. Each group is
/// represented by its minimum.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct CriticalGrid {
    values: Vec<f64>,
}

impl CriticalGrid {
    pub fn new(values: Vec<f64>) -> Result<Self> {
        if values.first() != Some(&0.0) {
            return Err(Error::validation("critical grid must start at 0"));
        }
        if values.iter().any(|v| v.is_nan()) || values.windows(2).any(|w| w[1] <= w[0]) {
            return Err(Error::validation("critical grid must be strictly increasing"));
        }
        Ok(CriticalGrid { values })
    }

    pub fn values(&self) -> &[f64] {
        &self.values
    }

    pub fn len(&self) -> usize {
        self.values.len()
    }

    pub fn is_empty(&self) -> bool {
        self.values.is_empty()
    }

    pub fn value(&self, idx: usize) -> f64 {
        self.values[idx]
    }

    /// Index of the group a distance value belongs to: the last grid value
    /// not exceeding it. Distances always lie within their group's
    /// tolerance of the representative.
    pub fn snap(&self, v: f64) -> usize {
        debug_assert!(v >= 0.0);
        self.values.partition_point(|&g| g <= v).saturating_sub(1)
    }
}

/// Groups the distance values of a space into a critical grid, merging
/// values within `eps_eq` of their group's minimum.
pub fn critical_grid(space: &FiniteMetricSpace, eps_eq: f64) -> CriticalGrid {
    let mut vals: Vec<f64> = space.values().collect();
    vals.push(0.0);
    vals.sort_by(f64::total_cmp);
    let mut grid = Vec::new();
    let mut group_min = f64::NEG_INFINITY;
    for v in vals {
        if grid.is_empty() || v > group_min + eps_eq {
            group_min = v;
            grid.push(v);
        }
    }
    CriticalGrid { values: grid }
}

/// A finite simplicial complex on vertex set 0..n, stored per dimension as
/// sorted vertex lists. Closed under faces by construction.
#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct SimplicialComplex {
    pub n_vertices: usize,
    /// by_dim[d] lists the d-simplices, each a sorted vertex list; the
    /// lists themselves are in lexicographic order.
    pub by_dim: Vec<Vec<Vec<usize>>>,
}

impl SimplicialComplex {
    pub fn dim(&self) -> usize {
        self.by_dim.len().saturating_sub(1)
    }

    pub fn simplices(&self, d: usize) -> &[Vec<usize>] {
        self.by_dim.get(d).map(Vec::as_slice).unwrap_or(&[])
    }

    pub fn contains(&self, verts: &[usize]) -> bool {
        let d = verts.len().saturating_sub(1);
        self.by_dim
            .get(d)
            .is_some_and(|list| list.binary_search_by(|s| s.as_slice().cmp(verts)).is_ok())
    }

    /// Checks face closure; used by tests and input validation.
    pub fn validate_closure(&self) -> Result<()> {
        for d in 1..self.by_dim.len() {
            for s in &self.by_dim[d] {
                for skip in 0..s.len() {
                    let face: Vec<usize> = s
                        .iter()
                        .enumerate()
                        .filter(|&(k, _)| k != skip)
                        .map(|(_, &v)| v)
                        .collect();
                    if !self.contains(&face) {
                        return Err(Error::validation(format!(
                            "complex not closed under faces: {s:?} present, {face:?} missing"
                        )));
                    }
                }
            }
        }
        Ok(())
    }
}

/// A simplex of a VR filtration with its diameter and the grid index at
/// which it enters.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct FilteredSimplex {
    pub verts: Vec<usize>,
    pub diam: f64,
    pub grid_idx: usize,
}

/// The full Vietoris-Rips filtration of a finite space up to `max_dim`,
/// indexed by the critical grid. `F(q_i)` consists of the simplices with
/// `grid_idx <= i`.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct VRFiltration {
    pub grid: CriticalGrid,
    pub n_vertices: usize,
    pub max_dim: usize,
    /// by_dim[d] sorted by (grid_idx, verts).
    pub by_dim: Vec<Vec<FilteredSimplex>>,
}

impl VRFiltration {
    /// The complex at filtration value `r` (simplices of diameter <= the
    /// grid group of r).
    pub fn complex_at(&self, r: f64) -> SimplicialComplex {
        let idx = self.grid.snap(r.max(0.0));
        let by_dim = self
            .by_dim
            .iter()
            .map(|list| {
                let mut simps: Vec<Vec<usize>> = list
                    .iter()
                    .filter(|s| s.grid_idx <= idx)
                    .map(|s| s.verts.clone())
                    .collect();
                simps.sort();
                simps
            })
            .collect();
        SimplicialComplex {
            n_vertices: self.n_vertices,
            by_dim,
        }
    }

    /// Number of d-simplices present at grid index `idx`.
    pub fn count_at(&self, d: usize, idx: usize) -> usize {
        self.by_dim
            .get(d)
            .map(|list| list.partition_point(|s| s.grid_idx <= idx))
            .unwrap_or(0)
    }
}

/// A VR filtration together with the global distribution of distances as
/// grid weights.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct WeightedVRFiltration {
    pub filtration: VRFiltration,
    /// Probability measure on the grid values; fully supported.
    pub weights: DiscreteMeasure1D,
}

/// The Vietoris-Rips complex of `space` at scale `r`: all simplices up to
/// `max_dim` whose pairwise distances are at most `r + eps_eq`. Built by
/// incremental clique expansion over the neighbourhood graph.
pub fn vr_complex(
    space: &FiniteMetricSpace,
    r: f64,
    max_dim: usize,
    eps_eq: f64,
) -> SimplicialComplex {
    let n = space.len();
    let cutoff = r + eps_eq;
    let mut by_dim: Vec<Vec<Vec<usize>>> = vec![(0..n).map(|v| vec![v]).collect()];
    for d in 1..=max_dim {
        let mut next: Vec<Vec<usize>> = Vec::new();
        for s in &by_dim[d - 1] {
            let last = *s.last().expect("simplices are non-empty");
            for u in (last + 1)..n {
                if s.iter().all(|&w| space.dist(w, u) <= cutoff) {
                    let mut bigger = s.clone();
                    bigger.push(u);
                    next.push(bigger);
                }
            }
        }
        if next.is_empty() {
            break;
        }
        next.sort();
        by_dim.push(next);
    }
    SimplicialComplex {
        n_vertices: n,
        by_dim,
    }
}

/// The full VR filtration over the critical grid, up to `max_dim`.
pub fn vr_filtration(space: &FiniteMetricSpace, max_dim: usize, eps_eq: f64) -> VRFiltration {
    let grid = critical_grid(space, eps_eq);
    let n = space.len();
    // Incremental expansion carrying diameters; every simplex eventually
    // appears, so no scale cutoff here.
    let mut by_dim: Vec<Vec<FilteredSimplex>> = vec![(0..n)
        .map(|v| FilteredSimplex {
            verts: vec![v],
            diam: 0.0,
            grid_idx: 0,
        })
        .collect()];
    for d in 1..=max_dim {
        let mut next: Vec<FilteredSimplex> = Vec::new();
        for s in &by_dim[d - 1] {
            let last = *s.verts.last().expect("simplices are non-empty");
            for u in (last + 1)..n {
                let mut diam = s.diam;
                for &w in &s.verts {
                    let dv = space.dist(w, u);
                    if dv > diam {
                        diam = dv;
                    }
                }
                let mut verts = s.verts.clone();
                verts.push(u);
                next.push(FilteredSimplex {
                    grid_idx: grid.snap(diam),
                    verts,
                    diam,
                });
            }
        }
        if next.is_empty() {
            break;
        }
        next.sort_by(|a, b| (a.grid_idx, &a.verts).cmp(&(b.grid_idx, &b.verts)));
        by_dim.push(next);
    }
    VRFiltration {
        grid,
        n_vertices: n,
        max_dim,
        by_dim,
    }
}

/// Global distribution of distances: the pushforward of mu (x) mu under the
/// distance map, supported on the critical grid.
pub fn gdd(x: &MMSpace, eps_eq: f64) -> Result<DiscreteMeasure1D> {
    let grid = critical_grid(&x.space, eps_eq);
    let mut mass = vec![0.0; grid.len()];
    for i in 0..x.len() {
        for j in 0..x.len() {
            mass[grid.snap(x.dist(i, j))] += x.mass(i) * x.mass(j);
        }
    }
    DiscreteMeasure1D::new(grid.values().to_vec(), mass)
}

/// The weighted VR filtration: the filtration plus its GDD weights. Every
/// grid value carries positive mass, so weights and grid stay compatible.
pub fn weighted_vr(x: &MMSpace, max_dim: usize, eps_eq: f64) -> Result<WeightedVRFiltration> {
    let filtration = vr_filtration(&x.space, max_dim, eps_eq);
    let weights = gdd(x, eps_eq)?;
    if weights.support() != filtration.grid.values() {
        return Err(Error::internal(
            "GDD support does not match the filtration grid",
        ));
    }
    Ok(WeightedVRFiltration { filtration, weights })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::builtin;
    use crate::tol;

    #[test]
    fn grid_of_boutin_kemper() {
        let g = critical_grid(&builtin::boutin_kemper_x(), tol::EPS_EQ);
        let expect = [0.0, 2f64.sqrt(), 2.0, 10f64.sqrt(), 4.0];
        assert_eq!(g.len(), expect.len());
        for (a, b) in g.values().iter().zip(&expect) {
            assert!((a - b).abs() < 1e-12);
        }
    }

    #[test]
    fn grid_groups_near_ties_to_minimum() {
        let eps = 1e-9;
        let d = 1.0 + 1e-10;
        let m = vec![
            vec![0.0, 1.0, d],
            vec![1.0, 0.0, d],
            vec![d, d, 0.0],
        ];
        let s = crate::metric::FiniteMetricSpace::new(m, tol::EPS_TRI).unwrap();
        let g = critical_grid(&s, eps);
        assert_eq!(g.values(), &[0.0, 1.0]);
        assert_eq!(g.snap(d), 1);
        assert_eq!(g.snap(1.0), 1);
        assert_eq!(g.snap(0.0), 0);
    }

    #[test]
    fn vr_complex_of_ums_x_at_one() {
        let c = vr_complex(&builtin::ums_x(), 1.0, 2, tol::EPS_EQ);
        assert_eq!(c.simplices(0).len(), 4);
        assert_eq!(c.simplices(1), &[vec![0, 1], vec![2, 3]]);
        assert!(c.simplices(2).is_empty());
        c.validate_closure().unwrap();
    }

    #[test]
    fn vr_complex_matches_diameter_rule() {
        let s = builtin::boutin_kemper_y();
        for r in [0.0, 1.5, 2.0, 3.2, 4.0] {
            let c = vr_complex(&s, r, 3, tol::EPS_EQ);
            c.validate_closure().unwrap();
            // Check every triple against the diameter rule.
            for a in 0..4 {
                for b in (a + 1)..4 {
                    for e in (b + 1)..4 {
                        let diam = s.dist(a, b).max(s.dist(a, e)).max(s.dist(b, e));
                        assert_eq!(
                            c.contains(&[a, b, e]),
                            diam <= r + tol::EPS_EQ,
                            "triple ({a},{b},{e}) at r = {r}"
                        );
                    }
                }
            }
        }
    }

    #[test]
    fn filtration_of_ums_y_has_triangle_at_one() {
        let f = vr_filtration(&builtin::ums_y(), 2, tol::EPS_EQ);
        assert_eq!(f.grid.values(), &[0.0, 1.0, 2.0]);
        let c = f.complex_at(1.0);
        assert!(c.contains(&[0, 1, 2]));
        assert!(!c.contains(&[0, 3]));
        // Faces enter no later than cofaces.
        for d in 1..f.by_dim.len() {
            for s in &f.by_dim[d] {
                for skip in 0..s.verts.len() {
                    let face: Vec<usize> = s
                        .verts
                        .iter()
                        .enumerate()
                        .filter(|&(k, _)| k != skip)
                        .map(|(_, &v)| v)
                        .collect();
                    let fidx = f.by_dim[d - 1]
                        .iter()
                        .find(|t| t.verts == face)
                        .map(|t| t.grid_idx)
                        .expect("face present");
                    assert!(fidx <= s.grid_idx);
                }
            }
        }
    }

    #[test]
    fn filtration_diameters_snap_to_grid() {
        let f = vr_filtration(&builtin::boutin_kemper_x(), 2, tol::EPS_EQ);
        for list in &f.by_dim {
            for s in list {
                let rep = f.grid.value(s.grid_idx);
                assert!(rep <= s.diam + tol::EPS_EQ && s.diam <= rep + tol::EPS_EQ);
            }
        }
    }

    #[test]
    fn gdd_of_ums_spaces() {
        let gx = gdd(&builtin::ums_x_mm(), tol::EPS_EQ).unwrap();
        assert_eq!(gx.support(), &[0.0, 1.0, 2.0]);
        let expect_x = [0.25, 0.25, 0.5];
        for (m, e) in gx.masses().iter().zip(&expect_x) {
            assert!((m - e).abs() < 1e-15);
        }
        let gy = gdd(&builtin::ums_y_mm(), tol::EPS_EQ).unwrap();
        let expect_y = [0.25, 0.375, 0.375];
        for (m, e) in gy.masses().iter().zip(&expect_y) {
            assert!((m - e).abs() < 1e-15);
        }
    }

    #[test]
    fn gdd_matches_for_boutin_kemper() {
        let gx = gdd(
            &crate::metric::MMSpace::uniform(builtin::boutin_kemper_x()),
            tol::EPS_EQ,
        )
        .unwrap();
        let gy = gdd(
            &crate::metric::MMSpace::uniform(builtin::boutin_kemper_y()),
            tol::EPS_EQ,
        )
        .unwrap();
        assert_eq!(gx.len(), gy.len());
        for ((sa, ma), (sb, mb)) in gx
            .support()
            .iter()
            .zip(gx.masses())
            .zip(gy.support().iter().zip(gy.masses()))
        {
            assert!((sa - sb).abs() < 1e-9);
            assert!((ma - mb).abs() < 1e-12);
        }
    }

    #[test]
    fn weighted_vr_weights_cover_grid() {
        let w = weighted_vr(&builtin::ums_y_mm(), 2, tol::EPS_EQ).unwrap();
        assert_eq!(w.weights.support(), w.filtration.grid.values());
        assert!(w.weights.masses().iter().all(|&m| m > 0.0));
    }

    #[test]
    fn pseudo_metric_zero_pair_connects_at_zero() {
        let m = vec![
            vec![0.0, 0.0, 1.0],
            vec![0.0, 0.0, 1.0],
            vec![1.0, 1.0, 0.0],
        ];
        let s = crate::metric::FiniteMetricSpace::new(m, tol::EPS_TRI).unwrap();
        let c = vr_complex(&s, 0.0, 1, tol::EPS_EQ);
        assert_eq!(c.simplices(1), &[vec![0, 1]]);
    }
}
