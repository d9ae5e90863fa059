//! Finite (pseudo-)metric spaces, metric-measure spaces, maps between them,
//! couplings, and one-dimensional measures.

use serde::{Deserialize, Serialize};

use crate::error::Error;
use crate::tol;
use crate::Result;

mod gromov;
mod transport;

pub use gromov::{gh_exact, gw_inf_exact, gw_inf_feasible_at, gw_p_upper, GwUpper};
pub use transport::{northwest_corner, transport_lp};

/// Exponent of a p-distortion / p-distance: a finite p >= 1 or infinity.
#[derive(Debug, Clone, Copy, PartialEq)]
pub enum Exponent {
    Finite(f64),
    Infinity,
}

impl Exponent {
    pub fn is_finite(self) -> bool {
        matches!(self, Exponent::Finite(_))
    }

    pub fn validate(self) -> Result<Self> {
        match self {
            Exponent::Finite(p) if !p.is_finite() || p < 1.0 => Err(Error::validation(
                format!("exponent p must satisfy 1 <= p < inf, got {p}"),
            )),
            other => Ok(other),
        }
    }
}

impl std::str::FromStr for Exponent {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s.trim() {
            "inf" | "Inf" | "INF" | "infinity" => Ok(Exponent::Infinity),
            other => {
                let p: f64 = other
                    .parse()
                    .map_err(|_| Error::parse(format!("cannot parse exponent {other:?}")))?;
                Exponent::Finite(p).validate()
            }
        }
    }
}

impl std::fmt::Display for Exponent {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        match self {
            Exponent::Finite(p) => write!(f, "{p}"),
            Exponent::Infinity => write!(f, "inf"),
        }
    }
}

/// A finite pseudo-metric space given by its full distance matrix.
///
/// Invariants (enforced on construction): the matrix is square, symmetric,
/// non-negative, has zero diagonal, and satisfies the triangle inequality
/// within [`tol::EPS_TRI`]. Distinct points at distance zero are allowed.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct FiniteMetricSpace {
    n: usize,
    d: Vec<f64>,
}

impl FiniteMetricSpace {
    /// Validates `matrix` as a pseudo-metric and wraps it.
    pub fn new(matrix: Vec<Vec<f64>>, tri_tol: f64) -> Result<Self> {
        validate_pseudo_metric(&matrix, tri_tol)?;
        let n = matrix.len();
        let mut d = Vec::with_capacity(n * n);
        for row in &matrix {
            d.extend_from_slice(row);
        }
        Ok(FiniteMetricSpace { n, d })
    }

    /// Euclidean space on a finite point cloud; `points[i]` are coordinates.
    pub fn from_points(points: &[Vec<f64>]) -> Result<Self> {
        let n = points.len();
        if n == 0 {
            return Err(Error::validation("point cloud is empty"));
        }
        let dim = points[0].len();
        if points.iter().any(|p| p.len() != dim) {
            return Err(Error::validation("points have mixed dimensions"));
        }
        if points.iter().flatten().any(|c| !c.is_finite()) {
            return Err(Error::validation("point coordinates must be finite"));
        }
        let mut d = vec![0.0; n * n];
        for i in 0..n {
            for j in (i + 1)..n {
                let dist = points[i]
                    .iter()
                    .zip(&points[j])
                    .map(|(a, b)| (a - b) * (a - b))
                    .sum::<f64>()
                    .sqrt();
                d[i * n + j] = dist;
                d[j * n + i] = dist;
            }
        }
        Ok(FiniteMetricSpace { n, d })
    }

    pub fn len(&self) -> usize {
        self.n
    }

    pub fn is_empty(&self) -> bool {
        self.n == 0
    }

    #[inline]
    pub fn dist(&self, i: usize, j: usize) -> f64 {
        self.d[i * self.n + j]
    }

    /// Distance matrix as rows.
    pub fn matrix(&self) -> Vec<Vec<f64>> {
        (0..self.n)
            .map(|i| self.d[i * self.n..(i + 1) * self.n].to_vec())
            .collect()
    }

    /// All distance values including the zero diagonal.
    pub fn values(&self) -> impl Iterator<Item = f64> + '_ {
        self.d.iter().copied()
    }

    /// Sorted multiset of pairwise distances over unordered distinct pairs.
    pub fn sorted_offdiag_distances(&self) -> Vec<f64> {
        let mut v = Vec::with_capacity(self.n * (self.n - 1) / 2);
        for i in 0..self.n {
            for j in (i + 1)..self.n {
                v.push(self.dist(i, j));
            }
        }
        v.sort_by(f64::total_cmp);
        v
    }
}

/// Checks that `matrix` is a finite pseudo-metric: square, symmetric,
/// non-negative, zero diagonal, triangle inequality within `tri_tol`.
pub fn validate_pseudo_metric(matrix: &[Vec<f64>], tri_tol: f64) -> Result<()> {
    let n = matrix.len();
    if n == 0 {
        return Err(Error::validation("distance matrix is empty"));
    }
    for (i, row) in matrix.iter().enumerate() {
        if row.len() != n {
            return Err(Error::validation(format!(
                "distance matrix is not square: row {i} has {} entries, expected {n}",
                row.len()
            )));
        }
    }
    for i in 0..n {
        if !matrix[i][i].is_finite() || matrix[i][i] != 0.0 {
            return Err(Error::validation(format!(
                "diagonal entry d[{i}][{i}] = {} must be 0",
                matrix[i][i]
            )));
        }
        for j in 0..n {
            let v = matrix[i][j];
            if !v.is_finite() || v < 0.0 {
                return Err(Error::validation(format!(
                    "entry d[{i}][{j}] = {v} must be finite and non-negative"
                )));
            }
            if matrix[i][j] != matrix[j][i] {
                return Err(Error::validation(format!(
                    "asymmetric entries d[{i}][{j}] = {} vs d[{j}][{i}] = {}",
                    matrix[i][j], matrix[j][i]
                )));
            }
        }
    }
    for i in 0..n {
        for j in 0..n {
            for k in 0..n {
                if matrix[i][j] > matrix[i][k] + matrix[k][j] + tri_tol {
                    return Err(Error::validation(format!(
                        "triangle inequality violated: d[{i}][{j}] = {} > d[{i}][{k}] + d[{k}][{j}] = {}",
                        matrix[i][j],
                        matrix[i][k] + matrix[k][j]
                    )));
                }
            }
        }
    }
    Ok(())
}

/// A metric-measure space: a finite pseudo-metric space with a fully
/// supported probability measure.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct MMSpace {
    pub space: FiniteMetricSpace,
    mu: Vec<f64>,
}

impl MMSpace {
    pub fn new(space: FiniteMetricSpace, mu: Vec<f64>) -> Result<Self> {
        if mu.len() != space.len() {
            return Err(Error::validation(format!(
                "measure has {} entries for {} points",
                mu.len(),
                space.len()
            )));
        }
        if mu.iter().any(|&m| !m.is_finite() || m <= 0.0) {
            return Err(Error::validation(
                "measure entries must be strictly positive (full support)",
            ));
        }
        let total: f64 = mu.iter().sum();
        if (total - 1.0).abs() > tol::EPS_MASS {
            return Err(Error::validation(format!(
                "measure sums to {total}, expected 1 within {}",
                tol::EPS_MASS
            )));
        }
        Ok(MMSpace { space, mu })
    }

    pub fn uniform(space: FiniteMetricSpace) -> Self {
        let n = space.len();
        MMSpace {
            space,
            mu: vec![1.0 / n as f64; n],
        }
    }

    pub fn len(&self) -> usize {
        self.space.len()
    }

    pub fn is_empty(&self) -> bool {
        self.space.is_empty()
    }

    pub fn mass(&self, i: usize) -> f64 {
        self.mu[i]
    }

    pub fn masses(&self) -> &[f64] {
        &self.mu
    }

    pub fn dist(&self, i: usize, j: usize) -> f64 {
        self.space.dist(i, j)
    }
}

/// A total map between point index sets.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct PointMap {
    pub target_size: usize,
    pub map: Vec<usize>,
}

impl PointMap {
    pub fn new(map: Vec<usize>, target_size: usize) -> Result<Self> {
        if let Some(&bad) = map.iter().find(|&&v| v >= target_size) {
            return Err(Error::validation(format!(
                "map value {bad} out of range for target of size {target_size}"
            )));
        }
        Ok(PointMap { target_size, map })
    }

    pub fn source_size(&self) -> usize {
        self.map.len()
    }

    pub fn apply(&self, i: usize) -> usize {
        self.map[i]
    }

    pub fn is_surjective(&self) -> bool {
        let mut hit = vec![false; self.target_size];
        for &v in &self.map {
            hit[v] = true;
        }
        hit.iter().all(|&h| h)
    }
}

/// A correspondence between two index sets: a relation whose projections to
/// both sides are surjective.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Correspondence {
    pub left_size: usize,
    pub right_size: usize,
    pub pairs: Vec<(usize, usize)>,
}

impl Correspondence {
    pub fn new(left_size: usize, right_size: usize, pairs: Vec<(usize, usize)>) -> Result<Self> {
        let mut left = vec![false; left_size];
        let mut right = vec![false; right_size];
        for &(i, j) in &pairs {
            if i >= left_size || j >= right_size {
                return Err(Error::validation(format!(
                    "pair ({i},{j}) out of range for sizes {left_size}x{right_size}"
                )));
            }
            left[i] = true;
            right[j] = true;
        }
        if !left.iter().all(|&b| b) || !right.iter().all(|&b| b) {
            return Err(Error::validation(
                "correspondence projections must cover both sides",
            ));
        }
        Ok(Correspondence {
            left_size,
            right_size,
            pairs,
        })
    }

    /// Distortion relative to two metric spaces: the max over pairs of
    /// related pairs of |d_X - d_Y|.
    pub fn distortion(&self, x: &FiniteMetricSpace, y: &FiniteMetricSpace) -> f64 {
        let mut dis: f64 = 0.0;
        for &(i1, j1) in &self.pairs {
            for &(i2, j2) in &self.pairs {
                dis = dis.max((x.dist(i1, i2) - y.dist(j1, j2)).abs());
            }
        }
        dis
    }
}

/// A coupling of two finite measures: a non-negative matrix with prescribed
/// row and column sums.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct Coupling {
    pub rows: usize,
    pub cols: usize,
    pub mass: Vec<f64>,
}

impl Coupling {
    pub fn new(rows: usize, cols: usize, mass: Vec<f64>) -> Result<Self> {
        if mass.len() != rows * cols {
            return Err(Error::validation("coupling matrix has wrong size"));
        }
        if mass.iter().any(|&m| !m.is_finite() || m < 0.0) {
            return Err(Error::validation("coupling entries must be >= 0"));
        }
        Ok(Coupling { rows, cols, mass })
    }

    #[inline]
    pub fn get(&self, i: usize, j: usize) -> f64 {
        self.mass[i * self.cols + j]
    }

    #[inline]
    pub fn set(&mut self, i: usize, j: usize, v: f64) {
        self.mass[i * self.cols + j] = v;
    }

    /// Independent (product) coupling of two probability vectors.
    pub fn product(mu: &[f64], nu: &[f64]) -> Self {
        let mut mass = Vec::with_capacity(mu.len() * nu.len());
        for &a in mu {
            for &b in nu {
                mass.push(a * b);
            }
        }
        Coupling {
            rows: mu.len(),
            cols: nu.len(),
            mass,
        }
    }

    pub fn row_sums(&self) -> Vec<f64> {
        let mut s = vec![0.0; self.rows];
        for i in 0..self.rows {
            for j in 0..self.cols {
                s[i] += self.get(i, j);
            }
        }
        s
    }

    pub fn col_sums(&self) -> Vec<f64> {
        let mut s = vec![0.0; self.cols];
        for i in 0..self.rows {
            for j in 0..self.cols {
                s[j] += self.get(i, j);
            }
        }
        s
    }

    /// Checks marginals against two probability vectors within `mass_tol`.
    pub fn validate_marginals(&self, mu: &[f64], nu: &[f64], mass_tol: f64) -> Result<()> {
        if mu.len() != self.rows || nu.len() != self.cols {
            return Err(Error::validation("coupling shape mismatch with marginals"));
        }
        for (i, (&have, &want)) in self.row_sums().iter().zip(mu).enumerate() {
            if (have - want).abs() > mass_tol {
                return Err(Error::validation(format!(
                    "row marginal {i}: {have} vs expected {want}"
                )));
            }
        }
        for (j, (&have, &want)) in self.col_sums().iter().zip(nu).enumerate() {
            if (have - want).abs() > mass_tol {
                return Err(Error::validation(format!(
                    "column marginal {j}: {have} vs expected {want}"
                )));
            }
        }
        Ok(())
    }

    /// Support cells with positive mass above `cut`.
    pub fn support(&self, cut: f64) -> Vec<(usize, usize)> {
        let mut s = Vec::new();
        for i in 0..self.rows {
            for j in 0..self.cols {
                if self.get(i, j) > cut {
                    s.push((i, j));
                }
            }
        }
        s
    }
}

/// A finitely supported measure on the real line with sorted support.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct DiscreteMeasure1D {
    support: Vec<f64>,
    mass: Vec<f64>,
}

impl DiscreteMeasure1D {
    /// `support` must be strictly increasing; masses positive and summing to
    /// 1 within [`tol::EPS_MASS`].
    pub fn new(support: Vec<f64>, mass: Vec<f64>) -> Result<Self> {
        if support.len() != mass.len() || support.is_empty() {
            return Err(Error::validation(
                "1-D measure needs equally many support points and masses, at least one",
            ));
        }
        if support.iter().any(|v| v.is_nan()) || support.windows(2).any(|w| w[1] <= w[0]) {
            return Err(Error::validation(
                "1-D measure support must be strictly increasing",
            ));
        }
        if mass.iter().any(|&m| !m.is_finite() || m <= 0.0) {
            return Err(Error::validation("1-D measure masses must be positive"));
        }
        let total: f64 = mass.iter().sum();
        if (total - 1.0).abs() > tol::EPS_MASS {
            return Err(Error::validation(format!(
                "1-D measure sums to {total}, expected 1"
            )));
        }
        Ok(DiscreteMeasure1D { support, mass })
    }

    pub fn support(&self) -> &[f64] {
        &self.support
    }

    pub fn masses(&self) -> &[f64] {
        &self.mass
    }

    pub fn len(&self) -> usize {
        self.support.len()
    }

    pub fn is_empty(&self) -> bool {
        self.support.is_empty()
    }

    /// Mass at a value, matching support points within `eps`.
    pub fn mass_at(&self, v: f64, eps: f64) -> f64 {
        for (s, m) in self.support.iter().zip(&self.mass) {
            if (s - v).abs() <= eps {
                return *m;
            }
        }
        0.0
    }
}

/// Metric distortion of a point map: max over point pairs of
/// |d_X(x, x') - d_Y(f x, f x')|.
pub fn distortion_of_map(f: &PointMap, x: &FiniteMetricSpace, y: &FiniteMetricSpace) -> f64 {
    assert_eq!(f.source_size(), x.len(), "map source size mismatch");
    assert_eq!(f.target_size, y.len(), "map target size mismatch");
    let mut dis: f64 = 0.0;
    for i in 0..x.len() {
        for j in 0..x.len() {
            dis = dis.max((x.dist(i, j) - y.dist(f.apply(i), f.apply(j))).abs());
        }
    }
    dis
}

/// Morphism diagnostics for a map of metric-measure spaces.
#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct MorphismReport {
    /// d_X(a,b) <= d_X(c,e) implies d_Y(fa,fb) <= d_Y(fc,fe), with ties
    /// within `eps_eq` required to stay ties.
    pub order_preserving: bool,
    /// Pushforward of the source measure equals the target measure.
    pub monge: bool,
    pub surjective: bool,
}

/// Checks whether `f` is order-preserving on distances, measure-preserving
/// (Monge), and surjective.
pub fn check_morphism(f: &PointMap, x: &MMSpace, y: &MMSpace, eps_eq: f64) -> MorphismReport {
    assert_eq!(f.source_size(), x.len(), "map source size mismatch");
    assert_eq!(f.target_size, y.len(), "map target size mismatch");

    let mut pairs: Vec<(f64, f64)> = Vec::with_capacity(x.len() * x.len());
    for i in 0..x.len() {
        for j in 0..x.len() {
            pairs.push((x.dist(i, j), y.dist(f.apply(i), f.apply(j))));
        }
    }
    let mut order_preserving = true;
    'outer: for a in 0..pairs.len() {
        for b in 0..pairs.len() {
            let (dxa, dya) = pairs[a];
            let (dxb, dyb) = pairs[b];
            if (dxa - dxb).abs() <= eps_eq {
                if (dya - dyb).abs() > eps_eq {
                    order_preserving = false;
                    break 'outer;
                }
            } else if dxa < dxb && dya > dyb + eps_eq {
                order_preserving = false;
                break 'outer;
            }
        }
    }

    let mut push = vec![0.0; y.len()];
    for i in 0..x.len() {
        push[f.apply(i)] += x.mass(i);
    }
    let monge = push
        .iter()
        .zip(y.masses())
        .all(|(&p, &m)| (p - m).abs() <= tol::EPS_MASS * x.len() as f64);

    MorphismReport {
        order_preserving,
        monge,
        surjective: f.is_surjective(),
    }
}

/// Pullback of the target metric along a map: d(z, z') = d_X(phi z, phi z').
/// The result is a pseudo-metric even when phi is not injective.
pub fn pullback_metric(phi: &PointMap, x: &FiniteMetricSpace) -> FiniteMetricSpace {
    assert_eq!(phi.target_size, x.len(), "map target size mismatch");
    let n = phi.source_size();
    let mut d = vec![0.0; n * n];
    for i in 0..n {
        for j in 0..n {
            d[i * n + j] = x.dist(phi.apply(i), phi.apply(j));
        }
    }
    FiniteMetricSpace { n, d }
}

/// p-distortion of a coupling between two mm-spaces.
///
/// Finite p: ( sum |d_X(x,x') - d_Y(y,y')|^p dmu(x,y) dmu(x',y') )^(1/p).
/// p = inf: max of |d_X - d_Y| over pairs of support cells.
pub fn p_distortion(mu: &Coupling, x: &MMSpace, y: &MMSpace, p: Exponent) -> Result<f64> {
    if mu.rows != x.len() || mu.cols != y.len() {
        return Err(Error::validation("coupling shape mismatch with spaces"));
    }
    mu.validate_marginals(x.masses(), y.masses(), tol::EPS_MASS * (x.len() + y.len()) as f64)?;
    p.validate()?;
    let support = mu.support(0.0);
    match p {
        Exponent::Infinity => {
            let mut dis: f64 = 0.0;
            for &(i1, j1) in &support {
                for &(i2, j2) in &support {
                    dis = dis.max((x.dist(i1, i2) - y.dist(j1, j2)).abs());
                }
            }
            Ok(dis)
        }
        Exponent::Finite(p) => {
            let mut acc = 0.0;
            for &(i1, j1) in &support {
                let m1 = mu.get(i1, j1);
                for &(i2, j2) in &support {
                    acc += (x.dist(i1, i2) - y.dist(j1, j2)).abs().powf(p)
                        * m1
                        * mu.get(i2, j2);
                }
            }
            Ok(acc.powf(1.0 / p))
        }
    }
}

/// Exact p-Wasserstein distance between two measures on the line, via the
/// quantile (CDF inversion) coupling, which is optimal in one dimension.
pub fn wasserstein_1d(a: &DiscreteMeasure1D, b: &DiscreteMeasure1D, p: Exponent) -> Result<f64> {
    p.validate()?;
    let mut ia = 0;
    let mut ib = 0;
    let mut remaining_a = a.mass[0];
    let mut remaining_b = b.mass[0];
    let mut acc: f64 = 0.0;
    let mut worst: f64 = 0.0;
    loop {
        let seg = remaining_a.min(remaining_b);
        if seg > 0.0 {
            let gap = (a.support[ia] - b.support[ib]).abs();
            match p {
                Exponent::Finite(p) => acc += seg * gap.powf(p),
                Exponent::Infinity => worst = worst.max(gap),
            }
        }
        remaining_a -= seg;
        remaining_b -= seg;
        if remaining_a <= 0.0 {
            ia += 1;
            if ia == a.len() {
                break;
            }
            remaining_a = a.mass[ia];
        }
        if remaining_b <= 0.0 {
            ib += 1;
            if ib == b.len() {
                break;
            }
            remaining_b = b.mass[ib];
        }
    }
    match p {
        Exponent::Finite(p) => Ok(acc.powf(1.0 / p)),
        Exponent::Infinity => Ok(worst),
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn two_point(d: f64) -> FiniteMetricSpace {
        FiniteMetricSpace::new(vec![vec![0.0, d], vec![d, 0.0]], tol::EPS_TRI).unwrap()
    }

    pub(crate) fn ums_x() -> FiniteMetricSpace {
        FiniteMetricSpace::new(
            vec![
                vec![0.0, 1.0, 2.0, 2.0],
                vec![1.0, 0.0, 2.0, 2.0],
                vec![2.0, 2.0, 0.0, 1.0],
                vec![2.0, 2.0, 1.0, 0.0],
            ],
            tol::EPS_TRI,
        )
        .unwrap()
    }

    #[test]
    fn validates_good_metric() {
        ums_x();
    }

    #[test]
    fn rejects_asymmetry() {
        let m = vec![vec![0.0, 1.0], vec![2.0, 0.0]];
        assert!(matches!(
            FiniteMetricSpace::new(m, tol::EPS_TRI),
            Err(Error::Validation(_))
        ));
    }

    #[test]
    fn rejects_negative_entry() {
        let m = vec![vec![0.0, -1.0], vec![-1.0, 0.0]];
        assert!(FiniteMetricSpace::new(m, tol::EPS_TRI).is_err());
    }

    #[test]
    fn rejects_triangle_violation() {
        let m = vec![
            vec![0.0, 1.0, 3.0],
            vec![1.0, 0.0, 1.0],
            vec![3.0, 1.0, 0.0],
        ];
        let err = FiniteMetricSpace::new(m, tol::EPS_TRI).unwrap_err();
        assert!(err.to_string().contains("triangle"));
    }

    #[test]
    fn accepts_pseudo_metric_with_zero_pair() {
        let m = vec![
            vec![0.0, 0.0, 1.0],
            vec![0.0, 0.0, 1.0],
            vec![1.0, 1.0, 0.0],
        ];
        FiniteMetricSpace::new(m, tol::EPS_TRI).unwrap();
    }

    #[test]
    fn euclidean_from_points() {
        let s = FiniteMetricSpace::from_points(&[vec![0.0, 0.0], vec![3.0, 4.0]]).unwrap();
        assert!((s.dist(0, 1) - 5.0).abs() < 1e-12);
    }

    #[test]
    fn mm_space_rejects_bad_measure() {
        assert!(MMSpace::new(two_point(1.0), vec![0.5, 0.4]).is_err());
        assert!(MMSpace::new(two_point(1.0), vec![1.0, 0.0]).is_err());
        MMSpace::new(two_point(1.0), vec![0.5, 0.5]).unwrap();
    }

    #[test]
    fn distortion_of_collapse_map() {
        // Collapsing a two-point space of diameter d to a point distorts by d.
        let x = two_point(1.5);
        let y = FiniteMetricSpace::new(vec![vec![0.0]], tol::EPS_TRI).unwrap();
        let f = PointMap::new(vec![0, 0], 1).unwrap();
        assert_eq!(distortion_of_map(&f, &x, &y), 1.5);
    }

    #[test]
    fn morphism_report_on_ums_collapse() {
        let x = MMSpace::uniform(ums_x());
        let y = MMSpace::uniform(two_point(2.0));
        let f = PointMap::new(vec![0, 0, 1, 1], 2).unwrap();
        let rep = check_morphism(&f, &x, &y, tol::EPS_EQ);
        assert!(rep.order_preserving);
        assert!(rep.monge);
        assert!(rep.surjective);
    }

    #[test]
    fn morphism_detects_order_violation() {
        // Swap which distance value is large in the target.
        let x = MMSpace::uniform(
            FiniteMetricSpace::new(
                vec![
                    vec![0.0, 1.0, 2.0],
                    vec![1.0, 0.0, 2.0],
                    vec![2.0, 2.0, 0.0],
                ],
                tol::EPS_TRI,
            )
            .unwrap(),
        );
        let y = MMSpace::uniform(
            FiniteMetricSpace::new(
                vec![
                    vec![0.0, 2.0, 1.0],
                    vec![2.0, 0.0, 2.0],
                    vec![1.0, 2.0, 0.0],
                ],
                tol::EPS_TRI,
            )
            .unwrap(),
        );
        let f = PointMap::new(vec![0, 1, 2], 3).unwrap();
        let rep = check_morphism(&f, &x, &y, tol::EPS_EQ);
        assert!(!rep.order_preserving);
    }

    #[test]
    fn pullback_is_pseudo_metric() {
        let x = two_point(1.0);
        let phi = PointMap::new(vec![0, 0, 1], 2).unwrap();
        let z = pullback_metric(&phi, &x);
        assert_eq!(z.dist(0, 1), 0.0);
        assert_eq!(z.dist(0, 2), 1.0);
        validate_pseudo_metric(&z.matrix(), tol::EPS_TRI).unwrap();
    }

    #[test]
    fn p_distortion_point_vs_segment() {
        let x = MMSpace::uniform(FiniteMetricSpace::new(vec![vec![0.0]], tol::EPS_TRI).unwrap());
        let y = MMSpace::uniform(two_point(1.0));
        let mu = Coupling::product(x.masses(), y.masses());
        let d1 = p_distortion(&mu, &x, &y, Exponent::Finite(1.0)).unwrap();
        assert!((d1 - 0.5).abs() < 1e-12);
        let dinf = p_distortion(&mu, &x, &y, Exponent::Infinity).unwrap();
        assert!((dinf - 1.0).abs() < 1e-12);
    }

    #[test]
    fn wasserstein_point_masses() {
        let a = DiscreteMeasure1D::new(vec![0.0], vec![1.0]).unwrap();
        let b = DiscreteMeasure1D::new(vec![3.0], vec![1.0]).unwrap();
        for p in [Exponent::Finite(1.0), Exponent::Finite(2.0), Exponent::Infinity] {
            assert!((wasserstein_1d(&a, &b, p).unwrap() - 3.0).abs() < 1e-12);
        }
    }

    #[test]
    fn wasserstein_ums_gdds() {
        let a = DiscreteMeasure1D::new(vec![0.0, 1.0, 2.0], vec![0.25, 0.25, 0.5]).unwrap();
        let b = DiscreteMeasure1D::new(vec![0.0, 1.0, 2.0], vec![0.25, 0.375, 0.375]).unwrap();
        let w1 = wasserstein_1d(&a, &b, Exponent::Finite(1.0)).unwrap();
        assert!((w1 - 0.125).abs() < 1e-12);
        let w2 = wasserstein_1d(&a, &b, Exponent::Finite(2.0)).unwrap();
        assert!((w2 - 0.125f64.sqrt()).abs() < 1e-12);
        let winf = wasserstein_1d(&a, &b, Exponent::Infinity).unwrap();
        assert!((winf - 1.0).abs() < 1e-12);
    }

    #[test]
    fn wasserstein_identity_and_symmetry() {
        let a = DiscreteMeasure1D::new(vec![0.0, 1.0, 4.0], vec![0.2, 0.3, 0.5]).unwrap();
        let b = DiscreteMeasure1D::new(vec![0.5, 2.0], vec![0.6, 0.4]).unwrap();
        for p in [Exponent::Finite(1.0), Exponent::Finite(2.0), Exponent::Infinity] {
            assert_eq!(wasserstein_1d(&a, &a, p).unwrap(), 0.0);
            let ab = wasserstein_1d(&a, &b, p).unwrap();
            let ba = wasserstein_1d(&b, &a, p).unwrap();
            assert!((ab - ba).abs() < 1e-12);
        }
    }

    #[test]
    fn exponent_parsing() {
        assert_eq!("inf".parse::<Exponent>().unwrap(), Exponent::Infinity);
        assert_eq!("2".parse::<Exponent>().unwrap(), Exponent::Finite(2.0));
        assert!("0.5".parse::<Exponent>().is_err());
        assert!("x".parse::<Exponent>().is_err());
    }
}
