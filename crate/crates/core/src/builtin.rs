//! Built-in example spaces used by the verification suite and the CLI, so
//! reproductions need no external files.

use crate::metric::{FiniteMetricSpace, MMSpace};
use crate::tol;

/// First ultrametric 4-point space: two pairs at distance 1, pairs at
/// distance 2 across. Same persistence diagrams as [`ums_y`] in every
/// degree, different distance distribution.
pub fn ums_x() -> FiniteMetricSpace {
    FiniteMetricSpace::new(
        vec![
            vec![0.0, 1.0, 2.0, 2.0],
            vec![1.0, 0.0, 2.0, 2.0],
            vec![2.0, 2.0, 0.0, 1.0],
            vec![2.0, 2.0, 1.0, 0.0],
        ],
        tol::EPS_TRI,
    )
    .expect("ums_x is a metric")
}

/// Second ultrametric 4-point space: a tight triple plus an outlier.
pub fn ums_y() -> FiniteMetricSpace {
    FiniteMetricSpace::new(
        vec![
            vec![0.0, 1.0, 1.0, 2.0],
            vec![1.0, 0.0, 1.0, 2.0],
            vec![1.0, 1.0, 0.0, 2.0],
            vec![2.0, 2.0, 2.0, 0.0],
        ],
        tol::EPS_TRI,
    )
    .expect("ums_y is a metric")
}

pub fn ums_x_mm() -> MMSpace {
    MMSpace::uniform(ums_x())
}

pub fn ums_y_mm() -> MMSpace {
    MMSpace::uniform(ums_y())
}

/// Vertices of the regular hexagon with circumradius 1 (diameter 2).
pub fn hexagon_points() -> Vec<Vec<f64>> {
    (0..6)
        .map(|k| {
            let a = std::f64::consts::PI / 3.0 * k as f64;
            vec![a.cos(), a.sin()]
        })
        .collect()
}

pub fn hexagon() -> FiniteMetricSpace {
    FiniteMetricSpace::from_points(&hexagon_points()).expect("hexagon embeds")
}

/// The hexagon with the midpoint of one side appended: same degree-1
/// persistence diagram, different critical grid and weights.
pub fn hexagon_mid() -> FiniteMetricSpace {
    let mut pts = hexagon_points();
    let mid = vec![
        (pts[0][0] + pts[1][0]) / 2.0,
        (pts[0][1] + pts[1][1]) / 2.0,
    ];
    pts.push(mid);
    FiniteMetricSpace::from_points(&pts).expect("hexagon+midpoint embeds")
}

/// Planar quadrilateral with the same distance multiset as
/// [`boutin_kemper_y`] but a different degree-0 diagram.
pub fn boutin_kemper_x() -> FiniteMetricSpace {
    FiniteMetricSpace::from_points(&[
        vec![0.0, 0.0],
        vec![1.0, 1.0],
        vec![3.0, 1.0],
        vec![4.0, 0.0],
    ])
    .expect("boutin-kemper X embeds")
}

pub fn boutin_kemper_y() -> FiniteMetricSpace {
    FiniteMetricSpace::from_points(&[
        vec![0.0, 0.0],
        vec![3.0, 1.0],
        vec![3.0, -1.0],
        vec![4.0, 0.0],
    ])
    .expect("boutin-kemper Y embeds")
}

/// Names accepted by the CLI `--example` flag.
pub const EXAMPLE_NAMES: [&str; 3] = ["ums", "hexagon", "boutin-kemper"];

/// Resolve an example name to its pair of uniform mm-spaces.
pub fn example_pair(name: &str) -> Option<(MMSpace, MMSpace)> {
    match name {
        "ums" => Some((ums_x_mm(), ums_y_mm())),
        "hexagon" => Some((
            MMSpace::uniform(hexagon()),
            MMSpace::uniform(hexagon_mid()),
        )),
        "boutin-kemper" => Some((
            MMSpace::uniform(boutin_kemper_x()),
            MMSpace::uniform(boutin_kemper_y()),
        )),
        _ => None,
    }
}
