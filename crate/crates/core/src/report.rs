//! Serializable result schemas for the CLI and the verification suite.
//!
//! Internal types index staircase cells by grid position and keep couplings
//! as dense arrays; the structs here flatten everything into plain JSON
//! (lists of cells, intervals in grid values, support-only couplings).

use serde::Serialize;

use crate::diagram::{recover_gdd, Bar, PersistenceDiagram, WeightedPersistenceDiagram};
use crate::dist::{
    bottleneck, d_defo_exact, d_defo_inf_weighted, d_defo_p_weighted, stability_report, Matching,
    Mode, StabilityParams, StabilityReport, WeightedMatching,
};
use crate::filtration::{gdd, VRFiltration};
use crate::homology::BirthDeathFunction;
use crate::metric::{
    gh_exact, gw_inf_exact, gw_p_upper, wasserstein_1d, Correspondence, Coupling,
    DiscreteMeasure1D, Exponent, FiniteMetricSpace, MMSpace,
};
use crate::{tol, Result};

#[derive(Debug, Clone, Serialize)]
pub struct DiagramReport {
    pub grid: Vec<f64>,
    pub degree: usize,
    pub bars: Vec<Bar>,
}

pub fn diagram_report(pd: &PersistenceDiagram) -> DiagramReport {
    DiagramReport {
        grid: pd.grid().values().to_vec(),
        degree: pd.degree(),
        bars: pd.bars(),
    }
}

#[derive(Debug, Clone, Serialize)]
pub struct FlipEntry {
    pub cell: [usize; 2],
    pub interval: [f64; 2],
    pub mass: f64,
}

#[derive(Debug, Clone, Serialize)]
pub struct GddReport {
    pub support: Vec<f64>,
    pub masses: Vec<f64>,
}

pub fn gdd_report(g: &DiscreteMeasure1D) -> GddReport {
    GddReport {
        support: g.support().to_vec(),
        masses: g.masses().to_vec(),
    }
}

#[derive(Debug, Clone, Serialize)]
pub struct WeightedDiagramReport {
    pub grid: Vec<f64>,
    pub degree: usize,
    pub bars: Vec<Bar>,
    pub flip: Vec<FlipEntry>,
    pub gdd: GddReport,
}

pub fn weighted_diagram_report(w: &WeightedPersistenceDiagram) -> Result<WeightedDiagramReport> {
    let grid = w.diagram.grid();
    let flip = w
        .flip
        .cells()
        .into_iter()
        .filter(|&(_, mass)| mass > 0.0)
        .map(|((i, j), mass)| FlipEntry {
            cell: [i, j],
            interval: [grid.value(i), grid.value(j)],
            mass,
        })
        .collect();
    Ok(WeightedDiagramReport {
        grid: grid.values().to_vec(),
        degree: w.diagram.degree(),
        bars: w.diagram.bars(),
        flip,
        gdd: gdd_report(&recover_gdd(&w.flip)?),
    })
}

#[derive(Debug, Clone, Serialize)]
pub struct SimplexEntry {
    pub verts: Vec<usize>,
    pub diam: f64,
    pub grid_idx: usize,
}

#[derive(Debug, Clone, Serialize)]
pub struct FiltrationReport {
    pub grid: Vec<f64>,
    pub n_vertices: usize,
    pub max_dim: usize,
    pub simplices: Vec<SimplexEntry>,
    /// Vertex weights when the filtration came from an mm-space.
    pub weights: Option<Vec<f64>>,
}

pub fn filtration_report(f: &VRFiltration, weights: Option<&[f64]>) -> FiltrationReport {
    let simplices = f
        .by_dim
        .iter()
        .flatten()
        .map(|s| SimplexEntry {
            verts: s.verts.clone(),
            diam: s.diam,
            grid_idx: s.grid_idx,
        })
        .collect();
    FiltrationReport {
        grid: f.grid.values().to_vec(),
        n_vertices: f.n_vertices,
        max_dim: f.max_dim,
        simplices,
        weights: weights.map(|w| w.to_vec()),
    }
}

#[derive(Debug, Clone, Serialize)]
pub struct ZbReport {
    pub grid: Vec<f64>,
    pub degree: usize,
    /// Sparse (i, j, value) entries of the birth-death function.
    pub entries: Vec<(usize, usize, i64)>,
}

pub fn zb_report(zb: &BirthDeathFunction) -> ZbReport {
    ZbReport {
        grid: zb.grid.values().to_vec(),
        degree: zb.degree,
        entries: zb.sparse(),
    }
}

#[derive(Debug, Clone, Serialize)]
pub struct MatchedPairJson {
    pub q: [usize; 2],
    pub r: [usize; 2],
    pub q_interval: [f64; 2],
    pub r_interval: [f64; 2],
    pub mult: u64,
}

#[derive(Debug, Clone, Serialize)]
pub struct MatchingJson {
    pub grid_q: Vec<f64>,
    pub grid_r: Vec<f64>,
    pub pairs: Vec<MatchedPairJson>,
}

pub fn matching_json(m: &Matching) -> MatchingJson {
    let pairs = m
        .pairs
        .iter()
        .filter(|&(_, &mult)| mult > 0)
        .map(|(&(q, r), &mult)| MatchedPairJson {
            q: [q.0, q.1],
            r: [r.0, r.1],
            q_interval: [m.grid_q.value(q.0), m.grid_q.value(q.1)],
            r_interval: [m.grid_r.value(r.0), m.grid_r.value(r.1)],
            mult,
        })
        .collect();
    MatchingJson {
        grid_q: m.grid_q.values().to_vec(),
        grid_r: m.grid_r.values().to_vec(),
        pairs,
    }
}

#[derive(Debug, Clone, Serialize)]
pub struct EtaEntryJson {
    pub q: [usize; 2],
    pub r: [usize; 2],
    pub mass: f64,
}

#[derive(Debug, Clone, Serialize)]
pub struct WeightedMatchingJson {
    pub matching: MatchingJson,
    /// Coupling entries above 1e-15; the full coupling is dense.
    pub eta_support: Vec<EtaEntryJson>,
}

pub fn weighted_matching_json(w: &WeightedMatching) -> WeightedMatchingJson {
    let cq = w.cells_q();
    let cr = w.cells_r();
    let mut eta_support = Vec::new();
    for (a, &qc) in cq.iter().enumerate() {
        for (b, &rc) in cr.iter().enumerate() {
            let mass = w.eta[a * cr.len() + b];
            if mass > 1e-15 {
                eta_support.push(EtaEntryJson {
                    q: [qc.0, qc.1],
                    r: [rc.0, rc.1],
                    mass,
                });
            }
        }
    }
    WeightedMatchingJson {
        matching: matching_json(&w.matching),
        eta_support,
    }
}

#[derive(Debug, Clone, Serialize)]
pub struct CorrespondenceJson {
    pub pairs: Vec<[usize; 2]>,
    pub distortion: f64,
}

pub fn correspondence_json(
    c: &Correspondence,
    x: &FiniteMetricSpace,
    y: &FiniteMetricSpace,
) -> CorrespondenceJson {
    CorrespondenceJson {
        pairs: c.pairs.iter().map(|&(i, j)| [i, j]).collect(),
        distortion: c.distortion(x, y),
    }
}

#[derive(Debug, Clone, Serialize)]
pub struct CouplingJson {
    pub rows: usize,
    pub cols: usize,
    pub support: Vec<EtaCellJson>,
}

#[derive(Debug, Clone, Serialize)]
pub struct EtaCellJson {
    pub i: usize,
    pub j: usize,
    pub mass: f64,
}

pub fn coupling_json(c: &Coupling) -> CouplingJson {
    let support = c
        .support(1e-15)
        .into_iter()
        .map(|(i, j)| EtaCellJson {
            i,
            j,
            mass: c.mass[i * c.cols + j],
        })
        .collect();
    CouplingJson {
        rows: c.rows,
        cols: c.cols,
        support,
    }
}

/// Certificate payload of one distance entry.
#[derive(Debug, Clone, Serialize)]
#[serde(tag = "kind", content = "data", rename_all = "snake_case")]
pub enum CertificateJson {
    Matching(MatchingJson),
    WeightedMatching(WeightedMatchingJson),
    Correspondence(CorrespondenceJson),
    Coupling(CouplingJson),
    None,
}

/// One reported distance: `{"metric", "p", "value", "mode", "certificate"}`.
#[derive(Debug, Clone, Serialize)]
pub struct DistanceEntry {
    pub metric: String,
    pub p: String,
    pub value: f64,
    pub mode: Mode,
    pub certificate: CertificateJson,
}

fn entry(metric: &str, p: &Exponent, value: f64, mode: Mode, certificate: CertificateJson) -> DistanceEntry {
    DistanceEntry {
        metric: metric.to_string(),
        p: p.to_string(),
        value,
        mode,
        certificate,
    }
}

#[derive(Debug, Clone)]
pub struct CompareOptions {
    pub degree: usize,
    pub p: Exponent,
    pub max_dim: usize,
    pub eps_eq: f64,
    /// Cell cap (|X| * |Y|) for the exact Gromov solvers.
    pub gromov_cap: usize,
    /// Bar cap per side for the exact displacement matching.
    pub bar_cap: u64,
    /// Staircase-product cap for the exact weighted solver.
    pub cell_cap: usize,
    pub restarts: usize,
    pub seed: u64,
    pub with_stability: bool,
}

impl Default for CompareOptions {
    fn default() -> Self {
        CompareOptions {
            degree: 0,
            p: Exponent::Infinity,
            max_dim: tol::MAX_DIM,
            eps_eq: tol::EPS_EQ,
            gromov_cap: tol::GH_CAP,
            bar_cap: tol::DEFO_BAR_CAP,
            cell_cap: tol::WDGM_CELL_CAP,
            restarts: 8,
            seed: 0x5eed,
            with_stability: false,
        }
    }
}

#[derive(Debug, Clone, Serialize)]
pub struct CompareReport {
    pub degree: usize,
    pub p: String,
    pub x: WeightedDiagramReport,
    pub y: WeightedDiagramReport,
    pub distances: Vec<DistanceEntry>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub stability: Option<StabilityReport>,
}

/// Full comparison of two mm-spaces at one degree and exponent: weighted
/// diagrams, displacement/bottleneck/Gromov distances, distance-distribution
/// Wasserstein, and the edit-distance aliases `edit_cmet` = 2 * GH and
/// `edit_cmm` = 2 * GW (the optimal-transport identities hold by
/// construction, so the report derives them rather than re-solving).
pub fn compare_report(x: &MMSpace, y: &MMSpace, opts: &CompareOptions) -> Result<CompareReport> {
    let d = opts.degree;
    let wx = crate::diagram::weighted_pd(x, d, opts.max_dim, opts.eps_eq)?;
    let wy = crate::diagram::weighted_pd(y, d, opts.max_dim, opts.eps_eq)?;
    let inf = Exponent::Infinity;
    let mut distances = Vec::new();

    let defo = d_defo_exact(&wx.diagram, &wy.diagram, opts.bar_cap)?;
    distances.push(entry(
        "d_defo",
        &inf,
        defo.value,
        defo.mode,
        CertificateJson::Matching(matching_json(&defo.certificate)),
    ));

    let wdefo = match opts.p {
        Exponent::Infinity => d_defo_inf_weighted(&wx, &wy, opts.cell_cap)?,
        Exponent::Finite(p) => d_defo_p_weighted(&wx, &wy, p, opts.restarts, opts.seed)?,
    };
    distances.push(entry(
        "d_defo_weighted",
        &opts.p,
        wdefo.value,
        wdefo.mode,
        CertificateJson::WeightedMatching(weighted_matching_json(&wdefo.certificate)),
    ));

    distances.push(entry(
        "bottleneck",
        &inf,
        bottleneck(&wx.diagram, &wy.diagram),
        Mode::Exact,
        CertificateJson::None,
    ));

    let gdd_x = gdd(x, opts.eps_eq)?;
    let gdd_y = gdd(y, opts.eps_eq)?;
    distances.push(entry(
        "wasserstein_gdd",
        &opts.p,
        wasserstein_1d(&gdd_x, &gdd_y, opts.p)?,
        Mode::Exact,
        CertificateJson::None,
    ));

    let (gh, gh_corr) = gh_exact(&x.space, &y.space, opts.gromov_cap)?;
    distances.push(entry(
        "gh",
        &inf,
        gh,
        Mode::Exact,
        CertificateJson::Correspondence(correspondence_json(&gh_corr, &x.space, &y.space)),
    ));

    let (gw_value, gw_mode, gw_cert) = match opts.p {
        Exponent::Infinity => {
            let (v, corr) = gw_inf_exact(x, y, opts.gromov_cap)?;
            (
                v,
                Mode::Exact,
                CertificateJson::Correspondence(correspondence_json(&corr, &x.space, &y.space)),
            )
        }
        Exponent::Finite(p) => {
            let up = gw_p_upper(x, y, p, opts.restarts, opts.seed)?;
            (
                up.value,
                Mode::UpperBound,
                CertificateJson::Coupling(coupling_json(&up.coupling)),
            )
        }
    };
    distances.push(entry("gw", &opts.p, gw_value, gw_mode, gw_cert));

    // Edit-distance aliases: the edit distance on compact metric spaces is
    // twice the Gromov-Hausdorff distance, and the p-edit distance on
    // mm-spaces is twice the Gromov-Wasserstein p-distance.
    distances.push(entry("edit_cmet", &inf, 2.0 * gh, Mode::Exact, CertificateJson::None));
    distances.push(entry("edit_cmm", &opts.p, 2.0 * gw_value, gw_mode, CertificateJson::None));

    let stability = if opts.with_stability {
        Some(stability_report(
            x,
            y,
            &StabilityParams {
                degree: d,
                p: opts.p,
                max_dim: opts.max_dim,
                eps_eq: opts.eps_eq,
                cap: opts.gromov_cap,
                restarts: opts.restarts,
                seed: opts.seed,
            },
        )?)
    } else {
        None
    };

    Ok(CompareReport {
        degree: d,
        p: opts.p.to_string(),
        x: weighted_diagram_report(&wx)?,
        y: weighted_diagram_report(&wy)?,
        distances,
        stability,
    })
}
