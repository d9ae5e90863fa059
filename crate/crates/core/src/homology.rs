//! GF(2) chain-level computations: boundary matrices, ranks, cycle and
//! boundary subspaces, the birth-death function ZB, and the classical
//! reduction-algorithm persistence oracle.

use serde::Serialize;

use crate::diagram::PersistenceDiagram;
use crate::error::Error;
use crate::filtration::{CriticalGrid, VRFiltration};
use crate::Result;

/// A bit vector over GF(2), packed into 64-bit words.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct BitVec {
    len: usize,
    words: Vec<u64>,
}

impl BitVec {
    pub fn zeros(len: usize) -> Self {
        BitVec {
            len,
            words: vec![0; len.div_ceil(64)],
        }
    }

    pub fn len(&self) -> usize {
        self.len
    }

    pub fn is_empty(&self) -> bool {
        self.len == 0
    }

    #[inline]
    pub fn get(&self, i: usize) -> bool {
        self.words[i / 64] >> (i % 64) & 1 == 1
    }

    #[inline]
    pub fn set(&mut self, i: usize, v: bool) {
        if v {
            self.words[i / 64] |= 1 << (i % 64);
        } else {
            self.words[i / 64] &= !(1 << (i % 64));
        }
    }

    #[inline]
    pub fn xor_with(&mut self, other: &BitVec) {
        debug_assert_eq!(self.len, other.len);
        for (a, b) in self.words.iter_mut().zip(&other.words) {
            *a ^= b;
        }
    }

    pub fn is_zero(&self) -> bool {
        self.words.iter().all(|&w| w == 0)
    }

    /// Index of the highest set bit ("low" in column-reduction convention).
    pub fn low(&self) -> Option<usize> {
        for (w, &word) in self.words.iter().enumerate().rev() {
            if word != 0 {
                return Some(w * 64 + 63 - word.leading_zeros() as usize);
            }
        }
        None
    }

    pub fn ones(&self) -> Vec<usize> {
        (0..self.len).filter(|&i| self.get(i)).collect()
    }
}

/// A dense GF(2) matrix stored column-major (each column a [`BitVec`] over
/// the row index set), the natural layout for boundary matrices.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct BitMatrix {
    rows: usize,
    cols: Vec<BitVec>,
}

impl BitMatrix {
    pub fn zeros(rows: usize, cols: usize) -> Self {
        BitMatrix {
            rows,
            cols: vec![BitVec::zeros(rows); cols],
        }
    }

    pub fn rows(&self) -> usize {
        self.rows
    }

    pub fn cols(&self) -> usize {
        self.cols.len()
    }

    pub fn get(&self, i: usize, j: usize) -> bool {
        self.cols[j].get(i)
    }

    pub fn set(&mut self, i: usize, j: usize, v: bool) {
        self.cols[j].set(i, v);
    }

    pub fn col(&self, j: usize) -> &BitVec {
        &self.cols[j]
    }
}

/// Rank over GF(2) of the first `ncols` columns (Gaussian column reduction).
pub fn gf2_rank_prefix(m: &BitMatrix, ncols: usize) -> usize {
    let mut pivots: Vec<Option<BitVec>> = vec![None; m.rows];
    let mut rank = 0;
    for j in 0..ncols.min(m.cols()) {
        let mut col = m.cols[j].clone();
        while let Some(low) = col.low() {
            match &pivots[low] {
                Some(p) => col.xor_with(&p.clone()),
                None => {
                    pivots[low] = Some(col);
                    rank += 1;
                    break;
                }
            }
        }
    }
    rank
}

/// Rank over GF(2).
pub fn gf2_rank(m: &BitMatrix) -> usize {
    gf2_rank_prefix(m, m.cols())
}

/// Boundary matrix of the d-simplices of the filtration's final complex.
/// Rows are the (d-1)-simplices and columns the d-simplices, both in the
/// filtration's stored order (grid index, then lexicographic). For d = 0 the
/// zero map is represented with zero rows.
pub fn boundary_matrix(f: &VRFiltration, d: usize) -> BitMatrix {
    let cols_list = f.by_dim.get(d).map(Vec::as_slice).unwrap_or(&[]);
    if d == 0 {
        return BitMatrix::zeros(0, cols_list.len());
    }
    let rows_list = f.by_dim.get(d - 1).map(Vec::as_slice).unwrap_or(&[]);
    let mut row_index = std::collections::HashMap::new();
    for (i, s) in rows_list.iter().enumerate() {
        row_index.insert(s.verts.clone(), i);
    }
    let mut m = BitMatrix::zeros(rows_list.len(), cols_list.len());
    for (j, s) in cols_list.iter().enumerate() {
        for skip in 0..s.verts.len() {
            let face: Vec<usize> = s
                .verts
                .iter()
                .enumerate()
                .filter(|&(k, _)| k != skip)
                .map(|(_, &v)| v)
                .collect();
            let i = *row_index.get(&face).expect("filtration closed under faces");
            m.set(i, j, true);
        }
    }
    m
}

/// The birth-death function of a filtration in one degree:
/// ZB_d([q_i, q_j]) = dim( Z_d(F(q_i)) intersect B_d(F(q_j)) ) for i <= j.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct BirthDeathFunction {
    pub grid: CriticalGrid,
    pub degree: usize,
    /// Row-major k x k table; only entries with i <= j are meaningful.
    table: Vec<i64>,
}

impl BirthDeathFunction {
    pub fn get(&self, i: usize, j: usize) -> i64 {
        debug_assert!(i <= j);
        self.table[i * self.grid.len() + j]
    }

    /// Sparse entries [i, j, value] with value != 0, row-major order.
    pub fn sparse(&self) -> Vec<(usize, usize, i64)> {
        let k = self.grid.len();
        let mut out = Vec::new();
        for i in 0..k {
            for j in i..k {
                let v = self.table[i * k + j];
                if v != 0 {
                    out.push((i, j, v));
                }
            }
        }
        out
    }
}

/// Computes ZB_d over the whole staircase of grid intervals via the rank
/// formula dim(U cap V) = dim U + dim V - dim(U + V).
///
/// One column reduction of the degree-d boundary (with combination tracking)
/// yields cycle bases of every filtration prefix; one reduction of the
/// degree-(d+1) boundary yields boundary-space bases of every prefix. Each
/// table entry then costs one small elimination.
pub fn zb_function(f: &VRFiltration, d: usize) -> Result<BirthDeathFunction> {
    if d + 1 > f.max_dim {
        return Err(Error::validation(format!(
            "zb in degree {d} needs simplices of dimension {} but max_dim is {}",
            d + 1,
            f.max_dim
        )));
    }
    let k = f.grid.len();
    let nd = f.by_dim.get(d).map_or(0, Vec::len);

    // Reduce the d-boundary, tracking combinations: kernel vectors are the
    // combination columns of columns that reduce to zero. Processing order
    // is the filtration order, so the kernel vectors found among the first
    // `count_at(d, i)` columns form a basis of Z_d(F(q_i)).
    let bd = boundary_matrix(f, d);
    let mut pivots: Vec<Option<(BitVec, BitVec)>> = vec![None; bd.rows()]; // (reduced col, combination)
    // (column index it was found at, cycle in C_d coordinates)
    let mut cycles: Vec<(usize, BitVec)> = Vec::new();
    for j in 0..nd {
        let mut col = bd.col(j).clone();
        let mut comb = BitVec::zeros(nd);
        comb.set(j, true);
        loop {
            match col.low() {
                None => {
                    cycles.push((j, comb));
                    break;
                }
                Some(low) => match &pivots[low] {
                    Some((pcol, pcomb)) => {
                        let (pc, pb) = (pcol.clone(), pcomb.clone());
                        col.xor_with(&pc);
                        comb.xor_with(&pb);
                    }
                    None => {
                        pivots[low] = Some((col, comb));
                        break;
                    }
                },
            }
        }
    }

    // Reduce the (d+1)-boundary: the nonzero reduced columns of each prefix
    // are a triangular basis (distinct lows) of B_d of that prefix.
    let bd1 = boundary_matrix(f, d + 1);
    let nd1 = bd1.cols();
    let mut bpivots: Vec<Option<BitVec>> = vec![None; nd]; // low (d-simplex index) -> reduced column
    // (column index it was found at, low row)
    let mut bcols: Vec<(usize, usize)> = Vec::new();
    for j in 0..nd1 {
        let mut col = bd1.col(j).clone();
        while let Some(low) = col.low() {
            match &bpivots[low] {
                Some(p) => col.xor_with(&p.clone()),
                None => {
                    bpivots[low] = Some(col);
                    bcols.push((j, low));
                    break;
                }
            }
        }
    }

    let mut table = vec![0i64; k * k];
    for j in 0..k {
        let b_count = f.count_at(d + 1, j);
        // Boundary pivots available in this prefix.
        let active_lows: Vec<usize> = bcols
            .iter()
            .filter(|&&(col, _)| col < b_count)
            .map(|&(_, low)| low)
            .collect();
        let dim_b = active_lows.len() as i64;
        let mut is_active = vec![false; nd];
        for &low in &active_lows {
            is_active[low] = true;
        }
        for i in 0..=j {
            let z_count = f.count_at(d, i);
            let dim_z = cycles.iter().take_while(|(c, _)| *c < z_count).count() as i64;
            // dim(Z + B) = dim B + #cycles independent of the B prefix.
            let mut extra_pivots: Vec<Option<BitVec>> = vec![None; nd];
            let mut extra = 0i64;
            for (cidx, cyc) in &cycles {
                if *cidx >= z_count {
                    break;
                }
                let mut v = cyc.clone();
                while let Some(low) = v.low() {
                    if is_active[low] {
                        v.xor_with(&bpivots[low].clone().expect("active pivot"));
                    } else if let Some(p) = &extra_pivots[low] {
                        v.xor_with(&p.clone());
                    } else {
                        extra_pivots[low] = Some(v);
                        extra += 1;
                        break;
                    }
                }
            }
            let dim_zb = dim_z + dim_b - (dim_b + extra);
            table[i * k + j] = dim_zb;
        }
    }
    Ok(BirthDeathFunction {
        grid: f.grid.clone(),
        degree: d,
        table,
    })
}

/// Classical persistence by column reduction, used as an independent oracle
/// for the Mobius-inversion pipeline.
///
/// Works per degree: d-simplices whose degree-d boundary column reduces to
/// zero are positive (create a class); reduced degree-(d+1) columns pair
/// their low row with their own simplex. Bars with equal birth and death
/// grid values and essential (never-dying) classes are dropped. Uses the
/// simplex order stored in the filtration, which any order refining
/// (grid index, faces-before-cofaces) makes valid.
pub fn pd_reduction_oracle(f: &VRFiltration, d: usize) -> Result<PersistenceDiagram> {
    let nd = f.by_dim.get(d).map_or(0, Vec::len);
    // Positivity of d-simplices.
    let positive: Vec<bool> = if d == 0 {
        vec![true; nd]
    } else {
        let bd = boundary_matrix(f, d);
        let mut pivots: Vec<Option<BitVec>> = vec![None; bd.rows()];
        let mut pos = vec![false; nd];
        for j in 0..nd {
            let mut col = bd.col(j).clone();
            loop {
                match col.low() {
                    None => {
                        pos[j] = true;
                        break;
                    }
                    Some(low) => match &pivots[low] {
                        Some(p) => col.xor_with(&p.clone()),
                        None => {
                            pivots[low] = Some(col);
                            break;
                        }
                    },
                }
            }
        }
        pos
    };

    // Pairing by reducing the (d+1)-boundary.
    let mut death_of: Vec<Option<usize>> = vec![None; nd]; // d-simplex -> killing column
    if d < f.max_dim {
        let bd1 = boundary_matrix(f, d + 1);
        let mut pivots: Vec<Option<BitVec>> = vec![None; nd];
        let mut owner: Vec<Option<usize>> = vec![None; nd];
        for j in 0..bd1.cols() {
            let mut col = bd1.col(j).clone();
            while let Some(low) = col.low() {
                match &pivots[low] {
                    Some(p) => col.xor_with(&p.clone()),
                    None => {
                        pivots[low] = Some(col);
                        owner[low] = Some(j);
                        break;
                    }
                }
            }
        }
        for (low, own) in owner.iter().enumerate() {
            if let Some(j) = own {
                death_of[low] = Some(*j);
            }
        }
    }

    let mut diagram = PersistenceDiagram::empty(f.grid.clone(), d);
    for (sidx, simplex) in f.by_dim.get(d).map(Vec::as_slice).unwrap_or(&[]).iter().enumerate() {
        if !positive[sidx] {
            continue;
        }
        let Some(kill) = death_of[sidx] else {
            continue; // essential class, disregarded
        };
        let birth = simplex.grid_idx;
        let death = f.by_dim[d + 1][kill].grid_idx;
        if birth == death {
            continue;
        }
        if death < birth {
            return Err(Error::internal("negative-length bar in reduction"));
        }
        diagram.add(birth, death, 1);
    }
    Ok(diagram)
}
