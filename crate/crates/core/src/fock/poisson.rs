//! The Poisson kernel `K h = Σ_α √b_α δ_α ⊗ Δ T_α* h` of a tuple in `D_f(C^k)`.
//!
//! `K` is stored as one `k × k` block per word `|α| ≤ L`. Both residuals are
//! computed blockwise without forming the `dim·k × k` matrix:
//! `K*K = Σ_α K_α* K_α` and `K*(W_i ⊗ I)K = Σ_{|β|<L} w_{i,β} K_{g_iβ}* K_β`.

use crate::domains::{defect_matrix, MatrixTuple};
use crate::error::{Error, Result};
use crate::linalg::{c, identity, min_eigenvalue, psd_sqrt, spectral_norm, CMatrix, EIGEN_CLAMP};
use crate::symbol::Symbol;
use crate::weights::compute_weights;

use super::build_shifts;

#[derive(Clone, Debug)]
pub struct PoissonKernel {
    k: usize,
    blocks: Vec<CMatrix>,
    /// `Δ = (I - Σ a_α T_α T_α*)^{1/2}`.
    pub delta: CMatrix,
    /// `‖K*K - I‖`.
    pub isometry_residual: f64,
    /// `max_i ‖K*(W_i ⊗ I)K - T_i‖`.
    pub intertwining_residual: f64,
}

impl PoissonKernel {
    /// Block row `√b_α Δ T_α*` for the word at graded-lex index `index`.
    pub fn block(&self, index: usize) -> &CMatrix {
        &self.blocks[index]
    }

    pub fn num_blocks(&self) -> usize {
        self.blocks.len()
    }

    /// The full `(dim·k) × k` matrix.
    pub fn matrix(&self) -> CMatrix {
        let mut m = CMatrix::zeros(self.blocks.len() * self.k, self.k);
        for (i, b) in self.blocks.iter().enumerate() {
            m.view_mut((i * self.k, 0), (self.k, self.k)).copy_from(b);
        }
        m
    }
}

pub fn poisson_kernel(sym: &Symbol, t: &MatrixTuple, max_len: usize) -> Result<PoissonKernel> {
    let defect = defect_matrix(sym, t)?;
    let least = min_eigenvalue(&defect);
    if least < EIGEN_CLAMP {
        return Err(Error::NotInDomain { margin: least });
    }
    let delta = psd_sqrt(&defect)?;
    let weights = compute_weights(sym, max_len)?;
    let alphabet = weights.alphabet();
    let k = t.k();
    let dim = alphabet.count_up_to(max_len);

    // T_{g_i β}* = T_β* T_i*, built in graded-lex order so parents come first.
    let adjoints: Vec<CMatrix> = t.mats().iter().map(|m| m.adjoint()).collect();
    let mut word_adjoints: Vec<CMatrix> = Vec::with_capacity(dim);
    word_adjoints.push(identity(k));
    for idx in 1..dim {
        let word = alphabet.word_at(idx);
        let first = word.first().expect("nonempty");
        let parent = alphabet.index_of(&word.tail().expect("nonempty"));
        word_adjoints.push(&word_adjoints[parent] * &adjoints[first]);
    }

    let blocks: Vec<CMatrix> = word_adjoints
        .iter()
        .enumerate()
        .map(|(idx, ta_star)| (&delta * ta_star) * c(weights.by_index(idx).sqrt(), 0.0))
        .collect();

    let mut gram = CMatrix::zeros(k, k);
    for b in &blocks {
        gram += b.adjoint() * b;
    }
    let isometry_residual = spectral_norm(&(gram - identity(k)))?;

    let shifts = build_shifts(sym, max_len)?;
    let mut intertwining_residual: f64 = 0.0;
    for (i, w) in shifts.matrices().iter().enumerate() {
        let mut compressed = CMatrix::zeros(k, k);
        for (row, col, v) in w.entries() {
            compressed += (blocks[row].adjoint() * &blocks[col]) * c(v, 0.0);
        }
        intertwining_residual = intertwining_residual.max(spectral_norm(&(compressed - t.get(i)))?);
    }

    Ok(PoissonKernel { k, blocks, delta, isometry_residual, intertwining_residual })
}
