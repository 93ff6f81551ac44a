use super::viterbi::finish;
use super::{DecodeResult, HiddenMarkovModel, Trellis};
use crate::dominance::{DominanceTable, DominanceTree};
use crate::error::{Error, Result};
use crate::extended::{ExtendedValue, Triple};
use crate::maxplus::{BlockIndex, MaxPlusMatrix, MulResult, MulStats, SplicedMultiplier, DEFAULT_MEMORY_BUDGET};

pub const DEFAULT_ALPHA: f64 = 0.25;

/// `max(1, ⌊α · log₂ n⌋)`.
pub fn block_width(states: usize, alpha: f64) -> usize {
    let t = (alpha * (states.max(1) as f64).log2()).floor();
    if t >= 1.0 {
        t as usize
    } else {
        1
    }
}

/// Decoder that advances the trellis with one online (max,+) product per
/// step against the preprocessed transposed log-transition matrix.
#[derive(Clone, Debug)]
pub struct GdfvDecoder<I = DominanceTree<Triple>> {
    model: HiddenMarkovModel,
    multiplier: SplicedMultiplier<I>,
}

pub type GdfvTreeDecoder = GdfvDecoder<DominanceTree<Triple>>;

/// The lookup-table variant, practical only for small models.
pub type GdfvTableDecoder = GdfvDecoder<DominanceTable<Triple>>;

impl GdfvDecoder<DominanceTree<Triple>> {
    /// `alpha` must lie in `(0, 0.5)`.
    pub fn new(model: &HiddenMarkovModel, alpha: f64) -> Result<Self> {
        Self::with_alpha_budget(model, alpha, DEFAULT_MEMORY_BUDGET)
    }

    pub fn with_alpha_budget(model: &HiddenMarkovModel, alpha: f64, budget_bytes: u64) -> Result<Self> {
        if !(alpha > 0.0 && alpha < 0.5) {
            return Err(Error::InvalidArgument(format!("alpha must lie in (0, 0.5), got {alpha}")));
        }
        Self::with_width(model, block_width(model.states(), alpha), budget_bytes)
    }
}

impl<I: BlockIndex> GdfvDecoder<I> {
    pub fn with_width(model: &HiddenMarkovModel, width: usize, budget_bytes: u64) -> Result<Self> {
        let n = model.states();
        let mut entries = Vec::with_capacity(n * n);
        for to in 0..n {
            for from in 0..n {
                entries.push(model.log_transition(from, to));
            }
        }
        let matrix = MaxPlusMatrix::new(n, n, entries)?;
        Ok(GdfvDecoder {
            model: model.clone(),
            multiplier: SplicedMultiplier::with_budget(&matrix, width, budget_bytes)?,
        })
    }

    pub fn model(&self) -> &HiddenMarkovModel {
        &self.model
    }

    pub fn width(&self) -> usize {
        self.multiplier.width()
    }

    pub fn multiplier(&self) -> &SplicedMultiplier<I> {
        &self.multiplier
    }

    pub fn decode(&self, obs: &[usize]) -> Result<(DecodeResult, Trellis)> {
        self.decode_counted(obs).map(|(r, t, _)| (r, t))
    }

    /// Also returns the multiplication work summed over all steps.
    pub fn decode_counted(&self, obs: &[usize]) -> Result<(DecodeResult, Trellis, MulStats)> {
        let model = &self.model;
        model.check_observations(obs)?;
        let n = model.states();
        let mut trellis = Trellis::new(n, obs.len());
        let mut product = MulResult {
            values: (0..n).map(|s| model.log_initial(s)).collect(),
            argmax: vec![0; n],
        };
        trellis.push_step(&product.values, product.argmax.iter().copied());

        let mut v = vec![ExtendedValue::NEG_INFINITY; n];
        let mut stats = MulStats::default();
        for &y in &obs[..obs.len() - 1] {
            for (s, x) in v.iter_mut().enumerate() {
                *x = product.values[s] + model.log_emission(s, y);
            }
            stats += self.multiplier.multiply_into(&v, &mut product)?;
            trellis.push_step(&product.values, product.argmax.iter().copied());
        }
        let result = finish(model, &trellis, obs)?;
        Ok((result, trellis, stats))
    }
}

/// One-shot decode with the table variant and block width `t`.
pub fn gdfv_table_decode(model: &HiddenMarkovModel, obs: &[usize], t: usize) -> Result<DecodeResult> {
    Ok(GdfvTableDecoder::with_width(model, t, DEFAULT_MEMORY_BUDGET)?.decode(obs)?.0)
}
