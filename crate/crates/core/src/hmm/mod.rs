//! Time-homogeneous hidden Markov models and maximum a-posteriori decoding.
//!
//! States and symbols are 0-based indices here; the text formats in
//! [`io`] use 1-based state numbers on output.
//!
//! The trellis follows the convention
//! `q_1(s) = π_s`, `q_i(s) = max_{s'} q_{i-1}(s') · t_{s'}(s) · e_{s'}(y_{i-1})`,
//! with the last emission applied when picking the final state. Everything
//! is computed in natural-log space; zero probabilities become −∞.
//! Ties are broken towards the largest state index throughout.

mod brute;
mod gdfv;
pub mod io;
mod viterbi;

pub use brute::{brute_force_decode, MAX_BRUTE_FORCE_PATHS};
pub use gdfv::{block_width, gdfv_table_decode, GdfvDecoder, GdfvTableDecoder, GdfvTreeDecoder, DEFAULT_ALPHA};
pub use viterbi::{backtrack, viterbi_baseline};

use crate::error::{Error, Result};
use crate::extended::ExtendedValue;

/// Tolerance on row sums of the stochastic parameters.
pub const STOCHASTIC_TOLERANCE: f64 = 1e-9;

#[derive(Clone, Debug, PartialEq)]
pub struct HiddenMarkovModel {
    states: usize,
    symbols: Vec<String>,
    initial: Vec<f64>,
    transition: Vec<f64>,
    emission: Vec<f64>,
    log_initial: Vec<ExtendedValue>,
    log_transition: Vec<ExtendedValue>,
    log_emission: Vec<ExtendedValue>,
}

impl HiddenMarkovModel {
    /// `transition` is `n × n` row-major with row = from-state; `emission` is
    /// `n × |symbols|`. Rows (and `initial`) must sum to 1 within
    /// [`STOCHASTIC_TOLERANCE`].
    pub fn new(
        symbols: Vec<String>,
        initial: Vec<f64>,
        transition: Vec<f64>,
        emission: Vec<f64>,
    ) -> Result<Self> {
        Self::build(symbols, initial, transition, emission, false)
    }

    /// Like [`new`](Self::new), but rescales every row to sum to 1 instead
    /// of rejecting it. Rows summing to zero are still rejected.
    pub fn new_normalized(
        symbols: Vec<String>,
        initial: Vec<f64>,
        transition: Vec<f64>,
        emission: Vec<f64>,
    ) -> Result<Self> {
        Self::build(symbols, initial, transition, emission, true)
    }

    fn build(
        symbols: Vec<String>,
        mut initial: Vec<f64>,
        mut transition: Vec<f64>,
        mut emission: Vec<f64>,
        normalize: bool,
    ) -> Result<Self> {
        let n = initial.len();
        let k = symbols.len();
        if n == 0 {
            return Err(Error::InvalidModel("model needs at least one state".into()));
        }
        if k == 0 {
            return Err(Error::InvalidModel("alphabet is empty".into()));
        }
        for (i, s) in symbols.iter().enumerate() {
            if s.is_empty() || s.chars().any(char::is_whitespace) {
                return Err(Error::InvalidModel(format!("symbol {} has an invalid name {s:?}", i + 1)));
            }
            if symbols[..i].contains(s) {
                return Err(Error::InvalidModel(format!("symbol {s:?} is listed twice")));
            }
        }
        if transition.len() != n * n {
            return Err(Error::InvalidModel(format!(
                "transition matrix has {} entries, expected {}",
                transition.len(),
                n * n
            )));
        }
        if emission.len() != n * k {
            return Err(Error::InvalidModel(format!(
                "emission matrix has {} entries, expected {}",
                emission.len(),
                n * k
            )));
        }
        check_row("initial distribution", &mut initial, normalize)?;
        for (s, row) in transition.chunks_exact_mut(n).enumerate() {
            check_row(&format!("transition row {}", s + 1), row, normalize)?;
        }
        for (s, row) in emission.chunks_exact_mut(k).enumerate() {
            check_row(&format!("emission row {}", s + 1), row, normalize)?;
        }
        let logs = |v: &[f64]| -> Vec<ExtendedValue> {
            v.iter().map(|&p| ExtendedValue::ln_prob(p).expect("validated")).collect()
        };
        Ok(HiddenMarkovModel {
            states: n,
            log_initial: logs(&initial),
            log_transition: logs(&transition),
            log_emission: logs(&emission),
            symbols,
            initial,
            transition,
            emission,
        })
    }

    #[inline]
    pub fn states(&self) -> usize {
        self.states
    }

    pub fn alphabet_size(&self) -> usize {
        self.symbols.len()
    }

    pub fn symbols(&self) -> &[String] {
        &self.symbols
    }

    pub fn symbol_index(&self, name: &str) -> Option<usize> {
        self.symbols.iter().position(|s| s == name)
    }

    /// Maps symbol names to indices.
    pub fn encode<S: AsRef<str>>(&self, names: &[S]) -> Result<Vec<usize>> {
        names
            .iter()
            .map(|s| {
                self.symbol_index(s.as_ref())
                    .ok_or_else(|| Error::UnknownSymbol(s.as_ref().to_string()))
            })
            .collect()
    }

    pub fn initial(&self) -> &[f64] {
        &self.initial
    }

    pub fn transition(&self) -> &[f64] {
        &self.transition
    }

    pub fn emission(&self) -> &[f64] {
        &self.emission
    }

    #[inline]
    pub fn log_initial(&self, s: usize) -> ExtendedValue {
        self.log_initial[s]
    }

    /// `log t_from(to)`.
    #[inline]
    pub fn log_transition(&self, from: usize, to: usize) -> ExtendedValue {
        self.log_transition[from * self.states + to]
    }

    /// `log e_state(symbol)`.
    #[inline]
    pub fn log_emission(&self, state: usize, symbol: usize) -> ExtendedValue {
        self.log_emission[state * self.symbols.len() + symbol]
    }

    pub(crate) fn check_observations(&self, obs: &[usize]) -> Result<()> {
        if obs.is_empty() {
            return Err(Error::Empty("observation sequence"));
        }
        if let Some(&bad) = obs.iter().find(|&&y| y >= self.symbols.len()) {
            return Err(Error::UnknownSymbol(format!("#{bad}")));
        }
        Ok(())
    }
}

fn check_row(what: &str, row: &mut [f64], normalize: bool) -> Result<()> {
    if let Some(p) = row.iter().find(|p| !(0.0..=1.0).contains(*p) && !(normalize && **p > 1.0)) {
        return Err(Error::InvalidModel(format!("{what} has entry {p} outside [0, 1]")));
    }
    let sum: f64 = row.iter().sum();
    if normalize {
        if !(sum > 0.0 && sum.is_finite()) {
            return Err(Error::InvalidModel(format!("{what} sums to {sum} and cannot be normalized")));
        }
        row.iter_mut().for_each(|p| *p /= sum);
    } else if (sum - 1.0).abs() > STOCHASTIC_TOLERANCE {
        return Err(Error::InvalidModel(format!("{what} sums to {sum}, not 1")));
    }
    Ok(())
}

/// A most probable state path and its joint log-probability.
#[derive(Clone, Debug, PartialEq)]
pub struct DecodeResult {
    pub path: Vec<usize>,
    pub log_joint_prob: ExtendedValue,
}

/// `log q_i(s)` for every step and state, plus the predecessor achieving it.
#[derive(Clone, Debug, PartialEq)]
pub struct Trellis {
    states: usize,
    steps: usize,
    log_q: Vec<ExtendedValue>,
    pred: Vec<u32>,
}

impl Trellis {
    pub(crate) fn new(states: usize, steps: usize) -> Self {
        Trellis {
            states,
            steps,
            log_q: Vec::with_capacity(states * steps),
            pred: Vec::with_capacity(states * steps),
        }
    }

    pub fn states(&self) -> usize {
        self.states
    }

    pub fn steps(&self) -> usize {
        self.steps
    }

    /// `log q_{step+1}` for all states (step is 0-based).
    pub fn log_q(&self, step: usize) -> &[ExtendedValue] {
        &self.log_q[step * self.states..(step + 1) * self.states]
    }

    /// Predecessor of each state at `step` (0-based, `step >= 1`).
    pub fn predecessors(&self, step: usize) -> &[u32] {
        &self.pred[step * self.states..(step + 1) * self.states]
    }

    pub(crate) fn push_step(&mut self, log_q: &[ExtendedValue], pred: impl IntoIterator<Item = usize>) {
        self.log_q.extend_from_slice(log_q);
        self.pred.extend(pred.into_iter().map(|p| p as u32));
        debug_assert_eq!(self.log_q.len(), self.pred.len());
    }

    pub(crate) fn is_complete(&self) -> bool {
        self.log_q.len() == self.states * self.steps
    }
}

/// `log Pr(X, Y) = log π_{x_1} + Σ log t_{x_i}(x_{i+1}) + Σ log e_{x_i}(y_i)`.
pub fn joint_log_prob(model: &HiddenMarkovModel, path: &[usize], obs: &[usize]) -> Result<ExtendedValue> {
    if path.len() != obs.len() {
        return Err(Error::DimensionMismatch {
            expected: obs.len(),
            actual: path.len(),
        });
    }
    model.check_observations(obs)?;
    if let Some(&s) = path.iter().find(|&&s| s >= model.states()) {
        return Err(Error::StateOutOfRange {
            state: s,
            states: model.states(),
        });
    }
    let mut total = model.log_initial(path[0]);
    for w in path.windows(2) {
        total = total + model.log_transition(w[0], w[1]);
    }
    for (&s, &y) in path.iter().zip(obs) {
        total = total + model.log_emission(s, y);
    }
    Ok(total)
}

#[cfg(test)]
pub(crate) mod fixtures {
    use super::*;

    /// Two states over {a, b}; decodes (a, a, b, b) to states (1, 1, 2, 2).
    pub fn two_state() -> HiddenMarkovModel {
        HiddenMarkovModel::new(
            vec!["a".into(), "b".into()],
            vec![0.5, 0.5],
            vec![0.9, 0.1, 0.2, 0.8],
            vec![0.9, 0.1, 0.1, 0.9],
        )
        .unwrap()
    }
}

#[cfg(test)]
mod tests {
    use super::fixtures::two_state;
    use super::*;

    #[test]
    fn rejects_non_stochastic_rows() {
        let err = HiddenMarkovModel::new(
            vec!["a".into()],
            vec![0.5, 0.5],
            vec![0.9, 0.1, 0.3, 0.8],
            vec![1.0, 1.0],
        )
        .unwrap_err();
        assert!(err.to_string().contains("transition row 2"), "{err}");

        let err = HiddenMarkovModel::new(vec!["a".into()], vec![1.0], vec![1.0], vec![1.5]).unwrap_err();
        assert!(err.to_string().contains("emission row 1"), "{err}");

        let err = HiddenMarkovModel::new(vec!["a".into()], vec![0.7], vec![1.0], vec![1.0]).unwrap_err();
        assert!(err.to_string().contains("initial"), "{err}");
    }

    #[test]
    fn tolerance_is_tight() {
        let ok = HiddenMarkovModel::new(vec!["a".into()], vec![0.5 + 5e-10, 0.5], vec![0.5; 4], vec![1.0; 2]);
        assert!(ok.is_ok());
        let bad = HiddenMarkovModel::new(vec!["a".into()], vec![0.5 + 1e-8, 0.5], vec![0.5; 4], vec![1.0; 2]);
        assert!(bad.is_err());
    }

    #[test]
    fn normalization_is_opt_in() {
        let m = HiddenMarkovModel::new_normalized(
            vec!["a".into(), "b".into()],
            vec![2.0, 2.0],
            vec![1.0, 3.0, 0.5, 0.5],
            vec![0.2, 0.2, 0.0, 7.0],
        )
        .unwrap();
        assert_eq!(m.initial(), &[0.5, 0.5]);
        assert_eq!(m.transition(), &[0.25, 0.75, 0.5, 0.5]);
        assert_eq!(m.emission(), &[0.5, 0.5, 0.0, 1.0]);
        assert!(HiddenMarkovModel::new_normalized(vec!["a".into()], vec![0.0], vec![1.0], vec![1.0]).is_err());
    }

    #[test]
    fn rejects_bad_symbols() {
        for symbols in [vec![], vec!["a".to_string(), "a".to_string()], vec!["x y".to_string()]] {
            let k = symbols.len().max(1);
            let e = vec![1.0 / k as f64; k];
            assert!(HiddenMarkovModel::new(symbols, vec![1.0], vec![1.0], e).is_err());
        }
    }

    #[test]
    fn joint_log_prob_examples() {
        let m = two_state();
        let lp = joint_log_prob(&m, &[1], &[0]).unwrap();
        assert!((lp.to_f64() - (0.5f64 * 0.1).ln()).abs() < 1e-12);

        let lp = joint_log_prob(&m, &[0, 0, 1, 1], &[0, 0, 1, 1]).unwrap();
        let expected = (0.5f64 * 0.9 * 0.1 * 0.8 * 0.9 * 0.9 * 0.9 * 0.9).ln();
        assert!((lp.to_f64() - expected).abs() < 1e-12);

        let sparse = HiddenMarkovModel::new(
            vec!["a".into()],
            vec![1.0, 0.0],
            vec![0.0, 1.0, 0.0, 1.0],
            vec![1.0, 1.0],
        )
        .unwrap();
        assert!(joint_log_prob(&sparse, &[0, 0], &[0, 0]).unwrap().is_neg_infinity());
    }

    #[test]
    fn joint_log_prob_errors() {
        let m = two_state();
        assert!(matches!(joint_log_prob(&m, &[0, 2], &[0, 0]), Err(Error::StateOutOfRange { .. })));
        assert!(matches!(joint_log_prob(&m, &[0], &[5]), Err(Error::UnknownSymbol(_))));
        assert!(joint_log_prob(&m, &[0], &[0, 1]).is_err());
        assert!(m.encode(&["a", "c"]).is_err());
        assert_eq!(m.encode(&["b", "a"]).unwrap(), vec![1, 0]);
    }
}
