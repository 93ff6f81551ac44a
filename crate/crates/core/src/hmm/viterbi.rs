use super::{DecodeResult, HiddenMarkovModel, Trellis};
use crate::error::{Error, Result};
use crate::extended::ExtendedValue;

/// The classical `O(m n²)` dynamic program.
pub fn viterbi_baseline(model: &HiddenMarkovModel, obs: &[usize]) -> Result<(DecodeResult, Trellis)> {
    model.check_observations(obs)?;
    let n = model.states();
    let mut trellis = Trellis::new(n, obs.len());
    let mut q: Vec<ExtendedValue> = (0..n).map(|s| model.log_initial(s)).collect();
    trellis.push_step(&q, std::iter::repeat_n(0, n));

    let mut v = vec![ExtendedValue::NEG_INFINITY; n];
    let mut pred = vec![0usize; n];
    for &y in &obs[..obs.len() - 1] {
        for (s, x) in v.iter_mut().enumerate() {
            *x = q[s] + model.log_emission(s, y);
        }
        for s in 0..n {
            let mut best = ExtendedValue::NEG_INFINITY;
            let mut arg = 0;
            for (from, &x) in v.iter().enumerate() {
                let cand = model.log_transition(from, s) + x;
                if cand >= best {
                    best = cand;
                    arg = from;
                }
            }
            q[s] = best;
            pred[s] = arg;
        }
        trellis.push_step(&q, pred.iter().copied());
    }
    let result = finish(model, &trellis, obs)?;
    Ok((result, trellis))
}

/// Picks the final state maximizing `q_m(s) + log e_s(y_m)` (largest state on
/// ties) and follows the stored predecessors back to step 1.
pub fn backtrack(model: &HiddenMarkovModel, trellis: &Trellis, obs: &[usize]) -> Result<Vec<usize>> {
    Ok(finish(model, trellis, obs)?.path)
}

pub(crate) fn finish(model: &HiddenMarkovModel, trellis: &Trellis, obs: &[usize]) -> Result<DecodeResult> {
    if trellis.steps() != obs.len() || trellis.states() != model.states() || !trellis.is_complete() {
        return Err(Error::InvalidArgument("trellis does not match the model and observations".into()));
    }
    model.check_observations(obs)?;
    let m = obs.len();
    let y = obs[m - 1];
    let mut best = ExtendedValue::NEG_INFINITY;
    let mut state = 0;
    for (s, &q) in trellis.log_q(m - 1).iter().enumerate() {
        let cand = q + model.log_emission(s, y);
        if cand >= best {
            best = cand;
            state = s;
        }
    }
    let mut path = vec![0; m];
    path[m - 1] = state;
    for i in (1..m).rev() {
        state = trellis.predecessors(i)[state] as usize;
        path[i - 1] = state;
    }
    Ok(DecodeResult {
        path,
        log_joint_prob: best,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::hmm::fixtures::two_state;
    use crate::hmm::joint_log_prob;

    #[test]
    fn two_state_example() {
        let m = two_state();
        let (r, trellis) = viterbi_baseline(&m, &[0, 0, 1, 1]).unwrap();
        assert_eq!(r.path, vec![0, 0, 1, 1]);
        let expected = (0.5f64 * 0.9 * 0.1 * 0.8 * 0.9 * 0.9 * 0.9 * 0.9).ln();
        assert!((r.log_joint_prob.to_f64() - expected).abs() < 1e-12);
        assert_eq!(backtrack(&m, &trellis, &[0, 0, 1, 1]).unwrap(), r.path);
        let half = ExtendedValue::ln_prob(0.5).unwrap();
        assert_eq!(trellis.log_q(0), &[half, half]);
    }

    #[test]
    fn single_step() {
        let m = two_state();
        let (r, trellis) = viterbi_baseline(&m, &[1]).unwrap();
        assert_eq!(r.path, vec![1]);
        assert_eq!(trellis.steps(), 1);
        assert!((r.log_joint_prob.to_f64() - (0.5f64 * 0.9).ln()).abs() < 1e-12);
    }

    #[test]
    fn deterministic_model_has_unique_path() {
        // 0 -> 1 -> 2 -> 0, state s emits symbol s.
        let model = HiddenMarkovModel::new(
            vec!["x".into(), "y".into(), "z".into()],
            vec![0.0, 1.0, 0.0],
            vec![0.0, 1.0, 0.0, 0.0, 0.0, 1.0, 1.0, 0.0, 0.0],
            vec![1.0, 0.0, 0.0, 0.0, 1.0, 0.0, 0.0, 0.0, 1.0],
        )
        .unwrap();
        let (r, _) = viterbi_baseline(&model, &[1, 2, 0, 1]).unwrap();
        assert_eq!(r.path, vec![1, 2, 0, 1]);
        assert_eq!(r.log_joint_prob, ExtendedValue::ZERO);

        let (r, _) = viterbi_baseline(&model, &[1, 1]).unwrap();
        assert!(r.log_joint_prob.is_neg_infinity());
        assert_eq!(r.path.len(), 2);
    }

    #[test]
    fn trellis_is_non_increasing() {
        let m = two_state();
        let obs = [0, 1, 1, 0, 0, 1, 0];
        let (r, trellis) = viterbi_baseline(&m, &obs).unwrap();
        for i in 1..obs.len() {
            let prev = trellis.log_q(i - 1).iter().max().unwrap();
            assert!(trellis.log_q(i).iter().all(|q| q <= prev));
        }
        let lp = joint_log_prob(&m, &r.path, &obs).unwrap();
        assert!((lp.to_f64() - r.log_joint_prob.to_f64()).abs() < 1e-9);
    }

    #[test]
    fn rejects_empty_and_unknown() {
        let m = two_state();
        assert!(matches!(viterbi_baseline(&m, &[]), Err(Error::Empty(_))));
        assert!(viterbi_baseline(&m, &[0, 2]).is_err());
        let (_, trellis) = viterbi_baseline(&m, &[0, 1]).unwrap();
        assert!(backtrack(&m, &trellis, &[0]).is_err());
    }
}
