use super::{DecodeResult, HiddenMarkovModel};
use crate::error::{Error, Result};
use crate::extended::ExtendedValue;

/// Largest `n^m` accepted by [`brute_force_decode`].
pub const MAX_BRUTE_FORCE_PATHS: u128 = 10_000_000;

/// Scores every one of the `n^m` paths.
///
/// Path scores are accumulated in the same order as the trellis recursions,
/// so optimal values are bit-identical to theirs. Among equally scored paths
/// the one that is largest when compared from the last step backwards wins,
/// which is the path the largest-index tie-break of the trellis reconstructs.
pub fn brute_force_decode(model: &HiddenMarkovModel, obs: &[usize]) -> Result<DecodeResult> {
    model.check_observations(obs)?;
    let n = model.states();
    let m = obs.len();
    let total = (0..m).try_fold(1u128, |acc, _| acc.checked_mul(n as u128));
    match total {
        Some(t) if t <= MAX_BRUTE_FORCE_PATHS => {}
        other => return Err(Error::TooLarge(other.unwrap_or(u128::MAX))),
    }

    let score = |path: &[usize]| -> ExtendedValue {
        let mut acc = model.log_initial(path[0]);
        for i in 1..m {
            acc = model.log_transition(path[i - 1], path[i]) + (acc + model.log_emission(path[i - 1], obs[i - 1]));
        }
        acc + model.log_emission(path[m - 1], obs[m - 1])
    };

    // Odometer with the first step as the fastest digit, so later paths are
    // larger in the backwards comparison and `>=` keeps the largest optimum.
    let mut path = vec![0usize; m];
    let mut best_path = path.clone();
    let mut best = ExtendedValue::NEG_INFINITY;
    loop {
        let s = score(&path);
        if s >= best {
            best = s;
            best_path.copy_from_slice(&path);
        }
        let mut i = 0;
        while i < m {
            path[i] += 1;
            if path[i] < n {
                break;
            }
            path[i] = 0;
            i += 1;
        }
        if i == m {
            break;
        }
    }
    Ok(DecodeResult {
        path: best_path,
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
        let r = brute_force_decode(&m, &[0, 0, 1, 1]).unwrap();
        assert_eq!(r.path, vec![0, 0, 1, 1]);
        // Runner-up (1,1,1,1): 0.5·0.1·0.8·0.1·0.8·0.9·0.8·0.9 is far below.
        let best = 0.5f64 * 0.9 * 0.1 * 0.8 * 0.9 * 0.9 * 0.9 * 0.9;
        let second = 0.5f64 * 0.1 * 0.8 * 0.1 * 0.8 * 0.9 * 0.8 * 0.9;
        assert!(best > second);
        assert!((r.log_joint_prob.to_f64() - best.ln()).abs() < 1e-12);
    }

    #[test]
    fn single_state() {
        let m = HiddenMarkovModel::new(vec!["a".into(), "b".into()], vec![1.0], vec![1.0], vec![0.25, 0.75]).unwrap();
        let r = brute_force_decode(&m, &[0, 1, 1]).unwrap();
        assert_eq!(r.path, vec![0, 0, 0]);
        assert_eq!(r.log_joint_prob, joint_log_prob(&m, &r.path, &[0, 1, 1]).unwrap());
    }

    #[test]
    fn ties_prefer_the_backwards_largest_path() {
        // Everything uniform: all 2^3 paths tie.
        let m = HiddenMarkovModel::new(vec!["a".into()], vec![0.5, 0.5], vec![0.5; 4], vec![1.0, 1.0]).unwrap();
        assert_eq!(brute_force_decode(&m, &[0, 0, 0]).unwrap().path, vec![1, 1, 1]);
    }

    #[test]
    fn refuses_large_instances() {
        let m = two_state();
        assert!(matches!(brute_force_decode(&m, &[0; 24]), Err(Error::TooLarge(_))));
        assert!(brute_force_decode(&m, &[0; 20]).is_ok());
    }
}
