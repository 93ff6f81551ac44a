//! Text formats for models, observation sequences and decode output.
//!
//! Model file:
//!
//! ```text
//! n k
//! sym_1 ... sym_k
//! π_1 ... π_n
//! t_1(1) ... t_1(n)      (n lines, row = from-state)
//! ...
//! e_1(sym_1) ... e_1(sym_k)   (n lines)
//! ...
//! ```
//!
//! Observation files list symbol names separated by any whitespace. Decode
//! output is the 1-based state path on one line followed by
//! `logprob <value>` (or `logprob -inf`).

use std::fmt::Write as _;
use std::path::Path;

use super::{DecodeResult, HiddenMarkovModel};
use crate::error::{Error, ParseError, Result};
use crate::text::{tokens, Lines};

pub fn parse_model(text: &str) -> Result<HiddenMarkovModel> {
    parse_model_with(text, false)
}

/// With `normalize`, rows are rescaled instead of rejected.
pub fn parse_model_with(text: &str, normalize: bool) -> Result<HiddenMarkovModel> {
    let mut lines = Lines::new(text);
    let header = lines.next_exact(2, "model header \"n k\"")?;
    let n = header[0].parse_usize("state count")?;
    let k = header[1].parse_usize("alphabet size")?;
    if n == 0 {
        return Err(header[0].error("state count must be positive").into());
    }
    if k == 0 {
        return Err(header[1].error("alphabet size must be positive").into());
    }
    let symbols: Vec<String> = lines
        .next_exact(k, "symbol names")?
        .iter()
        .map(|t| t.text.to_string())
        .collect();
    let mut probs = |count: usize, what: &str| -> Result<Vec<f64>, ParseError> {
        lines
            .next_exact(count, what)?
            .iter()
            .map(|t| t.parse_f64("a probability"))
            .collect()
    };
    let initial = probs(n, "initial probabilities")?;
    let mut transition = Vec::with_capacity(n * n);
    for s in 0..n {
        transition.extend(probs(n, &format!("transition row {}", s + 1))?);
    }
    let mut emission = Vec::with_capacity(n * k);
    for s in 0..n {
        emission.extend(probs(k, &format!("emission row {}", s + 1))?);
    }
    lines.expect_end()?;
    if normalize {
        HiddenMarkovModel::new_normalized(symbols, initial, transition, emission)
    } else {
        HiddenMarkovModel::new(symbols, initial, transition, emission)
    }
}

pub fn format_model(model: &HiddenMarkovModel) -> String {
    let (n, k) = (model.states(), model.alphabet_size());
    let mut s = format!("{n} {k}\n{}\n", model.symbols().join(" "));
    let push = |s: &mut String, row: &[f64]| {
        let parts: Vec<String> = row.iter().map(|p| p.to_string()).collect();
        s.push_str(&parts.join(" "));
        s.push('\n');
    };
    push(&mut s, model.initial());
    for row in model.transition().chunks_exact(n) {
        push(&mut s, row);
    }
    for row in model.emission().chunks_exact(k) {
        push(&mut s, row);
    }
    s
}

/// Symbol names to 0-based symbol indices.
pub fn parse_observations(model: &HiddenMarkovModel, text: &str) -> Result<Vec<usize>> {
    let toks = tokens(text);
    if toks.is_empty() {
        return Err(ParseError::new(1, 1, "observation sequence is empty").into());
    }
    toks.iter()
        .map(|t| {
            model
                .symbol_index(t.text)
                .ok_or_else(|| t.error(format!("unknown symbol {:?}", t.text)).into())
        })
        .collect()
}

pub fn format_observations(model: &HiddenMarkovModel, obs: &[usize]) -> String {
    let names: Vec<&str> = obs.iter().map(|&y| model.symbols()[y].as_str()).collect();
    format!("{}\n", names.join(" "))
}

pub fn format_decode(result: &DecodeResult) -> String {
    let mut s = String::new();
    for (i, state) in result.path.iter().enumerate() {
        if i > 0 {
            s.push(' ');
        }
        write!(s, "{}", state + 1).unwrap();
    }
    writeln!(s, "\nlogprob {}", result.log_joint_prob).unwrap();
    s
}

pub(crate) fn read_file(path: &Path) -> Result<String> {
    std::fs::read_to_string(path).map_err(|source| Error::Io {
        path: path.to_path_buf(),
        source,
    })
}

pub fn load_model(path: &Path, normalize: bool) -> Result<HiddenMarkovModel> {
    parse_model_with(&read_file(path)?, normalize).map_err(|e| e.in_file(path))
}

pub fn load_observations(model: &HiddenMarkovModel, path: &Path) -> Result<Vec<usize>> {
    parse_observations(model, &read_file(path)?).map_err(|e| e.in_file(path))
}
