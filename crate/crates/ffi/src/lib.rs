//! C ABI over the `gdfv` crate.
//!
//! Objects are opaque heap handles created by `*_new` functions and released
//! with the matching `*_free`. Every fallible function returns a
//! [`GdfvStatus`]; on failure a description is available from
//! [`gdfv_last_error`] on the same thread until the next failing call.
//!
//! States, symbols and columns are 0-based. `-INFINITY` encodes a zero
//! probability in log space and a −∞ (max,+) entry.

use std::cell::RefCell;
use std::ffi::{c_char, CStr, CString};
use std::panic::{catch_unwind, AssertUnwindSafe};
use std::path::Path;
use std::ptr;

use gdfv::hmm::{self, io, GdfvTreeDecoder, HiddenMarkovModel};
use gdfv::maxplus::{MaxPlusMatrix, MulResult, TreeMultiplier, DEFAULT_MEMORY_BUDGET};
use gdfv::{Error, ExtendedValue};

#[repr(C)]
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum GdfvStatus {
    Ok = 0,
    NullPointer = 1,
    InvalidArgument = 2,
    InvalidModel = 3,
    Parse = 4,
    Io = 5,
    BudgetExceeded = 6,
    DimensionMismatch = 7,
    UnknownSymbol = 8,
    TooLarge = 9,
    Internal = 10,
    Panic = 11,
}

/// A validated hidden Markov model.
pub struct GdfvModel(HiddenMarkovModel);

/// A preprocessed GDFV decoder; owns a copy of its model.
pub struct GdfvDecoder(GdfvTreeDecoder);

/// A preprocessed (max,+) matrix for repeated matrix-vector products.
pub struct GdfvMultiplier(TreeMultiplier);

thread_local! {
    static LAST_ERROR: RefCell<Option<CString>> = const { RefCell::new(None) };
}

fn status_of(e: &Error) -> GdfvStatus {
    match e {
        Error::InFile { source, .. } => status_of(source),
        Error::NaN | Error::PositiveInfinity | Error::InvalidArgument(_) | Error::Empty(_) => {
            GdfvStatus::InvalidArgument
        }
        Error::InvalidModel(_) => GdfvStatus::InvalidModel,
        Error::Parse(_) => GdfvStatus::Parse,
        Error::Io { .. } => GdfvStatus::Io,
        Error::BudgetExceeded { .. } => GdfvStatus::BudgetExceeded,
        Error::DimensionMismatch { .. } => GdfvStatus::DimensionMismatch,
        Error::UnknownSymbol(_) | Error::StateOutOfRange { .. } => GdfvStatus::UnknownSymbol,
        Error::TooLarge(_) => GdfvStatus::TooLarge,
        _ => GdfvStatus::Internal,
    }
}

fn set_error(message: String) {
    let c = CString::new(message.replace('\0', " ")).expect("no interior nul");
    LAST_ERROR.with(|e| *e.borrow_mut() = Some(c));
}

fn guard(f: impl FnOnce() -> Result<(), GdfvStatus>) -> GdfvStatus {
    match catch_unwind(AssertUnwindSafe(f)) {
        Ok(Ok(())) => GdfvStatus::Ok,
        Ok(Err(status)) => status,
        Err(_) => {
            set_error("internal panic".into());
            GdfvStatus::Panic
        }
    }
}

trait OrStatus<T> {
    fn or_status(self) -> Result<T, GdfvStatus>;
}

impl<T> OrStatus<T> for gdfv::Result<T> {
    fn or_status(self) -> Result<T, GdfvStatus> {
        self.map_err(|e| {
            set_error(e.to_string());
            status_of(&e)
        })
    }
}

fn non_null<T>(p: *const T, what: &str) -> Result<(), GdfvStatus> {
    if p.is_null() {
        set_error(format!("{what} is null"));
        Err(GdfvStatus::NullPointer)
    } else {
        Ok(())
    }
}

/// # Safety
/// `p` must be null (only if `len == 0`) or point to `len` readable values.
unsafe fn slice<'a, T>(p: *const T, len: usize, what: &str) -> Result<&'a [T], GdfvStatus> {
    if len == 0 {
        return Ok(&[]);
    }
    non_null(p, what)?;
    Ok(std::slice::from_raw_parts(p, len))
}

/// # Safety
/// As [`slice`], for writable memory.
unsafe fn slice_mut<'a, T>(p: *mut T, len: usize, what: &str) -> Result<&'a mut [T], GdfvStatus> {
    if len == 0 {
        return Ok(&mut []);
    }
    non_null(p, what)?;
    Ok(std::slice::from_raw_parts_mut(p, len))
}

fn write_decode(r: &hmm::DecodeResult, path_out: &mut [usize], log_prob_out: *mut f64) {
    path_out.copy_from_slice(&r.path);
    if !log_prob_out.is_null() {
        // SAFETY: checked non-null; caller guarantees it is writable.
        unsafe { *log_prob_out = r.log_joint_prob.to_f64() };
    }
}

/// Message of the last failure on this thread, or null. The pointer stays
/// valid until the next failing call on the same thread.
#[no_mangle]
pub extern "C" fn gdfv_last_error() -> *const c_char {
    LAST_ERROR.with(|e| e.borrow().as_ref().map_or(ptr::null(), |c| c.as_ptr()))
}

/// Builds a model from row-major probability arrays: `initial[n]`,
/// `transition[n*n]` (row = from-state) and `emission[n*k]`. Symbols are
/// named `a`, `b`, ... With `normalize`, rows are rescaled instead of
/// rejected.
///
/// # Safety
/// The arrays must hold the stated number of doubles and `out` must be
/// writable.
#[no_mangle]
pub unsafe extern "C" fn gdfv_model_new(
    n: usize,
    k: usize,
    initial: *const f64,
    transition: *const f64,
    emission: *const f64,
    normalize: bool,
    out: *mut *mut GdfvModel,
) -> GdfvStatus {
    guard(|| {
        non_null(out, "out")?;
        let nn = n.checked_mul(n).ok_or(GdfvStatus::TooLarge)?;
        let nk = n.checked_mul(k).ok_or(GdfvStatus::TooLarge)?;
        let initial = slice(initial, n, "initial")?.to_vec();
        let transition = slice(transition, nn, "transition")?.to_vec();
        let emission = slice(emission, nk, "emission")?.to_vec();
        let symbols = gdfv::bench::default_symbols(k);
        let model = if normalize {
            HiddenMarkovModel::new_normalized(symbols, initial, transition, emission)
        } else {
            HiddenMarkovModel::new(symbols, initial, transition, emission)
        }
        .or_status()?;
        *out = Box::into_raw(Box::new(GdfvModel(model)));
        Ok(())
    })
}

/// Reads a model file in the text format of the `gdfv` command-line tool.
///
/// # Safety
/// `path` must be a nul-terminated UTF-8 string and `out` writable.
#[no_mangle]
pub unsafe extern "C" fn gdfv_model_from_file(
    path: *const c_char,
    normalize: bool,
    out: *mut *mut GdfvModel,
) -> GdfvStatus {
    guard(|| {
        non_null(path, "path")?;
        non_null(out, "out")?;
        let path = CStr::from_ptr(path).to_str().map_err(|_| {
            set_error("path is not valid UTF-8".into());
            GdfvStatus::InvalidArgument
        })?;
        let model = io::load_model(Path::new(path), normalize).or_status()?;
        *out = Box::into_raw(Box::new(GdfvModel(model)));
        Ok(())
    })
}

/// # Safety
/// `model` must be null or a handle from this library not yet freed.
#[no_mangle]
pub unsafe extern "C" fn gdfv_model_free(model: *mut GdfvModel) {
    if !model.is_null() {
        drop(Box::from_raw(model));
    }
}

/// # Safety
/// `model` must be a live handle.
#[no_mangle]
pub unsafe extern "C" fn gdfv_model_states(model: *const GdfvModel) -> usize {
    model.as_ref().map_or(0, |m| m.0.states())
}

/// # Safety
/// `model` must be a live handle.
#[no_mangle]
pub unsafe extern "C" fn gdfv_model_alphabet_size(model: *const GdfvModel) -> usize {
    model.as_ref().map_or(0, |m| m.0.alphabet_size())
}

/// Viterbi decoding. Writes `m` states to `path_out` and, if non-null, the
/// joint log-probability to `log_prob_out`.
///
/// # Safety
/// `obs` holds `m` symbol indices, `path_out` has room for `m` states.
#[no_mangle]
pub unsafe extern "C" fn gdfv_viterbi(
    model: *const GdfvModel,
    obs: *const usize,
    m: usize,
    path_out: *mut usize,
    log_prob_out: *mut f64,
) -> GdfvStatus {
    guard(|| {
        non_null(model, "model")?;
        let obs = slice(obs, m, "obs")?;
        let path = slice_mut(path_out, m, "path_out")?;
        let (r, _) = hmm::viterbi_baseline(&(*model).0, obs).or_status()?;
        write_decode(&r, path, log_prob_out);
        Ok(())
    })
}

/// Preprocesses a decoder with block width `max(1, ⌊alpha·log₂ n⌋)`,
/// `alpha` in `(0, 0.5)`. A `mem_budget` of 0 selects the default.
///
/// # Safety
/// `model` must be a live handle and `out` writable.
#[no_mangle]
pub unsafe extern "C" fn gdfv_decoder_new(
    model: *const GdfvModel,
    alpha: f64,
    mem_budget: u64,
    out: *mut *mut GdfvDecoder,
) -> GdfvStatus {
    guard(|| {
        non_null(model, "model")?;
        non_null(out, "out")?;
        let budget = if mem_budget == 0 { DEFAULT_MEMORY_BUDGET } else { mem_budget };
        let dec = GdfvTreeDecoder::with_alpha_budget(&(*model).0, alpha, budget).or_status()?;
        *out = Box::into_raw(Box::new(GdfvDecoder(dec)));
        Ok(())
    })
}

/// Like [`gdfv_decoder_new`] with an explicit block width.
///
/// # Safety
/// As [`gdfv_decoder_new`].
#[no_mangle]
pub unsafe extern "C" fn gdfv_decoder_new_with_width(
    model: *const GdfvModel,
    width: usize,
    mem_budget: u64,
    out: *mut *mut GdfvDecoder,
) -> GdfvStatus {
    guard(|| {
        non_null(model, "model")?;
        non_null(out, "out")?;
        let budget = if mem_budget == 0 { DEFAULT_MEMORY_BUDGET } else { mem_budget };
        let dec = GdfvTreeDecoder::with_width(&(*model).0, width, budget).or_status()?;
        *out = Box::into_raw(Box::new(GdfvDecoder(dec)));
        Ok(())
    })
}

/// # Safety
/// `decoder` must be a live handle.
#[no_mangle]
pub unsafe extern "C" fn gdfv_decoder_width(decoder: *const GdfvDecoder) -> usize {
    decoder.as_ref().map_or(0, |d| d.0.width())
}

/// As [`gdfv_viterbi`], using the preprocessed decoder.
///
/// # Safety
/// As [`gdfv_viterbi`]; `decoder` must be a live handle.
#[no_mangle]
pub unsafe extern "C" fn gdfv_decoder_decode(
    decoder: *const GdfvDecoder,
    obs: *const usize,
    m: usize,
    path_out: *mut usize,
    log_prob_out: *mut f64,
) -> GdfvStatus {
    guard(|| {
        non_null(decoder, "decoder")?;
        let obs = slice(obs, m, "obs")?;
        let path = slice_mut(path_out, m, "path_out")?;
        let (r, _) = (*decoder).0.decode(obs).or_status()?;
        write_decode(&r, path, log_prob_out);
        Ok(())
    })
}

/// # Safety
/// `decoder` must be null or a live handle.
#[no_mangle]
pub unsafe extern "C" fn gdfv_decoder_free(decoder: *mut GdfvDecoder) {
    if !decoder.is_null() {
        drop(Box::from_raw(decoder));
    }
}

/// Preprocesses a `rows × cols` row-major matrix in blocks of `width`
/// columns. A `mem_budget` of 0 selects the default.
///
/// # Safety
/// `entries` holds `rows * cols` doubles and `out` is writable.
#[no_mangle]
pub unsafe extern "C" fn gdfv_multiplier_new(
    rows: usize,
    cols: usize,
    entries: *const f64,
    width: usize,
    mem_budget: u64,
    out: *mut *mut GdfvMultiplier,
) -> GdfvStatus {
    guard(|| {
        non_null(out, "out")?;
        let len = rows.checked_mul(cols).ok_or(GdfvStatus::TooLarge)?;
        let entries = slice(entries, len, "entries")?;
        let a = MaxPlusMatrix::from_f64(rows, cols, entries).or_status()?;
        let budget = if mem_budget == 0 { DEFAULT_MEMORY_BUDGET } else { mem_budget };
        let mul = TreeMultiplier::with_budget(&a, width, budget).or_status()?;
        *out = Box::into_raw(Box::new(GdfvMultiplier(mul)));
        Ok(())
    })
}

/// `values_out[i] = max_j A[i][j] + b[j]`, `argmax_out[i]` the largest such
/// `j` (or `cols - 1` when the row maximum is −∞). `argmax_out` may be null.
///
/// # Safety
/// `b` holds `len` doubles, `values_out` (and `argmax_out` if non-null) have
/// room for `rows` entries.
#[no_mangle]
pub unsafe extern "C" fn gdfv_multiplier_multiply(
    multiplier: *const GdfvMultiplier,
    b: *const f64,
    len: usize,
    values_out: *mut f64,
    argmax_out: *mut usize,
) -> GdfvStatus {
    guard(|| {
        non_null(multiplier, "multiplier")?;
        let mul = &(*multiplier).0;
        let b = slice(b, len, "b")?
            .iter()
            .map(|&x| ExtendedValue::new(x))
            .collect::<gdfv::Result<Vec<_>>>()
            .or_status()?;
        let values = slice_mut(values_out, mul.rows(), "values_out")?;
        let mut r = MulResult {
            values: Vec::new(),
            argmax: Vec::new(),
        };
        mul.multiply_into(&b, &mut r).or_status()?;
        for (o, v) in values.iter_mut().zip(&r.values) {
            *o = v.to_f64();
        }
        if !argmax_out.is_null() {
            std::slice::from_raw_parts_mut(argmax_out, mul.rows()).copy_from_slice(&r.argmax);
        }
        Ok(())
    })
}

/// # Safety
/// `multiplier` must be a live handle.
#[no_mangle]
pub unsafe extern "C" fn gdfv_multiplier_rows(multiplier: *const GdfvMultiplier) -> usize {
    multiplier.as_ref().map_or(0, |m| m.0.rows())
}

/// # Safety
/// `multiplier` must be null or a live handle.
#[no_mangle]
pub unsafe extern "C" fn gdfv_multiplier_free(multiplier: *mut GdfvMultiplier) {
    if !multiplier.is_null() {
        drop(Box::from_raw(multiplier));
    }
}
