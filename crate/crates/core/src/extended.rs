//! Extended reals (ℝ ∪ {−∞}) and the lexicographic triples used to remove
//! −∞ entries and argmax ties from the dominance reduction.

use std::cmp::Ordering;
use std::fmt;
use std::ops::{Add, Neg, Sub};

use crate::error::{Error, Result};

/// An element of ℝ ∪ {−∞}.
///
/// Stored as an `f64` whose only non-finite value is `-inf`; NaN and `+inf`
/// are rejected at construction, which makes the order total.
#[derive(Clone, Copy, Default)]
pub struct ExtendedValue(f64);

impl ExtendedValue {
    pub const NEG_INFINITY: ExtendedValue = ExtendedValue(f64::NEG_INFINITY);
    pub const ZERO: ExtendedValue = ExtendedValue(0.0);

    /// Accepts any finite value or `-inf`.
    pub fn new(x: f64) -> Result<Self> {
        if x.is_nan() {
            Err(Error::NaN)
        } else if x == f64::INFINITY {
            Err(Error::PositiveInfinity)
        } else {
            Ok(ExtendedValue(x))
        }
    }

    pub fn finite(x: f64) -> Result<Self> {
        if x.is_finite() {
            Ok(ExtendedValue(x))
        } else if x.is_nan() {
            Err(Error::NaN)
        } else {
            Err(Error::InvalidArgument(format!("expected a finite value, got {x}")))
        }
    }

    /// Natural logarithm of a probability, mapping 0 to −∞.
    pub fn ln_prob(p: f64) -> Result<Self> {
        if !(0.0..=1.0).contains(&p) {
            return Err(Error::InvalidArgument(format!("{p} is not a probability")));
        }
        Ok(ExtendedValue(p.ln()))
    }

    #[inline]
    pub fn is_finite(self) -> bool {
        self.0 != f64::NEG_INFINITY
    }

    #[inline]
    pub fn is_neg_infinity(self) -> bool {
        self.0 == f64::NEG_INFINITY
    }

    /// The finite value, if any.
    pub fn value(self) -> Option<f64> {
        self.is_finite().then_some(self.0)
    }

    /// Raw `f64` view; −∞ is `f64::NEG_INFINITY`.
    #[inline]
    pub fn to_f64(self) -> f64 {
        self.0
    }
}

impl TryFrom<f64> for ExtendedValue {
    type Error = Error;

    fn try_from(x: f64) -> Result<Self> {
        ExtendedValue::new(x)
    }
}

impl Add for ExtendedValue {
    type Output = ExtendedValue;

    // IEEE addition already absorbs -inf; +inf never appears.
    #[inline]
    fn add(self, rhs: ExtendedValue) -> ExtendedValue {
        ExtendedValue(self.0 + rhs.0)
    }
}

impl PartialEq for ExtendedValue {
    fn eq(&self, other: &Self) -> bool {
        self.0 == other.0
    }
}

impl Eq for ExtendedValue {}

impl PartialOrd for ExtendedValue {
    fn partial_cmp(&self, other: &Self) -> Option<Ordering> {
        Some(self.cmp(other))
    }
}

impl Ord for ExtendedValue {
    #[inline]
    fn cmp(&self, other: &Self) -> Ordering {
        cmp_f64(self.0, other.0)
    }
}

impl fmt::Debug for ExtendedValue {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        fmt::Display::fmt(self, f)
    }
}

impl fmt::Display for ExtendedValue {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.is_finite() {
            write!(f, "{}", self.0)
        } else {
            f.write_str("-inf")
        }
    }
}

// Callers guarantee no NaN; -0.0 and 0.0 compare equal.
#[inline]
fn cmp_f64(a: f64, b: f64) -> Ordering {
    if a < b {
        Ordering::Less
    } else if a > b {
        Ordering::Greater
    } else {
        Ordering::Equal
    }
}

/// A triple ⟨k, x, j⟩ read as `k·∞ + x`, with `j` breaking ties.
///
/// `inf_count` counts −∞ lifts (each contributes −1, so sums can go below
/// −1 and differences above 0). `tag` is 0 on matrix entries and the 1-based
/// column on vector entries; differences of vector entries make it signed.
#[derive(Clone, Copy, Debug, Default)]
pub struct Triple {
    pub inf_count: i64,
    pub value: f64,
    pub tag: i64,
}

impl Triple {
    pub const ZERO: Triple = Triple {
        inf_count: 0,
        value: 0.0,
        tag: 0,
    };

    pub fn new(inf_count: i64, value: f64, tag: i64) -> Result<Self> {
        if value.is_nan() {
            return Err(Error::NaN);
        }
        if value.is_infinite() {
            return Err(Error::InvalidArgument(
                "triple value must be finite; encode -inf with inf_count".into(),
            ));
        }
        Ok(Triple {
            inf_count,
            value,
            tag,
        })
    }
}

impl Add for Triple {
    type Output = Triple;

    #[inline]
    fn add(self, rhs: Triple) -> Triple {
        Triple {
            inf_count: self.inf_count + rhs.inf_count,
            value: self.value + rhs.value,
            tag: self.tag + rhs.tag,
        }
    }
}

impl Sub for Triple {
    type Output = Triple;

    #[inline]
    fn sub(self, rhs: Triple) -> Triple {
        Triple {
            inf_count: self.inf_count - rhs.inf_count,
            value: self.value - rhs.value,
            tag: self.tag - rhs.tag,
        }
    }
}

impl Neg for Triple {
    type Output = Triple;

    fn neg(self) -> Triple {
        Triple {
            inf_count: -self.inf_count,
            value: -self.value,
            tag: -self.tag,
        }
    }
}

impl PartialEq for Triple {
    fn eq(&self, other: &Self) -> bool {
        self.cmp(other) == Ordering::Equal
    }
}

impl Eq for Triple {}

impl PartialOrd for Triple {
    fn partial_cmp(&self, other: &Self) -> Option<Ordering> {
        Some(self.cmp(other))
    }
}

impl Ord for Triple {
    #[inline]
    fn cmp(&self, other: &Self) -> Ordering {
        self.inf_count
            .cmp(&other.inf_count)
            .then_with(|| cmp_f64(self.value, other.value))
            .then_with(|| self.tag.cmp(&other.tag))
    }
}

/// Lexicographic comparison on `(inf_count, value, tag)`.
pub fn triple_compare(a: Triple, b: Triple) -> Ordering {
    a.cmp(&b)
}

/// Finite `x` becomes ⟨0, x, 0⟩ and −∞ becomes ⟨−1, 0, 0⟩.
#[inline]
pub fn lift_matrix_entry(x: ExtendedValue) -> Triple {
    match x.value() {
        Some(v) => Triple {
            inf_count: 0,
            value: v,
            tag: 0,
        },
        None => Triple {
            inf_count: -1,
            value: 0.0,
            tag: 0,
        },
    }
}

/// Like [`lift_matrix_entry`] but tagged with the 1-based column `j`.
#[inline]
pub fn lift_vector_entry(x: ExtendedValue, j: usize) -> Result<Triple> {
    if j == 0 {
        return Err(Error::ReservedTag);
    }
    let mut t = lift_matrix_entry(x);
    t.tag = j as i64;
    Ok(t)
}

/// Maps a product triple back to an extended value and the 1-based column
/// that produced it.
pub fn lower(t: Triple) -> Result<(ExtendedValue, usize)> {
    if t.tag <= 0 {
        return Err(Error::NotAProduct);
    }
    let value = if t.inf_count == 0 {
        ExtendedValue(t.value)
    } else {
        ExtendedValue::NEG_INFINITY
    };
    Ok((value, t.tag as usize))
}

#[cfg(test)]
mod tests {
    use super::*;
    use proptest::prelude::*;

    fn tr(k: i64, x: f64, j: i64) -> Triple {
        Triple::new(k, x, j).unwrap()
    }

    fn fin(x: f64) -> ExtendedValue {
        ExtendedValue::finite(x).unwrap()
    }

    #[test]
    fn extended_rejects_nan_and_pos_inf() {
        assert!(matches!(ExtendedValue::new(f64::NAN), Err(Error::NaN)));
        assert!(matches!(ExtendedValue::new(f64::INFINITY), Err(Error::PositiveInfinity)));
        assert!(ExtendedValue::finite(f64::NEG_INFINITY).is_err());
        assert!(ExtendedValue::new(f64::NEG_INFINITY).unwrap().is_neg_infinity());
    }

    #[test]
    fn neg_infinity_absorbs_and_sorts_first() {
        let ninf = ExtendedValue::NEG_INFINITY;
        assert!(ninf < fin(-1e300));
        assert!((ninf + fin(5.0)).is_neg_infinity());
        assert!((fin(5.0) + ninf).is_neg_infinity());
        assert!((ninf + ninf).is_neg_infinity());
        assert_eq!(fin(1.5) + fin(2.0), fin(3.5));
        assert_eq!(ExtendedValue::ln_prob(0.0).unwrap(), ninf);
        assert_eq!(ExtendedValue::ln_prob(1.0).unwrap(), ExtendedValue::ZERO);
    }

    #[test]
    fn triple_add_examples() {
        assert_eq!(tr(0, 1.5, 0) + tr(0, 2.0, 3), tr(0, 3.5, 3));
        let s = tr(-1, 0.0, 0) + tr(0, 7.0, 2);
        assert_eq!((s.inf_count, s.value, s.tag), (-1, 7.0, 2));
        let x = tr(-2, 4.25, 9);
        assert_eq!(Triple::ZERO + x, x);
    }

    #[test]
    fn triple_compare_examples() {
        assert_eq!(triple_compare(tr(-1, 99.0, 9), tr(0, -5.0, 0)), Ordering::Less);
        assert_eq!(triple_compare(tr(0, 2.0, 1), tr(0, 2.0, 3)), Ordering::Less);
        let x = tr(3, -0.5, 7);
        assert_eq!(triple_compare(x, x), Ordering::Equal);
        // Signed zeros are the same value.
        assert_eq!(triple_compare(tr(0, 0.0, 1), tr(0, -0.0, 1)), Ordering::Equal);
    }

    #[test]
    fn lifts() {
        let a = lift_matrix_entry(fin(0.25));
        assert_eq!((a.inf_count, a.value, a.tag), (0, 0.25, 0));
        let b = lift_matrix_entry(ExtendedValue::NEG_INFINITY);
        assert_eq!((b.inf_count, b.value, b.tag), (-1, 0.0, 0));
        assert_eq!(lift_matrix_entry(fin(0.0)), Triple::ZERO);

        let c = lift_vector_entry(fin(3.0), 2).unwrap();
        assert_eq!((c.inf_count, c.value, c.tag), (0, 3.0, 2));
        let d = lift_vector_entry(ExtendedValue::NEG_INFINITY, 5).unwrap();
        assert_eq!((d.inf_count, d.value, d.tag), (-1, 0.0, 5));
        assert_eq!(lift_vector_entry(fin(0.0), 1).unwrap(), tr(0, 0.0, 1));
        assert!(matches!(lift_vector_entry(fin(1.0), 0), Err(Error::ReservedTag)));
    }

    #[test]
    fn lower_examples() {
        assert_eq!(lower(tr(0, 4.5, 3)).unwrap(), (fin(4.5), 3));
        let (v, j) = lower(tr(-2, 1.0, 4)).unwrap();
        assert!(v.is_neg_infinity());
        assert_eq!(j, 4);
        assert_eq!(lower(tr(0, 0.0, 1)).unwrap(), (fin(0.0), 1));
        assert!(matches!(lower(tr(0, 1.0, 0)), Err(Error::NotAProduct)));
    }

    #[test]
    fn triple_order_is_total_on_small_grid() {
        let mut xs = Vec::new();
        for k in -2..=1 {
            for v in [-1.0, 0.0, 0.5] {
                for j in 0..3 {
                    xs.push(tr(k, v, j));
                }
            }
        }
        for &a in &xs {
            for &b in &xs {
                assert_eq!(a.cmp(&b), b.cmp(&a).reverse());
                for &c in &xs {
                    if a <= b && b <= c {
                        assert!(a <= c);
                    }
                }
            }
        }
    }

    fn ext() -> impl Strategy<Value = ExtendedValue> {
        prop_oneof![
            9 => (-1e6f64..1e6).prop_map(|x| ExtendedValue::finite(x).unwrap()),
            1 => Just(ExtendedValue::NEG_INFINITY),
        ]
    }

    proptest! {
        #[test]
        fn lift_preserves_strict_order(
            a1 in -1e6f64..1e6, b1 in -1e6f64..1e6,
            a2 in -1e6f64..1e6, b2 in -1e6f64..1e6,
            j1 in 1usize..50, j2 in 1usize..50,
        ) {
            if a1 + b1 > a2 + b2 {
                let l1 = lift_matrix_entry(fin(a1)) + lift_vector_entry(fin(b1), j1).unwrap();
                let l2 = lift_matrix_entry(fin(a2)) + lift_vector_entry(fin(b2), j2).unwrap();
                prop_assert!(l1 > l2);
            }
        }

        #[test]
        fn lower_inverts_lift(x in -1e6f64..1e6, y in -1e6f64..1e6, j in 1usize..1000) {
            let t = lift_matrix_entry(fin(x)) + lift_vector_entry(fin(y), j).unwrap();
            prop_assert_eq!(lower(t).unwrap(), (fin(x + y), j));
        }

        #[test]
        fn lowered_sum_matches_extended_sum(x in ext(), y in ext(), j in 1usize..100) {
            let t = lift_matrix_entry(x) + lift_vector_entry(y, j).unwrap();
            let (v, col) = lower(t).unwrap();
            prop_assert_eq!(v, x + y);
            prop_assert_eq!(col, j);
        }
    }
}
