//! Scalar helpers over `libm` so the crate stays `no_std`.

#[inline]
pub fn exp(x: f64) -> f64 {
    libm::exp(x)
}

#[inline]
pub fn ln(x: f64) -> f64 {
    libm::log(x)
}

#[inline]
pub fn sqrt(x: f64) -> f64 {
    libm::sqrt(x)
}

#[inline]
pub fn tanh(x: f64) -> f64 {
    libm::tanh(x)
}

#[inline]
pub fn ceil(x: f64) -> f64 {
    libm::ceil(x)
}

/// Logistic function, evaluated without overflow for large |x|.
#[inline]
pub fn sigmoid(x: f64) -> f64 {
    if x >= 0.0 {
        1.0 / (1.0 + exp(-x))
    } else {
        let e = exp(x);
        e / (1.0 + e)
    }
}

/// Binary cross-entropy of a logit `h` against a (soft) label `r`.
///
/// Uses `max(h, 0) - h r + ln(1 + e^{-|h|})`, which never takes `log(0)`.
#[inline]
pub fn bce_with_logits(h: f64, r: f64) -> f64 {
    let relu = if h > 0.0 { h } else { 0.0 };
    relu - h * r + libm::log1p(exp(-h.abs()))
}

pub fn dot(a: &[f64], b: &[f64]) -> f64 {
    debug_assert_eq!(a.len(), b.len());
    a.iter().zip(b).map(|(x, y)| x * y).sum()
}

pub fn norm(a: &[f64]) -> f64 {
    sqrt(dot(a, a))
}

/// Scales `v` to unit length in place. Returns `false` (and leaves `v`
/// untouched) for the zero vector.
pub fn normalize(v: &mut [f64]) -> bool {
    let n = norm(v);
    if n == 0.0 || !n.is_finite() {
        return false;
    }
    for x in v.iter_mut() {
        *x /= n;
    }
    true
}

/// Index of the largest value; ties resolve to the lowest index.
/// `NaN` entries are never selected. Returns `None` on empty input.
pub fn argmax_first<I>(values: I) -> Option<usize>
where
    I: IntoIterator<Item = f64>,
{
    let mut best: Option<(usize, f64)> = None;
    for (i, v) in values.into_iter().enumerate() {
        if v.is_nan() {
            continue;
        }
        match best {
            Some((_, b)) if v <= b => {}
            _ => best = Some((i, v)),
        }
    }
    best.map(|(i, _)| i)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn sigmoid_is_symmetric_and_saturates() {
        assert_eq!(sigmoid(0.0), 0.5);
        assert!((sigmoid(3.0) + sigmoid(-3.0) - 1.0).abs() < 1e-15);
        assert_eq!(sigmoid(800.0), 1.0);
        assert_eq!(sigmoid(-800.0), 0.0);
    }

    #[test]
    fn bce_matches_naive_form_in_safe_range() {
        for &(h, r) in &[(0.3, 0.2), (-1.7, 0.9), (2.5, 1.0), (-0.1, 0.0)] {
            let p = sigmoid(h);
            let naive = -(r * ln(p) + (1.0 - r) * ln(1.0 - p));
            assert!((bce_with_logits(h, r) - naive).abs() < 1e-12);
        }
        assert!(bce_with_logits(1e4, 0.0).is_finite());
    }

    #[test]
    fn argmax_prefers_lowest_index_on_ties() {
        assert_eq!(argmax_first([1.0, 3.0, 3.0, 2.0]), Some(1));
        assert_eq!(argmax_first([f64::NAN, -1.0]), Some(1));
        assert_eq!(argmax_first(core::iter::empty()), None);
        assert_eq!(
            argmax_first([f64::NEG_INFINITY, f64::NEG_INFINITY]),
            Some(0)
        );
    }
}
