//! Classification of tensorial dominoes and tiles.
//!
//! The classes overlap (a single-entry 0/1 tensor is possibilistic,
//! probabilistic and quantum at once); [`classify_tensor`] reports the most
//! restrictive label, with priority possibilistic > probabilistic > quantum.
//! The individual predicates are exposed for callers that care about one
//! class in isolation.

use crate::tensor::Tensor;

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub enum Classification {
    Possibilistic,
    Probabilistic,
    Quantum,
    Generic,
}

impl std::fmt::Display for Classification {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        let s = match self {
            Classification::Possibilistic => "possibilistic",
            Classification::Probabilistic => "probabilistic",
            Classification::Quantum => "quantum",
            Classification::Generic => "generic",
        };
        f.write_str(s)
    }
}

/// Every coefficient within `eps` of 0 or 1, imaginary parts within `eps` of 0.
pub fn is_possibilistic(t: &Tensor, eps: f64) -> bool {
    t.coeffs().iter().all(|c| {
        c.im.abs() <= eps && (c.re.abs() <= eps || (c.re - 1.0).abs() <= eps)
    })
}

/// Real coefficients in `[-eps, 1 + eps]` summing to 1 within `eps`.
pub fn is_probabilistic(t: &Tensor, eps: f64) -> bool {
    let mut sum = 0.0;
    for c in t.coeffs() {
        if c.im.abs() > eps || c.re < -eps || c.re > 1.0 + eps {
            return false;
        }
        sum += c.re;
    }
    (sum - 1.0).abs() <= eps
}

/// Unit squared norm within `eps`.
pub fn is_quantum(t: &Tensor, eps: f64) -> bool {
    (t.norm_sq() - 1.0).abs() <= eps
}

pub fn classify_tensor(t: &Tensor, eps: f64) -> Classification {
    if is_possibilistic(t, eps) {
        Classification::Possibilistic
    } else if is_probabilistic(t, eps) {
        Classification::Probabilistic
    } else if is_quantum(t, eps) {
        Classification::Quantum
    } else {
        Classification::Generic
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::tensor::C64;

    #[test]
    fn single_one_reports_most_restrictive() {
        let mut t = Tensor::zeros(2, 2);
        t.set(&[0, 1], C64::new(1.0, 0.0));
        // it satisfies all three definitions; priority picks possibilistic
        assert!(is_possibilistic(&t, 1e-9));
        assert!(is_probabilistic(&t, 1e-9));
        assert!(is_quantum(&t, 1e-9));
        assert_eq!(classify_tensor(&t, 1e-9), Classification::Possibilistic);
    }

    #[test]
    fn generic_when_nothing_fits() {
        let t = Tensor::from_real_rows(&[vec![2.0, 0.0], vec![0.0, 0.0]]).unwrap();
        assert_eq!(classify_tensor(&t, 1e-9), Classification::Generic);
    }
}
