//! Fixed CSV number formatting shared by every artifact writer.

/// 17 significant digits in scientific notation, which round-trips every `f64`.
pub fn fmt_f64(x: f64) -> String {
    if x == 0.0 {
        // Normalize -0 so sign-of-zero noise never changes output bytes.
        return "0".to_string();
    }
    if !x.is_finite() {
        return x.to_string();
    }
    format!("{x:.16e}")
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn round_trips() {
        for x in [1.0, -2.5e-300, std::f64::consts::PI, 1.0 / 3.0, f64::MAX] {
            assert_eq!(fmt_f64(x).parse::<f64>().unwrap(), x);
        }
        assert_eq!(fmt_f64(-0.0), "0");
        assert_eq!(fmt_f64(1.5), "1.5000000000000000e0");
    }
}
