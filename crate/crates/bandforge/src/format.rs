//! Number formatting for reports and CSV.

/// Significant digits in CSV output.
pub const CSV_DIGITS: usize = 12;

/// C-style `%.{digits}g`: fixed notation for moderate exponents, scientific
/// otherwise, trailing zeros removed. Negative zero prints as `0`.
pub fn general(x: f64, digits: usize) -> String {
    if x == 0.0 {
        return "0".into();
    }
    if x.is_nan() {
        return "nan".into();
    }
    if x.is_infinite() {
        return if x > 0.0 { "inf".into() } else { "-inf".into() };
    }
    let digits = digits.max(1);
    // the exponent after rounding decides the notation
    let sci = format!("{:.*e}", digits - 1, x);
    let (mantissa, exp) = sci.split_once('e').expect("scientific format");
    let exp: i32 = exp.parse().expect("integer exponent");
    if exp < -4 || exp >= digits as i32 {
        let mantissa = trim_zeros(mantissa);
        let sign = if exp < 0 { '-' } else { '+' };
        format!("{mantissa}e{sign}{:02}", exp.abs())
    } else {
        let decimals = (digits as i32 - 1 - exp).max(0) as usize;
        trim_zeros(&format!("{x:.decimals$}")).to_string()
    }
}

fn trim_zeros(s: &str) -> &str {
    if s.contains('.') {
        s.trim_end_matches('0').trim_end_matches('.')
    } else {
        s
    }
}

/// CSV cell for a real value.
pub fn cell(x: f64) -> String {
    general(x, CSV_DIGITS)
}

/// Fixed ten-decimal rendering used in text reports.
pub fn fixed10(x: f64) -> String {
    if x.is_infinite() {
        return if x > 0.0 {
            "+inf".into()
        } else {
            "-inf".into()
        };
    }
    let s = format!("{x:.10}");
    if s.starts_with('-') && s[1..].chars().all(|c| c == '0' || c == '.') {
        s[1..].to_string()
    } else {
        s
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use proptest::prelude::*;

    #[test]
    fn matches_c_general_format() {
        let cases = [
            (0.0, "0"),
            (-0.0, "0"),
            (1.0, "1"),
            (0.5, "0.5"),
            (2.0 / std::f64::consts::PI, "0.636619772368"),
            (-1.0360472248, "-1.0360472248"),
            (1e-5, "1e-05"),
            (1.5e-12, "1.5e-12"),
            (123456789012.0, "123456789012"),
            (1234567890123.0, "1.23456789012e+12"),
            (0.0001234, "0.0001234"),
            (999999999999.9, "1e+12"),
        ];
        for (x, s) in cases {
            assert_eq!(general(x, 12), s, "{x}");
        }
    }

    #[test]
    fn fixed() {
        assert_eq!(fixed10(-0.499982389525), "-0.4999823895");
        assert_eq!(fixed10(-1e-12), "0.0000000000");
        assert_eq!(fixed10(f64::NEG_INFINITY), "-inf");
    }

    proptest! {
        #[test]
        fn reparse_is_a_fixed_point(x in prop::num::f64::NORMAL) {
            let s = cell(x);
            let y: f64 = s.parse().unwrap();
            prop_assert_eq!(cell(y), s.clone());
            // twelve significant digits
            prop_assert!((y - x).abs() <= 5e-12 * x.abs());
        }
    }
}
