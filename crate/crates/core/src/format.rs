//! Number formatting shared by the text writers.

/// Formats `x` with `digits` significant digits, trimming trailing zeros,
/// like C's `%g`.
pub fn significant(x: f64, digits: usize) -> String {
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
    let sci = format!("{:.*e}", digits - 1, x);
    let (mantissa, exp) = sci.split_once('e').expect("exponent present");
    let exp: i32 = exp.parse().expect("integer exponent");
    if exp < -4 || exp >= digits as i32 {
        format!(
            "{}e{}{:02}",
            trim_zeros(mantissa),
            if exp < 0 { '-' } else { '+' },
            exp.abs()
        )
    } else {
        let decimals = (digits as i32 - 1 - exp).max(0) as usize;
        trim_zeros(&format!("{:.*}", decimals, x)).to_string()
    }
}

fn trim_zeros(s: &str) -> &str {
    if s.contains('.') {
        s.trim_end_matches('0').trim_end_matches('.')
    } else {
        s
    }
}

#[cfg(test)]
mod tests {
    use super::significant;

    #[test]
    fn matches_printf_g() {
        assert_eq!(significant(0.0, 6), "0");
        assert_eq!(significant(1.0, 6), "1");
        assert_eq!(significant(2.0, 6), "2");
        assert_eq!(significant(-3.5, 6), "-3.5");
        assert_eq!(significant(0.731428571, 6), "0.731429");
        assert_eq!(significant(123456789.0, 6), "1.23457e+08");
        assert_eq!(significant(0.0000123, 6), "1.23e-05");
        assert_eq!(significant(999999.5, 6), "1e+06");
        assert_eq!(significant(100.0, 6), "100");
        assert_eq!(significant(0.0001, 6), "0.0001");
    }
}
