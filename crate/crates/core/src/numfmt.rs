//! Fixed-significance number formatting for CSV output.

/// Formats `x` like C's `%.{sig}g`: `sig` significant digits, trailing
/// zeros removed, scientific notation for very small or large exponents.
pub fn significant(x: f64, sig: usize) -> String {
    let sig = sig.max(1);
    if x == 0.0 {
        return "0".to_string();
    }
    if !x.is_finite() {
        return x.to_string();
    }
    let sci = format!("{:.*e}", sig - 1, x);
    let (mantissa, exp) = sci.split_once('e').expect("exponent marker");
    let exp: i32 = exp.parse().expect("integer exponent");
    if exp < -4 || exp >= sig as i32 {
        let sign = if exp < 0 { '-' } else { '+' };
        format!("{}e{sign}{:02}", trim_zeros(mantissa), exp.abs())
    } else {
        let decimals = (sig as i32 - 1 - exp).max(0) as usize;
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

#[cfg(test)]
mod tests {
    use super::significant;

    #[test]
    fn matches_printf_g() {
        let cases = [
            (5.0, "5"),
            (0.0, "0"),
            (18.0, "18"),
            (1.0 / 3.0, "0.333333333"),
            (9.87654321987, "9.87654322"),
            (9.9999999996, "10"),
            (-2.5, "-2.5"),
            (1.5e-7, "1.5e-07"),
            (1234567891234.0, "1.23456789e+12"),
            (0.0001, "0.0001"),
        ];
        for (x, want) in cases {
            assert_eq!(significant(x, 9), want, "{x}");
        }
    }
}
