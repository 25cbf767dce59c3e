/// Significant digits used for every floating-point value in CSV output.
pub const SIG_DIGITS: usize = 12;

/// `x` with `SIG_DIGITS` significant digits: fixed notation for exponents in
/// `[-5, 12)`, scientific otherwise, trailing zeros removed.
pub fn sig(x: f64) -> String {
    sig_digits(x, SIG_DIGITS)
}

pub fn sig_digits(x: f64, digits: usize) -> String {
    if x.is_nan() {
        return "nan".into();
    }
    if x.is_infinite() {
        return if x > 0.0 { "inf".into() } else { "-inf".into() };
    }
    if x == 0.0 {
        return "0".into();
    }
    let digits = digits.max(1);
    let sci = format!("{:.*e}", digits - 1, x);
    let (mantissa, exp) = sci.split_once('e').expect("exponent present");
    let exp: i32 = exp.parse().expect("integer exponent");
    if (-5..digits as i32).contains(&exp) {
        let decimals = (digits as i32 - 1 - exp).max(0) as usize;
        trim_zeros(&format!("{x:.decimals$}"))
    } else {
        format!("{}e{exp}", trim_zeros(mantissa))
    }
}

fn trim_zeros(s: &str) -> String {
    if s.contains('.') {
        s.trim_end_matches('0').trim_end_matches('.').to_string()
    } else {
        s.to_string()
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn renders() {
        assert_eq!(sig(0.0), "0");
        assert_eq!(sig(-0.0), "0");
        assert_eq!(sig(1.0), "1");
        assert_eq!(sig(0.25), "0.25");
        assert_eq!(sig(-0.1875), "-0.1875");
        assert_eq!(sig(1.0 / 3.0), "0.333333333333");
        assert_eq!(sig(2.0 / 3.0), "0.666666666667");
        assert_eq!(sig(123456.789), "123456.789");
        assert_eq!(sig(1e-7), "1e-7");
        assert_eq!(sig(-2.5e-12), "-2.5e-12");
        assert_eq!(sig(1.5e13), "1.5e13");
        assert_eq!(sig(0.9999999999999), "1");
        assert_eq!(sig(f64::NAN), "nan");
    }
}
