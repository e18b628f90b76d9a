//! Canonical number formatting for every CSV the crate writes.

/// Significant digits kept when writing a value.
pub const SIGNIFICANT_DIGITS: usize = 9;

/// Positional decimal with [`SIGNIFICANT_DIGITS`] significant digits, never
/// in exponent notation. Small scores keep their resolution.
///
/// ```
/// use auclab_core::io::format_value;
/// assert_eq!(format_value(0.25), "0.250000000");
/// assert_eq!(format_value(0.000012345678912), "0.0000123456789");
/// assert_eq!(format_value(1.0), "1.00000000");
/// assert_eq!(format_value(-0.03), "-0.0300000000");
/// ```
pub fn format_value(x: f64) -> String {
    if !x.is_finite() {
        return x.to_string();
    }
    let sci = format!("{:.*e}", SIGNIFICANT_DIGITS - 1, x.abs());
    let (mantissa, exp) = sci.split_once('e').expect("exponent notation");
    let exp: i32 = exp.parse().expect("integer exponent");
    let digits: String = mantissa.chars().filter(|c| *c != '.').collect();
    let sign = if x.is_sign_negative() && digits.bytes().any(|b| b != b'0') {
        "-"
    } else {
        ""
    };
    let body = if exp < 0 {
        format!("0.{}{digits}", "0".repeat((-exp - 1) as usize))
    } else {
        let int_len = exp as usize + 1;
        if int_len >= digits.len() {
            format!("{digits}{}", "0".repeat(int_len - digits.len()))
        } else {
            format!("{}.{}", &digits[..int_len], &digits[int_len..])
        }
    };
    format!("{sign}{body}")
}
