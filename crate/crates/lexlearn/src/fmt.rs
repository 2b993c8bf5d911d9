//! Deterministic float rendering for CSV output and the CLI.

/// Format with 17 significant digits, decimal notation for moderate
/// magnitudes and scientific notation otherwise, so values survive a
/// round trip through text unchanged.
pub fn g17(x: f64) -> String {
    if x == 0.0 {
        return "0".to_string();
    }
    if !x.is_finite() {
        return format!("{x}");
    }
    let sci = format!("{:.16e}", x);
    let exp: i32 = sci[sci.find('e').expect("scientific notation") + 1..]
        .parse()
        .expect("exponent parses");
    if (-4..17).contains(&exp) {
        let prec = (16 - exp).max(0) as usize;
        format!("{:.*}", prec, x)
    } else {
        sci
    }
}
