/// `x` rounded to 12 significant digits, printed in the shortest form that
/// reads back to the rounded value. `-0` prints as `0`.
pub fn sig12(x: f64) -> String {
    if x == 0.0 {
        return "0".to_string();
    }
    if !x.is_finite() {
        return x.to_string();
    }
    let rounded: f64 = format!("{x:.11e}").parse().expect("formatted float parses");
    rounded.to_string()
}
