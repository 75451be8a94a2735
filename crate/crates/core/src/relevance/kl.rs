/// Elementwise relative-entropy term `x·ln(x/y) − x + y`, with the usual
/// limits: `y` when `x = 0`, and `+∞` when `x > 0` and `y = 0` or either
/// argument is out of domain.
pub fn kl_div(x: f64, y: f64) -> f64 {
    if x > 0.0 && y > 0.0 {
        x * (x / y).ln() - x + y
    } else if x == 0.0 && y >= 0.0 {
        y
    } else {
        f64::INFINITY
    }
}
