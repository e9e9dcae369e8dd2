//! Text rendering shared by reports and tables.

use classprob_core::rational::{self, Rational};

/// Six significant digits: fixed notation between 1e-4 and 1e6, scientific outside.
pub fn sig6(x: f64) -> String {
    if x == 0.0 {
        return "0".into();
    }
    if !x.is_finite() {
        return if x.is_nan() { "NaN".into() } else if x > 0.0 { "inf".into() } else { "-inf".into() };
    }
    let mag = x.abs();
    if (1e-4..1e6).contains(&mag) {
        let places = (5 - mag.log10().floor() as i32).max(0) as usize;
        format!("{x:.places$}")
    } else {
        format!("{x:.5e}")
    }
}

/// `"0.115741 (25/216)"`; integers render bare.
pub fn rational(r: &Rational) -> String {
    if r.is_integer() {
        return rational::to_fraction(r);
    }
    let approx = rational::to_f64(r).abs();
    let decimal = if (1e-4..1e6).contains(&approx) {
        let places = (5 - approx.log10().floor() as i32).max(0) as usize;
        rational::to_decimal(r, places)
    } else {
        sig6(rational::to_f64(r))
    };
    format!("{decimal} ({})", rational::to_fraction(r))
}

/// Joins rendered items; long lists keep their head and tail.
pub fn list<T>(items: &[T], one: impl Fn(&T) -> String) -> String {
    if items.len() <= 6 {
        return items.iter().map(&one).collect::<Vec<_>>().join(", ");
    }
    let head: Vec<String> = items[..3].iter().map(&one).collect();
    format!("{}, …, {} ({} values)", head.join(", "), one(&items[items.len() - 1]), items.len())
}

pub fn rationals(items: &[Rational]) -> String {
    list(items, rational)
}

pub fn reals(items: &[f64]) -> String {
    list(items, |x| sig6(*x))
}

#[cfg(test)]
mod tests {
    use super::*;
    use classprob_core::rational::{int, ratio};

    #[test]
    fn six_significant_digits() {
        assert_eq!(sig6(0.498650102), "0.498650");
        assert_eq!(sig6(13.2877123), "13.2877");
        assert_eq!(sig6(3.7267799), "3.72678");
        assert_eq!(sig6(123456.7), "123457");
        assert_eq!(sig6(2.5e-13), "2.50000e-13");
        assert_eq!(sig6(-0.25), "-0.250000");
        assert_eq!(sig6(0.0), "0");
    }

    #[test]
    fn fractions_alongside() {
        assert_eq!(rational(&ratio(25, 216)), "0.115741 (25/216)");
        assert_eq!(rational(&ratio(1, 2)), "0.500000 (1/2)");
        assert_eq!(rational(&int(27)), "27");
        assert_eq!(rational(&ratio(-8, 33)), "-0.242424 (-8/33)");
    }

    #[test]
    fn long_lists_are_elided() {
        let xs: Vec<f64> = (1..=10).map(f64::from).collect();
        assert_eq!(reals(&xs), "1.00000, 2.00000, 3.00000, …, 10.0000 (10 values)");
        assert_eq!(reals(&xs[..2]), "1.00000, 2.00000");
    }
}
