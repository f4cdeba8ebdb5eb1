//! Number formatting shared by every text artifact.

/// C-style `%.17g`: 17 significant digits, trailing zeros trimmed,
/// positional for exponents in `[-4, 17)`, scientific otherwise.
pub fn fmt_sig17(x: f64) -> String {
    if x == 0.0 {
        return if x.is_sign_negative() {
            "-0".into()
        } else {
            "0".into()
        };
    }
    if !x.is_finite() {
        return format!("{x}");
    }
    let sci = format!("{:.16e}", x);
    let (mantissa, exp) = sci.split_once('e').expect("scientific format");
    let exp: i32 = exp.parse().expect("exponent");
    let negative = mantissa.starts_with('-');
    let digits: String = mantissa.chars().filter(|c| c.is_ascii_digit()).collect();

    let mut out = String::new();
    if negative {
        out.push('-');
    }
    if (-4..17).contains(&exp) {
        if exp >= 0 {
            let split = (exp + 1) as usize;
            let (int_part, frac) = digits.split_at(split);
            out.push_str(int_part);
            let frac = frac.trim_end_matches('0');
            if !frac.is_empty() {
                out.push('.');
                out.push_str(frac);
            }
        } else {
            out.push_str("0.");
            for _ in 0..(-exp - 1) {
                out.push('0');
            }
            out.push_str(digits.trim_end_matches('0'));
        }
    } else {
        let (first, rest) = digits.split_at(1);
        out.push_str(first);
        let rest = rest.trim_end_matches('0');
        if !rest.is_empty() {
            out.push('.');
            out.push_str(rest);
        }
        out.push('e');
        out.push(if exp < 0 { '-' } else { '+' });
        out.push_str(&format!("{:02}", exp.abs()));
    }
    out
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn matches_printf_g17() {
        let cases = [
            (1.0, "1"),
            (0.5, "0.5"),
            (-0.30901699437494745, "-0.30901699437494745"),
            (0.1, "0.10000000000000001"),
            (123456.0, "123456"),
            (1e-5, "1.0000000000000001e-05"),
            (2.5e-4, "0.00025000000000000001"),
            (1e17, "1e+17"),
            (-2.0, "-2"),
            (0.0, "0"),
        ];
        for (x, want) in cases {
            assert_eq!(fmt_sig17(x), want, "{x:e}");
        }
    }

    #[test]
    fn round_trips_exactly() {
        for x in [
            std::f64::consts::PI,
            -1.0 / 3.0,
            6.02214076e23,
            1.602e-19,
            0.7,
        ] {
            assert_eq!(fmt_sig17(x).parse::<f64>().unwrap(), x);
        }
    }
}
