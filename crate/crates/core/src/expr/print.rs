use alloc::string::String;
use alloc::vec::Vec;
use core::fmt::{self, Write};

use num_traits::{One, Signed};

use super::{Expr, Monomial, Trig};

fn frequency_arg(k: i64) -> String {
    match k {
        1 => String::from("w"),
        -1 => String::from("-w"),
        k => alloc::format!("{k}*w"),
    }
}

fn factors(m: &Monomial) -> Vec<String> {
    let mut out = Vec::new();
    for (name, p) in [("x", m.px), ("y", m.py), ("w", m.pw)] {
        match p {
            0 => {}
            1 => out.push(String::from(name)),
            p => out.push(alloc::format!("{name}^{p}")),
        }
    }
    if let Some((kind, f)) = m.trig {
        let name = match kind {
            Trig::Cos => "cos",
            Trig::Sin => "sin",
        };
        out.push(alloc::format!("{name}({})", frequency_arg(i64::from(f))));
    }
    if m.expk != 0 {
        out.push(alloc::format!("exp({})", frequency_arg(i64::from(m.expk))));
    }
    out
}

/// Sorted terms with explicit `p/q` coefficients, e.g.
/// `1/2 - 1/2*cos(2*w)`. The output parses back to the same expression.
impl fmt::Display for Expr {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.is_zero() {
            return f.write_str("0");
        }
        for (i, (m, c)) in self.terms().enumerate() {
            let negative = c.is_negative();
            match (i, negative) {
                (0, true) => f.write_char('-')?,
                (0, false) => {}
                (_, true) => f.write_str(" - ")?,
                (_, false) => f.write_str(" + ")?,
            }
            let abs = c.abs();
            let mut parts = factors(m);
            if parts.is_empty() || !abs.is_one() {
                parts.insert(0, alloc::format!("{abs}"));
            }
            f.write_str(&parts.join("*"))?;
        }
        Ok(())
    }
}

#[cfg(test)]
mod tests {
    use alloc::string::ToString;

    use super::*;
    use crate::expr::{parse, ratio};

    #[test]
    fn formats() {
        let s = Expr::sin(1);
        assert_eq!((&s * &s).to_string(), "1/2 - 1/2*cos(2*w)");
        assert_eq!(Expr::zero().to_string(), "0");
        assert_eq!((-Expr::cos(1)).to_string(), "-cos(w)");
        assert_eq!(Expr::cosh(1).to_string(), "1/2*exp(-w) + 1/2*exp(w)");
        assert_eq!(parse("w^2 + 3*x*y").unwrap().to_string(), "w^2 + 3*x*y");
        let e = (Expr::x() * Expr::w().pow(3) * Expr::exp(-2)).scale(&ratio(-7, 3));
        assert_eq!(e.to_string(), "-7/3*x*w^3*exp(-2*w)");
    }

    #[test]
    fn round_trips() {
        for text in [
            "1/2 - 1/2*cos(2*w)",
            "x*y*cos(2*w) - 3/4*w^5",
            "exp(w) + exp(-3*w)*sin(w)",
            "-cos(w)",
            "y - x - 1",
        ] {
            let e = parse(text).unwrap();
            assert_eq!(parse(&e.to_string()).unwrap(), e, "{text}");
        }
    }
}
