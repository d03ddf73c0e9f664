//! Exact arithmetic in quadratic towers over ℚ.

mod expr;
mod interval;
mod tower;

use std::cmp::Ordering;

pub use expr::AlgExpr;
pub use interval::{approx_decimal, bounds};
pub use tower::{Rat, TowerElem};

#[derive(Debug, Clone, PartialEq, Eq, thiserror::Error)]
pub enum AlgebraError {
    #[error("syntax error at position {position}: {message}")]
    Syntax { position: usize, message: String },
    #[error("square root of a negative value")]
    NegativeSqrt,
    #[error("division by zero")]
    DivisionByZero,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Op {
    Add,
    Sub,
    Mul,
    Div,
}

/// Parses and evaluates a radical expression.
pub fn parse_value(text: &str) -> Result<TowerElem, AlgebraError> {
    AlgExpr::parse(text)?.eval()
}

pub fn arith(op: Op, x: &TowerElem, y: &TowerElem) -> Result<TowerElem, AlgebraError> {
    Ok(match op {
        Op::Add => x + y,
        Op::Sub => x - y,
        Op::Mul => x * y,
        Op::Div => x.checked_div(y)?,
    })
}

pub fn sqrt_adjoin(x: &TowerElem) -> Result<TowerElem, AlgebraError> {
    x.sqrt()
}

pub fn sign(x: &TowerElem) -> Ordering {
    x.sign()
}

pub fn cmp(x: &TowerElem, y: &TowerElem) -> Ordering {
    x.cmp(y)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn half_root_three() {
        let x = parse_value("sqrt(3)/2").unwrap();
        assert_eq!(&x * &x, TowerElem::from_ratio(3, 4));
        assert_eq!(x.to_string(), "1/2 * sqrt(3)");
    }

    #[test]
    fn chord_ratio_squares_to_rational() {
        let x = parse_value("5 * sqrt(3) / (2 * sqrt(7))").unwrap();
        assert_eq!(&x * &x, TowerElem::from_ratio(75, 28));
        assert_eq!(cmp(&(&x * &x), &TowerElem::from_ratio(1, 4)), Ordering::Greater);
    }

    #[test]
    fn operations_surface_errors() {
        let zero = TowerElem::zero();
        assert_eq!(arith(Op::Div, &TowerElem::one(), &zero).unwrap_err(), AlgebraError::DivisionByZero);
        assert_eq!(sqrt_adjoin(&TowerElem::from_int(-2)).unwrap_err(), AlgebraError::NegativeSqrt);
        assert_eq!(sign(&parse_value("sqrt(2) - 3/2").unwrap()), Ordering::Less);
    }
}
