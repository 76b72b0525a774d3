//! Truncated formal series.
//!
//! [`QExp`] is a Laurent series in `q^(1/D)` over any [`Ring`]. The ring
//! instances used here are exact rationals, complex doubles, [`YPoly`]
//! (half-integer Laurent polynomials in `y_j`) and `QExp` itself.
//! [`PowerSeries`] and [`MultiSeries`] carry the formal variables of
//! formal group laws and theta expansions.
//!
//! Every series records how far it is known. Arithmetic computes the
//! resulting truncation and never reports coefficients past it.

mod multi;
mod power;
mod qexp;
mod ring;
mod ypoly;

pub use multi::{BiSeries, MultiSeries};
pub use power::PowerSeries;
pub use qexp::{QExp, ToComplex};
pub use ring::{bernoulli_numbers, factorial, rat, rat_int, rat_to_f64, Rational, Ring};
pub use ypoly::{qexp_at_y_one, YPoly};

use thiserror::Error;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum QSeriesError {
    #[error("not invertible: {0}")]
    NotInvertible(String),
    #[error("operation on an exact non-polynomial result needs an explicit truncation order")]
    NeedsOrder,
    #[error("wrong constant term: expected {expected}")]
    ConstantTerm { expected: &'static str },
    #[error("inner series must vanish at the origin")]
    NonZeroAtOrigin,
    #[error("linear coefficient is not invertible")]
    NonInvertibleLinear,
}

/// Binary operation selector for [`arith`].
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum ArithOp {
    Add,
    Sub,
    Mul,
    Div,
}

/// `a op b` with truncation bookkeeping.
pub fn arith<R: Ring>(a: &QExp<R>, b: &QExp<R>, op: ArithOp) -> Result<QExp<R>, QSeriesError> {
    Ok(match op {
        ArithOp::Add => a.add(b),
        ArithOp::Sub => a.sub(b),
        ArithOp::Mul => a.mul(b),
        ArithOp::Div => a.div(b)?,
    })
}

/// `prod_{n=1}^{order-1} (1 - q^n)^power` truncated at `q^order`.
pub fn euler_product_power<R: Ring>(power: i64, order: i64) -> QExp<R> {
    let mut acc = QExp::<R>::one().truncate(order);
    for n in 1..order.max(1) {
        let mut f = vec![R::zero(); (n + 1) as usize];
        f[0] = R::one();
        f[n as usize] = R::one().neg();
        let factor = QExp::from_coeffs(f, order);
        let factor = if power < 0 { factor.inverse().expect("unit constant term") } else { factor };
        acc = acc.mul(&factor.pow(power.unsigned_abs() as u32));
    }
    acc
}
