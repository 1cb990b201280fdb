//! Closed expression trees over the rationals with `{+,-,*,/,sqrt}`.
//!
//! The tabulated constants of the tiling constructions (generator entries,
//! critical radii, vertex coordinates) are nested radicals. Encoding them as
//! expression trees rather than decimal literals keeps them auditable and
//! lets tests re-evaluate at extended precision.

use std::fmt;
use std::ops::{Add, Div, Mul, Neg, Sub};
use std::rc::Rc;

/// Double-double value: `hi + lo` with `|lo| <= ulp(hi)/2`, giving roughly
/// 31 significant decimal digits.
#[derive(Debug, Clone, Copy)]
struct Dd {
    hi: f64,
    lo: f64,
}

impl Dd {
    fn from(x: f64) -> Self {
        Dd { hi: x, lo: 0.0 }
    }

    fn two_sum(a: f64, b: f64) -> Dd {
        let s = a + b;
        let bb = s - a;
        let err = (a - (s - bb)) + (b - bb);
        Dd { hi: s, lo: err }
    }

    fn two_prod(a: f64, b: f64) -> Dd {
        let p = a * b;
        let err = f64::mul_add(a, b, -p);
        Dd { hi: p, lo: err }
    }

    fn add(self, o: Dd) -> Dd {
        let s = Dd::two_sum(self.hi, o.hi);
        let lo = s.lo + self.lo + o.lo;
        let r = Dd::two_sum(s.hi, lo);
        Dd { hi: r.hi, lo: r.lo }
    }

    fn neg(self) -> Dd {
        Dd {
            hi: -self.hi,
            lo: -self.lo,
        }
    }

    fn mul(self, o: Dd) -> Dd {
        let p = Dd::two_prod(self.hi, o.hi);
        let lo = p.lo + self.hi * o.lo + self.lo * o.hi;
        let r = Dd::two_sum(p.hi, lo);
        Dd { hi: r.hi, lo: r.lo }
    }

    fn div(self, o: Dd) -> Dd {
        let q1 = self.hi / o.hi;
        let r = self.add(o.mul(Dd::from(q1)).neg());
        let q2 = r.hi / o.hi;
        let s = Dd::two_sum(q1, q2);
        Dd { hi: s.hi, lo: s.lo }
    }

    fn sqrt(self) -> Dd {
        if self.hi == 0.0 && self.lo == 0.0 {
            return Dd::from(0.0);
        }
        // one Newton step on the f64 seed doubles the precision
        let x = self.hi.sqrt();
        let x2 = Dd::two_prod(x, x);
        let diff = self.add(x2.neg());
        let corr = diff.hi / (2.0 * x);
        let s = Dd::two_sum(x, corr);
        Dd { hi: s.hi, lo: s.lo }
    }

    fn value(self) -> f64 {
        self.hi + self.lo
    }
}

#[derive(Debug)]
enum Node {
    Rat(i64, i64),
    Add(RadicalExpr, RadicalExpr),
    Sub(RadicalExpr, RadicalExpr),
    Mul(RadicalExpr, RadicalExpr),
    Div(RadicalExpr, RadicalExpr),
    Sqrt(RadicalExpr),
}

/// A closed expression over rationals with `{+,-,*,/,sqrt}`.
///
/// Evaluation is deterministic; [`RadicalExpr::value`] gives the `f64`
/// evaluation and [`RadicalExpr::value_dd`] the double-double re-evaluation
/// used by the precision-agreement invariant.
#[derive(Debug, Clone)]
pub struct RadicalExpr(Rc<Node>);

impl RadicalExpr {
    pub fn int(n: i64) -> Self {
        RadicalExpr(Rc::new(Node::Rat(n, 1)))
    }

    pub fn rat(num: i64, den: i64) -> Self {
        assert!(den != 0, "rational with zero denominator");
        RadicalExpr(Rc::new(Node::Rat(num, den)))
    }

    pub fn sqrt(self) -> Self {
        RadicalExpr(Rc::new(Node::Sqrt(self)))
    }

    /// `f64` evaluation of the tree.
    pub fn value(&self) -> f64 {
        match &*self.0 {
            Node::Rat(n, d) => *n as f64 / *d as f64,
            Node::Add(a, b) => a.value() + b.value(),
            Node::Sub(a, b) => a.value() - b.value(),
            Node::Mul(a, b) => a.value() * b.value(),
            Node::Div(a, b) => a.value() / b.value(),
            Node::Sqrt(a) => a.value().sqrt(),
        }
    }

    /// Double-double re-evaluation (roughly twice the significand width).
    pub fn value_dd(&self) -> f64 {
        self.eval_dd().value()
    }

    fn eval_dd(&self) -> Dd {
        match &*self.0 {
            Node::Rat(n, d) => Dd::from(*n as f64).div(Dd::from(*d as f64)),
            Node::Add(a, b) => a.eval_dd().add(b.eval_dd()),
            Node::Sub(a, b) => a.eval_dd().add(b.eval_dd().neg()),
            Node::Mul(a, b) => a.eval_dd().mul(b.eval_dd()),
            Node::Div(a, b) => a.eval_dd().div(b.eval_dd()),
            Node::Sqrt(a) => a.eval_dd().sqrt(),
        }
    }
}

impl fmt::Display for RadicalExpr {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match &*self.0 {
            Node::Rat(n, 1) => write!(f, "{n}"),
            Node::Rat(n, d) => write!(f, "{n}/{d}"),
            Node::Add(a, b) => write!(f, "({a} + {b})"),
            Node::Sub(a, b) => write!(f, "({a} - {b})"),
            Node::Mul(a, b) => write!(f, "({a} * {b})"),
            Node::Div(a, b) => write!(f, "({a} / {b})"),
            Node::Sqrt(a) => write!(f, "sqrt({a})"),
        }
    }
}

macro_rules! impl_bin {
    ($trait:ident, $method:ident, $node:ident) => {
        impl $trait for RadicalExpr {
            type Output = RadicalExpr;
            fn $method(self, rhs: RadicalExpr) -> RadicalExpr {
                RadicalExpr(Rc::new(Node::$node(self, rhs)))
            }
        }
        impl $trait<i64> for RadicalExpr {
            type Output = RadicalExpr;
            fn $method(self, rhs: i64) -> RadicalExpr {
                RadicalExpr(Rc::new(Node::$node(self, RadicalExpr::int(rhs))))
            }
        }
        impl $trait<RadicalExpr> for i64 {
            type Output = RadicalExpr;
            fn $method(self, rhs: RadicalExpr) -> RadicalExpr {
                RadicalExpr(Rc::new(Node::$node(RadicalExpr::int(self), rhs)))
            }
        }
    };
}

impl_bin!(Add, add, Add);
impl_bin!(Sub, sub, Sub);
impl_bin!(Mul, mul, Mul);
impl_bin!(Div, div, Div);

impl Neg for RadicalExpr {
    type Output = RadicalExpr;
    fn neg(self) -> RadicalExpr {
        RadicalExpr::int(0) - self
    }
}

/// `sqrt(2)` as an expression tree; the ubiquitous base radical of the
/// octagonal tiling constants.
pub(crate) fn r2() -> RadicalExpr {
    RadicalExpr::int(2).sqrt()
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn rational_arithmetic() {
        let x = RadicalExpr::rat(3, 4) - RadicalExpr::rat(1, 4);
        assert_eq!(x.value(), 0.5);
    }

    #[test]
    fn nested_radical_matches_f64() {
        // sqrt(2 + sqrt(2)) / 2 = cos(pi/8)
        let c = (2 + r2()).sqrt() / 2;
        assert!((c.value() - (std::f64::consts::PI / 8.0).cos()).abs() < 1e-15);
    }

    #[test]
    fn dd_reevaluation_agrees() {
        // deep nesting: the critical-radius style expression
        let e = (RadicalExpr::int(1598) + 1130 * r2()
            + (7 * (RadicalExpr::int(400559) + 283238 * r2())).sqrt())
        .sqrt();
        let f = e.value();
        let d = e.value_dd();
        assert!((f - d).abs() <= 4.0 * f64::EPSILON * f.abs());
    }

    #[test]
    fn degenerate_det_kappa_vanishes_at_p6() {
        // det kappa = 3/4 - mu^2 with mu = sqrt(3)/2
        let mu = RadicalExpr::int(3).sqrt() / 2;
        let det = RadicalExpr::rat(3, 4) - mu.clone() * mu;
        assert!(det.value().abs() < 1e-14);
        assert!(det.value_dd().abs() < 1e-28);
    }
}
