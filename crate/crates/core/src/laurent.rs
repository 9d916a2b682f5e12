//! Laurent polynomials in `t` with exact rational coefficients, the
//! normalized annihilator context, and beads of the form `P(t)/delta(t)`.

use std::collections::BTreeMap;
use std::fmt;
use std::sync::Arc;

use num_traits::{One, Signed, Zero};

use crate::error::Error;
use crate::rational::{format_q, parse_q, Q};

/// A Laurent polynomial `sum_k c_k t^k` with exact rational coefficients.
///
/// No zero coefficient is ever stored, so equality is structural.
#[derive(Clone, Debug, PartialEq, Eq, Default, Hash, PartialOrd, Ord)]
pub struct LaurentPoly {
    coeffs: BTreeMap<i64, Q>,
}

impl LaurentPoly {
    pub fn zero() -> Self {
        Self::default()
    }

    pub fn one() -> Self {
        Self::monomial(0, Q::one())
    }

    /// The monomial `c * t^k`; collapses to zero when `c = 0`.
    pub fn monomial(exp: i64, c: Q) -> Self {
        let mut coeffs = BTreeMap::new();
        if !c.is_zero() {
            coeffs.insert(exp, c);
        }
        Self { coeffs }
    }

    pub fn from_terms<I: IntoIterator<Item = (i64, Q)>>(terms: I) -> Self {
        let mut p = Self::zero();
        for (k, c) in terms {
            p.add_term(k, c);
        }
        p
    }

    fn add_term(&mut self, exp: i64, c: Q) {
        if c.is_zero() {
            return;
        }
        match self.coeffs.get_mut(&exp) {
            Some(existing) => {
                *existing += c;
                if existing.is_zero() {
                    self.coeffs.remove(&exp);
                }
            }
            None => {
                self.coeffs.insert(exp, c);
            }
        }
    }

    pub fn is_zero(&self) -> bool {
        self.coeffs.is_empty()
    }

    pub fn coeff(&self, exp: i64) -> Q {
        self.coeffs.get(&exp).cloned().unwrap_or_else(Q::zero)
    }

    /// Iterates over `(exponent, coefficient)` pairs in ascending exponent order.
    pub fn terms(&self) -> impl Iterator<Item = (i64, &Q)> {
        self.coeffs.iter().map(|(&k, c)| (k, c))
    }

    pub fn num_terms(&self) -> usize {
        self.coeffs.len()
    }

    /// `Some((k, c))` when the polynomial is the single term `c t^k`.
    pub fn as_monomial(&self) -> Option<(i64, Q)> {
        if self.coeffs.len() == 1 {
            let (&k, c) = self.coeffs.iter().next().unwrap();
            Some((k, c.clone()))
        } else {
            None
        }
    }

    pub fn min_exp(&self) -> Option<i64> {
        self.coeffs.keys().next().copied()
    }

    pub fn max_exp(&self) -> Option<i64> {
        self.coeffs.keys().next_back().copied()
    }

    pub fn add(&self, other: &Self) -> Self {
        let mut out = self.clone();
        for (k, c) in other.terms() {
            out.add_term(k, c.clone());
        }
        out
    }

    pub fn sub(&self, other: &Self) -> Self {
        let mut out = self.clone();
        for (k, c) in other.terms() {
            out.add_term(k, -c.clone());
        }
        out
    }

    pub fn neg(&self) -> Self {
        Self {
            coeffs: self.coeffs.iter().map(|(&k, c)| (k, -c.clone())).collect(),
        }
    }

    pub fn mul(&self, other: &Self) -> Self {
        let mut out = Self::zero();
        for (k1, c1) in self.terms() {
            for (k2, c2) in other.terms() {
                out.add_term(k1 + k2, c1.clone() * c2.clone());
            }
        }
        out
    }

    pub fn scale(&self, c: &Q) -> Self {
        if c.is_zero() {
            return Self::zero();
        }
        Self {
            coeffs: self
                .coeffs
                .iter()
                .map(|(&k, v)| (k, v.clone() * c.clone()))
                .collect(),
        }
    }

    /// Multiplies by `t^n`.
    pub fn shift(&self, n: i64) -> Self {
        Self {
            coeffs: self.coeffs.iter().map(|(&k, c)| (k + n, c.clone())).collect(),
        }
    }

    /// Substitutes `t -> t^{-1}`, negating every exponent. Involutive.
    pub fn conjugate(&self) -> Self {
        Self {
            coeffs: self.coeffs.iter().map(|(&k, c)| (-k, c.clone())).collect(),
        }
    }

    /// Evaluates at `t = 1`, which is the sum of the coefficients.
    pub fn eval_one(&self) -> Q {
        let mut s = Q::zero();
        for (_, c) in self.terms() {
            s += c.clone();
        }
        s
    }

    /// Formal derivative `d/dt`.
    pub fn derivative(&self) -> Self {
        Self::from_terms(
            self.coeffs
                .iter()
                .map(|(&k, c)| (k - 1, c.clone() * Q::from_integer(k.into()))),
        )
    }

    /// The pair `(t * p'(t), p(t))`, the unreduced logarithmic derivative
    /// numerator and denominator. The caller owns any gcd reduction.
    pub fn log_derivative(&self) -> Result<(Self, Self), Error> {
        if self.is_zero() {
            return Err(Error::ZeroPolynomial);
        }
        Ok((self.derivative().shift(1), self.clone()))
    }

    /// Exact division, `Some(q)` iff `self = q * d`.
    pub fn div_exact(&self, d: &Self) -> Option<Self> {
        if d.is_zero() {
            return None;
        }
        let mut rem = self.clone();
        let mut quot = Self::zero();
        let (dk, dc) = {
            let k = d.max_exp().unwrap();
            (k, d.coeff(k))
        };
        while !rem.is_zero() {
            let rk = rem.max_exp().unwrap();
            let rc = rem.coeff(rk);
            let qk = rk - dk;
            let qc = rc / dc.clone();
            let term = Self::monomial(qk, qc);
            rem = rem.sub(&term.mul(d));
            quot = quot.add(&term);
            // Guard against non-terminating division: the leading exponent
            // must strictly decrease.
            if let Some(nk) = rem.max_exp() {
                if nk >= rk {
                    return None;
                }
            }
            if quot.num_terms() > self.num_terms() + d.num_terms() + 64 {
                return None;
            }
        }
        if quot.mul(d) == *self {
            Some(quot)
        } else {
            None
        }
    }

    /// Parses the shared textual grammar, e.g. `t^-1 - 1 + t` or `3/2 t^2`.
    pub fn parse(input: &str) -> Result<Self, Error> {
        parse_laurent(input)
    }
}

impl fmt::Display for LaurentPoly {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.is_zero() {
            return write!(f, "0");
        }
        let mut first = true;
        for (k, c) in self.terms() {
            let mag = c.abs();
            let sign = c.is_negative();
            if first {
                if sign {
                    write!(f, "-")?;
                }
                first = false;
            } else if sign {
                write!(f, " - ")?;
            } else {
                write!(f, " + ")?;
            }
            let coeff_is_one = mag.is_one();
            match (k, coeff_is_one) {
                (0, _) => write!(f, "{}", format_q(&mag))?,
                (1, true) => write!(f, "t")?,
                (1, false) => write!(f, "{} t", format_q(&mag))?,
                (_, true) => write!(f, "t^{k}")?,
                (_, false) => write!(f, "{} t^{k}", format_q(&mag))?,
            }
        }
        Ok(())
    }
}

fn parse_laurent(input: &str) -> Result<LaurentPoly, Error> {
    let s: Vec<char> = input.chars().collect();
    let mut i = 0usize;
    let err = |msg: &str| Error::Validation(format!("invalid laurent `{}`: {}", input.trim(), msg));
    let mut out = LaurentPoly::zero();
    let skip_ws = |i: &mut usize| {
        while *i < s.len() && s[*i].is_whitespace() {
            *i += 1;
        }
    };
    skip_ws(&mut i);
    if i == s.len() {
        return Err(err("empty"));
    }
    let mut first = true;
    while i < s.len() {
        skip_ws(&mut i);
        if i == s.len() {
            break;
        }
        // Sign.
        let mut sign = 1i64;
        if s[i] == '+' || s[i] == '-' {
            if s[i] == '-' {
                sign = -1;
            }
            i += 1;
            skip_ws(&mut i);
        } else if !first {
            return Err(err("expected `+` or `-` between terms"));
        }
        first = false;
        // Coefficient.
        let start = i;
        while i < s.len() && (s[i].is_ascii_digit() || s[i] == '/') {
            i += 1;
        }
        let coeff_str: String = s[start..i].iter().collect();
        let mut coeff = if coeff_str.is_empty() {
            Q::one()
        } else {
            parse_q(&coeff_str)?
        };
        if sign < 0 {
            coeff = -coeff;
        }
        skip_ws(&mut i);
        // Optional `*`.
        if i < s.len() && s[i] == '*' {
            i += 1;
            skip_ws(&mut i);
        }
        // Optional monomial.
        let mut exp = 0i64;
        let mut has_t = false;
        if i < s.len() && s[i] == 't' {
            has_t = true;
            exp = 1;
            i += 1;
            if i < s.len() && s[i] == '^' {
                i += 1;
                skip_ws(&mut i);
                let estart = i;
                if i < s.len() && (s[i] == '-' || s[i] == '+') {
                    i += 1;
                }
                while i < s.len() && s[i].is_ascii_digit() {
                    i += 1;
                }
                let estr: String = s[estart..i].iter().collect();
                exp = estr
                    .parse()
                    .map_err(|_| err("bad exponent"))?;
            }
        }
        if coeff_str.is_empty() && !has_t {
            return Err(err("expected coefficient or monomial"));
        }
        out.add_term(exp, coeff);
        skip_ws(&mut i);
    }
    Ok(out)
}

/// The normalized annihilator polynomial `delta` together with its symmetry
/// shift `s`, the integer with `delta(t^{-1}) = t^{-s} delta(t)`.
///
/// Accepted contexts satisfy `delta(1) = 1` and `s` in `{0, 1}` exactly.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct DeltaContext {
    delta: LaurentPoly,
    symmetry_shift: i64,
}

/// Shared handle to a context; beads and sums over the same context must
/// hold equal handles (compared by value).
pub type ContextHandle = Arc<DeltaContext>;

impl DeltaContext {
    /// The trivial context `delta = 1`, shift 0.
    pub fn trivial() -> ContextHandle {
        Arc::new(DeltaContext {
            delta: LaurentPoly::one(),
            symmetry_shift: 0,
        })
    }

    /// Validates `p(1) = 1` and `p(t^{-1}) = t^{-s} p(t)` with `s` in {0, 1}.
    ///
    /// The rejection names the failed predicate.
    pub fn validate_alexander(p: &LaurentPoly) -> Result<ContextHandle, Error> {
        if p.is_zero() {
            return Err(Error::ZeroPolynomial);
        }
        let at_one = p.eval_one();
        if !at_one.is_one() {
            return Err(Error::NotOneAtOne {
                value: format_q(&at_one),
            });
        }
        // p(t^{-1}) = t^{-s} p(t) forces s = max_exp + min_exp.
        let s = p.max_exp().unwrap() + p.min_exp().unwrap();
        if p.conjugate().shift(s) != *p {
            return Err(Error::BadSymmetryShift {
                required: "none (no shift makes the conjugate match)".into(),
            });
        }
        if s != 0 && s != 1 {
            return Err(Error::BadSymmetryShift {
                required: s.to_string(),
            });
        }
        Ok(Arc::new(DeltaContext {
            delta: p.clone(),
            symmetry_shift: s,
        }))
    }

    pub fn delta(&self) -> &LaurentPoly {
        &self.delta
    }

    pub fn symmetry_shift(&self) -> i64 {
        self.symmetry_shift
    }

    pub fn is_trivial(&self) -> bool {
        self.delta == LaurentPoly::one()
    }
}

impl fmt::Display for DeltaContext {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}", self.delta)
    }
}

/// An element of `(1/delta) Q[t, t^{-1}]`, stored as a numerator over the
/// fixed denominator of its context. Equality is numerator equality.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Bead {
    numerator: LaurentPoly,
    context: ContextHandle,
}

impl Bead {
    pub fn new(numerator: LaurentPoly, context: ContextHandle) -> Self {
        Bead { numerator, context }
    }

    /// The bead representing the rational function 1, i.e. `delta/delta`.
    pub fn one(context: ContextHandle) -> Self {
        Bead {
            numerator: context.delta().clone(),
            context,
        }
    }

    /// The bead `t^k / delta`.
    pub fn basis_monomial(exp: i64, context: ContextHandle) -> Self {
        Bead {
            numerator: LaurentPoly::monomial(exp, Q::one()),
            context,
        }
    }

    pub fn zero(context: ContextHandle) -> Self {
        Bead {
            numerator: LaurentPoly::zero(),
            context,
        }
    }

    pub fn numerator(&self) -> &LaurentPoly {
        &self.numerator
    }

    pub fn context(&self) -> &ContextHandle {
        &self.context
    }

    pub fn is_zero(&self) -> bool {
        self.numerator.is_zero()
    }

    pub fn same_context(&self, other: &Bead) -> bool {
        Arc::ptr_eq(&self.context, &other.context) || *self.context == *other.context
    }

    fn check_context(&self, other: &Bead) -> Result<(), Error> {
        if self.same_context(other) {
            Ok(())
        } else {
            Err(Error::ContextMismatch(
                self.context.to_string(),
                other.context.to_string(),
            ))
        }
    }

    pub fn add(&self, other: &Bead) -> Result<Bead, Error> {
        self.check_context(other)?;
        Ok(Bead {
            numerator: self.numerator.add(&other.numerator),
            context: self.context.clone(),
        })
    }

    pub fn scale(&self, c: &Q) -> Bead {
        Bead {
            numerator: self.numerator.scale(c),
            context: self.context.clone(),
        }
    }

    /// Multiplies by the Laurent polynomial `p` (beads are a module over
    /// `Q[t, t^{-1}]`).
    pub fn mul_poly(&self, p: &LaurentPoly) -> Bead {
        Bead {
            numerator: self.numerator.mul(p),
            context: self.context.clone(),
        }
    }

    /// The bead `b(t^{-1})`: the numerator conjugates and picks up `t^s`
    /// from the context symmetry `1/delta(t^{-1}) = t^s / delta(t)`.
    pub fn conjugate(&self) -> Bead {
        Bead {
            numerator: self
                .numerator
                .conjugate()
                .shift(self.context.symmetry_shift()),
            context: self.context.clone(),
        }
    }

    /// Evaluates at `t = 1`; since `delta(1) = 1` this is `numerator(1)`.
    pub fn eval_one(&self) -> Q {
        self.numerator.eval_one()
    }

    /// `Some(p)` iff the bead is the genuine Laurent polynomial `p`, i.e.
    /// the numerator is divisible by delta.
    pub fn as_polynomial(&self) -> Option<LaurentPoly> {
        if self.context.is_trivial() {
            return Some(self.numerator.clone());
        }
        self.numerator.div_exact(self.context.delta())
    }
}

impl fmt::Display for Bead {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.context.is_trivial() {
            write!(f, "{}", self.numerator)
        } else {
            write!(f, "({}) / ({})", self.numerator, self.context.delta())
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::rational::{q, qi};

    fn lp(s: &str) -> LaurentPoly {
        LaurentPoly::parse(s).unwrap()
    }

    #[test]
    fn conjugate_examples() {
        assert_eq!(lp("t^2 + 3").conjugate(), lp("t^-2 + 3"));
        assert_eq!(lp("1").conjugate(), lp("1"));
        assert_eq!(lp("t - 1 + t^-1").conjugate(), lp("t - 1 + t^-1"));
    }

    #[test]
    fn conjugate_bead_examples() {
        // delta = 1: reduces to plain conjugation.
        let triv = DeltaContext::trivial();
        let b = Bead::new(lp("t"), triv.clone());
        assert_eq!(b.conjugate().numerator(), &lp("t^-1"));

        // Symmetric delta, constant numerator.
        let ctx = DeltaContext::validate_alexander(&lp("t - 1 + t^-1")).unwrap();
        let b = Bead::new(lp("1"), ctx);
        assert_eq!(b.conjugate().numerator(), &lp("1"));

        // s = 1 context: t^2/delta(t) at t^{-1} gives t^{-2} t^{1} / delta(t).
        let ctx = DeltaContext::validate_alexander(&lp("1/2 + 1/2 t")).unwrap();
        assert_eq!(ctx.symmetry_shift(), 1);
        let b = Bead::new(lp("t^2"), ctx.clone());
        assert_eq!(b.conjugate().numerator(), &lp("t^-1"));
        // Cross-multiplication check: t^{-2} delta(t) = t^{-1} delta(t^{-1}).
        let lhs = lp("t^-2").mul(ctx.delta());
        let rhs = lp("t^-1").mul(&ctx.delta().conjugate());
        assert_eq!(lhs, rhs);
    }

    #[test]
    fn validate_alexander_examples() {
        let ctx = DeltaContext::validate_alexander(&lp("t - 1 + t^-1")).unwrap();
        assert_eq!(ctx.symmetry_shift(), 0);

        match DeltaContext::validate_alexander(&lp("t + 1")) {
            Err(Error::NotOneAtOne { value }) => assert_eq!(value, "2"),
            other => panic!("expected rejection, got {other:?}"),
        }

        // t(1) = 1 but t(t^{-1}) = t^{-2} t requires shift 2.
        match DeltaContext::validate_alexander(&lp("t")) {
            Err(Error::BadSymmetryShift { required }) => assert_eq!(required, "2"),
            other => panic!("expected rejection, got {other:?}"),
        }
    }

    #[test]
    fn log_derivative_examples() {
        assert_eq!(
            lp("1").log_derivative().unwrap(),
            (LaurentPoly::zero(), lp("1"))
        );
        assert_eq!(lp("t").log_derivative().unwrap(), (lp("t"), lp("t")));
        assert_eq!(
            lp("t - 1 + t^-1").log_derivative().unwrap(),
            (lp("t - t^-1"), lp("t - 1 + t^-1"))
        );
        assert!(LaurentPoly::zero().log_derivative().is_err());
    }

    #[test]
    fn delta_symmetry_exact() {
        for d in ["1", "t - 1 + t^-1", "1/2 + 1/2 t", "2 - t - t^-1 + 1/2 t^2 + 1/2 t^-2"] {
            let p = lp(d);
            if let Ok(ctx) = DeltaContext::validate_alexander(&p) {
                let s = ctx.symmetry_shift();
                assert_eq!(ctx.delta().conjugate().shift(s), *ctx.delta());
            }
        }
    }

    #[test]
    fn display_roundtrip() {
        for s in ["t^-1 - 1 + t", "3", "-t^2", "1/2 t - 7", "t^3 + t^-3"] {
            let p = lp(s);
            assert_eq!(LaurentPoly::parse(&p.to_string()).unwrap(), p);
        }
    }

    #[test]
    fn mul_and_eval() {
        let a = lp("t + 1");
        let b = lp("t - 1");
        assert_eq!(a.mul(&b), lp("t^2 - 1"));
        assert_eq!(a.mul(&b).eval_one(), qi(0));
        assert_eq!(lp("1/2 t + 1/2").eval_one(), qi(1));
        assert_eq!(q(1, 2) + q(1, 2), qi(1));
    }

    #[test]
    fn div_exact_works() {
        let d = lp("t - 1 + t^-1");
        let p = lp("t^2 + 5").mul(&d);
        assert_eq!(p.div_exact(&d).unwrap(), lp("t^2 + 5"));
        assert!(lp("t").div_exact(&d).is_none());
    }
}
