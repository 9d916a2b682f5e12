//! The graded algebra of diagram series: truncated degree-indexed families
//! of diagram sums with the disjoint-union product, exponential and
//! logarithm, the partition-indexed exponential, and the framing
//! correction driven by the anomaly constants.

use num_traits::{One, Zero};

use crate::diagram::BeadedDiagram;
use crate::error::Error;
use crate::laurent::{ContextHandle, DeltaContext};
use crate::normalform::{inclusion_i, DiagramSum};
use crate::rational::{q, Q};

/// A truncated element of the graded diagram algebra: one sum per degree
/// `0..=truncation`, all over one context.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct GradedSeries {
    truncation: usize,
    context: ContextHandle,
    components: Vec<DiagramSum>,
}

impl GradedSeries {
    pub fn zero(truncation: usize, context: ContextHandle) -> Self {
        GradedSeries {
            truncation,
            context: context.clone(),
            components: (0..=truncation)
                .map(|n| DiagramSum::zero(n, context.clone()))
                .collect(),
        }
    }

    /// The unit: 1 times the empty diagram in degree 0.
    pub fn one(truncation: usize, context: ContextHandle) -> Self {
        let mut s = Self::zero(truncation, context.clone());
        s.components[0]
            .insert(Q::one(), BeadedDiagram::empty(context))
            .expect("empty diagram inserts");
        s
    }

    pub fn from_components(
        truncation: usize,
        context: ContextHandle,
        components: Vec<DiagramSum>,
    ) -> Result<Self, Error> {
        if components.len() != truncation + 1 {
            return Err(Error::SeriesDomain(format!(
                "wanted {} components, got {}",
                truncation + 1,
                components.len()
            )));
        }
        for (n, c) in components.iter().enumerate() {
            if c.loop_degree() != n {
                return Err(Error::DegreeMismatch(n, c.loop_degree()));
            }
            if !(**c.context() == *context) {
                return Err(Error::ContextMismatch(
                    context.to_string(),
                    c.context().to_string(),
                ));
            }
        }
        Ok(GradedSeries {
            truncation,
            context,
            components,
        })
    }

    pub fn truncation(&self) -> usize {
        self.truncation
    }

    pub fn context(&self) -> &ContextHandle {
        &self.context
    }

    pub fn component(&self, n: usize) -> Option<&DiagramSum> {
        self.components.get(n)
    }

    pub fn components(&self) -> &[DiagramSum] {
        &self.components
    }

    pub fn set_component(&mut self, n: usize, sum: DiagramSum) -> Result<(), Error> {
        if n > self.truncation {
            return Err(Error::SeriesDomain(format!(
                "degree {n} beyond truncation {}",
                self.truncation
            )));
        }
        if sum.loop_degree() != n {
            return Err(Error::DegreeMismatch(n, sum.loop_degree()));
        }
        if !(**sum.context() == *self.context) {
            return Err(Error::ContextMismatch(
                self.context.to_string(),
                sum.context().to_string(),
            ));
        }
        self.components[n] = sum;
        Ok(())
    }

    /// The coefficient of the empty diagram in degree 0.
    pub fn scalar_part(&self) -> Q {
        self.components[0]
            .terms()
            .next()
            .map(|(_, _, c)| c.clone())
            .unwrap_or_else(Q::zero)
    }

    pub fn is_zero(&self) -> bool {
        self.components.iter().all(|c| c.is_zero())
    }

    fn check_compatible(&self, other: &GradedSeries) -> Result<(), Error> {
        if !(*self.context == *other.context) {
            return Err(Error::ContextMismatch(
                self.context.to_string(),
                other.context.to_string(),
            ));
        }
        Ok(())
    }

    pub fn add(&self, other: &GradedSeries) -> Result<GradedSeries, Error> {
        self.check_compatible(other)?;
        let trunc = self.truncation.min(other.truncation);
        let mut out = GradedSeries::zero(trunc, self.context.clone());
        for n in 0..=trunc {
            out.components[n] = self.components[n].add(&other.components[n])?;
        }
        Ok(out)
    }

    pub fn scale(&self, c: &Q) -> GradedSeries {
        let mut out = self.clone();
        for comp in out.components.iter_mut() {
            *comp = comp.scale(c);
        }
        out
    }

    pub fn neg(&self) -> GradedSeries {
        self.scale(&-Q::one())
    }

    /// Graded product: degree `n` collects all disjoint unions of a
    /// degree-`p` and a degree-`n-p` term; truncated at the smaller bound.
    pub fn product(&self, other: &GradedSeries) -> Result<GradedSeries, Error> {
        self.check_compatible(other)?;
        let trunc = self.truncation.min(other.truncation);
        let mut out = GradedSeries::zero(trunc, self.context.clone());
        for n in 0..=trunc {
            let mut acc = DiagramSum::zero(n, self.context.clone());
            for p in 0..=n {
                if p > self.truncation || n - p > other.truncation {
                    continue;
                }
                acc = acc.add(&self.components[p].disjoint_union(&other.components[n - p])?)?;
            }
            out.components[n] = acc;
        }
        Ok(out)
    }

    /// `sum_k z^k / k!`, truncated; requires a vanishing degree-0 part.
    pub fn exp(&self) -> Result<GradedSeries, Error> {
        if !self.components[0].is_zero() {
            return Err(Error::SeriesDomain(
                "exp wants a series with zero degree-0 part".into(),
            ));
        }
        let trunc = self.truncation;
        let mut acc = GradedSeries::one(trunc, self.context.clone());
        let mut term = GradedSeries::one(trunc, self.context.clone());
        for k in 1..=trunc {
            term = term.product(self)?.scale(&(Q::one() / Q::from_integer((k as i64).into())));
            acc = acc.add(&term)?;
        }
        Ok(acc)
    }

    /// `sum_k (-1)^{k+1} (Z-1)^k / k`, truncated; requires degree-0 part 1.
    pub fn log(&self) -> Result<GradedSeries, Error> {
        if !self.scalar_part().is_one() || self.components[0].num_terms() != 1 {
            return Err(Error::SeriesDomain(
                "log wants a series with degree-0 part equal to 1".into(),
            ));
        }
        let trunc = self.truncation;
        let mut w = self.clone();
        let one = GradedSeries::one(trunc, self.context.clone());
        w = w.add(&one.neg())?;
        let mut acc = GradedSeries::zero(trunc, self.context.clone());
        let mut wk = GradedSeries::one(trunc, self.context.clone());
        for k in 1..=trunc {
            wk = wk.product(&w)?;
            let coeff = q(if k % 2 == 1 { 1 } else { -1 }, k as i64);
            acc = acc.add(&wk.scale(&coeff))?;
        }
        Ok(acc)
    }
}

// ---------------------------------------------------------------------------
// Partition-indexed exponential.

/// Integer partitions of `n` as `((n_1, k_1), ..., (n_r, k_r))` with
/// `n_1 < n_2 < ... < n_r` and `sum k_j n_j = n`.
pub fn partitions(n: usize) -> Vec<Vec<(usize, usize)>> {
    fn rec(remaining: usize, min_part: usize, current: &mut Vec<(usize, usize)>, out: &mut Vec<Vec<(usize, usize)>>) {
        if remaining == 0 {
            out.push(current.clone());
            return;
        }
        for part in min_part..=remaining {
            for mult in 1..=(remaining / part) {
                current.push((part, mult));
                rec(remaining - part * mult, part + 1, current, out);
                current.pop();
            }
        }
    }
    let mut out = Vec::new();
    let mut current = Vec::new();
    rec(n, 1, &mut current, &mut out);
    out
}

/// `(3n)! / prod_j (k_j! (3 n_j)!^{k_j})`: the number of ways to split the
/// `3n` edge labels into unordered groups matching a partition.
pub fn partition_label_count(partition: &[(usize, usize)]) -> u128 {
    let n: usize = partition.iter().map(|&(p, k)| p * k).sum();
    let mut denom: u128 = 1;
    for &(p, k) in partition {
        denom *= fact(k);
        for _ in 0..k {
            denom *= fact(3 * p);
        }
    }
    fact(3 * n) / denom
}

fn fact(k: usize) -> u128 {
    (1..=k as u128).product::<u128>().max(1)
}

/// The exponential computed degree by degree over integer partitions:
/// degree `n` collects `prod_j z_{n_j}^{k_j} / prod_j k_j!` over all
/// partitions of `n`. An independent route that must agree with
/// [`GradedSeries::exp`].
pub fn exp_via_partitions(z: &GradedSeries) -> Result<GradedSeries, Error> {
    if !z.components()[0].is_zero() {
        return Err(Error::SeriesDomain(
            "exp wants a series with zero degree-0 part".into(),
        ));
    }
    let trunc = z.truncation();
    let ctx = z.context().clone();
    let mut out = GradedSeries::one(trunc, ctx.clone());
    for n in 1..=trunc {
        let mut acc = DiagramSum::zero(n, ctx.clone());
        for p in partitions(n) {
            // prod_j z_{n_j}^{k_j}, assembled by repeated disjoint union.
            let mut factor: Option<DiagramSum> = None;
            let mut denom = Q::one();
            for &(part, mult) in &p {
                for _ in 0..mult {
                    factor = Some(match factor {
                        Some(f) => f.disjoint_union(&z.components()[part])?,
                        None => z.components()[part].clone(),
                    });
                }
                denom *= Q::from_integer((fact(mult) as i64).into());
            }
            let factor = factor.expect("nonempty partition");
            acc = acc.add(&factor.scale(&(Q::one() / denom)))?;
        }
        out.set_component(n, acc)?;
    }
    Ok(out)
}

// ---------------------------------------------------------------------------
// Anomaly and framing correction.

/// The anomaly constants as a series over the trivial context: the
/// degree-1 part is `1/12` times the theta class, even parts vanish, and
/// odd parts of degree 3 and higher are external inputs that default to
/// zero with an explicit flag.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct AnomalySeries {
    series: GradedSeries,
    defaulted_odd: Vec<usize>,
}

impl AnomalySeries {
    /// The default anomaly up to `truncation`: degree 1 pinned, higher odd
    /// parts zero and flagged as unknown.
    pub fn default_up_to(truncation: usize) -> Self {
        let ctx = DeltaContext::trivial();
        let mut series = GradedSeries::zero(truncation, ctx.clone());
        if truncation >= 1 {
            let mut one_part = DiagramSum::zero(1, ctx.clone());
            one_part
                .insert(q(1, 12), BeadedDiagram::theta(ctx))
                .expect("theta inserts");
            series.set_component(1, one_part).expect("degree in range");
        }
        let defaulted_odd = (3..=truncation).filter(|k| k % 2 == 1).collect();
        AnomalySeries {
            series,
            defaulted_odd,
        }
    }

    /// Supplies an externally computed odd part of degree 3 or more.
    pub fn with_odd_part(mut self, degree: usize, sum: DiagramSum) -> Result<Self, Error> {
        if degree % 2 == 0 || degree < 3 {
            return Err(Error::SeriesDomain(
                "anomaly parts are odd, of degree 3 or more".into(),
            ));
        }
        self.series.set_component(degree, sum)?;
        self.defaulted_odd.retain(|&k| k != degree);
        Ok(self)
    }

    pub fn series(&self) -> &GradedSeries {
        &self.series
    }

    /// Degrees whose constants were defaulted to zero rather than supplied.
    pub fn defaulted_degrees(&self) -> &[usize] {
        &self.defaulted_odd
    }

    /// Structural invariants: even parts vanish, degree 1 is the pinned
    /// theta multiple.
    pub fn validate(&self) -> Result<(), Error> {
        for n in (0..=self.series.truncation()).step_by(2) {
            if !self.series.components()[n].is_zero() {
                return Err(Error::InternalCheck(format!(
                    "anomaly degree {n} must vanish"
                )));
            }
        }
        if self.series.truncation() >= 1 {
            let ctx = DeltaContext::trivial();
            let mut expected = DiagramSum::zero(1, ctx.clone());
            expected
                .insert(q(1, 12), BeadedDiagram::theta(ctx))
                .expect("theta inserts");
            if self.series.components()[1] != expected {
                return Err(Error::InternalCheck(
                    "anomaly degree 1 must be 1/12 of the theta class".into(),
                ));
            }
        }
        Ok(())
    }
}

/// Multiplies by `exp(-(p1/4) alpha)` viewed inside the series context:
/// the framing correction with an externally supplied Pontrjagin input.
pub fn framing_correct(
    series: &GradedSeries,
    p1: &Q,
    alpha: &AnomalySeries,
) -> Result<GradedSeries, Error> {
    alpha.validate()?;
    let factor = correction_factor(series.truncation(), series.context().clone(), p1, alpha)?;
    series.product(&factor)
}

/// `exp(-(p1/4) alpha)` in the given context and truncation.
pub fn correction_factor(
    truncation: usize,
    context: ContextHandle,
    p1: &Q,
    alpha: &AnomalySeries,
) -> Result<GradedSeries, Error> {
    let mut alpha_in_context = GradedSeries::zero(truncation, context.clone());
    for n in 0..=truncation.min(alpha.series.truncation()) {
        alpha_in_context.set_component(
            n,
            inclusion_i(&alpha.series.components()[n], context.clone())?,
        )?;
    }
    let scaled = alpha_in_context.scale(&(-p1.clone() / Q::from_integer(4.into())));
    scaled.exp()
}

/// Returns `log(Z)` after checking that every term of every component is
/// connected; a disconnected term signals a violated exponential and
/// connected-part correspondence.
pub fn connected_part_check(z: &GradedSeries) -> Result<GradedSeries, Error> {
    let log = z.log()?;
    for (n, comp) in log.components().iter().enumerate() {
        if !comp.all_connected() {
            return Err(Error::SeriesDomain(format!(
                "log has a disconnected term in degree {n}"
            )));
        }
    }
    Ok(log)
}
