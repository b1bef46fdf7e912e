//! Uncertain points on the real line: pdfs, cdfs and interval probabilities.

use crate::error::{Error, Result};
use crate::scalar::Scalar;

pub type PointId = u64;

/// Default upper bound on the number of histogram pieces (including the two
/// infinite zero-density pieces).
pub const DEFAULT_MAX_PIECES: usize = 16;

/// Mass tolerance accepted at ingestion (widened to the scalar's precision
/// for `f32`).
pub const MASS_TOLERANCE: f64 = 1e-9;

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct UniformPdf<S> {
    pub lo: S,
    pub hi: S,
}

impl<S: Scalar> UniformPdf<S> {
    pub fn new(lo: S, hi: S) -> Result<Self> {
        if !lo.is_finite() || !hi.is_finite() {
            return Err(Error::EmptySupport(lo.as_f64(), hi.as_f64()));
        }
        if lo == hi {
            return Err(Error::PointMass);
        }
        if lo > hi {
            return Err(Error::EmptySupport(lo.as_f64(), hi.as_f64()));
        }
        Ok(Self { lo, hi })
    }

    pub fn width(&self) -> S {
        self.hi - self.lo
    }

    pub fn density(&self) -> S {
        S::one() / self.width()
    }
}

/// Step-function pdf. `breaks` are the finite piece boundaries
/// `x_1 < .. < x_{c-1}`; `densities[i]` is the density on
/// `[breaks[i], breaks[i + 1])`. The two outer pieces have density zero.
#[derive(Debug, Clone, PartialEq)]
pub struct HistogramPdf<S> {
    breaks: Vec<S>,
    densities: Vec<S>,
}

impl<S: Scalar> HistogramPdf<S> {
    pub fn new(breaks: Vec<S>, densities: Vec<S>) -> Result<Self> {
        Self::with_max_pieces(breaks, densities, DEFAULT_MAX_PIECES)
    }

    pub fn with_max_pieces(breaks: Vec<S>, densities: Vec<S>, max_pieces: usize) -> Result<Self> {
        let pieces = breaks.len() + 1;
        if pieces < 2 || pieces > max_pieces {
            return Err(Error::PieceCount(pieces, max_pieces));
        }
        if densities.len() + 1 != breaks.len() {
            return Err(Error::DensityCount);
        }
        if breaks.iter().any(|b| !b.is_finite()) || breaks.windows(2).any(|w| w[0] >= w[1]) {
            return Err(Error::NonAscendingBreaks);
        }
        if let Some(d) = densities
            .iter()
            .find(|d| !(d.is_finite() && **d >= S::zero()))
        {
            return Err(Error::InvalidDensity(d.as_f64()));
        }
        let mass: f64 = densities
            .iter()
            .zip(breaks.windows(2))
            .map(|(d, w)| d.as_f64() * (w[1].as_f64() - w[0].as_f64()))
            .sum();
        let tol = MASS_TOLERANCE.max(64.0 * S::epsilon().as_f64() * pieces as f64);
        if (mass - 1.0).abs() > tol {
            return Err(Error::MassNotOne(mass));
        }
        Ok(Self { breaks, densities })
    }

    pub fn breaks(&self) -> &[S] {
        &self.breaks
    }

    pub fn densities(&self) -> &[S] {
        &self.densities
    }

    /// Number of pieces `c`, counting both infinite pieces.
    pub fn piece_count(&self) -> usize {
        self.breaks.len() + 1
    }
}

impl<S: Scalar> From<UniformPdf<S>> for HistogramPdf<S> {
    fn from(u: UniformPdf<S>) -> Self {
        Self {
            breaks: vec![u.lo, u.hi],
            densities: vec![u.density()],
        }
    }
}

#[derive(Debug, Clone, PartialEq)]
pub enum Pdf<S> {
    Uniform(UniformPdf<S>),
    Histogram(HistogramPdf<S>),
}

impl<S: Scalar> Pdf<S> {
    pub fn is_uniform(&self) -> bool {
        matches!(self, Pdf::Uniform(_))
    }

    /// Density at `x`, with the same half-open convention as the cdf pieces.
    pub fn density_at(&self, x: S) -> S {
        match self {
            Pdf::Uniform(u) => {
                if x >= u.lo && x < u.hi {
                    u.density()
                } else {
                    S::zero()
                }
            }
            Pdf::Histogram(h) => {
                let k = h.breaks.partition_point(|b| *b <= x);
                if k == 0 || k == h.breaks.len() {
                    S::zero()
                } else {
                    h.densities[k - 1]
                }
            }
        }
    }
}

/// One linear piece `F(x) = slope * x + intercept` on `[lo, hi)`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct CdfPiece<S> {
    pub lo: S,
    pub hi: S,
    pub slope: S,
    pub intercept: S,
}

impl<S: Scalar> CdfPiece<S> {
    #[inline]
    pub fn eval(&self, x: S) -> S {
        self.slope * x + self.intercept
    }
}

/// Piecewise-linear cdf. Piece 0 is `(-inf, x_1)` at value 0 and the last
/// piece is `[x_{c-1}, +inf)` at value 1.
#[derive(Debug, Clone, PartialEq)]
pub struct Cdf<S> {
    breaks: Vec<S>,
    slopes: Vec<S>,
    intercepts: Vec<S>,
}

impl<S: Scalar> Cdf<S> {
    pub fn from_pdf(pdf: &Pdf<S>) -> Result<Self> {
        match pdf {
            Pdf::Uniform(u) => {
                let u = UniformPdf::new(u.lo, u.hi)?;
                let a = u.density();
                Ok(Self {
                    breaks: vec![u.lo, u.hi],
                    slopes: vec![S::zero(), a, S::zero()],
                    intercepts: vec![S::zero(), -(u.lo * a), S::one()],
                })
            }
            Pdf::Histogram(h) => {
                let h = HistogramPdf::with_max_pieces(
                    h.breaks.clone(),
                    h.densities.clone(),
                    usize::MAX,
                )?;
                let mut slopes = vec![S::zero()];
                let mut intercepts = vec![S::zero()];
                let mut mass = S::zero();
                for (d, w) in h.densities.iter().zip(h.breaks.windows(2)) {
                    slopes.push(*d);
                    intercepts.push(mass - *d * w[0]);
                    mass = mass + *d * (w[1] - w[0]);
                }
                slopes.push(S::zero());
                intercepts.push(S::one());
                Ok(Self {
                    breaks: h.breaks,
                    slopes,
                    intercepts,
                })
            }
        }
    }

    pub fn piece_count(&self) -> usize {
        self.slopes.len()
    }

    pub fn breaks(&self) -> &[S] {
        &self.breaks
    }

    pub fn piece(&self, i: usize) -> CdfPiece<S> {
        let lo = if i == 0 {
            S::neg_infinity()
        } else {
            self.breaks[i - 1]
        };
        let hi = if i == self.breaks.len() {
            S::infinity()
        } else {
            self.breaks[i]
        };
        CdfPiece {
            lo,
            hi,
            slope: self.slopes[i],
            intercept: self.intercepts[i],
        }
    }

    pub fn pieces(&self) -> impl Iterator<Item = CdfPiece<S>> + '_ {
        (0..self.piece_count()).map(move |i| self.piece(i))
    }

    /// Index of the piece whose half-open extent contains `x`.
    #[inline]
    pub fn piece_index(&self, x: S) -> usize {
        self.breaks.partition_point(|b| *b <= x)
    }

    #[inline]
    pub fn eval(&self, x: S) -> S {
        if x == S::neg_infinity() {
            return S::zero();
        }
        if x == S::infinity() {
            return S::one();
        }
        let i = self.piece_index(x);
        self.slopes[i] * x + self.intercepts[i]
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct UncertainPoint<S> {
    pub id: PointId,
    pdf: Pdf<S>,
    cdf: Cdf<S>,
}

impl<S: Scalar> UncertainPoint<S> {
    pub fn new(id: PointId, pdf: Pdf<S>) -> Result<Self> {
        let cdf = Cdf::from_pdf(&pdf)?;
        Ok(Self { id, pdf, cdf })
    }

    pub fn uniform(id: PointId, lo: S, hi: S) -> Result<Self> {
        Self::new(id, Pdf::Uniform(UniformPdf::new(lo, hi)?))
    }

    pub fn histogram(id: PointId, breaks: Vec<S>, densities: Vec<S>) -> Result<Self> {
        Self::new(id, Pdf::Histogram(HistogramPdf::new(breaks, densities)?))
    }

    pub fn pdf(&self) -> &Pdf<S> {
        &self.pdf
    }

    pub fn cdf(&self) -> &Cdf<S> {
        &self.cdf
    }

    pub fn as_uniform(&self) -> Option<&UniformPdf<S>> {
        match &self.pdf {
            Pdf::Uniform(u) => Some(u),
            Pdf::Histogram(_) => None,
        }
    }

    /// `Pr[p in I] = F(hi) - F(lo)`, clamped into `[0, 1]`.
    #[inline]
    pub fn probability(&self, interval: &QueryInterval<S>) -> S {
        interval_probability(self, interval)
    }

    /// The same value as a linear form over the two active pieces, used by the
    /// plane representation in the bounded histogram index.
    pub fn probability_from_pieces(
        lo_piece: &CdfPiece<S>,
        hi_piece: &CdfPiece<S>,
        lo: S,
        hi: S,
    ) -> S {
        clamp01(hi_piece.eval(hi) - lo_piece.eval(lo))
    }
}

#[inline]
pub(crate) fn clamp01<S: Scalar>(v: S) -> S {
    v.max(S::zero()).min(S::one())
}

pub fn cdf_from_pdf<S: Scalar>(pdf: &Pdf<S>) -> Result<Cdf<S>> {
    Cdf::from_pdf(pdf)
}

pub fn interval_probability<S: Scalar>(p: &UncertainPoint<S>, interval: &QueryInterval<S>) -> S {
    clamp01(p.cdf.eval(interval.hi) - p.cdf.eval(interval.lo))
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum IntervalKind {
    Bounded,
    /// `(-inf, hi]`
    LeftUnbounded,
    /// `[lo, +inf)`
    RightUnbounded,
    /// `(-inf, +inf)`
    Full,
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct QueryInterval<S> {
    pub lo: S,
    pub hi: S,
}

impl<S: Scalar> QueryInterval<S> {
    pub fn new(lo: S, hi: S) -> Result<Self> {
        if lo.is_nan() || hi.is_nan() || lo > hi || lo == S::infinity() || hi == S::neg_infinity() {
            return Err(Error::InvalidInterval(lo.as_f64(), hi.as_f64()));
        }
        Ok(Self { lo, hi })
    }

    pub fn kind(&self) -> IntervalKind {
        match (self.lo.is_finite(), self.hi.is_finite()) {
            (true, true) => IntervalKind::Bounded,
            (false, true) => IntervalKind::LeftUnbounded,
            (true, false) => IntervalKind::RightUnbounded,
            (false, false) => IntervalKind::Full,
        }
    }

    pub fn is_bounded(&self) -> bool {
        self.kind() == IntervalKind::Bounded
    }
}

/// Position of a uniform support relative to a bounded query interval.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum PointType {
    /// `x_l <= lo(p)`
    L,
    /// `x_r >= hi(p)` (and not L)
    R,
    /// `I` strictly inside `(lo(p), hi(p))`
    M,
}

pub fn classify<S: Scalar>(
    p: &UncertainPoint<S>,
    interval: &QueryInterval<S>,
) -> Result<PointType> {
    let u = p.as_uniform().ok_or(Error::NonUniformPoint(p.id))?;
    if !interval.is_bounded() {
        return Err(Error::UnboundedInterval);
    }
    Ok(if interval.lo <= u.lo {
        PointType::L
    } else if interval.hi >= u.hi {
        PointType::R
    } else {
        PointType::M
    })
}

/// Checks id uniqueness over a point collection.
pub fn check_unique_ids<S>(points: &[UncertainPoint<S>]) -> Result<()> {
    let mut ids: Vec<PointId> = points.iter().map(|p| p.id).collect();
    ids.sort_unstable();
    match ids.windows(2).find(|w| w[0] == w[1]) {
        Some(w) => Err(Error::DuplicateId(w[0])),
        None => Ok(()),
    }
}
