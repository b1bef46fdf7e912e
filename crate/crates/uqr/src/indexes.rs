//! Index selection: which of the four indexes answers a query.

use std::cell::OnceCell;
use std::fmt;

use clap::ValueEnum;
use uqr_core::{
    Engine, Error, HistogramBoundedIndex64, HistogramUnboundedIndex64, IntervalKind, RangeIndex,
    UncertainPoint64, UniformBoundedIndex64, UniformUnboundedIndex64,
};

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum IndexChoice {
    /// Pick by pdf kind and interval shape.
    Auto,
    /// Uniform pdfs, one infinite side.
    Uu,
    /// Uniform pdfs, bounded intervals.
    Ub,
    /// Histogram pdfs, one infinite side.
    Hu,
    /// Histogram pdfs, bounded intervals.
    Hb,
}

impl IndexChoice {
    pub const CONCRETE: [IndexChoice; 4] = [Self::Uu, Self::Ub, Self::Hu, Self::Hb];
}

impl fmt::Display for IndexChoice {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.to_possible_value().unwrap().get_name())
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum EngineChoice {
    /// The select engine.
    Auto,
    Heap,
    Select,
    Block,
}

impl EngineChoice {
    pub fn engine(self) -> Engine {
        match self {
            Self::Heap => Engine::Heap,
            Self::Block => Engine::Block,
            Self::Auto | Self::Select => Engine::Select,
        }
    }
}

/// Why an index cannot serve a query.
#[derive(Debug, Clone, PartialEq)]
pub enum Unavailable {
    /// The index needs uniform pdfs (or another build precondition failed).
    Build(IndexChoice, Error),
    /// The index does not answer this interval shape.
    Shape(IndexChoice, IntervalKind),
}

impl fmt::Display for Unavailable {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Self::Build(i, e) => write!(f, "index {i} cannot be built: {e}"),
            Self::Shape(i, k) => write!(f, "index {i} does not answer {k:?} intervals"),
        }
    }
}

/// The point set with each index built on first use.
pub struct Indexes {
    points: Vec<UncertainPoint64>,
    uniform: bool,
    uu: OnceCell<Result<UniformUnboundedIndex64, Error>>,
    ub: OnceCell<Result<UniformBoundedIndex64, Error>>,
    hu: OnceCell<Result<HistogramUnboundedIndex64, Error>>,
    hb: OnceCell<Result<HistogramBoundedIndex64, Error>>,
}

fn view<I: RangeIndex<f64>>(
    choice: IndexChoice,
    built: &Result<I, Error>,
) -> Result<&dyn RangeIndex<f64>, Unavailable> {
    match built {
        Ok(i) => Ok(i),
        Err(e) => Err(Unavailable::Build(choice, e.clone())),
    }
}

impl Indexes {
    pub fn new(points: Vec<UncertainPoint64>) -> Self {
        let uniform = points.iter().all(|p| p.pdf().is_uniform());
        Self {
            points,
            uniform,
            uu: OnceCell::new(),
            ub: OnceCell::new(),
            hu: OnceCell::new(),
            hb: OnceCell::new(),
        }
    }

    pub fn points(&self) -> &[UncertainPoint64] {
        &self.points
    }

    pub fn all_uniform(&self) -> bool {
        self.uniform
    }

    /// The concrete index `auto` stands for.
    pub fn resolve(&self, choice: IndexChoice, kind: IntervalKind) -> IndexChoice {
        match (choice, self.uniform, kind == IntervalKind::Bounded) {
            (IndexChoice::Auto, true, true) => IndexChoice::Ub,
            (IndexChoice::Auto, true, false) => IndexChoice::Uu,
            (IndexChoice::Auto, false, true) => IndexChoice::Hb,
            (IndexChoice::Auto, false, false) => IndexChoice::Hu,
            (c, ..) => c,
        }
    }

    /// Builds (once) and returns a concrete index.
    pub fn get(&self, choice: IndexChoice) -> Result<&dyn RangeIndex<f64>, Unavailable> {
        let pts = || self.points.clone();
        match choice {
            IndexChoice::Uu => view(
                choice,
                self.uu
                    .get_or_init(|| UniformUnboundedIndex64::build(pts())),
            ),
            IndexChoice::Ub => view(
                choice,
                self.ub.get_or_init(|| UniformBoundedIndex64::build(pts())),
            ),
            IndexChoice::Hu => view(
                choice,
                self.hu
                    .get_or_init(|| HistogramUnboundedIndex64::build(pts())),
            ),
            IndexChoice::Hb => view(
                choice,
                self.hb
                    .get_or_init(|| HistogramBoundedIndex64::build(pts())),
            ),
            IndexChoice::Auto => unreachable!("resolve auto first"),
        }
    }

    /// The index answering a query of this shape under `choice`.
    pub fn for_query(
        &self,
        choice: IndexChoice,
        kind: IntervalKind,
    ) -> Result<(IndexChoice, &dyn RangeIndex<f64>), Unavailable> {
        let concrete = self.resolve(choice, kind);
        let index = self.get(concrete)?;
        if !index.supports(kind) {
            return Err(Unavailable::Shape(concrete, kind));
        }
        Ok((concrete, index))
    }
}
