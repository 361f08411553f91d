use thiserror::Error;

#[derive(Debug, Error)]
pub enum Error {
    #[error("degenerate segment: endpoints coincide within tolerance")]
    DegenerateSegment,
    #[error("barrier must contain at least one segment")]
    EmptyBarrier,
    #[error("polygon needs at least 3 non-collinear vertices")]
    DegeneratePolygon,
    #[error("polygon is not convex")]
    NotConvex,
    #[error("bodies overlap; meeting measure requires disjoint bodies")]
    BodiesOverlap,
    #[error("parameter out of range: {0}")]
    ParameterRange(String),
    #[error("barrier is not interior: {outside} of its length lies outside the square")]
    NotInterior { outside: f64 },
    #[error("advance-budget hypotheses violated: x1 = |X| - 0.45 must be positive, got {0}")]
    BudgetHypothesis(f64),
    #[error("linear program is infeasible (build bug: the interior LP is feasible by construction)")]
    Infeasible,
    #[error("linear program is unbounded (build bug: the objective is bounded below by 0)")]
    Unbounded,
    #[error("dual certificate rejected: {0}")]
    CertificateRejected(String),
    #[error("solver self-check failed: {0}")]
    SolverCheck(String),
}

pub type Result<T> = std::result::Result<T, Error>;
