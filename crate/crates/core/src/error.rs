use thiserror::Error;

use crate::expr::ExprError;

#[derive(Debug, Clone, PartialEq, Error)]
pub enum Error {
    #[error(transparent)]
    Expr(#[from] ExprError),

    #[error("invalid radius {0}: must be > 0")]
    InvalidRadius(f64),

    #[error("t = {t} lies outside the profile domain [{min}, {max}]")]
    OutsideDomain { t: f64, min: f64, max: f64 },

    #[error("degenerate metric at t = {t} (E = {e}, G = {g}, N = {n})")]
    DegenerateMetric { t: f64, e: f64, g: f64, n: f64 },

    #[error("state is not timelike (L = {0})")]
    NotTimelike(f64),

    #[error("slope undefined on a meridian (du = 0)")]
    MeridianUndefined,

    #[error("normal frame degenerate: {0} radicand is {1}")]
    FrameDegenerate(&'static str, f64),

    #[error("non-finite state at s = {0}")]
    NonFinite(f64),

    #[error("{0}")]
    Precondition(String),

    #[error("{0}")]
    Unsupported(String),
}

pub type Result<T, E = Error> = std::result::Result<T, E>;
