use alloc::string::String;

pub type Result<T, E = Error> = core::result::Result<T, E>;

#[derive(Debug, Clone, PartialEq, thiserror::Error)]
pub enum Error {
    #[error("invalid parameter `{name}`: {reason}")]
    InvalidParameter { name: &'static str, reason: String },

    #[error("root of sin(mu) + 2 mu cos(mu) not found in ({lo}, {hi}) after {iterations} iterations")]
    RootNotConverged { lo: f64, hi: f64, iterations: usize },

    #[error("observation point coincides with the particle center")]
    ObservationAtCenter,

    #[error("quadrature stopped at estimated error {achieved:e}, requested {requested:e}")]
    QuadratureNotConverged { requested: f64, achieved: f64 },

    #[error("time series covers [{have_start}, {have_end}] but [{need_start}, {need_end}] is required")]
    CoverageGap {
        have_start: f64,
        have_end: f64,
        need_start: f64,
        need_end: f64,
    },

    #[error("window start {t_tilde} must exceed T_J + |x - z|/c0 = {bound}")]
    WindowTooEarly { t_tilde: f64, bound: f64 },

    #[error("background field does not vanish on the window (|V| = {value:e} at t = {t})")]
    FieldOnWindow { t: f64, value: f64 },

    #[error("change-of-basis matrix is numerically singular (cond = {cond:e}); look for repeated frequencies or change the truncation order")]
    SingularSystem { cond: f64 },

    #[error("mode index {n} is outside 1..={max}")]
    IndexOutOfRange { n: usize, max: usize },

    #[error("under-sampled signal: dt = {dt} but at most {max_dt} is needed")]
    UnderSampled { dt: f64, max_dt: f64 },

    #[error("grid mismatch: {0}")]
    GridMismatch(String),

    #[error("lattice {dims:?} is too small for the finite-difference stencils")]
    LatticeTooSmall { dims: [usize; 3] },
}

impl Error {
    pub(crate) fn invalid(name: &'static str, reason: impl Into<String>) -> Self {
        Error::InvalidParameter {
            name,
            reason: reason.into(),
        }
    }
}
