use thiserror::Error;

pub type Result<T> = std::result::Result<T, Error>;

#[derive(Debug, Error)]
pub enum Error {
    #[error("invalid knot parameters: {0}")]
    InvalidKnot(String),

    #[error("matrix is not unimodular: |det - 1| = {0:.3e}")]
    NotUnimodular(f64),

    #[error("matrix power routes disagree by {0:.3e}")]
    PowerMismatch(f64),

    #[error("matrix does not preserve the disk model (not in SU(1,1))")]
    NotDiskModel,

    #[error("translation estimate did not converge: |est_n - est_n/2| = {0:.3e}")]
    OracleDiverged(f64),

    #[error("iteration budget {0} is below the minimum of 100")]
    OracleBudget(usize),

    #[error("singular parameter: {0}")]
    SingularParameter(String),

    #[error("trace constraints violated: residual {0:.3e}")]
    ConstraintViolation(f64),

    #[error("trace {0} is outside the open interval (-2, 2)")]
    TraceOutOfRange(f64),

    #[error("group relation fails at this point: residual {0:.3e}")]
    RelationResidual(f64),

    #[error("peripheral images do not commute: residual {0:.3e}")]
    CommutatorResidual(f64),

    #[error("laurent division left a remainder")]
    InexactDivision,

    #[error("polynomial cannot be normalized to value 1 at x = 1 (got {0})")]
    BadNormalization(i64),

    #[error("no deformation direction stays on the disk-model side at theta = {0}")]
    NoDiskSide(f64),

    #[error("angle continuation ambiguous near parameter {0} (step floor reached)")]
    UnwrapAmbiguity(f64),

    #[error("parabolic limit bracket failed near parameter {0}")]
    EndpointBracket(f64),

    #[error("arc has {0} samples, need at least {1}")]
    TooFewSamples(usize, usize),

    #[error("consecutive samples share an x value; slope undefined")]
    DegenerateSlope,

    #[error("diagram has no parabolic endpoint on the x = 0 edge")]
    NoParabolicEndpoint,

    #[error("bad configuration: {0}")]
    BadConfig(String),

    #[error("stage {stage} failed")]
    Stage {
        stage: &'static str,
        #[source]
        source: Box<Error>,
    },

    #[error(transparent)]
    Io(#[from] std::io::Error),
}

impl Error {
    pub fn at_stage(self, stage: &'static str) -> Error {
        Error::Stage {
            stage,
            source: Box::new(self),
        }
    }

    /// True when the error comes from how the tool was invoked rather than
    /// from a numerical computation.
    pub fn is_usage(&self) -> bool {
        match self {
            Error::InvalidKnot(_) | Error::BadConfig(_) | Error::OracleBudget(_) => true,
            Error::Stage { source, .. } => source.is_usage(),
            _ => false,
        }
    }
}
