use thiserror::Error;

#[derive(Debug, Error, Clone, PartialEq)]
pub enum Error {
    #[error("n_points not a power of two (got {0}, need a power of two >= 8)")]
    NotPowerOfTwo(usize),
    #[error("box_length must be positive and finite (got {0})")]
    BadBoxLength(f64),
    #[error("non-finite value in {0}")]
    NonFinite(&'static str),
    #[error("multiplier is not Hermitian at xi = {xi}: m(-xi) != conj(m(xi))")]
    NonHermitian { xi: f64 },
    #[error("fields live on different grids")]
    GridMismatch,
    #[error("dyadic block index {j} out of range [-1, {j_max}]")]
    BlockOutOfRange { j: i32, j_max: i32 },
    #[error("invalid parameter: {0}")]
    InvalidParameter(String),
    #[error("grid cannot resolve packet {requested}; max admissible n_terms is {max_admissible}")]
    InsufficientResolution { requested: u32, max_admissible: i32 },
    #[error("zero-norm input: ratio undefined")]
    ZeroNorm,
    #[error("blowup: non-finite state after t = {last_good_time}")]
    Blowup { last_good_time: f64 },
    #[error("boundary contamination at t = {time}: tail grew to {tail:.3e}")]
    BoundaryContamination { time: f64, tail: f64 },
    #[error("shock proximity at t = {time}: max|u_x| grew by a factor {growth:.2}")]
    ShockProximity { time: f64, growth: f64 },
    #[error("empty trajectory")]
    EmptyTrajectory,
    #[error("config line {line}: {message}")]
    ConfigSyntax { line: usize, message: String },
    #[error("config: {0}")]
    ConfigRange(String),
    #[error("invariant violated: {0}")]
    Invariant(String),
    #[error("i/o: {0}")]
    Io(String),
}

impl From<std::io::Error> for Error {
    fn from(e: std::io::Error) -> Self {
        Error::Io(e.to_string())
    }
}

pub type Result<T> = std::result::Result<T, Error>;

impl Error {
    /// Process exit status for the command-line front end: 1 config,
    /// 2 numerical guard, 3 I/O, 4 invariant violation.
    pub fn exit_code(&self) -> i32 {
        match self {
            Error::Blowup { .. }
            | Error::BoundaryContamination { .. }
            | Error::ShockProximity { .. }
            | Error::NonFinite(_) => 2,
            Error::Io(_) => 3,
            Error::Invariant(_) => 4,
            _ => 1,
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn exit_codes() {
        assert_eq!(Error::ConfigRange("x".into()).exit_code(), 1);
        assert_eq!(
            Error::ConfigSyntax {
                line: 2,
                message: "x".into()
            }
            .exit_code(),
            1
        );
        assert_eq!(
            Error::Blowup {
                last_good_time: 0.0
            }
            .exit_code(),
            2
        );
        assert_eq!(Error::Io("x".into()).exit_code(), 3);
        assert_eq!(Error::Invariant("x".into()).exit_code(), 4);
        let io: Error = std::io::Error::new(std::io::ErrorKind::NotFound, "gone").into();
        assert_eq!(io.exit_code(), 3);
    }
}
