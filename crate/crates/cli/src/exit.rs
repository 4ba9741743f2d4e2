use expnet::Error;

pub const VERIFY_FAILED: u8 = 1;
pub const USAGE: u8 = 2;
pub const INSTANCE: u8 = 3;
pub const IO: u8 = 4;
pub const NUMERICAL: u8 = 5;

#[derive(Debug)]
pub struct Failure {
    pub code: u8,
    pub message: String,
}

pub fn code_for(e: &Error) -> u8 {
    match e {
        Error::InvalidParameter(_) => USAGE,
        Error::InstanceRejected { .. } | Error::MaxResample { .. } | Error::DegenerateBaseline => {
            INSTANCE
        }
        Error::Io(_) | Error::InvalidMatrix(_) | Error::Dimension { .. } => IO,
        Error::NearSingular { .. }
        | Error::Convergence { .. }
        | Error::Overflow { .. }
        | Error::SingularInput { .. }
        | Error::IllConditioned(_)
        | Error::ComplexInput { .. }
        | Error::ActivationSingular { .. }
        | Error::NonFinite(_) => NUMERICAL,
    }
}

impl From<Error> for Failure {
    fn from(e: Error) -> Self {
        Self {
            code: code_for(&e),
            message: e.to_string(),
        }
    }
}
