use thiserror::Error;

use crate::ComplexPoint;

#[derive(Debug, Error, Clone, PartialEq)]
pub enum Error {
    /// A point fell outside the open domain an operation is defined on.
    #[error("{what}: point {re}{im:+}i outside {domain}")]
    Domain {
        what: &'static str,
        domain: &'static str,
        re: f64,
        im: f64,
    },
    #[error("invalid argument: {0}")]
    Argument(String),
    /// A map that should land in the unit disk did not.
    #[error("map escaped the unit disk at input {input_re}{input_im:+}i (|value| = {modulus})")]
    EscapedDisk {
        input_re: f64,
        input_im: f64,
        modulus: f64,
    },
    /// The two sides of a bracket came out in the wrong order.
    #[error("bracket inverted: lower {lower} > upper {upper}")]
    InvertedBracket { lower: f64, upper: f64 },
}

impl Error {
    pub(crate) fn domain(what: &'static str, domain: &'static str, z: ComplexPoint) -> Self {
        Error::Domain {
            what,
            domain,
            re: z.re,
            im: z.im,
        }
    }

    pub(crate) fn escaped(input: ComplexPoint, value: ComplexPoint) -> Self {
        Error::EscapedDisk {
            input_re: input.re,
            input_im: input.im,
            modulus: value.norm(),
        }
    }
}

pub type Result<T> = std::result::Result<T, Error>;
