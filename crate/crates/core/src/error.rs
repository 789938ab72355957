use alloc::string::String;

pub type Result<T, E = Error> = core::result::Result<T, E>;

#[derive(Debug, Clone, PartialEq, Eq, thiserror::Error)]
pub enum Error {
    #[error("invalid rank {rank} for type {family}")]
    InvalidRank { family: char, rank: usize },
    #[error("unknown Cartan family `{0}`")]
    UnknownFamily(String),
    #[error("not a root of the root system")]
    NotARoot,
    #[error("label {label} out of range 0..={max}")]
    LabelOutOfRange { label: usize, max: usize },
    #[error("label {0} is not a special vertex label")]
    NotSpecial(usize),
    #[error("element has a translation outside the coroot lattice; use length_extended")]
    ExtendedElement,
    #[error("singular matrix")]
    SingularMatrix,
    #[error("invalid parameters: {0}")]
    InvalidParameters(String),
    #[error("ball would exceed the bound of {limit} chambers")]
    BallTooLarge { limit: usize },
    #[error("panel is not interior to the ball")]
    BoundaryPanel,
    #[error("support leaves the ball; a radius of at least {needed_radius} is required")]
    Margin { needed_radius: usize },
    #[error("flag level too low; level {needed_level} is required")]
    LevelTooLow { needed_level: u32 },
    #[error("internal consistency error: {0}")]
    Internal(String),
}
