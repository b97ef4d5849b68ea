use std::path::PathBuf;

pub type Result<T, E = Error> = std::result::Result<T, E>;

#[derive(Debug, thiserror::Error)]
pub enum Error {
    #[error("invalid input: {0}")]
    InvalidInput(String),

    #[error("could not place {requested} areas within {attempts} attempts")]
    PlacementFailed { attempts: usize, requested: usize },

    #[error("area {area_id} has no base stations to serve an event")]
    NoStations { area_id: u32 },

    #[error("traffic profile has no records for hour(s) {0:?}")]
    MissingHours(Vec<u32>),

    #[error("traffic profile is all zero and cannot be scaled")]
    ZeroProfile,

    #[error("event log is empty after clean-up")]
    EmptyEventLog,

    #[error("{path}: line {line}: {message}")]
    Schema {
        path: String,
        line: u64,
        message: String,
    },

    #[error("config: {0}")]
    Config(String),

    #[error("config: missing key `{0}`")]
    MissingKey(String),

    #[error("year {year}, day {day}: {source}")]
    Day {
        year: u32,
        day: u32,
        #[source]
        source: Box<Error>,
    },

    #[error("missing artifact {}", .0.display())]
    MissingArtifact(PathBuf),

    #[error("digest mismatch for {path}: manifest {expected}, found {found}")]
    DigestMismatch {
        path: String,
        expected: String,
        found: String,
    },

    #[error("{}: {source}", path.display())]
    Io {
        path: PathBuf,
        #[source]
        source: std::io::Error,
    },

    #[error(transparent)]
    Csv(#[from] csv::Error),
}

impl Error {
    pub(crate) fn io(path: impl Into<PathBuf>, source: std::io::Error) -> Self {
        Error::Io {
            path: path.into(),
            source,
        }
    }

    /// Coarse category used for process exit codes.
    pub fn exit_code(&self) -> u8 {
        match self {
            Error::Config(_) | Error::MissingKey(_) => 2,
            Error::Schema { .. }
            | Error::Csv(_)
            | Error::MissingHours(_)
            | Error::ZeroProfile
            | Error::EmptyEventLog
            | Error::InvalidInput(_) => 3,
            Error::PlacementFailed { .. } | Error::NoStations { .. } | Error::Day { .. } => 4,
            Error::MissingArtifact(_) | Error::DigestMismatch { .. } => 5,
            Error::Io { .. } => 6,
        }
    }
}
