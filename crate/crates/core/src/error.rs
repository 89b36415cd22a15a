use crate::id::LandmarkId;

/// Every failure a territory operation can report.
///
/// The variant name is part of the public contract: front ends print it
/// verbatim (see [`Error::name`]).
#[derive(Debug, Clone, PartialEq, Eq, thiserror::Error)]
pub enum Error {
    #[error("EmptyVertexLabel: vertex labels cannot be empty")]
    EmptyVertexLabel,
    #[error("InvalidTag: {0:?} does not start with '@'")]
    InvalidTag(String),
    #[error("PennedInTargetNotPen: pennedIn edge target {0} is not a pen")]
    PennedInTargetNotPen(LandmarkId),
    #[error("SelfEndpoint: edge {0} cannot be one of its own endpoints")]
    SelfEndpoint(LandmarkId),
    #[error("DepthCapExceeded: edge depth {depth} exceeds cap {cap}")]
    DepthCapExceeded { depth: usize, cap: usize },
    #[error("KindMismatch: {0}")]
    KindMismatch(String),
    #[error("MergeMismatch: {0} and {1} differ in label or type")]
    MergeMismatch(LandmarkId, LandmarkId),
    #[error("Malformed: {0}")]
    Malformed(String),
    #[error("UnknownType: {0:?}")]
    UnknownType(String),
    #[error("InvariantViolation: {0}")]
    InvariantViolation(String),
    #[error("DuplicateIdConflict: {0} already holds a different label or type")]
    DuplicateIdConflict(LandmarkId),
    #[error("SeqOutOfRange: {seq} (latest is {latest})")]
    SeqOutOfRange { seq: u64, latest: u64 },
    #[error("DigestMismatch: snapshot content does not match its digest")]
    DigestMismatch,
    #[error("NotFound: {0}")]
    NotFound(LandmarkId),
    #[error("AlreadyObsolete: {0}")]
    AlreadyObsolete(LandmarkId),
    #[error("TargetNotFound: {0}")]
    TargetNotFound(LandmarkId),
    #[error("PatternArityError: {0}")]
    PatternArityError(String),
    #[error("NotDistinct: {0}")]
    NotDistinct(LandmarkId),
    #[error("DuplicatePennedIn: {member} is already penned in {pen}")]
    DuplicatePennedIn { member: LandmarkId, pen: LandmarkId },
    #[error("ContractViolation: {0}")]
    ContractViolation(String),
    #[error("AnchorMissing: {0}")]
    AnchorMissing(LandmarkId),
    #[error("Expired: subscription ended at {0}")]
    Expired(u64),
    #[error("AlreadyPublic: {0}")]
    AlreadyPublic(LandmarkId),
    #[error("ImmutablePublicField: cannot {0} on a public contribution")]
    ImmutablePublicField(&'static str),
    #[error("Forbidden: {0}")]
    Forbidden(String),
    #[error("NotInExtent: {0} lies outside the topic extent")]
    NotInExtent(LandmarkId),
    #[error("MalformedQuery: {0}")]
    MalformedQuery(String),
    #[error("UnknownScenario: {0:?}")]
    UnknownScenario(String),
    #[error("AmbiguousId: prefix {0:?} matches several landmarks")]
    AmbiguousId(String),
    #[error("UnknownId: no landmark id starts with {0:?}")]
    UnknownId(String),
    #[error("Io: {0}")]
    Io(String),
}

impl Error {
    /// The bare variant name, e.g. `"PennedInTargetNotPen"`.
    pub fn name(&self) -> &'static str {
        match self {
            Error::EmptyVertexLabel => "EmptyVertexLabel",
            Error::InvalidTag(_) => "InvalidTag",
            Error::PennedInTargetNotPen(_) => "PennedInTargetNotPen",
            Error::SelfEndpoint(_) => "SelfEndpoint",
            Error::DepthCapExceeded { .. } => "DepthCapExceeded",
            Error::KindMismatch(_) => "KindMismatch",
            Error::MergeMismatch(..) => "MergeMismatch",
            Error::Malformed(_) => "Malformed",
            Error::UnknownType(_) => "UnknownType",
            Error::InvariantViolation(_) => "InvariantViolation",
            Error::DuplicateIdConflict(_) => "DuplicateIdConflict",
            Error::SeqOutOfRange { .. } => "SeqOutOfRange",
            Error::DigestMismatch => "DigestMismatch",
            Error::NotFound(_) => "NotFound",
            Error::AlreadyObsolete(_) => "AlreadyObsolete",
            Error::TargetNotFound(_) => "TargetNotFound",
            Error::PatternArityError(_) => "PatternArityError",
            Error::NotDistinct(_) => "NotDistinct",
            Error::DuplicatePennedIn { .. } => "DuplicatePennedIn",
            Error::ContractViolation(_) => "ContractViolation",
            Error::AnchorMissing(_) => "AnchorMissing",
            Error::Expired(_) => "Expired",
            Error::AlreadyPublic(_) => "AlreadyPublic",
            Error::ImmutablePublicField(_) => "ImmutablePublicField",
            Error::Forbidden(_) => "Forbidden",
            Error::NotInExtent(_) => "NotInExtent",
            Error::MalformedQuery(_) => "MalformedQuery",
            Error::UnknownScenario(_) => "UnknownScenario",
            Error::AmbiguousId(_) => "AmbiguousId",
            Error::UnknownId(_) => "UnknownId",
            Error::Io(_) => "Io",
        }
    }
}

impl From<std::io::Error> for Error {
    fn from(err: std::io::Error) -> Self {
        Error::Io(err.to_string())
    }
}

pub type Result<T, E = Error> = std::result::Result<T, E>;
