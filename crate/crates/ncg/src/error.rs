//! Error type shared by every module of the crate.

use std::fmt;

use crate::scalar::ExactScalar;

/// Everything that can go wrong in this crate severe enough to refuse an
/// operation. Each variant names the violated constraint so callers (and the
/// CLI) can report something actionable.
#[derive(Debug, Clone, PartialEq)]
pub enum Error {
    /// Game parameters out of range (`n = 0` or `alpha < 0`).
    InvalidGame(String),
    /// A strategy profile violated the schema: self-purchase, vertex id out
    /// of range, wrong number of purchase lists, or a repeated id inside one
    /// list.
    InvalidProfile(String),
    /// An exhaustive deviation scan was requested above the configured
    /// per-vertex limit (`2^(n-1)` candidate strategies).
    ExhaustiveLimitExceeded { n: usize, limit: usize },
    /// Exhaustive profile enumeration was requested above the configured
    /// limit (`3^C(n,2)` profiles).
    EnumerationLimitExceeded { n: usize, limit: usize },
    /// A layer partition was requested on a graph where some vertex is
    /// unreachable from the chosen root.
    Disconnected { root: usize },
    /// The lower-bound asymptote is only defined for integer `alpha >= 2`.
    AlphaNotIntegral { alpha: ExactScalar },
    /// The upper-bound formula divides by the fractional part of `alpha`,
    /// so integral `alpha` is rejected.
    AlphaIntegral { alpha: ExactScalar },
    /// A bound formula's precondition on `(alpha, n)` failed, e.g.
    /// `alpha <= 2` or `n <= alpha^3`.
    BoundPrecondition(String),
    /// The randomized restart strategy requires every vertex degree to
    /// exceed `sqrt(n ln n)`.
    DegreeTooSmall {
        vertex: usize,
        degree: usize,
        threshold: f64,
    },
    /// The randomized restart strategy gave up after the allowed number of
    /// trials; callers may retry with a larger budget.
    TrialsExhausted { trials: usize },
    /// A lemma audit with `require_nash` was asked to certify a profile
    /// that is not a weak Nash equilibrium.
    NotWeakNash { improving_vertex: usize },
    /// No equilibrium of the requested kind exists in the scanned space.
    NoEquilibrium,
    /// A clique-with-leaves spec was out of range (`k < 3` or `alpha < 2`).
    InvalidConstruction(String),
}

impl fmt::Display for Error {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Error::InvalidGame(msg) => write!(f, "invalid game parameters: {msg}"),
            Error::InvalidProfile(msg) => write!(f, "invalid strategy profile: {msg}"),
            Error::ExhaustiveLimitExceeded { n, limit } => write!(
                f,
                "exhaustive best-response scan refused: n = {n} exceeds the exhaustive limit {limit}"
            ),
            Error::EnumerationLimitExceeded { n, limit } => write!(
                f,
                "profile enumeration refused: n = {n} exceeds the enumeration limit {limit}"
            ),
            Error::Disconnected { root } => {
                write!(f, "graph is disconnected: some vertex is unreachable from root {root}")
            }
            Error::AlphaNotIntegral { alpha } => {
                write!(f, "alpha = {alpha} is not an integer >= 2; the lower-bound asymptote requires integral alpha")
            }
            Error::AlphaIntegral { alpha } => {
                write!(f, "alpha = {alpha} is integral; the upper-bound formula divides by its fractional part")
            }
            Error::BoundPrecondition(msg) => write!(f, "bound precondition violated: {msg}"),
            Error::DegreeTooSmall {
                vertex,
                degree,
                threshold,
            } => write!(
                f,
                "randomized restart precondition violated: vertex {vertex} has degree {degree} <= sqrt(n ln n) = {threshold:.4}"
            ),
            Error::TrialsExhausted { trials } => {
                write!(f, "randomized restart failed to reach eccentricity <= 2 within {trials} trials")
            }
            Error::NotWeakNash { improving_vertex } => write!(
                f,
                "audit requires a certified weak Nash equilibrium, but vertex {improving_vertex} has a strictly improving deviation"
            ),
            Error::NoEquilibrium => write!(f, "no equilibrium of the requested kind exists"),
            Error::InvalidConstruction(msg) => write!(f, "invalid construction: {msg}"),
        }
    }
}

impl std::error::Error for Error {}

/// Crate-wide result alias.
pub type Result<T> = std::result::Result<T, Error>;
