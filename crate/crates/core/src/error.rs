//! Error type shared by every module of the crate.

use thiserror::Error;

/// Everything that can go wrong while building, composing or evaluating
/// diagrams.
#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum Error {
    /// Sequential composition of morphisms whose boundaries differ.
    #[error("composition mismatch: codomain {cod} does not match domain {dom}")]
    CompositionMismatch { cod: String, dom: String },
    /// A functor or algebra has no image for a box or an object.
    #[error("missing mapping for {0}")]
    MissingMapping(String),
    /// Grafting arguments whose domains do not fit the codomain of the root.
    #[error("arity mismatch: expected {expected}, got {got}")]
    ArityMismatch { expected: String, got: String },
    /// A context-free grammar rule that is not in Chomsky normal form.
    #[error("rule is not in Chomsky normal form: {0}")]
    NotCnf(String),
    /// A tree or rule refers to a node that is not in the signature.
    #[error("unknown node: {0}")]
    UnknownNode(String),
    /// Malformed textual input, located by line and column (both 1-based).
    #[error("syntax error at line {line}, column {column}: {message}")]
    Syntax {
        line: usize,
        column: usize,
        message: String,
    },
    /// A premonoidal encoding whose layers do not scan.
    #[error("ill-typed diagram: {0}")]
    IllTyped(String),
    /// An offset below zero in serialized input.
    #[error("negative offset {0}")]
    NegativeOffset(i64),
    /// Two layers that cannot be exchanged because they share a wire.
    #[error("cannot interchange boxes {0} and {1}: they are connected")]
    InterchangerError(usize, usize),
    /// Currying or uncurrying more wires than a boundary carries.
    #[error("cannot bend {requested} wires of a boundary of length {available}")]
    TooManyWires { requested: usize, available: usize },
    /// A categorial rule instantiated with unsuitable types.
    #[error("bad rule types: {0}")]
    BadRuleTypes(String),
    /// The chosen semantic backend cannot interpret a structural box.
    #[error("backend does not support {0}")]
    BackendUnsupported(String),
    /// Cups or caps on types that are not adjoint to each other.
    #[error("adjoint mismatch: {left} and {right}")]
    AdjointMismatch { left: String, right: String },
    /// A dependency relation violating its well-formedness conditions.
    #[error("invalid dependency relation: {0}")]
    InvalidRelation(String),
    /// A dependency relation that uses a rule missing from the grammar.
    #[error("rule not in grammar: {0}")]
    RuleNotInGrammar(String),
    /// Ports of different types glued to one spider.
    #[error("type conflict on spider {spider}: {first} vs {second}")]
    TypeConflict {
        spider: usize,
        first: String,
        second: String,
    },
    /// A wires list whose length does not match the number of ports.
    #[error("expected {expected} wires, got {got}")]
    BadWireCount { expected: usize, got: usize },
    /// A port index that is out of range or otherwise unusable.
    #[error("bad port: {0}")]
    BadPort(String),
    /// Tensor shapes that do not fit together.
    #[error("shape mismatch: {0}")]
    ShapeMismatch(String),
    /// A tensor network requested from a diagram with open boundaries.
    #[error("diagram is not closed: {0}")]
    NotClosed(String),
    /// A contraction order that is not a permutation of the vertices.
    #[error("bad contraction order: {0}")]
    BadOrder(String),
    /// A function called with the wrong number of arguments.
    #[error("arity error: expected {expected} arguments, got {got}")]
    ArityError { expected: usize, got: usize },
    /// Uncurrying a function whose codomain is not an exponential type.
    #[error("codomain {0} is not a closed type")]
    NotClosedType(String),
    /// A value of the wrong kind reached a function.
    #[error("type error: {0}")]
    Value(String),
}

/// Crate-wide result alias.
pub type Result<T> = std::result::Result<T, Error>;

pub(crate) fn mismatch(cod: impl std::fmt::Display, dom: impl std::fmt::Display) -> Error {
    Error::CompositionMismatch {
        cod: cod.to_string(),
        dom: dom.to_string(),
    }
}
