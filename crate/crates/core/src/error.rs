use thiserror::Error;

pub type Result<T, E = Error> = std::result::Result<T, E>;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum Error {
    #[error("parse error at byte {position}: {message}")]
    Parse { position: usize, message: String },

    /// An X-word that does not factor into blocks `x^(k-1) y` and `r`.
    #[error("`{word}` does not lie in the subalgebra generated by xi and z_k")]
    NotInH1 { word: String },

    #[error("word `{word}` contains xi and is not an index word")]
    NotAnIndexWord { word: String },

    #[error("index ({index}) is not admissible")]
    NotAdmissible { index: String },

    #[error("{map}: term `{term}` is outside the domain")]
    Domain { map: &'static str, term: String },

    #[error("element is not homogeneous of weight {expected}: found `{term}`")]
    NotHomogeneous { expected: usize, term: String },

    #[error("invalid parameter: {0}")]
    InvalidParameter(String),

    #[error("relation document: {0}")]
    Document(String),
}

impl Error {
    pub(crate) fn domain(map: &'static str, term: impl ToString) -> Self {
        Error::Domain {
            map,
            term: term.to_string(),
        }
    }
}
