//! Free-group words, the double-commutator and almost-law words, the
//! search for generic elements, and the discriminant decomposition.

mod almost_law;
mod disc;
mod search;
mod word;

pub use almost_law::{distance_to_identity, haar_orthogonal, measure_epsilon, AlmostLawReport};
pub use disc::{discriminant_decomposition, DiscriminantDecomposition, PairClass, PairEntry};
pub use search::{search_generic, SearchMode, SearchOptions, SearchResult, Witness};
pub use word::{almost_law_family, double_commutator_word, word_eval, Word};
