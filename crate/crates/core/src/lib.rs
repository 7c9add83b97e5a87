//! Combining grammatical error correction outputs by minimum Bayes' risk
//! decoding in edit space.
//!
//! Each system output is reduced to an [`EditSet`] against the shared
//! source. Candidates are scored by their mean [`rewards::reward`] against
//! the other systems' edit sets and the best one is kept; vote sets and a
//! greedy edit-insertion search widen the pool of candidates.
//!
//! ```
//! use edit_mbr::combine::{mbr_select};
//! use edit_mbr::edit::{extract_edits, Candidate, Sentence};
//! use edit_mbr::rewards::RewardConfig;
//!
//! let src = Sentence::tokenize("He go to school .");
//! let systems: Vec<Candidate> = ["He goes to school .", "He goes to the school .", "He go to school ."]
//!     .iter()
//!     .enumerate()
//!     .map(|(i, h)| Candidate::new(format!("sys{i}"), extract_edits(&src, &Sentence::tokenize(h))).unwrap())
//!     .collect();
//! let result = mbr_select(&systems, &systems, &RewardConfig::default()).unwrap();
//! assert_eq!(result.chosen.label(), "sys0");
//! ```

pub mod cli;
pub mod combine;
pub mod corpus;
pub mod edit;
mod error;
pub mod m2;
pub mod rewards;
pub mod score;

pub use edit::{Candidate, Edit, EditSet, Sentence};
pub use error::{Error, Result};
