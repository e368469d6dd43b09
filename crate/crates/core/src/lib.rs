//! Compositional synthesis of distributed reactive systems with guarantee
//! certificates, via a bounded SAT encoding.
//!
//! The pipeline is: parse a conjunctive LTL specification ([`logic`]),
//! decompose it over an [`architecture`], translate each subspecification
//! into a universal co-Büchi automaton ([`automata`]), encode the bounded
//! synthesis problem ([`encoding`]), solve it ([`solving`]), and check the
//! decoded machines independently ([`verification`]). [`synthesis`] drives
//! the loop over size bounds.

use std::collections::BTreeSet;

pub mod architecture;
pub mod automata;
pub mod bench;
pub mod encoding;
pub mod logic;
pub mod machines;
pub mod solving;
pub mod specfile;
pub mod synthesis;
pub mod verification;

/// A valuation given by the set of variables that are true.
pub type Letter = BTreeSet<String>;

/// Builds a letter from variable names.
pub fn letter<I, S>(vars: I) -> Letter
where
    I: IntoIterator<Item = S>,
    S: Into<String>,
{
    vars.into_iter().map(Into::into).collect()
}
