pub mod case_study;
pub mod driver;
pub mod grammar;
pub mod lexicon;
pub mod random;
pub mod sets;
pub mod table;
