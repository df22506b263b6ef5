//! Finite-instance engine for diptych structures on small categories:
//! certified (co)limit witnesses, square classification, groupoids with
//! their symmetric nerves, morphism taxonomy, and conjugation machinery.

pub mod catalog;
pub mod conjugation;
pub mod corpus;
pub mod sweep;
pub mod diptych;
pub mod fincat;
pub mod groupoid;
pub mod morphism;
pub mod report;
pub mod setcat;
