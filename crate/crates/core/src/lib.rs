//! Quasi-hereditary and Koszul structure of finite-dimensional positively
//! graded quiver algebras over the rationals.
//!
//! The pipeline builds an algebra from a quiver with heights and relations,
//! computes its standard, costandard and tilting modules, and compares the
//! bigraded Ext-categories of standards and costandards as Koszul duals.

pub mod algebra;
pub mod category;
pub mod fixtures;
pub mod homological;
pub mod koszul;
pub mod linalg;
pub mod module;
pub mod par;
pub mod presentation;
pub mod projective;
pub mod qh;
pub mod report;
