//! Exact computer algebra for vertex Lie algebras, their enveloping vertex
//! algebras and Zhu algebras.

#![allow(clippy::result_large_err)]

pub mod symbolic;
pub mod report;
pub mod vlie;
pub mod catalog;
pub mod lexer;
pub mod modes;
pub mod envelope;
pub mod zhu;
pub mod cli;
