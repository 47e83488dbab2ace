//! File formats, subcommands, SVG rendering and brute-force oracles for the
//! `tropfan` command-line tool.

pub mod commands;
pub mod document;
pub mod gen;
pub mod oracle;
pub mod render;
