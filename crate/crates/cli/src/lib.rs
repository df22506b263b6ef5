//! Text-format layer for the diptych command-line tool.

pub mod format;
