//! Terms, stacks and processes of the base machine.

mod parse;
mod stack;
mod term;

pub use parse::{parse_lambda, parse_term, ParseError};
pub use stack::{k_term, occurs_h, Process, Stack};
pub use term::{is_proof_like, numeral, print_term, successor, Instr, Term, DEFAULT_ORACLE};
