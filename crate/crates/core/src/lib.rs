//! A classical-realizability machine.
//!
//! Terms over the instructions `B C I K W cc a p γ κ e χ χ′ 𝔠` run on a
//! push-and-grab stack machine with a three-way fork. On top of it sit an
//! abstraction eliminator for λ-terms, witness extraction by majority over
//! fork branches, and an extension whose processes carry forcing conditions.

pub mod compile;
pub mod extract;
pub mod forcing;
pub mod machine;
pub mod syntax;
