//! Step-size-adaptive search heuristics for maximal feasible dual solutions
//! of weighted vertex cover on dynamically changing graphs.

pub mod dual;
pub mod graph;
pub mod heuristics;
pub mod numeric;
pub mod streams;
pub mod instances;
pub mod oracle;
pub mod harness;

#[cfg(doctest)]
mod book {
    #[doc = include_str!("../../../book/src/introduction.md")]
    mod introduction {}
    #[doc = include_str!("../../../book/src/numbers.md")]
    mod numbers {}
    #[doc = include_str!("../../../book/src/duals.md")]
    mod duals {}
    #[doc = include_str!("../../../book/src/heuristics.md")]
    mod heuristics {}
    #[doc = include_str!("../../../book/src/instances.md")]
    mod instances {}
    #[doc = include_str!("../../../book/src/harness.md")]
    mod harness {}
    #[doc = include_str!("../../../book/src/cli.md")]
    mod cli {}
}
