//! Solvers and simulators for a continuous-time game of collective innovation.
//!
//! A group of `n` agents shares a stock `x` of a public good (a technology).
//! Each agent exerts hidden effort `a ∈ [0,1]`, producing randomly-sized
//! increments in the stock at Poisson rate `λa`, and earns the flow payoff
//! `b(x) − c(a, x)` discounted at rate one.
//!
//! The crate computes, on one-dimensional stock grids:
//!
//! * the social-welfare benchmark (`benchmark`),
//! * the unique strongly symmetric equilibrium when every increment is
//!   disclosed on arrival (`forced`),
//! * the equilibrium when producers may discard increments (`disposal`),
//! * a discrete-time approximation of the equilibrium when producers may
//!   conceal increments in a private stock (`concealment`),
//! * the effort-dependent-size variant (`endogenous`),
//!
//! and cross-validates every solution by closed forms and event-driven
//! Monte-Carlo simulation (`sim`).

pub mod benchmark;
pub mod concealment;
pub mod disposal;
pub mod endogenous;
mod error;
pub mod forced;
pub mod model;
pub mod numerics;
pub mod sim;
mod support;

pub use error::{Error, Result};
