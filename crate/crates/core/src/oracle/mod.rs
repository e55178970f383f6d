//! Independent brute-force oracles: dense exact diagonalization of small
//! chains and momentum blocks, used to certify the closed-form solution.

pub mod block;
pub mod chain;
pub mod eig;
pub mod matrix;
