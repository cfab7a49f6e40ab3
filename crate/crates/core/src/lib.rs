//! A workbench for finite atom structures of cylindric-type algebras: graph
//! derived relation and polyadic atom structures, rainbow structures, basic
//! matrices, networks and the games played on them.

pub mod bao;
pub mod config;
pub mod graphs;
pub mod combinat;
pub mod monk;
pub mod qea;
pub mod rainbow;
pub mod games;
pub mod hyperbasis;
