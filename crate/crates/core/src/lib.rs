pub mod algebra;
pub mod bounds;
pub mod check;
pub mod cli;
pub mod interp;
pub mod maxpoly;
pub mod rewrite;
pub mod search;
pub mod solver;
pub mod syntax;
