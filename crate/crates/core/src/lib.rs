pub mod biclique;
pub mod error;
pub mod gen;
pub mod hsearch_ds;
pub mod hungarian;
pub mod io;
pub mod match_ds;
pub mod matching;
pub mod model;
pub mod nearest;
pub mod oracle;
pub mod reduction;
pub mod scaling;
pub mod solve;
pub mod cli;
