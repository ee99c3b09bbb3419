pub mod arith;
pub mod error;
pub mod laurent;
pub mod report;
pub mod vector;
pub mod voa;
pub mod zhu;
pub mod linalg;
pub mod vhat;
pub mod identities;
pub mod omega;
pub mod verma;
pub mod cli;
