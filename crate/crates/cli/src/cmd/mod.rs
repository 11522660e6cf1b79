pub mod braid;
pub mod check;
pub mod diff;
pub mod limits;
pub mod prove;
pub mod report;
