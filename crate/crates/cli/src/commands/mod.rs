pub mod action;
pub mod asymptotic;
pub mod simulate;
pub mod solve;
pub mod verify;
