pub mod coeffs;
pub mod compare;
pub mod simulate;
pub mod sweep;
pub mod tune;
