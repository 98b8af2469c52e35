pub mod interval;
pub mod poly;
pub mod power;
pub mod rational;
pub mod real;
pub mod region;
