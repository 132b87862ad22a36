pub mod algebra;
pub mod criteria;
pub mod groebner;
pub mod parser;
pub mod pham;
pub mod theory;
pub mod cli;
