pub mod basis;
pub mod error;
pub mod io;
pub mod limits;
pub mod matrix;
pub mod operator;
pub mod product;
pub mod spectral;
pub mod theorems;
