pub mod exactla;
pub mod finspace;
pub mod ringspec;
pub mod strcat;
pub mod sheaf;
pub mod complex;
pub mod cohom;
pub mod hochschild;
pub mod ktheory;
pub mod io;
pub mod cli;
