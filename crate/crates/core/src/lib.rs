pub mod algebra;
pub mod cli;
pub mod domains;
pub mod fluxes;
pub mod growth;
pub mod intertwine;
pub mod verify;
