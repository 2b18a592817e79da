pub mod constraints;
pub mod correspond;
pub mod evolve;
pub mod gamma;
