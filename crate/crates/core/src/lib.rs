pub mod complexes;
pub mod exact;
pub mod f2linalg;
pub mod groups;
pub mod cohomology;
pub mod ggspaces;
pub mod coverings;
pub mod signflip;
pub mod boundcheck;
pub mod io;
pub mod cli;
