pub mod cartan;
pub mod complexes;
pub mod finite_analog;
pub mod io;
pub mod morse_cpn;
pub mod novikov;
pub mod quantum;
