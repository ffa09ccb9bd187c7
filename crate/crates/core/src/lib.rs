pub mod gca;
pub mod weil;
pub mod simplicial;
pub mod folmodel;
pub mod gvnum;
pub mod config;
pub mod report;
pub mod suite;
