pub use acfista_core;
