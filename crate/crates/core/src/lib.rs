pub mod ed;
pub mod ensemble;
pub mod error;
pub mod hamiltonian;
pub mod linalg;
pub mod rbm;
pub mod scalar;
pub mod spin;
pub mod wavefunction;

pub use error::Error;
pub use scalar::Scalar;
pub use spin::SpinConfig;

pub type Real = f64;
pub type C64 = num_complex::Complex<f64>;
