//! Exact coefficient rings, matrices and normal forms.

pub mod domain;
pub mod linalg;
pub mod matrix;
pub mod ring_map;
pub mod snf;

pub use domain::{Domain, Scalar};
pub use linalg::{kernel_and_rank, left_kernel, rank, rref, solve_left, solve_left_many, solve_right, Echelon};
pub use matrix::Matrix;
pub use ring_map::RingMap;
pub use snf::{smith_normal_form, Smith};
