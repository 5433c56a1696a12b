//! Independent ground truth: Monte-Carlo tails, brute-force moments, numeric convolution.

pub mod convolution;
pub mod mc;
pub mod moments;
pub mod quadrature;

pub use convolution::{numeric_convolution, ConvolutionGrid, TailGrid};
pub use mc::{mc_tail, wilson_interval, McConfig, McReport, McRow, Sampler};
pub use moments::brute_moments;
