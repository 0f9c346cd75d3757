//! Third-order tensor completion under the t-product algebra.
//!
//! The crate is organised bottom-up:
//!
//! * [`tensor`] – dense real/complex third-order storage and observation masks.
//! * [`fourier`] – the mode-3 DFT that block-diagonalises the t-product.
//! * [`algebra`] – t-product, conjugate transpose, norms and masking.
//! * [`matrix`] – small dense complex matrices used on Fourier slices.
//! * [`factorization`] – Householder QR, CSVD-QR, t-QR and CTSVD-QR.
//! * [`completion`] – the TLNM-TQR ADMM completion solver.
//! * [`oracle`] – slow reference implementations used for verification.
//! * [`io`] and [`synth`] – file formats, images, masks and synthetic data.
//! * [`verify`] – the oracle cross-check suite exposed through the CLI.

pub mod algebra;
pub mod completion;
pub mod error;
pub mod factorization;
pub mod fourier;
pub mod io;
pub mod matrix;
pub mod oracle;
pub mod synth;
pub mod tensor;
pub mod verify;

pub use error::{Error, Result};
pub use num_complex::Complex64;
pub use tensor::{ComplexTensor3, ObservationMask, RealTensor3};
