//! Deciding finiteness of the outer automorphism group of the fundamental
//! group of a finite graph of finite groups.

pub mod config;
pub mod decide;
pub mod decomp;
pub mod error;
pub mod fingrp;
pub mod fixtures;
pub mod format;
pub mod freeprod;
pub mod gog;
pub mod outkernels;
pub mod report;

pub use config::Limits;
pub use error::{Error, Result};
