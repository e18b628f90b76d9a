pub mod metrics;
pub mod mistakes;
pub mod optimize;
pub mod sweep;
pub mod synth;
