//! Command-line front end for `cgf-core`: argument parsing helpers, JSON
//! reports, raster classification of parameter slices, and SVG output.

pub mod args;
pub mod raster;
pub mod report;
pub mod svg;
