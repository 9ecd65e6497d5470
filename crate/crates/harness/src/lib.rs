//! Scene files, random scene generation, batch experiments and SVG output
//! for the `cpolygon` command line tool.

pub mod experiment;
pub mod generate;
pub mod rng;
pub mod scene_io;
pub mod svg;
