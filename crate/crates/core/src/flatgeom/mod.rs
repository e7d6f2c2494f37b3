//! Flatness of phase surfaces over frequency parallelograms.
//!
//! A set `S` is `(φ, δ)`-flat when the Taylor remainder
//! `|φ(u) − φ(v) − ∇φ(v)·(u − v)|` stays below `δ` for all `u, v ∈ S`.
//! This module evaluates that defect on parallelograms, measures how long a
//! flat parallelogram can be in a given direction, builds flat tilings and
//! counts the `ℝ × ℤ` measure of dilated flat sets.

mod flatness;
mod parallelogram;
mod surface;
mod tiling;

pub use flatness::{
    flatness_defect, hessian_data, is_flat, flat_parallelogram, max_flat_length, null_directions, AspectRule,
    HessianData,
};
pub use parallelogram::{dilate, lattice_measure, Parallelogram};
pub use surface::{Surface, Vec2};
pub use tiling::{tile_flat, Rect, Tile, Tiling, TilingOptions};
