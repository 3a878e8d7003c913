//! Curves on punctured surfaces in triangulation coordinates.

pub mod coords;
pub mod curves;
pub mod hexagon;
pub mod intersection;
pub mod lamination;
pub mod sample;
pub mod surface;
