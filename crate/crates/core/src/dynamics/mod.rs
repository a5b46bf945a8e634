//! The Farey-triangle map, exact region algebra and index correlations.

pub mod constant;
pub mod corr;
pub mod geom;
pub mod montecarlo;
pub mod tmap;
pub mod visible;

pub use constant::{constant_a, constant_a_detailed, constant_a_star_sum, CPolicy, ConstantA};
pub use corr::{corr_sweep, empirical_corr, farey_length, CorrSample};
pub use geom::{cell_region, farey_triangle, star_region, AffineMap, ConvexPolygon, Rat, RationalPoint, Region};
pub use montecarlo::{constant_a_montecarlo, region_area_montecarlo, McEstimate};
pub use tmap::{digit, image_star, preimage_star, region_area, region_intersect, t_inv, t_map, CellMap, DEFAULT_KMAX};
pub use visible::{visible_count_check, VisibleCheck};
