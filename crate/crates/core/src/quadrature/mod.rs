pub mod contour;
pub mod rules;

pub use contour::{
    assemble, contribution_scale, truncation_length, type1, type2_laguerre, type2_legendre, type3,
    AssemblyOptions, ContourContribution, ContourType, Type2Rule,
};
pub use rules::{gauss_laguerre, gauss_legendre, QuadratureRule};
