//! Builders for double complexes: indecomposable shapes and truncated CDGA models.

mod cdga;
mod shapes;

pub use cdga::{
    build_cdga, calabi_eckmann_spec, default_weight, example_calabi_eckmann, parse_expression, CdgaError, CdgaSpec,
    GeneratorSpec, Monomial, Polynomial, Truncation,
};
pub use shapes::{build_square, build_zigzag, Shape, ShapeError, ZigzagElement, ZigzagKind, ZigzagShape};
