pub mod certificate;
pub mod cover;
pub mod curves;
pub mod geometry;
pub mod rational;
pub mod reference;
pub mod slopes;
pub mod svg;
pub mod tangle;
