//! Perfect matching covers of cubic graphs as tetrahedral flows in PG(3,2),
//! transition relations of dipoles, and constructions of snarks that cannot
//! be covered by four perfect matchings.

pub mod error;
pub mod geometry;
pub mod multipole;

mod csp;
pub mod flows;
pub mod transitions;
pub mod families;

pub use error::{Error, Result};
pub use geometry::{Collineation, Line, Point4, Shape, Tetrahedron};
pub use multipole::{Graph, Multipole, Semiedge};
