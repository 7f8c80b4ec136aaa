//! Power maps of solvable groups of upper-triangular matrices over exact
//! fields: deciding which cosets of the unipotent part consist of k-th
//! powers, constructing roots, and checking everything against exhaustive
//! enumeration on finite instances.

pub mod abelian_quotient;
pub mod exactalg;
pub mod group_ctx;
pub mod oracle;
pub mod roots_core;

pub use abelian_quotient::{AbelianQuotient, RootSet};
pub use exactalg::{AlgebraError, Field, FieldScalar, IntMatrix, Matrix, Polynomial, Subspace};
pub use group_ctx::{CentralSeries, DiagClass, GroupError, GroupSpec, SeriesStrategy, TriangularGroup};
pub use oracle::{compare_all, enumerate_group, ComparisonReport, EnumeratedGroup, PowerImage};
pub use roots_core::{BStarResult, Certificate, Probe, RegularityReport, RootEngine, RootError};
