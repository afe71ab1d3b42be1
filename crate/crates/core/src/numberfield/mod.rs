pub mod elem;
pub mod field;
pub mod forms;
pub mod ideal;
pub mod local;
pub mod zeta;

pub use elem::FElem;
pub use field::{RealQuadraticField, Splitting};
pub use forms::{narrow_class_group, BinaryForm, FormClassGroup};
pub use ideal::{prime_ideals_above, PrimeIdeal, QuadIdeal};
pub use zeta::zeta_minus_one;
