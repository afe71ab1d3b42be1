//! CM O_F-orders with nontrivial unit index: fields, class numbers, the
//! catalog and local embedding data.

pub mod catalog;
pub mod classgroup;
pub mod field;
pub mod table;

pub use catalog::{big_m, build_catalog, local_embedding_count, BCatalog, CMOrderRecord, CatalogOptions, Provenance};
pub use field::{CMField, CMKind, KElem, KPrime};
pub use table::CuratedTable;
