//! SIREN coordinate networks, input embeddings, hard boundary-condition
//! transforms and checkpoint files.

mod bundle;
mod checkpoint;
mod constraints;
mod embedding;
mod siren;

pub use bundle::{check_combination, embedding_for, BundleLeaves, FieldBundle, FieldValues};
pub use checkpoint::{
    bundle_from_archive, bundle_to_archive, load_bundle, net_from_array, net_to_array, save_bundle, Archive,
    ArchiveArray,
};
pub use constraints::{apply_transform, FieldRole, TransformParams};
pub use embedding::InputEmbedding;
pub use siren::{init_bound, siren_init, ParamSet, SirenNet};
