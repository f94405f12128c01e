//! Subgroup lattices, quotients, isomorphisms and outer automorphisms of
//! small groups.

pub mod iso;
pub mod lattice;
pub mod out;
pub mod quotient;
pub mod table;

pub use iso::{find_isomorphism, GroupIso, PermIso, DEFAULT_ISO_LIMIT};
pub use lattice::{
    derived_subgroup, frattini, normal_subgroups, subgroup_lattice, SubgroupId, SubgroupLattice,
    DEFAULT_LATTICE_LIMIT,
};
pub use out::{out_group, OutGroup};
pub use quotient::QuotientGroup;
pub use table::GroupTable;
