//! Global spaces, exterior derivative matrices and verification of the complexes.

mod boundary;
mod decomp;
mod exactness;
mod formula;
mod operator;
mod space;
#[cfg(test)]
mod tests;

pub use boundary::{boundary_counts, removed_dofs_2d, restrict_homogeneous, BoundaryCounts, HomogeneousSpace};
pub use decomp::{
    interpolation_split_residual, rotated_hermite, space_equal, verify_decomposition_2d, verify_decomposition_3d,
    DecompositionReport, SpaceComparison, CONSTRAINT_TOL,
};
pub use exactness::{
    composition_residual, contractible_betti, hz_divergence, mixed_sequence, report_from_operators, row_operators,
    simplicial_betti, verify_discrete_sequence, verify_exactness, verify_exactness_with, ExactnessReport, FamilyRow,
    Slot, DD_TOL,
};
pub use formula::{dim_formula, dof_savings, per_t_closed_forms, Counts, DofSavings};
pub use operator::{assemble_d, broken_d, discrete_d, local_d, represent, OperatorMatrix, CONTAINMENT_TOL};
pub use space::{
    assemble_element, assemble_space, characterized_space, count_dofs, entity_global_id, family_conditions,
    local_positions, Condition, DiscreteSpace, DofKey, GlobalSpace,
};
