//! Worked examples: the ν-family on `S³`, Gibbons–Hawking triples and the
//! Monge–Ampère / Helmholtz correspondence behind homogeneous potentials.

pub mod gh;
pub mod legendre;
pub mod sphere;

pub use gh::{gh_example, gh_triple, monopole, GhData, GhExample};
pub use legendre::{
    check_u_prime, eq_k_residual, eq_w_residual, helmholtz_residual, helmholtz_residual_jet,
    invert_map, kahler_ma_residual, kahler_potential, legendre_h, legendre_k, ma_residual,
    ma_residual_jet, mercator_to_polar, mercator_w, sample_h, sample_h_jet, sample_h_quadrature,
    sample_u, sample_u_quadrature, transform_t, transform_t_inv, u_prime_grid, PlaneJet,
};
pub use sphere::{
    canonical_slice, cartan_chart_sphere, cone_map, cone_sphere, delta_circle, dt_norm_sq,
    family_lambda, family_liouville_field, family_sphere, hyperplane_sphere, moduli,
    moduli_candidate, nu_family_forms, ModuliPoint, ModuliReport, SphereChart,
};
