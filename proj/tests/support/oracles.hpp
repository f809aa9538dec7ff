#pragma once

#include <complex>
#include <filesystem>
#include <random>
#include <string>

#include "wm/poroelastic.hpp"
#include "wm/reflection.hpp"

namespace wm::test {

using cplx = std::complex<double>;

/// Classical displacement reflection coefficients at the free surface of an
/// elastic half-space (Aki & Richards, z down), written from the textbook
/// closed forms with complex cosines so post-critical SV is covered.
struct ElasticFreeSurface {
    cplx PP, PS;  ///< incident P
    cplx SP, SS;  ///< incident SV
};

/// alpha, beta: P and S speeds; angle of the incident wave in degrees.
ElasticFreeSurface elastic_free_surface(double alpha, double beta, double angle_deg, Incidence incidence);

/// Energy balance from kinetic energy density and ray direction, independent
/// of the stress-based flux in the engine. Valid for b = 0 only. Evanescent
/// reflected waves carry no vertical flux.
struct KineticBalance {
    double incident = 0.0;
    double reflected = 0.0;
    double relative_imbalance() const { return (reflected - incident) / incident; }
};
KineticBalance kinetic_energy_balance(const ReflectionSolution& sol);

/// |det| of the 2x2 dilatational modal matrix at x = l^2, relative to the sum
/// of the magnitudes of the terms that make up the determinant.
double modal_determinant_residual(const BiotConstants& bc, const ComplexDensities& cd, cplx x);

/// Uniform draws over the ranges the property tests cover. Lossless draws
/// have i_seepage = 0; the others mix seepage, viscosity and permeability.
InputVariant random_variant(std::mt19937_64& rng, bool lossless);

/// Fresh empty directory under the system temp folder.
std::filesystem::path temp_dir(const std::string& tag);

std::string read_file(const std::filesystem::path& p);

}  // namespace wm::test
