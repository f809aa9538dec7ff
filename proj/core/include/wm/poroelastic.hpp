#pragma once

#include <complex>
#include <span>
#include <string>
#include <vector>

#include "wm/series_table.hpp"

namespace wm {

using cplx = std::complex<double>;

/// One named parameter set. All quantities are dimensionless with the frame
/// shear modulus and the grain density as references (both fixed at 1).
///
/// Defaults are those of the legacy input form, including i_eta = 0, which
/// the legacy selector never offered; see `normalized()`.
struct InputVariant {
    std::string ident;
    std::string comment;
    double n = 0.3;            ///< porosity
    double eta = 1.0;          ///< dimensionless frequency
    double kf = 1.0;           ///< fluid compressibility modulus
    double rhof = 0.3;         ///< fluid density relative to grain density
    double anus = 0.3;         ///< frame Poisson ratio
    double viscosity = 1e-8;
    double permeabil = 1.0;
    int i_sealed = 0;
    int i_seepage = 1;
    int i_eta = 0;
    int iDrawGraph = 0;        ///< UI state, kept for file compatibility only

    /// Copy with i_eta = 0 mapped to 1.
    InputVariant normalized() const;

    friend bool operator==(const InputVariant&, const InputVariant&) = default;
};

enum class Drainage { sealed, open };

inline Drainage drainage_of(const InputVariant& v) {
    return v.i_sealed == 1 ? Drainage::sealed : Drainage::open;
}

struct ValidationReport {
    std::vector<std::string> violations;
    std::vector<std::string> warnings;

    bool valid() const { return violations.empty(); }
};

ValidationReport validate_variant(const InputVariant& v);

struct BiotConstants {
    double N = 1.0;
    double lambda = 0.0;
    double Q = 0.0;
    double R = 0.0;
    double A_biot = 0.0;
    double P = 0.0;
    /// kf == 0: the pore fluid carries no stiffness and Q = R = 0.
    bool fluid_decoupled = false;
};

BiotConstants biot_constants(const InputVariant& v);

struct DensityMatrix {
    double rho11 = 0.0;
    double rho12 = 0.0;
    double rho22 = 0.0;
    double rho_a = 0.0;
    double alpha_tort = 1.0;

    double total() const { return rho11 + 2.0 * rho12 + rho22; }
};

DensityMatrix density_matrix(const InputVariant& v);

/// Viscous coupling b = viscosity * n^2 / permeabil when seepage is included.
double dissipation_b(const InputVariant& v);

struct ComplexDensities {
    cplx cr11, cr12, cr22;
    double b = 0.0;
    double omega = 1.0;
};

ComplexDensities effective_densities(const DensityMatrix& dm, double b, double omega);

/// Complex bulk wavenumbers and fluid/solid displacement ratios.
///
/// Wavenumbers are reported with Im(l) >= 0 (Re(l) > 0 when real). The
/// squared values are kept alongside because the reflection solver works
/// from l^2 and chooses its own propagation branches.
struct WaveSet {
    double omega = 1.0;
    cplx l_f, l_s, l_sh;
    cplx l2_f, l2_s, l2_sh;
    cplx M_f, M_s, M_sh;
    /// False in the fluid-decoupled limit, where only one dilatational wave exists.
    bool has_slow = true;
};

WaveSet bulk_wavenumbers(const BiotConstants& bc, const ComplexDensities& cd);

/// Coefficients (a, b, c) of a x^2 + b x + c whose roots are l_f^2 and l_s^2.
struct DispersionQuadratic {
    cplx a, b, c;
    cplx operator()(cplx x) const { return (a * x + b) * x + c; }
};

DispersionQuadratic dispersion_quadratic(const BiotConstants& bc, const ComplexDensities& cd);

/// Everything the wave solvers need for one variant at omega = eta.
struct Medium {
    InputVariant variant;
    BiotConstants constants;
    DensityMatrix densities;
    ComplexDensities complex_densities;
    WaveSet waves;
};

Medium make_medium(const InputVariant& v);

/// |omega / l| for the three bulk waves, normalized by sqrt(N / rho_total).
/// Columns: eta, Vf, Vs, Vsh. A failing row throws with the row index in the message.
SeriesTable normalized_velocities(const InputVariant& v, std::span<const double> eta_grid);

}  // namespace wm
