#pragma once

#include <array>
#include <span>
#include <string>
#include <string_view>
#include <vector>

#include "wm/poroelastic.hpp"
#include "wm/series_table.hpp"

namespace wm {

enum class Incidence { P, SV };

std::string_view to_string(Incidence inc);
std::string_view to_string(Drainage d);
/// Accepts "P" / "SV" (case-insensitive). Throws SelectorError otherwise.
Incidence parse_incidence(std::string_view text);

/// Condition number above which the boundary solve is rejected.
inline constexpr double kMaxBoundaryCondition = 1e12;

/// Time-averaged vertical energy fluxes at the surface, positive downwards
/// for reflected waves; `incident` is the magnitude of the upgoing flux.
struct FluxReport {
    double incident = 0.0;
    double reflected_Pf = 0.0;
    double reflected_Ps = 0.0;
    double reflected_S = 0.0;
    double imbalance = 0.0;           ///< reflected total - incident
    double relative_imbalance = 0.0;  ///< imbalance / incident

    double reflected_total() const { return reflected_Pf + reflected_Ps + reflected_S; }
};

/// Displacements and stresses of a single plane wave of unit solid-displacement
/// amplitude, at the origin. Stresses are split into the solid part and the
/// pore-fluid stress sigma; the total (bulk) stress is solid + sigma on the diagonal.
struct PlaneWaveMode {
    cplx k, nu;       ///< horizontal and vertical wavenumbers
    int direction;    ///< +1 downgoing (into the half-space), -1 upgoing
    cplx ux, uz;      ///< solid displacement
    cplx Ux, Uz;      ///< fluid displacement
    cplx s_xx, s_zz, s_xz;  ///< solid stress
    cplx sigma;       ///< fluid stress Q e + R epsilon

    cplx phase(double x, double z) const;
    cplx total_zz() const { return s_zz + sigma; }
    cplx total_xx() const { return s_xx + sigma; }
};

/// Total field (incident + reflected) at one point.
struct FieldSample {
    cplx ux, uz, Ux, Uz;
    cplx tau_xx, tau_zz, tau_xz;  ///< total (bulk) stress
    cplx sigma;                    ///< pore-fluid stress
};

using BoundaryRow = std::array<cplx, 3>;

struct ReflectionSolution {
    Incidence incidence = Incidence::P;
    double angle_deg = 0.0;
    Drainage drainage = Drainage::sealed;

    /// Solved system, columns (Pf, Ps, S); rows: total tau_zz, tau_xz, drainage condition.
    std::array<BoundaryRow, 3> g{};
    /// Sealed-surface row n (U_z - u_z); used as the third row when sealed.
    BoundaryRow g4{};
    /// Open-pore row (fluid stress); the S wave carries no fluid stress.
    std::array<cplx, 2> g6{};
    BoundaryRow rhs{};

    cplx c_inc;      ///< potential amplitude of the unit-displacement incident wave
    cplx c_ref_Pf, c_ref_Ps, c_ref_S;
    cplx coeslow;    ///< slow-P potential-amplitude ratio (experimental)
    cplx uux, uuz;   ///< total surface displacement at the origin

    double residual_norm = 0.0;  ///< |g c - rhs| / |rhs|
    double condition = 0.0;      ///< of the row/column-equilibrated g
    FluxReport flux_report;

    Medium medium;
    PlaneWaveMode incident_mode;
    std::array<PlaneWaveMode, 3> reflected_modes;  ///< Pf, Ps, S

    std::array<cplx, 3> coefficients() const { return {c_ref_Pf, c_ref_Ps, c_ref_S}; }
    double rhs_residual() const;
};

ReflectionSolution solve_reflection(const InputVariant& v, Incidence incidence, double angle_deg);
ReflectionSolution solve_reflection(const Medium& medium, Incidence incidence, double angle_deg);

FluxReport energy_balance(const ReflectionSolution& sol);

/// Time-averaged vertical energy flux of the total field at (0, z), positive
/// downwards. Zero at the free surface; negative below it when the medium
/// dissipates.
double vertical_energy_flux(const ReflectionSolution& sol, double z);

/// Total field at (x, z), z >= 0 pointing into the half-space, for an
/// incident wave of the given amplitude.
FieldSample evaluate_field(const ReflectionSolution& sol, double x, double z, double amplitude = 1.0);

/// Angles (degrees) past which a reflected wave turns evanescent.
std::vector<double> critical_angles(const Medium& medium, Incidence incidence);

struct SweepFailure {
    double x = 0.0;
    std::string message;
};

struct SweepResult {
    SeriesTable coefficients;    ///< cofec1 / freq_cof
    SeriesTable displacements;   ///< displace / freq_disp
    std::vector<SweepFailure> failures;
    double max_residual = 0.0;
    double max_condition = 0.0;
    double max_abs_relative_imbalance = 0.0;
};

/// Default angle grid: 1..89 degrees, step 1.
std::vector<double> default_angle_grid();
std::vector<double> angle_grid(double min_deg, double max_deg, double step_deg);
/// Default eta grid: 40 log-spaced points over [0.01, 100].
std::vector<double> default_eta_grid();
std::vector<double> log_grid(double min, double max, std::size_t count);
std::vector<double> linear_grid(double min, double max, std::size_t count);

/// Columns: angle | coefPf coefPs coefSh, and angle | cabs(uux) cabs(uuz).
/// Rows where the solver fails become gaps.
SweepResult sweep_angle(const InputVariant& v, Incidence incidence, std::span<const double> grid);

/// Same column roles with x = eta at a fixed angle.
SweepResult sweep_frequency(const InputVariant& v, Incidence incidence, double angle_deg,
                            std::span<const double> eta_grid);

struct ContactOptions {
    double radius = 1.0;
    double amplitude = 1.0;
};

/// Magnitudes of the total stresses on a semicircular arc centred at the
/// surface origin. i_eta = 1: tau_zz, tau_xz, tau_xx, sigma; i_eta = 2:
/// tau_xx, sigma, tau_xz. i_eta = 0 is read as 1.
SeriesTable contact_stresses(const InputVariant& v, const ReflectionSolution& sol,
                             std::span<const double> arc_grid, const ContactOptions& options = {});

/// Default arc grid: 181 points over [0, pi].
std::vector<double> default_arc_grid();

}  // namespace wm
