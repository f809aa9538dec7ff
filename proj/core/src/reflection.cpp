#include "wm/reflection.hpp"

#include <algorithm>
#include <cctype>
#include <cmath>
#include <limits>
#include <numbers>
#include <optional>

#include <Eigen/Dense>

#include "wm/errors.hpp"

namespace wm {

namespace {

constexpr cplx I{0.0, 1.0};

double deg_to_rad(double deg) { return deg * std::numbers::pi / 180.0; }

// Vertical wavenumber of a reflected wave, exp(-i nu z). Propagating roots
// (Re nu^2 > 0) keep Re(nu) > 0 so the wave travels down; evanescent roots
// (Re nu^2 < 0) decay with depth. The cut sits on the positive imaginary nu^2
// axis, reached only at a critical transition. Choosing Im(nu) <= 0
// everywhere instead would flip a lossy downgoing wave upward wherever its
// small Im(nu) changes sign, a jump in the coefficients at no critical angle.
cplx vertical_branch(cplx nu2) {
    cplx nu = std::sqrt(nu2);
    if (nu2.real() < 0.0 && nu.imag() > 0.0) nu = -nu;
    return nu;
}

PlaneWaveMode dilatational_mode(const BiotConstants& bc, cplx l, cplx M, cplx k, cplx nu, int dir) {
    PlaneWaveMode m;
    m.k = k;
    m.nu = nu;
    m.direction = dir;
    const cplx nz = static_cast<double>(dir) * nu;
    m.ux = k / l;
    m.uz = nz / l;
    m.Ux = M * m.ux;
    m.Uz = M * m.uz;
    const cplx e = -I * l;
    const cplx dux_dx = -I * k * k / l;
    const cplx duz_dz = -I * nz * nz / l;
    const cplx iso = (bc.A_biot + bc.Q * M) * e;
    m.s_xx = 2.0 * bc.N * dux_dx + iso;
    m.s_zz = 2.0 * bc.N * duz_dz + iso;
    m.s_xz = -2.0 * I * bc.N * k * nz / l;
    m.sigma = (bc.Q + bc.R * M) * e;
    return m;
}

PlaneWaveMode shear_mode(const BiotConstants& bc, cplx l, cplx M, cplx k, cplx nu, int dir) {
    PlaneWaveMode m;
    m.k = k;
    m.nu = nu;
    m.direction = dir;
    const cplx nz = static_cast<double>(dir) * nu;
    m.ux = nz / l;
    m.uz = -k / l;
    m.Ux = M * m.ux;
    m.Uz = M * m.uz;
    m.s_zz = 2.0 * I * bc.N * k * nz / l;
    m.s_xx = -m.s_zz;
    m.s_xz = I * bc.N * (k * k - nz * nz) / l;
    m.sigma = 0.0;
    return m;
}

double mode_flux(const PlaneWaveMode& m, cplx amplitude, double omega) {
    const cplx power = m.s_zz * std::conj(m.uz) + m.s_xz * std::conj(m.ux) + m.sigma * std::conj(m.Uz);
    return -0.5 * omega * std::norm(amplitude) * power.imag();
}

BoundaryRow column_of(const PlaneWaveMode& m, double porosity, Drainage drainage) {
    const cplx drain = drainage == Drainage::sealed ? porosity * (m.Uz - m.uz) : m.sigma;
    return {m.total_zz(), m.s_xz, drain};
}

void check_angle(double angle_deg) {
    if (!std::isfinite(angle_deg) || angle_deg < 0.0 || angle_deg >= 90.0)
        throw DomainError("incidence angle must lie in [0, 90) degrees, got " + std::to_string(angle_deg));
}

}  // namespace

std::string_view to_string(Incidence inc) { return inc == Incidence::P ? "P" : "SV"; }

std::string_view to_string(Drainage d) { return d == Drainage::sealed ? "sealed" : "open"; }

Incidence parse_incidence(std::string_view text) {
    std::string upper(text);
    std::transform(upper.begin(), upper.end(), upper.begin(),
                   [](unsigned char c) { return static_cast<char>(std::toupper(c)); });
    if (upper == "P") return Incidence::P;
    if (upper == "SV" || upper == "S") return Incidence::SV;
    throw SelectorError("unknown incidence '" + std::string(text) + "' (expected P or SV)");
}

cplx PlaneWaveMode::phase(double x, double z) const {
    return std::exp(-I * (k * x + static_cast<double>(direction) * nu * z));
}

double ReflectionSolution::rhs_residual() const {
    const auto c = coefficients();
    double num = 0.0, den = 0.0;
    for (std::size_t i = 0; i < 3; ++i) {
        cplx r = -rhs[i];
        for (std::size_t j = 0; j < 3; ++j) r += g[i][j] * c[j];
        num += std::norm(r);
        den += std::norm(rhs[i]);
    }
    return den > 0.0 ? std::sqrt(num / den) : std::sqrt(num);
}

ReflectionSolution solve_reflection(const InputVariant& v, Incidence incidence, double angle_deg) {
    check_angle(angle_deg);
    return solve_reflection(make_medium(v), incidence, angle_deg);
}

ReflectionSolution solve_reflection(const Medium& medium, Incidence incidence, double angle_deg) {
    check_angle(angle_deg);
    const BiotConstants& bc = medium.constants;
    const WaveSet& ws = medium.waves;
    const double porosity = medium.variant.n;

    ReflectionSolution sol;
    sol.incidence = incidence;
    sol.angle_deg = angle_deg;
    sol.drainage = drainage_of(medium.variant);
    sol.medium = medium;

    // Physical wavenumbers: principal roots, so that forward propagation decays.
    const cplx lf = std::sqrt(ws.l2_f);
    const cplx ls = ws.has_slow ? std::sqrt(ws.l2_s) : cplx{};
    const cplx lsh = std::sqrt(ws.l2_sh);

    const double theta = deg_to_rad(angle_deg);
    const cplx l_inc = incidence == Incidence::P ? lf : lsh;
    const cplx k = l_inc * std::sin(theta);
    const cplx nu_inc = l_inc * std::cos(theta);

    sol.incident_mode = incidence == Incidence::P
                            ? dilatational_mode(bc, lf, ws.M_f, k, nu_inc, -1)
                            : shear_mode(bc, lsh, ws.M_sh, k, nu_inc, -1);
    sol.c_inc = 1.0 / l_inc;

    const cplx nu_f = vertical_branch(ws.l2_f - k * k);
    const cplx nu_sh = vertical_branch(ws.l2_sh - k * k);
    sol.reflected_modes[0] = dilatational_mode(bc, lf, ws.M_f, k, nu_f, +1);
    sol.reflected_modes[2] = shear_mode(bc, lsh, ws.M_sh, k, nu_sh, +1);
    if (ws.has_slow) {
        const cplx nu_s = vertical_branch(ws.l2_s - k * k);
        sol.reflected_modes[1] = dilatational_mode(bc, ls, ws.M_s, k, nu_s, +1);
    } else {
        sol.reflected_modes[1] = PlaneWaveMode{k, 0.0, +1, 0.0, 0.0, 0.0, 0.0, 0.0, 0.0, 0.0, 0.0};
    }

    // Both candidate drainage rows are kept for the log.
    for (std::size_t j = 0; j < 3; ++j) {
        const auto& m = sol.reflected_modes[j];
        sol.g[0][j] = m.total_zz();
        sol.g[1][j] = m.s_xz;
        sol.g4[j] = porosity * (m.Uz - m.uz);
        if (j < 2) sol.g6[j] = m.sigma;
    }
    const BoundaryRow inc = column_of(sol.incident_mode, porosity, sol.drainage);
    sol.rhs = {-inc[0], -inc[1], -inc[2]};

    if (ws.has_slow) {
        if (sol.drainage == Drainage::sealed) {
            sol.g[2] = sol.g4;
        } else {
            sol.g[2] = {sol.g6[0], sol.g6[1], 0.0};
        }
    } else {
        // No slow wave: the third equation pins its amplitude to zero.
        sol.g4 = {0.0, 1.0, 0.0};
        sol.g6 = {0.0, 1.0};
        sol.g[2] = {0.0, 1.0, 0.0};
        sol.rhs[2] = 0.0;
    }

    Eigen::Matrix3cd G;
    Eigen::Vector3cd b;
    for (int i = 0; i < 3; ++i) {
        for (int j = 0; j < 3; ++j) G(i, j) = sol.g[i][j];
        b(i) = sol.rhs[i];
    }

    // Equilibrate rows then columns; the rows carry different physical units.
    Eigen::Vector3d row_scale, col_scale;
    for (int i = 0; i < 3; ++i) {
        const double m = G.row(i).cwiseAbs().maxCoeff();
        row_scale(i) = m > 0.0 ? 1.0 / m : 1.0;
    }
    Eigen::Matrix3cd S = row_scale.asDiagonal() * G;
    for (int j = 0; j < 3; ++j) {
        const double m = S.col(j).cwiseAbs().maxCoeff();
        col_scale(j) = m > 0.0 ? 1.0 / m : 1.0;
    }
    S = S * col_scale.asDiagonal();

    const Eigen::JacobiSVD<Eigen::Matrix3cd> svd(S);
    const Eigen::Vector3d sv = svd.singularValues();
    const double smax = sv.maxCoeff(), smin = sv.minCoeff();
    sol.condition = smin > 0.0 ? smax / smin : std::numeric_limits<double>::infinity();
    if (!(sol.condition <= kMaxBoundaryCondition)) throw NearCriticalError(angle_deg, sol.condition);

    const Eigen::Vector3cd y = S.fullPivLu().solve(row_scale.asDiagonal() * b);
    const Eigen::Vector3cd c = col_scale.asDiagonal() * y;
    sol.c_ref_Pf = c(0);
    sol.c_ref_Ps = ws.has_slow ? c(1) : cplx{};
    sol.c_ref_S = c(2);
    sol.coeslow = ws.has_slow ? sol.c_ref_Ps * l_inc / ls : cplx{};
    sol.residual_norm = sol.rhs_residual();

    sol.uux = sol.incident_mode.ux;
    sol.uuz = sol.incident_mode.uz;
    const auto coef = sol.coefficients();
    for (std::size_t j = 0; j < 3; ++j) {
        sol.uux += coef[j] * sol.reflected_modes[j].ux;
        sol.uuz += coef[j] * sol.reflected_modes[j].uz;
    }

    sol.flux_report = energy_balance(sol);
    return sol;
}

FluxReport energy_balance(const ReflectionSolution& sol) {
    const double omega = sol.medium.waves.omega;
    FluxReport f;
    f.incident = -mode_flux(sol.incident_mode, 1.0, omega);
    f.reflected_Pf = mode_flux(sol.reflected_modes[0], sol.c_ref_Pf, omega);
    f.reflected_Ps = mode_flux(sol.reflected_modes[1], sol.c_ref_Ps, omega);
    f.reflected_S = mode_flux(sol.reflected_modes[2], sol.c_ref_S, omega);
    f.imbalance = f.reflected_total() - f.incident;
    f.relative_imbalance = f.incident != 0.0 ? f.imbalance / f.incident : 0.0;
    return f;
}

FieldSample evaluate_field(const ReflectionSolution& sol, double x, double z, double amplitude) {
    FieldSample s{};
    auto add = [&](const PlaneWaveMode& m, cplx a) {
        const cplx w = a * m.phase(x, z);
        s.ux += w * m.ux;
        s.uz += w * m.uz;
        s.Ux += w * m.Ux;
        s.Uz += w * m.Uz;
        s.tau_xx += w * m.total_xx();
        s.tau_zz += w * m.total_zz();
        s.tau_xz += w * m.s_xz;
        s.sigma += w * m.sigma;
    };
    add(sol.incident_mode, amplitude);
    const auto coef = sol.coefficients();
    for (std::size_t j = 0; j < 3; ++j) {
        if (coef[j] != 0.0) add(sol.reflected_modes[j], amplitude * coef[j]);
    }
    return s;
}

double vertical_energy_flux(const ReflectionSolution& sol, double z) {
    const FieldSample f = evaluate_field(sol, 0.0, z);
    const cplx solid_zz = f.tau_zz - f.sigma;
    const cplx power = solid_zz * std::conj(f.uz) + f.tau_xz * std::conj(f.ux) + f.sigma * std::conj(f.Uz);
    return -0.5 * sol.medium.waves.omega * power.imag();
}

std::vector<double> critical_angles(const Medium& medium, Incidence incidence) {
    const WaveSet& ws = medium.waves;
    const double l_inc = std::abs(incidence == Incidence::P ? ws.l_f : ws.l_sh);
    std::vector<double> out;
    auto consider = [&](cplx l) {
        const double ratio = std::abs(l) / l_inc;
        if (ratio < 1.0) out.push_back(std::asin(ratio) * 180.0 / std::numbers::pi);
    };
    consider(ws.l_f);
    if (ws.has_slow) consider(ws.l_s);
    consider(ws.l_sh);
    std::sort(out.begin(), out.end());
    return out;
}

std::vector<double> angle_grid(double min_deg, double max_deg, double step_deg) {
    if (!(step_deg > 0.0) || !(max_deg >= min_deg))
        throw DomainError("angle grid needs step > 0 and max >= min");
    std::vector<double> grid;
    const auto count = static_cast<std::size_t>(std::floor((max_deg - min_deg) / step_deg + 1e-9)) + 1;
    grid.reserve(count);
    for (std::size_t i = 0; i < count; ++i) grid.push_back(min_deg + static_cast<double>(i) * step_deg);
    return grid;
}

std::vector<double> default_angle_grid() { return angle_grid(1.0, 89.0, 1.0); }

std::vector<double> log_grid(double min, double max, std::size_t count) {
    if (!(min > 0.0) || !(max >= min) || count == 0)
        throw DomainError("log grid needs 0 < min <= max and count >= 1");
    if (count == 1) return {min};
    std::vector<double> grid(count);
    const double a = std::log10(min), b = std::log10(max);
    for (std::size_t i = 0; i < count; ++i)
        grid[i] = std::pow(10.0, a + (b - a) * static_cast<double>(i) / static_cast<double>(count - 1));
    grid.front() = min;
    grid.back() = max;
    return grid;
}

std::vector<double> linear_grid(double min, double max, std::size_t count) {
    if (!(max >= min) || count == 0) throw DomainError("linear grid needs min <= max and count >= 1");
    if (count == 1) return {min};
    std::vector<double> grid(count);
    for (std::size_t i = 0; i < count; ++i)
        grid[i] = min + (max - min) * static_cast<double>(i) / static_cast<double>(count - 1);
    return grid;
}

std::vector<double> default_eta_grid() { return log_grid(0.01, 100.0, 40); }

namespace {

void check_increasing(std::span<const double> grid, const char* what) {
    for (std::size_t i = 1; i < grid.size(); ++i)
        if (!(grid[i] > grid[i - 1])) throw DomainError(std::string(what) + " must be strictly increasing");
}

SweepResult make_sweep_tables(const char* coef_name, const char* disp_name, const char* x_label) {
    SweepResult r;
    r.coefficients = SeriesTable(coef_name, x_label, {"coefPf", "coefPs", "coefSh"});
    r.displacements = SeriesTable(disp_name, x_label, {"cabs(uux)", "cabs(uuz)"});
    return r;
}

void record(SweepResult& r, double x, const ReflectionSolution& sol) {
    r.coefficients.add_row(x, {std::abs(sol.c_ref_Pf), std::abs(sol.c_ref_Ps), std::abs(sol.c_ref_S)});
    r.displacements.add_row(x, {std::abs(sol.uux), std::abs(sol.uuz)});
    r.max_residual = std::max(r.max_residual, sol.residual_norm);
    r.max_condition = std::max(r.max_condition, sol.condition);
    r.max_abs_relative_imbalance =
        std::max(r.max_abs_relative_imbalance, std::abs(sol.flux_report.relative_imbalance));
}

void record_gap(SweepResult& r, double x, const std::exception& e) {
    r.coefficients.add_gap(x);
    r.displacements.add_gap(x);
    r.failures.push_back({x, e.what()});
}

}  // namespace

SweepResult sweep_angle(const InputVariant& v, Incidence incidence, std::span<const double> grid) {
    for (double a : grid) check_angle(a);
    check_increasing(grid, "angle grid");
    SweepResult r = make_sweep_tables("cofec1", "displace", "angle");

    std::optional<Medium> medium;
    try {
        medium = make_medium(v);
    } catch (const SingularMediumError& e) {
        for (double a : grid) record_gap(r, a, e);
        return r;
    }
    for (double a : grid) {
        try {
            record(r, a, solve_reflection(*medium, incidence, a));
        } catch (const NearCriticalError& e) {
            record_gap(r, a, e);
        }
    }
    return r;
}

SweepResult sweep_frequency(const InputVariant& v, Incidence incidence, double angle_deg,
                            std::span<const double> eta_grid) {
    check_angle(angle_deg);
    for (double e : eta_grid)
        if (!(e > 0.0)) throw DomainError("eta grid must be positive");
    check_increasing(eta_grid, "eta grid");
    SweepResult r = make_sweep_tables("freq_cof", "freq_disp", "eta");

    for (double eta : eta_grid) {
        InputVariant row = v;
        row.eta = eta;
        try {
            record(r, eta, solve_reflection(make_medium(row), incidence, angle_deg));
        } catch (const NearCriticalError& e) {
            record_gap(r, eta, e);
        } catch (const SingularMediumError& e) {
            record_gap(r, eta, e);
        }
    }
    return r;
}

std::vector<double> default_arc_grid() { return linear_grid(0.0, std::numbers::pi, 181); }

SeriesTable contact_stresses(const InputVariant& v, const ReflectionSolution& sol,
                             std::span<const double> arc_grid, const ContactOptions& options) {
    const int selector = v.i_eta == 0 ? 1 : v.i_eta;
    if (selector != 1 && selector != 2)
        throw SelectorError("i_eta must be 1 or 2, got " + std::to_string(v.i_eta));
    for (double t : arc_grid)
        if (!(t >= 0.0 && t <= std::numbers::pi)) throw DomainError("arc angles must lie in [0, pi]");
    check_increasing(arc_grid, "arc grid");
    if (!(options.radius > 0.0)) throw DomainError("contact radius must be positive");

    SeriesTable table = selector == 1
                            ? SeriesTable("stresses", "theta",
                                          {"cabs(tau_zz)", "cabs(tau_xz)", "cabs(tau_xx)", "cabs(sigma)"})
                            : SeriesTable("stresses", "theta", {"cabs(tau_xx)", "cabs(sigma)", "cabs(tau_xz)"});
    for (double t : arc_grid) {
        const double x = options.radius * std::cos(t);
        const double z = std::max(0.0, options.radius * std::sin(t));
        const FieldSample f = evaluate_field(sol, x, z, options.amplitude);
        if (selector == 1)
            table.add_row(t, {std::abs(f.tau_zz), std::abs(f.tau_xz), std::abs(f.tau_xx), std::abs(f.sigma)});
        else
            table.add_row(t, {std::abs(f.tau_xx), std::abs(f.sigma), std::abs(f.tau_xz)});
    }
    return table;
}

}  // namespace wm
