#include "wm/poroelastic.hpp"

#include <cmath>
#include <limits>
#include <sstream>

#include "wm/errors.hpp"

namespace wm {

InputVariant InputVariant::normalized() const {
    InputVariant out = *this;
    if (out.i_eta == 0) out.i_eta = 1;
    return out;
}

ValidationReport validate_variant(const InputVariant& v) {
    ValidationReport report;
    auto violation = [&](std::string msg) { report.violations.push_back(std::move(msg)); };

    const double reals[] = {v.n, v.eta, v.kf, v.rhof, v.anus, v.viscosity, v.permeabil};
    for (double x : reals) {
        if (!std::isfinite(x)) {
            violation("non-finite parameter value");
            return report;
        }
    }

    if (!(v.n > 0.0 && v.n < 1.0)) violation("porosity out of range (0 < n < 1)");
    if (!(v.eta > 0.0)) violation("frequency eta must be positive");
    if (v.kf < 0.0) violation("fluid modulus kf must be non-negative");
    if (v.rhof < 0.0) violation("fluid density rhof must be non-negative");
    if (v.anus == 0.5)
        violation("Poisson ratio singular (anus = 0.5)");
    else if (!(v.anus > -1.0 && v.anus < 0.5))
        violation("Poisson ratio out of range (-1 < anus < 0.5)");
    if (v.viscosity < 0.0) violation("viscosity must be non-negative");
    if (!(v.permeabil > 0.0)) violation("permeability must be positive");
    if (v.i_sealed != 0 && v.i_sealed != 1) violation("i_sealed must be 0 or 1");
    if (v.i_seepage != 0 && v.i_seepage != 1) violation("i_seepage must be 0 or 1");
    if (v.iDrawGraph != 0 && v.iDrawGraph != 1) violation("iDrawGraph must be 0 or 1");
    if (v.i_eta == 0)
        report.warnings.push_back("i_eta = 0 is treated as 1");
    else if (v.i_eta != 1 && v.i_eta != 2)
        violation("i_eta must be 1 or 2");

    if (v.rhof == 0.0 && v.kf > 0.0 && report.violations.empty() && dissipation_b(v) == 0.0)
        report.warnings.push_back("massless pore fluid with kf > 0 has no slow wave; compute will fail");
    return report;
}

BiotConstants biot_constants(const InputVariant& v) {
    if (v.anus == 0.5) throw SingularMediumError("Poisson ratio singular (anus = 0.5)");
    if (!(v.anus > -1.0 && v.anus < 0.5))
        throw DomainError("Poisson ratio out of range (-1 < anus < 0.5)");
    if (!(v.n > 0.0 && v.n < 1.0)) throw DomainError("porosity out of range (0 < n < 1)");

    BiotConstants bc;
    bc.N = 1.0;
    bc.lambda = 2.0 * bc.N * v.anus / (1.0 - 2.0 * v.anus);
    bc.Q = (1.0 - v.n) * v.kf;
    bc.R = v.n * v.kf;
    if (bc.R > 0.0) {
        bc.A_biot = bc.lambda + bc.Q * bc.Q / bc.R;
    } else {
        bc.A_biot = bc.lambda;
        bc.fluid_decoupled = true;
    }
    bc.P = bc.A_biot + 2.0 * bc.N;
    return bc;
}

DensityMatrix density_matrix(const InputVariant& v) {
    if (!(v.n > 0.0 && v.n < 1.0)) throw DomainError("porosity out of range (0 < n < 1)");
    DensityMatrix dm;
    dm.alpha_tort = 0.5 * (1.0 + 1.0 / v.n);
    dm.rho_a = (dm.alpha_tort - 1.0) * v.n * v.rhof;
    dm.rho11 = (1.0 - v.n) + dm.rho_a;
    dm.rho12 = -dm.rho_a;
    dm.rho22 = v.n * v.rhof + dm.rho_a;
    return dm;
}

double dissipation_b(const InputVariant& v) {
    if (v.i_seepage != 1) return 0.0;
    return v.viscosity * v.n * v.n / v.permeabil;
}

ComplexDensities effective_densities(const DensityMatrix& dm, double b, double omega) {
    if (!(omega > 0.0)) throw DomainError("angular frequency must be positive");
    const double d = b == 0.0 ? 0.0 : b / omega;
    ComplexDensities cd;
    cd.cr11 = {dm.rho11, b == 0.0 ? 0.0 : -d};
    cd.cr12 = {dm.rho12, d};
    cd.cr22 = {dm.rho22, b == 0.0 ? 0.0 : -d};
    cd.b = b;
    cd.omega = omega;
    return cd;
}

DispersionQuadratic dispersion_quadratic(const BiotConstants& bc, const ComplexDensities& cd) {
    const double w2 = cd.omega * cd.omega;
    DispersionQuadratic q;
    q.a = bc.P * bc.R - bc.Q * bc.Q;
    q.b = -w2 * (bc.P * cd.cr22 + bc.R * cd.cr11 - 2.0 * bc.Q * cd.cr12);
    q.c = w2 * w2 * (cd.cr11 * cd.cr22 - cd.cr12 * cd.cr12);
    return q;
}

namespace {

// Imaginary parts below this fraction of |l| are round-off, not attenuation.
constexpr double kRoundoffImag = 1e-12;

cplx wavenumber_branch(cplx l2) {
    cplx l = std::sqrt(l2);
    if (std::abs(l.imag()) <= kRoundoffImag * std::abs(l)) return {std::abs(l.real()), std::abs(l.imag())};
    if (l.imag() < 0.0) l = -l;
    return l;
}

// U/u for a dilatational root x = l^2, from whichever row of the 2x2 modal
// system is better conditioned.
cplx amplitude_ratio(const BiotConstants& bc, const ComplexDensities& cd, cplx x) {
    const double w2 = cd.omega * cd.omega;
    const cplx num1 = bc.P * x - w2 * cd.cr11;
    const cplx den1 = bc.Q * x - w2 * cd.cr12;
    const cplx num2 = bc.Q * x - w2 * cd.cr12;
    const cplx den2 = bc.R * x - w2 * cd.cr22;
    const bool first = std::abs(den1) >= std::abs(den2);
    const cplx num = first ? num1 : num2;
    const cplx den = first ? den1 : den2;
    if (den == 0.0) {
        return num == 0.0 ? cplx{} : cplx{std::numeric_limits<double>::infinity(), 0.0};
    }
    return -num / den;
}

}  // namespace

WaveSet bulk_wavenumbers(const BiotConstants& bc, const ComplexDensities& cd) {
    if (!(cd.omega > 0.0)) throw DomainError("angular frequency must be positive");
    const double w2 = cd.omega * cd.omega;
    WaveSet ws;
    ws.omega = cd.omega;

    if (bc.fluid_decoupled || (bc.Q == 0.0 && bc.R == 0.0)) {
        // Fluid without stiffness follows the frame through inertia alone.
        const cplx coupling = cd.cr22 != 0.0 ? -cd.cr12 / cd.cr22 : cplx{};
        const cplx rho_eff = cd.cr22 != 0.0 ? cd.cr11 - cd.cr12 * cd.cr12 / cd.cr22 : cd.cr11;
        ws.has_slow = false;
        ws.l2_f = w2 * rho_eff / bc.P;
        ws.l2_sh = w2 * rho_eff / bc.N;
        ws.l_f = wavenumber_branch(ws.l2_f);
        ws.l_sh = wavenumber_branch(ws.l2_sh);
        ws.M_f = coupling;
        ws.M_sh = coupling;
        return ws;
    }

    const DispersionQuadratic q = dispersion_quadratic(bc, cd);
    if (q.a == 0.0) throw SingularMediumError("degenerate dispersion relation (P*R == Q^2)");
    if (cd.cr22 == 0.0)
        throw SingularMediumError("massless pore fluid with nonzero stiffness (cr22 == 0)");

    cplx disc = std::sqrt(q.b * q.b - 4.0 * q.a * q.c);
    if (std::abs(q.b - disc) > std::abs(q.b + disc)) disc = -disc;
    const cplx half = -0.5 * (q.b + disc);
    if (half == 0.0) throw SingularMediumError("dispersion relation has a zero double root");
    cplx x1 = half / q.a;
    cplx x2 = q.c / half;
    if (std::abs(x1) > std::abs(x2)) std::swap(x1, x2);

    ws.l2_f = x1;
    ws.l2_s = x2;
    ws.l2_sh = w2 * (cd.cr11 * cd.cr22 - cd.cr12 * cd.cr12) / (bc.N * cd.cr22);
    ws.l_f = wavenumber_branch(ws.l2_f);
    ws.l_s = wavenumber_branch(ws.l2_s);
    ws.l_sh = wavenumber_branch(ws.l2_sh);
    ws.M_f = amplitude_ratio(bc, cd, x1);
    ws.M_s = amplitude_ratio(bc, cd, x2);
    ws.M_sh = -cd.cr12 / cd.cr22;
    return ws;
}

Medium make_medium(const InputVariant& v) {
    const ValidationReport report = validate_variant(v);
    if (!report.valid()) {
        std::string msg = "invalid variant '" + v.ident + "':";
        for (const auto& s : report.violations) msg += " " + s + ";";
        throw DomainError(msg);
    }
    Medium m;
    m.variant = v.normalized();
    m.constants = biot_constants(m.variant);
    m.densities = density_matrix(m.variant);
    m.complex_densities = effective_densities(m.densities, dissipation_b(m.variant), m.variant.eta);
    m.waves = bulk_wavenumbers(m.constants, m.complex_densities);
    return m;
}

SeriesTable normalized_velocities(const InputVariant& v, std::span<const double> eta_grid) {
    for (std::size_t i = 0; i < eta_grid.size(); ++i) {
        if (!(eta_grid[i] > 0.0)) throw DomainError("eta grid must be positive");
        if (i > 0 && !(eta_grid[i] > eta_grid[i - 1]))
            throw DomainError("eta grid must be strictly increasing");
    }

    SeriesTable table("velocities", "eta", {"Vf", "Vs", "Vsh"});
    for (std::size_t i = 0; i < eta_grid.size(); ++i) {
        InputVariant row = v;
        row.eta = eta_grid[i];
        auto where = [&] {
            std::ostringstream os;
            os << "row " << i << " (eta=" << eta_grid[i] << "): ";
            return os.str();
        };
        try {
            const Medium m = make_medium(row);
            const double w = m.waves.omega;
            const double v_ref = std::sqrt(m.constants.N / m.densities.total());
            const double vf = std::abs(w / m.waves.l_f) / v_ref;
            const double vs = m.waves.has_slow ? std::abs(w / m.waves.l_s) / v_ref : 0.0;
            const double vsh = std::abs(w / m.waves.l_sh) / v_ref;
            table.add_row(eta_grid[i], {vf, vs, vsh});
        } catch (const SingularMediumError& e) {
            throw SingularMediumError(where() + e.what());
        } catch (const DomainError& e) {
            throw DomainError(where() + e.what());
        }
    }
    return table;
}

}  // namespace wm
