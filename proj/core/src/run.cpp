#include "wm/run.hpp"

#include "wm/number_format.hpp"

namespace wm {

namespace {

void line(std::string& out, std::string_view key, std::string_view value) {
    out.append(key).append(": ").append(value).append("\n");
}

void sweep_summary(std::string& out, const SweepResult& r) {
    const std::string& name = r.coefficients.name;
    line(out, name + ".rows", std::to_string(r.coefficients.rows()));
    line(out, name + ".gaps", std::to_string(r.coefficients.gap_count()));
    line(out, name + ".max_residual", shortest(r.max_residual));
    line(out, name + ".max_condition", shortest(r.max_condition));
    line(out, name + ".max_abs_relative_imbalance", shortest(r.max_abs_relative_imbalance));
    for (const auto& f : r.failures) line(out, name + ".failure", shortest(f.x) + " " + f.message);
}

}  // namespace

RunOutputs compute_run(const InputVariant& v, const RunConfig& config) {
    const Medium medium = make_medium(v);
    const ReflectionSolution sol = solve_reflection(medium, config.incidence, config.fixed_angle);

    SweepResult by_angle = sweep_angle(v, config.incidence, config.angles);
    SweepResult by_eta = sweep_frequency(v, config.incidence, config.fixed_angle, config.etas);
    std::string sweeps;
    sweep_summary(sweeps, by_angle);
    sweep_summary(sweeps, by_eta);

    RunOutputs run;
    run.variant = v;
    run.cofec1 = std::move(by_angle.coefficients);
    run.displace = std::move(by_angle.displacements);
    run.freq_cof = std::move(by_eta.coefficients);
    run.freq_disp = std::move(by_eta.displacements);
    run.stresses = contact_stresses(medium.variant, sol, config.arc, config.contact);
    run.log_text = render_log(v, sol, medium.constants, medium.densities);

    std::string& c = run.check;
    line(c, "variant", v.ident);
    line(c, "incidence", to_string(config.incidence));
    line(c, "drainage", to_string(sol.drainage));
    line(c, "reference_angle", shortest(sol.angle_deg));
    line(c, "residual", shortest(sol.residual_norm));
    line(c, "condition", shortest(sol.condition));
    const FluxReport& f = sol.flux_report;
    line(c, "flux.incident", shortest(f.incident));
    line(c, "flux.reflected_Pf", shortest(f.reflected_Pf));
    line(c, "flux.reflected_Ps", shortest(f.reflected_Ps));
    line(c, "flux.reflected_S", shortest(f.reflected_S));
    line(c, "flux.relative_imbalance", shortest(f.relative_imbalance));
    std::string crit;
    for (double a : critical_angles(medium, config.incidence)) crit += (crit.empty() ? "" : " ") + shortest(a);
    line(c, "critical_angles", crit.empty() ? "none" : crit);
    c += sweeps;
    for (const auto& w : validate_variant(v).warnings) line(c, "warning", w);
    return run;
}

}  // namespace wm
