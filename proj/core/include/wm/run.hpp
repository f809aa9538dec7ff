#pragma once

#include <vector>

#include "wm/reflection.hpp"
#include "wm/result_tables.hpp"

namespace wm {

/// Grids and the reference angle for one compute run. The reference angle
/// drives the frequency sweep, the contact-stress arc and the log.
struct RunConfig {
    Incidence incidence = Incidence::P;
    std::vector<double> angles = default_angle_grid();
    std::vector<double> etas = default_eta_grid();
    double fixed_angle = 30.0;
    std::vector<double> arc = default_arc_grid();
    ContactOptions contact;
};

/// Everything a "recalc" produces for one variant. Throws DomainError for an
/// invalid variant and the solver's errors when the reference solve fails;
/// sweep rows that fail become gaps and are listed in the check report.
RunOutputs compute_run(const InputVariant& v, const RunConfig& config = {});

}  // namespace wm
