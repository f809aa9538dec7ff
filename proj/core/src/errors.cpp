#include "wm/errors.hpp"

#include <sstream>

namespace wm {

namespace {

std::string near_critical_message(double angle_deg, double condition) {
    std::ostringstream os;
    os << "boundary matrix is near-singular at angle " << angle_deg
       << " deg (condition " << condition << ")";
    return os.str();
}

}  // namespace

NearCriticalError::NearCriticalError(double angle_deg, double condition)
    : std::runtime_error(near_critical_message(angle_deg, condition)),
      angle_deg_(angle_deg),
      condition_(condition) {}

IoError::IoError(std::string path, const std::string& what)
    : std::runtime_error(what + ": " + path), path_(std::move(path)) {}

FormatError::FormatError(std::size_t line, const std::string& what)
    : std::runtime_error(line ? "line " + std::to_string(line) + ": " + what : what),
      line_(line) {}

}  // namespace wm
