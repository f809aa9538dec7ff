#pragma once

#include <cstddef>
#include <stdexcept>
#include <string>

namespace wm {

/// Argument outside the domain of an operation (negative frequency, angle >= 90, ...).
class DomainError : public std::invalid_argument {
public:
    using std::invalid_argument::invalid_argument;
};

/// A selector (legacy mode, i_eta, incidence name) has no meaning.
class SelectorError : public std::invalid_argument {
public:
    using std::invalid_argument::invalid_argument;
};

/// The medium has no well-posed dispersion relation (P*R == Q^2, massless stiff fluid, nu == 0.5).
class SingularMediumError : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

/// Boundary matrix too ill-conditioned to trust; usually within a hair of a critical angle.
class NearCriticalError : public std::runtime_error {
public:
    NearCriticalError(double angle_deg, double condition);
    double angle_deg() const noexcept { return angle_deg_; }
    double condition() const noexcept { return condition_; }

private:
    double angle_deg_;
    double condition_;
};

class IoError : public std::runtime_error {
public:
    IoError(std::string path, const std::string& what);
    const std::string& path() const noexcept { return path_; }

private:
    std::string path_;
};

/// Malformed table or document; line is 1-based, 0 when not applicable.
class FormatError : public std::runtime_error {
public:
    FormatError(std::size_t line, const std::string& what);
    std::size_t line() const noexcept { return line_; }

private:
    std::size_t line_;
};

}  // namespace wm
