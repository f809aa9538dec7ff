#pragma once

#include <complex>
#include <string>
#include <string_view>

namespace wm {

/// Shortest decimal that parses back to the same double ("0.3", "1e-08").
std::string shortest(double x);

/// Fortran list-directed style: 7 significant digits in fixed notation for
/// 0.1 <= |x| < 1e7, otherwise 8-digit mantissa scientific ("1.1000000E-08").
std::string fortran_real(double x);

/// "(re,im)" with both parts in `fortran_real` style.
std::string fortran_complex(std::complex<double> z);

/// Leading numeric prefix, like sscanf "%lg". False when nothing parses.
bool parse_double_prefix(std::string_view text, double& out);
/// Leading integer prefix, like sscanf "%d".
bool parse_int_prefix(std::string_view text, int& out);

}  // namespace wm
