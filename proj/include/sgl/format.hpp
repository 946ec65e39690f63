#pragma once

#include <complex>
#include <string>
#include <string_view>
#include <vector>

namespace sgl {

// Shortest decimal string that round-trips to the same double.
std::string format_real(double x);

// Strict decimal parse of the whole token (surrounding blanks allowed).
double parse_real(std::string_view token);

// Comma separated reals, e.g. "0.5, 0.25".
std::vector<double> parse_real_list(std::string_view text);

// "re" or "re:im".
std::complex<double> parse_complex(std::string_view token);

std::string_view trim(std::string_view s);

}  // namespace sgl
