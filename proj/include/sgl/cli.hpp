#pragma once

#include <cstdint>
#include <iosfwd>
#include <string>
#include <string_view>

namespace sgl {

// Exit codes: 0 success, 1 input error, 2 result produced but the claim is
// not certified (or a containment/certification step refused).
inline constexpr int kExitOk = 0;
inline constexpr int kExitInput = 1;
inline constexpr int kExitUncertified = 2;

int run_cli(int argc, const char* const* argv, std::ostream& out, std::ostream& err);

// 64-bit FNV-1a, used for report file names.
std::uint64_t fnv1a64(std::string_view bytes);

}  // namespace sgl
