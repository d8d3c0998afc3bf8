#pragma once

namespace hyperq {

inline constexpr const char* kVersion = "0.1.0";

/// Dissipator convention tag written into every metadata file.
inline constexpr const char* kDissipatorConvention =
    "rate*(2 c rho c^+ - rho c^+ c - c^+ c rho); undriven cavity photon number decays as exp(-2 kappa t)";

}  // namespace hyperq
