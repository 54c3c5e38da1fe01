#pragma once

// Shared radial integrator for v'' + (N-1)/rho v' = source(v), v(0) = 1, v'(0) = 0,
// in nondimensional variables. Used by the confined and the zero-mass shooters.

#include <array>
#include <functional>
#include <span>
#include <string>
#include <vector>

namespace nlslab::detail {

using OdeState = std::array<double, 2>;

enum class OdeStop { Crossing, Turning, Overflow, Decay, Horizon, Failure };

struct OdeSpec {
    int N = 2;
    std::function<double(double)> source;
    double rho_max = 80.0;
    double rtol = 1e-11;
    double atol = 1e-15;
    double blow = 1e6;
    /// stop when v' > 0 while v > 0
    bool stop_on_turning = true;
    /// optional certified-decay test, evaluated after every step
    std::function<bool(double rho, const OdeState&)> decayed;
};

struct OdeResult {
    OdeStop stop = OdeStop::Horizon;
    double rho_event = 0.0;
    OdeState state{};    ///< state at rho_event
    std::size_t sampled = 0;  ///< number of leading sample points filled
    std::string diagnostic;
};

/// Integrates from the series start and fills v (and v') at the sorted sample
/// radii until the first stop condition.
OdeResult integrate_radial(const OdeSpec& spec, std::span<const double> sample_rho = {},
                           std::vector<double>* v = nullptr, std::vector<double>* dv = nullptr);

}  // namespace nlslab::detail
