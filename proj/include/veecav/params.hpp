#ifndef VEECAV_PARAMS_HPP
#define VEECAV_PARAMS_HPP

#include <filesystem>
#include <string>
#include <string_view>

namespace veecav {

// Model: a Vee-type three-level emitter (two excitons sharing a ground
// state) coupled to one cavity mode, with incoherent pumping of the mode
// and of both excitons. Everything is expressed in units of the first
// exciton-cavity coupling g_1, in the frame rotating at the cavity
// frequency (omega_a = 0 internally; detunings delta_i = omega_sigma_i -
// omega_a). Rates follow the half-width convention of the master
// equation, i.e. each dissipator enters with rate/2.
struct SystemParams {
    double delta_1 = 0.0;  ///< exciton-1 detuning (units g_1)
    double delta_2 = 0.0;  ///< exciton-2 detuning (units g_1)
    double g_1 = 1.0;      ///< the unit; 0 only for the decoupled diagnostic limit
    double g_2 = 0.0;      ///< exciton-2 coupling (units g_1)
    double gamma_a = 0.0;  ///< cavity decay rate
    double gamma_1 = 0.0;  ///< exciton-1 decay rate
    double gamma_2 = 0.0;  ///< exciton-2 decay rate
    double beta = 0.0;     ///< dipole-alignment (quantum interference) parameter, in [-1, 1]
    double P_a = 0.0;      ///< cavity pump rate
    double P_1 = 0.0;      ///< exciton-1 pump rate
    double P_2 = 0.0;      ///< exciton-2 pump rate
};

/// Rates derived from SystemParams: the cross-decay gamma_12 induced by
/// dipole alignment and the effective widths entering the correlator
/// generator.
struct DerivedRates {
    double gamma_12;  ///< beta * sqrt(gamma_1 * gamma_2)
    double Gamma_a;   ///< gamma_a - P_a (net cavity loss)
    double Gamma_s1;  ///< gamma_1 + P_1
    double Gamma_s2;  ///< gamma_2 + P_2
};

/// Range checks only (rates nonnegative, |beta| <= 1, g_1 in {0, 1});
/// throws RangeError naming the offending field.
void validate_ranges(const SystemParams& p);

/// Full validation: ranges plus the spectral-stability requirement
/// P_a < gamma_a (throws StabilityError otherwise). Returns p unchanged.
const SystemParams& validate_params(const SystemParams& p);

DerivedRates derived_rates(const SystemParams& p);

/// Parse the flat key=value parameter format ('#' comments, one pair per
/// line). All ten keys are required exactly once; g_1 is implicitly 1 and
/// rejected if present. Values must be plain decimal floats.
SystemParams parse_params_text(std::string_view text);
SystemParams parse_params_file(const std::filesystem::path& file);

} // namespace veecav

#endif
