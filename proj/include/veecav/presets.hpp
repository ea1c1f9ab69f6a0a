#ifndef VEECAV_PRESETS_HPP
#define VEECAV_PRESETS_HPP

#include "veecav/params.hpp"
#include "veecav/spectra.hpp"

#include <string>
#include <vector>

namespace veecav {

/// One panel of a figure data set: the fully resolved parameters, the
/// emitting channel, and the file stem the CLI writes it under.
struct FigurePanel {
    SystemParams params;
    Channel channel;
    std::string name;
};

/// Base parameter set shared by every figure: gamma_a = 0.3, gamma_1 = 0.15,
/// gamma_2 = 0.2, g_2 = 1.5, delta_1 = 1, delta_2 = 0, P_a = 0.1, P_1 = 0.1,
/// P_2 = 0.1 g_2 = 0.15 (all in units of g_1), beta = 0.
SystemParams figure_base_params();

/// Panels of data set `set` (2..6):
///  2: cavity channel, beta in {0, 1/4, 1/2, 1}
///  3: exciton-1 channel, same beta sweep
///  4: exciton-2 channel, P_a in {0.01, 0.1, 1, 10}, beta in {0, 1}
///  5: cavity channel, (P_1, P_2) = s (g_1, g_2) for s in {0.01, 0.1, 1, 10}, beta in {0, 1}
///  6: cavity channel, P_a in {0.01, 0.1, 1, 10}, beta in {0, 1}
std::vector<FigurePanel> figure_panels(int set);

} // namespace veecav

#endif
