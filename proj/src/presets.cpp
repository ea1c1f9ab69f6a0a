#include "veecav/presets.hpp"
#include "veecav/errors.hpp"

#include <sstream>

namespace veecav {

SystemParams figure_base_params() {
    SystemParams p;
    p.gamma_a = 0.3;
    p.gamma_1 = 0.15;
    p.gamma_2 = 0.2;
    p.g_2 = 1.5;
    p.delta_1 = 1.0;
    p.delta_2 = 0.0;
    p.P_a = 0.1;
    p.P_1 = 0.1;
    p.P_2 = 0.1 * p.g_2;  // caption value 0.1 g_2, stored in g_1 units
    p.beta = 0.0;
    return p;
}

namespace {

std::string fmt(double v) {
    std::ostringstream os;
    os << v;
    return os.str();
}

} // namespace

std::vector<FigurePanel> figure_panels(int set) {
    const SystemParams base = figure_base_params();
    std::vector<FigurePanel> panels;

    switch (set) {
        case 2:
        case 3: {
            const Channel ch = set == 2 ? Channel::cavity : Channel::exciton1;
            for (double beta : {0.0, 0.25, 0.5, 1.0}) {
                SystemParams p = base;
                p.beta = beta;
                panels.push_back({p, ch, "beta=" + fmt(beta)});
            }
            break;
        }
        case 4:
        case 6: {
            const Channel ch = set == 4 ? Channel::exciton2 : Channel::cavity;
            for (double pa : {0.01, 0.1, 1.0, 10.0})
                for (double beta : {0.0, 1.0}) {
                    SystemParams p = base;
                    p.P_a = pa;
                    p.beta = beta;
                    panels.push_back({p, ch, "P_a=" + fmt(pa) + "_beta=" + fmt(beta)});
                }
            break;
        }
        case 5: {
            for (double s : {0.01, 0.1, 1.0, 10.0})
                for (double beta : {0.0, 1.0}) {
                    SystemParams p = base;
                    p.P_1 = s * p.g_1;
                    p.P_2 = s * p.g_2;
                    p.beta = beta;
                    panels.push_back({p, Channel::cavity, "P1P2=" + fmt(s) + "_beta=" + fmt(beta)});
                }
            break;
        }
        default:
            throw RangeError("set", "figure data sets are 2..6");
    }
    return panels;
}

} // namespace veecav
