#include "ambdg/trace.hpp"

#include <algorithm>
#include <string>

namespace ambdg {

long staleness(const GradientMsg& msg, long master_update_count) {
    const long s = master_update_count - msg.param_version;
    if (s < 0)
        throw InvariantError("staleness: message version " + std::to_string(msg.param_version) +
                             " is ahead of update " + std::to_string(master_update_count));
    return s;
}

long Trace::b_hat() const {
    long m = 0;
    bool first = true;
    for (const auto& r : records) {
        if (first || r.batch_total < m) m = r.batch_total;
        first = false;
    }
    return m;
}

double Trace::b_bar_emp() const {
    if (records.empty()) return 0.0;
    double s = 0.0;
    for (const auto& r : records) s += static_cast<double>(r.batch_total);
    return s / static_cast<double>(records.size());
}

}  // namespace ambdg
