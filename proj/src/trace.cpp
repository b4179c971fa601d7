#include "simfix/trace.hpp"

#include <algorithm>

namespace simfix {

const TraceEntry* find(const ConstructionTrace& trace, const std::string& label) {
    const auto it = std::find_if(trace.begin(), trace.end(),
                                 [&](const TraceEntry& e) { return e.label == label; });
    return it == trace.end() ? nullptr : &*it;
}

bool verify_incidence(const ConstructionTrace& trace, const Tolerances& tol) {
    for (const TraceEntry& entry : trace) {
        for (const std::string& ref : entry.defined_by) {
            const TraceEntry* other = find(trace, ref);
            if (other == nullptr || other->is_point() == entry.is_point()) {
                return false;
            }
            const Point& p = entry.is_point() ? entry.point() : other->point();
            const Line& l = entry.is_point() ? other->line() : entry.line();
            if (!contains(l, p, tol)) {
                return false;
            }
        }
    }
    return true;
}

}  // namespace simfix
