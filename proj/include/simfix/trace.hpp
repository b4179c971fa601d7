#pragma once

#include <string>
#include <variant>
#include <vector>

#include "simfix/geom.hpp"

namespace simfix {

// One named element of a construction, in the order it was built.
// `defined_by` lists the labels of the lines a point was cut from (or the
// points a line was drawn through), for incidence checks.
struct TraceEntry {
    std::string label;
    std::variant<Point, Line> element;
    int step = 0;
    std::vector<std::string> defined_by;

    bool is_point() const { return std::holds_alternative<Point>(element); }
    const Point& point() const { return std::get<Point>(element); }
    const Line& line() const { return std::get<Line>(element); }
};

using ConstructionTrace = std::vector<TraceEntry>;

const TraceEntry* find(const ConstructionTrace& trace, const std::string& label);

// Every point lies on the lines that define it, and every line passes
// through the points it was drawn through.
bool verify_incidence(const ConstructionTrace& trace, const Tolerances& tol = {});

}  // namespace simfix
