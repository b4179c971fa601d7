#include "simfix/svg.hpp"

#include <algorithm>
#include <limits>
#include <optional>
#include <sstream>

namespace simfix {

namespace {

std::string escape(const std::string& text) {
    std::string out;
    for (char ch : text) {
        switch (ch) {
            case '&': out += "&amp;"; break;
            case '<': out += "&lt;"; break;
            case '>': out += "&gt;"; break;
            case '"': out += "&quot;"; break;
            default: out += ch;
        }
    }
    return out;
}

std::string unescape(const std::string& text) {
    std::string out = text;
    const std::pair<const char*, const char*> table[] = {
        {"&lt;", "<"}, {"&gt;", ">"}, {"&quot;", "\""}, {"&amp;", "&"}};
    for (const auto& [from, to] : table) {
        for (std::size_t pos = out.find(from); pos != std::string::npos;
             pos = out.find(from, pos + 1)) {
            out.replace(pos, std::string(from).size(), to);
        }
    }
    return out;
}

struct Box {
    double x0, y0, x1, y1;
};

// Liang-Barsky clip of the infinite line to the box.
std::optional<std::pair<Point, Point>> clip(const Line& l, const Box& box) {
    const Point p0 = l.anchor();
    const Point d = l.direction();
    double lo = -std::numeric_limits<double>::infinity();
    double hi = std::numeric_limits<double>::infinity();
    const auto slab = [&](double origin, double dir, double min, double max) {
        if (std::abs(dir) < 1e-15) {
            return origin >= min && origin <= max;
        }
        double t0 = (min - origin) / dir;
        double t1 = (max - origin) / dir;
        if (t0 > t1) std::swap(t0, t1);
        lo = std::max(lo, t0);
        hi = std::min(hi, t1);
        return lo <= hi;
    };
    if (!slab(p0.x, d.x, box.x0, box.x1) || !slab(p0.y, d.y, box.y0, box.y1)) {
        return std::nullopt;
    }
    return std::make_pair(p0 + lo * d, p0 + hi * d);
}

class Canvas {
public:
    Canvas(const Box& world, double width_px)
        : world_(world), scale_(width_px / (world.x1 - world.x0)) {}

    double width() const { return (world_.x1 - world_.x0) * scale_; }
    double height() const { return (world_.y1 - world_.y0) * scale_; }
    double sx(double x) const { return (x - world_.x0) * scale_; }
    double sy(double y) const { return (world_.y1 - y) * scale_; }
    const Box& world() const { return world_; }

private:
    Box world_;
    double scale_;
};

std::string px(double v) {
    std::ostringstream os;
    os.precision(6);
    os << std::fixed << v;
    std::string s = os.str();
    s.erase(s.find_last_not_of('0') + 1);
    if (s.back() == '.') s.pop_back();
    return s == "-0" ? "0" : s;
}

}  // namespace

std::string render_svg(const ConstructionTrace& trace, const std::string& title,
                       const FigureStyle& style) {
    Box box{std::numeric_limits<double>::infinity(), std::numeric_limits<double>::infinity(),
            -std::numeric_limits<double>::infinity(), -std::numeric_limits<double>::infinity()};
    for (const TraceEntry& e : trace) {
        if (!e.is_point()) continue;
        box.x0 = std::min(box.x0, e.point().x);
        box.y0 = std::min(box.y0, e.point().y);
        box.x1 = std::max(box.x1, e.point().x);
        box.y1 = std::max(box.y1, e.point().y);
    }
    if (!(box.x0 <= box.x1)) {
        box = {-1.0, -1.0, 1.0, 1.0};
    }
    const double extent = std::max({box.x1 - box.x0, box.y1 - box.y0, 1e-9});
    const double pad_x = style.margin * std::max(box.x1 - box.x0, 0.05 * extent);
    const double pad_y = style.margin * std::max(box.y1 - box.y0, 0.05 * extent);
    box = {box.x0 - pad_x, box.y0 - pad_y, box.x1 + pad_x, box.y1 + pad_y};
    const Canvas canvas(box, style.width_px);
    const double font = std::max(10.0, canvas.width() / 60.0);

    std::ostringstream svg;
    svg << "<?xml version=\"1.0\" encoding=\"UTF-8\"?>\n";
    svg << "<svg xmlns=\"http://www.w3.org/2000/svg\" width=\"" << px(canvas.width())
        << "\" height=\"" << px(canvas.height()) << "\" viewBox=\"0 0 " << px(canvas.width())
        << " " << px(canvas.height()) << "\">\n";
    svg << "  <title>" << escape(title) << "</title>\n";
    svg << "  <rect width=\"100%\" height=\"100%\" fill=\"white\"/>\n";

    const auto vertex = [&](const char* label) { return find(trace, label); };
    const auto polygon = [&](const char* a, const char* b, const char* c, const char* cls,
                             const char* color) {
        const TraceEntry* pa = vertex(a);
        const TraceEntry* pb = vertex(b);
        const TraceEntry* pc = vertex(c);
        if (!pa || !pb || !pc || !pa->is_point() || !pb->is_point() || !pc->is_point()) return;
        svg << "  <polygon class=\"" << cls << "\" points=\"";
        for (const TraceEntry* e : {pa, pb, pc}) {
            svg << px(canvas.sx(e->point().x)) << "," << px(canvas.sy(e->point().y)) << " ";
        }
        svg << "\" fill=\"" << color << "\" fill-opacity=\"0.15\" stroke=\"" << color
            << "\" stroke-width=\"2\"/>\n";
    };
    polygon("P", "Q", "R", "source-triangle", "#1f77b4");
    polygon("P'", "Q'", "R'", "image-triangle", "#d62728");

    for (const TraceEntry& e : trace) {
        if (e.is_point()) continue;
        const bool axis = e.label == "axis";
        const auto seg = clip(e.line(), canvas.world());
        Point label_at = e.line().anchor();
        if (seg) {
            const auto [a, b] = *seg;
            svg << "  <line class=\"" << (axis ? "axis" : "construction-line") << "\" data-label=\""
                << escape(e.label) << "\" x1=\"" << px(canvas.sx(a.x)) << "\" y1=\""
                << px(canvas.sy(a.y)) << "\" x2=\"" << px(canvas.sx(b.x)) << "\" y2=\""
                << px(canvas.sy(b.y)) << "\" stroke=\"" << (axis ? "#2ca02c" : "#555555")
                << "\" stroke-width=\"" << (axis ? "2" : "1")
                << "\"" << (axis ? " stroke-dasharray=\"8 4\"" : "") << "/>\n";
            label_at = a + 0.12 * (b - a);
        }
        svg << "  <text class=\"label\" data-kind=\"line\" x=\"" << px(canvas.sx(label_at.x) + 4)
            << "\" y=\"" << px(canvas.sy(label_at.y) - 4) << "\" font-size=\"" << px(font)
            << "\" font-style=\"italic\" fill=\"#333333\">" << escape(e.label) << "</text>\n";
    }

    for (const TraceEntry& e : trace) {
        if (!e.is_point()) continue;
        const bool fixed = e.label == "C";
        const Point p = e.point();
        svg << "  <circle class=\"" << (fixed ? "fixed-point" : "point") << "\" data-label=\""
            << escape(e.label) << "\" cx=\"" << px(canvas.sx(p.x)) << "\" cy=\""
            << px(canvas.sy(p.y)) << "\" r=\"" << (fixed ? "5" : "3") << "\" fill=\""
            << (fixed ? "#ff7f0e" : "black") << "\"/>\n";
        svg << "  <text class=\"label\" data-kind=\"point\" x=\"" << px(canvas.sx(p.x) + 5)
            << "\" y=\"" << px(canvas.sy(p.y) - 5) << "\" font-size=\"" << px(font)
            << "\" fill=\"black\">" << escape(e.label) << "</text>\n";
    }
    svg << "</svg>\n";
    return svg.str();
}

std::vector<std::string> svg_labels(const std::string& svg) {
    std::vector<std::string> labels;
    const std::string open = "<text class=\"label\"";
    for (std::size_t pos = svg.find(open); pos != std::string::npos; pos = svg.find(open, pos + 1)) {
        const std::size_t start = svg.find('>', pos);
        const std::size_t stop = svg.find("</text>", start);
        if (start == std::string::npos || stop == std::string::npos) break;
        labels.push_back(unescape(svg.substr(start + 1, stop - start - 1)));
    }
    return labels;
}

}  // namespace simfix
