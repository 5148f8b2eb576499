#include "seqpack/render.hpp"

#include <array>
#include <sstream>

#include "seqpack/errors.hpp"

namespace seqpack {

namespace {

constexpr std::array<const char*, 10> kPalette = {"#4e79a7", "#f28e2b", "#e15759", "#76b7b2", "#59a14f",
                                                  "#edc948", "#b07aa1", "#ff9da7", "#9c755f", "#bab0ac"};

const Rat kMargin(10);
const Rat kGap(20);
const Rat kTitleHeight(12);

struct Frame
{
    Rat left;  // svg x of plate-space x_min
    Rat x_min;
    Rat y_max; // plate-space y mapped to the top of the panel

    std::string x(const Rat& v) const { return to_decimal(left + (v - x_min), 3); }
    std::string y(const Rat& v) const { return to_decimal(kMargin + kTitleHeight + (y_max - v), 3); }
};

struct Bounds
{
    Rat x0, y0, x1, y1;
};

Bounds bounds_of(const ConvexPolygon& poly)
{
    Bounds b{poly.vertex(0).x, poly.vertex(0).y, poly.vertex(0).x, poly.vertex(0).y};
    for (const Point2& p : poly) {
        b.x0 = min(b.x0, p.x);
        b.y0 = min(b.y0, p.y);
        b.x1 = max(b.x1, p.x);
        b.y1 = max(b.y1, p.y);
    }
    return b;
}

std::string points_attr(const ConvexPolygon& poly, const Frame& f)
{
    std::string s;
    for (const Point2& p : poly) {
        if (!s.empty())
            s += ' ';
        s += f.x(p.x) + "," + f.y(p.y);
    }
    return s;
}

std::string xml_escape(const std::string& text)
{
    std::string out;
    for (char c : text) {
        switch (c) {
        case '&':
            out += "&amp;";
            break;
        case '<':
            out += "&lt;";
            break;
        case '>':
            out += "&gt;";
            break;
        case '"':
            out += "&quot;";
            break;
        default:
            out += c;
        }
    }
    return out;
}

} // namespace

std::string render_svg(const Instance& instance, const Solution& solution)
{
    const Bounds pb = bounds_of(instance.plate.polygon());
    const Rat panel_w = pb.x1 - pb.x0;
    const Rat panel_h = pb.y1 - pb.y0;
    const std::size_t n = solution.plates.size();
    const Rat width = kMargin * Rat(2) + panel_w * Rat(static_cast<long>(n)) + kGap * Rat(static_cast<long>(n ? n - 1 : 0));
    const Rat height = kMargin * Rat(2) + kTitleHeight + panel_h;

    std::ostringstream os;
    os << "<?xml version=\"1.0\" encoding=\"UTF-8\"?>\n";
    os << "<svg xmlns=\"http://www.w3.org/2000/svg\" version=\"1.1\" width=\"" << to_decimal(width * Rat(3), 0)
       << "\" height=\"" << to_decimal(height * Rat(3), 0) << "\" viewBox=\"0 0 " << to_decimal(width, 3) << " "
       << to_decimal(height, 3) << "\">\n";
    os << "<rect x=\"0\" y=\"0\" width=\"" << to_decimal(width, 3) << "\" height=\"" << to_decimal(height, 3)
       << "\" fill=\"white\"/>\n";

    for (std::size_t k = 0; k < n; ++k) {
        const SolutionPlate& plate = solution.plates[k];
        const std::vector<std::size_t> idx = resolve_ids(instance, plate);
        if (plate.placement.positions.size() != idx.size())
            throw MissingPlacement("plate " + std::to_string(plate.index) + " lists " +
                                   std::to_string(idx.size()) + " ids but " +
                                   std::to_string(plate.placement.positions.size()) + " positions");

        const Frame f{kMargin + (panel_w + kGap) * Rat(static_cast<long>(k)), pb.x0, pb.y1};
        os << "<g id=\"plate-" << plate.index << "\">\n";
        os << "<text x=\"" << f.x(pb.x0) << "\" y=\"" << to_decimal(kMargin + Rat(8), 3)
           << "\" font-family=\"sans-serif\" font-size=\"8\">plate " << plate.index << ", sigma "
           << to_decimal(plate.sigma, 4) << "</text>\n";
        os << "<polygon points=\"" << points_attr(instance.plate.polygon(), f)
           << "\" fill=\"#f4f4f4\" stroke=\"black\" stroke-width=\"0.8\"/>\n";
        if (plate.sigma < Rat(1))
            os << "<polygon class=\"scaled-plate\" points=\"" << points_attr(instance.plate.scaled(plate.sigma), f)
               << "\" fill=\"none\" stroke=\"#555555\" stroke-width=\"0.5\" stroke-dasharray=\"3,2\"/>\n";

        const std::vector<std::size_t> order = permutation_of(plate.placement, instance.params.epsilon_t);
        std::vector<std::size_t> rank(idx.size());
        for (std::size_t r = 0; r < order.size(); ++r)
            rank[order[r]] = r + 1;

        for (std::size_t i = 0; i < idx.size(); ++i) {
            const PrintObject& obj = instance.objects[idx[i]];
            const ObjectPlacement& p = plate.placement.positions[i];
            const Vec2 offset{p.x, p.y};
            const char* color = kPalette[idx[i] % kPalette.size()];
            const ConvexPolygon env = translate(build_envelope(obj, instance.extruder), offset);
            os << "<polygon class=\"envelope\" points=\"" << points_attr(env, f) << "\" fill=\"none\" stroke=\""
               << color << "\" stroke-width=\"0.4\" stroke-dasharray=\"1.5,1\"/>\n";
        }
        for (std::size_t i = 0; i < idx.size(); ++i) {
            const PrintObject& obj = instance.objects[idx[i]];
            const ObjectPlacement& p = plate.placement.positions[i];
            const ConvexPolygon hull = translate(obj.footprint, {p.x, p.y});
            const Point2 c = polygon_centroid(hull);
            const char* color = kPalette[idx[i] % kPalette.size()];
            os << "<polygon class=\"object\" data-id=\"" << xml_escape(obj.id) << "\" points=\"" << points_attr(hull, f)
               << "\" fill=\"" << color << "\" fill-opacity=\"0.75\" stroke=\"black\" stroke-width=\"0.3\"/>\n";
            os << "<text x=\"" << f.x(c.x) << "\" y=\"" << f.y(c.y)
               << "\" font-family=\"sans-serif\" font-size=\"6\" text-anchor=\"middle\" "
                  "dominant-baseline=\"central\">"
               << rank[i] << "</text>\n";
        }
        os << "</g>\n";
    }
    os << "</svg>\n";
    return os.str();
}

} // namespace seqpack
