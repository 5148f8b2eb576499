#include "seqpack/io.hpp"

#include <fstream>
#include <initializer_list>
#include <map>
#include <set>
#include <sstream>

#include <yaml-cpp/yaml.h>

#include "seqpack/errors.hpp"

namespace seqpack {

namespace {

[[noreturn]] void fail(const YAML::Node& node, const std::string& message)
{
    const YAML::Mark m = node.Mark();
    if (m.is_null())
        throw ParseError(message);
    throw ParseError(message, m.line + 1, m.column + 1);
}

void require_map(const YAML::Node& node, const std::string& what)
{
    if (!node.IsMap())
        fail(node, what + " must be a mapping");
}

void check_keys(const YAML::Node& node, std::initializer_list<std::string_view> allowed, const std::string& what)
{
    require_map(node, what);
    for (const auto& entry : node) {
        const std::string key = entry.first.Scalar();
        bool known = false;
        for (std::string_view a : allowed)
            known = known || key == a;
        if (!known)
            fail(entry.first, "unknown field '" + key + "' in " + what);
    }
}

Rat rat_of(const YAML::Node& node, const std::string& what)
{
    if (!node.IsScalar())
        fail(node, what + " must be a number");
    try {
        return Rat::parse(node.Scalar());
    } catch (const std::invalid_argument&) {
        fail(node, what + ": '" + node.Scalar() + "' is not an exact number");
    }
}

std::string string_of(const YAML::Node& node, const std::string& what)
{
    if (!node.IsScalar())
        fail(node, what + " must be a scalar");
    return node.Scalar();
}

bool bool_of(const YAML::Node& node, const std::string& what)
{
    const std::string s = string_of(node, what);
    if (s == "true")
        return true;
    if (s == "false")
        return false;
    fail(node, what + " must be true or false");
}

long long int_of(const YAML::Node& node, const std::string& what)
{
    const Rat r = rat_of(node, what);
    if (!r.is_integer() || !r.numerator().fits_slong_p())
        fail(node, what + " must be an integer");
    return r.numerator().get_si();
}

std::vector<Rat> tuple_of(const YAML::Node& node, std::size_t arity, const std::string& what)
{
    if (!node.IsSequence() || node.size() != arity)
        fail(node, what + " must be a list of " + std::to_string(arity) + " numbers");
    std::vector<Rat> out;
    for (const auto& item : node)
        out.push_back(rat_of(item, what));
    return out;
}

std::vector<Point2> points_of(const YAML::Node& node, const std::string& what)
{
    if (!node.IsSequence())
        fail(node, what + " must be a list of [x, y] points");
    std::vector<Point2> out;
    for (const auto& item : node) {
        const auto xy = tuple_of(item, 2, what + " point");
        out.push_back({xy[0], xy[1]});
    }
    return out;
}

/// Plate and extruder outlines must already be convex and counterclockwise.
ConvexPolygon strict_polygon(const YAML::Node& node, const std::string& what)
{
    const std::vector<Point2> pts = points_of(node, what);
    try {
        return ConvexPolygon::from_ccw(pts);
    } catch (const Error& e) {
        fail(node, what + ": " + e.what());
    }
}

Plate parse_plate(const YAML::Node& node)
{
    check_keys(node, {"rectangle", "polygon", "center"}, "plate");
    const YAML::Node rect = node["rectangle"];
    const YAML::Node poly = node["polygon"];
    if (static_cast<bool>(rect) == static_cast<bool>(poly))
        fail(node, "plate needs exactly one of 'rectangle' or 'polygon'");

    std::optional<ConvexPolygon> outline;
    if (rect) {
        const auto wh = tuple_of(rect, 2, "plate rectangle");
        if (wh[0].sign() <= 0 || wh[1].sign() <= 0)
            fail(rect, "plate rectangle sides must be positive");
        outline = ConvexPolygon::rectangle(Rat(0), Rat(0), wh[0], wh[1]);
    } else {
        outline = strict_polygon(poly, "plate polygon");
    }

    if (const YAML::Node c = node["center"]) {
        const auto xy = tuple_of(c, 2, "plate center");
        try {
            return Plate(*outline, Point2{xy[0], xy[1]});
        } catch (const Error& e) {
            fail(c, e.what());
        }
    }
    return Plate(*outline);
}

Extruder parse_extruder(const YAML::Node& node)
{
    check_keys(node, {"polygon", "rectangle"}, "extruder");
    const YAML::Node rect = node["rectangle"];
    const YAML::Node poly = node["polygon"];
    if (static_cast<bool>(rect) == static_cast<bool>(poly))
        fail(node, "extruder needs exactly one of 'rectangle' or 'polygon'");
    try {
        if (rect) {
            const auto b = tuple_of(rect, 4, "extruder rectangle [x0, y0, x1, y1]");
            return Extruder(ConvexPolygon::rectangle(b[0], b[1], b[2], b[3]));
        }
        return Extruder(strict_polygon(poly, "extruder polygon"));
    } catch (const ParseError&) {
        throw;
    } catch (const Error& e) {
        fail(node, std::string("extruder: ") + e.what());
    }
}

PrintObject parse_object(const YAML::Node& node, std::vector<std::string>& warnings)
{
    check_keys(node, {"id", "footprint", "points3d", "height"}, "object");
    if (!node["id"])
        fail(node, "object is missing 'id'");
    const std::string id = string_of(node["id"], "object id");
    const YAML::Node fp = node["footprint"];
    const YAML::Node p3 = node["points3d"];
    if (static_cast<bool>(fp) == static_cast<bool>(p3))
        fail(node, "object '" + id + "' needs exactly one of 'footprint' or 'points3d'");

    std::vector<Point3> source;
    std::vector<Point2> planar;
    if (fp) {
        planar = points_of(fp, "footprint of '" + id + "'");
    } else {
        if (!p3.IsSequence() || p3.size() == 0)
            fail(p3, "points3d of '" + id + "' must be a non-empty list of [x, y, z] points");
        for (const auto& item : p3) {
            const auto xyz = tuple_of(item, 3, "points3d of '" + id + "'");
            source.push_back({xyz[0], xyz[1], xyz[2]});
        }
        planar = project_xy(source);
    }

    std::optional<ConvexPolygon> hull;
    bool convex = false;
    try {
        auto [h, already] = footprint_from_points(planar);
        hull = std::move(h);
        convex = already;
    } catch (const Error& e) {
        fail(fp ? fp : p3, "object '" + id + "': " + e.what());
    }
    if (fp && !convex)
        warnings.push_back("footprint of '" + id + "' is not a convex counterclockwise polygon; using its convex hull");

    std::optional<Rat> height;
    if (const YAML::Node h = node["height"])
        height = rat_of(h, "height of '" + id + "'");
    return PrintObject{id, std::move(*hull), std::move(source), std::move(height)};
}

SolverParams parse_params(const YAML::Node& node)
{
    check_keys(node, {"epsilon_t", "epsilon_xy", "timeout_ms", "mode", "optimize_sigma"}, "params");
    SolverParams p;
    if (const YAML::Node n = node["epsilon_t"])
        p.epsilon_t = rat_of(n, "epsilon_t");
    if (const YAML::Node n = node["epsilon_xy"])
        p.epsilon_xy = rat_of(n, "epsilon_xy");
    if (const YAML::Node n = node["timeout_ms"])
        p.timeout_ms = int_of(n, "timeout_ms");
    if (const YAML::Node n = node["mode"]) {
        try {
            p.mode = parse_mode(string_of(n, "mode"));
        } catch (const Error& e) {
            fail(n, e.what());
        }
    }
    if (const YAML::Node n = node["optimize_sigma"])
        p.optimize_sigma = bool_of(n, "optimize_sigma");
    try {
        p.validate();
    } catch (const Error& e) {
        fail(node, e.what());
    }
    return p;
}

YAML::Node load_yaml(std::string_view text)
{
    try {
        return YAML::Load(std::string(text));
    } catch (const YAML::ParserException& e) {
        throw ParseError(e.msg, e.mark.line + 1, e.mark.column + 1);
    }
}

void emit_points(YAML::Emitter& out, const ConvexPolygon& poly)
{
    out << YAML::Flow << YAML::BeginSeq;
    for (const Point2& p : poly)
        out << YAML::Flow << YAML::BeginSeq << p.x.str() << p.y.str() << YAML::EndSeq;
    out << YAML::EndSeq;
}

void emit_stats(YAML::Emitter& out, const SolveStats& s)
{
    out << YAML::Key << "stats" << YAML::Value << YAML::BeginMap;
    out << YAML::Key << "refinement_rounds" << YAML::Value << s.refinement_rounds;
    out << YAML::Key << "constraints_added" << YAML::Value << s.constraints_added;
    out << YAML::Key << "solver_calls" << YAML::Value << s.solver_calls;
    out << YAML::Key << "sigma_iterations" << YAML::Value << s.sigma_iterations;
    out << YAML::Key << "full_plni_constraints" << YAML::Value << s.full_plni_constraints;
    out << YAML::Key << "wall_ms" << YAML::Value << s.wall_ms;
    out << YAML::EndMap;
}

SolveStats parse_stats(const YAML::Node& node)
{
    check_keys(node,
               {"refinement_rounds", "constraints_added", "solver_calls", "sigma_iterations",
                "full_plni_constraints", "wall_ms"},
               "stats");
    SolveStats s;
    const auto count = [&](const char* key) -> std::size_t {
        const YAML::Node n = node[key];
        if (!n)
            return 0;
        const long long v = int_of(n, key);
        if (v < 0)
            fail(n, std::string(key) + " must not be negative");
        return static_cast<std::size_t>(v);
    };
    s.refinement_rounds = count("refinement_rounds");
    s.constraints_added = count("constraints_added");
    s.solver_calls = count("solver_calls");
    s.sigma_iterations = count("sigma_iterations");
    s.full_plni_constraints = count("full_plni_constraints");
    if (const YAML::Node n = node["wall_ms"])
        s.wall_ms = int_of(n, "wall_ms");
    return s;
}

SolveStatus parse_status(const YAML::Node& node)
{
    const std::string s = string_of(node, "status");
    if (s == "sat")
        return SolveStatus::Sat;
    if (s == "unsat")
        return SolveStatus::Unsat;
    if (s == "timeout")
        return SolveStatus::Timeout;
    fail(node, "unknown status '" + s + "'");
}

std::string join(const std::vector<std::string>& words)
{
    std::string s;
    for (const std::string& w : words) {
        if (!s.empty())
            s += ' ';
        s += w;
    }
    return s;
}

} // namespace

Instance parse_instance(std::string_view text)
{
    const YAML::Node root = load_yaml(text);
    if (!root.IsMap())
        throw ParseError("instance document must be a mapping", 1, 1);
    check_keys(root, {"plate", "extruder", "objects", "params"}, "instance");
    for (const char* key : {"plate", "extruder", "objects"})
        if (!root[key])
            fail(root, std::string("instance is missing '") + key + "'");

    Plate plate = parse_plate(root["plate"]);
    Extruder extruder = parse_extruder(root["extruder"]);
    SolverParams params = root["params"] ? parse_params(root["params"]) : SolverParams{};

    const YAML::Node objs = root["objects"];
    if (!objs.IsSequence() || objs.size() == 0)
        fail(objs, "objects must be a non-empty list");
    std::vector<std::string> warnings;
    std::vector<PrintObject> objects;
    std::set<std::string> seen;
    for (const auto& node : objs) {
        PrintObject obj = parse_object(node, warnings);
        if (!seen.insert(obj.id).second)
            fail(node["id"], "duplicate object id '" + obj.id + "'");
        objects.push_back(std::move(obj));
    }

    Instance instance{std::move(plate), std::move(extruder), std::move(objects), std::move(params), std::move(warnings)};
    instance.validate();
    return instance;
}

Instance load_instance(const std::filesystem::path& path)
{
    return parse_instance(read_text_file(path));
}

std::string print_instance(const Instance& instance)
{
    YAML::Emitter out;
    out << YAML::BeginMap;

    out << YAML::Key << "plate" << YAML::Value << YAML::BeginMap;
    out << YAML::Key << "polygon" << YAML::Value;
    emit_points(out, instance.plate.polygon());
    const Point2& c = instance.plate.center();
    out << YAML::Key << "center" << YAML::Value << YAML::Flow << YAML::BeginSeq << c.x.str() << c.y.str()
        << YAML::EndSeq;
    out << YAML::EndMap;

    out << YAML::Key << "extruder" << YAML::Value << YAML::BeginMap;
    out << YAML::Key << "polygon" << YAML::Value;
    emit_points(out, instance.extruder.footprint());
    out << YAML::EndMap;

    out << YAML::Key << "objects" << YAML::Value << YAML::BeginSeq;
    for (const PrintObject& obj : instance.objects) {
        out << YAML::BeginMap;
        out << YAML::Key << "id" << YAML::Value << obj.id;
        if (obj.source_points.empty()) {
            out << YAML::Key << "footprint" << YAML::Value;
            emit_points(out, obj.footprint);
        } else {
            out << YAML::Key << "points3d" << YAML::Value << YAML::Flow << YAML::BeginSeq;
            for (const Point3& p : obj.source_points)
                out << YAML::Flow << YAML::BeginSeq << p.x.str() << p.y.str() << p.z.str() << YAML::EndSeq;
            out << YAML::EndSeq;
        }
        if (obj.height)
            out << YAML::Key << "height" << YAML::Value << obj.height->str();
        out << YAML::EndMap;
    }
    out << YAML::EndSeq;

    const SolverParams& p = instance.params;
    out << YAML::Key << "params" << YAML::Value << YAML::BeginMap;
    out << YAML::Key << "epsilon_t" << YAML::Value << p.epsilon_t.str();
    out << YAML::Key << "epsilon_xy" << YAML::Value << p.epsilon_xy.str();
    out << YAML::Key << "timeout_ms" << YAML::Value << p.timeout_ms;
    out << YAML::Key << "mode" << YAML::Value << to_string(p.mode);
    out << YAML::Key << "optimize_sigma" << YAML::Value << (p.optimize_sigma ? "true" : "false");
    out << YAML::EndMap;

    out << YAML::EndMap;
    return std::string(out.c_str()) + "\n";
}

Solution make_solution(const Instance& instance, const SolveOutcome& outcome, const std::vector<std::string>& command)
{
    if (outcome.status != SolveStatus::Sat || !outcome.placement)
        throw std::invalid_argument("a solution file needs a SAT outcome");
    Solution s;
    s.status = SolveStatus::Sat;
    s.mode = instance.params.mode;
    s.solver_command = join(command);
    s.solver_version = outcome.solver_version;
    SolutionPlate plate;
    for (const PrintObject& obj : instance.objects)
        plate.ids.push_back(obj.id);
    plate.placement = *outcome.placement;
    plate.sigma = outcome.sigma_star.value_or(Rat(1));
    plate.sigma_lo = outcome.sigma_lo;
    plate.partial = outcome.partial;
    plate.stats = outcome.stats;
    s.plates.push_back(std::move(plate));
    return s;
}

Solution make_solution(const Instance& instance, const std::vector<PlateAssignment>& plates,
                       const std::vector<std::string>& command)
{
    Solution s;
    s.status = SolveStatus::Sat;
    s.mode = instance.params.mode;
    s.solver_command = join(command);
    for (const PlateAssignment& pa : plates) {
        if (pa.outcome.status != SolveStatus::Sat || !pa.outcome.placement)
            throw std::invalid_argument("every plate of a solution file needs a SAT outcome");
        if (s.solver_version.empty())
            s.solver_version = pa.outcome.solver_version;
        SolutionPlate plate;
        plate.index = pa.plate_index;
        for (std::size_t i : pa.objects)
            plate.ids.push_back(instance.objects.at(i).id);
        plate.placement = *pa.outcome.placement;
        plate.sigma = pa.outcome.sigma_star.value_or(Rat(1));
        plate.sigma_lo = pa.outcome.sigma_lo;
        plate.partial = pa.outcome.partial;
        plate.stats = pa.outcome.stats;
        s.plates.push_back(std::move(plate));
    }
    return s;
}

std::string print_solution(const Solution& solution, const Instance& instance)
{
    YAML::Emitter out;
    out << YAML::BeginMap;
    out << YAML::Key << "status" << YAML::Value << to_string(solution.status);
    out << YAML::Key << "mode" << YAML::Value << to_string(solution.mode);
    out << YAML::Key << "solver" << YAML::Value << YAML::BeginMap;
    out << YAML::Key << "command" << YAML::Value << solution.solver_command;
    out << YAML::Key << "version" << YAML::Value << solution.solver_version;
    out << YAML::EndMap;

    out << YAML::Key << "plates" << YAML::Value << YAML::BeginSeq;
    for (const SolutionPlate& plate : solution.plates) {
        out << YAML::BeginMap;
        out << YAML::Key << "index" << YAML::Value << plate.index;
        out << YAML::Key << "sigma" << YAML::Value << plate.sigma.str();
        out << YAML::Key << "sigma_decimal" << YAML::Value << to_decimal(plate.sigma);
        out << YAML::Key << "sigma_lo" << YAML::Value << plate.sigma_lo.str();
        out << YAML::Key << "partial" << YAML::Value << (plate.partial ? "true" : "false");

        out << YAML::Key << "order" << YAML::Value << YAML::Flow << YAML::BeginSeq;
        for (std::size_t i : permutation_of(plate.placement, instance.params.epsilon_t))
            out << plate.ids.at(i);
        out << YAML::EndSeq;

        out << YAML::Key << "objects" << YAML::Value << YAML::BeginSeq;
        for (std::size_t i = 0; i < plate.ids.size(); ++i) {
            const ObjectPlacement& p = plate.placement.positions.at(i);
            out << YAML::BeginMap;
            out << YAML::Key << "id" << YAML::Value << plate.ids[i];
            out << YAML::Key << "x" << YAML::Value << p.x.str();
            out << YAML::Key << "y" << YAML::Value << p.y.str();
            out << YAML::Key << "t" << YAML::Value << p.t.str();
            out << YAML::Key << "x_decimal" << YAML::Value << to_decimal(p.x);
            out << YAML::Key << "y_decimal" << YAML::Value << to_decimal(p.y);
            out << YAML::EndMap;
        }
        out << YAML::EndSeq;
        emit_stats(out, plate.stats);
        out << YAML::EndMap;
    }
    out << YAML::EndSeq;
    out << YAML::EndMap;
    return std::string(out.c_str()) + "\n";
}

Solution parse_solution(std::string_view text)
{
    const YAML::Node root = load_yaml(text);
    if (!root.IsMap())
        throw ParseError("solution document must be a mapping", 1, 1);
    check_keys(root, {"status", "mode", "solver", "plates"}, "solution");
    if (!root["plates"])
        fail(root, "solution is missing 'plates'");

    Solution s;
    if (const YAML::Node n = root["status"])
        s.status = parse_status(n);
    if (const YAML::Node n = root["mode"]) {
        try {
            s.mode = parse_mode(string_of(n, "mode"));
        } catch (const Error& e) {
            fail(n, e.what());
        }
    }
    if (const YAML::Node n = root["solver"]) {
        check_keys(n, {"command", "version"}, "solver");
        if (n["command"])
            s.solver_command = string_of(n["command"], "solver command");
        if (n["version"])
            s.solver_version = string_of(n["version"], "solver version");
    }

    const YAML::Node plates = root["plates"];
    if (!plates.IsSequence())
        fail(plates, "plates must be a list");
    for (const auto& pn : plates) {
        check_keys(pn, {"index", "sigma", "sigma_decimal", "sigma_lo", "partial", "order", "objects", "stats"},
                   "plate");
        SolutionPlate plate;
        plate.index = s.plates.size();
        if (pn["index"])
            plate.index = static_cast<std::size_t>(int_of(pn["index"], "plate index"));
        if (pn["sigma"])
            plate.sigma = rat_of(pn["sigma"], "sigma");
        if (pn["sigma_lo"])
            plate.sigma_lo = rat_of(pn["sigma_lo"], "sigma_lo");
        if (pn["partial"])
            plate.partial = bool_of(pn["partial"], "partial");
        if (pn["stats"])
            plate.stats = parse_stats(pn["stats"]);

        const YAML::Node objs = pn["objects"];
        if (!objs || !objs.IsSequence())
            fail(pn, "plate needs an 'objects' list");
        std::set<std::string> seen;
        for (const auto& on : objs) {
            check_keys(on, {"id", "x", "y", "t", "x_decimal", "y_decimal"}, "placed object");
            for (const char* key : {"id", "x", "y", "t"})
                if (!on[key])
                    fail(on, std::string("placed object is missing '") + key + "'");
            const std::string id = string_of(on["id"], "id");
            if (!seen.insert(id).second)
                fail(on["id"], "object '" + id + "' listed twice on one plate");
            plate.ids.push_back(id);
            plate.placement.positions.push_back(
                {rat_of(on["x"], "x of '" + id + "'"), rat_of(on["y"], "y of '" + id + "'"),
                 rat_of(on["t"], "t of '" + id + "'")});
        }
        s.plates.push_back(std::move(plate));
    }
    return s;
}

Solution load_solution(const std::filesystem::path& path)
{
    return parse_solution(read_text_file(path));
}

std::vector<std::size_t> resolve_ids(const Instance& instance, const SolutionPlate& plate)
{
    std::map<std::string, std::size_t> index;
    for (std::size_t i = 0; i < instance.objects.size(); ++i)
        index.emplace(instance.objects[i].id, i);
    std::vector<std::size_t> out;
    for (const std::string& id : plate.ids) {
        auto it = index.find(id);
        if (it == index.end())
            throw MissingPlacement("solution places unknown object '" + id + "'");
        out.push_back(it->second);
    }
    return out;
}

void write_text_file(const std::filesystem::path& path, std::string_view text)
{
    std::ofstream f(path, std::ios::binary);
    if (!f)
        throw Error("cannot open '" + path.string() + "' for writing");
    f << text;
    if (!f)
        throw Error("failed writing '" + path.string() + "'");
}

std::string read_text_file(const std::filesystem::path& path)
{
    std::ifstream f(path, std::ios::binary);
    if (!f)
        throw Error("cannot read '" + path.string() + "'");
    std::ostringstream ss;
    ss << f.rdbuf();
    return ss.str();
}

} // namespace seqpack
