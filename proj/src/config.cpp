#include "boussinesq/config.hpp"

#include <cmath>
#include <fstream>
#include <map>
#include <numbers>
#include <set>
#include <sstream>

#include <boost/property_tree/ini_parser.hpp>
#include <boost/property_tree/ptree.hpp>

namespace boussinesq {

namespace {

namespace pt = boost::property_tree;

double parse_double(const std::string& text, const std::string& what)
{
    try {
        std::size_t used = 0;
        const double v = std::stod(text, &used);
        if (used != text.size()) throw std::invalid_argument(text);
        return v;
    } catch (const std::exception&) {
        throw ConfigError(what + ": cannot parse '" + text + "' as a number");
    }
}

int parse_int(const std::string& text, const std::string& what)
{
    const double v = parse_double(text, what);
    if (v != std::floor(v) || std::abs(v) > 1e9) throw ConfigError(what + ": '" + text + "' is not an integer");
    return static_cast<int>(v);
}

bool parse_bool(const std::string& text, const std::string& what)
{
    if (text == "true" || text == "1" || text == "yes") return true;
    if (text == "false" || text == "0" || text == "no") return false;
    throw ConfigError(what + ": expected true or false, got '" + text + "'");
}

template <class T, class F>
std::vector<T> parse_list(const std::string& text, const std::string& what, F&& one)
{
    std::vector<T> out;
    std::stringstream ss(text);
    std::string item;
    while (std::getline(ss, item, ',')) {
        item.erase(0, item.find_first_not_of(" \t"));
        item.erase(item.find_last_not_of(" \t") + 1);
        if (!item.empty()) out.push_back(one(item, what));
    }
    if (out.empty()) throw ConfigError(what + ": empty list");
    return out;
}

std::pair<std::string, std::string> split_spec(const std::string& spec)
{
    const auto colon = spec.find(':');
    if (colon == std::string::npos) return {spec, ""};
    return {spec.substr(0, colon), spec.substr(colon + 1)};
}

using Setter = void (*)(ExperimentConfig&, const std::string&, const std::string&);

const std::map<std::string, std::map<std::string, Setter>>& setters()
{
    static const std::map<std::string, std::map<std::string, Setter>> table{
        {"problem",
         {
             {"preset", [](ExperimentConfig&, const std::string&, const std::string&) {}},
             {"horizon", [](ExperimentConfig& c, const std::string& v, const std::string& w) { c.horizon = parse_double(v, w); }},
         }},
        {"params",
         {
             {"viscosity", [](ExperimentConfig& c, const std::string& v, const std::string& w) { c.params.viscosity = parse_double(v, w); }},
             {"diffusivity", [](ExperimentConfig& c, const std::string& v, const std::string& w) { c.params.diffusivity = parse_double(v, w); }},
             {"buoyancy", [](ExperimentConfig& c, const std::string& v, const std::string& w) { c.params.buoyancy = parse_double(v, w); }},
             {"gravity_x", [](ExperimentConfig& c, const std::string& v, const std::string& w) { c.params.gravity.x() = parse_double(v, w); }},
             {"gravity_y", [](ExperimentConfig& c, const std::string& v, const std::string& w) { c.params.gravity.y() = parse_double(v, w); }},
             {"robin_gamma", [](ExperimentConfig& c, const std::string& v, const std::string& w) { c.params.robin_gamma = parse_double(v, w); }},
             {"robin_eta", [](ExperimentConfig& c, const std::string& v, const std::string& w) { c.params.robin_eta = parse_double(v, w); }},
             {"alpha", [](ExperimentConfig& c, const std::string& v, const std::string& w) { c.params.alpha = parse_double(v, w); }},
             {"lower", [](ExperimentConfig& c, const std::string& v, const std::string& w) { c.params.lower = parse_double(v, w); }},
             {"upper", [](ExperimentConfig& c, const std::string& v, const std::string& w) { c.params.upper = parse_double(v, w); }},
         }},
        {"data",
         {
             {"body_force", [](ExperimentConfig& c, const std::string& v, const std::string&) { c.body_force = v; }},
             {"heat_source", [](ExperimentConfig& c, const std::string& v, const std::string&) { c.heat_source = v; }},
             {"target_velocity", [](ExperimentConfig& c, const std::string& v, const std::string&) { c.target_velocity = v; }},
             {"target_temperature", [](ExperimentConfig& c, const std::string& v, const std::string&) { c.target_temperature = v; }},
             {"initial_velocity", [](ExperimentConfig& c, const std::string& v, const std::string&) { c.initial_velocity = v; }},
             {"initial_temperature", [](ExperimentConfig& c, const std::string& v, const std::string&) { c.initial_temperature = v; }},
             {"control", [](ExperimentConfig& c, const std::string& v, const std::string&) { c.control = v; }},
         }},
        {"grid",
         {
             {"mesh_level", [](ExperimentConfig& c, const std::string& v, const std::string& w) { c.mesh_level = parse_int(v, w); }},
             {"steps", [](ExperimentConfig& c, const std::string& v, const std::string& w) { c.steps = parse_int(v, w); }},
             {"grading", [](ExperimentConfig& c, const std::string& v, const std::string& w) { c.grading = parse_double(v, w); }},
             {"eps0", [](ExperimentConfig& c, const std::string& v, const std::string& w) { c.bounds.eps0 = parse_double(v, w); }},
             {"eps1", [](ExperimentConfig& c, const std::string& v, const std::string& w) { c.bounds.eps1 = parse_double(v, w); }},
         }},
        {"solver",
         {
             {"tolerance", [](ExperimentConfig& c, const std::string& v, const std::string& w) { c.solver_tol = parse_double(v, w); }},
             {"threads", [](ExperimentConfig& c, const std::string& v, const std::string& w) { c.threads = parse_int(v, w); }},
         }},
        {"optimizer",
         {
             {"tol", [](ExperimentConfig& c, const std::string& v, const std::string& w) { c.opt_tol = parse_double(v, w); }},
             {"max_iter", [](ExperimentConfig& c, const std::string& v, const std::string& w) { c.max_iter = parse_int(v, w); }},
         }},
        {"study",
         {
             {"kind",
              [](ExperimentConfig& c, const std::string& v, const std::string& w) {
                  if (v == "spatial") c.study_kind = StudyKind::Spatial;
                  else if (v == "temporal") c.study_kind = StudyKind::Temporal;
                  else throw ConfigError(w + ": expected spatial or temporal, got '" + v + "'");
              }},
             {"levels", [](ExperimentConfig& c, const std::string& v, const std::string& w) { c.study_levels = parse_list<int>(v, w, parse_int); }},
             {"step_counts", [](ExperimentConfig& c, const std::string& v, const std::string& w) { c.study_step_counts = parse_list<int>(v, w, parse_int); }},
             {"reference_level", [](ExperimentConfig& c, const std::string& v, const std::string& w) { c.study_reference_level = parse_int(v, w); }},
             {"reference_steps", [](ExperimentConfig& c, const std::string& v, const std::string& w) { c.study_reference_steps = parse_int(v, w); }},
             {"mesh_level", [](ExperimentConfig& c, const std::string& v, const std::string& w) { c.study_mesh_level = parse_int(v, w); }},
             {"steps", [](ExperimentConfig& c, const std::string& v, const std::string& w) { c.study_steps = parse_int(v, w); }},
         }},
        {"gradient_check",
         {
             {"epsilons", [](ExperimentConfig& c, const std::string& v, const std::string& w) { c.epsilons = parse_list<double>(v, w, parse_double); }},
             {"seed", [](ExperimentConfig& c, const std::string& v, const std::string& w) { c.seed = static_cast<unsigned>(parse_int(v, w)); }},
         }},
        {"output",
         {
             {"directory", [](ExperimentConfig& c, const std::string& v, const std::string&) { c.output_dir = v; }},
             {"vtk", [](ExperimentConfig& c, const std::string& v, const std::string& w) { c.vtk = parse_bool(v, w); }},
         }},
    };
    return table;
}

void check_levels(int level, const std::string& what)
{
    if (level < 0 || level > 10) throw ConfigError(what + " must lie in [0, 10]");
}

}  // namespace

ScalarData make_scalar_data(const std::string& spec)
{
    const auto [name, arg] = split_spec(spec);
    if (name == "zero" && arg.empty()) return {};
    if (name == "constant") return ScalarData::constant(parse_double(arg, "constant data"));
    if (name == "sine") {
        const double a = parse_double(arg, "sine data");
        return {[a](double t, const Point& x) {
                    return a * (1.0 + t) * std::sin(std::numbers::pi * x.x()) * std::sin(std::numbers::pi * x.y());
                },
                false};
    }
    throw ConfigError("unknown scalar data '" + spec + "'");
}

VectorData make_vector_data(const std::string& spec)
{
    const auto [name, arg] = split_spec(spec);
    if (name == "zero" && arg.empty()) return {};
    if (name == "benchmark-target" && arg.empty()) return VectorData::stationary(benchmark_target_velocity);
    if (name == "vortex") {
        const double a = parse_double(arg, "vortex data");
        return VectorData::stationary([a](const Point& x) { return Eigen::Vector2d(a * benchmark_target_velocity(x)); });
    }
    if (name == "constant") {
        const auto v = parse_list<double>(arg, "constant vector data", parse_double);
        if (v.size() != 2) throw ConfigError("constant vector data needs two components");
        return VectorData::constant(Eigen::Vector2d(v[0], v[1]));
    }
    throw ConfigError("unknown vector data '" + spec + "'");
}

void ExperimentConfig::validate() const
{
    try {
        params.validate();
    } catch (const std::invalid_argument& e) {
        throw ConfigError(std::string("params: ") + e.what());
    }
    if (!(horizon > 0.0)) throw ConfigError("problem.horizon must be positive");
    check_levels(mesh_level, "grid.mesh_level");
    if (steps < 1) throw ConfigError("grid.steps must be at least 1");
    if (!(grading > 0.0)) throw ConfigError("grid.grading must be positive");
    if (!(solver_tol > 0.0 && solver_tol < 1.0)) throw ConfigError("solver.tolerance must lie in (0, 1)");
    if (!(opt_tol > 0.0)) throw ConfigError("optimizer.tol must be positive");
    if (max_iter < 1) throw ConfigError("optimizer.max_iter must be at least 1");
    if (threads < 1) throw ConfigError("threads must be at least 1");
    for (double e : epsilons) {
        if (!(e > 0.0)) throw ConfigError("gradient_check.epsilons must be positive");
    }
    for (int l : study_levels) check_levels(l, "study.levels");
    check_levels(study_reference_level, "study.reference_level");
    check_levels(study_mesh_level, "study.mesh_level");
    for (int n : study_step_counts) {
        if (n < 1 || study_reference_steps % n != 0) throw ConfigError("study.step_counts must divide study.reference_steps");
    }
    for (int l : study_levels) {
        if (l >= study_reference_level) throw ConfigError("study.levels must be coarser than study.reference_level");
    }
    make_vector_data(body_force);
    make_scalar_data(heat_source);
    make_vector_data(target_velocity);
    make_scalar_data(target_temperature);
    make_vector_data(initial_velocity);
    make_scalar_data(initial_temperature);
    make_scalar_data(control);
    try {
        time_grid();
    } catch (const std::invalid_argument& e) {
        throw ConfigError(std::string("grid: ") + e.what());
    }
}

ProblemData ExperimentConfig::problem_data() const
{
    ProblemData d;
    d.body_force = make_vector_data(body_force);
    d.heat_source = make_scalar_data(heat_source);
    d.target_velocity = make_vector_data(target_velocity);
    d.target_temperature = make_scalar_data(target_temperature);
    if (const VectorData y0 = make_vector_data(initial_velocity); !y0.is_zero()) {
        d.initial_velocity = [y0](const Point& x) { return y0(0.0, x); };
    }
    if (const ScalarData t0 = make_scalar_data(initial_temperature); !t0.is_zero()) {
        d.initial_temperature = [t0](const Point& x) { return t0(0.0, x); };
    }
    d.horizon = horizon;
    return d;
}

TimeGrid ExperimentConfig::time_grid() const
{
    return TimeGrid::graded(horizon, steps, grading, bounds);
}

StudySetup ExperimentConfig::study_setup() const
{
    StudySetup s;
    s.kind = study_kind;
    s.params = params;
    s.data = problem_data();
    s.levels = study_levels;
    s.step_counts = study_step_counts;
    s.mesh_level = study_mesh_level;
    s.steps = study_steps;
    s.reference_level = study_reference_level;
    s.reference_steps = study_reference_steps;
    s.grading = grading;
    s.tol = opt_tol;
    s.max_iter = max_iter;
    s.threads = threads;
    return s;
}

ExperimentConfig preset_config(const std::string& name)
{
    if (name != "paper-sec5") throw ConfigError("unknown preset '" + name + "'");
    ExperimentConfig c;
    c.preset = name;
    c.params = benchmark_params();
    c.horizon = 1.0;
    c.target_velocity = "benchmark-target";
    return c;
}

ExperimentConfig parse_config(std::istream& in)
{
    pt::ptree tree;
    try {
        pt::read_ini(in, tree);
    } catch (const pt::ini_parser_error& e) {
        throw ConfigError(std::string("config: ") + e.what());
    }
    ExperimentConfig c;
    if (const auto preset = tree.get_optional<std::string>("problem.preset")) c = preset_config(*preset);
    const auto& table = setters();
    for (const auto& [section, entries] : tree) {
        const auto sec = table.find(section);
        if (sec == table.end()) throw ConfigError("config: unknown section [" + section + "]");
        if (!entries.data().empty()) throw ConfigError("config: top-level key '" + section + "' outside a section");
        for (const auto& [key, value] : entries) {
            const auto it = sec->second.find(key);
            if (it == sec->second.end()) throw ConfigError("config: unknown key '" + key + "' in [" + section + "]");
            it->second(c, value.data(), section + "." + key);
        }
    }
    return c;
}

ExperimentConfig load_config(const std::string& path)
{
    std::ifstream in(path);
    if (!in) throw ConfigError("config: cannot open '" + path + "'");
    return parse_config(in);
}

}  // namespace boussinesq
