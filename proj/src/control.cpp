#include "boussinesq/control.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>

namespace boussinesq {

namespace {

double lerp(const Eigen::VectorXd& v, int a, int b, double s)
{
    return (1.0 - s) * v[a] + s * v[b];
}

double slice_value(const ControlSlice& slice, int a, int b, double s, double lower, double upper)
{
    double value = lerp(slice.linear, a, b, s);
    for (const auto& term : slice.clamped) value += term.scale * clamp_value(lerp(term.argument, a, b, s), lower, upper);
    return value;
}

// Parameters in (0, 1) where some clamped argument of the slice meets a bound.
void add_breakpoints(const ControlSlice& slice, int a, int b, double lower, double upper, std::vector<double>& out)
{
    for (const auto& term : slice.clamped) {
        const double v0 = term.argument[a], v1 = term.argument[b];
        if (v0 == v1) continue;
        for (double bound : {lower, upper}) {
            if (!std::isfinite(bound)) continue;
            const double s = (bound - v0) / (v1 - v0);
            if (s > 0.0 && s < 1.0) out.push_back(s);
        }
    }
}

// int_0^1 f(s) ds for f polynomial of degree <= 5 between consecutive breakpoints.
template <class F>
double integrate_unit(std::vector<double>& breaks, F&& f)
{
    breaks.push_back(0.0);
    breaks.push_back(1.0);
    std::sort(breaks.begin(), breaks.end());
    const LineRule& rule = gauss_legendre(kEdgePoints);
    double sum = 0.0;
    for (std::size_t k = 0; k + 1 < breaks.size(); ++k) {
        const double s0 = breaks[k], len = breaks[k + 1] - breaks[k];
        if (len <= 0.0) continue;
        for (std::size_t q = 0; q < rule.points.size(); ++q) sum += len * rule.weights[q] * f(s0 + len * rule.points[q]);
    }
    return sum;
}

void check_compatible(const ControlField& u, const ControlField& v)
{
    if (u.trace_ptr() != v.trace_ptr() || u.steps() != v.steps() || u.lower() != v.lower() ||
        u.upper() != v.upper()) {
        throw std::invalid_argument("control fields differ in trace, bounds or interval count");
    }
}

}  // namespace

double clamp_value(double v, double lower, double upper)
{
    return std::min(std::max(v, lower), upper);
}

ControlField::ControlField(std::shared_ptr<const BoundaryTrace> trace, double lower, double upper,
                           std::vector<ControlSlice> slices)
    : trace_(std::move(trace)), lower_(lower), upper_(upper), slices_(std::move(slices))
{
    if (!trace_) throw std::invalid_argument("ControlField: missing boundary trace");
    if (!(lower_ < upper_)) throw std::invalid_argument("ControlField: bounds must satisfy lower < upper");
    const int nb = trace_->size();
    for (const auto& s : slices_) {
        bool ok = s.linear.size() == nb;
        for (const auto& term : s.clamped) ok = ok && term.argument.size() == nb;
        if (!ok) throw std::invalid_argument("ControlField: slice length does not match the boundary trace");
    }
}

ControlField ControlField::zero(std::shared_ptr<const BoundaryTrace> trace, int steps, double lower, double upper)
{
    const int nb = trace ? trace->size() : 0;
    std::vector<ControlSlice> slices(static_cast<std::size_t>(steps), ControlSlice{Eigen::VectorXd::Zero(nb), {}});
    return ControlField(std::move(trace), lower, upper, std::move(slices));
}

ControlField ControlField::raw(std::shared_ptr<const BoundaryTrace> trace, double lower, double upper,
                               std::vector<Eigen::VectorXd> traces)
{
    std::vector<ControlSlice> slices;
    slices.reserve(traces.size());
    for (auto& t : traces) slices.push_back({std::move(t), {}});
    return ControlField(std::move(trace), lower, upper, std::move(slices));
}

ControlField ControlField::clamped(std::shared_ptr<const BoundaryTrace> trace, double lower, double upper,
                                   std::vector<Eigen::VectorXd> arguments)
{
    const int nb = trace ? trace->size() : 0;
    std::vector<ControlSlice> slices;
    slices.reserve(arguments.size());
    for (auto& a : arguments) slices.push_back({Eigen::VectorXd::Zero(nb), {ClampedTerm{1.0, std::move(a)}}});
    return ControlField(std::move(trace), lower, upper, std::move(slices));
}

bool ControlField::is_raw() const
{
    return std::all_of(slices_.begin(), slices_.end(), [](const ControlSlice& s) { return s.clamped.empty(); });
}

double ControlField::value(int n, int edge, double s) const
{
    const auto& e = trace_->edges().at(static_cast<std::size_t>(edge));
    return slice_value(slice(n), e.a, e.b, s, lower_, upper_);
}

double ControlField::vertex_value(int n, int trace_vertex) const
{
    return slice_value(slice(n), trace_vertex, trace_vertex, 0.0, lower_, upper_);
}

ControlField combine(double a, const ControlField& u, double b, const ControlField& v)
{
    check_compatible(u, v);
    std::vector<ControlSlice> slices;
    slices.reserve(static_cast<std::size_t>(u.steps()));
    for (int n = 1; n <= u.steps(); ++n) {
        const ControlSlice& su = u.slice(n);
        const ControlSlice& sv = v.slice(n);
        ControlSlice s{a * su.linear + b * sv.linear, {}};
        for (const auto& t : su.clamped) {
            if (a != 0.0) s.clamped.push_back({a * t.scale, t.argument});
        }
        for (const auto& t : sv.clamped) {
            if (b != 0.0) s.clamped.push_back({b * t.scale, t.argument});
        }
        slices.push_back(std::move(s));
    }
    return ControlField(u.trace_ptr(), u.lower(), u.upper(), std::move(slices));
}

ControlField project_control(const ControlField& u)
{
    if (u.is_raw()) {
        std::vector<Eigen::VectorXd> args;
        for (const auto& s : u.slices()) args.push_back(s.linear);
        return ControlField::clamped(u.trace_ptr(), u.lower(), u.upper(), std::move(args));
    }
    for (const auto& s : u.slices()) {
        const bool projected = (s.clamped.empty() && s.linear.size() > 0 &&
                                (s.linear.array() >= u.lower()).all() && (s.linear.array() <= u.upper()).all()) ||
                               (s.clamped.size() == 1 && s.clamped[0].scale == 1.0 && s.linear.isZero(0.0));
        if (!projected) throw std::invalid_argument("project_control: field is neither raw nor projected");
    }
    return u;
}

Eigen::VectorXd boundary_load(const ControlField& u, int n)
{
    const BoundaryTrace& trace = u.trace();
    const ControlSlice& slice = u.slice(n);
    Eigen::VectorXd load = Eigen::VectorXd::Zero(trace.size());
    std::vector<double> breaks;
    for (const auto& e : trace.edges()) {
        if (slice.clamped.empty()) {
            load[e.a] += e.length * (2.0 * slice.linear[e.a] + slice.linear[e.b]) / 6.0;
            load[e.b] += e.length * (slice.linear[e.a] + 2.0 * slice.linear[e.b]) / 6.0;
            continue;
        }
        breaks.clear();
        add_breakpoints(slice, e.a, e.b, u.lower(), u.upper(), breaks);
        std::vector<double> copy = breaks;
        load[e.a] += e.length * integrate_unit(breaks, [&](double s) {
            return slice_value(slice, e.a, e.b, s, u.lower(), u.upper()) * (1.0 - s);
        });
        load[e.b] += e.length * integrate_unit(copy, [&](double s) {
            return slice_value(slice, e.a, e.b, s, u.lower(), u.upper()) * s;
        });
    }
    return load;
}

double boundary_inner(const ControlField& u, const ControlField& v, int n)
{
    check_compatible(u, v);
    const ControlSlice& su = u.slice(n);
    const ControlSlice& sv = v.slice(n);
    double sum = 0.0;
    std::vector<double> breaks;
    for (const auto& e : u.trace().edges()) {
        breaks.clear();
        add_breakpoints(su, e.a, e.b, u.lower(), u.upper(), breaks);
        add_breakpoints(sv, e.a, e.b, u.lower(), u.upper(), breaks);
        sum += e.length * integrate_unit(breaks, [&](double s) {
            return slice_value(su, e.a, e.b, s, u.lower(), u.upper()) *
                   slice_value(sv, e.a, e.b, s, v.lower(), v.upper());
        });
    }
    return sum;
}

double space_time_inner(const ControlField& u, const ControlField& v, const TimeGrid& grid)
{
    if (u.steps() != grid.steps()) throw std::invalid_argument("space_time_inner: grid does not match the control");
    double sum = 0.0;
    for (int n = 1; n <= grid.steps(); ++n) sum += grid.step(n) * boundary_inner(u, v, n);
    return sum;
}

double space_time_distance(const ControlField& u, const ControlField& v, const TimeGrid& grid)
{
    const ControlField d = combine(1.0, u, -1.0, v);
    return std::sqrt(std::max(0.0, space_time_inner(d, d, grid)));
}

}  // namespace boussinesq
