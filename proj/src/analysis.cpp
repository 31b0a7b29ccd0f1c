#include "boussinesq/analysis.hpp"

#include <algorithm>
#include <atomic>
#include <chrono>
#include <cmath>
#include <cstdio>
#include <limits>
#include <memory>
#include <mutex>
#include <ostream>
#include <stdexcept>
#include <thread>

namespace boussinesq {

namespace {

Barycentric barycentric_in(const TriangleGeometry& g, const Point& x)
{
    Barycentric l;
    for (int k = 0; k < 3; ++k) l[k] = 1.0 + g.grad_lambda[k].dot(x - g.vertices[k]);
    return l;
}

bool is_bubble(const FunctionSpace& vel, int dof)
{
    const int stride = vel.component_stride();
    return dof % stride >= vel.mesh().num_vertices();
}

}  // namespace

GridTransfer::GridTransfer(const Discretization& coarse, const Discretization& fine) : coarse_(&coarse), fine_(&fine)
{
    const Mesh& cm = *coarse.spaces.mesh;
    const Mesh& fm = *fine.spaces.mesh;
    if (fm.level < cm.level) throw std::invalid_argument("GridTransfer: the fine mesh is coarser than the coarse mesh");
    const int nf = 1 << fm.level;
    if (fm.num_vertices() != (nf + 1) * (nf + 1) || cm.num_vertices() != ((1 << cm.level) + 1) * ((1 << cm.level) + 1)) {
        throw std::invalid_argument("GridTransfer: meshes are not dyadic unit-square meshes");
    }

    std::vector<Eigen::Triplet<double>> p;
    for (int v = 0; v < fm.num_vertices(); ++v) {
        const TrianglePoint tp = locate_in_unit_square(cm.level, fm.vertices[v]);
        const auto& tri = cm.triangles[static_cast<std::size_t>(tp.triangle)];
        for (int k = 0; k < 3; ++k) {
            if (tp.barycentric[k] != 0.0) p.emplace_back(v, tri[k], tp.barycentric[k]);
        }
    }
    p1_.resize(fm.num_vertices(), cm.num_vertices());
    p1_.setFromTriplets(p.begin(), p.end());

    const FunctionSpace& fv = *fine.spaces.velocity;
    const FunctionSpace& cv = *coarse.spaces.velocity;
    const QuadratureRule& rule = quadrature_rule(kCellDegree);
    std::vector<Eigen::Triplet<double>> xm, xk;
    for (int t = 0; t < fm.num_triangles(); ++t) {
        const auto gf = TriangleGeometry::of(fm, t);
        const Point centroid = gf.map({1.0 / 3.0, 1.0 / 3.0, 1.0 / 3.0});
        const int T = locate_in_unit_square(cm.level, centroid).triangle;
        const auto gc = TriangleGeometry::of(cm, T);
        const auto fd = fv.cell_dofs(t);
        const auto cd = cv.cell_dofs(T);
        Eigen::Vector4d m = Eigen::Vector4d::Zero(), k = Eigen::Vector4d::Zero();
        for (std::size_t q = 0; q < rule.size(); ++q) {
            const double w = rule.weights[q] * gf.area;
            const auto phi = shape::values(rule.points[q]);
            const auto dphi = shape::gradients(rule.points[q], gf);
            const Barycentric lc = barycentric_in(gc, gf.map(rule.points[q]));
            const double b = shape::values(lc)[3];
            const Eigen::Vector2d db = shape::gradients(lc, gc)[3];
            for (int i = 0; i < 4; ++i) {
                m[i] += w * phi[i] * b;
                k[i] += w * dphi[i].dot(db);
            }
        }
        for (int c = 0; c < 2; ++c) {
            for (int i = 0; i < 4; ++i) {
                xm.emplace_back(fd[4 * c + i], cd[4 * c + 3], m[i]);
                xk.emplace_back(fd[4 * c + i], cd[4 * c + 3], k[i]);
            }
        }
    }
    cross_mass_.resize(fv.num_dofs(), cv.num_dofs());
    cross_mass_.setFromTriplets(xm.begin(), xm.end());
    cross_stiffness_.resize(fv.num_dofs(), cv.num_dofs());
    cross_stiffness_.setFromTriplets(xk.begin(), xk.end());
}

Eigen::VectorXd GridTransfer::prolong_scalar(const Eigen::VectorXd& coarse) const
{
    if (coarse.size() != p1_.cols()) throw std::invalid_argument("prolong_scalar: length mismatch");
    return p1_ * coarse;
}

Eigen::VectorXd GridTransfer::prolong_velocity_linear(const Eigen::VectorXd& coarse) const
{
    const FunctionSpace& fv = *fine_->spaces.velocity;
    const FunctionSpace& cv = *coarse_->spaces.velocity;
    if (coarse.size() != cv.num_dofs()) throw std::invalid_argument("prolong_velocity_linear: length mismatch");
    Eigen::VectorXd out = Eigen::VectorXd::Zero(fv.num_dofs());
    const int nfv = fine_->spaces.mesh->num_vertices(), ncv = coarse_->spaces.mesh->num_vertices();
    for (int c = 0; c < 2; ++c) {
        out.segment(c * fv.component_stride(), nfv) = p1_ * coarse.segment(c * cv.component_stride(), ncv);
    }
    return out;
}

Eigen::VectorXd GridTransfer::prolong_trace(const Eigen::VectorXd& coarse) const
{
    const Eigen::VectorXd full = coarse_->spaces.trace->extend(coarse, coarse_->spaces.mesh->num_vertices());
    return fine_->spaces.trace->restrict(p1_ * full);
}

GridTransfer::Squared GridTransfer::scalar_difference(const Eigen::VectorXd& fine, const Eigen::VectorXd& coarse) const
{
    const Eigen::VectorXd d = fine - prolong_scalar(coarse);
    return {d.dot(fine_->ops.scalar_mass * d), d.dot(fine_->ops.scalar_stiffness * d)};
}

GridTransfer::Squared GridTransfer::velocity_difference(const Eigen::VectorXd& fine, const Eigen::VectorXd& coarse) const
{
    const FunctionSpace& cv = *coarse_->spaces.velocity;
    const Eigen::VectorXd d = fine - prolong_velocity_linear(coarse);
    Eigen::VectorXd bubbles = Eigen::VectorXd::Zero(coarse.size());
    for (Eigen::Index i = 0; i < coarse.size(); ++i) {
        if (is_bubble(cv, static_cast<int>(i))) bubbles[i] = coarse[i];
    }
    const double l2 = d.dot(fine_->ops.velocity_mass * d) - 2.0 * d.dot(cross_mass_ * bubbles) +
                      bubbles.dot(coarse_->ops.velocity_mass * bubbles);
    const double h1 = d.dot(fine_->ops.velocity_stiffness * d) - 2.0 * d.dot(cross_stiffness_ * bubbles) +
                      bubbles.dot(coarse_->ops.velocity_stiffness * bubbles);
    return {std::max(l2, 0.0), std::max(h1, 0.0)};
}

TimeTransfer::TimeTransfer(const TimeGrid& coarse, const TimeGrid& fine) : ratio_(fine.refinement_ratio(coarse))
{
    if (ratio_ == 0) throw std::invalid_argument("TimeTransfer: time grids are not nested");
}

ControlField prolong_control(const ControlField& coarse, const GridTransfer& space, const TimeTransfer& time)
{
    const Discretization& fine = space.fine();
    if (coarse.trace().size() != space.coarse().spaces.trace->size() || coarse.steps() != space.coarse().grid.steps()) {
        throw std::invalid_argument("prolong_control: control does not live on the coarse discretization");
    }
    std::vector<ControlSlice> slices;
    for (int j = 1; j <= fine.grid.steps(); ++j) {
        const ControlSlice& s = coarse.slice(time.coarse_interval(j));
        ControlSlice out{space.prolong_trace(s.linear), {}};
        for (const auto& term : s.clamped) out.clamped.push_back({term.scale, space.prolong_trace(term.argument)});
        slices.push_back(std::move(out));
    }
    return ControlField(fine.spaces.trace, coarse.lower(), coarse.upper(), std::move(slices));
}

SpaceTimeNorms space_time_norms(const std::vector<Eigen::VectorXd>& values, const SparseMatrix& mass,
                                const SparseMatrix& stiffness, const TimeGrid& grid)
{
    if (static_cast<int>(values.size()) != grid.steps()) throw std::invalid_argument("space_time_norms: need one value per interval");
    SpaceTimeNorms norms;
    for (int n = 1; n <= grid.steps(); ++n) {
        const auto& v = values[n - 1];
        if (v.size() != mass.rows() || v.size() != stiffness.rows()) {
            throw std::invalid_argument("space_time_norms: dimension mismatch");
        }
        const double m = v.dot(mass * v), k = v.dot(stiffness * v);
        norms.linf_l2 = std::max(norms.linf_l2, std::sqrt(std::max(m, 0.0)));
        norms.l2_l2 += grid.step(n) * m;
        norms.l2_h1 += grid.step(n) * (m + k);
    }
    norms.l2_l2 = std::sqrt(std::max(norms.l2_l2, 0.0));
    norms.l2_h1 = std::sqrt(std::max(norms.l2_h1, 0.0));
    return norms;
}

ErrorReport compare_to_reference(const OptimalPair& coarse, const OptimalPair& reference)
{
    const Discretization& cd = *coarse.disc;
    const Discretization& fd = *reference.disc;
    const OptResult& cr = *coarse.result;
    const OptResult& fr = *reference.result;
    const GridTransfer space(cd, fd);
    const TimeTransfer time(cd.grid, fd.grid);

    struct Accumulator {
        SpaceTimeNorms n;
        void add(double tau, const GridTransfer::Squared& s)
        {
            n.linf_l2 = std::max(n.linf_l2, std::sqrt(s.l2));
            n.l2_l2 += tau * s.l2;
            n.l2_h1 += tau * (s.l2 + s.h1_semi);
        }
        SpaceTimeNorms done() const { return {n.linf_l2, std::sqrt(n.l2_l2), std::sqrt(n.l2_h1)}; }
    } y, th, mu, ka;

    for (int j = 1; j <= fd.grid.steps(); ++j) {
        const int J = time.coarse_interval(j);
        const double tau = fd.grid.step(j);
        y.add(tau, space.velocity_difference(fr.state.velocity[j], cr.state.velocity[J]));
        th.add(tau, space.scalar_difference(fr.state.temperature[j], cr.state.temperature[J]));
        mu.add(tau, space.velocity_difference(fr.adjoint.velocity[j - 1], cr.adjoint.velocity[J - 1]));
        ka.add(tau, space.scalar_difference(fr.adjoint.temperature[j - 1], cr.adjoint.temperature[J - 1]));
    }

    ErrorReport r;
    r.mesh_level = cd.spaces.mesh->level;
    r.steps = cd.grid.steps();
    r.mesh_size = cd.spaces.mesh->diameter();
    r.max_step = cd.grid.max_step();
    r.velocity = y.done();
    r.temperature = th.done();
    r.adjoint_velocity = mu.done();
    r.adjoint_temperature = ka.done();
    r.control = space_time_distance(prolong_control(cr.control, space, time), fr.control, fd.grid);
    return r;
}

const std::vector<ErrorColumn>& table_columns()
{
    static const std::vector<ErrorColumn> columns{
        {"y_Linf_L2", [](const ErrorReport& r) { return r.velocity.linf_l2; }},
        {"theta_Linf_L2", [](const ErrorReport& r) { return r.temperature.linf_l2; }},
        {"y_L2_H1", [](const ErrorReport& r) { return r.velocity.l2_h1; }},
        {"theta_L2_H1", [](const ErrorReport& r) { return r.temperature.l2_h1; }},
        {"mu_Linf_L2", [](const ErrorReport& r) { return r.adjoint_velocity.linf_l2; }},
        {"kappa_Linf_L2", [](const ErrorReport& r) { return r.adjoint_temperature.linf_l2; }},
        {"mu_L2_H1", [](const ErrorReport& r) { return r.adjoint_velocity.l2_h1; }},
        {"kappa_L2_H1", [](const ErrorReport& r) { return r.adjoint_temperature.l2_h1; }},
        {"u_L2_L2Gamma", [](const ErrorReport& r) { return r.control; }},
    };
    return columns;
}

const std::vector<ErrorColumn>& all_columns()
{
    static const std::vector<ErrorColumn> columns = [] {
        std::vector<ErrorColumn> c = table_columns();
        c.push_back({"y_L2_L2", [](const ErrorReport& r) { return r.velocity.l2_l2; }});
        c.push_back({"theta_L2_L2", [](const ErrorReport& r) { return r.temperature.l2_l2; }});
        c.push_back({"mu_L2_L2", [](const ErrorReport& r) { return r.adjoint_velocity.l2_l2; }});
        c.push_back({"kappa_L2_L2", [](const ErrorReport& r) { return r.adjoint_temperature.l2_l2; }});
        return c;
    }();
    return columns;
}

EocTable eoc(const std::string& name, const std::vector<double>& errors, const std::vector<double>& parameters)
{
    if (errors.size() < 2 || errors.size() != parameters.size()) {
        throw std::invalid_argument("eoc: need at least two errors and one parameter per error");
    }
    for (std::size_t i = 0; i < errors.size(); ++i) {
        if (!(errors[i] > 0.0) || !std::isfinite(errors[i])) throw std::invalid_argument("eoc: errors must be positive and finite");
        if (!(parameters[i] > 0.0)) throw std::invalid_argument("eoc: parameters must be positive");
        if (i > 0 && std::abs(parameters[i - 1] / parameters[i] - 2.0) > 1e-9) {
            throw std::invalid_argument("eoc: parameters must halve from row to row");
        }
    }
    EocTable table{name, {}};
    for (std::size_t i = 0; i < errors.size(); ++i) {
        const double rate = i == 0 ? std::numeric_limits<double>::quiet_NaN()
                                   : std::log(errors[i - 1] / errors[i]) / std::log(parameters[i - 1] / parameters[i]);
        table.rows.push_back({parameters[i], errors[i], rate});
    }
    return table;
}

StudySetup spatial_study_defaults()
{
    StudySetup s;
    s.kind = StudyKind::Spatial;
    s.params = benchmark_params();
    s.data = benchmark_data();
    s.levels = {2, 3, 4, 5};
    s.steps = 128;
    s.reference_level = 6;
    return s;
}

StudySetup temporal_study_defaults()
{
    StudySetup s;
    s.kind = StudyKind::Temporal;
    s.params = benchmark_params();
    s.data = benchmark_data();
    s.step_counts = {4, 8, 16, 32};
    s.mesh_level = 5;
    s.reference_steps = 256;
    return s;
}

StudyResult run_convergence_study(const StudySetup& setup, const std::function<void(const std::string&)>& log)
{
    struct Config {
        int level, steps;
    };
    std::vector<Config> configs;
    if (setup.kind == StudyKind::Spatial) {
        for (int l : setup.levels) configs.push_back({l, setup.steps});
        configs.push_back({setup.reference_level, setup.steps});
    } else {
        for (int n : setup.step_counts) configs.push_back({setup.mesh_level, n});
        configs.push_back({setup.mesh_level, setup.reference_steps});
    }
    if (configs.size() < 3) throw std::invalid_argument("convergence study: need at least two coarse configurations");

    std::vector<std::unique_ptr<Discretization>> discs(configs.size());
    std::vector<std::unique_ptr<OptResult>> results(configs.size());
    std::vector<LevelRun> runs(configs.size());
    std::mutex log_mutex;
    std::atomic<std::size_t> next{0};
    std::exception_ptr failure;

    auto worker = [&] {
        for (std::size_t i = next++; i < configs.size(); i = next++) {
            try {
                const auto start = std::chrono::steady_clock::now();
                const Config& c = configs[i];
                const TimeGrid grid = TimeGrid::graded(setup.data.horizon, c.steps, setup.grading);
                discs[i] = std::make_unique<Discretization>(
                    discretize(build_unit_square_mesh(c.level), setup.params, setup.data, grid));
                const Discretization& d = *discs[i];
                results[i] = std::make_unique<OptResult>(projected_gradient(
                    d, ControlField::zero(d.spaces.trace, c.steps, setup.params.lower, setup.params.upper), setup.tol,
                    setup.max_iter));
                const double secs = std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
                runs[i] = {c.level, c.steps, results[i]->iterations, results[i]->converged, results[i]->objective, secs};
                if (log) {
                    std::lock_guard<std::mutex> lock(log_mutex);
                    char line[160];
                    std::snprintf(line, sizeof line, "level %d steps %d: %d iterations, converged %s, J = %.10e, %.1f s",
                                  c.level, c.steps, runs[i].iterations, runs[i].converged ? "yes" : "no",
                                  runs[i].objective, secs);
                    log(line);
                }
            } catch (...) {
                std::lock_guard<std::mutex> lock(log_mutex);
                if (!failure) failure = std::current_exception();
            }
        }
    };
    const int threads = std::max(1, std::min<int>(setup.threads, static_cast<int>(configs.size())));
    if (threads == 1) {
        worker();
    } else {
        std::vector<std::thread> pool;
        for (int t = 0; t < threads; ++t) pool.emplace_back(worker);
        for (auto& t : pool) t.join();
    }
    if (failure) std::rethrow_exception(failure);

    StudyResult result{setup.kind, {}, runs, {}};
    const OptimalPair reference{discs.back().get(), results.back().get()};
    for (std::size_t i = 0; i + 1 < configs.size(); ++i) {
        result.errors.push_back(compare_to_reference({discs[i].get(), results[i].get()}, reference));
    }
    std::vector<double> params;
    for (const auto& e : result.errors) params.push_back(setup.kind == StudyKind::Spatial ? e.mesh_size : e.max_step);
    for (const auto& col : table_columns()) {
        std::vector<double> errs;
        for (const auto& e : result.errors) errs.push_back(col.get(e));
        result.tables.push_back(eoc(col.name, errs, params));
    }
    return result;
}

namespace {

std::string format(const char* fmt, double v)
{
    char buf[64];
    std::snprintf(buf, sizeof buf, fmt, v);
    return buf;
}

}  // namespace

void write_eoc_csv(std::ostream& out, const StudyResult& result)
{
    out << (result.kind == StudyKind::Spatial ? "h" : "tau");
    for (const auto& t : result.tables) out << ',' << t.name << ",rate_" << t.name;
    out << '\n';
    const std::size_t rows = result.tables.empty() ? 0 : result.tables.front().rows.size();
    for (std::size_t i = 0; i < rows; ++i) {
        out << format("%.6e", result.tables.front().rows[i].parameter);
        for (const auto& t : result.tables) {
            out << ',' << format("%.6e", t.rows[i].error) << ',';
            if (i > 0) out << format("%.4f", t.rows[i].rate);
        }
        out << '\n';
    }
}

void write_error_csv(std::ostream& out, const StudyResult& result)
{
    out << "mesh_level,steps,h,tau_max";
    for (const auto& c : all_columns()) out << ',' << c.name;
    out << '\n';
    for (const auto& e : result.errors) {
        out << e.mesh_level << ',' << e.steps << ',' << format("%.6e", e.mesh_size) << ',' << format("%.6e", e.max_step);
        for (const auto& c : all_columns()) out << ',' << format("%.9e", c.get(e));
        out << '\n';
    }
}

}  // namespace boussinesq
