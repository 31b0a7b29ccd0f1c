#pragma once

#include <array>
#include <functional>
#include <iosfwd>
#include <string>
#include <vector>

#include <Eigen/Core>

#include "boussinesq/optimize.hpp"

namespace boussinesq {

// Transfer between a coarse discretization and a nested finer one on the unit
// square. P1 functions and boundary traces are prolonged exactly. A coarse
// Mini bubble is not a fine Mini function, so velocity differences are
// measured with cross-level Gram matrices instead, which is exact as well.
class GridTransfer {
public:
    // Throws std::invalid_argument unless fine.level >= coarse.level.
    GridTransfer(const Discretization& coarse, const Discretization& fine);

    Eigen::VectorXd prolong_scalar(const Eigen::VectorXd& coarse) const;
    // P1 part of a Mini field; fine bubble coefficients are zero.
    Eigen::VectorXd prolong_velocity_linear(const Eigen::VectorXd& coarse) const;
    Eigen::VectorXd prolong_trace(const Eigen::VectorXd& coarse) const;

    // ||fine - coarse||^2 in L2 and the H1 seminorm squared.
    struct Squared {
        double l2 = 0.0;
        double h1_semi = 0.0;
    };
    Squared scalar_difference(const Eigen::VectorXd& fine, const Eigen::VectorXd& coarse) const;
    Squared velocity_difference(const Eigen::VectorXd& fine, const Eigen::VectorXd& coarse) const;

    const Discretization& coarse() const { return *coarse_; }
    const Discretization& fine() const { return *fine_; }

private:
    const Discretization* coarse_;
    const Discretization* fine_;
    SparseMatrix p1_;             // fine vertices x coarse vertices
    SparseMatrix cross_mass_;     // fine Mini dofs x coarse Mini dofs (bubble columns only)
    SparseMatrix cross_stiffness_;
};

// Maps fine interval j to its coarse interval. Throws std::invalid_argument
// if the grids are not nested.
class TimeTransfer {
public:
    TimeTransfer(const TimeGrid& coarse, const TimeGrid& fine);
    int coarse_interval(int fine_interval) const { return (fine_interval - 1) / ratio_ + 1; }
    int ratio() const { return ratio_; }

private:
    int ratio_;
};

// The coarse control represented on the fine boundary and time grid, exactly.
ControlField prolong_control(const ControlField& coarse, const GridTransfer& space, const TimeTransfer& time);

// Norms of a trajectory given per interval n = 1..N (index n-1):
// L2(I;L2)^2 = sum tau v^T M v, L2(I;H1)^2 = sum tau v^T (M + K) v,
// Linf(I;L2) = max sqrt(v^T M v).
struct SpaceTimeNorms {
    double linf_l2 = 0.0;
    double l2_l2 = 0.0;
    double l2_h1 = 0.0;
};
SpaceTimeNorms space_time_norms(const std::vector<Eigen::VectorXd>& values, const SparseMatrix& mass,
                                const SparseMatrix& stiffness, const TimeGrid& grid);

struct OptimalPair {
    const Discretization* disc;
    const OptResult* result;
};

struct ErrorReport {
    int mesh_level = 0;
    int steps = 0;
    double mesh_size = 0.0;
    double max_step = 0.0;
    SpaceTimeNorms velocity, temperature, adjoint_velocity, adjoint_temperature;
    double control = 0.0;  // L2(I; L2(Gamma))
};

// Errors of a coarse optimal solution against a reference on nested grids,
// evaluated on the reference grids.
ErrorReport compare_to_reference(const OptimalPair& coarse, const OptimalPair& reference);

// Column names and accessors in EOC table order.
struct ErrorColumn {
    std::string name;
    std::function<double(const ErrorReport&)> get;
};
const std::vector<ErrorColumn>& table_columns();
const std::vector<ErrorColumn>& all_columns();

struct EocRow {
    double parameter;
    double error;
    double rate;  // NaN in the first row
};
struct EocTable {
    std::string name;
    std::vector<EocRow> rows;
};

// rate_i = log(e_{i-1}/e_i) / log(p_{i-1}/p_i). Requires >= 2 entries, each
// parameter half of the previous one, and positive finite errors.
EocTable eoc(const std::string& name, const std::vector<double>& errors, const std::vector<double>& parameters);

enum class StudyKind { Spatial, Temporal };

struct StudySetup {
    StudyKind kind = StudyKind::Spatial;
    PhysicalParams params;
    ProblemData data;
    // Spatial: coarse mesh levels with `steps` fixed. Temporal: coarse step
    // counts with `mesh_level` fixed.
    std::vector<int> levels{2, 3, 4, 5};
    std::vector<int> step_counts{4, 8, 16, 32};
    int mesh_level = 5;
    int steps = 128;
    int reference_level = 6;
    int reference_steps = 256;
    double grading = 1.0;
    double tol = 1e-6;
    int max_iter = 200;
    int threads = 1;
};

StudySetup spatial_study_defaults();
StudySetup temporal_study_defaults();

struct LevelRun {
    int mesh_level = 0;
    int steps = 0;
    int iterations = 0;
    bool converged = false;
    double objective = 0.0;
    double seconds = 0.0;
};

struct StudyResult {
    StudyKind kind;
    std::vector<ErrorReport> errors;  // one per coarse configuration
    std::vector<LevelRun> runs;       // coarse runs, then the reference
    std::vector<EocTable> tables;     // one per column of table_columns()
};

StudyResult run_convergence_study(const StudySetup& setup,
                                  const std::function<void(const std::string&)>& log = {});

// Wide layout: parameter, then error and rate per column.
void write_eoc_csv(std::ostream& out, const StudyResult& result);
// One row per coarse run with every error of all_columns().
void write_error_csv(std::ostream& out, const StudyResult& result);

}  // namespace boussinesq
