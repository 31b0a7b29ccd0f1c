#pragma once

#include <iosfwd>
#include <string>
#include <vector>

#include "boussinesq/analysis.hpp"
#include "boussinesq/problem.hpp"
#include "boussinesq/time_grid.hpp"

namespace boussinesq {

// Thrown for malformed or invalid configuration; the CLI maps it to exit 2.
class ConfigError : public std::invalid_argument {
public:
    using std::invalid_argument::invalid_argument;
};

struct ExperimentConfig {
    std::string preset;  // "paper-sec5" or empty
    PhysicalParams params;
    double horizon = 1.0;

    // Named data functions, see make_scalar_data / make_vector_data.
    std::string body_force = "zero";
    std::string heat_source = "zero";
    std::string target_velocity = "zero";
    std::string target_temperature = "zero";
    std::string initial_velocity = "zero";
    std::string initial_temperature = "zero";
    std::string control = "zero";  // initial / fixed control, scalar spec

    int mesh_level = 3;
    int steps = 16;
    double grading = 1.0;
    StepBounds bounds;

    double solver_tol = 1e-10;
    double opt_tol = 1e-6;
    int max_iter = 200;
    int threads = 1;

    StudyKind study_kind = StudyKind::Spatial;
    std::vector<int> study_levels{2, 3, 4, 5};
    std::vector<int> study_step_counts{4, 8, 16, 32};
    int study_reference_level = 6;
    int study_reference_steps = 256;
    int study_mesh_level = 5;
    int study_steps = 128;

    std::vector<double> epsilons{1e-3, 1e-4, 1e-5};
    unsigned seed = 1;

    std::string output_dir = "out";
    bool vtk = false;

    // Throws ConfigError naming the offending entry.
    void validate() const;

    ProblemData problem_data() const;
    TimeGrid time_grid() const;
    StudySetup study_setup() const;
};

// Defaults overwritten by the named preset. Throws ConfigError for unknown names.
ExperimentConfig preset_config(const std::string& name);

// INI file with sections [problem] [params] [data] [grid] [solver]
// [optimizer] [study] [gradient_check] [output]. Unknown sections or keys are
// errors. A `preset` key in [problem] is applied before the other entries.
ExperimentConfig load_config(const std::string& path);
ExperimentConfig parse_config(std::istream& in);

// Scalar data: "zero", "constant:c", "sine:a" = a (1 + t) sin(pi x) sin(pi y).
// Vector data: "zero", "constant:a,b", "benchmark-target" (benchmark target),
// "vortex:a" = a times the benchmark target (divergence free, zero trace).
ScalarData make_scalar_data(const std::string& spec);
VectorData make_vector_data(const std::string& spec);

}  // namespace boussinesq
