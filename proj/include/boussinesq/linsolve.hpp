#pragma once

#include <memory>
#include <stdexcept>
#include <string>
#include <vector>

#include <Eigen/Core>
#include <Eigen/SparseCore>
#include <Eigen/UmfPackSupport>

#include "boussinesq/assembly.hpp"

namespace boussinesq {

struct LinearSolution {
    Eigen::VectorXd solution;
    double residual = 0.0;  // ||A x - b|| / ||b||, 0 for b = 0
};

class SolverError : public std::runtime_error {
public:
    SolverError(const std::string& what, double residual) : std::runtime_error(what), residual_(residual) {}
    double residual() const { return residual_; }

private:
    double residual_;
};

// Sparse LU (UMFPACK). The symbolic analysis is kept and reused while the
// sparsity pattern of successive matrices stays the same.
class DirectSolver {
public:
    LinearSolution solve(const SparseMatrix& a, const Eigen::VectorXd& b, double tol = 1e-10);

private:
    using ColMatrix = Eigen::SparseMatrix<double, Eigen::ColMajor, int>;
    bool same_pattern(const ColMatrix& a) const;

    std::unique_ptr<Eigen::UmfPackLU<ColMatrix>> lu_;
    std::vector<int> outer_, inner_;
    Eigen::Index rows_ = -1;
};

LinearSolution solve_sparse(const SparseMatrix& a, const Eigen::VectorXd& b, double tol = 1e-10);

// Blocks of the velocity-pressure system that do not change between steps.
// Homogeneous Dirichlet conditions on `dirichlet_dofs` are imposed by
// eliminating those rows and columns.
struct SaddleBlocks {
    SparseMatrix divergence;     // B, pressure x velocity
    Eigen::VectorXd mean;        // m_q = int q
    std::vector<int> dirichlet_dofs;

    static std::shared_ptr<const SaddleBlocks> make(const SparseMatrix& divergence, const Eigen::VectorXd& mean,
                                                    std::vector<int> dirichlet_dofs);
};

// [[A, B^T, 0], [B, 0, m], [0, m^T, 0]].
struct SaddleSystem {
    SparseMatrix a;
    std::shared_ptr<const SaddleBlocks> blocks;
};

struct SaddleSolution {
    Eigen::VectorXd velocity;
    Eigen::VectorXd pressure;
    double residual = 0.0;
};

class SaddleSolver {
public:
    SaddleSolution solve(const SaddleSystem& sys, const Eigen::VectorXd& rhs_velocity, double tol = 1e-10);

private:
    DirectSolver direct_;
};

SaddleSolution solve_saddle(const SaddleSystem& sys, const Eigen::VectorXd& rhs_velocity, double tol = 1e-10);

}  // namespace boussinesq
