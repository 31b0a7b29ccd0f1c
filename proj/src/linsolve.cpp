#include "boussinesq/linsolve.hpp"

#include <algorithm>
#include <limits>

namespace boussinesq {

bool DirectSolver::same_pattern(const ColMatrix& a) const
{
    if (!lu_ || a.rows() != rows_) return false;
    const auto nnz = static_cast<std::size_t>(a.nonZeros());
    const auto cols = static_cast<std::size_t>(a.cols());
    return inner_.size() == nnz && std::equal(a.outerIndexPtr(), a.outerIndexPtr() + cols + 1, outer_.begin()) &&
           std::equal(a.innerIndexPtr(), a.innerIndexPtr() + nnz, inner_.begin());
}

LinearSolution DirectSolver::solve(const SparseMatrix& a, const Eigen::VectorXd& b, double tol)
{
    if (a.rows() != a.cols()) throw std::invalid_argument("solve_sparse: matrix must be square");
    if (b.size() != a.rows()) throw std::invalid_argument("solve_sparse: right-hand side has the wrong length");
    const double bnorm = b.norm();
    if (bnorm == 0.0) return {Eigen::VectorXd::Zero(b.size()), 0.0};

    ColMatrix col = a;
    col.makeCompressed();
    if (!same_pattern(col)) {
        lu_ = std::make_unique<Eigen::UmfPackLU<ColMatrix>>();
        // The matrices are structurally symmetric (saddle systems, convection
        // added to SPD blocks); the symmetric ordering is much faster here.
        lu_->umfpackControl()(UMFPACK_STRATEGY) = UMFPACK_STRATEGY_SYMMETRIC;
        lu_->analyzePattern(col);
        rows_ = col.rows();
        outer_.assign(col.outerIndexPtr(), col.outerIndexPtr() + col.cols() + 1);
        inner_.assign(col.innerIndexPtr(), col.innerIndexPtr() + col.nonZeros());
    }
    lu_->factorize(col);
    if (lu_->info() != Eigen::Success) {
        lu_.reset();
        throw SolverError("solve_sparse: factorization failed (matrix singular to working precision)",
                          std::numeric_limits<double>::infinity());
    }
    LinearSolution out;
    out.solution = lu_->solve(b);
    out.residual = (a * out.solution - b).norm() / bnorm;
    if (!out.solution.allFinite() || !(out.residual <= tol)) {
        throw SolverError("solve_sparse: relative residual " + std::to_string(out.residual) + " exceeds tolerance",
                          out.residual);
    }
    return out;
}

LinearSolution solve_sparse(const SparseMatrix& a, const Eigen::VectorXd& b, double tol)
{
    DirectSolver solver;
    return solver.solve(a, b, tol);
}

std::shared_ptr<const SaddleBlocks> SaddleBlocks::make(const SparseMatrix& divergence, const Eigen::VectorXd& mean,
                                                       std::vector<int> dirichlet_dofs)
{
    if (mean.size() != divergence.rows()) throw std::invalid_argument("SaddleBlocks: mean vector length mismatch");
    std::sort(dirichlet_dofs.begin(), dirichlet_dofs.end());
    for (int d : dirichlet_dofs) {
        if (d < 0 || d >= divergence.cols()) throw std::invalid_argument("SaddleBlocks: Dirichlet dof out of range");
    }
    auto blocks = std::make_shared<SaddleBlocks>();
    blocks->divergence = divergence;
    blocks->mean = mean;
    blocks->dirichlet_dofs = std::move(dirichlet_dofs);
    return blocks;
}

SaddleSolution SaddleSolver::solve(const SaddleSystem& sys, const Eigen::VectorXd& rhs_velocity, double tol)
{
    const SaddleBlocks& blk = *sys.blocks;
    const int nv = static_cast<int>(sys.a.rows());
    const int np = static_cast<int>(blk.divergence.rows());
    if (sys.a.cols() != nv || blk.divergence.cols() != nv || rhs_velocity.size() != nv) {
        throw std::invalid_argument("solve_saddle: block dimensions are inconsistent");
    }
    std::vector<char> fixed(static_cast<std::size_t>(nv), 0);
    for (int d : blk.dirichlet_dofs) fixed[d] = 1;

    const int n = nv + np + 1;
    std::vector<Eigen::Triplet<double>> triplets;
    triplets.reserve(static_cast<std::size_t>(sys.a.nonZeros() + 2 * blk.divergence.nonZeros() + 2 * np + nv));
    for (int i = 0; i < nv; ++i) {
        if (fixed[i]) {
            triplets.emplace_back(i, i, 1.0);
            continue;
        }
        for (SparseMatrix::InnerIterator it(sys.a, i); it; ++it) {
            if (!fixed[it.col()]) triplets.emplace_back(i, static_cast<int>(it.col()), it.value());
        }
    }
    for (int q = 0; q < np; ++q) {
        for (SparseMatrix::InnerIterator it(blk.divergence, q); it; ++it) {
            if (fixed[it.col()]) continue;
            triplets.emplace_back(nv + q, static_cast<int>(it.col()), it.value());
            triplets.emplace_back(static_cast<int>(it.col()), nv + q, it.value());
        }
        triplets.emplace_back(nv + q, n - 1, blk.mean[q]);
        triplets.emplace_back(n - 1, nv + q, blk.mean[q]);
    }
    SparseMatrix k(n, n);
    k.setFromTriplets(triplets.begin(), triplets.end());

    Eigen::VectorXd rhs = Eigen::VectorXd::Zero(n);
    for (int i = 0; i < nv; ++i) rhs[i] = fixed[i] ? 0.0 : rhs_velocity[i];

    const LinearSolution sol = direct_.solve(k, rhs, tol);
    SaddleSolution out;
    out.velocity = sol.solution.head(nv);
    out.pressure = sol.solution.segment(nv, np);
    out.residual = sol.residual;
    return out;
}

SaddleSolution solve_saddle(const SaddleSystem& sys, const Eigen::VectorXd& rhs_velocity, double tol)
{
    SaddleSolver solver;
    return solver.solve(sys, rhs_velocity, tol);
}

}  // namespace boussinesq
