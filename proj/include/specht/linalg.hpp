#pragma once

// Dense symmetric eigencomputations: checked symmetric matrices, a
// deterministic symmetric eigensolver wrapper, commutator norms, and the
// construction of a shared orthonormal eigenbasis for a commuting family.

#include "specht/core.hpp"

#include <algorithm>
#include <cmath>
#include <optional>
#include <string>
#include <vector>

namespace specht {

/// Relative symmetry tolerance for SymMatrix construction.
inline constexpr double kSymmetryTol = 1e-12;
/// Default relative tolerance for pairwise commutation checks.
inline constexpr double kCommuteTol = 1e-10;
/// Eigenvalues closer than this (relative to max(1, ||A||_F)) are treated as
/// one eigenspace while refining a shared basis.
inline constexpr double kClusterTol = 1e-8;

/// Dense real symmetric matrix. Construction validates the shape and checks
/// |m(i,j) - m(j,i)| <= tol * max(1, max finite |entry|). Non-finite entries
/// are tolerated here and rejected by eigh, so the error there names the
/// actual problem.
class SymMatrix {
public:
    explicit SymMatrix(Matrix m, double sym_tol = kSymmetryTol) : m_(std::move(m)) {
        if (m_.rows() == 0 || m_.cols() == 0) fail(ErrorKind::InvalidInput, "SymMatrix: size must be positive");
        if (m_.rows() != m_.cols())
            fail(ErrorKind::NonSymmetric, "SymMatrix: " + std::to_string(m_.rows()) + "x" +
                                              std::to_string(m_.cols()) + " matrix is not square");
        double scale = 0.0;
        for (Index j = 0; j < m_.cols(); ++j)
            for (Index i = 0; i < m_.rows(); ++i) {
                double v = std::abs(m_(i, j));
                if (std::isfinite(v) && v > scale) scale = v;
            }
        double thresh = sym_tol * std::max(1.0, scale);
        for (Index j = 0; j < m_.cols(); ++j)
            for (Index i = 0; i < j; ++i) {
                double a = m_(i, j), b = m_(j, i);
                if (a == b) continue;
                if (std::abs(a - b) > thresh)
                    fail(ErrorKind::NonSymmetric, "SymMatrix: entries (" + std::to_string(i) + "," +
                                                      std::to_string(j) + ") and transpose differ by " +
                                                      std::to_string(std::abs(a - b)));
            }
    }

    const Matrix& matrix() const { return m_; }
    Index size() const { return m_.rows(); }
    double frobenius() const { return m_.norm(); }

private:
    Matrix m_;
};

/// Eigenvalues (descending) with matching eigenvector columns.
struct EigenDecomposition {
    Vector values;
    Matrix vectors;
};

namespace detail {

/// Flips eigenvector signs so the entry of largest magnitude is positive,
/// ties resolved toward the lowest index. Makes results reproducible.
inline void canonical_sign(Matrix& vectors) {
    for (Index c = 0; c < vectors.cols(); ++c) {
        Index best = 0;
        for (Index r = 1; r < vectors.rows(); ++r)
            if (std::abs(vectors(r, c)) > std::abs(vectors(best, c))) best = r;
        if (vectors(best, c) < 0.0) vectors.col(c) = -vectors.col(c);
    }
}

inline EigenDecomposition eigh_dense(const Matrix& m) {
    Eigen::SelfAdjointEigenSolver<Matrix> solver(m);
    if (solver.info() != Eigen::Success)
        fail(ErrorKind::SolverFailure, "eigh: eigensolver did not converge");
    EigenDecomposition out;
    out.values = solver.eigenvalues().reverse();
    out.vectors = solver.eigenvectors().rowwise().reverse();
    canonical_sign(out.vectors);
    return out;
}

inline Vector eigh_dense_values(const Matrix& m) {
    Eigen::SelfAdjointEigenSolver<Matrix> solver(m, Eigen::EigenvaluesOnly);
    if (solver.info() != Eigen::Success)
        fail(ErrorKind::SolverFailure, "eigh: eigensolver did not converge");
    return solver.eigenvalues().reverse();
}

}  // namespace detail

/// Full symmetric eigendecomposition, eigenvalues descending, eigenvector
/// signs canonical. Residuals satisfy ||A v - lambda v|| <= 1e-10 max(1, ||A||_F).
inline EigenDecomposition eigh(const SymMatrix& a) {
    if (!a.matrix().allFinite()) fail(ErrorKind::NonFinite, "eigh: matrix has non-finite entries");
    return detail::eigh_dense(a.matrix());
}

/// Eigenvalues only, descending. Cheaper than eigh when vectors are unused.
inline Vector eigh_values(const SymMatrix& a) {
    if (!a.matrix().allFinite()) fail(ErrorKind::NonFinite, "eigh: matrix has non-finite entries");
    return detail::eigh_dense_values(a.matrix());
}

/// Frobenius norm of AB - BA. Exactly zero when A and B are the same object
/// since both products are evaluated identically.
inline double commutator_norm(const SymMatrix& a, const SymMatrix& b) {
    if (a.size() != b.size())
        fail(ErrorKind::SizeMismatch, "commutator_norm: sizes " + std::to_string(a.size()) + " and " +
                                          std::to_string(b.size()) + " differ");
    return (a.matrix() * b.matrix() - b.matrix() * a.matrix()).norm();
}

/// Orthonormal basis that diagonalizes every member of a commuting family.
/// vectors: n x n, columns u_i; values: n x l table with values(i, j) the
/// eigenvalue of family j on u_i, i.e. u_i' A_j u_i. Invariant:
/// ||A_j u_i - values(i,j) u_i|| <= 1e-8 max(1, ||A_j||_F).
struct CommonBasis {
    Matrix vectors;
    Matrix values;
};

namespace detail {

/// Recursive refinement: diagonalize mats[pos], then split each (nearly)
/// degenerate eigenspace with the remaining matrices. Deterministic; the
/// column order is descending by mats[pos], then recursively by later ones.
inline Matrix simdiag(const std::vector<Matrix>& mats, std::size_t pos) {
    const Matrix& a = mats[pos];
    const Index n = a.rows();
    if (n == 0) return Matrix(0, 0);
    EigenDecomposition ed = eigh_dense(a);
    const double ctol = kClusterTol * std::max(1.0, a.norm());

    Matrix u(n, n);
    Index start = 0;
    while (start < n) {
        Index end = start + 1;
        while (end < n && ed.values(end - 1) - ed.values(end) <= ctol) ++end;
        const Index d = end - start;
        auto vc = ed.vectors.middleCols(start, d);
        if (d == 1 || pos + 1 == mats.size()) {
            u.middleCols(start, d) = vc;
        } else {
            std::vector<Matrix> sub;
            sub.reserve(mats.size() - pos - 1);
            for (std::size_t r = pos + 1; r < mats.size(); ++r) {
                Matrix b = vc.transpose() * mats[r] * vc;
                Matrix bt = b.transpose();
                sub.push_back(0.5 * (b + bt));
            }
            u.middleCols(start, d) = vc * simdiag(sub, 0);
        }
        start = end;
    }
    return u;
}

}  // namespace detail

/// Shared eigenbasis of a pairwise-commuting family of symmetric matrices.
/// If seed is given it must be a common eigenvector (checked); it is kept,
/// normalized, as the first column and the rest of the basis is built in its
/// orthogonal complement. No randomness anywhere: repeated calls return
/// bit-identical results.
inline CommonBasis common_eigenbasis(const std::vector<SymMatrix>& family,
                                     const std::optional<Vector>& seed = std::nullopt,
                                     double tol = kCommuteTol) {
    if (family.empty()) fail(ErrorKind::InvalidInput, "common_eigenbasis: family is empty");
    const Index n = family[0].size();
    for (std::size_t j = 1; j < family.size(); ++j)
        if (family[j].size() != n)
            fail(ErrorKind::SizeMismatch, "common_eigenbasis: matrix " + std::to_string(j) + " has size " +
                                              std::to_string(family[j].size()) + ", expected " + std::to_string(n));

    std::vector<double> fro(family.size());
    for (std::size_t j = 0; j < family.size(); ++j) fro[j] = family[j].frobenius();
    for (std::size_t i = 0; i < family.size(); ++i)
        for (std::size_t j = i + 1; j < family.size(); ++j) {
            double c = commutator_norm(family[i], family[j]);
            double bound = tol * std::max(1.0, fro[i] * fro[j]);
            if (c > bound)
                fail(ErrorKind::NotCommuting, "common_eigenbasis: matrices " + std::to_string(i) + " and " +
                                                  std::to_string(j) + " do not commute, ||[A,B]||_F = " +
                                                  std::to_string(c) + " exceeds " + std::to_string(bound));
        }

    Matrix u(n, n);
    if (seed.has_value()) {
        Vector s = *seed;
        if (s.size() != n)
            fail(ErrorKind::SizeMismatch, "common_eigenbasis: seed has size " + std::to_string(s.size()) +
                                              ", expected " + std::to_string(n));
        double nrm = s.norm();
        if (!std::isfinite(nrm) || nrm <= 0.0)
            fail(ErrorKind::SeedNotEigenvector, "common_eigenbasis: seed vector is zero or non-finite");
        s /= nrm;
        for (std::size_t j = 0; j < family.size(); ++j) {
            const Matrix& a = family[j].matrix();
            double theta = s.dot(a * s);
            double resid = (a * s - theta * s).norm();
            if (resid > tol * std::max(1.0, fro[j]))
                fail(ErrorKind::SeedNotEigenvector, "common_eigenbasis: seed is not an eigenvector of matrix " +
                                                        std::to_string(j) + ", residual " + std::to_string(resid));
        }

        u.col(0) = s;
        if (n > 1) {
            // Householder reflection carrying e_0 onto +-s; its trailing
            // columns are an orthonormal basis of the complement of s. The
            // branch keeps ||w|| >= 1, away from cancellation.
            Vector w = s;
            w(0) += (s(0) <= 0.5) ? -1.0 : 1.0;
            Matrix h = Matrix::Identity(n, n) - (2.0 / w.squaredNorm()) * (w * w.transpose());
            Matrix q = h.rightCols(n - 1);
            std::vector<Matrix> projected;
            projected.reserve(family.size());
            for (const SymMatrix& a : family) {
                Matrix b = q.transpose() * a.matrix() * q;
                Matrix bt = b.transpose();
                projected.push_back(0.5 * (b + bt));
            }
            u.rightCols(n - 1) = q * detail::simdiag(projected, 0);
        }
    } else {
        std::vector<Matrix> mats;
        mats.reserve(family.size());
        for (const SymMatrix& a : family) mats.push_back(a.matrix());
        u = detail::simdiag(mats, 0);
    }
    detail::canonical_sign(u);

    Matrix values(n, static_cast<Index>(family.size()));
    for (std::size_t j = 0; j < family.size(); ++j) {
        Matrix y = family[j].matrix() * u;
        for (Index i = 0; i < n; ++i) values(i, static_cast<Index>(j)) = u.col(i).dot(y.col(i));
    }
    return CommonBasis{std::move(u), std::move(values)};
}

}  // namespace specht
