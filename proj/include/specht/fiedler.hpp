#pragma once

// Structured eigensolver for symmetric block matrices whose off-diagonal
// blocks couple the leading k eigenvectors of each diagonal block: the
// (i,j) block is rho_ij U_i U_j' with U_j the first k eigenvector columns
// of block j. The spectrum of such a matrix splits into the eigenvalues the
// coupling never touches (eigenpairs k..m_j-1 of each block) plus the
// spectra of k small coupling matrices, one per coupled eigenvector slot.

#include "specht/core.hpp"
#include "specht/linalg.hpp"

#include <algorithm>
#include <cmath>
#include <string>
#include <utility>
#include <vector>

namespace specht {

/// Grouping tolerance (absolute) when a spectrum is folded into
/// (value, multiplicity) entries for display.
inline constexpr double kGroupTol = 1e-8;

enum class SpectralSource {
    Block,    // leftover eigenpair of one diagonal block
    Reduced,  // eigenvalue of one reduced coupling matrix
    Dense,    // direct dense eigensolve (reference path)
};

/// Where a raw eigenvalue came from. Block: (block index, eigenpair index).
/// Reduced: (reduced matrix index, eigenvalue index). Dense: (position, 0).
struct Provenance {
    SpectralSource source;
    Index major;
    Index minor;
};

struct RawValue {
    double value;
    Provenance origin;
};

struct SpectrumEntry {
    double value;
    Index multiplicity;
};

/// Multiset of eigenvalues: raw values (descending, with provenance) plus a
/// grouped view. Grouping is greedy from the top; every member of an entry
/// lies within group_tol of the entry's representative value.
class Spectrum {
public:
    explicit Spectrum(std::vector<RawValue> raw, double group_tol = kGroupTol)
        : raw_(std::move(raw)), group_tol_(group_tol) {
        std::stable_sort(raw_.begin(), raw_.end(),
                         [](const RawValue& a, const RawValue& b) { return a.value > b.value; });
        std::size_t start = 0;
        while (start < raw_.size()) {
            const double rep = raw_[start].value;
            std::size_t end = start + 1;
            while (end < raw_.size() && rep - raw_[end].value <= group_tol_) ++end;
            grouped_.push_back(SpectrumEntry{rep, static_cast<Index>(end - start)});
            start = end;
        }
    }

    const std::vector<RawValue>& raw() const { return raw_; }
    const std::vector<SpectrumEntry>& grouped() const { return grouped_; }
    double group_tol() const { return group_tol_; }
    Index total() const { return static_cast<Index>(raw_.size()); }

    /// All raw values as a descending vector.
    Vector values() const {
        Vector v(static_cast<Index>(raw_.size()));
        for (std::size_t i = 0; i < raw_.size(); ++i) v(static_cast<Index>(i)) = raw_[i].value;
        return v;
    }

private:
    std::vector<RawValue> raw_;
    std::vector<SpectrumEntry> grouped_;
    double group_tol_;
};

struct EigenPair {
    double value;
    Vector vector;
    Provenance origin;
};

/// Symmetric coupling strengths between blocks. The diagonal is meaningless
/// and stored as zero; symmetry must be exact so every consumer can mirror
/// entries without rounding questions.
class CouplingSpec {
public:
    explicit CouplingSpec(Matrix rho) : rho_(std::move(rho)) {
        if (rho_.rows() == 0 || rho_.rows() != rho_.cols())
            fail(ErrorKind::InvalidInput, "CouplingSpec: matrix must be square and nonempty");
        if (!rho_.allFinite()) fail(ErrorKind::InvalidInput, "CouplingSpec: non-finite coupling");
        for (Index i = 0; i < rho_.rows(); ++i)
            for (Index j = i + 1; j < rho_.cols(); ++j)
                if (rho_(i, j) != rho_(j, i))
                    fail(ErrorKind::InvalidInput, "CouplingSpec: entries (" + std::to_string(i) + "," +
                                                      std::to_string(j) + ") are not stored symmetrically");
        rho_.diagonal().setZero();
    }

    static CouplingSpec zero(Index n) { return CouplingSpec(Matrix::Zero(n, n)); }

    Index block_count() const { return rho_.rows(); }
    const Matrix& rho() const { return rho_; }

private:
    Matrix rho_;
};

/// One coupled-block problem: diagonal blocks with their eigendecompositions,
/// the number k of coupled eigenvector slots, and the coupling strengths.
/// The ordering inside each decomposition is authoritative: callers control
/// which eigenpairs count as the leading k and how slot t lines up across
/// blocks, so values need not be sorted.
struct FiedlerInput {
    std::vector<SymMatrix> blocks;
    std::vector<EigenDecomposition> decomps;
    Index k;
    CouplingSpec coupling;
};

/// Checks every FiedlerInput invariant; violations raise InvalidInput.
/// Decompositions must be orthonormal within 1e-8 and reproduce their block
/// within 1e-8 * max(1, ||A||_F) per eigenpair; this matches the residual
/// guarantee of common_eigenbasis so its output is always accepted here.
inline void validate(const FiedlerInput& input) {
    const std::size_t n = input.blocks.size();
    if (n == 0) fail(ErrorKind::InvalidInput, "FiedlerInput: no blocks");
    if (input.decomps.size() != n)
        fail(ErrorKind::InvalidInput, "FiedlerInput: " + std::to_string(n) + " blocks but " +
                                          std::to_string(input.decomps.size()) + " decompositions");
    if (input.coupling.block_count() != static_cast<Index>(n))
        fail(ErrorKind::InvalidInput, "FiedlerInput: coupling is for " +
                                          std::to_string(input.coupling.block_count()) + " blocks, expected " +
                                          std::to_string(n));
    Index min_m = input.blocks[0].size();
    for (const SymMatrix& b : input.blocks) min_m = std::min(min_m, b.size());
    if (input.k < 1 || input.k > min_m)
        fail(ErrorKind::InvalidInput, "FiedlerInput: k = " + std::to_string(input.k) +
                                          " must lie in [1, " + std::to_string(min_m) + "]");

    for (std::size_t j = 0; j < n; ++j) {
        const Matrix& a = input.blocks[j].matrix();
        const EigenDecomposition& d = input.decomps[j];
        const Index m = a.rows();
        if (d.values.size() != m || d.vectors.rows() != m || d.vectors.cols() != m)
            fail(ErrorKind::InvalidInput,
                 "FiedlerInput: decomposition " + std::to_string(j) + " does not match its block size");
        if (!d.values.allFinite() || !d.vectors.allFinite())
            fail(ErrorKind::InvalidInput, "FiedlerInput: decomposition " + std::to_string(j) + " is not finite");
        double ortho = (d.vectors.transpose() * d.vectors - Matrix::Identity(m, m)).cwiseAbs().maxCoeff();
        if (ortho > 1e-8)
            fail(ErrorKind::InvalidInput, "FiedlerInput: decomposition " + std::to_string(j) +
                                              " is not orthonormal, deviation " + std::to_string(ortho));
        double bound = 1e-8 * std::max(1.0, a.norm());
        Matrix resid = a * d.vectors - d.vectors * d.values.asDiagonal();
        for (Index i = 0; i < m; ++i)
            if (resid.col(i).norm() > bound)
                fail(ErrorKind::InvalidInput, "FiedlerInput: eigenpair " + std::to_string(i) + " of block " +
                                                  std::to_string(j) + " has residual " +
                                                  std::to_string(resid.col(i).norm()));
    }
}

namespace detail {

inline std::vector<Index> block_offsets(const FiedlerInput& input) {
    std::vector<Index> offsets(input.blocks.size() + 1, 0);
    for (std::size_t j = 0; j < input.blocks.size(); ++j)
        offsets[j + 1] = offsets[j] + input.blocks[j].size();
    return offsets;
}

/// C_t without revalidation: couplings off the diagonal, slot-t eigenvalues on it.
inline Matrix reduced_unchecked(const FiedlerInput& input, Index t) {
    Matrix c = input.coupling.rho();
    for (std::size_t j = 0; j < input.decomps.size(); ++j)
        c(static_cast<Index>(j), static_cast<Index>(j)) = input.decomps[j].values(t);
    return c;
}

}  // namespace detail

/// The full coupled matrix: blocks on the diagonal, rho_ij U_i U_j' off it.
/// Assembled upper triangle first and mirrored, so the result is exactly
/// symmetric.
inline SymMatrix assemble_coupled(const FiedlerInput& input) {
    validate(input);
    const auto offsets = detail::block_offsets(input);
    const Index total = offsets.back();
    Matrix c = Matrix::Zero(total, total);
    for (std::size_t j = 0; j < input.blocks.size(); ++j)
        c.block(offsets[j], offsets[j], input.blocks[j].size(), input.blocks[j].size()) =
            input.blocks[j].matrix();
    for (std::size_t i = 0; i < input.blocks.size(); ++i)
        for (std::size_t j = i + 1; j < input.blocks.size(); ++j) {
            double rho = input.coupling.rho()(static_cast<Index>(i), static_cast<Index>(j));
            if (rho == 0.0) continue;
            Matrix off = rho * (input.decomps[i].vectors.leftCols(input.k) *
                                input.decomps[j].vectors.leftCols(input.k).transpose());
            c.block(offsets[i], offsets[j], off.rows(), off.cols()) = off;
            c.block(offsets[j], offsets[i], off.cols(), off.rows()) = off.transpose();
        }
    return SymMatrix(std::move(c));
}

/// Reduced coupling matrix for slot t (0-based, t < k): diagonal holds each
/// block's slot-t eigenvalue, off-diagonal entries are the couplings.
inline SymMatrix reduced_matrix(const FiedlerInput& input, Index t) {
    validate(input);
    if (t < 0 || t >= input.k)
        fail(ErrorKind::IndexOutOfRange,
             "reduced_matrix: t = " + std::to_string(t) + " outside [0, " + std::to_string(input.k) + ")");
    return SymMatrix(detail::reduced_unchecked(input, t));
}

struct ReducedMatrixInfo {
    Index t;
    Matrix matrix;
    Vector values;
};

struct StructuredSpectrum {
    Spectrum spectrum;
    std::vector<ReducedMatrixInfo> reduced;
};

/// Structured spectrum plus the reduced matrices and their eigenvalues.
inline StructuredSpectrum coupled_spectrum_detailed(const FiedlerInput& input) {
    validate(input);
    std::vector<RawValue> raw;
    const auto offsets = detail::block_offsets(input);
    raw.reserve(static_cast<std::size_t>(offsets.back()));

    for (std::size_t j = 0; j < input.blocks.size(); ++j)
        for (Index i = input.k; i < input.blocks[j].size(); ++i)
            raw.push_back({input.decomps[j].values(i), {SpectralSource::Block, static_cast<Index>(j), i}});

    std::vector<ReducedMatrixInfo> reduced;
    reduced.reserve(static_cast<std::size_t>(input.k));
    for (Index t = 0; t < input.k; ++t) {
        Matrix ct = detail::reduced_unchecked(input, t);
        Vector vals = detail::eigh_dense_values(ct);
        for (Index s = 0; s < vals.size(); ++s)
            raw.push_back({vals(s), {SpectralSource::Reduced, t, s}});
        reduced.push_back(ReducedMatrixInfo{t, std::move(ct), std::move(vals)});
    }
    return StructuredSpectrum{Spectrum(std::move(raw)), std::move(reduced)};
}

/// All eigenvalues of the coupled matrix, computed structurally: leftover
/// block eigenvalues plus the pooled spectra of the k reduced matrices.
inline Spectrum coupled_spectrum(const FiedlerInput& input) {
    return coupled_spectrum_detailed(input).spectrum;
}

/// Full eigenpairs of the coupled matrix. Leftover pairs are block
/// eigenvectors padded with zeros; coupled pairs distribute the reduced
/// eigenvector weights over each block's slot-t eigenvector. Every returned
/// vector v satisfies ||C v - lambda v|| <= 1e-8 max(1, ||C||_F) against the
/// assembled matrix, and has unit norm.
inline std::vector<EigenPair> coupled_eigenpairs(const FiedlerInput& input) {
    validate(input);
    const auto offsets = detail::block_offsets(input);
    const Index total = offsets.back();
    std::vector<EigenPair> pairs;
    pairs.reserve(static_cast<std::size_t>(total));

    for (std::size_t j = 0; j < input.blocks.size(); ++j)
        for (Index i = input.k; i < input.blocks[j].size(); ++i) {
            Vector v = Vector::Zero(total);
            v.segment(offsets[j], input.blocks[j].size()) = input.decomps[j].vectors.col(i);
            pairs.push_back({input.decomps[j].values(i), std::move(v),
                             {SpectralSource::Block, static_cast<Index>(j), i}});
        }

    const Index n = static_cast<Index>(input.blocks.size());
    for (Index t = 0; t < input.k; ++t) {
        EigenDecomposition ed = detail::eigh_dense(detail::reduced_unchecked(input, t));
        for (Index s = 0; s < n; ++s) {
            Vector v = Vector::Zero(total);
            for (Index j = 0; j < n; ++j)
                v.segment(offsets[static_cast<std::size_t>(j)], input.blocks[static_cast<std::size_t>(j)].size()) =
                    ed.vectors(j, s) * input.decomps[static_cast<std::size_t>(j)].vectors.col(t);
            v /= v.norm();
            pairs.push_back({ed.values(s), std::move(v), {SpectralSource::Reduced, t, s}});
        }
    }
    return pairs;
}

}  // namespace specht
