#pragma once

// Spectra of H-products of commuting graphs, computed without ever
// eigensolving the full product matrix: the common eigenbasis of the factor
// adjacency matrices turns the (l*n)-dimensional problem into n independent
// l-dimensional ones. Adjacency spectra go through the coupled-block engine
// with k = n; universal adjacency spectra (alpha*A + beta*D + gamma*I +
// eta*J, regular factors) use the reduced matrices built here, where the
// all-ones direction picks up the degree and eta*J contributions. A dense
// oracle eigensolves the assembled product for verification.

#include "specht/core.hpp"
#include "specht/fiedler.hpp"
#include "specht/graphs.hpp"
#include "specht/linalg.hpp"

#include <chrono>
#include <cmath>
#include <optional>
#include <string>
#include <utility>
#include <vector>

namespace specht {

enum class MatrixKind { Adjacency, Laplacian, SignlessLaplacian, Seidel, Universal };

/// The parameter tuple a job actually uses: fixed for the named kinds,
/// caller-supplied for Universal.
inline UniversalParams params_for(MatrixKind kind, const UniversalParams& user) {
    switch (kind) {
        case MatrixKind::Adjacency: return kAdjacencyParams;
        case MatrixKind::Laplacian: return kLaplacianParams;
        case MatrixKind::SignlessLaplacian: return kSignlessLaplacianParams;
        case MatrixKind::Seidel: return kSeidelParams;
        case MatrixKind::Universal: return user;
    }
    fail(ErrorKind::InvalidInput, "params_for: unknown matrix kind");
}

/// One spectrum computation: pattern graph, factors, which matrix of the
/// product, and how to verify. `tolerance` is the structured-vs-oracle
/// comparison bound; the commuting precheck uses the library default.
struct HProductJob {
    Graph h;
    std::vector<Graph> factors;
    MatrixKind kind = MatrixKind::Adjacency;
    UniversalParams params = kAdjacencyParams;
    double tolerance = 1e-8;
    bool run_oracle = true;
};

struct SpectrumReport {
    Spectrum structured;
    std::vector<ReducedMatrixInfo> reduced;
    std::optional<Spectrum> oracle;
    std::optional<double> max_abs_diff;
    double structured_ms = 0.0;
    double oracle_ms = 0.0;
};

struct SpectrumComparison {
    bool matched;
    double max_abs_diff;
};

/// L-infinity distance of the two descending raw eigenvalue lists.
inline SpectrumComparison compare_spectra(const Spectrum& a, const Spectrum& b, double tol) {
    if (a.total() != b.total())
        fail(ErrorKind::MultiplicityMismatch, "compare_spectra: " + std::to_string(a.total()) +
                                                  " eigenvalues vs " + std::to_string(b.total()));
    if (a.total() == 0) return {true, 0.0};
    double diff = (a.values() - b.values()).cwiseAbs().maxCoeff();
    return {diff <= tol, diff};
}

namespace detail {

inline void check_job_shape(const Graph& h, const std::vector<Graph>& factors) {
    if (static_cast<Index>(factors.size()) != h.order())
        fail(ErrorKind::FactorCountMismatch, "spectrum job: H has " + std::to_string(h.order()) +
                                                 " vertices but " + std::to_string(factors.size()) +
                                                 " factors given");
    const Index n = factors[0].order();
    for (std::size_t j = 1; j < factors.size(); ++j)
        if (factors[j].order() != n)
            fail(ErrorKind::OrderMismatch, "spectrum job: factor " + std::to_string(j) + " has order " +
                                               std::to_string(factors[j].order()) + ", expected " +
                                               std::to_string(n));
}

inline std::vector<SymMatrix> adjacency_family(const std::vector<Graph>& factors) {
    std::vector<SymMatrix> family;
    family.reserve(factors.size());
    for (const Graph& f : factors) family.emplace_back(adjacency_matrix<double>(f));
    return family;
}

class Timer {
public:
    double ms() const {
        return std::chrono::duration<double, std::milli>(std::chrono::steady_clock::now() - start_)
            .count();
    }

private:
    std::chrono::steady_clock::time_point start_ = std::chrono::steady_clock::now();
};

/// Common basis plus the n reduced matrices of the universal-adjacency
/// construction. Slot 0 is the all-ones direction: its reduced matrix takes
/// the integer degrees r_j on the diagonal and the rank-one eta contribution
/// (n*eta everywhere); later slots see only alpha-scaled couplings.
struct UniversalSetup {
    CommonBasis basis;
    std::vector<Matrix> reduced;
};

inline UniversalSetup universal_setup(const Graph& h, const std::vector<Graph>& factors,
                                      const UniversalParams& params, double tol) {
    check_job_shape(h, factors);
    if (params.alpha == 0.0)
        fail(ErrorKind::AlphaZero, "universal spectrum: alpha must be nonzero");

    const Index l = h.order();
    const Index n = factors[0].order();
    std::vector<Index> degree;
    degree.reserve(factors.size());
    for (std::size_t j = 0; j < factors.size(); ++j) {
        auto r = factors[j].is_regular();
        if (!r)
            fail(ErrorKind::NotRegular,
                 "universal spectrum: factor " + std::to_string(j) + " is not regular");
        degree.push_back(*r);
    }

    auto family = adjacency_family(factors);
    Vector seed = Vector::Constant(n, 1.0 / std::sqrt(static_cast<double>(n)));
    CommonBasis basis = common_eigenbasis(family, seed, tol);

    auto dh = h.degrees();
    Matrix rho = adjacency_matrix<double>(h);
    std::vector<Matrix> reduced;
    reduced.reserve(static_cast<std::size_t>(n));
    for (Index t = 0; t < n; ++t) {
        const double shift = (t == 0) ? static_cast<double>(n) * params.eta : 0.0;
        Matrix c(l, l);
        for (Index i = 0; i < l; ++i)
            for (Index j = 0; j < l; ++j) c(i, j) = params.alpha * rho(i, j) + shift;
        for (Index j = 0; j < l; ++j) {
            double base = params.beta * static_cast<double>(degree[static_cast<std::size_t>(j)] +
                                                            dh[static_cast<std::size_t>(j)]) +
                          params.gamma;
            double lead = (t == 0) ? static_cast<double>(degree[static_cast<std::size_t>(j)])
                                   : basis.values(t, j);
            c(j, j) = params.alpha * lead + base + shift;
        }
        reduced.push_back(std::move(c));
    }
    return UniversalSetup{std::move(basis), std::move(reduced)};
}

}  // namespace detail

/// Adjacency spectrum of the H-product of commuting factors: the factor
/// matrices share an eigenbasis, so the product's spectrum pools the n
/// reduced matrices diag_j(lambda_{t,j}) + A(H).
inline SpectrumReport adjacency_spectrum_hproduct(const Graph& h, const std::vector<Graph>& factors,
                                                  double tol = kCommuteTol) {
    detail::check_job_shape(h, factors);
    detail::Timer timer;
    auto family = detail::adjacency_family(factors);
    CommonBasis basis = common_eigenbasis(family, std::nullopt, tol);

    const Index n = factors[0].order();
    std::vector<EigenDecomposition> decomps;
    decomps.reserve(factors.size());
    for (std::size_t j = 0; j < factors.size(); ++j)
        decomps.push_back(EigenDecomposition{basis.values.col(static_cast<Index>(j)), basis.vectors});

    FiedlerInput input{std::move(family), std::move(decomps), n,
                       CouplingSpec(adjacency_matrix<double>(h))};
    auto detailed = coupled_spectrum_detailed(input);
    return SpectrumReport{std::move(detailed.spectrum), std::move(detailed.reduced), std::nullopt,
                          std::nullopt, timer.ms(), 0.0};
}

/// Universal adjacency spectrum (alpha != 0, regular commuting factors):
/// pools the n reduced matrices from the all-ones-seeded common basis.
inline SpectrumReport universal_spectrum_hproduct(const Graph& h, const std::vector<Graph>& factors,
                                                  const UniversalParams& params,
                                                  double tol = kCommuteTol) {
    detail::Timer timer;
    auto setup = detail::universal_setup(h, factors, params, tol);

    const Index n = factors[0].order();
    const Index l = h.order();
    std::vector<RawValue> raw;
    raw.reserve(static_cast<std::size_t>(n * l));
    std::vector<ReducedMatrixInfo> infos;
    infos.reserve(static_cast<std::size_t>(n));
    for (Index t = 0; t < n; ++t) {
        Vector vals = detail::eigh_dense_values(setup.reduced[static_cast<std::size_t>(t)]);
        for (Index s = 0; s < vals.size(); ++s)
            raw.push_back({vals(s), {SpectralSource::Reduced, t, s}});
        infos.push_back(
            ReducedMatrixInfo{t, std::move(setup.reduced[static_cast<std::size_t>(t)]), std::move(vals)});
    }
    return SpectrumReport{Spectrum(std::move(raw)), std::move(infos), std::nullopt, std::nullopt,
                          timer.ms(), 0.0};
}

inline SpectrumReport laplacian_spectrum_hproduct(const Graph& h, const std::vector<Graph>& factors,
                                                  double tol = kCommuteTol) {
    return universal_spectrum_hproduct(h, factors, kLaplacianParams, tol);
}

inline SpectrumReport signless_laplacian_spectrum_hproduct(const Graph& h,
                                                           const std::vector<Graph>& factors,
                                                           double tol = kCommuteTol) {
    return universal_spectrum_hproduct(h, factors, kSignlessLaplacianParams, tol);
}

inline SpectrumReport seidel_spectrum_hproduct(const Graph& h, const std::vector<Graph>& factors,
                                               double tol = kCommuteTol) {
    return universal_spectrum_hproduct(h, factors, kSeidelParams, tol);
}

/// The job's full product matrix, assembled explicitly.
inline SymMatrix job_matrix(const HProductJob& job) {
    Graph g = h_product(job.h, job.factors);
    return universal_matrix(g, params_for(job.kind, job.params));
}

/// Ground truth: eigensolve the assembled product matrix directly. Works on
/// any job, commuting or not, regular or not.
inline Spectrum dense_oracle_spectrum(const HProductJob& job) {
    Vector vals = eigh_values(job_matrix(job));
    std::vector<RawValue> raw;
    raw.reserve(static_cast<std::size_t>(vals.size()));
    for (Index i = 0; i < vals.size(); ++i)
        raw.push_back({vals(i), {SpectralSource::Dense, i, 0}});
    return Spectrum(std::move(raw));
}

/// Full eigenpairs of the universal adjacency matrix of the product: the
/// reduced eigenvector weights are distributed over each block's common
/// basis vector for that slot.
inline std::vector<EigenPair> universal_eigenpairs(const Graph& h, const std::vector<Graph>& factors,
                                                   const UniversalParams& params,
                                                   double tol = kCommuteTol) {
    auto setup = detail::universal_setup(h, factors, params, tol);
    const Index n = factors[0].order();
    const Index l = h.order();

    std::vector<EigenPair> pairs;
    pairs.reserve(static_cast<std::size_t>(n * l));
    for (Index t = 0; t < n; ++t) {
        EigenDecomposition ed = detail::eigh_dense(setup.reduced[static_cast<std::size_t>(t)]);
        for (Index s = 0; s < l; ++s) {
            Vector v = Vector::Zero(n * l);
            for (Index j = 0; j < l; ++j)
                v.segment(j * n, n) = ed.vectors(j, s) * setup.basis.vectors.col(t);
            v /= v.norm();
            pairs.push_back({ed.values(s), std::move(v), {SpectralSource::Reduced, t, s}});
        }
    }
    return pairs;
}

/// Structured path for the job's matrix kind, oracle disabled.
inline SpectrumReport structured_spectrum(const HProductJob& job) {
    switch (job.kind) {
        case MatrixKind::Adjacency: return adjacency_spectrum_hproduct(job.h, job.factors);
        case MatrixKind::Laplacian: return laplacian_spectrum_hproduct(job.h, job.factors);
        case MatrixKind::SignlessLaplacian:
            return signless_laplacian_spectrum_hproduct(job.h, job.factors);
        case MatrixKind::Seidel: return seidel_spectrum_hproduct(job.h, job.factors);
        case MatrixKind::Universal:
            return universal_spectrum_hproduct(job.h, job.factors, job.params);
    }
    fail(ErrorKind::InvalidInput, "structured_spectrum: unknown matrix kind");
}

/// Structured spectrum plus, unless disabled, the dense oracle and the
/// L-infinity gap between the two, measured at job.tolerance.
inline SpectrumReport run_job(const HProductJob& job) {
    SpectrumReport report = structured_spectrum(job);
    if (job.run_oracle) {
        detail::Timer timer;
        Spectrum oracle = dense_oracle_spectrum(job);
        report.oracle_ms = timer.ms();
        report.max_abs_diff = compare_spectra(report.structured, oracle, job.tolerance).max_abs_diff;
        report.oracle = std::move(oracle);
    }
    return report;
}

}  // namespace specht
