#pragma once

// Shared test utilities: a platform-stable RNG (so every randomized suite is
// reproducible bit-for-bit on any libc), generators for random symmetric
// matrices and commuting graph families, and an eigenvalue oracle that is
// independent of the library's solver path.

#include <specht/core.hpp>

#include <cmath>
#include <cstdint>
#include <optional>
#include <utility>
#include <vector>

namespace testsup {

using specht::Index;
using specht::Matrix;
using specht::Vector;

// splitmix64; fully specified arithmetic, no standard-library distributions.
struct Rng {
    std::uint64_t state;

    explicit Rng(std::uint64_t seed) : state(seed) {}

    std::uint64_t next() {
        state += 0x9e3779b97f4a7c15ULL;
        std::uint64_t z = state;
        z = (z ^ (z >> 30)) * 0xbf58476d1ce4e5b9ULL;
        z = (z ^ (z >> 27)) * 0x94d049bb133111ebULL;
        return z ^ (z >> 31);
    }

    // uniform in [0, 1)
    double uniform01() { return static_cast<double>(next() >> 11) * 0x1.0p-53; }

    double uniform(double lo, double hi) { return lo + (hi - lo) * uniform01(); }

    // uniform integer in [lo, hi] inclusive
    long uniform_int(long lo, long hi) {
        return lo + static_cast<long>(next() % static_cast<std::uint64_t>(hi - lo + 1));
    }

    bool coin() { return (next() & 1u) != 0; }
};

inline Matrix random_symmetric(Rng& rng, Index n, double lo = -2.0, double hi = 2.0) {
    Matrix m(n, n);
    for (Index i = 0; i < n; ++i)
        for (Index j = i; j < n; ++j) {
            double v = rng.uniform(lo, hi);
            m(i, j) = v;
            m(j, i) = v;
        }
    return m;
}

// --- independent eigenvalue oracle -----------------------------------------
//
// Counts eigenvalues of a symmetric matrix strictly below x through the pivot
// signs of the LDL^T factorization of (A - xI): by Sylvester's law of inertia
// the number of negative pivots equals the number of roots of det(A - tI)
// below x.  Each eigenvalue is then located by bisection on that count.  This
// never touches the library's eigensolver, so it can sit in judgment of it.

// Returns the count, or -1 when elimination breaks down (x is effectively a
// root of a leading principal minor); callers nudge x and retry.
inline int inertia_below(const Matrix& a, double x) {
    const Index n = a.rows();
    Matrix m = a;
    for (Index i = 0; i < n; ++i) m(i, i) -= x;
    const double tiny = 1e-280;
    int negatives = 0;
    for (Index k = 0; k < n; ++k) {
        double pivot = m(k, k);
        if (std::abs(pivot) < tiny) return -1;
        if (pivot < 0.0) ++negatives;
        for (Index i = k + 1; i < n; ++i) {
            double f = m(i, k) / pivot;
            for (Index j = k + 1; j < n; ++j) m(i, j) -= f * m(k, j);
        }
    }
    return negatives;
}

inline int count_below(const Matrix& a, double x) {
    double scale = std::max(1.0, std::abs(x));
    for (int attempt = 0; attempt < 64; ++attempt) {
        int c = inertia_below(a, x);
        if (c >= 0) return c;
        x += scale * 1e-13 * static_cast<double>(attempt + 1);
    }
    // Pathological; treat the final perturbed count as authoritative.
    return inertia_below(a, x + scale * 1e-10);
}

// All eigenvalues, descending, located by inertia bisection.
inline std::vector<double> bisection_eigenvalues(const Matrix& a, double tol = 1e-12) {
    const Index n = a.rows();
    double radius = 0.0;
    for (Index i = 0; i < n; ++i) radius = std::max(radius, a.row(i).cwiseAbs().sum());
    radius += 1.0;

    std::vector<double> out;
    out.reserve(static_cast<std::size_t>(n));
    for (Index k = n; k >= 1; --k) {  // k-th smallest, taken from the top
        double lo = -radius, hi = radius;
        double width = tol * std::max(1.0, radius);
        while (hi - lo > width) {
            double mid = 0.5 * (lo + hi);
            if (count_below(a, mid) >= static_cast<int>(k)) hi = mid;
            else lo = mid;
        }
        out.push_back(0.5 * (lo + hi));
    }
    return out;  // descending
}

// Runs f, returning the ErrorKind it threw, or nullopt if it returned.
template <typename F>
inline std::optional<specht::ErrorKind> error_kind_of(F&& f) {
    try {
        std::forward<F>(f)();
    } catch (const specht::Error& e) {
        return e.kind();
    }
    return std::nullopt;
}

}  // namespace testsup
