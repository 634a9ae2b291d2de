#pragma once

#include <cmath>
#include <cstddef>
#include <optional>
#include <utility>
#include <vector>

#include "poincare/errors.hpp"
#include "poincare/pmf.hpp"

// Exact spectral-gap constant of a finite pmf.
//
// The constant is
//
//   R = sup_g  Var g(X) / E (Dg)(X)^2,   (Dg)(x) = g(x+1) - g(x),
//
// the supremum over non-constant g.  For a pmf on {0,...,N} only g(0..N)
// matter in the numerator and g(N+1) only through the weight P(N)(Dg)(N)^2,
// which is minimized by pinning g(N+1) = g(N).  Substituting
// d(u) = (Dg)(u) turns the variance into a quadratic form,
//
//   Var g(X) = sum_{u,v} d(u) d(v) K(u,v),   K(u,v) = F(min)(1 - F(max)),
//
// the covariance kernel of threshold indicators, with u,v ranging over
// {0,...,N-1}.  With e(u) = sqrt(P(u)) d(u) the quotient becomes a plain
// Rayleigh quotient, so
//
//   R = lambda_max( D^{-1/2} K D^{-1/2} ),   D = diag P,
//
// restricted to positive-mass indices.  The diagonal of the conjugated
// kernel is F(u)(1-F(u))/P(u), so the top eigenvalue dominates every
// one of those ratios.  An interior zero mass makes R infinite: a step
// function across the gap has zero Dirichlet energy but positive variance.

namespace poincare {

enum class GapKind { Finite, Infinite, Degenerate };

struct ExactGap {
    GapKind kind = GapKind::Degenerate;
    std::optional<double> value;                    // present iff Finite
    std::optional<std::vector<double>> witness;     // on {0,...,N+1}; Finite or Infinite
    std::optional<std::size_t> gap_location;        // interior zero; Infinite only
};

// Dense row-major square matrix; just enough for the eigensolver.
struct DenseMatrix {
    std::size_t n = 0;
    std::vector<double> a;

    static DenseMatrix zeros(std::size_t n) { return DenseMatrix{n, std::vector<double>(n * n, 0.0)}; }
    static DenseMatrix identity(std::size_t n) {
        DenseMatrix m = zeros(n);
        for (std::size_t i = 0; i < n; ++i) m.at(i, i) = 1.0;
        return m;
    }
    double& at(std::size_t i, std::size_t j) { return a[i * n + j]; }
    double at(std::size_t i, std::size_t j) const { return a[i * n + j]; }
};

struct KernelMatrix {
    std::size_t size = 0;                 // indices u,v in {0,...,N-1}
    std::vector<double> entries;          // row-major, symmetric PSD
    double at(std::size_t u, std::size_t v) const { return entries[u * size + v]; }
};

inline double dirichlet_form(const Pmf& p, const std::vector<double>& g) {
    if (g.size() != p.size() + 1)
        throw LengthMismatch("dirichlet_form: g must have length N+2");
    double s = 0.0;
    for (std::size_t x = 0; x < p.size(); ++x) {
        const double d = g[x + 1] - g[x];
        s += p[x] * d * d;
    }
    return s;
}

inline double centered_second_moment(const Pmf& p, const std::vector<double>& g) {
    if (g.size() != p.size() + 1)
        throw LengthMismatch("centered_second_moment: g must have length N+2");
    double mean = 0.0;
    for (std::size_t x = 0; x < p.size(); ++x)
        mean += p[x] * g[x];
    double s = 0.0;
    for (std::size_t x = 0; x < p.size(); ++x) {
        const double c = g[x] - mean;
        s += p[x] * c * c;
    }
    return s;
}

inline double rayleigh(const Pmf& p, const std::vector<double>& g) {
    const double den = dirichlet_form(p, g);
    if (den == 0.0)
        throw ZeroDirichlet("rayleigh: Dirichlet form vanishes");
    return centered_second_moment(p, g) / den;
}

inline KernelMatrix kernel_matrix(const Pmf& p) {
    if (p.max_index() < 1)
        throw DegenerateSupport("kernel_matrix: single-point support");
    const std::size_t n = p.max_index();   // indices 0..N-1
    const std::vector<double> f = p.cdf();
    const std::vector<double> t = p.tail();
    KernelMatrix k{n, std::vector<double>(n * n, 0.0)};
    for (std::size_t u = 0; u < n; ++u)
        for (std::size_t v = 0; v < n; ++v)
            k.entries[u * n + v] = f[std::min(u, v)] * t[std::max(u, v)];
    return k;
}

namespace detail {

// Cyclic Jacobi diagonalization.  Stops when the off-diagonal Frobenius mass
// falls below 1e-14 of the matrix norm; the sweep cap keeps the rotation
// budget above 10^6 even for tiny matrices.
inline void jacobi_diagonalize(DenseMatrix& m, DenseMatrix& vecs) {
    const std::size_t n = m.n;
    vecs = DenseMatrix::identity(n);
    if (n < 2) return;

    double norm = 0.0;
    for (double v : m.a) norm += v * v;
    norm = std::sqrt(norm);
    if (norm == 0.0) return;
    const double off_tol = 1e-14 * norm;

    const std::size_t rot_per_sweep = n * (n - 1) / 2;
    const std::size_t max_sweeps =
        std::max<std::size_t>(64, 2'000'000 / std::max<std::size_t>(rot_per_sweep, 1));

    for (std::size_t sweep = 0; sweep < max_sweeps; ++sweep) {
        double off = 0.0;
        for (std::size_t i = 0; i < n; ++i)
            for (std::size_t j = i + 1; j < n; ++j)
                off += 2.0 * m.at(i, j) * m.at(i, j);
        if (std::sqrt(off) <= off_tol)
            return;

        for (std::size_t p = 0; p + 1 < n; ++p) {
            for (std::size_t q = p + 1; q < n; ++q) {
                const double apq = m.at(p, q);
                if (std::abs(apq) <= 1e-300)
                    continue;
                const double theta = (m.at(q, q) - m.at(p, p)) / (2.0 * apq);
                const double t = (theta >= 0.0 ? 1.0 : -1.0)
                               / (std::abs(theta) + std::sqrt(theta * theta + 1.0));
                const double c = 1.0 / std::sqrt(t * t + 1.0);
                const double s = t * c;

                const double app = m.at(p, p), aqq = m.at(q, q);
                m.at(p, p) = app - t * apq;
                m.at(q, q) = aqq + t * apq;
                m.at(p, q) = m.at(q, p) = 0.0;
                for (std::size_t i = 0; i < n; ++i) {
                    if (i == p || i == q) continue;
                    const double aip = m.at(i, p), aiq = m.at(i, q);
                    m.at(i, p) = m.at(p, i) = c * aip - s * aiq;
                    m.at(i, q) = m.at(q, i) = s * aip + c * aiq;
                }
                for (std::size_t i = 0; i < n; ++i) {
                    const double vip = vecs.at(i, p), viq = vecs.at(i, q);
                    vecs.at(i, p) = c * vip - s * viq;
                    vecs.at(i, q) = s * vip + c * viq;
                }
            }
        }
    }
    throw NoConvergence("jacobi_diagonalize: sweep cap exceeded");
}

} // namespace detail

// All eigenvalues (unordered) with eigenvectors as matrix columns.
inline std::pair<std::vector<double>, DenseMatrix> symmetric_eigen_all(DenseMatrix m) {
    const std::size_t n = m.n;
    double scale = 0.0;
    for (double v : m.a) scale = std::max(scale, std::abs(v));
    for (std::size_t i = 0; i < n; ++i)
        for (std::size_t j = i + 1; j < n; ++j)
            if (std::abs(m.at(i, j) - m.at(j, i)) > 1e-12 * std::max(scale, 1e-300))
                throw BadParameter("symmetric_eigen: matrix is not symmetric");
    DenseMatrix vecs;
    detail::jacobi_diagonalize(m, vecs);
    std::vector<double> vals(n);
    for (std::size_t i = 0; i < n; ++i) vals[i] = m.at(i, i);
    return {std::move(vals), std::move(vecs)};
}

// Top eigenpair of a symmetric matrix.  Deterministic; residual
// ||Mv - lambda v|| <= 1e-10 ||M|| ||v||.
inline std::pair<double, std::vector<double>> symmetric_eigen_max(const DenseMatrix& m) {
    auto [vals, vecs] = symmetric_eigen_all(m);
    std::size_t best = 0;
    for (std::size_t i = 1; i < vals.size(); ++i)
        if (vals[i] > vals[best]) best = i;
    std::vector<double> v(m.n);
    for (std::size_t i = 0; i < m.n; ++i) v[i] = vecs.at(i, best);
    return {vals[best], std::move(v)};
}

inline ExactGap poincare_exact(const Pmf& p) {
    ExactGap out;
    const std::size_t lo = p.support_min();
    const std::size_t hi = p.max_index();

    if (lo == hi) {
        out.kind = GapKind::Degenerate;
        return out;
    }

    const std::size_t gap = p.first_gap();
    if (gap < p.size()) {
        // Disconnected support: a centered step across the gap has positive
        // variance and zero Dirichlet energy.
        out.kind = GapKind::Infinite;
        out.gap_location = gap;
        std::size_t resume = gap;
        while (p[resume] == 0.0) ++resume;
        double right_mass = 0.0;
        for (std::size_t x = resume; x < p.size(); ++x) right_mass += p[x];
        std::vector<double> g(p.size() + 1, -right_mass);
        for (std::size_t x = resume; x < g.size(); ++x) g[x] = 1.0 - right_mass;
        out.witness = std::move(g);
        return out;
    }

    // Connected support {lo,...,hi}: conjugated covariance kernel on the
    // positive-mass difference indices {lo,...,hi-1}.
    const std::vector<double> f = p.cdf();
    const std::vector<double> t = p.tail();
    const std::size_t dim = hi - lo;
    DenseMatrix b = DenseMatrix::zeros(dim);
    for (std::size_t i = 0; i < dim; ++i) {
        const std::size_t u = lo + i;
        for (std::size_t j = i; j < dim; ++j) {
            const std::size_t v = lo + j;
            const double kuv = f[u] * t[v];
            const double val = kuv / std::sqrt(p[u] * p[v]);
            b.at(i, j) = b.at(j, i) = val;
        }
    }
    auto [value, d] = symmetric_eigen_max(b);

    // g(x) = sum_{y<x} d(y)/sqrt(P(y)), tail pinned, then mean-centered.
    std::vector<double> g(p.size() + 1, 0.0);
    for (std::size_t x = lo + 1; x <= hi; ++x)
        g[x] = g[x - 1] + d[x - 1 - lo] / std::sqrt(p[x - 1]);
    g[hi + 1] = g[hi];
    double mean = 0.0;
    for (std::size_t x = 0; x < p.size(); ++x) mean += p[x] * g[x];
    for (double& v : g) v -= mean;

    const double q = rayleigh(p, g);
    if (!(q >= value * (1.0 - 1e-6) && q <= value * (1.0 + 1e-6)))
        throw Error("poincare_exact: witness quotient disagrees with eigenvalue");

    out.kind = GapKind::Finite;
    out.value = value;
    out.witness = std::move(g);
    return out;
}

} // namespace poincare
