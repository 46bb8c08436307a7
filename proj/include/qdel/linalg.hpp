// Copyright (c) 2026 qdel contributors.
// SPDX-License-Identifier: Apache-2.0

#pragma once

#include <algorithm>
#include <cmath>
#include <complex>
#include <numeric>
#include <vector>

#include "qdel/errors.hpp"

namespace qdel {

using cxd = std::complex<double>;

/// Dense square complex matrix, row-major. Small by construction: reduced
/// operators on erased subsystems, Gram matrices, logical density matrices.
struct DenseOperator {
    int dim = 0;
    std::vector<cxd> a;

    DenseOperator() = default;
    explicit DenseOperator(int d) : dim(d), a(static_cast<std::size_t>(d) * d, cxd(0.0)) {}

    cxd& at(int r, int c) { return a[static_cast<std::size_t>(r) * dim + c]; }
    const cxd& at(int r, int c) const { return a[static_cast<std::size_t>(r) * dim + c]; }

    static DenseOperator identity(int d, double scale = 1.0) {
        DenseOperator m(d);
        for (int i = 0; i < d; ++i) m.at(i, i) = scale;
        return m;
    }

    cxd trace() const {
        cxd t = 0.0;
        for (int i = 0; i < dim; ++i) t += at(i, i);
        return t;
    }

    double hermiticity_deviation() const {
        double dev = 0.0;
        for (int r = 0; r < dim; ++r)
            for (int c = r; c < dim; ++c)
                dev = std::max(dev, std::abs(at(r, c) - std::conj(at(c, r))));
        return dev;
    }
};

/// Largest entrywise |A - B|.
inline double operator_deviation(const DenseOperator& a, const DenseOperator& b) {
    if (a.dim != b.dim) throw InputError("operator_deviation: dimension mismatch");
    double dev = 0.0;
    for (std::size_t i = 0; i < a.a.size(); ++i) dev = std::max(dev, std::abs(a.a[i] - b.a[i]));
    return dev;
}

inline double max_abs(const DenseOperator& a) {
    double m = 0.0;
    for (const cxd& v : a.a) m = std::max(m, std::abs(v));
    return m;
}

struct Eigensystem {
    std::vector<double> values;       ///< descending
    std::vector<std::vector<cxd>> vectors;  ///< vectors[b][a], orthonormal, phase-fixed
};

/// Cyclic Jacobi eigensolver for Hermitian matrices. Eigenvalues sorted
/// descending; ties broken by lexicographic comparison of the phase-fixed
/// eigenvectors (first component of magnitude > 1e-12 made positive real), so
/// the output is deterministic.
inline Eigensystem hermitian_eigensystem(DenseOperator m) {
    if (m.hermiticity_deviation() > 1e-9)
        throw InputError("hermitian_eigensystem: matrix is not Hermitian");
    const int n = m.dim;
    // V accumulates the rotations: columns become eigenvectors of the input.
    DenseOperator v = DenseOperator::identity(n);

    double off = 0.0;
    for (int r = 0; r < n; ++r)
        for (int c = 0; c < n; ++c)
            if (r != c) off = std::max(off, std::abs(m.at(r, c)));

    for (int sweep = 0; sweep < 100 && off > 1e-15; ++sweep) {
        for (int p = 0; p < n - 1; ++p) {
            for (int q = p + 1; q < n; ++q) {
                cxd apq = m.at(p, q);
                if (std::abs(apq) <= 1e-18) continue;
                // unitary 2x2 rotation diagonalizing [[app, apq], [conj(apq), aqq]]
                double app = m.at(p, p).real();
                double aqq = m.at(q, q).real();
                cxd phase = apq / std::abs(apq);
                double theta = 0.5 * std::atan2(2.0 * std::abs(apq), app - aqq);
                double c = std::cos(theta), s = std::sin(theta);
                cxd sp = s * phase;
                // columns p,q of M and V: right-multiplication by the rotation
                for (int r = 0; r < n; ++r) {
                    cxd mp = m.at(r, p), mq = m.at(r, q);
                    m.at(r, p) = c * mp + std::conj(sp) * mq;
                    m.at(r, q) = -sp * mp + c * mq;
                    cxd vp = v.at(r, p), vq = v.at(r, q);
                    v.at(r, p) = c * vp + std::conj(sp) * vq;
                    v.at(r, q) = -sp * vp + c * vq;
                }
                // rows p,q of M: left-multiplication by the adjoint
                for (int col = 0; col < n; ++col) {
                    cxd mp = m.at(p, col), mq = m.at(q, col);
                    m.at(p, col) = c * mp + sp * mq;
                    m.at(q, col) = -std::conj(sp) * mp + c * mq;
                }
            }
        }
        off = 0.0;
        for (int r = 0; r < n; ++r)
            for (int c2 = 0; c2 < n; ++c2)
                if (r != c2) off = std::max(off, std::abs(m.at(r, c2)));
    }

    std::vector<int> order(n);
    std::iota(order.begin(), order.end(), 0);

    std::vector<std::vector<cxd>> cols(n, std::vector<cxd>(n));
    for (int b = 0; b < n; ++b) {
        for (int r = 0; r < n; ++r) cols[b][r] = v.at(r, b);
        // phase fix: first non-negligible component positive real
        for (int r = 0; r < n; ++r) {
            if (std::abs(cols[b][r]) > 1e-12) {
                cxd ph = std::conj(cols[b][r]) / std::abs(cols[b][r]);
                for (int k = 0; k < n; ++k) cols[b][k] *= ph;
                break;
            }
        }
    }

    auto lex_less = [&](const std::vector<cxd>& x, const std::vector<cxd>& y) {
        for (int r = 0; r < n; ++r) {
            if (x[r].real() != y[r].real()) return x[r].real() < y[r].real();
            if (x[r].imag() != y[r].imag()) return x[r].imag() < y[r].imag();
        }
        return false;
    };
    std::sort(order.begin(), order.end(), [&](int i, int j) {
        double li = m.at(i, i).real(), lj = m.at(j, j).real();
        if (std::abs(li - lj) > 1e-14) return li > lj;
        return lex_less(cols[i], cols[j]);
    });

    Eigensystem es;
    for (int b : order) {
        es.values.push_back(m.at(b, b).real());
        es.vectors.push_back(cols[b]);
    }
    return es;
}

/// Smallest eigenvalue; the positive-semidefiniteness check for densified
/// operators.
inline double min_eigenvalue(const DenseOperator& m) {
    auto es = hermitian_eigensystem(m);
    return es.values.back();
}

}  // namespace qdel
