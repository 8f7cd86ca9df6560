// Shared test helpers: independent oracles and randomized generators.
// Everything here is deliberately naive so it cannot share bugs with the
// library's elimination or truncation kernels.
#pragma once

#include <random>
#include <vector>

#include "cychom/complex.hpp"
#include "cychom/linalg.hpp"
#include "cychom/mixed.hpp"

namespace testsupport {

using cychom::ChainComplex;
using cychom::Matrix;
using cychom::Rational;
using cychom::Subcomplex;
using cychom::Subspace;
using cychom::Vec;
using Q = Rational;

// Textbook dense Gaussian elimination, no scaling tricks, row-major pivot
// scan. Used as the independent rank oracle.
inline int naive_rank(std::vector<std::vector<Q>> a) {
    int rows = static_cast<int>(a.size());
    int cols = rows ? static_cast<int>(a[0].size()) : 0;
    int r = 0;
    for (int c = 0; c < cols && r < rows; ++c) {
        int piv = -1;
        for (int i = r; i < rows; ++i)
            if (!a[i][c].is_zero()) { piv = i; break; }
        if (piv < 0) continue;
        std::swap(a[piv], a[r]);
        for (int i = 0; i < rows; ++i) {
            if (i == r || a[i][c].is_zero()) continue;
            Q f = a[i][c] / a[r][c];
            for (int j = c; j < cols; ++j) a[i][j] -= f * a[r][j];
        }
        ++r;
    }
    return r;
}

inline std::vector<std::vector<Q>> to_dense(const Matrix<Q>& m) {
    std::vector<std::vector<Q>> d(m.rows(), std::vector<Q>(m.cols(), Q(0)));
    m.for_each([&](int i, int j, const Q& v) { d[i][j] = v; });
    return d;
}

struct Rng {
    explicit Rng(unsigned seed) : eng(seed) {}
    int uniform(int lo, int hi) {
        return std::uniform_int_distribution<int>(lo, hi)(eng);
    }
    Q scalar(int mag = 3) { return Q(uniform(-mag, mag)); }
    Q nonzero_scalar(int mag = 3) {
        while (true) {
            Q v = scalar(mag);
            if (!v.is_zero()) return v;
        }
    }
    Matrix<Q> matrix(int rows, int cols, int density_pct = 60, int mag = 2) {
        Matrix<Q> m(rows, cols);
        for (int i = 0; i < rows; ++i)
            for (int j = 0; j < cols; ++j)
                if (uniform(0, 99) < density_pct) m.set(i, j, scalar(mag));
        return m;
    }
    std::mt19937_64 eng;
};

// Random chain complex: dims <= max_dim per degree, single weight 0.
// d is built top-down so each differential lands in the kernel of the next.
inline ChainComplex<Q> random_complex(Rng& rng, int d_min, int d_max, int max_dim) {
    ChainComplex<Q> c(d_min, d_max, 0);
    std::map<int, int> dims;
    for (int n = d_min; n <= d_max; ++n) {
        dims[n] = rng.uniform(0, max_dim);
        if (dims[n]) c.set_module(n, 0, cychom::BasedModule{dims[n], {}});
    }
    Matrix<Q> prev_d(0, 0);
    bool have_prev = false;
    for (int n = d_min + 1; n <= d_max; ++n) {
        if (dims[n] == 0 || dims[n - 1] == 0) {
            have_prev = false;
            continue;
        }
        Matrix<Q> d;
        if (!have_prev) {
            d = rng.matrix(dims[n - 1], dims[n]);
        } else {
            Subspace<Q> ker = cychom::kernel_basis(prev_d);
            Matrix<Q> coeff = rng.matrix(ker.dim(), dims[n]);
            d = ker.basis() * coeff;
        }
        c.set_diff(n, 0, d);
        prev_d = d;
        have_prev = true;
    }
    c.validate();
    return c;
}

// Random subcomplex of c inside the given outer subcomplex, closed under d.
inline Subcomplex<Q> random_subcomplex_inside(Rng& rng, const ChainComplex<Q>& c,
                                              const Subcomplex<Q>& outer) {
    Subcomplex<Q> s;
    for (int n = c.d_max(); n >= c.d_min(); --n) {
        int amb = c.dim(n, 0);
        Subspace<Q> out_sp = outer.slice(n, 0, amb);
        if (out_sp.dim() == 0) continue;
        // random columns inside the outer slice
        int want = rng.uniform(0, out_sp.dim());
        Matrix<Q> cols = out_sp.basis() * rng.matrix(out_sp.dim(), want, 70, 1);
        // add d-image of the slice one degree up
        Subspace<Q> above = s.slice(n + 1, 0, c.dim(n + 1, 0));
        if (above.dim() > 0) cols = Matrix<Q>::hstack(cols, c.diff(n + 1, 0) * above.basis());
        Subspace<Q> sp = Subspace<Q>::span(cols);
        if (sp.dim() > 0) s.set(n, 0, sp);
    }
    return s;
}

inline Subcomplex<Q> random_subcomplex(Rng& rng, const ChainComplex<Q>& c) {
    return random_subcomplex_inside(rng, c, cychom::full_subcomplex(c));
}

// free S¹-module on a complex A: C_n = A_n ⊕ A_{n-1}, B embeds the first
// summand into the second one degree up
inline cychom::MixedComplex<Q> free_mixed(const ChainComplex<Q>& a) {
    cychom::MixedComplex<Q> m;
    m.complex = ChainComplex<Q>(a.d_min(), a.d_max() + 1, 0);
    for (int n = a.d_min(); n <= a.d_max() + 1; ++n) {
        int d = a.dim(n, 0) + a.dim(n - 1, 0);
        if (d) m.complex.set_module(n, 0, cychom::BasedModule{d, {}});
    }
    for (int n = a.d_min() + 1; n <= a.d_max() + 1; ++n) {
        int rows = m.complex.dim(n - 1, 0), cols = m.complex.dim(n, 0);
        if (rows == 0 || cols == 0) continue;
        Matrix<Q> d(rows, cols);
        a.diff(n, 0).for_each([&](int i, int j, const Q& v) { d.set(i, j, v); });
        a.diff(n - 1, 0).for_each(
            [&](int i, int j, const Q& v) { d.set(a.dim(n - 1, 0) + i, a.dim(n, 0) + j, -v); });
        m.complex.set_diff(n, 0, d);
    }
    for (int n = a.d_min(); n <= a.d_max(); ++n) {
        int rows = m.complex.dim(n + 1, 0), cols = m.complex.dim(n, 0);
        if (rows == 0 || cols == 0 || a.dim(n, 0) == 0) continue;
        Matrix<Q> B(rows, cols);
        for (int i = 0; i < a.dim(n, 0); ++i) B.set(a.dim(n + 1, 0) + i, i, Q(1));
        m.set_B(n, 0, B);
    }
    m.validate();
    return m;
}

inline Matrix<Q> random_invertible(Rng& rng, int n) {
    while (true) {
        Matrix<Q> g = rng.matrix(n, n, 70, 2);
        try {
            cychom::inverse(g);
            return g;
        } catch (const cychom::invariant_error&) {
        }
    }
}

// conjugate both operators by a random degreewise automorphism
inline cychom::MixedComplex<Q> conjugate_mixed(Rng& rng, const cychom::MixedComplex<Q>& m) {
    std::map<int, Matrix<Q>> g, gi;
    for (int n = m.complex.d_min(); n <= m.complex.d_max(); ++n) {
        int d = m.complex.dim(n, 0);
        g[n] = d ? random_invertible(rng, d) : Matrix<Q>(0, 0);
        gi[n] = d ? cychom::inverse(g[n]) : Matrix<Q>(0, 0);
    }
    cychom::MixedComplex<Q> out;
    out.complex = ChainComplex<Q>(m.complex.d_min(), m.complex.d_max(), 0);
    for (const auto& [key, mod] : m.complex.modules()) out.complex.set_module(key.first, 0, mod);
    for (int n = m.complex.d_min() + 1; n <= m.complex.d_max(); ++n) {
        if (m.complex.dim(n, 0) == 0 || m.complex.dim(n - 1, 0) == 0) continue;
        out.complex.set_diff(n, 0, g.at(n - 1) * m.complex.diff(n, 0) * gi.at(n));
    }
    for (int n = m.complex.d_min(); n < m.complex.d_max(); ++n) {
        if (m.complex.dim(n, 0) == 0 || m.complex.dim(n + 1, 0) == 0) continue;
        out.set_B(n, 0, g.at(n + 1) * m.B(n, 0) * gi.at(n));
    }
    out.validate();
    return out;
}

inline cychom::MixedComplex<Q> random_mixed(Rng& rng) {
    ChainComplex<Q> a = random_complex(rng, 0, rng.uniform(1, 3), 3);
    return conjugate_mixed(rng, free_mixed(a));
}

}  // namespace testsupport
