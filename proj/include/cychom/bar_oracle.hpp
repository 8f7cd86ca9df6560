// Brute-force oracle: the UNnormalized cyclic bar complex with the textbook
// Connes operator B = (1 - t) s N. Units may occupy any tensor slot, so each
// weight is unbounded in degree; the model is cut at a requested degree cap
// by the good-truncation quotient, which preserves homology up to the cap.
// Used to cross-check the normalized model; deliberately built from the
// operator definitions rather than the simplified normalized formulas.
#pragma once

#include <functional>
#include <map>
#include <vector>

#include "cychom/hochschild.hpp"

namespace cychom::bar {

// all tuples (m_0, ..., m_n) of basis monomials of total weight w
inline std::vector<Tensor> enumerate_full_tensors(const AlgebraPresentation& r, int n, int w) {
    std::vector<Tensor> out;
    Tensor cur(static_cast<std::size_t>(n) + 1);
    std::function<void(int, int)> rec = [&](int slot, int remaining) {
        if (slot == n + 1) {
            if (remaining == 0) out.push_back(cur);
            return;
        }
        for (int wt = 0; wt <= remaining; ++wt)
            for (const Monomial& m : monomial_basis_list(r, wt)) {
                cur[static_cast<std::size_t>(slot)] = m;
                rec(slot + 1, remaining - wt);
            }
    };
    rec(0, w);
    std::sort(out.begin(), out.end());
    return out;
}

template <class K>
using Chain = std::vector<std::pair<Tensor, K>>;

// t(m_0 ⊗ ... ⊗ m_n) = (-1)^n m_n ⊗ m_0 ⊗ ... ⊗ m_{n-1}
template <class K>
Chain<K> cyclic_t(const Tensor& x, const K& c) {
    int n = static_cast<int>(x.size()) - 1;
    Tensor y;
    y.push_back(x.back());
    for (int i = 0; i < n; ++i) y.push_back(x[static_cast<std::size_t>(i)]);
    return {{y, (n % 2) ? -c : c}};
}

template <class K>
Chain<K> apply_to_chain(const Chain<K>& chain,
                        const std::function<Chain<K>(const Tensor&, const K&)>& op) {
    Chain<K> out;
    for (const auto& [t, c] : chain) {
        Chain<K> part = op(t, c);
        out.insert(out.end(), part.begin(), part.end());
    }
    return out;
}

// the unnormalized mixed complex, good-truncated above degree_cap
template <class K>
MixedComplex<K> unnormalized_mixed(const AlgebraPresentation& r, int w_cap, int degree_cap) {
    int build_top = degree_cap + 1;
    std::map<Key, std::vector<Tensor>> basis;
    std::map<Key, std::map<Tensor, int>> index;
    for (int w = 0; w <= w_cap; ++w)
        for (int n = 0; n <= build_top; ++n) {
            std::vector<Tensor> ts = enumerate_full_tensors(r, n, w);
            std::map<Tensor, int> idx;
            for (std::size_t i = 0; i < ts.size(); ++i) idx[ts[i]] = static_cast<int>(i);
            basis[{n, w}] = std::move(ts);
            index[{n, w}] = std::move(idx);
        }

    auto chain_to_column = [&](int n, int w, const Chain<K>& chain, Matrix<K>& m, int col) {
        for (const auto& [t, c] : chain) {
            auto it = index.at({n, w}).find(t);
            if (it != index.at({n, w}).end()) m.add_to(it->second, col, c);
        }
    };

    auto face_sum = [&](const Tensor& x, const K& c) -> Chain<K> {
        Chain<K> out;
        int n = static_cast<int>(x.size()) - 1;
        for (int i = 0; i < n; ++i) {
            auto prod = r.multiply(x[static_cast<std::size_t>(i)], x[static_cast<std::size_t>(i) + 1]);
            if (!prod) continue;
            Tensor face;
            for (int k = 0; k <= n; ++k) {
                if (k == i) face.push_back(*prod);
                else if (k != i + 1) face.push_back(x[static_cast<std::size_t>(k)]);
            }
            out.push_back({face, (i % 2) ? -c : c});
        }
        auto prod = r.multiply(x.back(), x.front());
        if (prod) {
            Tensor face;
            face.push_back(*prod);
            for (int k = 1; k < n; ++k) face.push_back(x[static_cast<std::size_t>(k)]);
            out.push_back({face, (n % 2) ? -c : c});
        }
        return out;
    };

    auto connes = [&](const Tensor& x) -> Chain<K> {
        int n = static_cast<int>(x.size()) - 1;
        // N = sum of t^i
        Chain<K> norm = {{x, K(1)}};
        Chain<K> acc = {{x, K(1)}};
        for (int i = 1; i <= n; ++i) {
            acc = apply_to_chain<K>(acc, [](const Tensor& t, const K& c) { return cyclic_t(t, c); });
            norm.insert(norm.end(), acc.begin(), acc.end());
        }
        // s: prepend the unit
        Monomial unit(static_cast<std::size_t>(r.num_generators()), 0);
        Chain<K> sN;
        for (const auto& [t, c] : norm) {
            Tensor y;
            y.push_back(unit);
            y.insert(y.end(), t.begin(), t.end());
            sN.push_back({y, c});
        }
        // (1 - t)
        Chain<K> out = sN;
        for (const auto& [t, c] : sN) {
            Chain<K> rotated = cyclic_t(t, c);
            for (auto& [tt, cc] : rotated) out.push_back({tt, -cc});
        }
        return out;
    };

    // assemble the complex on [0, build_top]
    ChainComplex<K> full(0, build_top, w_cap);
    for (const auto& [key, ts] : basis)
        if (!ts.empty())
            full.set_module(key.first, key.second, BasedModule{static_cast<int>(ts.size()), {}});
    for (int w = 0; w <= w_cap; ++w)
        for (int n = 1; n <= build_top; ++n) {
            const auto& ts = basis.at({n, w});
            if (ts.empty() || full.dim(n - 1, w) == 0) continue;
            Matrix<K> b(full.dim(n - 1, w), static_cast<int>(ts.size()));
            for (std::size_t j = 0; j < ts.size(); ++j)
                chain_to_column(n - 1, w, face_sum(ts[j], K(1)), b, static_cast<int>(j));
            full.set_diff(n, w, b);
        }
    full.validate();

    std::map<Key, Matrix<K>> B_full;
    for (int w = 0; w <= w_cap; ++w)
        for (int n = 0; n < build_top; ++n) {
            const auto& ts = basis.at({n, w});
            if (ts.empty() || full.dim(n + 1, w) == 0) continue;
            Matrix<K> B(full.dim(n + 1, w), static_cast<int>(ts.size()));
            for (std::size_t j = 0; j < ts.size(); ++j)
                chain_to_column(n + 1, w, connes(ts[j]), B, static_cast<int>(j));
            if (!B.is_zero()) B_full[{n, w}] = std::move(B);
        }

    // good-truncate above degree_cap: replace degree D by C_D / im(b_{D+1})
    int D = degree_cap;
    MixedComplex<K> out;
    out.complex = ChainComplex<K>(0, D, w_cap);
    std::map<int, QuotientData<K>> topq;  // per weight
    for (int w = 0; w <= w_cap; ++w) {
        for (int n = 0; n < D; ++n)
            if (full.dim(n, w))
                out.complex.set_module(n, w, BasedModule{full.dim(n, w), {}});
        if (full.dim(D, w)) {
            QuotientData<K> q = quotient_basis(Subspace<K>::full(full.dim(D, w)),
                                               image_basis(full.diff(D + 1, w)));
            if (q.dim) out.complex.set_module(D, w, BasedModule{q.dim, {}});
            topq.emplace(w, std::move(q));
        }
    }
    for (int w = 0; w <= w_cap; ++w) {
        for (int n = 1; n < D; ++n)
            if (out.complex.dim(n, w) && out.complex.dim(n - 1, w))
                out.complex.set_diff(n, w, full.diff(n, w));
        auto qt = topq.find(w);
        if (qt != topq.end() && qt->second.dim && out.complex.dim(D - 1, w))
            out.complex.set_diff(D, w, full.diff(D, w) * qt->second.representatives);
    }
    out.complex.validate();
    for (int w = 0; w <= w_cap; ++w)
        for (int n = 0; n < D; ++n) {
            auto it = B_full.find({n, w});
            if (it == B_full.end()) continue;
            if (n + 1 == D) {
                auto qt = topq.find(w);
                if (qt == topq.end() || qt->second.dim == 0) continue;
                out.set_B(n, w, qt->second.projection * it->second);
            } else {
                out.set_B(n, w, it->second);
            }
        }
    out.validate();
    return out;
}

}  // namespace cychom::bar
