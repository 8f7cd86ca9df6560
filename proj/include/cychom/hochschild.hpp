// Normalized Hochschild chains of weight-graded algebras, the b and B
// operators, the HKR comparison map, and the HKR filtration as a strict
// tower of good truncations compatible with B.
//
// Chains in weight w live in degrees 0..w (each reduced tensor slot carries
// positive weight), so every slice is finite and exact.
#pragma once

#include <algorithm>
#include <map>
#include <optional>
#include <vector>

#include "cychom/derham.hpp"
#include "cychom/filtered.hpp"
#include "cychom/mixed.hpp"

namespace cychom {

// m_0 ⊗ m_1 ⊗ ... ⊗ m_n as a tuple of exponent vectors
using Tensor = std::vector<Monomial>;

inline std::string tensor_label(const AlgebraPresentation& r, const Tensor& t) {
    std::string s;
    for (std::size_t i = 0; i < t.size(); ++i) {
        if (i) s += "|";
        s += r.monomial_label(t[i]);
    }
    return s;
}

template <class K>
struct HochschildComplex {
    AlgebraPresentation algebra;
    ChainComplex<K> complex;                     // window [0, w_cap]
    std::map<Key, std::vector<Tensor>> basis;    // per (degree, weight)
    std::map<Key, std::map<Tensor, int>> index;

    int tensor_index(int n, int w, const Tensor& t) const {
        auto it = index.find({n, w});
        if (it == index.end()) return -1;
        auto jt = it->second.find(t);
        return jt == it->second.end() ? -1 : jt->second;
    }
};

namespace detail {

// tensors of total weight w with n reduced slots; slot 0 may be the unit
inline std::vector<Tensor> enumerate_tensors(const AlgebraPresentation& r, int n, int w) {
    std::vector<Tensor> out;
    Tensor cur(static_cast<std::size_t>(n) + 1);
    std::function<void(int, int)> rec = [&](int slot, int remaining) {
        if (slot == n + 1) {
            if (remaining == 0) out.push_back(cur);
            return;
        }
        int min_wt = slot == 0 ? 0 : 1;
        for (int wt = min_wt; wt <= remaining; ++wt) {
            for (const Monomial& m : monomial_basis_list(r, wt)) {
                cur[static_cast<std::size_t>(slot)] = m;
                rec(slot + 1, remaining - wt);
            }
        }
    };
    rec(0, w);
    std::sort(out.begin(), out.end());
    return out;
}

}  // namespace detail

template <class K>
HochschildComplex<K> hochschild_complex(const AlgebraPresentation& r, int w_cap) {
    HochschildComplex<K> out;
    out.algebra = r;
    out.complex = ChainComplex<K>(0, w_cap, w_cap);
    for (int w = 0; w <= w_cap; ++w)
        for (int n = 0; n <= w; ++n) {
            std::vector<Tensor> ts = detail::enumerate_tensors(r, n, w);
            if (ts.empty()) continue;
            BasedModule m;
            m.dim = static_cast<int>(ts.size());
            for (const Tensor& t : ts) m.labels.push_back(tensor_label(r, t));
            out.complex.set_module(n, w, std::move(m));
            std::map<Tensor, int> idx;
            for (std::size_t i = 0; i < ts.size(); ++i) idx[ts[i]] = static_cast<int>(i);
            out.basis[{n, w}] = std::move(ts);
            out.index[{n, w}] = std::move(idx);
        }

    // b = alternating sum of slot multiplications, including the cyclic last face
    for (int w = 0; w <= w_cap; ++w)
        for (int n = 1; n <= w; ++n) {
            auto bit = out.basis.find({n, w});
            if (bit == out.basis.end() || out.complex.dim(n - 1, w) == 0) continue;
            const auto& tensors = bit->second;
            Matrix<K> b(out.complex.dim(n - 1, w), static_cast<int>(tensors.size()));
            for (std::size_t j = 0; j < tensors.size(); ++j) {
                const Tensor& t = tensors[j];
                for (int i = 0; i < n; ++i) {
                    std::optional<Monomial> prod = r.multiply(t[i], t[i + 1]);
                    if (!prod) continue;
                    Tensor face;
                    face.reserve(t.size() - 1);
                    for (int k = 0; k <= n; ++k) {
                        if (k == i) face.push_back(*prod);
                        else if (k != i + 1) face.push_back(t[k]);
                    }
                    int row = out.tensor_index(n - 1, w, face);
                    if (row >= 0) b.add_to(row, static_cast<int>(j), (i % 2) ? K(-1) : K(1));
                }
                // cyclic face: (m_n · m_0) ⊗ m_1 ⊗ ... ⊗ m_{n-1}
                std::optional<Monomial> prod = r.multiply(t[n], t[0]);
                if (prod) {
                    Tensor face;
                    face.push_back(*prod);
                    for (int k = 1; k < n; ++k) face.push_back(t[k]);
                    int row = out.tensor_index(n - 1, w, face);
                    if (row >= 0) b.add_to(row, static_cast<int>(j), (n % 2) ? K(-1) : K(1));
                }
            }
            out.complex.set_diff(n, w, b);
        }
    out.complex.validate();
    return out;
}

template <class K>
struct HochschildMixed {
    HochschildComplex<K> hochschild;
    MixedComplex<K> mixed;
};

// normalized Connes operator:
//   B(m_0 ⊗ ... ⊗ m_n) = Σ_i (-1)^{ni} 1 ⊗ m_i ⊗ ... ⊗ m_n ⊗ m_0 ⊗ ... ⊗ m_{i-1},
// zero when m_0 is the unit (every rotation would re-insert it inside)
template <class K>
HochschildMixed<K> connes_B(const AlgebraPresentation& r, int w_cap) {
    HochschildMixed<K> out;
    out.hochschild = hochschild_complex<K>(r, w_cap);
    out.mixed.complex = out.hochschild.complex;
    const auto& hh = out.hochschild;
    for (int w = 0; w <= w_cap; ++w)
        for (int n = 0; n < w; ++n) {
            auto bit = hh.basis.find({n, w});
            if (bit == hh.basis.end() || hh.complex.dim(n + 1, w) == 0) continue;
            const auto& tensors = bit->second;
            Matrix<K> B(hh.complex.dim(n + 1, w), static_cast<int>(tensors.size()));
            for (std::size_t j = 0; j < tensors.size(); ++j) {
                const Tensor& t = tensors[j];
                if (r.weight_of(t[0]) == 0) continue;  // unit in slot 0
                Monomial unit(static_cast<std::size_t>(r.num_generators()), 0);
                for (int i = 0; i <= n; ++i) {
                    Tensor img;
                    img.push_back(unit);
                    for (int k = 0; k <= n; ++k) img.push_back(t[(i + k) % (n + 1)]);
                    int row = hh.tensor_index(n + 1, w, img);
                    if (row >= 0) B.add_to(row, static_cast<int>(j), ((n * i) % 2) ? K(-1) : K(1));
                }
            }
            out.mixed.set_B(n, w, B);
        }
    out.mixed.validate();
    return out;
}

// HKR comparison: a_0 da_1 ∧ ... ∧ da_p  ↦  Σ_σ sgn(σ) a_0 ⊗ a_σ(1) ⊗ ... ⊗ a_σ(p)
template <class K>
Matrix<K> hkr_map(const AlgebraPresentation& r, const HochschildComplex<K>& hh, int p, int w) {
    if (!r.is_polynomial())
        throw unsupported_error("hkr_map: only polynomial presentations are supported");
    std::vector<FormBasisElement> forms = form_basis_list(r, p, w);
    Matrix<K> m(hh.complex.dim(p, w), static_cast<int>(forms.size()));
    for (std::size_t j = 0; j < forms.size(); ++j) {
        const FormBasisElement& f = forms[j];
        std::vector<int> order(f.wedge.size());
        for (std::size_t i = 0; i < order.size(); ++i) order[i] = static_cast<int>(i);
        do {
            int inversions = 0;
            for (std::size_t a = 0; a < order.size(); ++a)
                for (std::size_t b = a + 1; b < order.size(); ++b)
                    if (order[a] > order[b]) ++inversions;
            Tensor t;
            t.push_back(f.coeff);
            for (int pos : order) {
                Monomial gen(static_cast<std::size_t>(r.num_generators()), 0);
                gen[f.wedge[static_cast<std::size_t>(pos)]] = 1;
                t.push_back(gen);
            }
            int row = hh.tensor_index(p, w, t);
            if (row >= 0) m.add_to(row, static_cast<int>(j), (inversions % 2) ? K(-1) : K(1));
        } while (std::next_permutation(order.begin(), order.end()));
    }
    return m;
}

// HKR filtration: the good-truncation tower of the Hochschild complex,
// each step closed under both b and B
template <class K>
struct HKRTower {
    FilteredComplex<K> filtration;
};

template <class K>
HKRTower<K> hkr_tower(const MixedComplex<K>& m) {
    const ChainComplex<K>& c = m.complex;
    if (c.d_min() < 0)
        throw unsupported_error("hkr_tower: ℕ-indexed towers need a non-negatively graded complex");
    std::vector<Subcomplex<K>> steps;
    steps.push_back(full_subcomplex(c));
    for (int t = 1; t <= c.d_max() + 1; ++t)
        steps.push_back(good_truncation_slices(c, t));
    HKRTower<K> out{FilteredComplex<K>(c, std::move(steps))};
    // closure under B (cannot fail for good truncations; asserted anyway)
    const FilteredComplex<K>& f = out.filtration;
    for (int i = 0; i <= f.top(); ++i)
        for (int w = 0; w <= c.weight_cap(); ++w)
            for (int n = c.d_min(); n <= c.d_max(); ++n) {
                Subspace<K> here = f.slice(i, n, w);
                if (here.dim() == 0) continue;
                Subspace<K> above = f.slice(i, n + 1, w);
                Matrix<K> img = m.B(n, w) * here.basis();
                for (int j = 0; j < img.cols(); ++j)
                    if (!above.contains(img.column(j)))
                        throw invariant_error("hkr_tower: step not closed under B");
            }
    return out;
}

}  // namespace cychom
