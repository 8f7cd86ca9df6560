// Weight-graded commutative algebra presentations (monomial-ideal quotients
// of polynomial rings), Kähler differentials, de Rham complexes and the
// Hodge (stupid) filtration. Kähler/de Rham functionality is restricted to
// polynomial presentations; quotients serve only as Hochschild inputs.
#pragma once

#include <algorithm>
#include <functional>
#include <map>
#include <numeric>
#include <optional>
#include <sstream>
#include <string>
#include <vector>

#include "cychom/complex.hpp"

namespace cychom {

// exponent vector over the generators
using Monomial = std::vector<int>;

struct Generator {
    std::string name;
    int weight = 1;
};

class AlgebraPresentation {
public:
    AlgebraPresentation() = default;
    AlgebraPresentation(std::vector<Generator> gens, std::vector<Monomial> relations)
        : gens_(std::move(gens)), relations_(std::move(relations)) {
        for (const auto& g : gens_)
            if (g.weight <= 0)
                throw unsupported_error("AlgebraPresentation: generator weights must be positive");
        for (const auto& r : relations_) {
            if (r.size() != gens_.size())
                throw unsupported_error("AlgebraPresentation: relation arity mismatch");
            if (std::accumulate(r.begin(), r.end(), 0) == 0)
                throw unsupported_error("AlgebraPresentation: unit relation");
        }
    }

    static AlgebraPresentation polynomial(int d) {
        static const char* short_names[] = {"x", "y", "z", "w"};
        std::vector<Generator> gens;
        for (int i = 0; i < d; ++i) {
            std::string name = d <= 4 ? short_names[i] : ("x" + std::to_string(i + 1));
            gens.push_back({name, 1});
        }
        return AlgebraPresentation(std::move(gens), {});
    }

    static AlgebraPresentation truncated(int power) {
        if (power < 1) throw unsupported_error("truncated algebra: power must be >= 1");
        Monomial rel{power};
        return AlgebraPresentation({{"x", 1}}, {rel});
    }

    int num_generators() const { return static_cast<int>(gens_.size()); }
    const std::vector<Generator>& generators() const { return gens_; }
    const std::vector<Monomial>& relations() const { return relations_; }
    bool is_polynomial() const { return relations_.empty(); }

    int weight_of(const Monomial& m) const {
        int w = 0;
        for (int i = 0; i < num_generators(); ++i) w += m[i] * gens_[i].weight;
        return w;
    }

    bool killed(const Monomial& m) const {
        for (const auto& r : relations_) {
            bool divides = true;
            for (int i = 0; i < num_generators(); ++i)
                if (m[i] < r[i]) {
                    divides = false;
                    break;
                }
            if (divides) return true;
        }
        return false;
    }

    // product of two basis monomials: a basis monomial, or nothing if the
    // ideal swallows it
    std::optional<Monomial> multiply(const Monomial& a, const Monomial& b) const {
        Monomial c(num_generators());
        for (int i = 0; i < num_generators(); ++i) c[i] = a[i] + b[i];
        if (killed(c)) return std::nullopt;
        return c;
    }

    std::string monomial_label(const Monomial& m) const {
        std::ostringstream os;
        bool any = false;
        for (int i = 0; i < num_generators(); ++i) {
            if (m[i] == 0) continue;
            any = true;
            os << gens_[i].name;
            if (m[i] > 1) os << '^' << m[i];
        }
        return any ? os.str() : "1";
    }

    std::string describe() const {
        std::ostringstream os;
        os << "k[";
        for (int i = 0; i < num_generators(); ++i)
            os << (i ? "," : "") << gens_[i].name;
        os << "]";
        if (!relations_.empty()) {
            os << "/(";
            for (std::size_t i = 0; i < relations_.size(); ++i)
                os << (i ? "," : "") << monomial_label(relations_[i]);
            os << ")";
        }
        return os.str();
    }

private:
    std::vector<Generator> gens_;
    std::vector<Monomial> relations_;
};

// monomials of total weight w surviving the relations, in lex order
inline std::vector<Monomial> monomial_basis_list(const AlgebraPresentation& r, int w) {
    std::vector<Monomial> out;
    int d = r.num_generators();
    if (w == 0) {
        out.push_back(Monomial(d, 0));
        return out;
    }
    if (d == 0) return out;
    Monomial cur(d, 0);
    // depth-first enumeration by generator index
    std::function<void(int, int)> rec = [&](int idx, int remaining) {
        if (idx == d - 1) {
            int wt = r.generators()[idx].weight;
            if (remaining % wt == 0) {
                cur[idx] = remaining / wt;
                if (!r.killed(cur)) out.push_back(cur);
                cur[idx] = 0;
            }
            return;
        }
        int wt = r.generators()[idx].weight;
        for (int e = remaining / wt; e >= 0; --e) {
            cur[idx] = e;
            rec(idx + 1, remaining - e * wt);
        }
        cur[idx] = 0;
    };
    rec(0, w);
    std::sort(out.begin(), out.end());
    return out;
}

template <class K>
BasedModule monomial_basis(const AlgebraPresentation& r, int w) {
    std::vector<Monomial> ms = monomial_basis_list(r, w);
    BasedModule m;
    m.dim = static_cast<int>(ms.size());
    for (const auto& mono : ms) m.labels.push_back(r.monomial_label(mono));
    return m;
}

// ---------------------------------------------------------------------------
// Kähler forms of polynomial presentations

// p-form basis element: coefficient monomial and strictly increasing
// generator indices
struct FormBasisElement {
    Monomial coeff;
    std::vector<int> wedge;

    friend bool operator<(const FormBasisElement& a, const FormBasisElement& b) {
        return std::tie(a.wedge, a.coeff) < std::tie(b.wedge, b.coeff);
    }
    friend bool operator==(const FormBasisElement& a, const FormBasisElement& b) {
        return a.coeff == b.coeff && a.wedge == b.wedge;
    }
};

inline std::string form_label(const AlgebraPresentation& r, const FormBasisElement& f) {
    std::ostringstream os;
    std::string coeff = r.monomial_label(f.coeff);
    if (coeff != "1" || f.wedge.empty()) os << coeff;
    for (std::size_t i = 0; i < f.wedge.size(); ++i) {
        if (i || (coeff != "1")) os << ' ';
        os << 'd' << r.generators()[f.wedge[i]].name;
    }
    return os.str();
}

template <class K>
struct KahlerForms {
    int p = 0;
    int weight_cap = 0;
    std::map<int, std::vector<FormBasisElement>> basis;  // per weight
    std::map<int, Matrix<K>> de_rham_d;                  // per weight, into (p+1)-forms

    int dim(int w) const {
        auto it = basis.find(w);
        return it == basis.end() ? 0 : static_cast<int>(it->second.size());
    }
};

inline std::vector<FormBasisElement> form_basis_list(const AlgebraPresentation& r, int p, int w) {
    std::vector<FormBasisElement> out;
    int d = r.num_generators();
    if (p < 0 || p > d) return out;
    std::vector<int> subset;
    std::function<void(int)> rec = [&](int start) {
        if (static_cast<int>(subset.size()) == p) {
            int wedge_weight = 0;
            for (int i : subset) wedge_weight += r.generators()[i].weight;
            if (wedge_weight <= w) {
                for (const Monomial& m : monomial_basis_list(r, w - wedge_weight))
                    out.push_back({m, subset});
            }
            return;
        }
        for (int i = start; i < d; ++i) {
            subset.push_back(i);
            rec(i + 1);
            subset.pop_back();
        }
    };
    rec(0);
    std::sort(out.begin(), out.end());
    return out;
}

// d(m dx_S) = sum_j (∂_j m) dx_j ∧ dx_S with the sign from sorting j into S
template <class K>
KahlerForms<K> kahler_forms(const AlgebraPresentation& r, int p, int w_cap) {
    if (!r.is_polynomial())
        throw unsupported_error("kahler_forms: only polynomial presentations are supported");
    if (p < 0) throw unsupported_error("kahler_forms: negative form degree");
    KahlerForms<K> out;
    out.p = p;
    out.weight_cap = w_cap;
    for (int w = 0; w <= w_cap; ++w) {
        std::vector<FormBasisElement> here = form_basis_list(r, p, w);
        std::vector<FormBasisElement> next = form_basis_list(r, p + 1, w);
        std::map<FormBasisElement, int> index;
        for (std::size_t i = 0; i < next.size(); ++i) index[next[i]] = static_cast<int>(i);

        Matrix<K> d(static_cast<int>(next.size()), static_cast<int>(here.size()));
        for (std::size_t j = 0; j < here.size(); ++j) {
            const FormBasisElement& f = here[j];
            for (int g = 0; g < r.num_generators(); ++g) {
                if (f.coeff[g] == 0) continue;
                if (std::find(f.wedge.begin(), f.wedge.end(), g) != f.wedge.end()) continue;
                FormBasisElement img;
                img.coeff = f.coeff;
                img.coeff[g] -= 1;
                img.wedge = f.wedge;
                auto pos = std::lower_bound(img.wedge.begin(), img.wedge.end(), g);
                int sign_flips = static_cast<int>(pos - img.wedge.begin());
                img.wedge.insert(pos, g);
                K coeff = K(f.coeff[g]);
                if (sign_flips % 2) coeff = -coeff;
                d.add_to(index.at(img), static_cast<int>(j), coeff);
            }
        }
        if (!here.empty()) out.basis[w] = std::move(here);
        out.de_rham_d[w] = std::move(d);
    }
    return out;
}

// the full de Rham complex (Ω^•, d) as a cochain complex over weights <= w_cap
template <class K>
struct DeRhamComplex {
    CochainComplex<K> complex;
    std::map<int, KahlerForms<K>> forms;  // per cohomological degree p
    int generators = 0;

    int dim(int p, int w) const {
        auto it = forms.find(p);
        return it == forms.end() ? 0 : it->second.dim(w);
    }
};

template <class K>
DeRhamComplex<K> de_rham_complex(const AlgebraPresentation& r, int w_cap) {
    if (!r.is_polynomial())
        throw unsupported_error("de_rham_complex: only polynomial presentations are supported");
    DeRhamComplex<K> out;
    out.generators = r.num_generators();
    int top = r.num_generators();
    out.complex = CochainComplex<K>::from_cohomological_window(0, std::max(top, 1), w_cap);
    for (int p = 0; p <= top; ++p) out.forms.emplace(p, kahler_forms<K>(r, p, w_cap));
    for (int p = 0; p <= top; ++p) {
        const KahlerForms<K>& kf = out.forms.at(p);
        for (int w = 0; w <= w_cap; ++w) {
            int dimw = kf.dim(w);
            if (dimw == 0) continue;
            BasedModule m{dimw, {}};
            for (const auto& f : kf.basis.at(w)) m.labels.push_back(form_label(r, f));
            out.complex.set_module(p, w, std::move(m));
        }
    }
    for (int p = 0; p < top; ++p)
        for (int w = 0; w <= w_cap; ++w) {
            auto it = out.forms.at(p).de_rham_d.find(w);
            if (it == out.forms.at(p).de_rham_d.end()) continue;
            if (out.complex.dim(p, w) == 0 || out.complex.dim(p + 1, w) == 0) continue;
            out.complex.set_diff(p, w, it->second);
        }
    out.complex.validate();
    return out;
}

// stupid truncation Ω^{>=n}: zero out cohomological degrees < n, keep d
template <class K>
CochainComplex<K> hodge_truncate(const CochainComplex<K>& c, int n) {
    CochainComplex<K> out = CochainComplex<K>::from_cohomological_window(
        std::max(c.c_min(), n), std::max({c.c_max(), c.c_min(), n}), c.weight_cap());
    for (int i = std::max(c.c_min(), n); i <= c.c_max(); ++i)
        for (int w = 0; w <= c.weight_cap(); ++w)
            if (const BasedModule* m = c.homological_model().module(-i, w))
                out.set_module(i, w, *m);
    for (int i = std::max(c.c_min(), n); i < c.c_max(); ++i)
        for (int w = 0; w <= c.weight_cap(); ++w)
            if (out.dim(i, w) && out.dim(i + 1, w)) out.set_diff(i, w, c.diff(i, w));
    return out;
}

// stupid quotient Ω^{<=n}: zero out cohomological degrees > n
template <class K>
CochainComplex<K> hodge_cotruncate(const CochainComplex<K>& c, int n) {
    CochainComplex<K> out = CochainComplex<K>::from_cohomological_window(
        c.c_min(), std::max(c.c_min(), std::min(c.c_max(), n)), c.weight_cap());
    for (int i = c.c_min(); i <= std::min(c.c_max(), n); ++i)
        for (int w = 0; w <= c.weight_cap(); ++w)
            if (const BasedModule* m = c.homological_model().module(-i, w))
                out.set_module(i, w, *m);
    for (int i = c.c_min(); i < std::min(c.c_max(), n); ++i)
        for (int w = 0; w <= c.weight_cap(); ++w)
            if (out.dim(i, w) && out.dim(i + 1, w)) out.set_diff(i, w, c.diff(i, w));
    return out;
}

// cohomology of a cochain complex at cohomological degree i
template <class K>
HomologySlice<K> cohomology(const CochainComplex<K>& c, int i, int w) {
    return homology(c.homological_model(), -i, w);
}

}  // namespace cychom
