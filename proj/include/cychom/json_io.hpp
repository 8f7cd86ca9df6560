// JSON serialization: chain complexes (with sparse differentials), spectral
// sequence pages, and verification reports.
#pragma once

#include <sstream>
#include <string>

#include <json.hpp>

#include "cychom/complex.hpp"
#include "cychom/cyclic.hpp"
#include "cychom/filtered.hpp"

namespace cychom {

using json = nlohmann::json;

template <class K>
struct scalar_io {
    static std::string field_tag() { return "rationals"; }
    static std::string write(const K& v) { return v.str(); }
    static K read(const std::string& s) { return K(s); }
};

template <>
struct scalar_io<Fp> {
    static std::string field_tag() {
        return "fp:" + std::to_string(Fp::default_modulus());
    }
    static std::string write(const Fp& v) { return v.str(); }
    static Fp read(const std::string& s) { return Fp(s); }
};

inline std::string key_string(int a, int b) {
    return "(" + std::to_string(a) + "," + std::to_string(b) + ")";
}

inline std::pair<int, int> parse_key(const std::string& s) {
    if (s.size() < 5 || s.front() != '(' || s.back() != ')')
        throw std::invalid_argument("bad key: " + s);
    auto comma = s.find(',');
    return {std::stoi(s.substr(1, comma - 1)), std::stoi(s.substr(comma + 1, s.size() - comma - 2))};
}

template <class K>
json complex_to_json(const ChainComplex<K>& c) {
    json j;
    j["window"] = {c.d_min(), c.d_max()};
    j["weight_cap"] = c.weight_cap();
    j["field"] = scalar_io<K>::field_tag();
    json modules = json::object();
    for (const auto& [key, m] : c.modules()) modules[key_string(key.first, key.second)] = m.dim;
    j["modules"] = std::move(modules);
    json diffs = json::object();
    for (const auto& [key, d] : c.stored_diffs()) {
        json triplets = json::array();
        d.for_each([&](int i, int jj, const K& v) {
            triplets.push_back({i, jj, scalar_io<K>::write(v)});
        });
        diffs[key_string(key.first, key.second)] = std::move(triplets);
    }
    j["differentials"] = std::move(diffs);
    return j;
}

template <class K>
ChainComplex<K> complex_from_json(const json& j) {
    int d_min = j.at("window").at(0).template get<int>();
    int d_max = j.at("window").at(1).template get<int>();
    int w_cap = j.at("weight_cap").template get<int>();
    ChainComplex<K> c(d_min, d_max, w_cap);
    for (const auto& [key, dim] : j.at("modules").items()) {
        auto [n, w] = parse_key(key);
        c.set_module(n, w, BasedModule{dim.template get<int>(), {}});
    }
    for (const auto& [key, triplets] : j.at("differentials").items()) {
        auto [n, w] = parse_key(key);
        Matrix<K> d(c.dim(n - 1, w), c.dim(n, w));
        for (const auto& t : triplets)
            d.set(t.at(0).template get<int>(), t.at(1).template get<int>(),
                  scalar_io<K>::read(t.at(2).template get<std::string>()));
        c.set_diff(n, w, std::move(d));
    }
    c.validate();
    return c;
}

template <class K>
json pages_to_json(const std::vector<SpectralSequencePage<K>>& pages) {
    json out = json::array();
    for (const auto& page : pages) {
        json entries = json::object();
        for (const auto& [pk, dim] : page.entries) {
            std::string key = "(" + std::to_string(pk.s) + "," + std::to_string(pk.t) + "," +
                              std::to_string(pk.w) + ")";
            entries[key] = dim;
        }
        out.push_back({{"r", page.r}, {"entries", std::move(entries)}});
    }
    return out;
}

template <class K>
json heart_comparison_to_json(const std::string& algebra, int weight_cap, int u,
                              const HeartComparison<K>& cmp) {
    json heart = json::object();
    for (const auto& [key, dim] : cmp.heart_dims) heart[key_string(key.first, key.second)] = dim;
    json derham = json::object();
    for (const auto& [key, dim] : cmp.target_dims) derham[key_string(key.first, key.second)] = dim;
    return json{{"algebra", algebra},
                {"weight", weight_cap},
                {"u", u},
                {"heart", std::move(heart)},
                {"de_rham", std::move(derham)},
                {"differential_match", cmp.differentials_match && cmp.identification_ok},
                {"dims_match", cmp.dims_match},
                {"normalization", scalar_io<K>::write(cmp.normalization)},
                {"window_limited", cmp.window_limited},
                {"mismatches", cmp.mismatches}};
}

}  // namespace cychom
