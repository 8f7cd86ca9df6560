// ASCII and SVG spectral-sequence charts in the layout of the HKR/CW
// picture: columns s horizontal (the BS¹ cohomological degree, even for CW
// pages), rows t vertical (Hochschild degree). Optional overlays mark the
// regions cut out by the Beilinson truncation, the HKR step and the CW step.
#pragma once

#include <algorithm>
#include <optional>
#include <sstream>
#include <string>

#include "cychom/filtered.hpp"

namespace cychom {

struct ChartOverlays {
    std::optional<int> tau_b;  // keep cells with 2t - s >= r
    std::optional<int> hkr;    // keep cells with t >= t0
    std::optional<int> cw;     // keep cells with s >= 2*s0
};

inline bool overlay_tau_b(int s, int t, int r) { return 2 * t - s >= r; }
inline bool overlay_hkr(int t, int t0) { return t >= t0; }
inline bool overlay_cw(int s, int s0) { return s >= 2 * s0; }

template <class K>
std::string ascii_chart(const SpectralSequencePage<K>& page, int weight,
                        ChartOverlays overlays = {}) {
    int s_max = 0, t_max = 0, t_min = 0;
    for (const auto& [pk, dim] : page.entries) {
        if (pk.w != weight) continue;
        s_max = std::max(s_max, pk.s);
        t_max = std::max(t_max, pk.t);
        t_min = std::min(t_min, pk.t);
    }
    std::ostringstream os;
    os << "E_" << page.r << " page, weight " << weight << " (s horizontal, t vertical)\n";
    const int cell = 6;
    for (int t = t_max; t >= std::min(t_min, 0); --t) {
        os << "t=" << t << (t >= 0 && t <= 9 ? "  |" : " |");
        for (int s = 0; s <= s_max; ++s) {
            auto it = page.entries.find(PageKey{s, t, weight});
            std::string text = it == page.entries.end() ? "." : std::to_string(it->second);
            if (it != page.entries.end()) {
                std::string marks;
                if (overlays.tau_b && overlay_tau_b(s, t, *overlays.tau_b)) marks += 'B';
                if (overlays.hkr && overlay_hkr(t, *overlays.hkr)) marks += 'H';
                if (overlays.cw && overlay_cw(s, *overlays.cw)) marks += 'C';
                text += marks;
            }
            os << ' ' << text;
            for (int pad = static_cast<int>(text.size()) + 1; pad < cell; ++pad) os << ' ';
        }
        os << '\n';
    }
    os << "     +";
    for (int s = 0; s <= s_max; ++s) os << std::string(cell, '-');
    os << '\n' << "      ";
    for (int s = 0; s <= s_max; ++s) {
        std::string label = "s=" + std::to_string(s);
        os << label;
        for (int pad = static_cast<int>(label.size()); pad < cell; ++pad) os << ' ';
    }
    os << '\n';
    if (overlays.tau_b || overlays.hkr || overlays.cw) {
        os << "overlays:";
        if (overlays.tau_b) os << " B = tau^B_{>=" << *overlays.tau_b << "} (2t-s >= " << *overlays.tau_b << ")";
        if (overlays.hkr) os << " H = F^" << *overlays.hkr << "_HKR (t >= " << *overlays.hkr << ")";
        if (overlays.cw) os << " C = F^" << *overlays.cw << "_CW (s >= " << 2 * *overlays.cw << ")";
        os << '\n';
    }
    return os.str();
}

template <class K>
std::string svg_chart(const SpectralSequencePage<K>& page, int weight, ChartOverlays overlays = {}) {
    int s_max = 0, t_max = 0;
    for (const auto& [pk, dim] : page.entries) {
        if (pk.w != weight) continue;
        s_max = std::max(s_max, pk.s);
        t_max = std::max(t_max, pk.t);
    }
    const int cell = 40, margin = 50;
    int width = margin + (s_max + 1) * cell + 20;
    int height = margin + (t_max + 1) * cell + 20;
    std::ostringstream os;
    os << "<svg xmlns=\"http://www.w3.org/2000/svg\" width=\"" << width << "\" height=\"" << height
       << "\">\n";
    auto cx = [&](int s) { return margin + s * cell; };
    auto cy = [&](int t) { return height - margin - (t + 1) * cell; };
    for (int t = 0; t <= t_max; ++t)
        for (int s = 0; s <= s_max; ++s) {
            bool inB = overlays.tau_b && overlay_tau_b(s, t, *overlays.tau_b);
            bool inH = overlays.hkr && overlay_hkr(t, *overlays.hkr);
            bool inC = overlays.cw && overlay_cw(s, *overlays.cw);
            std::string fill = "#ffffff";
            if (inB) fill = "#dce9f9";
            if (inH) fill = inB ? "#c4e3c4" : "#e3f3e3";
            if (inC) fill = "#f9e3dc";
            os << "<rect x=\"" << cx(s) << "\" y=\"" << cy(t) << "\" width=\"" << cell
               << "\" height=\"" << cell << "\" fill=\"" << fill
               << "\" stroke=\"#999999\"/>\n";
            auto it = page.entries.find(PageKey{s, t, weight});
            if (it != page.entries.end())
                os << "<text x=\"" << cx(s) + cell / 2 << "\" y=\"" << cy(t) + cell / 2 + 5
                   << "\" text-anchor=\"middle\" font-size=\"14\">" << it->second << "</text>\n";
        }
    for (int s = 0; s <= s_max; ++s)
        os << "<text x=\"" << cx(s) + cell / 2 << "\" y=\"" << height - margin + 20
           << "\" text-anchor=\"middle\" font-size=\"12\">s=" << s << "</text>\n";
    for (int t = 0; t <= t_max; ++t)
        os << "<text x=\"" << margin - 20 << "\" y=\"" << cy(t) + cell / 2 + 5
           << "\" text-anchor=\"middle\" font-size=\"12\">t=" << t << "</text>\n";
    os << "<text x=\"" << margin << "\" y=\"20\" font-size=\"14\">E_" << page.r
       << " page, weight " << weight << "</text>\n";
    os << "</svg>\n";
    return os.str();
}

}  // namespace cychom
