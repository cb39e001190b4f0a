#pragma once

#include <algorithm>
#include <cmath>
#include <filesystem>
#include <fstream>
#include <iomanip>
#include <sstream>
#include <stdexcept>
#include <string>
#include <vector>

namespace sigsel {

namespace detail {

inline std::string fmt_tick(double v) {
    std::ostringstream os;
    os << std::setprecision(4) << v;
    return os.str();
}

inline std::string fmt2(double v) {
    std::ostringstream os;
    os << std::setprecision(6) << v;
    return os.str();
}

struct AxisRange {
    double lo = 0.0, hi = 1.0;
    void expand(double v) {
        lo = std::min(lo, v);
        hi = std::max(hi, v);
    }
    void pad() {
        if (hi <= lo) {
            lo -= 0.5;
            hi += 0.5;
        }
        const double p = 0.06 * (hi - lo);
        lo -= p;
        hi += p;
    }
};

inline void svg_cross(std::ostringstream& os, double cx, double cy, const char* color) {
    os << "<path d='M" << cx - 6 << " " << cy << " H" << cx + 6 << " M" << cx << " " << cy - 6 << " V" << cy + 6
       << "' stroke='" << color << "' stroke-width='2.2' fill='none'/>\n";
}

}  // namespace detail

// Scatter panel of two posterior coordinates with optional truth (blue cross)
// and estimate (red cross) markers.
inline std::string svg_scatter_pair(const std::vector<std::vector<double>>& samples, std::size_t xi, std::size_t yi,
                                    const std::string& xname, const std::string& yname,
                                    const std::vector<double>* truth, const std::vector<double>* estimate) {
    const int W = 520, H = 520, ML = 64, MR = 20, MT = 24, MB = 52;
    detail::AxisRange rx{samples.front()[xi], samples.front()[xi]}, ry{samples.front()[yi], samples.front()[yi]};
    for (const auto& s : samples) {
        rx.expand(s[xi]);
        ry.expand(s[yi]);
    }
    if (truth) {
        rx.expand((*truth)[xi]);
        ry.expand((*truth)[yi]);
    }
    rx.pad();
    ry.pad();
    auto px = [&](double v) { return ML + (v - rx.lo) / (rx.hi - rx.lo) * (W - ML - MR); };
    auto py = [&](double v) { return H - MB - (v - ry.lo) / (ry.hi - ry.lo) * (H - MT - MB); };

    std::ostringstream os;
    os << "<svg xmlns='http://www.w3.org/2000/svg' width='" << W << "' height='" << H << "' viewBox='0 0 " << W << " "
       << H << "'>\n<rect width='100%' height='100%' fill='white'/>\n";
    os << "<rect x='" << ML << "' y='" << MT << "' width='" << W - ML - MR << "' height='" << H - MT - MB
       << "' fill='none' stroke='#444'/>\n";
    for (int t = 0; t <= 4; ++t) {
        const double fx = rx.lo + t * (rx.hi - rx.lo) / 4.0;
        const double fy = ry.lo + t * (ry.hi - ry.lo) / 4.0;
        os << "<line x1='" << px(fx) << "' y1='" << H - MB << "' x2='" << px(fx) << "' y2='" << H - MB + 5
           << "' stroke='#444'/>\n";
        os << "<text x='" << px(fx) << "' y='" << H - MB + 18 << "' font-size='11' text-anchor='middle'>"
           << detail::fmt_tick(fx) << "</text>\n";
        os << "<line x1='" << ML - 5 << "' y1='" << py(fy) << "' x2='" << ML << "' y2='" << py(fy)
           << "' stroke='#444'/>\n";
        os << "<text x='" << ML - 8 << "' y='" << py(fy) + 4 << "' font-size='11' text-anchor='end'>"
           << detail::fmt_tick(fy) << "</text>\n";
    }
    os << "<text x='" << (ML + W - MR) / 2 << "' y='" << H - 12 << "' font-size='13' text-anchor='middle'>" << xname
       << "</text>\n";
    os << "<text x='16' y='" << (MT + H - MB) / 2 << "' font-size='13' text-anchor='middle' transform='rotate(-90 16 "
       << (MT + H - MB) / 2 << ")'>" << yname << "</text>\n";
    for (const auto& s : samples)
        os << "<circle cx='" << detail::fmt2(px(s[xi])) << "' cy='" << detail::fmt2(py(s[yi]))
           << "' r='1.6' fill='#555' fill-opacity='0.35'/>\n";
    if (truth) detail::svg_cross(os, px((*truth)[xi]), py((*truth)[yi]), "#1f4fd8");
    if (estimate) detail::svg_cross(os, px((*estimate)[xi]), py((*estimate)[yi]), "#d82929");
    os << "</svg>\n";
    return os.str();
}

// 1-D marginal Gaussian-KDE density curve (Scott bandwidth over this
// coordinate) with the same truth/estimate markers.
inline std::string svg_marginal_density(const std::vector<std::vector<double>>& samples, std::size_t idx,
                                        const std::string& name, const double* truth, const double* estimate) {
    const int W = 520, H = 340, ML = 56, MR = 20, MT = 24, MB = 52;
    const std::size_t n = samples.size();
    std::vector<double> xs(n);
    for (std::size_t i = 0; i < n; ++i) xs[i] = samples[i][idx];
    double mean = 0.0;
    for (double v : xs) mean += v;
    mean /= static_cast<double>(n);
    double ss = 0.0;
    for (double v : xs) ss += (v - mean) * (v - mean);
    const double sd = n > 1 ? std::sqrt(ss / static_cast<double>(n - 1)) : 0.0;
    const double bw = sd > 0.0 ? sd * std::pow(static_cast<double>(n), -0.2) : 1.0;

    detail::AxisRange rx{*std::min_element(xs.begin(), xs.end()), *std::max_element(xs.begin(), xs.end())};
    if (truth) rx.expand(*truth);
    rx.pad();
    const int G = 201;
    std::vector<double> dens(G, 0.0);
    double dmax = 1e-300;
    for (int g = 0; g < G; ++g) {
        const double x = rx.lo + g * (rx.hi - rx.lo) / (G - 1);
        double d = 0.0;
        for (double v : xs) {
            const double u = (x - v) / bw;
            d += std::exp(-0.5 * u * u);
        }
        dens[g] = d / (static_cast<double>(n) * bw * std::sqrt(2.0 * 3.14159265358979323846));
        dmax = std::max(dmax, dens[g]);
    }
    auto px = [&](double v) { return ML + (v - rx.lo) / (rx.hi - rx.lo) * (W - ML - MR); };
    auto py = [&](double d) { return H - MB - d / (1.08 * dmax) * (H - MT - MB); };

    std::ostringstream os;
    os << "<svg xmlns='http://www.w3.org/2000/svg' width='" << W << "' height='" << H << "' viewBox='0 0 " << W << " "
       << H << "'>\n<rect width='100%' height='100%' fill='white'/>\n";
    os << "<rect x='" << ML << "' y='" << MT << "' width='" << W - ML - MR << "' height='" << H - MT - MB
       << "' fill='none' stroke='#444'/>\n";
    os << "<polyline fill='none' stroke='#333' stroke-width='1.8' points='";
    for (int g = 0; g < G; ++g)
        os << detail::fmt2(px(rx.lo + g * (rx.hi - rx.lo) / (G - 1))) << "," << detail::fmt2(py(dens[g])) << " ";
    os << "'/>\n";
    for (int t = 0; t <= 4; ++t) {
        const double fx = rx.lo + t * (rx.hi - rx.lo) / 4.0;
        os << "<line x1='" << px(fx) << "' y1='" << H - MB << "' x2='" << px(fx) << "' y2='" << H - MB + 5
           << "' stroke='#444'/>\n";
        os << "<text x='" << px(fx) << "' y='" << H - MB + 18 << "' font-size='11' text-anchor='middle'>"
           << detail::fmt_tick(fx) << "</text>\n";
    }
    os << "<text x='" << (ML + W - MR) / 2 << "' y='" << H - 12 << "' font-size='13' text-anchor='middle'>" << name
       << "</text>\n";
    if (truth)
        os << "<line x1='" << px(*truth) << "' y1='" << MT << "' x2='" << px(*truth) << "' y2='" << H - MB
           << "' stroke='#1f4fd8' stroke-width='2'/>\n";
    if (estimate)
        os << "<line x1='" << px(*estimate) << "' y1='" << MT << "' x2='" << px(*estimate) << "' y2='" << H - MB
           << "' stroke='#d82929' stroke-width='2' stroke-dasharray='6 4'/>\n";
    os << "</svg>\n";
    return os.str();
}

// Fig 2/3/5-style panels: one scatter per coordinate pair, plus a marginal
// density per coordinate when there is a single parameter.
inline std::vector<std::filesystem::path> write_pair_plots(const std::filesystem::path& dir,
                                                           const std::vector<std::string>& names,
                                                           const std::vector<std::vector<double>>& samples,
                                                           const std::vector<double>* truth,
                                                           const std::vector<double>* estimate) {
    std::vector<std::filesystem::path> written;
    if (samples.empty()) return written;
    // cap the rendered draws so pair panels stay small for long chains
    const std::size_t cap = 2000;
    std::vector<std::vector<double>> thinned;
    const std::vector<std::vector<double>>* draws = &samples;
    if (samples.size() > cap) {
        const std::size_t stride = (samples.size() + cap - 1) / cap;
        for (std::size_t i = 0; i < samples.size(); i += stride) thinned.push_back(samples[i]);
        draws = &thinned;
    }
    const std::vector<std::vector<double>>& pts = *draws;
    const std::size_t d = names.size();
    auto emit = [&](const std::filesystem::path& p, const std::string& svg) {
        std::ofstream os(p);
        if (!os) throw std::runtime_error("cannot open " + p.string() + " for writing");
        os << svg;
        written.push_back(p);
    };
    if (d == 1) {
        const double* t = truth ? &(*truth)[0] : nullptr;
        const double* e = estimate ? &(*estimate)[0] : nullptr;
        emit(dir / ("marginal_" + names[0] + ".svg"), svg_marginal_density(pts, 0, names[0], t, e));
        return written;
    }
    for (std::size_t i = 0; i < d; ++i)
        for (std::size_t j = i + 1; j < d; ++j)
            emit(dir / ("pair_" + names[i] + "_" + names[j] + ".svg"),
                 svg_scatter_pair(pts, i, j, names[i], names[j], truth, estimate));
    return written;
}

}  // namespace sigsel
