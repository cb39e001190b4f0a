#pragma once

#include <cmath>
#include <limits>
#include <span>
#include <stdexcept>
#include <string>
#include <vector>

namespace sigsel {

constexpr double kInf = std::numeric_limits<double>::infinity();

// Ordered parameter blocks. Interval blocks map R -> (low, high) per
// coordinate (logit-type, or log for half-lines, identity when unbounded) with
// a uniform prior on bounded intervals. A simplex block maps t in R^d to the
// open d-simplex x = softmax(t) plus the auxiliary r = sum(t); its constrained
// coordinates are (x_1..x_d, r), the prior is Dirichlet(alpha) on x and
// standard normal on r.
struct Block {
    enum class Kind { Interval, Simplex } kind = Kind::Interval;
    double low = -1.0;
    double high = 1.0;
    int count = 1;
    std::string name_prefix = "s";
    int name_start = 1;  // first index used when naming coordinates
    int dim = 0;
    double alpha = 0.25;

    static Block interval(double low, double high, int count, std::string prefix = "s") {
        Block b;
        b.kind = Kind::Interval;
        b.low = low;
        b.high = high;
        b.count = count;
        b.name_prefix = std::move(prefix);
        return b;
    }
    static Block simplex(int dim, double alpha, std::string prefix = "h") {
        Block b;
        b.kind = Kind::Simplex;
        b.dim = dim;
        b.alpha = alpha;
        b.name_prefix = std::move(prefix);
        return b;
    }
};

struct ParameterSpace {
    std::vector<Block> blocks;

    int unconstrained_dim() const {
        int n = 0;
        for (const auto& b : blocks) n += b.kind == Block::Kind::Interval ? b.count : b.dim;
        return n;
    }
    int constrained_dim() const {
        int n = 0;
        for (const auto& b : blocks) n += b.kind == Block::Kind::Interval ? b.count : b.dim + 1;
        return n;
    }
    std::vector<std::string> names() const {
        std::vector<std::string> out;
        for (const auto& b : blocks) {
            if (b.kind == Block::Kind::Interval) {
                for (int i = 0; i < b.count; ++i) out.push_back(b.name_prefix + "_" + std::to_string(b.name_start + i));
            } else {
                for (int i = 0; i < b.dim; ++i) out.push_back(b.name_prefix + "_" + std::to_string(i + 1));
                out.push_back("r_aux");
            }
        }
        return out;
    }
};

namespace detail {

inline double sigmoid(double z) { return z >= 0.0 ? 1.0 / (1.0 + std::exp(-z)) : std::exp(z) / (1.0 + std::exp(z)); }

inline double logsumexp(std::span<const double> t) {
    double mx = -kInf;
    for (double v : t) mx = std::max(mx, v);
    double acc = 0.0;
    for (double v : t) acc += std::exp(v - mx);
    return mx + std::log(acc);
}

}  // namespace detail

// z (unconstrained) -> theta (constrained), returning the total log-Jacobian
// of the map. Simplex blocks emit (x_1..x_d, r); the Jacobian is taken w.r.t.
// the square map z -> (x_1..x_{d-1}, r), giving log d + r - d*logsumexp(t).
inline std::pair<std::vector<double>, double> constrain(std::span<const double> z, const ParameterSpace& space) {
    if (z.size() != static_cast<std::size_t>(space.unconstrained_dim()))
        throw std::invalid_argument("constrain: size mismatch");
    std::vector<double> theta;
    theta.reserve(static_cast<std::size_t>(space.constrained_dim()));
    double log_jac = 0.0;
    std::size_t pos = 0;
    for (const auto& b : space.blocks) {
        if (b.kind == Block::Kind::Interval) {
            for (int i = 0; i < b.count; ++i) {
                const double zi = z[pos++];
                if (!std::isfinite(zi)) throw std::invalid_argument("constrain: non-finite input");
                const bool lo = std::isfinite(b.low), hi = std::isfinite(b.high);
                if (lo && hi) {
                    const double s = detail::sigmoid(zi);
                    theta.push_back(b.low + (b.high - b.low) * s);
                    log_jac += std::log(b.high - b.low) + std::log(s) + std::log1p(-s);
                } else if (lo) {
                    theta.push_back(b.low + std::exp(zi));
                    log_jac += zi;
                } else if (hi) {
                    theta.push_back(b.high - std::exp(zi));
                    log_jac += zi;
                } else {
                    theta.push_back(zi);
                }
            }
        } else {
            const std::size_t d = static_cast<std::size_t>(b.dim);
            std::span<const double> t(z.data() + pos, d);
            pos += d;
            double r = 0.0;
            for (double v : t) {
                if (!std::isfinite(v)) throw std::invalid_argument("constrain: non-finite input");
                r += v;
            }
            const double lse = detail::logsumexp(t);
            for (double v : t) theta.push_back(std::exp(v - lse));
            theta.push_back(r);
            log_jac += std::log(static_cast<double>(d)) + r - static_cast<double>(d) * lse;
        }
    }
    return {std::move(theta), log_jac};
}

inline std::vector<double> unconstrain(std::span<const double> theta, const ParameterSpace& space) {
    if (theta.size() != static_cast<std::size_t>(space.constrained_dim()))
        throw std::invalid_argument("unconstrain: size mismatch");
    std::vector<double> z;
    z.reserve(static_cast<std::size_t>(space.unconstrained_dim()));
    std::size_t pos = 0;
    for (const auto& b : space.blocks) {
        if (b.kind == Block::Kind::Interval) {
            for (int i = 0; i < b.count; ++i) {
                const double x = theta[pos++];
                const bool lo = std::isfinite(b.low), hi = std::isfinite(b.high);
                if (lo && hi) {
                    if (!(x > b.low && x < b.high)) throw std::domain_error("unconstrain: boundary or exterior value");
                    z.push_back(std::log(x - b.low) - std::log(b.high - x));
                } else if (lo) {
                    if (!(x > b.low)) throw std::domain_error("unconstrain: boundary or exterior value");
                    z.push_back(std::log(x - b.low));
                } else if (hi) {
                    if (!(x < b.high)) throw std::domain_error("unconstrain: boundary or exterior value");
                    z.push_back(std::log(b.high - x));
                } else {
                    z.push_back(x);
                }
            }
        } else {
            const std::size_t d = static_cast<std::size_t>(b.dim);
            double sum_log = 0.0;
            for (std::size_t i = 0; i < d; ++i) {
                const double x = theta[pos + i];
                if (!(x > 0.0)) throw std::domain_error("unconstrain: simplex coordinate at boundary");
                sum_log += std::log(x);
            }
            const double r = theta[pos + d];
            const double c = (r - sum_log) / static_cast<double>(d);
            for (std::size_t i = 0; i < d; ++i) z.push_back(std::log(theta[pos + i]) + c);
            pos += d + 1;
        }
    }
    return z;
}

// Sum of block log-densities: uniform on bounded intervals (flat improper on
// unbounded ones), Dirichlet(alpha) on simplex coordinates, standard normal on
// the auxiliary r. Out-of-support theta yields -inf.
inline double log_prior(std::span<const double> theta, const ParameterSpace& space) {
    double lp = 0.0;
    std::size_t pos = 0;
    for (const auto& b : space.blocks) {
        if (b.kind == Block::Kind::Interval) {
            for (int i = 0; i < b.count; ++i) {
                const double x = theta[pos++];
                const bool lo = std::isfinite(b.low), hi = std::isfinite(b.high);
                if ((lo && x <= b.low) || (hi && x >= b.high)) return -kInf;
                if (lo && hi) lp -= std::log(b.high - b.low);
            }
        } else {
            const std::size_t d = static_cast<std::size_t>(b.dim);
            double sum = 0.0, sum_log = 0.0;
            for (std::size_t i = 0; i < d; ++i) {
                const double x = theta[pos + i];
                if (!(x > 0.0 && x < 1.0)) return -kInf;
                sum += x;
                sum_log += std::log(x);
            }
            if (std::fabs(sum - 1.0) > 1e-9) return -kInf;
            lp += std::lgamma(static_cast<double>(d) * b.alpha) -
                  static_cast<double>(d) * std::lgamma(b.alpha) + (b.alpha - 1.0) * sum_log;
            const double r = theta[pos + d];
            lp += -0.5 * std::log(2.0 * M_PI) - 0.5 * r * r;
            pos += d + 1;
        }
    }
    return lp;
}

}  // namespace sigsel
