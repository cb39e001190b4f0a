#pragma once

#include <array>
#include <cmath>
#include <cstdint>
#include <span>
#include <stdexcept>
#include <vector>

namespace sigsel {

inline std::uint64_t splitmix64_next(std::uint64_t& x) {
    x += 0x9e3779b97f4a7c15ull;
    std::uint64_t z = x;
    z = (z ^ (z >> 30)) * 0xbf58476d1ce4e5b9ull;
    z = (z ^ (z >> 27)) * 0x94d049bb133111ebull;
    return z ^ (z >> 31);
}

// xoshiro256** seeded via splitmix64. split(stream) derives an independent
// child generator from (root id, stream index) without advancing this one, so
// parallel work items get reproducible streams regardless of scheduling order.
class Rng {
  public:
    explicit Rng(std::uint64_t seed) : root_(seed) {
        std::uint64_t sm = seed;
        for (auto& w : s_) w = splitmix64_next(sm);
    }

    std::uint64_t next_u64() {
        const std::uint64_t result = rotl(s_[1] * 5, 7) * 9;
        const std::uint64_t t = s_[1] << 17;
        s_[2] ^= s_[0];
        s_[3] ^= s_[1];
        s_[1] ^= s_[2];
        s_[0] ^= s_[3];
        s_[2] ^= t;
        s_[3] = rotl(s_[3], 45);
        return result;
    }

    Rng split(std::uint64_t stream) const {
        std::uint64_t sm = root_ ^ (0x9e3779b97f4a7c15ull * (stream + 1));
        std::uint64_t derived = splitmix64_next(sm);
        derived = splitmix64_next(sm) ^ (derived << 1);
        return Rng(derived);
    }

    std::uint64_t root() const { return root_; }

    // uniform on [0,1) with 53-bit resolution
    double uniform01() { return static_cast<double>(next_u64() >> 11) * 0x1.0p-53; }

    double uniform(double a, double b) { return a + (b - a) * uniform01(); }

    // Marsaglia polar method; caches the spare deviate
    double normal() {
        if (have_spare_) {
            have_spare_ = false;
            return spare_;
        }
        double u, v, s2;
        do {
            u = 2.0 * uniform01() - 1.0;
            v = 2.0 * uniform01() - 1.0;
            s2 = u * u + v * v;
        } while (s2 >= 1.0 || s2 == 0.0);
        const double f = std::sqrt(-2.0 * std::log(s2) / s2);
        spare_ = v * f;
        have_spare_ = true;
        return u * f;
    }

    double normal(double mean, double sd) { return mean + sd * normal(); }

    // Binomial(n, p): inversion for small n*p, Hormann's BTRS otherwise.
    std::uint64_t binomial(std::uint64_t n, double p) {
        if (n == 0 || p <= 0.0) return 0;
        if (p >= 1.0) return n;
        if (p > 0.5) return n - binomial(n, 1.0 - p);
        const double np = static_cast<double>(n) * p;
        return np < 10.0 ? binomial_inversion(n, p) : binomial_btrs(n, p);
    }

    // Multinomial(n, probs) by conditional-binomial decomposition; platform-
    // reproducible because it only composes the binomial sampler above.
    void multinomial(std::uint64_t n, std::span<const double> probs, std::span<std::uint64_t> out) {
        if (probs.size() != out.size()) throw std::invalid_argument("multinomial: size mismatch");
        double total = 0.0;
        for (double p : probs) {
            if (!(p >= -1e-12)) throw std::invalid_argument("multinomial: negative probability");
            total += p;
        }
        if (!(total > 0.0)) throw std::invalid_argument("multinomial: zero mass");
        std::uint64_t remaining = n;
        double rest = total;
        const std::size_t k = probs.size();
        for (std::size_t i = 0; i + 1 < k; ++i) {
            if (remaining == 0) {
                out[i] = 0;
                continue;
            }
            double cond = probs[i] <= 0.0 ? 0.0 : probs[i] / rest;
            if (cond > 1.0) cond = 1.0;
            const std::uint64_t draw = binomial(remaining, cond);
            out[i] = draw;
            remaining -= draw;
            rest -= probs[i];
            if (rest < 0.0) rest = 0.0;
        }
        out[k - 1] = remaining;
    }

  private:
    static std::uint64_t rotl(std::uint64_t x, int k) { return (x << k) | (x >> (64 - k)); }

    std::uint64_t binomial_inversion(std::uint64_t n, double p) {
        const double q = 1.0 - p;
        const double s = p / q;
        const double a = static_cast<double>(n + 1) * s;
        double r = std::pow(q, static_cast<double>(n));
        double u = uniform01();
        std::uint64_t x = 0;
        while (u > r) {
            u -= r;
            ++x;
            if (x > n) return n;  // numerical tail guard
            r *= a / static_cast<double>(x) - s;
        }
        return x;
    }

    // Hormann (1993) transformed rejection, valid for n*p >= 10, p <= 0.5
    std::uint64_t binomial_btrs(std::uint64_t n, double p) {
        const double nd = static_cast<double>(n);
        const double q = 1.0 - p;
        const double spq = std::sqrt(nd * p * q);
        const double b = 1.15 + 2.53 * spq;
        const double a = -0.0873 + 0.0248 * b + 0.01 * p;
        const double c = nd * p + 0.5;
        const double vr = 0.92 - 4.2 / b;
        const double alpha = (2.83 + 5.1 / b) * spq;
        const double lpq = std::log(p / q);
        const double m = std::floor((nd + 1.0) * p);
        const double h = std::lgamma(m + 1.0) + std::lgamma(nd - m + 1.0);
        for (;;) {
            const double u = uniform01() - 0.5;
            double v = uniform01();
            const double us = 0.5 - std::fabs(u);
            const double kd = std::floor((2.0 * a / us + b) * u + c);
            if (kd < 0.0 || kd > nd) continue;
            if (us >= 0.07 && v <= vr) return static_cast<std::uint64_t>(kd);
            v = std::log(v * alpha / (a / (us * us) + b));
            if (v <= h - std::lgamma(kd + 1.0) - std::lgamma(nd - kd + 1.0) + (kd - m) * lpq)
                return static_cast<std::uint64_t>(kd);
        }
    }

    std::array<std::uint64_t, 4> s_{};
    std::uint64_t root_ = 0;
    double spare_ = 0.0;
    bool have_spare_ = false;
};

}  // namespace sigsel
