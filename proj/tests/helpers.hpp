#pragma once

// Test-only construction helpers and brute-force oracles. The oracles are
// deliberately independent of the library's solver paths: plain enumeration
// over simplex grids.

#include <random>
#include <string>
#include <vector>

#include "portion/model.hpp"

namespace testutil {

using portion::Instance;
using portion::Rational;
using portion::ScoreVector;

inline Instance make_instance(std::size_t m, const std::vector<std::vector<std::string>>& rows) {
    std::vector<ScoreVector> svs;
    for (const auto& r : rows) {
        std::vector<Rational> es;
        for (const auto& s : r) es.push_back(portion::parse_rational(s));
        svs.emplace_back(std::move(es));
    }
    return Instance(m, std::move(svs));
}

/// Uniform random composition of d into m parts (stars and bars).
inline std::vector<Rational> random_grid_row(std::mt19937_64& rng, std::size_t m, long d) {
    std::vector<long> bars;
    for (std::size_t i = 0; i + 1 < m; ++i)
        bars.push_back(static_cast<long>(rng() % static_cast<unsigned long>(d + 1)));
    std::sort(bars.begin(), bars.end());
    std::vector<Rational> row;
    long prev = 0;
    for (long b : bars) {
        row.push_back(portion::rat(b - prev, d));
        prev = b;
    }
    row.push_back(portion::rat(d - prev, d));
    return row;
}

inline Instance random_grid_instance(std::mt19937_64& rng, std::size_t m, std::size_t n, long d) {
    std::vector<ScoreVector> rows;
    for (std::size_t i = 0; i < n; ++i) rows.emplace_back(random_grid_row(rng, m, d));
    return Instance(m, std::move(rows));
}

/// All points of the m-simplex with coordinates that are multiples of 1/d.
inline std::vector<std::vector<Rational>> simplex_grid(std::size_t m, long d) {
    std::vector<std::vector<Rational>> out;
    std::vector<long> parts(m, 0);
    std::function<void(std::size_t, long)> rec = [&](std::size_t j, long left) {
        if (j + 1 == m) {
            parts[j] = left;
            std::vector<Rational> p;
            for (long v : parts) p.push_back(portion::rat(v, d));
            out.push_back(std::move(p));
            return;
        }
        for (long v = 0; v <= left; ++v) {
            parts[j] = v;
            rec(j + 1, left - v);
        }
    };
    rec(0, d);
    return out;
}

/// Brute-force Pareto oracle: a grid point dominating x, if any exists.
inline std::optional<std::vector<Rational>> grid_dominator(const Instance& inst,
                                                           const std::vector<Rational>& x,
                                                           long d) {
    std::vector<Rational> caps;
    for (std::size_t i = 0; i < inst.n(); ++i)
        caps.push_back(portion::disutility(inst.row(i), x));
    for (const auto& y : simplex_grid(inst.m(), d)) {
        bool weakly_better = true, strictly = false;
        for (std::size_t i = 0; i < inst.n() && weakly_better; ++i) {
            Rational dy = portion::disutility(inst.row(i), y);
            if (dy > caps[i]) weakly_better = false;
            else if (dy < caps[i]) strictly = true;
        }
        if (weakly_better && strictly) return y;
    }
    return std::nullopt;
}

}  // namespace testutil
