#pragma once

#include <random>
#include <vector>

#include "pgcl/expectation.hpp"

namespace pgcl {

/// Deterministic coverage plus seeded random draws: the constants 0 and 1,
/// every singleton indicator, every 0/1 expectation when 2^|S| <= 4096, and
/// `samples` random expectations with values in {0, 1/4, 1/2, 3/4, 1}.
inline std::vector<Expectation> expectation_suite(const SpacePtr& space, std::size_t samples,
                                                  unsigned long seed) {
    const std::size_t n = space->state_count();
    std::vector<Expectation> out;
    out.push_back(Expectation::zero(space));
    out.push_back(Expectation::constant(space, 1));
    for (std::size_t s = 0; s < n; ++s) out.push_back(Expectation::point(space, s));
    if (n <= 12) {
        for (std::size_t bits = 0; bits < (std::size_t{1} << n); ++bits) {
            std::vector<Rational> v(n);
            for (std::size_t i = 0; i < n; ++i) v[i] = Rational((bits >> i) & 1);
            out.emplace_back(space, std::move(v));
        }
    }
    std::mt19937_64 rng(seed);
    std::uniform_int_distribution<int> quarters(0, 4);
    for (std::size_t k = 0; k < samples; ++k) {
        std::vector<Rational> v(n);
        for (auto& x : v) x = rat(quarters(rng), 4);
        out.emplace_back(space, std::move(v));
    }
    return out;
}

}  // namespace pgcl
