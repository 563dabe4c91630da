// Small independent helpers for the tests. Nothing here calls into the
// library's own shortest-path code.
#pragma once

#include <algorithm>
#include <cmath>
#include <limits>
#include <random>
#include <vector>

#include "polyroute/geometry.hpp"

namespace testing_support {

inline constexpr double kInf = std::numeric_limits<double>::infinity();

// All-pairs shortest paths on a dense matrix (kInf = no edge).
inline std::vector<std::vector<double>> floyd_warshall(std::vector<std::vector<double>> d)
{
    const std::size_t n = d.size();
    for (std::size_t i = 0; i < n; ++i)
        d[i][i] = 0;
    for (std::size_t k = 0; k < n; ++k)
        for (std::size_t i = 0; i < n; ++i)
            if (d[i][k] < kInf)
                for (std::size_t j = 0; j < n; ++j)
                    d[i][j] = std::min(d[i][j], d[i][k] + d[k][j]);
    return d;
}

inline std::vector<std::vector<double>> empty_matrix(std::size_t n)
{
    return std::vector<std::vector<double>>(n, std::vector<double>(n, kInf));
}

inline polyroute::Point3 random_unit(std::mt19937_64& rng)
{
    std::normal_distribution<double> g;
    polyroute::Vec3 v{g(rng), g(rng), g(rng)};
    return polyroute::normalized(v);
}

} // namespace testing_support
