#include "trapwalk/limits/skorohod.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <stdexcept>
#include <vector>

namespace trapwalk {

namespace {

constexpr double kInf = std::numeric_limits<double>::infinity();

struct Jumps {
    std::vector<double> at;      // jump times
    std::vector<double> level;   // level[0] initial, level[i] after i-th jump
};

Jumps jumps_of(const CadlagStep& f)
{
    Jumps j;
    j.at = f.jump_times();
    j.level.push_back(f.initial());
    j.level.insert(j.level.end(), f.jump_values().begin(), f.jump_values().end());
    return j;
}

bool j1_feasible(const Jumps& f, const Jumps& g, double horizon, double eps)
{
    const std::size_t p = f.at.size(), r = g.at.size();
    auto close = [&](std::size_t i, std::size_t k) { return std::abs(f.level[i] - g.level[k]) <= eps; };
    if (!close(0, 0))
        return false;
    // pos[i][k]: earliest time at which i jumps of f and k jumps of g have occurred.
    std::vector<double> pos((p + 1) * (r + 1), kInf);
    auto at = [&](std::size_t i, std::size_t k) -> double& { return pos[i * (r + 1) + k]; };
    at(0, 0) = 0.0;
    for (std::size_t i = 0; i <= p; ++i) {
        for (std::size_t k = 0; k <= r; ++k) {
            double prev = at(i, k);
            if (prev == kInf)
                continue;
            double next_g = k < r ? g.at[k] : horizon;
            if (i < p) {
                double s = f.at[i];
                double lo = s == horizon ? horizon : std::max(prev, s - eps);
                if (lo <= s + eps && lo <= next_g && close(i + 1, k))
                    at(i + 1, k) = std::min(at(i + 1, k), lo);
            }
            if (k < r) {
                double t = g.at[k];
                if (prev <= t && close(i, k + 1))
                    at(i, k + 1) = std::min(at(i, k + 1), t);
                if (i < p && prev <= t && std::abs(f.at[i] - t) <= eps && close(i + 1, k + 1))
                    at(i + 1, k + 1) = std::min(at(i + 1, k + 1), t);
            }
        }
    }
    return at(p, r) < kInf;
}

struct Point {
    double t, x;
};

std::vector<Point> completed_graph(const CadlagStep& f, std::size_t resolution)
{
    std::vector<Point> corners{{0.0, f.initial()}};
    double level = f.initial();
    for (std::size_t i = 0; i < f.jump_count(); ++i) {
        double t = f.jump_times()[i];
        if (corners.back().t != t)
            corners.push_back({t, level});
        level = f.jump_values()[i];
        corners.push_back({t, level});
    }
    if (corners.back().t != f.horizon())
        corners.push_back({f.horizon(), level});
    std::vector<Point> pts{corners.front()};
    for (std::size_t c = 1; c < corners.size(); ++c) {
        const Point a = corners[c - 1], b = corners[c];
        for (std::size_t k = 1; k <= resolution; ++k) {
            double w = static_cast<double>(k) / static_cast<double>(resolution);
            pts.push_back({a.t + w * (b.t - a.t), a.x + w * (b.x - a.x)});
        }
    }
    return pts;
}

double max_piece(const CadlagStep& f, std::size_t resolution)
{
    auto pts = completed_graph(f, resolution);
    double m = 0.0;
    for (std::size_t i = 1; i < pts.size(); ++i)
        m = std::max(m, std::max(std::abs(pts[i].t - pts[i - 1].t), std::abs(pts[i].x - pts[i - 1].x)));
    return m;
}

}  // namespace

double j1_distance(const CadlagStep& f, const CadlagStep& g)
{
    if (f.horizon() != g.horizon())
        throw std::invalid_argument("J1 distance needs a common horizon");
    Jumps a = jumps_of(f), b = jumps_of(g);
    std::vector<double> candidates{0.0};
    for (double s : a.at)
        for (double t : b.at)
            candidates.push_back(std::abs(s - t));
    for (double x : a.level)
        for (double y : b.level)
            candidates.push_back(std::abs(x - y));
    std::sort(candidates.begin(), candidates.end());
    candidates.erase(std::unique(candidates.begin(), candidates.end()), candidates.end());
    // The identity time change makes the largest candidate feasible.
    std::size_t lo = 0, hi = candidates.size();
    while (lo < hi) {
        std::size_t mid = (lo + hi) / 2;
        if (j1_feasible(a, b, f.horizon(), candidates[mid]))
            hi = mid;
        else
            lo = mid + 1;
    }
    if (lo == candidates.size())
        throw std::logic_error("J1 feasibility failed for every candidate");
    return candidates[lo];
}

double m1_distance(const CadlagStep& f, const CadlagStep& g, std::size_t resolution)
{
    if (resolution == 0)
        throw std::invalid_argument("M1 resolution must be positive");
    if (f.horizon() != g.horizon())
        throw std::invalid_argument("M1 distance needs a common horizon");
    auto p = completed_graph(f, resolution);
    auto q = completed_graph(g, resolution);
    auto d = [](const Point& a, const Point& b) { return std::max(std::abs(a.t - b.t), std::abs(a.x - b.x)); };
    std::vector<double> row(q.size()), prev(q.size());
    for (std::size_t i = 0; i < p.size(); ++i) {
        for (std::size_t j = 0; j < q.size(); ++j) {
            double best;
            if (i == 0 && j == 0)
                best = 0.0;
            else if (i == 0)
                best = row[j - 1];
            else if (j == 0)
                best = prev[0];
            else
                best = std::min({prev[j], row[j - 1], prev[j - 1]});
            row[j] = std::max(best, d(p[i], q[j]));
        }
        std::swap(row, prev);
    }
    return prev.back();
}

double m1_discretization(const CadlagStep& f, const CadlagStep& g, std::size_t resolution)
{
    return std::max(max_piece(f, resolution), max_piece(g, resolution));
}

}  // namespace trapwalk
