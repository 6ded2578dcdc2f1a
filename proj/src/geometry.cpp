#include "corrbound/geometry.hpp"

#include <algorithm>
#include <bit>
#include <cmath>
#include <cstdlib>
#include <fstream>
#include <numeric>
#include <set>
#include <sstream>
#include <stdexcept>

#include <json.hpp>

#include "corrbound/errors.hpp"

namespace corrbound {

std::int64_t dist_sq(const Point& p, const Point& q) {
    if (p.dim() != q.dim()) throw std::invalid_argument("dist: dimension mismatch");
    std::int64_t s = 0;
    for (int i = 0; i < p.dim(); ++i) {
        std::int64_t g = p.coords[i] - q.coords[i];
        s += g * g;
    }
    return s;
}

std::int64_t sup_dist(const Point& p, const Point& q) {
    if (p.dim() != q.dim()) throw std::invalid_argument("dist: dimension mismatch");
    std::int64_t s = 0;
    for (int i = 0; i < p.dim(); ++i) s = std::max(s, std::abs(p.coords[i] - q.coords[i]));
    return s;
}

double dist(const Point& p, const Point& q, Metric m) {
    if (m == Metric::sup) return static_cast<double>(sup_dist(p, q));
    return std::sqrt(static_cast<double>(dist_sq(p, q)));
}

PointConfig::PointConfig(int dim, std::vector<Point> points)
    : dim_(dim), points_(std::move(points)) {
    if (dim_ < 1) throw std::invalid_argument("PointConfig: dimension must be >= 1");
    for (const auto& p : points_)
        if (p.dim() != dim_) throw std::invalid_argument("PointConfig: point dimension mismatch");
    std::set<std::vector<std::int64_t>> seen;
    for (const auto& p : points_)
        if (!seen.insert(p.coords).second)
            throw std::invalid_argument("PointConfig: points must be pairwise distinct");
}

PointConfig PointConfig::from_json_text(const std::string& text) {
    nlohmann::json j = nlohmann::json::parse(text);
    if (!j.is_array() || j.empty())
        throw ConfigError("configuration JSON must be a nonempty array of integer arrays");
    std::vector<Point> pts;
    int d = -1;
    for (const auto& row : j) {
        if (!row.is_array() || row.empty())
            throw ConfigError("configuration rows must be nonempty integer arrays");
        Point p;
        for (const auto& c : row) {
            if (!c.is_number_integer())
                throw ConfigError("configuration coordinates must be integers");
            p.coords.push_back(c.get<std::int64_t>());
        }
        if (d < 0) d = p.dim();
        pts.push_back(std::move(p));
    }
    return PointConfig(d, std::move(pts));
}

PointConfig PointConfig::from_json_file(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw ConfigError("cannot open configuration file: " + path);
    std::stringstream ss;
    ss << in.rdbuf();
    return from_json_text(ss.str());
}

std::string PointConfig::to_json_text() const {
    nlohmann::json j = nlohmann::json::array();
    for (const auto& p : points_) j.push_back(p.coords);
    return j.dump();
}

PointConfig random_config(Rng& rng, int n, int d, std::int64_t extent) {
    double capacity = std::pow(2.0 * static_cast<double>(extent) + 1.0, d);
    if (capacity < n)
        throw std::invalid_argument("random_config: box too small for n distinct points");
    std::set<std::vector<std::int64_t>> seen;
    std::vector<Point> pts;
    while (static_cast<int>(pts.size()) < n) {
        Point p;
        for (int i = 0; i < d; ++i)
            p.coords.push_back(rng.range(static_cast<int>(-extent), static_cast<int>(extent)));
        if (seen.insert(p.coords).second) pts.push_back(std::move(p));
    }
    return PointConfig(d, std::move(pts));
}

double hausdorff_distance(const PointConfig& X, const PointConfig& Y) {
    if (X.dim() != Y.dim()) throw std::invalid_argument("hausdorff: dimension mismatch");
    if (X.size() == 0 || Y.size() == 0)
        throw std::invalid_argument("hausdorff: empty configuration");
    auto directed_sq = [](const PointConfig& A, const PointConfig& B) {
        std::int64_t worst = 0;
        for (int i = 0; i < A.size(); ++i) {
            std::int64_t best = dist_sq(A[i], B[0]);
            for (int j = 1; j < B.size(); ++j) best = std::min(best, dist_sq(A[i], B[j]));
            worst = std::max(worst, best);
        }
        return worst;
    };
    return std::sqrt(static_cast<double>(std::max(directed_sq(X, Y), directed_sq(Y, X))));
}

namespace {

constexpr int kBruteAssignCap = 9;
constexpr int kBrutePairingCap = 12;

void check_pair(const PointConfig& X, const PointConfig& Y, const char* who) {
    if (X.dim() != Y.dim())
        throw std::invalid_argument(std::string(who) + ": dimension mismatch");
    if (X.size() != Y.size())
        throw std::invalid_argument(std::string(who) + ": size mismatch");
    if (X.size() > kBruteAssignCap)
        throw SizeCapError(std::string(who) + ": n exceeds enumeration cap 9");
}

}  // namespace

double brute_dm(const PointConfig& X, const PointConfig& Y, Metric m) {
    check_pair(X, Y, "brute_dm");
    int n = X.size();
    std::vector<int> perm(n);
    std::iota(perm.begin(), perm.end(), 0);
    double best = -1;
    do {
        double v = 0;
        for (int j = 0; j < n; ++j) v = std::max(v, dist(X[j], Y[perm[j]], m));
        if (best < 0 || v < best) best = v;
    } while (std::next_permutation(perm.begin(), perm.end()));
    return best;
}

double brute_ds(const PointConfig& X, const PointConfig& Y, Metric m) {
    check_pair(X, Y, "brute_ds");
    int n = X.size();
    std::vector<int> perm(n);
    std::iota(perm.begin(), perm.end(), 0);
    double best = -1;
    do {
        double v = 0;
        for (int j = 0; j < n; ++j) v += dist(X[j], Y[perm[j]], m);
        if (best < 0 || v < best) best = v;
    } while (std::next_permutation(perm.begin(), perm.end()));
    return best;
}

namespace {

double pairing_rec(const PointConfig& X, Metric m, unsigned mask) {
    if (mask == 0) return 0.0;
    int i = std::countr_zero(mask);
    unsigned rest = mask & ~(1u << i);
    double best = -1;
    unsigned probe = rest;
    while (probe) {
        int j = std::countr_zero(probe);
        probe &= probe - 1;
        double v = dist(X[i], X[j], m) + pairing_rec(X, m, rest & ~(1u << j));
        if (best < 0 || v < best) best = v;
    }
    return best;
}

}  // namespace

double brute_ds_pairing(const PointConfig& X, Metric m) {
    if (X.size() % 2 != 0)
        throw std::invalid_argument("brute_ds_pairing: odd cardinality");
    if (X.size() > kBrutePairingCap)
        throw SizeCapError("brute_ds_pairing: 2n exceeds enumeration cap 12");
    if (X.size() == 0) return 0.0;
    return pairing_rec(X, m, (1u << X.size()) - 1);
}

}  // namespace corrbound
