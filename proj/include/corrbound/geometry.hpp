#pragma once
#include <cstdint>
#include <string>
#include <vector>

#include "corrbound/rng.hpp"

namespace corrbound {

// A lattice point in Z^d, exact integer coordinates.
struct Point {
    std::vector<std::int64_t> coords;

    int dim() const { return static_cast<int>(coords.size()); }
    bool operator==(const Point& o) const = default;
};

enum class Metric { euclidean, sup };

// Squared Euclidean distance, exact in integers.
std::int64_t dist_sq(const Point& p, const Point& q);
// Sup-norm distance, exact in integers.
std::int64_t sup_dist(const Point& p, const Point& q);
double dist(const Point& p, const Point& q, Metric m = Metric::euclidean);

// An ordered list of pairwise-distinct lattice points sharing one dimension.
class PointConfig {
public:
    PointConfig(int dim, std::vector<Point> points);

    int dim() const { return dim_; }
    int size() const { return static_cast<int>(points_.size()); }
    const Point& operator[](int i) const { return points_[i]; }
    const std::vector<Point>& points() const { return points_; }

    static PointConfig from_json_text(const std::string& text);
    static PointConfig from_json_file(const std::string& path);
    std::string to_json_text() const;

private:
    int dim_;
    std::vector<Point> points_;
};

// n distinct points drawn uniformly from {-extent,...,extent}^d.
PointConfig random_config(Rng& rng, int n, int d, std::int64_t extent);

double hausdorff_distance(const PointConfig& X, const PointConfig& Y);

// Brute-force oracles over all n! permutations, n <= 9.
double brute_dm(const PointConfig& X, const PointConfig& Y, Metric m = Metric::euclidean);
double brute_ds(const PointConfig& X, const PointConfig& Y, Metric m = Metric::euclidean);

// Exact minimum over all perfect pairings of X, |X| = 2n <= 12.
double brute_ds_pairing(const PointConfig& X, Metric m = Metric::euclidean);

}  // namespace corrbound
