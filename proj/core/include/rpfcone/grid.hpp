#pragma once

// Discretized phase spaces: interval collocation grids, cylinder partitions of
// sequence spaces, and level/cylinder cell grids for towers.

#include <limits>
#include <memory>
#include <string>
#include <vector>

namespace rpfcone {

enum class GridKind { IntervalCollocation, CylinderPartition, TowerLevels };

class Grid {
public:
    GridKind kind = GridKind::IntervalCollocation;

    // Interval grids.
    std::vector<double> xs;       // node coordinates, strictly increasing, interior
    std::vector<double> bary_w;   // barycentric weights
    std::vector<double> quad_w;   // quadrature weights against Lebesgue on [lo, hi]
    double lo = 0.0, hi = 1.0;

    // Symbolic grids (cylinder partitions, tower cells).
    int n_symbols = 0;
    int depth = 0;                          // word length
    std::vector<std::vector<int>> words;    // per node
    std::vector<int> levels;                // per node; all zero unless tower
    std::vector<double> masses;             // reference-measure mass of each cell
    std::vector<double> masses_m;           // tower only: weighted measure m = v * m0
    double metric_base = 0.5;               // d = metric_base^(separation)

    // Serialization parameters (carried for report emission).
    double alpha = 1.0, xi = 1.0;
    int r_max = 0, k_depth = 0;

    static std::shared_ptr<const Grid> interval(int n);
    static std::shared_ptr<const Grid> interval_custom(const std::vector<double>& nodes);
    static std::shared_ptr<const Grid> cylinders(const std::vector<double>& symbol_masses,
                                                 int depth, double metric_base = 0.5);

    std::size_t size() const;

    // Index of the first symbol at which the two words differ (== depth when
    // the words agree on the whole truncated description).
    int separation(std::size_t i, std::size_t j) const;

    bool same_floor(std::size_t i, std::size_t j) const;

    // Metric between nodes; +infinity for tower nodes on different floors.
    double distance(std::size_t i, std::size_t j) const;

    // Lookup of a cell by (level, word); -1 if absent.
    long cell_index(int level, const std::vector<int>& word) const;

    std::string describe_node(std::size_t i) const;
    std::string to_json() const;

    static constexpr double inf = std::numeric_limits<double>::infinity();

private:
    mutable std::vector<long> cell_lookup_;  // built lazily by cell_index
    void build_lookup() const;
    long lookup_key(int level, const std::vector<int>& word) const;
};

}  // namespace rpfcone
