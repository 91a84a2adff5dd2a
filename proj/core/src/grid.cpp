#include "rpfcone/grid.hpp"

#include <cmath>
#include <sstream>

#include "json.hpp"
#include "rpfcone/cheb.hpp"
#include "rpfcone/errors.hpp"

namespace rpfcone {

std::shared_ptr<const Grid> Grid::interval(int n) {
    auto g = std::make_shared<Grid>();
    g->kind = GridKind::IntervalCollocation;
    g->xs = cheb::nodes01(n);
    g->bary_w = cheb::bary_weights(n);
    g->quad_w = cheb::quad_weights(n);
    g->lo = 0.0;
    g->hi = 1.0;
    return g;
}

std::shared_ptr<const Grid> Grid::interval_custom(const std::vector<double>& nodes) {
    const std::size_t n = nodes.size();
    if (n < 2) throw ValidationError("interval grid needs at least 2 nodes");
    for (std::size_t i = 1; i < n; ++i)
        if (!(nodes[i] > nodes[i - 1]))
            throw ValidationError("interval grid nodes must be strictly increasing");
    auto g = std::make_shared<Grid>();
    g->kind = GridKind::IntervalCollocation;
    g->xs = nodes;
    g->lo = nodes.front();
    g->hi = nodes.back();
    g->bary_w.assign(n, 1.0);
    for (std::size_t j = 0; j < n; ++j)
        for (std::size_t k = 0; k < n; ++k)
            if (k != j) g->bary_w[j] /= (nodes[j] - nodes[k]);
    // Trapezoid quadrature; custom grids are for small hand-built examples.
    g->quad_w.assign(n, 0.0);
    for (std::size_t i = 0; i + 1 < n; ++i) {
        double h = nodes[i + 1] - nodes[i];
        g->quad_w[i] += 0.5 * h;
        g->quad_w[i + 1] += 0.5 * h;
    }
    return g;
}

std::shared_ptr<const Grid> Grid::cylinders(const std::vector<double>& symbol_masses,
                                            int depth, double metric_base) {
    const int d = static_cast<int>(symbol_masses.size());
    if (d < 2) throw ValidationError("cylinder grid needs at least 2 symbols");
    if (depth < 1) throw ValidationError("cylinder grid needs depth >= 1");
    if (!(metric_base > 0.0 && metric_base < 1.0))
        throw ValidationError("cylinder metric base must lie in (0,1)");
    for (double m : symbol_masses)
        if (!(m > 0.0) || !std::isfinite(m))
            throw ValidationError("symbol masses must be positive and finite");
    auto g = std::make_shared<Grid>();
    g->kind = GridKind::CylinderPartition;
    g->n_symbols = d;
    g->depth = depth;
    g->metric_base = metric_base;
    g->k_depth = depth;
    long count = 1;
    for (int k = 0; k < depth; ++k) {
        count *= d;
        if (count > 2'000'000) throw ValidationError("cylinder grid too large");
    }
    g->words.reserve(count);
    g->masses.reserve(count);
    g->levels.assign(count, 0);
    std::vector<int> w(depth, 0);
    for (long idx = 0; idx < count; ++idx) {
        double mass = 1.0;
        for (int k = 0; k < depth; ++k) mass *= symbol_masses[w[k]];
        g->words.push_back(w);
        g->masses.push_back(mass);
        for (int k = depth - 1; k >= 0; --k) {
            if (++w[k] < d) break;
            w[k] = 0;
        }
    }
    return g;
}

std::size_t Grid::size() const {
    return kind == GridKind::IntervalCollocation ? xs.size() : words.size();
}

int Grid::separation(std::size_t i, std::size_t j) const {
    const auto& a = words[i];
    const auto& b = words[j];
    int s = 0;
    while (s < depth && a[s] == b[s]) ++s;
    return s;
}

bool Grid::same_floor(std::size_t i, std::size_t j) const {
    if (kind != GridKind::TowerLevels) return true;
    return levels[i] == levels[j];
}

double Grid::distance(std::size_t i, std::size_t j) const {
    if (i == j) return 0.0;
    switch (kind) {
        case GridKind::IntervalCollocation:
            return std::abs(xs[i] - xs[j]);
        case GridKind::CylinderPartition:
            return std::pow(metric_base, separation(i, j));
        case GridKind::TowerLevels:
            if (levels[i] != levels[j]) return inf;
            // Tower separation counts returns, so distinct depth-1 cylinders
            // already sit at distance beta^1 (not beta^0 as on shift grids).
            return std::pow(metric_base, separation(i, j) + 1);
    }
    throw DomainError("unknown grid kind");
}

long Grid::lookup_key(int level, const std::vector<int>& word) const {
    long key = level;
    for (int k = 0; k < depth; ++k) key = key * n_symbols + word[k];
    return key;
}

void Grid::build_lookup() const {
    long span = (kind == GridKind::TowerLevels ? r_max : 1);
    for (int k = 0; k < depth; ++k) span *= n_symbols;
    cell_lookup_.assign(span, -1);
    for (std::size_t i = 0; i < words.size(); ++i)
        cell_lookup_[lookup_key(levels.empty() ? 0 : levels[i], words[i])] =
            static_cast<long>(i);
}

long Grid::cell_index(int level, const std::vector<int>& word) const {
    if (kind == GridKind::IntervalCollocation)
        throw DomainError("cell_index is for symbolic grids");
    if (static_cast<int>(word.size()) != depth)
        throw ValidationError("cell_index: wrong word length");
    if (cell_lookup_.empty()) build_lookup();
    long key = lookup_key(level, word);
    if (key < 0 || key >= static_cast<long>(cell_lookup_.size())) return -1;
    return cell_lookup_[key];
}

std::string Grid::describe_node(std::size_t i) const {
    std::ostringstream os;
    if (kind == GridKind::IntervalCollocation) {
        os << "x=" << xs[i];
    } else {
        if (kind == GridKind::TowerLevels) os << "level=" << levels[i] << " ";
        os << "word=";
        for (int s : words[i]) os << s << ".";
    }
    return os.str();
}

std::string Grid::to_json() const {
    nlohmann::json j;
    switch (kind) {
        case GridKind::IntervalCollocation: j["kind"] = "interval-collocation"; break;
        case GridKind::CylinderPartition: j["kind"] = "cylinder-partition"; break;
        case GridKind::TowerLevels: j["kind"] = "tower-levels"; break;
    }
    nlohmann::json nodes = nlohmann::json::array();
    for (std::size_t i = 0; i < size(); ++i) {
        nlohmann::json nd;
        if (kind == GridKind::IntervalCollocation) {
            nd["x"] = xs[i];
        } else {
            nd["word"] = words[i];
            nd["mass"] = masses[i];
            if (kind == GridKind::TowerLevels) nd["level"] = levels[i];
        }
        nodes.push_back(nd);
    }
    j["nodes"] = nodes;
    j["parameters"] = {{"alpha", alpha}, {"xi", xi}, {"beta", metric_base},
                       {"R_max", r_max}, {"K_depth", k_depth}};
    return j.dump(2);
}

}  // namespace rpfcone
