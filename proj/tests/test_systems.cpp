#include <cmath>
#include <numeric>

#include "doctest.h"
#include "rpfcone/errors.hpp"
#include "rpfcone/systems.hpp"

using namespace rpfcone;

TEST_CASE("Gauss stage: branch formulas at x = 0") {
    auto st = gauss_stage(16);
    auto br = st->branches(0.0, 50);
    REQUIRE(br.size() == 50);
    for (int n = 1; n <= 50; ++n) {
        CHECK(br[n - 1].y == doctest::Approx(1.0 / n).epsilon(1e-15));
        CHECK(std::exp(br[n - 1].log_weight) == doctest::Approx(1.0 / (n * n)).epsilon(1e-14));
    }
    CHECK(st->tail_bound(100) == doctest::Approx(0.01));
    // tail_bound decreases in N.
    CHECK(st->tail_bound(200) < st->tail_bound(100));
}

TEST_CASE("Gauss stage: single-branch contraction and metadata") {
    auto st = gauss_stage(16);
    // Branch n = 2 at x = 0.25 vs 0.5.
    const double y = 1.0 / 2.25, yp = 1.0 / 2.5;
    CHECK(std::abs(y - yp) == doctest::Approx(2.0 / 45.0).epsilon(1e-13));
    CHECK(std::abs(y - yp) <= 0.25 * std::abs(0.25 - 0.5));
    CHECK(st->gamma() == doctest::Approx(2.25));
    CHECK(st->n0() == 2);
    CHECK(st->xi() > 1.0);
    CHECK(st->holder_Q() == doctest::Approx(2.0));
}

TEST_CASE("Gauss forward map and golden fixed point") {
    auto st = gauss_stage(16);
    const double g = (std::sqrt(5.0) - 1.0) / 2.0;
    CHECK(st->forward(g) == doctest::Approx(g).epsilon(1e-14));
    auto orbit = trajectory({st, st, st, st, st}, 0, g, 5);
    REQUIRE(orbit.size() == 6);
    for (double x : orbit) CHECK(x == doctest::Approx(g).epsilon(1e-10));
}

TEST_CASE("doubling stage: inverses, slopes, period-2 orbit") {
    auto st = doubling_stage(16);
    auto br = st->branches(0.5, 10);
    REQUIRE(br.size() == 2);
    CHECK(br[0].y == doctest::Approx(0.25));
    CHECK(br[1].y == doctest::Approx(0.75));
    CHECK(st->gamma() == doctest::Approx(2.0));

    auto orbit = trajectory({st, st, st, st}, 0, 1.0 / 3.0, 4);
    CHECK(orbit[0] == doctest::Approx(1.0 / 3.0));
    CHECK(orbit[1] == doctest::Approx(2.0 / 3.0));
    CHECK(orbit[2] == doctest::Approx(1.0 / 3.0));

    auto trivial = trajectory({st}, 0, 0.3, 0);
    REQUIRE(trivial.size() == 1);
    CHECK(trivial[0] == 0.3);
}

TEST_CASE("interval stage validation") {
    // Coverage gap.
    CHECK_THROWS_AS(interval_stage({{0.0, 0.4, 0.0}, {0.5, 1.0, 0.0}}, 8), ValidationError);
    // Overlap.
    CHECK_THROWS_AS(interval_stage({{0.0, 0.6, 0.0}, {0.5, 1.0, 0.0}}, 8), ValidationError);
    // Non-expanding branch (slope 1 on the full interval).
    CHECK_THROWS_AS(interval_stage({{0.0, 1.0, 0.0}}, 8), ValidationError);
}

TEST_CASE("full shift: metric and stage constants") {
    auto st = full_shift_stage({0.5, 0.5}, 4);
    auto g = st->grid();
    CHECK(st->gamma() == doctest::Approx(2.0));
    CHECK(st->xi() == doctest::Approx(2.0));
    CHECK(st->n0() == 1);
    // Two words differing first at position 3 sit at distance 2^-3.
    long i = g->cell_index(0, {0, 1, 0, 1});
    long j = g->cell_index(0, {0, 1, 0, 0});
    REQUIRE(i >= 0);
    REQUIRE(j >= 0);
    CHECK(g->distance(i, j) == doctest::Approx(0.125));
    CHECK_THROWS_AS(full_shift_stage({0.5, -0.5}, 3), ValidationError);
}

TEST_CASE("tower spec validation and derived quantities") {
    TowerSpec spec = geometric_tower_spec(5, 1);
    CHECK(std::accumulate(spec.atom_masses.begin(), spec.atom_masses.end(), 0.0) ==
          doctest::Approx(1.0).epsilon(1e-14));
    auto tower = tower_build(spec);
    CHECK(tower->level_weight(1) == doctest::Approx(std::sqrt(2.0)));  // e^{p/2}, p = ln 2
    CHECK(tower->level_weight(0) == doctest::Approx(1.0));

    // Normalized tower measure: masses sum to 1.
    auto g = tower->grid();
    double total = 0.0;
    for (double m : g->masses) total += m;
    CHECK(total == doctest::Approx(1.0).epsilon(1e-12));

    // Level masses match the geometric tail m0{R > n} = 2^-n up to truncation.
    for (int l = 1; l < 5; ++l) {
        double level_mass = 0.0;
        for (std::size_t i = 0; i < g->size(); ++i)
            if (g->levels[i] == l) level_mass += g->masses[i];
        const double expect = std::exp2(-static_cast<double>(l)) / tower->raw_total_mass();
        CHECK(level_mass == doctest::Approx(expect).epsilon(1e-10));
        CHECK(level_mass * tower->raw_total_mass() <= spec.q * std::exp(-spec.p * l) + 1e-12);
    }
}

TEST_CASE("tower rejects bad specs") {
    TowerSpec bad = geometric_tower_spec(4, 1);
    bad.atom_masses[0] += 0.1;  // masses no longer sum to 1
    CHECK_THROWS_AS(tower_build(bad), ValidationError);

    TowerSpec gcd2 = geometric_tower_spec(4, 1);
    gcd2.return_times = {2, 4, 6, 8};  // gcd 2
    gcd2.r_max = 10;
    gcd2.p = 0.1;  // keep the tail assumption satisfiable so gcd is what fails
    CHECK_THROWS_AS(tower_build(gcd2), ValidationError);

    TowerSpec tail = geometric_tower_spec(4, 1);
    tail.p = 5.0;  // claimed tail decay far faster than the actual masses
    CHECK_THROWS_AS(tower_build(tail), ValidationError);

    TowerSpec trunc = geometric_tower_spec(4, 1);
    trunc.r_max = 3;  // return time 4 exceeds the truncation
    CHECK_THROWS_AS(tower_build(trunc), TruncationError);
}

TEST_CASE("degenerate tower: R = 1 everywhere is a one-floor system") {
    TowerSpec spec;
    spec.atom_masses = {0.5, 0.5};
    spec.return_times = {1, 1};
    spec.beta = 0.5;
    spec.k_depth = 2;
    spec.r_max = 4;
    // gcd(1,1) = 1; every cell sits on floor 0.
    auto tower = tower_build(spec);
    for (int l : tower->grid()->levels) CHECK(l == 0);
}

TEST_CASE("paired preimages: Gauss hand values and contraction") {
    auto st = gauss_stage(16);
    auto pairs1 = paired_preimages({st}, 0, 0.25, 0.5, 1, 30);
    REQUIRE(!pairs1.empty());
    // Branch n = 1: preimages 1/1.25 = 0.8 and 1/1.5 = 0.666...
    CHECK(pairs1[0].y == doctest::Approx(0.8));
    CHECK(pairs1[0].y_prime == doctest::Approx(2.0 / 3.0));
    CHECK(pairs1[0].distance == doctest::Approx(0.8 - 2.0 / 3.0).epsilon(1e-12));
    for (const auto& p : pairs1) CHECK(p.distance <= 0.25 + 1e-12);

    // Two-step pairs contract by gamma^{-1} = 4/9.
    auto pairs2 = paired_preimages({st, st}, 0, 0.25, 0.5, 2, 30);
    for (const auto& p : pairs2) CHECK(p.distance <= (4.0 / 9.0) * 0.25 + 1e-12);

    auto same = paired_preimages({st}, 0, 0.3, 0.3, 1, 10);
    for (const auto& p : same) CHECK(p.distance == 0.0);
}

TEST_CASE("paired preimages reject points beyond the pairing scale") {
    auto st = full_shift_stage({0.5, 0.5}, 3);
    // Cylinder metric is bounded by 1 < xi = 2, so interval points at
    // distance >= xi must come from an interval stage instead.
    auto gauss = gauss_stage(8);
    const double xi = gauss->xi();
    if (xi <= 2.0)
        CHECK_THROWS_AS(paired_preimages({gauss}, 0, 0.0, xi + 0.1, 1, 10), PairingError);
}
