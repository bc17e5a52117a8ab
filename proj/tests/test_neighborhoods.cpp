#include <doctest.h>

#include "lpm/datasets.hpp"
#include "lpm/neighborhoods.hpp"
#include "lpm/rng.hpp"

using namespace lpm;

namespace {

Matrix random_points(Index n, Index q, RngStream& rng) {
    Matrix x(n, q);
    for (Index i = 0; i < n; ++i)
        for (Index j = 0; j < q; ++j) x(i, j) = rng.normal();
    return x;
}

}  // namespace

TEST_SUITE("neighborhoods") {

TEST_CASE("knn on a handcrafted line with ties") {
    // Points at 0, 1, 2, 3 on a line; point 1 is equidistant from 0 and 2:
    // ties break toward the lower index.
    Matrix x(4, 1);
    x << 0.0, 1.0, 2.0, 3.0;
    const auto g = knn_graph(x, 1);
    CHECK(g.neighbors[0] == std::vector<Index>{1});
    CHECK(g.neighbors[1] == std::vector<Index>{0});
    CHECK(g.neighbors[2] == std::vector<Index>{1});
    CHECK(g.neighbors[3] == std::vector<Index>{2});
    CHECK(g.radii[0] == doctest::Approx(1.0));
    CHECK(g.r_max == doctest::Approx(1.0));
}

TEST_CASE("kd-tree path equals brute force") {
    RngStream rng(23);
    // n > 512 forces the tree path.
    const Matrix x = random_points(900, 3, rng);
    const auto fast = knn_graph(x, 10);
    const auto slow = knn_graph_brute_force(x, 10);
    REQUIRE(fast.n == slow.n);
    for (Index i = 0; i < fast.n; ++i) {
        CHECK(fast.neighbors[i] == slow.neighbors[i]);
        CHECK(fast.radii[i] == doctest::Approx(slow.radii[i]).epsilon(1e-15));
    }
    CHECK(fast.r_max == doctest::Approx(slow.r_max).epsilon(1e-15));
}

TEST_CASE("kd-tree equals brute force with duplicated points") {
    RngStream rng(29);
    Matrix x = random_points(600, 2, rng);
    for (Index i = 0; i < 50; ++i) x.row(599 - i) = x.row(i);  // exact duplicates
    const auto fast = knn_graph(x, 5);
    const auto slow = knn_graph_brute_force(x, 5);
    for (Index i = 0; i < fast.n; ++i) CHECK(fast.neighbors[i] == slow.neighbors[i]);
}

TEST_CASE("knn input validation") {
    RngStream rng(31);
    const Matrix x = random_points(10, 2, rng);
    CHECK_THROWS_AS(knn_graph(x, 0), InvalidInput);
    CHECK_THROWS_AS(knn_graph(x, 10), InvalidInput);  // k must leave room for the center
    Matrix bad = x;
    bad(3, 1) = std::numeric_limits<double>::infinity();
    CHECK_THROWS_AS(knn_graph(bad, 3), InvalidInput);
}

TEST_CASE("eps graph is symmetric and throws on isolated points") {
    Matrix x(4, 1);
    x << 0.0, 0.5, 1.0, 1.4;
    const auto g = eps_graph(x, 0.6);
    for (Index i = 0; i < 4; ++i)
        for (Index j : g.neighbors[i]) {
            const auto& back = g.neighbors[j];
            CHECK(std::find(back.begin(), back.end(), i) != back.end());
        }
    CHECK(g.neighbors[0] == std::vector<Index>{1});
    CHECK(g.neighbors[1] == std::vector<Index>{0, 2});

    Matrix x2(5, 1);
    x2 << 0.0, 0.3, 1.0, 1.4, 10.0;
    try {
        eps_graph(x2, 0.45);
        FAIL("expected IsolatedPoints");
    } catch (const IsolatedPoints& e) {
        CHECK(e.indices == std::vector<Index>{4});
    }
}

TEST_CASE("members puts the center first") {
    RngStream rng(37);
    const Matrix x = random_points(20, 2, rng);
    const auto g = knn_graph(x, 4);
    for (Index i = 0; i < g.n; ++i) {
        const auto m = g.members(i);
        REQUIRE(m.size() == 5);
        CHECK(m[0] == i);
        const Matrix xi = neighborhood_matrix(x, g, i);
        CHECK(xi.rows() == 5);
        CHECK((xi.row(0) - x.row(i)).norm() == 0.0);
    }
}

TEST_CASE("connected components") {
    Matrix x(6, 1);
    x << 0.0, 0.1, 0.2, 100.0, 100.1, 100.2;
    const auto g = knn_graph(x, 2);
    const auto comps = g.connected_components();
    REQUIRE(comps.size() == 2);
    CHECK(comps[0] == std::vector<Index>{0, 1, 2});
    CHECK(comps[1] == std::vector<Index>{3, 4, 5});
}

TEST_CASE("density report") {
    RngStream rng(41);
    const Matrix x = random_points(100, 2, rng);
    const auto g = knn_graph(x, 6);
    const auto rep = density_report(g, 8);
    CHECK(rep.r_max == doctest::Approx(g.r_max));
    CHECK(rep.histogram.size() == 8);
    CHECK(rep.bin_edges.size() == 9);
    Index total = 0;
    for (Index c : rep.histogram) total += c;
    CHECK(total == 100);
    CHECK(rep.r_mean <= rep.r_max);
}

TEST_CASE("r_max shrinks as the sample densifies") {
    RngStream rng(47);
    double prev = std::numeric_limits<double>::infinity();
    for (Index n : {400, 1600, 6400}) {
        const auto ds = gen_swissroll(n, 0.0, rng);
        const auto rep = density_report(knn_graph(ds.x, 12), 8);
        CHECK(rep.r_max < prev);
        prev = rep.r_max;
    }
}

TEST_CASE("graph json round trip") {
    RngStream rng(43);
    const Matrix x = random_points(30, 3, rng);
    const auto g = knn_graph(x, 5);
    const auto back = graph_from_json(graph_to_json(g));
    CHECK(back.n == g.n);
    CHECK(back.r_max == g.r_max);
    for (Index i = 0; i < g.n; ++i) {
        CHECK(back.neighbors[i] == g.neighbors[i]);
        CHECK(back.radii[i] == g.radii[i]);
    }
}

}  // TEST_SUITE
