#include <doctest.h>

#include <cmath>
#include <map>

#include "nocsim/topology.hpp"
#include "nocsim/traffic.hpp"

using namespace nocsim;

TEST_CASE("fixed complement pairs node i with N-1-i") {
    const Topology mesh = build_mesh2d(4, 4, 1.0, 1.0);
    const TrafficModel model = TrafficModel::fixed_complement();
    Rng rng(1);
    CHECK(select_destination(model, mesh, 5, rng) == NodeId{10});
    CHECK(select_destination(model, mesh, 0, rng) == NodeId{15});

    const Topology mesh3 = build_mesh2d(3, 3, 1.0, 1.0);
    CHECK(select_destination(model, mesh3, 4, rng) == std::nullopt);  // fixed point
}

TEST_CASE("fixed complement is an involution away from its fixed point") {
    const TrafficModel model = TrafficModel::fixed_complement();
    Rng rng(1);
    for (std::size_t side : {3u, 4u, 5u}) {
        const Topology grid = build_mesh2d(side, side, 1.0, 1.0);
        for (NodeId s = 0; s < grid.node_count(); ++s) {
            const auto d = select_destination(model, grid, s, rng);
            if (!d) {
                CHECK(s == (grid.node_count() - 1) - s);
                continue;
            }
            CHECK(select_destination(model, grid, *d, rng) == s);
        }
    }
}

TEST_CASE("fixed complement maps (r,c) to the grid antipode") {
    for (auto [w, h] : {std::pair<std::size_t, std::size_t>{4, 4}, {5, 3}}) {
        const std::size_t n = w * h;
        for (std::size_t r = 0; r < h; ++r)
            for (std::size_t c = 0; c < w; ++c)
                CHECK(n - 1 - (r * w + c) == (h - 1 - r) * w + (w - 1 - c));
    }
}

TEST_CASE("uniform traffic never picks the source and covers everyone else") {
    const Topology mesh = build_mesh2d(3, 3, 1.0, 1.0);
    const TrafficModel model = TrafficModel::uniform_random();
    Rng rng(5);
    std::map<NodeId, int> hits;
    for (int i = 0; i < 5000; ++i) {
        const auto d = select_destination(model, mesh, 4, rng);
        REQUIRE(d.has_value());
        REQUIRE(*d != 4);
        ++hits[*d];
    }
    CHECK(hits.size() == 8);
}

TEST_CASE("locality extremes follow the topology's neighbor sets") {
    const Topology mesh = build_mesh2d(4, 4, 1.0, 1.0);
    Rng rng(9);

    const TrafficModel always_local = TrafficModel::locality(1.0);
    for (int i = 0; i < 2000; ++i) {
        const auto d = select_destination(always_local, mesh, 0, rng);
        REQUIRE(d.has_value());
        REQUIRE((*d == 1 || *d == 4));
    }

    const TrafficModel never_local = TrafficModel::locality(0.0);
    for (int i = 0; i < 2000; ++i) {
        const auto d = select_destination(never_local, mesh, 0, rng);
        REQUIRE(d.has_value());
        REQUIRE(*d != 0);
        REQUIRE(!mesh.adjacent(0, *d));
    }
}

TEST_CASE("locality hits the neighbor pool at the configured frequency") {
    const Topology mesh = build_mesh2d(4, 4, 1.0, 1.0);
    const int draws = 100000;
    for (double p : {0.5, 0.75}) {
        for (NodeId source : {NodeId{5}, NodeId{0}}) {
            const TrafficModel model = TrafficModel::locality(p);
            Rng rng(13 + source);
            std::map<NodeId, int> hits;
            int local = 0;
            for (int i = 0; i < draws; ++i) {
                const auto d = select_destination(model, mesh, source, rng);
                REQUIRE(d.has_value());
                REQUIRE(*d != source);
                local += mesh.adjacent(source, *d);
                ++hits[*d];
            }
            const double sigma = std::sqrt(p * (1.0 - p) / draws);
            CHECK(std::abs(static_cast<double>(local) / draws - p) <= 3.0 * sigma);

            // Each neighbor takes a uniform share of the local fraction.
            const double share = p / static_cast<double>(mesh.degree(source));
            const double share_sigma = std::sqrt(share * (1.0 - share) / draws);
            for (NodeId nb : mesh.neighbors(source))
                CHECK(std::abs(static_cast<double>(hits[nb]) / draws - share) <=
                      3.0 * share_sigma);
        }
    }
}

TEST_CASE("model validation rejects empty selection pools") {
    CHECK_THROWS_AS(TrafficModel::locality(1.5), std::invalid_argument);
    CHECK_THROWS_AS(TrafficModel::locality(-0.1), std::invalid_argument);

    const Topology complete = build_diagonal_mesh2d(2, 2, 1.0, 1.0);
    CHECK_THROWS_WITH_AS(validate_traffic_model(TrafficModel::locality(0.5), complete),
                         doctest::Contains("no non-neighbors"), std::invalid_argument);
    CHECK_NOTHROW(validate_traffic_model(TrafficModel::locality(1.0), complete));

    const Topology single = build_mesh2d(1, 1, 1.0, 1.0);
    CHECK_THROWS_AS(validate_traffic_model(TrafficModel::locality(0.5), single),
                    std::invalid_argument);
    CHECK_THROWS_AS(validate_traffic_model(TrafficModel::uniform_random(), single),
                    std::invalid_argument);
}

TEST_CASE("select_destination rejects an out-of-range source") {
    const Topology mesh = build_mesh2d(2, 2, 1.0, 1.0);
    Rng rng(1);
    CHECK_THROWS_AS(select_destination(TrafficModel::uniform_random(), mesh, 7, rng),
                    std::invalid_argument);
}

TEST_CASE("deterministic injection spacing is exactly 1/rate") {
    Rng rng(1);
    const InjectionProcess quarter{0.25, InjectionDiscipline::Deterministic, 1.0};
    CHECK(next_injection_time(quarter, 100.0, rng) == 104.0);
    const InjectionProcess unit{1.0, InjectionDiscipline::Deterministic, 1.0};
    CHECK(next_injection_time(unit, 0.0, rng) == 1.0);
}

TEST_CASE("poisson gaps have the right mean and are strictly positive") {
    const InjectionProcess process{0.25, InjectionDiscipline::Poisson, 1.0};
    Rng rng(99);
    const int samples = 100000;
    double sum = 0.0;
    for (int i = 0; i < samples; ++i) {
        const double next = next_injection_time(process, 0.0, rng);
        REQUIRE(next > 0.0);
        sum += next;
    }
    const double mean = sum / samples;
    CHECK(mean == doctest::Approx(4.0).epsilon(0.05));
}

TEST_CASE("identical seeds give identical draw sequences") {
    const Topology mesh = build_mesh2d(4, 4, 1.0, 1.0);
    const TrafficModel model = TrafficModel::locality(0.6);
    Rng a(1234), b(1234);
    for (int i = 0; i < 1000; ++i)
        CHECK(select_destination(model, mesh, 5, a) ==
              select_destination(model, mesh, 5, b));
}

TEST_CASE("invalid injection processes are rejected") {
    CHECK_THROWS_AS(validate_injection_process({0.0, InjectionDiscipline::Poisson, 1.0}),
                    std::invalid_argument);
    CHECK_THROWS_AS(validate_injection_process({1.0, InjectionDiscipline::Poisson, 0.0}),
                    std::invalid_argument);
}
