#include <doctest.h>

#include <algorithm>
#include <cmath>

#include "devine/simulation.hpp"

using namespace devine;

namespace {

SimConfig small_config(std::uint64_t seed) {
    SimConfig cfg;
    cfg.generator.server_count = 20;
    cfg.duration = 100;
    cfg.seed = seed;
    return cfg;
}

double median(std::vector<double> v) {
    std::sort(v.begin(), v.end());
    const auto n = v.size();
    return n % 2 ? v[n / 2] : 0.5 * (v[n / 2 - 1] + v[n / 2]);
}

} // namespace

TEST_CASE("algorithm names") {
    CHECK(parse_algorithm("devine") == Algorithm::Devine);
    CHECK(parse_algorithm("firstfit") == Algorithm::FirstFit);
    CHECK(parse_algorithm("bestfit") == Algorithm::BestFit);
    CHECK(parse_algorithm("grc") == Algorithm::Grc);
    CHECK_THROWS_AS(parse_algorithm("nope"), ConfigError);
    try {
        parse_algorithm("neurovine");
        FAIL("expected ConfigError");
    } catch (const ConfigError& e) {
        CHECK(std::string(e.what()).find("not implemented") != std::string::npos);
    }
}

TEST_CASE("config validation") {
    SimConfig cfg;
    CHECK_NOTHROW(cfg.validate());
    auto bad = cfg;
    bad.devine.leaders = 0;
    CHECK_THROWS_AS(bad.validate(), ConfigError);
    bad = cfg;
    bad.devine.leaders = 101;
    CHECK_THROWS_AS(bad.validate(), ConfigError);
    bad = cfg;
    bad.duration = -1;
    CHECK_THROWS_AS(bad.validate(), ConfigError);
    bad = cfg;
    bad.sample_interval = 0;
    CHECK_THROWS_AS(bad.validate(), ConfigError);
}

TEST_CASE("zero duration produces no arrivals") {
    auto cfg = small_config(1);
    cfg.duration = 0;
    const auto r = run_simulation(cfg);
    CHECK(r.summary.arrivals == 0);
    CHECK(r.summary.acceptance_ratio == 0.0);
    CHECK(r.summary.conservation_ok);
}

TEST_CASE("poisson arrival count at default settings") {
    SimConfig cfg;
    for (std::uint64_t seed : {1u, 2u, 3u}) {
        cfg.seed = seed;
        const auto wl = generate_workload(cfg);
        CHECK(std::abs(static_cast<double>(wl.requests.size()) - 4000.0) <= 3 * std::sqrt(4000.0));
        CHECK(wl.primaries.size() == wl.requests.size());
        for (std::size_t i = 1; i < wl.requests.size(); ++i) {
            CHECK(wl.requests[i].arrival_time >= wl.requests[i - 1].arrival_time);
        }
    }
    cfg.generator.arrival_process = ArrivalProcess::Deterministic;
    cfg.duration = 10;
    // Arrivals live in [0, duration): 0.5, 1.0, ..., 9.5.
    const auto wl = generate_workload(cfg);
    CHECK(wl.requests.size() == 19);
}

TEST_CASE("every algorithm conserves resources and keeps ratios sane") {
    for (auto algo : {Algorithm::Devine, Algorithm::FirstFit, Algorithm::BestFit, Algorithm::Grc}) {
        auto cfg = small_config(7);
        cfg.algorithm = algo;
        const auto r = run_simulation(cfg);
        CHECK(r.summary.conservation_ok);
        CHECK(r.summary.arrivals > 0);
        CHECK(r.summary.accepted <= r.summary.arrivals);
        CHECK(r.summary.accepted == r.summary.departures + r.summary.live_at_end);
        for (const auto& s : r.series) {
            CHECK(s.acceptance_ratio >= 0.0);
            CHECK(s.acceptance_ratio <= 1.0);
            if (s.arrivals > 0) {
                CHECK(s.acceptance_ratio ==
                      doctest::Approx(static_cast<double>(s.accepted) / s.arrivals));
            }
        }
        // Samples at 10, 20, ..., 100.
        CHECK(r.series.size() == 10);
        for (const auto& a : r.arrivals) {
            if (!a.accepted) {
                CHECK(a.revenue == 0.0);
                CHECK(a.cost == 0.0);
            }
        }
        if (algo != Algorithm::Devine) {
            CHECK(r.summary.embedding_messages == 0);
        }
    }
}

TEST_CASE("simulation is deterministic") {
    const auto cfg = small_config(3);
    const auto a = run_simulation(cfg);
    const auto b = run_simulation(cfg);
    REQUIRE(a.arrivals.size() == b.arrivals.size());
    for (std::size_t i = 0; i < a.arrivals.size(); ++i) {
        CHECK(a.arrivals[i].accepted == b.arrivals[i].accepted);
        CHECK(a.arrivals[i].vnr_hash == b.arrivals[i].vnr_hash);
        CHECK(a.arrivals[i].cost == b.arrivals[i].cost);
    }
    CHECK(a.summary.revenue == b.summary.revenue);
    CHECK(a.summary.embedding_messages == b.summary.embedding_messages);
}

TEST_CASE("workload is isolated from the algorithm") {
    const auto rows = compare_algorithms(
        small_config(5), {Algorithm::Devine, Algorithm::FirstFit, Algorithm::BestFit, Algorithm::Grc},
        {5, 6});
    REQUIRE(rows.size() == 8);
    CHECK(rows[0].seed == 5);
    CHECK(rows[4].seed == 6);
    for (std::size_t base : {0u, 4u}) {
        for (std::size_t k = 1; k < 4; ++k) {
            const auto& x = rows[base].result.arrivals;
            const auto& y = rows[base + k].result.arrivals;
            REQUIRE(x.size() == y.size());
            for (std::size_t i = 0; i < x.size(); ++i) {
                CHECK(x[i].vnr_hash == y[i].vnr_hash);
                CHECK(x[i].time == y[i].time);
            }
        }
    }
    // Serial and parallel comparisons agree.
    const auto serial = compare_algorithms(small_config(5), {Algorithm::Devine, Algorithm::Grc},
                                           {5}, false);
    CHECK(serial[0].result.summary.revenue == rows[0].result.summary.revenue);
    CHECK(serial[1].result.summary.revenue == rows[3].result.summary.revenue);
}

TEST_CASE("more leaders never see fewer options") {
    // Single requests on a fresh sparse network: a ring of every node
    // contains the single-leader ring, so it can only accept more.
    SimConfig cfg;
    cfg.generator.server_count = 12;
    cfg.generator.link_probability = 0.2;
    std::uint32_t accepted_one = 0, accepted_all = 0;
    for (std::uint64_t seed = 0; seed < 10; ++seed) {
        cfg.seed = seed;
        cfg.duration = 30;
        const auto wl = generate_workload(cfg);
        for (std::size_t i = 0; i < wl.requests.size(); ++i) {
            auto net = wl.network;
            AllocationLedger ledger;
            DevineParams one;
            one.embed.beta = 1;
            one.leaders = 1;
            auto all = one;
            all.leaders = cfg.generator.server_count;
            all.embed.alpha = 1000;
            FifoTransport t1, t2;
            Rng r1(seed), r2(seed);
            const auto a = run_election(net, ledger, wl.requests[i], wl.primaries[i], one, t1, r1);
            auto net2 = wl.network;
            AllocationLedger ledger2;
            const auto b =
                run_election(net2, ledger2, wl.requests[i], wl.primaries[i], all, t2, r2);
            if (a.accepted) CHECK(b.accepted);
            accepted_one += a.accepted;
            accepted_all += b.accepted;
        }
    }
    CHECK(accepted_all > accepted_one);

    // Whole runs: median over 10 seeds.
    std::vector<double> one_ratio, all_ratio;
    for (std::uint64_t seed = 0; seed < 10; ++seed) {
        cfg.seed = seed;
        cfg.duration = 200;
        cfg.devine.embed.beta = 1;
        cfg.devine.leaders = 1;
        one_ratio.push_back(run_simulation(cfg).summary.acceptance_ratio);
        cfg.devine.leaders = cfg.generator.server_count;
        cfg.devine.embed.alpha = 1000;
        all_ratio.push_back(run_simulation(cfg).summary.acceptance_ratio);
        cfg.devine.embed.alpha = 30;
    }
    CHECK(median(all_ratio) >= median(one_ratio));
}

TEST_CASE("acceptance does not rise with offered load") {
    std::vector<double> base, doubled;
    for (std::uint64_t seed = 0; seed < 10; ++seed) {
        auto cfg = small_config(seed);
        cfg.duration = 300;
        base.push_back(run_simulation(cfg).summary.acceptance_ratio);
        cfg.generator.arrival_rate *= 2;
        doubled.push_back(run_simulation(cfg).summary.acceptance_ratio);
    }
    CHECK(median(doubled) <= median(base));
}

TEST_CASE("utilization helpers") {
    PhysicalNetwork net;
    net.add_node(ResourceVector::of(10, 10, 10));
    net.add_node(ResourceVector::of(10, 10, 10));
    net.add_link(0, 1, Quantity::from_double(20));
    CHECK(mean_cpu_utilization(net) == 0.0);
    CHECK(mean_link_utilization(net) == 0.0);
    net.node(0).residual.cpu = Quantity::from_double(5);
    net.link(0).bandwidth_residual = Quantity::from_double(5);
    CHECK(mean_cpu_utilization(net) == doctest::Approx(0.25));
    CHECK(mean_link_utilization(net) == doctest::Approx(0.75));
}
