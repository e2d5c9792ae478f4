#include <doctest.h>

#include <algorithm>
#include <cmath>

#include "devine/generator.hpp"
#include "devine/local_embed.hpp"
#include "fixtures.hpp"
#include "oracles.hpp"

using namespace devine;
using namespace devine::testing;

namespace {

// Brute-force reference for map_link: fewest hops among feasible simple
// paths within the cap, then lexicographically smallest.
std::optional<std::vector<NodeId>> reference_route(const PhysicalNetwork& net, NodeId from, NodeId to,
                                                   Quantity bw, std::uint32_t cap) {
    auto paths = oracle::all_simple_paths(net, from, to);
    std::erase_if(paths, [&](const std::vector<NodeId>& p) {
        if (p.size() - 1 > cap) return true;
        for (std::size_t i = 0; i + 1 < p.size(); ++i) {
            const auto l = *oracle::link_index(net, p[i], p[i + 1]);
            if (net.links()[l].bandwidth_residual < bw) return true;
        }
        return false;
    });
    if (paths.empty()) return std::nullopt;
    return *std::min_element(paths.begin(), paths.end(), [](const auto& a, const auto& b) {
        return a.size() != b.size() ? a.size() < b.size() : a < b;
    });
}

} // namespace

TEST_CASE("map_link basics") {
    const auto net = make_cpu_network({1, 1, 1, 1}, {{0, 1, 5}, {1, 2, 100}, {2, 3, 100}, {3, 0, 100}});
    ScratchOverlay overlay(net);
    const auto ten = Quantity::from_double(10);

    CHECK(map_link(overlay, 2, 2, ten, 6) == std::vector<NodeId>{2});
    CHECK(map_link(overlay, 1, 2, ten, 6) == std::vector<NodeId>{1, 2});
    // Link 0-1 is too thin, so the route goes the other way round.
    CHECK(map_link(overlay, 0, 2, ten, 6) == std::vector<NodeId>{0, 3, 2});
    CHECK(map_link(overlay, 0, 1, ten, 6) == std::vector<NodeId>{0, 3, 2, 1});
    CHECK_FALSE(map_link(overlay, 0, 1, ten, 2));
    CHECK(map_link(overlay, 0, 2, Quantity::from_double(1), 6) == std::vector<NodeId>{0, 1, 2});
    CHECK_FALSE(map_link(overlay, 0, 2, Quantity::from_double(101), 6));
}

TEST_CASE("map_link honours tentative reservations") {
    const auto net = make_cpu_network({1, 1, 1}, {{0, 1, 10}, {1, 2, 10}, {0, 2, 10}});
    ScratchOverlay overlay(net);
    const auto six = Quantity::from_double(6);
    auto first = map_link(overlay, 0, 2, six, 4);
    REQUIRE(first == std::vector<NodeId>{0, 2});
    overlay.reserve_path(*first, six);
    CHECK(map_link(overlay, 0, 2, six, 4) == std::vector<NodeId>{0, 1, 2});
    overlay.unreserve_path(*first, six);
    CHECK(map_link(overlay, 0, 2, six, 4) == std::vector<NodeId>{0, 2});
}

TEST_CASE("map_link agrees with brute force on random graphs") {
    GeneratorConfig cfg;
    cfg.server_count = 7;
    cfg.link_probability = 0.45;
    cfg.link_bandwidth = {10, 36};
    for (std::uint64_t seed = 0; seed < 150; ++seed) {
        auto rng = make_stream(seed, "route");
        const auto net = generate_physical_network(cfg, rng);
        ScratchOverlay overlay(net);
        for (NodeId a = 0; a < net.node_count(); ++a) {
            for (NodeId b = 0; b < net.node_count(); ++b) {
                for (std::uint32_t cap : {1u, 2u, 6u}) {
                    const auto bw = Quantity::from_double(9);
                    const auto got = map_link(overlay, a, b, bw, cap);
                    const auto want = a == b ? std::optional(std::vector<NodeId>{a})
                                             : reference_route(net, a, b, bw, cap);
                    CHECK(got == want);
                }
            }
        }
    }
}

TEST_CASE("demand order is largest first with id tie-break") {
    const auto vnr = make_cpu_vnr(1, {5, 10, 10, 1}, {{0, 3, 20}});
    // keys: v0 = 25, v1 = 10, v2 = 10, v3 = 21
    CHECK(demand_order(vnr) == std::vector<NodeId>{0, 3, 1, 2});
    CHECK(demand_key(vnr, 3) == Quantity::from_double(21));
}

TEST_CASE("embed hand-traced cases") {
    LocalEmbedParams params;

    SUBCASE("zero-demand single node lands on the root") {
        const auto net = make_cpu_network({1, 1}, {{0, 1, 1}});
        const auto vnr = make_cpu_vnr(1, {0}, {});
        const auto out = embed(1, net, vnr, params);
        REQUIRE(out.feasible);
        CHECK(out.solution.node_mapping == std::vector<NodeId>{1});
        CHECK(out.solution.cost == 0.0);
        CHECK(out.solution.revenue == 0.0);
        CHECK(out.inspected_count == 1);
    }
    SUBCASE("root fits one node, neighbor takes the other") {
        const auto net = make_cpu_network({10, 10}, {{0, 1, 5}});
        const auto vnr = make_cpu_vnr(1, {10, 10}, {{0, 1, 5}});
        const auto out = embed(0, net, vnr, params);
        REQUIRE(out.feasible);
        CHECK(out.solution.node_mapping == std::vector<NodeId>{0, 1});
        CHECK(out.solution.path_mapping == std::vector<std::vector<NodeId>>{{0, 1}});
        CHECK(out.solution.cost == doctest::Approx(25.0));
        CHECK(out.solution.metric == doctest::Approx(0.0));
        CHECK_FALSE(verify_solution(net, vnr, out.solution));
    }
    SUBCASE("thin link makes it infeasible") {
        const auto net = make_cpu_network({10, 10}, {{0, 1, 4}});
        const auto vnr = make_cpu_vnr(1, {10, 10}, {{0, 1, 5}});
        CHECK_FALSE(embed(0, net, vnr, params).feasible);
    }
    SUBCASE("co-location when it fits") {
        const auto net = make_cpu_network({100, 100}, {{0, 1, 1}});
        const auto vnr = make_cpu_vnr(1, {10, 10, 10}, {{0, 1, 5}, {1, 2, 5}});
        const auto out = embed(1, net, vnr, params);
        REQUIRE(out.feasible);
        CHECK(out.solution.node_mapping == std::vector<NodeId>{1, 1, 1});
        CHECK(out.solution.cost == doctest::Approx(30.0));
        CHECK(out.solution.revenue == doctest::Approx(40.0));
    }
    SUBCASE("injective mapping forbids co-location") {
        auto p = params;
        p.injective = true;
        const auto net = make_cpu_network({100, 100}, {{0, 1, 10}});
        const auto vnr = make_cpu_vnr(1, {10, 10}, {{0, 1, 5}});
        const auto out = embed(1, net, vnr, p);
        REQUIRE(out.feasible);
        CHECK(out.solution.node_mapping == std::vector<NodeId>{1, 0});
        CHECK(out.solution.path_mapping[0] == std::vector<NodeId>{1, 0});
        CHECK_FALSE(verify_solution(net, vnr, out.solution, true));
    }
}

TEST_CASE("embed respects depth and inspection budget") {
    // Line 0-1-2-3-4, each node fits one virtual node.
    const auto net =
        make_cpu_network({10, 10, 10, 10, 10}, {{0, 1, 50}, {1, 2, 50}, {2, 3, 50}, {3, 4, 50}});
    const auto vnr = make_cpu_vnr(1, {10, 10, 10}, {{0, 1, 1}, {1, 2, 1}});

    LocalEmbedParams shallow;
    shallow.beta = 1;
    auto out = embed(0, net, vnr, shallow);
    CHECK_FALSE(out.feasible);
    CHECK(out.max_depth_reached <= 1);
    CHECK(out.inspected_count == 2);

    LocalEmbedParams tight;
    tight.alpha = 0.5;  // ceil(1.5) = 2 inspected servers
    out = embed(0, net, vnr, tight);
    CHECK_FALSE(out.feasible);
    CHECK(out.inspected_count == 2);

    LocalEmbedParams roomy;
    out = embed(0, net, vnr, roomy);
    REQUIRE(out.feasible);
    // v1 carries two links so it is queued first and lands on the root.
    CHECK(out.solution.node_mapping == std::vector<NodeId>{1, 0, 2});
    CHECK(out.solution.path_mapping[1] == std::vector<NodeId>{0, 1, 2});
    CHECK(out.inspected_count == 3);
    CHECK(out.max_depth_reached == 2);

    CHECK(inspection_budget(30, 7) == 210);
    CHECK(inspection_budget(0.5, 3) == 2);
    CHECK(inspection_budget(0.01, 1) == 1);
}

TEST_CASE("embed never mutates and is deterministic") {
    GeneratorConfig cfg;
    cfg.server_count = 40;
    for (std::uint64_t seed = 0; seed < 20; ++seed) {
        auto rng = make_stream(seed, "det");
        const auto net = generate_physical_network(cfg, rng);
        const auto vnr = generate_vnr(cfg, seed, 0, rng);
        LocalEmbedParams params;
        const auto a = embed(static_cast<NodeId>(seed % 40), net, vnr, params);
        const auto b = embed(static_cast<NodeId>(seed % 40), net, vnr, params);
        CHECK(net.at_full_capacity());
        CHECK(a.feasible == b.feasible);
        CHECK(a.solution.node_mapping == b.solution.node_mapping);
        CHECK(a.solution.path_mapping == b.solution.path_mapping);
        CHECK(a.inspected_count == b.inspected_count);
        if (a.feasible) {
            CHECK_FALSE(verify_solution(net, vnr, a.solution));
        }
    }
}

TEST_CASE("embed is sound against the exhaustive oracle on small instances") {
    GeneratorConfig cfg;
    cfg.node_cpu = {20, 100};
    cfg.node_memory = {60, 400};
    cfg.node_gpu = {20, 100};
    cfg.link_bandwidth = {12, 36};
    cfg.vnr_min_nodes = 1;
    cfg.vnr_max_nodes = 3;
    cfg.vnr_link_probability = 0.8;
    int infeasible_seen = 0;
    for (std::uint64_t seed = 0; seed < 200; ++seed) {
        auto rng = make_stream(seed, "small");
        cfg.server_count = 1 + static_cast<std::uint32_t>(seed % 5);
        cfg.link_probability = 0.6;
        const auto net = generate_physical_network(cfg, rng);
        const auto vnr = generate_vnr(cfg, seed, 0, rng);
        for (bool injective : {false, true}) {
            LocalEmbedParams p;
            p.injective = injective;
            const bool exists = oracle::brute_force_feasible(net, vnr, injective);
            for (NodeId root = 0; root < net.node_count(); ++root) {
                const auto out = embed(root, net, vnr, p);
                if (out.feasible) {
                    CHECK(exists);
                    CHECK_FALSE(verify_solution(net, vnr, out.solution, injective));
                }
            }
            infeasible_seen += exists ? 0 : 1;
        }
    }
    CHECK(infeasible_seen > 0);
}
