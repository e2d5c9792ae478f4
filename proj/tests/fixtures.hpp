#pragma once

#include <initializer_list>
#include <tuple>
#include <vector>

#include "devine/network.hpp"

namespace devine::testing {

// cpu-only nodes with ample memory/gpu.
inline ResourceVector cpu_only(double cpu) { return ResourceVector::of(cpu, 1000.0, 1000.0); }

struct LinkSpec {
    NodeId a;
    NodeId b;
    double bw;
};

inline PhysicalNetwork make_network(std::initializer_list<ResourceVector> nodes,
                                    std::initializer_list<LinkSpec> links) {
    PhysicalNetwork net;
    for (const auto& n : nodes) {
        net.add_node(n);
    }
    for (const auto& l : links) {
        net.add_link(l.a, l.b, Quantity::from_double(l.bw));
    }
    return net;
}

inline PhysicalNetwork make_cpu_network(std::initializer_list<double> cpus,
                                        std::initializer_list<LinkSpec> links) {
    PhysicalNetwork net;
    for (double c : cpus) {
        net.add_node(cpu_only(c));
    }
    for (const auto& l : links) {
        net.add_link(l.a, l.b, Quantity::from_double(l.bw));
    }
    return net;
}

inline Vnr make_vnr(RequestId id, std::initializer_list<ResourceVector> nodes,
                    std::initializer_list<LinkSpec> links) {
    Vnr v;
    v.request_id = id;
    v.lifetime = 10.0;
    for (const auto& n : nodes) {
        v.add_node(n);
    }
    for (const auto& l : links) {
        v.add_link(l.a, l.b, Quantity::from_double(l.bw));
    }
    return v;
}

// Virtual nodes demand cpu only (memory/gpu zero).
inline Vnr make_cpu_vnr(RequestId id, std::initializer_list<double> cpus,
                        std::initializer_list<LinkSpec> links) {
    Vnr v;
    v.request_id = id;
    v.lifetime = 10.0;
    for (double c : cpus) {
        v.add_node(ResourceVector::of(c, 0.0, 0.0));
    }
    for (const auto& l : links) {
        v.add_link(l.a, l.b, Quantity::from_double(l.bw));
    }
    return v;
}

} // namespace devine::testing
