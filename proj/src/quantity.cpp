#include "devine/quantity.hpp"

#include <cmath>
#include <cstdio>

namespace devine {

Quantity Quantity::from_double(double value) {
    if (!std::isfinite(value)) {
        throw std::invalid_argument("quantity must be finite");
    }
    return Quantity(static_cast<std::int64_t>(std::llround(value * kScale)));
}

std::string Quantity::to_string() const {
    char buf[48];
    const std::int64_t abs = milli_ < 0 ? -milli_ : milli_;
    std::snprintf(buf, sizeof(buf), "%s%lld.%03lld", milli_ < 0 ? "-" : "",
                  static_cast<long long>(abs / kScale), static_cast<long long>(abs % kScale));
    return buf;
}

ResourceVector ResourceVector::of(double cpu, double memory, double gpu) {
    ResourceVector r{Quantity::from_double(cpu), Quantity::from_double(memory),
                     Quantity::from_double(gpu)};
    if (!r.is_nonnegative()) {
        throw std::domain_error("resource components must be nonnegative");
    }
    return r;
}

bool ResourceVector::is_nonnegative() const {
    return !cpu.is_negative() && !memory.is_negative() && !gpu.is_negative();
}

bool ResourceVector::fits_within(const ResourceVector& available) const {
    return cpu <= available.cpu && memory <= available.memory && gpu <= available.gpu;
}

ResourceVector ResourceVector::operator+(const ResourceVector& o) const {
    return {cpu + o.cpu, memory + o.memory, gpu + o.gpu};
}

ResourceVector ResourceVector::operator-(const ResourceVector& o) const {
    ResourceVector r{cpu - o.cpu, memory - o.memory, gpu - o.gpu};
    if (!r.is_nonnegative()) {
        throw std::domain_error("resource subtraction would go negative: " + to_string() +
                                " - " + o.to_string());
    }
    return r;
}

ResourceVector& ResourceVector::operator+=(const ResourceVector& o) {
    *this = *this + o;
    return *this;
}

ResourceVector& ResourceVector::operator-=(const ResourceVector& o) {
    *this = *this - o;
    return *this;
}

std::string ResourceVector::to_string() const {
    return "(cpu " + cpu.to_string() + ", mem " + memory.to_string() + ", gpu " +
           gpu.to_string() + ")";
}

} // namespace devine
