#pragma once

#include <compare>
#include <cstdint>
#include <stdexcept>
#include <string>

namespace devine {

// Fixed-precision resource amount: an integer count of thousandths.
// Allocation and release must cancel exactly, so no floating accumulation
// happens on residuals.
class Quantity {
public:
    static constexpr std::int64_t kScale = 1000;

    constexpr Quantity() = default;

    static constexpr Quantity from_milli(std::int64_t milli) { return Quantity(milli); }
    static Quantity from_double(double value);
    static constexpr Quantity zero() { return Quantity(0); }

    constexpr std::int64_t milli() const { return milli_; }
    constexpr double to_double() const { return static_cast<double>(milli_) / kScale; }
    constexpr bool is_negative() const { return milli_ < 0; }

    constexpr Quantity operator+(Quantity o) const { return Quantity(milli_ + o.milli_); }
    constexpr Quantity operator-(Quantity o) const { return Quantity(milli_ - o.milli_); }
    constexpr Quantity operator*(std::int64_t k) const { return Quantity(milli_ * k); }
    constexpr Quantity& operator+=(Quantity o) { milli_ += o.milli_; return *this; }
    constexpr Quantity& operator-=(Quantity o) { milli_ -= o.milli_; return *this; }

    constexpr auto operator<=>(const Quantity&) const = default;

    std::string to_string() const;

private:
    constexpr explicit Quantity(std::int64_t milli) : milli_(milli) {}
    std::int64_t milli_ = 0;
};

// CPU cores, memory in GB, GPU cores.
struct ResourceVector {
    Quantity cpu;
    Quantity memory;
    Quantity gpu;

    static ResourceVector of(double cpu, double memory, double gpu);

    bool is_nonnegative() const;
    // Componentwise <=.
    bool fits_within(const ResourceVector& available) const;

    ResourceVector operator+(const ResourceVector& o) const;
    // Throws std::domain_error if any component would go negative.
    ResourceVector operator-(const ResourceVector& o) const;
    ResourceVector& operator+=(const ResourceVector& o);
    ResourceVector& operator-=(const ResourceVector& o);

    bool operator==(const ResourceVector&) const = default;

    std::string to_string() const;
};

} // namespace devine
