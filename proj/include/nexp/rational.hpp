#pragma once

#include <boost/multiprecision/cpp_int.hpp>

#include <compare>
#include <cstdint>
#include <iosfwd>
#include <string>
#include <string_view>

namespace nexp {

using BigInt = boost::multiprecision::cpp_int;

// Exact nonnegative rational. Every distance, radius and tolerance in the
// library is carried by this type; there is no floating point on any path
// that decides a metric inequality.
class Rat {
public:
    Rat() = default;
    Rat(std::int64_t value);  // NOLINT(google-explicit-constructor)
    Rat(BigInt num, BigInt den);

    // 2^{-exponent}
    static Rat dyadic(std::int64_t exponent);
    // Parses "p/q" or "p".
    static Rat parse(std::string_view text);

    const BigInt& num() const { return num_; }
    const BigInt& den() const { return den_; }
    bool is_zero() const { return num_ == 0; }

    Rat& operator+=(const Rat& rhs);
    // Throws std::domain_error if the result would be negative.
    Rat& operator-=(const Rat& rhs);
    Rat& operator*=(const Rat& rhs);
    Rat& operator/=(const Rat& rhs);

    friend Rat operator+(Rat a, const Rat& b) { return a += b; }
    friend Rat operator-(Rat a, const Rat& b) { return a -= b; }
    friend Rat operator*(Rat a, const Rat& b) { return a *= b; }
    friend Rat operator/(Rat a, const Rat& b) { return a /= b; }

    friend bool operator==(const Rat& a, const Rat& b) {
        return a.num_ == b.num_ && a.den_ == b.den_;
    }
    friend std::strong_ordering operator<=>(const Rat& a, const Rat& b);

    // "p/q" in lowest terms; integers keep the "/1" suffix so the wire form
    // is uniform.
    std::string str() const;

    // Least N with 2^{-N} <= *this, i.e. *this rounded down to a dyadic level.
    // Requires 0 < *this <= 1.
    std::int64_t dyadic_floor_level() const;

    // Lossy; for human-facing summaries only.
    double approx() const;

private:
    void normalize();

    BigInt num_ = 0;
    BigInt den_ = 1;
};

std::ostream& operator<<(std::ostream& os, const Rat& r);

inline const Rat& min(const Rat& a, const Rat& b) { return b < a ? b : a; }
inline const Rat& max(const Rat& a, const Rat& b) { return a < b ? b : a; }

}  // namespace nexp
