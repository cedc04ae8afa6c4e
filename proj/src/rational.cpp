#include "nexp/rational.hpp"

#include <ostream>
#include <stdexcept>

namespace nexp {

Rat::Rat(std::int64_t value) : num_(value), den_(1) {
    if (value < 0) throw std::domain_error("Rat: negative value");
}

Rat::Rat(BigInt num, BigInt den) : num_(std::move(num)), den_(std::move(den)) {
    if (den_ == 0) throw std::domain_error("Rat: zero denominator");
    if (num_ < 0 || den_ < 0) throw std::domain_error("Rat: negative value");
    normalize();
}

Rat Rat::dyadic(std::int64_t exponent) {
    if (exponent < 0) throw std::domain_error("Rat::dyadic: negative exponent");
    Rat r;
    r.num_ = 1;
    r.den_ = BigInt(1) << static_cast<unsigned>(exponent);
    return r;
}

namespace {

BigInt parse_digits(std::string_view s, std::string_view whole) {
    if (s.empty()) throw std::invalid_argument("Rat::parse: malformed '" + std::string(whole) + "'");
    for (char c : s) {
        if (c < '0' || c > '9') {
            throw std::invalid_argument("Rat::parse: malformed '" + std::string(whole) + "'");
        }
    }
    return BigInt(std::string(s));
}

}  // namespace

Rat Rat::parse(std::string_view text) {
    auto slash = text.find('/');
    if (slash == std::string_view::npos) return Rat(parse_digits(text, text), BigInt(1));
    auto den = parse_digits(text.substr(slash + 1), text);
    if (den == 0) throw std::invalid_argument("Rat::parse: zero denominator in '" + std::string(text) + "'");
    return Rat(parse_digits(text.substr(0, slash), text), std::move(den));
}

void Rat::normalize() {
    if (num_ == 0) {
        den_ = 1;
        return;
    }
    BigInt g = boost::multiprecision::gcd(num_, den_);
    if (g != 1) {
        num_ /= g;
        den_ /= g;
    }
}

Rat& Rat::operator+=(const Rat& rhs) {
    if (den_ == rhs.den_) {
        num_ += rhs.num_;
    } else {
        num_ = num_ * rhs.den_ + rhs.num_ * den_;
        den_ *= rhs.den_;
    }
    normalize();
    return *this;
}

Rat& Rat::operator-=(const Rat& rhs) {
    if (den_ == rhs.den_) {
        num_ -= rhs.num_;
    } else {
        num_ = num_ * rhs.den_ - rhs.num_ * den_;
        den_ *= rhs.den_;
    }
    if (num_ < 0) throw std::domain_error("Rat: subtraction underflows zero");
    normalize();
    return *this;
}

Rat& Rat::operator*=(const Rat& rhs) {
    num_ *= rhs.num_;
    den_ *= rhs.den_;
    normalize();
    return *this;
}

Rat& Rat::operator/=(const Rat& rhs) {
    if (rhs.num_ == 0) throw std::domain_error("Rat: division by zero");
    num_ *= rhs.den_;
    den_ *= rhs.num_;
    normalize();
    return *this;
}

std::strong_ordering operator<=>(const Rat& a, const Rat& b) {
    if (a.den_ == b.den_) {
        if (a.num_ < b.num_) return std::strong_ordering::less;
        if (b.num_ < a.num_) return std::strong_ordering::greater;
        return std::strong_ordering::equal;
    }
    BigInt lhs = a.num_ * b.den_;
    BigInt rhs = b.num_ * a.den_;
    if (lhs < rhs) return std::strong_ordering::less;
    if (rhs < lhs) return std::strong_ordering::greater;
    return std::strong_ordering::equal;
}

std::string Rat::str() const { return num_.str() + "/" + den_.str(); }

std::int64_t Rat::dyadic_floor_level() const {
    if (num_ == 0 || num_ > den_) throw std::domain_error("dyadic_floor_level: value outside (0,1]");
    // least N with 2^N * num >= den
    std::int64_t level = 0;
    BigInt scaled = num_;
    while (scaled < den_) {
        scaled <<= 1;
        ++level;
    }
    return level;
}

double Rat::approx() const {
    return static_cast<double>(num_) / static_cast<double>(den_);
}

std::ostream& operator<<(std::ostream& os, const Rat& r) { return os << r.str(); }

}  // namespace nexp
