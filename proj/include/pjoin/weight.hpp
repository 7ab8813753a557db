#pragma once

#include <cstdint>
#include <numeric>
#include <string>

namespace pjoin {

// Exact rational in units of the base threshold. Every strength the vicinal
// algorithms write is a ratio of T (T/k, T^2/(2kW), doublings, halvings), and
// the firing rule compares W >= T exactly, so weights are kept as int64
// fractions rather than doubles. Denominators stay small: they are products of
// synapse counts and k, reduced on every operation.
struct Ratio {
    std::int64_t num = 0;
    std::int64_t den = 1;

    constexpr Ratio() = default;
    constexpr Ratio(std::int64_t n, std::int64_t d) : num(n), den(d) {}

    static Ratio of(std::int64_t n, std::int64_t d) {
        Ratio r{n, d};
        r.normalize();
        return r;
    }

    void normalize() {
        if (den < 0) {
            num = -num;
            den = -den;
        }
        if (num == 0) {
            den = 1;
            return;
        }
        std::int64_t g = std::gcd(num < 0 ? -num : num, den);
        num /= g;
        den /= g;
    }

    Ratio& operator+=(const Ratio& o) {
        num = num * o.den + o.num * den;
        den = den * o.den;
        normalize();
        return *this;
    }

    friend Ratio operator+(Ratio a, const Ratio& b) {
        a += b;
        return a;
    }

    friend Ratio operator*(const Ratio& a, const Ratio& b) {
        return Ratio::of(a.num * b.num, a.den * b.den);
    }

    Ratio halved() const { return Ratio::of(num, den * 2); }
    Ratio doubled() const { return Ratio::of(num * 2, den); }

    bool is_zero() const { return num == 0; }
    bool positive() const { return num > 0; }

    // exact comparison against o (cross-multiplied; denominators positive)
    friend bool operator<(const Ratio& a, const Ratio& b) { return a.num * b.den < b.num * a.den; }
    friend bool operator>=(const Ratio& a, const Ratio& b) { return !(a < b); }
    friend bool operator==(const Ratio& a, const Ratio& b) { return a.num * b.den == b.num * a.den; }
    friend bool operator!=(const Ratio& a, const Ratio& b) { return !(a == b); }

    double value() const { return static_cast<double>(num) / static_cast<double>(den); }

    std::string str() const { return std::to_string(num) + "/" + std::to_string(den); }
};

inline constexpr Ratio ratio_zero{0, 1};
inline constexpr Ratio ratio_one{1, 1};

}  // namespace pjoin
