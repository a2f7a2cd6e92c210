#pragma once

#include <cstdint>
#include <numeric>
#include <stdexcept>
#include <string>

namespace ukcm {

struct arithmetic_overflow : std::runtime_error {
    explicit arithmetic_overflow(const std::string& what) : std::runtime_error(what) {}
};

// Exact rational with int64 numerator/denominator in lowest terms.
// Intermediates run in 128 bits; results that do not fit back into
// int64 raise arithmetic_overflow instead of wrapping.
class Rat {
  public:
    Rat() : num_(0), den_(1) {}
    Rat(std::int64_t n) : num_(n), den_(1) {}  // NOLINT: implicit by design
    Rat(std::int64_t n, std::int64_t d) {
        if (d == 0) throw std::invalid_argument("Rat: zero denominator");
        __int128 nn = n, dd = d;
        if (dd < 0) { nn = -nn; dd = -dd; }
        __int128 g = gcd128(nn < 0 ? -nn : nn, dd);
        if (g > 1) { nn /= g; dd /= g; }
        num_ = narrow(nn, "Rat ctor");
        den_ = narrow(dd, "Rat ctor");
    }

    std::int64_t num() const { return num_; }
    std::int64_t den() const { return den_; }

    friend Rat operator+(const Rat& a, const Rat& b) {
        return make((__int128)a.num_ * b.den_ + (__int128)b.num_ * a.den_,
                    (__int128)a.den_ * b.den_);
    }
    friend Rat operator-(const Rat& a, const Rat& b) {
        return make((__int128)a.num_ * b.den_ - (__int128)b.num_ * a.den_,
                    (__int128)a.den_ * b.den_);
    }
    friend Rat operator*(const Rat& a, const Rat& b) {
        return make((__int128)a.num_ * b.num_, (__int128)a.den_ * b.den_);
    }
    friend Rat operator/(const Rat& a, const Rat& b) {
        if (b.num_ == 0) throw std::invalid_argument("Rat: division by zero");
        return make((__int128)a.num_ * b.den_, (__int128)a.den_ * b.num_);
    }
    Rat operator-() const { Rat r; r.num_ = -num_; r.den_ = den_; return r; }

    Rat& operator+=(const Rat& o) { *this = *this + o; return *this; }
    Rat& operator-=(const Rat& o) { *this = *this - o; return *this; }
    Rat& operator*=(const Rat& o) { *this = *this * o; return *this; }
    Rat& operator/=(const Rat& o) { *this = *this / o; return *this; }

    friend bool operator==(const Rat& a, const Rat& b) {
        return a.num_ == b.num_ && a.den_ == b.den_;
    }
    friend bool operator!=(const Rat& a, const Rat& b) { return !(a == b); }
    friend bool operator<(const Rat& a, const Rat& b) {
        return (__int128)a.num_ * b.den_ < (__int128)b.num_ * a.den_;
    }
    friend bool operator>(const Rat& a, const Rat& b) { return b < a; }
    friend bool operator<=(const Rat& a, const Rat& b) { return !(b < a); }
    friend bool operator>=(const Rat& a, const Rat& b) { return !(a < b); }

    int sign() const { return num_ > 0 ? 1 : (num_ < 0 ? -1 : 0); }
    double to_double() const { return (double)num_ / (double)den_; }

    // Largest integer <= value / smallest integer >= value.
    std::int64_t floor() const {
        std::int64_t q = num_ / den_;
        if (num_ % den_ != 0 && num_ < 0) --q;
        return q;
    }
    std::int64_t ceil() const {
        std::int64_t q = num_ / den_;
        if (num_ % den_ != 0 && num_ > 0) ++q;
        return q;
    }

    std::string str() const {
        if (den_ == 1) return std::to_string(num_);
        return std::to_string(num_) + "/" + std::to_string(den_);
    }

    // Accepts "p", "p/q" and plain decimals like "-2.75".
    static Rat parse(const std::string& s);

  private:
    static __int128 gcd128(__int128 a, __int128 b) {
        while (b != 0) { __int128 t = a % b; a = b; b = t; }
        return a;
    }
    static std::int64_t narrow(__int128 v, const char* ctx) {
        if (v > INT64_MAX || v < INT64_MIN)
            throw arithmetic_overflow(std::string(ctx) + ": rational out of 64-bit range");
        return (std::int64_t)v;
    }
    static Rat make(__int128 n, __int128 d) {
        if (d < 0) { n = -n; d = -d; }
        __int128 g = gcd128(n < 0 ? -n : n, d);
        if (g > 1) { n /= g; d /= g; }
        Rat r;
        r.num_ = narrow(n, "Rat arithmetic");
        r.den_ = narrow(d, "Rat arithmetic");
        return r;
    }

    std::int64_t num_;
    std::int64_t den_;
};

inline Rat Rat::parse(const std::string& s) {
    if (s.empty()) throw std::invalid_argument("Rat::parse: empty string");
    auto slash = s.find('/');
    if (slash != std::string::npos) {
        std::int64_t n = std::stoll(s.substr(0, slash));
        std::int64_t d = std::stoll(s.substr(slash + 1));
        return Rat(n, d);
    }
    auto dot = s.find('.');
    if (dot == std::string::npos) return Rat(std::stoll(s));
    bool neg = s[0] == '-';
    std::string ip = s.substr(0, dot);
    std::string fp = s.substr(dot + 1);
    if (fp.size() > 18) fp = fp.substr(0, 18);
    std::int64_t den = 1;
    for (std::size_t i = 0; i < fp.size(); ++i) {
        if ((__int128)den * 10 > INT64_MAX) throw arithmetic_overflow("Rat::parse");
        den *= 10;
    }
    std::int64_t ipv = ip.empty() || ip == "-" ? 0 : std::stoll(ip);
    std::int64_t fpv = fp.empty() ? 0 : std::stoll(fp);
    __int128 n = (__int128)(ipv < 0 ? -ipv : ipv) * den + fpv;
    if (neg) n = -n;
    if (n > INT64_MAX || n < INT64_MIN) throw arithmetic_overflow("Rat::parse");
    return Rat((std::int64_t)n, den);
}

}  // namespace ukcm
