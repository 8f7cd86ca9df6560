// cychom: exact scalars for homological computations.
// Rational wraps GMP's mpq_class and keeps fractions canonical (reduced,
// positive denominator). Fp is an odd-prime residue field whose elements
// carry their modulus, so mixed-context bugs fail loudly instead of wrapping.
#pragma once

#include <cstdint>
#include <stdexcept>
#include <string>

#include <gmpxx.h>

namespace cychom {

class Rational {
public:
    Rational() : v_(0) {}
    Rational(long n) : v_(n) {}
    Rational(long num, long den) : v_(num, den) {
        if (den == 0) throw std::invalid_argument("Rational: zero denominator");
        v_.canonicalize();
    }
    explicit Rational(const mpq_class& q) : v_(q) { v_.canonicalize(); }
    explicit Rational(const std::string& s) : v_(s) { v_.canonicalize(); }

    bool is_zero() const { return v_ == 0; }
    bool is_integral() const { return v_.get_den() == 1; }

    Rational operator-() const { return Rational(mpq_class(-v_), already_canonical{}); }
    Rational& operator+=(const Rational& o) { v_ += o.v_; return *this; }
    Rational& operator-=(const Rational& o) { v_ -= o.v_; return *this; }
    Rational& operator*=(const Rational& o) { v_ *= o.v_; return *this; }
    Rational& operator/=(const Rational& o) {
        if (o.is_zero()) throw std::domain_error("Rational: division by zero");
        v_ /= o.v_;
        return *this;
    }

    friend Rational operator+(Rational a, const Rational& b) { return a += b; }
    friend Rational operator-(Rational a, const Rational& b) { return a -= b; }
    friend Rational operator*(Rational a, const Rational& b) { return a *= b; }
    friend Rational operator/(Rational a, const Rational& b) { return a /= b; }
    friend bool operator==(const Rational& a, const Rational& b) { return a.v_ == b.v_; }
    friend bool operator!=(const Rational& a, const Rational& b) { return a.v_ != b.v_; }
    friend bool operator<(const Rational& a, const Rational& b) { return a.v_ < b.v_; }

    const mpq_class& value() const { return v_; }
    mpz_class numerator() const { return v_.get_num(); }
    mpz_class denominator() const { return v_.get_den(); }

    std::string str() const { return v_.get_str(); }

private:
    struct already_canonical {};
    Rational(mpq_class q, already_canonical) : v_(std::move(q)) {}
    mpq_class v_;
};

inline std::string to_string(const Rational& q) { return q.str(); }

// Residue field element. Modulus 0 marks an integer literal that has not yet
// met a genuine field element; arithmetic adopts the other operand's modulus.
// A process-wide default modulus, set once before computing, lets literal
// constructions start out reduced (the CLI sets it from --field fp:p).
class Fp {
public:
    Fp() : v_(0), p_(default_modulus()) { normalize(); }
    Fp(long n) : v_(n), p_(default_modulus()) { normalize(); }
    Fp(long n, std::uint64_t p) : p_(p) { v_ = reduce(n, p); }
    explicit Fp(const std::string& s) : v_(std::stoll(s)), p_(default_modulus()) { normalize(); }

    static void set_default_modulus(std::uint64_t p) { default_modulus_storage() = p; }
    static std::uint64_t default_modulus() { return default_modulus_storage(); }

    static Fp make(std::int64_t n, std::uint64_t p) { return Fp(static_cast<long>(n), p); }

    bool is_zero() const { return residue() == 0; }
    bool is_integral() const { return true; }
    std::uint64_t modulus() const { return p_; }

    Fp operator-() const {
        Fp r(*this);
        r.v_ = -r.v_;
        r.normalize();
        return r;
    }
    Fp& operator+=(const Fp& o) { adopt(o); v_ += lift(o); normalize(); return *this; }
    Fp& operator-=(const Fp& o) { adopt(o); v_ -= lift(o); normalize(); return *this; }
    Fp& operator*=(const Fp& o) {
        adopt(o);
        if (p_ == 0) { v_ *= o.v_; return *this; }
        normalize();
        std::uint64_t a = static_cast<std::uint64_t>(v_);
        std::uint64_t b = static_cast<std::uint64_t>(lift(o));
        v_ = static_cast<std::int64_t>((static_cast<unsigned __int128>(a) * b) % p_);
        return *this;
    }
    Fp& operator/=(const Fp& o) {
        adopt(o);
        if (p_ == 0) {
            if (o.v_ == 0) throw std::domain_error("Fp: division by zero");
            if (v_ % o.v_ != 0) throw std::domain_error("Fp: integer division without modulus");
            v_ /= o.v_;
            return *this;
        }
        std::int64_t b = lift(o);
        if (b % static_cast<std::int64_t>(p_) == 0) throw std::domain_error("Fp: division by zero");
        return *this *= Fp(static_cast<long>(inverse(reduce(b, p_), p_)), p_);
    }

    friend Fp operator+(Fp a, const Fp& b) { return a += b; }
    friend Fp operator-(Fp a, const Fp& b) { return a -= b; }
    friend Fp operator*(Fp a, const Fp& b) { return a *= b; }
    friend Fp operator/(Fp a, const Fp& b) { return a /= b; }
    friend bool operator==(const Fp& a, const Fp& b) {
        std::uint64_t p = a.p_ ? a.p_ : b.p_;
        if (a.p_ && b.p_ && a.p_ != b.p_) throw std::domain_error("Fp: modulus mismatch");
        if (p == 0) return a.v_ == b.v_;
        return reduce(a.v_, p) == reduce(b.v_, p);
    }
    friend bool operator!=(const Fp& a, const Fp& b) { return !(a == b); }

    std::string str() const { return std::to_string(residue()); }

private:
    static std::uint64_t& default_modulus_storage() {
        static std::uint64_t p = 0;
        return p;
    }

    static std::int64_t reduce(std::int64_t n, std::uint64_t p) {
        if (p == 0) return n;
        std::int64_t m = n % static_cast<std::int64_t>(p);
        return m < 0 ? m + static_cast<std::int64_t>(p) : m;
    }
    static std::uint64_t inverse(std::int64_t a, std::uint64_t p) {
        // extended Euclid
        std::int64_t t = 0, new_t = 1;
        std::int64_t r = static_cast<std::int64_t>(p), new_r = a;
        while (new_r != 0) {
            std::int64_t q = r / new_r;
            std::int64_t tmp = t - q * new_t; t = new_t; new_t = tmp;
            tmp = r - q * new_r; r = new_r; new_r = tmp;
        }
        if (r != 1) throw std::domain_error("Fp: modulus not prime or element not invertible");
        return static_cast<std::uint64_t>(t < 0 ? t + static_cast<std::int64_t>(p) : t);
    }
    void adopt(const Fp& o) {
        if (p_ == 0) p_ = o.p_;
        else if (o.p_ != 0 && o.p_ != p_) throw std::domain_error("Fp: modulus mismatch");
    }
    std::int64_t lift(const Fp& o) const { return p_ ? reduce(o.v_, p_) : o.v_; }
    void normalize() { if (p_) v_ = reduce(v_, p_); }
    std::int64_t residue() const { return p_ ? reduce(v_, p_) : v_; }

    std::int64_t v_;
    std::uint64_t p_;
};

inline std::string to_string(const Fp& x) { return x.str(); }

// Field-specific hooks for the elimination kernel.
template <class K>
struct scalar_traits {
    static constexpr bool integral_scaling = false;
    static K row_scale(const K&) { return K(1); }
};

template <>
struct scalar_traits<Rational> {
    static constexpr bool integral_scaling = true;
    // multiplier clearing the denominator of a single entry; callers fold over a row
    static Rational row_scale(const Rational& x) {
        return Rational(mpq_class(x.denominator()));
    }
};

inline bool is_probable_prime(std::uint64_t p) {
    if (p < 2) return false;
    for (std::uint64_t d = 2; d * d <= p; ++d)
        if (p % d == 0) return false;
    return true;
}

}  // namespace cychom
