#ifndef CANLINK_RATIONAL_HPP
#define CANLINK_RATIONAL_HPP

#include <gmpxx.h>

#include <cstdint>
#include <string>

#include "canlink/errors.hpp"

namespace canlink {

// Arbitrary-precision rational, always reduced, denominator > 0, zero is 0/1.
// Thin value wrapper over GMP's mpq_class so the canonical-form invariant and
// the rendering format stay pinned in one place.
class Rat {
  public:
    Rat() : q_(0) {}
    Rat(long n) : q_(n) {}
    Rat(long num, long den) : q_(num, den) {
        if (den == 0) throw PreconditionError("rational with zero denominator");
        q_.canonicalize();
    }
    explicit Rat(const mpz_class& n) : q_(n) {}
    Rat(const mpz_class& num, const mpz_class& den) : q_(num, den) {
        if (den == 0) throw PreconditionError("rational with zero denominator");
        q_.canonicalize();
    }
    explicit Rat(const mpq_class& q) : q_(q) { q_.canonicalize(); }

    static Rat from_string(const std::string& s) {
        mpq_class q;
        if (q.set_str(s, 10) != 0) throw PreconditionError("bad rational literal: " + s);
        if (q.get_den() == 0) throw PreconditionError("rational with zero denominator: " + s);
        q.canonicalize();
        return Rat(q);
    }

    bool is_zero() const { return sgn(q_) == 0; }
    bool is_one() const { return q_ == 1; }
    bool is_integer() const { return q_.get_den() == 1; }
    int sign() const { return sgn(q_); }

    mpz_class numerator() const { return q_.get_num(); }
    mpz_class denominator() const { return q_.get_den(); }

    Rat operator-() const { return Rat(mpq_class(-q_)); }
    Rat& operator+=(const Rat& o) { q_ += o.q_; return *this; }
    Rat& operator-=(const Rat& o) { q_ -= o.q_; return *this; }
    Rat& operator*=(const Rat& o) { q_ *= o.q_; return *this; }
    Rat& operator/=(const Rat& o) {
        if (o.is_zero()) throw PreconditionError("division by zero");
        q_ /= o.q_;
        return *this;
    }

    friend Rat operator+(Rat a, const Rat& b) { return a += b; }
    friend Rat operator-(Rat a, const Rat& b) { return a -= b; }
    friend Rat operator*(Rat a, const Rat& b) { return a *= b; }
    friend Rat operator/(Rat a, const Rat& b) { return a /= b; }

    friend bool operator==(const Rat& a, const Rat& b) { return a.q_ == b.q_; }
    friend bool operator!=(const Rat& a, const Rat& b) { return a.q_ != b.q_; }
    friend bool operator<(const Rat& a, const Rat& b) { return a.q_ < b.q_; }
    friend bool operator<=(const Rat& a, const Rat& b) { return a.q_ <= b.q_; }
    friend bool operator>(const Rat& a, const Rat& b) { return a.q_ > b.q_; }
    friend bool operator>=(const Rat& a, const Rat& b) { return a.q_ >= b.q_; }

    Rat inverse() const {
        if (is_zero()) throw PreconditionError("inverse of zero");
        return Rat(mpq_class(q_.get_den(), q_.get_num()));
    }

    Rat pow(std::int64_t e) const {
        if (e < 0) return inverse().pow(-e);
        Rat base = *this, acc = Rat(1);
        while (e > 0) {
            if (e & 1) acc *= base;
            base *= base;
            e >>= 1;
        }
        return acc;
    }

    Rat abs() const { return sign() < 0 ? -*this : *this; }

    // "p" for integers, "p/q" otherwise; '-' prefix on the numerator.
    std::string to_string() const { return q_.get_str(); }

    const mpq_class& raw() const { return q_; }

  private:
    mpq_class q_;
};

} // namespace canlink

#endif
