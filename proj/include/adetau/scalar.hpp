#pragma once

#include <gmpxx.h>

#include <cmath>
#include <cstdint>
#include <map>
#include <optional>
#include <ostream>
#include <stdexcept>
#include <string>
#include <vector>

namespace adetau {

using Int = mpz_class;

// Exact rational in lowest terms, positive denominator.
class Rat {
public:
    Rat() : q_(0) {}
    Rat(int v) : q_(v) {}
    Rat(long v) : q_(v) {}
    Rat(long long v) : q_(static_cast<long>(v)) {}
    Rat(unsigned long v) : q_(v) {}
    Rat(const Int& v) : q_(v) {}
    template <class U>
    Rat(const __gmp_expr<mpz_t, U>& e) : q_(Int(e)) {}
    Rat(const Int& n, const Int& d) {
        if (d == 0) throw std::domain_error("Rat: zero denominator");
        q_ = mpq_class(n, d);
        q_.canonicalize();
    }
    Rat(long n, long d) : Rat(Int(n), Int(d)) {}
    explicit Rat(const mpq_class& q) : q_(q) { q_.canonicalize(); }

    static Rat parse(const std::string& s) {
        auto slash = s.find('/');
        if (slash == std::string::npos) return Rat(Int(s));
        return Rat(Int(s.substr(0, slash)), Int(s.substr(slash + 1)));
    }

    Int num() const { return q_.get_num(); }
    Int den() const { return q_.get_den(); }
    const mpq_class& raw() const { return q_; }

    bool is_zero() const { return sgn(q_) == 0; }
    bool is_integer() const { return q_.get_den() == 1; }
    int sign() const { return sgn(q_); }

    std::string str() const { return q_.get_num().get_str() + "/" + q_.get_den().get_str(); }
    double to_double() const { return q_.get_d(); }

    // log|q| without overflow; q != 0.
    double log_abs() const {
        return log_abs_int(q_.get_num()) - log_abs_int(q_.get_den());
    }

    Rat& operator+=(const Rat& o) { q_ += o.q_; return *this; }
    Rat& operator-=(const Rat& o) { q_ -= o.q_; return *this; }
    Rat& operator*=(const Rat& o) { q_ *= o.q_; return *this; }
    Rat& operator/=(const Rat& o) {
        if (o.is_zero()) throw std::domain_error("Rat: division by zero");
        q_ /= o.q_;
        return *this;
    }
    friend Rat operator+(Rat a, const Rat& b) { return a += b; }
    friend Rat operator-(Rat a, const Rat& b) { return a -= b; }
    friend Rat operator*(Rat a, const Rat& b) { return a *= b; }
    friend Rat operator/(Rat a, const Rat& b) { return a /= b; }
    Rat operator-() const { Rat r; r.q_ = -q_; return r; }

    friend bool operator==(const Rat& a, const Rat& b) { return a.q_ == b.q_; }
    friend bool operator!=(const Rat& a, const Rat& b) { return a.q_ != b.q_; }
    friend bool operator<(const Rat& a, const Rat& b) { return a.q_ < b.q_; }
    friend bool operator<=(const Rat& a, const Rat& b) { return a.q_ <= b.q_; }
    friend bool operator>(const Rat& a, const Rat& b) { return a.q_ > b.q_; }
    friend bool operator>=(const Rat& a, const Rat& b) { return a.q_ >= b.q_; }
    friend std::ostream& operator<<(std::ostream& os, const Rat& a) { return os << a.str(); }

    static double log_abs_int(const Int& z) {
        long e = 0;
        double m = mpz_get_d_2exp(&e, z.get_mpz_t());
        return std::log(std::fabs(m)) + static_cast<double>(e) * std::log(2.0);
    }

private:
    mpq_class q_;
};

inline Rat pow(const Rat& x, long n) {
    if (n < 0) return Rat(1) / pow(x, -n);
    mpz_class nn, dd;
    mpz_pow_ui(nn.get_mpz_t(), x.num().get_mpz_t(), static_cast<unsigned long>(n));
    mpz_pow_ui(dd.get_mpz_t(), x.den().get_mpz_t(), static_cast<unsigned long>(n));
    return Rat(mpq_class(nn, dd));
}

inline Rat floor_rat(const Rat& x) {
    Int f;
    mpz_fdiv_q(f.get_mpz_t(), x.num().get_mpz_t(), x.den().get_mpz_t());
    return Rat(f);
}

inline Int floor_int(const Rat& x) {
    Int f;
    mpz_fdiv_q(f.get_mpz_t(), x.num().get_mpz_t(), x.den().get_mpz_t());
    return f;
}

inline std::optional<Rat> exact_sqrt(const Rat& x) {
    if (x.sign() < 0) return std::nullopt;
    Int n = x.num(), d = x.den();
    if (!mpz_perfect_square_p(n.get_mpz_t()) || !mpz_perfect_square_p(d.get_mpz_t())) return std::nullopt;
    Int sn, sd;
    mpz_sqrt(sn.get_mpz_t(), n.get_mpz_t());
    mpz_sqrt(sd.get_mpz_t(), d.get_mpz_t());
    return Rat(sn, sd);
}

// a + b*sqrt(3)
class QuadElem {
public:
    QuadElem() = default;
    QuadElem(int a) : a_(a) {}
    QuadElem(long a) : a_(a) {}
    QuadElem(const Rat& a) : a_(a) {}
    QuadElem(const Rat& a, const Rat& b) : a_(a), b_(b) {}

    const Rat& a() const { return a_; }
    const Rat& b() const { return b_; }
    bool is_zero() const { return a_.is_zero() && b_.is_zero(); }
    Rat norm() const { return a_ * a_ - Rat(3) * b_ * b_; }
    QuadElem conj() const { return QuadElem(a_, -b_); }
    double to_double() const { return a_.to_double() + b_.to_double() * std::sqrt(3.0); }

    std::string str() const { return a_.str() + "+" + b_.str() + "*sqrt3"; }
    static QuadElem parse(const std::string& s) {
        auto plus = s.find('+', 1);
        auto star = s.find("*sqrt3");
        if (plus == std::string::npos || star == std::string::npos)
            throw std::invalid_argument("QuadElem: bad literal " + s);
        return QuadElem(Rat::parse(s.substr(0, plus)), Rat::parse(s.substr(plus + 1, star - plus - 1)));
    }

    QuadElem& operator+=(const QuadElem& o) { a_ += o.a_; b_ += o.b_; return *this; }
    QuadElem& operator-=(const QuadElem& o) { a_ -= o.a_; b_ -= o.b_; return *this; }
    QuadElem& operator*=(const QuadElem& o) {
        Rat na = a_ * o.a_ + Rat(3) * b_ * o.b_;
        Rat nb = a_ * o.b_ + b_ * o.a_;
        a_ = na;
        b_ = nb;
        return *this;
    }
    QuadElem& operator/=(const QuadElem& o) {
        Rat n = o.norm();
        if (n.is_zero()) throw std::domain_error("QuadElem: division by zero");
        *this *= o.conj();
        a_ /= n;
        b_ /= n;
        return *this;
    }
    friend QuadElem operator+(QuadElem x, const QuadElem& y) { return x += y; }
    friend QuadElem operator-(QuadElem x, const QuadElem& y) { return x -= y; }
    friend QuadElem operator*(QuadElem x, const QuadElem& y) { return x *= y; }
    friend QuadElem operator/(QuadElem x, const QuadElem& y) { return x /= y; }
    QuadElem operator-() const { return QuadElem(-a_, -b_); }
    friend bool operator==(const QuadElem& x, const QuadElem& y) { return x.a_ == y.a_ && x.b_ == y.b_; }
    friend bool operator!=(const QuadElem& x, const QuadElem& y) { return !(x == y); }
    friend std::ostream& operator<<(std::ostream& os, const QuadElem& x) { return os << x.str(); }

private:
    Rat a_, b_;
};

// Principal square root in Q(sqrt3) when it exists: positive as a real number.
inline std::optional<QuadElem> exact_sqrt(const QuadElem& x) {
    if (x.is_zero()) return QuadElem();
    auto n = exact_sqrt(x.norm());
    std::vector<QuadElem> cands;
    if (n) {
        for (const Rat& s : {*n, -*n}) {
            Rat c2 = (x.a() + s) / Rat(2);
            auto c = exact_sqrt(c2);
            if (!c) continue;
            if (c->is_zero()) {
                if (!x.b().is_zero()) continue;
                auto d = exact_sqrt(x.a() / Rat(3));
                if (d) cands.emplace_back(Rat(0), *d);
            } else {
                cands.emplace_back(*c, x.b() / (Rat(2) * *c));
            }
        }
    }
    for (auto& c : cands) {
        if (c * c != x) continue;
        if (c.to_double() < 0) c = -c;
        return c;
    }
    return std::nullopt;
}

inline bool is_zero(const Rat& x) { return x.is_zero(); }
inline bool is_zero(const QuadElem& x) { return x.is_zero(); }
inline std::string to_string(const Rat& x) { return x.str(); }
inline std::string to_string(const QuadElem& x) { return x.str(); }

struct FracParts {
    Int m;
    Rat A;
};

inline FracParts frac_int(const Int& numer, const Int& denom) {
    if (denom <= 0) throw std::domain_error("frac_int: denominator must be positive");
    Int m;
    mpz_fdiv_q(m.get_mpz_t(), numer.get_mpz_t(), denom.get_mpz_t());
    return {m, Rat(numer, denom) - Rat(m)};
}

inline FracParts frac_int(long numer, long denom) { return frac_int(Int(numer), Int(denom)); }

inline Rat poch_asc(const Rat& x, long n) {
    Rat p(1);
    for (long i = 0; i < n; ++i) p *= x + Rat(i);
    return p;
}

// (x)_n for any integer n, with (x)_{-k} = 1/((x-1)...(x-k)).
inline Rat poch_signed(const Rat& x, long n) {
    if (n >= 0) return poch_asc(x, n);
    Rat p(1);
    for (long i = 1; i <= -n; ++i) p *= x - Rat(i);
    return Rat(1) / p;
}

inline Rat poch_desc(const Rat& x, long n) {
    Rat p(1);
    for (long i = 0; i < n; ++i) p *= x - Rat(i);
    return p;
}

inline Int factorial(long n) {
    Int f;
    mpz_fac_ui(f.get_mpz_t(), static_cast<unsigned long>(n));
    return f;
}

// (2k+1)!! = 1*3*...*(2k+1); (-1)!! = 1.
inline Int odd_double_factorial(long k) {
    Int f(1);
    for (long i = 1; i <= 2 * k + 1; i += 2) f *= i;
    return f;
}

inline Int binom_int(long n, long k) {
    if (k < 0 || n < 0 || k > n) return Int(0);
    Int b;
    mpz_bin_uiui(b.get_mpz_t(), static_cast<unsigned long>(n), static_cast<unsigned long>(k));
    return b;
}

inline Rat gen_binom(const Rat& x, long d) { return poch_desc(x, d) / Rat(factorial(d)); }

inline long padic_val(const Int& z, long p) {
    if (z == 0) throw std::domain_error("padic_val: zero");
    Int t = abs(z);
    Int pp(p);
    long v = 0;
    while (mpz_divisible_p(t.get_mpz_t(), pp.get_mpz_t())) {
        t /= pp;
        ++v;
    }
    return v;
}

inline long padic_val(const Rat& q, long p) {
    if (q.is_zero()) throw std::domain_error("padic_val: zero input");
    return padic_val(q.num(), p) - padic_val(q.den(), p);
}

// Akiyama-Tanigawa; returns B_n with B_1 = +1/2 convention irrelevant for even n.
inline Rat bernoulli(long n) {
    if (n < 0) throw std::domain_error("bernoulli: negative index");
    std::vector<Rat> a(static_cast<size_t>(n) + 1);
    for (long m = 0; m <= n; ++m) {
        a[m] = Rat(1, m + 1);
        for (long j = m; j >= 1; --j) a[j - 1] = Rat(j) * (a[j - 1] - a[j]);
    }
    if (n == 1) return Rat(-1, 2);
    return a[0];
}

// Prime factorization of a positive integer by trial division plus a probable-prime cofactor.
inline std::map<Int, long> factor_int(Int n) {
    std::map<Int, long> out;
    n = abs(n);
    if (n <= 1) return out;
    for (unsigned long p = 2; p < 100000; ++p) {
        if (Int(p) * Int(p) > n) break;
        while (mpz_divisible_ui_p(n.get_mpz_t(), p)) {
            n /= p;
            ++out[Int(p)];
        }
    }
    if (n > 1) ++out[n];
    return out;
}

}  // namespace adetau
