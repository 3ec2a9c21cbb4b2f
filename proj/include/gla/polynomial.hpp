#pragma once

// Multivariate polynomials with exact rational coefficients, stored sparsely
// under a graded lexicographic monomial order. Supports exact division and
// multivariate GCD (primitive pseudo-remainder sequences), which the scalar
// kernel uses for canonical forms.

#include <algorithm>
#include <cstddef>
#include <map>
#include <numeric>
#include <stdexcept>
#include <utility>
#include <vector>

#include "gla/rational.hpp"

namespace gla {

// Exponent vector; size equals the number of coordinates.
using Monomial = std::vector<unsigned>;

inline unsigned total_degree(const Monomial& m) {
    unsigned d = 0;
    for (unsigned e : m) d += e;
    return d;
}

// Graded lexicographic: compare total degree first, then exponents
// left to right (earlier coordinates more significant).
struct GrlexLess {
    bool operator()(const Monomial& a, const Monomial& b) const {
        unsigned da = total_degree(a), db = total_degree(b);
        if (da != db) return da < db;
        return std::lexicographical_compare(a.begin(), a.end(), b.begin(), b.end());
    }
};

class Polynomial {
public:
    using TermMap = std::map<Monomial, Rational, GrlexLess>;

    explicit Polynomial(std::size_t nvars = 0) : nvars_(nvars) {}

    static Polynomial constant(std::size_t nvars, Rational c) {
        Polynomial p(nvars);
        if (c != 0) p.terms_.emplace(Monomial(nvars, 0), std::move(c));
        return p;
    }

    static Polynomial variable(std::size_t nvars, std::size_t idx) {
        Polynomial p(nvars);
        Monomial m(nvars, 0);
        m.at(idx) = 1;
        p.terms_.emplace(std::move(m), Rational(1));
        return p;
    }

    std::size_t nvars() const { return nvars_; }
    const TermMap& terms() const { return terms_; }
    bool is_zero() const { return terms_.empty(); }

    bool is_constant() const {
        return terms_.empty() ||
               (terms_.size() == 1 && total_degree(terms_.begin()->first) == 0);
    }

    Rational constant_value() const {
        if (terms_.empty()) return Rational(0);
        if (!is_constant()) throw std::logic_error("polynomial is not constant");
        return terms_.begin()->second;
    }

    unsigned degree() const {
        return terms_.empty() ? 0 : total_degree(terms_.rbegin()->first);
    }

    unsigned degree_in(std::size_t var) const {
        unsigned d = 0;
        for (const auto& [m, c] : terms_) d = std::max(d, m.at(var));
        return d;
    }

    // Leading term under grlex.
    const std::pair<const Monomial, Rational>& leading() const {
        if (terms_.empty()) throw std::logic_error("leading term of zero polynomial");
        return *terms_.rbegin();
    }

    void add_term(const Monomial& m, const Rational& c) {
        if (c == 0) return;
        auto it = terms_.find(m);
        if (it == terms_.end()) {
            terms_.emplace(m, c);
        } else {
            it->second += c;
            if (it->second == 0) terms_.erase(it);
        }
    }

    Polynomial operator-() const {
        Polynomial r(nvars_);
        for (const auto& [m, c] : terms_) r.terms_.emplace(m, -c);
        return r;
    }

    Polynomial& operator+=(const Polynomial& o) {
        check_vars(o);
        for (const auto& [m, c] : o.terms_) add_term(m, c);
        return *this;
    }

    Polynomial& operator-=(const Polynomial& o) {
        check_vars(o);
        for (const auto& [m, c] : o.terms_) add_term(m, -c);
        return *this;
    }

    friend Polynomial operator+(Polynomial a, const Polynomial& b) { return a += b; }
    friend Polynomial operator-(Polynomial a, const Polynomial& b) { return a -= b; }

    friend Polynomial operator*(const Polynomial& a, const Polynomial& b) {
        a.check_vars(b);
        Polynomial r(a.nvars_);
        for (const auto& [ma, ca] : a.terms_) {
            for (const auto& [mb, cb] : b.terms_) {
                Monomial m(a.nvars_);
                for (std::size_t i = 0; i < a.nvars_; ++i) m[i] = ma[i] + mb[i];
                r.add_term(m, ca * cb);
            }
        }
        return r;
    }

    Polynomial& operator*=(const Polynomial& o) { return *this = *this * o; }

    Polynomial& operator*=(const Rational& c) {
        if (c == 0) { terms_.clear(); return *this; }
        for (auto& [m, v] : terms_) v *= c;
        return *this;
    }

    friend Polynomial operator*(Polynomial a, const Rational& c) { return a *= c; }
    friend Polynomial operator*(const Rational& c, Polynomial a) { return a *= c; }

    friend bool operator==(const Polynomial& a, const Polynomial& b) {
        return a.nvars_ == b.nvars_ && a.terms_ == b.terms_;
    }
    friend bool operator!=(const Polynomial& a, const Polynomial& b) { return !(a == b); }

    Polynomial derivative(std::size_t var) const {
        Polynomial r(nvars_);
        for (const auto& [m, c] : terms_) {
            if (m.at(var) == 0) continue;
            Monomial d = m;
            --d[var];
            r.add_term(d, c * Rational(m[var]));
        }
        return r;
    }

    Polynomial pow(unsigned e) const {
        Polynomial r = constant(nvars_, Rational(1));
        Polynomial base = *this;
        while (e > 0) {
            if (e & 1u) r *= base;
            base = (e >>= 1) ? base * base : base;
        }
        return r;
    }

    // Exact division by leading-term reduction; returns false when b does not
    // divide a.
    static bool try_divide(const Polynomial& a, const Polynomial& b, Polynomial& quotient) {
        a.check_vars(b);
        if (b.is_zero()) throw std::domain_error("polynomial division by zero");
        Polynomial q(a.nvars_);
        Polynomial rem = a;
        const auto& [lmb, lcb] = b.leading();
        while (!rem.is_zero()) {
            const auto& [lma, lca] = rem.leading();
            Monomial m(a.nvars_);
            for (std::size_t i = 0; i < a.nvars_; ++i) {
                if (lma[i] < lmb[i]) return false;
                m[i] = lma[i] - lmb[i];
            }
            Rational c = lca / lcb;
            Polynomial t(a.nvars_);
            t.terms_.emplace(std::move(m), std::move(c));
            q += t;
            rem -= t * b;
        }
        quotient = std::move(q);
        return true;
    }

    static Polynomial divide_exact(const Polynomial& a, const Polynomial& b) {
        Polynomial q;
        if (!try_divide(a, b, q)) throw std::logic_error("inexact polynomial division");
        return q;
    }

    // Normalized GCD: integer-primitive with positive grlex-leading
    // coefficient; constants (and units) give 1.
    static Polynomial gcd(const Polynomial& a, const Polynomial& b) {
        a.check_vars(b);
        if (a.is_zero() && b.is_zero()) return constant(a.nvars_, Rational(0));
        Polynomial g = gcd_impl(a, b);
        g.normalize_primitive();
        return g;
    }

    // Scale so that coefficients are coprime integers and the grlex-leading
    // coefficient is positive. No-op on zero.
    void normalize_primitive() {
        if (terms_.empty()) return;
        Integer lcm_den = 1, gcd_num = 0;
        for (const auto& [m, c] : terms_) {
            lcm_den = boost::multiprecision::lcm(lcm_den, denominator(c));
            gcd_num = boost::multiprecision::gcd(gcd_num, numerator(c));
        }
        Rational scale(lcm_den, gcd_num);
        if (leading().second < 0) scale = -scale;
        *this *= scale;
    }

    // Rational content: the factor removed by normalize_primitive.
    Rational rational_content() const {
        if (terms_.empty()) return Rational(0);
        Integer lcm_den = 1, gcd_num = 0;
        for (const auto& [m, c] : terms_) {
            lcm_den = boost::multiprecision::lcm(lcm_den, denominator(c));
            gcd_num = boost::multiprecision::gcd(gcd_num, numerator(c));
        }
        Rational content(gcd_num, lcm_den);
        if (leading().second < 0) content = -content;
        return content;
    }

private:
    void check_vars(const Polynomial& o) const {
        if (nvars_ != o.nvars_)
            throw std::logic_error("polynomial coordinate-set mismatch");
    }

    // --- multivariate GCD via primitive PRS -------------------------------

    // View as univariate in `var` with polynomial coefficients.
    static std::vector<Polynomial> coeffs_in(const Polynomial& p, std::size_t var) {
        std::vector<Polynomial> cs(p.degree_in(var) + 1, Polynomial(p.nvars_));
        for (const auto& [m, c] : p.terms_) {
            Monomial rest = m;
            unsigned e = rest[var];
            rest[var] = 0;
            cs[e].add_term(rest, c);
        }
        return cs;
    }

    static Polynomial from_coeffs(const std::vector<Polynomial>& cs, std::size_t var,
                                  std::size_t nvars) {
        Polynomial p(nvars);
        Polynomial x = variable(nvars, var);
        for (std::size_t e = 0; e < cs.size(); ++e)
            p += cs[e] * x.pow(static_cast<unsigned>(e));
        return p;
    }

    // Pseudo-remainder of a by b with respect to `var`, scaled by exactly
    // lc(b)^(deg a - deg b + 1) as the subresultant recurrences require.
    static Polynomial prem(Polynomial a, const Polynomial& b, std::size_t var) {
        unsigned db = b.degree_in(var);
        auto bc = coeffs_in(b, var);
        const Polynomial& lb = bc[db];
        Polynomial x = variable(a.nvars(), var);
        unsigned d0 = a.degree_in(var);
        unsigned steps = 0;
        while (!a.is_zero() && a.degree_in(var) >= db) {
            unsigned da = a.degree_in(var);
            Polynomial la = coeffs_in(a, var)[da];
            a = a * lb - b * la * x.pow(da - db);
            ++steps;
        }
        for (unsigned i = steps; i < d0 - db + 1; ++i) a = a * lb;
        return a;
    }

    static Polynomial content_in(const Polynomial& p, std::size_t var) {
        Polynomial c(p.nvars_);
        for (const Polynomial& coeff : coeffs_in(p, var)) {
            if (coeff.is_zero()) continue;
            c = c.is_zero() ? coeff : gcd_impl(c, coeff);
            if (c.is_constant()) break;
        }
        c.normalize_primitive();
        return c;
    }

    // Substitute every variable except `var` by a fixed prime, leaving a
    // univariate polynomial in `var`.
    static Polynomial image_in(const Polynomial& p, std::size_t var) {
        static const unsigned primes[] = {3, 5, 7, 11, 13, 17, 19, 23};
        Polynomial r(p.nvars_);
        for (const auto& [m, c] : p.terms_) {
            Rational t = c;
            Monomial im(p.nvars_);
            im[var] = m[var];
            for (std::size_t v = 0; v < m.size(); ++v) {
                if (v == var) continue;
                for (unsigned e = 0; e < m[v]; ++e)
                    t *= Rational(primes[v % (sizeof primes / sizeof *primes)]);
            }
            r.add_term(im, t);
        }
        return r;
    }

    // Sound fast path: if the univariate images keep their degree in `var`
    // (so no leading coefficient vanished at the evaluation point) and the
    // image gcd is constant, the gcd of the primitive parts is constant. The
    // leading coefficient of the true gcd divides the leading coefficient of
    // each input, so the true gcd's image cannot drop degree either.
    static bool image_coprime(const Polynomial& a, const Polynomial& b, std::size_t var) {
        Polynomial ia = image_in(a, var), ib = image_in(b, var);
        if (ia.degree_in(var) != a.degree_in(var) ||
            ib.degree_in(var) != b.degree_in(var))
            return false;
        if (ia.is_zero() || ib.is_zero()) return false;
        return gcd_impl(ia, ib).degree_in(var) == 0;
    }

    static Polynomial gcd_impl(Polynomial a, Polynomial b) {
        if (a.is_zero()) return b;
        if (b.is_zero()) return a;
        // Main variable: highest index occurring in either operand.
        std::size_t var = a.nvars();
        for (std::size_t v = a.nvars(); v-- > 0;) {
            if (a.degree_in(v) > 0 || b.degree_in(v) > 0) { var = v; break; }
        }
        if (var == a.nvars()) return constant(a.nvars(), Rational(1));

        Polynomial ca = content_in(a, var), cb = content_in(b, var);
        Polynomial cont = gcd_impl(ca, cb);
        cont.normalize_primitive();
        a = divide_exact(a, ca);
        b = divide_exact(b, cb);
        // Keep every PRS element primitive over the integers as well; without
        // this the rational content compounds across prem steps.
        a.normalize_primitive();
        b.normalize_primitive();

        bool multivariate = false;
        for (std::size_t v = 0; v < a.nvars_ && !multivariate; ++v)
            if (v != var && (a.degree_in(v) > 0 || b.degree_in(v) > 0)) multivariate = true;
        if (multivariate && image_coprime(a, b, var)) return cont;

        if (a.degree_in(var) < b.degree_in(var)) std::swap(a, b);

        // Subresultant PRS (Collins/Brown-Traub): every division below is
        // exact with a known divisor, so no per-step content gcds are needed.
        const std::size_t n = a.nvars_;
        unsigned gamma = a.degree_in(var) - b.degree_in(var);
        Polynomial beta = constant(n, Rational(gamma % 2 == 0 ? -1 : 1));
        Polynomial psi = constant(n, Rational(-1));
        while (true) {
            Polynomial r = prem(a, b, var);
            if (r.is_zero()) break;
            r = divide_exact(r, beta);
            if (r.degree_in(var) == 0) {
                // primitive inputs with a constant remainder: coprime in var
                return cont;
            }
            Polynomial neg_lb = coeffs_in(b, var)[b.degree_in(var)] * Rational(-1);
            if (gamma == 1)
                psi = neg_lb;
            else if (gamma > 1)
                psi = divide_exact(neg_lb.pow(gamma), psi.pow(gamma - 1));
            gamma = b.degree_in(var) - r.degree_in(var);
            beta = neg_lb * psi.pow(gamma);
            a = std::move(b);
            b = std::move(r);
        }
        Polynomial cb2 = content_in(b, var);
        b = divide_exact(b, cb2);
        b.normalize_primitive();
        return cont * b;
    }

    std::size_t nvars_;
    TermMap terms_;
};

}  // namespace gla
