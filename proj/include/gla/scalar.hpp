#pragma once

// ScalarExpr: exact multivariate rational functions over a named coordinate
// set. Canonical form (GCD-cancelled, integer-primitive denominator with
// positive leading coefficient) makes equality a syntactic comparison.

#include <map>
#include <memory>
#include <sstream>
#include <stdexcept>
#include <string>
#include <utility>
#include <vector>

#include "gla/polynomial.hpp"

namespace gla {

class CoordinateSet {
public:
    CoordinateSet() = default;

    explicit CoordinateSet(std::vector<std::string> names) : names_(std::move(names)) {
        for (std::size_t i = 0; i < names_.size(); ++i) {
            if (names_[i].empty())
                throw std::invalid_argument("empty coordinate name");
            if (!index_.emplace(names_[i], i).second)
                throw std::invalid_argument("duplicate coordinate name: " + names_[i]);
        }
    }

    std::size_t size() const { return names_.size(); }
    const std::vector<std::string>& names() const { return names_; }
    const std::string& name(std::size_t i) const { return names_.at(i); }

    bool contains(const std::string& n) const { return index_.count(n) != 0; }

    std::size_t index_of(const std::string& n) const {
        auto it = index_.find(n);
        if (it == index_.end())
            throw std::out_of_range("unknown coordinate: " + n);
        return it->second;
    }

    friend bool operator==(const CoordinateSet& a, const CoordinateSet& b) {
        return a.names_ == b.names_;
    }
    friend bool operator!=(const CoordinateSet& a, const CoordinateSet& b) {
        return !(a == b);
    }

private:
    std::vector<std::string> names_;
    std::map<std::string, std::size_t> index_;
};

class ScalarExpr {
public:
    ScalarExpr() : num_(0), den_(Polynomial::constant(0, Rational(1))) {}

    explicit ScalarExpr(CoordinateSet coords)
        : coords_(std::make_shared<CoordinateSet>(std::move(coords))),
          num_(coords_->size()),
          den_(Polynomial::constant(coords_->size(), Rational(1))) {}

    ScalarExpr(CoordinateSet coords, Polynomial num)
        : ScalarExpr(std::make_shared<CoordinateSet>(std::move(coords)), std::move(num)) {}

    ScalarExpr(std::shared_ptr<const CoordinateSet> coords, Polynomial num)
        : coords_(std::move(coords)),
          num_(std::move(num)),
          den_(Polynomial::constant(coords_->size(), Rational(1))) {
        if (num_.nvars() != coords_->size())
            throw std::logic_error("numerator/coordinate-set size mismatch");
    }

    ScalarExpr(std::shared_ptr<const CoordinateSet> coords, Polynomial num, Polynomial den)
        : coords_(std::move(coords)), num_(std::move(num)), den_(std::move(den)) {
        if (num_.nvars() != coords_->size() || den_.nvars() != coords_->size())
            throw std::logic_error("polynomial/coordinate-set size mismatch");
        if (den_.is_zero()) throw std::domain_error("zero denominator");
        canonicalize();
    }

    static ScalarExpr constant(const CoordinateSet& coords, const Rational& c) {
        return constant(std::make_shared<CoordinateSet>(coords), c);
    }

    static ScalarExpr constant(std::shared_ptr<const CoordinateSet> coords, const Rational& c) {
        Polynomial p = Polynomial::constant(coords->size(), c);
        return ScalarExpr(std::move(coords), std::move(p));
    }

    static ScalarExpr coordinate(const CoordinateSet& coords, const std::string& name) {
        return coordinate(std::make_shared<CoordinateSet>(coords), name);
    }

    static ScalarExpr coordinate(std::shared_ptr<const CoordinateSet> coords,
                                 const std::string& name) {
        Polynomial p = Polynomial::variable(coords->size(), coords->index_of(name));
        return ScalarExpr(std::move(coords), std::move(p));
    }

    const CoordinateSet& coords() const { return *coords_; }
    std::shared_ptr<const CoordinateSet> coords_ptr() const { return coords_; }
    const Polynomial& num() const { return num_; }
    const Polynomial& den() const { return den_; }

    bool is_zero() const { return num_.is_zero(); }

    bool is_one() const {
        return den_.is_constant() && den_.constant_value() == 1 &&
               num_.is_constant() && !num_.is_zero() && num_.constant_value() == 1;
    }

    friend bool operator==(const ScalarExpr& a, const ScalarExpr& b) {
        return *a.coords_ == *b.coords_ && a.num_ == b.num_ && a.den_ == b.den_;
    }
    friend bool operator!=(const ScalarExpr& a, const ScalarExpr& b) { return !(a == b); }

    ScalarExpr operator-() const {
        ScalarExpr r = *this;
        r.num_ = -r.num_;
        return r;
    }

    friend ScalarExpr operator+(const ScalarExpr& a, const ScalarExpr& b) {
        a.check_coords(b);
        if (a.den_ == b.den_)
            return ScalarExpr(a.coords_, a.num_ + b.num_, a.den_);
        return ScalarExpr(a.coords_, a.num_ * b.den_ + b.num_ * a.den_, a.den_ * b.den_);
    }

    friend ScalarExpr operator-(const ScalarExpr& a, const ScalarExpr& b) {
        a.check_coords(b);
        if (a.den_ == b.den_)
            return ScalarExpr(a.coords_, a.num_ - b.num_, a.den_);
        return ScalarExpr(a.coords_, a.num_ * b.den_ - b.num_ * a.den_, a.den_ * b.den_);
    }

    friend ScalarExpr operator*(const ScalarExpr& a, const ScalarExpr& b) {
        a.check_coords(b);
        if (a.is_zero() || b.is_zero()) return ScalarExpr::constant(a.coords_, Rational(0));
        return ScalarExpr(a.coords_, a.num_ * b.num_, a.den_ * b.den_);
    }

    friend ScalarExpr operator/(const ScalarExpr& a, const ScalarExpr& b) {
        a.check_coords(b);
        if (b.is_zero()) throw std::domain_error("division by zero expression");
        return ScalarExpr(a.coords_, a.num_ * b.den_, a.den_ * b.num_);
    }

    ScalarExpr& operator+=(const ScalarExpr& o) { return *this = *this + o; }
    ScalarExpr& operator-=(const ScalarExpr& o) { return *this = *this - o; }
    ScalarExpr& operator*=(const ScalarExpr& o) { return *this = *this * o; }
    ScalarExpr& operator/=(const ScalarExpr& o) { return *this = *this / o; }

    ScalarExpr pow(int e) const {
        if (e >= 0) {
            if (is_zero() && e == 0) return constant(coords_, Rational(1));
            return ScalarExpr(coords_, num_.pow(static_cast<unsigned>(e)),
                              den_.pow(static_cast<unsigned>(e)));
        }
        if (is_zero()) throw std::domain_error("zero to a negative power");
        return ScalarExpr(coords_, den_.pow(static_cast<unsigned>(-e)),
                          num_.pow(static_cast<unsigned>(-e)));
    }

    // Exact partial derivative, quotient rule.
    ScalarExpr partial(const std::string& coord) const {
        std::size_t v = coords_->index_of(coord);
        Polynomial dn = num_.derivative(v), dd = den_.derivative(v);
        if (dd.is_zero()) return ScalarExpr(coords_, dn, den_);
        return ScalarExpr(coords_, dn * den_ - num_ * dd, den_ * den_);
    }

    ScalarExpr partial(std::size_t v) const { return partial(coords_->name(v)); }

    // Substitute every coordinate by an expression over a target coordinate
    // set. `bindings` must bind every coordinate of this expression.
    ScalarExpr substitute(const std::map<std::string, ScalarExpr>& bindings) const {
        std::shared_ptr<const CoordinateSet> target;
        std::vector<const ScalarExpr*> values(coords_->size(), nullptr);
        for (std::size_t v = 0; v < coords_->size(); ++v) {
            auto it = bindings.find(coords_->name(v));
            if (it == bindings.end())
                throw std::invalid_argument("unbound coordinate: " + coords_->name(v));
            values[v] = &it->second;
            if (!target)
                target = it->second.coords_ptr();
            else if (*target != it->second.coords())
                throw std::invalid_argument("substitution targets differ between bindings");
        }
        if (!target) {
            // No coordinates: reinterpret the constant over the empty set.
            return *this;
        }
        ScalarExpr sn = eval_poly(num_, target, values);
        ScalarExpr sd = eval_poly(den_, target, values);
        if (sd.is_zero())
            throw std::domain_error("denominator vanishes identically after substitution");
        return sn / sd;
    }

    // Evaluate at rational coordinate values; domain_error when the
    // denominator vanishes at the point.
    Rational evaluate(const std::vector<Rational>& point) const {
        if (point.size() != coords_->size())
            throw std::invalid_argument("evaluation point size mismatch");
        Rational n = eval_at(num_, point), d = eval_at(den_, point);
        if (d == 0) throw std::domain_error("denominator vanishes at evaluation point");
        return n / d;
    }

    // Canonical printer; exactly invertible by parse_expr.
    std::string str() const {
        if (is_zero()) return "0";
        bool den_one = den_.is_constant() && den_.constant_value() == 1;
        if (den_one) return poly_str(num_);
        std::string n = num_.terms().size() == 1 && num_.leading().second > 0
                            ? poly_str(num_)
                            : "(" + poly_str(num_) + ")";
        std::string d = den_.terms().size() == 1 ? poly_str(den_) : "(" + poly_str(den_) + ")";
        return n + "/" + d;
    }

    std::string poly_str(const Polynomial& p) const {
        if (p.is_zero()) return "0";
        // Terms in descending grlex order, leading first.
        std::ostringstream out;
        bool first = true;
        for (auto it = p.terms().rbegin(); it != p.terms().rend(); ++it) {
            const auto& [m, c] = *it;
            Rational a = c;
            if (first) {
                if (a < 0) { out << "-"; a = -a; }
            } else {
                out << (a < 0 ? " - " : " + ");
                if (a < 0) a = -a;
            }
            first = false;
            bool has_vars = total_degree(m) > 0;
            if (!has_vars || a != 1) {
                out << a.str();
                if (has_vars) out << "*";
            }
            bool star = false;
            for (std::size_t v = 0; v < m.size(); ++v) {
                if (m[v] == 0) continue;
                if (star) out << "*";
                star = true;
                out << coords_->name(v);
                if (m[v] > 1) out << "^" << m[v];
            }
        }
        return out.str();
    }

private:
    void check_coords(const ScalarExpr& o) const {
        if (*coords_ != *o.coords_)
            throw std::logic_error("coordinate-set mismatch between expressions");
    }

    void canonicalize() {
        if (num_.is_zero()) {
            den_ = Polynomial::constant(coords_->size(), Rational(1));
            return;
        }
        if (!den_.is_constant()) {
            Polynomial g = Polynomial::gcd(num_, den_);
            if (!g.is_constant()) {
                num_ = Polynomial::divide_exact(num_, g);
                den_ = Polynomial::divide_exact(den_, g);
            }
        }
        Rational content = den_.rational_content();
        den_ *= Rational(1) / content;
        num_ *= Rational(1) / content;
    }

    static ScalarExpr eval_poly(const Polynomial& p,
                                const std::shared_ptr<const CoordinateSet>& target,
                                const std::vector<const ScalarExpr*>& values) {
        ScalarExpr acc = ScalarExpr::constant(target, Rational(0));
        for (const auto& [m, c] : p.terms()) {
            ScalarExpr term = ScalarExpr::constant(target, c);
            for (std::size_t v = 0; v < m.size(); ++v)
                if (m[v] > 0) term *= values[v]->pow(static_cast<int>(m[v]));
            acc += term;
        }
        return acc;
    }

    static Rational eval_at(const Polynomial& p, const std::vector<Rational>& point) {
        Rational acc(0);
        for (const auto& [m, c] : p.terms()) {
            Rational term = c;
            for (std::size_t v = 0; v < m.size(); ++v)
                for (unsigned e = 0; e < m[v]; ++e) term *= point[v];
            acc += term;
        }
        return acc;
    }

    std::shared_ptr<const CoordinateSet> coords_;
    Polynomial num_, den_;
};

inline bool is_zero(const ScalarExpr& f) { return f.is_zero(); }

}  // namespace gla
