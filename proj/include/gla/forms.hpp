#pragma once

// Exterior forms on a generalized Lie algebroid: sparse coefficients on
// strictly increasing frame-index tuples, wedge and interior products, the
// exterior derivative by both the coefficient formula and the intrinsic
// frame-tuple sum, Lie derivative, Maurer-Cartan checks and pull-backs.

#include <algorithm>
#include <map>
#include <sstream>
#include <vector>

#include "gla/algebroid.hpp"

namespace gla {

using FormKey = std::vector<std::size_t>;  // strictly increasing, 0-based

class Form {
public:
    // Degrees above the rank are allowed; such forms are identically zero.
    Form(AlgebroidPtr algebroid, std::size_t degree)
        : algebroid_(std::move(algebroid)), degree_(degree) {}

    static Form zero(AlgebroidPtr a, std::size_t degree) { return Form(std::move(a), degree); }

    static Form function(AlgebroidPtr a, ScalarExpr f) {
        Form r(std::move(a), 0);
        r.add_term({}, std::move(f));
        return r;
    }

    // Coframe basis form t^alpha.
    static Form coframe(AlgebroidPtr a, std::size_t alpha) {
        Form r(a, 1);
        r.add_term({alpha}, ScalarExpr::constant(a->base_ptr(), Rational(1)));
        return r;
    }

    const AlgebroidPtr& algebroid() const { return algebroid_; }
    std::size_t degree() const { return degree_; }
    const std::map<FormKey, ScalarExpr>& terms() const { return terms_; }
    bool is_zero() const { return terms_.empty(); }

    ScalarExpr coefficient(const FormKey& key) const {
        auto it = terms_.find(key);
        return it == terms_.end() ? algebroid_->zero_scalar() : it->second;
    }

    // Insert a (possibly unsorted) index tuple; sorts, applies the
    // permutation sign, drops tuples with repeats.
    void add_term(FormKey key, ScalarExpr coeff) {
        if (key.size() != degree_) throw std::invalid_argument("form key length mismatch");
        if (coeff.is_zero()) return;
        int sign = sort_key(key);
        if (sign == 0) return;
        for (std::size_t i : key)
            if (i >= algebroid_->rank()) throw std::invalid_argument("form index out of range");
        if (sign < 0) coeff = -coeff;
        auto it = terms_.find(key);
        if (it == terms_.end()) {
            terms_.emplace(std::move(key), std::move(coeff));
        } else {
            it->second += coeff;
            if (it->second.is_zero()) terms_.erase(it);
        }
    }

    Form operator-() const {
        Form r(algebroid_, degree_);
        for (const auto& [k, c] : terms_) r.terms_.emplace(k, -c);
        return r;
    }

    friend Form operator+(const Form& a, const Form& b) {
        a.check_compat(b);
        Form r = a;
        for (const auto& [k, c] : b.terms_) r.add_term(k, c);
        return r;
    }

    friend Form operator-(const Form& a, const Form& b) { return a + (-b); }

    Form& operator+=(const Form& o) { return *this = *this + o; }
    Form& operator-=(const Form& o) { return *this = *this - o; }

    friend Form operator*(const ScalarExpr& f, const Form& w) {
        Form r(w.algebroid_, w.degree_);
        for (const auto& [k, c] : w.terms_) r.add_term(k, f * c);
        return r;
    }

    friend bool operator==(const Form& a, const Form& b) {
        return *a.algebroid_->base_ptr() == *b.algebroid_->base_ptr() &&
               a.degree_ == b.degree_ && a.terms_ == b.terms_;
    }
    friend bool operator!=(const Form& a, const Form& b) { return !(a == b); }

    // Multilinear evaluation on q sections: sum over increasing tuples K of
    // omega_K det(u_j^{k_i}).
    ScalarExpr evaluate(const std::vector<Section>& args) const {
        if (args.size() != degree_)
            throw std::invalid_argument("form evaluated on wrong number of sections");
        ScalarExpr acc = algebroid_->zero_scalar();
        for (const auto& [key, coeff] : terms_) {
            ScalarExpr det = minor_det(key, args);
            if (!det.is_zero()) acc += coeff * det;
        }
        return acc;
    }

    std::string str() const {
        if (terms_.empty()) return "0";
        std::ostringstream out;
        bool first = true;
        for (const auto& [k, c] : terms_) {
            if (!first) out << " + ";
            first = false;
            if (c.is_one() && !k.empty()) {
                for (std::size_t i = 0; i < k.size(); ++i)
                    out << (i ? "*t" : "t") << k[i] + 1;
                continue;
            }
            std::string cs = c.str();
            bool simple = c.den().is_constant() && c.num().terms().size() <= 1;
            out << (simple ? cs : "(" + cs + ")");
            for (std::size_t i : k) out << "*t" << i + 1;
        }
        return out.str();
    }

private:
    void check_compat(const Form& o) const {
        if (algebroid_ != o.algebroid_ && !(*algebroid_->base_ptr() == *o.algebroid_->base_ptr() &&
                                            algebroid_->rank() == o.algebroid_->rank()))
            throw std::logic_error("forms on different algebroids");
        if (degree_ != o.degree_) throw std::logic_error("form degree mismatch");
    }

    // Sort in place, return permutation sign (0 on repeats).
    static int sort_key(FormKey& key) {
        int sign = 1;
        for (std::size_t i = 1; i < key.size(); ++i)
            for (std::size_t j = i; j > 0 && key[j - 1] >= key[j]; --j) {
                if (key[j - 1] == key[j]) return 0;
                std::swap(key[j - 1], key[j]);
                sign = -sign;
            }
        return sign;
    }

    // det of the q x q matrix with entries args[j].coeffs[key[i]], by Laplace
    // expansion along the first row (q is small in practice).
    ScalarExpr minor_det(const FormKey& key, const std::vector<Section>& args) const {
        std::size_t q = key.size();
        if (q == 0) return ScalarExpr::constant(algebroid_->base_ptr(), Rational(1));
        std::vector<std::vector<const ScalarExpr*>> m(q, std::vector<const ScalarExpr*>(q));
        for (std::size_t i = 0; i < q; ++i)
            for (std::size_t j = 0; j < q; ++j) m[i][j] = &args[j].coeffs[key[i]];
        std::vector<std::size_t> cols(q);
        for (std::size_t j = 0; j < q; ++j) cols[j] = j;
        return det_rec(m, 0, cols);
    }

    ScalarExpr det_rec(const std::vector<std::vector<const ScalarExpr*>>& m, std::size_t row,
                       std::vector<std::size_t>& cols) const {
        if (cols.size() == 1) return *m[row][cols[0]];
        ScalarExpr acc = algebroid_->zero_scalar();
        for (std::size_t j = 0; j < cols.size(); ++j) {
            const ScalarExpr& head = *m[row][cols[j]];
            if (head.is_zero()) continue;
            std::size_t cj = cols[j];
            cols.erase(cols.begin() + static_cast<std::ptrdiff_t>(j));
            ScalarExpr sub = det_rec(m, row + 1, cols);
            cols.insert(cols.begin() + static_cast<std::ptrdiff_t>(j), cj);
            if (sub.is_zero()) continue;
            if (j % 2 == 0) acc += head * sub;
            else acc -= head * sub;
        }
        return acc;
    }

    AlgebroidPtr algebroid_;
    std::size_t degree_;
    std::map<FormKey, ScalarExpr> terms_;
};

inline Form wedge(const Form& a, const Form& b) {
    if (a.algebroid() != b.algebroid() && a.algebroid()->rank() != b.algebroid()->rank())
        throw std::logic_error("wedge of forms on different algebroids");
    Form r(a.algebroid(), a.degree() + b.degree());
    for (const auto& [ka, ca] : a.terms())
        for (const auto& [kb, cb] : b.terms()) {
            FormKey k = ka;
            k.insert(k.end(), kb.begin(), kb.end());
            r.add_term(std::move(k), ca * cb);
        }
    return r;
}

// Interior product i_u: contract in the first slot.
inline Form interior(const Section& u, const Form& w) {
    if (w.degree() == 0) throw std::invalid_argument("interior product of a 0-form");
    Form r(w.algebroid(), w.degree() - 1);
    for (const auto& [key, coeff] : w.terms()) {
        for (std::size_t pos = 0; pos < key.size(); ++pos) {
            const ScalarExpr& uc = u.coeffs[key[pos]];
            if (uc.is_zero()) continue;
            FormKey rest;
            rest.reserve(key.size() - 1);
            for (std::size_t i = 0; i < key.size(); ++i)
                if (i != pos) rest.push_back(key[i]);
            ScalarExpr c = coeff * uc;
            if (pos % 2 == 1) c = -c;
            r.add_term(std::move(rest), std::move(c));
        }
    }
    return r;
}

// Exterior derivative via the coefficient formula: for beta_0 < ... < beta_q,
//   (dw)_{b0..bq} = sum_i (-1)^i rho(t_{bi}) w_{..hat i..}
//                 + sum_{i<j} (-1)^{i+j} sum_g L^g_{bi bj} w_{g, ..hat i hat j..}.
inline Form exterior_derivative(const Form& w) {
    const AlgebroidPtr& a = w.algebroid();
    Form r(a, w.degree() + 1);
    for (const auto& [key, coeff] : w.terms()) {
        // First sum: d coefficient wedge the key.
        for (std::size_t b = 0; b < a->rank(); ++b) {
            ScalarExpr rho_f = a->anchor_apply(a->frame_section(b), coeff);
            if (rho_f.is_zero()) continue;
            FormKey k;
            k.push_back(b);
            k.insert(k.end(), key.begin(), key.end());
            r.add_term(std::move(k), std::move(rho_f));
        }
        // Second sum: structure terms. For each slot position replace the
        // index g by a bracket pair (bi, bj).
        for (std::size_t pos = 0; pos < key.size(); ++pos) {
            std::size_t g = key[pos];
            FormKey rest;
            for (std::size_t i = 0; i < key.size(); ++i)
                if (i != pos) rest.push_back(key[i]);
            for (std::size_t bi = 0; bi < a->rank(); ++bi)
                for (std::size_t bj = bi + 1; bj < a->rank(); ++bj) {
                    const ScalarExpr& L = a->structure(g, bi, bj);
                    if (L.is_zero()) continue;
                    FormKey k;
                    k.push_back(bi);
                    k.push_back(bj);
                    k.insert(k.end(), rest.begin(), rest.end());
                    ScalarExpr c = -(L * coeff);
                    if (pos % 2 == 1) c = -c;
                    r.add_term(std::move(k), std::move(c));
                }
        }
    }
    return r;
}

// Exterior derivative via the intrinsic frame-tuple sum:
//   dw(u0..uq) = sum_i (-1)^i rho(ui) w(..hat i..)
//              + sum_{i<j} (-1)^{i+j} w([ui,uj], ..hat i hat j..),
// evaluated on strictly increasing frame tuples to read off coefficients.
// Kept separate from `exterior_derivative` as a mutual oracle.
inline Form exterior_derivative_intrinsic(const Form& w) {
    const AlgebroidPtr& a = w.algebroid();
    std::size_t p = a->rank(), q1 = w.degree() + 1;
    Form r(a, q1);
    FormKey key(q1);
    for (std::size_t i = 0; i < q1; ++i) key[i] = i;
    auto advance = [&]() {
        for (std::size_t i = q1; i-- > 0;) {
            if (key[i] + (q1 - i) <= p - 1 + 0 && key[i] + 1 <= p - (q1 - i)) {
                ++key[i];
                for (std::size_t j = i + 1; j < q1; ++j) key[j] = key[j - 1] + 1;
                return true;
            }
        }
        return false;
    };
    if (q1 > p) return r;
    bool more = true;
    while (more) {
        std::vector<Section> frames;
        frames.reserve(q1);
        for (std::size_t i : key) frames.push_back(a->frame_section(i));
        ScalarExpr acc = a->zero_scalar();
        for (std::size_t i = 0; i < q1; ++i) {
            std::vector<Section> rest;
            for (std::size_t j = 0; j < q1; ++j)
                if (j != i) rest.push_back(frames[j]);
            ScalarExpr t = a->anchor_apply(frames[i], w.evaluate(rest));
            if (i % 2 == 1) t = -t;
            acc += t;
        }
        for (std::size_t i = 0; i < q1; ++i)
            for (std::size_t j = i + 1; j < q1; ++j) {
                std::vector<Section> args;
                args.push_back(a->bracket(frames[i], frames[j]));
                for (std::size_t k = 0; k < q1; ++k)
                    if (k != i && k != j) args.push_back(frames[k]);
                ScalarExpr t = w.evaluate(args);
                if ((i + j) % 2 == 1) t = -t;
                acc += t;
            }
        r.add_term(key, acc);
        more = advance();
    }
    return r;
}

// Cartan formula: L_u = i_u d + d i_u (degree 0 uses rho(u) directly).
inline Form lie_derivative(const Section& u, const Form& w) {
    if (w.degree() == 0) {
        ScalarExpr f = w.coefficient({});
        return Form::function(w.algebroid(), w.algebroid()->anchor_apply(u, f));
    }
    return interior(u, exterior_derivative(w)) + exterior_derivative(interior(u, w));
}

inline bool is_closed(const Form& w) { return exterior_derivative(w).is_zero(); }

struct MaurerCartanEntry {
    std::string label;  // "C1", "C2" or "C2'"
    std::string item;   // "t2" or "x1"
    bool passed;
    std::string witness;
};

struct MaurerCartanReport {
    std::vector<MaurerCartanEntry> entries;

    bool all_passed() const {
        for (const auto& e : entries)
            if (!e.passed) return false;
        return true;
    }
};

// Structure equations of Maurer-Cartan type.
//   (C1)  d t^al + (1/2) L^al_{bg} t^b ^ t^g = 0, i.e. the coefficient of
//         dt^al on b<g equals -L^al_{bg};
//   (C2)  d x^i = anchor[i][al] t^al for every coordinate (labelled C2' on a
//         pull-back presentation, where the anchor carries the rho-o-h data).
inline MaurerCartanReport maurer_cartan_check(const AlgebroidPtr& a) {
    MaurerCartanReport rep;
    for (std::size_t al = 0; al < a->rank(); ++al) {
        Form dt = exterior_derivative(Form::coframe(a, al));
        Form expect(a, 2);
        for (std::size_t b = 0; b < a->rank(); ++b)
            for (std::size_t g = b + 1; g < a->rank(); ++g)
                expect.add_term({b, g}, -a->structure(al, b, g));
        Form res = dt - expect;
        std::string item = "t" + std::to_string(al + 1);
        if (res.is_zero()) {
            rep.entries.push_back({"C1", item, true, ""});
        } else {
            const auto& [k, c] = *res.terms().begin();
            std::string w = "d" + item + " residual on (t" + std::to_string(k[0] + 1) + ",t" +
                            std::to_string(k[1] + 1) + ") = " + c.str();
            rep.entries.push_back({"C1", item, false, w});
        }
    }
    std::string c2 = a->presentation() == Presentation::BaseN ? "C2" : "C2'";
    for (std::size_t i = 0; i < a->dim(); ++i) {
        Form dx = exterior_derivative(
            Form::function(a, ScalarExpr::coordinate(a->base_ptr(), a->base().name(i))));
        Form expect(a, 1);
        for (std::size_t al = 0; al < a->rank(); ++al)
            expect.add_term({al}, a->anchor().at(i, al));
        Form res = dx - expect;
        std::string item = a->base().name(i);
        if (res.is_zero()) {
            rep.entries.push_back({c2, item, true, ""});
        } else {
            const auto& [k, c] = *res.terms().begin();
            rep.entries.push_back({c2, item, false,
                                   "d" + item + " residual on t" + std::to_string(k[0] + 1) +
                                       " = " + c.str()});
        }
    }
    return rep;
}

// Pull-back of a form along a morphism:
//   (phi^* w)_{K'} = sum_{K} (w_K o phi_0) det(phi[K, K']).
inline Form pullback_form(const Morphism& m, const Form& w) {
    if (w.algebroid() != m.target && w.algebroid()->rank() != m.target->rank())
        throw std::logic_error("pullback: form not on the morphism target");
    std::size_t q = w.degree();
    Form r(m.source, q);
    auto bindings = m.base_map.bindings();
    if (q == 0) {
        ScalarExpr f = w.coefficient({});
        return Form::function(m.source, f.substitute(bindings));
    }
    std::size_t p = m.source->rank();
    if (q > p) return r;
    FormKey kp(q);
    for (std::size_t i = 0; i < q; ++i) kp[i] = i;
    for (;;) {
        ScalarExpr acc = m.source->zero_scalar();
        for (const auto& [key, coeff] : w.terms()) {
            // det of the submatrix of m.matrix with rows `key`, cols `kp`.
            FieldMatrix sub(q, q, m.source->zero_scalar());
            for (std::size_t i = 0; i < q; ++i)
                for (std::size_t j = 0; j < q; ++j) sub.at(i, j) = m.matrix.at(key[i], kp[j]);
            ScalarExpr det = determinant(sub);
            if (det.is_zero()) continue;
            acc += coeff.substitute(bindings) * det;
        }
        r.add_term(kp, acc);
        // next increasing tuple
        std::size_t i = q;
        while (i-- > 0) {
            if (kp[i] + 1 <= p - (q - i)) {
                ++kp[i];
                for (std::size_t j = i + 1; j < q; ++j) kp[j] = kp[j - 1] + 1;
                break;
            }
            if (i == 0) return r;
        }
    }
}

}  // namespace gla
