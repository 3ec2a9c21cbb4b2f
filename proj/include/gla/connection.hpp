#pragma once

// Linear connections on a generalized Lie algebroid with coefficient table
// gamma[a][b][al]: the covariant derivative of the frame section s_b in the
// direction t_al has component gamma[a][b][al] on s_a. Provides connection
// 1-forms, torsion and curvature (components and scalar 2-forms), and the
// Cartan and Bianchi identity checks.

#include <string>
#include <vector>

#include "gla/forms.hpp"

namespace gla {

struct Connection {
    AlgebroidPtr algebroid;
    std::size_t bundle_rank;  // n; torsion needs n = rank()
    // gamma[a][b][al]: a, b in 0..n-1, al in 0..rank()-1.
    std::vector<std::vector<std::vector<ScalarExpr>>> gamma;

    const ScalarExpr& coeff(std::size_t a, std::size_t b, std::size_t al) const {
        return gamma.at(a).at(b).at(al);
    }

    // bundle_rank 0 means "same as the algebroid rank".
    static Connection zero(AlgebroidPtr a, std::size_t n = 0) {
        std::size_t p = a->rank();
        if (n == 0) n = p;
        ScalarExpr z = a->zero_scalar();
        return Connection{std::move(a), n,
                          std::vector(n, std::vector(n, std::vector<ScalarExpr>(p, z)))};
    }

    void check() const {
        std::size_t p = algebroid->rank();
        if (gamma.size() != bundle_rank) throw std::invalid_argument("connection table shape");
        for (const auto& plane : gamma) {
            if (plane.size() != bundle_rank)
                throw std::invalid_argument("connection table shape");
            for (const auto& row : plane)
                if (row.size() != p) throw std::invalid_argument("connection table shape");
        }
    }
};

// Connection 1-forms Omega^a_b = gamma[a][b][al] t^al.
inline std::vector<std::vector<Form>> connection_forms(const Connection& c) {
    c.check();
    const AlgebroidPtr& a = c.algebroid;
    std::size_t p = a->rank(), n = c.bundle_rank;
    std::vector<std::vector<Form>> om(n, std::vector<Form>(n, Form(a, 1)));
    for (std::size_t i = 0; i < n; ++i)
        for (std::size_t b = 0; b < n; ++b)
            for (std::size_t al = 0; al < p; ++al)
                om[i][b].add_term({al}, c.coeff(i, b, al));
    return om;
}

struct TorsionData {
    // components[c][a][b] antisymmetric in (a, b)
    std::vector<std::vector<std::vector<ScalarExpr>>> components;
    std::vector<Form> forms;  // scalar 2-form per upper index
    bool is_zero;
};

// Torsion components T^c_ab = gamma[c][b][a] - gamma[c][a][b] - L^c_ab; the
// scalar 2-form carries T^c_ab on the increasing key (a, b).
inline TorsionData torsion(const Connection& c) {
    c.check();
    const AlgebroidPtr& A = c.algebroid;
    std::size_t p = A->rank();
    if (c.bundle_rank != p)
        throw std::invalid_argument("torsion needs bundle rank equal to the algebroid rank");
    ScalarExpr z = A->zero_scalar();
    TorsionData t{std::vector(p, std::vector(p, std::vector<ScalarExpr>(p, z))), {}, true};
    for (std::size_t cc = 0; cc < p; ++cc) {
        Form f(A, 2);
        for (std::size_t a = 0; a < p; ++a)
            for (std::size_t b = a + 1; b < p; ++b) {
                ScalarExpr v = c.coeff(cc, b, a) - c.coeff(cc, a, b) - A->structure(cc, a, b);
                t.components[cc][a][b] = v;
                t.components[cc][b][a] = -v;
                if (!v.is_zero()) {
                    t.is_zero = false;
                    f.add_term({a, b}, v);
                }
            }
        t.forms.push_back(std::move(f));
    }
    return t;
}

struct CurvatureData {
    // components[a][b][al][be], antisymmetric in (al, be)
    std::vector<std::vector<std::vector<std::vector<ScalarExpr>>>> components;
    std::vector<std::vector<Form>> forms;  // scalar 2-form per (a, b)
};

// Curvature components
//   R^a_{b al be} = rho(t_be)(gamma[a][b][al]) - rho(t_al)(gamma[a][b][be])
//                 + gamma[a][e][be] gamma[e][b][al] - gamma[a][e][al] gamma[e][b][be]
//                 + gamma[a][b][g] L^g_{al be}.
// The scalar 2-form carries R^a_{b be al} on the increasing key (al, be),
// which is the coefficient arrangement satisfying the second Cartan
// identity.
inline CurvatureData curvature(const Connection& c) {
    c.check();
    const AlgebroidPtr& A = c.algebroid;
    std::size_t p = A->rank(), n = c.bundle_rank;
    ScalarExpr z = A->zero_scalar();
    CurvatureData r{
        std::vector(n, std::vector(n, std::vector(p, std::vector<ScalarExpr>(p, z)))),
        std::vector(n, std::vector<Form>(n, Form(A, 2)))};
    for (std::size_t a = 0; a < n; ++a)
        for (std::size_t b = 0; b < n; ++b)
            for (std::size_t al = 0; al < p; ++al)
                for (std::size_t be = al + 1; be < p; ++be) {
                    ScalarExpr v = A->anchor_apply(A->frame_section(be), c.coeff(a, b, al)) -
                                   A->anchor_apply(A->frame_section(al), c.coeff(a, b, be));
                    for (std::size_t e = 0; e < n; ++e) {
                        if (!c.coeff(a, e, be).is_zero() && !c.coeff(e, b, al).is_zero())
                            v += c.coeff(a, e, be) * c.coeff(e, b, al);
                        if (!c.coeff(a, e, al).is_zero() && !c.coeff(e, b, be).is_zero())
                            v -= c.coeff(a, e, al) * c.coeff(e, b, be);
                    }
                    for (std::size_t g = 0; g < p; ++g)
                        if (!A->structure(g, al, be).is_zero())
                            v += c.coeff(a, b, g) * A->structure(g, al, be);
                    r.components[a][b][al][be] = v;
                    r.components[a][b][be][al] = -v;
                    if (!v.is_zero()) r.forms[a][b].add_term({al, be}, -v);
                }
    return r;
}

struct IdentityEntry {
    std::string name;
    bool passed;
    std::string witness;
};

struct IdentityReport {
    std::vector<IdentityEntry> entries;
    bool all_passed() const {
        for (const auto& e : entries)
            if (!e.passed) return false;
        return true;
    }
};

namespace detail {

inline std::string first_residual(const Form& f) {
    const auto& [k, v] = *f.terms().begin();
    std::string s = "residual on (";
    for (std::size_t i = 0; i < k.size(); ++i)
        s += (i ? ",t" : "t") + std::to_string(k[i] + 1);
    return s + ") = " + v.str();
}

}  // namespace detail

// Cartan identities:
//   (C1) T^a = d t^a + Omega^a_b ^ t^b
//   (C2) R^a_b = d Omega^a_b + Omega^a_c ^ Omega^c_b.
inline IdentityReport cartan_identities_check(const Connection& c) {
    const AlgebroidPtr& A = c.algebroid;
    std::size_t p = A->rank(), n = c.bundle_rank;
    auto om = connection_forms(c);
    CurvatureData R = curvature(c);
    IdentityReport rep;
    if (n == p) {
        TorsionData T = torsion(c);
        for (std::size_t a = 0; a < p; ++a) {
            Form rhs = exterior_derivative(Form::coframe(A, a));
            for (std::size_t b = 0; b < p; ++b) rhs += wedge(om[a][b], Form::coframe(A, b));
            Form res = T.forms[a] - rhs;
            rep.entries.push_back({"C1[" + std::to_string(a + 1) + "]", res.is_zero(),
                                   res.is_zero() ? "" : detail::first_residual(res)});
        }
    }
    for (std::size_t a = 0; a < n; ++a)
        for (std::size_t b = 0; b < n; ++b) {
            Form rhs = exterior_derivative(om[a][b]);
            for (std::size_t e = 0; e < n; ++e) rhs += wedge(om[a][e], om[e][b]);
            Form res = R.forms[a][b] - rhs;
            rep.entries.push_back(
                {"C2[" + std::to_string(a + 1) + "," + std::to_string(b + 1) + "]",
                 res.is_zero(), res.is_zero() ? "" : detail::first_residual(res)});
        }
    return rep;
}

// Bianchi identities:
//   (B1) d T^a = R^a_b ^ t^b - Omega^a_c ^ T^c
//   (B2) d R^a_b = R^a_c ^ Omega^c_b - Omega^a_c ^ R^c_b.
// With null torsion (B1) reduces to R^a_b ^ t^b = 0, reported separately.
inline IdentityReport bianchi_identities_check(const Connection& c) {
    const AlgebroidPtr& A = c.algebroid;
    std::size_t p = A->rank(), n = c.bundle_rank;
    auto om = connection_forms(c);
    CurvatureData R = curvature(c);
    IdentityReport rep;
    if (n == p) {
        TorsionData T = torsion(c);
        for (std::size_t a = 0; a < p; ++a) {
            Form rhs(A, 3);
            for (std::size_t b = 0; b < p; ++b) {
                rhs += wedge(R.forms[a][b], Form::coframe(A, b));
                rhs -= wedge(om[a][b], T.forms[b]);
            }
            Form res = exterior_derivative(T.forms[a]) - rhs;
            rep.entries.push_back({"B1[" + std::to_string(a + 1) + "]", res.is_zero(),
                                   res.is_zero() ? "" : detail::first_residual(res)});
        }
        if (T.is_zero) {
            for (std::size_t a = 0; a < p; ++a) {
                Form acc(A, 3);
                for (std::size_t b = 0; b < p; ++b)
                    acc += wedge(R.forms[a][b], Form::coframe(A, b));
                rep.entries.push_back({"B1~[" + std::to_string(a + 1) + "]", acc.is_zero(),
                                       acc.is_zero() ? "" : detail::first_residual(acc)});
            }
        }
    }
    for (std::size_t a = 0; a < n; ++a)
        for (std::size_t b = 0; b < n; ++b) {
            Form rhs(A, 3);
            for (std::size_t e = 0; e < n; ++e) {
                rhs += wedge(R.forms[a][e], om[e][b]);
                rhs -= wedge(om[a][e], R.forms[e][b]);
            }
            Form res = exterior_derivative(R.forms[a][b]) - rhs;
            rep.entries.push_back(
                {"B2[" + std::to_string(a + 1) + "," + std::to_string(b + 1) + "]",
                 res.is_zero(), res.is_zero() ? "" : detail::first_residual(res)});
        }
    return rep;
}

}  // namespace gla
