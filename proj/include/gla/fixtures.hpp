#pragma once

// Builtin example algebroids (tangent bundles, so(3), Heisenberg
// distribution, deformed so(3)) and a seeded random-instance generator.
// Random algebroids come from tangent_gla on random unitriangular frames so
// they are valid by construction.

#include <map>
#include <random>
#include <string>

#include "gla/connection.hpp"
#include "gla/ids.hpp"

namespace gla {

struct Fixture {
    std::string name;
    AlgebroidPtr algebroid;
    std::map<std::string, IDS> ids;
    std::map<std::string, Connection> connections;
};

namespace detail {

inline AlgebroidPtr tangent_rn(std::size_t m) {
    std::vector<std::string> names;
    for (std::size_t i = 1; i <= m; ++i) names.push_back("x" + std::to_string(i));
    auto cs = std::make_shared<CoordinateSet>(std::move(names));
    return tangent_gla(FieldMatrix::identity(m, cs), FieldMatrix::identity(m, cs), cs,
                       Presentation::BaseN);
}

inline AlgebroidPtr so3_over(std::shared_ptr<const CoordinateSet> cs) {
    ScalarExpr one = ScalarExpr::constant(cs, Rational(1));
    std::vector<Algebroid::StructureEntry> entries = {
        {2, 0, 1, one},   // [t1,t2] = t3
        {0, 1, 2, one},   // [t2,t3] = t1
        {1, 0, 2, -one},  // [t3,t1] = t2
    };
    return Algebroid::make(cs, 3, FieldMatrix::zero(cs->size(), 3, cs), entries);
}

}  // namespace detail

inline Fixture builtin(const std::string& name) {
    if (name == "TB1" || name == "TB2" || name == "TB3") {
        std::size_t m = static_cast<std::size_t>(name[2] - '0');
        Fixture f{name, detail::tangent_rn(m), {}, {}};
        if (m == 3) {
            // flat involutive plane {d/dx1, d/dx2}
            auto a = f.algebroid;
            f.ids.emplace("flat", IDS{a, {a->frame_section(0), a->frame_section(1)}});
        }
        return f;
    }
    if (name == "SO3") {
        auto cs = std::make_shared<CoordinateSet>(std::vector<std::string>{});
        Fixture f{name, detail::so3_over(cs), {}, {}};
        auto a = f.algebroid;
        f.ids.emplace("span12", IDS{a, {a->frame_section(0), a->frame_section(1)}});
        f.connections.emplace("zero", Connection::zero(a));
        // torsion-free connection gamma^c_{b al} = 1/2 L^c_{al b}
        Connection tf = Connection::zero(a);
        ScalarExpr half = ScalarExpr::constant(cs, Rational(1, 2));
        for (std::size_t c = 0; c < 3; ++c)
            for (std::size_t b = 0; b < 3; ++b)
                for (std::size_t al = 0; al < 3; ++al)
                    tf.gamma[c][b][al] = half * a->structure(c, al, b);
        f.connections.emplace("torsionfree", std::move(tf));
        return f;
    }
    if (name == "HEIS") {
        Fixture f{name, detail::tangent_rn(3), {}, {}};
        auto a = f.algebroid;
        ScalarExpr one = ScalarExpr::constant(a->base_ptr(), Rational(1));
        ScalarExpr x1 = ScalarExpr::coordinate(a->base_ptr(), "x1");
        Section u1 = a->section({one, a->zero_scalar(), a->zero_scalar()});
        Section u2 = a->section({a->zero_scalar(), one, x1});
        f.ids.emplace("main", IDS{a, {u1, u2}});
        return f;
    }
    if (name == "SO3H") {
        auto cs = std::make_shared<CoordinateSet>(std::vector<std::string>{"k1"});
        AlgebroidPtr lie = detail::so3_over(cs);
        ScalarExpr k1 = ScalarExpr::coordinate(cs, "k1");
        SmoothMap h(cs, cs, {k1.pow(3)});
        return Fixture{name, gla_from_lie_algebroid(lie, h), {}, {}};
    }
    throw std::invalid_argument("unknown builtin fixture: " + name);
}

struct RandomBounds {
    std::size_t max_rank = 4;   // p
    std::size_t max_dim = 3;    // m
    unsigned max_degree = 2;
};

namespace detail {

// Deterministic small integers from the raw engine stream; avoids the
// library-defined distributions on purpose.
inline long rand_int(std::mt19937_64& rng, long lo, long hi) {
    return lo + static_cast<long>(rng() % static_cast<unsigned long>(hi - lo + 1));
}

inline Polynomial rand_poly(std::mt19937_64& rng, std::size_t nvars, unsigned max_degree) {
    Polynomial p(nvars);
    long nterms = rand_int(rng, 1, 3);
    for (long t = 0; t < nterms; ++t) {
        Monomial m(nvars, 0);
        unsigned budget = static_cast<unsigned>(rand_int(rng, 0, max_degree));
        for (unsigned d = 0; d < budget && nvars > 0; ++d)
            ++m[static_cast<std::size_t>(rand_int(rng, 0, static_cast<long>(nvars) - 1))];
        p.add_term(m, Rational(rand_int(rng, -3, 3)));
    }
    return p;
}

}  // namespace detail

// Deterministic pseudo-random valid algebroid: tangent_gla of a random
// unitriangular frame over a random base, padded with abelian zero-anchored
// directions when the requested rank exceeds the base dimension.
inline Fixture random_instance(std::uint64_t seed, const RandomBounds& bounds = {}) {
    if (bounds.max_rank > 4 || bounds.max_dim > 3 || bounds.max_degree > 2)
        throw std::invalid_argument("random_instance bounds exceeded");
    std::mt19937_64 rng(seed);
    std::size_t m = static_cast<std::size_t>(detail::rand_int(
        rng, 1, static_cast<long>(bounds.max_dim)));
    std::size_t p = static_cast<std::size_t>(detail::rand_int(
        rng, static_cast<long>(m), static_cast<long>(std::max(m, bounds.max_rank))));
    std::vector<std::string> names;
    for (std::size_t i = 1; i <= m; ++i) names.push_back("x" + std::to_string(i));
    auto cs = std::make_shared<CoordinateSet>(std::move(names));
    // Unitriangular frame: ones on the diagonal, random polynomials above.
    FieldMatrix theta = FieldMatrix::identity(m, cs);
    for (std::size_t i = 0; i < m; ++i)
        for (std::size_t j = i + 1; j < m; ++j)
            theta.at(i, j) = ScalarExpr(cs, detail::rand_poly(rng, m, bounds.max_degree));
    AlgebroidPtr core = tangent_gla(theta, invert(theta), cs);
    AlgebroidPtr a;
    if (p == m) {
        a = core;
    } else {
        FieldMatrix anchor = FieldMatrix::zero(m, p, cs);
        for (std::size_t i = 0; i < m; ++i)
            for (std::size_t j = 0; j < m; ++j) anchor.at(i, j) = core->anchor().at(i, j);
        ScalarExpr zero = ScalarExpr::constant(cs, Rational(0));
        std::vector table(p, std::vector(p, std::vector<ScalarExpr>(p, zero)));
        for (std::size_t g = 0; g < m; ++g)
            for (std::size_t al = 0; al < m; ++al)
                for (std::size_t be = 0; be < m; ++be)
                    table[g][al][be] = core->structure(g, al, be);
        a = std::make_shared<Algebroid>(cs, p, std::move(anchor), std::move(table));
    }
    return Fixture{"RAND" + std::to_string(seed), a, {}, {}};
}

// Random section with polynomial coefficients; shares the generator stream
// discipline of random_instance.
inline Section random_section(std::mt19937_64& rng, const AlgebroidPtr& a, unsigned max_degree) {
    std::vector<ScalarExpr> coeffs;
    for (std::size_t i = 0; i < a->rank(); ++i)
        coeffs.push_back(ScalarExpr(a->base_ptr(), detail::rand_poly(rng, a->dim(), max_degree)));
    return a->section(std::move(coeffs));
}

inline Form random_form(std::mt19937_64& rng, const AlgebroidPtr& a, std::size_t degree,
                        unsigned max_degree) {
    Form w(a, degree);
    std::size_t p = a->rank();
    if (degree > p) return w;
    FormKey key(degree);
    for (std::size_t i = 0; i < degree; ++i) key[i] = i;
    for (;;) {
        w.add_term(key, ScalarExpr(a->base_ptr(), detail::rand_poly(rng, a->dim(), max_degree)));
        std::size_t i = degree;
        bool advanced = false;
        while (i-- > 0) {
            if (key[i] + 1 <= p - (degree - i)) {
                ++key[i];
                for (std::size_t j = i + 1; j < degree; ++j) key[j] = key[j - 1] + 1;
                advanced = true;
                break;
            }
        }
        if (!advanced || degree == 0) break;
    }
    return w;
}

inline ScalarExpr random_scalar(std::mt19937_64& rng, const AlgebroidPtr& a, unsigned max_degree) {
    return ScalarExpr(a->base_ptr(), detail::rand_poly(rng, a->dim(), max_degree));
}

inline Connection random_connection(std::mt19937_64& rng, const AlgebroidPtr& a,
                                    unsigned max_degree) {
    Connection c = Connection::zero(a);
    for (auto& plane : c.gamma)
        for (auto& row : plane)
            for (ScalarExpr& v : row)
                v = ScalarExpr(a->base_ptr(), detail::rand_poly(rng, a->dim(), max_degree));
    return c;
}

}  // namespace gla
