#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <random>

#include "gla/fixtures.hpp"
#include "gla/parse.hpp"

using namespace gla;

TEST_CASE("connection_forms examples") {
    auto so3 = builtin("SO3").algebroid;
    auto zero = Connection::zero(so3);
    for (const auto& row : connection_forms(zero))
        for (const Form& f : row) CHECK(f.is_zero());

    auto t1 = builtin("TB1").algebroid;
    Connection c1 = Connection::zero(t1);
    c1.gamma[0][0][0] = ScalarExpr::constant(t1->base_ptr(), Rational(1));
    CHECK(connection_forms(c1)[0][0] == Form::coframe(t1, 0));

    auto t2 = builtin("TB2").algebroid;
    Connection c2 = Connection::zero(t2);
    c2.gamma[0][0][1] = parse_expr("x1", t2->base_ptr());
    CHECK(connection_forms(c2)[0][0].coefficient({1}) == parse_expr("x1", t2->base_ptr()));
    CHECK(connection_forms(c2)[0][0].coefficient({0}).is_zero());
}

TEST_CASE("torsion examples") {
    // zero connection: T^c_ab = -L^c_ab
    Fixture so3 = builtin("SO3");
    TorsionData t = torsion(so3.connections.at("zero"));
    auto cs = so3.algebroid->base_ptr();
    CHECK(t.components[2][0][1] == parse_expr("-1", cs));
    CHECK(!t.is_zero);
    CHECK(t.forms[2].coefficient({0, 1}) == parse_expr("-1", cs));
    for (std::size_t c = 0; c < 3; ++c)
        for (std::size_t a = 0; a < 3; ++a)
            for (std::size_t b = 0; b < 3; ++b)
                CHECK(t.components[c][a][b] == -so3.algebroid->structure(c, a, b));

    // symmetric gamma on an abelian algebroid: null torsion
    auto t2 = builtin("TB2").algebroid;
    Connection sym = Connection::zero(t2);
    sym.gamma[0][0][1] = parse_expr("x1*x2", t2->base_ptr());
    sym.gamma[0][1][0] = parse_expr("x1*x2", t2->base_ptr());
    TorsionData ts = torsion(sym);
    CHECK(ts.is_zero);
    for (const Form& f : ts.forms) CHECK(f.is_zero());

    // the torsion-free so(3) connection really is torsion-free
    TorsionData tf = torsion(so3.connections.at("torsionfree"));
    CHECK(tf.is_zero);
}

TEST_CASE("curvature examples") {
    Fixture so3 = builtin("SO3");
    CurvatureData rz = curvature(so3.connections.at("zero"));
    for (const auto& row : rz.forms)
        for (const Form& f : row) CHECK(f.is_zero());

    // constant gamma on an abelian constant-anchor algebroid: commutator only
    auto t2 = builtin("TB2").algebroid;
    auto cs = t2->base_ptr();
    Connection c = Connection::zero(t2);
    c.gamma[0][1][0] = parse_expr("2", cs);
    c.gamma[1][0][1] = parse_expr("3", cs);
    CurvatureData r = curvature(c);
    for (std::size_t a = 0; a < 2; ++a)
        for (std::size_t b = 0; b < 2; ++b)
            for (std::size_t al = 0; al < 2; ++al)
                for (std::size_t be = 0; be < 2; ++be) {
                    ScalarExpr expect = t2->zero_scalar();
                    for (std::size_t e = 0; e < 2; ++e)
                        expect += c.coeff(a, e, be) * c.coeff(e, b, al) -
                                  c.coeff(a, e, al) * c.coeff(e, b, be);
                    CHECK((r.components[a][b][al][be] - expect).is_zero());
                }

    // p = 1: antisymmetry kills everything
    auto t1 = builtin("TB1").algebroid;
    Connection c1 = Connection::zero(t1);
    c1.gamma[0][0][0] = parse_expr("x1^2", t1->base_ptr());
    CurvatureData r1 = curvature(c1);
    CHECK(r1.forms[0][0].is_zero());
}

TEST_CASE("component antisymmetries on random connections") {
    std::mt19937_64 rng(401);
    for (const char* name : {"TB2", "SO3"}) {
        auto a = builtin(name).algebroid;
        Connection c = random_connection(rng, a, 1);
        TorsionData t = torsion(c);
        CurvatureData r = curvature(c);
        std::size_t p = a->rank();
        for (std::size_t x = 0; x < p; ++x)
            for (std::size_t y = 0; y < p; ++y)
                for (std::size_t z = 0; z < p; ++z) {
                    CHECK((t.components[x][y][z] + t.components[x][z][y]).is_zero());
                    for (std::size_t w = 0; w < p; ++w)
                        CHECK((r.components[x][y][z][w] + r.components[x][y][w][z]).is_zero());
                }
    }
}

TEST_CASE("cartan identities") {
    Fixture so3 = builtin("SO3");
    CHECK(cartan_identities_check(so3.connections.at("zero")).all_passed());
    CHECK(cartan_identities_check(so3.connections.at("torsionfree")).all_passed());

    std::mt19937_64 rng(409);
    for (const char* name : {"TB1", "TB2", "SO3", "SO3H"}) {
        auto a = builtin(name).algebroid;
        Connection c = random_connection(rng, a, 1);
        IdentityReport rep = cartan_identities_check(c);
        CHECK(rep.all_passed());
        // C1 per frame index, C2 per bundle pair
        CHECK(rep.entries.size() == a->rank() + a->rank() * a->rank());
    }
}

TEST_CASE("bianchi identities") {
    Fixture so3 = builtin("SO3");
    IdentityReport tf = bianchi_identities_check(so3.connections.at("torsionfree"));
    CHECK(tf.all_passed());
    bool saw_null_torsion_form = false;
    for (const auto& e : tf.entries)
        if (e.name.rfind("B1~", 0) == 0) saw_null_torsion_form = true;
    CHECK(saw_null_torsion_form);

    std::mt19937_64 rng(419);
    for (const char* name : {"TB1", "TB2", "SO3", "SO3H"}) {
        auto a = builtin(name).algebroid;
        Connection c = random_connection(rng, a, 1);
        CHECK(bianchi_identities_check(c).all_passed());
    }
}

TEST_CASE("classical specialization: tangent fixtures reproduce the double-primed identities") {
    // anchor = identity, L = 0, h = id: the engine's C1 reads T^i = omega^i_j ^ dx^j
    std::mt19937_64 rng(421);
    auto t2 = builtin("TB2").algebroid;
    Connection c = random_connection(rng, t2, 1);
    auto om = connection_forms(c);
    TorsionData t = torsion(c);
    for (std::size_t i = 0; i < 2; ++i) {
        Form rhs = exterior_derivative(Form::coframe(t2, i));
        CHECK(rhs.is_zero());  // dx^i in the coordinate coframe
        for (std::size_t j = 0; j < 2; ++j) rhs += wedge(om[i][j], Form::coframe(t2, j));
        CHECK(t.forms[i] == rhs);
    }
    CHECK(cartan_identities_check(c).all_passed());
    CHECK(bianchi_identities_check(c).all_passed());
}

TEST_CASE("general bundle rank: curvature-only path") {
    auto t2 = builtin("TB2").algebroid;
    auto cs = t2->base_ptr();
    Connection c = Connection::zero(t2, 3);
    CHECK(c.bundle_rank == 3);
    c.gamma[0][1][0] = parse_expr("x1", cs);
    c.gamma[2][0][1] = parse_expr("x2", cs);

    CHECK_THROWS_AS(torsion(c), std::invalid_argument);

    CurvatureData r = curvature(c);
    CHECK(r.forms.size() == 3);

    IdentityReport cr = cartan_identities_check(c);
    CHECK(cr.all_passed());
    for (const auto& e : cr.entries) CHECK(e.name.rfind("C2", 0) == 0);

    IdentityReport br = bianchi_identities_check(c);
    CHECK(br.all_passed());
    for (const auto& e : br.entries) CHECK(e.name.rfind("B2", 0) == 0);
}
