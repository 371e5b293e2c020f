#include <doctest.h>

#include "canlink/binforms.hpp"
#include "canlink/matrix.hpp"
#include "canlink/poly.hpp"
#include "test_util.hpp"

using namespace canlink;
using testutil::Rng;

namespace {
const std::vector<std::string> kXYZT = {"x", "y", "z", "t"};
}

TEST_CASE("rationals are canonical") {
    CHECK(Rat(6, 4) == Rat(3, 2));
    CHECK(Rat(-6, -4) == Rat(3, 2));
    CHECK(Rat(6, -4).to_string() == "-3/2");
    CHECK(Rat(0, 7).to_string() == "0");
    CHECK(Rat(2, 3) + Rat(1, 3) == Rat(1));
    CHECK(Rat(1, 3).pow(3) == Rat(1, 27));
    CHECK_THROWS_AS(Rat(1, 0), PreconditionError);
    CHECK_THROWS_AS(Rat(1) / Rat(0), PreconditionError);
}

TEST_CASE("parse the published grammar") {
    Poly odp = parse_poly("x^2+y^2+z^2+t^2", kXYZT);
    CHECK(odp.term_count() == 4);
    CHECK(odp.degree() == 2);

    CHECK(parse_poly("0", kXYZT).is_zero());

    Poly two = parse_poly("-x^2 + x*t^2", kXYZT);
    CHECK(two.term_count() == 2);

    CHECK(parse_poly("1/2*x + 1/2*x", kXYZT) == parse_poly("x", kXYZT));
    CHECK(parse_poly("(x+y)^2", kXYZT) == parse_poly("x^2 + 2*x*y + y^2", kXYZT));
    CHECK(parse_poly("x + (-y)", kXYZT) == parse_poly("x - y", kXYZT));
}

TEST_CASE("parse errors carry byte offsets and names") {
    TablePtr table = VarTable::make(kXYZT);
    CHECK_THROWS_AS(parse_poly("x + q", table), ParseError);
    try {
        parse_poly("x + q", table);
    } catch (const ParseError& e) {
        CHECK(e.offset() == 4);
        CHECK(std::string(e.what()).find("q") != std::string::npos);
    }
    CHECK_THROWS_AS(parse_poly("x ++ y", table), ParseError);
    CHECK_THROWS_AS(parse_poly("x^", table), ParseError);
    CHECK_THROWS_AS(parse_poly("1/0", table), ParseError);
    CHECK_THROWS_AS(parse_poly("(x", table), ParseError);
    CHECK_THROWS_AS(parse_poly("x^9999999999", table), ParseError);
}

TEST_CASE("render is canonical and round-trips") {
    TablePtr table = VarTable::make(kXYZT);
    Poly p = parse_poly("-t^2 + x^4*t^2", table);
    std::string r = p.render();
    CHECK(parse_poly(r, table) == p);
    CHECK(parse_poly(r, table).render() == r);
    CHECK(Poly::zero(table).render() == "0");
    CHECK(parse_poly("y - x", table).render() == "-x + y");
    CHECK(parse_poly("1/2*x*y - z^2", table).render() == "1/2*x*y - z^2");

    Rng rng(20240601);
    for (int i = 0; i < 200; ++i) {
        Poly q = testutil::random_poly(rng, table, 8, 6);
        CHECK(parse_poly(q.render(), table) == q);
    }
}

TEST_CASE("ring arithmetic identities") {
    TablePtr table = VarTable::make(kXYZT);
    Poly x = Poly::variable(table, 0), y = Poly::variable(table, 1);
    CHECK((x + y) * (x - y) == parse_poly("x^2 - y^2", table));
    CHECK(parse_poly("x + 1", table).pow(0) == Poly::constant(table, Rat(1)));
    Poly q = parse_poly("x^2 + x*y^2", table);
    CHECK(q * Poly::constant(table, Rat(1)) == q);

    Rng rng(987654);
    for (int i = 0; i < 200; ++i) {
        Poly a = testutil::random_poly(rng, table, 4, 4);
        Poly b = testutil::random_poly(rng, table, 4, 4);
        Poly c = testutil::random_poly(rng, table, 4, 4);
        CHECK((a + b) * c == a * c + b * c);
        CHECK(a * (b * c) == (a * b) * c);
        CHECK(a * b == b * a);
        CHECK(a + b == b + a);
    }
}

TEST_CASE("mismatched tables are rejected") {
    Poly a = parse_poly("x", kXYZT);
    Poly b = parse_poly("u", {"u", "v"});
    CHECK_THROWS_AS(a + b, PreconditionError);
    CHECK_THROWS_AS(a * b, PreconditionError);
}

TEST_CASE("substitution") {
    TablePtr params = VarTable::make({"a_1", "a_2", "b_4"});
    Poly b4 = Poly::variable(params, 2);
    Poly image = parse_poly("a_2^2", params);
    CHECK(b4.substituted({{"b_4", image}}) == image);

    Poly p = parse_poly("x^2 + y", kXYZT);
    CHECK(p.substituted(std::map<std::size_t, Poly>{}) == p);

    // Table extension: x -> u + v moves x*y onto the (u, v, y) table.
    TablePtr uvy = VarTable::make({"u", "v", "y"});
    Poly xy = parse_poly("x*y", {"x", "y"});
    Poly expanded = xy.substituted({{"x", parse_poly("u + v", uvy)}});
    CHECK(expanded == parse_poly("u*y + v*y", uvy));
}

TEST_CASE("linear changes of coordinates") {
    TablePtr table = VarTable::make(kXYZT);
    Poly p = parse_poly("y^2*z", table);
    // swap y and z
    std::vector<std::vector<Rat>> swap = {{Rat(0), Rat(1)}, {Rat(1), Rat(0)}};
    CHECK(linear_change(p, {1, 2}, swap) == parse_poly("z^2*y", table));

    std::vector<std::vector<Rat>> id = {{Rat(1), Rat(0)}, {Rat(0), Rat(1)}};
    CHECK(linear_change(p, {1, 2}, id) == p);

    // (x, y) -> (x + y, x - y) takes x*y to x^2 - y^2.
    std::vector<std::vector<Rat>> m = {{Rat(1), Rat(1)}, {Rat(1), Rat(-1)}};
    CHECK(linear_change(parse_poly("x*y", table), {0, 1}, m) ==
          parse_poly("x^2 - y^2", table));

    std::vector<std::vector<Rat>> sing = {{Rat(1), Rat(1)}, {Rat(2), Rat(2)}};
    CHECK_THROWS_AS(linear_change(p, {1, 2}, sing), PreconditionError);

    // M then M^{-1} is the identity on random polynomials.
    Rng rng(4242);
    for (int trial = 0; trial < 50; ++trial) {
        std::vector<std::vector<Rat>> M(3, std::vector<Rat>(3));
        QMat qm(3, 3);
        do {
            for (std::size_t i = 0; i < 3; ++i)
                for (std::size_t j = 0; j < 3; ++j) {
                    M[i][j] = testutil::random_rat(rng, 3, 2);
                    qm.at(i, j) = M[i][j];
                }
        } while (qm.det().is_zero());
        QMat inv = qm.inverse();
        std::vector<std::vector<Rat>> Minv(3, std::vector<Rat>(3));
        for (std::size_t i = 0; i < 3; ++i)
            for (std::size_t j = 0; j < 3; ++j) Minv[i][j] = inv.at(i, j);
        Poly q = testutil::random_poly(rng, table, 5, 4);
        CHECK(linear_change(linear_change(q, {0, 1, 2}, M), {0, 1, 2}, Minv) == q);
    }
}

TEST_CASE("weights and graded parts") {
    TablePtr table = VarTable::make(kXYZT);
    Weighting w = {3, 2, 1, 1};
    CHECK(!Poly::zero(table).weight(w).has_value()); // wt(0) = infinity
    CHECK(*parse_poly("x*y + z^5", table).weight(w) == 5);

    Poly p = parse_poly("x^2 + x*y^2 - 3*z^4", table);
    CHECK(p.coeff_slice(0, 1, 2) == parse_poly("y^2", table)); // f_{1,2}
    CHECK(p.graded_part(Weighting(4, 1), 1).is_zero());        // below multiplicity

    Rng rng(777);
    for (int i = 0; i < 200; ++i) {
        Poly a = testutil::random_nonzero_poly(rng, table, 4, 5);
        Poly b = testutil::random_nonzero_poly(rng, table, 4, 5);
        Weighting rw = {rng.range(1, 4), rng.range(1, 4), rng.range(1, 4), rng.range(1, 4)};
        CHECK(*(a * b).weight(rw) == *a.weight(rw) + *b.weight(rw));

        // p equals the sum of its graded parts.
        Poly sum(table);
        for (std::int64_t d = 0; d <= *a.weight(rw) + 40; ++d)
            sum = sum + a.graded_part(rw, d);
        CHECK(sum == a);
    }
}

TEST_CASE("coeff_slice matches the f_{i,d} notation") {
    TablePtr table = VarTable::make(kXYZT);
    Poly sextic = parse_poly("x^4*t^2 + x^3*t^3 + y^6", table);
    // Degree-6 part of the whole polynomial under standard weights.
    Weighting ones(4, 1);
    CHECK(sextic.graded_part(ones, 6) == sextic);
    // Slice by x-power: the coefficient of x^3 in degree 3.
    CHECK(sextic.coeff_slice(0, 3, 3) == parse_poly("t^3", table));
}

TEST_CASE("binary gcd, squarefree, resultant") {
    TablePtr yz = VarTable::make({"y", "z"});
    Poly a = parse_poly("y^2*z", yz), b = parse_poly("y*z^2", yz);
    CHECK(binary_gcd(a, b) == parse_poly("y*z", yz));

    CHECK_FALSE(is_squarefree(parse_poly("y^2*(y+z)", yz)));
    CHECK(is_squarefree(parse_poly("y*z*(y+z)", yz)));

    CHECK(resultant(parse_poly("y - z", yz), parse_poly("y + z", yz), 0) ==
          parse_poly("2*z", yz));

    CHECK_THROWS_AS(binary_gcd(Poly::zero(yz), Poly::zero(yz)), PreconditionError);

    // Monic normalization under y < z: leading coefficient on the highest
    // z-power must be 1.
    Poly g = binary_gcd(parse_poly("2*y^2 + 2*z^2", yz), parse_poly("4*y^2 + 4*z^2", yz));
    CHECK(g == parse_poly("y^2 + z^2", yz));

    // gcd divides both inputs exactly, on random binary forms.
    Rng rng(13579);
    for (int i = 0; i < 100; ++i) {
        Poly u = Poly::zero(yz), v = Poly::zero(yz);
        int d1 = static_cast<int>(rng.range(1, 5)), d2 = static_cast<int>(rng.range(1, 5));
        for (int k = 0; k <= d1; ++k) {
            Mono m = Mono::of({static_cast<std::int32_t>(k), static_cast<std::int32_t>(d1 - k)});
            u = u + Poly::monomial(yz, m, testutil::random_rat(rng, 4, 2));
        }
        for (int k = 0; k <= d2; ++k) {
            Mono m = Mono::of({static_cast<std::int32_t>(k), static_cast<std::int32_t>(d2 - k)});
            v = v + Poly::monomial(yz, m, testutil::random_rat(rng, 4, 2));
        }
        if (u.is_zero() || v.is_zero()) continue;
        Poly w = u * v; // guaranteed common factor structure
        Poly g2 = binary_gcd(w, v);
        CHECK(w.divisible_by(g2));
        CHECK(v.divisible_by(g2));
        CHECK(w.divide_exact(g2) * g2 == w);
    }
}

TEST_CASE("distinct root counting") {
    TablePtr yz = VarTable::make({"y", "z"});
    CHECK(distinct_root_count(parse_poly("y^6 + z^6", yz)) == 6);
    CHECK(distinct_root_count(parse_poly("y^2*z", yz)) == 2);
    CHECK(common_distinct_root_count(parse_poly("y*z", yz), parse_poly("y^2 + y*z", yz)) == 1);
    CHECK(common_distinct_root_count(parse_poly("y", yz), parse_poly("z", yz)) == 0);
    CHECK(radical(parse_poly("y^2*z^3*(y+z)", yz)) == parse_poly("y*z*(y+z)", yz).scaled(Rat(1)));
}

TEST_CASE("exact division errors on inexact input") {
    TablePtr table = VarTable::make(kXYZT);
    Poly num = parse_poly("x^2 - y^2", table);
    CHECK(num.divide_exact(parse_poly("x - y", table)) == parse_poly("x + y", table));
    CHECK_THROWS_AS(num.divide_exact(parse_poly("x - z", table)), PreconditionError);
    CHECK_THROWS_AS(num.divide_exact(Poly::zero(table)), PreconditionError);
}

TEST_CASE("derivative") {
    TablePtr table = VarTable::make(kXYZT);
    CHECK(parse_poly("x^3*y + z", table).derivative(0) == parse_poly("3*x^2*y", table));
    CHECK(parse_poly("y^2", table).derivative(0).is_zero());
}

TEST_CASE("affine and homogeneous presentations convert both ways") {
    TablePtr table = VarTable::make(kXYZT);
    Poly affine = parse_poly("x^2 + y^3 + 1", table);
    Poly hom = affine.homogenized(3, 3); // pad with t
    CHECK(hom == parse_poly("x^2*t + y^3 + t^3", table));
    CHECK(hom.dehomogenized(3) == affine);
    CHECK_THROWS_AS(affine.homogenized(3, 2), PreconditionError);
    CHECK_THROWS_AS(hom.homogenized(3, 5), PreconditionError);
}

TEST_CASE("resultants agree with the root-product formula") {
    // Res_y(f, g) = lc(f)^{deg g} * prod g(alpha_i) over the roots of f.
    TablePtr yz = VarTable::make({"y", "z"});
    Poly f12 = parse_poly("(y - 1)*(y - 2)", yz);
    CHECK(resultant(f12, parse_poly("y + 3", yz), 0) == parse_poly("20", yz));
    CHECK(resultant(f12, parse_poly("y^2 + z", yz), 0) ==
          parse_poly("(1 + z)*(4 + z)", yz));
    CHECK(resultant(parse_poly("2*(y - 1)*(y - 2)", yz), parse_poly("y + 3", yz), 0) ==
          parse_poly("40", yz));
    Poly f123 = parse_poly("(y - 1)*(y - 2)*(y + 1)", yz);
    CHECK(resultant(f123, parse_poly("y^2 + z", yz), 0) ==
          parse_poly("(1 + z)^2*(4 + z)", yz));
    // Vanishes exactly on a shared root.
    CHECK(resultant(f12, parse_poly("y - 2", yz), 0).is_zero());
    // Swap symmetry up to the sign (-1)^{deg f * deg g}.
    Poly a = parse_poly("y^2 - 3*y*z + 2*z^2", yz), b = parse_poly("y^3 + z^3", yz);
    Poly rab = resultant(a, b, 0), rba = resultant(b, a, 0);
    CHECK(rab == rba); // 2 * 3 even
}
