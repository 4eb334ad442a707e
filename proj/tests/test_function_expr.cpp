#include <catch2/catch_amalgamated.hpp>

#include <random>

#include "entirelab/function_expr.hpp"

using namespace entirelab;

namespace {

bool close(Complex a, Complex b, double tol = 1e-12) {
  return std::abs(a - b) <= tol * std::max({1.0, std::abs(a), std::abs(b)});
}

Complex rand_z(std::mt19937_64& gen, double span = 2.0) {
  auto u = [&]() { return ((gen() >> 11) * 0x1.0p-53 * 2.0 - 1.0) * span; };
  return {u(), u()};
}

}  // namespace

TEST_CASE("eval: pinned values") {
  CHECK(eval(*make_builtin(BuiltinTag::kExp), {0.0, 0.0}) == Complex(1.0, 0.0));
  CHECK(eval(*make_poly({{0, 0}, {0, 0}, {1, 0}}), {3.0, 0.0}) == Complex(9.0, 0.0));
  // exp(exp(0)) = e by direct composition
  CHECK(close(eval(*make_iterate(make_builtin(BuiltinTag::kExp), 2), {0.0, 0.0}),
              Complex(std::exp(1.0), 0.0)));
  // z e^z builtin
  Complex z{0.7, -0.3};
  CHECK(close(eval(*make_builtin(BuiltinTag::kZExp), z), z * std::exp(z)));
}

TEST_CASE("eval_jet: pinned values") {
  // chain rule written out for exp(exp(z)) at z = i
  Complex i{0.0, 1.0};
  auto jet = eval_jet(*make_iterate(make_builtin(BuiltinTag::kExp), 2), i);
  CHECK(close(jet.d, std::exp(i) * std::exp(std::exp(i))));

  // 1 + z^2 at 2: value 5, derivative 4
  auto jet2 = eval_jet(*make_poly({{1, 0}, {0, 0}, {1, 0}}), {2.0, 0.0});
  CHECK(jet2.v == Complex(5.0, 0.0));
  CHECK(jet2.d == Complex(4.0, 0.0));
}

TEST_CASE("multiplier identity at a period-2 point of exp") {
  // seed from an independent high-precision run, polished in place by Newton
  ExprPtr f2 = make_iterate(make_builtin(BuiltinTag::kExp), 2);
  Complex xi{1.942832933392563, -1.443780420627265};
  for (int it = 0; it < 20; ++it) {
    auto jet = eval_jet(*f2, xi);
    Complex F = jet.v - xi;
    if (std::abs(F) < 1e-15) break;
    xi -= F / (jet.d - 1.0);
  }
  REQUIRE(std::abs(eval(*f2, xi) - xi) < 1e-12);

  // (f^2)'(xi) = f^1(xi) * f^2(xi) = e^xi * xi
  Complex expected = std::exp(xi) * xi;
  auto jet = eval_jet(*f2, xi);
  CHECK(std::abs(jet.d - expected) / std::abs(expected) < 1e-9);
}

TEST_CASE("orbit: pinned values") {
  auto o = orbit(*make_builtin(BuiltinTag::kExp), {0.0, 0.0}, 2);
  REQUIRE(o.points.size() == 3);
  CHECK(o.points[0] == Complex(0.0, 0.0));
  CHECK(o.points[1] == Complex(1.0, 0.0));
  CHECK(close(o.points[2], Complex(std::exp(1.0), 0.0)));

  // fixed point 1 of z^2: cumulative multiplier 2^3 = 8
  auto sq = orbit(*make_poly({{0, 0}, {0, 0}, {1, 0}}), {1.0, 0.0}, 3);
  for (const Complex& p : sq.points) CHECK(p == Complex(1.0, 0.0));
  CHECK(sq.multiplier_mag.to_abs() == Catch::Approx(8.0));
  CHECK(close(sq.multiplier_phase, Complex(1.0, 0.0)));
}

TEST_CASE("orbit returns to start at a period-2 point of exp") {
  ExprPtr f = make_builtin(BuiltinTag::kExp);
  ExprPtr f2 = make_iterate(f, 2);
  Complex xi{1.942832933392563, -1.443780420627265};
  for (int it = 0; it < 20; ++it) {
    auto jet = eval_jet(*f2, xi);
    xi -= (jet.v - xi) / (jet.d - 1.0);
  }
  auto o = orbit(*f, xi, 2);
  CHECK(std::abs(o.points[2] - o.points[0]) < 1e-10);
}

TEST_CASE("orbit overflow carries the escape index") {
  try {
    orbit(*make_builtin(BuiltinTag::kExp), {800.0, 0.0}, 3);
    FAIL("expected OverflowError");
  } catch (const OverflowError& e) {
    CHECK(e.index == 0);
  }
  try {
    orbit(*make_builtin(BuiltinTag::kExp), {6.0, 0.0}, 3);  // e^{e^{e^6}} blows up
    FAIL("expected OverflowError");
  } catch (const OverflowError& e) {
    CHECK(e.index == 2);
  }
}

TEST_CASE("chain-rule consistency on random expression pairs") {
  std::mt19937_64 gen(2024);
  std::vector<ExprPtr> pool = {
      make_builtin(BuiltinTag::kExp),
      make_builtin(BuiltinTag::kSin),
      make_builtin(BuiltinTag::kCos),
      make_builtin(BuiltinTag::kZExp),
      make_poly({{0.5, 0.1}, {1.0, 0.0}, {0.0, 0.3}}),
      make_poly({{-1, 0}, {0, 0}, {1, 0}}),
  };
  for (int trial = 0; trial < 100; ++trial) {
    ExprPtr f = pool[gen() % pool.size()];
    ExprPtr g = pool[gen() % pool.size()];
    Complex z = rand_z(gen, 1.0);
    ExprPtr fg = make_compose(f, g);
    auto whole = eval_jet(*fg, z);
    Complex gz = eval(*g, z);
    Complex expect = eval_jet(*f, gz).d * eval_jet(*g, z).d;
    CHECK(std::abs(whole.d - expect) <=
          1e-12 * std::max(1.0, std::abs(expect)));
  }
}

TEST_CASE("finite differences confirm jet derivatives at order >= 1.8") {
  auto observed_order = [](const FunctionExpr& f, Complex z) {
    auto fd_err = [&](double h) {
      Complex fd = (eval(f, z + h) - eval(f, z - h)) / (2.0 * h);
      return std::abs(eval_jet(f, z).d - fd);
    };
    double e4 = fd_err(1e-4), e5 = fd_err(1e-5);
    return std::log10(e4 / e5);
  };
  CHECK(observed_order(*make_builtin(BuiltinTag::kSin), {3.0, 0.1}) >= 1.8);
  CHECK(observed_order(*make_builtin(BuiltinTag::kZExp), {2.0, 1.0}) >= 1.8);
}

TEST_CASE("Iterate agrees with explicit Compose nesting exactly") {
  ExprPtr f = make_poly({{0.1, 0.2}, {0, 0}, {1, 0}});
  ExprPtr it3 = make_iterate(f, 3);
  ExprPtr nest = make_compose(f, make_compose(f, f));
  std::mt19937_64 gen(5);
  for (int trial = 0; trial < 20; ++trial) {
    Complex z = rand_z(gen, 1.0);
    CHECK(eval(*it3, z) == eval(*nest, z));
    CHECK(eval_jet(*it3, z).d == eval_jet(*nest, z).d);
  }
  // Iterate(f, 1) is f itself
  Complex z{0.4, -0.2};
  CHECK(eval(*make_iterate(f, 1), z) == eval(*f, z));
}

TEST_CASE("series: trust radius guards evaluation") {
  // exp Taylor coefficients, 20 terms
  std::vector<Complex> c(20);
  double fact = 1.0;
  for (int k = 0; k < 20; ++k) {
    c[k] = Complex(1.0 / fact, 0.0);
    fact *= (k + 1);
  }
  ExprPtr s = make_series(c);
  Complex inside{0.4, 0.2};
  CHECK(close(eval(*s, inside), std::exp(inside), 1e-14));
  CHECK_THROWS_AS(eval(*s, Complex{5.0, 0.0}), SeriesOutOfTrustError);
  CHECK_THROWS_AS(make_series({Complex{1.0, 0.0}}), InvalidInputError);
}

TEST_CASE("eval overflow switches callers to log scale") {
  CHECK_THROWS_AS(eval(*make_builtin(BuiltinTag::kExp), {1000.0, 0.0}),
                  OverflowError);
  LogComplex w = eval_log(*make_builtin(BuiltinTag::kExp), {1000.0, 0.0});
  CHECK(w.log_abs == Catch::Approx(1000.0));
}

TEST_CASE("constructors enforce invariants") {
  CHECK_THROWS_AS(make_poly({{0, 0}, {0, 0}}), InvalidInputError);
  CHECK_THROWS_AS(make_iterate(make_builtin(BuiltinTag::kExp), 0),
                  InvalidInputError);
  // trailing zero coefficients trim to the true degree
  ExprPtr p = make_poly({{1, 0}, {2, 0}, {0, 0}});
  CHECK(std::get<FunctionExpr::Poly>(p->node).coeffs.size() == 2);
}

TEST_CASE("text serialization round-trips") {
  std::vector<std::string> examples = {
      "exp",
      "poly[1,0,2]",
      "iter(exp,3)",
      "comp(exp,poly[0,1,1])",
      "poly[1+2i,-0.5,3i]",
      "poly[-i,i,1]",
      "zexp",
      "comp(zexp,iter(poly[0,0.25,0.125],2))",
  };
  std::mt19937_64 gen(99);
  for (const std::string& text : examples) {
    ExprPtr e = parse_function(text);
    std::string printed = format_function(*e);
    ExprPtr back = parse_function(printed);
    for (int trial = 0; trial < 5; ++trial) {
      Complex z = rand_z(gen, 0.8);
      CHECK(eval(*e, z) == eval(*back, z));
    }
  }
  CHECK(format_function(*parse_function("poly[ 1 , 0 , 2 ]")) == "poly[1,0,2]");
  CHECK_THROWS_AS(parse_function("poly[1,0,2] trailing"), InvalidInputError);
  CHECK_THROWS_AS(parse_function("unknown"), InvalidInputError);
  CHECK_THROWS_AS(parse_function("iter(exp,0)"), InvalidInputError);
}
