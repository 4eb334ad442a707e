#include <catch2/catch_amalgamated.hpp>

#include <random>

#include "entirelab/jet.hpp"
#include "entirelab/log_scale.hpp"

using namespace entirelab;

namespace {

bool close(Complex a, Complex b, double tol = 1e-12) {
  return std::abs(a - b) <= tol * std::max({1.0, std::abs(a), std::abs(b)});
}

}  // namespace

TEST_CASE("LogMag basics") {
  LogMag two = LogMag::from_abs(2.0);
  LogMag three = LogMag::from_abs(3.0);
  CHECK((two * three).to_abs() == Catch::Approx(6.0));
  CHECK((three / two).to_abs() == Catch::Approx(1.5));
  CHECK(two < three);
  CHECK(LogMag::zero().is_zero());
  CHECK((LogMag::zero() * three).is_zero());

  // products of enormous magnitudes never overflow the representation
  LogMag huge{1e300};
  LogMag prod = huge * huge;
  CHECK(prod.log_abs == 2e300);
}

TEST_CASE("LogComplex round trip and arithmetic against plain complex") {
  std::mt19937_64 gen(42);
  auto rnd = [&]() {
    auto u = [&]() { return (gen() >> 11) * 0x1.0p-53 * 4.0 - 2.0; };
    return Complex(u(), u());
  };
  for (int i = 0; i < 200; ++i) {
    Complex a = rnd(), b = rnd();
    if (std::abs(a) < 1e-6 || std::abs(b) < 1e-6) continue;
    LogComplex la = LogComplex::from(a), lb = LogComplex::from(b);
    CHECK(close((la * lb).to_complex(), a * b));
    CHECK(close((la / lb).to_complex(), a / b));
    CHECK(close((la + lb).to_complex(), a + b, 1e-10));
    CHECK(close((la - lb).to_complex(), a - b, 1e-10));
    CHECK(close(exp(la).to_complex(), std::exp(a), 1e-10));
    CHECK(close(sin(la).to_complex(), std::sin(a), 1e-9));
    CHECK(close(cos(la).to_complex(), std::cos(a), 1e-9));
  }
}

TEST_CASE("LogComplex survives doubly exponential magnitudes") {
  // w = exp(1000 + i): |w| = e^1000 overflows double but not the log form
  LogComplex w = exp(LogComplex::from(Complex(1000.0, 1.0)));
  CHECK(w.log_abs == Catch::Approx(1000.0).epsilon(1e-12));
  CHECK(w.arg == Catch::Approx(1.0).margin(1e-10));
  CHECK_THROWS_AS(w.to_complex(), OverflowError);

  // one more exp: log|exp(w)| = Re w ~ e^{1000 cos 1}, beyond double
  CHECK_THROWS_AS(exp(w), OverflowError);

  // addition keeps the dominant term
  LogComplex big{500.0, 0.3};
  LogComplex small{-500.0, 1.2};
  LogComplex sum = big + small;
  CHECK(sum.log_abs == Catch::Approx(500.0));
  CHECK(sum.arg == Catch::Approx(0.3));
}

TEST_CASE("LogComplex zero handling") {
  LogComplex z = LogComplex::from(Complex(0.0, 0.0));
  CHECK(z.is_zero());
  CHECK(exp(z).to_complex() == Complex(1.0, 0.0));
  LogComplex one = LogComplex::one();
  CHECK((z + one).to_complex() == Complex(1.0, 0.0));
  // cancellation bottoms out at rounding level in log scale
  CHECK((one - one).log_abs < -30.0);
}

TEST_CASE("Jet arithmetic implements the product and quotient rules") {
  using J = Jet<Complex>;
  Complex z{1.3, -0.4};
  J x = J::variable(z);
  J f = x * x * x;  // z^3, derivative 3z^2
  CHECK(close(f.v, z * z * z));
  CHECK(close(f.d, 3.0 * z * z));

  J g = exp(x) / x;  // derivative e^z (z-1)/z^2
  CHECK(close(g.v, std::exp(z) / z));
  CHECK(close(g.d, std::exp(z) * (z - 1.0) / (z * z), 1e-11));

  J s = sin(x) * cos(x);
  CHECK(close(s.d, std::cos(2.0 * z), 1e-11));
}

TEST_CASE("Jet over LogComplex matches Jet over Complex in range") {
  std::mt19937_64 gen(7);
  auto rnd = [&]() {
    auto u = [&]() { return (gen() >> 11) * 0x1.0p-53 * 3.0 - 1.5; };
    return Complex(u(), u());
  };
  for (int i = 0; i < 50; ++i) {
    Complex z = rnd();
    if (std::abs(z) < 1e-3) continue;
    auto jc = Jet<Complex>::variable(z);
    auto jl = Jet<LogComplex>::variable(LogComplex::from(z));
    auto fc = exp(jc * jc) - jc;
    auto fl = exp(jl * jl) - jl;
    CHECK(close(fl.v.to_complex(), fc.v, 1e-10));
    CHECK(close(fl.d.to_complex(), fc.d, 1e-10));
  }
}
