#include <doctest.h>

#include <algorithm>
#include <cmath>
#include <limits>
#include <random>

#include "dnf/convolution.hpp"
#include "dnf/errors.hpp"
#include "dnf/field.hpp"
#include "dnf/grid.hpp"
#include "dnf/kernel.hpp"
#include "oracles.hpp"

using namespace dnf;

TEST_CASE("grid spacing and sites") {
  const auto g = build_grid(-10, 10, 401);
  CHECK(g.dx() == doctest::Approx(0.05).epsilon(1e-15));
  CHECK(g.site(400) == 10.0);
  CHECK(g.site(0) == -10.0);

  const auto g21 = build_grid(-10, 10, 21);
  CHECK(g21.site(10) == 0.0);

  const auto g3 = build_grid(0, 1, 3);
  const auto xs = g3.sites();
  CHECK(xs == std::vector<double>{0.0, 0.5, 1.0});

  const auto off = g3.offsets();
  REQUIRE(off.size() == 5);
  CHECK(off.front() == -1.0);
  CHECK(off[2] == 0.0);
  CHECK(off.back() == 1.0);
}

TEST_CASE("grid rejects bad bounds and sizes") {
  CHECK_THROWS_AS(build_grid(1, -1, 10), std::invalid_argument);
  CHECK_THROWS_AS(build_grid(0, 0, 10), std::invalid_argument);
  CHECK_THROWS_AS(build_grid(0, 1, 2), std::invalid_argument);
  CHECK_THROWS_AS(build_grid(0, 1, -5), std::invalid_argument);
}

TEST_CASE("mexican hat evaluates the printed normalisation") {
  KernelParams unit{1.0, 1.0, 0.0, 1.0, 0.0};
  CHECK(mexican_hat(0.0, unit) == doctest::Approx(0.398942280401432678).epsilon(1e-15));

  // Equal excitation and inhibition cancel, leaving the global term.
  KernelParams cancel{2.0, 1.3, 2.0, 1.3, 0.25};
  for (double d : {0.0, 0.4, -1.7, 6.0}) CHECK(mexican_hat(d, cancel) == doctest::Approx(-0.25).epsilon(1e-14));

  // Scalar oracle (mpmath, 30 digits): -0.00820533296085010975549...
  KernelParams p{2.0, 1.5, 1.0, 4.0, 0.1};
  CHECK(mexican_hat(2.0, p) == doctest::Approx(-0.00820533296085010976).epsilon(1e-13));
  CHECK(mexican_hat(2.0, p) == doctest::Approx(oracle::hat(2.0, 2.0, 1.5, 1.0, 4.0, 0.1)).epsilon(1e-14));
}

TEST_CASE("kernel params validation") {
  CHECK_THROWS(KernelParams{1, 0.0, 0, 1, 0}.validate());
  CHECK_THROWS(KernelParams{1, 1, 0, -1, 0}.validate());
  CHECK_THROWS(KernelParams{-1, 1, 0, 1, 0}.validate());
  CHECK_NOTHROW(KernelParams{}.validate());
  CHECK_THROWS(SigmoidParams{0.0, 0.0}.validate());
}

TEST_CASE("sigmoid midpoint, saturation and oracle") {
  SigmoidParams s{4.0, 0.0};
  CHECK(sigmoid(0.0, s) == 0.5);
  SigmoidParams shifted{7.5, -1.25};
  CHECK(sigmoid(-1.25, shifted) == 0.5);

  CHECK(sigmoid(1e6, s) == 1.0);
  CHECK(sigmoid(-1e6, s) == 0.0);
  CHECK(sigmoid(std::numeric_limits<double>::max(), s) == 1.0);
  CHECK(sigmoid(std::numeric_limits<double>::lowest(), s) == 0.0);

  // 1 / (1 + e^-0.4) = 0.598687660112452000369...
  CHECK(sigmoid(0.1, s) == doctest::Approx(0.598687660112452).epsilon(1e-15));

  std::mt19937_64 rng(3);
  const auto u = oracle::random_field(rng, 1000, -50, 50);
  for (double g : sigmoid(u, SigmoidParams{20.0, 0.0})) {
    CHECK(g >= 0.0);
    CHECK(g <= 1.0);
  }
}

TEST_CASE("lateral interaction of a sub-threshold field is negligible") {
  const auto grid = build_grid(-10, 10, 401);
  const LateralConvolver conv(grid, KernelParams{5, 1, 3, 3, 0.1});
  const std::vector<double> u(grid.size(), -10.0);
  for (double v : conv.interaction(u, SigmoidParams{4, 0})) CHECK(std::abs(v) < 1e-9);
}

TEST_CASE("one-hot activity reproduces the kernel shape scaled by dx") {
  const auto grid = build_grid(-5, 5, 101);
  const KernelParams kp{3, 0.8, 1.5, 2.0, 0.05};
  const auto xs = grid.sites();
  const std::size_t hot = 37;
  std::vector<double> activity(grid.size(), 0.0);
  activity[hot] = 1.0;
  for (auto method : {ConvolutionMethod::reference, ConvolutionMethod::parallel, ConvolutionMethod::fft}) {
    const LateralConvolver conv(grid, kp, method);
    const auto out = conv.convolve(activity);
    for (std::size_t i = 0; i < xs.size(); ++i) {
      const double expected = oracle::hat(xs[i] - xs[hot], 3, 0.8, 1.5, 2.0, 0.05) * grid.dx();
      CHECK(out[i] == doctest::Approx(expected).epsilon(1e-12).scale(1.0));
    }
  }
}

TEST_CASE("convolution paths agree with the direct sum") {
  const auto grid = build_grid(-10, 10, 401);
  const KernelParams kp{6, 0.7, 6, 2.5, 0.05};
  const LateralConvolver ref(grid, kp, ConvolutionMethod::reference);
  const LateralConvolver par(grid, kp, ConvolutionMethod::parallel);
  const LateralConvolver fft(grid, kp, ConvolutionMethod::fft);
  const auto xs = grid.sites();
  std::mt19937_64 rng(11);
  for (int trial = 0; trial < 5; ++trial) {
    const auto g = oracle::random_field(rng, grid.size(), 0.0, 1.0);
    const auto r = ref.convolve(g);
    const auto p = par.convolve(g);
    const auto f = fft.convolve(g);
    const auto o = oracle::riemann_convolution(xs, g, [](double d) { return oracle::hat(d, 6, 0.7, 6, 2.5, 0.05); });
    CHECK(r == p);  // parallel path is bit-identical
    for (std::size_t i = 0; i < r.size(); ++i) {
      CHECK(std::abs(f[i] - r[i]) < 1e-10);
      CHECK(std::abs(o[i] - r[i]) < 1e-10);
    }
  }
}

TEST_CASE("convolution rejects mismatched lengths") {
  const std::vector<double> row(9, 1.0);
  std::vector<double> a(4), out(4), small(3);
  CHECK_THROWS_AS(convolve_reference(row, a, 1.0, small), std::invalid_argument);
  std::vector<double> a6(6), out6(6);
  CHECK_THROWS_AS(convolve_reference(row, a6, 1.0, out6), std::invalid_argument);
  const auto grid = build_grid(0, 1, 5);
  const LateralConvolver conv(grid, KernelParams{1, 1, 0, 1, 0});
  CHECK_THROWS_AS(conv.convolve(std::vector<double>(7)), std::invalid_argument);
}

namespace {

FieldSpec linear_spec(double tau, double h) {
  FieldSpec s;
  s.tau = tau;
  s.h = h;
  s.q = 0.0;
  s.kernel = KernelParams{0, 1, 0, 1, 0};
  return s;
}

}  // namespace

TEST_CASE("field at rest stays at rest exactly") {
  const auto grid = build_grid(-10, 10, 201);
  const auto spec = linear_spec(5.0, -3.0);
  const LateralConvolver conv(grid, spec.kernel);
  auto state = resting_state(grid, spec);
  const std::vector<double> zero(grid.size(), 0.0);
  for (int n = 0; n < 500; ++n) state = field_step(state, spec, zero, conv, 0.1, nullptr);
  for (double v : state.u) CHECK(v == -3.0);
  CHECK(state.t == doctest::Approx(50.0));
}

TEST_CASE("linear field decay follows the exponential") {
  const auto grid = build_grid(-10, 10, 101);
  const double tau = 2.0, h = -1.0, dt = 0.001;
  const auto spec = linear_spec(tau, h);
  const LateralConvolver conv(grid, spec.kernel);
  FieldState state{std::vector<double>(grid.size(), h + 1.0), 0.0};
  const std::vector<double> zero(grid.size(), 0.0);
  const int steps = static_cast<int>(std::lround(10.0 * tau / dt));
  double worst = 0.0;
  for (int n = 1; n <= steps; ++n) {
    state = field_step(state, spec, zero, conv, dt, nullptr);
    const double t = n * dt;
    worst = std::max(worst, std::abs((state.u[50] - h) - std::exp(-t / tau)));
  }
  CHECK(worst < 1e-4);
  CHECK(std::abs((state.u[0] - h) - std::exp(-10.0)) < 1e-6);
}

TEST_CASE("constant sub-threshold drive converges to h + s") {
  const auto grid = build_grid(-10, 10, 51);
  const auto spec = linear_spec(1.0, -4.0);
  const LateralConvolver conv(grid, spec.kernel);
  auto state = resting_state(grid, spec);
  const std::vector<double> drive(grid.size(), 1.5);
  for (int n = 0; n < 4000; ++n) state = field_step(state, spec, drive, conv, 0.01, nullptr);
  for (double v : state.u) CHECK(v == doctest::Approx(-2.5).epsilon(1e-9));
}

TEST_CASE("noisy field step is seed-deterministic and requires a source") {
  const auto grid = build_grid(-10, 10, 101);
  auto spec = linear_spec(5.0, -3.0);
  spec.q = 0.5;
  const LateralConvolver conv(grid, spec.kernel);
  const std::vector<double> zero(grid.size(), 0.0);
  auto run = [&](std::uint64_t seed) {
    NoiseSource noise(seed);
    auto s = resting_state(grid, spec);
    for (int n = 0; n < 100; ++n) s = field_step(s, spec, zero, conv, 0.1, &noise);
    return s.u;
  };
  CHECK(run(7) == run(7));
  CHECK(run(7) != run(8));
  CHECK_THROWS_AS(field_step(resting_state(grid, spec), spec, zero, conv, 0.1, nullptr), std::invalid_argument);
}

TEST_CASE("noise increments scale with sqrt(dt)/tau") {
  // Pure noise on a flat field: after one step the per-site deviation has
  // standard deviation q sqrt(dt) / tau.
  const auto grid = build_grid(-10, 10, 4001);
  FieldSpec spec = linear_spec(2.0, 0.0);
  spec.q = 3.0;
  const LateralConvolver conv(grid, spec.kernel);
  NoiseSource noise(99);
  const std::vector<double> zero(grid.size(), 0.0);
  const auto s = field_step(resting_state(grid, spec), spec, zero, conv, 0.04, &noise);
  double ss = 0.0;
  for (double v : s.u) ss += v * v;
  const double sd = std::sqrt(ss / static_cast<double>(s.u.size()));
  CHECK(sd == doctest::Approx(3.0 * 0.2 / 2.0).epsilon(0.05));
}

TEST_CASE("field step aborts on non-finite values") {
  const auto grid = build_grid(-1, 1, 11);
  const auto spec = linear_spec(1.0, 0.0);
  const LateralConvolver conv(grid, spec.kernel);
  std::vector<double> drive(grid.size(), 0.0);
  drive[4] = std::numeric_limits<double>::infinity();
  CHECK_THROWS_AS(field_step(resting_state(grid, spec), spec, drive, conv, 0.1, nullptr), NumericalError);
}

TEST_CASE("a formed peak outlives its input") {
  const auto grid = build_grid(-10, 10, 401);
  FieldSpec spec;
  spec.tau = 5.0;
  spec.h = -2.0;
  spec.kernel = KernelParams{10, 0.7, 6, 3.0, 0.05};
  spec.sigmoid = SigmoidParams{4, 0};
  const LateralConvolver conv(grid, spec.kernel);
  auto state = resting_state(grid, spec);
  const auto xs = grid.sites();
  std::vector<double> bump(grid.size());
  for (std::size_t i = 0; i < xs.size(); ++i) bump[i] = 5.0 * std::exp(-(xs[i] * xs[i]) / 2.0);
  const std::vector<double> zero(grid.size(), 0.0);
  const double dt = 0.1;
  for (int n = 0; n < 300; ++n) state = field_step(state, spec, bump, conv, dt, nullptr);
  REQUIRE(*std::max_element(state.u.begin(), state.u.end()) > 0.0);
  // At least 5 tau after the input is gone.
  for (int n = 0; n < static_cast<int>(6 * spec.tau / dt); ++n) {
    state = field_step(state, spec, zero, conv, dt, nullptr);
    REQUIRE(*std::max_element(state.u.begin(), state.u.end()) > 0.0);
  }
}
