// SPDX-License-Identifier: Apache-2.0
#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <cmath>
#include <complex>
#include <set>

#include "roomrom/errors.hpp"
#include "roomrom/weeks.hpp"

using namespace roomrom;
using Complex = std::complex<double>;

namespace {

std::vector<Complex> sample_transform(const WeeksPlan& plan,
                                      const std::function<Complex(Complex)>& F) {
  std::vector<Complex> out(plan.N_s);
  for (int j = 0; j < plan.N_s; ++j) out[j] = F(plan.frequencies[j]);
  return out;
}

double max_error(const WeeksPlan& plan, const std::function<Complex(Complex)>& F,
                 const std::function<double(double)>& f) {
  const Eigen::VectorXd t = plan.time_grid();
  const auto synth = weeks_inverse(sample_transform(plan, F), plan, t);
  double peak = 0.0, err = 0.0;
  for (int i = 0; i < t.size(); ++i) peak = std::max(peak, std::abs(f(t(i))));
  for (int i = 0; i < t.size(); ++i)
    err = std::max(err, std::abs(synth.samples(i) - f(t(i))));
  return err / peak;
}

}  // namespace

TEST_CASE("plan frequency grid") {
  SUBCASE("small grid is distinct and conjugate-closed") {
    const WeeksPlan plan = make_weeks_plan(1.0, 1000.0, 8);
    CHECK(plan.frequencies.size() == 8);
    std::set<std::pair<double, double>> seen;
    for (const auto& s : plan.frequencies) seen.insert({s.real(), s.imag()});
    CHECK(seen.size() == 8);
    for (int j = 0; j < 8; ++j) {
      const Complex s = plan.frequencies[j];
      const Complex sc = plan.frequencies[plan.conjugate_index(j)];
      CHECK(std::abs(sc - std::conj(s)) < 1e-12 * std::abs(s));
    }
  }
  SUBCASE("grid reaches past the band edge") {
    const WeeksPlan plan = make_weeks_plan(1.0, 1000.0, 512);
    double max_im = 0.0;
    for (const auto& s : plan.frequencies) max_im = std::max(max_im, std::abs(s.imag()));
    CHECK(max_im > 2.0 * M_PI * 1000.0);
  }
  SUBCASE("defaults") {
    const WeeksPlan plan = make_weeks_plan(1.0, 1000.0);
    CHECK(plan.N_s == 512);
    CHECK(plan.sigma_w == doctest::Approx(5.0));
    CHECK(plan.b == doctest::Approx(2.0 * M_PI * 250.0));
    CHECK(plan.f_s == doctest::Approx(4000.0));
    CHECK(plan.time_grid().size() == 4000);
  }
  SUBCASE("N_s must be a power of two") {
    CHECK_THROWS_AS(make_weeks_plan(1.0, 1000.0, 300), ConfigError);
  }
}

TEST_CASE("inverse transform reproduces analytic pairs with the tuned plan") {
  const WeeksPlan plan = tune_weeks_plan(1.0, 1000.0, 512);
  const double w0 = 2.0 * M_PI * 50.0;

  CHECK(max_error(plan, [](Complex s) { return 1.0 / (s + 10.0); },
                  [](double t) { return std::exp(-10.0 * t); }) <= 1e-6);
  CHECK(max_error(plan, [](Complex s) { return 1.0 / (s * s); },
                  [](double t) { return t; }) <= 1e-6);
  CHECK(max_error(plan,
                  [w0](Complex s) { return w0 / ((s + 5.0) * (s + 5.0) + w0 * w0); },
                  [w0](double t) { return std::exp(-5.0 * t) * std::sin(w0 * t); }) <= 1e-6);
}

TEST_CASE("zero transform synthesizes to zero") {
  const WeeksPlan plan = make_weeks_plan(1.0, 500.0, 64);
  const auto synth = weeks_inverse(std::vector<Complex>(64, Complex(0, 0)), plan,
                                   plan.time_grid());
  CHECK(synth.samples.cwiseAbs().maxCoeff() == 0.0);
}

TEST_CASE("coefficient tail warns on an under-resolved plan") {
  // slowly decaying oscillation with far too few coefficients
  const WeeksPlan plan = make_weeks_plan(1.0, 1000.0, 32, 5.0, 3000.0);
  const double w0 = 2.0 * M_PI * 400.0;
  const auto samples = sample_transform(
      plan, [w0](Complex s) { return w0 / ((s + 2.0) * (s + 2.0) + w0 * w0); });
  const auto synth = weeks_inverse(samples, plan, plan.time_grid());
  CHECK(synth.tail_warning);
  CHECK(synth.coefficient_tail > 1e-4);
}

TEST_CASE("plans are checked against admittance poles") {
  WeeksPlan plan = make_weeks_plan(1.0, 1000.0, 8);
  RationalAdmittance m;
  m.real_poles.push_back({plan.frequencies[0].real(), 1.0});  // pole exactly on the contour
  m.real_poles.back().pole = plan.frequencies[0].real();
  AdmittanceMap adm;
  RationalAdmittance shifted;
  shifted.complex_pairs.push_back(
      {plan.frequencies[0].real(), std::abs(plan.frequencies[0].imag()), 1.0, 0.0});
  adm.emplace("CE", SurfaceAdmittance::rational(shifted));
  CHECK_THROWS_WITH_AS(check_plan_against_poles(plan, adm), doctest::Contains("sigma_w"),
                       NumericalError);
  AdmittanceMap ok;
  ok.emplace("CE", SurfaceAdmittance::constant(1e-4));
  CHECK_NOTHROW(check_plan_against_poles(plan, ok));
}
