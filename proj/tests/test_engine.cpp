#include <cmath>
#include <random>

#include "doctest.h"
#include "oracles.hpp"
#include "vsf/engine.hpp"

using namespace vsf;

namespace {

WindowView view_of(const std::vector<std::vector<double>>& cols) {
  WindowView v;
  for (const auto& c : cols) v.emplace_back(c);
  return v;
}

std::vector<double> sine(std::size_t n, double period, double amp, double offset,
                         double phase = 0.0) {
  std::vector<double> x(n);
  for (std::size_t t = 0; t < n; ++t)
    x[t] = offset + amp * std::sin(2.0 * M_PI * double(t) / period + phase);
  return x;
}

// Brute force over all ordered pairs: best companion for each dependent.
double brute_pair_score(const std::vector<double>& dep, const std::vector<double>& comp,
                        std::size_t skip) {
  std::vector<double> d(dep.begin() + skip, dep.end()), c(comp.begin() + skip, comp.end());
  const auto beta = oracle::spatial_ls(d, {c});
  double mean = 0;
  for (double x : dep) mean += x;
  mean /= double(dep.size());
  double s2 = 0;
  for (double x : dep) s2 += (x - mean) * (x - mean);
  s2 /= double(dep.size() - 1);
  double chi2 = 0;
  for (std::size_t t = 0; t < d.size(); ++t) {
    const double r = d[t] - beta[0] - beta[1] * c[t];
    chi2 += r * r / s2;
  }
  return std::max(0.0, 1.0 - chi2 / double(dep.size() - 1));
}

}  // namespace

TEST_CASE("phase transitions") {
  SimConfig cfg;
  auto s = PhaseSchedule::from_config(cfg);
  CHECK(s.phase == Phase::Training);
  CHECK_THROWS_AS(advance_phase(s), StateError);  // mid-phase
  s.phase_slot = cfg.training_len;
  CHECK_THROWS_AS(advance_phase(s, RevalidationOutcome::Continue), StateError);
  s = advance_phase(s);
  CHECK(s.phase == Phase::Operational);
  CHECK(s.phase_slot == 0);
  s.phase_slot = cfg.operational_len;
  s = advance_phase(s);
  CHECK(s.phase == Phase::Revalidation);
  s.phase_slot = cfg.revalidation_len;
  CHECK_THROWS_AS(advance_phase(s), StateError);
  CHECK(advance_phase(s, RevalidationOutcome::Continue).phase == Phase::Operational);
  CHECK(advance_phase(s, RevalidationOutcome::Retrain).phase == Phase::Training);
}

TEST_CASE("phase machine admits only the four transitions") {
  using O = std::optional<RevalidationOutcome>;
  const O outcomes[] = {std::nullopt, RevalidationOutcome::Continue, RevalidationOutcome::Retrain};
  int allowed = 0;
  for (Phase p : {Phase::Training, Phase::Operational, Phase::Revalidation}) {
    for (const auto& o : outcomes) {
      PhaseSchedule s{3, 4, 2, p, 0};
      s.phase_slot = s.current_length();
      try {
        const auto next = advance_phase(s, o);
        ++allowed;
        const bool legal = (p == Phase::Training && next.phase == Phase::Operational) ||
                           (p == Phase::Operational && next.phase == Phase::Revalidation) ||
                           (p == Phase::Revalidation && next.phase == Phase::Operational) ||
                           (p == Phase::Revalidation && next.phase == Phase::Training);
        CHECK(legal);
      } catch (const StateError&) {
      }
    }
  }
  CHECK(allowed == 4);
}

TEST_CASE("select_companions picks the affine image") {
  std::mt19937_64 rng(4);
  const auto a = sine(100, 40, 3, 20);
  std::vector<double> b(100);
  for (std::size_t t = 0; t < 100; ++t) b[t] = 2 * a[t] + 1;
  const auto c = oracle::normal_series(rng, 100);
  const std::vector<std::vector<double>> cols{a, b, c};

  // Both directions of the A/B pair are perfect; every pair with C is poor.
  CHECK(brute_pair_score(b, a, 4) == doctest::Approx(1.0));
  CHECK(brute_pair_score(a, b, 4) == doctest::Approx(1.0));
  CHECK(brute_pair_score(c, a, 4) < 0.5);
  const auto scores = pairwise_scores_serial(view_of(cols), 4);
  for (std::size_t i = 0; i < 3; ++i)
    for (std::size_t j = 0; j < 3; ++j)
      if (i != j) CHECK(scores.at(i, j) == doctest::Approx(brute_pair_score(cols[i], cols[j], 4)));

  const auto asg = select_companions(view_of(cols), 4, 0.5, 1);
  CHECK(asg.roles == std::vector<Role>{Role::TypeII, Role::TypeI, Role::TypeII});
  CHECK(asg.companions[1] == std::vector<NodeIndex>{0});
  CHECK_NOTHROW(asg.check());
}

TEST_CASE("uncorrelated nodes stay TypeII") {
  std::mt19937_64 rng(8);
  std::vector<std::vector<double>> cols;
  for (int i = 0; i < 4; ++i) cols.push_back(oracle::normal_series(rng, 100));
  const auto asg = select_companions(view_of(cols), 4, 0.5, 1);
  CHECK(asg.type1_count() == 0);
}

TEST_CASE("identical traces form a single hub") {
  for (std::size_t n : {2u, 3u, 5u, 7u}) {
    const auto x = sine(80, 30, 2, 10);
    const std::vector<std::vector<double>> cols(n, x);
    const auto asg = select_companions(view_of(cols), 3, 0.5, 1);
    CHECK(asg.type1_count() == n - 1);
    CHECK(asg.roles[0] == Role::TypeII);
    for (std::size_t i = 1; i < n; ++i) CHECK(asg.companions[i] == std::vector<NodeIndex>{0});
  }
}

TEST_CASE("select_companions is deterministic and rejects a single node") {
  std::mt19937_64 rng(12);
  std::vector<std::vector<double>> cols;
  const auto base = oracle::normal_series(rng, 120);
  for (int i = 0; i < 6; ++i) {
    auto c = base;
    const auto noise = oracle::normal_series(rng, 120, 0, 0.2 * i);
    for (std::size_t t = 0; t < c.size(); ++t) c[t] += noise[t];
    cols.push_back(c);
  }
  const auto a = select_companions(view_of(cols), 4, 0.3, 2);
  const auto b = select_companions(view_of(cols), 4, 0.3, 2);
  CHECK(a == b);
  CHECK_NOTHROW(a.check());
  CHECK_THROWS_AS(select_companions(view_of({base}), 4, 0.5, 1), ArityError);
}

TEST_CASE("greedy_assign honours max_companions and the admission threshold") {
  ScoreMatrix s(4);
  const double table[4][4] = {{0, .9, .8, .7}, {.95, 0, .6, .55}, {.3, .2, 0, .1}, {.4, .3, .2, 0}};
  for (int i = 0; i < 4; ++i)
    for (int j = 0; j < 4; ++j)
      if (i != j) s.at(i, j) = table[i][j];
  const auto one = greedy_assign(s, 0.5, 1);
  CHECK(one.roles[1] == Role::TypeI);
  CHECK(one.companions[1] == std::vector<NodeIndex>{0});
  CHECK(one.type1_count() == 1);
  const auto many = greedy_assign(s, 0.5, 3);
  CHECK(many.companions[1] == std::vector<NodeIndex>{0, 2, 3});
  const auto strict = greedy_assign(s, 0.99, 1);
  CHECK(strict.type1_count() == 0);
}

TEST_CASE("rotation swaps tied roles by active time") {
  ScoreMatrix s(2);
  s.at(0, 1) = 1.0;
  s.at(1, 0) = 1.0;
  const auto round1 = greedy_assign(s, 0.5, 1);
  REQUIRE(round1.roles[1] == Role::TypeI);
  const std::vector<std::uint64_t> active{125, 100};
  const auto round2 = rotate_roles(round1, s, active, 0.5, 1, 0.02);
  CHECK(round2.roles[0] == Role::TypeI);
  CHECK(round2.companions[0] == std::vector<NodeIndex>{1});
  CHECK(round2.rotation_counter == round1.rotation_counter + 1);
}

TEST_CASE("rotation keeps clear winners and drops weak pairs") {
  ScoreMatrix s(3);
  s.at(0, 1) = 0.3, s.at(0, 2) = 0.2, s.at(1, 0) = 0.9, s.at(1, 2) = 0.1, s.at(2, 0) = 0.1,
  s.at(2, 1) = 0.2;
  const auto first = greedy_assign(s, 0.5, 1);
  const std::vector<std::uint64_t> active{10, 2, 10};
  const auto again = rotate_roles(first, s, active, 0.5, 1, 0.02);
  CHECK(again.same_roles(first));
  CHECK(again.rotation_counter == 1);

  s.at(1, 0) = 0.4;
  const auto dropped = rotate_roles(again, s, active, 0.5, 1, 0.02);
  CHECK(dropped.roles[1] == Role::TypeII);
}

TEST_CASE("companions of TypeI nodes are always TypeII") {
  std::mt19937_64 rng(99);
  std::uniform_real_distribution<double> u(0.0, 1.0);
  for (int k = 0; k < 300; ++k) {
    const std::size_t n = 2 + rng() % 7;
    ScoreMatrix s(n);
    for (std::size_t i = 0; i < n; ++i)
      for (std::size_t j = 0; j < n; ++j)
        if (i != j) s.at(i, j) = u(rng) < 0.3 ? 1.0 : u(rng);
    std::vector<std::uint64_t> active(n);
    for (auto& a : active) a = rng() % 5;
    const auto asg = greedy_assign(s, u(rng), 1 + rng() % 3, active, 0.02 * (k % 3));
    CHECK_NOTHROW(asg.check());
  }
}

TEST_CASE("hybrid_combine") {
  CHECK(hybrid_combine(0.5, 0.5, 10.0, 12.0) == 11.0);
  CHECK(hybrid_combine(0.7, 0.0, 10.0, 12.0) == 10.0);
  CHECK(hybrid_combine(0.6, 0.4, 10.0, 12.0) == doctest::Approx(10.8).epsilon(1e-15));
  CHECK(hybrid_combine(0.0, 1.0, 10.0, 12.0) == 12.0);
  CHECK(hybrid_combine(0.0, 0.0, 10.0, 12.0) == 10.0);
}

TEST_CASE("hybrid output lies between its inputs and ignores weight scale") {
  std::mt19937_64 rng(17);
  std::uniform_real_distribution<double> w(0.0, 1.0), v(-50.0, 50.0), k(0.01, 100.0);
  for (int i = 0; i < 1000; ++i) {
    const double g = w(rng), d = w(rng), a = v(rng), b = v(rng), c = k(rng);
    if (g + d <= 0) continue;
    const double h = hybrid_combine(g, d, a, b);
    CHECK(h >= std::min(a, b) - 1e-12);
    CHECK(h <= std::max(a, b) + 1e-12);
    CHECK(hybrid_combine(c * g, c * d, a, b) == doctest::Approx(h).epsilon(1e-12));
  }
}

TEST_CASE("step_type2") {
  VirtualSensor vs;
  vs.order = 1;
  vs.temporal = TemporalFilter{{1.0}, 0.1, false, false};
  vs.history = {20.0};
  const auto r = step_type2(vs, 21.0);
  CHECK(r.value == 21.0);
  CHECK(r.source == Source::Measured);
  CHECK(vs.temporal->coeffs[0] == doctest::Approx(1.0 + 0.1 * 20.0 * 1.0));
  CHECK(vs.history == std::vector<double>{21.0});

  VirtualSensor quiet;
  quiet.order = 1;
  quiet.temporal = TemporalFilter{{1.0}, 0.1, false, false};
  quiet.history = {20.4};
  const auto p = step_type2(quiet, std::nullopt);
  CHECK(p.value == 20.4);
  CHECK(p.source == Source::Predicted);
  CHECK(quiet.temporal->coeffs == std::vector<double>{1.0});

  VirtualSensor untrained;
  CHECK_THROWS_AS(step_type2(untrained, std::nullopt), ProtocolError);
}

TEST_CASE("step_type1 tracks an exact affine companion") {
  const std::size_t p = 3;
  const auto a = sine(200, 37, 4, 15);
  std::vector<double> b(200);
  for (std::size_t t = 0; t < 200; ++t) b[t] = 2 * a[t] + 1;

  const std::span<const double> train_b(b.data(), 100), train_a(a.data(), 100);
  VirtualSensor vs;
  vs.node = 1;
  vs.role = Role::TypeI;
  vs.order = p;
  vs.temporal = fit_temporal(train_b, p, 0.5);
  vs.gamma_tracker = temporal_tracker(*vs.temporal, train_b);
  const auto fit = fit_spatial_window(train_b, {train_a}, p);
  vs.spatial = fit.regressor;
  vs.delta_tracker = fit.tracker;
  vs.companions = {0};
  for (std::size_t i = 0; i < p; ++i) vs.history.push_back(b[99 - i]);
  CHECK(vs.gamma() == doctest::Approx(1.0));
  CHECK(vs.delta() == doctest::Approx(1.0));

  for (std::size_t t = 100; t < 120; ++t) {
    const std::optional<double> comp = a[t];
    const double out = step_type1(vs, std::span(&comp, 1));
    CHECK(std::abs(out - b[t]) <= 1e-6);
    CHECK(vs.sources.back() == Source::Predicted);
  }
}

TEST_CASE("step_type1 with no temporal confidence is the spatial prediction") {
  VirtualSensor vs;
  vs.role = Role::TypeI;
  vs.order = 1;
  vs.temporal = TemporalFilter{{0.3}, 0.5, true, false};
  vs.gamma_tracker = FitTracker{10.0, 5, 1.0};  // score 0
  vs.spatial = SpatialRegressor{{1.0, 2.0}, false};
  vs.delta_tracker = FitTracker{0.0, 5, 1.0};
  vs.companions = {0};
  vs.history = {4.0};
  for (double x : {1.0, 2.5, -3.0}) {
    const std::optional<double> c = x;
    CHECK(step_type1(vs, std::span(&c, 1)) == 1.0 + 2.0 * x);
  }
  const std::optional<double> none;
  CHECK_THROWS_AS(step_type1(vs, std::span(&none, 1)), ProtocolError);
}

namespace {

// Two sensors: 0 TypeII, 1 TypeI on 0 with B = 2A + 1, trained on `train`
// slots.
std::vector<VirtualSensor> pair_sensors(const std::vector<double>& a, const std::vector<double>& b,
                                        std::size_t train, std::size_t p) {
  std::vector<VirtualSensor> vss(2);
  const std::vector<std::span<const double>> cols{std::span(a.data(), train),
                                                  std::span(b.data(), train)};
  for (std::size_t i = 0; i < 2; ++i) {
    auto& vs = vss[i];
    vs.node = i;
    vs.order = p;
    vs.temporal = fit_temporal(cols[i], p, 0.5);
    vs.gamma_tracker = temporal_tracker(*vs.temporal, cols[i]);
    for (std::size_t k = 0; k < p; ++k) vs.history.push_back(cols[i][train - 1 - k]);
  }
  vss[1].role = Role::TypeI;
  vss[1].companions = {0};
  const auto fit = fit_spatial_window(cols[1], {cols[0]}, p);
  vss[1].spatial = fit.regressor;
  vss[1].delta_tracker = fit.tracker;
  return vss;
}

}  // namespace

TEST_CASE("revalidate with zero errors continues and leaves chi-squared alone") {
  const auto a = sine(120, 25, 3, 10);
  std::vector<double> b(120);
  for (std::size_t t = 0; t < 120; ++t) b[t] = 2 * a[t] + 1;
  auto vss = pair_sensors(a, b, 100, 3);
  const double chi_b = vss[1].delta_tracker.chi2;
  SimConfig cfg;
  cfg.filter_order = 3;
  cfg.revalidation_len = 5;
  const std::vector<std::vector<double>> data{{a.begin() + 100, a.begin() + 105},
                                              {b.begin() + 100, b.begin() + 105}};
  const auto d = revalidate(vss, data, cfg);
  CHECK(d.outcome == RevalidationOutcome::Continue);
  CHECK(vss[1].delta_tracker.chi2 == doctest::Approx(chi_b).epsilon(1e-9));
  CHECK(vss[1].delta_tracker.nu > 99);
  CHECK(d.mean_abs_error[1] < 1e-6);
}

TEST_CASE("revalidate retrains when the companion relation breaks") {
  const auto a = sine(120, 25, 3, 10);
  std::vector<double> b(120);
  for (std::size_t t = 0; t < 120; ++t) b[t] = 2 * a[t] + 1;
  auto vss = pair_sensors(a, b, 100, 2);
  std::mt19937_64 rng(2);
  std::vector<std::vector<double>> data{std::vector<double>(a.begin() + 100, a.begin() + 110),
                                        oracle::normal_series(rng, 10, 20, 5)};
  SimConfig cfg;
  cfg.filter_order = 2;
  cfg.revalidation_len = 10;
  const auto d = revalidate(vss, data, cfg);
  CHECK(d.outcome == RevalidationOutcome::Retrain);
  CHECK(d.refit_delta[1] < cfg.delta_min);
}

TEST_CASE("revalidate error limit is strict") {
  // A constant TypeII node predicted as a constant offset by exactly the limit.
  std::vector<VirtualSensor> vss(1);
  auto& vs = vss[0];
  vs.order = 1;
  vs.temporal = TemporalFilter{{1.0}, 0.5, false, false};
  vs.gamma_tracker = FitTracker{0.0, 10, 1.0};
  SimConfig cfg;
  cfg.retrain_error_limit = 2.0;
  cfg.revalidation_len = 1;

  vs.history = {8.0};
  auto copy = vss;
  auto d = revalidate(copy, {{10.0}}, cfg);
  CHECK(d.mean_abs_error[0] == 2.0);
  CHECK(d.outcome == RevalidationOutcome::Continue);

  copy = vss;
  d = revalidate(copy, {{10.5}}, cfg);
  CHECK(d.outcome == RevalidationOutcome::Retrain);
  CHECK_THROWS_AS(revalidate(copy, {{}}, cfg), SizeError);
}

TEST_CASE("pairwise scores: parallel equals serial") {
  std::mt19937_64 rng(31);
  for (std::size_t n : {2u, 5u, 16u}) {
    std::vector<std::vector<double>> cols;
    const auto base = oracle::normal_series(rng, 150);
    for (std::size_t i = 0; i < n; ++i) {
      auto c = base;
      const auto noise = oracle::normal_series(rng, 150, 0, 0.1 * double(i));
      for (std::size_t t = 0; t < c.size(); ++t) c[t] = (i + 1) * c[t] + noise[t];
      cols.push_back(c);
    }
    const auto s = pairwise_scores_serial(view_of(cols), 4);
    const auto p = pairwise_scores_parallel(view_of(cols), 4);
    REQUIRE(s.values.size() == p.values.size());
    for (std::size_t k = 0; k < s.values.size(); ++k) {
      if (std::isnan(s.values[k])) CHECK(std::isnan(p.values[k]));
      else CHECK(s.values[k] == p.values[k]);
    }
  }
}
