#include "doctest.h"
#include "vsf/core.hpp"

using namespace vsf;

TEST_CASE("window slices and rejects out-of-range requests") {
  const auto t = SensorTrace::from_values("a", {1, 2, 3, 4});
  CHECK(window(t, 1, 2).values == std::vector<double>{2, 3});
  CHECK(window(SensorTrace::from_values("b", {5}), 0, 1).values == std::vector<double>{5});
  CHECK_THROWS_AS(window(t, 3, 2), RangeError);
  CHECK_THROWS_AS(window(t, 5, 0), RangeError);
  CHECK(window(t, 4, 0).values.empty());
}

TEST_CASE("window leaves its input untouched") {
  const auto t = SensorTrace::from_values("a", {1, 2, 3, 4, 5}, "C");
  const auto copy = t;
  for (std::size_t s = 0; s < 5; ++s)
    for (std::size_t l = 0; s + l <= 5; ++l) {
      const auto w = window(t, s, l);
      CHECK(w.size() == l);
      CHECK(w.unit == "C");
    }
  CHECK(t == copy);
}

TEST_CASE("window over a gap") {
  auto t = SensorTrace::from_values("a", {1, 2, 3, 4});
  t.valid[2] = false;
  CHECK(t.has_gaps());
  CHECK(t.gap_count() == 1);
  CHECK_THROWS_AS(window(t, 1, 3), GapError);
  CHECK(window(t, 1, 3, true).valid == std::vector<bool>{true, false, true});
  CHECK_NOTHROW(window(t, 0, 2));
}

TEST_CASE("dataset length requires equal traces") {
  Dataset ds{{SensorTrace::from_values("a", {1, 2}), SensorTrace::from_values("b", {1})}};
  CHECK_THROWS_AS(ds.length(), SizeError);
  CHECK(Dataset{}.length() == 0);
}

TEST_CASE("validate_config accepts the reference settings") {
  SimConfig cfg;
  cfg.training_len = 100;
  cfg.filter_order = 4;
  cfg.revalidation_len = 5;
  cfg.operational_len = 20;
  cfg.error_threshold = 0.5;
  CHECK(validate_config(cfg).ok());
}

TEST_CASE("validate_config reports every violation") {
  SimConfig cfg;
  cfg.training_len = 4;
  cfg.filter_order = 4;
  auto check = validate_config(cfg);
  REQUIRE_FALSE(check.ok());
  CHECK(check.describe().find("T_p must exceed p") != std::string::npos);

  cfg = SimConfig{};
  cfg.revalidation_len = 200;
  cfg.training_len = 100;
  check = validate_config(cfg);
  CHECK(check.describe().find("R_p must be less than T_p") != std::string::npos);

  cfg = SimConfig{};
  cfg.learning_rate = 0;
  cfg.error_threshold = -1;
  cfg.delta_min = 2;
  cfg.awake_fraction = 0;
  CHECK(validate_config(cfg).violations.size() == 4);
  CHECK_THROWS_AS(require_valid(cfg), ConfigError);
}

TEST_CASE("validate_config is idempotent") {
  SimConfig cfg;
  cfg.max_companions = 3;
  const auto once = validate_config(cfg);
  REQUIRE(once.ok());
  const auto twice = validate_config(once.config);
  CHECK(twice.ok());
  CHECK(twice.config == once.config);
  CHECK(once.config == cfg);
}

TEST_CASE("error classes map to stable kinds") {
  CHECK(classify(ConfigError("x")) == ErrorKind::Config);
  CHECK(classify(LoadError("x")) == ErrorKind::Data);
  CHECK(classify(AlignmentError("x")) == ErrorKind::Data);
  CHECK(classify(SpecError("x")) == ErrorKind::Data);
  CHECK(classify(GapError("x")) == ErrorKind::Data);
  CHECK(classify(SizeError("x")) == ErrorKind::Data);
  CHECK(classify(ComparisonError("x")) == ErrorKind::Data);
  CHECK(classify(IoError("x")) == ErrorKind::Io);
  CHECK(classify(ProtocolError("x")) == ErrorKind::Internal);
  CHECK(classify(std::runtime_error("x")) == ErrorKind::Internal);
}

TEST_CASE("energy mode names") {
  CHECK(parse_energy_mode("events_only") == EnergyMode::EventsOnly);
  CHECK(parse_energy_mode("full") == EnergyMode::Full);
  CHECK_THROWS_AS(parse_energy_mode("most"), ConfigError);
}
