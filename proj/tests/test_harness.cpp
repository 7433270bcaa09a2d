#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <complex>
#include <fstream>
#include <random>

#include <cvnn/harness.hpp>

using namespace cvnn;
using namespace cvnn::cost_model;
using namespace cvnn::harness;
using cvnn::numerics::ComplexScalar;

namespace {

std::vector<ComplexScalar> random_signal(std::size_t length, std::mt19937_64& rng,
                                         double scale = 1.0) {
  std::uniform_real_distribution<double> dist(-scale, scale);
  std::vector<ComplexScalar> out(length);
  for (auto& v : out) {
    const double re = dist(rng);
    const double im = dist(rng);
    v = {re, im};
  }
  return out;
}

}  // namespace

TEST_CASE("run_count_check pins the tiny CVFNN training point") {
  const CountReport report =
      run_count_check(ShallowSpec{ArchKind::CVFNN, 1, 1, 1}, Mode::Training, 3);
  CHECK(report.formula_count == 36);
  CHECK(report.metered_count == 36);
  CHECK(report.match);
  CHECK(report.forward_mults == 8);
  CHECK(report.forward_mults + report.backward_mults + report.update_mults == 36);
}

TEST_CASE("randomized count verification matches everywhere") {
  const auto reports = verify_counts(25, 8, 1234);
  CHECK(reports.size() == 2 * (25 * 6 + 8 * 4));
  for (const auto& report : reports) {
    CAPTURE(describe(report));
    CHECK(report.match);
  }
}

TEST_CASE("gradient checks pass for every gradient-family architecture") {
  std::mt19937_64 rng(7);
  const struct {
    ArchKind arch;
    double tolerance;
  } cases[] = {
      {ArchKind::CVFNN, 1e-5}, {ArchKind::SCFNN, 1e-5}, {ArchKind::CRBF, 1e-5},
      {ArchKind::PTRBF, 1e-5}, {ArchKind::FCRBF, 1e-4},
  };
  for (const auto& c : cases) {
    for (std::uint64_t seed = 1; seed <= 4; ++seed) {
      const ShallowSpec spec{c.arch, 2, 2, 3};
      networks::Network net = networks::build(spec, seed);
      const auto x = random_signal(2, rng, 0.8);
      const auto d = random_signal(2, rng, 0.8);
      const double err = gradient_check(net, x, d, 1e-5);
      CAPTURE(arch_id(c.arch));
      CAPTURE(seed);
      CHECK(err < c.tolerance);
    }
  }
}

TEST_CASE("gradient checks cover deep stacks") {
  std::mt19937_64 rng(11);
  DeepSpec cvfnn;
  cvfnn.arch = ArchKind::CVFNN;
  cvfnn.inputs = 2;
  cvfnn.layer_units = {3, 4, 2};
  networks::Network net = networks::build(AnySpec{cvfnn}, 2);
  CHECK(gradient_check(net, random_signal(2, rng, 0.6), random_signal(2, rng, 0.6), 1e-5) < 1e-5);

  DeepSpec ptrbf;
  ptrbf.arch = ArchKind::PTRBF;
  ptrbf.inputs = 2;
  ptrbf.layer_units = {3, 2};
  ptrbf.bottleneck_dims = {3, 2};
  networks::Network deep_rbf = networks::build(AnySpec{ptrbf}, 2);
  CHECK(gradient_check(deep_rbf, random_signal(2, rng, 0.8), random_signal(2, rng, 0.8), 1e-5) <
        1e-5);
}

TEST_CASE("the analytic gradient vanishes at a zero-error point") {
  std::mt19937_64 rng(13);
  networks::Network net = networks::build(ShallowSpec{ArchKind::CVFNN, 2, 2, 4}, 5);
  numerics::Meter meter;
  const auto x = random_signal(2, rng);
  const auto y = networks::infer(net, x, meter);
  networks::TrainConfig unit;
  unit.learning_rate = 1.0;
  const std::vector<double> before = net.parameters();
  (void)networks::train_step(net, x, y, unit, meter);
  const std::vector<double> after = net.parameters();
  double norm = 0.0;
  for (std::size_t i = 0; i < before.size(); ++i) {
    norm += (before[i] - after[i]) * (before[i] - after[i]);
  }
  CHECK(std::sqrt(norm) < 1e-10);
}

TEST_CASE("gradient_check rejects misuse") {
  std::mt19937_64 rng(17);
  networks::Network mlmvn = networks::build(ShallowSpec{ArchKind::MLMVN, 2, 2, 2}, 1);
  const auto x = random_signal(2, rng);
  const auto d = random_signal(2, rng);
  CHECK_THROWS_AS((void)gradient_check(mlmvn, x, d, 1e-5), InvalidArgumentError);
  networks::Network ok = networks::build(ShallowSpec{ArchKind::CVFNN, 2, 2, 2}, 1);
  CHECK_THROWS_AS((void)gradient_check(ok, x, d, 1e-2), InvalidArgumentError);
}

TEST_CASE("the single complex neuron learns XOR for at least one seed") {
  bool solved = false;
  for (std::uint64_t seed = 0; seed < 10 && !solved; ++seed) {
    const XorOutcome outcome = xor_demo(seed);
    solved = outcome.accuracy == 1.0;
  }
  CHECK(solved);
}

TEST_CASE("mvn correction lands exactly over random unit-circle cases") {
  std::mt19937_64 rng(19);
  std::uniform_int_distribution<std::size_t> size(1, 16);
  std::uniform_real_distribution<double> angle(0.0, 2.0 * M_PI);
  std::uniform_real_distribution<double> coef(-1.0, 1.0);
  for (int trial = 0; trial < 30; ++trial) {
    const std::size_t n = size(rng);
    networks::MvnNeuron neuron;
    for (std::size_t i = 0; i < n; ++i) {
      neuron.weights.push_back({coef(rng), coef(rng)});
    }
    neuron.bias = {coef(rng), coef(rng)};
    std::vector<ComplexScalar> x;
    for (std::size_t i = 0; i < n; ++i) {
      const double a = angle(rng);
      x.push_back({std::cos(a), std::sin(a)});
    }
    const double target_angle = angle(rng);
    const ComplexScalar d{std::cos(target_angle), std::sin(target_angle)};
    numerics::Meter meter;
    networks::mvn_correct(neuron, x, d, 1.0, meter);
    const ComplexScalar z = networks::mvn_weighted_sum(neuron, x, meter);
    CHECK(std::hypot(z.re - d.re, z.im - d.im) < 1e-9);
  }
}

TEST_CASE("use-case reproduction: 46 derived cells, 2 open") {
  const UseCaseTable table = default_use_case_table();
  CHECK(table.entries.size() == 24);
  CHECK(table.case_ids() == std::vector<std::string>{"mimo", "fbmc", "beamforming", "ofdm"});
  const ReproductionReport report = reproduce_use_cases(table);
  CHECK(report.derived_cells == 46);
  CHECK(report.matched_cells == 46);
  CHECK(report.open_cells == 2);
  CHECK(report.all_derived_match());
}

TEST_CASE("the bundled file and the embedded table agree") {
  const UseCaseTable from_file =
      load_use_case_table(std::string(CVNN_SOURCE_DIR) + "/data/use_cases.json");
  CHECK(from_file == default_use_case_table());
}

TEST_CASE("table loading failure modes") {
  CHECK_THROWS_AS((void)load_use_case_table("does_not_exist.json"), IoError);
  CHECK_THROWS_AS((void)parse_use_case_table("{not json"), InvalidArgumentError);
  CHECK_THROWS_AS((void)parse_use_case_table(R"({"use_cases": [], "extra": 1})"),
                  InvalidArgumentError);
}

TEST_CASE("an edited expected value is reported as a mismatch") {
  UseCaseTable table = default_use_case_table();
  for (auto& entry : table.entries) {
    if (entry.status == UseCaseStatus::Derived) {
      entry.expected_training += 1;
      break;
    }
  }
  const ReproductionReport report = reproduce_use_cases(table);
  CHECK(!report.all_derived_match());
  CHECK(report.matched_cells == report.derived_cells - 1);
}

TEST_CASE("empirical slopes recover the tabulated orders") {
  const AsymptoteFit linear =
      empirical_asymptote(ArchKind::SCFNN, AsymptoticRegime::ShallowNDominant, Mode::Training);
  CHECK(linear.order == 1);
  CHECK(std::abs(linear.slope - 1.0) <= 0.05);

  const AsymptoteFit quad =
      empirical_asymptote(ArchKind::MLMVN, AsymptoticRegime::DeepNDominant, Mode::Inference);
  CHECK(quad.order == 2);
  CHECK(std::abs(quad.slope - 2.0) <= 0.05);

  const AsymptoteFit cubic =
      empirical_asymptote(ArchKind::PTRBF, AsymptoticRegime::DeepBalanced, Mode::Training);
  CHECK(cubic.order == 3);
  CHECK(std::abs(cubic.slope - 3.0) <= 0.05);

  CHECK_THROWS_AS(
      (void)empirical_asymptote(ArchKind::CRBF, AsymptoticRegime::DeepBalanced, Mode::Training),
      NotApplicableError);
}
