#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <random>

#include <cvnn/networks.hpp>

using namespace cvnn;
using namespace cvnn::cost_model;
using namespace cvnn::networks;
using cvnn::numerics::ComplexScalar;
using cvnn::numerics::Meter;
using cvnn::numerics::Phase;

namespace {

std::vector<ComplexScalar> signal(std::initializer_list<double> parts) {
  std::vector<ComplexScalar> out;
  for (auto it = parts.begin(); it != parts.end(); it += 2) {
    out.push_back({*it, *(it + 1)});
  }
  return out;
}

std::vector<ComplexScalar> random_signal(std::size_t length, std::mt19937_64& rng) {
  std::uniform_real_distribution<double> dist(-1.0, 1.0);
  std::vector<ComplexScalar> out(length);
  for (auto& v : out) {
    const double re = dist(rng);
    const double im = dist(rng);
    v = {re, im};
  }
  return out;
}

std::uint64_t metered_infer(Network& net, std::mt19937_64& rng) {
  Meter meter;
  std::vector<ComplexScalar> x = random_signal(net.input_size(), rng);
  (void)infer(net, x, meter);
  return meter.counter().grand_total();
}

struct TrainDelta {
  std::uint64_t total;
  std::uint64_t forward;
};

TrainDelta metered_train(Network& net, std::mt19937_64& rng) {
  Meter meter;
  std::vector<ComplexScalar> x = random_signal(net.input_size(), rng);
  std::vector<ComplexScalar> d = random_signal(net.output_size(), rng);
  (void)train_step(net, x, d, TrainConfig{}, meter);
  return {meter.counter().grand_total(), meter.counter().phase_total(Phase::Forward)};
}

}  // namespace

TEST_CASE("build produces the contracted shapes deterministically") {
  const ShallowSpec spec{ArchKind::CVFNN, 2, 1, 3};
  const Network a = build(spec, 0);
  const Network b = build(spec, 0);
  const auto& layers = std::get<PerceptronState>(a.state).layers;
  REQUIRE(layers.size() == 2);
  CHECK(layers[0].weights.rows() == 3);
  CHECK(layers[0].weights.cols() == 2);
  CHECK(layers[1].weights.rows() == 1);
  CHECK(layers[1].weights.cols() == 3);
  CHECK(a.parameters() == b.parameters());
  const Network c = build(spec, 1);
  CHECK(a.parameters() != c.parameters());

  const Network rbf = build(ShallowSpec{ArchKind::CRBF, 3, 2, 4}, 7);
  const auto& crbf = std::get<CrbfState>(rbf.state);
  REQUIRE(crbf.width_sq.size() == 4);
  for (double w : crbf.width_sq) {
    CHECK(w > 0.0);
  }
}

TEST_CASE("deep specs for C-RBF and FC-RBF are rejected at build") {
  DeepSpec bad;
  bad.arch = ArchKind::CRBF;
  bad.inputs = 2;
  bad.layer_units = {3, 2};
  CHECK_THROWS_AS((void)build(AnySpec{bad}, 0), NotApplicableError);
}

TEST_CASE("identical runs give identical outputs and counts") {
  for (ArchKind arch : all_archs()) {
    const ShallowSpec spec{arch, 3, 2, 5};
    Network n1 = build(spec, 42);
    Network n2 = build(spec, 42);
    std::mt19937_64 rng1(9), rng2(9);
    Meter m1, m2;
    const auto x1 = random_signal(3, rng1);
    const auto x2 = random_signal(3, rng2);
    const auto y1 = infer(n1, x1, m1);
    const auto y2 = infer(n2, x2, m2);
    CHECK(y1 == y2);
    CHECK(m1.counter() == m2.counter());
  }
}

TEST_CASE("metered inference equals the closed form") {
  std::mt19937_64 rng(17);
  // the pinned beamforming point
  Network big = build(ShallowSpec{ArchKind::CVFNN, 6, 3, 97}, 5);
  CHECK(metered_infer(big, rng) == 3492);
  // hidden-layer share alone: 97x6 complex products
  {
    Meter meter;
    const auto x = random_signal(6, rng);
    (void)infer(big, x, meter);
    using cvnn::numerics::MultKind;
    CHECK(meter.counter().occurrences(Phase::Forward, MultKind::ComplexTimesComplex) ==
          97 * 6 + 3 * 97);
  }
  // small C-RBF: N (2P + 2R + 1) = 3 * 7
  Network crbf = build(ShallowSpec{ArchKind::CRBF, 2, 1, 3}, 5);
  CHECK(metered_infer(crbf, rng) == 21);
  // every architecture on a batch of random small specs
  std::uniform_int_distribution<std::uint64_t> dim(1, 8);
  for (ArchKind arch : all_archs()) {
    for (int i = 0; i < 20; ++i) {
      const ShallowSpec spec{arch, dim(rng), dim(rng), dim(rng)};
      Network net = build(spec, 100 + static_cast<std::uint64_t>(i));
      CHECK(metered_infer(net, rng) == shallow_cost(spec, Mode::Inference));
    }
  }
}

TEST_CASE("metered training equals the closed form, forward share included") {
  std::mt19937_64 rng(23);
  Network tiny = build(ShallowSpec{ArchKind::CVFNN, 1, 1, 1}, 1);
  const TrainDelta tiny_delta = metered_train(tiny, rng);
  CHECK(tiny_delta.total == 36);

  Network ptrbf = build(ShallowSpec{ArchKind::PTRBF, 6, 3, 100}, 1);
  const TrainDelta ptrbf_delta = metered_train(ptrbf, rng);
  CHECK(ptrbf_delta.total == 7212);
  CHECK(ptrbf_delta.forward == 2600);

  std::uniform_int_distribution<std::uint64_t> dim(1, 8);
  for (ArchKind arch : all_archs()) {
    for (int i = 0; i < 20; ++i) {
      const ShallowSpec spec{arch, dim(rng), dim(rng), dim(rng)};
      Network net = build(spec, 200 + static_cast<std::uint64_t>(i));
      const TrainDelta delta = metered_train(net, rng);
      CHECK(delta.total == shallow_cost(spec, Mode::Training));
      CHECK(delta.forward == shallow_cost(spec, Mode::Inference));
    }
  }
}

TEST_CASE("deep stack [inputs; N, R] meters the same as the shallow network") {
  std::mt19937_64 rng(31);
  for (ArchKind arch : {ArchKind::CVFNN, ArchKind::SCFNN, ArchKind::MLMVN}) {
    DeepSpec deep;
    deep.arch = arch;
    deep.inputs = 4;
    deep.layer_units = {6, 2};
    Network deep_net = build(AnySpec{deep}, 3);
    Network shallow_net = build(ShallowSpec{arch, 4, 2, 6}, 3);
    std::mt19937_64 r1(1), r2(1);
    CHECK(metered_infer(deep_net, r1) == metered_infer(shallow_net, r2));
    const TrainDelta d1 = metered_train(deep_net, r1);
    const TrainDelta d2 = metered_train(shallow_net, r2);
    CHECK(d1.total == d2.total);
    CHECK(d1.forward == d2.forward);
  }
}

TEST_CASE("inference meters only the forward phase") {
  std::mt19937_64 rng(37);
  Network net = build(ShallowSpec{ArchKind::MLMVN, 2, 2, 3}, 11);
  Meter meter;
  (void)infer(net, random_signal(2, rng), meter);
  CHECK(meter.counter().phase_total(Phase::BackwardDelta) == 0);
  CHECK(meter.counter().phase_total(Phase::ParameterUpdate) == 0);
  CHECK(meter.counter().phase_total(Phase::Forward) == meter.counter().grand_total());
}

TEST_CASE("MLMVN normalization shows up as squared magnitudes plus divisions") {
  using cvnn::numerics::MultKind;
  std::mt19937_64 rng(41);
  const std::uint64_t neurons = 5, outputs = 3;
  Network net = build(ShallowSpec{ArchKind::MLMVN, 4, outputs, neurons}, 2);
  Meter meter;
  (void)infer(net, random_signal(4, rng), meter);
  CHECK(meter.counter().kind_occurrences(MultKind::SquaredMagnitude) == neurons + outputs);
  CHECK(meter.counter().kind_occurrences(MultKind::RealDivision) == 2 * (neurons + outputs));
}

TEST_CASE("SCFNN with zero parameters maps everything to zero") {
  Network net = build(ShallowSpec{ArchKind::SCFNN, 3, 2, 4}, 9);
  std::vector<double> zeros(net.parameters().size(), 0.0);
  net.set_parameters(zeros);
  Meter meter;
  std::mt19937_64 rng(2);
  const auto y = infer(net, random_signal(3, rng), meter);
  for (const auto& v : y) {
    CHECK(v.re == 0.0);
    CHECK(v.im == 0.0);
  }
}

TEST_CASE("MLMVN outputs live on the unit circle") {
  std::mt19937_64 rng(43);
  for (std::uint64_t seed = 0; seed < 8; ++seed) {
    Network net = build(ShallowSpec{ArchKind::MLMVN, 3, 4, 5}, seed);
    Meter meter;
    const auto y = infer(net, random_signal(3, rng), meter);
    for (const auto& v : y) {
      CHECK(std::abs(cvnn::numerics::observe::magnitude(v) - 1.0) <= 1e-12);
    }
  }
}

TEST_CASE("C-RBF responses lie in (0, 1]") {
  // identity output layer exposes the single Gaussian response directly
  Network net = build(ShallowSpec{ArchKind::CRBF, 1, 1, 1}, 0);
  //            c_re c_im width  w_re w_im  b_re b_im
  net.set_parameters(std::vector<double>{0.0, 0.0, 1.0, 1.0, 0.0, 0.0, 0.0});
  std::mt19937_64 rng(3);
  Meter meter;
  for (int i = 0; i < 50; ++i) {
    const auto y = infer(net, random_signal(1, rng), meter);
    CHECK(y[0].re > 0.0);
    CHECK(y[0].re <= 1.0);
    CHECK(y[0].im == 0.0);
  }
  const auto at_center = infer(net, signal({0.0, 0.0}), meter);
  CHECK(at_center[0].re == doctest::Approx(1.0));
}

TEST_CASE("PT-RBF responses lie in (0, 1] per component") {
  Network net = build(ShallowSpec{ArchKind::PTRBF, 1, 1, 1}, 0);
  // centers(2) widths(2) proj(2) bias(2); identity projection, zero bias
  net.set_parameters(std::vector<double>{0.0, 0.0, 1.0, 1.0, 1.0, 0.0, 0.0, 0.0});
  std::mt19937_64 rng(4);
  Meter meter;
  for (int i = 0; i < 50; ++i) {
    const auto y = infer(net, random_signal(1, rng), meter);
    // y = response_re + i response_im under the identity projection
    CHECK(y[0].re > 0.0);
    CHECK(y[0].re <= 1.0);
    CHECK(y[0].im > 0.0);
    CHECK(y[0].im <= 1.0);
  }
}

TEST_CASE("a perfect target is a fixed point of training") {
  std::mt19937_64 rng(53);
  for (ArchKind arch : all_archs()) {
    Network net = build(ShallowSpec{arch, 2, 2, 3}, 77);
    const auto x = random_signal(2, rng);
    Meter meter;
    const auto y = infer(net, x, meter);
    const std::vector<double> before = net.parameters();
    (void)train_step(net, x, y, TrainConfig{}, meter);
    CHECK(net.parameters() == before);
  }
}

TEST_CASE("repeated steps on one sample reduce the loss") {
  Network net = build(ShallowSpec{ArchKind::CVFNN, 2, 2, 3}, 8);
  std::mt19937_64 rng(61);
  const auto x = random_signal(2, rng);
  const auto d = random_signal(2, rng);
  TrainConfig config;
  config.learning_rate = 0.01;
  Meter meter;
  std::vector<double> losses;
  for (int i = 0; i < 100; ++i) {
    losses.push_back(train_step(net, x, d, config, meter));
  }
  for (std::size_t i = 10; i + 1 < losses.size(); ++i) {
    CHECK(losses[i + 1] <= losses[i] + 1e-12);
  }
  CHECK(losses.back() < losses.front());
}

TEST_CASE("dimension mismatches are rejected") {
  Network net = build(ShallowSpec{ArchKind::CVFNN, 3, 2, 4}, 0);
  std::mt19937_64 rng(5);
  Meter meter;
  auto short_x = random_signal(2, rng);
  CHECK_THROWS_AS((void)infer(net, short_x, meter), InvalidArgumentError);
  auto x = random_signal(3, rng);
  auto bad_d = random_signal(3, rng);
  CHECK_THROWS_AS((void)train_step(net, x, bad_d, TrainConfig{}, meter), InvalidArgumentError);
}

TEST_CASE("training rates must be positive and finite") {
  TrainConfig config;
  config.learning_rate = -0.5;
  CHECK_THROWS_AS(config.validate(), InvalidArgumentError);
  config.learning_rate = 0.1;
  config.width_rate = 0.0;
  CHECK_THROWS_AS(config.validate(), InvalidArgumentError);
}

TEST_CASE("non-finite data is rejected through the loss guard") {
  Network net = build(ShallowSpec{ArchKind::CRBF, 1, 1, 2}, 0);
  const std::vector<ComplexScalar> x = {{0.5, -0.5}};
  const std::vector<ComplexScalar> d = {
      {std::numeric_limits<double>::infinity(), 0.0}};
  Meter meter;
  CHECK_THROWS_AS((void)train_step(net, x, d, TrainConfig{}, meter), InvalidArgumentError);
}

TEST_CASE("parameter vectors round-trip and reject bad lengths") {
  Network net = build(ShallowSpec{ArchKind::FCRBF, 2, 2, 3}, 19);
  const std::vector<double> flat = net.parameters();
  Network copy = build(ShallowSpec{ArchKind::FCRBF, 2, 2, 3}, 20);
  copy.set_parameters(flat);
  CHECK(copy.parameters() == flat);
  std::vector<double> wrong(flat.begin(), flat.end() - 1);
  CHECK_THROWS_AS(copy.set_parameters(wrong), InvalidArgumentError);
}

TEST_CASE("one unit-rate correction lands the weighted sum on the target") {
  MvnNeuron neuron;
  neuron.weights = {{0.3, -0.7}, {1.1, 0.2}};
  neuron.bias = {-0.4, 0.9};
  const std::vector<ComplexScalar> x = {{1.0, 0.0}, {0.0, 1.0}};
  const ComplexScalar d{-1.0, 0.0};
  Meter meter;
  mvn_correct(neuron, x, d, 1.0, meter);
  const ComplexScalar corrected = mvn_weighted_sum(neuron, x, meter);
  CHECK(std::abs(corrected.re - d.re) < 1e-9);
  CHECK(std::abs(corrected.im - d.im) < 1e-9);
  // metered: two forward sums (4 each), one division, one scaling, two updates
  CHECK(meter.counter().grand_total() == 8 + 1 + 2 + 8 + 8);
}

TEST_CASE("a zero correction leaves the neuron unchanged") {
  MvnNeuron neuron;
  neuron.weights = {{0.5, 0.5}};
  neuron.bias = {0.25, 0.0};
  const std::vector<ComplexScalar> x = {{0.0, 1.0}};
  Meter meter;
  const ComplexScalar z = mvn_weighted_sum(neuron, x, meter);
  mvn_correct(neuron, x, z, 1.0, meter);
  CHECK(neuron.weights[0] == ComplexScalar{0.5, 0.5});
  CHECK(neuron.bias == ComplexScalar{0.25, 0.0});
}

TEST_CASE("off-circle inputs void the exactness contract but still execute") {
  MvnNeuron neuron;
  neuron.weights = {{0.2, 0.1}, {-0.3, 0.4}};
  neuron.bias = {0.0, 0.0};
  const std::vector<ComplexScalar> x = {{2.0, 0.0}, {0.0, 1.0}};  // |x_0| = 2
  const ComplexScalar d{0.0, 1.0};
  Meter meter;
  mvn_correct(neuron, x, d, 1.0, meter);
  const ComplexScalar corrected = mvn_weighted_sum(neuron, x, meter);
  CHECK(std::abs(corrected.re - d.re) + std::abs(corrected.im - d.im) > 1e-6);
}
