#include <catch2/catch_amalgamated.hpp>

#include <cmath>
#include <random>
#include <vector>

#include "boxlab/channel.hpp"
#include "boxlab/dist.hpp"

using namespace boxlab;

namespace {

Dist random_dist(std::mt19937_64& rng, std::size_t n) {
  std::uniform_real_distribution<double> u(0.01, 1.0);
  std::vector<double> w(n);
  double total = 0.0;
  for (double& x : w) {
    x = u(rng);
    total += x;
  }
  for (double& x : w) x /= total;
  return Dist::from_weights_clamped(Alphabet::simple(n), std::move(w));
}

}  // namespace

TEST_CASE("dist construction and validation") {
  const Dist u = dist_new(Alphabet::simple(2), {0.5, 0.5});
  CHECK(u[0] == 0.5);
  CHECK(u[1] == 0.5);

  const Dist p = dist_new(Alphabet::simple(2), {1.0, 0.0});
  CHECK(p[0] == 1.0);

  // PR output block for x = y = 0 over (a, b).
  const Dist pr00 = dist_new(Alphabet::simple(4), {0.5, 0.0, 0.0, 0.5});
  CHECK(pr00[0] == 0.5);
  CHECK(pr00[3] == 0.5);

  CHECK_THROWS_AS(dist_new(Alphabet::simple(2), {0.6, -0.1}), NegativeWeight);
  CHECK_THROWS_AS(dist_new(Alphabet::simple(2), {0.6, 0.6}), NotNormalized);
  CHECK_THROWS_AS(dist_new(Alphabet::simple(3), {0.5, 0.5}), AlphabetMismatch);

  // Round-off negatives are clamped, not rejected.
  const Dist clamped = dist_new(Alphabet::simple(2), {1.0 + 1e-13, -1e-13});
  CHECK(clamped[1] == 0.0);
}

TEST_CASE("entropy") {
  CHECK(entropy(Dist::point(Alphabet::simple(4), 1)) == 0.0);
  CHECK(entropy(Dist::uniform(Alphabet::simple(2))) ==
        Catch::Approx(1.0).margin(1e-15));
  // Direct evaluation of -sum p log2 p for [0.25, 0.75]:
  //   2 - 0.75 * log2(3) = 0.811278124459133.
  CHECK(entropy(dist_new(Alphabet::simple(2), {0.25, 0.75})) ==
        Catch::Approx(0.811278124459133).margin(1e-12));
}

TEST_CASE("entropy of uniform matches log2(n) to 1e-12 up to 2^16") {
  for (std::size_t n : {2u, 3u, 7u, 100u, 4096u, 65536u}) {
    const double h = entropy(Dist::uniform(Alphabet::simple(n)));
    CHECK(std::abs(h - std::log2(double(n))) <= 1e-12);
  }
}

TEST_CASE("channel apply") {
  const Alphabet bit = Alphabet::simple(2);
  const Dist d = dist_new(bit, {0.3, 0.7});

  const Dist same = channel_apply(Channel::identity(bit), d);
  CHECK(same[0] == Catch::Approx(0.3).margin(1e-15));

  const Channel flip =
      Channel::deterministic(bit, bit, [](std::size_t i) { return 1 - i; });
  const Dist flipped = channel_apply(flip, d);
  CHECK(flipped[0] == Catch::Approx(0.7).margin(1e-15));
  CHECK(flipped[1] == Catch::Approx(0.3).margin(1e-15));

  const Dist q = dist_new(bit, {0.2, 0.8});
  const Dist constant_out = channel_apply(Channel::constant(bit, q), d);
  CHECK(constant_out[0] == Catch::Approx(0.2).margin(1e-15));

  CHECK_THROWS_AS(channel_apply(flip, dist_new(Alphabet::simple(3),
                                               {0.2, 0.3, 0.5})),
                  AlphabetMismatch);
}

TEST_CASE("channel validation") {
  const Alphabet bit = Alphabet::simple(2);
  CHECK_THROWS_AS(Channel(bit, bit, {0.5, 0.6, 0.5, 0.4}), NotNormalized);
  CHECK_THROWS_AS(Channel(bit, bit, {1.1, -0.1, 0.5, 0.5}), NegativeWeight);
}

TEST_CASE("tensor product") {
  const Alphabet bit = Alphabet::simple(2);
  const Dist u4 = tensor(Dist::uniform(bit), Dist::uniform(bit));
  for (std::size_t i = 0; i < 4; ++i)
    CHECK(u4[i] == Catch::Approx(0.25).margin(1e-15));
  CHECK(u4.alphabet().shape() == std::vector<std::size_t>{2, 2});

  const Dist pp = tensor(Dist::point(bit, 0), Dist::point(bit, 1));
  CHECK(pp[1] == 1.0);

  const Dist mixed = tensor(dist_new(bit, {0.5, 0.5}), dist_new(bit, {1.0, 0.0}));
  CHECK(mixed.weights() == std::vector<double>{0.5, 0.0, 0.5, 0.0});
}

TEST_CASE("marginal") {
  std::mt19937_64 rng(7);
  const Dist p = random_dist(rng, 3);
  const Dist q = random_dist(rng, 4);
  const Dist joint = tensor(p, q);

  const Dist m0 = marginal(joint, {0});
  REQUIRE(m0.size() == 3);
  for (std::size_t i = 0; i < 3; ++i)
    CHECK(m0[i] == Catch::Approx(p[i]).margin(1e-12));

  const Dist m1 = marginal(joint, {1});
  for (std::size_t j = 0; j < 4; ++j)
    CHECK(m1[j] == Catch::Approx(q[j]).margin(1e-12));

  // Keeping every factor returns the distribution unchanged.
  const Dist all = marginal(joint, {0, 1});
  CHECK(all.weights() == joint.weights());

  CHECK_THROWS_AS(marginal(p, {0}), NotProduct);
  CHECK_THROWS_AS(marginal(joint, {}), NotProduct);
  CHECK_THROWS_AS(marginal(joint, {2}), OutOfRange);
}

TEST_CASE("marginal of PR output block is unbiased") {
  // x = y = 1 block of the PR box over (a, b): [0, 1/2, 1/2, 0].
  const Dist block =
      dist_new(Alphabet::product({2, 2}), {0.0, 0.5, 0.5, 0.0});
  const Dist a_marg = marginal(block, {0});
  CHECK(a_marg[0] == Catch::Approx(0.5).margin(1e-15));
  CHECK(a_marg[1] == Catch::Approx(0.5).margin(1e-15));
}

TEST_CASE("mutual information") {
  const Alphabet bit = Alphabet::simple(2);

  // Product distributions carry no information.
  std::mt19937_64 rng(11);
  for (int rep = 0; rep < 20; ++rep) {
    const Dist joint = tensor(random_dist(rng, 3), random_dist(rng, 5));
    CHECK(mutual_information(joint) <= 1e-12);
  }

  // Perfectly correlated uniform bits share one bit.
  const Dist corr = dist_new(Alphabet::product({2, 2}), {0.5, 0.0, 0.0, 0.5});
  CHECK(mutual_information(corr) == Catch::Approx(1.0).margin(1e-12));

  // Direct evaluation for [0.4, 0.1, 0.1, 0.4]:
  //   I = 2 - H(joint) = 0.2780719051126377.
  const Dist j = dist_new(Alphabet::product({2, 2}), {0.4, 0.1, 0.1, 0.4});
  CHECK(mutual_information(j) ==
        Catch::Approx(0.2780719051126377).margin(1e-12));

  CHECK_THROWS_AS(mutual_information(Dist::uniform(bit)), NotProduct);
  CHECK_THROWS_AS(
      mutual_information(Dist::uniform(Alphabet::product({2, 2, 2}))),
      NotProduct);
}

TEST_CASE("regrouped merges factor structure") {
  const Dist d = Dist::uniform(Alphabet::product({2, 3, 4}));
  const Dist g = regrouped(d, {2, 1});
  CHECK(g.alphabet().shape() == std::vector<std::size_t>{6, 4});
  CHECK(g.weights() == d.weights());
  CHECK_THROWS_AS(regrouped(d, {2, 2}), NotProduct);
}

TEST_CASE("operations keep distributions normalized") {
  std::mt19937_64 rng(23);
  for (int rep = 0; rep < 50; ++rep) {
    const Dist p = random_dist(rng, 6);
    const Dist q = random_dist(rng, 4);
    const Dist t = tensor(p, q);
    CHECK(std::abs(kahan_total(t.weights()) - 1.0) <= 1e-9);
    const Dist m = marginal(t, {1});
    CHECK(std::abs(kahan_total(m.weights()) - 1.0) <= 1e-9);
    for (double w : m.weights()) CHECK(w >= 0.0);
  }
}

TEST_CASE("alphabet indexing is row-major with first factor slowest") {
  const Alphabet prod = Alphabet::product({2, 3});
  CHECK(prod.index_of(std::vector<std::size_t>{1, 2}) == 5);
  CHECK(prod.digits_of(4) == std::vector<std::size_t>{1, 1});
  CHECK_THROWS_AS(prod.index_of(std::vector<std::size_t>{2, 0}), OutOfRange);

  CHECK_THROWS_AS(Alphabet::with_labels({"x", "x"}), Error);
  const Alphabet labeled = Alphabet::with_labels({"heads", "tails"});
  CHECK(labeled.size() == 2);
  CHECK(labeled == Alphabet::simple(2));  // labels do not affect compatibility
}
