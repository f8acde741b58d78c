#include <algorithm>
#include <cmath>
#include <random>

#include "doctest.h"

#include "addq/distribution.hpp"

using namespace addq;

namespace {

const Support kNarrow(-3.0, 3.0, 51);

double weight_sum(std::span<const double> w) {
  double s = 0.0;
  for (double x : w) s += x;
  return s;
}

CategoricalDist random_categorical(const Support& sup, std::mt19937_64& rng) {
  std::gamma_distribution<double> g(0.5, 1.0);
  std::vector<double> w(sup.size());
  double total = 0.0;
  for (double& x : w) total += (x = g(rng));
  for (double& x : w) x /= total;
  return CategoricalDist(sup, w);
}

AtomList random_atoms(std::mt19937_64& rng, int n, double lo, double hi) {
  std::uniform_real_distribution<double> loc(lo, hi);
  std::uniform_real_distribution<double> wt(0.01, 1.0);
  AtomList atoms(n);
  double total = 0.0;
  for (Atom& a : atoms) {
    a.location = loc(rng);
    total += (a.weight = wt(rng));
  }
  for (Atom& a : atoms) a.weight /= total;
  return atoms;
}

// Riemann-sum l2 distance, independent of the breakpoint integration.
double numeric_cramer(const AtomList& a, const AtomList& b, double lo, double hi, int cells) {
  auto cdf = [](const AtomList& xs, double z) {
    double c = 0.0;
    for (const Atom& x : xs)
      if (x.location <= z) c += x.weight;
    return c;
  };
  const double h = (hi - lo) / cells;
  double integral = 0.0;
  for (int i = 0; i < cells; ++i) {
    const double z = lo + (i + 0.5) * h;
    const double d = cdf(a, z) - cdf(b, z);
    integral += d * d * h;
  }
  return std::sqrt(integral);
}

double w1(const AtomList& a, const AtomList& b) {
  std::vector<double> pts;
  for (const Atom& x : a) pts.push_back(x.location);
  for (const Atom& x : b) pts.push_back(x.location);
  std::sort(pts.begin(), pts.end());
  auto cdf = [](const AtomList& xs, double z) {
    double c = 0.0;
    for (const Atom& x : xs)
      if (x.location <= z) c += x.weight;
    return c;
  };
  double total = 0.0;
  for (std::size_t i = 0; i + 1 < pts.size(); ++i)
    total += std::abs(cdf(a, pts[i]) - cdf(b, pts[i])) * (pts[i + 1] - pts[i]);
  return total;
}

}  // namespace

TEST_CASE("support atoms are evenly spaced with an exact zero") {
  CHECK(kNarrow.spacing() == doctest::Approx(0.12).epsilon(1e-14));
  CHECK(kNarrow.atom(0) == -3.0);
  CHECK(kNarrow.atom(50) == 3.0);
  CHECK(kNarrow.atom(25) == 0.0);
  for (int i = 0; i < 51; ++i)
    CHECK(kNarrow.atom(i) == doctest::Approx(-3.0 + i * 0.12).epsilon(1e-12));
  CHECK_THROWS(Support(1.0, 1.0, 5));
  CHECK_THROWS(Support(-1.0, 1.0, 1));
}

TEST_CASE("normalize_weights") {
  std::vector<double> ok = {0.25, 0.75 + 1e-9};
  normalize_weights(ok);
  CHECK(std::abs(weight_sum(ok) - 1.0) < 1e-15);
  std::vector<double> bad = {0.5, 0.6};
  CHECK_THROWS_AS(normalize_weights(bad), std::logic_error);
  std::vector<double> neg = {1.5, -0.5};
  CHECK_THROWS(normalize_weights(neg));
}

TEST_CASE("pushforward") {
  const AtomList d0 = {{0.0, 1.0}};
  auto id = pushforward(d0, 0.0, 1.0);
  REQUIRE(id.size() == 1);
  CHECK(id[0].location == 0.0);

  auto shifted = pushforward(d0, 1.0, 0.9);
  CHECK(shifted[0].location == 1.0);

  auto two = pushforward(AtomList{{-3.0, 0.5}, {3.0, 0.5}}, 0.5, 0.9);
  REQUIRE(two.size() == 2);
  CHECK(two[0].location == doctest::Approx(-2.2));
  CHECK(two[1].location == doctest::Approx(3.2));
  CHECK(two[0].weight == 0.5);

  const FiniteDistribution cat = CategoricalDist::point_mass(kNarrow, 0.0);
  CHECK(pushforward(cat, 0.0, 0.9).size() == 51);
}

TEST_CASE("project_categorical examples") {
  const auto on_grid = project_categorical({{kNarrow.atom(7), 1.0}}, kNarrow);
  CHECK(on_grid.weights()[7] == doctest::Approx(1.0));

  const auto mid = project_categorical({{-2.94, 1.0}}, kNarrow);
  CHECK(mid.weights()[0] == doctest::Approx(0.5));
  CHECK(mid.weights()[1] == doctest::Approx(0.5));

  const auto low = project_categorical({{-7.0, 1.0}}, kNarrow);
  CHECK(low.weights()[0] == 1.0);
  const auto high = project_categorical({{9.0, 1.0}}, kNarrow);
  CHECK(high.weights()[50] == 1.0);

  const auto one = project_categorical({{1.0, 1.0}}, kNarrow);
  CHECK(kNarrow.atom(33) == doctest::Approx(0.96));
  CHECK(one.weights()[33] == doctest::Approx(2.0 / 3.0).epsilon(1e-12));
  CHECK(one.weights()[34] == doctest::Approx(1.0 / 3.0).epsilon(1e-12));
}

TEST_CASE("projection is linear, mean preserving and conserves weight") {
  std::mt19937_64 rng(11);
  std::uniform_real_distribution<double> unit(0.0, 1.0);
  for (int trial = 0; trial < 200; ++trial) {
    const AtomList a = random_atoms(rng, 1 + trial % 7, -4.0, 4.0);
    const AtomList b = random_atoms(rng, 1 + trial % 5, -4.0, 4.0);
    const double beta = unit(rng);
    AtomList mixed;
    for (Atom x : a) mixed.push_back({x.location, beta * x.weight});
    for (Atom x : b) mixed.push_back({x.location, (1 - beta) * x.weight});
    const auto pm = project_categorical(mixed, kNarrow);
    const auto pa = project_categorical(a, kNarrow);
    const auto pb = project_categorical(b, kNarrow);
    for (int i = 0; i < 51; ++i)
      CHECK(std::abs(pm.weights()[i] - (beta * pa.weights()[i] + (1 - beta) * pb.weights()[i])) <
            1e-12);
    CHECK(std::abs(weight_sum(pm.weights()) - 1.0) < 1e-12);

    const AtomList inside = random_atoms(rng, 1 + trial % 9, -3.0, 3.0);
    CHECK(std::abs(mean(project_categorical(inside, kNarrow)) - mean(inside)) < 1e-10);
  }
}

TEST_CASE("Cramer contraction witness") {
  std::mt19937_64 rng(5);
  std::uniform_real_distribution<double> rew(-1.0, 1.0);
  std::uniform_real_distribution<double> gam(0.05, 1.0);
  for (int trial = 0; trial < 300; ++trial) {
    const auto d1 = random_categorical(kNarrow, rng);
    const auto d2 = random_categorical(kNarrow, rng);
    const double r = rew(rng);
    const double g = gam(rng);
    const FiniteDistribution f1 = d1, f2 = d2;
    const FiniteDistribution t1 = project_categorical(pushforward(f1, r, g), kNarrow);
    const FiniteDistribution t2 = project_categorical(pushforward(f2, r, g), kNarrow);
    CHECK(cramer_distance(t1, t2) <= std::sqrt(g) * cramer_distance(f1, f2) + 1e-10);
  }
}

TEST_CASE("project_quantile examples") {
  const auto same = project_quantile({{-1.0, 1.0 / 3}, {0.5, 1.0 / 3}, {2.0, 1.0 / 3}}, 3);
  CHECK(std::vector<double>(same.locations().begin(), same.locations().end()) ==
        std::vector<double>{-1.0, 0.5, 2.0});
  const auto two = project_quantile({{0.0, 0.5}, {1.0, 0.5}}, 2);
  CHECK(two.locations()[0] == 0.0);
  CHECK(two.locations()[1] == 1.0);
  const auto pm = project_quantile({{5.0, 1.0}}, 3);
  for (double x : pm.locations()) CHECK(x == 5.0);
  // tau = 0.5 hits the cumulative weight 0.5 of the first atom exactly.
  const auto tie = project_quantile({{0.0, 0.5}, {1.0, 0.5}}, 1);
  CHECK(tie.locations()[0] == 0.0);
}

TEST_CASE("project_quantile minimizes W1 over equal-weight measures (brute force)") {
  std::mt19937_64 rng(3);
  for (int trial = 0; trial < 40; ++trial) {
    const int n = 1 + trial % 4;
    const int m = 1 + trial % 3;
    const AtomList atoms = random_atoms(rng, n, -2.0, 2.0);
    const auto proj = project_quantile(atoms, m);
    AtomList proj_atoms;
    for (double x : proj.locations()) proj_atoms.push_back({x, 1.0 / m});
    const double best = w1(atoms, proj_atoms);

    std::vector<double> cands;
    for (const Atom& a : atoms) cands.push_back(a.location);
    for (int i = 0; i <= 20; ++i) cands.push_back(-2.0 + 0.2 * i);
    std::vector<int> idx(m, 0);
    double brute = 1e300;
    while (true) {
      AtomList trial_atoms;
      for (int k = 0; k < m; ++k) trial_atoms.push_back({cands[idx[k]], 1.0 / m});
      brute = std::min(brute, w1(atoms, trial_atoms));
      int k = 0;
      while (k < m && ++idx[k] == static_cast<int>(cands.size())) idx[k++] = 0;
      if (k == m) break;
    }
    CHECK(best <= brute + 1e-12);
  }
}

TEST_CASE("mixture and mix") {
  const auto a = CategoricalDist::point_mass(kNarrow, kNarrow.atom(0));
  const auto b = CategoricalDist::point_mass(kNarrow, kNarrow.atom(1));
  const FiniteDistribution fa = a, fb = b;
  const auto half = mixture(fa, fb, 0.5);
  REQUIRE(half.size() == 51);
  CHECK(half[0].weight == doctest::Approx(0.5).epsilon(1e-12));
  CHECK(half[1].weight == doctest::Approx(0.5).epsilon(1e-12));
  const auto end1 = mix(a, b, 1.0);
  const auto end0 = mix(a, b, 0.0);
  CHECK(std::equal(end1.weights().begin(), end1.weights().end(), a.weights().begin()));
  CHECK(std::equal(end0.weights().begin(), end0.weights().end(), b.weights().begin()));

  const FiniteDistribution other = CategoricalDist::point_mass(Support(-1.0, 1.0, 11), 0.0);
  CHECK_THROWS(mixture(fa, other, 0.5));

  const FiniteDistribution qa = QuantileDist({0.0, 1.0});
  const FiniteDistribution qb = QuantileDist({2.0, 3.0});
  const auto qm = mixture(qa, qb, 0.25);
  REQUIRE(qm.size() == 4);
  double total = 0.0;
  for (const Atom& x : qm) total += x.weight;
  CHECK(total == doctest::Approx(1.0));
  CHECK(mixture(qa, qb, 1.0).size() == 2);
}

TEST_CASE("moments") {
  CHECK(mean(FiniteDistribution(CategoricalDist::point_mass(kNarrow, 0.0))) == 0.0);
  CHECK(mean(AtomList{{1.0, 0.25}, {3.0, 0.75}}) == doctest::Approx(2.5));
  CHECK(mean(AtomList{{-1.0, 0.5}, {1.0, 0.5}}) == 0.0);
  CHECK(sample_variance(FiniteDistribution(QuantileDist::point_mass(2.0, 5))) == 0.0);
  CHECK(sample_variance(AtomList{{-1.0, 0.5}, {1.0, 0.5}}) == doctest::Approx(1.0));
  CHECK(sample_variance(AtomList{{0.0, 0.25}, {4.0, 0.75}}) == doctest::Approx(3.0));
}

TEST_CASE("cramer_distance") {
  const AtomList d0 = {{0.0, 1.0}};
  const AtomList d1 = {{1.0, 1.0}};
  CHECK(cramer_distance(d0, d0) == 0.0);
  CHECK(cramer_distance(d0, d1) == doctest::Approx(1.0));
  std::mt19937_64 rng(9);
  for (int trial = 0; trial < 20; ++trial) {
    const AtomList a = random_atoms(rng, 1 + trial % 6, -2.0, 2.0);
    const AtomList b = random_atoms(rng, 1 + trial % 4, -2.0, 2.0);
    CHECK(cramer_distance(a, b) == doctest::Approx(cramer_distance(b, a)).epsilon(1e-12));
    CHECK(cramer_distance(a, b) ==
          doctest::Approx(numeric_cramer(a, b, -2.5, 2.5, 200000)).epsilon(1e-3));
  }
}
