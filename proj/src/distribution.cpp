#include "addq/distribution.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>
#include <stdexcept>
#include <string>

namespace addq {

namespace {

constexpr double kRenormalizeTolerance = 1e-12;
constexpr double kDriftLimit = 1e-6;
constexpr double kQuantileTolerance = 1e-12;

template <typename Visitor>
void for_each_atom(const FiniteDistribution& d, Visitor&& visit) {
  if (const auto* c = std::get_if<CategoricalDist>(&d)) {
    const auto w = c->weights();
    for (int i = 0; i < c->size(); ++i) visit(c->support().atom(i), w[i]);
  } else {
    const auto& q = std::get<QuantileDist>(d);
    const double w = 1.0 / q.size();
    for (double x : q.locations()) visit(x, w);
  }
}

}  // namespace

Support::Support(double theta_min, double theta_max, int atoms)
    : theta_min_(theta_min), theta_max_(theta_max), atoms_(atoms) {
  if (!(theta_min < theta_max))
    throw std::invalid_argument("Support: theta_min must be < theta_max");
  if (atoms < 2) throw std::invalid_argument("Support: need at least 2 atoms");
}

double Support::atom(int i) const {
  const double n = atoms_ - 1;
  return (theta_min_ * (n - i) + theta_max_ * i) / n;
}

void normalize_weights(std::span<double> weights) {
  double total = 0.0;
  for (double& w : weights) {
    if (w < 0.0) {
      // round-off from (1 - alpha) * w can leave a denormal below zero
      if (w > -kRenormalizeTolerance) {
        w = 0.0;
      } else {
        throw std::logic_error("negative probability weight " + std::to_string(w));
      }
    }
    total += w;
  }
  const double drift = std::abs(total - 1.0);
  if (drift > kDriftLimit)
    throw std::logic_error("probability weights sum to " + std::to_string(total));
  if (drift > kRenormalizeTolerance)
    for (double& w : weights) w /= total;
}

void normalize_weights(AtomList& atoms) {
  std::vector<double> w(atoms.size());
  std::transform(atoms.begin(), atoms.end(), w.begin(), [](const Atom& a) { return a.weight; });
  normalize_weights(w);
  for (std::size_t i = 0; i < atoms.size(); ++i) atoms[i].weight = w[i];
}

CategoricalDist::CategoricalDist(Support support, std::vector<double> weights)
    : support_(support), weights_(std::move(weights)) {
  if (static_cast<int>(weights_.size()) != support_.size())
    throw std::invalid_argument("CategoricalDist: weight count does not match support");
  normalize_weights(weights_);
}

CategoricalDist CategoricalDist::point_mass(const Support& support, double location) {
  return project_categorical(AtomList{{location, 1.0}}, support);
}

QuantileDist::QuantileDist(std::vector<double> locations) : locations_(std::move(locations)) {
  if (locations_.empty()) throw std::invalid_argument("QuantileDist: need at least 1 atom");
  std::sort(locations_.begin(), locations_.end());
}

QuantileDist QuantileDist::point_mass(double location, int atoms) {
  return QuantileDist(std::vector<double>(atoms, location));
}

AtomList to_atoms(const FiniteDistribution& d) {
  AtomList out;
  for_each_atom(d, [&](double x, double w) { out.push_back({x, w}); });
  return out;
}

AtomList pushforward(const AtomList& atoms, double reward, double gamma) {
  AtomList out(atoms.size());
  std::transform(atoms.begin(), atoms.end(), out.begin(), [&](const Atom& a) {
    return Atom{reward + gamma * a.location, a.weight};
  });
  return out;
}

AtomList pushforward(const FiniteDistribution& d, double reward, double gamma) {
  AtomList out;
  for_each_atom(d, [&](double x, double w) { out.push_back({reward + gamma * x, w}); });
  return out;
}

CategoricalDist project_categorical(const AtomList& atoms, const Support& support) {
  const int m = support.size();
  const double lo = support.min();
  const double hi = support.max();
  const double scale = (m - 1) / (hi - lo);
  std::vector<double> weights(m, 0.0);
  for (const Atom& a : atoms) {
    const double z = std::clamp(a.location, lo, hi);
    const double b = (z - lo) * scale;
    const int l = std::min(static_cast<int>(std::floor(b)), m - 1);
    if (l == m - 1) {
      weights[m - 1] += a.weight;
      continue;
    }
    const double frac = b - l;
    weights[l] += a.weight * (1.0 - frac);
    weights[l + 1] += a.weight * frac;
  }
  return CategoricalDist(support, std::move(weights));
}

QuantileDist project_quantile(AtomList atoms, int m) {
  if (m < 1) throw std::invalid_argument("project_quantile: m must be positive");
  if (atoms.empty()) throw std::invalid_argument("project_quantile: empty atom list");
  std::sort(atoms.begin(), atoms.end(),
            [](const Atom& x, const Atom& y) { return x.location < y.location; });
  std::vector<double> locations(m);
  std::size_t j = 0;
  double cumulative = atoms[0].weight;
  for (int i = 0; i < m; ++i) {
    const double tau = (2.0 * i + 1.0) / (2.0 * m);
    while (cumulative < tau - kQuantileTolerance && j + 1 < atoms.size())
      cumulative += atoms[++j].weight;
    locations[i] = atoms[j].location;
  }
  return QuantileDist(std::move(locations));
}

CategoricalDist mix(const CategoricalDist& a, const CategoricalDist& b, double beta) {
  if (!(a.support() == b.support()))
    throw std::invalid_argument("mixture: categorical supports differ");
  const auto wa = a.weights();
  const auto wb = b.weights();
  std::vector<double> w(wa.size());
  for (std::size_t i = 0; i < w.size(); ++i) w[i] = beta * wa[i] + (1.0 - beta) * wb[i];
  return CategoricalDist(a.support(), std::move(w));
}

AtomList mixture(const FiniteDistribution& a, const FiniteDistribution& b, double beta) {
  if (!(beta >= 0.0 && beta <= 1.0)) throw std::invalid_argument("mixture: beta outside [0,1]");
  if (a.index() != b.index())
    throw std::invalid_argument("mixture: representations differ");
  if (const auto* ca = std::get_if<CategoricalDist>(&a))
    return to_atoms(mix(*ca, std::get<CategoricalDist>(b), beta));

  const auto& qa = std::get<QuantileDist>(a);
  const auto& qb = std::get<QuantileDist>(b);
  AtomList out;
  out.reserve(qa.size() + qb.size());
  if (beta > 0.0)
    for (double x : qa.locations()) out.push_back({x, beta / qa.size()});
  if (beta < 1.0)
    for (double x : qb.locations()) out.push_back({x, (1.0 - beta) / qb.size()});
  return out;
}

double mean(const AtomList& atoms) {
  double m = 0.0;
  for (const Atom& a : atoms) m += a.weight * a.location;
  return m;
}

double mean(const FiniteDistribution& d) {
  double m = 0.0;
  for_each_atom(d, [&](double x, double w) { m += w * x; });
  return m;
}

double sample_variance(const AtomList& atoms) {
  const double mu = mean(atoms);
  double v = 0.0;
  for (const Atom& a : atoms) v += a.weight * (a.location - mu) * (a.location - mu);
  return v;
}

double sample_variance(const FiniteDistribution& d) {
  const double mu = mean(d);
  double v = 0.0;
  for_each_atom(d, [&](double x, double w) { v += w * (x - mu) * (x - mu); });
  return v;
}

double cramer_distance(const AtomList& a, const AtomList& b) {
  // Signed merge: +w for atoms of a, -w for atoms of b. The running sum is
  // F_a - F_b, constant between consecutive breakpoints.
  std::vector<Atom> merged;
  merged.reserve(a.size() + b.size());
  for (const Atom& x : a) merged.push_back(x);
  for (const Atom& x : b) merged.push_back({x.location, -x.weight});
  std::sort(merged.begin(), merged.end(),
            [](const Atom& x, const Atom& y) { return x.location < y.location; });
  double gap = 0.0;
  double integral = 0.0;
  for (std::size_t i = 0; i + 1 < merged.size(); ++i) {
    gap += merged[i].weight;
    integral += gap * gap * (merged[i + 1].location - merged[i].location);
  }
  return std::sqrt(integral);
}

double cramer_distance(const FiniteDistribution& a, const FiniteDistribution& b) {
  return cramer_distance(to_atoms(a), to_atoms(b));
}

}  // namespace addq
