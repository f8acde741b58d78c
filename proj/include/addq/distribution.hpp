#pragma once

#include <span>
#include <variant>
#include <vector>

namespace addq {

/// One atom of a finite atomic probability measure.
struct Atom {
  double location;
  double weight;
};

/// Arbitrary-length atomic measure; the intermediate form of every target
/// before it is projected back onto a parametrization.
using AtomList = std::vector<Atom>;

/// Evenly spaced categorical grid theta_0 < ... < theta_{m-1}.
class Support {
 public:
  Support(double theta_min, double theta_max, int atoms);

  double min() const { return theta_min_; }
  double max() const { return theta_max_; }
  int size() const { return atoms_; }
  double spacing() const { return (theta_max_ - theta_min_) / (atoms_ - 1); }

  /// Location of atom i. Computed as a convex combination of the end points so
  /// that symmetric grids put an exact zero in the middle.
  double atom(int i) const;

  bool operator==(const Support&) const = default;

 private:
  double theta_min_;
  double theta_max_;
  int atoms_;
};

/// Measure with free weights on a fixed Support.
class CategoricalDist {
 public:
  /// Weights are validated and renormalized (see normalize_weights).
  CategoricalDist(Support support, std::vector<double> weights);

  /// Projection of the point mass at `location` onto `support`.
  static CategoricalDist point_mass(const Support& support, double location);

  const Support& support() const { return support_; }
  std::span<const double> weights() const { return weights_; }
  int size() const { return support_.size(); }

 private:
  Support support_;
  std::vector<double> weights_;
};

/// Measure with m free (sorted) locations of weight 1/m each.
class QuantileDist {
 public:
  /// Locations are sorted on construction.
  explicit QuantileDist(std::vector<double> locations);

  static QuantileDist point_mass(double location, int atoms);

  std::span<const double> locations() const { return locations_; }
  int size() const { return static_cast<int>(locations_.size()); }

 private:
  std::vector<double> locations_;
};

using FiniteDistribution = std::variant<CategoricalDist, QuantileDist>;

/// Checks non-negativity and the unit-mass condition. Renormalizes in place if
/// the sum drifted by more than 1e-12; throws std::logic_error if it drifted
/// by more than 1e-6.
void normalize_weights(std::span<double> weights);
void normalize_weights(AtomList& atoms);

AtomList to_atoms(const FiniteDistribution& d);

/// Law of r + gamma * Z for Z ~ d. Atom count and weights are unchanged.
AtomList pushforward(const AtomList& atoms, double reward, double gamma);
AtomList pushforward(const FiniteDistribution& d, double reward, double gamma);

/// Cramer projection: atoms are clamped to [theta_0, theta_{m-1}] and each
/// atom's mass is split linearly between its two neighbouring grid points.
CategoricalDist project_categorical(const AtomList& atoms, const Support& support);

/// Quantile projection at the mid-levels tau_i = (2i - 1) / (2m). The quantile
/// at level tau is the smallest location with cumulative weight >= tau.
QuantileDist project_quantile(AtomList atoms, int m);

/// beta * a + (1 - beta) * b.
///
/// Categorical inputs must share a support; the result has one atom per grid
/// point. Quantile inputs are concatenated with weights beta/m and
/// (1 - beta)/m; atoms that would carry zero weight are dropped.
AtomList mixture(const FiniteDistribution& a, const FiniteDistribution& b, double beta);

/// Componentwise beta * a + (1 - beta) * b on a shared support.
CategoricalDist mix(const CategoricalDist& a, const CategoricalDist& b, double beta);

double mean(const AtomList& atoms);
double mean(const FiniteDistribution& d);

/// Weighted second central moment sum_i w_i (a_i - mean)^2.
double sample_variance(const AtomList& atoms);
double sample_variance(const FiniteDistribution& d);

/// l2 distance between CDFs, integrated exactly over the merged breakpoints.
double cramer_distance(const AtomList& a, const AtomList& b);
double cramer_distance(const FiniteDistribution& a, const FiniteDistribution& b);

}  // namespace addq
