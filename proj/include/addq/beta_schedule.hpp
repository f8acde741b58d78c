#pragma once

#include <string>
#include <string_view>
#include <vector>

namespace addq {

/// Piecewise-constant map from relative sample variance to the interpolation
/// weight beta in [0, 1] (beta = 1 is a Q-learning target, beta = 0 a double
/// Q-learning target).
///
/// Bucket i covers values up to `upper` of breakpoint i; whether `upper`
/// itself belongs to bucket i or to the next one is set per breakpoint, so
/// both "[0.75, 1.25]" style and "(0.25, 0.75)" style intervals are exact.
/// Values above the last breakpoint map to `final_beta`. A schedule without
/// breakpoints is constant.
class BetaSchedule {
 public:
  struct Breakpoint {
    double upper;
    bool upper_inclusive;
    double beta;
  };

  BetaSchedule(std::vector<Breakpoint> breakpoints, double final_beta);

  static BetaSchedule constant(double beta) { return BetaSchedule({}, beta); }

  /// Named presets: n3 (the default), a3, c3, n5, a5, c5 and their lt/rt
  /// tilted variants (ltn3, rta5, ...). Throws std::invalid_argument for
  /// unknown names.
  static BetaSchedule preset(std::string_view name);
  static const std::vector<std::string>& preset_names();

  double operator()(double relative_variance) const;

  bool is_constant() const { return breakpoints_.empty(); }
  const std::vector<Breakpoint>& breakpoints() const { return breakpoints_; }
  double final_beta() const { return final_beta_; }

 private:
  std::vector<Breakpoint> breakpoints_;
  double final_beta_;
};

}  // namespace addq
