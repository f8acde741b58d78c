#include "addq/beta_schedule.hpp"

#include <array>
#include <map>
#include <stdexcept>

namespace addq {

namespace {

// beta_low : x < t1,  beta_mid : t1 <= x <= t2,  beta_high : x > t2
BetaSchedule three_interval(double t1, double t2, double low, double mid, double high) {
  return BetaSchedule({{t1, false, low}, {t2, true, mid}}, high);
}

// x <= t1,  t1 < x < t2,  t2 <= x <= t3,  t3 < x < t4,  x >= t4
BetaSchedule five_interval(std::array<double, 4> t, std::array<double, 5> beta) {
  return BetaSchedule({{t[0], true, beta[0]},
                       {t[1], false, beta[1]},
                       {t[2], true, beta[2]},
                       {t[3], false, beta[3]}},
                      beta[4]);
}

const std::map<std::string, BetaSchedule, std::less<>>& presets() {
  static const std::map<std::string, BetaSchedule, std::less<>> table = [] {
    constexpr std::array<double, 5> neutral5 = {1.0, 0.75, 0.5, 0.25, 0.0};
    constexpr std::array<double, 5> conservative5 = {0.7, 0.6, 0.5, 0.4, 0.3};
    std::map<std::string, BetaSchedule, std::less<>> m;
    m.emplace("n3", three_interval(0.75, 1.25, 0.75, 0.5, 0.25));
    m.emplace("ltn3", three_interval(1.25, 1.75, 0.75, 0.5, 0.25));
    m.emplace("rtn3", three_interval(0.25, 0.75, 0.75, 0.5, 0.25));
    m.emplace("a3", three_interval(0.99, 1.01, 1.0, 0.5, 0.0));
    m.emplace("lta3", three_interval(1.49, 1.51, 1.0, 0.5, 0.0));
    m.emplace("rta3", three_interval(0.49, 0.51, 1.0, 0.5, 0.0));
    m.emplace("c3", three_interval(0.6, 1.4, 0.6, 0.5, 0.4));
    m.emplace("ltc3", three_interval(1.1, 1.9, 0.6, 0.5, 0.4));
    m.emplace("rtc3", three_interval(0.1, 0.9, 0.6, 0.5, 0.4));
    m.emplace("n5", five_interval({0.25, 0.75, 1.25, 1.75}, neutral5));
    m.emplace("ltn5", five_interval({0.75, 1.25, 1.75, 2.25}, neutral5));
    m.emplace("rtn5", five_interval({-0.25, 0.25, 0.75, 1.25}, neutral5));
    m.emplace("a5", five_interval({0.99, 0.995, 1.005, 1.01}, neutral5));
    m.emplace("lta5", five_interval({1.49, 1.495, 1.505, 1.51}, neutral5));
    m.emplace("rta5", five_interval({0.49, 0.495, 0.505, 0.51}, neutral5));
    m.emplace("c5", five_interval({0.1, 0.7, 1.3, 1.9}, conservative5));
    m.emplace("ltc5", five_interval({0.6, 1.2, 1.8, 2.4}, conservative5));
    m.emplace("rtc5", five_interval({-0.4, 0.2, 0.8, 1.4}, conservative5));
    return m;
  }();
  return table;
}

bool valid_beta(double b) { return b >= 0.0 && b <= 1.0; }

}  // namespace

BetaSchedule::BetaSchedule(std::vector<Breakpoint> breakpoints, double final_beta)
    : breakpoints_(std::move(breakpoints)), final_beta_(final_beta) {
  if (!valid_beta(final_beta_)) throw std::invalid_argument("BetaSchedule: beta outside [0,1]");
  for (std::size_t i = 0; i < breakpoints_.size(); ++i) {
    if (!valid_beta(breakpoints_[i].beta))
      throw std::invalid_argument("BetaSchedule: beta outside [0,1]");
    if (i > 0 && !(breakpoints_[i].upper > breakpoints_[i - 1].upper))
      throw std::invalid_argument("BetaSchedule: thresholds must be strictly increasing");
  }
}

BetaSchedule BetaSchedule::preset(std::string_view name) {
  const auto& table = presets();
  const auto it = table.find(name);
  if (it == table.end())
    throw std::invalid_argument("unknown beta schedule '" + std::string(name) + "'");
  return it->second;
}

const std::vector<std::string>& BetaSchedule::preset_names() {
  static const std::vector<std::string> names = {"n3",   "a3",   "c3",   "ltn3", "lta3", "ltc3",
                                                 "rtn3", "rta3", "rtc3", "n5",   "a5",   "c5",
                                                 "ltn5", "lta5", "ltc5", "rtn5", "rta5", "rtc5"};
  return names;
}

double BetaSchedule::operator()(double relative_variance) const {
  for (const Breakpoint& b : breakpoints_) {
    if (relative_variance < b.upper || (b.upper_inclusive && relative_variance == b.upper))
      return b.beta;
  }
  return final_beta_;
}

}  // namespace addq
