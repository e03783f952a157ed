#include "fim/activation.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>

#include "fim/errors.hpp"
#include "fim/rng.hpp"

namespace fim {

void AffineActivation::validate() const {
  if (!std::isfinite(a) || a < 0.0) {
    throw ConfigError("activation slope must be finite and >= 0");
  }
  if (!std::isfinite(b) || b < 0.0 || b >= 1.0) {
    throw ConfigError("activation intercept must lie in [0, 1)");
  }
}

double AffineActivation::inverse_at_one() const {
  if (a <= 0.0) {
    throw ConfigError("activation with zero slope never saturates");
  }
  return (1.0 - b) / a;
}

void CoefficientScheme::validate() const {
  if (a_choices.empty() || b_choices.empty()) {
    throw ConfigError("coefficient choice sets must be non-empty");
  }
  for (double a : a_choices) AffineActivation{a, 0.0}.validate();
  for (double b : b_choices) AffineActivation{1.0, b}.validate();
}

std::string format_number(double x) {
  char buf[64];
  std::snprintf(buf, sizeof(buf), "%.10g", x);
  return buf;
}

namespace {

// Semicolon-separated so labels stay a single csv field.
std::string join_numbers(const std::vector<double>& xs) {
  std::string out;
  for (std::size_t i = 0; i < xs.size(); ++i) {
    if (i) out += ';';
    out += format_number(xs[i]);
  }
  return out;
}

std::vector<double> sorted_unique(std::vector<double> xs) {
  std::sort(xs.begin(), xs.end());
  xs.erase(std::unique(xs.begin(), xs.end()), xs.end());
  return xs;
}

}  // namespace

std::string CoefficientScheme::label() const {
  return "a{" + join_numbers(sorted_unique(a_choices)) + "}b{" +
         join_numbers(sorted_unique(b_choices)) + "}";
}

Profile sample_profile(const CoefficientScheme& scheme, std::uint32_t n,
                       std::uint64_t seed) {
  scheme.validate();
  auto a_set = sorted_unique(scheme.a_choices);
  auto b_set = sorted_unique(scheme.b_choices);
  Profile profile;
  profile.f.resize(n);
  for (std::uint32_t v = 0; v < n; ++v) {
    std::uint64_t ha = hash_combine(derive_seed(seed, kTagProfile, 0), v);
    std::uint64_t hb = hash_combine(derive_seed(seed, kTagProfile, 1), v);
    auto pick = [](std::uint64_t h, const std::vector<double>& xs) {
      auto idx = static_cast<std::size_t>(
          (static_cast<unsigned __int128>(h) * xs.size()) >> 64);
      return xs[idx];
    };
    profile.f[v] = AffineActivation{pick(ha, a_set), pick(hb, b_set)};
  }
  return profile;
}

std::string to_string(Semantics s) {
  return s == Semantics::SelectedOnly ? "selected-only" : "global-baseline";
}

Semantics semantics_from_string(const std::string& s) {
  if (s == "selected-only") return Semantics::SelectedOnly;
  if (s == "global-baseline") return Semantics::GlobalBaseline;
  throw ConfigError("unknown semantics '" + s +
                    "' (expected selected-only or global-baseline)");
}

double Allocation::total() const {
  double sum = 0.0;
  for (double v : y) sum += v;
  return sum;
}

void Allocation::validate_feasible(const Profile& profile, double eps) const {
  if (y.size() != profile.f.size()) {
    throw ConfigError("allocation and profile node counts differ");
  }
  for (std::size_t v = 0; v < y.size(); ++v) {
    if (!std::isfinite(y[v]) || y[v] < -eps) {
      throw ConfigError("allocation for node " + std::to_string(v) +
                        " is negative");
    }
    if (profile.f[v].value(y[v]) > 1.0 + eps) {
      throw ConfigError("allocation for node " + std::to_string(v) +
                        " pushes activation probability above 1");
    }
  }
  if (total() > budget + eps) {
    throw ConfigError("allocation exceeds budget");
  }
}

std::vector<std::uint32_t> Allocation::fractional_nodes(const Profile& profile,
                                                        double eps) const {
  std::vector<std::uint32_t> out;
  for (std::uint32_t v = 0; v < y.size(); ++v) {
    if (y[v] > eps && profile.f[v].value(y[v]) < 1.0 - eps) out.push_back(v);
  }
  return out;
}

double seed_probability(const Profile& profile, const Allocation& alloc,
                        Semantics semantics, std::uint32_t v) {
  if (semantics == Semantics::SelectedOnly && alloc.y[v] <= 0.0) return 0.0;
  return std::clamp(profile.f[v].value(alloc.y[v]), 0.0, 1.0);
}

}  // namespace fim
