#pragma once

#include <cstdint>
#include <string>
#include <vector>

namespace fim {

// Per-node activation response f(y) = a*y + b mapping invested budget y to
// a seeding probability. Valid coefficients: a >= 0 and 0 <= b < 1, so f(0)
// stays a probability and saturation f(y) = 1 is reachable iff a > 0.
struct AffineActivation {
  double a = 1.0;
  double b = 0.0;

  double value(double y) const { return a * y + b; }
  double slope_at_zero() const { return a; }
  bool saturable() const { return a > 0.0; }

  // Smallest y with f(y) = 1. Only defined for a > 0.
  double inverse_at_one() const;

  void validate() const;

  friend bool operator==(const AffineActivation&,
                         const AffineActivation&) = default;
};

// Finite choice sets that per-node coefficients are drawn from.
struct CoefficientScheme {
  std::vector<double> a_choices{1.0};
  std::vector<double> b_choices{0.0};

  void validate() const;

  // Compact deterministic description, e.g. "a{0.5,1}b{0,0.2}".
  std::string label() const;
};

struct Profile {
  std::vector<AffineActivation> f;

  std::uint32_t size() const { return static_cast<std::uint32_t>(f.size()); }
  const AffineActivation& operator[](std::uint32_t v) const { return f[v]; }
};

// Draws each node's (a, b) independently and uniformly from the choice
// sets. A pure function of (scheme, n, seed).
Profile sample_profile(const CoefficientScheme& scheme, std::uint32_t n,
                       std::uint64_t seed);

// How unallocated nodes contribute to the seeding distribution.
//  SelectedOnly: only nodes with y > 0 can seed; everyone else is inert,
//    so an empty allocation yields an empty cascade.
//  GlobalBaseline: every node seeds with probability f(y), including the
//    organic baseline f(0) = b of untouched nodes.
enum class Semantics { SelectedOnly, GlobalBaseline };

std::string to_string(Semantics s);
Semantics semantics_from_string(const std::string& s);

struct Allocation {
  std::vector<double> y;
  double budget = 0.0;

  double total() const;

  // Checks y >= 0, f(y) <= 1 and sum(y) <= budget, all up to eps.
  void validate_feasible(const Profile& profile, double eps = 1e-9) const;

  // Nodes with 0 < y and f(y) < 1 (not saturated).
  std::vector<std::uint32_t> fractional_nodes(const Profile& profile,
                                              double eps = 1e-9) const;
};

// Probability that node v belongs to the initial active set.
double seed_probability(const Profile& profile, const Allocation& alloc,
                        Semantics semantics, std::uint32_t v);

// Shortest "%g"-style rendering used anywhere numbers must be stable text.
std::string format_number(double x);

}  // namespace fim
