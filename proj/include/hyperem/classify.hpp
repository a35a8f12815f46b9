#pragma once

#include <optional>
#include <string>
#include <utility>
#include <vector>

#include "hyperem/diagnostics.hpp"
#include "hyperem/geometry.hpp"
#include "hyperem/ode.hpp"

namespace hyperem {

enum class SignClass { PositiveForever, NegativeForever, SignChanging, OscillatoryInfinite };
enum class SeparatrixSide { Below, Above, AtSeparatrix, NotApplicable };

const char* to_string(SignClass s);
const char* to_string(SeparatrixSide s);

struct Report {
  Params params;
  Regime regime;
  SignClass sign_class = SignClass::PositiveForever;
  std::size_t zero_count = 0;  // zeros found within [0, r_end]
  DecayEstimate decay;
  SeparatrixSide separatrix_side = SeparatrixSide::NotApplicable;
  std::vector<Event> zeros;
  double r_max_used = 0.0;
  double r_end = 0.0;
  double tol_used = 0.0;
  Termination termination = Termination::ReachedRmax;
  /// True when the end state proves that no further zero can occur.
  bool zero_count_final = false;
};

struct ZeroCount {
  std::size_t k = 0;
  std::vector<Event> zeros;
};

ZeroCount count_zeros(const Trajectory& traj);

/// For p >= 1 and curvature -c^2: u u' < 0, u'/u > -(n-1)c/2 and |u|^{p-1} < (n-1)^2 c^2/4
/// at s imply that u keeps its sign and |u| keeps decreasing for all larger r.
bool zero_finality_certificate(int n, double p, const State& s, double c = 1.0);

/// Radii where u_A - u_B changes sign on the common range (optionally cut to a window).
std::vector<double> intersections(const Trajectory& a, const Trajectory& b,
                                  std::optional<std::pair<double, double>> window = std::nullopt);
std::size_t count_intersections(const Trajectory& a, const Trajectory& b,
                                std::optional<std::pair<double, double>> window = std::nullopt);

Report classify_solution(const Params& params, double r_max = 50.0, double tol = 1e-10);

enum class Side { Below, Above, Undecided };
const char* to_string(Side s);

struct SideDecision {
  Side side = Side::Undecided;
  double r_max_used = 0.0;
  std::string reason;  // "zero", "certificate", "plateau" or "undecided"
};

/// Shooting discriminator against the separatrix, growing R_max from 40 up to 640.
SideDecision separatrix_side(int n, double p, double alpha, double tol = 1e-10);

struct BisectionStep {
  int iter = 0;
  double lo = 0.0;
  double hi = 0.0;
  double alpha = 0.0;
  std::string decision;
};

struct SeparatrixResult {
  double alpha_star = 0.0;
  double lo = 0.0;
  double hi = 0.0;
  int probes = 0;
  bool converged = false;
  std::vector<BisectionStep> trace;
};

/// Bisection for U(0) in the subcritical regime. A failing bracket is widened
/// (hi doubled, lo halved) up to 2^60.
SeparatrixResult find_separatrix(int n, double p, double lo = 1.0, double hi = 2.0,
                                 double tol_alpha = 1e-4, double tol = 1e-10);

struct FirstZeroRow {
  double alpha = 0.0;
  std::optional<double> r_alpha;  // empty: no zero up to r_max_used
  double r_max_used = 0.0;
};

/// First zero of u_alpha for each alpha (sorted by alpha). R_max grows from 40 to 640.
std::vector<FirstZeroRow> first_zero_map(int n, double p, std::vector<double> alphas,
                                         double tol = 1e-10);

struct ZeroCountProbe {
  double alpha = 0.0;
  std::size_t zeros = 0;
  bool final = false;  // count certified, not just a lower bound at r_max
};

/// Zeros of u_alpha, integrating until the count is certified final, reaches cap, or
/// R_max = 640.
ZeroCountProbe probe_zero_count(int n, double p, double alpha, std::size_t cap, double tol);

struct ThresholdResult {
  std::size_t k = 0;
  bool ambiguous = false;
  double alpha_k = 0.0;  // inf{alpha : u_alpha has >= k zeros}
  double lo = 0.0;
  double hi = 0.0;
  std::vector<ZeroCountProbe> monotonicity_probes;
  std::string note;
};

/// Exploratory: assumes the zero count is nondecreasing in alpha over the bracket,
/// checks that on 8 probes and reports ambiguity if it fails.
ThresholdResult zero_count_threshold(int n, double p, std::size_t k, double alpha_hi,
                                     double tol_alpha = 1e-4, double tol = 1e-10);

}  // namespace hyperem
