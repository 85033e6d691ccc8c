#pragma once

#include "monolab/geometry.hpp"

#include <cstdint>
#include <vector>

namespace monolab {

/// A map eta : I_d -> R^k with series components on a purely generalized domain.
struct SeriesMap {
  VariableSignature domain;           // n = 0
  std::vector<GenSeries> components;  // each with sig == domain

  std::size_t dim() const { return domain.m; }
  std::size_t output_dim() const { return components.size(); }
  void validate() const;
  std::vector<double> eval(const std::vector<double>& x) const;
};

/// The chart map on its active coordinates: Zero-selector variables are faced
/// out; kappa records the original position of each active coordinate.
struct ChartMap {
  SeriesMap eta;
  std::vector<std::size_t> kappa;
};
ChartMap eta_from_chart(const Chart& chart);

/// Cleared-denominator Jacobian calculus. With a(x) = x_1 ... x_d the matrix
/// A = (a * d eta_i / d x_j) has series entries assembled from log-derivatives:
/// a * d eta_i / d x_j = (x_j d_j eta_i) * (a / x_j), exact. When a row
/// selection iota is supplied, A' is the square selection, B its adjugate
/// (B * A' = det(A') * Id exactly), and the kernel columns of the projection to
/// the first coordinates are the adjugate columns of index > rank.
struct ClearedJacobian {
  GenSeries a;
  std::vector<std::vector<GenSeries>> A;        // k x d
  std::vector<std::size_t> iota;                // row selection, size d (may be empty)
  std::vector<std::vector<GenSeries>> A_prime;  // d x d when iota present
  std::vector<std::vector<GenSeries>> B;        // adjugate of A_prime
  GenSeries det_A_prime;
  std::vector<std::vector<GenSeries>> kernel;   // d-l columns of length d
};

/// rank is the constant rank l of the projected differential. iota may be empty
/// for the low-dimensional special cases (d = 1, or d = 2 with one output row),
/// where the kernel has a direct cofactor form.
ClearedJacobian cleared_jacobian(const SeriesMap& eta,
                                 const std::vector<std::size_t>& iota, std::size_t rank);

/// Determinant of a square matrix of series, Laplace expansion, exact.
GenSeries series_determinant(const std::vector<std::vector<GenSeries>>& M);

/// Numeric Jacobian d eta (x) recovered from the cleared matrix as A / a.
std::vector<std::vector<double>> numeric_jacobian(const SeriesMap& eta,
                                                  const ClearedJacobian& cj,
                                                  const std::vector<double>& x);

struct RankProfile {
  bool stable = false;
  long rank = -1;
  std::vector<long> sample_ranks;
};

/// Numeric rank of the differential of the first m_split components on seeded
/// interior samples (structured midpoints first, then uniform draws).
RankProfile rank_profile(const SeriesMap& eta, std::size_t m_split, std::size_t samples,
                         std::uint64_t seed, double tol = 1e-8);

struct RefineOptions {
  std::size_t samples = 40;
  std::uint64_t seed = 0;
  double tol = 1e-8;
  std::size_t max_refine_depth = 4;
  ParamOptions param;
};

struct RefinedChart {
  Chart chart;
  ChartMap map;
  long rank = 0;
  std::vector<std::size_t> iota;  // strictly increasing witness, iota[rank-1] < m_split
};

/// Subdivides each chart (re-parametrizing with the cleared determinant family
/// as compat functions) until the projection to the first m_split coordinates
/// has constant numeric rank on samples, and finds an immersion witness iota.
std::vector<RefinedChart> refine_by_rank(const std::vector<Chart>& charts,
                                         std::size_t m_split,
                                         const RefineOptions& opt = {});

/// Fiber-cutting system in the doubled variables (x, r'):
///   Phi(x, r') = prod_i x_i (r'_i - x_i),
///   equations[t] = grad_x Phi . b_t, one per kernel column.
struct FiberCutSystem {
  VariableSignature doubled;  // 2d generalized variables
  GenSeries phi;
  std::vector<GenSeries> equations;
  std::size_t d = 0;
  std::size_t l = 0;
  GenSeries witness;  // f with grad f not orthogonal to the kernel
};

/// Requires l < d and a kernel basis in cj. The witness is the iota(l+1)-th
/// component when iota is present; for the special kernel forms it is a domain
/// coordinate paired against the kernel. Certified numerically below.
FiberCutSystem fiber_cut_equations(const SeriesMap& eta, const ClearedJacobian& cj,
                                   std::size_t l);

struct WitnessReport {
  bool ok = true;
  double min_max_dot = 0.0;  // min over samples of max_t |grad f . b_t|
  std::size_t samples = 0;
};
WitnessReport witness_certificate(const SeriesMap& eta, const ClearedJacobian& cj,
                                  const FiberCutSystem& system, std::size_t samples,
                                  std::uint64_t seed, double tol = 1e-9);

struct FiberCutReport {
  std::size_t attempted = 0;
  std::size_t solved = 0;
  std::size_t failed = 0;
  double max_discrepancy = 0.0;  // |eta(critical point) - sampled image value|
  double max_residual = 0.0;     // equation residual at the returned points
};

/// Numerically checks eta(critical set) = eta(Q cap I_{r'}) on sampled image
/// values; supports d = 1 and d = 2 with a single projected output. Solver
/// failures are reported, not fatal.
FiberCutReport verify_fiber_cut(const SeriesMap& eta, const FiberCutSystem& system,
                                const std::vector<Rational>& rprime,
                                std::size_t budget, std::uint64_t seed);

} // namespace monolab
