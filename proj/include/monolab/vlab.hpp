#pragma once

#include "monolab/rational.hpp"

#include <Eigen/Dense>

#include <cstdint>
#include <map>
#include <string>
#include <vector>

namespace monolab {

/// Marked points a_0..a_k of (-1, 1), kept both in enumeration order (which
/// fixes the matching order at each point: the germ at a_i must be C^i) and
/// sorted. Pieces are [b_{i-1}, b_i) with b_{-1} = -1 and b_{k+1} = 1.
struct BreakpointSystem {
  std::vector<Rational> points;  // a_0..a_k, distinct, in (-1,1)
  std::vector<Rational> sorted;  // b_0 < ... < b_k

  /// First k+1 entries of the canonical dense sequence: dyadic rationals of
  /// (-1,1) enumerated by denominator then numerator (0, -1/2, 1/2, -3/4, ...).
  static BreakpointSystem dyadic(std::size_t k);
  static BreakpointSystem from_points(std::vector<Rational> points);

  std::size_t k() const { return points.size() - 1; }
  std::size_t piece_count() const { return points.size() + 1; }
  /// Piece containing x (right-open intervals).
  std::size_t piece_of(double x) const;
  /// Matching order required at sorted breakpoint s (its enumeration index).
  std::size_t order_at_sorted(std::size_t s) const;
  void validate() const;
};

/// Piecewise polynomial on (-1, 1) over a breakpoint system; coefficients are
/// ascending powers per piece. Members of the space satisfy continuity at every
/// breakpoint and C^i matching at a_i.
struct VElement {
  BreakpointSystem bp;
  std::size_t degree = 0;
  std::vector<std::vector<double>> pieces;  // piece_count x (degree+1)

  double eval(double x) const;
  double deriv(std::size_t q, double x) const;
  /// Derivative of one piece's polynomial at x, regardless of piece bounds.
  double piece_deriv(std::size_t piece, std::size_t q, double x) const;
  /// Checks the continuity and one-sided jet matching invariants.
  bool validate(double tol = 1e-9, std::string* why = nullptr) const;
};

VElement operator+(const VElement& a, const VElement& b);

struct WBasis {
  std::size_t ambient = 0;  // (k+2) * (piece_degree+1)
  std::size_t codim = 0;    // number of independent matching constraints
  long numeric_rank = 0;    // SVD rank of the constraint matrix
  Eigen::MatrixXd basis;    // ambient x dim(W), exact null space, columns span W
  Eigen::MatrixXd constraints;  // the assembled constraint matrix (double copy)
};

/// Null-space basis of the linear constraint system (continuity + C^i matching
/// at a_i) over exact rationals; throws when the constraints are rank-deficient
/// for the given piece degree.
WBasis w_basis(const BreakpointSystem& bp, std::size_t piece_degree);

/// The element h_eps for a coordinate vector in the ambient coefficient space.
VElement element_from_coefficients(const BreakpointSystem& bp, std::size_t piece_degree,
                                   const Eigen::VectorXd& coeffs);
/// h_eps for coordinates in the W basis.
VElement element_from_w(const WBasis& wb, const BreakpointSystem& bp,
                        std::size_t piece_degree, const Eigen::VectorXd& w_coords);

/// Derivatives 0..p of the adjacent piece at a, from the requested side.
std::vector<double> one_sided_jet(const VElement& f, const Rational& a, std::size_t p,
                                  int side);

/// sup over q <= p of |f^(q)| on [lo, hi] minus the marked points; 0 when the
/// interval is a single marked point. Piece maxima via derivative root isolation.
double seminorm(const VElement& f, double lo, double hi, std::size_t p);

std::size_t jet_tuple_length(std::size_t n, std::size_t p, std::size_t k);
/// Dimension l of the jet-graph target: n + jet_tuple_length.
std::size_t jet_target_dim(std::size_t n, std::size_t p, std::size_t k);
std::size_t w_ambient_dim(std::size_t n, std::size_t p, std::size_t k);
std::size_t w_codim(std::size_t k);

/// The jet tuple in canonical order: derivatives at the x_i, then the matched
/// derivatives at a_i up to order i, then the one-sided pairs above.
std::vector<double> jet_tuple(const VElement& f, const std::vector<double>& xs,
                              std::size_t n, std::size_t p, std::size_t k);

struct PhiJacobianResult {
  Eigen::MatrixXd closed_form;  // l x (n + dim W)
  Eigen::MatrixXd finite_diff;
  double max_rel_err = 0.0;
  long rank = 0;
};

/// Jacobian of Phi(x, eps) = (x, jet(f + h_eps)(x)) from the closed-form
/// gradients, compared against central differences.
PhiJacobianResult phi_jacobian(const VElement& f, const WBasis& wb,
                               const Eigen::VectorXd& eps,
                               const std::vector<double>& xs, std::size_t n,
                               std::size_t p, std::size_t k, double fd_step = 1e-5);

/// Exact rank of the jet evaluation functionals restricted to W (independent of
/// f and eps). Full rank of the Phi Jacobian is equivalent to this equalling
/// jet_tuple_length(n, p, k); serves as the oracle behind the numeric rank.
std::size_t jet_functional_exact_rank(const BreakpointSystem& bp,
                                      std::size_t piece_degree,
                                      const std::vector<Rational>& xs, std::size_t n,
                                      std::size_t p, std::size_t k);

/// Sparse polynomial with rational coefficients in the l jet-graph coordinates.
struct JetPolynomial {
  std::map<std::vector<unsigned>, Rational> terms;  // exponent tuple -> coefficient
  double eval(const std::vector<double>& point) const;
};

struct GridViolation {
  std::vector<double> x;
  std::vector<double> jet_point;
};

/// Grid points where every defining polynomial vanishes within tol: the witness
/// list for (x, jet f(x)) lying on the algebraic set.
std::vector<GridViolation> avoidance_check(const VElement& f,
                                           const std::vector<JetPolynomial>& X,
                                           std::size_t n, std::size_t p, std::size_t k,
                                           std::size_t grid_per_dim, double tol = 1e-9);

/// phi(x) = x / sqrt(1 + x^2), the definable homeomorphism R -> (-1, 1).
double phi_rescale(double x);
/// f(phi(x)) for x anywhere on the real line.
double eval_composed_phi(const VElement& f, double x);

/// Germ agreeing with f on one side of a and polynomial on the other, matching
/// the one-sided jet to the requested order.
struct GluedGerm {
  Rational center;
  int side = +1;  // side carrying f
  std::vector<double> poly;  // ascending coefficients in (x - a)
  const VElement* f = nullptr;
  double eval(double x) const;
  double deriv(std::size_t q, double x) const;
};
GluedGerm glue_at(const VElement& f, const Rational& a, std::size_t order, int side);

} // namespace monolab
