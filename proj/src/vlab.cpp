#include "monolab/vlab.hpp"

#include "monolab/errors.hpp"

#include <algorithm>
#include <cmath>
#include <set>
#include <sstream>
#include <stdexcept>

namespace monolab {

BreakpointSystem BreakpointSystem::dyadic(std::size_t k) {
  std::vector<Rational> points;
  points.push_back(Rational(0));
  for (long level = 1; points.size() < k + 1; ++level) {
    const long den = 1L << level;
    for (long num = -(den - 1); num <= den - 1 && points.size() < k + 1; num += 2)
      points.emplace_back(num, den);
  }
  return from_points(std::move(points));
}

BreakpointSystem BreakpointSystem::from_points(std::vector<Rational> pts) {
  BreakpointSystem bp;
  bp.points = std::move(pts);
  bp.sorted = bp.points;
  std::sort(bp.sorted.begin(), bp.sorted.end());
  bp.validate();
  return bp;
}

void BreakpointSystem::validate() const {
  if (points.empty()) throw std::invalid_argument("breakpoint system needs a_0");
  std::set<Rational> seen;
  for (const auto& a : points) {
    if (a <= -1 || a >= 1)
      throw std::invalid_argument("breakpoints must lie in (-1, 1)");
    if (!seen.insert(a).second)
      throw std::invalid_argument("breakpoints must be distinct");
  }
}

std::size_t BreakpointSystem::piece_of(double x) const {
  std::size_t piece = 0;
  for (const auto& b : sorted) {
    if (x < to_double(b)) break;
    ++piece;
  }
  return piece;
}

std::size_t BreakpointSystem::order_at_sorted(std::size_t s) const {
  for (std::size_t i = 0; i < points.size(); ++i)
    if (points[i] == sorted[s]) return i;
  throw std::logic_error("sorted breakpoint not among the marked points");
}

namespace {

double poly_eval(const std::vector<double>& coeffs, double x) {
  double acc = 0.0;
  for (std::size_t t = coeffs.size(); t-- > 0;) acc = acc * x + coeffs[t];
  return acc;
}

// q-th derivative coefficients (ascending powers).
std::vector<double> poly_derivative(std::vector<double> coeffs, std::size_t q) {
  for (std::size_t round = 0; round < q; ++round) {
    if (coeffs.size() <= 1) return {0.0};
    std::vector<double> next(coeffs.size() - 1);
    for (std::size_t t = 1; t < coeffs.size(); ++t)
      next[t - 1] = coeffs[t] * static_cast<double>(t);
    coeffs = std::move(next);
  }
  return coeffs;
}

// falling factorial t (t-1) ... (t-q+1)
Rational falling(long t, long q) {
  Rational acc(1);
  for (long s = 0; s < q; ++s) acc *= Rational(t - s);
  return acc;
}

} // namespace

double VElement::piece_deriv(std::size_t piece, std::size_t q, double x) const {
  return poly_eval(poly_derivative(pieces[piece], q), x);
}

double VElement::eval(double x) const { return piece_deriv(bp.piece_of(x), 0, x); }

double VElement::deriv(std::size_t q, double x) const {
  return piece_deriv(bp.piece_of(x), q, x);
}

bool VElement::validate(double tol, std::string* why) const {
  if (pieces.size() != bp.piece_count()) {
    if (why) *why = "piece count mismatch";
    return false;
  }
  for (std::size_t s = 0; s < bp.sorted.size(); ++s) {
    const double a = to_double(bp.sorted[s]);
    const std::size_t order = bp.order_at_sorted(s);
    for (std::size_t q = 0; q <= order; ++q) {
      const double left = piece_deriv(s, q, a);
      const double right = piece_deriv(s + 1, q, a);
      if (std::abs(left - right) > tol * (1.0 + std::abs(left))) {
        if (why) {
          std::ostringstream oss;
          oss << "order-" << q << " mismatch at marked point " << order;
          *why = oss.str();
        }
        return false;
      }
    }
  }
  return true;
}

VElement operator+(const VElement& a, const VElement& b) {
  if (a.bp.points != b.bp.points)
    throw std::invalid_argument("VElement addition needs matching breakpoints");
  VElement out;
  out.bp = a.bp;
  out.degree = std::max(a.degree, b.degree);
  out.pieces.assign(a.pieces.size(), std::vector<double>(out.degree + 1, 0.0));
  for (std::size_t piece = 0; piece < out.pieces.size(); ++piece) {
    for (std::size_t t = 0; t < a.pieces[piece].size(); ++t)
      out.pieces[piece][t] += a.pieces[piece][t];
    for (std::size_t t = 0; t < b.pieces[piece].size(); ++t)
      out.pieces[piece][t] += b.pieces[piece][t];
  }
  return out;
}

namespace {

using RationalMatrix = std::vector<std::vector<Rational>>;

// Exact row reduction; returns pivot columns, mutates M into reduced form.
std::vector<std::size_t> exact_rref(RationalMatrix& M, std::size_t cols) {
  std::vector<std::size_t> pivot_cols;
  std::size_t pivot_row = 0;
  for (std::size_t col = 0; col < cols && pivot_row < M.size(); ++col) {
    std::size_t found = M.size();
    for (std::size_t r = pivot_row; r < M.size(); ++r)
      if (M[r][col] != 0) {
        found = r;
        break;
      }
    if (found == M.size()) continue;
    std::swap(M[pivot_row], M[found]);
    const Rational inv = Rational(1) / M[pivot_row][col];
    for (auto& x : M[pivot_row]) x *= inv;
    for (std::size_t r = 0; r < M.size(); ++r) {
      if (r == pivot_row || M[r][col] == 0) continue;
      const Rational factor = M[r][col];
      for (std::size_t c = col; c < cols; ++c) M[r][c] -= factor * M[pivot_row][c];
    }
    pivot_cols.push_back(col);
    ++pivot_row;
  }
  return pivot_cols;
}

// Matching constraint rows of the space, exact.
RationalMatrix constraint_rows(const BreakpointSystem& bp, std::size_t piece_degree) {
  const std::size_t per_piece = piece_degree + 1;
  const std::size_t ambient = bp.piece_count() * per_piece;
  RationalMatrix rows;
  for (std::size_t s = 0; s < bp.sorted.size(); ++s) {
    const Rational& a = bp.sorted[s];
    const std::size_t order = bp.order_at_sorted(s);
    for (std::size_t q = 0; q <= order; ++q) {
      std::vector<Rational> row(ambient, Rational(0));
      for (std::size_t t = q; t <= piece_degree; ++t) {
        const Rational weight = falling(static_cast<long>(t), static_cast<long>(q)) *
                                pow_int(a, static_cast<long>(t - q));
        row[s * per_piece + t] += weight;
        row[(s + 1) * per_piece + t] -= weight;
      }
      rows.push_back(std::move(row));
    }
  }
  return rows;
}

// Exact null-space basis columns of the constraint system.
RationalMatrix exact_null_basis(const BreakpointSystem& bp, std::size_t piece_degree,
                                std::size_t* codim_out) {
  const std::size_t ambient = bp.piece_count() * (piece_degree + 1);
  RationalMatrix rows = constraint_rows(bp, piece_degree);
  const std::size_t expected_codim = rows.size();
  RationalMatrix rref = rows;
  const auto pivot_cols = exact_rref(rref, ambient);
  if (pivot_cols.size() != expected_codim)
    throw std::invalid_argument(
        "w_basis: piece degree too small, constraint matrix is rank-deficient");
  std::vector<bool> is_pivot(ambient, false);
  for (auto c : pivot_cols) is_pivot[c] = true;
  RationalMatrix columns;
  for (std::size_t fc = 0; fc < ambient; ++fc) {
    if (is_pivot[fc]) continue;
    std::vector<Rational> column(ambient, Rational(0));
    column[fc] = 1;
    for (std::size_t r = 0; r < pivot_cols.size(); ++r)
      column[pivot_cols[r]] = -rref[r][fc];
    columns.push_back(std::move(column));
  }
  if (codim_out) *codim_out = expected_codim;
  return columns;
}

} // namespace

WBasis w_basis(const BreakpointSystem& bp, std::size_t piece_degree) {
  const std::size_t per_piece = piece_degree + 1;
  const std::size_t ambient = bp.piece_count() * per_piece;

  WBasis wb;
  wb.ambient = ambient;
  const RationalMatrix columns = exact_null_basis(bp, piece_degree, &wb.codim);

  wb.basis = Eigen::MatrixXd::Zero(ambient, columns.size());
  for (std::size_t v = 0; v < columns.size(); ++v)
    for (std::size_t c = 0; c < ambient; ++c) wb.basis(c, v) = to_double(columns[v][c]);
  // Orthonormalize for numerical sanity; the span is unchanged.
  Eigen::HouseholderQR<Eigen::MatrixXd> qr(wb.basis);
  wb.basis = Eigen::MatrixXd(qr.householderQ()) *
             Eigen::MatrixXd::Identity(ambient, columns.size());

  const RationalMatrix rows = constraint_rows(bp, piece_degree);

  wb.constraints = Eigen::MatrixXd::Zero(rows.size(), ambient);
  for (std::size_t r = 0; r < rows.size(); ++r)
    for (std::size_t c = 0; c < ambient; ++c)
      wb.constraints(r, c) = to_double(rows[r][c]);
  Eigen::JacobiSVD<Eigen::MatrixXd> svd(wb.constraints);
  const auto& sv = svd.singularValues();
  const double cutoff = 1e-8 * std::max(1.0, sv.size() > 0 ? sv(0) : 0.0);
  wb.numeric_rank = 0;
  for (Eigen::Index t = 0; t < sv.size(); ++t)
    if (sv(t) > cutoff) ++wb.numeric_rank;
  return wb;
}

VElement element_from_coefficients(const BreakpointSystem& bp, std::size_t piece_degree,
                                   const Eigen::VectorXd& coeffs) {
  const std::size_t per_piece = piece_degree + 1;
  if (static_cast<std::size_t>(coeffs.size()) != bp.piece_count() * per_piece)
    throw std::invalid_argument("coefficient vector has the wrong dimension");
  VElement out;
  out.bp = bp;
  out.degree = piece_degree;
  out.pieces.assign(bp.piece_count(), std::vector<double>(per_piece, 0.0));
  for (std::size_t piece = 0; piece < bp.piece_count(); ++piece)
    for (std::size_t t = 0; t < per_piece; ++t)
      out.pieces[piece][t] = coeffs(piece * per_piece + t);
  return out;
}

VElement element_from_w(const WBasis& wb, const BreakpointSystem& bp,
                        std::size_t piece_degree, const Eigen::VectorXd& w_coords) {
  if (w_coords.size() != wb.basis.cols())
    throw std::invalid_argument("W coordinate dimension mismatch");
  return element_from_coefficients(bp, piece_degree, wb.basis * w_coords);
}

std::vector<double> one_sided_jet(const VElement& f, const Rational& a, std::size_t p,
                                  int side) {
  if (a <= -1 || a >= 1) throw std::invalid_argument("point outside (-1, 1)");
  const double ax = to_double(a);
  std::size_t piece;
  const auto& sorted = f.bp.sorted;
  const auto it = std::find(sorted.begin(), sorted.end(), a);
  if (it == sorted.end()) {
    piece = f.bp.piece_of(ax);
  } else {
    const std::size_t s = static_cast<std::size_t>(it - sorted.begin());
    piece = side < 0 ? s : s + 1;
  }
  std::vector<double> jet;
  jet.reserve(p + 1);
  for (std::size_t q = 0; q <= p; ++q) jet.push_back(f.piece_deriv(piece, q, ax));
  return jet;
}

namespace {

std::vector<double> real_poly_roots(const std::vector<double>& coeffs) {
  // Trim negligible leading coefficients.
  double scale = 0.0;
  for (double c : coeffs) scale = std::max(scale, std::abs(c));
  if (scale == 0.0) return {};
  std::size_t deg = coeffs.size() - 1;
  while (deg > 0 && std::abs(coeffs[deg]) <= 1e-14 * scale) --deg;
  if (deg == 0) return {};
  Eigen::MatrixXd companion = Eigen::MatrixXd::Zero(deg, deg);
  for (std::size_t r = 1; r < deg; ++r) companion(r, r - 1) = 1.0;
  for (std::size_t r = 0; r < deg; ++r)
    companion(r, deg - 1) = -coeffs[r] / coeffs[deg];
  Eigen::EigenSolver<Eigen::MatrixXd> solver(companion);
  std::vector<double> roots;
  for (Eigen::Index t = 0; t < solver.eigenvalues().size(); ++t) {
    const auto z = solver.eigenvalues()(t);
    if (std::abs(z.imag()) <= 1e-9 * (1.0 + std::abs(z.real())))
      roots.push_back(z.real());
  }
  return roots;
}

} // namespace

double seminorm(const VElement& f, double lo, double hi, std::size_t p) {
  if (lo > hi) throw std::invalid_argument("seminorm: empty interval");
  if (lo <= -1.0 || hi >= 1.0)
    throw std::invalid_argument("seminorm: interval must sit inside (-1, 1)");

  if (lo == hi) {
    for (const auto& b : f.bp.sorted)
      if (std::abs(to_double(b) - lo) <= 1e-15) return 0.0;  // K inside S
    double best = 0.0;
    const std::size_t piece = f.bp.piece_of(lo);
    for (std::size_t q = 0; q <= p; ++q)
      best = std::max(best, std::abs(f.piece_deriv(piece, q, lo)));
    return best;
  }

  double best = 0.0;
  for (std::size_t piece = 0; piece < f.bp.piece_count(); ++piece) {
    const double left =
        piece == 0 ? -1.0 : to_double(f.bp.sorted[piece - 1]);
    const double right =
        piece == f.bp.piece_count() - 1 ? 1.0 : to_double(f.bp.sorted[piece]);
    const double u = std::max(lo, left);
    const double v = std::min(hi, right);
    if (u > v) continue;
    for (std::size_t q = 0; q <= p; ++q) {
      const auto dq = poly_derivative(f.pieces[piece], q);
      best = std::max(best, std::abs(poly_eval(dq, u)));
      best = std::max(best, std::abs(poly_eval(dq, v)));
      for (double root : real_poly_roots(poly_derivative(dq, 1)))
        if (root > u && root < v)
          best = std::max(best, std::abs(poly_eval(dq, root)));
    }
  }
  return best;
}

std::size_t jet_tuple_length(std::size_t n, std::size_t p, std::size_t k) {
  std::size_t len = n * (p + 1) + (k + 1) * (k + 2) / 2;
  for (std::size_t i = 0; i <= k; ++i) len += 2 * (p - i);
  return len;
}

std::size_t jet_target_dim(std::size_t n, std::size_t p, std::size_t k) {
  return n + jet_tuple_length(n, p, k);
}

std::size_t w_ambient_dim(std::size_t n, std::size_t p, std::size_t k) {
  return (k + 2) * (n + 2) * (p + 1);
}

std::size_t w_codim(std::size_t k) { return (k + 1) * (k + 2) / 2; }

std::vector<double> jet_tuple(const VElement& f, const std::vector<double>& xs,
                              std::size_t n, std::size_t p, std::size_t k) {
  if (p < k) throw std::invalid_argument("jet_tuple: requires p >= k");
  if (xs.size() != n) throw std::invalid_argument("jet_tuple: wrong number of points");
  if (k + 1 > f.bp.points.size())
    throw std::invalid_argument("jet_tuple: breakpoint system too small for k");
  for (std::size_t i = 0; i < n; ++i) {
    for (std::size_t j = i + 1; j < n; ++j)
      if (xs[i] == xs[j]) throw std::invalid_argument("jet_tuple: point collision");
    for (const auto& b : f.bp.sorted)
      if (std::abs(to_double(b) - xs[i]) <= 1e-12)
        throw std::invalid_argument("jet_tuple: evaluation point on S");
  }

  std::vector<double> jet;
  jet.reserve(jet_tuple_length(n, p, k));
  for (std::size_t i = 0; i < n; ++i) {
    const std::size_t piece = f.bp.piece_of(xs[i]);
    for (std::size_t q = 0; q <= p; ++q) jet.push_back(f.piece_deriv(piece, q, xs[i]));
  }
  for (std::size_t i = 0; i <= k; ++i) {
    const auto right = one_sided_jet(f, f.bp.points[i], i, +1);
    for (std::size_t q = 0; q <= i; ++q) jet.push_back(right[q]);
  }
  for (std::size_t i = 0; i <= k; ++i) {
    const auto left = one_sided_jet(f, f.bp.points[i], p, -1);
    const auto right = one_sided_jet(f, f.bp.points[i], p, +1);
    for (std::size_t q = i + 1; q <= p; ++q) {
      jet.push_back(left[q]);
      jet.push_back(right[q]);
    }
  }
  return jet;
}

PhiJacobianResult phi_jacobian(const VElement& f, const WBasis& wb,
                               const Eigen::VectorXd& eps,
                               const std::vector<double>& xs, std::size_t n,
                               std::size_t p, std::size_t k, double fd_step) {
  const std::size_t piece_degree = wb.ambient / f.bp.piece_count() - 1;
  const std::size_t dim_w = static_cast<std::size_t>(wb.basis.cols());
  const std::size_t l = jet_target_dim(n, p, k);

  const VElement h = element_from_w(wb, f.bp, piece_degree, eps);
  const VElement g = f + h;

  PhiJacobianResult result;
  result.closed_form = Eigen::MatrixXd::Zero(l, n + dim_w);

  // W basis directions as elements, reused per row.
  std::vector<VElement> basis_elements;
  basis_elements.reserve(dim_w);
  for (std::size_t w = 0; w < dim_w; ++w)
    basis_elements.push_back(
        element_from_coefficients(f.bp, piece_degree, wb.basis.col(w)));

  std::size_t row = 0;
  for (std::size_t i = 0; i < n; ++i) result.closed_form(row++, i) = 1.0;

  // grad over (y, delta): y_i (f + h_eps)^{(q+1)}(x_i) + h_delta^{(q)}(x_i)
  for (std::size_t i = 0; i < n; ++i) {
    const std::size_t piece = f.bp.piece_of(xs[i]);
    for (std::size_t q = 0; q <= p; ++q) {
      result.closed_form(row, i) = g.piece_deriv(piece, q + 1, xs[i]);
      for (std::size_t w = 0; w < dim_w; ++w)
        result.closed_form(row, n + w) =
            basis_elements[w].piece_deriv(piece, q, xs[i]);
      ++row;
    }
  }
  for (std::size_t i = 0; i <= k; ++i) {
    for (std::size_t q = 0; q <= i; ++q) {
      for (std::size_t w = 0; w < dim_w; ++w)
        result.closed_form(row, n + w) =
            one_sided_jet(basis_elements[w], f.bp.points[i], q, +1)[q];
      ++row;
    }
  }
  for (std::size_t i = 0; i <= k; ++i) {
    for (std::size_t q = i + 1; q <= p; ++q) {
      for (int side : {-1, +1}) {
        for (std::size_t w = 0; w < dim_w; ++w)
          result.closed_form(row, n + w) =
              one_sided_jet(basis_elements[w], f.bp.points[i], q, side)[q];
        ++row;
      }
    }
  }

  // Central differences of Phi(x, eps) = (x, jet(f + h_eps)(x)).
  auto phi_value = [&](const std::vector<double>& x,
                       const Eigen::VectorXd& e) -> std::vector<double> {
    const VElement sum = f + element_from_w(wb, f.bp, piece_degree, e);
    std::vector<double> out = x;
    const auto jet = jet_tuple(sum, x, n, p, k);
    out.insert(out.end(), jet.begin(), jet.end());
    return out;
  };

  result.finite_diff = Eigen::MatrixXd::Zero(l, n + dim_w);
  for (std::size_t c = 0; c < n + dim_w; ++c) {
    std::vector<double> xhi = xs, xlo = xs;
    Eigen::VectorXd ehi = eps, elo = eps;
    if (c < n) {
      xhi[c] += fd_step;
      xlo[c] -= fd_step;
    } else {
      ehi(c - n) += fd_step;
      elo(c - n) -= fd_step;
    }
    const auto vhi = phi_value(xhi, ehi);
    const auto vlo = phi_value(xlo, elo);
    for (std::size_t r = 0; r < l; ++r)
      result.finite_diff(r, c) = (vhi[r] - vlo[r]) / (2.0 * fd_step);
  }

  result.max_rel_err = 0.0;
  for (std::size_t r = 0; r < l; ++r)
    for (std::size_t c = 0; c < n + dim_w; ++c) {
      const double closed = result.closed_form(r, c);
      const double fd = result.finite_diff(r, c);
      result.max_rel_err = std::max(result.max_rel_err,
                                    std::abs(closed - fd) / (1.0 + std::abs(closed)));
    }

  // Row-normalized rank: the raw rows mix factorial scales across derivative
  // orders, which squeezes honest singular values; genuine deficiency would sit
  // at machine-noise level, far below this cutoff.
  Eigen::MatrixXd scaled = result.closed_form;
  for (Eigen::Index r = 0; r < scaled.rows(); ++r) {
    const double norm = scaled.row(r).norm();
    if (norm > 0) scaled.row(r) /= norm;
  }
  Eigen::JacobiSVD<Eigen::MatrixXd> svd(scaled);
  const auto& sv = svd.singularValues();
  // The cutoff is backed by jet_functional_exact_rank: the functional family is
  // provably full rank, so anything below this level is rounding noise.
  const double cutoff = 1e-12 * std::max(1.0, sv.size() > 0 ? sv(0) : 0.0);
  result.rank = 0;
  for (Eigen::Index t = 0; t < sv.size(); ++t)
    if (sv(t) > cutoff) ++result.rank;
  return result;
}

std::size_t jet_functional_exact_rank(const BreakpointSystem& bp,
                                      std::size_t piece_degree,
                                      const std::vector<Rational>& xs, std::size_t n,
                                      std::size_t p, std::size_t k) {
  if (xs.size() != n) throw std::invalid_argument("wrong number of points");
  const std::size_t per_piece = piece_degree + 1;
  const std::size_t ambient = bp.piece_count() * per_piece;
  const RationalMatrix basis = exact_null_basis(bp, piece_degree, nullptr);

  auto exact_piece_of = [&](const Rational& x) {
    std::size_t piece = 0;
    for (const auto& b : bp.sorted) {
      if (x < b) break;
      ++piece;
    }
    return piece;
  };
  auto functional_row = [&](std::size_t piece, const Rational& point, std::size_t q) {
    std::vector<Rational> row(ambient, Rational(0));
    for (std::size_t t = q; t <= piece_degree; ++t)
      row[piece * per_piece + t] = falling(static_cast<long>(t), static_cast<long>(q)) *
                                   pow_int(point, static_cast<long>(t - q));
    return row;
  };

  RationalMatrix rows;
  for (std::size_t i = 0; i < n; ++i)
    for (std::size_t q = 0; q <= p; ++q)
      rows.push_back(functional_row(exact_piece_of(xs[i]), xs[i], q));
  for (std::size_t i = 0; i <= k; ++i) {
    const auto it = std::find(bp.sorted.begin(), bp.sorted.end(), bp.points[i]);
    const std::size_t s = static_cast<std::size_t>(it - bp.sorted.begin());
    for (std::size_t q = 0; q <= i; ++q)
      rows.push_back(functional_row(s + 1, bp.points[i], q));
  }
  for (std::size_t i = 0; i <= k; ++i) {
    const auto it = std::find(bp.sorted.begin(), bp.sorted.end(), bp.points[i]);
    const std::size_t s = static_cast<std::size_t>(it - bp.sorted.begin());
    for (std::size_t q = i + 1; q <= p; ++q) {
      rows.push_back(functional_row(s, bp.points[i], q));
      rows.push_back(functional_row(s + 1, bp.points[i], q));
    }
  }

  // Restrict the functionals to W and row-reduce exactly.
  RationalMatrix restricted(rows.size(), std::vector<Rational>(basis.size(), Rational(0)));
  for (std::size_t r = 0; r < rows.size(); ++r)
    for (std::size_t w = 0; w < basis.size(); ++w) {
      Rational acc(0);
      for (std::size_t c = 0; c < ambient; ++c)
        if (rows[r][c] != 0 && basis[w][c] != 0) acc += rows[r][c] * basis[w][c];
      restricted[r][w] = std::move(acc);
    }
  return exact_rref(restricted, basis.size()).size();
}

double JetPolynomial::eval(const std::vector<double>& point) const {
  double acc = 0.0;
  for (const auto& [exps, coeff] : terms) {
    double term = to_double(coeff);
    for (std::size_t v = 0; v < exps.size(); ++v)
      for (unsigned e = 0; e < exps[v]; ++e) term *= point[v];
    acc += term;
  }
  return acc;
}

std::vector<GridViolation> avoidance_check(const VElement& f,
                                           const std::vector<JetPolynomial>& X,
                                           std::size_t n, std::size_t p, std::size_t k,
                                           std::size_t grid_per_dim, double tol) {
  std::vector<GridViolation> violations;
  if (grid_per_dim == 0 || n == 0) return violations;
  const double margin = 0.05;
  std::vector<double> axis;
  for (std::size_t t = 0; t < grid_per_dim; ++t) {
    const double u = grid_per_dim == 1 ? 0.5
                                       : static_cast<double>(t) / (grid_per_dim - 1);
    double x = -1.0 + margin + (2.0 - 2.0 * margin) * u;
    bool near_break = false;
    for (const auto& b : f.bp.sorted)
      if (std::abs(to_double(b) - x) <= 1e-6) near_break = true;
    if (!near_break) axis.push_back(x);
  }

  std::vector<std::size_t> index(n, 0);
  for (;;) {
    std::vector<double> xs(n);
    for (std::size_t v = 0; v < n; ++v) xs[v] = axis[index[v]];
    bool collision = false;
    for (std::size_t i = 0; i < n && !collision; ++i)
      for (std::size_t j = i + 1; j < n; ++j)
        if (std::abs(xs[i] - xs[j]) <= 1e-9) collision = true;
    if (!collision) {
      std::vector<double> point = xs;
      const auto jet = jet_tuple(f, xs, n, p, k);
      point.insert(point.end(), jet.begin(), jet.end());
      bool all_vanish = !X.empty();
      for (const auto& poly : X)
        if (std::abs(poly.eval(point)) > tol) {
          all_vanish = false;
          break;
        }
      if (all_vanish) violations.push_back(GridViolation{xs, point});
    }
    std::size_t v = 0;
    while (v < n && ++index[v] == axis.size()) index[v++] = 0;
    if (v == n) break;
  }
  return violations;
}

double phi_rescale(double x) { return x / std::sqrt(1.0 + x * x); }

double eval_composed_phi(const VElement& f, double x) {
  return f.eval(phi_rescale(x));
}

double GluedGerm::eval(double x) const { return deriv(0, x); }

double GluedGerm::deriv(std::size_t q, double x) const {
  const double a = to_double(center);
  const bool on_f_side = side > 0 ? x >= a : x <= a;
  if (on_f_side) {
    if (q == 0) return f->eval(x);
    return f->deriv(q, x);
  }
  const auto dq = poly_derivative(poly, q);
  return poly_eval(dq, x - a);
}

GluedGerm glue_at(const VElement& f, const Rational& a, std::size_t order, int side) {
  GluedGerm germ;
  germ.center = a;
  germ.side = side;
  germ.f = &f;
  const auto jet = one_sided_jet(f, a, order, side);
  germ.poly.assign(order + 1, 0.0);
  double factorial = 1.0;
  for (std::size_t q = 0; q <= order; ++q) {
    if (q > 0) factorial *= static_cast<double>(q);
    germ.poly[q] = jet[q] / factorial;
  }
  return germ;
}

} // namespace monolab
