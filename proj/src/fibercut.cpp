#include "monolab/fibercut.hpp"

#include "monolab/errors.hpp"

#include <Eigen/Dense>

#include <algorithm>
#include <cmath>
#include <functional>
#include <limits>

namespace monolab {

void SeriesMap::validate() const {
  domain.validate();
  if (domain.n != 0)
    throw SignatureError("series map domains must be purely generalized");
  for (const auto& f : components)
    if (!(f.sig == domain)) throw SignatureError("series map component signature mismatch");
}

std::vector<double> SeriesMap::eval(const std::vector<double>& x) const {
  std::vector<double> out;
  out.reserve(components.size());
  for (const auto& f : components) out.push_back(eval_numeric_unchecked(f, x));
  return out;
}

ChartMap eta_from_chart(const Chart& chart) {
  ChartMap out;
  const VariableSignature& leaf = chart.chain.source_sig();
  if (leaf.n != 0)
    throw SignatureError("eta_from_chart: chart must be purely generalized");

  std::vector<GenSeries> pulled;
  for (std::size_t t = 0; t < chart.chain.target_sig().total(); ++t) {
    GenSeries coord = GenSeries::coordinate(chart.chain.target_sig(), t);
    pulled.push_back(apply_transform(coord, chart.chain));
  }
  for (std::size_t v = 0; v < leaf.total(); ++v)
    if (chart.domain.selectors[v] != Selector::Zero) out.kappa.push_back(v);

  // Face out the Zero selectors, descending so indices stay valid.
  for (std::size_t v = leaf.total(); v-- > 0;) {
    if (chart.domain.selectors[v] != Selector::Zero) continue;
    for (auto& f : pulled)
      f = apply_transform(f, ElementaryTransform::face_zero(f.sig, v));
  }
  out.eta.components = std::move(pulled);
  if (out.eta.components.empty()) {
    out.eta.domain.m = out.kappa.size();
    out.eta.domain.n = 0;
  } else {
    out.eta.domain = out.eta.components.front().sig;
  }
  // Active-coordinate radii come from the certified domain.
  out.eta.domain.polyradius.clear();
  for (const auto v : out.kappa)
    out.eta.domain.polyradius.push_back(chart.domain.sig.polyradius[v]);
  for (auto& f : out.eta.components) f.sig = out.eta.domain;
  out.eta.validate();
  return out;
}

namespace {

GenSeries coordinate_product(const VariableSignature& sig) {
  ExponentVector ones = ExponentVector::zeros(sig.total());
  for (std::size_t v = 0; v < sig.m; ++v) ones[v] = 1;
  return GenSeries::monomial(sig, ones, Rational(1));
}

// a / x_j as a monomial (all other coordinates).
GenSeries cleared_cofactor_monomial(const VariableSignature& sig, std::size_t j) {
  ExponentVector e = ExponentVector::zeros(sig.total());
  for (std::size_t v = 0; v < sig.m; ++v)
    if (v != j) e[v] = 1;
  return GenSeries::monomial(sig, e, Rational(1));
}

ClearedJacobian cleared_base_matrix(const SeriesMap& eta);

std::vector<std::vector<GenSeries>> minor_of(
    const std::vector<std::vector<GenSeries>>& M, std::size_t row, std::size_t col) {
  std::vector<std::vector<GenSeries>> out;
  for (std::size_t r = 0; r < M.size(); ++r) {
    if (r == row) continue;
    std::vector<GenSeries> line;
    for (std::size_t c = 0; c < M.size(); ++c)
      if (c != col) line.push_back(M[r][c]);
    out.push_back(std::move(line));
  }
  return out;
}

} // namespace

GenSeries series_determinant(const std::vector<std::vector<GenSeries>>& M) {
  const std::size_t d = M.size();
  if (d == 0) throw std::invalid_argument("determinant of an empty matrix");
  if (d == 1) return M[0][0];
  GenSeries det = GenSeries::zero(M[0][0].sig);
  for (std::size_t c = 0; c < d; ++c) {
    GenSeries term = M[0][c] * series_determinant(minor_of(M, 0, c));
    det = c % 2 == 0 ? det + term : det - term;
  }
  return det;
}

ClearedJacobian cleared_jacobian(const SeriesMap& eta,
                                 const std::vector<std::size_t>& iota,
                                 std::size_t rank) {
  eta.validate();
  const std::size_t d = eta.dim();
  const std::size_t k = eta.output_dim();
  ClearedJacobian cj;
  cj.a = coordinate_product(eta.domain);
  cj.A.assign(k, std::vector<GenSeries>(d, GenSeries::zero(eta.domain)));
  for (std::size_t r = 0; r < k; ++r)
    for (std::size_t c = 0; c < d; ++c)
      cj.A[r][c] = log_derivative(eta.components[r], c) *
                   cleared_cofactor_monomial(eta.domain, c);

  if (!iota.empty()) {
    if (iota.size() != d)
      throw std::invalid_argument("iota must select d rows");
    for (std::size_t t = 0; t + 1 < iota.size(); ++t)
      if (iota[t] >= iota[t + 1])
        throw std::invalid_argument("iota must be strictly increasing");
    if (iota.back() >= k) throw std::invalid_argument("iota row out of range");
    cj.iota = iota;
    cj.A_prime.assign(d, std::vector<GenSeries>(d, GenSeries::zero(eta.domain)));
    for (std::size_t r = 0; r < d; ++r)
      for (std::size_t c = 0; c < d; ++c) cj.A_prime[r][c] = cj.A[iota[r]][c];
    cj.det_A_prime = series_determinant(cj.A_prime);
    // Adjugate: B[r][c] = (-1)^(r+c) det(minor of A' without row c, column r).
    cj.B.assign(d, std::vector<GenSeries>(d, GenSeries::zero(eta.domain)));
    if (d == 1) {
      cj.B[0][0] = GenSeries::constant(eta.domain, Rational(1));
    } else {
      for (std::size_t r = 0; r < d; ++r)
        for (std::size_t c = 0; c < d; ++c) {
          GenSeries cof = series_determinant(minor_of(cj.A_prime, c, r));
          cj.B[r][c] = ((r + c) % 2 == 0) ? cof : -cof;
        }
    }
    for (std::size_t col = rank; col < d; ++col) {
      std::vector<GenSeries> column;
      for (std::size_t r = 0; r < d; ++r) column.push_back(cj.B[r][col]);
      cj.kernel.push_back(std::move(column));
    }
    return cj;
  }

  // Special forms used by the fiber-cutting examples.
  if (d == 1 && rank == 0) {
    cj.kernel.push_back({GenSeries::constant(eta.domain, Rational(1))});
    return cj;
  }
  if (d == 2 && rank == 1 && k >= 1) {
    // Kernel of a single cleared gradient row: (A_{r,2}, -A_{r,1}).
    for (std::size_t r = 0; r < k; ++r) {
      if (cj.A[r][0].is_zero() && cj.A[r][1].is_zero()) continue;
      cj.kernel.push_back({cj.A[r][1], -cj.A[r][0]});
      return cj;
    }
  }
  throw std::invalid_argument("cleared_jacobian: no kernel construction available");
}

std::vector<std::vector<double>> numeric_jacobian(const SeriesMap& eta,
                                                  const ClearedJacobian& cj,
                                                  const std::vector<double>& x) {
  const double ax = eval_numeric_unchecked(cj.a, x);
  std::vector<std::vector<double>> J(cj.A.size(), std::vector<double>(eta.dim(), 0.0));
  for (std::size_t r = 0; r < cj.A.size(); ++r)
    for (std::size_t c = 0; c < eta.dim(); ++c)
      J[r][c] = eval_numeric_unchecked(cj.A[r][c], x) / ax;
  return J;
}

namespace {

struct Splitmix {
  std::uint64_t state;
  std::uint64_t next() {
    state += 0x9e3779b97f4a7c15ULL;
    std::uint64_t z = state;
    z = (z ^ (z >> 30)) * 0xbf58476d1ce4e5b9ULL;
    z = (z ^ (z >> 27)) * 0x94d049bb133111ebULL;
    return z ^ (z >> 31);
  }
  double uniform() { return static_cast<double>(next() >> 11) / 9007199254740992.0; }
};

std::vector<std::vector<double>> interior_samples(const VariableSignature& domain,
                                                  std::size_t count,
                                                  std::uint64_t seed) {
  std::vector<std::vector<double>> samples;
  // Structured points first: equal-coordinate rays catch rank drops that random
  // draws almost surely miss.
  for (const double u : {0.5, 0.3, 0.7}) {
    std::vector<double> x(domain.total());
    for (std::size_t v = 0; v < domain.total(); ++v)
      x[v] = u * to_double(domain.polyradius[v]);
    samples.push_back(std::move(x));
  }
  Splitmix rng{seed};
  while (samples.size() < count + 3) {
    std::vector<double> x(domain.total());
    for (std::size_t v = 0; v < domain.total(); ++v)
      x[v] = (0.1 + 0.8 * rng.uniform()) * to_double(domain.polyradius[v]);
    samples.push_back(std::move(x));
  }
  return samples;
}

long svd_rank(const Eigen::MatrixXd& M, double tol) {
  if (M.rows() == 0 || M.cols() == 0) return 0;
  Eigen::JacobiSVD<Eigen::MatrixXd> svd(M);
  const auto& sv = svd.singularValues();
  const double cutoff = tol * std::max(1.0, sv.size() > 0 ? sv(0) : 0.0);
  long rank = 0;
  for (Eigen::Index t = 0; t < sv.size(); ++t)
    if (sv(t) > cutoff) ++rank;
  return rank;
}

Eigen::MatrixXd projected_jacobian(const SeriesMap& eta, const ClearedJacobian& cj,
                                   const std::vector<double>& x, std::size_t m_split) {
  const std::size_t rows = std::min(m_split, eta.output_dim());
  Eigen::MatrixXd J(rows, eta.dim());
  const double ax = eval_numeric_unchecked(cj.a, x);
  for (std::size_t r = 0; r < rows; ++r)
    for (std::size_t c = 0; c < eta.dim(); ++c)
      J(r, c) = eval_numeric_unchecked(cj.A[r][c], x) / ax;
  return J;
}

} // namespace

RankProfile rank_profile(const SeriesMap& eta, std::size_t m_split, std::size_t samples,
                         std::uint64_t seed, double tol) {
  RankProfile profile;
  if (eta.dim() == 0) {
    profile.stable = true;
    profile.rank = 0;
    return profile;
  }
  ClearedJacobian cj = cleared_base_matrix(eta);
  for (const auto& x : interior_samples(eta.domain, samples, seed))
    profile.sample_ranks.push_back(svd_rank(projected_jacobian(eta, cj, x, m_split), tol));
  profile.stable = std::all_of(profile.sample_ranks.begin(), profile.sample_ranks.end(),
                               [&](long r) { return r == profile.sample_ranks.front(); });
  if (profile.stable) profile.rank = profile.sample_ranks.front();
  return profile;
}

namespace {

// The k x d cleared matrix alone, no row selection.
ClearedJacobian cleared_base_matrix(const SeriesMap& eta) {
  ClearedJacobian base;
  base.a = coordinate_product(eta.domain);
  base.A.assign(eta.output_dim(),
                std::vector<GenSeries>(eta.dim(), GenSeries::zero(eta.domain)));
  for (std::size_t r = 0; r < eta.output_dim(); ++r)
    for (std::size_t c = 0; c < eta.dim(); ++c)
      base.A[r][c] = log_derivative(eta.components[r], c) *
                     cleared_cofactor_monomial(eta.domain, c);
  return base;
}

// All strictly increasing sequences of length len into {0..limit-1}.
void increasing_sequences(std::size_t len, std::size_t limit,
                          std::vector<std::size_t>& current,
                          std::vector<std::vector<std::size_t>>& out) {
  if (current.size() == len) {
    out.push_back(current);
    return;
  }
  const std::size_t start = current.empty() ? 0 : current.back() + 1;
  for (std::size_t v = start; v < limit; ++v) {
    current.push_back(v);
    increasing_sequences(len, limit, current, out);
    current.pop_back();
  }
}

std::vector<std::vector<std::size_t>> increasing_sequences(std::size_t len,
                                                           std::size_t limit) {
  std::vector<std::vector<std::size_t>> out;
  std::vector<std::size_t> current;
  increasing_sequences(len, limit, current, out);
  return out;
}

std::optional<std::vector<std::size_t>> find_iota(const SeriesMap& eta,
                                                  const ClearedJacobian& cj,
                                                  std::size_t m_split, long rank,
                                                  std::size_t samples,
                                                  std::uint64_t seed, double tol) {
  const std::size_t d = eta.dim();
  const auto points = interior_samples(eta.domain, samples, seed);
  for (const auto& iota : increasing_sequences(d, eta.output_dim())) {
    if (rank > 0 && iota[rank - 1] >= m_split) continue;
    bool ok = true;
    for (const auto& x : points) {
      Eigen::MatrixXd J(d, d);
      const double ax = eval_numeric_unchecked(cj.a, x);
      for (std::size_t r = 0; r < d; ++r)
        for (std::size_t c = 0; c < d; ++c)
          J(r, c) = eval_numeric_unchecked(cj.A[iota[r]][c], x) / ax;
      Eigen::JacobiSVD<Eigen::MatrixXd> svd(J);
      const auto& sv = svd.singularValues();
      if (sv(sv.size() - 1) <= tol * std::max(1.0, sv(0))) {
        ok = false;
        break;
      }
    }
    if (ok) return iota;
  }
  return std::nullopt;
}

// Cleared determinant family from the proposition driving the refinement: all
// minors with rows in the projection range plus the full-size determinants with
// iota(l) inside it.
std::vector<GenSeries> determinant_family(const ClearedJacobian& cj, std::size_t d,
                                          std::size_t k, std::size_t m_split) {
  std::vector<GenSeries> dets;
  const std::size_t row_limit = std::min(k, m_split);
  for (std::size_t size = 1; size <= d; ++size) {
    for (const auto& rows : increasing_sequences(size, row_limit)) {
      for (const auto& cols : increasing_sequences(size, d)) {
        std::vector<std::vector<GenSeries>> M(size);
        for (std::size_t r = 0; r < size; ++r)
          for (std::size_t c = 0; c < size; ++c)
            M[r].push_back(cj.A[rows[r]][cols[c]]);
        GenSeries det = series_determinant(M);
        if (!det.is_zero()) dets.push_back(std::move(det));
      }
    }
  }
  return dets;
}

} // namespace

std::vector<RefinedChart> refine_by_rank(const std::vector<Chart>& charts,
                                         std::size_t m_split, const RefineOptions& opt) {
  std::vector<RefinedChart> out;
  std::vector<std::pair<Chart, std::size_t>> queue;  // chart, refinement depth
  for (const auto& chart : charts) queue.emplace_back(chart, 0);

  while (!queue.empty()) {
    auto [chart, depth] = queue.front();
    queue.erase(queue.begin());

    ChartMap map = eta_from_chart(chart);
    const std::size_t d = map.eta.dim();
    if (d == 0) {
      out.push_back(RefinedChart{std::move(chart), std::move(map), 0, {}});
      continue;
    }
    RankProfile profile = rank_profile(map.eta, m_split, opt.samples, opt.seed, opt.tol);
    ClearedJacobian base = cleared_base_matrix(map.eta);
    if (profile.stable) {
      auto iota = d <= map.eta.output_dim()
                      ? find_iota(map.eta, base, m_split, profile.rank, opt.samples,
                                  opt.seed, opt.tol)
                      : std::nullopt;
      if (iota || d > map.eta.output_dim()) {
        RefinedChart rc;
        rc.chart = std::move(chart);
        rc.map = std::move(map);
        rc.rank = profile.rank;
        if (iota) rc.iota = *iota;
        out.push_back(std::move(rc));
        continue;
      }
    }
    if (depth >= opt.max_refine_depth)
      throw std::runtime_error("refine_by_rank: rank instability beyond tolerance");

    // Re-parametrize the chart domain with the determinant family as compat
    // functions and compose.
    auto dets = determinant_family(base, d, map.eta.output_dim(), m_split);
    auto sub = build_local_parametrization(map.eta.domain, dets, opt.param);
    for (auto& pc : sub) {
      // Lift the sub-chart back to the chart's full source space.
      std::vector<std::size_t> riders;
      for (std::size_t v = 0; v < chart.domain.selectors.size(); ++v)
        if (chart.domain.selectors[v] == Selector::Zero) riders.push_back(v);
      Chart lifted = lift_chart(pc.chart, chart.chain.source_sig(), riders);
      TransformChain full = chart.chain;
      for (const auto& step : lifted.chain.steps) full.extend(step);
      Chart composed{std::move(full), std::move(lifted.domain)};
      if (!certify_injective(composed)) continue;
      queue.emplace_back(std::move(composed), depth + 1);
    }
  }
  return out;
}

namespace {

// d/dx_v for series whose exponents on v are integers >= 1 where positive.
GenSeries integer_partial(const GenSeries& F, std::size_t v) {
  GenSeries out(F.sig);
  for (const auto& [e, c] : F.terms) {
    if (e[v] == 0) continue;
    if (!is_integer(e[v]) || e[v] < 1)
      throw std::invalid_argument("integer_partial: non-integral exponent");
    ExponentVector shifted = e;
    shifted[v] -= 1;
    out.accumulate(shifted, c * e[v]);
  }
  return out;
}

GenSeries embed_into_doubled(const GenSeries& F, const VariableSignature& doubled) {
  GenSeries out(doubled);
  for (const auto& [e, c] : F.terms) {
    ExponentVector big = ExponentVector::zeros(doubled.total());
    for (std::size_t v = 0; v < e.size(); ++v) big[v] = e[v];
    out.accumulate(big, c);
  }
  return out;
}

} // namespace

FiberCutSystem fiber_cut_equations(const SeriesMap& eta, const ClearedJacobian& cj,
                                   std::size_t l) {
  eta.validate();
  const std::size_t d = eta.dim();
  if (l >= d)
    throw std::invalid_argument("fiber_cut_equations: requires rank l < d");
  if (cj.kernel.size() != d - l)
    throw std::invalid_argument("fiber_cut_equations: kernel basis missing");

  FiberCutSystem system;
  system.d = d;
  system.l = l;
  system.doubled.m = 2 * d;
  system.doubled.n = 0;
  system.doubled.polyradius = eta.domain.polyradius;
  system.doubled.polyradius.insert(system.doubled.polyradius.end(),
                                   eta.domain.polyradius.begin(),
                                   eta.domain.polyradius.end());

  system.phi = GenSeries::constant(system.doubled, Rational(1));
  for (std::size_t v = 0; v < d; ++v) {
    GenSeries x = GenSeries::coordinate(system.doubled, v);
    GenSeries rp = GenSeries::coordinate(system.doubled, d + v);
    system.phi = system.phi * (x * (rp - x));
  }

  std::vector<GenSeries> grad;
  for (std::size_t v = 0; v < d; ++v) grad.push_back(integer_partial(system.phi, v));

  for (const auto& column : cj.kernel) {
    GenSeries eq = GenSeries::zero(system.doubled);
    for (std::size_t v = 0; v < d; ++v)
      eq = eq + grad[v] * embed_into_doubled(column[v], system.doubled);
    system.equations.push_back(std::move(eq));
  }
  if (!cj.iota.empty()) {
    system.witness = eta.components[cj.iota[l]];
  } else {
    // A coordinate function works for the special kernel forms: its gradient is
    // a basis vector, so the pairing is the corresponding kernel entry.
    std::size_t pick = 0;
    for (std::size_t v = 0; v < d; ++v)
      if (!cj.kernel[0][v].is_zero()) {
        pick = v;
        break;
      }
    system.witness = GenSeries::coordinate(eta.domain, pick);
  }
  return system;
}

WitnessReport witness_certificate(const SeriesMap& eta, const ClearedJacobian& cj,
                                  const FiberCutSystem& system, std::size_t samples,
                                  std::uint64_t seed, double tol) {
  WitnessReport report;
  report.min_max_dot = std::numeric_limits<double>::infinity();
  const auto points = interior_samples(eta.domain, samples, seed);
  for (const auto& x : points) {
    double best = 0.0;
    for (const auto& column : cj.kernel) {
      double dot = 0.0;
      for (std::size_t v = 0; v < eta.dim(); ++v) {
        // d witness / d x_v via the log-derivative (x_v > 0 at interior samples).
        const double grad_f =
            eval_numeric_unchecked(log_derivative(system.witness, v), x) / x[v];
        dot += grad_f * eval_numeric_unchecked(column[v], x);
      }
      best = std::max(best, std::abs(dot));
    }
    report.min_max_dot = std::min(report.min_max_dot, best);
    ++report.samples;
  }
  report.ok = report.min_max_dot > tol;
  return report;
}

namespace {

double eval_system(const FiberCutSystem& system, const GenSeries& eq,
                   const std::vector<double>& x, const std::vector<double>& rp) {
  std::vector<double> doubled = x;
  doubled.insert(doubled.end(), rp.begin(), rp.end());
  return eval_numeric_unchecked(eq, doubled);
}

// Solve h(x2) = target for x2 in (lo, hi) by scan plus bisection.
std::optional<double> solve_monotone(const std::function<double(double)>& h, double lo,
                                     double hi, double target, int cells = 256) {
  double prev_t = lo + 1e-12 * (hi - lo);
  double prev = h(prev_t) - target;
  for (int cell = 1; cell <= cells; ++cell) {
    const double t = lo + (hi - lo) * cell / (cells + 1.0);
    const double cur = h(t) - target;
    if (prev == 0.0) return prev_t;
    if (prev * cur < 0.0) {
      double a = prev_t, b = t;
      for (int iter = 0; iter < 200; ++iter) {
        const double mid = 0.5 * (a + b);
        const double fm = h(mid) - target;
        if (fm == 0.0) return mid;
        if ((h(a) - target) * fm < 0.0)
          b = mid;
        else
          a = mid;
      }
      return 0.5 * (a + b);
    }
    prev_t = t;
    prev = cur;
  }
  return std::nullopt;
}

} // namespace

FiberCutReport verify_fiber_cut(const SeriesMap& eta, const FiberCutSystem& system,
                                const std::vector<Rational>& rprime,
                                std::size_t budget, std::uint64_t seed) {
  FiberCutReport report;
  const std::size_t d = system.d;
  if (rprime.size() != d)
    throw std::invalid_argument("verify_fiber_cut: r' dimension mismatch");
  std::vector<double> rp;
  for (const auto& r : rprime) rp.push_back(to_double(r));
  Splitmix rng{seed};

  if (d == 1) {
    // Critical set of x(r'-x) is exactly {r'/2}; the one equation is linear.
    for (std::size_t s = 0; s < budget; ++s) {
      ++report.attempted;
      const double sample = (0.05 + 0.9 * rng.uniform()) * rp[0];
      auto root = solve_monotone(
          [&](double x) { return eval_system(system, system.equations[0], {x}, rp); },
          0.0, rp[0], 0.0);
      if (!root) {
        ++report.failed;
        continue;
      }
      ++report.solved;
      const double image_crit = eta.eval({*root})[0];
      const double image_sample = eta.eval({sample})[0];
      report.max_discrepancy =
          std::max(report.max_discrepancy, std::abs(image_crit - image_sample));
      report.max_residual = std::max(
          report.max_residual,
          std::abs(eval_system(system, system.equations[0], {*root}, rp)));
    }
    return report;
  }

  if (d == 2 && system.l == 1) {
    // Sample image values c = eta(interior point); walk the fiber x1 = t,
    // solve eta(t, x2) = c for x2, then find the critical point along it.
    const std::size_t comp = 0;
    for (std::size_t s = 0; s < budget; ++s) {
      ++report.attempted;
      const double u1 = 0.1 + 0.8 * rng.uniform();
      const double u2 = 0.1 + 0.8 * rng.uniform();
      const double c =
          eval_numeric_unchecked(eta.components[comp], {u1 * rp[0], u2 * rp[1]});
      bool solved = false;
      const int cells = 512;
      double prev_g = 0.0, prev_t = 0.0;
      bool have_prev = false;
      for (int cell = 1; cell <= cells && !solved; ++cell) {
        const double t = rp[0] * cell / (cells + 1.0);
        auto x2 = solve_monotone(
            [&](double y) {
              return eval_numeric_unchecked(eta.components[comp], {t, y});
            },
            0.0, rp[1], c);
        if (!x2) {
          have_prev = false;
          continue;
        }
        const double g = eval_system(system, system.equations[0], {t, *x2}, rp);
        if (have_prev && prev_g * g <= 0.0) {
          // Bisect on t between prev_t and t.
          double a = prev_t, b = t;
          double root_x2 = *x2;
          for (int iter = 0; iter < 100; ++iter) {
            const double mid = 0.5 * (a + b);
            auto x2m = solve_monotone(
                [&](double y) {
                  return eval_numeric_unchecked(eta.components[comp], {mid, y});
                },
                0.0, rp[1], c);
            if (!x2m) break;
            const double gm = eval_system(system, system.equations[0], {mid, *x2m}, rp);
            root_x2 = *x2m;
            if (prev_g * gm <= 0.0)
              b = mid;
            else
              a = mid;
          }
          const double t_star = 0.5 * (a + b);
          const double image_crit =
              eval_numeric_unchecked(eta.components[comp], {t_star, root_x2});
          report.max_discrepancy =
              std::max(report.max_discrepancy, std::abs(image_crit - c));
          report.max_residual = std::max(
              report.max_residual,
              std::abs(eval_system(system, system.equations[0], {t_star, root_x2}, rp)));
          solved = true;
        }
        prev_g = g;
        prev_t = t;
        have_prev = true;
      }
      if (solved)
        ++report.solved;
      else
        ++report.failed;
    }
    return report;
  }

  // Higher-dimensional fibers are out of desk scale; report non-convergence.
  report.attempted = budget;
  report.failed = budget;
  return report;
}

} // namespace monolab
