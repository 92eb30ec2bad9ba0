#include "gcnsel/spectral.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>
#include <stdexcept>
#include <string>

#include <Eigen/Eigenvalues>

#include "gcnsel/errors.hpp"

namespace gcnsel {

SpectrumResult eigenvalues_symmetric(const SparseMatrix& m,
                                     const SpectrumOptions& opts) {
  if (m.num_rows != m.num_cols) {
    throw std::invalid_argument("eigenvalues_symmetric: matrix is not square");
  }
  if (m.num_rows > opts.dense_cap && !opts.allow_large) {
    const double gib = static_cast<double>(m.num_rows) * m.num_rows * 8.0 / (1 << 30);
    throw SpectrumCapExceeded(
        "spectrum cap exceeded: " + std::to_string(m.num_rows) +
        " nodes > dense cap " + std::to_string(opts.dense_cap) + " (needs ~" +
        std::to_string(static_cast<int>(std::ceil(gib))) +
        " GiB per dense copy); rerun with --allow-large");
  }
  const double asym = m.max_asymmetry();
  if (asym > opts.symmetry_tol) {
    throw std::invalid_argument("eigenvalues_symmetric: matrix is not symmetric (max |m - m^T| = " +
                                std::to_string(asym) + ")");
  }

  SpectrumResult out;
  if (m.num_rows == 0) return out;

  Eigen::MatrixXd dense = m.to_dense();
  const double trace = dense.trace();
  Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> solver(
      dense, opts.want_vectors ? Eigen::ComputeEigenvectors : Eigen::EigenvaluesOnly);
  if (solver.info() != Eigen::Success) {
    throw NumericalError("eigenvalues_symmetric: QR iteration did not converge");
  }
  const auto& ev = solver.eigenvalues();
  out.eigenvalues.assign(ev.data(), ev.data() + ev.size());
  if (opts.want_vectors) out.eigenvectors = Dense(solver.eigenvectors());

  const double sum = std::accumulate(out.eigenvalues.begin(), out.eigenvalues.end(), 0.0);
  const double scale = std::max(1.0, std::abs(trace));
  if (std::abs(sum - trace) > opts.trace_tol * scale) {
    throw NumericalError("eigenvalues_symmetric: trace check failed (trace " +
                         std::to_string(trace) + ", eigenvalue sum " +
                         std::to_string(sum) + ")");
  }
  return out;
}

SpectrumStats spectrum_stats(const SpectrumResult& s) {
  const auto& ev = s.eigenvalues;
  if (ev.empty()) throw std::invalid_argument("spectrum_stats: empty spectrum");
  std::vector<double> sorted = ev;
  std::sort(sorted.begin(), sorted.end());
  const std::size_t n = sorted.size();

  SpectrumStats st;
  st.min = sorted.front();
  st.max = sorted.back();
  st.median = n % 2 == 1 ? sorted[n / 2] : 0.5 * (sorted[n / 2 - 1] + sorted[n / 2]);
  st.avg = std::accumulate(sorted.begin(), sorted.end(), 0.0) / static_cast<double>(n);
  double sq = 0.0;
  for (double v : sorted) sq += (v - st.avg) * (v - st.avg);
  st.std = std::sqrt(sq / static_cast<double>(n));
  return st;
}

Index count_near_zero(const SpectrumResult& s, double tol) {
  return std::count_if(s.eigenvalues.begin(), s.eigenvalues.end(),
                       [tol](double v) { return std::abs(v) < tol; });
}

}  // namespace gcnsel
