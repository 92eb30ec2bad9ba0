#pragma once

#include <optional>
#include <vector>

#include "gcnsel/graph.hpp"

namespace gcnsel {

struct SpectrumResult {
  std::vector<double> eigenvalues;  // ascending
  std::optional<Dense> eigenvectors;  // column k pairs with eigenvalues[k]
};

struct SpectrumStats {
  double min = 0.0;
  double median = 0.0;
  double avg = 0.0;
  double std = 0.0;  // population standard deviation
  double max = 0.0;
};

struct SpectrumOptions {
  bool want_vectors = false;
  // Dense workspace grows as n^2; larger matrices need allow_large.
  Index dense_cap = 5000;
  bool allow_large = false;
  double symmetry_tol = 1e-12;
  // Relative tolerance of the trace(m) == sum(eigenvalues) self-check.
  double trace_tol = 1e-6;
};

// Full spectrum of a symmetric sparse matrix through a dense
// tridiagonalization + implicit QR eigensolver.
//
// Throws std::invalid_argument for non-square or asymmetric input,
// SpectrumCapExceeded when num_rows > dense_cap without allow_large, and
// NumericalError when the trace check fails.
SpectrumResult eigenvalues_symmetric(const SparseMatrix& m,
                                     const SpectrumOptions& opts = {});

// Throws std::invalid_argument on an empty spectrum.
SpectrumStats spectrum_stats(const SpectrumResult& s);

// Number of eigenvalues with |lambda| < tol.
Index count_near_zero(const SpectrumResult& s, double tol = 1e-5);

}  // namespace gcnsel
