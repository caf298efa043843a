// Copyright 2026 The Groupforge Authors
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//     http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.

#include "groupforge/spectral.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>

#include "groupforge/errors.hpp"

namespace groupforge {

Matrix laplacian(const WeightedGraph& graph) {
  const std::size_t n = graph.size();
  const auto degrees = degree_vector(graph);
  Matrix l(n, n, 0.0);
  for (std::size_t m = 0; m < n; ++m) {
    l(m, m) = degrees[m];
    for (std::size_t k = 0; k < n; ++k) {
      if (k != m) l(m, k) = -graph.weight(m, k);
    }
  }
  return l;
}

Matrix normalized_laplacian(const WeightedGraph& graph) {
  const std::size_t n = graph.size();
  const auto degrees = degree_vector(graph);
  std::vector<double> inv_sqrt(n, 0.0);
  for (std::size_t m = 0; m < n; ++m) {
    if (degrees[m] > 0.0) inv_sqrt[m] = 1.0 / std::sqrt(degrees[m]);
  }
  const Matrix l = laplacian(graph);
  Matrix ln(n, n, 0.0);
  // Fill the upper triangle and mirror so the result is symmetric
  // bit-for-bit; i<=j covers the diagonal.
  for (std::size_t i = 0; i < n; ++i) {
    for (std::size_t j = i; j < n; ++j) {
      const double v = inv_sqrt[i] * l(i, j) * inv_sqrt[j];
      ln(i, j) = v;
      ln(j, i) = v;
    }
  }
  return ln;
}

namespace {

double off_diagonal_norm(const Matrix& a) {
  double sum = 0.0;
  const std::size_t n = a.rows();
  for (std::size_t i = 0; i < n; ++i) {
    for (std::size_t j = 0; j < n; ++j) {
      if (i != j) sum += a(i, j) * a(i, j);
    }
  }
  return std::sqrt(sum);
}

void apply_sign_convention(Matrix& vectors) {
  const std::size_t n = vectors.rows();
  for (std::size_t j = 0; j < vectors.cols(); ++j) {
    std::size_t best = 0;
    double best_abs = std::abs(vectors(0, j));
    for (std::size_t i = 1; i < n; ++i) {
      const double a = std::abs(vectors(i, j));
      if (a > best_abs) {  // strict: ties keep the lowest index
        best_abs = a;
        best = i;
      }
    }
    if (vectors(best, j) < 0.0) {
      for (std::size_t i = 0; i < n; ++i) vectors(i, j) = -vectors(i, j);
    }
  }
}

}  // namespace

EigenSystem symmetric_eigendecomposition(const Matrix& s, double tol) {
  if (s.rows() != s.cols() || s.rows() == 0) {
    throw DimensionMismatch("eigendecomposition needs a non-empty square matrix");
  }
  const std::size_t n = s.rows();
  const double frob = s.frobenius_norm();
  if (s.max_asymmetry() > tol * std::max(1.0, frob)) {
    throw NotSymmetric("matrix is not symmetric within tolerance");
  }

  Matrix a = s;
  Matrix v = Matrix::identity(n);
  const double stop = tol * frob;
  constexpr int kMaxSweeps = 100;

  bool converged = false;
  for (int sweep = 0; sweep < kMaxSweeps; ++sweep) {
    if (off_diagonal_norm(a) <= stop) {
      converged = true;
      break;
    }
    // One cyclic sweep over the strict upper triangle in fixed row order;
    // the rotation order is part of the determinism contract.
    for (std::size_t p = 0; p + 1 < n; ++p) {
      for (std::size_t q = p + 1; q < n; ++q) {
        const double apq = a(p, q);
        if (apq == 0.0) continue;
        const double app = a(p, p);
        const double aqq = a(q, q);
        const double tau = (aqq - app) / (2.0 * apq);
        const double t = (tau >= 0.0)
                             ? 1.0 / (tau + std::sqrt(1.0 + tau * tau))
                             : 1.0 / (tau - std::sqrt(1.0 + tau * tau));
        const double c = 1.0 / std::sqrt(1.0 + t * t);
        const double sn = t * c;
        for (std::size_t k = 0; k < n; ++k) {
          if (k == p || k == q) continue;
          const double akp = a(k, p);
          const double akq = a(k, q);
          a(k, p) = a(p, k) = c * akp - sn * akq;
          a(k, q) = a(q, k) = sn * akp + c * akq;
        }
        a(p, p) = app - t * apq;
        a(q, q) = aqq + t * apq;
        a(p, q) = a(q, p) = 0.0;
        for (std::size_t k = 0; k < n; ++k) {
          const double vkp = v(k, p);
          const double vkq = v(k, q);
          v(k, p) = c * vkp - sn * vkq;
          v(k, q) = sn * vkp + c * vkq;
        }
      }
    }
  }
  if (!converged && off_diagonal_norm(a) > stop) {
    throw NoConvergence("Jacobi eigendecomposition did not converge in 100 sweeps");
  }

  std::vector<std::size_t> order(n);
  std::iota(order.begin(), order.end(), std::size_t{0});
  std::stable_sort(order.begin(), order.end(),
                   [&](std::size_t i, std::size_t j) { return a(i, i) < a(j, j); });

  EigenSystem out;
  out.values.resize(n);
  out.vectors = Matrix(n, n);
  for (std::size_t j = 0; j < n; ++j) {
    out.values[j] = a(order[j], order[j]);
    for (std::size_t i = 0; i < n; ++i) {
      out.vectors(i, j) = v(i, order[j]);
    }
  }
  apply_sign_convention(out.vectors);
  return out;
}

SpectralEmbedding embed(const WeightedGraph& graph, std::size_t dimension) {
  const std::size_t n = graph.size();
  if (dimension < 1) {
    throw InvalidConfig("embedding dimension M must be >= 1");
  }
  if (dimension > n - 1 || n < 2) {
    throw MTooLarge("embedding dimension M=" + std::to_string(dimension) +
                    " too large for n=" + std::to_string(n) +
                    " (need M <= n-1)");
  }
  const Matrix ln = normalized_laplacian(graph);
  const EigenSystem eig = symmetric_eigendecomposition(ln);

  SpectralEmbedding out;
  out.dimension = dimension;
  out.coordinates = Matrix(n, dimension);
  for (std::size_t j = 0; j < dimension; ++j) {
    for (std::size_t i = 0; i < n; ++i) {
      out.coordinates(i, j) = eig.vectors(i, j + 1);  // skip u_0
    }
    out.retained_eigenvalues.push_back(eig.values[j + 1]);
  }
  for (double lambda : eig.values) {
    if (std::abs(lambda) <= 1e-9) ++out.zero_eigenvalue_count;
  }
  return out;
}

std::vector<Rgb> embedding_to_rgb(const SpectralEmbedding& embedding) {
  if (embedding.dimension != 3) {
    throw WrongDimension("RGB conversion needs a 3-dimensional embedding, got M=" +
                         std::to_string(embedding.dimension));
  }
  const Matrix& q = embedding.coordinates;
  const std::size_t n = q.rows();
  double lo[3], hi[3];
  for (std::size_t j = 0; j < 3; ++j) {
    lo[j] = hi[j] = q(0, j);
    for (std::size_t i = 1; i < n; ++i) {
      lo[j] = std::min(lo[j], q(i, j));
      hi[j] = std::max(hi[j], q(i, j));
    }
  }
  std::vector<Rgb> colors(n);
  for (std::size_t i = 0; i < n; ++i) {
    double channel[3];
    for (std::size_t j = 0; j < 3; ++j) {
      channel[j] = (hi[j] > lo[j]) ? (q(i, j) - lo[j]) / (hi[j] - lo[j]) : 0.5;
    }
    colors[i] = Rgb{channel[0], channel[1], channel[2]};
  }
  return colors;
}

}  // namespace groupforge
