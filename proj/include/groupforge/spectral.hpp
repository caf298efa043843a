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

#ifndef GROUPFORGE_SPECTRAL_HPP
#define GROUPFORGE_SPECTRAL_HPP

#include <cstddef>
#include <vector>

#include "groupforge/matrix.hpp"
#include "groupforge/similarity.hpp"

namespace groupforge {

/// Graph Laplacian L = D - W. Rows sum to zero; positive semidefinite.
Matrix laplacian(const WeightedGraph& graph);

/// Normalized Laplacian D^{-1/2} (D - W) D^{-1/2}. Rows and columns of
/// isolated vertices (degree 0) are zero by convention. Spectrum in [0, 2].
Matrix normalized_laplacian(const WeightedGraph& graph);

/// Full spectrum of a symmetric matrix. `values` sorted ascending; column i
/// of `vectors` is the orthonormal eigenvector paired with values[i].
struct EigenSystem {
  std::vector<double> values;
  Matrix vectors;
};

/// Cyclic Jacobi eigendecomposition, dependency-free and deterministic.
/// Stops when the off-diagonal Frobenius norm falls below tol * ||S||_F
/// (at most 100 sweeps, else NoConvergence). Sign convention: each
/// eigenvector is flipped so its largest-magnitude component is positive,
/// ties resolved toward the lowest index. Throws NotSymmetric when the input
/// is asymmetric beyond tol * max(1, ||S||_F).
EigenSystem symmetric_eigendecomposition(const Matrix& s, double tol = 1e-12);

/// Laplacian-eigenmap coordinates. Row m of `coordinates` is student m's
/// spectral vector: entries of eigenvectors u_1..u_M of the normalized
/// Laplacian in ascending-eigenvalue order, skipping the smoothest
/// eigenvector u_0.
struct SpectralEmbedding {
  Matrix coordinates;                       // n x M
  std::vector<double> retained_eigenvalues; // length M
  std::size_t dimension = 0;                // M
  // Diagnostic: eigenvalues at zero within 1e-9. More than one means the
  // graph is disconnected; embedding proceeds regardless.
  std::size_t zero_eigenvalue_count = 0;
};

/// Throws MTooLarge when dimension > n - 1, InvalidConfig when dimension < 1.
SpectralEmbedding embed(const WeightedGraph& graph, std::size_t dimension);

struct Rgb {
  double r = 0.0, g = 0.0, b = 0.0;
};

/// Affine per-column rescaling of a 3-dimensional embedding into [0,1]^3.
/// A constant column maps to 0.5. Throws WrongDimension unless M == 3.
std::vector<Rgb> embedding_to_rgb(const SpectralEmbedding& embedding);

}  // namespace groupforge

#endif  // GROUPFORGE_SPECTRAL_HPP
