#pragma once

#include <cstddef>
#include <vector>

#include "pathqv/rng.hpp"

namespace pathqv {

enum class FbmMethod { Auto, CirculantEmbedding, Cholesky };

/// Autocovariance of unit-step fractional Gaussian noise at lag k.
double fgn_autocovariance(double hurst, std::size_t k);

/// Fractional Brownian motion B^H at j·horizon/steps, j = 0..steps (B_0 = 0).
/// Auto uses circulant embedding and falls back to Cholesky for small grids
/// (<= 2^12 points) when the embedding has significantly negative eigenvalues.
std::vector<double> sample_fbm(double hurst, std::size_t steps, double horizon, RngStream& rng,
                               FbmMethod method = FbmMethod::Auto);

}  // namespace pathqv
