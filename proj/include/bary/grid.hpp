#pragma once

// Chebyshev points of the second kind on [-1, 1] and the barycentric weight
// vectors that go with them.

#include <span>
#include <vector>

#include "bary/ext_real.hpp"

namespace bary {

struct Grid {
  int n = 0;                  // degree; n + 1 nodes
  std::vector<double> nodes;  // strictly increasing, nodes[0] = -1, nodes[n] = 1
};

// x_k = sin((2k - n) pi / (2n)) rounded once per node; endpoints forced to
// -1/+1, nodes[n - k] == -nodes[k] exactly, zero at the center for even n.
Grid gen_nodes_usual(int n);

// Same points carried in pair precision (|error| well under 1e-28).
std::vector<ExtReal> gen_nodes_ext(int n);

enum class WeightKind { normalized_lambda, salzer_simplified };

struct WeightVector {
  WeightKind kind = WeightKind::normalized_lambda;
  std::vector<double> values;
};

// values[k] = prod_{j != k} 1 / (2 (x_k - x_j)), i.e. lambda_k * 2^-n for a
// degree-n grid. Left-to-right product with an exponent accumulator, so any
// node count a vector can hold is safe from intermediate overflow.
WeightVector normalized_lambda(std::span<const double> nodes);
std::vector<ExtReal> normalized_lambda_ext(std::span<const ExtReal> nodes);

// The same quantity for exact degree-n Chebyshev points via the closed form
// (-1)^k delta_k / (2n), delta_0 = delta_n = 1/2: one rounding total.
WeightVector normalized_lambda_closed(int n);

// Simplified weights (-1)^k delta_k with w[0] = +1/2. Scale-free uses only.
WeightVector salzer_weights(int n);

}  // namespace bary
