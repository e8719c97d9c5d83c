#pragma once

#include <string>
#include <string_view>

namespace graphfuse {

enum class Method {
  t_fusion,  // t-shrinkage Gibbs sampler
  laplace,   // Bayesian Laplace fusion
  l1,        // fused lasso on the DFS chain
};

// "t", "laplace", "l1"; throws std::invalid_argument otherwise.
Method parse_method(std::string_view name);
std::string to_string(Method method);
// Column label used in result tables.
std::string display_name(Method method);

}  // namespace graphfuse
