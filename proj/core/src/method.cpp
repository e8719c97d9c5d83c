#include "graphfuse/method.hpp"

#include <stdexcept>

namespace graphfuse {

Method parse_method(std::string_view name) {
  if (name == "t") return Method::t_fusion;
  if (name == "laplace") return Method::laplace;
  if (name == "l1") return Method::l1;
  throw std::invalid_argument("unknown method '" + std::string(name) + "' (expected t, laplace or l1)");
}

std::string to_string(Method method) {
  switch (method) {
    case Method::t_fusion: return "t";
    case Method::laplace: return "laplace";
    case Method::l1: return "l1";
  }
  return "?";
}

std::string display_name(Method method) {
  switch (method) {
    case Method::t_fusion: return "t-fusion";
    case Method::laplace: return "Laplace fusion";
    case Method::l1: return "L1 fusion";
  }
  return "?";
}

}  // namespace graphfuse
