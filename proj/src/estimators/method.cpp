#include "ei/method.hpp"

#include "ei/errors.hpp"

namespace ei {

Method parse_method(const std::string& name) {
  if (name == "weighted_average" || name == "wa") return Method::weighted_average;
  if (name == "goodman") return Method::goodman;
  if (name == "md" || name == "multinomial_dirichlet") return Method::md;
  throw ValidationError("unknown method '" + name +
                        "' (expected weighted_average, goodman, or md)");
}

const char* method_name(Method method) {
  switch (method) {
    case Method::weighted_average: return "weighted_average";
    case Method::goodman: return "goodman";
    case Method::md: return "md";
  }
  return "unknown";
}

}  // namespace ei
