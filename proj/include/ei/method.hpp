#pragma once

#include <string>

namespace ei {

enum class Method { weighted_average, goodman, md };

Method parse_method(const std::string& name);
const char* method_name(Method method);

}  // namespace ei
