#pragma once

#include <string>

#include "spinlab/app.hpp"
#include "spinlab/lie_core.hpp"

namespace spinlab::app {

/// Typed access with an InvalidInput on type mismatch.
double get_double(const Json& cfg, const std::string& key);
int get_int(const Json& cfg, const std::string& key);
std::uint64_t get_seed(const Json& cfg);
std::string get_string(const Json& cfg, const std::string& key);

RVec parse_real_vector(const Json& j, const std::string& what);
/// {"re": [[...]], "im": [[...]]}; a missing part is zero.
Mat parse_complex_matrix(const Json& j, const std::string& what);
Json complex_matrix_json(const Mat& m);

}  // namespace spinlab::app
