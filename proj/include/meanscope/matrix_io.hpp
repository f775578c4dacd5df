#pragma once

#include <iosfwd>
#include <string>

#include <json.hpp>

#include "meanscope/hermitian.hpp"

namespace meanscope {

/// Matrix file format:
///   {"n": 2, "field": "real"|"complex", "entries": [[re, im], ...]}
/// with n² row-major entries. Writers emit 17 significant digits; readers
/// also accept bare numbers as entries when field is "real".
std::string matrix_to_json(const HermitianMatrix& a);
HermitianMatrix matrix_from_json(const nlohmann::json& j);
HermitianMatrix matrix_from_json(const std::string& text);

HermitianMatrix read_matrix_file(const std::string& path);
void write_matrix_file(const std::string& path, const HermitianMatrix& a);

}  // namespace meanscope
