#include "meanscope/matrix_io.hpp"

#include <cstdio>
#include <fstream>
#include <sstream>

namespace meanscope {

namespace {

std::string full_precision(double x) {
  char buf[40];
  std::snprintf(buf, sizeof buf, "%.17g", x);
  return buf;
}

}  // namespace

std::string matrix_to_json(const HermitianMatrix& a) {
  const auto& m = a.matrix();
  const bool real = (m.imag().array() == 0.0).all();
  std::ostringstream os;
  os << "{\"n\": " << a.size() << ", \"field\": \"" << (real ? "real" : "complex")
     << "\", \"entries\": [";
  for (Index i = 0; i < a.size(); ++i)
    for (Index j = 0; j < a.size(); ++j) {
      if (i != 0 || j != 0) os << ", ";
      os << '[' << full_precision(m(i, j).real()) << ", " << full_precision(m(i, j).imag())
         << ']';
    }
  os << "]}";
  return os.str();
}

HermitianMatrix matrix_from_json(const nlohmann::json& j) {
  if (!j.is_object() || !j.contains("n") || !j.contains("entries"))
    throw PreconditionError("matrix file: expected object with 'n' and 'entries'");
  const auto n = j.at("n").get<long long>();
  if (n < 1) throw DimensionError("matrix file: n must be >= 1");
  const std::string field = j.value("field", std::string("complex"));
  if (field != "real" && field != "complex")
    throw PreconditionError("matrix file: field must be 'real' or 'complex'");
  const auto& entries = j.at("entries");
  if (!entries.is_array() || entries.size() != static_cast<std::size_t>(n * n))
    throw DimensionError("matrix file: expected n^2 = " + std::to_string(n * n) + " entries");

  DenseMatrix<cplx> m(n, n);
  for (Index k = 0; k < n * n; ++k) {
    const auto& e = entries[static_cast<std::size_t>(k)];
    cplx value;
    if (e.is_number()) {
      value = cplx(e.get<double>(), 0.0);
    } else if (e.is_array() && e.size() == 2) {
      value = cplx(e[0].get<double>(), e[1].get<double>());
    } else {
      throw PreconditionError("matrix file: entry " + std::to_string(k) +
                              " is neither a number nor [re, im]");
    }
    if (field == "real" && value.imag() != 0.0)
      throw PreconditionError("matrix file: nonzero imaginary part in a real matrix");
    m(k / n, k % n) = value;
  }
  return HermitianMatrix(m);
}

HermitianMatrix matrix_from_json(const std::string& text) {
  return matrix_from_json(nlohmann::json::parse(text));
}

HermitianMatrix read_matrix_file(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw PreconditionError("cannot open matrix file '" + path + "'");
  nlohmann::json j;
  try {
    in >> j;
  } catch (const nlohmann::json::exception& e) {
    throw PreconditionError("matrix file '" + path + "': " + e.what());
  }
  return matrix_from_json(j);
}

void write_matrix_file(const std::string& path, const HermitianMatrix& a) {
  std::ofstream out(path);
  if (!out) throw PreconditionError("cannot write matrix file '" + path + "'");
  out << matrix_to_json(a) << '\n';
}

}  // namespace meanscope
