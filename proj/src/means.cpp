#include "meanscope/means.hpp"

#include <charconv>
#include <sstream>

namespace meanscope {

namespace {

void require_range(double value, double lo, double hi, const char* what) {
  if (!(value >= lo && value <= hi)) {
    std::ostringstream os;
    os << "MeanDescriptor: " << what << " = " << value << " outside [" << lo << ", " << hi
       << "]";
    throw PreconditionError(os.str());
  }
}

std::string format_number(double x) {
  char buf[32];
  const auto res = std::to_chars(buf, buf + sizeof buf, x);
  return std::string(buf, res.ptr);
}

double parse_number(std::string_view text, std::string_view context) {
  double value = 0.0;
  const auto* first = text.data();
  const auto* last = text.data() + text.size();
  const auto res = std::from_chars(first, last, value);
  if (res.ec != std::errc() || res.ptr != last)
    throw PreconditionError("parse_mean: bad number '" + std::string(text) + "' in '" +
                            std::string(context) + "'");
  return value;
}

bool starts_with(std::string_view s, std::string_view prefix) {
  return s.substr(0, prefix.size()) == prefix;
}

}  // namespace

MeanDescriptor MeanDescriptor::weighted_geometric(double p) {
  require_range(p, 0.0, 1.0, "p");
  MeanDescriptor d(Kind::WeightedGeometric);
  d.weight_ = p;
  return d;
}

MeanDescriptor MeanDescriptor::power(double r) {
  require_range(r, -1.0, 1.0, "r");
  if (r == 0.0) return geometric();
  MeanDescriptor d(Kind::Power);
  d.exponent_ = r;
  return d;
}

MeanDescriptor MeanDescriptor::power_path(double r, double t) {
  require_range(r, -1.0, 1.0, "r");
  require_range(t, 0.0, 1.0, "t");
  MeanDescriptor d(Kind::PowerPath);
  d.exponent_ = r;
  d.weight_ = t;
  return d;
}

MeanDescriptor MeanDescriptor::geometric_path(double t) {
  require_range(t, 0.0, 1.0, "t");
  MeanDescriptor d(Kind::GeometricPath);
  d.weight_ = t;
  return d;
}

MeanDescriptor MeanDescriptor::dual_of(MeanDescriptor inner) {
  MeanDescriptor d(Kind::Dual);
  d.inner_ = std::make_shared<const MeanDescriptor>(std::move(inner));
  return d;
}

const MeanDescriptor& MeanDescriptor::inner() const {
  if (!inner_) throw PreconditionError("MeanDescriptor::inner: not a dual descriptor");
  return *inner_;
}

double MeanDescriptor::operator()(double x) const {
  switch (kind_) {
    case Kind::Arithmetic:
      return (1.0 + x) / 2.0;
    case Kind::Harmonic:
      return 2.0 * x / (1.0 + x);
    case Kind::Geometric:
      return std::sqrt(x);
    case Kind::WeightedGeometric:
    case Kind::GeometricPath:
      return std::pow(x, weight_);
    case Kind::Power:
      if (std::abs(exponent_) < kGeometricLimit) return std::sqrt(x);
      return std::pow((1.0 + std::pow(x, exponent_)) / 2.0, 1.0 / exponent_);
    case Kind::PowerPath:
      if (std::abs(exponent_) < kGeometricLimit) return std::pow(x, weight_);
      return std::pow(1.0 - weight_ + weight_ * std::pow(x, exponent_), 1.0 / exponent_);
    case Kind::Dual:
      return x / (*inner_)(x);
  }
  return std::nan("");
}

bool operator==(const MeanDescriptor& a, const MeanDescriptor& b) {
  if (a.kind_ != b.kind_ || a.exponent_ != b.exponent_ || a.weight_ != b.weight_) return false;
  if (a.kind_ == MeanDescriptor::Kind::Dual) return *a.inner_ == *b.inner_;
  return true;
}

std::function<double(double)> representing_fn(const MeanDescriptor& d) {
  return [d](double x) { return d(x); };
}

MeanDescriptor dual(const MeanDescriptor& d) { return MeanDescriptor::dual_of(d); }

std::string to_string(const MeanDescriptor& d) {
  using Kind = MeanDescriptor::Kind;
  switch (d.kind()) {
    case Kind::Arithmetic:
      return "arithmetic";
    case Kind::Harmonic:
      return "harmonic";
    case Kind::Geometric:
      return "geometric";
    case Kind::WeightedGeometric:
      return "wgeo:" + format_number(d.weight());
    case Kind::Power:
      return "power:" + format_number(d.exponent());
    case Kind::PowerPath:
      return "path:r=" + format_number(d.exponent()) + ",t=" + format_number(d.weight());
    case Kind::GeometricPath:
      return "gpath:" + format_number(d.weight());
    case Kind::Dual:
      return "dual(" + to_string(d.inner()) + ")";
  }
  return {};
}

MeanDescriptor parse_mean(std::string_view text) {
  if (text == "arithmetic") return MeanDescriptor::arithmetic();
  if (text == "harmonic") return MeanDescriptor::harmonic();
  if (text == "geometric") return MeanDescriptor::geometric();
  if (starts_with(text, "wgeo:"))
    return MeanDescriptor::weighted_geometric(parse_number(text.substr(5), text));
  if (starts_with(text, "power:"))
    return MeanDescriptor::power(parse_number(text.substr(6), text));
  if (starts_with(text, "gpath:"))
    return MeanDescriptor::geometric_path(parse_number(text.substr(6), text));
  if (starts_with(text, "path:r=")) {
    const auto rest = text.substr(7);
    const auto comma = rest.find(",t=");
    if (comma == std::string_view::npos)
      throw PreconditionError("parse_mean: expected 'path:r=<r>,t=<t>' in '" +
                              std::string(text) + "'");
    return MeanDescriptor::power_path(parse_number(rest.substr(0, comma), text),
                                      parse_number(rest.substr(comma + 3), text));
  }
  if (starts_with(text, "dual(") && text.size() > 6 && text.back() == ')')
    return MeanDescriptor::dual_of(parse_mean(text.substr(5, text.size() - 6)));
  throw PreconditionError("parse_mean: unknown mean '" + std::string(text) + "'");
}

}  // namespace meanscope
