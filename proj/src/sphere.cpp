#include "spiral/sphere.hpp"

#include <cmath>
#include <numbers>
#include <sstream>
#include <variant>

#include <boost/math/special_functions/beta.hpp>

#include "spiral/error.hpp"

namespace spiral {

namespace {

double dot(std::span<const double> a, std::span<const double> b) {
  double s = 0.0;
  for (std::size_t i = 0; i < a.size(); ++i) s += a[i] * b[i];
  return s;
}

std::vector<double> normalized(std::vector<double> v, const char* what) {
  if (v.empty()) throw Error(ErrorCode::InvalidArgument, std::string(what) + " must be non-empty");
  double n2 = dot(v, v);
  if (!(n2 > 0.0) || !std::isfinite(n2)) {
    throw Error(ErrorCode::InvalidArgument, std::string(what) + " must be a nonzero finite vector");
  }
  const double n = std::sqrt(n2);
  for (double& x : v) x /= n;
  return v;
}

std::vector<double> parse_coords(const std::string& text) {
  std::vector<double> out;
  std::stringstream ss(text);
  std::string item;
  while (std::getline(ss, item, ',')) {
    try {
      std::size_t used = 0;
      out.push_back(std::stod(item, &used));
      if (used != item.size()) throw std::invalid_argument(item);
    } catch (const std::exception&) {
      throw Error(ErrorCode::Config, "invalid coordinate '" + item + "' in direction set");
    }
  }
  if (out.empty()) throw Error(ErrorCode::Config, "direction set needs coordinates");
  return out;
}

}  // namespace

struct SignSetData {
  bool minus;
  bool plus;
};
struct CapData {
  std::vector<double> center;
  double angle;
};
struct HemisphereData {
  std::vector<double> axis;
};
struct ComplementData {
  DirectionSet of;
};
struct UnionData {
  std::vector<DirectionSet> parts;
};

struct DirectionSet::Node {
  int dimension;
  std::variant<SignSetData, CapData, HemisphereData, ComplementData, UnionData> data;
};

Norm norm_from_string(const std::string& s) {
  if (s == "euclidean" || s == "euclid" || s == "l2") return Norm::Euclidean;
  if (s == "sup" || s == "max" || s == "linf") return Norm::Sup;
  throw Error(ErrorCode::Config, "unknown norm '" + s + "' (expected euclidean or sup)");
}

std::string to_string(Norm norm) { return norm == Norm::Euclidean ? "euclidean" : "sup"; }

std::vector<double> direction(std::span<const double> v) {
  if (v.empty()) throw Error(ErrorCode::InvalidArgument, "direction of an empty vector");
  if (v.size() == 1) {
    if (v[0] == 0.0) throw Error(ErrorCode::ZeroVector, "direction of the zero vector");
    return {v[0] > 0.0 ? 1.0 : -1.0};
  }
  // Scale first so tiny vectors do not underflow in the norm.
  double big = 0.0;
  for (double x : v) big = std::max(big, std::abs(x));
  if (big == 0.0) throw Error(ErrorCode::ZeroVector, "direction of the zero vector");
  std::vector<double> u(v.begin(), v.end());
  for (double& x : u) x /= big;
  const double n = std::sqrt(dot(u, u));
  for (double& x : u) x /= n;
  return u;
}

DirectionSet DirectionSet::sign_set(bool minus, bool plus) {
  return DirectionSet(std::make_shared<const Node>(Node{1, SignSetData{minus, plus}}));
}

DirectionSet DirectionSet::cap(std::vector<double> center, double angle) {
  if (!(angle > 0.0 && angle < std::numbers::pi)) {
    throw Error(ErrorCode::InvalidArgument, "cap angle must lie in (0, pi)");
  }
  const int d = static_cast<int>(center.size());
  return DirectionSet(std::make_shared<const Node>(
      Node{d, CapData{normalized(std::move(center), "cap center"), angle}}));
}

DirectionSet DirectionSet::hemisphere(std::vector<double> axis) {
  const int d = static_cast<int>(axis.size());
  return DirectionSet(std::make_shared<const Node>(
      Node{d, HemisphereData{normalized(std::move(axis), "hemisphere axis")}}));
}

DirectionSet DirectionSet::complement(const DirectionSet& set) {
  return DirectionSet(std::make_shared<const Node>(Node{set.dimension(), ComplementData{set}}));
}

DirectionSet DirectionSet::disjoint_union(int dimension, std::vector<DirectionSet> parts) {
  if (dimension < 1) throw Error(ErrorCode::InvalidArgument, "direction set dimension must be >= 1");
  for (const auto& p : parts) {
    if (p.dimension() != dimension) {
      throw Error(ErrorCode::InvalidArgument, "union parts must share one dimension");
    }
  }
  return DirectionSet(std::make_shared<const Node>(Node{dimension, UnionData{std::move(parts)}}));
}

DirectionSet DirectionSet::empty(int dimension) { return disjoint_union(dimension, {}); }

DirectionSet DirectionSet::full(int dimension) { return complement(empty(dimension)); }

int DirectionSet::dimension() const { return node_->dimension; }

bool DirectionSet::contains(std::span<const double> u) const {
  if (static_cast<int>(u.size()) != node_->dimension) {
    throw Error(ErrorCode::InvalidArgument, "direction dimension does not match the set");
  }
  return std::visit(
      [&](const auto& data) -> bool {
        using T = std::decay_t<decltype(data)>;
        if constexpr (std::is_same_v<T, SignSetData>) {
          return u[0] < 0.0 ? data.minus : data.plus;
        } else if constexpr (std::is_same_v<T, CapData>) {
          return dot(data.center, u) > std::cos(data.angle);
        } else if constexpr (std::is_same_v<T, HemisphereData>) {
          return dot(data.axis, u) > 0.0;
        } else if constexpr (std::is_same_v<T, ComplementData>) {
          return !data.of.contains(u);
        } else {
          for (const auto& p : data.parts) {
            if (p.contains(u)) return true;
          }
          return false;
        }
      },
      node_->data);
}

double DirectionSet::measure() const {
  const int d = node_->dimension;
  return std::visit(
      [&](const auto& data) -> double {
        using T = std::decay_t<decltype(data)>;
        if constexpr (std::is_same_v<T, SignSetData>) {
          return 0.5 * (static_cast<int>(data.minus) + static_cast<int>(data.plus));
        } else if constexpr (std::is_same_v<T, CapData>) {
          return cap_measure(d, data.angle);
        } else if constexpr (std::is_same_v<T, HemisphereData>) {
          return 0.5;
        } else if constexpr (std::is_same_v<T, ComplementData>) {
          return 1.0 - data.of.measure();
        } else {
          double s = 0.0;
          for (const auto& p : data.parts) s += p.measure();
          return s;
        }
      },
      node_->data);
}

double cap_measure(int d, double angle) {
  if (d < 1) throw Error(ErrorCode::InvalidArgument, "cap dimension must be >= 1");
  if (d == 1) return 0.5;  // {center} for every angle in (0, pi)
  if (angle > std::numbers::pi / 2) return 1.0 - cap_measure(d, std::numbers::pi - angle);
  const double s = std::sin(angle);
  return 0.5 * boost::math::ibeta(0.5 * (d - 1), 0.5, s * s);
}

double ball_volume(int d, double r, Norm norm) {
  if (d < 1 || r < 0.0) throw Error(ErrorCode::InvalidArgument, "ball_volume needs d >= 1, r >= 0");
  if (norm == Norm::Sup) return std::pow(2.0 * r, d);
  const double omega = std::pow(std::numbers::pi, 0.5 * d) / std::tgamma(0.5 * d + 1.0);
  return omega * std::pow(r, d);
}

nlohmann::json DirectionSet::to_json() const {
  return std::visit(
      [&](const auto& data) -> nlohmann::json {
        using T = std::decay_t<decltype(data)>;
        if constexpr (std::is_same_v<T, SignSetData>) {
          nlohmann::json signs = nlohmann::json::array();
          if (data.minus) signs.push_back(-1);
          if (data.plus) signs.push_back(1);
          return {{"type", "sign"}, {"signs", signs}};
        } else if constexpr (std::is_same_v<T, CapData>) {
          return {{"type", "cap"}, {"center", data.center}, {"angle", data.angle}};
        } else if constexpr (std::is_same_v<T, HemisphereData>) {
          return {{"type", "hemisphere"}, {"axis", data.axis}};
        } else if constexpr (std::is_same_v<T, ComplementData>) {
          return {{"type", "complement"}, {"of", data.of.to_json()}};
        } else {
          nlohmann::json parts = nlohmann::json::array();
          for (const auto& p : data.parts) parts.push_back(p.to_json());
          return {{"type", "union"}, {"dimension", node_->dimension}, {"parts", parts}};
        }
      },
      node_->data);
}

DirectionSet DirectionSet::from_json(const nlohmann::json& j) {
  try {
    const std::string type = j.at("type").get<std::string>();
    if (type == "sign") {
      bool minus = false, plus = false;
      for (const auto& s : j.at("signs")) {
        const int v = s.get<int>();
        if (v == -1) minus = true;
        else if (v == 1) plus = true;
        else throw Error(ErrorCode::Config, "sign set entries must be -1 or 1");
      }
      return sign_set(minus, plus);
    }
    if (type == "cap") return cap(j.at("center").get<std::vector<double>>(), j.at("angle").get<double>());
    if (type == "hemisphere") return hemisphere(j.at("axis").get<std::vector<double>>());
    if (type == "complement") return complement(from_json(j.at("of")));
    if (type == "union") {
      std::vector<DirectionSet> parts;
      for (const auto& p : j.at("parts")) parts.push_back(from_json(p));
      return disjoint_union(j.at("dimension").get<int>(), std::move(parts));
    }
    throw Error(ErrorCode::Config, "unknown direction set type '" + type + "'");
  } catch (const nlohmann::json::exception& e) {
    throw Error(ErrorCode::Config, std::string("malformed direction set: ") + e.what());
  } catch (const Error& e) {
    if (e.code() == ErrorCode::InvalidArgument) throw Error(ErrorCode::Config, e.what());
    throw;
  }
}

DirectionSet DirectionSet::parse(const std::string& spec) {
  const auto colon = spec.find(':');
  if (colon == std::string::npos) throw Error(ErrorCode::Config, "direction set '" + spec + "' lacks ':'");
  const std::string head = spec.substr(0, colon);
  const std::string rest = spec.substr(colon + 1);
  try {
    if (head == "sign") {
      bool minus = false, plus = false;
      for (double s : parse_coords(rest)) {
        if (s == -1.0) minus = true;
        else if (s == 1.0) plus = true;
        else throw Error(ErrorCode::Config, "sign set entries must be -1 or 1");
      }
      return sign_set(minus, plus);
    }
    if (head == "hemisphere") return hemisphere(parse_coords(rest));
    if (head == "cap") {
      const auto sep = rest.rfind(':');
      if (sep == std::string::npos) throw Error(ErrorCode::Config, "cap syntax is cap:<center>:<angle>");
      const auto angle = parse_coords(rest.substr(sep + 1));
      return cap(parse_coords(rest.substr(0, sep)), angle.at(0));
    }
    if (head == "complement") return complement(parse(rest));
    if (head == "full") return full(static_cast<int>(parse_coords(rest).at(0)));
  } catch (const Error& e) {
    if (e.code() == ErrorCode::InvalidArgument) throw Error(ErrorCode::Config, e.what());
    throw;
  }
  throw Error(ErrorCode::Config, "unknown direction set kind '" + head + "'");
}

}  // namespace spiral
