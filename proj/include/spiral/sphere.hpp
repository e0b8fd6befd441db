#pragma once

// Direction sets on S^{d-1} and their normalized surface measures.

#include <memory>
#include <span>
#include <string>
#include <vector>

#include <nlohmann/json.hpp>

namespace spiral {

enum class Norm { Euclidean, Sup };

Norm norm_from_string(const std::string& s);
std::string to_string(Norm norm);

/// Tolerance on |u| - 1 for floating unit vectors.
inline constexpr double kUnitTolerance = 1e-12;

/// v / |v| (Euclidean). For d = 1 the result is exactly +1 or -1.
/// Throws ZeroVector when v = 0.
std::vector<double> direction(std::span<const double> v);

/// A measurable subset of S^{d-1} whose boundary has measure zero.
class DirectionSet {
 public:
  /// d = 1 only: any subset of S^0 = {-1, +1}.
  static DirectionSet sign_set(bool minus, bool plus);
  /// {u : center . u > cos(angle)}, angle in (0, pi).
  static DirectionSet cap(std::vector<double> center, double angle);
  /// {u : axis . u > 0}.
  static DirectionSet hemisphere(std::vector<double> axis);
  static DirectionSet complement(const DirectionSet& set);
  /// Parts must be pairwise disjoint; the measure is their sum.
  static DirectionSet disjoint_union(int dimension, std::vector<DirectionSet> parts);
  static DirectionSet empty(int dimension);
  static DirectionSet full(int dimension);

  /// Ambient dimension d (the set lives on S^{d-1} in R^d).
  int dimension() const;
  bool contains(std::span<const double> u) const;
  /// Normalized surface measure in [0, 1].
  double measure() const;

  nlohmann::json to_json() const;
  static DirectionSet from_json(const nlohmann::json& j);
  /// Command-line syntax: `sign:-1`, `sign:-1,1`, `hemisphere:1,0`,
  /// `cap:1,0:0.5`, `complement:<spec>`, `full:<d>`.
  static DirectionSet parse(const std::string& spec);

 private:
  struct Node;
  explicit DirectionSet(std::shared_ptr<const Node> node) : node_(std::move(node)) {}
  std::shared_ptr<const Node> node_;
};

/// Normalized measure of a cap of angular radius `angle` on S^{d-1}.
double cap_measure(int d, double angle);

/// Volume of the radius-r ball in R^d: pi^{d/2} r^d / Gamma(d/2 + 1) for the
/// Euclidean norm, (2r)^d for the sup norm.
double ball_volume(int d, double r, Norm norm);

}  // namespace spiral
