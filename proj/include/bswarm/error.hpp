#pragma once

#include <stdexcept>
#include <string>
#include <utility>

namespace bswarm {

class Error : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

class GraphError : public Error {
 public:
  enum class Kind { InvalidSize, NodeOutOfRange, SelfLoop, DuplicateEdge, NotConnected };

  GraphError(Kind kind, const std::string& what, std::pair<int, int> edge = {-1, -1})
      : Error(what), kind_(kind), edge_(edge) {}

  Kind kind() const noexcept { return kind_; }
  /// Offending pair for edge-level errors, (-1, -1) otherwise.
  std::pair<int, int> edge() const noexcept { return edge_; }

 private:
  Kind kind_;
  std::pair<int, int> edge_;
};

/// Target within range_epsilon of a sensor: the bearing is undefined.
class SingularGeometryError : public Error {
 public:
  SingularGeometryError(int sensor, double distance, const std::string& what)
      : Error(what), sensor_(sensor), distance_(distance) {}
  int sensor() const noexcept { return sensor_; }
  double distance() const noexcept { return distance_; }

 private:
  int sensor_;
  double distance_;
};

/// Stacked bearing-normal matrix H is rank deficient.
class ObservabilityError : public Error {
 public:
  ObservabilityError(double sigma_min, const std::string& what) : Error(what), sigma_min_(sigma_min) {}
  double sigma_min() const noexcept { return sigma_min_; }

 private:
  double sigma_min_;
};

class ParameterError : public Error {
 public:
  using Error::Error;
};

class TimeRangeError : public Error {
 public:
  using Error::Error;
};

/// Scenario could not be parsed or violates the schema. `field()` is a
/// dotted path such as "graph.edges[2]".
class ScenarioError : public Error {
 public:
  ScenarioError(std::string field, const std::string& what)
      : Error(field.empty() ? what : field + ": " + what), field_(std::move(field)) {}
  const std::string& field() const noexcept { return field_; }

 private:
  std::string field_;
};

/// Rate bound cannot be certified (trajectory grazes a sensor).
class CertificationError : public Error {
 public:
  using Error::Error;
};

}  // namespace bswarm
