#pragma once

#include <compare>
#include <cstddef>
#include <memory>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include "ietlab/field/quadnum.hpp"

namespace ietlab {

enum class ComponentKind { kCircle, kInterval };

/// One connected piece of a domain: the circle R/lZ or the interval [0, l).
struct Component {
  ComponentKind kind = ComponentKind::kInterval;
  QuadNum length;
  std::string id;

  bool is_circle() const noexcept { return kind == ComponentKind::kCircle; }
  friend bool operator==(const Component&, const Component&) = default;
};

/// A finite disjoint union of circles and half-open intervals.
///
/// Immutable; copies share storage. Lengths are strictly positive and ids are
/// unique whitespace-free tokens.
class Domain {
 public:
  Domain();
  explicit Domain(std::vector<Component> components);

  static Domain interval(QuadNum length = QuadNum(1), std::string id = "I");
  static Domain circle(QuadNum length = QuadNum(1), std::string id = "C");

  std::size_t size() const noexcept { return data_->size(); }
  bool empty() const noexcept { return data_->empty(); }
  const Component& operator[](std::size_t i) const { return (*data_)[i]; }
  const std::vector<Component>& components() const noexcept { return *data_; }
  const QuadNum& length(std::size_t i) const { return (*data_)[i].length; }
  bool is_circle(std::size_t i) const { return (*data_)[i].is_circle(); }

  std::optional<std::size_t> find(std::string_view id) const;
  /// Throws InvalidArgument for unknown ids.
  std::size_t index_of(std::string_view id) const;

  QuadNum total_length() const;
  bool all_circles() const;

  friend bool operator==(const Domain& lhs, const Domain& rhs);

 private:
  std::shared_ptr<const std::vector<Component>> data_;
};

/// A point of a domain. Coordinates lie in [0, length); closure points of an
/// interval (coordinate == length) are produced only by left limits.
struct Point {
  std::size_t component = 0;
  QuadNum coord;

  friend bool operator==(const Point&, const Point&) = default;
  friend std::strong_ordering operator<=>(const Point& lhs, const Point& rhs) {
    if (auto c = lhs.component <=> rhs.component; c != 0) return c;
    return lhs.coord <=> rhs.coord;
  }
};

/// Validates `p` as a point of `domain`, reducing circle coordinates modulo
/// the circle length. Throws InvalidArgument when outside.
Point normalize_point(const Domain& domain, Point p);

/// True iff p has a neighbourhood isometric to an open interval.
bool is_interior(const Domain& domain, const Point& p);

std::string point_str(const Domain& domain, const Point& p);

struct PointHash {
  std::size_t operator()(const Point& p) const { return p.coord.hash() * 31u + p.component; }
};

}  // namespace ietlab
