#pragma once

#include <cstddef>
#include <string>
#include <vector>

#include "ietlab/core/domain.hpp"

namespace ietlab {

/// Half-open arc [start, start + length) of one component. On circles the arc
/// may wrap past the origin; length never exceeds the component length.
struct Arc {
  std::size_t component = 0;
  QuadNum start;
  QuadNum length;

  friend bool operator==(const Arc&, const Arc&) = default;
};

/// Finite union of half-open intervals and circles of a domain.
///
/// Stored normalized: per component a sorted list of disjoint, non-adjacent,
/// non-wrapping intervals. Two subdomains are equal iff they are equal sets.
class Subdomain {
 public:
  Subdomain() = default;
  explicit Subdomain(Domain domain) : domain_(std::move(domain)) {}
  Subdomain(Domain domain, const std::vector<Arc>& arcs);

  static Subdomain whole(const Domain& domain);

  const Domain& domain() const noexcept { return domain_; }
  bool empty() const noexcept { return parts_.empty(); }

  /// Normalized non-wrapping parts, sorted by (component, start).
  const std::vector<Arc>& parts() const noexcept { return parts_; }
  /// Maximal arcs: parts joined across the origin of circles; a full circle is
  /// reported as one arc starting at 0.
  std::vector<Arc> maximal_arcs() const;

  bool contains(const Point& p) const;
  bool subset_of(const Subdomain& other) const;
  QuadNum measure() const;

  Subdomain unite(const Subdomain& other) const;
  Subdomain intersect(const Subdomain& other) const;
  Subdomain subtract(const Subdomain& other) const;

  std::string str() const;

  friend bool operator==(const Subdomain& lhs, const Subdomain& rhs);

 private:
  void add_arc(const Arc& arc);
  void normalize();
  void check_same_domain(const Subdomain& other) const;

  Domain domain_;
  std::vector<Arc> parts_;
};

}  // namespace ietlab
