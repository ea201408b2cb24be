#include "ietlab/core/domain.hpp"

#include <algorithm>
#include <cctype>
#include <unordered_set>

#include "ietlab/errors.hpp"

namespace ietlab {

namespace {

const std::shared_ptr<const std::vector<Component>>& empty_components() {
  static const auto empty = std::make_shared<const std::vector<Component>>();
  return empty;
}

bool valid_id(std::string_view id) {
  if (id.empty()) return false;
  return std::none_of(id.begin(), id.end(), [](char c) { return std::isspace(static_cast<unsigned char>(c)); });
}

}  // namespace

Domain::Domain() : data_(empty_components()) {}

Domain::Domain(std::vector<Component> components) {
  std::unordered_set<std::string> ids;
  for (const auto& c : components) {
    if (!valid_id(c.id)) throw InvalidArgument("component id must be a non-empty token without whitespace: '" + c.id + "'");
    if (!ids.insert(c.id).second) throw InvalidArgument("duplicate component id '" + c.id + "'");
    if (c.length.sign() <= 0) throw InvalidArgument("component '" + c.id + "' must have positive length");
  }
  data_ = std::make_shared<const std::vector<Component>>(std::move(components));
}

Domain Domain::interval(QuadNum length, std::string id) {
  return Domain({Component{ComponentKind::kInterval, std::move(length), std::move(id)}});
}

Domain Domain::circle(QuadNum length, std::string id) {
  return Domain({Component{ComponentKind::kCircle, std::move(length), std::move(id)}});
}

std::optional<std::size_t> Domain::find(std::string_view id) const {
  for (std::size_t i = 0; i < data_->size(); ++i)
    if ((*data_)[i].id == id) return i;
  return std::nullopt;
}

std::size_t Domain::index_of(std::string_view id) const {
  if (auto i = find(id)) return *i;
  throw InvalidArgument("unknown component id '" + std::string(id) + "'");
}

QuadNum Domain::total_length() const {
  QuadNum total;
  for (const auto& c : *data_) total += c.length;
  return total;
}

bool Domain::all_circles() const {
  return std::all_of(data_->begin(), data_->end(), [](const Component& c) { return c.is_circle(); });
}

bool operator==(const Domain& lhs, const Domain& rhs) {
  return lhs.data_ == rhs.data_ || *lhs.data_ == *rhs.data_;
}

Point normalize_point(const Domain& domain, Point p) {
  if (p.component >= domain.size()) throw InvalidArgument("point component index out of range");
  const QuadNum& len = domain.length(p.component);
  if (domain.is_circle(p.component)) {
    p.coord = p.coord.mod(len);
    return p;
  }
  if (p.coord.sign() < 0 || p.coord >= len)
    throw InvalidArgument("point " + p.coord.str() + " outside interval '" + domain[p.component].id + "'");
  return p;
}

bool is_interior(const Domain& domain, const Point& p) {
  if (domain.is_circle(p.component)) return true;
  return p.coord.sign() > 0 && p.coord < domain.length(p.component);
}

std::string point_str(const Domain& domain, const Point& p) {
  return domain[p.component].id + ":" + p.coord.str();
}

}  // namespace ietlab
