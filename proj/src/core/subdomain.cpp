#include "ietlab/core/subdomain.hpp"

#include <algorithm>

#include "ietlab/errors.hpp"

namespace ietlab {

Subdomain::Subdomain(Domain domain, const std::vector<Arc>& arcs) : domain_(std::move(domain)) {
  for (const auto& a : arcs) add_arc(a);
  normalize();
}

Subdomain Subdomain::whole(const Domain& domain) {
  std::vector<Arc> arcs;
  for (std::size_t i = 0; i < domain.size(); ++i) arcs.push_back(Arc{i, QuadNum(0), domain.length(i)});
  return Subdomain(domain, arcs);
}

void Subdomain::add_arc(const Arc& arc) {
  if (arc.component >= domain_.size()) throw InvalidArgument("arc component out of range");
  if (arc.length.sign() < 0) throw InvalidArgument("arc with negative length");
  if (arc.length.is_zero()) return;
  const QuadNum& len = domain_.length(arc.component);
  if (arc.length > len) throw InvalidArgument("arc longer than its component");
  if (domain_.is_circle(arc.component)) {
    if (arc.length == len) {
      parts_.push_back(Arc{arc.component, QuadNum(0), len});
      return;
    }
    QuadNum start = arc.start.mod(len);
    QuadNum end = start + arc.length;
    if (end > len) {
      parts_.push_back(Arc{arc.component, start, len - start});
      parts_.push_back(Arc{arc.component, QuadNum(0), end - len});
    } else {
      parts_.push_back(Arc{arc.component, std::move(start), arc.length});
    }
    return;
  }
  if (arc.start.sign() < 0 || arc.start + arc.length > len)
    throw InvalidArgument("arc [" + arc.start.str() + ", +" + arc.length.str() + ") leaves interval '" +
                          domain_[arc.component].id + "'");
  parts_.push_back(arc);
}

void Subdomain::normalize() {
  std::sort(parts_.begin(), parts_.end(), [](const Arc& x, const Arc& y) {
    if (x.component != y.component) return x.component < y.component;
    return x.start < y.start;
  });
  std::vector<Arc> merged;
  for (auto& a : parts_) {
    if (!merged.empty() && merged.back().component == a.component) {
      Arc& last = merged.back();
      QuadNum last_end = last.start + last.length;
      if (a.start <= last_end) {
        QuadNum end = max(last_end, a.start + a.length);
        last.length = end - last.start;
        continue;
      }
    }
    merged.push_back(std::move(a));
  }
  parts_ = std::move(merged);
}

void Subdomain::check_same_domain(const Subdomain& other) const {
  if (!(domain_ == other.domain_)) throw DomainMismatch("subdomains of different domains");
}

std::vector<Arc> Subdomain::maximal_arcs() const {
  std::vector<Arc> out;
  std::size_t i = 0;
  while (i < parts_.size()) {
    std::size_t j = i;
    while (j < parts_.size() && parts_[j].component == parts_[i].component) ++j;
    const std::size_t c = parts_[i].component;
    const QuadNum& len = domain_.length(c);
    std::vector<Arc> comp(parts_.begin() + static_cast<std::ptrdiff_t>(i), parts_.begin() + static_cast<std::ptrdiff_t>(j));
    if (domain_.is_circle(c) && comp.size() > 1 && comp.front().start.is_zero() &&
        comp.back().start + comp.back().length == len) {
      comp.back().length += comp.front().length;
      comp.erase(comp.begin());
    }
    out.insert(out.end(), comp.begin(), comp.end());
    i = j;
  }
  return out;
}

bool Subdomain::contains(const Point& p) const {
  for (const auto& a : parts_)
    if (a.component == p.component && a.start <= p.coord && p.coord < a.start + a.length) return true;
  return false;
}

bool Subdomain::subset_of(const Subdomain& other) const { return subtract(other).empty(); }

QuadNum Subdomain::measure() const {
  QuadNum total;
  for (const auto& a : parts_) total += a.length;
  return total;
}

Subdomain Subdomain::unite(const Subdomain& other) const {
  check_same_domain(other);
  Subdomain out(domain_);
  out.parts_ = parts_;
  out.parts_.insert(out.parts_.end(), other.parts_.begin(), other.parts_.end());
  out.normalize();
  return out;
}

Subdomain Subdomain::intersect(const Subdomain& other) const {
  check_same_domain(other);
  Subdomain out(domain_);
  for (const auto& a : parts_)
    for (const auto& b : other.parts_) {
      if (a.component != b.component) continue;
      QuadNum lo = max(a.start, b.start);
      QuadNum hi = min(a.start + a.length, b.start + b.length);
      if (lo < hi) out.parts_.push_back(Arc{a.component, lo, hi - lo});
    }
  out.normalize();
  return out;
}

Subdomain Subdomain::subtract(const Subdomain& other) const {
  check_same_domain(other);
  Subdomain out(domain_);
  for (const auto& a : parts_) {
    QuadNum cursor = a.start;
    const QuadNum end = a.start + a.length;
    for (const auto& b : other.parts_) {
      if (b.component != a.component) continue;
      const QuadNum b_end = b.start + b.length;
      if (b_end <= cursor || b.start >= end) continue;
      if (b.start > cursor) out.parts_.push_back(Arc{a.component, cursor, b.start - cursor});
      cursor = max(cursor, b_end);
      if (cursor >= end) break;
    }
    if (cursor < end) out.parts_.push_back(Arc{a.component, cursor, end - cursor});
  }
  out.normalize();
  return out;
}

std::string Subdomain::str() const {
  if (parts_.empty()) return "{}";
  std::string out;
  for (const auto& a : maximal_arcs()) {
    if (!out.empty()) out += " u ";
    const auto& comp = domain_[a.component];
    if (comp.is_circle() && a.length == comp.length) {
      out += comp.id + ":circle";
      continue;
    }
    QuadNum end = a.start + a.length;
    if (comp.is_circle()) end = end.mod(comp.length);
    out += comp.id + ":[" + a.start.str() + ", " + end.str() + ")";
  }
  return out;
}

bool operator==(const Subdomain& lhs, const Subdomain& rhs) {
  return lhs.domain_ == rhs.domain_ && lhs.parts_ == rhs.parts_;
}

}  // namespace ietlab
