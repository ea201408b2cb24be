#include "ietlab/field/lp.hpp"

#include <algorithm>
#include <numeric>
#include <set>
#include <sstream>

#include "ietlab/errors.hpp"

namespace ietlab {

Rational LinConstraint::evaluate(std::span<const Rational> point) const {
  Rational sum = constant;
  for (std::size_t i = 0; i < coefficients.size(); ++i)
    if (sgn(coefficients[i]) != 0) sum += coefficients[i] * point[i];
  return sum;
}

QuadNum LinConstraint::evaluate(std::span<const QuadNum> point) const {
  QuadNum sum(constant);
  for (std::size_t i = 0; i < coefficients.size(); ++i)
    if (sgn(coefficients[i]) != 0) sum += QuadNum(coefficients[i]) * point[i];
  return sum;
}

bool LinConstraint::satisfied_by(std::span<const Rational> point) const {
  const int s = sgn(evaluate(point));
  return relation == Relation::kEqualZero ? s == 0 : s > 0;
}

bool LinConstraint::satisfied_by(std::span<const QuadNum> point) const {
  const int s = evaluate(point).sign();
  return relation == Relation::kEqualZero ? s == 0 : s > 0;
}

LinConstraint LinConstraint::normalized() const {
  // Multiply by the lcm of denominators, divide by the gcd of numerators.
  Integer lcm = 1;
  auto fold_den = [&](const Rational& r) { mpz_lcm(lcm.get_mpz_t(), lcm.get_mpz_t(), r.get_den_mpz_t()); };
  for (const auto& c : coefficients) fold_den(c);
  fold_den(constant);
  Integer gcd = 0;
  auto fold_num = [&](const Rational& r) {
    Integer v = r.get_num() * (lcm / r.get_den());
    mpz_gcd(gcd.get_mpz_t(), gcd.get_mpz_t(), v.get_mpz_t());
  };
  for (const auto& c : coefficients) fold_num(c);
  fold_num(constant);
  LinConstraint out = *this;
  if (gcd == 0) return out;
  Rational scale(lcm, gcd);
  scale.canonicalize();
  for (auto& c : out.coefficients) c *= scale;
  out.constant *= scale;
  if (relation == Relation::kEqualZero) {
    // Sign of an equality is irrelevant; fix it by the first nonzero entry.
    const Rational* lead = nullptr;
    for (const auto& c : out.coefficients)
      if (sgn(c) != 0) {
        lead = &c;
        break;
      }
    if (lead == nullptr) lead = &out.constant;
    if (sgn(*lead) < 0) {
      for (auto& c : out.coefficients) c = -c;
      out.constant = -out.constant;
    }
  }
  return out;
}

std::string LinConstraint::str() const {
  std::ostringstream os;
  bool first = true;
  for (std::size_t i = 0; i < coefficients.size(); ++i) {
    if (sgn(coefficients[i]) == 0) continue;
    if (!first) os << " + ";
    os << coefficients[i].get_str() << "*x" << i;
    first = false;
  }
  if (!first) os << " + ";
  os << constant.get_str() << (relation == Relation::kEqualZero ? " = 0" : " > 0");
  return os.str();
}

void ConstraintSystem::add(LinConstraint constraint) {
  if (constraint.coefficients.size() != dimension_)
    throw InvalidArgument("constraint has " + std::to_string(constraint.coefficients.size()) +
                          " coefficients, system dimension is " + std::to_string(dimension_));
  constraints_.push_back(std::move(constraint));
}

void ConstraintSystem::add_equal(std::vector<Rational> coefficients, Rational constant) {
  add(LinConstraint{std::move(coefficients), std::move(constant), Relation::kEqualZero});
}

void ConstraintSystem::add_positive(std::vector<Rational> coefficients, Rational constant) {
  add(LinConstraint{std::move(coefficients), std::move(constant), Relation::kStrictlyPositive});
}

bool ConstraintSystem::satisfied_by(std::span<const Rational> point) const {
  return std::all_of(constraints_.begin(), constraints_.end(), [&](const auto& c) { return c.satisfied_by(point); });
}

bool ConstraintSystem::satisfied_by(std::span<const QuadNum> point) const {
  return std::all_of(constraints_.begin(), constraints_.end(), [&](const auto& c) { return c.satisfied_by(point); });
}

namespace {

struct ConstraintKey {
  std::vector<Rational> coefficients;
  Rational constant;
  Relation relation;

  bool operator<(const ConstraintKey& other) const {
    if (relation != other.relation) return relation < other.relation;
    for (std::size_t i = 0; i < coefficients.size(); ++i) {
      const int c = cmp(coefficients[i], other.coefficients[i]);
      if (c != 0) return c < 0;
    }
    return cmp(constant, other.constant) < 0;
  }
};

bool all_zero(const std::vector<Rational>& v) {
  return std::all_of(v.begin(), v.end(), [](const Rational& r) { return sgn(r) == 0; });
}

}  // namespace

ConstraintSystem ConstraintSystem::deduplicated() const {
  ConstraintSystem out(dimension_);
  std::set<ConstraintKey> seen;
  for (const auto& c : constraints_) {
    LinConstraint n = c.normalized();
    if (all_zero(n.coefficients)) {
      const bool trivially_true =
          n.relation == Relation::kEqualZero ? sgn(n.constant) == 0 : sgn(n.constant) > 0;
      if (trivially_true) continue;
    }
    ConstraintKey key{n.coefficients, n.constant, n.relation};
    if (seen.insert(key).second) out.constraints_.push_back(std::move(n));
  }
  return out;
}

namespace lp_detail {

namespace {

class Tableau {
 public:
  Tableau(std::vector<std::vector<Rational>> rows, std::vector<std::size_t> basis)
      : rows_(std::move(rows)), basis_(std::move(basis)) {}

  std::size_t width() const { return rows_.empty() ? 0 : rows_.front().size() - 1; }

  // Z[j] = c_B . column_j - c_j; the last entry is the objective value.
  void set_objective(const std::vector<Rational>& cost) {
    const std::size_t n = width();
    z_.assign(n + 1, Rational(0));
    for (std::size_t j = 0; j < n; ++j) z_[j] = -cost[j];
    for (std::size_t i = 0; i < rows_.size(); ++i) {
      const Rational& cb = cost[basis_[i]];
      if (sgn(cb) == 0) continue;
      for (std::size_t j = 0; j <= n; ++j)
        if (sgn(rows_[i][j]) != 0) z_[j] += cb * rows_[i][j];
    }
  }

  // Runs Bland's rule to optimality. Returns false when unbounded.
  bool optimize(std::size_t usable_columns) {
    const std::size_t rhs = width();
    for (;;) {
      std::size_t entering = usable_columns;
      for (std::size_t j = 0; j < usable_columns; ++j)
        if (sgn(z_[j]) < 0) {
          entering = j;
          break;
        }
      if (entering == usable_columns) return true;
      std::size_t leaving = rows_.size();
      Rational best_ratio;
      for (std::size_t i = 0; i < rows_.size(); ++i) {
        if (sgn(rows_[i][entering]) <= 0) continue;
        Rational ratio = rows_[i][rhs] / rows_[i][entering];
        if (leaving == rows_.size()) {
          leaving = i;
          best_ratio = ratio;
          continue;
        }
        const int c = cmp(ratio, best_ratio);
        if (c < 0 || (c == 0 && basis_[i] < basis_[leaving])) {
          leaving = i;
          best_ratio = ratio;
        }
      }
      if (leaving == rows_.size()) return false;
      pivot(leaving, entering);
    }
  }

  void pivot(std::size_t r, std::size_t col) {
    const std::size_t n = width();
    Rational inv = 1 / rows_[r][col];
    for (std::size_t j = 0; j <= n; ++j)
      if (sgn(rows_[r][j]) != 0) rows_[r][j] *= inv;
    auto eliminate = [&](std::vector<Rational>& row) {
      if (sgn(row[col]) == 0) return;
      Rational factor = row[col];
      for (std::size_t j = 0; j <= n; ++j)
        if (sgn(rows_[r][j]) != 0) row[j] -= factor * rows_[r][j];
    };
    for (std::size_t i = 0; i < rows_.size(); ++i)
      if (i != r) eliminate(rows_[i]);
    if (!z_.empty()) eliminate(z_);
    basis_[r] = col;
  }

  const Rational& objective_value() const { return z_.back(); }

  std::vector<std::vector<Rational>>& rows() { return rows_; }
  std::vector<std::size_t>& basis() { return basis_; }

  std::vector<Rational> solution(std::size_t n_vars) const {
    std::vector<Rational> y(n_vars, Rational(0));
    const std::size_t rhs = width();
    for (std::size_t i = 0; i < rows_.size(); ++i)
      if (basis_[i] < n_vars) y[basis_[i]] = rows_[i][rhs];
    return y;
  }

  void drop_column_range(std::size_t from, std::size_t to) {
    for (auto& row : rows_) row.erase(row.begin() + static_cast<std::ptrdiff_t>(from), row.begin() + static_cast<std::ptrdiff_t>(to));
  }

 private:
  std::vector<std::vector<Rational>> rows_;
  std::vector<std::size_t> basis_;
  std::vector<Rational> z_;
};

}  // namespace

LpResult solve_standard_form(std::vector<std::vector<Rational>> matrix, std::vector<Rational> rhs,
                             const std::vector<Rational>& objective) {
  const std::size_t m = matrix.size();
  const std::size_t n = objective.size();
  LpResult result;
  if (m == 0) {
    // Only y >= 0: optimum at 0 unless some cost is positive.
    for (const auto& c : objective)
      if (sgn(c) > 0) {
        result.status = LpStatus::kUnbounded;
        return result;
      }
    result.status = LpStatus::kOptimal;
    result.solution.assign(n, Rational(0));
    result.objective = 0;
    return result;
  }

  // Phase 1 tableau [A | I | b] with b >= 0.
  std::vector<std::vector<Rational>> rows(m, std::vector<Rational>(n + m + 1, Rational(0)));
  std::vector<std::size_t> basis(m);
  for (std::size_t i = 0; i < m; ++i) {
    const bool flip = sgn(rhs[i]) < 0;
    for (std::size_t j = 0; j < n; ++j) rows[i][j] = flip ? Rational(-matrix[i][j]) : matrix[i][j];
    rows[i][n + i] = 1;
    rows[i][n + m] = flip ? Rational(-rhs[i]) : rhs[i];
    basis[i] = n + i;
  }
  Tableau tab(std::move(rows), std::move(basis));
  std::vector<Rational> phase1_cost(n + m, Rational(0));
  for (std::size_t i = 0; i < m; ++i) phase1_cost[n + i] = -1;
  tab.set_objective(phase1_cost);
  tab.optimize(n + m);
  if (sgn(tab.objective_value()) < 0) {
    result.status = LpStatus::kInfeasible;
    return result;
  }

  // Drive artificial variables out of the basis; drop redundant rows.
  for (std::size_t i = 0; i < tab.rows().size();) {
    if (tab.basis()[i] < n) {
      ++i;
      continue;
    }
    std::size_t col = n;
    for (std::size_t j = 0; j < n; ++j)
      if (sgn(tab.rows()[i][j]) != 0) {
        col = j;
        break;
      }
    if (col < n) {
      tab.pivot(i, col);
      ++i;
    } else {
      tab.rows().erase(tab.rows().begin() + static_cast<std::ptrdiff_t>(i));
      tab.basis().erase(tab.basis().begin() + static_cast<std::ptrdiff_t>(i));
    }
  }
  tab.drop_column_range(n, n + m);

  tab.set_objective(objective);
  if (!tab.optimize(n)) {
    result.status = LpStatus::kUnbounded;
    return result;
  }
  result.status = LpStatus::kOptimal;
  result.solution = tab.solution(n);
  result.objective = tab.objective_value();
  return result;
}

}  // namespace lp_detail

namespace {

// x = base + directions * z, z free.
struct AffineParametrization {
  std::vector<Rational> base;
  std::vector<std::vector<Rational>> directions;  // [variable][free index]
  std::size_t free_count = 0;
};

// Solves the equalities by Gauss-Jordan elimination. nullopt if inconsistent.
std::optional<AffineParametrization> parametrize_equalities(std::size_t dim, const std::vector<LinConstraint>& eqs) {
  // Rows: coefficients | -constant
  std::vector<std::vector<Rational>> m;
  m.reserve(eqs.size());
  for (const auto& e : eqs) {
    std::vector<Rational> row(e.coefficients);
    row.push_back(-e.constant);
    m.push_back(std::move(row));
  }
  std::vector<std::size_t> pivot_cols;
  std::size_t r = 0;
  for (std::size_t c = 0; c < dim && r < m.size(); ++c) {
    std::size_t p = r;
    while (p < m.size() && sgn(m[p][c]) == 0) ++p;
    if (p == m.size()) continue;
    std::swap(m[r], m[p]);
    Rational inv = 1 / m[r][c];
    for (auto& v : m[r]) v *= inv;
    for (std::size_t i = 0; i < m.size(); ++i) {
      if (i == r || sgn(m[i][c]) == 0) continue;
      Rational f = m[i][c];
      for (std::size_t j = 0; j <= dim; ++j) m[i][j] -= f * m[r][j];
    }
    pivot_cols.push_back(c);
    ++r;
  }
  for (std::size_t i = r; i < m.size(); ++i)
    if (sgn(m[i][dim]) != 0) return std::nullopt;

  std::vector<bool> is_pivot(dim, false);
  for (auto c : pivot_cols) is_pivot[c] = true;
  std::vector<std::size_t> free_vars;
  for (std::size_t c = 0; c < dim; ++c)
    if (!is_pivot[c]) free_vars.push_back(c);

  AffineParametrization param;
  param.free_count = free_vars.size();
  param.base.assign(dim, Rational(0));
  param.directions.assign(dim, std::vector<Rational>(free_vars.size(), Rational(0)));
  for (std::size_t k = 0; k < free_vars.size(); ++k) param.directions[free_vars[k]][k] = 1;
  for (std::size_t i = 0; i < pivot_cols.size(); ++i) {
    const std::size_t p = pivot_cols[i];
    param.base[p] = m[i][dim];
    for (std::size_t k = 0; k < free_vars.size(); ++k) param.directions[p][k] = -m[i][free_vars[k]];
  }
  return param;
}

std::vector<Rational> evaluate_parametrization(const AffineParametrization& param, const std::vector<Rational>& z) {
  std::vector<Rational> x = param.base;
  for (std::size_t i = 0; i < x.size(); ++i)
    for (std::size_t k = 0; k < z.size(); ++k)
      if (sgn(param.directions[i][k]) != 0 && sgn(z[k]) != 0) x[i] += param.directions[i][k] * z[k];
  return x;
}

}  // namespace

std::optional<std::vector<Rational>> lp_rational_point(const ConstraintSystem& system, const LpOptions& options) {
  const ConstraintSystem sys = system.deduplicated();
  const std::size_t dim = sys.dimension();

  std::vector<LinConstraint> eqs, strict;
  for (const auto& c : sys.constraints()) (c.relation == Relation::kEqualZero ? eqs : strict).push_back(c);

  auto param = parametrize_equalities(dim, eqs);
  if (!param) return std::nullopt;
  const std::size_t k = param->free_count;

  // Strict forms in the free coordinates: a . z + c > 0.
  ConstraintSystem reduced(k);
  for (const auto& s : strict) {
    std::vector<Rational> a(k, Rational(0));
    Rational c = s.constant;
    for (std::size_t i = 0; i < dim; ++i) {
      if (sgn(s.coefficients[i]) == 0) continue;
      c += s.coefficients[i] * param->base[i];
      for (std::size_t j = 0; j < k; ++j)
        if (sgn(param->directions[i][j]) != 0) a[j] += s.coefficients[i] * param->directions[i][j];
    }
    if (all_zero(a)) {
      if (sgn(c) <= 0) return std::nullopt;
      continue;
    }
    reduced.add_positive(std::move(a), std::move(c));
  }
  const ConstraintSystem rsys = reduced.deduplicated();
  const std::size_t m = rsys.size();

  std::vector<Rational> z(k, Rational(0));
  if (m > 0) {
    // Columns: z+ (k), z- (k), t, s_i (m), s_cap.
    const std::size_t t_col = 2 * k;
    const std::size_t n_cols = 2 * k + 1 + m + 1;
    std::vector<std::vector<Rational>> a(m + 1, std::vector<Rational>(n_cols, Rational(0)));
    std::vector<Rational> b(m + 1, Rational(0));
    for (std::size_t i = 0; i < m; ++i) {
      const auto& c = rsys.constraints()[i];
      for (std::size_t j = 0; j < k; ++j) {
        a[i][j] = c.coefficients[j];
        a[i][k + j] = -c.coefficients[j];
      }
      a[i][t_col] = -1;
      a[i][t_col + 1 + i] = -1;
      b[i] = -c.constant;
    }
    a[m][t_col] = 1;
    a[m][n_cols - 1] = 1;
    b[m] = 1;
    std::vector<Rational> cost(n_cols, Rational(0));
    cost[t_col] = 1;

    auto res = lp_detail::solve_standard_form(a, b, cost);
    if (res.status != lp_detail::LpStatus::kOptimal || sgn(res.objective) <= 0) return std::nullopt;
    std::vector<Rational> y = res.solution;

    if (options.secondary_objective.size() == dim) {
      // Keep t >= t*/2 and push the point along the secondary objective.
      auto a2 = a;
      for (auto& row : a2) row.push_back(0);
      std::vector<Rational> floor_row(n_cols + 1, Rational(0));
      floor_row[t_col] = 1;
      floor_row[n_cols] = -1;
      a2.push_back(std::move(floor_row));
      auto b2 = b;
      b2.push_back(res.objective / 2);
      std::vector<Rational> cost2(n_cols + 1, Rational(0));
      for (std::size_t j = 0; j < k; ++j) {
        Rational w = 0;
        for (std::size_t i = 0; i < dim; ++i) w += options.secondary_objective[i] * param->directions[i][j];
        cost2[j] = w;
        cost2[k + j] = -w;
      }
      auto res2 = lp_detail::solve_standard_form(std::move(a2), std::move(b2), cost2);
      if (res2.status == lp_detail::LpStatus::kOptimal) y = res2.solution;
    }
    for (std::size_t j = 0; j < k; ++j) z[j] = y[j] - y[k + j];
  }

  std::vector<Rational> x = evaluate_parametrization(*param, z);
  if (!system.satisfied_by(x)) throw VerificationFailure("lp_rational_point: solution fails re-substitution");
  return x;
}

}  // namespace ietlab
