#include "rip/lp.hpp"

#include <algorithm>
#include <string>

#include "rip/errors.hpp"

namespace rip::lp {

template <class T>
std::size_t LinearProgram<T>::add_variable(T cost, Bound<T> bound) {
  objective.push_back(std::move(cost));
  bounds.push_back(std::move(bound));
  for (auto& row : rows) row.emplace_back(0);
  return objective.size() - 1;
}

template <class T>
std::size_t LinearProgram<T>::add_row(std::vector<T> coefficients, Relation relation,
                                      T rhs_value) {
  if (coefficients.size() > num_vars()) {
    throw DimensionError("row has " + std::to_string(coefficients.size()) +
                         " coefficients for " + std::to_string(num_vars()) + " variables");
  }
  coefficients.resize(num_vars(), T(0));
  rows.push_back(std::move(coefficients));
  relations.push_back(relation);
  rhs.push_back(std::move(rhs_value));
  return rows.size() - 1;
}

template <class T>
void LinearProgram<T>::validate() const {
  const std::size_t n = num_vars();
  if (bounds.size() != n) throw DimensionError("bounds/objective size mismatch");
  if (relations.size() != rows.size() || rhs.size() != rows.size()) {
    throw DimensionError("rows/relations/rhs size mismatch");
  }
  for (std::size_t i = 0; i < rows.size(); ++i) {
    if (rows[i].size() != n) {
      throw DimensionError("row " + std::to_string(i) + " has wrong width");
    }
  }
  for (std::size_t j = 0; j < n; ++j) {
    if (bounds[j].lower && bounds[j].upper && *bounds[j].upper < *bounds[j].lower) {
      throw DimensionError("variable " + std::to_string(j) + " has an empty box");
    }
  }
}

namespace {

enum class VarKind { kShiftedLower, kReflectedUpper, kSplitFree };

struct VarMap {
  VarKind kind;
  std::size_t col;
  std::size_t col2;  // negative part for free variables
};

template <class T>
class Tableau {
 public:
  Tableau(const LinearProgram<T>& lp, const SolverOptions& options)
      : lp_(lp), tol_(options.tolerance), max_pivots_(options.max_pivots) {
    build();
  }

  Outcome<T> run() {
    Outcome<T> out;
    // Phase 1: minimise the sum of artificials.
    std::vector<T> phase1_cost(ncols_, T(0));
    for (std::size_t j = first_artificial_; j < ncols_; ++j) phase1_cost[j] = T(1);
    price_out(phase1_cost);
    const bool phase1_bounded = iterate(/*allow_artificial=*/true);
    (void)phase1_bounded;  // phase 1 is bounded below by zero
    if (Arith<T>::sign(obj_, tol_) > 0) {
      out.status = Status::kInfeasible;
      out.dual = row_multipliers(phase1_cost);
      out.pivots = pivots_;
      return out;
    }
    drive_out_artificials();

    std::vector<T> cost(ncols_, T(0));
    const bool maximize = lp_.sense == Sense::kMaximize;
    for (std::size_t j = 0; j < n_; ++j) {
      T c = maximize ? T(-lp_.objective[j]) : lp_.objective[j];
      const VarMap& vm = vars_[j];
      switch (vm.kind) {
        case VarKind::kShiftedLower:
          cost[vm.col] = c;
          break;
        case VarKind::kReflectedUpper:
          cost[vm.col] = -c;
          break;
        case VarKind::kSplitFree:
          cost[vm.col] = c;
          cost[vm.col2] = -c;
          break;
      }
    }
    price_out(cost);
    const bool bounded = iterate(/*allow_artificial=*/false);
    out.primal = primal_point();
    out.pivots = pivots_;
    if (!bounded) {
      out.status = Status::kUnbounded;
      out.ray = ray_direction();
      return out;
    }
    out.status = Status::kOptimal;
    out.dual = row_multipliers(cost);
    T value(0);
    for (std::size_t j = 0; j < n_; ++j) value += lp_.objective[j] * out.primal[j];
    out.objective = value;
    return out;
  }

 private:
  void build() {
    lp_.validate();
    n_ = lp_.num_vars();
    vars_.resize(n_);
    std::size_t col = 0;
    std::vector<std::size_t> boxed;
    for (std::size_t j = 0; j < n_; ++j) {
      const auto& b = lp_.bounds[j];
      if (b.lower) {
        vars_[j] = {VarKind::kShiftedLower, col++, 0};
        if (b.upper) boxed.push_back(j);
      } else if (b.upper) {
        vars_[j] = {VarKind::kReflectedUpper, col++, 0};
      } else {
        vars_[j] = {VarKind::kSplitFree, col, col + 1};
        col += 2;
      }
    }
    const std::size_t nstruct = col;
    m_orig_ = lp_.num_rows();
    m_ = m_orig_ + boxed.size();

    // Standard-form rows over structural columns, before logicals.
    std::vector<std::vector<T>> srows(m_, std::vector<T>(nstruct, T(0)));
    std::vector<T> srhs(m_);
    std::vector<Relation> srel(m_);
    for (std::size_t i = 0; i < m_orig_; ++i) {
      T b = lp_.rhs[i];
      for (std::size_t j = 0; j < n_; ++j) {
        const T& a = lp_.rows[i][j];
        if (Arith<T>::sign(a, 0.0) == 0) continue;
        const VarMap& vm = vars_[j];
        switch (vm.kind) {
          case VarKind::kShiftedLower:
            srows[i][vm.col] = a;
            b -= a * *lp_.bounds[j].lower;
            break;
          case VarKind::kReflectedUpper:
            srows[i][vm.col] = -a;
            b -= a * *lp_.bounds[j].upper;
            break;
          case VarKind::kSplitFree:
            srows[i][vm.col] = a;
            srows[i][vm.col2] = -a;
            break;
        }
      }
      srhs[i] = b;
      srel[i] = lp_.relations[i];
    }
    for (std::size_t k = 0; k < boxed.size(); ++k) {
      const std::size_t j = boxed[k];
      const std::size_t i = m_orig_ + k;
      srows[i][vars_[j].col] = T(1);
      srhs[i] = *lp_.bounds[j].upper - *lp_.bounds[j].lower;
      srel[i] = Relation::kLessEqual;
    }

    flipped_.assign(m_, false);
    for (std::size_t i = 0; i < m_; ++i) {
      if (srhs[i] < 0) {
        flipped_[i] = true;
        srhs[i] = -srhs[i];
        for (auto& a : srows[i]) a = -a;
        if (srel[i] == Relation::kLessEqual) {
          srel[i] = Relation::kGreaterEqual;
        } else if (srel[i] == Relation::kGreaterEqual) {
          srel[i] = Relation::kLessEqual;
        }
      }
    }

    std::size_t nslack = 0;
    std::size_t nart = 0;
    for (auto r : srel) {
      if (r != Relation::kEqual) ++nslack;
      if (r != Relation::kLessEqual) ++nart;
    }
    first_slack_ = nstruct;
    first_artificial_ = nstruct + nslack;
    ncols_ = first_artificial_ + nart;
    rhs_col_ = ncols_;

    rows_.assign(m_, std::vector<T>(ncols_ + 1, T(0)));
    basis_.assign(m_, 0);
    unit_col_.assign(m_, 0);
    std::size_t next_slack = first_slack_;
    std::size_t next_art = first_artificial_;
    for (std::size_t i = 0; i < m_; ++i) {
      auto& row = rows_[i];
      for (std::size_t c = 0; c < nstruct; ++c) row[c] = srows[i][c];
      row[rhs_col_] = srhs[i];
      switch (srel[i]) {
        case Relation::kLessEqual:
          row[next_slack] = T(1);
          basis_[i] = unit_col_[i] = next_slack++;
          break;
        case Relation::kGreaterEqual:
          row[next_slack++] = T(-1);
          row[next_art] = T(1);
          basis_[i] = unit_col_[i] = next_art++;
          break;
        case Relation::kEqual:
          row[next_art] = T(1);
          basis_[i] = unit_col_[i] = next_art++;
          break;
      }
    }
  }

  bool is_artificial(std::size_t col) const { return col >= first_artificial_; }

  /// Sets reduced costs and objective for `cost` given the current basis.
  void price_out(const std::vector<T>& cost) {
    rc_ = cost;
    rc_.emplace_back(0);  // rhs cell holds -objective
    for (std::size_t i = 0; i < m_; ++i) {
      const T& cb = cost[basis_[i]];
      if (Arith<T>::sign(cb, 0.0) == 0) continue;
      const auto& row = rows_[i];
      for (std::size_t j = 0; j <= ncols_; ++j) {
        if (Arith<T>::sign(row[j], 0.0) != 0) rc_[j] -= cb * row[j];
      }
    }
    obj_ = -rc_[rhs_col_];
  }

  void pivot(std::size_t p, std::size_t q) {
    if (++pivots_ > max_pivots_) {
      throw CapacityError("simplex pivot budget of " + std::to_string(max_pivots_) +
                          " exhausted");
    }
    auto& prow = rows_[p];
    const T inv = T(1) / prow[q];
    nz_.clear();
    for (std::size_t j = 0; j <= ncols_; ++j) {
      if (Arith<T>::sign(prow[j], 0.0) != 0) {
        prow[j] *= inv;
        nz_.push_back(j);
      }
    }
    prow[q] = T(1);
    auto eliminate = [&](std::vector<T>& row) {
      if (Arith<T>::sign(row[q], 0.0) == 0) return;
      const T f = row[q];
      for (std::size_t j : nz_) row[j] -= f * prow[j];
      row[q] = T(0);
    };
    for (std::size_t i = 0; i < m_; ++i) {
      if (i != p) eliminate(rows_[i]);
    }
    eliminate(rc_);
    obj_ = -rc_[rhs_col_];
    basis_[p] = q;
  }

  /// Bland iterations. Returns false if an unbounded column was found; the
  /// column is then stored in unbounded_col_.
  bool iterate(bool allow_artificial) {
    while (true) {
      std::size_t q = ncols_;
      const std::size_t limit = allow_artificial ? ncols_ : first_artificial_;
      for (std::size_t j = 0; j < limit; ++j) {
        if (Arith<T>::sign(rc_[j], tol_) < 0) {
          q = j;
          break;
        }
      }
      if (q == ncols_) return true;

      std::size_t p = m_;
      T best{};
      for (std::size_t i = 0; i < m_; ++i) {
        const T& a = rows_[i][q];
        if (Arith<T>::sign(a, tol_) <= 0) continue;
        T ratio = rows_[i][rhs_col_] / a;
        if (p == m_) {
          p = i;
          best = ratio;
          continue;
        }
        const int cmp = Arith<T>::sign(T(ratio - best), tol_);
        if (cmp < 0 || (cmp == 0 && basis_[i] < basis_[p])) {
          p = i;
          best = ratio;
        }
      }
      if (p == m_) {
        unbounded_col_ = q;
        return false;
      }
      pivot(p, q);
    }
  }

  void drive_out_artificials() {
    for (std::size_t i = 0; i < m_; ++i) {
      if (!is_artificial(basis_[i])) continue;
      for (std::size_t j = 0; j < first_artificial_; ++j) {
        if (Arith<T>::sign(rows_[i][j], tol_) != 0) {
          pivot(i, j);
          break;
        }
      }
      // A row with no structural/slack entry is redundant; its artificial
      // stays basic at zero and can never move.
    }
  }

  std::vector<T> standard_solution() const {
    std::vector<T> s(ncols_, T(0));
    for (std::size_t i = 0; i < m_; ++i) s[basis_[i]] = rows_[i][rhs_col_];
    return s;
  }

  std::vector<T> primal_point() const {
    const auto s = standard_solution();
    std::vector<T> x(n_);
    for (std::size_t j = 0; j < n_; ++j) {
      const VarMap& vm = vars_[j];
      switch (vm.kind) {
        case VarKind::kShiftedLower:
          x[j] = *lp_.bounds[j].lower + s[vm.col];
          break;
        case VarKind::kReflectedUpper:
          x[j] = *lp_.bounds[j].upper - s[vm.col];
          break;
        case VarKind::kSplitFree:
          x[j] = s[vm.col] - s[vm.col2];
          break;
      }
    }
    return x;
  }

  std::vector<T> ray_direction() const {
    std::vector<T> d(ncols_, T(0));
    d[unbounded_col_] = T(1);
    for (std::size_t i = 0; i < m_; ++i) d[basis_[i]] = -rows_[i][unbounded_col_];
    std::vector<T> r(n_);
    for (std::size_t j = 0; j < n_; ++j) {
      const VarMap& vm = vars_[j];
      switch (vm.kind) {
        case VarKind::kShiftedLower:
          r[j] = d[vm.col];
          break;
        case VarKind::kReflectedUpper:
          r[j] = -d[vm.col];
          break;
        case VarKind::kSplitFree:
          r[j] = d[vm.col] - d[vm.col2];
          break;
      }
    }
    return r;
  }

  /// y_i = cost(unit column) - reduced cost(unit column), mapped back to the
  /// original row orientation. Bound rows are folded into reduced costs.
  std::vector<T> row_multipliers(const std::vector<T>& cost) const {
    std::vector<T> y(m_orig_);
    for (std::size_t i = 0; i < m_orig_; ++i) {
      const std::size_t u = unit_col_[i];
      T yi = cost[u] - rc_[u];
      y[i] = flipped_[i] ? T(-yi) : yi;
    }
    return y;
  }

  const LinearProgram<T>& lp_;
  double tol_;
  std::size_t max_pivots_;
  std::size_t pivots_ = 0;

  std::size_t n_ = 0;
  std::size_t m_ = 0;
  std::size_t m_orig_ = 0;
  std::size_t ncols_ = 0;
  std::size_t rhs_col_ = 0;
  std::size_t first_slack_ = 0;
  std::size_t first_artificial_ = 0;
  std::size_t unbounded_col_ = 0;

  std::vector<VarMap> vars_;
  std::vector<bool> flipped_;
  std::vector<std::vector<T>> rows_;
  std::vector<T> rc_;
  T obj_{};
  std::vector<std::size_t> basis_;
  std::vector<std::size_t> unit_col_;
  std::vector<std::size_t> nz_;
};

template <class T>
int sgn_tol(const T& x, double tol) {
  return Arith<T>::sign(x, tol);
}

template <class T>
bool primal_feasible(const LinearProgram<T>& lp, const std::vector<T>& x, double tol) {
  if (x.size() != lp.num_vars()) return false;
  for (std::size_t j = 0; j < x.size(); ++j) {
    const auto& b = lp.bounds[j];
    if (b.lower && sgn_tol(T(x[j] - *b.lower), tol) < 0) return false;
    if (b.upper && sgn_tol(T(x[j] - *b.upper), tol) > 0) return false;
  }
  for (std::size_t i = 0; i < lp.num_rows(); ++i) {
    T ax(0);
    for (std::size_t j = 0; j < x.size(); ++j) ax += lp.rows[i][j] * x[j];
    const int s = sgn_tol(T(ax - lp.rhs[i]), tol);
    switch (lp.relations[i]) {
      case Relation::kLessEqual:
        if (s > 0) return false;
        break;
      case Relation::kGreaterEqual:
        if (s < 0) return false;
        break;
      case Relation::kEqual:
        if (s != 0) return false;
        break;
    }
  }
  return true;
}

template <class T>
bool multiplier_signs_ok(const LinearProgram<T>& lp, const std::vector<T>& y, double tol) {
  if (y.size() != lp.num_rows()) return false;
  for (std::size_t i = 0; i < y.size(); ++i) {
    const int s = sgn_tol(y[i], tol);
    if (lp.relations[i] == Relation::kGreaterEqual && s < 0) return false;
    if (lp.relations[i] == Relation::kLessEqual && s > 0) return false;
  }
  return true;
}

template <class T>
std::vector<T> transpose_times(const LinearProgram<T>& lp, const std::vector<T>& y) {
  std::vector<T> r(lp.num_vars(), T(0));
  for (std::size_t i = 0; i < lp.num_rows(); ++i) {
    if (sgn_tol(y[i], 0.0) == 0) continue;
    for (std::size_t j = 0; j < lp.num_vars(); ++j) r[j] += lp.rows[i][j] * y[i];
  }
  return r;
}

}  // namespace

template <class T>
Outcome<T> solve(const LinearProgram<T>& lp, const SolverOptions& options) {
  Tableau<T> tableau(lp, options);
  return tableau.run();
}

template <class T>
bool verify_certificate(const LinearProgram<T>& lp, const Outcome<T>& outcome,
                        double tolerance) {
  try {
    lp.validate();
  } catch (const DimensionError&) {
    return false;
  }
  const double tol = Arith<T>::kExact ? 0.0 : tolerance;
  const std::size_t n = lp.num_vars();
  std::vector<T> cmin(lp.objective);
  if (lp.sense == Sense::kMaximize) {
    for (auto& c : cmin) c = -c;
  }

  switch (outcome.status) {
    case Status::kOptimal: {
      if (!primal_feasible(lp, outcome.primal, tol)) return false;
      if (!multiplier_signs_ok(lp, outcome.dual, tol)) return false;
      const auto aty = transpose_times(lp, outcome.dual);
      T dual_obj(0);
      for (std::size_t i = 0; i < lp.num_rows(); ++i) dual_obj += lp.rhs[i] * outcome.dual[i];
      for (std::size_t j = 0; j < n; ++j) {
        const T d = cmin[j] - aty[j];
        const int s = sgn_tol(d, tol);
        const auto& b = lp.bounds[j];
        if (s > 0) {
          if (!b.lower) return false;
          dual_obj += d * *b.lower;
        } else if (s < 0) {
          if (!b.upper) return false;
          dual_obj += d * *b.upper;
        }
      }
      T primal_obj(0);
      T own_obj(0);
      for (std::size_t j = 0; j < n; ++j) {
        primal_obj += cmin[j] * outcome.primal[j];
        own_obj += lp.objective[j] * outcome.primal[j];
      }
      if (sgn_tol(T(primal_obj - dual_obj), tol) != 0) return false;
      return sgn_tol(T(own_obj - outcome.objective), tol) == 0;
    }
    case Status::kInfeasible: {
      if (!multiplier_signs_ok(lp, outcome.dual, tol)) return false;
      const auto r = transpose_times(lp, outcome.dual);
      T yb(0);
      for (std::size_t i = 0; i < lp.num_rows(); ++i) yb += lp.rhs[i] * outcome.dual[i];
      T sup(0);
      for (std::size_t j = 0; j < n; ++j) {
        const int s = sgn_tol(r[j], tol);
        const auto& b = lp.bounds[j];
        if (s > 0) {
          if (!b.upper) return false;
          sup += r[j] * *b.upper;
        } else if (s < 0) {
          if (!b.lower) return false;
          sup += r[j] * *b.lower;
        }
      }
      return sgn_tol(T(yb - sup), tol) > 0;
    }
    case Status::kUnbounded: {
      if (!primal_feasible(lp, outcome.primal, tol)) return false;
      const auto& r = outcome.ray;
      if (r.size() != n) return false;
      for (std::size_t j = 0; j < n; ++j) {
        const auto& b = lp.bounds[j];
        if (b.lower && sgn_tol(r[j], tol) < 0) return false;
        if (b.upper && sgn_tol(r[j], tol) > 0) return false;
      }
      for (std::size_t i = 0; i < lp.num_rows(); ++i) {
        T ar(0);
        for (std::size_t j = 0; j < n; ++j) ar += lp.rows[i][j] * r[j];
        const int s = sgn_tol(ar, tol);
        if (lp.relations[i] == Relation::kLessEqual && s > 0) return false;
        if (lp.relations[i] == Relation::kGreaterEqual && s < 0) return false;
        if (lp.relations[i] == Relation::kEqual && s != 0) return false;
      }
      T cr(0);
      for (std::size_t j = 0; j < n; ++j) cr += cmin[j] * r[j];
      return sgn_tol(cr, tol) < 0;
    }
  }
  return false;
}

LinearProgram<double> to_double(const LinearProgram<Rational>& lp) {
  LinearProgram<double> out;
  out.sense = lp.sense;
  for (const auto& c : lp.objective) out.objective.push_back(c.get_d());
  for (const auto& row : lp.rows) {
    std::vector<double> r;
    r.reserve(row.size());
    for (const auto& a : row) r.push_back(a.get_d());
    out.rows.push_back(std::move(r));
  }
  out.relations = lp.relations;
  for (const auto& b : lp.rhs) out.rhs.push_back(b.get_d());
  for (const auto& b : lp.bounds) {
    Bound<double> d;
    if (b.lower) d.lower = b.lower->get_d();
    if (b.upper) d.upper = b.upper->get_d();
    out.bounds.push_back(d);
  }
  return out;
}

template struct LinearProgram<Rational>;
template struct LinearProgram<double>;
template Outcome<Rational> solve(const LinearProgram<Rational>&, const SolverOptions&);
template Outcome<double> solve(const LinearProgram<double>&, const SolverOptions&);
template bool verify_certificate(const LinearProgram<Rational>&, const Outcome<Rational>&,
                                 double);
template bool verify_certificate(const LinearProgram<double>&, const Outcome<double>&, double);

}  // namespace rip::lp
