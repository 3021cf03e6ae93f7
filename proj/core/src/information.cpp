#include "rip/information.hpp"

#include <algorithm>
#include <utility>

#include "rip/errors.hpp"

namespace rip {

Partition Partition::trivial(std::size_t paths) {
  Partition p;
  p.atoms.emplace_back(paths);
  for (std::size_t i = 0; i < paths; ++i) p.atoms[0][i] = i;
  p.atom_of.assign(paths, 0);
  if (paths == 0) p.atoms.clear();
  return p;
}

bool Partition::refines(const Partition& coarser) const {
  if (coarser.atom_of.size() != atom_of.size()) return false;
  for (const auto& atom : atoms) {
    for (auto i : atom) {
      if (coarser.atom_of[i] != coarser.atom_of[atom.front()]) return false;
    }
  }
  return true;
}

Partition meet(const Partition& a, const Partition& b) {
  if (a.atom_of.size() != b.atom_of.size()) throw DimensionError("meet of partitions of different spaces");
  std::vector<std::pair<std::size_t, std::size_t>> keys(a.atom_of.size());
  for (std::size_t i = 0; i < keys.size(); ++i) keys[i] = {a.atom_of[i], b.atom_of[i]};
  return Partition::from_keys(keys);
}

std::vector<PathSet> restrict_atoms(const Partition& partition, const PathSet& subset) {
  std::vector<PathSet> out;
  std::vector<std::size_t> slot(partition.atoms.size(), static_cast<std::size_t>(-1));
  for (auto i : subset) {
    const std::size_t a = partition.atom_of.at(i);
    if (slot[a] == static_cast<std::size_t>(-1)) {
      slot[a] = out.size();
      out.emplace_back();
    }
    out[slot[a]].push_back(i);
  }
  return out;
}

namespace {

void check_time(const PathSpace& space, int t) {
  if (t < 0 || t > space.steps()) {
    throw DomainError("grid index " + std::to_string(t) + " outside 0.." +
                      std::to_string(space.steps()));
  }
}

bool same_prefix(const Path& a, const Path& b, int t) {
  for (int asset = 0; asset < a.assets(); ++asset) {
    for (int k = 0; k <= t; ++k) {
      if (a.at(asset, k) != b.at(asset, k)) return false;
    }
  }
  return true;
}

}  // namespace

PathSet f_atom(const PathSpace& space, std::size_t path, int t) {
  check_time(space, t);
  const Path& ref = space.path(path);
  PathSet out;
  for (std::size_t i = 0; i < space.size(); ++i) {
    if (same_prefix(space.path(i), ref, t)) out.push_back(i);
  }
  return out;
}

Partition prefix_partition(const PathSpace& space, int t) {
  if (t == -1) return Partition::trivial(space.size());
  check_time(space, t);
  std::vector<std::vector<Rational>> keys(space.size());
  for (std::size_t i = 0; i < space.size(); ++i) {
    const Path& p = space.path(i);
    keys[i].reserve(static_cast<std::size_t>(p.assets()) * (t + 1));
    for (int a = 0; a < p.assets(); ++a) {
      for (int k = 0; k <= t; ++k) keys[i].push_back(p.at(a, k));
    }
  }
  return Partition::from_keys(keys);
}

InfoVariable InfoVariable::max_abs_deviation() {
  const PayoffExpr one = PayoffExpr::constant(1);
  return {"max_abs_deviation",
          PayoffExpr::call(Function::kMax,
                           {PayoffExpr::running_max(1) - one, one - PayoffExpr::running_min(1)})};
}

InfoVariable InfoVariable::range_indicator(const Rational& lower, const Rational& upper) {
  if (lower >= upper) throw DomainError("range indicator needs lower < upper");
  return {"range_indicator(" + to_string(lower) + "," + to_string(upper) + ")",
          PayoffExpr::indicator(CompareOp::kGreater, PayoffExpr::running_min(1),
                                PayoffExpr::constant(lower)) *
              PayoffExpr::indicator(CompareOp::kLess, PayoffExpr::running_max(1),
                                    PayoffExpr::constant(upper))};
}

namespace {

// 1 where the price at `arrival` is zero, `body` elsewhere.
PayoffExpr with_zero_convention(int arrival, const PayoffExpr& body) {
  const PayoffExpr anchor = PayoffExpr::price(1, GridIndex::at(arrival));
  const PayoffExpr zero = PayoffExpr::constant(0);
  return PayoffExpr::indicator(CompareOp::kEqual, anchor, zero) +
         PayoffExpr::indicator(CompareOp::kGreater, anchor, zero) * body;
}

PayoffExpr tail_ratio(const PayoffExpr& x, int arrival) {
  return PayoffExpr::call(Function::kNRat, {x, PayoffExpr::price(1, GridIndex::at(arrival))});
}

}  // namespace

InfoVariable InfoVariable::tail_max_abs_deviation(int arrival) {
  if (arrival < 0) throw DomainError("arrival index must be nonnegative");
  const PayoffExpr one = PayoffExpr::constant(1);
  const PayoffExpr hi = tail_ratio(PayoffExpr::running_max(1, GridIndex::at(arrival), GridIndex::end()), arrival);
  const PayoffExpr lo = tail_ratio(PayoffExpr::running_min(1, GridIndex::at(arrival), GridIndex::end()), arrival);
  return {"tail_max_abs_deviation(" + std::to_string(arrival) + ")",
          with_zero_convention(arrival, PayoffExpr::call(Function::kMax, {hi - one, one - lo}))};
}

InfoVariable InfoVariable::tail_range_indicator(const Rational& lower, const Rational& upper,
                                                int arrival) {
  if (lower >= upper) throw DomainError("range indicator needs lower < upper");
  if (arrival < 0) throw DomainError("arrival index must be nonnegative");
  const PayoffExpr hi = tail_ratio(PayoffExpr::running_max(1, GridIndex::at(arrival), GridIndex::end()), arrival);
  const PayoffExpr lo = tail_ratio(PayoffExpr::running_min(1, GridIndex::at(arrival), GridIndex::end()), arrival);
  return {"tail_range_indicator(" + to_string(lower) + "," + to_string(upper) + "," +
              std::to_string(arrival) + ")",
          with_zero_convention(
              arrival, PayoffExpr::indicator(CompareOp::kGreater, lo, PayoffExpr::constant(lower)) *
                           PayoffExpr::indicator(CompareOp::kLess, hi, PayoffExpr::constant(upper)))};
}

InfoVariable InfoVariable::constant(const Rational& value) {
  return {"constant(" + to_string(value) + ")", PayoffExpr::constant(value)};
}

InfoVariable InfoVariable::expression(PayoffExpr expr, std::string name) {
  if (name.empty()) name = expr.str();
  return {std::move(name), std::move(expr)};
}

std::vector<Rational> labels(const PathSpace& space, const InfoVariable& z) {
  z.labeler.validate(space.assets(), space.steps());
  std::vector<Rational> out;
  out.reserve(space.size());
  for (const auto& p : space.paths()) out.push_back(evaluate(z.labeler, p));
  return out;
}

Partition z_partition(const PathSpace& space, const InfoVariable& z, NumericMode mode) {
  std::vector<Rational> values = labels(space, z);
  if (mode == NumericMode::kRational) return Partition::from_keys(values);

  std::vector<double> approx(values.size());
  for (std::size_t i = 0; i < values.size(); ++i) approx[i] = values[i].get_d();
  std::vector<std::size_t> order(values.size());
  for (std::size_t i = 0; i < order.size(); ++i) order[i] = i;
  std::stable_sort(order.begin(), order.end(),
                   [&](std::size_t a, std::size_t b) { return approx[a] < approx[b]; });
  std::vector<std::size_t> group(values.size(), 0);
  for (std::size_t r = 1; r < order.size(); ++r) {
    const bool same = approx[order[r]] - approx[order[r - 1]] <= kLabelTolerance;
    group[order[r]] = group[order[r - 1]] + (same ? 0 : 1);
  }
  return Partition::from_keys(group);
}

const char* variant_name(InfoVariant v) {
  switch (v) {
    case InfoVariant::kNone: return "none";
    case InfoVariant::kPlus: return "plus";
    case InfoVariant::kMinus: return "minus";
    case InfoVariant::kDynamic: return "dynamic";
  }
  return "?";
}

void InfoStructure::validate(const PathSpace& space) const {
  if (variant == InfoVariant::kNone) return;
  if (!variable) throw DomainError(std::string(variant_name(variant)) + " information needs a variable");
  variable->labeler.validate(space.assets(), space.steps());
  if (variant == InfoVariant::kDynamic && (arrival <= 0 || arrival >= space.steps())) {
    throw DomainError("arrival index " + std::to_string(arrival) + " must lie strictly inside (0, " +
                      std::to_string(space.steps()) + ")");
  }
}

Filtration::Filtration(const PathSpace& space, const InfoStructure& info, NumericMode mode) {
  info.validate(space);
  const int n = space.steps();
  std::optional<Partition> z;
  if (info.variant != InfoVariant::kNone) z = z_partition(space, *info.variable, mode);
  parts_.reserve(static_cast<std::size_t>(n) + 2);
  for (int t = -1; t <= n; ++t) {
    Partition f = prefix_partition(space, t);
    bool enlarged = false;
    switch (info.variant) {
      case InfoVariant::kNone: break;
      case InfoVariant::kPlus: enlarged = true; break;
      case InfoVariant::kMinus: enlarged = t >= 0; break;
      case InfoVariant::kDynamic: enlarged = t >= info.arrival; break;
    }
    if (enlarged) {
      // F_{-1} is trivial, so the PLUS variant uses F_0 there.
      parts_.push_back(meet(t == -1 ? prefix_partition(space, 0) : f, *z));
    } else {
      parts_.push_back(std::move(f));
    }
  }
}

Filtration Filtration::natural(const PathSpace& space) {
  Filtration f;
  for (int t = -1; t <= space.steps(); ++t) f.parts_.push_back(prefix_partition(space, t));
  return f;
}

const Partition& Filtration::at(int t) const {
  if (t < -1 || t > steps()) {
    throw DomainError("time " + std::to_string(t) + " outside -1.." + std::to_string(steps()));
  }
  return parts_[static_cast<std::size_t>(t + 1)];
}

Partition atoms_at(const PathSpace& space, const InfoStructure& info, int t, NumericMode mode) {
  return Filtration(space, info, mode).at(t);
}

bool check_scaling_form(const PathSpace& space, const InfoVariable& z, int arrival) {
  if (space.underlyings() != 1 || space.dynamic_count() != 0) {
    throw PreconditionError("scaling-form check needs one underlying and no dynamic options");
  }
  check_time(space, arrival);
  const std::vector<Rational> lab = labels(space, z);
  std::map<std::vector<Rational>, Rational> seen;
  for (std::size_t i = 0; i < space.size(); ++i) {
    const Path& p = space.path(i);
    const Rational& anchor = p.at(0, arrival);
    if (sgn(anchor) == 0) {
      if (lab[i] != 1) return false;
      continue;
    }
    std::vector<Rational> tail;
    for (int k = arrival; k <= space.steps(); ++k) tail.push_back(p.at(0, k) / anchor);
    auto [it, inserted] = seen.try_emplace(std::move(tail), lab[i]);
    if (!inserted && it->second != lab[i]) return false;
  }
  return true;
}

Path path_modify(const Path& v, const Path& v_tilde, const Path& omega, int arrival) {
  if (v.assets() != omega.assets() || v.steps() != omega.steps() ||
      v_tilde.assets() != omega.assets() || v_tilde.steps() != omega.steps()) {
    throw DimensionError("path_modify on paths of different shape");
  }
  if (arrival < 0 || arrival > omega.steps()) throw DomainError("arrival index out of range");
  for (int a = 0; a < omega.assets(); ++a) {
    if (sgn(v.at(a, arrival)) == 0 || sgn(v_tilde.at(a, arrival)) == 0 ||
        sgn(omega.at(a, arrival)) == 0) {
      throw DomainError("path_modify needs positive prices at the arrival index");
    }
  }
  const Path* head = nullptr;
  const Path* from = nullptr;
  if (same_prefix(omega, v_tilde, arrival)) {
    head = &v;
    from = &v_tilde;
  } else if (same_prefix(omega, v, arrival)) {
    head = &v_tilde;
    from = &v;
  } else {
    return omega;
  }
  const int n = omega.steps();
  std::vector<Rational> out(omega.values().size());
  for (int a = 0; a < omega.assets(); ++a) {
    const Rational scale = head->at(a, arrival) / from->at(a, arrival);
    for (int k = 0; k <= n; ++k) {
      out[static_cast<std::size_t>(a * (n + 1) + k)] =
          k <= arrival ? head->at(a, k) : scale * omega.at(a, k);
    }
  }
  return Path(omega.assets(), n, std::move(out));
}

Path time_change(const Path& omega, int arrival, int target_arrival, std::optional<int> target_steps) {
  const int n = omega.steps();
  const int m = target_steps.value_or(n);
  if (m < 1) throw IncompatibleGridError("target grid needs at least one step");
  if (arrival < 0 || arrival > n || target_arrival < 0 || target_arrival > m) {
    throw IncompatibleGridError("arrival index outside its grid");
  }
  if ((arrival == n) != (target_arrival == m) || (arrival == 0) != (target_arrival == 0)) {
    throw IncompatibleGridError("time change must keep degenerate segments degenerate");
  }
  std::vector<int> source(static_cast<std::size_t>(m) + 1);
  for (int k = 0; k <= m; ++k) {
    long num, den, base;
    if (k <= target_arrival) {
      num = static_cast<long>(k) * arrival;
      den = target_arrival == 0 ? 1 : target_arrival;
      base = 0;
    } else {
      num = static_cast<long>(k - target_arrival) * (n - arrival);
      den = m - target_arrival;
      base = arrival;
    }
    if (num % den != 0) {
      throw IncompatibleGridError("index " + std::to_string(k) + " maps to " + std::to_string(base) +
                                  " + " + std::to_string(num) + "/" + std::to_string(den) +
                                  ", not a grid index");
    }
    source[static_cast<std::size_t>(k)] = static_cast<int>(base + num / den);
  }
  std::vector<Rational> out;
  out.reserve(static_cast<std::size_t>(omega.assets()) * (m + 1));
  for (int a = 0; a < omega.assets(); ++a) {
    for (int k = 0; k <= m; ++k) out.push_back(omega.at(a, source[static_cast<std::size_t>(k)]));
  }
  return Path(omega.assets(), m, std::move(out));
}

}  // namespace rip
