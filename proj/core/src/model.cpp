#include "rip/model.hpp"

#include <algorithm>
#include <map>
#include <numeric>

#include "rip/errors.hpp"

namespace rip {

TimeGrid::TimeGrid(std::vector<Rational> times) : times_(std::move(times)) {
  if (times_.size() < 2) throw DomainError("time grid needs at least one step");
  if (sgn(times_.front()) != 0) throw DomainError("time grid must start at 0");
  for (std::size_t k = 1; k < times_.size(); ++k) {
    if (times_[k] <= times_[k - 1]) throw DomainError("time grid must be strictly increasing");
  }
}

TimeGrid TimeGrid::uniform(int steps, Rational horizon) {
  if (steps < 1) throw DomainError("time grid needs at least one step");
  if (sgn(horizon) <= 0) throw DomainError("horizon must be positive");
  std::vector<Rational> t;
  t.reserve(static_cast<std::size_t>(steps) + 1);
  for (int k = 0; k <= steps; ++k) t.emplace_back(horizon * k / steps);
  return TimeGrid(std::move(t));
}

bool TimeGrid::is_uniform() const {
  const Rational h = times_[1] - times_[0];
  for (std::size_t k = 2; k < times_.size(); ++k) {
    if (times_[k] - times_[k - 1] != h) return false;
  }
  return true;
}

Path::Path(int assets, int steps, std::vector<Rational> values)
    : assets_(assets), steps_(steps), values_(std::move(values)) {
  if (assets < 1 || steps < 0) throw DimensionError("path needs at least one asset");
  if (values_.size() != static_cast<std::size_t>(assets) * static_cast<std::size_t>(steps + 1)) {
    throw DimensionError("path value count does not match assets x (steps + 1)");
  }
}

Path::Path(std::vector<Rational> single_asset) : assets_(1), values_(std::move(single_asset)) {
  if (values_.empty()) throw DimensionError("path needs at least one price");
  steps_ = static_cast<int>(values_.size()) - 1;
}

bool operator<(const Path& a, const Path& b) {
  if (a.assets_ != b.assets_) return a.assets_ < b.assets_;
  if (a.steps_ != b.steps_) return a.steps_ < b.steps_;
  return std::lexicographical_compare(a.values_.begin(), a.values_.end(), b.values_.begin(),
                                      b.values_.end());
}

PathSpace::PathSpace(TimeGrid grid, int underlyings, std::vector<PricedPayoff> dynamic_options,
                     std::vector<Path> paths)
    : grid_(std::move(grid)),
      underlyings_(underlyings),
      dynamic_(std::move(dynamic_options)),
      paths_(std::move(paths)) {
  if (underlyings_ < 1) throw DimensionError("need at least one underlying");
  if (paths_.empty()) throw DimensionError("path space is empty");
  const int n = grid_.steps();
  for (const auto& opt : dynamic_) {
    if (sgn(opt.price) <= 0) {
      throw DomainError("dynamic option '" + opt.payoff.str() + "' has nonpositive price");
    }
    opt.payoff.validate(underlyings_, n);
  }
  for (std::size_t i = 0; i < paths_.size(); ++i) {
    const Path& p = paths_[i];
    if (p.assets() != assets() || p.steps() != n) {
      throw DimensionError("path " + std::to_string(i) + " has shape " +
                           std::to_string(p.assets()) + "x" + std::to_string(p.steps()) +
                           ", expected " + std::to_string(assets()) + "x" + std::to_string(n));
    }
    for (int a = 0; a < assets(); ++a) {
      if (p.at(a, 0) != 1) {
        throw DomainError("path " + std::to_string(i) + " does not start at 1 for asset " +
                          std::to_string(a + 1));
      }
      for (int k = 0; k <= n; ++k) {
        if (sgn(p.at(a, k)) < 0) throw DomainError("path " + std::to_string(i) + " has a negative price");
      }
    }
    if (!dynamic_.empty()) {
      const Path base = underlying_part(i);
      for (int j = 0; j < dynamic_count(); ++j) {
        const Rational expected = evaluate(dynamic_[j].payoff, base) / dynamic_[j].price;
        if (p.at(underlyings_ + j, n) != expected) {
          throw DomainError("path " + std::to_string(i) + " violates the terminal constraint of option " +
                            std::to_string(j + 1));
        }
      }
    }
  }
  sorted_.resize(paths_.size());
  std::iota(sorted_.begin(), sorted_.end(), std::size_t{0});
  std::sort(sorted_.begin(), sorted_.end(),
            [&](std::size_t a, std::size_t b) { return paths_[a] < paths_[b]; });
  for (std::size_t i = 1; i < sorted_.size(); ++i) {
    if (paths_[sorted_[i]] == paths_[sorted_[i - 1]]) {
      throw DomainError("paths " + std::to_string(sorted_[i - 1]) + " and " +
                        std::to_string(sorted_[i]) + " coincide");
    }
  }
}

PathSet PathSpace::all() const {
  PathSet s(paths_.size());
  std::iota(s.begin(), s.end(), std::size_t{0});
  return s;
}

std::optional<std::size_t> PathSpace::find(const Path& p) const {
  auto it = std::lower_bound(sorted_.begin(), sorted_.end(), p,
                             [&](std::size_t i, const Path& q) { return paths_[i] < q; });
  if (it != sorted_.end() && paths_[*it] == p) return *it;
  return std::nullopt;
}

Path PathSpace::underlying_part(std::size_t i) const {
  const Path& p = paths_.at(i);
  if (dynamic_.empty()) return p;
  const auto width = static_cast<std::size_t>(steps() + 1);
  std::vector<Rational> v(p.values().begin(),
                          p.values().begin() + static_cast<std::ptrdiff_t>(width * underlyings_));
  return Path(underlyings_, steps(), std::move(v));
}

StaticOptionBook::StaticOptionBook() { entries_.push_back({PayoffExpr::constant(1), Rational(1)}); }

void StaticOptionBook::add(PayoffExpr payoff, Rational price) {
  entries_.push_back({std::move(payoff), std::move(price)});
}

void StaticOptionBook::validate(const PathSpace& space) const {
  for (const auto& e : entries_) e.payoff.validate(space.underlyings(), space.steps());
}

RatioSets iid_ratios(int steps, int assets, const std::vector<Rational>& ratios) {
  return RatioSets(static_cast<std::size_t>(steps),
                   std::vector<std::vector<Rational>>(static_cast<std::size_t>(assets), ratios));
}

PathSpace build_lattice(int underlyings, const TimeGrid& grid, const RatioSets& ratios,
                        std::size_t path_cap) {
  const int n = grid.steps();
  if (underlyings < 1) throw DimensionError("need at least one underlying");
  if (ratios.size() != static_cast<std::size_t>(n)) {
    throw DimensionError("ratio sets given for " + std::to_string(ratios.size()) +
                         " steps, grid has " + std::to_string(n));
  }
  // choices[k][a]: sorted distinct ratios of asset a at step k
  std::vector<std::vector<std::vector<Rational>>> choices(ratios.size());
  double count = 1;
  for (int k = 0; k < n; ++k) {
    if (ratios[k].size() != static_cast<std::size_t>(underlyings)) {
      throw DimensionError("step " + std::to_string(k) + " has ratio sets for " +
                           std::to_string(ratios[k].size()) + " assets");
    }
    for (int a = 0; a < underlyings; ++a) {
      auto set = ratios[k][a];
      if (set.empty()) throw DomainError("empty ratio set at step " + std::to_string(k));
      for (const auto& r : set) {
        if (sgn(r) <= 0) throw DomainError("lattice ratios must be positive");
      }
      std::sort(set.begin(), set.end());
      set.erase(std::unique(set.begin(), set.end()), set.end());
      count *= static_cast<double>(set.size());
      choices[k].push_back(std::move(set));
    }
  }
  if (count > static_cast<double>(path_cap)) {
    throw CapacityError("lattice has " + std::to_string(static_cast<long double>(count)) +
                        " paths, cap is " + std::to_string(path_cap));
  }

  const auto width = static_cast<std::size_t>(n + 1);
  std::vector<Path> paths;
  paths.reserve(static_cast<std::size_t>(count));
  std::vector<Rational> cur(width * underlyings);
  for (int a = 0; a < underlyings; ++a) cur[a * width] = 1;
  // Depth-first over (step, asset) with the first step most significant.
  std::function<void(int, int)> rec = [&](int k, int a) {
    if (k == n) {
      paths.emplace_back(underlyings, n, cur);
      return;
    }
    const int nk = a + 1 == underlyings ? k + 1 : k;
    const int na = a + 1 == underlyings ? 0 : a + 1;
    for (const auto& r : choices[k][a]) {
      cur[a * width + k + 1] = cur[a * width + k] * r;
      rec(nk, na);
    }
  };
  rec(0, 0);
  return PathSpace(grid, underlyings, {}, std::move(paths));
}

PathSpace build_info_space(const PathSpace& base, std::vector<PricedPayoff> dynamic_options,
                           const OptionInterpolation& interpolation) {
  if (base.dynamic_count() != 0) throw DimensionError("base space already has dynamic options");
  if (dynamic_options.empty()) return base;
  const int n = base.steps();
  const int d = base.underlyings();
  const auto width = static_cast<std::size_t>(n + 1);
  for (const auto& opt : dynamic_options) {
    if (sgn(opt.price) <= 0) {
      throw DomainError("dynamic option '" + opt.payoff.str() + "' has nonpositive price");
    }
    opt.payoff.validate(d, n);
  }
  const std::size_t m = base.size();
  const std::size_t kopts = dynamic_options.size();

  std::vector<std::vector<Rational>> terminal(kopts, std::vector<Rational>(m));
  for (std::size_t j = 0; j < kopts; ++j) {
    for (std::size_t i = 0; i < m; ++i) {
      terminal[j][i] = evaluate(dynamic_options[j].payoff, base.path(i)) / dynamic_options[j].price;
    }
  }

  // coords[j][i][k]
  std::vector<std::vector<std::vector<Rational>>> coords(
      kopts, std::vector<std::vector<Rational>>(m, std::vector<Rational>(width)));
  if (interpolation.reference_weights) {
    const auto& w = *interpolation.reference_weights;
    if (w.size() != m) throw DimensionError("reference weights do not match the path count");
    Rational total = 0;
    for (const auto& x : w) {
      if (sgn(x) <= 0) throw DomainError("reference weights must be strictly positive");
      total += x;
    }
    for (int k = 0; k <= n; ++k) {
      // Group paths by their prefix up to k.
      std::map<std::vector<Rational>, std::vector<std::size_t>> groups;
      for (std::size_t i = 0; i < m; ++i) {
        std::vector<Rational> key;
        key.reserve(static_cast<std::size_t>(d) * (k + 1));
        for (int a = 0; a < d; ++a) {
          for (int s = 0; s <= k; ++s) key.push_back(base.path(i).at(a, s));
        }
        groups[std::move(key)].push_back(i);
      }
      for (const auto& [key, members] : groups) {
        Rational mass = 0;
        for (auto i : members) mass += w[i];
        for (std::size_t j = 0; j < kopts; ++j) {
          Rational acc = 0;
          for (auto i : members) acc += w[i] * terminal[j][i];
          const Rational value = acc / mass;
          for (auto i : members) coords[j][i][k] = value;
        }
      }
    }
    for (std::size_t j = 0; j < kopts; ++j) {
      if (coords[j][0][0] != 1) {
        throw DomainError("reference weights do not reproduce the price of dynamic option " +
                          std::to_string(j + 1));
      }
    }
  } else {
    const Rational& horizon = base.grid().horizon();
    for (std::size_t j = 0; j < kopts; ++j) {
      for (std::size_t i = 0; i < m; ++i) {
        for (int k = 0; k <= n; ++k) {
          const Rational s = base.grid().time(k) / horizon;
          coords[j][i][k] = 1 + s * (terminal[j][i] - 1);
        }
      }
    }
  }

  std::vector<Path> paths;
  paths.reserve(m);
  for (std::size_t i = 0; i < m; ++i) {
    std::vector<Rational> v = base.path(i).values();
    v.reserve(width * (d + kopts));
    for (std::size_t j = 0; j < kopts; ++j) {
      v.insert(v.end(), coords[j][i].begin(), coords[j][i].end());
    }
    paths.emplace_back(d + static_cast<int>(kopts), n, std::move(v));
  }
  return PathSpace(base.grid(), d, std::move(dynamic_options), std::move(paths));
}

Rational sup_dist(const Path& a, const Path& b) {
  if (a.assets() != b.assets() || a.steps() != b.steps()) {
    throw DimensionError("sup_dist on paths of different shape");
  }
  Rational best = 0;
  for (std::size_t i = 0; i < a.values().size(); ++i) {
    Rational diff = abs(a.values()[i] - b.values()[i]);
    if (diff > best) best = diff;
  }
  return best;
}

void check_subset(const PathSpace& space, const PathSet& subset) {
  for (std::size_t i = 0; i < subset.size(); ++i) {
    if (subset[i] >= space.size()) throw DimensionError("path index out of range");
    if (i > 0 && subset[i] <= subset[i - 1]) {
      throw DimensionError("path subset must be sorted and duplicate-free");
    }
  }
}

PathSet fatten(const PathSpace& space, const PathSet& subset, const Rational& epsilon) {
  check_subset(space, subset);
  if (sgn(epsilon) < 0) throw DomainError("fattening radius must be nonnegative");
  PathSet out;
  for (std::size_t i = 0; i < space.size(); ++i) {
    for (auto j : subset) {
      if (i == j || sup_dist(space.path(i), space.path(j)) <= epsilon) {
        out.push_back(i);
        break;
      }
    }
  }
  return out;
}

Rational min_pairwise_distance(const PathSpace& space) {
  std::optional<Rational> best;
  for (std::size_t i = 0; i < space.size(); ++i) {
    for (std::size_t j = i + 1; j < space.size(); ++j) {
      Rational dist = sup_dist(space.path(i), space.path(j));
      if (!best || dist < *best) best = std::move(dist);
    }
  }
  return best.value_or(Rational(0));
}

}  // namespace rip
