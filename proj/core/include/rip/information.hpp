#pragma once

// Filtrations on a finite path space, represented by their atom partitions.

#include <cstddef>
#include <map>
#include <optional>
#include <string>
#include <vector>

#include "rip/model.hpp"
#include "rip/numeric.hpp"
#include "rip/payoff.hpp"

namespace rip {

/// A disjoint cover of all paths of a space. Atoms are sorted path sets,
/// ordered by their smallest member.
struct Partition {
  std::vector<PathSet> atoms;
  std::vector<std::size_t> atom_of;  // path index -> atom index

  static Partition trivial(std::size_t paths);
  /// Groups paths with equal keys; `keys` has one entry per path.
  template <class Key>
  static Partition from_keys(const std::vector<Key>& keys);

  std::size_t size() const { return atoms.size(); }
  const PathSet& atom_containing(std::size_t path) const { return atoms.at(atom_of.at(path)); }
  /// True if every atom of *this lies inside an atom of `coarser`.
  bool refines(const Partition& coarser) const;

  friend bool operator==(const Partition&, const Partition&) = default;
};

/// Common refinement.
Partition meet(const Partition& a, const Partition& b);

/// Atoms of `partition` that intersect `subset`, each intersected with it.
std::vector<PathSet> restrict_atoms(const Partition& partition, const PathSet& subset);

/// Paths agreeing with path `path` on grid indices 0..t (all assets).
PathSet f_atom(const PathSpace& space, std::size_t path, int t);

/// Natural-filtration atoms at grid index t; t = -1 gives the trivial partition.
Partition prefix_partition(const PathSpace& space, int t);

/// An information variable: a payoff-style expression whose value is the label.
struct InfoVariable {
  std::string name;
  PayoffExpr labeler;

  // Catalog. Single underlying; the tail versions normalise by the price
  // at the arrival index and label 1 when that price is zero.
  static InfoVariable max_abs_deviation();
  static InfoVariable range_indicator(const Rational& lower, const Rational& upper);
  static InfoVariable tail_max_abs_deviation(int arrival);
  static InfoVariable tail_range_indicator(const Rational& lower, const Rational& upper,
                                           int arrival);
  static InfoVariable constant(const Rational& value = 0);
  static InfoVariable expression(PayoffExpr expr, std::string name = {});
};

/// Per-path labels of Z, exact.
std::vector<Rational> labels(const PathSpace& space, const InfoVariable& z);

/// Level sets of Z. Float mode groups sorted labels whose gaps are at most
/// kLabelTolerance.
Partition z_partition(const PathSpace& space, const InfoVariable& z,
                      NumericMode mode = NumericMode::kRational);

enum class InfoVariant { kNone, kPlus, kMinus, kDynamic };

const char* variant_name(InfoVariant v);

struct InfoStructure {
  InfoVariant variant = InfoVariant::kNone;
  std::optional<InfoVariable> variable;
  int arrival = 0;  // dynamic variant only

  static InfoStructure none() { return {}; }
  static InfoStructure plus(InfoVariable z) { return {InfoVariant::kPlus, std::move(z), 0}; }
  static InfoStructure minus(InfoVariable z) { return {InfoVariant::kMinus, std::move(z), 0}; }
  static InfoStructure dynamic(InfoVariable z, int arrival) {
    return {InfoVariant::kDynamic, std::move(z), arrival};
  }

  /// Throws DomainError for a missing variable or an arrival outside (0, N).
  void validate(const PathSpace& space) const;
};

/// Atom partitions for t = -1..N.
class Filtration {
 public:
  Filtration(const PathSpace& space, const InfoStructure& info,
             NumericMode mode = NumericMode::kRational);
  /// Natural filtration of the prices.
  static Filtration natural(const PathSpace& space);

  int steps() const { return static_cast<int>(parts_.size()) - 2; }
  /// t in -1..N; throws DomainError otherwise.
  const Partition& at(int t) const;

 private:
  Filtration() = default;
  std::vector<Partition> parts_;  // parts_[t + 1]
};

Partition atoms_at(const PathSpace& space, const InfoStructure& info, int t,
                   NumericMode mode = NumericMode::kRational);

/// Whether Z depends only on the tail after `arrival` normalised by the price
/// there, and equals 1 where that price is zero. Requires one underlying and
/// no dynamic options (PreconditionError otherwise).
bool check_scaling_form(const PathSpace& space, const InfoVariable& z, int arrival);

/// Exchanges the prefixes through `arrival` of paths starting like `v` and
/// like `v_tilde`, rescaling the tail per asset so the result is continuous.
/// Throws DomainError if any of the three paths is zero at `arrival`.
Path path_modify(const Path& v, const Path& v_tilde, const Path& omega, int arrival);

/// Piecewise-linear reparametrisation on index units: the output has
/// `target_steps + 1` points and arrival `target_arrival`; the first segment
/// maps [0, target_arrival] onto [0, arrival] and the second segment maps the
/// rest onto [arrival, N]. Throws IncompatibleGridError if a target index
/// does not land on a source index.
Path time_change(const Path& omega, int arrival, int target_arrival,
                 std::optional<int> target_steps = std::nullopt);

template <class Key>
Partition Partition::from_keys(const std::vector<Key>& keys) {
  Partition p;
  p.atom_of.assign(keys.size(), 0);
  std::map<Key, std::size_t> index;
  for (std::size_t i = 0; i < keys.size(); ++i) {
    auto [it, inserted] = index.try_emplace(keys[i], p.atoms.size());
    if (inserted) p.atoms.emplace_back();
    p.atoms[it->second].push_back(i);
    p.atom_of[i] = it->second;
  }
  return p;
}

}  // namespace rip
