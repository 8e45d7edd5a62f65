#include "starcyl/cylinder.hpp"

#include <algorithm>
#include <set>
#include <sstream>

namespace starcyl {

void StarCylinder::check_tuple(const StarTuple& t) const {
  if (t.dim() != dim_)
    throw semantic_error("tuple dimension " + std::to_string(t.dim()) +
                         " does not match cylinder dimension " +
                         std::to_string(dim_));
  switch (flavor_) {
    case Flavor::Positive:
      if (t.has_enull())
        throw semantic_error("existential null in a positive star-cylinder");
      if (t.has_extended_literal())
        throw semantic_error("inequality literal in a positive star-cylinder");
      break;
    case Flavor::Extended:
      if (t.has_enull())
        throw semantic_error("existential null in an extended star-cylinder");
      break;
    case Flavor::Naive:
      if (t.has_extended_literal())
        throw semantic_error("inequality literal in a naive star-cylinder");
      break;
  }
}

StarCylinder StarCylinder::make(int dim, Flavor flavor,
                                std::vector<StarTuple> tuples) {
  StarCylinder c(dim, flavor);
  for (const StarTuple& t : tuples) c.check_tuple(t);
  std::sort(tuples.begin(), tuples.end());
  tuples.erase(std::unique(tuples.begin(), tuples.end()), tuples.end());
  c.tuples_ = std::move(tuples);
  return c;
}

void StarCylinder::insert(StarTuple t) {
  check_tuple(t);
  auto it = std::lower_bound(tuples_.begin(), tuples_.end(), t);
  if (it != tuples_.end() && *it == t) return;
  tuples_.insert(it, std::move(t));
}

bool StarCylinder::has_enull() const {
  return std::any_of(tuples_.begin(), tuples_.end(),
                     [](const StarTuple& t) { return t.has_enull(); });
}

bool StarCylinder::has_extended_literal() const {
  return std::any_of(tuples_.begin(), tuples_.end(), [](const StarTuple& t) {
    return t.has_extended_literal();
  });
}

std::vector<std::string> StarCylinder::constants() const {
  std::set<std::string> syms;
  for (const StarTuple& t : tuples_) {
    for (const Value& v : t.entries())
      if (v.is_const()) syms.insert(v.sym());
    for (const Literal& l : t.cond())
      if (l.kind == Literal::Kind::NeqConst) syms.insert(l.sym);
  }
  return {syms.begin(), syms.end()};
}

std::vector<int> StarCylinder::enull_ids() const {
  std::set<int> ids;
  for (const StarTuple& t : tuples_)
    for (const Value& v : t.entries())
      if (v.is_enull()) ids.insert(v.null_id());
  return {ids.begin(), ids.end()};
}

std::string StarCylinder::to_string() const {
  std::ostringstream os;
  os << "{";
  for (std::size_t i = 0; i < tuples_.size(); ++i) {
    if (i) os << ", ";
    os << tuples_[i].to_string();
  }
  os << "}";
  return os.str();
}

bool cyl_dominates(const StarCylinder& c, const StarCylinder& d) {
  if (c.dim() != d.dim())
    throw semantic_error("cylinder dominance requires equal dimensions");
  for (const StarTuple& t : c.tuples()) {
    bool covered = false;
    for (const StarTuple& u : d.tuples())
      if (dominates(t, u)) {
        covered = true;
        break;
      }
    if (!covered) return false;
  }
  return true;
}

StarCylinder reduce(const StarCylinder& c) {
  const auto& ts = c.tuples();
  std::vector<bool> removed(ts.size(), false);
  for (std::size_t i = 0; i < ts.size(); ++i) {
    for (std::size_t j = 0; j < ts.size(); ++j) {
      if (i == j || removed[j]) continue;
      if (!dominates(ts[i], ts[j])) continue;
      // Mutually dominating tuples keep the first one.
      if (dominates(ts[j], ts[i]) && j > i) continue;
      removed[i] = true;
      break;
    }
  }
  std::vector<StarTuple> keep;
  for (std::size_t i = 0; i < ts.size(); ++i)
    if (!removed[i]) keep.push_back(ts[i]);
  return StarCylinder::make(c.dim(), c.flavor(), std::move(keep));
}

}  // namespace starcyl
