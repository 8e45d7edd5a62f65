#pragma once

#include <cstdint>
#include <stdexcept>
#include <string>
#include <tuple>
#include <vector>

namespace starcyl {

// Error taxonomy mirrored by the CLI exit codes.
struct parse_error : std::runtime_error {
  std::size_t pos;
  parse_error(const std::string& msg, std::size_t p = 0)
      : std::runtime_error(msg), pos(p) {}
};

struct semantic_error : std::runtime_error {
  using std::runtime_error::runtime_error;
};

struct budget_error : std::runtime_error {
  using std::runtime_error::runtime_error;
};

// A cell of a star-tuple: a domain constant, the universal null "*",
// or an existential null "?k". Constants and null ids live in disjoint
// namespaces by construction.
class Value {
 public:
  enum class Kind : std::uint8_t { Const = 0, ENull = 1, Star = 2 };

  static Value constant(std::string sym) {
    Value v;
    v.kind_ = Kind::Const;
    v.sym_ = std::move(sym);
    return v;
  }
  static Value star() {
    Value v;
    v.kind_ = Kind::Star;
    return v;
  }
  static Value enull(int id) {
    Value v;
    v.kind_ = Kind::ENull;
    v.null_id_ = id;
    return v;
  }

  Kind kind() const { return kind_; }
  bool is_const() const { return kind_ == Kind::Const; }
  bool is_star() const { return kind_ == Kind::Star; }
  bool is_enull() const { return kind_ == Kind::ENull; }
  // Constants and existential nulls both denote a single element of the
  // universe; only "*" ranges.
  bool is_singular() const { return kind_ != Kind::Star; }

  const std::string& sym() const { return sym_; }
  int null_id() const { return null_id_; }

  friend bool operator==(const Value& a, const Value& b) {
    return a.kind_ == b.kind_ && a.sym_ == b.sym_ && a.null_id_ == b.null_id_;
  }
  friend bool operator!=(const Value& a, const Value& b) { return !(a == b); }
  friend bool operator<(const Value& a, const Value& b) {
    return std::tie(a.kind_, a.sym_, a.null_id_) <
           std::tie(b.kind_, b.sym_, b.null_id_);
  }

  std::string to_string() const {
    switch (kind_) {
      case Kind::Const:
        return sym_;
      case Kind::Star:
        return "*";
      case Kind::ENull:
        return "?" + std::to_string(null_id_);
    }
    return "?";
  }

 private:
  Kind kind_ = Kind::Star;
  std::string sym_;
  int null_id_ = 0;
};

// Condition literal over 1-based column indices: (i=j), (i!=j) or (i!=a).
// Eq/NeqCol are stored with i < j.
struct Literal {
  enum class Kind : std::uint8_t { Eq = 0, NeqCol = 1, NeqConst = 2 };

  Kind kind;
  int i = 0;
  int j = 0;        // unused for NeqConst
  std::string sym;  // NeqConst only

  static Literal eq(int i, int j) {
    if (i == j) throw semantic_error("equality literal requires i != j");
    if (i > j) std::swap(i, j);
    return Literal{Kind::Eq, i, j, {}};
  }
  static Literal neq_col(int i, int j) {
    if (i == j) throw semantic_error("inequality literal requires i != j");
    if (i > j) std::swap(i, j);
    return Literal{Kind::NeqCol, i, j, {}};
  }
  static Literal neq_const(int i, std::string sym) {
    return Literal{Kind::NeqConst, i, 0, std::move(sym)};
  }

  friend bool operator==(const Literal& a, const Literal& b) {
    return a.kind == b.kind && a.i == b.i && a.j == b.j && a.sym == b.sym;
  }
  friend bool operator<(const Literal& a, const Literal& b) {
    return std::tie(a.kind, a.i, a.j, a.sym) <
           std::tie(b.kind, b.i, b.j, b.sym);
  }

  std::string to_string() const {
    switch (kind) {
      case Kind::Eq:
        return std::to_string(i) + "=" + std::to_string(j);
      case Kind::NeqCol:
        return std::to_string(i) + "!=" + std::to_string(j);
      case Kind::NeqConst:
        return std::to_string(i) + "!=" + sym;
    }
    return "";
  }
};

// Which literal forms / values a cylinder may carry.
//   Positive: only (i=j) literals, no existential nulls.
//   Extended: adds (i!=j) and (i!=a), still no existential nulls.
//   Naive:    only (i=j) literals, existential nulls allowed.
enum class Flavor : std::uint8_t { Positive = 0, Extended = 1, Naive = 2 };

inline const char* flavor_name(Flavor f) {
  switch (f) {
    case Flavor::Positive:
      return "positive";
    case Flavor::Extended:
      return "extended";
    case Flavor::Naive:
      return "naive";
  }
  return "?";
}

// Least upper bound in the flavor semilattice. Extended and Naive do not
// mix: inequality conditions over existential nulls have no defined
// semantics here.
inline Flavor flavor_join(Flavor a, Flavor b) {
  if (a == b) return a;
  if (a == Flavor::Positive) return b;
  if (b == Flavor::Positive) return a;
  throw semantic_error("cannot combine extended and naive star-cylinders");
}

}  // namespace starcyl
