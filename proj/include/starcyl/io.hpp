#pragma once

#include <iosfwd>
#include <string>
#include <vector>

#include "starcyl/logic.hpp"
#include "starcyl/sca.hpp"

namespace starcyl {

// A stored database: one star-relation per schema symbol, flavors
// detected from the file content. Naive and extended conditions never
// co-occur within one relation.
struct StoredDatabase {
  Schema schema;
  std::vector<StarCylinder> relations;

  const StarCylinder& relation(const std::string& name) const {
    int p = schema.find(name);
    if (p < 0) throw semantic_error("unknown relation '" + name + "'");
    return relations[p];
  }
};

struct LoadOptions {
  bool strict = false;  // unsatisfiable rows: error instead of skip+warn
};

// Star-table file format:
//   relation F/2
//   Alice, Chris
//   *, Alice
//   ?1, Chris
//   Bob, * | 2!=Basketball
// '*' is the universal null, '?k' an existential null, bare tokens are
// constants. An optional '| cond' carries ';'-separated literals of the
// forms i=j, i!=j, i!=a. '#' starts a comment line.
StoredDatabase load_database(std::istream& in, const LoadOptions& opts = {},
                             std::vector<std::string>* warnings = nullptr);
StoredDatabase load_database_file(const std::string& path,
                                  const LoadOptions& opts = {},
                                  std::vector<std::string>* warnings = nullptr);

void save_database(const StoredDatabase& db, std::ostream& out);
std::string save_database_string(const StoredDatabase& db);

// The n-expansion of every stored relation (pads with '*' columns).
std::vector<StarCylinder> expand(const StoredDatabase& db, int n);

// Plain-text table of a cylinder; conditions are shown in a trailing
// column when requested.
void print_table(const StarCylinder& c, const std::vector<std::string>& headers,
                 bool show_conditions, std::ostream& out);

// Stable JSON form: {"dim":k, "flavor":"...", "rows":[{"entries":[...],
// "cond":[...]}]}.
std::string to_json(const StarCylinder& c);

}  // namespace starcyl
