#include "starcyl/io.hpp"

#include <algorithm>
#include <cctype>
#include <fstream>
#include <iostream>
#include <sstream>

#include <json.hpp>

namespace starcyl {

namespace {

std::string trim(const std::string& s) {
  std::size_t a = 0, b = s.size();
  while (a < b && std::isspace(static_cast<unsigned char>(s[a]))) ++a;
  while (b > a && std::isspace(static_cast<unsigned char>(s[b - 1]))) --b;
  return s.substr(a, b - a);
}

std::vector<std::string> split(const std::string& s, char sep) {
  std::vector<std::string> out;
  std::string cur;
  for (char c : s) {
    if (c == sep) {
      out.push_back(cur);
      cur.clear();
    } else {
      cur += c;
    }
  }
  out.push_back(cur);
  return out;
}

bool all_digits(const std::string& s) {
  return !s.empty() && std::all_of(s.begin(), s.end(), [](char c) {
    return std::isdigit(static_cast<unsigned char>(c));
  });
}

Value parse_value(const std::string& tok, int line) {
  if (tok.empty())
    throw parse_error("empty value on line " + std::to_string(line), 0);
  if (tok == "*") return Value::star();
  if (tok[0] == '?') {
    std::string id = tok.substr(1);
    if (!all_digits(id))
      throw parse_error("bad existential null '" + tok + "' on line " +
                            std::to_string(line),
                        0);
    return Value::enull(std::stoi(id));
  }
  return Value::constant(tok);
}

Literal parse_literal(const std::string& tok, int arity, int line) {
  std::size_t eq = tok.find("!=");
  bool neq = eq != std::string::npos;
  if (!neq) eq = tok.find('=');
  if (eq == std::string::npos)
    throw parse_error("bad condition '" + tok + "' on line " +
                          std::to_string(line),
                      0);
  std::string lhs = trim(tok.substr(0, eq));
  std::string rhs = trim(tok.substr(eq + (neq ? 2 : 1)));
  if (!all_digits(lhs))
    throw parse_error("condition must start with a column index on line " +
                          std::to_string(line),
                      0);
  int i = std::stoi(lhs);
  auto check = [&](int col) {
    if (col < 1 || col > arity)
      throw parse_error("condition column " + std::to_string(col) +
                            " out of range on line " + std::to_string(line),
                        0);
  };
  check(i);
  if (all_digits(rhs)) {
    int j = std::stoi(rhs);
    check(j);
    if (i == j)
      throw parse_error("condition relates a column to itself on line " +
                            std::to_string(line),
                        0);
    return neq ? Literal::neq_col(i, j) : Literal::eq(i, j);
  }
  if (!neq)
    throw parse_error("equality against a constant is stored as the value "
                      "itself (line " +
                          std::to_string(line) + ")",
                      0);
  if (rhs.empty())
    throw parse_error("missing constant in condition on line " +
                          std::to_string(line),
                      0);
  return Literal::neq_const(i, rhs);
}

}  // namespace

StoredDatabase load_database(std::istream& in, const LoadOptions& opts,
                             std::vector<std::string>* warnings) {
  StoredDatabase db;
  std::string line;
  int lineno = 0;
  int current = -1;  // relation being filled
  std::vector<std::vector<StarTuple>> rows;

  while (std::getline(in, line)) {
    ++lineno;
    std::string s = trim(line);
    if (s.empty() || s[0] == '#') continue;

    if (s.rfind("relation", 0) == 0 &&
        (s.size() == 8 || std::isspace(static_cast<unsigned char>(s[8])))) {
      std::string decl = trim(s.substr(8));
      std::size_t slash = decl.find('/');
      if (slash == std::string::npos)
        throw parse_error("expected 'relation NAME/ARITY' on line " +
                              std::to_string(lineno),
                          0);
      std::string name = trim(decl.substr(0, slash));
      std::string ar = trim(decl.substr(slash + 1));
      if (name.empty() || !all_digits(ar))
        throw parse_error("bad relation declaration on line " +
                              std::to_string(lineno),
                          0);
      if (db.schema.find(name) >= 0)
        throw parse_error("duplicate relation '" + name + "' on line " +
                              std::to_string(lineno),
                          0);
      int arity = std::stoi(ar);
      if (arity < 1)
        throw parse_error("arity must be at least 1 on line " +
                              std::to_string(lineno),
                          0);
      db.schema.relations.emplace_back(name, arity);
      rows.emplace_back();
      current = static_cast<int>(rows.size()) - 1;
      continue;
    }

    if (current < 0)
      throw parse_error("row before any relation declaration on line " +
                            std::to_string(lineno),
                        0);

    const int arity = db.schema.relations[current].second;
    std::string values_part = s;
    std::string cond_part;
    std::size_t bar = s.find('|');
    if (bar != std::string::npos) {
      values_part = trim(s.substr(0, bar));
      cond_part = trim(s.substr(bar + 1));
    }

    std::vector<std::string> toks = split(values_part, ',');
    if (static_cast<int>(toks.size()) != arity)
      throw parse_error("row has " + std::to_string(toks.size()) +
                            " values, relation expects " +
                            std::to_string(arity) + " (line " +
                            std::to_string(lineno) + ")",
                        0);
    std::vector<Value> entries;
    for (const std::string& t : toks)
      entries.push_back(parse_value(trim(t), lineno));

    std::vector<Literal> lits;
    if (!cond_part.empty())
      for (const std::string& t : split(cond_part, ';'))
        if (!trim(t).empty()) lits.push_back(parse_literal(trim(t), arity, lineno));

    auto tuple = StarTuple::normalize(std::move(entries), std::move(lits));
    if (!tuple) {
      if (opts.strict)
        throw semantic_error("unsatisfiable row on line " +
                             std::to_string(lineno));
      if (warnings)
        warnings->push_back("line " + std::to_string(lineno) +
                            ": unsatisfiable row skipped");
      continue;
    }
    rows[current].push_back(std::move(*tuple));
  }

  for (std::size_t p = 0; p < rows.size(); ++p) {
    const int arity = db.schema.relations[p].second;
    bool enull = std::any_of(rows[p].begin(), rows[p].end(),
                             [](const StarTuple& t) { return t.has_enull(); });
    bool ext = std::any_of(rows[p].begin(), rows[p].end(), [](const StarTuple& t) {
      return t.has_extended_literal();
    });
    if (enull && ext)
      throw semantic_error("relation '" + db.schema.relations[p].first +
                           "' mixes existential nulls with inequality "
                           "conditions");
    Flavor f = enull ? Flavor::Naive
                     : (ext ? Flavor::Extended : Flavor::Positive);
    db.relations.push_back(StarCylinder::make(arity, f, std::move(rows[p])));
  }
  return db;
}

StoredDatabase load_database_file(const std::string& path,
                                  const LoadOptions& opts,
                                  std::vector<std::string>* warnings) {
  std::ifstream in(path);
  if (!in) throw semantic_error("cannot open database file '" + path + "'");
  return load_database(in, opts, warnings);
}

void save_database(const StoredDatabase& db, std::ostream& out) {
  for (std::size_t p = 0; p < db.schema.relations.size(); ++p) {
    if (p) out << "\n";
    out << "relation " << db.schema.relations[p].first << "/"
        << db.schema.relations[p].second << "\n";
    for (const StarTuple& t : db.relations[p].tuples()) {
      for (int i = 0; i < t.dim(); ++i) {
        if (i) out << ", ";
        out << t.entries()[i].to_string();
      }
      if (!t.cond().empty()) {
        out << " | ";
        for (std::size_t i = 0; i < t.cond().size(); ++i) {
          if (i) out << "; ";
          out << t.cond()[i].to_string();
        }
      }
      out << "\n";
    }
  }
}

std::string save_database_string(const StoredDatabase& db) {
  std::ostringstream os;
  save_database(db, os);
  return os.str();
}

std::vector<StarCylinder> expand(const StoredDatabase& db, int n) {
  std::vector<StarCylinder> out;
  out.reserve(db.relations.size());
  for (const StarCylinder& c : db.relations)
    out.push_back(expand_cylinder(c, n));
  return out;
}

void print_table(const StarCylinder& c, const std::vector<std::string>& headers,
                 bool show_conditions, std::ostream& out) {
  std::vector<std::vector<std::string>> grid;
  std::vector<std::string> head = headers;
  if (show_conditions) head.push_back("conditions");
  grid.push_back(head);
  for (const StarTuple& t : c.tuples()) {
    std::vector<std::string> row;
    for (const Value& v : t.entries()) row.push_back(v.to_string());
    if (show_conditions) {
      std::string cond;
      for (std::size_t i = 0; i < t.cond().size(); ++i) {
        if (i) cond += "; ";
        cond += t.cond()[i].to_string();
      }
      row.push_back(cond.empty() ? "-" : cond);
    }
    grid.push_back(std::move(row));
  }
  std::vector<std::size_t> width(grid[0].size(), 0);
  for (const auto& row : grid)
    for (std::size_t i = 0; i < row.size(); ++i)
      width[i] = std::max(width[i], row[i].size());
  for (std::size_t r = 0; r < grid.size(); ++r) {
    for (std::size_t i = 0; i < grid[r].size(); ++i) {
      if (i) out << "  ";
      out << grid[r][i];
      if (i + 1 < grid[r].size())
        out << std::string(width[i] - grid[r][i].size(), ' ');
    }
    out << "\n";
    if (r == 0) {
      std::size_t total = 0;
      for (std::size_t i = 0; i < width.size(); ++i)
        total += width[i] + (i ? 2 : 0);
      out << std::string(total, '-') << "\n";
    }
  }
}

std::string to_json(const StarCylinder& c) {
  nlohmann::json j;
  j["dim"] = c.dim();
  j["flavor"] = flavor_name(c.flavor());
  j["rows"] = nlohmann::json::array();
  for (const StarTuple& t : c.tuples()) {
    nlohmann::json row;
    row["entries"] = nlohmann::json::array();
    for (const Value& v : t.entries()) row["entries"].push_back(v.to_string());
    row["cond"] = nlohmann::json::array();
    for (const Literal& l : t.cond()) row["cond"].push_back(l.to_string());
    j["rows"].push_back(std::move(row));
  }
  return j.dump(2);
}

}  // namespace starcyl
