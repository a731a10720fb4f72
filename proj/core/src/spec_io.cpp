#include "multigiant/spec_io.hpp"

#include <algorithm>
#include <fstream>
#include <set>
#include <sstream>

#include <json.hpp>

#include "multigiant/errors.hpp"

namespace multigiant {

namespace {

using Json = nlohmann::ordered_json;

int line_of(std::string_view text, std::size_t byte) {
  byte = std::min(byte, text.size());
  return 1 + static_cast<int>(std::count(text.begin(), text.begin() + static_cast<std::ptrdiff_t>(byte), '\n'));
}

Json parse_json(std::string_view text) {
  try {
    return Json::parse(text.begin(), text.end());
  } catch (const nlohmann::json::parse_error& e) {
    throw ParseError("", e.what(), line_of(text, e.byte == 0 ? 0 : e.byte - 1));
  }
}

void reject_unknown(const Json& obj, const std::string& where, std::initializer_list<const char*> allowed) {
  for (const auto& [key, value] : obj.items()) {
    (void)value;
    if (std::find_if(allowed.begin(), allowed.end(), [&](const char* a) { return key == a; }) == allowed.end()) {
      throw ParseError(where.empty() ? key : where + "." + key, "unknown field");
    }
  }
}

const Json& require(const Json& obj, const std::string& where, const char* key) {
  auto it = obj.find(key);
  if (it == obj.end()) throw ParseError(where.empty() ? key : where + "." + key, "missing field");
  return *it;
}

std::int64_t as_integer(const Json& v, const std::string& field) {
  if (!v.is_number_integer()) throw ParseError(field, "expected an integer, got " + v.dump());
  return v.get<std::int64_t>();
}

int parse_parts(const Json& root) {
  const auto parts = as_integer(require(root, "", "parts"), "parts");
  if (parts < 1) throw ParseError("parts", "must be >= 1, got " + std::to_string(parts));
  return static_cast<int>(parts);
}

struct ParsedAtomHead {
  int part;
  DegreeVector degree;
};

ParsedAtomHead parse_atom_head(const Json& atom, const std::string& where, int parts) {
  if (!atom.is_object()) throw ParseError(where, "expected an object");
  const auto part = as_integer(require(atom, where, "part"), where + ".part");
  if (part < 1 || part > parts) {
    throw ParseError(where + ".part", "part " + std::to_string(part) + " outside 1.." + std::to_string(parts));
  }
  const auto& deg = require(atom, where, "degree");
  if (!deg.is_array()) throw ParseError(where + ".degree", "expected an array");
  if (deg.size() != static_cast<std::size_t>(parts)) {
    throw ParseError(where + ".degree", "has " + std::to_string(deg.size()) + " entries, expected " +
                                            std::to_string(parts));
  }
  std::vector<int> entries;
  for (std::size_t m = 0; m < deg.size(); ++m) {
    const auto d = as_integer(deg[m], where + ".degree[" + std::to_string(m) + "]");
    if (d < 0) throw ParseError(where + ".degree[" + std::to_string(m) + "]", "negative degree");
    entries.push_back(static_cast<int>(d));
  }
  return {static_cast<int>(part - 1), DegreeVector(std::move(entries))};
}

std::string describe(const ParsedAtomHead& h) {
  return "atom (part " + std::to_string(h.part + 1) + ", degree " + h.degree.to_string() + ")";
}

Mass parse_mass(const Json& v, const std::string& field) {
  if (v.is_string()) {
    try {
      return Mass::parse_rational(v.get<std::string>());
    } catch (const ParseError& e) {
      throw ParseError(field, e.what());
    }
  }
  if (v.is_number_integer()) return Mass::exact(Rational(v.get<std::int64_t>()));
  if (v.is_number_float()) return Mass::approximate(v.get<double>());
  throw ParseError(field, "expected \"a/b\" string or number, got " + v.dump());
}

Json degree_json(const DegreeVector& d) {
  Json arr = Json::array();
  for (int x : d.entries()) arr.push_back(x);
  return arr;
}

std::string read_file(const std::filesystem::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw Error("cannot open " + path.string());
  std::ostringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

void write_file(const std::filesystem::path& path, const std::string& content) {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw Error("cannot write " + path.string());
  out << content;
}

} // namespace

DegreeSpec parse_spec(std::string_view text) {
  const Json root = parse_json(text);
  if (!root.is_object()) throw ParseError("", "top level must be an object");
  reject_unknown(root, "", {"parts", "atoms"});
  const int parts = parse_parts(root);
  const auto& atoms_json = require(root, "", "atoms");
  if (!atoms_json.is_array()) throw ParseError("atoms", "expected an array");

  std::vector<SpecAtom> atoms;
  std::set<std::pair<int, DegreeVector>> seen;
  for (std::size_t k = 0; k < atoms_json.size(); ++k) {
    const std::string where = "atoms[" + std::to_string(k) + "]";
    const auto& a = atoms_json[k];
    auto head = parse_atom_head(a, where, parts);
    reject_unknown(a, where, {"part", "degree", "mass"});
    Mass mass = parse_mass(require(a, where, "mass"), where + ".mass");
    if (mass.is_negative()) throw ParseError(where + ".mass", describe(head) + " has negative mass " + mass.to_string());
    if (!seen.emplace(head.part, head.degree).second) {
      throw ParseError(where, "duplicate " + describe(head));
    }
    atoms.push_back({head.part, std::move(head.degree), std::move(mass)});
  }
  return DegreeSpec(parts, std::move(atoms));
}

std::string dump_spec(const DegreeSpec& spec) {
  Json root;
  root["parts"] = spec.parts();
  Json atoms = Json::array();
  for (const auto& a : spec.atoms()) {
    Json atom;
    atom["part"] = a.part + 1;
    atom["degree"] = degree_json(a.degree);
    if (a.mass.is_exact()) {
      atom["mass"] = a.mass.to_string();
    } else {
      atom["mass"] = a.mass.value();
    }
    atoms.push_back(std::move(atom));
  }
  root["atoms"] = std::move(atoms);
  return root.dump(2) + "\n";
}

DegreeSpec load_spec(const std::filesystem::path& path) { return parse_spec(read_file(path)); }

void save_spec(const DegreeSpec& spec, const std::filesystem::path& path) { write_file(path, dump_spec(spec)); }

DegreeSequence parse_sequence(std::string_view text) {
  const Json root = parse_json(text);
  if (!root.is_object()) throw ParseError("", "top level must be an object");
  reject_unknown(root, "", {"parts", "n", "atoms"});
  const int parts = parse_parts(root);
  const auto declared_n = as_integer(require(root, "", "n"), "n");
  const auto& atoms_json = require(root, "", "atoms");
  if (!atoms_json.is_array()) throw ParseError("atoms", "expected an array");

  std::vector<SequenceEntry> entries;
  std::set<std::pair<int, DegreeVector>> seen;
  for (std::size_t k = 0; k < atoms_json.size(); ++k) {
    const std::string where = "atoms[" + std::to_string(k) + "]";
    const auto& a = atoms_json[k];
    auto head = parse_atom_head(a, where, parts);
    reject_unknown(a, where, {"part", "degree", "count"});
    const auto count = as_integer(require(a, where, "count"), where + ".count");
    if (count < 0) throw ParseError(where + ".count", describe(head) + " has negative count");
    if (!seen.emplace(head.part, head.degree).second) {
      throw ParseError(where, "duplicate " + describe(head));
    }
    entries.push_back({head.part, std::move(head.degree), count});
  }
  DegreeSequence seq(parts, std::move(entries));
  if (seq.n() != declared_n) {
    throw ParseError("n", "declared n = " + std::to_string(declared_n) + " but counts sum to " +
                              std::to_string(seq.n()));
  }
  return seq;
}

std::string dump_sequence(const DegreeSequence& seq) {
  Json root;
  root["parts"] = seq.parts();
  root["n"] = seq.n();
  Json atoms = Json::array();
  for (const auto& e : seq.entries()) {
    Json atom;
    atom["part"] = e.part + 1;
    atom["degree"] = degree_json(e.degree);
    atom["count"] = e.count;
    atoms.push_back(std::move(atom));
  }
  root["atoms"] = std::move(atoms);
  return root.dump(2) + "\n";
}

DegreeSequence load_sequence(const std::filesystem::path& path) { return parse_sequence(read_file(path)); }

void save_sequence(const DegreeSequence& seq, const std::filesystem::path& path) {
  write_file(path, dump_sequence(seq));
}

} // namespace multigiant
