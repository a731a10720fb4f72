#include "multigiant/degree_model.hpp"

#include <algorithm>
#include <charconv>
#include <cmath>
#include <deque>
#include <map>
#include <numeric>
#include <sstream>

#include "multigiant/errors.hpp"

namespace multigiant {

// ---------------------------------------------------------------------------
// Mass

Mass Mass::exact(Rational value) {
  Mass m;
  m.value_ = static_cast<double>(value);
  m.exact_ = std::move(value);
  return m;
}

Mass Mass::approximate(double value) {
  Mass m;
  m.exact_.reset();
  m.value_ = value;
  return m;
}

Mass Mass::parse_rational(std::string_view text) {
  auto parse_int = [&](std::string_view s) {
    if (s.empty()) throw ParseError("", "empty integer in rational '" + std::string(text) + "'");
    std::size_t start = (s.front() == '-' || s.front() == '+') ? 1 : 0;
    if (start == s.size()) throw ParseError("", "bad rational '" + std::string(text) + "'");
    for (std::size_t i = start; i < s.size(); ++i) {
      if (s[i] < '0' || s[i] > '9') throw ParseError("", "bad rational '" + std::string(text) + "'");
    }
    std::string digits(s.front() == '+' ? s.substr(1) : s);
    return boost::multiprecision::cpp_int(digits);
  };
  auto slash = text.find('/');
  if (slash == std::string_view::npos) return exact(Rational(parse_int(text)));
  auto num = parse_int(text.substr(0, slash));
  auto den = parse_int(text.substr(slash + 1));
  if (den == 0) throw ParseError("", "zero denominator in '" + std::string(text) + "'");
  return exact(Rational(num, den));
}

const Rational& Mass::rational() const {
  if (!exact_) throw Error("mass " + to_string() + " is not exact");
  return *exact_;
}

bool Mass::is_negative() const { return exact_ ? *exact_ < 0 : value_ < 0.0; }
bool Mass::is_zero() const { return exact_ ? *exact_ == 0 : value_ == 0.0; }

std::string Mass::to_string() const {
  if (exact_) {
    if (boost::multiprecision::denominator(*exact_) == 1) return boost::multiprecision::numerator(*exact_).str();
    return boost::multiprecision::numerator(*exact_).str() + "/" +
           boost::multiprecision::denominator(*exact_).str();
  }
  char buf[32];
  auto [end, ec] = std::to_chars(buf, buf + sizeof buf, value_);
  (void)ec;
  return std::string(buf, end);
}

Mass operator+(const Mass& a, const Mass& b) {
  if (a.exact_ && b.exact_) return Mass::exact(*a.exact_ + *b.exact_);
  return Mass::approximate(a.value_ + b.value_);
}

Mass operator-(const Mass& a, const Mass& b) {
  if (a.exact_ && b.exact_) return Mass::exact(*a.exact_ - *b.exact_);
  return Mass::approximate(a.value_ - b.value_);
}

Mass operator*(const Mass& a, const Mass& b) {
  if (a.exact_ && b.exact_) return Mass::exact(*a.exact_ * *b.exact_);
  return Mass::approximate(a.value_ * b.value_);
}

bool operator==(const Mass& a, const Mass& b) {
  if (a.exact_.has_value() != b.exact_.has_value()) return false;
  if (a.exact_) return *a.exact_ == *b.exact_;
  return a.value_ == b.value_;
}

// ---------------------------------------------------------------------------
// DegreeVector, PartPair

DegreeVector::DegreeVector(std::vector<int> entries) : entries_(std::move(entries)) {
  for (std::size_t m = 0; m < entries_.size(); ++m) {
    if (entries_[m] < 0) {
      throw ParseError("degree", "negative entry " + std::to_string(entries_[m]) + " at part " +
                                     std::to_string(m + 1));
    }
  }
  total_ = std::accumulate(entries_.begin(), entries_.end(), 0);
}

std::string DegreeVector::to_string() const {
  std::string out = "(";
  for (std::size_t m = 0; m < entries_.size(); ++m) {
    if (m) out += ",";
    out += std::to_string(entries_[m]);
  }
  return out + ")";
}

std::string PartPair::to_string() const {
  return "(" + std::to_string(from + 1) + "," + std::to_string(to + 1) + ")";
}

// ---------------------------------------------------------------------------
// DegreeSpec

namespace {

std::string atom_name(int part, const DegreeVector& d) {
  return "atom (part " + std::to_string(part + 1) + ", degree " + d.to_string() + ")";
}

template <class Entry>
void check_structure(int parts, std::vector<Entry>& entries) {
  if (parts < 1) throw ParseError("parts", "must be >= 1, got " + std::to_string(parts));
  for (const auto& e : entries) {
    if (e.part < 0 || e.part >= parts) {
      throw ParseError("part", "part " + std::to_string(e.part + 1) + " outside 1.." +
                                   std::to_string(parts));
    }
    if (e.degree.size() != static_cast<std::size_t>(parts)) {
      throw ParseError("degree", atom_name(e.part, e.degree) + " has " +
                                     std::to_string(e.degree.size()) + " entries, expected " +
                                     std::to_string(parts));
    }
  }
  std::sort(entries.begin(), entries.end(), [](const Entry& a, const Entry& b) {
    return std::tie(a.part, a.degree) < std::tie(b.part, b.degree);
  });
  for (std::size_t k = 1; k < entries.size(); ++k) {
    if (entries[k].part == entries[k - 1].part && entries[k].degree == entries[k - 1].degree) {
      throw ParseError("atoms", "duplicate " + atom_name(entries[k].part, entries[k].degree));
    }
  }
}

template <class T>
BasicMatrix<T> lambda_of(int parts, std::span<const SpecAtom> atoms, auto&& mass_of) {
  BasicMatrix<T> lambda(parts, parts, T(0));
  for (const auto& a : atoms) {
    const T mass = mass_of(a.mass);
    for (int j = 0; j < parts; ++j) {
      if (a.degree[j] != 0) lambda(a.part, j) += T(a.degree[j]) * mass;
    }
  }
  return lambda;
}

} // namespace

DegreeSpec::DegreeSpec(int parts, std::vector<SpecAtom> atoms) : parts_(parts), atoms_(std::move(atoms)) {
  check_structure(parts_, atoms_);
  for (const auto& a : atoms_) {
    if (a.mass.is_negative()) {
      throw ParseError("mass", atom_name(a.part, a.degree) + " has negative mass " + a.mass.to_string());
    }
    if (!a.mass.is_exact()) {
      exact_ = false;
      if (!std::isfinite(a.mass.value())) {
        throw ParseError("mass", atom_name(a.part, a.degree) + " has non-finite mass");
      }
    }
  }

  if (exact_) {
    exact_lambda_ = lambda_of<Rational>(parts_, atoms_, [](const Mass& m) { return m.rational(); });
    lambda_ = Matrix(parts_, parts_);
    for (int i = 0; i < parts_; ++i) {
      for (int j = 0; j < parts_; ++j) lambda_(i, j) = static_cast<double>((*exact_lambda_)(i, j));
    }
  } else {
    lambda_ = lambda_of<double>(parts_, atoms_, [](const Mass& m) { return m.value(); });
  }

  for (int i = 0; i < parts_; ++i) {
    for (int j = 0; j < parts_; ++j) {
      if (lambda_(i, j) > 0.0) pairs_.push_back({i, j});
    }
  }

  first_moment_.assign(parts_, 0.0);
  second_moment_.assign(parts_, 0.0);
  for (const auto& a : atoms_) {
    const double t = a.degree.total();
    first_moment_[a.part] += t * a.mass.value();
    second_moment_[a.part] += t * t * a.mass.value();
  }
}

Mass DegreeSpec::total_mass() const {
  Mass sum;
  if (!exact_) sum = Mass::approximate(0.0);
  for (const auto& a : atoms_) sum = sum + a.mass;
  return sum;
}

std::vector<int> DegreeSpec::pair_targets(int part) const {
  std::vector<int> out;
  for (const auto& pr : pairs_) {
    if (pr.from == part) out.push_back(pr.to);
  }
  return out;
}

bool DegreeSpec::operator==(const DegreeSpec& other) const {
  if (parts_ != other.parts_ || atoms_.size() != other.atoms_.size()) return false;
  for (std::size_t k = 0; k < atoms_.size(); ++k) {
    const auto& a = atoms_[k];
    const auto& b = other.atoms_[k];
    if (a.part != b.part || a.degree != b.degree || !(a.mass == b.mass)) return false;
  }
  return true;
}

ValidationReport validate_spec(const DegreeSpec& spec, double tol) {
  ValidationReport report;
  report.pairs = spec.pairs();
  report.lambda = spec.lambda();
  report.first_moment = spec.first_moment();
  report.second_moment = spec.second_moment();

  const Mass total = spec.total_mass();
  if (spec.is_exact()) {
    if (total.rational() != 1) report.errors.push_back("masses sum to " + total.to_string() + ", not 1");
  } else if (std::abs(total.value() - 1.0) > tol) {
    report.errors.push_back("masses sum to " + total.to_string() + ", not 1");
  }

  const int p = spec.parts();
  for (int i = 0; i < p; ++i) {
    for (int j = i + 1; j < p; ++j) {
      bool symmetric = spec.is_exact()
                           ? (*spec.exact_lambda())(i, j) == (*spec.exact_lambda())(j, i)
                           : std::abs(spec.lambda()(i, j) - spec.lambda()(j, i)) <= tol;
      if (!symmetric) {
        std::ostringstream os;
        os.precision(17);
        os << "lambda asymmetry: lambda_" << i + 1 << "^" << j + 1 << " = " << spec.lambda()(i, j)
           << " but lambda_" << j + 1 << "^" << i + 1 << " = " << spec.lambda()(j, i);
        report.errors.push_back(os.str());
      }
    }
  }

  std::vector<double> part_mass(p, 0.0);
  for (const auto& a : spec.atoms()) {
    part_mass[a.part] += a.mass.value();
    if (a.mass.is_zero()) report.lints.push_back(atom_name(a.part, a.degree) + " has zero mass");
  }
  for (int i = 0; i < p; ++i) {
    if (part_mass[i] == 0.0) report.lints.push_back("part " + std::to_string(i + 1) + " carries no mass");
    if (spec.pair_targets(i).empty()) {
      report.errors.push_back("S_" + std::to_string(i + 1) + " is empty: part " + std::to_string(i + 1) +
                              " has no edges to any part");
    }
  }
  return report;
}

DegreeSpec mix_specs(const DegreeSpec& a, const DegreeSpec& b, const Mass& t) {
  if (a.parts() != b.parts()) throw Error("cannot mix specs with different part counts");
  const Mass one = t.is_exact() ? Mass::exact(1) : Mass::approximate(1.0);
  const Mass wa = one - t;
  std::map<std::pair<int, DegreeVector>, Mass> merged;
  for (const auto& atom : a.atoms()) merged[{atom.part, atom.degree}] = wa * atom.mass;
  for (const auto& atom : b.atoms()) {
    auto key = std::make_pair(atom.part, atom.degree);
    auto it = merged.find(key);
    Mass contribution = t * atom.mass;
    if (it == merged.end()) {
      merged.emplace(std::move(key), contribution);
    } else {
      it->second = it->second + contribution;
    }
  }
  std::vector<SpecAtom> atoms;
  atoms.reserve(merged.size());
  for (auto& [key, mass] : merged) atoms.push_back({key.first, key.second, mass});
  return DegreeSpec(a.parts(), std::move(atoms));
}

// ---------------------------------------------------------------------------
// DegreeSequence

DegreeSequence::DegreeSequence(int parts, std::vector<SequenceEntry> entries)
    : parts_(parts), entries_(std::move(entries)) {
  check_structure(parts_, entries_);
  for (const auto& e : entries_) {
    if (e.count < 0) {
      throw ParseError("count", atom_name(e.part, e.degree) + " has negative count " +
                                    std::to_string(e.count));
    }
    n_ += e.count;
    if (e.count > 0) omega_ = std::max(omega_, e.degree.total());
  }
}

std::int64_t DegreeSequence::clone_count(int from, int to) const {
  std::int64_t c = 0;
  for (const auto& e : entries_) {
    if (e.part == from) c += e.count * e.degree[to];
  }
  return c;
}

std::int64_t DegreeSequence::total_clones() const {
  std::int64_t c = 0;
  for (const auto& e : entries_) c += e.count * e.degree.total();
  return c;
}

std::vector<PartPair> DegreeSequence::pairs() const {
  std::vector<PartPair> out;
  for (int i = 0; i < parts_; ++i) {
    for (int j = 0; j < parts_; ++j) {
      if (clone_count(i, j) > 0) out.push_back({i, j});
    }
  }
  return out;
}

std::vector<std::string> DegreeSequence::matching_defects() const {
  std::vector<std::string> defects;
  for (int i = 0; i < parts_; ++i) {
    const auto same = clone_count(i, i);
    if (same % 2 != 0) {
      defects.push_back("odd number (" + std::to_string(same) + ") of " + PartPair{i, i}.to_string() +
                        " clones");
    }
    for (int j = i + 1; j < parts_; ++j) {
      const auto forward = clone_count(i, j);
      const auto backward = clone_count(j, i);
      if (forward != backward) {
        defects.push_back("clone-count asymmetry: " + std::to_string(forward) + " " +
                          PartPair{i, j}.to_string() + " clones vs " + std::to_string(backward) + " " +
                          PartPair{j, i}.to_string() + " clones");
      }
    }
  }
  return defects;
}

void DegreeSequence::require_matchable() const {
  auto defects = matching_defects();
  if (defects.empty()) return;
  std::string msg = "degree sequence is not matchable:";
  for (const auto& d : defects) msg += " " + d + ";";
  throw InvalidSequence(msg);
}

SequenceStats sequence_stats(const DegreeSequence& seq) {
  SequenceStats stats;
  const int p = seq.parts();
  stats.n = seq.n();
  stats.omega = seq.omega();
  stats.lambda = Matrix(p, p);
  stats.first_moment.assign(p, 0.0);
  stats.second_moment.assign(p, 0.0);
  if (seq.n() == 0) return stats;

  const double n = static_cast<double>(seq.n());
  for (const auto& e : seq.entries()) {
    const double frac = static_cast<double>(e.count) / n;
    for (int j = 0; j < p; ++j) stats.lambda(e.part, j) += e.degree[j] * frac;
    const double t = e.degree.total();
    stats.first_moment[e.part] += t * frac;
    stats.second_moment[e.part] += t * t * frac;
  }
  const auto omega = static_cast<std::int64_t>(stats.omega);
  if (omega * omega > seq.n()) {
    stats.lints.push_back("max degree omega(n) = " + std::to_string(omega) + " has omega^2 = " +
                          std::to_string(omega * omega) + " > n = " + std::to_string(seq.n()) +
                          "; outside the omega(n) = o(sqrt n) regime");
  }
  return stats;
}

// ---------------------------------------------------------------------------
// realize_sequence

namespace {

struct Rounded {
  std::int64_t floor = 0;
  double remainder = 0.0;  // only used for ordering
  Rational exact_remainder;
};

Rounded round_down(const SpecAtom& atom, std::int64_t n) {
  Rounded r;
  if (atom.mass.is_exact()) {
    Rational x = atom.mass.rational() * n;
    boost::multiprecision::cpp_int q = boost::multiprecision::numerator(x) /
                                       boost::multiprecision::denominator(x);
    r.floor = static_cast<std::int64_t>(q);
    r.exact_remainder = x - Rational(q);
    r.remainder = static_cast<double>(r.exact_remainder);
  } else {
    const double x = atom.mass.value() * static_cast<double>(n);
    const double f = std::floor(x);
    r.floor = static_cast<std::int64_t>(f);
    r.remainder = x - f;
    r.exact_remainder = Rational(0);
  }
  return r;
}

// Constraint state for the repair search: one signed imbalance per
// unordered pair i<j, then one parity bit per (i,i).
struct RepairProblem {
  std::vector<PartPair> cross;  // (i,j), i<j
  std::vector<int> same;        // parts i with (i,i) clones possible
};

using RepairState = std::vector<std::int64_t>;

RepairState repair_state(const RepairProblem& prob, const std::vector<std::int64_t>& counts,
                         std::span<const SpecAtom> atoms) {
  RepairState s(prob.cross.size() + prob.same.size(), 0);
  for (std::size_t k = 0; k < atoms.size(); ++k) {
    const auto& a = atoms[k];
    for (std::size_t c = 0; c < prob.cross.size(); ++c) {
      const auto [i, j] = prob.cross[c];
      if (a.part == i) s[c] += counts[k] * a.degree[j];
      if (a.part == j) s[c] -= counts[k] * a.degree[i];
    }
    for (std::size_t c = 0; c < prob.same.size(); ++c) {
      const int i = prob.same[c];
      if (a.part == i) s[prob.cross.size() + c] += counts[k] * a.degree[i];
    }
  }
  for (std::size_t c = 0; c < prob.same.size(); ++c) {
    auto& v = s[prob.cross.size() + c];
    v = ((v % 2) + 2) % 2;
  }
  return s;
}

} // namespace

DegreeSequence realize_sequence(const DegreeSpec& spec, std::int64_t n, RoundingPolicy policy) {
  if (n < 1) throw Error("realize_sequence: n must be >= 1, got " + std::to_string(n));
  const auto atoms = spec.atoms();
  const std::size_t k_atoms = atoms.size();
  std::vector<std::int64_t> counts(k_atoms, 0);

  std::vector<Rounded> rounded;
  rounded.reserve(k_atoms);
  for (const auto& a : atoms) rounded.push_back(round_down(a, n));

  if (policy == RoundingPolicy::nearest) {
    for (std::size_t k = 0; k < k_atoms; ++k) {
      const bool up = atoms[k].mass.is_exact() ? rounded[k].exact_remainder * 2 >= 1
                                               : rounded[k].remainder >= 0.5;
      counts[k] = rounded[k].floor + (up ? 1 : 0);
    }
  } else {
    std::int64_t assigned = 0;
    for (std::size_t k = 0; k < k_atoms; ++k) {
      counts[k] = rounded[k].floor;
      assigned += counts[k];
    }
    // Order by remainder (exact when available), ties by atom order.
    std::vector<std::size_t> order(k_atoms);
    std::iota(order.begin(), order.end(), 0);
    std::stable_sort(order.begin(), order.end(), [&](std::size_t a, std::size_t b) {
      if (spec.is_exact()) return rounded[a].exact_remainder > rounded[b].exact_remainder;
      return rounded[a].remainder > rounded[b].remainder;
    });
    std::int64_t leftover = n - assigned;
    // Positive masses only receive leftover units.
    std::vector<std::size_t> eligible;
    for (auto k : order) {
      if (!atoms[k].mass.is_zero()) eligible.push_back(k);
    }
    if (!eligible.empty()) {
      for (std::size_t r = 0; leftover > 0; ++r, --leftover) ++counts[eligible[r % eligible.size()]];
      // Float masses summing slightly above 1: take units back from the
      // smallest remainders.
      for (std::size_t r = eligible.size(); leftover < 0;) {
        if (r == 0) r = eligible.size();
        const auto k = eligible[--r];
        if (counts[k] > 0) {
          --counts[k];
          ++leftover;
        }
      }
    }
  }

  RepairProblem prob;
  const int p = spec.parts();
  for (int i = 0; i < p; ++i) {
    bool has_same = false;
    for (const auto& a : atoms) has_same |= (a.part == i && a.degree[i] % 2 != 0);
    if (has_same) prob.same.push_back(i);
    for (int j = i + 1; j < p; ++j) {
      bool touches = false;
      for (const auto& a : atoms) touches |= (a.part == i && a.degree[j] > 0) || (a.part == j && a.degree[i] > 0);
      if (touches) prob.cross.push_back({i, j});
    }
  }

  const RepairState start = repair_state(prob, counts, atoms);
  const bool balanced = std::all_of(start.begin(), start.end(), [](std::int64_t v) { return v == 0; });

  if (!balanced) {
    // Breadth-first search over imbalance states; a move adds or removes one
    // vertex of a positive-mass atom. Highest-mass atoms are tried first so
    // the shortest repair found prefers them.
    constexpr int kMaxDepth = 64;
    constexpr std::size_t kMaxStates = 400000;

    struct Move {
      std::size_t atom;
      int sign;
      RepairState effect;
    };
    std::vector<std::size_t> by_mass(k_atoms);
    std::iota(by_mass.begin(), by_mass.end(), 0);
    std::stable_sort(by_mass.begin(), by_mass.end(), [&](std::size_t a, std::size_t b) {
      if (spec.is_exact()) return atoms[a].mass.rational() > atoms[b].mass.rational();
      return atoms[a].mass.value() > atoms[b].mass.value();
    });

    std::vector<Move> moves;
    int max_total = 1;
    for (auto k : by_mass) {
      if (atoms[k].mass.is_zero()) continue;
      max_total = std::max(max_total, atoms[k].degree.total());
      for (int sign : {+1, -1}) {
        if (sign < 0 && counts[k] < kMaxDepth) continue;
        std::vector<std::int64_t> unit(k_atoms, 0);
        unit[k] = 1;
        RepairState effect = repair_state(prob, unit, atoms);
        for (std::size_t c = 0; c < prob.cross.size(); ++c) effect[c] *= sign;
        if (std::all_of(effect.begin(), effect.end(), [](std::int64_t v) { return v == 0; })) continue;
        moves.push_back({k, sign, std::move(effect)});
      }
    }

    std::int64_t bound = 0;
    for (std::size_t c = 0; c < prob.cross.size(); ++c) bound = std::max(bound, std::abs(start[c]));
    bound += 4 * static_cast<std::int64_t>(max_total);

    struct Node {
      std::size_t parent;
      std::size_t move;
      int depth;
    };
    std::map<RepairState, std::size_t> seen;
    std::vector<Node> nodes;
    std::vector<RepairState> states;
    std::deque<std::size_t> frontier;
    seen.emplace(start, 0);
    nodes.push_back({0, 0, 0});
    states.push_back(start);
    frontier.push_back(0);
    std::optional<std::size_t> goal;

    while (!frontier.empty() && !goal) {
      const std::size_t cur = frontier.front();
      frontier.pop_front();
      if (nodes[cur].depth >= kMaxDepth) continue;
      for (std::size_t mi = 0; mi < moves.size(); ++mi) {
        RepairState next = states[cur];
        bool in_bounds = true;
        for (std::size_t c = 0; c < next.size(); ++c) {
          if (c < prob.cross.size()) {
            next[c] += moves[mi].effect[c];
            in_bounds &= std::abs(next[c]) <= bound;
          } else {
            next[c] = (next[c] + moves[mi].effect[c]) % 2;
          }
        }
        if (!in_bounds || seen.count(next)) continue;
        const std::size_t id = nodes.size();
        seen.emplace(next, id);
        nodes.push_back({cur, mi, nodes[cur].depth + 1});
        const bool done = std::all_of(next.begin(), next.end(), [](std::int64_t v) { return v == 0; });
        states.push_back(std::move(next));
        if (done) {
          goal = id;
          break;
        }
        frontier.push_back(id);
      }
      if (nodes.size() > kMaxStates) break;
    }

    if (!goal) {
      std::string msg = "cannot balance clone counts at n = " + std::to_string(n) + " with the given support";
      throw RepairInfeasible(msg);
    }
    for (std::size_t id = *goal; id != 0; id = nodes[id].parent) {
      const auto& mv = moves[nodes[id].move];
      counts[mv.atom] += mv.sign;
    }
  }

  std::vector<SequenceEntry> entries;
  entries.reserve(k_atoms);
  for (std::size_t k = 0; k < k_atoms; ++k) entries.push_back({atoms[k].part, atoms[k].degree, counts[k]});
  DegreeSequence seq(p, std::move(entries));
  seq.require_matchable();
  return seq;
}

DegreeSpec empirical_spec(const DegreeSequence& seq) {
  if (seq.n() == 0) throw Error("empirical_spec: empty sequence");
  std::vector<SpecAtom> atoms;
  for (const auto& e : seq.entries()) {
    if (e.count == 0) continue;
    atoms.push_back({e.part, e.degree, Mass::exact(Rational(e.count, seq.n()))});
  }
  return DegreeSpec(seq.parts(), std::move(atoms));
}

} // namespace multigiant
