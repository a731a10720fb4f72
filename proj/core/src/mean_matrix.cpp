#include "multigiant/mean_matrix.hpp"

#include <algorithm>
#include <cmath>
#include <functional>
#include <limits>
#include <numeric>

#include "multigiant/errors.hpp"

namespace multigiant {

std::optional<std::size_t> MeanMatrix::position(PartPair pair) const {
  auto it = std::lower_bound(index.begin(), index.end(), pair);
  if (it == index.end() || *it != pair) {
    // from_rows may carry an unsorted index
    it = std::find(index.begin(), index.end(), pair);
    if (it == index.end()) return std::nullopt;
  }
  return static_cast<std::size_t>(it - index.begin());
}

MeanMatrix MeanMatrix::from_rows(const std::vector<std::vector<double>>& rows, std::vector<PartPair> index) {
  const std::size_t n = rows.size();
  MeanMatrix m;
  m.entries = Matrix(n, n);
  for (std::size_t r = 0; r < n; ++r) {
    if (rows[r].size() != n) throw Error("MeanMatrix::from_rows: matrix is not square");
    for (std::size_t c = 0; c < n; ++c) {
      if (!(rows[r][c] >= 0.0) || !std::isfinite(rows[r][c])) {
        throw Error("MeanMatrix::from_rows: entries must be finite and non-negative");
      }
      m.entries(r, c) = rows[r][c];
    }
  }
  if (index.empty()) {
    for (std::size_t k = 0; k < n; ++k) index.push_back({0, static_cast<int>(k)});
  }
  if (index.size() != n) throw Error("MeanMatrix::from_rows: index size mismatch");
  m.index = std::move(index);
  return m;
}

namespace {

template <class T>
BasicMatrix<T> mean_entries(const DegreeSpec& spec, const BasicMatrix<T>& lambda, auto&& mass_of) {
  const auto& index = spec.pairs();
  const std::size_t n = index.size();
  BasicMatrix<T> out(n, n, T(0));
  for (std::size_t r = 0; r < n; ++r) {
    const auto [i, j] = index[r];
    for (std::size_t c = 0; c < n; ++c) {
      if (index[c].from != j) continue;
      const int m = index[c].to;
      T sum(0);
      for (const auto& a : spec.atoms()) {
        if (a.part != j || a.degree[i] == 0) continue;
        const int children = a.degree[m] - (m == i ? 1 : 0);
        if (children == 0) continue;
        sum += T(children) * T(a.degree[i]) * mass_of(a.mass);
      }
      out(r, c) = sum / lambda(i, j);
    }
  }
  return out;
}

} // namespace

MeanMatrix build_mean_matrix(const DegreeSpec& spec) {
  MeanMatrix m;
  m.index = spec.pairs();
  m.exact = spec.is_exact();
  const std::size_t n = m.index.size();
  if (spec.is_exact()) {
    auto exact = mean_entries<Rational>(spec, *spec.exact_lambda(), [](const Mass& x) { return x.rational(); });
    m.entries = Matrix(n, n);
    for (std::size_t r = 0; r < n; ++r) {
      for (std::size_t c = 0; c < n; ++c) m.entries(r, c) = static_cast<double>(exact(r, c));
    }
  } else {
    m.entries = mean_entries<double>(spec, spec.lambda(), [](const Mass& x) { return x.value(); });
  }
  return m;
}

Irreducibility check_irreducible(const MeanMatrix& m) {
  const std::size_t n = m.size();
  Irreducibility result;

  // Tarjan's algorithm; n <= p^2 so recursion depth is small.
  std::vector<int> order(n, -1), low(n, 0);
  std::vector<bool> on_stack(n, false);
  std::vector<std::size_t> stack;
  int counter = 0;
  std::function<void(std::size_t)> visit = [&](std::size_t u) {
    order[u] = low[u] = counter++;
    stack.push_back(u);
    on_stack[u] = true;
    for (std::size_t v = 0; v < n; ++v) {
      if (!(m(u, v) > 0.0)) continue;
      if (order[v] < 0) {
        visit(v);
        low[u] = std::min(low[u], low[v]);
      } else if (on_stack[v]) {
        low[u] = std::min(low[u], order[v]);
      }
    }
    if (low[u] == order[u]) {
      std::vector<std::size_t> comp;
      std::size_t w;
      do {
        w = stack.back();
        stack.pop_back();
        on_stack[w] = false;
        comp.push_back(w);
      } while (w != u);
      std::sort(comp.begin(), comp.end());
      result.components.push_back(std::move(comp));
    }
  };
  for (std::size_t u = 0; u < n; ++u) {
    if (order[u] < 0) visit(u);
  }
  std::sort(result.components.begin(), result.components.end());

  if (n == 1) {
    result.irreducible = m(0, 0) > 0.0;
  } else {
    result.irreducible = n > 0 && result.components.size() == 1;
  }
  return result;
}

std::string_view to_string(Regime r) {
  switch (r) {
    case Regime::subcritical: return "subcritical";
    case Regime::critical: return "critical";
    case Regime::supercritical: return "supercritical";
  }
  return "unknown";
}

Regime classify(double gamma, double band) {
  if (gamma > 1.0 + band) return Regime::supercritical;
  if (gamma < 1.0 - band) return Regime::subcritical;
  return Regime::critical;
}

SpectralResult perron_eigenpair(const MeanMatrix& m, const SpectralOptions& options) {
  const auto irr = check_irreducible(m);
  if (!irr.irreducible) {
    std::string msg = "mean matrix is not irreducible; strongly connected components:";
    for (const auto& comp : irr.components) {
      msg += " {";
      for (std::size_t k = 0; k < comp.size(); ++k) {
        if (k) msg += ",";
        msg += m.index[comp[k]].to_string();
      }
      msg += "}";
    }
    throw NotIrreducible(msg);
  }

  const std::size_t n = m.size();
  std::vector<double> z(n, 1.0 / static_cast<double>(n));
  if (!options.start.empty()) {
    if (options.start.size() != n) throw Error("perron_eigenpair: start vector has wrong length");
    const double s = std::accumulate(options.start.begin(), options.start.end(), 0.0);
    if (!(s > 0.0) || std::any_of(options.start.begin(), options.start.end(), [](double x) { return x < 0.0; })) {
      throw Error("perron_eigenpair: start vector must be non-negative with positive sum");
    }
    for (std::size_t k = 0; k < n; ++k) z[k] = options.start[k] / s;
  }

  std::vector<double> mz(n), y(n);
  auto apply_transpose = [&](const std::vector<double>& v, std::vector<double>& out) {
    for (std::size_t u = 0; u < n; ++u) {
      double acc = 0.0;
      for (std::size_t w = 0; w < n; ++w) acc += m(w, u) * v[w];
      out[u] = acc;
    }
  };
  auto rayleigh = [&](const std::vector<double>& v, const std::vector<double>& mv) {
    double num = 0.0, den = 0.0;
    for (std::size_t u = 0; u < n; ++u) {
      num += v[u] * mv[u];
      den += v[u] * v[u];
    }
    return num / den;
  };

  SpectralResult result;
  result.irreducible = true;
  double previous = std::numeric_limits<double>::infinity();
  for (int it = 1; it <= options.max_iter; ++it) {
    // y = (M' + I) z / 2, then renormalise to unit sum.
    apply_transpose(z, mz);
    double sum = 0.0;
    for (std::size_t u = 0; u < n; ++u) {
      y[u] = 0.5 * (z[u] + mz[u]);
      sum += y[u];
    }
    for (std::size_t u = 0; u < n; ++u) z[u] = y[u] / sum;

    apply_transpose(z, mz);
    const double gamma = rayleigh(z, mz);
    double residual = 0.0;
    for (std::size_t u = 0; u < n; ++u) residual = std::max(residual, std::abs(mz[u] - gamma * z[u]));

    const double scale = std::max(1.0, gamma);
    if (std::abs(gamma - previous) <= options.tol * scale && residual <= options.tol * scale) {
      result.gamma = gamma;
      result.left_vector = z;
      result.residual = residual;
      result.iterations = it;
      const double band = options.band.value_or(m.exact ? 1e-9 : 1e-6);
      result.regime = classify(gamma, band);
      return result;
    }
    previous = gamma;
  }
  throw NoConvergence("perron_eigenpair: no convergence after " + std::to_string(options.max_iter) +
                      " iterations");
}

namespace {

void require_bipartite_form(const DegreeSpec& spec) {
  if (spec.parts() != 2) throw NotBipartite("bipartite criterion needs exactly 2 parts");
  for (const auto& a : spec.atoms()) {
    if (a.degree[a.part] != 0) {
      throw NotBipartite("atom in part " + std::to_string(a.part + 1) + " with degree " + a.degree.to_string() +
                         " has same-part neighbours");
    }
  }
}

template <class T>
T newman_sum(const DegreeSpec& spec, auto&& mass_of) {
  T sum(0);
  for (const auto& a : spec.atoms()) {
    if (a.part != 0) continue;
    const long long j = a.degree[1];
    for (const auto& b : spec.atoms()) {
      if (b.part != 1) continue;
      const long long k = b.degree[0];
      const long long w = j * k * (j * k - j - k);
      if (w != 0) sum += T(w) * mass_of(a.mass) * mass_of(b.mass);
    }
  }
  return sum;
}

} // namespace

Rational bipartite_criterion_exact(const DegreeSpec& spec) {
  require_bipartite_form(spec);
  if (!spec.is_exact()) throw Error("bipartite_criterion_exact: spec has float masses");
  return newman_sum<Rational>(spec, [](const Mass& x) { return x.rational(); });
}

double bipartite_criterion(const DegreeSpec& spec) {
  require_bipartite_form(spec);
  if (spec.is_exact()) return static_cast<double>(bipartite_criterion_exact(spec));
  return newman_sum<double>(spec, [](const Mass& x) { return x.value(); });
}

} // namespace multigiant
