#include <json.hpp>

#include "multigiant/experiments.hpp"

namespace multigiant {

namespace {

using nlohmann::ordered_json;

ordered_json matrix_json(const Matrix& m) {
  ordered_json rows = ordered_json::array();
  for (std::size_t r = 0; r < m.rows(); ++r) {
    ordered_json row = ordered_json::array();
    for (std::size_t c = 0; c < m.cols(); ++c) row.push_back(m(r, c));
    rows.push_back(std::move(row));
  }
  return rows;
}

ordered_json pairs_json(const std::vector<PartPair>& pairs) {
  ordered_json out = ordered_json::array();
  for (const auto& p : pairs) out.push_back(p.to_string());
  return out;
}

} // namespace

std::string verdict_json(const VerdictReport& report) {
  ordered_json j;
  j["spec"] = report.spec_label;
  j["seed"] = report.seed;
  j["simple"] = report.simple;
  j["verdict"] = std::string(to_string(report.verdict));
  j["validation"] = {{"errors", report.validation.errors},
                     {"lints", report.validation.lints},
                     {"pairs", pairs_json(report.validation.pairs)}};
  if (report.matrix.size() > 0) {
    j["mean_matrix"] = {{"index", pairs_json(report.matrix.index)},
                        {"entries", matrix_json(report.matrix.entries)},
                        {"exact", report.matrix.exact}};
    j["irreducible"] = report.irreducibility.irreducible;
    ordered_json sccs = ordered_json::array();
    for (const auto& comp : report.irreducibility.components) {
      ordered_json c = ordered_json::array();
      for (auto k : comp) c.push_back(report.matrix.index[k].to_string());
      sccs.push_back(std::move(c));
    }
    j["sccs"] = std::move(sccs);
  }
  if (report.spectral) {
    j["gamma"] = report.spectral->gamma;
    j["regime"] = std::string(to_string(report.spectral->regime));
    j["left_vector"] = report.spectral->left_vector;
    j["spectral_residual"] = report.spectral->residual;
  }
  if (report.survival) {
    j["eta"] = report.survival->eta;
    j["extinction"] = report.survival->q;
  }
  if (report.newman_sum) j["newman_sum"] = *report.newman_sum;
  ordered_json sizes = ordered_json::array();
  for (const auto& s : report.sizes) {
    sizes.push_back({{"n", s.n},
                     {"trials", s.trials},
                     {"omega", s.omega},
                     {"mean_fraction", s.mean_fraction},
                     {"sd_fraction", s.sd_fraction},
                     {"band", s.band},
                     {"mean_second", s.mean_second},
                     {"max_second", s.max_second},
                     {"second_log_ratio", s.second_log_ratio},
                     {"min_part_share", s.min_part_share},
                     {"largest_scaled", s.largest_scaled},
                     {"mean_attempts", s.mean_attempts}});
  }
  j["sizes"] = std::move(sizes);
  ordered_json checks = ordered_json::array();
  for (const auto& c : report.checks) checks.push_back({{"name", c.name}, {"pass", c.pass}, {"detail", c.detail}});
  j["checks"] = std::move(checks);
  j["notes"] = report.notes;
  return j.dump(2) + "\n";
}

} // namespace multigiant
