#include "dirac/json_io.hpp"

#include <cstdio>

namespace dirac {

Json complex_json(const Cx& z) { return Json::array({z.real(), z.imag()}); }

namespace {

Json matrix_json(const Eigen::MatrixXcd& m) {
  Json rows = Json::array();
  for (Eigen::Index i = 0; i < m.rows(); ++i) {
    Json row = Json::array();
    for (Eigen::Index j = 0; j < m.cols(); ++j)
      row.push_back(complex_json(m(i, j)));
    rows.push_back(std::move(row));
  }
  return rows;
}

}  // namespace

Json to_json(const IndexSet& set) {
  Json j;
  j["d"] = set.d;
  Json entries = Json::array();
  for (const Channel& c : set.entries) {
    entries.push_back(
        Json{{"twice_j", c.twice_j}, {"twice_mj", c.twice_mj}, {"k", c.k}});
  }
  j["entries"] = std::move(entries);
  return j;
}

Json to_json(const ChannelClassification& c) {
  Json j;
  j["k"] = c.k;
  j["delta"] = c.delta;
  j["gamma"] = c.gamma;
  j["regime"] = regime_name(c.regime);
  if (c.near_boundary) j["near_boundary"] = true;
  return j;
}

Json to_json(const ConnectionMatrix& cm) {
  Json j;
  j["k"] = cm.k;
  j["regime"] = regime_name(cm.regime);
  Json rows = Json::array();
  for (int i = 0; i < 2; ++i) {
    Json row = Json::array();
    for (int c = 0; c < 2; ++c) row.push_back(complex_json(cm.entries(i, c)));
    rows.push_back(std::move(row));
  }
  j["entries"] = std::move(rows);
  return j;
}

Json to_json(const BoundaryData& bd) {
  Json j;
  j["k"] = bd.k;
  j["gamma_plus"] = complex_json(bd.gamma_plus);
  j["gamma_minus"] = complex_json(bd.gamma_minus);
  j["coeffs"] = Json::array({complex_json(bd.coeffs[0]),
                             complex_json(bd.coeffs[1])});
  j["fit_residual"] = bd.fit_residual;
  return j;
}

Json to_json(const ExtensionRelation& rel) {
  Json j;
  j["d"] = rel.d;
  j["A"] = matrix_json(rel.a_matrix);
  j["B"] = matrix_json(rel.b_matrix);
  j["channels"] = to_json(rel.channel_order);
  return j;
}

Json to_json(const UnitaryParametrization& up) {
  Json j;
  j["d"] = up.d;
  j["U"] = matrix_json(up.u_matrix);
  j["channels"] = to_json(up.channel_order);
  return j;
}

Json to_json(const EigenvalueResult& res) {
  Json j;
  j["k"] = res.k;
  j["relation_row"] = Json::array(
      {complex_json(res.relation_row.a), complex_json(res.relation_row.b)});
  j["eigenvalues"] = res.eigenvalues;
  j["match_defects"] = res.match_defects;
  j["energy_error_estimates"] = res.energy_error_estimates;
  Json checks = Json::array();
  for (const BoundaryData& bd : res.boundary_checks)
    checks.push_back(to_json(bd));
  j["boundary_checks"] = std::move(checks);
  return j;
}

Json to_json(const CorpusReport& rep) {
  Json j;
  j["base_seed"] = rep.base_seed;
  j["trials"] = rep.trials;
  j["ks"] = rep.ks;
  j["r_ref"] = rep.r_ref;
  Json draws = Json::array();
  for (const DrawRecord& r : rep.records) {
    draws.push_back(Json{{"test", r.test},
                         {"k", r.k},
                         {"seed", r.seed},
                         {"lhs", r.lhs},
                         {"rhs", r.rhs},
                         {"margin", r.margin},
                         {"margin_rel", r.margin_rel},
                         {"err", r.err},
                         {"ok", r.ok}});
  }
  j["draws"] = std::move(draws);
  j["sharpness_ratios"] = rep.sharpness_ratios;
  j["aggregate"] = Json{{"min_margin_rel", rep.min_margin_rel},
                        {"sharpness_decreasing", rep.sharpness_decreasing},
                        {"all_ok", rep.all_ok}};
  return j;
}

namespace {

void dump_rec(const Json& j, std::string& out, int indent, int depth) {
  const std::string pad(static_cast<std::size_t>(indent) * depth, ' ');
  const std::string pad1(static_cast<std::size_t>(indent) * (depth + 1), ' ');
  switch (j.type()) {
    case Json::value_t::object: {
      if (j.empty()) {
        out += "{}";
        return;
      }
      out += "{\n";
      std::size_t i = 0;
      for (auto it = j.begin(); it != j.end(); ++it, ++i) {
        out += pad1;
        out += Json(it.key()).dump();
        out += ": ";
        dump_rec(it.value(), out, indent, depth + 1);
        if (i + 1 < j.size()) out += ",";
        out += "\n";
      }
      out += pad + "}";
      return;
    }
    case Json::value_t::array: {
      if (j.empty()) {
        out += "[]";
        return;
      }
      out += "[\n";
      for (std::size_t i = 0; i < j.size(); ++i) {
        out += pad1;
        dump_rec(j[i], out, indent, depth + 1);
        if (i + 1 < j.size()) out += ",";
        out += "\n";
      }
      out += pad + "]";
      return;
    }
    case Json::value_t::number_float: {
      char buf[64];
      const double v = j.get<double>();
      std::snprintf(buf, sizeof(buf), "%.17g", v);
      out += buf;
      return;
    }
    default:
      out += j.dump();
      return;
  }
}

}  // namespace

std::string dump_json17(const Json& j, int indent) {
  std::string out;
  dump_rec(j, out, indent, 0);
  out += "\n";
  return out;
}

}  // namespace dirac
