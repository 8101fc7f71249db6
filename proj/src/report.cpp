#include "svi/report.hpp"

#include <cmath>
#include <sstream>

namespace svi {

using nlohmann::ordered_json;

namespace {

ordered_json number(double v) {
  // JSON has no inf/nan; keep them readable as strings.
  if (std::isfinite(v)) return v;
  return format_double(v);
}

void text_lines(const CheckReport& r, int depth, std::ostringstream& out) {
  out << std::string(static_cast<std::size_t>(2 * depth), ' ');
  out << (r.passed ? "PASS " : (r.informational ? "INFO " : "FAIL ")) << r.name << "  count=" << r.count;
  if (!r.margins.empty()) out << "  worst_margin=" << format_double(r.worst_margin);
  out << "  tolerance=" << format_double(r.tolerance);
  if (!r.witnesses.empty()) out << "  witnesses=" << r.witnesses.size();
  out << '\n';
  for (const auto& s : r.subreports) text_lines(s, depth + 1, out);
}

}  // namespace

ordered_json constants_document(const ProblemConstants& pc, const SamplingScheme& scheme,
                                std::optional<double> epsilon) {
  const GameConstants& gc = pc.game;
  ordered_json doc;
  doc["scheme"] = scheme.name();
  doc["n"] = gc.n();
  doc["mu"] = gc.mu;
  doc["ell"] = gc.ell;
  doc["ell_max"] = gc.ell_max;
  doc["ell_i"] = gc.ell_i;
  doc["sigma1_sq"] = gc.sigma1_sq;
  doc["ell_xi"] = pc.ec.ell_xi;
  doc["sigma_sq"] = pc.ec.sigma_sq;
  doc["kappa_G"] = gc.kappa_G ? ordered_json(*gc.kappa_G) : ordered_json(nullptr);
  doc["sgda_switch_point"] = sgda_switch_point(pc.ec.ell_xi, gc.mu);
  doc["mu_H"] = pc.hamiltonian_full.mu_H;
  doc["L_H"] = pc.hamiltonian_full.L_H;
  if (pc.hamiltonian) {
    doc["calL_H"] = pc.hamiltonian->calL_H;
    doc["sigma_H_sq"] = pc.hamiltonian->sigma_H_sq;
    doc["sco_k_star"] = sco_switch_threshold(pc.ec.ell_xi, pc.hamiltonian->calL_H, gc.mu, pc.hamiltonian->mu_H);
  } else {
    doc["calL_H"] = nullptr;
    doc["sigma_H_sq"] = nullptr;
    doc["sco_k_star"] = nullptr;
  }
  if (epsilon && gc.n() >= 2) {
    const OptimalMinibatch b = optimal_minibatch(gc, *epsilon);
    doc["epsilon"] = *epsilon;
    doc["b_star_real"] = b.b_star_real;
    doc["b_star"] = b.b_star;
  }
  return doc;
}

std::string key_value_text(const ordered_json& flat) {
  std::ostringstream out;
  for (const auto& [key, value] : flat.items()) {
    out << key << ": ";
    if (value.is_array()) {
      bool first = true;
      for (const auto& v : value) {
        out << (first ? "" : ",") << (v.is_number_float() ? format_double(v.get<double>()) : v.dump());
        first = false;
      }
    } else if (value.is_number_float()) {
      out << format_double(value.get<double>());
    } else if (value.is_string()) {
      out << value.get<std::string>();
    } else {
      out << value.dump();
    }
    out << '\n';
  }
  return out.str();
}

ordered_json report_json(const CheckReport& r) {
  ordered_json doc;
  doc["name"] = r.name;
  doc["passed"] = r.passed;
  doc["informational"] = r.informational;
  doc["count"] = r.count;
  doc["worst_margin"] = r.margins.empty() ? ordered_json(nullptr) : number(r.worst_margin);
  doc["tolerance"] = r.tolerance;
  ordered_json witnesses = ordered_json::array();
  for (std::size_t w = 0; w < r.witnesses.size() && w < 5; ++w) {
    ordered_json point = ordered_json::array();
    for (Eigen::Index k = 0; k < r.witnesses[w].size(); ++k) point.push_back(number(r.witnesses[w](k)));
    witnesses.push_back({{"margin", number(r.margins[r.witness_indices[w]])}, {"point", std::move(point)}});
  }
  doc["witnesses"] = std::move(witnesses);
  ordered_json subs = ordered_json::array();
  for (const auto& s : r.subreports) subs.push_back(report_json(s));
  doc["subreports"] = std::move(subs);
  return doc;
}

std::string report_text(const CheckReport& report) {
  std::ostringstream out;
  text_lines(report, 0, out);
  return out.str();
}

}  // namespace svi
