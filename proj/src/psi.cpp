#include "sclab/psi.hpp"

#include <algorithm>
#include <cmath>
#include <fstream>
#include <map>
#include <sstream>
#include <stdexcept>

namespace sclab {

PsiSpec make_exp_psi(double scale) {
  if (!(scale > 0.0)) throw std::invalid_argument("make_exp_psi: scale must be > 0");
  PsiSpec psi;
  psi.name = "exp";
  psi.value = [scale](double x) { return std::exp(scale * x); };
  psi.deriv_at_zero = scale;
  psi.local_bound = [scale](double, double hi) { return std::exp(scale * hi); };
  psi.exact_integrable = true;
  return psi;
}

PsiSpec make_logistic_psi(double scale) {
  if (!(scale > 0.0)) throw std::invalid_argument("make_logistic_psi: scale must be > 0");
  PsiSpec psi;
  psi.name = "logistic";
  psi.value = [scale](double x) { return 2.0 / (1.0 + std::exp(-2.0 * scale * x)); };
  psi.deriv_at_zero = scale;
  psi.local_bound = [psi_val = psi.value](double, double hi) { return psi_val(hi); };
  psi.exact_integrable = false;
  return psi;
}

PsiSpec make_linear_psi(double slope, double floor_value) {
  if (!(slope > 0.0)) throw std::invalid_argument("make_linear_psi: slope must be > 0");
  if (!(floor_value > 0.0 && floor_value < 1.0))
    throw std::invalid_argument("make_linear_psi: floor must be in (0,1)");
  PsiSpec psi;
  psi.name = "linear";
  psi.value = [slope, floor_value](double x) { return std::max(1.0 + slope * x, floor_value); };
  psi.deriv_at_zero = slope;
  psi.local_bound = [psi_val = psi.value](double, double hi) { return psi_val(hi); };
  psi.exact_integrable = false;
  return psi;
}

PsiSpec psi_without_closed_form(PsiSpec psi) {
  psi.exact_integrable = false;
  return psi;
}

namespace {

std::map<std::string, std::string> parse_key_values(std::istream& in) {
  std::map<std::string, std::string> kv;
  std::string line;
  while (std::getline(in, line)) {
    const auto hash = line.find('#');
    if (hash != std::string::npos) line.erase(hash);
    const auto eq = line.find('=');
    if (eq == std::string::npos) continue;
    auto trim = [](std::string s) {
      const auto b = s.find_first_not_of(" \t\r");
      const auto e = s.find_last_not_of(" \t\r");
      return b == std::string::npos ? std::string{} : s.substr(b, e - b + 1);
    };
    kv[trim(line.substr(0, eq))] = trim(line.substr(eq + 1));
  }
  return kv;
}

}  // namespace

PsiSpec psi_from_file(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw std::invalid_argument("psi_from_file: cannot open " + path);
  const auto kv = parse_key_values(in);
  const auto get = [&kv](const std::string& key, const std::string& fallback) {
    auto it = kv.find(key);
    return it == kv.end() ? fallback : it->second;
  };
  const std::string form = get("form", "exp");
  const double scale = std::stod(get("scale", "1.0"));
  PsiSpec psi;
  if (form == "exp") {
    psi = make_exp_psi(scale);
  } else if (form == "logistic") {
    psi = make_logistic_psi(scale);
  } else if (form == "linear") {
    psi = make_linear_psi(scale, std::stod(get("floor", "1e-3")));
  } else {
    throw std::invalid_argument("psi_from_file: unknown form '" + form + "'");
  }
  if (get("exact", "auto") == "false") psi = psi_without_closed_form(psi);
  return psi;
}

PsiSpec psi_from_selector(const std::string& selector) {
  if (selector == "exp") return make_exp_psi();
  return psi_from_file(selector);
}

}  // namespace sclab
