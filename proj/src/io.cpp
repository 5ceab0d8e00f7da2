#include "modwave/io.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <fstream>
#include <map>
#include <sstream>

namespace modwave {

json complex_to_json(cplx z) { return json{{"re", z.real()}, {"im", z.imag()}}; }

cplx complex_from_json(const json& j, const std::string& field) {
  if (j.is_object() && j.contains("re") && j.contains("im") && j["re"].is_number() && j["im"].is_number())
    return {j["re"].get<double>(), j["im"].get<double>()};
  if (j.is_array() && j.size() == 2 && j[0].is_number() && j[1].is_number())
    return {j[0].get<double>(), j[1].get<double>()};
  throw FormatError(field + ": expected a complex value {\"re\", \"im\"}");
}

std::string format_double(double v) {
  char buf[64];
  std::snprintf(buf, sizeof buf, "%.17g", v);
  return buf;
}

namespace {

std::ifstream open_in(const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in) throw FormatError(path.string() + ": cannot open for reading");
  return in;
}

std::ofstream open_out(const std::filesystem::path& path) {
  std::ofstream out(path, std::ios::binary | std::ios::trunc);
  if (!out) throw FormatError(path.string() + ": cannot open for writing");
  return out;
}

std::vector<std::string> split_csv(const std::string& line) {
  std::vector<std::string> out;
  std::stringstream ss(line);
  std::string cell;
  while (std::getline(ss, cell, ',')) out.push_back(cell);
  return out;
}

double parse_number(const std::string& s, const std::string& where) {
  try {
    std::size_t used = 0;
    const double v = std::stod(s, &used);
    if (used != s.size() && s.find_first_not_of(" \r\t", used) != std::string::npos) throw std::invalid_argument(s);
    return v;
  } catch (const std::exception&) {
    throw FormatError(where + ": bad number '" + s + "'");
  }
}

long parse_int(const std::string& s, const std::string& where) {
  const double v = parse_number(s, where);
  if (std::floor(v) != v) throw FormatError(where + ": expected an integer, got '" + s + "'");
  return static_cast<long>(v);
}

// Rows of a CSV file after the header, split into cells; checks the header text.
std::vector<std::vector<std::string>> read_csv(const std::filesystem::path& path, const std::string& header) {
  auto in = open_in(path);
  std::string line;
  if (!std::getline(in, line)) throw FormatError(path.string() + ": empty file");
  if (!line.empty() && line.back() == '\r') line.pop_back();
  if (line != header) throw FormatError(path.string() + ": expected header '" + header + "'");
  std::vector<std::vector<std::string>> rows;
  while (std::getline(in, line)) {
    if (!line.empty() && line.back() == '\r') line.pop_back();
    if (line.empty()) continue;
    rows.push_back(split_csv(line));
  }
  return rows;
}

template <class T>
T get_field(const json& j, const std::string& key) {
  if (!j.contains(key)) throw FormatError(key + ": missing field");
  try {
    return j.at(key).get<T>();
  } catch (const json::exception&) {
    throw FormatError(key + ": wrong type");
  }
}

}  // namespace

void write_signal_csv(const std::filesystem::path& path, const CVec& x) {
  const int n = static_cast<int>(x.size());
  if (n < 5 || (n - 1) % 4 != 0) throw DimensionError("write_signal_csv: length must be 4M+1");
  const int M = (n - 1) / 4;
  auto out = open_out(path);
  out << "m,re,im\n";
  for (int i = 0; i < n; ++i)
    out << sample_of(i, M) << ',' << format_double(x[i].real()) << ',' << format_double(x[i].imag()) << '\n';
}

CVec read_signal_csv(const std::filesystem::path& path) {
  const auto rows = read_csv(path, "m,re,im");
  const int n = static_cast<int>(rows.size());
  if (n < 5 || (n - 1) % 4 != 0) throw FormatError(path.string() + ": row count must be 4M+1");
  const int M = (n - 1) / 4;
  CVec x(n);
  for (int i = 0; i < n; ++i) {
    const std::string where = path.string() + ":" + std::to_string(i + 2);
    if (rows[static_cast<std::size_t>(i)].size() != 3) throw FormatError(where + ": expected 3 columns");
    if (parse_int(rows[static_cast<std::size_t>(i)][0], where) != sample_of(i, M))
      throw FormatError(where + ": sample index out of order");
    x[i] = {parse_number(rows[static_cast<std::size_t>(i)][1], where), parse_number(rows[static_cast<std::size_t>(i)][2], where)};
  }
  return x;
}

void write_subspace_csv(const std::filesystem::path& path, const Subspace& subspace) {
  auto out = open_out(path);
  out << "m,k,re,im\n";
  const int M = subspace.M();
  for (int i = 0; i < subspace.n_samples(); ++i)
    for (int k = 0; k < subspace.dim(); ++k) {
      const cplx v = subspace.rows()(k, i);
      out << sample_of(i, M) << ',' << k << ',' << format_double(v.real()) << ',' << format_double(v.imag()) << '\n';
    }
}

Subspace read_subspace_csv(const std::filesystem::path& path) {
  const auto rows = read_csv(path, "m,k,re,im");
  std::map<std::pair<long, long>, cplx> entries;
  long mmin = 0, mmax = 0, kmax = -1;
  std::size_t line = 1;
  for (const auto& r : rows) {
    const std::string where = path.string() + ":" + std::to_string(++line);
    if (r.size() != 4) throw FormatError(where + ": expected 4 columns");
    const long m = parse_int(r[0], where), k = parse_int(r[1], where);
    if (k < 0) throw FormatError(where + ": negative k");
    if (!entries.emplace(std::make_pair(m, k), cplx(parse_number(r[2], where), parse_number(r[3], where))).second)
      throw FormatError(where + ": duplicate entry");
    mmin = std::min(mmin, m);
    mmax = std::max(mmax, m);
    kmax = std::max(kmax, k);
  }
  if (entries.empty()) throw FormatError(path.string() + ": no entries");
  if (mmin != -mmax || mmax % 2 != 0 || mmax < 2) throw FormatError(path.string() + ": m must run over -2M..2M");
  const long K = kmax + 1, n = 2 * mmax + 1;
  if (static_cast<long>(entries.size()) != K * n) throw FormatError(path.string() + ": incomplete subspace table");
  CMat B(K, n);
  for (const auto& [key, v] : entries) B(key.second, key.first + mmax) = v;
  try {
    return Subspace(std::move(B));
  } catch (const std::exception& e) {
    throw FormatError(path.string() + ": " + e.what());
  }
}

json truth_to_json(const GroundTruth& truth, int M, int K, std::uint64_t seed) {
  json h = json::array();
  for (const auto& v : truth.waveform_coeffs) {
    json col = json::array();
    for (Eigen::Index k = 0; k < v.size(); ++k) col.push_back(complex_to_json(v[k]));
    h.push_back(col);
  }
  return json{{"M", M}, {"K", K}, {"J", truth.size()}, {"freqs", truth.freqs}, {"amps", truth.amps}, {"h", h}, {"seed", seed}};
}

GroundTruth truth_from_json(const json& j, int* M, int* K) {
  if (!j.is_object()) throw FormatError("truth: expected a JSON object");
  GroundTruth t;
  const int m = get_field<int>(j, "M");
  const int k = get_field<int>(j, "K");
  t.freqs = get_field<std::vector<double>>(j, "freqs");
  t.amps = get_field<std::vector<double>>(j, "amps");
  if (!j.contains("h") || !j["h"].is_array()) throw FormatError("h: missing field");
  for (const auto& col : j["h"]) {
    if (!col.is_array()) throw FormatError("h: expected arrays of complex values");
    CVec v(static_cast<Eigen::Index>(col.size()));
    for (std::size_t i = 0; i < col.size(); ++i) v[static_cast<Eigen::Index>(i)] = complex_from_json(col[i], "h");
    t.waveform_coeffs.push_back(v);
  }
  try {
    t.validate(k);
  } catch (const std::exception& e) {
    throw FormatError(std::string("truth: ") + e.what());
  }
  if (M) *M = m;
  if (K) *K = k;
  return t;
}

json solution_to_json(const SdpSolution& sol) {
  json x = json::array();
  for (Eigen::Index i = 0; i < sol.x_hat.size(); ++i) x.push_back(complex_to_json(sol.x_hat[i]));
  return json{{"objective", sol.objective},
              {"atomic_norm_surrogate", sol.atomic_norm_surrogate},
              {"iterations", sol.iterations},
              {"primal_residual", sol.primal_residual},
              {"dual_residual", sol.dual_residual},
              {"feasibility_shift", sol.feasibility_shift},
              {"converged", sol.converged},
              {"lambda", sol.lambda},
              {"x_hat", x}};
}

SdpSolution solution_from_json(const json& j) {
  if (!j.is_object()) throw FormatError("solution: expected a JSON object");
  SdpSolution s;
  s.lambda = get_field<double>(j, "lambda");
  if (!j.contains("x_hat") || !j["x_hat"].is_array()) throw FormatError("x_hat: missing field");
  const auto& x = j["x_hat"];
  s.x_hat.resize(static_cast<Eigen::Index>(x.size()));
  for (std::size_t i = 0; i < x.size(); ++i) s.x_hat[static_cast<Eigen::Index>(i)] = complex_from_json(x[i], "x_hat");
  s.objective = j.value("objective", 0.0);
  s.atomic_norm_surrogate = j.value("atomic_norm_surrogate", 0.0);
  s.iterations = j.value("iterations", 0);
  s.primal_residual = j.value("primal_residual", 0.0);
  s.dual_residual = j.value("dual_residual", 0.0);
  s.feasibility_shift = j.value("feasibility_shift", 0.0);
  s.converged = j.value("converged", false);
  return s;
}

json certificate_report_to_json(const CertificateReport& rep) {
  json support = json::array();
  for (const auto& s : rep.support)
    support.push_back({{"tau", s.tau}, {"defect", s.defect}, {"derivative_norm", s.derivative_norm}});
  json near = json::array();
  for (bool b : rep.near_ok) near.push_back(b);
  return json{{"support", support},
              {"far_max", rep.far_max},
              {"far_argmax", rep.far_argmax},
              {"near_ok", near},
              {"near_exponent", rep.near_exponent},
              {"condition_number", rep.condition_number}};
}

json sweep_config_to_json(const SweepConfig& c) {
  json j{{"variable", to_string(c.variable)},
         {"values", c.values},
         {"M", c.M},
         {"J", c.J},
         {"K", c.K},
         {"sigma", c.sigma},
         {"eta", c.eta},
         {"trials", c.trials},
         {"base_seed", c.base_seed},
         {"freqs_mode", to_string(c.freqs_mode)},
         {"freqs", c.freqs},
         {"amps", c.amps},
         {"localize", c.localize},
         {"localize_threshold", c.localize_threshold},
         {"admm",
          {{"rho", c.admm.rho},
           {"max_iters", c.admm.max_iters},
           {"eps_abs", c.admm.eps_abs},
           {"eps_rel", c.admm.eps_rel},
           {"adaptive_rho", c.admm.adaptive_rho},
           {"relaxation", c.admm.relaxation},
           {"balance", c.admm.balance}}}};
  j["lambda"] = c.lambda ? json(*c.lambda) : json(nullptr);
  j["lambda_scale"] = c.lambda_scale ? json(*c.lambda_scale) : json(nullptr);
  return j;
}

SweepConfig sweep_config_from_json(const json& j) {
  if (!j.is_object()) throw FormatError("config: expected a JSON object");
  static const char* known[] = {"variable", "values", "M", "J", "K", "sigma", "eta", "trials", "base_seed", "freqs_mode",
                                "freqs", "amps", "localize", "localize_threshold", "admm", "lambda", "lambda_scale"};
  for (const auto& [key, _] : j.items()) {
    if (std::find(std::begin(known), std::end(known), key) == std::end(known)) throw FormatError(key + ": unknown field");
  }
  SweepConfig c;
  try {
    c.variable = parse_sweep_variable(get_field<std::string>(j, "variable"));
    if (j.contains("freqs_mode")) c.freqs_mode = parse_freqs_mode(get_field<std::string>(j, "freqs_mode"));
  } catch (const DomainError& e) {
    throw FormatError(e.what());
  }
  c.values = get_field<std::vector<double>>(j, "values");
  if (j.contains("M")) c.M = get_field<int>(j, "M");
  if (j.contains("J")) c.J = get_field<int>(j, "J");
  if (j.contains("K")) c.K = get_field<int>(j, "K");
  if (j.contains("sigma")) c.sigma = get_field<double>(j, "sigma");
  if (j.contains("eta")) c.eta = get_field<double>(j, "eta");
  if (j.contains("trials")) c.trials = get_field<int>(j, "trials");
  if (j.contains("base_seed")) c.base_seed = get_field<std::uint64_t>(j, "base_seed");
  if (j.contains("freqs")) c.freqs = get_field<std::vector<double>>(j, "freqs");
  if (j.contains("amps")) c.amps = get_field<std::vector<double>>(j, "amps");
  if (j.contains("localize")) c.localize = get_field<bool>(j, "localize");
  if (j.contains("localize_threshold")) c.localize_threshold = get_field<double>(j, "localize_threshold");
  if (j.contains("lambda") && !j["lambda"].is_null()) c.lambda = get_field<double>(j, "lambda");
  if (j.contains("lambda_scale") && !j["lambda_scale"].is_null()) c.lambda_scale = get_field<double>(j, "lambda_scale");
  if (j.contains("admm")) {
    const json& a = j["admm"];
    if (!a.is_object()) throw FormatError("admm: expected an object");
    static const char* admm_known[] = {"rho", "max_iters", "eps_abs", "eps_rel", "adaptive_rho", "relaxation", "balance"};
    for (const auto& [key, _] : a.items()) {
      if (std::find(std::begin(admm_known), std::end(admm_known), key) == std::end(admm_known))
        throw FormatError("admm." + key + ": unknown field");
    }
    if (a.contains("rho")) c.admm.rho = get_field<double>(a, "rho");
    if (a.contains("max_iters")) c.admm.max_iters = get_field<int>(a, "max_iters");
    if (a.contains("eps_abs")) c.admm.eps_abs = get_field<double>(a, "eps_abs");
    if (a.contains("eps_rel")) c.admm.eps_rel = get_field<double>(a, "eps_rel");
    if (a.contains("adaptive_rho")) c.admm.adaptive_rho = get_field<bool>(a, "adaptive_rho");
    if (a.contains("relaxation")) c.admm.relaxation = get_field<double>(a, "relaxation");
    if (a.contains("balance")) c.admm.balance = get_field<double>(a, "balance");
  }
  try {
    c.validate();
  } catch (const std::exception& e) {
    throw FormatError(e.what());
  }
  return c;
}

json fit_to_json(const ScalingFit& fit) {
  return json{{"predictor", fit.predictor}, {"slope", fit.slope}, {"intercept", fit.intercept}, {"r_squared", fit.r_squared}};
}

json read_json_file(const std::filesystem::path& path) {
  auto in = open_in(path);
  try {
    return json::parse(in);
  } catch (const json::parse_error& e) {
    throw FormatError(path.string() + ": " + e.what());
  }
}

void write_json_file(const std::filesystem::path& path, const json& j) {
  auto out = open_out(path);
  out << j.dump(2) << '\n';
  if (!out) throw FormatError(path.string() + ": write failed");
}

void write_text_file(const std::filesystem::path& path, const std::string& text) {
  auto out = open_out(path);
  out << text;
  if (!out) throw FormatError(path.string() + ": write failed");
}

}  // namespace modwave
