#include "kpp/io.hpp"

#include <chrono>
#include <cstdio>
#include <fstream>
#include <sstream>

#include <nlohmann/json.hpp>

namespace kpp {

using ordered_json = nlohmann::ordered_json;

std::string fnv1a_hex(const std::string& bytes) {
  std::uint64_t hash = 1469598103934665603ull;
  for (unsigned char c : bytes) {
    hash ^= c;
    hash *= 1099511628211ull;
  }
  char buf[17];
  std::snprintf(buf, sizeof(buf), "%016llx",
                static_cast<unsigned long long>(hash));
  return std::string(buf);
}

std::string read_file(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw IoError("cannot open " + path);
  std::ostringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

void write_file(const std::string& path, const std::string& contents) {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw IoError("cannot open " + path + " for writing");
  out << contents;
  if (!out) throw IoError("failed writing " + path);
}

namespace {

ordered_json json_header(const std::string& digest) {
  ordered_json j;
  j["schema_version"] = 1;
  j["config_digest"] = digest;
  return j;
}

void dump_json(const std::string& path, const ordered_json& j) {
  write_file(path, j.dump(2) + "\n");
}

ordered_json vec_json(const Vec& v, int dim) {
  ordered_json a = ordered_json::array();
  a.push_back(v[0]);
  if (dim == 2) a.push_back(v[1]);
  return a;
}

ordered_json mu_spec_json(const MuSpec& spec) {
  ordered_json j;
  j["dim"] = spec.dim;
  if (spec.kind == MuSpec::Kind::Constant) {
    j["kind"] = "constant";
    j["value"] = spec.constant_value;
  } else {
    j["kind"] = "trig";
    j["offset"] = spec.offset;
    ordered_json terms = ordered_json::array();
    for (const TrigTerm& t : spec.terms) {
      ordered_json term;
      term["k"] = spec.dim == 2 ? ordered_json::array({t.k[0], t.k[1]})
                                : ordered_json::array({t.k[0]});
      term["cos"] = t.cos_amp;
      term["sin"] = t.sin_amp;
      terms.push_back(term);
    }
    j["terms"] = terms;
  }
  return j;
}

struct CsvFile {
  std::FILE* fp;
  explicit CsvFile(const std::string& path, const std::string& digest) {
    fp = std::fopen(path.c_str(), "w");
    if (!fp) throw IoError("cannot open " + path + " for writing");
    std::fprintf(fp, "# schema_version=1 config_digest=%s\n", digest.c_str());
  }
  ~CsvFile() {
    if (fp) std::fclose(fp);
  }
};

}  // namespace

void write_eigenpair_json(const std::string& path, const EigenPair& pair,
                          const std::string& digest) {
  const int dim = pair.psi.grid.dim;
  ordered_json j = json_header(digest);
  j["e"] = vec_json(pair.e, dim);
  j["lambda"] = pair.lambda;
  j["gamma"] = pair.gamma;
  j["residual"] = pair.residual;
  j["iterations"] = pair.iterations;
  j["psi_stats"] = {{"min", pair.psi.min()}, {"max", pair.psi.max()}};
  dump_json(path, j);
}

void write_speed_json(const std::string& path, const MinSpeedResult& result,
                      const Vec& e, const std::string& digest) {
  const int dim = result.eigen_at_min.psi.grid.dim;
  ordered_json j = json_header(digest);
  j["e"] = vec_json(e, dim);
  j["c_star"] = result.c_star;
  j["lambda_star"] = result.lambda_star;
  j["stationarity"] = result.stationarity;
  j["gamma_evals"] = result.gamma_evals;
  j["bracket_width_log"] = result.bracket_width;
  dump_json(path, j);
}

void write_cell_json(const std::string& path, const CellSolution& cell,
                     const std::string& digest) {
  const int dim = cell.nu.grid.dim;
  ordered_json j = json_header(digest);
  j["e"] = vec_json(cell.e, dim);
  j["e_prime"] = vec_json(cell.e_prime, dim);
  j["theta_prime"] = cell.theta_prime;
  j["lambda_star"] = cell.lambda_star;
  j["c_star_at_eprime"] = cell.c_star_at_eprime;
  j["w_star"] = cell.w_star;
  ordered_json s = ordered_json::array();
  for (int i = 0; i < dim; ++i) {
    for (int k = 0; k < dim; ++k) s.push_back(cell.S.m[i][k]);
  }
  j["S"] = s;
  j["identities"] = {
      {"nu_mass", cell.identities.nu_mass},
      {"F_mean", vec_json(cell.identities.f_mean, dim)},
      {"F_mean_error", cell.identities.f_mean_error},
      {"divF_inf", cell.identities.div_f_inf},
      {"solvability", std::vector<double>(cell.identities.solvability.begin(),
                                          cell.identities.solvability.begin() +
                                              dim)},
      {"chi_residual",
       std::vector<double>(cell.identities.chi_residual.begin(),
                           cell.identities.chi_residual.begin() + dim)}};
  j["psi_stats"] = {{"min", cell.eigen.psi.min()},
                    {"max", cell.eigen.psi.max()}};
  dump_json(path, j);
}

void write_atlas_json(const std::string& path, const Atlas& atlas,
                      const std::string& digest) {
  ordered_json j = json_header(digest);
  j["mu_spec"] = mu_spec_json(atlas.mu_spec);
  j["n"] = atlas.dim;
  j["grid_N"] = atlas.grid_points;
  ordered_json recs = ordered_json::array();
  for (const DirectionRecord& r : atlas.records) {
    ordered_json rec;
    rec["theta"] = r.theta;
    rec["e"] = vec_json(r.e, atlas.dim);
    rec["lambda_star"] = r.lambda_star;
    rec["c_star"] = r.c_star;
    rec["theta_prime"] = r.theta_prime;
    rec["w_star"] = r.w_star;
    rec["alpha"] = r.alpha;
    recs.push_back(rec);
  }
  j["records"] = recs;
  dump_json(path, j);
}

void write_atlas_csv(const std::string& path, const Atlas& atlas,
                     const std::string& digest) {
  CsvFile csv(path, digest);
  std::fprintf(csv.fp, "theta,c_star,lambda_star,theta_prime,w_star,alpha\n");
  for (const DirectionRecord& r : atlas.records) {
    std::fprintf(csv.fp, "%.17g,%.17g,%.17g,%.17g,%.17g,%.17g\n", r.theta,
                 r.c_star, r.lambda_star, r.theta_prime, r.w_star, r.alpha);
  }
}

void write_minimizer_report_json(const std::string& path,
                                 const MinimizerReport& report,
                                 const std::string& digest) {
  ordered_json j = json_header(digest);
  j["directions"] = report.directions;
  j["angle_step_deg"] = report.angle_step_deg;
  j["all_pass"] = report.all_pass;
  ordered_json checks = ordered_json::array();
  for (const MinimizerCheck& c : report.checks) {
    ordered_json cj;
    cj["name"] = c.name;
    cj["pass"] = c.pass;
    cj["worst"] = c.worst;
    cj["threshold"] = c.threshold;
    cj["detail"] = c.detail;
    checks.push_back(cj);
  }
  j["checks"] = checks;
  dump_json(path, j);
}

void write_trace_csv(const std::string& path, const FrontTrace& trace,
                     const std::string& digest) {
  CsvFile csv(path, digest);
  std::fprintf(csv.fp, "t,r\n");
  for (const auto& [t, r] : trace.samples) {
    std::fprintf(csv.fp, "%.17g,%.17g\n", t, r);
  }
}

void write_bramson_fit_json(const std::string& path, const BramsonFit& fit,
                            const std::string& digest) {
  ordered_json j = json_header(digest);
  j["v"] = fit.v;
  j["alpha"] = fit.alpha;
  j["C"] = fit.c;
  j["residual"] = fit.rms_residual;
  j["window"] = {fit.t_min, fit.t_max};
  j["condition_number"] = fit.condition;
  j["samples"] = fit.samples;
  dump_json(path, j);
}

void write_probe_csv(const std::string& path, const ProbeSeries& series,
                     const std::string& digest) {
  CsvFile csv(path, digest);
  std::fprintf(csv.fp, "t,value\n");
  for (const auto& [t, v] : series.samples) {
    std::fprintf(csv.fp, "%.17g,%.17g\n", t, v);
  }
}

void write_power_law_json(
    const std::string& path,
    const std::vector<std::pair<std::string, PowerLawFit>>& fits,
    const TailFit* tail, const std::string& digest) {
  ordered_json j = json_header(digest);
  ordered_json arr = ordered_json::array();
  for (const auto& [name, fit] : fits) {
    ordered_json f;
    f["series"] = name;
    f["exponent"] = fit.exponent;
    f["prefactor"] = fit.prefactor;
    f["residual"] = fit.rms_residual;
    f["window"] = {fit.t_min, fit.t_max};
    arr.push_back(f);
  }
  j["fits"] = arr;
  if (tail) {
    j["exponential_tail"] = {{"rate", tail->rate},
                             {"rate_mid", tail->rate_mid},
                             {"prefactor_r2", tail->prefactor_r2},
                             {"window", {tail->window_lo, tail->window_hi}}};
  }
  dump_json(path, j);
}

void write_checks_json(const std::string& path,
                       const std::vector<CheckResult>& checks,
                       const std::string& digest) {
  ordered_json j = json_header(digest);
  bool all = true;
  ordered_json arr = ordered_json::array();
  for (const CheckResult& c : checks) {
    all = all && c.pass;
    ordered_json cj;
    cj["id"] = c.id;
    cj["name"] = c.name;
    cj["pass"] = c.pass;
    cj["value"] = c.value;
    cj["expected"] = c.expected;
    cj["tolerance"] = c.tolerance;
    cj["detail"] = c.detail;
    arr.push_back(cj);
  }
  j["all_pass"] = all;
  j["checks"] = arr;
  dump_json(path, j);
}

void write_checks_csv(const std::string& path,
                      const std::vector<CheckResult>& checks,
                      const std::string& digest) {
  CsvFile csv(path, digest);
  std::fprintf(csv.fp, "id,name,pass,value,expected,tolerance\n");
  for (const CheckResult& c : checks) {
    std::fprintf(csv.fp, "%s,%s,%d,%.17g,%.17g,%.17g\n", c.id.c_str(),
                 c.name.c_str(), c.pass ? 1 : 0, c.value, c.expected,
                 c.tolerance);
  }
}

void write_run_meta(const std::string& path, const std::string& command,
                    const std::string& digest) {
  const auto now = std::chrono::system_clock::now();
  const auto secs =
      std::chrono::duration_cast<std::chrono::seconds>(now.time_since_epoch())
          .count();
  ordered_json j;
  j["command"] = command;
  j["config_digest"] = digest;
  j["unix_time"] = secs;
  dump_json(path, j);
}

}  // namespace kpp
