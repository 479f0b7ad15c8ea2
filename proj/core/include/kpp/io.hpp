#pragma once

#include <cstdint>
#include <string>
#include <vector>

#include "kpp/cell.hpp"
#include "kpp/eigenproblem.hpp"
#include "kpp/fit.hpp"
#include "kpp/frontsim.hpp"
#include "kpp/halfspace.hpp"
#include "kpp/speed.hpp"

namespace kpp {

/// FNV-1a 64-bit digest, hex-encoded; identifies the driving config.
std::string fnv1a_hex(const std::string& bytes);

/// Reads a whole file; throws IoError.
std::string read_file(const std::string& path);
void write_file(const std::string& path, const std::string& contents);

// All writers embed schema_version and the config digest; none embed
// timestamps (those live in the run metadata file).
void write_eigenpair_json(const std::string& path, const EigenPair& pair,
                          const std::string& digest);
void write_speed_json(const std::string& path, const MinSpeedResult& result,
                      const Vec& e, const std::string& digest);
void write_cell_json(const std::string& path, const CellSolution& cell,
                     const std::string& digest);
void write_atlas_json(const std::string& path, const Atlas& atlas,
                      const std::string& digest);
/// Frozen column order: theta,c_star,lambda_star,theta_prime,w_star,alpha.
void write_atlas_csv(const std::string& path, const Atlas& atlas,
                     const std::string& digest);
void write_minimizer_report_json(const std::string& path,
                                 const MinimizerReport& report,
                                 const std::string& digest);
void write_trace_csv(const std::string& path, const FrontTrace& trace,
                     const std::string& digest);
void write_bramson_fit_json(const std::string& path, const BramsonFit& fit,
                            const std::string& digest);
void write_probe_csv(const std::string& path, const ProbeSeries& series,
                     const std::string& digest);
void write_power_law_json(const std::string& path,
                          const std::vector<std::pair<std::string, PowerLawFit>>&
                              fits,
                          const TailFit* tail, const std::string& digest);

struct CheckResult {
  std::string id;
  std::string name;
  bool pass = false;
  double value = 0.0;
  double expected = 0.0;
  double tolerance = 0.0;
  std::string detail;
  double seconds = 0.0;
};

void write_checks_json(const std::string& path,
                       const std::vector<CheckResult>& checks,
                       const std::string& digest);
void write_checks_csv(const std::string& path,
                      const std::vector<CheckResult>& checks,
                      const std::string& digest);

/// Timestamped run metadata; deliberately split from the result files so
/// result bytes are reproducible.
void write_run_meta(const std::string& path, const std::string& command,
                    const std::string& digest);

}  // namespace kpp
