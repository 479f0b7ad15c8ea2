// Acceptance suite: runs every verification criterion at its stated
// tolerance and prints one pass/fail line per criterion. Exits nonzero if
// any criterion fails.

#include <cstdio>
#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <string>
#include <vector>

#include "kpp/io.hpp"
#include "kpp/verify.hpp"

namespace fs = std::filesystem;

namespace {

void print_check(const kpp::CheckResult& c) {
  std::printf("[%s] %-4s %-58s value %.6g (tol %.3g) %.1fs\n",
              c.pass ? "PASS" : "FAIL", c.id.c_str(), c.name.c_str(), c.value,
              c.tolerance, c.seconds);
  if (!c.detail.empty()) std::printf("        %s\n", c.detail.c_str());
  std::fflush(stdout);
}

std::string quick_config_text() {
  return "[verify]\nsuite = \"quick\"\n";
}

bool files_identical(const fs::path& a, const fs::path& b) {
  std::ifstream fa(a, std::ios::binary), fb(b, std::ios::binary);
  if (!fa || !fb) return false;
  std::string sa((std::istreambuf_iterator<char>(fa)),
                 std::istreambuf_iterator<char>());
  std::string sb((std::istreambuf_iterator<char>(fb)),
                 std::istreambuf_iterator<char>());
  return sa == sb;
}

// Criterion 12: two verify-all runs with the same seed produce byte-identical
// result files (run metadata carries the timestamps and is excluded).
kpp::CheckResult criterion_determinism(const std::string& cli,
                                       const fs::path& scratch) {
  kpp::CheckResult c;
  c.id = "C12";
  c.name = "verify-all determinism: byte-identical result files";
  const fs::path cfg_path = scratch / "quick.toml";
  const fs::path out1 = scratch / "run1";
  const fs::path out2 = scratch / "run2";
  fs::create_directories(scratch);
  fs::remove_all(out1);
  fs::remove_all(out2);
  {
    std::ofstream out(cfg_path);
    out << quick_config_text();
  }
  const std::string base = "\"" + cli + "\" verify-all --config \"" +
                           cfg_path.string() + "\" --seed 42 --out \"";
  const std::string log1 = (scratch / "run1.log").string();
  const std::string log2 = (scratch / "run2.log").string();
  const int rc1 =
      std::system((base + out1.string() + "\" > " + log1 + " 2>&1").c_str());
  const int rc2 =
      std::system((base + out2.string() + "\" > " + log2 + " 2>&1").c_str());
  if (rc1 != 0 || rc2 != 0) {
    c.pass = false;
    c.detail = "verify-all exited with " + std::to_string(rc1) + " / " +
               std::to_string(rc2);
    return c;
  }
  int compared = 0;
  bool identical = true;
  std::string first_diff;
  for (const auto& entry : fs::directory_iterator(out1)) {
    const std::string name = entry.path().filename().string();
    if (name == "run_meta.json") continue;
    ++compared;
    if (!files_identical(entry.path(), out2 / name)) {
      identical = false;
      if (first_diff.empty()) first_diff = name;
    }
  }
  c.value = compared;
  c.pass = identical && compared >= 2;
  c.detail = identical ? std::to_string(compared) + " result files identical"
                       : "differs: " + first_diff;
  return c;
}

}  // namespace

int main(int argc, char** argv) {
  std::string cli;
  std::string scratch = "acceptance_scratch";
  std::uint64_t seed = 1;
  for (int i = 1; i + 1 < argc; i += 2) {
    const std::string flag = argv[i];
    if (flag == "--cli") cli = argv[i + 1];
    if (flag == "--scratch") scratch = argv[i + 1];
    if (flag == "--seed") seed = std::strtoull(argv[i + 1], nullptr, 10);
  }

  std::vector<kpp::CheckResult> results;
  const auto run = [&](kpp::CheckResult c) {
    print_check(c);
    results.push_back(std::move(c));
  };

  std::printf("acceptance criteria (seed %llu)\n",
              static_cast<unsigned long long>(seed));
  try {
    run(kpp::criterion_homogeneous_dispersion());
    run(kpp::criterion_minimal_speed_constants());
    run(kpp::criterion_oracle_equivalence(seed));
    run(kpp::criterion_cell_identities());
    run(kpp::criterion_effective_diffusion(seed));
    run(kpp::criterion_minimizer_theory(1));
    run(kpp::criterion_front_speed());
    run(kpp::criterion_bramson_1d());
    run(kpp::criterion_halfspace_decay());
    run(kpp::criterion_log_frame_boundedness());
    run(kpp::criterion_gaussian_covariance());
    if (!cli.empty()) {
      run(criterion_determinism(cli, fs::path(scratch)));
    } else {
      std::printf("[SKIP] C12  determinism (no --cli path given)\n");
    }
  } catch (const std::exception& e) {
    std::printf("[FAIL] acceptance aborted: %s\n", e.what());
    return 1;
  }

  int failed = 0;
  for (const auto& c : results) {
    if (!c.pass) ++failed;
  }
  std::printf("acceptance: %zu criteria, %d failed\n", results.size(), failed);
  return failed == 0 ? 0 : 1;
}
