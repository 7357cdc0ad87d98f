#include <doctest.h>

#include <algorithm>
#include <filesystem>
#include <fstream>
#include <iterator>
#include <json.hpp>
#include <string>

#include "gpe/ensemble.hpp"
#include "gpe/errors.hpp"

using namespace gpe;
namespace fs = std::filesystem;

namespace {

std::string slurp(const fs::path& p) {
  std::ifstream is(p, std::ios::binary);
  return {std::istreambuf_iterator<char>(is), {}};
}

SimConfig small(const fs::path& out, int workers) {
  return parse_config_text("mode = inviscid\nN = 3\ntau0 = 0.5\nrho = 1\nM = 0.5\nr = 3\n"
                           "noise.kind = multiplicative\nnoise.amplitude = 0.5\nic.norm = 0.2\n"
                           "dt = 0.01\nensemble_size = 4\nsnapshot_cadence = 10\nseed = 3\n"
                           "output_dir = " + out.string() + "\nworkers = " + std::to_string(workers) + "\n",
                           false);
}

}  // namespace

TEST_CASE("quantiles by linear interpolation") {
  CHECK(quantile({3.0}, 0.9) == 3.0);
  CHECK(quantile({4.0, 1.0, 3.0, 2.0}, 0.5) == 2.5);
  CHECK(quantile({4.0, 1.0, 3.0, 2.0}, 0.0) == 1.0);
  CHECK(quantile({4.0, 1.0, 3.0, 2.0}, 1.0) == 4.0);
  // pos = 0.1 * 10 = 1 -> second smallest
  CHECK(quantile({0, 1, 2, 3, 4, 5, 6, 7, 8, 9, 10}, 0.1) == 1.0);
  CHECK(quantile({0.0, 10.0}, 0.1) == doctest::Approx(1.0));
  CHECK_THROWS_AS(quantile({}, 0.5), InvalidArgument);
  CHECK(json_number(0.1) == "0.10000000000000001");
  CHECK(json_number(std::nan("")) == "null");
}

TEST_CASE("ensemble output is byte-identical across reruns and worker counts") {
  const auto base = fs::temp_directory_path() / "gpe_test_ensemble";
  fs::remove_all(base);
  run_ensemble(small(base / "a", 1));
  run_ensemble(small(base / "b", 3));
  int files = 0;
  for (const auto& e : fs::directory_iterator(base / "a")) {
    const auto name = e.path().filename();
    if (name == "config.json") continue;  // records output_dir and workers
    CAPTURE(name.string());
    REQUIRE(fs::exists(base / "b" / name));
    CHECK(slurp(e.path()) == slurp(base / "b" / name));
    ++files;
  }
  // summary.json, summary.csv, 4 jsonl streams and at least one snapshot each
  CHECK(files >= 10);

  const auto j = nlohmann::json::parse(slurp(base / "a" / "summary.json"));
  CHECK(j["ensemble_size"] == 4);
  CHECK(j["failed"] == 0);
  CHECK(j["trajectories"].size() == 4);
  CHECK(j["trajectories"][2]["seed"].get<std::uint64_t>() == derive_seed(3, 2));
  const auto cfg = nlohmann::json::parse(slurp(base / "a" / "config.json"));
  CHECK(cfg["resolved"]["mode"] == "inviscid");
  CHECK(cfg["source"].get<std::string>().find("ensemble_size = 4") != std::string::npos);

  std::ifstream jl(base / "a" / "traj_0.jsonl");
  std::string line, last;
  int n = 0;
  while (std::getline(jl, line)) {
    ++n;
    last = line;
  }
  const auto end = nlohmann::json::parse(last);
  CHECK(end["end"] == true);
  CHECK(end["seed"].get<std::uint64_t>() == derive_seed(3, 0));
  CHECK(n == j["trajectories"][0]["steps"].get<int>() + 2);
  fs::remove_all(base);
}

TEST_CASE("summary quantiles equal the hand computation over trajectories") {
  const auto base = fs::temp_directory_path() / "gpe_test_ensemble_q";
  fs::remove_all(base);
  const auto cfg = small(base, 1);
  const auto s = run_ensemble(cfg);
  std::vector<Trajectory> tr;
  for (int i = 0; i < 4; ++i) tr.push_back(simulate(cfg, i));
  for (std::size_t n : {std::size_t(0), std::size_t(7), s.quantiles.size() - 1}) {
    std::vector<double> v;
    for (const auto& t : tr)
      if (n < t.records.size()) v.push_back(t.records[n].gevrey);
    std::sort(v.begin(), v.end());
    const double pos = 0.5 * (v.size() - 1);
    const auto lo = std::size_t(pos);
    const double want = lo + 1 < v.size() ? v[lo] + (pos - lo) * (v[lo + 1] - v[lo]) : v[lo];
    CHECK(s.quantiles[n].q50 == doctest::Approx(want).epsilon(1e-15));
    CHECK(s.quantiles[n].alive == int(v.size()));
  }
  fs::remove_all(base);
}

TEST_CASE("size-one ensemble reproduces the single trajectory") {
  const auto base = fs::temp_directory_path() / "gpe_test_ensemble_one";
  fs::remove_all(base);
  auto cfg = with_overrides(small(base, 1), {{"ensemble_size", "1"}});
  const auto s = run_ensemble(cfg);
  const auto t = simulate(cfg, 0);
  REQUIRE(s.quantiles.size() == t.records.size());
  for (std::size_t n = 0; n < t.records.size(); ++n) {
    CHECK(s.quantiles[n].q10 == t.records[n].gevrey);
    CHECK(s.quantiles[n].q90 == t.records[n].gevrey);
  }
  fs::remove_all(base);
}
