#include <doctest.h>

#include <sys/wait.h>

#include <array>
#include <cstdio>
#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <sstream>
#include <string>

#include <json.hpp>

namespace {

using nlohmann::json;

struct Result {
  int code;
  std::string out;
};

Result run(const std::string& args, const std::string& env = "") {
  const std::string cmd = env + (env.empty() ? "" : " ") + CVTELEPORT_BIN + std::string(" ") + args + " 2>/dev/null";
  FILE* pipe = popen(cmd.c_str(), "r");
  REQUIRE(pipe != nullptr);
  std::string out;
  std::array<char, 4096> buf;
  while (std::size_t n = std::fread(buf.data(), 1, buf.size(), pipe)) out.append(buf.data(), n);
  const int status = pclose(pipe);
  return {WIFEXITED(status) ? WEXITSTATUS(status) : -1, out};
}

json run_json(const std::string& args, int expected_code = 0) {
  const auto r = run(args);
  REQUIRE(r.code == expected_code);
  return json::parse(r.out);
}

std::string slurp(const std::filesystem::path& p) {
  std::ifstream f(p, std::ios::binary);
  std::ostringstream ss;
  ss << f.rdbuf();
  return ss.str();
}

}  // namespace

TEST_CASE("cli classify") {
  auto j = run_json("classify --tau 1 --y 0 --format json");
  CHECK(j["schema_version"] == 1);
  CHECK(j["command"] == "classify");
  CHECK(j["data"]["tag"] == "identity");
  CHECK(j["data"]["entanglement_breaking"] == false);
  CHECK(j["data"]["sb_b_to_a"] == false);

  j = run_json("classify --tau 0.5 --y 1.6 --format json");
  CHECK(j["data"]["entanglement_breaking"] == true);
  CHECK(j["data"]["sb_b_to_a"] == true);
  CHECK(j["data"]["sb_a_to_b"] == true);

  j = run_json("classify --tau 0.5 --y 0.4 --format json");
  CHECK(j["data"]["unphysical"] == true);

  const auto text = run("classify --tau 1 --y 0");
  CHECK(text.code == 0);
  CHECK(text.out.find("tag: identity") != std::string::npos);

  CHECK(run("classify --tau -1 --y 0").code == 2);
  CHECK(run("classify --tau 1").code == 2);
  CHECK(run("classify --tau abc --y 0").code == 2);
  CHECK(run("classify --tau 1 --y 0 --format xml").code == 2);
}

TEST_CASE("cli optimal") {
  auto j = run_json("optimal --lambda 0.2 --direction ba --steering 0.4");
  CHECK(j["data"]["f_opt"].get<double>() == doctest::Approx(0.82263).epsilon(1e-5));
  CHECK(j["data"]["secure"] == true);
  CHECK(j["data"]["resource"]["checks"]["ok"] == true);
  for (const char* k : {"a", "b", "c", "g", "energy"}) CHECK(j["data"]["resource"][k].is_number());
  CHECK(j["data"]["cross_steerability"].is_number());
  CHECK(j["data"]["tau_opt"].is_number());
  CHECK(j["data"]["y_boundary"].is_number());
  CHECK(j["data"]["threshold"].get<double>() == 0.75);

  j = run_json("optimal --lambda 0.2 --direction ab --steering 0.2");
  CHECK(j["data"]["secure"] == false);

  j = run_json("optimal --lambda 0.2 --direction ba --steering 0");
  CHECK(j["data"]["f_opt"].get<double>() == 0.75);
  CHECK(j["data"]["secure"] == false);
  CHECK(j["data"]["resource"].is_null());

  j = run_json("optimal --lambda 1000 --direction ab --steering 0.6", 3);
  CHECK(j["error"]["code"] == "DivergentEnergy");

  CHECK(run("optimal --lambda 0.2 --direction xy --steering 0.4").code == 2);
  CHECK(run("optimal --lambda -1 --steering 0.4").code == 2);
}

TEST_CASE("cli resource and threshold") {
  auto j = run_json("resource --tau 1 --steering 0.4 --direction ba");
  CHECK(j["data"]["a"].get<double>() == doctest::Approx(3.16214).epsilon(1e-5));
  CHECK(j["data"]["checks"]["ok"] == true);
  j = run_json("resource --tau 1 --steering 0.6 --direction ab --a 10");
  CHECK(j["data"]["a"].get<double>() == 10.0);
  j = run_json("resource --tau 0.45 --steering 0.6 --direction ab", 3);
  CHECK(j["error"]["code"] == "DivergentEnergy");
  CHECK(run("resource --tau 1 --steering 0 --direction ab").code == 2);

  j = run_json("threshold --lambda 1 --format json");
  CHECK(j["data"]["threshold"].get<double>() == doctest::Approx(0.920991426441).epsilon(1e-12));
  CHECK(j["data"]["s_ab_min"].get<double>() == doctest::Approx(std::log(2.0)).epsilon(1e-12));
  CHECK(run("threshold --lambda -0.5").code == 2);
}

TEST_CASE("cli verify") {
  auto j = run_json("verify --tau 1 --y 0.73576 --lambda 0.2 --n 100000 --seed 7");
  CHECK(j["data"]["agrees"] == true);
  CHECK(j["data"]["mc"]["seed"] == 7);
  CHECK(j["data"]["mc"]["n_samples"] == 100000);

  j = run_json("verify --tau 1 --y 0 --lambda 0.2 --n 100");
  CHECK(j["data"]["mc"]["estimate"].get<double>() == 1.0);

  CHECK(run("verify --tau 0.5 --y 0.4 --lambda 0.2 --n 1000").code == 2);
  CHECK(run("verify --tau 1 --y 0 --lambda 0.2 --n 10").code == 2);

  const auto env_run = run("verify --tau 0.6 --y 0.5 --lambda 0.2 --n 5000", "CVTELEPORT_SEED=1234");
  REQUIRE(env_run.code == 0);
  CHECK(json::parse(env_run.out)["data"]["mc"]["seed"] == 1234);
  const auto flag_run = run("verify --tau 0.6 --y 0.5 --lambda 0.2 --n 5000 --seed 1234");
  CHECK(env_run.out == flag_run.out);
  CHECK(run("verify --tau 0.6 --y 0.5 --lambda 0.2 --n 5000", "CVTELEPORT_SEED=abc").code == 2);
}

TEST_CASE("cli exit codes for usage and I/O") {
  CHECK(run("--help").code == 0);
  CHECK(run("").code == 2);
  CHECK(run("frobnicate").code == 2);
  CHECK(run("contour --kind fig1a --step 0.5 --out /nonexistent-dir/x.csv").code == 4);
  CHECK(run("contour --kind fig9").code == 2);
}

TEST_CASE("cli contour goldens") {
  const std::filesystem::path golden(GOLDEN_DIR);
  const auto tmp = std::filesystem::temp_directory_path() / "cvteleport_cli_test";
  std::filesystem::create_directories(tmp);
  for (const std::string kind : {"fig1a", "fig1b", "fig2a", "fig2b"}) {
    for (const std::string fmt : {"csv", "json"}) {
      const auto out = tmp / (kind + "." + fmt);
      const auto r = run("contour --kind " + kind + " --step 0.25 --format " + fmt + " --out " + out.string());
      REQUIRE(r.code == 0);
      CHECK_MESSAGE(slurp(out) == slurp(golden / (kind + "." + fmt)), kind << "." << fmt);
    }
  }
  const auto j = json::parse(slurp(golden / "fig1a.json"));
  CHECK(j["schema_version"] == 1);
  CHECK(j["data"]["columns"].size() == 9);
  std::filesystem::remove_all(tmp);
}
