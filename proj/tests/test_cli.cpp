#include <catch2/catch_amalgamated.hpp>

#include <cstdio>
#include <cstdlib>
#include <fstream>
#include <sstream>
#include <string>

// End-to-end checks of the installed command-line tool.  The binary path
// arrives via the SYZYGY_CLI environment variable set by ctest.

namespace {

std::string cli_path() {
  const char* p = std::getenv("SYZYGY_CLI");
  REQUIRE(p != nullptr);
  return p;
}

struct RunResult {
  int exit_code = -1;
  std::string stdout_text;
};

RunResult run_cli(const std::string& args) {
  std::string out_file = "cli_stdout.tmp";
  std::string cmd = cli_path() + " " + args + " > " + out_file + " 2> cli_stderr.tmp";
  int status = std::system(cmd.c_str());
  RunResult r;
  r.exit_code = WEXITSTATUS(status);
  std::ifstream in(out_file, std::ios::binary);
  std::stringstream buf;
  buf << in.rdbuf();
  r.stdout_text = buf.str();
  return r;
}

void write_file(const std::string& path, const std::string& text) {
  std::ofstream out(path, std::ios::binary);
  out << text;
}

const char* kCubicConfig = R"({
  "schema_version": 1,
  "system": {"kind": "projective", "n": 1, "b_degrees": [0], "l_degree": 3},
  "betti": {"p_max": 3, "q_min": 0, "q_max": 2},
  "oracle": {"p_max": 3},
  "duality": {"p_max": 4, "q_min": 0, "q_max": 2},
  "sweep": {"a_degree": 1, "p_degree": 1, "p": 1, "q": 1, "d_from": 1, "d_to": 6},
  "fit": {"train_from": 2, "train_to": 4},
  "equivariant": {"n": 2}
})";

const char* kCubicCsv =
    "p,q,dim\n"
    "0,0,1\n1,0,0\n2,0,0\n3,0,0\n"
    "0,1,0\n1,1,3\n2,1,2\n3,1,0\n"
    "0,2,0\n1,2,0\n2,2,0\n3,2,0\n";

}  // namespace

TEST_CASE("cli betti emits the golden table") {
  write_file("cubic.json", kCubicConfig);
  RunResult r = run_cli("--config cubic.json betti");
  CHECK(r.exit_code == 0);
  CHECK(r.stdout_text == kCubicCsv);
}

TEST_CASE("cli output is byte-identical across thread counts") {
  write_file("cubic.json", kCubicConfig);
  RunResult serial = run_cli("--config cubic.json --threads 1 betti");
  RunResult parallel = run_cli("--config cubic.json --threads 4 betti");
  CHECK(serial.exit_code == 0);
  CHECK(parallel.exit_code == 0);
  CHECK(serial.stdout_text == parallel.stdout_text);
}

TEST_CASE("cli betti writes files and prints the diagram") {
  write_file("cubic.json", kCubicConfig);
  RunResult r = run_cli("--config cubic.json --out cubic.csv betti");
  CHECK(r.exit_code == 0);
  CHECK(r.stdout_text.find("0:  1  .  .  .") != std::string::npos);
  std::ifstream in("cubic.csv", std::ios::binary);
  std::stringstream buf;
  buf << in.rdbuf();
  CHECK(buf.str() == kCubicCsv);
}

TEST_CASE("cli rejects an empty q range with exit 2") {
  write_file("bad_range.json", R"({
    "schema_version": 1,
    "system": {"kind": "projective", "n": 1, "b_degrees": [0], "l_degree": 3},
    "betti": {"p_max": 3, "q_min": 2, "q_max": 0}
  })");
  CHECK(run_cli("--config bad_range.json betti").exit_code == 2);
}

TEST_CASE("cli rejects unknown config keys with exit 2") {
  write_file("unknown.json", R"({
    "schema_version": 1,
    "system": {"kind": "projective", "n": 1, "b_degrees": [0], "l_degree": 3},
    "surprise": 1
  })");
  CHECK(run_cli("--config unknown.json betti").exit_code == 2);
}

TEST_CASE("cli clips p_max past h0 with a warning") {
  write_file("clip.json", R"({
    "schema_version": 1,
    "system": {"kind": "projective", "n": 1, "b_degrees": [0], "l_degree": 2},
    "betti": {"p_max": 9, "q_min": 0, "q_max": 2}
  })");
  RunResult r = run_cli("--config clip.json betti");
  CHECK(r.exit_code == 0);
  CHECK(r.stdout_text.find("3,2,0\n") != std::string::npos);  // p stops at h0 = 3
}

TEST_CASE("cli oracle-compare agrees on the twisted cubic") {
  write_file("cubic.json", kCubicConfig);
  RunResult r = run_cli("--config cubic.json oracle-compare");
  CHECK(r.exit_code == 0);
  CHECK(r.stdout_text.find("all cells agree") != std::string::npos);
}

TEST_CASE("cli oracle-compare reports truncation as a config problem") {
  write_file("trunc.json", R"({
    "schema_version": 1,
    "system": {"kind": "projective", "n": 1, "b_degrees": [0], "l_degree": 3},
    "oracle": {"p_max": 3, "degree_bound": 4}
  })");
  CHECK(run_cli("--config trunc.json oracle-compare").exit_code == 2);
}

TEST_CASE("cli duality run agrees") {
  write_file("cubic.json", kCubicConfig);
  RunResult r = run_cli("--config cubic.json duality");
  CHECK(r.exit_code == 0);
  CHECK(r.stdout_text.find("all comparable cells agree") != std::string::npos);
}

TEST_CASE("cli sweep emits csv") {
  write_file("cubic.json", kCubicConfig);
  RunResult r = run_cli("--config cubic.json sweep");
  CHECK(r.exit_code == 0);
  CHECK(r.stdout_text == "d,dim\n1,1\n2,3\n3,6\n4,10\n5,15\n6,21\n");
}

TEST_CASE("cli fit validates the quadric sweep") {
  write_file("cubic.json", kCubicConfig);
  RunResult r = run_cli("--config cubic.json fit");
  CHECK(r.exit_code == 0);
  CHECK(r.stdout_text.find("validated: yes\n") != std::string::npos);
  CHECK(r.stdout_text.find("coefficient[2]: 1/2\n") != std::string::npos);
}

TEST_CASE("cli equivariant run agrees") {
  write_file("cubic.json", kCubicConfig);
  RunResult r = run_cli("--config cubic.json equivariant");
  CHECK(r.exit_code == 0);
  CHECK(r.stdout_text.find("all checks agree") != std::string::npos);
}

TEST_CASE("cli requires a readable config") {
  CHECK(run_cli("--config definitely_missing.json betti").exit_code == 2);
}
