#include "degtherm/rundir.hpp"

#include <doctest.h>

#include <filesystem>
#include <sstream>

using namespace degtherm;
namespace fs = std::filesystem;

namespace {

RunConfig small_config() {
  RunConfig c = reference_config();
  c.nx = c.ny = 16;
  c.T = 0.05;
  c.dt = 5e-3;
  c.save_every = 3;
  return c;
}

fs::path fresh_dir(const std::string& name) {
  const fs::path p = fs::temp_directory_path() / ("degtherm_rundir_" + name);
  fs::remove_all(p);
  return p;
}

std::size_t line_count(const std::string& text) {
  std::size_t n = 0;
  for (char ch : text) n += ch == '\n';
  return n;
}

}  // namespace

TEST_CASE("saved levels always include the last level") {
  CHECK(saved_levels(11, 3) == std::vector<Index>{0, 3, 6, 9, 10});
  CHECK(saved_levels(10, 3) == std::vector<Index>{0, 3, 6, 9});
  CHECK(saved_levels(1, 5) == std::vector<Index>{0});
}

TEST_CASE("run directory layout and contents") {
  const RunConfig c = small_config();
  const RunResult r = run(to_problem_spec(c));
  const fs::path dir = fresh_dir("layout");
  write_run_directory(dir.string(), c, r);
  for (const char* f : {"config.ini", "diagnostics.jsonl", "report.json"})
    CHECK_MESSAGE(fs::exists(dir / f), std::string(f));
  CHECK_FALSE(fs::exists(dir / "meta.json"));
  CHECK(fs::is_directory(dir / "plotdata"));

  const std::vector<Index> levels = saved_levels(r.u.num_levels(), c.save_every);
  const auto u_files = snapshot_files(dir.string(), "u");
  const auto phi_files = snapshot_files(dir.string(), "phi");
  REQUIRE(u_files.size() == levels.size());
  REQUIRE(phi_files.size() == levels.size());
  for (std::size_t k = 0; k < levels.size(); ++k) {
    CHECK(read_snapshot_file(u_files[k]) == r.u.levels[static_cast<std::size_t>(levels[k])]);
    CHECK(read_snapshot_file(phi_files[k]) == r.phi.levels[static_cast<std::size_t>(levels[k])]);
  }
  CHECK(line_count(read_text_file((dir / "diagnostics.jsonl").string())) == r.diagnostics.size());
  CHECK(parse_config(read_text_file((dir / "config.ini").string())) == c);

  const SpaceTimeField saved = read_saved_levels(dir.string(), "u");
  CHECK(saved.num_levels() == 4);
  CHECK(saved.dt == doctest::Approx(c.save_every * c.dt));
  CHECK(saved.levels[1] == r.u.levels[3]);
}

TEST_CASE("repeated writes are identical apart from the sidecar") {
  const RunConfig c = small_config();
  const fs::path a = fresh_dir("a"), b = fresh_dir("b");
  write_run_directory(a.string(), c, run(to_problem_spec(c)));
  write_run_directory(b.string(), c, run(to_problem_spec(c)));
  std::size_t compared = 0;
  for (const auto& e : fs::recursive_directory_iterator(a)) {
    if (!e.is_regular_file() || e.path().filename() == "meta.json") continue;
    const fs::path rel = fs::relative(e.path(), a);
    REQUIRE(fs::exists(b / rel));
    CHECK_MESSAGE(read_text_file(e.path().string()) == read_text_file((b / rel).string()), rel.string());
    ++compared;
  }
  CHECK(compared > 5);
}

TEST_CASE("text file helpers") {
  const fs::path dir = fresh_dir("text");
  const std::string path = (dir / "deep" / "x.txt").string();
  write_text_file(path, "abc\n");
  CHECK(read_text_file(path) == "abc\n");
  CHECK_THROWS_AS(read_text_file((dir / "missing").string()), Error);
}
