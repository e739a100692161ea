#include <doctest.h>

#include <filesystem>
#include <fstream>
#include <sstream>

#include "seldec/errors.hpp"
#include "seldec/format.hpp"
#include "seldec/io.hpp"

using namespace seldec;
using seldec::io::json;

namespace {

json example_config() {
  return json::parse(R"({
    "dim": 3,
    "labels": ["g", "e", "f"],
    "flip_set": [1, 2],
    "hamiltonian": [[[0, 0], [1, 0], [0, 2]],
                    [[1, 0], [0, 0], [3, 0]],
                    [[0, -2], [3, 0], [0, 0]]]
  })");
}

std::filesystem::path temp_path(const std::string& name) {
  return std::filesystem::temp_directory_path() / ("seldec_test_io_" + name);
}

}  // namespace

TEST_CASE("format_double keeps 17 significant digits") {
  CHECK(format_double(0.25) == "0.25");
  CHECK(format_double(0.1) == "0.10000000000000001");
  CHECK(std::stod(format_double(1.0 / 3.0)) == 1.0 / 3.0);
  CHECK(std::stod(format_double(-2.5e-17)) == -2.5e-17);
  CHECK(format_double(1e300).find("e+300") != std::string::npos);
}

TEST_CASE("system config") {
  SUBCASE("example decodes") {
    const auto cfg = io::system_config_from_json(example_config());
    CHECK(cfg.system.dim() == 3);
    CHECK(cfg.system.flip_set() == std::vector<std::size_t>{1, 2});
    CHECK(cfg.hamiltonian(0, 2) == Complex(0, 2));
    CHECK(cfg.hamiltonian(2, 0) == Complex(0, -2));
    CHECK(cfg.hamiltonian(1, 2) == Complex(3, 0));
  }
  SUBCASE("labels are optional") {
    auto j = example_config();
    j.erase("labels");
    CHECK(io::system_config_from_json(j).system.labels() == std::vector<std::string>{"g", "e", "f"});
  }
  SUBCASE("non-Hermitian input is rejected with its location") {
    auto j = example_config();
    j["hamiltonian"][2][0] = {0, 2};
    try {
      io::system_config_from_json(j);
      FAIL("expected NotHermitianError");
    } catch (const NotHermitianError& e) {
      CHECK(((e.row() == 0 && e.col() == 2) || (e.row() == 2 && e.col() == 0)));
      CHECK(e.defect() == doctest::Approx(4.0));
    }
  }
  SUBCASE("malformed input") {
    auto missing = example_config();
    missing.erase("flip_set");
    CHECK_THROWS_AS(io::system_config_from_json(missing), InputError);
    auto wrong_type = example_config();
    wrong_type["dim"] = "three";
    CHECK_THROWS_AS(io::system_config_from_json(wrong_type), InputError);
    auto wrong_dim = example_config();
    wrong_dim["dim"] = 4;
    CHECK_THROWS_AS(io::system_config_from_json(wrong_dim), InputError);
    auto ragged = example_config();
    ragged["hamiltonian"][1].erase(2);
    CHECK_THROWS_AS(io::system_config_from_json(ragged), InputError);
    auto bad_pair = example_config();
    bad_pair["hamiltonian"][0][0] = {1, 2, 3};
    CHECK_THROWS_AS(io::system_config_from_json(bad_pair), InputError);
  }
  SUBCASE("round trip") {
    const auto cfg = io::system_config_from_json(example_config());
    const auto back = io::system_config_from_json(json::parse(io::dump(io::system_config_to_json(cfg))));
    CHECK(back.hamiltonian == cfg.hamiltonian);
    CHECK(back.system.labels() == cfg.system.labels());
    CHECK(back.system.flip_set() == cfg.system.flip_set());
  }
}

TEST_CASE("property: matrix JSON round trip is bitwise") {
  for (std::uint64_t t = 0; t < 50; ++t) {
    const auto h = random_hermitian(3 + t % 4, 31, t);
    const auto text = io::dump(io::matrix_to_json(h));
    CHECK(io::matrix_from_json(json::parse(text)) == h);
  }
}

TEST_CASE("sequence JSON") {
  SUBCASE("round trip") {
    for (const auto& seq : {exact_n2(), uhrig(4), uhrig(10), family_n4(0.21, Branch::lower)}) {
      const auto j = json::parse(io::dump(io::sequence_to_json(seq)));
      CHECK(j.at("n") == seq.pulse_count());
      CHECK(io::sequence_from_json(j) == seq);
    }
  }
  SUBCASE("truncated fractions are not silently renormalized") {
    // The eight-digit values sum to 1 - 1e-8, far outside the 1e-12 allowance.
    CHECK_THROWS_AS(io::sequence_from_json(json::parse(
                        R"({"n": 4, "deltas": [0.0954915, 0.25, 0.30901699, 0.25, 0.0954915]})")),
                    DomainError);
    const auto seq = io::sequence_from_json(json::parse(
        R"({"n": 4, "deltas": [0.095491502812526274, 0.25, 0.30901699437494745, 0.25, 0.095491502812526274]})"));
    CHECK(seq.pulse_count() == 4);
    CHECK(std::abs(seq[2] - uhrig(4)[2]) <= 1e-15);
  }
  SUBCASE("errors") {
    CHECK_THROWS_AS(io::sequence_from_json(json::parse(R"({"n": 2})")), InputError);
    CHECK_THROWS_AS(io::sequence_from_json(json::parse(R"({"n": 4, "deltas": [0.25, 0.5, 0.25]})")),
                    InputError);
    CHECK_THROWS_AS(io::sequence_from_json(json::parse(R"({"deltas": ["a"]})")), InputError);
    CHECK_THROWS_AS(io::sequence_from_json(json::parse(R"({"deltas": [0.5, 0.3, 0.3]})")), DomainError);
  }
}

TEST_CASE("dump") {
  const json j = {{"a", 0.1}, {"b", {1, 2}}, {"c", {{"d", "x"}}}};
  const std::string text = io::dump(j);
  CHECK(text == "{\n  \"a\": 0.10000000000000001,\n  \"b\": [1, 2],\n  \"c\": {\n    \"d\": \"x\"\n  }\n}\n");
  CHECK(json::parse(text) == j);
  CHECK(io::dump(json::object()) == "{}\n");
}

TEST_CASE("evaluation and scaling output") {
  const auto plan = pulse_operator(LevelSystem());
  const auto h = random_hermitian(3, 32);
  SUBCASE("evaluation JSON") {
    const auto j = io::evaluation_to_json(evaluate(h, plan, exact_n2(), 0.01));
    for (const char* key : {"tf", "unwanted_residual", "wanted_deviation", "U", "H_eff",
                            "preserved_coupling_deviation"})
      CHECK(j.contains(key));
    CHECK(j.at("tf") == 0.01);
  }
  SUBCASE("scan CSV and fit summary") {
    const auto fit = scaling_study(h, plan, exact_n2(), 1e-3, 1e-1, 9);
    std::ostringstream os;
    io::write_scaling_csv(os, fit);
    std::istringstream in(os.str());
    std::string line;
    std::getline(in, line);
    CHECK(line == "tf,unwanted_residual,wanted_deviation");
    int rows = 0;
    while (std::getline(in, line)) ++rows;
    CHECK(rows == 9);
    const auto summary = io::scaling_fit_to_json(fit);
    CHECK(summary.size() == 3);
    CHECK(summary.at("excluded") == fit.noise_floor_points_excluded);
    CHECK(summary.at("slope_unwanted").get<double>() == fit.slope_unwanted);
  }
}

TEST_CASE("files") {
  const auto path = temp_path("atomic.json");
  io::write_file_atomic(path, "{\"x\": 1}\n");
  CHECK(io::read_json_file(path).at("x") == 1);
  CHECK_FALSE(std::filesystem::exists(path.string() + ".tmp"));
  io::write_file_atomic(path, "not json");
  CHECK_THROWS_AS(io::read_json_file(path), InputError);
  std::filesystem::remove(path);
  CHECK_THROWS_AS(io::read_json_file(temp_path("missing.json")), InputError);
}
