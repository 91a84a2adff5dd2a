#include <cstdio>
#include <filesystem>
#include <string>

#include "doctest.h"
#include "rpfcone/config.hpp"
#include "rpfcone/errors.hpp"
#include "rpfcone/report.hpp"

using namespace rpfcone;
namespace fs = std::filesystem;

namespace {

struct TempDir {
    fs::path path;
    TempDir() {
        path = fs::temp_directory_path() /
               ("rpfcone-test-" + std::to_string(::getpid()) + "-" +
                std::to_string(counter()++));
        fs::create_directories(path);
    }
    ~TempDir() { fs::remove_all(path); }
    static int& counter() {
        static int c = 0;
        return c;
    }
};

const char* kMinimalGauss = R"(
[system]
kind = "gauss"
)";

}  // namespace

TEST_CASE("TOML subset: scalars, arrays, comments") {
    auto t = parse_toml_text(R"(
# top comment
[system]
kind = "gauss"      # trailing comment
nodes = 48
tol = 1e-13
flag = true
weights = [0.25, 0.75]
names = ["a", "b"]
)");
    REQUIRE(t.count("system") == 1);
    const auto& s = t["system"];
    CHECK(std::get<std::string>(s.at("kind").scalar) == "gauss");
    CHECK(std::get<std::int64_t>(s.at("nodes").scalar) == 48);
    CHECK(std::get<double>(s.at("tol").scalar) == doctest::Approx(1e-13));
    CHECK(std::get<bool>(s.at("flag").scalar) == true);
    REQUIRE(s.at("weights").is_array);
    REQUIRE(s.at("weights").array.size() == 2);
    CHECK(std::get<double>(s.at("weights").array[1]) == doctest::Approx(0.75));
    CHECK(std::get<std::string>(s.at("names").array[0]) == "a");
}

TEST_CASE("TOML subset: malformed inputs are rejected") {
    CHECK_THROWS_AS(parse_toml_text("[system]\nkind gauss\n"), ValidationError);
    CHECK_THROWS_AS(parse_toml_text("kind = \"gauss\"\n"), ValidationError);  // no section
    CHECK_THROWS_AS(parse_toml_text("[system]\nkind = \"a\"\nkind = \"b\"\n"),
                    ValidationError);  // duplicate key
    CHECK_THROWS_AS(parse_toml_text("[system\nkind = \"a\"\n"), ValidationError);
    CHECK_THROWS_AS(parse_toml_text("[system]\nw = [1, \n"), ValidationError);
}

TEST_CASE("config validation: required block, unknown keys, whitelists") {
    CHECK_THROWS_WITH_AS(load_config_text(""), doctest::Contains("missing system block"),
                         ValidationError);
    CHECK_THROWS_WITH_AS(load_config_text("[solver]\ntol = 1e-10\n"),
                         doctest::Contains("missing system block"), ValidationError);

    CHECK_THROWS_WITH_AS(
        load_config_text("[system]\nkind = \"gauss\"\nbogus_knob = 3\n"),
        doctest::Contains("bogus_knob"), ValidationError);
    CHECK_THROWS_AS(load_config_text("[system]\nkind = \"lorenz\"\n"), ValidationError);
    CHECK_THROWS_AS(
        load_config_text("[system]\nkind = \"gauss\"\n[solver]\nboundary = \"open\"\n"),
        ValidationError);
    CHECK_THROWS_AS(
        load_config_text("[system]\nkind = \"gauss\"\n[twist]\nu = \"momentum\"\n"),
        ValidationError);

    auto cfg = load_config_text(kMinimalGauss);
    CHECK(cfg.system.kind == "gauss");
    CHECK(cfg.discretization.nodes == 64);
    CHECK(cfg.solver.boundary == "periodic");
    CHECK(cfg.raw_text == kMinimalGauss);
}

TEST_CASE("stage and observable instantiation from configs") {
    auto gauss = load_config_text(kMinimalGauss);
    auto st = make_stage(gauss);
    CHECK(st->kind() == SystemStage::Kind::Gauss);
    CHECK(make_potential(gauss, st->grid()).kind() == Potential::Kind::Zero);

    auto shift = load_config_text(R"(
[system]
kind = "full-shift"
symbol_weights = [0.5, 0.5]
[discretization]
depth = 3
[twist]
u = "first-symbol"
symbol_values = [0.0, 1.0]
)");
    auto sst = make_stage(shift);
    CHECK(sst->kind() == SystemStage::Kind::FullShift);
    CHECK(sst->grid()->size() == 8);
    auto u = make_potential(shift, sst->grid());
    CHECK(u.kind() == Potential::Kind::FirstSymbol);

    // Observable table must match the alphabet.
    auto bad = load_config_text(R"(
[system]
kind = "full-shift"
symbol_weights = [0.5, 0.5]
[twist]
u = "first-symbol"
symbol_values = [0.0, 1.0, 2.0]
)");
    CHECK_THROWS_AS(make_potential(bad, make_stage(bad)->grid()), ValidationError);

    auto tower = load_config_text(R"(
[system]
kind = "tower"
tower_atoms = 5
[discretization]
K_depth = 1
R_max = 20
)");
    auto tst = make_stage(tower);
    CHECK(tst->kind() == SystemStage::Kind::Tower);

    auto interval = load_config_text(R"(
[system]
kind = "interval"
branch_cuts = [0.0, 0.5, 1.0]
branch_log_weights = [-0.6931471805599453, -0.6931471805599453]
)");
    CHECK(make_stage(interval)->kind() == SystemStage::Kind::Interval);
}

TEST_CASE("config digest is stable and content-sensitive") {
    CHECK(config_hash("abc") == config_hash("abc"));
    CHECK(config_hash("abc") != config_hash("abd"));
    // Pinned FNV-1a 64-bit value for the empty string.
    CHECK(config_hash("") == 14695981039346656037ULL);
    CHECK(fnv1a("abc") == config_hash("abc"));
}

TEST_CASE("text and CSV artifacts round-trip") {
    TempDir tmp;
    auto p = (tmp.path / "nested" / "note.txt").string();
    write_text_file(p, "hello\n");
    CHECK(read_text_file(p) == "hello\n");
    CHECK_THROWS_AS(read_text_file((tmp.path / "absent.txt").string()), IoError);

    auto csv = (tmp.path / "t.csv").string();
    write_csv(csv, {"a", "b"}, {{"1", "2"}, {"3", "4"}});
    CHECK(read_text_file(csv) == "a,b\n1,2\n3,4\n");
    CHECK_THROWS_AS(write_csv(csv, {"a", "b"}, {{"1"}}), ValidationError);
}

TEST_CASE("manifest lists artifacts and detects corruption") {
    TempDir tmp;
    write_text_file((tmp.path / "out.json").string(), "{}\n");
    write_text_file((tmp.path / "data.csv").string(), "x\n1\n");
    auto mp = emit_manifest(tmp.path.string(), kMinimalGauss, 99);
    CHECK(fs::exists(mp));
    auto manifest = read_text_file(mp);
    CHECK(manifest.find("out.json") != std::string::npos);
    CHECK(manifest.find("data.csv") != std::string::npos);
    CHECK(manifest.find(std::to_string(config_hash(kMinimalGauss))) != std::string::npos);
    CHECK(manifest.find("\"seed\": 99") != std::string::npos);

    CHECK(verify_manifest(tmp.path.string()).empty());

    write_text_file((tmp.path / "data.csv").string(), "x\n2\n");  // corrupt
    auto issues = verify_manifest(tmp.path.string());
    REQUIRE(issues.size() == 1);
    CHECK(issues[0].find("data.csv") != std::string::npos);

    fs::remove(tmp.path / "out.json");
    issues = verify_manifest(tmp.path.string());
    CHECK(issues.size() == 2);
}
