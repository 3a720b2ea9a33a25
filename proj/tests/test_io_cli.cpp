#include <catch2/catch_amalgamated.hpp>

#include <loopw/io.hpp>

#include <array>
#include <cstdio>
#include <cstdlib>
#include <fstream>
#include <sstream>
#include <string>

using namespace loopw;

namespace {

std::string read_file(const std::string& path) {
    std::ifstream in(path, std::ios::binary);
    REQUIRE(in.good());
    std::ostringstream buf;
    buf << in.rdbuf();
    return buf.str();
}

struct CliRun {
    int exit = -1;
    std::string out;
};

/// Run the tool named by the LOOPW_CLI environment variable and capture
/// stdout (stderr is left alone so failures stay visible in test logs).
CliRun run_cli(const std::string& args) {
    const char* cli = std::getenv("LOOPW_CLI");
    REQUIRE(cli != nullptr);
    std::string cmd = "\"" + std::string(cli) + "\" " + args + " 2>/dev/null";
    FILE* pipe = popen(cmd.c_str(), "r");
    REQUIRE(pipe != nullptr);
    CliRun res;
    std::array<char, 4096> chunk{};
    std::size_t n = 0;
    while ((n = fread(chunk.data(), 1, chunk.size(), pipe)) > 0)
        res.out.append(chunk.data(), n);
    int status = pclose(pipe);
    res.exit = WIFEXITED(status) ? WEXITSTATUS(status) : -1;
    return res;
}

std::string tmp_path(const std::string& name) {
    return "/tmp/loopw_io_test_" + name;
}

} // namespace

TEST_CASE("polynomial serialization round-trips with canonical term order") {
    Poly p = Rat(3, 2) * poly_D() * poly_D() * poly_lam() - poly_mu() +
             poly_const(Rat(7)) + Rat(-1, 5) * poly_lam();
    json j = poly_to_json(p);
    REQUIRE(j.is_array());
    REQUIRE(j.size() == 4);
    // terms ordered by (d, l, m) ascending
    CHECK(j[0] == json({{"coeff", "7"}, {"d", 0}, {"l", 0}, {"m", 0}}));
    CHECK(j[1] == json({{"coeff", "-1"}, {"d", 0}, {"l", 0}, {"m", 1}}));
    CHECK(j[2] == json({{"coeff", "-1/5"}, {"d", 0}, {"l", 1}, {"m", 0}}));
    CHECK(j[3] == json({{"coeff", "3/2"}, {"d", 2}, {"l", 1}, {"m", 0}}));
    CHECK(poly_from_json(j) == p);
    CHECK(poly_to_json(Poly{}) == json::array());
    CHECK(poly_from_json(json::array()).is_zero());

    // Exact byte form of a one-term polynomial.
    CHECK(poly_to_json(poly_lam()).dump() == R"([{"coeff":"1","d":0,"l":1,"m":0}])");

    SECTION("malformed records are rejected") {
        CHECK_THROWS_AS(poly_from_json(json::object()), std::invalid_argument);
        json bad = json::array();
        bad.push_back({{"coeff", "1.5"}, {"d", 0}, {"l", 0}, {"m", 0}});
        CHECK_THROWS_AS(poly_from_json(bad), std::invalid_argument);
    }
}

TEST_CASE("rational literals accept integers and p/q strings only") {
    CHECK(rat_from_json(json("5/7")) == Rat(5, 7));
    CHECK(rat_from_json(json("-12")) == Rat(-12));
    CHECK(rat_from_json(json(9)) == Rat(9));
    CHECK_THROWS_AS(rat_from_json(json("1//2")), std::invalid_argument);
    CHECK_THROWS_AS(rat_from_json(json("0.5")), std::invalid_argument);
    CHECK_THROWS_AS(rat_from_json(json(1.5)), std::invalid_argument);
    CHECK_THROWS_AS(rat_from_json(json("1/0")), std::invalid_argument);
}

TEST_CASE("generator combinations round-trip") {
    LambdaElement e;
    e.add_part(gen_L(2), poly_D() + Rat(2) * poly_lam());
    e.add_part(gen_I(-1), poly_const(Rat(5, 3)));
    LambdaElement back = combo_from_json(combo_to_json(e));
    LambdaElement diff = back;
    diff += -e;
    CHECK(diff.is_zero());
    CHECK_THROWS_AS(gen_from_json(json({{"family", "X"}, {"index", 0}})),
                    std::invalid_argument);
}

TEST_CASE("bracket tables round-trip and stay checkable") {
    TableSpec t = clw_table_spec(Rat(5, 7), IndexWindow::symmetric(2));
    json j = table_to_json(t);
    TableSpec back = table_from_json(j);
    REQUIRE(back.grading == t.grading);
    REQUIRE(back.entries.size() == t.entries.size());
    for (const auto& [pr, val] : t.entries) {
        LambdaElement diff = back.entries.at(pr);
        diff += -val;
        CHECK(diff.is_zero());
    }

    Algebra alg = table_to_algebra(back);
    IndexWindow w = IndexWindow::symmetric(2);
    CHECK(check_skew(alg, w).pass);
    CHECK(check_jacobi(alg, w).pass);
    CHECK(check_graded(alg, w).pass);

    SECTION("a corrupted entry is caught by the axiom checks") {
        TableSpec bad = back;
        bad.entries[{gen_L(0), gen_L(0)}] = element(gen_L(0), poly_D() + Rat(3) * poly_lam());
        CHECK_FALSE(check_skew(table_to_algebra(bad), w).pass);
    }

    SECTION("undeclared generators and duplicates are rejected") {
        json orphan = j;
        orphan["brackets"][0]["left"]["index"] = 99;
        CHECK_THROWS_AS(table_from_json(orphan), std::invalid_argument);
        json dup = j;
        dup["generators"].push_back(dup["generators"][0]);
        CHECK_THROWS_AS(table_from_json(dup), std::invalid_argument);
    }
}

TEST_CASE("cocycle family files round-trip and reject unknown slots") {
    CocycleFamily fam;
    fam.A = {{0, Rat(1)}, {2, Rat(-1, 3)}};
    fam.Bp = {{-1, Rat(4)}};
    fam.Cp = {{1, Rat(7, 2)}};
    json j = cocycle_family_to_json(fam);
    CocycleFamily back = cocycle_family_from_json(j);
    CHECK(back.A == fam.A);
    CHECK(back.Bp == fam.Bp);
    CHECK(back.Cp == fam.Cp);
    CHECK(back.B.empty());
    CHECK(cocycle_family_to_json(back) == j);

    json bad = j;
    bad["Z"] = json::array();
    CHECK_THROWS_AS(cocycle_family_from_json(bad), std::invalid_argument);
}

TEST_CASE("reports are byte-identical across repeated runs") {
    std::string f1 = tmp_path("rep1.json"), f2 = tmp_path("rep2.json");
    std::string args = "derivations --b 0 --window 3 --interior 1 --out ";
    CliRun r1 = run_cli(args + f1);
    CliRun r2 = run_cli(args + f2);
    REQUIRE(r1.exit == 0);
    REQUIRE(r2.exit == 0);
    std::string b1 = read_file(f1), b2 = read_file(f2);
    CHECK(b1 == b2);
    CHECK(r1.out == b1); // stdout carries exactly the report bytes
    CHECK(b1.back() == '\n');
    std::remove(f1.c_str());
    std::remove(f2.c_str());
}

TEST_CASE("exit codes follow the pass/discrepancy/usage contract") {
    CHECK(run_cli("verify-algebra --b 0 --window 4").exit == 0);
    CHECK(run_cli("verify-distribution --a 2 --b 1 --x 1 --modes 6 --window 3").exit == 1);
    CHECK(run_cli("rank1 --b 0 --delta 1 --alpha 0 --c 1 --d 0 --window 3").exit == 0);

    // solver honest answer departing from the closed form: exit 1 plus note
    std::string rep_path = tmp_path("discrepancy.json");
    CliRun disc = run_cli(
        "ext --dir mc --b 3 --delta 1 --alpha 0 --beta 0 --c 1 --d 0 --out " + rep_path);
    CHECK(disc.exit == 1);
    json rep = json::parse(read_file(rep_path));
    CHECK(rep.at("dimensions").at("dim_ext") == 1);
    CHECK(rep.at("dimensions").at("predicted") == 0);
    REQUIRE(rep.at("notes").size() == 1);
    CHECK(rep.at("notes")[0].get<std::string>().find("differs from the closed-form") !=
          std::string::npos);
    CHECK(rep.at("exit") == 1);
    std::remove(rep_path.c_str());

    // usage errors
    CHECK(run_cli("no-such-command").exit == 2);
    CHECK(run_cli("verify-algebra --b 1//2").exit == 2);
    CHECK(run_cli("derivations --b 0 --window 2 --interior 5").exit == 2);
    CHECK(run_cli("rank1 --b 0 --c 0").exit == 2);
    CHECK(run_cli("ext --dir sideways --b 0").exit == 2);
    CHECK(run_cli("central --b 0 --family /nonexistent/family.json").exit == 2);
    CHECK(run_cli("--help").exit == 0);
}

TEST_CASE("the pinned command lines give the pinned outcomes") {
    std::string rep_path = tmp_path("pinned.json");
    CliRun r = run_cli(
        "ext --dir mc --b 0 --delta 1 --alpha 0 --beta 0 --c 1 --d 0 "
        "--window 4 --interior 2 --ldeg 4 --out " + rep_path);
    CHECK(r.exit == 0);
    json rep = json::parse(read_file(rep_path));
    CHECK(rep.at("dimensions").at("dim_ext") == 2);
    CHECK(rep.at("verdicts").at("matches_predicted") == true);
    CHECK(rep.at("notes").empty());
    std::remove(rep_path.c_str());
}

TEST_CASE("shipped sample inputs load and pass their checks") {
    // The build system pins the sample directory; relative layouts are the
    // fallback so the binary also runs by hand from the repo or build root.
    auto locate = [](const std::string& rel) {
        for (const std::string& prefix :
             {std::string(LOOPW_DATA_DIR), std::string("../data/"), std::string("data/")}) {
            std::ifstream probe(prefix + rel);
            if (probe.good()) return prefix + rel;
        }
        FAIL("sample file not found: " + rel);
        return rel;
    };
    std::string table = locate("clw_b0_window2.json");
    std::string family = locate("cocycle_family_sample.json");

    CHECK(run_cli("verify-algebra --table " + table + " --window 2").exit == 0);
    CliRun fam = run_cli("central --b 1 --family " + family);
    CHECK(fam.exit == 0);
    json rep = json::parse(fam.out);
    CHECK(rep.at("verdicts").at("family_cocycle").at("pass") == true);

    // The file parsers agree with the library constructors.
    TableSpec t = table_from_json(load_json(table));
    TableSpec fresh = clw_table_spec(Rat(0), IndexWindow::symmetric(2));
    CHECK(table_to_json(t) == table_to_json(fresh));
}
