#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <sstream>

#include "corpus.hpp"
#include "doctest.h"
#include "finord/cli.hpp"
#include "finord/compile.hpp"
#include "finord/sentences.hpp"
#include "finord/upset.hpp"

using namespace finord;

namespace {

struct Result {
    int code;
    std::string out;
    std::string err;
};

Result run(std::vector<std::string> args) {
    args.insert(args.begin(), "finord");
    std::vector<const char*> argv;
    for (const auto& a : args) argv.push_back(a.c_str());
    std::ostringstream out, err;
    const int code = run_cli(static_cast<int>(argv.size()), argv.data(), out, err);
    return {code, out.str(), err.str()};
}

std::filesystem::path write_lines(const std::string& name, const std::vector<std::string>& lines) {
    auto path = std::filesystem::temp_directory_path() / name;
    std::ofstream f(path);
    for (const auto& l : lines) f << l << '\n';
    return path;
}

} // namespace

TEST_CASE("cli: examples") {
    auto valid = run({"valid", "all2 X. bot sub X"});
    CHECK(valid.code == 0);
    CHECK(valid.out == "valid\n");

    auto spec = run({"spectrum", "ex1 x. true"});
    CHECK(spec.code == 0);
    CHECK(spec.out == "UP(init={};N=1;d=1;res={0})\n");

    auto decide = run({"decide", "--point", "inf:zero+0", to_string(build_rho(4, 4))});
    CHECK(decide.code == 0);
    CHECK(decide.out == "true\n");
}

TEST_CASE("cli: each subcommand") {
    CHECK(run({"eval", "--n", "3", "ex1 x y. x < y"}).out == "true\n");
    CHECK(run({"eval", "--n", "1", "ex1 x y. x < y"}).out == "false\n");
    CHECK(run({"valid", "ex1 x. true"}).out == "invalid: countermodel size 0\n");
    CHECK(run({"normalform", "ex1 x. true"}).out == "N=1 d=1 i_set={1} r_set={1}\n");
    CHECK(run({"decide", "--point", "inf:2^1=1", to_string(build_rho(6, 1))}).out == "undetermined\n");
    CHECK(run({"decide", "--point", "fin:0", "ex1 x. true"}).out == "false\n");
    CHECK(run({"mul", "--points", "fin:1,inf:2^1=0"}).out == "inf:2^1=1\n");
    CHECK(run({"mul", "--points", "fin:2,fin:3,fin:4"}).out == "fin:9\n");
    CHECK(run({"efgame", "--left", "2", "--right", "3", "--rounds", "2"}).out == "spoiler\n");
    CHECK(run({"efgame", "--left", "2", "--right", "3", "--rounds", "1"}).out == "duplicator\n");
    CHECK(run({"compile", "at(X)"}).out == "states=3 tracks=[X]\n");
    auto dot = run({"compile", "--dot", "X << Y"});
    CHECK(dot.code == 0);
    CHECK(dot.out.starts_with("digraph"));
    CHECK(dot.out.ends_with("}\n"));
}

TEST_CASE("cli: exit codes") {
    auto syntax = run({"spectrum", "ex1 x. X(y"});
    CHECK(syntax.code == 1);
    CHECK(syntax.err.find("offset 8") != std::string::npos);

    CHECK(run({"spectrum", "X = X"}).code == 1);
    CHECK(run({"eval", "--n", "2", "X = X"}).code == 1);
    CHECK(run({"decide", "--point", "inf:6^1=1", "true"}).code == 1);
    CHECK(run({"bogus"}).code == 2);
    CHECK(run({}).code == 2);
    CHECK(run({"eval", "true"}).code == 2);
    CHECK(run({"spectrum"}).code == 2);
    CHECK(run({"efgame", "--left", "x", "--right", "1", "--rounds", "1"}).code == 2);
    CHECK(run({"--help"}).code == 0);
}

TEST_CASE("cli: state cap from the environment") {
    const auto rho = to_string(build_rho(4, 1));
    ::setenv("FINORD_STATE_CAP", "3", 1);
    auto capped = run({"spectrum", rho});
    ::setenv("FINORD_STATE_CAP", "nonsense", 1);
    auto bad = run({"spectrum", rho});
    ::unsetenv("FINORD_STATE_CAP");
    auto fine = run({"spectrum", rho});
    CHECK(capped.code == 1);
    CHECK(capped.err.find("state cap") != std::string::npos);
    CHECK(bad.code == 2);
    CHECK(fine.code == 0);
}

TEST_CASE("cli: file mode keeps line order") {
    std::vector<std::string> lines;
    std::string expected;
    for (const auto& e : testing::congruence_sentences()) {
        lines.push_back(to_string(e.sentence));
        expected += to_string(spectrum(parse_formula(lines.back()))) + "\n";
    }
    const auto path = write_lines("finord_cli_lines.txt", lines);
    auto r = run({"spectrum", "--file", path.string()});
    CHECK(r.code == 0);
    CHECK(r.out == expected);

    const auto bad = write_lines("finord_cli_bad.txt", {"true", "", "ex1 x. (", "false"});
    auto b = run({"valid", "--file", bad.string()});
    CHECK(b.code == 1);
    CHECK(b.out == "valid\nerror\ninvalid: countermodel size 0\n");
    CHECK(b.err.starts_with("line 3: "));

    CHECK(run({"spectrum", "--file", "/nonexistent/finord"}).code == 2);
    CHECK(run({"spectrum", "--file", path.string(), "true"}).code == 2);
    std::filesystem::remove(path);
    std::filesystem::remove(bad);
}

TEST_CASE("cli: spectrum output is canonical and reparses") {
    for (const auto& e : testing::corpus()) {
        if (e.name.starts_with("sum:")) continue;
        auto r = run({"spectrum", to_string(e.sentence)});
        REQUIRE(r.code == 0);
        const auto text = r.out.substr(0, r.out.size() - 1);
        const auto s = parse_upset(text, true);
        CHECK(to_string(s) == text);
        const bool valid = run({"valid", to_string(e.sentence)}).out == "valid\n";
        CHECK(valid == (text == "UP(init={};N=0;d=1;res={0})"));
    }
}
