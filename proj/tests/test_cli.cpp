#include <doctest.h>

#include <array>
#include <cstdio>
#include <fstream>
#include <sys/wait.h>

#include <json.hpp>

#include "generators.hpp"

namespace {

struct Run {
    int status = -1;
    std::string out;
};

Run lint(const std::string& args, bool merge_stderr = false)
{
    std::string cmd = std::string(GRAFCET_LINT_EXE) + " " + args + (merge_stderr ? " 2>&1" : " 2>/dev/null");
    Run r;
    FILE* p = popen(cmd.c_str(), "r");
    REQUIRE(p);
    std::array<char, 4096> buf{};
    while (auto n = fread(buf.data(), 1, buf.size(), p))
        r.out.append(buf.data(), n);
    int raw = pclose(p);
    r.status = WIFEXITED(raw) ? WEXITSTATUS(raw) : -1;
    return r;
}

std::string corpus(const char* name)
{
    return testsupport::corpus_path(std::string(name) + ".grafcet.json");
}

std::string temp_file(const std::string& name, const std::string& content)
{
    std::string path = "/tmp/grafcet_cli_" + name;
    std::ofstream(path) << content;
    return path;
}

}  // namespace

TEST_CASE("exit status follows the worst finding")
{
    CHECK(lint("analyze " + corpus("fig5")).status == 0);
    CHECK(lint("analyze " + corpus("g7_g8")).status == 1);
    CHECK(lint("analyze " + corpus("g4")).status == 1);
    CHECK(lint("analyze --fail-on error " + corpus("g4")).status == 0);
    CHECK(lint("analyze --fail-on error " + corpus("g1")).status == 1);
}

TEST_CASE("usage, I/O and parse errors exit with 2")
{
    CHECK(lint("analyze /nonexistent/file.grafcet.json").status == 2);
    CHECK(lint("").status == 2);
    CHECK(lint("analyze --format yaml " + corpus("fig5")).status == 2);
    CHECK(lint("analyze " + temp_file("broken.json", "{\"name\": ")).status == 2);
    CHECK(lint("analyze --queries /nonexistent.json " + corpus("fig5")).status == 2);
}

TEST_CASE("parse errors name the file, the kind and the JSON pointer")
{
    auto path = temp_file("unknown.json", R"({"name": "x", "variables": [], "partials": [{"id": "G",
        "steps": [{"id": "1", "initial": true}],
        "transitions": [{"id": "t", "from": ["1"], "to": ["1"], "cond": "ghost"}], "actions": []}]})");
    auto r = lint("analyze " + path, true);
    CHECK(r.status == 2);
    CHECK(r.out.find(path + ": semantic error: /partials/0/transitions/0/cond") == 0);
    CHECK(r.out.find("unknown identifier 'ghost'") != std::string::npos);
    CHECK(r.out.find("error error") == std::string::npos);
}

TEST_CASE("JSON output is deterministic without timings")
{
    auto a = lint("analyze --format json --no-timings " + corpus("g_rit"));
    auto b = lint("analyze --format json --no-timings --jobs 3 " + corpus("g_rit"));
    CHECK(a.status == 0);
    CHECK(a.out == b.out);
    auto j = nlohmann::json::parse(a.out);
    CHECK(j["schema"] == "grafcet-lint/report/1");
    CHECK_FALSE(j.contains("timings_ms"));
    CHECK(nlohmann::json::parse(lint("analyze --format json " + corpus("g_rit")).out).contains("timings_ms"));
}

TEST_CASE("invariant dump for Fig. 5")
{
    auto r = lint("analyze --format json --dump-invariants --no-timings " + corpus("fig5"));
    auto j = nlohmann::json::parse(r.out);
    const auto& inv = j["partials"][0]["invariants"];
    CHECK(inv["s"][0]["vector"] == nlohmann::json({2, 2, 1, 1, 1}));
    CHECK(inv["t"].empty());
    CHECK(inv["matrix"]["entries"].size() == 5);
}

TEST_CASE("naive mode and sidecar queries")
{
    CHECK(lint("analyze " + corpus("g_rit")).status == 0);
    auto naive = lint("analyze --naive " + corpus("g_rit"));
    CHECK(naive.status == 1);
    CHECK(naive.out.find("query-violation") != std::string::npos);

    auto q = temp_file("queries.json",
                       R"([{"name": "same", "kind": "never-concurrent", "a": "G.s1", "b": "G.s2"}])");
    auto r = lint("analyze --queries " + q + " " + corpus("fig5"));
    CHECK(r.status == 1);
    CHECK(r.out.find("same") != std::string::npos);

    auto bad = temp_file("bad_queries.json",
                         R"([{"name": "x", "kind": "never-concurrent", "a": "G.s1", "b": "G.nowhere"}])");
    CHECK(lint("analyze --queries " + bad + " " + corpus("fig5")).status == 2);
}

TEST_CASE("oracle facts can be attached")
{
    auto r = lint("analyze --format json --no-timings --oracle " + corpus("fig1"));
    auto j = nlohmann::json::parse(r.out);
    CHECK(j["oracle"]["complete"] == true);
}

TEST_CASE("version")
{
    auto r = lint("--version");
    CHECK(r.status == 0);
    CHECK(r.out.find("1.0.0") != std::string::npos);
}
