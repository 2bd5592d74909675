// Stable text formats (dumps, hashes, cache, manifest), the parallel task
// runner, and end-to-end determinism of the command-line binary.

#include <catch2/catch_amalgamated.hpp>

#include <atomic>
#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <random>

#include "qfa/io.hpp"
#include "qfa/jobs.hpp"

using namespace qfa;
namespace fs = std::filesystem;

namespace {

fs::path fresh_dir(const std::string& tag) {
    static std::mt19937_64 rng(std::random_device{}());
    fs::path p = fs::temp_directory_path() /
                 ("qfa_" + tag + "_" + std::to_string(rng()));
    fs::remove_all(p);
    fs::create_directories(p);
    return p;
}

std::string slurp(const fs::path& p) {
    std::ifstream in(p, std::ios::binary);
    REQUIRE(in.good());
    std::stringstream ss;
    ss << in.rdbuf();
    return ss.str();
}

}  // namespace

TEST_CASE("content hashes are stable and sensitive") {
    // FNV-1a 64-bit test vectors
    CHECK(content_hash("") == "cbf29ce484222325");
    CHECK(content_hash("a") == "af63dc4c8601ec8c");
    CHECK(content_hash("foobar") == "85944171f73967e8");
    CHECK(content_hash("format=1\n") != content_hash("format=1"));
}

TEST_CASE("tensor dumps round-trip bit-exactly") {
    SymbolicField fld;
    IntertwinerTensor<SymbolicField> s3(TensorKind::S, ParameterSet::canonical(), fld);
    const std::vector<BlockKey> keys = {{0, 0}, {1, 1}, {2, 1}, {1, 2}};
    TensorDump d = dump_tensor(s3, keys, "canonical");
    const std::string text = d.str();

    TensorDump back = parse_dump(text);
    CHECK(back.tensor == "S");
    CHECK(back.params == "canonical");
    REQUIRE(back.blocks.size() == keys.size());
    for (size_t b = 0; b < keys.size(); ++b) {
        CHECK(back.blocks[b].key.P == keys[b].P);
        CHECK(back.blocks[b].key.Q == keys[b].Q);
        CHECK(back.blocks[b].entries == d.blocks[b].entries);
    }
    CHECK(back.str() == text);

    SECTION("entry polynomials re-parse to the stored coefficients") {
        const auto& blk = s3.block(BlockKey{1, 1});
        for (const auto& [out, in, poly] : back.blocks[1].entries) {
            Coefficient c = parse_coefficient(poly);
            CHECK(print_coefficient(c) == poly);
        }
        CHECK(back.blocks[1].entries.size() == 4);  // dense 2x2 block
        (void)blk;
    }
}

TEST_CASE("the frozen dump grammar is what the serializer emits") {
    SymbolicField fld;
    IntertwinerTensor<SymbolicField> s3(TensorKind::S, ParameterSet::canonical(), fld);
    TensorDump d = dump_tensor(s3, {{1, 1}}, "canonical");
    CHECK(d.str() ==
          "format=1\n"
          "# tensor: S\n"
          "# params: canonical\n"
          "# block: P=1,Q=1\n"
          "0,1,0|0,1,0 -> -1*q^2\n"
          "0,1,0|1,0,1 -> 1 - 1*q^4\n"
          "1,0,1|0,1,0 -> 1\n"
          "1,0,1|1,0,1 -> 1*q^2\n");
}

TEST_CASE("the dump parser rejects malformed input") {
    CHECK_THROWS_AS(parse_dump("# tensor: S\n"), std::invalid_argument);
    CHECK_THROWS_AS(parse_dump("format=2\n# tensor: S\n# params: canonical\n"),
                    std::invalid_argument);
    CHECK_THROWS_AS(parse_dump("format=1\n# tensor: X\n# params: canonical\n"),
                    std::invalid_argument);
    CHECK_THROWS_AS(parse_dump("format=1\n# tensor: S\n# params: canonical\n"
                               "0,0,0|0,0,0 -> 1\n"),
                    std::invalid_argument);  // entry before a block header
    CHECK_THROWS_AS(parse_dump("format=1\n# tensor: S\n# params: canonical\n"
                               "# block: P=0,Q=0\n0,0,0 -> 1\n"),
                    std::invalid_argument);  // no index separator
    CHECK_THROWS_AS(parse_dump("format=1\n# tensor: S\n# params: canonical\n"
                               "# block: P=0,Q=0\n0,0,0|0,0,0 -> 1*z^2\n"),
                    std::invalid_argument);  // bad polynomial
    CHECK_THROWS_AS(parse_dump("format=1\n# tensor: S\n"), std::invalid_argument);
}

TEST_CASE("the block cache stores, fetches, and shrugs off corruption") {
    const fs::path dir = fresh_dir("cache");
    const std::string text =
        "format=1\n# tensor: S\n# params: canonical\n# block: P=1,Q=1\n"
        "0,1,0|0,1,0 -> -1*q^2\n";
    {
        BlockCache cache(dir);
        CHECK_FALSE(cache.fetch("S", BlockKey{1, 1}).has_value());
        cache.store("S", BlockKey{1, 1}, text);
        auto hit = cache.fetch("S", BlockKey{1, 1});
        REQUIRE(hit.has_value());
        CHECK(*hit == text);
    }
    SECTION("a new instance reloads the manifest") {
        BlockCache cache(dir);
        auto hit = cache.fetch("S", BlockKey{1, 1});
        REQUIRE(hit.has_value());
        CHECK(*hit == text);
        CHECK_FALSE(cache.fetch("S", BlockKey{2, 1}).has_value());
        CHECK_FALSE(cache.fetch("J", BlockKey{1, 1}).has_value());
    }
    SECTION("tampered file contents miss instead of failing") {
        {
            std::ofstream f(dir / "S" / "1_1.blk", std::ios::app | std::ios::binary);
            f << "tampered\n";
        }
        BlockCache cache(dir);
        CHECK_FALSE(cache.fetch("S", BlockKey{1, 1}).has_value());
        cache.store("S", BlockKey{1, 1}, text);  // store repairs the slot
        auto hit = cache.fetch("S", BlockKey{1, 1});
        REQUIRE(hit.has_value());
        CHECK(*hit == text);
    }
    SECTION("a deleted file misses") {
        fs::remove(dir / "S" / "1_1.blk");
        BlockCache cache(dir);
        CHECK_FALSE(cache.fetch("S", BlockKey{1, 1}).has_value());
    }
    fs::remove_all(dir);
}

TEST_CASE("the run manifest lists artifacts with their content hashes") {
    RunManifest m;
    m.command = "compute-s";
    m.params = "canonical";
    m.max_block = 2;
    m.mode = "symbolic";
    m.jobs = 3;
    m.add_artifact("s_blocks.dump", "hello");
    m.add_artifact("report.txt", "world");
    m.wall_ms = 17;
    CHECK(m.str() ==
          "format=1\n"
          "command=compute-s\n"
          "params=canonical\n"
          "max_block=2\n"
          "mode=symbolic\n"
          "jobs=3\n"
          "artifact=s_blocks.dump hash=" + content_hash("hello") + "\n"
          "artifact=report.txt hash=" + content_hash("world") + "\n"
          "wall_ms=17\n");
}

TEST_CASE("the parallel runner covers every task exactly once") {
    const long n = 500;
    std::vector<std::atomic<int>> hits(n);
    for (auto& h : hits) h = 0;
    std::vector<long> results(size_t(n), -1);
    run_parallel(4, n, [&](long i) {
        hits[size_t(i)].fetch_add(1);
        results[size_t(i)] = i * i;
    });
    for (long i = 0; i < n; ++i) {
        CHECK(hits[size_t(i)].load() == 1);
        CHECK(results[size_t(i)] == i * i);
    }

    SECTION("serial fallback behaves identically") {
        std::vector<long> serial(size_t(n), -1);
        run_parallel(1, n, [&](long i) { serial[size_t(i)] = i * i; });
        CHECK(serial == results);
    }
    SECTION("task failures are rethrown after the pool drains") {
        CHECK_THROWS_AS(run_parallel(4, 100,
                                     [&](long i) {
                                         if (i == 37)
                                             throw std::runtime_error("task 37");
                                     }),
                        std::runtime_error);
    }
}

#ifdef QFA_CLI_PATH
namespace {

int run_cli(const std::string& args, const fs::path& stdout_file) {
    const std::string cmd =
        std::string(QFA_CLI_PATH) + " " + args + " > " + stdout_file.string() + " 2>&1";
    int rc = std::system(cmd.c_str());
    REQUIRE(rc != -1);
    return WEXITSTATUS(rc);
}

}  // namespace

TEST_CASE("the command-line binary is deterministic end to end") {
    const fs::path work = fresh_dir("cli");
    const fs::path outlog = work / "stdout.txt";

    SECTION("entry evaluation prints the closed-form value") {
        CHECK(run_cli("eval-s 0 1 1 0 1 1", outlog) == 0);
        CHECK(slurp(outlog) == "-1*q^4\n");
        CHECK(run_cli("eval-s 1 0 0 0 0 1", outlog) == 0);
        CHECK(slurp(outlog) == "0\n");
    }
    SECTION("identical invocations produce identical dumps, warm or cold") {
        const std::string base = "compute-s --max-block 2 --cache " +
                                 (work / "cache").string() + " --out ";
        CHECK(run_cli(base + (work / "run1").string(), outlog) == 0);
        CHECK(run_cli(base + (work / "run2").string(), outlog) == 0);
        const std::string d1 = slurp(work / "run1" / "s_blocks.dump");
        const std::string d2 = slurp(work / "run2" / "s_blocks.dump");
        CHECK(d1 == d2);
        CHECK(parse_dump(d1).blocks.size() == 9);

        // manifests agree except for wall time
        auto strip_wall = [](std::string s) {
            size_t p = s.rfind("wall_ms=");
            REQUIRE(p != std::string::npos);
            return s.substr(0, p);
        };
        CHECK(strip_wall(slurp(work / "run1" / "manifest.txt")) ==
              strip_wall(slurp(work / "run2" / "manifest.txt")));

        // the cache holds one file per block plus its manifest
        CHECK(fs::exists(work / "cache" / "S" / "2_2.blk"));
        CHECK(fs::exists(work / "cache" / "cache_manifest.txt"));
    }
    SECTION("verification commands report PASS and exit zero") {
        CHECK(run_cli("verify-tetrahedron --window 1", outlog) == 0);
        const std::string line = slurp(outlog);
        CHECK(line ==
              "CHECK tetrahedron vectors=64 window=1 mode=symbolic result=PASS\n");
    }
    SECTION("usage errors exit with code 2") {
        CHECK(run_cli("frobnicate", outlog) == 2);
        CHECK(run_cli("eval-s 1 2 3", outlog) == 2);
        CHECK(run_cli("compute-s --mode eval:q=2/3", outlog) == 2);
        CHECK(run_cli("verify-tetrahedron --window x", outlog) == 2);
    }
    fs::remove_all(work);
}
#endif
