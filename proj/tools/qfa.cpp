// Command-line front end: compute tensor blocks, evaluate entries, run the
// verification suites, and manage the block cache.  Exit code 0 iff every
// check passed; 1 on a failed check or runtime error; 2 on a usage error.

#include <CLI11.hpp>

#include <chrono>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <optional>
#include <sstream>
#include <string>
#include <vector>

#include "qfa/embed.hpp"
#include "qfa/equations.hpp"
#include "qfa/io.hpp"
#include "qfa/jobs.hpp"

namespace fs = std::filesystem;
using namespace qfa;

namespace {

struct CliError : std::runtime_error {
    explicit CliError(const std::string& m) : std::runtime_error(m) {}
};

struct Options {
    std::string command;
    std::vector<long> occupations;
    ParameterSet params = ParameterSet::canonical();
    std::string params_desc = "canonical";
    long window = 1;
    bool window_set = false;
    long max_block = 3;
    std::string mode = "symbolic";
    int jobs = 1;
    std::string cache_dir;
    std::string out_dir;
};

std::string one_line_params(const ParameterSet& p) {
    if (p.is_canonical()) return "canonical";
    std::string s = p.serialize(), out;
    for (char c : s) out += (c == '\n') ? ';' : c;
    while (!out.empty() && out.back() == ';') out.pop_back();
    return out;
}

std::vector<EvalPoint> parse_mode(const std::string& mode) {
    if (mode == "symbolic") return {};
    const std::string prefix = "eval:q=";
    if (mode.rfind(prefix, 0) != 0)
        throw CliError("--mode must be 'symbolic' or 'eval:q=<rat>[,<rat>...]'");
    std::vector<EvalPoint> pts;
    std::stringstream ss(mode.substr(prefix.size()));
    std::string tok;
    while (std::getline(ss, tok, ',')) {
        if (tok.empty()) continue;
        Rat q0;
        try {
            q0 = Rat(tok);
        } catch (const std::exception&) {
            throw CliError("bad rational '" + tok + "' in --mode");
        }
        if (q0 == 0 || q0 == 1 || q0 == -1)
            throw CliError("evaluation point must be a nonzero non-unit rational");
        pts.push_back(EvalPoint::at(q0));
    }
    if (pts.empty()) throw CliError("--mode eval needs at least one point");
    return pts;
}

void resolve_params(Options& opt, const std::string& arg) {
    if (arg == "canonical") {
        opt.params = ParameterSet::canonical();
        opt.params_desc = "canonical";
    } else if (arg.rfind("file=", 0) == 0) {
        try {
            opt.params = ParameterSet::load(arg.substr(5));
        } catch (const std::exception& e) {
            throw CliError(std::string("--params: ") + e.what());
        }
        opt.params_desc = one_line_params(opt.params);
    } else {
        throw CliError("--params must be 'canonical' or 'file=<path>'");
    }
}

// Collects artifacts under --out and writes the run manifest on finish().
struct Sink {
    bool enabled = false;
    fs::path dir;
    RunManifest man;
    std::chrono::steady_clock::time_point t0 = std::chrono::steady_clock::now();

    void init(const Options& opt) {
        man.command = opt.command;
        man.params = opt.params_desc;
        man.mode = opt.mode;
        man.jobs = opt.jobs;
        if (opt.out_dir.empty()) return;
        enabled = true;
        dir = opt.out_dir;
        fs::create_directories(dir);
    }

    void add(const std::string& rel, const std::string& contents) {
        if (!enabled) return;
        fs::path p = dir / rel;
        if (p.has_parent_path()) fs::create_directories(p.parent_path());
        std::ofstream f(p, std::ios::binary | std::ios::trunc);
        if (!f) throw std::runtime_error("cannot write artifact " + p.string());
        f << contents;
        man.add_artifact(rel, contents);
    }

    void finish() {
        if (!enabled) return;
        man.wall_ms = std::chrono::duration_cast<std::chrono::milliseconds>(
                          std::chrono::steady_clock::now() - t0)
                          .count();
        std::ofstream f(dir / "manifest.txt", std::ios::binary | std::ios::trunc);
        f << man.str();
    }
};

void require_symbolic(const Options& opt, const char* cmd) {
    if (opt.mode != "symbolic")
        throw CliError(std::string(cmd) + " runs in symbolic mode only");
}

int report_outcome(const std::vector<CheckReport>& reps, const std::string& rel,
                   Sink& sink) {
    std::string lines;
    bool pass = true;
    for (const CheckReport& r : reps) {
        lines += r.line() + "\n";
        pass = pass && r.pass;
    }
    std::cout << lines;
    sink.add(rel, lines);
    return pass ? 0 : 1;
}

// --- compute-s / compute-j -------------------------------------------------

int cmd_compute(TensorKind kind, const Options& opt, Sink& sink) {
    require_symbolic(opt, "compute");
    const std::string tname = kind_name(kind);
    std::vector<BlockKey> keys;
    for (long P = 0; P <= opt.max_block; ++P)
        for (long Q = 0; Q <= opt.max_block; ++Q) keys.push_back(BlockKey{P, Q});

    std::optional<BlockCache> cache;
    if (!opt.cache_dir.empty()) cache.emplace(opt.cache_dir);

    // One shared tensor when serial (dependency blocks get reused); one tensor
    // per task when parallel (solves are independent and deterministic).
    SymbolicField fld;
    IntertwinerTensor<SymbolicField> shared(kind, opt.params, fld);

    std::vector<std::string> texts(keys.size());
    auto task = [&](long i) {
        const BlockKey key = keys[size_t(i)];
        if (cache) {
            if (auto hit = cache->fetch(tname, key)) {
                try {
                    TensorDump d = parse_dump(*hit);
                    if (d.tensor == tname && d.params == opt.params_desc &&
                        d.blocks.size() == 1 && d.blocks[0].key.P == key.P &&
                        d.blocks[0].key.Q == key.Q) {
                        texts[size_t(i)] = *hit;
                        return;
                    }
                } catch (const std::exception&) {
                    // stale or foreign file: fall through and recompute
                }
            }
        }
        BlockDump bd;
        if (opt.jobs > 1) {
            SymbolicField lf;
            IntertwinerTensor<SymbolicField> local(kind, opt.params, lf);
            bd = dump_block(local, key);
        } else {
            bd = dump_block(shared, key);
        }
        TensorDump one{tname, opt.params_desc, {std::move(bd)}};
        texts[size_t(i)] = one.str();
        if (cache) cache->store(tname, key, texts[size_t(i)]);
    };
    run_parallel(opt.jobs, long(keys.size()), task);

    TensorDump full{tname, opt.params_desc, {}};
    size_t nonzero = 0;
    for (const std::string& t : texts) {
        TensorDump d = parse_dump(t);
        nonzero += d.blocks[0].entries.size();
        full.blocks.push_back(std::move(d.blocks[0]));
    }
    const std::string body = full.str();
    const std::string rel = (kind == TensorKind::S) ? "s_blocks.dump" : "j_blocks.dump";
    if (sink.enabled) {
        sink.add(rel, body);
        std::cout << "wrote " << (sink.dir / rel).string() << " (" << full.blocks.size()
                  << " blocks, " << nonzero << " entries)\n";
    } else {
        std::cout << body;
    }
    return 0;
}

// --- eval-s ------------------------------------------------------------------

int cmd_eval_s(const Options& opt) {
    require_symbolic(opt, "eval-s");
    const std::vector<long>& v = opt.occupations;
    if (v.size() != 6) throw CliError("eval-s needs six occupation numbers: A B C I J K");
    for (long x : v)
        if (x < 0) throw CliError("occupations must be >= 0");
    SymbolicField fld;
    IntertwinerTensor<SymbolicField> T(TensorKind::S, opt.params, fld);
    const MultiIndex out = MultiIndex::of({v[0], v[1], v[2]});
    const MultiIndex in = MultiIndex::of({v[3], v[4], v[5]});
    std::cout << print_coefficient(T.entry(out, in)) << "\n";
    return 0;
}

// --- show-j-example ----------------------------------------------------------

int cmd_show_j_example(const Options& opt, Sink& sink) {
    require_symbolic(opt, "show-j-example");
    if (!opt.params.is_canonical())
        throw CliError("show-j-example compares against the canonical table; "
                       "run it with --params canonical");
    auto qp = [](long e) { return Coefficient::q_pow(e); };
    const Coefficient one = Coefficient::from_int(1);
    const Coefficient minus = Coefficient::from_int(-1);
    struct Row {
        std::array<long, 4> in;
        Coefficient want;
    };
    const std::vector<Row> table = {
        {{3, 0, 0, 3}, qp(8) * (one - qp(6)) * (one - qp(12))},
        {{2, 0, 1, 2}, qp(4) * (one - qp(4)) * (one - qp(2) + qp(4) - qp(6) - qp(10))},
        {{1, 0, 2, 1}, minus * qp(6) * (one - qp(6))},
        {{0, 0, 3, 0}, minus * qp(2) * (one - qp(6))},
        {{1, 1, 0, 2}, qp(2) * (one - qp(8) + qp(14))},
        {{0, 1, 1, 1}, one - qp(4) + qp(10)},
    };
    SymbolicField fld;
    IntertwinerTensor<SymbolicField> T(TensorKind::J, opt.params, fld);
    const MultiIndex out = MultiIndex::of({1, 1, 0, 2});
    CheckReport rep;
    rep.name = "golden-j";
    rep.mode = "symbolic";
    rep.window = 0;
    std::string lines;
    for (const Row& row : table) {
        const MultiIndex in =
            MultiIndex::of({row.in[0], row.in[1], row.in[2], row.in[3]});
        const Coefficient got = T.entry(out, in);
        lines += "J 1,1,0,2|" + index_csv(in, 4) + " -> " + print_coefficient(got) + "\n";
        ++rep.vectors;
        if (!(got == row.want) && rep.pass) {
            rep.pass = false;
            rep.witness = "in=" + index_csv(in, 4);
        }
    }
    lines += rep.line() + "\n";
    std::cout << lines;
    sink.add("golden_j.txt", lines);
    return rep.pass ? 0 : 1;
}

// --- verify-tetrahedron / verify-3d-reflection -------------------------------

int cmd_verify_equation(bool tetra, const Options& opt, Sink& sink) {
    const EquationSpec spec =
        tetra ? EquationSpec::tetrahedron() : EquationSpec::reflection();
    const std::vector<EvalPoint> pts = parse_mode(opt.mode);
    std::vector<CheckReport> reps;
    if (pts.empty()) {
        SymbolicField fld;
        IntertwinerTensor<SymbolicField> s3(TensorKind::S, opt.params, fld);
        std::optional<IntertwinerTensor<SymbolicField>> j4;
        if (!tetra) j4.emplace(TensorKind::J, opt.params, fld);
        EquationVerifier<SymbolicField> ver(fld, s3, j4 ? &*j4 : nullptr);
        reps.push_back(ver.verify(spec, opt.window));
    } else {
        reps.resize(pts.size());
        run_parallel(opt.jobs, long(pts.size()), [&](long i) {
            EvalField fld(pts[size_t(i)]);
            IntertwinerTensor<EvalField> s3(TensorKind::S, opt.params, fld);
            std::optional<IntertwinerTensor<EvalField>> j4;
            if (!tetra) j4.emplace(TensorKind::J, opt.params, fld);
            EquationVerifier<EvalField> ver(fld, s3, j4 ? &*j4 : nullptr);
            reps[size_t(i)] = ver.verify(spec, opt.window);
        });
    }
    return report_outcome(reps, tetra ? "tetrahedron_report.txt" : "reflection_report.txt",
                          sink);
}

// --- verify-symmetries --------------------------------------------------------

int cmd_verify_symmetries(const Options& opt, Sink& sink) {
    const std::vector<EvalPoint> pts = parse_mode(opt.mode);
    std::vector<CheckReport> reps;
    if (pts.empty()) {
        SymbolicField fld;
        IntertwinerTensor<SymbolicField> s3(TensorKind::S, opt.params, fld);
        reps = verify_s_symmetries(s3, opt.max_block);
    } else {
        std::vector<std::vector<CheckReport>> per(pts.size());
        run_parallel(opt.jobs, long(pts.size()), [&](long i) {
            EvalField fld(pts[size_t(i)]);
            IntertwinerTensor<EvalField> s3(TensorKind::S, opt.params, fld);
            per[size_t(i)] = verify_s_symmetries(s3, opt.max_block);
        });
        for (auto& v : per) reps.insert(reps.end(), v.begin(), v.end());
    }
    return report_outcome(reps, "symmetries_report.txt", sink);
}

// --- verify-rtt ----------------------------------------------------------------

int cmd_verify_rtt(const Options& opt, Sink& sink) {
    require_symbolic(opt, "verify-rtt");
    const long cutoff = opt.window_set ? opt.window : 12;
    std::vector<CheckReport> reps;
    for (LieType t : {LieType::B3, LieType::B2, LieType::C2}) {
        const StructureConstants& sc = structure_constants(t);
        const std::string tag = lie_name(t);
        reps.push_back(ybe_report(sc.R, tag));
        reps.push_back(invertibility_report(t, sc.R, tag));
        reps.push_back(metric_line_report(sc, tag).report);
    }
    const StructureConstants& b3 = structure_constants(LieType::B3);
    const StructureConstants& b2 = structure_constants(LieType::B2);
    std::vector<FundamentalRep> reps7, reps5;
    for (int i = 1; i <= 3; ++i) reps7.push_back(build_rep(i, opt.params));
    reps5.push_back(b2_subrep(reps7[1]));
    reps5.push_back(b2_subrep(reps7[2]));
    std::vector<CheckReport> rtt(reps7.size() + reps5.size());
    run_parallel(opt.jobs, long(rtt.size()), [&](long i) {
        if (i < 3)
            rtt[size_t(i)] = rtt_check(reps7[size_t(i)], b3, cutoff);
        else
            rtt[size_t(i)] = rtt_check(reps5[size_t(i) - 3], b2, cutoff);
    });
    reps.insert(reps.end(), rtt.begin(), rtt.end());
    return report_outcome(reps, "rtt_report.txt", sink);
}

// --- verify-embedding ------------------------------------------------------------

int cmd_verify_embedding(const Options& opt, Sink& sink) {
    require_symbolic(opt, "verify-embedding");
    std::ostringstream trace;
    const CheckReport rep = verify_embedding(&trace);
    std::cout << rep.line() << "\n";
    sink.add("embedding_trace.txt", trace.str());
    sink.add("embedding_report.txt", rep.line() + "\n");
    return rep.pass ? 0 : 1;
}

int dispatch(Options& opt, Sink& sink) {
    if (opt.command == "help") {
        std::cout << kUsage;
        return 0;
    }
    if (opt.command == "compute-s") return cmd_compute(TensorKind::S, opt, sink);
    if (opt.command == "compute-j") return cmd_compute(TensorKind::J, opt, sink);
    if (opt.command == "eval-s") return cmd_eval_s(opt);
    if (opt.command == "show-j-example") return cmd_show_j_example(opt, sink);
    if (opt.command == "verify-tetrahedron") return cmd_verify_equation(true, opt, sink);
    if (opt.command == "verify-3d-reflection") return cmd_verify_equation(false, opt, sink);
    if (opt.command == "verify-symmetries") return cmd_verify_symmetries(opt, sink);
    if (opt.command == "verify-rtt") return cmd_verify_rtt(opt, sink);
    if (opt.command == "verify-embedding") return cmd_verify_embedding(opt, sink);
    throw CliError("unknown command '" + opt.command + "'");
}

}  // namespace

int main(int argc, char** argv) {
    try {
        Options opt = parse_options(argc, argv);
        Sink sink;
        sink.init(opt);
        if (opt.command == "verify-tetrahedron" || opt.command == "verify-3d-reflection")
            sink.man.window = opt.window;
        if (opt.command == "verify-rtt")
            sink.man.window = opt.window_set ? opt.window : 12;
        if (opt.command == "compute-s" || opt.command == "compute-j" ||
            opt.command == "verify-symmetries")
            sink.man.max_block = opt.max_block;
        const int rc = dispatch(opt, sink);
        sink.finish();
        return rc;
    } catch (const CliError& e) {
        std::cerr << "error: " << e.what() << "\n\n" << kUsage;
        return 2;
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << "\n";
        return 1;
    }
}
