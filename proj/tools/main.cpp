// Batch front door: reads JSON problem files, dispatches to the solvers, and
// emits deterministic reports. Exit codes: 0 = success with all certificates
// passing, 2 = computed but a certificate failed, 1 = input/usage error.

#include <CLI11.hpp>

#include <fstream>
#include <iostream>

#include "padicnla/runner.hpp"

namespace {

struct CommonFlags {
    std::string out;
    std::int64_t precision = -1;
    std::int64_t horizon = -1;
    std::int64_t cap = -1;
    int threads = -1;
    bool lax = false;
};

void add_common(CLI::App* cmd, CommonFlags& f) {
    cmd->add_option("--precision", f.precision, "working absolute precision (base-p digits)")
        ->envname("PADICNLA_PRECISION");
    cmd->add_option("--horizon", f.horizon, "orbit horizon for manifold computations")
        ->envname("PADICNLA_HORIZON");
    cmd->add_option("--cap", f.cap, "residue enumeration cap")->envname("PADICNLA_CAP");
    cmd->add_option("--threads", f.threads, "worker thread bound for partitioned work")
        ->envname("PADICNLA_THREADS");
    cmd->add_flag("--lax", f.lax, "warn on unknown problem-file fields instead of failing")
        ->envname("PADICNLA_LAX");
    cmd->add_option("--out", f.out, "write the report to this file instead of stdout");
}

padic::run::Options to_options(const CommonFlags& f) {
    padic::run::Options o;
    if (f.precision >= 0) o.precision = f.precision;
    if (f.horizon >= 0) o.horizon = f.horizon;
    if (f.cap >= 0) o.cap = static_cast<std::uint64_t>(f.cap);
    if (f.threads >= 0) o.threads = static_cast<unsigned>(f.threads);
    o.lax = f.lax;
    return o;
}

int emit(const padic::run::Outcome& oc, const std::string& out_path) {
    const std::string text = padic::run::dump_report(oc.report);
    if (out_path.empty()) {
        std::cout << text;
    } else {
        std::ofstream out(out_path);
        if (!out) {
            std::cerr << "error: cannot write report to '" << out_path << "'\n";
            return 1;
        }
        out << text;
    }
    return oc.exit_code;
}

} // namespace

int main(int argc, char** argv) {
    CLI::App app{"exact nonlinear analysis over the p-adic numbers"};
    app.require_subcommand(1);

    const std::vector<std::string> kinds{
        "hyperbolicity", "splitting",       "fixpoint", "invert",   "implicit",
        "parametric-inverse", "stable-manifold", "classify", "calculus-check"};

    struct Sub {
        CLI::App* cmd;
        std::string file;
        CommonFlags flags;
    };
    std::vector<Sub> subs(kinds.size());
    for (std::size_t i = 0; i < kinds.size(); ++i) {
        subs[i].cmd = app.add_subcommand(kinds[i], "run a '" + kinds[i] + "' problem file");
        subs[i].cmd->add_option("problem", subs[i].file, "problem file (JSON)")->required();
        add_common(subs[i].cmd, subs[i].flags);
    }

    auto* st = app.add_subcommand("selftest", "run the bundled corpus and invariant suites");
    std::string level = "quick";
    std::string corpus = "corpus";
    CommonFlags st_flags;
    st->add_option("--level", level, "quick | full")->envname("PADICNLA_SELFTEST_LEVEL");
    st->add_option("--corpus", corpus, "corpus directory")->envname("PADICNLA_CORPUS");
    add_common(st, st_flags);

    CLI11_PARSE(app, argc, argv);

    try {
        for (std::size_t i = 0; i < kinds.size(); ++i) {
            if (!subs[i].cmd->parsed()) continue;
            const auto oc = padic::run::run_problem_file(subs[i].file, kinds[i],
                                                         to_options(subs[i].flags));
            return emit(oc, subs[i].flags.out);
        }
        if (st->parsed()) {
            const auto oc = padic::run::run_selftest(level, corpus, to_options(st_flags));
            return emit(oc, st_flags.out);
        }
    } catch (const padic::InputError& ex) {
        std::cerr << "error: " << ex.what() << "\n";
        return 1;
    } catch (const padic::Error& ex) {
        std::cerr << "error: " << ex.what() << "\n";
        return 2;
    } catch (const std::exception& ex) {
        std::cerr << "error: " << ex.what() << "\n";
        return 1;
    }
    return 1;
}
