#pragma once

#include <optional>
#include <string>

#include "padicnla/json_io.hpp"

namespace padic::run {

/// Option overrides: command-line beats environment beats problem file.
struct Options {
    std::optional<std::int64_t> precision;
    std::optional<std::int64_t> horizon;
    std::optional<std::uint64_t> cap;
    std::optional<unsigned> threads;
    bool lax = false;
};

/// Exit-code contract: 0 = success with all certificates passing,
/// 2 = computed but a certificate failed (non-contraction, hyperbolicity
/// violated, expectation mismatch, escape), 1 = input or usage error.
struct Outcome {
    io::Json report;
    int exit_code = 0;
};

/// Dispatches a problem by its "kind" field; command, when non-empty, must
/// match it. Reports are deterministic: identical inputs yield byte-identical
/// payloads (run metadata is segregated under "meta").
Outcome run_problem_json(const io::Json& problem, const std::string& command,
                         const Options& opts, const std::string& source_name);
Outcome run_problem_file(const std::string& path, const std::string& command,
                         const Options& opts);

/// Runs the bundled corpus and the invariant suites at the requested depth
/// ("quick" or "full"); summarizes pass/fail per feature area.
Outcome run_selftest(const std::string& level, const std::string& corpus_dir,
                     const Options& opts);

std::string dump_report(const io::Json& report);

} // namespace padic::run
