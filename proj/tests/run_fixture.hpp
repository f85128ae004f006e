#pragma once

#include <string>

#include "support.hpp"
#include "vsp/runner.hpp"
#include "vsp/text.hpp"

namespace vsp::test {

// Harness config with one mock-backed profile and a private cache.
inline HarnessConfig mock_harness(const TempDir& dir, const std::string& script, std::size_t max_tokens = 16385,
                                  std::size_t max_parallel = 1, const std::string& name = "mock-model") {
    const std::string text = "[paths]\n"
                             "cache_dir = \"" + (dir / "cache").string() + "\"\n"
                             "exemplar_dir = \"" + exemplar_dir().string() + "\"\n"
                             "\n"
                             "[model." + name + "]\n"
                             "endpoint = \"mock://" + (data_dir() / "mock" / script).string() + "\"\n"
                             "max_tokens = " + std::to_string(max_tokens) + "\n"
                             "max_parallel = " + std::to_string(max_parallel) + "\n";
    write_file(dir / "vsp.toml", text);
    return load_harness_config(dir / "vsp.toml");
}

inline RunConfig sard_run(Task task, Strategy strategy, const std::filesystem::path& out_dir,
                          const std::string& model = "mock-model") {
    RunConfig c;
    c.task = task;
    c.strategy = strategy;
    c.dataset = data_dir() / "sard8";
    c.origin = Origin::Sard;
    c.model = model;
    c.seed = 7;
    c.out_dir = out_dir;
    c.timestamp = "20240101T000000Z";
    return c;
}

// Every regular file under a run directory, keyed by relative path.
inline std::map<std::string, std::string> run_files(const std::filesystem::path& dir) {
    std::map<std::string, std::string> out;
    for (const auto& e : std::filesystem::recursive_directory_iterator(dir)) {
        if (e.is_regular_file()) out[std::filesystem::relative(e.path(), dir).string()] = read_file(e.path());
    }
    return out;
}

}  // namespace vsp::test
